//! Turn a region's published monthly wind/temperature rows into smooth
//! annual loading curves and show the reconstruction.
//!
//! ```bash
//! cargo run --release --example synthesize_loading
//! ```

use powerline::loading::MonthlySeries;
use powerline::scenario::table_rows;
use powerline::{dft_coefficients, evaluate_loading, Region};

fn main() {
    let region = Region::AmarilloTx;
    let rows = table_rows(region);
    println!("=== Fourier synthesis of the {region:?} annual cycles ===\n");

    for (label, series, unit) in [
        ("wind", &rows.wind, "ft/s"),
        ("temperature", &rows.temperature, "K"),
    ] {
        let loading = dft_coefficients(series);
        println!("{label}: mean = {:.3} {unit}", loading.mean());
        for (n, (a, b)) in loading
            .cos_coeffs()
            .iter()
            .zip(loading.sin_coeffs())
            .enumerate()
        {
            println!("  harmonic {}: cos {a:+.4}, sin {b:+.4}", n + 1);
        }

        println!("  month  published  reconstructed");
        let mut worst: f64 = 0.0;
        for (m, &v) in series.values().iter().enumerate() {
            let t = MonthlySeries::sample_instant(m);
            let r = evaluate_loading(&loading, t);
            worst = worst.max((r - v).abs() / v);
            if m % 3 == 0 {
                println!("  {:5}  {v:9.2}  {r:13.6}", m + 1);
            }
        }
        println!("  worst relative reconstruction error: {worst:.2e}\n");

        println!("  mid-month samples of the continuous curve:");
        for k in 0..4 {
            let t = (3 * k) as f64 / 12.0 + 1.0 / 24.0;
            println!("    t = {t:.3} yr -> {:.3} {unit}", evaluate_loading(&loading, t));
        }
        println!();
    }
}
