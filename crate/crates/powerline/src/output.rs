//! CSV and manifest writers.
//!
//! Machine output is plain CSV; every run directory gets exactly one TOML
//! manifest describing what produced the files. CSV bodies contain no
//! timestamps or environment data, so identical configurations reproduce
//! them byte for byte.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::simulation::{failure_indicator, SimulationConfig, SimulationResult};

/// Formats one f64 cell: shortest representation that round-trips.
fn cell(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v}")
    }
}

/// Writes a CSV file from a header and row iterator.
pub fn write_csv<I>(path: &Path, header: &str, rows: I) -> Result<()>
where
    I: IntoIterator<Item = Vec<f64>>,
{
    let mut body = String::new();
    body.push_str(header);
    body.push('\n');
    for row in rows {
        let mut first = true;
        for v in row {
            if !first {
                body.push(',');
            }
            first = false;
            let _ = write!(body, "{}", cell(v));
        }
        body.push('\n');
    }
    fs::write(path, body)?;
    Ok(())
}

/// `series.csv` for one deterministic run:
/// `t,theta_max,phi_max,v_drop,tension,h_B`.
pub fn write_series_csv(
    dir: &Path,
    result: &SimulationResult,
    cfg: &SimulationConfig,
) -> Result<PathBuf> {
    let h_b = failure_indicator(result, cfg);
    let path = dir.join("series.csv");
    let rows = (0..result.times.len()).map(|k| {
        vec![
            result.times[k],
            result.theta_max[k],
            result.phi_max[k],
            result.v_drop[k],
            result.tension[k],
            h_b[k],
        ]
    });
    write_csv(&path, "t,theta_max,phi_max,v_drop,tension,h_B", rows)?;
    Ok(path)
}

/// `snapshots.csv`: full field states at the recorded marks, one row per
/// node per mark: `t,x,u,phi,F,H,theta,V`.
pub fn write_snapshots_csv(
    dir: &Path,
    result: &SimulationResult,
    node_coords: &[f64],
) -> Result<PathBuf> {
    let path = dir.join("snapshots.csv");
    let mut rows = Vec::new();
    for (t, state) in &result.snapshots {
        for (i, &x) in node_coords.iter().enumerate() {
            rows.push(vec![
                *t,
                x,
                state.u[i],
                state.phi[i],
                state.fatigue[i],
                state.history[i],
                state.theta[i],
                state.voltage[i],
            ]);
        }
    }
    write_csv(&path, "t,x,u,phi,F,H,theta,V", rows)?;
    Ok(path)
}

/// Stable digest of a serializable configuration. The value is computed
/// from the resolved structure, so reordering keys in the input file does
/// not change it.
pub fn config_digest<T: Serialize>(value: &T) -> Result<String> {
    let canonical = toml::to_string(value)
        .map_err(|e| Error::Config(format!("cannot serialize config for digest: {e}")))?;
    let mut hasher = Sha256::new();
    hasher.update(canonical.as_bytes());
    Ok(hex::encode(hasher.finalize()))
}

/// Run manifest; exactly one per output directory.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub run_id: String,
    pub command: String,
    pub config_digest: String,
    pub seed: u64,
    pub started: String,
    pub finished: String,
    pub status: String,
    pub files: Vec<String>,
}

impl Manifest {
    pub fn begin(command: &str, digest: &str, seed: u64) -> Self {
        Manifest {
            run_id: format!("{command}-{}", &digest[..12.min(digest.len())]),
            command: command.to_string(),
            config_digest: digest.to_string(),
            seed,
            started: chrono::Utc::now().to_rfc3339(),
            finished: String::new(),
            status: "running".to_string(),
            files: Vec::new(),
        }
    }

    pub fn record_file(&mut self, path: &Path) {
        if let Some(name) = path.file_name() {
            self.files.push(name.to_string_lossy().into_owned());
        }
    }

    pub fn finish(&mut self, ok: bool) {
        self.finished = chrono::Utc::now().to_rfc3339();
        self.status = if ok { "ok" } else { "failed" }.to_string();
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join("manifest.toml");
        let body = toml::to_string_pretty(self)
            .map_err(|e| Error::Config(format!("cannot serialize manifest: {e}")))?;
        fs::write(&path, body)?;
        Ok(path)
    }
}

/// Creates the output directory (and parents) if needed.
pub fn ensure_out_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde::Serialize;

    #[test]
    fn csv_cells_round_trip() {
        assert_eq!(cell(0.1), "0.1");
        assert_eq!(cell(1.0), "1");
        assert_eq!(cell(f64::NAN), "nan");
        let v = 1.234_567_890_123_456_7e-12;
        assert_eq!(cell(v).parse::<f64>().unwrap(), v);
    }

    #[derive(Serialize)]
    struct Demo {
        a: f64,
        b: String,
    }

    #[test]
    fn digest_is_stable() {
        let d1 = config_digest(&Demo {
            a: 1.5,
            b: "x".into(),
        })
        .unwrap();
        let d2 = config_digest(&Demo {
            a: 1.5,
            b: "x".into(),
        })
        .unwrap();
        assert_eq!(d1, d2);
        let d3 = config_digest(&Demo {
            a: 2.5,
            b: "x".into(),
        })
        .unwrap();
        assert_ne!(d1, d3);
    }

    #[test]
    fn csv_writer_layout() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.csv");
        write_csv(&path, "a,b", vec![vec![1.0, 2.5], vec![3.0, f64::NAN]]).unwrap();
        let body = std::fs::read_to_string(&path).unwrap();
        assert_eq!(body, "a,b\n1,2.5\n3,nan\n");
    }
}
