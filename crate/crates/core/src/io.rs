//! Run manifests, JSON records and per-sample CSV files.

use std::fs::{File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::mc::{write_samples_csv, SampleOutcome};
use crate::{Result, VERSION};

/// Record of a command invocation, written before any computation.
///
/// Wall-clock fields live here so that result files stay reproducible.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Effective configuration after merging flags, config file and defaults.
    pub config: serde_json::Value,
    pub seed: Option<u64>,
    pub outputs: Vec<PathBuf>,
    pub library_version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: f64,
}

impl RunManifest {
    pub fn new<C: Serialize>(command: &str, config: &C, seed: Option<u64>, outputs: Vec<PathBuf>) -> Result<Self> {
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs_f64())
            .unwrap_or(0.0);
        Ok(RunManifest {
            command: command.to_string(),
            config: serde_json::to_value(config)?,
            seed,
            outputs,
            library_version: VERSION.to_string(),
            timestamp,
        })
    }

    /// Manifest path that accompanies an output file: `<out>.manifest.json`.
    pub fn path_for(out: &Path) -> PathBuf {
        let mut name = out.as_os_str().to_owned();
        name.push(".manifest.json");
        PathBuf::from(name)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_json(path, self)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Ok(serde_json::from_reader(std::io::BufReader::new(File::open(path)?))?)
    }
}

/// Pretty-printed JSON followed by a newline.
pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

/// Append per-sample outcomes, writing the header only into a new or empty file.
pub fn append_samples_csv(path: &Path, start: u64, outcomes: &[SampleOutcome]) -> Result<()> {
    let fresh = std::fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let file = OpenOptions::new().create(true).append(true).open(path)?;
    let mut out = BufWriter::new(file);
    let mut buf = Vec::new();
    write_samples_csv(start, outcomes, &mut buf)?;
    let body = if fresh {
        &buf[..]
    } else {
        let header_end = buf.iter().position(|&b| b == b'\n').map_or(0, |i| i + 1);
        &buf[header_end..]
    };
    out.write_all(body)?;
    out.flush()?;
    Ok(())
}

/// Serde adapter writing `+∞` as `null`, since JSON has no infinities.
pub mod unbounded {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if *v == f64::INFINITY {
            s.serialize_none()
        } else {
            s.serialize_f64(*v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::ExperimentConfig;

    #[test]
    fn manifest_round_trips_config() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = ExperimentConfig::default();
        let out = dir.path().join("run.json");
        let m = RunManifest::new("mc", &cfg, Some(cfg.seed), vec![out.clone()]).unwrap();
        let path = RunManifest::path_for(&out);
        assert!(path.to_string_lossy().ends_with("run.json.manifest.json"));
        m.write(&path).unwrap();
        let back = RunManifest::read(&path).unwrap();
        assert_eq!(back, m);
        let cfg_back: ExperimentConfig = serde_json::from_value(back.config).unwrap();
        assert_eq!(cfg_back, cfg);
    }

    #[test]
    fn appending_keeps_a_single_header() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.csv");
        append_samples_csv(&path, 0, &[SampleOutcome::Survived]).unwrap();
        append_samples_csv(&path, 1, &[SampleOutcome::Collision { pair: (0, 1), t: 2.0 }]).unwrap();
        assert_eq!(
            std::fs::read_to_string(&path).unwrap(),
            "sample,outcome,t_event\n0,survived,\n1,[12],2\n"
        );
    }
}
