//! CSV rows and JSON manifests.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use vieta_tubes::entropy::CountRecord;
use vieta_tubes::volume::{Bin, TubeVolume};
use vieta_tubes::Error;

fn io(e: impl std::fmt::Display) -> Error {
    Error::InvalidParameter(format!("output: {e}"))
}

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), Error> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(io)?;
    }
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    for r in rows {
        w.serialize(r).map_err(io)?;
    }
    w.flush().map_err(io)
}

pub fn write_table(path: &Path, header: &[String], rows: &[Vec<String>]) -> Result<(), Error> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(io)?;
    }
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    w.flush().map_err(io)
}

#[derive(Serialize)]
pub struct CountRow {
    group: String,
    v: String,
    m: String,
    eps: String,
    #[serde(rename = "T")]
    t: String,
    filter: String,
    mode: &'static str,
    count: String,
    box_size: String,
    samples: Option<u64>,
    hits: Option<u64>,
    seed: Option<u64>,
    std_error: Option<f64>,
    uncertain: u64,
    deferred: u64,
    unit_band_upper: Option<String>,
}

impl From<&CountRecord> for CountRow {
    fn from(r: &CountRecord) -> Self {
        let filter = serde_json::to_value(r.filter).ok().and_then(|v| v.as_str().map(String::from));
        CountRow {
            group: format!("{:?}", r.group).to_lowercase(),
            v: r.v.join(";"),
            m: r.m.iter().map(|s| if *s > 0 { "+" } else { "-" }).collect::<Vec<_>>().join(";"),
            eps: r.eps.clone(),
            t: r.t.clone(),
            filter: filter.unwrap_or_default(),
            mode: r.mode,
            count: r.count.to_string(),
            box_size: r.box_size.to_string(),
            samples: r.samples,
            hits: r.hits,
            seed: r.seed,
            std_error: r.std_error,
            uncertain: r.uncertain,
            deferred: r.deferred,
            unit_band_upper: r.unit_band_upper.as_ref().map(|x| x.to_string()),
        }
    }
}

#[derive(Serialize)]
pub struct BinRow {
    bin_left: f64,
    bin_right: f64,
    count: u64,
}

impl From<&Bin> for BinRow {
    fn from(b: &Bin) -> Self {
        BinRow { bin_left: b.left, bin_right: b.right, count: b.count }
    }
}

#[derive(Serialize)]
pub struct VolumeRow {
    #[serde(rename = "T")]
    t: f64,
    log_volume: f64,
    relative_std_error: f64,
    samples: u64,
    seed: u64,
}

impl From<&TubeVolume> for VolumeRow {
    fn from(v: &TubeVolume) -> Self {
        VolumeRow {
            t: v.t,
            log_volume: v.log_estimate,
            relative_std_error: v.relative_std_error,
            samples: v.samples,
            seed: v.seed,
        }
    }
}

pub struct Manifest {
    command: &'static str,
    config: Value,
    results: Value,
    outputs: Vec<PathBuf>,
}

impl Manifest {
    pub fn new(command: &'static str, config: &impl Serialize, results: Value) -> Self {
        Manifest {
            command,
            config: serde_json::to_value(config).expect("config serializes"),
            results,
            outputs: Vec::new(),
        }
    }

    pub fn with_output(mut self, p: &Path) -> Self {
        self.outputs.push(p.to_path_buf());
        self
    }

    pub fn write(self, path: &Path) -> Result<(), Error> {
        let outputs: Vec<String> = self
            .outputs
            .iter()
            .map(|p| p.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default())
            .collect();
        let doc = json!({
            "tool": "vieta-tubes",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "config": self.config,
            "outputs": outputs,
            "results": self.results,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("json");
        s.push('\n');
        fs::write(path, s).map_err(io)
    }
}
