//! Benchmark harness: random instances, three pipelines, metrics and CSV output.

pub mod baseline;
pub mod generate;
pub mod pipeline;

use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{QdcError, Result};

pub use generate::{phasor_circuit, random_phasor_circuit, GenSpec, WeightSpec};
pub use pipeline::{compile, tagged_inputs, verify_compiled, verify_placed, CompileOptions, Compiled, Pipeline};

/// One benchmark point, read from JSON. Unknown keys are rejected.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n_qubits: usize,
    pub n_phasors: usize,
    pub clifford_pct: f64,
    pub weight: WeightSpec,
    pub seed: u64,
    /// Defaults to `n_qubits`.
    #[serde(default)]
    pub grid_rows: Option<usize>,
    #[serde(default = "default_cols")]
    pub grid_cols: usize,
    pub pipelines: Vec<Pipeline>,
    pub trials: usize,
    /// Clifford snake columns for `qdc_full`.
    #[serde(default)]
    pub d: Option<usize>,
    /// Check every compiled circuit against its source; defaults to on for
    /// `n_qubits ≤ 4` and `n_phasors ≤ 6`.
    #[serde(default)]
    pub verify: Option<bool>,
}

fn default_cols() -> usize {
    5
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| QdcError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| QdcError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn rows(&self) -> usize {
        self.grid_rows.unwrap_or(self.n_qubits)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(QdcError::Config(m));
        if let WeightSpec::Fixed(k) = self.weight {
            if k > self.n_qubits {
                return bad(format!("weight {k} exceeds n_qubits {}", self.n_qubits));
            }
        }
        if !(0.0..=100.0).contains(&self.clifford_pct) {
            return bad(format!("clifford_pct {} outside [0, 100]", self.clifford_pct));
        }
        if self.pipelines.is_empty() {
            return bad("no pipelines selected".into());
        }
        if self.trials == 0 {
            return bad("trials must be positive".into());
        }
        if self.rows() * self.grid_cols < self.n_qubits {
            return bad(format!("{} qubits do not fit a {}x{} grid", self.n_qubits, self.rows(), self.grid_cols));
        }
        if self.pipelines.contains(&Pipeline::QdcFull) && (self.rows() < self.n_qubits || self.grid_cols < 2) {
            return bad(format!("qdc_full needs at least a {}x2 grid", self.n_qubits));
        }
        if let Some(d) = self.d {
            if d % 2 == 0 || d > self.grid_cols {
                return bad(format!("d = {d} must be odd and at most grid_cols"));
            }
        }
        Ok(())
    }

    pub fn verify_by_default(&self) -> bool {
        self.verify.unwrap_or(self.n_qubits <= 4 && self.n_phasors <= 6)
    }

    /// Seed of trial `t`, mixed from the master seed.
    pub fn trial_seed(&self, t: usize) -> u64 {
        let mut z = self.seed ^ (t as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn gen_spec(&self, t: usize) -> GenSpec {
        GenSpec {
            n_qubits: self.n_qubits,
            n_phasors: self.n_phasors,
            clifford_pct: self.clifford_pct,
            weight: self.weight,
            seed: self.trial_seed(t),
        }
    }

    pub fn compile_options(&self) -> CompileOptions {
        CompileOptions {
            grid_rows: self.rows(),
            grid_cols: self.grid_cols,
            d: self.d,
            expectation: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResultRow {
    pub trial: usize,
    pub pipeline: Pipeline,
    pub n: usize,
    pub phasors: usize,
    pub clifford_pct: f64,
    pub weight: String,
    pub seed: u64,
    pub depth: usize,
    pub cx_count: usize,
    pub qubit_count: usize,
    pub wall_time_ms: f64,
}

pub const CSV_HEADER: [&str; 11] = [
    "trial",
    "pipeline",
    "n",
    "phasors",
    "clifford_pct",
    "weight",
    "seed",
    "depth",
    "cx_count",
    "qubit_count",
    "wall_time_ms",
];

/// Runs every trial through every pipeline, in trial-major order.
pub fn run_experiment(cfg: &ExperimentConfig, verify: bool) -> Result<Vec<ResultRow>> {
    cfg.validate()?;
    let opts = cfg.compile_options();
    let mut rows = Vec::new();
    for t in 0..cfg.trials {
        let spec = cfg.gen_spec(t);
        let mut source = phasor_circuit(cfg.n_qubits, &random_phasor_circuit(&spec)?)?;
        source.set_name(format!("trial{t}"));
        for &p in &cfg.pipelines {
            let start = Instant::now();
            let compiled = compile(&source, p, &opts)?;
            let wall = start.elapsed().as_secs_f64() * 1e3;
            let violations = compiled.layout.check(&compiled.circuit)?;
            if !violations.is_empty() {
                return Err(QdcError::InvalidCircuit(format!(
                    "{p} output breaks grid locality at {} instructions",
                    violations.len()
                )));
            }
            if verify {
                let report = verify_compiled(&compiled, &source, 1e-9)?;
                if !report.equivalent {
                    return Err(QdcError::Simulation(format!(
                        "{p} trial {t} failed verification: fidelity {}",
                        report.worst_fidelity
                    )));
                }
            }
            let m = compiled.circuit.metrics();
            rows.push(ResultRow {
                trial: t,
                pipeline: p,
                n: cfg.n_qubits,
                phasors: cfg.n_phasors,
                clifford_pct: cfg.clifford_pct,
                weight: cfg.weight.to_string(),
                seed: spec.seed,
                depth: m.depth,
                cx_count: m.cx_count,
                qubit_count: m.qubit_count,
                wall_time_ms: wall,
            });
        }
    }
    Ok(rows)
}

/// Mean and standard error of `xs`.
pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Per-pipeline summary: one row per pipeline, in first-seen order.
pub fn aggregate(rows: &[ResultRow]) -> Vec<(Pipeline, [(f64, f64); 4])> {
    let mut order: Vec<Pipeline> = Vec::new();
    for r in rows {
        if !order.contains(&r.pipeline) {
            order.push(r.pipeline);
        }
    }
    order
        .into_iter()
        .map(|p| {
            let sel: Vec<&ResultRow> = rows.iter().filter(|r| r.pipeline == p).collect();
            let col = |f: &dyn Fn(&ResultRow) -> f64| mean_stderr(&sel.iter().map(|r| f(r)).collect::<Vec<_>>());
            (
                p,
                [
                    col(&|r| r.depth as f64),
                    col(&|r| r.cx_count as f64),
                    col(&|r| r.qubit_count as f64),
                    col(&|r| r.wall_time_ms),
                ],
            )
        })
        .collect()
}

/// CSV text: header, one line per row, then one aggregate line per pipeline whose
/// `trial` is `aggregate` and whose metric cells read `mean+-stderr`.
pub fn to_csv(cfg: &ExperimentConfig, rows: &[ResultRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| QdcError::Config(format!("csv: {e}"));
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.trial.to_string(),
            r.pipeline.to_string(),
            r.n.to_string(),
            r.phasors.to_string(),
            r.clifford_pct.to_string(),
            r.weight.clone(),
            r.seed.to_string(),
            r.depth.to_string(),
            r.cx_count.to_string(),
            r.qubit_count.to_string(),
            format!("{:.3}", r.wall_time_ms),
        ])
        .map_err(csv_err)?;
    }
    for (p, stats) in aggregate(rows) {
        let cell = |(m, s): (f64, f64)| format!("{m:.4}+-{s:.4}");
        w.write_record([
            "aggregate".to_string(),
            p.to_string(),
            cfg.n_qubits.to_string(),
            cfg.n_phasors.to_string(),
            cfg.clifford_pct.to_string(),
            cfg.weight.to_string(),
            cfg.seed.to_string(),
            cell(stats[0]),
            cell(stats[1]),
            cell(stats[2]),
            cell(stats[3]),
        ])
        .map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| QdcError::Config(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| QdcError::Config(e.to_string()))
}

pub fn write_csv(path: &Path, cfg: &ExperimentConfig, rows: &[ResultRow]) -> Result<()> {
    let text = to_csv(cfg, rows)?;
    std::fs::write(path, text).map_err(|source| QdcError::Io {
        path: path.display().to_string(),
        source,
    })
}
