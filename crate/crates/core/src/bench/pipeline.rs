//! The three compilation pipelines compared by the benchmark.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, GridLayout};
use crate::error::{QdcError, Result};
use crate::frame::PauliFrame;
use crate::passes::{compile_sections, push_cliffords, rotation_instruction};
use crate::pauli::PauliString;
use crate::reduce::{DynamicBuilder, D_PHASOR};
use crate::sim::{channel_equiv, zero_state, EquivReport, SimOptions};
use crate::synth::{delete_trivial_prefix, expectation_mode, synthesize_lnn};

use super::baseline::baseline_compile;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pipeline {
    Baseline,
    QdcNoreduce,
    QdcFull,
}

impl Pipeline {
    pub const ALL: [Pipeline; 3] = [Pipeline::Baseline, Pipeline::QdcNoreduce, Pipeline::QdcFull];

    pub fn name(self) -> &'static str {
        match self {
            Pipeline::Baseline => "baseline",
            Pipeline::QdcNoreduce => "qdc_noreduce",
            Pipeline::QdcFull => "qdc_full",
        }
    }
}

impl fmt::Display for Pipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Pipeline {
    type Err = QdcError;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "baseline" => Ok(Pipeline::Baseline),
            "qdc_noreduce" => Ok(Pipeline::QdcNoreduce),
            "qdc_full" => Ok(Pipeline::QdcFull),
            _ => Err(QdcError::Parse(format!("unknown pipeline {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompileOptions {
    pub grid_rows: usize,
    pub grid_cols: usize,
    /// Clifford snake columns; chosen from the suffix depth when `None`.
    pub d: Option<usize>,
    /// Compile for `⟨P⟩` only: the Clifford suffix is dropped and `P` rewritten.
    pub expectation: Option<PauliString>,
}

impl CompileOptions {
    pub fn grid(rows: usize, cols: usize) -> Self {
        CompileOptions { grid_rows: rows, grid_cols: cols, d: None, expectation: None }
    }
}

#[derive(Clone, Debug)]
pub struct Compiled {
    pub circuit: Circuit,
    pub layout: GridLayout,
    /// Physical qubits holding the logical inputs.
    pub inputs: Vec<usize>,
    /// Observable to measure on the outputs in expectation mode.
    pub observable: Option<PauliString>,
    /// Number of phasors left after pushing.
    pub phasors: usize,
}

/// Smallest odd `d ≥ depth/D_PHASOR`, capped by the largest odd `d ≤ cols`.
pub fn default_snake_columns(suffix_depth: usize, cols: usize) -> usize {
    let want = suffix_depth.div_ceil(D_PHASOR).max(1) | 1;
    let cap = if cols % 2 == 0 { cols.saturating_sub(1) } else { cols }.max(1);
    want.min(cap)
}

pub fn compile(source: &Circuit, pipeline: Pipeline, opts: &CompileOptions) -> Result<Compiled> {
    let mut out = match pipeline {
        Pipeline::Baseline => {
            if opts.expectation.is_some() {
                return Err(QdcError::Unsupported("expectation mode needs a QDC pipeline".into()));
            }
            let (circuit, inputs) = baseline_compile(source, opts.grid_rows, opts.grid_cols)?;
            let phasors = compile_sections(source)?.phasors().count();
            Compiled {
                circuit,
                layout: GridLayout::row_major(opts.grid_rows, opts.grid_cols),
                inputs,
                observable: None,
                phasors,
            }
        }
        Pipeline::QdcNoreduce | Pipeline::QdcFull => qdc_compile(source, pipeline == Pipeline::QdcFull, opts)?,
    };
    out.circuit.set_name(format!("{}:{}", pipeline, source.name().unwrap_or("input")));
    out.circuit.add_tag(format!("pipeline {pipeline}"));
    let ins: Vec<String> = out.inputs.iter().map(usize::to_string).collect();
    out.circuit.add_tag(format!("inputs {}", ins.join(" ")));
    if let Some(p) = &out.observable {
        out.circuit.add_tag(format!("observable {p}"));
    }
    Ok(out)
}

/// Compile, push and synthesize, then lower either serially (`full = false`) or
/// with dynamic reduction of every phasor and the Clifford suffix.
pub fn qdc_compile(source: &Circuit, full: bool, opts: &CompileOptions) -> Result<Compiled> {
    let n = source.num_qubits();
    let pushed = push_cliffords(&compile_sections(source)?)?;
    let synth = synthesize_lnn(&pushed.tail)?;
    let (phasors, suffix) = delete_trivial_prefix(&synth, &pushed.phasors)?;
    let (suffix, observable) = match &opts.expectation {
        Some(p) => {
            if p.num_qubits() != n {
                return Err(QdcError::LengthMismatch(p.num_qubits(), n));
            }
            let t = synth.suffix_tableau()?;
            (Circuit::new(n, 0), Some(expectation_mode(&t, p)?))
        }
        None => (suffix, None),
    };

    if !full {
        let mut logical = Circuit::new(n, 0);
        for r in &phasors {
            logical.push(rotation_instruction(r))?;
        }
        logical.append(&suffix)?;
        let (circuit, inputs) = baseline_compile(&logical, opts.grid_rows, opts.grid_cols)?;
        return Ok(Compiled {
            circuit,
            layout: GridLayout::row_major(opts.grid_rows, opts.grid_cols),
            inputs,
            observable,
            phasors: phasors.len(),
        });
    }

    if opts.grid_rows < n || opts.grid_cols < 2 {
        return Err(QdcError::Config(format!(
            "dynamic reduction of {n} qubits needs at least a {n}x2 grid, got {}x{}",
            opts.grid_rows, opts.grid_cols
        )));
    }
    let d = match opts.d {
        Some(d) => d,
        None => default_snake_columns(suffix.depth(), opts.grid_cols),
    };
    if d > opts.grid_cols {
        return Err(QdcError::Config(format!("d = {d} exceeds {} grid columns", opts.grid_cols)));
    }
    let mut b = DynamicBuilder::new(n, d.max(2));
    for r in &phasors {
        b.phasor(r)?;
    }
    if !suffix.is_empty() {
        b.clifford(&suffix, d)?;
    }
    let f = b.finish()?;
    Ok(Compiled {
        circuit: f.circuit,
        layout: f.layout,
        inputs: f.inputs,
        observable,
        phasors: phasors.len(),
    })
}

/// Relabels `c` onto the qubits it touches (plus `keep`), so the dense oracle
/// does not pay for idle grid cells. Returns the circuit and the old → new map.
pub fn compact(c: &Circuit, keep: &[usize]) -> Result<(Circuit, Vec<Option<usize>>)> {
    let mut used = vec![false; c.num_qubits()];
    for ins in c.instructions() {
        for q in ins.qubits() {
            used[q] = true;
        }
    }
    for &q in keep.iter().chain(c.outputs().unwrap_or(&[])) {
        used[q] = true;
    }
    for (_, p) in c.postprocessing().terms() {
        for q in p.support() {
            used[q] = true;
        }
    }
    let kept: Vec<usize> = (0..c.num_qubits()).filter(|&q| used[q]).collect();
    let mut map = vec![None; c.num_qubits()];
    for (i, &q) in kept.iter().enumerate() {
        map[q] = Some(i);
    }
    let dense: Vec<usize> = map.iter().map(|m| m.unwrap_or(usize::MAX)).collect();
    let mut out = Circuit::new(kept.len(), 0);
    out.append_mapped(c, &dense, 0)?;
    let mut post = PauliFrame::new();
    for (e, p) in c.postprocessing().terms() {
        post.push(e.clone(), p.restrict(&kept));
    }
    out.set_postprocessing(post)?;
    if let Some(outs) = c.outputs() {
        out.set_outputs(outs.iter().map(|&q| dense[q]).collect())?;
    }
    Ok((out, map))
}

/// Channel check of a compiled circuit against its static source on `|0…0⟩`.
///
/// QDC moves the Clifford prefix to the front, where it only fixes `|0…0⟩`,
/// so other inputs are not expected to agree.
pub fn verify_compiled(compiled: &Compiled, source: &Circuit, tol: f64) -> Result<EquivReport> {
    verify_placed(&compiled.circuit, &compiled.inputs, source, tol)
}

/// As [`verify_compiled`], for a bare circuit whose inputs sit on `inputs`.
pub fn verify_placed(circuit: &Circuit, inputs: &[usize], source: &Circuit, tol: f64) -> Result<EquivReport> {
    let n = source.num_qubits();
    if inputs.len() != n {
        return Err(QdcError::LengthMismatch(inputs.len(), n));
    }
    let (c, map) = compact(circuit, inputs)?;
    let inputs: Vec<usize> = inputs.iter().map(|&q| map[q].expect("inputs are kept")).collect();
    channel_equiv(&c, source, &inputs, &[zero_state(n)], tol, &SimOptions::default())
}

/// Input placement recorded by [`compile`] in an `inputs` tag.
pub fn tagged_inputs(c: &Circuit) -> Result<Option<Vec<usize>>> {
    let Some(tag) = c.tags().iter().find_map(|t| t.strip_prefix("inputs")) else {
        return Ok(None);
    };
    tag.split_whitespace()
        .map(|t| t.parse().map_err(|_| QdcError::Parse(format!("bad inputs tag entry {t:?}"))))
        .collect::<Result<Vec<usize>>>()
        .map(Some)
}
