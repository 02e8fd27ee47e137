use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qdc::bench::{
    compile, phasor_circuit, random_phasor_circuit, run_experiment, tagged_inputs, verify_placed, write_csv,
    CompileOptions, ExperimentConfig, GenSpec, Pipeline, WeightSpec,
};
use qdc::circuit::{parse, serialize};
use qdc::{Circuit, PauliString, QdcError, Result};

#[derive(Parser)]
#[command(name = "qdc", version, about = "Depth compression of Pauli-phasor circuits on a grid")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a random phasor circuit.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        phasors: usize,
        #[arg(long, default_value_t = 0.0)]
        clifford_pct: f64,
        /// Pauli weight, or `random`.
        #[arg(long, default_value = "random")]
        weight: WeightSpec,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        o: Option<PathBuf>,
    },
    /// Compile a circuit for a grid.
    Compile {
        #[arg(long, default_value = "qdc-full")]
        pipeline: Pipeline,
        /// Grid shape as `RxC`; rows default to the qubit count.
        #[arg(long)]
        grid: Option<String>,
        /// Clifford snake columns (odd).
        #[arg(long)]
        d: Option<usize>,
        #[arg(short, long)]
        i: PathBuf,
        #[arg(short, long)]
        o: Option<PathBuf>,
        /// Only `<P>` is needed: drop the Clifford suffix and rewrite `P`.
        #[arg(long)]
        expectation: Option<PauliString>,
    },
    /// Check a compiled circuit against its source on |0...0>.
    Verify {
        #[arg(short, long)]
        i: PathBuf,
        #[arg(long = "ref")]
        reference: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Run a benchmark configuration and write CSV.
    Bench {
        #[arg(long)]
        config: PathBuf,
        #[arg(short, long, default_value = "results.csv")]
        o: PathBuf,
        /// Verify every compiled circuit with the simulator.
        #[arg(long)]
        verify: bool,
    },
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| QdcError::Io { path: path.display().to_string(), source })
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| QdcError::Io { path: p.display().to_string(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_grid(s: &str) -> Result<(usize, usize)> {
    let bad = || QdcError::Parse(format!("grid must look like 4x5, got {s:?}"));
    let (r, c) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    Ok((r.trim().parse().map_err(|_| bad())?, c.trim().parse().map_err(|_| bad())?))
}

fn load_circuit(path: &Path) -> Result<Circuit> {
    parse(&read(path)?)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Gen { n, phasors, clifford_pct, weight, seed, o } => {
            let spec = GenSpec { n_qubits: n, n_phasors: phasors, clifford_pct, weight, seed };
            let mut c = phasor_circuit(n, &random_phasor_circuit(&spec)?)?;
            c.set_name(format!("random n={n} phasors={phasors} clifford_pct={clifford_pct} weight={weight} seed={seed}"));
            emit(o.as_deref(), &serialize(&c))?;
        }
        Cmd::Compile { pipeline, grid, d, i, o, expectation } => {
            let source = load_circuit(&i)?;
            let (rows, cols) = match grid {
                Some(g) => parse_grid(&g)?,
                None => (source.num_qubits(), 5),
            };
            let opts = CompileOptions { grid_rows: rows, grid_cols: cols, d, expectation };
            let compiled = compile(&source, pipeline, &opts)?;
            let m = compiled.circuit.metrics();
            eprintln!(
                "{pipeline}: depth {} cx {} qubits {} phasors {}",
                m.depth, m.cx_count, m.qubit_count, compiled.phasors
            );
            if let Some(p) = &compiled.observable {
                eprintln!("measure {p} on the inputs");
            }
            emit(o.as_deref(), &serialize(&compiled.circuit))?;
        }
        Cmd::Verify { i, reference, tol } => {
            let dynamic = load_circuit(&i)?;
            let source = load_circuit(&reference)?;
            let inputs = tagged_inputs(&dynamic)?.unwrap_or_else(|| (0..source.num_qubits()).collect());
            let report = verify_placed(&dynamic, &inputs, &source, tol)?;
            let json = serde_json::to_string_pretty(&report).map_err(|e| QdcError::Simulation(e.to_string()))?;
            println!("{json}");
            return Ok(if report.equivalent { ExitCode::SUCCESS } else { ExitCode::from(1) });
        }
        Cmd::Bench { config, o, verify } => {
            let cfg = ExperimentConfig::load(&config)?;
            let rows = run_experiment(&cfg, verify || cfg.verify_by_default())?;
            write_csv(&o, &cfg, &rows)?;
            eprintln!("{} rows written to {}", rows.len(), o.display());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
