//! Dense statevector simulation with exact measurement-branch enumeration.
//!
//! Qubit `q` is bit `q` of the basis-state index.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::circuit::{Axis, Basis, Circuit, Gate1, Gate2, Instruction};
use crate::error::{QdcError, Result};
use crate::pauli::PauliString;

pub type State = Vec<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, Debug)]
pub struct SimOptions {
    pub max_qubits: usize,
    /// Branches below this probability are discarded.
    pub p_min: f64,
    /// Largest leaf count explored exhaustively by [`channel_equiv`]; beyond it,
    /// `samples` random branches are followed instead.
    pub max_branches: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions {
            max_qubits: 14,
            p_min: 1e-14,
            max_branches: 1 << 14,
            samples: 256,
            seed: 7,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BranchState {
    pub outcome: Vec<Option<bool>>,
    pub probability: f64,
    pub state: State,
}

/// Dense square matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    pub dim: usize,
    pub data: Vec<Complex64>,
}

impl Matrix {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![ZERO; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = ONE;
        }
        Matrix { dim, data }
    }

    pub fn from_columns(cols: &[State]) -> Self {
        let dim = cols.len();
        let mut data = vec![ZERO; dim * dim];
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                data[i * dim + j] = *v;
            }
        }
        Matrix { dim, data }
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim + c]
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        let n = self.dim;
        let mut data = vec![ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        Matrix { dim: n, data }
    }

    pub fn adjoint(&self) -> Matrix {
        let n = self.dim;
        let mut data = vec![ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        Matrix { dim: n, data }
    }

    pub fn scale(&self, s: Complex64) -> Matrix {
        Matrix {
            dim: self.dim,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        Matrix {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn apply(&self, v: &[Complex64]) -> State {
        let n = self.dim;
        (0..n)
            .map(|i| (0..n).map(|j| self.data[i * n + j] * v[j]).sum())
            .collect()
    }

    /// Kronecker product with `self` on the high-order bits.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let (a, b) = (self.dim, other.dim);
        let n = a * b;
        let mut data = vec![ZERO; n * n];
        for i1 in 0..a {
            for j1 in 0..a {
                let x = self.data[i1 * a + j1];
                for i2 in 0..b {
                    for j2 in 0..b {
                        data[(i1 * b + i2) * n + j1 * b + j2] = x * other.data[i2 * b + j2];
                    }
                }
            }
        }
        Matrix { dim: n, data }
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Entrywise distance after aligning the global phase of `other` to `self`.
    pub fn diff_up_to_phase(&self, other: &Matrix) -> f64 {
        let phase = align_phase(&self.data, &other.data);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b * phase).norm())
            .fold(0.0, f64::max)
    }
}

/// Unit phase `u` maximising agreement of `u·b` with `a` at `a`'s largest entry.
fn align_phase(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    let k = (0..a.len())
        .max_by(|&i, &j| a[i].norm().total_cmp(&a[j].norm()))
        .unwrap_or(0);
    let r = a[k] * b[k].conj();
    if r.norm() < 1e-15 {
        ONE
    } else {
        r / r.norm()
    }
}

/// Dense matrix of a Pauli string, phase included.
pub fn pauli_matrix(p: &PauliString) -> Matrix {
    let n = p.num_qubits();
    let dim = 1usize << n;
    let cols: Vec<State> = (0..dim)
        .map(|j| {
            let mut e = vec![ZERO; dim];
            e[j] = ONE;
            apply_pauli(&mut e, p);
            e
        })
        .collect();
    Matrix::from_columns(&cols)
}

/// Dense `exp(-i·angle/2·P)`.
pub fn rotation_matrix(p: &PauliString, angle: f64) -> Matrix {
    let dim = 1usize << p.num_qubits();
    let c = Complex64::new((angle / 2.0).cos(), 0.0);
    let s = Complex64::new(0.0, -(angle / 2.0).sin());
    Matrix::identity(dim).scale(c).add(&pauli_matrix(p).scale(s))
}

fn masks(p: &PauliString) -> (usize, usize, Complex64) {
    let mut xm = 0usize;
    let mut zm = 0usize;
    let mut ys = 0u8;
    for q in 0..p.num_qubits() {
        if p.x(q) {
            xm |= 1 << q;
        }
        if p.z(q) {
            zm |= 1 << q;
        }
        if p.x(q) && p.z(q) {
            ys += 1;
        }
    }
    let coeff = match (p.phase() + ys) % 4 {
        0 => ONE,
        1 => I,
        2 => -ONE,
        _ => -I,
    };
    (xm, zm, coeff)
}

pub fn apply_pauli(state: &mut State, p: &PauliString) {
    let (xm, zm, coeff) = masks(p);
    let mut out = vec![ZERO; state.len()];
    for (i, v) in state.iter().enumerate() {
        let sign = if (i & zm).count_ones() % 2 == 1 { -coeff } else { coeff };
        out[i ^ xm] = sign * v;
    }
    *state = out;
}

fn apply_pauli_rotation(state: &mut State, p: &PauliString, angle: f64) {
    let mut pv = state.clone();
    apply_pauli(&mut pv, p);
    let c = (angle / 2.0).cos();
    let s = Complex64::new(0.0, -(angle / 2.0).sin());
    for (v, w) in state.iter_mut().zip(pv) {
        *v = *v * c + w * s;
    }
}

fn apply_1q(state: &mut State, q: usize, m: [[Complex64; 2]; 2]) {
    let bit = 1usize << q;
    for i in 0..state.len() {
        if i & bit == 0 {
            let j = i | bit;
            let (a, b) = (state[i], state[j]);
            state[i] = m[0][0] * a + m[0][1] * b;
            state[j] = m[1][0] * a + m[1][1] * b;
        }
    }
}

fn gate1_matrix(kind: Gate1) -> [[Complex64; 2]; 2] {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    match kind {
        Gate1::H => [[h, h], [h, -h]],
        Gate1::S => [[ONE, ZERO], [ZERO, I]],
        Gate1::Sdg => [[ONE, ZERO], [ZERO, -I]],
        Gate1::X => [[ZERO, ONE], [ONE, ZERO]],
        Gate1::Y => [[ZERO, -I], [I, ZERO]],
        Gate1::Z => [[ONE, ZERO], [ZERO, -ONE]],
        Gate1::P(t) => [[ONE, ZERO], [ZERO, Complex64::from_polar(1.0, t)]],
    }
}

fn rot_matrix(axis: Axis, angle: f64) -> [[Complex64; 2]; 2] {
    let c = Complex64::new((angle / 2.0).cos(), 0.0);
    let s = (angle / 2.0).sin();
    match axis {
        Axis::X => [[c, Complex64::new(0.0, -s)], [Complex64::new(0.0, -s), c]],
        Axis::Z => [[Complex64::from_polar(1.0, -angle / 2.0), ZERO], [ZERO, Complex64::from_polar(1.0, angle / 2.0)]],
    }
}

fn apply_gate2(state: &mut State, kind: Gate2, a: usize, b: usize) {
    let (ba, bb) = (1usize << a, 1usize << b);
    match kind {
        Gate2::CX => {
            for i in 0..state.len() {
                if i & ba != 0 && i & bb == 0 {
                    state.swap(i, i | bb);
                }
            }
        }
        Gate2::CZ => {
            for (i, v) in state.iter_mut().enumerate() {
                if i & ba != 0 && i & bb != 0 {
                    *v = -*v;
                }
            }
        }
        Gate2::Swap => {
            for i in 0..state.len() {
                if i & ba != 0 && i & bb == 0 {
                    state.swap(i, (i & !ba) | bb);
                }
            }
        }
    }
}

fn single_pauli(n: usize, axis: Axis, q: usize) -> PauliString {
    PauliString::single(n, q, axis.pauli())
}

/// Applies a non-measuring instruction. Classical reads use `cbits`.
fn apply_unitary_part(state: &mut State, n: usize, ins: &Instruction, cbits: &[Option<bool>]) -> Result<()> {
    match ins {
        Instruction::Gate1 { kind, qubit } => apply_1q(state, *qubit, gate1_matrix(*kind)),
        Instruction::Rot { axis, angle, qubit } => apply_1q(state, *qubit, rot_matrix(*axis, *angle)),
        Instruction::Gate2 { kind, a, b } => apply_gate2(state, *kind, *a, *b),
        Instruction::PauliRot { rotation, qubits } => {
            let p = rotation.pauli().embed(n, qubits)?;
            apply_pauli_rotation(state, &p, rotation.angle());
        }
        Instruction::CondPauli { expr, pauli, qubit } => {
            let on = expr
                .eval(cbits)
                .ok_or_else(|| QdcError::Simulation(format!("unbound bit in {expr}")))?;
            if on {
                apply_pauli(state, &single_pauli(n, *pauli, *qubit));
            }
        }
        Instruction::CondSignRot { axis, angle, sign, qubit } => {
            let neg = sign
                .eval(cbits)
                .ok_or_else(|| QdcError::Simulation(format!("unbound bit in {sign}")))?;
            let a = if neg { -angle } else { *angle };
            apply_1q(state, *qubit, rot_matrix(*axis, a));
        }
        Instruction::Barrier { .. } => {}
        Instruction::Measure { .. } | Instruction::Reset { .. } => {
            return Err(QdcError::Simulation("measurement in unitary context".into()));
        }
    }
    Ok(())
}

fn prob_one(state: &State, q: usize) -> f64 {
    let bit = 1usize << q;
    state
        .iter()
        .enumerate()
        .filter(|(i, _)| i & bit != 0)
        .map(|(_, v)| v.norm_sqr())
        .sum()
}

fn project(state: &mut State, q: usize, outcome: bool, p: f64) {
    let bit = 1usize << q;
    let scale = 1.0 / p.sqrt();
    for (i, v) in state.iter_mut().enumerate() {
        if (i & bit != 0) == outcome {
            *v *= scale;
        } else {
            *v = ZERO;
        }
    }
}

pub fn zero_state(n: usize) -> State {
    let mut s = vec![ZERO; 1 << n];
    s[0] = ONE;
    s
}

pub fn basis_state(n: usize, index: usize) -> State {
    let mut s = vec![ZERO; 1 << n];
    s[index] = ONE;
    s
}

/// Haar-ish random normalized state from Gaussian amplitudes.
pub fn random_state(n: usize, rng: &mut impl Rng) -> State {
    let mut s: State = (0..1usize << n)
        .map(|_| {
            let (a, b): (f64, f64) = (rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
            Complex64::new(a, b)
        })
        .collect();
    let norm = s.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    for v in &mut s {
        *v /= norm;
    }
    s
}

/// Places a state of `qubits.len()` qubits onto `qubits` of an `n`-qubit register; the rest are |0⟩.
pub fn embed_state(local: &[Complex64], n: usize, qubits: &[usize]) -> State {
    let mut s = vec![ZERO; 1 << n];
    for (j, v) in local.iter().enumerate() {
        let mut idx = 0;
        for (k, &q) in qubits.iter().enumerate() {
            if j >> k & 1 == 1 {
                idx |= 1 << q;
            }
        }
        s[idx] = *v;
    }
    s
}

fn check_budget(c: &Circuit, opts: &SimOptions) -> Result<()> {
    if c.num_qubits() > opts.max_qubits {
        return Err(QdcError::Simulation(format!(
            "{} qubits exceeds budget of {}",
            c.num_qubits(),
            opts.max_qubits
        )));
    }
    Ok(())
}

/// Exact unitary of a static circuit, built column by column.
pub fn unitary_of(c: &Circuit) -> Result<Matrix> {
    if !c.is_static() {
        return Err(QdcError::Simulation("unitary_of needs a static circuit".into()));
    }
    if c.num_qubits() > 10 {
        return Err(QdcError::Simulation(format!("{} qubits exceeds budget of 10", c.num_qubits())));
    }
    let n = c.num_qubits();
    let cols: Vec<State> = (0..1usize << n)
        .map(|j| {
            let mut s = basis_state(n, j);
            for ins in c.instructions() {
                apply_unitary_part(&mut s, n, ins, &[])?;
            }
            Ok(s)
        })
        .collect::<Result<_>>()?;
    Ok(Matrix::from_columns(&cols))
}

/// Final state of a static circuit.
pub fn run_static(c: &Circuit, input: &[Complex64]) -> Result<State> {
    if !c.is_static() {
        return Err(QdcError::Simulation("run_static needs a static circuit".into()));
    }
    let n = c.num_qubits();
    let mut s = input.to_vec();
    for ins in c.instructions() {
        apply_unitary_part(&mut s, n, ins, &[])?;
    }
    Ok(s)
}

enum Mode<'a> {
    All,
    Sample(&'a mut ChaCha8Rng),
}

struct Walker<'a, F: FnMut(BranchState) -> Result<()>> {
    circuit: &'a Circuit,
    p_min: f64,
    visit: F,
}

impl<F: FnMut(BranchState) -> Result<()>> Walker<'_, F> {
    fn walk(
        &mut self,
        mut pc: usize,
        mut state: State,
        mut cbits: Vec<Option<bool>>,
        prob: f64,
        mode: &mut Mode<'_>,
    ) -> Result<()> {
        let c = self.circuit;
        let n = c.num_qubits();
        while pc < c.len() {
            let ins = &c.instructions()[pc];
            pc += 1;
            let (qubit, cbit, basis) = match ins {
                Instruction::Measure { qubit, cbit, basis } => (*qubit, Some(*cbit), *basis),
                Instruction::Reset { qubit } => (*qubit, None, Basis::Z),
                other => {
                    apply_unitary_part(&mut state, n, other, &cbits)?;
                    continue;
                }
            };
            if basis == Basis::X {
                apply_1q(&mut state, qubit, gate1_matrix(Gate1::H));
            }
            let p1 = prob_one(&state, qubit).clamp(0.0, 1.0);
            let outcomes: Vec<(bool, f64)> = [(false, 1.0 - p1), (true, p1)]
                .into_iter()
                .filter(|(_, p)| prob * p >= self.p_min)
                .collect();
            let chosen: Vec<(bool, f64)> = match mode {
                Mode::All => outcomes,
                Mode::Sample(rng) => {
                    if outcomes.is_empty() {
                        outcomes
                    } else {
                        let k = rng.gen_range(0..outcomes.len());
                        vec![outcomes[k]]
                    }
                }
            };
            let last = chosen.len().saturating_sub(1);
            for (idx, (outcome, p)) in chosen.into_iter().enumerate() {
                let mut s = if idx == last { std::mem::take(&mut state) } else { state.clone() };
                project(&mut s, qubit, outcome, p);
                let mut bits = cbits.clone();
                match cbit {
                    Some(cb) => {
                        bits[cb] = Some(outcome);
                        if basis == Basis::X {
                            apply_1q(&mut s, qubit, gate1_matrix(Gate1::H));
                        }
                    }
                    None if outcome => apply_1q(&mut s, qubit, gate1_matrix(Gate1::X)),
                    None => {}
                }
                self.walk(pc, s, bits, prob * p, mode)?;
            }
            return Ok(());
        }
        let post = c.postprocessing().resolve(n, &cbits)?;
        apply_pauli(&mut state, &post);
        cbits.truncate(c.num_cbits());
        (self.visit)(BranchState { outcome: cbits, probability: prob, state })
    }
}

/// Every measurement branch of `c` run on `input`, depth first.
pub fn run_branches(c: &Circuit, input: &[Complex64]) -> Result<Vec<BranchState>> {
    run_branches_with(c, input, &SimOptions::default())
}

pub fn run_branches_with(c: &Circuit, input: &[Complex64], opts: &SimOptions) -> Result<Vec<BranchState>> {
    check_budget(c, opts)?;
    if input.len() != 1 << c.num_qubits() {
        return Err(QdcError::LengthMismatch(input.len(), 1 << c.num_qubits()));
    }
    let mut out = Vec::new();
    let mut w = Walker {
        circuit: c,
        p_min: opts.p_min,
        visit: |b| {
            out.push(b);
            Ok(())
        },
    };
    w.walk(0, input.to_vec(), vec![None; c.num_cbits()], 1.0, &mut Mode::All)?;
    Ok(out)
}

fn branch_points(c: &Circuit) -> usize {
    c.instructions()
        .iter()
        .filter(|i| matches!(i, Instruction::Measure { .. } | Instruction::Reset { .. }))
        .count()
}

/// `Σ_branches p · ⟨ψ|P|ψ⟩`.
pub fn expectation(c: &Circuit, p: &PauliString) -> Result<f64> {
    expectation_on(c, &zero_state(c.num_qubits()), p)
}

pub fn expectation_on(c: &Circuit, input: &[Complex64], p: &PauliString) -> Result<f64> {
    if p.num_qubits() != c.num_qubits() {
        return Err(QdcError::LengthMismatch(p.num_qubits(), c.num_qubits()));
    }
    let mut total = 0.0;
    for b in run_branches(c, input)? {
        total += b.probability * state_expectation(&b.state, p);
    }
    Ok(total)
}

pub fn state_expectation(state: &[Complex64], p: &PauliString) -> f64 {
    let mut pv = state.to_vec();
    apply_pauli(&mut pv, p);
    state.iter().zip(&pv).map(|(a, b)| (a.conj() * b).re).sum()
}

/// Outcome distribution of measuring every qubit in the Z basis.
pub fn z_distribution(state: &[Complex64]) -> Vec<f64> {
    state.iter().map(|v| v.norm_sqr()).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivReport {
    pub equivalent: bool,
    pub worst_fidelity: f64,
    pub worst_purity: f64,
    /// Outcome string of the worst branch (`0`, `1`, `-` per cbit) when not equivalent.
    pub failing_branch: Option<String>,
    pub failing_input: Option<usize>,
    pub global_phase_per_branch: Vec<f64>,
    pub branches_checked: usize,
    pub exhaustive: bool,
}

fn outcome_string(bits: &[Option<bool>]) -> String {
    bits.iter()
        .map(|b| match b {
            Some(true) => '1',
            Some(false) => '0',
            None => '-',
        })
        .collect()
}

/// Default probe set: every computational basis state plus three random states.
pub fn default_inputs(n: usize, seed: u64) -> Vec<State> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<State> = (0..1usize << n).map(|j| basis_state(n, j)).collect();
    for _ in 0..3 {
        v.push(random_state(n, &mut rng));
    }
    v
}

/// Checks that `dyn_c`, fed each input on `data_qubits`, reproduces `reference`
/// on its output qubits in every measurement branch.
///
/// Output qubits are `dyn_c.outputs()` when set, otherwise `data_qubits`.
/// Per branch, fidelity is `⟨ref|ρ|ref⟩` for the reduced output state `ρ`, and the
/// purity of `ρ` certifies that the other qubits are disentangled.
pub fn channel_equiv(
    dyn_c: &Circuit,
    reference: &Circuit,
    data_qubits: &[usize],
    inputs: &[State],
    tol: f64,
    opts: &SimOptions,
) -> Result<EquivReport> {
    check_budget(dyn_c, opts)?;
    let k = reference.num_qubits();
    if data_qubits.len() != k {
        return Err(QdcError::LengthMismatch(data_qubits.len(), k));
    }
    let outputs: Vec<usize> = dyn_c.outputs().map(<[usize]>::to_vec).unwrap_or_else(|| data_qubits.to_vec());
    if outputs.len() != k {
        return Err(QdcError::LengthMismatch(outputs.len(), k));
    }
    let n = dyn_c.num_qubits();
    let exhaustive = branch_points(dyn_c) < 63 && (1usize << branch_points(dyn_c)) <= opts.max_branches;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    let mut report = EquivReport {
        equivalent: true,
        worst_fidelity: 1.0,
        worst_purity: 1.0,
        failing_branch: None,
        failing_input: None,
        global_phase_per_branch: Vec::new(),
        branches_checked: 0,
        exhaustive,
    };
    let mut worst_score = f64::INFINITY;

    for (input_idx, input) in inputs.iter().enumerate() {
        if input.len() != 1 << k {
            return Err(QdcError::LengthMismatch(input.len(), 1 << k));
        }
        let expected = run_static(reference, input)?;
        let start = embed_state(input, n, data_qubits);
        let mut check = |b: BranchState| -> Result<()> {
            let (fid, purity, phase) = compare_branch(&b.state, &outputs, &expected);
            report.branches_checked += 1;
            report.global_phase_per_branch.push(phase);
            report.worst_fidelity = report.worst_fidelity.min(fid);
            report.worst_purity = report.worst_purity.min(purity);
            let score = fid.min(purity);
            if score < 1.0 - tol && score < worst_score {
                worst_score = score;
                report.equivalent = false;
                report.failing_branch = Some(outcome_string(&b.outcome));
                report.failing_input = Some(input_idx);
            }
            Ok(())
        };
        let mut walker = Walker { circuit: dyn_c, p_min: opts.p_min, visit: &mut check };
        let cbits = vec![None; dyn_c.num_cbits()];
        if exhaustive {
            walker.walk(0, start, cbits, 1.0, &mut Mode::All)?;
        } else {
            for _ in 0..opts.samples {
                walker.walk(0, start.clone(), cbits.clone(), 1.0, &mut Mode::Sample(&mut rng))?;
            }
        }
    }
    if report.worst_fidelity < 1.0 - tol || report.worst_purity < 1.0 - tol {
        report.equivalent = false;
    }
    Ok(report)
}

/// Returns (fidelity, purity, global phase) of the output register against `expected`.
fn compare_branch(state: &[Complex64], outputs: &[usize], expected: &[Complex64]) -> (f64, f64, f64) {
    let k = outputs.len();
    let out_mask: usize = outputs.iter().map(|&q| 1usize << q).sum();
    let local = |i: usize| -> usize {
        outputs
            .iter()
            .enumerate()
            .map(|(j, &q)| ((i >> q) & 1) << j)
            .sum()
    };
    // Group amplitudes by environment configuration.
    let mut envs: std::collections::BTreeMap<usize, State> = std::collections::BTreeMap::new();
    let mut norm = 0.0;
    for (i, v) in state.iter().enumerate() {
        if v.norm_sqr() == 0.0 {
            continue;
        }
        norm += v.norm_sqr();
        envs.entry(i & !out_mask).or_insert_with(|| vec![ZERO; 1 << k])[local(i)] = *v;
    }
    if norm == 0.0 {
        return (0.0, 0.0, 0.0);
    }
    let mut fid = 0.0;
    let mut rho = vec![ZERO; 1 << (2 * k)];
    let dim = 1usize << k;
    let mut best: Option<(&State, f64)> = None;
    for slice in envs.values() {
        let overlap: Complex64 = expected.iter().zip(slice).map(|(a, b)| a.conj() * b).sum();
        fid += overlap.norm_sqr();
        for a in 0..dim {
            if slice[a] == ZERO {
                continue;
            }
            for b in 0..dim {
                rho[a * dim + b] += slice[a] * slice[b].conj();
            }
        }
        let w: f64 = slice.iter().map(|v| v.norm_sqr()).sum();
        if best.map_or(true, |(_, bw)| w > bw) {
            best = Some((slice, w));
        }
    }
    let purity: f64 = rho.iter().map(|v| v.norm_sqr()).sum::<f64>() / (norm * norm);
    let phase = best
        .map(|(slice, _)| {
            let o: Complex64 = expected.iter().zip(slice).map(|(a, b)| a.conj() * b).sum();
            o.arg()
        })
        .unwrap_or(0.0);
    (fid / norm, purity, phase)
}
