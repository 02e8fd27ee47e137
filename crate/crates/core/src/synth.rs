//! Linear-nearest-neighbour synthesis of a Clifford tableau in two parts:
//! a prefix `S - CZ - CX` that fixes |0…0⟩, and a suffix `H - S - CZ - H - P`.

use crate::circuit::{Circuit, Instruction};
use crate::error::{QdcError, Result};
use crate::pauli::{PauliRotation, PauliString};
use crate::tableau::{CliffordGate, CliffordTableau};

/// Which layer of the normal form an instruction belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Layer {
    PrefixS,
    PrefixCz,
    PrefixCx,
    H1,
    S,
    Cz,
    H2,
    /// Diagonal phase layer at the very end.
    P,
    /// Bit flips fixing generator signs; not diagonal, so never dropped.
    Pauli,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SynthesizedClifford {
    pub prefix: Circuit,
    pub suffix: Circuit,
    pub prefix_tags: Vec<Layer>,
    pub suffix_tags: Vec<Layer>,
}

impl SynthesizedClifford {
    pub fn num_qubits(&self) -> usize {
        self.suffix.num_qubits()
    }

    /// Tableau of prefix then suffix.
    pub fn tableau(&self) -> Result<CliffordTableau> {
        let n = self.num_qubits();
        let mut gates = self.prefix.clifford_gates()?;
        gates.extend(self.suffix.clifford_gates()?);
        CliffordTableau::from_gates(n, &gates)
    }

    pub fn suffix_tableau(&self) -> Result<CliffordTableau> {
        CliffordTableau::from_gates(self.num_qubits(), &self.suffix.clifford_gates()?)
    }

    pub fn prefix_tableau(&self) -> Result<CliffordTableau> {
        CliffordTableau::from_gates(self.num_qubits(), &self.prefix.clifford_gates()?)
    }
}

type Bits = Vec<bool>;

fn xor_into(a: &mut [bool], b: &[bool]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x ^= *y;
    }
}

/// Gauss-Jordan on the first `n` columns of `rows`; returns pivot columns.
fn rref(rows: &mut [Bits], n: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][col]) else {
            continue;
        };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && rows[i][col] {
                let pivot = rows[r].clone();
                xor_into(&mut rows[i], &pivot);
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

/// Adjacent-only realisation of `CX(c, t)` on a line: `4(d−1)` gates for distance `d`.
fn lnn_cx(c: usize, t: usize, out: &mut Vec<CliffordGate>) {
    let d = c.abs_diff(t);
    if d <= 1 {
        out.push(CliffordGate::CX(c, t));
        return;
    }
    let step = |k: usize| if t > c { c + k } else { c - k };
    let a: Vec<CliffordGate> = (0..d - 1).map(|k| CliffordGate::CX(step(k), step(k + 1))).collect();
    let b: Vec<CliffordGate> = (1..d - 1).map(|k| CliffordGate::CX(step(k), step(k + 1))).collect();
    let last = CliffordGate::CX(step(d - 1), t);
    for chain in [&a, &b] {
        out.extend(chain.iter().copied());
        out.push(last);
        out.extend(chain.iter().rev().copied());
    }
}

/// CX network whose tableau sends `Z_i` to `Z^{rows[i]}`.
fn cx_network(rows: &[Bits]) -> Result<Vec<CliffordGate>> {
    let n = rows.len();
    // Appending CX(c, t) to a circuit adds column t of this matrix into column c.
    let mut m: Vec<Bits> = rows.to_vec();
    let mut ops = Vec::new();
    let col_add = |m: &mut Vec<Bits>, ops: &mut Vec<(usize, usize)>, c: usize, t: usize| {
        for row in m.iter_mut() {
            if row[t] {
                row[c] ^= true;
            }
        }
        ops.push((c, t));
    };
    // Rows above `i` are already unit vectors and are never disturbed.
    for i in 0..n {
        if !m[i][i] {
            let j = (i + 1..n)
                .filter(|&j| m[i][j])
                .min_by_key(|&j| j - i)
                .ok_or_else(|| QdcError::Plan("singular CX matrix".into()))?;
            col_add(&mut m, &mut ops, i, j);
        }
        for j in 0..n {
            if j != i && m[i][j] {
                col_add(&mut m, &mut ops, j, i);
            }
        }
    }
    if (0..n).any(|i| (0..n).any(|j| m[i][j] != (i == j))) {
        return Err(QdcError::Plan("CX network elimination did not reach identity".into()));
    }
    // The network is the inverse of the reducing sequence.
    let mut gates = Vec::new();
    for &(c, t) in ops.iter().rev() {
        lnn_cx(c, t, &mut gates);
    }
    Ok(gates)
}

/// CZ on every edge of the symmetric matrix `g` using an odd-even transposition
/// network of adjacent SWAPs, undone afterwards so qubits end where they began.
fn cz_network(g: &[Bits]) -> Vec<CliffordGate> {
    let n = g.len();
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| g[i][j])
        .collect();
    if edges.is_empty() {
        return Vec::new();
    }
    let lo = edges.iter().map(|e| e.0).min().unwrap();
    let hi = edges.iter().map(|e| e.1).max().unwrap();
    let mut pending = edges.len();
    let mut done = vec![vec![false; n]; n];
    // at[pos] = logical qubit currently sitting at line position pos.
    let mut at: Vec<usize> = (0..n).collect();
    let mut gates = Vec::new();
    let mut swaps: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut round = 0;
    while pending > 0 {
        let start = lo + round % 2;
        let pairs: Vec<(usize, usize)> = (start..hi).step_by(2).map(|p| (p, p + 1)).collect();
        for &(p, q) in &pairs {
            let (u, v) = (at[p], at[q]);
            if g[u][v] && !done[u][v] {
                done[u][v] = true;
                done[v][u] = true;
                pending -= 1;
                gates.push(CliffordGate::CZ(p, q));
            }
        }
        if pending == 0 {
            break;
        }
        for &(p, q) in &pairs {
            gates.push(CliffordGate::Swap(p, q));
            at.swap(p, q);
        }
        swaps.push(pairs);
        round += 1;
    }
    for pairs in swaps.iter().rev() {
        for &(p, q) in pairs {
            gates.push(CliffordGate::Swap(p, q));
        }
    }
    gates
}

struct Builder {
    gates: Vec<CliffordGate>,
    tags: Vec<Layer>,
}

impl Builder {
    fn new() -> Self {
        Builder { gates: Vec::new(), tags: Vec::new() }
    }

    fn extend(&mut self, layer: Layer, gates: impl IntoIterator<Item = CliffordGate>) {
        for g in gates {
            self.gates.push(g);
            self.tags.push(layer);
        }
    }

    fn circuit(&self, n: usize) -> Result<Circuit> {
        Circuit::from_clifford_gates(n, &self.gates)
    }
}

/// Synthesizes `t` into the two-part layer form with adjacent-only two-qubit gates.
pub fn synthesize_lnn(t: &CliffordTableau) -> Result<SynthesizedClifford> {
    let n = t.num_qubits();

    // Stabilizer group of t|0…0⟩, as rows (x | z).
    let mut rows: Vec<Bits> = (0..n)
        .map(|i| {
            let p = t.z_image(i);
            p.x_bits().iter().chain(p.z_bits()).copied().collect()
        })
        .collect();
    let pivots = rref(&mut rows, n);
    let b_set: Vec<bool> = (0..n).map(|j| !pivots.contains(&j)).collect();
    for row in rows.iter_mut() {
        for j in 0..n {
            if b_set[j] {
                row.swap(j, n + j);
            }
        }
    }
    let full = rref(&mut rows, n);
    if full.len() != n {
        return Err(QdcError::Plan("Hadamard choice left a singular X block".into()));
    }
    let gamma: Vec<Bits> = rows.iter().map(|r| r[n..].to_vec()).collect();
    let sigma: Vec<bool> = (0..n).map(|j| gamma[j][j]).collect();
    let mut g_off = gamma.clone();
    for (j, row) in g_off.iter_mut().enumerate() {
        row[j] = false;
    }
    let touched: Vec<bool> = (0..n).map(|j| sigma[j] || g_off[j].iter().any(|&b| b)).collect();

    // Suffix without sign fixes; untouched qubits cancel their H pair.
    let mut suffix = Builder::new();
    suffix.extend(
        Layer::H1,
        (0..n).filter(|&j| touched[j] || !b_set[j]).map(CliffordGate::H),
    );
    suffix.extend(Layer::S, (0..n).filter(|&j| sigma[j]).map(CliffordGate::S));
    suffix.extend(Layer::Cz, cz_network(&g_off));
    suffix.extend(Layer::H2, (0..n).filter(|&j| b_set[j] && touched[j]).map(CliffordGate::H));
    let v = CliffordTableau::from_gates(n, &suffix.gates)?;

    // Q = V† U fixes the Z subgroup.
    let q = v.inverse().compose(t)?;
    let mut z_rows = Vec::with_capacity(n);
    for i in 0..n {
        let img = q.z_image(i);
        if img.x_bits().iter().any(|&b| b) {
            return Err(QdcError::Plan("prefix is not Z-preserving".into()));
        }
        z_rows.push(img.z_bits().to_vec());
    }
    let cx = cx_network(&z_rows)?;
    let ncx = CliffordTableau::from_gates(n, &cx)?;
    let delta = ncx.inverse().compose(&q)?;
    let mut g1 = vec![vec![false; n]; n];
    let mut d1 = vec![false; n];
    for i in 0..n {
        let img = delta.x_image(i);
        for j in 0..n {
            if img.x(j) != (i == j) {
                return Err(QdcError::Plan("diagonal remainder has X support".into()));
            }
            if i == j {
                d1[i] = img.z(j);
            } else {
                g1[i][j] = img.z(j);
            }
        }
    }

    let mut prefix = Builder::new();
    prefix.extend(Layer::PrefixS, (0..n).filter(|&j| d1[j]).map(CliffordGate::S));
    prefix.extend(Layer::PrefixCz, cz_network(&g1));
    prefix.extend(Layer::PrefixCx, cx);

    // Generator signs: find a Pauli R with U = R · (sign-free circuit).
    let mut all = prefix.gates.clone();
    all.extend(suffix.gates.iter().copied());
    let t0 = CliffordTableau::from_gates(n, &all)?;
    let mut r0 = PauliString::identity(n);
    for i in 0..n {
        let flip_x = t0.x_image(i).is_negative() != t.x_image(i).is_negative();
        let flip_z = t0.z_image(i).is_negative() != t.z_image(i).is_negative();
        r0.set_bits(i, flip_z, flip_x);
    }
    let r = t0.conjugate(&r0)?;
    suffix.extend(Layer::P, (0..n).filter(|&j| r.z(j)).map(CliffordGate::Z));
    suffix.extend(Layer::Pauli, (0..n).filter(|&j| r.x(j)).map(CliffordGate::X));

    Ok(SynthesizedClifford {
        prefix: prefix.circuit(n)?,
        suffix: suffix.circuit(n)?,
        prefix_tags: prefix.tags,
        suffix_tags: suffix.tags,
    })
}

/// Moves the prefix to the front of the circuit, where it acts on |0…0⟩ trivially,
/// and conjugates the phasors accordingly. Returns the new phasors and the suffix.
pub fn delete_trivial_prefix(
    s: &SynthesizedClifford,
    phasors: &[PauliRotation],
) -> Result<(Vec<PauliRotation>, Circuit)> {
    for ins in s.prefix.instructions() {
        match ins.as_clifford() {
            Some(CliffordGate::CX(..) | CliffordGate::CZ(..) | CliffordGate::Swap(..) | CliffordGate::S(_) | CliffordGate::Sdg(_) | CliffordGate::Z(_)) => {}
            _ => return Err(QdcError::Plan(format!("prefix gate {ins:?} does not fix |0…0⟩"))),
        }
    }
    let pt = s.prefix_tableau()?;
    let moved = phasors
        .iter()
        .map(|r| pt.conjugate_rotation(r))
        .collect::<Result<Vec<_>>>()?;
    Ok((moved, s.suffix.clone()))
}

/// How the output of the synthesized Clifford is consumed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Downstream {
    /// Every qubit measured in the Z basis right after the Clifford.
    ZMeasurement,
    /// The output state itself matters.
    State,
}

/// Removes the final diagonal phase layer, which cannot change Z-basis statistics.
pub fn drop_phase_layer(s: &SynthesizedClifford, downstream: Downstream) -> Result<SynthesizedClifford> {
    if downstream != Downstream::ZMeasurement {
        return Err(QdcError::Plan("phase layer may only be dropped before Z measurement".into()));
    }
    let n = s.num_qubits();
    let mut suffix = Circuit::new(n, 0);
    let mut tags = Vec::new();
    for (ins, &tag) in s.suffix.instructions().iter().zip(&s.suffix_tags) {
        if tag != Layer::P {
            suffix.push(ins.clone())?;
            tags.push(tag);
        }
    }
    Ok(SynthesizedClifford {
        prefix: s.prefix.clone(),
        suffix,
        prefix_tags: s.prefix_tags.clone(),
        suffix_tags: tags,
    })
}

/// `P' = C† P C`: measuring `P'` before `C` gives the same expectation as `P` after it.
pub fn expectation_mode(t: &CliffordTableau, observable: &PauliString) -> Result<PauliString> {
    t.inverse().conjugate(observable)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DepthBudget {
    /// `Σ min(d_i, 2n)` over the separate sections.
    pub sectioned: usize,
    /// `2nm` for `m` sections.
    pub bound: usize,
    /// Depth of the single combined synthesis.
    pub combined: usize,
}

pub fn depth_budget_report(section_depths: &[usize], n: usize, combined: usize) -> DepthBudget {
    DepthBudget {
        sectioned: section_depths.iter().map(|&d| d.min(2 * n)).sum(),
        bound: 2 * n * section_depths.len(),
        combined,
    }
}

/// Whether every two-qubit instruction acts on neighbouring line positions.
pub fn is_lnn(c: &Circuit) -> bool {
    c.instructions().iter().all(|ins| match ins {
        Instruction::Gate2 { a, b, .. } => a.abs_diff(*b) == 1,
        _ => true,
    })
}
