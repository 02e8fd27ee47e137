//! Reference compiler: every phasor as a serial CX star, routed on the grid with
//! greedy shortest-path SWAPs.

use crate::circuit::{Circuit, Gate2, GridLayout, Instruction};
use crate::error::{QdcError, Result};
use crate::pauli::{Pauli, PauliRotation, PauliString};

/// Tracks where each logical qubit sits while gates are routed.
#[derive(Clone, Debug)]
pub struct Router {
    layout: GridLayout,
    /// Logical → physical.
    pos: Vec<usize>,
    /// Physical → logical, if occupied.
    at: Vec<Option<usize>>,
    initial: Vec<usize>,
    out: Circuit,
    swaps: usize,
}

impl Router {
    /// Logical qubit `i` starts on cell `i` of a boustrophedon walk of the grid.
    pub fn new(n: usize, rows: usize, cols: usize) -> Result<Self> {
        if n > rows * cols {
            return Err(QdcError::Config(format!("{n} qubits do not fit a {rows}x{cols} grid")));
        }
        let layout = GridLayout::row_major(rows, cols);
        let snake = GridLayout::snake(rows, cols);
        let pos: Vec<usize> = (0..n)
            .map(|i| {
                let (r, c) = snake.position(i).expect("snake covers the grid");
                r * cols + c
            })
            .collect();
        let mut at = vec![None; rows * cols];
        for (i, &p) in pos.iter().enumerate() {
            at[p] = Some(i);
        }
        Ok(Router {
            layout,
            initial: pos.clone(),
            pos,
            at,
            out: Circuit::new(rows * cols, 0),
            swaps: 0,
        })
    }

    pub fn swaps(&self) -> usize {
        self.swaps
    }

    fn swap_cells(&mut self, p: usize, q: usize) -> Result<()> {
        self.out.push(Instruction::Gate2 { kind: Gate2::Swap, a: p, b: q })?;
        self.swaps += 1;
        let (lp, lq) = (self.at[p], self.at[q]);
        self.at[p] = lq;
        self.at[q] = lp;
        if let Some(l) = lp {
            self.pos[l] = q;
        }
        if let Some(l) = lq {
            self.pos[l] = p;
        }
        Ok(())
    }

    /// Moves logical `a` next to logical `b`.
    fn bring_together(&mut self, a: usize, b: usize) -> Result<()> {
        let path = self.layout.shortest_path(self.pos[a], self.pos[b])?;
        for w in path.windows(2).take(path.len().saturating_sub(2)) {
            self.swap_cells(w[0], w[1])?;
        }
        Ok(())
    }

    /// Appends a logical instruction, inserting SWAPs as needed.
    pub fn push(&mut self, ins: &Instruction) -> Result<()> {
        if ins.is_dynamic() {
            return Err(QdcError::Unsupported(format!("baseline routing of {ins:?}")));
        }
        match ins {
            Instruction::Gate2 { a, b, .. } => self.bring_together(*a, *b)?,
            Instruction::PauliRot { rotation, qubits } => {
                for g in star(rotation, qubits) {
                    self.push(&g)?;
                }
                return Ok(());
            }
            _ => {}
        }
        self.out.push(ins.remap(&self.pos, 0))
    }

    /// Routed circuit; `outputs` records the final placement.
    pub fn finish(mut self) -> Result<(Circuit, Vec<usize>)> {
        self.out.set_outputs(self.pos.clone())?;
        Ok((self.out, self.initial))
    }
}

/// Serial star: basis change, CX ladder onto the last support qubit, Rz, and the mirror.
pub fn star(rotation: &PauliRotation, qubits: &[usize]) -> Vec<Instruction> {
    let p: &PauliString = rotation.pauli();
    let support: Vec<usize> = p.support();
    if support.is_empty() {
        return Vec::new();
    }
    let mut pre = Vec::new();
    let mut post = Vec::new();
    for &k in &support {
        let q = qubits[k];
        match p.get(k) {
            Pauli::X => {
                pre.push(Instruction::h(q));
                post.push(Instruction::h(q));
            }
            Pauli::Y => {
                pre.push(Instruction::sdg(q));
                pre.push(Instruction::h(q));
                post.push(Instruction::s(q));
                post.push(Instruction::h(q));
            }
            _ => {}
        }
    }
    let last = qubits[*support.last().unwrap()];
    let ladder: Vec<Instruction> = support[..support.len() - 1]
        .iter()
        .map(|&k| Instruction::cx(qubits[k], last))
        .collect();
    let mut out = pre;
    out.extend(ladder.iter().cloned());
    out.push(Instruction::rz(rotation.angle(), last));
    out.extend(ladder.into_iter().rev());
    out.extend(post.into_iter().rev());
    out
}

/// Routes a static circuit onto a `rows × cols` grid.
pub fn baseline_compile(source: &Circuit, rows: usize, cols: usize) -> Result<(Circuit, Vec<usize>)> {
    let mut r = Router::new(source.num_qubits(), rows, cols)?;
    for ins in source.instructions() {
        r.push(ins)?;
    }
    r.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{channel_equiv, default_inputs, SimOptions};

    fn phasor(p: &str, angle: f64) -> Instruction {
        let ps: PauliString = p.parse().unwrap();
        crate::passes::rotation_instruction(&PauliRotation::new(ps, angle).unwrap())
    }

    #[test]
    fn adjacent_weight_two() {
        let mut c = Circuit::new(2, 0);
        c.push(phasor("XZ", 0.3)).unwrap();
        let (out, _) = baseline_compile(&c, 1, 2).unwrap();
        assert_eq!(out.cx_count(), 2);
    }

    #[test]
    fn opposite_corners() {
        // Logical 0 and 8 of a 3x3 snake sit on opposite corners, 4 steps apart.
        let mut c = Circuit::new(9, 0);
        c.push(phasor("ZIIIIIIIZ", 0.3)).unwrap();
        let mut r = Router::new(9, 3, 3).unwrap();
        r.push(&c.instructions()[0]).unwrap();
        assert_eq!(r.swaps(), 3);
        let (out, _) = r.finish().unwrap();
        assert_eq!(out.cx_count(), 2 + 3 * 3);
        assert!(GridLayout::row_major(3, 3).check(&out).unwrap().is_empty());
    }

    #[test]
    fn routed_equals_source() {
        let mut c = Circuit::new(3, 0);
        c.push(phasor("XYZ", 0.4)).unwrap();
        c.push(Instruction::cx(2, 0)).unwrap();
        c.push(phasor("ZIY", -1.2)).unwrap();
        c.push(Instruction::h(1)).unwrap();
        let (out, inputs) = baseline_compile(&c, 2, 2).unwrap();
        assert!(GridLayout::row_major(2, 2).check(&out).unwrap().is_empty());
        let r = channel_equiv(&out, &c, &inputs, &default_inputs(3, 3), 1e-9, &SimOptions::default()).unwrap();
        assert!(r.equivalent, "{r:?}");
    }
}
