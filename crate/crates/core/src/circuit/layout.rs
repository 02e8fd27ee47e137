use std::collections::{HashMap, VecDeque};

use crate::error::{QdcError, Result};

use super::{Circuit, Instruction};

/// Rectangular grid with an injective logical-qubit placement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridLayout {
    rows: usize,
    cols: usize,
    placement: Vec<Option<(usize, usize)>>,
}

/// A two-qubit instruction joining non-adjacent cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub index: usize,
    pub qubits: (usize, usize),
}

impl GridLayout {
    pub fn new(rows: usize, cols: usize, placement: Vec<Option<(usize, usize)>>) -> Result<Self> {
        let mut seen = HashMap::new();
        for (q, cell) in placement.iter().enumerate() {
            if let Some((r, c)) = *cell {
                if r >= rows || c >= cols {
                    return Err(QdcError::InvalidCircuit(format!(
                        "qubit {q} placed at ({r},{c}) outside {rows}x{cols} grid"
                    )));
                }
                if let Some(other) = seen.insert((r, c), q) {
                    return Err(QdcError::InvalidCircuit(format!(
                        "qubits {other} and {q} share cell ({r},{c})"
                    )));
                }
            }
        }
        Ok(GridLayout { rows, cols, placement })
    }

    /// Qubit `r·cols + c` sits at `(r, c)`.
    pub fn row_major(rows: usize, cols: usize) -> Self {
        let placement = (0..rows * cols).map(|i| Some((i / cols, i % cols))).collect();
        GridLayout { rows, cols, placement }
    }

    /// `n` qubits on a `1 × n` line.
    pub fn line(n: usize) -> Self {
        Self::row_major(1, n)
    }

    /// Qubit `c·rows + r` sits at `(r, c)`: column `c` holds qubits `c·rows..(c+1)·rows`.
    pub fn column_major(rows: usize, cols: usize) -> Self {
        let placement = (0..rows * cols).map(|i| Some((i % rows, i / rows))).collect();
        GridLayout { rows, cols, placement }
    }

    /// Row-by-row boustrophedon walk, so consecutive qubits are always adjacent.
    pub fn snake(rows: usize, cols: usize) -> Self {
        let placement = (0..rows * cols)
            .map(|i| {
                let r = i / cols;
                let c = if r % 2 == 0 { i % cols } else { cols - 1 - i % cols };
                Some((r, c))
            })
            .collect();
        GridLayout { rows, cols, placement }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn num_qubits(&self) -> usize {
        self.placement.len()
    }

    pub fn position(&self, q: usize) -> Option<(usize, usize)> {
        self.placement.get(q).copied().flatten()
    }

    /// Qubit occupying `cell`, if any.
    pub fn qubit_at(&self, cell: (usize, usize)) -> Option<usize> {
        self.placement.iter().position(|p| *p == Some(cell))
    }

    pub fn distance(&self, a: usize, b: usize) -> Result<usize> {
        let (ra, ca) = self.position(a).ok_or(QdcError::Unplaced(a))?;
        let (rb, cb) = self.position(b).ok_or(QdcError::Unplaced(b))?;
        Ok(ra.abs_diff(rb) + ca.abs_diff(cb))
    }

    pub fn adjacent(&self, a: usize, b: usize) -> Result<bool> {
        Ok(self.distance(a, b)? == 1)
    }

    /// Placed qubits adjacent to `q`.
    pub fn neighbors(&self, q: usize) -> Vec<usize> {
        let Some((r, c)) = self.position(q) else {
            return Vec::new();
        };
        let mut cells = vec![(r + 1, c), (r, c + 1)];
        if r > 0 {
            cells.push((r - 1, c));
        }
        if c > 0 {
            cells.push((r, c - 1));
        }
        cells.into_iter().filter_map(|cell| self.qubit_at(cell)).collect()
    }

    /// Shortest path of placed qubits from `a` to `b`, both ends included.
    pub fn shortest_path(&self, a: usize, b: usize) -> Result<Vec<usize>> {
        self.position(a).ok_or(QdcError::Unplaced(a))?;
        self.position(b).ok_or(QdcError::Unplaced(b))?;
        let mut prev = vec![usize::MAX; self.placement.len()];
        let mut queue = VecDeque::from([a]);
        prev[a] = a;
        while let Some(u) = queue.pop_front() {
            if u == b {
                break;
            }
            for v in self.neighbors(u) {
                if prev[v] == usize::MAX {
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if prev[b] == usize::MAX {
            return Err(QdcError::Plan(format!("no path from {a} to {b}")));
        }
        let mut path = vec![b];
        while *path.last().unwrap() != a {
            path.push(prev[*path.last().unwrap()]);
        }
        path.reverse();
        Ok(path)
    }

    /// Every two-qubit instruction whose operands are not grid-adjacent.
    pub fn check(&self, c: &Circuit) -> Result<Vec<Violation>> {
        for q in 0..c.num_qubits() {
            self.position(q).ok_or(QdcError::Unplaced(q))?;
        }
        let mut out = Vec::new();
        for (index, ins) in c.instructions().iter().enumerate() {
            let pairs: Vec<(usize, usize)> = match ins {
                Instruction::Gate2 { a, b, .. } => vec![(*a, *b)],
                // A multi-qubit rotation needs its support to be a connected chain.
                Instruction::PauliRot { qubits, .. } => {
                    qubits.windows(2).map(|w| (w[0], w[1])).collect()
                }
                _ => continue,
            };
            for (a, b) in pairs {
                if !self.adjacent(a, b)? {
                    out.push(Violation { index, qubits: (a, b) });
                }
            }
        }
        Ok(out)
    }
}
