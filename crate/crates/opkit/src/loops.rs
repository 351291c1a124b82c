//! Finite magmas with quasigroup/loop/Moufang predicates, Latin square
//! designs built from loops, and the flag graph of a design.

use crate::{Error, Result};

/// Finite set with a binary operation given by its multiplication table:
/// `table[a][b] = a * b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMagma {
    size: usize,
    table: Vec<Vec<usize>>,
}

impl FiniteMagma {
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self> {
        let size = table.len();
        for row in &table {
            if row.len() != size {
                return Err(Error::Table("table is not square".into()));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= size) {
                return Err(Error::Table(format!("entry {bad} out of range")));
            }
        }
        Ok(FiniteMagma { size, table })
    }

    pub fn from_fn(size: usize, f: impl Fn(usize, usize) -> usize) -> Result<Self> {
        FiniteMagma::new(
            (0..size)
                .map(|a| (0..size).map(|b| f(a, b)).collect())
                .collect(),
        )
    }

    /// The cyclic group Z/n.
    pub fn cyclic(n: usize) -> Self {
        FiniteMagma::from_fn(n, |a, b| (a + b) % n).expect("cyclic table")
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn op(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    /// Latin-square test: every row and every column is a permutation.
    pub fn is_quasigroup(&self) -> bool {
        let s = self.size;
        for row in &self.table {
            let mut seen = vec![false; s];
            for &x in row {
                if seen[x] {
                    return false;
                }
                seen[x] = true;
            }
        }
        for c in 0..s {
            let mut seen = vec![false; s];
            for r in 0..s {
                let x = self.table[r][c];
                if seen[x] {
                    return false;
                }
                seen[x] = true;
            }
        }
        true
    }

    /// The two-sided identity element, if any.
    pub fn identity(&self) -> Option<usize> {
        (0..self.size).find(|&e| (0..self.size).all(|x| self.op(e, x) == x && self.op(x, e) == x))
    }

    pub fn is_loop(&self) -> bool {
        self.is_quasigroup() && self.identity().is_some()
    }

    /// Loop satisfying `(x1*x2)*(x3*x4) = x1*((x2*x3)*x4)` for every
    /// quadruple (exhaustive scan).
    pub fn is_moufang(&self) -> bool {
        if !self.is_loop() {
            return false;
        }
        self.moufang_witness().is_none()
    }

    /// A quadruple violating the near-associativity identity, if any.
    pub fn moufang_witness(&self) -> Option<(usize, usize, usize, usize)> {
        let s = self.size;
        for x1 in 0..s {
            for x2 in 0..s {
                for x3 in 0..s {
                    for x4 in 0..s {
                        let lhs = self.op(self.op(x1, x2), self.op(x3, x4));
                        let rhs = self.op(x1, self.op(self.op(x2, x3), x4));
                        if lhs != rhs {
                            return Some((x1, x2, x3, x4));
                        }
                    }
                }
            }
        }
        None
    }

    /// A triple violating associativity, if any.
    pub fn nonassoc_witness(&self) -> Option<(usize, usize, usize)> {
        let s = self.size;
        for a in 0..s {
            for b in 0..s {
                for c in 0..s {
                    if self.op(self.op(a, b), c) != self.op(a, self.op(b, c)) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }
}

/// Point of a Latin square design: one of three labeled copies of the
/// loop carrier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DesignPoint {
    /// Coordinate class 0, 1, or 2.
    pub class: usize,
    pub element: usize,
}

/// Point/line incidence structure whose lines are the triples
/// `(x1, x2, x3)` with `(x1*x2)*x3 = e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatinDesign {
    carrier: usize,
    lines: Vec<[usize; 3]>,
}

impl LatinDesign {
    pub fn empty() -> Self {
        LatinDesign {
            carrier: 0,
            lines: Vec::new(),
        }
    }

    pub fn carrier_size(&self) -> usize {
        self.carrier
    }

    pub fn point_count(&self) -> usize {
        3 * self.carrier
    }

    pub fn lines(&self) -> &[[usize; 3]] {
        &self.lines
    }

    /// How many lines pass through the pair `(x1, x2)` of the first two
    /// coordinate classes.
    pub fn pair_multiplicity(&self, x1: usize, x2: usize) -> usize {
        self.lines
            .iter()
            .filter(|l| l[0] == x1 && l[1] == x2)
            .count()
    }
}

/// The design of a loop: `|P| = 3s` points, `s^2` lines, each completed
/// uniquely by the quasigroup property.
pub fn design_from_loop(m: &FiniteMagma) -> Result<LatinDesign> {
    if !m.is_loop() {
        return Err(Error::Table("not a loop (no two-sided identity)".into()));
    }
    let e = m.identity().expect("loop identity");
    let s = m.size();
    let mut lines = Vec::with_capacity(s * s);
    for x1 in 0..s {
        for x2 in 0..s {
            let p = m.op(x1, x2);
            // unique x3 with p * x3 = e
            let x3 = (0..s)
                .find(|&c| m.op(p, c) == e)
                .expect("row is a permutation");
            lines.push([x1, x2, x3]);
        }
    }
    Ok(LatinDesign { carrier: s, lines })
}

/// Flag graph of a design: vertices are the lines, flags the incident
/// (point, line) pairs, the boundary map forgets the point, and the
/// involution is the identity.
#[derive(Clone, Debug)]
pub struct DesignGraph {
    vertex_count: usize,
    flags: Vec<(DesignPoint, usize)>,
}

impl DesignGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn flag_count(&self) -> usize {
        self.flags.len()
    }

    pub fn flags(&self) -> &[(DesignPoint, usize)] {
        &self.flags
    }

    pub fn boundary(&self, flag: usize) -> usize {
        self.flags[flag].1
    }

    pub fn involution(&self, flag: usize) -> usize {
        flag
    }

    /// Flags incident to `line`.
    pub fn fiber(&self, line: usize) -> Vec<usize> {
        (0..self.flags.len())
            .filter(|&f| self.boundary(f) == line)
            .collect()
    }
}

pub fn design_graph(d: &LatinDesign) -> DesignGraph {
    let mut flags = Vec::with_capacity(3 * d.lines().len());
    for (li, line) in d.lines().iter().enumerate() {
        for (class, &element) in line.iter().enumerate() {
            flags.push((DesignPoint { class, element }, li));
        }
    }
    DesignGraph {
        vertex_count: d.lines().len(),
        flags,
    }
}
