//! Kraus-form tree quantum channels: application along leaf paths,
//! operadic composition by grafting, the signed edge-contraction
//! differential with its re-normalized edge operators, and the convex
//! variant acting on density matrices.

use num_complex::Complex64;

use crate::cmatrix::CMatrix;
use crate::density::DensityMatrix;
use crate::prob::ProbVector;
use crate::trees::PlanarTree;
use crate::{Error, Result};

/// Tolerance on the per-vertex normalization `sum A_e* A_e = I`.
pub const CHAN_TOL: f64 = 1e-9;
/// Weights below this are dropped by the algebra action.
pub const WEIGHT_TOL: f64 = 1e-12;
/// Eigenvalue clamp used by the PSD factorizations in the differential.
pub const FACTOR_CLAMP: f64 = 1e-12;

/// Tree quantum channel: one `dim x dim` operator per edge, normalized at
/// every vertex with incoming edges.
#[derive(Clone, Debug, PartialEq)]
pub struct TreeKrausChannel {
    dim: usize,
    tree: PlanarTree,
    /// Edge operators indexed by the child endpoint's DFS node id;
    /// slot 0 (the root) stays empty.
    ops: Vec<Option<CMatrix>>,
}

impl TreeKrausChannel {
    /// Builds and validates a channel from a tree and node-indexed edge
    /// operators (`ops[id]` is the operator on the edge from node `id` to
    /// its parent; `ops[0]` must be `None`).
    pub fn new(dim: usize, tree: PlanarTree, ops: Vec<Option<CMatrix>>) -> Result<Self> {
        let ix = tree.index();
        if ops.len() != ix.parent.len() {
            return Err(Error::Channel(format!(
                "{} operators for {} nodes",
                ops.len(),
                ix.parent.len()
            )));
        }
        if ops[0].is_some() {
            return Err(Error::Channel("root carries no incoming edge".into()));
        }
        for id in 1..ops.len() {
            match &ops[id] {
                None => return Err(Error::Channel(format!("edge {id} missing operator"))),
                Some(a) if !a.is_square() || a.rows() != dim => {
                    return Err(Error::Channel(format!(
                        "edge {id} operator has wrong shape"
                    )));
                }
                _ => {}
            }
        }
        for (v, kids) in ix.children.iter().enumerate() {
            if kids.is_empty() {
                continue;
            }
            let sum = kids.iter().fold(CMatrix::zeros(dim, dim), |acc, &c| {
                let a = ops[c].as_ref().expect("validated");
                acc.add(&a.adjoint().mul(a))
            });
            let dev = sum.max_abs_diff(&CMatrix::identity(dim));
            if dev > CHAN_TOL {
                return Err(Error::Channel(format!(
                    "vertex {v} normalization off by {dev:.3e}"
                )));
            }
        }
        Ok(TreeKrausChannel { dim, tree, ops })
    }

    /// The identity channel on the unit tree (no edges).
    pub fn unit(dim: usize) -> Self {
        TreeKrausChannel {
            dim,
            tree: PlanarTree::leaf(),
            ops: vec![None],
        }
    }

    /// Corolla channel from a flat Kraus family (`sum A_i* A_i = I`).
    pub fn corolla(dim: usize, kraus: Vec<CMatrix>) -> Result<Self> {
        let n = kraus.len();
        let mut ops = vec![None];
        ops.extend(kraus.into_iter().map(Some));
        TreeKrausChannel::new(dim, PlanarTree::corolla(n), ops)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tree(&self) -> &PlanarTree {
        &self.tree
    }

    pub fn leaf_count(&self) -> usize {
        self.tree.leaf_count()
    }

    pub fn edge_op(&self, node: usize) -> Option<&CMatrix> {
        self.ops.get(node).and_then(Option::as_ref)
    }

    /// Composite operators along each leaf-to-root path, leaf-side factor
    /// leftmost: `A_gamma_i = A_{e_i,1} ... A_{e_i,m_i}`.
    pub fn path_operators(&self) -> Vec<CMatrix> {
        let ix = self.tree.index();
        let mut acc: Vec<CMatrix> = Vec::with_capacity(ix.parent.len());
        for id in 0..ix.parent.len() {
            match ix.parent[id] {
                None => acc.push(CMatrix::identity(self.dim)),
                Some(p) => {
                    let a = self.ops[id].as_ref().expect("edge operator");
                    acc.push(a.mul(&acc[p]));
                }
            }
        }
        ix.leaves.iter().map(|&l| acc[l].clone()).collect()
    }

    /// Applies the channel: `rho -> sum_i A_gamma_i rho A_gamma_i*`.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: rho.dim(),
            });
        }
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for a in self.path_operators() {
            out = out.add(&a.mul(rho.matrix()).mul(&a.adjoint()));
        }
        DensityMatrix::new(out)
    }

    /// Operadic composition: graft the part trees onto the leaves and take
    /// the union of the edge-operator assignments.
    pub fn compose(&self, parts: &[TreeKrausChannel]) -> Result<TreeKrausChannel> {
        let n = self.leaf_count();
        if parts.len() != n {
            return Err(Error::ArityMismatch {
                expected: n,
                got: parts.len(),
            });
        }
        if let Some(bad) = parts.iter().find(|p| p.dim != self.dim) {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: bad.dim,
            });
        }
        let part_trees: Vec<PlanarTree> = parts.iter().map(|p| p.tree.clone()).collect();
        let tree = self.tree.graft(&part_trees)?;
        let mut ops = Vec::with_capacity(tree.node_count());
        let mut outer_pos = 0usize;
        let mut leaf_ct = 0usize;
        emit_grafted_ops(
            &self.tree,
            &self.ops,
            parts,
            &mut outer_pos,
            &mut leaf_ct,
            &mut ops,
        );
        TreeKrausChannel::new(self.dim, tree, ops)
    }

    /// Insertion `self o_i part` through the full composition with unit
    /// channels elsewhere.
    pub fn insert(&self, i: usize, part: &TreeKrausChannel) -> Result<TreeKrausChannel> {
        let n = self.leaf_count();
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange { index: i, len: n });
        }
        let parts: Vec<TreeKrausChannel> = (1..=n)
            .map(|j| {
                if j == i {
                    part.clone()
                } else {
                    TreeKrausChannel::unit(self.dim)
                }
            })
            .collect();
        self.compose(&parts)
    }

    /// The channel differential: one term per un-contraction `tau'` with
    /// `tau = tau'/e`, splitting a vertex's incoming edges into a
    /// contiguous planar span (the new lower vertex) and the rest. The new
    /// edge carries `sqrt(B_s)` and each span edge is re-normalized to
    /// `sqrt(A*A + B_t/N_s)`, so both vertex conditions hold in `tau'`.
    /// Signs are `(-1)^{planar position of e in tau'}`.
    pub fn differential(&self) -> Result<FormalChannelSum> {
        let ix = self.tree.index();
        let mut terms = Vec::new();
        for v in 0..ix.parent.len() {
            let kids = &ix.children[v];
            let k = kids.len();
            if k < 3 {
                continue;
            }
            for start in 0..k {
                for len in 2..k {
                    if start + len > k {
                        break;
                    }
                    let span: Vec<usize> = kids[start..start + len].to_vec();
                    let rest: Vec<usize> =
                        kids.iter().copied().filter(|c| !span.contains(c)).collect();
                    let b_s = span
                        .iter()
                        .fold(CMatrix::zeros(self.dim, self.dim), |acc, &c| {
                            let a = self.ops[c].as_ref().unwrap();
                            acc.add(&a.adjoint().mul(a))
                        });
                    let b_t = rest
                        .iter()
                        .fold(CMatrix::zeros(self.dim, self.dim), |acc, &c| {
                            let a = self.ops[c].as_ref().unwrap();
                            acc.add(&a.adjoint().mul(a))
                        });
                    let new_edge = b_s.psd_sqrt(FACTOR_CLAMP)?;
                    let scaled_bt = b_t.scale_re(1.0 / len as f64);
                    let mut span_ops = Vec::with_capacity(len);
                    for &c in &span {
                        let a = self.ops[c].as_ref().unwrap();
                        span_ops.push(a.adjoint().mul(a).add(&scaled_bt).psd_sqrt(FACTOR_CLAMP)?);
                    }
                    let (tree, ops, new_node) =
                        self.expand_vertex(v, start, len, &new_edge, &span_ops);
                    let channel = TreeKrausChannel::new(self.dim, tree, ops)?;
                    let sign = if (new_node - 1) % 2 == 0 { 1.0 } else { -1.0 };
                    terms.push((sign, channel));
                }
            }
        }
        Ok(FormalChannelSum { terms })
    }

    /// Rebuilds the tree with children `start..start+len` of vertex `v`
    /// moved under a fresh vertex. Returns the new tree, its node-indexed
    /// ops, and the new vertex's DFS id.
    fn expand_vertex(
        &self,
        v: usize,
        start: usize,
        len: usize,
        new_edge: &CMatrix,
        span_ops: &[CMatrix],
    ) -> (PlanarTree, Vec<Option<CMatrix>>, usize) {
        struct Builder<'a> {
            ch: &'a TreeKrausChannel,
            v: usize,
            start: usize,
            len: usize,
            new_edge: &'a CMatrix,
            span_ops: &'a [CMatrix],
            pos: usize,
            new_node: usize,
            out_ops: Vec<Option<CMatrix>>,
        }
        impl Builder<'_> {
            // `op` is the operator on the edge into this node in the NEW tree
            fn walk(&mut self, node: &PlanarTree, op: Option<CMatrix>) -> PlanarTree {
                let my_id = self.pos;
                self.pos += 1;
                let here = my_id == self.v;
                self.out_ops.push(op);
                let mut new_children = Vec::new();
                if here {
                    let kids = node.children();
                    for c in kids.iter().take(self.start) {
                        let cop = self.subtree_root_op(c);
                        new_children.push(self.walk_plain(c, cop));
                    }
                    // fresh vertex adopting the span
                    self.new_node = self.out_ops.len();
                    self.out_ops.push(Some(self.new_edge.clone()));
                    let mut inner = Vec::new();
                    let mut pending = Vec::new();
                    for (t, c) in kids[self.start..self.start + self.len].iter().enumerate() {
                        pending.push((c, self.span_ops[t].clone()));
                    }
                    for (c, cop) in pending {
                        inner.push(self.walk_plain(c, Some(cop)));
                    }
                    new_children.push(PlanarTree::node(inner));
                    for c in kids.iter().skip(self.start + self.len) {
                        let cop = self.subtree_root_op(c);
                        new_children.push(self.walk_plain(c, cop));
                    }
                } else {
                    for c in node.children() {
                        let cop = self.subtree_root_op(c);
                        new_children.push(self.walk(c, cop));
                    }
                    // when `v` sits deeper, walk() above handles it
                }
                if new_children.is_empty() {
                    node.clone()
                } else {
                    PlanarTree::node(new_children)
                }
            }

            // copies a subtree verbatim (no split inside), consuming ids
            fn walk_plain(&mut self, node: &PlanarTree, op: Option<CMatrix>) -> PlanarTree {
                self.walk(node, op)
            }

            fn subtree_root_op(&mut self, _node: &PlanarTree) -> Option<CMatrix> {
                // the operator of the edge into the child we are about to
                // visit, read off the original preorder position
                self.ch.ops[self.pos].clone()
            }
        }
        let mut b = Builder {
            ch: self,
            v,
            start,
            len,
            new_edge,
            span_ops,
            pos: 0,
            new_node: 0,
            out_ops: Vec::new(),
        };
        let tree = b.walk(&self.tree, None);
        (tree, b.out_ops, b.new_node)
    }

    /// Action on a tuple of states: mixture of the per-leaf conjugations
    /// weighted by `w_i = Tr(A_gamma_i* A_gamma_i rho_i)` normalized to
    /// total mass one. Weights below [`WEIGHT_TOL`] drop out.
    pub fn algebra_action(&self, states: &[DensityMatrix]) -> Result<DensityMatrix> {
        let n = self.leaf_count();
        if states.len() != n {
            return Err(Error::ArityMismatch {
                expected: n,
                got: states.len(),
            });
        }
        if let Some(bad) = states.iter().find(|s| s.dim() != self.dim) {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: bad.dim(),
            });
        }
        let paths = self.path_operators();
        let mut weights = Vec::with_capacity(n);
        let mut conjugated = Vec::with_capacity(n);
        for (a, rho) in paths.iter().zip(states) {
            let m = a.mul(rho.matrix()).mul(&a.adjoint());
            let w = m.trace().re;
            weights.push(w);
            conjugated.push(m);
        }
        let total: f64 = weights.iter().filter(|&&w| w > WEIGHT_TOL).sum();
        if total <= WEIGHT_TOL {
            return Err(Error::Channel("all action weights vanish".into()));
        }
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for (w, m) in weights.iter().zip(&conjugated) {
            if *w > WEIGHT_TOL {
                // p_i * rho_tilde_i = (w_i/total) * m/w_i
                out = out.add(&m.scale_re(1.0 / total));
            }
        }
        DensityMatrix::new(out)
    }
}

fn emit_grafted_ops(
    outer: &PlanarTree,
    outer_ops: &[Option<CMatrix>],
    parts: &[TreeKrausChannel],
    outer_pos: &mut usize,
    leaf_ct: &mut usize,
    out: &mut Vec<Option<CMatrix>>,
) {
    let my_op = outer_ops[*outer_pos].clone();
    *outer_pos += 1;
    if outer.is_leaf() {
        let part = &parts[*leaf_ct];
        *leaf_ct += 1;
        // the grafted root inherits the leaf's incoming edge operator
        out.push(my_op);
        out.extend(part.ops[1..].iter().cloned());
    } else {
        out.push(my_op);
        for c in outer.children() {
            emit_grafted_ops(c, outer_ops, parts, outer_pos, leaf_ct, out);
        }
    }
}

/// Formal (or convex) combination of tree channels.
#[derive(Clone, Debug, PartialEq)]
pub struct FormalChannelSum {
    pub terms: Vec<(f64, TreeKrausChannel)>,
}

impl FormalChannelSum {
    /// Convex combination: weights on the simplex, shared dimension.
    pub fn convex(weights: &ProbVector, channels: Vec<TreeKrausChannel>) -> Result<Self> {
        if channels.len() != weights.len() {
            return Err(Error::ArityMismatch {
                expected: weights.len(),
                got: channels.len(),
            });
        }
        if let Some(first) = channels.first() {
            let dim = first.dim;
            if channels.iter().any(|c| c.dim != dim) {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: 0,
                });
            }
        }
        Ok(FormalChannelSum {
            terms: weights.as_slice().iter().copied().zip(channels).collect(),
        })
    }

    pub fn dim(&self) -> Option<usize> {
        self.terms.first().map(|(_, c)| c.dim)
    }

    pub fn total_weight(&self) -> f64 {
        self.terms.iter().map(|(w, _)| w).sum()
    }

    /// Signed application; the result need not be a state.
    pub fn apply_raw(&self, rho: &DensityMatrix) -> Result<CMatrix> {
        let dim = self
            .dim()
            .ok_or_else(|| Error::Channel("empty sum".into()))?;
        let mut out = CMatrix::zeros(dim, dim);
        for (w, c) in &self.terms {
            out = out.add(&c.apply(rho)?.into_matrix().scale(Complex64::new(*w, 0.0)));
        }
        Ok(out)
    }

    /// Application of a convex combination: a valid state.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        DensityMatrix::new(self.apply_raw(rho)?)
    }

    /// Termwise composition: full product expansion with multiplied
    /// weights (no signs).
    pub fn compose(&self, parts: &[FormalChannelSum]) -> Result<FormalChannelSum> {
        let mut terms: Vec<(f64, TreeKrausChannel)> = Vec::new();
        for (w, c) in &self.terms {
            let n = c.leaf_count();
            if parts.len() != n {
                return Err(Error::ArityMismatch {
                    expected: n,
                    got: parts.len(),
                });
            }
            // cartesian product over the part sums
            let mut stack: Vec<(f64, Vec<&TreeKrausChannel>)> = vec![(*w, Vec::new())];
            for part in parts {
                let mut next = Vec::new();
                for (acc_w, chosen) in &stack {
                    for (pw, pc) in &part.terms {
                        let mut c2 = chosen.clone();
                        c2.push(pc);
                        next.push((acc_w * pw, c2));
                    }
                }
                stack = next;
            }
            for (tw, chosen) in stack {
                let picked: Vec<TreeKrausChannel> = chosen.into_iter().cloned().collect();
                terms.push((tw, c.compose(&picked)?));
            }
        }
        Ok(FormalChannelSum { terms })
    }
}
