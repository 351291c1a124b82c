//! Planar rooted trees: grafting, insertions, leaf-to-root paths, and the
//! signed edge-contraction differential.
//!
//! A tree is stored recursively; a node with no children is a leaf. The
//! single-leaf tree (one vertex that is both root and leaf) is the unit of
//! the insertion operations. Structural equality is equality of the nested
//! shape plus leaf labels, which coincides with equality of the canonical
//! DFS parenthesis serialization, so all operad-law tests are exact.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::{Error, Result};

/// Ordered rooted tree with optional nonnegative integer labels on leaves.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PlanarTree {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    children: Vec<PlanarTree>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<u64>,
}

/// Flattened view of a tree: nodes in DFS preorder, root = 0.
///
/// Every non-root node identifies the edge from itself to its parent, so
/// edge ids are node ids `>= 1`. The DFS edge order is the preorder on the
/// child endpoints, hence the planar position count of an edge `e` is
/// `e - 1`.
pub struct TreeIndex {
    pub parent: Vec<Option<usize>>,
    pub children: Vec<Vec<usize>>,
    pub labels: Vec<Option<u64>>,
    /// Leaf node ids, left to right.
    pub leaves: Vec<usize>,
}

impl PlanarTree {
    /// The unit tree: a single vertex that is both root and leaf.
    pub fn leaf() -> Self {
        PlanarTree {
            children: Vec::new(),
            label: None,
        }
    }

    pub fn leaf_labeled(label: u64) -> Self {
        PlanarTree {
            children: Vec::new(),
            label: Some(label),
        }
    }

    pub fn node(children: Vec<PlanarTree>) -> Self {
        PlanarTree {
            children,
            label: None,
        }
    }

    /// Corolla: one internal vertex with `n` leaves.
    pub fn corolla(n: usize) -> Self {
        PlanarTree::node((0..n).map(|_| PlanarTree::leaf()).collect())
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn children(&self) -> &[PlanarTree] {
        &self.children
    }

    pub fn label(&self) -> Option<u64> {
        self.label
    }

    pub fn leaf_count(&self) -> usize {
        if self.is_leaf() {
            1
        } else {
            self.children.iter().map(|c| c.leaf_count()).sum()
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(|c| c.node_count()).sum::<usize>()
    }

    /// Labels of the leaves in planar order (None where unlabeled).
    pub fn leaf_labels(&self) -> Vec<Option<u64>> {
        let mut out = Vec::new();
        self.collect_leaf_labels(&mut out);
        out
    }

    fn collect_leaf_labels(&self, out: &mut Vec<Option<u64>>) {
        if self.is_leaf() {
            out.push(self.label);
        } else {
            for c in &self.children {
                c.collect_leaf_labels(out);
            }
        }
    }

    /// Canonical DFS parenthesis form; equality of trees is equality here.
    pub fn canonical(&self) -> String {
        let mut s = String::new();
        self.write_canonical(&mut s);
        s
    }

    fn write_canonical(&self, s: &mut String) {
        s.push('(');
        if let Some(l) = self.label {
            s.push_str(&l.to_string());
        }
        for c in &self.children {
            c.write_canonical(s);
        }
        s.push(')');
    }

    /// Full operadic composition: leaf `i` of `self` is identified with the
    /// root of `subs[i]`, for every leaf at once.
    pub fn graft(&self, subs: &[PlanarTree]) -> Result<PlanarTree> {
        let n = self.leaf_count();
        if subs.len() != n {
            return Err(Error::ArityMismatch {
                expected: n,
                got: subs.len(),
            });
        }
        let mut next = 0usize;
        Ok(self.graft_rec(subs, &mut next))
    }

    fn graft_rec(&self, subs: &[PlanarTree], next: &mut usize) -> PlanarTree {
        if self.is_leaf() {
            let t = subs[*next].clone();
            *next += 1;
            t
        } else {
            PlanarTree::node(
                self.children
                    .iter()
                    .map(|c| c.graft_rec(subs, next))
                    .collect(),
            )
        }
    }

    /// Insertion `self ∘_i sigma`: the root of `sigma` replaces leaf `i`
    /// (1-based), splicing `sigma`'s leaves into position `i`.
    pub fn insert(&self, i: usize, sigma: &PlanarTree) -> Result<PlanarTree> {
        let n = self.leaf_count();
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange { index: i, len: n });
        }
        let mut seen = 0usize;
        Ok(self.insert_rec(i, sigma, &mut seen))
    }

    fn insert_rec(&self, i: usize, sigma: &PlanarTree, seen: &mut usize) -> PlanarTree {
        if self.is_leaf() {
            *seen += 1;
            if *seen == i {
                sigma.clone()
            } else {
                self.clone()
            }
        } else {
            PlanarTree::node(
                self.children
                    .iter()
                    .map(|c| c.insert_rec(i, sigma, seen))
                    .collect(),
            )
        }
    }

    pub fn index(&self) -> TreeIndex {
        let mut ix = TreeIndex {
            parent: Vec::new(),
            children: Vec::new(),
            labels: Vec::new(),
            leaves: Vec::new(),
        };
        self.index_rec(None, &mut ix);
        ix
    }

    fn index_rec(&self, parent: Option<usize>, ix: &mut TreeIndex) -> usize {
        let id = ix.parent.len();
        ix.parent.push(parent);
        ix.children.push(Vec::new());
        ix.labels.push(self.label);
        if self.is_leaf() {
            ix.leaves.push(id);
        }
        for c in &self.children {
            let cid = c.index_rec(Some(id), ix);
            ix.children[id].push(cid);
        }
        id
    }

    /// Ordered edge list from leaf `i` (1-based) to the root. Each edge is
    /// identified by its child endpoint's node id; consecutive edges chain
    /// target-to-source and the last edge enters the root. The unit tree
    /// yields the empty path.
    pub fn leaf_path(&self, i: usize) -> Result<Vec<usize>> {
        let ix = self.index();
        if i == 0 || i > ix.leaves.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: ix.leaves.len(),
            });
        }
        let mut node = ix.leaves[i - 1];
        let mut path = Vec::new();
        while let Some(p) = ix.parent[node] {
            path.push(node);
            node = p;
        }
        Ok(path)
    }

    /// Edge ids whose contraction is defined: child endpoint is internal.
    pub fn internal_edges(&self) -> Vec<usize> {
        let ix = self.index();
        (1..ix.parent.len())
            .filter(|&id| !ix.children[id].is_empty())
            .collect()
    }

    pub fn internal_edge_count(&self) -> usize {
        self.internal_edges().len()
    }

    /// Planar position of edge `e`: the number of edges strictly preceding
    /// it in DFS edge order.
    pub fn edge_position(&self, e: usize) -> usize {
        e - 1
    }

    /// Contracts internal edge `e`, merging its child endpoint into its
    /// parent and splicing the grandchildren into the parent's child order
    /// at the edge's position.
    pub fn contract_edge(&self, e: usize) -> Result<PlanarTree> {
        let ix = self.index();
        if e == 0 || e >= ix.parent.len() {
            return Err(Error::IndexOutOfRange {
                index: e,
                len: ix.parent.len() - 1,
            });
        }
        if ix.children[e].is_empty() {
            return Err(Error::Geometry("cannot contract a leaf edge".into()));
        }
        let mut next = 1usize; // DFS id counter; root is 0
        Ok(self.contract_rec(e, &mut next))
    }

    fn contract_rec(&self, target: usize, next: &mut usize) -> PlanarTree {
        if self.is_leaf() {
            return self.clone();
        }
        let mut new_children = Vec::new();
        for c in &self.children {
            let id = *next;
            *next += 1;
            if id == target {
                // Merge: walk into the target child without emitting it.
                let merged = c.contract_splice(next);
                new_children.extend(merged);
            } else {
                new_children.push(c.contract_rec(target, next));
            }
        }
        PlanarTree {
            children: new_children,
            label: self.label,
        }
    }

    fn contract_splice(&self, next: &mut usize) -> Vec<PlanarTree> {
        // The contracted edge's subtree keeps its own structure; only the
        // top vertex disappears. Ids below it still advance the counter.
        self.children
            .iter()
            .map(|c| {
                *next += 1;
                c.skip_ids(next);
                c.clone()
            })
            .collect()
    }

    fn skip_ids(&self, next: &mut usize) {
        for c in &self.children {
            *next += 1;
            c.skip_ids(next);
        }
    }

    /// All single-edge contractions with their planar signs
    /// `(-1)^{edge position}`. A corolla has none.
    pub fn enumerate_contractions(&self) -> Vec<(PlanarTree, i32)> {
        self.internal_edges()
            .into_iter()
            .map(|e| {
                let sign = if self.edge_position(e) % 2 == 0 {
                    1
                } else {
                    -1
                };
                (self.contract_edge(e).expect("internal edge"), sign)
            })
            .collect()
    }
}

impl fmt::Display for PlanarTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

/// Positive integer compositions of `n` into exactly `k` parts.
pub fn compositions(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 1 {
            if n >= 1 {
                cur.push(n);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        for first in 1..=n.saturating_sub(k - 1) {
            cur.push(first);
            rec(n - first, k - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k >= 1 {
        rec(n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// Every planar rooted tree with `n` leaves whose internal vertices all
/// have at least two children (little Schroeder enumeration).
pub fn enumerate_trees(n: usize) -> Vec<PlanarTree> {
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![PlanarTree::leaf()];
    }
    let mut out = Vec::new();
    for k in 2..=n {
        for comp in compositions(n, k) {
            let part_trees: Vec<Vec<PlanarTree>> =
                comp.iter().map(|&m| enumerate_trees(m)).collect();
            let mut stack: Vec<Vec<PlanarTree>> = vec![Vec::new()];
            for options in &part_trees {
                let mut next = Vec::new();
                for prefix in &stack {
                    for opt in options {
                        let mut p = prefix.clone();
                        p.push(opt.clone());
                        next.push(p);
                    }
                }
                stack = next;
            }
            for children in stack {
                out.push(PlanarTree::node(children));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    fn balanced4() -> PlanarTree {
        PlanarTree::node(vec![PlanarTree::corolla(2), PlanarTree::corolla(2)])
    }

    #[test]
    fn unit_tree_counts() {
        let u = PlanarTree::leaf();
        assert_eq!(u.leaf_count(), 1);
        assert_eq!(u.node_count(), 1);
        assert_eq!(u.canonical(), "()");
    }

    #[test]
    fn graft_with_units_is_identity() {
        let c = PlanarTree::corolla(2);
        let g = c.graft(&[PlanarTree::leaf(), PlanarTree::leaf()]).unwrap();
        assert_eq!(g, c);
    }

    #[test]
    fn graft_two_corollas_gives_balanced_tree() {
        let c = PlanarTree::corolla(2);
        let g = c
            .graft(&[PlanarTree::corolla(2), PlanarTree::corolla(2)])
            .unwrap();
        assert_eq!(g, balanced4());
        assert_eq!(g.leaf_count(), 4);
        // 3 internal vertices, 7 vertices, 6 edges
        assert_eq!(g.node_count(), 7);
        assert_eq!(g.node_count() - g.leaf_count(), 3);
    }

    #[test]
    fn graft_arity_mismatch() {
        let c = PlanarTree::corolla(2);
        assert!(c.graft(&[PlanarTree::leaf()]).is_err());
    }

    #[test]
    fn graft_associativity_instance() {
        // graft(graft(tau; sigmas); rhos) == graft(tau; graft(sigma_i; rhos_i))
        let tau = PlanarTree::corolla(2);
        let sigmas = [PlanarTree::corolla(2), PlanarTree::corolla(3)];
        let rhos: Vec<PlanarTree> = vec![
            PlanarTree::corolla(2),
            PlanarTree::leaf(),
            PlanarTree::corolla(2),
            PlanarTree::corolla(2),
            PlanarTree::leaf(),
        ];
        let lhs = tau.graft(&sigmas).unwrap().graft(&rhos).unwrap();
        let s1 = sigmas[0].graft(&rhos[0..2]).unwrap();
        let s2 = sigmas[1].graft(&rhos[2..5]).unwrap();
        let rhs = tau.graft(&[s1, s2]).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn insert_unit_laws() {
        let sigma = balanced4();
        assert_eq!(PlanarTree::leaf().insert(1, &sigma).unwrap(), sigma);
        for i in 1..=4 {
            assert_eq!(sigma.insert(i, &PlanarTree::leaf()).unwrap(), sigma);
        }
        assert!(sigma.insert(0, &PlanarTree::leaf()).is_err());
        assert!(sigma.insert(5, &PlanarTree::leaf()).is_err());
    }

    /// The three insertion coherence identities, checked structurally.
    fn check_insertion_identities(x: &PlanarTree, y: &PlanarTree, z: &PlanarTree) {
        let a = x.leaf_count();
        let b = y.leaf_count();
        let c = z.leaf_count();
        for j in 1..=a {
            let xy = x.insert(j, y).unwrap();
            for i in 1..=(a + b - 1) {
                let lhs = xy.insert(i, z).unwrap();
                let rhs = if i < j {
                    x.insert(i, z).unwrap().insert(j + c - 1, y).unwrap()
                } else if i < b + j {
                    x.insert(j, &y.insert(i - j + 1, z).unwrap()).unwrap()
                } else {
                    x.insert(i - b + 1, z).unwrap().insert(j, y).unwrap()
                };
                assert_eq!(lhs, rhs, "i={i} j={j}");
            }
        }
    }

    #[test]
    fn insertion_identities_on_corollas() {
        let t2 = PlanarTree::corolla(2);
        check_insertion_identities(&t2, &t2, &t2);
    }

    #[test]
    fn insertion_identities_exhaustive_small() {
        // All tree triples with <= 4 leaves each; identities are exact.
        let pool: Vec<PlanarTree> = (1..=4).flat_map(enumerate_trees).collect();
        for x in pool.iter().step_by(3) {
            for y in pool.iter().step_by(4) {
                for z in pool.iter().step_by(5) {
                    check_insertion_identities(x, y, z);
                }
            }
        }
    }

    #[test]
    fn graft_equals_iterated_insertions() {
        for tau in enumerate_trees(3) {
            let subs = [
                PlanarTree::corolla(2),
                PlanarTree::leaf(),
                PlanarTree::corolla(3),
            ];
            let grafted = tau.graft(&subs).unwrap();
            let mut acc = tau.clone();
            for i in (1..=3).rev() {
                acc = acc.insert(i, &subs[i - 1]).unwrap();
            }
            assert_eq!(grafted, acc);
        }
    }

    #[test]
    fn leaf_paths() {
        assert!(PlanarTree::leaf().leaf_path(1).unwrap().is_empty());
        let c = PlanarTree::corolla(5);
        for i in 1..=5 {
            assert_eq!(c.leaf_path(i).unwrap().len(), 1);
        }
        // balanced 4-leaf tree: node ids are 0 root, 1 left internal,
        // 2,3 its leaves, 4 right internal, 5,6 its leaves.
        let b = balanced4();
        let p = b.leaf_path(3).unwrap();
        assert_eq!(p, vec![5, 4]);
        assert!(b.leaf_path(9).is_err());
    }

    #[test]
    fn contraction_of_corolla_is_empty() {
        assert!(PlanarTree::corolla(4).enumerate_contractions().is_empty());
    }

    #[test]
    fn contraction_of_balanced_tree() {
        let b = balanced4();
        let edges = b.internal_edges();
        assert_eq!(edges, vec![1, 4]);
        for &e in &edges {
            let c = b.contract_edge(e).unwrap();
            assert_eq!(c.leaf_count(), 4);
            // one vertex of arity 3 at the root
            assert_eq!(c.children().len(), 3);
        }
        // contracting a leaf edge is rejected
        assert!(b.contract_edge(2).is_err());
    }

    #[test]
    fn contract_positions_splice_in_place() {
        // root(a, X(b, c), d) contracting X gives root(a, b, c, d)
        let t = PlanarTree::node(vec![
            PlanarTree::leaf(),
            PlanarTree::corolla(2),
            PlanarTree::leaf(),
        ]);
        let c = t.contract_edge(2).unwrap();
        assert_eq!(c, PlanarTree::corolla(4));
    }

    #[test]
    fn double_contraction_cancels() {
        // signed d(d tau) = 0 for every tree with <= 6 leaves and <= 3
        // internal edges, checked exhaustively.
        for n in 1..=6 {
            for tau in enumerate_trees(n) {
                if tau.internal_edge_count() > 3 {
                    continue;
                }
                let mut acc: HashMap<String, i64> = HashMap::new();
                for (t1, s1) in tau.enumerate_contractions() {
                    for (t2, s2) in t1.enumerate_contractions() {
                        *acc.entry(t2.canonical()).or_insert(0) += (s1 * s2) as i64;
                    }
                }
                for (key, coeff) in acc {
                    assert_eq!(coeff, 0, "tree {} leaves residue at {key}", n);
                }
            }
        }
    }

    #[test]
    fn enumeration_counts_are_schroeder() {
        // little Schroeder numbers: 1, 1, 3, 11, 45, 197
        let counts: Vec<usize> = (1..=6).map(|n| enumerate_trees(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 3, 11, 45, 197]);
    }

    #[test]
    fn json_round_trip() {
        let t = PlanarTree::node(vec![PlanarTree::leaf_labeled(2), PlanarTree::corolla(2)]);
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(s, r#"{"children":[{"label":2},{"children":[{},{}]}]}"#);
        let back: PlanarTree = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
    }
}
