//! Projective quantum measurements, tree-refined projective channels, and
//! quantum tree entropies.
//!
//! A measurement tree refines a flat projective measurement: the root
//! carries the identity, every internal vertex's projector is the sum of
//! its children's, and descending an edge conjugates-and-renormalizes the
//! state. All refinements of the same block split collapse to the same
//! quantum channel; the suites check that equality numerically.

use num_complex::Complex64;

use crate::cmatrix::CMatrix;
use crate::density::{self, DensityMatrix};
use crate::prob::{entropy_slice, EntropyFamily, ProbVector};
use crate::trees::PlanarTree;
use crate::{Error, Result};

/// Tolerance on projector algebra (idempotence, orthogonality, sums).
pub const PROJ_TOL: f64 = 1e-10;
/// Branches with conditional trace at most this are absent.
pub const PRUNE_TOL: f64 = 1e-12;

/// Family of mutually orthogonal projectors summing to the identity.
#[derive(Clone, Debug)]
pub struct ProjectiveMeasurement {
    dim: usize,
    projectors: Vec<CMatrix>,
}

impl ProjectiveMeasurement {
    pub fn new(projectors: Vec<CMatrix>) -> Result<Self> {
        let dim = projectors
            .first()
            .map(CMatrix::rows)
            .ok_or_else(|| Error::Measurement("no projectors".into()))?;
        for (i, p) in projectors.iter().enumerate() {
            if !p.is_square() || p.rows() != dim {
                return Err(Error::Measurement("projector dimension mismatch".into()));
            }
            if p.hermitian_deviation() > PROJ_TOL {
                return Err(Error::Measurement(format!("projector {i} not Hermitian")));
            }
            if p.mul(p).max_abs_diff(p) > PROJ_TOL {
                return Err(Error::Measurement(format!("projector {i} not idempotent")));
            }
        }
        for i in 0..projectors.len() {
            for j in i + 1..projectors.len() {
                let prod = projectors[i].mul(&projectors[j]);
                if prod.frobenius_norm() > PROJ_TOL {
                    return Err(Error::Measurement(format!("projectors {i},{j} overlap")));
                }
            }
        }
        let sum = projectors
            .iter()
            .fold(CMatrix::zeros(dim, dim), |acc, p| acc.add(p));
        if sum.max_abs_diff(&CMatrix::identity(dim)) > PROJ_TOL {
            return Err(Error::Measurement(
                "projectors do not sum to identity".into(),
            ));
        }
        Ok(ProjectiveMeasurement { dim, projectors })
    }

    /// Standard-basis projectors onto consecutive blocks of sizes `blocks`.
    pub fn standard_blocks(dim: usize, blocks: &[usize]) -> Result<Self> {
        if blocks.iter().sum::<usize>() != dim {
            return Err(Error::Measurement(format!(
                "blocks sum to {} but dim is {dim}",
                blocks.iter().sum::<usize>()
            )));
        }
        let mut projectors = Vec::with_capacity(blocks.len());
        let mut off = 0;
        for &k in blocks {
            let mut p = CMatrix::zeros(dim, dim);
            for t in 0..k {
                p.set(off + t, off + t, Complex64::new(1.0, 0.0));
            }
            projectors.push(p);
            off += k;
        }
        ProjectiveMeasurement::new(projectors)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn outcomes(&self) -> usize {
        self.projectors.len()
    }

    pub fn projectors(&self) -> &[CMatrix] {
        &self.projectors
    }

    /// Measures `rho`: outcome probabilities, post-measurement states
    /// (absent when the probability is below [`PRUNE_TOL`]), and the
    /// channel output `sum_i Pi_i rho Pi_i`.
    pub fn project(&self, rho: &DensityMatrix) -> Result<MeasurementOutcome> {
        if rho.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: rho.dim(),
            });
        }
        let mut probs = Vec::with_capacity(self.projectors.len());
        let mut states = Vec::with_capacity(self.projectors.len());
        let mut output = CMatrix::zeros(self.dim, self.dim);
        for p in &self.projectors {
            let compressed = p.mul(rho.matrix()).mul(p);
            let t = compressed.trace().re;
            output = output.add(&compressed);
            if t <= PRUNE_TOL {
                probs.push(t.max(0.0));
                states.push(None);
            } else {
                probs.push(t);
                states.push(Some(DensityMatrix::new(compressed.scale_re(1.0 / t))?));
            }
        }
        Ok(MeasurementOutcome {
            probs: ProbVector::new(probs)?,
            states,
            output: DensityMatrix::new(output)?,
        })
    }
}

/// Result of a projective (or tree-refined) measurement.
pub struct MeasurementOutcome {
    pub probs: ProbVector,
    pub states: Vec<Option<DensityMatrix>>,
    pub output: DensityMatrix,
}

/// Block-diagonal truncation of `rho` for the split `N = k_1 + ... + k_n`,
/// realized as the standard-basis projective channel.
pub fn block_channel(dim: usize, blocks: &[usize], rho: &DensityMatrix) -> Result<DensityMatrix> {
    let meas = ProjectiveMeasurement::standard_blocks(dim, blocks)?;
    Ok(meas.project(rho)?.output)
}

/// Planar tree with one orthogonal projector per vertex; the root carries
/// the identity and each internal vertex's projector is the sum of its
/// children's.
#[derive(Clone, Debug)]
pub struct MeasurementTree {
    tree: PlanarTree,
    dim: usize,
    /// Indexed by DFS preorder node id.
    projectors: Vec<CMatrix>,
}

impl MeasurementTree {
    /// Builds from explicit per-vertex projectors (node-id indexed).
    pub fn from_projectors(tree: PlanarTree, projectors: Vec<CMatrix>) -> Result<Self> {
        let ix = tree.index();
        if projectors.len() != ix.parent.len() {
            return Err(Error::Measurement(format!(
                "{} projectors for {} vertices",
                projectors.len(),
                ix.parent.len()
            )));
        }
        let dim = projectors[0].rows();
        for (id, p) in projectors.iter().enumerate() {
            if !p.is_square() || p.rows() != dim {
                return Err(Error::Measurement("projector dimension mismatch".into()));
            }
            if p.hermitian_deviation() > PROJ_TOL || p.mul(p).max_abs_diff(p) > PROJ_TOL {
                return Err(Error::Measurement(format!("vertex {id} not a projector")));
            }
        }
        if projectors[0].max_abs_diff(&CMatrix::identity(dim)) > PROJ_TOL {
            return Err(Error::Measurement(
                "root projector must be the identity".into(),
            ));
        }
        for (v, kids) in ix.children.iter().enumerate() {
            if kids.is_empty() {
                continue;
            }
            let sum = kids
                .iter()
                .fold(CMatrix::zeros(dim, dim), |acc, &c| acc.add(&projectors[c]));
            if sum.max_abs_diff(&projectors[v]) > PROJ_TOL {
                return Err(Error::Measurement(format!(
                    "children of vertex {v} do not refine its projector"
                )));
            }
            for a in 0..kids.len() {
                for b in a + 1..kids.len() {
                    if projectors[kids[a]]
                        .mul(&projectors[kids[b]])
                        .frobenius_norm()
                        > PROJ_TOL
                    {
                        return Err(Error::Measurement(format!(
                            "children of vertex {v} overlap"
                        )));
                    }
                }
            }
        }
        Ok(MeasurementTree {
            tree,
            dim,
            projectors,
        })
    }

    /// Standard-basis refinement: leaf `i` carries the projector onto the
    /// i-th block of `partition`; internal vertices sum their children.
    pub fn from_partition(tree: PlanarTree, partition: &[usize]) -> Result<Self> {
        let n = tree.leaf_count();
        if partition.len() != n {
            return Err(Error::ArityMismatch {
                expected: n,
                got: partition.len(),
            });
        }
        let dim: usize = partition.iter().sum();
        let flat = ProjectiveMeasurement::standard_blocks(dim, partition)?;
        let ix = tree.index();
        let mut projectors = vec![CMatrix::zeros(dim, dim); ix.parent.len()];
        // leaves in planar order match partition order
        for (leaf_pos, &node) in ix.leaves.iter().enumerate() {
            projectors[node] = flat.projectors()[leaf_pos].clone();
        }
        // fill internal vertices bottom-up (children have larger DFS ids)
        for v in (0..ix.parent.len()).rev() {
            if !ix.children[v].is_empty() {
                projectors[v] = ix.children[v]
                    .iter()
                    .fold(CMatrix::zeros(dim, dim), |acc, &c| acc.add(&projectors[c]));
            }
        }
        MeasurementTree::from_projectors(tree, projectors)
    }

    pub fn tree(&self) -> &PlanarTree {
        &self.tree
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn projector(&self, node: usize) -> &CMatrix {
        &self.projectors[node]
    }

    /// The flat measurement formed by the leaf projectors.
    pub fn leaf_measurement(&self) -> Result<ProjectiveMeasurement> {
        let ix = self.tree.index();
        ProjectiveMeasurement::new(
            ix.leaves
                .iter()
                .map(|&n| self.projectors[n].clone())
                .collect(),
        )
    }

    /// Runs the refined measurement: per-leaf probabilities (zero for
    /// pruned branches) and conditional states.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<MeasurementOutcome> {
        if rho.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: rho.dim(),
            });
        }
        let ix = self.tree.index();
        let nodes = ix.parent.len();
        let mut state: Vec<Option<CMatrix>> = vec![None; nodes];
        let mut weight = vec![0.0f64; nodes];
        state[0] = Some(rho.matrix().clone());
        weight[0] = 1.0;
        for v in 0..nodes {
            let Some(rho_v) = state[v].clone() else {
                continue;
            };
            for &c in &ix.children[v] {
                let compressed = self.projectors[c].mul(&rho_v).mul(&self.projectors[c]);
                let t = compressed.trace().re;
                if t > PRUNE_TOL {
                    state[c] = Some(compressed.scale_re(1.0 / t));
                    weight[c] = weight[v] * t;
                }
            }
        }
        let mut probs = Vec::with_capacity(ix.leaves.len());
        let mut states = Vec::with_capacity(ix.leaves.len());
        let mut output = CMatrix::zeros(self.dim, self.dim);
        for &leaf in &ix.leaves {
            probs.push(weight[leaf].max(0.0));
            match &state[leaf] {
                Some(m) if weight[leaf] > PRUNE_TOL => {
                    output = output.add(&m.scale_re(weight[leaf]));
                    states.push(Some(DensityMatrix::new(m.clone())?));
                }
                _ => states.push(None),
            }
        }
        Ok(MeasurementOutcome {
            probs: ProbVector::new(probs)?,
            states,
            output: DensityMatrix::new(output)?,
        })
    }

    /// Quantum tree entropy: branch vertices contribute the Shannon term
    /// of their edge probabilities, leaves the family entropy of the state
    /// that arrives there. Pruned branches contribute nothing.
    pub fn tree_entropy(&self, family: EntropyFamily, rho: &DensityMatrix) -> Result<f64> {
        family.validate()?;
        if rho.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: rho.dim(),
            });
        }
        self.entropy_rec(family, 0, rho.matrix(), &self.tree.index())
    }

    fn entropy_rec(
        &self,
        family: EntropyFamily,
        v: usize,
        rho_v: &CMatrix,
        ix: &crate::trees::TreeIndex,
    ) -> Result<f64> {
        if ix.children[v].is_empty() {
            return density::quantum_entropy(family, &DensityMatrix::new(rho_v.clone())?);
        }
        let mut branch_probs = Vec::with_capacity(ix.children[v].len());
        let mut conditional = Vec::with_capacity(ix.children[v].len());
        for &c in &ix.children[v] {
            let compressed = self.projectors[c].mul(rho_v).mul(&self.projectors[c]);
            let t = compressed.trace().re;
            if t > PRUNE_TOL {
                branch_probs.push(t);
                conditional.push(Some((c, compressed.scale_re(1.0 / t))));
            } else {
                branch_probs.push(t.max(0.0));
                conditional.push(None);
            }
        }
        let mut total = entropy_slice(EntropyFamily::Shannon, &branch_probs);
        for (t, cond) in branch_probs.iter().zip(&conditional) {
            if let Some((c, m)) = cond {
                total += t * self.entropy_rec(family, *c, m, ix)?;
            }
        }
        Ok(total)
    }
}
