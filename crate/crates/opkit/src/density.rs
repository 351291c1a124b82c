//! Density matrices, the two classical probabilities they induce (diagonal
//! and spectrum), majorization, and quantum entropy functionals.

use num_complex::Complex64;

use crate::cmatrix::CMatrix;
use crate::prob::{self, EntropyFamily, ProbVector};
use crate::{Error, Result};

/// Tolerance on Hermitian symmetry of inputs.
pub const HERM_TOL: f64 = 1e-9;
/// Eigenvalues may undershoot zero by at most this.
pub const PSD_TOL: f64 = 1e-9;
/// Tolerance on unit trace.
pub const TRACE_TOL: f64 = 1e-9;
/// Tolerance used by the majorization predicate.
pub const MAJ_TOL: f64 = 1e-9;

/// Hermitian, positive semidefinite, trace-one complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermitian symmetry, unit trace, and positive
    /// semidefiniteness (via the full spectrum).
    pub fn new(mat: CMatrix) -> Result<Self> {
        if !mat.is_square() || mat.rows() == 0 {
            return Err(Error::Density("matrix must be square and nonempty".into()));
        }
        let herm = mat.hermitian_deviation();
        if herm > HERM_TOL {
            return Err(Error::Density(format!("hermitian deviation {herm:.3e}")));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::Density(format!("trace {tr} differs from 1")));
        }
        let (vals, _) = mat.hermitian_eigen()?;
        if let Some(bad) = vals.iter().find(|&&l| l < -PSD_TOL) {
            return Err(Error::Density(format!("negative eigenvalue {bad:.3e}")));
        }
        Ok(DensityMatrix { mat })
    }

    /// Diagonal density matrix from a probability vector.
    pub fn from_prob(p: &ProbVector) -> Self {
        DensityMatrix {
            mat: CMatrix::diag(p.as_slice()),
        }
    }

    /// Rank-one projector onto basis vector `k` of dimension `n`.
    pub fn basis_state(n: usize, k: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        m.set(k, k, Complex64::new(1.0, 0.0));
        DensityMatrix { mat: m }
    }

    pub fn maximally_mixed(n: usize) -> Self {
        DensityMatrix {
            mat: CMatrix::identity(n).scale_re(1.0 / n as f64),
        }
    }

    /// The 1x1 state (1), the would-be operad unit.
    pub fn unit() -> Self {
        DensityMatrix::maximally_mixed(1)
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    /// The diagonal probability: entries `rho_ii`, with negatives inside
    /// the PSD tolerance clamped to zero.
    pub fn diag_prob(&self) -> Result<ProbVector> {
        let mut p = Vec::with_capacity(self.dim());
        for i in 0..self.dim() {
            let x = self.mat.get(i, i).re;
            p.push(if x < 0.0 { 0.0 } else { x });
        }
        ProbVector::new(p)
    }

    /// Full spectrum with multiplicity, sorted non-increasing.
    pub fn eig_prob(&self) -> Result<SortedSpectrum> {
        let (mut vals, _) = self.mat.hermitian_eigen()?;
        vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
        SortedSpectrum::new(vals)
    }

    /// Spectrum plus eigenvectors, `rho = U diag(vals) U*` (unsorted).
    pub fn eigen(&self) -> Result<(Vec<f64>, CMatrix)> {
        self.mat.hermitian_eigen()
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        self.mat.offdiag_norm() <= tol
    }
}

/// Spectrum of a density matrix in non-increasing order.
#[derive(Clone, Debug, PartialEq)]
pub struct SortedSpectrum(Vec<f64>);

impl SortedSpectrum {
    pub fn new(vals: Vec<f64>) -> Result<Self> {
        if vals.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Parameter(
                "spectrum not sorted non-increasing".into(),
            ));
        }
        if vals.iter().any(|&l| l < -PSD_TOL) {
            return Err(Error::Parameter("spectrum below -PSD_TOL".into()));
        }
        let s: f64 = vals.iter().sum();
        if (s - 1.0).abs() > TRACE_TOL {
            return Err(Error::Parameter(format!("spectrum sums to {s}")));
        }
        Ok(SortedSpectrum(vals))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// The spectrum as a probability vector (tiny negatives clamped).
    pub fn to_prob(&self) -> Result<ProbVector> {
        ProbVector::new(self.0.iter().map(|&l| l.max(0.0)).collect())
    }
}

/// Majorization of non-increasing sequences with equal totals: every
/// partial sum of `a` dominates the one of `c` within [`MAJ_TOL`].
pub fn majorizes(a: &[f64], c: &[f64]) -> Result<bool> {
    if a.len() != c.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            got: c.len(),
        });
    }
    for (name, v) in [("first", a), ("second", c)] {
        if v.windows(2).any(|w| w[0] < w[1] - 1e-12) {
            return Err(Error::Parameter(format!("{name} sequence not sorted")));
        }
    }
    let (sa, sc): (f64, f64) = (a.iter().sum(), c.iter().sum());
    if (sa - sc).abs() > MAJ_TOL {
        return Err(Error::Parameter(format!("totals differ: {sa} vs {sc}")));
    }
    let mut pa = 0.0;
    let mut pc = 0.0;
    for (x, y) in a.iter().zip(c) {
        pa += x;
        pc += y;
        if pa < pc - MAJ_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Entropy through the spectrum: the quantum entropy of `rho` equals the
/// classical entropy of its sorted eigenvalue distribution.
pub fn quantum_entropy(family: EntropyFamily, rho: &DensityMatrix) -> Result<f64> {
    family.validate()?;
    let spec = rho.eig_prob()?;
    Ok(prob::classical_entropy(family, &spec.to_prob()?))
}
