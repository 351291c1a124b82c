//! The two non-unital operads on density matrices: block composition with
//! diagonal weights (gamma_P) and with sorted spectral weights
//! (gamma_Lambda), their insertion operations, and the symmetric-group
//! action by conjugation.
//!
//! gamma_P restricts to the classical probability operad on diagonal
//! states and is symmetric; gamma_Lambda sorts, which breaks symmetry and
//! the unit law in a way the tests exhibit with concrete witnesses.

use crate::cmatrix::CMatrix;
use crate::density::DensityMatrix;
use crate::perm::Permutation;
use crate::{Error, Result};

fn block_compose(weights: &[f64], parts: &[DensityMatrix]) -> Result<DensityMatrix> {
    if parts.len() != weights.len() {
        return Err(Error::ArityMismatch {
            expected: weights.len(),
            got: parts.len(),
        });
    }
    let blocks: Vec<CMatrix> = weights
        .iter()
        .zip(parts)
        .map(|(&w, r)| r.matrix().scale_re(w))
        .collect();
    DensityMatrix::new(CMatrix::block_diag(&blocks))
}

/// `gamma_P(rho; rho_1..rho_n)`: block diagonal with the i-th block
/// weighted by the diagonal entry `rho_ii`.
pub fn gamma_p(rho: &DensityMatrix, parts: &[DensityMatrix]) -> Result<DensityMatrix> {
    let p = rho.diag_prob()?;
    block_compose(p.as_slice(), parts)
}

/// `gamma_Lambda(rho; rho_1..rho_n)`: block diagonal with the i-th block
/// weighted by the i-th largest eigenvalue of `rho`.
pub fn gamma_lambda(rho: &DensityMatrix, parts: &[DensityMatrix]) -> Result<DensityMatrix> {
    let lam = rho.eig_prob()?.to_prob()?;
    block_compose(lam.as_slice(), parts)
}

fn insert_block(
    rho: &DensityMatrix,
    i: usize,
    inner: &DensityMatrix,
    w: f64,
) -> Result<DensityMatrix> {
    let n = rho.dim();
    if i == 0 || i > n {
        return Err(Error::IndexOutOfRange { index: i, len: n });
    }
    let m = inner.dim();
    let mut out = CMatrix::zeros(n + m - 1, n + m - 1);
    let shift = |k: usize| if k < i - 1 { k } else { k + m - 1 };
    for r in 0..n {
        if r == i - 1 {
            continue;
        }
        for c in 0..n {
            if c == i - 1 {
                continue;
            }
            out.set(shift(r), shift(c), rho.matrix().get(r, c));
        }
    }
    out.paste(i - 1, i - 1, &inner.matrix().scale_re(w));
    DensityMatrix::new(out)
}

/// Insertion for the diagonal-weight operad: the i-th row and column are
/// replaced by `m` rows and columns whose diagonal block is
/// `rho_ii * inner`; all other new entries are zero.
pub fn insert_p(rho: &DensityMatrix, i: usize, inner: &DensityMatrix) -> Result<DensityMatrix> {
    let n = rho.dim();
    if i == 0 || i > n {
        return Err(Error::IndexOutOfRange { index: i, len: n });
    }
    let w = rho.matrix().get(i - 1, i - 1).re.max(0.0);
    insert_block(rho, i, inner, w)
}

/// Insertion for the spectral-weight operad: the central block carries
/// `lambda_i * inner` with `lambda_i` the i-th sorted eigenvalue.
pub fn insert_lambda(
    rho: &DensityMatrix,
    i: usize,
    inner: &DensityMatrix,
) -> Result<DensityMatrix> {
    let n = rho.dim();
    if i == 0 || i > n {
        return Err(Error::IndexOutOfRange { index: i, len: n });
    }
    let w = rho.eig_prob()?.as_slice()[i - 1].max(0.0);
    insert_block(rho, i, inner, w)
}

/// Conjugation `rho -> S rho S*` by the 0/1 matrix of `sigma`.
pub fn perm_act(sigma: &Permutation, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if sigma.len() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            got: sigma.len(),
        });
    }
    let s = sigma.matrix();
    DensityMatrix::new(s.mul(rho.matrix()).mul(&s.adjoint()))
}
