//! Dense complex matrices and the cyclic Jacobi Hermitian eigensolver.
//!
//! All quantum-state machinery in this crate runs through [`CMatrix`]. The
//! eigensolver is a two-sided unitary Jacobi iteration: each rotation
//! annihilates one off-diagonal entry of a Hermitian matrix; sweeps repeat
//! until the off-diagonal Frobenius mass drops below [`JACOBI_TOL`].

use num_complex::Complex64;

use crate::{Error, Result};

/// Off-diagonal Frobenius norm below which a Jacobi sweep is converged.
pub const JACOBI_TOL: f64 = 1e-14;
/// Sweep cap for the Jacobi iteration.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Builds a matrix from rows of complex entries.
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Geometry("ragged rows".into()));
        }
        Ok(CMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds a matrix from real entries.
    pub fn from_real(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let data = rows
            .iter()
            .flat_map(|row| row.iter().map(|&x| Complex64::new(x, 0.0)))
            .collect();
        CMatrix {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn diag(entries: &[f64]) -> Self {
        let n = entries.len();
        let mut m = CMatrix::zeros(n, n);
        for (i, &x) in entries.iter().enumerate() {
            m.set(i, i, Complex64::new(x, 0.0));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, k: Complex64) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * k).collect(),
        }
    }

    pub fn scale_re(&self, k: f64) -> CMatrix {
        self.scale(Complex64::new(k, 0.0))
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    let cur = out.get(i, j);
                    out.set(i, j, cur + a * other.get(k, j));
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).conj());
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius norm of the strictly off-diagonal part.
    pub fn offdiag_norm(&self) -> f64 {
        let mut s = 0.0;
        for r in 0..self.rows {
            for c in 0..self.cols {
                if r != c {
                    s += self.get(r, c).norm_sqr();
                }
            }
        }
        s.sqrt()
    }

    /// Largest entrywise absolute difference.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Deviation from Hermitian symmetry, max |a_ij - conj(a_ji)|.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut d: f64 = 0.0;
        for r in 0..self.rows {
            for c in 0..self.cols {
                d = d.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        d
    }

    /// Assembles a block-diagonal matrix from square blocks.
    pub fn block_diag(blocks: &[CMatrix]) -> CMatrix {
        let n: usize = blocks.iter().map(|b| b.rows()).sum();
        let mut out = CMatrix::zeros(n, n);
        let mut off = 0;
        for b in blocks {
            for r in 0..b.rows() {
                for c in 0..b.cols() {
                    out.set(off + r, off + c, b.get(r, c));
                }
            }
            off += b.rows();
        }
        out
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn paste(&mut self, r0: usize, c0: usize, block: &CMatrix) {
        for r in 0..block.rows() {
            for c in 0..block.cols() {
                self.set(r0 + r, c0 + c, block.get(r, c));
            }
        }
    }

    /// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
    ///
    /// Returns `(values, vectors)` with `self = V diag(values) V*`, the i-th
    /// column of `vectors` being the eigenvector of `values[i]`. Values are
    /// unsorted. Fails with [`Error::NoConvergence`] after
    /// [`JACOBI_MAX_SWEEPS`] sweeps.
    pub fn hermitian_eigen(&self) -> Result<(Vec<f64>, CMatrix)> {
        assert!(self.is_square(), "eigendecomposition needs a square matrix");
        let n = self.rows;
        let mut a = self.clone();
        // Symmetrize once so round-off in the input cannot bias rotations.
        for r in 0..n {
            for c in 0..n {
                let m = (a.get(r, c) + a.get(c, r).conj()) * Complex64::new(0.5, 0.0);
                a.set(r, c, m);
                a.set(c, r, m.conj());
            }
        }
        let mut v = CMatrix::identity(n);
        if n <= 1 {
            return Ok(((0..n).map(|i| a.get(i, i).re).collect(), v));
        }
        for _ in 0..JACOBI_MAX_SWEEPS {
            if a.offdiag_norm() < JACOBI_TOL {
                let vals = (0..n).map(|i| a.get(i, i).re).collect();
                return Ok((vals, v));
            }
            for p in 0..n - 1 {
                for q in p + 1..n {
                    let g = a.get(p, q);
                    let absg = g.norm();
                    if absg < JACOBI_TOL * 1e-2 {
                        continue;
                    }
                    let phase = g / absg; // e^{i phi}
                    let alpha = a.get(p, p).re;
                    let beta = a.get(q, q).re;
                    // Stable rotation angle (smaller of the two solutions).
                    let theta = (beta - alpha) / (2.0 * absg);
                    let t = if theta >= 0.0 {
                        1.0 / (theta + (1.0 + theta * theta).sqrt())
                    } else {
                        -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    // U is identity except U[p,p]=c, U[p,q]=s,
                    // U[q,p]=-s e^{-i phi}, U[q,q]=c e^{-i phi}; A <- U* A U.
                    let upp = Complex64::new(c, 0.0);
                    let upq = Complex64::new(s, 0.0);
                    let uqp = -phase.conj() * s;
                    let uqq = phase.conj() * c;
                    for r in 0..n {
                        let arp = a.get(r, p);
                        let arq = a.get(r, q);
                        a.set(r, p, arp * upp + arq * uqp);
                        a.set(r, q, arp * upq + arq * uqq);
                    }
                    for col in 0..n {
                        let apc = a.get(p, col);
                        let aqc = a.get(q, col);
                        a.set(p, col, upp.conj() * apc + uqp.conj() * aqc);
                        a.set(q, col, upq.conj() * apc + uqq.conj() * aqc);
                    }
                    a.set(p, q, Complex64::new(0.0, 0.0));
                    a.set(q, p, Complex64::new(0.0, 0.0));
                    for r in 0..n {
                        let vrp = v.get(r, p);
                        let vrq = v.get(r, q);
                        v.set(r, p, vrp * upp + vrq * uqp);
                        v.set(r, q, vrp * upq + vrq * uqq);
                    }
                }
            }
        }
        if a.offdiag_norm() < JACOBI_TOL {
            let vals = (0..n).map(|i| a.get(i, i).re).collect();
            return Ok((vals, v));
        }
        Err(Error::NoConvergence)
    }

    /// Hermitian PSD square root via the eigendecomposition.
    ///
    /// Eigenvalues in `[-clamp_tol, 0)` are clamped to zero; anything more
    /// negative is a factorization failure.
    pub fn psd_sqrt(&self, clamp_tol: f64) -> Result<CMatrix> {
        let (vals, vecs) = self.hermitian_eigen()?;
        let mut roots = Vec::with_capacity(vals.len());
        for &l in &vals {
            if l < -clamp_tol {
                return Err(Error::Factorization(format!(
                    "eigenvalue {l:.3e} below -{clamp_tol:.1e}"
                )));
            }
            roots.push(l.max(0.0).sqrt());
        }
        let d = CMatrix::diag(&roots);
        Ok(vecs.mul(&d).mul(&vecs.adjoint()))
    }

    /// Orthonormalizes the columns in place (modified Gram-Schmidt).
    ///
    /// Fails if a column is linearly dependent on its predecessors.
    pub fn orthonormalize_columns(&mut self) -> Result<()> {
        for j in 0..self.cols {
            for k in 0..j {
                let mut dot = Complex64::new(0.0, 0.0);
                for r in 0..self.rows {
                    dot += self.get(r, k).conj() * self.get(r, j);
                }
                for r in 0..self.rows {
                    let v = self.get(r, j) - dot * self.get(r, k);
                    self.set(r, j, v);
                }
            }
            let norm: f64 = (0..self.rows)
                .map(|r| self.get(r, j).norm_sqr())
                .sum::<f64>()
                .sqrt();
            if norm < 1e-12 {
                return Err(Error::Factorization("rank-deficient column set".into()));
            }
            for r in 0..self.rows {
                let v = self.get(r, j) / norm;
                self.set(r, j, v);
            }
        }
        Ok(())
    }

    /// Returns the columns whose indices are in `idx` as a new matrix.
    pub fn select_columns(&self, idx: &[usize]) -> CMatrix {
        let mut out = CMatrix::zeros(self.rows, idx.len());
        for (j, &c) in idx.iter().enumerate() {
            for r in 0..self.rows {
                out.set(r, j, self.get(r, c));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_hermitian(rng: &mut StdRng, n: usize) -> CMatrix {
        let mut m = CMatrix::zeros(n, n);
        for r in 0..n {
            m.set(r, r, Complex64::new(rng.gen_range(-1.0..1.0), 0.0));
            for c in r + 1..n {
                let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                m.set(r, c, z);
                m.set(c, r, z.conj());
            }
        }
        m
    }

    /// Closed-form eigenvalues of a 2x2 Hermitian matrix.
    fn eig2x2(m: &CMatrix) -> (f64, f64) {
        let a = m.get(0, 0).re;
        let d = m.get(1, 1).re;
        let b = m.get(0, 1).norm();
        let mid = 0.5 * (a + d);
        let rad = (0.25 * (a - d) * (a - d) + b * b).sqrt();
        (mid + rad, mid - rad)
    }

    #[test]
    fn jacobi_matches_2x2_closed_form() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..200 {
            let m = random_hermitian(&mut rng, 2);
            let (mut vals, _) = m.hermitian_eigen().unwrap();
            vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
            let (hi, lo) = eig2x2(&m);
            assert!((vals[0] - hi).abs() < 1e-10, "{} vs {}", vals[0], hi);
            assert!((vals[1] - lo).abs() < 1e-10);
        }
    }

    #[test]
    fn jacobi_reconstructs_input() {
        let mut rng = StdRng::seed_from_u64(11);
        for n in 1..=6 {
            for _ in 0..20 {
                let m = random_hermitian(&mut rng, n);
                let (vals, vecs) = m.hermitian_eigen().unwrap();
                let rebuilt = vecs.mul(&CMatrix::diag(&vals)).mul(&vecs.adjoint());
                assert!(m.max_abs_diff(&rebuilt) < 1e-10);
                // eigenvector matrix is unitary
                let vv = vecs.adjoint().mul(&vecs);
                assert!(vv.max_abs_diff(&CMatrix::identity(n)) < 1e-10);
            }
        }
    }

    #[test]
    fn psd_sqrt_squares_back() {
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..20 {
            let g = random_hermitian(&mut rng, 4);
            let b = g.mul(&g); // PSD
            let s = b.psd_sqrt(1e-12).unwrap();
            assert!(s.hermitian_deviation() < 1e-10);
            assert!(s.mul(&s).max_abs_diff(&b) < 1e-9);
        }
    }

    #[test]
    fn psd_sqrt_rejects_indefinite() {
        let m = CMatrix::diag(&[1.0, -0.5]);
        assert!(m.psd_sqrt(1e-12).is_err());
    }

    #[test]
    fn gram_schmidt_gives_isometry() {
        let mut rng = StdRng::seed_from_u64(5);
        let mut m = CMatrix::zeros(6, 3);
        for r in 0..6 {
            for c in 0..3 {
                m.set(
                    r,
                    c,
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                );
            }
        }
        m.orthonormalize_columns().unwrap();
        let prod = m.adjoint().mul(&m);
        assert!(prod.max_abs_diff(&CMatrix::identity(3)) < 1e-12);
    }
}
