//! Almost-symplectic quantum codes: the loop algebra on the group ring of
//! a central-extension loop, its character subspaces, compressed
//! translation operators gated by the symmetric-zero sets, common
//! eigenspace code spaces, and the partial operad action on code data.

use num_complex::Complex64;

use crate::cmatrix::CMatrix;
use crate::loops::FiniteMagma;
use crate::squares::ColoredSquare;
use crate::symplectic::{self, AlmostSymplectic, CentralExtLoop};
use crate::{Error, Result};

/// Rank decisions for eigenspace membership.
pub const RANK_TOL: f64 = 1e-12;
/// Residual bound each returned basis vector must satisfy.
pub const RESIDUAL_TOL: f64 = 1e-10;

fn chi(p: usize, k: usize, x: usize) -> Complex64 {
    let angle = 2.0 * std::f64::consts::PI * (k as f64) * (x as f64) / (p as f64);
    Complex64::new(angle.cos(), angle.sin())
}

/// Group ring of a central-extension loop with its fiber structure:
/// carrier index `(x, u) -> x * |V| + u`, complex basis functionals, left
/// translations as exact permutation matrices.
pub struct LoopAlgebra {
    p: usize,
    vdim: usize,
    magma: FiniteMagma,
}

impl LoopAlgebra {
    /// Builds the algebra of the loop generated by an odd-characteristic
    /// pairing.
    pub fn from_omega(omega: &AlmostSymplectic) -> Result<Self> {
        let ext = symplectic::loop_from_omega(omega)?;
        Ok(LoopAlgebra::from_extension(&ext))
    }

    pub fn from_extension(ext: &CentralExtLoop) -> Self {
        LoopAlgebra {
            p: ext.center,
            vdim: ext.vdim,
            magma: ext.magma().clone(),
        }
    }

    /// A fiber-preserving quasigroup table over `F_p x V` given directly.
    pub fn from_magma(p: usize, vdim: usize, magma: FiniteMagma) -> Result<Self> {
        if magma.size() != p * vdim {
            return Err(Error::Table(format!(
                "carrier has {} elements, expected {}",
                magma.size(),
                p * vdim
            )));
        }
        if !magma.is_quasigroup() {
            return Err(Error::Table("carrier table is not a quasigroup".into()));
        }
        Ok(LoopAlgebra { p, vdim, magma })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn vdim(&self) -> usize {
        self.vdim
    }

    /// Dimension of the full algebra `C[L]`.
    pub fn dim(&self) -> usize {
        self.p * self.vdim
    }

    pub fn element(&self, x: usize, u: usize) -> usize {
        x * self.vdim + u
    }

    /// Exact permutation matrix of the left translation
    /// `(L_g f)(h) = f(g * h)`.
    pub fn left_translation(&self, g: usize) -> CMatrix {
        let s = self.dim();
        let mut m = CMatrix::zeros(s, s);
        for h in 0..s {
            m.set(h, self.magma.op(g, h), Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Orthonormal basis of the character subspace: one column per fiber
    /// `w`, supported on that fiber with central profile `chi_k`. The
    /// subspaces for `k = 0..p-1` decompose the algebra exactly.
    pub fn chi_subspace(&self, k: usize) -> Result<CMatrix> {
        if k >= self.p {
            return Err(Error::Parameter(format!(
                "character index {k} out of range"
            )));
        }
        let mut b = CMatrix::zeros(self.dim(), self.vdim);
        let norm = 1.0 / (self.p as f64).sqrt();
        for w in 0..self.vdim {
            for y in 0..self.p {
                b.set(self.element(y, w), w, chi(self.p, k, y) * norm);
            }
        }
        Ok(b)
    }

    /// Compression of the left translation by `(0, u)` to the character
    /// subspace, in the fiber basis.
    pub fn e_operator(&self, k: usize, u: usize) -> Result<CMatrix> {
        if u >= self.vdim {
            return Err(Error::Parameter(format!("vector index {u} out of range")));
        }
        let b = self.chi_subspace(k)?;
        let l = self.left_translation(self.element(0, u));
        Ok(b.adjoint().mul(&l).mul(&b))
    }

    /// Eigenvalues of `e_operator(k, u)` with multiplicity, computed from
    /// its phase-permutation cycle structure.
    pub fn e_spectrum(&self, k: usize, u: usize) -> Result<Vec<Complex64>> {
        let e = self.e_operator(k, u)?;
        // column w holds a single nonvanishing entry at the shifted fiber
        let mut next = vec![usize::MAX; self.vdim];
        let mut phase = vec![Complex64::new(0.0, 0.0); self.vdim];
        for w in 0..self.vdim {
            let mut hits = 0;
            for r in 0..self.vdim {
                let z = e.get(r, w);
                if z.norm() > 1e-9 {
                    next[w] = r;
                    phase[w] = z;
                    hits += 1;
                }
            }
            if hits != 1 {
                return Err(Error::Factorization(
                    "operator is not a phase permutation on the fiber basis".into(),
                ));
            }
        }
        let mut seen = vec![false; self.vdim];
        let mut out = Vec::with_capacity(self.vdim);
        for start in 0..self.vdim {
            if seen[start] {
                continue;
            }
            let mut cycle_phase = Complex64::new(1.0, 0.0);
            let mut len = 0usize;
            let mut w = start;
            loop {
                seen[w] = true;
                cycle_phase *= phase[w];
                len += 1;
                w = next[w];
                if w == start {
                    break;
                }
            }
            // eigenvalues on the cycle span: len-th roots of the product
            let root = cycle_phase.powf(1.0 / len as f64);
            for j in 0..len {
                let angle = 2.0 * std::f64::consts::PI * j as f64 / len as f64;
                out.push(root * Complex64::new(angle.cos(), angle.sin()));
            }
        }
        Ok(out)
    }
}

/// Ordered pairs with symmetrically vanishing pairing.
pub fn symmetric_zero_pairs(omega: &AlmostSymplectic) -> Vec<(usize, usize)> {
    let side = omega.dim();
    let mut out = Vec::new();
    for u in 0..side {
        for v in 0..side {
            if omega.value(u, v) == 0 && omega.value(v, u) == 0 {
                out.push((u, v));
            }
        }
    }
    out
}

pub fn in_pair_set(omega: &AlmostSymplectic, u: usize, v: usize) -> bool {
    omega.value(u, v) == 0 && omega.value(v, u) == 0
}

/// Membership of a tuple: every coordinate pair `(i < j)` lies in the
/// symmetric-zero pair set. Singletons are unconstrained.
pub fn in_s_set(omega: &AlmostSymplectic, tuple: &[usize]) -> bool {
    for i in 0..tuple.len() {
        for j in i + 1..tuple.len() {
            if !in_pair_set(omega, tuple[i], tuple[j]) {
                return false;
            }
        }
    }
    true
}

/// Exhaustive enumeration of the level-`level` tuple set.
pub fn s_set(omega: &AlmostSymplectic, level: usize) -> Vec<Vec<usize>> {
    let side = omega.dim();
    let mut out = Vec::new();
    let mut tuple = vec![0usize; level];
    fn rec(
        omega: &AlmostSymplectic,
        side: usize,
        idx: usize,
        tuple: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if idx == tuple.len() {
            out.push(tuple.clone());
            return;
        }
        for u in 0..side {
            tuple[idx] = u;
            if (0..idx).all(|j| in_pair_set(omega, tuple[j], u)) {
                rec(omega, side, idx + 1, tuple, out);
            }
        }
    }
    rec(omega, side, 0, &mut tuple, &mut out);
    out
}

/// Common eigenspace of a gated operator family on a character subspace.
pub struct CodeSpace {
    pub chi: usize,
    pub tuple: Vec<usize>,
    pub lambda: Vec<Complex64>,
    /// Orthonormal basis, one column per code dimension (in the fiber
    /// coordinates of the character subspace).
    pub basis: CMatrix,
    /// `max_i |E_i b - lambda_i b|` per basis column.
    pub residuals: Vec<f64>,
}

impl CodeSpace {
    pub fn dimension(&self) -> usize {
        self.basis.cols()
    }
}

/// Builds the code space for `tuple` (gated by the S-set) and the
/// eigenvalue vector `lambda`: the joint kernel of `(E_i - lambda_i)`.
/// Zero-dimensional spaces are legal outputs.
pub fn code_space(
    alg: &LoopAlgebra,
    omega: &AlmostSymplectic,
    k: usize,
    tuple: &[usize],
    lambda: &[Complex64],
) -> Result<CodeSpace> {
    if lambda.len() != tuple.len() {
        return Err(Error::ArityMismatch {
            expected: tuple.len(),
            got: lambda.len(),
        });
    }
    if !in_s_set(omega, tuple) {
        return Err(Error::Parameter(
            "tuple is outside the S-set; the operators need not commute".into(),
        ));
    }
    let d = alg.vdim();
    let mut gram = CMatrix::zeros(d, d);
    let mut ops = Vec::with_capacity(tuple.len());
    for (&u, &l) in tuple.iter().zip(lambda) {
        let e = alg.e_operator(k, u)?;
        let shifted = e.sub(&CMatrix::identity(d).scale(l));
        gram = gram.add(&shifted.adjoint().mul(&shifted));
        ops.push(e);
    }
    let (vals, vecs) = gram.hermitian_eigen()?;
    let keep: Vec<usize> = (0..d).filter(|&i| vals[i].abs() < RANK_TOL).collect();
    let basis = vecs.select_columns(&keep);
    let mut residuals = Vec::with_capacity(basis.cols());
    for col in 0..basis.cols() {
        let b = basis.select_columns(&[col]);
        let mut worst = 0.0f64;
        for (e, &l) in ops.iter().zip(lambda) {
            let r = e.mul(&b).sub(&b.scale(l)).frobenius_norm();
            worst = worst.max(r);
        }
        residuals.push(worst);
    }
    Ok(CodeSpace {
        chi: k,
        tuple: tuple.to_vec(),
        lambda: lambda.to_vec(),
        basis,
        residuals,
    })
}

/// Code datum: a pairing together with a gated tuple.
#[derive(Clone, Debug)]
pub struct CodeData {
    pub omega: AlmostSymplectic,
    pub tuple: Vec<usize>,
}

/// Outcome of the partial operad action: rejection is a value, not an
/// error.
#[derive(Clone, Debug)]
pub enum PartialActionOutcome {
    Accepted(CodeData),
    Rejected { reason: String },
}

impl PartialActionOutcome {
    pub fn is_accepted(&self) -> bool {
        matches!(self, PartialActionOutcome::Accepted(_))
    }
}

/// Partial action of a strict colored square on code data: compose the
/// pairings, embed every tuple through the slot placement, and accept
/// exactly when the concatenated tuple lands in the composed S-set.
pub fn partial_action(
    c: &ColoredSquare,
    data: &[(AlmostSymplectic, Vec<usize>)],
) -> Result<PartialActionOutcome> {
    for (omega, tuple) in data {
        if !in_s_set(omega, tuple) {
            return Err(Error::Parameter("input tuple outside its own S-set".into()));
        }
        if let Some(bad) = tuple.iter().find(|&&u| u >= omega.dim()) {
            return Err(Error::Parameter(format!("vector index {bad} out of range")));
        }
    }
    let omegas: Vec<AlmostSymplectic> = data.iter().map(|(w, _)| w.clone()).collect();
    let composed = symplectic::algebra_action_full(c, &omegas)?;
    let mut embedded = Vec::new();
    for (i, (_, tuple)) in data.iter().enumerate() {
        for &u in tuple {
            embedded.push(composed.embed(i, u)?);
        }
    }
    if in_s_set(&composed.omega, &embedded) {
        Ok(PartialActionOutcome::Accepted(CodeData {
            omega: composed.omega,
            tuple: embedded,
        }))
    } else {
        Ok(PartialActionOutcome::Rejected {
            reason: "concatenated tuple violates a symmetric-zero pair".into(),
        })
    }
}

/// Fixture pairing at p = 3 whose rows 1 and 2 are affine in the second
/// argument with matched slopes, so the compressed translations of the
/// symmetric-zero pair (1,2) genuinely commute.
pub fn commuting_fixture_p3() -> AlmostSymplectic {
    AlmostSymplectic::new(3, 1, vec![vec![1, 1, 2], vec![1, 2, 0], vec![1, 0, 2]])
        .expect("non-degenerate fixture")
}

/// Same construction at p = 5: rows 1 and 2 affine with `a1*2 = a2*1`.
pub fn commuting_fixture_p5() -> AlmostSymplectic {
    AlmostSymplectic::new(
        5,
        1,
        vec![
            vec![1, 2, 1, 1, 3],
            vec![3, 4, 0, 1, 2],
            vec![3, 0, 2, 4, 1],
            vec![2, 1, 4, 2, 3],
            vec![1, 3, 2, 4, 1],
        ],
    )
    .expect("non-degenerate fixture")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn vec_neg(p: usize, n: u32, a: usize) -> usize {
        let mut a = a;
        let mut out = 0;
        let mut mult = 1;
        for _ in 0..n {
            out += ((p - a % p) % p) * mult;
            mult *= p;
            a /= p;
        }
        out
    }

    #[test]
    fn left_translation_is_exact_permutation() {
        let omega = commuting_fixture_p3();
        let alg = LoopAlgebra::from_omega(&omega).unwrap();
        for g in 0..alg.dim() {
            let l = alg.left_translation(g);
            // one 1 per row and per column, all else exactly zero
            for r in 0..alg.dim() {
                let row_ones = (0..alg.dim())
                    .filter(|&c| l.get(r, c) == Complex64::new(1.0, 0.0))
                    .count();
                assert_eq!(row_ones, 1);
            }
            assert!(
                l.mul(&l.adjoint())
                    .max_abs_diff(&CMatrix::identity(alg.dim()))
                    < 1e-15
            );
        }
    }

    #[test]
    fn chi_subspaces_decompose_the_algebra() {
        let omega = commuting_fixture_p3();
        let alg = LoopAlgebra::from_omega(&omega).unwrap();
        let mut total = 0;
        let mut stacked = CMatrix::zeros(alg.dim(), alg.dim());
        let mut col = 0;
        for k in 0..alg.p() {
            let b = alg.chi_subspace(k).unwrap();
            assert_eq!(b.cols(), alg.vdim());
            total += b.cols();
            // orthonormal columns
            assert!(
                b.adjoint()
                    .mul(&b)
                    .max_abs_diff(&CMatrix::identity(alg.vdim()))
                    < 1e-12
            );
            // each basis vector is supported on one central fiber
            for w in 0..alg.vdim() {
                for x in 0..alg.p() {
                    for v in 0..alg.vdim() {
                        if v != w {
                            assert_eq!(b.get(alg.element(x, v), w).norm(), 0.0);
                        }
                    }
                }
            }
            for w in 0..b.cols() {
                for r in 0..alg.dim() {
                    stacked.set(r, col + w, b.get(r, w));
                }
            }
            col += b.cols();
        }
        assert_eq!(total, alg.dim());
        // the union is a unitary basis of the whole algebra
        assert!(
            stacked
                .adjoint()
                .mul(&stacked)
                .max_abs_diff(&CMatrix::identity(alg.dim()))
                < 1e-12
        );
        assert!(alg.chi_subspace(3).is_err());
    }

    #[test]
    fn transformation_rule_exact_when_center_acts_freely() {
        // omega(0,.) = 0 makes the strict rule ((x,0)*f) = chi(x) f hold
        let mut table = vec![vec![0u32; 3]; 3];
        table[1] = vec![0, 2, 1];
        table[2] = vec![0, 1, 2];
        let omega = AlmostSymplectic::new_unchecked(3, 1, table).unwrap();
        let alg = LoopAlgebra::from_omega(&omega).unwrap();
        for k in 0..3 {
            let b = alg.chi_subspace(k).unwrap();
            for x in 0..3 {
                let l = alg.left_translation(alg.element(x, 0));
                let lb = l.mul(&b);
                let scaled = b.scale(chi(3, k, x));
                assert!(lb.max_abs_diff(&scaled) < 1e-12, "k={k} x={x}");
            }
        }
    }

    #[test]
    fn e_operator_matches_phase_shift_oracle() {
        let omega = commuting_fixture_p3();
        let alg = LoopAlgebra::from_omega(&omega).unwrap();
        let p = 3usize;
        let inv2 = (p + 1) / 2;
        for k in 0..p {
            for u in 0..alg.vdim() {
                let e = alg.e_operator(k, u).unwrap();
                // oracle: E f_w = chi(inv2 * omega(u, w-u)) f_{w-u}
                let mut expect = CMatrix::zeros(alg.vdim(), alg.vdim());
                for w in 0..alg.vdim() {
                    let shifted = symplectic::vec_add(p, 1, w, vec_neg(p, 1, u));
                    let phase = chi(p, k, (inv2 * omega.value(u, shifted) as usize) % p);
                    expect.set(shifted, w, phase);
                }
                assert!(e.max_abs_diff(&expect) < 1e-12, "k={k} u={u}");
            }
        }
    }

    #[test]
    fn e_zero_is_diagonal() {
        let omega = commuting_fixture_p3();
        let alg = LoopAlgebra::from_omega(&omega).unwrap();
        let e = alg.e_operator(1, 0).unwrap();
        assert!(e.offdiag_norm() < 1e-12);
        // with a vanishing zero-row the fiber scalars coincide, so E_0
        // is scalar and commutes with every E_u
        let mut table = vec![vec![0u32; 3]; 3];
        table[1] = vec![0, 2, 1];
        table[2] = vec![0, 1, 2];
        let normalized = AlmostSymplectic::new_unchecked(3, 1, table).unwrap();
        let nalg = LoopAlgebra::from_omega(&normalized).unwrap();
        for k in 0..3 {
            let e0 = nalg.e_operator(k, 0).unwrap();
            for u in 0..3 {
                let eu = nalg.e_operator(k, u).unwrap();
                let comm = e0.mul(&eu).sub(&eu.mul(&e0)).frobenius_norm();
                assert!(comm < 1e-12, "k={k} u={u}");
            }
        }
    }

    #[test]
    fn s_sets_match_brute_force() {
        let mut rng = StdRng::seed_from_u64(80);
        for _ in 0..5 {
            let omega = symplectic::random_omega(&mut rng, 3, 1, false);
            let pairs = symmetric_zero_pairs(&omega);
            // brute force the pair set
            for u in 0..3 {
                for v in 0..3 {
                    let expected = omega.value(u, v) == 0 && omega.value(v, u) == 0;
                    assert_eq!(pairs.contains(&(u, v)), expected);
                }
            }
            for level in 1..=3 {
                let tuples = s_set(&omega, level);
                let mut brute = Vec::new();
                let side = omega.dim();
                for code in 0..side.pow(level as u32) {
                    let mut t = Vec::new();
                    let mut c = code;
                    for _ in 0..level {
                        t.push(c % side);
                        c /= side;
                    }
                    if (0..level).all(|i| (i + 1..level).all(|j| in_pair_set(&omega, t[i], t[j]))) {
                        brute.push(t);
                    }
                }
                let mut got = tuples.clone();
                got.sort();
                brute.sort();
                assert_eq!(got, brute);
            }
        }
    }

    #[test]
    fn single_symmetric_zero_gives_singleton_sets() {
        // omega(u,v) = 0 iff u = v = 2: the pair set and every level are
        // the constant tuples at 2
        let mut table = vec![vec![1u32; 3]; 3];
        table[2][2] = 0;
        let omega = AlmostSymplectic::new(3, 1, table).unwrap();
        assert_eq!(symmetric_zero_pairs(&omega), vec![(2, 2)]);
        assert_eq!(s_set(&omega, 3), vec![vec![2, 2, 2]]);
        // no symmetric zeros at all
        let dense = AlmostSymplectic::new(3, 1, vec![vec![1; 3]; 3]).unwrap();
        assert!(symmetric_zero_pairs(&dense).is_empty());
        assert!(s_set(&dense, 2).is_empty());
    }

    #[test]
    fn s1_pairs_commute_on_fixtures_with_witness_outside() {
        for (omega, p) in [
            (commuting_fixture_p3(), 3usize),
            (commuting_fixture_p5(), 5),
        ] {
            let alg = LoopAlgebra::from_omega(&omega).unwrap();
            for k in 0..p {
                for &(u, v) in &symmetric_zero_pairs(&omega) {
                    let eu = alg.e_operator(k, u).unwrap();
                    let ev = alg.e_operator(k, v).unwrap();
                    let comm = eu.mul(&ev).sub(&ev.mul(&eu));
                    assert!(
                        comm.frobenius_norm() < 1e-12,
                        "p={p} k={k} pair ({u},{v}) commutator {}",
                        comm.frobenius_norm()
                    );
                }
            }
            // recorded witness outside the pair set
            let eu = alg.e_operator(1, 0).unwrap();
            let ev = alg.e_operator(1, 1).unwrap();
            assert!(!in_pair_set(&omega, 0, 1));
            assert!(eu.mul(&ev).sub(&ev.mul(&eu)).frobenius_norm() > 1e-3);
        }
    }

    #[test]
    fn code_space_dimensions_account_for_the_fiber() {
        // joint eigenspaces of the commuting gated pair fill the fiber
        let omega = commuting_fixture_p3();
        let alg = LoopAlgebra::from_omega(&omega).unwrap();
        let tuple = vec![1usize, 2];
        let k = 1;
        let s1 = alg.e_spectrum(k, 1).unwrap();
        let s2 = alg.e_spectrum(k, 2).unwrap();
        let mut total = 0;
        for l1 in &s1 {
            for l2 in &s2 {
                let cs = code_space(&alg, &omega, k, &tuple, &[*l1, *l2]).unwrap();
                for r in &cs.residuals {
                    assert!(*r <= RESIDUAL_TOL);
                }
                total += cs.dimension();
            }
        }
        // the occupied (l1, l2) pairs are distinct, so the joint
        // eigenspaces partition the 3-dimensional fiber exactly once
        assert_eq!(total, 3);
        // a lambda nowhere near the spectrum gives dimension 0, not error
        let off = code_space(
            &alg,
            &omega,
            k,
            &tuple,
            &[Complex64::new(0.5, 0.0), Complex64::new(0.5, 0.0)],
        )
        .unwrap();
        assert_eq!(off.dimension(), 0);
        // tuples outside the S-set are rejected
        assert!(code_space(&alg, &omega, k, &[0, 1], &[s1[0], s2[0]]).is_err());
    }

    #[test]
    fn code_dimensions_invariant_under_carrier_relabeling() {
        let omega = commuting_fixture_p3();
        let alg = LoopAlgebra::from_omega(&omega).unwrap();
        let k = 1;
        let tuple = vec![1usize, 2];
        let l1 = alg.e_spectrum(k, 1).unwrap()[0];
        let l2 = alg.e_spectrum(k, 2).unwrap()[0];
        let base = code_space(&alg, &omega, k, &tuple, &[l1, l2]).unwrap();

        // relabel V by a permutation pi, conjugating the loop table by
        // the carrier bijection (x, u) -> (x, pi(u))
        let mut rng = StdRng::seed_from_u64(81);
        let pi = fixtures::random_permutation(&mut rng, 3);
        let vdim = 3usize;
        let relabel = |a: usize| (a / vdim) * vdim + pi.apply(a % vdim);
        let size = alg.dim();
        let mut table = vec![vec![0usize; size]; size];
        for a in 0..size {
            for b in 0..size {
                table[relabel(a)][relabel(b)] = relabel(alg.magma.op(a, b));
            }
        }
        let conj = LoopAlgebra::from_magma(3, 3, FiniteMagma::new(table).unwrap()).unwrap();
        // omega transported the same way gates the relabeled tuple
        let mut omega2 = vec![vec![0u32; 3]; 3];
        for u in 0..3 {
            for v in 0..3 {
                omega2[pi.apply(u)][pi.apply(v)] = omega.value(u, v);
            }
        }
        let omega2 = AlmostSymplectic::new(3, 1, omega2).unwrap();
        let tuple2: Vec<usize> = tuple.iter().map(|&u| pi.apply(u)).collect();
        let moved = code_space(&conj, &omega2, k, &tuple2, &[l1, l2]).unwrap();
        assert_eq!(base.dimension(), moved.dimension());
    }

    fn two_slot_root() -> ColoredSquare {
        // white slots at cells (0,0) and (0,1); strict
        let table = vec![vec![0usize, 0, 1], vec![1, 2, 2], vec![2, 1, 1]];
        ColoredSquare::from_cell_table(3, 1, &table).unwrap()
    }

    #[test]
    fn partial_action_accept_and_reject() {
        let root = two_slot_root();
        assert!(root.is_strict().unwrap());
        let omega_a = commuting_fixture_p3();
        let mut rng = StdRng::seed_from_u64(82);
        let omega_b = symplectic::random_omega(&mut rng, 3, 1, false);

        // accepted: the embedded pair reads omega_a's symmetric zero
        let data = vec![
            (omega_a.clone(), vec![1usize]),
            (omega_b.clone(), vec![2usize]),
        ];
        let out = partial_action(&root, &data).unwrap();
        match &out {
            PartialActionOutcome::Accepted(code) => {
                assert_eq!(code.tuple, vec![1, 2]);
                assert!(in_s_set(&code.omega, &code.tuple));
                // accepted composite supports the code-space pipeline
                let alg = LoopAlgebra::from_omega(&code.omega).unwrap();
                let spec = alg.e_spectrum(1, code.tuple[0]).unwrap();
                let spec2 = alg.e_spectrum(1, code.tuple[1]).unwrap();
                let cs =
                    code_space(&alg, &code.omega, 1, &code.tuple, &[spec[0], spec2[0]]).unwrap();
                for r in &cs.residuals {
                    assert!(*r <= RESIDUAL_TOL);
                }
            }
            PartialActionOutcome::Rejected { reason } => panic!("expected accept: {reason}"),
        }

        // rejected: cross pair hits a nonzero value
        let data = vec![(omega_a.clone(), vec![0usize]), (omega_b, vec![1usize])];
        let out = partial_action(&root, &data).unwrap();
        assert!(!out.is_accepted());

        // inputs violating their own gate are errors, not rejections
        let bad = vec![(omega_a, vec![0usize, 1])];
        let single_root = {
            let table = vec![vec![0usize, 1, 1], vec![1, 2, 2], vec![2, 1, 1]];
            ColoredSquare::from_cell_table(3, 1, &table).unwrap()
        };
        assert!(partial_action(&single_root, &bad).is_err());
    }

    #[test]
    fn partial_action_matches_reverification() {
        // accept/reject decisions agree with re-running the membership
        // test on the composed data
        let root = two_slot_root();
        let mut rng = StdRng::seed_from_u64(83);
        for _ in 0..10 {
            let omega_a = symplectic::random_omega(&mut rng, 3, 1, false);
            let omega_b = symplectic::random_omega(&mut rng, 3, 1, false);
            let ta = vec![rng.gen_range(0..3usize)];
            let tb = vec![rng.gen_range(0..3usize)];
            let data = vec![(omega_a.clone(), ta.clone()), (omega_b.clone(), tb.clone())];
            let out = partial_action(&root, &data).unwrap();
            let composed = symplectic::algebra_action_full(&root, &[omega_a, omega_b]).unwrap();
            let embedded = vec![
                composed.embed(0, ta[0]).unwrap(),
                composed.embed(1, tb[0]).unwrap(),
            ];
            assert_eq!(out.is_accepted(), in_s_set(&composed.omega, &embedded));
        }
    }
}
