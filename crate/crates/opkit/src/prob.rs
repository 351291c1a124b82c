//! The operad of classical probabilities on finite sets, its average
//! algebra, coherent entropy families, tree-indexed entropies, and the
//! thermodynamic minimization algebra over the simplex.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::trees::PlanarTree;
use crate::{Error, Result};

/// Tolerance on simplex membership.
pub const NORM_TOL: f64 = 1e-9;
/// Tolerance for the zero-stripping coherence identity.
pub const COHERENCE_TOL: f64 = 1e-12;

/// Probability vector on `{1..n}`: nonnegative entries summing to one
/// within [`NORM_TOL`]. Inputs are never silently renormalized.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbVector(Vec<f64>);

impl ProbVector {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::Simplex("empty vector".into()));
        }
        if let Some(bad) = p.iter().find(|&&x| !(x >= 0.0)) {
            return Err(Error::Simplex(format!("negative or NaN entry {bad}")));
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > NORM_TOL {
            return Err(Error::Simplex(format!("sum {sum} differs from 1")));
        }
        Ok(ProbVector(p))
    }

    /// Explicit renormalization of a nonnegative vector with positive mass.
    pub fn renormalized(p: Vec<f64>) -> Result<Self> {
        if p.iter().any(|&x| !(x >= 0.0)) {
            return Err(Error::Simplex("negative or NaN entry".into()));
        }
        let sum: f64 = p.iter().sum();
        if sum <= 0.0 {
            return Err(Error::Simplex("zero total mass".into()));
        }
        ProbVector::new(p.into_iter().map(|x| x / sum).collect())
    }

    /// The point distribution (1) on a single outcome.
    pub fn point() -> Self {
        ProbVector(vec![1.0])
    }

    pub fn uniform(n: usize) -> Self {
        ProbVector(vec![1.0 / n as f64; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.0[i]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Copy with exact-zero entries removed.
    pub fn strip_zeros(&self) -> ProbVector {
        ProbVector(self.0.iter().copied().filter(|&x| x != 0.0).collect())
    }
}

/// Operadic composition of probabilities of independent subsystems:
/// the output entry at block `r`, position `j` is `p_r * p_{r,j}`.
pub fn compose(p: &ProbVector, parts: &[ProbVector]) -> Result<ProbVector> {
    if parts.len() != p.len() {
        return Err(Error::ArityMismatch {
            expected: p.len(),
            got: parts.len(),
        });
    }
    let mut out = Vec::with_capacity(parts.iter().map(|q| q.len()).sum());
    for (r, q) in parts.iter().enumerate() {
        let w = p.get(r);
        out.extend(q.as_slice().iter().map(|&x| w * x));
    }
    ProbVector::new(out)
}

/// Convex combination `sum_i p_i x_i`.
pub fn average(p: &ProbVector, xs: &[f64]) -> Result<f64> {
    if xs.len() != p.len() {
        return Err(Error::ArityMismatch {
            expected: p.len(),
            got: xs.len(),
        });
    }
    Ok(p.as_slice().iter().zip(xs).map(|(&w, &x)| w * x).sum())
}

/// Coherent entropy family: evaluation is unchanged by vanishing entries.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum EntropyFamily {
    Shannon,
    Renyi { q: f64 },
    Tsallis { q: f64 },
}

impl EntropyFamily {
    pub fn shannon() -> Self {
        EntropyFamily::Shannon
    }

    pub fn renyi(q: f64) -> Result<Self> {
        validate_order(q)?;
        Ok(EntropyFamily::Renyi { q })
    }

    pub fn tsallis(q: f64) -> Result<Self> {
        validate_order(q)?;
        Ok(EntropyFamily::Tsallis { q })
    }

    /// Re-validates the order parameter (deserialized values bypass the
    /// checked constructors).
    pub fn validate(&self) -> Result<()> {
        match *self {
            EntropyFamily::Shannon => Ok(()),
            EntropyFamily::Renyi { q } | EntropyFamily::Tsallis { q } => validate_order(q),
        }
    }
}

fn validate_order(q: f64) -> Result<()> {
    if !(q > 0.0) {
        return Err(Error::Family(format!("order q = {q} must be positive")));
    }
    if q == 1.0 {
        return Err(Error::Family("order q = 1 is excluded".into()));
    }
    Ok(())
}

/// Entropy of a nonnegative weight slice, with `0 log 0 := 0` and
/// `0^q := 0`.
pub fn entropy_slice(family: EntropyFamily, p: &[f64]) -> f64 {
    match family {
        EntropyFamily::Shannon => -p
            .iter()
            .map(|&x| if x > 0.0 { x * x.ln() } else { 0.0 })
            .sum::<f64>(),
        EntropyFamily::Renyi { q } => {
            let s: f64 = p
                .iter()
                .map(|&x| if x > 0.0 { x.powf(q) } else { 0.0 })
                .sum();
            s.ln() / (1.0 - q)
        }
        EntropyFamily::Tsallis { q } => {
            let s: f64 = p
                .iter()
                .map(|&x| if x > 0.0 { x.powf(q) } else { 0.0 })
                .sum();
            (s - 1.0) / (1.0 - q)
        }
    }
}

/// Entropy of a probability vector.
pub fn classical_entropy(family: EntropyFamily, p: &ProbVector) -> f64 {
    entropy_slice(family, p.as_slice())
}

/// True iff the entropy of `p` agrees with the entropy of its
/// zero-stripped version within [`COHERENCE_TOL`].
pub fn coherence_check(family: EntropyFamily, p: &ProbVector) -> bool {
    let full = classical_entropy(family, p);
    let stripped = classical_entropy(family, &p.strip_zeros());
    (full - stripped).abs() <= COHERENCE_TOL
}

/// Tree-indexed entropy: each branching vertex contributes the family's
/// entropy of its branch-mass distribution, plus the mass-weighted
/// entropies of the renormalized blocks under it. A block of zero mass
/// contributes nothing. On a corolla this is exactly the family's n-ary
/// entropy; the unit tree gives 0.
pub fn tree_entropy(family: EntropyFamily, tau: &PlanarTree, p: &ProbVector) -> Result<f64> {
    let n = tau.leaf_count();
    if p.len() != n {
        return Err(Error::ArityMismatch {
            expected: n,
            got: p.len(),
        });
    }
    Ok(tree_entropy_rec(family, tau, p.as_slice()))
}

fn tree_entropy_rec(family: EntropyFamily, tau: &PlanarTree, p: &[f64]) -> f64 {
    if tau.is_leaf() {
        return 0.0;
    }
    let children = tau.children();
    let mut masses = Vec::with_capacity(children.len());
    let mut off = 0;
    for child in children {
        let w = child.leaf_count();
        masses.push(p[off..off + w].iter().sum::<f64>());
        off += w;
    }
    let mut total = entropy_slice(family, &masses);
    off = 0;
    for (child, &q) in children.iter().zip(&masses) {
        let w = child.leaf_count();
        if q > 0.0 {
            let cond: Vec<f64> = p[off..off + w].iter().map(|&x| x / q).collect();
            total += q * tree_entropy_rec(family, child, &cond);
        }
        off += w;
    }
    total
}

/// Minimum of `sum_i p_i x_i - S_tau(p)/beta` over the closed simplex,
/// computed by projected gradient descent from the uniform point with 50
/// seeded random restarts.
pub fn thermo_algebra(
    family: EntropyFamily,
    tau: &PlanarTree,
    xs: &[f64],
    beta: f64,
) -> Result<f64> {
    if !(beta > 0.0) {
        return Err(Error::Parameter(format!("beta = {beta} must be positive")));
    }
    let n = tau.leaf_count();
    if xs.len() != n {
        return Err(Error::ArityMismatch {
            expected: n,
            got: xs.len(),
        });
    }
    if n == 1 {
        return Ok(xs[0]);
    }
    let objective = move |p: &[f64]| -> f64 {
        let avg: f64 = p.iter().zip(xs).map(|(&w, &x)| w * x).sum();
        avg - tree_entropy_rec(family, tau, p) / beta
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0x7ea0);
    let uniform = vec![1.0 / n as f64; n];
    let (mut best_val, mut best_pt) = pgd_minimize(&objective, uniform.clone(), 2000);
    for _ in 0..50 {
        let start = dirichlet(&mut rng, n);
        let (v, pt) = pgd_minimize(&objective, start, 300);
        if v < best_val {
            best_val = v;
            best_pt = pt;
        }
    }
    // multiplicative polish: Euclidean projection stalls near the
    // boundary, the exponentiated update does not
    let (e1, p1) = eg_polish(&objective, best_pt, 2000);
    let (e2, _) = eg_polish(&objective, uniform, 2000);
    let mut best_val = best_val.min(e1.min(e2));
    let (v3, _) = pgd_minimize(&objective, p1, 500);
    best_val = best_val.min(v3);
    Ok(best_val)
}

fn fd_gradient(obj: &impl Fn(&[f64]) -> f64, p: &[f64], h: f64) -> Vec<f64> {
    let n = p.len();
    let mut g = vec![0.0; n];
    for i in 0..n {
        let mut up = p.to_vec();
        up[i] += h;
        let mut dn = p.to_vec();
        dn[i] -= h;
        g[i] = (safe_objective(obj, &up) - safe_objective(obj, &dn)) / (2.0 * h);
    }
    g
}

fn eg_polish(obj: &impl Fn(&[f64]) -> f64, start: Vec<f64>, max_iters: usize) -> (f64, Vec<f64>) {
    let mut p = project_simplex(&start);
    let mut fp = obj(&p);
    let mut eta = 1.0f64;
    for _ in 0..max_iters {
        let g = fd_gradient(obj, &p, 1e-6);
        eta = (eta * 2.0).min(1e6);
        let mut moved = false;
        while eta > 1e-16 {
            let cand: Vec<f64> = p
                .iter()
                .zip(&g)
                .map(|(&x, &gi)| x * (-eta * gi).clamp(-700.0, 700.0).exp())
                .collect();
            let total: f64 = cand.iter().sum();
            if total > 0.0 && total.is_finite() {
                let cand: Vec<f64> = cand.iter().map(|&x| x / total).collect();
                let fc = obj(&cand);
                if fc < fp {
                    let improved = fp - fc;
                    p = cand;
                    fp = fc;
                    moved = true;
                    if improved < 1e-16 {
                        return (fp, p);
                    }
                    break;
                }
            }
            eta *= 0.5;
        }
        if !moved {
            break;
        }
    }
    (fp, p)
}

fn dirichlet(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let g: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let s: f64 = g.iter().sum();
    g.into_iter().map(|x| x / s).collect()
}

/// Euclidean projection onto the probability simplex.
pub fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (j, &x) in u.iter().enumerate() {
        cumulative += x;
        let t = (cumulative - 1.0) / (j + 1) as f64;
        if x - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

fn safe_objective(obj: &impl Fn(&[f64]) -> f64, probe: &[f64]) -> f64 {
    let clamped: Vec<f64> = probe.iter().map(|&x| x.max(0.0)).collect();
    let s: f64 = clamped.iter().sum();
    let renorm: Vec<f64> = clamped.iter().map(|&x| x / s).collect();
    obj(&renorm)
}

fn pgd_minimize(
    obj: &impl Fn(&[f64]) -> f64,
    start: Vec<f64>,
    max_iters: usize,
) -> (f64, Vec<f64>) {
    let mut p = project_simplex(&start);
    let mut fp = obj(&p);
    let mut eta = 1.0f64;
    for _ in 0..max_iters {
        let g = fd_gradient(obj, &p, 1e-6);
        let gnorm: f64 = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        if gnorm < 1e-13 {
            break;
        }
        eta = (eta * 2.0).min(1e3);
        let mut moved = false;
        while eta > 1e-14 {
            let shifted: Vec<f64> = p.iter().zip(&g).map(|(&x, &gi)| x - eta * gi).collect();
            let cand = project_simplex(&shifted);
            let fc = obj(&cand);
            if fc < fp {
                let step: f64 = p
                    .iter()
                    .zip(&cand)
                    .map(|(&a, &b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                let improved = fp - fc;
                p = cand;
                fp = fc;
                moved = true;
                if improved < 1e-15 && step < 1e-12 {
                    return (fp, p);
                }
                break;
            }
            eta *= 0.5;
        }
        if !moved {
            break;
        }
    }
    (fp, p)
}

/// Brute-force minimization over the lattice `{k/steps}` inside the
/// simplex. Independent oracle for [`thermo_algebra`]; it never touches
/// the gradient path.
pub fn thermo_grid_search(
    family: EntropyFamily,
    tau: &PlanarTree,
    xs: &[f64],
    beta: f64,
    steps: usize,
) -> Result<f64> {
    if !(beta > 0.0) {
        return Err(Error::Parameter("beta must be positive".into()));
    }
    let n = tau.leaf_count();
    if xs.len() != n {
        return Err(Error::ArityMismatch {
            expected: n,
            got: xs.len(),
        });
    }
    let mut best = f64::INFINITY;
    let mut point = vec![0usize; n];
    grid_rec(
        family, tau, xs, beta, steps, 0, steps, &mut point, &mut best,
    );
    Ok(best)
}

#[allow(clippy::too_many_arguments)]
fn grid_rec(
    family: EntropyFamily,
    tau: &PlanarTree,
    xs: &[f64],
    beta: f64,
    steps: usize,
    idx: usize,
    remaining: usize,
    point: &mut Vec<usize>,
    best: &mut f64,
) {
    let n = point.len();
    if idx == n - 1 {
        point[idx] = remaining;
        let p: Vec<f64> = point.iter().map(|&k| k as f64 / steps as f64).collect();
        let avg: f64 = p.iter().zip(xs).map(|(&w, &x)| w * x).sum();
        let val = avg - tree_entropy_rec(family, tau, &p) / beta;
        if val < *best {
            *best = val;
        }
        return;
    }
    for k in 0..=remaining {
        point[idx] = k;
        grid_rec(
            family,
            tau,
            xs,
            beta,
            steps,
            idx + 1,
            remaining - k,
            point,
            best,
        );
    }
}

/// `min_i x_i - log(sum_i exp(-beta (x_i - min)))/beta`: the closed form
/// of the Shannon-family minimum, evaluated stably.
pub fn log_sum_exp_min(xs: &[f64], beta: f64) -> f64 {
    let m = xs.iter().cloned().fold(f64::INFINITY, f64::min);
    let s: f64 = xs.iter().map(|&x| (-beta * (x - m)).exp()).sum();
    m - s.ln() / beta
}
