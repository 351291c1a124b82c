//! Seeded random fixtures shared by the verification suites and tests.
//!
//! Every generator takes an explicit RNG; suites seed a ChaCha stream so
//! identical (suite, seed, scale) runs are reproducible.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::channels::TreeKrausChannel;
use crate::cmatrix::CMatrix;
use crate::density::DensityMatrix;
use crate::loops::FiniteMagma;
use crate::perm::Permutation;
use crate::prob::ProbVector;
use crate::squares::{self, ColoredSquare, LittleSquareTuple, RationalRect};
use crate::trees::PlanarTree;

/// Smallest non-associative loop: order 5, identity 0, not Moufang.
pub fn nonassociative_loop_order5() -> FiniteMagma {
    FiniteMagma::new(vec![
        vec![0, 1, 2, 3, 4],
        vec![1, 0, 3, 4, 2],
        vec![2, 3, 4, 1, 0],
        vec![3, 4, 0, 2, 1],
        vec![4, 2, 1, 0, 3],
    ])
    .expect("hand-checked Latin square with identity")
}

/// Dirichlet(1) sample: a uniform point of the simplex.
pub fn random_prob(rng: &mut impl Rng, n: usize) -> ProbVector {
    let g: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    ProbVector::renormalized(g).expect("positive mass")
}

pub fn random_complex_gaussian(rng: &mut impl Rng, rows: usize, cols: usize) -> CMatrix {
    let mut m = CMatrix::zeros(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            m.set(r, c, Complex64::new(re, im));
        }
    }
    m
}

/// `G G* / Tr(G G*)` with `G` complex Gaussian: valid by construction.
pub fn random_density(rng: &mut impl Rng, n: usize) -> DensityMatrix {
    let g = random_complex_gaussian(rng, n, n);
    let gg = g.mul(&g.adjoint());
    let tr = gg.trace().re;
    DensityMatrix::new(gg.scale_re(1.0 / tr)).expect("Gram matrix is a state")
}

/// Haar-distributed isometry (`rows >= cols`): Gaussian then Gram-Schmidt.
pub fn random_isometry(rng: &mut impl Rng, rows: usize, cols: usize) -> CMatrix {
    loop {
        let mut g = random_complex_gaussian(rng, rows, cols);
        if g.orthonormalize_columns().is_ok() {
            return g;
        }
    }
}

pub fn random_unitary(rng: &mut impl Rng, n: usize) -> CMatrix {
    random_isometry(rng, n, n)
}

pub fn random_permutation(rng: &mut impl Rng, n: usize) -> Permutation {
    let mut images: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        images.swap(i, j);
    }
    Permutation::from_images(images).expect("shuffle is a bijection")
}

/// Random planar rooted tree with `n` leaves, internal arity >= 2.
pub fn random_tree(rng: &mut impl Rng, n: usize) -> PlanarTree {
    assert!(n >= 1);
    if n == 1 {
        return PlanarTree::leaf();
    }
    let k = rng.gen_range(2..=n);
    // random composition of n into k positive parts
    let mut cuts: Vec<usize> = Vec::with_capacity(k - 1);
    while cuts.len() < k - 1 {
        let c = rng.gen_range(1..n);
        if !cuts.contains(&c) {
            cuts.push(c);
        }
    }
    cuts.sort_unstable();
    let mut parts = Vec::with_capacity(k);
    let mut prev = 0;
    for &c in &cuts {
        parts.push(c - prev);
        prev = c;
    }
    parts.push(n - prev);
    PlanarTree::node(parts.into_iter().map(|m| random_tree(rng, m)).collect())
}

/// Vertex-normalized edge operators on `tree`: at each vertex the stacked
/// child blocks of a Haar-random isometry on `C^{k*dim}` guarantee
/// `sum A_e* A_e = I` by construction.
pub fn random_channel(rng: &mut impl Rng, tree: &PlanarTree, dim: usize) -> TreeKrausChannel {
    let ix = tree.index();
    let mut ops: Vec<Option<CMatrix>> = vec![None; ix.parent.len()];
    for v in 0..ix.parent.len() {
        let kids = &ix.children[v];
        if kids.is_empty() {
            continue;
        }
        let iso = random_isometry(rng, kids.len() * dim, dim);
        for (t, &c) in kids.iter().enumerate() {
            let mut block = CMatrix::zeros(dim, dim);
            for r in 0..dim {
                for col in 0..dim {
                    block.set(r, col, iso.get(t * dim + r, col));
                }
            }
            ops[c] = Some(block);
        }
    }
    TreeKrausChannel::new(dim, tree.clone(), ops).expect("stacked isometry blocks normalize")
}

/// Up to `max_rects` disjoint grid-aligned rectangles on a random
/// base-ary grid of exponent `1..=max_n`; always at least one rectangle.
pub fn random_tuple(
    rng: &mut impl Rng,
    max_rects: usize,
    base: usize,
    max_n: u32,
) -> LittleSquareTuple {
    loop {
        let n = rng.gen_range(1..=max_n);
        let side = (base as u64).pow(n) as i64;
        let mut rects: Vec<RationalRect> = Vec::new();
        for _ in 0..max_rects * 8 {
            if rects.len() >= max_rects {
                break;
            }
            let x0 = rng.gen_range(0..side);
            let x1 = rng.gen_range(x0 + 1..=side.min(x0 + side / 2 + 1));
            let y0 = rng.gen_range(0..side);
            let y1 = rng.gen_range(y0 + 1..=side.min(y0 + side / 2 + 1));
            let cand = RationalRect::new(
                (squares::rat(x0, side), squares::rat(x1, side)),
                (squares::rat(y0, side), squares::rat(y1, side)),
            )
            .expect("grid rectangle");
            if rects.iter().all(|r| !r.interior_intersects(&cand)) {
                rects.push(cand);
            }
        }
        if !rects.is_empty() {
            return LittleSquareTuple::new(rects).expect("disjoint by construction");
        }
    }
}

/// Strict dyadic tuple with corners on a grid of exponent at most `max_n`.
pub fn random_strict_tuple(rng: &mut impl Rng, max_rects: usize, max_n: u32) -> LittleSquareTuple {
    loop {
        let c = random_tuple(rng, max_rects, 2, max_n);
        if c.grid_exponent(2).map_or(0, |n| n) <= max_n && c.is_strict(2).unwrap_or(false) {
            return c;
        }
    }
}

/// Random p-colored square assembled from a random cell table.
pub fn random_colored_square(rng: &mut impl Rng, p: usize, max_n: u32) -> ColoredSquare {
    let n = rng.gen_range(1..=max_n);
    let side = (p as u64).pow(n) as usize;
    let table: Vec<Vec<usize>> = (0..side)
        .map(|_| (0..side).map(|_| rng.gen_range(0..p)).collect())
        .collect();
    ColoredSquare::from_cell_table(p, n, &table).expect("cell table covers the square")
}

/// Random strict colored square: every grid row and column keeps a
/// non-white cell, and at least one white slot exists.
pub fn random_strict_colored_square(rng: &mut impl Rng, p: usize, max_n: u32) -> ColoredSquare {
    loop {
        let q = random_colored_square(rng, p, max_n);
        if q.arity() > 0 && q.is_strict().unwrap_or(false) {
            return q;
        }
    }
}

/// Random composition of `n` into at most `max_parts` positive parts.
pub fn random_composition(rng: &mut impl Rng, n: usize, max_parts: usize) -> Vec<usize> {
    let k = rng.gen_range(1..=max_parts.min(n));
    let mut parts = vec![1usize; k];
    for _ in 0..(n - k) {
        let i = rng.gen_range(0..k);
        parts[i] += 1;
    }
    parts
}
