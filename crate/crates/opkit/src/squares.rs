//! Exact-rational little squares: tuples of axis-aligned rectangles with
//! disjoint interiors inside the unit square, operadic substitution,
//! grid-alignment and strictness predicates, and the colored p-ary
//! variant.
//!
//! Everything here is arbitrary-precision rational arithmetic; strictness
//! is a combinatorial property of the minimal grid and would not survive
//! floating-point snapping.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::perm::Permutation;
use crate::{Error, Result};

pub type Rat = BigRational;

/// Exact rational from an integer pair.
pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Axis-aligned rectangle with rational corners inside the unit square.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalRect {
    x: (Rat, Rat),
    y: (Rat, Rat),
}

impl RationalRect {
    pub fn new(x: (Rat, Rat), y: (Rat, Rat)) -> Result<Self> {
        for (lo, hi) in [&x, &y] {
            if lo.is_negative() || hi > &Rat::one() || lo > hi {
                return Err(Error::Geometry("interval outside [0,1] or reversed".into()));
            }
        }
        Ok(RationalRect { x, y })
    }

    pub fn from_ints(x0: (i64, i64), x1: (i64, i64), y0: (i64, i64), y1: (i64, i64)) -> Self {
        RationalRect::new(
            (rat(x0.0, x0.1), rat(x1.0, x1.1)),
            (rat(y0.0, y0.1), rat(y1.0, y1.1)),
        )
        .expect("literal rectangle")
    }

    pub fn unit() -> Self {
        RationalRect {
            x: (Rat::zero(), Rat::one()),
            y: (Rat::zero(), Rat::one()),
        }
    }

    pub fn x(&self) -> &(Rat, Rat) {
        &self.x
    }

    pub fn y(&self) -> &(Rat, Rat) {
        &self.y
    }

    pub fn width(&self) -> Rat {
        &self.x.1 - &self.x.0
    }

    pub fn height(&self) -> Rat {
        &self.y.1 - &self.y.0
    }

    pub fn area(&self) -> Rat {
        self.width() * self.height()
    }

    pub fn is_degenerate(&self) -> bool {
        self.x.0 == self.x.1 || self.y.0 == self.y.1
    }

    /// Open interiors intersect (exact comparison).
    pub fn interior_intersects(&self, other: &RationalRect) -> bool {
        let x_overlap =
            self.x.0.clone().max(other.x.0.clone()) < self.x.1.clone().min(other.x.1.clone());
        let y_overlap =
            self.y.0.clone().max(other.y.0.clone()) < self.y.1.clone().min(other.y.1.clone());
        x_overlap && y_overlap
    }

    /// Whether the point lies in the closed rectangle.
    pub fn contains_point(&self, x: &Rat, y: &Rat) -> bool {
        &self.x.0 <= x && x <= &self.x.1 && &self.y.0 <= y && y <= &self.y.1
    }

    /// Image of `inner` under the affine map whose image of the unit
    /// square is `self`.
    pub fn map_into(&self, inner: &RationalRect) -> RationalRect {
        let w = self.width();
        let h = self.height();
        RationalRect {
            x: (&self.x.0 + &w * &inner.x.0, &self.x.0 + &w * &inner.x.1),
            y: (&self.y.0 + &h * &inner.y.0, &self.y.0 + &h * &inner.y.1),
        }
    }
}

/// Largest base-power exponent in a reduced denominator: `Some(k)` when
/// `d = base^k`, otherwise `None`.
fn base_power_exponent(d: &BigInt, base: usize) -> Option<u32> {
    let b = BigInt::from(base);
    let mut d = d.clone();
    let mut k = 0u32;
    while d > BigInt::one() {
        if (&d % &b).is_zero() {
            d /= &b;
            k += 1;
        } else {
            return None;
        }
    }
    Some(k)
}

fn rat_grid_exponent(r: &Rat, base: usize) -> Option<u32> {
    base_power_exponent(r.denom(), base)
}

/// Ordered tuple of rectangles with pairwise disjoint interiors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LittleSquareTuple {
    rects: Vec<RationalRect>,
}

impl LittleSquareTuple {
    pub fn new(rects: Vec<RationalRect>) -> Result<Self> {
        if let Some(i) = rects.iter().position(RationalRect::is_degenerate) {
            return Err(Error::Geometry(format!("rectangle {i} is degenerate")));
        }
        for i in 0..rects.len() {
            for j in i + 1..rects.len() {
                if rects[i].interior_intersects(&rects[j]) {
                    return Err(Error::Geometry(format!("rectangles {i},{j} overlap")));
                }
            }
        }
        Ok(LittleSquareTuple { rects })
    }

    /// The arity-zero tuple (unique map from the empty union).
    pub fn empty() -> Self {
        LittleSquareTuple { rects: Vec::new() }
    }

    /// The operad unit: the identity embedding of the square.
    pub fn identity() -> Self {
        LittleSquareTuple {
            rects: vec![RationalRect::unit()],
        }
    }

    pub fn len(&self) -> usize {
        self.rects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rects.is_empty()
    }

    pub fn rects(&self) -> &[RationalRect] {
        &self.rects
    }

    /// Substitution `self o_i other` (1-based `i`): rectangle `i` is
    /// replaced by the images of `other`'s rectangles under its affine
    /// map, splicing the order at position `i`.
    pub fn compose(&self, i: usize, other: &LittleSquareTuple) -> Result<LittleSquareTuple> {
        if i == 0 || i > self.rects.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.rects.len(),
            });
        }
        let target = &self.rects[i - 1];
        let mut rects = Vec::with_capacity(self.rects.len() + other.rects.len() - 1);
        rects.extend_from_slice(&self.rects[..i - 1]);
        rects.extend(other.rects.iter().map(|r| target.map_into(r)));
        rects.extend_from_slice(&self.rects[i..]);
        LittleSquareTuple::new(rects)
    }

    /// Label action `c sigma = <c_{sigma(1)}, ..., c_{sigma(n)}>`.
    pub fn permute(&self, sigma: &Permutation) -> LittleSquareTuple {
        assert_eq!(sigma.len(), self.rects.len());
        LittleSquareTuple {
            rects: (0..self.rects.len())
                .map(|j| self.rects[sigma.apply(j)].clone())
                .collect(),
        }
    }

    /// Smallest `N` with every corner on the base-ary `N`-grid, or `None`
    /// when some coordinate has a non-base-power denominator.
    pub fn grid_exponent(&self, base: usize) -> Option<u32> {
        let mut n = 0u32;
        for r in &self.rects {
            for v in [&r.x.0, &r.x.1, &r.y.0, &r.y.1] {
                n = n.max(rat_grid_exponent(v, base)?);
            }
        }
        Some(n)
    }

    /// Covered-cell mask on the base-ary `n`-grid. All corners must be
    /// grid aligned at this resolution.
    pub fn rasterize(&self, base: usize, n: u32) -> Result<Vec<Vec<bool>>> {
        let side = (base as u64).pow(n) as usize;
        let scale = Rat::from(BigInt::from(side));
        let mut covered = vec![vec![false; side]; side];
        for r in &self.rects {
            let mut bounds = Vec::with_capacity(4);
            for v in [&r.x.0, &r.x.1, &r.y.0, &r.y.1] {
                let scaled = v * &scale;
                if !scaled.is_integer() {
                    return Err(Error::Geometry("corner off the grid".into()));
                }
                bounds.push(scaled.to_integer().to_usize().expect("small grid"));
            }
            for col in bounds[0]..bounds[1] {
                for row in bounds[2]..bounds[3] {
                    covered[row][col] = true;
                }
            }
        }
        Ok(covered)
    }

    /// Strictness on the minimal grid: every row and every column keeps
    /// at least one uncovered cell.
    pub fn is_strict(&self, base: usize) -> Result<bool> {
        let n = self
            .grid_exponent(base)
            .ok_or_else(|| Error::Geometry("tuple is not grid aligned for this base".into()))?;
        let covered = self.rasterize(base, n)?;
        let side = covered.len();
        let rows_ok = covered.iter().all(|row| row.iter().any(|&c| !c));
        let cols_ok = (0..side).all(|c| (0..side).any(|r| !covered[r][c]));
        Ok(rows_ok && cols_ok)
    }
}

/// Decomposition of the unit square into `p` colored regions, each a
/// rectangle list; region 0 is the insertion-slot tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredSquare {
    p: usize,
    regions: Vec<Vec<RationalRect>>,
}

impl ColoredSquare {
    /// Validates: `p >= 2` regions given, base-p aligned corners,
    /// non-degenerate rectangles, pairwise disjoint interiors across all
    /// regions, and closures covering the unit square exactly (total area
    /// one).
    pub fn new(p: usize, regions: Vec<Vec<RationalRect>>) -> Result<Self> {
        if p < 2 || regions.len() != p {
            return Err(Error::Geometry(format!(
                "expected {p} regions, got {}",
                regions.len()
            )));
        }
        let all: Vec<&RationalRect> = regions.iter().flatten().collect();
        for r in &all {
            if r.is_degenerate() {
                return Err(Error::Geometry("degenerate region rectangle".into()));
            }
            for v in [&r.x.0, &r.x.1, &r.y.0, &r.y.1] {
                if rat_grid_exponent(v, p).is_none() {
                    return Err(Error::Geometry("corner not on a p-power grid".into()));
                }
            }
        }
        for i in 0..all.len() {
            for j in i + 1..all.len() {
                if all[i].interior_intersects(all[j]) {
                    return Err(Error::Geometry("region interiors overlap".into()));
                }
            }
        }
        let total: Rat = all.iter().map(|r| r.area()).sum();
        if total != Rat::one() {
            return Err(Error::Geometry(format!(
                "regions cover area {total}, not 1"
            )));
        }
        Ok(ColoredSquare { p, regions })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn regions(&self) -> &[Vec<RationalRect>] {
        &self.regions
    }

    /// Arity: the number of insertion slots in region 0.
    pub fn arity(&self) -> usize {
        self.regions[0].len()
    }

    pub fn base_tuple(&self) -> LittleSquareTuple {
        LittleSquareTuple {
            rects: self.regions[0].clone(),
        }
    }

    /// Binary coloring of a tuple: the tuple's rectangles are the white
    /// region and the uncovered cells of its minimal grid the black one.
    pub fn from_binary_tuple(c: &LittleSquareTuple) -> Result<ColoredSquare> {
        let n = c
            .grid_exponent(2)
            .ok_or_else(|| Error::Geometry("tuple is not dyadic".into()))?;
        let covered = c.rasterize(2, n)?;
        let side = covered.len();
        let scale = Rat::from(BigInt::from(side as i64));
        let mut black = Vec::new();
        for (row, cells) in covered.iter().enumerate() {
            for (col, &cell) in cells.iter().enumerate() {
                if !cell {
                    black.push(RationalRect::new(
                        (
                            Rat::from(BigInt::from(col as i64)) / &scale,
                            Rat::from(BigInt::from(col as i64 + 1)) / &scale,
                        ),
                        (
                            Rat::from(BigInt::from(row as i64)) / &scale,
                            Rat::from(BigInt::from(row as i64 + 1)) / &scale,
                        ),
                    )?);
                }
            }
        }
        ColoredSquare::new(2, vec![c.rects.clone(), black])
    }

    /// Strictness: region 0's tuple is strict on its own minimal grid.
    pub fn is_strict(&self) -> Result<bool> {
        self.base_tuple().is_strict(self.p)
    }

    /// Composition: the scaled copy of `other` replaces slot `i` of
    /// region 0. New region `l >= 1` is `R_l` united with the image of
    /// `other`'s `R'_l`; region 0 keeps the remaining slots plus the
    /// image of `other`'s `R'_0`.
    pub fn compose(&self, i: usize, other: &ColoredSquare) -> Result<ColoredSquare> {
        if other.p != self.p {
            return Err(Error::Geometry(format!(
                "color counts differ: {} vs {}",
                self.p, other.p
            )));
        }
        let n0 = self.arity();
        if i == 0 || i > n0 {
            return Err(Error::IndexOutOfRange { index: i, len: n0 });
        }
        let target = &self.regions[0][i - 1];
        let mut regions = Vec::with_capacity(self.p);
        // region 0: other slots in order, with other's slots spliced in
        let mut r0 = Vec::new();
        r0.extend_from_slice(&self.regions[0][..i - 1]);
        r0.extend(other.regions[0].iter().map(|r| target.map_into(r)));
        r0.extend_from_slice(&self.regions[0][i..]);
        regions.push(r0);
        for l in 1..self.p {
            let mut rl = self.regions[l].clone();
            rl.extend(other.regions[l].iter().map(|r| target.map_into(r)));
            regions.push(rl);
        }
        ColoredSquare::new(self.p, regions)
    }

    /// Builds the coloring whose regions are the unit cells of the p-ary
    /// `n`-grid, cell `(row, col)` joining region `table[row][col]`.
    pub fn from_cell_table(p: usize, n: u32, table: &[Vec<usize>]) -> Result<ColoredSquare> {
        let side = (p as u64).pow(n) as usize;
        if table.len() != side || table.iter().any(|row| row.len() != side) {
            return Err(Error::Geometry(format!("table is not {side}x{side}")));
        }
        let scale = Rat::from(BigInt::from(side as i64));
        let mut regions: Vec<Vec<RationalRect>> = vec![Vec::new(); p];
        for (row, cells) in table.iter().enumerate() {
            for (col, &color) in cells.iter().enumerate() {
                if color >= p {
                    return Err(Error::Geometry(format!("color {color} out of range")));
                }
                regions[color].push(RationalRect::new(
                    (
                        Rat::from(BigInt::from(col as i64)) / &scale,
                        Rat::from(BigInt::from(col as i64 + 1)) / &scale,
                    ),
                    (
                        Rat::from(BigInt::from(row as i64)) / &scale,
                        Rat::from(BigInt::from(row as i64 + 1)) / &scale,
                    ),
                )?);
            }
        }
        ColoredSquare::new(p, regions)
    }

    /// Smallest `N` with every region corner on the p-ary `N`-grid.
    pub fn grid_exponent(&self) -> u32 {
        let mut n = 0u32;
        for r in self.regions.iter().flatten() {
            for v in [&r.x.0, &r.x.1, &r.y.0, &r.y.1] {
                n = n.max(rat_grid_exponent(v, self.p).expect("validated alignment"));
            }
        }
        n
    }

    /// Color of the cell containing an interior point.
    pub fn color_at(&self, x: &Rat, y: &Rat) -> Option<usize> {
        for (l, region) in self.regions.iter().enumerate() {
            for r in region {
                if &r.x.0 <= x && x < &r.x.1 && &r.y.0 <= y && y < &r.y.1 {
                    return Some(l);
                }
            }
        }
        None
    }

    /// Reads the full coloring off the minimal grid:
    /// `table[row][col] = color`. Rows index the y axis from the origin.
    pub fn color_table(&self) -> Result<(u32, Vec<Vec<usize>>)> {
        let n = self.grid_exponent();
        let side = (self.p as u64).pow(n) as usize;
        let scale = Rat::from(BigInt::from(side as i64));
        let mut table = vec![vec![usize::MAX; side]; side];
        for (l, region) in self.regions.iter().enumerate() {
            for r in region {
                let cols = (
                    (&r.x.0 * &scale).to_integer().to_usize().expect("grid"),
                    (&r.x.1 * &scale).to_integer().to_usize().expect("grid"),
                );
                let rows = (
                    (&r.y.0 * &scale).to_integer().to_usize().expect("grid"),
                    (&r.y.1 * &scale).to_integer().to_usize().expect("grid"),
                );
                for row in rows.0..rows.1 {
                    for col in cols.0..cols.1 {
                        if table[row][col] != usize::MAX {
                            return Err(Error::Geometry("overlapping cells".into()));
                        }
                        table[row][col] = l;
                    }
                }
            }
        }
        if table.iter().flatten().any(|&c| c == usize::MAX) {
            return Err(Error::Geometry("uncovered cell".into()));
        }
        Ok((n, table))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn square(x0: (i64, i64), x1: (i64, i64), y0: (i64, i64), y1: (i64, i64)) -> RationalRect {
        RationalRect::from_ints(x0, x1, y0, y1)
    }

    fn tuple(rects: Vec<RationalRect>) -> LittleSquareTuple {
        LittleSquareTuple::new(rects).unwrap()
    }

    #[test]
    fn rect_validation() {
        assert!(RationalRect::new((rat(1, 2), rat(1, 4)), (rat(0, 1), rat(1, 1))).is_err());
        assert!(RationalRect::new((rat(0, 1), rat(3, 2)), (rat(0, 1), rat(1, 1))).is_err());
        assert!(RationalRect::new((rat(-1, 2), rat(1, 2)), (rat(0, 1), rat(1, 1))).is_err());
        // degenerate rectangles rejected in tuples
        let line = RationalRect::new((rat(1, 2), rat(1, 2)), (rat(0, 1), rat(1, 1))).unwrap();
        assert!(line.is_degenerate());
        assert!(LittleSquareTuple::new(vec![line]).is_err());
        // overlap rejected
        let a = square((0, 1), (1, 2), (0, 1), (1, 2));
        let b = square((1, 4), (3, 4), (1, 4), (3, 4));
        assert!(LittleSquareTuple::new(vec![a, b]).is_err());
    }

    #[test]
    fn compose_with_identity_is_identity() {
        let c = tuple(vec![
            square((0, 1), (1, 2), (0, 1), (1, 2)),
            square((1, 2), (1, 1), (1, 2), (1, 1)),
        ]);
        assert_eq!(c.compose(1, &LittleSquareTuple::identity()).unwrap(), c);
        assert_eq!(c.compose(2, &LittleSquareTuple::identity()).unwrap(), c);
        assert_eq!(LittleSquareTuple::identity().compose(1, &c).unwrap(), c);
        assert!(c.compose(0, &c).is_err());
        assert!(c.compose(3, &c).is_err());
    }

    #[test]
    fn nested_quarter() {
        let half = tuple(vec![square((0, 1), (1, 2), (0, 1), (1, 2))]);
        let composed = half.compose(1, &half).unwrap();
        assert_eq!(composed.rects()[0], square((0, 1), (1, 4), (0, 1), (1, 4)));
    }

    #[test]
    fn insertion_identities_hold_exactly() {
        let mut rng = StdRng::seed_from_u64(60);
        for _ in 0..15 {
            let x = fixtures::random_tuple(&mut rng, 3, 2, 2);
            let y = fixtures::random_tuple(&mut rng, 2, 2, 2);
            let z = fixtures::random_tuple(&mut rng, 2, 2, 2);
            let (a, b, c) = (x.len(), y.len(), z.len());
            for j in 1..=a {
                let xy = x.compose(j, &y).unwrap();
                for i in 1..=(a + b - 1) {
                    let lhs = xy.compose(i, &z).unwrap();
                    let rhs = if i < j {
                        x.compose(i, &z).unwrap().compose(j + c - 1, &y).unwrap()
                    } else if i < b + j {
                        x.compose(j, &y.compose(i - j + 1, &z).unwrap()).unwrap()
                    } else {
                        x.compose(i - b + 1, &z).unwrap().compose(j, &y).unwrap()
                    };
                    assert_eq!(lhs, rhs, "i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn grid_exponent_cases() {
        let c = tuple(vec![square((0, 1), (1, 2), (0, 1), (1, 2))]);
        assert_eq!(c.grid_exponent(2), Some(1));
        let c = tuple(vec![square((3, 8), (1, 2), (0, 1), (1, 2))]);
        assert_eq!(c.grid_exponent(2), Some(3));
        let c = tuple(vec![square((0, 1), (1, 3), (0, 1), (1, 2))]);
        assert_eq!(c.grid_exponent(2), None);
        assert_eq!(c.grid_exponent(3), None); // 1/2 is not 3-adic
        assert_eq!(LittleSquareTuple::empty().grid_exponent(2), Some(0));
    }

    #[test]
    fn strictness_examples() {
        // full cover: not strict
        assert!(!LittleSquareTuple::identity().is_strict(2).unwrap());
        // empty tuple: vacuously strict
        assert!(LittleSquareTuple::empty().is_strict(2).unwrap());
        // lower-left quadrant: rows and columns keep uncovered cells
        let c = tuple(vec![square((0, 1), (1, 2), (0, 1), (1, 2))]);
        assert!(c.is_strict(2).unwrap());
        // a full vertical strip kills two columns... rows: strict fails
        let strip = tuple(vec![square((0, 1), (1, 2), (0, 1), (1, 1))]);
        assert!(!strip.is_strict(2).unwrap());
        // non-binary input is an error
        let bad = tuple(vec![square((0, 1), (1, 3), (0, 1), (1, 2))]);
        assert!(bad.is_strict(2).is_err());
    }

    #[test]
    fn binary_closure_is_exact() {
        let mut rng = StdRng::seed_from_u64(61);
        for _ in 0..30 {
            let c = fixtures::random_tuple(&mut rng, 3, 2, 3);
            let d = fixtures::random_tuple(&mut rng, 2, 2, 3);
            for i in 1..=c.len() {
                let composed = c.compose(i, &d).unwrap();
                assert!(composed.grid_exponent(2).is_some(), "dyadic closure");
            }
        }
    }

    #[test]
    fn strictness_closure_on_random_pairs() {
        let mut rng = StdRng::seed_from_u64(62);
        let mut checked = 0;
        while checked < 40 {
            let c = fixtures::random_strict_tuple(&mut rng, 2, 4);
            let d = fixtures::random_strict_tuple(&mut rng, 2, 4);
            if c.is_empty() {
                continue;
            }
            let i = 1 + (checked % c.len());
            let composed = c.compose(i, &d).unwrap();
            assert!(composed.is_strict(2).unwrap(), "strictness closure failed");
            checked += 1;
        }
    }

    #[test]
    fn permutation_equivariance_structural() {
        let mut rng = StdRng::seed_from_u64(63);
        for _ in 0..10 {
            let c = fixtures::random_tuple(&mut rng, 3, 2, 2);
            let d = fixtures::random_tuple(&mut rng, 2, 2, 2);
            let n = c.len();
            let m = d.len();
            let sigma = fixtures::random_permutation(&mut rng, n);
            for i in 1..=n {
                let lhs = c.permute(&sigma).compose(i, &d).unwrap();
                let target = sigma.apply(i - 1); // 0-based slot of c
                let rhs_core = c.compose(target + 1, &d).unwrap();
                // pull-back permutation on n+m-1 labels matching the splice
                let images: Vec<usize> = (0..n + m - 1)
                    .map(|j| {
                        if j < i - 1 {
                            let s = sigma.apply(j);
                            if s < target {
                                s
                            } else {
                                s + m - 1
                            }
                        } else if j < i - 1 + m {
                            target + (j - (i - 1))
                        } else {
                            let s = sigma.apply(j - m + 1);
                            if s < target {
                                s
                            } else {
                                s + m - 1
                            }
                        }
                    })
                    .collect();
                let blow = Permutation::from_images(invert_images(&images)).unwrap();
                // permute pulls rects[sigma(j)]; we built images as the
                // positions in rhs_core of each lhs slot
                let rhs = rhs_core.permute(&blow.inverse());
                assert_eq!(lhs, rhs, "slot {i}");
            }
        }
    }

    fn invert_images(images: &[usize]) -> Vec<usize> {
        let mut inv = vec![0usize; images.len()];
        for (j, &i) in images.iter().enumerate() {
            inv[i] = j;
        }
        inv
    }

    #[test]
    fn colored_square_validation() {
        // strip coloring: R1 = left third, R0 = the rest
        let r1 = square((0, 1), (1, 3), (0, 1), (1, 1));
        let r0 = square((1, 3), (1, 1), (0, 1), (1, 1));
        let q = ColoredSquare::new(3, vec![vec![r0.clone()], vec![r1.clone()], vec![]]).unwrap();
        assert_eq!(q.arity(), 1);
        // missing area fails
        assert!(ColoredSquare::new(3, vec![vec![r0.clone()], vec![], vec![]]).is_err());
        // overlap fails
        assert!(
            ColoredSquare::new(3, vec![vec![r0.clone(), r1.clone()], vec![r1], vec![]]).is_err()
        );
        // off-grid corner fails for p = 3
        let off = square((0, 1), (1, 2), (0, 1), (1, 1));
        let rest = square((1, 2), (1, 1), (0, 1), (1, 1));
        assert!(ColoredSquare::new(3, vec![vec![off], vec![rest], vec![]]).is_err());
    }

    #[test]
    fn colored_compose_strip_example() {
        // Q: R1 = [0,1/3]x[0,1], R0 = [1/3,1]x[0,1] as a single slot
        let q = ColoredSquare::new(
            3,
            vec![
                vec![square((1, 3), (1, 1), (0, 1), (1, 1))],
                vec![square((0, 1), (1, 3), (0, 1), (1, 1))],
                vec![],
            ],
        )
        .unwrap();
        // Q': R2 = [0,1]x[0,1/3], R0 = [0,1]x[1/3,1]
        let qp = ColoredSquare::new(
            3,
            vec![
                vec![square((0, 1), (1, 1), (1, 3), (1, 1))],
                vec![],
                vec![square((0, 1), (1, 1), (0, 1), (1, 3))],
            ],
        )
        .unwrap();
        let composed = q.compose(1, &qp).unwrap();
        // the new R2 is the scaled horizontal strip inside the slot
        assert_eq!(
            composed.regions()[2],
            vec![square((1, 3), (1, 1), (0, 1), (1, 3))]
        );
        // R1 untouched
        assert_eq!(
            composed.regions()[1],
            vec![square((0, 1), (1, 3), (0, 1), (1, 1))]
        );
        // slot replaced by the scaled R'_0
        assert_eq!(
            composed.regions()[0],
            vec![square((1, 3), (1, 1), (1, 3), (1, 1))]
        );
        // prime mismatch is rejected
        let binary = ColoredSquare::from_binary_tuple(&LittleSquareTuple::identity()).unwrap();
        assert!(q.compose(1, &binary).is_err());
    }

    #[test]
    fn colored_compose_matches_pointwise_oracle() {
        let mut rng = StdRng::seed_from_u64(64);
        for _ in 0..10 {
            let q = fixtures::random_colored_square(&mut rng, 3, 1);
            let qp = fixtures::random_colored_square(&mut rng, 3, 1);
            if q.arity() == 0 {
                continue;
            }
            let i = 1 + (rng.gen_range(0..q.arity()));
            let slot = q.regions()[0][i - 1].clone();
            let composed = q.compose(i, &qp).unwrap();
            let (n, table) = composed.color_table().unwrap();
            let side = (3u64.pow(n)) as i64;
            for row in 0..side {
                for col in 0..side {
                    let x = rat(2 * col + 1, 2 * side);
                    let y = rat(2 * row + 1, 2 * side);
                    let got = table[row as usize][col as usize];
                    // oracle: inside the slot, pull back to Q'; else ask Q
                    let expect =
                        if slot.x().0 < x && x < slot.x().1 && slot.y().0 < y && y < slot.y().1 {
                            let u = (&x - &slot.x().0) / slot.width();
                            let v = (&y - &slot.y().0) / slot.height();
                            qp.color_at(&u, &v).unwrap()
                        } else {
                            q.color_at(&x, &y).unwrap()
                        };
                    assert_eq!(got, expect, "cell ({row},{col})");
                }
            }
        }
    }

    #[test]
    fn strictness_closure_for_colored_squares() {
        let mut rng = StdRng::seed_from_u64(65);
        let mut checked = 0;
        while checked < 15 {
            let q = fixtures::random_strict_colored_square(&mut rng, 3, 1);
            let qp = fixtures::random_strict_colored_square(&mut rng, 3, 1);
            if q.arity() == 0 {
                continue;
            }
            let i = 1 + (checked % q.arity());
            let composed = q.compose(i, &qp).unwrap();
            assert!(composed.is_strict().unwrap());
            checked += 1;
        }
    }

    #[test]
    fn from_binary_tuple_roundtrip() {
        let c = tuple(vec![square((0, 1), (1, 2), (0, 1), (1, 2))]);
        let colored = ColoredSquare::from_binary_tuple(&c).unwrap();
        assert_eq!(colored.p(), 2);
        assert_eq!(colored.arity(), 1);
        assert!(colored.is_strict().unwrap());
        let (n, table) = colored.color_table().unwrap();
        assert_eq!(n, 1);
        // lower-left quadrant white (0), everything else black (1)
        assert_eq!(table, vec![vec![0, 1], vec![1, 1]]);
    }
}
