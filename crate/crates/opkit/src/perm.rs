//! Finite permutations and their block expansions.

use crate::cmatrix::CMatrix;
use crate::{Error, Result};
use num_complex::Complex64;

/// Permutation of `{0..n-1}` stored as the image list: `j -> images[j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(a, b);
        Permutation { images }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::Parameter("not a bijection".into()));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn apply(&self, j: usize) -> usize {
        self.images[j]
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (j, &i) in self.images.iter().enumerate() {
            inv[i] = j;
        }
        Permutation { images: inv }
    }

    /// Push-forward of a sequence: output at `sigma(j)` is input at `j`.
    pub fn push<T: Clone>(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.images.len());
        let mut out = v.to_vec();
        for (j, &i) in self.images.iter().enumerate() {
            out[i] = v[j].clone();
        }
        out
    }

    /// The block permutation on `sum(sizes)` indices that moves block `j`
    /// (of `sizes[j]` consecutive indices) to slot `sigma(j)`, keeping the
    /// inner order of each block.
    pub fn block_expand(&self, sizes: &[usize]) -> Permutation {
        assert_eq!(sizes.len(), self.images.len());
        let m = sizes.len();
        let total: usize = sizes.iter().sum();
        // offset of slot i in the output layout: the blocks occupying
        // earlier slots are sigma^{-1}(0..i)
        let inv = self.inverse();
        let mut out_offsets = vec![0usize; m];
        let mut acc = 0;
        for i in 0..m {
            out_offsets[i] = acc;
            acc += sizes[inv.apply(i)];
        }
        let mut in_offsets = vec![0usize; m];
        acc = 0;
        for j in 0..m {
            in_offsets[j] = acc;
            acc += sizes[j];
        }
        let mut images = vec![0usize; total];
        for j in 0..m {
            let slot = self.apply(j);
            for t in 0..sizes[j] {
                images[in_offsets[j] + t] = out_offsets[slot] + t;
            }
        }
        Permutation { images }
    }

    /// The permutation on the concatenated index set that applies
    /// `perms[j]` inside the j-th block, moving no block.
    pub fn blockwise(perms: &[Permutation]) -> Permutation {
        let total: usize = perms.iter().map(|p| p.len()).sum();
        let mut images = Vec::with_capacity(total);
        let mut off = 0;
        for p in perms {
            images.extend(p.images.iter().map(|&i| off + i));
            off += p.len();
        }
        Permutation { images }
    }

    /// 0/1 matrix sending basis vector `e_j` to `e_{sigma(j)}`.
    pub fn matrix(&self) -> CMatrix {
        let n = self.images.len();
        let mut m = CMatrix::zeros(n, n);
        for (j, &i) in self.images.iter().enumerate() {
            m.set(i, j, Complex64::new(1.0, 0.0));
        }
        m
    }
}
