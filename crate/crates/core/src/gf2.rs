//! Bit-packed linear algebra over F2.

use std::fmt;

/// A vector over F2 packed into 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct F2Vec {
    len: usize,
    words: Vec<u64>,
}

impl F2Vec {
    pub fn zeros(len: usize) -> Self {
        F2Vec {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = F2Vec::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = F2Vec::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    pub fn from_support(len: usize, support: &[usize]) -> Self {
        let mut v = F2Vec::zeros(len);
        for &i in support {
            v.flip(i);
        }
        v
    }

    /// Low `len` bits of `mask`.
    pub fn from_mask(len: usize, mask: u64) -> Self {
        assert!(len <= 64 || mask == 0);
        let mut v = F2Vec::zeros(len);
        if len > 0 {
            v.words[0] = mask;
            v.trim();
        }
        v
    }

    /// The vector as a bit mask; `None` when longer than 64.
    pub fn to_mask(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    fn trim(&mut self) {
        let r = self.len % 64;
        if r != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, b: bool) {
        assert!(i < self.len);
        let bit = 1u64 << (i % 64);
        if b {
            self.words[i / 64] |= bit;
        } else {
            self.words[i / 64] &= !bit;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &F2Vec) {
        assert_eq!(self.len, other.len, "length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &F2Vec) -> F2Vec {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn dot(&self, other: &F2Vec) -> bool {
        assert_eq!(self.len, other.len, "length mismatch");
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + t)
            })
        })
    }

    pub fn to_bits(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }
}

impl fmt::Debug for F2Vec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Dense F2 matrix stored by rows.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct F2Matrix {
    cols: usize,
    rows: Vec<F2Vec>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        F2Matrix {
            cols,
            rows: vec![F2Vec::zeros(cols); rows],
        }
    }

    pub fn from_rows(cols: usize, rows: Vec<F2Vec>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "row length mismatch");
        F2Matrix { cols, rows }
    }

    pub fn identity(n: usize) -> Self {
        F2Matrix::from_rows(n, (0..n).map(|i| F2Vec::unit(n, i)).collect())
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &F2Vec {
        &self.rows[r]
    }

    pub fn rows(&self) -> &[F2Vec] {
        &self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, b: bool) {
        self.rows[r].set(c, b)
    }

    pub fn transpose(&self) -> F2Matrix {
        let mut t = F2Matrix::zeros(self.cols, self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.ones() {
                t.rows[c].set(r, true);
            }
        }
        t
    }

    /// `A v`
    pub fn mul_vec(&self, v: &F2Vec) -> F2Vec {
        assert_eq!(v.len(), self.cols, "shape mismatch");
        F2Vec::from_bits(&self.rows.iter().map(|r| r.dot(v)).collect::<Vec<_>>())
    }

    /// `A B`
    pub fn mul(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!(self.cols, other.rows.len(), "shape mismatch");
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut acc = F2Vec::zeros(other.cols);
                for k in r.ones() {
                    acc.xor_assign(&other.rows[k]);
                }
                acc
            })
            .collect();
        F2Matrix::from_rows(other.cols, rows)
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(F2Vec::is_zero)
    }

    pub fn rank(&self) -> usize {
        Subspace::span(self.cols, self.rows.iter().cloned()).dim()
    }

    /// Basis of `{x : A x = 0}`.
    pub fn kernel(&self) -> Vec<F2Vec> {
        let rowspace = Subspace::span(self.cols, self.rows.iter().cloned());
        let pivots = rowspace.pivots();
        rowspace
            .free_columns()
            .into_iter()
            .map(|f| {
                let mut x = F2Vec::unit(self.cols, f);
                for (b, &p) in rowspace.basis().iter().zip(pivots) {
                    if b.get(f) {
                        x.set(p, true);
                    }
                }
                x
            })
            .collect()
    }

    /// Basis of the column space.
    pub fn image(&self) -> Subspace {
        Subspace::span(self.rows.len(), self.transpose().rows)
    }

    pub fn row_space(&self) -> Subspace {
        Subspace::span(self.cols, self.rows.iter().cloned())
    }
}

/// A subspace of `F2^n` held as a reduced row-echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<F2Vec>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: (0..ambient).map(|i| F2Vec::unit(ambient, i)).collect(),
            pivots: (0..ambient).collect(),
        }
    }

    pub fn span(ambient: usize, generators: impl IntoIterator<Item = F2Vec>) -> Self {
        let mut s = Subspace::zero(ambient);
        for g in generators {
            s.insert(g);
        }
        s
    }

    /// Adds `v` to the span; returns false when it was already inside.
    pub fn insert(&mut self, v: F2Vec) -> bool {
        assert_eq!(v.len(), self.ambient, "length mismatch");
        let r = self.reduce(&v);
        let Some(p) = r.first_one() else {
            return false;
        };
        for b in &mut self.basis {
            if b.get(p) {
                b.xor_assign(&r);
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.basis.insert(at, r);
        true
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[F2Vec] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Columns that carry no pivot; their unit vectors span a complement.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.ambient - self.dim());
        let mut it = self.pivots.iter().peekable();
        for c in 0..self.ambient {
            if it.peek() == Some(&&c) {
                it.next();
            } else {
                out.push(c);
            }
        }
        out
    }

    /// Canonical representative of `v + self`: zero on every pivot column.
    pub fn reduce(&self, v: &F2Vec) -> F2Vec {
        let mut r = v.clone();
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            if r.get(p) {
                r.xor_assign(b);
            }
        }
        r
    }

    pub fn contains(&self, v: &F2Vec) -> bool {
        self.reduce(v).is_zero()
    }

    pub fn contains_space(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }

    /// Basis of a complement of `inner` inside `self`, assuming
    /// `inner ⊆ self`.
    pub fn quotient_basis(&self, inner: &Subspace) -> Vec<F2Vec> {
        let mut acc = inner.clone();
        self.basis
            .iter()
            .filter(|b| acc.insert((*b).clone()))
            .cloned()
            .collect()
    }

    /// Every element, in Gray-code order starting from zero.
    pub fn elements(&self) -> Vec<F2Vec> {
        let mut out = Vec::with_capacity(1usize << self.dim());
        let mut cur = F2Vec::zeros(self.ambient);
        out.push(cur.clone());
        for g in 1u64..(1u64 << self.dim()) {
            cur.xor_assign(&self.basis[g.trailing_zeros() as usize]);
            out.push(cur.clone());
        }
        out
    }
}
