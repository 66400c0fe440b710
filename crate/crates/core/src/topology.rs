//! F2 cochains on the augmented cochain complex, cohomology, weighted norms
//! and exact expansion constants by exhaustive coset search.
//!
//! Every search walks the cosets of a subspace `S ⊆ C^i`: the coboundary is
//! constant on cosets of `B^i` and of `Z^i`, so each coset is visited once
//! and only its lightest member is sought by a Gray-code pass over `S`.

use serde::Serialize;

use crate::complex::{Face, WeightedComplex};
use crate::error::{Error, Result};
use crate::gf2::{F2Matrix, F2Vec, Subspace};
use crate::par;
use crate::rational::{frac_lt, ExtRational, Rational, Scaled};

/// Default bound on the number of elements any exhaustive search visits.
pub const DEFAULT_ENUM_CAP: u64 = 1 << 24;
/// Largest level for which cohomology is computed.
pub const MAX_LEVEL_SIZE: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct F2Cochain {
    pub level: isize,
    pub bits: F2Vec,
}

impl F2Cochain {
    pub fn zero(x: &WeightedComplex, level: isize) -> Self {
        F2Cochain {
            level,
            bits: F2Vec::zeros(x.num_faces(level)),
        }
    }

    pub fn from_bits(x: &WeightedComplex, level: isize, bits: F2Vec) -> Result<Self> {
        check_level(x, level)?;
        if bits.len() != x.num_faces(level) {
            return Err(Error::DimensionMismatch(format!(
                "{} bits for {} faces at level {level}",
                bits.len(),
                x.num_faces(level)
            )));
        }
        Ok(F2Cochain { level, bits })
    }

    /// Indicator of a set of same-dimensional faces.
    pub fn indicator(x: &WeightedComplex, faces: &[Face]) -> Result<Self> {
        let level = faces
            .first()
            .map(Face::dim)
            .ok_or_else(|| Error::DimensionMismatch("empty face list has no level".into()))?;
        let mut bits = F2Vec::zeros(x.num_faces(level));
        for f in faces {
            if f.dim() != level {
                return Err(Error::DimensionMismatch(format!("{f} is not a {level}-face")));
            }
            let j = x.index_of(f).ok_or_else(|| Error::FaceNotInComplex(f.to_string()))?;
            bits.flip(j);
        }
        Ok(F2Cochain { level, bits })
    }

    pub fn support<'a>(&'a self, x: &'a WeightedComplex) -> impl Iterator<Item = &'a Face> + 'a {
        self.bits.ones().map(move |j| &x.faces(self.level)[j])
    }

    pub fn is_zero(&self) -> bool {
        self.bits.is_zero()
    }
}

fn check_level(x: &WeightedComplex, i: isize) -> Result<()> {
    if i < -1 || i > x.dim() {
        return Err(Error::out_of_range("cochain level", i as i64, -1, x.dim() as i64));
    }
    Ok(())
}

fn check_coboundary_level(x: &WeightedComplex, i: isize) -> Result<()> {
    if i < -1 || i > x.dim() - 1 {
        return Err(Error::out_of_range("coboundary level", i as i64, -1, x.dim() as i64 - 1));
    }
    Ok(())
}

/// `(δf)(σ) = Σ_{τ ⊂ σ, |τ| = |σ|-1} f(τ)` for `σ ∈ X(i+1)`.
pub fn coboundary(x: &WeightedComplex, f: &F2Cochain) -> Result<F2Cochain> {
    let i = f.level;
    check_coboundary_level(x, i)?;
    let n = x.num_faces(i + 1);
    let mut bits = F2Vec::zeros(n);
    for j in 0..n {
        let parity = x
            .complex()
            .facets_of(i + 1, j)
            .iter()
            .filter(|&&t| f.bits.get(t))
            .count()
            % 2;
        bits.set(j, parity == 1);
    }
    Ok(F2Cochain { level: i + 1, bits })
}

/// Matrix of `δ_i`: rows `X(i+1)`, columns `X(i)`.
pub fn coboundary_matrix(x: &WeightedComplex, i: isize) -> Result<F2Matrix> {
    check_coboundary_level(x, i)?;
    let cols = x.num_faces(i);
    let rows = (0..x.num_faces(i + 1))
        .map(|j| F2Vec::from_support(cols, x.complex().facets_of(i + 1, j)))
        .collect();
    Ok(F2Matrix::from_rows(cols, rows))
}

/// Coboundaries, cocycles and cohomology at one level.
#[derive(Clone, Debug)]
pub struct LevelSpaces {
    pub level: isize,
    pub size: usize,
    pub coboundaries: Subspace,
    pub cocycles: Subspace,
}

impl LevelSpaces {
    pub fn dim_b(&self) -> usize {
        self.coboundaries.dim()
    }

    pub fn dim_z(&self) -> usize {
        self.cocycles.dim()
    }

    pub fn dim_h(&self) -> usize {
        self.dim_z() - self.dim_b()
    }

    /// `H^i = 0`
    pub fn f2_connected(&self) -> bool {
        self.dim_h() == 0
    }
}

fn check_level_size(x: &WeightedComplex, i: isize) -> Result<()> {
    let n = x.num_faces(i);
    if n > MAX_LEVEL_SIZE {
        return Err(Error::TooLarge(format!(
            "X({i}) has {n} faces, above the cap {MAX_LEVEL_SIZE}"
        )));
    }
    Ok(())
}

/// `B^i`, `Z^i` at level `i ∈ -1..=d`.
pub fn level_spaces(x: &WeightedComplex, i: isize) -> Result<LevelSpaces> {
    check_level(x, i)?;
    for l in (i - 1).max(-1)..=(i + 1).min(x.dim()) {
        check_level_size(x, l)?;
    }
    let size = x.num_faces(i);
    let coboundaries = if i == -1 {
        Subspace::zero(size)
    } else {
        coboundary_matrix(x, i - 1)?.image()
    };
    let cocycles = if i == x.dim() {
        Subspace::full(size)
    } else {
        Subspace::span(size, coboundary_matrix(x, i)?.kernel())
    };
    Ok(LevelSpaces {
        level: i,
        size,
        coboundaries,
        cocycles,
    })
}

#[derive(Clone, Debug)]
pub struct CochainSpaces {
    pub levels: Vec<LevelSpaces>,
}

impl CochainSpaces {
    pub fn level(&self, i: isize) -> &LevelSpaces {
        &self.levels[(i + 1) as usize]
    }

    pub fn dims_h(&self) -> Vec<usize> {
        self.levels.iter().map(LevelSpaces::dim_h).collect()
    }

    /// `dim H^i` for `i = 0..=d`.
    pub fn betti(&self) -> Vec<usize> {
        self.levels[1..].iter().map(LevelSpaces::dim_h).collect()
    }
}

pub fn spaces(x: &WeightedComplex) -> Result<CochainSpaces> {
    let levels = par::map_range((x.dim() + 2) as usize, |l| level_spaces(x, l as isize - 1))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(CochainSpaces { levels })
}

/// `(Σ (-1)^i |X(i)|, Σ (-1)^i dim H^i)` over the augmented complex.
pub fn euler_characteristics(x: &WeightedComplex, s: &CochainSpaces) -> (i64, i64) {
    let sign = |i: isize| if i.rem_euclid(2) == 0 { 1 } else { -1 };
    let chain = (-1..=x.dim()).map(|i| sign(i) * x.num_faces(i) as i64).sum();
    let homology = s.levels.iter().map(|l| sign(l.level) * l.dim_h() as i64).sum();
    (chain, homology)
}

pub fn norm(x: &WeightedComplex, f: &F2Cochain) -> Rational {
    let w = x.weights(f.level);
    f.bits.ones().map(|j| &w[j]).sum()
}

/// Byte-sliced lookup tables for summing scaled weights over a bit set.
#[derive(Clone, Debug)]
pub(crate) struct MaskWeights {
    tables: Vec<[u64; 256]>,
    pub scaled: Scaled,
}

impl MaskWeights {
    pub fn new(weights: &[Rational]) -> Result<Self> {
        let scaled = Scaled::new(weights)?;
        let tables = scaled
            .numers
            .chunks(8)
            .map(|chunk| {
                let mut t = [0u64; 256];
                for (b, slot) in t.iter_mut().enumerate() {
                    *slot = chunk
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| b >> i & 1 == 1)
                        .map(|(_, w)| *w)
                        .sum();
                }
                t
            })
            .collect();
        Ok(MaskWeights { tables, scaled })
    }

    #[inline]
    pub fn mask(&self, mut m: u64) -> u64 {
        let mut s = 0;
        let mut t = 0;
        while m != 0 {
            s += self.tables[t][(m & 0xff) as usize];
            m >>= 8;
            t += 1;
        }
        s
    }

    pub fn words(&self, words: &[u64]) -> u64 {
        let mut s = 0;
        for (wi, &w) in words.iter().enumerate() {
            for b in 0..8 {
                let byte = (w >> (8 * b) & 0xff) as usize;
                if byte != 0 {
                    s += self.tables[wi * 8 + b][byte];
                }
            }
        }
        s
    }

    pub fn to_rational(&self, numer: u64) -> Rational {
        self.scaled.to_rational(numer)
    }
}

pub(crate) fn enumeration_cap(what: &str, bits: usize, cap: u64) -> Result<()> {
    if bits >= 64 || (1u64 << bits) > cap {
        return Err(Error::TooLarge(format!(
            "{what} needs 2^{bits} elements, above the enumeration cap {cap}"
        )));
    }
    Ok(())
}

pub(crate) fn masks_of(basis: &[F2Vec]) -> Result<Vec<u64>> {
    basis
        .iter()
        .map(|b| {
            b.to_mask()
                .ok_or_else(|| Error::TooLarge("level has more than 64 faces".into()))
        })
        .collect()
}

/// Exact `min_{g ∈ S} ‖f + g‖` by enumerating `S`.
pub fn distance_to_subspace(x: &WeightedComplex, f: &F2Cochain, space: &Subspace, cap: u64) -> Result<Rational> {
    if space.ambient() != f.bits.len() {
        return Err(Error::DimensionMismatch("space and cochain lengths differ".into()));
    }
    enumeration_cap("subspace enumeration", space.dim(), cap)?;
    let w = MaskWeights::new(x.weights(f.level))?;
    let start = space.reduce(&f.bits);
    let basis = space.basis().to_vec();
    let k = basis.len();
    // Split the Gray walk over the top bits so chunks can run in parallel.
    let split = k.min(6);
    let low = k - split;
    let best = par::fold_chunks(
        0..(1u64 << split),
        1,
        |range| {
            let hi = range.start;
            let mut cur = start.clone();
            for (b, v) in basis[low..].iter().enumerate() {
                if hi >> b & 1 == 1 {
                    cur.xor_assign(v);
                }
            }
            let mut best = w.words(cur.words());
            for g in 1u64..(1u64 << low) {
                cur.xor_assign(&basis[g.trailing_zeros() as usize]);
                best = best.min(w.words(cur.words()));
            }
            best
        },
        u64::min,
    )
    .expect("at least one chunk");
    Ok(w.to_rational(best))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Coboundaries,
    Cocycles,
}

pub fn distance_to_space(x: &WeightedComplex, f: &F2Cochain, space: Space, cap: u64) -> Result<Rational> {
    let s = level_spaces(x, f.level)?;
    let sub = match space {
        Space::Coboundaries => &s.coboundaries,
        Space::Cocycles => &s.cocycles,
    };
    distance_to_subspace(x, f, sub, cap)
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Candidate {
    pub num: u64,
    pub den: u64,
    pub witness: u64,
}

fn pick(a: Option<Candidate>, b: Option<Candidate>) -> Option<Candidate> {
    match (a, b) {
        (Some(a), Some(b)) => Some(if frac_lt(b.num, b.den, a.num, a.den) { b } else { a }),
        (a, None) => a,
        (None, b) => b,
    }
}

/// Visits every coset `rep + span(inner)` with `rep` ranging over
/// `span(reps) ∖ {0}` (or including zero), finds its lightest member and
/// lets `score(rep, lightest, argmin)` propose a ratio. Returns the
/// smallest ratio, first in enumeration order on ties.
pub(crate) fn scan_cosets<F>(reps: &[u64], inner: &[u64], w: &MaskWeights, include_zero: bool, score: F) -> Option<Candidate>
where
    F: Fn(u64, u64, u64) -> Option<(u64, u64)> + Sync + Send,
{
    let k = inner.len();
    let chunk = (1u64 << 16 >> k.min(16)).max(1);
    let first = if include_zero { 0 } else { 1 };
    par::fold_chunks(
        first..(1u64 << reps.len()),
        chunk,
        |range| {
            let mut best = None;
            for c in range {
                let rep = reps
                    .iter()
                    .enumerate()
                    .filter(|(b, _)| c >> b & 1 == 1)
                    .fold(0u64, |acc, (_, m)| acc ^ m);
                let mut cur = rep;
                let mut lightest = w.mask(cur);
                let mut arg = cur;
                for g in 1u64..(1u64 << k) {
                    cur ^= inner[g.trailing_zeros() as usize];
                    let v = w.mask(cur);
                    if v < lightest {
                        lightest = v;
                        arg = cur;
                    }
                }
                if let Some((num, den)) = score(rep, lightest, arg) {
                    best = pick(best, Some(Candidate { num, den, witness: arg }));
                }
            }
            best
        },
        pick,
    )
    .flatten()
}

/// Coboundary images of the unit cochains at level `i`, plus weights on
/// `X(i+1)`, for evaluating `‖δ(mask)‖`.
struct DeltaTable {
    images: Vec<F2Vec>,
    weights: MaskWeights,
}

impl DeltaTable {
    fn new(x: &WeightedComplex, i: isize) -> Result<Self> {
        let t = coboundary_matrix(x, i)?.transpose();
        Ok(DeltaTable {
            images: t.rows().to_vec(),
            weights: MaskWeights::new(x.weights(i + 1))?,
        })
    }

    fn norm(&self, mask: u64) -> u64 {
        let words = self.images.first().map_or(0, |v| v.words().len());
        let mut acc = vec![0u64; words];
        let mut m = mask;
        while m != 0 {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            for (a, v) in acc.iter_mut().zip(self.images[b].words()) {
                *a ^= v;
            }
        }
        self.weights.words(&acc)
    }
}

fn unit_masks(cols: &[usize]) -> Vec<u64> {
    cols.iter().map(|&c| 1u64 << c).collect()
}

/// A minimiser together with the minimum.
#[derive(Clone, Debug, PartialEq)]
pub struct Minimum {
    pub value: ExtRational,
    pub witness: Option<F2Cochain>,
}

fn ratio_minimum(
    x: &WeightedComplex,
    i: isize,
    c: Option<Candidate>,
    num_w: &MaskWeights,
    den_w: &MaskWeights,
) -> Minimum {
    match c {
        None => Minimum {
            value: ExtRational::Infinite,
            witness: None,
        },
        Some(c) => Minimum {
            value: ExtRational::Finite(num_w.to_rational(c.num) / den_w.to_rational(c.den)),
            witness: Some(F2Cochain {
                level: i,
                bits: F2Vec::from_mask(x.num_faces(i), c.witness),
            }),
        },
    }
}

fn search_setup(x: &WeightedComplex, i: isize, cap: u64) -> Result<(LevelSpaces, MaskWeights)> {
    check_coboundary_level(x, i)?;
    enumeration_cap(&format!("C^{i}"), x.num_faces(i), cap)?;
    Ok((level_spaces(x, i)?, MaskWeights::new(x.weights(i))?))
}

/// `h^i = min_{F ∉ B^i} ‖δF‖ / dist(F, B^i)`, with a minimiser.
pub fn coboundary_expansion_witness(x: &WeightedComplex, i: isize, cap: u64) -> Result<Minimum> {
    let (s, w) = search_setup(x, i, cap)?;
    let delta = DeltaTable::new(x, i)?;
    let reps = unit_masks(&s.coboundaries.free_columns());
    let inner = masks_of(s.coboundaries.basis())?;
    let best = scan_cosets(&reps, &inner, &w, false, |rep, lightest, _| {
        Some((delta.norm(rep), lightest))
    });
    Ok(ratio_minimum(x, i, best, &delta.weights, &w))
}

pub fn coboundary_expansion(x: &WeightedComplex, i: isize, cap: u64) -> Result<ExtRational> {
    Ok(coboundary_expansion_witness(x, i, cap)?.value)
}

/// `h̃^i = min_{F ∉ Z^i} ‖δF‖ / dist(F, Z^i)`.
pub fn cocycle_expansion(x: &WeightedComplex, i: isize, cap: u64) -> Result<Minimum> {
    let (s, w) = search_setup(x, i, cap)?;
    let delta = DeltaTable::new(x, i)?;
    let reps = unit_masks(&s.cocycles.free_columns());
    let inner = masks_of(s.cocycles.basis())?;
    let best = scan_cosets(&reps, &inner, &w, false, |rep, lightest, _| {
        Some((delta.norm(rep), lightest))
    });
    Ok(ratio_minimum(x, i, best, &delta.weights, &w))
}

/// `min_{F ∈ Z^i ∖ B^i} ‖F‖`, defined for `i ∈ 0..=d`.
pub fn cosystole(x: &WeightedComplex, i: isize, cap: u64) -> Result<Minimum> {
    check_level(x, i)?;
    let s = level_spaces(x, i)?;
    enumeration_cap(&format!("Z^{i}"), s.dim_z(), cap)?;
    if x.num_faces(i) > 64 {
        return Err(Error::TooLarge(format!("X({i}) has more than 64 faces")));
    }
    let w = MaskWeights::new(x.weights(i))?;
    let reps = masks_of(&s.cocycles.quotient_basis(&s.coboundaries))?;
    let inner = masks_of(s.coboundaries.basis())?;
    let best = scan_cosets(&reps, &inner, &w, false, |_, lightest, _| Some((lightest, 1)));
    let one = MaskWeights::new(&[Rational::from_integer(1.into())])?;
    Ok(ratio_minimum(x, i, best, &w, &one))
}

/// `(h̃^i, cosyst^i)`
pub fn cosystolic_expansion(x: &WeightedComplex, i: isize, cap: u64) -> Result<(ExtRational, ExtRational)> {
    Ok((cocycle_expansion(x, i, cap)?.value, cosystole(x, i, cap)?.value))
}

/// `‖f‖ = dist(f, B^k)`
pub fn is_minimal(x: &WeightedComplex, f: &F2Cochain, cap: u64) -> Result<bool> {
    let s = level_spaces(x, f.level)?;
    Ok(norm(x, f) == distance_to_subspace(x, f, &s.coboundaries, cap)?)
}

/// Every restriction `f^σ`, `σ ∈ X(i)` with `0 ≤ i < k`, is minimal in
/// `X_σ`.
pub fn is_locally_minimal(x: &WeightedComplex, f: &F2Cochain, cap: u64) -> Result<bool> {
    let k = f.level;
    check_level(x, k)?;
    let values = f.bits.to_bits();
    for i in 0..k {
        for sigma in x.faces(i) {
            let link = x.link(sigma)?;
            let restricted = x.restrict_cochain(k, &values, &link)?;
            let g = F2Cochain {
                level: k - i - 1,
                bits: F2Vec::from_bits(&restricted),
            };
            if !is_minimal(&link.complex, &g, cap)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The least-expanding small minimal cochain found at one level.
#[derive(Clone, Debug)]
pub struct SmallSetViolation {
    pub level: isize,
    pub cochain: F2Cochain,
    pub norm: Rational,
    pub coboundary_norm: Rational,
}

#[derive(Clone, Debug)]
pub struct SmallSetReport {
    pub eps: Rational,
    pub mu: Rational,
    pub levels_checked: Vec<isize>,
    /// Smallest `‖δf‖/‖f‖` over nonzero minimal `f` with `‖f‖ < μ`.
    pub worst_ratio: ExtRational,
    pub violation: Option<SmallSetViolation>,
}

impl SmallSetReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks `‖δf‖ > ε‖f‖` for every nonzero minimal `f ∈ C^k`, `0 ≤ k < d`,
/// with `‖f‖ < μ`. A non-minimal cochain has a lighter coboundary-equivalent
/// that carries the same `δf`, so the minimal members are the ones tested.
pub fn small_set_expansion_check(x: &WeightedComplex, eps: &Rational, mu: &Rational, cap: u64) -> Result<SmallSetReport> {
    let mut worst: Option<(Rational, SmallSetViolation)> = None;
    let mut levels_checked = Vec::new();
    for k in 0..x.dim() {
        let (s, w) = search_setup(x, k, cap)?;
        levels_checked.push(k);
        let delta = DeltaTable::new(x, k)?;
        let reps = unit_masks(&s.coboundaries.free_columns());
        let inner = masks_of(s.coboundaries.basis())?;
        let bound = mu * Rational::from_integer(w.scaled.denom.into());
        let best = scan_cosets(&reps, &inner, &w, false, |rep, lightest, _| {
            let light = Rational::from_integer(lightest.into());
            (light < bound).then(|| (delta.norm(rep), lightest))
        });
        if let Some(c) = best {
            let n = w.to_rational(c.den);
            let dn = delta.weights.to_rational(c.num);
            let ratio = &dn / &n;
            if worst.as_ref().is_none_or(|(r, _)| &ratio < r) {
                let v = SmallSetViolation {
                    level: k,
                    cochain: F2Cochain {
                        level: k,
                        bits: F2Vec::from_mask(x.num_faces(k), c.witness),
                    },
                    norm: n,
                    coboundary_norm: dn,
                };
                worst = Some((ratio, v));
            }
        }
    }
    let (worst_ratio, violation) = match worst {
        None => (ExtRational::Infinite, None),
        Some((r, v)) => {
            let fails = r <= *eps;
            (ExtRational::Finite(r), fails.then_some(v))
        }
    };
    Ok(SmallSetReport {
        eps: eps.clone(),
        mu: mu.clone(),
        levels_checked,
        worst_ratio,
        violation,
    })
}

/// Expansion constants at one level; absent entries are undefined there
/// (`h`, `h̃` need `i ≤ d-1`).
#[derive(Clone, Debug)]
pub struct LevelExpansion {
    pub level: isize,
    pub h: Option<ExtRational>,
    pub h_tilde: Option<ExtRational>,
    pub cosyst: ExtRational,
    pub dim_h: usize,
}

pub fn expansion_constants(x: &WeightedComplex, cap: u64) -> Result<Vec<LevelExpansion>> {
    (0..=x.dim())
        .map(|i| {
            let s = level_spaces(x, i)?;
            let (h, h_tilde) = if i < x.dim() {
                (
                    Some(coboundary_expansion(x, i, cap)?),
                    Some(cocycle_expansion(x, i, cap)?.value),
                )
            } else {
                (None, None)
            };
            Ok(LevelExpansion {
                level: i,
                h,
                h_tilde,
                cosyst: cosystole(x, i, cap)?.value,
                dim_h: s.dim_h(),
            })
        })
        .collect()
}
