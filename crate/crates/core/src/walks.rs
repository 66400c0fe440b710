//! Up and down averaging operators, the up-down and down-up walks built from
//! them, their spectra and mixing bounds, and a seeded step sampler.
//!
//! Every operator is stored as the matrix of its action on functions:
//! `(Op f)(row) = Σ_col M[row][col] f(col)`. Each row is a probability
//! vector, so the same matrix is also the transition kernel from row faces to
//! column faces. For `U_k` that kernel is the down step `X(k+1) → X(k)`, for
//! `D_k` it is the up step `X(k-1) → X(k)`.

use nalgebra::DMatrix;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complex::{Face, WeightedComplex};
use crate::error::{Error, Result};
use crate::rational::{int, to_f64, Rational, Scaled};
use crate::spectral::{self, symmetric_spectrum, Spectrum, MAX_DENSE};

/// Sparse matrix of exact rationals; rows keep `(column, value)` pairs
/// sorted by column with no explicit zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, Rational)>>,
}

impl RationalMatrix {
    pub fn from_rows(cols: usize, mut data: Vec<Vec<(usize, Rational)>>) -> Self {
        for row in &mut data {
            row.sort_by_key(|(c, _)| *c);
            row.retain(|(_, v)| !v.is_zero());
        }
        RationalMatrix {
            rows: data.len(),
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[(usize, Rational)] {
        &self.data[r]
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        match self.data[r].binary_search_by_key(&c, |(col, _)| *col) {
            Ok(p) => self.data[r][p].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn mul(&self, other: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, other.rows, "matrix shapes do not compose");
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut acc: std::collections::BTreeMap<usize, Rational> = Default::default();
                for (k, a) in row {
                    for (c, b) in &other.data[*k] {
                        *acc.entry(*c).or_insert_with(Rational::zero) += a * b;
                    }
                }
                acc.into_iter().collect()
            })
            .collect();
        RationalMatrix::from_rows(other.cols, data)
    }

    /// `M f`
    pub fn apply(&self, f: &[Rational]) -> Vec<Rational> {
        self.data
            .iter()
            .map(|row| row.iter().map(|(c, a)| a * &f[*c]).sum())
            .collect()
    }

    /// `pᵀ M`
    pub fn left_apply(&self, p: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.cols];
        for (r, row) in self.data.iter().enumerate() {
            if p[r].is_zero() {
                continue;
            }
            for (c, a) in row {
                out[*c] += &p[r] * a;
            }
        }
        out
    }

    pub fn is_row_stochastic(&self) -> bool {
        self.data.iter().all(|row| {
            row.iter().all(|(_, v)| v.is_positive()) && row.iter().map(|(_, v)| v).sum::<Rational>().is_one()
        })
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.rows, self.cols);
        for (r, row) in self.data.iter().enumerate() {
            for (c, v) in row {
                m[(r, *c)] = to_f64(v);
            }
        }
        m
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WalkKind {
    Up,
    Down,
    UpDown,
    DownUp,
}

impl std::str::FromStr for WalkKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "up" => Ok(WalkKind::Up),
            "down" => Ok(WalkKind::Down),
            "up-down" | "updown" => Ok(WalkKind::UpDown),
            "down-up" | "downup" => Ok(WalkKind::DownUp),
            _ => Err(Error::Parse(format!("unknown walk kind {s:?}"))),
        }
    }
}

/// A level-indexed averaging operator together with the level weights of
/// its row and column faces.
#[derive(Clone, Debug)]
pub struct WalkOperator {
    pub kind: WalkKind,
    pub level: isize,
    pub row_level: isize,
    pub col_level: isize,
    pub matrix: RationalMatrix,
    /// `w` on the row faces; for square walks this is the stationary law.
    pub stationary: Vec<Rational>,
}

impl WalkOperator {
    /// `w_rowᵀ M = w_col` exactly.
    pub fn pushes_forward(&self, x: &WeightedComplex) -> bool {
        self.matrix.left_apply(&self.stationary) == x.weights(self.col_level)
    }

    pub fn is_square(&self) -> bool {
        self.row_level == self.col_level
    }

    /// Spectrum of a square walk via `W^{1/2} M W^{-1/2}`.
    pub fn spectrum(&self) -> Result<Spectrum> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("spectrum of a rectangular operator".into()));
        }
        let n = self.matrix.rows();
        if n > MAX_DENSE {
            return Err(Error::TooLarge(format!("{n} states exceeds dense cap {MAX_DENSE}")));
        }
        let w: Vec<f64> = self.stationary.iter().map(to_f64).collect();
        let mut s = self.matrix.to_dense();
        for r in 0..n {
            for c in 0..n {
                s[(r, c)] *= (w[r] / w[c]).sqrt();
            }
        }
        let scale: Vec<f64> = w.iter().map(|x| 1.0 / x.sqrt()).collect();
        symmetric_spectrum(s, Some(&scale))
    }

    pub fn lambda2(&self) -> Result<f64> {
        Ok(self.spectrum()?.lambda2())
    }
}

/// `(U_k f)(τ)` = average of `f` over the facets of `τ ∈ X(k+1)`.
/// Defined for `-1 ≤ k ≤ d-1`.
pub fn up_operator(x: &WeightedComplex, k: isize) -> Result<WalkOperator> {
    let d = x.dim();
    if k < -1 || k > d - 1 {
        return Err(Error::out_of_range("up level", k as i64, -1, d as i64 - 1));
    }
    let share = Rational::new(1.into(), (k + 2).into());
    let data = (0..x.num_faces(k + 1))
        .map(|j| {
            x.complex()
                .facets_of(k + 1, j)
                .iter()
                .map(|&c| (c, share.clone()))
                .collect()
        })
        .collect();
    Ok(WalkOperator {
        kind: WalkKind::Up,
        level: k,
        row_level: k + 1,
        col_level: k,
        matrix: RationalMatrix::from_rows(x.num_faces(k), data),
        stationary: x.weights(k + 1).to_vec(),
    })
}

/// `(D_k f)(τ) = E_{σ ∈ X(k)}[f(σ) | τ ⊆ σ]` for `τ ∈ X(k-1)`.
/// Defined for `0 ≤ k ≤ d`.
pub fn down_operator(x: &WeightedComplex, k: isize) -> Result<WalkOperator> {
    let d = x.dim();
    if k < 0 || k > d {
        return Err(Error::out_of_range("down level", k as i64, 0, d as i64));
    }
    let w = x.weights(k);
    let data = (0..x.num_faces(k - 1))
        .map(|j| {
            let cof = x.complex().cofaces_of(k - 1, j);
            let total: Rational = cof.iter().map(|&c| &w[c]).sum();
            cof.iter().map(|&c| (c, &w[c] / &total)).collect()
        })
        .collect();
    Ok(WalkOperator {
        kind: WalkKind::Down,
        level: k,
        row_level: k - 1,
        col_level: k,
        matrix: RationalMatrix::from_rows(x.num_faces(k), data),
        stationary: x.weights(k - 1).to_vec(),
    })
}

/// `M_k^+ = D_{k+1} U_k` (`0 ≤ k ≤ d-1`) or `M_k^- = U_{k-1} D_k`
/// (`0 ≤ k ≤ d`).
pub fn walk_matrix(x: &WeightedComplex, k: isize, kind: WalkKind) -> Result<WalkOperator> {
    let d = x.dim();
    let matrix = match kind {
        WalkKind::UpDown => {
            if k < 0 || k > d - 1 {
                return Err(Error::out_of_range("up-down level", k as i64, 0, d as i64 - 1));
            }
            down_operator(x, k + 1)?.matrix.mul(&up_operator(x, k)?.matrix)
        }
        WalkKind::DownUp => {
            if k < 0 || k > d {
                return Err(Error::out_of_range("down-up level", k as i64, 0, d as i64));
            }
            up_operator(x, k - 1)?.matrix.mul(&down_operator(x, k)?.matrix)
        }
        WalkKind::Up => return up_operator(x, k),
        WalkKind::Down => return down_operator(x, k),
    };
    Ok(WalkOperator {
        kind,
        level: k,
        row_level: k,
        col_level: k,
        matrix,
        stationary: x.weights(k).to_vec(),
    })
}

/// `1 − 1/(k+1) + (k/2) γ`
pub fn ko_bound(k: usize, gamma: f64) -> f64 {
    1.0 - 1.0 / (k as f64 + 1.0) + (k as f64 / 2.0) * gamma
}

/// `1 − Π_{i=-1}^{k-2} (1 − γ_i) / (k+1)`; `gamma_profile` lists
/// `γ_{-1}, …, γ_{k-2}` in order.
pub fn al_bound(k: usize, gamma_profile: &[f64]) -> f64 {
    let prod: f64 = gamma_profile.iter().map(|g| 1.0 - g).product();
    1.0 - prod / (k as f64 + 1.0)
}

#[derive(Clone, Debug, Serialize)]
pub struct MixingReport {
    pub k: isize,
    /// `λ2(M_{k-1}^+)`
    pub lambda2_plus: Option<f64>,
    /// `λ2(M_k^-)`
    pub lambda2_minus: f64,
    /// `(i, γ_i)` for `i = -1, …, k-2`.
    pub gamma_profile: Vec<(isize, f64)>,
    pub gamma: Option<f64>,
    pub links_connected: bool,
    pub ko_bound: Option<f64>,
    pub al_bound: Option<f64>,
    pub ko_holds: Option<bool>,
    pub al_holds: Option<bool>,
    pub tv_curve: Vec<(usize, f64)>,
}

const MIXING_TV_STEPS: usize = 10;
const MIXING_TV_STATES: usize = 512;

/// Spectral data of the level-`k` walks against both mixing bounds. The
/// bounds are reported only when every link through level `k-2` has a
/// connected 1-skeleton. The down-up TV curve starts at the first face of
/// `X(k)` and is skipped above 512 states.
pub fn verify_mixing(x: &WeightedComplex, k: isize, tol: f64) -> Result<MixingReport> {
    let d = x.dim();
    if k < 0 || k > d {
        return Err(Error::out_of_range("mixing level", k as i64, 0, d as i64));
    }
    let lambda2_minus = walk_matrix(x, k, WalkKind::DownUp)?.lambda2()?;
    let lambda2_plus = if k >= 1 {
        Some(walk_matrix(x, k - 1, WalkKind::UpDown)?.lambda2()?)
    } else {
        None
    };
    let links = if k >= 1 {
        spectral::link_spectra(x, k - 2)?
    } else {
        Vec::new()
    };
    let links_connected = links.iter().all(|l| l.connected);
    let gamma_profile = spectral::gamma_by_level(&links);
    let gamma = gamma_profile.iter().map(|g| g.1).reduce(f64::max);
    let ku = k as usize;
    let tv_curve = match x.faces(k).first() {
        Some(s) if x.num_faces(k) <= MIXING_TV_STATES => exact_tv_curve(x, k, WalkKind::DownUp, s, MIXING_TV_STEPS)?,
        _ => Vec::new(),
    };
    let (ko, al) = if links_connected {
        let profile: Vec<f64> = gamma_profile.iter().map(|g| g.1).collect();
        (Some(ko_bound(ku, gamma.unwrap_or(0.0))), Some(al_bound(ku, &profile)))
    } else {
        (None, None)
    };
    Ok(MixingReport {
        k,
        lambda2_plus,
        lambda2_minus,
        gamma_profile,
        gamma,
        links_connected,
        ko_bound: ko,
        al_bound: al,
        ko_holds: ko.map(|b| lambda2_minus <= b + tol),
        al_holds: al.map(|b| lambda2_minus <= b + tol),
        tv_curve,
    })
}

fn start_index(x: &WeightedComplex, k: isize, start: &Face) -> Result<usize> {
    if start.dim() != k {
        return Err(Error::BadStart(format!("{start} is not a {k}-face")));
    }
    x.index_of(start)
        .ok_or_else(|| Error::BadStart(format!("{start} is not in the complex")))
}

fn square_walk(x: &WeightedComplex, k: isize, kind: WalkKind) -> Result<WalkOperator> {
    match kind {
        WalkKind::UpDown | WalkKind::DownUp => walk_matrix(x, k, kind),
        _ => Err(Error::BadParams("only up-down and down-up walks can be iterated".into())),
    }
}

/// `P^t(start, ·)` exactly.
pub fn exact_distribution(
    x: &WeightedComplex,
    k: isize,
    kind: WalkKind,
    start: &Face,
    steps: usize,
) -> Result<Vec<Rational>> {
    let op = square_walk(x, k, kind)?;
    let s = start_index(x, k, start)?;
    let mut p = vec![Rational::zero(); op.matrix.rows()];
    p[s] = Rational::one();
    for _ in 0..steps {
        p = op.matrix.left_apply(&p);
    }
    Ok(p)
}

/// `TV(t) = ½ Σ_σ |P^t(start,σ) − w_k(σ)|` for `t = 0..=max_steps`, computed
/// with exact matrix powers.
pub fn exact_tv_curve(
    x: &WeightedComplex,
    k: isize,
    kind: WalkKind,
    start: &Face,
    max_steps: usize,
) -> Result<Vec<(usize, f64)>> {
    if x.num_faces(k) > MAX_DENSE {
        return Err(Error::TooLarge(format!(
            "{} states exceeds cap {MAX_DENSE}",
            x.num_faces(k)
        )));
    }
    let op = square_walk(x, k, kind)?;
    let s = start_index(x, k, start)?;
    let w = x.weights(k);
    let mut p = vec![Rational::zero(); op.matrix.rows()];
    p[s] = Rational::one();
    let half = Rational::new(1.into(), 2.into());
    let mut out = Vec::with_capacity(max_steps + 1);
    for t in 0..=max_steps {
        let tv: Rational = p.iter().zip(w).map(|(a, b)| (a - b).abs()).sum::<Rational>() * &half;
        out.push((t, to_f64(&tv)));
        if t < max_steps {
            p = op.matrix.left_apply(&p);
        }
    }
    Ok(out)
}

/// Seeded sampler for the up-down or down-up walk at level `k`. Up steps
/// pick a coface with probability proportional to its weight, down steps a
/// uniform facet.
#[derive(Clone, Debug)]
pub struct WalkSampler<'a> {
    x: &'a WeightedComplex,
    k: isize,
    kind: WalkKind,
    up_weights: Scaled,
}

impl<'a> WalkSampler<'a> {
    pub fn new(x: &'a WeightedComplex, k: isize, kind: WalkKind) -> Result<Self> {
        let d = x.dim();
        let upper = match kind {
            WalkKind::UpDown if (0..d).contains(&k) => k + 1,
            WalkKind::DownUp if (0..=d).contains(&k) => k,
            WalkKind::UpDown | WalkKind::DownUp => {
                return Err(Error::out_of_range("walk level", k as i64, 0, d as i64))
            }
            _ => return Err(Error::BadParams("only up-down and down-up walks can be sampled".into())),
        };
        Ok(WalkSampler {
            x,
            k,
            kind,
            up_weights: Scaled::new(x.weights(upper))?,
        })
    }

    fn up<R: Rng>(&self, level: isize, j: usize, rng: &mut R) -> usize {
        let cof = self.x.complex().cofaces_of(level, j);
        let total: u64 = cof.iter().map(|&c| self.up_weights.numers[c]).sum();
        let mut r = rng.gen_range(0..total);
        for &c in cof {
            let w = self.up_weights.numers[c];
            if r < w {
                return c;
            }
            r -= w;
        }
        unreachable!("weights sum to total")
    }

    fn down<R: Rng>(&self, level: isize, j: usize, rng: &mut R) -> usize {
        let facets = self.x.complex().facets_of(level, j);
        facets[rng.gen_range(0..facets.len())]
    }

    /// One transition from the face with index `j` in `X(k)`.
    pub fn step<R: Rng>(&self, j: usize, rng: &mut R) -> usize {
        match self.kind {
            WalkKind::UpDown => {
                let t = self.up(self.k, j, rng);
                self.down(self.k + 1, t, rng)
            }
            _ => {
                let t = self.down(self.k, j, rng);
                self.up(self.k - 1, t, rng)
            }
        }
    }

    /// Index of the state after `steps` transitions from `start`.
    pub fn run_index<R: Rng>(&self, start: usize, steps: usize, rng: &mut R) -> usize {
        (0..steps).fold(start, |j, _| self.step(j, rng))
    }
}

/// Deterministic per-run generator: the same `(seed, stream)` always yields
/// the same sequence.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Trajectory of `steps` transitions (including the start).
pub fn run_walk(
    x: &WeightedComplex,
    k: isize,
    kind: WalkKind,
    start: &Face,
    steps: usize,
    seed: u64,
) -> Result<Vec<Face>> {
    let sampler = WalkSampler::new(x, k, kind)?;
    let mut j = start_index(x, k, start)?;
    let mut rng = rng_for(seed, 0);
    let faces = x.faces(k);
    let mut out = Vec::with_capacity(steps + 1);
    out.push(faces[j].clone());
    for _ in 0..steps {
        j = sampler.step(j, &mut rng);
        out.push(faces[j].clone());
    }
    Ok(out)
}

/// Empirical distribution of `n_chains` independent chains after `steps`
/// transitions; chain `c` uses stream `c` of `seed`.
pub fn empirical_distribution(
    x: &WeightedComplex,
    k: isize,
    kind: WalkKind,
    start: &Face,
    steps: usize,
    n_chains: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    let sampler = WalkSampler::new(x, k, kind)?;
    let s = start_index(x, k, start)?;
    let n = x.num_faces(k);
    let counts = crate::par::fold_chunks(
        0..n_chains as u64,
        1024,
        |range| {
            let mut counts = vec![0u64; n];
            for c in range {
                let mut rng = rng_for(seed, c);
                counts[sampler.run_index(s, steps, &mut rng)] += 1;
            }
            counts
        },
        |mut a, b| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            a
        },
    )
    .unwrap_or_else(|| vec![0; n]);
    Ok(counts.into_iter().map(|c| c as f64 / n_chains.max(1) as f64).collect())
}

/// `⟨f, g⟩_k = Σ_{σ ∈ X(k)} w(σ) f(σ) g(σ)`
pub fn inner(x: &WeightedComplex, k: isize, f: &[Rational], g: &[Rational]) -> Rational {
    x.weights(k)
        .iter()
        .zip(f.iter().zip(g))
        .map(|(w, (a, b))| w * a * b)
        .sum()
}

pub fn constant(x: &WeightedComplex, k: isize, c: i64) -> Vec<Rational> {
    vec![int(c); x.num_faces(k)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn k3() -> WeightedComplex {
        WeightedComplex::from_top_faces(&[vec![0, 1], vec![0, 2], vec![1, 2]], None).unwrap()
    }

    fn face(v: &[u32]) -> Face {
        Face::new(v.to_vec()).unwrap()
    }

    #[test]
    fn up_averages_facets() {
        let x = k3();
        let u = up_operator(&x, 0).unwrap();
        let f = vec![int(1), int(2), int(4)];
        let out = u.matrix.apply(&f);
        // edges 01, 02, 12
        assert_eq!(out, vec![ratio(3, 2), ratio(5, 2), int(3)]);
        assert_eq!(u.matrix.apply(&constant(&x, 0, 7)), constant(&x, 1, 7));
        assert!(u.pushes_forward(&x));

        let t = WeightedComplex::from_top_faces(&[vec![0, 1, 2]], None).unwrap();
        let u1 = up_operator(&t, 1).unwrap();
        let ind: Vec<Rational> = t.faces(1).iter().map(|e| int(i64::from(e == &face(&[0, 1])))).collect();
        assert_eq!(u1.matrix.apply(&ind), vec![ratio(1, 3)]);
        assert!(up_operator(&t, 2).is_err());
    }

    #[test]
    fn down_is_conditional_expectation() {
        let x = k3();
        let d1 = down_operator(&x, 1).unwrap();
        let f = vec![int(1), int(2), int(4)];
        assert_eq!(d1.matrix.apply(&f), vec![ratio(3, 2), ratio(5, 2), int(3)]);
        let path = WeightedComplex::from_top_faces(&[vec![0, 1], vec![1, 2]], None).unwrap();
        let d = down_operator(&path, 1).unwrap();
        let g = vec![int(3), int(5)];
        assert_eq!(d.matrix.apply(&g), vec![int(3), int(4), int(5)]);
        assert_eq!(d.matrix.apply(&constant(&path, 1, 2)), constant(&path, 0, 2));
        assert!(d.pushes_forward(&path));
    }

    #[test]
    fn k3_up_down_walk() {
        let m = walk_matrix(&k3(), 0, WalkKind::UpDown).unwrap();
        for r in 0..3 {
            for c in 0..3 {
                let expect = if r == c { ratio(1, 2) } else { ratio(1, 4) };
                assert_eq!(m.matrix.get(r, c), expect);
            }
        }
        let ev = m.spectrum().unwrap().eigenvalues;
        assert!((ev[0] - 1.0).abs() < 1e-12 && (ev[1] - 0.25).abs() < 1e-12 && (ev[2] - 0.25).abs() < 1e-12);
    }

    #[test]
    fn bounds() {
        assert_eq!(ko_bound(1, -0.5), 0.25);
        assert_eq!(ko_bound(3, 0.0), 0.75);
        assert_eq!(al_bound(1, &[-0.5]), 0.25);
        assert_eq!(al_bound(0, &[]), 0.0);
    }

    #[test]
    fn k3_mixing_is_tight() {
        let r = verify_mixing(&k3(), 1, 1e-9).unwrap();
        assert!((r.lambda2_minus - 0.25).abs() < 1e-9);
        assert!((r.lambda2_plus.unwrap() - 0.25).abs() < 1e-9);
        assert!((r.ko_bound.unwrap() - 0.25).abs() < 1e-9);
        assert_eq!(r.ko_holds, Some(true));
        assert_eq!(r.al_holds, Some(true));
    }

    #[test]
    fn tv_curve_starts_at_point_mass_distance() {
        let x = k3();
        let curve = exact_tv_curve(&x, 1, WalkKind::DownUp, &face(&[0, 1]), 4).unwrap();
        assert!((curve[0].1 - 2.0 / 3.0).abs() < 1e-15);
        for (t, tv) in &curve {
            assert!((tv - (2.0 / 3.0) * 0.25f64.powi(*t as i32)).abs() < 1e-12);
        }
        assert!(matches!(
            exact_tv_curve(&x, 1, WalkKind::DownUp, &face(&[0]), 3),
            Err(Error::BadStart(_))
        ));
    }

    #[test]
    fn sampler_is_reproducible() {
        let x = k3();
        let a = run_walk(&x, 0, WalkKind::UpDown, &face(&[0]), 50, 11).unwrap();
        let b = run_walk(&x, 0, WalkKind::UpDown, &face(&[0]), 50, 11).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 51);
        assert!(run_walk(&x, 0, WalkKind::UpDown, &face(&[9]), 5, 1).is_err());
    }
}
