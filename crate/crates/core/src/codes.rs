//! The cocycle tester for coboundary codes, exact testability constants,
//! and CSS codes read off 2-dimensional complexes.

use rand::Rng;
use serde::Serialize;

use crate::complex::WeightedComplex;
use crate::error::{Error, Result};
use crate::gf2::{F2Matrix, F2Vec, Subspace};
use crate::par;
use crate::rational::{frac_lt, ExtRational, Rational, Scaled};
use crate::topology::{coboundary, coboundary_matrix, enumeration_cap, masks_of, norm, scan_cosets, F2Cochain, MaskWeights};
use crate::walks::rng_for;

const TRIALS_PER_STREAM: u64 = 4096;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CocycleTestResult {
    pub trials: u64,
    pub rejections: u64,
    pub empirical: f64,
    /// `‖δf‖_w`, the exact rejection probability.
    #[serde(serialize_with = "crate::io::ser_rational")]
    pub exact: Rational,
}

/// Samples `σ ∈ X(i+1)` with probability `w(σ)` and rejects when
/// `(δf)(σ) = 1`. Trials are split into fixed blocks, each with its own
/// stream of `seed`, so the outcome does not depend on the thread count.
pub fn cocycle_test(x: &WeightedComplex, f: &F2Cochain, seed: u64, trials: u64) -> Result<CocycleTestResult> {
    if trials == 0 {
        return Err(Error::BadParams("at least one trial is required".into()));
    }
    let df = coboundary(x, f)?;
    let exact = norm(x, &df);
    let w = Scaled::new(x.weights(f.level + 1))?;
    let total = w.total();
    let cumulative: Vec<u64> = w
        .numers
        .iter()
        .scan(0u64, |acc, &n| {
            *acc += n;
            Some(*acc)
        })
        .collect();
    let blocks = trials.div_ceil(TRIALS_PER_STREAM);
    let rejections = par::fold_chunks(
        0..blocks,
        1,
        |range| {
            let mut count = 0u64;
            for b in range {
                let mut rng = rng_for(seed, b);
                let n = TRIALS_PER_STREAM.min(trials - b * TRIALS_PER_STREAM);
                for _ in 0..n {
                    let r = rng.gen_range(0..total);
                    let sigma = cumulative.partition_point(|&c| c <= r);
                    if df.bits.get(sigma) {
                        count += 1;
                    }
                }
            }
            count
        },
        |a, b| a + b,
    )
    .unwrap_or(0);
    Ok(CocycleTestResult {
        trials,
        rejections,
        empirical: rejections as f64 / trials as f64,
        exact,
    })
}

/// `min_{f ∉ B^i} P[reject f] / dist(f, B^i)` by brute force over every
/// `f ∈ C^i`, with `B^i` listed as the images of all `(i-1)`-cochains and
/// the rejection probability summed face by face.
pub fn testability_epsilon(x: &WeightedComplex, i: isize, cap: u64) -> Result<ExtRational> {
    let d = x.dim();
    if i < 0 || i > d - 1 {
        return Err(Error::out_of_range("tester level", i as i64, 0, d as i64 - 1));
    }
    let n = x.num_faces(i);
    let below = x.num_faces(i - 1);
    enumeration_cap(&format!("C^{i}"), n, cap)?;
    enumeration_cap(&format!("C^{}", i - 1), below, cap)?;
    let cx = x.complex();
    let face_mask = |level: isize, j: usize| -> u64 { cx.facets_of(level, j).iter().fold(0, |m, &t| m | 1 << t) };
    let lower_images: Vec<u64> = (0..below).map(|t| (0..n).filter(|&j| cx.facets_of(i, j).contains(&t)).fold(0, |m, j| m | 1 << j)).collect();
    let mut codewords: Vec<u64> = (0u64..1 << below)
        .map(|g| {
            lower_images
                .iter()
                .enumerate()
                .filter(|(t, _)| g >> t & 1 == 1)
                .fold(0, |m, (_, im)| m ^ im)
        })
        .collect();
    codewords.sort_unstable();
    codewords.dedup();
    let work = (1u128 << n) * codewords.len() as u128;
    if work > (cap as u128) << 4 {
        return Err(Error::TooLarge(format!("2^{n} words times {} codewords", codewords.len())));
    }
    let upper: Vec<u64> = (0..x.num_faces(i + 1)).map(|s| face_mask(i + 1, s)).collect();
    let wi = Scaled::new(x.weights(i))?;
    let wu = Scaled::new(x.weights(i + 1))?;
    let weigh = |m: u64| -> u64 { (0..n).filter(|j| m >> j & 1 == 1).map(|j| wi.numers[j]).sum() };
    let best = par::fold_chunks(
        0..1u64 << n,
        256,
        |range| {
            let mut best: Option<(u64, u64)> = None;
            for f in range {
                if codewords.binary_search(&f).is_ok() {
                    continue;
                }
                let reject: u64 = upper
                    .iter()
                    .zip(&wu.numers)
                    .filter(|(m, _)| (f & **m).count_ones() % 2 == 1)
                    .map(|(_, w)| *w)
                    .sum();
                let dist = codewords.iter().map(|c| weigh(f ^ c)).min().expect("zero is a codeword");
                if best.is_none_or(|(a, b)| frac_lt(reject, dist, a, b)) {
                    best = Some((reject, dist));
                }
            }
            best
        },
        |a, b| match (a, b) {
            (Some(p), Some(q)) => Some(if frac_lt(q.0, q.1, p.0, p.1) { q } else { p }),
            (a, None) => a,
            (None, b) => b,
        },
    )
    .flatten();
    Ok(match best {
        None => ExtRational::Infinite,
        Some((r, dist)) => ExtRational::Finite(wu.to_rational(r) / wi.to_rational(dist)),
    })
}

/// A binary linear code with generator and parity-check bases.
#[derive(Clone, Debug)]
pub struct LinearCodeF2 {
    pub n: usize,
    pub generator: Subspace,
    pub parity: Subspace,
}

impl LinearCodeF2 {
    pub fn from_generators(n: usize, rows: Vec<F2Vec>) -> Self {
        let generator = Subspace::span(n, rows);
        let parity = Subspace::span(n, F2Matrix::from_rows(n, generator.basis().to_vec()).kernel());
        LinearCodeF2 { n, generator, parity }
    }

    /// The code `ker H`.
    pub fn from_parity_checks(h: &F2Matrix) -> Self {
        let n = h.num_cols();
        let generator = Subspace::span(n, h.kernel());
        let parity = h.row_space();
        LinearCodeF2 { n, generator, parity }
    }

    pub fn dim(&self) -> usize {
        self.generator.dim()
    }

    pub fn contains(&self, v: &F2Vec) -> bool {
        self.generator.contains(v)
    }

    /// `G Hᵀ = 0`
    pub fn is_orthogonal(&self) -> bool {
        self.generator
            .basis()
            .iter()
            .all(|g| self.parity.basis().iter().all(|h| !g.dot(h)))
            && self.generator.dim() + self.parity.dim() == self.n
    }

    /// Minimum Hamming weight of a nonzero codeword.
    pub fn distance(&self, cap: u64) -> Result<Option<usize>> {
        min_weight_outside(&self.generator, &Subspace::zero(self.n), cap)
    }
}

/// `min |v|` over `v ∈ outer ∖ inner`, for `inner ⊆ outer`; `None` when the
/// difference is empty.
pub fn min_weight_outside(outer: &Subspace, inner: &Subspace, cap: u64) -> Result<Option<usize>> {
    let n = outer.ambient();
    if n > 64 {
        return Err(Error::TooLarge(format!("{n} coordinates exceeds 64")));
    }
    enumeration_cap("code enumeration", outer.dim(), cap)?;
    let reps = masks_of(&outer.quotient_basis(inner))?;
    let inner = masks_of(inner.basis())?;
    let unit = MaskWeights::new(&vec![Rational::from_integer(1.into()); n])?;
    Ok(scan_cosets(&reps, &inner, &unit, false, |_, lightest, _| Some((lightest, 1))).map(|c| c.num as usize))
}

/// A CSS code: qubits on edges, X-checks on vertices, Z-checks on
/// triangles.
#[derive(Clone, Debug)]
pub struct CssCode {
    pub n: usize,
    pub h_x: F2Matrix,
    pub h_z: F2Matrix,
}

#[derive(Clone, Debug, Serialize)]
pub struct CssReport {
    pub n: usize,
    pub rate: usize,
    pub d_x: Option<usize>,
    pub d_z: Option<usize>,
    pub h_x_rows: usize,
    pub h_z_rows: usize,
}

impl CssCode {
    pub fn new(h_x: F2Matrix, h_z: F2Matrix) -> Result<Self> {
        if h_x.num_cols() != h_z.num_cols() {
            return Err(Error::DimensionMismatch("check matrices act on different qubit counts".into()));
        }
        let code = CssCode {
            n: h_x.num_cols(),
            h_x,
            h_z,
        };
        if !code.is_orthogonal() {
            return Err(Error::BadParams("X- and Z-checks do not commute".into()));
        }
        Ok(code)
    }

    /// `H_X H_Zᵀ = 0`
    pub fn is_orthogonal(&self) -> bool {
        self.h_x.mul(&self.h_z.transpose()).is_zero()
    }

    /// `dim ker H_Z − rank H_X`
    pub fn rate(&self) -> usize {
        self.n - self.h_z.rank() - self.h_x.rank()
    }

    /// `dim ker H_X − rank H_Z`; equal to [`CssCode::rate`] by rank duality.
    pub fn rate_homology(&self) -> usize {
        self.h_x.kernel().len() - self.h_z.rank()
    }

    /// Logical operators of the cocycle side: `ker H_Z ∖ rowspace(H_X)`.
    pub fn d_x(&self, cap: u64) -> Result<Option<usize>> {
        min_weight_outside(&Subspace::span(self.n, self.h_z.kernel()), &self.h_x.row_space(), cap)
    }

    /// Logical operators of the cycle side: `ker H_X ∖ rowspace(H_Z)`.
    pub fn d_z(&self, cap: u64) -> Result<Option<usize>> {
        min_weight_outside(&Subspace::span(self.n, self.h_x.kernel()), &self.h_z.row_space(), cap)
    }

    pub fn report(&self, cap: u64) -> Result<CssReport> {
        Ok(CssReport {
            n: self.n,
            rate: self.rate(),
            d_x: self.d_x(cap)?,
            d_z: self.d_z(cap)?,
            h_x_rows: self.h_x.num_rows(),
            h_z_rows: self.h_z.num_rows(),
        })
    }
}

/// `H_Z = δ_1`, `H_X = δ_0ᵀ` (rows are genuine vertices only).
pub fn css_from_complex(x: &WeightedComplex) -> Result<CssCode> {
    if x.dim() != 2 {
        return Err(Error::WrongDimension {
            expected: 2,
            actual: x.dim(),
        });
    }
    CssCode::new(coboundary_matrix(x, 0)?.transpose(), coboundary_matrix(x, 1)?)
}

pub fn css_distances(code: &CssCode, cap: u64) -> Result<(Option<usize>, Option<usize>)> {
    Ok((code.d_x(cap)?, code.d_z(cap)?))
}

/// One `row col` pair per nonzero entry.
pub fn coordinate_list(m: &F2Matrix) -> String {
    let mut out = format!("# {} {}\n", m.num_rows(), m.num_cols());
    for (r, row) in m.rows().iter().enumerate() {
        for c in row.ones() {
            out.push_str(&format!("{r} {c}\n"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Face;
    use crate::rational::{int, ratio};
    use crate::topology::{coboundary_expansion, DEFAULT_ENUM_CAP as CAP};

    fn face(v: &[u32]) -> Face {
        Face::new(v.to_vec()).unwrap()
    }

    fn simplex2() -> WeightedComplex {
        WeightedComplex::from_top_faces(&[vec![0, 1, 2]], None).unwrap()
    }

    fn boundary3() -> WeightedComplex {
        WeightedComplex::from_top_faces(&[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]], None).unwrap()
    }

    #[test]
    fn tester_exact_rejections() {
        let x = simplex2();
        let ab = F2Cochain::indicator(&x, &[face(&[0, 1])]).unwrap();
        assert_eq!(cocycle_test(&x, &ab, 1, 10).unwrap().exact, int(1));
        let a = F2Cochain::indicator(&x, &[face(&[0])]).unwrap();
        let r = cocycle_test(&x, &a, 3, 20_000).unwrap();
        assert_eq!(r.exact, ratio(2, 3));
        assert!((r.empirical - 2.0 / 3.0).abs() < 0.02);
        let b = coboundary(&x, &a).unwrap();
        let r = cocycle_test(&x, &b, 3, 1000).unwrap();
        assert_eq!(r.rejections, 0);
        assert_eq!(cocycle_test(&x, &a, 9, 5000).unwrap(), cocycle_test(&x, &a, 9, 5000).unwrap());
        assert!(cocycle_test(&x, &a, 9, 0).is_err());
    }

    #[test]
    fn testability_matches_expansion() {
        let x = simplex2();
        assert_eq!(testability_epsilon(&x, 0, CAP).unwrap(), ExtRational::Finite(int(2)));
        assert_eq!(testability_epsilon(&x, 1, CAP).unwrap(), ExtRational::Finite(int(3)));
        let b = boundary3();
        for i in 0..2 {
            assert_eq!(testability_epsilon(&b, i, CAP).unwrap(), coboundary_expansion(&b, i, CAP).unwrap());
        }
        let circle = WeightedComplex::from_top_faces(&[vec![0, 1], vec![1, 2], vec![0, 2], vec![3, 4], vec![4, 5], vec![3, 5]], None).unwrap();
        assert_eq!(testability_epsilon(&circle, 0, CAP).unwrap(), ExtRational::Finite(int(0)));
    }

    #[test]
    fn css_small_complexes() {
        let b = css_from_complex(&boundary3()).unwrap();
        assert_eq!(b.n, 6);
        assert_eq!(b.rate(), 0);
        assert_eq!(css_distances(&b, CAP).unwrap(), (None, None));
        let s = css_from_complex(&simplex2()).unwrap();
        assert_eq!((s.n, s.rate()), (3, 0));
        let k3 = WeightedComplex::from_top_faces(&[vec![0, 1], vec![0, 2], vec![1, 2]], None).unwrap();
        assert!(matches!(css_from_complex(&k3), Err(Error::WrongDimension { expected: 2, actual: 1 })));
    }

    #[test]
    fn cycle_graph_distance() {
        for n in 3..9usize {
            let rows = (0..n).map(|v| F2Vec::from_support(n, &[v, (v + n - 1) % n])).collect();
            let code = LinearCodeF2::from_parity_checks(&F2Matrix::from_rows(n, rows));
            assert_eq!(code.dim(), 1);
            assert!(code.is_orthogonal());
            assert_eq!(code.distance(CAP).unwrap(), Some(n));
        }
    }

    #[test]
    fn coordinate_export() {
        let m = F2Matrix::from_rows(3, vec![F2Vec::from_support(3, &[0, 2])]);
        assert_eq!(coordinate_list(&m), "# 1 3\n0 0\n0 2\n");
    }
}
