//! Matroid oracles, exhaustive axiom checks, independence complexes, the
//! exchange-property structure of their 1-skeletons, and the base-exchange
//! walk.

use rand::Rng;
use serde::Serialize;

use crate::complex::{Face, PureComplex, WeightedComplex};
use crate::error::{Error, Result};
use crate::par;
use crate::rational::Rational;
use crate::spectral::{certify_local_spectral, LocalExpansionReport};
use crate::walks::{rng_for, RationalMatrix, WalkKind, WalkOperator};

/// Largest ground set for exhaustive axiom checks.
pub const AXIOM_CAP: usize = 16;
/// Largest ground set for base enumeration.
pub const ENUM_CAP: usize = 24;
pub const MAX_BASES: u64 = 1_000_000;
pub const MAX_WALK_BASES: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MatroidKind {
    Uniform { n: usize, r: usize },
    Graphic { n_vertices: usize, edges: Vec<(usize, usize)> },
    /// Column `j` is the bit mask of a vector in `F2^rows`.
    LinearF2 { rows: usize, columns: Vec<u64> },
    /// Sorted bit masks of the listed independent sets.
    Explicit { ground: usize, independent: Vec<u64> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matroid {
    kind: MatroidKind,
    n: usize,
    rank: usize,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut a: usize) -> usize {
        while self.parent[a] != a {
            self.parent[a] = self.parent[self.parent[a]];
            a = self.parent[a];
        }
        a
    }

    /// False when `a` and `b` were already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

fn bits(mask: u64) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            return None;
        }
        let b = m.trailing_zeros() as usize;
        m &= m - 1;
        Some(b)
    })
}

pub fn mask_of(set: &[usize]) -> u64 {
    set.iter().fold(0, |m, &e| m | 1 << e)
}

pub fn set_of(mask: u64) -> Vec<usize> {
    bits(mask).collect()
}

/// Every `k`-subset of `0..n` in increasing mask order.
fn subsets_of_size(n: usize, k: usize) -> impl Iterator<Item = u64> {
    let limit = 1u64 << n;
    let mut cur = if k > n { limit } else { (1u64 << k) - 1 };
    let mut done = k > n;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out = cur;
        if k == 0 {
            done = true;
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            cur = (((r ^ cur) >> 2) / c) | r;
            if cur >= limit {
                done = true;
            }
        }
        Some(out)
    })
}

impl Matroid {
    fn build(kind: MatroidKind, n: usize) -> Result<Self> {
        if n > 63 {
            return Err(Error::TooLarge(format!("ground set of size {n} exceeds 63")));
        }
        let mut m = Matroid { kind, n, rank: 0 };
        m.rank = m.rank(&(0..n).collect::<Vec<_>>())?;
        Ok(m)
    }

    pub fn uniform(n: usize, r: usize) -> Result<Self> {
        if r > n {
            return Err(Error::BadParams(format!("rank {r} exceeds ground size {n}")));
        }
        Self::build(MatroidKind::Uniform { n, r }, n)
    }

    pub fn graphic(n_vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if let Some(&(u, v)) = edges.iter().find(|(u, v)| *u >= n_vertices || *v >= n_vertices) {
            return Err(Error::InvalidGraph(format!("edge ({u},{v}) leaves 0..{n_vertices}")));
        }
        let n = edges.len();
        Self::build(MatroidKind::Graphic { n_vertices, edges }, n)
    }

    /// Columns given as 0/1 coordinate lists of equal length.
    pub fn linear_f2(columns: &[Vec<u8>]) -> Result<Self> {
        let rows = columns.first().map_or(0, Vec::len);
        if rows > 64 {
            return Err(Error::TooLarge("vectors longer than 64".into()));
        }
        let masks = columns
            .iter()
            .map(|c| {
                if c.len() != rows {
                    return Err(Error::DimensionMismatch("columns of different lengths".into()));
                }
                c.iter()
                    .enumerate()
                    .try_fold(0u64, |m, (i, &b)| match b {
                        0 => Ok(m),
                        1 => Ok(m | 1 << i),
                        _ => Err(Error::Parse(format!("{b} is not an F2 entry"))),
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::build(MatroidKind::LinearF2 { rows, columns: masks }, columns.len())
    }

    pub fn explicit(ground: usize, independent: &[Vec<usize>]) -> Result<Self> {
        let mut masks = Vec::with_capacity(independent.len());
        for set in independent {
            if let Some(&e) = set.iter().find(|&&e| e >= ground) {
                return Err(Error::out_of_range("element", e as i64, 0, ground as i64 - 1));
            }
            masks.push(mask_of(set));
        }
        masks.sort_unstable();
        masks.dedup();
        Self::build(MatroidKind::Explicit { ground, independent: masks }, ground)
    }

    pub fn kind(&self) -> &MatroidKind {
        &self.kind
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn rank_of_matroid(&self) -> usize {
        self.rank
    }

    fn check_set(&self, s: &[usize]) -> Result<u64> {
        if let Some(&e) = s.iter().find(|&&e| e >= self.n) {
            return Err(Error::out_of_range("element", e as i64, 0, self.n as i64 - 1));
        }
        Ok(mask_of(s))
    }

    pub fn is_independent(&self, s: &[usize]) -> Result<bool> {
        Ok(self.independent_mask(self.check_set(s)?))
    }

    pub fn independent_mask(&self, s: u64) -> bool {
        match &self.kind {
            MatroidKind::Uniform { r, .. } => s.count_ones() as usize <= *r,
            MatroidKind::Graphic { n_vertices, edges } => {
                let mut uf = UnionFind::new(*n_vertices);
                bits(s).all(|e| uf.union(edges[e].0, edges[e].1))
            }
            MatroidKind::LinearF2 { columns, .. } => {
                let mut basis: Vec<u64> = Vec::new();
                bits(s).all(|e| {
                    let v = basis.iter().fold(columns[e], |v, &b| v.min(v ^ b));
                    if v == 0 {
                        return false;
                    }
                    basis.push(v);
                    basis.sort_unstable_by(|a, b| b.cmp(a));
                    true
                })
            }
            MatroidKind::Explicit { independent, .. } => independent.binary_search(&s).is_ok(),
        }
    }

    /// Size of a largest independent subset of `s`.
    pub fn rank(&self, s: &[usize]) -> Result<usize> {
        let mask = self.check_set(s)?;
        Ok(match &self.kind {
            MatroidKind::Explicit { independent, .. } => independent
                .iter()
                .filter(|&&i| i & !mask == 0)
                .map(|i| i.count_ones() as usize)
                .max()
                .unwrap_or(0),
            _ => {
                let mut acc = 0u64;
                for e in bits(mask) {
                    if self.independent_mask(acc | 1 << e) {
                        acc |= 1 << e;
                    }
                }
                acc.count_ones() as usize
            }
        })
    }

    /// Bases in increasing mask order.
    pub fn bases(&self) -> Result<Vec<u64>> {
        if self.n > ENUM_CAP {
            return Err(Error::TooLarge(format!(
                "ground set of size {} exceeds the enumeration cap {ENUM_CAP}",
                self.n
            )));
        }
        let candidates: Vec<u64> = subsets_of_size(self.n, self.rank).collect();
        let keep = par::map(&candidates, |&s| self.independent_mask(s));
        Ok(candidates.into_iter().zip(keep).filter(|(_, k)| *k).map(|(s, _)| s).collect())
    }

    pub fn count_bases(&self) -> Result<u64> {
        Ok(self.bases()?.len() as u64)
    }

    pub fn is_base(&self, s: &[usize]) -> Result<bool> {
        Ok(s.len() == self.rank && self.is_independent(s)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomViolation {
    pub axiom: &'static str,
    pub t1: Vec<usize>,
    pub t2: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub ground: usize,
    pub independent_sets: usize,
    pub hereditary: bool,
    pub exchange: bool,
    pub counterexample: Option<AxiomViolation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.hereditary && self.exchange
    }
}

/// Checks both axioms over every subset. Exchange is tested on pairs with
/// `|T1| = |T2| + 1`, which suffices once heredity holds.
pub fn verify_axioms(m: &Matroid) -> Result<AxiomReport> {
    if m.n > AXIOM_CAP {
        return Err(Error::TooLarge(format!(
            "ground set of size {} exceeds the axiom cap {AXIOM_CAP}",
            m.n
        )));
    }
    let all: Vec<u64> = (0..1u64 << m.n).collect();
    let flags = par::map(&all, |&s| m.independent_mask(s));
    let indep: Vec<u64> = all.iter().copied().filter(|&s| flags[s as usize]).collect();
    let mut report = AxiomReport {
        ground: m.n,
        independent_sets: indep.len(),
        hereditary: true,
        exchange: true,
        counterexample: None,
    };
    if indep.first() != Some(&0) {
        report.hereditary = false;
        report.counterexample = Some(AxiomViolation {
            axiom: "hereditary",
            t1: indep.first().map(|&s| set_of(s)).unwrap_or_default(),
            t2: Vec::new(),
        });
        return Ok(report);
    }
    for &s in &indep {
        if let Some(e) = bits(s).find(|&e| !flags[(s & !(1 << e)) as usize]) {
            report.hereditary = false;
            report.counterexample = Some(AxiomViolation {
                axiom: "hereditary",
                t1: set_of(s),
                t2: set_of(s & !(1 << e)),
            });
            return Ok(report);
        }
    }
    let failures = par::map(&indep, |&t1| {
        let size = t1.count_ones();
        indep
            .iter()
            .filter(|t2| t2.count_ones() + 1 == size)
            .find(|&&t2| !bits(t1 & !t2).any(|e| flags[(t2 | 1 << e) as usize]))
            .map(|&t2| (t1, t2))
    });
    if let Some((t1, t2)) = failures.into_iter().flatten().next() {
        report.exchange = false;
        report.counterexample = Some(AxiomViolation {
            axiom: "exchange",
            t1: set_of(t1),
            t2: set_of(t2),
        });
    }
    Ok(report)
}

fn require_matroid(m: &Matroid) -> Result<()> {
    if let MatroidKind::Explicit { .. } = m.kind {
        let r = verify_axioms(m)?;
        if let Some(v) = r.counterexample {
            return Err(Error::NotMatroid(format!(
                "{} axiom fails at T1={:?}, T2={:?}",
                v.axiom, v.t1, v.t2
            )));
        }
    }
    Ok(())
}

fn face_of(mask: u64) -> Face {
    Face::new(bits(mask).map(|e| e as u32).collect()).expect("distinct elements")
}

/// The pure `(r-1)`-dimensional complex of independent sets with uniform
/// weight on bases. Vertex `e` is ground element `e`.
pub fn independence_complex(m: &Matroid) -> Result<WeightedComplex> {
    require_matroid(m)?;
    if m.rank == 0 {
        return Err(Error::BadParams("a rank-0 matroid has no nonempty independent sets".into()));
    }
    let bases = m.bases()?;
    if bases.len() as u64 > MAX_BASES {
        return Err(Error::TooLarge(format!("{} bases exceeds {MAX_BASES}", bases.len())));
    }
    let tops: Vec<Face> = bases.iter().map(|&b| face_of(b)).collect();
    let labels = (0..m.n).map(|e| e.to_string()).collect();
    WeightedComplex::with_labels(labels, &tops, None)
}

/// For faces `σ, τ` with `|σ| > |τ|`, some `v ∈ σ ∖ τ` has `τ ∪ {v}` a face.
/// Pairs with `|σ| = |τ| + 1` suffice because the complex is closed.
pub fn verify_exchange_property(x: &PureComplex) -> bool {
    exchange_counterexample(x).is_none()
}

pub fn exchange_counterexample(x: &PureComplex) -> Option<(Face, Face)> {
    (0..=x.dim()).find_map(|i| {
        let found = par::map(x.faces(i), |sigma| {
            x.faces(i - 1)
                .iter()
                .find(|tau| {
                    !sigma
                        .vertices()
                        .iter()
                        .filter(|v| !tau.contains_vertex(**v))
                        .any(|&v| x.contains(&tau.with_vertex(v)))
                })
                .map(|tau| (sigma.clone(), tau.clone()))
        });
        found.into_iter().flatten().next()
    })
}

/// Splits the vertices of a graph with the exchange property into the parts
/// of a complete multipartite graph. Pick an edge `{u, v}`; the part of `v`
/// is `{v}` with the neighbours of `u` not adjacent to `v`, symmetrically
/// for `u`, and the common neighbours are split recursively.
pub fn multipartite_partition(g: &PureComplex) -> Result<Vec<Vec<u32>>> {
    if g.dim() != 1 {
        return Err(Error::WrongDimension {
            expected: 1,
            actual: g.dim(),
        });
    }
    if let Some((s, t)) = exchange_counterexample(g) {
        return Err(Error::NoExchange(format!("{s} and {t}")));
    }
    let adjacent = |a: u32, b: u32| Face::new(vec![a, b]).map(|e| g.contains(&e)).unwrap_or(false);
    let mut parts: Vec<Vec<u32>> = Vec::new();
    let mut rest: Vec<u32> = g.vertices().collect();
    loop {
        let edge = rest
            .iter()
            .enumerate()
            .find_map(|(i, &a)| rest[i + 1..].iter().find(|&&b| adjacent(a, b)).map(|&b| (a, b)));
        let Some((u, v)) = edge else {
            if !rest.is_empty() {
                parts.push(rest);
            }
            break;
        };
        let (mut pv, mut pu, mut common) = (vec![v], vec![u], Vec::new());
        for &w in rest.iter().filter(|&&w| w != u && w != v) {
            match (adjacent(u, w), adjacent(v, w)) {
                (true, false) => pv.push(w),
                (false, true) => pu.push(w),
                (true, true) => common.push(w),
                (false, false) => {
                    return Err(Error::NoExchange(format!("vertex {w} misses both ends of {{{u},{v}}}")))
                }
            }
        }
        pv.sort_unstable();
        pu.sort_unstable();
        parts.push(pu);
        parts.push(pv);
        rest = common;
    }
    parts.sort();
    let part_of: std::collections::HashMap<u32, usize> =
        parts.iter().enumerate().flat_map(|(i, p)| p.iter().map(move |&v| (v, i))).collect();
    let verts: Vec<u32> = g.vertices().collect();
    for (i, &a) in verts.iter().enumerate() {
        for &b in &verts[i + 1..] {
            if adjacent(a, b) != (part_of[&a] != part_of[&b]) {
                return Err(Error::NoExchange(format!(
                    "vertices {a} and {b} break the multipartite structure"
                )));
            }
        }
    }
    Ok(parts)
}

/// Certifies the independence complex as a 0-local spectral expander.
pub fn certify_zero_local(m: &Matroid, tol: f64) -> Result<LocalExpansionReport> {
    let x = independence_complex(m)?;
    certify_local_spectral(&x, 0.0, tol)
}

/// One base-exchange step: drop a uniform element, then add a uniform
/// element that keeps the set independent.
fn exchange_step<R: Rng>(m: &Matroid, base: u64, rng: &mut R) -> u64 {
    let elems = set_of(base);
    let drop = elems[rng.gen_range(0..elems.len())];
    let reduced = base & !(1 << drop);
    let ext: Vec<usize> = (0..m.n)
        .filter(|&e| reduced >> e & 1 == 0 && m.independent_mask(reduced | 1 << e))
        .collect();
    reduced | 1 << ext[rng.gen_range(0..ext.len())]
}

fn start_base(m: &Matroid, start: &[usize]) -> Result<u64> {
    if m.rank == 0 {
        return Err(Error::BadStart("a rank-0 matroid has no exchange walk".into()));
    }
    let mask = m.check_set(start).map_err(|e| Error::BadStart(e.to_string()))?;
    if start.len() != m.rank || mask.count_ones() as usize != m.rank || !m.independent_mask(mask) {
        return Err(Error::BadStart(format!("{start:?} is not a base")));
    }
    Ok(mask)
}

pub fn sample_base(m: &Matroid, start: &[usize], steps: usize, seed: u64) -> Result<Vec<usize>> {
    require_matroid(m)?;
    let mut b = start_base(m, start)?;
    let mut rng = rng_for(seed, 0);
    for _ in 0..steps {
        b = exchange_step(m, b, &mut rng);
    }
    Ok(set_of(b))
}

/// Final bases of independent chains; chain `c` uses stream `c` of `seed`.
pub fn sample_bases(m: &Matroid, start: &[usize], steps: usize, seed: u64, chains: usize) -> Result<Vec<Vec<usize>>> {
    require_matroid(m)?;
    let b0 = start_base(m, start)?;
    Ok(par::map_range(chains, |c| {
        let mut rng = rng_for(seed, c as u64);
        let mut b = b0;
        for _ in 0..steps {
            b = exchange_step(m, b, &mut rng);
        }
        set_of(b)
    }))
}

/// Exact transition matrix of the base-exchange walk over bases in
/// increasing face order.
pub fn base_walk_matrix(m: &Matroid) -> Result<WalkOperator> {
    require_matroid(m)?;
    if m.rank == 0 {
        return Err(Error::BadParams("a rank-0 matroid has no exchange walk".into()));
    }
    let masks = m.bases()?;
    if masks.len() > MAX_WALK_BASES {
        return Err(Error::TooLarge(format!("{} bases exceeds {MAX_WALK_BASES}", masks.len())));
    }
    let mut faces: Vec<(Face, u64)> = masks.iter().map(|&b| (face_of(b), b)).collect();
    faces.sort();
    let index: std::collections::HashMap<u64, usize> = faces.iter().enumerate().map(|(i, (_, b))| (*b, i)).collect();
    let r = m.rank as i64;
    let rows = par::map(&faces, |(_, b)| {
        let mut row: std::collections::BTreeMap<usize, Rational> = Default::default();
        for e in bits(*b) {
            let reduced = b & !(1 << e);
            let ext: Vec<usize> = (0..m.n)
                .filter(|&f| reduced >> f & 1 == 0 && m.independent_mask(reduced | 1 << f))
                .collect();
            let p = Rational::new(1.into(), (r * ext.len() as i64).into());
            for f in ext {
                *row.entry(index[&(reduced | 1 << f)]).or_default() += &p;
            }
        }
        row.into_iter().collect::<Vec<_>>()
    });
    let n = faces.len();
    let k = m.rank as isize - 1;
    Ok(WalkOperator {
        kind: WalkKind::DownUp,
        level: k,
        row_level: k,
        col_level: k,
        matrix: RationalMatrix::from_rows(n, rows),
        stationary: vec![Rational::new(1.into(), (n as i64).into()); n],
    })
}
