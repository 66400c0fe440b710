//! Weighted pure simplicial complexes: faces, induced weights, skeletons and
//! links.
//!
//! Faces are stored level by level in lexicographic order of their vertex
//! ids, and every level keeps facet/coface incidence so that coboundaries,
//! walk operators and restrictions are index lookups. The empty face is
//! materialised as level `-1`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rational;

pub type VertexId = u32;

/// A face: strictly increasing vertex ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
pub struct Face(Vec<VertexId>);

impl Face {
    /// Sorts the vertices; fails on repeated vertices.
    pub fn new(mut vertices: Vec<VertexId>) -> Result<Self> {
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidFace(format!("repeated vertex in {vertices:?}")));
        }
        Ok(Face(vertices))
    }

    pub fn empty() -> Self {
        Face(Vec::new())
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dim(&self) -> isize {
        self.0.len() as isize - 1
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// `self ⊆ other`
    pub fn is_subset_of(&self, other: &Face) -> bool {
        self.0.iter().all(|v| other.contains_vertex(*v))
    }

    pub fn union(&self, other: &Face) -> Face {
        let set: BTreeSet<VertexId> = self.0.iter().chain(other.0.iter()).copied().collect();
        Face(set.into_iter().collect())
    }

    pub fn difference(&self, other: &Face) -> Face {
        Face(self.0.iter().copied().filter(|v| !other.contains_vertex(*v)).collect())
    }

    pub fn with_vertex(&self, v: VertexId) -> Face {
        let mut vs = self.0.clone();
        match vs.binary_search(&v) {
            Ok(_) => {}
            Err(pos) => vs.insert(pos, v),
        }
        Face(vs)
    }

    /// Facets in order of the removed position.
    pub fn facets(&self) -> impl Iterator<Item = Face> + '_ {
        (0..self.0.len()).map(move |p| {
            let mut vs = self.0.clone();
            vs.remove(p);
            Face(vs)
        })
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

/// Unweighted pure complex with per-level incidence tables.
#[derive(Clone, Debug)]
pub struct PureComplex {
    dim: isize,
    levels: Vec<Vec<Face>>,
    index: Vec<HashMap<Face, usize>>,
    facets: Vec<Vec<Vec<usize>>>,
    cofaces: Vec<Vec<Vec<usize>>>,
}

impl PureComplex {
    /// Downward closure of `tops`; every top must have the same size.
    pub fn from_tops(tops: &[Face]) -> Result<Self> {
        if tops.is_empty() {
            return Err(Error::NotPure("no top faces given".into()));
        }
        let size = tops[0].len();
        if let Some(t) = tops.iter().find(|t| t.len() != size) {
            return Err(Error::NotPure(format!(
                "top faces of sizes {size} and {} (e.g. {t})",
                t.len()
            )));
        }
        let mut seen = BTreeSet::new();
        for t in tops {
            if !seen.insert(t.clone()) {
                return Err(Error::InvalidFace(format!("duplicate top face {t}")));
            }
        }
        let dim = size as isize - 1;
        let mut sets: Vec<BTreeSet<Face>> = vec![BTreeSet::new(); size + 1];
        sets[size] = seen;
        for l in (1..=size).rev() {
            let (lower, upper) = sets.split_at_mut(l);
            for face in upper[0].iter() {
                for facet in face.facets() {
                    lower[l - 1].insert(facet);
                }
            }
        }
        let levels: Vec<Vec<Face>> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
        let index: Vec<HashMap<Face, usize>> = levels
            .iter()
            .map(|lvl| lvl.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect())
            .collect();
        let mut facets: Vec<Vec<Vec<usize>>> = vec![Vec::new(); levels.len()];
        let mut cofaces: Vec<Vec<Vec<usize>>> =
            levels.iter().map(|lvl| vec![Vec::new(); lvl.len()]).collect();
        facets[0] = vec![Vec::new(); levels[0].len()];
        for l in 1..levels.len() {
            facets[l] = levels[l]
                .iter()
                .enumerate()
                .map(|(j, face)| {
                    face.facets()
                        .map(|ft| {
                            let k = index[l - 1][&ft];
                            cofaces[l - 1][k].push(j);
                            k
                        })
                        .collect()
                })
                .collect();
        }
        Ok(PureComplex {
            dim,
            levels,
            index,
            facets,
            cofaces,
        })
    }

    pub fn dim(&self) -> isize {
        self.dim
    }

    fn level(&self, i: isize) -> Option<usize> {
        if i < -1 || i > self.dim {
            None
        } else {
            Some((i + 1) as usize)
        }
    }

    /// `X(i)`; empty for dimensions outside `-1..=d`.
    pub fn faces(&self, i: isize) -> &[Face] {
        match self.level(i) {
            Some(l) => &self.levels[l],
            None => &[],
        }
    }

    pub fn tops(&self) -> &[Face] {
        self.faces(self.dim)
    }

    pub fn num_faces(&self, i: isize) -> usize {
        self.faces(i).len()
    }

    pub fn total_faces(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    pub fn index_of(&self, face: &Face) -> Option<usize> {
        self.level(face.dim())
            .and_then(|l| self.index[l].get(face).copied())
    }

    pub fn contains(&self, face: &Face) -> bool {
        self.index_of(face).is_some()
    }

    /// Indices in `X(i-1)` of the facets of the `j`-th face of `X(i)`.
    pub fn facets_of(&self, i: isize, j: usize) -> &[usize] {
        &self.facets[self.level(i).expect("level in range")][j]
    }

    /// Indices in `X(i+1)` of the cofaces of the `j`-th face of `X(i)`.
    pub fn cofaces_of(&self, i: isize, j: usize) -> &[usize] {
        &self.cofaces[self.level(i).expect("level in range")][j]
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.faces(0).iter().map(|f| f.vertices()[0])
    }

    /// Maximal number of faces (of any dimension `≥ 0`) on a single vertex.
    pub fn degree(&self) -> usize {
        let mut counts: HashMap<VertexId, usize> = HashMap::new();
        for l in 1..self.levels.len() {
            for face in &self.levels[l] {
                for v in face.vertices() {
                    *counts.entry(*v).or_default() += 1;
                }
            }
        }
        counts.values().copied().max().unwrap_or(0)
    }

    /// Downward closed and pure: every face lies in a top face and every
    /// facet of a face is present.
    pub fn check_closure(&self) -> bool {
        for l in 1..self.levels.len() {
            for face in &self.levels[l] {
                if face.facets().any(|ft| !self.index[l - 1].contains_key(&ft)) {
                    return false;
                }
            }
        }
        for l in 0..self.levels.len().saturating_sub(1) {
            if self.cofaces[l].iter().any(Vec::is_empty) {
                return false;
            }
        }
        self.levels[0].len() == 1 && self.levels[0][0].is_empty()
    }
}

/// A pure complex with a positive top-face distribution and the weights it
/// induces on every level.
#[derive(Clone, Debug)]
pub struct WeightedComplex {
    complex: PureComplex,
    weights: Vec<Vec<Rational>>,
    labels: Arc<Vec<String>>,
}

fn default_labels(tops: &[Face]) -> Vec<String> {
    let max = tops
        .iter()
        .flat_map(|t| t.vertices().iter().copied())
        .max()
        .map_or(0, |m| m as usize + 1);
    (0..max).map(|i| i.to_string()).collect()
}

impl WeightedComplex {
    /// Builds the closure of `tops` with vertex labels `0, 1, ...`.
    /// `weights`, when given, is aligned with `tops`.
    pub fn from_top_faces(tops: &[Vec<VertexId>], weights: Option<&[Rational]>) -> Result<Self> {
        let faces = tops
            .iter()
            .map(|t| Face::new(t.clone()))
            .collect::<Result<Vec<_>>>()?;
        let labels = default_labels(&faces);
        Self::build(Arc::new(labels), &faces, weights)
    }

    /// Like [`from_top_faces`](Self::from_top_faces) with explicit labels;
    /// vertex id `i` is `labels[i]`.
    pub fn with_labels(labels: Vec<String>, tops: &[Face], weights: Option<&[Rational]>) -> Result<Self> {
        Self::build(Arc::new(labels), tops, weights)
    }

    fn build(labels: Arc<Vec<String>>, tops: &[Face], weights: Option<&[Rational]>) -> Result<Self> {
        if let Some(v) = tops
            .iter()
            .flat_map(|t| t.vertices().iter())
            .find(|v| **v as usize >= labels.len())
        {
            return Err(Error::InvalidFace(format!("vertex id {v} has no label")));
        }
        let complex = PureComplex::from_tops(tops)?;
        let n = tops.len();
        let pi: Vec<Rational> = match weights {
            Some(w) => {
                if w.len() != n {
                    return Err(Error::BadDistribution(format!(
                        "{} weights for {n} top faces",
                        w.len()
                    )));
                }
                if w.iter().any(|x| x <= &Rational::zero()) {
                    return Err(Error::BadDistribution("weights must be positive".into()));
                }
                let sum: Rational = w.iter().sum();
                if !sum.is_one() {
                    return Err(Error::BadDistribution(format!("weights sum to {sum}, not 1")));
                }
                w.to_vec()
            }
            None => vec![Rational::new(BigInt::one(), BigInt::from(n)); n],
        };
        let d = complex.dim();
        let mut weights: Vec<Vec<Rational>> = (-1..=d)
            .map(|i| vec![Rational::zero(); complex.num_faces(i)])
            .collect();
        let top_level = (d + 1) as usize;
        for (t, p) in tops.iter().zip(pi) {
            weights[top_level][complex.index_of(t).expect("top present")] = p;
        }
        for i in (-1..d).rev() {
            let l = (i + 1) as usize;
            let factor = Rational::new(BigInt::one(), BigInt::from(i + 2));
            for j in 0..complex.num_faces(i) {
                let s: Rational = complex
                    .cofaces_of(i, j)
                    .iter()
                    .map(|&c| &weights[l + 1][c])
                    .sum();
                weights[l][j] = s * &factor;
            }
        }
        Ok(WeightedComplex {
            complex,
            weights,
            labels,
        })
    }

    pub fn complex(&self) -> &PureComplex {
        &self.complex
    }

    pub fn dim(&self) -> isize {
        self.complex.dim()
    }

    pub fn faces(&self, i: isize) -> &[Face] {
        self.complex.faces(i)
    }

    pub fn num_faces(&self, i: isize) -> usize {
        self.complex.num_faces(i)
    }

    pub fn index_of(&self, face: &Face) -> Option<usize> {
        self.complex.index_of(face)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_face(&self, face: &Face) -> Vec<String> {
        face.vertices()
            .iter()
            .map(|v| self.labels[*v as usize].clone())
            .collect()
    }

    pub fn face_from_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<Face> {
        let ids = labels
            .iter()
            .map(|s| {
                self.labels
                    .iter()
                    .position(|l| l == s.as_ref())
                    .map(|p| p as VertexId)
                    .ok_or_else(|| Error::FaceNotInComplex(format!("unknown vertex {:?}", s.as_ref())))
            })
            .collect::<Result<Vec<_>>>()?;
        Face::new(ids)
    }

    /// Weights of `X(i)`, aligned with [`faces`](Self::faces).
    pub fn weights(&self, i: isize) -> &[Rational] {
        if i < -1 || i > self.dim() {
            return &[];
        }
        &self.weights[(i + 1) as usize]
    }

    pub fn weight(&self, face: &Face) -> Option<&Rational> {
        self.index_of(face).map(|j| &self.weights[(face.dim() + 1) as usize][j])
    }

    /// The top-face distribution Π.
    pub fn top_distribution(&self) -> &[Rational] {
        self.weights(self.dim())
    }

    /// Closed form `w(τ) = Σ_{σ ⊇ τ top} Π(σ) / C(d+1, |τ|)`; agrees with the
    /// level recursion.
    pub fn closed_form_weight(&self, face: &Face) -> Rational {
        let d = self.dim();
        let sum: Rational = self
            .faces(d)
            .iter()
            .zip(self.top_distribution())
            .filter(|(t, _)| face.is_subset_of(t))
            .map(|(_, p)| p)
            .sum();
        sum / Rational::from_integer(binomial((d + 1) as u64, face.len() as u64))
    }

    /// Face weights in the link of `tau` via
    /// `w_τ(σ) = w(σ ∪ τ) / (C(|σ|+|τ|, |τ|) · w(τ))`.
    pub fn link_weight_closed_form(&self, tau: &Face, sigma: &Face) -> Option<Rational> {
        let joint = self.weight(&sigma.union(tau))?;
        let base = self.weight(tau)?;
        let c = binomial((sigma.len() + tau.len()) as u64, tau.len() as u64);
        Some(joint / (Rational::from_integer(c) * base))
    }

    /// `E_{X(k)}[f] = Σ w(σ) f(σ)`.
    pub fn expectation(&self, k: isize, values: &[Rational]) -> Result<Rational> {
        let w = self.weights(k);
        if w.len() != values.len() {
            return Err(Error::DimensionMismatch(format!(
                "cochain has {} values, X({k}) has {} faces",
                values.len(),
                w.len()
            )));
        }
        Ok(w.iter().zip(values).map(|(a, b)| a * b).sum())
    }

    pub fn degree(&self) -> usize {
        self.complex.degree()
    }

    /// All faces of dimension `≤ i`, with `X(i)` weighted by `w_i`.
    pub fn skeleton(&self, i: isize) -> Result<WeightedComplex> {
        if i < -1 || i > self.dim() {
            return Err(Error::out_of_range("skeleton dimension", i as i64, -1, self.dim() as i64));
        }
        if i == self.dim() {
            return Ok(self.clone());
        }
        Self::build(self.labels.clone(), self.faces(i), Some(self.weights(i)))
    }

    /// The weighted link of `tau`.
    pub fn link(&self, tau: &Face) -> Result<Link> {
        if !self.complex.contains(tau) {
            return Err(Error::FaceNotInComplex(tau.to_string()));
        }
        if tau.is_empty() {
            return Ok(Link {
                tau: tau.clone(),
                complex: self.clone(),
            });
        }
        let d = self.dim();
        let mut tops = Vec::new();
        let mut pis = Vec::new();
        for (t, p) in self.faces(d).iter().zip(self.top_distribution()) {
            if tau.is_subset_of(t) {
                tops.push(t.difference(tau));
                pis.push(p.clone());
            }
        }
        let total: Rational = pis.iter().sum();
        let pis: Vec<Rational> = pis.into_iter().map(|p| p / &total).collect();
        let complex = Self::build(self.labels.clone(), &tops, Some(&pis))?;
        Ok(Link {
            tau: tau.clone(),
            complex,
        })
    }

    /// `f^τ(σ) = f(σ ∪ τ)` for `σ ∈ X_τ(k − dim τ − 1)`.
    pub fn restrict_cochain<T: Clone>(&self, k: isize, values: &[T], link: &Link) -> Result<Vec<T>> {
        let i = link.tau.dim();
        if k <= i {
            return Err(Error::DimensionMismatch(format!(
                "cannot restrict a {k}-cochain to a {i}-face"
            )));
        }
        if values.len() != self.num_faces(k) {
            return Err(Error::DimensionMismatch(format!(
                "cochain has {} values, X({k}) has {} faces",
                values.len(),
                self.num_faces(k)
            )));
        }
        let level = k - i - 1;
        link.complex
            .faces(level)
            .iter()
            .map(|sigma| {
                let j = self
                    .index_of(&sigma.union(&link.tau))
                    .ok_or_else(|| Error::FaceNotInComplex(sigma.union(&link.tau).to_string()))?;
                Ok(values[j].clone())
            })
            .collect()
    }

    /// Checks the level-sum and recursion invariants exactly.
    pub fn check_weights(&self) -> bool {
        let d = self.dim();
        for i in -1..=d {
            let s: Rational = self.weights(i).iter().sum();
            if !s.is_one() {
                return false;
            }
        }
        for i in -1..d {
            let factor = Rational::new(BigInt::one(), BigInt::from(i + 2));
            for j in 0..self.num_faces(i) {
                let s: Rational = self
                    .complex
                    .cofaces_of(i, j)
                    .iter()
                    .map(|&c| &self.weights(i + 1)[c])
                    .sum();
                if s * &factor != self.weights(i)[j] {
                    return false;
                }
            }
        }
        true
    }
}

/// The weighted link `X_τ`, itself a weighted complex over the same vertex ids.
#[derive(Clone, Debug)]
pub struct Link {
    pub tau: Face,
    pub complex: WeightedComplex,
}

pub(crate) fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn f(v: &[u32]) -> Face {
        Face::new(v.to_vec()).unwrap()
    }

    fn triangle() -> WeightedComplex {
        WeightedComplex::from_top_faces(&[vec![0, 1, 2]], None).unwrap()
    }

    fn complete_2_on_4() -> WeightedComplex {
        WeightedComplex::from_top_faces(&[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]], None)
            .unwrap()
    }

    #[test]
    fn single_triangle_weights() {
        let x = triangle();
        assert_eq!(x.complex().total_faces(), 8);
        assert_eq!(x.weight(&f(&[0, 1, 2])).unwrap(), &ratio(1, 1));
        for e in x.faces(1) {
            assert_eq!(x.weight(e).unwrap(), &ratio(1, 3));
        }
        for v in x.faces(0) {
            assert_eq!(x.weight(v).unwrap(), &ratio(1, 3));
        }
        assert_eq!(x.weight(&Face::empty()).unwrap(), &ratio(1, 1));
        assert!(x.check_weights());
    }

    #[test]
    fn two_triangles_weighted() {
        // a=0 b=1 c=2 d=3; tops abc:1/2, abd:1/2
        let x = WeightedComplex::from_top_faces(&[vec![0, 1, 2], vec![0, 1, 3]], Some(&[ratio(1, 2), ratio(1, 2)]))
            .unwrap();
        assert_eq!(x.weight(&f(&[0, 1])).unwrap(), &ratio(1, 3));
        for e in [[0, 2], [1, 2], [0, 3], [1, 3]] {
            assert_eq!(x.weight(&f(&e)).unwrap(), &ratio(1, 6));
        }
        assert_eq!(x.weight(&f(&[0])).unwrap(), &ratio(1, 3));
        assert_eq!(x.weight(&f(&[1])).unwrap(), &ratio(1, 3));
        assert_eq!(x.weight(&f(&[2])).unwrap(), &ratio(1, 6));
        assert_eq!(x.weight(&f(&[3])).unwrap(), &ratio(1, 6));
        assert!(x.check_weights());
    }

    #[test]
    fn mixed_sizes_not_pure() {
        let err = WeightedComplex::from_top_faces(&[vec![0, 1, 2], vec![2, 3]], None).unwrap_err();
        assert!(matches!(err, Error::NotPure(_)));
    }

    #[test]
    fn bad_distributions() {
        let tops = [vec![0, 1], vec![1, 2]];
        let e = WeightedComplex::from_top_faces(&tops, Some(&[ratio(1, 2), ratio(1, 3)])).unwrap_err();
        assert!(matches!(e, Error::BadDistribution(_)));
        let e = WeightedComplex::from_top_faces(&tops, Some(&[ratio(1, 1), ratio(0, 1)])).unwrap_err();
        assert!(matches!(e, Error::BadDistribution(_)));
        assert!(matches!(
            WeightedComplex::from_top_faces(&[vec![0, 0]], None).unwrap_err(),
            Error::InvalidFace(_)
        ));
    }

    #[test]
    fn skeletons() {
        let k3 = triangle().skeleton(1).unwrap();
        assert_eq!(k3.dim(), 1);
        assert_eq!(k3.num_faces(1), 3);
        assert!(k3.weights(1).iter().all(|w| w == &ratio(1, 3)));
        let x = complete_2_on_4();
        assert_eq!(x.skeleton(2).unwrap().num_faces(2), 4);
        let k4 = x.skeleton(1).unwrap();
        assert_eq!(k4.num_faces(1), 6);
        assert!(k4.weights(1).iter().all(|w| w == &ratio(1, 6)));
        assert!(matches!(x.skeleton(3), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn links() {
        let x = complete_2_on_4();
        let la = x.link(&f(&[0])).unwrap();
        assert_eq!(la.complex.dim(), 1);
        assert_eq!(la.complex.faces(0), &[f(&[1]), f(&[2]), f(&[3])]);
        assert!(la.complex.weights(1).iter().all(|w| w == &ratio(1, 3)));
        let l0 = x.link(&Face::empty()).unwrap();
        assert_eq!(l0.complex.weights(0), x.weights(0));
        let t = triangle();
        let lab = t.link(&f(&[0, 1])).unwrap();
        assert_eq!(lab.complex.dim(), 0);
        assert_eq!(lab.complex.faces(0), &[f(&[2])]);
        assert_eq!(lab.complex.weights(0), &[ratio(1, 1)]);
        assert!(matches!(t.link(&f(&[0, 3])), Err(Error::FaceNotInComplex(_))));
    }

    #[test]
    fn degrees() {
        assert_eq!(triangle().degree(), 4);
        assert_eq!(WeightedComplex::from_top_faces(&[vec![0, 1]], None).unwrap().degree(), 2);
        assert_eq!(complete_2_on_4().degree(), 7);
    }

    #[test]
    fn restriction() {
        let t = triangle();
        let ind_ab: Vec<u8> = t.faces(1).iter().map(|e| u8::from(e == &f(&[0, 1]))).collect();
        let la = t.link(&f(&[0])).unwrap();
        let r = t.restrict_cochain(1, &ind_ab, &la).unwrap();
        let expect: Vec<u8> = la.complex.faces(0).iter().map(|v| u8::from(v == &f(&[1]))).collect();
        assert_eq!(r, expect);
        let ones = vec![1u8; 3];
        assert_eq!(t.restrict_cochain(1, &ones, &la).unwrap(), vec![1, 1]);
        assert!(matches!(
            t.restrict_cochain(0, &[1u8, 1, 1], &la),
            Err(Error::DimensionMismatch(_))
        ));

        let x = complete_2_on_4();
        let vals: Vec<Rational> = (0..6).map(|i| ratio(i, 7)).collect();
        let la = x.link(&f(&[0])).unwrap();
        let r = x.restrict_cochain(1, &vals, &la).unwrap();
        for (sigma, val) in la.complex.faces(0).iter().zip(&r) {
            let j = x.index_of(&sigma.with_vertex(0)).unwrap();
            assert_eq!(val, &vals[j]);
        }
    }

    #[test]
    fn closed_form_uses_level_binomial() {
        let x = WeightedComplex::from_top_faces(
            &[vec![0, 1, 2], vec![0, 1, 3], vec![1, 2, 3]],
            Some(&[ratio(1, 2), ratio(1, 3), ratio(1, 6)]),
        )
        .unwrap();
        for i in -1..=2 {
            for face in x.faces(i) {
                assert_eq!(&x.closed_form_weight(face), x.weight(face).unwrap());
            }
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(4, 0), BigInt::from(1));
        assert_eq!(binomial(3, 4), BigInt::from(0));
    }
}
