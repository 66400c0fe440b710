//! Weighted graphs, their random-walk spectra and Cheeger constants, and
//! certification of local spectral expansion over the links of a complex.

use std::collections::VecDeque;

use nalgebra::DMatrix;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::complex::{Face, VertexId, WeightedComplex};
use crate::error::{Error, Result};
use crate::par;
use crate::rational::{frac_lt, to_f64, Rational, Scaled};

/// Tolerance for eigenvalue comparisons.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Largest matrix handed to the dense eigensolver.
pub const MAX_DENSE: usize = 4096;
/// Default vertex cap for exhaustive cut enumeration.
pub const DEFAULT_CUT_CAP: usize = 24;

/// A graph with edge weights summing to one and vertex weights
/// `w(v) = ½ Σ_{e ∋ v} w(e)`.
#[derive(Clone, Debug)]
pub struct WeightedGraph {
    ids: Vec<VertexId>,
    vertex_weights: Vec<Rational>,
    edges: Vec<(usize, usize, Rational)>,
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl WeightedGraph {
    /// Builds a graph on vertices `0..n`. Edge weights must be positive and
    /// are normalised to sum to one. Self-loops, parallel edges and isolated
    /// vertices are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize, Rational)]) -> Result<Self> {
        let ids = (0..n as VertexId).collect();
        Self::build(ids, edges)
    }

    fn build(ids: Vec<VertexId>, edges: &[(usize, usize, Rational)]) -> Result<Self> {
        let n = ids.len();
        if edges.is_empty() {
            return Err(Error::InvalidGraph("no edges".into()));
        }
        let total: Rational = edges.iter().map(|e| &e.2).sum();
        let mut adjacency = vec![Vec::new(); n];
        let mut norm_edges = Vec::with_capacity(edges.len());
        for (k, (u, v, w)) in edges.iter().enumerate() {
            let (u, v) = ((*u).min(*v), (*u).max(*v));
            if v >= n {
                return Err(Error::InvalidGraph(format!("edge endpoint {v} out of range")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at {u}")));
            }
            if w <= &Rational::zero() {
                return Err(Error::InvalidGraph("edge weights must be positive".into()));
            }
            if adjacency[u].iter().any(|&(x, _)| x == v) {
                return Err(Error::InvalidGraph(format!("parallel edge {u}-{v}")));
            }
            adjacency[u].push((v, k));
            adjacency[v].push((u, k));
            norm_edges.push((u, v, w / &total));
        }
        if let Some(v) = adjacency.iter().position(Vec::is_empty) {
            return Err(Error::InvalidGraph(format!("isolated vertex {v}")));
        }
        let half = Rational::new(1.into(), 2.into());
        let vertex_weights = adjacency
            .iter()
            .map(|adj| adj.iter().map(|&(_, k)| &norm_edges[k].2).sum::<Rational>() * &half)
            .collect();
        Ok(WeightedGraph {
            ids,
            vertex_weights,
            edges: norm_edges,
            adjacency,
        })
    }

    /// The weighted 1-skeleton of a complex of dimension at least one.
    pub fn from_complex(x: &WeightedComplex) -> Result<Self> {
        if x.dim() < 1 {
            return Err(Error::WrongDimension {
                expected: 1,
                actual: x.dim(),
            });
        }
        let ids: Vec<VertexId> = x.faces(0).iter().map(|f| f.vertices()[0]).collect();
        let edges: Vec<(usize, usize, Rational)> = x
            .faces(1)
            .iter()
            .zip(x.weights(1))
            .map(|(e, w)| {
                let local = |v: VertexId| ids.binary_search(&v).expect("edge vertex present");
                (local(e.vertices()[0]), local(e.vertices()[1]), w.clone())
            })
            .collect();
        Self::build(ids, &edges)
    }

    pub fn num_vertices(&self) -> usize {
        self.ids.len()
    }

    pub fn vertex_ids(&self) -> &[VertexId] {
        &self.ids
    }

    pub fn vertex_weights(&self) -> &[Rational] {
        &self.vertex_weights
    }

    pub fn edges(&self) -> &[(usize, usize, Rational)] {
        &self.edges
    }

    /// Exact rows of `A[v,u] = w({v,u}) / (2 w(v))`.
    pub fn transition(&self) -> Vec<Vec<(usize, Rational)>> {
        self.adjacency
            .iter()
            .enumerate()
            .map(|(v, adj)| {
                let denom = &self.vertex_weights[v] * Rational::from_integer(2.into());
                let mut row: Vec<(usize, Rational)> =
                    adj.iter().map(|&(u, k)| (u, &self.edges[k].2 / &denom)).collect();
                row.sort_by_key(|(u, _)| *u);
                row
            })
            .collect()
    }

    pub fn is_stochastic(&self) -> bool {
        self.transition()
            .iter()
            .all(|row| row.iter().map(|(_, a)| a).sum::<Rational>().is_one())
    }

    /// `(A f)(v)` in floating point.
    pub fn apply(&self, values: &[f64]) -> Vec<f64> {
        self.transition()
            .iter()
            .map(|row| row.iter().map(|(u, a)| to_f64(a) * values[*u]).sum())
            .collect()
    }

    /// `⟨f, g⟩_w = Σ w(v) f(v) g(v)`.
    pub fn inner(&self, f: &[f64], g: &[f64]) -> f64 {
        self.vertex_weights
            .iter()
            .zip(f.iter().zip(g))
            .map(|(w, (a, b))| to_f64(w) * a * b)
            .sum()
    }

    /// Exact traversal.
    pub fn is_connected(&self) -> bool {
        let n = self.num_vertices();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &(u, _) in &self.adjacency[v] {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    queue.push_back(u);
                }
            }
        }
        count == n
    }

    /// Spectrum of `A` through the conjugate `S = W^{1/2} A W^{-1/2}`.
    pub fn eigen(&self) -> Result<Spectrum> {
        let n = self.num_vertices();
        if n > MAX_DENSE {
            return Err(Error::TooLarge(format!("{n} vertices exceeds dense cap {MAX_DENSE}")));
        }
        let w: Vec<f64> = self.vertex_weights.iter().map(to_f64).collect();
        let mut s = DMatrix::<f64>::zeros(n, n);
        for (u, v, we) in &self.edges {
            let val = to_f64(we) / (2.0 * (w[*u] * w[*v]).sqrt());
            s[(*u, *v)] = val;
            s[(*v, *u)] = val;
        }
        let scale: Vec<f64> = w.iter().map(|x| 1.0 / x.sqrt()).collect();
        symmetric_spectrum(s, Some(&scale))
    }

    pub fn lambda2(&self) -> Result<f64> {
        Ok(self.eigen()?.lambda2())
    }

    /// Weight of the edges with exactly one endpoint in `mask`.
    fn cut_numer(&self, scaled: &Scaled, mask: u64) -> u64 {
        self.edges
            .iter()
            .zip(&scaled.numers)
            .filter(|((u, v, _), _)| ((mask >> u) ^ (mask >> v)) & 1 == 1)
            .map(|(_, w)| *w)
            .sum()
    }

    fn check_cap(&self, cap: usize) -> Result<()> {
        let n = self.num_vertices();
        if n > cap || n > 63 {
            return Err(Error::TooLarge(format!(
                "{n} vertices exceeds cut-enumeration cap {}",
                cap.min(63)
            )));
        }
        Ok(())
    }

    /// Exact Cheeger constant
    /// `min_S ‖δ1_S‖ / min(‖1_S‖, ‖1_{V∖S}‖)` by exhaustive enumeration.
    pub fn cheeger(&self, cap: usize) -> Result<Rational> {
        self.check_cap(cap)?;
        let n = self.num_vertices();
        let ew = Scaled::new(&self.edges.iter().map(|e| e.2.clone()).collect::<Vec<_>>())?;
        let vw = Scaled::new(&self.vertex_weights)?;
        let vtotal = vw.total();
        // Subsets avoiding the last vertex enumerate each cut exactly once.
        let half = 1u64 << (n - 1);
        let best = par::fold_chunks(
            1..half,
            1 << 12,
            |range| {
                let mut best: Option<(u64, u64)> = None;
                for mask in range {
                    let cut = self.cut_numer(&ew, mask);
                    let vol = mask_sum(&vw.numers, mask);
                    let m = vol.min(vtotal - vol);
                    if best.is_none_or(|(c, d)| frac_lt(cut, m, c, d)) {
                        best = Some((cut, m));
                    }
                }
                best
            },
            |a, b| match (a, b) {
                (Some((c1, d1)), Some((c2, d2))) => {
                    if frac_lt(c2, d2, c1, d1) {
                        Some((c2, d2))
                    } else {
                        Some((c1, d1))
                    }
                }
                (a, None) => a,
                (None, b) => b,
            },
        )
        .flatten()
        .ok_or_else(|| Error::InvalidGraph("fewer than two vertices".into()))?;
        Ok(ew.to_rational(best.0) / vw.to_rational(best.1))
    }

    /// Checks both directions of the weighted Cheeger inequality.
    pub fn check_cheeger_inequalities(&self, cap: usize, tol: f64) -> Result<CheegerReport> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        self.check_cap(cap)?;
        let lambda2 = self.lambda2()?;
        let h = self.cheeger(cap)?;
        let n = self.num_vertices();
        let ew = Scaled::new(&self.edges.iter().map(|e| e.2.clone()).collect::<Vec<_>>())?;
        let vw = Scaled::new(&self.vertex_weights)?;
        let (edenom, vdenom) = (ew.denom as f64, vw.denom as f64);
        let half = 1u64 << (n - 1);
        let (margin, worst_mask) = par::fold_chunks(
            1..half,
            1 << 12,
            |range| {
                let mut worst = (f64::INFINITY, 0u64);
                for mask in range {
                    let cut = self.cut_numer(&ew, mask) as f64 / edenom;
                    let a = mask_sum(&vw.numers, mask) as f64 / vdenom;
                    let margin = cut - 2.0 * (1.0 - lambda2) * a * (1.0 - a);
                    if margin < worst.0 {
                        worst = (margin, mask);
                    }
                }
                worst
            },
            |a, b| if b.0 < a.0 { b } else { a },
        )
        .unwrap_or((f64::INFINITY, 0));
        let hf = to_f64(&h);
        let upper = (1.0 - hf * hf / 4.0).max(0.0).sqrt();
        let upper_margin = upper - lambda2;
        let worst_set = (0..n)
            .filter(|v| worst_mask >> v & 1 == 1)
            .map(|v| self.ids[v])
            .collect();
        Ok(CheegerReport {
            lambda2,
            h: h.to_string(),
            lower_worst_margin: margin,
            lower_worst_set: worst_set,
            lower_holds: margin >= -tol,
            upper_bound: upper,
            upper_margin,
            upper_holds: upper_margin >= -tol,
        })
    }
}

fn mask_sum(values: &[u64], mask: u64) -> u64 {
    let mut m = mask;
    let mut s = 0;
    while m != 0 {
        let v = m.trailing_zeros() as usize;
        s += values[v];
        m &= m - 1;
    }
    s
}

#[derive(Clone, Debug, Serialize)]
pub struct CheegerReport {
    pub lambda2: f64,
    pub h: String,
    /// `min_A ‖δ1_A‖ − 2(1−λ2)‖1_A‖(1−‖1_A‖)`
    pub lower_worst_margin: f64,
    pub lower_worst_set: Vec<VertexId>,
    pub lower_holds: bool,
    /// `sqrt(1 − h²/4)`
    pub upper_bound: f64,
    pub upper_margin: f64,
    pub upper_holds: bool,
}

impl CheegerReport {
    pub fn passed(&self) -> bool {
        self.lower_holds && self.upper_holds
    }
}

/// Eigenvalues in descending order, optionally with eigenvectors
/// (`eigenvectors[i]` belongs to `eigenvalues[i]`).
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Option<Vec<Vec<f64>>>,
}

impl Spectrum {
    /// Second largest eigenvalue (signed); `0` for a single state.
    pub fn lambda2(&self) -> f64 {
        self.eigenvalues.get(1).copied().unwrap_or(0.0)
    }
}

/// Dense symmetric eigendecomposition, sorted descending. When `scale` is
/// given, eigenvectors are rescaled entrywise (used to map the conjugated
/// problem back to the weighted inner product).
pub(crate) fn symmetric_spectrum(mut s: DMatrix<f64>, scale: Option<&[f64]>) -> Result<Spectrum> {
    let n = s.nrows();
    if n == 0 {
        return Ok(Spectrum {
            eigenvalues: Vec::new(),
            eigenvectors: Some(Vec::new()),
        });
    }
    let st = s.transpose();
    s = (s + st) * 0.5;
    let eig = nalgebra::SymmetricEigen::try_new(s, 1e-15, 100_000)
        .ok_or_else(|| Error::NumericalFailure("symmetric eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let eigenvectors = order
        .iter()
        .map(|&i| {
            let col = eig.eigenvectors.column(i);
            (0..n)
                .map(|r| col[r] * scale.map_or(1.0, |sc| sc[r]))
                .collect()
        })
        .collect();
    Ok(Spectrum {
        eigenvalues,
        eigenvectors: Some(eigenvectors),
    })
}

/// One row of a local-expansion table.
#[derive(Clone, Debug, Serialize)]
pub struct LinkSpectrum {
    pub face: Face,
    pub dim: isize,
    pub lambda2: f64,
    pub connected: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalExpansionReport {
    pub lambda: f64,
    /// Maximum `λ2` over the examined links; `None` when there are none.
    pub gamma: Option<f64>,
    /// `γ_i = max_{τ ∈ X(i)} λ2(X_τ^(1))` for `i = -1, …, d-2`.
    pub gamma_by_level: Vec<(isize, f64)>,
    pub strong: bool,
    pub certified: bool,
    pub links: Vec<LinkSpectrum>,
    pub tolerance: f64,
}

/// `λ2` and connectivity of `X_τ^(1)` for every `τ ∈ X(i)`,
/// `-1 ≤ i ≤ max_level`.
pub fn link_spectra(x: &WeightedComplex, max_level: isize) -> Result<Vec<LinkSpectrum>> {
    let faces: Vec<Face> = (-1..=max_level).flat_map(|i| x.faces(i).iter().cloned()).collect();
    par::map(&faces, |tau| {
        let link = x.link(tau)?;
        let g = WeightedGraph::from_complex(&link.complex)?;
        Ok(LinkSpectrum {
            face: tau.clone(),
            dim: tau.dim(),
            lambda2: g.lambda2()?,
            connected: g.is_connected(),
        })
    })
    .into_iter()
    .collect()
}

pub(crate) fn gamma_by_level(links: &[LinkSpectrum]) -> Vec<(isize, f64)> {
    let mut out: Vec<(isize, f64)> = Vec::new();
    for l in links {
        match out.last_mut() {
            Some((dim, g)) if *dim == l.dim => *g = g.max(l.lambda2),
            _ => out.push((l.dim, l.lambda2)),
        }
    }
    out
}

/// Certifies `X` as a `lambda`-local spectral expander: for every
/// `τ ∈ X(i)`, `-1 ≤ i ≤ d-2`, the link's 1-skeleton must be connected and
/// have `λ2 ≤ lambda + tol`.
pub fn certify_local_spectral(x: &WeightedComplex, lambda: f64, tol: f64) -> Result<LocalExpansionReport> {
    let d = x.dim();
    if d < 0 {
        return Err(Error::out_of_range("dimension", d as i64, 0, i64::MAX));
    }
    let links = link_spectra(x, d - 2)?;
    let gamma = links.iter().map(|l| l.lambda2).reduce(f64::max);
    let certified = links.iter().all(|l| l.connected && l.lambda2 <= lambda + tol);
    let strong = match gamma {
        Some(g) => d >= 1 && g < 1.0 / d as f64,
        None => true,
    };
    Ok(LocalExpansionReport {
        lambda,
        gamma,
        gamma_by_level: gamma_by_level(&links),
        strong,
        certified,
        links,
        tolerance: tol,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TricklingReport {
    /// `max_v` of the local-expansion constant of the vertex link `X_v`.
    pub lambda_vertex: f64,
    /// `λ_vertex / (1 − λ_vertex)`, when `λ_vertex < 1`.
    pub walk_bound: Option<f64>,
    /// `λ2(X^(1))`
    pub global_lambda2: f64,
    pub walk_slack: Option<f64>,
    pub walk_holds: bool,
    /// `min_v (1 − λ2(X_v^(1)))`: smallest nontrivial Laplacian eigenvalue
    /// over vertex links.
    pub laplacian_link_gap: f64,
    /// `2 − 1/gap`, when `gap > 0`.
    pub laplacian_bound: Option<f64>,
    /// `1 − λ2(X^(1))`
    pub global_laplacian_gap: f64,
    pub laplacian_slack: Option<f64>,
    pub laplacian_holds: bool,
}

/// Checks the descent of spectral gaps from vertex links to the 1-skeleton,
/// in walk-operator and Laplacian form.
pub fn trickling_check(x: &WeightedComplex, tol: f64) -> Result<TricklingReport> {
    let d = x.dim();
    if d < 2 {
        return Err(Error::WrongDimension {
            expected: 2,
            actual: d,
        });
    }
    let links = link_spectra(x, d - 2)?;
    if let Some(bad) = links.iter().find(|l| !l.connected) {
        return Err(Error::DisconnectedLink(bad.face.to_string()));
    }
    let global_lambda2 = links[0].lambda2;
    // Links of X_v are the links of X at faces containing v.
    let vertex_links: Vec<(VertexId, f64, f64)> = x
        .faces(0)
        .iter()
        .map(|v| {
            let vid = v.vertices()[0];
            let mut local = f64::NEG_INFINITY;
            let mut skeleton = f64::NEG_INFINITY;
            for l in links.iter().filter(|l| l.dim >= 0 && l.face.contains_vertex(vid)) {
                local = local.max(l.lambda2);
                if l.dim == 0 {
                    skeleton = l.lambda2;
                }
            }
            (vid, local, skeleton)
        })
        .collect();
    let lambda_vertex = vertex_links.iter().map(|t| t.1).fold(f64::NEG_INFINITY, f64::max);
    let walk_bound = (lambda_vertex < 1.0).then(|| lambda_vertex / (1.0 - lambda_vertex));
    let walk_slack = walk_bound.map(|b| b - global_lambda2);
    let gap = vertex_links
        .iter()
        .map(|t| 1.0 - t.2)
        .fold(f64::INFINITY, f64::min);
    let laplacian_bound = (gap > 0.0).then(|| 2.0 - 1.0 / gap);
    let global_gap = 1.0 - global_lambda2;
    let laplacian_slack = laplacian_bound.map(|b| global_gap - b);
    Ok(TricklingReport {
        lambda_vertex,
        walk_bound,
        global_lambda2,
        walk_slack,
        walk_holds: walk_slack.is_none_or(|s| s >= -tol),
        laplacian_link_gap: gap,
        laplacian_bound,
        global_laplacian_gap: global_gap,
        laplacian_slack,
        laplacian_holds: laplacian_slack.is_none_or(|s| s >= -tol),
    })
}
