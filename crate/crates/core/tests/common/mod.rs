//! Instance generators and brute-force oracles shared by the integration
//! tests. The oracles deliberately avoid the library's search code.
#![allow(dead_code)]

use hdx::complex::{VertexId, WeightedComplex};
use hdx::rational::{int, Rational};
use hdx::spectral::WeightedGraph;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Positive integer weights normalised to sum to one.
pub fn random_distribution<R: Rng>(rng: &mut R, n: usize) -> Vec<Rational> {
    let raw: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=6)).collect();
    let total: i64 = raw.iter().sum();
    raw.iter().map(|&a| Rational::new(a.into(), total.into())).collect()
}

/// A random pure complex: `tops` distinct `(d+1)`-subsets of `n` vertices,
/// optionally with random top weights. Vertex ids are compacted.
pub fn random_complex<R: Rng>(rng: &mut R, n: usize, d: usize, tops: usize, weighted: bool) -> WeightedComplex {
    let mut pool: Vec<Vec<VertexId>> = subsets(n, d + 1);
    pool.shuffle(rng);
    pool.truncate(tops.clamp(1, pool.len()));
    let mut used: Vec<VertexId> = pool.iter().flatten().copied().collect();
    used.sort_unstable();
    used.dedup();
    let tops: Vec<Vec<VertexId>> = pool
        .iter()
        .map(|t| t.iter().map(|v| used.binary_search(v).unwrap() as VertexId).collect())
        .collect();
    let w = weighted.then(|| random_distribution(rng, tops.len()));
    WeightedComplex::from_top_faces(&tops, w.as_deref()).unwrap()
}

/// A small random complex with `d ≤ max_d` and `n ≤ max_n`.
pub fn small_complex(seed: u64, max_n: usize, max_d: usize) -> WeightedComplex {
    let mut r = rng(seed);
    let d = r.gen_range(1..=max_d);
    let n = r.gen_range(d + 1..=max_n.max(d + 1));
    let tops = r.gen_range(1..=2 * n);
    let weighted = r.gen_bool(0.5);
    random_complex(&mut r, n, d, tops, weighted)
}

pub fn subsets(n: usize, k: usize) -> Vec<Vec<VertexId>> {
    (0u64..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n as VertexId).filter(|v| m >> v & 1 == 1).collect())
        .collect()
}

/// Random graph on `n` vertices with integer edge weights, no isolated
/// vertices.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Vec<(usize, usize, Rational)> {
    loop {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    edges.push((u, v, int(rng.gen_range(1..=5))));
                }
            }
        }
        let mut deg = vec![0; n];
        for (u, v, _) in &edges {
            deg[*u] += 1;
            deg[*v] += 1;
        }
        if deg.iter().all(|&d| d > 0) {
            return edges;
        }
    }
}

/// Connectivity by depth-first search on an edge list.
pub fn connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for &(a, b) in edges {
            for (x, y) in [(a, b), (b, a)] {
                if x == u && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    seen.iter().all(|&s| s)
}

/// Exact Cheeger constant over all proper vertex subsets, in rationals.
pub fn cheeger_oracle(g: &WeightedGraph) -> Rational {
    let n = g.num_vertices();
    let vw = g.vertex_weights();
    let mut best: Option<Rational> = None;
    for mask in 1u64..(1u64 << n) - 1 {
        let cut: Rational = g
            .edges()
            .iter()
            .filter(|(u, v, _)| (mask >> u & 1) != (mask >> v & 1))
            .map(|e| e.2.clone())
            .sum();
        let vol: Rational = (0..n).filter(|v| mask >> v & 1 == 1).map(|v| vw[v].clone()).sum();
        let rest = Rational::one() - &vol;
        let ratio = cut / vol.min(rest);
        if best.as_ref().is_none_or(|b| ratio < *b) {
            best = Some(ratio);
        }
    }
    best.unwrap()
}

/// Bit-vector cochain on `X(i)` as a plain boolean vector.
pub type Bits = Vec<bool>;

/// `δf` computed from the definition: `(δf)(σ) = Σ_{τ ⊂ σ facet} f(τ)`.
pub fn coboundary_oracle(x: &WeightedComplex, i: isize, f: &[bool]) -> Bits {
    x.faces(i + 1)
        .iter()
        .map(|s| {
            s.facets()
                .filter(|t| f[x.index_of(t).unwrap()])
                .count()
                % 2
                == 1
        })
        .collect()
}

pub fn weighted_norm(x: &WeightedComplex, i: isize, f: &[bool]) -> Rational {
    x.weights(i).iter().zip(f).filter(|(_, b)| **b).map(|(w, _)| w.clone()).sum()
}

pub fn bits_of(n: usize, mask: u64) -> Bits {
    (0..n).map(|j| mask >> j & 1 == 1).collect()
}

pub fn xor(a: &[bool], b: &[bool]) -> Bits {
    a.iter().zip(b).map(|(x, y)| x ^ y).collect()
}

/// All coboundaries at level `i`, as the images of every `(i−1)`-cochain.
pub fn coboundaries_oracle(x: &WeightedComplex, i: isize) -> Vec<Bits> {
    let m = x.num_faces(i - 1);
    assert!(m <= 16, "oracle enumeration too large");
    let mut out: Vec<Bits> = (0u64..1 << m)
        .map(|mask| coboundary_oracle(x, i - 1, &bits_of(m, mask)))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// `h^i` by the definition: min over non-coboundaries of
/// `‖δf‖ / dist(f, B^i)`; `None` means `C^i = B^i` (infinite).
pub fn coboundary_expansion_oracle(x: &WeightedComplex, i: isize) -> Option<Rational> {
    let n = x.num_faces(i);
    assert!(n <= 16, "oracle enumeration too large");
    let b = coboundaries_oracle(x, i);
    let mut best: Option<Rational> = None;
    for mask in 0u64..1 << n {
        let f = bits_of(n, mask);
        let dist = b
            .iter()
            .map(|c| weighted_norm(x, i, &xor(&f, c)))
            .min()
            .unwrap();
        if dist.is_zero() {
            continue;
        }
        let r = weighted_norm(x, i + 1, &coboundary_oracle(x, i, &f)) / dist;
        if best.as_ref().is_none_or(|v| r < *v) {
            best = Some(r);
        }
    }
    best
}

/// Rank over F2 by plain Gaussian elimination on boolean rows.
pub fn rank_oracle(mut rows: Vec<Bits>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][c]) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[c] {
                *row = xor(row, &pivot);
            }
        }
        rank += 1;
    }
    rank
}

/// Rows `X(i+1)`, columns `X(i)` of the coboundary map, from the definition.
pub fn coboundary_rows(x: &WeightedComplex, i: isize) -> Vec<Bits> {
    let n = x.num_faces(i);
    x.faces(i + 1)
        .iter()
        .map(|s| {
            let mut row = vec![false; n];
            for t in s.facets() {
                row[x.index_of(&t).unwrap()] = true;
            }
            row
        })
        .collect()
}

/// `dim H^i = |X(i)| − rank δ_i − rank δ_{i−1}`.
pub fn cohomology_dim_oracle(x: &WeightedComplex, i: isize) -> usize {
    let n = x.num_faces(i);
    let up = if i < x.dim() { rank_oracle(coboundary_rows(x, i)) } else { 0 };
    let down = rank_oracle(coboundary_rows(x, i - 1));
    n - up - down
}

/// Total variation between two distributions given as floats.
pub fn tv(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}
