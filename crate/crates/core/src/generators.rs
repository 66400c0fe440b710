//! Reference instances and a small `name(args)` expression language for
//! naming them.

use rand::Rng;

use crate::complex::{Face, VertexId, WeightedComplex};
use crate::error::{Error, Result};
use crate::io::Instance;
use crate::matroid::Matroid;
use crate::walks::rng_for;

const RANDOM_RETRIES: u64 = 64;

fn k_subsets(n: u32, k: usize) -> Vec<Vec<VertexId>> {
    fn rec(start: u32, n: u32, k: usize, cur: &mut Vec<VertexId>, out: &mut Vec<Vec<VertexId>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            if (n - v) as usize >= k - cur.len() {
                cur.push(v);
                rec(v + 1, n, k, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Every `(d+1)`-subset of `n` vertices.
pub fn complete_complex(n: usize, d: usize) -> Result<WeightedComplex> {
    if d + 1 > n {
        return Err(Error::BadParams(format!("complete-complex needs n > d, got n={n}, d={d}")));
    }
    WeightedComplex::from_top_faces(&k_subsets(n as u32, d + 1), None)
}

/// The full `d`-simplex on `d+1` vertices.
pub fn simplex(d: usize) -> Result<WeightedComplex> {
    complete_complex(d + 1, d)
}

/// Boundary of the `n`-simplex: all `n`-subsets of `n+1` vertices.
pub fn simplex_boundary(n: usize) -> Result<WeightedComplex> {
    if n == 0 {
        return Err(Error::BadParams("simplex-boundary needs n ≥ 1".into()));
    }
    WeightedComplex::from_top_faces(&k_subsets(n as u32 + 1, n), None)
}

/// The 7-vertex triangulated torus: triangles `{i, i+1, i+3}` and
/// `{i, i+2, i+3}` mod 7.
pub fn torus7() -> WeightedComplex {
    let tops: Vec<Vec<VertexId>> = (0..7u32)
        .flat_map(|i| [vec![i, (i + 1) % 7, (i + 3) % 7], vec![i, (i + 2) % 7, (i + 3) % 7]])
        .collect();
    WeightedComplex::from_top_faces(&tops, None).expect("valid triangulation")
}

/// One vertex from each part.
pub fn complete_multipartite(parts: &[usize]) -> Result<WeightedComplex> {
    if parts.is_empty() || parts.contains(&0) {
        return Err(Error::BadParams("complete-multipartite needs non-empty parts".into()));
    }
    let mut offsets = Vec::with_capacity(parts.len());
    let mut next = 0u32;
    for &p in parts {
        offsets.push(next);
        next += p as u32;
    }
    let mut tops: Vec<Vec<VertexId>> = vec![Vec::new()];
    for (&p, &o) in parts.iter().zip(&offsets) {
        tops = tops
            .into_iter()
            .flat_map(|t| {
                (0..p as u32).map(move |v| {
                    let mut t = t.clone();
                    t.push(o + v);
                    t
                })
            })
            .collect();
    }
    WeightedComplex::from_top_faces(&tops, None)
}

/// Edge list of a named graph: `K<n>`, `C<n>`, `P<n>`, `triangle`.
pub fn named_graph(name: &str) -> Result<(usize, Vec<(usize, usize)>)> {
    let bad = || Error::BadParams(format!("unknown graph {name:?}; use K<n>, C<n>, P<n> or triangle"));
    if name == "triangle" {
        return named_graph("K3");
    }
    let (kind, n) = name.split_at(1.min(name.len()));
    let n: usize = n.parse().map_err(|_| bad())?;
    let edges = match kind {
        "K" => (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect(),
        "C" if n >= 3 => (0..n).map(|a| (a.min((a + 1) % n), a.max((a + 1) % n))).collect(),
        "P" if n >= 2 => (0..n - 1).map(|a| (a, a + 1)).collect(),
        _ => return Err(bad()),
    };
    Ok((n, edges))
}

/// Each `(d+1)`-subset of `n` vertices is kept with probability `p`;
/// empty draws are resampled.
pub fn random_pure(n: usize, d: usize, p: f64, seed: u64) -> Result<WeightedComplex> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::BadParams(format!("probability {p} outside (0, 1]")));
    }
    let all = k_subsets(n as u32, d + 1);
    if all.is_empty() {
        return Err(Error::BadParams(format!("no {}-subsets of {n} vertices", d + 1)));
    }
    for attempt in 0..RANDOM_RETRIES {
        let mut rng = rng_for(seed, attempt);
        let tops: Vec<Vec<VertexId>> = all.iter().filter(|_| rng.gen_bool(p)).cloned().collect();
        if !tops.is_empty() {
            return relabel_dense(&tops);
        }
    }
    Err(Error::BadParams(format!("no non-empty sample after {RANDOM_RETRIES} attempts")))
}

/// Renumbers the used vertices to `0..m` while keeping their order.
fn relabel_dense(tops: &[Vec<VertexId>]) -> Result<WeightedComplex> {
    let mut used: Vec<VertexId> = tops.iter().flatten().copied().collect();
    used.sort_unstable();
    used.dedup();
    let faces = tops
        .iter()
        .map(|t| Face::new(t.iter().map(|v| used.binary_search(v).expect("used") as VertexId).collect()))
        .collect::<Result<Vec<_>>>()?;
    let labels = used.iter().map(|v| v.to_string()).collect();
    WeightedComplex::with_labels(labels, &faces, None)
}

/// Splits `name(a, b, ...)` into the name and its raw arguments.
fn split_call(expr: &str) -> Result<(&str, Vec<&str>)> {
    let expr = expr.trim();
    match expr.find('(') {
        None => Ok((expr, Vec::new())),
        Some(open) => {
            let inner = expr[open + 1..]
                .strip_suffix(')')
                .ok_or_else(|| Error::Parse(format!("unbalanced parentheses in {expr:?}")))?;
            let args = if inner.trim().is_empty() {
                Vec::new()
            } else {
                inner.split(',').map(str::trim).collect()
            };
            Ok((expr[..open].trim(), args))
        }
    }
}

fn nums<T: std::str::FromStr>(name: &str, args: &[&str], arity: usize) -> Result<Vec<T>> {
    if args.len() != arity {
        return Err(Error::BadParams(format!("{name} takes {arity} arguments, got {}", args.len())));
    }
    args.iter()
        .map(|a| a.parse().map_err(|_| Error::Parse(format!("bad argument {a:?} to {name}"))))
        .collect()
}

/// Evaluates a generator expression such as `complete-complex(4,2)`.
pub fn generate(expr: &str) -> Result<Instance> {
    let (name, args) = split_call(expr)?;
    let complex = |x: Result<WeightedComplex>| x.map(Instance::Complex);
    match name {
        "complete-complex" => {
            let a: Vec<usize> = nums(name, &args, 2)?;
            complex(complete_complex(a[0], a[1]))
        }
        "simplex-boundary" => complex(simplex_boundary(nums::<usize>(name, &args, 1)?[0])),
        "simplex" => complex(simplex(nums::<usize>(name, &args, 1)?[0])),
        "full-2-simplex" => complex(simplex(2)),
        "torus7" => {
            nums::<usize>(name, &args, 0)?;
            Ok(Instance::Complex(torus7()))
        }
        "complete-multipartite" => {
            let parts: Vec<usize> = nums(name, &args, args.len())?;
            complex(complete_multipartite(&parts))
        }
        "random-pure" => {
            if args.len() != 4 {
                return Err(Error::BadParams("random-pure takes (n, d, p, seed)".into()));
            }
            let n: Vec<usize> = nums(name, &args[..2], 2)?;
            let p: Vec<f64> = nums(name, &args[2..3], 1)?;
            let s: Vec<u64> = nums(name, &args[3..], 1)?;
            complex(random_pure(n[0], n[1], p[0], s[0]))
        }
        "uniform-matroid" | "uniform" => {
            let a: Vec<usize> = nums(name, &args, 2)?;
            Ok(Instance::Matroid(Matroid::uniform(a[0], a[1])?))
        }
        "graphic" => {
            if args.len() != 1 {
                return Err(Error::BadParams("graphic takes one graph name".into()));
            }
            let (n, edges) = named_graph(args[0])?;
            Ok(Instance::Matroid(Matroid::graphic(n, edges)?))
        }
        _ => Err(Error::Parse(format!("unknown generator {name:?}"))),
    }
}
