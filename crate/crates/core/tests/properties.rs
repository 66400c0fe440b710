//! Property tests over seeded random instances.

mod common;

use common::*;
use hdx::codes::{self, css_from_complex};
use hdx::complex::{Face, WeightedComplex};
use hdx::gf2::F2Vec;
use hdx::io::{to_canonical_string, Instance};
use hdx::matroid::{self, Matroid};
use hdx::rational::{to_f64, ExtRational, Rational};
use hdx::spectral::{self, WeightedGraph};
use hdx::topology::{self, F2Cochain};
use hdx::walks::{self, WalkKind};
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::Rng;

const TOL: f64 = 1e-9;
const CAP: u64 = 1 << 22;

fn random_values<R: Rng>(r: &mut R, n: usize) -> Vec<Rational> {
    (0..n).map(|_| rational(r.gen_range(-9..=9), r.gen_range(1..=4))).collect()
}

fn random_bits<R: Rng>(r: &mut R, n: usize) -> Vec<bool> {
    (0..n).map(|_| r.gen_bool(0.5)).collect()
}

fn cochain(x: &WeightedComplex, i: isize, bits: &[bool]) -> F2Cochain {
    F2Cochain::from_bits(x, i, F2Vec::from_bits(bits)).unwrap()
}

fn is_pure_and_closed(x: &WeightedComplex) -> bool {
    let c = x.complex();
    c.check_closure() && (-1..x.dim()).all(|i| (0..c.num_faces(i)).all(|j| !c.cofaces_of(i, j).is_empty()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn levels_are_normalised(seed in any::<u64>()) {
        let x = small_complex(seed, 8, 3);
        for k in -1..=x.dim() {
            prop_assert!(x.weights(k).iter().sum::<Rational>().is_one());
        }
        prop_assert!(x.check_weights());
        for k in 0..=x.dim() {
            for f in x.faces(k) {
                prop_assert_eq!(&x.closed_form_weight(f), x.weight(f).unwrap());
            }
        }
    }

    #[test]
    fn link_weights_match_recursion(seed in any::<u64>()) {
        let x = small_complex(seed, 8, 3);
        let mut r = rng(seed ^ 1);
        let i = r.gen_range(-1..x.dim());
        let tau = x.faces(i)[r.gen_range(0..x.num_faces(i))].clone();
        let link = x.link(&tau).unwrap();
        let lx = &link.complex;
        let top = lx.dim();
        let pi: Vec<Rational> = lx.faces(top).iter().map(|s| x.link_weight_closed_form(&tau, s).unwrap()).collect();
        let rebuilt = WeightedComplex::with_labels(x.labels().to_vec(), lx.faces(top), Some(&pi)).unwrap();
        for k in -1..=top {
            prop_assert_eq!(rebuilt.faces(k), lx.faces(k));
            prop_assert_eq!(rebuilt.weights(k), lx.weights(k));
            for s in lx.faces(k) {
                prop_assert_eq!(&x.link_weight_closed_form(&tau, s).unwrap(), lx.weight(s).unwrap());
            }
        }
    }

    #[test]
    fn expectation_decomposes_over_links(seed in any::<u64>()) {
        let x = small_complex(seed, 8, 3);
        let mut r = rng(seed ^ 2);
        let k = r.gen_range(0..=x.dim());
        let f = random_values(&mut r, x.num_faces(k));
        let total = x.expectation(k, &f).unwrap();
        for i in -1..k {
            let mut acc = Rational::zero();
            for (tau, w) in x.faces(i).iter().zip(x.weights(i)) {
                let link = x.link(tau).unwrap();
                let local = x.restrict_cochain(k, &f, &link).unwrap();
                acc += w * link.complex.expectation(k - i - 1, &local).unwrap();
            }
            prop_assert_eq!(&acc, &total);
        }
    }

    #[test]
    fn constructions_stay_pure(seed in any::<u64>()) {
        let x = small_complex(seed, 8, 3);
        prop_assert!(is_pure_and_closed(&x));
        for i in -1..=x.dim() {
            let s = x.skeleton(i).unwrap();
            prop_assert!(is_pure_and_closed(&s));
            prop_assert!(s.check_weights());
        }
        for i in -1..x.dim() {
            for tau in x.faces(i) {
                let l = x.link(tau).unwrap();
                prop_assert!(is_pure_and_closed(&l.complex));
                prop_assert!(l.complex.check_weights());
                prop_assert_eq!(l.complex.dim(), x.dim() - i - 1);
            }
        }
    }

    #[test]
    fn graph_operator_invariants(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(2..=10);
        let edges = random_graph(&mut r, n, 0.4);
        let g = WeightedGraph::from_edges(n, &edges).unwrap();
        prop_assert!(g.is_stochastic());
        let f: Vec<f64> = (0..n).map(|_| r.gen_range(-1.0..1.0)).collect();
        let h: Vec<f64> = (0..n).map(|_| r.gen_range(-1.0..1.0)).collect();
        prop_assert!((g.inner(&g.apply(&f), &h) - g.inner(&f, &g.apply(&h))).abs() <= TOL);
        let s = g.eigen().unwrap();
        prop_assert!(s.eigenvalues.iter().all(|e| (-1.0 - TOL..=1.0 + TOL).contains(e)));
        prop_assert!((s.eigenvalues[0] - 1.0).abs() <= TOL);
        prop_assert!(g.apply(&vec![1.0; n]).iter().all(|c| (c - 1.0).abs() <= TOL));
        let plain: Vec<(usize, usize)> = edges.iter().map(|e| (e.0, e.1)).collect();
        let conn = connected(n, &plain);
        if conn {
            let v = &s.eigenvectors.as_ref().unwrap()[0];
            prop_assert!(v.iter().all(|c| (c - v[0]).abs() <= 1e-6 * v[0].abs().max(1.0)));
        }
        prop_assert_eq!(g.is_connected(), conn);
        prop_assert_eq!(s.lambda2() < 1.0 - TOL, conn);
    }

    #[test]
    fn cheeger_sandwich(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(2..=9);
        let edges = random_graph(&mut r, n, 0.5);
        let g = WeightedGraph::from_edges(n, &edges).unwrap();
        prop_assume!(g.is_connected());
        let rep = g.check_cheeger_inequalities(spectral::DEFAULT_CUT_CAP, TOL).unwrap();
        prop_assert!(rep.passed());
        prop_assert_eq!(g.cheeger(spectral::DEFAULT_CUT_CAP).unwrap(), cheeger_oracle(&g));
    }

    #[test]
    fn walk_adjointness_and_stationarity(seed in any::<u64>()) {
        let x = small_complex(seed, 7, 3);
        let mut r = rng(seed ^ 3);
        for k in -1..x.dim() {
            let up = walks::up_operator(&x, k).unwrap();
            let down = walks::down_operator(&x, k + 1).unwrap();
            let f = random_values(&mut r, x.num_faces(k));
            let g = random_values(&mut r, x.num_faces(k + 1));
            let lhs = walks::inner(&x, k + 1, &up.matrix.apply(&f), &g);
            let rhs = walks::inner(&x, k, &f, &down.matrix.apply(&g));
            prop_assert_eq!(lhs, rhs);
            prop_assert!(up.matrix.is_row_stochastic() && down.matrix.is_row_stochastic());
        }
        for k in 0..=x.dim() {
            let mut kinds = vec![WalkKind::DownUp];
            if k < x.dim() {
                kinds.push(WalkKind::UpDown);
            }
            for kind in kinds {
                let m = walks::walk_matrix(&x, k, kind).unwrap();
                prop_assert!(m.matrix.is_row_stochastic());
                prop_assert_eq!(&m.matrix.left_apply(x.weights(k)), x.weights(k));
                prop_assert_eq!(&m.matrix.apply(&walks::constant(&x, k, 1)), &walks::constant(&x, k, 1));
            }
        }
    }

    #[test]
    fn up_down_and_down_up_share_spectrum(seed in any::<u64>()) {
        let x = small_complex(seed, 7, 3);
        for k in 1..=x.dim() {
            let plus = walks::walk_matrix(&x, k - 1, WalkKind::UpDown).unwrap().spectrum().unwrap();
            let minus = walks::walk_matrix(&x, k, WalkKind::DownUp).unwrap().spectrum().unwrap();
            let nonzero = |v: &[f64]| v.iter().copied().filter(|e| e.abs() > 1e-7).collect::<Vec<_>>();
            let (a, b) = (nonzero(&plus.eigenvalues), nonzero(&minus.eigenvalues));
            prop_assert_eq!(a.len(), b.len());
            for (p, q) in a.iter().zip(&b) {
                prop_assert!((p - q).abs() <= TOL);
            }
            prop_assert!((plus.lambda2() - minus.lambda2()).abs() <= TOL);
        }
    }

    #[test]
    fn al_bound_holds_on_connected_links(seed in any::<u64>()) {
        let x = small_complex(seed, 7, 3);
        for k in 1..=x.dim() {
            let rep = walks::verify_mixing(&x, k, TOL).unwrap();
            if rep.links_connected {
                prop_assert_eq!(rep.al_holds, Some(true));
            }
        }
    }

    #[test]
    fn ko_bound_holds_for_nonnegative_gamma(seed in any::<u64>()) {
        let x = small_complex(seed, 7, 3);
        let cert = spectral::certify_local_spectral(&x, 1.0, TOL).unwrap();
        prop_assume!(cert.certified && cert.gamma.is_some_and(|g| g >= 0.0));
        let gamma = cert.gamma.unwrap();
        for k in 1..=x.dim() {
            let l2 = walks::walk_matrix(&x, k, WalkKind::DownUp).unwrap().lambda2().unwrap();
            prop_assert!(l2 <= walks::ko_bound(k as usize, gamma) + TOL);
        }
    }

    #[test]
    fn coboundary_squares_to_zero(seed in any::<u64>()) {
        let x = small_complex(seed, 8, 3);
        let mut r = rng(seed ^ 4);
        for i in -1..x.dim() - 1 {
            let a = topology::coboundary_matrix(&x, i).unwrap();
            let b = topology::coboundary_matrix(&x, i + 1).unwrap();
            prop_assert!(b.mul(&a).is_zero());
            let bits = random_bits(&mut r, x.num_faces(i));
            let f = cochain(&x, i, &bits);
            let df = topology::coboundary(&x, &f).unwrap();
            prop_assert_eq!(df.bits.to_bits(), coboundary_oracle(&x, i, &bits));
            prop_assert!(topology::coboundary(&x, &df).unwrap().is_zero());
        }
    }

    #[test]
    fn euler_characteristic_and_betti(seed in any::<u64>()) {
        let x = small_complex(seed, 8, 3);
        let s = topology::spaces(&x).unwrap();
        let (chain, hom) = topology::euler_characteristics(&x, &s);
        prop_assert_eq!(chain, hom);
        for i in 0..=x.dim() {
            prop_assert_eq!(s.level(i).dim_h(), cohomology_dim_oracle(&x, i));
        }
    }

    #[test]
    fn restriction_and_coboundary(seed in any::<u64>()) {
        let x = small_complex(seed, 7, 3);
        let mut r = rng(seed ^ 5);
        for k in 0..x.dim() {
            for i in 0..k {
                for sigma in x.faces(i) {
                    let link = x.link(sigma).unwrap();
                    let lx = &link.complex;
                    let bits = random_bits(&mut r, x.num_faces(k));
                    let df = coboundary_oracle(&x, k, &bits);
                    let lhs = x.restrict_cochain(k + 1, &df, &link).unwrap();
                    let fs = x.restrict_cochain(k, &bits, &link).unwrap();
                    let dfs = coboundary_oracle(lx, k - i - 1, &fs);
                    // (δf)^σ(τ) = δ(f^σ)(τ) + Σ_{u ∈ σ} f(σ ∪ τ ∖ u).
                    for (j, tau) in lx.faces(k - i).iter().enumerate() {
                        let full = sigma.union(tau);
                        let extra = sigma
                            .vertices()
                            .iter()
                            .map(|&u| full.difference(&Face::new(vec![u]).unwrap()))
                            .filter(|g| bits[x.index_of(g).unwrap()])
                            .count();
                        prop_assert_eq!(lhs[j], dfs[j] ^ (extra % 2 == 1));
                    }
                    // Supported on faces through σ, the two sides agree.
                    let through: Vec<bool> = x
                        .faces(k)
                        .iter()
                        .zip(&bits)
                        .map(|(g, b)| *b && sigma.is_subset_of(g))
                        .collect();
                    let lhs = x.restrict_cochain(k + 1, &coboundary_oracle(&x, k, &through), &link).unwrap();
                    let rhs = coboundary_oracle(lx, k - i - 1, &x.restrict_cochain(k, &through, &link).unwrap());
                    prop_assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn css_codes_are_consistent(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(3..=7);
        let tops = r.gen_range(1..=10);
        let x = random_complex(&mut r, n, 2, tops, false);
        let code = css_from_complex(&x).unwrap();
        prop_assert!(code.is_orthogonal());
        prop_assert!(code.h_x.mul(&code.h_z.transpose()).is_zero());
        let s = topology::spaces(&x).unwrap();
        prop_assert_eq!(code.rate(), s.level(1).dim_h());
        prop_assert_eq!(code.rate(), code.rate_homology());
        // Homology from the boundary maps: n − rank ∂1 − rank ∂2.
        let t = |m: Vec<Vec<bool>>| -> Vec<Vec<bool>> {
            let cols = m.first().map_or(0, Vec::len);
            (0..cols).map(|c| m.iter().map(|row| row[c]).collect()).collect()
        };
        let h1 = x.num_faces(1) - rank_oracle(t(coboundary_rows(&x, 0))) - rank_oracle(t(coboundary_rows(&x, 1)));
        prop_assert_eq!(code.rate(), h1);
    }

    #[test]
    fn round_trip_is_idempotent(seed in any::<u64>()) {
        let x = small_complex(seed, 8, 3);
        let a = to_canonical_string(&Instance::Complex(x).to_value());
        let b = to_canonical_string(&Instance::parse(&a).unwrap().to_value());
        prop_assert_eq!(&a, &b);
        let mut r = rng(seed);
        let n = r.gen_range(1..=6);
        let m = Matroid::uniform(n, r.gen_range(0..=n)).unwrap();
        let a = to_canonical_string(&Instance::Matroid(m).to_value());
        let b = to_canonical_string(&Instance::parse(&a).unwrap().to_value());
        prop_assert_eq!(a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn expansion_positive_iff_acyclic(seed in any::<u64>()) {
        let x = small_complex(seed, 6, 2);
        for i in 0..x.dim() {
            if x.num_faces(i) > 16 || x.num_faces(i - 1) > 16 {
                continue;
            }
            let h = topology::coboundary_expansion(&x, i, CAP).unwrap();
            let dim_h = topology::level_spaces(&x, i).unwrap().dim_h();
            prop_assert_eq!(h.is_positive(), dim_h == 0);
            let oracle = coboundary_expansion_oracle(&x, i);
            match (&h, oracle) {
                (ExtRational::Infinite, None) => {}
                (ExtRational::Finite(a), Some(b)) => prop_assert_eq!(a, &b),
                (a, b) => prop_assert!(false, "h = {a}, oracle = {b:?}"),
            }
        }
    }

    #[test]
    fn zeroth_expansion_is_cheeger(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(2..=9);
        let tops = r.gen_range(1..=2 * n);
        let x = random_complex(&mut r, n, 1, tops, true);
        let g = WeightedGraph::from_complex(&x).unwrap();
        let h0 = topology::coboundary_expansion(&x, 0, CAP).unwrap();
        let h = g.cheeger(spectral::DEFAULT_CUT_CAP).unwrap();
        if g.is_connected() {
            prop_assert_eq!(h0, ExtRational::Finite(h));
        } else {
            prop_assert_eq!(h0, ExtRational::Finite(Rational::zero()));
            prop_assert!(h.is_zero());
        }
    }

    #[test]
    fn testability_equals_expansion(seed in any::<u64>()) {
        let x = small_complex(seed, 6, 2);
        for i in 0..x.dim() {
            let eps = codes::testability_epsilon(&x, i, CAP).unwrap();
            let h = topology::coboundary_expansion(&x, i, CAP).unwrap();
            prop_assert_eq!(eps, h);
        }
    }

    #[test]
    fn minimal_cochains_are_locally_minimal(seed in any::<u64>()) {
        let x = small_complex(seed, 6, 2);
        let mut r = rng(seed ^ 6);
        for i in 0..x.dim() {
            let f = cochain(&x, i, &random_bits(&mut r, x.num_faces(i)));
            if topology::is_minimal(&x, &f, CAP).unwrap() {
                prop_assert!(topology::is_locally_minimal(&x, &f, CAP).unwrap());
            }
        }
    }
}

fn random_matroid(seed: u64) -> Matroid {
    let mut r = rng(seed);
    match r.gen_range(0..3) {
        0 => {
            let n = r.gen_range(1..=6);
            Matroid::uniform(n, r.gen_range(1..=n)).unwrap()
        }
        1 => loop {
            let n = r.gen_range(2..=5);
            let edges: Vec<(usize, usize)> = (0..n)
                .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
                .filter(|_| r.gen_bool(0.6))
                .collect();
            if !edges.is_empty() {
                break Matroid::graphic(n, edges).unwrap();
            }
        },
        _ => loop {
            let cols: Vec<Vec<u8>> = (0..r.gen_range(1..=6)).map(|_| (0..4).map(|_| r.gen_range(0..=1)).collect()).collect();
            let rows: Vec<Vec<u8>> = (0..4).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
            let m = Matroid::linear_f2(&rows).unwrap();
            if m.rank_of_matroid() > 0 {
                break m;
            }
        },
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn matroid_walk_invariants(seed in any::<u64>()) {
        let m = random_matroid(seed);
        prop_assert!(matroid::verify_axioms(&m).unwrap().passed());
        let r = m.rank_of_matroid();
        let x = matroid::independence_complex(&m).unwrap();
        let base = matroid::base_walk_matrix(&m).unwrap();
        let down_up = walks::walk_matrix(&x, r as isize - 1, WalkKind::DownUp).unwrap();
        prop_assert_eq!(&base.matrix, &down_up.matrix);
        let uniform = vec![rational(1, x.num_faces(r as isize - 1) as i64); x.num_faces(r as isize - 1)];
        prop_assert_eq!(x.weights(r as isize - 1), &uniform[..]);
        prop_assert_eq!(base.matrix.left_apply(&uniform), uniform);
        let cert = matroid::certify_zero_local(&m, TOL).unwrap();
        prop_assert!(cert.certified);
        prop_assert!(cert.links.iter().all(|l| l.connected));
        prop_assert!(base.lambda2().unwrap() <= walks::ko_bound(r - 1, 0.0) + TOL);
        prop_assert!(matroid::verify_exchange_property(x.complex()));
        if x.dim() >= 1 {
            let parts = matroid::multipartite_partition(&x.skeleton(1).unwrap().complex().clone()).unwrap();
            let edges = x.faces(1);
            for (a, pa) in parts.iter().enumerate() {
                for &u in pa {
                    for &v in pa {
                        if u < v {
                            prop_assert!(!edges.contains(&Face::new(vec![u, v]).unwrap()));
                        }
                    }
                    for pb in &parts[a + 1..] {
                        for &v in pb {
                            prop_assert!(edges.contains(&Face::new(vec![u, v]).unwrap()));
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn ko_formula_is_exceeded_for_negative_gamma() {
    // Johnson scheme J(5,3): the down-up walk is I/3 + A/9 with
    // eigenvalues of A in {6, 1, -2}, so λ2 = 4/9; γ = λ2(K5) = -1/4.
    let x = hdx::generators::complete_complex(5, 3).unwrap();
    let l2 = walks::walk_matrix(&x, 2, WalkKind::DownUp).unwrap().lambda2().unwrap();
    assert!((l2 - 4.0 / 9.0).abs() <= TOL);
    let gamma = spectral::certify_local_spectral(&x, 1.0, TOL).unwrap().gamma.unwrap();
    assert!((gamma + 0.25).abs() <= TOL);
    assert!(l2 > walks::ko_bound(2, gamma) + 1e-3);
    assert!((l2 - walks::al_bound(2, &[-0.25, -1.0 / 3.0])).abs() <= TOL);
}

#[test]
fn sampler_matches_exact_distribution() {
    let x = hdx::generators::complete_complex(5, 2).unwrap();
    let start = x.faces(2)[0].clone();
    let steps = 3;
    let n = 100_000usize;
    let exact = walks::exact_distribution(&x, 2, WalkKind::DownUp, &start, steps).unwrap();
    let emp = walks::empirical_distribution(&x, 2, WalkKind::DownUp, &start, steps, n, 11).unwrap();
    for (p, e) in exact.iter().zip(&emp) {
        let p = to_f64(p);
        let sigma = (p * (1.0 - p) / n as f64).sqrt();
        assert!((e - p).abs() <= 4.0 * sigma + TOL, "p = {p}, empirical = {e}");
    }
}
