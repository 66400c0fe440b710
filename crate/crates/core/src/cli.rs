//! Command-line front end. Every command prints one canonical report to
//! stdout; the elapsed time goes to stderr so reports stay reproducible.

use std::path::Path;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;
use serde_json::{json, Value};

use crate::codes::{self, coordinate_list, css_from_complex};
use crate::complex::{Face, WeightedComplex};
use crate::error::{Error, Result};
use crate::generators;
use crate::io::{self, rational_value, sha256_hex, to_canonical_string, to_value, Instance};
use crate::matroid::{self, Matroid};
use crate::rational::{parse_rational, ExtRational};
use crate::spectral::{self, WeightedGraph};
use crate::topology::{self, F2Cochain};
use crate::walks::{self, rng_for, WalkKind};

#[derive(Parser, Debug)]
#[command(name = "hdx", version, about = "High-dimensional expander toolkit")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Tolerance for floating-point comparisons.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Largest number of elements an exhaustive search may visit.
    #[arg(long = "enum-cap", global = true, default_value_t = topology::DEFAULT_ENUM_CAP)]
    pub enum_cap: u64,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Write a reference instance as JSON.
    Generate { expr: String },
    /// Certify a complex as a lambda-local spectral expander.
    Certify {
        input: String,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        lambda: f64,
        /// Also run the trickling-down check (needs d ≥ 2).
        #[arg(long)]
        trickle: bool,
    },
    /// Spectrum of the 1-skeleton, or of a walk with --walk.
    Spectrum {
        input: String,
        #[arg(long)]
        walk: Option<String>,
        #[arg(long, default_value_t = 0)]
        level: isize,
    },
    /// Exact Cheeger constant of the 1-skeleton and both Cheeger inequalities.
    Cheeger { input: String },
    /// Walk spectra against the mixing bounds at a level.
    Mix {
        input: String,
        #[arg(long)]
        level: isize,
    },
    /// Dimensions of B^i, Z^i, H^i.
    Cohomology { input: String },
    /// Coboundary and cosystolic expansion constants.
    Expansion { input: String },
    /// Minimality of a cochain, and optionally the small-set check.
    Minimality {
        input: String,
        /// Faces separated by ';', vertices by ','.
        #[arg(long)]
        cochain: Option<String>,
        #[arg(long)]
        eps: Option<String>,
        #[arg(long)]
        mu: Option<String>,
    },
    /// Run the cocycle tester and compare testability with expansion.
    TestCode {
        input: String,
        #[arg(long, default_value_t = 0)]
        level: isize,
        #[arg(long)]
        cochain: Option<String>,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
    },
    /// CSS code of a 2-complex.
    Css {
        input: String,
        /// Write h_x.txt and h_z.txt coordinate lists here.
        #[arg(long)]
        export: Option<String>,
    },
    /// Matroid axioms, 0-local certification and the base walk.
    MatroidVerify { input: String },
    /// Run the base-exchange walk.
    MatroidSample {
        input: String,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        /// Comma-separated start base (default: the first base).
        #[arg(long)]
        start: Option<String>,
        #[arg(long, default_value_t = 1)]
        chains: usize,
    },
    /// Count bases.
    MatroidCount { input: String },
    /// Exact total-variation distance to stationarity per step.
    TvCurve {
        input: String,
        #[arg(long)]
        level: Option<isize>,
        #[arg(long, default_value = "down-up")]
        walk: String,
        #[arg(long)]
        start: Option<String>,
        #[arg(long, default_value_t = 20)]
        steps: usize,
    },
}

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const IO: i32 = 1;
    pub const INVALID: i32 = 2;
    pub const TOO_LARGE: i32 = 3;
    pub const VIOLATED: i32 = 4;
    pub const NUMERIC: i32 = 5;
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::TooLarge(_) => exit::TOO_LARGE,
        Error::NumericalFailure(_) => exit::NUMERIC,
        _ => exit::INVALID,
    }
}

/// A finished command: text for stdout and whether the checked property
/// held.
pub struct Outcome {
    pub text: String,
    pub holds: bool,
}

enum Failure {
    Io(String),
    Module(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Module(e)
    }
}

struct Loaded {
    instance: Instance,
    digest: String,
}

fn load(input: &str) -> std::result::Result<Loaded, Failure> {
    let instance = if Path::new(input).is_file() {
        let text = std::fs::read_to_string(input).map_err(|e| Failure::Io(format!("{input}: {e}")))?;
        Instance::parse(&text)?
    } else if input.ends_with(".json") {
        return Err(Failure::Io(format!("{input}: no such file")));
    } else {
        generators::generate(input)?
    };
    let digest = sha256_hex(to_canonical_string(&instance.to_value()).as_bytes());
    Ok(Loaded { instance, digest })
}

fn complex_of(l: &Loaded) -> Result<WeightedComplex> {
    match &l.instance {
        Instance::Complex(x) => Ok(x.clone()),
        Instance::Matroid(m) => matroid::independence_complex(m),
    }
}

fn matroid_of(l: &Loaded) -> Result<&Matroid> {
    match &l.instance {
        Instance::Matroid(m) => Ok(m),
        Instance::Complex(_) => Err(Error::BadParams("this command needs a matroid".into())),
    }
}

fn parse_face(x: &WeightedComplex, text: &str) -> Result<Face> {
    let labels: Vec<&str> = text.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    let f = x.face_from_labels(&labels)?;
    if !x.complex().contains(&f) {
        return Err(Error::FaceNotInComplex(f.to_string()));
    }
    Ok(f)
}

fn parse_cochain(x: &WeightedComplex, text: &str) -> Result<F2Cochain> {
    let faces = text.split(';').map(|t| parse_face(x, t)).collect::<Result<Vec<_>>>()?;
    F2Cochain::indicator(x, &faces)
}

fn random_cochain(x: &WeightedComplex, level: isize, seed: u64) -> F2Cochain {
    let mut rng = rng_for(seed, u64::MAX);
    let mut f = F2Cochain::zero(x, level);
    for j in 0..x.num_faces(level) {
        f.bits.set(j, rng.gen_bool(0.5));
    }
    f
}

fn cochain_value(x: &WeightedComplex, f: &F2Cochain) -> Value {
    json!({
        "level": f.level,
        "support": f.support(x).map(|s| x.label_face(s)).collect::<Vec<_>>(),
    })
}

/// Sets `obj[key]`; an infinite value becomes `null` and is named in
/// `obj["sentinel"]`. `None` (not defined at this level) is a bare `null`.
fn put_ext(obj: &mut Value, key: &str, v: Option<&ExtRational>) {
    obj[key] = match v {
        Some(ExtRational::Finite(r)) => rational_value(r),
        Some(ExtRational::Infinite) => {
            if obj.get("sentinel").is_none() {
                obj["sentinel"] = json!({});
            }
            obj["sentinel"][key] = json!("+inf");
            Value::Null
        }
        None => Value::Null,
    };
}

fn envelope(cli: &Global, command: &str, digest: Option<&str>, result: Value) -> Value {
    json!({
        "command": command,
        "input_digest": digest,
        "config": {"seed": cli.seed, "tol": cli.tol, "enum_cap": cli.enum_cap},
        "result": result,
    })
}

fn json_only(g: &Global) -> Result<()> {
    if g.format == Some(Format::Csv) {
        return Err(Error::BadParams("this command has no CSV form".into()));
    }
    Ok(())
}

fn dispatch(g: &Global, cmd: &Command) -> std::result::Result<Outcome, Failure> {
    let ok = |v: Value| Outcome {
        text: to_canonical_string(&v),
        holds: true,
    };
    let report = |name: &str, l: &Loaded, result: Value, holds: bool| Outcome {
        text: to_canonical_string(&envelope(g, name, Some(&l.digest), result)),
        holds,
    };
    match cmd {
        Command::Generate { expr } => {
            json_only(g)?;
            Ok(ok(generators::generate(expr)?.to_value()))
        }
        Command::Certify { input, lambda, trickle } => {
            json_only(g)?;
            let l = load(input)?;
            let x = complex_of(&l)?;
            let r = spectral::certify_local_spectral(&x, *lambda, g.tol)?;
            let mut v = to_value(&r)?;
            let mut holds = r.certified;
            if *trickle {
                let t = spectral::trickling_check(&x, g.tol)?;
                holds &= t.walk_holds && t.laplacian_holds;
                v["trickling"] = to_value(&t)?;
            }
            Ok(report("certify", &l, v, holds))
        }
        Command::Spectrum { input, walk, level } => {
            let l = load(input)?;
            let x = complex_of(&l)?;
            let eig = match walk {
                None => WeightedGraph::from_complex(&x)?.eigen()?.eigenvalues,
                Some(kind) => walks::walk_matrix(&x, *level, kind.parse()?)?.spectrum()?.eigenvalues,
            };
            if g.format == Some(Format::Csv) {
                let mut s = String::from("index,eigenvalue\n");
                for (i, e) in eig.iter().enumerate() {
                    s.push_str(&format!("{i},{}\n", io::round12(*e)));
                }
                return Ok(Outcome { text: s, holds: true });
            }
            let lambda2 = eig.get(1).copied();
            Ok(report("spectrum", &l, json!({"eigenvalues": eig, "lambda2": lambda2}), true))
        }
        Command::Cheeger { input } => {
            json_only(g)?;
            let l = load(input)?;
            let graph = WeightedGraph::from_complex(&complex_of(&l)?)?;
            let r = graph.check_cheeger_inequalities(spectral::DEFAULT_CUT_CAP, g.tol)?;
            Ok(report("cheeger", &l, to_value(&r)?, r.passed()))
        }
        Command::Mix { input, level } => {
            json_only(g)?;
            let l = load(input)?;
            let r = walks::verify_mixing(&complex_of(&l)?, *level, g.tol)?;
            let holds = r.ko_holds != Some(false) && r.al_holds != Some(false);
            Ok(report("mix", &l, to_value(&r)?, holds))
        }
        Command::Cohomology { input } => {
            json_only(g)?;
            let l = load(input)?;
            let x = complex_of(&l)?;
            let s = topology::spaces(&x)?;
            let levels: Vec<Value> = s
                .levels
                .iter()
                .map(|lv| {
                    json!({"level": lv.level, "faces": lv.size, "dim_B": lv.dim_b(),
                           "dim_Z": lv.dim_z(), "dim_H": lv.dim_h(), "f2_connected": lv.f2_connected()})
                })
                .collect();
            let (chain, hom) = topology::euler_characteristics(&x, &s);
            let v = json!({"levels": levels, "betti": s.betti(),
                           "euler_chain": chain, "euler_cohomology": hom});
            Ok(report("cohomology", &l, v, chain == hom))
        }
        Command::Expansion { input } => {
            json_only(g)?;
            let l = load(input)?;
            let x = complex_of(&l)?;
            let levels = topology::expansion_constants(&x, g.enum_cap)?;
            let consistent = levels
                .iter()
                .all(|lv| lv.h.as_ref().is_none_or(|h| h.is_positive() == (lv.dim_h == 0)));
            let rows: Vec<Value> = levels
                .iter()
                .map(|lv| {
                    let mut row = json!({"level": lv.level, "dim_H": lv.dim_h});
                    put_ext(&mut row, "h", lv.h.as_ref());
                    put_ext(&mut row, "h_tilde", lv.h_tilde.as_ref());
                    put_ext(&mut row, "cosyst", Some(&lv.cosyst));
                    row
                })
                .collect();
            let h: Vec<Value> = rows.iter().filter(|r| !r["h"].is_null() || r["sentinel"].get("h").is_some()).map(|r| r["h"].clone()).collect();
            let mut v = json!({"levels": rows, "h": h});
            let infinite: Vec<isize> = levels.iter().filter(|lv| lv.h == Some(ExtRational::Infinite)).map(|lv| lv.level).collect();
            if !infinite.is_empty() {
                v["sentinel"] = json!({"h": {"+inf_levels": infinite}});
            }
            Ok(report("expansion", &l, v, consistent))
        }
        Command::Minimality { input, cochain, eps, mu } => {
            json_only(g)?;
            let l = load(input)?;
            let x = complex_of(&l)?;
            let mut v = json!({});
            let mut holds = true;
            if let Some(c) = cochain {
                let f = parse_cochain(&x, c)?;
                let minimal = topology::is_minimal(&x, &f, g.enum_cap)?;
                let local = topology::is_locally_minimal(&x, &f, g.enum_cap)?;
                let dist = topology::distance_to_space(&x, &f, topology::Space::Coboundaries, g.enum_cap)?;
                v["cochain"] = cochain_value(&x, &f);
                v["norm"] = rational_value(&topology::norm(&x, &f));
                v["distance_to_B"] = rational_value(&dist);
                v["minimal"] = json!(minimal);
                v["locally_minimal"] = json!(local);
                holds &= !minimal || local;
            }
            match (eps, mu) {
                (Some(e), Some(m)) => {
                    let r = topology::small_set_expansion_check(&x, &parse_rational(e)?, &parse_rational(m)?, g.enum_cap)?;
                    let mut ss = json!({
                        "eps": rational_value(&r.eps), "mu": rational_value(&r.mu),
                        "levels": r.levels_checked,
                        "passed": r.passed(),
                        "violation": r.violation.as_ref().map(|w| json!({
                            "cochain": cochain_value(&x, &w.cochain),
                            "norm": rational_value(&w.norm),
                            "coboundary_norm": rational_value(&w.coboundary_norm),
                        })),
                    });
                    put_ext(&mut ss, "worst_ratio", Some(&r.worst_ratio));
                    v["small_set"] = ss;
                    holds &= r.passed();
                }
                (None, None) => {}
                _ => return Err(Error::BadParams("--eps and --mu go together".into()).into()),
            }
            if v.as_object().is_some_and(|o| o.is_empty()) {
                return Err(Error::BadParams("give --cochain and/or --eps with --mu".into()).into());
            }
            Ok(report("minimality", &l, v, holds))
        }
        Command::TestCode { input, level, cochain, trials } => {
            json_only(g)?;
            let l = load(input)?;
            let x = complex_of(&l)?;
            let f = match cochain {
                Some(c) => parse_cochain(&x, c)?,
                None => random_cochain(&x, *level, g.seed),
            };
            if f.level != *level {
                return Err(Error::DimensionMismatch(format!("cochain is at level {}, not {level}", f.level)).into());
            }
            let t = codes::cocycle_test(&x, &f, g.seed, *trials)?;
            let eps = codes::testability_epsilon(&x, *level, g.enum_cap)?;
            let h = topology::coboundary_expansion(&x, *level, g.enum_cap)?;
            let p = t.exact.clone();
            let pf = crate::rational::to_f64(&p);
            let sigma = (pf * (1.0 - pf) / *trials as f64).sqrt();
            let within = (t.empirical - pf).abs() <= 4.0 * sigma + g.tol;
            let mut v = json!({
                "cochain": cochain_value(&x, &f),
                "trials": t.trials, "rejections": t.rejections, "empirical": t.empirical,
                "exact": rational_value(&p), "within_4_sigma": within,
                "equal": eps == h,
            });
            put_ext(&mut v, "testability_epsilon", Some(&eps));
            put_ext(&mut v, "coboundary_expansion", Some(&h));
            Ok(report("test-code", &l, v, within && eps == h))
        }
        Command::Css { input, export } => {
            json_only(g)?;
            let l = load(input)?;
            let code = css_from_complex(&complex_of(&l)?)?;
            let r = code.report(g.enum_cap)?;
            if let Some(dir) = export {
                let write = |name: &str, m| {
                    std::fs::write(Path::new(dir).join(name), coordinate_list(m)).map_err(|e| Failure::Io(format!("{dir}/{name}: {e}")))
                };
                std::fs::create_dir_all(dir).map_err(|e| Failure::Io(format!("{dir}: {e}")))?;
                write("h_x.txt", &code.h_x)?;
                write("h_z.txt", &code.h_z)?;
            }
            let mut v = to_value(&r)?;
            v["orthogonal"] = json!(code.is_orthogonal());
            Ok(report("css", &l, v, code.is_orthogonal()))
        }
        Command::MatroidVerify { input } => {
            json_only(g)?;
            let l = load(input)?;
            let m = matroid_of(&l)?;
            let axioms = matroid::verify_axioms(m)?;
            let mut v = json!({"rank": m.rank_of_matroid(), "axioms": to_value(&axioms)?});
            let mut holds = axioms.passed();
            if holds && m.rank_of_matroid() > 0 {
                let cert = matroid::certify_zero_local(m, g.tol)?;
                let x = matroid::independence_complex(m)?;
                let k = m.rank_of_matroid() as isize - 1;
                let base = matroid::base_walk_matrix(m)?;
                let same = base.matrix == walks::walk_matrix(&x, k, WalkKind::DownUp)?.matrix;
                let lambda2 = base.lambda2()?;
                let bound = walks::ko_bound(m.rank_of_matroid() - 1, 0.0);
                holds &= cert.certified && same && lambda2 <= bound + g.tol;
                v["certified"] = json!(cert.certified);
                v["gamma"] = json!(cert.gamma);
                v["bases"] = json!(x.num_faces(k));
                v["walk_matches_down_up"] = json!(same);
                v["base_walk_lambda2"] = json!(lambda2);
                v["ko_bound"] = json!(bound);
            }
            Ok(report("matroid-verify", &l, v, holds))
        }
        Command::MatroidSample { input, steps, start, chains } => {
            json_only(g)?;
            let l = load(input)?;
            let m = matroid_of(&l)?;
            let start: Vec<usize> = match start {
                Some(s) => s
                    .split(',')
                    .map(|e| e.trim().parse().map_err(|_| Error::Parse(format!("bad element {e:?}"))))
                    .collect::<Result<_>>()?,
                None => {
                    let b = m.bases()?;
                    matroid::set_of(*b.first().ok_or_else(|| Error::BadStart("no bases".into()))?)
                }
            };
            let bases = matroid::sample_bases(m, &start, *steps, g.seed, (*chains).max(1))?;
            let v = json!({"start": start, "steps": steps, "base": bases[0], "chains": bases});
            Ok(report("matroid-sample", &l, v, true))
        }
        Command::MatroidCount { input } => {
            json_only(g)?;
            let l = load(input)?;
            let n = matroid_of(&l)?.count_bases()?;
            Ok(report("matroid-count", &l, json!({"bases": n}), true))
        }
        Command::TvCurve { input, level, walk, start, steps } => {
            let l = load(input)?;
            let x = complex_of(&l)?;
            let kind: WalkKind = walk.parse()?;
            let k = level.unwrap_or(x.dim());
            let s = match start {
                Some(s) => parse_face(&x, s)?,
                None => x
                    .faces(k)
                    .first()
                    .cloned()
                    .ok_or_else(|| Error::BadStart(format!("X({k}) is empty")))?,
            };
            let curve = walks::exact_tv_curve(&x, k, kind, &s, *steps)?;
            let monotone = curve.windows(2).all(|w| w[1].1 <= w[0].1 + g.tol);
            if g.format == Some(Format::Json) {
                let pts: Vec<Value> = curve.iter().map(|(t, tv)| json!({"step": t, "tv": tv})).collect();
                let v = json!({"level": k, "walk": kind, "start": x.label_face(&s), "curve": pts});
                return Ok(report("tv-curve", &l, v, monotone));
            }
            let mut text = String::from("step,tv\n");
            for (t, tv) in &curve {
                text.push_str(&format!("{t},{}\n", io::round12(*tv)));
            }
            Ok(Outcome { text, holds: monotone })
        }
    }
}

#[cfg(feature = "parallel")]
fn configure_threads(n: Option<usize>) {
    if let Some(n) = n {
        // A second call in the same process keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

#[cfg(not(feature = "parallel"))]
fn configure_threads(_: Option<usize>) {}

/// Runs a parsed command line; returns stdout text and the exit code.
pub fn execute(cli: &Cli) -> (String, i32) {
    configure_threads(cli.global.threads);
    match dispatch(&cli.global, &cli.command) {
        Ok(o) => {
            let code = if o.holds { exit::OK } else { exit::VIOLATED };
            (o.text, code)
        }
        Err(Failure::Io(msg)) => (format!("error: {msg}\n"), exit::IO),
        Err(Failure::Module(e)) => (format!("error: {e}\n"), exit_code(&e)),
    }
}

/// Entry point for the binary.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::INVALID } else { exit::OK };
            let _ = e.print();
            return code;
        }
    };
    let start = Instant::now();
    let (text, code) = execute(&cli);
    if code == exit::OK || code == exit::VIOLATED {
        print!("{text}");
    } else {
        eprint!("{text}");
    }
    eprintln!("wall_time_s={:.3}", start.elapsed().as_secs_f64());
    code
}
