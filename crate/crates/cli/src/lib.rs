//! Orchestration behind the `repcoh` binary: read a poset, build the chosen
//! complex, compute its cohomology and render a report.

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use repcoh_core::{
    build_complex, cocycle_representatives, cohomology_all, nerve_complex, parse_family, singleton_complex, Basis,
    CochainComplex, CohomologyGroup, Error, Poset, Variant, DEFAULT_INTERVAL_CAP,
};
use serde_json::{json, Map, Value};

pub const CAP_ENV: &str = "REPCOH_INTERVAL_CAP";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InputSource {
    File(PathBuf),
    Stdin,
    /// A family spec such as `"dandelion 3"`.
    Family(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisMode {
    Intervals,
    Singletons,
    Nerve,
}

impl BasisMode {
    pub fn as_str(self) -> &'static str {
        match self {
            BasisMode::Intervals => "intervals",
            BasisMode::Singletons => "singletons",
            BasisMode::Nerve => "nerve",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Emit {
    Table,
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub variant: Variant,
    pub input: InputSource,
    pub max_dim: Option<usize>,
    pub basis: BasisMode,
    pub emit: Emit,
    pub generators: bool,
    pub cap: usize,
    /// `None` uses the available parallelism.
    pub threads: Option<usize>,
}

impl RunConfig {
    pub fn new(variant: Variant, input: InputSource) -> Self {
        Self {
            variant,
            input,
            max_dim: None,
            basis: BasisMode::Intervals,
            emit: Emit::Table,
            generators: false,
            cap: DEFAULT_INTERVAL_CAP,
            threads: None,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::IntervalExplosion { .. }) => 3,
            CliError::Input(_) => 2,
            CliError::Core(
                Error::CyclicInput { .. }
                | Error::DuplicateElement { .. }
                | Error::UnknownName { .. }
                | Error::Syntax { .. }
                | Error::UnknownFamily(_)
                | Error::BadParams { .. }
                | Error::NotAPartialOrder(_)
                | Error::TruncationExceeded { .. }
                | Error::DegeneracyOnSemiSimplicial { .. },
            ) => 2,
            CliError::Core(_) => 1,
        }
    }
}

/// Interval cap from the environment, if set.
pub fn cap_from_env() -> Result<Option<usize>, CliError> {
    match std::env::var(CAP_ENV) {
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(c) if c >= 1 => Ok(Some(c)),
            _ => Err(CliError::Input(format!("{CAP_ENV} must be a positive integer, got `{s}`"))),
        },
        Err(_) => Ok(None),
    }
}

/// One cocycle, as signed terms over basis elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub dim: usize,
    /// `None` for a free generator, the order of the summand otherwise.
    pub order: Option<BigInt>,
    /// `(coefficient, chain labels of the support)`.
    pub terms: Vec<(BigInt, Vec<String>)>,
}

/// Everything a run computes, independent of how it is rendered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub variant: Variant,
    pub elements: Vec<String>,
    pub covers: Vec<(String, String)>,
    pub max_dim: usize,
    pub basis: BasisMode,
    pub groups: Vec<CohomologyGroup>,
    pub basis_sizes: Vec<usize>,
    /// Highest degree computed.
    pub truncation_bound: usize,
    /// Every degree above the bound is known to vanish.
    pub complete: bool,
    pub generators: Option<Vec<Generator>>,
}

pub fn read_poset(input: &InputSource, stdin: &mut dyn Read) -> Result<Poset, CliError> {
    let text = match input {
        InputSource::Family(spec) => return Ok(parse_family(spec)?),
        InputSource::File(path) => std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?,
        InputSource::Stdin => {
            let mut s = String::new();
            stdin
                .read_to_string(&mut s)
                .map_err(|e| CliError::Input(format!("cannot read standard input: {e}")))?;
            s
        }
    };
    Ok(Poset::parse(&text)?)
}

/// Builds the complex selected by `cfg`.
pub fn build(cfg: &RunConfig, base: Arc<Poset>) -> Result<(CochainComplex, usize), CliError> {
    let max_dim = match (cfg.max_dim, cfg.basis, cfg.variant.is_simplicial()) {
        (Some(m), _, _) => m,
        (None, BasisMode::Nerve, _) | (None, BasisMode::Intervals, false) => base.composition_length(),
        (None, _, _) => {
            return Err(CliError::Input(format!(
                "--max-dim is required for the {} variant with the {} basis",
                cfg.variant,
                cfg.basis.as_str()
            )))
        }
    };
    let complex = match cfg.basis {
        BasisMode::Intervals => build_complex(base, cfg.variant, max_dim, cfg.cap)?,
        BasisMode::Singletons => {
            if cfg.variant != Variant::TildeG {
                return Err(CliError::Input(
                    "the singleton basis exists only for the tildeG variant".into(),
                ));
            }
            singleton_complex(base, max_dim, false)?
        }
        BasisMode::Nerve => nerve_complex(base, max_dim),
    };
    Ok((complex, max_dim))
}

pub fn compute(cfg: &RunConfig, base: Poset) -> Result<Report, CliError> {
    let base = Arc::new(base);
    let (complex, max_dim) = build(cfg, base.clone())?;
    let groups = cohomology_all(&complex)?;
    let generators = if cfg.generators {
        Some(generators(&complex, &base)?)
    } else {
        None
    };
    Ok(Report {
        variant: cfg.variant,
        elements: base.names().to_vec(),
        covers: base
            .covers()
            .iter()
            .map(|&(a, b)| (base.name(a).to_string(), base.name(b).to_string()))
            .collect(),
        max_dim,
        basis: cfg.basis,
        groups,
        basis_sizes: complex.dims(),
        truncation_bound: complex.top(),
        complete: complex.is_complete(),
        generators,
    })
}

fn generators(c: &CochainComplex, base: &Poset) -> Result<Vec<Generator>, CliError> {
    let mut out = Vec::new();
    for n in 0..=c.top() {
        let reps = cocycle_representatives(c, n)?;
        let basis = c.basis(n).expect("stored degree");
        let describe = |v: &[BigInt]| -> Vec<(BigInt, Vec<String>)> {
            v.iter()
                .enumerate()
                .filter(|(_, x)| x.sign() != num_bigint::Sign::NoSign)
                .map(|(i, x)| (x.clone(), support_labels(basis, i, base)))
                .collect()
        };
        for v in &reps.free {
            out.push(Generator {
                dim: n,
                order: None,
                terms: describe(v),
            });
        }
        for (order, v) in &reps.torsion {
            out.push(Generator {
                dim: n,
                order: Some(order.clone()),
                terms: describe(v),
            });
        }
    }
    Ok(out)
}

fn support_labels(basis: &Basis, i: usize, base: &Poset) -> Vec<String> {
    basis.support(i).iter().map(|c| c.label(base)).collect()
}

fn int_value(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

/// The deterministic part of the JSON report.
pub fn report_value(r: &Report) -> Value {
    let groups: Vec<Value> = r
        .groups
        .iter()
        .map(|g| {
            json!({
                "dim": g.dim,
                "rank": g.free_rank,
                "torsion": g.torsion.iter().map(int_value).collect::<Vec<_>>(),
            })
        })
        .collect();
    let mut obj = Map::new();
    obj.insert("variant".into(), json!(r.variant.as_str()));
    obj.insert(
        "base".into(),
        json!({
            "elements": r.elements,
            "covers": r.covers.iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(),
        }),
    );
    obj.insert("max_dim".into(), json!(r.max_dim));
    obj.insert("basis".into(), json!(r.basis.as_str()));
    obj.insert("groups".into(), Value::Array(groups));
    obj.insert("basis_sizes".into(), json!(r.basis_sizes));
    obj.insert(
        "truncation".into(),
        json!({ "bound": r.truncation_bound, "complete": r.complete }),
    );
    if let Some(gens) = &r.generators {
        let gens: Vec<Value> = gens
            .iter()
            .map(|g| {
                json!({
                    "dim": g.dim,
                    "order": g.order.as_ref().map(int_value),
                    "terms": g.terms.iter().map(|(c, s)| json!({
                        "coeff": int_value(c),
                        "support": s,
                    })).collect::<Vec<_>>(),
                })
            })
            .collect();
        obj.insert("generators".into(), Value::Array(gens));
    }
    Value::Object(obj)
}

/// Run facts that legitimately differ between runs.
#[derive(Clone, Debug)]
pub struct Metadata {
    pub wall_time_ms: f64,
    pub threads: usize,
}

pub fn render_json(r: &Report, meta: &Metadata) -> String {
    let mut v = report_value(r);
    v.as_object_mut().expect("report is an object").insert(
        "metadata".into(),
        json!({ "wall_time_ms": meta.wall_time_ms, "threads": meta.threads }),
    );
    let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
    s.push('\n');
    s
}

fn torsion_text(g: &CohomologyGroup) -> String {
    g.torsion.iter().map(BigInt::to_string).collect::<Vec<_>>().join(";")
}

pub fn render_csv(r: &Report) -> String {
    let mut s = String::from("dim,rank,torsion\n");
    for g in &r.groups {
        let _ = writeln!(s, "{},{},{}", g.dim, g.free_rank, torsion_text(g));
    }
    s
}

pub fn render_table(r: &Report, meta: &Metadata) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "variant {}  basis {}  elements {}  max_dim {}",
        r.variant,
        r.basis.as_str(),
        r.elements.len(),
        r.max_dim
    );
    let _ = writeln!(s, "{:>4}  {:>10}  {:>8}  group", "dim", "basis", "rank");
    for (g, size) in r.groups.iter().zip(&r.basis_sizes) {
        let _ = writeln!(s, "{:>4}  {:>10}  {:>8}  {}", g.dim, size, g.free_rank, g);
    }
    if r.complete {
        let _ = writeln!(s, "groups above degree {} vanish", r.truncation_bound);
    } else {
        let _ = writeln!(s, "truncated: degrees above {} not computed", r.truncation_bound);
    }
    if let Some(gens) = &r.generators {
        for g in gens {
            let order = g.order.as_ref().map_or("free".to_string(), |o| format!("order {o}"));
            let terms: Vec<String> = g
                .terms
                .iter()
                .map(|(c, sup)| format!("{c}*[{}]", sup.join(" ")))
                .collect();
            let _ = writeln!(s, "H^{} {}: {}", g.dim, order, terms.join(" + "));
        }
    }
    let _ = writeln!(s, "{:.1} ms, threads: {}", meta.wall_time_ms, meta.threads);
    s
}

/// Reads, computes and renders; returns the process exit code.
pub fn run(cfg: &RunConfig, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let start = Instant::now();
    let result = (|| {
        let base = read_poset(&cfg.input, stdin)?;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads.unwrap_or(0))
            .build()
            .map_err(|e| CliError::Input(format!("cannot start worker threads: {e}")))?;
        let threads = pool.current_num_threads();
        pool.install(|| compute(cfg, base)).map(|r| (r, threads))
    })();
    match result {
        Ok((report, threads)) => {
            let meta = Metadata {
                wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
                threads,
            };
            let text = match cfg.emit {
                Emit::Json => render_json(&report, &meta),
                Emit::Csv => render_csv(&report),
                Emit::Table => render_table(&report, &meta),
            };
            match out.write_all(text.as_bytes()) {
                Ok(()) => 0,
                Err(e) => {
                    let _ = writeln!(err, "error: cannot write output: {e}");
                    1
                }
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
