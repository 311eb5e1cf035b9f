//! Command-line frontend: orbit listings, graded image components, Dynkin
//! indices, exponent reports, torsion bounds, the golden-ratio case, the
//! self-check suite, and the aggregate table.
//!
//! Exit codes: 0 on success, 1 when a computation or verification fails,
//! 2 on a usage error.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use weyltau::exponents::{
    ch4_constants, dynkin_gcd, dynkin_indices, exponent_report, h2_quadratic, h2_tau2,
    torsion_bounds, ExponentReport, H2Report,
};
use weyltau::phi::{phi_rho, phi_rho_cached, PhiCache};
use weyltau::rootsys::{
    build_h2, Family, RootSystem, RootSystemKind, Weight, DEFAULT_ORBIT_CAP,
};
use weyltau::scalar::{GoldenInt, Int};
use weyltau::verify::{run_checks, VerifyOptions};
use weyltau::Error;

#[derive(Parser)]
#[command(
    name = "weyltau",
    version,
    about = "Exact reflection-group calculus on weight lattices",
    max_term_width = 100
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    opts: GlobalOpts,
}

#[derive(Args)]
struct GlobalOpts {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Cache directory for orbit images; WEYLTAU_CACHE_DIR is honored when
    /// the flag is absent.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Unlock E7 and E8, whose orbits are large enough to take a while.
    #[arg(long, global = true)]
    allow_large: bool,
    /// Worker threads for multi-system commands; 0 means all cores. The
    /// output bytes are identical for every width.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Abort any orbit enumeration past this many elements.
    #[arg(long, global = true)]
    orbit_cap: Option<usize>,
    /// Attach wall-clock timings to reports. Off by default so that output
    /// is byte-for-byte reproducible.
    #[arg(long, global = true)]
    timings: bool,
}

impl GlobalOpts {
    fn cap(&self) -> usize {
        self.orbit_cap.unwrap_or(DEFAULT_ORBIT_CAP)
    }

    fn cache(&self) -> Option<PhiCache> {
        self.cache_dir
            .clone()
            .or_else(|| std::env::var_os("WEYLTAU_CACHE_DIR").map(PathBuf::from))
            .map(PhiCache::new)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

fn degree_arg() -> clap::builder::RangedI64ValueParser<u32> {
    clap::value_parser!(u32).range(2..=4)
}

#[derive(Subcommand)]
enum Cmd {
    /// List the reflection-group orbit of a weight.
    Orbit {
        /// Family letter: A, B, C, D, E, F, G, or H2.
        kind: String,
        rank: usize,
        /// Comma-separated fundamental-weight coordinates; H2 accepts
        /// golden literals such as 1+2*tau.
        coords: String,
    },
    /// Graded components of the image of an orbit sum.
    Phi {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        rank: usize,
        /// Comma-separated fundamental-weight coordinates.
        #[arg(long)]
        weight: String,
        /// Highest degree to report; H2 supports 2.
        #[arg(long, default_value_t = 4, value_parser = degree_arg())]
        max_degree: u32,
    },
    /// Halved square pairings of each fundamental orbit against the
    /// highest coroot, and their gcd.
    Dynkin {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        rank: usize,
    },
    /// Exponent reports with built-in cross-checks. Without --kind the
    /// standard scope runs: A1-A5, B2-B4, C2-C4, D4, G2, F4, E6.
    Exponents {
        #[arg(long)]
        kind: Option<String>,
        /// Single rank; without it every standard rank of the family runs.
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long, default_value_t = 4, value_parser = degree_arg())]
        max_degree: u32,
    },
    /// Torsion annihilator bounds derived from the exponents.
    TorsionBounds {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        rank: usize,
    },
    /// The golden-ratio rank-2 case: second exponent over Z[tau].
    H2,
    /// Run the self-check suite; nonzero exit if any check fails.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Corrupt one Cartan sign per system; orbit checks must then fail.
        #[arg(long)]
        inject_cartan_flip: bool,
    },
    /// Aggregate exponent/Dynkin/torsion table.
    Table {
        /// Largest rank per family; exceptional types appear once their
        /// rank fits.
        #[arg(long, default_value_t = 5)]
        max_rank: usize,
    },
}

/// Failures split by exit code: bad invocations exit 2, everything that went
/// wrong while computing exits 1.
enum Failure {
    Usage(String),
    Run(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InadmissibleRank { .. }
            | Error::Parse(_)
            | Error::NotCrystallographic { .. }
            | Error::Inapplicable { .. }
            | Error::UnsupportedDegree { .. } => Failure::Usage(e.to_string()),
            other => Failure::Run(other.to_string()),
        }
    }
}

fn main() -> std::process::ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => std::process::ExitCode::SUCCESS,
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            std::process::ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            std::process::ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let g = &cli.opts;
    match &cli.command {
        Cmd::Orbit { kind, rank, coords } => cmd_orbit(kind, *rank, coords, g),
        Cmd::Phi {
            kind,
            rank,
            weight,
            max_degree,
        } => cmd_phi(kind, *rank, weight, *max_degree, g),
        Cmd::Dynkin { kind, rank } => cmd_dynkin(kind, *rank, g),
        Cmd::Exponents {
            kind,
            rank,
            max_degree,
        } => cmd_exponents(kind.as_deref(), *rank, *max_degree, g),
        Cmd::TorsionBounds { kind, rank } => cmd_torsion_bounds(kind, *rank, g),
        Cmd::H2 => cmd_h2(g),
        Cmd::Verify {
            seed,
            inject_cartan_flip,
        } => cmd_verify(*seed, *inject_cartan_flip, g),
        Cmd::Table { max_rank } => cmd_table(*max_rank, g),
    }
}

fn parse_family(kind: &str) -> Result<Family, Failure> {
    Family::from_str(kind).map_err(Failure::from)
}

/// Reflection groups past a million elements (E7, E8, classical families in
/// high rank) stay behind a flag.
fn gate_large(kind: RootSystemKind, allow: bool) -> Result<(), Failure> {
    if kind.weyl_order() > Int::from(1_000_000u64) && !allow {
        return Err(Failure::Usage(format!(
            "{kind} is a large computation; pass --allow-large to run it"
        )));
    }
    Ok(())
}

fn build_cryst(family: Family, rank: usize, allow: bool) -> Result<RootSystem<Int>, Failure> {
    let kind = RootSystemKind::new(family, rank)?;
    gate_large(kind, allow)?;
    Ok(RootSystem::build(kind)?)
}

fn parse_weight_int(coords: &str, rank: usize) -> Result<Weight<Int>, Failure> {
    let parts: Vec<&str> = coords.split(',').collect();
    if parts.len() != rank {
        return Err(Failure::Usage(format!(
            "expected {rank} comma-separated coordinates, got {}",
            parts.len()
        )));
    }
    let mut v = Vec::with_capacity(rank);
    for p in parts {
        let c: Int = p
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("bad integer coordinate {p:?}")))?;
        v.push(c);
    }
    Ok(Weight::new(v))
}

fn parse_weight_golden(coords: &str) -> Result<Weight<GoldenInt>, Failure> {
    let parts: Vec<&str> = coords.split(',').collect();
    if parts.len() != 2 {
        return Err(Failure::Usage(format!(
            "expected 2 comma-separated coordinates, got {}",
            parts.len()
        )));
    }
    let mut v = Vec::with_capacity(2);
    for p in parts {
        v.push(GoldenInt::from_str(p.trim())?);
    }
    Ok(Weight::new(v))
}

/// Inserts the version marker every JSON object carries.
fn with_schema(v: Value) -> Value {
    let mut v = v;
    v.as_object_mut()
        .expect("schema marker goes on objects")
        .insert("schema".into(), json!(1));
    v
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_row(fields: &[String]) -> String {
    fields
        .iter()
        .map(|f| csv_field(f))
        .collect::<Vec<_>>()
        .join(",")
}

fn int_coords(w: &Weight<Int>) -> Value {
    Value::Array(
        w.coords()
            .iter()
            .map(|c| Value::String(c.to_string()))
            .collect(),
    )
}

fn golden_coords(w: &Weight<GoldenInt>) -> Result<Value, Failure> {
    let coords: Result<Vec<Value>, _> = w.coords().iter().map(serde_json::to_value).collect();
    coords
        .map(Value::Array)
        .map_err(|e| Failure::Run(e.to_string()))
}

fn int_map(m: &std::collections::BTreeMap<u32, Int>) -> Value {
    Value::Object(
        m.iter()
            .map(|(k, v)| (k.to_string(), Value::String(v.to_string())))
            .collect(),
    )
}

fn cmd_orbit(kind: &str, rank: usize, coords: &str, g: &GlobalOpts) -> Result<(), Failure> {
    let family = parse_family(kind)?;
    if family == Family::H2 {
        let k = RootSystemKind::new(family, rank)?;
        let rs = build_h2();
        let chi = parse_weight_golden(coords)?;
        let orbit = rs.orbit(&chi, g.cap())?;
        match g.format {
            Format::Table => {
                for w in &orbit {
                    println!("{w}");
                }
                println!("size {}", orbit.len());
            }
            Format::Json => {
                let rows: Result<Vec<Value>, Failure> = orbit.iter().map(golden_coords).collect();
                println!(
                    "{}",
                    with_schema(json!({
                        "kind": k.to_string(),
                        "rank": rank,
                        "weight": golden_coords(&chi)?,
                        "size": orbit.len(),
                        "orbit": rows?,
                    }))
                );
            }
            Format::Csv => {
                println!("{}", csv_row(&["c1".into(), "c2".into()]));
                for w in &orbit {
                    let fields: Vec<String> = w.coords().iter().map(|c| c.to_string()).collect();
                    println!("{}", csv_row(&fields));
                }
            }
        }
        return Ok(());
    }

    let rs = build_cryst(family, rank, g.allow_large)?;
    let chi = parse_weight_int(coords, rank)?;
    let orbit = rs.orbit(&chi, g.cap())?;
    match g.format {
        Format::Table => {
            for w in &orbit {
                println!("{w}");
            }
            println!("size {}", orbit.len());
        }
        Format::Json => {
            let rows: Vec<Value> = orbit.iter().map(int_coords).collect();
            println!(
                "{}",
                with_schema(json!({
                    "kind": rs.kind().to_string(),
                    "rank": rank,
                    "weight": int_coords(&chi),
                    "size": orbit.len(),
                    "orbit": rows,
                }))
            );
        }
        Format::Csv => {
            let header: Vec<String> = (1..=rank).map(|i| format!("c{i}")).collect();
            println!("{}", csv_row(&header));
            for w in &orbit {
                let fields: Vec<String> = w.coords().iter().map(|c| c.to_string()).collect();
                println!("{}", csv_row(&fields));
            }
        }
    }
    Ok(())
}

fn cmd_phi(
    kind: &str,
    rank: usize,
    weight: &str,
    max_degree: u32,
    g: &GlobalOpts,
) -> Result<(), Failure> {
    let family = parse_family(kind)?;
    let (kind_name, weight_json, components) = if family == Family::H2 {
        let k = RootSystemKind::new(family, rank)?;
        let rs = build_h2();
        let chi = parse_weight_golden(weight)?;
        let mut components = Vec::new();
        for i in 0..=max_degree as usize {
            components.push((i, phi_rho(&rs, &chi, i, g.cap())?.to_string()));
        }
        (k.to_string(), golden_coords(&chi)?, components)
    } else {
        let rs = build_cryst(family, rank, g.allow_large)?;
        let chi = parse_weight_int(weight, rank)?;
        let cache = g.cache();
        let mut components = Vec::new();
        for i in 0..=max_degree as usize {
            let p = phi_rho_cached(&rs, &chi, i, g.cap(), cache.as_ref())?;
            components.push((i, p.to_string()));
        }
        (rs.kind().to_string(), int_coords(&chi), components)
    };

    match g.format {
        Format::Table => {
            for (i, p) in &components {
                println!("phi^{i} = {p}");
            }
        }
        Format::Json => {
            let map: serde_json::Map<String, Value> = components
                .iter()
                .map(|(i, p)| (i.to_string(), Value::String(p.clone())))
                .collect();
            println!(
                "{}",
                with_schema(json!({
                    "kind": kind_name,
                    "rank": rank,
                    "weight": weight_json,
                    "components": map,
                }))
            );
        }
        Format::Csv => {
            println!("degree,component");
            for (i, p) in &components {
                println!("{}", csv_row(&[i.to_string(), p.clone()]));
            }
        }
    }
    Ok(())
}

fn cmd_dynkin(kind: &str, rank: usize, g: &GlobalOpts) -> Result<(), Failure> {
    let family = parse_family(kind)?;
    let rs = build_cryst(family, rank, g.allow_large)?;
    let cache = g.cache();
    let indices = dynkin_indices(&rs, g.cap(), cache.as_ref())?;
    let gcd = dynkin_gcd(&rs, g.cap(), cache.as_ref())?;
    match g.format {
        Format::Table => {
            for (j, v) in &indices {
                println!("omega_{j}: {v}");
            }
            println!("gcd: {gcd}");
        }
        Format::Json => {
            println!(
                "{}",
                with_schema(json!({
                    "kind": rs.kind().to_string(),
                    "rank": rank,
                    "indices": int_map(&indices),
                    "gcd": gcd.to_string(),
                }))
            );
        }
        Format::Csv => {
            println!("kind,rank,weight,index");
            for (j, v) in &indices {
                println!(
                    "{}",
                    csv_row(&[
                        rs.kind().to_string(),
                        rank.to_string(),
                        format!("omega_{j}"),
                        v.to_string(),
                    ])
                );
            }
            println!(
                "{}",
                csv_row(&[
                    rs.kind().to_string(),
                    rank.to_string(),
                    "gcd".into(),
                    gcd.to_string(),
                ])
            );
        }
    }
    Ok(())
}

/// One work item of a multi-system run.
#[derive(Clone, Copy)]
enum Target {
    Cryst(RootSystemKind),
    Golden,
}

enum ReportItem {
    Cryst(ExponentReport),
    Golden { report: H2Report, quadratic: String },
}

/// The standard report scope: every type whose full degree-4 run is desk
/// scale.
fn standard_scope() -> Vec<Target> {
    let mut v = Vec::new();
    let mut push = |f, n| v.push(Target::Cryst(RootSystemKind::new(f, n).expect("admissible")));
    for n in 1..=5 {
        push(Family::A, n);
    }
    for n in 2..=4 {
        push(Family::B, n);
    }
    for n in 2..=4 {
        push(Family::C, n);
    }
    push(Family::D, 4);
    push(Family::G, 2);
    push(Family::F, 4);
    push(Family::E, 6);
    v
}

fn family_scope(family: Family, allow_large: bool) -> Vec<Target> {
    let ranks: Vec<usize> = match family {
        Family::A => (1..=5).collect(),
        Family::B | Family::C => (2..=4).collect(),
        Family::D => vec![4],
        Family::G => vec![2],
        Family::F => vec![4],
        Family::E => {
            if allow_large {
                vec![6, 7, 8]
            } else {
                vec![6]
            }
        }
        Family::H2 => return vec![Target::Golden],
    };
    ranks
        .into_iter()
        .map(|n| Target::Cryst(RootSystemKind::new(family, n).expect("admissible")))
        .collect()
}

fn exponent_targets(
    kind: Option<&str>,
    rank: Option<usize>,
    allow_large: bool,
) -> Result<Vec<Target>, Failure> {
    let Some(kind) = kind else {
        if let Some(r) = rank {
            return Err(Failure::Usage(format!("--rank {r} needs --kind")));
        }
        return Ok(standard_scope());
    };
    let family = parse_family(kind)?;
    match rank {
        None => Ok(family_scope(family, allow_large)),
        Some(r) => {
            let k = RootSystemKind::new(family, r)?;
            if family == Family::H2 {
                return Ok(vec![Target::Golden]);
            }
            gate_large(k, allow_large)?;
            Ok(vec![Target::Cryst(k)])
        }
    }
}

fn compute_reports(targets: &[Target], g: &GlobalOpts) -> Result<Vec<ReportItem>, Failure> {
    let cache = g.cache();
    let run_one = |t: &Target| -> Result<ReportItem, Failure> {
        match *t {
            Target::Cryst(k) => {
                let rs = RootSystem::build(k)?;
                let r = exponent_report(&rs, g.cap(), cache.as_ref(), g.timings)?;
                Ok(ReportItem::Cryst(r))
            }
            Target::Golden => Ok(ReportItem::Golden {
                report: h2_tau2()?,
                quadratic: h2_quadratic()?.to_string(),
            }),
        }
    };
    if g.jobs == 1 {
        targets.iter().map(run_one).collect()
    } else {
        // Results are collected in target order, so the worker count never
        // shows up in the output.
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(g.jobs)
            .build()
            .map_err(|e| Failure::Run(e.to_string()))?;
        pool.install(|| targets.par_iter().map(run_one).collect())
    }
}

fn filtered(mut r: ExponentReport, max_degree: u32) -> ExponentReport {
    r.tau.retain(|d, _| *d <= max_degree);
    r.torsion_bounds.retain(|d, _| *d <= max_degree);
    r.image_contained_in_target.retain(|d, _| *d <= max_degree);
    if max_degree < 4 {
        r.ch4_constants = None;
    }
    r
}

fn tau_label(d: u32) -> &'static str {
    match d {
        2 => "τ₂",
        3 => "τ₃",
        _ => "τ₄",
    }
}

/// Human rows for one report; shared by `exponents` and `table`.
fn report_rows(r: &ExponentReport, max_degree: u32) -> Vec<String> {
    let k = &r.kind;
    let mut rows = Vec::new();
    rows.push(format!("{k}: τ₂={}", r.tau[&2]));
    if max_degree > 2 {
        let chain = (2..=max_degree)
            .map(tau_label)
            .collect::<Vec<_>>()
            .join("=");
        rows.push(format!("{k}: {chain}={}", r.tau[&2]));
    }
    let list = r
        .dynkin_per_weight
        .values()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ");
    rows.push(format!("{k}: Dynkin indices {list} (gcd {})", r.dynkin_gcd));
    if !r.torsion_bounds.is_empty() {
        let parts = r
            .torsion_bounds
            .iter()
            .map(|(d, v)| format!("{v} (deg {d})"))
            .collect::<Vec<_>>()
            .join(", ");
        rows.push(format!("{k}: torsion bounds {parts}"));
    }
    if let Some((full, two)) = r.ch4_constants {
        rows.push(format!("{k}: CH⁴ bounds {full}/{two}"));
    }
    if let Some(t) = &r.timings {
        let parts = t
            .iter()
            .map(|(name, secs)| format!("{name} {secs:.3}s"))
            .collect::<Vec<_>>()
            .join(", ");
        rows.push(format!("{k}: timings {parts}"));
    }
    rows
}

fn golden_rows(report: &H2Report, quadratic: &str) -> Vec<String> {
    vec![
        format!("H2: τ₂={} (is_sqrt5={})", report.tau2, report.is_sqrt5),
        format!("H2: quadratic {quadratic}"),
    ]
}

fn golden_json(report: &H2Report, quadratic: &str) -> Result<Value, Failure> {
    let mut v = serde_json::to_value(report).map_err(|e| Failure::Run(e.to_string()))?;
    let obj = v.as_object_mut().expect("report is an object");
    obj.insert("kind".into(), json!("H2"));
    obj.insert("rank".into(), json!(2));
    obj.insert("quadratic".into(), json!(quadratic));
    Ok(with_schema(v))
}

const REPORT_CSV_HEADER: &str =
    "kind,rank,tau2,tau3,tau4,dynkin_gcd,torsion3,torsion4,ch4_full,ch4_two_primary";

fn report_csv_row(r: &ExponentReport) -> String {
    let tau = |d: u32| r.tau.get(&d).map(ToString::to_string).unwrap_or_default();
    let bound = |d: u32| {
        r.torsion_bounds
            .get(&d)
            .map(ToString::to_string)
            .unwrap_or_default()
    };
    let (full, two) = match r.ch4_constants {
        Some((a, b)) => (a.to_string(), b.to_string()),
        None => (String::new(), String::new()),
    };
    csv_row(&[
        r.kind.clone(),
        r.rank.to_string(),
        tau(2),
        tau(3),
        tau(4),
        r.dynkin_gcd.to_string(),
        bound(3),
        bound(4),
        full,
        two,
    ])
}

fn golden_csv_row(report: &H2Report) -> String {
    csv_row(&[
        "H2".into(),
        "2".into(),
        report.tau2.to_string(),
        String::new(),
        String::new(),
        String::new(),
        String::new(),
        String::new(),
        String::new(),
        String::new(),
    ])
}

fn emit_reports(items: &[ReportItem], max_degree: u32, format: Format) -> Result<(), Failure> {
    match format {
        Format::Table => {
            for item in items {
                let rows = match item {
                    ReportItem::Cryst(r) => {
                        report_rows(&filtered(r.clone(), max_degree), max_degree)
                    }
                    ReportItem::Golden { report, quadratic } => golden_rows(report, quadratic),
                };
                for row in rows {
                    println!("{row}");
                }
            }
        }
        Format::Json => {
            for item in items {
                let v = match item {
                    ReportItem::Cryst(r) => {
                        let f = filtered(r.clone(), max_degree);
                        with_schema(
                            serde_json::to_value(&f).map_err(|e| Failure::Run(e.to_string()))?,
                        )
                    }
                    ReportItem::Golden { report, quadratic } => golden_json(report, quadratic)?,
                };
                println!("{v}");
            }
        }
        Format::Csv => {
            println!("{REPORT_CSV_HEADER}");
            for item in items {
                let row = match item {
                    ReportItem::Cryst(r) => report_csv_row(&filtered(r.clone(), max_degree)),
                    ReportItem::Golden { report, .. } => golden_csv_row(report),
                };
                println!("{row}");
            }
        }
    }
    Ok(())
}

fn cmd_exponents(
    kind: Option<&str>,
    rank: Option<usize>,
    max_degree: u32,
    g: &GlobalOpts,
) -> Result<(), Failure> {
    let targets = exponent_targets(kind, rank, g.allow_large)?;
    let items = compute_reports(&targets, g)?;
    emit_reports(&items, max_degree, g.format)
}

fn cmd_torsion_bounds(kind: &str, rank: usize, g: &GlobalOpts) -> Result<(), Failure> {
    let family = parse_family(kind)?;
    let rs = build_cryst(family, rank, g.allow_large)?;
    let cache = g.cache();
    let bounds = torsion_bounds(&rs, g.cap(), cache.as_ref())?;
    let ch4 = ch4_constants(rs.kind());
    match g.format {
        Format::Table => {
            let parts = bounds
                .iter()
                .map(|(d, v)| format!("{v} (deg {d})"))
                .collect::<Vec<_>>()
                .join(", ");
            println!("{}: torsion bounds {parts}", rs.kind());
            if let Some((full, two)) = ch4 {
                println!("{}: CH⁴ bounds {full}/{two}", rs.kind());
            }
        }
        Format::Json => {
            let ch4_value = match ch4 {
                Some((a, b)) => json!([a, b]),
                None => Value::Null,
            };
            println!(
                "{}",
                with_schema(json!({
                    "kind": rs.kind().to_string(),
                    "rank": rank,
                    "torsion_bounds": int_map(&bounds),
                    "ch4_constants": ch4_value,
                }))
            );
        }
        Format::Csv => {
            println!("kind,rank,torsion3,torsion4,ch4_full,ch4_two_primary");
            let (full, two) = match ch4 {
                Some((a, b)) => (a.to_string(), b.to_string()),
                None => (String::new(), String::new()),
            };
            let bound = |d: u32| {
                bounds
                    .get(&d)
                    .map(ToString::to_string)
                    .unwrap_or_default()
            };
            println!(
                "{}",
                csv_row(&[
                    rs.kind().to_string(),
                    rank.to_string(),
                    bound(3),
                    bound(4),
                    full,
                    two,
                ])
            );
        }
    }
    Ok(())
}

fn cmd_h2(g: &GlobalOpts) -> Result<(), Failure> {
    let report = h2_tau2()?;
    let quadratic = h2_quadratic()?.to_string();
    match g.format {
        Format::Table => {
            for row in golden_rows(&report, &quadratic) {
                println!("{row}");
            }
        }
        Format::Json => println!("{}", golden_json(&report, &quadratic)?),
        Format::Csv => {
            println!("tau2,is_sqrt5,quadratic");
            println!(
                "{}",
                csv_row(&[
                    report.tau2.to_string(),
                    report.is_sqrt5.to_string(),
                    quadratic,
                ])
            );
        }
    }
    Ok(())
}

fn cmd_verify(seed: u64, inject_cartan_flip: bool, g: &GlobalOpts) -> Result<(), Failure> {
    let mut opts = VerifyOptions {
        seed,
        inject_cartan_flip,
        ..VerifyOptions::default()
    };
    if let Some(cap) = g.orbit_cap {
        opts.cap = cap;
    }
    let results = run_checks(&opts)?;
    match g.format {
        Format::Table => {
            for r in &results {
                if r.passed {
                    println!("check {}: pass ({} cases)", r.name, r.cases);
                } else {
                    println!("check {}: FAIL {}", r.name, r.detail);
                }
            }
        }
        Format::Json => {
            for r in &results {
                let v = serde_json::to_value(r).map_err(|e| Failure::Run(e.to_string()))?;
                println!("{}", with_schema(v));
            }
        }
        Format::Csv => {
            println!("name,passed,cases,detail");
            for r in &results {
                println!(
                    "{}",
                    csv_row(&[
                        r.name.clone(),
                        r.passed.to_string(),
                        r.cases.to_string(),
                        r.detail.clone(),
                    ])
                );
            }
        }
    }
    let failed: Vec<&str> = results
        .iter()
        .filter(|r| !r.passed)
        .map(|r| r.name.as_str())
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Run(format!(
            "{} of {} checks failed: {}",
            failed.len(),
            results.len(),
            failed.join(", ")
        )))
    }
}

fn table_scope(max_rank: usize, allow_large: bool) -> Result<Vec<Target>, Failure> {
    if max_rank == 0 {
        return Err(Failure::Usage("--max-rank must be at least 1".into()));
    }
    let mut v = Vec::new();
    let mut push = |f, n| v.push(Target::Cryst(RootSystemKind::new(f, n).expect("admissible")));
    for n in 1..=max_rank {
        push(Family::A, n);
    }
    for n in 2..=max_rank {
        push(Family::B, n);
    }
    for n in 2..=max_rank {
        push(Family::C, n);
    }
    for n in 4..=max_rank {
        push(Family::D, n);
    }
    if max_rank >= 2 {
        push(Family::G, 2);
    }
    if max_rank >= 4 {
        push(Family::F, 4);
    }
    if max_rank >= 6 {
        push(Family::E, 6);
    }
    if max_rank >= 7 {
        push(Family::E, 7);
    }
    if max_rank >= 8 {
        push(Family::E, 8);
    }
    // Without --allow-large the table quietly stops at desk scale.
    Ok(v
        .into_iter()
        .filter(|t| {
            allow_large
                || match t {
                    Target::Cryst(k) => gate_large(*k, false).is_ok(),
                    Target::Golden => true,
                }
        })
        .collect())
}

fn cmd_table(max_rank: usize, g: &GlobalOpts) -> Result<(), Failure> {
    let targets = table_scope(max_rank, g.allow_large)?;
    let items = compute_reports(&targets, g)?;
    emit_reports(&items, 4, g.format)
}
