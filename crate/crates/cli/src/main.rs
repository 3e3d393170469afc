//! `hankelfiber`: build degenerate Hankel sections, emit their relation
//! families, and run the verification suites.
//!
//! Exit codes: 0 all checks pass, 1 any check fails, 2 configuration error.

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use hankelfiber_core::fiber::{fiber_report, kernel_via_elimination};
use hankelfiber_core::groebner::Budget;
use hankelfiber_core::hankel::{build_section, HankelSpec, MinorKey, MinorTable, Shape};
use hankelfiber_core::index_set::IndexSet;
use hankelfiber_core::laplace::{f_lap, lap_polynomial};
use hankelfiber_core::plucker::{grassmann_registry, hasse_dot, hasse_edges, plucker_relations};
use hankelfiber_core::poly::Polynomial;
use hankelfiber_core::report::{
    emit_report, run_suite, ReportFormat, RPolicy, SuiteConfig, SuiteKind,
};
use hankelfiber_core::syzygy::{
    birationality_check, en_syzygies, rees_fiber_type_check, reduction_fiber_multiplicity,
    BirationalityVerdict,
};
use serde_json::json;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "hankelfiber")]
#[command(about = "Exact computation and verification for degenerate Hankel determinantal ideals")]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Seed for the deterministic random evaluations
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Pair budget per basis computation
    #[arg(long, default_value_t = 1_000_000)]
    budget_pairs: u64,
    /// Time budget in seconds per basis computation
    /// (falls back to HANKELFIBER_BUDGET_SECS, then 600)
    #[arg(long)]
    budget_secs: Option<u64>,
    /// Emit JSON instead of plain text
    #[arg(long)]
    json: bool,
    /// Write output to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

impl CommonOpts {
    fn budget(&self) -> Budget {
        let secs = self
            .budget_secs
            .or_else(|| {
                std::env::var("HANKELFIBER_BUDGET_SECS")
                    .ok()
                    .and_then(|s| s.parse().ok())
            })
            .unwrap_or(600);
        Budget {
            max_pairs: self.budget_pairs,
            max_seconds: secs,
        }
    }

    fn write(&self, content: &str) -> anyhow::Result<()> {
        match &self.out {
            None => {
                print!("{content}");
                if !content.ends_with('\n') {
                    println!();
                }
                Ok(())
            }
            Some(path) => {
                let mut f = std::fs::File::create(path)
                    .with_context(|| format!("cannot write {}", path.display()))?;
                f.write_all(content.as_bytes())?;
                Ok(())
            }
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ShapeArg {
    Rect,
    Square,
}

impl From<ShapeArg> for Shape {
    fn from(s: ShapeArg) -> Shape {
        match s {
            ShapeArg::Rect => Shape::Rectangular,
            ShapeArg::Square => Shape::Square,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Hankel sections and their minor tables
    Hankel {
        #[command(subcommand)]
        cmd: HankelCmd,
    },
    /// Grassmannian combinatorics: Plücker relations and the minor poset
    Grass {
        #[command(subcommand)]
        cmd: GrassCmd,
    },
    /// Laplace relations and the staircase relation
    Laplace {
        #[command(subcommand)]
        cmd: LaplaceCmd,
    },
    /// Special fiber invariants and exact kernels
    Fiber {
        #[command(subcommand)]
        cmd: FiberCmd,
    },
    /// Syzygies, birationality, Rees fiber type
    Syz {
        #[command(subcommand)]
        cmd: SyzCmd,
    },
    /// Run the verification suites and emit a report
    Suite(SuiteArgs),
}

#[derive(Subcommand)]
enum HankelCmd {
    /// Print the section in the plain-text grammar
    Print {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        r: u32,
        #[arg(long, value_enum, default_value = "rect")]
        shape: ShapeArg,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Emit the minor table as JSON
    Minors {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        r: u32,
        #[arg(long, value_enum, default_value = "rect")]
        shape: ShapeArg,
        /// Minor size (defaults to n)
        #[arg(long)]
        size: Option<usize>,
        #[command(flatten)]
        common: CommonOpts,
    },
}

#[derive(Subcommand)]
enum GrassCmd {
    /// Emit the three-term Plücker relations of Gr(n, n+2)
    Plucker {
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Emit the Hasse diagram of the minor poset
    Poset {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value = "dot")]
        format: String,
        #[command(flatten)]
        common: CommonOpts,
    },
}

#[derive(Subcommand)]
enum LaplaceCmd {
    /// One Laplace relation LAP_a
    Lap {
        #[arg(long)]
        n: u32,
        /// Comma-separated index set a, e.g. 5,6
        #[arg(long, value_delimiter = ',')]
        a: Vec<u32>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// The degree-n staircase relation
    Flap {
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        common: CommonOpts,
    },
}

#[derive(Subcommand)]
enum FiberCmd {
    /// Verify fiber invariants for one (n, r)
    Report {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        r: u32,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Exact kernel by block elimination
    Kernel {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        r: u32,
        #[command(flatten)]
        common: CommonOpts,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BirTarget {
    Minors,
    Gradient,
}

#[derive(Subcommand)]
enum SyzCmd {
    /// Eagon-Northcott columns with exact annihilation check
    En {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        r: u32,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Rank criterion for birationality
    Birational {
        #[arg(long, value_enum)]
        target: BirTarget,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        r: u32,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Rees fiber-type check (and reduction multiplicity)
    Rees {
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        common: CommonOpts,
    },
}

#[derive(Args)]
struct SuiteArgs {
    /// n range, e.g. "3" or "2..4"
    #[arg(long, default_value = "2..4")]
    n: String,
    /// "all" or a comma list like "0,1"
    #[arg(long, default_value = "all")]
    r: String,
    /// Comma list of suites: relations,fiber,kernel,syzygy,rees or "all"
    #[arg(long, default_value = "relations,fiber")]
    suites: String,
    /// Output format
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
    /// Include real wall times (breaks byte-for-byte reproducibility)
    #[arg(long)]
    timings: bool,
    #[command(flatten)]
    common: CommonOpts,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Text,
}

impl From<FormatArg> for ReportFormat {
    fn from(f: FormatArg) -> ReportFormat {
        match f {
            FormatArg::Json => ReportFormat::Json,
            FormatArg::Csv => ReportFormat::Csv,
            FormatArg::Text => ReportFormat::Text,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            // configuration and validation problems exit with 2
            let msg = format!("{e:#}");
            if msg.contains("invalid configuration") || msg.contains("must be") {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn dispatch(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Hankel { cmd } => hankel_cmd(cmd),
        Command::Grass { cmd } => grass_cmd(cmd),
        Command::Laplace { cmd } => laplace_cmd(cmd),
        Command::Fiber { cmd } => fiber_cmd(cmd),
        Command::Syz { cmd } => syz_cmd(cmd),
        Command::Suite(args) => suite_cmd(args),
    }
}

fn hankel_cmd(cmd: HankelCmd) -> anyhow::Result<ExitCode> {
    match cmd {
        HankelCmd::Print { n, r, shape, common } => {
            let spec = HankelSpec::new(n, r, shape.into())?;
            let m = build_section(&spec);
            let mut out = String::new();
            for i in 0..m.rows() {
                let row: Vec<String> = (0..m.cols()).map(|j| m.get(i, j).to_string()).collect();
                out.push_str(&row.join(", "));
                out.push('\n');
            }
            common.write(&out)?;
            Ok(ExitCode::SUCCESS)
        }
        HankelCmd::Minors {
            n,
            r,
            shape,
            size,
            common,
        } => {
            let spec = HankelSpec::new(n, r, shape.into())?;
            let table = MinorTable::build(&spec, size.unwrap_or(n as usize))?;
            let mut map = serde_json::Map::new();
            for (key, poly) in &table.entries {
                let label = match key {
                    MinorKey::Cols(c) => c.to_string(),
                    MinorKey::RowsCols(rs, cs) => format!("{rs}x{cs}"),
                };
                map.insert(label, json!(poly.to_string()));
            }
            common.write(&(serde_json::to_string_pretty(&map)? + "\n"))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn grass_cmd(cmd: GrassCmd) -> anyhow::Result<ExitCode> {
    match cmd {
        GrassCmd::Plucker { n, common } => {
            let (_, rels) = plucker_relations(n)?;
            let mut out = String::new();
            for rel in &rels {
                out.push_str(&rel.to_string());
                out.push('\n');
            }
            common.write(&out)?;
            Ok(ExitCode::SUCCESS)
        }
        GrassCmd::Poset { n, format, common } => {
            let out = match format.as_str() {
                "dot" => hasse_dot(n + 2, n as usize),
                "edges" => {
                    let mut s = String::new();
                    for (a, b) in hasse_edges(n + 2, n as usize) {
                        s.push_str(&format!("{a} -> {b}\n"));
                    }
                    s
                }
                other => anyhow::bail!("invalid configuration: unknown poset format {other:?}"),
            };
            common.write(&out)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn laplace_cmd(cmd: LaplaceCmd) -> anyhow::Result<ExitCode> {
    match cmd {
        LaplaceCmd::Lap { n, a, common } => {
            let reg = grassmann_registry(n + 2, n as usize);
            let a_set = IndexSet::new(n + 2, a)?;
            let lap = lap_polynomial(&reg, n, &a_set)?;
            emit_poly(&common, &lap, json!({"n": n, "a": a_set.to_string()}))?;
            Ok(ExitCode::SUCCESS)
        }
        LaplaceCmd::Flap { n, common } => {
            let reg = grassmann_registry(n + 2, n as usize);
            let f = f_lap(&reg, n)?;
            emit_poly(
                &common,
                &f,
                json!({
                    "n": n,
                    "normalization": "anchor T[2..n,n+2]^n = -1",
                }),
            )?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn emit_poly(common: &CommonOpts, p: &Polynomial, meta: serde_json::Value) -> anyhow::Result<()> {
    if common.json {
        let mut obj = meta;
        let map = obj.as_object_mut().expect("meta is an object");
        map.insert("polynomial".into(), json!(p.to_string()));
        map.insert("term_count".into(), json!(p.num_terms()));
        map.insert("degree".into(), json!(p.degree()));
        common.write(&(serde_json::to_string_pretty(&obj)? + "\n"))
    } else {
        common.write(&(p.to_string() + "\n"))
    }
}

fn fiber_cmd(cmd: FiberCmd) -> anyhow::Result<ExitCode> {
    match cmd {
        FiberCmd::Report { n, r, common } => {
            let summary = fiber_report(n, r, &common.budget())?;
            let ok = summary.checks.all_ok();
            if common.json {
                common.write(&(serde_json::to_string_pretty(&summary)? + "\n"))?;
            } else {
                common.write(&format!(
                    "n={n} r={r}: dim={} e={} reg={} a={} [{}]\n",
                    summary.hilbert.krull_dim,
                    summary.hilbert.multiplicity,
                    summary.regularity_cm,
                    summary.hilbert.a_invariant,
                    if ok { "pass" } else { "fail" },
                ))?;
            }
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        FiberCmd::Kernel { n, r, common } => {
            let table = MinorTable::maximal(n, r)?;
            let kernel = kernel_via_elimination(&table, &common.budget())?;
            if common.json {
                let basis: Vec<String> =
                    kernel.gb.elements.iter().map(|e| e.to_string()).collect();
                common.write(&(serde_json::to_string_pretty(&json!({
                    "n": n,
                    "r": r,
                    "basis": basis,
                    "complete": kernel.gb.complete,
                }))? + "\n"))?;
            } else {
                let mut out = String::new();
                for e in &kernel.gb.elements {
                    out.push_str(&e.to_string());
                    out.push('\n');
                }
                common.write(&out)?;
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn syz_cmd(cmd: SyzCmd) -> anyhow::Result<ExitCode> {
    match cmd {
        SyzCmd::En { n, r, common } => {
            let syz = en_syzygies(n, r)?;
            let ok = syz.annihilates()?;
            if common.json {
                common.write(&(serde_json::to_string_pretty(&json!({
                    "n": n, "r": r,
                    "columns": syz.matrix.cols(),
                    "annihilates": ok,
                }))? + "\n"))?;
            } else {
                common.write(&format!(
                    "{} columns, annihilation {}\n",
                    syz.matrix.cols(),
                    if ok { "exact" } else { "FAILED" }
                ))?;
            }
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        SyzCmd::Birational {
            target,
            n,
            r,
            common,
        } => {
            let budget = common.budget();
            let (gens, ambient, fiber_dim) = match target {
                BirTarget::Minors => {
                    let table = MinorTable::maximal(n, r)?;
                    let keys = table.column_sets();
                    let gens: Vec<Polynomial> = keys
                        .iter()
                        .map(|k| table.get(k).cloned())
                        .collect::<hankelfiber_core::Result<_>>()?;
                    let dim = fiber_report(n, r, &budget)?.hilbert.krull_dim;
                    (gens, 2 * n + 1 - r, dim)
                }
                BirTarget::Gradient => {
                    let gs = hankelfiber_core::syzygy::gradient_section(n, n - 1)?;
                    let gens: Vec<Polynomial> = gs
                        .partials
                        .iter()
                        .filter(|p| !p.is_zero())
                        .cloned()
                        .collect();
                    let (_, hs) = reduction_fiber_multiplicity(n, &budget)?;
                    (gens, n + 2, hs.krull_dim)
                }
            };
            let report = birationality_check(&gens, ambient, fiber_dim, common.seed)?;
            let certified = report.verdict == BirationalityVerdict::BirationalCertified;
            if common.json {
                let cert = report.certificate.as_ref().map(|c| {
                    json!({"rows": c.rows, "cols": c.cols})
                });
                common.write(&(serde_json::to_string_pretty(&json!({
                    "n": n, "r": r,
                    "analytic_spread": report.analytic_spread,
                    "ambient_dim": report.ambient_dim,
                    "linear_syzygy_rank": report.linear_syzygy_rank,
                    "verdict": report.verdict,
                    "certificate": cert,
                }))? + "\n"))?;
            } else {
                common.write(&format!(
                    "spread={} ambient={} rank={} -> {}\n",
                    report.analytic_spread,
                    report.ambient_dim,
                    report.linear_syzygy_rank,
                    if certified {
                        "birational-certified"
                    } else {
                        "inconclusive"
                    }
                ))?;
            }
            Ok(if certified {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        SyzCmd::Rees { n, common } => {
            let report = rees_fiber_type_check(n, &common.budget())?;
            let ok = report.fiber_type == Some(true);
            if common.json {
                common.write(&(serde_json::to_string_pretty(&report)? + "\n"))?;
            } else {
                let verdict = match report.fiber_type {
                    Some(true) => "fiber type: yes",
                    Some(false) => "fiber type: NO",
                    None => "fiber type: not determined",
                };
                common.write(&format!("{verdict} ({} generators)\n", report.generators.len()))?;
            }
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn parse_n_range(s: &str) -> anyhow::Result<(u32, u32)> {
    if let Some((a, b)) = s.split_once("..") {
        let lo: u32 = a.trim().parse().context("invalid configuration: bad n range")?;
        let hi: u32 = b.trim().parse().context("invalid configuration: bad n range")?;
        Ok((lo, hi))
    } else {
        let v: u32 = s.trim().parse().context("invalid configuration: bad n")?;
        Ok((v, v))
    }
}

fn suite_cmd(args: SuiteArgs) -> anyhow::Result<ExitCode> {
    let (n_min, n_max) = parse_n_range(&args.n)?;
    let r_policy = if args.r == "all" {
        RPolicy::All
    } else {
        let list: Vec<u32> = args
            .r
            .split(',')
            .map(|p| p.trim().parse().context("invalid configuration: bad r list"))
            .collect::<anyhow::Result<_>>()?;
        RPolicy::List(list)
    };
    let suites = if args.suites == "all" {
        SuiteKind::all()
    } else {
        args.suites
            .split(',')
            .map(|s| SuiteKind::parse(s.trim()).map_err(anyhow::Error::from))
            .collect::<anyhow::Result<_>>()?
    };
    let config = SuiteConfig {
        n_min,
        n_max,
        r_policy,
        budget: args.common.budget(),
        seed: args.common.seed,
        suites,
        include_timings: args.timings,
    };
    let doc = run_suite(&config)?;
    let format = if args.common.json {
        ReportFormat::Json
    } else {
        args.format.into()
    };
    args.common.write(&emit_report(&doc, format))?;
    Ok(if doc.any_fail() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}
