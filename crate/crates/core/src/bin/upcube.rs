use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::json;

use upcube::bounds::bound_sweep_csv;
use upcube::constructions::{
    dictator, kahn_triple, q5_triple, qcurve, qcurve_csv, threshold, uniform_grid, TripleSystem,
};
use upcube::harness::HkRandomConfig;
use upcube::posets::{five_point_poset, WeightedPoset};
use upcube::rational::{fmt_ratio, parse_rational};
use upcube::report::{self, Report};
use upcube::search::{local_search, LocalSearchConfig, ObjectiveKind, SearchObjective};
use upcube::setcube::{read_upset_file, write_upset, write_upset_file};
use upcube::{Bias, Error, Family};

#[derive(Parser)]
#[command(
    name = "upcube",
    version,
    about = "Exact computations with upsets of the biased hypercube"
)]
struct Cli {
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    /// Directory for report and `.upset` files.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Check a named result exactly.
    Verify {
        #[arg(value_enum)]
        target: VerifyTarget,
        /// Grid denominator for `lp` and `poset`.
        #[arg(long)]
        grid: Option<u32>,
        /// Tolerance for the bound maximizer.
        #[arg(long, default_value = "1/1000000000", value_parser = rational)]
        tol: BigRational,
    },
    /// Biased measure of an `.upset` file.
    Measure {
        file: PathBuf,
        #[arg(long, default_value = "1/2")]
        p: Bias,
    },
    /// Up-closure of the generators in an `.upset` file.
    Closure { file: PathBuf },
    /// The occupancy bound `3ρ(1-ρ)/(1+ρ)`.
    Bound(BoundArgs),
    /// Solve the occupancy LP at one density.
    Lp {
        #[arg(long, value_parser = rational)]
        rho: BigRational,
    },
    /// Exactly-one measure of the level-threshold triple over a bias grid.
    Qcurve {
        #[arg(long, default_value_t = 7)]
        n: u32,
        #[arg(long, default_value_t = 3)]
        l: u32,
        #[arg(long, default_value_t = 64)]
        grid: u32,
    },
    /// Build a named family or triple.
    Build(BuildArgs),
    /// Local search for triples with a large objective.
    Search(SearchArgs),
    /// Correlation scan over the upsets of a weighted poset.
    Poset(PosetArgs),
    /// Correlation inequality on random pairs of upsets.
    HkRandom {
        #[arg(long, default_value_t = 8)]
        n: u32,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "1/2")]
        p: Bias,
        /// Draw both upsets with the same number of members.
        #[arg(long)]
        force_equal: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyTarget {
    Q5,
    Kahn,
    Lp,
    Poset,
    All,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct BoundArgs {
    #[arg(long, value_parser = rational)]
    rho: Option<BigRational>,
    /// Tabulate `ρ = i/K` for `i = 0..=K`.
    #[arg(long, value_name = "K")]
    sweep: Option<u32>,
    /// Locate the maximum to within the given tolerance.
    #[arg(long, value_name = "TOL", value_parser = rational)]
    maximize: Option<BigRational>,
}

#[derive(Clone, Copy, ValueEnum)]
enum BuildTarget {
    Q21,
    Q5,
    Dictator,
    Threshold,
    Kahn,
}

#[derive(Args)]
struct BuildArgs {
    #[arg(value_enum)]
    target: BuildTarget,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    l: Option<u32>,
    /// Coordinate for `dictator`.
    #[arg(long)]
    i: Option<u32>,
    /// Omit family listings from the report.
    #[arg(long)]
    no_families: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Objective {
    S1,
    MinPart,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, default_value_t = 5)]
    n: u32,
    #[arg(long, default_value = "1/2", value_parser = rational)]
    rho: BigRational,
    #[arg(long, value_enum, default_value_t = Objective::S1)]
    objective: Objective,
    /// Bias of the objective measure; defaults to `rho`.
    #[arg(long)]
    p: Option<Bias>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Iterations per restart.
    #[arg(long, default_value_t = 100_000)]
    iters: u64,
    #[arg(long, default_value_t = 1)]
    restarts: u32,
}

#[derive(Args)]
struct PosetArgs {
    /// The five-element poset with weights depending on `--p`.
    #[arg(
        long,
        visible_alias = "paper-P",
        required_unless_present = "file",
        conflicts_with = "file"
    )]
    five_point: bool,
    /// JSON poset description.
    #[arg(long)]
    file: Option<PathBuf>,
    #[arg(long, default_value = "1/3", requires = "five_point")]
    p: Bias,
}

fn rational(s: &str) -> Result<BigRational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(k) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
        {
            eprintln!("upcube: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("upcube: {e}");
            ExitCode::from(2)
        }
    }
}

/// What a verb produced: a report, plus a table for verbs with a natural
/// CSV form, plus families to write under `--out`.
struct Output {
    report: Report,
    table: Option<String>,
    families: Vec<(String, Family)>,
}

impl From<Report> for Output {
    fn from(report: Report) -> Self {
        Output {
            report,
            table: None,
            families: Vec::new(),
        }
    }
}

fn run(cli: &Cli) -> Result<bool, Error> {
    let out = execute(&cli.command, cli.out.is_some())?;
    let rendered = match (cli.format, &out.table) {
        (Format::Csv, Some(t)) => t.clone(),
        (Format::Csv, None) => out.report.to_csv(),
        (Format::Json, _) => format!("{:#}\n", out.report.to_json()),
        (Format::Text, _) => out.report.to_text(),
    };
    print!("{rendered}");
    if let Some(dir) = &cli.out {
        fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
        let ext = match cli.format {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Text => "txt",
        };
        let path = dir.join(format!("{}.{ext}", out.report.verb));
        fs::write(&path, &rendered).map_err(|e| io_err(&path, e))?;
        for (name, f) in &out.families {
            write_upset_file(f, dir.join(format!("{name}.upset")))?;
        }
    }
    if !out.report.passed() {
        eprintln!(
            "upcube: failed checks: {}",
            out.report.failed_checks().join(", ")
        );
    }
    Ok(out.report.passed())
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn execute(cmd: &Command, to_disk: bool) -> Result<Output, Error> {
    Ok(match cmd {
        Command::Verify { target, grid, tol } => verify(*target, *grid, tol)?.into(),
        Command::Measure { file, p } => {
            let f = read_upset_file(file)?;
            report::measure_report(&f, p, &file.display().to_string())?.into()
        }
        Command::Closure { file } => {
            let f = read_upset_file(file)?;
            let mut out = Output::from(report::closure_report(&f, &file.display().to_string())?);
            out.families.push(("closure".into(), f.up_closure()));
            out
        }
        Command::Bound(args) => bound(args)?,
        Command::Lp { rho } => report::lp_report(rho)?.into(),
        Command::Qcurve { n, l, grid } => {
            let curve = qcurve(*n, *l, &uniform_grid(*grid)?)?;
            let table = qcurve_csv(&curve);
            let mut r = Report::informational("qcurve", format!("kahn(n={n},l={l})"));
            let rows: Vec<_> = curve
                .iter()
                .map(|(p, q)| json!({"p": p.to_string(), "q": fmt_ratio(q)}))
                .collect();
            r.insert("rows", rows.into());
            Output {
                report: r,
                table: Some(table),
                families: Vec::new(),
            }
        }
        Command::Build(args) => build(args, to_disk)?,
        Command::Search(args) => {
            let kind = match args.objective {
                Objective::S1 => ObjectiveKind::S1Density,
                Objective::MinPart => ObjectiveKind::MinPartDensity,
            };
            let bias = match &args.p {
                Some(p) => p.clone(),
                None => Bias::new(args.rho.clone())?,
            };
            let objective = SearchObjective::new(kind, bias)?;
            let cfg =
                LocalSearchConfig::new(args.n, args.rho.clone(), objective, args.seed, args.iters)
                    .with_restarts(args.restarts);
            let res = local_search(&cfg)?;
            let prov = format!("search(n={},seed={})", args.n, args.seed);
            let mut out = Output::from(report::search_report(&res, &prov));
            out.families = triple_files(&res.triple);
            out
        }
        Command::Poset(args) => {
            if let Some(path) = &args.file {
                report::poset_report(&WeightedPoset::from_json_file(path)?, None)?.into()
            } else {
                report::poset_report(&five_point_poset(&args.p)?, Some(&args.p))?.into()
            }
        }
        Command::HkRandom {
            n,
            trials,
            seed,
            p,
            force_equal,
        } => report::hk_random_report(&HkRandomConfig {
            n: *n,
            trials: *trials,
            seed: *seed,
            p: p.clone(),
            force_equal: *force_equal,
        })?
        .into(),
    })
}

fn verify(target: VerifyTarget, grid: Option<u32>, tol: &BigRational) -> Result<Report, Error> {
    match target {
        VerifyTarget::Q5 => report::verify_q5(),
        VerifyTarget::Kahn => report::verify_kahn(),
        VerifyTarget::Lp => report::verify_lp(grid.unwrap_or(64), tol),
        VerifyTarget::Poset => report::verify_poset(grid.unwrap_or(32)),
        VerifyTarget::All => {
            let parts = [
                report::verify_q5()?,
                report::verify_kahn()?,
                report::verify_lp(grid.unwrap_or(64), tol)?,
                report::verify_poset(grid.unwrap_or(32))?,
            ];
            Ok(Report::combine("verify", parts))
        }
    }
}

fn bound(args: &BoundArgs) -> Result<Output, Error> {
    if let Some(rho) = &args.rho {
        return Ok(report::bound_report(rho).into());
    }
    if let Some(k) = args.sweep {
        let table = bound_sweep_csv(k)?;
        let mut r = Report::informational("bound", format!("sweep(k={k})"));
        r.insert("sweep", table.clone().into());
        return Ok(Output {
            report: r,
            table: Some(table),
            families: Vec::new(),
        });
    }
    let tol = args
        .maximize
        .as_ref()
        .expect("clap requires one bound mode");
    Ok(report::bound_maximum_report(tol)?.into())
}

fn triple_files(t: &TripleSystem) -> Vec<(String, Family)> {
    vec![
        ("x".into(), t.x.clone()),
        ("y".into(), t.y.clone()),
        ("z".into(), t.z.clone()),
    ]
}

fn build(args: &BuildArgs, to_disk: bool) -> Result<Output, Error> {
    let need = |v: Option<u32>, name: &str| {
        v.ok_or_else(|| Error::InvalidParams(format!("build needs --{name}")))
    };
    let (label, families): (String, Vec<(String, Family)>) = match args.target {
        BuildTarget::Q21 => {
            let (r, t, _) = report::build_q21_report(!args.no_families)?;
            let mut out = Output::from(r);
            if to_disk && !args.no_families {
                out.families = triple_files(&t);
            }
            return Ok(out);
        }
        BuildTarget::Q5 => ("q5".into(), triple_files(&q5_triple())),
        BuildTarget::Kahn => {
            let (n, l) = (need(args.n, "n")?, need(args.l, "l")?);
            (
                format!("kahn(n={n},l={l})"),
                triple_files(&kahn_triple(n, l)?),
            )
        }
        BuildTarget::Dictator => {
            let (n, i) = (need(args.n, "n")?, need(args.i, "i")?);
            (
                format!("dictator(n={n},i={i})"),
                vec![("dictator".into(), dictator(n, i)?)],
            )
        }
        BuildTarget::Threshold => {
            let (n, l) = (need(args.n, "n")?, need(args.l, "l")?);
            (
                format!("threshold(n={n},l={l})"),
                vec![("threshold".into(), threshold(n, l)?)],
            )
        }
    };
    let mut r = Report::informational("build", label);
    let mut summary = serde_json::Map::new();
    for (name, f) in &families {
        let mut entry =
            json!({"n": f.n(), "count": f.count(), "upward_closed": f.is_upward_closed()});
        if !args.no_families {
            entry["upset"] = write_upset(f)?.into();
        }
        summary.insert(name.clone(), entry);
    }
    r.insert("families", summary.into());
    Ok(Output {
        report: r,
        table: None,
        families: if to_disk { families } else { Vec::new() },
    })
}
