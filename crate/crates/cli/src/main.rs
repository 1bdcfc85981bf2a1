use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use tree_crossings::geometry::{
    binomial4, kn_crossing_pairs, parse_points, rectilinear_crossing_number,
    validate_general_position,
};
use tree_crossings::montecarlo::{histogram_csv, run_experiment};
use tree_crossings::stats::{
    closed_form_mean, closed_form_second_moment, cumulant_scaling_report_for, exact_distribution,
    fit_laurent_polynomial, format_rational, rational_to_f64, rationals_to_csv, raw_moment,
    EnumerationOptions, CUMULANT_GUARD,
};
use tree_crossings::tree::{
    contains_forest, count_trees_containing, enumerate_trees, forest_probability,
    parse_edge_list, tree_count, Forest,
};
use tree_crossings::verify::{all_passed, run_verification, Suite, REFERENCE_MAX_N};
use tree_crossings::{Error, ErrorClass, PointConfig, Rational};

const EXIT_USAGE: u8 = 2;
const EXIT_INPUT: u8 = 3;
const EXIT_GUARD: u8 = 4;

/// Crossings of uniform random labelled trees drawn on planar point sets.
#[derive(Parser)]
#[command(name = "treecross", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact crossing distribution by enumerating all n^(n-2) trees.
    Dist(DistArgs),
    /// Exact raw moments E[X^j] for convex position, with closed forms.
    Moments(MomentsArgs),
    /// Exact cumulants C_1..C_k and their growth.
    Cumulants(CumulantsArgs),
    /// Exact Laurent-polynomial fit of an enumerated moment sequence.
    Fit(FitArgs),
    /// Rectilinear crossing number of a point set.
    Crnumber(CrnumberArgs),
    /// Number and probability of trees containing a given forest.
    ForestProb(ForestProbArgs),
    /// Monte Carlo sampling experiment with normality diagnostics.
    Sample(SampleArgs),
    /// Regression checks against reference tables.
    Verify(VerifyArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ConfigSource {
    /// Points in convex position, labelled in hull order.
    #[arg(long)]
    convex: bool,
    /// Point-set file: one "x y" integer pair per line, '#' comments.
    #[arg(long, value_name = "FILE")]
    points: Option<PathBuf>,
}

#[derive(Args)]
struct DistArgs {
    #[arg(long)]
    n: Option<usize>,
    #[command(flatten)]
    source: ConfigSource,
    #[arg(long, default_value_t = 64)]
    shards: usize,
    /// Write the CSV here instead of stdout.
    #[arg(long, value_name = "CSV")]
    out: Option<PathBuf>,
    /// Enumerate above the default size guard.
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct MomentsArgs {
    #[arg(long)]
    n_max: usize,
    /// Accepted for symmetry with other commands; moments are always convex.
    #[arg(long)]
    convex: bool,
    #[arg(long, default_value_t = 2)]
    k: u32,
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct CumulantsArgs {
    #[arg(long, default_value_t = 1)]
    n_min: usize,
    #[arg(long)]
    n_max: usize,
    #[arg(long, default_value_t = 4)]
    k: usize,
    #[arg(long, value_name = "CSV")]
    out: Option<PathBuf>,
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct FitArgs {
    /// Which raw moment to fit.
    #[arg(long, default_value_t = 2)]
    moment: u32,
    #[arg(long, default_value_t = 2)]
    n_min: usize,
    #[arg(long, default_value_t = 10)]
    n_max: usize,
    #[arg(long, default_value_t = -4, allow_negative_numbers = true)]
    exp_min: i32,
    #[arg(long, default_value_t = 4, allow_negative_numbers = true)]
    exp_max: i32,
    /// Explicit list of n values, overriding --n-min/--n-max.
    #[arg(long, value_delimiter = ',')]
    ns: Option<Vec<usize>>,
}

#[derive(Args)]
struct CrnumberArgs {
    #[arg(long)]
    n: Option<usize>,
    #[command(flatten)]
    source: ConfigSource,
}

#[derive(Args)]
struct ForestProbArgs {
    #[arg(long)]
    n: usize,
    /// Forest edges as "a-b,c-d" with labels in 1..=n.
    #[arg(long, allow_hyphen_values = true)]
    edges: String,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    samples: u64,
    #[arg(long)]
    seed: u64,
    #[command(flatten)]
    source: ConfigSource,
    /// Write the JSON report here instead of stdout.
    #[arg(long, value_name = "JSON")]
    out: Option<PathBuf>,
    /// Also write the histogram as CSV.
    #[arg(long, value_name = "CSV")]
    histogram: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Tables,
    Formulas,
    All,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = SuiteArg::All)]
    suite: SuiteArg,
    #[arg(long, default_value_t = 9)]
    max_n: usize,
    #[arg(long, default_value_t = 64)]
    shards: usize,
}

enum Failure {
    Core(Error),
    Usage(String),
    Input(String),
    /// Checks ran but some failed; the report is already printed.
    Checks,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Dist(a) => cmd_dist(a),
        Command::Moments(a) => cmd_moments(a),
        Command::Cumulants(a) => cmd_cumulants(a),
        Command::Fit(a) => cmd_fit(a),
        Command::Crnumber(a) => cmd_crnumber(a),
        Command::ForestProb(a) => cmd_forest_prob(a),
        Command::Sample(a) => cmd_sample(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.class() {
                ErrorClass::Usage => EXIT_USAGE,
                ErrorClass::InputData => EXIT_INPUT,
                ErrorClass::Guard => EXIT_GUARD,
            })
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Checks) => ExitCode::FAILURE,
    }
}

fn load_config(n: Option<usize>, source: &ConfigSource) -> Result<PointConfig, Failure> {
    match (&source.points, n) {
        (Some(path), n) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            let points = parse_points(&text)
                .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            if let Some(n) = n {
                if n != points.len() {
                    return Err(Failure::Usage(format!(
                        "--n {n} but {} has {} points",
                        path.display(),
                        points.len()
                    )));
                }
            }
            let config = PointConfig::Coordinates(points);
            validate_general_position(&config)?;
            Ok(config)
        }
        (None, Some(n)) => Ok(PointConfig::Convex(n)),
        (None, None) => Err(Failure::Usage("--convex requires --n".into())),
    }
}

fn emit(out: Option<&Path>, text: &str) -> CmdResult {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::Usage(format!("cannot write output: {e}")))
        }
    }
}

fn enumeration_options(shards: usize, force: bool) -> EnumerationOptions {
    EnumerationOptions {
        shards,
        force,
        ..EnumerationOptions::default()
    }
}

fn cmd_dist(a: DistArgs) -> CmdResult {
    if a.shards == 0 {
        return Err(Failure::Usage("--shards must be at least 1".into()));
    }
    let config = load_config(a.n, &a.source)?;
    let mut opts = enumeration_options(a.shards, a.force);
    opts.progress = Some(Arc::new(|done, total| {
        if done == total || done % (total / 8).max(1) == 0 {
            eprintln!("shard {done}/{total}");
        }
    }));
    let dist = exact_distribution(config.len(), &config, &opts)?;
    emit(a.out.as_deref(), &dist.to_csv())
}

fn cmd_moments(a: MomentsArgs) -> CmdResult {
    if a.k == 0 {
        return Err(Failure::Usage("--k must be at least 1".into()));
    }
    let opts = enumeration_options(64, a.force);
    println!("n,j,enumerated,closed_form,status");
    for n in 1..=a.n_max {
        let dist = exact_distribution(n, &PointConfig::Convex(n), &opts)?;
        for j in 1..=a.k {
            let m = raw_moment(&dist, j);
            let closed = match j {
                1 => Some(closed_form_mean(n as u64)),
                2 => Some(closed_form_second_moment(n as u64)?),
                _ => None,
            };
            let (closed_text, status) = match &closed {
                Some(c) if *c == m => (format_rational(c), "MATCH"),
                Some(c) => (format_rational(c), "MISMATCH"),
                None => ("-".to_string(), "-"),
            };
            println!("{n},{j},{},{closed_text},{status}", format_rational(&m));
        }
    }
    Ok(())
}

fn cmd_cumulants(a: CumulantsArgs) -> CmdResult {
    if a.n_min == 0 || a.n_min > a.n_max {
        return Err(Failure::Usage(format!("bad range {}..={}", a.n_min, a.n_max)));
    }
    if a.k == 0 || a.k > CUMULANT_GUARD {
        return Err(Error::CumulantGuard {
            k: a.k,
            limit: CUMULANT_GUARD,
        }
        .into());
    }
    let configs: Vec<PointConfig> = (a.n_min..=a.n_max).map(PointConfig::Convex).collect();
    let report = cumulant_scaling_report_for(&configs, a.k, &enumeration_options(64, a.force))?;
    let csv = rationals_to_csv(report.rows.iter().flat_map(|row| {
        row.cumulants
            .iter()
            .enumerate()
            .map(move |(i, c)| (format!("C{}_n{}", i + 1, row.n), c))
    }));
    emit(a.out.as_deref(), &csv)?;
    let mut summary = String::new();
    for row in &report.rows {
        let normalized: Vec<String> = row.normalized.iter().map(|x| format!("{x:.6e}")).collect();
        summary.push_str(&format!("n={} C_k/n^(3k/2): {}\n", row.n, normalized.join(" ")));
    }
    for (i, slope) in report.slopes.iter().enumerate() {
        match slope {
            Some(s) => summary.push_str(&format!("log-log slope of |C{}|: {s:.4}\n", i + 1)),
            None => summary.push_str(&format!("log-log slope of |C{}|: n/a\n", i + 1)),
        }
    }
    if a.out.is_some() {
        print!("{summary}");
    } else {
        eprint!("{summary}");
    }
    Ok(())
}

fn cmd_fit(a: FitArgs) -> CmdResult {
    if a.moment == 0 {
        return Err(Failure::Usage("--moment must be at least 1".into()));
    }
    if a.exp_min > a.exp_max {
        return Err(Failure::Usage("--exp-min exceeds --exp-max".into()));
    }
    let ns = match a.ns {
        Some(ns) => ns,
        None if a.n_min >= 1 && a.n_min <= a.n_max => (a.n_min..=a.n_max).collect(),
        None => return Err(Failure::Usage(format!("bad range {}..={}", a.n_min, a.n_max))),
    };
    let unknowns = (a.exp_max - a.exp_min + 1) as usize;
    if ns.len() != unknowns {
        return Err(Failure::Usage(format!(
            "{} values of n for {unknowns} unknown coefficients",
            ns.len()
        )));
    }
    if let Some(&bad) = ns.iter().find(|&&n| n == 0) {
        return Err(Failure::Usage(format!("n = {bad} is not a valid size")));
    }
    let opts = EnumerationOptions::default();
    let mut points = Vec::with_capacity(ns.len());
    for &n in &ns {
        let dist = exact_distribution(n, &PointConfig::Convex(n), &opts)?;
        points.push((n as i64, raw_moment(&dist, a.moment)));
    }
    let fit = fit_laurent_polynomial(&points, a.exp_min..=a.exp_max)?;
    println!("exponent,coefficient");
    for (e, c) in fit.exponents.iter().zip(&fit.coefficients).rev() {
        println!("{e},{}", format_rational(c));
    }
    println!("n,value,residual");
    for ((n, v), r) in points.iter().zip(&fit.residuals) {
        println!("{n},{},{}", format_rational(v), format_rational(r));
    }
    Ok(())
}

fn cmd_crnumber(a: CrnumberArgs) -> CmdResult {
    let config = load_config(a.n, &a.source)?;
    let n = config.len();
    let cr = rectilinear_crossing_number(&config)?;
    let quads = binomial4(n);
    println!("n = {n}");
    println!("crossing number = {cr}");
    println!("C(n,4) = {quads}");
    if quads == 0u32.into() {
        println!("ratio = undefined (n < 4)");
    } else {
        let r = Rational::new(BigInt::from(cr.clone()), BigInt::from(quads));
        println!("ratio = {} ({:.6})", format_rational(&r), rational_to_f64(&r));
    }
    if let PointConfig::Coordinates(_) = config {
        let pairs = kn_crossing_pairs(&config)?;
        let verdict = if pairs == cr { "agree" } else { "DISAGREE" };
        println!("oracles {verdict}: convex quadrilaterals {cr}, crossing segment pairs {pairs}");
        if pairs != cr {
            return Err(Failure::Checks);
        }
    }
    Ok(())
}

fn cmd_forest_prob(a: ForestProbArgs) -> CmdResult {
    let edges = parse_edge_list(&a.edges)?;
    let forest = Forest::from_edges(a.n, &edges)?;
    let count = count_trees_containing(a.n, &forest)?;
    let p = forest_probability(a.n, &forest)?;
    println!("T = {count}");
    println!("P = {}", format_rational(&p));
    if a.n <= 7 {
        let brute = enumerate_trees(a.n, 0, 1)?
            .filter(|t| contains_forest(t, &forest))
            .count();
        let matched = count == brute.into();
        println!(
            "brute force over {} trees: {brute} {}",
            tree_count(a.n),
            if matched { "MATCH" } else { "MISMATCH" }
        );
        if !matched {
            return Err(Failure::Checks);
        }
    }
    Ok(())
}

fn cmd_sample(a: SampleArgs) -> CmdResult {
    let config = load_config(a.n, &a.source)?;
    let report = run_experiment(&config, a.samples, a.seed)?;
    if let Some(path) = &a.histogram {
        emit(Some(path), &histogram_csv(&report.histogram))?;
    }
    emit(a.out.as_deref(), &report.to_json())
}

fn cmd_verify(a: VerifyArgs) -> CmdResult {
    if a.max_n == 0 || a.max_n > REFERENCE_MAX_N {
        return Err(Failure::Usage(format!(
            "--max-n must be in 1..={REFERENCE_MAX_N}"
        )));
    }
    if a.shards == 0 {
        return Err(Failure::Usage("--shards must be at least 1".into()));
    }
    let suite = match a.suite {
        SuiteArg::Tables => Suite::Tables,
        SuiteArg::Formulas => Suite::Formulas,
        SuiteArg::All => Suite::All,
    };
    // Sizes up to the reference table are always allowed here.
    let opts = EnumerationOptions {
        shards: a.shards,
        limit: REFERENCE_MAX_N,
        ..EnumerationOptions::default()
    };
    let checks = run_verification(suite, a.max_n, &opts, |n| {
        eprintln!("enumerated n = {n} ({} trees)", tree_count(n));
    })?;
    for c in &checks {
        println!("{c}");
    }
    if all_passed(&checks) {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}
