//! The `ffq` command line. [`run`] parses arguments, merges an optional
//! `--config` file (flat `key = value` lines named like the long flags) in
//! front of the explicit flags so the flags win, and dispatches.
//!
//! Exit codes: 0 success, 1 failed verification or runtime error, 2 usage.

use std::ffi::OsString;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::experiment::{max_scan, run_experiment, DecompositionMode, ExperimentConfig};
use crate::field::FieldSpec;
use crate::io::{read_report, render_report, write_report, IrreducibleTable};
use crate::lseries::{compute_coefficients, eval_half_exact, verify_functional_equation, verify_rh};
use crate::poly::{count_irreducibles, irreducibles, Poly};
use crate::quadchar::{symbol_euler, symbol_fast};
use crate::resonator::{ResonatorParams, DEFAULT_A, DEFAULT_GAMMA};
use crate::verify::{self, Suite, SuiteOptions, SuiteOutcome};

pub const CACHE_ENV: &str = "FFQ_CACHE_DIR";
const DEFAULT_CACHE_DIR: &str = "ffq-cache";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "ffq",
    version,
    about = "Quadratic L-functions over F_q[t] and resonance experiments",
    args_override_self = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Field order (odd prime).
    #[arg(long, default_value_t = 3)]
    q: u64,
    /// Flat `key = value` file of flag defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Worker threads (0: all cores).
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Log verbosity (repeat for more).
    #[arg(short, long, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Enumerate monic irreducibles of degree n and write the table cache.
    Irr {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: usize,
        /// Print only the count.
        #[arg(long)]
        count_only: bool,
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
    /// Quadratic residue symbol (f / p).
    Symbol {
        #[command(flatten)]
        common: Common,
        /// Argument, coefficients low to high.
        #[arg(long)]
        f: String,
        /// Modulus, monic squarefree (irreducible with --oracle).
        #[arg(long)]
        p: String,
        /// Use the Euler criterion instead of reciprocity.
        #[arg(long)]
        oracle: bool,
    },
    /// Coefficients and exact central value of L(u, chi_P).
    Lfunc {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        p: String,
        /// Also check the zeros (tolerance).
        #[arg(long)]
        rh_tol: Option<f64>,
    },
    /// Run an identity or bound suite.
    Verify {
        #[command(flatten)]
        common: Common,
        suite: SuiteArg,
        #[arg(long)]
        max_deg: Option<usize>,
        /// Largest degree of f (weil) or l (le4).
        #[arg(long, default_value_t = 4)]
        max_arg_deg: usize,
        #[arg(long, default_value_t = verify::RH_SAMPLES)]
        samples: usize,
        #[arg(long, conflicts_with = "seedless")]
        seed: Option<u64>,
        /// Use the fixed default seed.
        #[arg(long)]
        seedless: bool,
        #[arg(long, default_value_t = verify::RH_TOLERANCE)]
        tol: f64,
        #[arg(long, default_value_t = verify::WEIL_RATIO_THRESHOLD)]
        threshold: f64,
        /// CSV output for the weil table.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact maximum of |L(1/2, chi_P)| over P of degree 2g+1.
    ScanMax {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        g: usize,
        /// JSON output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The resonated moments S1, S2 and the full report.
    Resonate {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        res: ResonatorArgs,
        #[arg(long)]
        g: usize,
        #[arg(long, default_value_t = crate::experiment::DEFAULT_EPSILON_PRIME)]
        eps_prime: f64,
        #[arg(long)]
        cache_dir: Option<PathBuf>,
        /// Report path; `.json`, `.csv` and `.histogram.csv` are written.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Omit wall-clock fields so repeated runs are byte-identical.
        #[arg(long)]
        seedless: bool,
        #[arg(long, value_enum, default_value_t = DecompositionArg::Auto)]
        decomposition: DecompositionArg,
        /// Skip the exact rational totals.
        #[arg(long)]
        no_exact: bool,
    },
    /// Render a stored JSON report.
    Report {
        #[command(flatten)]
        common: Common,
        path: PathBuf,
    },
}

#[derive(Debug, Args)]
struct ResonatorArgs {
    /// Asymptotic mode with this N; explicit mode otherwise.
    #[arg(long = "N")]
    big_n: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_GAMMA)]
    gamma: f64,
    #[arg(long, default_value_t = DEFAULT_A)]
    a: f64,
    #[arg(long)]
    l1: Option<f64>,
    #[arg(long)]
    l2: Option<f64>,
    #[arg(long)]
    l3: Option<f64>,
    /// Explicit prime-degree window `lo,hi`.
    #[arg(long)]
    window: Option<String>,
    /// Explicit caps, one per group, `c1,c2,...`.
    #[arg(long)]
    caps: Option<String>,
    #[arg(long)]
    psi_scale: Option<f64>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteArg {
    Fe,
    Rh,
    Afe,
    Le4,
    Weil,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Fe => Suite::Fe,
            SuiteArg::Rh => Suite::Rh,
            SuiteArg::Afe => Suite::Afe,
            SuiteArg::Le4 => Suite::Le4,
            SuiteArg::Weil => Suite::Weil,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DecompositionArg {
    Auto,
    Always,
    Never,
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Irr { common, .. }
            | Command::Symbol { common, .. }
            | Command::Lfunc { common, .. }
            | Command::Verify { common, .. }
            | Command::ScanMax { common, .. }
            | Command::Resonate { common, .. }
            | Command::Report { common, .. } => common,
        }
    }
}

/// Turns a config file into `--key value` arguments.
pub fn config_args(path: &Path) -> Result<Vec<OsString>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut args = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Error::Parse(format!("{}:{}: expected key = value", path.display(), i + 1))
        })?;
        let (k, v) = (k.trim(), v.trim());
        if k == "config" {
            return Err(Error::Parse(format!("{}: nested config", path.display())));
        }
        match v {
            "true" => args.push(format!("--{k}").into()),
            "false" => {}
            _ => {
                args.push(format!("--{k}").into());
                args.push(v.into());
            }
        }
    }
    Ok(args)
}

/// The value of `--config` in `argv`, if any.
fn config_path(argv: &[OsString]) -> Option<PathBuf> {
    let mut it = argv.iter().skip(1);
    while let Some(a) = it.next() {
        let a = a.to_str()?;
        if a == "--" {
            return None;
        }
        if a == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(v) = a.strip_prefix("--config=") {
            return Some(PathBuf::from(v));
        }
    }
    None
}

fn parse(argv: &[OsString]) -> std::result::Result<Cli, clap::Error> {
    let Some(path) = config_path(argv).filter(|_| argv.len() >= 2) else {
        return Cli::try_parse_from(argv);
    };
    let extra = config_args(&path).map_err(|e| {
        clap::Error::raw(clap::error::ErrorKind::ValueValidation, format!("{e}\n"))
    })?;
    let mut merged = argv[..2].to_vec();
    merged.extend(extra);
    merged.extend_from_slice(&argv[2..]);
    Cli::try_parse_from(merged)
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::InvalidField(_)
        | Error::InvalidParams(_)
        | Error::Parse(_)
        | Error::NotMonic(_)
        | Error::NotIrreducible(_)
        | Error::NotSquarefree(_)
        | Error::ConstantModulus
        | Error::ZeroPolynomial => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

/// Entry point: returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match parse(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    let common = cli.command.common();
    let level = match common.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    log::set_max_level(level);

    let outcome = if common.workers > 0 {
        match rayon::ThreadPoolBuilder::new().num_threads(common.workers).build() {
            Ok(pool) => pool.install(|| dispatch(&cli.command)),
            Err(e) => Err(Error::InvalidParams(format!("thread pool: {e}"))),
        }
    } else {
        dispatch(&cli.command)
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn cache_dir(flag: &Option<PathBuf>) -> PathBuf {
    flag.clone()
        .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR))
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad {what} entry {x:?} in {s:?}")))
        })
        .collect()
}

fn resonator_params(r: &ResonatorArgs) -> Result<ResonatorParams> {
    let explicit_only = r.l1.is_some()
        || r.l2.is_some()
        || r.l3.is_some()
        || r.window.is_some()
        || r.caps.is_some()
        || r.psi_scale.is_some();
    if let Some(n) = r.big_n {
        if explicit_only {
            return Err(Error::InvalidParams(
                "--N selects asymptotic mode; --l1/--l2/--l3/--window/--caps/--psi-scale are explicit-mode flags".into(),
            ));
        }
        return ResonatorParams::asymptotic(n, r.gamma, r.a);
    }
    let mut p = if r.l1.is_some() || r.l2.is_some() || r.l3.is_some() {
        let ResonatorParams::Explicit { l1, l2, l3, .. } = ResonatorParams::default() else {
            unreachable!()
        };
        ResonatorParams::explicit(r.l1.unwrap_or(l1), r.l2.unwrap_or(l2), r.l3.unwrap_or(l3))
    } else {
        ResonatorParams::default()
    };
    p = p.with_shape(r.gamma, r.a);
    if let Some(w) = &r.window {
        let v: Vec<usize> = parse_list(w, "window")?;
        let [lo, hi] = v[..] else {
            return Err(Error::Parse(format!("--window needs lo,hi, got {w:?}")));
        };
        p = p.with_window(lo, hi);
    }
    if let Some(c) = &r.caps {
        p = p.with_caps(parse_list(c, "caps")?);
    }
    if let Some(s) = r.psi_scale {
        p = p.with_psi_scale(s);
    }
    p.validate()?;
    Ok(p)
}

fn dispatch(cmd: &Command) -> Result<i32> {
    let field = FieldSpec::new(cmd.common().q)?;
    let mut stdout = std::io::stdout().lock();
    let mut out = |s: String| -> Result<()> {
        writeln!(stdout, "{s}").map_err(|e| Error::io("<stdout>", e))
    };
    match cmd {
        Command::Irr { n, count_only, cache_dir: dir, .. } => {
            if *n == 0 {
                return Err(Error::InvalidParams("degree must be at least 1".into()));
            }
            if *count_only {
                out(count_irreducibles(field, *n).to_string())?;
                return Ok(EXIT_OK);
            }
            let dir = cache_dir(dir);
            let path = dir.join(IrreducibleTable::file_name(field.q(), *n));
            let table = match IrreducibleTable::read(&path) {
                Ok(t) if t.field == field && t.degree == *n => t,
                _ => {
                    let t = IrreducibleTable { field, degree: *n, polys: irreducibles(field, *n) };
                    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
                    t.write(&path)?;
                    t
                }
            };
            for p in &table.polys {
                out(p.to_coeff_string())?;
            }
            log::info!("{} polynomials, cache {}", table.polys.len(), path.display());
            Ok(EXIT_OK)
        }
        Command::Symbol { f, p, oracle, .. } => {
            let f = Poly::parse(field, f)?;
            let p = Poly::parse(field, p)?;
            let v = if *oracle { symbol_euler(&f, &p)? } else { symbol_fast(&f, &p)? };
            out(v.as_i8().to_string())?;
            Ok(EXIT_OK)
        }
        Command::Lfunc { p, rh_tol, .. } => {
            let p = Poly::parse(field, p)?;
            let l = compute_coefficients(&p)?;
            let v = eval_half_exact(&l);
            out(format!("P = {p}"))?;
            out(format!("c = {:?}", l.coeffs))?;
            out(format!("lambda = {}, genus = {}", l.lambda, l.genus))?;
            out(format!("completed = {:?}", l.completed_coeffs))?;
            out(format!("L(1/2) = {v} = {:.17e}", v.to_f64()))?;
            let fe = verify_functional_equation(&l);
            out(format!("functional equation: {}", if fe { "ok" } else { "FAILED" }))?;
            let mut ok = fe;
            if let Some(tol) = rh_tol {
                let rh = verify_rh(&l, *tol)?;
                out(format!(
                    "zeros: {} moduli * sqrt(q), max deviation {:.3e}: {}",
                    rh.moduli.len(),
                    rh.max_deviation,
                    if rh.ok { "ok" } else { "FAILED" }
                ))?;
                ok &= rh.ok;
            }
            Ok(if ok { EXIT_OK } else { EXIT_FAILURE })
        }
        Command::Verify {
            suite,
            max_deg,
            max_arg_deg,
            samples,
            seed,
            tol,
            threshold,
            out: csv_out,
            ..
        } => {
            let suite = Suite::from(*suite);
            let mut opts = SuiteOptions::new(field, suite);
            if let Some(d) = max_deg {
                opts.max_degree = *d;
            }
            if opts.max_degree == 0 {
                return Err(Error::InvalidParams("--max-deg must be at least 1".into()));
            }
            opts.max_arg_degree = *max_arg_deg;
            opts.samples = *samples;
            opts.seed = seed.unwrap_or(verify::DEFAULT_SEED);
            opts.tolerance = *tol;
            opts.threshold = *threshold;
            let outcome = if suite == Suite::Weil {
                let mut o = SuiteOutcome::empty(suite, &opts);
                let scan = verify::weil(&opts, &mut o)?;
                if let Some(path) = csv_out {
                    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
                    scan.write_csv(file).map_err(|source| Error::Csv { path: path.clone(), source })?;
                }
                o
            } else {
                verify::run_suite(suite, &opts)?
            };
            for f in outcome.failures.iter().take(20) {
                out(format!("  failed: {f}"))?;
            }
            out(format!(
                "{} {}",
                if outcome.passed() { "PASS" } else { "FAIL" },
                outcome.summary()
            ))?;
            Ok(if outcome.passed() { EXIT_OK } else { EXIT_FAILURE })
        }
        Command::ScanMax { g, out: json_out, .. } => {
            let scan = max_scan(field, *g);
            out(format!("family size {}", scan.family_size))?;
            out(format!("max |L(1/2)| = {}", scan.max_abs_l))?;
            out(format!("argmax P = {}", scan.argmax_p))?;
            out(format!("mean L(1/2) = {}", scan.mean_l))?;
            if let Some(path) = json_out {
                let json = serde_json::to_string_pretty(&scan)
                    .map_err(|source| Error::Json { path: path.clone(), source })?;
                fs::write(path, json + "\n").map_err(|e| Error::io(path, e))?;
            }
            Ok(EXIT_OK)
        }
        Command::Resonate {
            common,
            res,
            g,
            eps_prime,
            cache_dir: dir,
            out: report_out,
            seedless,
            decomposition,
            no_exact,
        } => {
            let mut cfg = ExperimentConfig::new(field, *g).with_resonator(resonator_params(res)?);
            cfg.epsilon_prime = *eps_prime;
            cfg.workers = common.workers;
            cfg.cache_dir = dir.clone().or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from));
            if let Some(d) = &cfg.cache_dir {
                fs::create_dir_all(d).map_err(|e| Error::io(d, e))?;
            }
            cfg.record_timings = !*seedless;
            cfg.exact_check = !*no_exact;
            cfg.decomposition = match decomposition {
                DecompositionArg::Auto => DecompositionMode::Auto,
                DecompositionArg::Always => DecompositionMode::Always,
                DecompositionArg::Never => DecompositionMode::Never,
            };
            let report = run_experiment(&cfg)?;
            out(render_report(&report))?;
            if let Some(path) = report_out {
                let paths = write_report(&report, path)?;
                out(format!("wrote {}", paths.json.display()))?;
            }
            Ok(if report.checks.all_hold() { EXIT_OK } else { EXIT_FAILURE })
        }
        Command::Report { path, .. } => {
            let report = read_report(path)?;
            out(render_report(&report))?;
            Ok(EXIT_OK)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run(["ffq", "bogus"]), EXIT_USAGE);
        assert_eq!(run(["ffq", "irr", "--q", "3"]), EXIT_USAGE);
        assert_eq!(run(["ffq", "symbol", "--q", "4", "--f", "1", "--p", "0,1"]), EXIT_USAGE);
        assert_eq!(run(["ffq", "symbol", "--q", "3", "--f", "1", "--p", "1,0,1,1", "--oracle"]), EXIT_USAGE);
    }

    #[test]
    fn config_file_is_overridden_by_flags() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("run.conf");
        fs::write(&cfg, "# sweep\nq = 5\ng = 2\nN = 40\nseedless = true\n").unwrap();
        let args = config_args(&cfg).unwrap();
        assert_eq!(args, ["--q", "5", "--g", "2", "--N", "40", "--seedless"].map(OsString::from));
        let argv: Vec<OsString> = ["ffq", "resonate", "--config", cfg.to_str().unwrap(), "--q", "3"]
            .map(OsString::from)
            .to_vec();
        let cli = parse(&argv).unwrap();
        let Command::Resonate { common, g, res, seedless, .. } = cli.command else { panic!() };
        assert_eq!(common.q, 3);
        assert_eq!(g, 2);
        assert_eq!(res.big_n, Some(40.0));
        assert!(seedless);
    }

    #[test]
    fn resonator_flags() {
        let cli = Cli::try_parse_from(["ffq", "resonate", "--g", "2", "--window", "2,3", "--caps", "1,2"]).unwrap();
        let Command::Resonate { res, .. } = cli.command else { panic!() };
        let p = resonator_params(&res).unwrap();
        assert!(!p.is_asymptotic());
        let bad = Cli::try_parse_from(["ffq", "resonate", "--g", "2", "--N", "100", "--l1", "2"]).unwrap();
        let Command::Resonate { res, .. } = bad.command else { panic!() };
        assert!(resonator_params(&res).is_err());
    }
}
