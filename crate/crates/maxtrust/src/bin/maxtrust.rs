//! Command line front end: single trust computations on matrix files,
//! matrix classification, the full simulation experiment grid, and a
//! built-in fixture self-test.
//!
//! Exit codes: 0 success, 1 fixture self-test failure, 2 usage or input
//! parse errors, 3 convergence failures (no dominant eigenvalue, iteration
//! caps), 4 domain errors (negative entries, unreachable agents, shape).
//! Stdout carries data; stderr carries diagnostics.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use maxtrust::experiment::{run_experiment, ExperimentConfig};
use maxtrust::io::{
    max_plus_image, normal_form_text, parse_matrix, trust_vector_csv, ParsedMatrix,
};
use maxtrust_core::graph::{normal_form, PrecedenceGraph};
use maxtrust_core::reference::stationary_by_linear_solve;
use maxtrust_core::spectral::{
    classify_matrix, dominant_eigenpair_conventional, PowerIterationConfig, SpectralError,
};
use maxtrust_core::tropical::{TropicalMatrix, TropicalVector};
use maxtrust_core::trust::{
    eigentrust, maxtrust, EigentrustConfig, MaxTrustConfig, TrustError, TrustMatrix, TrustVector,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Conventional trust by power iteration on the row-normalized matrix.
    Eigentrust,
    /// Max-plus trust: growth rates and horizon values per agent.
    Maxtrust,
    /// Structural report: matrix class and block normal form.
    Classify,
    /// The full scenario/topology simulation grid with CSV output.
    Experiment,
}

#[derive(Parser, Debug)]
#[command(name = "maxtrust", version, about = "Trust computation over agent networks")]
struct Cli {
    /// What to run; required unless --fixtures is given.
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// Matrix file ("rows cols" header, then rows; "eps" marks no
    /// information) for the single-computation modes.
    #[arg(long)]
    matrix: Option<PathBuf>,
    /// TOML experiment config; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed for the experiment.
    #[arg(long)]
    seed: Option<u64>,
    /// Runs per condition.
    #[arg(long)]
    runs: Option<usize>,
    /// Timesteps per run.
    #[arg(long)]
    steps: Option<usize>,
    /// Output directory for experiment CSV files.
    #[arg(long, default_value = "results")]
    out: PathBuf,
    /// Worker threads for the experiment (default: available cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// Run the built-in self-test on the bundled example matrices.
    #[arg(long)]
    fixtures: bool,
    /// Power iteration stop threshold.
    #[arg(long, default_value_t = 1e-6)]
    epsilon: f64,
    /// Power iteration cap.
    #[arg(long, default_value_t = 10_000)]
    max_iters: usize,
    /// Terminal time for max-plus trust [default: 100].
    #[arg(long)]
    horizon: Option<usize>,
    /// Per-interaction factor of the decaying malicious broadcast
    /// [default: 0.99].
    #[arg(long)]
    decay_factor: Option<f64>,
}

const USAGE: u8 = 2;
const NON_CONVERGENCE: u8 = 3;
const DOMAIN: u8 = 4;

fn fail(code: u8, message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(code)
}

fn trust_error_code(e: &TrustError) -> u8 {
    match e {
        TrustError::NonConvergence { .. } | TrustError::ZeroIterate { .. } => NON_CONVERGENCE,
        TrustError::Spectral(s) => spectral_error_code(s),
        _ => DOMAIN,
    }
}

fn spectral_error_code(e: &SpectralError) -> u8 {
    match e {
        SpectralError::NoDominantEigenvalue { .. } | SpectralError::NoTermination { .. } => {
            NON_CONVERGENCE
        }
        _ => DOMAIN,
    }
}

fn read_matrix(path: &PathBuf) -> Result<ParsedMatrix, ExitCode> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| fail(USAGE, format!("cannot read {}: {e}", path.display())))?;
    parse_matrix(&text).map_err(|e| fail(USAGE, format!("{}: {e}", path.display())))
}

/// Row-normalized trust matrix from an all-finite file: every entry is a
/// reported score, zeros included, mirroring a fully-known broadcast grid.
fn conventional_trust(parsed: &ParsedMatrix) -> Result<TrustMatrix, TrustError> {
    match parsed {
        ParsedMatrix::Conventional(m) => {
            let grid: Vec<Vec<Option<f64>>> = (0..m.rows())
                .map(|i| (0..m.cols()).map(|j| Some(m.get(i, j))).collect())
                .collect();
            TrustMatrix::from_broadcasts(&grid)
        }
        ParsedMatrix::MaxPlus(_) => Err(TrustError::Empty),
    }
}

fn cmd_eigentrust(cli: &Cli, parsed: &ParsedMatrix) -> ExitCode {
    if matches!(parsed, ParsedMatrix::MaxPlus(_)) {
        return fail(DOMAIN, "eigentrust needs an all-finite matrix; this file has eps entries");
    }
    let tm = match conventional_trust(parsed) {
        Ok(t) => t,
        Err(e) => return fail(trust_error_code(&e), e),
    };
    // The dominance check first: matrices without a dominant eigenvalue
    // make the iteration limit start-dependent, which is a failure, not an
    // answer.
    let probe = PowerIterationConfig::default();
    if let Err(e) = dominant_eigenpair_conventional(&tm.conventional, &probe) {
        return fail(spectral_error_code(&e), e);
    }
    let cfg = EigentrustConfig { epsilon: cli.epsilon, max_iterations: cli.max_iters };
    match eigentrust(&tm.conventional, None, &cfg) {
        Ok(res) => {
            eprintln!("converged in {} iterations", res.iterations);
            print!("{}", trust_vector_csv(&TrustVector::conventional(&res.trust)));
            ExitCode::SUCCESS
        }
        Err(e) => fail(trust_error_code(&e), e),
    }
}

/// A file with eps entries is used as-is; an all-finite file is read as
/// conventional scores whose zeros mean no information and map to eps.
fn tropical_trust(parsed: &ParsedMatrix) -> TropicalMatrix {
    match parsed {
        ParsedMatrix::MaxPlus(m) => m.clone(),
        ParsedMatrix::Conventional(m) => max_plus_image(m),
    }
}

fn cmd_maxtrust(cli: &Cli, parsed: &ParsedMatrix) -> ExitCode {
    let c = tropical_trust(parsed);
    let w = TropicalVector::finite(&vec![0.0; c.rows()]);
    let mut cfg = MaxTrustConfig::default();
    if let Some(horizon) = cli.horizon {
        cfg.horizon = horizon;
    }
    match maxtrust(&c, &w, &cfg) {
        Ok(sol) => {
            let growth: Vec<String> =
                sol.block_growth.iter().map(|x| format!("{}", x.raw())).collect();
            eprintln!(
                "{} blocks, growth rates [{}], horizon {}",
                sol.blocks.len(),
                growth.join(", "),
                sol.horizon
            );
            print!("{}", trust_vector_csv(&sol.trust_vector()));
            ExitCode::SUCCESS
        }
        Err(e) => fail(trust_error_code(&e), e),
    }
}

fn cmd_classify(parsed: &ParsedMatrix) -> ExitCode {
    let tropical = parsed.to_tropical();
    if let ParsedMatrix::Conventional(m) = parsed {
        match classify_matrix(m) {
            Ok(class) => println!(
                "nonnegative {} positive {} row_stochastic {} irreducible {}",
                class.nonnegative, class.positive, class.row_stochastic, class.irreducible
            ),
            Err(e) => return fail(spectral_error_code(&e), e),
        }
    } else {
        match PrecedenceGraph::of_tropical(&tropical) {
            Ok(g) => println!("irreducible {}", g.is_irreducible()),
            Err(e) => return fail(DOMAIN, e),
        }
    }
    match normal_form(&tropical) {
        Ok(nf) => {
            print!("{}", normal_form_text(&nf));
            ExitCode::SUCCESS
        }
        Err(e) => fail(DOMAIN, e),
    }
}

fn cmd_experiment(cli: &Cli) -> ExitCode {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = match std::fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => return fail(USAGE, format!("cannot read {}: {e}", path.display())),
            };
            match ExperimentConfig::from_toml(&text) {
                Ok(c) => c,
                Err(e) => return fail(USAGE, format!("{}: {e}", path.display())),
            }
        }
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.master_seed = seed;
    }
    if let Some(runs) = cli.runs {
        cfg.runs = runs;
    }
    if let Some(steps) = cli.steps {
        cfg.steps = steps;
    }
    if let Some(horizon) = cli.horizon {
        cfg.horizon = horizon;
    }
    if let Some(decay) = cli.decay_factor {
        cfg.decay_factor = decay;
    }
    if cfg.runs == 0 || cfg.steps == 0 {
        return fail(USAGE, "an experiment needs at least 1 run and 1 step");
    }
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            return fail(USAGE, format!("cannot size the worker pool: {e}"));
        }
    }

    let out = run_experiment(&cfg);
    for f in &out.failures {
        eprintln!(
            "run failed: scenario {} {} run {} (stream {}): {}",
            f.scenario.number(),
            f.topology.label(),
            f.run,
            f.stream,
            f.message
        );
    }
    if let Err(e) = out.write_to_dir(&cli.out) {
        return fail(USAGE, format!("cannot write {}: {e}", cli.out.display()));
    }
    eprintln!(
        "wrote {} condition files + summary.csv to {}",
        out.condition_csvs.len(),
        cli.out.display()
    );
    print!("{}", out.summary_csv);
    ExitCode::SUCCESS
}

const EXAMPLE_DISCONNECTED: &str = include_str!("../../fixtures/example1.txt");
const EXAMPLE_ABSORBING: &str = include_str!("../../fixtures/example2.txt");
const EXAMPLE_ERGODIC: &str = include_str!("../../fixtures/example3.txt");

/// Self-test over the bundled matrices: the absorbing chain's limit, the
/// ergodic chain against an independent linear solve, the disconnected
/// chain's dominance failure, and the max-plus behaviour of the same
/// inputs. Prints one line per check; exit 1 if any fails.
fn cmd_fixtures() -> ExitCode {
    let mut ok = true;
    let mut check = |name: &str, pass: bool, detail: String| {
        println!("{}: {}{}", name, if pass { "ok" } else { "FAIL " }, if pass { String::new() } else { detail });
        ok &= pass;
    };

    let parse = |text: &str| parse_matrix(text).expect("bundled fixture parses");
    let disconnected = parse(EXAMPLE_DISCONNECTED);
    let absorbing = parse(EXAMPLE_ABSORBING);
    let ergodic = parse(EXAMPLE_ERGODIC);

    // Absorbing chain: all trust flows to the last agent.
    {
        let tm = conventional_trust(&absorbing).expect("stochastic fixture");
        let cfg = EigentrustConfig { epsilon: 1e-9, max_iterations: 10_000 };
        let res = eigentrust(&tm.conventional, None, &cfg).expect("converges");
        let gap = (res.trust[0].abs())
            .max(res.trust[1].abs())
            .max((res.trust[2] - 1.0).abs());
        check("absorbing chain limit (0,0,1)", gap < 1e-6, format!("(gap {gap:e})"));
    }

    // Ergodic chain: eigentrust equals the stationary vector of the
    // row-normalized matrix, solved independently.
    {
        let tm = conventional_trust(&ergodic).expect("stochastic fixture");
        let cfg = EigentrustConfig { epsilon: 1e-9, max_iterations: 10_000 };
        let res = eigentrust(&tm.conventional, None, &cfg).expect("converges");
        let pi = stationary_by_linear_solve(&tm.conventional).expect("ergodic");
        let gap = res
            .trust
            .iter()
            .zip(&pi)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        check("ergodic chain matches linear solve", gap < 1e-6, format!("(gap {gap:e})"));
    }

    // Disconnected support: no dominant eigenvalue to converge to.
    {
        let tm = conventional_trust(&disconnected).expect("stochastic fixture");
        let probe = PowerIterationConfig::default();
        let err = dominant_eigenpair_conventional(&tm.conventional, &probe);
        check(
            "disconnected chain reports no dominant eigenvalue",
            matches!(err, Err(SpectralError::NoDominantEigenvalue { .. })),
            format!("(got {err:?})"),
        );
    }

    // Max-plus handles the same disconnected matrix: both components keep
    // finite growth (self-loops at 0.75 and 1.0).
    {
        let c = tropical_trust(&disconnected);
        let w = TropicalVector::finite(&vec![0.0; 3]);
        let sol = maxtrust(&c, &w, &MaxTrustConfig::default());
        let pass = sol.as_ref().map_or(false, |s| {
            (s.growth.get(0).raw() - 0.75).abs() < 1e-12
                && (s.growth.get(1).raw() - 1.0).abs() < 1e-12
                && (s.growth.get(2).raw() - 0.75).abs() < 1e-12
        });
        check("disconnected chain has max-plus growth (0.75, 1, 0.75)", pass, format!("(got {sol:?})"));
    }

    // Max-plus ranking on the absorbing chain: the absorbing agent leads.
    {
        let c = tropical_trust(&absorbing);
        let w = TropicalVector::finite(&vec![0.0; 3]);
        let sol = maxtrust(&c, &w, &MaxTrustConfig::default());
        let pass = sol.as_ref().map_or(false, |s| s.trust_vector().ranking()[0] == 2);
        check("absorbing chain ranks the absorbing agent first", pass, format!("(got {sol:?})"));
    }

    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.fixtures {
        return cmd_fixtures();
    }
    let Some(mode) = cli.mode else {
        return fail(USAGE, "--mode is required (or use --fixtures)");
    };
    match mode {
        Mode::Experiment => cmd_experiment(&cli),
        Mode::Eigentrust | Mode::Maxtrust | Mode::Classify => {
            let Some(path) = &cli.matrix else {
                return fail(USAGE, "--matrix is required for this mode");
            };
            let parsed = match read_matrix(path) {
                Ok(p) => p,
                Err(code) => return code,
            };
            match mode {
                Mode::Eigentrust => cmd_eigentrust(&cli, &parsed),
                Mode::Maxtrust => cmd_maxtrust(&cli, &parsed),
                Mode::Classify => cmd_classify(&parsed),
                Mode::Experiment => unreachable!(),
            }
        }
    }
}
