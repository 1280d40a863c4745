//! `isoperim`: evaluate isoperimetric functionals on shape files, run
//! corpora, estimate empirical constants, and drive the penalized flows.
//!
//! Exit codes: 0 success, 2 validation failure (bad input, bad config),
//! 3 inequality-violation failure (a computed panel breaks a parameter-free
//! assertion).

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use isoperim::functionals::{self, Params};
use isoperim::harness;
use isoperim::nearly_spherical::{self, SphericalFunction};
use isoperim::optim::NmOptions;
use isoperim::shapeflow::{self, FlowConfig};
use isoperim::ShapeRep;

#[derive(Parser)]
#[command(name = "isoperim", version, about = "Isoperimetric functionals on discretized shapes")]
struct Cli {
    /// Boundary quadrature node budget (defaults to the corpus spec value
    /// or 4096).
    #[arg(long, global = true)]
    quadrature_n: Option<usize>,

    /// Simplex-diameter tolerance for center searches.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,

    /// Worker threads (0 uses all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the full functional panel of one shape file; prints JSON.
    Eval {
        /// Shape JSON ({"kind": "polygon2d" | "radial2d" | "radial3d", …}).
        shape: PathBuf,
    },
    /// Evaluate a corpus spec and write one CSV row per shape.
    Corpus {
        /// Corpus JSON ({"n":…, "resolution":…, "seed":…, "shapes":[…]}).
        spec: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Estimate empirical constants from a corpus CSV; prints JSON.
    Constants {
        input: PathBuf,
        /// Ratio CSV from `fuglede` feeding the empirical Fuglede constant.
        #[arg(long)]
        fuglede: Option<PathBuf>,
        /// Second corpus CSV (for example at doubled resolution) for
        /// stability deltas.
        #[arg(long)]
        compare: Option<PathBuf>,
    },
    /// Deficit-vs-norm ratios over a random nearly-spherical family;
    /// prints CSV (t, alpha, D, beta2, A2, ratio).
    Fuglede {
        /// Inclusive mode band, e.g. 2..8.
        #[arg(long, default_value = "2..8")]
        modes: String,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Target W^(1,inf) amplitude of the samples.
        #[arg(long, default_value_t = 0.05)]
        amplitude: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Penalized-energy descent. One seed writes a JSON-lines trajectory;
    /// `--seeds k` with k > 1 runs the multi-seed ball-uniqueness
    /// experiment and writes a JSON report.
    Flow {
        #[arg(long)]
        lambda: f64,
        /// Target oscillation level ε; omit to drop the term entirely.
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        seeds: usize,
        #[arg(long, default_value_t = 2.0)]
        r0: f64,
        /// Amplitude cap of the random initial graphs.
        #[arg(long, default_value_t = 0.15)]
        amplitude: f64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Quadrature refinement study of one shape; prints CSV
    /// (N, P, gamma, beta2, res_identity).
    Refine {
        shape: PathBuf,
        /// Ascending resolutions, e.g. 512,1024,2048,4096.
        #[arg(long = "N", value_delimiter = ',', required = true)]
        n: Vec<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
        {
            eprintln!("error: could not configure {} threads: {e}", cli.threads);
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn params_for(cli: &Cli, fallback_n: usize) -> Params {
    Params {
        quadrature_n: cli.quadrature_n.unwrap_or(fallback_n),
        nm: NmOptions {
            tol: cli.tol,
            ..NmOptions::default()
        },
        ..Params::default()
    }
}

fn read_to_string(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", path.display()))
}

/// Parses a shape file, reporting line/column for malformed JSON.
fn load_shape(path: &Path) -> anyhow::Result<ShapeRep> {
    let text = read_to_string(path)?;
    ShapeRep::from_json_str(&text).map_err(|e| match e {
        isoperim::Error::Json(j) => anyhow::anyhow!(
            "{}:{}:{}: malformed shape JSON: {j}",
            path.display(),
            j.line(),
            j.column()
        ),
        other => anyhow::anyhow!("{}: {other}", path.display()),
    })
}

fn run(cli: &Cli) -> anyhow::Result<ExitCode> {
    match &cli.command {
        Command::Eval { shape } => {
            let shape = load_shape(shape)?;
            let params = params_for(cli, 4096);
            let (report, _) = functionals::inequality_panel(&shape, &params)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            let violations = functionals::assertion_failures(&report);
            if violations.is_empty() {
                Ok(ExitCode::SUCCESS)
            } else {
                for v in violations {
                    eprintln!("violation: {v}");
                }
                Ok(ExitCode::from(3))
            }
        }
        Command::Corpus { spec, output } => {
            let text = read_to_string(spec)?;
            let path = spec;
            let spec = harness::CorpusSpec::from_json_str(&text).map_err(|e| match e {
                isoperim::Error::Json(j) => anyhow::anyhow!(
                    "{}:{}:{}: malformed corpus JSON: {j}",
                    path.display(),
                    j.line(),
                    j.column()
                ),
                other => anyhow::anyhow!("{other}"),
            })?;
            let params = params_for(cli, spec.resolution);
            let rows = harness::run_corpus(&spec, &params)?;
            let file = std::fs::File::create(output)?;
            harness::write_corpus_csv(&rows, file)?;
            let violations = harness::corpus_violations(&rows);
            if violations.is_empty() {
                Ok(ExitCode::SUCCESS)
            } else {
                for (id, v) in violations {
                    eprintln!("violation[{id}]: {v}");
                }
                Ok(ExitCode::from(3))
            }
        }
        Command::Constants {
            input,
            fuglede,
            compare,
        } => {
            let rows = harness::read_corpus_csv(std::fs::File::open(input)?)?;
            let fuglede_c = match fuglede {
                None => None,
                Some(path) => Some(min_ratio_from_csv(path)?),
            };
            let compare_rows = match compare {
                None => None,
                Some(path) => Some(harness::read_corpus_csv(std::fs::File::open(path)?)?),
            };
            let report = harness::estimate_constants(&rows, fuglede_c, compare_rows.as_deref())?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Fuglede {
            modes,
            samples,
            seed,
            amplitude,
            output,
        } => {
            let (lo, hi) = parse_mode_band(modes)?;
            let params = params_for(cli, 4096);
            let table = fuglede_table(lo, hi, *samples, *seed, *amplitude, &params)?;
            let mut out: Box<dyn Write> = match output {
                Some(path) => Box::new(std::fs::File::create(path)?),
                None => Box::new(std::io::stdout().lock()),
            };
            writeln!(out, "t,alpha,D,beta2,A2,ratio")?;
            let mut min_ratio = f64::MAX;
            for row in &table {
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    row.0, row.1, row.2, row.3, row.4, row.5
                )?;
                min_ratio = min_ratio.min(row.5);
            }
            eprintln!("samples: {}, min ratio: {min_ratio}", table.len());
            Ok(ExitCode::SUCCESS)
        }
        Command::Flow {
            lambda,
            eps,
            seed,
            seeds,
            r0,
            amplitude,
            output,
        } => {
            let mut cfg = FlowConfig::new(2, *lambda);
            cfg.eps = *eps;
            cfg.r0 = *r0;
            if let Some(n) = cli.quadrature_n {
                cfg.quadrature_n = n;
            }
            if *seeds > 1 {
                let report = shapeflow::ball_uniqueness_experiment(&cfg, *seeds, *seed)?;
                let file = std::fs::File::create(output)?;
                serde_json::to_writer_pretty(file, &report)?;
                eprintln!(
                    "{} seeds, fraction converged {}, min energy {}",
                    report.seeds, report.fraction_converged, report.min_energy
                );
                Ok(ExitCode::SUCCESS)
            } else {
                let init = shapeflow::random_flow_seeds(1, *seed, (2, 6), *amplitude)
                    .pop()
                    .expect("one seed");
                let traj = shapeflow::minimize(&SphericalFunction::Fourier(init), &cfg)?;
                let file = std::fs::File::create(output)?;
                traj.write_jsonl(file)?;
                eprintln!(
                    "iterations: {}, converged: {}, final energy: {}",
                    traj.final_state().iteration,
                    traj.converged,
                    traj.final_state().energy
                );
                Ok(ExitCode::SUCCESS)
            }
        }
        Command::Refine { shape, n } => {
            let shape = load_shape(shape)?;
            let params = params_for(cli, 4096);
            let rows = harness::refinement_study(&shape, n, &params)?;
            println!("N,P,gamma,beta2,res_identity");
            for r in &rows {
                println!(
                    "{},{},{},{},{}",
                    r.n, r.perimeter, r.gamma, r.beta_sq, r.res_identity
                );
            }
            // observed orders against the finest run, floor at 1e-12
            let gammas: Vec<f64> = rows.iter().map(|r| r.gamma).collect();
            if let Some(reference) = gammas.last() {
                let orders = harness::observed_orders(&gammas, *reference, 1e-12);
                let text: Vec<String> = orders
                    .iter()
                    .map(|o| o.map(|v| format!("{v:.2}")).unwrap_or_else(|| "converged".into()))
                    .collect();
                eprintln!("observed gamma order per refinement step: [{}]", text.join(", "));
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn parse_mode_band(text: &str) -> anyhow::Result<(usize, usize)> {
    let parts: Vec<&str> = text.split("..").collect();
    if parts.len() != 2 {
        anyhow::bail!("mode band must look like 2..8, got {text:?}");
    }
    let lo: usize = parts[0].trim().parse()?;
    let hi: usize = parts[1].trim().parse()?;
    if lo < 2 || hi < lo {
        anyhow::bail!("mode band must satisfy 2 <= lo <= hi, got {text:?}");
    }
    Ok((lo, hi))
}

type FugledeRow = (f64, f64, f64, f64, f64, f64);

fn fuglede_table(
    lo: usize,
    hi: usize,
    samples: usize,
    seed: u64,
    amplitude: f64,
    params: &Params,
) -> anyhow::Result<Vec<FugledeRow>> {
    use rayon::prelude::*;
    let family = nearly_spherical::random_family(seed, samples, (lo, hi), amplitude);
    let rows: Vec<anyhow::Result<FugledeRow>> = family
        .into_par_iter()
        .map(|f| {
            let u = SphericalFunction::Fourier(f);
            let t = u.w1_inf();
            let ns = nearly_spherical::normalize(&u)?;
            let ratio = nearly_spherical::fuglede_ratio(&ns, nearly_spherical::DEFAULT_EPS0);
            let chain = nearly_spherical::fuglede_chain_check(&ns, params)?;
            let shape = ns.shape();
            let alpha = functionals::fraenkel(&shape, params)?.alpha;
            Ok((
                t,
                alpha,
                ratio.deficit,
                chain.beta_sq,
                chain.asym_sq,
                ratio.ratio.unwrap_or(f64::NAN),
            ))
        })
        .collect();
    rows.into_iter().collect()
}

fn min_ratio_from_csv(path: &Path) -> anyhow::Result<f64> {
    let mut rdr = csv::Reader::from_path(path)?;
    let headers = rdr.headers()?.clone();
    let idx = headers
        .iter()
        .position(|h| h == "ratio")
        .ok_or_else(|| anyhow::anyhow!("{}: no `ratio` column", path.display()))?;
    let mut min = f64::MAX;
    for rec in rdr.records() {
        let rec = rec?;
        let v: f64 = rec[idx].parse()?;
        if v.is_finite() {
            min = min.min(v);
        }
    }
    if min == f64::MAX {
        anyhow::bail!("{}: no finite ratios", path.display());
    }
    Ok(min)
}
