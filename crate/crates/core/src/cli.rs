//! The `scalefree` command line.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 numerical or contract
//! failure (fixpoint residual over threshold, study exceedances, estimator
//! non-convergence).

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::Error;
use crate::graphgen::{
    configuration_model, default_cap, percolate, percolate_sets, sample_degrees,
    sample_family_degrees, set_size_histogram,
};
use crate::io;
use crate::stats::{
    concentration_experiment, estimate_exponent_mle, estimate_exponent_regression,
    estimator_bias_harness, median, ExperimentConfig, HarnessConfig,
};
use crate::thinning::{fixed_point_verify, thin_graph, thin_sets};
use crate::{scale_free_spectrum, Params, Spectrum, VERSION};

#[derive(Debug, Parser)]
#[command(name = "scalefree", version, about = "Binomial thinning and scale-free degree spectra")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ThinMode {
    Graph,
    Sets,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Regression,
    Mle,
    Harness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the normalized power-law spectrum as CSV.
    Dist {
        #[arg(long)]
        beta: f64,
        /// Cutoff; defaults to ceil(beta).
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Expected spectrum after random vertex deletion.
    Thin {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        p: f64,
        #[arg(long, value_enum, default_value = "graph")]
        mode: ThinMode,
        /// Output depth; defaults to the input depth.
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify the eigen relation on a grid of retention probabilities.
    Fixpoint {
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<f64>,
        #[arg(long, default_value_t = 200)]
        depth: usize,
        /// Exit with status 2 if any sup residual exceeds this.
        #[arg(long, default_value_t = 1e-9)]
        threshold: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate an erased configuration-model graph.
    Gen {
        #[arg(long, required_unless_present = "spectrum")]
        beta: Option<f64>,
        #[arg(long)]
        k: Option<usize>,
        /// Sample degrees from this spectrum CSV instead of the family.
        #[arg(long, conflicts_with = "beta")]
        spectrum: Option<PathBuf>,
        #[arg(long)]
        n: usize,
        /// Degree cap; defaults to floor(n^0.3).
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Induced subgraph on independently retained vertices.
    Percolate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write `new old` id pairs of the survivors here.
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Concentration study from a TOML config; one JSON report per n.
    Study {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        /// Record wall-clock runtimes (reports are then not reproducible).
        #[arg(long)]
        timings: bool,
    },
    /// Estimate a power-law exponent, or run the estimator bias harness.
    Estimate {
        /// Spectrum CSV (regression) or one sample per line (mle).
        #[arg(long, required_unless_present = "beta")]
        input: Option<PathBuf>,
        #[arg(long, value_enum)]
        method: Method,
        #[arg(long)]
        k: usize,
        /// Upper end of the regression window; defaults to the input depth.
        #[arg(long)]
        d_max: Option<usize>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long, value_delimiter = ',')]
        n_grid: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Percolate a set system and compare set sizes with the thinned prediction.
    Sets {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        seed: Option<u64>,
        /// Write the shrunken set system here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the size comparison CSV here (stdout otherwise).
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Degenerate(_) => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Error::from(e).into()
    }
}

fn contract(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

type CmdResult = Result<(), Failure>;

/// Parses `args` (program name first) and runs the command; returns the exit code.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn execute(cmd: Command) -> CmdResult {
    match cmd {
        Command::Dist {
            beta,
            k,
            depth,
            out,
        } => cmd_dist(beta, k, depth, out.as_deref()),
        Command::Thin {
            input,
            p,
            mode,
            depth,
            out,
        } => cmd_thin(&input, p, mode, depth, out.as_deref()),
        Command::Fixpoint {
            beta,
            k,
            p,
            depth,
            threshold,
            out,
        } => cmd_fixpoint(beta, k, &p, depth, threshold, out.as_deref()),
        Command::Gen {
            beta,
            k,
            spectrum,
            n,
            cap,
            seed,
            out,
        } => cmd_gen(beta, k, spectrum.as_deref(), n, cap, seed, out.as_deref()),
        Command::Percolate {
            input,
            p,
            seed,
            out,
            map,
        } => cmd_percolate(&input, p, seed, out.as_deref(), map.as_deref()),
        Command::Study {
            config,
            out_dir,
            timings,
        } => cmd_study(&config, &out_dir, timings),
        Command::Estimate {
            input,
            method,
            k,
            d_max,
            beta,
            n_grid,
            trials,
            seed,
            cap,
            format,
            out,
        } => {
            let args = EstimateArgs {
                input,
                method,
                k,
                d_max,
                beta,
                n_grid,
                trials,
                seed,
                cap,
                format,
            };
            cmd_estimate(&args, out.as_deref())
        }
        Command::Sets {
            input,
            p,
            seed,
            out,
            report,
        } => cmd_sets(&input, p, seed, out.as_deref(), report.as_deref()),
    }
}

fn emit(out: Option<&Path>, text: &str) -> CmdResult {
    match out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let s = rand::random::<u64>();
        eprintln!("seed: {s}");
        s
    })
}

fn resolve_k(beta: f64, k: Option<usize>) -> usize {
    k.unwrap_or_else(|| beta.ceil().max(0.0) as usize)
}

fn to_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(value).map_err(Error::from)?;
    s.push('\n');
    Ok(s)
}

fn cmd_dist(beta: f64, k: Option<usize>, depth: usize, out: Option<&Path>) -> CmdResult {
    let k = resolve_k(beta, k);
    let params = Params::new(beta, k)?;
    let s = scale_free_spectrum(&params, depth)?;
    let provenance = format!("scalefree {VERSION} dist --beta {beta} --k {k} --depth {depth}");
    emit(out, &io::write_spectrum_csv(&s, &[provenance]))
}

fn cmd_thin(
    input: &Path,
    p: f64,
    mode: ThinMode,
    depth: Option<usize>,
    out: Option<&Path>,
) -> CmdResult {
    let a: Spectrum = io::read_spectrum(input)?;
    let depth = depth.unwrap_or(a.depth());
    let b = match mode {
        ThinMode::Graph => thin_graph(&a, p, depth)?,
        ThinMode::Sets => thin_sets(&a, p, depth)?,
    };
    if !b.sufficient {
        eprintln!(
            "warning: input depth limit reached; neglected tail bounded by {:e}",
            b.tail_bound
        );
    }
    let mode_name = match mode {
        ThinMode::Graph => "graph",
        ThinMode::Sets => "sets",
    };
    let comments = vec![
        format!(
            "scalefree {VERSION} thin --input {} --p {p} --mode {mode_name} --depth {depth}",
            input.display()
        ),
        format!("depth_used={} tail_bound={:e}", b.depth_used, b.tail_bound),
    ];
    emit(out, &io::write_spectrum_csv(&b.spectrum, &comments))
}

fn cmd_fixpoint(
    beta: f64,
    k: Option<usize>,
    p_grid: &[f64],
    depth: usize,
    threshold: f64,
    out: Option<&Path>,
) -> CmdResult {
    let k = resolve_k(beta, k);
    let checks = fixed_point_verify(beta, k, p_grid, depth)?;
    let report = json!({
        "tool_version": VERSION,
        "command": "fixpoint",
        "config": { "beta": beta, "k": k, "p": p_grid, "depth": depth, "threshold": threshold },
        "master_seed": null,
        "results": checks,
    });
    emit(out, &to_json(&report)?)?;
    let worst = checks
        .iter()
        .map(|c| c.report.sup_residual)
        .fold(0.0, f64::max);
    if checks.iter().any(|c| c.report.sup_residual.is_nan() || c.report.sup_residual > threshold) {
        return Err(contract(format!(
            "sup residual {worst:e} exceeds threshold {threshold:e}"
        )));
    }
    Ok(())
}

fn cmd_gen(
    beta: Option<f64>,
    k: Option<usize>,
    spectrum: Option<&Path>,
    n: usize,
    cap: Option<usize>,
    seed: Option<u64>,
    out: Option<&Path>,
) -> CmdResult {
    let seed = resolve_seed(seed);
    let cap = cap.unwrap_or_else(|| default_cap(n));
    let degree_seed = crate::seeding::derive_seed(seed, 0);
    let (sample, source) = match (beta, spectrum) {
        (Some(beta), None) => {
            let k = resolve_k(beta, k);
            let params = Params::new(beta, k)?;
            (
                sample_family_degrees(&params, n, cap, degree_seed)?,
                format!("--beta {beta} --k {k}"),
            )
        }
        (None, Some(path)) => {
            let s: Spectrum = io::read_spectrum(path)?;
            (
                sample_degrees(&s, n, cap, degree_seed)?,
                format!("--spectrum {}", path.display()),
            )
        }
        _ => return Err(usage("give exactly one of --beta or --spectrum")),
    };
    let g = configuration_model(&sample, crate::seeding::derive_seed(seed, 1))?;
    let mut text = io::write_edgelist(&g);
    text.push_str(&format!(
        "# scalefree {VERSION} gen {source} --n {n} --cap {cap} --seed {seed}\n"
    ));
    emit(out, &text)
}

fn cmd_percolate(
    input: &Path,
    p: f64,
    seed: Option<u64>,
    out: Option<&Path>,
    map: Option<&Path>,
) -> CmdResult {
    let seed = resolve_seed(seed);
    let g = io::read_edgelist(input)?;
    let res = percolate(&g, p, seed)?;
    let mut text = io::write_edgelist(&res.graph);
    text.push_str(&format!(
        "# scalefree {VERSION} percolate --input {} --p {p} --seed {seed}\n",
        input.display()
    ));
    emit(out, &text)?;
    if let Some(path) = map {
        let lines: String = res
            .survivors
            .iter()
            .enumerate()
            .map(|(new, old)| format!("{new} {old}\n"))
            .collect();
        fs::write(path, lines)?;
    }
    Ok(())
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(usize),
    Many(Vec<usize>),
}

/// TOML study description.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct StudyFile {
    beta: f64,
    k: Option<usize>,
    n: OneOrMany,
    p: f64,
    trials: usize,
    seed: Option<u64>,
    epsilon: Option<f64>,
    cap: Option<usize>,
    #[serde(default)]
    fresh_graph_per_trial: bool,
}

fn cmd_study(config: &Path, out_dir: &Path, timings: bool) -> CmdResult {
    let text = fs::read_to_string(config)?;
    let file: StudyFile =
        toml::from_str(&text).map_err(|e| usage(format!("{}: {e}", config.display())))?;
    let seed = resolve_seed(file.seed);
    let ns = match file.n {
        OneOrMany::One(n) => vec![n],
        OneOrMany::Many(v) => v,
    };
    if ns.is_empty() {
        return Err(usage("study needs at least one n"));
    }
    fs::create_dir_all(out_dir)?;
    let mut summary = String::from(
        "n,cap,trials,median_sup_deviation,max_sup_deviation,t_over_n,exceedances,azuma_bound,sparsity_satisfied\n",
    );
    let mut medians = Vec::new();
    let mut failures = Vec::new();
    for n in ns {
        let cfg = ExperimentConfig {
            k: resolve_k(file.beta, file.k),
            cap: file.cap.unwrap_or_else(|| default_cap(n)),
            epsilon: file.epsilon.unwrap_or(0.4),
            fresh_graph_per_trial: file.fresh_graph_per_trial,
            record_timings: timings,
            ..ExperimentConfig::new(file.beta, 0, n, file.p, file.trials, seed)
        };
        let report = concentration_experiment(&cfg)?;
        fs::write(out_dir.join(format!("study_n{n}.json")), to_json(&report)?)?;
        let mut degrees = String::from(
            "degree,expected,mean_empirical,std_error,mean_abs_deviation,max_abs_deviation\n",
        );
        for d in &report.degrees {
            degrees.push_str(&format!(
                "{},{},{},{},{},{}\n",
                d.degree,
                d.expected,
                d.mean_empirical,
                d.std_error,
                d.mean_abs_deviation,
                d.max_abs_deviation
            ));
        }
        fs::write(out_dir.join(format!("study_n{n}_degrees.csv")), degrees)?;
        summary.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            n,
            cfg.cap,
            cfg.trials,
            report.median_sup_deviation,
            report.max_sup_deviation,
            report.t_over_n,
            report.exceedances,
            report.azuma_bound,
            report.all_sparsity_satisfied
        ));
        if report.exceedances > 0 {
            failures.push(format!("n={n}: {} trials exceed t/n", report.exceedances));
        }
        if !report.all_sparsity_satisfied {
            failures.push(format!("n={n}: sum of squared degrees above n^(2-epsilon)"));
        }
        medians.push(report.median_sup_deviation);
    }
    fs::write(out_dir.join("study_summary.csv"), summary)?;
    let decreasing = medians.windows(2).all(|w| w[1] < w[0]);
    println!(
        "median sup deviation {} with n (overall median {:e})",
        if decreasing { "decreases" } else { "does not decrease" },
        median(&medians)
    );
    if failures.is_empty() {
        Ok(())
    } else {
        Err(contract(failures.join("; ")))
    }
}

struct EstimateArgs {
    input: Option<PathBuf>,
    method: Method,
    k: usize,
    d_max: Option<usize>,
    beta: Option<f64>,
    n_grid: Vec<usize>,
    trials: usize,
    seed: Option<u64>,
    cap: Option<usize>,
    format: Format,
}

fn cmd_estimate(args: &EstimateArgs, out: Option<&Path>) -> CmdResult {
    let input_name = args.input.as_ref().map(|p| p.display().to_string());
    match args.method {
        Method::Regression => {
            let path = args.input.as_deref().ok_or_else(|| usage("--input is required"))?;
            let s: Spectrum = io::read_spectrum(path)?;
            let d_max = args.d_max.unwrap_or(s.depth());
            let fit = estimate_exponent_regression(&s, args.k, d_max)?;
            match args.format {
                Format::Json => emit(
                    out,
                    &to_json(&json!({
                        "tool_version": VERSION,
                        "command": "estimate",
                        "config": { "method": "regression", "input": input_name, "k": args.k, "d_max": d_max },
                        "master_seed": null,
                        "result": fit,
                    }))?,
                ),
                Format::Csv => emit(
                    out,
                    &format!(
                        "method,k,d_max,beta,intercept,rms_residual,points\nregression,{},{},{},{},{},{}\n",
                        args.k, d_max, fit.beta, fit.intercept, fit.rms_residual, fit.points
                    ),
                ),
            }
        }
        Method::Mle => {
            let path = args.input.as_deref().ok_or_else(|| usage("--input is required"))?;
            let text = fs::read_to_string(path)?;
            if text.lines().any(|l| l.trim() == "degree,frequency") {
                return Err(usage("mle needs a file of integer samples, not a spectrum"));
            }
            let samples = io::parse_samples(&text)?;
            let fit = estimate_exponent_mle(&samples, args.k)?;
            if fit.degenerate {
                eprintln!("warning: likelihood maximized at the search bound; estimate is degenerate");
            }
            match args.format {
                Format::Json => emit(
                    out,
                    &to_json(&json!({
                        "tool_version": VERSION,
                        "command": "estimate",
                        "config": { "method": "mle", "input": input_name, "k": args.k },
                        "master_seed": null,
                        "result": fit,
                    }))?,
                ),
                Format::Csv => emit(
                    out,
                    &format!(
                        "method,k,beta,degenerate,samples,mean_log_degree\nmle,{},{},{},{},{}\n",
                        args.k, fit.beta, fit.degenerate, fit.samples, fit.mean_log_degree
                    ),
                ),
            }
        }
        Method::Harness => {
            let beta = args.beta.ok_or_else(|| usage("--beta is required for the harness"))?;
            if args.n_grid.is_empty() {
                return Err(usage("--n-grid is required for the harness"));
            }
            let seed = resolve_seed(args.seed);
            let mut cfg = HarnessConfig::new(beta, args.k, args.trials, seed);
            if let Some(cap) = args.cap {
                cfg.cap = cap;
            }
            if let Some(d) = args.d_max {
                cfg.regression_d_max = d;
            }
            let table = estimator_bias_harness(&cfg, &args.n_grid)?;
            match args.format {
                Format::Json => emit(out, &to_json(&table)?),
                Format::Csv => emit(out, &table.to_csv()),
            }
        }
    }
}

fn cmd_sets(
    input: &Path,
    p: f64,
    seed: Option<u64>,
    out: Option<&Path>,
    report: Option<&Path>,
) -> CmdResult {
    let seed = resolve_seed(seed);
    let f = io::read_setsystem(input)?;
    let shrunk = percolate_sets(&f, p, seed)?;
    if let Some(path) = out {
        let mut text = io::write_setsystem(&shrunk);
        text.push_str(&format!(
            "# scalefree {VERSION} sets --input {} --p {p} --seed {seed}\n",
            input.display()
        ));
        fs::write(path, text)?;
    }
    let hist = set_size_histogram(&f)?;
    let expected = thin_sets(&hist, p, hist.depth())?;
    let m = f.sets().len() as f64;
    let before = f.size_counts();
    let after = shrunk.size_counts();
    let mut csv = String::from("size,original,percolated,expected\n");
    for i in 0..=hist.depth() {
        csv.push_str(&format!(
            "{i},{},{},{}\n",
            before.get(i).copied().unwrap_or(0),
            after.get(i).copied().unwrap_or(0),
            m * expected.spectrum.entries()[i]
        ));
    }
    csv.push_str(&format!("# seed={seed}\n"));
    emit(report, &csv)
}
