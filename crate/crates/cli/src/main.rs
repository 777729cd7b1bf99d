//! `apf`: batch front end for the apf library.

mod output;
mod parse;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use apf::arithmetic::{self, GaussNormalization};
use apf::distribution::{self, MIN_BINS};
use apf::hyperbolic::counting::DEFAULT_ORBIT_BUDGET;
use apf::hyperbolic::remainder::{integrated_remainder_g3, remainder_e, variance_window};
use apf::hyperbolic::shc::shc_transforms;
use apf::hyperbolic::{orbit_counters, HPoint, SpectralData};
use apf::moments::{self, MomentOptions};
use apf::spectrum::{self, load_spectrum, load_zero_table};
use apf::trigsum::{eval_grid, grid_intervals};
use apf::{CutoffSchedule, Error, Spectrum};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use output::{sink, write_json, write_table, Provenance};

#[derive(Parser)]
#[command(name = "apf", version, about = "Almost periodic expansions of arithmetic remainders")]
struct Cli {
    /// Output file; stdout when omitted.
    #[arg(long, short, global = true)]
    out: Option<PathBuf>,
    /// Worker threads; defaults to the number of cores. Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Overrides every enumeration budget (sieve limit, lattice bound,
    /// resonance terms, orbit bound).
    #[arg(long, global = true, env = "APF_BUDGET")]
    budget: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a spectrum (zeta zeros, Gauss circle) or window-sum an existing one.
    Spectrum(SpectrumArgs),
    /// Tabulate the truncated sum S(y, X) on a grid.
    Eval(EvalArgs),
    /// Asymptotic moment by resonance enumeration, with empirical averages.
    Moments(MomentsArgs),
    /// Occupation-time histogram of the sum.
    Dist(DistArgs),
    /// Tail masses of the histogram and their power-law fit.
    Tails(TailsArgs),
    /// Prime-counting remainder q(y) = e^{-y/2}(psi(e^y) - e^y).
    Pnt(GridArgs),
    /// Circle-problem remainder u(y), optionally beside its trigonometric approximant.
    Gauss(GaussArgs),
    /// Divisor-problem remainder v(y).
    Divisor(GridArgs),
    /// Hyperbolic orbit counts N(s), main term M(s) and remainder e(s).
    HypCount(HypCountArgs),
    /// Windowed variance H(T) of the hyperbolic remainder.
    HypVariance(HypVarianceArgs),
    /// Radially integrated remainder G_3(s, z).
    HypG3(HypG3Args),
    /// Selberg/Harish-Chandra transform h_R(t).
    Shc(ShcArgs),
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum SpectrumKind {
    Zeta,
    Gauss,
    Windows,
}

#[derive(Args, Serialize)]
struct SpectrumArgs {
    #[arg(long, value_enum)]
    kind: SpectrumKind,
    /// Zero table (kind=zeta).
    #[arg(long)]
    zeros: Option<PathBuf>,
    /// Frequency cutoff (kind=zeta).
    #[arg(long = "X")]
    x: Option<f64>,
    /// Largest n (kind=gauss).
    #[arg(long)]
    n_max: Option<u64>,
    #[arg(long, default_value = "classical")]
    norm: GaussNormalization,
    /// Spectrum CSV (kind=windows).
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    t_min: f64,
    #[arg(long)]
    t_max: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ScheduleKind {
    Constant,
    Linear,
    Exponential,
}

#[derive(Args, Serialize)]
struct ScheduleArgs {
    /// How the cutoff X grows with y.
    #[arg(long, value_enum, default_value = "constant")]
    schedule: ScheduleKind,
    /// Constant cutoff, or the floor of a growing one; all frequencies when omitted.
    #[arg(long = "X")]
    x: Option<f64>,
}

impl ScheduleArgs {
    fn build(&self, spec: &Spectrum) -> CutoffSchedule {
        match self.schedule {
            ScheduleKind::Constant => CutoffSchedule::Constant {
                x0: self.x.or(spec.max_frequency()).unwrap_or(1.0),
            },
            ScheduleKind::Linear => CutoffSchedule::Linear {
                x0: self.x.unwrap_or(0.0),
            },
            ScheduleKind::Exponential => CutoffSchedule::Exponential {
                x0: self.x.unwrap_or(0.0),
            },
        }
    }
}

#[derive(Args, Serialize)]
struct EvalArgs {
    #[arg(long)]
    spec: PathBuf,
    #[arg(long, default_value_t = 0.0)]
    y0: f64,
    #[arg(long)]
    y1: f64,
    #[arg(long)]
    step: f64,
    #[command(flatten)]
    schedule: ScheduleArgs,
    /// Use X = schedule(y1) at every point instead of schedule(y).
    #[arg(long)]
    fixed_y: bool,
}

#[derive(Args, Serialize)]
struct MomentsArgs {
    #[arg(long)]
    spec: PathBuf,
    #[arg(long)]
    order: u32,
    /// Averaging horizons for empirical moments, comma separated.
    #[arg(long = "Y", value_parser = parse::real, value_delimiter = ',')]
    y: Option<Vec<f64>>,
    /// Frequency-matching tolerance; defaults to 1e-9 relative to the largest frequency.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Exact rational arithmetic (tolerance 0).
    #[arg(long)]
    exact: bool,
    #[command(flatten)]
    schedule: ScheduleArgs,
}

#[derive(Args, Serialize)]
struct DistArgs {
    #[arg(long)]
    spec: PathBuf,
    #[arg(long = "Y")]
    y: f64,
    #[arg(long, default_value_t = 200)]
    bins: usize,
    /// Keep only frequencies up to T.
    #[arg(long = "T")]
    t: Option<f64>,
    /// Moment orders to compare against the resonance sum, comma separated.
    #[arg(long, value_parser = parse::real, value_delimiter = ',')]
    compare: Option<Vec<f64>>,
}

#[derive(Args, Serialize)]
struct TailsArgs {
    #[arg(long)]
    spec: PathBuf,
    #[arg(long = "Y")]
    y: f64,
    #[arg(long, default_value_t = 400)]
    bins: usize,
    /// Thresholds S for the tail masses, comma separated.
    #[arg(long, value_parser = parse::real, value_delimiter = ',', required = true)]
    s_grid: Vec<f64>,
    /// Coefficient decay exponent, for the predicted tail exponent.
    #[arg(long)]
    beta: Option<f64>,
}

#[derive(Args, Serialize)]
struct GridArgs {
    #[arg(long)]
    y0: f64,
    #[arg(long)]
    y1: f64,
    #[arg(long)]
    step: f64,
}

#[derive(Args, Serialize)]
struct GaussArgs {
    #[command(flatten)]
    grid: GridArgs,
    /// Add the approximant over n <= N as a second column.
    #[arg(long)]
    n_max: Option<u64>,
    #[arg(long, default_value = "classical")]
    norm: GaussNormalization,
}

#[derive(Args, Serialize)]
struct HypGroupArgs {
    /// Orbit enumerator.
    #[arg(long, default_value = "pslz")]
    group: String,
    /// Spectral data file; PSL(2,Z) defaults when omitted.
    #[arg(long)]
    spectral: Option<PathBuf>,
    #[arg(long, default_value = "i", value_parser = parse_point)]
    z: HPoint,
}

#[derive(Args, Serialize)]
struct HypCountArgs {
    #[command(flatten)]
    group: HypGroupArgs,
    #[arg(long, default_value = "i", value_parser = parse_point)]
    w: HPoint,
    /// Radius, or the end of the grid when --step is given.
    #[arg(long)]
    s: f64,
    /// Tabulate on 0, step, ..., s.
    #[arg(long)]
    step: Option<f64>,
}

#[derive(Args, Serialize)]
struct HypVarianceArgs {
    #[command(flatten)]
    group: HypGroupArgs,
    #[arg(long, default_value = "i", value_parser = parse_point)]
    w: HPoint,
    /// Window starts T (each window is [T, T+1]), comma separated.
    #[arg(long = "T", value_parser = parse::real, value_delimiter = ',', required = true)]
    t: Vec<f64>,
    #[arg(long, default_value_t = 1e-3)]
    quad_step: f64,
}

#[derive(Args, Serialize)]
struct HypG3Args {
    #[command(flatten)]
    group: HypGroupArgs,
    /// Radii, comma separated.
    #[arg(long, value_parser = parse::real, value_delimiter = ',', required = true)]
    s: Vec<f64>,
}

#[derive(Args)]
struct ShcArgs {
    #[arg(long = "R")]
    r: f64,
    /// Spectral parameter: `re+imi`, `imi`, a real, or `i/2`.
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
    t: Complex64,
    /// Evaluation regime.
    #[arg(long, default_value = "integral")]
    method: String,
}

fn parse_point(s: &str) -> Result<HPoint, String> {
    s.parse::<HPoint>().map_err(|e| e.to_string())
}

/// Failure of a run, classified for the exit code.
enum Failure {
    Usage(String),
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. }
            | Error::DuplicateFrequency(_)
            | Error::NonPositiveFrequency(_)
            | Error::EmptyRange(_)
            | Error::InvalidArgument(_)
            | Error::Aliasing { .. }
            | Error::UnknownStrategy { .. } => Failure::Usage(e.to_string()),
            Error::Io(ref io) if io.kind() == std::io::ErrorKind::NotFound => Failure::Usage(e.to_string()),
            other => Failure::Compute(other),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Compute(Error::Io(e))
    }
}

type Outcome = Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot size the thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(e)) if e.is_budget() => {
            eprintln!("error: {e}");
            eprintln!("hint: raise the limit with --budget or APF_BUDGET");
            ExitCode::from(1)
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    let out = cli.out.as_deref();
    let budget = cli.budget;
    match &cli.command {
        Command::Spectrum(a) => cmd_spectrum(a, out),
        Command::Eval(a) => cmd_eval(a, out),
        Command::Moments(a) => cmd_moments(a, budget, out),
        Command::Dist(a) => cmd_dist(a, budget, out),
        Command::Tails(a) => cmd_tails(a, out),
        Command::Pnt(a) => cmd_remainder("pnt", a, out, |y| {
            arithmetic::pnt_remainder(y, budget.unwrap_or(arithmetic::DEFAULT_PSI_BUDGET))
        }),
        Command::Gauss(a) => cmd_gauss(a, budget, out),
        Command::Divisor(a) => cmd_remainder("divisor", a, out, |y| {
            arithmetic::divisor_remainder(y, budget.unwrap_or(arithmetic::DEFAULT_COUNT_BUDGET))
        }),
        Command::HypCount(a) => cmd_hyp_count(a, budget, out),
        Command::HypVariance(a) => cmd_hyp_variance(a, budget, out),
        Command::HypG3(a) => cmd_hyp_g3(a, budget, out),
        Command::Shc(a) => cmd_shc(a, out),
    }
}

fn require_input(path: &Path) -> Outcome {
    if path.is_file() {
        Ok(())
    } else {
        Err(usage(format!("input file {} not found", path.display())))
    }
}

fn load_spec(path: &Path, prov: &mut Provenance) -> Result<Spectrum, Failure> {
    require_input(path)?;
    let spec = load_spectrum(path)?;
    prov.input(path)?;
    Ok(spec)
}

fn grid(y0: f64, y1: f64, step: f64) -> Result<Vec<f64>, Failure> {
    let n = grid_intervals(y0, y1, step)?;
    Ok((0..=n).map(|k| y0 + step * k as f64).collect())
}

fn cmd_spectrum(a: &SpectrumArgs, out: Option<&Path>) -> Outcome {
    let mut prov = Provenance::new("spectrum", a);
    let spec = match a.kind {
        SpectrumKind::Zeta => {
            let path = a.zeros.as_deref().ok_or_else(|| usage("--kind zeta needs --zeros"))?;
            let x = a.x.ok_or_else(|| usage("--kind zeta needs --X"))?;
            require_input(path)?;
            let zeros = load_zero_table(path)?;
            prov.input(path)?;
            arithmetic::zeta_spectrum(&zeros, x)?
        }
        SpectrumKind::Gauss => {
            let n = a.n_max.ok_or_else(|| usage("--kind gauss needs --n-max"))?;
            arithmetic::gauss_spectrum(n, a.norm)?
        }
        SpectrumKind::Windows => {
            let path = a.spec.as_deref().ok_or_else(|| usage("--kind windows needs --spec"))?;
            let spec = load_spec(path, &mut prov)?;
            let t_max = match a.t_max {
                Some(t) => t,
                None => spec
                    .max_frequency()
                    .map(f64::ceil)
                    .ok_or_else(|| usage("empty spectrum"))?,
            };
            let windows = spectrum::window_coefficient_sums(&spec, a.t_min, t_max)?;
            let mut extra = Vec::new();
            if let Ok(fit) = spectrum::fit_beta(&windows) {
                extra.push(format!(
                    "beta_hat={:e} amplitude={:e} r_squared={:e}",
                    fit.beta_hat, fit.amplitude, fit.r_squared
                ));
            }
            let rows: Vec<Vec<f64>> = windows.iter().map(|w| vec![w.t, w.sum]).collect();
            let mut o = sink(out)?;
            write_table(&mut *o, &prov, &extra, &["T", "sum"], &rows)?;
            o.flush()?;
            return Ok(());
        }
    };
    let mut o = sink(out)?;
    for h in prov.header_lines() {
        writeln!(o, "# {h}")?;
    }
    spec.write_csv(&mut o)?;
    o.flush()?;
    Ok(())
}

fn cmd_eval(a: &EvalArgs, out: Option<&Path>) -> Outcome {
    let mut prov = Provenance::new("eval", a);
    let spec = load_spec(&a.spec, &mut prov)?;
    let f = eval_grid(&spec, a.y0, a.y1, a.step, a.schedule.build(&spec), a.fixed_y)?;
    let mut o = sink(out)?;
    f.write_csv(&mut o, &prov.header_lines())?;
    o.flush()?;
    Ok(())
}

fn moment_options(tolerance: Option<f64>, exact: bool, budget: Option<u64>) -> MomentOptions {
    let mut opts = if exact {
        MomentOptions::exact()
    } else {
        MomentOptions::default()
    };
    if let Some(t) = tolerance {
        opts.tolerance = Some(t);
    }
    if let Some(b) = budget {
        opts.max_terms = b;
    }
    opts
}

fn cmd_moments(a: &MomentsArgs, budget: Option<u64>, out: Option<&Path>) -> Outcome {
    let mut prov = Provenance::new("moments", a);
    let spec = load_spec(&a.spec, &mut prov)?;
    if a.exact && a.tolerance.is_some_and(|t| t != 0.0) {
        return Err(usage("--exact implies tolerance 0"));
    }
    let opts = moment_options(a.tolerance, a.exact, budget);
    let report = match &a.y {
        Some(ys) => moments::moment_convergence(&spec, a.order, a.schedule.build(&spec), ys, &opts)?,
        None => moments::theoretical_moment(&spec.truncated(a.schedule.build(&spec).cutoff(0.0)), a.order, &opts)?,
    };
    let mut o = sink(out)?;
    write_json(&mut *o, &prov, report.to_json())?;
    o.flush()?;
    Ok(())
}

fn cmd_dist(a: &DistArgs, budget: Option<u64>, out: Option<&Path>) -> Outcome {
    let mut prov = Provenance::new("dist", a);
    let spec = load_spec(&a.spec, &mut prov)?;
    if a.bins < MIN_BINS {
        return Err(usage(format!("--bins must be at least {MIN_BINS}")));
    }
    let est = match a.t {
        Some(t) => distribution::truncated_distribution(&spec, t, a.y, a.bins)?,
        None => {
            let f = distribution::sample_for_distribution(&spec, a.y)?;
            distribution::estimate_distribution(&f, a.y, a.bins)?
        }
    };
    let mut header = prov.header_lines();
    if let Some(orders) = &a.compare {
        let reference = match a.t {
            Some(t) => spec.truncated(t),
            None => spec.clone(),
        };
        let opts = moment_options(None, false, budget);
        let mut reports = Vec::new();
        for &n in orders {
            if n < 1.0 || n.fract() != 0.0 {
                return Err(usage(format!("moment order {n} is not a positive integer")));
            }
            reports.push(moments::theoretical_moment(&reference, n as u32, &opts)?);
        }
        for c in distribution::compare_moments(&est, &reports) {
            header.push(format!(
                "moment order={} histogram={:e} reference={:e} gap={:e}",
                c.order, c.histogram, c.reference, c.gap
            ));
        }
    }
    let mut o = sink(out)?;
    est.write_csv(&mut o, &header)?;
    o.flush()?;
    Ok(())
}

fn cmd_tails(a: &TailsArgs, out: Option<&Path>) -> Outcome {
    let mut prov = Provenance::new("tails", a);
    let spec = load_spec(&a.spec, &mut prov)?;
    if a.bins < MIN_BINS {
        return Err(usage(format!("--bins must be at least {MIN_BINS}")));
    }
    let f = distribution::sample_for_distribution(&spec, a.y)?;
    let est = distribution::estimate_distribution(&f, a.y, a.bins)?;
    let fit = distribution::fit_tails(&est, &a.s_grid, a.beta)?;
    let mut o = sink(out)?;
    write_json(&mut *o, &prov, fit.to_json())?;
    o.flush()?;
    Ok(())
}

fn cmd_remainder<F>(name: &'static str, a: &GridArgs, out: Option<&Path>, f: F) -> Outcome
where
    F: Fn(f64) -> apf::Result<f64>,
{
    let prov = Provenance::new(name, a);
    let mut rows = Vec::new();
    for y in grid(a.y0, a.y1, a.step)? {
        rows.push(vec![y, f(y)?]);
    }
    let mut o = sink(out)?;
    write_table(&mut *o, &prov, &[], &["y", "value"], &rows)?;
    o.flush()?;
    Ok(())
}

fn cmd_gauss(a: &GaussArgs, budget: Option<u64>, out: Option<&Path>) -> Outcome {
    let prov = Provenance::new("gauss", a);
    let budget = budget.unwrap_or(arithmetic::DEFAULT_COUNT_BUDGET);
    let ys = grid(a.grid.y0, a.grid.y1, a.grid.step)?;
    let approx = match a.n_max {
        Some(n) => Some(arithmetic::gauss_spectrum(n, a.norm)?),
        None => None,
    };
    let mut rows = Vec::new();
    for &y in &ys {
        let mut row = vec![y, arithmetic::gauss_remainder(y, budget)?];
        if let Some(s) = &approx {
            row.push(apf::trigsum::eval_sum(s, y, f64::INFINITY));
        }
        rows.push(row);
    }
    let columns: &[&str] = if approx.is_some() {
        &["y", "value", "approx"]
    } else {
        &["y", "value"]
    };
    let mut o = sink(out)?;
    write_table(&mut *o, &prov, &[], columns, &rows)?;
    o.flush()?;
    Ok(())
}

fn spectral_data(a: &HypGroupArgs, prov: &mut Provenance) -> Result<SpectralData, Failure> {
    match &a.spectral {
        Some(p) => {
            require_input(p)?;
            let sd = SpectralData::load(p)?;
            prov.input(p)?;
            Ok(sd)
        }
        None => Ok(SpectralData::modular()),
    }
}

fn profile(
    a: &HypGroupArgs,
    w: HPoint,
    s_max: f64,
    budget: Option<u64>,
) -> Result<(apf::hyperbolic::OrbitProfile, Vec<String>), Failure> {
    let registry = orbit_counters();
    let counter = registry.get(&a.group)?;
    let p = counter.profile(s_max, a.z, w, budget.unwrap_or(DEFAULT_ORBIT_BUDGET))?;
    let mut notes = Vec::new();
    if !p.complete {
        notes.push("note=enumeration is heuristic and may miss elements".to_string());
    }
    if !p.cocompact {
        notes.push("note=group is not cocompact".to_string());
    }
    Ok((p, notes))
}

fn cmd_hyp_count(a: &HypCountArgs, budget: Option<u64>, out: Option<&Path>) -> Outcome {
    let mut prov = Provenance::new("hyp-count", a);
    let sd = spectral_data(&a.group, &mut prov)?;
    if a.s.is_nan() || a.s < 0.0 {
        return Err(usage("--s must be non-negative"));
    }
    let (p, notes) = profile(&a.group, a.w, a.s, budget)?;
    let ss = match a.step {
        Some(h) if a.s > 0.0 => grid(0.0, a.s, h)?,
        _ => vec![a.s],
    };
    let mut rows = Vec::new();
    for s in ss {
        let r = remainder_e(&p, &sd, s)?;
        rows.push(vec![r.s, r.n as f64, r.m, r.e]);
    }
    let mut o = sink(out)?;
    write_table(&mut *o, &prov, &notes, &["s", "N", "M", "e"], &rows)?;
    o.flush()?;
    Ok(())
}

fn cmd_hyp_variance(a: &HypVarianceArgs, budget: Option<u64>, out: Option<&Path>) -> Outcome {
    let mut prov = Provenance::new("hyp-variance", a);
    let sd = spectral_data(&a.group, &mut prov)?;
    let t_max = a.t.iter().copied().fold(f64::NAN, f64::max);
    if a.t.is_empty() || !t_max.is_finite() {
        return Err(usage("--T needs at least one window start"));
    }
    let (p, notes) = profile(&a.group, a.w, t_max + 1.0, budget)?;
    let mut rows = Vec::new();
    for &t in &a.t {
        let v = variance_window(&p, &sd, t, a.quad_step)?;
        rows.push(vec![v.t, v.h]);
    }
    let mut o = sink(out)?;
    write_table(&mut *o, &prov, &notes, &["T", "H"], &rows)?;
    o.flush()?;
    Ok(())
}

fn cmd_hyp_g3(a: &HypG3Args, budget: Option<u64>, out: Option<&Path>) -> Outcome {
    let mut prov = Provenance::new("hyp-g3", a);
    let sd = spectral_data(&a.group, &mut prov)?;
    let s_max = a.s.iter().copied().fold(f64::NAN, f64::max);
    if a.s.is_empty() || !s_max.is_finite() {
        return Err(usage("--s needs at least one radius"));
    }
    let (p, mut notes) = profile(&a.group, a.group.z, s_max, budget)?;
    let mut rows = Vec::new();
    let mut exploratory = false;
    for &s in &a.s {
        let g = integrated_remainder_g3(&p, &sd, s)?;
        exploratory |= g.exploratory;
        rows.push(vec![g.s, g.value]);
    }
    if exploratory {
        notes.push("note=exploratory: bounds are established for cocompact groups only".into());
    }
    let mut o = sink(out)?;
    write_table(&mut *o, &prov, &notes, &["s", "G3"], &rows)?;
    o.flush()?;
    Ok(())
}

fn cmd_shc(a: &ShcArgs, out: Option<&Path>) -> Outcome {
    let prov = Provenance::new("shc", &json!({"R": a.r, "t": [a.t.re, a.t.im], "method": a.method}));
    let registry = shc_transforms();
    let h = registry.get(&a.method)?.eval(a.r, a.t)?;
    let mut o = sink(out)?;
    write_table(
        &mut *o,
        &prov,
        &[],
        &["R", "t_re", "t_im", "h_re", "h_im"],
        &[vec![a.r, a.t.re, a.t.im, h.re, h.im]],
    )?;
    o.flush()?;
    Ok(())
}
