use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fading_cvqkd::montecarlo::SampleConfig;
use fading_cvqkd::FadingUniform;
use fading_cvqkd_cli::config::{apply_overrides, parse_table, read_table, SweepConfig};
use fading_cvqkd_cli::output::{fmt_real, write_csv, Row};
use fading_cvqkd_cli::threshold::{default_bracket, find_positive_threshold_in, ThresholdError};
use fading_cvqkd_cli::{mc, presets, sweep, Approach, CliError};

/// Secret key rates of Gaussian-modulated CV-QKD over uniformly fading channels.
#[derive(Parser)]
#[command(name = "fading-cvqkd", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one approach at one parameter point and print a CSV row.
    Point(PointArgs),
    /// Run a parameter sweep from a config file and/or flags.
    Sweep {
        /// Flat TOML config; flags of the same name override its keys.
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        keys: ConfigKeys,
    },
    /// Maximize the CMA rate over the modulation variance.
    OptimizeV(OptimizeArgs),
    /// Bisect the smallest t_min giving a positive rate.
    Threshold(ThresholdArgs),
    /// Compare sampled transmittance moments with their closed forms.
    McValidate(McArgs),
    /// Run a shipped figure preset (fig2, fig3, fig45).
    Preset {
        name: String,
        /// Directory receiving the CSV and SVG files.
        #[arg(long = "out_dir", default_value = ".")]
        out_dir: PathBuf,
        /// Print the preset's config files instead of running them.
        #[arg(long)]
        print: bool,
        #[command(flatten)]
        keys: ConfigKeys,
    },
}

#[derive(Args)]
struct PointArgs {
    #[arg(long)]
    approach: Approach,
    #[arg(long)]
    v: f64,
    #[arg(long, default_value_t = 0.0)]
    eps: f64,
    #[arg(long = "t_min")]
    t_min: f64,
    #[arg(long = "delta_t", default_value_t = 0.0)]
    delta_t: f64,
}

#[derive(Args)]
struct OptimizeArgs {
    #[arg(long, default_value_t = 0.0)]
    eps: f64,
    #[arg(long = "t_min")]
    t_min: f64,
    #[arg(long = "delta_t", default_value_t = 0.0)]
    delta_t: f64,
    #[arg(long = "v_lo", default_value_t = fading_cvqkd::cma::V_SEARCH_RANGE.0)]
    v_lo: f64,
    #[arg(long = "v_hi", default_value_t = fading_cvqkd::cma::V_SEARCH_RANGE.1)]
    v_hi: f64,
}

#[derive(Args)]
struct ThresholdArgs {
    #[arg(long)]
    approach: Approach,
    #[arg(long)]
    v: f64,
    #[arg(long, default_value_t = 0.0)]
    eps: f64,
    #[arg(long = "delta_t", default_value_t = 0.0)]
    delta_t: f64,
    /// Lower end of the t_min bracket.
    #[arg(long)]
    lo: Option<f64>,
    /// Upper end of the t_min bracket.
    #[arg(long)]
    hi: Option<f64>,
    #[arg(long, default_value_t = 1e-5)]
    tol: f64,
}

#[derive(Args)]
struct McArgs {
    #[arg(long, default_value_t = 10.0)]
    v: f64,
    #[arg(long, default_value_t = 0.0)]
    eps: f64,
    #[arg(long = "t_min")]
    t_min: f64,
    #[arg(long = "delta_t")]
    delta_t: f64,
    #[arg(long, default_value_t = 1_000_000)]
    n: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

/// Every sweep config key, accepted as a flag of the same name.
#[derive(Args, Default)]
struct ConfigKeys {
    #[arg(long)]
    approach: Option<String>,
    #[arg(long)]
    v: Option<String>,
    #[arg(long = "v_start")]
    v_start: Option<String>,
    #[arg(long = "v_stop")]
    v_stop: Option<String>,
    #[arg(long = "v_points")]
    v_points: Option<String>,
    #[arg(long = "v_log")]
    v_log: Option<String>,
    #[arg(long = "eps_list")]
    eps_list: Option<String>,
    #[arg(long = "t_min")]
    t_min: Option<String>,
    #[arg(long = "t_min_start")]
    t_min_start: Option<String>,
    #[arg(long = "t_min_stop")]
    t_min_stop: Option<String>,
    #[arg(long = "t_min_step")]
    t_min_step: Option<String>,
    #[arg(long = "delta_t_list")]
    delta_t_list: Option<String>,
    #[arg(long = "x_axis")]
    x_axis: Option<String>,
    #[arg(long = "y_axis")]
    y_axis: Option<String>,
    #[arg(long = "optimize_v")]
    optimize_v: Option<String>,
    #[arg(long = "v_opt_lo")]
    v_opt_lo: Option<String>,
    #[arg(long = "v_opt_hi")]
    v_opt_hi: Option<String>,
    #[arg(long)]
    csv: Option<String>,
    #[arg(long)]
    svg: Option<String>,
    #[arg(long)]
    title: Option<String>,
    #[arg(long = "log_x")]
    log_x: Option<String>,
    #[arg(long = "log_y")]
    log_y: Option<String>,
}

impl ConfigKeys {
    fn pairs(&self) -> Vec<(&'static str, &str)> {
        let all = [
            ("approach", &self.approach),
            ("v", &self.v),
            ("v_start", &self.v_start),
            ("v_stop", &self.v_stop),
            ("v_points", &self.v_points),
            ("v_log", &self.v_log),
            ("eps_list", &self.eps_list),
            ("t_min", &self.t_min),
            ("t_min_start", &self.t_min_start),
            ("t_min_stop", &self.t_min_stop),
            ("t_min_step", &self.t_min_step),
            ("delta_t_list", &self.delta_t_list),
            ("x_axis", &self.x_axis),
            ("y_axis", &self.y_axis),
            ("optimize_v", &self.optimize_v),
            ("v_opt_lo", &self.v_opt_lo),
            ("v_opt_hi", &self.v_opt_hi),
            ("csv", &self.csv),
            ("svg", &self.svg),
            ("title", &self.title),
            ("log_x", &self.log_x),
            ("log_y", &self.log_y),
        ];
        all.into_iter().filter_map(|(k, v)| v.as_deref().map(|v| (k, v))).collect()
    }
}

fn print_rows(rows: &[Row]) -> Result<(), CliError> {
    write_csv(rows, std::io::stdout().lock()).map_err(|e| CliError::InvalidArgs(format!("writing stdout: {e}")))
}

fn point(a: PointArgs) -> Result<(), CliError> {
    let b = sweep::try_point(a.approach, a.v, a.eps, a.t_min, a.delta_t)?;
    print_rows(&[Row::new(a.approach, a.v, a.eps, a.t_min, a.delta_t, Ok(b))])
}

fn optimize_v(a: OptimizeArgs) -> Result<(), CliError> {
    let (v_opt, b) = sweep::try_optimize(a.eps, a.t_min, a.delta_t, (a.v_lo, a.v_hi))?;
    let mut row = Row::new(Approach::Cma, v_opt, a.eps, a.t_min, a.delta_t, Ok(b));
    row.v_opt = Some(v_opt);
    print_rows(&[row])
}

fn threshold(a: ThresholdArgs) -> Result<(), CliError> {
    let (lo, hi) = default_bracket(a.approach, a.delta_t);
    let result = find_positive_threshold_in(a.approach, a.v, a.eps, a.delta_t, a.lo.unwrap_or(lo), a.hi.unwrap_or(hi), a.tol);
    let th = match result {
        Ok(th) => th,
        Err(ThresholdError::Eval(e)) => return Err(e.into()),
        Err(e @ ThresholdError::Bracket { .. }) => return Err(CliError::InvalidArgs(e.to_string())),
        Err(e) => return Err(CliError::Numerical(e.to_string())),
    };
    println!("approach,V,eps,delta_t,t_min_threshold,attenuation_db");
    println!(
        "{},{},{},{},{},{}",
        a.approach,
        fmt_real(a.v),
        fmt_real(a.eps),
        fmt_real(a.delta_t),
        fmt_real(th.t_min),
        fmt_real(th.attenuation_db)
    );
    Ok(())
}

fn mc_validate(a: McArgs) -> Result<(), CliError> {
    let f = FadingUniform::new(a.t_min, a.delta_t)?;
    let cfg = SampleConfig::new(a.n, a.seed)?;
    let checks = mc::mc_validate(a.v, a.eps, &f, &cfg)?;
    println!("quantity,closed_form,monte_carlo,std_error,z_score");
    for c in &checks {
        println!(
            "{},{},{},{},{}",
            c.quantity,
            fmt_real(c.closed_form),
            fmt_real(c.monte_carlo),
            fmt_real(c.std_error),
            fmt_real(c.z_score())
        );
    }
    match checks.iter().find(|c| c.z_score().abs() > 5.0) {
        Some(c) => Err(CliError::Numerical(format!("{} is {:.2} standard errors from its closed form", c.quantity, c.z_score()))),
        None => Ok(()),
    }
}

fn run_config(table: toml::Table, base: &std::path::Path) -> Result<(), CliError> {
    let cfg = SweepConfig::from_table(table)?;
    let rows = sweep::run_sweep(&cfg);
    for path in sweep::write_outputs(&cfg, &rows, base)? {
        log::info!("wrote {}", path.display());
    }
    sweep::sweep_status(&rows)
}

fn sweep_cmd(config: Option<PathBuf>, keys: ConfigKeys) -> Result<(), CliError> {
    let mut table = match &config {
        Some(path) => read_table(path)?,
        None => toml::Table::new(),
    };
    apply_overrides(&mut table, keys.pairs())?;
    run_config(table, std::path::Path::new("."))
}

fn preset(name: String, out_dir: PathBuf, print: bool, keys: ConfigKeys) -> Result<(), CliError> {
    let panels = presets::preset(&name).ok_or_else(|| {
        CliError::InvalidArgs(format!("unknown preset `{name}` (available: {})", presets::NAMES.join(", ")))
    })?;
    if print {
        for p in panels {
            println!("# --- {}.toml ---\n{}", p.name, p.text);
        }
        return Ok(());
    }
    let overrides = keys.pairs();
    if overrides.iter().any(|(k, _)| *k == "csv" || *k == "svg") {
        return Err(CliError::InvalidArgs("presets name their own output files; use --out_dir".into()));
    }
    std::fs::create_dir_all(&out_dir).map_err(|e| CliError::io(&out_dir, e))?;
    let mut partial = None;
    for p in panels {
        let mut table = parse_table(p.text)?;
        apply_overrides(&mut table, overrides.iter().copied())?;
        match run_config(table, &out_dir) {
            Err(e @ CliError::PartialSweep { .. }) => {
                log::warn!("{}: {e}", p.name);
                partial = Some(e);
            }
            other => other?,
        }
    }
    partial.map_or(Ok(()), Err)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Point(a) => point(a),
        Command::Sweep { config, keys } => sweep_cmd(config, keys),
        Command::OptimizeV(a) => optimize_v(a),
        Command::Threshold(a) => threshold(a),
        Command::McValidate(a) => mc_validate(a),
        Command::Preset { name, out_dir, print, keys } => preset(name, out_dir, print, keys),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
