use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use fading_cvqkd::{cma, FadingUniform, SkrBreakdown};
use rayon::prelude::*;

use crate::approach::{run_point, Approach};
use crate::config::{SweepConfig, XAxis, YAxis};
use crate::error::CliError;
use crate::output::{self, Row};
use crate::svg::{self, Plot, Series};

#[derive(Clone, Copy, Debug)]
enum Task {
    Point { approach: Approach, v: f64, eps: f64, t_min: f64, delta_t: f64 },
    Optimize { eps: f64, t_min: f64, delta_t: f64 },
}

fn plan(cfg: &SweepConfig) -> Vec<Task> {
    let mut tasks = Vec::new();
    for &approach in &cfg.approaches {
        let widths: &[f64] = if approach == Approach::Fixed { &[0.0] } else { &cfg.delta_t_list };
        for &delta_t in widths {
            let (t_values, skipped): (Vec<f64>, Vec<f64>) =
                cfg.t_min_values.iter().partition(|&&t_min| t_min + delta_t <= 1.0 + 1e-12);
            if !skipped.is_empty() {
                log::warn!(
                    "{approach}, delta_t={delta_t}: skipping {} t_min value(s) from {} up, t_max would exceed 1",
                    skipped.len(),
                    skipped[0]
                );
            }
            for &eps in &cfg.eps_list {
                if cfg.optimize_v && approach == Approach::Cma {
                    tasks.extend(t_values.iter().map(|&t_min| Task::Optimize { eps, t_min, delta_t }));
                } else {
                    for &v in &cfg.variances {
                        tasks.extend(t_values.iter().map(|&t_min| Task::Point { approach, v, eps, t_min, delta_t }));
                    }
                }
            }
        }
    }
    tasks
}

/// Evaluates one approach at `(V, eps, t_min, delta_t)`.
pub fn try_point(approach: Approach, v: f64, eps: f64, t_min: f64, delta_t: f64) -> fading_cvqkd::Result<SkrBreakdown> {
    run_point(approach, v, eps, &FadingUniform::new(t_min, delta_t)?)
}

/// Evaluates a single grid point into a CSV row.
pub fn point_row(approach: Approach, v: f64, eps: f64, t_min: f64, delta_t: f64) -> Row {
    let outcome = try_point(approach, v, eps, t_min, delta_t).map_err(|e| e.to_string());
    Row::new(approach, v, eps, t_min, delta_t, outcome)
}

/// Maximizes the CMA rate over V, returning `(v_opt, breakdown at v_opt)`.
pub fn try_optimize(eps: f64, t_min: f64, delta_t: f64, range: (f64, f64)) -> fading_cvqkd::Result<(f64, SkrBreakdown)> {
    let f = FadingUniform::new(t_min, delta_t)?;
    let (v_opt, _) = cma::optimal_variance(eps, &f, range.0, range.1)?;
    Ok((v_opt, cma::skr_cma(v_opt, eps, &f)?))
}

/// Maximizes the CMA rate over V and reports the optimum as a row.
pub fn optimize_row(eps: f64, t_min: f64, delta_t: f64, range: (f64, f64)) -> Row {
    let mut row = Row::new(Approach::Cma, f64::NAN, eps, t_min, delta_t, Err(String::new()));
    match try_optimize(eps, t_min, delta_t, range) {
        Ok((v_opt, b)) => {
            row.v = v_opt;
            row.v_opt = Some(v_opt);
            row.outcome = Ok(b);
        }
        Err(e) => row.outcome = Err(e.to_string()),
    }
    row
}

/// Evaluates every grid point in parallel; rows come back in declared order.
pub fn run_sweep(cfg: &SweepConfig) -> Vec<Row> {
    plan(cfg)
        .par_iter()
        .map(|task| match *task {
            Task::Point { approach, v, eps, t_min, delta_t } => point_row(approach, v, eps, t_min, delta_t),
            Task::Optimize { eps, t_min, delta_t } => optimize_row(eps, t_min, delta_t, cfg.v_opt_range),
        })
        .collect()
}

fn x_value(row: &Row, axis: XAxis) -> Option<f64> {
    match axis {
        XAxis::TMin => Some(row.t_min),
        XAxis::TMean => Some(row.t_mean),
        XAxis::AttenuationDb => row.attenuation_db,
        XAxis::Variance => Some(row.v),
    }
}

fn series_label(row: &Row, axis: XAxis) -> String {
    let mut label = row.approach.name().to_string();
    if row.approach != Approach::Fixed {
        label += &format!(" dT={}", row.delta_t);
    }
    label += &format!(" eps={}", row.eps);
    if axis == XAxis::Variance {
        label += &format!(" t_min={}", row.t_min);
    } else if row.v_opt.is_some() {
        label += " V=V_opt";
    } else {
        label += &format!(" V={}", row.v);
    }
    label
}

/// Builds one plot for `column`. Rates are clamped at zero.
pub fn plot_for(cfg: &SweepConfig, rows: &[Row], column: YAxis) -> Plot {
    let mut order: Vec<String> = Vec::new();
    let mut groups: BTreeMap<String, Vec<(f64, f64)>> = BTreeMap::new();
    for row in rows {
        let (Some(x), Some(mut y)) = (x_value(row, cfg.x_axis), row.value(column)) else { continue };
        if column == YAxis::RateBits {
            y = y.max(0.0);
        }
        let label = series_label(row, cfg.x_axis);
        if !groups.contains_key(&label) {
            order.push(label.clone());
        }
        groups.entry(label).or_default().push((x, y));
    }
    let series = order
        .into_iter()
        .map(|label| {
            let mut points = groups.remove(&label).unwrap_or_default();
            points.sort_by(|a, b| a.0.total_cmp(&b.0));
            Series { label, points }
        })
        .collect();
    Plot {
        title: cfg.title.clone().unwrap_or_default(),
        x_label: cfg.x_axis.label().to_string(),
        y_label: format!("{} [bits/use]", column.label()),
        log_x: cfg.log_x,
        log_y: cfg.log_y,
        series,
    }
}

fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

fn svg_path(path: &Path, column: YAxis, many: bool) -> PathBuf {
    if !many {
        return path.to_path_buf();
    }
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}_{}.svg", column.label()))
}

/// Writes CSV (to `cfg.csv` or stdout) and the optional SVGs, relative to `base`.
pub fn write_outputs(cfg: &SweepConfig, rows: &[Row], base: &Path) -> Result<Vec<PathBuf>, CliError> {
    let mut written = Vec::new();
    match &cfg.csv {
        Some(p) => {
            let path = resolve(base, p);
            std::fs::write(&path, output::csv_string(rows)).map_err(|e| CliError::io(&path, e))?;
            written.push(path);
        }
        None => print!("{}", output::csv_string(rows)),
    }
    if let Some(p) = &cfg.svg {
        for &column in &cfg.y_axis {
            let path = svg_path(&resolve(base, p), column, cfg.y_axis.len() > 1);
            std::fs::write(&path, svg::render(&plot_for(cfg, rows, column))).map_err(|e| CliError::io(&path, e))?;
            written.push(path);
        }
    }
    Ok(written)
}

/// Maps rows with an error column to the partial-sweep status.
pub fn sweep_status(rows: &[Row]) -> Result<(), CliError> {
    let failed = rows.iter().filter(|r| r.outcome.is_err()).count();
    if failed > 0 {
        Err(CliError::PartialSweep { failed, total: rows.len() })
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_table;

    fn cfg(text: &str) -> SweepConfig {
        SweepConfig::from_table(parse_table(text).unwrap()).unwrap()
    }

    #[test]
    fn rows_follow_declared_order_and_skip_invalid_widths() {
        let c = cfg("approach = [\"fixed\", \"cma\"]\nv = [10, 20]\neps_list = [0, 0.01]\nt_min = [0.3, 0.5]\ndelta_t_list = [0.2, 0.6]\n");
        let rows = run_sweep(&c);
        // fixed: 2 eps x 2 V x 2 t; cma: dT=0.2 gives 8, dT=0.6 skips t_min=0.5 and gives 4.
        assert_eq!(rows.len(), 8 + 8 + 4);
        assert!(rows[..8].iter().all(|r| r.approach == Approach::Fixed && r.delta_t == 0.0));
        let keys: Vec<(f64, f64, f64, f64)> = rows[8..].iter().map(|r| (r.delta_t, r.eps, r.v, r.t_min)).collect();
        let mut sorted = keys.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(keys, sorted);
        assert!(rows.iter().all(|r| r.outcome.is_ok()));
        assert_eq!(rows, run_sweep(&c));
    }

    #[test]
    fn sweep_cells_match_point_evaluation() {
        let c = cfg("approach = \"hba_exact\"\nv = 10\neps_list = 0.005\nt_min = [0.2, 0.4]\ndelta_t_list = 0.2\n");
        for row in run_sweep(&c) {
            let f = FadingUniform::new(row.t_min, row.delta_t).unwrap();
            let direct = run_point(Approach::HbaExact, 10.0, 0.005, &f).unwrap();
            assert_eq!(row.outcome.unwrap(), direct);
        }
    }

    #[test]
    fn failures_become_error_rows() {
        let c = cfg("approach = \"hba_asymptotic\"\nv = 1000\neps_list = 0\nt_min = [0.0, 0.3]\ndelta_t_list = 0.2\n");
        let rows = run_sweep(&c);
        assert!(rows[0].outcome.is_err() && rows[1].outcome.is_ok());
        assert!(rows[0].attenuation_db.is_none());
        assert!(matches!(sweep_status(&rows), Err(CliError::PartialSweep { failed: 1, total: 2 })));
    }

    #[test]
    fn optimized_rows_carry_v_opt() {
        let c = cfg("approach = [\"hba_exact\", \"cma\"]\nv = 1000\noptimize_v = true\neps_list = 0\nt_min = 0.1\ndelta_t_list = 0.2\n");
        let rows = run_sweep(&c);
        assert_eq!(rows.len(), 2);
        assert!(rows[0].v_opt.is_none() && rows[0].v == 1000.0);
        let v_opt = rows[1].v_opt.unwrap();
        assert_eq!(rows[1].v, v_opt);
        assert!(v_opt > 1.0 && v_opt < 100.0);
    }

    #[test]
    fn plots_clamp_rates() {
        let c = cfg("approach = \"cma\"\nv = 10\neps_list = 0.03\nt_min = [0.05, 0.4]\ndelta_t_list = 0.6\n");
        let rows = run_sweep(&c);
        assert!(rows.iter().any(|r| r.value(YAxis::RateBits).unwrap() < 0.0));
        let p = plot_for(&c, &rows, YAxis::RateBits);
        assert!(p.series.iter().all(|s| s.points.iter().all(|&(_, y)| y >= 0.0)));
        let p = plot_for(&c, &rows, YAxis::HolevoBits);
        assert_eq!(p.series[0].points.len(), 2);
    }
}
