//! Sweep configuration: a flat TOML table whose keys can each be overridden
//! by a command-line flag of the same name.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::approach::Approach;
use crate::error::CliError;

/// Keys accepted in a sweep config, in documentation order.
pub const KEYS: &[&str] = &[
    "approach",
    "v",
    "v_start",
    "v_stop",
    "v_points",
    "v_log",
    "eps_list",
    "t_min",
    "t_min_start",
    "t_min_stop",
    "t_min_step",
    "delta_t_list",
    "x_axis",
    "y_axis",
    "optimize_v",
    "v_opt_lo",
    "v_opt_hi",
    "csv",
    "svg",
    "title",
    "log_x",
    "log_y",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum XAxis {
    TMin,
    TMean,
    AttenuationDb,
    Variance,
}

impl XAxis {
    pub fn label(self) -> &'static str {
        match self {
            XAxis::TMin => "t_min",
            XAxis::TMean => "t_mean",
            XAxis::AttenuationDb => "attenuation_db",
            XAxis::Variance => "V",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum YAxis {
    RateBits,
    HolevoBits,
    MutualInfoBits,
}

impl YAxis {
    pub fn label(self) -> &'static str {
        match self {
            YAxis::RateBits => "rate_bits",
            YAxis::HolevoBits => "holevo_bits",
            YAxis::MutualInfoBits => "mutual_info_bits",
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T> OneOrMany<T> {
    fn into_vec(self) -> Vec<T> {
        match self {
            OneOrMany::One(x) => vec![x],
            OneOrMany::Many(v) => v,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    approach: Option<OneOrMany<Approach>>,
    v: Option<OneOrMany<f64>>,
    v_start: Option<f64>,
    v_stop: Option<f64>,
    v_points: Option<usize>,
    v_log: Option<bool>,
    eps_list: Option<OneOrMany<f64>>,
    t_min: Option<OneOrMany<f64>>,
    t_min_start: Option<f64>,
    t_min_stop: Option<f64>,
    t_min_step: Option<f64>,
    delta_t_list: Option<OneOrMany<f64>>,
    x_axis: Option<XAxis>,
    y_axis: Option<OneOrMany<YAxis>>,
    optimize_v: Option<bool>,
    v_opt_lo: Option<f64>,
    v_opt_hi: Option<f64>,
    csv: Option<PathBuf>,
    svg: Option<PathBuf>,
    title: Option<String>,
    log_x: Option<bool>,
    log_y: Option<bool>,
}

/// Validated sweep description.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub approaches: Vec<Approach>,
    pub variances: Vec<f64>,
    pub eps_list: Vec<f64>,
    pub t_min_values: Vec<f64>,
    pub delta_t_list: Vec<f64>,
    pub x_axis: XAxis,
    pub y_axis: Vec<YAxis>,
    pub optimize_v: bool,
    pub v_opt_range: (f64, f64),
    pub csv: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub title: Option<String>,
    pub log_x: bool,
    pub log_y: bool,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::InvalidArgs(msg.into())
}

fn parse_value(raw: &str) -> Option<toml::Value> {
    toml::from_str::<toml::Table>(&format!("x = {raw}")).ok()?.remove("x")
}

fn scalar(raw: &str) -> toml::Value {
    parse_value(raw).unwrap_or_else(|| toml::Value::String(raw.to_string()))
}

/// Parses a flag value as a TOML value. Bare comma lists such as
/// `0,0.005` or `hba_exact,cma` become arrays; other unparseable text is a string.
pub fn parse_flag_value(raw: &str) -> toml::Value {
    let raw = raw.trim();
    if let Some(v) = parse_value(raw) {
        return v;
    }
    if raw.contains(',') {
        return toml::Value::Array(raw.split(',').map(|item| scalar(item.trim())).collect());
    }
    scalar(raw)
}

/// Reads a config file into a raw table.
pub fn read_table(path: &Path) -> Result<toml::Table, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_table(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

pub fn parse_table(text: &str) -> Result<toml::Table, CliError> {
    text.parse::<toml::Table>().map_err(|e| invalid(e.to_string()))
}

/// Applies `--key value` overrides on top of `table`; flags win.
pub fn apply_overrides<'a>(
    table: &mut toml::Table,
    overrides: impl IntoIterator<Item = (&'a str, &'a str)>,
) -> Result<(), CliError> {
    for (key, raw) in overrides {
        if !KEYS.contains(&key) {
            return Err(invalid(format!("unknown config key `{key}`")));
        }
        table.insert(key.to_string(), parse_flag_value(raw));
    }
    Ok(())
}

fn arange(start: f64, stop: f64, step: f64) -> Result<Vec<f64>, CliError> {
    if !(step > 0.0) || !start.is_finite() || !stop.is_finite() || stop < start {
        return Err(invalid(format!("bad range start={start} stop={stop} step={step}")));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..n).map(|i| round12(start + i as f64 * step)).collect())
}

fn round12(x: f64) -> f64 {
    (x * 1e12).round() / 1e12
}

fn variance_grid(start: f64, stop: f64, points: usize, log: bool) -> Result<Vec<f64>, CliError> {
    if points == 0 || !(start >= 1.0) || !(stop >= start) {
        return Err(invalid(format!("bad variance range {start}..{stop} with {points} points")));
    }
    if points == 1 {
        return Ok(vec![start]);
    }
    let last = (points - 1) as f64;
    Ok((0..points)
        .map(|i| {
            let s = i as f64 / last;
            if log {
                (start.ln() + s * (stop.ln() - start.ln())).exp()
            } else {
                start + s * (stop - start)
            }
        })
        .collect())
}

impl SweepConfig {
    pub fn from_table(table: toml::Table) -> Result<Self, CliError> {
        let raw: RawConfig = toml::Value::Table(table).try_into().map_err(|e: toml::de::Error| invalid(e.to_string()))?;
        let approaches = raw.approach.ok_or_else(|| invalid("missing `approach`"))?.into_vec();
        let optimize_v = raw.optimize_v.unwrap_or(false);

        let variances = match (raw.v, raw.v_start, raw.v_stop) {
            (Some(v), None, None) => v.into_vec(),
            (None, Some(a), Some(b)) => variance_grid(a, b, raw.v_points.unwrap_or(50), raw.v_log.unwrap_or(true))?,
            (None, None, None) if optimize_v && approaches.iter().all(|a| *a == Approach::Cma) => Vec::new(),
            (Some(_), _, _) => return Err(invalid("give either `v` or `v_start`/`v_stop`, not both")),
            _ => return Err(invalid("missing variance: set `v` or `v_start` and `v_stop`")),
        };
        let eps_list = raw.eps_list.ok_or_else(|| invalid("missing `eps_list`"))?.into_vec();
        let t_min_values = match (raw.t_min, raw.t_min_start, raw.t_min_stop) {
            (Some(t), None, None) => t.into_vec(),
            (None, Some(a), Some(b)) => arange(a, b, raw.t_min_step.ok_or_else(|| invalid("missing `t_min_step`"))?)?,
            (Some(_), _, _) => return Err(invalid("give either `t_min` or a t_min range, not both")),
            _ => return Err(invalid("missing `t_min` or `t_min_start`/`t_min_stop`/`t_min_step`")),
        };
        let delta_t_list = raw.delta_t_list.map(OneOrMany::into_vec).unwrap_or_else(|| vec![0.0]);
        let x_axis = raw.x_axis.unwrap_or(XAxis::TMin);
        let y_axis = raw.y_axis.map(OneOrMany::into_vec).unwrap_or_else(|| vec![YAxis::RateBits]);
        let v_opt_range = (
            raw.v_opt_lo.unwrap_or(fading_cvqkd::cma::V_SEARCH_RANGE.0),
            raw.v_opt_hi.unwrap_or(fading_cvqkd::cma::V_SEARCH_RANGE.1),
        );

        let cfg = SweepConfig {
            approaches,
            variances,
            eps_list,
            t_min_values,
            delta_t_list,
            x_axis,
            y_axis,
            optimize_v,
            v_opt_range,
            csv: raw.csv,
            svg: raw.svg,
            title: raw.title,
            log_x: raw.log_x.unwrap_or(false),
            log_y: raw.log_y.unwrap_or(false),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        let nonempty = [
            ("approach", self.approaches.is_empty()),
            ("eps_list", self.eps_list.is_empty()),
            ("t_min", self.t_min_values.is_empty()),
            ("delta_t_list", self.delta_t_list.is_empty()),
            ("y_axis", self.y_axis.is_empty()),
        ];
        if let Some((k, _)) = nonempty.iter().find(|(_, empty)| *empty) {
            return Err(invalid(format!("`{k}` must not be empty")));
        }
        if self.variances.iter().any(|v| !(*v >= 1.0 && v.is_finite())) {
            return Err(invalid("every variance must be finite and >= 1"));
        }
        if self.eps_list.iter().any(|e| !(*e >= 0.0 && e.is_finite())) {
            return Err(invalid("every eps must be finite and >= 0"));
        }
        if self.t_min_values.iter().any(|t| !(0.0..=1.0).contains(t)) {
            return Err(invalid("every t_min must lie in [0, 1]"));
        }
        if self.delta_t_list.iter().any(|d| !(0.0..=1.0).contains(d)) {
            return Err(invalid("every delta_t must lie in [0, 1]"));
        }
        let (lo, hi) = self.v_opt_range;
        if !(lo >= 1.0 && hi > lo && hi.is_finite()) {
            return Err(invalid(format!("bad optimizer range [{lo}, {hi}]")));
        }
        if self.optimize_v && self.x_axis == XAxis::Variance {
            return Err(invalid("`optimize_v` cannot be combined with x_axis = \"variance\""));
        }
        if self.optimize_v && !self.approaches.contains(&Approach::Cma) {
            return Err(invalid("`optimize_v` applies to the cma approach, which is not selected"));
        }
        Ok(())
    }
}
