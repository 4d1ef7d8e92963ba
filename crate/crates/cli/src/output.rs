use std::io::Write;

use fading_cvqkd::SkrBreakdown;

use crate::approach::Approach;

pub const CSV_HEADER: [&str; 12] = [
    "approach",
    "V",
    "eps",
    "t_min",
    "delta_t",
    "t_mean",
    "attenuation_db",
    "mutual_info_bits",
    "holevo_bits",
    "rate_bits",
    "v_opt",
    "error",
];

/// One evaluated grid point.
#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub approach: Approach,
    pub v: f64,
    pub eps: f64,
    pub t_min: f64,
    pub delta_t: f64,
    pub t_mean: f64,
    /// Loss of the worst-case transmittance `t_min`, absent at `t_min = 0`.
    pub attenuation_db: Option<f64>,
    pub v_opt: Option<f64>,
    pub outcome: Result<SkrBreakdown, String>,
}

impl Row {
    /// Row for a grid point; `t_mean` and `attenuation_db` follow from `t_min`
    /// and the width clipped to `t_max <= 1`.
    pub fn new(approach: Approach, v: f64, eps: f64, t_min: f64, delta_t: f64, outcome: Result<SkrBreakdown, String>) -> Row {
        let delta_t = delta_t.min(1.0 - t_min).max(0.0);
        Row {
            approach,
            v,
            eps,
            t_min,
            delta_t,
            t_mean: t_min + 0.5 * delta_t,
            attenuation_db: crate::approach::attenuation_db(t_min).ok(),
            v_opt: None,
            outcome,
        }
    }

    pub fn value(&self, column: crate::config::YAxis) -> Option<f64> {
        use crate::config::YAxis::*;
        let b = self.outcome.as_ref().ok()?;
        Some(match column {
            RateBits => b.rate,
            HolevoBits => b.holevo,
            MutualInfoBits => b.mutual_info,
        })
    }
}

/// Formats a real with 17 significant digits.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_real).unwrap_or_default()
}

pub fn record(row: &Row) -> [String; 12] {
    let (mi, h, r, err) = match &row.outcome {
        Ok(b) => (fmt_real(b.mutual_info), fmt_real(b.holevo), fmt_real(b.rate), String::new()),
        Err(e) => (String::new(), String::new(), String::new(), e.clone()),
    };
    [
        row.approach.name().to_string(),
        fmt_real(row.v),
        fmt_real(row.eps),
        fmt_real(row.t_min),
        fmt_real(row.delta_t),
        fmt_real(row.t_mean),
        opt(row.attenuation_db),
        mi,
        h,
        r,
        opt(row.v_opt),
        err,
    ]
}

/// Writes header and rows as LF-terminated UTF-8 CSV.
pub fn write_csv<W: Write>(rows: &[Row], out: W) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.write_record(record(row))?;
    }
    w.flush()?;
    Ok(())
}

pub fn csv_string(rows: &[Row]) -> String {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("csv output is utf-8")
}
