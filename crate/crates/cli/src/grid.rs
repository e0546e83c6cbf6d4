//! Grid evaluation and its CSV / JSON rows.

use rayon::prelude::*;
use serde::Serialize;

use fibzeta::continuation::evaluate;
use fibzeta::lattice::{nearest_pole, LatticeKind};
use fibzeta::{Complex, Error, EvalOptions, Method, Parity, QuadraticField};

/// Inclusive arithmetic progression `lo, lo + step, ..., <= hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl Range {
    /// `lo:hi:step`, or a single number for a one-point range.
    pub fn parse(text: &str) -> Result<Self, String> {
        let parts: Vec<&str> = text.split(':').map(str::trim).collect();
        let num = |p: &str| {
            p.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("bad number '{p}' in range '{text}'"))
        };
        match parts.as_slice() {
            [x] => {
                let v = num(x)?;
                Ok(Self {
                    lo: v,
                    hi: v,
                    step: 1.0,
                })
            }
            [lo, hi, step] => {
                let r = Self {
                    lo: num(lo)?,
                    hi: num(hi)?,
                    step: num(step)?,
                };
                if r.step <= 0.0 {
                    return Err(format!("range step must be positive in '{text}'"));
                }
                Ok(r)
            }
            _ => Err(format!("expected lo:hi:step, got '{text}'")),
        }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.hi < self.lo {
            return Vec::new();
        }
        // tolerate rounding in (hi - lo) / step
        let n = ((self.hi - self.lo) / self.step + 1e-9).floor() as usize + 1;
        (0..n).map(|i| self.lo + i as f64 * self.step).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridRequest {
    pub d: u64,
    pub parity: Parity,
    pub re: Range,
    pub im: Range,
    pub methods: Vec<Method>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridRow {
    pub re_s: f64,
    pub im_s: f64,
    pub method: Method,
    /// `ok`, `pole`, or the name of the failure.
    pub status: String,
    pub re_z: Option<f64>,
    pub im_z: Option<f64>,
    pub tail_bound: Option<f64>,
    pub pole_distance: f64,
}

impl GridRow {
    pub fn is_failure(&self) -> bool {
        self.status != "ok" && self.status != "pole"
    }
}

pub const CSV_HEADER: &str = "re_s,im_s,method,status,re_z,im_z,tail_bound,pole_distance";

fn fmt_f(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f).unwrap_or_default()
}

impl GridRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            fmt_f(self.re_s),
            fmt_f(self.im_s),
            self.method.name(),
            self.status,
            fmt_opt(self.re_z),
            fmt_opt(self.im_z),
            fmt_opt(self.tail_bound),
            fmt_f(self.pole_distance)
        )
    }

    pub fn from_csv(line: &str) -> Result<Self, String> {
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 8 {
            return Err(format!("expected 8 columns, got {}", cols.len()));
        }
        let num = |c: &str| c.parse::<f64>().map_err(|_| format!("bad number '{c}'"));
        let opt = |c: &str| {
            if c.is_empty() {
                Ok(None)
            } else {
                num(c).map(Some)
            }
        };
        Ok(Self {
            re_s: num(cols[0])?,
            im_s: num(cols[1])?,
            method: Method::parse(cols[2]).ok_or_else(|| format!("bad method '{}'", cols[2]))?,
            status: cols[3].to_string(),
            re_z: opt(cols[4])?,
            im_z: opt(cols[5])?,
            tail_bound: opt(cols[6])?,
            pole_distance: num(cols[7])?,
        })
    }
}

fn row(
    field: &QuadraticField,
    s: Complex,
    parity: Parity,
    method: Method,
    opts: &EvalOptions,
) -> GridRow {
    let base = GridRow {
        re_s: s.re,
        im_s: s.im,
        method,
        status: "ok".into(),
        re_z: None,
        im_z: None,
        tail_bound: None,
        pole_distance: nearest_pole(LatticeKind::Split, field.log_eps(), s).1,
    };
    match evaluate(field, s, parity, method, opts) {
        Ok(z) => GridRow {
            re_z: Some(z.value.re),
            im_z: Some(z.value.im),
            tail_bound: Some(z.tail_bound),
            pole_distance: z.nearest_pole_distance,
            ..base
        },
        Err(Error::PoleProximity { distance, .. }) => GridRow {
            status: "pole".into(),
            pole_distance: distance,
            ..base
        },
        Err(e) => GridRow {
            status: e.name().into(),
            ..base
        },
    }
}

/// Rows ordered by Re s, then Im s, then method, independent of scheduling.
pub fn run_grid(field: &QuadraticField, req: &GridRequest, opts: &EvalOptions) -> Vec<GridRow> {
    let points: Vec<(Complex, Method)> = req
        .re
        .values()
        .into_iter()
        .flat_map(|re| {
            req.im
                .values()
                .into_iter()
                .map(move |im| Complex::new(re, im))
        })
        .flat_map(|s| req.methods.iter().map(move |&m| (s, m)))
        .collect();
    points
        .par_iter()
        .map(|&(s, m)| row(field, s, req.parity, m, opts))
        .collect()
}
