//! Cartesian parameter sweeps written as CSV.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    cf_rate, cutset_marc, cutset_relay, cutset_two_relay, cutset_twrc, df_rate, df_two_relay_rate, marc_point,
    twrc_region, RatePoint,
};
use crate::error::{Error, Result};
use crate::relay_schemes::params::ChannelParams;

/// `points` evenly spaced values from `start` to `stop` inclusive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamRange {
    pub name: String,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl ParamRange {
    pub fn values(&self) -> Result<Vec<f64>> {
        if self.points == 0 {
            return Err(Error::param(&self.name, "empty range"));
        }
        if !self.start.is_finite() || !self.stop.is_finite() {
            return Err(Error::param(&self.name, "range bounds must be finite"));
        }
        if self.points == 1 {
            return Ok(vec![self.start]);
        }
        let last = (self.points - 1) as f64;
        Ok((0..self.points)
            .map(|i| {
                if i + 1 == self.points {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * i as f64 / last
                }
            })
            .collect())
    }
}

fn default_time_share_points() -> usize {
    11
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    /// Base parameters; swept fields are overwritten per grid point.
    pub params: ChannelParams,
    #[serde(default)]
    pub ranges: Vec<ParamRange>,
    /// Resolution of the MARC time-sharing grid.
    #[serde(default = "default_time_share_points")]
    pub time_share_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub params: ChannelParams,
    pub point: RatePoint,
}

/// Achievable points followed by the cut-set point for one parameter set.
pub fn rate_points(params: &ChannelParams, time_share_points: usize) -> Result<Vec<RatePoint>> {
    params.validate()?;
    match params {
        ChannelParams::Relay(p) => Ok(vec![df_rate(p)?, cf_rate(p)?, cutset_relay(p)?]),
        ChannelParams::TwoRelay(p) => Ok(vec![df_two_relay_rate(p)?, cutset_two_relay(p)?]),
        ChannelParams::Twrc(p) => Ok(vec![twrc_region(p)?, cutset_twrc(p)?]),
        ChannelParams::Marc(p) => {
            if time_share_points == 0 {
                return Err(Error::param("time_share_points", "empty range"));
            }
            let grid = ParamRange {
                name: "time_share".into(),
                start: 0.0,
                stop: 1.0,
                points: time_share_points,
            }
            .values()?;
            let mut out = grid.iter().map(|&a| marc_point(p, a)).collect::<Result<Vec<_>>>()?;
            out.push(cutset_marc(p)?);
            Ok(out)
        }
    }
}

/// Evaluates every scheme on the cartesian grid of `spec.ranges`; the first
/// range varies slowest. Row order does not depend on the thread count.
pub fn region_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    let axes = spec.ranges.iter().map(|r| r.values()).collect::<Result<Vec<_>>>()?;
    let mut grid = vec![spec.params];
    for (range, values) in spec.ranges.iter().zip(&axes) {
        let mut next = Vec::with_capacity(grid.len() * values.len());
        for base in &grid {
            for &v in values {
                let mut q = *base;
                q.set(&range.name, v)?;
                next.push(q);
            }
        }
        grid = next;
    }
    let per_point: Vec<Result<Vec<SweepRow>>> = grid
        .par_iter()
        .map(|q| {
            Ok(rate_points(q, spec.time_share_points)?
                .into_iter()
                .map(|point| SweepRow { params: *q, point })
                .collect())
        })
        .collect();
    let mut rows = Vec::new();
    for r in per_point {
        rows.extend(r?);
    }
    Ok(rows)
}

/// Formats `v` with 9 significant digits.
pub fn format_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{v:.8e}");
    let exp: i32 = sci.split('e').nth(1).and_then(|e| e.parse().ok()).unwrap_or(0);
    if (-4..9).contains(&exp) {
        format!("{:.*}", (8 - exp) as usize, v)
    } else {
        sci
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(format_sig).unwrap_or_default()
}

/// Writes one header row and one row per [`SweepRow`].
pub fn write_csv<W: Write>(rows: &[SweepRow], w: W) -> Result<()> {
    let io = |e: csv::Error| Error::Io(e.to_string());
    let mut out = csv::Writer::from_writer(w);
    let names: Vec<&str> = rows
        .first()
        .map(|r| r.params.fields().into_iter().map(|(n, _)| n).collect())
        .unwrap_or_default();
    let mut header = vec!["topology"];
    header.extend(&names);
    header.extend([
        "scheme",
        "bound",
        "r1",
        "r2",
        "alpha",
        "beta1",
        "alpha2",
        "permutation",
        "time_share",
        "rho",
        "min_distortion",
    ]);
    out.write_record(&header).map_err(io)?;
    for row in rows {
        if row.params.topology() != rows[0].params.topology() {
            return Err(Error::param("topology", "a sweep holds a single topology"));
        }
        let a = &row.point.args;
        let mut rec = vec![row.params.topology().as_str().to_string()];
        rec.extend(row.params.fields().into_iter().map(|(_, v)| format_sig(v)));
        rec.push(row.point.scheme.as_str().into());
        rec.push(
            match row.point.bound {
                super::Bound::Achievable => "achievable",
                super::Bound::Cutset => "cutset",
            }
            .into(),
        );
        rec.push(opt(row.point.coordinates.first().copied()));
        rec.push(opt(row.point.coordinates.get(1).copied()));
        rec.push(opt(a.alpha));
        rec.push(opt(a.beta1));
        rec.push(opt(a.alpha2));
        rec.push(a.permutation.map(|p| format!("{}-{}", p[0], p[1])).unwrap_or_default());
        rec.push(opt(a.time_share));
        rec.push(opt(a.rho));
        rec.push(opt(a.min_distortion));
        out.write_record(&rec).map_err(io)?;
    }
    out.flush().map_err(|e| Error::Io(e.to_string()))
}
