//! CSV and JSON renderings of a witness report.

use std::fmt::Write as _;

use corrwitness::WitnessReport;
use serde::Serialize;

pub const CSV_HEADER: &str = "t,D,sigma,d0,i_bound,eq6_bound,witness_flag";

/// 17 significant digits: enough to round-trip any `f64`.
fn float(x: f64) -> String {
    format!("{x:.16e}")
}

/// One row per sample. `sigma` is left empty for gates, which have no rate.
pub fn to_csv(report: &WitnessReport) -> String {
    let traj = &report.trajectory;
    let b = &report.bounds;
    let bounds = [b.d0, b.i_bound, b.triangle_bound].map(float).join(",");
    let mut out = String::with_capacity(128 * (traj.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for (k, flag) in report.firing_flags().enumerate() {
        let sigma = traj.sigma_values().map_or(String::new(), |s| float(s[k]));
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            float(traj.times()[k]),
            float(traj.d_values()[k]),
            sigma,
            bounds,
            u8::from(flag)
        );
    }
    out
}

#[derive(Serialize)]
struct JsonReport<'a> {
    d0: f64,
    i_bound: f64,
    eq6_bound: f64,
    corr1: f64,
    corr2: f64,
    env_dist: f64,
    max_increase: f64,
    witness_fired: bool,
    first_firing_time: Option<f64>,
    bound_saturated: bool,
    tolerance: f64,
    series: Series<'a>,
}

#[derive(Serialize)]
struct Series<'a> {
    t: &'a [f64],
    #[serde(rename = "D")]
    d: &'a [f64],
    sigma: Option<&'a [f64]>,
}

pub fn to_json(report: &WitnessReport) -> String {
    let b = &report.bounds;
    let traj = &report.trajectory;
    let doc = JsonReport {
        d0: b.d0,
        i_bound: b.i_bound,
        eq6_bound: b.triangle_bound,
        corr1: b.corr1,
        corr2: b.corr2,
        env_dist: b.env_dist,
        max_increase: report.max_increase,
        witness_fired: report.witness_fired,
        first_firing_time: report.first_firing_time,
        bound_saturated: report.bound_saturated,
        tolerance: report.tolerance,
        series: Series { t: traj.times(), d: traj.d_values(), sigma: traj.sigma_values() },
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("report values are finite");
    text.push('\n');
    text
}
