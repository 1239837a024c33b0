//! Plot-ready tables: outcome histograms and fidelity sweeps.

use std::fmt::Write as _;

use serde::Serialize;

use crate::noise::SweepRow;
use crate::protocols::ProtocolStats;
use crate::sim::StateVector;

pub const HISTOGRAM_HEADER: &str = "bitstring,count,frequency";
pub const SWEEP_HEADER: &str = "theta,fidelity";
pub const STATEVECTOR_HEADER: &str = "index,bitstring,re,im";

/// Formats `x` with `digits` significant digits, like C's `%.{digits}g`.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        format!("{}e{exp}", trim_zeros(mantissa))
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_owned()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramRow {
    pub bitstring: String,
    pub count: u64,
    pub frequency: f64,
}

/// Outcome counts sorted by bitstring.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub total_shots: u64,
    pub rows: Vec<HistogramRow>,
}

impl Histogram {
    pub fn from_stats(stats: &ProtocolStats) -> Self {
        let rows = stats
            .counts
            .iter()
            .map(|(bits, &count)| HistogramRow {
                bitstring: bits.clone(),
                count,
                frequency: count as f64 / stats.shots as f64,
            })
            .collect();
        Histogram {
            total_shots: stats.shots,
            rows,
        }
    }

    pub fn count(&self, bitstring: &str) -> u64 {
        self.rows
            .iter()
            .find(|r| r.bitstring == bitstring)
            .map_or(0, |r| r.count)
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("{HISTOGRAM_HEADER}\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{}",
                r.bitstring,
                r.count,
                format_sig(r.frequency, 12)
            );
        }
        out
    }
}

pub fn sweep_to_csv(rows: &[SweepRow]) -> String {
    let mut out = format!("{SWEEP_HEADER}\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{}",
            format_sig(r.theta, 12),
            format_sig(r.fidelity, 12)
        );
    }
    out
}

pub fn statevector_to_csv(state: &StateVector) -> String {
    let mut out = format!("{STATEVECTOR_HEADER}\n");
    for (i, a) in state.amplitudes().iter().enumerate() {
        let _ = writeln!(
            out,
            "{i},{},{},{}",
            state.bitstring(i),
            format_sig(a.re, 12),
            format_sig(a.im, 12)
        );
    }
    out
}
