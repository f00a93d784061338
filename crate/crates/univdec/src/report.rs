//! Serializable report mirrors. Exact rationals are serialized as "p/q"
//! strings so rational-mode outputs round-trip losslessly and runs are
//! byte-deterministic; floats appear only where the quantity itself is a
//! float (MC estimates, per-symbol log slacks).

use serde::{Deserialize, Serialize};

use crate::numeric::{fmt_rat, rat_to_f64, Rat};
use crate::simulator::{ErrorReport, McEstimate};
use crate::universal::RedundancyReport;

pub fn rat_str(r: &Rat) -> String {
    fmt_rat(r)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct McJson {
    pub estimate: f64,
    pub trials: u64,
    pub ci_halfwidth: f64,
}

impl From<&McEstimate> for McJson {
    fn from(e: &McEstimate) -> Self {
        McJson {
            estimate: e.estimate,
            trials: e.trials,
            ci_halfwidth: e.ci_halfwidth,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RedundancyJson {
    pub k_n: String,
    pub k_n_f64: f64,
    pub slack_per_symbol: f64,
    pub argmax_y: Vec<usize>,
    pub per_y: Vec<String>,
    pub lower_bound_only: bool,
}

impl From<&RedundancyReport> for RedundancyJson {
    fn from(r: &RedundancyReport) -> Self {
        RedundancyJson {
            k_n: rat_str(&r.k_n),
            k_n_f64: rat_to_f64(&r.k_n),
            slack_per_symbol: r.slack_per_symbol,
            argmax_y: r.argmax_y.symbols.clone(),
            per_y: r.per_y.iter().map(rat_str).collect(),
            lower_bound_only: r.lower_bound_only,
        }
    }
}

/// One CSV row per (instance, metric, decoder).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CsvRow {
    pub n: usize,
    pub r: f64,
    pub m: u64,
    pub p_e_exact: Option<String>,
    pub p_e_mc: Option<f64>,
    pub ci: Option<f64>,
    pub union_clip: Option<String>,
    pub sandwich_ratio: Option<String>,
    pub k_n: Option<String>,
    pub slack_per_symbol: Option<f64>,
}

pub const CSV_HEADER: &str =
    "n,R,M,P_e_exact,P_e_mc,ci,union_clip,sandwich_ratio,K_n,slack_per_symbol";

fn cell<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

impl CsvRow {
    pub fn to_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.n,
            self.r,
            self.m,
            cell(&self.p_e_exact),
            cell(&self.p_e_mc),
            cell(&self.ci),
            cell(&self.union_clip),
            cell(&self.sandwich_ratio),
            cell(&self.k_n),
            cell(&self.slack_per_symbol),
        )
    }
}

impl From<&ErrorReport> for CsvRow {
    fn from(e: &ErrorReport) -> Self {
        CsvRow {
            n: e.n,
            r: e.rate,
            m: e.m,
            p_e_exact: e.pe_exact.as_ref().map(rat_str),
            p_e_mc: e.pe_mc.as_ref().map(|m| m.estimate),
            ci: e.pe_mc.as_ref().map(|m| m.ci_halfwidth),
            union_clip: e.union_clip.as_ref().map(rat_str),
            sandwich_ratio: e.sandwich_ratio.as_ref().map(rat_str),
            k_n: e.k_n.as_ref().map(rat_str),
            slack_per_symbol: e.slack_per_symbol,
        }
    }
}

pub fn render_csv(rows: &[CsvRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.to_line());
        out.push('\n');
    }
    out
}
