use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::run::RunRecord;

pub const FINAL_WINDOW: usize = 100;
/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.96;

/// Mean of the last `min(window, n)` values, or `None` when empty.
pub fn final_mean(returns: &[f64], window: usize) -> Option<f64> {
    if returns.is_empty() || window == 0 {
        return None;
    }
    let tail = &returns[returns.len().saturating_sub(window)..];
    Some(tail.iter().sum::<f64>() / tail.len() as f64)
}

/// Sample mean and standard error (sample deviation over root n). The
/// standard error of a single value is 0.
pub fn mean_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaSummary {
    pub alpha_exp: i32,
    pub alpha: f64,
    pub mean: f64,
    pub stderr: f64,
    pub seeds: usize,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Summary {
    /// One row per step size, ascending.
    pub rows: Vec<AlphaSummary>,
    pub warnings: Vec<String>,
}

/// Per seed, the mean of the final `min(100, episodes)` returns; across seeds,
/// the mean and standard error for each step size. Records without episodes
/// or whose training faulted are left out and reported in `warnings`.
pub fn summarize_final100(records: &[RunRecord]) -> Summary {
    let mut groups: BTreeMap<i32, (f64, Vec<f64>)> = BTreeMap::new();
    let mut warnings = Vec::new();
    for r in records {
        let k = &r.key;
        if r.failed() {
            warnings.push(format!(
                "{} {} alpha=2^{} seed {}: training fault, excluded",
                k.game, k.agent, k.alpha_exp, k.seed
            ));
            continue;
        }
        let returns: Vec<f64> = r.returns().collect();
        match final_mean(&returns, FINAL_WINDOW) {
            Some(m) => groups
                .entry(k.alpha_exp)
                .or_insert((k.alpha, Vec::new()))
                .1
                .push(m),
            None => warnings.push(format!(
                "{} {} alpha=2^{} seed {}: no completed episodes, excluded",
                k.game, k.agent, k.alpha_exp, k.seed
            )),
        }
    }
    let rows = groups
        .into_iter()
        .map(|(alpha_exp, (alpha, means))| {
            let (mean, stderr) = mean_stderr(&means);
            AlphaSummary {
                alpha_exp,
                alpha,
                mean,
                stderr,
                seeds: means.len(),
            }
        })
        .collect();
    Summary { rows, warnings }
}

/// The largest step size whose 95% interval overlaps the interval of the
/// best mean. `None` for an empty table.
pub fn select_alpha(rows: &[AlphaSummary]) -> Option<&AlphaSummary> {
    let best = rows
        .iter()
        .max_by(|a, b| a.mean.total_cmp(&b.mean).then(a.alpha.total_cmp(&b.alpha)))?;
    let (lo, hi) = (best.mean - Z95 * best.stderr, best.mean + Z95 * best.stderr);
    rows.iter()
        .filter(|r| r.mean + Z95 * r.stderr >= lo && r.mean - Z95 * r.stderr <= hi)
        .max_by(|a, b| a.alpha.total_cmp(&b.alpha))
}
