//! Pairwise error probabilities and canonical metrics.
//!
//! pem(x, y) is the probability that one independently drawn codeword ties
//! or beats the transmitted x under the metric, given output y. Ties count
//! as errors.

use num_traits::Zero;

use crate::error::Result;
use crate::model::{Metric, Prior, Sequence};
use crate::numeric::{float_tied, log2_of_rat, log2_sum, Rat};
use crate::rngutil;

#[derive(Debug, Clone)]
pub enum PairwiseResult {
    Exact(Rat),
    MonteCarlo {
        estimate: f64,
        trials: u64,
        ci_halfwidth: f64,
    },
}

impl PairwiseResult {
    pub fn value_f64(&self) -> f64 {
        match self {
            PairwiseResult::Exact(p) => crate::numeric::rat_to_f64(p),
            PairwiseResult::MonteCarlo { estimate, .. } => *estimate,
        }
    }
}

/// pem(x, y) = Q_n({x' : m(x', y) ≥ m(x, y)}), exact over the support.
pub fn pairwise_error_exact(
    prior: &Prior,
    metric: &Metric,
    x: &Sequence,
    y: &Sequence,
    cap: u64,
) -> Result<Rat> {
    let threshold = metric.eval_exact(x, y)?;
    let mut total = Rat::zero();
    for (xp, mass) in prior.support(cap)? {
        if metric.eval_exact(&xp, y)? >= threshold {
            total += mass;
        }
    }
    Ok(total)
}

/// Unbiased Monte Carlo estimate of pem with a 95% normal-approximation CI.
pub fn pairwise_error_mc(
    prior: &Prior,
    metric: &Metric,
    x: &Sequence,
    y: &Sequence,
    trials: u64,
    seed: u64,
) -> Result<PairwiseResult> {
    assert!(trials >= 1);
    let threshold = metric.eval_exact(x, y)?;
    let mut rng = rngutil::seeded(seed);
    let mut hits = 0u64;
    for _ in 0..trials {
        let xp = prior.sample(&mut rng);
        if metric.eval_exact(&xp, y)? >= threshold {
            hits += 1;
        }
    }
    let p = hits as f64 / trials as f64;
    let ci = 1.96 * (p * (1.0 - p) / trials as f64).sqrt();
    Ok(PairwiseResult::MonteCarlo {
        estimate: p,
        trials,
        ci_halfwidth: ci,
    })
}

/// Float-mode pem: log-domain mass accumulation with the documented
/// relative tie tolerance on metric scores.
pub fn pairwise_error_float(
    prior: &Prior,
    metric: &Metric,
    x: &Sequence,
    y: &Sequence,
    cap: u64,
) -> Result<f64> {
    let threshold = metric.eval_f64(x, y)?;
    let mut log_terms = Vec::new();
    for (xp, _) in prior.support(cap)? {
        let v = metric.eval_f64(&xp, y)?;
        if v > threshold || float_tied(v, threshold) {
            log_terms.push(prior.log2_mass(&xp)?);
        }
    }
    Ok(log2_sum(&log_terms).exp2())
}

/// Canonical metric value m̄(x, y) = −(1/n) log2 pem(x, y).
#[derive(Debug, Clone, PartialEq)]
pub enum CanonicalValue {
    /// Q_n(x) = 0 and nothing ties or beats x: pem = 0, m̄ undefined.
    OffSupport,
    Finite {
        /// exact pem underlying the value
        pem: Rat,
        /// −(1/n) log2 pem
        per_symbol: f64,
    },
}

pub fn canonical_metric(
    prior: &Prior,
    metric: &Metric,
    x: &Sequence,
    y: &Sequence,
    cap: u64,
) -> Result<CanonicalValue> {
    let pem = pairwise_error_exact(prior, metric, x, y, cap)?;
    if pem.is_zero() {
        return Ok(CanonicalValue::OffSupport);
    }
    let per_symbol = -log2_of_rat(&pem) / prior.n as f64;
    Ok(CanonicalValue::Finite { pem, per_symbol })
}

/// E_Q[1 / pem(X, y)] = E_Q[2^{n·m̄(X,y)}]; the per-metric normality
/// statistic whose (1/n) log2 is compared against a slack budget.
pub fn normality_statistic(prior: &Prior, metric: &Metric, y: &Sequence, cap: u64) -> Result<Rat> {
    let column = pem_column(prior, metric, y, cap)?;
    let mut total = Rat::zero();
    for e in &column.entries {
        total += &e.mass / &e.pem;
    }
    Ok(total)
}

/// One support sequence with its mass, metric score, and exact pem.
#[derive(Debug, Clone)]
pub struct PemEntry {
    pub x: Sequence,
    pub mass: Rat,
    pub score: Rat,
    pub pem: Rat,
}

/// pem for every support sequence at a fixed y, in canonical rank order.
/// pem(x) ≥ Q(x) always holds here since x ties with itself.
#[derive(Debug, Clone)]
pub struct PemColumn {
    pub entries: Vec<PemEntry>,
}

pub fn pem_column(prior: &Prior, metric: &Metric, y: &Sequence, cap: u64) -> Result<PemColumn> {
    let support = prior.support(cap)?;
    let mut scored: Vec<(usize, Rat)> = Vec::with_capacity(support.len());
    for (i, (x, _)) in support.iter().enumerate() {
        scored.push((i, metric.eval_exact(x, y)?));
    }
    // descending score; cumulative mass through each equal-score group
    let mut order: Vec<usize> = (0..scored.len()).collect();
    order.sort_by(|&a, &b| scored[b].1.cmp(&scored[a].1));
    let mut pems: Vec<Rat> = vec![Rat::zero(); scored.len()];
    let mut cum = Rat::zero();
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j < order.len() && scored[order[j]].1 == scored[order[i]].1 {
            cum += &support[order[j]].1;
            j += 1;
        }
        for &idx in &order[i..j] {
            pems[idx] = cum.clone();
        }
        i = j;
    }
    let entries = support
        .into_iter()
        .zip(scored)
        .zip(pems)
        .map(|(((x, mass), (_, score)), pem)| PemEntry { x, mass, score, pem })
        .collect();
    Ok(PemColumn { entries })
}
