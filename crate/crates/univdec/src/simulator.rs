//! Random codebooks, metric decoders, exact and Monte Carlo ensemble error
//! probabilities, and the verification harness for the clipped union bound,
//! dominance and exponent comparisons, plus the finite-state family
//! constructions.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Result, UnivdecError};
use crate::model::{Alphabet, Channel, FamilyMember, Metric, MetricFamily, Prior, Sequence};
use crate::numeric::{log2_of_rat, rat, rat_pow, Rat};
use crate::rngutil;
use crate::universal::full_y_space;

/// M = max(2, ⌈2^{nR}⌉). A single codeword gives zero error and an
/// ill-defined sandwich ratio, so at least one competitor is forced.
pub fn codebook_size(n: usize, rate: f64) -> u64 {
    let m = (n as f64 * rate).exp2().ceil() as u64;
    m.max(2)
}

/// M codewords drawn iid from the prior. The ensemble formulas condition on
/// codeword 0 transmitted; the iid draw makes the message index irrelevant.
#[derive(Debug, Clone)]
pub struct Codebook {
    pub codewords: Vec<Sequence>,
    pub seed: u64,
    pub m: u64,
}

impl Codebook {
    pub fn draw(prior: &Prior, m: u64, seed: u64) -> Self {
        let mut rng = rngutil::seeded(seed);
        Codebook {
            codewords: (0..m).map(|_| prior.sample(&mut rng)).collect(),
            seed,
            m,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecodeOutcome {
    Index(usize),
    /// a tie for the maximum; counted as an error, matching the pairwise
    /// "≥" convention so the oracle and the simulation agree
    Tie,
}

/// Argmax of m(x(i), y) over the codebook; any tie for the maximum is an
/// error flag.
pub fn decode(codebook: &Codebook, y: &Sequence, metric: &Metric) -> Result<DecodeOutcome> {
    assert!(!codebook.codewords.is_empty());
    let mut best: Option<(Rat, usize, bool)> = None; // (score, index, tied)
    for (i, x) in codebook.codewords.iter().enumerate() {
        let s = metric.eval_exact(x, y)?;
        best = Some(match best {
            None => (s, i, false),
            Some((b, bi, tied)) => {
                if s > b {
                    (s, i, false)
                } else if s == b {
                    (b, bi, true)
                } else {
                    (b, bi, tied)
                }
            }
        });
    }
    let (_, idx, tied) = best.unwrap();
    Ok(if tied { DecodeOutcome::Tie } else { DecodeOutcome::Index(idx) })
}

/// Alternative tie policy: pick uniformly among the maximizers. Reported
/// for comparison only; no acceptance check uses it.
pub fn decode_uniform_tie<R: Rng>(
    codebook: &Codebook,
    y: &Sequence,
    metric: &Metric,
    rng: &mut R,
) -> Result<usize> {
    let mut best: Vec<usize> = Vec::new();
    let mut best_score: Option<Rat> = None;
    for (i, x) in codebook.codewords.iter().enumerate() {
        let s = metric.eval_exact(x, y)?;
        match &best_score {
            Some(b) if &s < b => {}
            Some(b) if &s == b => best.push(i),
            _ => {
                best_score = Some(s);
                best = vec![i];
            }
        }
    }
    Ok(best[rng.gen_range(0..best.len())])
}

/// E_{Q×W}[f(pem-like value)] plumbing: averages a per-(y, support-x) value
/// under the joint law Q_n × W_n over the full output space.
fn joint_average(
    prior: &Prior,
    channel: &Channel,
    y_alphabet: Alphabet,
    cap: u64,
    mut value: impl FnMut(&Sequence, usize, &Sequence) -> Result<Rat>,
) -> Result<Rat> {
    let support = prior.support(cap)?;
    let y_list = full_y_space(y_alphabet, prior.n, cap)?;
    let mut total = Rat::zero();
    for y in &y_list {
        for (i, (x, mass)) in support.iter().enumerate() {
            let w = channel.transition(x, y)?;
            if w.is_zero() {
                continue;
            }
            total += mass * w * value(y, i, x)?;
        }
    }
    Ok(total)
}

/// Closed-form ensemble average error under the iid-codeword ensemble:
/// P̄_e = E_{Q×W}[1 − (1 − pem(X,Y))^{M−1}], exact.
pub fn avg_error_exact(
    prior: &Prior,
    channel: &Channel,
    metric: &Metric,
    y_alphabet: Alphabet,
    m: u64,
    cap: u64,
) -> Result<Rat> {
    let support = prior.support(cap)?;
    let y_list = full_y_space(y_alphabet, prior.n, cap)?;
    let mut total = Rat::zero();
    for y in &y_list {
        let col = crate::pairwise::pem_column(prior, metric, y, cap)?;
        for (i, (x, mass)) in support.iter().enumerate() {
            let w = channel.transition(x, y)?;
            if w.is_zero() {
                continue;
            }
            let miss = Rat::one() - &col.entries[i].pem;
            total += mass * w * (Rat::one() - rat_pow(&miss, (m - 1) as u32));
        }
    }
    Ok(total)
}

/// Ensemble average error of a decoder given by per-(y, support-x) pairwise
/// errors (same closed form, arbitrary pe table).
pub fn ensemble_average_error(
    prior: &Prior,
    channel: &Channel,
    y_list: &[Sequence],
    pe: impl Fn(usize, usize) -> Rat,
    m: u64,
    cap: u64,
) -> Result<Rat> {
    let support = prior.support(cap)?;
    let mut total = Rat::zero();
    for (yi, y) in y_list.iter().enumerate() {
        for (i, (x, mass)) in support.iter().enumerate() {
            let w = channel.transition(x, y)?;
            if w.is_zero() {
                continue;
            }
            let miss = Rat::one() - pe(yi, i);
            total += mass * w * (Rat::one() - rat_pow(&miss, (m - 1) as u32));
        }
    }
    Ok(total)
}

/// E_{Q×W}[min(1, M·pem(X,Y))], the union bound clipped to unity.
pub fn union_clip_bound(
    prior: &Prior,
    channel: &Channel,
    metric: &Metric,
    y_alphabet: Alphabet,
    m: u64,
    cap: u64,
) -> Result<Rat> {
    let m_rat = Rat::from_integer(m.into());
    joint_average(prior, channel, y_alphabet, cap, |y, _, x| {
        let pem = crate::pairwise::pairwise_error_exact(prior, metric, x, y, cap)?;
        let clipped = &m_rat * pem;
        Ok(if clipped > Rat::one() { Rat::one() } else { clipped })
    })
}

#[derive(Debug, Clone)]
pub struct SandwichReport {
    pub pe_exact: Rat,
    pub union_clip: Rat,
    /// P̄_e / E[min(1, M·pem)]; always in [1/2, 1] for M ≥ 2
    pub ratio: Rat,
    pub ok: bool,
}

/// The clipped union bound is tight up to a factor 2: the ratio of the
/// exact ensemble error to the clipped bound lies in [1/2, 1].
pub fn sandwich_check(
    prior: &Prior,
    channel: &Channel,
    metric: &Metric,
    y_alphabet: Alphabet,
    m: u64,
    cap: u64,
) -> Result<SandwichReport> {
    assert!(m >= 2);
    let pe_exact = avg_error_exact(prior, channel, metric, y_alphabet, m, cap)?;
    let union_clip = union_clip_bound(prior, channel, metric, y_alphabet, m, cap)?;
    let ratio = if union_clip.is_zero() {
        // both sides zero: noiseless setups with pem supported off the
        // joint law; treat as the tight end
        Rat::one()
    } else {
        &pe_exact / &union_clip
    };
    let ok = ratio >= rat(1, 2) && ratio <= Rat::one();
    Ok(SandwichReport {
        pe_exact,
        union_clip,
        ratio,
        ok,
    })
}

#[derive(Debug, Clone)]
pub struct DominanceReport {
    /// minimal feasible 2^{nλ} = max(1, max pe_u/pe_m), exact
    pub minimal_lambda_exp2: Rat,
    pub minimal_lambda_per_symbol: f64,
    pub ok: bool,
    /// (support index, y index) where pe_m = 0 < pe_u, if any
    pub witness: Option<(usize, usize)>,
}

/// u dominates m at level λ when pe_u(x,y) ≤ pe_m(x,y)·2^{nλ} for all
/// (x, y). Reports the minimal feasible λ; pe_u = pe_m = 0 pairs constrain
/// nothing, pe_m = 0 < pe_u is a hard failure.
pub fn dominance_check(
    prior: &Prior,
    u: &Metric,
    m: &Metric,
    y_list: &[Sequence],
    lambda: f64,
    cap: u64,
) -> Result<DominanceReport> {
    let support = prior.support(cap)?;
    let mut max_ratio = Rat::one();
    let mut witness = None;
    for (yi, y) in y_list.iter().enumerate() {
        let ucol = crate::pairwise::pem_column(prior, u, y, cap)?;
        let mcol = crate::pairwise::pem_column(prior, m, y, cap)?;
        for i in 0..support.len() {
            let pu = &ucol.entries[i].pem;
            let pm = &mcol.entries[i].pem;
            if pm.is_zero() {
                if !pu.is_zero() && witness.is_none() {
                    witness = Some((i, yi));
                }
                continue;
            }
            let r = pu / pm;
            if r > max_ratio {
                max_ratio = r;
            }
        }
    }
    let minimal = log2_of_rat(&max_ratio) / prior.n.max(1) as f64;
    Ok(DominanceReport {
        ok: witness.is_none() && minimal <= lambda + 1e-12,
        minimal_lambda_exp2: max_ratio,
        minimal_lambda_per_symbol: minimal,
        witness,
    })
}

#[derive(Debug, Clone)]
pub struct ExponentCompareReport {
    /// dominance level 2^{nλ} used, exact
    pub lambda_exp2: Rat,
    pub m: u64,
    /// shifted codebook size max(2, ⌈1 + (M−1)·2^{nλ}⌉) standing in for
    /// rate R + λ
    pub m_shifted: u64,
    pub pe_u: Rat,
    pub pe_m: Rat,
    pub pe_m_shifted: Rat,
    /// P̄_{e,u}(R) ≤ 2·2^{nλ}·P̄_{e,m}(R)
    pub first_ok: bool,
    /// P̄_{e,u}(R) ≤ 2·P̄_{e,m}(R + λ)
    pub second_ok: bool,
    /// the first bound exceeds 1 and holds for free
    pub vacuous: bool,
}

/// Dominance at level λ carries over to ensemble errors with a factor-2
/// loss, either multiplicatively at the same rate or at rate R + λ.
pub fn exponent_compare(
    prior: &Prior,
    channel: &Channel,
    u: &Metric,
    m_metric: &Metric,
    y_alphabet: Alphabet,
    m: u64,
    cap: u64,
) -> Result<ExponentCompareReport> {
    let y_list = full_y_space(y_alphabet, prior.n, cap)?;
    let dom = dominance_check(prior, u, m_metric, &y_list, f64::INFINITY, cap)?;
    if let Some((i, yi)) = dom.witness {
        return Err(UnivdecError::Config {
            field: "exponent_compare.dominance".into(),
            message: format!("pe_m = 0 < pe_u at support index {i}, y index {yi}"),
        });
    }
    let l = dom.minimal_lambda_exp2;
    let pe_u = avg_error_exact(prior, channel, u, y_alphabet, m, cap)?;
    let pe_m = avg_error_exact(prior, channel, m_metric, y_alphabet, m, cap)?;
    // M₂ = max(2, ⌈1 + (M−1)·2^{nλ}⌉)
    let m2_rat = Rat::one() + Rat::from_integer((m - 1).into()) * &l;
    let m_shifted = m2_rat.ceil().to_integer().to_u64().unwrap_or(u64::MAX).max(2);
    let pe_m_shifted = avg_error_exact(prior, channel, m_metric, y_alphabet, m_shifted, cap)?;
    let first_rhs = rat(2, 1) * &l * &pe_m;
    let first_ok = pe_u <= first_rhs;
    let second_ok = pe_u <= rat(2, 1) * &pe_m_shifted;
    Ok(ExponentCompareReport {
        lambda_exp2: l,
        m,
        m_shifted,
        pe_u,
        pe_m,
        pe_m_shifted,
        first_ok,
        second_ok,
        vacuous: first_rhs >= Rat::one(),
    })
}

/// One ChannelLikelihood metric per transition matrix; constant on joint
/// types by construction.
pub fn build_dmc_family(
    matrices: Vec<(String, Vec<Vec<Rat>>)>,
    y_alphabet: Alphabet,
) -> Result<MetricFamily> {
    let mut members = Vec::with_capacity(matrices.len());
    for (label, w) in matrices {
        // validates row-stochasticity
        let channel = Channel::dmc(w, y_alphabet)?;
        let Channel::Dmc { w } = channel else { unreachable!() };
        members.push(FamilyMember {
            label,
            metric: Metric::channel_likelihood(w),
        });
    }
    MetricFamily::new(members)
}

/// B_n = S^{S·|X|·|Y|} · (n+1)^{|X|·|Y|·S}: the count bound on essentially
/// different S-state metrics at blocklength n.
pub fn fsm_count_bound(s: usize, x_size: usize, y_size: usize, n: usize) -> BigUint {
    let pairs = x_size * y_size;
    BigUint::from(s).pow((s * pairs) as u32) * BigUint::from(n + 1).pow((pairs * s) as u32)
}

/// log2(B_n), for plotting log2(B_n)/n trends.
pub fn fsm_count_bound_log2(s: usize, x_size: usize, y_size: usize, n: usize) -> f64 {
    let pairs = (x_size * y_size) as f64;
    let s_f = s as f64;
    s_f * pairs * (s_f).log2() + pairs * s_f * ((n + 1) as f64).log2()
}

/// Sampled family of S-state metrics: random next-state tables with scores
/// drawn from a small rational grid, deduplicated by table.
pub fn build_fsm_family(
    s: usize,
    x_alphabet: Alphabet,
    y_alphabet: Alphabet,
    samples: usize,
    seed: u64,
) -> Result<MetricFamily> {
    if s == 0 || samples == 0 {
        return Err(UnivdecError::EmptyFamily);
    }
    let mut rng = rngutil::seeded(seed);
    let mut seen: HashSet<(Vec<Vec<Vec<usize>>>, Vec<Vec<Vec<i64>>>)> = HashSet::new();
    let mut members = Vec::new();
    let mut attempts = 0;
    while members.len() < samples && attempts < samples * 50 {
        attempts += 1;
        let next: Vec<Vec<Vec<usize>>> = (0..s)
            .map(|_| {
                (0..x_alphabet.size)
                    .map(|_| (0..y_alphabet.size).map(|_| rng.gen_range(0..s)).collect())
                    .collect()
            })
            .collect();
        let grid: Vec<Vec<Vec<i64>>> = (0..s)
            .map(|_| {
                (0..x_alphabet.size)
                    .map(|_| (0..y_alphabet.size).map(|_| rng.gen_range(0..=4i64)).collect())
                    .collect()
            })
            .collect();
        if !seen.insert((next.clone(), grid.clone())) {
            continue;
        }
        let output: Vec<Vec<Vec<Rat>>> = grid
            .iter()
            .map(|per_s| {
                per_s
                    .iter()
                    .map(|per_x| per_x.iter().map(|&k| rat(k, 4)).collect())
                    .collect()
            })
            .collect();
        members.push(FamilyMember {
            label: format!("fsm-{}", members.len()),
            metric: Metric::FiniteState {
                states: s,
                next,
                output,
                initial: 0,
            },
        });
    }
    MetricFamily::new(members)
}

/// The α = 1 construction: an n-state metric with time-indexed states that
/// scores 1 per position exactly where the step matches the given pair and
/// 0 elsewhere, so (x, y) ranks strictly first and pem(x, y) = Q_n(x).
pub fn build_degenerate_fsm(
    x: &Sequence,
    y: &Sequence,
    x_alphabet: Alphabet,
    y_alphabet: Alphabet,
) -> Result<Metric> {
    if x.len() != y.len() {
        return Err(UnivdecError::LengthMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    let n = x.len().max(1);
    // s_i = (s_{i-1} + 1) mod n from initial 0, so position p (0-based)
    // lands in state (p + 1) mod n; q is read at the post-transition state
    let next: Vec<Vec<Vec<usize>>> = (0..n)
        .map(|s| vec![vec![(s + 1) % n; y_alphabet.size]; x_alphabet.size])
        .collect();
    let mut output = vec![vec![vec![Rat::zero(); y_alphabet.size]; x_alphabet.size]; n];
    for p in 0..x.len() {
        output[(p + 1) % n][x.symbols[p]][y.symbols[p]] = Rat::one();
    }
    Ok(Metric::FiniteState {
        states: n,
        next,
        output,
        initial: 0,
    })
}

/// One degenerate metric per listed pair.
pub fn build_degenerate_family(
    pairs: &[(Sequence, Sequence)],
    x_alphabet: Alphabet,
    y_alphabet: Alphabet,
) -> Result<MetricFamily> {
    let members = pairs
        .iter()
        .enumerate()
        .map(|(i, (x, y))| {
            Ok(FamilyMember {
                label: format!("deg-{i}"),
                metric: build_degenerate_fsm(x, y, x_alphabet, y_alphabet)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    MetricFamily::new(members)
}

/// Largest k with (|X|·|Y|)^k < n, exact integer arithmetic.
pub fn markov_order_limit(n: usize, x_size: usize, y_size: usize) -> usize {
    assert!(n >= 2);
    let base = (x_size * y_size) as u128;
    let mut k = 0usize;
    let mut pow = base;
    while pow < n as u128 {
        k += 1;
        pow = pow.saturating_mul(base);
    }
    k
}

#[derive(Debug, Clone, Copy)]
pub struct McEstimate {
    pub estimate: f64,
    pub trials: u64,
    pub ci_halfwidth: f64,
}

/// Full-simulation Monte Carlo error rate: each trial draws a fresh
/// codebook, a uniform message, a channel output and decodes with
/// ties-as-errors. Trials run on independently seeded (seed, index)
/// streams, so the estimate is deterministic per seed.
pub fn avg_error_mc(
    prior: &Prior,
    channel: &Channel,
    metric: &Metric,
    m: u64,
    trials: u64,
    seed: u64,
) -> Result<McEstimate> {
    assert!(trials >= 1);
    let mut errors = 0u64;
    for t in 0..trials {
        let mut rng = rngutil::seeded_stream(seed, t);
        let codebook = {
            let codewords = (0..m).map(|_| prior.sample(&mut rng)).collect();
            Codebook {
                codewords,
                seed,
                m,
            }
        };
        let msg = rng.gen_range(0..m as usize);
        let y = channel.sample(&codebook.codewords[msg], &mut rng);
        if decode(&codebook, &y, metric)? != DecodeOutcome::Index(msg) {
            errors += 1;
        }
    }
    let p = errors as f64 / trials as f64;
    let ci = 1.96 * (p * (1.0 - p) / trials as f64).sqrt();
    Ok(McEstimate {
        estimate: p,
        trials,
        ci_halfwidth: ci,
    })
}

/// Aggregated per-instance results for reporting.
#[derive(Debug, Clone)]
pub struct ErrorReport {
    pub n: usize,
    pub rate: f64,
    pub m: u64,
    pub pe_exact: Option<Rat>,
    pub pe_mc: Option<McEstimate>,
    pub union_clip: Option<Rat>,
    pub sandwich_ratio: Option<Rat>,
    pub k_n: Option<Rat>,
    pub slack_per_symbol: Option<f64>,
    pub seed: u64,
}
