//! Rate functions over a prior and the canonical rate function.
//!
//! A rate function R satisfies Q_n(R(X) ≥ t) ≤ 2^{-nt}. Values are kept in
//! exponential form: a function is stored as w(x) = 2^{n·R(x)} per
//! sequence rank, with w = 0 encoding R = −∞. All the rate functions this
//! crate manipulates (canonical rate functions, likelihood ratios,
//! canonical metrics) have rational exponential form, so every survival
//! comparison is exact.

use num_traits::{One, Zero};

use crate::error::{Result, UnivdecError};
use crate::model::{Alphabet, Prior, Sequence};
use crate::numeric::{log2_of_rat, Rat};

/// A total function over X^n in exponential form, indexed by rank.
#[derive(Debug, Clone, PartialEq)]
pub struct RateFn {
    pub n: usize,
    pub alphabet: Alphabet,
    /// w(x) = 2^{n·R(x)}; 0 encodes R(x) = −∞
    pub exp_values: Vec<Rat>,
}

impl RateFn {
    pub fn new(n: usize, alphabet: Alphabet, exp_values: Vec<Rat>) -> Result<Self> {
        for w in &exp_values {
            if w < &Rat::zero() {
                return Err(UnivdecError::NegativeMass {
                    field: "ratefn.exp_values".into(),
                });
            }
        }
        Ok(RateFn {
            n,
            alphabet,
            exp_values,
        })
    }

    /// R(x) = (1/n) log2(P_n(x)/Q_n(x)); −∞ where Q_n(x) = 0.
    pub fn likelihood_ratio(p: &Prior, q: &Prior, cap: u64) -> Result<Self> {
        let total = q.alphabet.space_size(q.n, cap)?;
        let mut exp_values = Vec::with_capacity(total as usize);
        for r in 0..total {
            let x = Sequence::from_rank(r, q.n, q.alphabet);
            let qm = q.mass(&x)?;
            if qm.is_zero() {
                exp_values.push(Rat::zero());
            } else {
                exp_values.push(p.mass(&x)? / qm);
            }
        }
        RateFn::new(q.n, q.alphabet, exp_values)
    }

    /// R(x) per symbol, for display; None encodes −∞.
    pub fn value_per_symbol(&self, rank: u64) -> Option<f64> {
        let w = &self.exp_values[rank as usize];
        if w.is_zero() {
            None
        } else {
            Some(log2_of_rat(w) / self.n.max(1) as f64)
        }
    }
}

/// Canonical rate function value at one x: the survival mass
/// q = Q_n(R(X) ≥ R(x)), with Ω_R(x) = −(1/n) log2 q. `Infinite` is the
/// sentinel for zero survival mass (possible only off support).
#[derive(Debug, Clone, PartialEq)]
pub enum OmegaVal {
    Finite { survival: Rat },
    Infinite,
}

#[derive(Debug, Clone)]
pub struct OmegaFn {
    pub n: usize,
    pub values: Vec<OmegaVal>,
}

impl OmegaFn {
    /// Exponential-form view usable as a RateFn input. The off-support
    /// `Infinite` sentinel maps to 0 (−∞); this never affects results on
    /// the support, which is all downstream checks ever quantify over.
    pub fn to_ratefn(&self, alphabet: Alphabet) -> RateFn {
        let exp_values = self
            .values
            .iter()
            .map(|v| match v {
                OmegaVal::Finite { survival } => survival.recip(),
                OmegaVal::Infinite => Rat::zero(),
            })
            .collect();
        RateFn {
            n: self.n,
            alphabet,
            exp_values,
        }
    }

    pub fn per_symbol(&self, rank: u64, n: usize) -> Option<f64> {
        match &self.values[rank as usize] {
            OmegaVal::Finite { survival } => Some(-log2_of_rat(survival) / n.max(1) as f64),
            OmegaVal::Infinite => None,
        }
    }
}

/// Ω_R(x) = −(1/n) log2 Q_n(R(X) ≥ R(x)) for every x in the enumeration.
pub fn omega(prior: &Prior, r: &RateFn, cap: u64) -> Result<OmegaFn> {
    let support = prior.support(cap)?;
    // sorted support exp values with suffix mass sums
    let mut pairs: Vec<(Rat, Rat)> = support
        .iter()
        .map(|(x, mass)| (r.exp_values[x.rank(prior.alphabet) as usize].clone(), mass.clone()))
        .collect();
    pairs.sort_by(|a, b| a.0.cmp(&b.0));
    let mut suffix = vec![Rat::zero(); pairs.len() + 1];
    for i in (0..pairs.len()).rev() {
        suffix[i] = &suffix[i + 1] + &pairs[i].1;
    }
    let survival_at = |w: &Rat| -> Rat {
        // mass of support values ≥ w
        let idx = pairs.partition_point(|(v, _)| v < w);
        suffix[idx].clone()
    };
    let values = r
        .exp_values
        .iter()
        .map(|w| {
            let s = survival_at(w);
            if s.is_zero() {
                OmegaVal::Infinite
            } else {
                OmegaVal::Finite { survival: s }
            }
        })
        .collect();
    Ok(OmegaFn { n: prior.n, values })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertKind {
    IsRateFunction,
    AsymptoticRateFunction,
    AsymptoticallyTight,
}

#[derive(Debug, Clone)]
pub struct RateCertificate {
    pub kind: CertKind,
    pub passed: bool,
    /// witnessed per-symbol slack λ
    pub slack_per_symbol: f64,
    /// violating threshold t (per symbol), when failed
    pub witness_t: Option<f64>,
    /// violating sequence rank, when failed
    pub witness_rank: Option<u64>,
}

/// Check Q_n(R(X) ≥ t) ≤ 2^{-nt} for every t. The survival function steps
/// only at achieved support values, so checking there is exact.
pub fn certify_rate_function(prior: &Prior, r: &RateFn, cap: u64) -> Result<RateCertificate> {
    let support = prior.support(cap)?;
    let mut pairs: Vec<(Rat, Rat)> = support
        .iter()
        .map(|(x, mass)| (r.exp_values[x.rank(prior.alphabet) as usize].clone(), mass.clone()))
        .collect();
    pairs.sort_by(|a, b| a.0.cmp(&b.0));
    let mut worst_ratio = Rat::zero(); // max of survival·w over achieved w > 0
    let mut witness: Option<Rat> = None;
    let mut suffix = Rat::zero();
    let mut i = pairs.len();
    // walk descending, accumulating survival mass group by group
    while i > 0 {
        let mut j = i;
        while j > 0 && pairs[j - 1].0 == pairs[i - 1].0 {
            suffix += &pairs[j - 1].1;
            j -= 1;
        }
        let w = &pairs[i - 1].0;
        if !w.is_zero() {
            let ratio = &suffix * w;
            if ratio > worst_ratio {
                worst_ratio = ratio;
                witness = Some(w.clone());
            }
        }
        i = j;
    }
    let passed = worst_ratio <= Rat::one();
    let slack = if worst_ratio > Rat::one() {
        log2_of_rat(&worst_ratio) / prior.n.max(1) as f64
    } else {
        0.0
    };
    Ok(RateCertificate {
        kind: CertKind::IsRateFunction,
        passed,
        slack_per_symbol: slack,
        witness_t: if passed {
            None
        } else {
            witness.map(|w| log2_of_rat(&w) / prior.n.max(1) as f64)
        },
        witness_rank: None,
    })
}

/// Check 2^{-n(R(x)+λ)} ≤ Q_n(R(X) ≥ R(x)) ≤ 2^{-n(R(x)-λ)} over the
/// support and report the minimal feasible λ.
pub fn certify_tightness(
    prior: &Prior,
    r: &RateFn,
    lambda: f64,
    cap: u64,
) -> Result<RateCertificate> {
    let om = omega(prior, r, cap)?;
    let support = prior.support(cap)?;
    // minimal λ = (1/n) log2 max over support of max(wq, 1/(wq))
    let mut max_ratio = Rat::one();
    let mut witness_rank = None;
    for (x, _) in &support {
        let rank = x.rank(prior.alphabet);
        let w = &r.exp_values[rank as usize];
        let q = match &om.values[rank as usize] {
            OmegaVal::Finite { survival } => survival,
            OmegaVal::Infinite => unreachable!("support x has positive survival"),
        };
        if w.is_zero() {
            // R(x) = −∞ on support: upper bound trivial, lower bound
            // (2^{-n(−∞+λ)} = 0) trivial as well
            continue;
        }
        let wq = w * q;
        let ratio = if wq >= Rat::one() { wq.clone() } else { wq.recip() };
        if ratio > max_ratio {
            max_ratio = ratio;
            witness_rank = Some(rank);
        }
    }
    let minimal = log2_of_rat(&max_ratio) / prior.n.max(1) as f64;
    let passed = minimal <= lambda + 1e-12;
    Ok(RateCertificate {
        kind: CertKind::AsymptoticallyTight,
        passed,
        slack_per_symbol: minimal,
        witness_t: None,
        witness_rank: if passed { None } else { witness_rank },
    })
}

#[derive(Debug, Clone)]
pub struct PropertyReport {
    pub ok: bool,
    pub witness: Option<(u64, u64)>,
}

/// Ω_R preserves the order of R, strictly where the larger point has
/// positive mass.
pub fn check_order_preservation(prior: &Prior, r: &RateFn, cap: u64) -> Result<PropertyReport> {
    let om = omega(prior, r, cap)?;
    let total = r.exp_values.len();
    for i in 0..total {
        for j in 0..total {
            let wi = &r.exp_values[i];
            let wj = &r.exp_values[j];
            if wi > wj {
                continue;
            }
            // R(xi) ≤ R(xj) must give Ω(xi) ≤ Ω(xj)
            let qi = &om.values[i];
            let qj = &om.values[j];
            let ok = match (qi, qj) {
                (_, OmegaVal::Infinite) => true,
                (OmegaVal::Infinite, OmegaVal::Finite { .. }) => false,
                (OmegaVal::Finite { survival: si }, OmegaVal::Finite { survival: sj }) => {
                    let nonstrict = si >= sj;
                    let xj = Sequence::from_rank(j as u64, prior.n, prior.alphabet);
                    let strict_needed = wi < wj && !prior.mass(&xj)?.is_zero();
                    nonstrict && (!strict_needed || si > sj)
                }
            };
            if !ok {
                return Ok(PropertyReport {
                    ok: false,
                    witness: Some((i as u64, j as u64)),
                });
            }
        }
    }
    Ok(PropertyReport { ok: true, witness: None })
}

/// R(x) ≤ Ω_R(x) for every x, valid for certified rate functions.
pub fn check_upper_bound_property(prior: &Prior, r: &RateFn, cap: u64) -> Result<PropertyReport> {
    let om = omega(prior, r, cap)?;
    for (i, w) in r.exp_values.iter().enumerate() {
        match &om.values[i] {
            OmegaVal::Infinite => {}
            OmegaVal::Finite { survival } => {
                // R ≤ Ω ⇔ w·q ≤ 1
                if w * survival > Rat::one() {
                    return Ok(PropertyReport {
                        ok: false,
                        witness: Some((i as u64, i as u64)),
                    });
                }
            }
        }
    }
    Ok(PropertyReport { ok: true, witness: None })
}

#[derive(Debug, Clone)]
pub struct ExpectationBoundReport {
    pub ok: bool,
    /// E_Q[2^{n·R(X)}], exact
    pub expectation: Rat,
    /// 1 + ln(2)·B
    pub bound: f64,
}

/// E_Q[2^{n·R(X)}] ≤ 1 + ln(2)·B for a rate function bounded by B,
/// where the bound is passed in exponential form b_exp2 = 2^B. The
/// precondition n·R(x) ≤ B over the support is verified exactly.
pub fn expectation_bound(
    prior: &Prior,
    r: &RateFn,
    b_exp2: &Rat,
    cap: u64,
) -> Result<ExpectationBoundReport> {
    let support = prior.support(cap)?;
    let mut expectation = Rat::zero();
    for (x, mass) in &support {
        let w = &r.exp_values[x.rank(prior.alphabet) as usize];
        if w > b_exp2 {
            return Err(UnivdecError::Config {
                field: "expectation_bound.B".into(),
                message: format!(
                    "n·R exceeds the bound at rank {}",
                    x.rank(prior.alphabet)
                ),
            });
        }
        expectation += mass * w;
    }
    let bound = 1.0 + crate::numeric::ln_of_rat(b_exp2);
    // exact-rational left side, float comparison at 2^-35 relative
    let lhs = crate::numeric::rat_to_f64(&expectation);
    let ok = lhs <= bound * (1.0 + crate::numeric::FLOAT_SUM_REL_TOL);
    Ok(ExpectationBoundReport {
        ok,
        expectation,
        bound,
    })
}

#[derive(Debug, Clone)]
pub struct AsymptoticConditionReport {
    /// max over x of [R(x) − Ω_R(x)]₊, per symbol
    pub lambda: f64,
    /// (1/n) log2 E_Q[2^{n·R(X)}]
    pub chi: f64,
    pub markov_ok: bool,
    /// tightness certificate slack max(λ, χ)
    pub slack_per_symbol: f64,
}

/// Pointwise Markov chain 2^{-n·Ω_R(x)} ≤ E_Q[2^{nR}]·2^{-n·R(x)} plus the
/// measured (λ, χ) pair concluding the tightness certificate.
pub fn asymptotic_condition_check(
    prior: &Prior,
    r: &RateFn,
    cap: u64,
) -> Result<AsymptoticConditionReport> {
    let om = omega(prior, r, cap)?;
    let support = prior.support(cap)?;
    let mut expectation = Rat::zero();
    for (x, mass) in &support {
        expectation += mass * &r.exp_values[x.rank(prior.alphabet) as usize];
    }
    let mut markov_ok = true;
    let mut lambda_ratio = Rat::one(); // max(1, max w·q)
    for (i, w) in r.exp_values.iter().enumerate() {
        if w.is_zero() {
            continue; // R = −∞: RHS infinite, nothing to check
        }
        if let OmegaVal::Finite { survival } = &om.values[i] {
            let wq = w * survival;
            // q ≤ E/w  ⇔  w·q ≤ E
            if wq > expectation {
                markov_ok = false;
            }
            if wq > lambda_ratio {
                lambda_ratio = wq;
            }
        }
    }
    let n = prior.n.max(1) as f64;
    let lambda = log2_of_rat(&lambda_ratio) / n;
    let chi = if expectation.is_zero() {
        f64::NEG_INFINITY
    } else {
        log2_of_rat(&expectation) / n
    };
    Ok(AsymptoticConditionReport {
        lambda,
        chi,
        markov_ok,
        slack_per_symbol: lambda.max(chi),
    })
}
