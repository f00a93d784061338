//! Random-coding priors: the distribution each codeword is drawn from.

use num_traits::{One, Zero};
use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;

use crate::error::{Result, UnivdecError};
use crate::model::alphabet::{enumerate_sequences, Alphabet, Sequence};
use crate::numeric::{log2_of_rat, rat_to_f64, Rat};

#[derive(Debug, Clone)]
pub enum PriorKind {
    /// Product distribution with the given per-symbol marginal.
    Iid { marginal: Vec<Rat> },
    /// Uniform over an explicit support set.
    UniformOverSet { support: Vec<Sequence> },
    /// Explicit mass per sequence (zero-mass entries are dropped).
    ExplicitTable { masses: Vec<(Sequence, Rat)> },
}

#[derive(Debug, Clone)]
pub struct Prior {
    pub alphabet: Alphabet,
    pub n: usize,
    pub kind: PriorKind,
}

fn check_distribution(field: &str, probs: &[Rat]) -> Result<()> {
    let mut sum = Rat::zero();
    for p in probs {
        if p < &Rat::zero() {
            return Err(UnivdecError::NegativeMass {
                field: field.to_string(),
            });
        }
        sum += p;
    }
    if !sum.is_one() {
        return Err(UnivdecError::NotADistribution {
            field: field.to_string(),
            sum: crate::numeric::fmt_rat(&sum),
        });
    }
    Ok(())
}

impl Prior {
    pub fn iid(alphabet: Alphabet, n: usize, marginal: Vec<Rat>) -> Result<Self> {
        if marginal.len() != alphabet.size {
            return Err(UnivdecError::Config {
                field: "prior.marginal".into(),
                message: format!(
                    "expected {} entries, got {}",
                    alphabet.size,
                    marginal.len()
                ),
            });
        }
        check_distribution("prior.marginal", &marginal)?;
        if marginal.iter().all(|p| p.is_zero()) {
            return Err(UnivdecError::EmptySupport);
        }
        Ok(Prior {
            alphabet,
            n,
            kind: PriorKind::Iid { marginal },
        })
    }

    pub fn uniform_over_set(alphabet: Alphabet, n: usize, support: Vec<Sequence>) -> Result<Self> {
        if support.is_empty() {
            return Err(UnivdecError::EmptySupport);
        }
        let mut support = support;
        support.sort_by_key(|s| s.rank(alphabet));
        support.dedup();
        for s in &support {
            s.check_len(n)?;
        }
        Ok(Prior {
            alphabet,
            n,
            kind: PriorKind::UniformOverSet { support },
        })
    }

    pub fn explicit_table(
        alphabet: Alphabet,
        n: usize,
        masses: Vec<(Sequence, Rat)>,
    ) -> Result<Self> {
        let probs: Vec<Rat> = masses.iter().map(|(_, p)| p.clone()).collect();
        check_distribution("prior.masses", &probs)?;
        let mut masses: Vec<(Sequence, Rat)> =
            masses.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        if masses.is_empty() {
            return Err(UnivdecError::EmptySupport);
        }
        masses.sort_by_key(|(s, _)| s.rank(alphabet));
        for (s, _) in &masses {
            s.check_len(n)?;
        }
        Ok(Prior {
            alphabet,
            n,
            kind: PriorKind::ExplicitTable { masses },
        })
    }

    /// Q_n(x), exact.
    pub fn mass(&self, x: &Sequence) -> Result<Rat> {
        x.check_len(self.n)?;
        for &s in &x.symbols {
            if s >= self.alphabet.size {
                return Err(UnivdecError::SymbolOutOfRange {
                    symbol: s,
                    alphabet: self.alphabet.size,
                });
            }
        }
        Ok(match &self.kind {
            PriorKind::Iid { marginal } => {
                let mut m = Rat::one();
                for &s in &x.symbols {
                    m *= &marginal[s];
                }
                m
            }
            PriorKind::UniformOverSet { support } => {
                if support.binary_search_by_key(&x.rank(self.alphabet), |s| s.rank(self.alphabet)).is_ok()
                {
                    Rat::new(1.into(), (support.len() as i64).into())
                } else {
                    Rat::zero()
                }
            }
            PriorKind::ExplicitTable { masses } => masses
                .binary_search_by_key(&x.rank(self.alphabet), |(s, _)| s.rank(self.alphabet))
                .map(|i| masses[i].1.clone())
                .unwrap_or_else(|_| Rat::zero()),
        })
    }

    /// log2 Q_n(x); NEG_INFINITY off support. Float evaluation mode.
    pub fn log2_mass(&self, x: &Sequence) -> Result<f64> {
        let m = self.mass(x)?;
        Ok(if m.is_zero() {
            f64::NEG_INFINITY
        } else {
            log2_of_rat(&m)
        })
    }

    /// Full support in canonical rank order, with exact masses.
    pub fn support(&self, cap: u64) -> Result<Vec<(Sequence, Rat)>> {
        match &self.kind {
            PriorKind::Iid { marginal } => {
                let positive: Vec<usize> = (0..marginal.len())
                    .filter(|&s| !marginal[s].is_zero())
                    .collect();
                let sub = Alphabet::new(positive.len());
                let mut out = Vec::new();
                for idx in enumerate_sequences(sub, self.n, cap)? {
                    let symbols: Vec<usize> =
                        idx.symbols.iter().map(|&i| positive[i]).collect();
                    let x = Sequence { symbols };
                    let m = self.mass(&x)?;
                    out.push((x, m));
                }
                // positive-symbol enumeration preserves rank order
                Ok(out)
            }
            PriorKind::UniformOverSet { support } => {
                let m = Rat::new(1.into(), (support.len() as i64).into());
                Ok(support.iter().map(|s| (s.clone(), m.clone())).collect())
            }
            PriorKind::ExplicitTable { masses } => Ok(masses.clone()),
        }
    }

    /// Smallest positive mass over the support.
    pub fn min_mass(&self, cap: u64) -> Result<Rat> {
        let min = match &self.kind {
            PriorKind::Iid { marginal } => {
                let mut m = Rat::one();
                let per = marginal
                    .iter()
                    .filter(|p| !p.is_zero())
                    .min()
                    .ok_or(UnivdecError::EmptySupport)?;
                for _ in 0..self.n {
                    m *= per;
                }
                let _ = cap;
                m
            }
            PriorKind::UniformOverSet { support } => {
                Rat::new(1.into(), (support.len() as i64).into())
            }
            PriorKind::ExplicitTable { masses } => masses
                .iter()
                .map(|(_, p)| p.clone())
                .min()
                .ok_or(UnivdecError::EmptySupport)?,
        };
        Ok(min)
    }

    /// χ_n = −log2 min_{x: Q(x)>0} Q(x).
    pub fn chi(&self, cap: u64) -> Result<f64> {
        Ok(-log2_of_rat(&self.min_mass(cap)?))
    }

    /// 2^{χ_n} = 1 / min mass, exact. Useful for exact bound checks.
    pub fn chi_exp2(&self, cap: u64) -> Result<Rat> {
        Ok(self.min_mass(cap)?.recip())
    }

    /// Draw one sequence. Deterministic given the rng stream.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Sequence {
        match &self.kind {
            PriorKind::Iid { marginal } => {
                let weights: Vec<f64> = marginal.iter().map(rat_to_f64).collect();
                let dist = WeightedIndex::new(&weights).expect("valid marginal");
                let symbols = (0..self.n).map(|_| dist.sample(rng)).collect();
                Sequence { symbols }
            }
            PriorKind::UniformOverSet { support } => {
                support[rng.gen_range(0..support.len())].clone()
            }
            PriorKind::ExplicitTable { masses } => {
                let weights: Vec<f64> = masses.iter().map(|(_, p)| rat_to_f64(p)).collect();
                let dist = WeightedIndex::new(&weights).expect("valid table");
                masses[dist.sample(rng)].0.clone()
            }
        }
    }
}
