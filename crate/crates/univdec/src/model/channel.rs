//! Channels: DMC product laws and finite-state channel simulators.

use num_traits::{One, Zero};
use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;

use crate::error::{Result, UnivdecError};
use crate::model::alphabet::{Alphabet, Sequence};
use crate::numeric::{rat_to_f64, Rat};

#[derive(Debug, Clone)]
pub enum Channel {
    /// Discrete memoryless channel: row-stochastic matrix `w[x][y]`.
    Dmc { w: Vec<Vec<Rat>> },
    /// Finite-state channel: deterministic next-state map driven by
    /// (state, x, y), per-state emission matrices, fixed public initial
    /// state. The state sequence is not revealed to the decoder.
    FiniteState {
        /// next[s][x][y] -> state
        next: Vec<Vec<Vec<usize>>>,
        /// emission[s][x][y] = W(y | x, s), row-stochastic in y
        emission: Vec<Vec<Vec<Rat>>>,
        initial: usize,
    },
}

fn check_rows(field: &str, rows: &[Vec<Rat>], y_size: usize) -> Result<()> {
    for row in rows {
        if row.len() != y_size {
            return Err(UnivdecError::Config {
                field: field.to_string(),
                message: format!("row has {} entries, expected {}", row.len(), y_size),
            });
        }
        let mut sum = Rat::zero();
        for p in row {
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
    }
    Ok(())
}

impl Channel {
    pub fn dmc(w: Vec<Vec<Rat>>, y_alphabet: Alphabet) -> Result<Self> {
        check_rows("channel.matrix", &w, y_alphabet.size)?;
        Ok(Channel::Dmc { w })
    }

    /// Binary symmetric channel with crossover probability `delta`.
    pub fn bsc(delta: Rat) -> Result<Self> {
        let keep = Rat::one() - delta.clone();
        Channel::dmc(
            vec![
                vec![keep.clone(), delta.clone()],
                vec![delta, keep],
            ],
            Alphabet::binary(),
        )
    }

    pub fn finite_state(
        next: Vec<Vec<Vec<usize>>>,
        emission: Vec<Vec<Vec<Rat>>>,
        initial: usize,
        y_alphabet: Alphabet,
    ) -> Result<Self> {
        let states = emission.len();
        if next.len() != states || initial >= states {
            return Err(UnivdecError::Config {
                field: "channel.next".into(),
                message: "state tables inconsistent with state count".into(),
            });
        }
        for per_state in &emission {
            check_rows("channel.emission", per_state, y_alphabet.size)?;
        }
        for per_state in &next {
            for per_x in per_state {
                for &s in per_x {
                    if s >= states {
                        return Err(UnivdecError::Config {
                            field: "channel.next".into(),
                            message: format!("next state {s} out of range"),
                        });
                    }
                }
            }
        }
        Ok(Channel::FiniteState {
            next,
            emission,
            initial,
        })
    }

    /// W_n(y|x), exact. For the finite-state variant the state path is
    /// determined by (x, y), so the law is a simple product along it.
    pub fn transition(&self, x: &Sequence, y: &Sequence) -> Result<Rat> {
        if x.len() != y.len() {
            return Err(UnivdecError::LengthMismatch {
                expected: x.len(),
                got: y.len(),
            });
        }
        match self {
            Channel::Dmc { w } => {
                let mut p = Rat::one();
                for (&a, &b) in x.symbols.iter().zip(&y.symbols) {
                    p *= &w[a][b];
                }
                Ok(p)
            }
            Channel::FiniteState {
                next,
                emission,
                initial,
            } => {
                let mut s = *initial;
                let mut p = Rat::one();
                for (&a, &b) in x.symbols.iter().zip(&y.symbols) {
                    p *= &emission[s][a][b];
                    s = next[s][a][b];
                }
                Ok(p)
            }
        }
    }

    /// Draw y ~ W_n(·|x). Deterministic given the rng stream.
    pub fn sample<R: Rng>(&self, x: &Sequence, rng: &mut R) -> Sequence {
        match self {
            Channel::Dmc { w } => {
                let symbols = x
                    .symbols
                    .iter()
                    .map(|&a| {
                        let weights: Vec<f64> = w[a].iter().map(rat_to_f64).collect();
                        WeightedIndex::new(&weights).expect("stochastic row").sample(rng)
                    })
                    .collect();
                Sequence { symbols }
            }
            Channel::FiniteState {
                next,
                emission,
                initial,
            } => {
                let mut s = *initial;
                let mut symbols = Vec::with_capacity(x.len());
                for &a in &x.symbols {
                    let weights: Vec<f64> = emission[s][a].iter().map(rat_to_f64).collect();
                    let b = WeightedIndex::new(&weights).expect("stochastic row").sample(rng);
                    symbols.push(b);
                    s = next[s][a][b];
                }
                Sequence { symbols }
            }
        }
    }
}
