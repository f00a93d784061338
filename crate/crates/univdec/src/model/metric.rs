//! Decoding metrics and metric families.
//!
//! Only the per-y ordering of a metric over candidate inputs matters, so
//! exact-mode scores are kept rational. The channel-likelihood variant
//! scores with the likelihood product itself (order-equivalent to the
//! log-likelihood); its float evaluation reports log2.

use num_traits::{One, Zero};

use crate::error::{Result, UnivdecError};
use crate::model::alphabet::{Alphabet, Sequence};
use crate::numeric::{log2_of_rat, rat_to_f64, Rat};

/// Hard limit on finite-state machine state counts.
pub const STATE_CAP: u128 = 1 << 20;

#[derive(Debug, Clone)]
pub enum Metric {
    /// Explicit score per (x, y) pair of sequences, indexed by rank.
    Table {
        x_alphabet: Alphabet,
        y_alphabet: Alphabet,
        n: usize,
        values: Vec<Vec<Rat>>,
    },
    /// Likelihood of a stored DMC; exact score is the likelihood product.
    ChannelLikelihood { w: Vec<Vec<Rat>> },
    /// Additive state-machine score: s_i = g(s_{i-1}, x_i, y_i) starting
    /// from `initial`, metric = sum of q(s_i, x_i, y_i).
    FiniteState {
        states: usize,
        /// next[s][x][y]
        next: Vec<Vec<Vec<usize>>>,
        /// q[s][x][y]
        output: Vec<Vec<Vec<Rat>>>,
        initial: usize,
    },
    /// Additive score over a sliding window of symbol pairs. The window at
    /// position i is the last max(k, 1) pairs ending at (x_i, y_i); the
    /// first positions are front-padded with the boundary pair (0, 0) so
    /// every run of the metric is reproducible.
    MarkovWindow {
        order: usize,
        x_alphabet: Alphabet,
        y_alphabet: Alphabet,
        /// score per window rank; length (|X|·|Y|)^max(k,1)
        score: Vec<Rat>,
    },
}

pub fn pair_index(x: usize, y: usize, y_alphabet: Alphabet) -> usize {
    x * y_alphabet.size + y
}

impl Metric {
    /// Metric scoring `per_step` at every position regardless of input;
    /// all candidates tie under it.
    pub fn constant(x_alphabet: Alphabet, y_alphabet: Alphabet, per_step: Rat) -> Self {
        let pairs = x_alphabet.size * y_alphabet.size;
        Metric::MarkovWindow {
            order: 0,
            x_alphabet,
            y_alphabet,
            score: vec![per_step; pairs],
        }
    }

    pub fn table_from_fn(
        x_alphabet: Alphabet,
        y_alphabet: Alphabet,
        n: usize,
        cap: u64,
        f: impl Fn(&Sequence, &Sequence) -> Rat,
    ) -> Result<Self> {
        let xs = x_alphabet.space_size(n, cap)?;
        let ys = y_alphabet.space_size(n, cap)?;
        let mut values = Vec::with_capacity(xs as usize);
        for xr in 0..xs {
            let x = Sequence::from_rank(xr, n, x_alphabet);
            let mut row = Vec::with_capacity(ys as usize);
            for yr in 0..ys {
                let y = Sequence::from_rank(yr, n, y_alphabet);
                row.push(f(&x, &y));
            }
            values.push(row);
        }
        Ok(Metric::Table {
            x_alphabet,
            y_alphabet,
            n,
            values,
        })
    }

    /// m(x, y) = −Hamming(x, y).
    pub fn neg_hamming(
        x_alphabet: Alphabet,
        y_alphabet: Alphabet,
        n: usize,
        cap: u64,
    ) -> Result<Self> {
        Metric::table_from_fn(x_alphabet, y_alphabet, n, cap, |x, y| {
            let d = x
                .symbols
                .iter()
                .zip(&y.symbols)
                .filter(|(a, b)| a != b)
                .count() as i64;
            Rat::from_integer((-d).into())
        })
    }

    pub fn channel_likelihood(w: Vec<Vec<Rat>>) -> Self {
        Metric::ChannelLikelihood { w }
    }

    pub fn markov_window(
        order: usize,
        x_alphabet: Alphabet,
        y_alphabet: Alphabet,
        score: Vec<Rat>,
    ) -> Result<Self> {
        let w_len = order.max(1);
        let expected = (x_alphabet.size * y_alphabet.size)
            .checked_pow(w_len as u32)
            .ok_or(UnivdecError::StateCapExceeded { states: u128::MAX })?;
        if score.len() != expected {
            return Err(UnivdecError::Config {
                field: "metric.score".into(),
                message: format!("expected {} window scores, got {}", expected, score.len()),
            });
        }
        Ok(Metric::MarkovWindow {
            order,
            x_alphabet,
            y_alphabet,
            score,
        })
    }

    /// Exact metric score. Pure: identical inputs always yield identical
    /// outputs.
    pub fn eval_exact(&self, x: &Sequence, y: &Sequence) -> Result<Rat> {
        if x.len() != y.len() {
            return Err(UnivdecError::LengthMismatch {
                expected: x.len(),
                got: y.len(),
            });
        }
        match self {
            Metric::Table {
                x_alphabet,
                y_alphabet,
                n,
                values,
            } => {
                x.check_len(*n)?;
                Ok(values[x.rank(*x_alphabet) as usize][y.rank(*y_alphabet) as usize].clone())
            }
            Metric::ChannelLikelihood { w } => {
                let mut p = Rat::one();
                for (&a, &b) in x.symbols.iter().zip(&y.symbols) {
                    p *= &w[a][b];
                }
                Ok(p)
            }
            Metric::FiniteState {
                next,
                output,
                initial,
                ..
            } => {
                let mut s = *initial;
                let mut total = Rat::zero();
                for (&a, &b) in x.symbols.iter().zip(&y.symbols) {
                    s = next[s][a][b];
                    total += &output[s][a][b];
                }
                Ok(total)
            }
            Metric::MarkovWindow {
                order: _,
                x_alphabet,
                y_alphabet,
                score,
            } => {
                let base = x_alphabet.size * y_alphabet.size;
                let modulus = score.len();
                // boundary padding is the designated pair (0, 0), whose
                // window rank is 0, so the initial window rank is 0
                let mut window = pair_index(0, 0, *y_alphabet);
                window %= modulus;
                let mut total = Rat::zero();
                for (&a, &b) in x.symbols.iter().zip(&y.symbols) {
                    window = (window * base + pair_index(a, b, *y_alphabet)) % modulus;
                    total += &score[window];
                }
                Ok(total)
            }
        }
    }

    /// Float-mode score; for the channel-likelihood variant this is
    /// log2 W_n(y|x) (NEG_INFINITY on zero likelihood).
    pub fn eval_f64(&self, x: &Sequence, y: &Sequence) -> Result<f64> {
        let v = self.eval_exact(x, y)?;
        Ok(match self {
            Metric::ChannelLikelihood { .. } => {
                if v.is_zero() {
                    f64::NEG_INFINITY
                } else {
                    log2_of_rat(&v)
                }
            }
            _ => rat_to_f64(&v),
        })
    }
}

/// Convert a Markov-window metric into its finite-state image with
/// state = window of the last k pairs; |S| = (|X|·|Y|)^k.
pub fn markov_as_fsm(metric: &Metric) -> Result<Metric> {
    let (order, x_alphabet, y_alphabet, score) = match metric {
        Metric::MarkovWindow {
            order,
            x_alphabet,
            y_alphabet,
            score,
        } => (*order, *x_alphabet, *y_alphabet, score),
        _ => {
            return Err(UnivdecError::Config {
                field: "metric".into(),
                message: "markov_as_fsm expects a MarkovWindow metric".into(),
            })
        }
    };
    let pairs = x_alphabet.size * y_alphabet.size;
    let states_u128 = (pairs as u128).pow(order.max(0) as u32);
    if states_u128 > STATE_CAP {
        return Err(UnivdecError::StateCapExceeded {
            states: states_u128,
        });
    }
    let states = states_u128 as usize;

    if order == 0 {
        // memoryless: single state, per-pair output
        let mut output = vec![vec![vec![Rat::zero(); y_alphabet.size]; x_alphabet.size]];
        for a in 0..x_alphabet.size {
            for b in 0..y_alphabet.size {
                output[0][a][b] = score[pair_index(a, b, y_alphabet)].clone();
            }
        }
        let next = vec![vec![vec![0usize; y_alphabet.size]; x_alphabet.size]];
        return Ok(Metric::FiniteState {
            states: 1,
            next,
            output,
            initial: 0,
        });
    }

    let modulus = states;
    let mut next = vec![vec![vec![0usize; y_alphabet.size]; x_alphabet.size]; states];
    let mut output = vec![vec![vec![Rat::zero(); y_alphabet.size]; x_alphabet.size]; states];
    for s in 0..states {
        for a in 0..x_alphabet.size {
            for b in 0..y_alphabet.size {
                let ns = (s * pairs + pair_index(a, b, y_alphabet)) % modulus;
                next[s][a][b] = ns;
                // the post-transition state is exactly the score window
                output[ns][a][b] = score[ns].clone();
            }
        }
    }
    let pad = pair_index(0, 0, y_alphabet);
    let mut initial = 0usize;
    for _ in 0..order {
        initial = (initial * pairs + pad) % modulus;
    }
    Ok(Metric::FiniteState {
        states,
        next,
        output,
        initial,
    })
}

#[derive(Debug, Clone)]
pub struct FamilyMember {
    pub label: String,
    pub metric: Metric,
}

/// Finite indexed metric family; member order is the tie-break order.
#[derive(Debug, Clone)]
pub struct MetricFamily {
    pub members: Vec<FamilyMember>,
}

impl MetricFamily {
    pub fn new(members: Vec<FamilyMember>) -> Result<Self> {
        if members.is_empty() {
            return Err(UnivdecError::EmptyFamily);
        }
        Ok(MetricFamily { members })
    }

    pub fn singleton(label: impl Into<String>, metric: Metric) -> Self {
        MetricFamily {
            members: vec![FamilyMember {
                label: label.into(),
                metric,
            }],
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}
