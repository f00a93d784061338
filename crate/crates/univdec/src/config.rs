//! Experiment configuration: a JSON schema with decimal-string
//! probabilities parsed exactly, so rational-mode runs never touch floats.

use serde::{Deserialize, Serialize};

use crate::error::{Result, UnivdecError};
use crate::model::{Alphabet, Channel, Metric, MetricFamily, Prior, Sequence};
use crate::numeric::{parse_exact, Rat};
use crate::simulator;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Exact,
    Mc,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlphabetsSpec {
    pub x: usize,
    pub y: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PriorSpec {
    Iid { marginal: Vec<String> },
    UniformOverSet { support: Vec<Vec<usize>> },
    Table { masses: Vec<TableMass> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableMass {
    pub x: Vec<usize>,
    pub p: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ChannelSpec {
    Bsc {
        delta: String,
    },
    Dmc {
        matrix: Vec<Vec<String>>,
    },
    FiniteState {
        next: Vec<Vec<Vec<usize>>>,
        emission: Vec<Vec<Vec<String>>>,
        initial: usize,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilySpec {
    /// BSC likelihood metrics, one per crossover probability.
    BscGrid { deltas: Vec<String> },
    /// Likelihood metrics from explicit transition matrices.
    DmcGrid { matrices: Vec<Vec<Vec<String>>> },
    /// Randomly sampled S-state metrics.
    FsmSampled {
        states: usize,
        samples: usize,
        seed: u64,
    },
    /// The α = 1 degenerate construction over every (x, y) pair, or a
    /// sampled subset.
    Degenerate {
        #[serde(default)]
        sample: Option<usize>,
        #[serde(default)]
        seed: u64,
    },
    /// Single −Hamming metric, for small demos.
    NegHamming,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub blocklength: usize,
    pub alphabets: AlphabetsSpec,
    pub prior: PriorSpec,
    #[serde(default)]
    pub channel: Option<ChannelSpec>,
    #[serde(default)]
    pub family: Option<FamilySpec>,
    /// code rate R in bits per symbol; M = max(2, ⌈2^{nR}⌉)
    #[serde(default)]
    pub rate: Option<f64>,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default)]
    pub trials: Option<u64>,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub enumeration_cap: Option<u64>,
}

fn default_seeds() -> Vec<u64> {
    vec![0]
}

fn parse_probs(field: &str, values: &[String]) -> Result<Vec<Rat>> {
    values
        .iter()
        .map(|s| {
            parse_exact(s).map_err(|_| UnivdecError::Config {
                field: field.to_string(),
                message: format!("cannot parse `{s}` as an exact probability"),
            })
        })
        .collect()
}

fn parse_matrix(field: &str, rows: &[Vec<String>]) -> Result<Vec<Vec<Rat>>> {
    rows.iter().map(|row| parse_probs(field, row)).collect()
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.blocklength == 0 {
            return Err(UnivdecError::Config {
                field: "blocklength".into(),
                message: "must be at least 1".into(),
            });
        }
        if self.alphabets.x == 0 || self.alphabets.y == 0 {
            return Err(UnivdecError::Config {
                field: "alphabets".into(),
                message: "alphabet sizes must be positive".into(),
            });
        }
        if self.mode == Mode::Mc && self.trials.is_none() {
            return Err(UnivdecError::Config {
                field: "trials".into(),
                message: "mc mode requires a trial count".into(),
            });
        }
        Ok(())
    }

    pub fn x_alphabet(&self) -> Alphabet {
        Alphabet::new(self.alphabets.x)
    }

    pub fn y_alphabet(&self) -> Alphabet {
        Alphabet::new(self.alphabets.y)
    }

    pub fn cap(&self) -> u64 {
        self.enumeration_cap
            .unwrap_or_else(crate::model::enumeration_cap)
    }

    pub fn codebook_size(&self) -> u64 {
        simulator::codebook_size(self.blocklength, self.rate.unwrap_or(0.0))
    }

    pub fn build_prior(&self) -> Result<Prior> {
        let a = self.x_alphabet();
        let n = self.blocklength;
        match &self.prior {
            PriorSpec::Iid { marginal } => {
                Prior::iid(a, n, parse_probs("prior.marginal", marginal)?)
            }
            PriorSpec::UniformOverSet { support } => {
                let seqs = support
                    .iter()
                    .map(|s| Sequence::new(s.clone(), a))
                    .collect::<Result<Vec<_>>>()?;
                Prior::uniform_over_set(a, n, seqs)
            }
            PriorSpec::Table { masses } => {
                let table = masses
                    .iter()
                    .map(|m| {
                        Ok((
                            Sequence::new(m.x.clone(), a)?,
                            parse_exact(&m.p).map_err(|_| UnivdecError::Config {
                                field: "prior.masses".into(),
                                message: format!("cannot parse `{}`", m.p),
                            })?,
                        ))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Prior::explicit_table(a, n, table)
            }
        }
    }

    pub fn build_channel(&self) -> Result<Channel> {
        let ya = self.y_alphabet();
        match self.channel.as_ref().ok_or(UnivdecError::Config {
            field: "channel".into(),
            message: "this command requires a channel".into(),
        })? {
            ChannelSpec::Bsc { delta } => {
                Channel::bsc(parse_exact(delta).map_err(|_| UnivdecError::Config {
                    field: "channel.delta".into(),
                    message: format!("cannot parse `{delta}`"),
                })?)
            }
            ChannelSpec::Dmc { matrix } => {
                Channel::dmc(parse_matrix("channel.matrix", matrix)?, ya)
            }
            ChannelSpec::FiniteState {
                next,
                emission,
                initial,
            } => {
                let emission = emission
                    .iter()
                    .map(|per_s| parse_matrix("channel.emission", per_s))
                    .collect::<Result<Vec<_>>>()?;
                Channel::finite_state(next.clone(), emission, *initial, ya)
            }
        }
    }

    pub fn build_family(&self) -> Result<MetricFamily> {
        let xa = self.x_alphabet();
        let ya = self.y_alphabet();
        let n = self.blocklength;
        match self.family.as_ref().ok_or(UnivdecError::Config {
            field: "family".into(),
            message: "this command requires a metric family".into(),
        })? {
            FamilySpec::BscGrid { deltas } => {
                let mats = deltas
                    .iter()
                    .map(|d| {
                        let delta = parse_exact(d).map_err(|_| UnivdecError::Config {
                            field: "family.deltas".into(),
                            message: format!("cannot parse `{d}`"),
                        })?;
                        let keep = Rat::from_integer(1.into()) - delta.clone();
                        Ok((
                            format!("bsc-{d}"),
                            vec![vec![keep.clone(), delta.clone()], vec![delta, keep]],
                        ))
                    })
                    .collect::<Result<Vec<_>>>()?;
                simulator::build_dmc_family(mats, ya)
            }
            FamilySpec::DmcGrid { matrices } => {
                let mats = matrices
                    .iter()
                    .enumerate()
                    .map(|(i, m)| Ok((format!("dmc-{i}"), parse_matrix("family.matrices", m)?)))
                    .collect::<Result<Vec<_>>>()?;
                simulator::build_dmc_family(mats, ya)
            }
            FamilySpec::FsmSampled {
                states,
                samples,
                seed,
            } => simulator::build_fsm_family(*states, xa, ya, *samples, *seed),
            FamilySpec::Degenerate { sample, seed } => {
                let cap = self.cap();
                let pairs = match sample {
                    None => {
                        let xs = xa.space_size(n, cap)?;
                        let ys = ya.space_size(n, cap)?;
                        (0..xs)
                            .flat_map(|xr| {
                                (0..ys).map(move |yr| {
                                    (
                                        Sequence::from_rank(xr, n, xa),
                                        Sequence::from_rank(yr, n, ya),
                                    )
                                })
                            })
                            .collect::<Vec<_>>()
                    }
                    Some(count) => {
                        let mut rng = crate::rngutil::seeded(*seed);
                        use rand::Rng;
                        let xs = xa.space_size(n, cap)?;
                        let ys = ya.space_size(n, cap)?;
                        (0..*count)
                            .map(|_| {
                                (
                                    Sequence::from_rank(rng.gen_range(0..xs), n, xa),
                                    Sequence::from_rank(rng.gen_range(0..ys), n, ya),
                                )
                            })
                            .collect()
                    }
                };
                simulator::build_degenerate_family(&pairs, xa, ya)
            }
            FamilySpec::NegHamming => Ok(MetricFamily::singleton(
                "neg-hamming",
                Metric::neg_hamming(xa, ya, n, self.cap())?,
            )),
        }
    }
}
