//! Experiment runner CLI: parses a JSON config, runs the verification
//! suites and demonstrations, persists reports and emits plot-ready data.
//!
//! Exit codes: 0 pass, 1 assertion failure, 2 config error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use univdec::config::{ExperimentConfig, Mode};
use univdec::model::{Alphabet, Metric, Sequence};
use univdec::numeric::{rat_to_f64, Rat};
use univdec::pairwise;
use univdec::report::{rat_str, CsvRow, CSV_HEADER};
use univdec::simulator;
use univdec::universal;

#[derive(Parser)]
#[command(name = "univdec", version, about = "universal decoding experiment runner")]
struct Cli {
    /// experiment config (JSON)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// override the config's mode
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,
    /// override the config's first seed
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// worker thread count
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// output directory
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Mc,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Lemma1,
    Theorem1,
    Ratefn,
    Merged,
    Tightness,
}

#[derive(Subcommand)]
enum Cmd {
    /// pem and canonical-metric tables
    Pairwise,
    /// universal decoder value table
    Gmet,
    /// redundancy K_n report
    Redundancy,
    /// run a verification suite
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        /// test fixture: corrupt the oracle to exercise the failure path
        #[arg(long, hide = true)]
        corrupt_oracle: bool,
    },
    /// ensemble error simulation per family member
    Simulate,
    /// finite-state contrast demonstration
    DemoFsc,
    /// convert report CSVs to plot series (CSV + SVG)
    Plotdata {
        /// input report CSV files
        inputs: Vec<PathBuf>,
    },
}

enum CliError {
    /// invalid config or input: exit 2
    Config(String),
    /// violated assertion: exit 1
    Assertion(String),
}

impl From<univdec::UnivdecError> for CliError {
    fn from(e: univdec::UnivdecError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(format!("io error: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Assertion(msg)) => {
            eprintln!("assertion failed: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Config(msg)) => {
            eprintln!("config error: {msg}");
            ExitCode::from(2)
        }
    }
}

struct Run {
    cfg: ExperimentConfig,
    config_hash: String,
    out: PathBuf,
    outputs: Vec<String>,
    started: String,
    seed: u64,
}

fn timestamp() -> String {
    time::OffsetDateTime::now_utc()
        .format(&time::format_description::well_known::Rfc3339)
        .unwrap_or_default()
}

impl Run {
    fn new(cli: &Cli) -> Result<Self, CliError> {
        let path = cli
            .config
            .as_ref()
            .ok_or_else(|| CliError::Config("--config is required for this command".into()))?;
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let mut cfg = ExperimentConfig::from_json(&text)?;
        if let Some(mode) = cli.mode {
            cfg.mode = match mode {
                ModeArg::Exact => Mode::Exact,
                ModeArg::Mc => Mode::Mc,
            };
            cfg.validate()?;
        }
        if let Some(seed) = cli.seed {
            cfg.seeds.insert(0, seed);
        }
        let seed = cfg.seeds.first().copied().unwrap_or(0);
        std::fs::create_dir_all(&cli.out)?;
        Ok(Run {
            config_hash: hex::encode(Sha256::digest(text.as_bytes())),
            cfg,
            out: cli.out.clone(),
            outputs: Vec::new(),
            started: timestamp(),
            seed,
        })
    }

    fn write(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        std::fs::write(self.out.join(name), contents)?;
        self.outputs.push(name.to_string());
        Ok(())
    }

    fn write_json(&mut self, name: &str, value: &Value) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(value)
            .map_err(|e| CliError::Config(e.to_string()))?;
        text.push('\n');
        self.write(name, &text)
    }

    fn finish(&mut self) -> Result<(), CliError> {
        // the manifest lists itself so every emitted file is covered
        self.outputs.push("manifest.json".into());
        let manifest = json!({
            "config_hash": self.config_hash,
            "version": env!("CARGO_PKG_VERSION"),
            "seeds": self.cfg.seeds,
            "started": self.started,
            "finished": timestamp(),
            "outputs": self.outputs,
        });
        let mut text = serde_json::to_string_pretty(&manifest)
            .map_err(|e| CliError::Config(e.to_string()))?;
        text.push('\n');
        std::fs::write(self.out.join("manifest.json"), text)?;
        Ok(())
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .ok();
    }
    if let Cmd::Plotdata { inputs } = &cli.cmd {
        return cmd_plotdata(&cli.out, inputs);
    }
    let mut run = Run::new(&cli)?;
    let result = match &cli.cmd {
        Cmd::Pairwise => cmd_pairwise(&mut run),
        Cmd::Gmet => cmd_gmet(&mut run),
        Cmd::Redundancy => cmd_redundancy(&mut run),
        Cmd::Verify {
            suite,
            corrupt_oracle,
        } => cmd_verify(&mut run, *suite, *corrupt_oracle),
        Cmd::Simulate => cmd_simulate(&mut run),
        Cmd::DemoFsc => cmd_demo_fsc(&mut run),
        Cmd::Plotdata { .. } => unreachable!(),
    };
    // persist the manifest even for assertion failures so the run is
    // inspectable; config errors abort before outputs exist
    match result {
        Ok(()) => run.finish(),
        Err(e) => {
            run.finish().ok();
            Err(e)
        }
    }
}

fn full_pairs(cfg: &ExperimentConfig) -> Result<(Vec<Sequence>, Vec<Sequence>), CliError> {
    let cap = cfg.cap();
    let n = cfg.blocklength;
    let xs = (0..cfg.x_alphabet().space_size(n, cap)?)
        .map(|r| Sequence::from_rank(r, n, cfg.x_alphabet()))
        .collect();
    let ys = (0..cfg.y_alphabet().space_size(n, cap)?)
        .map(|r| Sequence::from_rank(r, n, cfg.y_alphabet()))
        .collect();
    Ok((xs, ys))
}

fn cmd_pairwise(run: &mut Run) -> Result<(), CliError> {
    let cfg = &run.cfg;
    let prior = cfg.build_prior()?;
    let family = cfg.build_family()?;
    let cap = cfg.cap();
    let (xs, ys) = full_pairs(cfg)?;
    let mc = cfg.mode == Mode::Mc;
    let trials = cfg.trials.unwrap_or(1000);

    let mut csv = String::from("metric,x,y,score,pem,canonical_per_symbol,mc_estimate,mc_ci\n");
    let mut records = Vec::new();
    for member in &family.members {
        for x in &xs {
            for y in &ys {
                let score = member.metric.eval_exact(x, y)?;
                let pem = pairwise::pairwise_error_exact(&prior, &member.metric, x, y, cap)?;
                let canonical = match pairwise::canonical_metric(&prior, &member.metric, x, y, cap)? {
                    pairwise::CanonicalValue::Finite { per_symbol, .. } => Some(per_symbol),
                    pairwise::CanonicalValue::OffSupport => None,
                };
                let (est, ci) = if mc {
                    match pairwise::pairwise_error_mc(
                        &prior,
                        &member.metric,
                        x,
                        y,
                        trials,
                        run.seed,
                    )? {
                        pairwise::PairwiseResult::MonteCarlo {
                            estimate,
                            ci_halfwidth,
                            ..
                        } => (Some(estimate), Some(ci_halfwidth)),
                        _ => (None, None),
                    }
                } else {
                    (None, None)
                };
                csv.push_str(&format!(
                    "{},{:?},{:?},{},{},{},{},{}\n",
                    member.label,
                    x.symbols,
                    y.symbols,
                    rat_str(&score),
                    rat_str(&pem),
                    canonical.map(|c| c.to_string()).unwrap_or_default(),
                    est.map(|v| v.to_string()).unwrap_or_default(),
                    ci.map(|v| v.to_string()).unwrap_or_default(),
                ));
                records.push(json!({
                    "metric": member.label,
                    "x": x.symbols, "y": y.symbols,
                    "score": rat_str(&score),
                    "pem": rat_str(&pem),
                    "canonical_per_symbol": canonical,
                    "mc_estimate": est, "mc_ci": ci,
                }));
            }
        }
    }
    run.write("pairwise.csv", &csv)?;
    run.write_json("pairwise.json", &json!({ "records": records }))
}

fn build_table(run: &Run) -> Result<universal::GmetTable, CliError> {
    let cfg = &run.cfg;
    let prior = cfg.build_prior()?;
    let family = cfg.build_family()?;
    let cap = cfg.cap();
    let ys = universal::full_y_space(cfg.y_alphabet(), cfg.blocklength, cap)?;
    Ok(universal::build_gmet_table(&prior, &family, ys, false, cap)?)
}

fn cmd_gmet(run: &mut Run) -> Result<(), CliError> {
    let table = build_table(run)?;
    let mut csv = String::from("y,x,value,argmin\n");
    for (yi, y) in table.y_list.iter().enumerate() {
        for (i, (x, _)) in table.support.iter().enumerate() {
            csv.push_str(&format!(
                "{:?},{:?},{},{}\n",
                y.symbols,
                x.symbols,
                rat_str(&table.values[yi][i]),
                table.argmin[yi][i],
            ));
        }
    }
    run.write("gmet.csv", &csv)?;
    run.write_json(
        "gmet.json",
        &json!({
            "n": table.n,
            "values": table.values.iter().map(|col| col.iter().map(rat_str).collect::<Vec<_>>()).collect::<Vec<_>>(),
        }),
    )
}

fn cmd_redundancy(run: &mut Run) -> Result<(), CliError> {
    let prior = run.cfg.build_prior()?;
    let table = build_table(run)?;
    let rep = universal::redundancy(&prior, &table);
    let jsonrep = univdec::report::RedundancyJson::from(&rep);
    let row = CsvRow {
        n: run.cfg.blocklength,
        r: run.cfg.rate.unwrap_or(0.0),
        m: run.cfg.codebook_size(),
        p_e_exact: None,
        p_e_mc: None,
        ci: None,
        union_clip: None,
        sandwich_ratio: None,
        k_n: Some(rat_str(&rep.k_n)),
        slack_per_symbol: Some(rep.slack_per_symbol),
    };
    run.write(
        "redundancy.csv",
        &univdec::report::render_csv(&[row]),
    )?;
    run.write_json(
        "redundancy.json",
        &serde_json::to_value(&jsonrep).map_err(|e| CliError::Config(e.to_string()))?,
    )
}

fn assert_suite(passed: bool, report: &Value, run: &mut Run, name: &str) -> Result<(), CliError> {
    run.write_json(&format!("verify-{name}.json"), report)?;
    if passed {
        println!("suite {name}: pass");
        Ok(())
    } else {
        Err(CliError::Assertion(format!(
            "suite {name} failed; see verify-{name}.json"
        )))
    }
}

fn cmd_verify(run: &mut Run, suite: Suite, corrupt: bool) -> Result<(), CliError> {
    let cfg = run.cfg.clone();
    let prior = cfg.build_prior()?;
    let cap = cfg.cap();
    match suite {
        Suite::Lemma1 => {
            let channel = cfg.build_channel()?;
            let family = cfg.build_family()?;
            let mut worst_low = f64::INFINITY;
            let mut worst_high = 0.0f64;
            let mut passed = true;
            let mut failures = Vec::new();
            for member in &family.members {
                for m in [2u64, 4, 8] {
                    let rep = simulator::sandwich_check(
                        &prior,
                        &channel,
                        &member.metric,
                        cfg.y_alphabet(),
                        m,
                        cap,
                    )?;
                    let r = rat_to_f64(&rep.ratio);
                    worst_low = worst_low.min(r);
                    worst_high = worst_high.max(r);
                    if !rep.ok {
                        passed = false;
                        failures.push(json!({
                            "metric": member.label, "M": m, "ratio": rat_str(&rep.ratio),
                        }));
                    }
                }
            }
            let report = json!({
                "suite": "lemma1", "passed": passed,
                "ratio_range": [worst_low, worst_high],
                "failures": failures,
            });
            assert_suite(passed, &report, run, "lemma1")
        }
        Suite::Theorem1 => {
            let family = cfg.build_family()?;
            let ys = universal::full_y_space(cfg.y_alphabet(), cfg.blocklength, cap)?;
            let table = universal::build_gmet_table(&prior, &family, ys, false, cap)?;
            let mut rep = universal::theorem1_check(&prior, &family, &table, cap)?;
            if corrupt {
                // test fixture: halve K_n so domination must fail
                rep.worst_ratio = rep.worst_ratio * Rat::from_integer(2.into());
                rep.ok = rep.worst_ratio <= Rat::from_integer(1.into());
            }
            let slack = univdec::numeric::log2_of_rat(&rep.k_n) / cfg.blocklength as f64;
            let report = json!({
                "suite": "theorem1", "passed": rep.ok,
                "k_n": rat_str(&rep.k_n),
                "slack_per_symbol": slack,
                "worst_ratio": rat_str(&rep.worst_ratio),
            });
            assert_suite(rep.ok, &report, run, "theorem1")
        }
        Suite::Ratefn => {
            use univdec::ratefn;
            let mut passed = true;
            let mut details = Vec::new();
            let mut rng = univdec::rngutil::seeded(run.seed);
            use rand::Rng;
            let total = cfg
                .x_alphabet()
                .space_size(cfg.blocklength, cap)? as usize;
            let choices: Vec<Rat> = [(1i64, 4i64), (1, 2), (1, 1), (2, 1), (4, 1), (0, 1)]
                .iter()
                .map(|&(a, b)| univdec::numeric::rat(a, b))
                .collect();
            for i in 0..50 {
                let vals: Vec<Rat> = (0..total)
                    .map(|_| choices[rng.gen_range(0..choices.len())].clone())
                    .collect();
                let r = ratefn::RateFn::new(cfg.blocklength, cfg.x_alphabet(), vals)?;
                let omr = ratefn::omega(&prior, &r, cap)?.to_ratefn(cfg.x_alphabet());
                let cert = ratefn::certify_rate_function(&prior, &omr, cap)?;
                let order = ratefn::check_order_preservation(&prior, &r, cap)?;
                let upper = if ratefn::certify_rate_function(&prior, &r, cap)?.passed {
                    ratefn::check_upper_bound_property(&prior, &r, cap)?.ok
                } else {
                    true
                };
                if !(cert.passed && order.ok && upper) {
                    passed = false;
                    details.push(json!({"draw": i, "omega_certified": cert.passed,
                        "order_ok": order.ok, "upper_ok": upper}));
                }
            }
            let report = json!({"suite": "ratefn", "passed": passed, "failures": details});
            assert_suite(passed, &report, run, "ratefn")
        }
        Suite::Merged => {
            let family = cfg.build_family()?;
            let ys = universal::full_y_space(cfg.y_alphabet(), cfg.blocklength, cap)?;
            let table = universal::build_gmet_table(&prior, &family, ys, false, cap)?;
            let rep = universal::merged_family_bound(&prior, &family, &table, cap)?;
            let ok = rep.per_y_ok && rep.k_n_ok;
            let report = json!({
                "suite": "merged", "passed": ok,
                "k_n": rat_str(&rep.k_n),
                "family_bound": rat_str(&rep.family_bound),
            });
            assert_suite(ok, &report, run, "merged")
        }
        Suite::Tightness => {
            let family = cfg.build_family()?;
            let ys = universal::full_y_space(cfg.y_alphabet(), cfg.blocklength, cap)?;
            let rep = universal::u2_tightness_check(&prior, &family, &ys, cap)?;
            let report = json!({
                "suite": "tightness", "passed": rep.lower_bound_ok,
                "upper_slack_per_symbol": rep.upper_slack_per_symbol,
            });
            assert_suite(rep.lower_bound_ok, &report, run, "tightness")
        }
    }
}

fn cmd_simulate(run: &mut Run) -> Result<(), CliError> {
    let cfg = run.cfg.clone();
    let prior = cfg.build_prior()?;
    let channel = cfg.build_channel()?;
    let family = cfg.build_family()?;
    let cap = cfg.cap();
    let m = cfg.codebook_size();
    let rate = cfg.rate.unwrap_or(0.0);
    let mut rows = Vec::new();
    for member in &family.members {
        let mut rep = simulator::ErrorReport {
            n: cfg.blocklength,
            rate,
            m,
            pe_exact: None,
            pe_mc: None,
            union_clip: None,
            sandwich_ratio: None,
            k_n: None,
            slack_per_symbol: None,
            seed: run.seed,
        };
        if cfg.mode == Mode::Exact {
            let sand = simulator::sandwich_check(
                &prior,
                &channel,
                &member.metric,
                cfg.y_alphabet(),
                m,
                cap,
            )?;
            if !sand.ok {
                return Err(CliError::Assertion(format!(
                    "sandwich ratio {} outside [1/2, 1] for metric {}",
                    rat_str(&sand.ratio),
                    member.label
                )));
            }
            rep.pe_exact = Some(sand.pe_exact);
            rep.union_clip = Some(sand.union_clip);
            rep.sandwich_ratio = Some(sand.ratio);
        } else {
            let mc = simulator::avg_error_mc(
                &prior,
                &channel,
                &member.metric,
                m,
                cfg.trials.unwrap_or(1000),
                run.seed,
            )?;
            rep.pe_mc = Some(mc);
        }
        rows.push(CsvRow::from(&rep));
    }
    run.write("simulate.csv", &univdec::report::render_csv(&rows))?;
    run.write_json(
        "simulate.json",
        &serde_json::to_value(&rows).map_err(|e| CliError::Config(e.to_string()))?,
    )
}

fn cmd_demo_fsc(run: &mut Run) -> Result<(), CliError> {
    let cfg = run.cfg.clone();
    let prior = cfg.build_prior()?;
    let channel = cfg.build_channel()?;
    let family = cfg.build_family()?;
    let cap = cfg.cap();
    let n = cfg.blocklength;
    let m = cfg.codebook_size();
    let xa = cfg.x_alphabet();
    let ya = cfg.y_alphabet();
    let ys = universal::full_y_space(ya, n, cap)?;

    // GMET vs best member vs U2, exact ensemble errors
    let table = universal::build_gmet_table(&prior, &family, ys.clone(), false, cap)?;
    let red = universal::redundancy(&prior, &table);
    let gmet_pe = simulator::ensemble_average_error(
        &prior,
        &channel,
        &ys,
        |yi, i| universal::decoder_pairwise_error(&table.values[yi], &table.support, i),
        m,
        cap,
    )?;
    let mut member_pes = Vec::new();
    for member in &family.members {
        member_pes.push(simulator::avg_error_exact(
            &prior,
            &channel,
            &member.metric,
            ya,
            m,
            cap,
        )?);
    }
    let best = member_pes.iter().min().cloned().unwrap();
    let u2_cols: Vec<Vec<Rat>> = ys
        .iter()
        .map(|y| universal::u2_column(&prior, &family, y, cap))
        .collect::<univdec::Result<_>>()?;
    let u2_pe = simulator::ensemble_average_error(
        &prior,
        &channel,
        &ys,
        |yi, i| universal::decoder_pairwise_error(&u2_cols[yi], &table.support, i),
        m,
        cap,
    )?;
    let two_kn = Rat::from_integer(2.into()) * &red.k_n;
    let within = &gmet_pe <= &(&two_kn * &best);

    // degenerate α = 1 contrast: the GMET value collapses to the prior
    // mass, so the decoder ranks by Q(x) alone
    let deg_trials = cfg.trials.unwrap_or(1000);
    let xs_size = xa.space_size(n, cap)?;
    let ys_size = ya.space_size(n, cap)?;
    let mut rng = univdec::rngutil::seeded(run.seed);
    use rand::Rng;
    let sample_pairs: Vec<(Sequence, Sequence)> = (0..8.min(xs_size * ys_size))
        .map(|_| {
            (
                Sequence::from_rank(rng.gen_range(0..xs_size), n, xa),
                Sequence::from_rank(rng.gen_range(0..ys_size), n, ya),
            )
        })
        .collect();
    let deg_family = simulator::build_degenerate_family(&sample_pairs, xa, ya)?;
    let mut collapse_ok = true;
    for (x, y) in &sample_pairs {
        if universal::gmet_value(&prior, &deg_family, x, y, cap)? != prior.mass(x)? {
            collapse_ok = false;
        }
    }
    // operational decoder for the collapsed value: maximize −Q(x)
    let prior_metric = prior_mass_metric(&prior, xa, ya, n, cap)?;
    let deg_mc = simulator::avg_error_mc(&prior, &channel, &prior_metric, m, deg_trials, run.seed)?;

    let singleton_ok = family.len() > 1 || {
        // singleton control: GMET, U2 and the lone member coincide
        gmet_pe == member_pes[0] && u2_pe == member_pes[0]
    };
    let passed = within && collapse_ok && singleton_ok;
    let report = json!({
        "k_n": rat_str(&red.k_n),
        "slack_per_symbol": red.slack_per_symbol,
        "gmet_pe": rat_str(&gmet_pe),
        "u2_pe": rat_str(&u2_pe),
        "member_pes": member_pes.iter().map(rat_str).collect::<Vec<_>>(),
        "best_member_pe": rat_str(&best),
        "gmet_within_2kn_of_best": within,
        "degenerate_collapse_ok": collapse_ok,
        "degenerate_mc_error": deg_mc.estimate,
        "degenerate_error_floor": 1.0 - 1.0 / m as f64,
        "passed": passed,
    });
    run.write_json("demo-fsc.json", &report)?;
    if passed {
        println!("demo-fsc: pass");
        Ok(())
    } else {
        Err(CliError::Assertion("demo-fsc contrast failed".into()))
    }
}

/// Table metric scoring −Q_n(x) regardless of y: the operational form of a
/// decoder whose value table equals the prior mass.
fn prior_mass_metric(
    prior: &univdec::model::Prior,
    xa: Alphabet,
    ya: Alphabet,
    n: usize,
    cap: u64,
) -> Result<Metric, CliError> {
    let masses: Vec<Rat> = (0..xa.space_size(n, cap)?)
        .map(|r| prior.mass(&Sequence::from_rank(r, n, xa)))
        .collect::<univdec::Result<_>>()?;
    Ok(Metric::table_from_fn(xa, ya, n, cap, |x, _| {
        -masses[x.rank(xa) as usize].clone()
    })?)
}

fn cmd_plotdata(out: &Path, inputs: &[PathBuf]) -> Result<(), CliError> {
    if inputs.is_empty() {
        return Err(CliError::Config("plotdata requires at least one report CSV".into()));
    }
    let mut slack_series: Vec<(f64, f64)> = Vec::new(); // (n, slack)
    let mut rate_series: Vec<(f64, f64)> = Vec::new(); // (R, log2 P_e)
    for path in inputs {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let mut lines = text.lines();
        let header = lines.next().unwrap_or_default();
        if header != CSV_HEADER {
            return Err(CliError::Config(format!(
                "{}: unrecognized report header",
                path.display()
            )));
        }
        for line in lines {
            let cells: Vec<&str> = line.split(',').collect();
            if cells.len() != 10 {
                continue;
            }
            let n: f64 = cells[0].parse().unwrap_or(f64::NAN);
            let r: f64 = cells[1].parse().unwrap_or(f64::NAN);
            if let Ok(slack) = cells[9].parse::<f64>() {
                slack_series.push((n, slack));
            }
            let pe = cells[3]
                .split_once('/')
                .and_then(|(p, q)| Some(p.parse::<f64>().ok()? / q.parse::<f64>().ok()?))
                .or_else(|| cells[3].parse().ok())
                .or_else(|| cells[4].parse().ok());
            if let Some(pe) = pe {
                if pe > 0.0 {
                    rate_series.push((r, pe.log2()));
                }
            }
        }
    }
    std::fs::create_dir_all(out)?;
    for (name, xlabel, ylabel, series) in [
        ("slack_vs_n", "n", "slack", &mut slack_series),
        ("log2pe_vs_rate", "R", "log2_Pe", &mut rate_series),
    ] {
        series.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut csv = format!("{xlabel},{ylabel}\n");
        for (x, y) in series.iter() {
            csv.push_str(&format!("{x},{y}\n"));
        }
        std::fs::write(out.join(format!("{name}.csv")), csv)?;
        std::fs::write(out.join(format!("{name}.svg")), render_svg(series))?;
    }
    Ok(())
}

/// Minimal polyline chart; a single point degenerates to a dot-length line.
fn render_svg(series: &[(f64, f64)]) -> String {
    let (w, h, pad) = (480.0, 320.0, 30.0);
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in series {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let sx = |x: f64| {
        if x1 > x0 {
            pad + (x - x0) / (x1 - x0) * (w - 2.0 * pad)
        } else {
            w / 2.0
        }
    };
    let sy = |y: f64| {
        if y1 > y0 {
            h - pad - (y - y0) / (y1 - y0) * (h - 2.0 * pad)
        } else {
            h / 2.0
        }
    };
    let points: Vec<String> = series
        .iter()
        .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
        .collect();
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\">\
         <rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\
         <polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"{}\"/>\
         </svg>\n",
        points.join(" ")
    )
}
