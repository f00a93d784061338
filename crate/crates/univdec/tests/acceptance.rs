//! Acceptance suite: nine end-to-end criteria, each printing one pass/fail
//! line. All inequality checks run in exact rational arithmetic except
//! where a float tolerance is explicitly part of the criterion.

use num_bigint::BigUint;
use num_traits::Zero;
use rand::Rng;

use univdec::model::{Alphabet, Channel, FamilyMember, Metric, MetricFamily, Prior, Sequence};
use univdec::numeric::{rat, rat_int, rat_to_f64, Rat};
use univdec::pairwise;
use univdec::ratefn;
use univdec::rngutil;
use univdec::simulator;
use univdec::universal;

const CAP: u64 = 1 << 20;
const B: Alphabet = Alphabet { size: 2 };

fn uniform_binary(n: usize) -> Prior {
    Prior::iid(B, n, vec![rat(1, 2), rat(1, 2)]).unwrap()
}

fn random_table_metric(n: usize, rng: &mut impl Rng) -> Metric {
    let xs = 1usize << n;
    let values: Vec<Vec<Rat>> = (0..xs)
        .map(|_| (0..xs).map(|_| rat_int(rng.gen_range(0..4))).collect())
        .collect();
    Metric::Table {
        x_alphabet: B,
        y_alphabet: B,
        n,
        values,
    }
}

fn random_bsc(rng: &mut impl Rng) -> Channel {
    // crossover in (0, 1/2], rational
    let num = rng.gen_range(1i64..=5);
    Channel::bsc(rat(num, 10)).unwrap()
}

fn random_marginal(rng: &mut impl Rng) -> Vec<Rat> {
    let a = rng.gen_range(1i64..8);
    let b = rng.gen_range(1i64..8);
    vec![rat(a, a + b), rat(b, a + b)]
}

fn random_family(n: usize, size: usize, rng: &mut impl Rng) -> MetricFamily {
    MetricFamily::new(
        (0..size)
            .map(|i| FamilyMember {
                label: format!("m{i}"),
                metric: random_table_metric(n, rng),
            })
            .collect(),
    )
    .unwrap()
}

/// Criterion 1: exhaustive union-clip sandwich sweep, zero tolerance.
fn criterion_1() -> Result<(), String> {
    let mut rng = rngutil::seeded(101);
    for n in 1..=3usize {
        let prior = uniform_binary(n);
        for t in 0..50 {
            let metric = random_table_metric(n, &mut rng);
            let channel = random_bsc(&mut rng);
            for m in [2u64, 4, 8] {
                let rep = simulator::sandwich_check(&prior, &channel, &metric, B, m, CAP)
                    .map_err(|e| e.to_string())?;
                if !rep.ok {
                    return Err(format!(
                        "n={n} draw={t} M={m}: ratio {} outside [1/2, 1]",
                        univdec::report::rat_str(&rep.ratio)
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Criterion 2: redundancy domination pe{U} ≤ pem_θ·K_n, exact.
fn criterion_2() -> Result<(), String> {
    let mut rng = rngutil::seeded(202);
    for n in 1..=3usize {
        for &size in &[1usize, 2, 4, 8] {
            let prior = Prior::iid(B, n, random_marginal(&mut rng)).unwrap();
            let family = random_family(n, size, &mut rng);
            let ys = universal::full_y_space(B, n, CAP).map_err(|e| e.to_string())?;
            let table = universal::build_gmet_table(&prior, &family, ys, false, CAP)
                .map_err(|e| e.to_string())?;
            let rep = universal::theorem1_check(&prior, &family, &table, CAP)
                .map_err(|e| e.to_string())?;
            if !rep.ok {
                return Err(format!(
                    "n={n} |Θ|={size}: worst ratio {} > 1",
                    univdec::report::rat_str(&rep.worst_ratio)
                ));
            }
        }
    }
    Ok(())
}

/// Criterion 3: merged-decoder bound per y and K_n ≤ |Θ|·max normality.
fn criterion_3() -> Result<(), String> {
    let mut rng = rngutil::seeded(303);
    for n in 1..=3usize {
        for &size in &[1usize, 2, 4, 8] {
            let prior = Prior::iid(B, n, random_marginal(&mut rng)).unwrap();
            let family = random_family(n, size, &mut rng);
            let ys = universal::full_y_space(B, n, CAP).map_err(|e| e.to_string())?;
            let table = universal::build_gmet_table(&prior, &family, ys, false, CAP)
                .map_err(|e| e.to_string())?;
            let rep = universal::merged_family_bound(&prior, &family, &table, CAP)
                .map_err(|e| e.to_string())?;
            if !rep.per_y_ok || !rep.k_n_ok {
                return Err(format!(
                    "n={n} |Θ|={size}: per_y_ok={} k_n_ok={}",
                    rep.per_y_ok, rep.k_n_ok
                ));
            }
        }
    }
    Ok(())
}

/// Criterion 4: Appendix A rate-function suite over 200 random draws.
fn criterion_4() -> Result<(), String> {
    let mut rng = rngutil::seeded(404);
    let choices = [rat(1, 4), rat(1, 2), rat_int(1), rat_int(2), rat_int(4), rat_int(0)];
    let mut certified_seen = 0usize;
    for draw in 0..200 {
        let n = rng.gen_range(1..=3usize);
        let prior = Prior::iid(B, n, random_marginal(&mut rng)).unwrap();
        let total = 1usize << n;
        let vals: Vec<Rat> = (0..total)
            .map(|_| choices[rng.gen_range(0..choices.len())].clone())
            .collect();
        let r = ratefn::RateFn::new(n, B, vals).map_err(|e| e.to_string())?;

        // (a) Ω_R certifies every time
        let omr = ratefn::omega(&prior, &r, CAP)
            .map_err(|e| e.to_string())?
            .to_ratefn(B);
        let cert = ratefn::certify_rate_function(&prior, &omr, CAP).map_err(|e| e.to_string())?;
        if !cert.passed {
            return Err(format!("draw {draw}: Ω_R failed certification"));
        }
        // (b) order preservation, including the strict case
        let order = ratefn::check_order_preservation(&prior, &r, CAP).map_err(|e| e.to_string())?;
        if !order.ok {
            return Err(format!("draw {draw}: order preservation violated at {:?}", order.witness));
        }
        // (c) and (e) for certified rate functions
        if ratefn::certify_rate_function(&prior, &r, CAP)
            .map_err(|e| e.to_string())?
            .passed
        {
            certified_seen += 1;
            let upper =
                ratefn::check_upper_bound_property(&prior, &r, CAP).map_err(|e| e.to_string())?;
            if !upper.ok {
                return Err(format!("draw {draw}: R ≤ Ω_R violated at {:?}", upper.witness));
            }
            let b = prior.chi_exp2(CAP).map_err(|e| e.to_string())?;
            let exp = ratefn::expectation_bound(&prior, &r, &b, CAP).map_err(|e| e.to_string())?;
            if !exp.ok {
                return Err(format!(
                    "draw {draw}: E[2^nR] = {} exceeds 1 + ln2·χ = {}",
                    rat_to_f64(&exp.expectation),
                    exp.bound
                ));
            }
        }
    }
    if certified_seen == 0 {
        return Err("no certified rate functions among the draws".into());
    }
    // (d) likelihood-ratio construction, 50 random (P, Q) pairs
    for draw in 0..50 {
        let n = rng.gen_range(1..=3usize);
        let p = Prior::iid(B, n, random_marginal(&mut rng)).unwrap();
        let q = Prior::iid(B, n, random_marginal(&mut rng)).unwrap();
        let lr = ratefn::RateFn::likelihood_ratio(&p, &q, CAP).map_err(|e| e.to_string())?;
        if !ratefn::certify_rate_function(&q, &lr, CAP)
            .map_err(|e| e.to_string())?
            .passed
        {
            return Err(format!("pair {draw}: likelihood ratio failed certification"));
        }
    }
    Ok(())
}

/// Criterion 5: strict-total-order metric gives E_Q[1/pem] = H_{2^n}.
fn criterion_5() -> Result<(), String> {
    for n in 1..=4usize {
        let prior = uniform_binary(n);
        // score = sequence rank: a strict total order, y-independent
        let metric = Metric::table_from_fn(B, B, n, CAP, |x, _| rat_int(x.rank(B) as i64))
            .map_err(|e| e.to_string())?;
        let y = Sequence::from_rank(0, n, B);
        let stat = pairwise::normality_statistic(&prior, &metric, &y, CAP)
            .map_err(|e| e.to_string())?;
        let mut harmonic = Rat::zero();
        for k in 1..=(1i64 << n) {
            harmonic += rat(1, k);
        }
        if stat != harmonic {
            return Err(format!(
                "n={n}: got {}, expected H_{} = {}",
                univdec::report::rat_str(&stat),
                1 << n,
                univdec::report::rat_str(&harmonic)
            ));
        }
        if n == 2 && stat != rat(25, 12) {
            return Err("n=2 value is not 25/12".into());
        }
    }
    Ok(())
}

/// Criterion 6: U_{n,2} tightness lower half plus the u2 ≤ u1 ≤ min pem
/// chain on the criterion-2 sweep.
fn criterion_6() -> Result<(), String> {
    let mut rng = rngutil::seeded(202); // same sweep as criterion 2
    for n in 1..=3usize {
        for &size in &[1usize, 2, 4, 8] {
            let prior = Prior::iid(B, n, random_marginal(&mut rng)).unwrap();
            let family = random_family(n, size, &mut rng);
            let ys = universal::full_y_space(B, n, CAP).map_err(|e| e.to_string())?;
            let rep = universal::u2_tightness_check(&prior, &family, &ys, CAP)
                .map_err(|e| e.to_string())?;
            if !rep.lower_bound_ok {
                return Err(format!("n={n} |Θ|={size}: pe{{U2}} < tie-class mass somewhere"));
            }
            let table = universal::build_gmet_table(&prior, &family, ys.clone(), false, CAP)
                .map_err(|e| e.to_string())?;
            for (yi, y) in ys.iter().enumerate() {
                let u2 = universal::u2_column(&prior, &family, y, CAP).map_err(|e| e.to_string())?;
                let u1 = universal::u1_column(&prior, &family, y, CAP).map_err(|e| e.to_string())?;
                for i in 0..u2.len() {
                    if !(u2[i] <= u1[i] && u1[i] <= table.values[yi][i]) {
                        return Err(format!(
                            "n={n} |Θ|={size} y={yi} x={i}: chain u2 ≤ u1 ≤ min pem violated"
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Criterion 7: finite-state contrast at n = 6.
fn criterion_7() -> Result<(), String> {
    let n = 6usize;
    let prior = uniform_binary(n);
    // 2-state finite-state channel: state tracks the last output symbol,
    // crossover 1/10 in state 0 and 3/10 in state 1
    let next = vec![vec![vec![0usize, 1], vec![0, 1]]; 2];
    let emission = vec![
        vec![vec![rat(9, 10), rat(1, 10)], vec![rat(1, 10), rat(9, 10)]],
        vec![vec![rat(7, 10), rat(3, 10)], vec![rat(3, 10), rat(7, 10)]],
    ];
    let channel = Channel::finite_state(next, emission, 0, B).map_err(|e| e.to_string())?;
    let m = 4u64;

    // (a) sampled 2-state metric family: GMET within 2·K_n of best member
    let family = simulator::build_fsm_family(2, B, B, 12, 707).map_err(|e| e.to_string())?;
    let ys = universal::full_y_space(B, n, CAP).map_err(|e| e.to_string())?;
    let table = universal::build_gmet_table(&prior, &family, ys.clone(), false, CAP)
        .map_err(|e| e.to_string())?;
    let red = universal::redundancy(&prior, &table);
    let gmet_pe = simulator::ensemble_average_error(
        &prior,
        &channel,
        &ys,
        |yi, i| universal::decoder_pairwise_error(&table.values[yi], &table.support, i),
        m,
        CAP,
    )
    .map_err(|e| e.to_string())?;
    let mut best: Option<Rat> = None;
    for member in &family.members {
        let pe = simulator::avg_error_exact(&prior, &channel, &member.metric, B, m, CAP)
            .map_err(|e| e.to_string())?;
        best = Some(match best {
            None => pe,
            Some(b) if pe < b => pe,
            Some(b) => b,
        });
    }
    let best = best.unwrap();
    let bound = rat_int(2) * &red.k_n * &best;
    if gmet_pe > bound {
        return Err(format!(
            "(a) GMET pe {} exceeds 2·K_n·best {}",
            rat_to_f64(&gmet_pe),
            rat_to_f64(&bound)
        ));
    }

    // (b) degenerate |S| = n family: GMET value collapses to Q(x)
    let mut rng = rngutil::seeded(708);
    let pairs: Vec<(Sequence, Sequence)> = (0..24)
        .map(|_| {
            (
                Sequence::from_rank(rng.gen_range(0..64), n, B),
                Sequence::from_rank(rng.gen_range(0..64), n, B),
            )
        })
        .collect();
    let deg = simulator::build_degenerate_family(&pairs, B, B).map_err(|e| e.to_string())?;
    for (x, y) in &pairs {
        let v = universal::gmet_value(&prior, &deg, x, y, CAP).map_err(|e| e.to_string())?;
        if v != prior.mass(x).map_err(|e| e.to_string())? {
            return Err("(b) gmet value does not collapse to Q(x)".into());
        }
    }
    // the collapsed decoder ranks by Q(x) alone; simulate it over 10^4
    // trials and require error rate ≥ 1 − 1/M − 0.05
    let masses: Vec<Rat> = (0..64u64)
        .map(|r| prior.mass(&Sequence::from_rank(r, n, B)).unwrap())
        .collect();
    let collapsed = Metric::table_from_fn(B, B, n, CAP, |x, _| -masses[x.rank(B) as usize].clone())
        .map_err(|e| e.to_string())?;
    let mc = simulator::avg_error_mc(&prior, &channel, &collapsed, m, 10_000, 709)
        .map_err(|e| e.to_string())?;
    let floor = 1.0 - 1.0 / m as f64 - 0.05;
    if mc.estimate < floor {
        return Err(format!("(b) MC error rate {} below {floor}", mc.estimate));
    }
    Ok(())
}

/// Criterion 8: count-bound and Markov-order formula evaluations.
fn criterion_8() -> Result<(), String> {
    if simulator::fsm_count_bound(2, 2, 2, 3) != BigUint::from(16_777_216u64) {
        return Err("B_n(S=2, |X|=|Y|=2, n=3) ≠ 16,777,216".into());
    }
    if simulator::markov_order_limit(256, 2, 2) != 3 {
        return Err("markov_order_limit(256, 2, 2) ≠ 3".into());
    }
    let mut prev = f64::INFINITY;
    for n in [4usize, 9, 16, 25, 36, 49, 64] {
        let s = (n as f64).sqrt().floor() as usize;
        let v = simulator::fsm_count_bound_log2(s, 2, 2, n) / n as f64;
        if v >= prev {
            return Err(format!("log2(B_n)/n not strictly decreasing at n={n}"));
        }
        prev = v;
    }
    Ok(())
}

/// Criterion 9: MC/exact 95% CI coverage ≥ 25/30 on five fixed instances.
fn criterion_9() -> Result<(), String> {
    struct Instance {
        prior: Prior,
        channel: Channel,
        metric: Metric,
        m: u64,
    }
    let mut rng = rngutil::seeded(909);
    let instances = vec![
        Instance {
            prior: uniform_binary(2),
            channel: Channel::bsc(rat(1, 10)).unwrap(),
            metric: Metric::channel_likelihood(vec![
                vec![rat(9, 10), rat(1, 10)],
                vec![rat(1, 10), rat(9, 10)],
            ]),
            m: 4,
        },
        Instance {
            prior: uniform_binary(3),
            channel: Channel::bsc(rat(1, 4)).unwrap(),
            metric: Metric::neg_hamming(B, B, 3, CAP).unwrap(),
            m: 4,
        },
        Instance {
            prior: Prior::iid(B, 2, vec![rat(1, 3), rat(2, 3)]).unwrap(),
            channel: Channel::bsc(rat(1, 5)).unwrap(),
            metric: Metric::neg_hamming(B, B, 2, CAP).unwrap(),
            m: 2,
        },
        Instance {
            prior: uniform_binary(3),
            channel: Channel::bsc(rat(3, 10)).unwrap(),
            metric: random_table_metric(3, &mut rng),
            m: 8,
        },
        Instance {
            prior: Prior::iid(B, 2, vec![rat(1, 4), rat(3, 4)]).unwrap(),
            channel: Channel::bsc(rat(1, 10)).unwrap(),
            metric: Metric::channel_likelihood(vec![
                vec![rat(4, 5), rat(1, 5)],
                vec![rat(1, 5), rat(4, 5)],
            ]),
            m: 4,
        },
    ];
    let trials = 1500u64;
    for (k, inst) in instances.iter().enumerate() {
        // pairwise: fixed (x, y) pair with interior pem
        let n = inst.prior.n;
        let x = Sequence::from_rank(0, n, B);
        let y = Sequence::from_rank(1, n, B);
        let exact_pem = rat_to_f64(
            &pairwise::pairwise_error_exact(&inst.prior, &inst.metric, &x, &y, CAP)
                .map_err(|e| e.to_string())?,
        );
        let exact_pe = rat_to_f64(
            &simulator::avg_error_exact(&inst.prior, &inst.channel, &inst.metric, B, inst.m, CAP)
                .map_err(|e| e.to_string())?,
        );
        let mut pem_hits = 0;
        let mut pe_hits = 0;
        for seed in 0..30u64 {
            if let pairwise::PairwiseResult::MonteCarlo {
                estimate,
                ci_halfwidth,
                ..
            } = pairwise::pairwise_error_mc(&inst.prior, &inst.metric, &x, &y, trials, seed)
                .map_err(|e| e.to_string())?
            {
                if (estimate - exact_pem).abs() <= ci_halfwidth {
                    pem_hits += 1;
                }
            }
            let mc =
                simulator::avg_error_mc(&inst.prior, &inst.channel, &inst.metric, inst.m, trials, seed)
                    .map_err(|e| e.to_string())?;
            if (mc.estimate - exact_pe).abs() <= mc.ci_halfwidth {
                pe_hits += 1;
            }
        }
        if pem_hits < 25 || pe_hits < 25 {
            return Err(format!(
                "instance {k}: pairwise coverage {pem_hits}/30, ensemble coverage {pe_hits}/30"
            ));
        }
    }
    Ok(())
}

#[test]
fn acceptance() {
    let criteria: Vec<(&str, fn() -> Result<(), String>)> = vec![
        ("criterion 1 (union-clip sandwich sweep)", criterion_1),
        ("criterion 2 (redundancy domination)", criterion_2),
        ("criterion 3 (merged-decoder bound)", criterion_3),
        ("criterion 4 (rate-function suite)", criterion_4),
        ("criterion 5 (harmonic redundancy)", criterion_5),
        ("criterion 6 (U_{n,2} tightness and chain)", criterion_6),
        ("criterion 7 (finite-state contrast)", criterion_7),
        ("criterion 8 (formula evaluations)", criterion_8),
        ("criterion 9 (MC/exact CI coverage)", criterion_9),
    ];
    let mut failures = Vec::new();
    for (name, f) in criteria {
        match f() {
            Ok(()) => println!("{name}: PASS"),
            Err(msg) => {
                println!("{name}: FAIL — {msg}");
                failures.push(name);
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
