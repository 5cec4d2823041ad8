//! Acceptance gate: every criterion runs at its pinned tolerance and prints one
//! PASS/FAIL line. Run with `cargo test -p tbell --test acceptance -- --nocapture`.

use std::collections::BTreeSet;
use std::fs;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use tbell_core::experiment::{estimate_chsh, run_experiment, Scheduler};
use tbell_core::lhv::{
    bell_combination, ensemble_bell, full_strategies, max_over_full_strategies,
    max_over_pi_strategies, Ensemble, PiStrategy, SettingLabels,
};
use tbell_core::quantum::{
    chsh_value, correlation_analytic, correlation_g, correlation_simulated, evolution,
    optimal_settings, sigma_at_time, Hamiltonian, TimeSettings, TSIRELSON_BOUND,
};
use tbell_core::relativity::{
    achievable_orderings, classify, ordering_at, Event, EventLabel, IntervalClass, TimeOrdering,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_time(start: Instant, limit: Duration) -> Result<(), String> {
    let took = start.elapsed();
    check(took < limit, || format!("took {took:?}, limit {limit:?}"))
}

fn tsirelson_maximum() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let h = Hamiltonian::from_gap(rng.random_range(0.1..=10.0)).unwrap();
        let t0 = rng.random_range(-10.0..=10.0);
        let v = chsh_value(&h, &optimal_settings(&h, t0).unwrap()).unwrap();
        worst = worst.max((v.abs() - TSIRELSON_BOUND).abs());
    }
    check(worst < 1e-12, || format!("max deviation {worst:e}"))?;
    within_time(start, Duration::from_secs(1))?;
    Ok(format!("max | |B| - 2√2 | = {worst:.1e}"))
}

fn correlation_law() -> Outcome {
    let start = Instant::now();
    let h = Hamiltonian::new(0.4, 1.65).unwrap();
    let mut sign = None;
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        for j in 0..20 {
            let (m, n) = (i as f64 * 0.53 - 5.0, j as f64 * 0.47 - 4.0);
            let sim = correlation_simulated(&h, m, n).unwrap();
            let ana = correlation_analytic(&h, m, n);
            worst = worst.max((sim.abs() - ana.abs()).abs());
            if ana.abs() > 1e-6 {
                let s = (sim / ana).signum();
                if *sign.get_or_insert(s) != s {
                    return Err(format!("sign flips at (m,n)=({m},{n})"));
                }
            }
        }
    }
    let s = sign.ok_or("no sign determined")?;
    check(worst < 1e-12, || {
        format!("max magnitude deviation {worst:e}")
    })?;
    within_time(start, Duration::from_secs(1))?;
    Ok(format!("max deviation {worst:.1e}, global sign s = {s:+}"))
}

fn local_bound() -> Outcome {
    let start = Instant::now();
    let labels = SettingLabels::standard();
    let best = max_over_pi_strategies(&labels);
    check(best.value == 2 && best.scanned == 16, || {
        format!("PI max {} over {} strategies", best.value, best.scanned)
    })?;
    let mut rng = StdRng::seed_from_u64(3);
    let mut largest: f64 = 0.0;
    for _ in 0..10_000 {
        let n = rng.random_range(1..=100);
        let members = (0..n)
            .map(|_| PiStrategy::from_bits(&labels, rng.random_range(0..16)))
            .collect();
        let v = ensemble_bell(&Ensemble::from_pi(members).unwrap(), &labels).unwrap();
        largest = largest.max(v.abs());
    }
    check(largest <= 2.0, || format!("ensemble reached {largest}"))?;
    within_time(start, Duration::from_secs(1))?;
    Ok(format!(
        "max over 16 = 2; max over 10000 ensembles = {largest}"
    ))
}

fn unconstrained_bound() -> Outcome {
    let start = Instant::now();
    let labels = SettingLabels::standard();
    let best = max_over_full_strategies(&labels);
    check(best.value == 4 && best.scanned == 256, || {
        format!("full max {} over {}", best.value, best.scanned)
    })?;
    let mut witnesses = 0;
    for s in full_strategies(&labels) {
        if bell_combination(&s, &labels).unwrap().abs() > 2 {
            witnesses += 1;
            check(s.depends_on_other_setting(&labels), || {
                format!("{s:?} is parameter independent")
            })?;
        }
    }
    within_time(start, Duration::from_secs(1))?;
    Ok(format!(
        "max over 256 = 4; {witnesses} tables exceed 2, all parameter dependent"
    ))
}

fn evolution_identity() -> Outcome {
    let mut rng = StdRng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let de = rng.random_range(0.1..10.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let h = Hamiltonian::from_gap(de).unwrap();
        let (t, tp) = (rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0));
        let lhs = sigma_at_time(&h, tp).unwrap();
        let rhs = evolution(&h, tp - t)
            .unwrap()
            .matmul(&sigma_at_time(&h, t).unwrap())
            .unwrap()
            .matmul(&evolution(&h, t - tp).unwrap())
            .unwrap();
        worst = worst.max(lhs.max_abs_diff(&rhs).unwrap());
    }
    check(worst < 1e-12, || format!("residue {worst:e}"))?;
    Ok(format!("max entrywise residue {worst:.1e}"))
}

fn monte_carlo_reproduction() -> Outcome {
    let start = Instant::now();
    let h = Hamiltonian::from_gap(1.0).unwrap();
    let s = optimal_settings(&h, 0.0).unwrap();
    let target = chsh_value(&h, &s).unwrap();
    let mut hits = 0;
    let mut stderr_sum = 0.0;
    for seed in 0..100u64 {
        let est =
            estimate_chsh(&run_experiment(&h, &s, 100_000, seed, Scheduler::Uniform).unwrap())
                .unwrap();
        stderr_sum += est.stderr;
        if (est.value - target).abs() <= 4.0 * est.stderr {
            hits += 1;
        }
    }
    let mean_se = stderr_sum / 100.0;
    check(hits >= 95, || {
        format!("only {hits}/100 seeds within 4 stderr")
    })?;
    check((mean_se - 0.009).abs() < 0.001, || {
        format!("mean stderr {mean_se}")
    })?;
    within_time(start, Duration::from_secs(30))?;
    Ok(format!(
        "{hits}/100 seeds within 4·stderr, mean stderr {mean_se:.5}, {:.1?}",
        start.elapsed()
    ))
}

fn no_supremum_violation() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(7);
    let h = Hamiltonian::from_gap(1.0).unwrap();
    let mut largest: f64 = 0.0;
    let mut n = 0;
    while n < 10_000 {
        let mut t = || rng.random_range(-10.0..10.0);
        let Ok(s) = TimeSettings::new(t(), t(), t(), t()) else {
            continue;
        };
        n += 1;
        largest = largest.max(chsh_value(&h, &s).unwrap().abs());
    }
    check(largest <= TSIRELSON_BOUND + 1e-9, || {
        format!("|B| reached {largest}")
    })?;
    within_time(start, Duration::from_secs(5))?;
    Ok(format!("max |B| over 10000 settings = {largest:.12}"))
}

fn g_parameter_law() -> Outcome {
    let h = Hamiltonian::new(0.1, 1.35).unwrap();
    let s = correlation_simulated(&h, 0.0, 0.0).unwrap().signum();
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        for j in 0..10 {
            for k in 0..5 {
                let t = i as f64 * 0.9 - 4.0;
                let g1 = j as f64 * 0.3 - 1.5;
                let g2 = k as f64 * 0.75 + 0.2;
                let c = correlation_g(&h, t, g1, g2).unwrap();
                worst = worst.max((c - s * (h.delta_e() * t * (g2 - g1)).cos()).abs());
            }
        }
    }
    check(worst < 1e-12, || format!("max deviation {worst:e}"))?;
    Ok(format!("max deviation {worst:.1e} on 10×10×5 grid"))
}

/// Velocity-scan oracle: 10⁴ probes, half even in velocity, half even in rapidity on [−15, 15].
fn scan_orderings(events: &[Event; 3]) -> BTreeSet<TimeOrdering> {
    let half = 5_000;
    let even_v = (0..half).map(|i| -1.0 + (i as f64 + 0.5) * 2.0 / half as f64);
    let even_rapidity = (0..half).map(|i| (-15.0 + (i as f64 + 0.5) * 30.0 / half as f64).tanh());
    even_v
        .chain(even_rapidity)
        .filter(|v: &f64| v.abs() < 1.0)
        .filter_map(|v| ordering_at(events, v))
        .collect()
}

fn analytic_orderings(events: &[Event; 3]) -> BTreeSet<TimeOrdering> {
    achievable_orderings(events)
        .unwrap()
        .into_iter()
        .map(|w| w.ordering)
        .collect()
}

fn frame_orderings() -> Outcome {
    let mut rng = StdRng::seed_from_u64(9);
    let ev = |rng: &mut StdRng, l| {
        Event::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0), l).unwrap()
    };
    for i in 0..1000 {
        let events = EventLabel::ALL.map(|l| ev(&mut rng, l));
        let (a, b) = (analytic_orderings(&events), scan_orderings(&events));
        check(a == b, || {
            format!("triple {i} {events:?}: analytic {a:?} vs scan {b:?}")
        })?;
    }
    let mut scenarios = 0;
    while scenarios < 100 {
        let events = EventLabel::ALL.map(|l| ev(&mut rng, l));
        let [pm, p, dp] = &events;
        if classify(p, dp) == IntervalClass::Timelike
            && classify(pm, p) == IntervalClass::Spacelike
            && classify(pm, dp) == IntervalClass::Spacelike
        {
            scenarios += 1;
            let n = analytic_orderings(&events).len();
            check(n == 3, || format!("scenario {events:?} gave {n} orderings"))?;
        }
    }
    let mut timelike = 0;
    while timelike < 100 {
        let events = EventLabel::ALL.map(|l| ev(&mut rng, l));
        let all_timelike = (0..3).all(|i| {
            (i + 1..3).all(|j| classify(&events[i], &events[j]) == IntervalClass::Timelike)
        });
        if all_timelike {
            timelike += 1;
            let n = analytic_orderings(&events).len();
            check(n == 1, || {
                format!("timelike triple {events:?} gave {n} orderings")
            })?;
        }
    }
    Ok(
        "1000 random triples match the scan; 100 scenario triples → 3; 100 timelike triples → 1"
            .into(),
    )
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let bin = env!("CARGO_BIN_EXE_tbell");
    let run = |sub: &str| {
        let out = dir.path().join(sub);
        let status = Command::new(bin)
            .args([
                "simulate",
                "--seed",
                "42",
                "--pairs",
                "100000",
                "--delta-e",
                "1.3",
                "--t0",
                "0.7",
            ])
            .arg("--out")
            .arg(&out)
            .output()
            .map_err(|e| e.to_string())?;
        check(status.status.success(), || {
            String::from_utf8_lossy(&status.stderr).into_owned()
        })?;
        Ok::<_, String>(out)
    };
    let (a, b) = (run("a")?, run("b")?);
    let ra = fs::read(a.join("records.csv")).map_err(|e| e.to_string())?;
    let rb = fs::read(b.join("records.csv")).map_err(|e| e.to_string())?;
    check(ra == rb, || "records differ between identical runs".into())?;
    let verify = Command::new(bin)
        .args(["verify", "--out"])
        .arg(&a)
        .output()
        .map_err(|e| e.to_string())?;
    check(verify.status.success(), || {
        String::from_utf8_lossy(&verify.stderr).into_owned()
    })?;
    let summary = fs::read(a.join("summary.txt")).map_err(|e| e.to_string())?;
    let recomputed = String::from_utf8_lossy(&verify.stdout);
    let body: String = recomputed
        .lines()
        .skip(1)
        .map(|l| format!("{l}\n"))
        .collect();
    check(body.as_bytes() == summary.as_slice(), || {
        "verify output differs from summary".into()
    })?;
    Ok(format!(
        "records identical ({} bytes); summary recomputed bit-exactly",
        ra.len()
    ))
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 10] = [
        ("1 Tsirelson maximum at optimal times", tsirelson_maximum),
        ("2 correlation law |P| = |cos ΔE(n−m)|", correlation_law),
        ("3 parameter-independent bound 2", local_bound),
        ("4 unconstrained bound 4", unconstrained_bound),
        (
            "5 time-evolution identity for observables",
            evolution_identity,
        ),
        ("6 Monte Carlo reproduction", monte_carlo_reproduction),
        ("7 no value above 2√2", no_supremum_violation),
        ("8 g-parameter law", g_parameter_law),
        ("9 frame orderings", frame_orderings),
        ("10 determinism and verify", determinism),
    ];
    let mut failed = Vec::new();
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                println!("FAIL  {name}: {why}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
