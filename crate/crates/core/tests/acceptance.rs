//! Acceptance suite. Run with `cargo test --test acceptance`; prints one
//! PASS/FAIL line per criterion and exits non-zero if any fails.

use std::time::{Duration, Instant};

use kex::analysis::{
    approx_ratio, deviating_utility, deviation_gain, estimate_moments, exact_distribution, DeviationReport,
};
use kex::combiner::balanced_pair;
use kex::graph::{hide_vertices, Edge, Instance, Matching};
use kex::harness::{gen_instance, GeneratorSpec};
use kex::matching::{
    brute_force_matching, constrained_max_matching, max_matching, BruteObjective, LabelVector, MatchingObjective,
};
use kex::mechanisms::{labels_from_seed, run_with_seed, LabelSeed, MechanismConfig, MechanismKind};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

type Outcome = std::result::Result<String, String>;

fn covered(inst: &Instance, m: &Matching, agent: usize) -> i64 {
    m.edges()
        .iter()
        .flat_map(|e| [e.u(), e.v()])
        .filter(|&v| inst.owners()[v - 1] == agent)
        .count() as i64
}

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Exact mean and variance of equally likely integer outcomes.
fn moments(xs: &[i64]) -> (BigRational, BigRational) {
    let n = rat(xs.len() as i64);
    let mean = rat(xs.iter().sum()) / &n;
    let second = rat(xs.iter().map(|x| x * x).sum()) / &n;
    let var = second - &mean * &mean;
    (mean, var)
}

fn example1() -> Instance {
    gen_instance(&GeneratorSpec::example1(12)).unwrap()
}

/// 200 random instances with n ≤ 16, m ≤ 3, |V_i| ≤ 8.
fn small_suite() -> Vec<Instance> {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(0x5eed_0004);
    let mut out = Vec::new();
    while out.len() < 200 {
        let m = rng.gen_range(1..=3);
        let n = rng.gen_range(m.max(3)..=16);
        let p = [0.1, 0.3, 0.6][rng.gen_range(0..3)];
        let inst = gen_instance(&GeneratorSpec::random(n, m, p, rng.gen())).unwrap();
        if inst.agent_sizes().iter().all(|&s| s <= 8) {
            out.push(inst);
        }
    }
    out
}

fn criterion1() -> Outcome {
    let inst = example1();
    let d = exact_distribution(&inst, &MechanismConfig::new(MechanismKind::Mix)).map_err(|e| e.to_string())?;
    // oracle: every labeling through the brute-force tiered matching
    let us: Vec<i64> = (0..8u64)
        .map(|bits| {
            let m = brute_force_matching(&inst, &BruteObjective::Tiered(LabelVector::from_bits(3, bits))).unwrap();
            covered(&inst, &m, 1)
        })
        .collect();
    let (mean, var) = moments(&us);
    let expected = (rat(2), rat(4));
    if (d.mean(1), d.variance(1)) != expected || (mean.clone(), var.clone()) != expected {
        return Err(format!(
            "library mean {} var {}, oracle mean {mean} var {var}",
            d.mean(1),
            d.variance(1)
        ));
    }
    Ok("mean 2, variance 4 (= n²/36) from both routes".into())
}

fn criterion2() -> Outcome {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(0x5eed_0002);
    let config = MechanismConfig::new(MechanismKind::Modified);
    let mut nonempty_diffs = 0;
    for i in 0..1000 {
        let m = rng.gen_range(1..=6);
        let n = rng.gen_range(m..=30);
        let p = [0.1, 0.3, 0.6][i % 3];
        let inst = gen_instance(&GeneratorSpec::random(n, m, p, rng.gen())).unwrap();
        let m1 = run_with_seed(&inst, &config, rng.gen()).unwrap();
        let m2 = run_with_seed(&inst, &config, rng.gen()).unwrap();
        if m1 != m2 {
            nonempty_diffs += 1;
        }
        let pair = balanced_pair(&inst, &m1, &m2).map_err(|e| format!("instance {i}: {e}"))?;
        for a in 1..=m {
            let (x1, x2) = (covered(&inst, &m1, a), covered(&inst, &m2, a));
            let (y1, y2) = (covered(&inst, &pair.n1, a), covered(&inst, &pair.n2, a));
            if (y1 - y2).abs() > 2 || y1 + y2 != x1 + x2 {
                return Err(format!("instance {i} agent {a}: ({x1},{x2}) -> ({y1},{y2})"));
            }
        }
        let mut before: Vec<Edge> = m1.edges().iter().chain(m2.edges()).copied().collect();
        let mut after: Vec<Edge> = pair.n1.edges().iter().chain(pair.n2.edges()).copied().collect();
        before.sort();
        after.sort();
        if before != after {
            return Err(format!("instance {i}: edge multiset changed"));
        }
    }
    Ok(format!(
        "1000 instances, {nonempty_diffs} with M1 != M2, zero violations"
    ))
}

fn criterion3() -> Outcome {
    let inst = example1();
    // oracle: 8 x 8 labelings x coin, leaves from the brute-force route
    let leaf =
        |bits: u64| brute_force_matching(&inst, &BruteObjective::Tiered(LabelVector::from_bits(3, bits))).unwrap();
    let leaves: Vec<Matching> = (0..8).map(leaf).collect();
    let mut us = Vec::new();
    for a in &leaves {
        for b in &leaves {
            let pair = balanced_pair(&inst, a, b).map_err(|e| e.to_string())?;
            us.push(covered(&inst, &pair.n1, 1));
            us.push(covered(&inst, &pair.n2, 1));
        }
    }
    let (mean, var) = moments(&us);
    let lib = exact_distribution(&inst, &MechanismConfig::new(MechanismKind::Multilayer).with_layers(1))
        .map_err(|e| e.to_string())?;
    if us.len() != 128 || mean != rat(2) || var > rat(3) || lib.mean(1) != mean || lib.variance(1) != var {
        return Err(format!(
            "k=1: oracle mean {mean} var {var}; library mean {} var {}",
            lib.mean(1),
            lib.variance(1)
        ));
    }

    let config = MechanismConfig::new(MechanismKind::Multilayer).with_epsilon(0.5);
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(0x5eed_0003);
    let mut suite = vec![inst.clone()];
    while suite.len() < 21 {
        let m = rng.gen_range(2..=4);
        let n = rng.gen_range(8..=16);
        let p = [0.1, 0.3, 0.6][rng.gen_range(0..3)];
        suite.push(gen_instance(&GeneratorSpec::random(n, m, p, rng.gen())).unwrap());
    }
    let mut worst = f64::NEG_INFINITY;
    for (i, g) in suite.iter().enumerate() {
        let report = estimate_moments(g, &config, 100_000, 0xC0FFEE + i as u64).map_err(|e| e.to_string())?;
        for (a, s) in report.agents.iter().enumerate() {
            let (var, se) = (s.variance.unwrap(), s.se_var.unwrap());
            worst = worst.max(var - 3.0 * se);
            if var > 2.5 + 3.0 * se {
                return Err(format!(
                    "instance {i} (k = {}) agent {}: variance {var} ± {se}",
                    config.layers_for(g),
                    a + 1
                ));
            }
        }
    }
    Ok(format!(
        "k=1: E=2, Var={var} <= 3 (128 outcomes); k=9 default, 21 instances, max Var-3SE = {worst:.4} <= 2.5"
    ))
}

fn check_gain(inst: &Instance, kind: MechanismKind, bound: &BigRational, i: usize) -> Result<DeviationReport, String> {
    let mut best: Option<DeviationReport> = None;
    for a in 1..=inst.agent_count() {
        let r = deviation_gain(inst, a, &MechanismConfig::new(kind), 8).map_err(|e| format!("instance {i}: {e}"))?;
        let gain = r.gain.exact().unwrap();
        if gain > bound {
            return Err(format!(
                "instance {i} {kind} agent {a}: hiding {:?} gains {gain}",
                r.hidden
            ));
        }
        if best.as_ref().is_none_or(|b| r.gain.value() > b.gain.value()) {
            best = Some(r);
        }
    }
    Ok(best.unwrap())
}

/// Expected utility of `agent` under Mix-and-Match after hiding `hidden`,
/// computed with brute-force matchings only.
fn brute_mix_deviation(inst: &Instance, agent: usize, hidden: &[usize]) -> BigRational {
    let sub = hide_vertices(inst, agent, hidden).unwrap();
    let m = inst.agent_count();
    let mut total = 0i64;
    for bits in 0..1u64 << m {
        let out =
            brute_force_matching(&sub.instance, &BruteObjective::Tiered(LabelVector::from_bits(m, bits))).unwrap();
        let lifted = sub.lift_matching(&out);
        let free: Vec<usize> = inst
            .agent_vertices(agent)
            .into_iter()
            .filter(|&v| !lifted.edges().iter().any(|e| e.touches(v)))
            .collect();
        let own: Vec<Edge> = inst
            .edges()
            .iter()
            .copied()
            .filter(|e| free.contains(&e.u()) && free.contains(&e.v()))
            .collect();
        let private = Instance::with_empty_agents(1, vec![1; inst.vertex_count()], own).unwrap();
        let residual = brute_force_matching(&private, &BruteObjective::Cardinality).unwrap();
        total += covered(inst, &lifted, agent) + 2 * residual.len() as i64;
    }
    BigRational::new(BigInt::from(total), BigInt::from(1u64 << m))
}

fn criterion4() -> Outcome {
    let suite = small_suite();
    let zero = rat(0);
    let mut cross_checked = 0;
    for (i, inst) in suite.iter().enumerate() {
        for kind in [MechanismKind::Mix, MechanismKind::Modified] {
            check_gain(inst, kind, &zero, i)?;
        }
        if inst.vertex_count() <= 10 && cross_checked < 40 {
            cross_checked += 1;
            for a in 1..=inst.agent_count() {
                let truthful = brute_mix_deviation(inst, a, &[]);
                let lib = deviating_utility(inst, a, &MechanismConfig::new(MechanismKind::Mix), &[]).unwrap();
                if lib != truthful {
                    return Err(format!(
                        "instance {i} agent {a}: truthful {lib} vs brute force {truthful}"
                    ));
                }
                // The deviating value depends on which tied optimum the
                // engine returns, so the brute-force mechanism is checked
                // for truthfulness on its own instead of compared pointwise.
                let own = inst.agent_vertices(a);
                for mask in 1..1u64 << own.len() {
                    let hidden: Vec<usize> = own
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| mask >> j & 1 == 1)
                        .map(|(_, &v)| v)
                        .collect();
                    let oracle = brute_mix_deviation(inst, a, &hidden);
                    if oracle > truthful {
                        return Err(format!(
                            "instance {i} agent {a}: brute-force route gains by hiding {hidden:?}"
                        ));
                    }
                }
            }
        }
    }
    Ok(format!(
        "200 instances x {{mix, modified}}: max gain <= 0; {cross_checked} cross-checked by brute force"
    ))
}

fn criterion5() -> Outcome {
    let suite = small_suite();
    let mut worst = f64::NEG_INFINITY;
    for (i, inst) in suite.iter().enumerate() {
        let bound = rat(2 * LabelSeed::width_for(inst.agent_count()) as i64);
        let best = check_gain(inst, MechanismKind::Deterministic, &bound, i)?;
        worst = worst.max(best.gain.value());
    }
    Ok(format!("200 instances: largest gain {worst} within 2⌈log₂ m⌉"))
}

fn criterion6() -> Outcome {
    let two = rat(2);
    let mut suite = small_suite();
    suite.push(example1());
    let configs = [
        MechanismConfig::new(MechanismKind::Mix),
        MechanismConfig::new(MechanismKind::Modified),
        MechanismConfig::new(MechanismKind::Multilayer).with_layers(2),
        MechanismConfig::new(MechanismKind::Deterministic),
    ];
    let mut worst = rat(1);
    for (i, inst) in suite.iter().enumerate() {
        let opt = if inst.vertex_count() <= 14 {
            brute_force_matching(inst, &BruteObjective::Cardinality).unwrap().len()
        } else {
            max_matching(inst).len()
        };
        for c in &configs {
            let r = approx_ratio(inst, c).map_err(|e| format!("instance {i}: {e}"))?;
            if r.optimum_edges != opt {
                return Err(format!("instance {i}: optimum {} vs oracle {opt}", r.optimum_edges));
            }
            let exact = r
                .exact_ratio
                .ok_or(format!("instance {i} {}: expected size 0", c.kind))?;
            if exact > two {
                return Err(format!("instance {i} {}: ratio {exact}", c.kind));
            }
            worst = worst.max(exact);
        }
    }
    let tight = approx_ratio(&example1(), &configs[0]).map_err(|e| e.to_string())?;
    if tight.exact_ratio != Some(two) {
        return Err(format!("EX1 under mix: ratio {:?}", tight.exact_ratio));
    }
    Ok(format!(
        "201 instances x 4 configs: max ratio {worst}; EX1 under mix = 2"
    ))
}

fn criterion7() -> Outcome {
    for m in 2..=9usize {
        let b = LabelSeed::width_for(m);
        let labels: Vec<LabelVector> = LabelSeed::all(m).map(|s| labels_from_seed(m, &s).unwrap()).collect();
        for i in 1..=m {
            for j in i + 1..=m {
                let differ = labels.iter().filter(|l| l.label(i) != l.label(j)).count();
                if differ != 1 << (b - 1) {
                    return Err(format!("m={m}, agents {i},{j}: {differ} of {}", labels.len()));
                }
            }
        }
    }
    Ok("m = 2..9: every pair disagrees on exactly half the seeds".into())
}

fn criterion8() -> Outcome {
    let inst = gen_instance(&GeneratorSpec::figure1()).unwrap();
    let exact = |a: usize, kind: MechanismKind, hidden: &[usize]| {
        deviating_utility(&inst, a, &MechanismConfig::new(kind), hidden).map_err(|e| e.to_string())
    };
    let forced = |a: usize, hidden: &[usize], expect: &[(usize, usize)]| -> Result<(), String> {
        let sub = hide_vertices(&inst, a, hidden).unwrap();
        let opt = max_matching(&sub.instance).len();
        let mut all = Vec::new();
        let edges = sub.instance.edges().to_vec();
        for mask in 0..1u32 << edges.len() {
            let chosen: Vec<Edge> = (0..edges.len())
                .filter(|j| mask >> j & 1 == 1)
                .map(|j| edges[j])
                .collect();
            if let Ok(m) = Matching::new(&sub.instance, chosen) {
                if m.len() == opt {
                    all.push(sub.lift_matching(&m));
                }
            }
        }
        let want: Vec<Edge> = expect.iter().map(|&(u, v)| Edge::new(u, v)).collect();
        if all.len() != 1 || all[0].edges() != want.as_slice() {
            return Err(format!("hiding {hidden:?}: maximum matchings {all:?}"));
        }
        Ok(())
    };
    let b1 = MechanismKind::Baseline { against: 1 };
    let b2 = MechanismKind::Baseline { against: 2 };
    let (t1, d1) = (exact(1, b1, &[])?, exact(1, b1, &[5, 6])?);
    let (t2, d2) = (exact(2, b2, &[])?, exact(2, b2, &[2, 3])?);
    if (t1.clone(), d1.clone()) != (rat(2), rat(3)) || d2.clone() - t2.clone() < rat(1) {
        return Err(format!("baseline: agent 1 {t1} -> {d1}, agent 2 {t2} -> {d2}"));
    }
    forced(1, &[5, 6], &[(1, 2), (3, 4)])?;
    forced(2, &[2, 3], &[(4, 5), (6, 7)])?;
    for a in 1..=2 {
        let r = deviation_gain(&inst, a, &MechanismConfig::new(MechanismKind::Mix), 8).map_err(|e| e.to_string())?;
        if r.gain.exact().unwrap() > &rat(0) {
            return Err(format!("mix: agent {a} gains {} by hiding {:?}", r.gain, r.hidden));
        }
    }
    Ok(format!(
        "baseline: agent 1 {t1} -> {d1} hiding {{5,6}}, agent 2 {t2} -> {d2} hiding {{2,3}}; mix: no gain"
    ))
}

fn criterion9() -> Outcome {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(0x5eed_0009);
    for i in 0..500 {
        let m = rng.gen_range(1..=4);
        let n = rng.gen_range(m.max(2)..=12);
        let p = rng.gen_range(0.05..0.8);
        let inst = gen_instance(&GeneratorSpec::random(n, m, p, rng.gen())).unwrap();
        let brute = brute_force_matching(&inst, &BruteObjective::Cardinality).unwrap();
        if max_matching(&inst).len() != brute.len() {
            return Err(format!(
                "graph {i}: cardinality {} vs {}",
                max_matching(&inst).len(),
                brute.len()
            ));
        }
        let labels = LabelVector::new((0..m).map(|_| rng.gen()).collect());
        let fast = constrained_max_matching(&inst, &labels).unwrap();
        let slow = brute_force_matching(&inst, &BruteObjective::Tiered(labels.clone())).unwrap();
        let (a, b) = (
            MatchingObjective::of(&inst, &labels, &fast),
            MatchingObjective::of(&inst, &labels, &slow),
        );
        if a != b {
            return Err(format!("graph {i}: objective {a:?} vs {b:?}"));
        }
    }
    Ok("500 graphs: cardinalities and tiered objectives agree".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Option<Duration>); 9] = [
        (
            "1 three-agent exact distribution",
            criterion1,
            Some(Duration::from_secs(1)),
        ),
        ("2 balanced pair properties", criterion2, Some(Duration::from_secs(60))),
        ("3 multilayer variance", criterion3, Some(Duration::from_secs(300))),
        ("4 truthfulness (exact)", criterion4, Some(Duration::from_secs(600))),
        ("5 deterministic gain bound", criterion5, None),
        ("6 two-approximation", criterion6, None),
        ("7 pairwise independence", criterion7, Some(Duration::from_secs(1))),
        (
            "8 manipulable path self-certification",
            criterion8,
            Some(Duration::from_secs(10)),
        ),
        (
            "9 matching oracle equivalence",
            criterion9,
            Some(Duration::from_secs(120)),
        ),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, check, budget) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let mut outcome = check();
        let elapsed = start.elapsed();
        if let (Ok(msg), Some(limit)) = (&outcome, budget) {
            if elapsed > limit {
                outcome = Err(format!("{msg}; took {elapsed:.2?}, budget {limit:?}"));
            }
        }
        match outcome {
            Ok(msg) => println!("PASS criterion {name}: {msg} [{elapsed:.2?}]"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name}: {msg} [{elapsed:.2?}]");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
