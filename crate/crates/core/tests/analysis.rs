use kex::analysis::{approx_ratio, approx_ratio_sampled, deviation_gain_sampled, estimate_moments, exact_distribution};
use kex::harness::{gen_instance, GeneratorSpec};
use kex::mechanisms::{MechanismConfig, MechanismKind};
use num_traits::ToPrimitive;

#[test]
fn sampled_moments_agree_with_exact() {
    let cases = [
        gen_instance(&GeneratorSpec::example1(12)).unwrap(),
        gen_instance(&GeneratorSpec::random(10, 3, 0.4, 21)).unwrap(),
        gen_instance(&GeneratorSpec::figure1()).unwrap(),
    ];
    for inst in &cases {
        for config in [
            MechanismConfig::new(MechanismKind::Mix),
            MechanismConfig::new(MechanismKind::Modified),
            MechanismConfig::new(MechanismKind::Multilayer).with_layers(2),
        ] {
            let exact = exact_distribution(inst, &config).unwrap();
            let sampled = estimate_moments(inst, &config, 20_000, 99).unwrap();
            for (a, s) in sampled.agents.iter().enumerate() {
                let mean = exact.mean(a + 1).to_f64().unwrap();
                let var = exact.variance(a + 1).to_f64().unwrap();
                assert!(
                    (s.mean - mean).abs() <= 3.0 * s.se_mean.unwrap() + 1e-12,
                    "{} agent {}",
                    config.kind,
                    a + 1
                );
                assert!((s.variance.unwrap() - var).abs() <= 3.0 * s.se_var.unwrap() + 1e-12);
            }
        }
    }
}

#[test]
fn example1_sampled_mean() {
    let inst = gen_instance(&GeneratorSpec::example1(12)).unwrap();
    let r = estimate_moments(&inst, &MechanismConfig::new(MechanismKind::Mix), 100_000, 7).unwrap();
    let s = r.agents[0];
    assert!((s.mean - 2.0).abs() <= 3.0 * s.se_mean.unwrap());
    let one = estimate_moments(&inst, &MechanismConfig::new(MechanismKind::Mix), 1, 7).unwrap();
    assert_eq!(one.agents[0].variance, None);
}

#[test]
fn sampled_deviation_finds_figure1_gain() {
    let inst = gen_instance(&GeneratorSpec::figure1()).unwrap();
    let config = MechanismConfig::new(MechanismKind::Baseline { against: 1 });
    let r = deviation_gain_sampled(&inst, 1, &config, 8, 50, 1).unwrap();
    assert_eq!(r.gain.value(), 1.0);
    let mix = deviation_gain_sampled(&inst, 1, &MechanismConfig::new(MechanismKind::Mix), 8, 4_000, 1).unwrap();
    assert!(mix.gain.value() <= 3.0 * mix.gain.standard_error());
}

#[test]
fn sampled_ratio_brackets_exact() {
    let inst = gen_instance(&GeneratorSpec::random(12, 3, 0.3, 8)).unwrap();
    let config = MechanismConfig::new(MechanismKind::Mix);
    let exact = approx_ratio(&inst, &config).unwrap();
    let sampled = approx_ratio_sampled(&inst, &config, 20_000, 3).unwrap();
    assert_eq!(exact.optimum_edges, sampled.optimum_edges);
    assert!((exact.ratio - sampled.ratio).abs() <= 3.0 * sampled.ratio_se.unwrap());
}
