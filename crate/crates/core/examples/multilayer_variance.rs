//! Monte Carlo utility variance of F^k as the number of layers grows.
//!
//! ```bash
//! cargo run --release --example multilayer_variance -- 20000
//! ```

use kex::analysis::estimate_moments;
use kex::harness::{gen_instance, GeneratorSpec};
use kex::mechanisms::{default_layers, MechanismConfig, MechanismKind};

fn main() -> kex::Result<()> {
    let trials: u64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(20_000);
    let inst = gen_instance(&GeneratorSpec::example1(12))?;
    println!("default k for n = 12, ε = 0.5: {}", default_layers(12, 0.5));
    println!("{:>3} {:>10} {:>10} {:>10}", "k", "E[u_1]", "Var[u_1]", "se");
    for k in [0, 1, 2, 4, 6, 9] {
        let config = MechanismConfig::new(MechanismKind::Multilayer).with_layers(k);
        let r = estimate_moments(&inst, &config, trials, 2024)?;
        let a = r.agents[0];
        println!(
            "{k:>3} {:>10.4} {:>10.4} {:>10.4}",
            a.mean,
            a.variance.unwrap_or(f64::NAN),
            a.se_var.unwrap_or(0.0)
        );
    }
    Ok(())
}
