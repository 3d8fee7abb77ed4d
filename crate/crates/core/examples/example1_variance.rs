//! The three-agent gadget where one-shot Mix-and-Match has variance n²/36,
//! and how one combination layer shrinks it.
//!
//! ```bash
//! cargo run --example example1_variance -- 24
//! ```

use kex::analysis::exact_distribution;
use kex::harness::{gen_instance, GeneratorSpec};
use kex::mechanisms::{MechanismConfig, MechanismKind};

fn main() -> kex::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(12);
    let inst = gen_instance(&GeneratorSpec::example1(n))?;

    for (name, config) in [
        ("mix-and-match", MechanismConfig::new(MechanismKind::Mix)),
        (
            "one layer",
            MechanismConfig::new(MechanismKind::Multilayer).with_layers(1),
        ),
        (
            "two layers",
            MechanismConfig::new(MechanismKind::Multilayer).with_layers(2),
        ),
    ] {
        let d = exact_distribution(&inst, &config)?;
        println!("{name:>14}: E[u_1] = {}, Var[u_1] = {}", d.mean(1), d.variance(1));
        for (u, p) in &d.agents[0] {
            println!("{:>18} u_1 = {u:>2} with probability {p}", "");
        }
    }
    println!("n²/36 = {}", (n * n) as f64 / 36.0);
    Ok(())
}
