//! The deterministic layered mechanism: welfare and deviation gains.
//!
//! ```bash
//! cargo run --release --example deterministic
//! ```

use kex::analysis::deviation_gain;
use kex::graph::utilities;
use kex::harness::{gen_instance, GeneratorSpec};
use kex::mechanisms::{deterministic_mechanism, modified_mix_and_match, LabelSeed, MechanismConfig, MechanismKind};

fn main() -> kex::Result<()> {
    let inst = gen_instance(&GeneratorSpec::random(14, 4, 0.3, 3))?;
    let layer0: Vec<usize> = LabelSeed::all(4)
        .map(|s| modified_mix_and_match(&inst, &s).map(|m| m.len()))
        .collect::<kex::Result<_>>()?;
    let out = deterministic_mechanism(&inst)?;
    println!("layer-0 sizes {layer0:?}, output size {}", out.len());
    println!("output {out}, utilities {:?}", utilities(&inst, &out));

    let bound = 2 * LabelSeed::width_for(inst.agent_count());
    for agent in 1..=inst.agent_count() {
        let r = deviation_gain(&inst, agent, &MechanismConfig::new(MechanismKind::Deterministic), 10)?;
        println!(
            "agent {agent}: best deviation {:?} gains {} (bound {bound})",
            r.hidden, r.gain
        );
    }
    Ok(())
}
