//! On the 7-vertex path, a maximum-matching mechanism rewards hiding
//! vertices. Mix-and-Match does not.
//!
//! ```bash
//! cargo run --example figure1_deviation
//! ```

use kex::analysis::{deviating_utility, deviation_gain};
use kex::harness::{gen_instance, GeneratorSpec};
use kex::mechanisms::{MechanismConfig, MechanismKind};

fn main() -> kex::Result<()> {
    let inst = gen_instance(&GeneratorSpec::figure1())?;
    println!("owners: {:?}", inst.owners());

    for (agent, hidden) in [(1, vec![5, 6]), (2, vec![2, 3])] {
        let baseline = MechanismConfig::new(MechanismKind::Baseline { against: agent });
        let truthful = deviating_utility(&inst, agent, &baseline, &[])?;
        let hiding = deviating_utility(&inst, agent, &baseline, &hidden)?;
        println!("baseline, agent {agent}: truthful {truthful}, hiding {hidden:?} gives {hiding}");
    }

    for kind in [MechanismKind::Mix, MechanismKind::Modified] {
        for agent in 1..=2 {
            let r = deviation_gain(&inst, agent, &MechanismConfig::new(kind), 8)?;
            println!(
                "{kind:>8}, agent {agent}: truthful {}, best deviation {:?} gains {}",
                r.truthful, r.hidden, r.gain
            );
        }
    }
    Ok(())
}
