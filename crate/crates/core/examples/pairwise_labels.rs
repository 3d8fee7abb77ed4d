//! Labels from ⌈log₂ m⌉ seed bits: every pair of agents disagrees on
//! exactly half of the seeds.
//!
//! ```bash
//! cargo run --example pairwise_labels -- 6
//! ```

use kex::mechanisms::{labels_from_seed, LabelSeed};

fn main() -> kex::Result<()> {
    let m: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(5);
    println!("m = {m}, seed width {}", LabelSeed::width_for(m));
    let all: Vec<_> = LabelSeed::all(m)
        .map(|s| labels_from_seed(m, &s))
        .collect::<kex::Result<_>>()?;
    for (s, labels) in LabelSeed::all(m).zip(&all) {
        let bits: String = labels.as_slice().iter().map(|&b| if b { '1' } else { '0' }).collect();
        println!("seed {:0w$b}: {bits}", s.bits(), w = s.width().max(1) as usize);
    }
    for i in 1..=m {
        let row: Vec<usize> = (1..=m)
            .map(|j| all.iter().filter(|l| l.label(i) != l.label(j)).count())
            .collect();
        println!("agent {i} disagreements {row:?}");
    }
    Ok(())
}
