//! Re-split two matchings so every agent's utilities differ by at most two.
//!
//! ```bash
//! cargo run --example balanced_pair
//! ```

use kex::combiner::{balanced_pair, build_contraction, color_odd, orient_even};
use kex::graph::{decompose_components, symmetric_difference, utilities, ComponentKind};
use kex::harness::{gen_instance, GeneratorSpec};
use kex::matching::{constrained_max_matching, max_matching, LabelVector};
use kex::{Edge, Matching};

fn main() -> kex::Result<()> {
    // Five edges between agents 1 and 2, all in M1: five odd paths on the
    // same pair of agents.
    let owners = (0..10).map(|v| v % 2 + 1).collect();
    let edges: Vec<Edge> = (0..5).map(|j| Edge::new(2 * j + 1, 2 * j + 2)).collect();
    let inst = kex::Instance::new(2, owners, edges.clone())?;
    let m1 = Matching::new(&inst, edges)?;
    let m2 = Matching::empty();
    let pair = balanced_pair(&inst, &m1, &m2)?;
    println!("M1 {m1}  M2 {m2}");
    println!("N1 {}  u = {:?}", pair.n1, utilities(&inst, &pair.n1));
    println!("N2 {}  u = {:?}", pair.n2, utilities(&inst, &pair.n2));

    // The intermediate contraction graphs on a random instance.
    let inst = gen_instance(&GeneratorSpec::random(16, 4, 0.2, 14))?;
    let m1 = max_matching(&inst);
    let m2 = constrained_max_matching(&inst, &LabelVector::from_bits(4, 0b0101))?;
    let components = decompose_components(&inst, &symmetric_difference(&inst, &m1, &m2)?)?;
    let of_kind = |k| components.iter().filter(|c| c.kind == k).cloned().collect::<Vec<_>>();
    let even = build_contraction(&inst, &of_kind(ComponentKind::EvenPath), ComponentKind::EvenPath)?;
    let odd = build_contraction(&inst, &of_kind(ComponentKind::OddPath), ComponentKind::OddPath)?;
    println!("\neven contraction graph (from to path kind):\n{}", even.dump());
    println!("orientation: {:?}", orient_even(&even));
    println!("odd contraction graph:\n{}", odd.dump());
    println!("colors: {:?}", color_odd(&odd));

    let pair = balanced_pair(&inst, &m1, &m2)?;
    println!(
        "\nu(M1) = {:?}, u(M2) = {:?}",
        utilities(&inst, &m1),
        utilities(&inst, &m2)
    );
    println!(
        "u(N1) = {:?}, u(N2) = {:?}",
        utilities(&inst, &pair.n1),
        utilities(&inst, &pair.n2)
    );
    Ok(())
}
