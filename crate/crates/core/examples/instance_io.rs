//! Generate an instance, write it as KEX text, and read it back.
//!
//! ```bash
//! cargo run --example instance_io
//! ```

use kex::graph::{parse_instance, serialize_instance};
use kex::harness::{gen_instance, GeneratorSpec};

fn main() -> kex::Result<()> {
    let inst = gen_instance(&GeneratorSpec::random(10, 3, 0.3, 42))?;
    let text = serialize_instance(&inst);
    print!("{text}");

    // Comments, blank lines and unsorted edges are accepted on input.
    let messy = "# two agents on a path\nkex 1\nagents 2\nvertices 4\nowners 1 2 1 2\n\nedges 3\n4 3\n1 2\n2 3\n";
    let path = parse_instance(messy)?;
    println!("\ncanonical form:\n{}", serialize_instance(&path));

    match parse_instance("kex 1\nagents 1\nvertices 2\nowners 1 1\nedges 1\n2 2\n") {
        Ok(_) => unreachable!(),
        Err(e) => println!("rejected: {e}"),
    }
    assert_eq!(parse_instance(&text)?, inst);
    Ok(())
}
