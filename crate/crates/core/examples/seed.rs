//! Loads the q = 16 seed table and re-derives its degree tables and count.
//!
//!     cargo run --example seed
//!     cargo run --example seed -- path/to/seed16.txt

use debruijn_indep::dyadic::{verify_seed, SeedTable};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let table = match std::env::args().nth(1) {
        Some(path) => SeedTable::from_text(&std::fs::read_to_string(path)?)?,
        None => SeedTable::embedded(),
    };
    let v = verify_seed(&table)?;
    for c in v.checks() {
        println!(
            "{} {}: {}",
            if c.passed { "ok  " } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    println!("N = {}", v.n);
    Ok(())
}
