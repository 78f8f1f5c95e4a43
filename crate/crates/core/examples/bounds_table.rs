//! Prints every bound that applies to a few (k, q) pairs.
//!
//!     cargo run --example bounds_table
//!     cargo run --example bounds_table -- 7 3

use debruijn_indep::bounds::bound_report;
use debruijn_indep::report::rational_string;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .map(|a| a.parse())
        .collect::<Result<_, _>>()?;
    let pairs = match args.as_slice() {
        [k, q] => vec![(*k as usize, *q as u32)],
        _ => vec![(3, 2), (4, 16), (5, 3), (9, 2), (11, 2)],
    };
    for (k, q) in pairs {
        println!("B({k},{q})");
        for e in bound_report(k, q)?.entries {
            println!(
                "  {:<22} {:>24}   {}",
                e.name,
                rational_string(&e.value),
                e.provenance
            );
        }
    }
    Ok(())
}
