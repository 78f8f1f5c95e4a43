//! Counts N(S) for a prefix-set file, or for a random set when no file is
//! given, and cross-checks the degree formula against a direct scan.
//!
//!     cargo run --example prefix_count -- set.txt

use debruijn_indep::prefix::{
    count_n, degree_count, direct_count, is_independent, materialize_independent_set,
};
use debruijn_indep::report::rational_string;
use debruijn_indep::PrefixSet;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let s = match std::env::args().nth(1) {
        Some(path) => PrefixSet::from_text(&std::fs::read_to_string(path)?)?,
        None => {
            // a fixed pseudo-random set so the output is reproducible
            let mut state = 0x9e37_79b9_u32;
            PrefixSet::from_predicate(4, 5, |_| {
                state ^= state << 13;
                state ^= state >> 17;
                state ^= state << 5;
                state % 5 < 2
            })?
        }
    };
    let c = count_n(&s)?;
    println!("k={} q={} |S|={}", s.k(), s.q(), s.len());
    println!(
        "N = {} (lambda {}, rho {})",
        c.n,
        rational_string(&c.lambda),
        rational_string(&c.rho)
    );
    println!(
        "degree formula {} / direct scan {}",
        degree_count(&s),
        direct_count(&s)
    );

    let j = materialize_independent_set(&s);
    println!(
        "J(S): {} words, independent with loops: {}",
        j.len(),
        is_independent(&j, true)?.is_independent()
    );
    if s.cells() <= 256 {
        print!("{}", s.to_text());
    }
    Ok(())
}
