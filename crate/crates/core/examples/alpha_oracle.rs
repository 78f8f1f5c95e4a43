//! Exact independence numbers of small de Bruijn graphs, with and without
//! self-loops, next to the best prefix-set count M(k,q).
//!
//!     cargo run --release --example alpha_oracle

use debruijn_indep::prefix::{brute_force_m, exact_alpha, DEFAULT_MAX_VERTICES};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!(
        "{:>2} {:>2} {:>6} {:>10} {:>6}",
        "k", "q", "alpha", "alpha_loop", "M"
    );
    for (k, q) in [
        (2, 2),
        (2, 3),
        (3, 2),
        (3, 3),
        (4, 2),
        (5, 2),
        (3, 4),
        (4, 3),
    ] {
        let simple = exact_alpha(k, q, false, DEFAULT_MAX_VERTICES)?;
        let looped = exact_alpha(k, q, true, DEFAULT_MAX_VERTICES)?;
        // 2^(q^(k-1)) prefix sets; skip the ones that would take too long
        let m = if q.pow(k as u32 - 1) <= 20 {
            brute_force_m(k, q)?.0.to_string()
        } else {
            "-".to_string()
        };
        println!(
            "{k:>2} {q:>2} {:>6} {:>10} {m:>6}",
            simple.value, looped.value
        );
    }
    Ok(())
}
