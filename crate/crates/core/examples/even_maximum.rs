//! The prefix set whose words have their first maximum at an even position.
//! Its count matches a closed form for every odd k.
//!
//!     cargo run --release --example even_maximum

use debruijn_indep::bounds::{build_s_ev, closed_form_nev, upper_u};
use debruijn_indep::prefix::count_n;
use debruijn_indep::report::rational_string;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for q in [2, 3, 4] {
        for k in [3, 5, 7, 9] {
            let s = build_s_ev(k, q)?;
            let c = count_n(&s)?;
            assert_eq!(c.n, closed_form_nev(k, q)?);
            println!(
                "k={k} q={q}: N={} lambda={} (U_k = {})",
                c.n,
                rational_string(&c.lambda),
                rational_string(&upper_u(k, q)?)
            );
        }
    }
    Ok(())
}
