//! Exhaustive check of the seven-cycle inequality and the resulting k = 4
//! bound on a few structured prefix sets.

use debruijn_indep::bounds::{k4_upper_check, seven_cycle_check};
use debruijn_indep::report::rational_string;
use debruijn_indep::PrefixSet;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rep = seven_cycle_check();
    println!(
        "{} tuples, max excess {}, {} tight, passed={}",
        rep.tuples_checked,
        rep.max_excess,
        rep.tight.len(),
        rep.passed
    );

    let q = 4;
    let sets = [
        (
            "first digit < second",
            PrefixSet::from_predicate(4, q, |p| p[0] < p[1])?,
        ),
        (
            "ascending then any",
            PrefixSet::from_predicate(4, q, |p| p[0] < p[1] && p[1] >= p[2])?,
        ),
        (
            "half alphabet first",
            PrefixSet::from_predicate(4, q, |p| p[0] < 2)?,
        ),
    ];
    for (name, s) in &sets {
        let r = k4_upper_check(s)?;
        println!(
            "{name}: lambda={} rho={} bound={} ok={}",
            rational_string(&r.lambda),
            rational_string(&r.rho),
            rational_string(&r.bound),
            r.passed()
        );
    }
    Ok(())
}
