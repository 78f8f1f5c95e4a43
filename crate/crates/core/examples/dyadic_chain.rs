//! Runs the lift-and-gadget chain up from q = 16.
//!
//!     cargo run --release --example dyadic_chain -- 6

use debruijn_indep::bounds::dyadic_lambda;
use debruijn_indep::dyadic::{propagate, PropagateOptions};
use debruijn_indep::report::rational_string;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let to: u32 = std::env::args().nth(1).map_or(Ok(6), |a| a.parse())?;
    let chain = propagate(
        to,
        PropagateOptions {
            audit: to <= 6,
            ..Default::default()
        },
    )?;
    for step in &chain.steps {
        println!(
            "m={} q=2^{} (a,b)=({},{}) N={} audited={}",
            step.m, step.m, step.params.a, step.params.b, step.n, step.audited
        );
    }
    println!("lambda = {}", rational_string(&dyadic_lambda(to)));
    Ok(())
}
