//! Searches for a phase certificate of `B(k, 2)` and checks it.
//!
//!     cargo run --release --example search_certificate -- 11 20000000
//!     cargo run --release --example search_certificate -- 7 1000 forward

use std::time::Instant;

use debruijn_indep::certificate::{
    search_phases, verify_certificate, Propagation, SearchOptions, SearchOutcome,
};
use debruijn_indep::Word;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let k: usize = args.next().map_or(Ok(7), |a| a.parse())?;
    let budget: u64 = args.next().map_or(Ok(2_000_000), |a| a.parse())?;

    let start = Instant::now();
    let zero = Word::constant(k, 2, 0)?;
    let opts = SearchOptions {
        node_budget: budget,
        propagation: match args.next().as_deref() {
            Some("forward") => Propagation::ForwardChecking,
            _ => Propagation::ArcConsistency,
        },
        ..SearchOptions::default()
    };
    match search_phases(k, &zero, opts)? {
        SearchOutcome::Found { certificate, nodes } => {
            let report = verify_certificate(&certificate)?;
            println!("{}", report.summary_line());
            println!("nodes={nodes} elapsed={:?}", start.elapsed());
            if k <= 7 {
                print!("{}", certificate.emit());
            }
        }
        SearchOutcome::Unsat { nodes } => {
            println!("no certificate exists for 0^{k} ({nodes} nodes)")
        }
        SearchOutcome::BudgetExhausted { nodes } => {
            println!(
                "budget of {nodes} nodes exhausted after {:?}",
                start.elapsed()
            )
        }
    }
    Ok(())
}
