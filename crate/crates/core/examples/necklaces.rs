//! Orbit counts of the rotation action, checked against a full enumeration.

use std::collections::BTreeMap;

use debruijn_indep::words::{count_orbits, orbit_of, Shape};
use debruijn_indep::Word;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (k, q) = (6, 3);
    let table = count_orbits(k, q)?;
    let shape = Shape::new(k, q)?;
    let mut seen = BTreeMap::<usize, u64>::new();
    for r in 0..shape.size {
        let w = Word::unrank(r, k, q)?;
        if w.is_canonical() {
            *seen.entry(orbit_of(&w).size()).or_default() += 1;
        }
    }
    for (s, eta) in &table.counts {
        println!(
            "size {s}: {eta} orbits (enumerated {})",
            seen.get(s).copied().unwrap_or(0)
        );
    }
    println!("sum s*eta_s = {} = {q}^{k}", table.weighted_total());
    Ok(())
}
