//! Checks a phase certificate file, by default both bundled ones.
//!
//!     cargo run --example verify_certificate -- my_cert.txt

use debruijn_indep::certificate::{parse_certificate, verify_certificate};

const BUNDLED: [(&str, &str); 2] = [
    ("cert11.txt", include_str!("../data/cert11.txt")),
    ("cert13.txt", include_str!("../data/cert13.txt")),
];

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let files: Vec<(String, String)> = match std::env::args().nth(1) {
        Some(path) => vec![(path.clone(), std::fs::read_to_string(&path)?)],
        None => BUNDLED
            .iter()
            .map(|(n, t)| (n.to_string(), t.to_string()))
            .collect(),
    };
    for (name, text) in files {
        let cert = parse_certificate(&text)?;
        match verify_certificate(&cert) {
            Ok(report) => println!("{name}: {}", report.summary_line()),
            Err(e) => println!("{name}: FAIL: {e}"),
        }
    }
    Ok(())
}
