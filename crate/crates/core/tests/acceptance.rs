//! Acceptance suite: one PASS/FAIL line per criterion, exact comparisons
//! throughout. Run with `cargo test --test acceptance`.
//!
//! Criterion 6 contains one item that is known to be red: the difference-set
//! encoding of phase conflicts is sound but not complete, so its literal
//! equivalence with direct independence fails. The item is printed as FAIL
//! with counts and does not fail the exit code unless `ACCEPTANCE_STRICT=1`.

mod common;

use std::collections::HashSet;
use std::process::Command;
use std::time::{Duration, Instant};

use debruijn_indep::bounds::{binary_prime_upper, k4_upper_check, seven_cycle_check};
use debruijn_indep::certificate::{
    parse_certificate, verify_certificate, CertificateError, PhaseSystem,
};
use debruijn_indep::dyadic::dyadic_lift;
use debruijn_indep::prefix::{
    brute_force_m, degree_count, direct_count, exact_alpha, DEFAULT_MAX_VERTICES,
};
use debruijn_indep::words::count_orbits;
use debruijn_indep::{PrefixSet, Word};
use num_bigint::BigUint;
use num_rational::BigRational;
use rand::Rng;
use serde_json::Value;

const CERT11: &str = include_str!("../data/cert11.txt");

struct Outcome {
    passed: bool,
    detail: String,
    /// Sub-results printed under the criterion line.
    items: Vec<(String, bool, String)>,
    known_red: bool,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            passed: true,
            detail: String::new(),
            items: Vec::new(),
            known_red: false,
        }
    }

    fn item(&mut self, name: &str, ok: bool, detail: impl Into<String>) {
        self.passed &= ok;
        self.items.push((name.to_string(), ok, detail.into()));
    }

    fn expect(&mut self, name: &str, ok: bool) {
        self.item(name, ok, "");
    }
}

fn cli(args: &[&str]) -> (i32, Value, Duration) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_debruijn"))
        .arg("--format")
        .arg("json")
        .args(args)
        .output()
        .expect("binary runs");
    let elapsed = start.elapsed();
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap_or(-1), v, elapsed)
}

fn result(v: &Value, name: &str) -> Option<String> {
    v["results"]
        .as_array()?
        .iter()
        .find(|e| e["name"] == name)
        .and_then(|e| e["value"].as_str().map(str::to_string))
}

fn check_passed(v: &Value, name: &str) -> bool {
    v["checks"]
        .as_array()
        .is_some_and(|cs| cs.iter().any(|c| c["name"] == name && c["passed"] == true))
}

fn all_checks_passed(v: &Value) -> bool {
    v["checks"]
        .as_array()
        .is_some_and(|cs| !cs.is_empty() && cs.iter().all(|c| c["passed"] == true))
}

fn lines(v: &Value) -> Vec<String> {
    v["lines"]
        .as_array()
        .map(|a| {
            a.iter()
                .filter_map(|l| l.as_str().map(str::to_string))
                .collect()
        })
        .unwrap_or_default()
}

fn data(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn seed_verification() -> Outcome {
    let mut o = Outcome::new();
    let (code, v, t) = cli(&["seed", "verify"]);
    o.expect("exit 0", code == 0);
    o.item("N = 24849", result(&v, "N").as_deref() == Some("24849"), "");
    for name in [
        "I(8,8)", "O(8,8)", "I(14,14)", "O(14,14)", "O(14,8)", "I(14,8)",
    ] {
        o.expect(name, check_passed(&v, name));
    }
    for name in ["outgoing matrix", "incoming matrix", "contribution matrix"] {
        o.expect(name, check_passed(&v, name));
    }
    o.expect("row sums", check_passed(&v, "contribution row sums"));
    o.expect("H(8,14)", check_passed(&v, "hypothesis H(8,14)"));
    o.expect("all checks", all_checks_passed(&v));
    o.item(
        "runtime < 1 s",
        t < Duration::from_secs(1),
        format!("{t:.2?}"),
    );
    o.detail = "N=24849, spot degrees, degree matrices, row sums, H(8,14)".into();
    o
}

fn dyadic_chain() -> Outcome {
    let mut o = Outcome::new();
    let (code, v, t) = cli(&["dyadic", "propagate", "--to", "6"]);
    o.expect("exit 0", code == 0);
    o.expect(
        "N at m=5 = 397585",
        result(&v, "N_m5").as_deref() == Some("397585"),
    );
    o.expect(
        "N at m=6 = 6361361",
        result(&v, "N_m6").as_deref() == Some("6361361"),
    );
    for m in 4..=6 {
        o.expect(
            &format!("m={m} closed form"),
            check_passed(&v, &format!("m={m}: N = closed form")),
        );
        o.expect(
            &format!("m={m} hypothesis"),
            check_passed(&v, &format!("m={m}: hypothesis")),
        );
        o.expect(
            &format!("m={m} recount"),
            check_passed(&v, &format!("m={m}: direct recount")),
        );
    }
    o.item(
        "runtime < 2 min",
        t < Duration::from_secs(120),
        format!("{t:.2?}"),
    );
    o.detail = format!("N5=397585, N6=6361361 with full recounts ({t:.1?})");
    o
}

fn certificates() -> Outcome {
    let mut o = Outcome::new();
    for (file, k, sel, orbits) in [
        ("cert11.txt", 11, 931u32, 186),
        ("cert13.txt", 13, 3781, 630),
    ] {
        let (code, v, t) = cli(&["cert", "verify", "--file", &data(file)]);
        let want = format!("OK: k={k}, selected={sel}, nontrivial_orbits={orbits}");
        o.item(
            &format!("k={k} verifier"),
            code == 0 && lines(&v).contains(&want),
            want.clone(),
        );
        o.expect(
            &format!("k={k} meets binary prime bound"),
            binary_prime_upper(k).ok() == Some(BigUint::from(sel))
                && check_passed(&v, "selected = binary prime upper bound"),
        );
        o.item(
            &format!("k={k} runtime < 5 s"),
            t < Duration::from_secs(5),
            format!("{t:.2?}"),
        );
    }
    o.detail = "alpha(11,2)=931, alpha(13,2)=3781 certified".into();
    o
}

fn regeneration() -> Outcome {
    let mut o = Outcome::new();
    let alpha52 = exact_alpha(5, 2, false, DEFAULT_MAX_VERTICES)
        .map(|r| r.value)
        .ok();
    let formula7 = 3 * (128 - 2) / 7 + 1;
    for (k, want) in [(5, alpha52.unwrap_or(0)), (7, formula7)] {
        let ks = k.to_string();
        let (code, v, t) = cli(&["cert", "search", "--k", &ks]);
        let size = result(&v, "selected").and_then(|s| s.parse::<u64>().ok());
        o.item(
            &format!("k={k} size {want}, verifier accepts"),
            code == 0 && size == Some(want) && check_passed(&v, "verifier accepts"),
            format!("{:?}", lines(&v).first()),
        );
        o.item(
            &format!("k={k} runtime < 10 s"),
            t < Duration::from_secs(10),
            format!("{t:.2?}"),
        );
    }
    o.expect("alpha(5,2) = 13", alpha52 == Some(13));
    // k=11 under the default budget: not part of the pass condition
    let (_, v, t) = cli(&["cert", "search", "--k", "11"]);
    let nodes = result(&v, "nodes").unwrap_or_default();
    let note = match result(&v, "selected") {
        Some(s) => format!("k=11 found, selected={s}, {nodes} nodes, {t:.2?}"),
        None => format!("k=11 budget exhausted after {nodes} nodes (not a correctness failure)"),
    };
    o.items
        .push(("k=11 (informational)".into(), true, note.clone()));
    o.detail = format!("sizes 13 and 55 regenerated; {note}");
    o
}

fn oracle_equalities() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    for (k, q) in [(2, 2), (2, 3), (2, 4), (3, 2), (4, 2)] {
        let m = brute_force_m(k, q).map(|r| r.0).ok();
        let a = exact_alpha(k, q, true, DEFAULT_MAX_VERTICES)
            .map(|r| r.value)
            .ok();
        o.item(
            &format!("M({k},{q}) = alpha_loop"),
            m.is_some() && m == a,
            format!("{m:?} {a:?}"),
        );
    }
    let goldens = [
        (2, 2, false, 2),
        (2, 2, true, 1),
        (2, 3, false, 3),
        (2, 3, true, 2),
        (2, 4, false, 4),
        (3, 2, false, 3),
        (3, 2, true, 2),
        (5, 2, false, 13),
    ];
    for (k, q, loops, want) in goldens {
        let got = exact_alpha(k, q, loops, DEFAULT_MAX_VERTICES)
            .map(|r| r.value)
            .ok();
        let reference = common::mis_size(k, q as u8, loops) as u64;
        let name = if loops { "alpha_loop" } else { "alpha" };
        o.item(
            &format!("{name}({k},{q}) = {want}"),
            got == Some(want) && reference == want,
            format!("{got:?}, reference search {reference}"),
        );
    }
    let t = start.elapsed();
    o.item(
        "runtime < 1 min",
        t < Duration::from_secs(60),
        format!("{t:.2?}"),
    );
    o.detail = "brute-force M equals alpha_loop on 5 shapes; 8 goldens".into();
    o
}

fn random_set(rng: &mut impl Rng, k: usize, q: u32) -> PrefixSet {
    let p: f64 = rng.gen_range(0.0..=1.0);
    PrefixSet::from_predicate(k, q, |_| rng.gen_bool(p)).unwrap()
}

struct EncodingTally {
    phase_pairs: usize,
    clashing: usize,
    flagged: usize,
    exact_mismatch: usize,
    unsound: usize,
}

fn encoding_tally(k: usize) -> EncodingTally {
    let zero = Word::constant(k, 2, 0).unwrap();
    let sys = PhaseSystem::new(k, &zero).unwrap();
    let sel = |rep: &Word, t: usize| -> Vec<Vec<u8>> {
        (1..k - 1)
            .step_by(2)
            .map(|a| (0..k).map(|i| rep.digits()[(i + t + a) % k]).collect())
            .collect()
    };
    let mut tally = EncodingTally {
        phase_pairs: 0,
        clashing: 0,
        flagged: 0,
        exact_mismatch: 0,
        unsound: 0,
    };
    let n = sys.orbits.len();
    for i in 0..n {
        for t in 0..k {
            let direct = sel(&sys.orbits[i].rep, t)
                .iter()
                .any(|v| common::adjacent(zero.digits(), v));
            tally.exact_mismatch += (sys.loop_forbidden[i].contains(t) != direct) as usize;
        }
        for j in (0..n).filter(|&j| j != i) {
            let pair = sys.pairs.get(&(i, j));
            for t in 0..k {
                let xs = sel(&sys.orbits[i].rep, t);
                for t2 in 0..k {
                    let ys = sel(&sys.orbits[j].rep, t2);
                    let direct = xs.iter().any(|x| ys.iter().any(|y| common::adjacent(x, y)));
                    let exact = pair.is_some_and(|p| p.clashes[t].contains(t2));
                    let by_f = pair.is_some_and(|p| p.forbidden.contains((t2 + k - t) % k));
                    tally.phase_pairs += 1;
                    tally.clashing += direct as usize;
                    tally.flagged += by_f as usize;
                    tally.exact_mismatch += (exact != direct) as usize;
                    tally.unsound += (direct && !by_f) as usize;
                }
            }
        }
    }
    tally
}

fn property_suites() -> (Outcome, Outcome) {
    let mut o = Outcome::new();
    let start = Instant::now();
    let mut rng = common::rng(0xacce);

    // (a) and (c)
    let mut k4_sets = Vec::new();
    let mut agree = true;
    for (k, q) in [(3, 2), (3, 3), (4, 2), (4, 3)] {
        for _ in 0..128 {
            let s = random_set(&mut rng, k, q);
            let reference = common::count_n_direct(k, q as u8, &common::member_digits(&s)) as u128;
            agree &= degree_count(&s) == reference && direct_count(&s) == reference;
            if k == 4 {
                k4_sets.push(s);
            }
        }
    }
    o.item(
        "6a degree formula = direct scan",
        agree,
        "128 random sets per shape",
    );

    // (b)
    let rep = seven_cycle_check();
    let mut worst = i32::MIN;
    for mask in 0u32..128 {
        let y = |i: usize| (mask >> (i % 7)) & 1;
        let lhs: u32 = (0..7).map(|i| y(i) * (1 - y(i + 1))).sum();
        let rhs: u32 = 1 + (0..7).map(|i| y(i) * (1 - y(i + 3))).sum::<u32>();
        worst = worst.max(lhs as i32 - rhs as i32);
    }
    o.item(
        "6b seven-cycle inequality",
        rep.passed && rep.tuples_checked == 128 && worst <= 0 && rep.max_excess == worst,
        format!("max excess {worst}"),
    );

    // (c)
    let cap = BigRational::new(11.into(), 28.into());
    let k4_ok = k4_sets.iter().all(|s| {
        k4_upper_check(s).is_ok_and(|r| {
            let rho = s.rho();
            let bound = &rho * (BigRational::from_integer(1.into()) - &rho)
                + BigRational::new(1.into(), 7.into());
            r.passed() && r.bound == bound && r.lambda <= bound && r.lambda <= cap
        })
    });
    o.item("6c k=4 bound", k4_ok, format!("{} sets", k4_sets.len()));

    // (d)
    let lift_ok = k4_sets
        .iter()
        .chain(
            &(0..32)
                .map(|_| random_set(&mut rng, 4, 4))
                .collect::<Vec<_>>(),
        )
        .all(|s| dyadic_lift(s).is_ok_and(|l| direct_count(&l) == 16 * direct_count(s)));
    o.item("6d lift multiplies N by 16", lift_ok, "");

    // (e)
    let mut e = Outcome::new();
    let mut literal_holds = true;
    let mut literal_detail = Vec::new();
    for k in [5, 7] {
        let t = encoding_tally(k);
        e.item(
            &format!("6e k={k} exact conflict relation = direct independence"),
            t.exact_mismatch == 0,
            format!("{} phase pairs, {} clash", t.phase_pairs, t.clashing),
        );
        e.item(
            &format!("6e k={k} difference-set conditions sound"),
            t.unsound == 0,
            "phase differences outside F never clash",
        );
        let spurious = t.flagged - t.clashing;
        literal_holds &= spurious == 0;
        literal_detail.push(format!(
            "k={k}: {} of {} phase pairs flagged by F are independent",
            spurious, t.flagged
        ));
    }
    let cert = parse_certificate(CERT11).unwrap();
    let sys = PhaseSystem::new(11, &cert.include).unwrap();
    let hits = sys
        .difference_set_hits(&cert.assignment())
        .map(|h| h.len())
        .unwrap_or(0);
    literal_detail.push(format!(
        "the valid k=11 certificate violates condition (ii) on {hits} ordered pairs"
    ));
    e.items.push((
        "6e literal difference-set equivalence [KNOWN RED]".into(),
        literal_holds,
        literal_detail.join("; "),
    ));
    e.known_red = !literal_holds;
    for item in e.items.drain(..) {
        o.items.push(item);
    }
    o.passed &= e.passed;

    // (f)
    let mut eta_ok = true;
    let mut shapes = 0;
    for q in 2u32..=1000 {
        for k in 1usize.. {
            let Some(size) = (q as u64).checked_pow(k as u32).filter(|&s| s <= 1_000_000) else {
                break;
            };
            let Ok(table) = count_orbits(k, q) else {
                eta_ok = false;
                break;
            };
            eta_ok &= table.weighted_total() == BigUint::from(size);
            if size <= 200_000 || q <= 4 {
                let hist = common::orbit_size_histogram(k, q);
                let got: Vec<(usize, u64)> = table
                    .counts
                    .iter()
                    .filter(|(_, n)| **n > BigUint::from(0u8))
                    .map(|(s, n)| (*s, n.try_into().unwrap_or(u64::MAX)))
                    .collect();
                eta_ok &= got == hist.into_iter().collect::<Vec<_>>();
            }
            shapes += 1;
        }
    }
    o.item(
        "6f necklace identity and grouping",
        eta_ok,
        format!("{shapes} shapes with q^k <= 10^6"),
    );

    let t = start.elapsed();
    o.item(
        "runtime < 5 min",
        t < Duration::from_secs(300),
        format!("{t:.2?}"),
    );
    o.detail = "6a-6f".into();
    (o, e)
}

fn negative_tests() -> Outcome {
    let mut o = Outcome::new();
    let verify =
        |text: &str| parse_certificate(text).and_then(|c| verify_certificate(&c).map(|_| ()));
    o.expect("unmutated certificate verifies", verify(CERT11).is_ok());

    // phase 9 on 0^10 1 selects 1 0^10, a neighbour of the loop vertex
    let phase = CERT11.replacen("00000000001:0 ", "00000000001:9 ", 1);
    let r = verify(&phase);
    o.item(
        "altered phase",
        matches!(r, Err(CertificateError::AdjacentSelected(..))),
        format!("{r:?}"),
    );

    let rotated = CERT11.replacen("00000000011:0", "00000000110:10", 1);
    let r = verify(&rotated);
    o.item(
        "non-canonical representative",
        matches!(r, Err(CertificateError::NotCanonical(_))),
        format!("{r:?}"),
    );

    let dup = CERT11.replacen("00000000011:0", "00000000001:0", 1);
    let r = verify(&dup);
    o.item(
        "duplicated orbit",
        matches!(r, Err(CertificateError::DuplicateRepresentative(_))),
        format!("{r:?}"),
    );

    let target = CERT11.replacen("target_size=931", "target_size=930", 1);
    let r = verify(&target);
    o.item(
        "wrong target size",
        matches!(r, Err(CertificateError::WrongSize { .. })),
        format!("{r:?}"),
    );

    let ones = CERT11.replacen("include=00000000000", "include=11111111111", 1);
    let r = verify(&ones);
    o.item(
        "selected 1^k",
        matches!(r, Err(CertificateError::ExcludedSelected(_))),
        format!("{r:?}"),
    );

    let mutated: HashSet<&str> = [
        phase.as_str(),
        rotated.as_str(),
        dup.as_str(),
        target.as_str(),
        ones.as_str(),
    ]
    .into_iter()
    .collect();
    o.expect(
        "five distinct mutants",
        mutated.len() == 5 && !mutated.contains(CERT11),
    );
    o.detail = "five mutation classes rejected with their named errors".into();
    o
}

fn main() {
    let strict = std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    let (props, encoding) = property_suites();
    let criteria: Vec<(&str, Outcome)> = vec![
        ("seed verification", seed_verification()),
        ("dyadic chain", dyadic_chain()),
        ("certificates", certificates()),
        ("independent regeneration", regeneration()),
        ("oracle equalities", oracle_equalities()),
        ("property suites", props),
        ("negative tests", negative_tests()),
    ];

    let mut unexpected = 0;
    for (i, (name, o)) in criteria.iter().enumerate() {
        let n = i + 1;
        // criterion 6 is red only through its known item
        let known_red_only = n == 6
            && encoding.known_red
            && o.items
                .iter()
                .all(|(m, ok, _)| *ok || m.contains("KNOWN RED"));
        let passed = o.passed && !(n == 6 && encoding.known_red);
        let tag = if passed { "PASS" } else { "FAIL" };
        let note = if known_red_only {
            " (known red, see README)"
        } else {
            ""
        };
        println!("{tag} criterion {n}: {name}: {}{note}", o.detail);
        for (item, ok, detail) in &o.items {
            let mark = if *ok { "ok  " } else { "FAIL" };
            if detail.is_empty() {
                println!("    {mark} {item}");
            } else {
                println!("    {mark} {item}: {detail}");
            }
        }
        if !passed && !(known_red_only && !strict) {
            unexpected += 1;
        }
    }
    if !encoding.known_red {
        println!("note: the known-red item now passes; update the suite");
        unexpected += 1;
    }
    if unexpected > 0 {
        println!("{unexpected} criterion(s) failed");
        std::process::exit(1);
    }
}
