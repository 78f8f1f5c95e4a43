mod common;

use debruijn_indep::dyadic::{
    apply_gadget, check_hypothesis, closed_form_n4, dyadic_lift, gadget_sites, propagate, seed_s16,
    GadgetParams, PropagateOptions, SeedTable, SEED_N,
};
use debruijn_indep::prefix::{degree_count, direct_count};
use debruijn_indep::{Error, PrefixSet};
use num_bigint::BigUint;
use rand::Rng;

fn cell(q: u32, c: [u32; 3]) -> u64 {
    ((c[0] as u64 * q as u64) + c[1] as u64) * q as u64 + c[2] as u64
}

fn hypothesis_error(s: &PrefixSet, p: GadgetParams) -> i64 {
    let h = check_hypothesis(s, p).unwrap();
    let m = h
        .memberships
        .iter()
        .filter(|m| m.expected != m.actual)
        .count() as i64;
    m * 100
        + h.sums
            .iter()
            .map(|d| (d.value - d.expected).abs())
            .sum::<i64>()
}

/// Random set over `[q]^3` satisfying the hypothesis at `(a, b)`, found by
/// greedy toggling of the cells that enter the four degree sums.
fn random_instance(rng: &mut impl Rng, q: u32) -> Option<(PrefixSet, GadgetParams)> {
    let a = rng.gen_range(0..q);
    let b = (a + rng.gen_range(1..q)) % q;
    let p = GadgetParams::new(a, b, q).unwrap();
    let density = rng.gen_range(0.2..0.8);
    let mut s = PrefixSet::from_predicate(4, q, |_| rng.gen_bool(density)).unwrap();
    let pinned = [[a, a, a], [b, b, a], [b, a, a], [b, b, b]];
    for (c, v) in pinned.iter().zip([true, true, false, false]) {
        s.set_rank(cell(q, *c), v);
    }
    let mut free: Vec<u64> = (0..q)
        .flat_map(|r| {
            [
                [r, a, a],
                [a, a, r],
                [r, b, b],
                [b, b, r],
                [b, a, r],
                [r, b, a],
            ]
        })
        .filter(|c| !pinned.contains(c))
        .map(|c| cell(q, c))
        .collect();
    free.sort();
    free.dedup();
    let mut err = hypothesis_error(&s, p);
    for _ in 0..4000 {
        if err == 0 {
            return Some((s, p));
        }
        let r = free[rng.gen_range(0..free.len())];
        s.set_rank(r, !s.contains_rank(r));
        let e = hypothesis_error(&s, p);
        if e <= err {
            err = e;
        } else {
            s.set_rank(r, !s.contains_rank(r));
        }
    }
    None
}

#[test]
fn gadget_adds_one_and_hypothesis_propagates() {
    let mut rng = common::rng(7);
    for q in [4u32, 8] {
        let mut found = 0;
        for _ in 0..60 {
            let Some((s, p)) = random_instance(&mut rng, q) else {
                continue;
            };
            found += 1;
            assert!(check_hypothesis(&s, p).unwrap().passed());
            let lifted = dyadic_lift(&s).unwrap();
            assert_eq!(direct_count(&lifted), 16 * direct_count(&s));
            let t = apply_gadget(&lifted, p).unwrap();
            assert_eq!(direct_count(&t), 16 * direct_count(&s) + 1);
            let next = check_hypothesis(&t, p.next()).unwrap();
            assert!(next.passed(), "q={q} {p:?}: {:?}", next.first_failure());
        }
        assert!(found >= 30, "only {found} instances at q={q}");
    }
}

#[test]
fn gadget_site_states_are_checked() {
    let s = seed_s16();
    let p = GadgetParams::new(8, 14, 16).unwrap();
    let mut lifted = dyadic_lift(&s).unwrap();
    let site = gadget_sites(p)[3];
    assert_eq!(site.name, "M1");
    lifted.set_rank(cell(32, site.cell), false);
    assert!(matches!(
        apply_gadget(&lifted, p),
        Err(Error::GadgetSite { site: "M1", .. })
    ));
}

#[test]
fn seed_hypothesis_and_wrong_parameters() {
    let s = seed_s16();
    assert_eq!(degree_count(&s), SEED_N as u128);
    assert!(check_hypothesis(&s, GadgetParams::new(8, 14, 16).unwrap())
        .unwrap()
        .passed());
    assert!(!check_hypothesis(&s, GadgetParams::new(14, 8, 16).unwrap())
        .unwrap()
        .passed());
    assert!(GadgetParams::new(3, 3, 16).is_err());
    assert!(GadgetParams::new(3, 16, 16).is_err());
}

#[test]
fn chain_to_m5_with_audits() {
    let chain = propagate(
        5,
        PropagateOptions {
            audit: true,
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(chain.n, BigUint::from(397_585u32));
    assert_eq!(chain.steps.len(), 2);
    assert!(chain.steps.iter().all(|s| s.audited && s.hypothesis));
    assert_eq!(
        (chain.params.a, chain.params.b, chain.params.q),
        (17, 29, 32)
    );
}

#[test]
fn chain_guards() {
    assert!(propagate(3, PropagateOptions::default()).is_err());
    let opts = PropagateOptions {
        audit: false,
        max_m: 5,
    };
    assert!(propagate(6, opts).is_err());
}

#[test]
fn closed_form_values() {
    let want = [24849u64, 397585, 6361361, 101781777];
    for (m, w) in (4..).zip(want) {
        assert_eq!(closed_form_n4(m).unwrap(), BigUint::from(w));
    }
    for m in 4..40 {
        let n = closed_form_n4(m).unwrap();
        assert_eq!(closed_form_n4(m + 1).unwrap(), n * 16u32 + 1u32);
    }
}

#[test]
fn seed_table_text() {
    let t = SeedTable::embedded();
    assert_eq!(SeedTable::from_text(&t.to_text()).unwrap(), t);
    let text = t.to_text();
    let broken = text.replacen("A=", "Z=", 1);
    assert!(SeedTable::from_text(&broken).is_err());
    let short: String = text
        .lines()
        .take(text.lines().count() - 1)
        .collect::<Vec<_>>()
        .join("\n");
    assert!(SeedTable::from_text(&short).is_err());
}
