//! Closed-form bounds on independence numbers and the checks that certify
//! them.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::prefix::{count_n, PrefixSet};
use crate::words::{count_orbits, is_prime, least_prime_factor};

/// Word lengths for which the prime-length closed form is proven.
pub const PROVEN_PRIME_LENGTHS: [usize; 5] = [3, 5, 7, 11, 13];

fn require_odd(k: usize) -> Result<()> {
    if k < 3 || k.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "requires odd k >= 3, got {k}"
        )));
    }
    Ok(())
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// `U_k(q) = ½ Σ_{s|k} (s-1) η_s(q)`, an upper bound on the looped
/// independence number for odd `k`: each rotation orbit of odd size `s` is an
/// odd cycle and holds at most `(s-1)/2` independent vertices.
pub fn upper_u(k: usize, q: u32) -> Result<BigRational> {
    require_odd(k)?;
    let table = count_orbits(k, q)?;
    let twice: BigUint = table
        .counts
        .iter()
        .map(|(&s, eta)| eta * BigUint::from(s - 1))
        .sum();
    Ok(BigRational::new(BigInt::from(twice), BigInt::from(2)))
}

/// 1 for prime `k`; otherwise `k/p` with `p` the least prime factor, which is
/// the largest proper divisor.
pub fn delta(k: usize) -> Result<usize> {
    require_odd(k)?;
    Ok(if is_prime(k) {
        1
    } else {
        k / least_prime_factor(k)
    })
}

/// `(k-1)(q^k - q)/(2k) + 1` and `(k-1)(q^k - q)/(2k)`: the simple and looped
/// independence numbers for the proven prime lengths.
pub fn prime_formula_alpha(k: usize, q: u32) -> Result<(BigUint, BigUint)> {
    if !PROVEN_PRIME_LENGTHS.contains(&k) {
        return Err(Error::InvalidParameter(format!(
            "closed form is only established for k in {PROVEN_PRIME_LENGTHS:?}, got {k}"
        )));
    }
    if q < 2 {
        return Err(Error::InvalidParameter(format!("alphabet size {q} < 2")));
    }
    let qk = BigUint::from(q).pow(k as u32);
    let num = BigUint::from(k - 1) * (qk - BigUint::from(q));
    let (looped, rem) = num.div_rem(&BigUint::from(2 * k));
    if !rem.is_zero() {
        return Err(Error::Identity(format!(
            "(k-1)(q^k-q) not divisible by 2k for k={k}, q={q}"
        )));
    }
    Ok((&looped + BigUint::one(), looped))
}

/// `1 + (k-1)/(2k) (2^k - 2)` for an odd prime `k`.
pub fn binary_prime_upper(k: usize) -> Result<BigUint> {
    if k < 3 || !is_prime(k) {
        return Err(Error::InvalidParameter(format!(
            "requires an odd prime k, got {k}"
        )));
    }
    let num = BigUint::from(k - 1) * (BigUint::from(2u32).pow(k as u32) - BigUint::from(2u32));
    let (quot, rem) = num.div_rem(&BigUint::from(2 * k));
    debug_assert!(rem.is_zero());
    Ok(quot + BigUint::one())
}

/// Exhaustive check of `Σ y_i(1-y_{i+1}) <= 1 + Σ y_i(1-y_{i+3})` over all
/// binary 7-tuples, indices mod 7.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SevenCycleReport {
    pub tuples_checked: usize,
    pub passed: bool,
    /// Largest value of `lhs - rhs` over all tuples; at most 0 when the
    /// inequality holds.
    pub max_excess: i32,
    /// Tuples (bit `i` = `y_i`) where the two sides are equal.
    pub tight: Vec<u8>,
}

/// `#{i ∈ B : i + step ∉ B}` for `B ⊆ Z/7` given as a bitmask.
pub fn cyclic_exits(mask: u8, step: usize) -> i32 {
    (0..7)
        .filter(|&i| mask >> i & 1 == 1 && mask >> ((i + step) % 7) & 1 == 0)
        .count() as i32
}

pub fn seven_cycle_check() -> SevenCycleReport {
    let mut max_excess = i32::MIN;
    let mut tight = Vec::new();
    for mask in 0u8..128 {
        let excess = cyclic_exits(mask, 1) - (1 + cyclic_exits(mask, 3));
        max_excess = max_excess.max(excess);
        if excess == 0 {
            tight.push(mask);
        }
    }
    SevenCycleReport {
        tuples_checked: 128,
        passed: max_excess <= 0,
        max_excess,
        tight,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct K4UpperReport {
    pub lambda: BigRational,
    pub rho: BigRational,
    /// `ρ(1-ρ) + 1/7`.
    pub bound: BigRational,
    pub within_bound: bool,
    pub within_11_28: bool,
}

impl K4UpperReport {
    pub fn passed(&self) -> bool {
        self.within_bound && self.within_11_28
    }
}

/// Verifies `Λ(S) <= ρ(S)(1-ρ(S)) + 1/7 <= 11/28` exactly for a `k = 4` set.
pub fn k4_upper_check(s: &PrefixSet) -> Result<K4UpperReport> {
    if s.k() != 4 {
        return Err(Error::InvalidParameter(format!(
            "seven-cycle bound applies to k = 4, got k = {}",
            s.k()
        )));
    }
    let report = count_n(s)?;
    let rho = report.rho;
    let bound = &rho * (BigRational::one() - &rho) + ratio(1, 7);
    Ok(K4UpperReport {
        within_bound: report.lambda <= bound,
        within_11_28: report.lambda <= ratio(11, 28),
        lambda: report.lambda,
        rho,
        bound,
    })
}

/// Tuples `(u_1, …, u_{k-1})` whose maximum first occurs at an even position.
///
/// Positions are 1-based here: `u_1` is position 1, so the qualifying
/// positions are 2, 4, …, k-1 (0-based indices 1, 3, …).
pub fn build_s_ev(k: usize, q: u32) -> Result<PrefixSet> {
    require_odd(k)?;
    PrefixSet::from_predicate(k, q, |u| {
        let max = *u.iter().max().expect("non-empty");
        let first = u.iter().position(|&d| d == max).expect("max present");
        (first + 1) % 2 == 0
    })
}

/// `Σ_{t even in [2, k-1]} Σ_{M=0}^{q-1} M^{t-1} (M+1)^{k-t}`.
pub fn closed_form_nev(k: usize, q: u32) -> Result<BigUint> {
    require_odd(k)?;
    let mut total = BigUint::zero();
    for t in (2..k).step_by(2) {
        for m in 0..q {
            total +=
                BigUint::from(m).pow((t - 1) as u32) * BigUint::from(m + 1).pow((k - t) as u32);
        }
    }
    Ok(total)
}

/// Rational bounds on the asymptotic coefficient for `k = 4`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lambda3Rails {
    pub lower: BigRational,
    pub upper: BigRational,
}

pub fn lambda3_rails() -> Lambda3Rails {
    Lambda3Rails {
        lower: ratio(91, 240),
        upper: ratio(11, 28),
    }
}

/// `91/240 - 1/(15 q^4)` with `q = 2^m`: the density reached by the dyadic
/// construction at scale `2^m`.
pub fn dyadic_lambda(m: u32) -> BigRational {
    let q4 = BigInt::from(16u32).pow(m);
    ratio(91, 240) - BigRational::new(BigInt::one(), BigInt::from(15) * q4)
}

/// One named bound with where it comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundEntry {
    pub name: &'static str,
    pub value: BigRational,
    pub provenance: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub k: usize,
    pub q: u32,
    pub entries: Vec<BoundEntry>,
}

/// Every bound that applies to `(k, q)`.
pub fn bound_report(k: usize, q: u32) -> Result<BoundReport> {
    if k == 0 || q < 2 {
        return Err(Error::InvalidParameter(format!(
            "need k >= 1 and q >= 2, got k={k}, q={q}"
        )));
    }
    let mut entries = Vec::new();
    let int = |x: BigUint| BigRational::from_integer(BigInt::from(x));
    let qf = BigInt::from(q);

    if k == 4 {
        let q4 = BigRational::from_integer(qf.pow(4));
        let loop_upper = (&q4 * ratio(11, 28)).floor();
        entries.push(BoundEntry {
            name: "loop_upper",
            value: loop_upper.clone(),
            provenance: "seven-cycle inequality: N(S) <= 11/28 q^4",
        });
        entries.push(BoundEntry {
            name: "simple_upper",
            value: loop_upper + BigRational::from_integer(qf.clone()),
            provenance: "seven-cycle inequality plus one per constant word",
        });
        if q.is_power_of_two() && q >= 16 {
            let m = q.trailing_zeros();
            entries.push(BoundEntry {
                name: "lower_witness_N",
                value: int(crate::dyadic::closed_form_n4(m)?),
                provenance: "dyadic lift-and-gadget construction from the q=16 seed",
            });
        }
    }
    if k >= 3 && k % 2 == 1 {
        let u = upper_u(k, q)?;
        entries.push(BoundEntry {
            name: "loop_upper",
            value: u.clone(),
            provenance: "necklace bound U_k(q): odd rotation cycles",
        });
        entries.push(BoundEntry {
            name: "simple_upper",
            value: u + BigRational::from_integer(qf.clone()),
            provenance: "necklace bound plus one per constant word",
        });
        entries.push(BoundEntry {
            name: "delta",
            value: BigRational::from_integer(BigInt::from(delta(k)?)),
            provenance: "order of the necklace error term",
        });
        entries.push(BoundEntry {
            name: "lower_witness_N",
            value: int(closed_form_nev(k, q)?),
            provenance: "first-maximum-at-even-position construction",
        });
        if is_prime(k) {
            let (simple, looped) = odd_prime_upper(k, q);
            entries.push(BoundEntry {
                name: "prime_simple_upper",
                value: int(simple),
                provenance: "odd prime length bound (k-1)(q^k-q)/(2k) + 1",
            });
            entries.push(BoundEntry {
                name: "prime_loop_upper",
                value: int(looped),
                provenance: "odd prime length bound (k-1)(q^k-q)/(2k)",
            });
        }
        if PROVEN_PRIME_LENGTHS.contains(&k) {
            let (simple, looped) = prime_formula_alpha(k, q)?;
            entries.push(BoundEntry {
                name: "alpha",
                value: int(simple),
                provenance: "exact prime-length formula (binary certificate plus lifting)",
            });
            entries.push(BoundEntry {
                name: "alpha_loop",
                value: int(looped),
                provenance: "exact prime-length formula (binary certificate plus lifting)",
            });
        }
        if q == 2 && is_prime(k) {
            entries.push(BoundEntry {
                name: "binary_prime_upper",
                value: int(binary_prime_upper(k)?),
                provenance: "binary prime bound 1 + (k-1)/(2k) (2^k - 2)",
            });
        }
    }
    Ok(BoundReport { k, q, entries })
}

/// `(k-1)(q^k-q)/(2k) + 1` and `(k-1)(q^k-q)/(2k)` for any odd prime `k`.
pub fn odd_prime_upper(k: usize, q: u32) -> (BigUint, BigUint) {
    let qk = BigUint::from(q).pow(k as u32);
    let looped = BigUint::from(k - 1) * (qk - BigUint::from(q)) / BigUint::from(2 * k);
    (&looped + BigUint::one(), looped)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Word;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn upper_u_values() {
        // η_1 = 2, η_5 = 6 → ½(0·2 + 4·6)
        assert_eq!(upper_u(5, 2).unwrap(), ratio(12, 1));
        assert_eq!(upper_u(11, 2).unwrap(), ratio(930, 1));
        assert!(upper_u(4, 2).is_err());
    }

    #[test]
    fn delta_values() {
        assert_eq!(delta(11).unwrap(), 1);
        assert_eq!(delta(9).unwrap(), 3);
        assert_eq!(delta(15).unwrap(), 5);
        assert_eq!(delta(25).unwrap(), 5);
        assert!(delta(8).is_err());
    }

    #[test]
    fn prime_formulas() {
        assert_eq!(prime_formula_alpha(11, 2).unwrap().0, big(931));
        assert_eq!(prime_formula_alpha(13, 2).unwrap().0, big(3781));
        assert_eq!(prime_formula_alpha(3, 2).unwrap(), (big(3), big(2)));
        assert!(prime_formula_alpha(17, 2).is_err());
        assert!(prime_formula_alpha(9, 2).is_err());
    }

    #[test]
    fn binary_prime_values() {
        assert_eq!(binary_prime_upper(11).unwrap(), big(931));
        assert_eq!(binary_prime_upper(13).unwrap(), big(3781));
        assert_eq!(binary_prime_upper(5).unwrap(), big(13));
        assert!(binary_prime_upper(9).is_err());
    }

    #[test]
    fn binary_prime_upper_two_routes() {
        for k in [3usize, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
            let eta = count_orbits(k, 2).unwrap().counts[&k].clone();
            assert_eq!(
                binary_prime_upper(k).unwrap(),
                BigUint::one() + eta * BigUint::from((k - 1) / 2)
            );
        }
    }

    #[test]
    fn seven_cycle() {
        let r = seven_cycle_check();
        assert!(r.passed);
        assert_eq!(r.tuples_checked, 128);
        assert_eq!(cyclic_exits(0, 1), 0);
        assert_eq!(cyclic_exits(0x7f, 1), 0);
        let b = 0b0010101; // {0, 2, 4}
        assert_eq!(cyclic_exits(b, 1), 3);
        assert_eq!(cyclic_exits(b, 3), 2);
        assert!(r.tight.contains(&b));
        assert!(!r.tight.contains(&0) && !r.tight.contains(&0x7f));
    }

    #[test]
    fn k4_upper_trivial() {
        let r = k4_upper_check(&PrefixSet::empty(4, 3).unwrap()).unwrap();
        assert_eq!(r.lambda, ratio(0, 1));
        assert_eq!(r.bound, ratio(1, 7));
        assert!(r.passed());
        assert!(k4_upper_check(&PrefixSet::empty(3, 3).unwrap()).is_err());
    }

    #[test]
    fn s_ev_small() {
        let s = build_s_ev(3, 2).unwrap();
        assert_eq!(s.members(), vec![Word::parse("01", 2).unwrap()]);
        assert_eq!(count_n(&s).unwrap().n, big(2));
        assert_eq!(closed_form_nev(3, 2).unwrap(), big(2));
        assert_eq!(
            count_n(&build_s_ev(5, 2).unwrap()).unwrap().n,
            closed_form_nev(5, 2).unwrap()
        );
    }

    #[test]
    fn nev_at_k3_matches_looped_formula() {
        for q in 2..=6u32 {
            let expected = (q.pow(3) - q) / 3;
            assert_eq!(closed_form_nev(3, q).unwrap(), big(expected as u64));
        }
    }

    #[test]
    fn rails() {
        let r = lambda3_rails();
        assert_eq!(r.lower, ratio(91, 240));
        assert_eq!(r.upper, ratio(11, 28));
        assert!(r.lower > ratio(3, 8));
        assert!(r.upper < ratio(2, 5));
        assert_eq!(
            dyadic_lambda(4),
            BigRational::new(24849.into(), 65536.into())
        );
    }

    #[test]
    fn report_lists_provenance() {
        let r = bound_report(11, 2).unwrap();
        let names: Vec<&str> = r.entries.iter().map(|e| e.name).collect();
        assert!(names.contains(&"binary_prime_upper"));
        assert!(names.contains(&"alpha"));
        assert!(r.entries.iter().all(|e| !e.provenance.is_empty()));
        let r = bound_report(4, 16).unwrap();
        assert!(r
            .entries
            .iter()
            .any(|e| e.name == "lower_witness_N" && e.value == ratio(24849, 1)));
    }
}
