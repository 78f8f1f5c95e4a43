//! Words over the alphabet `[q] = {0, …, q-1}`, cyclic rotations, de Bruijn
//! adjacency and rotation orbits (necklaces).
//!
//! Positions are 0-based throughout: digit 0 is the first (most significant)
//! digit of a word. The "prefix" of a word is its first `k-1` digits and the
//! "suffix" its last `k-1` digits.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Largest supported alphabet. Digits are stored as `u8`.
pub const MAX_Q: u32 = 256;

/// Largest word length accepted by the divisor/Möbius machinery.
pub const MAX_NECKLACE_K: usize = 64;

const DIGIT_CHARS: &[u8; 16] = b"0123456789abcdef";

/// `q^k` if it fits in a `u64`.
pub fn checked_pow(q: u32, k: usize) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..k {
        acc = acc.checked_mul(q as u64)?;
    }
    Some(acc)
}

/// A word of length `k` over `[q]`, the vertex type of `B(k, q)`.
///
/// Ordering is lexicographic on digits, which coincides with rank order for
/// words of the same shape.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    digits: Vec<u8>,
    q: u32,
}

impl Word {
    pub fn new(digits: Vec<u8>, q: u32) -> Result<Self> {
        if !(2..=MAX_Q).contains(&q) {
            return Err(Error::InvalidParameter(format!(
                "alphabet size {q} outside [2, {MAX_Q}]"
            )));
        }
        if digits.is_empty() {
            return Err(Error::InvalidWord("empty word".into()));
        }
        if let Some(&d) = digits.iter().find(|&&d| d as u32 >= q) {
            return Err(Error::InvalidWord(format!("digit {d} not below q={q}")));
        }
        if checked_pow(q, digits.len()).is_none() {
            return Err(Error::InvalidWord(format!(
                "q^k does not fit in 64 bits (k={}, q={q})",
                digits.len()
            )));
        }
        Ok(Word { digits, q })
    }

    /// The constant word `a^k`.
    pub fn constant(k: usize, q: u32, a: u8) -> Result<Self> {
        Word::new(vec![a; k], q)
    }

    /// Parses a word written with the characters `0-9a-f`.
    pub fn parse(text: &str, q: u32) -> Result<Self> {
        let digits = text
            .bytes()
            .map(|c| match DIGIT_CHARS.iter().position(|&d| d == c) {
                Some(d) => Ok(d as u8),
                None => Err(Error::InvalidWord(format!(
                    "bad digit character {:?} in {text:?}",
                    c as char
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Word::new(digits, q)
    }

    pub fn k(&self) -> usize {
        self.digits.len()
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn is_constant(&self) -> bool {
        self.digits.iter().all(|&d| d == self.digits[0])
    }

    /// Number of non-zero digits.
    pub fn weight(&self) -> usize {
        self.digits.iter().filter(|&&d| d != 0).count()
    }

    /// Mixed-radix value with digit 0 most significant.
    pub fn rank(&self) -> u64 {
        self.digits
            .iter()
            .fold(0u64, |acc, &d| acc * self.q as u64 + d as u64)
    }

    pub fn unrank(rank: u64, k: usize, q: u32) -> Result<Self> {
        let size = checked_pow(q, k).ok_or_else(|| {
            Error::InvalidParameter(format!("q^k does not fit in 64 bits (k={k}, q={q})"))
        })?;
        if rank >= size {
            return Err(Error::RankOutOfRange { rank, k, q });
        }
        let mut digits = vec![0u8; k];
        let mut r = rank;
        for slot in digits.iter_mut().rev() {
            *slot = (r % q as u64) as u8;
            r /= q as u64;
        }
        Word::new(digits, q)
    }

    /// Left rotation by `s` places: digit `i` of the result is digit
    /// `(i + s) mod k` of `self`. Negative `s` rotates right.
    pub fn rotate_left(&self, s: i64) -> Word {
        let k = self.k() as i64;
        let shift = s.rem_euclid(k) as usize;
        let mut digits = self.digits.clone();
        digits.rotate_left(shift);
        Word { digits, q: self.q }
    }

    /// Lexicographically least rotation.
    pub fn canonical_rotation(&self) -> Word {
        let mut best = self.digits.clone();
        let mut cur = self.digits.clone();
        for _ in 1..self.k() {
            cur.rotate_left(1);
            if cur < best {
                best.clone_from(&cur);
            }
        }
        Word {
            digits: best,
            q: self.q,
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical_rotation() == *self
    }

    /// All `v` with `suffix(self) = prefix(v)` or `suffix(v) = prefix(self)`.
    ///
    /// A word is its own neighbour only when it is constant; with
    /// `include_loops == false` it is always removed.
    pub fn neighbors(&self, include_loops: bool) -> BTreeSet<Word> {
        let k = self.k();
        let mut out = BTreeSet::new();
        for y in 0..self.q as u8 {
            let mut succ = Vec::with_capacity(k);
            succ.extend_from_slice(&self.digits[1..]);
            succ.push(y);
            out.insert(Word {
                digits: succ,
                q: self.q,
            });
            let mut pred = Vec::with_capacity(k);
            pred.push(y);
            pred.extend_from_slice(&self.digits[..k - 1]);
            out.insert(Word {
                digits: pred,
                q: self.q,
            });
        }
        if !include_loops {
            out.remove(self);
        }
        out
    }

    /// Whether `self` and `other` are joined by an arc in either direction.
    /// A constant word is adjacent to itself.
    pub fn is_adjacent(&self, other: &Word) -> bool {
        let k = self.k();
        self.digits[1..] == other.digits[..k - 1] || other.digits[1..] == self.digits[..k - 1]
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &d in &self.digits {
            if (d as usize) < DIGIT_CHARS.len() {
                write!(f, "{}", DIGIT_CHARS[d as usize] as char)?;
            } else {
                write!(f, "({d})")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self}; q={})", self.q)
    }
}

/// Shape of `[q]^k` with rank-level helpers used by the enumeration kernels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Shape {
    pub k: usize,
    pub q: u32,
    /// `q^k`.
    pub size: u64,
}

impl Shape {
    pub fn new(k: usize, q: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("word length must be >= 1".into()));
        }
        if !(2..=MAX_Q).contains(&q) {
            return Err(Error::InvalidParameter(format!(
                "alphabet size {q} outside [2, {MAX_Q}]"
            )));
        }
        let size = checked_pow(q, k).ok_or_else(|| {
            Error::InstanceTooLarge(format!("q^k does not fit in 64 bits (k={k}, q={q})"))
        })?;
        Ok(Shape { k, q, size })
    }

    /// Rank of the first `k-1` digits.
    #[inline]
    pub fn prefix_rank(&self, rank: u64) -> u64 {
        rank / self.q as u64
    }

    /// Rank of the last `k-1` digits.
    #[inline]
    pub fn suffix_rank(&self, rank: u64) -> u64 {
        rank % (self.size / self.q as u64)
    }

    /// Ranks adjacent to `rank` (successors then predecessors), possibly with
    /// repeats and possibly including `rank` itself.
    pub fn neighbor_ranks(&self, rank: u64) -> impl Iterator<Item = u64> + '_ {
        let q = self.q as u64;
        let high = self.size / q;
        let succ_base = self.suffix_rank(rank) * q;
        let pred_base = self.prefix_rank(rank);
        (0..q)
            .map(move |y| succ_base + y)
            .chain((0..q).map(move |y| y * high + pred_base))
    }

    /// Whether `rank` encodes a constant word.
    pub fn is_constant_rank(&self, rank: u64) -> bool {
        let q = self.q as u64;
        let last = rank % q;
        // a^k = a * (q^k - 1) / (q - 1)
        rank == last * ((self.size - 1) / (q - 1))
    }
}

/// A cyclic-rotation equivalence class.
///
/// `members[i]` is the left rotation of the representative by `i` places;
/// certificate phases index into exactly this order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub rep: Word,
    pub members: Vec<Word>,
}

impl Orbit {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn weight(&self) -> usize {
        self.rep.weight()
    }

    /// Position of `w` in the member list.
    pub fn index_of(&self, w: &Word) -> Option<usize> {
        self.members.iter().position(|m| m == w)
    }
}

pub fn orbit_of(w: &Word) -> Orbit {
    let rep = w.canonical_rotation();
    let mut members = vec![rep.clone()];
    let mut cur = rep.rotate_left(1);
    while cur != rep {
        members.push(cur.clone());
        cur = cur.rotate_left(1);
    }
    Orbit { rep, members }
}

/// Number of rotation orbits of each size `s | k` in `[q]^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NecklaceTable {
    pub k: usize,
    pub q: u32,
    pub counts: BTreeMap<usize, BigUint>,
}

impl NecklaceTable {
    /// `Σ_{s|k} s·η_s(q)`, which must equal `q^k`.
    pub fn weighted_total(&self) -> BigUint {
        self.counts.iter().map(|(&s, c)| c * BigUint::from(s)).sum()
    }

    pub fn get(&self, s: usize) -> Option<&BigUint> {
        self.counts.get(&s)
    }
}

pub fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Least prime factor of `n >= 2`, by trial division.
pub fn least_prime_factor(n: usize) -> usize {
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            return p;
        }
        p += 1;
    }
    n
}

pub fn is_prime(n: usize) -> bool {
    n >= 2 && least_prime_factor(n) == n
}

/// Möbius function by trial division.
pub fn mobius(mut n: usize) -> i32 {
    assert!(n >= 1);
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// `η_s(q) = (1/s) Σ_{d|s} μ(d) q^{s/d}` for every divisor `s` of `k`.
pub fn count_orbits(k: usize, q: u32) -> Result<NecklaceTable> {
    if !(1..=MAX_NECKLACE_K).contains(&k) {
        return Err(Error::InvalidParameter(format!(
            "word length {k} outside [1, {MAX_NECKLACE_K}]"
        )));
    }
    if q < 2 {
        return Err(Error::InvalidParameter(format!("alphabet size {q} < 2")));
    }
    let mut counts = BTreeMap::new();
    for s in divisors(k) {
        let mut primitive = BigInt::zero();
        for d in divisors(s) {
            let mu = mobius(d);
            if mu != 0 {
                primitive += BigInt::from(mu) * BigInt::from(q).pow((s / d) as u32);
            }
        }
        let s_big = BigInt::from(s);
        if !(&primitive % &s_big).is_zero() || primitive.is_negative() {
            return Err(Error::Identity(format!(
                "primitive word count {primitive} not a non-negative multiple of {s}"
            )));
        }
        let eta = (primitive / s_big).to_biguint().expect("non-negative");
        counts.insert(s, eta);
    }
    Ok(NecklaceTable { k, q, counts })
}

/// Upper limit on `q^k` for [`list_nontrivial_orbits`].
pub const ORBIT_LIST_LIMIT: u64 = 1 << 24;

/// One orbit per non-constant rotation class, ordered by weight and then by
/// representative.
pub fn list_nontrivial_orbits(k: usize, q: u32) -> Result<Vec<Orbit>> {
    let shape = Shape::new(k, q)?;
    if shape.size > ORBIT_LIST_LIMIT {
        return Err(Error::InstanceTooLarge(format!(
            "q^k = {} exceeds orbit listing limit {ORBIT_LIST_LIMIT}",
            shape.size
        )));
    }
    let mut orbits = Vec::new();
    for r in 0..shape.size {
        if shape.is_constant_rank(r) {
            continue;
        }
        let w = Word::unrank(r, k, q)?;
        if w.is_canonical() {
            orbits.push(orbit_of(&w));
        }
    }
    orbits.sort_by(|a, b| a.weight().cmp(&b.weight()).then_with(|| a.rep.cmp(&b.rep)));
    Ok(orbits)
}
