//! Prefix sets `S ⊆ [q]^{k-1}` and the independent sets they encode.
//!
//! A prefix set selects every word of length `k` whose first `k-1` digits lie
//! in `S` and whose last `k-1` digits do not. Such a selection is always
//! independent in `B(k, q)` with loops retained, and every loop-model
//! independent set is contained in one, so the maximum of the count `N(S)`
//! over all `S` is the looped independence number.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mis::Graph;
use crate::words::{orbit_of, Shape, Word};

/// Largest indicator length a [`PrefixSet`] may allocate.
pub const MAX_PREFIX_CELLS: u64 = 1 << 31;

/// Default size above which `count_n` skips the direct word scan.
pub const DEFAULT_AUDIT_THRESHOLD: u64 = 10_000_000;

/// Default vertex guard for [`exact_alpha`].
pub const DEFAULT_MAX_VERTICES: u64 = 4096;

/// Largest `q^{k-1}` accepted by [`brute_force_m`].
pub const BRUTE_FORCE_MAX_CELLS: u64 = 24;

/// A subset of `[q]^{k-1}`, stored as a packed indicator indexed by rank.
#[derive(Clone, PartialEq, Eq)]
pub struct PrefixSet {
    k: usize,
    q: u32,
    cells: u64,
    bits: Vec<u64>,
}

impl std::fmt::Debug for PrefixSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "PrefixSet {{ k: {}, q: {}, len: {} }}",
            self.k,
            self.q,
            self.len()
        )
    }
}

impl PrefixSet {
    /// The empty prefix set for the ambient graph `B(k, q)`, `k >= 2`.
    pub fn empty(k: usize, q: u32) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidParameter(format!(
                "prefix sets need k >= 2, got {k}"
            )));
        }
        let shape = Shape::new(k, q)?;
        let cells = shape.size / q as u64;
        if cells > MAX_PREFIX_CELLS {
            return Err(Error::InstanceTooLarge(format!(
                "q^(k-1) = {cells} cells exceeds {MAX_PREFIX_CELLS}"
            )));
        }
        Ok(PrefixSet {
            k,
            q,
            cells,
            bits: vec![0; cells.div_ceil(64) as usize],
        })
    }

    pub fn full(k: usize, q: u32) -> Result<Self> {
        let mut s = PrefixSet::empty(k, q)?;
        for r in 0..s.cells {
            s.insert_rank(r);
        }
        Ok(s)
    }

    /// Builds the set of `(k-1)`-digit tuples satisfying `pred`.
    pub fn from_predicate(k: usize, q: u32, mut pred: impl FnMut(&[u8]) -> bool) -> Result<Self> {
        let mut s = PrefixSet::empty(k, q)?;
        let mut digits = vec![0u8; k - 1];
        for r in 0..s.cells {
            if pred(&digits) {
                s.insert_rank(r);
            }
            // odometer increment, last digit fastest
            for d in digits.iter_mut().rev() {
                *d += 1;
                if (*d as u32) < q {
                    break;
                }
                *d = 0;
            }
        }
        Ok(s)
    }

    pub fn from_words<'a>(
        k: usize,
        q: u32,
        words: impl IntoIterator<Item = &'a Word>,
    ) -> Result<Self> {
        let mut s = PrefixSet::empty(k, q)?;
        for w in words {
            s.check_member_shape(w)?;
            s.insert_rank(w.rank());
        }
        Ok(s)
    }

    fn check_member_shape(&self, w: &Word) -> Result<()> {
        if w.k() != self.k - 1 || w.q() != self.q {
            return Err(Error::MixedShape {
                k: self.k - 1,
                q: self.q,
                found_k: w.k(),
                found_q: w.q(),
            });
        }
        Ok(())
    }

    /// Word length of the ambient graph; members have length `k - 1`.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// `q^{k-1}`.
    pub fn cells(&self) -> u64 {
        self.cells
    }

    #[inline]
    pub fn contains_rank(&self, r: u64) -> bool {
        self.bits[(r / 64) as usize] >> (r % 64) & 1 == 1
    }

    pub fn contains(&self, w: &Word) -> bool {
        w.k() == self.k - 1 && w.q() == self.q && self.contains_rank(w.rank())
    }

    #[inline]
    pub fn insert_rank(&mut self, r: u64) {
        self.bits[(r / 64) as usize] |= 1 << (r % 64);
    }

    #[inline]
    pub fn remove_rank(&mut self, r: u64) {
        self.bits[(r / 64) as usize] &= !(1 << (r % 64));
    }

    pub fn set_rank(&mut self, r: u64, member: bool) {
        if member {
            self.insert_rank(r)
        } else {
            self.remove_rank(r)
        }
    }

    /// `|S|`, recomputed from the indicator.
    pub fn len(&self) -> u64 {
        self.bits.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// Member ranks in ascending order.
    pub fn ranks(&self) -> impl Iterator<Item = u64> + '_ {
        self.bits.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as u64;
                    w &= w - 1;
                    Some(i as u64 * 64 + b)
                }
            })
        })
    }

    pub fn members(&self) -> Vec<Word> {
        self.ranks()
            .map(|r| Word::unrank(r, self.k - 1, self.q).expect("rank in range"))
            .collect()
    }

    /// `|S| / q^{k-1}`.
    pub fn rho(&self) -> BigRational {
        BigRational::new(self.len().into(), self.cells.into())
    }

    /// Serialises to the `PREFIXSET` text format: one member per line, as
    /// digit characters `0-9a-f` when `q <= 16` and as comma-separated
    /// decimals otherwise.
    pub fn to_text(&self) -> String {
        let mut out = format!("PREFIXSET k={} q={}\n", self.k, self.q);
        let mut digits = vec![0u32; self.k - 1];
        for mut r in self.ranks() {
            for d in digits.iter_mut().rev() {
                *d = (r % self.q as u64) as u32;
                r /= self.q as u64;
            }
            if self.q <= 16 {
                for &d in &digits {
                    out.push(char::from_digit(d, 16).expect("digit below 16"));
                }
            } else {
                for (i, d) in digits.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    write!(out, "{d}").expect("write to string");
                }
            }
            out.push('\n');
        }
        out
    }

    /// Parses the `PREFIXSET` text format. Lines starting with `#` and blank
    /// lines are ignored; duplicate members are rejected.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing header"))?;
        let (k, q) = parse_prefix_header(header).ok_or_else(|| {
            Error::parse(
                hline,
                format!("expected `PREFIXSET k=<k> q=<q>`, got {header:?}"),
            )
        })?;
        let mut s = PrefixSet::empty(k, q).map_err(|e| Error::parse(hline, e.to_string()))?;
        for (line, body) in lines {
            let w = if q <= 16 {
                Word::parse(body, q)
            } else {
                body.split(',')
                    .map(|t| {
                        t.trim()
                            .parse::<u8>()
                            .map_err(|_| Error::InvalidWord(format!("bad digit {t:?}")))
                    })
                    .collect::<Result<Vec<u8>>>()
                    .and_then(|d| Word::new(d, q))
            }
            .map_err(|e| Error::parse(line, e.to_string()))?;
            if w.k() != k - 1 {
                return Err(Error::parse(
                    line,
                    format!("member {body:?} has length {}, expected {}", w.k(), k - 1),
                ));
            }
            let r = w.rank();
            if s.contains_rank(r) {
                return Err(Error::parse(line, format!("duplicate member {body}")));
            }
            s.insert_rank(r);
        }
        Ok(s)
    }
}

fn parse_prefix_header(header: &str) -> Option<(usize, u32)> {
    let mut parts = header.split_whitespace();
    if parts.next()? != "PREFIXSET" {
        return None;
    }
    let k = parts.next()?.strip_prefix("k=")?.parse().ok()?;
    let q = parts.next()?.strip_prefix("q=")?.parse().ok()?;
    if parts.next().is_some() {
        return None;
    }
    Some((k, q))
}

/// Incoming and outgoing degrees of every middle block `u ∈ [q]^{k-2}`:
/// `I(u) = #{a : (a, u) ∈ S}` and `O(u) = #{b : (u, b) ∈ S}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeTables {
    pub q: u32,
    /// Length of the middle blocks, `k - 2`.
    pub block_len: usize,
    pub incoming: Vec<u32>,
    pub outgoing: Vec<u32>,
}

impl DegreeTables {
    fn block_rank(&self, block: &[u8]) -> usize {
        assert_eq!(block.len(), self.block_len, "middle block length");
        block
            .iter()
            .fold(0usize, |acc, &d| acc * self.q as usize + d as usize)
    }

    pub fn incoming_at(&self, block: &[u8]) -> u32 {
        self.incoming[self.block_rank(block)]
    }

    pub fn outgoing_at(&self, block: &[u8]) -> u32 {
        self.outgoing[self.block_rank(block)]
    }
}

pub fn degrees(s: &PrefixSet) -> DegreeTables {
    let q = s.q as u64;
    let blocks = s.cells / q;
    let mut incoming = vec![0u32; blocks as usize];
    let mut outgoing = vec![0u32; blocks as usize];
    for r in s.ranks() {
        incoming[(r % blocks) as usize] += 1;
        outgoing[(r / q) as usize] += 1;
    }
    DegreeTables {
        q: s.q,
        block_len: s.k - 2,
        incoming,
        outgoing,
    }
}

/// Exact count `N_{k,q}(S)` with the derived densities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountReport {
    pub n: BigUint,
    /// `N / q^k`.
    pub lambda: BigRational,
    /// `|S| / q^{k-1}`.
    pub rho: BigRational,
    /// Whether the direct word scan ran and agreed.
    pub audited: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct CountOptions {
    /// Run the direct scan over all `q^k` words when `q^k` is at most this.
    pub audit_threshold: u64,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions {
            audit_threshold: DEFAULT_AUDIT_THRESHOLD,
        }
    }
}

/// `Σ_u I(u) (q - O(u))`.
pub fn degree_count(s: &PrefixSet) -> u128 {
    let t = degrees(s);
    let q = s.q as u128;
    t.incoming
        .iter()
        .zip(&t.outgoing)
        .map(|(&i, &o)| i as u128 * (q - o as u128))
        .sum()
}

/// Counts words whose prefix is in `S` and whose suffix is not, by scanning
/// every word of `[q]^k`.
pub fn direct_count(s: &PrefixSet) -> u128 {
    let q = s.q as u64;
    let cells = s.cells;
    let total = cells * q;
    let chunk = (total / 256).max(1 << 14);
    let starts: Vec<u64> = (0..total).step_by(chunk as usize).collect();
    starts
        .par_iter()
        .map(|&start| {
            let end = (start + chunk).min(total);
            (start..end)
                .filter(|&r| s.contains_rank(r / q) && !s.contains_rank(r % cells))
                .count() as u128
        })
        .sum()
}

pub fn count_n(s: &PrefixSet) -> Result<CountReport> {
    count_n_with(s, CountOptions::default())
}

pub fn count_n_with(s: &PrefixSet, opts: CountOptions) -> Result<CountReport> {
    let n = degree_count(s);
    let words = s.cells * s.q as u64;
    let audited = words <= opts.audit_threshold;
    if audited {
        let scanned = direct_count(s);
        if scanned != n {
            return Err(Error::Identity(format!(
                "degree formula gives N={n} but direct scan gives {scanned}"
            )));
        }
    }
    let n = BigUint::from(n);
    Ok(CountReport {
        lambda: BigRational::new(n.clone().into(), words.into()),
        rho: s.rho(),
        n,
        audited,
    })
}

/// The independent set encoded by `S`, in rank order.
pub fn materialize_independent_set(s: &PrefixSet) -> BTreeSet<Word> {
    let q = s.q as u64;
    let mut out = BTreeSet::new();
    for p in s.ranks() {
        for y in 0..q {
            let r = p * q + y;
            if !s.contains_rank(r % s.cells) {
                out.insert(Word::unrank(r, s.k, s.q).expect("rank in range"));
            }
        }
    }
    out
}

/// Outcome of an independence check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Independence {
    Independent,
    /// The first adjacent pair found scanning members in rank order. With
    /// loops retained, a constant member is reported paired with itself.
    Violation(Word, Word),
}

impl Independence {
    pub fn is_independent(&self) -> bool {
        matches!(self, Independence::Independent)
    }
}

pub fn is_independent<'a>(
    words: impl IntoIterator<Item = &'a Word>,
    loops: bool,
) -> Result<Independence> {
    let mut sorted: Vec<&Word> = words.into_iter().collect();
    let Some(first) = sorted.first() else {
        return Ok(Independence::Independent);
    };
    let (k, q) = (first.k(), first.q());
    if let Some(bad) = sorted.iter().find(|w| w.k() != k || w.q() != q) {
        return Err(Error::MixedShape {
            k,
            q,
            found_k: bad.k(),
            found_q: bad.q(),
        });
    }
    let shape = Shape::new(k, q)?;
    sorted.sort();
    let ranks: HashSet<u64> = sorted.iter().map(|w| w.rank()).collect();
    for w in sorted {
        let r = w.rank();
        if loops && w.is_constant() {
            return Ok(Independence::Violation(w.clone(), w.clone()));
        }
        let mut nbrs: Vec<u64> = shape.neighbor_ranks(r).filter(|&v| v != r).collect();
        nbrs.sort_unstable();
        if let Some(&v) = nbrs.iter().find(|v| ranks.contains(v)) {
            return Ok(Independence::Violation(w.clone(), Word::unrank(v, k, q)?));
        }
    }
    Ok(Independence::Independent)
}

/// `S_J`: the prefixes of the members of a loop-model independent set `J`.
pub fn project_independent_set(j: &BTreeSet<Word>, k: usize, q: u32) -> Result<PrefixSet> {
    if let Independence::Violation(a, b) = is_independent(j, true)? {
        return Err(Error::NotIndependent(a.to_string(), b.to_string()));
    }
    let mut s = PrefixSet::empty(k, q)?;
    for w in j {
        if w.k() != k || w.q() != q {
            return Err(Error::MixedShape {
                k,
                q,
                found_k: w.k(),
                found_q: w.q(),
            });
        }
        s.insert_rank(w.rank() / q as u64);
    }
    Ok(s)
}

/// Exhaustive maximum of `N(S)` over all `2^{q^{k-1}}` prefix sets.
///
/// Ties are broken towards the smallest membership mask, where bit `r` of the
/// mask is the membership of the cell of rank `r`.
pub fn brute_force_m(k: usize, q: u32) -> Result<(u64, PrefixSet)> {
    let empty = PrefixSet::empty(k, q)?;
    let cells = empty.cells;
    if cells > BRUTE_FORCE_MAX_CELLS {
        return Err(Error::InstanceTooLarge(format!(
            "q^(k-1) = {cells} exceeds exhaustive limit {BRUTE_FORCE_MAX_CELLS}"
        )));
    }
    let qq = q as u64;
    let words = cells * qq;
    // words whose status may change when cell c is toggled
    let touching: Vec<Vec<u64>> = (0..cells)
        .map(|c| {
            let mut v: Vec<u64> = (0..words)
                .filter(|&r| r / qq == c || r % cells == c)
                .collect();
            v.dedup();
            v
        })
        .collect();
    let contributes = |mask: u64, r: u64| -> i64 {
        (mask >> (r / qq) & 1 == 1 && mask >> (r % cells) & 1 == 0) as i64
    };

    let mut mask: u64 = 0;
    let mut n: i64 = 0;
    let mut best = (0i64, 0u64);
    for i in 1u64..(1 << cells) {
        let bit = i.trailing_zeros() as u64;
        let before: i64 = touching[bit as usize]
            .iter()
            .map(|&r| contributes(mask, r))
            .sum();
        mask ^= 1 << bit;
        let after: i64 = touching[bit as usize]
            .iter()
            .map(|&r| contributes(mask, r))
            .sum();
        n += after - before;
        if n > best.0 || (n == best.0 && mask < best.1) {
            best = (n, mask);
        }
    }
    let mut witness = empty;
    for r in 0..cells {
        witness.set_rank(r, best.1 >> r & 1 == 1);
    }
    Ok((best.0 as u64, witness))
}

/// Result of the exact independence-number oracle.
#[derive(Clone, Debug)]
pub struct AlphaResult {
    pub value: u64,
    pub witness: BTreeSet<Word>,
}

/// Exact independence number of `B(k, q)` without self-loops (`loops ==
/// false`) or with them (`loops == true`, which excludes constant words).
pub fn exact_alpha(k: usize, q: u32, loops: bool, max_vertices: u64) -> Result<AlphaResult> {
    let shape = Shape::new(k, q)?;
    if shape.size > max_vertices {
        return Err(Error::InstanceTooLarge(format!(
            "q^k = {} exceeds vertex guard {max_vertices}",
            shape.size
        )));
    }
    let adj: Vec<Vec<u32>> = (0..shape.size)
        .map(|r| shape.neighbor_ranks(r).map(|v| v as u32).collect())
        .collect();
    // rotation orbits are cycles of the graph
    let orbits: Vec<Vec<u32>> = (0..shape.size)
        .filter_map(|r| {
            let w = Word::unrank(r, k, q).expect("rank in range");
            w.is_canonical().then(|| {
                orbit_of(&w)
                    .members
                    .iter()
                    .map(|m| m.rank() as u32)
                    .collect()
            })
        })
        .collect();
    let graph = Graph::new(adj).with_cycle_cover(orbits);
    let allowed: Vec<bool> = (0..shape.size)
        .map(|r| !(loops && shape.is_constant_rank(r)))
        .collect();
    let set = graph.maximum_independent_set(Some(&allowed));
    let witness = set
        .iter()
        .map(|&r| Word::unrank(r as u64, k, q))
        .collect::<Result<BTreeSet<_>>>()?;
    Ok(AlphaResult {
        value: witness.len() as u64,
        witness,
    })
}
