//! Phase certificates for binary de Bruijn graphs of odd prime length.
//!
//! For prime `k` every non-constant binary word lies in a rotation orbit of
//! size exactly `k`, which induces a `k`-cycle. A maximum independent set
//! takes one constant word `ℓ` and, from each orbit `C`, the alternating set
//! `A_t(C) = {x^(t+r) : r ∈ J}` with `J = {1, 3, …, k-2}`, where `x^(i)` is
//! the rotation of the canonical representative left by `i`. Validity is then
//! a constraint on the phases of each pair of orbits joined by an edge.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::error::{Error, Result};
use crate::words::{is_prime, list_nontrivial_orbits, Orbit, Word};

/// Largest `k` the verifier and search will handle; `2^k` words are listed.
pub const MAX_CERT_K: usize = 25;

/// Default largest `k` for [`search_phases`].
pub const DEFAULT_SEARCH_MAX_K: usize = 13;

/// Default node budget for [`search_phases`].
pub const DEFAULT_NODE_BUDGET: u64 = 2_000_000;

const FORMAT_LINE: &str = "# format: representative:phase (four entries per line)";

/// Protocol failures; each names the offending entry or pair.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CertificateError {
    #[error("empty certificate file")]
    Empty,
    #[error("invalid header in certificate file")]
    InvalidHeader,
    #[error("header words have the wrong length")]
    HeaderWordLength,
    #[error("unsupported word length k={0}: need an odd prime k <= {MAX_CERT_K}")]
    UnsupportedLength(usize),
    #[error("line {line}: malformed entry {token:?}")]
    MalformedEntry { line: usize, token: String },
    #[error("wrong representative length: {0}")]
    RepresentativeLength(String),
    #[error("phase out of range for {rep}: {phase}")]
    PhaseOutOfRange { rep: String, phase: String },
    #[error("expected {expected} orbit entries, found {found}")]
    EntryCount { expected: usize, found: usize },
    #[error("representative is not canonical: {0}")]
    NotCanonical(String),
    #[error("nontrivial orbit has wrong size for {0}")]
    OrbitSize(String),
    #[error("duplicate orbit representative: {0}")]
    DuplicateRepresentative(String),
    #[error("excluded word {0} was selected")]
    ExcludedSelected(String),
    #[error("wrong size: expected {expected}, found {found}")]
    WrongSize { expected: u64, found: u64 },
    #[error("adjacent selected vertices found: {0} ~ {1}")]
    AdjacentSelected(String, String),
}

type CertResult<T> = std::result::Result<T, CertificateError>;

/// The `J` offsets `1, 3, …, k-2`.
pub fn odd_offsets(k: usize) -> impl Iterator<Item = usize> {
    (1..k.saturating_sub(1)).step_by(2)
}

/// Number of non-trivial orbits, `(2^k - 2)/k`.
pub fn orbit_count(k: usize) -> usize {
    ((1usize << k) - 2) / k
}

/// `1 + (k-1)/2 · (2^k - 2)/k`.
pub fn certificate_size(k: usize) -> u64 {
    1 + ((k - 1) / 2 * orbit_count(k)) as u64
}

fn check_k(k: usize) -> CertResult<()> {
    if !(3..=MAX_CERT_K).contains(&k) || !is_prime(k) {
        return Err(CertificateError::UnsupportedLength(k));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub k: usize,
    pub target_size: u64,
    pub include: Word,
    pub exclude: Word,
    pub entries: Vec<(Word, u32)>,
}

fn parse_binary(text: &str) -> Option<Word> {
    if text.is_empty() || !text.bytes().all(|b| b == b'0' || b == b'1') {
        return None;
    }
    Word::parse(text, 2).ok()
}

fn parse_header(line: &str) -> CertResult<(usize, u64, String, String)> {
    let rest = line
        .strip_prefix('#')
        .ok_or(CertificateError::InvalidHeader)?;
    let fields: Vec<&str> = rest.split_whitespace().collect();
    let [tag, k, target, include, exclude] = fields[..] else {
        return Err(CertificateError::InvalidHeader);
    };
    let value = |field: &'static str, text: &str| -> CertResult<String> {
        text.strip_prefix(field)
            .and_then(|t| t.strip_prefix('='))
            .map(str::to_string)
            .ok_or(CertificateError::InvalidHeader)
    };
    let number = |s: String| -> CertResult<u64> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(CertificateError::InvalidHeader);
        }
        s.parse().map_err(|_| CertificateError::InvalidHeader)
    };
    let binary = |s: String| -> CertResult<String> {
        if s.is_empty() || !s.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(CertificateError::InvalidHeader);
        }
        Ok(s)
    };
    if tag != "CERTIFICATE" {
        return Err(CertificateError::InvalidHeader);
    }
    let k = number(value("k", k)?)?;
    let target = number(value("target_size", target)?)?;
    let include = binary(value("include", include)?)?;
    let exclude = binary(value("exclude", exclude)?)?;
    Ok((k as usize, target, include, exclude))
}

/// Parses the certificate text format: a header line, then whitespace
/// separated `word:phase` tokens. Blank lines and `#` lines are skipped.
pub fn parse_certificate(text: &str) -> CertResult<Certificate> {
    let mut lines = text.lines().enumerate();
    let (_, first) = lines.next().ok_or(CertificateError::Empty)?;
    let (k, target_size, include, exclude) = parse_header(first.trim())?;
    if include.len() != k || exclude.len() != k {
        return Err(CertificateError::HeaderWordLength);
    }
    check_k(k)?;
    let include = parse_binary(&include).ok_or(CertificateError::InvalidHeader)?;
    let exclude = parse_binary(&exclude).ok_or(CertificateError::InvalidHeader)?;

    let mut entries = Vec::new();
    for (i, raw) in lines {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        for token in line.split_whitespace() {
            let malformed = || CertificateError::MalformedEntry {
                line: i + 1,
                token: token.to_string(),
            };
            let (rep, phase) = token.split_once(':').ok_or_else(malformed)?;
            if phase.is_empty() || !phase.bytes().all(|b| b.is_ascii_digit()) {
                return Err(malformed());
            }
            let word = parse_binary(rep).ok_or_else(malformed)?;
            if word.k() != k {
                return Err(CertificateError::RepresentativeLength(rep.to_string()));
            }
            let out_of_range = || CertificateError::PhaseOutOfRange {
                rep: rep.to_string(),
                phase: phase.to_string(),
            };
            let phase: u32 = phase.parse().map_err(|_| out_of_range())?;
            if phase as usize >= k {
                return Err(out_of_range());
            }
            entries.push((word, phase));
        }
    }
    Ok(Certificate {
        k,
        target_size,
        include,
        exclude,
        entries,
    })
}

impl Certificate {
    /// Header, format comment, then four entries per line.
    pub fn emit(&self) -> String {
        let mut out = format!(
            "# CERTIFICATE k={} target_size={} include={} exclude={}\n{FORMAT_LINE}\n",
            self.k, self.target_size, self.include, self.exclude
        );
        for chunk in self.entries.chunks(4) {
            let tokens: Vec<String> = chunk.iter().map(|(w, p)| format!("{w}:{p}")).collect();
            out.push_str(&tokens.join(" "));
            out.push('\n');
        }
        out
    }

    /// Phase per representative.
    pub fn assignment(&self) -> PhaseAssignment {
        self.entries.iter().cloned().collect()
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.emit())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub k: usize,
    pub selected: BTreeSet<Word>,
    pub orbits: usize,
}

impl VerifyReport {
    pub fn summary_line(&self) -> String {
        format!(
            "OK: k={}, selected={}, nontrivial_orbits={}",
            self.k,
            self.selected.len(),
            self.orbits
        )
    }
}

/// Rebuilds the selected set and checks it, in protocol order: entry count;
/// per entry canonical form, orbit size and uniqueness; excluded word; size;
/// adjacency.
pub fn verify_certificate(cert: &Certificate) -> CertResult<VerifyReport> {
    let k = cert.k;
    check_k(k)?;
    let expected = orbit_count(k);
    if cert.entries.len() != expected {
        return Err(CertificateError::EntryCount {
            expected,
            found: cert.entries.len(),
        });
    }
    let mut seen = HashSet::new();
    let mut selected = BTreeSet::new();
    selected.insert(cert.include.clone());
    for (rep, phase) in &cert.entries {
        if !rep.is_canonical() {
            return Err(CertificateError::NotCanonical(rep.to_string()));
        }
        let orbit = crate::words::orbit_of(rep);
        if orbit.size() != k {
            return Err(CertificateError::OrbitSize(rep.to_string()));
        }
        if !seen.insert(rep.clone()) {
            return Err(CertificateError::DuplicateRepresentative(rep.to_string()));
        }
        for a in odd_offsets(k) {
            selected.insert(orbit.members[(*phase as usize + a) % k].clone());
        }
    }
    if selected.contains(&cert.exclude) {
        return Err(CertificateError::ExcludedSelected(cert.exclude.to_string()));
    }
    if selected.len() as u64 != cert.target_size {
        return Err(CertificateError::WrongSize {
            expected: cert.target_size,
            found: selected.len() as u64,
        });
    }
    for w in &selected {
        for nb in w.neighbors(false) {
            if selected.contains(&nb) {
                return Err(CertificateError::AdjacentSelected(
                    w.to_string(),
                    nb.to_string(),
                ));
            }
        }
    }
    Ok(VerifyReport {
        k,
        orbits: cert.entries.len(),
        selected,
    })
}

/// A subset of `Z_k`, `k < 64`, as a bitmask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct PhaseSet(pub u64);

impl PhaseSet {
    pub fn full(k: usize) -> Self {
        PhaseSet((1u64 << k) - 1)
    }

    pub fn contains(self, t: usize) -> bool {
        self.0 >> t & 1 == 1
    }

    pub fn insert(&mut self, t: usize) {
        self.0 |= 1 << t;
    }

    pub fn remove(&mut self, t: usize) {
        self.0 &= !(1 << t);
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&t| self.contains(t))
    }

    /// `{x + s mod k}`.
    pub fn shifted(self, s: usize, k: usize) -> Self {
        let mut out = PhaseSet::default();
        for t in self.iter() {
            out.insert((t + s) % k);
        }
        out
    }

    /// `{-x mod k}`.
    pub fn negated(self, k: usize) -> Self {
        let mut out = PhaseSet::default();
        for t in self.iter() {
            out.insert((k - t) % k);
        }
        out
    }
}

impl fmt::Debug for PhaseSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

fn require_cycle(c: &Orbit) -> Result<usize> {
    let k = c.rep.k();
    if c.size() != k || c.rep.q() != 2 {
        return Err(Error::InvalidParameter(format!(
            "orbit of {} is not a binary {k}-cycle",
            c.rep
        )));
    }
    Ok(k)
}

/// `A_t(C)`, in the order of `J`.
pub fn alternating_set(c: &Orbit, t: usize) -> Result<Vec<Word>> {
    let k = require_cycle(c)?;
    Ok(odd_offsets(k)
        .map(|a| c.members[(t + a) % k].clone())
        .collect())
}

/// `D(C, C') = {j - i : x^(i) ~ y^(j)}`.
pub fn diff_set(c: &Orbit, c2: &Orbit) -> Result<PhaseSet> {
    let k = require_cycle(c)?;
    if require_cycle(c2)? != k {
        return Err(Error::InvalidParameter(
            "orbits of different lengths".into(),
        ));
    }
    let mut d = PhaseSet::default();
    for (i, x) in c.members.iter().enumerate() {
        for nb in x.neighbors(false) {
            if let Some(j) = c2.index_of(&nb) {
                d.insert((j + k - i) % k);
            }
        }
    }
    Ok(d)
}

/// `F = {δ - (b - a) : δ ∈ D, a, b ∈ J}`.
pub fn forbidden_set(d: PhaseSet, k: usize) -> PhaseSet {
    let mut f = PhaseSet::default();
    for delta in d.iter() {
        for a in odd_offsets(k) {
            for b in odd_offsets(k) {
                f.insert((delta + a + 2 * k - b) % k);
            }
        }
    }
    f
}

/// `D(ℓ, C) = {i : ℓ ~ x^(i)}`.
pub fn loop_diff_set(l: &Word, c: &Orbit) -> Result<PhaseSet> {
    require_cycle(c)?;
    let mut d = PhaseSet::default();
    for (i, x) in c.members.iter().enumerate() {
        if x.is_adjacent(l) {
            d.insert(i);
        }
    }
    Ok(d)
}

/// `F(ℓ, C) = {δ - a : δ ∈ D(ℓ, C), a ∈ J}`.
pub fn loop_forbidden(l: &Word, c: &Orbit) -> Result<PhaseSet> {
    let k = require_cycle(c)?;
    let mut f = PhaseSet::default();
    for delta in loop_diff_set(l, c)?.iter() {
        for a in odd_offsets(k) {
            f.insert((delta + k - a) % k);
        }
    }
    Ok(f)
}

/// Exact clash relation between two orbits: `rows[t]` is the set of phases
/// `t'` for which `A_t(C) ∪ A_t'(C')` contains an edge.
///
/// `t' - t ∉ F(C, C')` implies no clash, but the converse fails in general
/// because adjacency is not preserved by rotating both words, so the search
/// and the assignment check use this table.
pub fn conflict_rows(c: &Orbit, c2: &Orbit) -> Result<Vec<PhaseSet>> {
    let k = require_cycle(c)?;
    if require_cycle(c2)? != k {
        return Err(Error::InvalidParameter(
            "orbits of different lengths".into(),
        ));
    }
    let mut rows = vec![PhaseSet::default(); k];
    for (i, x) in c.members.iter().enumerate() {
        for nb in x.neighbors(false) {
            if let Some(j) = c2.index_of(&nb) {
                add_clash(&mut rows, k, i, j);
            }
        }
    }
    Ok(rows)
}

fn add_clash(rows: &mut [PhaseSet], k: usize, i: usize, j: usize) {
    for a in odd_offsets(k) {
        for b in odd_offsets(k) {
            rows[(i + k - a) % k].insert((j + k - b) % k);
        }
    }
}

pub type PhaseAssignment = BTreeMap<Word, u32>;

/// Constraints between two distinct orbits `C_i`, `C_j` that share an edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairConstraint {
    /// `D(C_i, C_j)`.
    pub diff: PhaseSet,
    /// `F(C_i, C_j)`.
    pub forbidden: PhaseSet,
    /// See [`conflict_rows`].
    pub clashes: Vec<PhaseSet>,
}

/// The phase constraints for one `(k, ℓ)`, over orbits in weight-then-lex
/// order.
#[derive(Clone, Debug)]
pub struct PhaseSystem {
    pub k: usize,
    pub loop_word: Word,
    pub orbits: Vec<Orbit>,
    /// `D(ℓ, C)` per orbit.
    pub loop_diff: Vec<PhaseSet>,
    /// `F(ℓ, C)` per orbit; exact, since `ℓ` is a single vertex.
    pub loop_forbidden: Vec<PhaseSet>,
    /// Phases `t` for which `A_t(C)` is not independent; empty for prime `k`.
    pub self_clash: Vec<PhaseSet>,
    /// Keyed by `(i, j)`, `i != j`, for every pair of orbits joined by an edge.
    pub pairs: BTreeMap<(usize, usize), PairConstraint>,
    /// Conflict graph adjacency in increasing order.
    pub neighbors: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Loop {
        rep: Word,
        phase: u32,
    },
    SelfPair {
        rep: Word,
        phase: u32,
    },
    Pair {
        first: Word,
        second: Word,
        phases: (u32, u32),
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Loop { rep, phase } => {
                write!(f, "phase {phase} of {rep} meets the loop vertex")
            }
            Violation::SelfPair { rep, phase } => {
                write!(
                    f,
                    "phase {phase} of {rep} is not independent inside its orbit"
                )
            }
            Violation::Pair {
                first,
                second,
                phases: (t, t2),
            } => write!(f, "orbits {first}:{t} and {second}:{t2} share an edge"),
        }
    }
}

impl PhaseSystem {
    /// `ℓ` must be a constant binary word of odd prime length.
    pub fn new(k: usize, loop_word: &Word) -> Result<Self> {
        check_k(k).map_err(Error::from)?;
        if loop_word.k() != k || loop_word.q() != 2 || !loop_word.is_constant() {
            return Err(Error::InvalidParameter(format!(
                "loop vertex must be a constant binary word of length {k}, got {loop_word}"
            )));
        }
        let orbits = list_nontrivial_orbits(k, 2)?;
        let mut locate: HashMap<Word, (usize, usize)> = HashMap::new();
        for (o, orbit) in orbits.iter().enumerate() {
            for (i, w) in orbit.members.iter().enumerate() {
                locate.insert(w.clone(), (o, i));
            }
        }
        let n = orbits.len();
        let mut diffs: BTreeMap<(usize, usize), (PhaseSet, Vec<PhaseSet>)> = BTreeMap::new();
        let mut loop_diff = vec![PhaseSet::default(); n];
        for (o, orbit) in orbits.iter().enumerate() {
            for (i, x) in orbit.members.iter().enumerate() {
                for nb in x.neighbors(false) {
                    if let Some(&(o2, j)) = locate.get(&nb) {
                        let (d, rows) = diffs
                            .entry((o, o2))
                            .or_insert_with(|| (PhaseSet::default(), vec![PhaseSet::default(); k]));
                        d.insert((j + k - i) % k);
                        add_clash(rows, k, i, j);
                    } else if nb == *loop_word {
                        loop_diff[o].insert(i);
                    }
                }
            }
        }
        let loop_forbidden = orbits
            .iter()
            .map(|c| loop_forbidden(loop_word, c))
            .collect::<Result<Vec<_>>>()?;
        let mut self_clash = vec![PhaseSet::default(); n];
        let mut pairs = BTreeMap::new();
        let mut neighbors = vec![Vec::new(); n];
        for ((i, j), (diff, clashes)) in diffs {
            if i == j {
                for (t, row) in clashes.iter().enumerate() {
                    if row.contains(t) {
                        self_clash[i].insert(t);
                    }
                }
            } else {
                neighbors[i].push(j);
                pairs.insert(
                    (i, j),
                    PairConstraint {
                        diff,
                        forbidden: forbidden_set(diff, k),
                        clashes,
                    },
                );
            }
        }
        let system = PhaseSystem {
            k,
            loop_word: loop_word.clone(),
            orbits,
            loop_diff,
            loop_forbidden,
            self_clash,
            pairs,
            neighbors,
        };
        let degree = system.max_conflict_degree();
        if degree > 4 * k {
            return Err(Error::Identity(format!(
                "conflict graph has degree {degree} > 4k = {}",
                4 * k
            )));
        }
        Ok(system)
    }

    pub fn max_conflict_degree(&self) -> usize {
        self.neighbors.iter().map(Vec::len).max().unwrap_or(0)
    }

    fn index_of(&self, rep: &Word) -> Option<usize> {
        self.orbits
            .binary_search_by(|o| o.weight().cmp(&rep.weight()).then_with(|| o.rep.cmp(rep)))
            .ok()
    }

    /// Phases in orbit order; fails if an orbit has no phase.
    pub fn phases_of(&self, assignment: &PhaseAssignment) -> Result<Vec<usize>> {
        for (rep, &t) in assignment {
            if self.index_of(rep).is_none() {
                return Err(Error::InvalidParameter(format!(
                    "{rep} is not a canonical representative of a non-trivial orbit"
                )));
            }
            if t as usize >= self.k {
                return Err(Error::InvalidParameter(format!(
                    "phase {t} of {rep} outside [0, {})",
                    self.k
                )));
            }
        }
        self.orbits
            .iter()
            .map(|o| {
                assignment
                    .get(&o.rep)
                    .map(|&t| t as usize)
                    .ok_or_else(|| Error::PartialAssignment(o.rep.to_string()))
            })
            .collect()
    }

    /// The first violated condition, or `None` when the assembled set is
    /// independent.
    pub fn check_assignment(&self, assignment: &PhaseAssignment) -> Result<Option<Violation>> {
        let phases = self.phases_of(assignment)?;
        for (i, &t) in phases.iter().enumerate() {
            let rep = &self.orbits[i].rep;
            if self.self_clash[i].contains(t) {
                return Ok(Some(Violation::SelfPair {
                    rep: rep.clone(),
                    phase: t as u32,
                }));
            }
            if self.loop_forbidden[i].contains(t) {
                return Ok(Some(Violation::Loop {
                    rep: rep.clone(),
                    phase: t as u32,
                }));
            }
        }
        for (&(i, j), pair) in &self.pairs {
            if pair.clashes[phases[i]].contains(phases[j]) {
                return Ok(Some(Violation::Pair {
                    first: self.orbits[i].rep.clone(),
                    second: self.orbits[j].rep.clone(),
                    phases: (phases[i] as u32, phases[j] as u32),
                }));
            }
        }
        Ok(None)
    }

    /// Ordered orbit pairs whose phase difference lies in `F(C, C')`. Every
    /// clash is counted here, but so are some independent pairs.
    pub fn difference_set_hits(&self, assignment: &PhaseAssignment) -> Result<Vec<(Word, Word)>> {
        let phases = self.phases_of(assignment)?;
        let k = self.k;
        Ok(self
            .pairs
            .iter()
            .filter(|(&(i, j), pair)| pair.forbidden.contains((phases[j] + k - phases[i]) % k))
            .map(|(&(i, j), _)| (self.orbits[i].rep.clone(), self.orbits[j].rep.clone()))
            .collect())
    }

    /// Certificate for a complete assignment, entries in orbit order.
    pub fn certificate(&self, phases: &[usize]) -> Certificate {
        let k = self.k;
        let other = 1 - self.loop_word.digits()[0];
        Certificate {
            k,
            target_size: certificate_size(k),
            include: self.loop_word.clone(),
            exclude: Word::constant(k, 2, other).expect("binary constant word"),
            entries: self
                .orbits
                .iter()
                .zip(phases)
                .map(|(o, &t)| (o.rep.clone(), t as u32))
                .collect(),
        }
    }
}

/// How much is pruned after each assignment.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Propagation {
    /// Filter the domains of the assigned orbit's neighbours.
    ForwardChecking,
    /// Forward checking, then restore arc consistency over the whole
    /// conflict graph.
    #[default]
    ArcConsistency,
}

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    pub node_budget: u64,
    pub max_k: usize,
    pub propagation: Propagation,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            node_budget: DEFAULT_NODE_BUDGET,
            max_k: DEFAULT_SEARCH_MAX_K,
            propagation: Propagation::ArcConsistency,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found {
        certificate: Certificate,
        nodes: u64,
    },
    /// The whole tree was explored without a solution.
    Unsat {
        nodes: u64,
    },
    BudgetExhausted {
        nodes: u64,
    },
}

struct Search<'a> {
    /// `(j, clash rows of (i, j))` for every conflict-graph neighbour `j`.
    adjacent: Vec<Vec<(usize, &'a [PhaseSet])>>,
    propagation: Propagation,
    assigned: Vec<bool>,
    phases: Vec<usize>,
    nodes: u64,
    budget: u64,
}

enum Step {
    Found,
    Dead,
    OutOfBudget,
}

impl Search<'_> {
    /// Shrinks domains until every value of every unassigned orbit has a
    /// compatible value at each neighbour. Returns false on a wipe-out.
    fn arc_consistency(&self, domains: &mut [PhaseSet], mut queue: Vec<usize>) -> bool {
        let mut queued = vec![false; domains.len()];
        for &i in &queue {
            queued[i] = true;
        }
        while let Some(i) = queue.pop() {
            queued[i] = false;
            for &(j, rows) in &self.adjacent[i] {
                if self.assigned[j] {
                    continue;
                }
                let mut support = 0u64;
                for t in domains[i].iter() {
                    support |= !rows[t].0;
                }
                let narrowed = domains[j].0 & support;
                if narrowed != domains[j].0 {
                    domains[j].0 = narrowed;
                    if narrowed == 0 {
                        return false;
                    }
                    if !queued[j] {
                        queued[j] = true;
                        queue.push(j);
                    }
                }
            }
        }
        true
    }

    fn run(&mut self, depth: usize, domains: &mut Vec<PhaseSet>) -> Step {
        if depth == domains.len() {
            return Step::Found;
        }
        let i = depth;
        self.assigned[i] = true;
        let before = domains[i];
        for t in before.iter() {
            if self.nodes == self.budget {
                return Step::OutOfBudget;
            }
            self.nodes += 1;
            let saved = domains.clone();
            domains[i] = PhaseSet(1 << t);
            let mut alive = true;
            for &(j, rows) in &self.adjacent[i] {
                if !self.assigned[j] {
                    domains[j].0 &= !rows[t].0;
                    alive &= !domains[j].is_empty();
                }
            }
            if alive && self.propagation == Propagation::ArcConsistency {
                let touched = self.adjacent[i]
                    .iter()
                    .map(|&(j, _)| j)
                    .filter(|&j| !self.assigned[j])
                    .collect();
                alive = self.arc_consistency(domains, touched);
            }
            if alive {
                self.phases[i] = t;
                match self.run(depth + 1, domains) {
                    Step::Dead => {}
                    done => return done,
                }
            }
            *domains = saved;
        }
        self.assigned[i] = false;
        Step::Dead
    }
}

/// Deterministic backtracking over orbits in weight-then-representative
/// order, phases tried in increasing order, pruning per `opts.propagation`.
pub fn search_phases(k: usize, loop_word: &Word, opts: SearchOptions) -> Result<SearchOutcome> {
    if k > opts.max_k {
        return Err(Error::InstanceTooLarge(format!(
            "search is limited to k <= {}, got {k}",
            opts.max_k
        )));
    }
    let system = PhaseSystem::new(k, loop_word)?;
    search_system(&system, opts)
}

pub fn search_system(system: &PhaseSystem, opts: SearchOptions) -> Result<SearchOutcome> {
    let k = system.k;
    let n = system.orbits.len();
    let mut domains: Vec<PhaseSet> = (0..n)
        .map(|i| {
            PhaseSet(PhaseSet::full(k).0 & !system.loop_forbidden[i].0 & !system.self_clash[i].0)
        })
        .collect();
    let adjacent = (0..n)
        .map(|i| {
            system.neighbors[i]
                .iter()
                .map(|&j| (j, system.pairs[&(i, j)].clashes.as_slice()))
                .collect()
        })
        .collect();
    let mut search = Search {
        adjacent,
        propagation: opts.propagation,
        assigned: vec![false; n],
        phases: vec![0; n],
        nodes: 0,
        budget: opts.node_budget,
    };
    let consistent = domains.iter().all(|d| !d.is_empty())
        && (opts.propagation == Propagation::ForwardChecking
            || search.arc_consistency(&mut domains, (0..n).collect()));
    let step = if consistent {
        search.run(0, &mut domains)
    } else {
        Step::Dead
    };
    let outcome = match step {
        Step::Found => {
            let certificate = system.certificate(&search.phases);
            if let Some(v) = system.check_assignment(&certificate.assignment())? {
                return Err(Error::Identity(format!(
                    "search produced an invalid assignment: {v}"
                )));
            }
            SearchOutcome::Found {
                certificate,
                nodes: search.nodes,
            }
        }
        Step::Dead => SearchOutcome::Unsat {
            nodes: search.nodes,
        },
        Step::OutOfBudget => SearchOutcome::BudgetExhausted {
            nodes: search.nodes,
        },
    };
    Ok(outcome)
}
