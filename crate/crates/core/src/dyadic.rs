//! Lower-bound machinery for `k = 4`: the dyadic lift, the local hypothesis,
//! the seven-site gadget, the `q = 16` seed and its propagation to every
//! scale `2^m`.
//!
//! Sets here live in `[q]^3` and cells are written as triples `(r, s, t)`.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::prefix::{count_n_with, degree_count, degrees, CountOptions, DegreeTables, PrefixSet};
use crate::report::Check;

/// Default largest exponent accepted by [`propagate`]; `(2^9)^3` cells.
pub const DEFAULT_MAX_M: u32 = 9;

pub const SEED_Q: u32 = 16;
pub const SEED_N: u64 = 24849;
pub const SEED_PARAMS: (u32, u32) = (8, 14);

const FIBRE_NAMES: [char; 10] = ['A', 'B', 'C', 'D', 'E', 'F', 'G', 'H', 'I', 'J'];
const FIBRE_SIZES: [usize; 10] = [0, 16, 2, 4, 6, 8, 12, 10, 7, 9];

const EMBEDDED_FIBRES: [&[u8]; 10] = [
    &[],
    &[0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15],
    &[6, 7],
    &[2, 3, 6, 7],
    &[2, 3, 6, 7, 12, 13],
    &[2, 3, 6, 7, 8, 9, 12, 13],
    &[2, 3, 4, 5, 6, 7, 8, 9, 12, 13, 14, 15],
    &[2, 3, 6, 7, 8, 9, 12, 13, 14, 15],
    &[2, 3, 6, 7, 9, 12, 13],
    &[2, 3, 6, 7, 8, 9, 12, 13, 14],
];

const EMBEDDED_LABELS: [&str; 16] = [
    "GGAAAAAAAAGGAAAA",
    "GGAAAAAAAAGGAAAA",
    "BBFFBBAAFFBBFFBB",
    "BBFFBBAAFFBBFFBB",
    "GGCCHHAADDGGDDDD",
    "GGCCHHAADDGGDDDD",
    "BBFFBBFFFFBBFFBB",
    "BBFFBBFFFFBBFFBB",
    "BBCCBBAAFEBBDDBB",
    "BBCCBBAAFFBBDDBB",
    "GGAAAAAAAAGGAAAA",
    "GGAAAAAAAAGGAAAA",
    "BBCCBBAAFFBBFFBB",
    "BBCCBBAAFFBBFFBB",
    "GGCCHHAAIEGGDDFJ",
    "GGCCHHAAEEGGDDEJ",
];

/// Reference `O(u, v)` for the seed, row `u`.
pub const SEED_OUTGOING: [[u32; 16]; 16] = [
    [12, 12, 0, 0, 0, 0, 0, 0, 0, 0, 12, 12, 0, 0, 0, 0],
    [12, 12, 0, 0, 0, 0, 0, 0, 0, 0, 12, 12, 0, 0, 0, 0],
    [16, 16, 8, 8, 16, 16, 0, 0, 8, 8, 16, 16, 8, 8, 16, 16],
    [16, 16, 8, 8, 16, 16, 0, 0, 8, 8, 16, 16, 8, 8, 16, 16],
    [12, 12, 2, 2, 10, 10, 0, 0, 4, 4, 12, 12, 4, 4, 4, 4],
    [12, 12, 2, 2, 10, 10, 0, 0, 4, 4, 12, 12, 4, 4, 4, 4],
    [16, 16, 8, 8, 16, 16, 8, 8, 8, 8, 16, 16, 8, 8, 16, 16],
    [16, 16, 8, 8, 16, 16, 8, 8, 8, 8, 16, 16, 8, 8, 16, 16],
    [16, 16, 2, 2, 16, 16, 0, 0, 8, 6, 16, 16, 4, 4, 16, 16],
    [16, 16, 2, 2, 16, 16, 0, 0, 8, 8, 16, 16, 4, 4, 16, 16],
    [12, 12, 0, 0, 0, 0, 0, 0, 0, 0, 12, 12, 0, 0, 0, 0],
    [12, 12, 0, 0, 0, 0, 0, 0, 0, 0, 12, 12, 0, 0, 0, 0],
    [16, 16, 2, 2, 16, 16, 0, 0, 8, 8, 16, 16, 8, 8, 16, 16],
    [16, 16, 2, 2, 16, 16, 0, 0, 8, 8, 16, 16, 8, 8, 16, 16],
    [12, 12, 2, 2, 10, 10, 0, 0, 7, 6, 12, 12, 4, 4, 8, 9],
    [12, 12, 2, 2, 10, 10, 0, 0, 6, 6, 12, 12, 4, 4, 6, 9],
];

/// Reference `I(u, v)` for the seed, row `u`.
pub const SEED_INCOMING: [[u32; 16]; 16] = [
    [8, 8, 16, 16, 16, 16, 16, 16, 16, 16, 8, 8, 16, 16, 16, 16],
    [8, 8, 16, 16, 16, 16, 16, 16, 16, 16, 8, 8, 16, 16, 16, 16],
    [0, 0, 4, 4, 0, 0, 12, 12, 4, 4, 0, 0, 4, 4, 0, 0],
    [0, 0, 4, 4, 0, 0, 12, 12, 4, 4, 0, 0, 4, 4, 0, 0],
    [8, 8, 12, 12, 8, 8, 12, 12, 12, 12, 8, 8, 12, 12, 12, 12],
    [8, 8, 12, 12, 8, 8, 12, 12, 12, 12, 8, 8, 12, 12, 12, 12],
    [0, 0, 2, 2, 0, 0, 2, 2, 2, 2, 0, 0, 2, 2, 0, 0],
    [0, 0, 2, 2, 0, 0, 2, 2, 2, 2, 0, 0, 2, 2, 0, 0],
    [0, 0, 12, 12, 0, 0, 12, 12, 8, 9, 0, 0, 10, 10, 0, 0],
    [0, 0, 12, 12, 0, 0, 12, 12, 7, 7, 0, 0, 10, 10, 0, 0],
    [8, 8, 16, 16, 16, 16, 16, 16, 16, 16, 8, 8, 16, 16, 16, 16],
    [8, 8, 16, 16, 16, 16, 16, 16, 16, 16, 8, 8, 16, 16, 16, 16],
    [0, 0, 12, 12, 0, 0, 12, 12, 6, 6, 0, 0, 6, 6, 0, 0],
    [0, 0, 12, 12, 0, 0, 12, 12, 6, 6, 0, 0, 6, 6, 0, 0],
    [8, 8, 12, 12, 8, 8, 12, 12, 9, 9, 8, 8, 10, 10, 8, 8],
    [8, 8, 12, 12, 8, 8, 12, 12, 10, 10, 8, 8, 10, 10, 10, 8],
];

/// Reference `I(u, v) (16 - O(u, v))` for the seed.
pub const SEED_CONTRIBUTIONS: [[u32; 16]; 16] = [
    [
        32, 32, 256, 256, 256, 256, 256, 256, 256, 256, 32, 32, 256, 256, 256, 256,
    ],
    [
        32, 32, 256, 256, 256, 256, 256, 256, 256, 256, 32, 32, 256, 256, 256, 256,
    ],
    [0, 0, 32, 32, 0, 0, 192, 192, 32, 32, 0, 0, 32, 32, 0, 0],
    [0, 0, 32, 32, 0, 0, 192, 192, 32, 32, 0, 0, 32, 32, 0, 0],
    [
        32, 32, 168, 168, 48, 48, 192, 192, 144, 144, 32, 32, 144, 144, 144, 144,
    ],
    [
        32, 32, 168, 168, 48, 48, 192, 192, 144, 144, 32, 32, 144, 144, 144, 144,
    ],
    [0, 0, 16, 16, 0, 0, 16, 16, 16, 16, 0, 0, 16, 16, 0, 0],
    [0, 0, 16, 16, 0, 0, 16, 16, 16, 16, 0, 0, 16, 16, 0, 0],
    [0, 0, 168, 168, 0, 0, 192, 192, 64, 90, 0, 0, 120, 120, 0, 0],
    [0, 0, 168, 168, 0, 0, 192, 192, 56, 56, 0, 0, 120, 120, 0, 0],
    [
        32, 32, 256, 256, 256, 256, 256, 256, 256, 256, 32, 32, 256, 256, 256, 256,
    ],
    [
        32, 32, 256, 256, 256, 256, 256, 256, 256, 256, 32, 32, 256, 256, 256, 256,
    ],
    [0, 0, 168, 168, 0, 0, 192, 192, 48, 48, 0, 0, 48, 48, 0, 0],
    [0, 0, 168, 168, 0, 0, 192, 192, 48, 48, 0, 0, 48, 48, 0, 0],
    [
        32, 32, 168, 168, 48, 48, 192, 192, 81, 90, 32, 32, 120, 120, 64, 56,
    ],
    [
        32, 32, 168, 168, 48, 48, 192, 192, 100, 100, 32, 32, 120, 120, 100, 56,
    ],
];

/// Reference row sums of [`SEED_CONTRIBUTIONS`].
pub const SEED_CONTRIBUTION_ROW_SUMS: [u32; 16] = [
    3200, 3200, 576, 576, 1808, 1808, 128, 128, 1114, 1072, 3200, 3200, 912, 912, 1475, 1540,
];

fn cell(q: u32, r: u32, s: u32, t: u32) -> u64 {
    (r as u64 * q as u64 + s as u64) * q as u64 + t as u64
}

fn require_triples(s: &PrefixSet) -> Result<()> {
    if s.k() != 4 {
        return Err(Error::InvalidParameter(format!(
            "dyadic construction works on k = 4, got k = {}",
            s.k()
        )));
    }
    Ok(())
}

/// Ten named fibres `T ⊆ [16]` and a `16 × 16` matrix of fibre names;
/// `(a, b, c) ∈ S` iff `c` lies in the fibre labelled at `(a, b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedTable {
    pub fibres: Vec<(char, BTreeSet<u8>)>,
    pub labels: [[char; 16]; 16],
}

impl SeedTable {
    pub fn embedded() -> Self {
        let fibres = FIBRE_NAMES
            .iter()
            .zip(EMBEDDED_FIBRES)
            .map(|(&n, f)| (n, f.iter().copied().collect()))
            .collect();
        let mut labels = [['A'; 16]; 16];
        for (row, text) in labels.iter_mut().zip(EMBEDDED_LABELS) {
            for (slot, c) in row.iter_mut().zip(text.chars()) {
                *slot = c;
            }
        }
        let table = SeedTable { fibres, labels };
        table.validate().expect("embedded seed table");
        table
    }

    pub fn fibre(&self, name: char) -> Option<&BTreeSet<u8>> {
        self.fibres.iter().find(|(n, _)| *n == name).map(|(_, f)| f)
    }

    /// `T_{a,b}`.
    pub fn fibre_at(&self, a: usize, b: usize) -> &BTreeSet<u8> {
        self.fibre(self.labels[a][b]).expect("validated label")
    }

    /// Checks the fibre names, their sizes and that every label is defined.
    pub fn validate(&self) -> Result<()> {
        let names: Vec<char> = self.fibres.iter().map(|(n, _)| *n).collect();
        if names != FIBRE_NAMES {
            return Err(Error::parse(
                0,
                format!("expected fibres A..J in order, got {names:?}"),
            ));
        }
        for ((name, f), &size) in self.fibres.iter().zip(&FIBRE_SIZES) {
            if f.len() != size {
                return Err(Error::parse(
                    0,
                    format!("fibre {name} has {} elements, expected {size}", f.len()),
                ));
            }
            if f.iter().any(|&c| c as u32 >= SEED_Q) {
                return Err(Error::parse(0, format!("fibre {name} leaves [16]")));
            }
        }
        for (a, row) in self.labels.iter().enumerate() {
            for (b, l) in row.iter().enumerate() {
                if !FIBRE_NAMES.contains(l) {
                    return Err(Error::parse(
                        0,
                        format!("unknown label {l:?} at ({a}, {b})"),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn prefix_set(&self) -> PrefixSet {
        PrefixSet::from_predicate(4, SEED_Q, |u| {
            self.fibre_at(u[0] as usize, u[1] as usize).contains(&u[2])
        })
        .expect("16^3 cells")
    }

    /// Reads the `SEED q=16` / `FIBRES` / `TABLE` text format.
    pub fn from_text(text: &str) -> Result<Self> {
        #[derive(PartialEq)]
        enum Section {
            Header,
            Fibres,
            Table,
        }
        let mut section = Section::Header;
        let mut fibres: Vec<(char, BTreeSet<u8>)> = Vec::new();
        let mut rows: Vec<[char; 16]> = Vec::new();
        let mut seen_header = false;

        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            match line {
                "SEED q=16" if !seen_header => {
                    seen_header = true;
                    continue;
                }
                "FIBRES" if section == Section::Header && seen_header => {
                    section = Section::Fibres;
                    continue;
                }
                "TABLE" if section == Section::Fibres => {
                    section = Section::Table;
                    continue;
                }
                _ => {}
            }
            match section {
                Section::Header => {
                    return Err(Error::parse(
                        line_no,
                        format!("expected `SEED q=16` then `FIBRES`, got {line:?}"),
                    ));
                }
                Section::Fibres => {
                    let (name, body) = line.split_once('=').ok_or_else(|| {
                        Error::parse(line_no, "fibre line must be `<Name>=<digits>`")
                    })?;
                    let mut chars = name.chars();
                    let name = match (chars.next(), chars.next()) {
                        (Some(c), None) => c,
                        _ => return Err(Error::parse(line_no, format!("bad fibre name {name:?}"))),
                    };
                    let mut set = BTreeSet::new();
                    if !body.is_empty() {
                        for tok in body.split(',') {
                            let d: u8 = tok
                                .parse()
                                .map_err(|_| Error::parse(line_no, format!("bad digit {tok:?}")))?;
                            if d as u32 >= SEED_Q {
                                return Err(Error::parse(
                                    line_no,
                                    format!("digit {d} outside [16]"),
                                ));
                            }
                            if !set.insert(d) {
                                return Err(Error::parse(line_no, format!("digit {d} repeated")));
                            }
                        }
                    }
                    fibres.push((name, set));
                }
                Section::Table => {
                    let cells: Vec<&str> = line.split(' ').collect();
                    if cells.len() != 16 || cells.iter().any(|c| c.chars().count() != 1) {
                        return Err(Error::parse(
                            line_no,
                            "table rows need 16 single-letter labels",
                        ));
                    }
                    if rows.len() == 16 {
                        return Err(Error::parse(line_no, "more than 16 table rows"));
                    }
                    let mut row = ['A'; 16];
                    for (slot, c) in row.iter_mut().zip(cells) {
                        *slot = c.chars().next().expect("one char");
                    }
                    rows.push(row);
                }
            }
        }
        if section != Section::Table || rows.len() != 16 {
            return Err(Error::parse(
                0,
                format!("expected 16 table rows, found {}", rows.len()),
            ));
        }
        let mut labels = [['A'; 16]; 16];
        labels.copy_from_slice(&rows);
        let table = SeedTable { fibres, labels };
        table.validate()?;
        Ok(table)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("SEED q=16\nFIBRES\n");
        for (name, f) in &self.fibres {
            let digits: Vec<String> = f.iter().map(u8::to_string).collect();
            out.push_str(&format!("{name}={}\n", digits.join(",")));
        }
        out.push_str("TABLE\n");
        for row in &self.labels {
            let cells: Vec<String> = row.iter().map(char::to_string).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }
}

/// The `q = 16` seed.
pub fn seed_s16() -> PrefixSet {
    SeedTable::embedded().prefix_set()
}

/// Degree tables, contributions and the hypothesis for a seed table.
#[derive(Clone, Debug)]
pub struct SeedVerification {
    pub n: BigUint,
    pub outgoing: [[u32; 16]; 16],
    pub incoming: [[u32; 16]; 16],
    pub contributions: [[u32; 16]; 16],
    pub row_sums: [u32; 16],
    pub hypothesis: HypothesisReport,
}

impl SeedVerification {
    /// Every value compared against its reference.
    pub fn checks(&self) -> Vec<Check> {
        let mut out = vec![Check::equal("N", self.n.clone(), BigUint::from(SEED_N))];
        let total: u32 = self.row_sums.iter().sum();
        out.push(Check::equal("row sums total", total as u64, SEED_N));
        for (u, v, eo, ei) in [(8, 8, 8, 8), (14, 14, 8, 8), (14, 8, 7, 9)] {
            out.push(Check::equal(format!("O({u},{v})"), self.outgoing[u][v], eo));
            out.push(Check::equal(format!("I({u},{v})"), self.incoming[u][v], ei));
        }
        for (name, actual, expected) in [
            ("outgoing matrix", &self.outgoing, &SEED_OUTGOING),
            ("incoming matrix", &self.incoming, &SEED_INCOMING),
            (
                "contribution matrix",
                &self.contributions,
                &SEED_CONTRIBUTIONS,
            ),
        ] {
            out.push(matrix_check(name, actual, expected));
        }
        let sums: Vec<String> = self.row_sums.iter().map(u32::to_string).collect();
        out.push(Check::new(
            "contribution row sums",
            self.row_sums == SEED_CONTRIBUTION_ROW_SUMS,
            format!("({})", sums.join(", ")),
        ));
        let sums: Vec<String> = self
            .hypothesis
            .sums
            .iter()
            .map(|c| c.value.to_string())
            .collect();
        out.push(Check::new(
            "hypothesis H(8,14)",
            self.hypothesis.passed(),
            match self.hypothesis.first_failure() {
                None => format!("memberships hold, degree sums ({})", sums.join(", ")),
                Some(f) => f,
            },
        ));
        out
    }
}

fn matrix_check(name: &str, actual: &[[u32; 16]; 16], expected: &[[u32; 16]; 16]) -> Check {
    for u in 0..16 {
        for v in 0..16 {
            if actual[u][v] != expected[u][v] {
                return Check::new(
                    name,
                    false,
                    format!(
                        "entry ({u},{v}) is {}, reference {}",
                        actual[u][v], expected[u][v]
                    ),
                );
            }
        }
    }
    Check::new(name, true, "all 256 entries match")
}

/// Recomputes the degree and contribution tables of `table` with an audited
/// count.
pub fn verify_seed(table: &SeedTable) -> Result<SeedVerification> {
    let s = table.prefix_set();
    let report = count_n_with(
        &s,
        CountOptions {
            audit_threshold: u64::MAX,
        },
    )?;
    let t = degrees(&s);
    let mut outgoing = [[0u32; 16]; 16];
    let mut incoming = [[0u32; 16]; 16];
    let mut contributions = [[0u32; 16]; 16];
    let mut row_sums = [0u32; 16];
    for u in 0..16 {
        for v in 0..16 {
            let (o, i) = (t.outgoing[u * 16 + v], t.incoming[u * 16 + v]);
            if o as usize != table.fibre_at(u, v).len() {
                return Err(Error::Identity(format!(
                    "O({u},{v}) differs from |T_(u,v)|"
                )));
            }
            outgoing[u][v] = o;
            incoming[u][v] = i;
            contributions[u][v] = i * (SEED_Q - o);
            row_sums[u] += contributions[u][v];
        }
    }
    let hypothesis =
        check_hypothesis(&s, GadgetParams::new(SEED_PARAMS.0, SEED_PARAMS.1, SEED_Q)?)?;
    Ok(SeedVerification {
        n: report.n,
        outgoing,
        incoming,
        contributions,
        row_sums,
        hypothesis,
    })
}

/// `(r, s, t) ∈ L(S)` iff `(⌊r/2⌋, ⌊s/2⌋, ⌊t/2⌋) ∈ S`; `N` is multiplied by
/// exactly 16, which is checked.
pub fn dyadic_lift(s: &PrefixSet) -> Result<PrefixSet> {
    require_triples(s)?;
    let q = s.q();
    let q2 = 2 * q;
    let mut out = PrefixSet::empty(4, q2)?;
    let qq = q as u64;
    for r in s.ranks() {
        let (a, b, c) = (
            (r / (qq * qq)) as u32,
            (r / qq % qq) as u32,
            (r % qq) as u32,
        );
        for da in 0..2 {
            for db in 0..2 {
                for dc in 0..2 {
                    out.insert_rank(cell(q2, 2 * a + da, 2 * b + db, 2 * c + dc));
                }
            }
        }
    }
    let (before, after) = (degree_count(s), degree_count(&out));
    if after != 16 * before {
        return Err(Error::Identity(format!(
            "lift gave N={after}, expected 16 * {before}"
        )));
    }
    Ok(out)
}

/// The pair `(a, b)` at scale `q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GadgetParams {
    pub a: u32,
    pub b: u32,
    pub q: u32,
}

impl GadgetParams {
    pub fn new(a: u32, b: u32, q: u32) -> Result<Self> {
        if a == b {
            return Err(Error::InvalidParameter(format!(
                "gadget needs a != b, got a = b = {a}"
            )));
        }
        if a >= q || b >= q {
            return Err(Error::InvalidParameter(format!(
                "gadget parameters ({a}, {b}) outside [{q}]"
            )));
        }
        Ok(GadgetParams { a, b, q })
    }

    /// `(2a+1, 2b+1)` at scale `2q`.
    pub fn next(self) -> Self {
        GadgetParams {
            a: 2 * self.a + 1,
            b: 2 * self.b + 1,
            q: 2 * self.q,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipCondition {
    pub cell: [u32; 3],
    pub expected: bool,
    pub actual: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeCondition {
    pub label: &'static str,
    pub value: i64,
    pub expected: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisReport {
    pub params: GadgetParams,
    /// `(a,a,a) ∈ S`, `(b,b,a) ∈ S`, `(b,a,a) ∉ S`, `(b,b,b) ∉ S`.
    pub memberships: [MembershipCondition; 4],
    /// Degree sums against `q, q, q-1, q+1`.
    pub sums: [DegreeCondition; 4],
}

impl HypothesisReport {
    pub fn passed(&self) -> bool {
        self.memberships.iter().all(|m| m.expected == m.actual)
            && self.sums.iter().all(|s| s.value == s.expected)
    }

    /// The first failing condition, described.
    pub fn first_failure(&self) -> Option<String> {
        for m in &self.memberships {
            if m.expected != m.actual {
                let rel = if m.expected { "∈" } else { "∉" };
                return Some(format!("{:?} {rel} S fails", m.cell));
            }
        }
        self.sums
            .iter()
            .find(|s| s.value != s.expected)
            .map(|s| format!("{} = {}, expected {}", s.label, s.value, s.expected))
    }
}

fn block_degree(t: &[u32], q: u32, u: u32, v: u32) -> i64 {
    t[(u as usize) * q as usize + v as usize] as i64
}

/// Evaluates the four membership and four degree-balance conditions.
pub fn check_hypothesis(s: &PrefixSet, params: GadgetParams) -> Result<HypothesisReport> {
    require_triples(s)?;
    let GadgetParams { a, b, q } = GadgetParams::new(params.a, params.b, params.q)?;
    if s.q() != q {
        return Err(Error::InvalidParameter(format!(
            "parameters are at scale {q} but the set is over [{}]",
            s.q()
        )));
    }
    let member = |r, t, u| MembershipCondition {
        cell: [r, t, u],
        expected: true,
        actual: s.contains_rank(cell(q, r, t, u)),
    };
    let absent = |r, t, u| MembershipCondition {
        expected: false,
        ..member(r, t, u)
    };
    let DegreeTables {
        incoming: i,
        outgoing: o,
        ..
    } = degrees(s);
    let deg = |tab: &[u32], u, v| block_degree(tab, q, u, v);
    let qi = q as i64;
    Ok(HypothesisReport {
        params,
        memberships: [
            member(a, a, a),
            member(b, b, a),
            absent(b, a, a),
            absent(b, b, b),
        ],
        sums: [
            DegreeCondition {
                label: "I(a,a) + O(a,a)",
                value: deg(&i, a, a) + deg(&o, a, a),
                expected: qi,
            },
            DegreeCondition {
                label: "I(b,b) + O(b,b)",
                value: deg(&i, b, b) + deg(&o, b, b),
                expected: qi,
            },
            DegreeCondition {
                label: "I(b,b) + O(b,a)",
                value: deg(&i, b, b) + deg(&o, b, a),
                expected: qi - 1,
            },
            DegreeCondition {
                label: "I(b,a) + O(a,a)",
                value: deg(&i, b, a) + deg(&o, a, a),
                expected: qi + 1,
            },
        ],
    })
}

/// One toggled cell of the gadget at scale `2q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GadgetSite {
    pub name: &'static str,
    pub cell: [u32; 3],
    /// Added when true, removed otherwise.
    pub add: bool,
}

/// The three additions and four removals for `params` at scale `q`.
pub fn gadget_sites(params: GadgetParams) -> [GadgetSite; 7] {
    let (a2, b2) = (2 * params.a, 2 * params.b);
    let add = |name, cell| GadgetSite {
        name,
        cell,
        add: true,
    };
    let remove = |name, cell| GadgetSite {
        name,
        cell,
        add: false,
    };
    [
        add("P1", [b2, b2, b2 + 1]),
        add("P2", [b2 + 1, b2, b2 + 1]),
        add("P3", [b2 + 1, a2 + 1, a2]),
        remove("M1", [a2 + 1, a2, a2]),
        remove("M2", [a2 + 1, a2, a2 + 1]),
        remove("M3", [b2, b2 + 1, a2]),
        remove("M4", [b2, b2 + 1, a2 + 1]),
    ]
}

/// Toggles the seven sites of a lifted set `x` over `[2q]^3`, checking every
/// site's prior state and that `N` rises by exactly one.
pub fn apply_gadget(x: &PrefixSet, params: GadgetParams) -> Result<PrefixSet> {
    require_triples(x)?;
    let params = GadgetParams::new(params.a, params.b, params.q)?;
    let q2 = 2 * params.q;
    if x.q() != q2 {
        return Err(Error::InvalidParameter(format!(
            "gadget at scale {} acts on [{q2}]^3, got [{}]^3",
            params.q,
            x.q()
        )));
    }
    let mut t = x.clone();
    for site in gadget_sites(params) {
        let [r, s, u] = site.cell;
        let rank = cell(q2, r, s, u);
        if x.contains_rank(rank) == site.add {
            return Err(Error::GadgetSite {
                site: site.name,
                coords: site.cell,
                expected: if site.add { "absent" } else { "present" },
            });
        }
        t.set_rank(rank, site.add);
    }
    let (before, after) = (degree_count(x), degree_count(&t));
    if after != before + 1 {
        return Err(Error::Identity(format!(
            "gadget changed N from {before} to {after}, expected +1"
        )));
    }
    Ok(t)
}

/// `(91/240) 16^m - 1/15`, which must be an integer.
pub fn closed_form_n4(m: u32) -> Result<BigUint> {
    if m < 4 {
        return Err(Error::InvalidParameter(format!(
            "closed form starts at m = 4, got {m}"
        )));
    }
    let num = BigUint::from(91u32) * BigUint::from(16u32).pow(m) - BigUint::from(16u32);
    let (quot, rem) = num.div_rem(&BigUint::from(240u32));
    if !rem.is_zero() {
        return Err(Error::Identity(format!(
            "closed form is not an integer at m = {m}"
        )));
    }
    Ok(quot)
}

#[derive(Clone, Copy, Debug)]
pub struct PropagateOptions {
    /// Recount every intermediate set by scanning all `q^4` words.
    pub audit: bool,
    pub max_m: u32,
}

impl Default for PropagateOptions {
    fn default() -> Self {
        PropagateOptions {
            audit: true,
            max_m: DEFAULT_MAX_M,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropagationStep {
    pub m: u32,
    pub params: GadgetParams,
    pub n: BigUint,
    pub audited: bool,
    pub hypothesis: bool,
}

#[derive(Clone, Debug)]
pub struct Propagation {
    pub set: PrefixSet,
    pub params: GadgetParams,
    pub n: BigUint,
    pub steps: Vec<PropagationStep>,
}

fn recount(s: &PrefixSet, audit: bool) -> Result<(BigUint, bool)> {
    let threshold = if audit { u64::MAX } else { 0 };
    let report = count_n_with(
        s,
        CountOptions {
            audit_threshold: threshold,
        },
    )?;
    Ok((report.n, report.audited))
}

/// Lifts the seed and applies the gadget until scale `2^m_target`,
/// re-checking the hypothesis after each step.
pub fn propagate(m_target: u32, opts: PropagateOptions) -> Result<Propagation> {
    if m_target < 4 {
        return Err(Error::InvalidParameter(format!(
            "propagation starts at m = 4, got {m_target}"
        )));
    }
    if m_target > opts.max_m {
        return Err(Error::InstanceTooLarge(format!(
            "m = {m_target} exceeds the cap m <= {}",
            opts.max_m
        )));
    }
    let mut set = seed_s16();
    let mut params = GadgetParams::new(SEED_PARAMS.0, SEED_PARAMS.1, SEED_Q)?;
    let mut steps = Vec::new();
    let mut m = 4;
    loop {
        let hyp = check_hypothesis(&set, params)?;
        if !hyp.passed() {
            return Err(Error::Hypothesis(format!(
                "at m = {m}, (a, b) = ({}, {}): {}",
                params.a,
                params.b,
                hyp.first_failure().unwrap_or_default()
            )));
        }
        let (n, audited) = recount(&set, opts.audit)?;
        let expected = closed_form_n4(m)?;
        if n != expected {
            return Err(Error::Identity(format!(
                "N = {n} at m = {m}, closed form gives {expected}"
            )));
        }
        steps.push(PropagationStep {
            m,
            params,
            n: n.clone(),
            audited,
            hypothesis: true,
        });
        if m == m_target {
            return Ok(Propagation {
                set,
                params,
                n,
                steps,
            });
        }
        let lifted = dyadic_lift(&set)?;
        set = apply_gadget(&lifted, params)?;
        params = params.next();
        m += 1;
    }
}
