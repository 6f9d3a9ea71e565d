//! The three-colored partition class and its restricted counts.
//!
//! A colored partition here is a finite multiset of parts, each a positive
//! integer colored R, G, or B, with all part sizes distinct and a minimum
//! gap between any two parts that depends on both colors. The gap table,
//! indexed by (color of the smaller part, color of the larger part), is
//!
//! ```text
//!             larger: R  G  B
//!   smaller R:        3  1  2
//!   smaller G:        3  1  2
//!   smaller B:        2  2  1
//! ```
//!
//! The same class is equivalently cut out by a list of forbidden two-part
//! patterns (at distance 1 or 2); both predicates are implemented and
//! cross-checked. The module provides:
//!
//! * [`enumerate_gamma`] — brute-force enumeration in a canonical order
//!   (descending part size, color order R < G < B);
//! * [`count_gamma`] — a dynamic program producing the full
//!   (number of parts, total) table for each restricted variant;
//! * [`q_system_check`] — the coupled system of three functional equations
//!   satisfied by the generating functions of the variants;
//! * [`untangled_check`] — the decoupled single-function equations implied
//!   by the system (third order in the substitution `x -> xq`);
//! * [`pair_partition_count`] — the brute-force oracle for the pair
//!   generating functions of [`crate::qseries::pair_gf`].

use crate::exactmath::{BigRat, PolyQX};
use crate::qseries::{FuncEq, RRVariant, TruncSeries};
use num_bigint::BigInt;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

/// Largest `n` accepted by the brute-force enumerators.
pub const BRUTE_FORCE_CAP: u32 = 30;

/// Errors from enumeration and parsing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartitionError {
    /// A brute-force enumeration beyond [`BRUTE_FORCE_CAP`] was requested.
    CapExceeded { n: u32, cap: u32 },
    /// A part, partition, or forbidden-set string did not parse.
    Parse(String),
}

impl fmt::Display for PartitionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartitionError::CapExceeded { n, cap } => {
                write!(f, "brute-force enumeration capped at {cap}, got n = {n}")
            }
            PartitionError::Parse(msg) => write!(f, "parse error: {msg}"),
        }
    }
}

impl std::error::Error for PartitionError {}

// ---------------------------------------------------------------------------
// Colors, parts, partitions
// ---------------------------------------------------------------------------

/// Part colors, ordered R < G < B (the tie-break order used everywhere).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Color {
    R,
    G,
    B,
}

impl Color {
    pub const ALL: [Color; 3] = [Color::R, Color::G, Color::B];

    fn index(self) -> usize {
        match self {
            Color::R => 0,
            Color::G => 1,
            Color::B => 2,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Color::R => write!(f, "R"),
            Color::G => write!(f, "G"),
            Color::B => write!(f, "B"),
        }
    }
}

impl FromStr for Color {
    type Err = PartitionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "R" => Ok(Color::R),
            "G" => Ok(Color::G),
            "B" => Ok(Color::B),
            _ => Err(PartitionError::Parse(format!("unknown color '{s}'"))),
        }
    }
}

/// Minimum gap required between a smaller part and a larger part, indexed
/// `[smaller color][larger color]`.
pub const DIFF_MATRIX: [[u32; 3]; 3] = [
    [3, 1, 2], // smaller part R
    [3, 1, 2], // smaller part G
    [2, 2, 1], // smaller part B
];

/// The required gap when a part of color `smaller` sits below a part of
/// color `larger`.
pub fn gap_required(smaller: Color, larger: Color) -> u32 {
    DIFF_MATRIX[smaller.index()][larger.index()]
}

/// The equivalent forbidden-pattern presentation: `(smaller color, distance,
/// larger color)` triples that may not appear together in a partition.
const FORBIDDEN_PATTERNS: [(Color, u32, Color); 8] = [
    (Color::R, 1, Color::R),
    (Color::R, 2, Color::R),
    (Color::R, 1, Color::B),
    (Color::G, 1, Color::R),
    (Color::G, 2, Color::R),
    (Color::G, 1, Color::B),
    (Color::B, 1, Color::R),
    (Color::B, 1, Color::G),
];

/// One colored part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColoredPart {
    pub size: u32,
    pub color: Color,
}

impl ColoredPart {
    pub fn new(size: u32, color: Color) -> Self {
        assert!(size >= 1, "part sizes are positive");
        ColoredPart { size, color }
    }
}

impl fmt::Display for ColoredPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.size, self.color)
    }
}

impl FromStr for ColoredPart {
    type Err = PartitionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let split = s
            .char_indices()
            .find(|(_, c)| c.is_ascii_alphabetic())
            .map(|(i, _)| i)
            .ok_or_else(|| PartitionError::Parse(format!("no color in part '{s}'")))?;
        let size: u32 = s[..split]
            .parse()
            .map_err(|_| PartitionError::Parse(format!("bad size in part '{s}'")))?;
        if size == 0 {
            return Err(PartitionError::Parse("part size 0".into()));
        }
        let color: Color = s[split..].parse()?;
        Ok(ColoredPart { size, color })
    }
}

/// A colored partition: parts in strictly decreasing size order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColoredPartition {
    parts: Vec<ColoredPart>,
}

impl ColoredPartition {
    /// Wrap a part list, sorting it into descending size order; fails if two
    /// parts share a size.
    pub fn new(mut parts: Vec<ColoredPart>) -> Result<Self, PartitionError> {
        parts.sort_by(|a, b| b.size.cmp(&a.size));
        if parts.windows(2).any(|w| w[0].size == w[1].size) {
            return Err(PartitionError::Parse("part sizes must be distinct".into()));
        }
        Ok(ColoredPartition { parts })
    }

    pub fn empty() -> Self {
        ColoredPartition { parts: Vec::new() }
    }

    /// Parts in descending size order.
    pub fn parts(&self) -> &[ColoredPart] {
        &self.parts
    }

    pub fn total(&self) -> u32 {
        self.parts.iter().map(|p| p.size).sum()
    }

    pub fn num_parts(&self) -> u32 {
        self.parts.len() as u32
    }

    /// The statistic value under `stat` (see [`Stat`]).
    pub fn stat_value(&self, stat: Stat) -> u32 {
        self.parts.iter().map(|p| stat.weight(p.color)).sum()
    }

    /// Gap-matrix admissibility, tested pairwise: every two parts, not just
    /// size-adjacent ones, must satisfy the gap bound. (For this matrix the
    /// pairwise and adjacent-only conditions agree, which the tests verify
    /// by comparing this predicate with [`ColoredPartition::admissible_by_patterns`].)
    pub fn admissible_by_gaps(&self) -> bool {
        for (hi, larger) in self.parts.iter().enumerate() {
            for smaller in &self.parts[hi + 1..] {
                if larger.size == smaller.size {
                    return false;
                }
                if larger.size - smaller.size < gap_required(smaller.color, larger.color) {
                    return false;
                }
            }
        }
        true
    }

    /// Forbidden-pattern admissibility: no two parts (in any position) may
    /// form one of the eight banned `(smaller, distance, larger)` patterns,
    /// and sizes must be distinct.
    pub fn admissible_by_patterns(&self) -> bool {
        for (hi, larger) in self.parts.iter().enumerate() {
            for smaller in &self.parts[hi + 1..] {
                if larger.size == smaller.size {
                    return false;
                }
                let d = larger.size - smaller.size;
                for (sc, dist, lc) in FORBIDDEN_PATTERNS {
                    if smaller.color == sc && d == dist && larger.color == lc {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// True when no part lies in `forbidden`.
    pub fn avoids(&self, forbidden: &ForbiddenSet) -> bool {
        self.parts.iter().all(|p| !forbidden.contains(*p))
    }
}

impl fmt::Display for ColoredPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "(empty)");
        }
        let rendered: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", rendered.join("+"))
    }
}

impl FromStr for ColoredPartition {
    type Err = PartitionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "(empty)" || s.is_empty() {
            return Ok(ColoredPartition::empty());
        }
        let parts = s
            .split('+')
            .map(|p| p.trim().parse())
            .collect::<Result<Vec<ColoredPart>, _>>()?;
        ColoredPartition::new(parts)
    }
}

/// A set of individual parts banned from appearing.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ForbiddenSet {
    parts: BTreeSet<(u32, Color)>,
}

impl ForbiddenSet {
    pub fn empty() -> Self {
        ForbiddenSet::default()
    }

    pub fn of(parts: &[(u32, Color)]) -> Self {
        ForbiddenSet {
            parts: parts.iter().copied().collect(),
        }
    }

    pub fn contains(&self, part: ColoredPart) -> bool {
        self.parts.contains(&(part.size, part.color))
    }
}

impl fmt::Display for ForbiddenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rendered: Vec<String> = self
            .parts
            .iter()
            .map(|(size, color)| format!("{size}{color}"))
            .collect();
        write!(f, "{}", rendered.join(","))
    }
}

impl FromStr for ForbiddenSet {
    type Err = PartitionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim();
        if trimmed.is_empty() {
            return Ok(ForbiddenSet::empty());
        }
        let mut parts = BTreeSet::new();
        for piece in trimmed.split(',') {
            let p: ColoredPart = piece.trim().parse()?;
            parts.insert((p.size, p.color));
        }
        Ok(ForbiddenSet { parts })
    }
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

/// All partitions of `n` in the colored class avoiding `forbidden`, in
/// canonical order: part lists compared by (size descending, color R < G < B),
/// largest parts first — e.g. at n = 6 the list starts `6R, 6G, 6B, 5R+1G, …`.
pub fn enumerate_gamma(
    n: u32,
    forbidden: &ForbiddenSet,
) -> Result<Vec<ColoredPartition>, PartitionError> {
    if n > BRUTE_FORCE_CAP {
        return Err(PartitionError::CapExceeded {
            n,
            cap: BRUTE_FORCE_CAP,
        });
    }
    let mut out = Vec::new();
    let mut stack: Vec<ColoredPart> = Vec::new();
    descend(n, n, &mut stack, forbidden, &mut out);
    for p in &out {
        debug_assert!(p.admissible_by_gaps() && p.avoids(forbidden));
    }
    Ok(out)
}

/// Extend the partial partition on `stack` (parts chosen so far, descending)
/// by all admissible next parts of size at most `max_size`.
fn descend(
    remaining: u32,
    max_size: u32,
    stack: &mut Vec<ColoredPart>,
    forbidden: &ForbiddenSet,
    out: &mut Vec<ColoredPartition>,
) {
    if remaining == 0 {
        out.push(ColoredPartition {
            parts: stack.clone(),
        });
        return;
    }
    let mut size = remaining.min(max_size);
    while size >= 1 {
        for color in Color::ALL {
            let part = ColoredPart::new(size, color);
            if forbidden.contains(part) {
                continue;
            }
            if let Some(prev) = stack.last() {
                // `part` goes below `prev`: the gap is read from the row of
                // the smaller part's color.
                if prev.size - size < gap_required(color, prev.color) {
                    continue;
                }
            }
            stack.push(part);
            let next_max = size.saturating_sub(1);
            descend(remaining - size, next_max, stack, forbidden, out);
            stack.pop();
        }
        size -= 1;
    }
}

// ---------------------------------------------------------------------------
// Counting (dynamic program)
// ---------------------------------------------------------------------------

/// The restricted count variants: which small parts are banned.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountVariant {
    /// No `1R`.
    Q1,
    /// No `1R`, `1G`.
    Q2,
    /// No `1R`, `2R`, `1B`.
    Q3,
    /// No `1R`, with the red-weighted statistic (the refinement variant).
    Qstar1,
}

impl CountVariant {
    pub fn forbidden(&self) -> ForbiddenSet {
        match self {
            CountVariant::Q1 | CountVariant::Qstar1 => ForbiddenSet::of(&[(1, Color::R)]),
            CountVariant::Q2 => ForbiddenSet::of(&[(1, Color::R), (1, Color::G)]),
            CountVariant::Q3 => {
                ForbiddenSet::of(&[(1, Color::R), (2, Color::R), (1, Color::B)])
            }
        }
    }
}

/// The part statistic tracked in the `m` slot of a [`CountTable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stat {
    /// Every part counts 1: `m` is the number of parts.
    NumParts,
    /// Red parts count 2, green and blue count 1.
    Weighted,
}

impl Stat {
    fn weight(self, color: Color) -> u32 {
        match (self, color) {
            (Stat::Weighted, Color::R) => 2,
            _ => 1,
        }
    }
}

/// A table of counts indexed by `(m, n)`: `m` the part statistic, `n` the
/// partition total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    order: u32,
    counts: BTreeMap<(u32, u32), u64>,
}

impl CountTable {
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn get(&self, m: u32, n: u32) -> u64 {
        self.counts.get(&(m, n)).copied().unwrap_or(0)
    }

    /// Overwrite one entry (useful for mutation tests; zero removes it).
    pub fn set(&mut self, m: u32, n: u32, count: u64) {
        if count == 0 {
            self.counts.remove(&(m, n));
        } else {
            self.counts.insert((m, n), count);
        }
    }

    /// Sum over `m` at fixed `n`: the unrefined count.
    pub fn total_at(&self, n: u32) -> u64 {
        self.counts
            .range((0, 0)..)
            .filter(|((_, nn), _)| *nn == n)
            .map(|(_, c)| *c)
            .sum()
    }

    /// The generating series `sum counts(m, n) x^m q^n`.
    pub fn to_series(&self) -> TruncSeries {
        let mut s = TruncSeries::zero(self.order);
        for ((m, n), c) in &self.counts {
            s = s.add(&TruncSeries::monomial(
                self.order,
                BigRat::from_integer(BigInt::from(*c)),
                *n,
                *m,
            ));
        }
        s
    }

    /// JSON object keyed `"m,n"` with integer values.
    pub fn to_json(&self) -> String {
        let mut map = serde_json::Map::new();
        for ((m, n), c) in &self.counts {
            map.insert(format!("{m},{n}"), serde_json::json!(c));
        }
        serde_json::to_string_pretty(&serde_json::Value::Object(map))
            .expect("count table serialization cannot fail")
    }
}

/// Count the partitions of every `n <= order` in the class, restricted per
/// `variant`, refined by the `stat` statistic.
///
/// Dynamic program over states (size of the smallest part so far, its
/// color), scanning sizes downward: all gap constraints bind a part only to
/// the next larger part (row-wise reading of the gap table; the pairwise
/// condition follows because gaps accumulate), so the table for state
/// `(s, c)` is `x^w(c) q^s` times 1 plus the sum over colors `c'` of all
/// states `(t, c')` with `t >= s + gap[c][c']`. Per-color suffix sums make
/// each step O(1) table merges.
pub fn count_gamma(variant: CountVariant, order: u32, stat: Stat) -> CountTable {
    type Table = BTreeMap<(u32, u32), u64>;

    fn add_into(acc: &mut Table, other: &Table) {
        for (k, v) in other {
            let slot = acc.entry(*k).or_insert(0);
            *slot = slot.checked_add(*v).expect("partition count overflow");
        }
    }

    let forbidden = variant.forbidden();
    let size = order as usize + 4;
    // per_state[s][c]: table for partitions whose smallest part is s, color c
    let mut per_state: Vec<[Table; 3]> = vec![Default::default(); size];
    // suffix[s][c]: sum of per_state[t][c] over t >= s
    let mut suffix: Vec<[Table; 3]> = vec![Default::default(); size];

    for s in (1..=order).rev() {
        for color in Color::ALL {
            let c = color.index();
            if forbidden.contains(ColoredPart::new(s, color)) {
                // state stays empty; suffix still propagates below
            } else {
                // 1 (this part is the whole partition) + continuations
                let mut acc: Table = BTreeMap::new();
                acc.insert((0, 0), 1);
                for larger in Color::ALL {
                    let t = s + gap_required(color, larger);
                    if t <= order {
                        add_into(&mut acc, &suffix[t as usize][larger.index()]);
                    }
                }
                // multiply by x^weight q^s
                let w = stat.weight(color);
                let shifted: Table = acc
                    .into_iter()
                    .filter(|((_, n), _)| n + s <= order)
                    .map(|((m, n), v)| ((m + w, n + s), v))
                    .collect();
                per_state[s as usize][c] = shifted;
            }
            let mut suf = suffix[s as usize + 1][c].clone();
            add_into(&mut suf, &per_state[s as usize][c]);
            suffix[s as usize][c] = suf;
        }
    }

    let mut counts: Table = BTreeMap::new();
    counts.insert((0, 0), 1); // the empty partition
    for c in 0..3 {
        add_into(&mut counts, &suffix[1][c]);
    }
    CountTable { order, counts }
}

// ---------------------------------------------------------------------------
// The functional-equation system and its decoupled form
// ---------------------------------------------------------------------------

/// Residuals (left minus right) of the coupled system on three given series:
///
/// ```text
///   g1(x) = xq^2 g3(xq^2) + xq g3(xq) + xq g2(xq) + g1(xq)
///   g2(x) = xq^2 g3(xq^2) + xq g2(xq) + g1(xq)
///   g3(x) = xq g3(xq) + g1(xq)
/// ```
///
/// All three vanish when `g1, g2, g3` are the generating series of the Q1,
/// Q2, Q3 counts: stripping the smallest part of a partition (and sliding
/// everything down) lands in the variant matching that part's color row.
pub fn q_system_residuals(
    g1: &TruncSeries,
    g2: &TruncSeries,
    g3: &TruncSeries,
) -> [TruncSeries; 3] {
    let xq: PolyQX = "q*x".parse().expect("literal");
    let xq2: PolyQX = "q^2*x".parse().expect("literal");
    let r1 = g1
        .sub(&g3.subst_xq(2).mul_poly(&xq2))
        .sub(&g3.subst_xq(1).mul_poly(&xq))
        .sub(&g2.subst_xq(1).mul_poly(&xq))
        .sub(&g1.subst_xq(1));
    let r2 = g2
        .sub(&g3.subst_xq(2).mul_poly(&xq2))
        .sub(&g2.subst_xq(1).mul_poly(&xq))
        .sub(&g1.subst_xq(1));
    let r3 = g3.sub(&g3.subst_xq(1).mul_poly(&xq)).sub(&g1.subst_xq(1));
    [r1, r2, r3]
}

/// True iff the counted Q1/Q2/Q3 series satisfy the coupled system through
/// `order`.
pub fn q_system_check(order: u32) -> bool {
    let g1 = count_gamma(CountVariant::Q1, order, Stat::NumParts).to_series();
    let g2 = count_gamma(CountVariant::Q2, order, Stat::NumParts).to_series();
    let g3 = count_gamma(CountVariant::Q3, order, Stat::NumParts).to_series();
    q_system_residuals(&g1, &g2, &g3)
        .iter()
        .all(|r| r.is_zero())
}

/// The decoupled third-order equation satisfied by the Q1 series alone:
/// `f(x) = (1+xq+xq^2) f(xq) + xq(1-q-xq^3) f(xq^2) + xq^2(1-xq^2) f(xq^3)`,
/// in homogeneous form.
pub fn untangled_funceq_q1() -> FuncEq {
    FuncEq::new(vec![
        ("1", 0),
        ("-1 - q*x - q^2*x", 1),
        ("-q*x + q^2*x + q^4*x^2", 2),
        ("-q^2*x + q^4*x^2", 3),
    ]
    .into_iter()
    .map(|(s, i)| (s.parse().expect("literal"), i))
    .collect())
}

/// The decoupled third-order equation satisfied by the Q3 series alone:
/// `f(x) = (1+xq+xq^2) f(xq) - x^2 q^4 f(xq^2) + xq^3(1-xq^2) f(xq^3)`,
/// in homogeneous form.
pub fn untangled_funceq_q3() -> FuncEq {
    FuncEq::new(vec![
        ("1", 0),
        ("-1 - q*x - q^2*x", 1),
        ("q^4*x^2", 2),
        ("-q^3*x + q^5*x^2", 3),
    ]
    .into_iter()
    .map(|(s, i)| (s.parse().expect("literal"), i))
    .collect())
}

/// True iff the Q1 and Q3 series satisfy their decoupled equations through
/// `order`.
pub fn untangled_check(order: u32) -> bool {
    let g1 = count_gamma(CountVariant::Q1, order, Stat::NumParts).to_series();
    let g3 = count_gamma(CountVariant::Q3, order, Stat::NumParts).to_series();
    let ok1 = crate::qseries::funceq_check(&g1, &untangled_funceq_q1(), order)
        .expect("orders match");
    let ok3 = crate::qseries::funceq_check(&g3, &untangled_funceq_q3(), order)
        .expect("orders match");
    ok1 && ok3
}

// ---------------------------------------------------------------------------
// Pair-partition oracle
// ---------------------------------------------------------------------------

/// Count pairs (λ, μ) of ordinary partitions with `|λ| + |μ| = n`, λ into
/// distinct parts, μ with gaps at least 2 (and, for RR2, smallest part at
/// least 2). Returns the total and the refinement by total number of parts.
/// This is the brute-force oracle for the coefficients of
/// [`crate::qseries::pair_gf`].
pub fn pair_partition_count(
    n: u32,
    variant: RRVariant,
) -> Result<(u64, BTreeMap<u32, u64>), PartitionError> {
    if n > BRUTE_FORCE_CAP {
        return Err(PartitionError::CapExceeded {
            n,
            cap: BRUTE_FORCE_CAP,
        });
    }
    let (mu_gap, mu_min) = match variant {
        RRVariant::RR1 => (2, 1),
        RRVariant::RR2 => (2, 2),
    };
    let mut by_parts: BTreeMap<u32, u64> = BTreeMap::new();
    for a in 0..=n {
        let lambda = gapped_partition_counts(a, 1, 1);
        let mu = gapped_partition_counts(n - a, mu_gap, mu_min);
        for (ml, cl) in &lambda {
            for (mm, cm) in &mu {
                *by_parts.entry(ml + mm).or_insert(0) += cl * cm;
            }
        }
    }
    let total = by_parts.values().sum();
    Ok((total, by_parts))
}

/// Partitions of `n` whose consecutive parts differ by at least `min_gap`
/// and whose smallest part is at least `min_part`, counted by number of
/// parts.
fn gapped_partition_counts(n: u32, min_gap: u32, min_part: u32) -> BTreeMap<u32, u64> {
    fn rec(
        remaining: u32,
        max_part: u32,
        depth: u32,
        min_gap: u32,
        min_part: u32,
        acc: &mut BTreeMap<u32, u64>,
    ) {
        if remaining == 0 {
            *acc.entry(depth).or_insert(0) += 1;
            return;
        }
        let mut p = remaining.min(max_part);
        while p >= min_part {
            rec(
                remaining - p,
                p.saturating_sub(min_gap),
                depth + 1,
                min_gap,
                min_part,
                acc,
            );
            p -= 1;
        }
    }
    let mut acc = BTreeMap::new();
    rec(n, n, 0, min_gap, min_part, &mut acc);
    acc
}

// ---------------------------------------------------------------------------
// tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::pair_gf;
    use proptest::prelude::*;

    fn names(list: &[ColoredPartition]) -> Vec<String> {
        list.iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn six_with_first_restriction_is_the_known_eighteen() {
        let got = enumerate_gamma(6, &CountVariant::Q1.forbidden()).unwrap();
        let expected = [
            "6R", "6G", "6B", "5R+1G", "5R+1B", "5G+1G", "5G+1B", "5B+1G", "5B+1B",
            "4R+2B", "4G+2R", "4G+2G", "4G+2B", "4B+2R", "4B+2G", "4B+2B",
            "3G+2G+1G", "3B+2B+1B",
        ];
        assert_eq!(names(&got), expected);
    }

    #[test]
    fn six_with_second_restriction_is_the_known_twelve() {
        let got = enumerate_gamma(6, &CountVariant::Q3.forbidden()).unwrap();
        let expected = [
            "6R", "6G", "6B", "5R+1G", "5G+1G", "5B+1G",
            "4R+2B", "4G+2G", "4G+2B", "4B+2G", "4B+2B", "3G+2G+1G",
        ];
        assert_eq!(names(&got), expected);
    }

    #[test]
    fn zero_gives_the_empty_partition() {
        let got = enumerate_gamma(0, &ForbiddenSet::empty()).unwrap();
        assert_eq!(got, vec![ColoredPartition::empty()]);
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(
            enumerate_gamma(31, &ForbiddenSet::empty()),
            Err(PartitionError::CapExceeded { n: 31, cap: 30 })
        );
    }

    #[test]
    fn both_admissibility_predicates_agree() {
        // enumerate ALL strictly-decreasing-size colored partitions of n and
        // filter by each predicate independently
        fn all_colored(n: u32) -> Vec<ColoredPartition> {
            fn rec(remaining: u32, max: u32, stack: &mut Vec<ColoredPart>, out: &mut Vec<ColoredPartition>) {
                if remaining == 0 {
                    out.push(ColoredPartition { parts: stack.clone() });
                    return;
                }
                let mut s = remaining.min(max);
                while s >= 1 {
                    for color in Color::ALL {
                        stack.push(ColoredPart::new(s, color));
                        rec(remaining - s, s - 1, stack, out);
                        stack.pop();
                    }
                    s -= 1;
                }
            }
            let mut out = Vec::new();
            let mut stack = Vec::new();
            rec(n, n, &mut stack, &mut out);
            out
        }
        for n in 0..=14 {
            let everything = all_colored(n);
            let by_gaps: Vec<&ColoredPartition> =
                everything.iter().filter(|p| p.admissible_by_gaps()).collect();
            let by_patterns: Vec<&ColoredPartition> = everything
                .iter()
                .filter(|p| p.admissible_by_patterns())
                .collect();
            assert_eq!(by_gaps, by_patterns, "predicates disagree at n = {n}");
            let enumerated = enumerate_gamma(n, &ForbiddenSet::empty()).unwrap();
            let mut enumerated_sorted: Vec<String> = names(&enumerated);
            enumerated_sorted.sort();
            let mut direct: Vec<String> =
                by_gaps.iter().map(|p| p.to_string()).collect();
            direct.sort();
            assert_eq!(enumerated_sorted, direct, "enumeration disagrees at n = {n}");
        }
    }

    #[test]
    fn dp_matches_enumeration_refined() {
        for (variant, stat) in [
            (CountVariant::Q1, Stat::NumParts),
            (CountVariant::Q2, Stat::NumParts),
            (CountVariant::Q3, Stat::NumParts),
            (CountVariant::Qstar1, Stat::Weighted),
        ] {
            let order = 18;
            let table = count_gamma(variant, order, stat);
            for n in 0..=order {
                let brute = enumerate_gamma(n, &variant.forbidden()).unwrap();
                let mut refined: BTreeMap<u32, u64> = BTreeMap::new();
                for p in &brute {
                    *refined.entry(p.stat_value(stat)).or_insert(0) += 1;
                }
                for m in 0..=2 * n + 1 {
                    assert_eq!(
                        table.get(m, n),
                        refined.get(&m).copied().unwrap_or(0),
                        "{variant:?} at (m,n) = ({m},{n})"
                    );
                }
            }
        }
    }

    #[test]
    fn small_count_values() {
        let q1 = count_gamma(CountVariant::Q1, 6, Stat::NumParts);
        assert_eq!(q1.get(1, 1), 2); // 1G, 1B
        assert_eq!(q1.total_at(6), 18);
        let q3 = count_gamma(CountVariant::Q3, 6, Stat::NumParts);
        assert_eq!(q3.get(1, 1), 1); // 1G only
        assert_eq!(q3.total_at(6), 12);
        let q2 = count_gamma(CountVariant::Q2, 6, Stat::NumParts);
        assert_eq!(q2.get(1, 1), 1); // 1B only
    }

    #[test]
    fn q_system_holds() {
        assert!(q_system_check(30));
        assert!(q_system_check(0));
    }

    #[test]
    fn q_system_mutation_fails() {
        let order = 12;
        let mut t2 = count_gamma(CountVariant::Q2, order, Stat::NumParts);
        t2.set(1, 1, t2.get(1, 1) + 1);
        let g1 = count_gamma(CountVariant::Q1, order, Stat::NumParts).to_series();
        let g3 = count_gamma(CountVariant::Q3, order, Stat::NumParts).to_series();
        let residuals = q_system_residuals(&g1, &t2.to_series(), &g3);
        assert!(residuals.iter().any(|r| !r.is_zero()));
    }

    #[test]
    fn untangled_holds_and_mutation_fails() {
        assert!(untangled_check(30));
        assert!(untangled_check(0));
        let order = 12;
        let mut t1 = count_gamma(CountVariant::Q1, order, Stat::NumParts);
        t1.set(2, 5, t1.get(2, 5) + 1);
        let corrupted = crate::qseries::funceq_check(
            &t1.to_series(),
            &untangled_funceq_q1(),
            order,
        )
        .unwrap();
        assert!(!corrupted);
    }

    #[test]
    fn pair_counts_match_series() {
        for variant in [RRVariant::RR1, RRVariant::RR2] {
            let gf = pair_gf(variant, 12);
            for n in 0..=12 {
                let (total, by_parts) = pair_partition_count(n, variant).unwrap();
                assert_eq!(
                    gf.at_x_one().coeff(n, 0),
                    crate::exactmath::rat(total as i64),
                    "{variant:?} total at n = {n}"
                );
                for (m, c) in by_parts {
                    assert_eq!(
                        gf.coeff(n, m),
                        crate::exactmath::rat(c as i64),
                        "{variant:?} refined at (n, m) = ({n},{m})"
                    );
                }
            }
        }
    }

    #[test]
    fn pair_count_examples() {
        assert_eq!(pair_partition_count(0, RRVariant::RR1).unwrap().0, 1);
        assert_eq!(pair_partition_count(4, RRVariant::RR1).unwrap().0, 8);
        assert_eq!(pair_partition_count(2, RRVariant::RR2).unwrap().0, 2);
    }

    #[test]
    fn count_table_json_shape() {
        let t = count_gamma(CountVariant::Q3, 2, Stat::NumParts);
        let json = t.to_json();
        let v: serde_json::Value = json.parse().unwrap();
        assert_eq!(v["0,0"], 1);
        assert_eq!(v["1,1"], 1);
    }

    #[test]
    fn partition_string_roundtrip() {
        for s in ["6R", "5R+1G", "3B+2B+1B", "(empty)"] {
            let p: ColoredPartition = s.parse().unwrap();
            assert_eq!(p.to_string(), s);
        }
        assert!("3Q".parse::<ColoredPartition>().is_err());
        assert!("3R+3G".parse::<ColoredPartition>().is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn prop_enumerated_partitions_validate(n in 0u32..16) {
            let forbidden = CountVariant::Q3.forbidden();
            let list = enumerate_gamma(n, &forbidden).unwrap();
            for p in &list {
                prop_assert!(p.admissible_by_gaps());
                prop_assert!(p.admissible_by_patterns());
                prop_assert!(p.avoids(&forbidden));
                prop_assert_eq!(p.total(), n);
            }
            // canonical order is strictly increasing under the sort key
            let keys: Vec<Vec<(i64, u8)>> = list
                .iter()
                .map(|p| {
                    p.parts()
                        .iter()
                        .map(|part| (-(part.size as i64), part.color.index() as u8))
                        .collect()
                })
                .collect();
            for w in keys.windows(2) {
                prop_assert!(w[0] < w[1], "enumeration out of canonical order");
            }
        }
    }
}
