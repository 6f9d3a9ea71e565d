//! Truncated formal power series in `q` with polynomial-in-`x` coefficients,
//! Pochhammer products, and the classical sum/product sides.
//!
//! The central type is [`TruncSeries`]: a power series in `q`, exact through
//! a truncation order `N`, whose coefficients are polynomials in the marker
//! variable `x`. On top of it this module provides:
//!
//! * [`pochhammer`] — finite and infinite q-Pochhammer products
//!   `(a; q^b)_n` for a monomial `a`;
//! * [`product_side`] — the two mod-10 infinite products whose coefficients
//!   the partition counts must match;
//! * [`pair_gf`] — the two-variable generating functions for pairs
//!   (distinct-parts partition, gap-at-least-2 partition), in both classical
//!   variants;
//! * [`euler_factorize`] / [`euler_reconstruct`] — recovery of the exponents
//!   `e_k` with `s = prod (1 - q^k)^(-e_k)`, and the inverse operation;
//! * [`funceq_check`] — verification that a series annihilates a functional
//!   equation built from multipliers and substitutions `x -> x*q^i`.
//!
//! All coefficients are exact rationals; nothing here rounds or floats.

use crate::exactmath::{rat, BigRat, ExactMathError, PolyQX};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Errors from series construction and checking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QSeriesError {
    /// Inversion or Euler factorization of a series whose constant term is
    /// not a nonzero x-free rational.
    NonUnitConstantTerm,
    /// An infinite Pochhammer product whose factors do not tend to 1
    /// coefficient-wise (the `a`-monomial has q-exponent 0).
    DivergentInfiniteProduct,
    /// A check was requested through an order the series does not carry.
    OrderMismatch { have: u32, want: u32 },
    /// Euler factorization met a non-integer exponent: the series is not a
    /// product of integer powers of (1 - q^k).
    NonIntegerExponent { part: u32 },
    /// A serialized series failed to parse.
    Parse(String),
}

impl fmt::Display for QSeriesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QSeriesError::NonUnitConstantTerm => {
                write!(f, "constant term is not a nonzero x-free rational")
            }
            QSeriesError::DivergentInfiniteProduct => {
                write!(f, "infinite product factors do not converge coefficient-wise")
            }
            QSeriesError::OrderMismatch { have, want } => {
                write!(f, "series carries order {have} but order {want} was requested")
            }
            QSeriesError::NonIntegerExponent { part } => {
                write!(f, "non-integer product exponent at part size {part}")
            }
            QSeriesError::Parse(msg) => write!(f, "series parse error: {msg}"),
        }
    }
}

impl std::error::Error for QSeriesError {}

// ---------------------------------------------------------------------------
// TruncSeries
// ---------------------------------------------------------------------------

/// A power series in `q`, exact through `q^order`, with polynomial-in-`x`
/// coefficients.
///
/// Conceptually the value is `sum_{k=0..order} c_k(x) q^k` for polynomials
/// `c_k`; terms beyond the order are unknown, not zero. Storage is a sparse
/// map from `(q-exponent, x-exponent)` to a nonzero rational. Binary
/// arithmetic results carry the minimum of the operand orders, which keeps
/// every stored coefficient exact. `x` is never truncated implicitly: the
/// functional equations mix x-degrees, and dropping x-terms silently would
/// break substitution exactness (see [`TruncSeries::truncate_x`] for the
/// explicit, caller-audited cap).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncSeries {
    order: u32,
    terms: BTreeMap<(u32, u32), BigRat>,
}

impl TruncSeries {
    /// The zero series at the given order.
    pub fn zero(order: u32) -> Self {
        TruncSeries {
            order,
            terms: BTreeMap::new(),
        }
    }

    /// The constant series 1 at the given order.
    pub fn one(order: u32) -> Self {
        TruncSeries::monomial(order, BigRat::one(), 0, 0)
    }

    /// The single term `c * q^qe * x^xe`, dropped if beyond the order.
    pub fn monomial(order: u32, c: BigRat, qe: u32, xe: u32) -> Self {
        let mut s = TruncSeries::zero(order);
        s.insert_add(qe, xe, c);
        s
    }

    /// Embed a polynomial, dropping q-monomials beyond the order.
    pub fn from_poly(p: &PolyQX, order: u32) -> Self {
        let mut s = TruncSeries::zero(order);
        for (qe, xe, c) in p.monomials() {
            s.insert_add(qe, xe, c.clone());
        }
        s
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `q^qe * x^xe` (zero if absent).
    pub fn coeff(&self, qe: u32, xe: u32) -> BigRat {
        self.terms
            .get(&(qe, xe))
            .cloned()
            .unwrap_or_else(BigRat::zero)
    }

    /// The full coefficient of `q^qe` as a polynomial in `x`.
    pub fn x_poly_at(&self, qe: u32) -> PolyQX {
        let mut p = PolyQX::zero();
        for ((k, xe), c) in self.terms.range((qe, 0)..=(qe, u32::MAX)) {
            debug_assert_eq!(*k, qe);
            p = p.add(&PolyQX::monomial(c.clone(), 0, *xe));
        }
        p
    }

    /// Iterate `(q_exp, x_exp, coeff)` in ascending `(q_exp, x_exp)` order.
    pub fn iter(&self) -> impl Iterator<Item = (u32, u32, &BigRat)> {
        self.terms.iter().map(|((q, x), c)| (*q, *x, c))
    }

    fn insert_add(&mut self, qe: u32, xe: u32, c: BigRat) {
        if qe > self.order || c.is_zero() {
            return;
        }
        let entry = self
            .terms
            .entry((qe, xe))
            .or_insert_with(BigRat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&(qe, xe));
        }
    }

    pub fn add(&self, other: &TruncSeries) -> TruncSeries {
        let order = self.order.min(other.order);
        let mut out = self.truncate(order);
        for ((qe, xe), c) in &other.terms {
            out.insert_add(*qe, *xe, c.clone());
        }
        out
    }

    pub fn neg(&self) -> TruncSeries {
        TruncSeries {
            order: self.order,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (*k, -c.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &TruncSeries) -> TruncSeries {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &TruncSeries) -> TruncSeries {
        let order = self.order.min(other.order);
        let mut out = TruncSeries::zero(order);
        for ((qa, xa), ca) in &self.terms {
            if *qa > order {
                continue;
            }
            for ((qb, xb), cb) in other.terms.range((0u32, 0u32)..=(order - qa, u32::MAX)) {
                out.insert_add(qa + qb, xa + xb, ca * cb);
            }
        }
        out
    }

    /// Multiply by an exact polynomial (order unchanged).
    pub fn mul_poly(&self, p: &PolyQX) -> TruncSeries {
        let mut out = TruncSeries::zero(self.order);
        for (qp, xp, cp) in p.monomials() {
            for ((qs, xs), cs) in &self.terms {
                if qs + qp <= self.order {
                    out.insert_add(qs + qp, xs + xp, cs * cp);
                }
            }
        }
        out
    }

    /// Multiply by the scalar `c`.
    pub fn scale(&self, c: &BigRat) -> TruncSeries {
        if c.is_zero() {
            return TruncSeries::zero(self.order);
        }
        TruncSeries {
            order: self.order,
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    /// Substitute `x -> x * q^i`: each monomial `c q^a x^m` becomes
    /// `c q^(a+i*m) x^m`, exactly, with terms pushed past the order dropped.
    pub fn subst_xq(&self, i: u32) -> TruncSeries {
        let mut out = TruncSeries::zero(self.order);
        for ((qe, xe), c) in &self.terms {
            let shifted = qe + i * xe;
            out.insert_add(shifted, *xe, c.clone());
        }
        out
    }

    /// Lower the order to `min(order, new_order)`, dropping excess terms.
    pub fn truncate(&self, new_order: u32) -> TruncSeries {
        let order = self.order.min(new_order);
        TruncSeries {
            order,
            terms: self
                .terms
                .iter()
                .filter(|((qe, _), _)| *qe <= order)
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
        }
    }

    /// Drop all terms with x-degree above `max_x` (order unchanged).
    ///
    /// Only sound when the caller knows no later operation can lower an
    /// x-degree (substitutions never do; multiplications only raise it), so
    /// the dropped terms could never have influenced the retained ones.
    pub fn truncate_x(&self, max_x: u32) -> TruncSeries {
        TruncSeries {
            order: self.order,
            terms: self
                .terms
                .iter()
                .filter(|((_, xe), _)| *xe <= max_x)
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
        }
    }

    /// Specialize the marker: `x = 1`, collapsing each q-coefficient to a
    /// rational.
    pub fn at_x_one(&self) -> TruncSeries {
        let mut out = TruncSeries::zero(self.order);
        for ((qe, _), c) in &self.terms {
            out.insert_add(*qe, 0, c.clone());
        }
        out
    }

    /// True when no term carries a positive x-degree.
    pub fn is_x_free(&self) -> bool {
        self.terms.keys().all(|(_, xe)| *xe == 0)
    }

    /// Multiplicative inverse through the order.
    ///
    /// Requires the constant term (coefficient of `q^0`) to be a nonzero
    /// x-free rational; the inverse is then computed by the standard
    /// convolution recurrence on q-coefficients.
    pub fn invert(&self) -> Result<TruncSeries, QSeriesError> {
        let c0 = self.coeff(0, 0);
        if c0.is_zero() || self.x_poly_at(0).degree_x().unwrap_or(0) > 0 {
            return Err(QSeriesError::NonUnitConstantTerm);
        }
        // b_n = (delta_{n,0} - sum_{k=1..n} a_k b_{n-k}) / a_0, with each
        // a_k, b_k a polynomial in x.
        let mut buckets: Vec<Vec<(u32, BigRat)>> = vec![Vec::new(); self.order as usize + 1];
        for ((qe, xe), c) in &self.terms {
            buckets[*qe as usize].push((*xe, c.clone()));
        }
        let mut inv_buckets: Vec<BTreeMap<u32, BigRat>> =
            vec![BTreeMap::new(); self.order as usize + 1];
        inv_buckets[0].insert(0, BigRat::one() / &c0);
        for n in 1..=self.order as usize {
            let mut acc: BTreeMap<u32, BigRat> = BTreeMap::new();
            for k in 1..=n {
                for (xa, ca) in &buckets[k] {
                    for (xb, cb) in &inv_buckets[n - k] {
                        let e = acc.entry(xa + xb).or_insert_with(BigRat::zero);
                        *e += ca * cb;
                    }
                }
            }
            inv_buckets[n] = acc
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(xe, c)| (xe, -c / &c0))
                .collect();
        }
        let mut out = TruncSeries::zero(self.order);
        for (qe, bucket) in inv_buckets.into_iter().enumerate() {
            for (xe, c) in bucket {
                out.insert_add(qe as u32, xe, c);
            }
        }
        Ok(out)
    }

    /// Integer power, inverting first for negative exponents.
    pub fn pow(&self, e: i64) -> Result<TruncSeries, QSeriesError> {
        let base = if e < 0 { self.invert()? } else { self.clone() };
        let mut out = TruncSeries::one(self.order);
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        Ok(out)
    }

    /// Serialize as `{order, coeffs: [{qexp, coeff}]}` with each coefficient
    /// a polynomial-in-x string in the shared text grammar.
    pub fn to_json(&self) -> String {
        let mut by_q: BTreeMap<u32, PolyQX> = BTreeMap::new();
        for ((qe, xe), c) in &self.terms {
            let entry = by_q.entry(*qe).or_insert_with(PolyQX::zero);
            *entry = entry.add(&PolyQX::monomial(c.clone(), 0, *xe));
        }
        let repr = SeriesRepr {
            order: self.order,
            coeffs: by_q
                .into_iter()
                .map(|(qexp, p)| CoeffRepr {
                    qexp,
                    coeff: p.to_string(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&repr).expect("series serialization cannot fail")
    }

    /// Parse the JSON form produced by [`TruncSeries::to_json`].
    pub fn from_json(s: &str) -> Result<TruncSeries, QSeriesError> {
        let repr: SeriesRepr =
            serde_json::from_str(s).map_err(|e| QSeriesError::Parse(e.to_string()))?;
        let mut out = TruncSeries::zero(repr.order);
        for entry in repr.coeffs {
            let p: PolyQX = entry
                .coeff
                .parse()
                .map_err(|e: ExactMathError| QSeriesError::Parse(e.to_string()))?;
            if p.degree_q().unwrap_or(0) > 0 {
                return Err(QSeriesError::Parse(format!(
                    "coefficient of q^{} contains q",
                    entry.qexp
                )));
            }
            for (_, xe, c) in p.monomials() {
                out.insert_add(entry.qexp, xe, c.clone());
            }
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    order: u32,
    coeffs: Vec<CoeffRepr>,
}

#[derive(Serialize, Deserialize)]
struct CoeffRepr {
    qexp: u32,
    coeff: String,
}

// ---------------------------------------------------------------------------
// Pochhammer products
// ---------------------------------------------------------------------------

/// Length of a Pochhammer product: a finite number of factors or all of them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PochLength {
    Finite(u32),
    Infinite,
}

/// A q-Pochhammer product `(a; q^base)_length` for the monomial
/// `a = sign * x^x_exp * q^q_exp`: the product of factors
/// `1 - a * q^(base*(j-1))` over `j = 1..=length`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PochSpec {
    /// `false` for `a` positive, `true` for `a` negative (so the factors read
    /// `1 + |a| q^...`).
    pub a_negative: bool,
    /// x-exponent of the monomial `a`.
    pub a_x_exp: u32,
    /// q-exponent of the monomial `a`.
    pub a_q_exp: u32,
    /// Exponent `b` of the base `q^b`; must be at least 1.
    pub base_exp: u32,
    pub length: PochLength,
}

impl PochSpec {
    pub fn new(
        a_negative: bool,
        a_x_exp: u32,
        a_q_exp: u32,
        base_exp: u32,
        length: PochLength,
    ) -> Self {
        assert!(base_exp >= 1, "Pochhammer base exponent must be at least 1");
        PochSpec {
            a_negative,
            a_x_exp,
            a_q_exp,
            base_exp,
            length,
        }
    }

    /// `(q; q)_n`.
    pub fn finite_qq(n: u32) -> Self {
        PochSpec::new(false, 0, 1, 1, PochLength::Finite(n))
    }

    /// `(q^a; q^b)_inf`.
    pub fn infinite(a_q_exp: u32, base_exp: u32) -> Self {
        PochSpec::new(false, 0, a_q_exp, base_exp, PochLength::Infinite)
    }

    /// `(-xq; q)_inf`, the generating function for partitions into distinct
    /// parts with `x` marking the number of parts.
    pub fn distinct_parts() -> Self {
        PochSpec::new(true, 1, 1, 1, PochLength::Infinite)
    }
}

/// Evaluate a Pochhammer product as a truncated series.
///
/// Factors whose q-exponent already exceeds the order are 1 + O(q^(order+1))
/// and are skipped; for infinite length this is what makes the product
/// finite, and it requires the `a`-monomial to carry a positive q-exponent.
pub fn pochhammer(spec: PochSpec, order: u32) -> Result<TruncSeries, QSeriesError> {
    if matches!(spec.length, PochLength::Infinite) && spec.a_q_exp == 0 {
        return Err(QSeriesError::DivergentInfiniteProduct);
    }
    let sign = if spec.a_negative { rat(1) } else { rat(-1) };
    let mut out = TruncSeries::one(order);
    let mut j = 0u32;
    loop {
        if let PochLength::Finite(n) = spec.length {
            if j >= n {
                break;
            }
        }
        let qe = spec.a_q_exp + spec.base_exp * j;
        if qe > order {
            break;
        }
        let factor = TruncSeries::one(order).add(&TruncSeries::monomial(
            order,
            sign.clone(),
            qe,
            spec.a_x_exp,
        ));
        out = out.mul(&factor);
        j += 1;
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Product sides and pair generating functions
// ---------------------------------------------------------------------------

/// Selector for the two partition theorems the crate verifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TheoremId {
    One,
    Two,
}

impl TheoremId {
    pub fn from_number(n: u32) -> Option<TheoremId> {
        match n {
            1 => Some(TheoremId::One),
            2 => Some(TheoremId::Two),
            _ => None,
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TheoremId::One => write!(f, "1"),
            TheoremId::Two => write!(f, "2"),
        }
    }
}

/// The infinite-product side of each theorem:
///
/// * theorem 1: `1 / ((q; q^2)_inf (q, q^4; q^5)_inf)`
/// * theorem 2: `1 / ((q; q^2)_inf (q^2, q^3; q^5)_inf)`
///
/// i.e. partitions into parts that are odd or congruent to `+-1 (mod 5)`
/// (theorem 1) / `+-2 (mod 5)` (theorem 2), counted with multiplicity from
/// each factor they satisfy.
pub fn product_side(theorem: TheoremId, order: u32) -> TruncSeries {
    let (r1, r2) = match theorem {
        TheoremId::One => (1, 4),
        TheoremId::Two => (2, 3),
    };
    let odd = pochhammer(PochSpec::infinite(1, 2), order).expect("q-exponent 1");
    let m5a = pochhammer(PochSpec::infinite(r1, 5), order).expect("q-exponent >= 1");
    let m5b = pochhammer(PochSpec::infinite(r2, 5), order).expect("q-exponent >= 1");
    let denom = odd.mul(&m5a).mul(&m5b);
    denom.invert().expect("constant term 1")
}

/// The two classical Rogers-Ramanujan variants of the single-sum side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RRVariant {
    /// `sum_n x^n q^(n^2) / (q; q)_n` — gaps at least 2.
    RR1,
    /// `sum_n x^n q^(n^2+n) / (q; q)_n` — gaps at least 2 and smallest part
    /// at least 2.
    RR2,
}

/// The classical single-sum series for a Rogers-Ramanujan variant, with `x`
/// marking the number of parts.
pub fn rr_sum(variant: RRVariant, order: u32) -> TruncSeries {
    let mut out = TruncSeries::zero(order);
    let mut n = 0u32;
    loop {
        let head = match variant {
            RRVariant::RR1 => n * n,
            RRVariant::RR2 => n * n + n,
        };
        if head > order {
            break;
        }
        let poch = pochhammer(PochSpec::finite_qq(n), order).expect("finite product");
        let inv = poch.invert().expect("constant term 1");
        out = out.add(&inv.mul(&TruncSeries::monomial(order, BigRat::one(), head, n)));
        n += 1;
    }
    out
}

/// The generating function for pairs (distinct-parts partition,
/// gap-at-least-2 partition), with `x` marking the total number of parts:
/// `(-xq; q)_inf * rr_sum(variant)`.
pub fn pair_gf(variant: RRVariant, order: u32) -> TruncSeries {
    let distinct = pochhammer(PochSpec::distinct_parts(), order).expect("q-exponent 1");
    distinct.mul(&rr_sum(variant, order))
}

// ---------------------------------------------------------------------------
// Euler factorization
// ---------------------------------------------------------------------------

/// Recover the exponents `e_k` with `s = prod_k (1 - q^k)^(-e_k)` through the
/// order of `s`, returned sparsely (absent means zero).
///
/// Peels one part size at a time: after dividing out all factors with part
/// size below `k`, the remaining series is `1 + e_k q^k + O(q^(k+1))`.
/// Requires an x-free series with constant term exactly 1, and fails if any
/// recovered exponent is not an integer.
pub fn euler_factorize(s: &TruncSeries) -> Result<BTreeMap<u32, i64>, QSeriesError> {
    if !s.is_x_free() || !s.coeff(0, 0).is_one() {
        return Err(QSeriesError::NonUnitConstantTerm);
    }
    let order = s.order();
    let mut g = s.clone();
    let mut exponents = BTreeMap::new();
    for k in 1..=order {
        let c = g.coeff(k, 0);
        if c.is_zero() {
            continue;
        }
        if !c.denom().is_one() {
            return Err(QSeriesError::NonIntegerExponent { part: k });
        }
        let e = c
            .numer()
            .to_i64()
            .ok_or(QSeriesError::NonIntegerExponent { part: k })?;
        exponents.insert(k, e);
        // g *= (1 - q^k)^e  — this clears the coefficient of q^k.
        let factor = TruncSeries::one(order).sub(&TruncSeries::monomial(
            order,
            BigRat::one(),
            k,
            0,
        ));
        g = g.mul(&factor.pow(e).expect("nonzero constant term"));
    }
    Ok(exponents)
}

/// Rebuild `prod_k (1 - q^k)^(-e_k)` from an exponent map.
pub fn euler_reconstruct(exponents: &BTreeMap<u32, i64>, order: u32) -> TruncSeries {
    let mut out = TruncSeries::one(order);
    for (&k, &e) in exponents {
        if k > order || e == 0 {
            continue;
        }
        let factor = TruncSeries::one(order).sub(&TruncSeries::monomial(
            order,
            BigRat::one(),
            k,
            0,
        ));
        out = out.mul(&factor.pow(-e).expect("nonzero constant term"));
    }
    out
}

// ---------------------------------------------------------------------------
// Functional-equation checking
// ---------------------------------------------------------------------------

/// A homogeneous functional equation `sum_j c_j(q, x) * f(x q^(i_j)) = 0`,
/// given as the list of `(multiplier, substitution power)` pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuncEq {
    terms: Vec<(PolyQX, u32)>,
}

impl FuncEq {
    pub fn new(terms: Vec<(PolyQX, u32)>) -> Self {
        FuncEq { terms }
    }

    pub fn terms(&self) -> &[(PolyQX, u32)] {
        &self.terms
    }

    /// The residual `sum_j c_j(q, x) * f(x q^(i_j))` through `order`.
    pub fn residual(&self, f: &TruncSeries, order: u32) -> Result<TruncSeries, QSeriesError> {
        if f.order() < order {
            return Err(QSeriesError::OrderMismatch {
                have: f.order(),
                want: order,
            });
        }
        let f = f.truncate(order);
        let mut acc = TruncSeries::zero(order);
        for (coeff, shift) in &self.terms {
            acc = acc.add(&f.subst_xq(*shift).mul_poly(coeff));
        }
        Ok(acc)
    }
}

/// True iff the functional equation's residual on `f` vanishes through
/// `order`. Errors if `f` does not carry that many exact coefficients.
pub fn funceq_check(f: &TruncSeries, eq: &FuncEq, order: u32) -> Result<bool, QSeriesError> {
    Ok(eq.residual(f, order)?.is_zero())
}

/// The second-order functional equation satisfied by `pair_gf(variant)`:
///
/// * RR1: `f(x) = (1+xq) f(xq) + xq (1+xq)(1+xq^2) f(xq^2)`
/// * RR2: `f(x) = (1+xq) f(xq) + xq^2 (1+xq)(1+xq^2) f(xq^2)`
///
/// returned in homogeneous form (all terms on one side).
pub fn pair_funceq(variant: RRVariant) -> FuncEq {
    let one = PolyQX::one();
    let xq = PolyQX::monomial(BigRat::one(), 1, 1);
    let xq2 = PolyQX::monomial(BigRat::one(), 2, 1);
    let a = one.add(&xq); // 1 + xq
    let b = one.add(&xq2); // 1 + xq^2
    let head = match variant {
        RRVariant::RR1 => xq,
        RRVariant::RR2 => xq2,
    };
    FuncEq::new(vec![
        (one, 0),
        (a.neg(), 1),
        (head.mul(&a).mul(&b).neg(), 2),
    ])
}

// ---------------------------------------------------------------------------
// tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn geometric(order: u32) -> TruncSeries {
        let mut s = TruncSeries::zero(order);
        for k in 0..=order {
            s = s.add(&TruncSeries::monomial(order, rat(1), k, 0));
        }
        s
    }

    #[test]
    fn mul_of_geometric_telescopes() {
        let order = 30;
        let one_minus_q =
            TruncSeries::one(order).sub(&TruncSeries::monomial(order, rat(1), 1, 0));
        assert_eq!(one_minus_q.mul(&geometric(order)), TruncSeries::one(order));
    }

    #[test]
    fn invert_examples() {
        let order = 25;
        let one_minus_q =
            TruncSeries::one(order).sub(&TruncSeries::monomial(order, rat(1), 1, 0));
        assert_eq!(one_minus_q.invert().unwrap(), geometric(order));
        assert_eq!(
            TruncSeries::one(order).invert().unwrap(),
            TruncSeries::one(order)
        );
        assert_eq!(
            TruncSeries::zero(order).invert(),
            Err(QSeriesError::NonUnitConstantTerm)
        );
        // constant term 1 + x is a unit in Q[x][[q]] only if x-free: rejected
        let with_x = TruncSeries::one(order).add(&TruncSeries::monomial(order, rat(1), 0, 1));
        assert_eq!(with_x.invert(), Err(QSeriesError::NonUnitConstantTerm));
    }

    #[test]
    fn arithmetic_takes_min_order() {
        let a = TruncSeries::one(40);
        let b = TruncSeries::one(25);
        assert_eq!(a.add(&b).order(), 25);
        assert_eq!(a.mul(&b).order(), 25);
    }

    #[test]
    fn pochhammer_small_cases() {
        let order = 10;
        assert_eq!(
            pochhammer(PochSpec::finite_qq(0), order).unwrap(),
            TruncSeries::one(order)
        );
        // (q;q)_2 = (1-q)(1-q^2) = 1 - q - q^2 + q^3
        let p = pochhammer(PochSpec::finite_qq(2), order).unwrap();
        let expected = TruncSeries::from_poly(&"1 - q - q^2 + q^3".parse().unwrap(), order);
        assert_eq!(p, expected);
        // infinite products need a positive q-exponent on the a-monomial
        let bad = PochSpec::new(false, 1, 0, 1, PochLength::Infinite);
        assert_eq!(
            pochhammer(bad, order),
            Err(QSeriesError::DivergentInfiniteProduct)
        );
    }

    #[test]
    fn pochhammer_finite_times_tail_is_infinite() {
        let order = 30;
        for n in [0u32, 1, 3, 5] {
            let finite = pochhammer(PochSpec::finite_qq(n), order).unwrap();
            let tail = pochhammer(PochSpec::infinite(n + 1, 1), order).unwrap();
            let full = pochhammer(PochSpec::infinite(1, 1), order).unwrap();
            assert_eq!(finite.mul(&tail), full, "split at n = {n}");
        }
    }

    #[test]
    fn distinct_parts_euler_expansion() {
        // coefficient of x^k in (-xq;q)_inf is q^(k(k+1)/2) / (q;q)_k
        let order = 30;
        let d = pochhammer(PochSpec::distinct_parts(), order).unwrap();
        for k in 0u32..=6 {
            let inv = pochhammer(PochSpec::finite_qq(k), order)
                .unwrap()
                .invert()
                .unwrap();
            let expected = inv.mul(&TruncSeries::monomial(
                order,
                rat(1),
                k * (k + 1) / 2,
                0,
            ));
            for qe in 0..=order {
                assert_eq!(
                    d.coeff(qe, k),
                    expected.coeff(qe, 0),
                    "x^{k} q^{qe} mismatch"
                );
            }
        }
    }

    #[test]
    fn product_side_counts() {
        let order = 10;
        let p1 = product_side(TheoremId::One, order);
        let p2 = product_side(TheoremId::Two, order);
        // leading coefficients, cross-checked against an independent
        // dynamic-programming enumeration of the colored partition class
        let expect1 = [1i64, 2, 3, 5, 8, 12, 18, 26, 36, 51, 70];
        let expect2 = [1i64, 1, 2, 4, 5, 8, 12, 17, 24, 34, 46];
        for n in 0..=order {
            assert_eq!(p1.coeff(n, 0), rat(expect1[n as usize]), "p1 at q^{n}");
            assert_eq!(p2.coeff(n, 0), rat(expect2[n as usize]), "p2 at q^{n}");
        }
    }

    #[test]
    fn pair_gf_counts_pairs() {
        let order = 12;
        let g = pair_gf(RRVariant::RR1, order);
        // x = 0 picks out the empty pair only
        for qe in 1..=order {
            assert_eq!(g.coeff(qe, 0), rat(0));
        }
        assert_eq!(g.coeff(0, 0), rat(1));
        // total pairs of size 4: (empty, 4), (empty, 3+1), (4, empty),
        // (3+1, empty), (1, 3), (3, 1), (2, 2), (2+1, 1)
        assert_eq!(g.at_x_one().coeff(4, 0), rat(8));
    }

    #[test]
    fn pair_gf_satisfies_its_functional_equation() {
        let order = 30;
        for variant in [RRVariant::RR1, RRVariant::RR2] {
            let g = pair_gf(variant, order);
            let eq = pair_funceq(variant);
            assert!(funceq_check(&g, &eq, order).unwrap(), "{variant:?}");
        }
    }

    #[test]
    fn funceq_check_order_mismatch() {
        let g = pair_gf(RRVariant::RR1, 10);
        let eq = pair_funceq(RRVariant::RR1);
        assert_eq!(
            funceq_check(&g, &eq, 20),
            Err(QSeriesError::OrderMismatch { have: 10, want: 20 })
        );
        // the zero series satisfies any homogeneous equation
        assert!(funceq_check(&TruncSeries::zero(10), &eq, 10).unwrap());
    }

    #[test]
    fn euler_factorize_geometric() {
        let exps = euler_factorize(&geometric(20)).unwrap();
        assert_eq!(exps, BTreeMap::from([(1, 1)]));
    }

    #[test]
    fn euler_factorize_distinct_parts_is_odd_parts() {
        // (-q;q)_inf = prod over odd k of 1/(1-q^k)
        let order = 24;
        let d = pochhammer(PochSpec::new(true, 0, 1, 1, PochLength::Infinite), order).unwrap();
        let exps = euler_factorize(&d).unwrap();
        for k in 1..=order {
            let expected = if k % 2 == 1 { 1 } else { 0 };
            assert_eq!(exps.get(&k).copied().unwrap_or(0), expected, "k = {k}");
        }
    }

    #[test]
    fn euler_factorize_product_sides_mod_ten_patterns() {
        let order = 40;
        let exps1 = euler_factorize(&product_side(TheoremId::One, order)).unwrap();
        let exps2 = euler_factorize(&product_side(TheoremId::Two, order)).unwrap();
        for k in 1..=order {
            let e1 = match k % 10 {
                1 | 9 => 2,
                3 | 4 | 5 | 6 | 7 => 1,
                _ => 0,
            };
            let e2 = match k % 10 {
                3 | 7 => 2,
                1 | 2 | 5 | 8 | 9 => 1,
                _ => 0,
            };
            assert_eq!(exps1.get(&k).copied().unwrap_or(0), e1, "theorem 1, k = {k}");
            assert_eq!(exps2.get(&k).copied().unwrap_or(0), e2, "theorem 2, k = {k}");
        }
    }

    #[test]
    fn json_roundtrip() {
        let g = pair_gf(RRVariant::RR2, 8);
        let back = TruncSeries::from_json(&g.to_json()).unwrap();
        assert_eq!(g, back);
    }

    // ---- property tests ----

    fn arb_series(order: u32) -> impl Strategy<Value = TruncSeries> {
        proptest::collection::vec((0..=order, 0u32..3, -4i64..5), 0..8).prop_map(move |terms| {
            let mut s = TruncSeries::zero(order);
            for (qe, xe, c) in terms {
                s = s.add(&TruncSeries::monomial(order, rat(c), qe, xe));
            }
            s
        })
    }

    proptest! {
        #[test]
        fn prop_substitution_composes(s in arb_series(16), i in 0u32..3, j in 0u32..3) {
            prop_assert_eq!(s.subst_xq(i).subst_xq(j), s.subst_xq(i + j));
        }

        #[test]
        fn prop_invert_roundtrip(s in arb_series(12)) {
            // keep only the positive-q part of s, then force constant term 1
            let mut unit = TruncSeries::one(12);
            for (qe, xe, c) in s.iter() {
                if qe > 0 {
                    unit = unit.add(&TruncSeries::monomial(12, c.clone(), qe, xe));
                }
            }
            let inv = unit.invert().unwrap();
            prop_assert_eq!(unit.mul(&inv), TruncSeries::one(12));
        }

        #[test]
        fn prop_mul_matches_convolution(a in arb_series(10), b in arb_series(10)) {
            let p = a.mul(&b);
            for qe in 0..=10u32 {
                for xe in 0..=6u32 {
                    let mut acc = rat(0);
                    for qa in 0..=qe {
                        for xa in 0..=xe {
                            acc += a.coeff(qa, xa) * b.coeff(qe - qa, xe - xa);
                        }
                    }
                    prop_assert_eq!(p.coeff(qe, xe), acc);
                }
            }
        }

        #[test]
        fn prop_euler_roundtrip(exps in proptest::collection::btree_map(1u32..7, -3i64..4, 0..4)) {
            let order = 18;
            let s = euler_reconstruct(&exps, order);
            let back = euler_factorize(&s).unwrap();
            let cleaned: BTreeMap<u32, i64> =
                exps.into_iter().filter(|(_, e)| *e != 0).collect();
            prop_assert_eq!(back, cleaned);
        }
    }
}
