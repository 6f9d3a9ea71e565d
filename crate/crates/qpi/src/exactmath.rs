//! Exact rational arithmetic: sparse polynomials in `q` and `(q, x)`, and
//! normalized rational functions over them.
//!
//! Everything downstream (truncated series, relation expansion, certificate
//! solving) is built on the four types here:
//!
//! * [`BigRat`] — arbitrary-precision rationals (re-exported backing type).
//! * [`PolyQ`] — sparse univariate polynomials in `q` over the rationals.
//! * [`PolyQX`] — sparse bivariate polynomials, stored recursively as
//!   polynomials in `x` whose coefficients are [`PolyQ`].
//! * [`RatFn`] — reduced fractions of [`PolyQX`], the coefficient field for
//!   the linear algebra in the certificate solver.
//!
//! No floating point appears anywhere; all operations are identity-exact.
//! Division that must be exact returns an error instead of truncating, and
//! GCDs use a subresultant-style polynomial remainder sequence (recursing on
//! `x` over `Q[q]` in the bivariate case) so that fraction normalization
//! stays cheap for the small-denominator coefficients that actually occur.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

/// Arbitrary-precision rational number.
pub type BigRat = num_rational::BigRational;

/// Convenience constructor: the rational `n`.
pub fn rat(n: i64) -> BigRat {
    BigRat::from_integer(BigInt::from(n))
}

/// Convenience constructor: the rational `n / d`.
pub fn ratio(n: i64, d: i64) -> BigRat {
    BigRat::new(BigInt::from(n), BigInt::from(d))
}

/// Errors from exact polynomial and rational-function arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExactMathError {
    /// An exact division was requested but the divisor does not divide the
    /// dividend (nonzero remainder, or a coefficient quotient left `Q[q]`).
    NotDivisible,
    /// Division by the zero polynomial or zero rational function.
    DivisionByZero,
    /// A polynomial or rational-function string did not match the grammar.
    Parse(String),
}

impl fmt::Display for ExactMathError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactMathError::NotDivisible => write!(f, "exact division failed: not divisible"),
            ExactMathError::DivisionByZero => write!(f, "division by zero"),
            ExactMathError::Parse(msg) => write!(f, "parse error: {msg}"),
        }
    }
}

impl std::error::Error for ExactMathError {}

// ---------------------------------------------------------------------------
// PolyQ: sparse univariate polynomials in q
// ---------------------------------------------------------------------------

/// A sparse polynomial in `q` with rational coefficients.
///
/// Stored as a map from exponent to nonzero coefficient; the zero polynomial
/// is the empty map. All arithmetic keeps the map normalized (no stored
/// zeros), so derived equality is structural equality of polynomials.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PolyQ {
    terms: BTreeMap<u32, BigRat>,
}

impl PolyQ {
    /// The zero polynomial.
    pub fn zero() -> Self {
        PolyQ::default()
    }

    /// The constant polynomial 1.
    pub fn one() -> Self {
        PolyQ::constant(rat(1))
    }

    /// The constant polynomial `c`.
    pub fn constant(c: BigRat) -> Self {
        PolyQ::monomial(c, 0)
    }

    /// The monomial `c * q^e`.
    pub fn monomial(c: BigRat, e: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        PolyQ { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).map(|c| c.is_one()).unwrap_or(false)
    }

    /// Degree in `q`, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().copied()
    }

    /// Coefficient of `q^e` (zero if absent).
    pub fn coeff(&self, e: u32) -> BigRat {
        self.terms.get(&e).cloned().unwrap_or_else(BigRat::zero)
    }

    /// Leading coefficient, or `None` for the zero polynomial.
    pub fn leading_coeff(&self) -> Option<&BigRat> {
        self.terms.values().next_back()
    }

    /// Iterate `(exponent, coefficient)` pairs in ascending exponent order.
    pub fn iter(&self) -> impl Iterator<Item = (u32, &BigRat)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    fn insert_add(&mut self, e: u32, c: BigRat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(BigRat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, other: &PolyQ) -> PolyQ {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_add(*e, c.clone());
        }
        out
    }

    pub fn neg(&self) -> PolyQ {
        PolyQ {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &PolyQ) -> PolyQ {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &PolyQ) -> PolyQ {
        let mut out = PolyQ::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.insert_add(ea + eb, ca * cb);
            }
        }
        out
    }

    /// Multiply by the scalar `c`.
    pub fn scale(&self, c: &BigRat) -> PolyQ {
        if c.is_zero() {
            return PolyQ::zero();
        }
        PolyQ {
            terms: self.terms.iter().map(|(e, k)| (*e, k * c)).collect(),
        }
    }

    /// Multiply by the monomial `q^e`.
    pub fn shift(&self, e: u32) -> PolyQ {
        PolyQ {
            terms: self.terms.iter().map(|(k, c)| (k + e, c.clone())).collect(),
        }
    }

    /// Exact division; fails unless `divisor` divides `self` in `Q[q]`.
    pub fn exact_div(&self, divisor: &PolyQ) -> Result<PolyQ, ExactMathError> {
        if divisor.is_zero() {
            return Err(ExactMathError::DivisionByZero);
        }
        let dd = divisor.degree().unwrap();
        let dlc = divisor.leading_coeff().unwrap().clone();
        let mut rem = self.clone();
        let mut quot = PolyQ::zero();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                return Err(ExactMathError::NotDivisible);
            }
            let c = rem.leading_coeff().unwrap() / &dlc;
            let e = rd - dd;
            quot.insert_add(e, c.clone());
            rem = rem.sub(&divisor.scale(&c).shift(e));
        }
        Ok(quot)
    }

    /// Make the polynomial monic (leading coefficient 1). Zero stays zero.
    pub fn monic(&self) -> PolyQ {
        match self.leading_coeff() {
            None => PolyQ::zero(),
            Some(lc) => self.scale(&(BigRat::one() / lc)),
        }
    }

    /// Integer-primitive part: scaled so the coefficients are coprime
    /// integers with a positive leading coefficient. Zero stays zero.
    fn primitive_int(&self) -> PolyQ {
        if self.is_zero() {
            return PolyQ::zero();
        }
        let mut denom_lcm = BigInt::one();
        for c in self.terms.values() {
            denom_lcm = num_integer::lcm(denom_lcm, c.denom().clone());
        }
        let mut numer_gcd = BigInt::zero();
        for c in self.terms.values() {
            let n = c.numer() * &denom_lcm / c.denom();
            numer_gcd = num_integer::gcd(numer_gcd, n);
        }
        let mut scale = BigRat::new(denom_lcm, numer_gcd);
        if self.leading_coeff().unwrap() * &scale < BigRat::zero() {
            scale = -scale;
        }
        self.scale(&scale)
    }

    /// Pseudo-remainder of `self` by `divisor`: the remainder of
    /// `lc(divisor)^(deg self - deg divisor + 1) * self` under long division,
    /// which stays in `Q[q]` without introducing fractions.
    fn pseudo_rem(&self, divisor: &PolyQ) -> PolyQ {
        let dd = divisor.degree().unwrap();
        let dlc = divisor.leading_coeff().unwrap().clone();
        let mut rem = self.clone();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let c = rem.leading_coeff().unwrap().clone();
            rem = rem.scale(&dlc).sub(&divisor.scale(&c).shift(rd - dd));
        }
        rem
    }

    /// Monic greatest common divisor, by a subresultant-style polynomial
    /// remainder sequence on integer-primitive parts.
    pub fn gcd(&self, other: &PolyQ) -> PolyQ {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        let (mut r0, mut r1) = (self.primitive_int(), other.primitive_int());
        if r0.degree() < r1.degree() {
            std::mem::swap(&mut r0, &mut r1);
        }
        let mut g = BigRat::one();
        let mut h = BigRat::one();
        loop {
            let d = r0.degree().unwrap() - r1.degree().unwrap();
            let prem = r0.pseudo_rem(&r1);
            if prem.is_zero() {
                return r1.primitive_int().monic();
            }
            if prem.degree().unwrap() == 0 {
                return PolyQ::one();
            }
            let mut div = g.clone();
            for _ in 0..d {
                div *= &h;
            }
            let next = prem.scale(&(BigRat::one() / div));
            g = r1.leading_coeff().unwrap().clone();
            // h := h^(1-d) g^d, maintained as an exact rational
            let mut gh = BigRat::one();
            for _ in 0..d {
                gh *= &g;
            }
            let mut hd = BigRat::one();
            for _ in 0..d {
                hd *= &h;
            }
            h = gh * &h / hd;
            r0 = r1;
            r1 = next;
        }
    }
}

// ---------------------------------------------------------------------------
// PolyQX: sparse bivariate polynomials in q and x
// ---------------------------------------------------------------------------

/// A sparse polynomial in `q` and `x`, stored as a polynomial in `x` with
/// [`PolyQ`] coefficients.
///
/// The recursive view makes the GCD and exact-division algorithms direct:
/// both treat the polynomial as univariate in `x` over the coefficient ring
/// `Q[q]`. The zero polynomial is the empty map, and no zero coefficient
/// polynomials are stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PolyQX {
    coeffs: BTreeMap<u32, PolyQ>,
}

impl PolyQX {
    pub fn zero() -> Self {
        PolyQX::default()
    }

    pub fn one() -> Self {
        PolyQX::from_poly_q(PolyQ::one())
    }

    /// Embed a polynomial in `q` as a bivariate polynomial.
    pub fn from_poly_q(p: PolyQ) -> Self {
        let mut coeffs = BTreeMap::new();
        if !p.is_zero() {
            coeffs.insert(0, p);
        }
        PolyQX { coeffs }
    }

    /// The monomial `c * q^i * x^j`.
    pub fn monomial(c: BigRat, i: u32, j: u32) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(j, PolyQ::monomial(c, i));
        }
        PolyQX { coeffs }
    }

    pub fn constant(c: BigRat) -> Self {
        PolyQX::monomial(c, 0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&0).map(|p| p.is_one()).unwrap_or(false)
    }

    /// Degree in `x`, or `None` for the zero polynomial.
    pub fn degree_x(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    /// Degree in `q`, or `None` for the zero polynomial.
    pub fn degree_q(&self) -> Option<u32> {
        self.coeffs.values().filter_map(|p| p.degree()).max()
    }

    /// Coefficient of `x^j` as a polynomial in `q` (zero if absent).
    pub fn coeff_x(&self, j: u32) -> PolyQ {
        self.coeffs.get(&j).cloned().unwrap_or_else(PolyQ::zero)
    }

    /// Leading coefficient with respect to `x`.
    pub fn leading_coeff_x(&self) -> Option<&PolyQ> {
        self.coeffs.values().next_back()
    }

    /// Iterate monomials as `(q_exp, x_exp, coefficient)` in ascending
    /// `(x_exp, q_exp)` order.
    pub fn monomials(&self) -> impl Iterator<Item = (u32, u32, &BigRat)> {
        self.coeffs
            .iter()
            .flat_map(|(j, p)| p.iter().map(move |(i, c)| (i, *j, c)))
    }

    /// The coefficient of the lexicographically leading monomial (highest
    /// `x` power, then highest `q` power).
    pub fn leading_unit(&self) -> Option<&BigRat> {
        self.leading_coeff_x().and_then(|p| p.leading_coeff())
    }

    fn insert_add(&mut self, j: u32, p: PolyQ) {
        if p.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(j).or_insert_with(PolyQ::zero);
        *entry = entry.add(&p);
        if entry.is_zero() {
            self.coeffs.remove(&j);
        }
    }

    pub fn add(&self, other: &PolyQX) -> PolyQX {
        let mut out = self.clone();
        for (j, p) in &other.coeffs {
            out.insert_add(*j, p.clone());
        }
        out
    }

    pub fn neg(&self) -> PolyQX {
        PolyQX {
            coeffs: self.coeffs.iter().map(|(j, p)| (*j, p.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &PolyQX) -> PolyQX {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &PolyQX) -> PolyQX {
        let mut out = PolyQX::zero();
        for (ja, pa) in &self.coeffs {
            for (jb, pb) in &other.coeffs {
                out.insert_add(ja + jb, pa.mul(pb));
            }
        }
        out
    }

    /// Multiply by a scalar rational.
    pub fn scale(&self, c: &BigRat) -> PolyQX {
        if c.is_zero() {
            return PolyQX::zero();
        }
        PolyQX {
            coeffs: self.coeffs.iter().map(|(j, p)| (*j, p.scale(c))).collect(),
        }
    }

    /// Multiply every coefficient by the `q`-polynomial `p`.
    pub fn scale_poly_q(&self, p: &PolyQ) -> PolyQX {
        if p.is_zero() {
            return PolyQX::zero();
        }
        PolyQX {
            coeffs: self.coeffs.iter().map(|(j, c)| (*j, c.mul(p))).collect(),
        }
    }

    /// Exact division in `Q[q][x]`; fails unless `divisor` divides `self`.
    ///
    /// Long division in `x` requires each leading-coefficient quotient to be
    /// exact in `Q[q]`; when the divisor truly divides, the leading
    /// coefficients divide at every step, so a single failed step proves
    /// non-divisibility.
    pub fn exact_div(&self, divisor: &PolyQX) -> Result<PolyQX, ExactMathError> {
        if divisor.is_zero() {
            return Err(ExactMathError::DivisionByZero);
        }
        let dd = divisor.degree_x().unwrap();
        let dlc = divisor.leading_coeff_x().unwrap().clone();
        let mut rem = self.clone();
        let mut quot = PolyQX::zero();
        while let Some(rd) = rem.degree_x() {
            if rd < dd {
                return Err(ExactMathError::NotDivisible);
            }
            let c = rem.leading_coeff_x().unwrap().exact_div(&dlc)?;
            let j = rd - dd;
            let term = PolyQX {
                coeffs: BTreeMap::from([(j, c)]),
            };
            rem = rem.sub(&divisor.mul(&term));
            quot = quot.add(&term);
        }
        Ok(quot)
    }

    /// Content with respect to `x`: the monic GCD in `Q[q]` of all
    /// `x`-coefficients.
    fn content_q(&self) -> PolyQ {
        let mut g = PolyQ::zero();
        for p in self.coeffs.values() {
            g = g.gcd(p);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Pseudo-remainder with respect to `x` over `Q[q]`.
    fn pseudo_rem_x(&self, divisor: &PolyQX) -> PolyQX {
        let dd = divisor.degree_x().unwrap();
        let dlc = divisor.leading_coeff_x().unwrap().clone();
        let mut rem = self.clone();
        while let Some(rd) = rem.degree_x() {
            if rd < dd {
                break;
            }
            let c = rem.leading_coeff_x().unwrap().clone();
            let term = PolyQX {
                coeffs: BTreeMap::from([(rd - dd, c)]),
            };
            rem = rem.scale_poly_q(&dlc).sub(&divisor.mul(&term));
        }
        rem
    }

    /// Greatest common divisor in `Q[q][x]`, unit-normalized so the leading
    /// monomial (in `x`, then `q`) has coefficient 1.
    ///
    /// Classic content/primitive-part split: the content GCD is computed in
    /// `Q[q]`, and the primitive parts run a subresultant-style pseudo-
    /// remainder sequence in `x`.
    pub fn gcd(&self, other: &PolyQX) -> PolyQX {
        if self.is_zero() {
            return other.unit_normalized();
        }
        if other.is_zero() {
            return self.unit_normalized();
        }
        let cont = self.content_q().gcd(&other.content_q());
        let pa = self
            .exact_div(&PolyQX::from_poly_q(self.content_q()))
            .expect("content divides");
        let pb = other
            .exact_div(&PolyQX::from_poly_q(other.content_q()))
            .expect("content divides");
        let (mut r0, mut r1) = (pa, pb);
        if r0.degree_x() < r1.degree_x() {
            std::mem::swap(&mut r0, &mut r1);
        }
        let pp_gcd = loop {
            if r1.degree_x() == Some(0) {
                // primitive parts are coprime in x
                break PolyQX::one();
            }
            let prem = r0.pseudo_rem_x(&r1);
            if prem.is_zero() {
                let c = r1.content_q();
                break r1
                    .exact_div(&PolyQX::from_poly_q(c))
                    .expect("content divides");
            }
            // Primitive PRS: stripping each remainder to its primitive part
            // keeps coefficients small for the low-degree operands that occur
            // here, and any nonzero scaling preserves the GCD over Q.
            let next_cont = prem.content_q();
            let reduced = prem
                .exact_div(&PolyQX::from_poly_q(next_cont))
                .expect("content divides");
            r0 = r1;
            r1 = reduced;
        };
        pp_gcd.scale_poly_q(&cont).unit_normalized()
    }

    /// Scale so the lexicographically leading monomial has coefficient 1.
    pub fn unit_normalized(&self) -> PolyQX {
        match self.leading_unit() {
            None => PolyQX::zero(),
            Some(u) => self.scale(&(BigRat::one() / u)),
        }
    }
}

// ---------------------------------------------------------------------------
// Text grammar: parsing and formatting
// ---------------------------------------------------------------------------
//
// Polynomials are written as sums of terms `c*q^i*x^j` with rational
// coefficients `p/q`; any of the three factors may be omitted, `*` is
// optional, and `^1` may be dropped. Rational functions are written
// `num / den` with both sides in the polynomial grammar; a denominator of 1
// is omitted. Formatting always produces a string the parser accepts, with
// terms in ascending (x-degree, q-degree) order.

impl fmt::Display for PolyQX {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        let mut monos: Vec<(u32, u32, &BigRat)> = self.monomials().collect();
        monos.sort_by_key(|(i, j, _)| (*j, *i));
        for (i, j, c) in monos {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || (i == 0 && j == 0) {
                factors.push(abs.to_string());
            }
            if i == 1 {
                factors.push("q".into());
            } else if i > 1 {
                factors.push(format!("q^{i}"));
            }
            if j == 1 {
                factors.push("x".into());
            } else if j > 1 {
                factors.push(format!("x^{j}"));
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Display for PolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        PolyQX::from_poly_q(self.clone()).fmt(f)
    }
}

impl FromStr for PolyQX {
    type Err = ExactMathError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(ExactMathError::Parse("empty polynomial".into()));
        }
        // split into signed terms at top level
        let bytes = compact.as_bytes();
        let mut terms: Vec<(bool, &str)> = Vec::new(); // (negative, body)
        let mut start = 0usize;
        let mut neg = false;
        let mut i = 0usize;
        if bytes[0] == b'+' || bytes[0] == b'-' {
            neg = bytes[0] == b'-';
            start = 1;
            i = 1;
        }
        while i < bytes.len() {
            let b = bytes[i];
            // a sign begins a new term unless it follows '^' or '/' or '*'
            if (b == b'+' || b == b'-') && i > start {
                let prev = bytes[i - 1];
                if prev != b'^' && prev != b'/' && prev != b'*' {
                    terms.push((neg, &compact[start..i]));
                    neg = b == b'-';
                    start = i + 1;
                }
            }
            i += 1;
        }
        terms.push((neg, &compact[start..]));

        let mut out = PolyQX::zero();
        for (negative, body) in terms {
            if body.is_empty() {
                return Err(ExactMathError::Parse("empty term".into()));
            }
            let (mut c, mut qe, mut xe) = (BigRat::one(), 0u32, 0u32);
            let mut saw_coeff = false;
            for factor in body.split('*') {
                if factor.is_empty() {
                    return Err(ExactMathError::Parse(format!("empty factor in '{body}'")));
                }
                if let Some(rest) = factor.strip_prefix('q') {
                    qe += parse_exponent(rest, body)?;
                } else if let Some(rest) = factor.strip_prefix('x') {
                    xe += parse_exponent(rest, body)?;
                } else {
                    let r = parse_rational(factor)
                        .ok_or_else(|| ExactMathError::Parse(format!("bad factor '{factor}'")))?;
                    if saw_coeff {
                        c *= r;
                    } else {
                        c = r;
                        saw_coeff = true;
                    }
                }
            }
            if negative {
                c = -c;
            }
            out = out.add(&PolyQX::monomial(c, qe, xe));
        }
        Ok(out)
    }
}

fn parse_exponent(rest: &str, term: &str) -> Result<u32, ExactMathError> {
    if rest.is_empty() {
        return Ok(1);
    }
    rest.strip_prefix('^')
        .and_then(|e| e.parse::<u32>().ok())
        .ok_or_else(|| ExactMathError::Parse(format!("bad exponent in '{term}'")))
}

fn parse_rational(s: &str) -> Option<BigRat> {
    if let Some((n, d)) = s.split_once('/') {
        let nn = BigInt::from_str(n).ok()?;
        let dd = BigInt::from_str(d).ok()?;
        if dd.is_zero() {
            return None;
        }
        Some(BigRat::new(nn, dd))
    } else {
        Some(BigRat::from_integer(BigInt::from_str(s).ok()?))
    }
}

impl FromStr for PolyQ {
    type Err = ExactMathError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let p: PolyQX = s.parse()?;
        if p.degree_x().unwrap_or(0) > 0 {
            return Err(ExactMathError::Parse("unexpected x in q-polynomial".into()));
        }
        Ok(p.coeff_x(0))
    }
}

// ---------------------------------------------------------------------------
// RatFn: normalized rational functions in q and x
// ---------------------------------------------------------------------------

/// A rational function `num / den` over `Q[q, x]`, kept in canonical form:
/// the fraction is reduced (GCD of numerator and denominator is 1) and the
/// denominator's leading monomial has coefficient 1. Zero is `0 / 1`.
///
/// This is the coefficient field for the certificate linear algebra; the
/// canonical form makes equality a structural comparison.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFn {
    num: PolyQX,
    den: PolyQX,
}

impl RatFn {
    pub fn zero() -> Self {
        RatFn {
            num: PolyQX::zero(),
            den: PolyQX::one(),
        }
    }

    pub fn one() -> Self {
        RatFn {
            num: PolyQX::one(),
            den: PolyQX::one(),
        }
    }

    /// Construct `num / den`, normalizing. Errors if `den` is zero.
    pub fn new(num: PolyQX, den: PolyQX) -> Result<Self, ExactMathError> {
        if den.is_zero() {
            return Err(ExactMathError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFn::zero());
        }
        let g = num.gcd(&den);
        let mut num = num.exact_div(&g).expect("gcd divides numerator");
        let mut den = den.exact_div(&g).expect("gcd divides denominator");
        let unit = den.leading_unit().expect("nonzero denominator").clone();
        if !unit.is_one() {
            let inv = BigRat::one() / unit;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Ok(RatFn { num, den })
    }

    pub fn from_poly(p: PolyQX) -> Self {
        RatFn {
            num: p,
            den: PolyQX::one(),
        }
    }

    pub fn constant(c: BigRat) -> Self {
        RatFn::from_poly(PolyQX::constant(c))
    }

    pub fn numerator(&self) -> &PolyQX {
        &self.num
    }

    pub fn denominator(&self) -> &PolyQX {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the denominator is 1, i.e. the value lies in `Q[q, x]`.
    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn add(&self, other: &RatFn) -> RatFn {
        let num = self
            .num
            .mul(&other.den)
            .add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        RatFn::new(num, den).expect("nonzero denominator")
    }

    pub fn neg(&self) -> RatFn {
        RatFn {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &RatFn) -> RatFn {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFn) -> RatFn {
        RatFn::new(self.num.mul(&other.num), self.den.mul(&other.den))
            .expect("nonzero denominator")
    }

    pub fn inv(&self) -> Result<RatFn, ExactMathError> {
        if self.is_zero() {
            return Err(ExactMathError::DivisionByZero);
        }
        RatFn::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &RatFn) -> Result<RatFn, ExactMathError> {
        Ok(self.mul(&other.inv()?))
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{} / {}", self.num, self.den)
        }
    }
}

impl FromStr for RatFn {
    type Err = ExactMathError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        // The fraction slash is the only one surrounded by optional spaces
        // that separates two polynomial bodies; rational coefficients inside
        // a polynomial never contain spaces around '/'. To stay unambiguous,
        // accept either "num / den" (spaced) or a whole polynomial.
        if let Some((n, d)) = s.split_once(" / ") {
            let num: PolyQX = n.parse()?;
            let den: PolyQX = d.parse()?;
            return RatFn::new(num, den);
        }
        Ok(RatFn::from_poly(s.parse()?))
    }
}

// ---------------------------------------------------------------------------
// tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pq(s: &str) -> PolyQ {
        s.parse().unwrap()
    }

    fn pqx(s: &str) -> PolyQX {
        s.parse().unwrap()
    }

    #[test]
    fn poly_q_basic_arithmetic() {
        let a = pq("1 + q");
        let b = pq("1 - q");
        assert_eq!(a.mul(&b), pq("1 - q^2"));
        assert_eq!(a.add(&b), pq("2"));
        assert_eq!(a.sub(&a), PolyQ::zero());
    }

    #[test]
    fn poly_q_exact_division() {
        let p = pq("1 - q^4");
        assert_eq!(p.exact_div(&pq("1 - q")).unwrap(), pq("1 + q + q^2 + q^3"));
        assert_eq!(
            p.exact_div(&pq("1 + q^3")),
            Err(ExactMathError::NotDivisible)
        );
        assert_eq!(
            p.exact_div(&PolyQ::zero()),
            Err(ExactMathError::DivisionByZero)
        );
    }

    #[test]
    fn poly_q_gcd_known_factors() {
        let a = pq("1 - q^6"); // (1-q)(1+q)(1+q+q^2)(1-q+q^2)
        let b = pq("1 - q^4"); // (1-q)(1+q)(1+q^2)
        let g = a.gcd(&b);
        assert_eq!(g, pq("1 - q^2").monic());
        assert!(a.exact_div(&g).is_ok());
        assert!(b.exact_div(&g).is_ok());
    }

    #[test]
    fn poly_qx_mul_and_div_roundtrip() {
        let a = pqx("1 + q*x");
        let b = pqx("1 - q*x + q^2*x^2");
        let prod = a.mul(&b);
        assert_eq!(prod, pqx("1 + q^3*x^3"));
        assert_eq!(prod.exact_div(&a).unwrap(), b);
        assert_eq!(prod.exact_div(&b).unwrap(), a);
    }

    #[test]
    fn poly_qx_gcd_shared_factor() {
        let common = pqx("1 + q*x");
        let a = common.mul(&pqx("1 - q"));
        let b = common.mul(&pqx("x + q^2"));
        let g = a.gcd(&b);
        assert_eq!(g, common.unit_normalized());
    }

    #[test]
    fn poly_qx_gcd_coprime_is_one() {
        let a = pqx("1 + q*x");
        let b = pqx("1 - q*x");
        assert_eq!(a.gcd(&b), PolyQX::one());
    }

    #[test]
    fn ratfn_normalization_cancels() {
        let num = pqx("1 - q^2*x^2");
        let den = pqx("1 + q*x");
        let r = RatFn::new(num, den).unwrap();
        assert!(r.is_polynomial());
        assert_eq!(r.numerator(), &pqx("1 - q*x"));
    }

    #[test]
    fn ratfn_field_identities() {
        let a = RatFn::new(pqx("q*x"), pqx("1 - q")).unwrap();
        let b = RatFn::new(pqx("1 + x"), pqx("q^2 + 1")).unwrap();
        assert_eq!(a.add(&b).sub(&b), a);
        assert_eq!(a.mul(&b).div(&b).unwrap(), a);
        assert!(a.sub(&a).is_zero());
        assert!(a.div(&a).unwrap().is_one());
    }

    #[test]
    fn ratfn_denominator_is_unit_normalized() {
        // 1 / (2 - 2q) must store denominator with leading coefficient 1
        let r = RatFn::new(pqx("1"), pqx("2 - 2*q")).unwrap();
        assert_eq!(r.denominator(), &pqx("-1 + q").unit_normalized());
    }

    #[test]
    fn display_and_parse_roundtrip_hand_cases() {
        for s in [
            "0",
            "1",
            "-1",
            "q",
            "x",
            "1/2",
            "-3/2*q^2*x",
            "1 + q*x",
            "1 - q - x + q*x",
            "2*q^10*x^3 + 1/7*q*x^2",
        ] {
            let p = pqx(s);
            let q2: PolyQX = p.to_string().parse().unwrap();
            assert_eq!(p, q2, "roundtrip failed for {s}");
        }
    }

    #[test]
    fn ratfn_display_parse_roundtrip() {
        let r = RatFn::new(pqx("q*x"), pqx("1 - q + q^2")).unwrap();
        let back: RatFn = r.to_string().parse().unwrap();
        assert_eq!(r, back);
    }

    // ---- property tests ----

    fn arb_poly_q() -> impl Strategy<Value = PolyQ> {
        proptest::collection::vec((0u32..5, -6i64..7), 0..5).prop_map(|terms| {
            let mut p = PolyQ::zero();
            for (e, c) in terms {
                p = p.add(&PolyQ::monomial(rat(c), e));
            }
            p
        })
    }

    fn arb_poly_qx() -> impl Strategy<Value = PolyQX> {
        proptest::collection::vec((0u32..4, 0u32..3, -5i64..6), 0..5).prop_map(|terms| {
            let mut p = PolyQX::zero();
            for (i, j, c) in terms {
                p = p.add(&PolyQX::monomial(rat(c), i, j));
            }
            p
        })
    }

    proptest! {
        #[test]
        fn prop_poly_q_product_div_roundtrip(a in arb_poly_q(), b in arb_poly_q()) {
            prop_assume!(!b.is_zero());
            let p = a.mul(&b);
            prop_assert_eq!(p.exact_div(&b).unwrap(), a);
        }

        #[test]
        fn prop_poly_q_gcd_divides_both(a in arb_poly_q(), b in arb_poly_q()) {
            let g = a.gcd(&b);
            if g.is_zero() {
                prop_assert!(a.is_zero() && b.is_zero());
            } else {
                prop_assert!(a.exact_div(&g).is_ok());
                prop_assert!(b.exact_div(&g).is_ok());
            }
        }

        #[test]
        fn prop_poly_qx_product_div_roundtrip(a in arb_poly_qx(), b in arb_poly_qx()) {
            prop_assume!(!b.is_zero());
            let p = a.mul(&b);
            prop_assert_eq!(p.exact_div(&b).unwrap(), a);
        }

        #[test]
        fn prop_poly_qx_gcd_divides_both(a in arb_poly_qx(), b in arb_poly_qx()) {
            let g = a.gcd(&b);
            if g.is_zero() {
                prop_assert!(a.is_zero() && b.is_zero());
            } else {
                prop_assert!(a.exact_div(&g).is_ok());
                prop_assert!(b.exact_div(&g).is_ok());
            }
        }

        #[test]
        fn prop_poly_qx_display_roundtrip(a in arb_poly_qx()) {
            let s = a.to_string();
            let back: PolyQX = s.parse().unwrap();
            prop_assert_eq!(a, back);
        }

        #[test]
        fn prop_ratfn_mul_div_roundtrip(an in arb_poly_qx(), bd in arb_poly_qx(),
                                        bn in arb_poly_qx(), ad in arb_poly_qx()) {
            prop_assume!(!ad.is_zero() && !bd.is_zero() && !bn.is_zero());
            let a = RatFn::new(an, ad).unwrap();
            let b = RatFn::new(bn, bd).unwrap();
            prop_assert_eq!(a.mul(&b).div(&b).unwrap(), a);
        }

        #[test]
        fn prop_ratfn_add_sub_roundtrip(an in arb_poly_qx(), bd in arb_poly_qx(),
                                        bn in arb_poly_qx(), ad in arb_poly_qx()) {
            prop_assume!(!ad.is_zero() && !bd.is_zero());
            let a = RatFn::new(an, ad).unwrap();
            let b = RatFn::new(bn, bd).unwrap();
            prop_assert_eq!(a.add(&b).sub(&b), a);
        }
    }
}
