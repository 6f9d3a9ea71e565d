//! q-trinomial coefficients and the two families of triple sums built from
//! them, as exact truncated series.
//!
//! * [`qtrinomial`] — the coefficient
//!   `(Q; Q)_(i+j+k) / ((Q; Q)_i (Q; Q)_j (Q; Q)_k)` with `Q = q^base`,
//!   computed by exact polynomial division (which is asserted, not assumed);
//! * [`pascal_check`] — the six Pascal-triangle-style contiguous relations
//!   the trinomials satisfy, checked exactly with the convention that a
//!   trinomial with any negative index is zero;
//! * [`eval_multisum`] — the triple sums `S_{a,b,c}(x)` and `T_{a,b,c}(x)`:
//!   over `i, j, k >= 0`, the summand is
//!   `q^E * x^W * qtrinomial(i,j,k; q^2) / (q; q)_(i+j+k)` with exponent
//!   `E = (3i^2 + j^2 + k^2)/2 + ij + ik + jk + (j + k - i)/2 + ai + bj + ck`
//!   and `W = 2i + j + k` for the S-family, `W = i + j + k` for T;
//! * [`shift_check`] — the substitution law `S_{a,b,c}(xq^i) =
//!   S_{a+2i,b+i,c+i}(x)` and `T_{a,b,c}(xq^i) = T_{a+i,b+i,c+i}(x)`.
//!
//! The half-integer pieces of `E` always cancel (each of `(3i^2-i)`,
//! `(j^2+j)`, `(k^2+k)` is even); the code asserts this at runtime rather
//! than assuming it. Trinomials and the per-total inverse Pochhammer series
//! are cached process-wide, since the certificate checks evaluate thousands
//! of overlapping sums.

use crate::exactmath::{rat, BigRat, PolyQ, PolyQX};
use crate::qseries::{pochhammer, PochSpec, TruncSeries};
use num_traits::{One, Signed};
use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

/// The two triple-sum families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    S,
    T,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::S => write!(f, "S"),
            Family::T => write!(f, "T"),
        }
    }
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "S" => Ok(Family::S),
            "T" => Ok(Family::T),
            _ => Err(format!("unknown sum family '{s}' (expected S or T)")),
        }
    }
}

/// A triple sum `S_{a,b,c}(x)` or `T_{a,b,c}(x)` for non-negative integer
/// parameters `a, b, c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SumSpec {
    pub family: Family,
    pub a: u32,
    pub b: u32,
    pub c: u32,
}

impl SumSpec {
    pub fn new(family: Family, a: u32, b: u32, c: u32) -> Self {
        SumSpec { family, a, b, c }
    }

    /// `S_{a,b,c}`.
    pub fn s(a: u32, b: u32, c: u32) -> Self {
        SumSpec::new(Family::S, a, b, c)
    }

    /// `T_{a,b,c}`.
    pub fn t(a: u32, b: u32, c: u32) -> Self {
        SumSpec::new(Family::T, a, b, c)
    }

    /// The spec equal to this one after the substitution `x -> x q^i`:
    /// `(a+2i, b+i, c+i)` for the S-family, `(a+i, b+i, c+i)` for T.
    pub fn shifted(&self, i: u32) -> SumSpec {
        let a_step = match self.family {
            Family::S => 2 * i,
            Family::T => i,
        };
        SumSpec::new(self.family, self.a + a_step, self.b + i, self.c + i)
    }
}

impl fmt::Display for SumSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({},{},{})", self.family, self.a, self.b, self.c)
    }
}

// ---------------------------------------------------------------------------
// q-trinomial coefficients
// ---------------------------------------------------------------------------

static TRI_CACHE: Lazy<Mutex<HashMap<(u32, u32, u32, u32), PolyQ>>> =
    Lazy::new(Default::default);

fn poch_poly(n: u32, base: u32) -> PolyQ {
    let mut p = PolyQ::one();
    for m in 1..=n {
        p = p.mul(&PolyQ::one().sub(&PolyQ::monomial(rat(1), base * m)));
    }
    p
}

/// The q-trinomial coefficient
/// `(Q; Q)_(i+j+k) / ((Q; Q)_i (Q; Q)_j (Q; Q)_k)` with `Q = q^base_exp`.
///
/// The division is performed exactly and asserted to succeed; the result is
/// asserted to have non-negative integer coefficients (it counts something).
/// Results are cached process-wide; the coefficient is symmetric in
/// `(i, j, k)`, and the cache key is normalized accordingly.
pub fn qtrinomial(i: u32, j: u32, k: u32, base_exp: u32) -> PolyQ {
    assert!(base_exp >= 1, "trinomial base exponent must be at least 1");
    let mut ijk = [i, j, k];
    ijk.sort_unstable();
    let key = (ijk[0], ijk[1], ijk[2], base_exp);
    if let Some(hit) = TRI_CACHE.lock().unwrap().get(&key) {
        return hit.clone();
    }
    let num = poch_poly(i + j + k, base_exp);
    let den = poch_poly(i, base_exp)
        .mul(&poch_poly(j, base_exp))
        .mul(&poch_poly(k, base_exp));
    let tri = num
        .exact_div(&den)
        .expect("q-trinomial division is exact");
    for (e, c) in tri.iter() {
        assert!(
            c.denom().is_one() && !c.is_negative(),
            "q-trinomial coefficient of q^{e} is not a non-negative integer"
        );
    }
    TRI_CACHE.lock().unwrap().insert(key, tri.clone());
    tri
}

/// [`qtrinomial`] extended by the boundary convention: any negative index
/// gives the zero polynomial.
pub fn qtrinomial_or_zero(i: i64, j: i64, k: i64, base_exp: u32) -> PolyQ {
    if i < 0 || j < 0 || k < 0 {
        PolyQ::zero()
    } else {
        qtrinomial(i as u32, j as u32, k as u32, base_exp)
    }
}

// ---------------------------------------------------------------------------
// Pascal-type contiguous relations
// ---------------------------------------------------------------------------

/// Residual (left side minus right side) of the `relation`-th contiguous
/// relation at `(i, j, k)`, in base `q^base_exp`. The six relations each
/// write `[i,j,k]` as a q-weighted sum of `[i-1,j,k]`, `[i,j-1,k]`,
/// `[i,j,k-1]`; the weights, as exponents of `Q = q^base_exp`, are:
///
/// ```text
///   relation:    1        2        3        4        5        6
///   [i-1,j,k]:  j+k      j+k       k        0        j        0
///   [i,j-1,k]:   k        0       i+k      i+k       0        i
///   [i,j,k-1]:   0        j        0        i       i+j      i+j
/// ```
///
/// A zero residual means the relation holds exactly at that point.
pub fn pascal_residual(relation: u32, i: u32, j: u32, k: u32, base_exp: u32) -> PolyQ {
    let (pi, pj, pk) = match relation {
        1 => (j + k, k, 0),
        2 => (j + k, 0, j),
        3 => (k, i + k, 0),
        4 => (0, i + k, i),
        5 => (j, 0, i + j),
        6 => (0, i, i + j),
        _ => panic!("contiguous relation index must be 1..=6, got {relation}"),
    };
    let (i, j, k) = (i as i64, j as i64, k as i64);
    let lhs = qtrinomial_or_zero(i, j, k, base_exp);
    let rhs = qtrinomial_or_zero(i - 1, j, k, base_exp)
        .shift(base_exp * pi)
        .add(&qtrinomial_or_zero(i, j - 1, k, base_exp).shift(base_exp * pj))
        .add(&qtrinomial_or_zero(i, j, k - 1, base_exp).shift(base_exp * pk));
    lhs.sub(&rhs)
}

/// True iff all six contiguous relations hold exactly at every `(i, j, k)`
/// with `1 <= i + j + k <= max_total`, in base `q^base_exp`.
pub fn pascal_check(max_total: u32, base_exp: u32) -> bool {
    assert!(max_total >= 1);
    for i in 0..=max_total {
        for j in 0..=max_total - i {
            for k in 0..=max_total - i - j {
                if i + j + k == 0 {
                    continue;
                }
                for relation in 1..=6 {
                    if !pascal_residual(relation, i, j, k, base_exp).is_zero() {
                        return false;
                    }
                }
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Triple-sum evaluation
// ---------------------------------------------------------------------------

static INV_POCH_CACHE: Lazy<Mutex<HashMap<(u32, u32), TruncSeries>>> =
    Lazy::new(Default::default);

/// `1 / (q; q)_n` truncated at `order`, cached process-wide.
fn inv_poch(n: u32, order: u32) -> TruncSeries {
    if let Some(hit) = INV_POCH_CACHE.lock().unwrap().get(&(n, order)) {
        return hit.clone();
    }
    let inv = pochhammer(PochSpec::finite_qq(n), order)
        .expect("finite product")
        .invert()
        .expect("constant term 1");
    INV_POCH_CACHE
        .lock()
        .unwrap()
        .insert((n, order), inv.clone());
    inv
}

static CORE_CACHE: Lazy<Mutex<HashMap<(u32, u32, u32, u32), TruncSeries>>> =
    Lazy::new(Default::default);

/// The `(a,b,c)`-independent part of one summand:
/// `qtrinomial(i,j,k; q^2) / (q; q)_(i+j+k)` truncated at `order`.
/// Symmetric in `(i, j, k)`; cached process-wide.
fn summand_core(i: u32, j: u32, k: u32, order: u32) -> TruncSeries {
    let mut ijk = [i, j, k];
    ijk.sort_unstable();
    let key = (ijk[0], ijk[1], ijk[2], order);
    if let Some(hit) = CORE_CACHE.lock().unwrap().get(&key) {
        return hit.clone();
    }
    let tri = PolyQX::from_poly_q(qtrinomial(i, j, k, 2));
    let core = inv_poch(i + j + k, order).mul_poly(&tri);
    CORE_CACHE.lock().unwrap().insert(key, core.clone());
    core
}

/// Doubled exponent `2E` of the summand at `(i, j, k)`; keeping it doubled
/// defers the division by 2 until after the evenness assertion.
fn doubled_exponent(spec: &SumSpec, i: u64, j: u64, k: u64) -> u64 {
    3 * i * i + j * j + k * k + 2 * (i * j + i * k + j * k) + j + k - i
        + 2 * (u64::from(spec.a) * i + u64::from(spec.b) * j + u64::from(spec.c) * k)
}

/// Evaluate the triple sum named by `spec` as a series exact through
/// `q^order`.
///
/// The loop bound drops the (non-negative) cross terms and the `a, b, c`
/// contributions from the exponent: a tuple is visited while
/// `(3i^2 - i) + (j^2 + j) + (k^2 + k) <= 2*order`, which under-estimates
/// the true exponent, so no contributing tuple is missed. Each visited
/// tuple's exact exponent is then tested against the order.
pub fn eval_multisum(spec: &SumSpec, order: u32) -> TruncSeries {
    let bound = 2 * u64::from(order);
    let cost_i = |i: u64| 3 * i * i - i;
    let cost_jk = |m: u64| m * m + m;
    let mut out = TruncSeries::zero(order);
    let mut i = 0u64;
    while cost_i(i) <= bound {
        let mut j = 0u64;
        while cost_i(i) + cost_jk(j) <= bound {
            let mut k = 0u64;
            while cost_i(i) + cost_jk(j) + cost_jk(k) <= bound {
                let e2 = doubled_exponent(spec, i, j, k);
                assert!(e2 % 2 == 0, "summand exponent must be an integer");
                let e = e2 / 2;
                if e <= u64::from(order) {
                    let w = match spec.family {
                        Family::S => 2 * i + j + k,
                        Family::T => i + j + k,
                    };
                    let core = summand_core(i as u32, j as u32, k as u32, order);
                    let head =
                        TruncSeries::monomial(order, BigRat::one(), e as u32, w as u32);
                    out = out.add(&core.mul(&head));
                }
                k += 1;
            }
            j += 1;
        }
        i += 1;
    }
    out
}

/// True iff `spec(x q^i)` equals `spec.shifted(i)(x)` through `order`.
pub fn shift_check(spec: &SumSpec, i: u32, order: u32) -> bool {
    eval_multisum(spec, order).subst_xq(i) == eval_multisum(&spec.shifted(i), order)
}

// ---------------------------------------------------------------------------
// tests
// ---------------------------------------------------------------------------
