//! End-to-end verification chains tying the other modules together.
//!
//! Each chain is a fixed, ordered list of named checks producing a
//! [`Report`]:
//!
//! * [`verify_theorem1`] — the first colored-partition identity: the pair
//!   generating function's functional equation, its equality with
//!   `(1+xq) S(3,0,1)`, the restricted-count series equality for
//!   `T(1,0,1) + xq T(3,1,2)`, the printed three-term sum identity,
//!   certificates for the three supporting equations, and the final
//!   product-side comparison;
//! * [`verify_theorem2`] — the second identity's mirror chain, plus the
//!   shipped golden certificate;
//! * [`check_conjecture`] — the weighted-count refinement compared against
//!   `(1+yq) S(3,0,1)(y)` (finite-order evidence only — the statement is
//!   open, and the report says so);
//! * [`sanity_classical`] — classical identities (odd = distinct, both
//!   Rogers-Ramanujan sums) exercising the series engine end to end.
//!
//! Every series-equality step also asserts the initial conditions (the
//! constant term and the `q = 0` / `x = 0` anchors equal 1) explicitly,
//! and failures name the first offending `(q, x)` exponent pair.
//! Independent checks run in parallel; report order and content are
//! deterministic.

use crate::certificates::{
    find_certificate, target_residual, verify_certificate, Certificate, CertificateError,
    TargetId,
};
use crate::exactmath::{rat, PolyQX};
use crate::multisum::{eval_multisum, SumSpec};
use crate::partitions::{count_gamma, CountVariant, Stat};
use crate::qseries::{
    funceq_check, pair_funceq, pair_gf, pochhammer, product_side, rr_sum, PochSpec,
    RRVariant, TheoremId, TruncSeries,
};
use rayon::prelude::*;
use std::fmt;
use std::time::Instant;

/// Parameters for a verification run.
#[derive(Debug, Clone, Copy)]
pub struct RunConfig {
    /// Global series truncation order; every check in the run uses it.
    pub order: u32,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { order: 60 }
    }
}

/// Outcome of one check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// The certificate solver ran out of window growth — reported apart
    /// from plain failure so callers can exit with the dedicated code.
    Exhausted,
}

/// One named check with its outcome and timing.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: CheckStatus,
    /// Failure localization (first offending exponent pair, solver error,
    /// …) or a short success note such as a certificate size.
    pub detail: Option<String>,
    pub millis: u64,
}

/// A chain's full outcome. Overall pass means every check passed.
#[derive(Debug, Clone, serde::Serialize)]
pub struct Report {
    pub title: String,
    pub order: u32,
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == CheckStatus::Pass)
    }

    pub fn any_exhausted(&self) -> bool {
        self.checks
            .iter()
            .any(|c| c.status == CheckStatus::Exhausted)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "== {} (order {}) ==", self.title, self.order)?;
        for check in &self.checks {
            let tag = match check.status {
                CheckStatus::Pass => "PASS",
                CheckStatus::Fail => "FAIL",
                CheckStatus::Exhausted => "FAIL(solver)",
            };
            match &check.detail {
                Some(d) => writeln!(f, "{tag} {} — {d} ({} ms)", check.name, check.millis)?,
                None => writeln!(f, "{tag} {} ({} ms)", check.name, check.millis)?,
            }
        }
        writeln!(
            f,
            "overall: {}",
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

/// Map a list of reports to the process exit code: 0 all pass, 3 if any
/// solver window was exhausted, 2 on any other failure.
pub fn exit_code(reports: &[Report]) -> i32 {
    if reports.iter().any(Report::any_exhausted) {
        3
    } else if reports.iter().all(Report::passed) {
        0
    } else {
        2
    }
}

// ---------------------------------------------------------------------------
// Check plumbing
// ---------------------------------------------------------------------------

type CheckFn = Box<dyn Fn() -> (CheckStatus, Option<String>) + Send + Sync>;

/// Run named checks in parallel, assembling results in the given order.
fn run_checks(title: &str, order: u32, checks: Vec<(String, CheckFn)>) -> Report {
    let checks: Vec<CheckResult> = checks
        .into_par_iter()
        .map(|(name, check)| {
            let start = Instant::now();
            let (status, detail) = check();
            CheckResult {
                name,
                status,
                detail,
                millis: start.elapsed().as_millis() as u64,
            }
        })
        .collect();
    Report {
        title: title.to_string(),
        order,
        checks,
    }
}

/// Compare two series; failures name the first offending exponent pair.
/// Both sides must also satisfy the initial conditions: constant term 1,
/// and the `q = 0` and `x = 0` anchor coefficients matching it.
fn series_equal(lhs: &TruncSeries, rhs: &TruncSeries) -> (CheckStatus, Option<String>) {
    for (side, series) in [("left", lhs), ("right", rhs)] {
        if series.coeff(0, 0) != rat(1) {
            return (
                CheckStatus::Fail,
                Some(format!("initial condition: {side} constant term is not 1")),
            );
        }
    }
    residual_zero_with(&lhs.sub(rhs), "first mismatch at")
}

/// Zero-residual check; failures name the first surviving exponent pair.
fn residual_zero(residual: &TruncSeries) -> (CheckStatus, Option<String>) {
    residual_zero_with(residual, "residual has")
}

fn residual_zero_with(series: &TruncSeries, prefix: &str) -> (CheckStatus, Option<String>) {
    let first = series.iter().next().map(|(qe, xe, _)| (qe, xe));
    match first {
        None => (CheckStatus::Pass, None),
        Some((qe, xe)) => (CheckStatus::Fail, Some(format!("{prefix} q^{qe} x^{xe}"))),
    }
}

fn certificate_search(target: TargetId) -> (CheckStatus, Option<String>) {
    match find_certificate(target) {
        Ok(cert) => match verify_certificate(&cert) {
            Ok(()) => (
                CheckStatus::Pass,
                Some(format!("{} entries", cert.entries.len())),
            ),
            Err(e) => (CheckStatus::Fail, Some(e.to_string())),
        },
        Err(CertificateError::WindowExhausted { rounds }) => (
            CheckStatus::Exhausted,
            Some(format!("window exhausted after {rounds} growth rounds")),
        ),
        Err(e) => (CheckStatus::Fail, Some(e.to_string())),
    }
}

fn xq() -> PolyQX {
    "q*x".parse().expect("literal")
}

/// The golden certificate shipped with the crate (the explicit
/// fourteen-entry combination for the [`TargetId::ProofD`] equation).
pub fn golden_certificate() -> Certificate {
    Certificate::from_json(include_str!("../golden/certificate_d.json"))
        .expect("bundled certificate parses")
}

// ---------------------------------------------------------------------------
// Verification chains
// ---------------------------------------------------------------------------

/// The first identity's chain: functional equation, sum-side equalities,
/// the printed three-term identity, supporting certificates, product side.
pub fn verify_theorem1(cfg: RunConfig) -> Report {
    let n = cfg.order;
    let checks: Vec<(String, CheckFn)> = vec![
        (
            "pair generating function satisfies its functional equation".into(),
            Box::new(move || {
                let gf = pair_gf(RRVariant::RR1, n);
                match funceq_check(&gf, &pair_funceq(RRVariant::RR1), n) {
                    Ok(true) => (CheckStatus::Pass, None),
                    Ok(false) => (CheckStatus::Fail, Some("residual nonzero".into())),
                    Err(e) => (CheckStatus::Fail, Some(e.to_string())),
                }
            }),
        ),
        (
            "(1+xq)·S(3,0,1) equals the pair generating function".into(),
            Box::new(move || {
                let one_plus_xq: PolyQX = "1 + q*x".parse().expect("literal");
                let lhs = eval_multisum(&SumSpec::s(3, 0, 1), n).mul_poly(&one_plus_xq);
                let rhs = pair_gf(RRVariant::RR1, n);
                series_equal(&lhs, &rhs)
            }),
        ),
        (
            "T(1,0,1) + xq·T(3,1,2) equals the first restricted-count series".into(),
            Box::new(move || {
                let lhs = eval_multisum(&SumSpec::t(1, 0, 1), n)
                    .add(&eval_multisum(&SumSpec::t(3, 1, 2), n).mul_poly(&xq()));
                let rhs = count_gamma(CountVariant::Q1, n, Stat::NumParts).to_series();
                series_equal(&lhs, &rhs)
            }),
        ),
        (
            "three-term sum identity holds as printed".into(),
            Box::new(move || match target_residual(TargetId::ProofE, n) {
                Ok(residual) => residual_zero(&residual),
                Err(e) => (CheckStatus::Fail, Some(e.to_string())),
            }),
        ),
        (
            "three-term sum identity with x-weighted coefficients (informational)".into(),
            // The printed identity carries scalar coefficients q and 1+q;
            // this probes the x-weighted variant (xq and 1+xq) and reports
            // its residual without asserting anything.
            Box::new(move || {
                let one_plus_xq: PolyQX = "1 + q*x".parse().expect("literal");
                let lhs = eval_multisum(&SumSpec::t(1, 0, 1), n)
                    .add(&eval_multisum(&SumSpec::t(3, 1, 2), n).mul_poly(&xq()));
                let rhs = eval_multisum(&SumSpec::t(3, 0, 1), n).mul_poly(&one_plus_xq);
                let first = lhs.sub(&rhs).iter().next().map(|(qe, xe, _)| (qe, xe));
                let note = match first {
                    None => format!("residual vanishes through q^{n}"),
                    Some((qe, xe)) => format!("residual begins at q^{qe} x^{xe}"),
                };
                (CheckStatus::Pass, Some(note))
            }),
        ),
        (
            format!("certificate found for {}", TargetId::ProofA),
            Box::new(|| certificate_search(TargetId::ProofA)),
        ),
        (
            format!("certificate found for {}", TargetId::ProofB),
            Box::new(|| certificate_search(TargetId::ProofB)),
        ),
        (
            format!("certificate found for {}", TargetId::ProofE),
            Box::new(|| certificate_search(TargetId::ProofE)),
        ),
        (
            "first count series equals its product side".into(),
            Box::new(move || {
                let lhs = count_gamma(CountVariant::Q1, n, Stat::NumParts)
                    .to_series()
                    .at_x_one();
                let rhs = product_side(TheoremId::One, n);
                series_equal(&lhs, &rhs)
            }),
        ),
    ];
    run_checks("first colored-partition identity", n, checks)
}

/// The second identity's chain, including the shipped golden certificate.
pub fn verify_theorem2(cfg: RunConfig) -> Report {
    let n = cfg.order;
    let checks: Vec<(String, CheckFn)> = vec![
        (
            "pair generating function satisfies its functional equation".into(),
            Box::new(move || {
                let gf = pair_gf(RRVariant::RR2, n);
                match funceq_check(&gf, &pair_funceq(RRVariant::RR2), n) {
                    Ok(true) => (CheckStatus::Pass, None),
                    Ok(false) => (CheckStatus::Fail, Some("residual nonzero".into())),
                    Err(e) => (CheckStatus::Fail, Some(e.to_string())),
                }
            }),
        ),
        (
            "S(2,0,1) equals the pair generating function".into(),
            Box::new(move || {
                let lhs = eval_multisum(&SumSpec::s(2, 0, 1), n);
                let rhs = pair_gf(RRVariant::RR2, n);
                series_equal(&lhs, &rhs)
            }),
        ),
        (
            "T(2,0,1) equals the third restricted-count series".into(),
            Box::new(move || {
                let lhs = eval_multisum(&SumSpec::t(2, 0, 1), n);
                let rhs = count_gamma(CountVariant::Q3, n, Stat::NumParts).to_series();
                series_equal(&lhs, &rhs)
            }),
        ),
        (
            format!("certificate found for {}", TargetId::ProofC),
            Box::new(|| certificate_search(TargetId::ProofC)),
        ),
        (
            format!("certificate found for {}", TargetId::ProofD),
            Box::new(|| certificate_search(TargetId::ProofD)),
        ),
        (
            "bundled golden certificate verifies".into(),
            Box::new(|| match verify_certificate(&golden_certificate()) {
                Ok(()) => (CheckStatus::Pass, Some("14 entries".into())),
                Err(e) => (CheckStatus::Fail, Some(e.to_string())),
            }),
        ),
        (
            "second count series equals its product side".into(),
            Box::new(move || {
                let lhs = count_gamma(CountVariant::Q3, n, Stat::NumParts)
                    .to_series()
                    .at_x_one();
                let rhs = product_side(TheoremId::Two, n);
                series_equal(&lhs, &rhs)
            }),
        ),
    ];
    run_checks("second colored-partition identity", n, checks)
}

/// Finite-order evidence for the open refinement: the red-weighted count
/// table against `(1+yq) S(3,0,1)(y)`, plus its `y = 1` specialization.
/// Agreement through any finite order is evidence, not proof.
pub fn check_conjecture(cfg: RunConfig) -> Report {
    let n = cfg.order;
    let checks: Vec<(String, CheckFn)> = vec![
        (
            "weighted count series equals (1+yq)·S(3,0,1)(y) (evidence only)".into(),
            Box::new(move || {
                let lhs = count_gamma(CountVariant::Qstar1, n, Stat::Weighted).to_series();
                let one_plus_yq: PolyQX = "1 + q*x".parse().expect("literal");
                let rhs = eval_multisum(&SumSpec::s(3, 0, 1), n).mul_poly(&one_plus_yq);
                series_equal(&lhs, &rhs)
            }),
        ),
        (
            "y = 1 slice reproduces the first identity's series".into(),
            Box::new(move || {
                let lhs = count_gamma(CountVariant::Qstar1, n, Stat::Weighted)
                    .to_series()
                    .at_x_one();
                let rhs = count_gamma(CountVariant::Q1, n, Stat::NumParts)
                    .to_series()
                    .at_x_one();
                series_equal(&lhs, &rhs)
            }),
        ),
    ];
    run_checks("weighted refinement (open)", n, checks)
}

/// `1/(q^r; q^base)_inf` as a truncated series.
fn infinite_product_inv(r: u32, base: u32, order: u32) -> TruncSeries {
    pochhammer(PochSpec::infinite(r, base), order)
        .expect("infinite product converges")
        .invert()
        .expect("unit constant term")
}

/// Classical identities exercising the series engine: odd = distinct and
/// the two Rogers-Ramanujan sums against their product sides.
pub fn sanity_classical(cfg: RunConfig) -> Report {
    let n = cfg.order;
    let checks: Vec<(String, CheckFn)> = vec![
        (
            "distinct-parts product equals the odd-parts product".into(),
            Box::new(move || {
                let lhs = pochhammer(PochSpec::distinct_parts(), n)
                    .expect("infinite product converges")
                    .at_x_one();
                let rhs = infinite_product_inv(1, 2, n);
                series_equal(&lhs, &rhs)
            }),
        ),
        (
            "first Rogers-Ramanujan sum equals its product side".into(),
            Box::new(move || {
                let lhs = rr_sum(RRVariant::RR1, n).at_x_one();
                let rhs = infinite_product_inv(1, 5, n).mul(&infinite_product_inv(4, 5, n));
                series_equal(&lhs, &rhs)
            }),
        ),
        (
            "second Rogers-Ramanujan sum equals its product side".into(),
            Box::new(move || {
                let lhs = rr_sum(RRVariant::RR2, n).at_x_one();
                let rhs = infinite_product_inv(2, 5, n).mul(&infinite_product_inv(3, 5, n));
                series_equal(&lhs, &rhs)
            }),
        ),
    ];
    run_checks("classical series identities", n, checks)
}

/// Every chain in sequence: both identities, the open refinement, and the
/// classical sanity identities.
pub fn verify_all(cfg: RunConfig) -> Vec<Report> {
    vec![
        verify_theorem1(cfg),
        verify_theorem2(cfg),
        check_conjecture(cfg),
        sanity_classical(cfg),
    ]
}

// ---------------------------------------------------------------------------
// tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;

    fn essence(report: &Report) -> Vec<(String, CheckStatus, Option<String>)> {
        report
            .checks
            .iter()
            .map(|c| (c.name.clone(), c.status, c.detail.clone()))
            .collect()
    }

    #[test]
    fn first_chain_passes() {
        let report = verify_theorem1(RunConfig { order: 24 });
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn second_chain_passes() {
        let report = verify_theorem2(RunConfig { order: 24 });
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn conjecture_chain_passes() {
        let report = check_conjecture(RunConfig { order: 20 });
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn sanity_chain_passes() {
        let report = sanity_classical(RunConfig { order: 60 });
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn order_zero_is_trivially_green() {
        for report in verify_all(RunConfig { order: 0 }) {
            assert!(report.passed(), "{report}");
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let cfg = RunConfig { order: 16 };
        let first = verify_theorem1(cfg);
        let second = verify_theorem1(cfg);
        assert_eq!(essence(&first), essence(&second));
    }

    #[test]
    fn exit_codes_distinguish_failure_kinds() {
        let mut report = sanity_classical(RunConfig { order: 8 });
        assert_eq!(exit_code(&[report.clone()]), 0);
        report.checks[0].status = CheckStatus::Fail;
        assert_eq!(exit_code(&[report.clone()]), 2);
        report.checks[1].status = CheckStatus::Exhausted;
        assert_eq!(exit_code(&[report]), 3);
    }

    #[test]
    fn report_json_has_check_names() {
        let report = sanity_classical(RunConfig { order: 8 });
        let v: serde_json::Value = report.to_json().parse().unwrap();
        assert_eq!(v["order"], 8);
        assert!(v["checks"].as_array().unwrap().len() == 3);
    }
}
