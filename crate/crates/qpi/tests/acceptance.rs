//! End-to-end acceptance checks, one per shipped claim. Each test prints a
//! single `acceptance N: PASS/FAIL` line (shown with `--nocapture`) and
//! enforces the runtime budget where one is part of the claim.

use qpi::certificates::{
    find_certificate, relations_grid_check, verify_certificate, TargetId,
};
use qpi::exactmath::rat;
use qpi::multisum::{eval_multisum, pascal_check, shift_check, Family, SumSpec};
use qpi::partitions::{count_gamma, enumerate_gamma, CountVariant, Stat};
use qpi::pipeline::{check_conjecture, golden_certificate, sanity_classical, RunConfig};
use qpi::qseries::{product_side, TheoremId};
use std::collections::BTreeMap;
use std::time::{Duration, Instant};

/// Run one criterion, print its line, and enforce an optional time budget.
fn criterion<F>(label: &str, budget: Option<Duration>, run: F)
where
    F: FnOnce() -> Result<String, String>,
{
    let start = Instant::now();
    let outcome = run();
    let elapsed = start.elapsed();
    match outcome {
        Ok(note) => {
            println!(
                "acceptance {label}: PASS — {note} ({} ms)",
                elapsed.as_millis()
            );
            if let Some(b) = budget {
                assert!(
                    elapsed <= b,
                    "{label} exceeded its {}s budget: {elapsed:?}",
                    b.as_secs()
                );
            }
        }
        Err(why) => {
            println!(
                "acceptance {label}: FAIL — {why} ({} ms)",
                elapsed.as_millis()
            );
            panic!("{label}: {why}");
        }
    }
}

fn names(partitions: &[qpi::partitions::ColoredPartition]) -> Vec<String> {
    partitions.iter().map(|p| p.to_string()).collect()
}

#[test]
fn criterion_01_enumeration_matches_the_displayed_lists() {
    criterion("1", Some(Duration::from_secs(1)), || {
        let first = enumerate_gamma(6, &CountVariant::Q1.forbidden())
            .map_err(|e| e.to_string())?;
        let expected_first = [
            "6R", "6G", "6B", "5R+1G", "5R+1B", "5G+1G", "5G+1B", "5B+1G", "5B+1B",
            "4R+2B", "4G+2R", "4G+2G", "4G+2B", "4B+2R", "4B+2G", "4B+2B",
            "3G+2G+1G", "3B+2B+1B",
        ];
        if names(&first) != expected_first {
            return Err("first restricted list of 6 differs".into());
        }
        let second = enumerate_gamma(6, &CountVariant::Q3.forbidden())
            .map_err(|e| e.to_string())?;
        let expected_second = [
            "6R", "6G", "6B", "5R+1G", "5G+1G", "5B+1G",
            "4R+2B", "4G+2G", "4G+2B", "4B+2G", "4B+2B", "3G+2G+1G",
        ];
        if names(&second) != expected_second {
            return Err("second restricted list of 6 differs".into());
        }
        Ok("18 and 12 partitions of 6, item for item".into())
    });
}

#[test]
fn criterion_02_count_series_equal_their_product_sides() {
    criterion("2", Some(Duration::from_secs(30)), || {
        let n = 40;
        for (variant, theorem) in [
            (CountVariant::Q1, TheoremId::One),
            (CountVariant::Q3, TheoremId::Two),
        ] {
            let counts = count_gamma(variant, n, Stat::NumParts);
            let product = product_side(theorem, n);
            for total in 0..=n {
                let left = rat(counts.total_at(total) as i64);
                if product.coeff(total, 0) != left {
                    return Err(format!("{theorem:?}: mismatch at q^{total}"));
                }
            }
        }
        Ok("both count series match their products through q^40".into())
    });
}

#[test]
fn criterion_03_every_atomic_relation_vanishes_on_the_grid() {
    criterion("3", Some(Duration::from_secs(300)), || {
        match relations_grid_check(4, 40) {
            Ok(true) => Ok("18 relations x 125 offsets, zero residual at order 40".into()),
            Ok(false) => Err("a relation instance has a nonzero residual".into()),
            Err(e) => Err(e.to_string()),
        }
    });
}

#[test]
fn criterion_04_bundled_certificate_verifies_and_mutations_fail() {
    criterion("4", None, || {
        let cert = golden_certificate();
        if cert.entries.len() != 14 {
            return Err(format!("expected 14 entries, got {}", cert.entries.len()));
        }
        verify_certificate(&cert).map_err(|e| e.to_string())?;
        let mut doctored = cert.clone();
        doctored.entries[0].multiplier = doctored.entries[0]
            .multiplier
            .add(&qpi::exactmath::RatFn::one());
        if verify_certificate(&doctored).is_ok() {
            return Err("a mutated multiplier still verified".into());
        }
        Ok("14-entry certificate verifies; a one-coefficient mutation fails".into())
    });
}

#[test]
fn criterion_05_solver_finds_and_verifier_confirms_every_target() {
    criterion("5", None, || {
        let mut sizes = Vec::new();
        for target in TargetId::ALL {
            let cert = find_certificate(target).map_err(|e| format!("{target}: {e}"))?;
            verify_certificate(&cert).map_err(|e| format!("{target}: {e}"))?;
            sizes.push(format!("{target}={}", cert.entries.len()));
        }
        Ok(format!("entry counts {}", sizes.join(" ")))
    });
}

#[test]
fn criterion_06_count_systems_hold_through_order_thirty() {
    criterion("6", None, || {
        if !qpi::partitions::q_system_check(30) {
            return Err("the coupled three-series system has a residual".into());
        }
        if !qpi::partitions::untangled_check(30) {
            return Err("an untangled single-series equation has a residual".into());
        }
        Ok("coupled system and both untangled equations vanish through q^30".into())
    });
}

#[test]
fn criterion_07_classical_identities_hold_through_order_one_hundred() {
    criterion("7", Some(Duration::from_secs(5)), || {
        let report = sanity_classical(RunConfig { order: 100 });
        if report.passed() {
            Ok("odd = distinct and both Rogers-Ramanujan identities through q^100".into())
        } else {
            Err(format!("{report}"))
        }
    });
}

#[test]
fn criterion_08_weighted_refinement_agrees_as_evidence() {
    criterion("8", None, || {
        let report = check_conjecture(RunConfig { order: 30 });
        if report.passed() {
            Ok("weighted counts match the sum side through q^30 (evidence only)".into())
        } else {
            Err(format!("{report}"))
        }
    });
}

#[test]
fn criterion_09_dynamic_program_equals_brute_force() {
    criterion("9", None, || {
        for (variant, stat) in [
            (CountVariant::Q1, Stat::NumParts),
            (CountVariant::Q2, Stat::NumParts),
            (CountVariant::Q3, Stat::NumParts),
            (CountVariant::Qstar1, Stat::Weighted),
        ] {
            let table = count_gamma(variant, 25, stat);
            let forbidden = variant.forbidden();
            for n in 0..=25u32 {
                let mut brute: BTreeMap<u32, u64> = BTreeMap::new();
                for p in enumerate_gamma(n, &forbidden).map_err(|e| e.to_string())? {
                    *brute.entry(p.stat_value(stat)).or_insert(0) += 1;
                }
                for m in 0..=2 * n {
                    if table.get(m, n) != brute.get(&m).copied().unwrap_or(0) {
                        return Err(format!("{variant:?}: refined mismatch at m={m} n={n}"));
                    }
                }
            }
        }
        Ok("four variants, refined counts agree for every total through 25".into())
    });
}

#[test]
fn criterion_10_trinomial_and_shift_properties_hold() {
    criterion("10", None, || {
        for base in [1, 2] {
            if !pascal_check(8, base) {
                return Err(format!("a contiguous trinomial relation fails in base {base}"));
            }
        }
        for family in [Family::S, Family::T] {
            for a in 0..=2 {
                for b in 0..=2 {
                    for c in 0..=2 {
                        for i in 1..=3 {
                            let spec = SumSpec::new(family, a, b, c);
                            if !shift_check(&spec, i, 24) {
                                return Err(format!("shift {i} fails for {spec}"));
                            }
                        }
                    }
                }
            }
        }
        for a in 0..=3 {
            for b in 0..=3 {
                for c in 0..=3 {
                    let s = eval_multisum(&SumSpec::s(a, b, c), 40).at_x_one();
                    let t = eval_multisum(&SumSpec::t(a, b, c), 40).at_x_one();
                    if s != t {
                        return Err(format!("S and T differ at x = 1 for ({a},{b},{c})"));
                    }
                }
            }
        }
        Ok("trinomial relations, shift equations, and the x = 1 collapse all hold".into())
    });
}
