//! Acceptance suite: every identity the library promises, run at desk
//! scale with its runtime budget. Each criterion prints one PASS/FAIL
//! line (run with `--nocapture` to see them as they complete).

mod common;

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use qbern::characters::{character, enumerate_characters};
use qbern::error::Error;
use qbern::exact::{rat, rat_int};
use qbern::integral::witt_convergence;
use qbern::measure::{
    additivity_check, char_levels_check, chi_operator_composition_diff, eq22_check,
    integral_char_x, theorem2_criterion, total_mass, Ball, MeasureParams, Region, SeedFunction,
};
use qbern::padic::{q_power, vp, PAdic, QPoint};
use qbern::qbernoulli::{
    distribution_check, recurrence_residual, weighted_beta, Family,
};
use qbern::{FieldElem, Rational};

fn report(name: &str, budget: Duration, start: Instant, detail: String) {
    let elapsed = start.elapsed();
    let pass = elapsed <= budget;
    println!(
        "{}: PASS in {:.2?} (budget {:.0?}) — {}",
        name, elapsed, budget, detail
    );
    assert!(
        pass,
        "{} exceeded its runtime budget: {:.2?} > {:.0?}",
        name, elapsed, budget
    );
}

#[test]
fn criterion_1_recurrence_residuals() {
    let start = Instant::now();
    let mut checked = 0usize;
    for n in 0..=10u32 {
        assert!(
            recurrence_residual(Family::Xi, n).unwrap().is_zero(),
            "xi residual n={}",
            n
        );
        assert!(
            recurrence_residual(Family::Carlitz, n).unwrap().is_zero(),
            "carlitz residual n={}",
            n
        );
        checked += 2;
        for alpha in 1..=3u32 {
            assert!(
                recurrence_residual(Family::Weighted(alpha), n)
                    .unwrap()
                    .is_zero(),
                "weighted({}) residual n={}",
                alpha,
                n
            );
            checked += 1;
        }
        for h in [1i64, 2, 3] {
            assert!(
                recurrence_residual(Family::Extended(h), n).unwrap().is_zero(),
                "extended({}) residual n={}",
                h,
                n
            );
            checked += 1;
        }
    }
    // negative h: the equation degenerates at n = -h; residuals vanish
    // below, and the degeneracy is reported from there on
    for h in [-1i64, -2, -3] {
        for n in 0..(-h) as u32 {
            assert!(recurrence_residual(Family::Extended(h), n).unwrap().is_zero());
            checked += 1;
        }
        for n in [(-h) as u32, 10] {
            assert!(matches!(
                recurrence_residual(Family::Extended(h), n),
                Err(Error::DegenerateEquation(m)) if m as i64 == -h
            ));
        }
    }
    report(
        "criterion 1 (recurrence residuals)",
        Duration::from_secs(5),
        start,
        format!("{} residuals exactly zero in Q(q)", checked),
    );
}

#[test]
fn criterion_2_classical_limit() {
    let start = Instant::now();
    for alpha in 1..=3u32 {
        for n in 0..=8u32 {
            let got = weighted_beta(alpha, n).eval_at_one().unwrap();
            let want = common::bernoulli_oracle(n);
            assert_eq!(
                got.as_rational(),
                Some(want),
                "q -> 1 limit mismatch at alpha={}, n={}",
                alpha,
                n
            );
        }
    }
    // the unmodified family diverges at q = 1 from n = 2 on
    assert_eq!(
        qbern::qbernoulli::xi(2).eval_at_one(),
        Err(Error::PoleAtOne)
    );
    report(
        "criterion 2 (classical limit)",
        Duration::from_secs(2),
        start,
        "27 limits equal the Bernoulli oracle; xi_2 raises PoleAtOne".into(),
    );
}

#[test]
fn criterion_3_distribution_relation() {
    let start = Instant::now();
    let mut cases = 0usize;
    for alpha in 1..=3u32 {
        for n in 0..=5u32 {
            for d in 1..=4u64 {
                for x in 0..=3u64 {
                    assert!(
                        distribution_check(alpha, n, d, x).unwrap().is_zero(),
                        "distribution relation fails at alpha={} n={} d={} x={}",
                        alpha,
                        n,
                        d,
                        x
                    );
                    cases += 1;
                }
            }
        }
    }
    report(
        "criterion 3 (distribution relation)",
        Duration::from_secs(30),
        start,
        format!("{} cases exactly zero", cases),
    );
}

#[test]
fn criterion_4_measure_additivity() {
    let start = Instant::now();
    let mut cases = 0usize;
    for p in [2u64, 3, 5] {
        for d in [1u64, 2, 4] {
            if num_integer::gcd(d, p) != 1 {
                continue;
            }
            for level in 0..=1u32 {
                let e = d * p.pow(level);
                for k in 0..=4u32 {
                    for alpha in 1..=2u32 {
                        let params = MeasureParams::symbolic(k, alpha);
                        for a in 0..e {
                            let parent = Ball::new(p, d, level, a).unwrap();
                            let diff = additivity_check(&params, p, &parent).unwrap();
                            assert!(
                                diff.is_exact_zero(),
                                "additivity fails at p={} d={} N={} k={} alpha={} a={}",
                                p,
                                d,
                                level,
                                k,
                                alpha,
                                a
                            );
                            cases += 1;
                        }
                    }
                }
            }
        }
    }
    // the deliberately wrong constant seed is rejected
    let wrong = SeedFunction::Constant(FieldElem::one());
    let diff = theorem2_criterion(1, 1, &wrong, 2, 0, 0).unwrap();
    assert!(!diff.is_zero(), "criterion failed to reject the constant seed");
    report(
        "criterion 4 (measure additivity)",
        Duration::from_secs(60),
        start,
        format!("{} refinements exactly additive; constant seed rejected", cases),
    );
}

#[test]
fn criterion_5_total_mass() {
    let start = Instant::now();
    // exact level-independence of the finite sums
    let mut level_checks = 0usize;
    for p in [2u64, 3, 5] {
        for d in [1u64, 2, 4] {
            if num_integer::gcd(d, p) != 1 {
                continue;
            }
            for k in 0..=4u32 {
                for alpha in 1..=2u32 {
                    let params = MeasureParams::symbolic(k, alpha);
                    let (value, levels) = total_mass(&params, p, d, 3).unwrap();
                    assert_eq!(
                        value.as_symbolic().unwrap(),
                        &weighted_beta(alpha, k),
                        "mass value mismatch"
                    );
                    for l in &levels {
                        assert!(
                            l.exact,
                            "level {} sum differs: p={} d={} k={} alpha={}",
                            l.level, p, d, k, alpha
                        );
                        level_checks += 1;
                    }
                }
            }
        }
    }
    // numeric Witt profiles at q = 1 + p, p = 3: nondecreasing, >= N - 2
    for alpha in 1..=2u32 {
        for k in 0..=4u32 {
            let profile = witt_convergence(alpha, k, 0, 3, &rat_int(4), 5, None).unwrap();
            assert!(
                profile.nondecreasing && profile.pass,
                "Witt profile not admissible: alpha={} k={} {:?}",
                alpha,
                k,
                profile
            );
        }
    }
    report(
        "criterion 5 (total mass)",
        Duration::from_secs(60),
        start,
        format!(
            "{} finite levels equal the weighted number exactly; 10 Witt profiles admissible",
            level_checks
        ),
    );
}

#[test]
fn criterion_6_theorem5_integrals() {
    let start = Instant::now();
    let p = 3u64;
    let mut closed = 0usize;
    for d in [4u64, 5] {
        for chi in enumerate_characters(d) {
            for k in 0..=3u32 {
                for alpha in 1..=2u32 {
                    let from_measure = integral_char_x(&chi, k, alpha).unwrap();
                    let from_definition =
                        qbern::characters::generalized_beta(&chi, alpha, k);
                    assert_eq!(
                        from_measure, from_definition,
                        "closed form mismatch: d={} k={} alpha={}",
                        d, k, alpha
                    );
                    closed += 1;
                }
            }
        }
        for k in 0..=3u32 {
            for alpha in 1..=2u32 {
                for region in [Region::X, Region::PX] {
                    let checks = char_levels_check(d, k, alpha, p, region, 2).unwrap();
                    assert!(
                        checks.iter().all(|c| c.exact),
                        "finite-level partials differ: d={} k={} alpha={} {:?}",
                        d,
                        k,
                        alpha,
                        region
                    );
                }
            }
        }
    }
    report(
        "criterion 6 (character integrals over X and pX)",
        Duration::from_secs(60),
        start,
        format!(
            "{} closed forms equal the definition; X and pX partials exact at levels 0..=2",
            closed
        ),
    );
}

#[test]
fn criterion_7_operator_composition() {
    let start = Instant::now();
    let mut cases = 0usize;
    for chi in enumerate_characters(4) {
        for k in 0..=3u32 {
            for alpha in 1..=2u32 {
                let f = qbern::characters::generalized_beta(&chi, alpha, k);
                for x in 2..=5u64 {
                    for y in 2..=5u64 {
                        let diff =
                            chi_operator_composition_diff(&chi, x, y, k, alpha, &f).unwrap();
                        assert!(
                            diff.is_zero(),
                            "composition fails: chi mod 4, x={} y={} k={} alpha={}",
                            x,
                            y,
                            k,
                            alpha
                        );
                        cases += 1;
                    }
                }
            }
        }
    }
    report(
        "criterion 7 (operator composition)",
        Duration::from_secs(20),
        start,
        format!("{} compositions collapse to the product operator exactly", cases),
    );
}

#[test]
fn criterion_8_final_identity() {
    let start = Instant::now();
    let q = QPoint::new(3, rat_int(4)).unwrap();
    let mut worst = i64::MAX;
    for chi in [character(1, 0).unwrap(), character(4, 1).unwrap()] {
        for k in 0..=3u32 {
            for alpha in 1..=2u32 {
                let report = eq22_check(&chi, k, alpha, 5, &q, 12).unwrap();
                assert!(
                    report.difference.is_zero_rep() && report.certified_valuation >= 12,
                    "final identity defect too large: chi mod {}, k={}, alpha={}: {} (certified {})",
                    chi.modulus(),
                    k,
                    alpha,
                    report.difference,
                    report.certified_valuation
                );
                worst = worst.min(report.certified_valuation);
            }
        }
    }
    report(
        "criterion 8 (final identity, two routes)",
        Duration::from_secs(60),
        start,
        format!("16 cases certified with v_3(defect) >= {}", worst),
    );
}

#[test]
fn criterion_9_padic_kernel() {
    let start = Instant::now();
    // exponent laws at deterministic rational exponents
    let q = QPoint::new(3, rat_int(4)).unwrap();
    for (s, t) in [
        (rat(1, 2), rat(2, 5)),
        (rat(-1, 2), rat(1, 5)),
        (rat(4, 7), rat(3, 2)),
        (rat_int(3), rat(1, 4)),
    ] {
        let lhs = q_power(&q, &(&s + &t), 10).unwrap();
        let rhs = q_power(&q, &s, 12)
            .unwrap()
            .mul(&q_power(&q, &t, 12).unwrap())
            .with_prec_at_most(10);
        let diff = lhs.sub(&rhs);
        assert!(
            diff.is_zero_rep() && diff.prec() >= 10,
            "exponent law fails at s={} t={}",
            s,
            t
        );
    }
    // Hensel cross-check: 4^{1/2} is the root of x^2 = 4 with x = 1 mod 3
    let oracle = common::hensel_sqrt(4, 3, 3, 1).expect("root exists");
    assert_eq!(oracle, 25);
    let root = q_power(&q, &rat(1, 2), 3).unwrap();
    assert_eq!(root.residue_mod_pk(3).unwrap(), BigInt::from(oracle));
    // precision propagation validated by residue-class enumeration
    let mut enumerated = 0usize;
    for p in [2u64, 3] {
        for (va, ma, vb, mb) in [
            (rat_int(1), 2i64, rat_int(1 + p as i64), 3i64),
            (rat_int(p as i64), 3, rat_int(2 * p as i64 + 1), 4),
            (rat_int(p as i64 * p as i64), 4, rat_int(p as i64), 2),
        ] {
            let a = PAdic::new(p, va.clone(), ma);
            let b = PAdic::new(p, vb.clone(), mb);
            let ops: Vec<(&str, PAdic)> = vec![
                ("add", a.add(&b)),
                ("sub", a.sub(&b)),
                ("mul", a.mul(&b)),
                ("div", a.div(&b).unwrap()),
            ];
            let pa = BigInt::from(p).pow(ma as u32);
            let pb = BigInt::from(p).pow(mb as u32);
            for (op, claim) in ops {
                for s in 0..6i64 {
                    for t in 0..6i64 {
                        let ra = &va + Rational::from_integer(&pa * BigInt::from(s));
                        let rb = &vb + Rational::from_integer(&pb * BigInt::from(t));
                        let exact = match op {
                            "add" => &ra + &rb,
                            "sub" => &ra - &rb,
                            "mul" => &ra * &rb,
                            _ => &ra / &rb,
                        };
                        let defect = exact - claim.value();
                        let v = vp(&defect, p);
                        assert_eq!(v, common::vp_oracle(&defect, p));
                        assert!(
                            v.map_or(true, |v| v >= claim.prec()),
                            "{} at p={} leaves the certified class",
                            op,
                            p
                        );
                        enumerated += 1;
                    }
                }
            }
        }
    }
    report(
        "criterion 9 (p-adic kernel soundness)",
        Duration::from_secs(10),
        start,
        format!(
            "exponent laws, Hensel root 25 mod 27, {} enumerated representatives in class",
            enumerated
        ),
    );
}
