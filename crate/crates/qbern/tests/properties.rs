//! Randomized property tests for the algebraic invariants: field axioms
//! on the exact layer, substitution/q-number compatibility, and the
//! p-adic exponent laws.

use proptest::prelude::*;

use qbern::exact::{qnumber, rat_int, CycElem, FieldElem, Poly, Rational};
use qbern::padic::{q_power, QPoint};

fn small_field_elem() -> impl Strategy<Value = FieldElem> {
    // ratios of small integer polynomials, nonzero denominator
    let coeffs = prop::collection::vec(-4i64..=4, 1..4);
    (coeffs.clone(), coeffs).prop_filter_map("nonzero denominator", |(n, d)| {
        let den = Poly::from_int_coeffs(&d);
        if den.is_zero() {
            return None;
        }
        Some(FieldElem::new(Poly::from_int_coeffs(&n), den).unwrap())
    })
}

proptest! {
    #[test]
    fn field_addition_commutes_and_associates(
        a in small_field_elem(),
        b in small_field_elem(),
        c in small_field_elem(),
    ) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
    }

    #[test]
    fn field_multiplication_distributes(
        a in small_field_elem(),
        b in small_field_elem(),
        c in small_field_elem(),
    ) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    }

    #[test]
    fn inverses_cancel(a in small_field_elem()) {
        prop_assume!(!a.is_zero());
        prop_assert!(a.mul(&a.inverse().unwrap()).is_one());
        prop_assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn canonical_form_is_unique(
        a in small_field_elem(),
        b in small_field_elem(),
    ) {
        // a == b iff a - b == 0: equality decisions agree with arithmetic
        prop_assert_eq!(a == b, a.sub(&b).is_zero());
    }

    #[test]
    fn substitution_commutes_with_qnumbers(x in 1u64..=6, t in 1i64..=6, neg: bool) {
        let t = if neg { -t } else { t };
        prop_assert_eq!(qnumber(x, 1).substitute_q_power(t), qnumber(x, t));
    }

    #[test]
    fn substitution_is_multiplicative(a in small_field_elem(), s in 1u64..=3, t in 1u64..=3) {
        prop_assert_eq!(
            a.substitute_q_power(s as i64).substitute_q_power(t as i64),
            a.substitute_q_power((s * t) as i64)
        );
    }

    #[test]
    fn qnumber_limits_are_integers(x in 1u64..=10, c in 1i64..=3) {
        let v = qnumber(x, c).eval_at_one().unwrap();
        prop_assert_eq!(v, CycElem::from_int(x as i64));
    }

    #[test]
    fn q_power_exponent_law(
        sn in -6i64..=6, sd in 1i64..=5,
        tn in -6i64..=6, td in 1i64..=5,
    ) {
        // random p-adic integers for p = 3: denominators coprime to 3
        prop_assume!(sd % 3 != 0 && td % 3 != 0);
        let q = QPoint::new(3, rat_int(4)).unwrap();
        let s = Rational::new(sn.into(), sd.into());
        let t = Rational::new(tn.into(), td.into());
        let prec = 8;
        let lhs = q_power(&q, &(&s + &t), prec).unwrap();
        let rhs = q_power(&q, &s, prec + 2)
            .unwrap()
            .mul(&q_power(&q, &t, prec + 2).unwrap());
        let diff = lhs.sub(&rhs);
        prop_assert!(diff.is_zero_rep() && diff.prec() >= prec);
    }
}
