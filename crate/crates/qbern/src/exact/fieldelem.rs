//! Reduced rational functions in q over Q(zeta_m) — the value type every
//! symbolic computation in this crate returns.
//!
//! Canonical form: gcd(num, den) = 1 and the denominator is monic. Two
//! values are equal as field elements exactly when their canonical forms
//! are structurally equal, so `==` decides mathematical equality.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};

use super::cyclotomic::CycElem;
use super::poly::Poly;
use super::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElem {
    num: Poly,
    den: Poly,
}

impl FieldElem {
    /// Build num/den in canonical form. Fails on a zero denominator.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return FieldElem {
                num: Poly::zero(),
                den: Poly::one(),
            };
        }
        // Strip a common monomial factor q^s cheaply before the gcd.
        let s = num.trailing_zeros().min(den.trailing_zeros());
        let (num, den) = if s > 0 {
            (num.shift_down(s), den.shift_down(s))
        } else {
            (num, den)
        };
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g), den.div_exact(&g))
        };
        // Monic denominator fixes the remaining scalar ambiguity.
        let lc = den.leading().unwrap().clone();
        if lc.is_one() {
            FieldElem { num, den }
        } else {
            let inv = lc.inverse().expect("nonzero leading coefficient");
            FieldElem {
                num: num.scalar_mul(&inv),
                den: den.scalar_mul(&inv),
            }
        }
    }

    pub fn zero() -> Self {
        FieldElem {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        FieldElem {
            num: Poly::one(),
            den: Poly::one(),
        }
    }

    /// The indeterminate q.
    pub fn q() -> Self {
        Self::from_poly(Poly::q())
    }

    /// q^e for any integer e (negative exponents land in the denominator).
    pub fn q_pow(e: i64) -> Self {
        if e >= 0 {
            Self::from_poly(Poly::monomial(CycElem::one(), e as usize))
        } else {
            FieldElem {
                num: Poly::one(),
                den: Poly::monomial(CycElem::one(), (-e) as usize),
            }
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        FieldElem {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_poly(Poly::from_int_coeffs(&[n]))
    }

    pub fn from_rational(r: Rational) -> Self {
        Self::from_poly(Poly::constant(CycElem::from_rational(r)))
    }

    pub fn from_cyc(c: CycElem) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    /// Assemble from parts already known to be reduced with a monic
    /// denominator (the structured-denominator kernels prove this by
    /// construction).
    pub(crate) fn from_reduced_parts(num: Poly, den: Poly) -> Self {
        debug_assert!(den.leading().is_some_and(|c| c.is_one()));
        if num.is_zero() {
            return Self::zero();
        }
        FieldElem { num, den }
    }

    /// Canonicalize `num / prod_M (q^M - 1)` by peeling common cyclotomic
    /// factors off the numerator — the denominators this crate produces
    /// are always of this shape, and peeling avoids the coefficient
    /// growth a generic remainder-sequence gcd would suffer.
    pub(crate) fn reduce_over_cyclotomic_factors(num: Poly, den_exponents: &[u64]) -> Self {
        use std::collections::BTreeMap;
        if num.is_zero() {
            return Self::zero();
        }
        let mut counts: BTreeMap<u32, u32> = BTreeMap::new();
        for &m in den_exponents {
            let m = u32::try_from(m).expect("factor exponent fits u32");
            for e in 1..=m {
                if m % e == 0 {
                    *counts.entry(e).or_insert(0) += 1;
                }
            }
        }
        let mut reduced = num;
        for (&e, mult) in counts.iter_mut() {
            let phi = Poly::from_coeffs(
                super::cyclotomic::cyclotomic_polynomial(e)
                    .into_iter()
                    .map(|c| CycElem::from_rational(Rational::from_integer(c)))
                    .collect(),
            );
            while *mult > 0 {
                let (q, r) = reduced.divrem(&phi).expect("nonzero divisor");
                if r.is_zero() {
                    reduced = q;
                    *mult -= 1;
                } else {
                    break;
                }
            }
        }
        let mut den = Poly::one();
        for (&e, &mult) in counts.iter() {
            if mult > 0 {
                let phi = Poly::from_coeffs(
                    super::cyclotomic::cyclotomic_polynomial(e)
                        .into_iter()
                        .map(|c| CycElem::from_rational(Rational::from_integer(c)))
                        .collect(),
                );
                for _ in 0..mult {
                    den = den.mul(&phi);
                }
            }
        }
        Self::from_reduced_parts(reduced, den)
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::reduce(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::reduce(
            self.num.mul(&other.den).sub(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn neg(&self) -> Self {
        FieldElem {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::reduce(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn scalar_mul(&self, c: &CycElem) -> Self {
        Self::reduce(self.num.scalar_mul(c), self.den.clone())
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(
            self.num.mul(&other.den),
            self.den.mul(&other.num),
        ))
    }

    pub fn inverse(&self) -> Result<Self> {
        Self::one().div(self)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut result = Self::one();
        let mut b = base;
        let mut e = e.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        Ok(result)
    }

    /// Substitute q -> q^t for nonzero t, canonicalized. Negative t clears
    /// the Laurent denominators so the result is again a ratio of
    /// polynomials.
    pub fn substitute_q_power(&self, t: i64) -> Self {
        assert!(t != 0, "substitution exponent must be nonzero");
        if t > 0 {
            // Composition preserves coprimality; only the monic scaling
            // needs refreshing (it is preserved too, so reuse directly).
            FieldElem {
                num: self.num.subst_pow(t as u64),
                den: self.den.subst_pow(t as u64),
            }
        } else {
            let e = (-t) as u64;
            if self.is_zero() {
                return Self::zero();
            }
            let dn = self.num.degree().unwrap() as u64;
            let dd = self.den.degree().unwrap() as u64;
            // f(q^{-e}) = q^{e(dd-dn)} rev_e(num) / rev_e(den)
            let a = self.num.reversed().subst_pow(e);
            let b = self.den.reversed().subst_pow(e);
            if dd >= dn {
                let shift = Poly::monomial(CycElem::one(), (e * (dd - dn)) as usize);
                Self::reduce(a.mul(&shift), b)
            } else {
                let shift = Poly::monomial(CycElem::one(), (e * (dn - dd)) as usize);
                Self::reduce(a, b.mul(&shift))
            }
        }
    }

    /// The q -> 1 limit when it exists. A common (q-1)^r factor is
    /// cancelled first; a genuine pole reports `PoleAtOne`.
    pub fn eval_at_one(&self) -> Result<CycElem> {
        let q_minus_1 = Poly::from_int_coeffs(&[-1, 1]);
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        loop {
            let d1 = den.eval_at_one();
            let n1 = num.eval_at_one();
            if !d1.is_zero() {
                return n1.div(&d1);
            }
            if !n1.is_zero() {
                return Err(Error::PoleAtOne);
            }
            num = num.div_exact(&q_minus_1);
            den = den.div_exact(&q_minus_1);
        }
    }

    /// Exact evaluation at a rational point; requires rational coefficients
    /// and a nonvanishing denominator.
    pub fn eval_rational(&self, x: &Rational) -> Result<Rational> {
        let d = self.den.eval_rational(x)?;
        if d == Rational::from_integer(0.into()) {
            return Err(Error::DivisionByZero);
        }
        Ok(self.num.eval_rational(x)? / d)
    }

    /// True when numerator and denominator both have coefficients in Q.
    pub fn is_rational_coeffs(&self) -> bool {
        self.num.is_rational() && self.den.is_rational()
    }
}

/// The q-number `[x]_{q^c} = (1 - q^{cx})/(1 - q^c)` as an exact field
/// element; for c > 0 this is the polynomial 1 + q^c + ... + q^{c(x-1)}.
pub fn qnumber(x: u64, c: i64) -> FieldElem {
    assert!(c != 0, "q-number base exponent must be nonzero");
    if x == 0 {
        return FieldElem::zero();
    }
    if c > 0 {
        let mut coeffs = vec![CycElem::zero(); ((x - 1) as usize) * c as usize + 1];
        for i in 0..x {
            coeffs[(i as usize) * c as usize] = CycElem::one();
        }
        FieldElem::from_poly(Poly::from_coeffs(coeffs))
    } else {
        // (1 - Q^x)/(1 - Q) with Q = q^c in the field.
        let qc = FieldElem::q_pow(c);
        let one = FieldElem::one();
        one.sub(&qc.pow(x as i64).expect("positive power"))
            .div(&one.sub(&qc))
            .expect("nonzero denominator")
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

// Operator sugar over references; division panics on zero, use
// `FieldElem::div` where the zero case is reachable.

impl Add for &FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: &FieldElem) -> FieldElem {
        FieldElem::add(self, rhs)
    }
}

impl Sub for &FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: &FieldElem) -> FieldElem {
        FieldElem::sub(self, rhs)
    }
}

impl Mul for &FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: &FieldElem) -> FieldElem {
        FieldElem::mul(self, rhs)
    }
}

impl Div for &FieldElem {
    type Output = FieldElem;
    fn div(self, rhs: &FieldElem) -> FieldElem {
        FieldElem::div(self, rhs).expect("division by zero field element")
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem::neg(self)
    }
}
