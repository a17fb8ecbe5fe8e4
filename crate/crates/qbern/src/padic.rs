//! Finite-precision p-adic arithmetic with certified error bounds.
//!
//! A [`PAdic`] is an exact rational `value` plus a precision tag `prec`:
//! the true number differs from `value` by an element of p^prec * Z_p.
//! Keeping the value exact means long Riemann sums accumulate no rounding
//! at all; truncation only ever happens when a series is cut or a result
//! is reported. Precision tags propagate by the sharpest bound derivable
//! from operand precisions and valuations.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{FieldElem, Rational};

/// Effectively-infinite precision for exactly known inputs. Arithmetic
/// saturates, so this behaves like infinity at every realistic scale.
const EXACT_PREC: i64 = i64::MAX / 4;

/// Default guard digits added on top of a requested target precision.
/// The final-identity checks subtract nearly equal quantities, so working
/// room above the target is needed to certify it.
pub const GUARD_DIGITS: i64 = 10;

/// p-adic valuation of a big integer; `None` is +infinity (the zero case).
fn vp_bigint(x: &BigInt, p: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut v = 0i64;
    let mut x = x.clone();
    loop {
        let (q, r) = x.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        v += 1;
        x = q;
    }
}

/// Normalized exponential valuation of a rational; `None` is +infinity.
pub fn vp(x: &Rational, p: u64) -> Option<i64> {
    let vn = vp_bigint(x.numer(), p)?;
    let vd = vp_bigint(x.denom(), p).expect("denominator nonzero");
    Some(vn - vd)
}

/// A p-adic number: exact rational representative plus certified absolute
/// precision (error lies in p^prec * Z_p).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PAdic {
    p: u64,
    value: Rational,
    prec: i64,
}

impl PAdic {
    /// Canonical representative: any value indistinguishable from 0 at the
    /// stated precision is normalized to the zero representative.
    pub fn new(p: u64, value: Rational, prec: i64) -> Self {
        debug_assert!(p >= 2);
        let value = match vp(&value, p) {
            Some(v) if v >= prec => Rational::zero(),
            _ => value,
        };
        PAdic { p, value, prec }
    }

    /// An exactly known rational as a p-adic number.
    pub fn exact(p: u64, value: Rational) -> Self {
        PAdic::new(p, value, EXACT_PREC)
    }

    pub fn exact_int(p: u64, n: i64) -> Self {
        Self::exact(p, Rational::from_integer(BigInt::from(n)))
    }

    pub fn zero(p: u64, prec: i64) -> Self {
        PAdic {
            p,
            value: Rational::zero(),
            prec,
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn value(&self) -> &Rational {
        &self.value
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// True when the representative is (normalized) zero, i.e. the number
    /// is indistinguishable from 0 at this precision.
    pub fn is_zero_rep(&self) -> bool {
        self.value.is_zero()
    }

    /// Exact valuation of the representative; `None` for the zero
    /// representative (whose true valuation is only bounded below by
    /// `prec`).
    pub fn valuation(&self) -> Option<i64> {
        vp(&self.value, self.p)
    }

    /// Certified lower bound on the valuation of the true number.
    pub fn valuation_lb(&self) -> i64 {
        self.valuation().unwrap_or(self.prec)
    }

    /// Truncate the certificate to at most `prec`.
    pub fn with_prec_at_most(&self, prec: i64) -> Self {
        PAdic::new(self.p, self.value.clone(), self.prec.min(prec))
    }

    fn assert_same_p(&self, other: &Self) {
        assert_eq!(self.p, other.p, "mixed primes in p-adic arithmetic");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_same_p(other);
        PAdic::new(
            self.p,
            &self.value + &other.value,
            self.prec.min(other.prec),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.assert_same_p(other);
        PAdic::new(
            self.p,
            &self.value - &other.value,
            self.prec.min(other.prec),
        )
    }

    pub fn neg(&self) -> Self {
        PAdic {
            p: self.p,
            value: -self.value.clone(),
            prec: self.prec,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.assert_same_p(other);
        let prec = self
            .valuation_lb()
            .saturating_add(other.prec)
            .min(other.valuation_lb().saturating_add(self.prec));
        PAdic::new(self.p, &self.value * &other.value, prec)
    }

    /// Multiply by an exactly known rational scalar.
    pub fn scalar_mul(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return PAdic::new(self.p, Rational::zero(), EXACT_PREC);
        }
        let vc = vp(c, self.p).unwrap();
        PAdic::new(self.p, &self.value * c, self.prec.saturating_add(vc))
    }

    /// Division. The divisor must be distinguishable from zero at its
    /// stated precision.
    pub fn div(&self, other: &Self) -> Result<Self> {
        self.assert_same_p(other);
        if other.is_zero_rep() {
            return Err(Error::DivisionByZero);
        }
        let vb = other.valuation().unwrap();
        let prec = self
            .prec
            .saturating_sub(vb)
            .min(other.prec.saturating_add(self.valuation_lb()).saturating_sub(2 * vb));
        Ok(PAdic::new(self.p, &self.value / &other.value, prec))
    }

    pub fn inverse(&self) -> Result<Self> {
        PAdic::exact(self.p, Rational::one()).div(self)
    }

    /// Integer power by repeated multiplication (exact on representatives).
    pub fn pow_i64(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut result = PAdic::exact(self.p, Rational::one());
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

    /// Residue of the value modulo p^k as a nonnegative integer. Requires
    /// a nonnegative-valuation value (unit denominator mod p).
    pub fn residue_mod_pk(&self, k: u32) -> Result<BigInt> {
        let pk = BigInt::from(self.p).pow(k);
        let den = self.value.denom();
        if (vp_bigint(den, self.p).is_none() || vp_bigint(den, self.p) != Some(0))
            && !den.is_one() && vp_bigint(den, self.p) != Some(0) {
                return Err(Error::InvalidInput(
                    "residue requires denominator coprime to p".into(),
                ));
            }
        let egcd = den.extended_gcd(&pk);
        if !egcd.gcd.is_one() {
            return Err(Error::InvalidInput(
                "residue requires denominator coprime to p".into(),
            ));
        }
        let inv = egcd.x.mod_floor(&pk);
        Ok((self.value.numer() * inv).mod_floor(&pk))
    }

    /// JSON rendering: prime, exact value, certified precision, and the
    /// convenience digit expansion.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "p": self.p,
            "value": self.value.to_string(),
            "prec": self.prec,
            "digits": self.digits_string(),
        })
    }

    /// Truncated digit expansion "d0 + d1*p + ..." up to the certified
    /// precision, for reporting.
    pub fn digits_string(&self) -> String {
        if self.is_zero_rep() {
            return format!("O({}^{})", self.p, self.prec);
        }
        let v = self.valuation().unwrap();
        // unit part u = value / p^v
        let pv = Rational::from_integer(BigInt::from(self.p)).pow(v as i32);
        let unit = &self.value / pv;
        let ndigits = (self.prec - v).max(0) as u32;
        let pk = BigInt::from(self.p).pow(ndigits);
        let egcd = unit.denom().extended_gcd(&pk);
        let mut rep = if egcd.gcd.is_one() {
            (unit.numer() * egcd.x.mod_floor(&pk)).mod_floor(&pk)
        } else {
            return format!("{} + O({}^{})", self.value, self.p, self.prec);
        };
        let mut terms = Vec::new();
        let p_big = BigInt::from(self.p);
        let mut e = v;
        while !rep.is_zero() {
            let (q, d) = rep.div_rem(&p_big);
            if !d.is_zero() {
                let t = match e {
                    0 => format!("{}", d),
                    1 => format!("{}*{}", d, self.p),
                    _ => format!("{}*{}^{}", d, self.p, e),
                };
                terms.push(t);
            }
            rep = q;
            e += 1;
        }
        if terms.is_empty() {
            terms.push("0".to_string());
        }
        format!("{} + O({}^{})", terms.join(" + "), self.p, self.prec)
    }
}

impl fmt::Display for PAdic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // anything within saturation distance of the sentinel is exact
        if self.prec >= EXACT_PREC / 2 {
            write!(f, "{}", self.value)
        } else {
            write!(f, "{} + O({}^{})", self.value, self.p, self.prec)
        }
    }
}

/// A p-adic base point q subject to the standing assumption |1 - q|_p < 1,
/// i.e. v_p(q - 1) >= 1.
#[derive(Clone, Debug)]
pub struct QPoint {
    q: PAdic,
}

impl QPoint {
    /// An exactly known q with v_p(q - 1) >= 1.
    pub fn new(p: u64, q: Rational) -> Result<Self> {
        let diff = &q - Rational::one();
        match vp(&diff, p) {
            None => Err(Error::InvalidInput(
                "q = 1 is excluded (q-numbers degenerate)".into(),
            )),
            Some(v) if v >= 1 => Ok(QPoint {
                q: PAdic::exact(p, q),
            }),
            _ => Err(Error::InvalidInput(format!(
                "|1 - q|_p < 1 fails: v_{}(q - 1) < 1",
                p
            ))),
        }
    }

    /// A q known only to finite precision.
    pub fn with_precision(p: u64, q: Rational, prec: i64) -> Result<Self> {
        let point = Self::new(p, q)?;
        Ok(QPoint {
            q: point.q.with_prec_at_most(prec),
        })
    }

    pub fn p(&self) -> u64 {
        self.q.p()
    }

    pub fn padic(&self) -> &PAdic {
        &self.q
    }

    /// v_p(q - 1) >= 1, guaranteed by construction.
    pub fn v_q_minus_1(&self) -> i64 {
        let diff = self.q.sub(&PAdic::exact(self.p(), Rational::one()));
        diff.valuation().unwrap_or(diff.prec())
    }
}

/// q^t for a p-adic integer exponent t, via the binomial series
/// sum_j C(t,j) (q-1)^j truncated at the first j with tail valuation at
/// least `target_prec`. For integer t >= 0 this agrees with repeated
/// multiplication up to the certificate.
pub fn q_power(q: &QPoint, t: &Rational, target_prec: i64) -> Result<PAdic> {
    let p = q.p();
    if vp_bigint(t.denom(), p) != Some(0) {
        return Err(Error::NotPAdicInteger(t.to_string(), p));
    }
    let v = q.v_q_minus_1();
    assert!(v >= 1);
    // least K with (K+1)*v >= target
    let k_cut = if target_prec <= v {
        0
    } else {
        (target_prec + v - 1) / v - 1
    };
    let one = PAdic::exact(p, Rational::one());
    let qm1 = q.padic().sub(&one);
    let mut sum = one.clone();
    let mut coeff = Rational::one();
    let mut power = one;
    for j in 1..=k_cut {
        let jr = Rational::from_integer(BigInt::from(j));
        coeff = coeff * (t - (&jr - Rational::one())) / jr;
        power = power.mul(&qm1);
        if coeff.is_zero() {
            break;
        }
        sum = sum.add(&power.scalar_mul(&coeff));
    }
    if sum.prec() < target_prec {
        return Err(Error::PrecisionLoss(format!(
            "q known to O(p^{}) cannot certify q^t to O(p^{})",
            q.padic().prec(),
            target_prec
        )));
    }
    Ok(sum.with_prec_at_most(target_prec))
}

/// Evaluate a rational-coefficient field element at a p-adic point by
/// Horner's rule, then divide. A denominator indistinguishable from zero
/// at working precision reports `PrecisionLoss`.
pub fn eval_field_elem(f: &FieldElem, at: &PAdic) -> Result<PAdic> {
    let p = at.p();
    let horner = |poly: &crate::exact::Poly| -> Result<PAdic> {
        let mut acc = PAdic::exact(p, Rational::zero());
        for c in poly.coeffs().iter().rev() {
            let r = c.as_rational().ok_or_else(|| {
                Error::InvalidInput("field element has non-rational coefficients".into())
            })?;
            acc = acc.mul(at).add(&PAdic::exact(p, r));
        }
        Ok(acc)
    };
    let num = horner(f.num())?;
    let den = horner(f.den())?;
    if den.is_zero_rep() {
        return Err(Error::PrecisionLoss(
            "denominator indistinguishable from zero at working precision".into(),
        ));
    }
    num.div(&den)
}
