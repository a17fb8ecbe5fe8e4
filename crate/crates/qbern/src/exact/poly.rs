//! Dense univariate polynomials in q with cyclotomic-rational coefficients.
//!
//! Coefficients are stored in ascending degree order; the vector is empty
//! for the zero polynomial and its last entry is nonzero otherwise.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

use super::cyclotomic::CycElem;
use super::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<CycElem>,
}

impl Poly {
    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly {
            coeffs: vec![CycElem::one()],
        }
    }

    /// The indeterminate q.
    pub fn q() -> Self {
        Poly {
            coeffs: vec![CycElem::zero(), CycElem::one()],
        }
    }

    pub fn constant(c: CycElem) -> Self {
        let mut p = Poly { coeffs: vec![c] };
        p.normalize();
        p
    }

    /// c * q^deg.
    pub fn monomial(c: CycElem, deg: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![CycElem::zero(); deg + 1];
        coeffs[deg] = c;
        Poly { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<CycElem>) -> Self {
        let mut p = Poly { coeffs };
        p.normalize();
        p
    }

    pub fn from_int_coeffs(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| CycElem::from_int(c)).collect())
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn coeff(&self, i: usize) -> CycElem {
        self.coeffs.get(i).cloned().unwrap_or_else(CycElem::zero)
    }

    pub fn coeffs(&self) -> &[CycElem] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&CycElem> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i);
            let b = other.coeffs.get(i);
            out.push(match (a, b) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Poly::from_coeffs(out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        // Iterate the sparser operand on the outside and skip its zeros.
        let (outer, inner) = if self.nonzero_count() <= other.nonzero_count() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = vec![CycElem::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in outer.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in inner.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Poly::from_coeffs(out)
    }

    fn nonzero_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn scalar_mul(&self, c: &CycElem) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly::from_coeffs(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Substitute q -> q^t for t >= 1 (exponent scaling).
    pub fn subst_pow(&self, t: u64) -> Poly {
        assert!(t >= 1);
        if self.is_zero() || t == 1 {
            return self.clone();
        }
        let mut out = vec![CycElem::zero(); (self.coeffs.len() - 1) * t as usize + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                out[i * t as usize] = c.clone();
            }
        }
        Poly { coeffs: out }
    }

    /// Reverse the coefficient order: q^deg * p(1/q).
    pub fn reversed(&self) -> Poly {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Poly::from_coeffs(coeffs)
    }

    /// Multiplicity of the factor q, i.e. the index of the lowest nonzero
    /// coefficient (zero polynomial reports 0).
    pub fn trailing_zeros(&self) -> usize {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .unwrap_or(0)
    }

    /// Drop a factor q^s (the first `s` coefficients must vanish).
    pub fn shift_down(&self, s: usize) -> Poly {
        if s == 0 {
            return self.clone();
        }
        assert!(self.coeffs.iter().take(s).all(|c| c.is_zero()));
        Poly::from_coeffs(self.coeffs[s.min(self.coeffs.len())..].to_vec())
    }

    /// Euclidean division; `other` must be nonzero.
    pub fn divrem(&self, other: &Poly) -> Result<(Poly, Poly)> {
        let db = other.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = other.leading().unwrap().inverse()?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= db {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![CycElem::zero(); rem.len() - db];
        while rem.len() > db {
            let c = rem.last().unwrap().mul(&lead_inv);
            let shift = rem.len() - 1 - db;
            if !c.is_zero() {
                quot[shift] = c.clone();
                for (j, bj) in other.coeffs.iter().enumerate() {
                    rem[shift + j] = rem[shift + j].sub(&c.mul(bj));
                }
            }
            rem.pop();
            while rem.last().is_some_and(|x| x.is_zero()) {
                rem.pop();
            }
        }
        Ok((Poly::from_coeffs(quot), Poly::from_coeffs(rem)))
    }

    /// Exact division; panics if the division leaves a remainder.
    pub fn div_exact(&self, other: &Poly) -> Poly {
        let (q, r) = self.divrem(other).expect("division by zero polynomial");
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic rescaling (leading coefficient 1).
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(lc) => {
                if lc.is_one() {
                    self.clone()
                } else {
                    let inv = lc.inverse().expect("nonzero leading coefficient");
                    self.scalar_mul(&inv)
                }
            }
        }
    }

    /// Monic gcd by the Euclidean remainder sequence, renormalizing each
    /// remainder to monic. Coefficients live in Q(zeta_m) and are stored
    /// reduced, so monic scaling (not pseudo-remainder rescaling) is what
    /// keeps intermediate sizes under control here.
    pub fn gcd(&self, other: &Poly) -> Poly {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        let (mut a, mut b) = if self.degree() >= other.degree() {
            (self.monic(), other.monic())
        } else {
            (other.monic(), self.monic())
        };
        while !b.is_zero() {
            let r = Self::rem_monic(&a, &b);
            a = b;
            b = r.monic();
        }
        a
    }

    /// a mod b for monic b (no coefficient inversions in the loop).
    fn rem_monic(a: &Poly, b: &Poly) -> Poly {
        let db = b.degree().unwrap();
        debug_assert!(b.leading().unwrap().is_one());
        let mut rem = a.coeffs.clone();
        while rem.len() > db {
            let c = rem.last().unwrap().clone();
            let shift = rem.len() - 1 - db;
            if !c.is_zero() {
                for (j, bj) in b.coeffs.iter().enumerate().take(db) {
                    if !bj.is_zero() {
                        rem[shift + j] = rem[shift + j].sub(&c.mul(bj));
                    }
                }
            }
            rem.pop();
            while rem.last().is_some_and(|x| x.is_zero()) {
                rem.pop();
            }
        }
        Poly::from_coeffs(rem)
    }

    /// Evaluate at q = 1 (sum of coefficients).
    pub fn eval_at_one(&self) -> CycElem {
        let mut acc = CycElem::zero();
        for c in &self.coeffs {
            acc = acc.add(c);
        }
        acc
    }

    /// Horner evaluation at a rational point; requires rational coefficients.
    pub fn eval_rational(&self, x: &Rational) -> Result<Rational> {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            let r = c
                .as_rational()
                .ok_or_else(|| Error::InvalidInput("non-rational coefficient".into()))?;
            acc = acc * x + r;
        }
        Ok(acc)
    }

    /// True when every coefficient lies in Q.
    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_rational())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            // Rational coefficients get a sign-aware rendering; true
            // cyclotomic coefficients are parenthesized.
            let (neg, body) = match c.as_rational() {
                Some(r) => {
                    let mag = r.abs();
                    let body = if i == 0 {
                        format!("{}", mag)
                    } else if mag.is_one() {
                        String::new()
                    } else if mag.is_integer() {
                        format!("{}", mag)
                    } else {
                        format!("({})", mag)
                    };
                    (r.is_negative(), body)
                }
                None => (false, format!("({})", c)),
            };
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
            write!(f, "{}", body)?;
            if i == 1 {
                write!(f, "q")?;
            } else if i > 1 {
                write!(f, "q^{}", i)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(coeffs: &[i64]) -> Poly {
        Poly::from_int_coeffs(coeffs)
    }

    #[test]
    fn arithmetic_basics() {
        let a = p(&[1, 1]); // 1 + q
        let b = p(&[-1, 1]); // -1 + q
        assert_eq!(a.mul(&b), p(&[-1, 0, 1]));
        assert_eq!(a.add(&b), p(&[0, 2]));
        assert_eq!(a.sub(&a), Poly::zero());
    }

    #[test]
    fn divrem_and_exact_division() {
        let a = p(&[-1, 0, 0, 0, 1]); // q^4 - 1
        let b = p(&[-1, 1]); // q - 1
        let (q, r) = a.divrem(&b).unwrap();
        assert!(r.is_zero());
        assert_eq!(q, p(&[1, 1, 1, 1]));
        assert_eq!(a.div_exact(&b), q);
    }

    #[test]
    fn gcd_of_q_numbers() {
        // gcd(q^6 - 1, q^4 - 1) = q^2 - 1
        let a = p(&[-1, 0, 0, 0, 0, 0, 1]);
        let b = p(&[-1, 0, 0, 0, 1]);
        assert_eq!(a.gcd(&b), p(&[-1, 0, 1]));
    }

    #[test]
    fn gcd_coprime() {
        let a = p(&[1, 1]);
        let b = p(&[2, 1]);
        assert_eq!(a.gcd(&b), Poly::one());
    }

    #[test]
    fn gcd_with_rational_scaling() {
        // gcd is monic regardless of input scaling
        let a = p(&[2, 2]); // 2(q+1)
        let b = p(&[3, 6, 3]); // 3(q+1)^2
        assert_eq!(a.gcd(&b), p(&[1, 1]));
    }

    #[test]
    fn subst_pow_scales_exponents() {
        let a = p(&[1, 1]); // 1 + q
        assert_eq!(a.subst_pow(3), p(&[1, 0, 0, 1]));
    }

    #[test]
    fn display_descending() {
        assert_eq!(p(&[1, 1]).to_string(), "q + 1");
        assert_eq!(p(&[-1, 0, 1]).to_string(), "q^2 - 1");
        assert_eq!(p(&[-1]).to_string(), "-1");
        assert_eq!(p(&[0, 2]).to_string(), "2q");
        assert_eq!(Poly::zero().to_string(), "0");
    }

    #[test]
    fn eval_at_one_sums_coefficients() {
        assert_eq!(p(&[1, 2, 3]).eval_at_one(), CycElem::from_int(6));
    }
}
