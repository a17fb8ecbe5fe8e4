//! Fixed-width integer polynomials: the fast lane for large symbolic-zero
//! checks with rational (m = 1) data.
//!
//! The verification sweeps clear all denominators up front and then only
//! need Z[q] addition and multiplication; i128 coefficients with checked
//! arithmetic cover every shipped grid with a wide margin and run orders
//! of magnitude faster than big-rational coefficients. Overflow is
//! reported, never wrapped.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};

use super::cyclotomic::CycElem;
use super::poly::Poly;
use super::Rational;

fn overflow(ctx: &str) -> Error {
    Error::KernelOverflow(ctx.to_string())
}

/// Dense integer polynomial, ascending degree, trailing zeros stripped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct ZPoly {
    pub coeffs: Vec<i128>,
}

impl ZPoly {
    pub fn zero() -> Self {
        ZPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        ZPoly { coeffs: vec![1] }
    }

    pub fn from_coeffs(mut coeffs: Vec<i128>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        ZPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// The q-number [x]_{q^step}: 1 + q^step + ... + q^{step(x-1)}.
    pub fn qnum(x: u64, step: u64) -> Self {
        if x == 0 {
            return Self::zero();
        }
        let mut coeffs = vec![0i128; ((x - 1) * step) as usize + 1];
        for i in 0..x {
            coeffs[(i * step) as usize] = 1;
        }
        ZPoly { coeffs }
    }

    /// 1 - q^e.
    pub fn one_minus_qpow(e: u64) -> Self {
        if e == 0 {
            return Self::zero();
        }
        let mut coeffs = vec![0i128; e as usize + 1];
        coeffs[0] = 1;
        coeffs[e as usize] = -1;
        ZPoly { coeffs }
    }

    /// q^e - 1.
    pub fn qpow_minus_one(e: u64) -> Self {
        let mut p = Self::one_minus_qpow(e);
        for c in p.coeffs.iter_mut() {
            *c = -*c;
        }
        p
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            out.push(a.checked_add(b).ok_or_else(|| overflow("add"))?);
        }
        Ok(Self::from_coeffs(out))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            out.push(a.checked_sub(b).ok_or_else(|| overflow("sub"))?);
        }
        Ok(Self::from_coeffs(out))
    }

    pub fn scalar_mul(&self, c: i128) -> Result<Self> {
        if c == 0 {
            return Ok(Self::zero());
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| a.checked_mul(c).ok_or_else(|| overflow("scalar")))
            .collect::<Result<Vec<_>>>()?;
        Ok(ZPoly { coeffs })
    }

    /// Schoolbook product; the operand with fewer nonzero terms runs on the
    /// outside, so sparse factors cost what they should.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero());
        }
        let na = self.coeffs.iter().filter(|c| **c != 0).count();
        let nb = other.coeffs.iter().filter(|c| **c != 0).count();
        let (outer, inner) = if na <= nb {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = vec![0i128; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in outer.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in inner.coeffs.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let prod = a.checked_mul(b).ok_or_else(|| overflow("mul"))?;
                out[i + j] = out[i + j]
                    .checked_add(prod)
                    .ok_or_else(|| overflow("mul"))?;
            }
        }
        Ok(Self::from_coeffs(out))
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut result = Self::one();
        for _ in 0..e {
            result = result.mul(self)?;
        }
        Ok(result)
    }

    /// Substitute q -> q^t (exponent scaling), t >= 1.
    pub fn subst_pow(&self, t: u64) -> Self {
        assert!(t >= 1);
        if self.is_zero() || t == 1 {
            return self.clone();
        }
        let mut out = vec![0i128; (self.coeffs.len() - 1) * t as usize + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                out[i * t as usize] = c;
            }
        }
        ZPoly { coeffs: out }
    }

    /// Multiply by q^s.
    pub fn shift_up(&self, s: u64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![0i128; s as usize];
        coeffs.extend_from_slice(&self.coeffs);
        ZPoly { coeffs }
    }

    pub fn to_poly(&self) -> Poly {
        Poly::from_coeffs(
            self.coeffs
                .iter()
                .map(|&c| {
                    CycElem::from_rational(Rational::from_integer(BigInt::from(c)))
                })
                .collect(),
        )
    }
}

impl ZPoly {
    /// Quotient and remainder by a monic divisor, all in checked i128.
    pub fn divrem_monic(&self, div: &ZPoly) -> Result<(ZPoly, ZPoly)> {
        let dd = div.degree().expect("nonzero divisor");
        assert_eq!(div.coeffs[dd], 1, "divisor must be monic");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((ZPoly::zero(), self.clone()));
        }
        let mut quot = vec![0i128; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i];
            if c == 0 {
                continue;
            }
            quot[i - dd] = c;
            for (j, &bj) in div.coeffs.iter().enumerate() {
                let idx = i - dd + j;
                let prod = c.checked_mul(bj).ok_or_else(|| overflow("divrem"))?;
                rem[idx] = rem[idx]
                    .checked_sub(prod)
                    .ok_or_else(|| overflow("divrem"))?;
            }
        }
        rem.truncate(dd);
        Ok((ZPoly::from_coeffs(quot), ZPoly::from_coeffs(rem)))
    }
}

/// C(n, j) as i128 (exact; fails only far beyond the shipped grids).
pub(crate) fn binom_i128(n: u64, j: u64) -> Result<i128> {
    if j > n {
        return Ok(0);
    }
    let j = j.min(n - j);
    let mut acc: i128 = 1;
    for t in 0..j {
        acc = acc
            .checked_mul((n - t) as i128)
            .ok_or_else(|| overflow("binomial"))?;
        acc /= (t + 1) as i128;
    }
    Ok(acc)
}

/// The e-th cyclotomic polynomial with i128 coefficients.
pub(crate) fn cyclotomic_zpoly(e: u32) -> Result<ZPoly> {
    let coeffs = super::cyclotomic::cyclotomic_polynomial(e)
        .iter()
        .map(big_to_i128)
        .collect::<Result<Vec<_>>>()?;
    Ok(ZPoly::from_coeffs(coeffs))
}

/// Reduce `num / prod_M (q^M - 1)` to a canonical field element by peeling
/// common cyclotomic factors. The denominator factor list is given by its
/// exponents M (with multiplicity).
pub(crate) fn reduce_over_qm1_factors(num: &ZPoly, den_exponents: &[u64]) -> Result<FieldElem> {
    use std::collections::BTreeMap;
    if num.is_zero() {
        return Ok(FieldElem::zero());
    }
    // multiset of cyclotomic factors Phi_e of the denominator
    let mut counts: BTreeMap<u32, u32> = BTreeMap::new();
    for &m in den_exponents {
        let m = u32::try_from(m).map_err(|_| overflow("factor exponent"))?;
        for e in 1..=m {
            if m % e == 0 {
                *counts.entry(e).or_insert(0) += 1;
            }
        }
    }
    let mut reduced = num.clone();
    for (&e, mult) in counts.iter_mut() {
        let phi = cyclotomic_zpoly(e)?;
        while *mult > 0 {
            let (q, r) = reduced.divrem_monic(&phi)?;
            if r.is_zero() {
                reduced = q;
                *mult -= 1;
            } else {
                break;
            }
        }
    }
    let mut den = ZPoly::one();
    for (&e, &mult) in counts.iter() {
        if mult > 0 {
            let phi = cyclotomic_zpoly(e)?;
            for _ in 0..mult {
                den = den.mul(&phi)?;
            }
        }
    }
    Ok(FieldElem::from_reduced_parts(
        reduced.to_poly(),
        den.to_poly(),
    ))
}

use super::fieldelem::FieldElem;

/// Clear denominators of a rational-coefficient polynomial: returns
/// (integer poly, scalar d) with `p = zpoly / d`. Fails if a coefficient
/// is not rational or exceeds i128.
pub(crate) fn clear_denominators(p: &Poly) -> Result<(ZPoly, BigInt)> {
    let mut lcm = BigInt::from(1);
    let mut rats = Vec::with_capacity(p.coeffs().len());
    for c in p.coeffs() {
        let r = c
            .as_rational()
            .ok_or_else(|| Error::InvalidInput("non-rational coefficient in kernel".into()))?;
        lcm = num_integer::lcm(lcm, r.denom().clone());
        rats.push(r);
    }
    let mut coeffs = Vec::with_capacity(rats.len());
    for r in &rats {
        let scaled = (r * Rational::from_integer(lcm.clone())).to_integer();
        let c = scaled
            .to_i128()
            .ok_or_else(|| overflow("coefficient exceeds i128"))?;
        coeffs.push(c);
    }
    Ok((ZPoly::from_coeffs(coeffs), lcm))
}

/// Convert a BigInt scalar into i128 or report kernel overflow.
pub(crate) fn big_to_i128(b: &BigInt) -> Result<i128> {
    b.to_i128().ok_or_else(|| overflow("scalar exceeds i128"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_matches_poly_mul() {
        let a = ZPoly::from_coeffs(vec![1, 2, 3]);
        let b = ZPoly::from_coeffs(vec![-1, 1]);
        let prod = a.mul(&b).unwrap();
        assert_eq!(prod.coeffs, vec![-1, -1, -1, 3]);
    }

    #[test]
    fn qnum_structure() {
        assert_eq!(ZPoly::qnum(3, 2).coeffs, vec![1, 0, 1, 0, 1]);
        assert!(ZPoly::qnum(0, 1).is_zero());
    }

    #[test]
    fn overflow_is_reported() {
        let big = ZPoly::from_coeffs(vec![i128::MAX]);
        assert!(matches!(
            big.mul(&ZPoly::from_coeffs(vec![2])),
            Err(Error::KernelOverflow(_))
        ));
    }

    #[test]
    fn clear_denominators_roundtrip() {
        use crate::exact::rat;
        let p = Poly::from_coeffs(vec![
            CycElem::from_rational(rat(1, 2)),
            CycElem::from_rational(rat(-1, 3)),
        ]);
        let (z, d) = clear_denominators(&p).unwrap();
        assert_eq!(d, BigInt::from(6));
        assert_eq!(z.coeffs, vec![3, -2]);
    }
}
