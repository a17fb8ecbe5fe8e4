//! Elements of the cyclotomic field Q(zeta_m), represented on the power
//! basis 1, z, ..., z^{phi(m)-1} modulo the m-th cyclotomic polynomial.
//!
//! Order m = 1 embeds the rationals. Binary operations on elements of
//! different orders lift both to the lcm order first, so mixed-order
//! arithmetic is always well defined.

use std::collections::HashMap;
use std::fmt;
use std::sync::{LazyLock, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

use super::Rational;

/// Euler's totient.
pub fn euler_phi(mut m: u32) -> u32 {
    let mut result = m;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

// ---- Integer polynomial helpers for cyclotomic polynomials ----

fn zp_trim(v: &mut Vec<BigInt>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

/// Exact division of integer polynomials; `b` must be monic and divide `a`.
fn zp_div_exact(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut rem: Vec<BigInt> = a.to_vec();
    let db = b.len() - 1;
    assert!(b[db].is_one(), "divisor must be monic");
    if rem.len() < b.len() {
        zp_trim(&mut rem);
        assert!(rem.is_empty(), "inexact polynomial division");
        return Vec::new();
    }
    let mut quot = vec![BigInt::zero(); rem.len() - db];
    for i in (db..rem.len()).rev() {
        let c = rem[i].clone();
        if c.is_zero() {
            continue;
        }
        quot[i - db] = c.clone();
        for (j, bj) in b.iter().enumerate() {
            let idx = i - db + j;
            rem[idx] = &rem[idx] - &c * bj;
        }
    }
    zp_trim(&mut rem);
    assert!(rem.is_empty(), "inexact polynomial division");
    quot
}

/// The m-th cyclotomic polynomial as integer coefficients, ascending degree.
///
/// Phi_m = (x^m - 1) / prod_{d | m, d < m} Phi_d, computed recursively and
/// cached for the run.
pub fn cyclotomic_polynomial(m: u32) -> Vec<BigInt> {
    static CACHE: LazyLock<Mutex<HashMap<u32, Vec<BigInt>>>> =
        LazyLock::new(|| Mutex::new(HashMap::new()));
    if let Some(p) = CACHE.lock().unwrap().get(&m) {
        return p.clone();
    }
    let poly = if m == 1 {
        vec![BigInt::from(-1), BigInt::from(1)]
    } else {
        let mut num = vec![BigInt::zero(); (m + 1) as usize];
        num[0] = BigInt::from(-1);
        num[m as usize] = BigInt::from(1);
        let mut quot = num;
        for d in 1..m {
            if m.is_multiple_of(d) {
                let phi_d = cyclotomic_polynomial(d);
                quot = zp_div_exact(&quot, &phi_d);
            }
        }
        quot
    };
    CACHE.lock().unwrap().insert(m, poly.clone());
    poly
}

// ---- Rational polynomial helpers (private; small degrees only) ----

fn rp_trim(v: &mut Vec<Rational>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn rp_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if bj.is_zero() {
                continue;
            }
            out[i + j] += ai * bj;
        }
    }
    rp_trim(&mut out);
    out
}

/// Remainder of `a` modulo the monic polynomial `b`.
fn rp_rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut rem = a.to_vec();
    rp_trim(&mut rem);
    let db = b.len() - 1;
    while rem.len() > db {
        let c = rem.last().unwrap().clone();
        let shift = rem.len() - 1 - db;
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                rem[shift + j] -= &c * bj;
            }
        }
        rem.pop();
        rp_trim(&mut rem);
    }
    rem
}

/// Extended Euclid in Q[x]: returns (g, u) with u*a = g (mod b), g the
/// monic gcd of a and b. Used for inversion modulo Phi_m.
fn rp_half_ext_gcd(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    rp_trim(&mut r0);
    rp_trim(&mut r1);
    let mut u0 = vec![Rational::one()];
    let mut u1: Vec<Rational> = Vec::new();
    while !r1.is_empty() {
        // quotient and remainder of r0 by r1
        let mut rem = r0.clone();
        let lead = r1.last().unwrap().clone();
        let db = r1.len() - 1;
        let mut quot = vec![Rational::zero(); rem.len().saturating_sub(db)];
        while rem.len() > db {
            let c = rem.last().unwrap() / &lead;
            let shift = rem.len() - 1 - db;
            quot[shift] = c.clone();
            if !c.is_zero() {
                for (j, bj) in r1.iter().enumerate() {
                    rem[shift + j] -= &c * bj;
                }
            }
            rem.pop();
            rp_trim(&mut rem);
        }
        rp_trim(&mut quot);
        let u2_sub = rp_mul(&quot, &u1);
        let mut u2 = u0.clone();
        if u2.len() < u2_sub.len() {
            u2.resize(u2_sub.len(), Rational::zero());
        }
        for (i, s) in u2_sub.iter().enumerate() {
            u2[i] -= s;
        }
        rp_trim(&mut u2);
        r0 = std::mem::replace(&mut r1, rem);
        u0 = std::mem::replace(&mut u1, u2);
    }
    // normalize gcd monic
    let lead = r0.last().cloned().unwrap_or_else(Rational::one);
    for c in r0.iter_mut() {
        *c /= &lead;
    }
    for c in u0.iter_mut() {
        *c /= &lead;
    }
    (r0, u0)
}

/// Phi_m with rational coefficients, cached (this sits on the hot path of
/// every cyclotomic multiplication).
fn rational_modulus(order: u32) -> std::sync::Arc<Vec<Rational>> {
    static CACHE: LazyLock<Mutex<HashMap<u32, std::sync::Arc<Vec<Rational>>>>> =
        LazyLock::new(|| Mutex::new(HashMap::new()));
    let mut cache = CACHE.lock().unwrap();
    cache
        .entry(order)
        .or_insert_with(|| {
            std::sync::Arc::new(
                cyclotomic_polynomial(order)
                    .into_iter()
                    .map(Rational::from_integer)
                    .collect(),
            )
        })
        .clone()
}

/// An element of Q(zeta_m) on the power basis modulo Phi_m.
#[derive(Clone, Debug)]
pub struct CycElem {
    order: u32,
    /// Coordinates w.r.t. 1, z, ..., z^{phi(m)-1}; length exactly phi(m).
    coords: Vec<Rational>,
}

impl CycElem {
    /// The zero element (of order 1).
    pub fn zero() -> Self {
        CycElem::from_rational(Rational::zero())
    }

    /// The unit element (of order 1).
    pub fn one() -> Self {
        CycElem::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        CycElem {
            order: 1,
            coords: vec![r],
        }
    }

    pub fn from_int(n: i64) -> Self {
        CycElem::from_rational(super::rat_int(n))
    }

    /// The primitive m-th root of unity zeta_m.
    pub fn zeta(order: u32) -> Self {
        Self::zeta_pow(order, 1)
    }

    /// zeta_m^e, reduced modulo Phi_m.
    pub fn zeta_pow(order: u32, e: i64) -> Self {
        assert!(order >= 1);
        let e = e.rem_euclid(order as i64) as usize;
        let mut raw = vec![Rational::zero(); e + 1];
        raw[e] = Rational::one();
        Self::reduce_raw(order, raw)
    }

    /// Reduce a raw coordinate polynomial (arbitrary length) modulo Phi_m.
    fn reduce_raw(order: u32, mut raw: Vec<Rational>) -> Self {
        let phi = euler_phi(order) as usize;
        if raw.len() > phi {
            raw = rp_rem(&raw, &rational_modulus(order));
        }
        raw.resize(phi, Rational::zero());
        CycElem {
            order,
            coords: raw,
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(|c| c.is_zero())
    }

    /// True when the element lies in Q (all higher power-basis coordinates
    /// vanish).
    pub fn is_rational(&self) -> bool {
        self.coords[1..].iter().all(|c| c.is_zero())
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if self.is_rational() {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    /// Rewrite the element in Q(zeta_target); requires order | target.
    pub fn lift_to(&self, target: u32) -> CycElem {
        if target == self.order {
            return self.clone();
        }
        assert!(
            target.is_multiple_of(self.order),
            "cannot lift zeta_{} into Q(zeta_{})",
            self.order,
            target
        );
        let step = (target / self.order) as usize;
        let mut raw = vec![Rational::zero(); (self.coords.len() - 1) * step + 1];
        for (i, c) in self.coords.iter().enumerate() {
            raw[i * step] = c.clone();
        }
        Self::reduce_raw(target, raw)
    }

    fn common_order(a: &CycElem, b: &CycElem) -> u32 {
        num_integer::lcm(a.order, b.order)
    }

    pub fn add(&self, other: &CycElem) -> CycElem {
        let m = Self::common_order(self, other);
        let a = self.lift_to(m);
        let b = other.lift_to(m);
        let coords = a
            .coords
            .iter()
            .zip(b.coords.iter())
            .map(|(x, y)| x + y)
            .collect();
        CycElem { order: m, coords }
    }

    pub fn sub(&self, other: &CycElem) -> CycElem {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> CycElem {
        CycElem {
            order: self.order,
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &CycElem) -> CycElem {
        let m = Self::common_order(self, other);
        let a = self.lift_to(m);
        let b = other.lift_to(m);
        let raw = rp_mul(&a.coords, &b.coords);
        Self::reduce_raw(m, raw)
    }

    pub fn inverse(&self) -> Result<CycElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(CycElem {
                order: self.order,
                coords: {
                    let mut v = vec![Rational::zero(); self.coords.len()];
                    v[0] = Rational::one() / r;
                    v
                },
            });
        }
        let modulus = rational_modulus(self.order);
        let (g, u) = rp_half_ext_gcd(&self.coords, &modulus);
        // Phi_m is irreducible over Q, so the gcd with a nonzero residue is 1.
        assert!(g.len() == 1 && g[0].is_one(), "cyclotomic inverse failed");
        Ok(Self::reduce_raw(self.order, u))
    }

    pub fn div(&self, other: &CycElem) -> Result<CycElem> {
        Ok(self.mul(&other.inverse()?))
    }

    pub fn pow(&self, e: u32) -> CycElem {
        let mut result = CycElem::one();
        for _ in 0..e {
            result = result.mul(self);
        }
        result
    }
}

impl PartialEq for CycElem {
    fn eq(&self, other: &Self) -> bool {
        let m = Self::common_order(self, other);
        self.lift_to(m).coords == other.lift_to(m).coords
    }
}

impl Eq for CycElem {}

impl fmt::Display for CycElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coords.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if i == 0 {
                write!(f, "{}", mag)?;
            } else {
                if !mag.is_one() {
                    write!(f, "{}*", mag)?;
                }
                if i == 1 {
                    write!(f, "z")?;
                } else {
                    write!(f, "z^{}", i)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int};

    #[test]
    fn phi_values() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(2), 1);
        assert_eq!(euler_phi(4), 2);
        assert_eq!(euler_phi(5), 4);
        assert_eq!(euler_phi(12), 4);
    }

    #[test]
    fn cyclotomic_polynomials() {
        // Phi_4 = x^2 + 1
        let p4 = cyclotomic_polynomial(4);
        assert_eq!(p4, vec![BigInt::from(1), BigInt::from(0), BigInt::from(1)]);
        // Phi_6 = x^2 - x + 1
        let p6 = cyclotomic_polynomial(6);
        assert_eq!(
            p6,
            vec![BigInt::from(1), BigInt::from(-1), BigInt::from(1)]
        );
        // Phi_12 = x^4 - x^2 + 1
        let p12 = cyclotomic_polynomial(12);
        assert_eq!(p12.len(), 5);
        assert_eq!(p12[4], BigInt::from(1));
        assert_eq!(p12[2], BigInt::from(-1));
    }

    #[test]
    fn zeta4_squares_to_minus_one() {
        let i = CycElem::zeta(4);
        let sq = i.mul(&i);
        assert_eq!(sq, CycElem::from_int(-1));
    }

    #[test]
    fn zeta2_is_minus_one() {
        assert_eq!(CycElem::zeta(2), CycElem::from_int(-1));
        assert!(CycElem::zeta(2).is_rational());
    }

    #[test]
    fn mixed_order_arithmetic() {
        let i = CycElem::zeta(4);
        let three = CycElem::from_int(3);
        let s = i.add(&three);
        assert_eq!(s.order(), 4);
        assert_eq!(s.sub(&i), three);
    }

    #[test]
    fn inverse_of_zeta_power() {
        let z = CycElem::zeta(5);
        let inv = z.inverse().unwrap();
        assert!(z.mul(&inv).is_one());
        // zeta_5^{-1} = zeta_5^4
        assert_eq!(inv, CycElem::zeta_pow(5, 4));
    }

    #[test]
    fn inverse_of_mixed_element() {
        // (1 + zeta_4) * (1 - zeta_4) = 2
        let a = CycElem::one().add(&CycElem::zeta(4));
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_one());
        assert_eq!(
            inv,
            CycElem::one()
                .sub(&CycElem::zeta(4))
                .mul(&CycElem::from_rational(rat(1, 2)))
        );
    }

    #[test]
    fn lift_embeds_consistently() {
        let half = CycElem::from_rational(rat(1, 2));
        let lifted = half.lift_to(12);
        assert_eq!(lifted, half);
        assert_eq!(lifted.order(), 12);
        assert_eq!(lifted.as_rational(), Some(rat(1, 2)));
        let _ = rat_int(0);
    }

    #[test]
    fn zeta12_relations() {
        // zeta_12^2 = zeta_6, checked through lifting.
        let z12 = CycElem::zeta(12);
        let z6 = CycElem::zeta(6);
        assert_eq!(z12.mul(&z12), z6);
    }
}
