//! Dirichlet characters mod d with exact cyclotomic values, their
//! conductors, and the generalized weighted q-Bernoulli numbers attached
//! to a character.
//!
//! Characters are enumerated through the CRT decomposition of (Z/dZ)^*
//! into cyclic components; the canonical index of a character is the
//! mixed-radix word of its exponents on the canonical generators (first
//! component most significant), so `--chi d:j` is reproducible.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{CycElem, FieldElem, Rational};
use crate::padic::PAdic;
use crate::qbernoulli::weighted_beta;

/// A cyclic component of (Z/dZ)^*: a generator residue and its order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitGroupComponent {
    pub generator: u64,
    pub order: u32,
}

/// Canonical generators of (Z/dZ)^*, CRT-lifted to residues mod d.
/// Components are ordered by the prime they come from (2 first, with the
/// order-2 part before the cyclic part for 8 | d).
pub fn unit_group_components(d: u64) -> Vec<UnitGroupComponent> {
    assert!(d >= 1);
    let mut comps: Vec<(u64, u64, u32)> = Vec::new(); // (prime power, generator mod pe, order)
    let mut rest = d;
    let mut p = 2u64;
    while p * p <= rest || (rest > 1 && p <= rest) {
        if rest.is_multiple_of(p) {
            let mut pe = 1u64;
            while rest.is_multiple_of(p) {
                rest /= p;
                pe *= p;
            }
            if p == 2 {
                if pe == 4 {
                    comps.push((pe, 3, 2));
                } else if pe >= 8 {
                    comps.push((pe, pe - 1, 2)); // -1
                    comps.push((pe, 5, (pe / 4) as u32)); // 5 generates the rest
                }
                // pe = 2 contributes nothing
            } else {
                let phi = (pe / p * (p - 1)) as u32;
                let g = primitive_root_mod_pe(p, pe);
                comps.push((pe, g, phi));
            }
        }
        p += 1;
        if rest == 1 {
            break;
        }
    }
    // CRT lift: x = g mod pe, x = 1 mod d/pe
    comps
        .into_iter()
        .map(|(pe, g, order)| {
            let other = d / pe;
            let generator = if other == 1 {
                g % d
            } else {
                crt_pair(g, pe, 1, other)
            };
            UnitGroupComponent { generator, order }
        })
        .collect()
}

fn pow_mod(base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u128;
    let mut b = (base % m) as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m as u128;
        }
        b = b * b % m as u128;
        e >>= 1;
    }
    acc as u64
}

fn primitive_root_mod_pe(p: u64, pe: u64) -> u64 {
    let phi_p = p - 1;
    let mut factors = Vec::new();
    let mut m = phi_p;
    let mut f = 2;
    while f * f <= m {
        if m.is_multiple_of(f) {
            factors.push(f);
            while m.is_multiple_of(f) {
                m /= f;
            }
        }
        f += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    let g = (2..p)
        .find(|&g| factors.iter().all(|&q| pow_mod(g, phi_p / q, p) != 1))
        .expect("primitive root exists mod p");
    if pe == p {
        return g;
    }
    // lift to p^e: g works unless g^{p-1} = 1 mod p^2, in which case g + p does
    if pow_mod(g, p - 1, p * p) != 1 {
        g
    } else {
        g + p
    }
}

fn crt_pair(r1: u64, m1: u64, r2: u64, m2: u64) -> u64 {
    // x = r1 mod m1, x = r2 mod m2 with gcd(m1, m2) = 1
    let m1_big = BigInt::from(m1);
    let m2_big = BigInt::from(m2);
    let e = m1_big.extended_gcd(&m2_big);
    debug_assert!(e.gcd.is_one());
    // x = r1 * m2 * (m2^-1 mod m1) + r2 * m1 * (m1^-1 mod m2)
    let inv_m2_mod_m1 = e.y.mod_floor(&m1_big);
    let inv_m1_mod_m2 = e.x.mod_floor(&m2_big);
    let x = (BigInt::from(r1) * &m2_big * inv_m2_mod_m1
        + BigInt::from(r2) * &m1_big * inv_m1_mod_m2)
        .mod_floor(&(m1_big * m2_big));
    use num_traits::ToPrimitive;
    x.to_u64().expect("CRT residue fits u64")
}

/// Dirichlet character mod d with values as powers of zeta_m, m the exact
/// order of the character.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirichletChar {
    modulus: u64,
    order: u32,
    conductor: u64,
    /// exps[a] = Some(e) with chi(a) = zeta_order^e for units, None off
    /// units.
    exps: Vec<Option<u32>>,
    /// Exponents on the canonical generators (the character's canonical
    /// coordinates).
    gen_exps: Vec<u32>,
}

impl DirichletChar {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn gen_exps(&self) -> &[u32] {
        &self.gen_exps
    }

    /// The full value table as zeta exponents (None off units).
    pub fn exponent_table(&self) -> &[Option<u32>] {
        &self.exps
    }

    /// Build from explicit exponents e_i on the canonical generators
    /// (e_i taken mod the component order).
    pub fn from_gen_exps(d: u64, exps_in: &[u32]) -> Result<DirichletChar> {
        let comps = unit_group_components(d);
        if exps_in.len() != comps.len() {
            return Err(Error::InvalidInput(format!(
                "modulus {} has {} canonical generators, got {} exponents",
                d,
                comps.len(),
                exps_in.len()
            )));
        }
        let gen_exps: Vec<u32> = exps_in
            .iter()
            .zip(comps.iter())
            .map(|(&e, c)| e % c.order)
            .collect();
        // group exponent
        let m0 = comps.iter().fold(1u64, |acc, c| acc.lcm(&(c.order as u64))) as u32;
        // value exponents mod m0 for every unit, by walking all generator
        // tuples
        let mut exps: Vec<Option<u32>> = vec![None; d as usize];
        let mut stack: Vec<(usize, u64, u64)> = vec![(0, 1 % d.max(1), 0)];
        while let Some((i, residue, exp)) = stack.pop() {
            if i == comps.len() {
                exps[residue as usize] = Some((exp % m0 as u64) as u32);
                continue;
            }
            let c = &comps[i];
            let mut r = residue;
            for x in 0..c.order as u64 {
                let contrib = (m0 as u64 / c.order as u64) * (gen_exps[i] as u64) * x;
                stack.push((i + 1, r, exp + contrib));
                if x + 1 < c.order as u64 {
                    r = (r as u128 * c.generator as u128 % d as u128) as u64;
                }
            }
        }
        if d == 1 {
            exps[0] = Some(0);
        }
        // exact order m = m0 / gcd(m0, all exponents)
        let mut g = m0;
        for e in exps.iter().flatten() {
            g = g.gcd(e);
        }
        let order = if g == 0 { 1 } else { m0 / g };
        let scale = if order == 0 { 1 } else { m0 / order };
        let exps: Vec<Option<u32>> = exps
            .into_iter()
            .map(|o| o.map(|e| (e / scale) % order.max(1)))
            .collect();
        let mut chi = DirichletChar {
            modulus: d,
            order: order.max(1),
            conductor: d,
            exps,
            gen_exps,
        };
        chi.conductor = chi.compute_conductor();
        Ok(chi)
    }

    fn compute_conductor(&self) -> u64 {
        let d = self.modulus;
        'outer: for f in (1..=d).filter(|f| d.is_multiple_of(*f)) {
            // chi factors through (Z/fZ)^* iff chi(a) = 1 whenever
            // a = 1 mod f and gcd(a, d) = 1
            for a in (0..d).filter(|&a| a % f == 1 % f) {
                match self.exps[a as usize] {
                    Some(e) if e != 0 => continue 'outer,
                    _ => {}
                }
            }
            return f;
        }
        d
    }

    /// chi(x): zero off units, otherwise zeta_m^{e(x mod d)}.
    pub fn eval(&self, x: i64) -> CycElem {
        let r = crate::measure::residue_reduce(x, self.modulus);
        match self.exps[r as usize] {
            None => CycElem::zero(),
            Some(e) => CycElem::zeta_pow(self.order, e as i64),
        }
    }

    /// chi at the formal ratio y/beta, i.e. chi(y) * chi(beta)^{-1}
    /// through the mod-d inverse of beta.
    pub fn eval_ratio(&self, y: i64, beta: i64) -> Result<CycElem> {
        let d = self.modulus;
        let b = crate::measure::residue_reduce(beta, d);
        let e = BigInt::from(b).extended_gcd(&BigInt::from(d));
        if !e.gcd.is_one() && d != 1 {
            return Err(Error::NotInvertible(beta, d));
        }
        let inv = if d == 1 {
            0
        } else {
            use num_traits::ToPrimitive;
            e.x.mod_floor(&BigInt::from(d)).to_u64().unwrap()
        };
        Ok(self.eval(y).mul(&self.eval(inv as i64)))
    }

    /// chi(x) as an exact rational, for the numeric backend; characters of
    /// order > 2 have irrational values and must stay symbolic.
    pub fn eval_rational(&self, x: i64) -> Result<Rational> {
        self.eval(x).as_rational().ok_or_else(|| {
            Error::InvalidInput(
                "character value is not rational; use the symbolic backend".into(),
            )
        })
    }

    pub fn eval_ratio_rational(&self, y: i64, beta: i64) -> Result<Rational> {
        self.eval_ratio(y, beta)?.as_rational().ok_or_else(|| {
            Error::InvalidInput(
                "character value is not rational; use the symbolic backend".into(),
            )
        })
    }
}

/// All phi(d) characters mod d in canonical order: lexicographic in the
/// exponent tuple on the canonical generators, first component most
/// significant. Index 0 is the trivial character.
pub fn enumerate_characters(d: u64) -> Vec<DirichletChar> {
    let comps = unit_group_components(d);
    let total: u64 = comps.iter().map(|c| c.order as u64).product();
    (0..total)
        .map(|j| {
            let mut exps = Vec::with_capacity(comps.len());
            let mut rem = j;
            for i in (0..comps.len()).rev() {
                exps.push((rem % comps[i].order as u64) as u32);
                rem /= comps[i].order as u64;
            }
            exps.reverse();
            DirichletChar::from_gen_exps(d, &exps).expect("valid exponents")
        })
        .collect()
}

/// Character by canonical index.
pub fn character(d: u64, index: u64) -> Result<DirichletChar> {
    let all = enumerate_characters(d);
    all.into_iter().nth(index as usize).ok_or_else(|| {
        Error::InvalidInput(format!("modulus {} has fewer than {} characters", d, index + 1))
    })
}

/// The generalized weighted q-Bernoulli number attached to chi,
///
/// ```text
/// ([d]^n_{q^alpha}/[d]_q) sum_{a<d} q^a chi(a) beta_{n,q^d}(a/d)
/// ```
///
/// as an exact element of Q(zeta_m)(q), d = chi's modulus. The chi-sum
/// is accumulated over the structural denominator shared by every term
/// and canonicalized once at the end.
pub fn generalized_beta(chi: &DirichletChar, alpha: u32, n: u32) -> FieldElem {
    let (num, factors) = generalized_beta_parts(chi, alpha, n);
    FieldElem::reduce_over_cyclotomic_factors(num, &factors)
}

/// (numerator, denominator factor exponents) of the chi-number over
/// (q^alpha-1)^n (q^d-1) U_n(q^d), with an extra (q-1) folded into the
/// numerator to absorb 1/[d]_q.
pub(crate) fn generalized_beta_parts(
    chi: &DirichletChar,
    alpha: u32,
    n: u32,
) -> (crate::Poly, Vec<u64>) {
    use crate::Poly;
    let d = chi.modulus();
    if d == 1 {
        // the sum collapses to the bare weighted number
        return crate::qbernoulli::weighted_poly_ratio_parts(alpha, n, 1, 0);
    }
    // sum_a chi(a) q^a * (numerator of beta_{n,q^d}(a/d) over
    // Ghat^n U_n(q^d)); the Eq-15 bracket turns Ghat^n into ghat^n [d]_q.
    let mut sum = Poly::zero();
    for a in 0..d {
        let w = chi.eval(a as i64);
        if w.is_zero() {
            continue;
        }
        let (val_num, _) = crate::qbernoulli::weighted_poly_ratio_parts(alpha, n, d, a);
        let mut term = val_num.scalar_mul(&w);
        if a > 0 {
            term = Poly::monomial(crate::exact::CycElem::one(), a as usize).mul(&term);
        }
        sum = sum.add(&term);
    }
    // multiply by (q - 1) to absorb [d]_q = (q^d - 1)/(q - 1)
    let num = sum.mul(&Poly::from_int_coeffs(&[-1, 1]));
    let mut factors = vec![alpha as u64; n as usize];
    factors.push(d);
    factors.extend(
        crate::qbernoulli::weighted_den_factor_exponents(alpha, n)
            .into_iter()
            .map(|m| m * d),
    );
    (num, factors)
}


/// The same sum evaluated at a numeric base point b (a p-adic number with
/// v_p(b - 1) >= 1). Character values must be rational (order <= 2).
pub fn generalized_beta_padic(
    chi: &DirichletChar,
    alpha: u32,
    n: u32,
    base: &PAdic,
) -> Result<PAdic> {
    let p = base.p();
    let d = chi.modulus();
    let one = PAdic::exact(p, Rational::one());
    let qnum_at = |y: u64, b: &PAdic| -> Result<PAdic> {
        // [y]_b = 1 + b + ... + b^{y-1}, summed directly
        let mut acc = PAdic::exact(p, Rational::zero());
        let mut pw = one.clone();
        for _ in 0..y {
            acc = acc.add(&pw);
            pw = pw.mul(b);
        }
        Ok(acc)
    };
    let b_alpha = base.pow_i64(alpha as i64)?;
    let b_d = base.pow_i64(d as i64)?;
    // ([d]_{b^alpha})^n / [d]_b
    let bracket = qnum_at(d, &b_alpha)?
        .pow_i64(n as i64)?
        .div(&qnum_at(d, base)?)?;
    let mut sum = PAdic::exact(p, Rational::zero());
    for a in 0..d {
        let chi_a = chi.eval_rational(a as i64)?;
        if chi_a.is_zero() {
            continue;
        }
        // beta_{n, b^d}(a/d) by the exact rewriting
        let inner_bracket = qnum_at(a, &b_alpha)?.div(&qnum_at(d, &b_alpha)?)?;
        let mut val = PAdic::exact(p, Rational::zero());
        for l in 0..=n {
            let c = Rational::from_integer(crate::qbernoulli::binom_big(n as u64, l as u64));
            let power = if n == l {
                one.clone()
            } else if a == 0 {
                continue;
            } else {
                inner_bracket.pow_i64((n - l) as i64)?
            };
            let shift = b_alpha.pow_i64(l as i64 * a as i64)?;
            let beta_l =
                crate::padic::eval_field_elem(&weighted_beta(alpha, l), &b_d)?;
            val = val.add(&power.mul(&shift).mul(&beta_l).scalar_mul(&c));
        }
        sum = sum.add(&base.pow_i64(a as i64)?.mul(&val).scalar_mul(&chi_a));
    }
    Ok(bracket.mul(&sum))
}
