//! The four q-Bernoulli number families through one umbral recurrence
//! solver, the weighted polynomials, and the distribution relation.
//!
//! Every family is an instance of the same linear recurrence
//!
//! ```text
//! q^s * sum_{j<=n} C(n,j) q^{i*j} F_j - F_n = [n = 1] * r
//! ```
//!
//! solved entry by entry: Carlitz's xi (s = 0, i = 1, r = 1), the Carlitz
//! beta (s = 1, i = 1, r = 1), the extended beta^h (s = h, i = 1, r = 1,
//! seeded with `h/[h]_q`), and the weighted beta with weight alpha (s = 1,
//! i = alpha, r = `alpha/[alpha]_q`). For s >= 0 the solver additionally
//! keeps an integer-polynomial track over the structural denominator
//! prod_t (q^{s+it} - 1), which is what makes the big verification sweeps
//! cheap: residuals and measure values assemble without any gcd.

use std::collections::HashMap;
use std::sync::{LazyLock, Mutex};

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exact::zpoly::{binom_i128, reduce_over_qm1_factors, ZPoly};
use crate::exact::{qnumber, FieldElem, Rational};
use crate::padic::{eval_field_elem, q_power, PAdic, QPoint};

/// One of the four number families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// Carlitz's xi_k: diverges at q = 1.
    Xi,
    /// Carlitz's beta_{k,q}.
    Carlitz,
    /// Extended Carlitz numbers beta^h_{k,q}; h is a nonzero integer.
    Extended(i64),
    /// Weighted q-Bernoulli numbers with weight alpha >= 1.
    Weighted(u32),
}

impl Family {
    fn validate(&self) -> Result<()> {
        match self {
            Family::Extended(0) => {
                Err(Error::InvalidInput("extended family requires h != 0".into()))
            }
            Family::Weighted(0) => {
                Err(Error::InvalidInput("weighted family requires alpha >= 1".into()))
            }
            _ => Ok(()),
        }
    }

    /// (prefactor exponent s, inner scale i).
    fn shape(&self) -> (i64, u32) {
        match *self {
            Family::Xi => (0, 1),
            Family::Carlitz => (1, 1),
            Family::Extended(h) => (h, 1),
            Family::Weighted(alpha) => (1, alpha),
        }
    }

    fn seed(&self) -> FieldElem {
        match *self {
            Family::Xi | Family::Carlitz | Family::Weighted(_) => FieldElem::one(),
            Family::Extended(h) => {
                // h / [h]_q with [h]_q = (1 - q^h)/(1 - q)
                let hq = FieldElem::one()
                    .sub(&FieldElem::q_pow(h))
                    .div(&FieldElem::one().sub(&FieldElem::q()))
                    .expect("q != 1 in Q(q)");
                FieldElem::from_int(h).div(&hq).expect("[h]_q != 0")
            }
        }
    }

    fn rhs1(&self) -> FieldElem {
        match *self {
            Family::Xi | Family::Carlitz | Family::Extended(_) => FieldElem::one(),
            Family::Weighted(alpha) => FieldElem::from_int(alpha as i64)
                .div(&qnumber(alpha as u64, 1))
                .expect("[alpha]_q != 0"),
        }
    }
}

/// Integer track of a family with s >= 0: entry numerators over the
/// structural denominator U_n = seed_den * rhs_den * prod_{t<=n}(q^{s+it}-1),
/// a product of (q^M - 1) factors only, so canonical forms come from
/// cyclotomic peeling instead of a generic gcd.
#[derive(Clone)]
pub(crate) struct RawTrack {
    s: u64,
    step: u64,
    base_factors: Vec<u64>,
    /// Numerator of rhs1 after clearing to the (q^M - 1) convention.
    rhs_num: ZPoly,
    seed_den: ZPoly,
    pub(crate) nums: Vec<ZPoly>,
}

impl RawTrack {
    fn new(family: Family) -> Option<RawTrack> {
        let (s, step) = family.shape();
        if s < 0 {
            return None;
        }
        let (base_factors, rhs_num, seed_den, seed_num, rhs_den) = match family {
            Family::Xi | Family::Carlitz => {
                (vec![], ZPoly::one(), ZPoly::one(), ZPoly::one(), ZPoly::one())
            }
            Family::Weighted(alpha) => {
                // rhs1 = alpha/[alpha]_q = alpha (q - 1) / (q^alpha - 1)
                let rhs_num = ZPoly::from_coeffs(vec![-(alpha as i128), alpha as i128]);
                let rhs_den = ZPoly::qpow_minus_one(alpha as u64);
                (vec![alpha as u64], rhs_num, ZPoly::one(), ZPoly::one(), rhs_den)
            }
            Family::Extended(h) => {
                // seed = h/[h]_q = h (q - 1) / (q^h - 1), h > 0 here
                let h = h as u64;
                let seed_num = ZPoly::from_coeffs(vec![-(h as i128), h as i128]);
                (vec![h], ZPoly::one(), ZPoly::qpow_minus_one(h), seed_num, ZPoly::one())
            }
        };
        let a0 = seed_num.mul(&rhs_den).ok()?;
        Some(RawTrack {
            s: s as u64,
            step: step as u64,
            base_factors,
            rhs_num,
            seed_den,
            nums: vec![a0],
        })
    }

    fn step_factor(&self, t: u64) -> u64 {
        self.s + self.step * t
    }

    /// Factor exponents M of U_n (denominator = prod (q^M - 1)).
    pub(crate) fn u_factors(&self, n: u64) -> Vec<u64> {
        let mut f = self.base_factors.clone();
        f.extend((1..=n).map(|t| self.step_factor(t)));
        f
    }

    /// prod_{t=from+1}^{to} (q^{s+it} - 1).
    pub(crate) fn factor_product(&self, from: u64, to: u64) -> Result<ZPoly> {
        let mut acc = ZPoly::one();
        for t in from + 1..=to {
            acc = acc.mul(&ZPoly::qpow_minus_one(self.step_factor(t)))?;
        }
        Ok(acc)
    }

    fn extend_to(&mut self, n: u64) -> Result<()> {
        while (self.nums.len() as u64) <= n {
            let m = self.nums.len() as u64;
            let mut acc = if m == 1 {
                self.rhs_num.mul(&self.seed_den)?
            } else {
                ZPoly::zero()
            };
            for j in 0..m {
                let c = binom_i128(m, j)?;
                let tail = self.factor_product(j, m - 1)?;
                let term = self.nums[j as usize]
                    .mul(&tail)?
                    .scalar_mul(c)?
                    .shift_up(self.s + self.step * j);
                acc = acc.sub(&term)?;
            }
            self.nums.push(acc);
        }
        Ok(())
    }

    fn canonical(&self, n: u64) -> Result<FieldElem> {
        reduce_over_qm1_factors(&self.nums[n as usize], &self.u_factors(n))
    }
}

struct FamilyData {
    values: Vec<FieldElem>,
    raw: Option<RawTrack>,
    degenerate_at: Option<u32>,
}

static TABLE: LazyLock<Mutex<HashMap<Family, FamilyData>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

fn with_family<T>(family: Family, f: impl FnOnce(&mut FamilyData) -> Result<T>) -> Result<T> {
    family.validate()?;
    let mut table = TABLE.lock().unwrap();
    let data = table.entry(family).or_insert_with(|| FamilyData {
        values: vec![family.seed()],
        raw: RawTrack::new(family),
        degenerate_at: None,
    });
    f(data)
}

fn extend_values(family: Family, data: &mut FamilyData, n: u64) -> Result<()> {
    if let Some(m) = data.degenerate_at {
        if n >= m as u64 {
            return Err(Error::DegenerateEquation(m));
        }
    }
    if (data.values.len() as u64) > n {
        return Ok(());
    }
    if let Some(raw) = data.raw.as_mut() {
        raw.extend_to(n)?;
        while (data.values.len() as u64) <= n {
            let m = data.values.len() as u64;
            data.values.push(raw.canonical(m)?);
        }
        return Ok(());
    }
    // General field solve, needed for negative prefactor exponents where
    // the coefficient q^{s+in} - 1 can vanish (at n = -s).
    let (s, i) = family.shape();
    while (data.values.len() as u64) <= n {
        let m = data.values.len() as i64;
        let coeff = FieldElem::q_pow(s + i as i64 * m).sub(&FieldElem::one());
        if coeff.is_zero() {
            data.degenerate_at = Some(m as u32);
            return Err(Error::DegenerateEquation(m as u32));
        }
        let mut rhs = if m == 1 { family.rhs1() } else { FieldElem::zero() };
        for j in 0..m {
            let c =
                FieldElem::from_rational(Rational::from_integer(binom_big(m as u64, j as u64)));
            let term = FieldElem::q_pow(s + i as i64 * j)
                .mul(&c)
                .mul(&data.values[j as usize]);
            rhs = rhs.sub(&term);
        }
        data.values.push(rhs.div(&coeff)?);
    }
    Ok(())
}

pub(crate) fn binom_big(n: u64, j: u64) -> BigInt {
    if j > n {
        return BigInt::from(0);
    }
    let mut acc = BigInt::from(1);
    let j = j.min(n - j);
    for t in 0..j {
        acc = acc * BigInt::from(n - t) / BigInt::from(t + 1);
    }
    acc
}

/// Snapshot of the weighted family's integer track up to entry k (used by
/// the measure kernel to assemble values over structural denominators).
/// The clone is taken under the table lock and is cheap (a handful of
/// short coefficient vectors), so frame construction happens outside it.
pub(crate) fn weighted_raw_snapshot(alpha: u32, k: u32) -> Result<RawTrack> {
    let family = Family::Weighted(alpha);
    with_family(family, |data| {
        let raw = data
            .raw
            .as_mut()
            .expect("weighted family always has an integer track");
        raw.extend_to(k as u64)?;
        let mut copy = raw.clone();
        copy.nums.truncate(k as usize + 1);
        Ok(copy)
    })
}

/// The n-th member of a family, memoized.
pub fn family_number(family: Family, n: u32) -> Result<FieldElem> {
    with_family(family, |data| {
        extend_values(family, data, n as u64)?;
        Ok(data.values[n as usize].clone())
    })
}

/// Carlitz's xi_k from the umbral equation (q xi + 1)^k - xi_k = [k = 1].
pub fn xi(k: u32) -> FieldElem {
    family_number(Family::Xi, k).expect("xi never degenerates")
}

/// The k-th Carlitz q-Bernoulli number beta_{k,q}.
pub fn carlitz_beta(k: u32) -> FieldElem {
    family_number(Family::Carlitz, k).expect("carlitz never degenerates")
}

/// The extended Carlitz numbers beta^h_{k,q}. For h < 0 the defining
/// equation degenerates at n = -h (its coefficient q^{h+n} - 1 vanishes)
/// and entries from there on are undetermined.
pub fn extended_beta(h: i64, k: u32) -> Result<FieldElem> {
    family_number(Family::Extended(h), k)
}

/// The n-th q-Bernoulli number with weight alpha.
pub fn weighted_beta(alpha: u32, n: u32) -> FieldElem {
    family_number(Family::Weighted(alpha), n).expect("weighted never degenerates")
}

/// Residual of entry n in its defining umbral equation,
/// q^s sum_j C(n,j) q^{ij} F_j - F_n - [n=1] r; exactly zero whenever the
/// recurrence was solved correctly. n = 0 reports the seed mismatch (always
/// zero here, kept for sweep symmetry).
pub fn recurrence_residual(family: Family, n: u32) -> Result<FieldElem> {
    if n == 0 {
        let v = family_number(family, 0)?;
        return Ok(v.sub(&family.seed()));
    }
    family_number(family, n)?;
    with_family(family, |data| {
        if let Some(raw) = data.raw.as_ref() {
            let n = n as u64;
            // q^s sum_j C(n,j) q^{ij} A_j * (U_n/U_j) - A_n - [n=1] rhs*U_n,
            // all over U_n.
            let mut acc = ZPoly::zero();
            for j in 0..=n {
                let c = binom_i128(n, j)?;
                let tail = raw.factor_product(j, n)?;
                let term = raw.nums[j as usize]
                    .mul(&tail)?
                    .scalar_mul(c)?
                    .shift_up(raw.s + raw.step * j);
                acc = acc.add(&term)?;
            }
            acc = acc.sub(&raw.nums[n as usize])?;
            if n == 1 {
                let rhs = raw
                    .rhs_num
                    .mul(&raw.seed_den)?
                    .mul(&ZPoly::qpow_minus_one(raw.step_factor(1)))?;
                acc = acc.sub(&rhs)?;
            }
            reduce_over_qm1_factors(&acc, &raw.u_factors(n))
        } else {
            let (s, i) = family.shape();
            let mut acc = FieldElem::zero();
            for j in 0..=n {
                let c = FieldElem::from_rational(Rational::from_integer(binom_big(
                    n as u64, j as u64,
                )));
                let term = FieldElem::q_pow(s + i as i64 * j as i64)
                    .mul(&c)
                    .mul(&data.values[j as usize]);
                acc = acc.add(&term);
            }
            acc = acc.sub(&data.values[n as usize]);
            if n == 1 {
                acc = acc.sub(&family.rhs1());
            }
            Ok(acc)
        }
    })
}

/// Weighted entry rebased to q^t via exact substitution (the defining
/// recurrence at base q^t is the q -> q^t image of the base recurrence).
pub fn weighted_beta_at_base(alpha: u32, n: u32, t: i64) -> FieldElem {
    weighted_beta(alpha, n).substitute_q_power(t)
}

/// The weighted q-Bernoulli polynomial
/// `sum_l C(n,l) [x]_{q^alpha}^{n-l} q^{alpha l x} beta_l` for an integer
/// argument. 0^0 = 1 at x = 0, so the value collapses to beta_n there.
pub fn weighted_beta_poly(alpha: u32, n: u32, x: u64) -> FieldElem {
    let qa = qnumber(x, alpha as i64);
    let mut acc = FieldElem::zero();
    for l in 0..=n {
        let power = if n - l == 0 {
            FieldElem::one()
        } else if x == 0 {
            continue;
        } else {
            qa.pow((n - l) as i64).expect("positive power")
        };
        let c = FieldElem::from_rational(Rational::from_integer(binom_big(n as u64, l as u64)));
        let shift = FieldElem::q_pow(alpha as i64 * l as i64 * x as i64);
        acc = acc.add(&c.mul(&power).mul(&shift).mul(&weighted_beta(alpha, l)));
    }
    acc
}

/// Structural factor exponents of the denominator of beta_l with weight
/// alpha: den(beta_l) divides (q^alpha - 1) prod_{t<=l} (q^{alpha t+1}-1).
pub(crate) fn weighted_den_factor_exponents(alpha: u32, l: u32) -> Vec<u64> {
    let mut f = vec![alpha as u64];
    f.extend((1..=l as u64).map(|t| alpha as u64 * t + 1));
    f
}

/// beta_{n,q^E}(u/E) as (numerator, denominator factor exponents): the
/// value over the structural denominator (q^{alpha E}-1)^n * U_n(q^E),
/// assembled from the canonical entries with exact divisions only (no
/// gcd). `weighted_beta_poly_at_ratio` peels this to canonical form.
pub(crate) fn weighted_poly_ratio_parts(
    alpha: u32,
    n: u32,
    base_exp: u64,
    numer: u64,
) -> (crate::Poly, Vec<u64>) {
    use crate::exact::CycElem;
    use crate::Poly;
    assert!(base_exp >= 1 && alpha >= 1);
    let qnum_poly = |x: u64, c: u64| -> Poly {
        if x == 0 {
            return Poly::zero();
        }
        let mut coeffs = vec![CycElem::zero(); ((x - 1) * c) as usize + 1];
        for i in 0..x {
            coeffs[(i * c) as usize] = CycElem::one();
        }
        Poly::from_coeffs(coeffs)
    };
    let pow_minus_one = |m: u64| -> Poly {
        let mut coeffs = vec![CycElem::zero(); m as usize + 1];
        coeffs[0] = CycElem::from_int(-1);
        coeffs[m as usize] = CycElem::one();
        Poly::from_coeffs(coeffs)
    };
    // U_n at the base point and the lift multipliers U_n / den(beta_l)
    let mut u_n = Poly::one();
    for m in weighted_den_factor_exponents(alpha, n) {
        u_n = u_n.mul(&pow_minus_one(m));
    }
    let g = pow_minus_one(alpha as u64);
    let ghat = pow_minus_one(alpha as u64 * base_exp);
    let bracket = qnum_poly(numer, alpha as u64);
    let mut num = Poly::zero();
    let mut bracket_pow = Poly::one();
    let mut g_pow = Poly::one();
    for back in 0..=n {
        // back = n - l: maintain [u]^{back} and g^{back} incrementally
        let l = n - back;
        let take = back == 0 || numer != 0;
        if take {
            let beta_l = weighted_beta(alpha, l);
            let lift = u_n.div_exact(beta_l.den());
            let c = CycElem::from_rational(Rational::from_integer(binom_big(
                n as u64, l as u64,
            )));
            let rebased = beta_l.num().mul(&lift).subst_pow(base_exp);
            let mut term = bracket_pow
                .mul(&g_pow)
                .mul(&ghat.pow(l))
                .mul(&rebased)
                .scalar_mul(&c);
            let shift = alpha as u64 * l as u64 * numer;
            if shift > 0 {
                term = Poly::monomial(CycElem::one(), shift as usize).mul(&term);
            }
            num = num.add(&term);
        }
        if back < n {
            bracket_pow = bracket_pow.mul(&bracket);
            g_pow = g_pow.mul(&g);
        }
    }
    let mut factors = vec![alpha as u64 * base_exp; n as usize];
    factors.extend(
        weighted_den_factor_exponents(alpha, n)
            .into_iter()
            .map(|m| m * base_exp),
    );
    (num, factors)
}

/// The weighted polynomial at a rational argument u/E rewritten exactly:
/// beta_{n,q^E}(u/E) with `[u/E]_{(q^E)^alpha} = [u]_{q^alpha}/[E]_{q^alpha}`
/// and (q^E)^{alpha l u/E} = q^{alpha l u}, so the value stays in Q(q).
pub fn weighted_beta_poly_at_ratio(alpha: u32, n: u32, base_exp: u64, numer: u64) -> FieldElem {
    let (num, factors) = weighted_poly_ratio_parts(alpha, n, base_exp, numer);
    FieldElem::reduce_over_cyclotomic_factors(num, &factors)
}

/// The weighted polynomial at a p-adic integer argument x, with
/// `[x]_{q^alpha}` and `q^{alpha l x}` realized through the binomial series.
pub fn weighted_beta_poly_padic(
    alpha: u32,
    n: u32,
    x: &Rational,
    q: &QPoint,
    prec: i64,
) -> Result<PAdic> {
    let p = q.p();
    let work = prec + crate::padic::GUARD_DIGITS;
    let alpha_r = Rational::from_integer(BigInt::from(alpha));
    // [x]_{q^alpha} = (1 - q^{alpha x}) / (1 - q^alpha)
    let one = PAdic::exact(p, Rational::one());
    let q_alpha_x = q_power(q, &(&alpha_r * x), work)?;
    let q_alpha = q.padic().pow_i64(alpha as i64)?;
    let bracket = one.sub(&q_alpha_x).div(&one.sub(&q_alpha))?;
    let mut acc = PAdic::exact(p, Rational::from_integer(0.into()));
    for l in 0..=n {
        let c = Rational::from_integer(binom_big(n as u64, l as u64));
        let power = bracket.pow_i64((n - l) as i64)?;
        let exponent = &alpha_r * Rational::from_integer(BigInt::from(l)) * x;
        let shift = q_power(q, &exponent, work)?;
        let beta = eval_field_elem(&weighted_beta(alpha, l), q.padic())?;
        acc = acc.add(&power.mul(&shift).mul(&beta).scalar_mul(&c));
    }
    Ok(acc.with_prec_at_most(prec))
}

/// Difference of the two sides of the distribution relation
///
/// ```text
/// beta_n(x) = ([d]^n_{q^alpha}/[d]_q) sum_{a<d} q^a beta_{n,q^d}((x+a)/d)
/// ```
///
/// for integer x >= 0. The (x+a)/d argument is eliminated by the exact
/// rewriting `[(x+a)/d]_{(q^d)^alpha} = [x+a]_{q^alpha}/[d]_{q^alpha}`, so
/// the whole check runs in Q(q). Zero iff the relation holds.
pub fn distribution_check(alpha: u32, n: u32, d: u64, x: u64) -> Result<FieldElem> {
    if d == 0 {
        return Err(Error::InvalidInput("d >= 1 required".into()));
    }
    let lhs = crate::measure::kernel::Frame::new(alpha, n, 1)?;
    let rhs = crate::measure::kernel::Frame::new(alpha, n, d)?;
    let lhs_num = lhs.beta_val_num(x)?;
    let mut sum = ZPoly::zero();
    for a in 0..d {
        sum = sum.add(&rhs.beta_val_num(x + a)?.shift_up(a))?;
    }
    // [d]^n_{q^alpha}/[d]_q = (q^{alpha d}-1)^n / ((q^alpha-1)^n [d]_q)
    let ghat = ZPoly::qpow_minus_one(alpha as u64 * d).pow(n)?;
    let g = ZPoly::qpow_minus_one(alpha as u64).pow(n)?;
    let dq = ZPoly::qnum(d, 1);
    let rhs_num = ghat.mul(&sum)?;
    let rhs_den = g.mul(&dq)?.mul(rhs.den0())?;
    let diff = lhs_num.mul(&rhs_den)?.sub(&rhs_num.mul(lhs.den0())?)?;
    if diff.is_zero() {
        return Ok(FieldElem::zero());
    }
    FieldElem::new(diff.to_poly(), lhs.den0().mul(&rhs_den)?.to_poly())
}
