//! The p-adic q-integral as truncated Riemann sums,
//! (1/[p^N]_q) sum_{x<p^N} f(x) q^x, and Witt-formula convergence checks.
//!
//! Integrands are the closed family chi(x) [x+shift]^n_{q^alpha}. The
//! symbolic backend produces an exact rational function of q at each
//! level; the numeric backend keeps q an exact rational all the way, so
//! valuation profiles are exact integers, not estimates.

use num_traits::Zero;

use crate::characters::DirichletChar;
use crate::error::{Error, Result};
use crate::exact::{CycElem, FieldElem, Poly, Rational};
use crate::padic::vp;
use crate::qbernoulli::weighted_beta_poly;

/// A truncated Riemann sum: level N over residues mod p^N with integrand
/// chi(x) [x + shift]^n_{q^alpha} q^x.
#[derive(Clone, Debug)]
pub struct RiemannSumSpec {
    pub p: u64,
    pub level: u32,
    pub power: u32,
    pub weight: u32,
    pub shift: u64,
    pub chi: Option<DirichletChar>,
}

impl RiemannSumSpec {
    pub fn plain(p: u64, level: u32, power: u32, weight: u32, shift: u64) -> Self {
        RiemannSumSpec {
            p,
            level,
            power,
            weight,
            shift,
            chi: None,
        }
    }

    fn chi_eval(&self, x: u64) -> CycElem {
        match &self.chi {
            None => CycElem::one(),
            Some(chi) => chi.eval(x as i64),
        }
    }
}

/// The level-N sum as an exact rational function of q.
pub fn riemann_sum_symbolic(spec: &RiemannSumSpec) -> Result<FieldElem> {
    if spec.weight == 0 {
        return Err(Error::InvalidInput("weight alpha >= 1 required".into()));
    }
    let e = spec
        .p
        .checked_pow(spec.level)
        .ok_or_else(|| Error::InvalidInput("p^N overflows".into()))?;
    let mut num = Poly::zero();
    for x in 0..e {
        let w = spec.chi_eval(x);
        if w.is_zero() {
            continue;
        }
        let bracket = qnum_poly(x + spec.shift, spec.weight);
        let term = bracket.pow(spec.power).scalar_mul(&w);
        num = num.add(&shift_poly(&term, x));
    }
    FieldElem::new(num, qnum_poly(e, 1))
}

/// [x]_{q^c} as a plain polynomial.
fn qnum_poly(x: u64, c: u32) -> Poly {
    if x == 0 {
        return Poly::zero();
    }
    let mut coeffs = vec![CycElem::zero(); ((x - 1) * c as u64) as usize + 1];
    for i in 0..x {
        coeffs[(i * c as u64) as usize] = CycElem::one();
    }
    Poly::from_coeffs(coeffs)
}

fn shift_poly(p: &Poly, s: u64) -> Poly {
    if p.is_zero() {
        return Poly::zero();
    }
    let mut coeffs = vec![CycElem::zero(); s as usize];
    coeffs.extend(p.coeffs().iter().cloned());
    Poly::from_coeffs(coeffs)
}

/// The level-N sum evaluated at an exact rational base point; character
/// values must be rational. No rounding anywhere.
pub fn riemann_sum_rational(spec: &RiemannSumSpec, q: &Rational) -> Result<Rational> {
    if spec.weight == 0 {
        return Err(Error::InvalidInput("weight alpha >= 1 required".into()));
    }
    let e = spec
        .p
        .checked_pow(spec.level)
        .ok_or_else(|| Error::InvalidInput("p^N overflows".into()))?;
    let q_alpha = pow_rat(q, spec.weight as u64);
    let denom_alpha = &q_alpha - Rational::from_integer(1.into());
    if denom_alpha.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let mut qx = Rational::from_integer(1.into());
    let mut qax = pow_rat(&q_alpha, spec.shift); // q^{alpha(x+shift)} running power
    let mut sum = Rational::from_integer(0.into());
    let mut qn_denom = Rational::from_integer(0.into()); // [p^N]_q accumulates
    for x in 0..e {
        qn_denom += &qx;
        let w = match &spec.chi {
            None => Rational::from_integer(1.into()),
            Some(chi) => chi.eval_rational(x as i64)?,
        };
        if !w.is_zero() {
            // [x+shift]_{q^alpha} = (q^{alpha(x+shift)} - 1)/(q^alpha - 1)
            let bracket = (&qax - Rational::from_integer(1.into())) / &denom_alpha;
            sum += w * pow_rat(&bracket, spec.power as u64) * &qx;
        }
        qx *= q;
        qax *= &q_alpha;
    }
    if qn_denom.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(sum / qn_denom)
}

fn pow_rat(base: &Rational, e: u64) -> Rational {
    let mut acc = Rational::from_integer(1.into());
    let mut b = base.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &b;
        }
        e >>= 1;
        if e > 0 {
            b = &b * &b;
        }
    }
    acc
}

/// One level of a Witt convergence profile.
#[derive(Clone, Debug)]
pub struct WittLevel {
    pub level: u32,
    /// v_p(S_N - target); None is exact agreement (+infinity).
    pub valuation: Option<i64>,
}

/// Valuation profile of the truncated integrals against the weighted
/// polynomial target.
#[derive(Clone, Debug)]
pub struct WittProfile {
    pub levels: Vec<WittLevel>,
    /// Required floor on the final valuation (defaults to N_max - 2).
    pub floor: i64,
    pub nondecreasing: bool,
    pub pass: bool,
}

/// Compare the level-N Riemann sums of [x+shift]^n_{q^alpha} against
/// beta^{(alpha)}_n(shift) at an exact rational base point, for
/// N = 1..=n_max. PASS means the valuation profile is nondecreasing and
/// the final valuation reaches the floor.
pub fn witt_convergence(
    alpha: u32,
    n: u32,
    shift: u64,
    p: u64,
    q: &Rational,
    n_max: u32,
    floor: Option<i64>,
) -> Result<WittProfile> {
    let target = weighted_beta_poly(alpha, n, shift)
        .eval_rational(q)
        .map_err(|_| {
            Error::PrecisionLoss("target has a pole at the chosen base point".into())
        })?;
    let floor = floor.unwrap_or(n_max as i64 - 2);
    let mut levels = Vec::new();
    for level in 1..=n_max {
        let spec = RiemannSumSpec::plain(p, level, n, alpha, shift);
        let sum = riemann_sum_rational(&spec, q)?;
        let diff = sum - &target;
        levels.push(WittLevel {
            level,
            valuation: vp(&diff, p),
        });
    }
    let nondecreasing = levels.windows(2).all(|w| match (w[0].valuation, w[1].valuation) {
        (None, Some(_)) => false,
        (Some(a), Some(b)) => a <= b,
        _ => true,
    });
    let last_ok = levels
        .last()
        .is_none_or(|l| l.valuation.is_none_or(|v| v >= floor));
    Ok(WittProfile {
        levels,
        floor,
        nondecreasing,
        pass: nondecreasing && last_ok,
    })
}
