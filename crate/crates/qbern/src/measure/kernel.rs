//! Integer-polynomial kernel for level-N measure aggregates.
//!
//! Working at level modulus E = d*p^N, every value the verification
//! sweeps need is a polynomial numerator over one structural denominator:
//!
//! ```text
//! beta_{k,q^E}(u/E) = beta_val_num(u) / (Ghat^k * U_k(q^E))
//! mu(a + E Z_p)     = q^a beta_val_num(a) / (ghat^k * [E]_q * U_k(q^E))
//! ```
//!
//! with Ghat = q^{alpha E} - 1, ghat = q^alpha - 1, and U_k the structural
//! denominator of the weighted family's integer track. Sharing the
//! denominator across an entire level turns ball sums into plain numerator
//! additions, and zero checks into polynomial identity checks — no gcd
//! anywhere on the hot path.

use crate::error::Result;
use crate::exact::zpoly::{binom_i128, ZPoly};
use crate::qbernoulli::weighted_raw_snapshot;

pub(crate) struct Frame {
    alpha: u32,
    k: u32,
    e: u64,
    /// B_l = Ghat^l * (A_l * U_k/U_l)(q^E), l = 0..=k.
    b: Vec<ZPoly>,
    /// ghat^j = (q^alpha - 1)^j, j = 0..=k.
    g_pows: Vec<ZPoly>,
    /// Ghat^k * U_k(q^E): denominator under beta_val_num.
    den0: ZPoly,
    /// Ghat^k alone.
    ghat_k: ZPoly,
    /// U_k(q^E) alone.
    u_e: ZPoly,
    /// ghat^k * [E]_q * U_k(q^E): denominator under mu_num.
    mu_den: ZPoly,
    /// Factor exponents M of U_k (without the E rebase).
    u_factors: Vec<u64>,
    /// (A_k, U_k(q)) at the base point, for comparisons against the
    /// weighted number itself.
    target: (ZPoly, ZPoly),
}

impl Frame {
    pub fn new(alpha: u32, k: u32, e: u64) -> Result<Frame> {
        assert!(alpha >= 1 && e >= 1);
        let raw = weighted_raw_snapshot(alpha, k)?;
        {
            let raw = &raw;
            let ghat = ZPoly::qpow_minus_one(alpha as u64 * e);
            let mut u_e = ZPoly::one();
            let mut u_base = ZPoly::one();
            for m in raw.u_factors(k as u64) {
                u_e = u_e.mul(&ZPoly::qpow_minus_one(m * e))?;
                u_base = u_base.mul(&ZPoly::qpow_minus_one(m))?;
            }
            let mut b = Vec::with_capacity(k as usize + 1);
            let mut ghat_pow = ZPoly::one();
            for l in 0..=k {
                let p_l = raw.nums[l as usize].mul(&raw.factor_product(l as u64, k as u64)?)?;
                b.push(ghat_pow.mul(&p_l.subst_pow(e))?);
                if l < k {
                    ghat_pow = ghat_pow.mul(&ghat)?;
                }
            }
            let g = ZPoly::qpow_minus_one(alpha as u64);
            let mut g_pows = vec![ZPoly::one()];
            for _ in 0..k {
                g_pows.push(g_pows.last().unwrap().mul(&g)?);
            }
            // after the loop ghat_pow = Ghat^k
            let den0 = ghat_pow.mul(&u_e)?;
            let mu_den = g_pows[k as usize]
                .mul(&ZPoly::qnum(e, 1))?
                .mul(&u_e)?;
            Ok(Frame {
                alpha,
                k,
                e,
                b,
                g_pows,
                den0,
                ghat_k: ghat_pow,
                u_e,
                mu_den,
                u_factors: raw.u_factors(k as u64),
                target: (raw.nums[k as usize].clone(), u_base),
            })
        }
    }

    /// Factor exponents M of mu_den as a multiset of (q^M - 1) factors:
    /// {alpha} * k plus {E} plus the rebased structural factors {M * E}.
    /// mu_den itself carries [E]_q = (q^E - 1)/(q - 1), so a numerator
    /// expressed over these factors must be multiplied by (q - 1) once.
    pub fn mu_den_factor_exponents(&self) -> Vec<u64> {
        let mut f = vec![self.alpha as u64; self.k as usize];
        f.push(self.e);
        f.extend(self.u_factors.iter().map(|m| m * self.e));
        f
    }

    pub fn den0(&self) -> &ZPoly {
        &self.den0
    }

    pub fn mu_den(&self) -> &ZPoly {
        &self.mu_den
    }

    /// U_k(q^E), the structural factor of the denominators.
    pub fn den0_ufactor(&self) -> Result<ZPoly> {
        Ok(self.u_e.clone())
    }

    /// Ghat^k = (q^{alpha E} - 1)^k.
    pub fn ghat_pow_k(&self) -> Result<ZPoly> {
        Ok(self.ghat_k.clone())
    }

    /// (A_k, U_k) at the base point: the weighted number as a raw fraction.
    pub fn target(&self) -> &(ZPoly, ZPoly) {
        &self.target
    }

    /// Numerator of beta_{k,q^E}(u/E) over `den0`.
    pub fn beta_val_num(&self, u: u64) -> Result<ZPoly> {
        let k = self.k;
        let bracket = ZPoly::qnum(u, self.alpha as u64);
        let mut power = ZPoly::one();
        let mut acc = ZPoly::zero();
        for l in (0..=k).rev() {
            // power = [u]^{k-l} maintained by the descending loop
            let c = binom_i128(k as u64, l as u64)?;
            let term = power
                .mul(&self.g_pows[(k - l) as usize])?
                .mul(&self.b[l as usize])?
                .scalar_mul(c)?
                .shift_up(self.alpha as u64 * l as u64 * u);
            acc = acc.add(&term)?;
            if l > 0 {
                power = power.mul(&bracket)?;
            }
        }
        Ok(acc)
    }

    /// Numerator of mu(a + E Z_p) over `mu_den`.
    pub fn mu_num(&self, a: u64) -> Result<ZPoly> {
        debug_assert!(a < self.e);
        Ok(self.beta_val_num(a)?.shift_up(a))
    }

    /// Per-class sums of mu numerators over `mu_den`: residues a in [0, E)
    /// with `select(a) = Some(class)` contribute to their class slot.
    /// Work is shared through per-class power sums, so this costs k+1
    /// large multiplications per class regardless of how many residues
    /// participate.
    pub fn class_ball_sums(
        &self,
        nclasses: usize,
        select: impl Fn(u64) -> Option<usize>,
    ) -> Result<Vec<ZPoly>> {
        let k = self.k as usize;
        // w[c][j] = sum over selected a of q^{(1+alpha(k-j))a} [a]^{j}
        // indexed so that j = k-l matches beta_val_num's power layout.
        let mut w = vec![vec![ZPoly::zero(); k + 1]; nclasses];
        for a in 0..self.e {
            let Some(class) = select(a) else { continue };
            let bracket = ZPoly::qnum(a, self.alpha as u64);
            let mut power = ZPoly::one();
            for j in 0..=k {
                // exponent (1 + alpha*l)*a with l = k - j, plus the q^a
                // ball prefactor folded in
                let l = (k - j) as u64;
                let shift = (1 + self.alpha as u64 * l) * a;
                w[class][j] = w[class][j].add(&power.shift_up(shift))?;
                if j < k {
                    power = power.mul(&bracket)?;
                }
            }
        }
        let mut out = Vec::with_capacity(nclasses);
        for class_w in &w {
            let mut acc = ZPoly::zero();
            for j in 0..=k {
                let l = k - j;
                let c = binom_i128(self.k as u64, l as u64)?;
                let term = class_w[j]
                    .mul(&self.g_pows[j])?
                    .mul(&self.b[l])?
                    .scalar_mul(c)?;
                acc = acc.add(&term)?;
            }
            out.push(acc);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::FieldElem;
    use crate::qbernoulli::{weighted_beta, weighted_beta_poly};

    fn frame_value(frame: &Frame, u: u64) -> FieldElem {
        FieldElem::new(
            frame.beta_val_num(u).unwrap().to_poly(),
            frame.den0().to_poly(),
        )
        .unwrap()
    }

    #[test]
    fn beta_val_at_e_one_matches_polynomials() {
        // E = 1: beta_val(u/1) is the weighted polynomial at integer u.
        for alpha in 1..=2 {
            for k in 0..=3 {
                let frame = Frame::new(alpha, k, 1).unwrap();
                for u in 0..=3u64 {
                    assert_eq!(
                        frame_value(&frame, u),
                        weighted_beta_poly(alpha, k, u),
                        "alpha={} k={} u={}",
                        alpha,
                        k,
                        u
                    );
                }
            }
        }
    }

    #[test]
    fn beta_val_at_zero_is_rebased_number() {
        // beta_{k,q^E}(0) = beta_k at base q^E
        for (alpha, k, e) in [(1u32, 1u32, 2u64), (1, 2, 3), (2, 2, 2), (2, 3, 6)] {
            let frame = Frame::new(alpha, k, e).unwrap();
            let expect = weighted_beta(alpha, k).substitute_q_power(e as i64);
            assert_eq!(frame_value(&frame, 0), expect);
        }
    }

    #[test]
    fn mu_num_spot_check() {
        // p = 2, d = 1, N = 1, a = 1, k = 1, alpha = 1:
        // mu = q/(1+q) - q^2/(1+q^2)
        let frame = Frame::new(1, 1, 2).unwrap();
        let mu = FieldElem::new(
            frame.mu_num(1).unwrap().to_poly(),
            frame.mu_den().to_poly(),
        )
        .unwrap();
        let a = FieldElem::new(
            crate::Poly::from_int_coeffs(&[0, 1]),
            crate::Poly::from_int_coeffs(&[1, 1]),
        )
        .unwrap();
        let b = FieldElem::new(
            crate::Poly::from_int_coeffs(&[0, 0, 1]),
            crate::Poly::from_int_coeffs(&[1, 0, 1]),
        )
        .unwrap();
        assert_eq!(mu, a.sub(&b));
    }

    #[test]
    fn beta_val_matches_general_lane_at_composite_levels() {
        // the raw integer track against the canonical-entry assembly,
        // nonzero arguments and rebased levels
        use crate::qbernoulli::weighted_beta_poly_at_ratio;
        for (alpha, k, e) in [(1u32, 2u32, 3u64), (2, 3, 4), (1, 4, 6), (3, 2, 5)] {
            let frame = Frame::new(alpha, k, e).unwrap();
            for u in 0..=e {
                assert_eq!(
                    frame_value(&frame, u),
                    weighted_beta_poly_at_ratio(alpha, k, e, u),
                    "alpha={} k={} e={} u={}",
                    alpha,
                    k,
                    e,
                    u
                );
            }
        }
    }

    #[test]
    fn mu_num_matches_general_mu_ball() {
        use crate::measure::{mu_ball, Ball, MeasureParams};
        for (p, d, level, k, alpha) in
            [(2u64, 3u64, 1u32, 2u32, 1u32), (3, 2, 1, 3, 2), (5, 1, 1, 1, 1)]
        {
            let e = d * p.pow(level);
            let frame = Frame::new(alpha, k, e).unwrap();
            let params = MeasureParams::symbolic(k, alpha);
            for a in (0..e).step_by(2) {
                let via_kernel = FieldElem::new(
                    frame.mu_num(a).unwrap().to_poly(),
                    frame.mu_den().to_poly(),
                )
                .unwrap();
                let ball = Ball::new(p, d, level, a).unwrap();
                let via_general = mu_ball(&params, p, &ball).unwrap();
                assert_eq!(Some(&via_kernel), via_general.as_symbolic());
            }
        }
    }

    #[test]
    fn class_sums_match_individual_mu() {
        let frame = Frame::new(2, 2, 6).unwrap();
        let sums = frame.class_ball_sums(3, |a| Some((a % 3) as usize)).unwrap();
        for c in 0..3u64 {
            let mut direct = ZPoly::zero();
            for a in (0..6).filter(|a| a % 3 == c) {
                direct = direct.add(&frame.mu_num(a).unwrap()).unwrap();
            }
            assert_eq!(sums[c as usize], direct);
        }
    }
}
