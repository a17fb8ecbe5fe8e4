//! Independent oracles for the acceptance suite. Everything here is
//! deliberately implemented from first principles (brute force where
//! possible) and never calls the code paths it checks.

use num_bigint::BigInt;
use qbern::Rational;

/// Classical Bernoulli numbers from the textbook recurrence
/// sum_{j=0}^{n} C(n+1, j) B_j = 0 with B_0 = 1 (so B_1 = -1/2).
pub fn bernoulli_oracle(n: u32) -> Rational {
    let mut b: Vec<Rational> = vec![Rational::from_integer(1.into())];
    for m in 1..=n as u64 {
        let mut acc = Rational::from_integer(0.into());
        for (j, bj) in b.iter().enumerate() {
            acc += Rational::from_integer(binomial(m + 1, j as u64)) * bj;
        }
        b.push(-acc / Rational::from_integer(BigInt::from(m + 1)));
    }
    b[n as usize].clone()
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    let mut acc = BigInt::from(1);
    for t in 0..k {
        acc = acc * BigInt::from(n - t) / BigInt::from(t + 1);
    }
    acc
}

/// Hensel lift oracle: the square root of `a` mod p^k that is congruent
/// to `r0` mod p, found by exhaustive lifting digit by digit.
pub fn hensel_sqrt(a: u64, p: u64, k: u32, r0: u64) -> Option<u64> {
    let mut roots = vec![r0 % p];
    let mut modulus = p;
    for _ in 1..k {
        let next_modulus = modulus * p;
        let mut next = Vec::new();
        for &r in &roots {
            for t in 0..p {
                let cand = r + t * modulus;
                if cand * cand % next_modulus == a % next_modulus {
                    next.push(cand);
                }
            }
        }
        roots = next;
        modulus = next_modulus;
        if roots.is_empty() {
            return None;
        }
    }
    roots.first().copied()
}

/// Brute-force p-adic valuation of a rational by trial division.
pub fn vp_oracle(x: &Rational, p: u64) -> Option<i64> {
    use num_traits::Zero;
    if x.is_zero() {
        return None;
    }
    let count = |mut n: BigInt| -> i64 {
        let p = BigInt::from(p);
        let mut v = 0;
        loop {
            let (q, r) = num_integer::Integer::div_rem(&n, &p);
            if !r.is_zero() {
                return v;
            }
            v += 1;
            n = q;
        }
    };
    Some(count(x.numer().clone()) - count(x.denom().clone()))
}
