//! The p-adic q-integral as truncated Riemann sums
//! (1/[p^N]_q) sum_{x<p^N} [x+s]^n_{q^alpha} q^x, and its convergence to
//! the weighted Bernoulli polynomial: the defect's p-adic valuation
//! climbs with the level. Everything is exact rational arithmetic, so
//! the valuations are exact integers.
//!
//! ```bash
//! cargo run --release -p qbern --example witt_convergence
//! ```

use qbern::exact::rat_int;
use qbern::integral::{riemann_sum_rational, riemann_sum_symbolic, witt_convergence, RiemannSumSpec};
use qbern::qbernoulli::weighted_beta_poly;

fn main() {
    // symbolic truncation at a small level is itself a rational function
    let spec = RiemannSumSpec::plain(2, 1, 1, 1, 0);
    println!("level-1 sum at p = 2, n = 1: {}", riemann_sum_symbolic(&spec).unwrap());

    // convergence profile at q = 1 + 3
    let q = rat_int(4);
    for (alpha, n, shift) in [(1u32, 1u32, 0u64), (1, 3, 0), (2, 2, 1)] {
        let target = weighted_beta_poly(alpha, n, shift);
        println!(
            "\nalpha = {}, n = {}, shift = {}: target beta-poly = {}",
            alpha, n, shift, target
        );
        let profile = witt_convergence(alpha, n, shift, 3, &q, 5, None).unwrap();
        for level in &profile.levels {
            let spec = RiemannSumSpec::plain(3, level.level, n, alpha, shift);
            let s = riemann_sum_rational(&spec, &q).unwrap();
            let v = level
                .valuation
                .map(|v| v.to_string())
                .unwrap_or_else(|| "inf".into());
            let s_str = s.to_string();
            let shown = if s_str.len() > 40 {
                format!("{}...", &s_str[..40])
            } else {
                s_str
            };
            println!("  N = {}: S_N = {:<43} v_3(S_N - target) = {}", level.level, shown, v);
        }
        println!(
            "  profile nondecreasing: {}, reaches floor {}: {}",
            profile.nondecreasing, profile.floor, profile.pass
        );
    }
}
