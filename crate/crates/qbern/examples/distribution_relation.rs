//! The distribution relation for the weighted q-Bernoulli polynomials:
//! beta_n(x) = ([d]^n_{q^alpha}/[d]_q) sum_{a<d} q^a beta_{n,q^d}((x+a)/d),
//! verified as an exact identity in Q(q) for a whole parameter grid.
//!
//! ```bash
//! cargo run --release -p qbern --example distribution_relation
//! ```

use qbern::qbernoulli::{distribution_check, weighted_beta_poly};

fn main() {
    // a single case, spelled out
    let (alpha, n, d, x) = (2u32, 3u32, 3u64, 1u64);
    println!("beta_{}^({})({}) = {}", n, alpha, x, weighted_beta_poly(alpha, n, x));
    let diff = distribution_check(alpha, n, d, x).unwrap();
    println!(
        "lhs - rhs for d = {}: {} (exactly zero: {})",
        d,
        diff,
        diff.is_zero()
    );
    println!();

    // the grid
    let mut checked = 0;
    for alpha in 1..=3 {
        for n in 0..=5 {
            for d in 1..=4 {
                for x in 0..=3 {
                    assert!(
                        distribution_check(alpha, n, d, x).unwrap().is_zero(),
                        "failed at alpha={} n={} d={} x={}",
                        alpha,
                        n,
                        d,
                        x
                    );
                    checked += 1;
                }
            }
        }
    }
    println!("distribution relation holds exactly in {} cases", checked);
}
