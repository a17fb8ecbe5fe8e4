//! Total mass of the measure: the finite level sums
//! sum_{a < dp^N} mu(a + dp^N Z_p) equal the weighted number
//! beta^{(alpha)}_k exactly at every level — level-independence is the
//! finite form of the defining limit. Numerically, the defect of the
//! plain Riemann sums shrinks p-adically instead.
//!
//! ```bash
//! cargo run --release -p qbern --example total_mass
//! ```

use qbern::exact::rat_int;
use qbern::measure::{total_mass, Backend, MeasureParams};
use qbern::padic::QPoint;
use qbern::qbernoulli::weighted_beta;

fn main() {
    let (k, alpha, p, d) = (2u32, 1u32, 3u64, 2u64);
    println!("beta_{}^({}) = {}", k, alpha, weighted_beta(alpha, k));

    let params = MeasureParams::symbolic(k, alpha);
    let (_, levels) = total_mass(&params, p, d, 3).unwrap();
    for l in &levels {
        println!(
            "level N = {}: sum over {} balls equals the number exactly: {}",
            l.level,
            d * p.pow(l.level),
            l.exact
        );
    }
    println!();

    // numeric backend at q = 1 + 3: report v_3(S_N - beta_k) per level
    let q = QPoint::new(3, rat_int(4)).unwrap();
    let params = MeasureParams {
        k,
        alpha,
        backend: Backend::Padic { q, prec: 24 },
    };
    let (_, levels) = total_mass(&params, 3, 1, 5).unwrap();
    println!("numeric total masses at q = 1 + 3 (defect valuations):");
    for l in &levels {
        match l.valuation {
            Some(v) => println!("  N = {}: v_3(S_N - beta_k) = {}", l.level, v),
            None => println!("  N = {}: exact agreement", l.level),
        }
    }
}
