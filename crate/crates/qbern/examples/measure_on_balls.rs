//! The weighted q-Bernoulli measure on compact-open balls a + dp^N Z_p:
//! values, exact additivity across refinements, and the compatibility
//! criterion that distinguishes distribution seeds from non-seeds.
//!
//! ```bash
//! cargo run --release -p qbern --example measure_on_balls
//! ```

use qbern::measure::{
    additivity_check, mu_ball, theorem2_criterion, Ball, MeasureParams, SeedFunction,
};
use qbern::FieldElem;

fn main() {
    let p = 2u64;
    let params = MeasureParams::symbolic(1, 1);

    // mu(1 + 2 Z_2) for k = 1, alpha = 1
    let ball = Ball::new(p, 1, 1, 1).unwrap();
    let mass = mu_ball(&params, p, &ball).unwrap();
    println!("mu(1 + 2 Z_2) = {}", mass);

    // the ball splits into 1 + 4 Z_2 and 3 + 4 Z_2; masses add exactly
    for child in ball.children(p) {
        println!(
            "  mu({} + 4 Z_2) = {}",
            child.rep(),
            mu_ball(&params, p, &child).unwrap()
        );
    }
    let defect = additivity_check(&params, p, &ball).unwrap();
    println!("parent minus children: {} (exact zero)", defect);
    println!();

    // additivity over a grid, exactly
    let mut checked = 0;
    for p in [2u64, 3, 5] {
        for d in [1u64, 2, 4] {
            if num_integer::gcd(d, p) != 1 {
                continue;
            }
            for level in 0..=1 {
                for k in 0..=3 {
                    for alpha in 1..=2 {
                        let params = MeasureParams::symbolic(k, alpha);
                        for a in 0..d * p.pow(level) {
                            let parent = Ball::new(p, d, level, a).unwrap();
                            assert!(additivity_check(&params, p, &parent)
                                .unwrap()
                                .is_exact_zero());
                            checked += 1;
                        }
                    }
                }
            }
        }
    }
    println!("{} refinements are exactly additive", checked);
    println!();

    // the criterion is an if-and-only-if: a constant seed is rejected
    let good = theorem2_criterion(1, 1, &SeedFunction::WeightedBeta, 2, 1, 1).unwrap();
    let bad = theorem2_criterion(1, 1, &SeedFunction::Constant(FieldElem::one()), 2, 0, 0).unwrap();
    println!("weighted seed compatibility defect: {}", good);
    println!("constant seed compatibility defect: {} (nonzero, rejected)", bad);
}
