//! Certified p-adic arithmetic: exact rational representatives with
//! precision tags, q^t for p-adic integer exponents t by the binomial
//! series, and evaluation of exact rational functions at p-adic points.
//!
//! ```bash
//! cargo run --release -p qbern --example padic_arithmetic
//! ```

use qbern::exact::{rat, rat_int};
use qbern::padic::{eval_field_elem, q_power, vp, PAdic, QPoint};
use qbern::qbernoulli::weighted_beta;

fn main() {
    // valuations
    println!("v_3(12)  = {:?}", vp(&rat_int(12), 3));
    println!("v_3(9/2) = {:?}", vp(&rat(9, 2), 3));

    // arithmetic propagates the sharpest certificate
    let a = PAdic::new(3, rat_int(3), 4);
    println!("\n(3 + O(3^4))^2 = {}", a.mul(&a));
    let b = PAdic::new(3, rat_int(1), 3);
    let c = PAdic::new(3, rat_int(3), 3);
    println!("(1 + O(3^3))/(3 + O(3^3)) = {}", b.div(&c).unwrap());

    // q^t for fractional t in Z_p: the square root of 4 congruent to
    // 1 mod 3 is 25 mod 27
    let q = QPoint::new(3, rat_int(4)).unwrap();
    let root = q_power(&q, &rat(1, 2), 6).unwrap();
    println!("\n4^(1/2) = {}", root.digits_string());
    println!("         (residue mod 27: {})", root.residue_mod_pk(3).unwrap());
    let back = root.mul(&root).sub(&PAdic::exact(3, rat_int(4)));
    println!("squaring back: defect valuation >= {}", back.valuation_lb());

    // exponent law to certified precision
    let s = rat(1, 2);
    let t = rat(2, 5);
    let lhs = q_power(&q, &(&s + &t), 10).unwrap();
    let rhs = q_power(&q, &s, 12).unwrap().mul(&q_power(&q, &t, 12).unwrap());
    println!(
        "q^(1/2) q^(2/5) = q^(9/10) to O(3^{})",
        lhs.sub(&rhs).prec()
    );

    // exact rational functions evaluate with certificates
    let beta2 = weighted_beta(1, 2);
    let value = eval_field_elem(&beta2, q.padic()).unwrap();
    println!("\nbeta_2 at q = 4: {} = {}", beta2, value);
    println!("digits: {}", value.with_prec_at_most(8).digits_string());
}
