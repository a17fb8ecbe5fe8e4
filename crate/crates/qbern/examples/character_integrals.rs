//! Dirichlet characters with exact cyclotomic values, and the generalized
//! weighted q-Bernoulli numbers attached to them: the X-integral closed
//! form, the pX-integral, and the exact agreement of finite-level partial
//! sums with both.
//!
//! ```bash
//! cargo run --release -p qbern --example character_integrals
//! ```

use qbern::characters::{enumerate_characters, generalized_beta};
use qbern::measure::{char_levels_check, char_partial, integral_char_px, integral_char_x, Region};

fn main() {
    let p = 3u64;

    println!("characters mod 5:");
    for chi in enumerate_characters(5) {
        println!(
            "  exps {:?}: order {}, conductor {}",
            chi.gen_exps(),
            chi.order(),
            chi.conductor()
        );
    }
    println!();

    // the nontrivial character mod 4
    let chi = enumerate_characters(4).pop().unwrap();
    println!("nontrivial character mod 4: chi(3) = {}", chi.eval(3));
    for (k, alpha) in [(0u32, 1u32), (1, 1), (2, 2)] {
        let closed = integral_char_x(&chi, k, alpha).unwrap();
        let attached = generalized_beta(&chi, alpha, k);
        println!(
            "k = {}, alpha = {}: X-integral = {} (matches the attached number: {})",
            k,
            alpha,
            closed,
            closed == attached
        );
    }
    println!();

    // the finite-level partial sums already equal the closed forms
    for region in [Region::X, Region::PX] {
        for level in 0..=2 {
            let partial = char_partial(&chi, 1, 1, p, region, level).unwrap();
            let closed = match region {
                Region::X => integral_char_x(&chi, 1, 1).unwrap(),
                Region::PX => integral_char_px(&chi, 1, 1, p).unwrap(),
            };
            println!(
                "{:?} partial at level {}: equals closed form: {}",
                region,
                level,
                partial == closed
            );
        }
    }
    println!();

    // per-residue check across moduli 4 and 5 (covers every character of
    // those moduli at once)
    for d in [4u64, 5] {
        for region in [Region::X, Region::PX] {
            let checks = char_levels_check(d, 2, 2, p, region, 2).unwrap();
            assert!(checks.iter().all(|c| c.exact));
        }
        println!("d = {}: all X and pX partials exact at levels 0..=2", d);
    }

    // an order-4 character has honest cyclotomic values
    let chi5 = enumerate_characters(5)
        .into_iter()
        .find(|c| c.order() == 4)
        .unwrap();
    println!(
        "\norder-4 character mod 5: chi(2) = {}, attached number at alpha=1, n=1:\n  {}",
        chi5.eval(2),
        generalized_beta(&chi5, 1, 1)
    );
}
