//! The twist operator chi^y f(q) = ([y]^k_{q^alpha}/[y]_q) chi(y) f(q^y)
//! and its composition law chi^x chi^y = chi^{xy}, checked exactly.
//!
//! ```bash
//! cargo run --release -p qbern --example twist_operator
//! ```

use qbern::characters::{character, generalized_beta};
use qbern::measure::{chi_operator, chi_operator_composition_diff};

fn main() {
    let chi = character(4, 1).unwrap();
    let (k, alpha) = (1u32, 1u32);
    let f = generalized_beta(&chi, alpha, k);
    println!("f(q) = {}", f);

    // y = 1 is the identity operator
    assert_eq!(chi_operator(&chi, 1, k, alpha, &f).unwrap(), f);
    println!("chi^1 f = f");

    let tf = chi_operator(&chi, 3, k, alpha, &f).unwrap();
    println!("chi^3 f = {}", tf);

    // composition collapses to the product index
    let via_composition = chi_operator(&chi, 3, k, alpha, &tf).unwrap();
    let direct = chi_operator(&chi, 9, k, alpha, &f).unwrap();
    assert_eq!(via_composition, direct);
    println!("chi^3 (chi^3 f) = chi^9 f, exactly");
    println!();

    let mut checked = 0;
    for chi in qbern::characters::enumerate_characters(4) {
        for k in 0..=3 {
            for alpha in 1..=2 {
                let f = generalized_beta(&chi, alpha, k);
                for x in 2..=5 {
                    for y in 2..=5 {
                        let diff =
                            chi_operator_composition_diff(&chi, x, y, k, alpha, &f).unwrap();
                        assert!(diff.is_zero());
                        checked += 1;
                    }
                }
            }
        }
    }
    println!("composition law verified exactly in {} cases", checked);
}
