//! The symmetric-function engine against brute-force products over explicit
//! Chern roots.

mod common;

#[test]
fn classical_genera_and_theta_products_match_explicit_roots() {
    common::brute_force_agreement().unwrap();
}
