mod support;

use proptest::prelude::*;

use orbilat::exact::rat;
use orbilat::orbifold::qdim_squared;
use support::props::*;

proptest! {
    #![proptest_config(config())]

    #[test]
    fn dual_is_an_involution_prop(rows in int_basis(4)) { dual_is_an_involution(rows)?; }

    #[test]
    fn discriminant_order_is_det_prop(rows in int_basis(4)) { discriminant_order_is_det(rows)?; }

    #[test]
    fn enumeration_matches_box_prop(input in box_input()) { enumeration_matches_box(input)?; }

    #[test]
    fn dual_of_construction_a_prop(c in so_code()) { dual_of_construction_a(c)?; }

    #[test]
    fn dual_of_construction_b_prop(c in so_code()) { dual_of_construction_b(c)?; }

    #[test]
    fn even_norm_iff_chi_integral_prop(input in weight_input()) { even_norm_iff_chi_integral(input)?; }

    #[test]
    fn roots_never_pair_to_zero_mod_k_prop(input in root_input()) { roots_never_pair_to_zero_mod_k(input)?; }

    #[test]
    fn one_minus_g_equals_one_minus_inverse_prop(g in fpf_isometry()) { one_minus_g_equals_one_minus_inverse(g)?; }

    #[test]
    fn inverse_of_one_minus_g_prop(g in fpf_isometry()) { inverse_of_one_minus_g(g)?; }

    #[test]
    fn quotient_by_one_minus_g_prop(case in prime_order_isometry()) { quotient_by_one_minus_g(case)?; }

    #[test]
    fn qdim_collapses_prop(input in qdim_input()) { qdim_collapses(input)?; }
}

#[test]
fn collapse_cases_occur() {
    // The Coxeter family always meets the hypothesis of `qdim_collapses`.
    let g = coxeter_product(&[(5, 2), (5, 1)]);
    assert!(g
        .one_minus_g_image(&g.lattice().dual(), 1)
        .unwrap()
        .is_sublattice_of(g.lattice()));
    assert_eq!(qdim_squared(g.lattice(), &g, 3).unwrap(), rat(1, 1));
}
