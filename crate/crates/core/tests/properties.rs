mod common;

use common::*;
use proptest::prelude::*;
use theta_doubler::characters::{DirichletChar, UnitGroup};
use theta_doubler::eisbasis::weight_k_basis;
use theta_doubler::ff::make_field;
use theta_doubler::hecke::{anemic_decompose, LocalComponent};
use theta_doubler::weightone::{
    dihedral_component, dihedral_space, dihedral_target, katz_vanishing_holds, weight_one_space, PipelineOptions,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn theta_kills_v_and_is_a_derivation(s in series_pair()) {
        prop_assert_eq!(theta_rules(&s), Ok(()));
    }

    #[test]
    fn v_is_a_ring_homomorphism(s in series_pair()) {
        prop_assert_eq!(v_ring_hom(&s), Ok(()));
    }

    #[test]
    fn dual_relations_reduce_to_the_trace(r in trivial_reduction_rep()) {
        prop_assert_eq!(dual_verdict_is_trace(&r), Ok(()));
    }
}

fn dihedral(d: i64, p: u64, allow_eisenstein: bool) -> LocalComponent {
    let ctx = make_field(p, 1).unwrap();
    let s = dihedral_space(d, d.unsigned_abs(), &ctx).unwrap();
    let t = dihedral_target(d, &ctx, 400).unwrap();
    dihedral_component(&s, &t.reduction, PipelineOptions { allow_eisenstein, ..Default::default() }).unwrap()
}

fn assert_commuting(c: &LocalComponent) {
    let ops: Vec<_> = c.ops.iter().collect();
    for (i, (l, a)) in ops.iter().enumerate() {
        for (m, b) in &ops[i + 1..] {
            assert!(a.commutes_with(b), "T_{l} and T_{m} do not commute at level {}", c.level);
        }
    }
}

#[test]
fn stored_hecke_matrices_commute() {
    let ctx = make_field(5, 3).unwrap();
    let chi = DirichletChar::parse(&UnitGroup::new(23), &ctx, "23:11").unwrap();
    let s = weight_k_basis(23, 5, &chi, None).unwrap();
    let comps = anemic_decompose(&s, 3).unwrap();
    assert!(comps.len() > 1);
    for c in &comps {
        assert_commuting(c);
    }
    for (d, p, eis) in [(-23, 5, false), (-23, 7, false), (-47, 5, true)] {
        assert_commuting(&dihedral(d, p, eis));
    }
}

#[test]
fn weight_one_spans_avoid_q_p_series() {
    for (d, p, eis) in [(-23, 5, false), (-23, 7, false), (-47, 5, true)] {
        let c = dihedral(d, p, eis);
        let w = weight_one_space(&c, None).unwrap();
        assert!(!w.forms.is_empty());
        assert!(katz_vanishing_holds(&w.forms), "D = {d}, p = {p}");
    }
}

#[test]
fn katz_vanishing_detects_dependent_spans() {
    let ctx = make_field(5, 1).unwrap();
    let f = theta_doubler::qseries::QExpansion::from_ints(&ctx, &[0, 1, 2, 0, 1, 3, 1]);
    let g = theta_doubler::qseries::QExpansion::from_ints(&ctx, &[0, 2, 4, 0, 2, 2, 2]);
    // independent, and each is fine alone, but 2f − g = −q⁵
    assert!(katz_vanishing_holds(std::slice::from_ref(&f)));
    assert!(!katz_vanishing_holds(&[f, g]));
}
