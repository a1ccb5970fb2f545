use ei_hereditary::group::FiniteGroup;
use ei_hereditary::oracle::{group_set_projectivity_check, GroupSet};
use ei_hereditary::CoefficientField;
use proptest::prelude::*;

fn groups_up_to_12() -> Vec<FiniteGroup> {
    let c2 = FiniteGroup::cyclic(2);
    let mut out: Vec<FiniteGroup> = (1..=12).map(FiniteGroup::cyclic).collect();
    out.extend([
        FiniteGroup::klein_four(),
        FiniteGroup::symmetric3(),
        FiniteGroup::dihedral(8),
        FiniteGroup::quaternion(),
        c2.direct_product(&FiniteGroup::cyclic(4)),
        c2.direct_product(&FiniteGroup::klein_four()),
        FiniteGroup::dihedral(10),
        FiniteGroup::dihedral(12),
        c2.direct_product(&FiniteGroup::cyclic(6)),
        FiniteGroup::alternating4(),
        FiniteGroup::dicyclic12(),
    ]);
    out
}

#[test]
fn permutation_modules_are_projective_iff_stabilisers_invertible() {
    for g in groups_up_to_12() {
        for h in g.all_subgroups() {
            let x = GroupSet::cosets(&g, &h);
            for p in [0, 2, 3] {
                let k = CoefficientField::new(p).unwrap();
                let r = group_set_projectivity_check(&g, &x, k).unwrap();
                assert_eq!(r.projective, k.is_invertible(h.order()), "|G| = {} |H| = {} {k}", g.order(), h.order());
                assert!(r.agrees());
            }
        }
    }
}

#[test]
fn subgroup_counts() {
    let counts: Vec<usize> =
        [FiniteGroup::symmetric3(), FiniteGroup::dihedral(8), FiniteGroup::quaternion(), FiniteGroup::alternating4()]
            .iter()
            .map(|g| g.all_subgroups().len())
            .collect();
    assert_eq!(counts, vec![6, 10, 6, 10]);
}

proptest! {
    #[test]
    fn subgroup_calculus(gi in 0usize..23, gens in prop::collection::vec(0usize..24, 0..3), t in 0usize..24) {
        let groups = groups_up_to_12();
        let g = &groups[gi % groups.len()];
        let gens: Vec<usize> = gens.into_iter().map(|x| x % g.order()).collect();
        let h = g.subgroup_closure(&gens).unwrap();
        prop_assert_eq!(g.order() % h.order(), 0);
        let n = g.normaliser(&h);
        prop_assert!(h.is_subset_of(&n));
        prop_assert!(g.centraliser(&h).is_subset_of(&n));
        prop_assert_eq!(g.transporter_set(&h, &h), n.members().to_vec());
        let x = t % g.order();
        let c = g.conjugate(&h, x);
        prop_assert!(g.are_conjugate(&h, &c));
        prop_assert_eq!(g.normaliser(&c).order(), n.order());
        let family = g.family_closure(std::slice::from_ref(&h));
        prop_assert!(family.is_closed(g));
        prop_assert!(family.contains(&c));
    }
}
