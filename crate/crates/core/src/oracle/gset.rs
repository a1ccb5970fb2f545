use serde::Serialize;

use super::module::Module;
use super::{CategoryAlgebra, OracleError};
use crate::category::examples::group as group_category;
use crate::group::{CoefficientField, FiniteGroup, Subgroup};
use crate::linalg::Field;

/// A finite left `G`-set given by `action[g][x] = g·x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSet {
    pub points: usize,
    pub action: Vec<Vec<usize>>,
}

impl GroupSet {
    /// Left cosets `G/H` in order of their least element.
    pub fn cosets(g: &FiniteGroup, h: &Subgroup) -> Self {
        let mut label = vec![usize::MAX; g.order()];
        let mut reps = Vec::new();
        for x in g.elements() {
            if label[x] != usize::MAX {
                continue;
            }
            for &y in h.members() {
                label[g.mul(x, y)] = reps.len();
            }
            reps.push(x);
        }
        let action = g.elements().map(|a| reps.iter().map(|&r| label[g.mul(a, r)]).collect()).collect();
        GroupSet { points: reps.len(), action }
    }

    pub fn stabiliser(&self, g: &FiniteGroup, x: usize) -> Subgroup {
        let members: Vec<usize> = g.elements().filter(|&a| self.action[a][x] == x).collect();
        g.subgroup_from_members(&members).expect("stabilisers are subgroups")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupSetReport {
    pub points: usize,
    pub stabiliser_orders: Vec<usize>,
    pub projective: bool,
    pub stabilisers_invertible: bool,
}

impl GroupSetReport {
    pub fn agrees(&self) -> bool {
        self.projective == self.stabilisers_invertible
    }
}

/// Projectivity of the permutation module `kX` and the stabiliser criterion.
pub fn group_set_projectivity_check(
    g: &FiniteGroup,
    x: &GroupSet,
    k: CoefficientField,
) -> Result<GroupSetReport, OracleError> {
    let cat = group_category(g);
    let projective = crate::with_field!(k, f => {
        let alg = CategoryAlgebra::new(&cat, f)?;
        permutation_module(&alg, g, x).is_projective(&alg)?
    });
    let mut orders: Vec<usize> = (0..x.points).map(|p| x.stabiliser(g, p).order()).collect();
    orders.sort_unstable();
    orders.dedup();
    let stabilisers_invertible = orders.iter().all(|&o| k.is_invertible(o));
    Ok(GroupSetReport { points: x.points, stabiliser_orders: orders, projective, stabilisers_invertible })
}

fn permutation_module<F: Field>(alg: &CategoryAlgebra<'_, F>, g: &FiniteGroup, x: &GroupSet) -> Module<F> {
    let f = &alg.field;
    let actions = (0..g.order())
        .map(|a| {
            // morphism a of the one-object category is group element a
            (0..x.points)
                .map(|p| {
                    let mut v = vec![f.zero(); x.points];
                    v[x.action[a][p]] = f.one();
                    v
                })
                .collect()
        })
        .collect();
    Module::explicit(vec![x.points], actions)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regular_set_is_projective() {
        let g = FiniteGroup::symmetric3();
        let x = GroupSet::cosets(&g, &g.trivial_subgroup());
        for p in [0, 2, 3] {
            let r = group_set_projectivity_check(&g, &x, CoefficientField::new(p).unwrap()).unwrap();
            assert!(r.projective);
        }
    }

    #[test]
    fn point_for_c2() {
        let g = FiniteGroup::cyclic(2);
        let x = GroupSet::cosets(&g, &g.whole());
        assert_eq!(x.points, 1);
        let r = group_set_projectivity_check(&g, &x, CoefficientField::new(2).unwrap()).unwrap();
        assert!(!r.projective && r.agrees());
        let r = group_set_projectivity_check(&g, &x, CoefficientField::new(3).unwrap()).unwrap();
        assert!(r.projective && r.agrees());
    }
}
