//! Transporter, orbit and Quillen categories of finite groups, with their
//! specialised hereditarity criteria.

use serde::Serialize;
use thiserror::Error;

use crate::bass_serre::{normaliser_finiteness, BassSerreError, GraphOfGroups, NormaliserResult};
use crate::category::{CategoryError, Clause, EICategory, HereditarityVerdict, Side};
use crate::group::{CoefficientField, Family, FiniteGroup, Subgroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("relation matrix has {len} entries, expected {expected}")]
    RelationSize { len: usize, expected: usize },
    #[error("relation is not a partial order: {0}")]
    NotPartialOrder(String),
    #[error("action of element {element} is not a permutation of the poset")]
    BadPermutation { element: usize },
    #[error("action has {len} permutations for a group of order {order}")]
    ActionLength { len: usize, order: usize },
    #[error("action is not a homomorphism at ({a}, {b})")]
    NotAnAction { a: usize, b: usize },
    #[error("element {element} does not preserve {x} ≤ {y}")]
    NotOrderPreserving { element: usize, x: usize, y: usize },
    #[error("condition (S) fails: element {element} moves {x} strictly below itself")]
    ConditionSViolated { element: usize, x: usize },
    #[error("family member {0} is not a subgroup of the named vertex group")]
    UnsupportedEmbedding(usize),
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error(transparent)]
    BassSerre(#[from] BassSerreError),
}

/// A finite poset with an action of a finite group by order automorphisms.
#[derive(Debug, Clone)]
pub struct GPoset {
    n: usize,
    le: Vec<bool>,
    group: FiniteGroup,
    /// `action[g][x] = g·x`
    action: Vec<Vec<usize>>,
    labels: Vec<String>,
}

impl GPoset {
    /// Validates a relation matrix `le[x * n + y] = (x ≤ y)` and an action.
    pub fn new(
        n: usize,
        le: Vec<bool>,
        group: FiniteGroup,
        action: Vec<Vec<usize>>,
    ) -> Result<Self, ConstructionError> {
        if le.len() != n * n {
            return Err(ConstructionError::RelationSize { len: le.len(), expected: n * n });
        }
        for x in 0..n {
            if !le[x * n + x] {
                return Err(ConstructionError::NotPartialOrder(format!("{x} ≤ {x} missing")));
            }
            for y in 0..n {
                if x != y && le[x * n + y] && le[y * n + x] {
                    return Err(ConstructionError::NotPartialOrder(format!("{x} and {y} are mutually below")));
                }
                for z in 0..n {
                    if le[x * n + y] && le[y * n + z] && !le[x * n + z] {
                        return Err(ConstructionError::NotPartialOrder(format!("{x} ≤ {y} ≤ {z} but not {x} ≤ {z}")));
                    }
                }
            }
        }
        if action.len() != group.order() {
            return Err(ConstructionError::ActionLength { len: action.len(), order: group.order() });
        }
        for (g, perm) in action.iter().enumerate() {
            let mut seen = vec![false; n];
            if perm.len() != n || perm.iter().any(|&x| x >= n || std::mem::replace(&mut seen[x], true)) {
                return Err(ConstructionError::BadPermutation { element: g });
            }
        }
        for a in group.elements() {
            for b in group.elements() {
                let ab = group.mul(a, b);
                if (0..n).any(|x| action[ab][x] != action[a][action[b][x]]) {
                    return Err(ConstructionError::NotAnAction { a, b });
                }
            }
        }
        for (g, perm) in action.iter().enumerate() {
            for x in 0..n {
                for y in 0..n {
                    if le[x * n + y] && !le[perm[x] * n + perm[y]] {
                        return Err(ConstructionError::NotOrderPreserving { element: g, x, y });
                    }
                }
            }
        }
        let labels = (0..n).map(|x| x.to_string()).collect();
        Ok(GPoset { n, le, group, action, labels })
    }

    /// Poset from strict relations, closed reflexively and transitively.
    pub fn from_relations(
        n: usize,
        relations: &[(usize, usize)],
        group: FiniteGroup,
        action: Vec<Vec<usize>>,
    ) -> Result<Self, ConstructionError> {
        let mut le = vec![false; n * n];
        for x in 0..n {
            le[x * n + x] = true;
        }
        for &(a, b) in relations {
            if a >= n || b >= n {
                return Err(ConstructionError::NotPartialOrder(format!("relation ({a}, {b}) out of range")));
            }
            le[a * n + b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if le[i * n + k] && le[k * n + j] {
                        le[i * n + j] = true;
                    }
                }
            }
        }
        Self::new(n, le, group, action)
    }

    /// The poset with the trivial group acting.
    pub fn trivial_action(n: usize, relations: &[(usize, usize)]) -> Result<Self, ConstructionError> {
        Self::from_relations(n, relations, FiniteGroup::trivial(), vec![(0..n).collect()])
    }

    /// Members of a family ordered by inclusion, with `G` acting by
    /// conjugation.
    pub fn subgroup_poset(group: &FiniteGroup, family: &Family) -> Self {
        let members = family.members();
        let n = members.len();
        let le = (0..n * n).map(|i| members[i / n].is_subset_of(&members[i % n])).collect();
        let action = group
            .elements()
            .map(|g| {
                members
                    .iter()
                    .map(|h| {
                        let c = group.conjugate(h, g);
                        members.iter().position(|m| *m == c).expect("family is closed under conjugation")
                    })
                    .collect()
            })
            .collect();
        let mut p = Self::new(n, le, group.clone(), action).expect("subgroup posets are G-posets");
        p.labels = members.iter().map(|h| format!("{:?}", h.members())).collect();
        p
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        if labels.len() == self.n {
            self.labels = labels;
        }
        self
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.le[x * self.n + y]
    }

    pub fn less(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    pub fn act(&self, g: usize, x: usize) -> usize {
        self.action[g][x]
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn stabiliser(&self, x: usize) -> Subgroup {
        let members: Vec<usize> = self.group.elements().filter(|&g| self.act(g, x) == x).collect();
        self.group.subgroup_from_members(&members).expect("stabilisers are subgroups")
    }

    /// `y` covers `x`.
    pub fn covers(&self, x: usize, y: usize) -> bool {
        self.less(x, y) && !(0..self.n).any(|z| self.less(x, z) && self.less(z, y))
    }

    /// Number of saturated chains from `x` to `y`, that is paths in the
    /// Hasse diagram.
    pub fn saturated_chain_count(&self, x: usize, y: usize) -> u64 {
        let mut memo = vec![None; self.n];
        self.chains_to(x, y, &mut memo)
    }

    fn chains_to(&self, x: usize, y: usize, memo: &mut Vec<Option<u64>>) -> u64 {
        if x == y {
            return 1;
        }
        if let Some(c) = memo[x] {
            return c;
        }
        let mut total = 0u64;
        for z in 0..self.n {
            if self.covers(x, z) && self.leq(z, y) {
                total = total.saturating_add(self.chains_to(z, y, memo));
            }
        }
        memo[x] = Some(total);
        total
    }
}

/// `g·x ≤ x` implies `g·x = x`.
pub fn check_condition_s(p: &GPoset) -> bool {
    find_condition_s_violation(p).is_none()
}

fn find_condition_s_violation(p: &GPoset) -> Option<(usize, usize)> {
    p.group.elements().flat_map(|g| (0..p.n).map(move |x| (g, x))).find(|&(g, x)| p.less(p.act(g, x), x))
}

/// Every pair `x < y` is joined by a saturated chain.
pub fn check_esc(p: &GPoset) -> bool {
    (0..p.n).all(|x| (0..p.n).all(|y| !p.less(x, y) || p.saturated_chain_count(x, y) > 0))
}

/// Every pair `x < y` is joined by at most one saturated chain.
pub fn check_usc(p: &GPoset) -> bool {
    usc_violations(p).is_empty()
}

fn usc_violations(p: &GPoset) -> Vec<String> {
    let mut out = Vec::new();
    for x in 0..p.n {
        for y in 0..p.n {
            if p.less(x, y) {
                let count = p.saturated_chain_count(x, y);
                if count > 1 {
                    out.push(format!("{count} saturated chains from {} to {}", p.label(x), p.label(y)));
                }
            }
        }
    }
    out
}

/// The transporter category `P ⋊ G`: objects are the poset elements and
/// `hom(x, y) = {g : g·x ≤ y}`, composed by multiplication. Morphisms are
/// numbered by source, then target, then group element.
pub fn transporter_category(p: &GPoset) -> Result<EICategory, ConstructionError> {
    if let Some((element, x)) = find_condition_s_violation(p) {
        return Err(ConstructionError::ConditionSViolated { element, x });
    }
    let n = p.n;
    let order = p.group.order();
    let mut ends = Vec::new();
    let mut elements = Vec::new();
    let mut id_of = vec![usize::MAX; n * n * order];
    for x in 0..n {
        for y in 0..n {
            for g in p.group.elements() {
                if p.leq(p.act(g, x), y) {
                    id_of[(x * n + y) * order + g] = ends.len();
                    ends.push((x, y));
                    elements.push(g);
                }
            }
        }
    }
    let e = p.group.identity();
    let identities = (0..n).map(|x| id_of[(x * n + x) * order + e]).collect();
    let e2 = ends.clone();
    let mut cat = EICategory::from_fn(n, ends, identities, |h, g| {
        let (x, _) = e2[g];
        let (_, z) = e2[h];
        Some(id_of[(x * n + z) * order + p.group.mul(elements[h], elements[g])])
    })?;
    cat.set_object_labels(p.labels.clone());
    Ok(cat)
}

/// The transporter criterion. For a finite group the stabiliser condition
/// reduces to invertibility of `|Stab(x)|`, which already covers the
/// intersections; both are reported.
pub fn decide_transporter_hereditary(
    p: &GPoset,
    k: CoefficientField,
    side: Side,
) -> Result<HereditarityVerdict, ConstructionError> {
    if let Some((element, x)) = find_condition_s_violation(p) {
        return Err(ConstructionError::ConditionSViolated { element, x });
    }
    let mut clauses = vec![Clause::new("usc", usc_violations(p))];
    let stabs: Vec<Subgroup> = (0..p.n).map(|x| p.stabiliser(x)).collect();
    let bad: Vec<String> = (0..p.n)
        .filter(|&x| !k.is_invertible(stabs[x].order()))
        .map(|x| format!("Stab({}) has order {}", p.label(x), stabs[x].order()))
        .collect();
    clauses.push(Clause::new("stabilisers", bad));
    let mut bad = Vec::new();
    for x in 0..p.n {
        for y in 0..p.n {
            let o = stabs[x].intersection(&stabs[y]).order();
            if p.less(x, y) && !k.is_invertible(o) {
                bad.push(format!("Stab({}) ∩ Stab({}) has order {o}", p.label(x), p.label(y)));
            }
        }
    }
    clauses.push(Clause::new("stabiliser_intersections", bad));
    let hereditary = clauses.iter().all(|c| c.holds);
    Ok(HereditarityVerdict { side, hereditary, clauses })
}

fn object_labels(g: &FiniteGroup, reps: &[Subgroup], prefix: &str) -> Vec<String> {
    reps.iter()
        .enumerate()
        .map(|(i, h)| {
            if h.order() == 1 {
                format!("{prefix}1")
            } else if h.order() == g.order() {
                format!("{prefix}G")
            } else {
                format!("{prefix}K{i}")
            }
        })
        .collect()
}

/// Builds a skeletal category whose objects are `reps` and whose morphisms
/// `a → b` are the classes of `Trans(a, b)` under `class_rep`, composed by
/// multiplying representatives.
fn coset_category(
    g: &FiniteGroup,
    reps: &[Subgroup],
    labels: Vec<String>,
    class_rep: impl Fn(usize, usize, usize) -> usize,
) -> EICategory {
    let n = reps.len();
    let order = g.order();
    let mut ends = Vec::new();
    let mut elements = Vec::new();
    let mut id_of = vec![usize::MAX; n * n * order];
    for a in 0..n {
        for b in 0..n {
            let mut classes: Vec<usize> =
                g.transporter_set(&reps[a], &reps[b]).into_iter().map(|x| class_rep(a, b, x)).collect();
            classes.sort_unstable();
            classes.dedup();
            for x in classes {
                id_of[(a * n + b) * order + x] = ends.len();
                ends.push((a, b));
                elements.push(x);
            }
        }
    }
    let identities = (0..n).map(|a| id_of[(a * n + a) * order + class_rep(a, a, g.identity())]).collect();
    let e2 = ends.clone();
    let mut cat = EICategory::from_fn(n, ends, identities, |later, first| {
        let (a, _) = e2[first];
        let (_, c) = e2[later];
        let x = class_rep(a, c, g.mul(elements[later], elements[first]));
        Some(id_of[(a * n + c) * order + x])
    })
    .expect("coset categories are EI categories");
    cat.set_object_labels(labels);
    cat
}

/// Least-index conjugacy representatives of a family, trivial group first.
pub fn family_representatives(g: &FiniteGroup, family: &Family) -> Vec<Subgroup> {
    g.conjugacy_representatives(family.members())
}

/// The orbit category `Or(G, F)` on conjugacy representatives, with
/// `hom(G/L, G/K) = K\Trans(L, K)` and `Mg' ∘ Kg = Mg'g`.
pub fn orbit_category(g: &FiniteGroup, family: &Family) -> EICategory {
    let reps = family_representatives(g, family);
    let labels = object_labels(g, &reps, "G/");
    let r = reps.clone();
    coset_category(g, &reps, labels, move |_, b, x| r[b].members().iter().map(|&k| g.mul(k, x)).min().unwrap())
}

/// The Quillen category `Q(G, F)` on conjugacy representatives, with
/// `hom(H, K) = Trans(H, K)/C_G(H)`.
pub fn quillen_category(g: &FiniteGroup, family: &Family) -> EICategory {
    let reps = family_representatives(g, family);
    let labels = object_labels(g, &reps, "");
    let centralisers: Vec<Subgroup> = reps.iter().map(|h| g.centraliser(h)).collect();
    coset_category(g, &reps, labels, move |a, _, x| {
        centralisers[a].members().iter().map(|&c| g.mul(x, c)).min().unwrap()
    })
}

/// A subgroup of a vertex group of a graph of groups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexSubgroup {
    pub vertex: usize,
    pub members: Vec<usize>,
}

/// All subgroups of all vertex groups up to conjugacy inside each vertex
/// group, with a single trivial subgroup. Identifications along edges are
/// not detected.
pub fn finite_subgroups_of(gog: &GraphOfGroups) -> Vec<VertexSubgroup> {
    let mut out = vec![VertexSubgroup { vertex: 0, members: vec![gog.vertex_group(0).identity()] }];
    for v in 0..gog.vertex_count() {
        let g = gog.vertex_group(v);
        for h in g.conjugacy_representatives(&g.all_subgroups()) {
            if h.order() > 1 {
                out.push(VertexSubgroup { vertex: v, members: h.members().to_vec() });
            }
        }
    }
    out
}

/// Source group of an orbit category.
#[derive(Debug, Clone, Copy)]
pub enum OrbitSource<'a> {
    Finite {
        group: &'a FiniteGroup,
        family: &'a Family,
    },
    /// Fundamental group of a graph of groups; the verdict is criterion-only
    /// since the orbit category is infinite.
    Graph {
        graph: &'a GraphOfGroups,
        members: &'a [VertexSubgroup],
    },
}

impl OrbitSource<'_> {
    pub fn is_finite(&self) -> bool {
        matches!(self, OrbitSource::Finite { .. })
    }
}

/// The orbit category criterion, evaluated clause by clause. Left and right
/// verdicts coincide.
pub fn decide_orbit_hereditary(
    source: OrbitSource<'_>,
    k: CoefficientField,
    side: Side,
) -> Result<HereditarityVerdict, ConstructionError> {
    let mut dicks = Vec::new();
    let mut cyclic = Vec::new();
    let mut invertible = Vec::new();
    let mut weyl = Vec::new();
    match source {
        OrbitSource::Finite { group, family } => {
            if !k.is_invertible(group.order()) {
                dicks.push(format!("|G| = {}", group.order()));
            }
            for (i, h) in family_representatives(group, family).iter().enumerate() {
                member_clauses(group, h, &format!("K{i}"), k, &mut cyclic, &mut invertible);
                if h.order() > 1 {
                    let w = group.normaliser(h).order() / h.order();
                    if !k.is_invertible(w) {
                        weyl.push(format!("W(K{i}) has order {w}"));
                    }
                }
            }
        }
        OrbitSource::Graph { graph, members } => {
            for v in 0..graph.vertex_count() {
                let o = graph.vertex_group(v).order();
                if !k.is_invertible(o) {
                    dicks.push(format!("vertex group {} has order {o}", graph.vertex_label(v)));
                }
            }
            for (i, m) in members.iter().enumerate() {
                if m.vertex >= graph.vertex_count() {
                    return Err(ConstructionError::UnsupportedEmbedding(i));
                }
                let g = graph.vertex_group(m.vertex);
                let h = g.subgroup_from_members(&m.members).ok_or(ConstructionError::UnsupportedEmbedding(i))?;
                let name = format!("member {i} at {}", graph.vertex_label(m.vertex));
                member_clauses(g, &h, &name, k, &mut cyclic, &mut invertible);
                if h.order() == 1 {
                    continue;
                }
                match normaliser_finiteness(graph, m.vertex, h.members())? {
                    NormaliserResult::Infinite { witness, .. } => {
                        weyl.push(format!("W({name}) is infinite, witness {}", witness.render(graph)));
                    }
                    NormaliserResult::Finite { order, .. } => {
                        let w = order / h.order();
                        if !k.is_invertible(w) {
                            weyl.push(format!("W({name}) has order {w}"));
                        }
                    }
                }
            }
        }
    }
    let clauses = vec![
        Clause::new("dicks", dicks),
        Clause::new("cyclic_prime_power", cyclic),
        Clause::new("members_invertible", invertible),
        Clause::new("weyl_groups", weyl),
    ];
    let hereditary = clauses.iter().all(|c| c.holds);
    Ok(HereditarityVerdict { side, hereditary, clauses })
}

fn member_clauses(
    g: &FiniteGroup,
    h: &Subgroup,
    name: &str,
    k: CoefficientField,
    cyclic: &mut Vec<String>,
    invertible: &mut Vec<String>,
) {
    if let crate::group::CyclicPrimePower::No(why) = g.is_cyclic_prime_power(h) {
        cyclic.push(format!("{name}: {why}"));
    }
    if !k.is_invertible(h.order()) {
        invertible.push(format!("{name} has order {}", h.order()));
    }
}

/// The Quillen category criterion. Left and right verdicts coincide.
pub fn decide_quillen_hereditary(
    g: &FiniteGroup,
    family: &Family,
    k: CoefficientField,
    side: Side,
) -> HereditarityVerdict {
    let mut cyclic = Vec::new();
    let mut autos = Vec::new();
    for (i, h) in family_representatives(g, family).iter().enumerate() {
        member_clauses(g, h, &format!("K{i}"), CoefficientField::rationals(), &mut cyclic, &mut Vec::new());
        let o = g.normaliser(h).order() / g.centraliser(h).order();
        if !k.is_invertible(o) {
            autos.push(format!("N(K{i})/C(K{i}) has order {o}"));
        }
    }
    let clauses = vec![Clause::new("cyclic_prime_power", cyclic), Clause::new("automisers", autos)];
    let hereditary = clauses.iter().all(|c| c.holds);
    HereditarityVerdict { side, hereditary, clauses }
}

/// Presets used by tests and the command line.
pub mod examples {
    use super::*;

    /// The diamond `0 < 1, 2 < 3` with `C2` swapping the middle elements.
    pub fn diamond_swap() -> GPoset {
        GPoset::from_relations(
            4,
            &[(0, 1), (0, 2), (1, 3), (2, 3)],
            FiniteGroup::cyclic(2),
            vec![vec![0, 1, 2, 3], vec![0, 2, 1, 3]],
        )
        .expect("diamond with swap")
    }

    /// Two minimal elements `0, 1`, each below both maximal elements `2, 3`,
    /// with trivial action.
    pub fn bowtie() -> GPoset {
        GPoset::trivial_action(4, &[(0, 2), (0, 3), (1, 2), (1, 3)]).expect("bowtie poset")
    }

    pub fn one_point(g: &FiniteGroup) -> GPoset {
        GPoset::new(1, vec![true], g.clone(), vec![vec![0]; g.order()]).expect("one-point G-poset")
    }
}

#[cfg(test)]
mod tests {
    use super::examples::*;
    use super::*;
    use crate::category::examples as cats;

    fn k(p: u64) -> CoefficientField {
        CoefficientField::new(p).unwrap()
    }

    #[test]
    fn rejects_bad_posets() {
        let g = FiniteGroup::cyclic(2);
        assert!(matches!(
            GPoset::new(2, vec![true, true, true, true], FiniteGroup::trivial(), vec![vec![0, 1]]),
            Err(ConstructionError::NotPartialOrder(_))
        ));
        assert!(matches!(
            GPoset::from_relations(2, &[(0, 1)], g.clone(), vec![vec![0, 1], vec![1, 0]]),
            Err(ConstructionError::NotOrderPreserving { .. })
        ));
        assert!(matches!(
            GPoset::from_relations(2, &[], g, vec![vec![0, 1], vec![0, 0]]),
            Err(ConstructionError::BadPermutation { element: 1 })
        ));
    }

    #[test]
    fn trivial_transporters() {
        let p = GPoset::trivial_action(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(check_condition_s(&p));
        assert_eq!(transporter_category(&p).unwrap(), cats::a3());
        let g = FiniteGroup::symmetric3();
        assert_eq!(transporter_category(&one_point(&g)).unwrap(), cats::group(&g));
    }

    #[test]
    fn diamond_with_swap() {
        let p = diamond_swap();
        assert!(check_condition_s(&p));
        let cat = transporter_category(&p).unwrap();
        assert_eq!(cat.object_count(), 4);
        assert_eq!(cat.hom(0, 3).len(), 2);
        assert!(check_esc(&p) && !check_usc(&p));
        let v = decide_transporter_hereditary(&p, k(0), Side::Left).unwrap();
        assert!(!v.hereditary && !v.clause("usc").unwrap().holds);
    }

    #[test]
    fn chain_counts() {
        let d = GPoset::trivial_action(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(d.saturated_chain_count(0, 3), 2);
        assert!(check_usc(&bowtie()));
        let a3 = GPoset::trivial_action(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(check_esc(&a3) && check_usc(&a3));
    }

    #[test]
    fn one_point_c2() {
        let p = one_point(&FiniteGroup::cyclic(2));
        assert!(!decide_transporter_hereditary(&p, k(2), Side::Left).unwrap().hereditary);
        assert!(decide_transporter_hereditary(&p, k(3), Side::Left).unwrap().hereditary);
    }

    #[test]
    fn orbit_category_of_s3() {
        let g = FiniteGroup::symmetric3();
        let c2 = g.all_subgroups().into_iter().find(|h| h.order() == 2).unwrap();
        let family = g.family_closure(&[c2]);
        let cat = orbit_category(&g, &family);
        assert_eq!(cat.object_count(), 2);
        assert_eq!(cat.hom(0, 1).len(), 3);
        assert_eq!(cat.aut_group(1).order(), 1);
        assert_eq!(cat.aut_group(0).order(), 6);
        let src = OrbitSource::Finite { group: &g, family: &family };
        assert!(decide_orbit_hereditary(src, k(5), Side::Left).unwrap().hereditary);
        assert!(!decide_orbit_hereditary(src, k(2), Side::Left).unwrap().hereditary);
        let trivial = g.family_closure(&[]);
        assert_eq!(orbit_category(&g, &trivial), cats::group(&g));
    }

    #[test]
    fn quillen_categories() {
        let g = FiniteGroup::symmetric3();
        let c3 = g.all_subgroups().into_iter().find(|h| h.order() == 3).unwrap();
        let family = g.family_closure(&[c3]);
        let cat = quillen_category(&g, &family);
        assert_eq!(cat.aut_group(0).order(), 1);
        assert_eq!(cat.aut_group(1).order(), 2);
        assert!(decide_quillen_hereditary(&g, &family, k(5), Side::Left).hereditary);
        let all = g.family_closure(&[g.whole()]);
        assert!(!decide_quillen_hereditary(&g, &all, k(5), Side::Left).hereditary);
        let c4 = FiniteGroup::cyclic(4);
        let all = c4.family_closure(&[c4.whole()]);
        let cat = quillen_category(&c4, &all);
        assert_eq!(cat.hom(1, 2).len(), 1);
        assert!(decide_quillen_hereditary(&c4, &all, k(3), Side::Left).hereditary);
    }

    #[test]
    fn psl2z_orbit_category() {
        let gog = crate::bass_serre::examples::psl2z();
        let fin = finite_subgroups_of(&gog);
        assert_eq!(fin.len(), 3);
        let src = OrbitSource::Graph { graph: &gog, members: &fin };
        for p in [0, 5, 7] {
            assert!(decide_orbit_hereditary(src, k(p), Side::Left).unwrap().hereditary);
        }
        for p in [2, 3] {
            assert!(!decide_orbit_hereditary(src, k(p), Side::Left).unwrap().hereditary);
        }
        let bad = [VertexSubgroup { vertex: 0, members: vec![1] }];
        let src = OrbitSource::Graph { graph: &gog, members: &bad };
        assert!(matches!(
            decide_orbit_hereditary(src, k(0), Side::Left),
            Err(ConstructionError::UnsupportedEmbedding(0))
        ));
    }

    #[test]
    fn sl2z_three_subgroups() {
        let gog = crate::bass_serre::examples::sl2z();
        let z3 = [VertexSubgroup { vertex: 0, members: vec![0] }, VertexSubgroup { vertex: 1, members: vec![0, 2, 4] }];
        let src = OrbitSource::Graph { graph: &gog, members: &z3 };
        assert!(decide_orbit_hereditary(src, k(5), Side::Left).unwrap().hereditary);
    }
}
