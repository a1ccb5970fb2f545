use std::collections::HashMap;

use serde::Serialize;

use crate::category::EICategory;
use crate::group::CoefficientField;
use crate::linalg::{Field, SparseEchelon};

/// Dimension and rank bookkeeping for `0 → A⊗_R Ā → A⊗_R A → A → 0` with
/// `R = ⊕ kG_c`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OmegaReport {
    pub dim_algebra: usize,
    pub dim_tensor: usize,
    pub dim_tensor_bar: usize,
    pub rank_multiplication: usize,
    pub rank_kappa: usize,
    pub dim_omega: usize,
    pub ufp: bool,
    /// `dim 𝒞⊗_R U⊗_R 𝒞`, computed when the category has UFP
    pub dim_unfactorisable_tensor: Option<usize>,
    pub failures: Vec<String>,
}

impl OmegaReport {
    pub fn passes(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Orbit labelling of composable pairs `(β, α)` through each object under
/// `(β, α) ↦ (βh⁻¹, hα)`.
struct PairOrbits {
    index: HashMap<(usize, usize), usize>,
    reps: Vec<(usize, usize)>,
}

impl PairOrbits {
    fn new(cat: &EICategory, keep: impl Fn(usize) -> bool) -> Self {
        let n = cat.object_count();
        let mut index = HashMap::new();
        let mut reps = Vec::new();
        for c in 0..n {
            let group = cat.hom(c, c);
            let ins: Vec<usize> = (0..n).flat_map(|x| cat.hom(x, c).iter().copied()).filter(|&a| keep(a)).collect();
            let outs: Vec<usize> = (0..n).flat_map(|y| cat.hom(c, y).iter().copied()).collect();
            for &a in &ins {
                for &b in &outs {
                    if index.contains_key(&(b, a)) {
                        continue;
                    }
                    let id = reps.len();
                    reps.push((b, a));
                    for &h in group {
                        let hinv = cat.inverse(h).expect("automorphism");
                        index.insert((cat.compose(b, hinv), cat.compose(h, a)), id);
                    }
                }
            }
        }
        PairOrbits { index, reps }
    }

    fn len(&self) -> usize {
        self.reps.len()
    }

    fn of(&self, b: usize, a: usize) -> usize {
        self.index[&(b, a)]
    }
}

/// Orbits of `(γ, u, β)` with `u` unfactorisable under the automorphism
/// groups at both ends of `u`.
fn unfactorisable_triples(cat: &EICategory) -> usize {
    let n = cat.object_count();
    let mut seen: std::collections::HashSet<(usize, usize, usize)> = std::collections::HashSet::new();
    let mut count = 0;
    for u in cat.unfactorisables() {
        let (s, t) = (cat.src(u), cat.dst(u));
        for x in 0..n {
            for &b in cat.hom(x, s) {
                for y in 0..n {
                    for &g in cat.hom(t, y) {
                        if seen.contains(&(g, u, b)) {
                            continue;
                        }
                        count += 1;
                        for &h in cat.hom(t, t) {
                            let hinv = cat.inverse(h).unwrap();
                            for &h2 in cat.hom(s, s) {
                                let h2inv = cat.inverse(h2).unwrap();
                                seen.insert((
                                    cat.compose(g, hinv),
                                    cat.compose(h, cat.compose(u, h2inv)),
                                    cat.compose(h2, b),
                                ));
                            }
                        }
                    }
                }
            }
        }
    }
    count
}

pub fn omega_verify(cat: &EICategory, k: CoefficientField) -> OmegaReport {
    crate::with_field!(k, f => omega_verify_in(cat, &f))
}

fn omega_verify_in<F: Field>(cat: &EICategory, f: &F) -> OmegaReport {
    let dim_a = cat.morphism_count();
    let tensor = PairOrbits::new(cat, |_| true);
    let bar = PairOrbits::new(cat, |a| !cat.is_iso(a));
    let mut failures = Vec::new();

    let mut m_rank = SparseEchelon::<F>::new();
    for &(b, a) in &tensor.reps {
        m_rank.insert(f, vec![(cat.compose(b, a), f.one())]);
    }
    let mut kappa_rank = SparseEchelon::<F>::new();
    for &(b, a) in &bar.reps {
        let x = cat.src(a);
        let ba = cat.compose(b, a);
        let (p, q) = (tensor.of(b, a), tensor.of(ba, cat.identity(x)));
        // m∘κ through the chosen orbit representatives
        let (b1, a1) = tensor.reps[p];
        let (b2, a2) = tensor.reps[q];
        if cat.compose(b1, a1) != cat.compose(b2, a2) {
            failures.push(format!("m∘κ is nonzero on the class of ({b}, {a})"));
        }
        let column = vec![(p, f.one()), (q, f.neg(&f.one()))];
        kappa_rank.insert(f, column);
    }
    let rank_m = m_rank.rank();
    let rank_kappa = kappa_rank.rank();
    if rank_m != dim_a {
        failures.push(format!("multiplication has rank {rank_m}, expected {dim_a}"));
    }
    if rank_kappa != bar.len() {
        failures.push(format!("κ has rank {rank_kappa} on a space of dimension {}", bar.len()));
    }
    if rank_kappa + rank_m != tensor.len() {
        failures.push(format!(
            "sequence not exact in the middle: rank κ + rank m = {} but dim A⊗A = {}",
            rank_kappa + rank_m,
            tensor.len()
        ));
    }
    let dim_omega = tensor.len() - rank_m;
    if dim_omega != tensor.len() - dim_a {
        failures.push("dim Ω¹ differs from dim A⊗A − dim A".to_string());
    }
    let ufp = cat.is_ufp().holds();
    let dim_u = ufp.then(|| unfactorisable_triples(cat));
    if let Some(du) = dim_u {
        if du != dim_omega {
            failures.push(format!("dim Ω¹ = {dim_omega} but dim 𝒞⊗U⊗𝒞 = {du}"));
        }
    }
    OmegaReport {
        dim_algebra: dim_a,
        dim_tensor: tensor.len(),
        dim_tensor_bar: bar.len(),
        rank_multiplication: rank_m,
        rank_kappa,
        dim_omega,
        ufp,
        dim_unfactorisable_tensor: dim_u,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::examples::*;
    use crate::group::FiniteGroup;

    fn k0() -> CoefficientField {
        CoefficientField::rationals()
    }

    #[test]
    fn group_has_no_forms() {
        let r = omega_verify(&group(&FiniteGroup::symmetric3()), k0());
        assert!(r.passes());
        assert_eq!(r.dim_omega, 0);
        assert_eq!(r.dim_tensor, 6);
    }

    #[test]
    fn a2_counts() {
        let r = omega_verify(&a2(), k0());
        assert!(r.passes(), "{:?}", r.failures);
        assert_eq!(r.dim_tensor, 4);
        assert_eq!(r.dim_omega, 1);
        assert_eq!(r.dim_unfactorisable_tensor, Some(1));
    }

    #[test]
    fn free_left_trivial_right_counts() {
        let e = free_left_trivial_right();
        let r = omega_verify(&e, CoefficientField::new(2).unwrap());
        assert!(r.passes(), "{:?}", r.failures);
        assert_eq!(e.unfactorisables().len(), 2);
        assert_eq!(r.dim_unfactorisable_tensor, Some(r.dim_omega));
    }

    #[test]
    fn diamond_is_exact_without_ufp() {
        let r = omega_verify(&diamond(), k0());
        assert!(r.passes());
        assert!(!r.ufp);
        assert_eq!(r.dim_unfactorisable_tensor, None);
    }
}
