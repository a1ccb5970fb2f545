//! Exact linear-algebra ground truth for category algebras: radical, free
//! resolutions, Ext, global dimension, the differential-forms sequence and
//! induced projectives.

mod ext;
mod gset;
mod induced;
mod module;
mod omega;

pub use ext::{ext_dim, Resolution};
pub use gset::{group_set_projectivity_check, GroupSet, GroupSetReport};
pub use induced::{induced_projective_check, InducedReport, InducedSummand, SyzygyCheck};
pub use module::{Cover, FreeModule, Module};
pub use omega::{omega_verify, OmegaReport};

use serde::Serialize;
use thiserror::Error;

use crate::category::{EICategory, Side};
use crate::group::CoefficientField;
use crate::linalg::{radical, Field, RadicalError, StructAlgebra, Subspace, Vector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Radical(#[from] RadicalError),
    #[error("homological degree {requested} exceeds the bound {bound}")]
    BoundExceeded { requested: usize, bound: usize },
    #[error("exactness failure: {0}")]
    ExactnessFailure(String),
    #[error("algebra dimension {dim} exceeds the limit {limit}")]
    DimensionLimit { dim: usize, limit: usize },
}

/// Largest homological degree accepted by [`ext_dim`] and
/// [`CategoryAlgebra::gldim_upto`].
pub const MAX_DEGREE: usize = 12;

/// The category algebra `k𝒞` with basis the morphisms of `𝒞`.
#[derive(Debug, Clone)]
pub struct CategoryAlgebra<'a, F: Field> {
    pub cat: &'a EICategory,
    pub field: F,
    /// position of each morphism inside its hom-set
    pos: Vec<usize>,
    /// `rad(kG_c)` in coordinates indexed by elements of `G_c`
    group_radicals: Vec<Subspace<F>>,
    /// right `G_c`-orbit representatives of unfactorisables ending at each object
    unfactorisable_reps: Vec<Vec<usize>>,
}

/// `gldim_upto` result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GlobalDimension {
    Exactly(usize),
    Exceeds(usize),
}

impl std::fmt::Display for GlobalDimension {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GlobalDimension::Exactly(n) => write!(f, "{n}"),
            GlobalDimension::Exceeds(n) => write!(f, ">{n}"),
        }
    }
}

impl<'a, F: Field> CategoryAlgebra<'a, F> {
    pub fn new(cat: &'a EICategory, field: F) -> Result<Self, OracleError> {
        let n = cat.object_count();
        let mut pos = vec![0; cat.morphism_count()];
        for c in 0..n {
            for d in 0..n {
                for (i, &g) in cat.hom(c, d).iter().enumerate() {
                    pos[g] = i;
                }
            }
        }
        let mut group_radicals = Vec::with_capacity(n);
        for c in 0..n {
            let g = cat.aut_group(c);
            let rad = if field.characteristic() != 0 && (g.order() as u64).is_multiple_of(field.characteristic()) {
                radical(&field, &StructAlgebra::group_algebra(&field, g))?
            } else {
                Subspace::zero(g.order())
            };
            group_radicals.push(rad);
        }
        let mut unfactorisable_reps = vec![Vec::new(); n];
        let mut covered = vec![false; cat.morphism_count()];
        for u in cat.unfactorisables() {
            if covered[u] {
                continue;
            }
            let c = cat.src(u);
            for &h in cat.hom(c, c) {
                covered[cat.compose(u, h)] = true;
            }
            unfactorisable_reps[cat.dst(u)].push(u);
        }
        Ok(CategoryAlgebra { cat, field, pos, group_radicals, unfactorisable_reps })
    }

    pub fn dim(&self) -> usize {
        self.cat.morphism_count()
    }

    /// Product of basis elements: the composite, or `None` (zero).
    pub fn product(&self, g: usize, f: usize) -> Option<usize> {
        self.cat.try_compose(g, f)
    }

    /// The object idempotent `e_c`.
    pub fn idempotent(&self, c: usize) -> usize {
        self.cat.identity(c)
    }

    pub fn hom_position(&self, g: usize) -> usize {
        self.pos[g]
    }

    pub fn group_radical(&self, c: usize) -> &Subspace<F> {
        &self.group_radicals[c]
    }

    /// `dim kG_c / rad(kG_c)`.
    pub fn top_dim(&self, c: usize) -> usize {
        self.cat.aut_group(c).order() - self.group_radicals[c].dim()
    }

    pub fn unfactorisable_reps(&self, d: usize) -> &[usize] {
        &self.unfactorisable_reps[d]
    }

    pub fn to_struct_algebra(&self) -> StructAlgebra<F> {
        let n = self.dim();
        let f = &self.field;
        let mut mult = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let mut v = vec![f.zero(); n];
                if let Some(ab) = self.product(a, b) {
                    v[ab] = f.one();
                }
                mult.push(v);
            }
        }
        StructAlgebra { dim: n, mult }
    }

    /// The radical: non-invertible morphisms together with the radicals of
    /// the group algebras, as a subspace of the algebra.
    pub fn radical(&self) -> Subspace<F> {
        let f = &self.field;
        let n = self.dim();
        let mut basis = Vec::new();
        let mut pivots = Vec::new();
        for g in self.cat.non_invertibles() {
            let mut v = vec![f.zero(); n];
            v[g] = f.one();
            basis.push(v);
            pivots.push(g);
        }
        for c in 0..self.cat.object_count() {
            let rad = &self.group_radicals[c];
            for (b, &p) in rad.basis.iter().zip(&rad.pivots) {
                let mut v = vec![f.zero(); n];
                for (i, x) in b.iter().enumerate() {
                    v[self.cat.aut_morphism(c, i)] = x.clone();
                }
                basis.push(v);
                pivots.push(self.cat.aut_morphism(c, p));
            }
        }
        Subspace { ambient: n, basis, pivots }
    }

    /// The radical as a submodule of the regular module.
    pub fn radical_module(&self) -> Module<F> {
        let free = FreeModule::new(self, (0..self.cat.object_count()).collect());
        let f = &self.field;
        let mut parts = Vec::new();
        for d in 0..self.cat.object_count() {
            let amb = free.dim(d);
            let mut basis = Vec::new();
            let mut pivots = Vec::new();
            for c in 0..self.cat.object_count() {
                if c == d {
                    continue;
                }
                for &g in self.cat.hom(c, d) {
                    let i = free.index(self, d, c, g);
                    let mut v = vec![f.zero(); amb];
                    v[i] = f.one();
                    basis.push(v);
                    pivots.push(i);
                }
            }
            let rad = &self.group_radicals[d];
            for (b, &p) in rad.basis.iter().zip(&rad.pivots) {
                let mut v = vec![f.zero(); amb];
                for (i, x) in b.iter().enumerate() {
                    v[free.index(self, d, d, self.cat.aut_morphism(d, i))] = x.clone();
                }
                basis.push(v);
                pivots.push(free.index(self, d, d, self.cat.aut_morphism(d, p)));
            }
            parts.push(Subspace { ambient: amb, basis, pivots });
        }
        Module::submodule(free, parts)
    }

    /// `A/J` as an explicit module, a direct sum of `kG_c / rad(kG_c)`.
    pub fn semisimple_top(&self) -> Module<F> {
        let cat = self.cat;
        let f = &self.field;
        let n = cat.object_count();
        let mut dims = vec![0; n];
        let mut keep: Vec<Vec<usize>> = Vec::new();
        let mut quots = Vec::new();
        for c in 0..n {
            let g = cat.aut_group(c);
            let alg = StructAlgebra::group_algebra(f, g);
            let q = alg.quotient(f, &self.group_radicals[c]);
            let mut is_pivot = vec![false; g.order()];
            for &p in &self.group_radicals[c].pivots {
                is_pivot[p] = true;
            }
            keep.push((0..g.order()).filter(|&i| !is_pivot[i]).collect());
            dims[c] = q.dim;
            quots.push(q);
        }
        let mut actions = Vec::with_capacity(cat.morphism_count());
        for a in 0..cat.morphism_count() {
            let (s, t) = (cat.src(a), cat.dst(a));
            if s != t {
                actions.push(vec![vec![f.zero(); dims[t]]; dims[s]]);
                continue;
            }
            // left multiplication by the group element, reduced modulo the radical
            let q = &quots[s];
            let elem = cat.aut_element(a);
            let mut cols = Vec::with_capacity(dims[s]);
            for (j, _) in keep[s].iter().enumerate() {
                let mut coords = vec![f.zero(); dims[s]];
                // the image of the group element in the quotient
                let x = self.reduce_group_element(s, elem, &keep[s]);
                let e_j = unit(f, dims[s], j);
                let prod = q_product(f, q, &x, &e_j);
                coords.clone_from(&prod);
                cols.push(coords);
            }
            actions.push(cols);
        }
        Module::explicit(dims, actions)
    }

    fn reduce_group_element(&self, c: usize, elem: usize, keep: &[usize]) -> Vector<F> {
        let f = &self.field;
        let rad = &self.group_radicals[c];
        let mut w = unit(f, rad.ambient, elem);
        for (row, &p) in rad.basis.iter().zip(&rad.pivots) {
            if f.is_zero(&w[p]) {
                continue;
            }
            let coef = w[p].clone();
            for (x, y) in w.iter_mut().zip(row) {
                f.sub_mul_assign(x, &coef, y);
            }
        }
        keep.iter().map(|&i| w[i].clone()).collect()
    }

    /// Projective dimension of `A/J` (the global dimension), or
    /// `Exceeds(bound)`.
    pub fn gldim_upto(&self, bound: usize) -> Result<GlobalDimension, OracleError> {
        self.gldim_upto_ordered(bound, None)
    }

    /// As [`CategoryAlgebra::gldim_upto`], with cover generators tried in
    /// an order shuffled by `seed`.
    pub fn gldim_upto_ordered(&self, bound: usize, seed: Option<u64>) -> Result<GlobalDimension, OracleError> {
        if bound > MAX_DEGREE {
            return Err(OracleError::BoundExceeded { requested: bound, bound: MAX_DEGREE });
        }
        let mut m = self.radical_module();
        if m.total_dim() == 0 {
            return Ok(GlobalDimension::Exactly(0));
        }
        let mut rng = seed.map(<rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64);
        let mut top_m = m.top_dim(self);
        for i in 1..=bound {
            let cover = m.cover(self, rng.as_mut());
            let kernel = m.kernel_of_cover(self, &cover)?;
            let top_k = kernel.top_dim(self);
            let top_f: usize = cover.free.generators().iter().map(|&c| self.top_dim(c)).sum();
            let ext1 = (top_k + top_m) as i64 - top_f as i64;
            if ext1 < 0 {
                return Err(OracleError::ExactnessFailure(format!("negative Ext dimension at degree {i}")));
            }
            if ext1 == 0 {
                return Ok(GlobalDimension::Exactly(i));
            }
            m = kernel;
            top_m = top_k;
        }
        Ok(GlobalDimension::Exceeds(bound))
    }

    /// Global dimension at most one.
    pub fn is_hereditary(&self) -> Result<bool, OracleError> {
        Ok(matches!(self.gldim_upto(1)?, GlobalDimension::Exactly(d) if d <= 1))
    }
}

pub(crate) fn unit<F: Field>(f: &F, n: usize, i: usize) -> Vector<F> {
    let mut v = vec![f.zero(); n];
    v[i] = f.one();
    v
}

fn q_product<F: Field>(f: &F, q: &StructAlgebra<F>, x: &[F::E], y: &[F::E]) -> Vector<F> {
    q.product(f, x, y)
}

/// Oracle hereditarity of the category algebra over `k` on one side.
pub fn is_hereditary_oracle(cat: &EICategory, k: CoefficientField, side: Side) -> Result<bool, OracleError> {
    let op;
    let target = match side {
        Side::Left => cat,
        Side::Right => {
            op = cat.opposite();
            &op
        }
    };
    crate::with_field!(k, f => CategoryAlgebra::new(target, f)?.is_hereditary())
}

/// Oracle global dimension bound over `k` on one side.
pub fn gldim_upto(
    cat: &EICategory,
    k: CoefficientField,
    side: Side,
    bound: usize,
) -> Result<GlobalDimension, OracleError> {
    let op;
    let target = match side {
        Side::Left => cat,
        Side::Right => {
            op = cat.opposite();
            &op
        }
    };
    crate::with_field!(k, f => CategoryAlgebra::new(target, f)?.gldim_upto(bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::examples::*;
    use crate::group::FiniteGroup;
    use crate::linalg::{PrimeField, RationalField};

    fn k(p: u64) -> CoefficientField {
        CoefficientField::new(p).unwrap()
    }

    #[test]
    fn algebra_dims() {
        let c2 = group(&FiniteGroup::cyclic(2));
        assert_eq!(CategoryAlgebra::new(&c2, RationalField).unwrap().dim(), 2);
        let a2 = a2();
        let alg = CategoryAlgebra::new(&a2, RationalField).unwrap();
        assert_eq!(alg.dim(), 3);
        let d = diamond();
        // 4 identities, 4 covering arrows, one composite
        assert_eq!(CategoryAlgebra::new(&d, RationalField).unwrap().dim(), 9);
    }

    #[test]
    fn a2_is_upper_triangular() {
        // e_0, e_1, arrow a: the only nonzero products are e_i e_i, a e_0, e_1 a
        let a2 = a2();
        let alg = CategoryAlgebra::new(&a2, RationalField).unwrap();
        let arrow = a2.hom(0, 1)[0];
        let (e0, e1) = (a2.identity(0), a2.identity(1));
        let mut nonzero = Vec::new();
        for x in 0..3 {
            for y in 0..3 {
                if let Some(z) = alg.product(x, y) {
                    nonzero.push((x, y, z));
                }
            }
        }
        nonzero.sort();
        let mut expected = vec![(e0, e0, e0), (e1, e1, e1), (arrow, e0, arrow), (e1, arrow, arrow)];
        expected.sort();
        assert_eq!(nonzero, expected);
    }

    #[test]
    fn radicals() {
        let a2 = a2();
        let alg = CategoryAlgebra::new(&a2, RationalField).unwrap();
        let j = alg.radical();
        assert_eq!(j.dim(), 1);
        let c2 = group(&FiniteGroup::cyclic(2));
        let alg = CategoryAlgebra::new(&c2, PrimeField::new(2)).unwrap();
        assert_eq!(alg.radical().basis, vec![vec![1, 1]]);
        let alg = CategoryAlgebra::new(&c2, PrimeField::new(3)).unwrap();
        assert_eq!(alg.radical().dim(), 0);
    }

    #[test]
    fn global_dimensions() {
        let a2 = a2();
        assert_eq!(gldim_upto(&a2, k(0), Side::Left, 3).unwrap(), GlobalDimension::Exactly(1));
        let d = diamond();
        assert_eq!(gldim_upto(&d, k(0), Side::Left, 3).unwrap(), GlobalDimension::Exactly(2));
        let c2 = group(&FiniteGroup::cyclic(2));
        assert_eq!(gldim_upto(&c2, k(2), Side::Left, 3).unwrap(), GlobalDimension::Exceeds(3));
        assert_eq!(gldim_upto(&c2, k(3), Side::Left, 3).unwrap(), GlobalDimension::Exactly(0));
        let a3 = a3();
        assert_eq!(gldim_upto(&a3, k(5), Side::Right, 3).unwrap(), GlobalDimension::Exactly(1));
    }

    #[test]
    fn hereditary_oracle() {
        assert!(is_hereditary_oracle(&a2(), k(0), Side::Left).unwrap());
        assert!(!is_hereditary_oracle(&diamond(), k(0), Side::Left).unwrap());
        assert!(is_hereditary_oracle(&group(&FiniteGroup::cyclic(2)), k(3), Side::Left).unwrap());
        let e = free_left_trivial_right();
        assert!(!is_hereditary_oracle(&e, k(2), Side::Left).unwrap());
        assert!(is_hereditary_oracle(&e, k(0), Side::Left).unwrap());
        assert!(is_hereditary_oracle(&e, k(0), Side::Right).unwrap());
    }

    #[test]
    fn gldim_ignores_generator_order() {
        let e = free_left_trivial_right();
        let s3 = group(&FiniteGroup::symmetric3());
        for cat in [diamond(), e, s3] {
            let f = PrimeField::new(3);
            let alg = CategoryAlgebra::new(&cat, f).unwrap();
            let base = alg.gldim_upto(4).unwrap();
            for seed in 0..5 {
                assert_eq!(alg.gldim_upto_ordered(4, Some(seed)).unwrap(), base);
            }
        }
    }
}
