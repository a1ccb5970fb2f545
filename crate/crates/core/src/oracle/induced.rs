//! Projectives as sums of modules induced from the automorphism groups.

use serde::Serialize;

use super::module::Module;
use super::{unit, CategoryAlgebra, OracleError};
use crate::category::{EICategory, Side};
use crate::group::{CoefficientField, FiniteGroup};
use crate::linalg::{nullspace, rank, Echelon, Field, StructAlgebra, Subspace, Vector};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InducedSummand {
    pub object: usize,
    pub dim: usize,
    /// dimension vector of `k𝒞 ⊗_{kG_c} P` by explicit tensoring
    pub induced_dims: Vec<usize>,
    /// the same from the rank of right multiplication by the idempotent
    pub idempotent_dims: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SyzygyCheck {
    pub degree: usize,
    pub dims: Vec<usize>,
    /// `Σ_c dimvec(k𝒞 ⊗_{kG_c} S_c(K))`
    pub induced_dims: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InducedReport {
    pub summands: Vec<InducedSummand>,
    pub syzygies: Vec<SyzygyCheck>,
    /// whether every summand has a one-dimensional endomorphism ring, which
    /// certifies that it is indecomposable
    pub fully_split: bool,
    pub mismatches: Vec<String>,
}

impl InducedReport {
    pub fn passes(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Requires every `kG_c` to be semisimple over `k`.
pub fn induced_projective_check(cat: &EICategory, k: CoefficientField) -> Result<InducedReport, OracleError> {
    let verdict = cat.decide_hereditary(k, Side::Left);
    if !verdict.hereditary {
        return Err(OracleError::ExactnessFailure("induced projective check needs a hereditary instance".to_string()));
    }
    crate::with_field!(k, f => check_in(cat, f))
}

fn check_in<F: Field>(cat: &EICategory, f: F) -> Result<InducedReport, OracleError> {
    let alg = CategoryAlgebra::new(cat, f.clone())?;
    let n = cat.object_count();
    let mut summands = Vec::new();
    let mut mismatches = Vec::new();
    let mut fully_split = true;
    for c in 0..n {
        let g = cat.aut_group(c);
        let (idempotents, complete) = split_regular(&f, g);
        fully_split &= complete;
        let mut total = vec![0; n];
        for e in &idempotents {
            let b = StructAlgebra::group_algebra(&f, g);
            let p = left_ideal(&f, &b, e);
            let rep = ideal_representation(&f, g, &p);
            let induced_dims: Vec<usize> = (0..n).map(|d| induced_dim(&f, cat, c, d, &rep)).collect();
            let idempotent_dims: Vec<usize> = (0..n).map(|d| right_multiplication_rank(&f, cat, c, d, e)).collect();
            if induced_dims != idempotent_dims {
                mismatches.push(format!(
                    "object {}: induced dimensions {induced_dims:?} differ from idempotent ranks {idempotent_dims:?}",
                    cat.object_label(c)
                ));
            }
            for d in 0..n {
                total[d] += induced_dims[d];
            }
            summands.push(InducedSummand { object: c, dim: p.dim(), induced_dims, idempotent_dims });
        }
        let expected: Vec<usize> = (0..n).map(|d| cat.hom(c, d).len()).collect();
        if total != expected {
            mismatches.push(format!(
                "object {}: summands induce {total:?} but A·e has dimensions {expected:?}",
                cat.object_label(c)
            ));
        }
    }
    // first syzygies of the resolution of A/J
    let mut syzygies = Vec::new();
    let mut m = alg.radical_module();
    for degree in 1..=2 {
        if m.total_dim() == 0 {
            break;
        }
        let dims = m.dims().to_vec();
        let mut induced_dims = vec![0; n];
        for c in 0..n {
            let (rep, dim_s) = layer_representation(&alg, &m, c);
            if dim_s == 0 {
                continue;
            }
            for (d, slot) in induced_dims.iter_mut().enumerate() {
                *slot += induced_dim(&f, cat, c, d, &rep);
            }
        }
        if induced_dims != dims {
            mismatches.push(format!("syzygy {degree}: dimensions {dims:?} but induced layers give {induced_dims:?}"));
        }
        syzygies.push(SyzygyCheck { degree, dims, induced_dims });
        let cover = m.cover(&alg, None);
        m = m.kernel_of_cover(&alg, &cover)?;
    }
    Ok(InducedReport { summands, syzygies, fully_split, mismatches })
}

/// `kG·e` as a subspace of `kG`.
fn left_ideal<F: Field>(f: &F, b: &StructAlgebra<F>, e: &[F::E]) -> Subspace<F> {
    let vectors = (0..b.dim).map(|g| b.product(f, &unit(f, b.dim, g), e)).collect();
    Subspace::span(f, b.dim, vectors)
}

/// Matrices (as column lists) of the group elements acting on a left ideal.
fn ideal_representation<F: Field>(f: &F, g: &FiniteGroup, p: &Subspace<F>) -> Vec<Vec<Vector<F>>> {
    let b = StructAlgebra::group_algebra(f, g);
    g.elements()
        .map(|h| p.basis.iter().map(|v| p.coordinates(&b.product(f, &unit(f, g.order(), h), v))).collect())
        .collect()
}

/// `dim k𝒞(c,d) ⊗_{kG_c} P` for the representation `rep` of `G_c` (columns
/// per group element), computed from the defining relations
/// `αh ⊗ p − α ⊗ hp` one right `G_c`-orbit of `𝒞(c,d)` at a time.
fn induced_dim<F: Field>(f: &F, cat: &EICategory, c: usize, d: usize, rep: &[Vec<Vector<F>>]) -> usize {
    let dim_p = rep.first().map_or(0, |m| m.len());
    if dim_p == 0 {
        return 0;
    }
    let hom = cat.hom(c, d);
    let mut done = vec![false; hom.len()];
    let position = |a: usize| hom.binary_search(&a).expect("morphism in hom-set");
    let mut total = 0;
    for start in 0..hom.len() {
        if done[start] {
            continue;
        }
        let mut orbit: Vec<usize> = cat.hom(c, c).iter().map(|&h| position(cat.compose(hom[start], h))).collect();
        orbit.sort_unstable();
        orbit.dedup();
        for &i in &orbit {
            done[i] = true;
        }
        let local = |i: usize| orbit.binary_search(&i).unwrap();
        let width = orbit.len() * dim_p;
        let mut relations = Echelon::new(width);
        for &i in &orbit {
            for (hi, &h) in cat.hom(c, c).iter().enumerate() {
                let ah = local(position(cat.compose(hom[i], h)));
                for s in 0..dim_p {
                    let mut v = vec![f.zero(); width];
                    v[ah * dim_p + s] = f.add(&v[ah * dim_p + s], &f.one());
                    for (t, x) in rep[hi][s].iter().enumerate() {
                        let slot = &mut v[local(i) * dim_p + t];
                        *slot = f.sub(slot, x);
                    }
                    relations.insert(f, v);
                }
            }
        }
        total += width - relations.rank();
    }
    total
}

/// `dim k𝒞(c,d)·e`.
fn right_multiplication_rank<F: Field>(f: &F, cat: &EICategory, c: usize, d: usize, e: &[F::E]) -> usize {
    let hom = cat.hom(c, d);
    let position = |a: usize| hom.binary_search(&a).unwrap();
    let rows: Vec<Vector<F>> = hom
        .iter()
        .map(|&a| {
            let mut v = vec![f.zero(); hom.len()];
            for (i, x) in e.iter().enumerate() {
                if f.is_zero(x) {
                    continue;
                }
                let slot = &mut v[position(cat.compose(a, cat.aut_morphism(c, i)))];
                *slot = f.add(slot, x);
            }
            v
        })
        .collect();
    rank(f, &rows)
}

/// `S_c(K) = K(c) / B_c(K)` with its `G_c`-action; `B_c(K)` is spanned by
/// images of non-invertible morphisms.
fn layer_representation<F: Field>(
    alg: &CategoryAlgebra<'_, F>,
    m: &Module<F>,
    c: usize,
) -> (Vec<Vec<Vector<F>>>, usize) {
    let f = &alg.field;
    let cat = alg.cat;
    let mut images = Vec::new();
    for &u in alg.unfactorisable_reps(c) {
        for i in 0..m.dim(cat.src(u)) {
            images.push(m.act_basis(alg, u, i));
        }
    }
    let lower = Subspace::span(f, m.dim(c), images);
    let complement = lower.complement();
    let rep = (0..cat.aut_group(c).order())
        .map(|h| {
            let a = cat.aut_morphism(c, h);
            complement.iter().map(|&i| lower.quotient_coordinates(f, &m.act_basis(alg, a, i))).collect()
        })
        .collect();
    (rep, complement.len())
}

/// Orthogonal idempotents `e_i` with `kG = ⊕ kG·e_i`, found by Fitting
/// decompositions of right multiplications. The flag reports whether every
/// `e·kG·e` is one-dimensional.
pub(crate) fn split_regular<F: Field>(f: &F, g: &FiniteGroup) -> (Vec<Vector<F>>, bool) {
    let b = StructAlgebra::group_algebra(f, g);
    let one = unit(f, g.order(), g.identity());
    let mut done = Vec::new();
    let mut queue = vec![one];
    while let Some(e) = queue.pop() {
        match split_once(f, g, &b, &e) {
            Some((e1, e2)) => {
                queue.push(e2);
                queue.push(e1);
            }
            None => done.push(e),
        }
    }
    done.reverse();
    let certified = done.iter().all(|e| {
        let corner: Vec<Vector<F>> =
            g.elements().map(|h| b.product(f, &b.product(f, e, &unit(f, g.order(), h)), e)).collect();
        rank(f, &corner) == 1
    });
    (done, certified)
}

fn split_once<F: Field>(f: &F, g: &FiniteGroup, b: &StructAlgebra<F>, e: &[F::E]) -> Option<(Vector<F>, Vector<F>)> {
    let ideal = left_ideal(f, b, e);
    let dim = ideal.dim();
    if dim <= 1 {
        return None;
    }
    for x in endomorphism_candidates(f, g, b, e) {
        // right multiplication by x on kG·e, in ideal coordinates
        let cols: Vec<Vector<F>> = ideal.basis.iter().map(|v| ideal.coordinates(&b.product(f, v, &x))).collect();
        for lambda in eigenvalue_candidates(f, g.order()) {
            let mut m: Vec<Vector<F>> = (0..dim).map(|r| (0..dim).map(|c| cols[c][r].clone()).collect()).collect();
            for (i, row) in m.iter_mut().enumerate() {
                row[i] = f.sub(&row[i], &lambda);
            }
            let power = matrix_power_at_least(f, &m, dim);
            let kernel = nullspace(f, power.clone(), dim);
            if kernel.dim() == 0 || kernel.dim() == dim {
                continue;
            }
            // image of the power, complementary to its kernel
            let columns: Vec<Vector<F>> = (0..dim).map(|c| (0..dim).map(|r| power[r][c].clone()).collect()).collect();
            let image = Subspace::span(f, dim, columns);
            // write e = e1 + e2 along kernel ⊕ image
            let coords_e = ideal.coordinates(e);
            let mut basis: Vec<Vector<F>> = kernel.basis.clone();
            basis.extend(image.basis.iter().cloned());
            let lam = solve(f, &basis, &coords_e)?;
            let k = kernel.dim();
            let mut e1 = vec![f.zero(); dim];
            for (coef, v) in lam[..k].iter().zip(&kernel.basis) {
                for (o, y) in e1.iter_mut().zip(v) {
                    f.add_mul_assign(o, coef, y);
                }
            }
            let e1 = ideal.from_coordinates(f, &e1);
            let e2: Vector<F> = e.iter().zip(&e1).map(|(a, b)| f.sub(a, b)).collect();
            return Some((e1, e2));
        }
    }
    None
}

/// Elements `e·x·e` whose right multiplications are endomorphisms of `kG·e`.
fn endomorphism_candidates<F: Field>(f: &F, g: &FiniteGroup, b: &StructAlgebra<F>, e: &[F::E]) -> Vec<Vector<F>> {
    let n = g.order();
    let mut xs: Vec<Vector<F>> = Vec::new();
    for h in g.elements() {
        xs.push(unit(f, n, h));
    }
    for h in g.elements() {
        let mut v = unit(f, n, h);
        v[g.inv(h)] = f.add(&v[g.inv(h)], &f.one());
        xs.push(v);
        for k in g.elements().filter(|&k| k > h).take(3) {
            let mut w = unit(f, n, h);
            w[k] = f.add(&w[k], &f.from_i64(2));
            xs.push(w);
        }
    }
    xs.into_iter().map(|x| b.product(f, &b.product(f, e, &x), e)).collect()
}

fn eigenvalue_candidates<F: Field>(f: &F, order: usize) -> Vec<F::E> {
    let p = f.characteristic();
    if p != 0 {
        return (0..p.min(64)).map(|v| f.from_i64(v as i64)).collect();
    }
    let bound = 3 * order as i64;
    let mut out = Vec::new();
    for den in 1..=4i64 {
        for num in -bound..=bound {
            if num.rem_euclid(den) == 0 && den > 1 {
                continue;
            }
            if den > 1 && num.abs() > 2 * den {
                continue;
            }
            out.push(f.mul(&f.from_i64(num), &f.inv(&f.from_i64(den))));
        }
    }
    out
}

fn matrix_power_at_least<F: Field>(f: &F, m: &[Vector<F>], exponent: usize) -> Vec<Vector<F>> {
    let mut power = m.to_vec();
    let mut e = 1;
    while e < exponent {
        power = mat_mul(f, &power, &power);
        e *= 2;
    }
    power
}

fn mat_mul<F: Field>(f: &F, a: &[Vector<F>], b: &[Vector<F>]) -> Vec<Vector<F>> {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    let mut c = vec![vec![f.zero(); m]; n];
    for i in 0..n {
        for (k, x) in a[i].iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            for j in 0..m {
                f.add_mul_assign(&mut c[i][j], x, &b[k][j]);
            }
        }
    }
    c
}

/// Solves `Σ λ_i basis_i = target` for a basis of the whole space.
fn solve<F: Field>(f: &F, basis: &[Vector<F>], target: &[F::E]) -> Option<Vector<F>> {
    let dim = target.len();
    let k = basis.len();
    // augmented rows: coordinates as unknowns
    let mut rows: Vec<Vector<F>> = (0..dim)
        .map(|r| {
            let mut row: Vector<F> = basis.iter().map(|v| v[r].clone()).collect();
            row.push(target[r].clone());
            row
        })
        .collect();
    let pivots = crate::linalg::rref(f, &mut rows);
    if pivots.len() != k || pivots.contains(&k) {
        return None;
    }
    Some(rows.iter().map(|r| r[k].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::examples::*;
    use crate::linalg::{PrimeField, RationalField};

    fn is_idempotent<F: Field>(f: &F, b: &StructAlgebra<F>, e: &[F::E]) -> bool {
        b.product(f, e, e) == e
    }

    #[test]
    fn splits_group_algebras() {
        let f = RationalField;
        for (g, expected) in [
            (FiniteGroup::cyclic(2), 2),
            (FiniteGroup::klein_four(), 4),
            (FiniteGroup::symmetric3(), 4),
            (FiniteGroup::cyclic(3), 2),
        ] {
            let (es, certified) = split_regular(&f, &g);
            assert_eq!(certified, g.order() != 3);
            let b = StructAlgebra::group_algebra(&f, &g);
            assert_eq!(es.len(), expected);
            assert!(es.iter().all(|e| is_idempotent(&f, &b, e)));
            let dims: usize = es.iter().map(|e| left_ideal(&f, &b, e).dim()).sum();
            assert_eq!(dims, g.order());
        }
        let p = PrimeField::new(7);
        let (es, _) = split_regular(&p, &FiniteGroup::cyclic(3));
        assert_eq!(es.len(), 3);
    }

    #[test]
    fn a2_induced_from_source() {
        let r = induced_projective_check(&a2(), CoefficientField::rationals()).unwrap();
        assert!(r.passes(), "{:?}", r.mismatches);
        let dims: Vec<_> = r.summands.iter().map(|s| s.induced_dims.clone()).collect();
        assert_eq!(dims, vec![vec![1, 1], vec![0, 1]]);
    }

    #[test]
    fn group_category_projectives() {
        let cat = group(&FiniteGroup::symmetric3());
        let r = induced_projective_check(&cat, CoefficientField::new(5).unwrap()).unwrap();
        assert!(r.passes());
        assert_eq!(r.summands.iter().map(|s| s.dim).sum::<usize>(), 6);
    }

    #[test]
    fn two_object_c2_example() {
        let cat = free_left_trivial_right();
        let r = induced_projective_check(&cat, CoefficientField::rationals()).unwrap();
        assert!(r.passes(), "{:?}", r.mismatches);
        assert_eq!(r.summands.len(), 4);
        assert!(!r.syzygies.is_empty());
    }

    #[test]
    fn refuses_non_hereditary() {
        assert!(induced_projective_check(&diamond(), CoefficientField::rationals()).is_err());
    }
}
