use super::module::{FreeModule, Module};
use super::{CategoryAlgebra, OracleError, MAX_DEGREE};
use crate::linalg::{rank, Field, Vector};

/// A free resolution `… → F_1 → F_0 → M`. Generator `j` of `F_i` (i ≥ 1)
/// maps to `differentials[i-1][j]`, a vector of `F_{i-1}` at the
/// generator's object.
#[derive(Debug, Clone)]
pub struct Resolution<F: Field> {
    pub frees: Vec<FreeModule>,
    /// images of the generators of `F_0` in `M`
    pub augmentation: Vec<Vector<F>>,
    pub differentials: Vec<Vec<Vector<F>>>,
}

impl<F: Field> Resolution<F> {
    /// Resolves `m` up to `F_length`.
    pub fn build(alg: &CategoryAlgebra<'_, F>, m: &Module<F>, length: usize) -> Result<Self, OracleError> {
        let cover = m.cover(alg, None);
        let mut frees = vec![cover.free.clone()];
        let augmentation = cover.images.clone();
        let mut differentials = Vec::new();
        let mut kernel = m.kernel_of_cover(alg, &cover)?;
        for _ in 0..length {
            let (free, parts) = kernel.parts().expect("kernels are submodules");
            let next = kernel.cover(alg, None);
            let images = next
                .images
                .iter()
                .zip(next.free.generators())
                .map(|(v, &c)| parts[c].from_coordinates(&alg.field, v))
                .collect();
            debug_assert_eq!(free, frees.last().unwrap());
            differentials.push(images);
            let k = kernel.kernel_of_cover(alg, &next)?;
            frees.push(next.free);
            kernel = k;
        }
        Ok(Resolution { frees, augmentation, differentials })
    }

    /// Matrix of `Hom(F_{i-1}, N) → Hom(F_i, N)` (i ≥ 1), as rows.
    fn hom_differential(&self, alg: &CategoryAlgebra<'_, F>, n: &Module<F>, i: usize) -> Vec<Vector<F>> {
        let f = &alg.field;
        let cat = alg.cat;
        let source = &self.frees[i - 1];
        let target = &self.frees[i];
        let col_offsets = offsets(source.generators(), n);
        let row_offsets = offsets(target.generators(), n);
        let ncols = col_offsets.last().copied().unwrap_or(0);
        let nrows = row_offsets.last().copied().unwrap_or(0);
        let mut rows = vec![vec![f.zero(); ncols]; nrows];
        for (j, &cj) in target.generators().iter().enumerate() {
            let image = &self.differentials[i - 1][j];
            for (l, &cl) in source.generators().iter().enumerate() {
                for &g in cat.hom(cl, cj) {
                    let coef = &image[source.generator_index(alg, l, g)];
                    if f.is_zero(coef) {
                        continue;
                    }
                    for s in 0..n.dim(cl) {
                        let v = n.act_basis(alg, g, s);
                        for (t, x) in v.iter().enumerate() {
                            if f.is_zero(x) {
                                continue;
                            }
                            let r = &mut rows[row_offsets[j] + t][col_offsets[l] + s];
                            f.add_mul_assign(r, coef, x);
                        }
                    }
                }
            }
        }
        rows
    }

    fn hom_dim(&self, n: &Module<F>, i: usize) -> usize {
        self.frees[i].generators().iter().map(|&c| n.dim(c)).sum()
    }
}

fn offsets<F: Field>(gens: &[usize], n: &Module<F>) -> Vec<usize> {
    let mut out = vec![0];
    for &c in gens {
        out.push(out.last().unwrap() + n.dim(c));
    }
    out
}

/// `dim Ext^i(M, N)` from a free resolution of `M`.
pub fn ext_dim<F: Field>(
    alg: &CategoryAlgebra<'_, F>,
    m: &Module<F>,
    n: &Module<F>,
    i: usize,
) -> Result<usize, OracleError> {
    if i > MAX_DEGREE {
        return Err(OracleError::BoundExceeded { requested: i, bound: MAX_DEGREE });
    }
    let res = Resolution::build(alg, m, i + 1)?;
    let f = &alg.field;
    let rank_of = |k: usize| -> usize {
        if k == 0 {
            0
        } else {
            rank(f, &res.hom_differential(alg, n, k))
        }
    };
    Ok(res.hom_dim(n, i) - rank_of(i + 1) - rank_of(i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::examples::*;
    use crate::group::FiniteGroup;
    use crate::linalg::{PrimeField, RationalField};

    #[test]
    fn hom_regular_regular() {
        let d = diamond();
        let alg = CategoryAlgebra::new(&d, RationalField).unwrap();
        let a = Module::regular(&alg);
        assert_eq!(ext_dim(&alg, &a, &a, 0).unwrap(), alg.dim());
        assert_eq!(ext_dim(&alg, &a, &a, 1).unwrap(), 0);
    }

    #[test]
    fn a2_ext_between_simples() {
        let a2 = a2();
        let alg = CategoryAlgebra::new(&a2, RationalField).unwrap();
        let s0 = Module::simple_trivial(&alg, 0);
        let s1 = Module::simple_trivial(&alg, 1);
        assert_eq!(ext_dim(&alg, &s0, &s1, 1).unwrap(), 1);
        assert_eq!(ext_dim(&alg, &s1, &s0, 1).unwrap(), 0);
        assert_eq!(ext_dim(&alg, &s0, &s0, 0).unwrap(), 1);
        assert_eq!(ext_dim(&alg, &s0, &s1, 2).unwrap(), 0);
    }

    #[test]
    fn f2c2_is_periodic() {
        let c2 = group(&FiniteGroup::cyclic(2));
        let alg = CategoryAlgebra::new(&c2, PrimeField::new(2)).unwrap();
        let k = Module::simple_trivial(&alg, 0);
        for i in 0..4 {
            assert_eq!(ext_dim(&alg, &k, &k, i).unwrap(), 1);
        }
    }

    #[test]
    fn diamond_ext2() {
        let d = diamond();
        let alg = CategoryAlgebra::new(&d, RationalField).unwrap();
        let bottom = Module::simple_trivial(&alg, 0);
        let top = Module::simple_trivial(&alg, 3);
        assert_eq!(ext_dim(&alg, &bottom, &top, 2).unwrap(), 1);
        assert_eq!(ext_dim(&alg, &bottom, &top, 1).unwrap(), 0);
    }

    #[test]
    fn degree_bound() {
        let a2 = a2();
        let alg = CategoryAlgebra::new(&a2, RationalField).unwrap();
        let s = Module::simple_trivial(&alg, 0);
        assert!(matches!(ext_dim(&alg, &s, &s, 99), Err(OracleError::BoundExceeded { .. })));
    }
}
