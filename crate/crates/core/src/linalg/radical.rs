//! Jacobson radicals of algebras given by structure constants.
//!
//! Characteristic 0 uses the kernel of the trace form. In characteristic p
//! the trace form is refined by the functionals
//! `g_i(x) = (Tr(x̃^(p^i)) mod p^(i+1)) / p^i` on integer lifts of the
//! regular representation, which are linear on the previous ideal.

use thiserror::Error;

use super::field::Field;
use super::matrix::{nullspace, Echelon, Subspace, Vector};
use crate::group::FiniteGroup;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RadicalError {
    #[error("radical verification failed: {0}")]
    RadicalVerificationFailed(String),
}

/// A finite-dimensional algebra: `mult[i * dim + j]` is `b_i b_j` in the
/// basis `b`.
#[derive(Debug, Clone)]
pub struct StructAlgebra<F: Field> {
    pub dim: usize,
    pub mult: Vec<Vector<F>>,
}

impl<F: Field> StructAlgebra<F> {
    pub fn group_algebra(f: &F, g: &FiniteGroup) -> Self {
        let n = g.order();
        let mut mult = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let mut v = vec![f.zero(); n];
                v[g.mul(a, b)] = f.one();
                mult.push(v);
            }
        }
        StructAlgebra { dim: n, mult }
    }

    pub fn product(&self, f: &F, x: &[F::E], y: &[F::E]) -> Vector<F> {
        let n = self.dim;
        let mut out = vec![f.zero(); n];
        for (i, xi) in x.iter().enumerate() {
            if f.is_zero(xi) {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if f.is_zero(yj) {
                    continue;
                }
                let c = f.mul(xi, yj);
                for (o, s) in out.iter_mut().zip(&self.mult[i * n + j]) {
                    if !f.is_zero(s) {
                        f.add_mul_assign(o, &c, s);
                    }
                }
            }
        }
        out
    }

    fn unit_vector(&self, f: &F, i: usize) -> Vector<F> {
        let mut v = vec![f.zero(); self.dim];
        v[i] = f.one();
        v
    }

    /// Matrix of left multiplication by `x`, as rows.
    fn left_regular(&self, f: &F, x: &[F::E]) -> Vec<Vector<F>> {
        let n = self.dim;
        let mut m = vec![vec![f.zero(); n]; n];
        for l in 0..n {
            let col = self.product(f, x, &self.unit_vector(f, l));
            for k in 0..n {
                m[k][l] = col[k].clone();
            }
        }
        m
    }

    /// The quotient by a two-sided ideal, on the complement of the ideal's
    /// pivot columns.
    pub fn quotient(&self, f: &F, ideal: &Subspace<F>) -> StructAlgebra<F> {
        let mut e = Echelon::new(self.dim);
        for b in &ideal.basis {
            e.insert(f, b.clone());
        }
        let mut is_pivot = vec![false; self.dim];
        for &p in &ideal.pivots {
            is_pivot[p] = true;
        }
        let keep: Vec<usize> = (0..self.dim).filter(|&i| !is_pivot[i]).collect();
        let reduce = |v: &Vector<F>| -> Vector<F> {
            let mut w = v.clone();
            for (row, &p) in ideal.basis.iter().zip(&ideal.pivots) {
                if f.is_zero(&w[p]) {
                    continue;
                }
                let c = w[p].clone();
                for (x, y) in w.iter_mut().zip(row) {
                    f.sub_mul_assign(x, &c, y);
                }
            }
            keep.iter().map(|&i| w[i].clone()).collect()
        };
        let mut mult = Vec::with_capacity(keep.len() * keep.len());
        for &i in &keep {
            for &j in &keep {
                mult.push(reduce(&self.mult[i * self.dim + j]));
            }
        }
        StructAlgebra { dim: keep.len(), mult }
    }
}

/// The Jacobson radical, checked to be a nilpotent ideal with semisimple
/// quotient.
pub fn radical<F: Field>(f: &F, alg: &StructAlgebra<F>) -> Result<Subspace<F>, RadicalError> {
    let rad = radical_unverified(f, alg)?;
    verify_radical(f, alg, &rad)?;
    Ok(rad)
}

pub fn radical_unverified<F: Field>(f: &F, alg: &StructAlgebra<F>) -> Result<Subspace<F>, RadicalError> {
    let n = alg.dim;
    let mut ideal = Subspace::whole(f, n);
    if n == 0 {
        return Ok(ideal);
    }
    let p = f.characteristic();
    let steps = if p == 0 {
        0
    } else {
        let mut l = 0u32;
        let mut q = p as usize;
        while q <= n {
            q *= p as usize;
            l += 1;
        }
        l
    };
    for i in 0..=steps {
        if ideal.dim() == 0 {
            break;
        }
        let gvals: Vec<F::E> = ideal.basis.iter().map(|b| functional(f, alg, b, i)).collect::<Result<_, _>>()?;
        // rows: one condition per basis element a_t of the algebra
        let r = ideal.dim();
        let mut rows = vec![vec![f.zero(); r]; n];
        for (s, b) in ideal.basis.iter().enumerate() {
            for (t, row) in rows.iter_mut().enumerate() {
                let prod = alg.product(f, b, &alg.unit_vector(f, t));
                let coords = ideal.coordinates(&prod);
                let mut acc = f.zero();
                for (c, g) in coords.iter().zip(&gvals) {
                    f.add_mul_assign(&mut acc, c, g);
                }
                row[s] = acc;
            }
        }
        let kernel = nullspace(f, rows, r);
        let vectors: Vec<Vector<F>> = kernel.basis.iter().map(|lam| ideal.from_coordinates(f, lam)).collect();
        ideal = Subspace::span(f, n, vectors);
    }
    Ok(ideal)
}

/// `g_i(x)`; for i = 0 this is the trace of left multiplication.
fn functional<F: Field>(f: &F, alg: &StructAlgebra<F>, x: &[F::E], i: u32) -> Result<F::E, RadicalError> {
    let m = alg.left_regular(f, x);
    if i == 0 {
        let mut t = f.zero();
        for (k, row) in m.iter().enumerate() {
            t = f.add(&t, &row[k]);
        }
        return Ok(t);
    }
    let p = f.characteristic() as u128;
    let modulus = p.pow(i + 1);
    let n = m.len();
    let lifted: Vec<Vec<u128>> =
        m.iter().map(|row| row.iter().map(|e| f.residue(e).expect("prime field") as u128).collect()).collect();
    let mut power = lifted;
    for _ in 0..i {
        // raise to the p-th power
        let base = power.clone();
        for _ in 1..p {
            power = mat_mul_mod(&power, &base, modulus);
        }
    }
    let trace = (0..n).fold(0u128, |acc, k| (acc + power[k][k]) % modulus);
    let scale = p.pow(i);
    if trace % scale != 0 {
        return Err(RadicalError::RadicalVerificationFailed(format!(
            "trace functional of level {i} is not divisible by p^{i}"
        )));
    }
    Ok(f.from_i64(((trace / scale) % p) as i64))
}

fn mat_mul_mod(a: &[Vec<u128>], b: &[Vec<u128>], modulus: u128) -> Vec<Vec<u128>> {
    let n = a.len();
    let mut c = vec![vec![0u128; n]; n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i][k];
            if x == 0 {
                continue;
            }
            for j in 0..n {
                c[i][j] = (c[i][j] + x * b[k][j]) % modulus;
            }
        }
    }
    c
}

fn verify_radical<F: Field>(f: &F, alg: &StructAlgebra<F>, rad: &Subspace<F>) -> Result<(), RadicalError> {
    let fail = |m: &str| Err(RadicalError::RadicalVerificationFailed(m.to_string()));
    // two-sided ideal
    for b in &rad.basis {
        for t in 0..alg.dim {
            let e = alg.unit_vector(f, t);
            if !rad.contains(f, &alg.product(f, b, &e)) || !rad.contains(f, &alg.product(f, &e, b)) {
                return fail("radical is not an ideal");
            }
        }
    }
    // nilpotent
    let mut power = rad.clone();
    let mut steps = 0;
    while power.dim() > 0 {
        steps += 1;
        if steps > alg.dim + 1 {
            return fail("radical is not nilpotent");
        }
        let mut vectors = Vec::new();
        for x in &rad.basis {
            for y in &power.basis {
                vectors.push(alg.product(f, x, y));
            }
        }
        let next = Subspace::span(f, alg.dim, vectors);
        if next.dim() == power.dim() {
            return fail("radical is not nilpotent");
        }
        power = next;
    }
    let quotient = alg.quotient(f, rad);
    if radical_unverified(f, &quotient)?.dim() != 0 {
        return fail("quotient by the radical is not semisimple");
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{PrimeField, RationalField};

    fn rad_dim(g: &FiniteGroup, p: u64) -> usize {
        if p == 0 {
            let f = RationalField;
            radical(&f, &StructAlgebra::group_algebra(&f, g)).unwrap().dim()
        } else {
            let f = PrimeField::new(p);
            radical(&f, &StructAlgebra::group_algebra(&f, g)).unwrap().dim()
        }
    }

    #[test]
    fn f2_c2_radical_is_augmentation() {
        let f = PrimeField::new(2);
        let alg = StructAlgebra::group_algebra(&f, &FiniteGroup::cyclic(2));
        let r = radical(&f, &alg).unwrap();
        assert_eq!(r.dim(), 1);
        assert_eq!(r.basis[0], vec![1, 1]);
    }

    #[test]
    fn maschke_cases_are_zero() {
        assert_eq!(rad_dim(&FiniteGroup::cyclic(2), 3), 0);
        assert_eq!(rad_dim(&FiniteGroup::symmetric3(), 0), 0);
        assert_eq!(rad_dim(&FiniteGroup::symmetric3(), 5), 0);
        assert_eq!(rad_dim(&FiniteGroup::quaternion(), 3), 0);
    }

    #[test]
    fn modular_radicals() {
        // p-groups: augmentation ideal
        assert_eq!(rad_dim(&FiniteGroup::cyclic(4), 2), 3);
        assert_eq!(rad_dim(&FiniteGroup::dihedral(8), 2), 7);
        assert_eq!(rad_dim(&FiniteGroup::quaternion(), 2), 7);
        assert_eq!(rad_dim(&FiniteGroup::cyclic(9), 3), 8);
        // blocks: F2[S3] = F2[C2]-like block plus a 2x2 matrix block
        assert_eq!(rad_dim(&FiniteGroup::symmetric3(), 2), 1);
        assert_eq!(rad_dim(&FiniteGroup::symmetric3(), 3), 4);
        assert_eq!(rad_dim(&FiniteGroup::alternating4(), 2), 9);
        assert_eq!(rad_dim(&FiniteGroup::dihedral(12), 3), 8);
        assert_eq!(rad_dim(&FiniteGroup::dicyclic12(), 3), 8);
        assert_eq!(rad_dim(&FiniteGroup::cyclic(6), 2), 3);
    }
}
