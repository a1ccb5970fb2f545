//! Dense and sparse elimination with first-nonzero pivoting.

use std::collections::HashMap;

use super::field::Field;

pub type Vector<F> = Vec<<F as Field>::E>;

/// Reduces `rows` to reduced row echelon form in place, dropping zero rows.
/// Returns the pivot column of each remaining row.
pub fn rref<F: Field>(f: &F, rows: &mut Vec<Vector<F>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !f.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, p);
        let inv = f.inv(&rows[r][c]);
        if !f.is_one(&inv) {
            for x in rows[r][c..].iter_mut() {
                *x = f.mul(x, &inv);
            }
        }
        let (head, tail) = rows.split_at_mut(r);
        let (pivot_row, rest) = tail.split_first_mut().unwrap();
        for other in head.iter_mut().chain(rest.iter_mut()) {
            if f.is_zero(&other[c]) {
                continue;
            }
            let factor = other[c].clone();
            for (x, y) in other[c..].iter_mut().zip(&pivot_row[c..]) {
                if !f.is_zero(y) {
                    f.sub_mul_assign(x, &factor, y);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank<F: Field>(f: &F, rows: &[Vector<F>]) -> usize {
    let mut e = Echelon::new(rows.first().map_or(0, |r| r.len()));
    for row in rows {
        e.insert(f, row.clone());
    }
    e.rank()
}

/// A subspace with a basis in which `basis[i][pivots[j]] = δ_ij`, so the
/// coordinates of a member are read off at the pivot positions.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace<F: Field> {
    pub ambient: usize,
    pub basis: Vec<Vector<F>>,
    pub pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn whole(f: &F, ambient: usize) -> Self {
        let basis =
            (0..ambient).map(|i| (0..ambient).map(|j| if i == j { f.one() } else { f.zero() }).collect()).collect();
        Subspace { ambient, basis, pivots: (0..ambient).collect() }
    }

    pub fn span(f: &F, ambient: usize, mut vectors: Vec<Vector<F>>) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient);
        }
        let pivots = rref(f, &mut vectors);
        Subspace { ambient, basis: vectors, pivots }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of a vector known to lie in the subspace.
    pub fn coordinates(&self, v: &[F::E]) -> Vector<F> {
        self.pivots.iter().map(|&p| v[p].clone()).collect()
    }

    pub fn from_coordinates(&self, f: &F, coords: &[F::E]) -> Vector<F> {
        let mut v = vec![f.zero(); self.ambient];
        for (c, b) in coords.iter().zip(&self.basis) {
            if f.is_zero(c) {
                continue;
            }
            for (x, y) in v.iter_mut().zip(b) {
                f.add_mul_assign(x, c, y);
            }
        }
        v
    }

    pub fn contains(&self, f: &F, v: &[F::E]) -> bool {
        let w = self.from_coordinates(f, &self.coordinates(v));
        w.as_slice() == v
    }

    /// Positions outside the pivots, indexing a basis of the quotient.
    pub fn complement(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ambient).filter(|&i| !is_pivot[i]).collect()
    }

    /// Coordinates of the class of `v` in the quotient by this subspace,
    /// relative to [`Subspace::complement`].
    pub fn quotient_coordinates(&self, f: &F, v: &[F::E]) -> Vector<F> {
        let mut w = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if f.is_zero(&w[p]) {
                continue;
            }
            let c = w[p].clone();
            for (x, y) in w.iter_mut().zip(row) {
                if !f.is_zero(y) {
                    f.sub_mul_assign(x, &c, y);
                }
            }
        }
        self.complement().into_iter().map(|i| w[i].clone()).collect()
    }
}

/// Null space of the matrix with the given rows (each of length `ncols`).
/// The basis vectors carry a 1 at their own free column and 0 at the others.
pub fn nullspace<F: Field>(f: &F, mut rows: Vec<Vector<F>>, ncols: usize) -> Subspace<F> {
    let pivots = if rows.is_empty() { Vec::new() } else { rref(f, &mut rows) };
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..ncols).filter(|&c| !is_pivot[c]).collect();
    let basis = free
        .iter()
        .map(|&j| {
            let mut v = vec![f.zero(); ncols];
            v[j] = f.one();
            for (row, &p) in rows.iter().zip(&pivots) {
                if !f.is_zero(&row[j]) {
                    v[p] = f.neg(&row[j]);
                }
            }
            v
        })
        .collect();
    Subspace { ambient: ncols, basis, pivots: free }
}

/// An incrementally built echelon basis used for membership tests.
#[derive(Debug, Clone)]
pub struct Echelon<F: Field> {
    ncols: usize,
    rows: Vec<Vector<F>>,
    pivots: Vec<usize>,
}

impl<F: Field> Echelon<F> {
    pub fn new(ncols: usize) -> Self {
        Echelon { ncols, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ncols
    }

    fn reduce(&self, f: &F, v: &mut [F::E]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if f.is_zero(&v[p]) {
                continue;
            }
            let factor = v[p].clone();
            for (x, y) in v[p..].iter_mut().zip(&row[p..]) {
                if !f.is_zero(y) {
                    f.sub_mul_assign(x, &factor, y);
                }
            }
        }
    }

    /// Returns true if `v` was independent of the current rows.
    pub fn insert(&mut self, f: &F, mut v: Vector<F>) -> bool {
        if self.is_full() {
            return false;
        }
        self.reduce(f, &mut v);
        let Some(p) = v.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&v[p]);
        for x in v[p..].iter_mut() {
            *x = f.mul(x, &inv);
        }
        self.rows.push(v);
        self.pivots.push(p);
        true
    }

    pub fn contains(&self, f: &F, v: &[F::E]) -> bool {
        if self.is_full() {
            return true;
        }
        let mut w = v.to_vec();
        self.reduce(f, &mut w);
        w.iter().all(|x| f.is_zero(x))
    }
}

/// Rank of a sparse matrix given by its columns (or rows), each a list of
/// `(index, value)` pairs.
pub struct SparseEchelon<F: Field> {
    rows: Vec<Vec<(usize, F::E)>>,
    pivot_row: HashMap<usize, usize>,
}

impl<F: Field> Default for SparseEchelon<F> {
    fn default() -> Self {
        SparseEchelon { rows: Vec::new(), pivot_row: HashMap::new() }
    }
}

impl<F: Field> SparseEchelon<F> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn insert(&mut self, f: &F, v: Vec<(usize, F::E)>) -> bool {
        let mut v: Vec<(usize, F::E)> = {
            let mut acc: std::collections::BTreeMap<usize, F::E> = std::collections::BTreeMap::new();
            for (i, x) in v {
                let e = acc.entry(i).or_insert_with(|| f.zero());
                *e = f.add(e, &x);
            }
            acc.into_iter().filter(|(_, x)| !f.is_zero(x)).collect()
        };
        while let Some((lead, lead_val)) = v.first().cloned() {
            let Some(&r) = self.pivot_row.get(&lead) else {
                let inv = f.inv(&lead_val);
                for (_, x) in v.iter_mut() {
                    *x = f.mul(x, &inv);
                }
                self.pivot_row.insert(lead, self.rows.len());
                self.rows.push(v);
                return true;
            };
            v = sparse_sub(f, &v, &lead_val, &self.rows[r]);
        }
        false
    }
}

/// `a - factor * b` for sorted sparse vectors.
fn sparse_sub<F: Field>(f: &F, a: &[(usize, F::E)], factor: &F::E, b: &[(usize, F::E)]) -> Vec<(usize, F::E)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, f.neg(&f.mul(factor, &b[j].1))));
            j += 1;
        } else {
            let mut x = a[i].1.clone();
            f.sub_mul_assign(&mut x, factor, &b[j].1);
            if !f.is_zero(&x) {
                out.push((a[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{PrimeField, RationalField};

    fn q(rows: &[&[i64]]) -> Vec<Vector<RationalField>> {
        rows.iter().map(|r| r.iter().map(|&x| RationalField.from_i64(x)).collect()).collect()
    }

    #[test]
    fn rref_and_rank() {
        let f = RationalField;
        let mut m = q(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let piv = rref(&f, &mut m);
        assert_eq!(piv, vec![0, 1]);
        assert_eq!(m.len(), 2);
        assert_eq!(rank(&f, &q(&[&[1, 1], &[1, -1]])), 2);
        let p2 = PrimeField::new(2);
        assert_eq!(rank(&p2, &[vec![1, 1], vec![1, 1]]), 1);
    }

    #[test]
    fn nullspace_basis() {
        let f = RationalField;
        let m = q(&[&[1, 2, 3], &[0, 1, 1]]);
        let ns = nullspace(&f, m.clone(), 3);
        assert_eq!(ns.dim(), 1);
        for v in &ns.basis {
            for row in &m {
                let dot = row.iter().zip(v).fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)));
                assert!(f.is_zero(&dot));
            }
        }
        let coords = ns.coordinates(&ns.basis[0]);
        assert_eq!(coords, vec![f.one()]);
        assert_eq!(nullspace(&f, Vec::new(), 2).dim(), 2);
    }

    #[test]
    fn sparse_rank_matches_dense() {
        let f = PrimeField::new(3);
        let mut s = SparseEchelon::new();
        assert!(s.insert(&f, vec![(0, 1), (2, 2)]));
        assert!(s.insert(&f, vec![(1, 1), (2, 1)]));
        assert!(!s.insert(&f, vec![(0, 2), (2, 1)]));
        assert!(!s.insert(&f, vec![(0, 1), (1, 1), (2, 0)]));
        assert_eq!(s.rank(), 2);
        let dense = vec![vec![1, 0, 2], vec![0, 1, 1], vec![2, 0, 1], vec![1, 1, 0]];
        assert_eq!(rank(&f, &dense), 2);
    }
}
