use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;

use super::{unit, CategoryAlgebra, OracleError};
use crate::linalg::{nullspace, Echelon, Field, Subspace, Vector};

/// `⊕_j A·e_{c_j}`. The basis of the component at `d` lists, generator by
/// generator, the morphisms `c_j → d` in hom-set order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeModule {
    gens: Vec<usize>,
    /// `offsets[d][j]`
    offsets: Vec<Vec<usize>>,
    dims: Vec<usize>,
}

impl FreeModule {
    pub fn new<F: Field>(alg: &CategoryAlgebra<'_, F>, gens: Vec<usize>) -> Self {
        let n = alg.cat.object_count();
        let mut offsets = vec![Vec::with_capacity(gens.len()); n];
        let mut dims = vec![0; n];
        for d in 0..n {
            for &c in &gens {
                offsets[d].push(dims[d]);
                dims[d] += alg.cat.hom(c, d).len();
            }
        }
        FreeModule { gens, offsets, dims }
    }

    pub fn generators(&self) -> &[usize] {
        &self.gens
    }

    pub fn dim(&self, d: usize) -> usize {
        self.dims[d]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Index of `(γ, j)` at object `d` for the first generator at `c`.
    pub(crate) fn index<F: Field>(&self, alg: &CategoryAlgebra<'_, F>, d: usize, c: usize, g: usize) -> usize {
        let j = self.gens.iter().position(|&x| x == c).expect("generator");
        self.offsets[d][j] + alg.hom_position(g)
    }

    pub(crate) fn generator_index<F: Field>(&self, alg: &CategoryAlgebra<'_, F>, j: usize, g: usize) -> usize {
        self.offsets[alg.cat.dst(g)][j] + alg.hom_position(g)
    }

    /// `α · v` for `v` in the component at `src(α)`.
    pub fn act<F: Field>(&self, alg: &CategoryAlgebra<'_, F>, a: usize, v: &[F::E]) -> Vector<F> {
        let f = &alg.field;
        let cat = alg.cat;
        let (c, d) = (cat.src(a), cat.dst(a));
        let mut out = vec![f.zero(); self.dims[d]];
        for (j, &cj) in self.gens.iter().enumerate() {
            let from = self.offsets[c][j];
            for (i, &g) in cat.hom(cj, c).iter().enumerate() {
                let x = &v[from + i];
                if f.is_zero(x) {
                    continue;
                }
                let t = self.offsets[d][j] + alg.hom_position(cat.compose(a, g));
                out[t] = f.add(&out[t], x);
            }
        }
        out
    }
}

#[derive(Debug, Clone)]
enum Kind<F: Field> {
    /// `actions[α][i]` = image of basis vector `i` of `M(src α)`
    Explicit(Vec<Vec<Vector<F>>>),
    Free(FreeModule),
    Sub(FreeModule, Vec<Subspace<F>>),
}

/// A finite-dimensional left module, described per object.
#[derive(Debug, Clone)]
pub struct Module<F: Field> {
    dims: Vec<usize>,
    kind: Kind<F>,
}

/// A surjection from a free module: generator `j` sits at object
/// `free.generators()[j]` and maps to `images[j]`.
#[derive(Debug, Clone)]
pub struct Cover<F: Field> {
    pub free: FreeModule,
    pub images: Vec<Vector<F>>,
}

impl<F: Field> Module<F> {
    pub fn explicit(dims: Vec<usize>, actions: Vec<Vec<Vector<F>>>) -> Self {
        Module { dims, kind: Kind::Explicit(actions) }
    }

    pub fn free(free: FreeModule) -> Self {
        Module { dims: free.dims.clone(), kind: Kind::Free(free) }
    }

    pub fn submodule(free: FreeModule, parts: Vec<Subspace<F>>) -> Self {
        Module { dims: parts.iter().map(|p| p.dim()).collect(), kind: Kind::Sub(free, parts) }
    }

    /// The regular module `A`.
    pub fn regular(alg: &CategoryAlgebra<'_, F>) -> Self {
        Self::free(FreeModule::new(alg, (0..alg.cat.object_count()).collect()))
    }

    /// `A·e_c`.
    pub fn projective(alg: &CategoryAlgebra<'_, F>, c: usize) -> Self {
        Self::free(FreeModule::new(alg, vec![c]))
    }

    /// The one-dimensional module at `c` with `G_c` acting trivially.
    pub fn simple_trivial(alg: &CategoryAlgebra<'_, F>, c: usize) -> Self {
        let f = &alg.field;
        let n = alg.cat.object_count();
        let mut dims = vec![0; n];
        dims[c] = 1;
        let actions = (0..alg.cat.morphism_count())
            .map(|a| {
                let (s, t) = (alg.cat.src(a), alg.cat.dst(a));
                if s == c && t == c {
                    vec![vec![f.one()]]
                } else {
                    vec![vec![f.zero(); dims[t]]; dims[s]]
                }
            })
            .collect();
        Self::explicit(dims, actions)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, d: usize) -> usize {
        self.dims[d]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Embedding into the ambient free module, when it is a submodule.
    pub fn parts(&self) -> Option<(&FreeModule, &[Subspace<F>])> {
        match &self.kind {
            Kind::Sub(free, parts) => Some((free, parts)),
            _ => None,
        }
    }

    /// `α · v` in the component coordinates.
    pub fn act(&self, alg: &CategoryAlgebra<'_, F>, a: usize, v: &[F::E]) -> Vector<F> {
        let f = &alg.field;
        let (c, d) = (alg.cat.src(a), alg.cat.dst(a));
        match &self.kind {
            Kind::Explicit(actions) => {
                let mut out = vec![f.zero(); self.dims[d]];
                for (x, col) in v.iter().zip(&actions[a]) {
                    if f.is_zero(x) {
                        continue;
                    }
                    for (o, y) in out.iter_mut().zip(col) {
                        f.add_mul_assign(o, x, y);
                    }
                }
                out
            }
            Kind::Free(free) => free.act(alg, a, v),
            Kind::Sub(free, parts) => {
                let lifted = parts[c].from_coordinates(f, v);
                parts[d].coordinates(&free.act(alg, a, &lifted))
            }
        }
    }

    /// `α · b_i` for basis vector `i` of `M(src α)`.
    pub fn act_basis(&self, alg: &CategoryAlgebra<'_, F>, a: usize, i: usize) -> Vector<F> {
        match &self.kind {
            Kind::Explicit(actions) => actions[a][i].clone(),
            Kind::Sub(free, parts) => {
                let (c, d) = (alg.cat.src(a), alg.cat.dst(a));
                parts[d].coordinates(&free.act(alg, a, &parts[c].basis[i]))
            }
            Kind::Free(free) => {
                let c = alg.cat.src(a);
                free.act(alg, a, &unit(&alg.field, free.dims[c], i))
            }
        }
    }

    /// `(JM)(d)` as an echelon basis in the coordinates of `M(d)`.
    pub fn radical_part(&self, alg: &CategoryAlgebra<'_, F>, d: usize) -> Echelon<F> {
        let f = &alg.field;
        let mut e = Echelon::new(self.dims[d]);
        for &u in alg.unfactorisable_reps(d) {
            for i in 0..self.dims[alg.cat.src(u)] {
                if e.is_full() {
                    return e;
                }
                e.insert(f, self.act_basis(alg, u, i));
            }
        }
        let rad = alg.group_radical(d);
        if rad.dim() > 0 {
            // images of basis vectors under each group element
            let group: Vec<Vec<Vector<F>>> = (0..alg.cat.aut_group(d).order())
                .map(|g| {
                    let a = alg.cat.aut_morphism(d, g);
                    (0..self.dims[d]).map(|i| self.act_basis(alg, a, i)).collect()
                })
                .collect();
            for r in &rad.basis {
                for i in 0..self.dims[d] {
                    let mut v = vec![f.zero(); self.dims[d]];
                    for (g, coef) in r.iter().enumerate() {
                        if f.is_zero(coef) {
                            continue;
                        }
                        for (o, y) in v.iter_mut().zip(&group[g][i]) {
                            f.add_mul_assign(o, coef, y);
                        }
                    }
                    e.insert(f, v);
                }
            }
        }
        e
    }

    /// `dim M/JM`.
    pub fn top_dim(&self, alg: &CategoryAlgebra<'_, F>) -> usize {
        (0..self.dims.len()).map(|d| self.dims[d] - self.radical_part(alg, d).rank()).sum()
    }

    /// Greedy generators: basis vectors whose `kG_d`-span is independent of
    /// `JM` and the previous choices, tried in basis order or shuffled.
    pub fn cover(&self, alg: &CategoryAlgebra<'_, F>, mut rng: Option<&mut ChaCha8Rng>) -> Cover<F> {
        let f = &alg.field;
        let mut gens = Vec::new();
        let mut images = Vec::new();
        for d in 0..self.dims.len() {
            if self.dims[d] == 0 {
                continue;
            }
            let mut w = self.radical_part(alg, d);
            let mut order: Vec<usize> = (0..self.dims[d]).collect();
            if let Some(r) = rng.as_deref_mut() {
                order.shuffle(r);
            }
            for i in order {
                if w.is_full() {
                    break;
                }
                let v = unit(f, self.dims[d], i);
                if w.contains(f, &v) {
                    continue;
                }
                for &g in alg.cat.hom(d, d) {
                    w.insert(f, self.act_basis(alg, g, i));
                }
                gens.push(d);
                images.push(v);
            }
        }
        Cover { free: FreeModule::new(alg, gens), images }
    }

    /// Kernel of a cover, as a submodule of its free module.
    pub fn kernel_of_cover(&self, alg: &CategoryAlgebra<'_, F>, cover: &Cover<F>) -> Result<Module<F>, OracleError> {
        let f = &alg.field;
        let n = self.dims.len();
        let mut parts = Vec::with_capacity(n);
        for d in 0..n {
            let cols = cover.free.dim(d);
            let mut rows = vec![vec![f.zero(); cols]; self.dims[d]];
            for (j, &c) in cover.free.generators().iter().enumerate() {
                let basis_index = cover.images[j].iter().position(|x| !f.is_zero(x));
                for &g in alg.cat.hom(c, d) {
                    let col = cover.free.generator_index(alg, j, g);
                    let image = match basis_index {
                        Some(i)
                            if cover.images[j].iter().filter(|x| !f.is_zero(x)).count() == 1
                                && f.is_one(&cover.images[j][i]) =>
                        {
                            self.act_basis(alg, g, i)
                        }
                        _ => self.act(alg, g, &cover.images[j]),
                    };
                    for (r, x) in rows.iter_mut().zip(image) {
                        r[col] = x;
                    }
                }
            }
            let kernel = nullspace(f, rows, cols);
            if cols - kernel.dim() != self.dims[d] {
                return Err(OracleError::ExactnessFailure(format!(
                    "cover is not surjective at object {}",
                    alg.cat.object_label(d)
                )));
            }
            parts.push(kernel);
        }
        Ok(Module::submodule(cover.free.clone(), parts))
    }

    /// Whether `Ext¹(M, A/J) = 0`, i.e. `M` is projective.
    pub fn is_projective(&self, alg: &CategoryAlgebra<'_, F>) -> Result<bool, OracleError> {
        if self.total_dim() == 0 {
            return Ok(true);
        }
        let cover = self.cover(alg, None);
        let kernel = self.kernel_of_cover(alg, &cover)?;
        let top_f: usize = cover.free.generators().iter().map(|&c| alg.top_dim(c)).sum();
        Ok(kernel.top_dim(alg) + self.top_dim(alg) == top_f)
    }

    /// Checks that the action is a module structure.
    pub fn check_module_axioms(&self, alg: &CategoryAlgebra<'_, F>) -> bool {
        let cat = alg.cat;
        for c in 0..cat.object_count() {
            for i in 0..self.dims[c] {
                if self.act_basis(alg, cat.identity(c), i) != unit(&alg.field, self.dims[c], i) {
                    return false;
                }
            }
        }
        for a in 0..cat.morphism_count() {
            for b in 0..cat.morphism_count() {
                if let Some(ab) = cat.try_compose(a, b) {
                    for i in 0..self.dims[cat.src(b)] {
                        if self.act(alg, a, &self.act_basis(alg, b, i)) != self.act_basis(alg, ab, i) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}
