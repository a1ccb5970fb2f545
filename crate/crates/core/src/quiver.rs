//! EI quivers and the free EI categories they generate.

use std::collections::HashMap;

use thiserror::Error;

use crate::category::{CategoryError, EICategory};
use crate::group::FiniteGroup;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuiverError {
    #[error("arrow {arrow} has endpoint {vertex} outside 0..{vertices}")]
    BadEndpoint { arrow: usize, vertex: usize, vertices: usize },
    #[error("arrow {0} is a loop")]
    Loop(usize),
    #[error("the quiver has an oriented cycle through vertex {0}")]
    CyclicQuiver(usize),
    #[error("biset of arrow {arrow}: {reason}")]
    BadBiset { arrow: usize, reason: String },
    #[error("free category would have more than {0} morphisms")]
    SizeLimitExceeded(usize),
    #[error("category is not skeletal")]
    NotSkeletal,
    #[error(transparent)]
    Category(#[from] CategoryError),
}

/// A `(G_d, G_c)`-biset on the points `0..size` for an arrow `c → d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub src: usize,
    pub dst: usize,
    pub size: usize,
    /// `left[g][x] = g·x` for `g ∈ G_dst`
    pub left: Vec<Vec<usize>>,
    /// `right[h][x] = x·h` for `h ∈ G_src`
    pub right: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EIQuiver {
    pub groups: Vec<FiniteGroup>,
    pub labels: Vec<String>,
    pub arrows: Vec<Arrow>,
}

impl EIQuiver {
    pub fn new(groups: Vec<FiniteGroup>, arrows: Vec<Arrow>) -> Result<Self, QuiverError> {
        let labels = (0..groups.len()).map(|v| v.to_string()).collect();
        let q = EIQuiver { groups, labels, arrows };
        q.validate()?;
        Ok(q)
    }

    pub fn vertex_count(&self) -> usize {
        self.groups.len()
    }

    fn validate(&self) -> Result<(), QuiverError> {
        let n = self.groups.len();
        for (i, a) in self.arrows.iter().enumerate() {
            for v in [a.src, a.dst] {
                if v >= n {
                    return Err(QuiverError::BadEndpoint { arrow: i, vertex: v, vertices: n });
                }
            }
            if a.src == a.dst {
                return Err(QuiverError::Loop(i));
            }
            check_biset(&self.groups[a.dst], &self.groups[a.src], a)
                .map_err(|reason| QuiverError::BadBiset { arrow: i, reason })?;
        }
        self.topological_order().map(|_| ())
    }

    fn topological_order(&self) -> Result<Vec<usize>, QuiverError> {
        let n = self.groups.len();
        let mut indegree = vec![0; n];
        for a in &self.arrows {
            indegree[a.dst] += 1;
        }
        let mut ready: Vec<usize> = (0..n).rev().filter(|&v| indegree[v] == 0).collect();
        let mut order = Vec::new();
        while let Some(v) = ready.pop() {
            order.push(v);
            for a in self.arrows.iter().filter(|a| a.src == v) {
                indegree[a.dst] -= 1;
                if indegree[a.dst] == 0 {
                    ready.push(a.dst);
                }
            }
        }
        match (0..n).find(|&v| indegree[v] > 0) {
            Some(v) => Err(QuiverError::CyclicQuiver(v)),
            None => Ok(order),
        }
    }

    /// All paths from `c` to `d` of length at least one, as arrow lists in
    /// traversal order.
    pub fn paths(&self, c: usize, d: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut stack = vec![(c, Vec::new())];
        while let Some((v, path)) = stack.pop() {
            if v == d && !path.is_empty() {
                out.push(path);
                continue;
            }
            for (i, a) in self.arrows.iter().enumerate().rev() {
                if a.src == v {
                    let mut p = path.clone();
                    p.push(i);
                    stack.push((a.dst, p));
                }
            }
        }
        out.sort();
        out
    }
}

fn check_biset(gd: &FiniteGroup, gc: &FiniteGroup, a: &Arrow) -> Result<(), String> {
    if a.left.len() != gd.order() || a.right.len() != gc.order() {
        return Err("one action row per group element required".to_string());
    }
    for row in a.left.iter().chain(&a.right) {
        if row.len() != a.size || row.iter().any(|&x| x >= a.size) {
            return Err("action rows must be maps of the point set".to_string());
        }
    }
    for x in 0..a.size {
        if a.left[gd.identity()][x] != x || a.right[gc.identity()][x] != x {
            return Err("identity acts nontrivially".to_string());
        }
        for g in gd.elements() {
            for h in gd.elements() {
                if a.left[gd.mul(g, h)][x] != a.left[g][a.left[h][x]] {
                    return Err(format!("left action fails at ({g}, {h}) on point {x}"));
                }
            }
        }
        for g in gc.elements() {
            for h in gc.elements() {
                if a.right[gc.mul(g, h)][x] != a.right[h][a.right[g][x]] {
                    return Err(format!("right action fails at ({g}, {h}) on point {x}"));
                }
            }
        }
        for g in gd.elements() {
            for h in gc.elements() {
                if a.left[g][a.right[h][x]] != a.right[h][a.left[g][x]] {
                    return Err(format!("actions of {g} and {h} do not commute on point {x}"));
                }
            }
        }
    }
    Ok(())
}

/// Morphism data of a free category before validation.
struct FreeData {
    ends: Vec<(usize, usize)>,
    identities: Vec<usize>,
    /// `G_c` offset per object
    group_offset: Vec<usize>,
    /// path of each non-invertible morphism and its canonical tuple
    words: Vec<Option<(Vec<usize>, Vec<usize>)>>,
    lookup: HashMap<(Vec<usize>, Vec<usize>), usize>,
}

/// Canonical representative of a tuple `(x_1, …, x_k)` with `x_i` in the
/// biset of `path[i]`, minimised over the intermediate groups acting by
/// `x_{i+1} ↦ x_{i+1}·h⁻¹`, `x_i ↦ h·x_i`.
fn canonical(q: &EIQuiver, path: &[usize], tuple: &[usize]) -> Vec<usize> {
    let k = path.len();
    let mut best = tuple.to_vec();
    let mut current = tuple.to_vec();
    // enumerate group tuples (h_1, …, h_{k-1}) as an odometer
    let inner: Vec<&FiniteGroup> = path[..k - 1].iter().map(|&a| &q.groups[q.arrows[a].dst]).collect();
    let mut h = vec![0usize; k - 1];
    loop {
        for (i, slot) in current.iter_mut().enumerate() {
            let a = &q.arrows[path[i]];
            let mut x = tuple[i];
            if i + 1 < k {
                x = a.left[h[i]][x];
            }
            if i > 0 {
                x = a.right[inner[i - 1].inv(h[i - 1])][x];
            }
            *slot = x;
        }
        if current < best {
            best.clone_from(&current);
        }
        let mut j = 0;
        loop {
            if j == h.len() {
                return best;
            }
            h[j] += 1;
            if h[j] < inner[j].order() {
                break;
            }
            h[j] = 0;
            j += 1;
        }
    }
}

fn all_tuples(q: &EIQuiver, path: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &a in path {
        let size = q.arrows[a].size;
        out = out.into_iter().flat_map(|t| (0..size).map(move |x| [t.clone(), vec![x]].concat())).collect();
    }
    out
}

/// The free EI category `ℂ_Q`. Automorphisms of each vertex come first in
/// group-element order, followed by the paths of each pair in
/// lexicographic order, each contributing its canonical tuples in
/// increasing order.
pub fn build_free_category(q: &EIQuiver, limit: usize) -> Result<EICategory, QuiverError> {
    q.topological_order()?;
    let n = q.vertex_count();
    let mut data = FreeData {
        ends: Vec::new(),
        identities: Vec::new(),
        group_offset: Vec::new(),
        words: Vec::new(),
        lookup: HashMap::new(),
    };
    for (c, g) in q.groups.iter().enumerate() {
        data.group_offset.push(data.ends.len());
        data.identities.push(data.ends.len() + g.identity());
        for _ in g.elements() {
            data.ends.push((c, c));
            data.words.push(None);
        }
    }
    let bound_check = |count: usize| if count > limit { Err(QuiverError::SizeLimitExceeded(limit)) } else { Ok(()) };
    bound_check(data.ends.len())?;
    let mut canon: HashMap<(Vec<usize>, Vec<usize>), Vec<usize>> = HashMap::new();
    for c in 0..n {
        for d in 0..n {
            for path in q.paths(c, d) {
                let product: usize = path.iter().map(|&a| q.arrows[a].size).product();
                if product > 64 * limit.max(1) {
                    return Err(QuiverError::SizeLimitExceeded(limit));
                }
                let mut reps: Vec<Vec<usize>> = Vec::new();
                for t in all_tuples(q, &path) {
                    let r = canonical(q, &path, &t);
                    if r == t {
                        reps.push(r.clone());
                    }
                    canon.insert((path.clone(), t), r);
                }
                reps.sort();
                for r in reps {
                    data.lookup.insert((path.clone(), r.clone()), data.ends.len());
                    data.ends.push((c, d));
                    data.words.push(Some((path.clone(), r)));
                    bound_check(data.ends.len())?;
                }
            }
        }
    }
    let FreeData { ends, identities, group_offset, words, lookup } = data;
    let resolve = |path: &[usize], tuple: &[usize]| -> usize {
        let key = (path.to_vec(), tuple.to_vec());
        lookup[&(path.to_vec(), canon[&key].clone())]
    };
    let e2 = ends.clone();
    let cat = EICategory::from_fn(n, ends, identities, |g, f| {
        let c = e2[f].1;
        Some(match (&words[g], &words[f]) {
            (None, None) => {
                let group = &q.groups[c];
                group_offset[c] + group.mul(g - group_offset[c], f - group_offset[c])
            }
            (None, Some((path, t))) => {
                let last = t.len() - 1;
                let mut t = t.clone();
                t[last] = q.arrows[path[last]].left[g - group_offset[c]][t[last]];
                resolve(path, &t)
            }
            (Some((path, t)), None) => {
                let s = e2[f].0;
                let mut t = t.clone();
                t[0] = q.arrows[path[0]].right[f - group_offset[s]][t[0]];
                resolve(path, &t)
            }
            (Some((p2, t2)), Some((p1, t1))) => {
                resolve(&[p1.clone(), p2.clone()].concat(), &[t1.clone(), t2.clone()].concat())
            }
        })
    })?;
    let mut cat = cat;
    cat.set_object_labels(q.labels.clone());
    Ok(cat)
}

/// The quiver with one arrow per pair carrying the unfactorisable
/// morphisms as its biset.
pub fn quiver_of_unfactorisables(cat: &EICategory) -> Result<EIQuiver, QuiverError> {
    if !cat.is_skeletal() {
        return Err(QuiverError::NotSkeletal);
    }
    let n = cat.object_count();
    let unf = cat.unfactorisables();
    let mut arrows = Vec::new();
    for c in 0..n {
        for d in 0..n {
            let set: Vec<usize> = unf.iter().copied().filter(|&u| cat.src(u) == c && cat.dst(u) == d).collect();
            if set.is_empty() {
                continue;
            }
            let index = |m: usize| set.binary_search(&m).expect("unfactorisables are closed under isomorphisms");
            let left = cat.hom(d, d).iter().map(|&g| set.iter().map(|&u| index(cat.compose(g, u))).collect()).collect();
            let right =
                cat.hom(c, c).iter().map(|&h| set.iter().map(|&u| index(cat.compose(u, h))).collect()).collect();
            arrows.push(Arrow { src: c, dst: d, size: set.len(), left, right });
        }
    }
    let groups = (0..n).map(|c| cat.aut_group(c).clone()).collect();
    let mut q = EIQuiver::new(groups, arrows)?;
    q.labels = (0..n).map(|c| cat.object_label(c).to_string()).collect();
    Ok(q)
}

/// Whether `cat` is isomorphic to the free category on its quiver of
/// unfactorisables. Hom-set cardinalities are compared first; the
/// comparison functor sending a word of unfactorisables to its composite is
/// then tested for bijectivity.
pub fn free_roundtrip_check(cat: &EICategory) -> Result<bool, QuiverError> {
    let q = quiver_of_unfactorisables(cat)?;
    let free = match build_free_category(&q, cat.morphism_count()) {
        Ok(free) => free,
        Err(QuiverError::SizeLimitExceeded(_)) => return Ok(false),
        Err(e) => return Err(e),
    };
    let n = cat.object_count();
    let fingerprint = |c: &EICategory| -> Vec<usize> { (0..n * n).map(|i| c.hom(i / n, i % n).len()).collect() };
    if fingerprint(&free) != fingerprint(cat) {
        return Ok(false);
    }
    let unf = cat.unfactorisables();
    let arrow_sets: Vec<Vec<usize>> = q
        .arrows
        .iter()
        .map(|a| unf.iter().copied().filter(|&u| cat.src(u) == a.src && cat.dst(u) == a.dst).collect())
        .collect();
    let mut image = vec![false; cat.morphism_count()];
    for c in 0..n {
        for (i, &f) in free.hom(c, c).iter().enumerate() {
            debug_assert_eq!(free.aut_element(f), i);
            image[cat.aut_morphism(c, i)] = true;
        }
    }
    // re-derive each free morphism's word from the path structure
    for c in 0..n {
        for d in (0..n).filter(|&d| d != c) {
            let mut seen = std::collections::HashSet::new();
            for path in q.paths(c, d) {
                for t in all_tuples(&q, &path) {
                    if canonical(&q, &path, &t) != t {
                        continue;
                    }
                    let mut m = arrow_sets[path[0]][t[0]];
                    for (a, &x) in path.iter().zip(&t).skip(1) {
                        m = cat.compose(arrow_sets[*a][x], m);
                    }
                    if !seen.insert(m) {
                        return Ok(false);
                    }
                    image[m] = true;
                }
            }
        }
    }
    Ok(image.iter().all(|&b| b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::examples::*;

    fn trivial_arrow(src: usize, dst: usize, size: usize) -> Arrow {
        let id: Vec<usize> = (0..size).collect();
        Arrow { src, dst, size, left: vec![id.clone()], right: vec![id] }
    }

    #[test]
    fn single_vertex_is_group() {
        let g = FiniteGroup::symmetric3();
        let q = EIQuiver::new(vec![g.clone()], vec![]).unwrap();
        let cat = build_free_category(&q, 100).unwrap();
        assert_eq!(cat, group(&g));
    }

    #[test]
    fn one_arrow_is_a2() {
        let t = FiniteGroup::trivial();
        let q = EIQuiver::new(vec![t.clone(), t], vec![trivial_arrow(0, 1, 1)]).unwrap();
        let cat = build_free_category(&q, 100).unwrap();
        assert_eq!(cat.morphism_count(), 3);
        assert_eq!(cat.hom(0, 1).len(), 1);
        assert!(cat.hom(1, 0).is_empty());
    }

    #[test]
    fn free_left_biset() {
        let c2 = FiniteGroup::cyclic(2);
        let arrow =
            Arrow { src: 0, dst: 1, size: 2, left: vec![vec![0, 1], vec![1, 0]], right: vec![vec![0, 1], vec![0, 1]] };
        let q = EIQuiver::new(vec![c2.clone(), c2], vec![arrow]).unwrap();
        let cat = build_free_category(&q, 100).unwrap();
        assert_eq!(cat.hom(0, 1).len(), 2);
        assert_eq!(cat, free_left_trivial_right());
    }

    #[test]
    fn rejects_cycles_and_bad_bisets() {
        let t = FiniteGroup::trivial();
        let cyc = EIQuiver::new(vec![t.clone(), t.clone()], vec![trivial_arrow(0, 1, 1), trivial_arrow(1, 0, 1)]);
        assert!(matches!(cyc, Err(QuiverError::CyclicQuiver(_))));
        let c2 = FiniteGroup::cyclic(2);
        let bad = Arrow { src: 0, dst: 1, size: 2, left: vec![vec![0, 1], vec![0, 0]], right: vec![vec![0, 1]] };
        assert!(matches!(EIQuiver::new(vec![t, c2], vec![bad]), Err(QuiverError::BadBiset { .. })));
    }

    #[test]
    fn size_limit() {
        let t = FiniteGroup::trivial();
        let q = EIQuiver::new(vec![t.clone(), t], vec![trivial_arrow(0, 1, 10)]).unwrap();
        assert_eq!(build_free_category(&q, 5).unwrap_err(), QuiverError::SizeLimitExceeded(5));
    }

    #[test]
    fn quivers_of_small_posets() {
        assert_eq!(quiver_of_unfactorisables(&a2()).unwrap().arrows.len(), 1);
        assert_eq!(quiver_of_unfactorisables(&a3()).unwrap().arrows.len(), 2);
        assert_eq!(quiver_of_unfactorisables(&diamond()).unwrap().arrows.len(), 4);
    }

    #[test]
    fn roundtrips() {
        assert!(free_roundtrip_check(&a3()).unwrap());
        assert!(!free_roundtrip_check(&diamond()).unwrap());
        assert!(free_roundtrip_check(&group(&FiniteGroup::cyclic(2))).unwrap());
        assert!(free_roundtrip_check(&free_left_trivial_right()).unwrap());
    }

    #[test]
    fn fiber_product_over_c2() {
        // 0 -> 1 -> 2 with G_1 = C2 acting freely on both sides of the middle
        let t = FiniteGroup::trivial();
        let c2 = FiniteGroup::cyclic(2);
        let a = Arrow { src: 0, dst: 1, size: 2, left: vec![vec![0, 1], vec![1, 0]], right: vec![vec![0, 1]] };
        let b = Arrow { src: 1, dst: 2, size: 2, left: vec![vec![0, 1]], right: vec![vec![0, 1], vec![1, 0]] };
        let q = EIQuiver::new(vec![t.clone(), c2, t], vec![a, b]).unwrap();
        let cat = build_free_category(&q, 100).unwrap();
        assert_eq!(cat.hom(0, 2).len(), 2);
        assert!(cat.is_ufp().holds());
        assert!(free_roundtrip_check(&cat).unwrap());
    }
}
