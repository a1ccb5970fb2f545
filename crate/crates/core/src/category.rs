//! Finite EI categories stored with full composition tables.
//!
//! Morphisms are numbered `0..m`; objects `0..n`. The composition `g∘f`
//! is defined when `dst(f) == src(g)`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{CoefficientField, FiniteGroup, Subgroup};

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CategoryError {
    #[error("category has no objects")]
    Empty,
    #[error("morphism {morphism} has endpoint {object} outside 0..{objects}")]
    BadEndpoint { morphism: usize, object: usize, objects: usize },
    #[error("morphism id {0} referenced but not declared")]
    UnknownMorphism(usize),
    #[error("morphism ids must be exactly 0..{expected}; got duplicate or gap at {id}")]
    MorphismIds { id: usize, expected: usize },
    #[error("composition {g}∘{f} is missing")]
    MissingComposition { g: usize, f: usize },
    #[error("composition {g}∘{f} given for non-composable pair")]
    NotComposable { g: usize, f: usize },
    #[error("composition {g}∘{f} = {gf} has wrong endpoints")]
    BadComposite { g: usize, f: usize, gf: usize },
    #[error("composition {g}∘{f} given twice with different results")]
    ConflictingComposition { g: usize, f: usize },
    #[error("identity of object {object} is not neutral")]
    BadIdentity { object: usize },
    #[error("composition is not associative: ({h}∘{g})∘{f} != {h}∘({g}∘{f})")]
    NotAssociative { h: usize, g: usize, f: usize },
    #[error("endomorphism {morphism} of object {object} is not invertible")]
    EndoNotInvertible { object: usize, morphism: usize },
    #[error("objects {c} and {d} have morphisms both ways but are not isomorphic")]
    NonDirectedAfterSkeleton { c: usize, d: usize },
    #[error("category has {count} morphisms, more than the limit {limit}")]
    SizeLimitExceeded { count: usize, limit: usize },
}

/// Raw category data as it appears in input files.
#[derive(Debug, Clone, Default)]
pub struct RawCategory {
    pub objects: usize,
    pub object_labels: Option<Vec<String>>,
    /// `(id, src, dst)`
    pub morphisms: Vec<(usize, usize, usize)>,
    /// `(g, f, g∘f)`
    pub compose: Vec<(usize, usize, usize)>,
    pub identities: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct EICategory {
    n: usize,
    object_labels: Vec<String>,
    src: Vec<usize>,
    dst: Vec<usize>,
    identities: Vec<usize>,
    hom: Vec<Vec<usize>>,
    comp: Vec<u32>,
    auts: Vec<FiniteGroup>,
    /// position of an endomorphism inside its automorphism group
    aut_index: Vec<u32>,
}

impl PartialEq for EICategory {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.src == other.src
            && self.dst == other.dst
            && self.identities == other.identities
            && self.comp == other.comp
    }
}

impl EICategory {
    /// Validates raw input data.
    pub fn validate(raw: &RawCategory) -> Result<Self, CategoryError> {
        let m = raw.morphisms.len();
        let mut ends = vec![None; m];
        for &(id, s, d) in &raw.morphisms {
            if id >= m || ends[id].is_some() {
                return Err(CategoryError::MorphismIds { id, expected: m });
            }
            ends[id] = Some((s, d));
        }
        let ends: Vec<(usize, usize)> = ends.into_iter().map(|e| e.unwrap()).collect();
        let mut table: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for &(g, f, gf) in &raw.compose {
            for x in [g, f, gf] {
                if x >= m {
                    return Err(CategoryError::UnknownMorphism(x));
                }
            }
            if let Some(&old) = table.get(&(g, f)) {
                if old != gf {
                    return Err(CategoryError::ConflictingComposition { g, f });
                }
            }
            table.insert((g, f), gf);
        }
        let mut cat = Self::from_fn(raw.objects, ends, raw.identities.clone(), |g, f| table.get(&(g, f)).copied())?;
        for &(g, f, _) in &raw.compose {
            if cat.dst[f] != cat.src[g] {
                return Err(CategoryError::NotComposable { g, f });
            }
        }
        if let Some(labels) = &raw.object_labels {
            if labels.len() == cat.n {
                cat.object_labels = labels.clone();
            }
        }
        Ok(cat)
    }

    /// Builds and validates a category from endpoints, identities and a
    /// composition function queried on composable pairs.
    pub fn from_fn(
        objects: usize,
        ends: Vec<(usize, usize)>,
        identities: Vec<usize>,
        mut compose: impl FnMut(usize, usize) -> Option<usize>,
    ) -> Result<Self, CategoryError> {
        if objects == 0 {
            return Err(CategoryError::Empty);
        }
        let m = ends.len();
        for (i, &(s, d)) in ends.iter().enumerate() {
            for o in [s, d] {
                if o >= objects {
                    return Err(CategoryError::BadEndpoint { morphism: i, object: o, objects });
                }
            }
        }
        if identities.len() != objects {
            return Err(CategoryError::BadIdentity { object: identities.len().min(objects.saturating_sub(1)) });
        }
        for (c, &i) in identities.iter().enumerate() {
            if i >= m {
                return Err(CategoryError::UnknownMorphism(i));
            }
            if ends[i] != (c, c) {
                return Err(CategoryError::BadIdentity { object: c });
            }
        }
        let src: Vec<usize> = ends.iter().map(|e| e.0).collect();
        let dst: Vec<usize> = ends.iter().map(|e| e.1).collect();
        let mut hom = vec![Vec::new(); objects * objects];
        for i in 0..m {
            hom[src[i] * objects + dst[i]].push(i);
        }
        let mut comp = vec![NONE; m * m];
        for f in 0..m {
            for &g in hom_from(&hom, objects, dst[f]).flatten() {
                let gf = compose(g, f).ok_or(CategoryError::MissingComposition { g, f })?;
                if gf >= m {
                    return Err(CategoryError::UnknownMorphism(gf));
                }
                if src[gf] != src[f] || dst[gf] != dst[g] {
                    return Err(CategoryError::BadComposite { g, f, gf });
                }
                comp[g * m + f] = gf as u32;
            }
        }
        let mut cat = EICategory {
            n: objects,
            object_labels: (0..objects).map(|c| c.to_string()).collect(),
            src,
            dst,
            identities,
            hom,
            comp,
            auts: Vec::new(),
            aut_index: vec![NONE; m],
        };
        cat.check_axioms()?;
        cat.build_automorphisms()?;
        Ok(cat)
    }

    fn check_axioms(&self) -> Result<(), CategoryError> {
        let m = self.src.len();
        for c in 0..self.n {
            let id = self.identities[c];
            for f in 0..m {
                if self.dst[f] == c && self.compose(id, f) != f {
                    return Err(CategoryError::BadIdentity { object: c });
                }
                if self.src[f] == c && self.compose(f, id) != f {
                    return Err(CategoryError::BadIdentity { object: c });
                }
            }
        }
        for f in 0..m {
            for a in 0..self.n {
                for &g in &self.hom[self.dst[f] * self.n + a] {
                    let gf = self.compose(g, f);
                    for b in 0..self.n {
                        for &h in &self.hom[a * self.n + b] {
                            if self.compose(h, gf) != self.compose(self.compose(h, g), f) {
                                return Err(CategoryError::NotAssociative { h, g, f });
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn build_automorphisms(&mut self) -> Result<(), CategoryError> {
        let mut auts = Vec::with_capacity(self.n);
        for c in 0..self.n {
            let ends = self.hom(c, c).to_vec();
            let id = self.identities[c];
            for &f in &ends {
                if !ends.iter().any(|&g| self.compose(g, f) == id && self.compose(f, g) == id) {
                    return Err(CategoryError::EndoNotInvertible { object: c, morphism: f });
                }
            }
            for (i, &f) in ends.iter().enumerate() {
                self.aut_index[f] = i as u32;
            }
            let rows: Vec<Vec<usize>> = ends
                .iter()
                .map(|&a| ends.iter().map(|&b| self.aut_index[self.compose(a, b)] as usize).collect())
                .collect();
            let group = FiniteGroup::from_table(&rows).expect("endomorphisms under composition form a group");
            auts.push(group);
        }
        self.auts = auts;
        Ok(())
    }

    pub fn object_count(&self) -> usize {
        self.n
    }

    pub fn morphism_count(&self) -> usize {
        self.src.len()
    }

    pub fn src(&self, f: usize) -> usize {
        self.src[f]
    }

    pub fn dst(&self, f: usize) -> usize {
        self.dst[f]
    }

    pub fn identity(&self, c: usize) -> usize {
        self.identities[c]
    }

    pub fn hom(&self, c: usize, d: usize) -> &[usize] {
        &self.hom[c * self.n + d]
    }

    pub fn object_label(&self, c: usize) -> &str {
        &self.object_labels[c]
    }

    pub fn set_object_labels(&mut self, labels: Vec<String>) {
        assert_eq!(labels.len(), self.n);
        self.object_labels = labels;
    }

    /// `g∘f`; panics if not composable.
    #[inline]
    pub fn compose(&self, g: usize, f: usize) -> usize {
        let r = self.comp[g * self.src.len() + f];
        debug_assert!(r != NONE, "{g}∘{f} not composable");
        r as usize
    }

    #[inline]
    pub fn try_compose(&self, g: usize, f: usize) -> Option<usize> {
        let r = self.comp[g * self.src.len() + f];
        (r != NONE).then_some(r as usize)
    }

    /// The automorphism group `G_c`; element `i` is morphism `hom(c,c)[i]`.
    pub fn aut_group(&self, c: usize) -> &FiniteGroup {
        &self.auts[c]
    }

    /// Morphism id of element `i` of `G_c`.
    pub fn aut_morphism(&self, c: usize, i: usize) -> usize {
        self.hom(c, c)[i]
    }

    /// Index of an endomorphism inside its automorphism group.
    pub fn aut_element(&self, f: usize) -> usize {
        self.aut_index[f] as usize
    }

    pub fn is_endomorphism(&self, f: usize) -> bool {
        self.src[f] == self.dst[f]
    }

    /// In a finite EI category a morphism `c → d` is invertible iff there
    /// is any morphism `d → c`.
    pub fn is_iso(&self, f: usize) -> bool {
        !self.hom(self.dst[f], self.src[f]).is_empty()
    }

    pub fn inverse(&self, f: usize) -> Option<usize> {
        let id = self.identities[self.src[f]];
        self.hom(self.dst[f], self.src[f]).iter().copied().find(|&g| self.compose(g, f) == id)
    }

    pub fn leq(&self, c: usize, d: usize) -> bool {
        !self.hom(c, d).is_empty()
    }

    pub fn is_skeletal(&self) -> bool {
        (0..self.n).all(|c| (0..self.n).all(|d| c == d || !(self.leq(c, d) && self.leq(d, c))))
    }

    /// Non-invertible morphisms in increasing id order.
    pub fn non_invertibles(&self) -> Vec<usize> {
        (0..self.morphism_count()).filter(|&f| !self.is_iso(f)).collect()
    }

    pub fn check_size(&self, limit: usize) -> Result<(), CategoryError> {
        if self.morphism_count() > limit {
            Err(CategoryError::SizeLimitExceeded { count: self.morphism_count(), limit })
        } else {
            Ok(())
        }
    }

    pub fn to_raw(&self) -> RawCategory {
        let m = self.morphism_count();
        let mut compose = Vec::new();
        for f in 0..m {
            for g in 0..m {
                if let Some(gf) = self.try_compose(g, f) {
                    compose.push((g, f, gf));
                }
            }
        }
        RawCategory {
            objects: self.n,
            object_labels: Some(self.object_labels.clone()),
            morphisms: (0..m).map(|f| (f, self.src[f], self.dst[f])).collect(),
            compose,
            identities: self.identities.clone(),
        }
    }

    /// The opposite category on the same object and morphism ids.
    pub fn opposite(&self) -> EICategory {
        let m = self.morphism_count();
        let ends = (0..m).map(|f| (self.dst[f], self.src[f])).collect();
        let mut op = EICategory::from_fn(self.n, ends, self.identities.clone(), |g, f| self.try_compose(f, g))
            .expect("opposite of a valid EI category is valid");
        op.object_labels = self.object_labels.clone();
        op
    }

    /// One object per isomorphism class, the least index of each class.
    pub fn skeletalise(&self) -> Result<Skeleton, CategoryError> {
        let mut rep = vec![usize::MAX; self.n];
        let mut to_rep = vec![usize::MAX; self.n];
        for c in 0..self.n {
            if rep[c] != usize::MAX {
                continue;
            }
            for d in c..self.n {
                if rep[d] == usize::MAX && (d == c || (self.leq(c, d) && self.leq(d, c))) {
                    rep[d] = c;
                    to_rep[d] = if d == c { self.identities[c] } else { self.hom(d, c)[0] };
                }
            }
        }
        let reps: Vec<usize> = (0..self.n).filter(|&c| rep[c] == c).collect();
        let new_index: Vec<usize> = (0..self.n).map(|c| reps.binary_search(&rep[c]).unwrap()).collect();
        let mut old_ids = Vec::new();
        let mut new_id = vec![usize::MAX; self.morphism_count()];
        for f in 0..self.morphism_count() {
            if rep[self.src[f]] == self.src[f] && rep[self.dst[f]] == self.dst[f] {
                new_id[f] = old_ids.len();
                old_ids.push(f);
            }
        }
        let ends = old_ids.iter().map(|&f| (new_index[self.src[f]], new_index[self.dst[f]])).collect();
        let identities = reps.iter().map(|&c| new_id[self.identities[c]]).collect();
        let mut skeleton = EICategory::from_fn(reps.len(), ends, identities, |g, f| {
            self.try_compose(old_ids[g], old_ids[f]).map(|x| new_id[x])
        })?;
        skeleton.object_labels = reps.iter().map(|&c| self.object_labels[c].clone()).collect();
        for c in 0..skeleton.n {
            for d in 0..skeleton.n {
                if c != d && skeleton.leq(c, d) && skeleton.leq(d, c) {
                    return Err(CategoryError::NonDirectedAfterSkeleton { c: reps[c], d: reps[d] });
                }
            }
        }
        let morphism_map = (0..self.morphism_count())
            .map(|f| {
                let (c, d) = (self.src[f], self.dst[f]);
                let phi_d = to_rep[d];
                let phi_c_inv = self.inverse(to_rep[c]).expect("chosen isomorphism");
                new_id[self.compose(phi_d, self.compose(f, phi_c_inv))]
            })
            .collect();
        Ok(Skeleton { category: skeleton, object_map: new_index, morphism_map })
    }

    /// Non-invertible morphisms that are not a composite of two
    /// non-invertible morphisms, grouped by `(src, dst)`.
    pub fn unfactorisables(&self) -> Vec<usize> {
        let m = self.morphism_count();
        let mut factorisable = vec![false; m];
        for f in self.non_invertibles() {
            for e in 0..self.n {
                if e == self.dst[f] {
                    continue;
                }
                for &g in self.hom(self.dst[f], e) {
                    if !self.is_iso(g) {
                        factorisable[self.compose(g, f)] = true;
                    }
                }
            }
        }
        (0..m).filter(|&f| !self.is_iso(f) && !factorisable[f]).collect()
    }

    /// Isomorphisms `t → t'`.
    fn isos(&self, t: usize, u: usize) -> &[usize] {
        if t == u || self.leq(u, t) {
            self.hom(t, u)
        } else {
            &[]
        }
    }

    /// The poset of factorisation classes of `alpha`.
    pub fn theta_poset(&self, alpha: usize) -> ThetaPoset {
        let (x, y) = (self.src[alpha], self.dst[alpha]);
        let mut triples: Vec<(usize, usize, usize)> = Vec::new();
        for t in 0..self.n {
            for &f in self.hom(x, t) {
                for &g in self.hom(t, y) {
                    if self.compose(g, f) == alpha {
                        triples.push((t, g, f));
                    }
                }
            }
        }
        // classes: (t,g,f) ~ (t', g h⁻¹, h f) for isomorphisms h
        let mut class = vec![usize::MAX; triples.len()];
        let mut reps: Vec<usize> = Vec::new();
        for i in 0..triples.len() {
            if class[i] != usize::MAX {
                continue;
            }
            let (t, g, f) = triples[i];
            for j in i..triples.len() {
                if class[j] != usize::MAX {
                    continue;
                }
                let (u, g2, f2) = triples[j];
                if self.isos(t, u).iter().any(|&h| self.compose(h, f) == f2 && self.compose(g2, h) == g) {
                    class[j] = reps.len();
                }
            }
            reps.push(i);
        }
        let k = reps.len();
        let mut leq = vec![false; k * k];
        for a in 0..k {
            let (t, g, f) = triples[reps[a]];
            for b in 0..k {
                let (u, g2, f2) = triples[reps[b]];
                leq[a * k + b] = self.hom(t, u).iter().any(|&h| self.compose(h, f) == f2 && self.compose(g2, h) == g);
            }
        }
        ThetaPoset { alpha, elements: reps.iter().map(|&i| triples[i]).collect(), leq }
    }

    /// UFP via chain-ness of every `Θ(α)`, `α` non-invertible.
    pub fn is_ufp(&self) -> UfpResult {
        for alpha in self.non_invertibles() {
            let theta = self.theta_poset(alpha);
            if let Some((a, b)) = theta.incomparable_pair() {
                return UfpResult::Fails { alpha, incomparable: [theta.elements[a], theta.elements[b]] };
            }
        }
        UfpResult::Holds
    }

    /// UFP by enumerating every factorisation of every non-invertible
    /// morphism into unfactorisables and searching for a commuting ladder of
    /// isomorphisms to the first one found. `None` if more than `limit`
    /// chains would be enumerated.
    pub fn is_ufp_by_ladders(&self, limit: usize) -> Option<bool> {
        let unf = self.unfactorisables();
        let mut by_src: Vec<Vec<usize>> = vec![Vec::new(); self.n];
        for &u in &unf {
            by_src[self.src[u]].push(u);
        }
        let mut budget = limit;
        for alpha in self.non_invertibles() {
            let mut chains: Vec<Vec<usize>> = Vec::new();
            let x = self.src[alpha];
            let mut stack = Vec::new();
            if !self.collect_chains(alpha, self.identities[x], &by_src, &mut stack, &mut chains, &mut budget) {
                return None;
            }
            let first = chains.first()?;
            for other in &chains[1..] {
                if !self.ladder_equivalent(first, other) {
                    return Some(false);
                }
            }
        }
        Some(true)
    }

    fn collect_chains(
        &self,
        alpha: usize,
        current: usize,
        by_src: &[Vec<usize>],
        stack: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        budget: &mut usize,
    ) -> bool {
        if current == alpha {
            if *budget == 0 {
                return false;
            }
            *budget -= 1;
            out.push(stack.clone());
            return true;
        }
        let t = self.dst[current];
        let y = self.dst[alpha];
        for &u in &by_src[t] {
            let next = self.compose(u, current);
            let e = self.dst[next];
            if !self.hom(e, y).iter().any(|&g| self.compose(g, next) == alpha) {
                continue;
            }
            stack.push(u);
            let ok = self.collect_chains(alpha, next, by_src, stack, out, budget);
            stack.pop();
            if !ok {
                return false;
            }
        }
        true
    }

    fn ladder_equivalent(&self, u: &[usize], v: &[usize]) -> bool {
        if u.len() != v.len() {
            return false;
        }
        let start = self.identities[self.src[u[0]]];
        self.ladder_step(u, v, 0, start)
    }

    /// `h` is the rung at the source of `u[i]`.
    fn ladder_step(&self, u: &[usize], v: &[usize], i: usize, h: usize) -> bool {
        let target = self.compose(v[i], h);
        if i + 1 == u.len() {
            return target == u[i];
        }
        self.isos(self.dst[u[i]], self.dst[v[i]])
            .iter()
            .any(|&h2| self.compose(h2, u[i]) == target && self.ladder_step(u, v, i + 1, h2))
    }

    /// Orbits of `hom(c,d)` under `G_d × G_c^op`, with stabilisers.
    pub fn biset_decomposition(&self, c: usize, d: usize) -> BisetDecomposition {
        let gd = self.aut_group(d);
        let gc = self.aut_group(c);
        let product = gd.direct_product(&gc.opposite());
        let nc = gc.order();
        let act = |p: usize, alpha: usize| {
            let a = self.aut_morphism(d, p / nc);
            let b = self.aut_morphism(c, p % nc);
            self.compose(a, self.compose(alpha, b))
        };
        let hom = self.hom(c, d);
        let mut seen = vec![false; self.morphism_count()];
        let mut orbits = Vec::new();
        let mut stabilisers = Vec::new();
        for &alpha in hom {
            if seen[alpha] {
                continue;
            }
            let mut orbit: Vec<usize> = product.elements().map(|p| act(p, alpha)).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &beta in &orbit {
                seen[beta] = true;
            }
            let stab: Vec<usize> = product.elements().filter(|&p| act(p, alpha) == alpha).collect();
            stabilisers.push(product.subgroup_from_members(&stab).expect("stabiliser"));
            orbits.push(orbit);
        }
        BisetDecomposition { c, d, left_order: gd.order(), right_order: nc, product, orbits, stabilisers }
    }

    /// Biset condition checks for all pairs `c ≠ d` over `k`.
    pub fn check_biset_conditions(&self, k: CoefficientField) -> BisetConditionReport {
        let mut entries = Vec::new();
        for c in 0..self.n {
            for d in 0..self.n {
                if c == d || self.hom(c, d).is_empty() {
                    continue;
                }
                let dec = self.biset_decomposition(c, d);
                for (i, h) in dec.stabilisers.iter().enumerate() {
                    let pr1 = dec.projection_left(h);
                    entries.push(OrbitCondition {
                        c,
                        d,
                        representative: dec.orbits[i][0],
                        orbit_size: dec.orbits[i].len(),
                        stabiliser_order: h.order(),
                        projection_order: pr1.order(),
                        a_holds: k.is_invertible(h.order()),
                        b_holds: k.is_invertible(pr1.order()),
                    });
                }
            }
        }
        BisetConditionReport { entries }
    }

    /// Decides hereditarity of the category algebra over `k` on the chosen
    /// side, clause by clause.
    pub fn decide_hereditary(&self, k: CoefficientField, side: Side) -> HereditarityVerdict {
        match side {
            Side::Left => decide_left(self, k, side),
            Side::Right => decide_left(&self.opposite(), k, side),
        }
    }
}

fn hom_from(hom: &[Vec<usize>], n: usize, c: usize) -> impl Iterator<Item = &Vec<usize>> {
    (0..n).map(move |d| &hom[c * n + d])
}

fn decide_left(cat: &EICategory, k: CoefficientField, side: Side) -> HereditarityVerdict {
    let mut clauses = Vec::new();
    let bad_groups: Vec<String> = (0..cat.object_count())
        .filter(|&c| !k.is_invertible(cat.aut_group(c).order()))
        .map(|c| format!("object {} has |G| = {}", cat.object_label(c), cat.aut_group(c).order()))
        .collect();
    clauses.push(Clause::new("group_rings", bad_groups));
    let ufp = match cat.is_ufp() {
        UfpResult::Holds => Vec::new(),
        UfpResult::Fails { alpha, incomparable } => vec![format!(
            "morphism {alpha}: factorisations through {} and {} are incomparable",
            cat.object_label(incomparable[0].0),
            cat.object_label(incomparable[1].0)
        )],
    };
    clauses.push(Clause::new("ufp", ufp));
    let report = cat.check_biset_conditions(k);
    let describe = |e: &OrbitCondition, what: &str, order: usize| {
        format!(
            "orbit of morphism {} in hom({}, {}): {what} has order {order}",
            e.representative,
            cat.object_label(e.c),
            cat.object_label(e.d)
        )
    };
    let a: Vec<String> =
        report.entries.iter().filter(|e| !e.a_holds).map(|e| describe(e, "stabiliser", e.stabiliser_order)).collect();
    let b: Vec<String> = report
        .entries
        .iter()
        .filter(|e| !e.b_holds)
        .map(|e| describe(e, "first projection of stabiliser", e.projection_order))
        .collect();
    clauses.push(Clause::new("condition_a", a));
    clauses.push(Clause::new("condition_b", b));
    let hereditary = clauses.iter().all(|c| c.holds);
    HereditarityVerdict { side, hereditary, clauses }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Skeleton {
    pub category: EICategory,
    /// old object → skeleton object
    pub object_map: Vec<usize>,
    /// old morphism → transported skeleton morphism
    pub morphism_map: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThetaPoset {
    pub alpha: usize,
    /// representatives `(t, g, f)` with `g∘f = alpha`
    pub elements: Vec<(usize, usize, usize)>,
    leq: Vec<bool>,
}

impl ThetaPoset {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.len() + b]
    }

    pub fn incomparable_pair(&self) -> Option<(usize, usize)> {
        let k = self.len();
        (0..k).flat_map(|a| (a + 1..k).map(move |b| (a, b))).find(|&(a, b)| !self.leq(a, b) && !self.leq(b, a))
    }

    pub fn is_chain(&self) -> bool {
        self.incomparable_pair().is_none()
    }

    pub fn is_partial_order(&self) -> bool {
        let k = self.len();
        (0..k).all(|a| self.leq(a, a))
            && (0..k).all(|a| (0..k).all(|b| a == b || !(self.leq(a, b) && self.leq(b, a))))
            && (0..k).all(|a| (0..k).all(|b| (0..k).all(|c| !(self.leq(a, b) && self.leq(b, c)) || self.leq(a, c))))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum UfpResult {
    Holds,
    Fails { alpha: usize, incomparable: [(usize, usize, usize); 2] },
}

impl UfpResult {
    pub fn holds(&self) -> bool {
        matches!(self, UfpResult::Holds)
    }
}

#[derive(Debug, Clone)]
pub struct BisetDecomposition {
    pub c: usize,
    pub d: usize,
    left_order: usize,
    right_order: usize,
    /// `G_d × G_c^op`, pair `(a, b)` at index `a * |G_c| + b`
    pub product: FiniteGroup,
    pub orbits: Vec<Vec<usize>>,
    pub stabilisers: Vec<Subgroup>,
}

impl BisetDecomposition {
    /// `(a, b)` indices into `G_d` and `G_c`.
    pub fn split(&self, p: usize) -> (usize, usize) {
        (p / self.right_order, p % self.right_order)
    }

    /// `pr₁(H)` as a subgroup of `G_d`.
    pub fn projection_left(&self, h: &Subgroup) -> Subgroup {
        let mut m: Vec<usize> = h.members().iter().map(|&p| p / self.right_order).collect();
        m.sort_unstable();
        m.dedup();
        let _ = self.left_order;
        Subgroup::from_sorted_unchecked(m)
    }

    /// `pr₂(H)` as a subgroup of `G_c`.
    pub fn projection_right(&self, h: &Subgroup) -> Subgroup {
        let mut m: Vec<usize> = h.members().iter().map(|&p| p % self.right_order).collect();
        m.sort_unstable();
        m.dedup();
        Subgroup::from_sorted_unchecked(m)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitCondition {
    pub c: usize,
    pub d: usize,
    pub representative: usize,
    pub orbit_size: usize,
    pub stabiliser_order: usize,
    pub projection_order: usize,
    pub a_holds: bool,
    pub b_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BisetConditionReport {
    pub entries: Vec<OrbitCondition>,
}

impl BisetConditionReport {
    pub fn a_holds(&self) -> bool {
        self.entries.iter().all(|e| e.a_holds)
    }

    pub fn b_holds(&self) -> bool {
        self.entries.iter().all(|e| e.b_holds)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Clause {
    pub name: String,
    pub holds: bool,
    pub witnesses: Vec<String>,
}

impl Clause {
    pub fn new(name: &str, witnesses: Vec<String>) -> Self {
        Clause { name: name.to_string(), holds: witnesses.is_empty(), witnesses }
    }

    pub fn with_status(name: &str, holds: bool, witnesses: Vec<String>) -> Self {
        Clause { name: name.to_string(), holds, witnesses }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HereditarityVerdict {
    pub side: Side,
    pub hereditary: bool,
    pub clauses: Vec<Clause>,
}

impl HereditarityVerdict {
    pub fn failed(&self) -> impl Iterator<Item = &Clause> {
        self.clauses.iter().filter(|c| !c.holds)
    }

    pub fn clause(&self, name: &str) -> Option<&Clause> {
        self.clauses.iter().find(|c| c.name == name)
    }
}

/// Small categories used throughout tests and the CLI presets.
pub mod examples {
    use super::*;

    /// The category of a finite poset given by its strict relations; the
    /// order is the reflexive-transitive closure.
    pub fn poset(n: usize, relations: &[(usize, usize)]) -> EICategory {
        let mut le = vec![false; n * n];
        for i in 0..n {
            le[i * n + i] = true;
        }
        for &(a, b) in relations {
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
        poset_from_matrix(n, &le)
    }

    /// Poset category from a reflexive, transitive, antisymmetric relation
    /// matrix.
    pub fn poset_from_matrix(n: usize, le: &[bool]) -> EICategory {
        let mut ends = Vec::new();
        let mut id_of = vec![usize::MAX; n * n];
        for i in 0..n {
            for j in 0..n {
                if le[i * n + j] {
                    id_of[i * n + j] = ends.len();
                    ends.push((i, j));
                }
            }
        }
        let identities = (0..n).map(|i| id_of[i * n + i]).collect();
        let e2 = ends.clone();
        EICategory::from_fn(n, ends, identities, |g, f| Some(id_of[e2[f].0 * n + e2[g].1])).expect("poset category")
    }

    pub fn a2() -> EICategory {
        poset(2, &[(0, 1)])
    }

    pub fn a3() -> EICategory {
        poset(3, &[(0, 1), (1, 2)])
    }

    /// Bottom 0, middles 1 and 2, top 3.
    pub fn diamond() -> EICategory {
        poset(4, &[(0, 1), (0, 2), (1, 3), (2, 3)])
    }

    /// One object with automorphism group `g`.
    pub fn group(g: &FiniteGroup) -> EICategory {
        let n = g.order();
        let ends = vec![(0, 0); n];
        EICategory::from_fn(1, ends, vec![g.identity()], |a, b| Some(g.mul(a, b))).expect("group category")
    }

    /// Two objects with `G_c = G_d = C2` and a two-element hom-set on which
    /// `G_d` acts freely and `G_c` trivially. Morphisms: `0,1` = `G_c`,
    /// `2,3` = `G_d`, `4,5` = `hom(c,d)`.
    pub fn free_left_trivial_right() -> EICategory {
        let ends = vec![(0, 0), (0, 0), (1, 1), (1, 1), (0, 1), (0, 1)];
        EICategory::from_fn(2, ends, vec![0, 2], |g, f| {
            Some(match (g, f) {
                (0 | 1, 0 | 1) => g ^ f,
                (2 | 3, 2 | 3) => 2 + ((g - 2) ^ (f - 2)),
                (4 | 5, 0 | 1) => g,
                (2 | 3, 4 | 5) => 4 + ((g - 2) ^ (f - 4)),
                _ => return None,
            })
        })
        .expect("two-object category")
    }
}

#[cfg(test)]
mod tests {
    use super::examples::*;
    use super::*;

    fn f(p: u64) -> CoefficientField {
        CoefficientField::new(p).unwrap()
    }

    #[test]
    fn rejects_non_invertible_endo() {
        let raw = RawCategory {
            objects: 1,
            object_labels: None,
            morphisms: vec![(0, 0, 0), (1, 0, 0)],
            compose: vec![(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 1)],
            identities: vec![0],
        };
        assert_eq!(
            EICategory::validate(&raw).unwrap_err(),
            CategoryError::EndoNotInvertible { object: 0, morphism: 1 }
        );
    }

    #[test]
    fn rejects_missing_and_bad_tables() {
        let raw = RawCategory {
            objects: 1,
            object_labels: None,
            morphisms: vec![(0, 0, 0), (1, 0, 0)],
            compose: vec![(0, 0, 0), (0, 1, 1), (1, 0, 1)],
            identities: vec![0],
        };
        assert_eq!(EICategory::validate(&raw).unwrap_err(), CategoryError::MissingComposition { g: 1, f: 1 });
        let empty = RawCategory::default();
        assert_eq!(EICategory::validate(&empty).unwrap_err(), CategoryError::Empty);
    }

    #[test]
    fn roundtrip_raw() {
        let c = free_left_trivial_right();
        let back = EICategory::validate(&c.to_raw()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn c2_and_a2_validate() {
        let c2 = group(&FiniteGroup::cyclic(2));
        assert_eq!(c2.aut_group(0).order(), 2);
        let a2 = a2();
        assert_eq!(a2.morphism_count(), 3);
        assert!(a2.is_skeletal());
    }

    #[test]
    fn skeleton_of_isomorphic_pair() {
        // two objects, each with G = C2, all four morphisms between them isos
        let ends = vec![(0, 0), (0, 0), (1, 1), (1, 1), (0, 1), (0, 1), (1, 0), (1, 0)];
        // model: every morphism is (src, dst, g ∈ C2); compose adds g
        let g_of = |i: usize| i % 2;
        let find = |s: usize, d: usize, g: usize| match (s, d) {
            (0, 0) => g,
            (1, 1) => 2 + g,
            (0, 1) => 4 + g,
            _ => 6 + g,
        };
        let e2 = ends.clone();
        let cat =
            EICategory::from_fn(2, ends, vec![0, 2], |a, b| Some(find(e2[b].0, e2[a].1, g_of(a) ^ g_of(b)))).unwrap();
        assert!(!cat.is_skeletal());
        let sk = cat.skeletalise().unwrap();
        assert_eq!(sk.category.object_count(), 1);
        assert_eq!(sk.category.hom(0, 0).len(), cat.hom(0, 0).len());
        assert_eq!(sk.object_map, vec![0, 0]);
        // transported morphisms compose like the originals
        for a in 0..8 {
            for b in 0..8 {
                if let Some(ab) = cat.try_compose(a, b) {
                    let m = &sk.morphism_map;
                    assert_eq!(sk.category.compose(m[a], m[b]), m[ab]);
                }
            }
        }
    }

    #[test]
    fn skeleton_of_skeletal_is_identity() {
        let d = diamond();
        let sk = d.skeletalise().unwrap();
        assert_eq!(sk.category, d);
        assert_eq!(sk.object_map, vec![0, 1, 2, 3]);
    }

    #[test]
    fn doubled_target_collapses_to_a2() {
        // 0 -> 1, 0 -> 2, 1 <-> 2 isomorphic
        let le = [true, true, true, false, true, true, false, true, true];
        let cat = poset_from_matrix(3, &le);
        let sk = cat.skeletalise().unwrap();
        assert_eq!(sk.category.object_count(), 2);
        assert_eq!(sk.category.morphism_count(), 3);
    }

    #[test]
    fn opposite_is_involution() {
        for c in [group(&FiniteGroup::cyclic(2)), a2(), free_left_trivial_right()] {
            assert_eq!(c.opposite().opposite(), c);
        }
    }

    #[test]
    fn unfactorisables_small_posets() {
        assert_eq!(a2().unfactorisables().len(), 1);
        let a3 = a3();
        let u = a3.unfactorisables();
        assert_eq!(u.len(), 2);
        assert!(u.iter().all(|&f| a3.dst(f) == a3.src(f) + 1));
        assert_eq!(diamond().unfactorisables().len(), 4);
    }

    #[test]
    fn theta_posets() {
        let a3 = a3();
        let long = a3.hom(0, 2)[0];
        let th = a3.theta_poset(long);
        assert_eq!(th.len(), 3);
        assert!(th.is_chain() && th.is_partial_order());
        assert_eq!(a3.theta_poset(a3.identity(1)).len(), 1);
        let d = diamond();
        let th = d.theta_poset(d.hom(0, 3)[0]);
        assert_eq!(th.len(), 4);
        assert!(!th.is_chain());
        assert!(th.is_partial_order());
    }

    #[test]
    fn ufp_checks() {
        assert!(a3().is_ufp().holds());
        let d = diamond();
        match d.is_ufp() {
            UfpResult::Fails { alpha, .. } => assert_eq!(alpha, d.hom(0, 3)[0]),
            UfpResult::Holds => panic!("diamond has UFP"),
        }
        assert_eq!(d.is_ufp_by_ladders(1000), Some(false));
        assert_eq!(a3().is_ufp_by_ladders(1000), Some(true));
        assert!(d.opposite().is_ufp().holds() == d.is_ufp().holds());
    }

    #[test]
    fn bisets() {
        let d = diamond();
        let dec = d.biset_decomposition(0, 3);
        assert_eq!(dec.orbits.len(), 1);
        assert_eq!(dec.stabilisers[0].order(), 1);
        let e = free_left_trivial_right();
        let dec = e.biset_decomposition(0, 1);
        assert_eq!(dec.orbits, vec![vec![4, 5]]);
        let h = &dec.stabilisers[0];
        assert_eq!(h.order(), 2);
        assert_eq!(dec.projection_left(h).order(), 1);
        assert_eq!(dec.projection_right(h).order(), 2);
    }

    #[test]
    fn conditions_on_free_left_trivial_right() {
        let e = free_left_trivial_right();
        let r = e.check_biset_conditions(f(2));
        assert!(!r.a_holds());
        assert!(r.b_holds());
        let r = e.opposite().check_biset_conditions(f(2));
        assert!(!r.a_holds());
        assert!(!r.b_holds());
        assert!(e.check_biset_conditions(f(0)).a_holds());
        assert!(e.check_biset_conditions(f(0)).b_holds());
    }

    #[test]
    fn decisions() {
        for side in [Side::Left, Side::Right] {
            assert!(a2().decide_hereditary(f(0), side).hereditary);
            let v = diamond().decide_hereditary(f(3), side);
            assert!(!v.hereditary);
            assert!(!v.clause("ufp").unwrap().holds);
        }
        let v = group(&FiniteGroup::cyclic(2)).decide_hereditary(f(2), Side::Left);
        assert!(!v.hereditary);
        assert!(!v.clause("group_rings").unwrap().holds);
        assert!(v.clause("ufp").unwrap().holds);
    }
}
