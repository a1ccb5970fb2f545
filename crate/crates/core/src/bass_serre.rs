//! Normalisers of finite subgroups in fundamental groups of finite graphs of
//! finite groups, read off from the subtree of the Bass–Serre tree fixed by
//! the subgroup.
//!
//! Directed edges come in pairs `y = 2i`, `ȳ = 2i + 1`. An edge `y` carries
//! `α_y: G_y → G_{t(y)}` and `β_y: G_y → G_{o(y)}`, with `α_ȳ = β_y` and
//! `β_ȳ = α_y`. Edges of the tree leaving a vertex with local group `G_P`
//! are the left cosets `a·β_y(G_y)` for `o(y) = P`.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::group::{FiniteGroup, GroupError, GroupMap, Subgroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BassSerreError {
    #[error("graph of groups has no vertices")]
    Empty,
    #[error("vertex {0} does not exist")]
    UnknownVertex(usize),
    #[error("graph of groups is not connected: vertex {0} is unreachable from vertex 0")]
    NotConnected(usize),
    #[error("edge {edge}: embedding is not an injective homomorphism: {source}")]
    NotInjective { edge: usize, source: GroupError },
    #[error("directed edges {0} and {1} are not consistent reverses of each other")]
    InconsistentReverse(usize, usize),
    #[error("F is not a subgroup of the vertex group at {0}")]
    FNotInVertexGroup(usize),
    #[error("depth {requested} exceeds the bound {bound}")]
    DepthBoundExceeded { requested: usize, bound: usize },
}

/// Largest depth accepted by [`expand_fixed_subtree`].
pub const MAX_DEPTH: usize = 64;
/// Explicit trees are kept only up to this many vertices.
pub const NODE_CAP: usize = 20_000;

/// An edge `o → t` with edge group `group`, given by the images of its
/// elements in the terminal and in the origin vertex group.
#[derive(Debug, Clone)]
pub struct EdgeSpec {
    pub origin: usize,
    pub terminus: usize,
    pub group: FiniteGroup,
    pub to_terminus: Vec<usize>,
    pub to_origin: Vec<usize>,
    pub label: String,
}

#[derive(Debug, Clone)]
pub struct DirectedEdge {
    pub origin: usize,
    pub terminus: usize,
    pub group: FiniteGroup,
    pub alpha: GroupMap,
    pub beta: GroupMap,
    pub reverse: usize,
    pub label: String,
}

#[derive(Debug, Clone)]
pub struct GraphOfGroups {
    vertices: Vec<FiniteGroup>,
    vertex_labels: Vec<String>,
    edges: Vec<DirectedEdge>,
}

impl GraphOfGroups {
    /// Validates a graph of groups given by geometric edges.
    pub fn new(vertices: Vec<FiniteGroup>, edges: Vec<EdgeSpec>) -> Result<Self, BassSerreError> {
        let mut directed = Vec::new();
        for (i, e) in edges.into_iter().enumerate() {
            for v in [e.origin, e.terminus] {
                if v >= vertices.len() {
                    return Err(BassSerreError::UnknownVertex(v));
                }
            }
            let alpha = GroupMap::monomorphism(&e.group, &vertices[e.terminus], e.to_terminus)
                .map_err(|source| BassSerreError::NotInjective { edge: i, source })?;
            let beta = GroupMap::monomorphism(&e.group, &vertices[e.origin], e.to_origin)
                .map_err(|source| BassSerreError::NotInjective { edge: i, source })?;
            let bar = format!("{}̄", e.label);
            directed.push(DirectedEdge {
                origin: e.origin,
                terminus: e.terminus,
                group: e.group.clone(),
                alpha: alpha.clone(),
                beta: beta.clone(),
                reverse: 2 * i + 1,
                label: e.label,
            });
            directed.push(DirectedEdge {
                origin: e.terminus,
                terminus: e.origin,
                group: e.group,
                alpha: beta,
                beta: alpha,
                reverse: 2 * i,
                label: bar,
            });
        }
        Self::from_directed(vertices, directed)
    }

    /// Validates explicitly given directed edges and their reverses.
    pub fn from_directed(vertices: Vec<FiniteGroup>, edges: Vec<DirectedEdge>) -> Result<Self, BassSerreError> {
        if vertices.is_empty() {
            return Err(BassSerreError::Empty);
        }
        for (i, e) in edges.iter().enumerate() {
            for v in [e.origin, e.terminus] {
                if v >= vertices.len() {
                    return Err(BassSerreError::UnknownVertex(v));
                }
            }
            let source_ok = e.alpha.source_order() == e.group.order() && e.beta.source_order() == e.group.order();
            if !source_ok {
                return Err(BassSerreError::NotInjective {
                    edge: i,
                    source: GroupError::MapLength { len: e.alpha.source_order(), expected: e.group.order() },
                });
            }
            for map in [&e.alpha, &e.beta] {
                map.check_injective().map_err(|source| BassSerreError::NotInjective { edge: i, source })?;
            }
            let r = e.reverse;
            let consistent = r < edges.len()
                && r != i
                && edges[r].reverse == i
                && edges[r].origin == e.terminus
                && edges[r].terminus == e.origin
                && edges[r].group == e.group
                && edges[r].alpha == e.beta
                && edges[r].beta == e.alpha;
            if !consistent {
                return Err(BassSerreError::InconsistentReverse(i, r));
            }
        }
        let n = vertices.len();
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            for e in edges.iter().filter(|e| e.origin == v) {
                if !seen[e.terminus] {
                    seen[e.terminus] = true;
                    queue.push_back(e.terminus);
                }
            }
        }
        if let Some(v) = seen.iter().position(|&s| !s) {
            return Err(BassSerreError::NotConnected(v));
        }
        Ok(GraphOfGroups { vertex_labels: (0..n).map(|v| v.to_string()).collect(), vertices, edges })
    }

    pub fn with_vertex_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.vertices.len());
        self.vertex_labels = labels;
        self
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_group(&self, v: usize) -> &FiniteGroup {
        &self.vertices[v]
    }

    pub fn vertex_label(&self, v: usize) -> &str {
        &self.vertex_labels[v]
    }

    pub fn edges(&self) -> &[DirectedEdge] {
        &self.edges
    }

    pub fn edge(&self, y: usize) -> &DirectedEdge {
        &self.edges[y]
    }

    fn outgoing(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.edges.len()).filter(move |&y| self.edges[y].origin == v)
    }

    /// Least representatives of the left cosets `a·β_y(G_y)` in `G_{o(y)}`.
    fn coset_reps(&self, y: usize) -> Vec<usize> {
        let e = &self.edges[y];
        let g = &self.vertices[e.origin];
        let image = e.group.whole().image(&e.beta);
        let mut covered = vec![false; g.order()];
        let mut reps = Vec::new();
        for a in g.elements() {
            if covered[a] {
                continue;
            }
            reps.push(a);
            for &h in image.members() {
                covered[g.mul(a, h)] = true;
            }
        }
        reps
    }

    /// Whether the abstract graph has a cycle or an edge whose group is
    /// proper in both end groups; either makes the fundamental group
    /// infinite.
    pub fn has_infinite_fundamental_group(&self) -> bool {
        let geometric = self.edges.len() / 2;
        if geometric + 1 > self.vertices.len() {
            return true;
        }
        self.edges.iter().step_by(2).any(|e| {
            e.group.order() < self.vertices[e.origin].order() && e.group.order() < self.vertices[e.terminus].order()
        })
    }

    fn f_subgroup(&self, p0: usize, f: &[usize]) -> Result<Subgroup, BassSerreError> {
        if p0 >= self.vertices.len() {
            return Err(BassSerreError::UnknownVertex(p0));
        }
        self.vertices[p0].subgroup_from_members(f).ok_or(BassSerreError::FNotInVertexGroup(p0))
    }
}

/// A state: a directed edge `y` of the fixed subtree leaving its origin,
/// with the edge-group subgroup `K ≤ G_y` that `F` becomes there.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct State {
    pub edge: usize,
    pub subgroup: Subgroup,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Transition {
    pub from: usize,
    pub to: usize,
    /// least representative of the coset realising the move
    pub conjugator: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct StateGraph {
    pub base: usize,
    pub f: Subgroup,
    pub states: Vec<State>,
    /// `(state, coset representative in G_{P0})`
    pub initial: Vec<(usize, usize)>,
    pub transitions: Vec<Transition>,
}

impl StateGraph {
    fn successors(&self, s: usize) -> impl Iterator<Item = &Transition> {
        self.transitions.iter().filter(move |t| t.from == s)
    }

    /// A state on a cycle reachable from the initial states, if any.
    pub fn reachable_cycle(&self) -> Option<Vec<usize>> {
        // colour-based depth-first search
        let n = self.states.len();
        let mut colour = vec![0u8; n];
        let mut parent = vec![usize::MAX; n];
        for &(root, _) in &self.initial {
            if colour[root] != 0 {
                continue;
            }
            let mut stack = vec![(root, 0usize)];
            colour[root] = 1;
            while let Some(&mut (s, ref mut i)) = stack.last_mut() {
                let next: Vec<usize> = self.successors(s).map(|t| t.to).collect();
                if *i < next.len() {
                    let t = next[*i];
                    *i += 1;
                    match colour[t] {
                        0 => {
                            colour[t] = 1;
                            parent[t] = s;
                            stack.push((t, 0));
                        }
                        1 => {
                            let mut cycle = vec![s];
                            let mut x = s;
                            while x != t {
                                x = parent[x];
                                cycle.push(x);
                            }
                            cycle.reverse();
                            return Some(cycle);
                        }
                        _ => {}
                    }
                } else {
                    colour[s] = 2;
                    stack.pop();
                }
            }
        }
        None
    }
}

/// Moves along `y` carrying the subgroup `L ≤ G_{o(y)}` after conjugating by
/// `a`: returns `β_y⁻¹(a⁻¹ L a)` if `a⁻¹ L a ⊆ β_y(G_y)`.
fn push_into_edge(gog: &GraphOfGroups, y: usize, l: &Subgroup, a: usize) -> Option<Subgroup> {
    let e = &gog.edges[y];
    let g = &gog.vertices[e.origin];
    let conj = g.conjugate(l, g.inv(a));
    let image = e.group.whole().image(&e.beta);
    conj.is_subset_of(&image).then(|| Subgroup::preimage(&conj, &e.beta))
}

/// The finite abstraction of the fixed subtree `X^F`.
pub fn fixed_subtree_states(gog: &GraphOfGroups, p0: usize, f: &[usize]) -> Result<StateGraph, BassSerreError> {
    let f = gog.f_subgroup(p0, f)?;
    let mut states: Vec<State> = Vec::new();
    let mut index: HashMap<State, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut intern = |s: State, states: &mut Vec<State>, queue: &mut VecDeque<usize>| -> usize {
        *index.entry(s.clone()).or_insert_with(|| {
            states.push(s);
            queue.push_back(states.len() - 1);
            states.len() - 1
        })
    };
    let mut initial = Vec::new();
    for y in gog.outgoing(p0) {
        for a in gog.coset_reps(y) {
            if let Some(k) = push_into_edge(gog, y, &f, a) {
                let s = intern(State { edge: y, subgroup: k }, &mut states, &mut queue);
                initial.push((s, a));
            }
        }
    }
    let mut transitions = Vec::new();
    while let Some(s) = queue.pop_front() {
        let State { edge: y, subgroup: k } = states[s].clone();
        let e = &gog.edges[y];
        let arrived = k.image(&e.alpha);
        let back = e.group.whole().image(&e.alpha);
        for z in gog.outgoing(e.terminus) {
            for a in gog.coset_reps(z) {
                if z == e.reverse && back.contains(a) {
                    continue;
                }
                if let Some(k2) = push_into_edge(gog, z, &arrived, a) {
                    let t = intern(State { edge: z, subgroup: k2 }, &mut states, &mut queue);
                    transitions.push(Transition { from: s, to: t, conjugator: a });
                }
            }
        }
    }
    Ok(StateGraph { base: p0, f, states, initial, transitions })
}

/// A word `r_0 y_1 r_1 … y_n r_n` with `r_i ∈ G_{t(y_i)}` and `r_0 ∈ G_{P0}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReducedWord {
    pub base: usize,
    pub edges: Vec<usize>,
    pub elements: Vec<usize>,
}

impl ReducedWord {
    pub fn vertex_at(&self, gog: &GraphOfGroups, i: usize) -> usize {
        if i == 0 {
            self.base
        } else {
            gog.edges[self.edges[i - 1]].terminus
        }
    }

    /// Whether the path is closed at the base and the word is reduced.
    pub fn is_reduced(&self, gog: &GraphOfGroups) -> bool {
        if self.elements.len() != self.edges.len() + 1 {
            return false;
        }
        let mut v = self.base;
        for &y in &self.edges {
            if gog.edges[y].origin != v {
                return false;
            }
            v = gog.edges[y].terminus;
        }
        if v != self.base {
            return false;
        }
        if self.edges.is_empty() {
            return self.elements[0] != gog.vertices[self.base].identity();
        }
        self.edges.windows(2).enumerate().all(|(i, w)| {
            let e = &gog.edges[w[0]];
            w[1] != e.reverse || !e.group.whole().image(&e.alpha).contains(self.elements[i + 1])
        })
    }

    /// Canonical representative under `(…, r_{i-1}, r_i, …) ~ (…, r_{i-1}·β(a),
    /// α(a)⁻¹·r_i, …)`: each `r_i` with `i ≥ 1` is made least in its coset,
    /// working from the right.
    pub fn canonical(&self, gog: &GraphOfGroups) -> ReducedWord {
        let mut w = self.clone();
        for i in (1..=w.edges.len()).rev() {
            let e = &gog.edges[w.edges[i - 1]];
            let gt = &gog.vertices[e.terminus];
            let go = &gog.vertices[e.origin];
            let best = e
                .group
                .elements()
                .min_by_key(|&a| gt.mul(gt.inv(e.alpha.apply(a)), w.elements[i]))
                .expect("edge groups are nonempty");
            w.elements[i] = gt.mul(gt.inv(e.alpha.apply(best)), w.elements[i]);
            w.elements[i - 1] = go.mul(w.elements[i - 1], e.beta.apply(best));
        }
        w
    }

    /// Conjugates `F ≤ G_{P0}` through the word; returns `g⁻¹ F g` if every
    /// intermediate subgroup lies in the next edge group.
    pub fn replay(&self, gog: &GraphOfGroups, f: &Subgroup) -> Option<Subgroup> {
        let mut l = f.clone();
        let mut v = self.base;
        for (i, &y) in self.edges.iter().enumerate() {
            let k = push_into_edge(gog, y, &l, self.elements[i])?;
            l = k.image(&gog.edges[y].alpha);
            v = gog.edges[y].terminus;
        }
        let g = &gog.vertices[v];
        let last = *self.elements.last()?;
        Some(g.conjugate(&l, g.inv(last)))
    }

    /// Length of the cyclic reduction; positive iff the element acts on the
    /// tree as a translation and so has infinite order.
    pub fn cyclic_length(&self, gog: &GraphOfGroups) -> usize {
        let n = self.edges.len();
        if n == 0 {
            return 0;
        }
        let mut edges = self.edges.clone();
        let mut inner: Vec<usize> = self.elements[1..n].to_vec();
        let v = self.base;
        let g = &gog.vertices[v];
        let mut junction = g.mul(self.elements[n], self.elements[0]);
        loop {
            let m = edges.len();
            if m == 0 {
                return 0;
            }
            let last = &gog.edges[edges[m - 1]];
            if edges[0] != last.reverse {
                return m;
            }
            let image = last.group.whole().image(&last.alpha);
            if !image.contains(junction) {
                return m;
            }
            // y_m a^{y_m} ȳ_m = a^{ȳ_m}: drop both edges and merge
            let a = last.alpha.preimage_of(junction).unwrap();
            let merged_vertex = last.origin;
            let gm = &gog.vertices[merged_vertex];
            let folded = last.beta.apply(a);
            if m == 2 {
                return 0;
            }
            let left = inner[m - 2];
            let right = inner[0];
            junction = gm.mul(gm.mul(left, folded), right);
            edges = edges[1..m - 1].to_vec();
            inner = inner[1..m - 2].to_vec();
        }
    }

    pub fn render(&self, gog: &GraphOfGroups) -> String {
        let mut out = Vec::new();
        for (i, &r) in self.elements.iter().enumerate() {
            out.push(gog.vertices[self.vertex_at(gog, i)].label(r));
            if i < self.edges.len() {
                out.push(gog.edges[self.edges[i]].label.clone());
            }
        }
        out.join(" ")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Centre {
    Vertex { vertex: usize, depth: usize },
    Edge { edge: usize, depth: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum NormaliserResult {
    /// `N_π(F)` realised inside the stabiliser of the centre of `X^F`, in the
    /// local coordinates of that vertex or edge group.
    Finite {
        centre: Centre,
        local_subgroup: Subgroup,
        normaliser: Subgroup,
        order: usize,
        tree_size: usize,
    },
    Infinite {
        witness: ReducedWord,
        cycle: Vec<State>,
    },
}

impl NormaliserResult {
    pub fn is_infinite(&self) -> bool {
        matches!(self, NormaliserResult::Infinite { .. })
    }
}

/// A vertex of an explicit fixed subtree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeVertex {
    pub parent: Option<usize>,
    /// edge of the graph of groups and coset representative leading here
    pub via: Option<(usize, usize)>,
    pub vertex: usize,
    /// image of `F` in the local vertex group
    pub subgroup: Subgroup,
    pub depth: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct FixedSubtree {
    pub level_sizes: Vec<u64>,
    /// present when the tree has at most [`NODE_CAP`] vertices
    pub vertices: Option<Vec<TreeVertex>>,
}

impl FixedSubtree {
    pub fn is_empty_at(&self, depth: usize) -> bool {
        self.level_sizes.get(depth).is_none_or(|&c| c == 0)
    }
}

/// Children of a tree vertex at `v` with local subgroup `l`, reached along
/// `arrival` (if not the root).
fn children(gog: &GraphOfGroups, v: usize, l: &Subgroup, arrival: Option<usize>) -> Vec<(usize, usize, Subgroup)> {
    let mut out = Vec::new();
    let back = arrival.map(|y| {
        let e = &gog.edges[y];
        (e.reverse, e.group.whole().image(&e.alpha))
    });
    for z in gog.outgoing(v) {
        for a in gog.coset_reps(z) {
            if let Some((r, img)) = &back {
                if z == *r && img.contains(a) {
                    continue;
                }
            }
            if let Some(k) = push_into_edge(gog, z, l, a) {
                out.push((z, a, k.image(&gog.edges[z].alpha)));
            }
        }
    }
    out
}

/// Explicit expansion of `X^F` around the base vertex to the given depth.
/// Level sizes are counted with multiplicity over vertex types, so they
/// stay exact when the explicit tree is too large to keep.
pub fn expand_fixed_subtree(
    gog: &GraphOfGroups,
    p0: usize,
    f: &[usize],
    depth: usize,
) -> Result<FixedSubtree, BassSerreError> {
    if depth > MAX_DEPTH {
        return Err(BassSerreError::DepthBoundExceeded { requested: depth, bound: MAX_DEPTH });
    }
    let f = gog.f_subgroup(p0, f)?;
    type Key = (usize, Subgroup, Option<usize>);
    let mut level: BTreeMap<Key, u64> = BTreeMap::from([((p0, f.clone(), None), 1)]);
    let mut sizes = vec![1u64];
    let mut vertices = Some(vec![TreeVertex { parent: None, via: None, vertex: p0, subgroup: f, depth: 0 }]);
    let mut frontier: Vec<usize> = vec![0];
    for d in 1..=depth {
        let mut next: BTreeMap<Key, u64> = BTreeMap::new();
        for ((v, l, arrival), count) in &level {
            for (z, _, k) in children(gog, *v, l, *arrival) {
                let slot = next.entry((gog.edges[z].terminus, k, Some(z))).or_insert(0);
                *slot = slot.saturating_add(*count);
            }
        }
        let total = next.values().fold(0u64, |a, &b| a.saturating_add(b));
        sizes.push(total);
        if let Some(list) = vertices.as_mut() {
            if (list.len() as u64).saturating_add(total) > NODE_CAP as u64 {
                vertices = None;
            } else {
                let mut new_frontier = Vec::new();
                for &i in &frontier {
                    let node = list[i].clone();
                    for (z, a, k) in children(gog, node.vertex, &node.subgroup, node.via.map(|(y, _)| y)) {
                        list.push(TreeVertex {
                            parent: Some(i),
                            via: Some((z, a)),
                            vertex: gog.edges[z].terminus,
                            subgroup: k,
                            depth: d,
                        });
                        new_frontier.push(list.len() - 1);
                    }
                }
                frontier = new_frontier;
            }
        }
        level = next;
        if total == 0 {
            break;
        }
    }
    Ok(FixedSubtree { level_sizes: sizes, vertices })
}

/// Decides whether `N_π(F)` is infinite for `F ≤ G_{P0}` given by its
/// members. Termination of the search rests on the finiteness of the state
/// set.
pub fn normaliser_finiteness(gog: &GraphOfGroups, p0: usize, f: &[usize]) -> Result<NormaliserResult, BassSerreError> {
    let graph = fixed_subtree_states(gog, p0, f)?;
    match graph.reachable_cycle() {
        Some(cycle) => {
            let witness = closed_witness(gog, &graph).unwrap_or_else(|| conjugated_witness(gog, &graph, &cycle));
            let cycle = cycle.into_iter().map(|s| graph.states[s].clone()).collect();
            Ok(NormaliserResult::Infinite { witness, cycle })
        }
        None => finite_normaliser(gog, p0, f, graph.states.len() + 1),
    }
}

/// Breadth-first search for a closed walk from the base whose word, closed
/// by the least conjugator back onto `F`, is cyclically reduced.
fn closed_witness(gog: &GraphOfGroups, graph: &StateGraph) -> Option<ReducedWord> {
    let p0 = graph.base;
    let g0 = &gog.vertices[p0];
    for &(start, r0) in &graph.initial {
        let mut parent: HashMap<usize, Option<(usize, usize)>> = HashMap::from([(start, None)]);
        let mut queue = VecDeque::from([start]);
        while let Some(s) = queue.pop_front() {
            let y = graph.states[s].edge;
            let e = &gog.edges[y];
            if e.terminus == p0 {
                let l = graph.states[s].subgroup.image(&e.alpha);
                let trans = g0.transporter_set(&l, &graph.f);
                if let (Some(&b), true) = (trans.first(), l.order() == graph.f.order()) {
                    let rn = g0.inv(b);
                    // rebuild the path
                    let mut path = vec![s];
                    let mut conj = Vec::new();
                    let mut x = s;
                    while let Some(Some((p, a))) = parent.get(&x) {
                        conj.push(*a);
                        path.push(*p);
                        x = *p;
                    }
                    path.reverse();
                    conj.reverse();
                    let mut elements = vec![r0];
                    elements.extend(conj);
                    elements.push(rn);
                    let word =
                        ReducedWord { base: p0, edges: path.iter().map(|&s| graph.states[s].edge).collect(), elements };
                    if word.is_reduced(gog) && word.cyclic_length(gog) > 0 {
                        return Some(word);
                    }
                }
            }
            for t in graph.successors(s) {
                if let std::collections::hash_map::Entry::Vacant(slot) = parent.entry(t.to) {
                    slot.insert(Some((s, t.conjugator)));
                    queue.push_back(t.to);
                }
            }
        }
    }
    None
}

/// The element `w_j w_i⁻¹` for two tree edges on a common ray carrying the
/// same state; it normalises `F` and translates along the ray.
fn conjugated_witness(gog: &GraphOfGroups, graph: &StateGraph, cycle: &[usize]) -> ReducedWord {
    let target = cycle[0];
    // path from an initial state to the cycle start
    let mut parent: HashMap<usize, (usize, usize)> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut start = None;
    for &(s, r0) in &graph.initial {
        if let std::collections::hash_map::Entry::Vacant(slot) = parent.entry(s) {
            slot.insert((usize::MAX, r0));
            queue.push_back(s);
        }
    }
    while let Some(s) = queue.pop_front() {
        if s == target {
            start = Some(s);
            break;
        }
        for t in graph.successors(s) {
            if let std::collections::hash_map::Entry::Vacant(slot) = parent.entry(t.to) {
                slot.insert((s, t.conjugator));
                queue.push_back(t.to);
            }
        }
    }
    let mut prefix_states = Vec::new();
    let mut prefix_conj = Vec::new();
    let mut x = start.expect("cycle is reachable");
    loop {
        let (p, a) = parent[&x];
        prefix_states.push(x);
        prefix_conj.push(a);
        if p == usize::MAX {
            break;
        }
        x = p;
    }
    prefix_states.reverse();
    prefix_conj.reverse();
    // around the cycle: conjugators of the transitions cycle[k] -> cycle[k+1]
    let m = cycle.len();
    let mut cycle_conj = Vec::new();
    for k in 0..m {
        let (a, b) = (cycle[k], cycle[(k + 1) % m]);
        let t = graph.transitions.iter().find(|t| t.from == a && t.to == b).unwrap();
        cycle_conj.push(t.conjugator);
    }
    // w_i = r_0 y_1 … y_i r_i, with edge i+1 = the cycle start
    let i = prefix_states.len() - 1;
    let mut edges: Vec<usize> = prefix_states.iter().map(|&s| graph.states[s].edge).collect();
    let mut elements: Vec<usize> = prefix_conj.clone();
    for k in 1..m {
        edges.push(graph.states[cycle[k]].edge);
    }
    elements.extend_from_slice(&cycle_conj[..m - 1]);
    // the next edge would be the cycle start again with conjugator cycle_conj[m-1]
    let closing = cycle_conj[m - 1];
    let mut word_edges = edges.clone();
    let mut word_elements = elements.clone();
    // last vertex: origin of the cycle start edge
    let v = gog.edges[graph.states[cycle[0]].edge].origin;
    let gv = &gog.vertices[v];
    let ri = prefix_conj[i];
    word_elements.push(gv.mul(closing, gv.inv(ri)));
    // inverse of the prefix w_{i-1} y_i: edges reversed
    for k in (0..i).rev() {
        word_edges.push(gog.edges[edges[k]].reverse);
        let vk = if k == 0 { graph.base } else { gog.edges[edges[k - 1]].terminus };
        word_elements.push(gog.vertices[vk].inv(prefix_conj[k]));
    }
    reduce(gog, ReducedWord { base: graph.base, edges: word_edges, elements: word_elements })
}

/// Removes backtracking `y a^y ȳ` until the word is reduced.
fn reduce(gog: &GraphOfGroups, mut w: ReducedWord) -> ReducedWord {
    loop {
        let pos = (0..w.edges.len().saturating_sub(1)).find(|&i| {
            let e = &gog.edges[w.edges[i]];
            w.edges[i + 1] == e.reverse && e.group.whole().image(&e.alpha).contains(w.elements[i + 1])
        });
        let Some(i) = pos else { return w };
        let e = &gog.edges[w.edges[i]];
        let a = e.alpha.preimage_of(w.elements[i + 1]).unwrap();
        let g = &gog.vertices[e.origin];
        let merged = g.mul(g.mul(w.elements[i], e.beta.apply(a)), w.elements[i + 2]);
        w.edges.drain(i..i + 2);
        w.elements.splice(i..i + 3, [merged]);
    }
}

fn finite_normaliser(
    gog: &GraphOfGroups,
    p0: usize,
    f: &[usize],
    depth: usize,
) -> Result<NormaliserResult, BassSerreError> {
    let tree = expand_fixed_subtree(gog, p0, f, depth.min(MAX_DEPTH))?;
    let nodes = tree.vertices.expect("finite fixed subtrees are small at this scale");
    let n = nodes.len();
    let mut adj = vec![Vec::new(); n];
    for (i, v) in nodes.iter().enumerate() {
        if let Some(p) = v.parent {
            adj[p].push(i);
            adj[i].push(p);
        }
    }
    let bfs = |root: usize| -> (Vec<usize>, Vec<usize>) {
        let mut dist = vec![usize::MAX; n];
        let mut from = vec![usize::MAX; n];
        dist[root] = 0;
        let mut q = VecDeque::from([root]);
        while let Some(x) = q.pop_front() {
            for &y in &adj[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    from[y] = x;
                    q.push_back(y);
                }
            }
        }
        (dist, from)
    };
    let farthest = |dist: &[usize]| (0..n).max_by_key(|&i| (dist[i], std::cmp::Reverse(i))).unwrap();
    let (d0, _) = bfs(0);
    let a = farthest(&d0);
    let (da, from) = bfs(a);
    let b = farthest(&da);
    let mut path = vec![b];
    while *path.last().unwrap() != a {
        path.push(from[*path.last().unwrap()]);
    }
    let len = path.len() - 1;
    let (centre, group, local) = if len % 2 == 0 {
        let c = &nodes[path[len / 2]];
        (Centre::Vertex { vertex: c.vertex, depth: c.depth }, gog.vertices[c.vertex].clone(), c.subgroup.clone())
    } else {
        let (x, y) = (path[len / 2], path[len / 2 + 1]);
        let child = if nodes[x].parent == Some(y) { x } else { y };
        let (z, _) = nodes[child].via.unwrap();
        let e = &gog.edges[z];
        let k = Subgroup::preimage(&nodes[child].subgroup, &e.alpha);
        (Centre::Edge { edge: z, depth: nodes[child].depth }, e.group.clone(), k)
    };
    let normaliser = group.normaliser(&local);
    Ok(NormaliserResult::Finite { order: normaliser.order(), centre, local_subgroup: local, normaliser, tree_size: n })
}

impl fmt::Display for NormaliserResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormaliserResult::Finite { order, .. } => write!(f, "finite normaliser of order {order}"),
            NormaliserResult::Infinite { witness, .. } => {
                write!(f, "infinite normaliser, witness of length {}", witness.edges.len())
            }
        }
    }
}

/// Standard graphs of groups used in tests and presets.
pub mod examples {
    use super::*;
    use crate::group::subgroup_as_group;

    /// `A ∗_C B` along a single edge.
    pub fn amalgam(
        a: &FiniteGroup,
        b: &FiniteGroup,
        c: &FiniteGroup,
        into_a: Vec<usize>,
        into_b: Vec<usize>,
    ) -> Result<GraphOfGroups, BassSerreError> {
        GraphOfGroups::new(
            vec![a.clone(), b.clone()],
            vec![EdgeSpec {
                origin: 0,
                terminus: 1,
                group: c.clone(),
                to_terminus: into_b,
                to_origin: into_a,
                label: "y".into(),
            }],
        )
    }

    /// `D8 ∗_C D8` with `C = ⟨τ, σ²τ⟩`.
    pub fn dihedral_amalgam() -> GraphOfGroups {
        let d8 = FiniteGroup::dihedral(8);
        let c = d8.subgroup_closure(&[4, 6]).unwrap();
        let (cg, inc) = subgroup_as_group(&d8, &c);
        amalgam(&d8, &d8, &cg, inc.images().to_vec(), inc.images().to_vec()).unwrap()
    }

    /// One vertex `V4 = {1, a, b, c}` with a loop `t` whose two embeddings
    /// differ by the automorphism of order three.
    pub fn klein_loop() -> GraphOfGroups {
        let v4 = FiniteGroup::klein_four();
        GraphOfGroups::new(
            vec![v4.clone()],
            vec![EdgeSpec {
                origin: 0,
                terminus: 0,
                group: v4,
                to_terminus: vec![0, 2, 3, 1],
                to_origin: vec![0, 1, 2, 3],
                label: "t".into(),
            }],
        )
        .unwrap()
    }

    /// `SL2(Z) ≅ Z/4 ∗_{Z/2} Z/6`.
    pub fn sl2z() -> GraphOfGroups {
        let c2 = FiniteGroup::cyclic(2);
        amalgam(&FiniteGroup::cyclic(4), &FiniteGroup::cyclic(6), &c2, vec![0, 2], vec![0, 3]).unwrap()
    }

    /// `PSL2(Z) ≅ Z/2 ∗ Z/3`.
    pub fn psl2z() -> GraphOfGroups {
        amalgam(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(3), &FiniteGroup::trivial(), vec![0], vec![0]).unwrap()
    }

    /// `Z/2 ∗ Z/2`.
    pub fn infinite_dihedral() -> GraphOfGroups {
        let c2 = FiniteGroup::cyclic(2);
        amalgam(&c2, &c2, &FiniteGroup::trivial(), vec![0], vec![0]).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::examples::*;
    use super::*;

    #[test]
    fn validation_errors() {
        let c2 = FiniteGroup::cyclic(2);
        let bad = GraphOfGroups::new(
            vec![c2.clone(), c2.clone()],
            vec![EdgeSpec {
                origin: 0,
                terminus: 1,
                group: c2.clone(),
                to_terminus: vec![0, 0],
                to_origin: vec![0, 1],
                label: "y".into(),
            }],
        );
        assert!(matches!(bad, Err(BassSerreError::NotInjective { .. })));
        let disconnected = GraphOfGroups::new(vec![c2.clone(), c2.clone()], vec![]);
        assert!(matches!(disconnected, Err(BassSerreError::NotConnected(1))));
        assert!(GraphOfGroups::new(vec![c2], vec![]).is_ok());
        let mut edges = infinite_dihedral().edges().to_vec();
        edges[1].origin = 0;
        assert!(matches!(
            GraphOfGroups::from_directed(vec![FiniteGroup::cyclic(2); 2], edges),
            Err(BassSerreError::InconsistentReverse(..))
        ));
    }

    #[test]
    fn dihedral_witness() {
        let g = dihedral_amalgam();
        let graph = fixed_subtree_states(&g, 0, &[0, 4]).unwrap();
        assert!(graph.reachable_cycle().is_some());
        let r = normaliser_finiteness(&g, 0, &[0, 4]).unwrap();
        let NormaliserResult::Infinite { witness, .. } = r else { panic!("expected infinite") };
        let expected = ReducedWord { base: 0, edges: vec![0, 1], elements: vec![0, 1, 3] };
        assert_eq!(witness.canonical(&g), expected.canonical(&g));
        assert_eq!(witness.render(&g), "1 y s y\u{304} s3");
        let f = g.vertex_group(0).subgroup_closure(&[4]).unwrap();
        assert_eq!(witness.replay(&g, &f), Some(f));
        assert!(witness.cyclic_length(&g) > 0);
    }

    #[test]
    fn klein_loop_needs_three_turns() {
        let g = klein_loop();
        let r = normaliser_finiteness(&g, 0, &[0, 1]).unwrap();
        let NormaliserResult::Infinite { witness, cycle } = r else { panic!("expected infinite") };
        assert_eq!(cycle.len(), 3);
        assert_eq!(witness.edges, vec![0, 0, 0]);
        assert_eq!(witness.elements, vec![0, 0, 0, 0]);
    }

    #[test]
    fn translation_witnesses() {
        for (g, f) in [(dihedral_amalgam(), vec![0, 4]), (klein_loop(), vec![0, 1]), (infinite_dihedral(), vec![0])] {
            let graph = fixed_subtree_states(&g, 0, &f).unwrap();
            let cycle = graph.reachable_cycle().unwrap();
            let w = conjugated_witness(&g, &graph, &cycle);
            assert!(w.is_reduced(&g), "{w:?}");
            assert!(w.cyclic_length(&g) > 0);
            assert_eq!(w.replay(&g, &graph.f), Some(graph.f.clone()));
        }
    }

    #[test]
    fn finite_examples() {
        let g = sl2z();
        let r = normaliser_finiteness(&g, 1, &[0, 2, 4]).unwrap();
        assert!(matches!(r, NormaliserResult::Finite { order: 6, .. }), "{r:?}");
        let tree = expand_fixed_subtree(&g, 1, &[0, 2, 4], 5).unwrap();
        assert_eq!(tree.level_sizes, vec![1, 0]);
        let g = infinite_dihedral();
        let r = normaliser_finiteness(&g, 0, &[0, 1]).unwrap();
        assert!(matches!(r, NormaliserResult::Finite { order: 2, .. }));
    }

    #[test]
    fn trivial_subgroup_line() {
        let g = infinite_dihedral();
        let tree = expand_fixed_subtree(&g, 0, &[0], 6).unwrap();
        assert_eq!(tree.level_sizes, vec![1, 2, 2, 2, 2, 2, 2]);
        assert!(normaliser_finiteness(&g, 0, &[0]).unwrap().is_infinite());
    }

    #[test]
    fn normal_subgroup_of_sl2z() {
        let g = sl2z();
        assert!(normaliser_finiteness(&g, 0, &[0, 2]).unwrap().is_infinite());
        assert!(normaliser_finiteness(&psl2z(), 1, &[0, 1, 2]).map(|r| !r.is_infinite()).unwrap());
    }

    #[test]
    fn f_must_be_a_subgroup() {
        assert_eq!(normaliser_finiteness(&sl2z(), 0, &[1]).unwrap_err(), BassSerreError::FNotInVertexGroup(0));
    }
}
