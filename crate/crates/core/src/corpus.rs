//! Seeded generation of small finite EI categories for agreement sweeps.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bass_serre::{EdgeSpec, GraphOfGroups};
use crate::category::{examples as cats, EICategory};
use crate::constructions::{examples as gposets, orbit_category, quillen_category, transporter_category, GPoset};
use crate::group::{embeddings, subgroup_as_group, FiniteGroup};
use crate::oracle::GroupSet;
use crate::quiver::{build_free_category, Arrow, EIQuiver};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusLimits {
    pub max_objects: usize,
    pub group_orders: Vec<usize>,
    pub max_biset: usize,
    /// bound on the number of morphisms, the dimension of the algebra
    pub max_dim: usize,
    pub quivers: usize,
    pub posets: usize,
    pub transporters: usize,
}

impl Default for CorpusLimits {
    fn default() -> Self {
        CorpusLimits {
            max_objects: 4,
            group_orders: vec![1, 2, 3, 4, 6],
            max_biset: 12,
            max_dim: 300,
            quivers: 60,
            posets: 25,
            transporters: 25,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stratum {
    FreeQuiver,
    Poset,
    Transporter,
    Fixed,
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub stratum: Stratum,
    pub category: EICategory,
}

const ATTEMPTS: usize = 200;

/// Groups available for each order.
pub fn groups_of_order(order: usize) -> Vec<FiniteGroup> {
    match order {
        4 => vec![FiniteGroup::cyclic(4), FiniteGroup::klein_four()],
        6 => vec![FiniteGroup::cyclic(6), FiniteGroup::symmetric3()],
        n => vec![FiniteGroup::cyclic(n)],
    }
}

fn random_group(rng: &mut ChaCha8Rng, limits: &CorpusLimits) -> FiniteGroup {
    let order = *limits.group_orders.choose(rng).unwrap_or(&1);
    groups_of_order(order).choose(rng).unwrap().clone()
}

/// Point count with left and right action tables.
type Biset = (usize, Vec<Vec<usize>>, Vec<Vec<usize>>);

/// A random `(G_d, G_c)`-biset with at most `budget` points, as a disjoint
/// union of transitive pieces `(G_d × G_c^op)/H`.
fn random_biset(rng: &mut ChaCha8Rng, gd: &FiniteGroup, gc: &FiniteGroup, budget: usize) -> Option<Biset> {
    let product = gd.direct_product(&gc.opposite());
    let subgroups: Vec<_> =
        product.all_subgroups().into_iter().filter(|h| product.order() / h.order() <= budget).collect();
    if subgroups.is_empty() {
        return None;
    }
    let pieces = rng.gen_range(1..=2);
    let mut size = 0;
    let mut left = vec![Vec::new(); gd.order()];
    let mut right = vec![Vec::new(); gc.order()];
    for _ in 0..pieces {
        let h = subgroups.choose(rng).unwrap();
        let index = product.order() / h.order();
        if size + index > budget {
            break;
        }
        let set = GroupSet::cosets(&product, h);
        for a in gd.elements() {
            let p = a * gc.order() + gc.identity();
            left[a].extend(set.action[p].iter().map(|&x| x + size));
        }
        for b in gc.elements() {
            let p = gd.identity() * gc.order() + b;
            right[b].extend(set.action[p].iter().map(|&x| x + size));
        }
        size += index;
    }
    (size > 0).then_some((size, left, right))
}

/// A random EI quiver on vertices `0..n` with arrows only from lower to
/// higher index.
pub fn random_quiver(rng: &mut ChaCha8Rng, limits: &CorpusLimits) -> EIQuiver {
    let n = rng.gen_range(1..=limits.max_objects.max(1));
    let groups: Vec<FiniteGroup> = (0..n).map(|_| random_group(rng, limits)).collect();
    let mut arrows = Vec::new();
    for c in 0..n {
        for d in c + 1..n {
            let count = *[0, 1, 1, 1, 2].choose(rng).unwrap();
            for _ in 0..count {
                let budget = rng.gen_range(1..=limits.max_biset.max(1));
                if let Some((size, left, right)) = random_biset(rng, &groups[d], &groups[c], budget) {
                    arrows.push(Arrow { src: c, dst: d, size, left, right });
                }
            }
        }
    }
    EIQuiver::new(groups, arrows).expect("random quivers are valid")
}

/// A random poset category on at most `max_objects` elements.
pub fn random_poset(rng: &mut ChaCha8Rng, limits: &CorpusLimits) -> EICategory {
    let n = rng.gen_range(1..=limits.max_objects.max(1));
    let density = rng.gen_range(0.2..0.8);
    let relations: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|_| rng.gen_bool(density)).collect();
    cats::poset(n, &relations)
}

/// A random G-poset built from up to three orbits `G/H`, related only from
/// lower to higher orbit index and closed under the action.
pub fn random_gposet(rng: &mut ChaCha8Rng, limits: &CorpusLimits) -> GPoset {
    loop {
        let g = random_group(rng, limits);
        let subgroups = g.all_subgroups();
        let orbits = rng.gen_range(1..=3.min(limits.max_objects.max(1)));
        let mut sets = Vec::new();
        let mut offset = Vec::new();
        let mut n = 0;
        for _ in 0..orbits {
            let h = subgroups.choose(rng).unwrap();
            let set = GroupSet::cosets(&g, h);
            offset.push(n);
            n += set.points;
            sets.push(set);
        }
        if n > 8 {
            continue;
        }
        let mut action = vec![vec![0; n]; g.order()];
        for (set, &o) in sets.iter().zip(&offset) {
            for a in g.elements() {
                for x in 0..set.points {
                    action[a][o + x] = o + set.action[a][x];
                }
            }
        }
        let mut relations = Vec::new();
        for i in 0..orbits {
            for j in i + 1..orbits {
                if rng.gen_bool(0.6) {
                    let y = offset[j] + rng.gen_range(0..sets[j].points);
                    for a in g.elements() {
                        relations.push((action[a][offset[i]], action[a][y]));
                    }
                }
            }
        }
        if let Ok(p) = GPoset::from_relations(n, &relations, g, action) {
            return p;
        }
    }
}

/// Transporter category reduced to one object per orbit.
pub fn skeletal_transporter(p: &GPoset) -> EICategory {
    let cat = transporter_category(p).expect("finite G-posets satisfy (S)");
    cat.skeletalise().expect("transporter categories are EI").category
}

fn fixed_stratum() -> Vec<(String, EICategory)> {
    let s3 = FiniteGroup::symmetric3();
    let c4 = FiniteGroup::cyclic(4);
    let v4 = FiniteGroup::klein_four();
    let s3_all = s3.family_closure(&[s3.whole()]);
    let c4_all = c4.family_closure(&[c4.whole()]);
    let v4_all = v4.family_closure(&[v4.whole()]);
    let c2 = s3.all_subgroups().into_iter().find(|h| h.order() == 2).unwrap();
    let s3_c2 = s3.family_closure(&[c2]);
    vec![
        ("diamond".into(), cats::diamond()),
        ("a3".into(), cats::a3()),
        ("free_left_trivial_right".into(), cats::free_left_trivial_right()),
        ("diamond_swap".into(), skeletal_transporter(&gposets::diamond_swap())),
        ("bowtie".into(), cats::poset(4, &[(0, 2), (0, 3), (1, 2), (1, 3)])),
        ("orbit_s3_c2".into(), orbit_category(&s3, &s3_c2)),
        ("orbit_s3_all".into(), orbit_category(&s3, &s3_all)),
        ("orbit_c4_all".into(), orbit_category(&c4, &c4_all)),
        ("orbit_v4_all".into(), orbit_category(&v4, &v4_all)),
        ("quillen_s3_all".into(), quillen_category(&s3, &s3_all)),
        ("quillen_v4_all".into(), quillen_category(&v4, &v4_all)),
        ("quillen_c4_all".into(), quillen_category(&c4, &c4_all)),
        ("transporter_v4_subgroups".into(), skeletal_transporter(&GPoset::subgroup_poset(&v4, &v4_all))),
    ]
}

/// Transporter categories of the diamond poset under each group of an
/// allowed order, acting trivially or swapping the middle elements through
/// an index two subgroup. The swapping ones also appear with an extra bottom
/// element. None of them has unique factorisations.
fn decorated_diamonds(limits: &CorpusLimits) -> Vec<(String, EICategory)> {
    let mut out = Vec::new();
    for &order in &limits.group_orders {
        for g in groups_of_order(order) {
            for h in g.all_subgroups().into_iter().filter(|h| h.order() * 2 >= g.order()) {
                let variants: &[usize] = if h.order() == g.order() { &[0] } else { &[0, 1] };
                for &b in variants {
                    let mut rels = vec![(b, b + 1), (b, b + 2), (b + 1, b + 3), (b + 2, b + 3)];
                    if b == 1 {
                        rels.push((0, 1));
                    }
                    let action = g
                        .elements()
                        .map(|x| {
                            let mut row: Vec<usize> = (0..b + 4).collect();
                            if !h.contains(x) {
                                row.swap(b + 1, b + 2);
                            }
                            row
                        })
                        .collect();
                    let p = GPoset::from_relations(b + 4, &rels, g.clone(), action).expect("diamond G-poset");
                    out.push((format!("diamond_{:02}", out.len()), skeletal_transporter(&p)));
                }
            }
        }
    }
    out
}

/// Groups of order at most 8 used for random graphs of groups.
pub fn small_groups() -> Vec<FiniteGroup> {
    let mut out: Vec<FiniteGroup> = (1..=8).map(FiniteGroup::cyclic).collect();
    out.extend([
        FiniteGroup::klein_four(),
        FiniteGroup::symmetric3(),
        FiniteGroup::dihedral(8),
        FiniteGroup::quaternion(),
        FiniteGroup::cyclic(2).direct_product(&FiniteGroup::cyclic(4)),
    ]);
    out
}

/// A random connected graph of groups on at most `max_vertices` vertices:
/// a spanning tree plus up to two further edges, loops allowed. Each edge
/// group is a subgroup of its origin group embedded into the terminus in a
/// random way.
pub fn random_graph_of_groups(rng: &mut ChaCha8Rng, max_vertices: usize) -> GraphOfGroups {
    let pool = small_groups();
    let n = rng.gen_range(1..=max_vertices.max(1));
    let vertices: Vec<FiniteGroup> = (0..n).map(|_| pool.choose(rng).unwrap().clone()).collect();
    let mut pairs: Vec<(usize, usize)> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
    for _ in 0..rng.gen_range(0..=2) {
        pairs.push((rng.gen_range(0..n), rng.gen_range(0..n)));
    }
    let mut edges = Vec::new();
    for (i, (o, t)) in pairs.into_iter().enumerate() {
        let (go, gt) = (&vertices[o], &vertices[t]);
        let subgroups = go.all_subgroups();
        let (group, into_t, inc) = loop {
            let h = subgroups.choose(rng).unwrap();
            let (eg, inc) = subgroup_as_group(go, h);
            if let Some(m) = embeddings(&eg, gt).choose(rng) {
                break (eg.clone(), m.images().to_vec(), inc);
            }
        };
        edges.push(EdgeSpec {
            origin: o,
            terminus: t,
            group,
            to_terminus: into_t,
            to_origin: inc.images().to_vec(),
            label: format!("y{i}"),
        });
    }
    GraphOfGroups::new(vertices, edges).expect("random graphs of groups are valid")
}

/// Deterministic corpus: the fixed stratum followed by seeded free
/// categories, posets and transporter categories, all within `limits`.
pub fn generate_corpus(seed: u64, limits: &CorpusLimits) -> Vec<CorpusEntry> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<CorpusEntry> = Vec::new();
    let fits = |c: &EICategory| c.object_count() <= limits.max_objects && c.morphism_count() <= limits.max_dim;
    for (name, category) in fixed_stratum().into_iter().chain(decorated_diamonds(limits)) {
        if fits(&category) && !out.iter().any(|e| e.category == category) {
            out.push(CorpusEntry { name, stratum: Stratum::Fixed, category });
        }
    }
    let push = |out: &mut Vec<CorpusEntry>, stratum: Stratum, prefix: &str, category: EICategory| {
        if !fits(&category) || out.iter().any(|e| e.category == category) {
            return false;
        }
        let index = out.iter().filter(|e| e.stratum == stratum).count();
        out.push(CorpusEntry { name: format!("{prefix}_{index:03}"), stratum, category });
        true
    };
    let mut made = 0;
    for _ in 0..limits.quivers * ATTEMPTS {
        if made == limits.quivers {
            break;
        }
        let q = random_quiver(&mut rng, limits);
        if let Ok(cat) = build_free_category(&q, limits.max_dim) {
            made += push(&mut out, Stratum::FreeQuiver, "quiver", cat) as usize;
        }
    }
    made = 0;
    for _ in 0..limits.posets * ATTEMPTS {
        if made == limits.posets {
            break;
        }
        let cat = random_poset(&mut rng, limits);
        made += push(&mut out, Stratum::Poset, "poset", cat) as usize;
    }
    made = 0;
    for _ in 0..limits.transporters * ATTEMPTS {
        if made == limits.transporters {
            break;
        }
        let p = random_gposet(&mut rng, limits);
        made += push(&mut out, Stratum::Transporter, "transporter", skeletal_transporter(&p)) as usize;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decorated_diamonds_lack_unique_factorisation() {
        let d = decorated_diamonds(&CorpusLimits::default());
        assert_eq!(d.len(), 21);
        assert!(d.iter().all(|(_, c)| !c.is_ufp().holds() && c.object_count() <= 4));
        assert!(d.iter().any(|(_, c)| c.object_count() == 3));
    }

    #[test]
    fn default_corpus_is_large_and_deterministic() {
        let limits = CorpusLimits::default();
        let a = generate_corpus(0, &limits);
        assert!(a.len() >= 100, "{}", a.len());
        assert!(a.iter().all(|e| e.category.morphism_count() <= 300 && e.category.object_count() <= 4));
        assert!(a.iter().any(|e| e.name == "diamond"));
        let b = generate_corpus(0, &limits);
        assert!(a.iter().zip(&b).all(|(x, y)| x.name == y.name && x.category == y.category));
    }

    #[test]
    fn one_object_corpus_is_all_groups() {
        let limits = CorpusLimits { max_objects: 1, quivers: 5, posets: 1, transporters: 5, ..Default::default() };
        let c = generate_corpus(3, &limits);
        assert!(!c.is_empty());
        assert!(c.iter().all(|e| e.category.object_count() == 1));
    }
}
