//! The declarative input document and its resolution into a [`JobSpec`].

use std::collections::BTreeMap;

use ei_hereditary::bass_serre::{examples as gogs, EdgeSpec, GraphOfGroups};
use ei_hereditary::category::{examples as cats, RawCategory};
use ei_hereditary::constructions::{examples as gposets, finite_subgroups_of, GPoset, VertexSubgroup};
use ei_hereditary::group::Family;
use ei_hereditary::quiver::{Arrow, EIQuiver};
use ei_hereditary::{CoefficientField, EICategory, FiniteGroup, Side};
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("[{section}.{name}]: unknown {kind} `{reference}`")]
    Dangling { section: &'static str, name: String, kind: &'static str, reference: String },
    #[error("[{section}.{name}]: {message}")]
    Schema { section: &'static str, name: String, message: String },
}

fn schema(section: &'static str, name: &str, message: impl ToString) -> InputError {
    InputError::Schema { section, name: name.to_string(), message: message.to_string() }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    #[serde(default)]
    group: BTreeMap<String, GroupDoc>,
    #[serde(default)]
    category: BTreeMap<String, CategoryDoc>,
    #[serde(default)]
    quiver: BTreeMap<String, QuiverDoc>,
    #[serde(default)]
    gposet: BTreeMap<String, GPosetDoc>,
    #[serde(default)]
    family: BTreeMap<String, FamilyDoc>,
    #[serde(default)]
    gog: BTreeMap<String, GogDoc>,
    #[serde(default)]
    normaliser: BTreeMap<String, NormaliserDoc>,
    #[serde(default)]
    job: JobDoc,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupDoc {
    preset: Option<String>,
    table: Option<Vec<Vec<usize>>>,
    degree: Option<usize>,
    generators: Option<Vec<Vec<usize>>>,
    labels: Option<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PosetDoc {
    elements: usize,
    #[serde(default)]
    relations: Vec<[usize; 2]>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CategoryDoc {
    preset: Option<String>,
    group: Option<String>,
    poset: Option<PosetDoc>,
    objects: Option<usize>,
    labels: Option<Vec<String>>,
    morphisms: Option<Vec<[usize; 3]>>,
    #[serde(default)]
    compose: Vec<[usize; 3]>,
    identities: Option<Vec<usize>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArrowDoc {
    src: usize,
    dst: usize,
    size: usize,
    left: Vec<Vec<usize>>,
    right: Vec<Vec<usize>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuiverDoc {
    groups: Vec<String>,
    labels: Option<Vec<String>>,
    #[serde(default)]
    arrows: Vec<ArrowDoc>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GPosetDoc {
    preset: Option<String>,
    group: Option<String>,
    elements: Option<usize>,
    #[serde(default)]
    relations: Vec<[usize; 2]>,
    action: Option<Vec<Vec<usize>>>,
    labels: Option<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexSubgroupDoc {
    vertex: usize,
    members: Vec<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyDoc {
    group: Option<String>,
    /// generating sets of the seed subgroups
    #[serde(default)]
    seeds: Vec<Vec<usize>>,
    #[serde(default)]
    all: bool,
    gog: Option<String>,
    members: Option<Vec<VertexSubgroupDoc>>,
    #[serde(default)]
    fin: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    origin: usize,
    terminus: usize,
    group: String,
    to_terminus: Vec<usize>,
    to_origin: Vec<usize>,
    label: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GogDoc {
    preset: Option<String>,
    vertices: Option<Vec<String>>,
    labels: Option<Vec<String>>,
    #[serde(default)]
    edges: Vec<EdgeDoc>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct NormaliserDoc {
    gog: String,
    vertex: usize,
    /// generators of `F` inside the vertex group
    generators: Vec<usize>,
    depth: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct JobDoc {
    #[serde(default = "default_chars")]
    chars: Vec<u64>,
    #[serde(default = "default_sides")]
    sides: Vec<Side>,
    #[serde(default = "yes")]
    oracle: bool,
    #[serde(default = "default_limit")]
    limit_dim: usize,
    #[serde(default)]
    seed: u64,
    #[serde(default = "default_gldim_max")]
    gldim_max: usize,
}

impl Default for JobDoc {
    fn default() -> Self {
        JobDoc {
            chars: default_chars(),
            sides: default_sides(),
            oracle: true,
            limit_dim: default_limit(),
            seed: 0,
            gldim_max: default_gldim_max(),
        }
    }
}

fn default_chars() -> Vec<u64> {
    vec![0]
}

fn default_sides() -> Vec<Side> {
    vec![Side::Left, Side::Right]
}

fn yes() -> bool {
    true
}

fn default_limit() -> usize {
    300
}

fn default_gldim_max() -> usize {
    3
}

/// Run settings shared by every subcommand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Settings {
    pub chars: Vec<CoefficientField>,
    pub sides: Vec<Side>,
    pub oracle: bool,
    pub limit_dim: usize,
    pub seed: u64,
    pub gldim_max: usize,
}

impl Default for Settings {
    fn default() -> Self {
        resolve_settings(&JobDoc::default()).expect("defaults are valid")
    }
}

#[derive(Debug, Clone)]
pub enum FamilySpec {
    Finite { group: String, family: Family },
    Graph { gog: String, members: Vec<VertexSubgroup> },
}

#[derive(Debug, Clone)]
pub struct NormaliserSpec {
    pub gog: String,
    pub vertex: usize,
    pub subgroup: Vec<usize>,
    pub depth: usize,
}

/// A fully resolved input document.
#[derive(Debug, Clone, Default)]
pub struct JobSpec {
    pub groups: BTreeMap<String, FiniteGroup>,
    pub categories: BTreeMap<String, EICategory>,
    pub quivers: BTreeMap<String, EIQuiver>,
    pub gposets: BTreeMap<String, GPoset>,
    pub families: BTreeMap<String, FamilySpec>,
    pub gogs: BTreeMap<String, GraphOfGroups>,
    pub normalisers: BTreeMap<String, NormaliserSpec>,
    pub settings: Settings,
}

/// Parses and resolves an input document.
pub fn parse_input(text: &str) -> Result<JobSpec, InputError> {
    let doc: Document = toml::from_str(text).map_err(|e| InputError::Parse(e.to_string()))?;
    let mut spec = JobSpec { settings: resolve_settings(&doc.job)?, ..JobSpec::default() };
    for (name, g) in &doc.group {
        spec.groups.insert(name.clone(), resolve_group(name, g)?);
    }
    let group = |section: &'static str, name: &str, reference: &str| {
        spec.groups.get(reference).cloned().ok_or_else(|| InputError::Dangling {
            section,
            name: name.to_string(),
            kind: "group",
            reference: reference.to_string(),
        })
    };
    let mut categories = BTreeMap::new();
    for (name, c) in &doc.category {
        categories.insert(name.clone(), resolve_category(name, c, &group)?);
    }
    let mut quivers = BTreeMap::new();
    for (name, q) in &doc.quiver {
        let groups = q.groups.iter().map(|g| group("quiver", name, g)).collect::<Result<Vec<_>, _>>()?;
        let arrows = q
            .arrows
            .iter()
            .map(|a| Arrow { src: a.src, dst: a.dst, size: a.size, left: a.left.clone(), right: a.right.clone() })
            .collect();
        let mut quiver = EIQuiver::new(groups, arrows).map_err(|e| schema("quiver", name, e))?;
        if let Some(labels) = &q.labels {
            if labels.len() != quiver.vertex_count() {
                return Err(schema("quiver", name, "one label per vertex expected"));
            }
            quiver.labels = labels.clone();
        }
        quivers.insert(name.clone(), quiver);
    }
    let mut posets = BTreeMap::new();
    for (name, p) in &doc.gposet {
        posets.insert(name.clone(), resolve_gposet(name, p, &group)?);
    }
    let mut graphs = BTreeMap::new();
    for (name, g) in &doc.gog {
        graphs.insert(name.clone(), resolve_gog(name, g, &group)?);
    }
    let mut families = BTreeMap::new();
    for (name, f) in &doc.family {
        families.insert(name.clone(), resolve_family(name, f, &spec.groups, &graphs)?);
    }
    let mut normalisers = BTreeMap::new();
    for (name, n) in &doc.normaliser {
        let gog = graphs.get(&n.gog).ok_or_else(|| InputError::Dangling {
            section: "normaliser",
            name: name.clone(),
            kind: "gog",
            reference: n.gog.clone(),
        })?;
        if n.vertex >= gog.vertex_count() {
            return Err(schema("normaliser", name, format!("vertex {} out of range", n.vertex)));
        }
        let sub =
            gog.vertex_group(n.vertex).subgroup_closure(&n.generators).map_err(|e| schema("normaliser", name, e))?;
        let depth = n.depth.unwrap_or(10);
        if depth > ei_hereditary::bass_serre::MAX_DEPTH {
            return Err(schema(
                "normaliser",
                name,
                format!("depth {depth} exceeds {}", ei_hereditary::bass_serre::MAX_DEPTH),
            ));
        }
        normalisers.insert(
            name.clone(),
            NormaliserSpec { gog: n.gog.clone(), vertex: n.vertex, subgroup: sub.members().to_vec(), depth },
        );
    }
    spec.categories = categories;
    spec.quivers = quivers;
    spec.gposets = posets;
    spec.gogs = graphs;
    spec.families = families;
    spec.normalisers = normalisers;
    Ok(spec)
}

fn resolve_settings(job: &JobDoc) -> Result<Settings, InputError> {
    let chars = job
        .chars
        .iter()
        .map(|&p| CoefficientField::new(p).map_err(|e| schema("job", "chars", e)))
        .collect::<Result<Vec<_>, _>>()?;
    if chars.is_empty() || job.sides.is_empty() {
        return Err(schema("job", "job", "chars and sides must be nonempty"));
    }
    if job.limit_dim == 0 {
        return Err(schema("job", "limit_dim", "limits must be positive"));
    }
    Ok(Settings {
        chars,
        sides: job.sides.clone(),
        oracle: job.oracle,
        limit_dim: job.limit_dim,
        seed: job.seed,
        gldim_max: job.gldim_max,
    })
}

fn exactly_one(section: &'static str, name: &str, options: &[(&str, bool)]) -> Result<(), InputError> {
    let given: Vec<&str> = options.iter().filter(|o| o.1).map(|o| o.0).collect();
    if given.len() == 1 {
        Ok(())
    } else {
        let names: Vec<&str> = options.iter().map(|o| o.0).collect();
        Err(schema(section, name, format!("exactly one of {} is required", names.join(", "))))
    }
}

fn resolve_group(name: &str, g: &GroupDoc) -> Result<FiniteGroup, InputError> {
    exactly_one(
        "group",
        name,
        &[("preset", g.preset.is_some()), ("table", g.table.is_some()), ("generators", g.generators.is_some())],
    )?;
    let err = |e: ei_hereditary::group::GroupError| schema("group", name, e);
    let group = if let Some(p) = &g.preset {
        FiniteGroup::preset(p).map_err(err)?
    } else if let Some(t) = &g.table {
        FiniteGroup::from_table(t).map_err(err)?
    } else {
        let gens = g.generators.as_ref().unwrap();
        let degree = g.degree.ok_or_else(|| schema("group", name, "generators need a degree"))?;
        if gens.iter().any(|p| p.len() != degree || !is_permutation(p)) {
            return Err(schema("group", name, format!("generators must be permutations of 0..{degree}")));
        }
        FiniteGroup::from_permutations(degree, gens)
    };
    match &g.labels {
        Some(l) => group.with_labels(l.clone()).map_err(err),
        None => Ok(group),
    }
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&x| x < p.len() && !std::mem::replace(&mut seen[x], true))
}

fn resolve_category(
    name: &str,
    c: &CategoryDoc,
    group: &impl Fn(&'static str, &str, &str) -> Result<FiniteGroup, InputError>,
) -> Result<EICategory, InputError> {
    exactly_one(
        "category",
        name,
        &[
            ("preset", c.preset.is_some()),
            ("group", c.group.is_some()),
            ("poset", c.poset.is_some()),
            ("morphisms", c.morphisms.is_some()),
        ],
    )?;
    let mut cat = if let Some(p) = &c.preset {
        match p.as_str() {
            "a2" => cats::a2(),
            "a3" => cats::a3(),
            "diamond" => cats::diamond(),
            "free_left_trivial_right" => cats::free_left_trivial_right(),
            other => return Err(schema("category", name, format!("unknown preset `{other}`"))),
        }
    } else if let Some(g) = &c.group {
        cats::group(&group("category", name, g)?)
    } else if let Some(p) = &c.poset {
        if p.relations.iter().any(|r| r[0] >= p.elements || r[1] >= p.elements) {
            return Err(schema("category", name, "poset relation out of range"));
        }
        let rel: Vec<(usize, usize)> = p.relations.iter().map(|r| (r[0], r[1])).collect();
        let le = closure(p.elements, &rel);
        if (0..p.elements).any(|i| (0..p.elements).any(|j| i != j && le[i * p.elements + j] && le[j * p.elements + i]))
        {
            return Err(schema("category", name, "poset relations contain a cycle"));
        }
        cats::poset_from_matrix(p.elements, &le)
    } else {
        let raw = RawCategory {
            objects: c.objects.ok_or_else(|| schema("category", name, "explicit categories need `objects`"))?,
            object_labels: None,
            morphisms: c.morphisms.as_ref().unwrap().iter().map(|m| (m[0], m[1], m[2])).collect(),
            compose: c.compose.iter().map(|m| (m[0], m[1], m[2])).collect(),
            identities: c
                .identities
                .clone()
                .ok_or_else(|| schema("category", name, "explicit categories need `identities`"))?,
        };
        EICategory::validate(&raw).map_err(|e| schema("category", name, e))?
    };
    if let Some(labels) = &c.labels {
        if labels.len() != cat.object_count() {
            return Err(schema("category", name, "one label per object expected"));
        }
        cat.set_object_labels(labels.clone());
    }
    Ok(cat)
}

fn closure(n: usize, relations: &[(usize, usize)]) -> Vec<bool> {
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
    le
}

fn resolve_gposet(
    name: &str,
    p: &GPosetDoc,
    group: &impl Fn(&'static str, &str, &str) -> Result<FiniteGroup, InputError>,
) -> Result<GPoset, InputError> {
    let poset = if let Some(preset) = &p.preset {
        if p.group.is_some() || p.elements.is_some() || p.action.is_some() || !p.relations.is_empty() {
            return Err(schema("gposet", name, "a preset takes no further data"));
        }
        match preset.as_str() {
            "diamond_swap" => gposets::diamond_swap(),
            "bowtie" => gposets::bowtie(),
            other => return Err(schema("gposet", name, format!("unknown preset `{other}`"))),
        }
    } else {
        let n = p.elements.ok_or_else(|| schema("gposet", name, "`elements` is required"))?;
        let g = match &p.group {
            Some(g) => group("gposet", name, g)?,
            None => FiniteGroup::trivial(),
        };
        let action = match &p.action {
            Some(a) => a.clone(),
            None => vec![(0..n).collect(); g.order()],
        };
        let rel: Vec<(usize, usize)> = p.relations.iter().map(|r| (r[0], r[1])).collect();
        GPoset::from_relations(n, &rel, g, action).map_err(|e| schema("gposet", name, e))?
    };
    Ok(match &p.labels {
        Some(l) if l.len() == poset.len() => poset.with_labels(l.clone()),
        Some(_) => return Err(schema("gposet", name, "one label per element expected")),
        None => poset,
    })
}

fn resolve_gog(
    name: &str,
    g: &GogDoc,
    group: &impl Fn(&'static str, &str, &str) -> Result<FiniteGroup, InputError>,
) -> Result<GraphOfGroups, InputError> {
    exactly_one("gog", name, &[("preset", g.preset.is_some()), ("vertices", g.vertices.is_some())])?;
    let gog = if let Some(p) = &g.preset {
        if !g.edges.is_empty() {
            return Err(schema("gog", name, "a preset takes no edges"));
        }
        match p.as_str() {
            "sl2z" => gogs::sl2z(),
            "psl2z" => gogs::psl2z(),
            "dihedral_amalgam" => gogs::dihedral_amalgam(),
            "klein_loop" => gogs::klein_loop(),
            "infinite_dihedral" => gogs::infinite_dihedral(),
            other => return Err(schema("gog", name, format!("unknown preset `{other}`"))),
        }
    } else {
        let vertices =
            g.vertices.as_ref().unwrap().iter().map(|v| group("gog", name, v)).collect::<Result<Vec<_>, _>>()?;
        let edges = g
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| {
                Ok(EdgeSpec {
                    origin: e.origin,
                    terminus: e.terminus,
                    group: group("gog", name, &e.group)?,
                    to_terminus: e.to_terminus.clone(),
                    to_origin: e.to_origin.clone(),
                    label: e.label.clone().unwrap_or_else(|| format!("y{i}")),
                })
            })
            .collect::<Result<Vec<_>, InputError>>()?;
        GraphOfGroups::new(vertices, edges).map_err(|e| schema("gog", name, e))?
    };
    Ok(match &g.labels {
        Some(l) if l.len() == gog.vertex_count() => gog.with_vertex_labels(l.clone()),
        Some(_) => return Err(schema("gog", name, "one label per vertex expected")),
        None => gog,
    })
}

fn resolve_family(
    name: &str,
    f: &FamilyDoc,
    groups: &BTreeMap<String, FiniteGroup>,
    graphs: &BTreeMap<String, GraphOfGroups>,
) -> Result<FamilySpec, InputError> {
    exactly_one("family", name, &[("group", f.group.is_some()), ("gog", f.gog.is_some())])?;
    if let Some(gname) = &f.group {
        if f.members.is_some() || f.fin {
            return Err(schema("family", name, "`members` and `fin` apply to graphs of groups"));
        }
        let g = groups.get(gname).ok_or_else(|| InputError::Dangling {
            section: "family",
            name: name.to_string(),
            kind: "group",
            reference: gname.clone(),
        })?;
        let seeds = if f.all {
            vec![g.whole()]
        } else {
            f.seeds
                .iter()
                .map(|s| g.subgroup_closure(s).map_err(|e| schema("family", name, e)))
                .collect::<Result<Vec<_>, _>>()?
        };
        return Ok(FamilySpec::Finite { group: gname.clone(), family: g.family_closure(&seeds) });
    }
    let gname = f.gog.as_ref().unwrap();
    let gog = graphs.get(gname).ok_or_else(|| InputError::Dangling {
        section: "family",
        name: name.to_string(),
        kind: "gog",
        reference: gname.clone(),
    })?;
    if f.all || !f.seeds.is_empty() {
        return Err(schema("family", name, "`all` and `seeds` apply to finite groups"));
    }
    let members = match (&f.members, f.fin) {
        (Some(m), false) => m.iter().map(|v| VertexSubgroup { vertex: v.vertex, members: v.members.clone() }).collect(),
        (None, true) => finite_subgroups_of(gog),
        _ => return Err(schema("family", name, "exactly one of members, fin is required")),
    };
    Ok(FamilySpec::Graph { gog: gname.clone(), members })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_job() {
        let spec = parse_input("[group.g]\npreset = \"C2\"\n[job]\nchars = [2]\n").unwrap();
        assert_eq!(spec.groups["g"].order(), 2);
        assert_eq!(spec.settings.chars, vec![CoefficientField::new(2).unwrap()]);
    }

    #[test]
    fn sl2z_declaration() {
        let text = r#"
[group.c2]
preset = "C2"
[group.c4]
preset = "C4"
[group.c6]
preset = "C6"
[gog.sl2z]
vertices = ["c4", "c6"]
edges = [{ origin = 0, terminus = 1, group = "c2", to_terminus = [0, 3], to_origin = [0, 2] }]
"#;
        let spec = parse_input(text).unwrap();
        let g = &spec.gogs["sl2z"];
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edges().len(), 2);
    }

    #[test]
    fn misspelled_section() {
        let err = parse_input("[groups.g]\npreset = \"C2\"\n").unwrap_err();
        assert!(matches!(err, InputError::Parse(ref m) if m.contains("line")), "{err}");
    }

    #[test]
    fn dangling_reference() {
        let err = parse_input("[category.c]\ngroup = \"missing\"\n").unwrap_err();
        assert!(matches!(err, InputError::Dangling { kind: "group", .. }), "{err}");
    }

    #[test]
    fn unknown_key() {
        assert!(matches!(parse_input("[group.g]\npreset = \"C2\"\ncolour = 1\n"), Err(InputError::Parse(_))));
    }

    #[test]
    fn bad_characteristic() {
        assert!(matches!(parse_input("[job]\nchars = [4]\n"), Err(InputError::Schema { .. })));
    }
}
