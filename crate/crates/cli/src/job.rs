//! Runs decider and oracle over the inputs of a job.

use std::time::Instant;

use ei_hereditary::bass_serre::{expand_fixed_subtree, normaliser_finiteness, NormaliserResult};
use ei_hereditary::category::HereditarityVerdict;
use ei_hereditary::constructions::{
    decide_orbit_hereditary, decide_quillen_hereditary, decide_transporter_hereditary, orbit_category,
    quillen_category, OrbitSource,
};
use ei_hereditary::corpus::{generate_corpus, skeletal_transporter, CorpusLimits};
use ei_hereditary::oracle::{gldim_upto, induced_projective_check, is_hereditary_oracle, omega_verify};
use ei_hereditary::quiver::build_free_category;
use ei_hereditary::{CoefficientField, EICategory, Side};
use serde_json::json;

use crate::input::{FamilySpec, JobSpec, Settings};
use crate::report::{Item, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleTask {
    Gldim,
    Hereditary,
    Omega,
    Induced,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Check,
    Transporter,
    Orbit,
    Quillen,
    Normaliser,
    Oracle(OracleTask),
    Corpus,
    VerifyAll,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Transporter => "transporter",
            Command::Orbit => "orbit",
            Command::Quillen => "quillen",
            Command::Normaliser => "normaliser",
            Command::Oracle(OracleTask::Gldim) => "oracle gldim",
            Command::Oracle(OracleTask::Hereditary) => "oracle hereditary",
            Command::Oracle(OracleTask::Omega) => "oracle omega",
            Command::Oracle(OracleTask::Induced) => "oracle induced",
            Command::Corpus => "corpus",
            Command::VerifyAll => "verify-all",
        }
    }
}

/// Runs one subcommand over a resolved job. Timings are recorded only on
/// request so that reports stay byte-identical across runs.
pub fn run_job(command: Command, spec: &JobSpec, timings: bool) -> Report {
    let s = &spec.settings;
    let mut items = Vec::new();
    match command {
        Command::Check | Command::Oracle(_) => {
            for (name, cat) in categories(spec) {
                items.extend(timed(timings, || match &cat {
                    Ok(cat) => category_items(&name, cat, command, s),
                    Err(e) => vec![Item { error: Some(e.clone()), ..Item::new(&name, "category") }],
                }));
            }
        }
        Command::Transporter => {
            for (name, p) in &spec.gposets {
                items.extend(timed(timings, || {
                    let cat = skeletal_transporter(p);
                    sweep(s, |k, side| {
                        let mut item = Item::new(name, "transporter").at(k.characteristic(), side);
                        match decide_transporter_hereditary(p, k, side) {
                            Ok(v) => record_verdict(&mut item, &v),
                            Err(e) => item.error = Some(e.to_string()),
                        }
                        item.category_criterion = Some(cat.decide_hereditary(k, side).hereditary);
                        oracle_into(&mut item, &cat, k, side, s);
                        item
                    })
                }));
            }
        }
        Command::Orbit | Command::Quillen => {
            for (name, f) in &spec.families {
                items.extend(timed(timings, || family_items(name, f, spec, command == Command::Orbit)));
            }
        }
        Command::Normaliser => {
            for (name, n) in &spec.normalisers {
                items.extend(timed(timings, || {
                    let gog = &spec.gogs[&n.gog];
                    let mut item = Item::new(name, "normaliser");
                    let result = normaliser_finiteness(gog, n.vertex, &n.subgroup);
                    let tree = expand_fixed_subtree(gog, n.vertex, &n.subgroup, n.depth);
                    match (result, tree) {
                        (Ok(r), Ok(t)) => {
                            let nonempty = !t.is_empty_at(n.depth);
                            item.agreement = Some(r.is_infinite() == nonempty);
                            let mut detail = json!({
                                "result": r,
                                "depth": n.depth,
                                "level_sizes": t.level_sizes,
                            });
                            if let NormaliserResult::Infinite { witness, .. } = &r {
                                detail["witness"] = json!(witness.canonical(gog).render(gog));
                            }
                            item.detail = Some(detail);
                        }
                        (Err(e), _) | (_, Err(e)) => item.error = Some(e.to_string()),
                    }
                    vec![item]
                }));
            }
        }
        Command::Corpus => {
            let limits = CorpusLimits { max_dim: s.limit_dim, ..CorpusLimits::default() };
            for e in generate_corpus(s.seed, &limits) {
                let mut item = Item::new(&e.name, "corpus");
                item.detail = Some(json!({
                    "stratum": e.stratum,
                    "objects": e.category.object_count(),
                    "morphisms": e.category.morphism_count(),
                    "ufp": e.category.is_ufp().holds(),
                }));
                items.push(item);
            }
        }
        Command::VerifyAll => {
            let limits = CorpusLimits { max_dim: s.limit_dim, ..CorpusLimits::default() };
            for e in generate_corpus(s.seed, &limits) {
                items.extend(timed(timings, || {
                    let mut all = category_items(&e.name, &e.category, Command::Check, s);
                    let ladders = e.category.is_ufp_by_ladders(1_000_000);
                    let mut ufp = Item::new(&e.name, "ufp");
                    match ladders {
                        Some(l) => {
                            ufp.agreement = Some(l == e.category.is_ufp().holds());
                            ufp.detail = Some(json!({ "ufp": l }));
                        }
                        None => ufp.detail = Some(json!("ladder enumeration over budget")),
                    }
                    all.push(ufp);
                    all
                }));
            }
        }
    }
    Report::new(command.name(), s, items)
}

fn categories(spec: &JobSpec) -> Vec<(String, Result<EICategory, String>)> {
    let mut out: Vec<(String, Result<EICategory, String>)> =
        spec.categories.iter().map(|(n, c)| (n.clone(), Ok(c.clone()))).collect();
    for (name, q) in &spec.quivers {
        let limit = spec.settings.limit_dim;
        out.push((name.clone(), build_free_category(q, limit).map_err(|e| e.to_string())));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

fn timed(timings: bool, f: impl FnOnce() -> Vec<Item>) -> Vec<Item> {
    let start = Instant::now();
    let mut made = f();
    if timings {
        let ms = start.elapsed().as_millis();
        for i in &mut made {
            i.elapsed_ms = Some(ms);
        }
    }
    made
}

fn sweep(s: &Settings, mut f: impl FnMut(CoefficientField, Side) -> Item) -> Vec<Item> {
    let mut out = Vec::new();
    for &k in &s.chars {
        for &side in &s.sides {
            out.push(f(k, side));
        }
    }
    out
}

fn record_verdict(item: &mut Item, v: &HereditarityVerdict) {
    item.hereditary = Some(v.hereditary);
    item.failed_clauses = v.failed().cloned().collect();
}

fn oracle_into(item: &mut Item, cat: &EICategory, k: CoefficientField, side: Side, s: &Settings) {
    if !s.oracle {
        item.settle();
        return;
    }
    if cat.morphism_count() > s.limit_dim {
        item.detail =
            Some(json!(format!("oracle skipped: dimension {} exceeds {}", cat.morphism_count(), s.limit_dim)));
    } else {
        match is_hereditary_oracle(cat, k, side) {
            Ok(o) => item.oracle = Some(o),
            Err(e) => item.error = Some(e.to_string()),
        }
    }
    item.settle();
}

fn skeletal(cat: &EICategory) -> Result<EICategory, String> {
    if cat.is_skeletal() {
        Ok(cat.clone())
    } else {
        cat.skeletalise().map(|s| s.category).map_err(|e| e.to_string())
    }
}

fn category_items(name: &str, cat: &EICategory, command: Command, s: &Settings) -> Vec<Item> {
    let cat = match skeletal(cat) {
        Ok(c) => c,
        Err(e) => return vec![Item { error: Some(e), ..Item::new(name, "category") }],
    };
    match command {
        Command::Oracle(OracleTask::Omega) => s
            .chars
            .iter()
            .map(|&k| {
                let mut item = Item::new(name, "omega");
                item.characteristic = Some(k.characteristic());
                let r = omega_verify(&cat, k);
                item.agreement = Some(r.passes());
                item.detail = Some(json!(r));
                item
            })
            .collect(),
        Command::Oracle(OracleTask::Induced) => s
            .chars
            .iter()
            .map(|&k| {
                let mut item = Item::new(name, "induced");
                item.characteristic = Some(k.characteristic());
                let v = cat.decide_hereditary(k, Side::Left);
                record_verdict(&mut item, &v);
                if v.hereditary {
                    match induced_projective_check(&cat, k) {
                        Ok(r) => {
                            item.agreement = Some(r.passes());
                            item.detail = Some(json!(r));
                        }
                        Err(e) => item.error = Some(e.to_string()),
                    }
                } else {
                    item.detail = Some(json!("not hereditary; induced check skipped"));
                }
                item
            })
            .collect(),
        Command::Oracle(OracleTask::Gldim) => sweep(s, |k, side| {
            let mut item = Item::new(name, "gldim").at(k.characteristic(), side);
            record_verdict(&mut item, &cat.decide_hereditary(k, side));
            match gldim_upto(&cat, k, side, s.gldim_max) {
                Ok(g) => {
                    item.oracle = Some(matches!(g, ei_hereditary::oracle::GlobalDimension::Exactly(d) if d <= 1));
                    item.detail = Some(json!({ "gldim": g.to_string() }));
                }
                Err(e) => item.error = Some(e.to_string()),
            }
            item.settle();
            item
        }),
        _ => sweep(s, |k, side| {
            let mut item = Item::new(name, "category").at(k.characteristic(), side);
            record_verdict(&mut item, &cat.decide_hereditary(k, side));
            oracle_into(&mut item, &cat, k, side, s);
            item
        }),
    }
}

fn family_items(name: &str, f: &FamilySpec, spec: &JobSpec, orbit: bool) -> Vec<Item> {
    let s = &spec.settings;
    let kind = if orbit { "orbit" } else { "quillen" };
    match f {
        FamilySpec::Finite { group, family } => {
            let g = &spec.groups[group];
            let cat = if orbit { orbit_category(g, family) } else { quillen_category(g, family) };
            sweep(s, |k, side| {
                let mut item = Item::new(name, kind).at(k.characteristic(), side);
                let v = if orbit {
                    decide_orbit_hereditary(OrbitSource::Finite { group: g, family }, k, side)
                        .map_err(|e| e.to_string())
                } else {
                    Ok(decide_quillen_hereditary(g, family, k, side))
                };
                match v {
                    Ok(v) => record_verdict(&mut item, &v),
                    Err(e) => item.error = Some(e),
                }
                item.category_criterion = Some(cat.decide_hereditary(k, side).hereditary);
                oracle_into(&mut item, &cat, k, side, s);
                item
            })
        }
        FamilySpec::Graph { gog, members } => sweep(s, |k, side| {
            let mut item = Item::new(name, kind).at(k.characteristic(), side);
            item.criterion_only = true;
            if !orbit {
                item.error = Some("Quillen categories need a finite group".to_string());
                return item;
            }
            let src = OrbitSource::Graph { graph: &spec.gogs[gog], members };
            match decide_orbit_hereditary(src, k, side) {
                Ok(v) => record_verdict(&mut item, &v),
                Err(e) => item.error = Some(e.to_string()),
            }
            item
        }),
    }
}
