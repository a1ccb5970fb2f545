//! End-to-end acceptance run: one line per criterion, nonzero exit on failure.

use std::process::{Command as Process, ExitCode};
use std::time::{Duration, Instant};

use ei_hereditary::bass_serre::examples::{dihedral_amalgam, infinite_dihedral, klein_loop, sl2z};
use ei_hereditary::bass_serre::{expand_fixed_subtree, normaliser_finiteness, NormaliserResult, ReducedWord};
use ei_hereditary::category::examples as cats;
use ei_hereditary::constructions::{
    check_usc, decide_orbit_hereditary, decide_quillen_hereditary, decide_transporter_hereditary, orbit_category,
    quillen_category, transporter_category, OrbitSource,
};
use ei_hereditary::corpus::{
    generate_corpus, random_gposet, random_graph_of_groups, skeletal_transporter, CorpusEntry, CorpusLimits,
};
use ei_hereditary::oracle::{
    gldim_upto, group_set_projectivity_check, induced_projective_check, is_hereditary_oracle, omega_verify,
    GlobalDimension, GroupSet,
};
use ei_hereditary::{CoefficientField, FiniteGroup, Side};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SWEEP_CHARS: [u64; 4] = [0, 2, 3, 5];
const CONSTRUCTION_CHARS: [u64; 5] = [0, 2, 3, 5, 7];
const SIDES: [Side; 2] = [Side::Left, Side::Right];
const SWEEP_BUDGET: Duration = Duration::from_secs(600);
const OMEGA_BUDGET: Duration = Duration::from_secs(300);
const MIN_CORPUS: usize = 100;
const MAX_DIM: usize = 300;
const LADDER_BUDGET: usize = 1_000_000;
const RANDOM_GPOSETS: usize = 30;
const RANDOM_GRAPHS: usize = 50;
const EXPANSION_DEPTH: usize = 10;

type Outcome = Result<String, String>;
type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn field(p: u64) -> CoefficientField {
    CoefficientField::new(p).expect("prime or zero")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn corpus() -> Vec<CorpusEntry> {
    generate_corpus(0, &CorpusLimits::default())
}

fn sweep(corpus: &[CorpusEntry]) -> Outcome {
    let start = Instant::now();
    ensure(corpus.len() >= MIN_CORPUS, || format!("corpus has {} entries", corpus.len()))?;
    let mut cases = 0;
    for e in corpus {
        let dim = e.category.morphism_count();
        ensure(dim <= MAX_DIM, || format!("{} has dimension {dim}", e.name))?;
        for p in SWEEP_CHARS {
            for side in SIDES {
                let k = field(p);
                let verdict = e.category.decide_hereditary(k, side).hereditary;
                let oracle = is_hereditary_oracle(&e.category, k, side).map_err(|err| format!("{}: {err}", e.name))?;
                ensure(verdict == oracle, || format!("{} {k} {side}: decider {verdict}, oracle {oracle}", e.name))?;
                cases += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < SWEEP_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("{} categories, {cases} cases agree, {elapsed:.2?}", corpus.len()))
}

fn regressions() -> Outcome {
    let k0 = field(0);
    let gl = |cat, p, side, max| gldim_upto(cat, field(p), side, max).map_err(|e| e.to_string());
    let a2 = cats::a2();
    let diamond = cats::diamond();
    let c2 = cats::group(&FiniteGroup::cyclic(2));
    let ex = cats::free_left_trivial_right();
    let rows: Vec<(&str, String, String)> = vec![
        ("A2 char 0 gldim", gl(&a2, 0, Side::Left, 3)?.to_string(), "1".into()),
        ("diamond char 0 gldim", gl(&diamond, 0, Side::Left, 3)?.to_string(), "2".into()),
        ("diamond UFP", diamond.is_ufp().holds().to_string(), "false".into()),
        ("F2[C2] gldim up to 3", gl(&c2, 2, Side::Left, 3)?.to_string(), ">3".into()),
        ("F3[C2] gldim", gl(&c2, 3, Side::Left, 3)?.to_string(), "0".into()),
    ];
    for (what, got, want) in &rows {
        ensure(got == want, || format!("{what}: got {got}, want {want}"))?;
    }
    ensure(matches!(gl(&a2, 0, Side::Right, 3)?, GlobalDimension::Exactly(1)), || "A2 right gldim".into())?;

    let k2 = field(2);
    let left = ex.decide_hereditary(k2, Side::Left);
    ensure(!left.hereditary, || "example char 2 left: decider says hereditary".into())?;
    ensure(left.clause("condition_a").is_some_and(|c| !c.holds), || "example char 2 left: condition A holds".into())?;
    let oracle = is_hereditary_oracle(&ex, k2, Side::Left).map_err(|e| e.to_string())?;
    ensure(!oracle, || "example char 2 left: oracle says hereditary".into())?;
    for side in SIDES {
        ensure(ex.decide_hereditary(k0, side).hereditary, || format!("example char 0 {side}: not hereditary"))?;
        ensure(is_hereditary_oracle(&ex, k0, side).unwrap_or(false), || format!("example char 0 {side}: oracle"))?;
    }
    Ok(format!("{} rows and the side example exact", rows.len()))
}

fn ufp_ladders(corpus: &[CorpusEntry]) -> Outcome {
    let mut ufp = 0;
    for e in corpus {
        let ladders =
            e.category.is_ufp_by_ladders(LADDER_BUDGET).ok_or_else(|| format!("{}: ladder budget", e.name))?;
        let theta = e.category.is_ufp().holds();
        ensure(theta == ladders, || format!("{}: chains {theta}, ladders {ladders}", e.name))?;
        ufp += usize::from(theta);
    }
    Ok(format!("{} categories agree, {ufp} with UFP", corpus.len()))
}

fn omega(corpus: &[CorpusEntry]) -> Outcome {
    let start = Instant::now();
    let mut ufp_checked = 0;
    for e in corpus {
        for p in SWEEP_CHARS {
            let r = omega_verify(&e.category, field(p));
            ensure(r.passes(), || format!("{} char {p}: {:?}", e.name, r.failures))?;
            ensure(r.dim_omega + r.dim_algebra == r.dim_tensor, || format!("{} char {p}: dimension count", e.name))?;
            if r.ufp {
                ensure(r.dim_unfactorisable_tensor == Some(r.dim_omega), || {
                    format!("{} char {p}: unfactorisable", e.name)
                })?;
                ufp_checked += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < OMEGA_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("{} categories pass, {ufp_checked} UFP instances, {elapsed:.2?}", corpus.len()))
}

fn induced(corpus: &[CorpusEntry]) -> Outcome {
    let mut checked = 0;
    for e in corpus {
        for p in SWEEP_CHARS {
            let k = field(p);
            if !e.category.decide_hereditary(k, Side::Left).hereditary {
                continue;
            }
            let r = induced_projective_check(&e.category, k).map_err(|err| format!("{}: {err}", e.name))?;
            ensure(r.mismatches.is_empty(), || format!("{} {k}: {:?}", e.name, r.mismatches))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} hereditary instances, no mismatches"))
}

fn constructions() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let limits = CorpusLimits::default();
    for i in 0..RANDOM_GPOSETS {
        let p = random_gposet(&mut rng, &limits);
        let full = transporter_category(&p).map_err(|e| e.to_string())?;
        let cat = skeletal_transporter(&p);
        ensure(check_usc(&p) == full.is_ufp().holds(), || format!("gposet {i}: USC"))?;
        ensure(full.is_ufp().holds() == cat.is_ufp().holds(), || format!("gposet {i}: skeleton UFP"))?;
        for ch in CONSTRUCTION_CHARS {
            for side in SIDES {
                let k = field(ch);
                let special = decide_transporter_hereditary(&p, k, side).map_err(|e| e.to_string())?.hereditary;
                ensure(special == cat.decide_hereditary(k, side).hereditary, || format!("gposet {i} {k} {side}"))?;
            }
        }
    }
    let mut families = 0;
    for g in [FiniteGroup::symmetric3(), FiniteGroup::dihedral(8), FiniteGroup::cyclic(4), FiniteGroup::klein_four()] {
        for family in g.closed_families() {
            families += 1;
            let orbit = orbit_category(&g, &family);
            let quillen = quillen_category(&g, &family);
            for ch in CONSTRUCTION_CHARS {
                for side in SIDES {
                    let k = field(ch);
                    let src = OrbitSource::Finite { group: &g, family: &family };
                    let o = decide_orbit_hereditary(src, k, side).map_err(|e| e.to_string())?.hereditary;
                    let oo = is_hereditary_oracle(&orbit, k, side).map_err(|e| e.to_string())?;
                    ensure(o == oo, || format!("orbit |G| = {} {k} {side}", g.order()))?;
                    let q = decide_quillen_hereditary(&g, &family, k, side).hereditary;
                    let qo = is_hereditary_oracle(&quillen, k, side).map_err(|e| e.to_string())?;
                    ensure(q == qo, || format!("quillen |G| = {} {k} {side}", g.order()))?;
                }
            }
        }
    }
    Ok(format!("{RANDOM_GPOSETS} G-posets, {families} closed families agree"))
}

fn groups_up_to_12() -> Vec<FiniteGroup> {
    let c2 = FiniteGroup::cyclic(2);
    let mut out: Vec<FiniteGroup> = (1..=12).map(FiniteGroup::cyclic).collect();
    out.extend([
        FiniteGroup::klein_four(),
        FiniteGroup::symmetric3(),
        FiniteGroup::dihedral(8),
        FiniteGroup::quaternion(),
        c2.direct_product(&FiniteGroup::cyclic(4)),
        c2.direct_product(&FiniteGroup::klein_four()),
        FiniteGroup::dihedral(10),
        FiniteGroup::dihedral(12),
        c2.direct_product(&FiniteGroup::cyclic(6)),
        FiniteGroup::alternating4(),
        FiniteGroup::dicyclic12(),
    ]);
    out
}

fn permutation_modules() -> Outcome {
    let mut cases = 0;
    for g in groups_up_to_12() {
        for h in g.all_subgroups() {
            let x = GroupSet::cosets(&g, &h);
            for p in [0, 2, 3] {
                let k = field(p);
                let r = group_set_projectivity_check(&g, &x, k).map_err(|e| e.to_string())?;
                ensure(r.projective == k.is_invertible(h.order()), || {
                    format!("|G| = {} |H| = {} {k}", g.order(), h.order())
                })?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} cases agree"))
}

fn graphs_of_groups() -> Outcome {
    let d8 = dihedral_amalgam();
    let NormaliserResult::Infinite { witness, .. } =
        normaliser_finiteness(&d8, 0, &[0, 4]).map_err(|e| e.to_string())?
    else {
        return Err("D8 amalgam: finite".into());
    };
    let expected = ReducedWord { base: 0, edges: vec![0, 1], elements: vec![0, 1, 3] };
    let rendered = witness.canonical(&d8).render(&d8);
    let reference = expected.render(&d8);
    ensure(witness.canonical(&d8) == expected.canonical(&d8), || {
        format!("D8 amalgam witness {rendered}, expected {reference}")
    })?;

    let k = klein_loop();
    match normaliser_finiteness(&k, 0, &[0, 1]).map_err(|e| e.to_string())? {
        NormaliserResult::Infinite { cycle, .. } => {
            ensure(cycle.len() == 3, || format!("Klein loop cycle {}", cycle.len()))?
        }
        _ => return Err("Klein loop: finite".into()),
    }
    let r = normaliser_finiteness(&sl2z(), 1, &[0, 2, 4]).map_err(|e| e.to_string())?;
    ensure(matches!(r, NormaliserResult::Finite { order: 6, .. }), || format!("SL2(Z): {r:?}"))?;
    let r = normaliser_finiteness(&infinite_dihedral(), 0, &[0, 1]).map_err(|e| e.to_string())?;
    ensure(matches!(r, NormaliserResult::Finite { order: 2, .. }), || format!("Z/2*Z/2: {r:?}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut infinite = 0;
    for i in 0..RANDOM_GRAPHS {
        let gog = random_graph_of_groups(&mut rng, 3);
        let v = rng.gen_range(0..gog.vertex_count());
        let f = gog.vertex_group(v).all_subgroups().choose(&mut rng).expect("trivial subgroup").clone();
        let result = normaliser_finiteness(&gog, v, f.members()).map_err(|e| e.to_string())?;
        let tree = expand_fixed_subtree(&gog, v, f.members(), EXPANSION_DEPTH).map_err(|e| e.to_string())?;
        ensure(result.is_infinite() == !tree.is_empty_at(EXPANSION_DEPTH), || format!("random graph {i}"))?;
        infinite += usize::from(result.is_infinite());
    }
    Ok(format!("reference examples exact (D8 witness {rendered} equivalent to {reference}), {RANDOM_GRAPHS} random graphs agree, {infinite} infinite"))
}

fn determinism() -> Outcome {
    let run = || {
        Process::new(env!("CARGO_BIN_EXE_eicat"))
            .args(["verify-all", "--seed", "0"])
            .output()
            .map_err(|e| e.to_string())
    };
    let a = run()?;
    let b = run()?;
    ensure(a.status.success(), || format!("verify-all exited with {:?}", a.status.code()))?;
    ensure(a.stdout == b.stdout, || "reports differ".into())?;
    Ok(format!("two reports of {} bytes identical", a.stdout.len()))
}

fn main() -> ExitCode {
    let corpus = corpus();
    let criteria: Vec<(&str, Check)> = vec![
        ("decider and oracle agree over the corpus", Box::new(|| sweep(&corpus))),
        ("fixed regression table", Box::new(regressions)),
        ("factorisation chains match ladder enumeration", Box::new(|| ufp_ladders(&corpus))),
        ("differential form identities", Box::new(|| omega(&corpus))),
        ("induced projectives on hereditary instances", Box::new(|| induced(&corpus))),
        ("transporter, orbit and Quillen criteria", Box::new(constructions)),
        ("permutation module projectivity", Box::new(permutation_modules)),
        ("graph of groups normalisers", Box::new(graphs_of_groups)),
        ("verify-all determinism", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {} PASS  {name}: {detail} ({elapsed:.2?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} FAIL  {name}: {why} ({elapsed:.2?})", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
