use ei_hereditary::constructions::*;
use ei_hereditary::corpus::{random_gposet, skeletal_transporter, CorpusLimits};
use ei_hereditary::oracle::is_hereditary_oracle;
use ei_hereditary::{CoefficientField, FiniteGroup, Side};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const CHARS: [u64; 5] = [0, 2, 3, 5, 7];

fn sides() -> [Side; 2] {
    [Side::Left, Side::Right]
}

#[test]
fn random_gposets_match_category_criteria() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let limits = CorpusLimits::default();
    for i in 0..40 {
        let p = random_gposet(&mut rng, &limits);
        assert!(check_condition_s(&p) && check_esc(&p));
        let full = transporter_category(&p).unwrap();
        for c in 0..p.len() {
            assert_eq!(full.aut_group(c).order(), p.stabiliser(c).order());
        }
        let cat = skeletal_transporter(&p);
        assert_eq!(check_usc(&p), cat.is_ufp().holds(), "gposet {i}");
        for c in 0..cat.object_count() {
            for d in 0..cat.object_count() {
                if c == d || cat.hom(c, d).is_empty() {
                    continue;
                }
                let dec = cat.biset_decomposition(c, d);
                for h in &dec.stabilisers {
                    assert_eq!(dec.projection_left(h).order(), h.order());
                    assert_eq!(dec.projection_right(h).order(), h.order());
                }
            }
        }
        for ch in CHARS {
            let k = CoefficientField::new(ch).unwrap();
            for side in sides() {
                let special = decide_transporter_hereditary(&p, k, side).unwrap().hereditary;
                assert_eq!(special, cat.decide_hereditary(k, side).hereditary, "gposet {i} {k} {side}");
                assert_eq!(special, is_hereditary_oracle(&cat, k, side).unwrap(), "gposet {i} {k} {side}");
            }
        }
    }
}

fn groups() -> Vec<(&'static str, FiniteGroup)> {
    vec![
        ("S3", FiniteGroup::symmetric3()),
        ("D8", FiniteGroup::dihedral(8)),
        ("C4", FiniteGroup::cyclic(4)),
        ("V4", FiniteGroup::klein_four()),
    ]
}

#[test]
fn orbit_and_quillen_criteria_match_oracle() {
    for (name, g) in groups() {
        for (fi, family) in g.closed_families().iter().enumerate() {
            let orbit = orbit_category(&g, family);
            let quillen = quillen_category(&g, family);
            let reps = family_representatives(&g, family);
            for (c, h) in reps.iter().enumerate() {
                assert_eq!(orbit.aut_group(c).order(), g.normaliser(h).order() / h.order());
                assert_eq!(quillen.aut_group(c).order(), g.normaliser(h).order() / g.centraliser(h).order());
                assert_eq!(orbit.hom(0, c).len(), g.order() / h.order());
            }
            for ch in CHARS {
                let k = CoefficientField::new(ch).unwrap();
                let src = OrbitSource::Finite { group: &g, family };
                let subgroup_poset = GPoset::subgroup_poset(&g, family);
                for side in sides() {
                    let o = decide_orbit_hereditary(src, k, side).unwrap().hereditary;
                    assert_eq!(o, orbit.decide_hereditary(k, side).hereditary, "{name} family {fi} {k} {side}");
                    assert_eq!(o, is_hereditary_oracle(&orbit, k, side).unwrap(), "{name} family {fi} {k} {side}");
                    let t = decide_transporter_hereditary(&subgroup_poset, k, side).unwrap().hereditary;
                    assert_eq!(o, t, "{name} family {fi} {k} {side}");
                    let q = decide_quillen_hereditary(&g, family, k, side).hereditary;
                    assert_eq!(q, quillen.decide_hereditary(k, side).hereditary, "{name} family {fi} {k} {side}");
                    assert_eq!(q, is_hereditary_oracle(&quillen, k, side).unwrap(), "{name} family {fi} {k} {side}");
                }
            }
        }
    }
}

#[test]
fn closed_family_counts() {
    let counts: Vec<usize> = groups().iter().map(|(_, g)| g.closed_families().len()).collect();
    assert_eq!(counts[0], 5);
    assert_eq!(counts[2], 3);
    // V4: any subset of the three order-2 subgroups, plus the whole group
    assert_eq!(counts[3], 9);
}
