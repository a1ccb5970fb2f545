use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn eicat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eicat")).args(args).output().expect("binary runs")
}

fn job(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "jobs", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn input(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".toml").tempfile().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn items<'a>(v: &'a Value, input: &str) -> Vec<&'a Value> {
    v["items"].as_array().unwrap().iter().filter(|i| i["input"] == input).collect()
}

#[test]
fn a2_is_hereditary_in_both_characteristics() {
    let out = eicat(&["check", &job("a2.toml")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema_version"], 1);
    let a2 = items(&v, "a2");
    assert_eq!(a2.len(), 4);
    for i in a2 {
        assert_eq!(i["hereditary"], true);
        assert_eq!(i["oracle"], true);
        assert_eq!(i["agreement"], true);
    }
}

#[test]
fn diamond_fails_ufp() {
    let v = json(&eicat(&["check", &job("a2.toml"), "--char", "0", "--side", "left"]));
    let d = items(&v, "diamond");
    assert_eq!(d.len(), 1);
    assert_eq!(d[0]["hereditary"], false);
    assert_eq!(d[0]["failed_clauses"][0]["name"], "ufp");
}

#[test]
fn group_algebra_fails_in_dividing_characteristic() {
    let v = json(&eicat(&["check", &job("a2.toml"), "--char", "2", "--side", "right"]));
    let c2 = items(&v, "c2");
    assert_eq!(c2[0]["hereditary"], false);
    assert_eq!(c2[0]["failed_clauses"][0]["name"], "group_rings");
}

#[test]
fn gldim_reported() {
    let v = json(&eicat(&["oracle", "gldim", &job("a2.toml"), "--char", "0"]));
    assert_eq!(items(&v, "diamond")[0]["detail"]["gldim"], "2");
    assert_eq!(items(&v, "a2")[0]["detail"]["gldim"], "1");
    let v = json(&eicat(&["oracle", "gldim", &job("a2.toml"), "--char", "2", "--max", "3"]));
    assert_eq!(items(&v, "c2")[0]["detail"]["gldim"], ">3");
}

#[test]
fn d8_normaliser_job() {
    let f = input(
        r#"
[group.d8]
preset = "D8"
[group.c2]
preset = "C2"
[gog.g]
vertices = ["d8", "d8"]
edges = [{ origin = 0, terminus = 1, group = "c2", to_terminus = [0, 4], to_origin = [0, 4] }]
[normaliser.n]
gog = "g"
vertex = 0
generators = [4]
depth = 6
"#,
    );
    let out = eicat(&["normaliser", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    let n = items(&v, "n");
    assert_eq!(n.len(), 1);
    assert_eq!(n[0]["agreement"], true);
    let verdict = &n[0]["detail"]["result"]["verdict"];
    assert!(verdict == "finite" || verdict == "infinite");
}

#[test]
fn sl2z_centre_has_infinite_normaliser() {
    let v = json(&eicat(&["normaliser", &job("normaliser.toml")]));
    let c = items(&v, "sl2z_center");
    assert_eq!(c[0]["detail"]["result"]["verdict"], "infinite");
    assert!(c[0]["detail"]["witness"].as_str().is_some());
    let f = items(&v, "sl2z_c4");
    assert_eq!(f[0]["detail"]["result"]["verdict"], "finite");
    assert_eq!(f[0]["detail"]["result"]["order"], 4);
}

#[test]
fn transporter_and_families() {
    let out = eicat(&["transporter", &job("gposets.toml")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(items(&v, "bowtie").iter().all(|i| i["hereditary"] == true));
    assert!(items(&v, "diamond_swap").iter().all(|i| i["hereditary"] == false));

    let v = json(&eicat(&["orbit", &job("families.toml")]));
    assert_eq!(v["summary"]["disagreements"], 0);
    let psl = items(&v, "psl2z_fin");
    assert!(psl.iter().all(|i| i["criterion_only"] == true));
    let at = |p: u64| psl.iter().find(|i| i["characteristic"] == p).unwrap()["hereditary"].clone();
    assert_eq!(at(0), true);
    assert_eq!(at(2), false);
    assert_eq!(at(3), false);
    assert_eq!(at(5), true);
}

#[test]
fn quillen_on_graph_family_is_an_error() {
    let out = eicat(&["quillen", &job("families.toml")]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert!(items(&v, "psl2z_fin").iter().all(|i| i["error"].is_string()));
    assert_eq!(v["summary"]["disagreements"], 0);
}

#[test]
fn input_errors_exit_with_two() {
    let f = input("[category.c]\ngroup = \"nowhere\"\n");
    let out = eicat(&["check", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nowhere"));

    let out = eicat(&["check", "/nonexistent/job.toml"]);
    assert_eq!(out.status.code(), Some(2));

    let f = input("[category.c]\npreset = \"a2\"\n");
    let out = eicat(&["check", f.path().to_str().unwrap(), "--char", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn text_format_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.txt");
    let out = eicat(&["check", &job("free_quiver.toml"), "--format", "text", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(path).unwrap();
    assert!(text.contains("q [category] char 2 left: hereditary no, oracle no, agree"));
    assert!(text.ends_with("6 items, 6 agreements, 0 disagreements, 0 errors\n"));
}

#[test]
fn oracle_can_be_disabled() {
    let v = json(&eicat(&["check", &job("a2.toml"), "--oracle", "false"]));
    assert!(v["items"].as_array().unwrap().iter().all(|i| i.get("oracle").is_none()));
    assert_eq!(v["settings"]["oracle"], false);
}

#[test]
fn reports_are_deterministic() {
    let a = eicat(&["check", &job("free_quiver.toml")]).stdout;
    let b = eicat(&["check", &job("free_quiver.toml")]).stdout;
    assert_eq!(a, b);
    let t = json(&eicat(&["check", &job("free_quiver.toml"), "--timings"]));
    assert!(t["items"][0]["elapsed_ms"].is_u64());
}

#[test]
fn corpus_listing_matches_seed() {
    let a = eicat(&["corpus", "--seed", "4"]).stdout;
    let b = eicat(&["corpus", "--seed", "4"]).stdout;
    assert_eq!(a, b);
    let v: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["settings"]["seed"], 4);
    assert!(v["items"].as_array().unwrap().len() > 100);
}
