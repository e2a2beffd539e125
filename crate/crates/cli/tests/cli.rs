use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_stallings"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

struct Files(TempDir);

impl Files {
    fn new() -> Self {
        Files(tempfile::tempdir().unwrap())
    }

    fn write(&self, name: &str, text: &str) -> String {
        let p: PathBuf = self.0.path().join(name);
        fs::write(&p, text).unwrap();
        p.to_string_lossy().into_owned()
    }
}

#[test]
fn member_generator_and_non_member() {
    let f = Files::new();
    let k = f.write("K.txt", "b\na b a^-1\n");
    let o = run(&["member", &k, "a b a^-1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "true\n");
    let o = run(&["member", &k, "a"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "false\n");
}

#[test]
fn core_prints_canonical_graph_and_dot() {
    let f = Files::new();
    let k = f.write("K.txt", "# K\nb\na b a^-1\n");
    let dot = f.0.path().join("k.dot");
    let o = run(&["core", &k, "--dot", dot.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "base 0\n0 -a-> 1\n0 -b-> 0\n1 -b-> 1\n");
    let dot = fs::read_to_string(dot).unwrap();
    assert!(dot.starts_with("digraph stallings {"));
    assert!(dot.contains("0 -> 1 [label=\"a\"];"));
}

#[test]
fn onto_base_reports_surjective() {
    let f = Files::new();
    let h = f.write("H.txt", "a\n");
    let k = f.write("K.txt", "a\nb\n");
    let o = run(&["onto-base", &h, &k]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("u: "));
    assert!(out.contains("surjective: true\n"));
}

#[test]
fn morphism_classification_and_non_inclusion() {
    let f = Files::new();
    let h = f.write("H.txt", "b\n");
    let k = f.write("K.txt", "b\na b a^-1\n");
    let o = run(&["morphism", &h, &k]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("injective: true\nsurjective: false\n"));
    let o = run(&["morphism", &k, &h]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn fphi_and_whitehead() {
    let f = Files::new();
    let phi = f.write("phi.txt", "a -> x y\nb -> y\n");
    let k = f.write("K.txt", "b\na b a^-1\n");
    let o = run(&["fphi", &phi, &k]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "base 0\n0 -x-> 1\n0 -y-> 0\n1 -y-> 1\n");
    let o = run(&["whitehead", &k]);
    assert_eq!(stdout(&o), "a.b, a.b^-1, a^-1.b, a^-1.b^-1, b.b^-1\n");
}

#[test]
fn fgr_check_valid_and_invalid() {
    let f = Files::new();
    let phi = f.write("phi.txt", "a -> x y\nb -> y\n");
    let n = f.write("N.txt", "a.b^-1\n");
    let m = f.write("M.txt", "alphabet: x y\nx.y^-1, y.y^-1\n");
    let o = run(&["fgr-check", &phi, &n, &m]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "valid: true\n");
    let m = f.write("M2.txt", "x.y^-1\n");
    let o = run(&["fgr-check", &phi, &n, &m]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("(iv) a.b^-1 maps to y.y^-1"));
}

#[test]
fn fuzz_is_deterministic_and_clean() {
    let args = ["fuzz", "--trials", "300", "--alphabet-size", "2", "--max-len", "5", "--seed", "17"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a), "trials: 300\ncounterexamples: 0\nerrors: 0\n");
    let s = bin().arg("--sequential").args(args).output().unwrap();
    assert_eq!(s.stdout, a.stdout);
}

#[test]
fn case_table_report() {
    let o = run(&["case-table"]);
    let out = stdout(&o);
    assert!(out.starts_with("id\tclassification\tmissing\tcomment_check\tresult\trestrictions\n"));
    assert!(out.contains("\n2.2\tpositive\t∅\t"));
    let failing = out.lines().filter(|l| l.split('\t').nth(4) == Some("FAIL")).count();
    assert_eq!(o.status.code(), Some(if failing == 0 { 0 } else { 1 }));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["member"]).status.code(), Some(2));
    assert_eq!(run(&["member", "/definitely/missing", "a"]).status.code(), Some(2));
    let f = Files::new();
    let bad = f.write("bad.txt", "a ^^ b\n");
    assert_eq!(run(&["core", &bad]).status.code(), Some(2));
}
