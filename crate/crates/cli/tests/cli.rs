use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const TOY: &str = "1 3 4\n2 3 5\n1 2 3 5\n2 5\n1 2 3 5\n";

fn bondminer(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bondminer"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        let ws = Workspace {
            dir: TempDir::new().unwrap(),
        };
        fs::write(ws.path("toy.dat"), TOY).unwrap();
        ws
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn arg(&self, name: &str) -> String {
        self.path(name).to_string_lossy().into_owned()
    }

    fn mine(&self, scenario: &str, miner: &str, workers: &str, out: &str) -> Output {
        bondminer(&[
            "mine",
            "--input",
            &self.arg("toy.dat"),
            "--minsupp",
            "4",
            "--minbond",
            "0.2",
            "--scenario",
            scenario,
            "--miner",
            miner,
            "--workers",
            workers,
            "--out",
            &self.arg(out),
        ])
    }
}

fn read(p: &Path) -> String {
    fs::read_to_string(p).unwrap()
}

#[test]
fn mine_reports_counts_and_compactness() {
    let ws = Workspace::new();
    let o = bondminer(&[
        "mine",
        "--input",
        &ws.arg("toy.dat"),
        "--minsupp",
        "80%",
        "--minbond",
        "1/5",
        "--scenario",
        "rcpr",
        "--out",
        &ws.arg("rcpr.txt"),
        "--full-count",
    ]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o).trim(),
        "kind=RCPR minimal=9 closed=7 distinct=12 rcp=15 compactness=1/5 (20.00%)"
    );
    assert!(read(&ws.path("rcpr.txt")).starts_with("# kind=RCPR transactions=5 minsupp=4 minbond=1/5\n"));
    let manifest: serde_json::Value = serde_json::from_str(&read(&ws.path("rcpr.txt.manifest.json"))).unwrap();
    assert_eq!(manifest["command"], "mine");
    assert_eq!(manifest["counts"]["distinct"], 12);
    assert_eq!(manifest["parameters"]["minsupp_absolute"], "4");
    assert_eq!(manifest["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn queries_print_answer_lines() {
    let ws = Workspace::new();
    assert!(ws.mine("rcpr", "gmjp", "1", "rcpr.txt").status.success());
    let q = |rep: &str, items: &str| stdout(&bondminer(&["query", "--rep", &ws.arg(rep), "--itemset", items]));
    assert_eq!(q("rcpr.txt", "1 3 5"), "RARE_CORRELATED conj=2 disj=5 neg=0 bond=2/5\n");
    assert_eq!(q("rcpr.txt", "2 5"), "NOT_RARE_CORRELATED\n");

    for (kind, file) in [("mmaxcr", "mm.txt"), ("minmmaxcr", "both.txt")] {
        let o = bondminer(&["derive", "--rep", &ws.arg("rcpr.txt"), "--kind", kind, "--out", &ws.arg(file)]);
        assert!(o.status.success());
    }
    assert_eq!(q("mm.txt", "1 2 5"), "RARE_CORRELATED conj=2 disj=5 neg=0 bond=2/5\n");
    assert_eq!(q("both.txt", "1 2 5"), "RARE_CORRELATED conj=[2,3] disj=[3,5] bond=[2/5,1/1]\n");

    assert!(ws.mine("rfccp", "opt", "1", "rfccp.txt").status.success());
    assert_eq!(q("rfccp.txt", "2"), "FREQUENT_CORRELATED conj=4 disj=4 neg=1 bond=1/1\n");
    assert_eq!(q("rfccp.txt", "1"), "NOT_FREQUENT_CORRELATED\n");
}

#[test]
fn regenerate_writes_the_rare_correlated_set() {
    let ws = Workspace::new();
    assert!(ws.mine("rcpr", "gmjp", "1", "rcpr.txt").status.success());
    assert!(ws.mine("rcp", "gmjp", "1", "rcp.txt").status.success());
    let o = bondminer(&["regenerate", "--rep", &ws.arg("rcpr.txt"), "--out", &ws.arg("regen.txt")]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "kind=RCP patterns=15");
    assert_eq!(read(&ws.path("regen.txt")).lines().count(), 16);
    assert_eq!(read(&ws.path("regen.txt")), read(&ws.path("rcp.txt")));
}

#[test]
fn miners_agree_and_are_deterministic() {
    let ws = Workspace::new();
    for scenario in ["fcp", "rfccp", "rcp", "rcpr"] {
        let reference = format!("{scenario}-oracle.txt");
        assert!(ws.mine(scenario, "oracle", "1", &reference).status.success());
        let expected = read(&ws.path(&reference));
        for miner in ["gmjp", "opt"] {
            for workers in ["1", "2", "8"] {
                for run in 0..3 {
                    let out = format!("{scenario}-{miner}-{workers}-{run}.txt");
                    assert!(ws.mine(scenario, miner, workers, &out).status.success());
                    assert_eq!(read(&ws.path(&out)), expected, "{out}");
                }
            }
        }
    }
}

#[test]
fn rules_and_classification() {
    let ws = Workspace::new();
    let rows = "1 3 100\n1 4 100\n1 100\n2 3 200\n2 4 200\n2 200\n";
    fs::write(ws.path("train.dat"), rows).unwrap();
    let o = bondminer(&[
        "mine",
        "--input",
        &ws.arg("train.dat"),
        "--minsupp",
        "2",
        "--minbond",
        "1/5",
        "--scenario",
        "rfccp",
        "--out",
        &ws.arg("rfccp.txt"),
    ]);
    assert!(o.status.success());
    let o = bondminer(&[
        "rules",
        "--rep",
        &ws.arg("rfccp.txt"),
        "--minconf",
        "1/2",
        "--class-items",
        "100 200",
        "--out",
        &ws.arg("rules.txt"),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = bondminer(&[
        "classify",
        "--rules",
        &ws.arg("rules.txt"),
        "--input",
        &ws.arg("train.dat"),
        "--class-items",
        "100,200",
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).ends_with("all,6,6,1.000000\n"), "{}", stdout(&o));
}

#[test]
fn discretize_writes_fimi() {
    let ws = Workspace::new();
    let mut csv = String::from("a,b\n");
    for i in 0..20 {
        csv.push_str(&format!("{},{}\n", i % 2, if i == 7 { 100 } else { 1 }));
    }
    fs::write(ws.path("m.csv"), csv).unwrap();
    let o = bondminer(&["discretize", "--input", &ws.arg("m.csv"), "--header", "--out", &ws.arg("m.dat")]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(read(&ws.path("m.dat")).lines().count(), 1);
}

#[test]
fn exit_codes() {
    let ws = Workspace::new();
    let code = |args: &[&str]| bondminer(args).status.code().unwrap();
    assert_eq!(code(&["mine", "--input", &ws.arg("toy.dat")]), 2);
    assert_eq!(ws.mine("rcp", "gmjp", "0", "x.txt").status.code(), Some(2));
    let bad = |minsupp: &str, minbond: &str| {
        code(&[
            "mine", "--input", &ws.arg("toy.dat"), "--minsupp", minsupp, "--minbond", minbond, "--scenario", "rcp",
            "--out", &ws.arg("x.txt"),
        ])
    };
    assert_eq!(bad("9", "0.2"), 2);
    assert_eq!(bad("4", "0"), 2);
    assert_eq!(bad("4", "1.5"), 2);

    let missing = ws.arg("missing.dat");
    assert_eq!(
        code(&["mine", "--input", &missing, "--minsupp", "4", "--minbond", "0.2", "--scenario", "rcp", "--out", &ws.arg("x.txt")]),
        3
    );
    fs::write(ws.path("garbage.txt"), "# kind=RCPR nonsense\n").unwrap();
    assert_eq!(code(&["query", "--rep", &ws.arg("garbage.txt"), "--itemset", "1"]), 3);

    assert!(ws.mine("rcp", "gmjp", "1", "rcp.txt").status.success());
    assert_eq!(code(&["query", "--rep", &ws.arg("rcp.txt"), "--itemset", "1"]), 4);
    let o = Command::new(env!("CARGO_BIN_EXE_bondminer"))
        .env("BONDMINER_ORACLE_CAP", "3")
        .args(["mine", "--input", &ws.arg("toy.dat"), "--minsupp", "4", "--minbond", "0.2"])
        .args(["--scenario", "rcp", "--miner", "oracle", "--out", &ws.arg("x.txt")])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(4));
}
