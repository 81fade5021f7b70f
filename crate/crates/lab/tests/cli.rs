use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

const WORKED: &str = "p cnf 6 3\n1 4 0\n2 5 0\n3 6 0\n";
const CONTRADICTION: &str = "p cnf 2 4\n1 2 0\n1 -2 0\n-1 2 0\n-1 -2 0\n";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_phase-lab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn phase-lab")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn phase-lab");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("phase-lab-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn sample_is_deterministic_and_valid_dimacs() {
    let args = ["sample", "--dist", "F2", "--n", "30", "--delta", "1.2", "--seed", "7"];
    let (a, b) = (run(&args), run(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.lines().any(|l| l == "p cnf 30 36"), "{text}");
    assert_eq!(text.lines().filter(|l| l.ends_with(" 0")).count(), 36);

    let other = run(&["sample", "--dist", "F2", "--n", "30", "--delta", "1.2", "--seed", "8"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn sample_accepts_m_and_writes_files() {
    let dir = scratch("sample");
    let out = dir.join("f.cnf");
    let o = run(&["sample", "--dist", "H2", "--n", "10", "--m", "4", "--seed", "1", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("p cnf 10 4"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn solve_reports_models_and_contradictions() {
    let o = run_stdin(&["solve"], WORKED);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("SAT"));
    let model: Vec<i64> = lines.next().unwrap().split_whitespace().skip(1).map(|t| t.parse().unwrap()).collect();
    assert_eq!(model.last(), Some(&0));
    for (a, b) in [(1, 4), (2, 5), (3, 6)] {
        assert!(model.contains(&a) || model.contains(&b), "{model:?}");
    }

    let o = run_stdin(&["solve"], CONTRADICTION);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "UNSAT");
}

#[test]
fn compile_reports_size_and_writes_dump() {
    let dir = scratch("compile");
    let input = dir.join("w.cnf");
    let dump = dir.join("w.obdd");
    std::fs::write(&input, WORKED).unwrap();
    let o = run(&["compile", input.to_str().unwrap(), "--order", "identity", "--out", dump.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("size 16"), "{text}");
    assert!(text.contains("models 27"), "{text}");

    let dump = std::fs::read_to_string(&dump).unwrap();
    let mut lines = dump.lines();
    assert_eq!(lines.next(), Some("obdd vars 6 order 1,2,3,4,5,6 root 15 size 16"));
    let nodes: Vec<Vec<&str>> = lines.map(|l| l.split(' ').collect()).collect();
    assert_eq!(nodes.len(), 16);
    assert_eq!(nodes[0], ["0", "-", "0", "0"]);
    assert_eq!(nodes[1], ["1", "-", "1", "1"]);
    for (i, node) in nodes.iter().enumerate().skip(2) {
        assert_eq!(node[0], i.to_string());
        let (lo, hi): (usize, usize) = (node[2].parse().unwrap(), node[3].parse().unwrap());
        assert!(lo < i && hi < i && lo != hi);
    }
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn compile_over_capacity_exits_three() {
    let o = run_stdin(&["compile", "--order", "identity", "--capacity", "3"], WORKED);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn certify_worked_example() {
    let o = run_stdin(&["certify"], WORKED);
    assert!(o.status.success());
    let text = stdout(&o);
    let floor: u64 = text
        .lines()
        .find_map(|l| l.strip_prefix("floor: "))
        .expect("floor line")
        .trim()
        .parse()
        .unwrap();
    assert!(floor >= 8, "{text}");
    assert!(text.contains("assignments: 8"), "{text}");
}

#[test]
fn exit_codes_separate_usage_from_io() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["sample", "--dist", "F2", "--n", "5"]).status.code(), Some(1));
    assert_eq!(run(&["sample", "--dist", "F2", "--n", "3", "--m", "100", "--seed", "1"]).status.code(), Some(1));
    assert_eq!(run(&["solve", "/nonexistent/phase-lab.cnf"]).status.code(), Some(2));
    assert_eq!(run_stdin(&["solve"], "p cnf 2 1\n1 x 0\n").status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn sweep_and_plot_round_trip() {
    let dir = scratch("sweep");
    let out = dir.join("runs/trials.csv");
    let config = dir.join("config.json");
    std::fs::write(
        &config,
        r#"{"distribution":"F2","nValues":[12],"deltaValues":[0.5,1.5],"trials":3,"masterSeed":5,
            "metrics":["satisfiable","obddSize"],"nodeCapacity":5000,"outputPath":"ignored.csv"}"#,
    )
    .unwrap();
    let o = run(&["sweep", "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().count(), 7);
    assert!(std::path::Path::new(&format!("{}.summary.csv", out.display())).exists());

    let svg = dir.join("sat.svg");
    let o = run(&["plot", out.to_str().unwrap(), "--kind", "satFraction", "--out", svg.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));

    let bad = dir.join("bad.csv");
    std::fs::write(&bad, "n,foo\n1,2\n").unwrap();
    let o = run(&["plot", bad.to_str().unwrap(), "--kind", "satFraction", "--out", svg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("delta"));
    std::fs::remove_dir_all(dir).unwrap();
}
