use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_listdec"));
    c.env_remove("LISTDEC_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

/// JSON records without the leading run record.
fn records(text: &str) -> Vec<serde_json::Value> {
    text.lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap())
        .filter(|v| v["record"] != "run")
        .collect()
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

fn check_golden(name: &str, actual: &str) {
    let path = golden_dir().join(name);
    if std::env::var_os("LISTDEC_BLESS").is_some() {
        std::fs::create_dir_all(golden_dir()).unwrap();
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(actual, expected, "output drifted from {}", path.display());
}

#[test]
fn entropy_half() {
    assert_eq!(stdout(&["entropy", "--q", "2", "--x", "0.5"]), "1.0\n");
}

#[test]
fn ball_volume_example() {
    assert_eq!(stdout(&["ball-volume", "--n", "10", "--r", "3", "--q", "2"]), "176\n");
}

#[test]
fn rational_and_decimal_p_agree() {
    let a = records(&stdout(&["ball-volume", "--n", "10", "--p", "0.2", "--q", "2", "--json"]));
    let b = records(&stdout(&["ball-volume", "--n", "10", "--p", "1/5", "--q", "2", "--json"]));
    assert_eq!(a[0]["radius"], 2);
    assert_eq!(a, b);

    let a = records(&stdout(&["span-exp", "--n", "10", "--p", "0.2", "--ell", "2", "--trials", "20", "--json"]));
    let b = records(&stdout(&["span-exp", "--n", "10", "--p", "1/5", "--ell", "2", "--trials", "20", "--json"]));
    assert_eq!(a[0]["radius"], 2);
    assert_eq!(a, b);
}

#[test]
fn golden_seed_7() {
    check_golden("sample_ball_seed7.jsonl", &stdout(&["sample-ball", "--n", "12", "--p", "1/4", "--q", "3", "--count", "5", "--seed", "7", "--json"]));
    check_golden("gen_code_seed7.txt", &stdout(&["gen-code", "--n", "10", "--k", "3", "--q", "5", "--seed", "7"]));
    check_golden("pair_sum_seed7.csv", &stdout(&["pair-sum", "--n", "10,20", "--p", "0.1", "--trials", "2000", "--seed", "7", "--csv"]));
}

#[test]
fn golden_seed_2024() {
    check_golden("span_exp_seed2024.jsonl", &stdout(&["span-exp", "--n", "32", "--p", "1/4", "--ell", "4", "--trials", "50", "--seed", "2024", "--json"]));
    check_golden(
        "rate_sweep_seed2024.csv",
        &stdout(&["rate-sweep", "--n", "10", "--p", "1/5", "--eps", "0.05,0.1", "--codes", "8", "--seed", "2024", "--csv"]),
    );
}

#[test]
fn seed_flag_overrides_environment() {
    let args = ["gen-code", "--n", "12", "--k", "4", "--q", "3", "--seed", "9"];
    let plain = stdout(&args);
    let with_env = bin().args(args).env("LISTDEC_SEED", "1234").output().unwrap();
    assert_eq!(String::from_utf8(with_env.stdout).unwrap(), plain);

    let env_only = bin().args(&args[..7]).env("LISTDEC_SEED", "9").output().unwrap();
    assert_eq!(String::from_utf8(env_only.stdout).unwrap(), plain);
}

#[test]
fn different_seeds_differ() {
    let a = stdout(&["sample-ball", "--n", "40", "--p", "1/4", "--q", "2", "--count", "4", "--seed", "1"]);
    let b = stdout(&["sample-ball", "--n", "40", "--p", "1/4", "--q", "2", "--count", "4", "--seed", "2"]);
    assert_ne!(a, b);
}

fn subcommand_flags() -> Vec<(Vec<&'static str>, Vec<&'static str>)> {
    vec![
        (vec!["entropy"], vec!["--q", "--x"]),
        (vec!["ball-volume"], vec!["--n", "--r", "--p", "--q"]),
        (vec!["sample-ball"], vec!["--n", "--p", "--q", "--count"]),
        (vec!["gen-code"], vec!["--n", "--k", "--q", "--iid"]),
        (vec!["check-ld", "exact"], vec!["--code", "--p", "--list-size", "--mode"]),
        (vec!["check-ld", "mc"], vec!["--code", "--p", "--trials"]),
        (vec!["span-exp"], vec!["--n", "--p", "--q", "--ell", "--c-threshold", "--trials"]),
        (vec!["pair-sum"], vec!["--n", "--p", "--q", "--trials", "--center"]),
        (vec!["rate-sweep"], vec!["--n", "--q", "--p", "--eps", "--codes", "--c-const", "--mode", "--save-codes"]),
        (vec!["chain", "find"], vec!["--set", "--c"]),
        (vec!["chain", "verify"], vec!["--chain"]),
        (vec!["chain", "oracle"], vec!["--set", "--c", "--scan-translates"]),
        (vec!["shatter", "find"], vec!["--set", "--c"]),
        (vec!["shatter", "verify"], vec!["--set", "--witness", "--coords"]),
    ]
}

#[test]
fn help_lists_every_flag() {
    const GLOBAL: [&str; 7] = ["--seed", "--workers", "--json", "--csv", "--out", "--verbose", "--manifest"];
    let top = stdout(&["--help"]);
    for f in GLOBAL {
        assert!(top.contains(f), "top-level help lacks {f}");
    }
    for (path, _) in subcommand_flags() {
        assert!(top.contains(path[0]), "top-level help lacks {}", path[0]);
    }
    for (path, flags) in subcommand_flags() {
        let mut args = path.clone();
        args.push("--help");
        let help = stdout(&args);
        for f in flags.iter().chain(GLOBAL.iter()) {
            assert!(help.contains(f), "{path:?} help lacks {f}");
        }
    }
}

#[test]
fn manifest_rerun_reproduces_records() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run.jsonl");
    let out_s = out.to_str().unwrap();
    let o = run(&["--seed", "31", "pair-sum", "--n", "16,24", "--p", "1/8", "--trials", "3000", "--json", "--out", out_s]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let manifest = dir.path().join("run.jsonl.manifest.json");
    let m: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&manifest).unwrap()).unwrap();
    assert_eq!(m["seed"], 31);
    assert_eq!(m["subcommand"], "pair-sum");

    let again = dir.path().join("again.jsonl");
    let o = run(&["--manifest", manifest.to_str().unwrap(), "--out", again.to_str().unwrap(), "--workers", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let first = std::fs::read_to_string(&out).unwrap();
    let second = std::fs::read_to_string(&again).unwrap();
    assert_eq!(first, second);
    assert!(!records(&first).is_empty());
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["entropy", "--q", "2", "--x", "1.5"]).status.code(), Some(2));
    assert_eq!(run(&["ball-volume", "--n", "10", "--r", "2", "--q", "6"]).status.code(), Some(2));
    assert_eq!(run(&["gen-code", "--n", "4", "--k", "5", "--q", "2"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["entropy", "--q", "2", "--x", "0.5", "--bogus"]).status.code(), Some(2));
    let o = run(&["sample-ball", "--n", "10", "--p", "0.6", "--q", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());

    let dir = tempfile::tempdir().unwrap();
    let code = dir.path().join("big.txt");
    let gen = stdout(&["gen-code", "--n", "40", "--k", "20", "--q", "2", "--seed", "1"]);
    std::fs::write(&code, gen).unwrap();
    let o = run(&["check-ld", "exact", "--code", code.to_str().unwrap(), "--p", "1/4", "--mode", "exhaustive"]);
    assert_eq!(o.status.code(), Some(3));
    let o = run(&["check-ld", "exact", "--code", code.to_str().unwrap(), "--p", "1/4", "--mode", "candidates"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn repetition_code_is_uniquely_decodable() {
    let dir = tempfile::tempdir().unwrap();
    let code = dir.path().join("rep.txt");
    std::fs::write(&code, "2 7 1\n1111111\n").unwrap();
    let text = stdout(&["check-ld", "exact", "--code", code.to_str().unwrap(), "--p", "0.2"]);
    assert!(text.starts_with("L_max=1\n"), "{text}");
    let rec = records(&stdout(&["check-ld", "exact", "--code", code.to_str().unwrap(), "--p", "1/5", "--list-size", "1", "--json"]));
    assert_eq!(rec[0]["l_max"], 1);
    assert_eq!(rec[0]["list_decodable"], true);
}

#[test]
fn chain_and_shatter_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let set = dir.path().join("set.txt");
    let mut body = String::from("3 3\n");
    for v in ["000", "012", "120", "201", "111", "222", "102", "210", "021", "200"] {
        body.push_str(v);
        body.push('\n');
    }
    std::fs::write(&set, body).unwrap();
    let s = set.to_str().unwrap();

    let chain = dir.path().join("chain.txt");
    std::fs::write(&chain, stdout(&["chain", "find", "--set", s, "--c", "2"])).unwrap();
    assert_eq!(stdout(&["chain", "verify", "--chain", chain.to_str().unwrap()]), "valid\n");

    let wit = dir.path().join("wit.txt");
    let found = stdout(&["shatter", "find", "--set", s, "--c", "1"]);
    assert_ne!(found, "none\n");
    std::fs::write(&wit, found).unwrap();
    assert_eq!(stdout(&["shatter", "verify", "--set", s, "--witness", wit.to_str().unwrap()]), "valid\n");

    let oracle = records(&stdout(&["chain", "oracle", "--set", s, "--c", "2", "--json"]));
    let found = records(&stdout(&["chain", "find", "--set", s, "--c", "2", "--json"]));
    assert!(oracle[0]["longest"].as_u64().unwrap() >= 1);
    assert!(found[0]["d"].as_u64().unwrap() >= found[0]["guaranteed"].as_u64().unwrap());
}

#[test]
fn csv_has_header_and_rows() {
    let csv = stdout(&["span-exp", "--n", "20", "--p", "1/5", "--ell", "3", "--trials", "30", "--csv"]);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("count,trials"));
    let total: usize = lines.map(|l| l.split(',').nth(1).unwrap().parse::<usize>().unwrap()).sum();
    assert_eq!(total, 30);
}

#[test]
fn saved_sweep_codes_parse() {
    let dir = tempfile::tempdir().unwrap();
    let codes = dir.path().join("codes");
    stdout(&["rate-sweep", "--n", "9", "--p", "1/5", "--eps", "0.1", "--codes", "3", "--save-codes", codes.to_str().unwrap()]);
    let mut n = 0;
    for e in std::fs::read_dir(&codes).unwrap() {
        let path = e.unwrap().path();
        let text = stdout(&["check-ld", "exact", "--code", path.to_str().unwrap(), "--p", "1/5"]);
        assert!(text.starts_with("L_max="));
        n += 1;
    }
    assert_eq!(n, 3);
}
