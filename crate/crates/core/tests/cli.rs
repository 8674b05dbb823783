use std::process::Command;

fn unitlab(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_unitlab")).args(args).env_remove("UNITLAB_CAP").output().unwrap()
}

#[test]
fn verify_is_byte_identical_across_runs() {
    let args = ["verify", "brauer,lemma-center,johnson", "--seed", "7", "--samples", "20"];
    let a = unitlab(&args);
    let b = unitlab(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.lines().last().unwrap().starts_with("summary total="));
    assert!(text.contains("check=johnson group=modular(3,3) status=pass seed=7 samples=20"));
}

#[test]
fn exit_codes() {
    assert_eq!(unitlab(&["verify", "vp-witness", "--samples", "1"]).status.code(), Some(1));
    assert_eq!(unitlab(&["verify", "no-such-check"]).status.code(), Some(2));
    assert_eq!(unitlab(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(unitlab(&["build", "modular(3)"]).status.code(), Some(2));
    assert_eq!(unitlab(&["build", "modular(3,3)"]).status.code(), Some(0));
    assert_eq!(unitlab(&["--list-checks"]).status.code(), Some(0));
}

#[test]
fn list_checks_covers_every_id() {
    let out = String::from_utf8(unitlab(&["--list-checks"]).stdout).unwrap();
    for id in [
        "brauer",
        "huppert",
        "center-eq2",
        "center-eq3",
        "lemma-abp",
        "lemma-center",
        "eq-p2",
        "exp-v",
        "vp-witness",
        "vp-decomp",
        "johnson",
        "comm-exp",
        "recognizer",
        "berman",
    ] {
        assert!(out.lines().any(|l| l.split_whitespace().next() == Some(id)), "{id}");
    }
}

#[test]
fn cap_from_environment_and_flag() {
    let out = Command::new(env!("CARGO_BIN_EXE_unitlab"))
        .args(["build", "modular(3,4)"])
        .env("UNITLAB_CAP", "27")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(unitlab(&["build", "modular(3,4)", "--cap", "27"]).status.code(), Some(2));
    let listed = String::from_utf8(unitlab(&["list", "--p", "7"]).stdout).unwrap();
    assert!(listed.is_empty());
    let raised = String::from_utf8(unitlab(&["list", "--p", "7", "--cap", "2401"]).stdout).unwrap();
    assert!(raised.contains("extraspecial(7,p)"));
}

#[test]
fn distinguish_subcommand() {
    let out = unitlab(&["distinguish", "extraspecial(3,p)", "modular(3,3)"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("verdict distinguished"));
    assert!(text.contains("log_Vp=8") && text.contains("log_Vp=10"));
    let same = String::from_utf8(unitlab(&["distinguish", "modular(3,3)", "extraspecial(3,p2)"]).stdout).unwrap();
    assert!(same.contains("verdict same-type"));
}

#[test]
fn report_writes_file() {
    let dir = std::env::temp_dir().join(format!("unitlab-report-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.txt");
    let out = unitlab(&["report", "--out", path.to_str().unwrap(), "--samples", "5"]);
    assert_eq!(out.status.code(), Some(1));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("group=catalog(p=3)") && text.contains("group=catalog(p=5)"));
    std::fs::remove_dir_all(&dir).unwrap();
}
