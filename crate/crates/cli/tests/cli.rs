use std::path::Path;
use std::process::{Command, Output};

use ipset_core::plot::parse_ascii;

fn ipset(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ipset"))
        .args(args)
        .output()
        .expect("run ipset")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Reference plot of the cross over F_29. Its listing repeats (6, 14); the
/// partner on the other line is (6, 15).
const CROSS_29_REFERENCE: [(u32, u32); 29] = [
    (0, 0),
    (1, 12),
    (4, 19),
    (5, 2),
    (6, 14),
    (7, 26),
    (9, 21),
    (13, 11),
    (16, 18),
    (20, 8),
    (22, 3),
    (23, 15),
    (24, 27),
    (25, 10),
    (28, 17),
    (1, 17),
    (4, 10),
    (5, 27),
    (6, 15),
    (7, 3),
    (9, 8),
    (13, 18),
    (16, 11),
    (20, 21),
    (22, 26),
    (23, 14),
    (24, 2),
    (25, 19),
    (28, 12),
];

#[test]
fn cross_construct_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cross.json");
    let c = ipset(&[
        "construct",
        "--ring",
        "Fp:29",
        "--family",
        "cross",
        "-o",
        path_str(&out),
    ]);
    assert!(c.status.success());
    let v = ipset(&["verify", path_str(&out), "--expect", "integral", "--expect", "maximal"]);
    assert_eq!(v.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&v.stdout).unwrap();
    assert_eq!(report["integral"], true);
    assert_eq!(report["maximal"], true);
    assert_eq!(report["size"], 29);
    let mismatch = ipset(&["verify", path_str(&out), "--expect", "arc"]);
    assert_eq!(mismatch.status.code(), Some(2));
}

#[test]
fn ascii_plot_of_the_cross_matches_reference_plot() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cross.json");
    ipset(&[
        "construct",
        "--ring",
        "Fp:29",
        "--family",
        "cross",
        "-o",
        path_str(&out),
    ]);
    let plot = ipset(&["plot", path_str(&out), "--format", "ascii"]);
    assert!(plot.status.success());
    let mut want = CROSS_29_REFERENCE.to_vec();
    want.sort();
    assert_eq!(parse_ascii(&String::from_utf8(plot.stdout).unwrap()), want);
    let svg = dir.path().join("cross.svg");
    assert!(
        ipset(&["plot", path_str(&out), "--format", "svg", "-o", path_str(&svg)])
            .status
            .success()
    );
    let text = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches("<circle").count(), 29);
    assert!(text.contains(r#"width="580""#));
}

#[test]
fn search_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let r = ipset(&[
            "search",
            "--ring",
            "Fp:29",
            "--mode",
            "general",
            "--parallel",
            "3",
            "--witnesses",
            "4",
            "-o",
            path_str(p),
        ]);
        assert!(r.status.success());
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let report: serde_json::Value = serde_json::from_slice(&ta).unwrap();
    assert_eq!(report["best_cardinality"], 7);
    assert_eq!(report["complete"], true);
    assert!(report.get("wall_time").is_none());
}

#[test]
fn table_to_forty_seven_has_no_differences() {
    let r = ipset(&["table", "--max-p", "47"]);
    assert_eq!(r.status.code(), Some(0));
    assert!(String::from_utf8(r.stdout).unwrap().contains("0 difference(s)"));
}

#[test]
fn exit_codes() {
    assert_eq!(
        ipset(&["search", "--ring", "Fp:9", "--mode", "arc"]).status.code(),
        Some(3)
    );
    assert_eq!(
        ipset(&["construct", "--ring", "Fp:7", "--family", "nope"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(ipset(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(ipset(&["verify", "/nonexistent/file.json"]).status.code(), Some(3));
    assert_eq!(
        ipset(&["search", "--ring", "Fp:53", "--mode", "integral"])
            .status
            .code(),
        Some(4)
    );
    let limited = ipset(&["search", "--ring", "Fp:29", "--mode", "general", "--node-limit", "5"]);
    assert_eq!(limited.status.code(), Some(4));
    assert_eq!(ipset(&["--help"]).status.code(), Some(0));
}

#[test]
fn malformed_document_is_invalid_input() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, r#"{"schema_version":1,"ring":"Fp:7","points":[[9,0]]}"#).unwrap();
    assert_eq!(ipset(&["verify", path_str(&p)]).status.code(), Some(3));
    std::fs::write(&p, "not json").unwrap();
    assert_eq!(ipset(&["plot", path_str(&p)]).status.code(), Some(3));
}

#[test]
fn bounds_and_auto_reports() {
    let b = ipset(&["bounds", "--ring", "Fp:31", "--quantity", "Ibar"]);
    let v: serde_json::Value = serde_json::from_slice(&b.stdout).unwrap();
    assert_eq!(v["value"]["kind"], "exact");
    assert_eq!(v["value"]["value"], 16);
    let a = ipset(&["auto", "--ring", "Fp:5"]);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["generated_group_order"], 32);
    assert_eq!(v["full_group_order"], 32);
    let z = ipset(&["auto", "--ring", "Zn:25"]);
    assert!(z.status.success());
}

#[test]
fn constructions_from_the_command_line() {
    let dir = tempfile::tempdir().unwrap();
    for (ring, family, size) in [
        ("Fq:9", "subfield", 9),
        ("Fp:31", "circle", 16),
        ("Zn:25", "zn:i", 125),
        ("Zn:25", "zn:ii", 125),
        ("Zn:3*Zn:5", "product", 15),
    ] {
        let p = dir.path().join("s.json");
        let c = ipset(&["construct", "--ring", ring, "--family", family, "-o", path_str(&p)]);
        assert!(c.status.success(), "{ring} {family}");
        let v = ipset(&["verify", path_str(&p)]);
        let report: serde_json::Value = serde_json::from_slice(&v.stdout).unwrap();
        assert_eq!(report["size"], size, "{ring} {family}");
    }
    let p = dir.path().join("crt.json");
    ipset(&[
        "construct",
        "--ring",
        "Zn:3*Zn:5",
        "--family",
        "product",
        "--crt",
        "-o",
        path_str(&p),
    ]);
    let doc: serde_json::Value = serde_json::from_slice(&std::fs::read(&p).unwrap()).unwrap();
    assert_eq!(doc["ring"], "Zn:15");
}

#[test]
fn quadrance_flag_is_recorded_and_used() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("c.json");
    ipset(&[
        "construct",
        "--ring",
        "Fp:13",
        "--family",
        "circle",
        "--quadrance",
        "-o",
        path_str(&p),
    ]);
    let v = ipset(&["verify", path_str(&p), "--expect", "arc"]);
    assert_eq!(v.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&v.stdout).unwrap();
    assert_eq!(report["convention"], "quadrance");
    assert_eq!(report["size"], 6);
}
