use std::path::Path;
use std::process::{Command, Output};

use stieltjes_core::bounds::fps_neighbours;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stieltjes")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn head2(text: &str) -> String {
    text.lines().take(2).collect::<Vec<_>>().join("\n")
}

fn golden(name: &str) -> String {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(p).unwrap().trim_end().to_string()
}

/// Data rows of a schema-tagged CSV as `(header, records)`.
fn parse_csv(text: &str) -> (csv::StringRecord, Vec<csv::StringRecord>) {
    let body = text.strip_prefix("# schema=1\n").expect("schema line");
    let mut r = csv::Reader::from_reader(body.as_bytes());
    let h = r.headers().unwrap().clone();
    let rows = r.records().map(|x| x.unwrap()).collect();
    (h, rows)
}

fn field(h: &csv::StringRecord, row: &csv::StringRecord, name: &str) -> String {
    let i = h.iter().position(|c| c == name).unwrap();
    row[i].to_string()
}

#[test]
fn exit_codes() {
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["bogus"])), 2);
    assert_eq!(code(&run(&["compute", "--alpha", "1", "--alpha-min", "0"])), 2);

    let bad_a = run(&["compute", "--alpha", "1", "--a", "0"]);
    assert_eq!(code(&bad_a), 2);
    assert!(String::from_utf8_lossy(&bad_a.stderr).contains("--a"));
    assert_eq!(code(&run(&["compute", "--alpha", "1", "--v", "3"])), 2);
    assert_eq!(code(&run(&["plot", "--format", "json"])), 2);

    // the Euler-Maclaurin tail overflows long before the sum converges
    let overflow = run(&["compute", "--alpha", "400", "--m", "1", "--v", "2"]);
    assert_eq!(code(&overflow), 3);

    // no grid point below the measurement cap leaves nothing to witness
    let empty = run(&["verify", "--suite", "theorem", "--measure-cap", "3"]);
    assert_eq!(code(&empty), 1);
    assert!(stdout(&empty).contains("FAIL  theorem/measured_below_theorem"));
}

#[test]
fn thread_override_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_stieltjes"))
        .args(["compute", "--alpha", "1"])
        .env("STIELTJES_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
    let out = Command::new(env!("CARGO_BIN_EXE_stieltjes"))
        .args(["compute", "--alpha", "1"])
        .env("STIELTJES_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
}

#[test]
fn compute_schema_and_values() {
    let out = run(&["compute", "--alpha", "0", "--a", "0.5"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert_eq!(head2(&text), golden("compute.csv"));
    let (h, rows) = parse_csv(&text);
    assert_eq!(rows.len(), 1);
    // γ₀(1/2) = γ + 2 log 2
    let g: f64 = field(&h, &rows[0], "gamma_re").parse().unwrap();
    assert!((g - (0.577_215_664_901_532_9 + 2.0 * std::f64::consts::LN_2)).abs() < 1e-12);
}

#[test]
fn compute_sweep_and_json() {
    let text = stdout(&run(&["compute", "--alpha-min", "0", "--alpha-max", "2", "--step", "0.5"]));
    let (h, rows) = parse_csv(&text);
    let alphas: Vec<f64> = rows.iter().map(|r| field(&h, r, "alpha").parse().unwrap()).collect();
    assert_eq!(alphas, vec![0.0, 0.5, 1.0, 1.5, 2.0]);

    let json: serde_json::Value =
        serde_json::from_str(&stdout(&run(&["compute", "--alpha", "1", "--format", "json"]))).unwrap();
    assert_eq!(json["schema"], 1);
    let c = json["rows"][0]["c_value"].as_f64().unwrap();
    assert!((c - -0.072_815_845_483_676_72).abs() < 1e-10);
}

#[test]
fn compute_parameters_agree_within_error_bounds() {
    let value = |m: &str, v: &str| {
        let (h, rows) = parse_csv(&stdout(&run(&["compute", "--alpha", "5", "--m", m, "--v", v])));
        let c: f64 = field(&h, &rows[0], "c_value").parse().unwrap();
        let e: f64 = field(&h, &rows[0], "err_bound").parse().unwrap();
        (c, e)
    };
    let (c1, e1) = value("1", "2");
    let (c2, e2) = value("20", "8");
    assert!((c1 - c2).abs() <= e1 + e2);
}

#[test]
fn bounds_validity_columns() {
    let text = stdout(&run(&["bounds", "--alpha-min", "3.5", "--alpha-max", "10", "--step", "6.5"]));
    assert_eq!(head2(&text), golden("bounds.csv"));
    let (h, rows) = parse_csv(&text);
    assert_eq!(rows.len(), 2);
    let families = ["berndt", "williams_zhang", "matsuoka", "saad_eddin", "fps", "conjecture", "theorem"];
    for f in families {
        let valid = field(&h, &rows[1], &format!("{f}_valid"));
        assert_eq!(valid, "true", "{f} at 10");
        assert!(!field(&h, &rows[1], f).is_empty());
    }
    for f in ["berndt", "williams_zhang", "matsuoka", "saad_eddin", "theorem"] {
        assert_eq!(field(&h, &rows[0], &format!("{f}_valid")), "false", "{f} at 3.5");
    }
    assert_eq!(field(&h, &rows[0], "fps_valid"), "true");
    assert!(field(&h, &rows[0], "berndt").is_empty());
    for (row, alpha) in rows.iter().zip([3.5, 10.0]) {
        let expected = fps_neighbours(alpha).unwrap().is_some();
        assert_eq!(!field(&h, row, "fps_floor").is_empty(), expected, "alpha {alpha}");
        assert_eq!(!field(&h, row, "fps_ceil").is_empty(), expected, "alpha {alpha}");
    }
}

#[test]
fn bounds_json_lists_every_family() {
    let json: serde_json::Value =
        serde_json::from_str(&stdout(&run(&["bounds", "--alpha", "10", "--format", "json"]))).unwrap();
    assert_eq!(json["schema"], 1);
    assert_eq!(json["rows"].as_array().unwrap().len(), 1);
    let names: Vec<&str> = json["rows"][0]["bounds"]
        .as_array()
        .unwrap()
        .iter()
        .map(|b| b["family"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["berndt", "williams_zhang", "matsuoka", "saad_eddin", "fps", "conjecture", "theorem"]);

    let json: serde_json::Value =
        serde_json::from_str(&stdout(&run(&["bounds", "--alpha", "3.5", "--format", "json"]))).unwrap();
    assert_eq!(json["rows"][0]["bounds"][0]["valid"], false);
    assert_eq!(json["rows"][0]["bounds"][0]["reason"], "integer index only");
}

#[test]
fn saddle_report_and_nodes() {
    let outside = stdout(&run(&["saddle", "--alpha", "200", "--k", "1"]));
    assert!(outside.contains("saddle 2.46250 1.13792"), "{outside}");
    assert!(outside.contains("outside"));
    assert!(!outside.contains("EXCEEDED"));
    let inside = stdout(&run(&["saddle", "--alpha", "200", "--k", "40"]));
    assert!(inside.contains("inside"));

    let dir = tempfile::tempdir().unwrap();
    let nodes = dir.path().join("nodes.csv");
    let out = run(&["saddle", "--alpha", "50", "--k", "2", "--out", nodes.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&nodes).unwrap();
    assert_eq!(head2(&text), golden("saddle_nodes.csv"));
    let (h, rows) = parse_csv(&text);
    let segments: Vec<String> = rows.iter().map(|r| field(&h, r, "segment")).collect();
    assert_eq!(segments.first().map(String::as_str), Some("real_axis"));
    assert!(segments.iter().any(|s| s == "tail"));

    let json: serde_json::Value =
        serde_json::from_str(&stdout(&run(&["saddle", "--alpha", "200", "--k", "40", "--format", "json"]))).unwrap();
    assert_eq!(json["k"], 40);
    assert!(json["nodes"].as_array().unwrap().len() > 10);
    assert_eq!(code(&run(&["saddle", "--alpha-min", "1", "--alpha-max", "2"])), 2);
}

#[test]
fn verify_suites_pass() {
    for suite in ["w0", "lemma_t", "p3", "sbound"] {
        let out = run(&["verify", "--suite", suite]);
        assert_eq!(code(&out), 0, "{suite}: {}", stdout(&out));
        assert!(!stdout(&out).contains("FAIL"));
    }
}

#[test]
fn plot_writes_svg_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("fig.svg");
    let out = run(&["plot", "--alpha-min", "1", "--alpha-max", "20", "--out", svg.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let csv_text = std::fs::read_to_string(svg.with_extension("csv")).unwrap();
    assert_eq!(head2(&csv_text), golden("plot.csv"));
    assert_eq!(parse_csv(&csv_text).1.len(), 20);
    let svg_text = std::fs::read_to_string(&svg).unwrap();
    assert!(svg_text.trim_end().ends_with("</svg>"));
    assert!(stdout(&out).contains("fig.svg"));

    // csv-only output skips the drawing
    let only = dir.path().join("only.svg");
    let out = run(&["plot", "--alpha", "10", "--format", "csv", "--out", only.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(!only.exists() && only.with_extension("csv").exists());
}
