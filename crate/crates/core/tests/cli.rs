use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_viscous-shock");

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn run(args: &[&str], out: &Path) -> Output {
    Command::new(BIN)
        .args(args)
        .arg("--out-dir")
        .arg(out)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn report_key<'a>(report: &'a str, key: &str) -> &'a str {
    let block = report.split("[summary]").nth(1).unwrap();
    block
        .lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        .unwrap_or_else(|| panic!("no {key} in report"))
}

#[test]
fn speeds_prints_all_four() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &["speeds", "--scenario", data("ex1.cfg").to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(code(&o), 0);
    let s = String::from_utf8(o.stdout).unwrap();
    for label in ["u_sl", "u_A ", "u_A*", "u_f", "regime: fast"] {
        assert!(s.contains(label), "{label} missing from\n{s}");
    }
}

#[test]
fn exit_codes_follow_the_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("ex1.cfg", 0),
        ("gap.cfg", 2),
        ("three_point.cfg", 2),
        ("perpendicular.cfg", 3),
    ];
    for (file, want) in cases {
        let o = run(
            &["admissible", "--scenario", data(file).to_str().unwrap()],
            dir.path(),
        );
        assert_eq!(code(&o), want, "{file}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let report = std::fs::read_to_string(dir.path().join("gap.report.txt")).unwrap();
    assert_eq!(report_key(&report, "verdict"), "not-admissible");
    assert!(report_key(&report, "failed_conditions").contains('D'));
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["admissible"], dir.path());
    assert_eq!(code(&o), 1);
    let o = run(&["nonsense"], dir.path());
    assert_eq!(code(&o), 1);
    let o = run(&["admissible", "--scenario", "/nonexistent/file.cfg"], dir.path());
    assert_eq!(code(&o), 1);
    let o = run(&["figure1", "--ratio", "0.5"], dir.path());
    assert_eq!(code(&o), 1);
    let o = run(&["figure3", "--ratio", "-1"], dir.path());
    assert_eq!(code(&o), 1);
}

#[test]
fn parse_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.cfg");
    let text = std::fs::read_to_string(data("gap.cfg"))
        .unwrap()
        .replace("h2 = 0.7", "h2 = 0.7\nh3 = 1");
    std::fs::write(&bad, text).unwrap();
    let o = run(&["speeds", "--scenario", bad.to_str().unwrap()], dir.path());
    assert_eq!(code(&o), 1);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 13"), "{err}");
    assert!(err.contains("h3"), "{err}");
}

#[test]
fn figures_write_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    for (fig, csvs) in [
        ("figure1", vec!["figure1.csv"]),
        ("figure2", vec!["figure2.csv"]),
        (
            "figure3",
            vec!["figure3_ratio0.csv", "figure3_ratio1.csv", "figure3_ratio2.csv"],
        ),
    ] {
        let o = run(&[fig], dir.path());
        assert_eq!(code(&o), 0, "{fig}: {}", String::from_utf8_lossy(&o.stderr));
        let svg = std::fs::read_to_string(dir.path().join(format!("{fig}.svg"))).unwrap();
        assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
        assert!(svg.trim_end().ends_with("</svg>"));
        for c in csvs {
            let csv = std::fs::read_to_string(dir.path().join(c)).unwrap();
            let mut lines = csv.lines();
            assert_eq!(lines.next(), Some("x,y,v,u2,p,eps,n,S"));
            let rows: Vec<Vec<f64>> = lines
                .map(|l| l.split(',').map(|f| f.parse().unwrap()).collect())
                .collect();
            assert!(rows.len() > 10);
            assert!(rows
                .iter()
                .all(|r| r.len() == 8 && r.iter().all(|x| x.is_finite())));
            assert!(
                rows.windows(2).all(|w| w[1][0] > w[0][0]),
                "x must increase in {c}"
            );
        }
        let report = std::fs::read_to_string(dir.path().join(format!("{fig}.report.txt"))).unwrap();
        if fig == "figure3" {
            assert_eq!(report_key(&report, "ratios"), "3");
        } else {
            assert_eq!(report_key(&report, "verdict"), "admissible");
        }
    }
}

#[test]
fn figures_are_byte_identical_across_runs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for fig in ["figure1", "figure2", "figure3"] {
        let oa = run(&[fig], a.path());
        let ob = run(&[fig], b.path());
        assert_eq!(oa.stdout, ob.stdout);
    }
    let mut names: Vec<_> = std::fs::read_dir(a.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert_eq!(names.len(), 11);
    for n in names {
        let x = std::fs::read(a.path().join(&n)).unwrap();
        let y = std::fs::read(b.path().join(&n)).unwrap();
        assert!(x == y, "{n:?} differs between runs");
    }
}
