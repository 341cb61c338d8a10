use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use crosslap::io::{self, format_sig6};
use crosslap::{diffusion_hub_analysis, fixtures, Grade, Multiplex, SpectralOptions};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn crosslap(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crosslap"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("CROSSLAP_TOL_ZERO")
        .output()
        .expect("binary runs")
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn files_in(dir: &Path) -> Vec<String> {
    let mut v: Vec<String> =
        std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect();
    v.sort();
    v
}

#[test]
fn data_files_match_fixtures() {
    for (name, expect) in [("f3.json", fixtures::f3()), ("kites_and_cones.json", fixtures::kites_and_cones())] {
        let (x, labels) = io::parse_bicomplex(&data(name)).unwrap();
        assert_eq!(x, expect, "{name}");
        assert_eq!(labels.top.len() + labels.bottom.len(), x.vertices(crosslap::Side::Top).count() + x.vertices(crosslap::Side::Bottom).count());
    }
}

#[test]
fn betti_f3() {
    let dir = tempfile::tempdir().unwrap();
    let out = crosslap(&["betti", data("f3.json").to_str().unwrap()], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = read(dir.path(), "betti.csv");
    assert!(csv.contains("\"(0,0)\",3,2"), "{csv}");
    let mut r = csv::Reader::from_reader(csv.as_bytes());
    let rows: Vec<(String, usize, usize)> = r.deserialize().map(|x| x.unwrap()).collect();
    assert_eq!(
        rows,
        vec![
            ("(0,-1)".into(), 2, 3),
            ("(1,-1)".into(), 1, 6),
            ("(-1,0)".into(), 2, 1),
            ("(-1,1)".into(), 5, 0),
            ("(0,0)".into(), 3, 2),
        ]
    );
}

#[test]
fn betti_selected_grades_on_kites_and_cones() {
    let dir = tempfile::tempdir().unwrap();
    let out = crosslap(
        &["betti", data("kites_and_cones.json").to_str().unwrap(), "--grade", "0,0", "--format", "csv"],
        dir.path(),
    );
    assert!(out.status.success());
    assert_eq!(read(dir.path(), "betti.csv"), "grade,beta_top,beta_bottom\n\"(0,0)\",3,1\n");
    assert_eq!(files_in(dir.path()), vec!["betti.csv"]);
}

#[test]
fn principal_hub_f3() {
    let dir = tempfile::tempdir().unwrap();
    let out = crosslap(&["hubs", data("f3.json").to_str().unwrap(), "--part", "T", "--stage", "max"], dir.path());
    assert!(out.status.success());
    let csv = read(dir.path(), "hubs_T_max.csv");
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines, vec!["rank,node,label,hubness", "1,1,v2_1,2.23607"]);
    let json: serde_json::Value = serde_json::from_str(&read(dir.path(), "hubs_T.json")).unwrap();
    let eigen = json["eigenvalues"].as_array().unwrap();
    assert_eq!(eigen.len(), 9);
}

#[test]
fn outputs_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [a.path(), b.path()] {
        let f3 = data("f3.json");
        let f3 = f3.to_str().unwrap();
        for args in [
            vec!["betti", f3],
            vec!["laplacian", f3, "--grade", "0,0", "--part", "B"],
            vec!["spectrum", f3, "--grade", "0,-1", "--part", "T"],
            vec!["hubs", f3, "--part", "B", "--stage", "all"],
            vec!["persist", f3, "--part", "T"],
        ] {
            let out = crosslap(&args, dir);
            assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        }
    }
    let names = files_in(a.path());
    assert_eq!(names, files_in(b.path()));
    assert!(names.contains(&"persistence_T.svg".to_string()));
    for n in names {
        assert_eq!(std::fs::read(a.path().join(&n)).unwrap(), std::fs::read(b.path().join(&n)).unwrap(), "{n}");
    }
}

#[test]
fn error_paths_exit_nonzero_without_files() {
    let dir = tempfile::tempdir().unwrap();
    let bad_json = dir.path().join("bad.json");
    std::fs::write(&bad_json, r#"{"crossimplices":[{"top":[1],"bottom":[2],"weight":-1}]}"#).unwrap();
    let self_loop = dir.path().join("loop.edges");
    std::fs::write(&self_loop, "1 1 2\n2 3 3\n").unwrap();
    let one_layer = dir.path().join("one.edges");
    std::fs::write(&one_layer, "1 1 2\n").unwrap();
    let f3 = data("f3.json");
    let f3 = f3.to_str().unwrap();
    let cases: Vec<(Vec<&str>, i32)> = vec![
        (vec!["betti", "does-not-exist.json"], 3),
        (vec!["betti", bad_json.to_str().unwrap()], 3),
        (vec!["diffuse", self_loop.to_str().unwrap()], 3),
        (vec!["diffuse", one_layer.to_str().unwrap()], 3),
        (vec!["diffuse", one_layer.to_str().unwrap(), "--pairs", "1,7"], 3),
        (vec!["betti", f3, "--tol-zero=-1"], 3),
        (vec!["betti", f3, "--tol-group", "0"], 3),
        // Analysis errors: an empty grade and a missing stage.
        (vec!["spectrum", f3, "--grade", "2,2"], 1),
        (vec!["hubs", f3, "--stage", "42"], 1),
        (vec!["hubs", f3, "--stage", "nonsense"], 2),
    ];
    for (args, code) in cases {
        let out_dir = tempfile::tempdir().unwrap();
        let out = crosslap(&args, out_dir.path());
        assert_eq!(out.status.code(), Some(code), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stderr.is_empty());
        assert!(files_in(out_dir.path()).is_empty(), "{args:?} left files behind");
    }
}

#[test]
fn env_tolerance_is_read() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_crosslap"))
        .args(["betti", data("f3.json").to_str().unwrap(), "--out"])
        .arg(dir.path())
        .env("CROSSLAP_TOL_ZERO", "abc")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let out = Command::new(env!("CARGO_BIN_EXE_crosslap"))
        .args(["betti", data("f3.json").to_str().unwrap(), "--out"])
        .arg(dir.path())
        .env("CROSSLAP_TOL_ZERO", "1e-7")
        .output()
        .unwrap();
    assert!(out.status.success());
}

/// Three layers on eight nodes with distinct shapes.
const SYNTHETIC: &str = "\
# layer u v
1 1 2
1 1 3
1 2 3
1 3 4
1 4 5
1 5 6
1 1 6
2 2 3
2 3 4
2 2 4
2 4 5
2 6 7
2 7 8
3 1 8
3 2 7
3 3 6
3 4 5
3 1 5
3 5 8
";

#[test]
fn diffuse_matches_library_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("m.edges");
    std::fs::write(&edges, SYNTHETIC).unwrap();
    let labels = dir.path().join("labels.txt");
    std::fs::write(&labels, (1..=8).map(|i| format!("{i} N{i}\n")).collect::<String>()).unwrap();
    let out_dir = dir.path().join("out");
    for jobs in ["1", "3"] {
        let out = crosslap(
            &[
                "diffuse",
                edges.to_str().unwrap(),
                "--pairs",
                "all",
                "--top",
                "10",
                "--labels",
                labels.to_str().unwrap(),
                "--jobs",
                jobs,
            ],
            &out_dir,
        );
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let mut m: Multiplex = io::read_multiplex_str(SYNTHETIC).unwrap();
    for i in 1..=8 {
        m.set_label(i, format!("N{i}"));
    }
    let pairs = m.ordered_pairs();
    assert_eq!(pairs.len(), 6);
    let rankings: Vec<String> = files_in(&out_dir).into_iter().filter(|n| n.ends_with("_ranking.csv")).collect();
    assert_eq!(rankings.len(), 6);
    for (s, t) in pairs {
        let report = diffusion_hub_analysis(&m, s, t, Some(10), false, &SpectralOptions::default()).unwrap();
        let csv = read(&out_dir, &format!("diffusion_{s}_{t}_ranking.csv"));
        let mut r = csv::Reader::from_reader(csv.as_bytes());
        let rows: Vec<csv::StringRecord> = r.records().map(|x| x.unwrap()).collect();
        assert_eq!(rows.len(), report.hubs.len(), "pair {s},{t}");
        assert!(rows.len() <= 10);
        for (row, hub) in rows.iter().zip(&report.hubs) {
            assert_eq!(row[0].parse::<usize>().unwrap(), hub.rank);
            assert_eq!(row[1].parse::<u32>().unwrap(), hub.node);
            assert_eq!(&row[2], format!("N{}", hub.node));
            assert_eq!(row[3].parse::<usize>().unwrap(), hub.persistence);
            assert_eq!(row[5], format_sig6(hub.hubness));
        }
        let json: serde_json::Value = serde_json::from_str(&read(&out_dir, &format!("diffusion_{s}_{t}.json"))).unwrap();
        assert_eq!(json["cross_edges"].as_u64().unwrap() as usize, m.edges(s).unwrap().count());
        assert_eq!(json["spectral"]["grade"], serde_json::to_value(Grade::CROSS_EDGES).unwrap());
    }
}
