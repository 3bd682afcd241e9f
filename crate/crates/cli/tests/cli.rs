use ndpolar_cli::{run, EXIT_INVALID, EXIT_IO, EXIT_USAGE};
use ndpolar_core::{fixtures, load_model, SliceSelector, StateIter};

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn cli(args: &[&str]) -> Out {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["ndpolar"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut out, &mut err);
    Out {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn ok(args: &[&str]) -> String {
    let o = cli(args);
    assert_eq!(o.code, 0, "{args:?}: {}", o.stderr);
    o.stdout
}

#[test]
fn slice_csv_matches_library_for_every_slice() {
    for (name, doc) in fixtures::ALL {
        let m = load_model(doc).unwrap();
        let ctx: Vec<usize> = m.space().context_axes().iter().map(|a| a.levels()).collect();
        for s in StateIter::new(ctx) {
            let sigma = SliceSelector::new(m.space(), s.0.clone()).unwrap();
            let grid = m.slice(&sigma).unwrap();
            let sets: Vec<String> = m
                .space()
                .context_axes()
                .iter()
                .zip(&s.0)
                .map(|(a, l)| format!("{}={}", a.id(), l))
                .collect();
            let mut args = vec!["slice", name];
            for s in &sets {
                args.push("--set");
                args.push(s);
            }
            let csv = ok(&args);
            let rows: Vec<Vec<&str>> = csv.lines().map(|l| l.split(',').collect()).collect();
            let n2 = m.space().impact().levels();
            assert_eq!(rows.len(), n2 + 1);
            for (r, row) in rows[1..].iter().enumerate() {
                let l2 = n2 - 1 - r;
                assert_eq!(row[0], m.space().impact().label(l2));
                for (l1, cell) in row[1..].iter().enumerate() {
                    assert_eq!(*cell, m.scale().name(grid.get(l1, l2)), "{name} {sets:?} ({l1},{l2})");
                }
            }
        }
    }
}

#[test]
fn recently_serviced_slice_as_csv() {
    let csv = ok(&["slice", "cooling", "--set", "cooling=N+1", "--set", "maintenance=recently serviced"]);
    let expected = "\
impact\\probability,Very low,Low,Medium,High,Very high
Catastrophic,light-green,orange,orange,orange,orange
High,light-green,light-green,orange,orange,orange
Medium,light-green,light-green,light-green,orange,orange
Low,green,light-green,light-green,light-green,orange
Insignificant,green,green,light-green,light-green,light-green
";
    assert_eq!(csv, expected);
}

#[test]
fn labels_and_indices_are_interchangeable() {
    let m = fixtures::cooling();
    for axis in m.space().context_axes() {
        for (l, label) in axis.labels().iter().enumerate() {
            let by_index = ok(&["slice", "cooling", "--set", &format!("{}={l}", axis.id()), "--format", "json"]);
            let by_label = ok(&["slice", "cooling", "--set", &format!("{}={label}", axis.id()), "--format", "json"]);
            assert_eq!(by_index, by_label);
        }
    }
    assert_eq!(
        ok(&["aggregate", "cooling", "--risk", "Medium,High"]),
        ok(&["aggregate", "cooling", "--risk", "2,3"])
    );
    assert_eq!(
        ok(&["violations", "cooling", "--state", "Medium,Medium,N+1,overdue"]),
        ok(&["violations", "cooling", "--state", "2,2,1,2"])
    );
}

#[test]
fn walk_table() {
    let t = ok(&["walk", "cooling", "--vary", "maintenance", "--set", "cooling=N+1", "--risk", "Medium,Medium"]);
    assert_eq!(
        t,
        "level,label,risk_grade,V\n0,recently serviced,light-green,0\n1,due,orange,0\n2,overdue,orange,1\n"
    );
    let j: serde_json::Value = serde_json::from_str(&ok(&[
        "walk", "cooling", "--vary", "maintenance", "--set", "cooling=1", "--format", "json",
    ]))
    .unwrap();
    assert_eq!(j["steps"].as_array().unwrap().len(), 3);
}

#[test]
fn violations_line() {
    assert_eq!(ok(&["violations", "cooling", "--state", "2,2,1,2"]), "v=[0,0,0,1] V=1\n");
    let j: serde_json::Value = serde_json::from_str(&ok(&[
        "violations", "cooling", "--state", "2,2,1,2", "--format", "json",
    ]))
    .unwrap();
    assert_eq!(j, serde_json::json!({ "v": [0, 0, 0, 1], "V": 1 }));
}

#[test]
fn aggregate_text() {
    let t = ok(&["aggregate", "cooling", "--set", "maintenance=due", "--risk", "2,2"]);
    assert_eq!(
        t,
        "risk grade: orange\nprobability: light-green,light-green,orange,orange,orange\nimpact: light-green,light-green,orange,orange,orange\n"
    );
}

#[test]
fn render_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("polar.svg");
    let o = cli(&["render", "cooling", "--view", "polar", "-o", path.to_str().unwrap()]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let svg = std::fs::read_to_string(&path).unwrap();
    assert_eq!(svg.matches("class=\"segment\"").count(), 17);
    let stdout = ok(&["render", "cooling", "--view", "matrix", "--theta0-deg", "-90"]);
    assert_eq!(stdout.matches("class=\"cell\"").count(), 25);
    let o = cli(&["render", "cooling", "-o", "/nonexistent-dir/x.svg"]);
    assert_eq!(o.code, EXIT_IO);
}

#[test]
fn fmt_output_reloads() {
    let dir = tempfile::tempdir().unwrap();
    for (name, _) in fixtures::ALL {
        let text = ok(&["fmt", name]);
        let path = dir.path().join(format!("{name}.json"));
        std::fs::write(&path, &text).unwrap();
        assert_eq!(ok(&["fmt", path.to_str().unwrap()]), text);
        ok(&["validate", path.to_str().unwrap()]);
    }
}

#[test]
fn exit_codes() {
    assert_eq!(cli(&[]).code, EXIT_USAGE);
    assert_eq!(cli(&["frobnicate"]).code, EXIT_USAGE);
    assert_eq!(cli(&["slice", "cooling", "--set", "nolevel"]).code, EXIT_USAGE);
    assert_eq!(cli(&["slice"]).code, EXIT_USAGE);
    assert_eq!(cli(&["slice", "cooling", "--set", "humidity=1"]).code, EXIT_INVALID);
    assert_eq!(cli(&["slice", "cooling", "--set", "maintenance=weekly"]).code, EXIT_INVALID);
    assert_eq!(cli(&["violations", "cooling", "--state", "1,2"]).code, EXIT_INVALID);
    assert_eq!(cli(&["validate", "/no/such/model.json"]).code, EXIT_IO);
    assert_eq!(cli(&["--help"]).code, 0);
}

#[test]
fn validate_reports_json_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let mut doc: serde_json::Value = serde_json::from_str(fixtures::COOLING).unwrap();
    doc["assignment"]["rules"] = serde_json::json!("when cooling == \"N\" then pink;");
    let path = dir.path().join("bad.json");
    std::fs::write(&path, doc.to_string()).unwrap();
    let o = cli(&["validate", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.code, EXIT_INVALID);
    let j: serde_json::Value = serde_json::from_str(o.stderr.lines().take_while(|l| !l.starts_with("error[")).collect::<Vec<_>>().join("\n").as_str()).unwrap();
    assert_eq!(j["valid"], false);
    assert_eq!(j["diagnostics"][0]["code"], "E_UNKNOWN_GRADE");
    assert!(j["diagnostics"][0]["message"].as_str().unwrap().contains("pink"));

    let o = cli(&["validate", "cooling"]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.starts_with("ok: "));
}

#[test]
fn non_total_model_names_uncovered_states() {
    let dir = tempfile::tempdir().unwrap();
    let mut doc: serde_json::Value = serde_json::from_str(fixtures::CLASSIC_2D).unwrap();
    doc["assignment"]["entries"].as_array_mut().unwrap().pop();
    let path = dir.path().join("gap.json");
    std::fs::write(&path, doc.to_string()).unwrap();
    let o = cli(&["validate", path.to_str().unwrap()]);
    assert_eq!(o.code, EXIT_INVALID);
    assert!(o.stderr.contains("E_NON_TOTAL"), "{}", o.stderr);
    assert!(o.stderr.contains("(4,4)"), "{}", o.stderr);
}
