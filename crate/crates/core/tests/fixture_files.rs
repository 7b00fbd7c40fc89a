//! The shipped scenario files must stay in lock-step with the built-in
//! fixtures: same ids, same parameters, same runs.

use std::fs;
use std::path::PathBuf;

use invsim::scenario::fixtures;
use invsim::{config, run_scenario};

fn scenario_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

#[test]
fn shipped_files_equal_builtin_fixtures() {
    let files = [
        ("s1.cfg", "S1"),
        ("s2.cfg", "S2"),
        ("s3.cfg", "S3"),
        ("s4.cfg", "S4"),
        ("s5.cfg", "S5"),
        ("s6.cfg", "S6"),
        ("s7.cfg", "S7"),
        ("s8.cfg", "S8"),
        ("sweep.cfg", "SWEEP"),
    ];
    for (file, id) in files {
        let path = scenario_dir().join(file);
        let text = fs::read_to_string(&path)
            .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let parsed = config::parse_scenario(&text).unwrap_or_else(|e| panic!("{file}: {e}"));
        let builtin = fixtures::builtin(id).expect("built-in fixture");
        assert_eq!(parsed, builtin, "{file} drifted from the built-in {id}");
    }
}

#[test]
fn parsed_file_runs_identically_to_builtin() {
    let text = fs::read_to_string(scenario_dir().join("s8.cfg")).unwrap();
    let parsed = config::parse_scenario(&text).unwrap();
    let from_file = run_scenario(&parsed).unwrap();
    let from_builtin = run_scenario(&fixtures::builtin("S8").unwrap()).unwrap();
    assert_eq!(from_file, from_builtin);
}
