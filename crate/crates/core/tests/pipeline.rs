use std::path::PathBuf;

use lyapabs::logic::{eval_ltl_lasso, parse_ltl};
use lyapabs::pipeline::{run_abstraction, run_pipeline, PipelineOptions};
use lyapabs::problem::{load_problem, parse_problem, Problem};
use lyapabs::quotient_io::{export_quotient, parse_quotient};
use lyapabs::verify::check_formula;
use lyapabs::Execution;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

/// Paper dynamics on a thinner working set, with two observed boxes.
fn small_planar() -> Problem {
    parse_problem(
        r#"{
          "A": [["0.65", "0.32"], ["-0.42", "-0.92"]],
          "L": [["-0.0625", "1"], ["0.6815", "1"], ["0.9947", "0.6868"], ["0.9947", "-0.0678"]],
          "rho": "0.94", "gamma_D": "5.063", "gamma_X": "6.5",
          "regions": [
            {"name": "r1", "H": [["1", "0"], ["-1", "0"], ["0", "1"], ["0", "-1"]], "h": ["6", "-5.5", "0", "1"]},
            {"name": "r2", "H": [["1", "0"], ["-1", "0"], ["0", "1"], ["0", "-1"]], "h": ["-5.5", "6", "1", "0"]}
          ],
          "formula": "F r1 & G !r2",
          "options": {"sample_count": 120, "seed": 4}
        }"#,
    )
    .unwrap()
}

#[test]
fn small_planar_pipeline_is_consistent() {
    let problem = small_planar();
    let dir = tempfile::tempdir().unwrap();
    let mut opts = PipelineOptions::from_problem(&problem);
    opts.out_dir = Some(dir.path().to_path_buf());
    let report = run_pipeline(&problem, &opts).unwrap();
    report.check().unwrap();
    let abs = &report.abstraction;
    assert!(abs.quotient.len() > 3);

    for name in [
        "quotient.txt",
        "satisfying.txt",
        "samples.txt",
        "partition.svg",
        "satisfying.svg",
    ] {
        assert!(dir.path().join(name).exists(), "{name} missing");
    }
    let again = run_pipeline(&problem, &opts).unwrap();
    assert_eq!(export_quotient(abs), export_quotient(&again.abstraction));

    let parsed = parse_quotient(&export_quotient(abs)).unwrap();
    let q = parsed.to_quotient().unwrap();
    for &s in abs.quotient.states() {
        assert_eq!(q.successor(s), abs.quotient.successor(s));
        assert_eq!(q.observation(s), abs.quotient.observation(s));
    }
}

#[test]
fn membership_matches_oracle_and_strengthening_shrinks() {
    let problem = small_planar();
    let report = run_abstraction(&problem, &PipelineOptions::from_problem(&problem)).unwrap();
    let abs = &report.abstraction;
    let base = parse_ltl("F r1").unwrap();
    let strong = parse_ltl("F r1 & G !r2").unwrap();
    let weak_set = check_formula(abs, &base).unwrap();
    let strong_set = check_formula(abs, &strong).unwrap();
    assert!(strong_set.states.is_subset(&weak_set.states));
    for (f, sat) in [(&base, &weak_set), (&strong, &strong_set)] {
        for &q in abs.quotient.states() {
            assert_eq!(sat.contains(q), eval_ltl_lasso(f, &abs.word(q).unwrap()));
        }
    }
    assert!(!weak_set.is_empty());
}

#[test]
fn sequential_and_parallel_builds_agree() {
    let problem = small_planar();
    let mut opts = PipelineOptions::from_problem(&problem);
    opts.audit = false;
    opts.execution = Execution::Sequential;
    let seq = run_abstraction(&problem, &opts).unwrap();
    opts.execution = Execution::Parallel;
    let par = run_abstraction(&problem, &opts).unwrap();
    assert_eq!(export_quotient(&seq.abstraction), export_quotient(&par.abstraction));
}

#[test]
fn toy_fixture_file() {
    let problem = load_problem(fixture("toy_1d.json")).unwrap();
    let report = run_pipeline(&problem, &PipelineOptions::from_problem(&problem)).unwrap();
    report.check().unwrap();
    assert_eq!(report.abstraction.quotient.len(), 3);
    let cv = report.cross_validation.unwrap();
    assert_eq!(cv.samples.len(), 50);
    assert_eq!(cv.mismatches(), 0);
}

#[test]
fn paper_fixture_validates() {
    let problem = load_problem(fixture("paper_example.json")).unwrap();
    assert_eq!(problem.dim(), 2);
    assert_eq!(problem.lf.l().rows(), 4);
    assert_eq!(problem.levels.n(), 11);
    assert_eq!(problem.regions.len(), 3);
}
