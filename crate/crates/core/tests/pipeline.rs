use symspec_core::cohomology::{convergence_verdict, verify_sequence, DeRham};
use symspec_core::model::{to_json, BUILTIN_NAMES};
use symspec_core::ops::OperatorSet;
use symspec_core::spectral::SpectralSequence;
use symspec_core::suites::{Analysis, Suite, SuiteOptions};
use symspec_core::{builtin, parse_model};

#[test]
fn builtins_round_trip_through_json() {
    for name in BUILTIN_NAMES {
        let model = builtin(name).unwrap();
        let text = to_json(&model);
        assert_eq!(parse_model(text.as_bytes()).unwrap(), model, "{name}");
    }
}

#[test]
fn pages_converge_to_cohomology() {
    for name in BUILTIN_NAMES {
        let model = builtin(name).unwrap();
        let ops = OperatorSet::new(&model).unwrap();
        let h = DeRham::new(&model).unwrap();
        let ss = SpectralSequence::new(&ops).unwrap();
        assert!(convergence_verdict(&ss, &h).pass, "{name}");
        for p in 0..=model.half_dim() {
            assert!(
                verify_sequence(&ops, &h, &ss, p).unwrap().is_exact(),
                "{name} p={p}"
            );
        }
    }
}

#[test]
fn extra_pages_repeat_the_last() {
    let model = builtin("kt4").unwrap();
    let ops = OperatorSet::new(&model).unwrap();
    let ss = SpectralSequence::with_pages(&ops, 6).unwrap();
    assert_eq!(ss.pages().len(), 7);
    assert_eq!(ss.page(6).unwrap().dims(), ss.page(2).unwrap().dims());
    assert_eq!(ss.stabilization().page, 2);
}

#[test]
fn exact_plane_times_torus_lies_in_the_general_window() {
    let model = builtin("solv2")
        .unwrap()
        .product(&builtin("t2").unwrap())
        .unwrap();
    assert_eq!(model.closedness_profile().t_min, Some(2));
    let analysis = Analysis::new(model).unwrap();
    let verdicts = analysis
        .run(&[Suite::Stab], &SuiteOptions::default())
        .unwrap();
    assert!(verdicts.iter().all(|v| v.pass), "{verdicts:?}");
    assert!(verdicts[0].name.starts_with("Theorem 3"));
}
