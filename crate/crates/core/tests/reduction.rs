use lrm_core::document::ArcDocument;
use lrm_core::reduce::{
    attempt_lrm, case2_finish, char0_translate, defectless_translate, lrm_step, reduce_document,
    DefectlessOutcome,
};
use lrm_core::{Bounds, Error, Polynomial, ReductionState, ReductionStatus, StepKind, Trace};

fn data(name: &str) -> ArcDocument {
    let path = format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"));
    ArcDocument::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn state(name: &str) -> ReductionState {
    ReductionState::new(data(name).oracle().unwrap()).unwrap()
}

fn run(name: &str) -> lrm_core::Reduction {
    reduce_document(&data(name), None, &Bounds::default()).unwrap()
}

fn replays(t: &Trace) {
    let text = t.to_json();
    let back = Trace::from_json(&text).unwrap();
    assert_eq!(&back, t);
    let f = back.replay().unwrap();
    let last = t.steps.last().map_or(&t.initial_f, |s| &s.f);
    assert_eq!(&f.to_string(), last);
}

#[test]
fn cusp_reduces_in_one_step() {
    let red = run("cusp.json");
    assert_eq!(red.status, ReductionStatus::ReducedToSmooth);
    assert_eq!(red.lrm_steps, 1);
    assert_eq!(red.translations, 0);
    let a1: Vec<_> = red.trace.steps_of(StepKind::A1).collect();
    assert_eq!(a1.len(), 1);
    assert_eq!(
        a1[0].transform.as_ref().unwrap().matrix,
        vec![vec![2, 1], vec![3, 2]]
    );
    let sigma = a1[0].sigma.as_ref().unwrap();
    assert_eq!(sigma.sigma, vec![0, 2]);
    assert_eq!(sigma.lambda, vec![3, 4]);
    assert_eq!(sigma.tau, vec![vec![6], vec![6]]);
    assert_eq!(sigma.d, 2);
    assert_eq!(red.state.f().to_string(), "x2");
    assert!(red.trace.certificates.final_arc_consistent);
    replays(&red.trace);
}

#[test]
fn cusp_char2_reduces_identically() {
    let red = run("cusp_char2.json");
    assert_eq!(red.status, ReductionStatus::ReducedToSmooth);
    let a1 = red.trace.steps_of(StepKind::A1).next().unwrap();
    assert_eq!(
        a1.transform.as_ref().unwrap().matrix,
        vec![vec![2, 1], vec![3, 2]]
    );
    replays(&red.trace);
}

#[test]
fn lrm_step_rejects_value_in_group() {
    let s = state("tacnode.json");
    assert!(matches!(
        lrm_step(&s, 100),
        Err(Error::PreconditionValueInGroup(_))
    ));
}

#[test]
fn tacnode_translates_then_drops() {
    let s = state("tacnode.json");
    let a = attempt_lrm(&s, 100).unwrap();
    assert!(!a.dropped());
    assert_eq!(a.transform.matrix(), &[vec![1, 0], vec![1, 1]]);
    assert_eq!(a.sigma.sigma, vec![0, 1, 2]);
    assert_eq!(a.trichotomy, Some(true));
    assert!(a.sigma.second_to_last_is(2));

    let t = char0_translate(&s).unwrap();
    assert_eq!(t.h.to_string(), "x1");
    assert_eq!(t.omega.as_ref().unwrap().to_string(), "-1/2");
    assert_eq!(t.after.to_string(), "5/2");
    assert_eq!(t.state.f().to_string(), "-x1^5 + x2^2");

    let red = run("tacnode.json");
    assert_eq!(red.status, ReductionStatus::ReducedToSmooth);
    assert_eq!((red.translations, red.lrm_steps), (1, 1));
    let tr = red.trace.steps_of(StepKind::TranslateChar0).next().unwrap();
    assert!(tr.sigma.as_ref().unwrap().second_to_last_is(2));
    let a1 = red.trace.steps_of(StepKind::A1).next().unwrap();
    assert_eq!(
        a1.transform.as_ref().unwrap().matrix,
        vec![vec![2, 1], vec![5, 3]]
    );
    assert_eq!(red.trace.certificates.translation_values, vec!["5/2"]);
    replays(&red.trace);
}

#[test]
fn char2_binomial_obstruction_then_defectless() {
    let s = state("binomial_char2.json");
    assert!(matches!(
        char0_translate(&s),
        Err(Error::BinomialObstruction(_))
    ));
    match defectless_translate(&s, 64).unwrap() {
        DefectlessOutcome::Translated(t, best) => {
            assert_eq!(t.h.to_string(), "x1^2 + x1");
            assert_eq!(t.after.to_string(), "5/2");
            let ladder: Vec<String> = best.ladder.iter().map(ToString::to_string).collect();
            assert_eq!(ladder, ["1", "2", "5/2"]);
            assert_eq!(t.state.f().to_string(), "x1^5 + x2^2");
        }
        other => panic!("unexpected {other:?}"),
    }
    let red = run("binomial_char2.json");
    assert_eq!(red.status, ReductionStatus::ReducedToSmooth);
    assert_eq!(red.trace.steps_of(StepKind::TranslateDefectless).count(), 1);
    replays(&red.trace);
}

#[test]
fn defect_curves_are_suspected() {
    for (name, ladder) in [
        ("defect_p2.json", vec!["2", "3", "5", "9", "17", "33"]),
        ("defect_p3.json", vec!["2", "4", "10", "28"]),
    ] {
        let s = state(name);
        assert!(matches!(
            defectless_translate(&s, 64).unwrap(),
            DefectlessOutcome::DefectSuspected(_)
        ));
        let red = run(name);
        assert_eq!(red.status, ReductionStatus::DefectSuspected, "{name}");
        assert_eq!(red.trace.certificates.ladder, ladder, "{name}");
        assert!(red.trace.certificates.diagnostic.is_some());
        replays(&red.trace);
    }
}

#[test]
fn node_case2_substitution() {
    let s = state("node.json");
    let c = case2_finish(&s, 64).unwrap();
    assert_eq!(c.b, vec![1, 0]);
    assert_eq!(c.beta.to_string(), "1");
    assert_eq!(c.strict.residual.to_string(), "x2^2 - x1 + 2*x2");
    assert!(c.state.oracle().is_consistent());
    // the driver's direct step gets there too
    let red = run("node.json");
    assert_eq!(red.status, ReductionStatus::ReducedToSmooth);
    replays(&red.trace);
}

#[test]
fn case2_rejects_degenerate_input() {
    // xm = x1 exactly: the value ladder hits INFINITE
    let doc = r#"{"version":1,"kind":"arc","ring":{"m":2,"char":0},"f":"x2^2-x1^2","arc":{"x1":"t","x2":"t"}}"#;
    let o = ArcDocument::parse(doc).unwrap().oracle().unwrap();
    let s = ReductionState::new(o).unwrap();
    // after xm = x1 (xm + 1) the strict transform is xm (xm + 2): smooth
    let c = case2_finish(&s, 8).unwrap();
    assert_eq!(c.strict.residual.to_string(), "x2^2 + 2*x2");
}

#[test]
fn bad_inputs() {
    let doc = data("cusp.json");
    let mut wrong = doc.clone();
    wrong.f = "x2^2-x1^5".into();
    let err = reduce_document(&wrong, None, &Bounds::default()).unwrap_err();
    assert!(matches!(err, Error::InconsistentArc(_)));
    let mut smooth = doc.clone();
    smooth.f = "x2-x1^3".into();
    smooth.arc.insert("x2".into(), "t^6".into());
    assert!(matches!(
        reduce_document(&smooth, None, &Bounds::default()),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn truncation_too_low_exhausts() {
    let red = reduce_document(
        &data("tacnode.json"),
        Some((2, 1).into()),
        &Bounds::default(),
    )
    .unwrap();
    assert_eq!(red.status, ReductionStatus::BoundExhausted);
}

#[test]
fn replay_detects_tampering() {
    let mut t = run("cusp.json").trace;
    t.steps[1].transform.as_mut().unwrap().c = Some("2".into());
    assert!(matches!(
        t.replay(),
        Err(Error::ReplayMismatch { step: 2, .. })
    ));
    let mut t = run("cusp.json").trace;
    t.initial_f = "x2^2 - x1^3 + x1^7".into();
    assert!(t.replay().is_err());
}

#[test]
fn state_checks() {
    let s = state("cusp.json");
    assert_eq!(s.frame().generation, 0);
    let a = lrm_step(&s, 100).unwrap();
    assert_eq!(a.state.frame().generation, 1);
    let _ = Polynomial::parse(s.ring(), "x1").unwrap();
}
