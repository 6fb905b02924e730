use std::path::Path;

use dolkit::dolparse::{parse_document, DolDocument, RepoConfig};
use dolkit::exec::Schedule;
use dolkit::mappings::Registry;
use dolkit::prove::{prove_all, AttemptConfig, ProofStatus, ProverSpec, SelectionStrategy};
use dolkit::select::SineParams;
use dolkit::structure::{analyze, check_cocone, Analysis, Env};
use dolkit_testkit::{fixtures, oracle};

fn load(rel: &str) -> (DolDocument, RepoConfig) {
    let path = fixtures().join(rel);
    let doc = parse_document(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let repo = RepoConfig::load(path.parent().unwrap_or(Path::new("."))).unwrap();
    (doc, repo)
}

fn analysis(rel: &str, registry: &Registry) -> Analysis {
    let (doc, repo) = load(rel);
    analyze(&Env::new(&doc, &repo, registry, "doc#")).unwrap()
}

#[test]
fn space_combination() {
    let registry = Registry::builtin();
    let (doc, repo) = load("alignment/space.dol");
    let env = Env::new(&doc, &repo, &registry, "space#");
    let space = env.combination("Space").unwrap();
    let d = &space.diagram.diagram;
    assert!(check_cocone(d, &space.colimit));
    assert_eq!(oracle::colimit_classes(d, &space.colimit), oracle::equivalence_classes(d));
    let names = |members: &[(String, dolkit::Symbol)]| {
        let mut v: Vec<String> = members.iter().map(|(_, s)| s.name.clone()).collect();
        v.sort();
        v
    };
    let classes: Vec<Vec<String>> = space.colimit.classes.iter().map(|(_, m)| names(m)).collect();
    assert!(classes.contains(&vec!["IndependentContinuant".into(), "Presential".into(), "endurant".into()]));
    assert!(classes.contains(&vec!["Occurrent".into(), "Occurrent".into(), "perdurant".into()]));
}

#[test]
fn family_obligations_are_theorems() {
    let registry = Registry::builtin();
    let a = analysis("cq/cq.dol", &registry);
    assert_eq!(a.obligations.len(), 4);
    let config = AttemptConfig::new(vec![], 10).unwrap();
    let attempts = prove_all(&a.obligations, &config, &registry);
    for at in &attempts {
        assert_eq!(at.status, ProofStatus::Thm, "{}: {}", at.obligation, at.output);
    }
    let father = attempts.iter().find(|a| a.obligation == "chrisFather").unwrap();
    assert!(father.used_axioms.as_ref().unwrap().iter().any(|l| l.starts_with("scenario")));
}

#[test]
fn sine_keeps_family_proofs() {
    let registry = Registry::builtin();
    let a = analysis("cq/cq.dol", &registry);
    let config = AttemptConfig::new(vec![ProverSpec::internal_fol()], 10)
        .unwrap()
        .with_selection(SelectionStrategy::Sine(SineParams::new(3.0, 0, 2).unwrap()))
        .with_schedule(Schedule::Sequential);
    for at in prove_all(&a.obligations, &config, &registry) {
        assert!(matches!(at.status, ProofStatus::Thm | ProofStatus::Csas), "{}: {:?}", at.obligation, at.status);
    }
}

#[test]
fn hard_instance_times_out() {
    let registry = Registry::builtin();
    let a = analysis("hard/chain.dol", &registry);
    let config = AttemptConfig::new(vec![], 1).unwrap();
    let attempts = prove_all(&a.obligations, &config, &registry);
    assert_eq!(attempts.len(), 1);
    assert_eq!(attempts[0].status, ProofStatus::Tmo);
    assert!(attempts[0].wall_time.as_secs_f64() <= 2.0);
}

#[test]
fn schedules_agree() {
    let registry = Registry::builtin();
    let a = analysis("cq/cq.dol", &registry);
    let statuses = |s: Schedule| -> Vec<(String, ProofStatus)> {
        let config = AttemptConfig::new(vec![ProverSpec::internal_fol()], 10).unwrap().with_schedule(s);
        prove_all(&a.obligations, &config, &registry).into_iter().map(|a| (a.obligation, a.status)).collect()
    };
    assert_eq!(statuses(Schedule::Sequential), statuses(Schedule::Bounded(4)));
}
