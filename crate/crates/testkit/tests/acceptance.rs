//! Acceptance suite: one PASS/FAIL line per criterion. Exits with status 1
//! when any criterion fails.

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use dolkit::dolparse::{parse_document, RepoConfig};
use dolkit::kernel::{compose, identity, symbols_of, translate_sentence};
use dolkit::logics::{FolFormula, FolTerm};
use dolkit::mappings::{translate_sentence_along, Registry};
use dolkit::prove::{prove_all, prove_fol, prove_prop, AttemptConfig, Deadline, FolLimits, ProofStatus, SelectionStrategy};
use dolkit::select::{sine_select, SineParams};
use dolkit::structure::{check_cocone, Env, ProofObligation};
use dolkit::{LogicId, Sentence, Signature, Symbol, Theory};
use dolkit_testkit::{fixtures, gen, oracle, sample};
use serde_json::Value;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn cli(args: &[&str]) -> (u8, Value) {
    let (mut out, mut diag) = (Vec::new(), Vec::new());
    let code = dolkit_cli::run(std::iter::once("dolkit").chain(args.iter().copied()), &mut out, &mut diag);
    let json = serde_json::from_slice(&out).unwrap_or(Value::Null);
    (code, json)
}

fn fixture(rel: &str) -> String {
    fixtures().join(rel).to_string_lossy().into_owned()
}

fn corpus_round_trip() -> Outcome {
    let mut notes = Vec::new();
    for rel in ["cq/cq.dol", "alignment/space.dol"] {
        let text = std::fs::read_to_string(fixture(rel)).map_err(|e| e.to_string())?;
        parse_document(&text).map_err(|e| format!("{rel}: {e}"))?;
        notes.push(format!("{rel} parses"));
    }
    let doc = parse_document(&std::fs::read_to_string(fixture("alignment/space.dol")).unwrap()).unwrap();
    let counts: Vec<usize> = doc.alignments().map(|a| a.correspondences.len()).collect();
    let expected = vec![9, 12, 8];
    notes.push(format!("{} alignments with {counts:?} correspondences, expected {expected:?}", counts.len()));
    check(counts == expected, notes.join("; "))
}

fn combination_oracle() -> Outcome {
    let registry = Registry::builtin();
    let path = fixtures().join("alignment/space.dol");
    let doc = parse_document(&std::fs::read_to_string(&path).unwrap()).map_err(|e| e.to_string())?;
    let repo = RepoConfig::load(path.parent().unwrap()).map_err(|e| e.to_string())?;
    let env = Env::new(&doc, &repo, &registry, "space#");
    let space = env.combination("Space").map_err(|e| e.to_string())?;
    let d = &space.diagram.diagram;
    let computed = oracle::colimit_classes(d, &space.colimit);
    let brute = oracle::equivalence_classes(d);
    let cocone = check_cocone(d, &space.colimit);
    let ontology = |node: &str| match node {
        n if n.ends_with("DOLCE-Lite.owl") => Some("dolce"),
        n if n.ends_with("bfo/1.1") => Some("bfo"),
        n if n.ends_with("gfo.owl") => Some("gfo"),
        _ => None,
    };
    // Bridge-node members are internal to an alignment; compare on the aligned ontologies only.
    let members = |source: &str, name: &str| -> BTreeSet<String> {
        computed
            .iter()
            .find(|c| c.iter().any(|(n, s)| s.name == name && ontology(n) == Some(source)))
            .into_iter()
            .flatten()
            .filter_map(|(n, s)| ontology(n).map(|o| format!("{}@{o}", s.name)))
            .collect()
    };
    let endurant = members("dolce", "endurant");
    let perdurant = members("dolce", "perdurant");
    let want_endurant: BTreeSet<String> =
        ["endurant@dolce", "IndependentContinuant@bfo", "Presential@gfo"].map(String::from).into();
    let want_perdurant: BTreeSet<String> =
        ["perdurant@dolce", "Occurrent@bfo", "Occurrent@gfo"].map(String::from).into();
    check(
        computed == brute && cocone && endurant == want_endurant && perdurant == want_perdurant,
        format!(
            "{} classes, oracle {}; cocone {cocone}; endurant class {endurant:?}; perdurant class {perdurant:?}",
            computed.len(),
            if computed == brute { "agrees" } else { "DISAGREES" },
        ),
    )
}

fn competency_questions() -> Outcome {
    let doc = fixture("cq/cq.dol");
    let (code, report) = cli(&["analyze", &doc]);
    let obligations: Vec<String> = report["obligations"]
        .as_array()
        .map(|a| a.iter().filter_map(|o| o["name"].as_str().map(String::from)).collect())
        .unwrap_or_default();
    if code != 0 || obligations.len() != 4 {
        return Err(format!("analyze exit {code}, obligations {obligations:?}"));
    }
    let (code, v) = cli(&["prove", &doc, "--timeout", "10"]);
    let attempts = v["attempts"].as_array().cloned().unwrap_or_default();
    let summary: Vec<String> = attempts
        .iter()
        .map(|a| format!("{}={} ({:.2}s)", a["obligation"].as_str().unwrap_or("?"), a["status"].as_str().unwrap_or("?"), a["wall_time"].as_f64().unwrap_or(f64::NAN)))
        .collect();
    let all_thm = attempts.len() == 4 && attempts.iter().all(|a| a["status"] == "THM");
    let in_time = attempts.iter().all(|a| a["wall_time"].as_f64().is_some_and(|t| t <= 10.0));
    let father = attempts.iter().any(|a| a["obligation"] == "chrisFather" && a["status"] == "THM");
    check(code == 0 && all_thm && in_time && father, format!("exit {code}; {}", summary.join(", ")))
}

fn atom(p: &str, c: &str) -> FolFormula {
    FolFormula::pred("", p, vec![FolTerm::constant("", c)])
}

fn csas_semantics() -> Outcome {
    // q(a) follows from p(a) and p => q. q is common, so SInE at tolerance 1
    // reaches p => q only through p; with one round it stops short.
    let x = || vec![FolTerm::var("X")];
    let p_implies_q =
        FolFormula::forall(&["X"], FolFormula::implies(FolFormula::pred("", "p", x()), FolFormula::pred("", "q", x())));
    let axioms: Vec<Sentence> = [p_implies_q, atom("p", "a"), atom("q", "b"), atom("q", "c"), atom("q", "d"), atom("r", "e")]
        .into_iter()
        .enumerate()
        .map(|(i, f)| Sentence::axiom(f).labelled(format!("A{}", i + 1)))
        .collect();
    let theory = Theory::from_sentences("bg", Signature::empty(LogicId::Fol), axioms).map_err(|e| e.to_string())?;
    let obligation = ProofObligation {
        name: "goal".into(),
        definition: "goal".into(),
        base: "bg".into(),
        theory: Arc::new(theory),
        conjecture: Sentence::axiom(atom("q", "a")).labelled("goal"),
    };
    let registry = Registry::builtin();
    let run = |tolerance: f64| {
        let config = AttemptConfig::new(vec![], 5)
            .unwrap()
            .with_selection(SelectionStrategy::Sine(SineParams::new(tolerance, 1, 0).unwrap()));
        let a = prove_all(std::slice::from_ref(&obligation), &config, &registry).remove(0);
        (a.raw_status, a.status, a.selection.map(|s| s.strict_subset))
    };
    let dropped = run(1.0);
    let kept = run(2.0);
    check(
        dropped == (ProofStatus::Csa, ProofStatus::Csas, Some(true))
            && kept == (ProofStatus::Thm, ProofStatus::Thm, Some(true)),
        format!("axiom dropped: raw/final/strict {dropped:?}; axiom kept: {kept:?}"),
    )
}

fn propositional_soundness() -> Outcome {
    let instances = sample(&gen::prop_instance(12, 15, 3), 500);
    let max_vars = instances.iter().map(|i| i.vars).max().unwrap_or(0);
    let max_axioms = instances.iter().map(|i| i.axioms.len()).max().unwrap_or(0);
    let mut disagreements = 0;
    let mut theorems = 0;
    let mut prover_time = Duration::ZERO;
    for i in &instances {
        let started = Instant::now();
        let o = prove_prop(&i.axiom_sentences(), &i.conjecture_sentence(), &Deadline::after(Duration::from_secs(10)))
            .map_err(|e| e.to_string())?;
        prover_time += started.elapsed();
        let expected = oracle::entails(&i.axioms, &i.conjecture);
        theorems += usize::from(expected);
        let got = match o.status {
            ProofStatus::Thm => Some(true),
            ProofStatus::Csa => Some(false),
            _ => None,
        };
        if got != Some(expected) {
            disagreements += 1;
        }
    }
    check(
        disagreements == 0 && prover_time < Duration::from_secs(10),
        format!(
            "{} instances (<= {max_vars} vars, <= {max_axioms} axioms, {theorems} entailed): {disagreements} disagreements, prover time {:.2}s",
            instances.len(),
            prover_time.as_secs_f64()
        ),
    )
}

fn sine_correctness() -> Outcome {
    let cases = sample(&(gen::sine_instance(20), gen::sine_params()), 100);
    let mut mismatches = 0;
    let mut violations = 0;
    let mut nontrivial = 0;
    let tolerances = [1.0, 1.5, 2.0, 3.0];
    let depths = [1, 2, 3, 0];
    let generalities = [0, 1, 2, 3];
    for (i, p) in &cases {
        let select = |p: &SineParams| oracle::selected_indices(&i.theory, &sine_select(&i.theory, &i.conjecture, p));
        let got = select(p);
        if got != oracle::sine(&i.theory, &i.conjecture, p) {
            mismatches += 1;
        }
        let n = i.theory.axioms().count();
        if !got.is_empty() && got.len() < n {
            nontrivial += 1;
        }
        for (ti, &t) in tolerances.iter().enumerate() {
            for (di, &d) in depths.iter().enumerate() {
                for (gi, &g) in generalities.iter().enumerate() {
                    let here = select(&SineParams::new(t, d, g).unwrap());
                    let bigger = [
                        tolerances.get(ti + 1).map(|&t2| SineParams::new(t2, d, g).unwrap()),
                        depths.get(di + 1).map(|&d2| SineParams::new(t, d2, g).unwrap()),
                        generalities.get(gi + 1).map(|&g2| SineParams::new(t, d, g2).unwrap()),
                    ];
                    for q in bigger.iter().flatten() {
                        if !here.is_subset(&select(q)) {
                            violations += 1;
                        }
                    }
                }
            }
        }
    }
    check(
        mismatches == 0 && violations == 0,
        format!(
            "{} theories ({nontrivial} with a proper non-empty selection): {mismatches} oracle mismatches, {violations} monotonicity violations",
            cases.len()
        ),
    )
}

fn category_laws() -> Outcome {
    let chains = sample(&gen::morphism_chain(), 200);
    let mut failures = Vec::new();
    for (k, c) in chains.iter().enumerate() {
        let [f, g, h] = [&c.morphisms[0], &c.morphisms[1], &c.morphisms[2]];
        let unital = compose(&identity(f.source()), f).ok().as_ref() == Some(f)
            && compose(f, &identity(f.target())).ok().as_ref() == Some(f);
        let assoc = compose(&compose(f, g).unwrap(), h).unwrap() == compose(f, &compose(g, h).unwrap()).unwrap();
        let image = translate_sentence(f, &c.sentence).unwrap();
        let mapped: BTreeSet<Symbol> = symbols_of(&c.sentence).iter().map(|s| f.apply(s).unwrap().clone()).collect();
        let commutes = symbols_of(&image) == mapped;
        if !(unital && assoc && commutes) {
            failures.push(format!("#{k}: identity {unital}, associativity {assoc}, commutation {commutes}"));
        }
    }
    check(failures.is_empty(), format!("{} triples, {} failures {:?}", chains.len(), failures.len(), failures))
}

fn translation_faithfulness() -> Outcome {
    let registry = Registry::builtin();
    let path = registry.find_path(LogicId::Prop, LogicId::Fol, None).map_err(|e| e.to_string())?;
    let instances = sample(&gen::prop_instance(5, 6, 2), 100);
    let (mut agree, mut disagree, mut excluded, mut entailed) = (0, 0, 0, 0);
    for i in &instances {
        let tr = |s: &Sentence| translate_sentence_along(&path, s).expect("prop2fol is total");
        let axioms: Vec<Sentence> = i.axiom_sentences().iter().map(tr).collect();
        let o = prove_fol(&axioms, &tr(&i.conjecture_sentence()), &Deadline::after(Duration::from_secs(2)), FolLimits::default())
            .map_err(|e| e.to_string())?;
        let truth = oracle::entails(&i.axioms, &i.conjecture);
        entailed += usize::from(truth);
        match o.status {
            ProofStatus::Tmo => excluded += 1,
            s if (s == ProofStatus::Thm) == truth => agree += 1,
            _ => disagree += 1,
        }
    }
    let rate = excluded as f64 / instances.len() as f64;
    check(
        disagree == 0 && rate < 0.05,
        format!(
            "{} instances ({entailed} entailed): {agree} agree, {disagree} disagree, {excluded} excluded as TMO ({:.1}%)",
            instances.len(),
            rate * 100.0
        ),
    )
}

fn timeout_contract() -> Outcome {
    let started = Instant::now();
    let (code, v) = cli(&["prove", &fixture("hard/chain.dol"), "--timeout", "1"]);
    let elapsed = started.elapsed().as_secs_f64();
    let a = &v["attempts"][0];
    let wall = a["wall_time"].as_f64().unwrap_or(f64::NAN);
    check(
        a["status"] == "TMO" && wall <= 2.0,
        format!("exit {code}; status {}; wall_time {wall:.3}s; process time {elapsed:.3}s", a["status"]),
    )
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("DOL corpus round-trip", corpus_round_trip),
        ("combination oracle", combination_oracle),
        ("competency-question pipeline", competency_questions),
        ("SZS/CSAS semantics", csas_semantics),
        ("propositional soundness", propositional_soundness),
        ("SInE correctness", sine_correctness),
        ("category laws", category_laws),
        ("translation faithfulness", translation_faithfulness),
        ("timeout contract", timeout_contract),
    ];
    let mut failed = 0;
    for (n, (name, f)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = started.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {}: PASS {name} [{secs:.2}s] {detail}", n + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name} [{secs:.2}s] {detail}", n + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
