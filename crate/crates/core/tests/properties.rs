use std::time::Duration;

use dolkit::kernel::{compose, identity, symbols_of, translate_sentence};
use dolkit::logics::PropFormula;
use dolkit::mappings::{translate_sentence_along, Registry};
use dolkit::prove::{finalize_status, prove_fol, prove_prop, Deadline, FolLimits, ProofStatus};
use dolkit::select::{sine_select, Selection, SineParams};
use dolkit::structure::{check_cocone, colimit};
use dolkit::{LogicId, Sentence};
use dolkit_testkit::{gen, oracle};
use proptest::prelude::*;

fn budget() -> Deadline {
    Deadline::after(Duration::from_secs(5))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, ..ProptestConfig::default() })]

    #[test]
    fn composition_is_associative_and_unital(c in gen::morphism_chain()) {
        let [f, g, h] = [&c.morphisms[0], &c.morphisms[1], &c.morphisms[2]];
        prop_assert_eq!(&compose(&identity(f.source()), f).unwrap(), f);
        prop_assert_eq!(&compose(f, &identity(f.target())).unwrap(), f);
        let left = compose(&compose(f, g).unwrap(), h).unwrap();
        let right = compose(f, &compose(g, h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn translation_commutes_with_symbol_extraction(c in gen::morphism_chain()) {
        let f = &c.morphisms[0];
        let image = translate_sentence(f, &c.sentence).unwrap();
        let mapped: std::collections::BTreeSet<_> =
            symbols_of(&c.sentence).iter().map(|s| f.apply(s).unwrap().clone()).collect();
        prop_assert_eq!(symbols_of(&image), mapped);
        let fg = compose(f, &c.morphisms[1]).unwrap();
        let stepwise = translate_sentence(&c.morphisms[1], &image).unwrap();
        prop_assert_eq!(translate_sentence(&fg, &c.sentence).unwrap(), stepwise);
    }

    #[test]
    fn sine_matches_the_definition(i in gen::sine_instance(20), p in gen::sine_params()) {
        let got = oracle::selected_indices(&i.theory, &sine_select(&i.theory, &i.conjecture, &p));
        prop_assert_eq!(got, oracle::sine(&i.theory, &i.conjecture, &p));
    }

    #[test]
    fn sine_is_monotone(i in gen::sine_instance(20), p in gen::sine_params(), dt in 0.0f64..3.0, dd in 0usize..3, dg in 0usize..3) {
        let base = oracle::selected_indices(&i.theory, &sine_select(&i.theory, &i.conjecture, &p));
        let deeper = if p.depth == 0 { 0 } else { p.depth + dd };
        let wider = SineParams::new(p.tolerance + dt, deeper, p.generality_threshold + dg).unwrap();
        let more = oracle::selected_indices(&i.theory, &sine_select(&i.theory, &i.conjecture, &wider));
        prop_assert!(base.is_subset(&more));
        let unbounded = SineParams { depth: 0, ..p };
        let all = oracle::selected_indices(&i.theory, &sine_select(&i.theory, &i.conjecture, &unbounded));
        prop_assert!(base.is_subset(&all));
    }

    #[test]
    fn prop_prover_agrees_with_truth_tables(i in gen::prop_instance(8, 10, 3)) {
        let o = prove_prop(&i.axiom_sentences(), &i.conjecture_sentence(), &budget()).unwrap();
        let expected = if oracle::entails(&i.axioms, &i.conjecture) { ProofStatus::Thm } else { ProofStatus::Csa };
        prop_assert_eq!(o.status, expected);
    }

    #[test]
    fn used_axioms_suffice(i in gen::prop_instance(6, 8, 3)) {
        let o = prove_prop(&i.axiom_sentences(), &i.conjecture_sentence(), &budget()).unwrap();
        if o.status == ProofStatus::Thm {
            let used = o.used_axioms.unwrap();
            let core: Vec<PropFormula> = i
                .axiom_sentences()
                .iter()
                .zip(&i.axioms)
                .filter(|(s, _)| used.iter().any(|u| Some(u) == s.label.as_ref()))
                .map(|(_, f)| f.clone())
                .collect();
            prop_assert!(oracle::entails(&core, &i.conjecture));
        }
    }

    #[test]
    fn colimit_partition_is_the_equivalence_closure(d in gen::alignment_diagram()) {
        let c = colimit(&d).unwrap();
        prop_assert!(check_cocone(&d, &c));
        prop_assert_eq!(oracle::colimit_classes(&d, &c), oracle::equivalence_classes(&d));
        prop_assert_eq!(c.signature.len(), oracle::equivalence_classes(&d).len());
    }

    #[test]
    fn finalize_only_demotes_countersatisfiable(strict in any::<bool>(), k in 0usize..6) {
        let s = Selection { chosen: Vec::new(), strict_subset: strict };
        let raw = ProofStatus::ALL[k];
        let expected = if raw == ProofStatus::Csa && strict { ProofStatus::Csas } else { raw };
        prop_assert_eq!(finalize_status(raw, &s), expected);
        prop_assert_eq!(finalize_status(finalize_status(raw, &s), &s), expected);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn prop2fol_preserves_entailment(i in gen::prop_instance(4, 5, 2)) {
        let registry = Registry::builtin();
        let path = registry.find_path(LogicId::Prop, LogicId::Fol, None).unwrap();
        let tr = |s: &Sentence| translate_sentence_along(&path, s).unwrap();
        let axioms: Vec<Sentence> = i.axiom_sentences().iter().map(tr).collect();
        let o = prove_fol(&axioms, &tr(&i.conjecture_sentence()), &budget(), FolLimits::default()).unwrap();
        prop_assume!(o.status != ProofStatus::Tmo);
        prop_assert_eq!(o.status == ProofStatus::Thm, oracle::entails(&i.axioms, &i.conjecture));
    }
}
