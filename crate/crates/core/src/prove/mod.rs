//! Proof attempts: internal propositional and first-order provers, external
//! TPTP provers, SZS statuses and parallel execution of attempts.

mod external;
mod resolution;
mod sat;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::exec::{self, Schedule};
use crate::kernel::{KernelError, LogicId, Role, Sentence, Theory};
use crate::logics::tptp::print_problem;
use crate::logics::TptpNames;
use crate::mappings::{translate_along, MappingError, Registry};
use crate::select::{manual_select, sine_select, SelectError, Selection, SineParams};
use crate::structure::ProofObligation;

pub use external::{instantiate, parse_szs, prove_external};
pub use resolution::{prove_fol, FolLimits};
pub use sat::{prove_prop, solve, Cnf, Encoder, Lit, SatResult};

/// Slack beyond the timeout within which every attempt ends.
pub const GRACE: Duration = Duration::from_secs(1);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ProofStatus {
    /// Theorem.
    Thm,
    /// CounterSatisfiable.
    Csa,
    /// Timeout or resource exhaustion.
    Tmo,
    /// CounterSatisfiable, but only a subset of the axioms was used.
    Csas,
    /// Unknown.
    Unk,
    /// The attempt failed.
    Err,
}

impl ProofStatus {
    pub const ALL: [ProofStatus; 6] =
        [ProofStatus::Thm, ProofStatus::Csa, ProofStatus::Tmo, ProofStatus::Csas, ProofStatus::Unk, ProofStatus::Err];

    pub fn as_str(self) -> &'static str {
        match self {
            ProofStatus::Thm => "THM",
            ProofStatus::Csa => "CSA",
            ProofStatus::Tmo => "TMO",
            ProofStatus::Csas => "CSAS",
            ProofStatus::Unk => "UNK",
            ProofStatus::Err => "ERR",
        }
    }
}

impl fmt::Display for ProofStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProveError {
    #[error("unsupported feature: {0}")]
    UnsupportedFeature(String),
    #[error("{prover} cannot handle {found} sentences")]
    WrongLogic { prover: &'static str, found: LogicId },
    #[error("unknown prover `{0}` (expected internal-fol, internal-prop or ext:<command>)")]
    UnknownProver(String),
    #[error("external prover `{0}` has an empty command")]
    EmptyCommand(String),
    #[error("timeout must be at least one second")]
    InvalidTimeout,
    #[error("conjecture `{0}` has no image in the prover's logic")]
    UntranslatableConjecture(String),
    #[error(transparent)]
    Select(#[from] SelectError),
    #[error(transparent)]
    Mapping(#[from] MappingError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

#[derive(Clone, Copy, Debug)]
pub struct Deadline(Instant);

impl Deadline {
    pub fn after(budget: Duration) -> Deadline {
        Deadline(Instant::now() + budget)
    }

    pub fn expired(&self) -> bool {
        Instant::now() >= self.0
    }
}

/// What a single prover run reports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub status: ProofStatus,
    pub used_axioms: Option<Vec<String>>,
    pub output: String,
}

impl Outcome {
    pub fn new(status: ProofStatus, used_axioms: Option<Vec<String>>, output: String) -> Outcome {
        Outcome { status, used_axioms, output }
    }

    fn error(message: impl fmt::Display) -> Outcome {
        Outcome::new(ProofStatus::Err, None, message.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum ProverKind {
    InternalProp,
    InternalFol,
    ExternalTptp { command: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProverSpec {
    pub id: String,
    pub kind: ProverKind,
}

impl ProverSpec {
    pub fn internal_prop() -> ProverSpec {
        ProverSpec { id: "internal-prop".into(), kind: ProverKind::InternalProp }
    }

    pub fn internal_fol() -> ProverSpec {
        ProverSpec { id: "internal-fol".into(), kind: ProverKind::InternalFol }
    }

    pub fn external(id: impl Into<String>, command: Vec<String>) -> Result<ProverSpec, ProveError> {
        let id = id.into();
        if command.is_empty() {
            return Err(ProveError::EmptyCommand(id));
        }
        Ok(ProverSpec { id, kind: ProverKind::ExternalTptp { command } })
    }

    /// Logic of the problems the prover reads.
    pub fn logic(&self) -> LogicId {
        match self.kind {
            ProverKind::InternalProp => LogicId::Prop,
            ProverKind::InternalFol | ProverKind::ExternalTptp { .. } => LogicId::Fol,
        }
    }
}

/// Accepts `internal-fol`, `internal-prop` and `ext:<command words>`.
impl FromStr for ProverSpec {
    type Err = ProveError;

    fn from_str(s: &str) -> Result<Self, ProveError> {
        match s {
            "internal-fol" => Ok(ProverSpec::internal_fol()),
            "internal-prop" => Ok(ProverSpec::internal_prop()),
            _ => match s.strip_prefix("ext:") {
                Some(cmd) => ProverSpec::external(s, cmd.split_whitespace().map(str::to_string).collect()),
                None => Err(ProveError::UnknownProver(s.to_string())),
            },
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
#[serde(tag = "method", rename_all = "lowercase")]
pub enum SelectionStrategy {
    #[default]
    Full,
    Manual { axioms: Vec<String> },
    Sine(SineParams),
}

impl SelectionStrategy {
    pub fn select(&self, o: &ProofObligation) -> Result<Selection, SelectError> {
        match self {
            SelectionStrategy::Full => Ok(Selection::full(&o.theory)),
            SelectionStrategy::Manual { axioms } => manual_select(&o.theory, axioms),
            SelectionStrategy::Sine(p) => Ok(sine_select(&o.theory, &o.conjecture, p)),
        }
    }
}

#[derive(Clone, Debug)]
pub struct AttemptConfig {
    /// Provers to run; empty means the internal first-order prover.
    pub provers: Vec<ProverSpec>,
    pub timeout: Duration,
    pub selection: SelectionStrategy,
    pub fol_limits: FolLimits,
    /// Directory in which external problem files are kept.
    pub keep_temp: Option<PathBuf>,
    pub schedule: Schedule,
}

impl AttemptConfig {
    pub fn new(provers: Vec<ProverSpec>, timeout_seconds: u64) -> Result<AttemptConfig, ProveError> {
        if timeout_seconds == 0 {
            return Err(ProveError::InvalidTimeout);
        }
        Ok(AttemptConfig {
            provers,
            timeout: Duration::from_secs(timeout_seconds),
            selection: SelectionStrategy::Full,
            fol_limits: FolLimits::default(),
            keep_temp: None,
            schedule: Schedule::default(),
        })
    }

    pub fn with_selection(mut self, selection: SelectionStrategy) -> Self {
        self.selection = selection;
        self
    }

    pub fn with_schedule(mut self, schedule: Schedule) -> Self {
        self.schedule = schedule;
        self
    }
}

fn serialize_selection<S: Serializer>(sel: &Option<Arc<Selection>>, s: S) -> Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Summary {
        chosen: Vec<String>,
        strict_subset: bool,
    }
    sel.as_ref().map(|x| Summary { chosen: x.labels(), strict_subset: x.strict_subset }).serialize(s)
}

fn serialize_secs<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

/// Report of one prover run on one obligation.
#[derive(Clone, Debug, Serialize)]
pub struct ProofAttempt {
    pub obligation: String,
    pub prover: String,
    /// Logic the problem was translated into.
    pub logic: LogicId,
    pub timeout_seconds: u64,
    pub strategy: SelectionStrategy,
    /// Shared by every attempt on the same obligation; `None` when the
    /// selection itself failed.
    #[serde(serialize_with = "serialize_selection")]
    pub selection: Option<Arc<Selection>>,
    /// Labels of the axioms handed to the prover, after translation.
    pub provided_axioms: Vec<String>,
    pub raw_status: ProofStatus,
    pub status: ProofStatus,
    pub used_axioms: Option<Vec<String>>,
    #[serde(serialize_with = "serialize_secs")]
    pub wall_time: Duration,
    pub output: String,
}

fn finalize(raw: ProofStatus, strict_subset: bool) -> ProofStatus {
    match raw {
        ProofStatus::Csa if strict_subset => ProofStatus::Csas,
        other => other,
    }
}

/// A countermodel found for a strict subset of the axioms only shows that
/// the conjecture does not follow from that subset.
pub fn finalize_status(raw: ProofStatus, selection: &Selection) -> ProofStatus {
    finalize(raw, selection.strict_subset)
}

/// Axioms and conjecture in the prover's logic.
#[derive(Clone, Debug)]
struct Problem {
    axioms: Vec<Sentence>,
    conjecture: Sentence,
    /// Chosen axioms the translation could not express.
    dropped_axioms: usize,
}

fn prepare(o: &ProofObligation, sel: &Selection, target: LogicId, registry: &Registry) -> Result<Problem, ProveError> {
    let mut sentences = sel.chosen.clone();
    sentences.push(o.conjecture.clone().with_role(Role::Conjecture));
    let t = Theory::from_sentences(o.theory.name.clone(), o.theory.signature().clone(), sentences)?;
    let path = registry.find_path(t.logic(), target, None)?;
    let translated = translate_along(&path, &t)?;
    let (_, _, sentences) = translated.theory.into_parts();
    let (conjectures, axioms): (Vec<Sentence>, Vec<Sentence>) =
        sentences.into_iter().partition(|s| s.role == Role::Conjecture);
    let conjecture = conjectures
        .into_iter()
        .next()
        .ok_or_else(|| ProveError::UntranslatableConjecture(o.name.clone()))?;
    let dropped_axioms = translated.dropped.iter().filter(|s| s.role == Role::Axiom).count();
    Ok(Problem { axioms, conjecture, dropped_axioms })
}

fn axiom_labels(axioms: &[Sentence]) -> Vec<String> {
    axioms.iter().enumerate().map(|(i, a)| a.label_or(&format!("ax{}", i + 1)).to_string()).collect()
}

fn run(prover: &ProverSpec, p: &Problem, config: &AttemptConfig) -> Outcome {
    let deadline = Deadline::after(config.timeout);
    match &prover.kind {
        ProverKind::InternalProp => prove_prop(&p.axioms, &p.conjecture, &deadline).unwrap_or_else(Outcome::error),
        ProverKind::InternalFol => {
            prove_fol(&p.axioms, &p.conjecture, &deadline, config.fol_limits).unwrap_or_else(Outcome::error)
        }
        ProverKind::ExternalTptp { command } => {
            let all: Vec<Sentence> = p.axioms.iter().cloned().chain([p.conjecture.clone()]).collect();
            let text = print_problem(&all, &TptpNames::for_sentences(&all));
            prove_external(&text, command, config.timeout, config.keep_temp.as_deref())
        }
    }
}

struct Job<'a> {
    obligation: &'a ProofObligation,
    prover: &'a ProverSpec,
    selection: &'a Result<Arc<Selection>, String>,
    problem: Option<&'a Result<Problem, String>>,
}

fn attempt(job: &Job<'_>, config: &AttemptConfig) -> ProofAttempt {
    let started = Instant::now();
    let (outcome, provided, strict) = match (job.selection, job.problem) {
        (Err(e), _) | (Ok(_), Some(Err(e))) => (Outcome::error(e), Vec::new(), false),
        (Ok(_), None) => (Outcome::error(format!("no problem prepared for {}", job.prover.id)), Vec::new(), false),
        (Ok(sel), Some(Ok(p))) => {
            let outcome = run(job.prover, p, config);
            (outcome, axiom_labels(&p.axioms), sel.strict_subset || p.dropped_axioms > 0)
        }
    };
    ProofAttempt {
        obligation: job.obligation.name.clone(),
        prover: job.prover.id.clone(),
        logic: job.prover.logic(),
        timeout_seconds: config.timeout.as_secs(),
        strategy: config.selection.clone(),
        selection: job.selection.as_ref().ok().cloned(),
        provided_axioms: provided,
        raw_status: outcome.status,
        status: finalize(outcome.status, strict),
        used_axioms: outcome.used_axioms,
        wall_time: started.elapsed(),
        output: outcome.output,
    }
}

/// Runs every prover on every obligation. Each obligation's axioms are
/// selected once and the selection is shared by all its attempts. Results
/// are ordered by obligation name, then prover id.
pub fn prove_all(obligations: &[ProofObligation], config: &AttemptConfig, registry: &Registry) -> Vec<ProofAttempt> {
    let default = [ProverSpec::internal_fol()];
    let provers: &[ProverSpec] = if config.provers.is_empty() { &default } else { &config.provers };
    let logics: BTreeSet<LogicId> = provers.iter().map(ProverSpec::logic).collect();
    let selections: Vec<Result<Arc<Selection>, String>> = obligations
        .iter()
        .map(|o| config.selection.select(o).map(Arc::new).map_err(|e| e.to_string()))
        .collect();
    let problems: Vec<BTreeMap<LogicId, Result<Problem, String>>> = obligations
        .iter()
        .zip(&selections)
        .map(|(o, sel)| match sel {
            Ok(sel) => logics
                .iter()
                .map(|&l| (l, prepare(o, sel, l, registry).map_err(|e| e.to_string())))
                .collect(),
            Err(_) => BTreeMap::new(),
        })
        .collect();
    let jobs: Vec<Job<'_>> = obligations
        .iter()
        .enumerate()
        .flat_map(|(i, o)| {
            let (selections, problems) = (&selections, &problems);
            provers.iter().map(move |p| Job {
                obligation: o,
                prover: p,
                selection: &selections[i],
                problem: problems[i].get(&p.logic()),
            })
        })
        .collect();
    let mut attempts = exec::map(&jobs, config.schedule, |j| attempt(j, config));
    attempts.sort_by(|a, b| (&a.obligation, &a.prover).cmp(&(&b.obligation, &b.prover)));
    attempts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logics::{FolFormula, FolTerm, PropFormula};

    fn obligation(name: &str, axioms: Vec<Sentence>, conjecture: Sentence) -> ProofObligation {
        let logic = conjecture.logic();
        let theory = Theory::from_sentences("bg", crate::kernel::Signature::empty(logic), axioms).unwrap();
        ProofObligation {
            name: name.into(),
            definition: name.into(),
            base: "bg".into(),
            theory: Arc::new(theory),
            conjecture: conjecture.labelled(name),
        }
    }

    fn prop_obligation(name: &str) -> ProofObligation {
        let v = |n| PropFormula::var("", n);
        obligation(
            name,
            vec![Sentence::axiom(v("p")).labelled("p"), Sentence::axiom(PropFormula::implies(v("p"), v("q"))).labelled("pq")],
            Sentence::conjecture(v("q")),
        )
    }

    #[test]
    fn finalize_table() {
        let strict = Selection { chosen: vec![], strict_subset: true };
        let full = Selection { chosen: vec![], strict_subset: false };
        assert_eq!(finalize_status(ProofStatus::Csa, &strict), ProofStatus::Csas);
        assert_eq!(finalize_status(ProofStatus::Thm, &strict), ProofStatus::Thm);
        assert_eq!(finalize_status(ProofStatus::Csa, &full), ProofStatus::Csa);
        for s in ProofStatus::ALL {
            for sel in [&strict, &full] {
                let once = finalize_status(s, sel);
                assert_eq!(finalize_status(once, sel), once);
            }
        }
    }

    #[test]
    fn prover_ids() {
        assert_eq!("internal-fol".parse::<ProverSpec>().unwrap(), ProverSpec::internal_fol());
        let ext: ProverSpec = "ext:eprover --auto {file}".parse().unwrap();
        assert_eq!(ext.kind, ProverKind::ExternalTptp { command: vec!["eprover".into(), "--auto".into(), "{file}".into()] });
        assert!(matches!("ext:".parse::<ProverSpec>(), Err(ProveError::EmptyCommand(_))));
        assert!(matches!("vampire".parse::<ProverSpec>(), Err(ProveError::UnknownProver(_))));
        assert!(AttemptConfig::new(vec![], 0).is_err());
    }

    #[test]
    fn one_selection_shared_by_all_provers() {
        let config = AttemptConfig::new(vec![ProverSpec::internal_fol(), ProverSpec::internal_prop()], 5).unwrap();
        let attempts = prove_all(&[prop_obligation("o")], &config, &Registry::builtin());
        assert_eq!(attempts.len(), 2);
        assert_eq!(attempts[0].prover, "internal-fol");
        assert!(attempts.iter().all(|a| a.status == ProofStatus::Thm), "{attempts:#?}");
        let (a, b) = (attempts[0].selection.as_ref().unwrap(), attempts[1].selection.as_ref().unwrap());
        assert!(Arc::ptr_eq(a, b));
        for a in &attempts {
            assert!(a.used_axioms.as_ref().unwrap().iter().all(|u| a.provided_axioms.contains(u)));
        }
    }

    #[test]
    fn default_prover_and_ordering() {
        let config = AttemptConfig::new(vec![], 5).unwrap();
        let attempts = prove_all(&[prop_obligation("z"), prop_obligation("a")], &config, &Registry::builtin());
        let keys: Vec<_> = attempts.iter().map(|a| (a.obligation.as_str(), a.prover.as_str())).collect();
        assert_eq!(keys, [("a", "internal-fol"), ("z", "internal-fol")]);
        assert!(prove_all(&[], &config, &Registry::builtin()).is_empty());
    }

    #[test]
    fn dropped_axiom_gives_csas() {
        let config = AttemptConfig::new(vec![], 5)
            .unwrap()
            .with_selection(SelectionStrategy::Manual { axioms: vec!["pq".into()] });
        let attempts = prove_all(&[prop_obligation("o")], &config, &Registry::builtin());
        assert_eq!(attempts[0].raw_status, ProofStatus::Csa);
        assert_eq!(attempts[0].status, ProofStatus::Csas);
        let json = serde_json::to_value(&attempts[0]).unwrap();
        assert_eq!(json["status"], "CSAS");
        assert_eq!(json["selection"]["chosen"][0], "pq");
        assert_eq!(json["strategy"]["method"], "manual");
    }

    #[test]
    fn errors_become_err_attempts() {
        let config = AttemptConfig::new(vec![], 5)
            .unwrap()
            .with_selection(SelectionStrategy::Manual { axioms: vec!["nope".into()] });
        let attempts = prove_all(&[prop_obligation("o")], &config, &Registry::builtin());
        assert_eq!(attempts[0].status, ProofStatus::Err);
        let eq = FolFormula::Equal(FolTerm::constant("", "a"), FolTerm::constant("", "a"));
        let o = obligation("eq", vec![], Sentence::conjecture(eq));
        let attempts = prove_all(&[o], &AttemptConfig::new(vec![], 5).unwrap(), &Registry::builtin());
        assert_eq!(attempts[0].status, ProofStatus::Err);
        assert!(attempts[0].output.contains("equality"));
    }
}
