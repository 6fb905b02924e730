//! Shared test support for dolkit: proptest generators for formulas,
//! theories, morphisms and diagrams, and brute-force oracles that the
//! optimized implementations are checked against.

pub mod gen;
pub mod oracle;

use std::path::{Path, PathBuf};

/// The workspace's `fixtures/` directory.
pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

/// Draws `n` values from `strategy` with a fixed seed, so counts over the
/// sample are reproducible run to run.
pub fn sample<S: proptest::strategy::Strategy>(strategy: &S, n: usize) -> Vec<S::Value> {
    use proptest::strategy::ValueTree;
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    (0..n).map(|_| strategy.new_tree(&mut runner).expect("strategy generates").current()).collect()
}
