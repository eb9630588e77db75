//! Cross-checks the linear pass against the oracles over whole corpora.
//!
//! A corpus is every normalized cotree up to some leaf count plus a batch of
//! seeded random cotrees. Instances are checked in parallel; results are
//! gathered in instance order so the report depends only on the inputs.
//!
//! Disagreements between the published property-P rule and the definition
//! are findings, not failures. Every other disagreement is a [`Mismatch`].

use std::collections::HashSet;
use std::fmt;
use std::time::Instant;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::annotate::annotate;
use crate::cotree::{Cotree, Kind, NodeId};
use crate::generators::{enumerate_cotrees, random_cotree, GeneratorError, RandomSpec};
use crate::graph::VertexSet;
use crate::oracles::{self, OracleBudget, OracleError};

/// The predicate pair that disagreed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    /// Corrected property-P rule vs the definition.
    CorrectedLemma,
    /// Label R: definition vs structural characterization vs linear pass.
    LabelR,
    /// Linear-pass γ vs the domination-number oracle.
    Gamma,
    /// Linear-pass clique flag vs the clique oracle.
    Clique,
    /// γ_s = 1 iff the graph is complete.
    SecureOneIffComplete,
    /// γ_s ≥ γ.
    SecureAtLeastGamma,
    /// The published rule implies the corrected one.
    OriginalImpliesCorrected,
    /// A union of two cliques carries label R.
    TwoCliquesImpliesLabelR,
    /// Materialized graph has an induced P4.
    P4Free,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub check: Check,
    pub cotree: String,
    pub node: usize,
    /// Leaf labels below the node.
    pub path: String,
    pub expected: String,
    pub got: String,
}

/// A join node where the published rule and the definition disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    /// The cotree of the join node's subgraph.
    pub cotree: String,
    pub leaves: usize,
    pub definitional: bool,
    pub original: bool,
    pub corrected: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyConfig {
    /// Enumerate every cotree with up to this many leaves; 0 skips.
    pub max_n: usize,
    pub random_count: usize,
    /// Random cotrees get a leaf count drawn from `1..=random_leaves`.
    pub random_leaves: usize,
    pub seed: u64,
    pub budget: OracleBudget,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            max_n: 8,
            random_count: 0,
            random_leaves: 12,
            seed: 1,
            budget: OracleBudget::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub corpus: String,
    pub instances: usize,
    pub join_nodes: usize,
    pub union_nodes: usize,
    pub mismatches: Vec<Mismatch>,
    /// Join nodes, over all instances, where the published rule is wrong.
    pub original_lemma_disagreements: usize,
    /// Distinct counterexamples to the published rule, first occurrence order.
    pub counterexamples: Vec<Counterexample>,
    pub smallest_counterexample_leaves: Option<usize>,
    /// Wall-clock time; left out of JSON so reruns are byte-identical.
    #[serde(skip)]
    pub elapsed_ms: u128,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn mismatches_of(&self, check: Check) -> usize {
        self.mismatches.iter().filter(|m| m.check == check).count()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "corpus: {}", self.corpus)?;
        writeln!(
            f,
            "instances: {} ({} join nodes, {} union nodes)",
            self.instances, self.join_nodes, self.union_nodes
        )?;
        writeln!(f, "mismatches: {}", self.mismatches.len())?;
        for m in &self.mismatches {
            writeln!(
                f,
                "  {:?} in {} at #{} [{}]: expected {}, got {}",
                m.check, m.cotree, m.node, m.path, m.expected, m.got
            )?;
        }
        writeln!(
            f,
            "original-lemma disagreements: {} join nodes, {} distinct cographs",
            self.original_lemma_disagreements,
            self.counterexamples.len()
        )?;
        if let Some(n) = self.smallest_counterexample_leaves {
            writeln!(f, "smallest counterexample: {n} vertices")?;
        }
        for c in &self.counterexamples {
            writeln!(
                f,
                "  {} ({} vertices): definitional={} original={} corrected={}",
                c.cotree, c.leaves, c.definitional, c.original, c.corrected
            )?;
        }
        Ok(())
    }
}

/// Everything found on one cotree.
#[derive(Debug, Clone, Default)]
pub struct InstanceOutcome {
    pub join_nodes: usize,
    pub union_nodes: usize,
    pub mismatches: Vec<Mismatch>,
    pub counterexamples: Vec<Counterexample>,
}

fn mismatch(
    t: &Cotree,
    v: NodeId,
    check: Check,
    expected: impl fmt::Display,
    got: impl fmt::Display,
) -> Mismatch {
    Mismatch {
        check,
        cotree: t.to_string(),
        node: v.0,
        path: t.leaf_path(v),
        expected: expected.to_string(),
        got: got.to_string(),
    }
}

/// Runs every annotation-vs-oracle check on one cotree. The tree is
/// normalized first; node ids refer to the normalized tree.
pub fn check_instance(t: &Cotree, budget: &OracleBudget) -> Result<InstanceOutcome, OracleError> {
    let t = t.normalize();
    let ann = annotate(&t).expect("normalized");
    let mut out = InstanceOutcome::default();

    for v in t.ids() {
        let a = ann.get(v);
        let sub = t.subtree(v);
        let g = sub.materialize();

        let clique = oracles::is_clique(&g, &VertexSet::all(&g));
        if clique != a.is_clique {
            out.mismatches
                .push(mismatch(&t, v, Check::Clique, clique, a.is_clique));
        }
        let gamma = oracles::domination_number(&g, budget)?;
        if gamma != a.gamma {
            out.mismatches
                .push(mismatch(&t, v, Check::Gamma, gamma, a.gamma));
        }

        match t.kind(v) {
            Some(Kind::Join) => {
                out.join_nodes += 1;
                let definitional = oracles::property_p_definitional(&sub)?;
                let original = a.p_original.expect("join verdict");
                let corrected = a.p_corrected.expect("join verdict");
                if corrected != definitional {
                    out.mismatches.push(mismatch(
                        &t,
                        v,
                        Check::CorrectedLemma,
                        definitional,
                        corrected,
                    ));
                }
                if original && !corrected {
                    out.mismatches.push(mismatch(
                        &t,
                        v,
                        Check::OriginalImpliesCorrected,
                        "original => corrected",
                        "original without corrected",
                    ));
                }
                if original != definitional {
                    out.counterexamples.push(Counterexample {
                        cotree: sub.to_string(),
                        leaves: g.n(),
                        definitional,
                        original,
                        corrected,
                    });
                }
            }
            Some(Kind::Union) => {
                out.union_nodes += 1;
                let definitional = oracles::label_r_definitional(&t, v, budget)?;
                let structural = oracles::label_r_structural(&t, v);
                let linear = a.label_r.expect("union verdict");
                if definitional != structural || definitional != linear {
                    out.mismatches.push(mismatch(
                        &t,
                        v,
                        Check::LabelR,
                        format!("definitional={definitional}"),
                        format!("structural={structural} annotate={linear}"),
                    ));
                }
                if a.union_of_two_cliques == Some(true) && !linear {
                    out.mismatches.push(mismatch(
                        &t,
                        v,
                        Check::TwoCliquesImpliesLabelR,
                        "label R",
                        "no label R",
                    ));
                }
            }
            None => {}
        }
    }

    let root = t.root();
    let g = t.materialize();
    let gamma = ann.root().gamma;
    let secure = oracles::secure_domination_number(&g, budget)?;
    if (secure == 1) != g.is_complete() {
        out.mismatches.push(mismatch(
            &t,
            root,
            Check::SecureOneIffComplete,
            format!("complete={}", g.is_complete()),
            format!("secure domination number {secure}"),
        ));
    }
    if secure < gamma {
        out.mismatches.push(mismatch(
            &t,
            root,
            Check::SecureAtLeastGamma,
            format!(">= {gamma}"),
            secure,
        ));
    }
    if let Some(p) = g.find_induced_p4() {
        let names: Vec<&str> = p.iter().map(|&v| g.label(v)).collect();
        out.mismatches.push(mismatch(
            &t,
            root,
            Check::P4Free,
            "no induced P4",
            names.join("-"),
        ));
    }
    Ok(out)
}

/// The corpus described by `config`, in a fixed order.
pub fn corpus(config: &VerifyConfig) -> Result<Vec<Cotree>, VerifyError> {
    let mut trees = Vec::new();
    if config.max_n > 0 {
        trees.extend(enumerate_cotrees(config.max_n)?);
    }
    if config.random_count > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        for _ in 0..config.random_count {
            let leaves = rng.random_range(1..=config.random_leaves.max(1));
            let seed = rng.next_u64();
            trees.push(random_cotree(RandomSpec::new(leaves, seed)?));
        }
    }
    Ok(trees)
}

fn describe(config: &VerifyConfig) -> String {
    let mut parts = Vec::new();
    if config.max_n > 0 {
        parts.push(format!(
            "all normalized cotrees with <= {} leaves",
            config.max_n
        ));
    }
    if config.random_count > 0 {
        parts.push(format!(
            "{} random cotrees with <= {} leaves (seed {})",
            config.random_count, config.random_leaves, config.seed
        ));
    }
    if parts.is_empty() {
        "empty".into()
    } else {
        parts.join(" + ")
    }
}

/// Checks an arbitrary list of cotrees.
pub fn verify_trees(
    description: String,
    trees: &[Cotree],
    budget: &OracleBudget,
) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    let outcomes = trees
        .par_iter()
        .map(|t| check_instance(t, budget))
        .collect::<Result<Vec<_>, _>>()?;

    let mut report = VerificationReport {
        corpus: description,
        instances: trees.len(),
        join_nodes: 0,
        union_nodes: 0,
        mismatches: Vec::new(),
        original_lemma_disagreements: 0,
        counterexamples: Vec::new(),
        smallest_counterexample_leaves: None,
        elapsed_ms: 0,
    };
    let mut seen = HashSet::new();
    for o in outcomes {
        report.join_nodes += o.join_nodes;
        report.union_nodes += o.union_nodes;
        report.mismatches.extend(o.mismatches);
        report.original_lemma_disagreements += o.counterexamples.len();
        for c in o.counterexamples {
            let key = c
                .cotree
                .parse::<Cotree>()
                .expect("printed cotree parses")
                .shape_key();
            if seen.insert(key) {
                report.counterexamples.push(c);
            }
        }
    }
    report.smallest_counterexample_leaves = report.counterexamples.iter().map(|c| c.leaves).min();
    report.elapsed_ms = start.elapsed().as_millis();
    Ok(report)
}

/// Builds the configured corpus and checks it.
pub fn verify(config: &VerifyConfig) -> Result<VerificationReport, VerifyError> {
    let trees = corpus(config)?;
    verify_trees(describe(config), &trees, &config.budget)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g1_is_a_finding_not_a_mismatch() {
        let t: Cotree = "(J (U c d e) (U a1 b))".parse().unwrap();
        let out = check_instance(&t, &OracleBudget::default()).unwrap();
        assert!(out.mismatches.is_empty(), "{:?}", out.mismatches);
        assert_eq!(out.counterexamples.len(), 1);
        let c = &out.counterexamples[0];
        assert_eq!(c.cotree, "(J (U c d e) (U a1 b))");
        assert!(c.definitional && c.corrected && !c.original);
    }

    #[test]
    fn small_exhaustive_run_is_clean() {
        let config = VerifyConfig {
            max_n: 4,
            ..VerifyConfig::default()
        };
        let report = verify(&config).unwrap();
        assert!(report.passed());
        assert_eq!(report.instances, 1 + 2 + 4 + 10);
        assert!(report.counterexamples.is_empty());
        assert_eq!(report.smallest_counterexample_leaves, None);
    }

    #[test]
    fn wrong_annotation_is_reported() {
        // a deliberately broken value must surface as a mismatch
        let t: Cotree = "(J (U a b c) (U d e f))".parse().unwrap();
        let m = mismatch(&t, t.root(), Check::CorrectedLemma, false, true);
        assert_eq!(m.path, "a b c d e f");
        assert_eq!(m.node, 0);
    }

    #[test]
    fn random_corpus_is_deterministic() {
        let config = VerifyConfig {
            max_n: 0,
            random_count: 30,
            random_leaves: 9,
            seed: 5,
            ..VerifyConfig::default()
        };
        let a: Vec<String> = corpus(&config)
            .unwrap()
            .iter()
            .map(|t| t.to_string())
            .collect();
        let b: Vec<String> = corpus(&config)
            .unwrap()
            .iter()
            .map(|t| t.to_string())
            .collect();
        assert_eq!(a, b);
        let r1 = serde_json::to_string(&verify(&config).unwrap()).unwrap();
        let r2 = serde_json::to_string(&verify(&config).unwrap()).unwrap();
        assert_eq!(r1, r2);
    }

    #[test]
    fn budget_errors_propagate() {
        let config = VerifyConfig {
            max_n: 5,
            budget: OracleBudget::new(4, 4).unwrap(),
            ..VerifyConfig::default()
        };
        assert!(matches!(
            verify(&config),
            Err(VerifyError::Oracle(OracleError::BudgetExceeded { .. }))
        ));
    }
}
