//! One bottom-up pass over a normalized cotree.
//!
//! Every node gets its leaf count, a clique flag and its domination number.
//! Union nodes additionally get label R and the union-of-two-cliques flag;
//! join nodes get two property-P verdicts, the published two-children rule
//! ([`property_p_original`], which is wrong on some inputs) and its
//! corrected form ([`property_p_corrected`]).
//!
//! A union child satisfies label R when one child has γ = 1 and the other has
//! γ_s = 1. A graph has γ_s = 1 exactly when it is complete, so the pass reads
//! γ_s = 1 off the clique flag and never computes γ_s itself.

use serde::Serialize;
use thiserror::Error;

use crate::cotree::{Cotree, Kind, NodeId, NodeRef};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnnotateError {
    #[error("cotree is not normalized")]
    NotNormalized,
    #[error("node {0} is not a join node")]
    NotAJoin(NodeId),
}

/// Facts about the subgraph T(v) induced by the leaves below one node.
///
/// Fields that only make sense for one node kind are `None` elsewhere, so a
/// missing verdict is never confused with a negative one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NodeAnnotations {
    pub size: usize,
    pub is_clique: bool,
    pub gamma: usize,
    pub gamma_is_one: bool,
    pub label_r: Option<bool>,
    pub union_of_two_cliques: Option<bool>,
    pub p_original: Option<bool>,
    pub p_corrected: Option<bool>,
}

// Annotations as stored by the pass: 12 bytes per node so large trees stay
// cache-friendly. `get` expands them into `NodeAnnotations`.
#[derive(Debug, Clone, Copy, Default)]
struct Packed {
    size: u32,
    gamma: u32,
    flags: u8,
}

const UNION: u8 = 1;
const JOIN: u8 = 1 << 1;
const CLIQUE: u8 = 1 << 2;
const LABEL_R: u8 = 1 << 3;
const TWO_CLIQUES: u8 = 1 << 4;
const P_ORIGINAL: u8 = 1 << 5;
const P_CORRECTED: u8 = 1 << 6;

impl Packed {
    fn has(self, flag: u8) -> bool {
        self.flags & flag != 0
    }

    fn unpack(self) -> NodeAnnotations {
        let on = |kind: u8, flag: u8| self.has(kind).then_some(self.has(flag));
        NodeAnnotations {
            size: self.size as usize,
            is_clique: self.has(CLIQUE),
            gamma: self.gamma as usize,
            gamma_is_one: self.gamma == 1,
            label_r: on(UNION, LABEL_R),
            union_of_two_cliques: on(UNION, TWO_CLIQUES),
            p_original: on(JOIN, P_ORIGINAL),
            p_corrected: on(JOIN, P_CORRECTED),
        }
    }
}

#[derive(Debug, Clone)]
pub struct AnnotatedCotree<'a> {
    tree: &'a Cotree,
    // in sweep order: node v sits at len - 1 - v
    packed: Vec<Packed>,
    visits: usize,
}

impl<'a> AnnotatedCotree<'a> {
    pub fn tree(&self) -> &'a Cotree {
        self.tree
    }

    fn packed(&self, id: NodeId) -> Packed {
        self.packed[self.packed.len() - 1 - id.0]
    }

    pub fn get(&self, id: NodeId) -> NodeAnnotations {
        self.packed(id).unpack()
    }

    pub fn root(&self) -> NodeAnnotations {
        self.get(self.tree.root())
    }

    /// Nodes visited by the pass. Equals the node count.
    pub fn visits(&self) -> usize {
        self.visits
    }

    /// Per-node report rows in node order.
    pub fn report(&self) -> Vec<NodeReport> {
        self.tree
            .ids()
            .map(|id| {
                let a = self.get(id);
                let node = self.tree.node(id);
                NodeReport {
                    id: id.0,
                    kind: match node.kind() {
                        None => "leaf",
                        Some(Kind::Union) => "union",
                        Some(Kind::Join) => "join",
                    },
                    label: node.label().map(str::to_owned),
                    children: node.children().iter().map(|c| c.0).collect(),
                    size: a.size,
                    is_clique: a.is_clique,
                    gamma: a.gamma,
                    label_r: a.label_r,
                    union_of_two_cliques: a.union_of_two_cliques,
                    p_original: a.p_original,
                    p_corrected: a.p_corrected,
                }
            })
            .collect()
    }
}

/// One row of the JSON annotation report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NodeReport {
    pub id: usize,
    pub kind: &'static str,
    pub label: Option<String>,
    pub children: Vec<usize>,
    pub size: usize,
    pub is_clique: bool,
    pub gamma: usize,
    pub label_r: Option<bool>,
    pub union_of_two_cliques: Option<bool>,
    pub p_original: Option<bool>,
    pub p_corrected: Option<bool>,
}

/// Annotates every node of a normalized cotree in one post-order sweep.
/// Fails with [`AnnotateError::NotNormalized`] as soon as the sweep meets a
/// unary node or a child of its parent's kind.
pub fn annotate(t: &Cotree) -> Result<AnnotatedCotree<'_>, AnnotateError> {
    let n = t.len();
    let mut packed: Vec<Packed> = Vec::with_capacity(n);

    for v in t.bottom_up() {
        // children were pushed earlier; child c sits at n - 1 - c
        let at = |c: &NodeId| packed[n - 1 - c.0];
        let a = match t.node(v) {
            NodeRef::Leaf(_) => Packed {
                size: 1,
                gamma: 1,
                flags: CLIQUE,
            },
            NodeRef::Inner(Kind::Union, ch) => {
                if ch.len() < 2 || ch.iter().any(|c| at(c).has(UNION)) {
                    return Err(AnnotateError::NotNormalized);
                }
                let mut flags = UNION;
                if let [x, y] = ch {
                    let (x, y) = (at(x), at(y));
                    let (xc, yc) = (x.has(CLIQUE), y.has(CLIQUE));
                    if (x.gamma == 1 && yc) || (y.gamma == 1 && xc) {
                        flags |= LABEL_R;
                    }
                    if xc && yc {
                        flags |= TWO_CLIQUES;
                    }
                }
                Packed {
                    size: ch.iter().map(|c| at(c).size).sum(),
                    gamma: ch.iter().map(|c| at(c).gamma).sum(),
                    flags,
                }
            }
            NodeRef::Inner(Kind::Join, ch) => {
                if ch.len() < 2 || ch.iter().any(|c| at(c).has(JOIN)) {
                    return Err(AnnotateError::NotNormalized);
                }
                let (mut size, mut any_gamma_one, mut all_cliques) = (0, false, true);
                let (mut r_or_leaf, mut r_two_cliques) = (0, false);
                for c in ch {
                    let p = at(c);
                    size += p.size;
                    any_gamma_one |= p.gamma == 1;
                    all_cliques &= p.has(CLIQUE);
                    if !p.has(UNION) || p.has(LABEL_R) {
                        r_or_leaf += 1;
                    }
                    r_two_cliques |= p.has(LABEL_R) && p.has(TWO_CLIQUES);
                }
                let original = original_rule(r_or_leaf);
                let mut flags = JOIN;
                if all_cliques {
                    flags |= CLIQUE;
                }
                if original {
                    flags |= P_ORIGINAL;
                }
                if original || clause_two(ch.len(), r_two_cliques) {
                    flags |= P_CORRECTED;
                }
                Packed {
                    size,
                    gamma: if any_gamma_one { 1 } else { 2 },
                    flags,
                }
            }
        };
        packed.push(a);
    }

    Ok(AnnotatedCotree {
        tree: t,
        visits: packed.len(),
        packed,
    })
}

// at least two children that are leaves or carry label R; a join child of a
// normalized join is never a join, so "not a union" means "leaf"
fn original_rule(leaf_or_r_children: usize) -> bool {
    leaf_or_r_children >= 2
}

// some child with label R that is a union of two complete graphs
fn clause_two(arity: usize, some_r_two_cliques: bool) -> bool {
    arity >= 2 && some_r_two_cliques
}

fn join_children(t: &Cotree, c: NodeId) -> Result<&[NodeId], AnnotateError> {
    match t.kind(c) {
        Some(Kind::Join) => Ok(t.children(c)),
        _ => Err(AnnotateError::NotAJoin(c)),
    }
}

/// The published rule: property P holds at join node `c` iff at least two
/// children are leaves or carry label R. Known to miss some graphs; kept so
/// that the failure can be reproduced.
pub fn property_p_original(ann: &AnnotatedCotree<'_>, c: NodeId) -> Result<bool, AnnotateError> {
    let t = ann.tree();
    let ch = join_children(t, c)?;
    let count = ch
        .iter()
        .filter(|c| t.kind(**c).is_none() || ann.get(**c).label_r == Some(true))
        .count();
    Ok(original_rule(count))
}

/// The corrected rule: the published condition, or some child with label R
/// whose subgraph is a union of two complete graphs.
pub fn property_p_corrected(ann: &AnnotatedCotree<'_>, c: NodeId) -> Result<bool, AnnotateError> {
    let ch = join_children(ann.tree(), c)?;
    let two = ch.iter().any(|c| {
        let a = ann.get(*c);
        a.label_r == Some(true) && a.union_of_two_cliques == Some(true)
    });
    Ok(property_p_original(ann, c)? || clause_two(ch.len(), two))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Cotree {
        s.parse().unwrap()
    }

    fn gk(k: usize) -> Cotree {
        let a: Vec<String> = (1..=k).map(|i| format!("a{i}")).collect();
        t(&format!("(J (U c d e) (U (J {}) b))", a.join(" "))).normalize()
    }

    #[test]
    fn rejects_unnormalized() {
        assert_eq!(
            annotate(&t("(U a (U b c))")).unwrap_err(),
            AnnotateError::NotNormalized
        );
        assert_eq!(
            annotate(&t("(J x)")).unwrap_err(),
            AnnotateError::NotNormalized
        );
        assert_eq!(
            annotate(&t("(J a (J b c))")).unwrap_err(),
            AnnotateError::NotNormalized
        );
    }

    #[test]
    fn single_leaf() {
        let a_tree = t("x");
        let a = annotate(&a_tree).unwrap();
        let r = a.root();
        assert_eq!((r.size, r.is_clique, r.gamma), (1, true, 1));
        assert_eq!(r.p_original, None);
        assert_eq!(r.label_r, None);
    }

    #[test]
    fn counterexample_family_root() {
        let tree = gk(3);
        let a = annotate(&tree).unwrap();
        let r = a.root();
        assert_eq!((r.size, r.is_clique, r.gamma), (7, false, 2));
        assert_eq!(r.p_original, Some(false));
        assert_eq!(r.p_corrected, Some(true));

        let [left, right] = tree.children(tree.root()) else {
            panic!()
        };
        assert_eq!(a.get(*right).label_r, Some(true));
        assert_eq!(a.get(*right).union_of_two_cliques, Some(true));
        assert_eq!(a.get(*left).label_r, Some(false));
        assert_eq!(a.get(*left).gamma, 3);
        assert_eq!(a.visits(), tree.len());
    }

    #[test]
    fn triangle() {
        let a_tree = t("(J a b c)");
        let a = annotate(&a_tree).unwrap();
        assert!(a.root().is_clique);
        assert_eq!(a.root().gamma, 1);
        assert!(a.root().gamma_is_one);
    }

    #[test]
    fn original_rule_examples() {
        let c4 = t("(J (U a b) (U c d))");
        let a = annotate(&c4).unwrap();
        assert_eq!(property_p_original(&a, c4.root()), Ok(true));
        let k2 = t("(J a b)");
        let a2 = annotate(&k2).unwrap();
        assert_eq!(property_p_original(&a2, k2.root()), Ok(true));
        let child = c4.children(c4.root())[0];
        assert_eq!(
            property_p_original(&a, child),
            Err(AnnotateError::NotAJoin(child))
        );
    }

    #[test]
    fn corrected_rule_examples() {
        let k33 = t("(J (U a b c) (U d e f))");
        let a = annotate(&k33).unwrap();
        assert_eq!(property_p_corrected(&a, k33.root()), Ok(false));
        assert_eq!(a.root().p_corrected, Some(false));

        // leaf child plus an R child that is also K_1 ∪ K_1
        let mixed = t("(J a (U b c))");
        let m = annotate(&mixed).unwrap();
        assert_eq!(property_p_original(&m, mixed.root()), Ok(true));
        assert_eq!(property_p_corrected(&m, mixed.root()), Ok(true));
        assert_eq!(m.root().p_corrected, Some(true));
    }

    #[test]
    fn gamma_of_unions_and_joins() {
        // γ(3K_1) = 3; joining with it keeps γ = 2 when no child has γ = 1
        let a_tree = t("(J (U a b c) (U d e))");
        let a = annotate(&a_tree).unwrap();
        assert_eq!(a.root().gamma, 2);
        let b_tree = t("(U (J a b) c (J d (U e f)))");
        let b = annotate(&b_tree).unwrap();
        assert_eq!(b.root().gamma, 3);
    }

    #[test]
    fn report_rows() {
        let tree = gk(1);
        let rows = annotate(&tree).unwrap().report();
        assert_eq!(rows.len(), tree.len());
        assert_eq!(rows[0].kind, "join");
        assert_eq!(rows[0].children, vec![1, 5]);
        let leaf = rows
            .iter()
            .find(|r| r.label.as_deref() == Some("b"))
            .unwrap();
        assert_eq!(leaf.kind, "leaf");
        assert_eq!(leaf.p_corrected, None);
    }
}
