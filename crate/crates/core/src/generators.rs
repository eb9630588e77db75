//! Cotree corpora: the G_k counterexample family, seeded random cotrees, and
//! an exhaustive enumerator of small normalized cotrees.

use std::rc::Rc;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cotree::{Cotree, Kind, Node, NodeId};

/// Largest leaf count [`enumerate_cotrees`] accepts.
pub const MAX_ENUMERATION_LEAVES: usize = 10;

// (parent arena index, position in its child list)
type ParentSlot = Option<(usize, usize)>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneratorError {
    #[error("k must be at least 1, got {0}")]
    InvalidK(usize),
    #[error("leaf count must be at least 1")]
    NoLeaves,
    #[error("max arity must be at least 2, got {0}")]
    InvalidArity(usize),
    #[error("max leaves must be in 1..={MAX_ENUMERATION_LEAVES}, got {0}")]
    EnumerationGuard(usize),
}

/// Selects G_k: K_k on `a1..ak`, joined to the independent set `{c, d, e}`,
/// plus `b` adjacent to exactly `c`, `d` and `e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GkSpec {
    k: usize,
}

impl GkSpec {
    pub fn new(k: usize) -> Result<GkSpec, GeneratorError> {
        if k < 1 {
            return Err(GeneratorError::InvalidK(k));
        }
        Ok(GkSpec { k })
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

/// The normalized cotree `(J (U c d e) (U (J a1 .. ak) b))`. For k = 1 the
/// unary join collapses to the leaf `a1`.
pub fn g_k(spec: GkSpec) -> Cotree {
    let leaf = |l: &str| Cotree::leaf(l).expect("valid label");
    let clique = (1..=spec.k).map(|i| leaf(&format!("a{i}"))).collect();
    let left = Cotree::union(vec![leaf("c"), leaf("d"), leaf("e")]).expect("distinct labels");
    let right = Cotree::union(vec![Cotree::join(clique).expect("k >= 1"), leaf("b")])
        .expect("distinct labels");
    Cotree::join(vec![left, right])
        .expect("distinct labels")
        .normalize()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomSpec {
    leaf_count: usize,
    seed: u64,
    max_arity: usize,
}

impl RandomSpec {
    pub fn new(leaf_count: usize, seed: u64) -> Result<RandomSpec, GeneratorError> {
        RandomSpec::with_arity(leaf_count, seed, 4)
    }

    pub fn with_arity(
        leaf_count: usize,
        seed: u64,
        max_arity: usize,
    ) -> Result<RandomSpec, GeneratorError> {
        if leaf_count < 1 {
            return Err(GeneratorError::NoLeaves);
        }
        if max_arity < 2 {
            return Err(GeneratorError::InvalidArity(max_arity));
        }
        Ok(RandomSpec {
            leaf_count,
            seed,
            max_arity,
        })
    }

    pub fn leaf_count(&self) -> usize {
        self.leaf_count
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn max_arity(&self) -> usize {
        self.max_arity
    }
}

/// A random normalized cotree with exactly `leaf_count` leaves, labelled
/// `v0, v1, ..` left to right. Inner node kinds alternate by level starting
/// from a random root kind; arities are drawn from `2..=max_arity` and leaf
/// counts are split at uniformly random cut points. Deterministic per seed.
pub fn random_cotree(spec: RandomSpec) -> Cotree {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let root_kind = if rng.random_bool(0.5) {
        Kind::Union
    } else {
        Kind::Join
    };
    let mut nodes: Vec<Node> = Vec::with_capacity(2 * spec.leaf_count);
    let mut next_leaf = 0usize;
    // (leaves, kind, parent slot)
    let mut stack: Vec<(usize, Kind, ParentSlot)> = vec![(spec.leaf_count, root_kind, None)];

    while let Some((n, kind, slot)) = stack.pop() {
        let id = nodes.len();
        if let Some((parent, pos)) = slot {
            if let Node::Inner(_, ch) = &mut nodes[parent] {
                ch[pos] = NodeId(id);
            }
        }
        if n == 1 {
            nodes.push(Node::Leaf(format!("v{next_leaf}")));
            next_leaf += 1;
            continue;
        }
        let arity = rng.random_range(2..=spec.max_arity.min(n));
        let mut cuts = index::sample(&mut rng, n - 1, arity - 1).into_vec();
        cuts.sort_unstable();
        let mut parts = Vec::with_capacity(arity);
        let mut prev = 0;
        for c in cuts {
            parts.push(c + 1 - prev);
            prev = c + 1;
        }
        parts.push(n - prev);

        nodes.push(Node::Inner(kind, vec![NodeId(usize::MAX); arity]));
        for (pos, m) in parts.into_iter().enumerate().rev() {
            stack.push((m, kind.flip(), Some((id, pos))));
        }
    }
    Cotree::from_preorder(nodes)
}

#[derive(Debug)]
enum Shape {
    Leaf,
    Inner(Kind, Vec<Rc<Shape>>),
}

/// Every normalized cotree shape with at most `max_leaves` leaves, each once
/// up to child order. Trees come out by leaf count, and within one leaf count
/// unions before joins. Leaves are labelled `v0, v1, ..`.
pub fn enumerate_cotrees(max_leaves: usize) -> Result<CotreeEnumerator, GeneratorError> {
    if !(1..=MAX_ENUMERATION_LEAVES).contains(&max_leaves) {
        return Err(GeneratorError::EnumerationGuard(max_leaves));
    }
    // rooted[kind][n]: shapes with n >= 2 leaves whose root has that kind
    let mut rooted: [Vec<Vec<Rc<Shape>>>; 2] = [
        vec![Vec::new(); max_leaves + 1],
        vec![Vec::new(); max_leaves + 1],
    ];
    let leaf = Rc::new(Shape::Leaf);
    for n in 2..=max_leaves {
        for (slot, kind) in [(0, Kind::Union), (1, Kind::Join)] {
            // children of a `kind` node: a leaf, or a tree rooted at the other kind
            let other = 1 - slot;
            let pool = |m: usize| -> Vec<Rc<Shape>> {
                if m == 1 {
                    vec![leaf.clone()]
                } else {
                    rooted[other][m].clone()
                }
            };
            let mut found = Vec::new();
            let mut chosen = Vec::new();
            multisets(n, (n - 1, usize::MAX), &pool, &mut chosen, &mut found, kind);
            rooted[slot][n] = found;
        }
    }
    Ok(CotreeEnumerator {
        rooted,
        size: 1,
        kind: 0,
        pos: 0,
        max_leaves,
    })
}

// Appends every multiset of >= 2 child shapes summing to `remaining` leaves,
// choosing (size, index) pairs in non-increasing order to avoid repeats.
fn multisets(
    remaining: usize,
    bound: (usize, usize),
    pool: &dyn Fn(usize) -> Vec<Rc<Shape>>,
    chosen: &mut Vec<Rc<Shape>>,
    out: &mut Vec<Rc<Shape>>,
    kind: Kind,
) {
    if remaining == 0 {
        if chosen.len() >= 2 {
            out.push(Rc::new(Shape::Inner(kind, chosen.clone())));
        }
        return;
    }
    for size in (1..=remaining.min(bound.0)).rev() {
        let options = pool(size);
        let top = if size == bound.0 {
            bound.1.min(options.len().saturating_sub(1))
        } else {
            options.len().saturating_sub(1)
        };
        if options.is_empty() {
            continue;
        }
        for idx in (0..=top).rev() {
            chosen.push(options[idx].clone());
            multisets(remaining - size, (size, idx), pool, chosen, out, kind);
            chosen.pop();
        }
    }
}

/// Iterator returned by [`enumerate_cotrees`].
pub struct CotreeEnumerator {
    rooted: [Vec<Vec<Rc<Shape>>>; 2],
    size: usize,
    kind: usize,
    pos: usize,
    max_leaves: usize,
}

impl Iterator for CotreeEnumerator {
    type Item = Cotree;

    fn next(&mut self) -> Option<Cotree> {
        loop {
            if self.size > self.max_leaves {
                return None;
            }
            if self.size == 1 {
                self.size = 2;
                return Some(Cotree::leaf("v0").expect("valid label"));
            }
            let list = &self.rooted[self.kind][self.size];
            if self.pos < list.len() {
                let shape = list[self.pos].clone();
                self.pos += 1;
                return Some(shape_to_cotree(&shape));
            }
            self.pos = 0;
            if self.kind == 0 {
                self.kind = 1;
            } else {
                self.kind = 0;
                self.size += 1;
            }
        }
    }
}

fn shape_to_cotree(shape: &Rc<Shape>) -> Cotree {
    let mut nodes = Vec::new();
    let mut next_leaf = 0;
    let mut stack: Vec<(Rc<Shape>, ParentSlot)> = vec![(shape.clone(), None)];
    while let Some((s, slot)) = stack.pop() {
        let id = nodes.len();
        if let Some((parent, pos)) = slot {
            if let Node::Inner(_, ch) = &mut nodes[parent] {
                ch[pos] = NodeId(id);
            }
        }
        match &*s {
            Shape::Leaf => {
                nodes.push(Node::Leaf(format!("v{next_leaf}")));
                next_leaf += 1;
            }
            Shape::Inner(kind, kids) => {
                nodes.push(Node::Inner(*kind, vec![NodeId(usize::MAX); kids.len()]));
                for (pos, k) in kids.iter().enumerate().rev() {
                    stack.push((k.clone(), Some((id, pos))));
                }
            }
        }
    }
    Cotree::from_preorder(nodes)
}
