//! Cotrees: the canonical representation of a cograph.
//!
//! A [`Cotree`] is an arena of nodes. Leaves are the vertices of the
//! cograph; inner nodes are either a disjoint union or a join of the graphs
//! induced by their children. Every constructor in this module lays the arena
//! out in pre-order, so a [`NodeId`] doubles as the pre-order index of the node.
//!
//! The text format is a small s-expression grammar:
//!
//! ```text
//! cotree := leaf | "(" op ws cotree (ws cotree)* ")"
//! op     := "U" | "J"
//! leaf   := [A-Za-z0-9_]+
//! ```
//!
//! ```
//! use cosec::cotree::Cotree;
//!
//! let t: Cotree = "(J (U c d e) (U a1 b))".parse().unwrap();
//! assert_eq!(t.leaf_count(), 5);
//! assert_eq!(t.to_string(), "(J (U c d e) (U a1 b))");
//! ```

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct NodeId(pub usize);

impl NodeId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Operation of an inner cotree node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Union,
    Join,
}

impl Kind {
    pub fn flip(self) -> Kind {
        match self {
            Kind::Union => Kind::Join,
            Kind::Join => Kind::Union,
        }
    }

    /// Operator letter used by the text format.
    pub fn letter(self) -> char {
        match self {
            Kind::Union => 'U',
            Kind::Join => 'J',
        }
    }

    /// Symbol used when drawing cotrees.
    pub fn symbol(self) -> &'static str {
        match self {
            Kind::Union => "∪",
            Kind::Join => "+",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Leaf(String),
    Inner(Kind, Vec<NodeId>),
}

impl Node {
    pub fn kind(&self) -> Option<Kind> {
        match self {
            Node::Leaf(_) => None,
            Node::Inner(kind, _) => Some(*kind),
        }
    }

    pub fn children(&self) -> &[NodeId] {
        match self {
            Node::Leaf(_) => &[],
            Node::Inner(_, children) => children,
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Node::Leaf(_))
    }

    pub fn label(&self) -> Option<&str> {
        match self {
            Node::Leaf(label) => Some(label),
            Node::Inner(..) => None,
        }
    }
}

/// Borrowed view of a node inside a [`Cotree`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeRef<'a> {
    Leaf(&'a str),
    Inner(Kind, &'a [NodeId]),
}

impl<'a> NodeRef<'a> {
    pub fn kind(self) -> Option<Kind> {
        match self {
            NodeRef::Leaf(_) => None,
            NodeRef::Inner(kind, _) => Some(kind),
        }
    }

    pub fn children(self) -> &'a [NodeId] {
        match self {
            NodeRef::Leaf(_) => &[],
            NodeRef::Inner(_, children) => children,
        }
    }

    pub fn is_leaf(self) -> bool {
        matches!(self, NodeRef::Leaf(_))
    }

    pub fn label(self) -> Option<&'a str> {
        match self {
            NodeRef::Leaf(label) => Some(label),
            NodeRef::Inner(..) => None,
        }
    }

    pub fn to_owned(self) -> Node {
        match self {
            NodeRef::Leaf(label) => Node::Leaf(label.to_owned()),
            NodeRef::Inner(kind, ch) => Node::Inner(kind, ch.to_vec()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CotreeError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("syntax error at byte {offset}: empty inner node")]
    EmptyInnerNode { offset: usize },
    #[error("duplicate leaf label `{label}`")]
    DuplicateLabel { label: String },
    #[error("invalid leaf label `{0}`")]
    InvalidLabel(String),
    #[error("unknown leaf label `{0}`")]
    UnknownLeaf(String),
    #[error("leaves must be distinct, got `{0}` twice")]
    SameLeaf(String),
    #[error("an inner node needs at least one child")]
    NoChildren,
}

// kind is None for leaves; then `start` indexes the label table. Inner
// nodes own `links[start..start + len]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Slot {
    kind: Option<Kind>,
    start: u32,
    len: u32,
}

/// A rooted cotree. Immutable once built.
///
/// Storage is flat: one slot per node, one shared child buffer and one label
/// table, all in pre-order. The root is always node 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cotree {
    slots: Vec<Slot>,
    links: Vec<NodeId>,
    labels: Vec<String>,
}

pub fn is_valid_label(label: &str) -> bool {
    !label.is_empty()
        && label
            .bytes()
            .all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

impl Cotree {
    /// The single-vertex cotree.
    pub fn leaf(label: impl Into<String>) -> Result<Cotree, CotreeError> {
        let label = label.into();
        if !is_valid_label(&label) {
            return Err(CotreeError::InvalidLabel(label));
        }
        Ok(Cotree::from_preorder(vec![Node::Leaf(label)]))
    }

    /// Puts `parts` under a fresh inner node of the given kind. The parts are
    /// kept as written; call [`Cotree::normalize`] to flatten.
    pub fn compose(kind: Kind, parts: Vec<Cotree>) -> Result<Cotree, CotreeError> {
        if parts.is_empty() {
            return Err(CotreeError::NoChildren);
        }
        let total: usize = parts.iter().map(Cotree::len).sum();
        let mut nodes = Vec::with_capacity(total + 1);
        nodes.push(Node::Inner(kind, Vec::with_capacity(parts.len())));
        let mut children = Vec::with_capacity(parts.len());
        let mut seen = HashSet::new();
        for part in parts {
            let offset = nodes.len();
            children.push(NodeId(offset));
            for node in part.to_nodes() {
                nodes.push(match node {
                    Node::Leaf(label) => {
                        if !seen.insert(label.clone()) {
                            return Err(CotreeError::DuplicateLabel { label });
                        }
                        Node::Leaf(label)
                    }
                    Node::Inner(k, ch) => {
                        Node::Inner(k, ch.into_iter().map(|c| NodeId(c.0 + offset)).collect())
                    }
                });
            }
        }
        nodes[0] = Node::Inner(kind, children);
        Ok(Cotree::from_preorder(nodes))
    }

    pub fn union(parts: Vec<Cotree>) -> Result<Cotree, CotreeError> {
        Cotree::compose(Kind::Union, parts)
    }

    pub fn join(parts: Vec<Cotree>) -> Result<Cotree, CotreeError> {
        Cotree::compose(Kind::Join, parts)
    }

    /// Builds a cotree from a pre-order arena. Callers inside the crate
    /// guarantee tree shape and unique labels.
    pub(crate) fn from_preorder(nodes: Vec<Node>) -> Cotree {
        debug_assert!(!nodes.is_empty());
        assert!(nodes.len() < u32::MAX as usize, "cotree too large");
        let mut slots = Vec::with_capacity(nodes.len());
        let mut links = Vec::with_capacity(nodes.len().saturating_sub(1));
        let mut labels = Vec::new();
        for node in nodes {
            slots.push(match node {
                Node::Leaf(label) => {
                    labels.push(label);
                    Slot {
                        kind: None,
                        start: (labels.len() - 1) as u32,
                        len: 0,
                    }
                }
                Node::Inner(kind, ch) => {
                    let start = links.len() as u32;
                    links.extend_from_slice(&ch);
                    Slot {
                        kind: Some(kind),
                        start,
                        len: ch.len() as u32,
                    }
                }
            });
        }
        Cotree {
            slots,
            links,
            labels,
        }
    }

    fn to_nodes(&self) -> Vec<Node> {
        self.ids().map(|id| self.node(id).to_owned()).collect()
    }

    pub fn root(&self) -> NodeId {
        NodeId(0)
    }

    pub fn node(&self, id: NodeId) -> NodeRef<'_> {
        let slot = self.slots[id.0];
        let start = slot.start as usize;
        match slot.kind {
            None => NodeRef::Leaf(&self.labels[start]),
            Some(kind) => NodeRef::Inner(kind, &self.links[start..start + slot.len as usize]),
        }
    }

    /// Number of nodes, leaves included.
    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn kind(&self, id: NodeId) -> Option<Kind> {
        self.slots[id.0].kind
    }

    pub fn children(&self, id: NodeId) -> &[NodeId] {
        self.node(id).children()
    }

    /// Number of children; 0 for a leaf.
    pub fn arity(&self, id: NodeId) -> usize {
        self.slots[id.0].len as usize
    }

    pub fn ids(&self) -> impl Iterator<Item = NodeId> {
        (0..self.len()).map(NodeId)
    }

    pub fn leaf_count(&self) -> usize {
        self.labels.len()
    }

    /// Leaf labels in left-to-right order. This is also the vertex order of
    /// [`Cotree::materialize`].
    pub fn leaf_labels(&self) -> Vec<&str> {
        self.leaves(self.root())
            .into_iter()
            .map(|id| self.node(id).label().expect("leaf"))
            .collect()
    }

    /// Leaves below `id`, left to right.
    pub fn leaves(&self, id: NodeId) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut stack = vec![id];
        while let Some(v) = stack.pop() {
            match self.node(v) {
                NodeRef::Leaf(_) => out.push(v),
                NodeRef::Inner(_, ch) => stack.extend(ch.iter().rev()),
            }
        }
        out
    }

    pub fn find_leaf(&self, label: &str) -> Option<NodeId> {
        self.ids().find(|&id| self.node(id).label() == Some(label))
    }

    /// Parent of every node; `None` for the root.
    pub fn parents(&self) -> Vec<Option<NodeId>> {
        let mut parent = vec![None; self.len()];
        for id in self.ids() {
            for c in self.children(id) {
                parent[c.0] = Some(id);
            }
        }
        parent
    }

    /// Every node after all its children. Constructors lay the arena out in
    /// pre-order, so a child always has a larger id than its parent and the
    /// reversed id range is a valid bottom-up order with sequential access.
    pub fn bottom_up(&self) -> impl Iterator<Item = NodeId> {
        (0..self.len()).rev().map(NodeId)
    }

    /// Pre-order traversal from the root.
    pub fn preorder(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.len());
        let mut stack = vec![self.root()];
        while let Some(v) = stack.pop() {
            out.push(v);
            stack.extend(self.children(v).iter().rev());
        }
        out
    }

    /// Post-order traversal from the root: every node after all its children.
    pub fn postorder(&self) -> Vec<NodeId> {
        let mut out = self.preorder_mirrored();
        out.reverse();
        out
    }

    // root, then children right-to-left; reversing gives a post-order
    fn preorder_mirrored(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.len());
        let mut stack = vec![self.root()];
        while let Some(v) = stack.pop() {
            out.push(v);
            stack.extend(self.children(v).iter());
        }
        out
    }

    /// Number of leaves below every node.
    pub fn subtree_sizes(&self) -> Vec<usize> {
        let mut size = vec![0usize; self.len()];
        for v in self.postorder() {
            size[v.0] = match self.node(v) {
                NodeRef::Leaf(_) => 1,
                NodeRef::Inner(_, ch) => ch.iter().map(|c| size[c.0]).sum(),
            };
        }
        size
    }

    /// True when every inner node has at least two children and no inner
    /// node has a child of its own kind.
    pub fn is_normalized(&self) -> bool {
        self.ids().all(|id| match self.node(id) {
            NodeRef::Leaf(_) => true,
            NodeRef::Inner(kind, ch) => {
                ch.len() >= 2 && ch.iter().all(|c| self.kind(*c) != Some(kind))
            }
        })
    }

    /// Collapses unary inner nodes and splices same-kind children into their
    /// parent. Leaf set, leaf order and the induced graph are unchanged.
    pub fn normalize(&self) -> Cotree {
        // rep[v]: the node v collapses to; flat[v]: spliced children of an
        // inner node that survives.
        let mut rep: Vec<NodeId> = (0..self.len()).map(NodeId).collect();
        let mut flat: Vec<Vec<NodeId>> = vec![Vec::new(); self.len()];
        for v in self.postorder() {
            let NodeRef::Inner(kind, ch) = self.node(v) else {
                continue;
            };
            if ch.len() == 1 {
                rep[v.0] = rep[ch[0].0];
                continue;
            }
            let mut out = Vec::with_capacity(ch.len());
            for c in ch {
                let r = rep[c.0];
                if self.kind(r) == Some(kind) {
                    out.extend_from_slice(&flat[r.0]);
                } else {
                    out.push(r);
                }
            }
            flat[v.0] = out;
        }

        let mut nodes = Vec::with_capacity(self.len());
        // (old node, slot in parent's child list to patch)
        let mut stack: Vec<(NodeId, Option<(usize, usize)>)> = vec![(rep[0], None)];
        while let Some((old, slot)) = stack.pop() {
            let new_id = nodes.len();
            if let Some((parent, pos)) = slot {
                if let Node::Inner(_, ch) = &mut nodes[parent] {
                    ch[pos] = NodeId(new_id);
                }
            }
            match self.node(old) {
                NodeRef::Leaf(label) => nodes.push(Node::Leaf(label.to_owned())),
                NodeRef::Inner(kind, _) => {
                    let kids = &flat[old.0];
                    nodes.push(Node::Inner(kind, vec![NodeId(usize::MAX); kids.len()]));
                    for (pos, k) in kids.iter().enumerate().rev() {
                        stack.push((*k, Some((new_id, pos))));
                    }
                }
            }
        }
        Cotree::from_preorder(nodes)
    }

    /// Swaps union and join everywhere; the result is a cotree of the
    /// complement graph.
    pub fn complement(&self) -> Cotree {
        let mut out = self.clone();
        for slot in &mut out.slots {
            slot.kind = slot.kind.map(Kind::flip);
        }
        out
    }

    /// The cotree rooted at `id`, as an independent tree.
    pub fn subtree(&self, id: NodeId) -> Cotree {
        let mut nodes = Vec::new();
        let mut stack: Vec<(NodeId, Option<(usize, usize)>)> = vec![(id, None)];
        while let Some((old, slot)) = stack.pop() {
            let new_id = nodes.len();
            if let Some((parent, pos)) = slot {
                if let Node::Inner(_, ch) = &mut nodes[parent] {
                    ch[pos] = NodeId(new_id);
                }
            }
            match self.node(old) {
                NodeRef::Leaf(label) => nodes.push(Node::Leaf(label.to_owned())),
                NodeRef::Inner(kind, kids) => {
                    nodes.push(Node::Inner(kind, vec![NodeId(usize::MAX); kids.len()]));
                    for (pos, k) in kids.iter().enumerate().rev() {
                        stack.push((*k, Some((new_id, pos))));
                    }
                }
            }
        }
        Cotree::from_preorder(nodes)
    }

    /// Same tree with every leaf label passed through `f`.
    pub fn map_labels(&self, mut f: impl FnMut(&str) -> String) -> Result<Cotree, CotreeError> {
        let mut seen = HashSet::new();
        let labels = self
            .labels
            .iter()
            .map(|l| {
                let label = f(l);
                if !is_valid_label(&label) {
                    return Err(CotreeError::InvalidLabel(label));
                }
                if !seen.insert(label.clone()) {
                    return Err(CotreeError::DuplicateLabel { label });
                }
                Ok(label)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Cotree {
            labels,
            ..self.clone()
        })
    }

    /// Kind of the lowest common ancestor of two distinct leaves. The leaves
    /// are adjacent in the cograph iff this is [`Kind::Join`].
    pub fn lca_kind(&self, leaf1: &str, leaf2: &str) -> Result<Kind, CotreeError> {
        let a = self
            .find_leaf(leaf1)
            .ok_or_else(|| CotreeError::UnknownLeaf(leaf1.to_owned()))?;
        let b = self
            .find_leaf(leaf2)
            .ok_or_else(|| CotreeError::UnknownLeaf(leaf2.to_owned()))?;
        if a == b {
            return Err(CotreeError::SameLeaf(leaf1.to_owned()));
        }
        let parent = self.parents();
        let mut ancestors = HashSet::new();
        let mut v = Some(a);
        while let Some(x) = v {
            ancestors.insert(x);
            v = parent[x.0];
        }
        let mut v = b;
        while !ancestors.contains(&v) {
            v = parent[v.0].expect("leaves share the root");
        }
        Ok(self.kind(v).expect("lca of two distinct leaves is inner"))
    }

    /// The cograph of this cotree. Vertex `i` is the `i`-th leaf from the left.
    pub fn materialize(&self) -> Graph {
        let leaves = self.leaves(self.root());
        let mut index = vec![usize::MAX; self.len()];
        let labels: Vec<String> = leaves
            .iter()
            .enumerate()
            .map(|(i, id)| {
                index[id.0] = i;
                self.node(*id).label().expect("leaf").to_owned()
            })
            .collect();
        let mut g = Graph::empty(labels);

        // vertex indices below each node, built bottom-up
        let mut below: Vec<Vec<usize>> = vec![Vec::new(); self.len()];
        for v in self.postorder() {
            match self.node(v) {
                NodeRef::Leaf(_) => below[v.0] = vec![index[v.0]],
                NodeRef::Inner(kind, ch) => {
                    if kind == Kind::Join {
                        for (i, a) in ch.iter().enumerate() {
                            for b in &ch[i + 1..] {
                                for &x in &below[a.0] {
                                    for &y in &below[b.0] {
                                        g.add_edge(x, y);
                                    }
                                }
                            }
                        }
                    }
                    let mut all = Vec::new();
                    for c in ch {
                        all.append(&mut below[c.0]);
                    }
                    below[v.0] = all;
                }
            }
        }
        g
    }

    /// Key that identifies the labelled tree up to child order.
    pub fn canonical_key(&self) -> String {
        self.canonical(true)
    }

    /// Key that identifies the unlabelled shape up to child order. Children
    /// are ordered by (kind, size, recursive key).
    pub fn shape_key(&self) -> String {
        self.canonical(false)
    }

    fn canonical(&self, labelled: bool) -> String {
        let size = self.subtree_sizes();
        let mut key: Vec<(u8, usize, String)> = vec![(0, 0, String::new()); self.len()];
        for v in self.postorder() {
            key[v.0] = match self.node(v) {
                NodeRef::Leaf(l) => (0, 1, if labelled { l.to_owned() } else { "*".into() }),
                NodeRef::Inner(kind, ch) => {
                    let mut parts: Vec<(u8, usize, String)> =
                        ch.iter().map(|c| std::mem::take(&mut key[c.0])).collect();
                    parts.sort();
                    let mut s = String::from("(");
                    s.push(kind.letter());
                    for p in parts {
                        s.push(' ');
                        s.push_str(&p.2);
                    }
                    s.push(')');
                    let rank = if kind == Kind::Union { 1 } else { 2 };
                    (rank, size[v.0], s)
                }
            };
        }
        std::mem::take(&mut key[0].2)
    }

    /// Structural equality up to reordering children.
    pub fn same_up_to_order(&self, other: &Cotree) -> bool {
        self.canonical_key() == other.canonical_key()
    }

    /// Graphviz rendering. Inner nodes are labelled `∪` or `+`, leaves with
    /// their identifier.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph cotree {\n    node [shape=circle];\n");
        for id in self.ids() {
            match self.node(id) {
                NodeRef::Leaf(l) => out.push_str(&format!("    n{} [label=\"{}\"];\n", id.0, l)),
                NodeRef::Inner(kind, _) => {
                    out.push_str(&format!("    n{} [label=\"{}\"];\n", id.0, kind.symbol()))
                }
            }
        }
        for id in self.ids() {
            for c in self.children(id) {
                out.push_str(&format!("    n{} -- n{};\n", id.0, c.0));
            }
        }
        out.push_str("}\n");
        out
    }

    /// Leaf labels below `id`, joined by spaces. Used to name nodes in reports.
    pub fn leaf_path(&self, id: NodeId) -> String {
        let labels: Vec<&str> = self
            .leaves(id)
            .into_iter()
            .map(|l| self.node(l).label().expect("leaf"))
            .collect();
        labels.join(" ")
    }
}

impl fmt::Display for Cotree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        enum Step {
            Open(NodeId),
            Close,
            Space,
        }
        let mut stack = vec![Step::Open(self.root())];
        while let Some(step) = stack.pop() {
            match step {
                Step::Space => f.write_str(" ")?,
                Step::Close => f.write_str(")")?,
                Step::Open(v) => match self.node(v) {
                    NodeRef::Leaf(l) => f.write_str(l)?,
                    NodeRef::Inner(kind, ch) => {
                        write!(f, "({}", kind.letter())?;
                        stack.push(Step::Close);
                        for c in ch.iter().rev() {
                            stack.push(Step::Open(*c));
                            stack.push(Step::Space);
                        }
                    }
                },
            }
        }
        Ok(())
    }
}

impl FromStr for Cotree {
    type Err = CotreeError;

    fn from_str(s: &str) -> Result<Cotree, CotreeError> {
        parse_cotree(s)
    }
}

fn is_ws(b: u8) -> bool {
    matches!(b, b' ' | b'\n' | b'\r' | b'\t')
}

fn is_label_byte(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_'
}

/// Parses a cotree expression as written. Nothing is normalized; unary and
/// nested same-kind nodes are accepted. Surrounding whitespace is ignored.
pub fn parse_cotree(text: &str) -> Result<Cotree, CotreeError> {
    let bytes = text.as_bytes();
    let syntax = |offset: usize, message: &str| CotreeError::Syntax {
        offset,
        message: message.to_owned(),
    };

    let mut nodes: Vec<Node> = Vec::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    // open inner nodes: (arena index, byte offset of the paren)
    let mut open: Vec<(usize, usize)> = Vec::new();
    let mut done = false;
    let mut i = 0;

    while i < bytes.len() && is_ws(bytes[i]) {
        i += 1;
    }
    if i == bytes.len() {
        return Err(syntax(i, "expected a cotree"));
    }

    while i < bytes.len() {
        let b = bytes[i];
        if done {
            if is_ws(b) {
                i += 1;
                continue;
            }
            return Err(syntax(i, "trailing input after cotree"));
        }
        if is_ws(b) {
            i += 1;
            continue;
        }
        // a new term must be separated from the previous sibling
        let need_sep = |i: usize| i > 0 && !is_ws(bytes[i - 1]) && bytes[i - 1] != b'(';
        match b {
            b'(' => {
                if !open.is_empty() && need_sep(i) {
                    return Err(syntax(i, "expected whitespace before term"));
                }
                let op = match bytes.get(i + 1) {
                    Some(b'U') => Kind::Union,
                    Some(b'J') => Kind::Join,
                    Some(_) => return Err(syntax(i + 1, "expected operator `U` or `J`")),
                    None => return Err(syntax(i + 1, "unexpected end of input")),
                };
                match bytes.get(i + 2) {
                    Some(&c) if is_ws(c) => {}
                    Some(b')') => return Err(CotreeError::EmptyInnerNode { offset: i }),
                    Some(_) => return Err(syntax(i + 2, "expected whitespace after operator")),
                    None => return Err(syntax(i + 2, "unexpected end of input")),
                }
                let id = nodes.len();
                attach(&mut nodes, &open, id);
                nodes.push(Node::Inner(op, Vec::new()));
                open.push((id, i));
                i += 2;
            }
            b')' => {
                let Some((id, at)) = open.pop() else {
                    return Err(syntax(i, "unbalanced `)`"));
                };
                if nodes[id].children().is_empty() {
                    return Err(CotreeError::EmptyInnerNode { offset: at });
                }
                if open.is_empty() {
                    done = true;
                }
                i += 1;
            }
            _ if is_label_byte(b) => {
                if !open.is_empty() && need_sep(i) {
                    return Err(syntax(i, "expected whitespace before term"));
                }
                let start = i;
                while i < bytes.len() && is_label_byte(bytes[i]) {
                    i += 1;
                }
                let label = &text[start..i];
                if seen.insert(label.to_owned(), start).is_some() {
                    return Err(CotreeError::DuplicateLabel {
                        label: label.to_owned(),
                    });
                }
                let id = nodes.len();
                attach(&mut nodes, &open, id);
                nodes.push(Node::Leaf(label.to_owned()));
                if open.is_empty() {
                    done = true;
                }
            }
            _ => return Err(syntax(i, "unexpected character")),
        }
    }
    if !open.is_empty() {
        return Err(syntax(bytes.len(), "unexpected end of input, missing `)`"));
    }
    Ok(Cotree::from_preorder(nodes))
}

fn attach(nodes: &mut [Node], open: &[(usize, usize)], child: usize) {
    if let Some(&(parent, _)) = open.last() {
        if let Node::Inner(_, ch) = &mut nodes[parent] {
            ch.push(NodeId(child));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Cotree {
        s.parse().unwrap()
    }

    #[test]
    fn parses_fig2_shape() {
        let tree = t("(J (U c d e) (U (J a1) b))");
        assert_eq!(tree.leaf_count(), 5);
        assert_eq!(tree.kind(tree.root()), Some(Kind::Join));
        assert_eq!(tree.leaf_labels(), ["c", "d", "e", "a1", "b"]);
        assert!(!tree.is_normalized());
    }

    #[test]
    fn single_leaf() {
        let tree = t("x");
        assert_eq!(tree.len(), 1);
        assert_eq!(tree.node(tree.root()).label(), Some("x"));
        assert!(tree.is_normalized());
    }

    #[test]
    fn parser_keeps_nesting() {
        let tree = t("(U a (U b c))");
        assert_eq!(tree.children(tree.root()).len(), 2);
        assert!(!tree.is_normalized());
        assert_eq!(tree.to_string(), "(U a (U b c))");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse_cotree("(U a a)"),
            Err(CotreeError::DuplicateLabel { .. })
        ));
        assert_eq!(
            parse_cotree("(U a (J))"),
            Err(CotreeError::EmptyInnerNode { offset: 5 })
        );
        assert!(matches!(
            parse_cotree("(X a b)"),
            Err(CotreeError::Syntax { offset: 1, .. })
        ));
        assert!(matches!(
            parse_cotree("(Ua b)"),
            Err(CotreeError::Syntax { offset: 2, .. })
        ));
        assert!(matches!(
            parse_cotree("(U a b"),
            Err(CotreeError::Syntax { offset: 6, .. })
        ));
        assert!(matches!(
            parse_cotree("(U a b))"),
            Err(CotreeError::Syntax { offset: 7, .. })
        ));
        assert!(matches!(
            parse_cotree("(U a-b c)"),
            Err(CotreeError::Syntax { offset: 4, .. })
        ));
        assert!(matches!(
            parse_cotree("  "),
            Err(CotreeError::Syntax { .. })
        ));
        assert!(matches!(
            parse_cotree("a b"),
            Err(CotreeError::Syntax { offset: 2, .. })
        ));
        assert!(matches!(
            parse_cotree("(U a(J b c))"),
            Err(CotreeError::Syntax { offset: 4, .. })
        ));
    }

    #[test]
    fn whitespace_and_newlines() {
        let tree = t("\n(J\n  (U c d)\n  b )\n");
        assert_eq!(tree.to_string(), "(J (U c d) b)");
    }

    #[test]
    fn normalize_examples() {
        let flat = t("(U a (U b c))").normalize();
        assert_eq!(flat.to_string(), "(U a b c)");
        assert_eq!(flat.materialize(), t("(U a b c)").materialize());

        assert_eq!(t("(J (J a b))").normalize().to_string(), "(J a b)");

        let done = t("(U (J a1 a2) b)");
        assert_eq!(done.normalize(), done);

        assert_eq!(t("(J (U (J x)))").normalize().to_string(), "x");
        assert_eq!(
            t("(J (U c d e) (U (J a1) b))").normalize().to_string(),
            "(J (U c d e) (U a1 b))"
        );
        assert_eq!(
            t("(J (U (J a (J b c)) d) (U (U e)))")
                .normalize()
                .to_string(),
            "(J (U (J a b c) d) e)"
        );
    }

    #[test]
    fn materialize_small() {
        let k2 = t("(J a b)").materialize();
        assert_eq!(k2.edge_count(), 1);
        let two = t("(U a b)").materialize();
        assert_eq!(two.edge_count(), 0);
        assert_eq!(two.n(), 2);

        let g1 = t("(J (U c d e) (U a1 b))").materialize();
        let mut edges: Vec<(String, String)> = g1
            .edges()
            .map(|(u, v)| {
                let (a, b) = (g1.label(u).to_owned(), g1.label(v).to_owned());
                if a < b {
                    (a, b)
                } else {
                    (b, a)
                }
            })
            .collect();
        edges.sort();
        let expected: Vec<(String, String)> = [
            ("a1", "c"),
            ("a1", "d"),
            ("a1", "e"),
            ("b", "c"),
            ("b", "d"),
            ("b", "e"),
        ]
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
        assert_eq!(edges, expected);
    }

    #[test]
    fn complement_examples() {
        assert_eq!(t("(J a b)").complement().to_string(), "(U a b)");
        let c4 = t("(J (U a b) (U c d))");
        let co = c4.complement();
        assert_eq!(co.to_string(), "(U (J a b) (J c d))");
        // brute-force complement of the 4-cycle a-c-b-d-a
        let g = c4.materialize();
        let mut expected = Graph::empty(g.labels().to_vec());
        for u in 0..g.n() {
            for v in u + 1..g.n() {
                if !g.has_edge(u, v) {
                    expected.add_edge(u, v);
                }
            }
        }
        assert_eq!(co.materialize(), expected);
        assert_eq!(co.complement(), c4);
    }

    #[test]
    fn lca_kind_examples() {
        let g1 = t("(J (U c d e) (U a1 b))");
        assert_eq!(g1.lca_kind("b", "c"), Ok(Kind::Join));
        assert_eq!(g1.lca_kind("c", "d"), Ok(Kind::Union));
        assert_eq!(g1.lca_kind("a1", "b"), Ok(Kind::Union));
        assert_eq!(t("(J a b)").lca_kind("a", "b"), Ok(Kind::Join));
        assert_eq!(
            g1.lca_kind("b", "zz"),
            Err(CotreeError::UnknownLeaf("zz".into()))
        );
        assert!(matches!(
            g1.lca_kind("b", "b"),
            Err(CotreeError::SameLeaf(_))
        ));
    }

    #[test]
    fn compose_checks_labels() {
        let a = Cotree::leaf("a").unwrap();
        let b = Cotree::leaf("b").unwrap();
        let j = Cotree::join(vec![a.clone(), b]).unwrap();
        assert_eq!(j.to_string(), "(J a b)");
        assert!(matches!(
            Cotree::union(vec![j, a]),
            Err(CotreeError::DuplicateLabel { .. })
        ));
        assert!(Cotree::leaf("a b").is_err());
        assert_eq!(Cotree::union(vec![]), Err(CotreeError::NoChildren));
    }

    #[test]
    fn canonical_keys_ignore_order() {
        let x = t("(J (U a b) c)");
        let y = t("(J c (U b a))");
        assert!(x.same_up_to_order(&y));
        assert_ne!(x, y);
        assert_eq!(
            t("(U (J p q) r)").shape_key(),
            t("(U z (J x y))").shape_key()
        );
        assert_ne!(x.shape_key(), x.complement().shape_key());
    }

    #[test]
    fn subtree_and_orders() {
        let tree = t("(J (U c d e) (U (J a1 a2) b))");
        let right = tree.children(tree.root())[1];
        assert_eq!(tree.subtree(right).to_string(), "(U (J a1 a2) b)");
        assert_eq!(tree.leaf_path(right), "a1 a2 b");
        let post = tree.postorder();
        assert_eq!(post.last(), Some(&tree.root()));
        assert_eq!(tree.preorder(), tree.ids().collect::<Vec<_>>());
        assert_eq!(tree.subtree_sizes()[0], 6);
        for v in tree.bottom_up() {
            assert!(tree.children(v).iter().all(|c| c.0 > v.0));
        }
    }

    #[test]
    fn dot_uses_cotree_symbols() {
        let dot = t("(J (U c d e) (U a1 b))").to_dot();
        assert!(dot.contains("label=\"+\""));
        assert!(dot.contains("label=\"∪\""));
        assert!(dot.contains("label=\"a1\""));
        assert_eq!(dot.matches(" -- ").count(), 7);
    }
}
