//! Simple undirected graphs over labelled vertices, stored as bitset rows.

use std::collections::HashMap;

/// A simple undirected graph. Vertices are `0..n`, each carrying a unique label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<String>,
    words: usize,
    rows: Vec<u64>,
}

impl Graph {
    /// Edgeless graph on the given labels.
    pub fn empty(labels: Vec<String>) -> Graph {
        let n = labels.len();
        let words = n.div_ceil(64).max(1);
        Graph {
            labels,
            words,
            rows: vec![0; n * words],
        }
    }

    pub fn from_edges(labels: Vec<String>, edges: &[(usize, usize)]) -> Graph {
        let mut g = Graph::empty(labels);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }

    /// Adds the edge `uv`. Loops are ignored.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u < self.n() && v < self.n(), "vertex out of range");
        if u == v {
            return;
        }
        self.rows[u * self.words + v / 64] |= 1 << (v % 64);
        self.rows[v * self.words + u / 64] |= 1 << (u % 64);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(v).iter().enumerate().flat_map(|(w, &bits)| {
            let mut bits = bits;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + b)
            })
        })
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub fn is_complete(&self) -> bool {
        let n = self.n();
        self.edge_count() == n * n.saturating_sub(1) / 2
    }

    pub fn complement(&self) -> Graph {
        let mut g = Graph::empty(self.labels.clone());
        for u in 0..self.n() {
            for v in u + 1..self.n() {
                if !self.has_edge(u, v) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    pub fn is_connected(&self) -> bool {
        let n = self.n();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for w in self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n
    }

    /// Closed neighbourhood of `v` as a bitmask. Only for graphs with at most
    /// 64 vertices.
    pub fn closed_mask(&self, v: usize) -> u64 {
        debug_assert!(self.n() <= 64);
        self.rows[v * self.words] | 1 << v
    }

    /// Open neighbourhood of `v` as a bitmask; at most 64 vertices.
    pub fn open_mask(&self, v: usize) -> u64 {
        debug_assert!(self.n() <= 64);
        self.rows[v * self.words]
    }

    /// Equality after matching vertices by label rather than by index.
    pub fn same_by_labels(&self, other: &Graph) -> bool {
        if self.n() != other.n() {
            return false;
        }
        let index: HashMap<&str, usize> = other
            .labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect();
        let Some(map) = self
            .labels
            .iter()
            .map(|l| index.get(l.as_str()).copied())
            .collect::<Option<Vec<usize>>>()
        else {
            return false;
        };
        (0..self.n()).all(|u| {
            (u + 1..self.n()).all(|v| self.has_edge(u, v) == other.has_edge(map[u], map[v]))
        })
    }

    /// Finds an induced path on four vertices, if any.
    pub fn find_induced_p4(&self) -> Option<[usize; 4]> {
        // a P4 a-b-c-d: b~c, a~b only, d~c only, a,c / b,d / a,d non-adjacent
        let n = self.n();
        for b in 0..n {
            for c in self.neighbors(b) {
                for a in self.neighbors(b) {
                    if a == c || self.has_edge(a, c) {
                        continue;
                    }
                    for d in self.neighbors(c) {
                        if d != b && d != a && !self.has_edge(d, b) && !self.has_edge(d, a) {
                            return Some([a, b, c, d]);
                        }
                    }
                }
            }
        }
        None
    }
}

/// A set of vertex indices of some graph. Kept sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new(members: impl IntoIterator<Item = usize>) -> VertexSet {
        let mut v: Vec<usize> = members.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }

    pub fn all(g: &Graph) -> VertexSet {
        VertexSet((0..g.n()).collect())
    }

    /// Looks up each label in `g`; `None` if one is missing.
    pub fn from_labels(g: &Graph, labels: &[&str]) -> Option<VertexSet> {
        labels
            .iter()
            .map(|l| g.index_of(l))
            .collect::<Option<Vec<_>>>()
            .map(VertexSet::new)
    }

    pub fn from_mask(mask: u64) -> VertexSet {
        VertexSet((0..64).filter(|i| mask >> i & 1 == 1).collect())
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn max(&self) -> Option<usize> {
        self.0.last().copied()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::new(iter)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("v{i}")).collect()
    }

    #[test]
    fn edges_are_symmetric_and_simple() {
        let mut g = Graph::empty(labels(3));
        g.add_edge(0, 1);
        g.add_edge(1, 0);
        g.add_edge(2, 2);
        assert!(g.has_edge(1, 0));
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1)]);
    }

    #[test]
    fn wide_graphs_span_words() {
        let mut g = Graph::empty(labels(130));
        g.add_edge(3, 129);
        g.add_edge(64, 65);
        assert_eq!(g.neighbors(129).collect::<Vec<_>>(), vec![3]);
        assert_eq!(g.degree(64), 1);
        assert!(!g.is_connected());
        assert_eq!(g.complement().edge_count(), 130 * 129 / 2 - 2);
    }

    #[test]
    fn p4_detection() {
        let p4 = Graph::from_edges(labels(4), &[(0, 1), (1, 2), (2, 3)]);
        assert!(p4.find_induced_p4().is_some());
        let c4 = Graph::from_edges(labels(4), &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert!(c4.find_induced_p4().is_none());
        let c5 = Graph::from_edges(labels(5), &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        assert!(c5.find_induced_p4().is_some());
    }

    #[test]
    fn label_matched_equality() {
        let a = Graph::from_edges(vec!["x".into(), "y".into(), "z".into()], &[(0, 1)]);
        let b = Graph::from_edges(vec!["y".into(), "z".into(), "x".into()], &[(2, 0)]);
        assert!(a.same_by_labels(&b));
        assert_ne!(a, b);
        let c = Graph::from_edges(vec!["y".into(), "z".into(), "x".into()], &[(0, 1)]);
        assert!(!a.same_by_labels(&c));
    }

    #[test]
    fn vertex_sets() {
        let s = VertexSet::new([3, 1, 3]);
        assert_eq!(s.members(), &[1, 3]);
        assert!(s.contains(3));
        assert_eq!(VertexSet::from_mask(0b1010), s);
    }
}
