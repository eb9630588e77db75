//! Exact, exponential checks that follow the definitions literally.
//!
//! Nothing here looks at cotree structure beyond materializing the graph, so
//! these functions serve as ground truth for the linear-time pass in
//! [`crate::annotate`]. Subset scans go through bitmasks and ascend by
//! cardinality, stopping at the first witness.

use thiserror::Error;

use crate::cotree::{Cotree, Kind, NodeId};
use crate::graph::{Graph, VertexSet};

/// Hard ceiling for either cap; subsets are enumerated as `u64` masks.
pub const MAX_ORACLE_VERTICES: usize = 40;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("oracle budget exceeded: {what} on {n} vertices, cap is {cap}")]
    BudgetExceeded {
        what: &'static str,
        n: usize,
        cap: usize,
    },
    #[error("property P is only defined for a join, root is {found}")]
    NotAJoin { found: &'static str },
    #[error("vertex {index} out of range for a graph on {n} vertices")]
    VertexOutOfRange { index: usize, n: usize },
    #[error("invalid oracle budget: {0}")]
    InvalidBudget(String),
}

/// Largest graphs the subset-scanning oracles will accept.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    max_vertices_domination: usize,
    max_vertices_secure: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_vertices_domination: 20,
            max_vertices_secure: 16,
        }
    }
}

impl OracleBudget {
    pub fn new(
        max_vertices_domination: usize,
        max_vertices_secure: usize,
    ) -> Result<Self, OracleError> {
        if max_vertices_domination == 0 || max_vertices_secure == 0 {
            return Err(OracleError::InvalidBudget("caps must be positive".into()));
        }
        if max_vertices_secure > max_vertices_domination {
            return Err(OracleError::InvalidBudget(
                "secure cap must not exceed the domination cap".into(),
            ));
        }
        if max_vertices_domination > MAX_ORACLE_VERTICES {
            return Err(OracleError::InvalidBudget(format!(
                "caps are limited to {MAX_ORACLE_VERTICES} vertices"
            )));
        }
        Ok(OracleBudget {
            max_vertices_domination,
            max_vertices_secure,
        })
    }

    /// Both caps set to `n`.
    pub fn uniform(n: usize) -> Result<Self, OracleError> {
        OracleBudget::new(n, n)
    }

    /// Parses `"D"` (both caps) or `"D,S"`.
    pub fn parse(text: &str) -> Result<Self, OracleError> {
        let bad = || OracleError::InvalidBudget(format!("cannot parse `{text}`"));
        let mut parts = text.split(',').map(|p| p.trim().parse::<usize>());
        let dom = parts.next().ok_or_else(bad)?.map_err(|_| bad())?;
        let sec = match parts.next() {
            Some(p) => p.map_err(|_| bad())?,
            None => dom,
        };
        if parts.next().is_some() {
            return Err(bad());
        }
        OracleBudget::new(dom, sec)
    }

    pub fn max_vertices_domination(&self) -> usize {
        self.max_vertices_domination
    }

    pub fn max_vertices_secure(&self) -> usize {
        self.max_vertices_secure
    }

    fn check_domination(&self, n: usize) -> Result<(), OracleError> {
        if n > self.max_vertices_domination {
            return Err(OracleError::BudgetExceeded {
                what: "domination number",
                n,
                cap: self.max_vertices_domination,
            });
        }
        Ok(())
    }

    fn check_secure(&self, n: usize) -> Result<(), OracleError> {
        if n > self.max_vertices_secure {
            return Err(OracleError::BudgetExceeded {
                what: "secure domination number",
                n,
                cap: self.max_vertices_secure,
            });
        }
        Ok(())
    }
}

fn check_range(g: &Graph, s: &VertexSet) -> Result<(), OracleError> {
    match s.max() {
        Some(index) if index >= g.n() => Err(OracleError::VertexOutOfRange { index, n: g.n() }),
        _ => Ok(()),
    }
}

fn dominates(g: &Graph, inside: &[bool]) -> bool {
    (0..g.n()).all(|x| inside[x] || g.neighbors(x).any(|y| inside[y]))
}

/// Every vertex outside `s` has a neighbour in `s`.
pub fn is_dominating(g: &Graph, s: &VertexSet) -> Result<bool, OracleError> {
    check_range(g, s)?;
    let mut inside = vec![false; g.n()];
    for &v in s.members() {
        inside[v] = true;
    }
    Ok(dominates(g, &inside))
}

/// `s` dominates, and every outsider `x` has a neighbour `y` in `s` such that
/// swapping `y` out for `x` still dominates.
pub fn is_secure_dominating(g: &Graph, s: &VertexSet) -> Result<bool, OracleError> {
    check_range(g, s)?;
    let mut inside = vec![false; g.n()];
    for &v in s.members() {
        inside[v] = true;
    }
    if !dominates(g, &inside) {
        return Ok(false);
    }
    for x in 0..g.n() {
        if inside[x] {
            continue;
        }
        let mut defended = false;
        for y in g.neighbors(x).filter(|&y| inside[y]).collect::<Vec<_>>() {
            inside[x] = true;
            inside[y] = false;
            let ok = dominates(g, &inside);
            inside[x] = false;
            inside[y] = true;
            if ok {
                defended = true;
                break;
            }
        }
        if !defended {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All pairs of `s` adjacent. The empty set and singletons count as cliques.
///
/// Panics if `s` names a vertex outside `g`.
pub fn is_clique(g: &Graph, s: &VertexSet) -> bool {
    let m = s.members();
    m.iter()
        .enumerate()
        .all(|(i, &u)| m[i + 1..].iter().all(|&v| g.has_edge(u, v)))
}

struct Masks {
    closed: Vec<u64>,
    open: Vec<u64>,
    full: u64,
}

impl Masks {
    fn new(g: &Graph) -> Masks {
        let n = g.n();
        Masks {
            closed: (0..n).map(|v| g.closed_mask(v)).collect(),
            open: (0..n).map(|v| g.open_mask(v)).collect(),
            full: if n == 64 { u64::MAX } else { (1u64 << n) - 1 },
        }
    }

    fn dominates(&self, s: u64) -> bool {
        let mut covered = 0u64;
        let mut bits = s;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            covered |= self.closed[v];
        }
        covered == self.full
    }

    fn secure(&self, s: u64) -> bool {
        if !self.dominates(s) {
            return false;
        }
        let mut outside = self.full & !s;
        while outside != 0 {
            let x = outside.trailing_zeros() as usize;
            outside &= outside - 1;
            let mut guards = self.open[x] & s;
            let mut defended = false;
            while guards != 0 {
                let y = guards.trailing_zeros();
                guards &= guards - 1;
                if self.dominates((s | 1 << x) & !(1u64 << y)) {
                    defended = true;
                    break;
                }
            }
            if !defended {
                return false;
            }
        }
        true
    }
}

/// Smallest `k` such that some `k`-subset satisfies `pred`.
fn min_subset(n: usize, pred: impl Fn(u64) -> bool) -> usize {
    for k in 1..=n {
        let limit = 1u64 << n;
        let mut x = (1u64 << k) - 1;
        while x < limit {
            if pred(x) {
                return k;
            }
            // next mask with the same popcount
            let c = x & x.wrapping_neg();
            let r = x + c;
            x = (((r ^ x) >> 2) / c) | r;
        }
    }
    n
}

/// γ(G): the size of a smallest dominating set.
pub fn domination_number(g: &Graph, budget: &OracleBudget) -> Result<usize, OracleError> {
    budget.check_domination(g.n())?;
    if g.n() == 0 {
        return Ok(0);
    }
    let masks = Masks::new(g);
    Ok(min_subset(g.n(), |s| masks.dominates(s)))
}

/// γ_s(G): the size of a smallest secure dominating set.
pub fn secure_domination_number(g: &Graph, budget: &OracleBudget) -> Result<usize, OracleError> {
    budget.check_secure(g.n())?;
    if g.n() == 0 {
        return Ok(0);
    }
    let masks = Masks::new(g);
    Ok(min_subset(g.n(), |s| masks.secure(s)))
}

/// `V(G) \ N[v]`.
fn non_neighbors(g: &Graph, v: usize) -> VertexSet {
    (0..g.n())
        .filter(|&u| u != v && !g.has_edge(u, v))
        .collect()
}

/// A pair witnessing property P on the graph of a join cotree, if one exists.
pub fn property_p_witness(t: &Cotree) -> Result<Option<(usize, usize)>, OracleError> {
    let t = t.normalize();
    match t.kind(t.root()) {
        Some(Kind::Join) => {}
        Some(Kind::Union) => return Err(OracleError::NotAJoin { found: "a union" }),
        None => return Err(OracleError::NotAJoin { found: "a leaf" }),
    }
    let g = t.materialize();
    let n = g.n();
    for x in 0..n {
        for y in x + 1..n {
            if is_dominating(&g, &VertexSet::new([x, y]))?
                && is_clique(&g, &non_neighbors(&g, x))
                && is_clique(&g, &non_neighbors(&g, y))
            {
                return Ok(Some((x, y)));
            }
        }
    }
    Ok(None)
}

/// Property P straight from its definition: two distinct vertices `x`, `y`
/// with `{x, y}` dominating and each of `V \ N[x]`, `V \ N[y]` empty or a
/// clique.
pub fn property_p_definitional(t: &Cotree) -> Result<bool, OracleError> {
    property_p_witness(t).map(|w| w.is_some())
}

/// Label R from its definition: a union node with exactly two children `x`,
/// `y` where γ(T(x)) = 1 and γ_s(T(y)) = 1, for either assignment of the
/// children. All four numbers are computed so the budget applies uniformly.
pub fn label_r_definitional(
    t: &Cotree,
    u: NodeId,
    budget: &OracleBudget,
) -> Result<bool, OracleError> {
    let ch = t.children(u);
    if t.kind(u) != Some(Kind::Union) || ch.len() != 2 {
        return Ok(false);
    }
    let a = t.subtree(ch[0]).materialize();
    let b = t.subtree(ch[1]).materialize();
    let gamma_a = domination_number(&a, budget)?;
    let gamma_b = domination_number(&b, budget)?;
    let secure_a = secure_domination_number(&a, budget)?;
    let secure_b = secure_domination_number(&b, budget)?;
    Ok((gamma_a == 1 && secure_b == 1) || (gamma_b == 1 && secure_a == 1))
}

/// Label R via its structural characterization: T(u) is disconnected and
/// some vertex `w` leaves a clique `V \ N[w]`.
pub fn label_r_structural(t: &Cotree, u: NodeId) -> bool {
    let g = t.subtree(u).materialize();
    if g.is_connected() {
        return false;
    }
    (0..g.n()).any(|w| is_clique(&g, &non_neighbors(&g, w)))
}
