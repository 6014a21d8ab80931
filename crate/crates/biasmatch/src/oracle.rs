//! Exact perfect-matching search by deterministic backtracking.
//!
//! The search always branches on the lowest-labelled uncovered vertex and
//! tries its incident edges in lexicographic order, so every result and
//! every enumeration order is reproducible. This module is the ground truth
//! the rest of the crate is checked against.

use std::cell::Cell;

use serde::Serialize;

use crate::arith::{rational_from, Rational};
use crate::colouring::{profile, ColourProfile, Colouring};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, VertexSet};

/// A set of pairwise vertex-disjoint edges, kept in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Matching {
    edges: Vec<VertexSet>,
}

impl Matching {
    pub fn empty() -> Self {
        Matching { edges: Vec::new() }
    }

    /// Builds a matching, verifying pairwise disjointness.
    pub fn new(mut edges: Vec<VertexSet>) -> Result<Self> {
        edges.sort_by(|a, b| a.lex_cmp(*b));
        let mut covered = VertexSet::new();
        for e in &edges {
            if !covered.is_disjoint(*e) {
                return Err(Error::invalid(format!("edges overlap at {}", covered.intersection(*e))));
            }
            covered = covered.union(*e);
        }
        Ok(Matching { edges })
    }

    pub fn edges(&self) -> &[VertexSet] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Union of all member edges.
    pub fn vertex_set(&self) -> VertexSet {
        self.edges
            .iter()
            .fold(VertexSet::new(), |acc, e| acc.union(*e))
    }

    /// Disjoint union with another matching.
    pub fn union(&self, other: &Matching) -> Result<Matching> {
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        Matching::new(edges)
    }

    /// Checks membership of every edge in the host and full vertex coverage.
    pub fn validate_perfect(&self, host: &Hypergraph) -> Result<()> {
        for e in &self.edges {
            if !host.contains_edge(*e) {
                return Err(Error::invalid(format!("matching edge {e} is not a host edge")));
            }
        }
        if self.vertex_set() != host.vertex_set() {
            return Err(Error::invalid("matching does not cover every vertex"));
        }
        Ok(())
    }
}

/// Result of enumerating perfect matchings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Enumeration {
    pub matchings: Vec<Matching>,
    /// True when the enumeration stopped at the requested limit; further
    /// matchings may exist beyond it.
    pub truncated: bool,
}

/// A perfect matching judged for colour bias.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BiasResult {
    pub matching: Matching,
    pub profile: ColourProfile,
    /// Largest per-colour count in the profile.
    pub bias: usize,
    /// Colour achieving the bias, least index on ties.
    pub bias_colour: usize,
    /// The bound the bias was compared against.
    #[serde(with = "crate::arith::serde_rational")]
    pub bound: Rational,
    pub meets_bound: bool,
}

impl BiasResult {
    pub fn new(matching: Matching, c: &Colouring, bound: Rational) -> Result<Self> {
        let p = profile(matching.edges(), c)?;
        let bias = p.max_count();
        let bias_colour = p.max_colour();
        let meets_bound = rational_from(bias) >= bound;
        Ok(BiasResult {
            matching,
            profile: p,
            bias,
            bias_colour,
            bound,
            meets_bound,
        })
    }
}

/// Node-budget configuration for the backtracking search.
#[derive(Clone, Copy, Debug, Default)]
pub struct SearchConfig {
    /// Maximum number of search-tree nodes to visit; exceeding it aborts
    /// with a budget-exhausted error rather than returning a wrong answer.
    pub budget: Option<u64>,
}

struct Searcher<'a> {
    h: &'a Hypergraph,
    // indexed by vertex label: incident edge positions in lexicographic order
    incident: Vec<Vec<usize>>,
    nodes: u64,
    budget: Option<u64>,
}

enum Walk {
    Continue,
    Stop,
}

impl<'a> Searcher<'a> {
    fn new(h: &'a Hypergraph, config: SearchConfig) -> Self {
        let top = h.vertex_set().to_vec().last().map_or(0, |v| v + 1);
        let mut incident = vec![Vec::new(); top];
        for (idx, e) in h.edges().iter().enumerate() {
            for v in e.iter() {
                incident[v].push(idx);
            }
        }
        Searcher {
            h,
            incident,
            nodes: 0,
            budget: config.budget,
        }
    }

    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if let Some(b) = self.budget {
            if self.nodes > b {
                return Err(Error::BudgetExhausted { nodes: self.nodes });
            }
        }
        Ok(())
    }

    /// Depth-first walk over all perfect matchings, invoking `visit` at each
    /// leaf. `visit` may stop the whole search. `prune` may cut a subtree
    /// based on the partial matching and the number of edges still needed.
    fn walk(
        &mut self,
        uncovered: VertexSet,
        stack: &mut Vec<VertexSet>,
        prune: &mut impl FnMut(&[VertexSet], usize) -> bool,
        visit: &mut impl FnMut(&[VertexSet]) -> Result<Walk>,
    ) -> Result<Walk> {
        self.tick()?;
        let Some(v) = uncovered.min() else {
            return visit(stack);
        };
        let remaining = uncovered.len() / self.h.k();
        if prune(stack, remaining) {
            return Ok(Walk::Continue);
        }
        for pos in 0..self.incident[v].len() {
            let idx = self.incident[v][pos];
            let e = self.h.edges()[idx];
            if !e.is_subset_of(uncovered) {
                continue;
            }
            stack.push(e);
            let walk = self.walk(uncovered.difference(e), stack, prune, visit)?;
            stack.pop();
            if let Walk::Stop = walk {
                return Ok(Walk::Stop);
            }
        }
        Ok(Walk::Continue)
    }

    fn run(
        &mut self,
        mut prune: impl FnMut(&[VertexSet], usize) -> bool,
        mut visit: impl FnMut(&[VertexSet]) -> Result<Walk>,
    ) -> Result<()> {
        let uncovered = self.h.vertex_set();
        if uncovered.len() % self.h.k() != 0 {
            return Ok(());
        }
        let mut stack = Vec::with_capacity(uncovered.len() / self.h.k());
        self.walk(uncovered, &mut stack, &mut prune, &mut visit)?;
        Ok(())
    }
}

/// First perfect matching in the deterministic search order, if any.
pub fn find_perfect_matching(h: &Hypergraph) -> Result<Option<Matching>> {
    find_perfect_matching_with(h, SearchConfig::default())
}

pub fn find_perfect_matching_with(
    h: &Hypergraph,
    config: SearchConfig,
) -> Result<Option<Matching>> {
    let mut found = None;
    let mut searcher = Searcher::new(h, config);
    searcher.run(
        |_, _| false,
        |stack| {
            found = Some(Matching::new(stack.to_vec())?);
            Ok(Walk::Stop)
        },
    )?;
    Ok(found)
}

/// All perfect matchings in deterministic order, each emitted once.
/// A limit truncates the enumeration; the flag records whether it bit.
pub fn enumerate_perfect_matchings(h: &Hypergraph, limit: Option<usize>) -> Result<Enumeration> {
    enumerate_perfect_matchings_with(h, limit, SearchConfig::default())
}

pub fn enumerate_perfect_matchings_with(
    h: &Hypergraph,
    limit: Option<usize>,
    config: SearchConfig,
) -> Result<Enumeration> {
    if let Some(0) = limit {
        return Err(Error::invalid("enumeration limit must be at least 1"));
    }
    let mut matchings = Vec::new();
    let mut truncated = false;
    let mut searcher = Searcher::new(h, config);
    searcher.run(
        |_, _| false,
        |stack| {
            matchings.push(Matching::new(stack.to_vec())?);
            if limit.is_some_and(|l| matchings.len() >= l) {
                truncated = true;
                return Ok(Walk::Stop);
            }
            Ok(Walk::Continue)
        },
    )?;
    Ok(Enumeration {
        matchings,
        truncated,
    })
}

/// Exhaustive maximum-colour-bias search over all perfect matchings.
///
/// Returns the first matching (in enumeration order) achieving the maximum
/// per-colour count, compared against `bound`. None when no perfect
/// matching exists. Subtrees that cannot beat the best bias found so far
/// are pruned, which never changes the first-maximizer tie-break.
pub fn max_bias_perfect_matching(
    h: &Hypergraph,
    c: &Colouring,
    bound: &Rational,
) -> Result<Option<BiasResult>> {
    max_bias_perfect_matching_with(h, c, bound, SearchConfig::default())
}

pub fn max_bias_perfect_matching_with(
    h: &Hypergraph,
    c: &Colouring,
    bound: &Rational,
    config: SearchConfig,
) -> Result<Option<BiasResult>> {
    let best_bias: Cell<Option<usize>> = Cell::new(None);
    let mut best_matching: Option<Matching> = None;
    let mut searcher = Searcher::new(h, config);
    searcher.run(
        |stack, remaining| {
            let Some(b) = best_bias.get() else {
                return false;
            };
            // Even colouring every remaining edge in one colour cannot beat
            // the incumbent: nothing in this subtree can strictly improve.
            stack_max_count(stack, c) + remaining <= b
        },
        |stack| {
            let p = profile(stack, c)?;
            let bias = p.max_count();
            if best_bias.get().map_or(true, |b| bias > b) {
                best_bias.set(Some(bias));
                best_matching = Some(Matching::new(stack.to_vec())?);
            }
            Ok(Walk::Continue)
        },
    )?;
    match best_matching {
        None => Ok(None),
        Some(m) => Ok(Some(BiasResult::new(m, c, bound.clone())?)),
    }
}

fn stack_max_count(stack: &[VertexSet], c: &Colouring) -> usize {
    let mut p = ColourProfile::zero(c.r());
    for &e in stack {
        if let Ok(col) = c.colour(e) {
            p.add(col);
        }
    }
    p.max_count()
}

/// First perfect matching with at least `target` edges of one colour, if
/// any. A non-positive target is met by any perfect matching. The search
/// prunes subtrees that cannot reach the target, so it is exact.
pub fn find_biased_pm(h: &Hypergraph, c: &Colouring, target: i64) -> Result<Option<Matching>> {
    find_biased_pm_with(h, c, target, SearchConfig::default())
}

pub fn find_biased_pm_with(
    h: &Hypergraph,
    c: &Colouring,
    target: i64,
    config: SearchConfig,
) -> Result<Option<Matching>> {
    if target <= 0 {
        return find_perfect_matching_with(h, config);
    }
    let target = target as usize;
    let mut found = None;
    let mut searcher = Searcher::new(h, config);
    searcher.run(
        |stack, remaining| stack_max_count(stack, c) + remaining < target,
        |stack| {
            if stack_max_count(stack, c) >= target {
                found = Some(Matching::new(stack.to_vec())?);
                return Ok(Walk::Stop);
            }
            Ok(Walk::Continue)
        },
    )?;
    Ok(found)
}

/// Whether some perfect matching has at least `target` edges of one colour.
pub fn has_biased_pm(h: &Hypergraph, c: &Colouring, target: i64) -> Result<bool> {
    Ok(find_biased_pm(h, c, target)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;

    fn vs(labels: &[usize]) -> VertexSet {
        VertexSet::from_vertices(labels.iter().copied()).unwrap()
    }

    #[test]
    fn matching_construction() {
        let m = Matching::new(vec![vs(&[3, 4, 5]), vs(&[0, 1, 2])]).unwrap();
        assert_eq!(m.edges(), &[vs(&[0, 1, 2]), vs(&[3, 4, 5])]);
        assert_eq!(m.vertex_set(), vs(&[0, 1, 2, 3, 4, 5]));
        assert!(Matching::new(vec![vs(&[0, 1, 2]), vs(&[2, 3, 4])]).is_err());
    }

    #[test]
    fn first_matching_is_lexicographic() {
        let h = Hypergraph::complete(3, 6).unwrap();
        let m = find_perfect_matching(&h).unwrap().unwrap();
        assert_eq!(m.edges(), &[vs(&[0, 1, 2]), vs(&[3, 4, 5])]);
    }

    #[test]
    fn no_matching_cases() {
        let h = Hypergraph::new(3, 6, vec![vs(&[0, 1, 2])]).unwrap();
        assert!(find_perfect_matching(&h).unwrap().is_none());
        assert!(enumerate_perfect_matchings(&h, None)
            .unwrap()
            .matchings
            .is_empty());
        // Vertex count not divisible by k: immediately none.
        let g = Hypergraph::complete(3, 7).unwrap();
        assert!(find_perfect_matching(&g).unwrap().is_none());
    }

    #[test]
    fn complete_six_has_ten_matchings() {
        let h = Hypergraph::complete(3, 6).unwrap();
        let e = enumerate_perfect_matchings(&h, None).unwrap();
        assert_eq!(e.matchings.len(), 10);
        assert!(!e.truncated);
        for m in &e.matchings {
            m.validate_perfect(&h).unwrap();
        }
        // Each matching appears exactly once.
        for i in 0..e.matchings.len() {
            for j in i + 1..e.matchings.len() {
                assert_ne!(e.matchings[i], e.matchings[j]);
            }
        }
        let t = enumerate_perfect_matchings(&h, Some(4)).unwrap();
        assert_eq!(t.matchings.len(), 4);
        assert!(t.truncated);
        assert_eq!(t.matchings[..], e.matchings[..4]);
    }

    #[test]
    fn empty_hypergraph_has_the_empty_matching() {
        let h = Hypergraph::new(3, 0, vec![]).unwrap();
        let m = find_perfect_matching(&h).unwrap().unwrap();
        assert!(m.is_empty());
        assert_eq!(enumerate_perfect_matchings(&h, None).unwrap().matchings.len(), 1);
    }

    #[test]
    fn monochromatic_bias_is_n_over_k() {
        let h = Hypergraph::complete(3, 9).unwrap();
        let c = Colouring::from_fn(&h, 2, |_| 1).unwrap();
        let b = max_bias_perfect_matching(&h, &c, &ratio(3, 1).unwrap())
            .unwrap()
            .unwrap();
        assert_eq!(b.bias, 3);
        assert_eq!(b.bias_colour, 1);
        assert!(b.meets_bound);
        assert_eq!(b.profile.counts(), &[3, 0]);
    }

    #[test]
    fn max_bias_agrees_with_enumeration() {
        let h = Hypergraph::complete(3, 6).unwrap();
        // Colour by parity of the least vertex in the edge.
        let c = Colouring::from_fn(&h, 2, |e| 1 + e.min().unwrap() % 2).unwrap();
        let best = max_bias_perfect_matching(&h, &c, &ratio(0, 1).unwrap())
            .unwrap()
            .unwrap();
        let enumeration = enumerate_perfect_matchings(&h, None).unwrap();
        let brute = enumeration
            .matchings
            .iter()
            .map(|m| profile(m.edges(), &c).unwrap().max_count())
            .max()
            .unwrap();
        assert_eq!(best.bias, brute);
        // First maximizer in enumeration order is preserved by the pruning.
        let first = enumeration
            .matchings
            .iter()
            .find(|m| profile(m.edges(), &c).unwrap().max_count() == brute)
            .unwrap();
        assert_eq!(&best.matching, first);
    }

    #[test]
    fn parity_coloured_complete_six_has_a_two_biased_matching() {
        let h = Hypergraph::complete(3, 6).unwrap();
        let c = Colouring::from_fn(&h, 2, |e| 1 + e.min().unwrap() % 2).unwrap();
        assert!(has_biased_pm(&h, &c, 2).unwrap());
        let m = find_biased_pm(&h, &c, 2).unwrap().unwrap();
        assert!(profile(m.edges(), &c).unwrap().max_count() >= 2);
        // Bias 3 would need 3 edges; a 6-vertex matching has only 2.
        assert!(!has_biased_pm(&h, &c, 3).unwrap());
        // Non-positive targets accept any perfect matching.
        assert!(has_biased_pm(&h, &c, 0).unwrap());
        assert!(has_biased_pm(&h, &c, -5).unwrap());
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let h = Hypergraph::complete(3, 12).unwrap();
        let config = SearchConfig { budget: Some(5) };
        match enumerate_perfect_matchings_with(&h, None, config) {
            Err(Error::BudgetExhausted { nodes }) => assert!(nodes > 5),
            other => panic!("expected budget exhaustion, got {other:?}"),
        }
        let generous = SearchConfig {
            budget: Some(1_000_000),
        };
        assert!(find_perfect_matching_with(&h, generous).unwrap().is_some());
    }

    #[test]
    fn repeated_runs_are_identical() {
        let h = Hypergraph::complete(3, 9).unwrap();
        let c = Colouring::from_fn(&h, 2, |e| 1 + (e.mask() % 2) as usize).unwrap();
        let a = enumerate_perfect_matchings(&h, None).unwrap();
        let b = enumerate_perfect_matchings(&h, None).unwrap();
        assert_eq!(a, b);
        let x = max_bias_perfect_matching(&h, &c, &ratio(2, 1).unwrap()).unwrap();
        let y = max_bias_perfect_matching(&h, &c, &ratio(2, 1).unwrap()).unwrap();
        assert_eq!(x, y);
    }
}
