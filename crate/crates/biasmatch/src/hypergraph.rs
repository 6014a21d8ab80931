//! Immutable k-uniform hypergraphs with degree and neighbourhood queries.
//!
//! Vertices are dense integer labels. Induced subhypergraphs preserve labels,
//! so an edge keeps its identity (and its colour) across vertex removals.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use itertools::Itertools;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::arith::{binomial, rational_from, Rational};
use crate::error::{Error, Result};

/// Hard ceiling on vertex labels imposed by the bitmask representation.
pub const HARD_VERTEX_LIMIT: usize = 64;

/// Default refused-instance cap; instances above it are rejected at
/// construction rather than accepted and left to crawl.
pub const DEFAULT_VERTEX_LIMIT: usize = 40;

/// A set of vertex labels in 0..63, stored as a bitmask.
///
/// Membership, disjointness, union, and difference are exact single-word
/// operations. Iteration is always in ascending label order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn new() -> Self {
        VertexSet(0)
    }

    pub fn singleton(v: usize) -> Self {
        assert!(v < HARD_VERTEX_LIMIT, "vertex label {v} out of range");
        VertexSet(1 << v)
    }

    /// Builds a set from untrusted labels, rejecting out-of-range ones.
    pub fn from_vertices<I: IntoIterator<Item = usize>>(labels: I) -> Result<Self> {
        let mut s = VertexSet(0);
        for v in labels {
            if v >= HARD_VERTEX_LIMIT {
                return Err(Error::invalid(format!(
                    "vertex label {v} exceeds the representable range 0..{HARD_VERTEX_LIMIT}"
                )));
            }
            s.insert(v);
        }
        Ok(s)
    }

    /// Contiguous range 0..n as a set.
    pub fn range(n: usize) -> Result<Self> {
        if n > HARD_VERTEX_LIMIT {
            return Err(Error::InstanceTooLarge {
                n,
                limit: HARD_VERTEX_LIMIT,
            });
        }
        if n == HARD_VERTEX_LIMIT {
            Ok(VertexSet(u64::MAX))
        } else {
            Ok(VertexSet((1u64 << n) - 1))
        }
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn contains(self, v: usize) -> bool {
        v < HARD_VERTEX_LIMIT && self.0 & (1 << v) != 0
    }

    pub fn insert(&mut self, v: usize) {
        assert!(v < HARD_VERTEX_LIMIT, "vertex label {v} out of range");
        self.0 |= 1 << v;
    }

    pub fn remove(&mut self, v: usize) {
        if v < HARD_VERTEX_LIMIT {
            self.0 &= !(1 << v);
        }
    }

    #[must_use]
    pub fn with(self, v: usize) -> Self {
        let mut s = self;
        s.insert(v);
        s
    }

    #[must_use]
    pub fn without(self, v: usize) -> Self {
        let mut s = self;
        s.remove(v);
        s
    }

    pub fn union(self, other: Self) -> Self {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        VertexSet(self.0 & !other.0)
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Least label in the set, if any.
    pub fn min(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    /// Ascending label order.
    pub fn iter(self) -> VertexIter {
        VertexIter(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Lexicographic comparison of the ascending label sequences.
    ///
    /// This is NOT the numeric order of the underlying masks: {0,5} precedes
    /// {1,2} lexicographically although its mask is larger. Every "first in
    /// lexicographic order" rule in this crate goes through this comparator.
    pub fn lex_cmp(self, other: Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.len()))?;
        for v in self.iter() {
            seq.serialize_element(&v)?;
        }
        seq.end()
    }
}

pub struct VertexIter(u64);

impl Iterator for VertexIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            let v = self.0.trailing_zeros() as usize;
            self.0 &= self.0 - 1;
            Some(v)
        }
    }
}

/// An immutable k-uniform hypergraph on labelled vertices.
///
/// Edges are stored in lexicographic order of their sorted vertex lists, so
/// edge iteration and every "first valid candidate" rule built on it are
/// deterministic.
#[derive(Clone, PartialEq, Eq)]
pub struct Hypergraph {
    k: usize,
    vertices: VertexSet,
    edges: Vec<VertexSet>,
}

impl fmt::Debug for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Hypergraph(k={}, n={}, m={})",
            self.k,
            self.n(),
            self.edges.len()
        )
    }
}

impl Hypergraph {
    /// Hypergraph on vertices 0..n-1 with the default size cap.
    pub fn new(k: usize, n: usize, edges: Vec<VertexSet>) -> Result<Self> {
        Self::with_vertex_limit(k, n, edges, DEFAULT_VERTEX_LIMIT)
    }

    /// Hypergraph on vertices 0..n-1 with an explicit size cap (at most 64).
    pub fn with_vertex_limit(
        k: usize,
        n: usize,
        edges: Vec<VertexSet>,
        limit: usize,
    ) -> Result<Self> {
        let limit = limit.min(HARD_VERTEX_LIMIT);
        if n > limit {
            return Err(Error::InstanceTooLarge { n, limit });
        }
        Self::on_vertices(k, VertexSet::range(n)?, edges)
    }

    /// Hypergraph on an explicit (possibly non-contiguous) vertex set.
    pub(crate) fn on_vertices(k: usize, vertices: VertexSet, edges: Vec<VertexSet>) -> Result<Self> {
        if k < 2 {
            return Err(Error::invalid(format!("uniformity k={k} must be at least 2")));
        }
        let mut edges = edges;
        for e in &edges {
            if e.len() != k {
                return Err(Error::invalid(format!(
                    "edge {e} has {} vertices, expected {k}",
                    e.len()
                )));
            }
            if !e.is_subset_of(vertices) {
                return Err(Error::invalid(format!(
                    "edge {e} contains vertices outside the vertex set"
                )));
            }
        }
        edges.sort_by(|a, b| a.lex_cmp(*b));
        if edges.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("duplicate edge"));
        }
        Ok(Hypergraph { k, vertices, edges })
    }

    /// Complete k-uniform hypergraph on n vertices.
    pub fn complete(k: usize, n: usize) -> Result<Self> {
        if k > n {
            return Err(Error::invalid(format!("complete hypergraph needs n >= k, got k={k}, n={n}")));
        }
        let edges = (0..n)
            .combinations(k)
            .map(VertexSet::from_vertices)
            .collect::<Result<Vec<_>>>()?;
        Self::new(k, n, edges)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of surviving vertices. After removals this is the count of
    /// remaining labels, and every degree formula uses it.
    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.vertices
    }

    pub fn vertices(&self) -> VertexIter {
        self.vertices.iter()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> &[VertexSet] {
        &self.edges
    }

    /// Position of an edge in the lexicographic edge order.
    pub fn edge_position(&self, e: VertexSet) -> Option<usize> {
        self.edges.binary_search_by(|probe| probe.lex_cmp(e)).ok()
    }

    pub fn contains_edge(&self, e: VertexSet) -> bool {
        self.edge_position(e).is_some()
    }

    /// All size-`size` subsets of the surviving vertices, in lexicographic
    /// order.
    pub fn vertex_subsets(&self, size: usize) -> Vec<VertexSet> {
        self.vertices
            .to_vec()
            .into_iter()
            .combinations(size)
            .map(|c| {
                let mut s = VertexSet::new();
                for v in c {
                    s.insert(v);
                }
                s
            })
            .collect()
    }

    fn check_query_set(&self, s: VertexSet) -> Result<()> {
        if s.len() >= self.k {
            return Err(Error::invalid(format!(
                "query set {s} has {} vertices; must have fewer than k={}",
                s.len(),
                self.k
            )));
        }
        if !s.is_subset_of(self.vertices) {
            return Err(Error::invalid(format!(
                "query set {s} contains vertices outside the hypergraph"
            )));
        }
        Ok(())
    }

    /// Number of edges containing every vertex of `s`. Requires |s| < k.
    pub fn degree(&self, s: VertexSet) -> Result<usize> {
        self.check_query_set(s)?;
        Ok(self.edges.iter().filter(|e| s.is_subset_of(**e)).count())
    }

    /// Minimum degree over all `l`-subsets of the surviving vertices,
    /// together with the lexicographically least minimizing subset.
    pub fn min_l_degree(&self, l: usize) -> Result<(usize, VertexSet)> {
        if l < 1 || l >= self.k {
            return Err(Error::invalid(format!(
                "degree index l={l} must satisfy 1 <= l < k={}",
                self.k
            )));
        }
        if self.n() < l {
            return Err(Error::invalid(format!(
                "degree index l={l} exceeds the surviving vertex count {}",
                self.n()
            )));
        }
        let mut counts: HashMap<u64, usize> = HashMap::new();
        for e in &self.edges {
            for sub in e.to_vec().into_iter().combinations(l) {
                let mut s = VertexSet::new();
                for v in sub {
                    s.insert(v);
                }
                *counts.entry(s.mask()).or_insert(0) += 1;
            }
        }
        let mut best: Option<(usize, VertexSet)> = None;
        for s in self.vertex_subsets(l) {
            let d = counts.get(&s.mask()).copied().unwrap_or(0);
            match best {
                Some((b, _)) if b <= d => {}
                _ => best = Some((d, s)),
            }
            if d == 0 {
                break;
            }
        }
        best.ok_or_else(|| Error::invalid("no l-subsets to minimize over"))
    }

    /// Evaluates the degree-condition transfer from a larger index to a
    /// smaller one: returns (premise, conclusion) where the premise is
    /// min_l_degree(l_hi) >= x*C(n-l_hi, k-l_hi) and the conclusion is
    /// min_l_degree(l_lo) >= x*C(n-l_lo, k-l_lo). Premise always implies
    /// conclusion; callers property-test exactly that.
    pub fn check_degree_monotonicity(
        &self,
        l_lo: usize,
        l_hi: usize,
        x: &Rational,
    ) -> Result<(bool, bool)> {
        if l_lo < 1 || l_lo > l_hi || l_hi >= self.k {
            return Err(Error::invalid(format!(
                "need 1 <= l_lo <= l_hi < k, got l_lo={l_lo}, l_hi={l_hi}, k={}",
                self.k
            )));
        }
        let zero = Rational::from_integer(0.into());
        let one = Rational::from_integer(1.into());
        if *x < zero || *x > one {
            return Err(Error::invalid("fraction x must lie in [0, 1]"));
        }
        let n = self.n();
        if n < l_hi {
            return Err(Error::invalid("fewer vertices than the degree index"));
        }
        let bound = |l: usize| Rational::from_integer(binomial(n - l, self.k - l)) * x;
        let premise = rational_from(self.min_l_degree(l_hi)?.0) >= bound(l_hi);
        let conclusion = rational_from(self.min_l_degree(l_lo)?.0) >= bound(l_lo);
        Ok((premise, conclusion))
    }

    /// All (k-|x|)-sets s disjoint from `x` with s ∪ x an edge, in
    /// lexicographic order. Requires |x| < k.
    pub fn neighbourhood(&self, x: VertexSet) -> Result<Vec<VertexSet>> {
        self.check_query_set(x)?;
        let mut out: Vec<VertexSet> = self
            .edges
            .iter()
            .filter(|e| x.is_subset_of(**e))
            .map(|e| e.difference(x))
            .collect();
        out.sort_by(|a, b| a.lex_cmp(*b));
        Ok(out)
    }

    /// All (k-1)-sets t with u ∉ t, v ∉ t, t ∪ {u} an edge, and t ∪ {v} an
    /// edge, in lexicographic order. Sets containing the other endpoint are
    /// excluded: every t must be joinable to both u and v.
    pub fn common_neighbourhood(&self, u: usize, v: usize) -> Result<Vec<VertexSet>> {
        if u == v {
            return Err(Error::invalid(format!("common neighbourhood needs two distinct vertices, got {u} twice")));
        }
        if !self.vertices.contains(u) || !self.vertices.contains(v) {
            return Err(Error::invalid(format!(
                "vertex {u} or {v} outside the hypergraph"
            )));
        }
        let mut out: Vec<VertexSet> = self
            .edges
            .iter()
            .filter(|e| e.contains(u) && !e.contains(v))
            .map(|e| e.without(u))
            .filter(|t| self.contains_edge(t.with(v)))
            .collect();
        out.sort_by(|a, b| a.lex_cmp(*b));
        Ok(out)
    }

    /// Induced subhypergraph on the surviving vertices minus `x`. Labels are
    /// preserved, so edges keep their identity in the host's colourings.
    #[must_use]
    pub fn remove_vertices(&self, x: VertexSet) -> Hypergraph {
        let vertices = self.vertices.difference(x);
        let edges = self
            .edges
            .iter()
            .copied()
            .filter(|e| e.is_disjoint(x))
            .collect();
        Hypergraph {
            k: self.k,
            vertices,
            edges,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;

    fn vs(labels: &[usize]) -> VertexSet {
        VertexSet::from_vertices(labels.iter().copied()).unwrap()
    }

    #[test]
    fn vertex_set_basics() {
        let s = vs(&[0, 4, 5]);
        assert_eq!(s.len(), 3);
        assert!(s.contains(4));
        assert!(!s.contains(1));
        assert_eq!(s.to_vec(), vec![0, 4, 5]);
        assert_eq!(s.to_string(), "{0,4,5}");
        assert!(s.is_disjoint(vs(&[1, 2])));
        assert!(vs(&[0, 4]).is_subset_of(s));
        assert_eq!(s.difference(vs(&[4])).to_vec(), vec![0, 5]);
        assert!(VertexSet::from_vertices([64]).is_err());
    }

    #[test]
    fn lex_order_differs_from_mask_order() {
        let a = vs(&[0, 5]);
        let b = vs(&[1, 2]);
        assert!(a.mask() > b.mask());
        assert_eq!(a.lex_cmp(b), Ordering::Less);
    }

    #[test]
    fn edges_sorted_lexicographically() {
        let h = Hypergraph::new(3, 7, vec![vs(&[1, 2, 3]), vs(&[0, 5, 6])]).unwrap();
        assert_eq!(h.edges()[0], vs(&[0, 5, 6]));
        assert_eq!(h.edges()[1], vs(&[1, 2, 3]));
    }

    #[test]
    fn construction_validation() {
        assert!(Hypergraph::new(3, 5, vec![vs(&[0, 1])]).is_err());
        assert!(Hypergraph::new(3, 5, vec![vs(&[0, 1, 5])]).is_err());
        assert!(Hypergraph::new(3, 5, vec![vs(&[0, 1, 2]), vs(&[0, 1, 2])]).is_err());
        assert!(Hypergraph::new(1, 5, vec![]).is_err());
        match Hypergraph::new(3, 41, vec![]) {
            Err(Error::InstanceTooLarge { n: 41, limit: 40 }) => {}
            other => panic!("expected size refusal, got {other:?}"),
        }
        assert!(Hypergraph::with_vertex_limit(3, 41, vec![], 64).is_ok());
    }

    #[test]
    fn degree_on_complete() {
        let h = Hypergraph::complete(3, 5).unwrap();
        assert_eq!(h.degree(vs(&[0, 1])).unwrap(), 3);
        assert_eq!(h.degree(vs(&[2])).unwrap(), 6);
        assert!(h.degree(vs(&[0, 1, 2])).is_err());
        let empty = Hypergraph::new(3, 5, vec![]).unwrap();
        assert_eq!(empty.degree(vs(&[0, 1])).unwrap(), 0);
    }

    #[test]
    fn min_degree_on_complete_matches_binomial() {
        let h = Hypergraph::complete(3, 6).unwrap();
        let (d1, w1) = h.min_l_degree(1).unwrap();
        assert_eq!(d1, 10);
        assert_eq!(w1, vs(&[0]));
        let (d2, w2) = h.min_l_degree(2).unwrap();
        assert_eq!(d2, 4);
        assert_eq!(w2, vs(&[0, 1]));
        assert!(h.min_l_degree(0).is_err());
        assert!(h.min_l_degree(3).is_err());
    }

    #[test]
    fn min_degree_witness_is_lex_least() {
        // Vertex 3 and vertex 0 both have degree 1; {0} is the lex-least witness.
        let h = Hypergraph::new(3, 5, vec![vs(&[0, 1, 2]), vs(&[1, 2, 3]), vs(&[1, 2, 4])])
            .unwrap();
        let (d, w) = h.min_l_degree(1).unwrap();
        assert_eq!(d, 1);
        assert_eq!(w, vs(&[0]));
    }

    #[test]
    fn monotonicity_examples() {
        let h = Hypergraph::complete(3, 9).unwrap();
        let one = ratio(1, 1).unwrap();
        assert_eq!(h.check_degree_monotonicity(1, 2, &one).unwrap(), (true, true));
        let empty = Hypergraph::new(3, 9, vec![]).unwrap();
        let half = ratio(1, 2).unwrap();
        assert_eq!(
            empty.check_degree_monotonicity(1, 2, &half).unwrap(),
            (false, false)
        );
        assert!(h.check_degree_monotonicity(2, 1, &one).is_err());
        assert!(h.check_degree_monotonicity(1, 2, &ratio(3, 2).unwrap()).is_err());
    }

    #[test]
    fn neighbourhood_examples() {
        let h = Hypergraph::complete(3, 4).unwrap();
        let nb = h.neighbourhood(vs(&[0])).unwrap();
        assert_eq!(nb, vec![vs(&[1, 2]), vs(&[1, 3]), vs(&[2, 3])]);
        assert_eq!(nb.len(), h.degree(vs(&[0])).unwrap());
        let empty = Hypergraph::new(3, 4, vec![]).unwrap();
        assert!(empty.neighbourhood(vs(&[0])).unwrap().is_empty());
    }

    #[test]
    fn common_neighbourhood_examples() {
        let h = Hypergraph::complete(3, 5).unwrap();
        let cn = h.common_neighbourhood(0, 1).unwrap();
        assert_eq!(cn, vec![vs(&[2, 3]), vs(&[2, 4]), vs(&[3, 4])]);
        for t in &cn {
            assert!(!t.contains(0) && !t.contains(1));
        }
        let single = Hypergraph::new(3, 4, vec![vs(&[0, 1, 2])]).unwrap();
        assert!(single.common_neighbourhood(0, 3).unwrap().is_empty());
        assert!(h.common_neighbourhood(2, 2).is_err());
    }

    #[test]
    fn remove_vertices_examples() {
        let h = Hypergraph::complete(3, 5).unwrap();
        assert_eq!(h.remove_vertices(VertexSet::EMPTY), h);
        let g = h.remove_vertices(vs(&[4]));
        assert_eq!(g.n(), 4);
        assert_eq!(g.num_edges(), 4);
        assert_eq!(g, Hypergraph::complete(3, 4).unwrap());
        // Removal composes: peeling {0} then {4} equals peeling {0,4}.
        let a = h.remove_vertices(vs(&[0])).remove_vertices(vs(&[4]));
        let b = h.remove_vertices(vs(&[0, 4]));
        assert_eq!(a, b);
        assert_eq!(a.n(), 3);
    }

    #[test]
    fn removal_preserves_labels() {
        let h = Hypergraph::complete(3, 6).unwrap();
        let g = h.remove_vertices(vs(&[0, 1, 2]));
        assert_eq!(g.n(), 3);
        assert_eq!(g.edges(), &[vs(&[3, 4, 5])]);
        assert!(g.vertex_set().contains(5));
        assert!(!g.vertex_set().contains(0));
        assert_eq!(g.degree(vs(&[3])).unwrap(), 1);
        assert!(g.degree(vs(&[0])).is_err());
    }
}
