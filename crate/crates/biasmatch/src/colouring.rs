//! Edge colourings, colour profiles, and the same-colour / cross-colour
//! classification of vertex pairs through their common neighbourhood.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::arith::{ceil_to_usize, rational_from, Rational};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, VertexSet};

/// A total assignment of colours 1..=r to the edges of a host hypergraph.
///
/// Colours are keyed by edge identity (the vertex set), so a colouring built
/// on a host remains valid on every induced subhypergraph of that host.
#[derive(Clone, PartialEq, Eq)]
pub struct Colouring {
    r: usize,
    map: HashMap<u64, usize>,
}

impl fmt::Debug for Colouring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Colouring(r={}, edges={})", self.r, self.map.len())
    }
}

impl Colouring {
    /// Colour every edge of the host by a rule. The rule must return values
    /// in 1..=r.
    pub fn from_fn(
        host: &Hypergraph,
        r: usize,
        rule: impl Fn(VertexSet) -> usize,
    ) -> Result<Self> {
        if r < 1 {
            return Err(Error::invalid("colour count r must be at least 1"));
        }
        let mut map = HashMap::with_capacity(host.num_edges());
        for &e in host.edges() {
            let c = rule(e);
            if c < 1 || c > r {
                return Err(Error::invalid(format!(
                    "colour {c} for edge {e} outside 1..={r}"
                )));
            }
            map.insert(e.mask(), c);
        }
        Ok(Colouring { r, map })
    }

    /// Colouring from explicit (edge, colour) pairs; must cover every host
    /// edge exactly once.
    pub fn from_pairs(host: &Hypergraph, r: usize, pairs: &[(VertexSet, usize)]) -> Result<Self> {
        if r < 1 {
            return Err(Error::invalid("colour count r must be at least 1"));
        }
        let mut map = HashMap::with_capacity(pairs.len());
        for &(e, c) in pairs {
            if !host.contains_edge(e) {
                return Err(Error::invalid(format!("coloured set {e} is not a host edge")));
            }
            if c < 1 || c > r {
                return Err(Error::invalid(format!(
                    "colour {c} for edge {e} outside 1..={r}"
                )));
            }
            if map.insert(e.mask(), c).is_some() {
                return Err(Error::invalid(format!("edge {e} coloured twice")));
            }
        }
        if map.len() != host.num_edges() {
            return Err(Error::invalid(format!(
                "colouring covers {} of {} host edges",
                map.len(),
                host.num_edges()
            )));
        }
        Ok(Colouring { r, map })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn colour(&self, e: VertexSet) -> Result<usize> {
        self.map
            .get(&e.mask())
            .copied()
            .ok_or_else(|| Error::invalid(format!("edge {e} is not in the colouring's domain")))
    }

    /// A copy with one edge recoloured. The edge must already be in the
    /// domain.
    pub fn with_colour(&self, e: VertexSet, c: usize) -> Result<Self> {
        if c < 1 || c > self.r {
            return Err(Error::invalid(format!("colour {c} outside 1..={}", self.r)));
        }
        if !self.map.contains_key(&e.mask()) {
            return Err(Error::invalid(format!("edge {e} is not in the colouring's domain")));
        }
        let mut next = self.clone();
        next.map.insert(e.mask(), c);
        Ok(next)
    }
}

/// Per-colour edge counts of a matching or edge collection.
#[derive(Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct ColourProfile {
    counts: Vec<usize>,
}

impl fmt::Debug for ColourProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.counts)
    }
}

impl ColourProfile {
    pub fn zero(r: usize) -> Self {
        ColourProfile {
            counts: vec![0; r],
        }
    }

    pub fn r(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn count(&self, colour: usize) -> usize {
        self.counts[colour - 1]
    }

    pub fn add(&mut self, colour: usize) {
        self.counts[colour - 1] += 1;
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Largest per-colour count.
    pub fn max_count(&self) -> usize {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    /// Colour achieving the largest count, least index on ties.
    pub fn max_colour(&self) -> usize {
        let m = self.max_count();
        1 + self.counts.iter().position(|&c| c == m).unwrap_or(0)
    }
}

/// Colour profile of a collection of edges.
pub fn profile(edges: &[VertexSet], c: &Colouring) -> Result<ColourProfile> {
    let mut p = ColourProfile::zero(c.r());
    for &e in edges {
        p.add(c.colour(e)?);
    }
    Ok(p)
}

/// Colour indices where two profiles disagree, ascending. Empty iff equal.
pub fn profiles_differ_in(p: &ColourProfile, q: &ColourProfile) -> Result<Vec<usize>> {
    if p.r() != q.r() {
        return Err(Error::invalid(format!(
            "profiles over different colour counts: {} vs {}",
            p.r(),
            q.r()
        )));
    }
    Ok((1..=p.r()).filter(|&i| p.count(i) != q.count(i)).collect())
}

/// How the classification threshold for a vertex pair is computed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdMode {
    /// The absolute count (k²+k)·n^(k−2). Faithful to the asymptotic
    /// analysis; typically unattainable on small instances.
    Strict,
    /// max(1, ceil(fraction · |common neighbourhood|)) per pair. Guarantees
    /// that a nonempty common neighbourhood always has at least one type
    /// whenever fraction ≤ 1/(r(r−1)+1).
    Scaled(#[serde(with = "crate::arith::serde_rational")] Rational),
}

impl ThresholdMode {
    /// The default scaled fraction 1/(2r(r−1)+2).
    pub fn default_scaled(r: usize) -> Result<ThresholdMode> {
        if r < 2 {
            return Err(Error::invalid("scaled threshold default needs r >= 2"));
        }
        Ok(ThresholdMode::Scaled(Rational::new(
            1.into(),
            (2 * r * (r - 1) + 2).into(),
        )))
    }

    /// Absolute count a witness class must reach for the pair to have that
    /// type, given the host and the pair's common-neighbourhood size.
    pub fn threshold(&self, host: &Hypergraph, common_size: usize) -> Result<usize> {
        match self {
            ThresholdMode::Strict => {
                let k = host.k();
                let n = host.n();
                Ok((k * k + k) * n.pow((k - 2) as u32))
            }
            ThresholdMode::Scaled(fraction) => {
                let zero = Rational::from_integer(0.into());
                let one = Rational::from_integer(1.into());
                if *fraction <= zero || *fraction > one {
                    return Err(Error::invalid("scaled threshold fraction must lie in (0, 1]"));
                }
                let scaled = ceil_to_usize(&(fraction * rational_from(common_size)))?;
                Ok(scaled.max(1))
            }
        }
    }
}

/// A type label a vertex pair can carry at a threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairType {
    /// Same-colour links reach the threshold.
    Same,
    /// Links coloured (i on the u side, j on the v side) reach the
    /// threshold, i ≠ j.
    Cross(usize, usize),
}

/// Exact witness counts for one ordered vertex pair (u, v).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairClassification {
    /// Links t whose two completions t∪{u}, t∪{v} share a colour.
    pub same_count: usize,
    /// Entry [i-1][j-1]: links t with t∪{u} coloured i and t∪{v} coloured j,
    /// for i ≠ j. Diagonal entries are always zero.
    pub cross_counts: Vec<Vec<usize>>,
    /// Size of the common neighbourhood; equals same_count plus the sum of
    /// cross_counts.
    pub common_size: usize,
    /// The absolute threshold the types were judged against.
    pub threshold: usize,
    /// Types whose witness count reached the threshold, Same first, then
    /// Cross in ascending (i, j) order.
    pub types: Vec<PairType>,
}

impl PairClassification {
    pub fn has_type(&self, t: PairType) -> bool {
        self.types.contains(&t)
    }
}

/// Classify the ordered pair (u, v): count, for every common link t, whether
/// its two completions share a colour or carry a cross-colour pair, then
/// judge the counts against an absolute threshold.
pub fn classify_pair(
    host: &Hypergraph,
    c: &Colouring,
    u: usize,
    v: usize,
    threshold: usize,
) -> Result<PairClassification> {
    let common = host.common_neighbourhood(u, v)?;
    let r = c.r();
    let mut same_count = 0usize;
    let mut cross_counts = vec![vec![0usize; r]; r];
    for &t in &common {
        let cu = c.colour(t.with(u))?;
        let cv = c.colour(t.with(v))?;
        if cu == cv {
            same_count += 1;
        } else {
            cross_counts[cu - 1][cv - 1] += 1;
        }
    }
    let mut types = Vec::new();
    if same_count >= threshold {
        types.push(PairType::Same);
    }
    for i in 1..=r {
        for j in 1..=r {
            if i != j && cross_counts[i - 1][j - 1] >= threshold {
                types.push(PairType::Cross(i, j));
            }
        }
    }
    Ok(PairClassification {
        same_count,
        cross_counts,
        common_size: common.len(),
        threshold,
        types,
    })
}

/// Common links whose two completions share a colour, in lexicographic
/// order. These are the admissible link candidates for same-colour gadget
/// construction.
pub fn same_witnesses(
    host: &Hypergraph,
    c: &Colouring,
    u: usize,
    v: usize,
) -> Result<Vec<VertexSet>> {
    let mut out = Vec::new();
    for t in host.common_neighbourhood(u, v)? {
        if c.colour(t.with(u))? == c.colour(t.with(v))? {
            out.push(t);
        }
    }
    Ok(out)
}

/// Common links t with t∪{u} coloured i and t∪{v} coloured j, in
/// lexicographic order.
pub fn cross_witnesses(
    host: &Hypergraph,
    c: &Colouring,
    u: usize,
    v: usize,
    i: usize,
    j: usize,
) -> Result<Vec<VertexSet>> {
    if i == j {
        return Err(Error::invalid("cross witnesses need two distinct colours"));
    }
    let mut out = Vec::new();
    for t in host.common_neighbourhood(u, v)? {
        if c.colour(t.with(u))? == i && c.colour(t.with(v))? == j {
            out.push(t);
        }
    }
    Ok(out)
}

/// Classification of every unordered vertex pair u < v of the host, in
/// ascending (u, v) order. Parallelized over pairs when a multi-threaded
/// rayon pool is installed.
pub fn classify_all_pairs(
    host: &Hypergraph,
    c: &Colouring,
    mode: &ThresholdMode,
) -> Result<Vec<(usize, usize, PairClassification)>> {
    use rayon::prelude::*;
    let verts = host.vertex_set().to_vec();
    let mut pairs = Vec::new();
    for (a, &u) in verts.iter().enumerate() {
        for &v in &verts[a + 1..] {
            pairs.push((u, v));
        }
    }
    pairs
        .into_par_iter()
        .map(|(u, v)| {
            let common = host.common_neighbourhood(u, v)?;
            let threshold = mode.threshold(host, common.len())?;
            let cls = classify_pair(host, c, u, v, threshold)?;
            Ok((u, v, cls))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vs(labels: &[usize]) -> VertexSet {
        VertexSet::from_vertices(labels.iter().copied()).unwrap()
    }

    #[test]
    fn profile_counts_and_errors() {
        let h = Hypergraph::complete(3, 6).unwrap();
        let c = Colouring::from_fn(&h, 2, |e| if e.contains(0) { 1 } else { 2 }).unwrap();
        let p = profile(&[vs(&[0, 1, 2]), vs(&[3, 4, 5])], &c).unwrap();
        assert_eq!(p.counts(), &[1, 1]);
        assert_eq!(profile(&[], &c).unwrap().counts(), &[0, 0]);
        let q = profile(&[vs(&[0, 1, 2]), vs(&[0, 1, 3])], &c).unwrap();
        assert_eq!(q.counts(), &[2, 0]);
        assert_eq!(q.max_count(), 2);
        assert_eq!(q.max_colour(), 1);
        // An edge outside the domain is an error, not a zero.
        let g = Hypergraph::complete(3, 7).unwrap();
        let bad = g.edges().last().copied().unwrap();
        assert!(profile(&[bad], &c).is_err());
    }

    #[test]
    fn max_colour_prefers_least_index_on_ties() {
        let mut p = ColourProfile::zero(3);
        p.add(2);
        p.add(3);
        assert_eq!(p.max_count(), 1);
        assert_eq!(p.max_colour(), 2);
    }

    #[test]
    fn differ_in_examples() {
        let a = ColourProfile { counts: vec![2, 1] };
        let b = ColourProfile { counts: vec![1, 2] };
        assert_eq!(profiles_differ_in(&a, &b).unwrap(), vec![1, 2]);
        let c = ColourProfile { counts: vec![3, 0] };
        assert!(profiles_differ_in(&c, &c.clone()).unwrap().is_empty());
        let d = ColourProfile { counts: vec![1, 1, 0] };
        assert!(profiles_differ_in(&a, &d).is_err());
    }

    #[test]
    fn monochromatic_pair_is_same_typed() {
        let h = Hypergraph::complete(3, 6).unwrap();
        let c = Colouring::from_fn(&h, 2, |_| 1).unwrap();
        let cls = classify_pair(&h, &c, 0, 1, 1).unwrap();
        assert_eq!(cls.same_count, 6);
        assert_eq!(cls.common_size, 6);
        assert!(cls.cross_counts.iter().flatten().all(|&x| x == 0));
        assert_eq!(cls.types, vec![PairType::Same]);
    }

    #[test]
    fn single_cross_witness_by_hand() {
        let h = Hypergraph::new(3, 4, vec![vs(&[0, 1, 2]), vs(&[0, 1, 3])]).unwrap();
        let c =
            Colouring::from_pairs(&h, 2, &[(vs(&[0, 1, 2]), 1), (vs(&[0, 1, 3]), 2)]).unwrap();
        let cls = classify_pair(&h, &c, 2, 3, 1).unwrap();
        assert_eq!(cls.same_count, 0);
        assert_eq!(cls.cross_counts[0][1], 1);
        assert_eq!(cls.common_size, 1);
        assert_eq!(cls.types, vec![PairType::Cross(1, 2)]);
        // Reversing the pair transposes the cross counts.
        let rev = classify_pair(&h, &c, 3, 2, 1).unwrap();
        assert_eq!(rev.cross_counts[1][0], 1);
        assert_eq!(rev.types, vec![PairType::Cross(2, 1)]);
    }

    #[test]
    fn partition_identity_on_a_fixture() {
        let h = Hypergraph::complete(3, 7).unwrap();
        let c = Colouring::from_fn(&h, 3, |e| 1 + e.min().unwrap() % 3).unwrap();
        for u in 0..7 {
            for v in 0..7 {
                if u == v {
                    continue;
                }
                let cls = classify_pair(&h, &c, u, v, 2).unwrap();
                let cross_total: usize = cls.cross_counts.iter().flatten().sum();
                assert_eq!(cls.same_count + cross_total, cls.common_size);
                assert_eq!(cls.common_size, h.common_neighbourhood(u, v).unwrap().len());
            }
        }
    }

    #[test]
    fn witnesses_match_classification_counts() {
        let h = Hypergraph::complete(3, 8).unwrap();
        let c = Colouring::from_fn(&h, 2, |e| 1 + (e.min().unwrap() % 2)).unwrap();
        let cls = classify_pair(&h, &c, 2, 5, 1).unwrap();
        assert_eq!(same_witnesses(&h, &c, 2, 5).unwrap().len(), cls.same_count);
        for i in 1..=2 {
            for j in 1..=2 {
                if i == j {
                    continue;
                }
                assert_eq!(
                    cross_witnesses(&h, &c, 2, 5, i, j).unwrap().len(),
                    cls.cross_counts[i - 1][j - 1]
                );
            }
        }
    }

    #[test]
    fn threshold_modes() {
        let h = Hypergraph::complete(3, 9).unwrap();
        assert_eq!(ThresholdMode::Strict.threshold(&h, 7).unwrap(), 12 * 9);
        let scaled = ThresholdMode::default_scaled(2).unwrap();
        // Fraction 1/6: ceil(7/6) = 2; empty commons clamp to 1.
        assert_eq!(scaled.threshold(&h, 7).unwrap(), 2);
        assert_eq!(scaled.threshold(&h, 0).unwrap(), 1);
        assert_eq!(scaled.threshold(&h, 6).unwrap(), 1);
        if let ThresholdMode::Scaled(f) = &scaled {
            assert_eq!(crate::arith::format_rational(f), "1/6");
        } else {
            panic!("expected scaled mode");
        }
    }

    #[test]
    fn colouring_validation() {
        let h = Hypergraph::complete(3, 5).unwrap();
        assert!(Colouring::from_fn(&h, 2, |_| 3).is_err());
        assert!(Colouring::from_fn(&h, 0, |_| 1).is_err());
        let pairs: Vec<_> = h.edges().iter().map(|&e| (e, 1)).collect();
        let c = Colouring::from_pairs(&h, 2, &pairs).unwrap();
        assert_eq!(c.colour(vs(&[0, 1, 2])).unwrap(), 1);
        let flipped = c.with_colour(vs(&[0, 1, 2]), 2).unwrap();
        assert_eq!(flipped.colour(vs(&[0, 1, 2])).unwrap(), 2);
        assert_eq!(c.colour(vs(&[0, 1, 2])).unwrap(), 1);
        assert!(Colouring::from_pairs(&h, 2, &pairs[1..]).is_err());
    }
}
