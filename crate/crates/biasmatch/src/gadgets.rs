//! Gadgets: small subhypergraphs with two anchor edges and link sets,
//! admitting exactly two perfect matchings. A gadget whose two matchings
//! have different colour profiles ("good") lets the pipeline swap one for
//! the other and shift a matching's colour balance.

use serde::Serialize;

use crate::colouring::{
    classify_pair, cross_witnesses, profile, profiles_differ_in, same_witnesses, ColourProfile,
    Colouring, PairType,
};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, VertexSet};
use crate::oracle::Matching;

/// The two gadget shapes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GadgetShape {
    /// Anchors share no vertices; k links pair them off vertex by vertex.
    /// Spans k²+k vertices with 2+2k edges.
    Big,
    /// Anchors share exactly k−2 vertices; two links join the four
    /// remaining anchor vertices. Spans 3k vertices with 2+4 edges.
    Small,
}

/// One link strand: a (k−1)-set joinable to one vertex of each anchor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GadgetLink {
    /// The paired vertex inside anchor e.
    pub anchor_e: usize,
    /// The paired vertex inside anchor f.
    pub anchor_f: usize,
    /// The shared link set; both completions are host edges.
    pub link: VertexSet,
}

impl GadgetLink {
    /// The edge through the e-side anchor vertex.
    pub fn e_side(&self) -> VertexSet {
        self.link.with(self.anchor_e)
    }

    /// The edge through the f-side anchor vertex.
    pub fn f_side(&self) -> VertexSet {
        self.link.with(self.anchor_f)
    }
}

/// A gadget: two anchor edges and their link strands. The edge set of the
/// gadget is exactly the listed edges, not a full induced subhypergraph;
/// that is what makes the two-matchings property exact.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Gadget {
    pub shape: GadgetShape,
    pub e: VertexSet,
    pub f: VertexSet,
    pub links: Vec<GadgetLink>,
}

/// Evidence that a gadget is good: its two perfect matchings, their colour
/// profiles, and the colours where the profiles disagree (non-empty iff the
/// gadget is good).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoodnessCertificate {
    pub matchings: (Matching, Matching),
    pub profiles: (ColourProfile, ColourProfile),
    pub differing_colours: Vec<usize>,
}

impl GoodnessCertificate {
    pub fn is_good(&self) -> bool {
        !self.differing_colours.is_empty()
    }
}

impl Gadget {
    /// The gadget's edges: both anchors, then each link's two completions,
    /// in link order.
    pub fn edge_list(&self) -> Vec<VertexSet> {
        let mut edges = vec![self.e, self.f];
        for l in &self.links {
            edges.push(l.e_side());
            edges.push(l.f_side());
        }
        edges
    }

    /// Union of all gadget edges: k²+k vertices for Big, 3k for Small.
    pub fn vertex_set(&self) -> VertexSet {
        self.edge_list()
            .into_iter()
            .fold(VertexSet::new(), |acc, e| acc.union(e))
    }

    /// Structural validity plus membership of every listed edge in the host.
    pub fn validate(&self, host: &Hypergraph) -> Result<()> {
        self.validate_structure(host.k())?;
        for e in self.edge_list() {
            if !host.contains_edge(e) {
                return Err(Error::invalid(format!("gadget edge {e} is not a host edge")));
            }
        }
        Ok(())
    }

    /// Shape, disjointness, and pairing checks that need no host.
    pub fn validate_structure(&self, k: usize) -> Result<()> {
        if self.e.len() != k || self.f.len() != k {
            return Err(Error::invalid("anchor edges must have k vertices"));
        }
        if self.e == self.f {
            return Err(Error::invalid("anchor edges must be distinct"));
        }
        let shared = self.e.intersection(self.f);
        let (want_links, want_shared) = match self.shape {
            GadgetShape::Big => (k, 0),
            GadgetShape::Small => (2, k - 2),
        };
        if shared.len() != want_shared {
            return Err(Error::invalid(format!(
                "anchors share {} vertices, expected {want_shared}",
                shared.len()
            )));
        }
        if self.links.len() != want_links {
            return Err(Error::invalid(format!(
                "{} links, expected {want_links}",
                self.links.len()
            )));
        }
        let anchors = self.e.union(self.f);
        let mut seen_links = VertexSet::new();
        let mut seen_e = VertexSet::new();
        let mut seen_f = VertexSet::new();
        for l in &self.links {
            if !self.e.contains(l.anchor_e) || shared.contains(l.anchor_e) {
                return Err(Error::invalid(format!(
                    "link anchor {} is not a private vertex of anchor e",
                    l.anchor_e
                )));
            }
            if !self.f.contains(l.anchor_f) || shared.contains(l.anchor_f) {
                return Err(Error::invalid(format!(
                    "link anchor {} is not a private vertex of anchor f",
                    l.anchor_f
                )));
            }
            if seen_e.contains(l.anchor_e) || seen_f.contains(l.anchor_f) {
                return Err(Error::invalid("anchor vertex used by two links"));
            }
            seen_e.insert(l.anchor_e);
            seen_f.insert(l.anchor_f);
            if l.link.len() != k - 1 {
                return Err(Error::invalid(format!(
                    "link set {} must have k-1 vertices",
                    l.link
                )));
            }
            if !l.link.is_disjoint(anchors) {
                return Err(Error::invalid(format!(
                    "link set {} meets an anchor edge",
                    l.link
                )));
            }
            if !l.link.is_disjoint(seen_links) {
                return Err(Error::invalid(format!("link set {} meets another link", l.link)));
            }
            seen_links = seen_links.union(l.link);
        }
        // Every private anchor vertex must be paired off by some link.
        if seen_e != self.e.difference(shared) || seen_f != self.f.difference(shared) {
            return Err(Error::invalid("links do not pair off all private anchor vertices"));
        }
        Ok(())
    }

    /// The gadget's exactly two perfect matchings: one keeps anchor e and
    /// routes every link through its f-side vertex, the other keeps anchor f
    /// and routes every link through its e-side vertex.
    pub fn perfect_matchings(&self, k: usize) -> Result<(Matching, Matching)> {
        self.validate_structure(k)?;
        let mut with_e = vec![self.e];
        let mut with_f = vec![self.f];
        for l in &self.links {
            with_e.push(l.f_side());
            with_f.push(l.e_side());
        }
        Ok((Matching::new(with_e)?, Matching::new(with_f)?))
    }

    /// Colour-profile evidence for this gadget under a colouring.
    pub fn certificate(&self, k: usize, c: &Colouring) -> Result<GoodnessCertificate> {
        let (m_e, m_f) = self.perfect_matchings(k)?;
        let p_e = profile(m_e.edges(), c)?;
        let p_f = profile(m_f.edges(), c)?;
        let differing_colours = profiles_differ_in(&p_e, &p_f)?;
        Ok(GoodnessCertificate {
            matchings: (m_e, m_f),
            profiles: (p_e, p_f),
            differing_colours,
        })
    }

    /// A certificate when the gadget is good, or `None` when its two
    /// matchings have identical colour profiles.
    pub fn is_good(&self, k: usize, c: &Colouring) -> Result<Option<GoodnessCertificate>> {
        let cert = self.certificate(k, c)?;
        Ok(cert.is_good().then_some(cert))
    }

    /// The gadget as a standalone hypergraph on its own vertices (labels
    /// preserved), suitable for exhaustive matching enumeration.
    pub fn subhypergraph(&self, k: usize) -> Result<Hypergraph> {
        Hypergraph::on_vertices(k, self.vertex_set(), self.edge_list())
    }
}

/// Builds the small (3k-vertex) gadget from two cross-typed vertex pairs.
///
/// Given four distinct vertices where both (v1, v2) and (v3, v4) carry
/// cross type (i, j) at the threshold, finds the lexicographically first
/// (k−2)-set X with X∪{v1,v3} and X∪{v2,v4} both edges, then the first
/// cross witnesses for each pair that keep everything disjoint. Returns
/// `None` when any step has no candidate at this scale.
pub fn build_small_gadget(
    host: &Hypergraph,
    c: &Colouring,
    quad: [usize; 4],
    i: usize,
    j: usize,
    threshold: usize,
) -> Result<Option<Gadget>> {
    let [v1, v2, v3, v4] = quad;
    let quad_set = VertexSet::from_vertices(quad)?;
    if quad_set.len() != 4 {
        return Err(Error::invalid("the four gadget vertices must be distinct"));
    }
    if !quad_set.is_subset_of(host.vertex_set()) {
        return Err(Error::invalid("gadget vertex outside the hypergraph"));
    }
    if i == j || i < 1 || i > c.r() || j < 1 || j > c.r() {
        return Err(Error::invalid("cross colours must be distinct and in range"));
    }
    for (a, b) in [(v1, v2), (v3, v4)] {
        let cls = classify_pair(host, c, a, b, threshold)?;
        if !cls.has_type(PairType::Cross(i, j)) {
            return Err(Error::invalid(format!(
                "pair ({a}, {b}) does not have cross type ({i}, {j}) at threshold {threshold}"
            )));
        }
    }

    let k = host.k();
    let others = host.vertex_set().difference(quad_set);
    let mut chosen_x = None;
    // Lexicographically first X making both anchors host edges.
    for x in subsets_of(others, k - 2) {
        let a = x.with(v1).with(v3);
        let b = x.with(v2).with(v4);
        if host.contains_edge(a) && host.contains_edge(b) {
            chosen_x = Some(x);
            break;
        }
    }
    let Some(x) = chosen_x else {
        return Ok(None);
    };
    let anchor_e = x.with(v1).with(v3);
    let anchor_f = x.with(v2).with(v4);
    let blocked = anchor_e.union(anchor_f);

    let Some(t12) = cross_witnesses(host, c, v1, v2, i, j)?
        .into_iter()
        .find(|t| t.is_disjoint(blocked))
    else {
        return Ok(None);
    };
    let blocked = blocked.union(t12);
    let Some(t34) = cross_witnesses(host, c, v3, v4, i, j)?
        .into_iter()
        .find(|t| t.is_disjoint(blocked))
    else {
        return Ok(None);
    };

    let gadget = Gadget {
        shape: GadgetShape::Small,
        e: anchor_e,
        f: anchor_f,
        links: vec![
            GadgetLink {
                anchor_e: v1,
                anchor_f: v2,
                link: t12,
            },
            GadgetLink {
                anchor_e: v3,
                anchor_f: v4,
                link: t34,
            },
        ],
    };
    gadget.validate(host)?;
    Ok(Some(gadget))
}

/// Builds the big (k²+k-vertex) gadget over two disjoint anchor edges by
/// pairing their vertices in sorted order and greedily choosing, for each
/// pair, the first same-colour link disjoint from everything chosen so far.
///
/// Requires each paired (u, v) to carry the same-colour type at the
/// threshold. If the sorted pairing fails, all k cyclic shifts of it are
/// tried before giving up. Returns `None` when no shift completes.
pub fn build_s_gadget(
    host: &Hypergraph,
    c: &Colouring,
    e: VertexSet,
    f: VertexSet,
    threshold: usize,
) -> Result<Option<Gadget>> {
    if !host.contains_edge(e) || !host.contains_edge(f) {
        return Err(Error::invalid("both anchors must be host edges"));
    }
    if !e.is_disjoint(f) {
        return Err(Error::invalid(format!(
            "anchor edges overlap at {}",
            e.intersection(f)
        )));
    }
    let k = host.k();
    let us = e.to_vec();
    let vs = f.to_vec();
    'shifts: for shift in 0..k {
        let mut links = Vec::with_capacity(k);
        let mut blocked = e.union(f);
        for (pos, &u) in us.iter().enumerate() {
            let v = vs[(pos + shift) % k];
            let cls = classify_pair(host, c, u, v, threshold)?;
            if !cls.has_type(PairType::Same) {
                continue 'shifts;
            }
            let Some(t) = same_witnesses(host, c, u, v)?
                .into_iter()
                .find(|t| t.is_disjoint(blocked))
            else {
                continue 'shifts;
            };
            blocked = blocked.union(t);
            links.push(GadgetLink {
                anchor_e: u,
                anchor_f: v,
                link: t,
            });
        }
        let gadget = Gadget {
            shape: GadgetShape::Big,
            e,
            f,
            links,
        };
        gadget.validate(host)?;
        return Ok(Some(gadget));
    }
    Ok(None)
}

/// All `size`-subsets of a vertex set in lexicographic order.
fn subsets_of(set: VertexSet, size: usize) -> Vec<VertexSet> {
    use itertools::Itertools;
    set.to_vec()
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::enumerate_perfect_matchings;

    fn vs(labels: &[usize]) -> VertexSet {
        VertexSet::from_vertices(labels.iter().copied()).unwrap()
    }

    /// Nine vertices, six edges: anchors {0,2,8} and {1,3,8} share vertex 8;
    /// links {4,5} and {6,7} give each pair a single cross witness.
    fn small_fixture() -> (Hypergraph, Colouring) {
        let edges = vec![
            vs(&[0, 4, 5]),
            vs(&[1, 4, 5]),
            vs(&[2, 6, 7]),
            vs(&[3, 6, 7]),
            vs(&[0, 2, 8]),
            vs(&[1, 3, 8]),
        ];
        let h = Hypergraph::new(3, 9, edges).unwrap();
        let c = Colouring::from_pairs(
            &h,
            2,
            &[
                (vs(&[0, 4, 5]), 1),
                (vs(&[1, 4, 5]), 2),
                (vs(&[2, 6, 7]), 1),
                (vs(&[3, 6, 7]), 2),
                (vs(&[0, 2, 8]), 1),
                (vs(&[1, 3, 8]), 2),
            ],
        )
        .unwrap();
        (h, c)
    }

    #[test]
    fn small_gadget_from_fixture() {
        let (h, c) = small_fixture();
        let g = build_small_gadget(&h, &c, [0, 1, 2, 3], 1, 2, 1)
            .unwrap()
            .expect("fixture admits exactly one gadget");
        assert_eq!(g.shape, GadgetShape::Small);
        assert_eq!(g.e, vs(&[0, 2, 8]));
        assert_eq!(g.f, vs(&[1, 3, 8]));
        assert_eq!(g.links[0].link, vs(&[4, 5]));
        assert_eq!(g.links[1].link, vs(&[6, 7]));
        assert_eq!(g.vertex_set().len(), 9);
        g.validate(&h).unwrap();

        let cert = g.is_good(3, &c).unwrap().expect("gadget is good");
        assert_eq!(cert.differing_colours, vec![1, 2]);
        assert_eq!(cert.profiles.0.counts(), &[1, 2]);
        assert_eq!(cert.profiles.1.counts(), &[2, 1]);
    }

    #[test]
    fn small_gadget_matchings_are_the_only_two() {
        let (h, c) = small_fixture();
        let g = build_small_gadget(&h, &c, [0, 1, 2, 3], 1, 2, 1)
            .unwrap()
            .unwrap();
        let sub = g.subhypergraph(3).unwrap();
        let all = enumerate_perfect_matchings(&sub, None).unwrap();
        assert_eq!(all.matchings.len(), 2);
        let (m_e, m_f) = g.perfect_matchings(3).unwrap();
        assert!(all.matchings.contains(&m_e));
        assert!(all.matchings.contains(&m_f));
    }

    #[test]
    fn small_gadget_none_without_common_anchor_set() {
        let (h, c) = small_fixture();
        // Delete the anchor edge through {0, 2}: no X remains.
        let edges: Vec<_> = h
            .edges()
            .iter()
            .copied()
            .filter(|&e| e != vs(&[0, 2, 8]))
            .collect();
        let h2 = Hypergraph::new(3, 9, edges).unwrap();
        let pairs: Vec<_> = h2
            .edges()
            .iter()
            .map(|&e| (e, c.colour(e).unwrap()))
            .collect();
        let c2 = Colouring::from_pairs(&h2, 2, &pairs).unwrap();
        let got = build_small_gadget(&h2, &c2, [0, 1, 2, 3], 1, 2, 1).unwrap();
        assert!(got.is_none());
    }

    #[test]
    fn small_gadget_rejects_untyped_pairs() {
        let (h, c) = small_fixture();
        // (0, 3) has no cross witnesses at all.
        assert!(build_small_gadget(&h, &c, [0, 3, 2, 1], 1, 2, 1).is_err());
        assert!(build_small_gadget(&h, &c, [0, 0, 2, 3], 1, 2, 1).is_err());
        assert!(build_small_gadget(&h, &c, [0, 1, 2, 3], 1, 1, 1).is_err());
    }

    #[test]
    fn small_gadget_on_dense_instance_finds_shared_set() {
        // Dense instance: complete minus one edge, coloured so (0,1) and
        // (2,3) are cross-typed; the shared-set search must succeed.
        let edges: Vec<_> = Hypergraph::complete(3, 9)
            .unwrap()
            .edges()
            .iter()
            .copied()
            .filter(|&e| e != vs(&[4, 5, 6]))
            .collect();
        let h = Hypergraph::new(3, 9, edges).unwrap();
        let c = Colouring::from_fn(&h, 2, |e| {
            if e.contains(0) {
                1
            } else if e.contains(1) {
                2
            } else {
                1 + e.min().unwrap() % 2
            }
        })
        .unwrap();
        let g = build_small_gadget(&h, &c, [0, 1, 2, 3], 1, 2, 2)
            .unwrap()
            .expect("dense instance admits a gadget");
        g.validate(&h).unwrap();
        assert_eq!(g.e.intersection(g.f).len(), 1);
        assert!(g.is_good(3, &c).unwrap().is_some());
    }

    /// All edges colour 1 except one designated anchor, which gets colour 2.
    fn near_mono(n: usize, special: VertexSet) -> (Hypergraph, Colouring) {
        let h = Hypergraph::complete(3, n).unwrap();
        let c = Colouring::from_fn(&h, 2, |e| if e == special { 2 } else { 1 }).unwrap();
        (h, c)
    }

    #[test]
    fn s_gadget_on_near_monochromatic_host() {
        let (h, c) = near_mono(15, vs(&[3, 4, 5]));
        let g = build_s_gadget(&h, &c, vs(&[0, 1, 2]), vs(&[3, 4, 5]), 1)
            .unwrap()
            .expect("same-colour witnesses abound");
        assert_eq!(g.shape, GadgetShape::Big);
        assert_eq!(g.vertex_set().len(), 12);
        g.validate(&h).unwrap();
        // Good exactly because the anchors differ in colour.
        let cert = g.is_good(3, &c).unwrap().expect("anchors differ in colour");
        assert_eq!(cert.differing_colours, vec![1, 2]);

        // The links pair sorted anchor vertices and are greedily first.
        assert_eq!(g.links[0].anchor_e, 0);
        assert_eq!(g.links[0].anchor_f, 3);
        assert_eq!(g.links[0].link, vs(&[6, 7]));
        assert_eq!(g.links[1].link, vs(&[8, 9]));
        assert_eq!(g.links[2].link, vs(&[10, 11]));
    }

    #[test]
    fn s_gadget_matchings_and_goodness_equivalence() {
        let (h, c) = near_mono(15, vs(&[3, 4, 5]));
        let g = build_s_gadget(&h, &c, vs(&[0, 1, 2]), vs(&[3, 4, 5]), 1)
            .unwrap()
            .unwrap();
        let sub = g.subhypergraph(3).unwrap();
        let all = enumerate_perfect_matchings(&sub, None).unwrap();
        assert_eq!(all.matchings.len(), 2);

        // Same instance but the anchors share their colour: not good.
        let mono = Colouring::from_fn(&h, 2, |_| 1).unwrap();
        let g2 = build_s_gadget(&h, &mono, vs(&[0, 1, 2]), vs(&[3, 4, 5]), 1)
            .unwrap()
            .unwrap();
        assert!(g2.is_good(3, &mono).unwrap().is_none());
        let cert = g2.certificate(3, &mono).unwrap();
        assert_eq!(cert.profiles.0, cert.profiles.1);
    }

    #[test]
    fn s_gadget_none_without_witnesses() {
        let h = Hypergraph::new(3, 6, vec![vs(&[0, 1, 2]), vs(&[3, 4, 5])]).unwrap();
        let c = Colouring::from_fn(&h, 2, |_| 1).unwrap();
        let got = build_s_gadget(&h, &c, vs(&[0, 1, 2]), vs(&[3, 4, 5]), 1).unwrap();
        assert!(got.is_none());
        assert!(build_s_gadget(&h, &c, vs(&[0, 1, 2]), vs(&[2, 3, 4]), 1).is_err());
    }

    #[test]
    fn cyclic_shift_rescues_a_blocked_pairing() {
        // Sparse host where the sorted pairing (0,3),(1,4),(2,5) dies at its
        // first pair (common neighbourhood of (0,3) is empty) but the shift
        // (0,4),(1,5),(2,3) has one same-colour witness per pair.
        let edges = vec![
            vs(&[0, 1, 2]),
            vs(&[3, 4, 5]),
            vs(&[0, 6, 7]),
            vs(&[4, 6, 7]),
            vs(&[1, 8, 9]),
            vs(&[5, 8, 9]),
            vs(&[2, 10, 11]),
            vs(&[3, 10, 11]),
        ];
        let h = Hypergraph::new(3, 12, edges).unwrap();
        let c = Colouring::from_fn(&h, 2, |e| if e == vs(&[3, 4, 5]) { 2 } else { 1 }).unwrap();
        let g = build_s_gadget(&h, &c, vs(&[0, 1, 2]), vs(&[3, 4, 5]), 1)
            .unwrap()
            .expect("a cyclic shift admits the gadget");
        g.validate(&h).unwrap();
        let pairs: Vec<_> = g.links.iter().map(|l| (l.anchor_e, l.anchor_f)).collect();
        assert_eq!(pairs, vec![(0, 4), (1, 5), (2, 3)]);
        assert!(g.is_good(3, &c).unwrap().is_some());
    }

    #[test]
    fn validator_rejects_malformed_gadgets() {
        let (h, c) = small_fixture();
        let mut g = build_small_gadget(&h, &c, [0, 1, 2, 3], 1, 2, 1)
            .unwrap()
            .unwrap();
        g.links[1].link = vs(&[4, 5]);
        assert!(g.validate(&h).is_err());
        assert!(g.perfect_matchings(3).is_err());
    }
}
