//! Gadgets are small sub-hypergraphs with exactly two perfect matchings;
//! when the matchings' colour profiles differ the gadget is "good", and
//! swapping which matching the final assembly keeps shifts the bias by a
//! controlled amount. The small shape spans 3k vertices around two
//! cross-typed vertex pairs; the big shape spans k^2 + k vertices by
//! stitching two anchor edges through same-typed pairs.
//!
//! Run with: cargo run --example build_gadgets

use biasmatch::colouring::{classify_pair, Colouring, PairType};
use biasmatch::gadgets::{build_s_gadget, build_small_gadget, GadgetShape};
use biasmatch::hypergraph::{Hypergraph, VertexSet};

fn edge(vs: &[usize]) -> VertexSet {
    VertexSet::from_vertices(vs.iter().copied()).expect("small literal edge")
}

fn main() -> biasmatch::Result<()> {
    small_gadget()?;
    big_gadget()?;
    Ok(())
}

/// Small gadget: two cross-typed pairs (0,1) and (2,3) plus a spine
/// vertex 8 completing them to the anchor edges {0,2,8} and {1,3,8}.
fn small_gadget() -> biasmatch::Result<()> {
    let h = Hypergraph::new(
        3,
        9,
        vec![
            edge(&[0, 4, 5]),
            edge(&[1, 4, 5]),
            edge(&[2, 6, 7]),
            edge(&[3, 6, 7]),
            edge(&[0, 2, 8]),
            edge(&[1, 3, 8]),
        ],
    )?;
    let c = Colouring::from_pairs(
        &h,
        2,
        &[
            (edge(&[0, 4, 5]), 1),
            (edge(&[1, 4, 5]), 2),
            (edge(&[2, 6, 7]), 1),
            (edge(&[3, 6, 7]), 2),
            (edge(&[0, 2, 8]), 1),
            (edge(&[1, 3, 8]), 2),
        ],
    )?;

    // Both pairs look cross-coloured through their witnesses: the edge
    // completing via vertex 0 has colour 1, via vertex 1 colour 2.
    for (u, v) in [(0, 1), (2, 3)] {
        let cls = classify_pair(&h, &c, u, v, 1)?;
        assert!(cls.has_type(PairType::Cross(1, 2)));
    }

    // The builder picks the spine X = {8}, anchors {0,2,8} and {1,3,8},
    // and disjoint cross witnesses {4,5} and {6,7} for the two pairs.
    let g = build_small_gadget(&h, &c, [0, 1, 2, 3], 1, 2, 1)?
        .expect("this host has all the pieces");
    assert_eq!(g.shape, GadgetShape::Small);
    assert_eq!(g.vertex_set().len(), 3 * h.k());
    println!("small gadget on {} vertices: e={} f={}", g.vertex_set().len(), g.e, g.f);
    for link in &g.links {
        println!("  pair ({}, {}) linked through {}", link.anchor_e, link.anchor_f, link.link);
    }

    // Exactly two perfect matchings, by construction: keep e and route
    // every link around f, or the other way round.
    let (m_e, m_f) = g.perfect_matchings(h.k())?;
    println!(
        "  matching keeping e: {:?}",
        m_e.edges().iter().map(|e| e.to_string()).collect::<Vec<_>>()
    );
    println!(
        "  matching keeping f: {:?}",
        m_f.edges().iter().map(|e| e.to_string()).collect::<Vec<_>>()
    );

    // The goodness certificate records both matchings' colour profiles;
    // the gadget is good when they differ somewhere.
    let cert = g.certificate(h.k(), &c)?;
    println!(
        "  profiles {:?} vs {:?}, differing in colours {:?}",
        cert.profiles.0.counts(),
        cert.profiles.1.counts(),
        cert.differing_colours
    );
    assert!(cert.is_good());
    assert_eq!(cert.differing_colours, vec![1, 2]);
    Ok(())
}

/// Big gadget: anchors {0,1,2} and {3,4,5} stitched through the
/// same-typed pairs (0,3), (1,4), (2,5).
fn big_gadget() -> biasmatch::Result<()> {
    let mut edges = vec![edge(&[0, 1, 2]), edge(&[3, 4, 5])];
    let mut pairs = vec![(edge(&[0, 1, 2]), 1), (edge(&[3, 4, 5]), 2)];
    // One witness per pair; both completions share a colour, making the
    // pair Same-typed.
    for (u, v, w, colour) in [
        (0, 3, [6, 7], 1),
        (1, 4, [8, 9], 2),
        (2, 5, [10, 11], 1),
    ] {
        let through_u = edge(&[u, w[0], w[1]]);
        let through_v = edge(&[v, w[0], w[1]]);
        edges.push(through_u);
        edges.push(through_v);
        pairs.push((through_u, colour));
        pairs.push((through_v, colour));
    }
    let h = Hypergraph::new(3, 12, edges)?;
    let c = Colouring::from_pairs(&h, 2, &pairs)?;

    for (u, v) in [(0, 3), (1, 4), (2, 5)] {
        let cls = classify_pair(&h, &c, u, v, 1)?;
        assert!(cls.has_type(PairType::Same));
    }

    let g = build_s_gadget(&h, &c, edge(&[0, 1, 2]), edge(&[3, 4, 5]), 1)?
        .expect("sorted pairing succeeds here");
    assert_eq!(g.shape, GadgetShape::Big);
    assert_eq!(g.vertex_set().len(), h.k() * h.k() + h.k());
    println!(
        "big gadget on {} vertices with {} links",
        g.vertex_set().len(),
        g.links.len()
    );
    for link in &g.links {
        println!("  pair ({}, {}) linked through {}", link.anchor_e, link.anchor_f, link.link);
    }

    // The two matchings swap every link's side at once: one keeps anchor
    // e (colour 1) plus the f-side completions, the other keeps anchor f
    // (colour 2) plus the e-side completions.
    let cert = g.certificate(h.k(), &c)?;
    println!(
        "  profiles {:?} vs {:?}, differing in colours {:?}",
        cert.profiles.0.counts(),
        cert.profiles.1.counts(),
        cert.differing_colours
    );
    assert!(cert.is_good());

    // Structural validation: anchor disjointness, link pairing, and
    // membership of every gadget edge in the host.
    g.validate(&h)?;
    println!("  structure validated");
    Ok(())
}
