//! Vertex-pair classification: a pair (u, v) earns a type from the
//! colours seen on edges through the common neighbourhood of u and v. Many
//! witnesses of colour i on the u-side and colour j on the v-side make the
//! pair Cross(i, j); many same-coloured sides make it Same.
//!
//! Run with: cargo run --example classify_pairs

use biasmatch::colouring::{
    classify_all_pairs, classify_pair, same_witnesses, Colouring, PairType, ThresholdMode,
};
use biasmatch::hypergraph::{Hypergraph, VertexSet};

fn edge(vs: &[usize]) -> VertexSet {
    VertexSet::from_vertices(vs.iter().copied()).expect("small literal edge")
}

fn main() -> biasmatch::Result<()> {
    // A 3-uniform instance crafted so vertices 0 and 1 share two
    // witnesses {4,5} and {6,7}: completing either with 0 gives colour 1
    // and with 1 gives colour 2 — a Cross(1, 2) pair. Vertices 2 and 3
    // see the same colour on both sides — a Same pair.
    let h = Hypergraph::new(
        3,
        8,
        vec![
            edge(&[0, 4, 5]),
            edge(&[1, 4, 5]),
            edge(&[0, 6, 7]),
            edge(&[1, 6, 7]),
            edge(&[2, 4, 5]),
            edge(&[3, 4, 5]),
            edge(&[2, 6, 7]),
            edge(&[3, 6, 7]),
        ],
    )?;
    let c = Colouring::from_pairs(
        &h,
        2,
        &[
            (edge(&[0, 4, 5]), 1),
            (edge(&[1, 4, 5]), 2),
            (edge(&[0, 6, 7]), 1),
            (edge(&[1, 6, 7]), 2),
            (edge(&[2, 4, 5]), 1),
            (edge(&[3, 4, 5]), 1),
            (edge(&[2, 6, 7]), 2),
            (edge(&[3, 6, 7]), 2),
        ],
    )?;

    // The common neighbourhood of u and v collects the (k-1)-sets that
    // complete to an edge with u AND with v.
    let common = h.common_neighbourhood(0, 1)?;
    println!(
        "common neighbourhood of (0, 1): {:?}",
        common.iter().map(|s| s.to_string()).collect::<Vec<_>>()
    );
    assert_eq!(common.len(), 2);

    // Classify (0, 1) with a strict threshold of 1: both witnesses pair
    // colour 1 on the 0-side with colour 2 on the 1-side.
    let cls = classify_pair(&h, &c, 0, 1, 1)?;
    println!(
        "pair (0, 1): same {}, cross counts {:?}, types {:?}",
        cls.same_count, cls.cross_counts, cls.types
    );
    assert!(cls.has_type(PairType::Cross(1, 2)));
    assert!(!cls.has_type(PairType::Same));

    // Classify (2, 3): both sides always agree, so the pair is Same; the
    // witnesses themselves are listed on request.
    let cls = classify_pair(&h, &c, 2, 3, 1)?;
    assert!(cls.has_type(PairType::Same));
    let ws = same_witnesses(&h, &c, 2, 3)?;
    println!(
        "pair (2, 3) is Same via witnesses {:?}",
        ws.iter().map(|s| s.to_string()).collect::<Vec<_>>()
    );
    assert_eq!(ws.len(), 2);

    // The threshold scales with the common-neighbourhood size under the
    // scaled policy; the census runs every pair at once.
    let mode = ThresholdMode::default_scaled(c.r())?;
    let census = classify_all_pairs(&h, &c, &mode)?;
    let typed = census.iter().filter(|(_, _, cl)| !cl.types.is_empty()).count();
    println!(
        "census under {mode:?}: {} of {} pairs typed",
        typed,
        census.len()
    );
    for (u, v, cl) in census.iter().filter(|(_, _, cl)| !cl.types.is_empty()) {
        println!("  ({u}, {v}): {:?}", cl.types);
    }

    Ok(())
}
