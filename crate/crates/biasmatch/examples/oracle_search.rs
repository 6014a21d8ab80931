//! The exact matching oracle: find one perfect matching, enumerate all of
//! them, maximize colour bias, and ask targeted bias queries — all by
//! exhaustive backtracking over bitmask edge sets.
//!
//! Run with: cargo run --example oracle_search

use biasmatch::colouring::{profile, Colouring};
use biasmatch::hypergraph::{Hypergraph, VertexSet};
use biasmatch::oracle::{
    enumerate_perfect_matchings, find_biased_pm, find_perfect_matching, max_bias_perfect_matching,
};

fn main() -> biasmatch::Result<()> {
    // Complete 3-uniform hypergraph on 6 vertices, coloured by whether the
    // edge contains vertex 0: a deliberately lopsided 2-colouring.
    let h = Hypergraph::complete(3, 6)?;
    let pairs: Vec<(VertexSet, usize)> = h
        .edges()
        .iter()
        .map(|&e| (e, if e.contains(0) { 1 } else { 2 }))
        .collect();
    let c = Colouring::from_pairs(&h, 2, &pairs)?;

    // Any single perfect matching.
    let m = find_perfect_matching(&h)?.expect("complete instance has matchings");
    println!("one perfect matching: {:?}", m.edges().iter().map(|e| e.to_string()).collect::<Vec<_>>());

    // All of them. A perfect matching here picks 2 disjoint triples; the
    // count for the complete 3-uniform instance on 6 vertices is
    // C(6,3)/2 = 10.
    let all = enumerate_perfect_matchings(&h, None)?;
    println!("total perfect matchings: {}", all.matchings.len());
    assert_eq!(all.matchings.len(), 10);
    assert!(!all.truncated);

    // Maximum bias: the most edges of a single colour any perfect
    // matching achieves. Exactly one edge of each matching contains
    // vertex 0, so the best profile is one edge per colour and the bias
    // never exceeds 1.
    let zero = biasmatch::arith::Rational::from_integer(0.into());
    let best = max_bias_perfect_matching(&h, &c, &zero)?.expect("has matchings");
    println!(
        "maximum bias {} in colour {} with profile {:?}",
        best.bias,
        best.bias_colour,
        best.profile.counts()
    );
    assert_eq!(best.bias, 1);

    // Targeted query: is there a perfect matching with at least 2 edges
    // of one colour? No — and the oracle proves it exhaustively.
    let target2 = find_biased_pm(&h, &c, 2)?;
    println!("matching with bias >= 2 exists: {}", target2.is_some());
    assert!(target2.is_none());

    // Flip to a colouring where bias 2 is achievable: colour by parity of
    // the smallest vertex.
    let pairs: Vec<(VertexSet, usize)> = h
        .edges()
        .iter()
        .map(|&e| (e, 1 + e.to_vec()[0] % 2))
        .collect();
    let c2 = Colouring::from_pairs(&h, 2, &pairs)?;
    let witness = find_biased_pm(&h, &c2, 2)?.expect("a monochromatic matching exists");
    let p = profile(witness.edges(), &c2)?;
    println!(
        "under the parity colouring, a bias-2 matching: {:?} with profile {:?}",
        witness.edges().iter().map(|e| e.to_string()).collect::<Vec<_>>(),
        p.counts()
    );
    assert_eq!(p.counts().iter().max(), Some(&2));

    // Matchings validate themselves against their host: edges must be
    // host edges, pairwise disjoint, and cover every vertex.
    witness.validate_perfect(&h)?;
    println!("witness validated as a perfect matching of the host");

    Ok(())
}
