//! Minimum l-degree audits: compute exact degrees, compare them against
//! the known lower-bound fractions, and watch how degrees fall when
//! vertices are removed.
//!
//! Run with: cargo run --example degree_audit

use biasmatch::arith::{binomial, format_rational, rational_from};
use biasmatch::extremal::gen_3uniform_ab;
use biasmatch::hypergraph::{Hypergraph, VertexSet};
use biasmatch::pipeline::eq1_lower_bound;

fn main() -> biasmatch::Result<()> {
    // The balanced 3-uniform construction on 12 vertices: two parts of
    // six, every edge crossing the parts.
    let (h, _, _) = gen_3uniform_ab(12)?;
    println!("balanced 3-uniform instance: k={} n={} with {} edges", h.k(), h.n(), h.edges().len());

    // Audit every degree index 1 <= l < k. For each l-set of vertices the
    // degree counts edges containing the whole set; the minimum over all
    // l-sets is the quantity the run hypothesis constrains.
    for l in 1..h.k() {
        let (delta, witness) = h.min_l_degree(l)?;
        let possible = binomial(h.n() - l, h.k() - l);
        let fraction = eq1_lower_bound(h.k(), l)?;
        let needed = &fraction * biasmatch::arith::Rational::from_integer(possible.clone());
        println!(
            "  l={l}: min degree {delta} at {witness} out of {possible} possible; \
             lower-bound fraction {} of that is {}",
            format_rational(&fraction),
            format_rational(&needed),
        );
        assert!(rational_from(delta) >= needed, "the balanced construction meets the bound");
    }

    // Degrees are monotone under vertex removal: deleting vertices can
    // only destroy edges. The removal bound used by the pipeline audit
    // quantifies the worst case; here we observe an actual drop.
    let (before, _) = h.min_l_degree(1)?;
    let survivor = h.remove_vertices(VertexSet::from_vertices([0, 3, 6])?);
    let (after, _) = survivor.min_l_degree(1)?;
    println!("removing 3 vertices: min 1-degree {before} -> {after}");
    assert!(after <= before);

    // A hand-built sparse instance fails the same audit.
    let sparse = Hypergraph::new(
        3,
        6,
        vec![
            VertexSet::from_vertices([0, 1, 2])?,
            VertexSet::from_vertices([3, 4, 5])?,
        ],
    )?;
    let (delta, witness) = sparse.min_l_degree(1)?;
    let possible = binomial(5, 2);
    println!(
        "sparse 2-edge instance: min 1-degree {delta} at {witness} of {possible} possible (audit fails)"
    );
    assert_eq!(delta, 1);

    Ok(())
}
