//! The exactly balanced constructions: instances whose minimum degree
//! falls just short of the bias threshold and whose perfect matchings are
//! all perfectly balanced — no matching favours either colour by even one
//! edge. Plus the seeded random generators used for stress instances.
//!
//! Run with: cargo run --example extremal_constructions

use biasmatch::arith::{binomial, format_rational, ratio, rational_from, Rational};
use biasmatch::colouring::profile;
use biasmatch::extremal::{gen_3uniform_ab, gen_gprime, gen_random_dense, gen_random_uniform};
use biasmatch::oracle::enumerate_perfect_matchings;

fn main() -> biasmatch::Result<()> {
    balanced_graph()?;
    balanced_three_uniform()?;
    random_generators()?;
    Ok(())
}

/// Two-coloured graph on parts A, B with |B| = 3|A|: B-B edges get colour
/// 1, A-B edges colour 2, and A is independent.
fn balanced_graph() -> biasmatch::Result<()> {
    let n = 8;
    let (h, c, meta) = gen_gprime(n)?;
    println!(
        "balanced graph on n={n}: parts A={} B={}, {} edges",
        meta.part_a.unwrap(),
        meta.part_b.unwrap(),
        h.edges().len()
    );

    // Minimum degree is exactly 3n/4: A-vertices see all of B, B-vertices
    // see everyone but themselves minus nothing... but never inside A.
    let (delta, _) = h.min_l_degree(1)?;
    println!("  minimum degree {delta} = 3n/4 = {}", 3 * n / 4);
    assert_eq!(delta, 3 * n / 4);

    // Every perfect matching pairs each A-vertex into B (colour 2) and
    // the leftover B-vertices among themselves (colour 1): exactly n/4
    // edges of each colour, always.
    let all = enumerate_perfect_matchings(&h, None)?;
    for m in &all.matchings {
        let p = profile(m.edges(), &c)?;
        assert_eq!(p.counts(), [n / 4, n / 4]);
    }
    println!(
        "  all {} perfect matchings have profile [{}, {}]",
        all.matchings.len(),
        n / 4,
        n / 4
    );
    Ok(())
}

/// 3-uniform on equal parts A, B: all crossing triples, coloured by which
/// side holds two vertices.
fn balanced_three_uniform() -> biasmatch::Result<()> {
    let n = 12;
    let (h, c, _) = gen_3uniform_ab(n)?;
    let half = n / 2;

    // The minimum 1-degree is C(n/2, 2) + (n/2)(n/2 - 1), sitting above
    // the 3/4 barrier that separates balanced instances from biased ones.
    let (delta, _) = h.min_l_degree(1)?;
    let expected = half * (half - 1) / 2 + half * (half - 1);
    let barrier = ratio(3, 4)? * Rational::from_integer(binomial(n - 1, 2));
    println!(
        "balanced 3-uniform on n={n}: min 1-degree {delta} (expected {expected}), barrier (3/4)C(n-1,2) = {}",
        format_rational(&barrier)
    );
    assert_eq!(delta, expected);
    assert!(rational_from(delta) >= barrier);

    // Parity forces every perfect matching to use equally many 2-in-A and
    // 2-in-B edges.
    let all = enumerate_perfect_matchings(&h, None)?;
    for m in &all.matchings {
        let p = profile(m.edges(), &c)?;
        assert_eq!(p.counts(), [n / 6, n / 6]);
    }
    println!(
        "  all {} perfect matchings have profile [{}, {}]",
        all.matchings.len(),
        n / 6,
        n / 6
    );
    Ok(())
}

/// Seeded random instances: a plain density sample and a degree-repaired
/// one that tops up edges until a minimum-degree target holds.
fn random_generators() -> biasmatch::Result<()> {
    let (h, _, _) = gen_random_uniform(3, 10, &ratio(1, 2)?, 2, 42)?;
    println!(
        "uniform p=1/2 sample on 10 vertices: {} of {} possible edges",
        h.edges().len(),
        binomial(10, 3)
    );

    // Same seed, same instance — generation is reproducible.
    let (h2, _, _) = gen_random_uniform(3, 10, &ratio(1, 2)?, 2, 42)?;
    assert_eq!(h.edges(), h2.edges());

    // The dense generator guarantees min 2-degree >= (2/3)·C(n-2, 1) by
    // topping up missing edges deterministically.
    let target = ratio(2, 3)?;
    let (h, _, meta) = gen_random_dense(3, 12, 2, &target, 2, 7)?;
    let (delta, _) = h.min_l_degree(2)?;
    let needed = &target * Rational::from_integer(binomial(10, 1));
    println!(
        "dense sample on 12 vertices: min 2-degree {delta} >= {} (saturated: {:?})",
        format_rational(&needed),
        meta.saturated
    );
    assert!(rational_from(delta) >= needed);
    Ok(())
}
