//! Generators for the tight constructions where every perfect matching is
//! exactly colour-balanced, seeded random dense instances, and an
//! adversarial colouring probe that searches for colourings minimizing the
//! best achievable bias.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{binomial, rational_from, Rational};
use crate::colouring::Colouring;
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, VertexSet};
use crate::oracle::{find_perfect_matching, max_bias_perfect_matching};

/// Which generator produced an instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstructionKind {
    /// Two-coloured graph on parts A, B with |B| = 3|A|: all B–B edges red,
    /// all A–B edges blue, no A–A edges. Minimum degree exactly 3n/4 and
    /// every perfect matching has n/4 edges of each colour.
    BalancedGraph,
    /// 3-uniform hypergraph on equal parts A, B: all edges with at least
    /// one vertex in each part; 2-in-A edges red, 2-in-B edges blue. Every
    /// perfect matching has n/6 edges of each colour.
    BalancedThreeUniform,
    /// Seeded random edge set topped up greedily until a minimum-degree
    /// target is met, with an independent seeded uniform colouring.
    RandomDense,
    /// Seeded random edge set with exact inclusion probability, no degree
    /// repair.
    RandomUniform,
}

/// Metadata describing a generated instance.
#[derive(Clone, Debug, Serialize)]
pub struct Construction {
    pub kind: ConstructionKind,
    pub k: usize,
    pub n: usize,
    pub r: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
    #[serde(
        skip_serializing_if = "Option::is_none",
        with = "crate::arith::serde_opt_rational"
    )]
    pub target_fraction: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub part_a: Option<VertexSet>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub part_b: Option<VertexSet>,
    /// True when the degree target was still unmet on the complete
    /// hypergraph; never silent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub saturated: Option<bool>,
}

impl Construction {
    fn bare(kind: ConstructionKind, k: usize, n: usize, r: usize) -> Self {
        Construction {
            kind,
            k,
            n,
            r,
            l: None,
            target_fraction: None,
            seed: None,
            part_a: None,
            part_b: None,
            saturated: None,
        }
    }

    /// One-line comments embedded when the instance is written to a file.
    pub fn comment_lines(&self) -> Vec<String> {
        let mut out = vec![format!(
            "construction: {}",
            serde_json::to_string(&self.kind).unwrap().trim_matches('"')
        )];
        if let Some(seed) = self.seed {
            out.push(format!("seed: {seed}"));
        }
        if let (Some(a), Some(b)) = (self.part_a, self.part_b) {
            out.push(format!("parts: A={a} B={b}"));
        }
        if let Some(sat) = self.saturated {
            out.push(format!("saturated: {sat}"));
        }
        out
    }
}

/// The balanced two-coloured graph construction. Requires 4 | n.
///
/// Part A holds labels 0..n/4, part B the rest. Edges inside B are red
/// (colour 1), edges between A and B are blue (colour 2), and A is
/// independent. The minimum degree is exactly 3n/4, and every perfect
/// matching uses all of A (blue) and pairs the rest of B (red), giving
/// exactly n/4 edges of each colour.
pub fn gen_gprime(n: usize) -> Result<(Hypergraph, Colouring, Construction)> {
    if n < 4 || n % 4 != 0 {
        return Err(Error::invalid(format!("balanced graph construction needs 4 | n >= 4, got n={n}")));
    }
    let a_size = n / 4;
    let part_a = VertexSet::range(a_size)?;
    let part_b = VertexSet::range(n)?.difference(part_a);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if part_a.contains(u) && part_a.contains(v) {
                continue;
            }
            edges.push(VertexSet::from_vertices([u, v])?);
        }
    }
    let h = Hypergraph::new(2, n, edges)?;
    let c = Colouring::from_fn(&h, 2, |e| if e.is_subset_of(part_b) { 1 } else { 2 })?;
    let mut meta = Construction::bare(ConstructionKind::BalancedGraph, 2, n, 2);
    meta.part_a = Some(part_a);
    meta.part_b = Some(part_b);
    Ok((h, c, meta))
}

/// The balanced 3-uniform construction. Requires 6 | n.
///
/// Parts A and B of equal size n/2; the edges are exactly the triples with
/// at least one vertex in each part. Triples with two vertices in A are
/// red (colour 1), triples with two vertices in B are blue (colour 2). The
/// minimum vertex degree is C(n/2, 2) + (n/2)(n/2 − 1), and every perfect
/// matching has exactly n/6 edges of each colour.
pub fn gen_3uniform_ab(n: usize) -> Result<(Hypergraph, Colouring, Construction)> {
    if n < 6 || n % 6 != 0 {
        return Err(Error::invalid(format!("balanced 3-uniform construction needs 6 | n >= 6, got n={n}")));
    }
    let part_a = VertexSet::range(n / 2)?;
    let complete = Hypergraph::complete(3, n)?;
    let edges: Vec<_> = complete
        .edges()
        .iter()
        .copied()
        .filter(|e| {
            let in_a = e.intersection(part_a).len();
            in_a == 1 || in_a == 2
        })
        .collect();
    let h = Hypergraph::new(3, n, edges)?;
    let part_b = h.vertex_set().difference(part_a);
    let c = Colouring::from_fn(&h, 2, |e| {
        if e.intersection(part_a).len() == 2 {
            1
        } else {
            2
        }
    })?;
    let mut meta = Construction::bare(ConstructionKind::BalancedThreeUniform, 3, n, 2);
    meta.part_a = Some(part_a);
    meta.part_b = Some(part_b);
    Ok((h, c, meta))
}

/// Each k-subset drawn with exact probability p. The draw compares a
/// 64-bit stream value against floor(p·2^64), so inclusion is exact for
/// the given rational and reproducible per seed.
fn draw_edges(k: usize, n: usize, p: &Rational, rng: &mut ChaCha8Rng) -> Result<Vec<VertexSet>> {
    let zero = Rational::from_integer(0.into());
    let one = Rational::from_integer(1.into());
    if *p < zero || *p > one {
        return Err(Error::invalid("edge probability must lie in [0, 1]"));
    }
    let scale = num::BigInt::from(1u128 << 64);
    let threshold_big = (p.numer() * &scale) / p.denom();
    let threshold: u128 = threshold_big
        .try_into()
        .map_err(|_| Error::invalid("probability threshold out of range"))?;
    let all = Hypergraph::complete(k, n)?;
    Ok(all
        .edges()
        .iter()
        .copied()
        .filter(|_| u128::from(rng.gen::<u64>()) < threshold)
        .collect())
}

fn uniform_colouring(h: &Hypergraph, r: usize, rng: &mut ChaCha8Rng) -> Result<Colouring> {
    let pairs: Vec<_> = h
        .edges()
        .iter()
        .map(|&e| (e, rng.gen_range(1..=r)))
        .collect();
    Colouring::from_pairs(h, r, &pairs)
}

/// Seeded random instance with exact edge probability p and an independent
/// seeded uniform r-colouring. No degree repair.
pub fn gen_random_uniform(
    k: usize,
    n: usize,
    p: &Rational,
    r: usize,
    seed: u64,
) -> Result<(Hypergraph, Colouring, Construction)> {
    if r < 1 {
        return Err(Error::invalid("colour count r must be at least 1"));
    }
    let mut edge_rng = ChaCha8Rng::seed_from_u64(seed);
    edge_rng.set_stream(0);
    let edges = draw_edges(k, n, p, &mut edge_rng)?;
    let h = Hypergraph::new(k, n, edges)?;
    let mut colour_rng = ChaCha8Rng::seed_from_u64(seed);
    colour_rng.set_stream(1);
    let c = uniform_colouring(&h, r, &mut colour_rng)?;
    let mut meta = Construction::bare(ConstructionKind::RandomUniform, k, n, r);
    meta.seed = Some(seed);
    meta.target_fraction = Some(p.clone());
    Ok((h, c, meta))
}

/// Seeded random dense instance: edges drawn with probability equal to
/// `target_fraction`, then topped up greedily (lexicographically first
/// missing edge through the lexicographically least minimum-degree witness)
/// until the minimum l-degree reaches target_fraction·C(n−l, k−l). The
/// colouring is drawn from an independent stream over the final edge set,
/// so it does not depend on the repair history.
pub fn gen_random_dense(
    k: usize,
    n: usize,
    l: usize,
    target_fraction: &Rational,
    r: usize,
    seed: u64,
) -> Result<(Hypergraph, Colouring, Construction)> {
    if n % k != 0 {
        return Err(Error::invalid(format!("dense generator needs k | n, got k={k}, n={n}")));
    }
    if l < 1 || l >= k {
        return Err(Error::invalid(format!("need 1 <= l < k, got l={l}, k={k}")));
    }
    let zero = Rational::from_integer(0.into());
    let one = Rational::from_integer(1.into());
    if *target_fraction <= zero || *target_fraction > one {
        return Err(Error::invalid("target fraction must lie in (0, 1]"));
    }
    if r < 1 {
        return Err(Error::invalid("colour count r must be at least 1"));
    }

    let mut edge_rng = ChaCha8Rng::seed_from_u64(seed);
    edge_rng.set_stream(0);
    let mut edges = draw_edges(k, n, target_fraction, &mut edge_rng)?;
    let target = target_fraction * Rational::from_integer(binomial(n - l, k - l));
    let total_edges = binomial(n, k);
    let mut saturated = false;
    loop {
        let h = Hypergraph::new(k, n, edges.clone())?;
        let (d, witness) = h.min_l_degree(l)?;
        if rational_from(d) >= target {
            break;
        }
        if rational_from(h.num_edges()) >= Rational::from_integer(total_edges.clone()) {
            saturated = true;
            break;
        }
        let added = first_missing_edge_through(&h, witness)
            .ok_or_else(|| Error::invalid("minimum-degree witness already saturated"))?;
        edges.push(added);
    }

    let h = Hypergraph::new(k, n, edges)?;
    let mut colour_rng = ChaCha8Rng::seed_from_u64(seed);
    colour_rng.set_stream(1);
    let c = uniform_colouring(&h, r, &mut colour_rng)?;
    let mut meta = Construction::bare(ConstructionKind::RandomDense, k, n, r);
    meta.l = Some(l);
    meta.target_fraction = Some(target_fraction.clone());
    meta.seed = Some(seed);
    meta.saturated = Some(saturated);
    Ok((h, c, meta))
}

/// Lexicographically first non-edge containing the witness set. For a
/// fixed witness, ordering candidate completions lexicographically orders
/// the resulting full edges lexicographically as well.
fn first_missing_edge_through(h: &Hypergraph, witness: VertexSet) -> Option<VertexSet> {
    use itertools::Itertools;
    let missing = h.k() - witness.len();
    h.vertex_set()
        .difference(witness)
        .to_vec()
        .into_iter()
        .combinations(missing)
        .map(|extra| {
            let mut e = witness;
            for v in extra {
                e.insert(v);
            }
            e
        })
        .find(|e| !h.contains_edge(*e))
}

/// Outcome of the adversarial colouring search.
#[derive(Clone, Debug)]
pub struct ProbeResult {
    /// Best colouring found: it minimizes (exactly, when exhaustive) the
    /// maximum colour bias over all perfect matchings.
    pub colouring: Colouring,
    /// The oracle's maximum bias under that colouring.
    pub value: usize,
    /// Number of colourings evaluated.
    pub evaluations: u64,
    /// True when the search space was swept completely.
    pub exhaustive: bool,
    /// True when the budget ran out before the search finished.
    pub incomplete: bool,
}

/// Searches for an r-colouring minimizing the maximum colour bias over all
/// perfect matchings of `h`.
///
/// When r^m colourings fit in the evaluation budget the sweep is
/// exhaustive and the reported value exact (first minimizer in
/// lexicographic colour-vector order). Otherwise a deterministic local
/// search runs from `start` (or a seeded random colouring): passes flip one
/// edge at a time in lexicographic order, accepting non-worsening moves,
/// and stop after a pass without strict improvement or when the budget is
/// exhausted (flagged incomplete).
pub fn adversarial_colouring_search(
    h: &Hypergraph,
    r: usize,
    start: Option<&Colouring>,
    budget: u64,
    seed: u64,
) -> Result<ProbeResult> {
    if r < 1 {
        return Err(Error::invalid("colour count r must be at least 1"));
    }
    if budget == 0 {
        return Err(Error::invalid("evaluation budget must be positive"));
    }
    if find_perfect_matching(h)?.is_none() {
        return Err(Error::NoPerfectMatching(
            "the instance has no perfect matching to bias".into(),
        ));
    }
    if let Some(c) = start {
        if c.r() != r {
            return Err(Error::invalid(format!(
                "start colouring has r={}, probe asked for r={r}",
                c.r()
            )));
        }
    }
    let zero = Rational::from_integer(0.into());
    let evaluations = std::cell::Cell::new(0u64);
    let eval = |c: &Colouring| -> Result<usize> {
        evaluations.set(evaluations.get() + 1);
        Ok(max_bias_perfect_matching(h, c, &zero)?
            .expect("perfect matching existence already checked")
            .bias)
    };

    let m = h.num_edges();
    let space = num::BigInt::from(r).pow(m as u32);
    if space <= num::BigInt::from(budget) {
        // Exhaustive sweep in lexicographic colour-vector order.
        let mut digits = vec![1usize; m];
        let mut best: Option<(usize, Vec<usize>)> = None;
        loop {
            let c = colouring_from_digits(h, r, &digits)?;
            let value = eval(&c)?;
            if best.as_ref().map_or(true, |(b, _)| value < *b) {
                best = Some((value, digits.clone()));
            }
            if !increment(&mut digits, r) {
                break;
            }
        }
        let (value, digits) = best.expect("at least one colouring evaluated");
        return Ok(ProbeResult {
            colouring: colouring_from_digits(h, r, &digits)?,
            value,
            evaluations: evaluations.get(),
            exhaustive: true,
            incomplete: false,
        });
    }

    // Local search.
    let mut current = match start {
        Some(c) => c.clone(),
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(2);
            uniform_colouring(h, r, &mut rng)?
        }
    };
    let mut current_value = eval(&current)?;
    let mut incomplete = false;
    'passes: loop {
        let mut improved = false;
        for &e in h.edges() {
            let here = current.colour(e)?;
            for colour in 1..=r {
                if colour == here {
                    continue;
                }
                if evaluations.get() >= budget {
                    incomplete = true;
                    break 'passes;
                }
                let candidate = current.with_colour(e, colour)?;
                let value = eval(&candidate)?;
                if value <= current_value {
                    if value < current_value {
                        improved = true;
                    }
                    current = candidate;
                    current_value = value;
                }
            }
        }
        if !improved {
            break;
        }
    }
    Ok(ProbeResult {
        colouring: current,
        value: current_value,
        evaluations: evaluations.get(),
        exhaustive: false,
        incomplete,
    })
}

fn colouring_from_digits(h: &Hypergraph, r: usize, digits: &[usize]) -> Result<Colouring> {
    let pairs: Vec<_> = h
        .edges()
        .iter()
        .zip(digits)
        .map(|(&e, &c)| (e, c))
        .collect();
    Colouring::from_pairs(h, r, &pairs)
}

/// Odometer step over colour vectors; false when the space is exhausted.
fn increment(digits: &mut [usize], r: usize) -> bool {
    for d in digits.iter_mut().rev() {
        if *d < r {
            *d += 1;
            return true;
        }
        *d = 1;
    }
    false
}
