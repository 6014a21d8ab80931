//! The top-level bias pipeline: harvest vertex-disjoint good gadgets,
//! choose the colour backed by the most gadgets, assemble the two candidate
//! matchings that differ on every chosen gadget, extend them by a perfect
//! matching of the remainder, and certify the achieved colour bias against
//! the exact theorem bound.

use serde::Serialize;
use std::fmt;

use crate::arith::{binomial, floor_to_usize, rational_from, Rational};
use crate::colouring::{classify_pair, Colouring, PairType, ThresholdMode};
use crate::error::{Error, Result};
use crate::gadgets::{build_s_gadget, build_small_gadget, Gadget, GoodnessCertificate};
use crate::hypergraph::{Hypergraph, VertexSet};
use crate::oracle::{
    find_biased_pm_with, find_perfect_matching_with, BiasResult, Matching, SearchConfig,
};

/// Exact value of the guaranteed bias: n/(rk) + ηn/(8r(r−1)k^k(k²+k)).
pub fn theorem_bias_bound(n: usize, k: usize, r: usize, eta: &Rational) -> Result<Rational> {
    if k < 2 {
        return Err(Error::invalid("uniformity k must be at least 2"));
    }
    if n % k != 0 {
        return Err(Error::invalid(format!("k={k} must divide n={n}")));
    }
    if r < 2 {
        return Err(Error::invalid("the bound needs at least two colours"));
    }
    let zero = Rational::from_integer(0.into());
    if *eta <= zero {
        return Err(Error::invalid("eta must be positive"));
    }
    let base = rational_from(n) / rational_from(r * k);
    let k_to_k = num::BigInt::from(k).pow(k as u32);
    let denom = Rational::from_integer(
        num::BigInt::from(8 * r * (r - 1)) * k_to_k * num::BigInt::from(k * k + k),
    );
    Ok(base + eta * rational_from(n) / denom)
}

/// The conjectured minimum-degree fraction used as the default hypothesis
/// threshold: max{1/2, 1 − ((k−1)/k)^(k−ℓ)}.
pub fn eq1_lower_bound(k: usize, l: usize) -> Result<Rational> {
    if k < 2 || l < 1 || l >= k {
        return Err(Error::invalid(format!("need 1 <= l < k, got l={l}, k={k}")));
    }
    let half = Rational::new(1.into(), 2.into());
    let e = (k - l) as u32;
    let pow = Rational::new(
        num::BigInt::from(k - 1).pow(e),
        num::BigInt::from(k).pow(e),
    );
    let alt = Rational::from_integer(1.into()) - pow;
    Ok(half.max(alt))
}

/// Parameters steering a pipeline run.
#[derive(Clone, Debug, Serialize)]
pub struct RunParams {
    /// Degree index of the hypothesis audit (1 ≤ l < k).
    pub l: usize,
    /// Bias surplus parameter; requires c_threshold + eta < 1.
    #[serde(with = "crate::arith::serde_rational")]
    pub eta: Rational,
    /// Colour count; must match the instance colouring and be ≥ 2.
    pub r: usize,
    /// Overrides the harvest count t (must be ≥ 1 when present).
    pub t_override: Option<usize>,
    /// Pair-classification threshold policy.
    pub threshold_mode: ThresholdMode,
    /// Minimum-degree fraction for the hypothesis audit; defaults to
    /// `eq1_lower_bound(k, l)`.
    #[serde(with = "crate::arith::serde_opt_rational")]
    pub c_threshold: Option<Rational>,
    /// Echoed into the report; the pipeline itself is deterministic.
    pub seed: u64,
    /// Oracle node budget per search, if any.
    pub budget: Option<u64>,
}

impl RunParams {
    pub fn new(l: usize, eta: Rational, r: usize) -> Self {
        RunParams {
            l,
            eta,
            r,
            t_override: None,
            threshold_mode: ThresholdMode::Strict,
            c_threshold: None,
            seed: 0,
            budget: None,
        }
    }

    pub fn with_threshold_mode(mut self, mode: ThresholdMode) -> Self {
        self.threshold_mode = mode;
        self
    }

    pub fn with_t_override(mut self, t: usize) -> Self {
        self.t_override = Some(t);
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = Some(budget);
        self
    }

    fn search_config(&self) -> SearchConfig {
        SearchConfig {
            budget: self.budget,
        }
    }

    /// Validates ranges against a host and resolves the effective
    /// hypothesis fraction.
    fn resolve(&self, k: usize) -> Result<Rational> {
        if self.r < 2 {
            return Err(Error::invalid("pipeline needs at least two colours"));
        }
        if self.l < 1 || self.l >= k {
            return Err(Error::invalid(format!(
                "degree index l={} must satisfy 1 <= l < k={k}",
                self.l
            )));
        }
        if let Some(0) = self.t_override {
            return Err(Error::invalid("t override must be at least 1"));
        }
        let zero = Rational::from_integer(0.into());
        if self.eta <= zero {
            return Err(Error::invalid("eta must be positive"));
        }
        let c_thr = match &self.c_threshold {
            Some(c) => c.clone(),
            None => eq1_lower_bound(k, self.l)?,
        };
        let one = Rational::from_integer(1.into());
        if &c_thr + &self.eta >= one {
            return Err(Error::invalid(
                "c_threshold + eta must stay below 1 for the hypothesis to be satisfiable",
            ));
        }
        Ok(c_thr)
    }
}

/// Number of gadgets the harvest loop aims for: max(1, ⌊ηn/(4k^k(k²+k))⌋).
pub fn default_t(n: usize, k: usize, eta: &Rational) -> Result<usize> {
    let k_to_k = num::BigInt::from(k).pow(k as u32);
    let denom = Rational::from_integer(num::BigInt::from(4) * k_to_k * num::BigInt::from(k * k + k));
    let t = floor_to_usize(&(eta * rational_from(n) / denom))?;
    Ok(t.max(1))
}

/// Why a harvest stage could not produce a gadget.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HarvestFailure {
    /// The perfect matching found held fewer disjoint differently-coloured
    /// edge pairs than the required L = C(r,2)+1.
    InsufficientBichromaticPairs { found: usize, needed: usize },
    /// Cross-typed vertex-pair duos existed but none completed a small
    /// gadget.
    SmallGadgetFailed { duos_tried: usize },
    /// No cross duo and no edge pair whose every vertex pair carries the
    /// same-colour type.
    NoAllSamePair,
    /// All-same edge pairs existed but none completed a big gadget.
    SGadgetFailed { pairs_tried: usize },
    /// A later harvest stage found no perfect matching in the surviving
    /// hypergraph.
    SurvivorWithoutMatching { stage: usize },
}

impl fmt::Display for HarvestFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HarvestFailure::InsufficientBichromaticPairs { found, needed } => write!(
                f,
                "insufficient-bichromatic-pairs: found {found}, needed {needed}"
            ),
            HarvestFailure::SmallGadgetFailed { duos_tried } => {
                write!(f, "small-gadget-failed after {duos_tried} candidate duos")
            }
            HarvestFailure::NoAllSamePair => write!(
                f,
                "no-all-same-pair: no cross duo and no fully same-typed edge pair"
            ),
            HarvestFailure::SGadgetFailed { pairs_tried } => {
                write!(f, "s-gadget-failed after {pairs_tried} edge pairs")
            }
            HarvestFailure::SurvivorWithoutMatching { stage } => {
                write!(f, "surviving hypergraph at stage {stage} has no perfect matching")
            }
        }
    }
}

/// A gadget found by one harvest stage, with its goodness evidence.
#[derive(Clone, Debug, Serialize)]
pub struct HarvestedGadget {
    pub gadget: Gadget,
    pub certificate: GoodnessCertificate,
}

/// What one harvest stage produced.
#[derive(Clone, Debug)]
pub enum HarvestOutcome {
    /// A perfect matching of the surviving hypergraph with at least
    /// n_i/k − C(r,2) edges of one colour; the run may exit immediately.
    HugeBias(Matching),
    /// A vertex-disjoint good gadget to remove and bank.
    Gadget(Box<HarvestedGadget>),
    /// No gadget at this scale; diagnostics name the failing step.
    Failed(HarvestFailure),
}

/// Pairs up differently-coloured edges of a matching: repeatedly draws one
/// edge from each of the two largest remaining colour classes (ties to the
/// smaller colour index, edges in lexicographic order), which maximizes the
/// number of disjoint bichromatic pairs. Each pair is reported with its
/// lexicographically smaller edge first.
pub fn bichromatic_pairing(
    edges: &[VertexSet],
    c: &Colouring,
) -> Result<Vec<(VertexSet, VertexSet)>> {
    use std::collections::BTreeMap;
    let mut classes: BTreeMap<usize, std::collections::VecDeque<VertexSet>> = BTreeMap::new();
    let mut sorted = edges.to_vec();
    sorted.sort_by(|a, b| a.lex_cmp(*b));
    for e in sorted {
        classes.entry(c.colour(e)?).or_default().push_back(e);
    }
    let mut out = Vec::new();
    loop {
        let mut order: Vec<(usize, usize)> = classes
            .iter()
            .filter(|(_, q)| !q.is_empty())
            .map(|(&colour, q)| (colour, q.len()))
            .collect();
        if order.len() < 2 {
            break;
        }
        order.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        let first = classes.get_mut(&order[0].0).unwrap().pop_front().unwrap();
        let second = classes.get_mut(&order[1].0).unwrap().pop_front().unwrap();
        if first.lex_cmp(second) == std::cmp::Ordering::Less {
            out.push((first, second));
        } else {
            out.push((second, first));
        }
    }
    Ok(out)
}

/// One cross-typed ordered vertex pair, normalized so i < j.
struct CrossRecord {
    u: usize,
    v: usize,
    i: usize,
    j: usize,
    threshold: usize,
}

/// Runs one harvest stage on the surviving hypergraph.
///
/// First looks for a perfect matching with at least n_i/k − C(r,2) edges of
/// one colour (an immediate win). Otherwise takes the oracle's first
/// perfect matching, extracts L = C(r,2)+1 disjoint differently-coloured
/// edge pairs, classifies the k² vertex pairs across each, and tries small
/// gadgets from cross-typed duos, then big gadgets from fully same-typed
/// edge pairs.
pub fn harvest_gadget(
    h: &Hypergraph,
    c: &Colouring,
    params: &RunParams,
) -> Result<HarvestOutcome> {
    let k = h.k();
    let n_i = h.n();
    if n_i % k != 0 {
        return Err(Error::invalid(format!(
            "surviving vertex count {n_i} is not divisible by k={k}"
        )));
    }
    if c.r() != params.r {
        return Err(Error::invalid(format!(
            "colouring has r={}, params say r={}",
            c.r(),
            params.r
        )));
    }
    if params.r < 2 {
        return Err(Error::invalid("harvest needs at least two colours"));
    }
    let cfg = params.search_config();
    let pair_count = params.r * (params.r - 1) / 2;
    let target = (n_i / k) as i64 - pair_count as i64;
    if let Some(m) = find_biased_pm_with(h, c, target, cfg)? {
        return Ok(HarvestOutcome::HugeBias(m));
    }
    let m = find_perfect_matching_with(h, params.search_config())?.ok_or_else(|| {
        Error::NoPerfectMatching("the surviving hypergraph has no perfect matching".into())
    })?;

    let needed = pair_count + 1;
    let pairing = bichromatic_pairing(m.edges(), c)?;
    if pairing.len() < needed {
        return Ok(HarvestOutcome::Failed(
            HarvestFailure::InsufficientBichromaticPairs {
                found: pairing.len(),
                needed,
            },
        ));
    }
    let pairs = &pairing[..needed];

    // Classify every vertex pair across each edge pair.
    let mut cross: Vec<CrossRecord> = Vec::new();
    let mut all_same: Vec<(VertexSet, VertexSet, usize)> = Vec::new();
    for &(e, f) in pairs {
        let mut pair_all_same = true;
        let mut min_threshold = usize::MAX;
        for u in e.iter() {
            for v in f.iter() {
                let common = h.common_neighbourhood(u, v)?;
                let threshold = params.threshold_mode.threshold(h, common.len())?;
                let cls = classify_pair(h, c, u, v, threshold)?;
                if !cls.has_type(PairType::Same) {
                    pair_all_same = false;
                }
                min_threshold = min_threshold.min(threshold);
                for t in &cls.types {
                    if let PairType::Cross(i, j) = *t {
                        if i < j {
                            cross.push(CrossRecord { u, v, i, j, threshold });
                        } else {
                            cross.push(CrossRecord {
                                u: v,
                                v: u,
                                i: j,
                                j: i,
                                threshold,
                            });
                        }
                    }
                }
            }
        }
        if pair_all_same {
            all_same.push((e, f, min_threshold));
        }
    }

    // Two cross records with the same colour pair and four distinct
    // vertices give a small-gadget candidate.
    let mut duos_tried = 0usize;
    for a in 0..cross.len() {
        for b in (a + 1)..cross.len() {
            let (ra, rb) = (&cross[a], &cross[b]);
            if ra.i != rb.i || ra.j != rb.j {
                continue;
            }
            let va = VertexSet::from_vertices([ra.u, ra.v])?;
            let vb = VertexSet::from_vertices([rb.u, rb.v])?;
            if !va.is_disjoint(vb) {
                continue;
            }
            duos_tried += 1;
            if let Some(gadget) = build_small_gadget(
                h,
                c,
                [ra.u, ra.v, rb.u, rb.v],
                ra.i,
                ra.j,
                ra.threshold.min(rb.threshold),
            )? {
                let certificate = gadget.certificate(k, c)?;
                debug_assert!(certificate.is_good());
                if certificate.is_good() {
                    return Ok(HarvestOutcome::Gadget(Box::new(HarvestedGadget {
                        gadget,
                        certificate,
                    })));
                }
            }
        }
    }

    // Edge pairs whose every vertex pair is same-typed give big-gadget
    // candidates; they are good because the pairing guarantees differently
    // coloured anchors.
    let mut pairs_tried = 0usize;
    for &(e, f, threshold) in &all_same {
        pairs_tried += 1;
        if let Some(gadget) = build_s_gadget(h, c, e, f, threshold)? {
            let certificate = gadget.certificate(k, c)?;
            debug_assert!(certificate.is_good());
            if certificate.is_good() {
                return Ok(HarvestOutcome::Gadget(Box::new(HarvestedGadget {
                    gadget,
                    certificate,
                })));
            }
        }
    }

    Ok(HarvestOutcome::Failed(if pairs_tried > 0 {
        HarvestFailure::SGadgetFailed { pairs_tried }
    } else if duos_tried > 0 {
        HarvestFailure::SmallGadgetFailed { duos_tried }
    } else {
        HarvestFailure::NoAllSamePair
    }))
}

/// One row of the minimum-degree audit: the surviving minimum l-degree
/// after removing `stage` gadgets, against the counting bound
/// (c+η)·C(n, k−l) − stage·(k²+k)·n^(k−l−1) over the original n.
#[derive(Clone, Debug, Serialize)]
pub struct DegreeAuditRow {
    pub stage: usize,
    pub surviving_vertices: usize,
    pub min_degree: usize,
    #[serde(with = "crate::arith::serde_rational")]
    pub bound: Rational,
    pub met: bool,
}

/// A banked gadget with the stage that produced it and the colour class it
/// was assigned to (the least colour where its two profiles differ).
#[derive(Clone, Debug, Serialize)]
pub struct GadgetRecord {
    pub stage: usize,
    pub assigned_colour: usize,
    pub gadget: Gadget,
    pub certificate: GoodnessCertificate,
}

/// Full account of a pipeline run.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub k: usize,
    pub n: usize,
    pub r: usize,
    pub params: RunParams,
    /// Resolved hypothesis fraction the audit used.
    #[serde(with = "crate::arith::serde_rational")]
    pub c_threshold: Rational,
    /// Whether the initial minimum-degree hypothesis held (advisory).
    pub hypothesis_met: bool,
    pub t_used: usize,
    /// Disjoint differently-coloured pairs each stage needed: C(r,2)+1.
    pub l_used: usize,
    /// Stage at which a huge-bias matching ended the harvest early.
    pub early_exit: Option<usize>,
    pub gadgets: Vec<GadgetRecord>,
    /// Diagnostic from the stage that stopped the harvest, if any.
    pub diagnostic: Option<HarvestFailure>,
    /// The colour backed by the most gadgets, when assembly ran.
    pub chosen_colour: Option<usize>,
    /// Biases of the two assembled candidates [more-of-j, fewer-of-j].
    pub candidate_biases: Option<[usize; 2]>,
    pub degree_audit: Vec<DegreeAuditRow>,
    #[serde(with = "crate::arith::serde_rational")]
    pub theorem_bound: Rational,
    pub result: BiasResult,
}

fn audit_row(
    survivor: &Hypergraph,
    l: usize,
    stage: usize,
    c_plus_eta: &Rational,
    n: usize,
    k: usize,
) -> Result<Option<DegreeAuditRow>> {
    if survivor.n() < l {
        return Ok(None);
    }
    let (min_degree, _) = survivor.min_l_degree(l)?;
    let removal = Rational::from_integer(
        num::BigInt::from(stage)
            * num::BigInt::from(k * k + k)
            * num::BigInt::from(n).pow((k - l - 1) as u32),
    );
    let bound = c_plus_eta * Rational::from_integer(binomial(n - l, k - l)) - removal;
    let met = rational_from(min_degree) >= bound;
    Ok(Some(DegreeAuditRow {
        stage,
        surviving_vertices: survivor.n(),
        min_degree,
        bound,
        met,
    }))
}

/// Executes the full pipeline and certifies the result.
///
/// Harvests up to t disjoint good gadgets (exiting early on a huge-bias
/// matching), partitions them by their least differing colour, assembles
/// the candidates M∪M⁺ and M∪M⁻ over a perfect matching M of the
/// remainder, and reports the better one against the theorem bound. A
/// failed harvest stage stops harvesting but still assembles whatever was
/// banked, recording the diagnostic.
pub fn run(h: &Hypergraph, c: &Colouring, params: &RunParams) -> Result<RunReport> {
    let k = h.k();
    let n = h.n();
    if n % k != 0 {
        return Err(Error::invalid(format!("k={k} must divide n={n}")));
    }
    if c.r() != params.r {
        return Err(Error::invalid(format!(
            "colouring has r={}, params say r={}",
            c.r(),
            params.r
        )));
    }
    let c_threshold = params.resolve(k)?;
    let theorem_bound = theorem_bias_bound(n, k, params.r, &params.eta)?;
    let t_used = match params.t_override {
        Some(t) => t,
        None => default_t(n, k, &params.eta)?,
    };
    let pair_count = params.r * (params.r - 1) / 2;
    let l_used = pair_count + 1;
    let c_plus_eta = &c_threshold + &params.eta;

    let mut degree_audit = Vec::new();
    if let Some(row) = audit_row(h, params.l, 0, &c_plus_eta, n, k)? {
        degree_audit.push(row);
    }
    let hypothesis_met = degree_audit.first().map_or(false, |row| row.met);

    let mut survivor = h.clone();
    let mut gadgets: Vec<GadgetRecord> = Vec::new();
    let mut diagnostic = None;
    let mut early: Option<(usize, Matching)> = None;
    for stage in 1..=t_used {
        match harvest_gadget(&survivor, c, params) {
            Ok(HarvestOutcome::HugeBias(m)) => {
                early = Some((stage, m));
                break;
            }
            Ok(HarvestOutcome::Gadget(found)) => {
                let HarvestedGadget {
                    gadget,
                    certificate,
                } = *found;
                survivor = survivor.remove_vertices(gadget.vertex_set());
                let assigned_colour = certificate.differing_colours[0];
                gadgets.push(GadgetRecord {
                    stage,
                    assigned_colour,
                    gadget,
                    certificate,
                });
                if let Some(row) =
                    audit_row(&survivor, params.l, gadgets.len(), &c_plus_eta, n, k)?
                {
                    degree_audit.push(row);
                }
            }
            Ok(HarvestOutcome::Failed(d)) => {
                diagnostic = Some(d);
                break;
            }
            Err(Error::NoPerfectMatching(msg)) => {
                if gadgets.is_empty() {
                    return Err(Error::NoPerfectMatching(msg));
                }
                diagnostic = Some(HarvestFailure::SurvivorWithoutMatching { stage });
                break;
            }
            Err(e) => return Err(e),
        }
    }

    let (result, chosen_colour, candidate_biases) = if let Some((_, huge)) = &early {
        // Extend the huge-bias matching through every banked gadget.
        let mut total = huge.clone();
        for record in &gadgets {
            total = total.union(&record.certificate.matchings.0)?;
        }
        total.validate_perfect(h)?;
        (BiasResult::new(total, c, theorem_bound.clone())?, None, None)
    } else if gadgets.is_empty() {
        // Nothing harvested: fall back to the oracle's first perfect
        // matching so the report still carries a concrete result.
        let m = find_perfect_matching_with(h, params.search_config())?.ok_or_else(|| {
            Error::NoPerfectMatching("the instance has no perfect matching".into())
        })?;
        m.validate_perfect(h)?;
        (BiasResult::new(m, c, theorem_bound.clone())?, None, None)
    } else {
        let mut best_j = 1;
        let mut best_count = 0;
        for j in 1..=params.r {
            let count = gadgets.iter().filter(|g| g.assigned_colour == j).count();
            if count > best_count {
                best_count = count;
                best_j = j;
            }
        }
        let j = best_j;
        let chosen: Vec<&GadgetRecord> =
            gadgets.iter().filter(|g| g.assigned_colour == j).collect();
        let mut removed = VertexSet::new();
        let mut plus = Matching::empty();
        let mut minus = Matching::empty();
        for record in &chosen {
            removed = removed.union(record.gadget.vertex_set());
            let (m_e, m_f) = &record.certificate.matchings;
            let (p_e, p_f) = &record.certificate.profiles;
            let (more, fewer) = if p_e.count(j) >= p_f.count(j) {
                (m_e, m_f)
            } else {
                (m_f, m_e)
            };
            plus = plus.union(more)?;
            minus = minus.union(fewer)?;
        }
        debug_assert!(
            crate::colouring::profile(plus.edges(), c)?.count(j)
                >= crate::colouring::profile(minus.edges(), c)?.count(j) + chosen.len()
        );
        let remainder = h.remove_vertices(removed);
        let m = find_perfect_matching_with(&remainder, params.search_config())?.ok_or_else(
            || {
                Error::NoPerfectMatching(
                    "the remainder outside the chosen gadgets has no perfect matching \
                     (degree hypothesis fails at this scale)"
                        .into(),
                )
            },
        )?;
        let plus_m = m.union(&plus)?;
        let minus_m = m.union(&minus)?;
        plus_m.validate_perfect(h)?;
        minus_m.validate_perfect(h)?;
        let plus_res = BiasResult::new(plus_m, c, theorem_bound.clone())?;
        let minus_res = BiasResult::new(minus_m, c, theorem_bound.clone())?;
        let biases = [plus_res.bias, minus_res.bias];
        let result = if plus_res.bias >= minus_res.bias {
            plus_res
        } else {
            minus_res
        };
        (result, Some(j), Some(biases))
    };

    Ok(RunReport {
        schema_version: 1,
        k,
        n,
        r: params.r,
        params: params.clone(),
        c_threshold,
        hypothesis_met,
        t_used,
        l_used,
        early_exit: early.map(|(stage, _)| stage),
        gadgets,
        diagnostic,
        chosen_colour,
        candidate_biases,
        degree_audit,
        theorem_bound,
        result,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;
    use crate::gadgets::GadgetShape;

    fn vs(labels: &[usize]) -> VertexSet {
        VertexSet::from_vertices(labels.iter().copied()).unwrap()
    }

    fn build(n: usize, spec: &[(&[usize], usize)]) -> (Hypergraph, Colouring) {
        let edges: Vec<VertexSet> = spec.iter().map(|(e, _)| vs(e)).collect();
        let h = Hypergraph::new(3, n, edges).unwrap();
        let pairs: Vec<(VertexSet, usize)> = spec.iter().map(|(e, c)| (vs(e), *c)).collect();
        let c = Colouring::from_pairs(&h, 2, &pairs).unwrap();
        (h, c)
    }

    #[test]
    fn theorem_bound_frozen_values() {
        let b = theorem_bias_bound(30, 3, 2, &ratio(1, 10).unwrap()).unwrap();
        assert_eq!(b, ratio(8641, 1728).unwrap()); // 5 + 1/1728
        let b = theorem_bias_bound(12, 3, 2, &ratio(1, 2).unwrap()).unwrap();
        assert_eq!(b, ratio(1729, 864).unwrap()); // 2 + 1/864
        // Tiny eta approaches n/(rk) from above.
        let b = theorem_bias_bound(30, 3, 2, &ratio(1, 1_000_000).unwrap()).unwrap();
        assert!(b > ratio(5, 1).unwrap());
        assert!(b < ratio(501, 100).unwrap());
        assert!(theorem_bias_bound(10, 3, 2, &ratio(1, 2).unwrap()).is_err());
        assert!(theorem_bias_bound(12, 3, 1, &ratio(1, 2).unwrap()).is_err());
        assert!(theorem_bias_bound(12, 3, 2, &ratio(0, 1).unwrap()).is_err());
    }

    #[test]
    fn eq1_frozen_values() {
        assert_eq!(eq1_lower_bound(3, 2).unwrap(), ratio(1, 2).unwrap());
        assert_eq!(eq1_lower_bound(3, 1).unwrap(), ratio(5, 9).unwrap());
        assert_eq!(eq1_lower_bound(4, 1).unwrap(), ratio(37, 64).unwrap());
        assert!(eq1_lower_bound(3, 0).is_err());
        assert!(eq1_lower_bound(3, 3).is_err());
    }

    #[test]
    fn default_t_is_floor_with_minimum_one() {
        // 18/2 / 1296... every desk-scale value floors to 0, so t = 1.
        assert_eq!(default_t(18, 3, &ratio(1, 2).unwrap()).unwrap(), 1);
        // Large enough fictitious n to clear 1: eta*n >= 4*27*12 = 1296.
        assert_eq!(default_t(5184, 3, &ratio(1, 2).unwrap()).unwrap(), 2);
    }

    #[test]
    fn pairing_maximizes_bichromatic_pairs() {
        let h = Hypergraph::new(
            3,
            18,
            (0..6).map(|i| vs(&[3 * i, 3 * i + 1, 3 * i + 2])).collect(),
        )
        .unwrap();
        let edges = h.edges().to_vec();
        let colour_with = |cols: &[usize]| {
            let pairs: Vec<_> = edges.iter().copied().zip(cols.iter().copied()).collect();
            Colouring::from_pairs(&h, 3, &pairs).unwrap()
        };
        // (4,1,1): optimum is 2 pairs.
        let c = colour_with(&[1, 1, 1, 1, 2, 3]);
        assert_eq!(bichromatic_pairing(&edges, &c).unwrap().len(), 2);
        // (2,2,2): optimum is 3.
        let c = colour_with(&[1, 1, 2, 2, 3, 3]);
        assert_eq!(bichromatic_pairing(&edges, &c).unwrap().len(), 3);
        // Monochromatic: none.
        let c = colour_with(&[2, 2, 2, 2, 2, 2]);
        assert!(bichromatic_pairing(&edges, &c).unwrap().is_empty());
        // (3,3): pairs are (class-1 edge, class-2 edge), lex order.
        let c = colour_with(&[1, 2, 1, 2, 1, 2]);
        let pairs = bichromatic_pairing(&edges, &c).unwrap();
        assert_eq!(pairs.len(), 3);
        assert_eq!(pairs[0], (edges[0], edges[1]));
        assert_eq!(pairs[1], (edges[2], edges[3]));
        assert_eq!(pairs[2], (edges[4], edges[5]));
    }

    fn small_gadget_harvest_fixture() -> (Hypergraph, Colouring) {
        build(
            18,
            &[
                (&[0, 1, 2], 1),
                (&[3, 4, 5], 2),
                (&[6, 7, 8], 1),
                (&[9, 10, 11], 2),
                (&[12, 13, 14], 1),
                (&[15, 16, 17], 2),
                (&[0, 6, 9], 1),
                (&[3, 6, 9], 2),
                (&[1, 7, 10], 1),
                (&[4, 7, 10], 2),
                (&[2, 3, 4], 1),
                (&[5, 8, 11], 2),
            ],
        )
    }

    fn scaled_params() -> RunParams {
        RunParams::new(2, ratio(1, 4).unwrap(), 2)
            .with_threshold_mode(ThresholdMode::Scaled(ratio(1, 2).unwrap()))
    }

    #[test]
    fn harvest_monochromatic_is_huge_bias() {
        let h = Hypergraph::complete(3, 9).unwrap();
        let c = Colouring::from_fn(&h, 2, |_| 1).unwrap();
        match harvest_gadget(&h, &c, &scaled_params()).unwrap() {
            HarvestOutcome::HugeBias(m) => {
                assert_eq!(m.len(), 3);
                let p = crate::colouring::profile(m.edges(), &c).unwrap();
                assert_eq!(p.count(1), 3);
            }
            other => panic!("expected huge bias, got {other:?}"),
        }
    }

    #[test]
    fn harvest_reports_insufficient_pairs() {
        // Six disjoint edges, three colours (2,2,2): only three bichromatic
        // pairs exist but r=3 needs four.
        let edges: Vec<VertexSet> = (0..6).map(|i| vs(&[3 * i, 3 * i + 1, 3 * i + 2])).collect();
        let h = Hypergraph::new(3, 18, edges.clone()).unwrap();
        let pairs: Vec<_> = edges
            .iter()
            .copied()
            .zip([1, 1, 2, 2, 3, 3])
            .collect();
        let c = Colouring::from_pairs(&h, 3, &pairs).unwrap();
        let mut params = RunParams::new(2, ratio(1, 10).unwrap(), 3)
            .with_threshold_mode(ThresholdMode::Scaled(ratio(1, 2).unwrap()));
        params.c_threshold = Some(ratio(1, 2).unwrap());
        match harvest_gadget(&h, &c, &params).unwrap() {
            HarvestOutcome::Failed(HarvestFailure::InsufficientBichromaticPairs {
                found,
                needed,
            }) => {
                assert_eq!((found, needed), (3, 4));
            }
            other => panic!("expected insufficient pairs, got {other:?}"),
        }
    }

    #[test]
    fn harvest_builds_small_gadget_from_cross_duo() {
        let (h, c) = small_gadget_harvest_fixture();
        match harvest_gadget(&h, &c, &scaled_params()).unwrap() {
            HarvestOutcome::Gadget(found) => {
                assert_eq!(found.gadget.shape, GadgetShape::Small);
                assert_eq!(found.gadget.e, vs(&[0, 1, 2]));
                assert_eq!(found.gadget.f, vs(&[2, 3, 4]));
                let links: Vec<_> = found
                    .gadget
                    .links
                    .iter()
                    .map(|l| (l.anchor_e, l.anchor_f, l.link))
                    .collect();
                assert_eq!(links, vec![(0, 3, vs(&[6, 9])), (1, 4, vs(&[7, 10]))]);
                assert_eq!(found.certificate.differing_colours, vec![1, 2]);
            }
            other => panic!("expected a small gadget, got {other:?}"),
        }
    }

    #[test]
    fn run_assembles_small_gadget_and_meets_bound() {
        let (h, c) = small_gadget_harvest_fixture();
        let report = run(&h, &c, &scaled_params()).unwrap();
        assert_eq!(report.t_used, 1);
        assert_eq!(report.l_used, 2);
        assert!(report.early_exit.is_none());
        assert!(report.diagnostic.is_none());
        assert_eq!(report.gadgets.len(), 1);
        assert_eq!(report.gadgets[0].assigned_colour, 1);
        assert_eq!(report.chosen_colour, Some(1));
        assert_eq!(report.candidate_biases, Some([4, 4]));
        assert_eq!(report.result.bias, 4);
        assert_eq!(report.result.bias_colour, 1);
        assert!(report.result.meets_bound);
        // Hypothesis audit is advisory: this sparse fixture fails it.
        assert!(!report.hypothesis_met);
        assert_eq!(report.degree_audit.len(), 2);
        assert!(!report.degree_audit[0].met);
        report.result.matching.validate_perfect(&h).unwrap();
    }

    fn s_gadget_harvest_fixture() -> (Hypergraph, Colouring) {
        build(
            18,
            &[
                (&[0, 1, 2], 1),
                (&[3, 4, 5], 2),
                (&[6, 7, 8], 1),
                (&[9, 10, 11], 2),
                (&[12, 13, 14], 1),
                (&[15, 16, 17], 2),
                (&[0, 6, 7], 1),
                (&[3, 6, 7], 1),
                (&[1, 9, 10], 2),
                (&[4, 9, 10], 2),
                (&[2, 12, 13], 1),
                (&[5, 12, 13], 1),
                (&[0, 15, 16], 1),
                (&[4, 15, 16], 1),
                (&[0, 9, 10], 2),
                (&[5, 9, 10], 2),
                (&[1, 12, 13], 1),
                (&[3, 12, 13], 1),
                (&[1, 15, 16], 2),
                (&[5, 15, 16], 2),
                (&[2, 9, 10], 2),
                (&[3, 9, 10], 2),
                (&[2, 6, 7], 1),
                (&[4, 6, 7], 1),
                (&[8, 11, 14], 2),
            ],
        )
    }

    #[test]
    fn harvest_builds_big_gadget_from_same_typed_pair() {
        let (h, c) = s_gadget_harvest_fixture();
        match harvest_gadget(&h, &c, &scaled_params()).unwrap() {
            HarvestOutcome::Gadget(found) => {
                assert_eq!(found.gadget.shape, GadgetShape::Big);
                assert_eq!(found.gadget.e, vs(&[0, 1, 2]));
                assert_eq!(found.gadget.f, vs(&[3, 4, 5]));
                let links: Vec<_> = found
                    .gadget
                    .links
                    .iter()
                    .map(|l| (l.anchor_e, l.anchor_f, l.link))
                    .collect();
                assert_eq!(
                    links,
                    vec![
                        (0, 3, vs(&[6, 7])),
                        (1, 4, vs(&[9, 10])),
                        (2, 5, vs(&[12, 13])),
                    ]
                );
                assert_eq!(found.certificate.differing_colours, vec![1, 2]);
            }
            other => panic!("expected a big gadget, got {other:?}"),
        }
    }

    #[test]
    fn run_assembles_big_gadget_choosing_the_better_candidate() {
        let (h, c) = s_gadget_harvest_fixture();
        let report = run(&h, &c, &scaled_params()).unwrap();
        assert!(report.early_exit.is_none());
        assert!(report.diagnostic.is_none());
        assert_eq!(report.gadgets.len(), 1);
        assert_eq!(report.chosen_colour, Some(1));
        // The fewer-of-colour-1 candidate carries the larger overall bias.
        assert_eq!(report.candidate_biases, Some([3, 4]));
        assert_eq!(report.result.bias, 4);
        assert_eq!(report.result.bias_colour, 2);
        assert!(report.result.meets_bound);
        report.result.matching.validate_perfect(&h).unwrap();
    }

    #[test]
    fn run_exits_early_on_monochromatic_instances() {
        let h = Hypergraph::complete(3, 12).unwrap();
        let c = Colouring::from_fn(&h, 2, |_| 1).unwrap();
        let report = run(&h, &c, &scaled_params()).unwrap();
        assert_eq!(report.early_exit, Some(1));
        assert!(report.gadgets.is_empty());
        assert_eq!(report.chosen_colour, None);
        assert_eq!(report.result.bias, 4);
        assert!(report.result.meets_bound);
        assert!(report.hypothesis_met);
    }

    #[test]
    fn run_records_diagnostic_and_falls_back() {
        let edges: Vec<VertexSet> = (0..6).map(|i| vs(&[3 * i, 3 * i + 1, 3 * i + 2])).collect();
        let h = Hypergraph::new(3, 18, edges.clone()).unwrap();
        let pairs: Vec<_> = edges.iter().copied().zip([1, 1, 2, 2, 3, 3]).collect();
        let c = Colouring::from_pairs(&h, 3, &pairs).unwrap();
        let mut params = RunParams::new(2, ratio(1, 10).unwrap(), 3)
            .with_threshold_mode(ThresholdMode::Scaled(ratio(1, 2).unwrap()));
        params.c_threshold = Some(ratio(1, 2).unwrap());
        let report = run(&h, &c, &params).unwrap();
        assert_eq!(
            report.diagnostic,
            Some(HarvestFailure::InsufficientBichromaticPairs {
                found: 3,
                needed: 4
            })
        );
        assert!(report.gadgets.is_empty());
        assert_eq!(report.result.bias, 2);
        assert!(!report.result.meets_bound);
    }

    #[test]
    fn run_remainder_failure_is_structured() {
        // The small-gadget fixture without its remainder edge: harvesting
        // succeeds but the leftover vertices cannot be matched.
        let (h, c) = build(
            12,
            &[
                (&[0, 1, 2], 1),
                (&[3, 4, 5], 2),
                (&[6, 7, 8], 1),
                (&[9, 10, 11], 2),
                (&[0, 6, 9], 1),
                (&[3, 6, 9], 2),
                (&[1, 7, 10], 1),
                (&[4, 7, 10], 2),
                (&[2, 3, 4], 1),
            ],
        );
        match run(&h, &c, &scaled_params()) {
            Err(Error::NoPerfectMatching(msg)) => assert!(msg.contains("remainder")),
            other => panic!("expected remainder failure, got {other:?}"),
        }
    }

    #[test]
    fn run_validates_parameters() {
        let (h, c) = small_gadget_harvest_fixture();
        let base = scaled_params();
        let mut p = base.clone();
        p.r = 3;
        assert!(run(&h, &c, &p).is_err());
        let mut p = base.clone();
        p.eta = ratio(0, 1).unwrap();
        assert!(run(&h, &c, &p).is_err());
        let mut p = base.clone();
        p.eta = ratio(1, 2).unwrap();
        p.c_threshold = Some(ratio(1, 2).unwrap());
        assert!(run(&h, &c, &p).is_err()); // c + eta = 1
        let mut p = base.clone();
        p.l = 0;
        assert!(run(&h, &c, &p).is_err());
        let mut p = base.clone();
        p.l = 3;
        assert!(run(&h, &c, &p).is_err());
        let mut p = base.clone();
        p.t_override = Some(0);
        assert!(run(&h, &c, &p).is_err());
        let h2 = Hypergraph::complete(3, 8).unwrap();
        let c2 = Colouring::from_fn(&h2, 2, |_| 1).unwrap();
        assert!(run(&h2, &c2, &base).is_err()); // 3 does not divide 8
    }

    #[test]
    fn run_is_deterministic() {
        let (h, c) = s_gadget_harvest_fixture();
        let a = serde_json::to_string(&run(&h, &c, &scaled_params()).unwrap()).unwrap();
        let b = serde_json::to_string(&run(&h, &c, &scaled_params()).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
