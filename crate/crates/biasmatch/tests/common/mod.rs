//! Shared helpers for the integration suites: seeded synthetic gadget
//! instances with shuffled labels and randomized colourings.

use biasmatch::colouring::Colouring;
use biasmatch::gadgets::{Gadget, GadgetLink, GadgetShape};
use biasmatch::hypergraph::{Hypergraph, VertexSet};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Each integration suite compiles this module independently and uses a
// different subset of the fields, so per-binary dead-code analysis misfires.
#[allow(dead_code)]
pub struct SyntheticGadget {
    pub host: Hypergraph,
    pub colouring: Colouring,
    pub gadget: Gadget,
}

/// Builds a structurally valid gadget of the requested shape on randomly
/// permuted labels, with a host consisting of exactly the gadget's edges
/// and a seeded random r-colouring.
///
/// When `link_sides_share_colour` is set, each link's two completions get
/// one colour (the stitching property the big-gadget goodness equivalence
/// relies on); anchor colours stay independent either way.
pub fn synthetic_gadget(
    shape: GadgetShape,
    k: usize,
    r: usize,
    seed: u64,
    link_sides_share_colour: bool,
) -> SyntheticGadget {
    assert!(k >= 3, "gadget shapes need k >= 3");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Canonical layout on 0..n, then a label shuffle.
    let (n, e, f, links): (usize, Vec<usize>, Vec<usize>, Vec<(usize, usize, Vec<usize>)>) =
        match shape {
            GadgetShape::Small => {
                // Quad 0..4, spine 4..k+2, two (k-1)-sets after that.
                let n = 3 * k;
                let spine: Vec<usize> = (4..k + 2).collect();
                let t12: Vec<usize> = (k + 2..2 * k + 1).collect();
                let t34: Vec<usize> = (2 * k + 1..3 * k).collect();
                let mut e = vec![0, 2];
                e.extend(&spine);
                let mut f = vec![1, 3];
                f.extend(&spine);
                (n, e, f, vec![(0, 1, t12), (2, 3, t34)])
            }
            GadgetShape::Big => {
                let n = k * k + k;
                let e: Vec<usize> = (0..k).collect();
                let f: Vec<usize> = (k..2 * k).collect();
                let links = (0..k)
                    .map(|i| {
                        let start = 2 * k + i * (k - 1);
                        (i, k + i, (start..start + k - 1).collect())
                    })
                    .collect();
                (n, e, f, links)
            }
        };

    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    let map = |vs: &[usize]| -> VertexSet {
        VertexSet::from_vertices(vs.iter().map(|&v| perm[v])).expect("labels stay in range")
    };

    let gadget = Gadget {
        shape,
        e: map(&e),
        f: map(&f),
        links: links
            .iter()
            .map(|(u, v, t)| GadgetLink {
                anchor_e: perm[*u],
                anchor_f: perm[*v],
                link: map(t),
            })
            .collect(),
    };

    let mut edges = vec![gadget.e, gadget.f];
    for l in &gadget.links {
        edges.push(l.e_side());
        edges.push(l.f_side());
    }
    let host = Hypergraph::new(k, n, edges).expect("synthetic gadget edges are well-formed");

    let mut pairs: Vec<(VertexSet, usize)> = vec![
        (gadget.e, rng.gen_range(1..=r)),
        (gadget.f, rng.gen_range(1..=r)),
    ];
    for l in &gadget.links {
        if link_sides_share_colour {
            let colour = rng.gen_range(1..=r);
            pairs.push((l.e_side(), colour));
            pairs.push((l.f_side(), colour));
        } else {
            pairs.push((l.e_side(), rng.gen_range(1..=r)));
            pairs.push((l.f_side(), rng.gen_range(1..=r)));
        }
    }
    let colouring = Colouring::from_pairs(&host, r, &pairs).expect("total colouring");

    gadget.validate(&host).expect("synthetic gadget validates");
    SyntheticGadget {
        host,
        colouring,
        gadget,
    }
}
