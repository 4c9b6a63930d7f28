//! Automorphism enumeration by individualisation and colour refinement.
//!
//! The search keeps a pair of colourings: the left one follows a fixed
//! individualisation path, the right one tries every vertex of the matching
//! cell. A branch dies as soon as the refined colour histograms disagree, and
//! every leaf with a discrete colouring is checked edge by edge. Each
//! automorphism is reached by exactly one leaf.

use std::ops::ControlFlow;

use super::Graph;
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Node limit for generic callers; larger graphs are refused.
pub const DEFAULT_NODE_LIMIT: usize = 40;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutGroup {
    n: usize,
    // sorted; the identity comes first
    elements: Vec<Permutation>,
}

impl AutGroup {
    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn contains(&self, sigma: &Permutation) -> bool {
        self.elements.binary_search(sigma).is_ok()
    }

    pub fn non_identity(&self) -> impl Iterator<Item = &Permutation> {
        self.elements.iter().filter(|p| !p.is_identity())
    }

    /// Pointwise stabiliser of the given 1-based nodes.
    pub fn stabilizer(&self, points: &[usize]) -> Vec<Permutation> {
        self.elements
            .iter()
            .filter(|p| points.iter().all(|&x| p.apply(x) == x))
            .cloned()
            .collect()
    }

    /// Closure under composition and inverse; used as a sanity check.
    pub fn is_closed(&self) -> bool {
        self.elements.iter().all(|a| {
            self.contains(&a.inverse())
                && self
                    .elements
                    .iter()
                    .all(|b| self.contains(&a.compose(b).expect("same degree")))
        })
    }
}

/// The full automorphism group. Fails for graphs above `node_limit` nodes.
pub fn automorphisms(g: &Graph, node_limit: usize) -> Result<AutGroup> {
    let (elements, _) = automorphisms_bounded(g, node_limit, usize::MAX)?;
    let mut elements = elements;
    elements.sort();
    Ok(AutGroup {
        n: g.node_count(),
        elements,
    })
}

/// Up to `max` automorphisms in search order, plus whether the enumeration
/// finished.
pub fn automorphisms_bounded(
    g: &Graph,
    node_limit: usize,
    max: usize,
) -> Result<(Vec<Permutation>, bool)> {
    if g.node_count() > node_limit {
        return Err(Error::NodeLimitExceeded {
            count: g.node_count(),
            limit: node_limit,
        });
    }
    let mut found = Vec::new();
    let flow = for_each_automorphism(g, &mut |p| {
        found.push(p);
        if found.len() >= max {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    Ok((found, flow.is_continue()))
}

fn for_each_automorphism(
    g: &Graph,
    visit: &mut dyn FnMut(Permutation) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let n = g.node_count();
    if n == 0 {
        return visit(Permutation::identity(0));
    }
    let adj = g.adjacency();
    let mut left = vec![0u32; n];
    let mut right = vec![0u32; n];
    if !refine_pair(&adj, &mut left, &mut right) {
        return ControlFlow::Continue(());
    }
    descend(g, &adj, left, right, visit)
}

fn colour_count(colours: &[u32]) -> u32 {
    colours.iter().copied().max().map_or(0, |c| c + 1)
}

type Signature = (u32, Vec<u32>);

fn signatures(adj: &[Vec<u32>], colours: &[u32]) -> Vec<Signature> {
    adj.iter()
        .zip(colours)
        .map(|(nbrs, &c)| {
            let mut around: Vec<u32> = nbrs.iter().map(|&w| colours[w as usize]).collect();
            around.sort_unstable();
            (c, around)
        })
        .collect()
}

/// Refines both colourings in lockstep to a stable partition. Returns false
/// when the two sides stop being compatible.
fn refine_pair(adj: &[Vec<u32>], left: &mut [u32], right: &mut [u32]) -> bool {
    loop {
        let before = colour_count(left);
        let sig_l = signatures(adj, left);
        let sig_r = signatures(adj, right);
        let mut sorted_l = sig_l.clone();
        let mut sorted_r = sig_r.clone();
        sorted_l.sort_unstable();
        sorted_r.sort_unstable();
        if sorted_l != sorted_r {
            return false;
        }
        sorted_l.dedup();
        let index = |s: &Signature| sorted_l.binary_search(s).expect("present") as u32;
        for (c, s) in left.iter_mut().zip(&sig_l) {
            *c = index(s);
        }
        for (c, s) in right.iter_mut().zip(&sig_r) {
            *c = index(s);
        }
        if sorted_l.len() as u32 == before {
            return true;
        }
    }
}

fn descend(
    g: &Graph,
    adj: &[Vec<u32>],
    left: Vec<u32>,
    right: Vec<u32>,
    visit: &mut dyn FnMut(Permutation) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let k = colour_count(&left);
    let mut sizes = vec![0usize; k as usize];
    for &c in &left {
        sizes[c as usize] += 1;
    }
    let Some(target) = sizes.iter().position(|&s| s > 1) else {
        let mut slot = vec![0usize; k as usize];
        for (w, &c) in right.iter().enumerate() {
            slot[c as usize] = w;
        }
        let image: Vec<u32> = left.iter().map(|&c| slot[c as usize] as u32).collect();
        let perm = Permutation::from_zero_based(image).expect("bijection");
        return if g.is_automorphism(&perm) {
            visit(perm)
        } else {
            ControlFlow::Continue(())
        };
    };
    let target = target as u32;
    let v = left.iter().position(|&c| c == target).expect("non-empty cell");
    for w in (0..right.len()).filter(|&w| right[w] == target) {
        let mut l2 = left.clone();
        let mut r2 = right.clone();
        l2[v] = k;
        r2[w] = k;
        if refine_pair(adj, &mut l2, &mut r2) {
            descend(g, adj, l2, r2, visit)?;
        }
    }
    ControlFlow::Continue(())
}
