//! Label gadgets that pin individual nodes, and the two-copy query graphs
//! used by the GA → UniqueGA_ff reduction.
//!
//! A label hung on node `v` at scale `s` is a main path of `2s + 3` new nodes
//! starting next to `v`, plus a branch path of `b` nodes hanging from the
//! `(s + 2)`-nd path node. Distinct branch lengths `1 ≤ b ≤ s` give
//! pairwise non-isomorphic labels that no automorphism can move onto an
//! unlabelled node.

use super::Graph;
use crate::error::{Error, Result};
use crate::perm::in_ff_degrees;

fn check_node(g: &Graph, node: usize) -> Result<()> {
    if node == 0 || node > g.node_count() {
        return Err(Error::NodeOutOfRange {
            node,
            count: g.node_count(),
        });
    }
    Ok(())
}

/// Hangs label `j` on `node`, with the scale taken from the graph's own node
/// count. `chain_bonus` lengthens the branch, which is how parity padding is
/// applied.
pub fn attach_label(g: &Graph, node: usize, j: usize, chain_bonus: usize) -> Result<Graph> {
    if j == 0 {
        return Err(Error::InvalidParam("label indices start at 1".into()));
    }
    attach_label_scaled(g, node, j + chain_bonus, g.node_count())
}

/// Hangs a label with a branch of `branch` nodes on `node` at scale `scale`.
pub fn attach_label_scaled(g: &Graph, node: usize, branch: usize, scale: usize) -> Result<Graph> {
    check_node(g, node)?;
    let mut out = g.clone();
    hang(&mut out, node, branch, scale);
    Ok(out)
}

fn hang(g: &mut Graph, node: usize, branch: usize, scale: usize) {
    let chain_len = 2 * scale + 3;
    let first = g.add_nodes(chain_len);
    g.add_edge(node, first);
    for k in 1..chain_len {
        g.add_edge(first + k - 1, first + k);
    }
    if branch > 0 {
        let anchor = first + scale + 1;
        let start = g.add_nodes(branch);
        g.add_edge(anchor, start);
        for k in 1..branch {
            g.add_edge(start + k - 1, start + k);
        }
    }
}

/// Branch lengths and sizes for a query on an `n`-node graph with `f` fixed
/// nodes. Fixed node `k` (0-based in the list) carries label `k + 1`, the
/// moving node carries `l1` and, in paired queries, the returning node
/// carries `l2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LabelPlan {
    pub scale: usize,
    pub l1: usize,
    pub l2: Option<usize>,
    pub padded: bool,
    pub copy_nodes: usize,
}

impl LabelPlan {
    pub fn new(n: usize, f: usize, paired: bool) -> Self {
        let scale = n + 2;
        let chain = 2 * scale + 3;
        let l2 = paired.then_some(f + 3);
        let mut l1 = f + 1;
        let labels = f + 1 + usize::from(paired);
        let branches: usize = (1..=f).sum::<usize>() + l1 + l2.unwrap_or(0);
        let mut copy_nodes = n + labels * chain + branches;
        // an odd copy makes the two-copy union 2 (mod 4)
        let padded = copy_nodes.is_multiple_of(2);
        if padded {
            l1 += 1;
            copy_nodes += 1;
        }
        LabelPlan {
            scale,
            l1,
            l2,
            padded,
            copy_nodes,
        }
    }
}

/// Node count of the union built by [`build_query`].
pub fn query_node_count(n: usize, f: usize, paired: bool) -> usize {
    2 * LabelPlan::new(n, f, paired).copy_nodes
}

/// Two labelled copies of `g`, disjoint. Both copies label `fixed` in order.
/// Copy A labels `i` with `l1`; copy B labels `j` with `l1`. With
/// `back = Some(z)`, copy A also labels `z` with `l2` and copy B labels `i`
/// with `l2`, so a copy swap exists exactly when some automorphism fixing
/// `fixed` pointwise sends `i ↦ j` and `z ↦ i`.
pub fn build_query(
    g: &Graph,
    fixed: &[usize],
    i: usize,
    j: usize,
    back: Option<usize>,
) -> Result<Graph> {
    let n = g.node_count();
    for &v in fixed.iter().chain([&i, &j]).chain(back.iter()) {
        check_node(g, v)?;
    }
    let mut seen = vec![false; n + 1];
    for &v in fixed {
        if std::mem::replace(&mut seen[v], true) {
            return Err(Error::InvalidParam(format!("node {v} fixed twice")));
        }
    }
    if i == j || seen[i] || seen[j] {
        return Err(Error::InvalidParam(format!(
            "moving pair ({i}, {j}) must be distinct and unfixed"
        )));
    }
    if let Some(z) = back {
        if z == i || seen[z] {
            return Err(Error::InvalidParam(format!("return node {z} must be unfixed and differ from {i}")));
        }
    }
    let plan = LabelPlan::new(n, fixed.len(), back.is_some());
    let copy = |moving: usize, returning: Option<usize>| {
        let mut h = g.clone();
        for (k, &v) in fixed.iter().enumerate() {
            hang(&mut h, v, k + 1, plan.scale);
        }
        hang(&mut h, moving, plan.l1, plan.scale);
        if let (Some(r), Some(l2)) = (returning, plan.l2) {
            hang(&mut h, r, l2, plan.scale);
        }
        h
    };
    let a = copy(i, back);
    let b = copy(j, back.map(|_| i));
    debug_assert_eq!(a.node_count(), plan.copy_nodes);
    let union = a.disjoint_union(&b);
    assert!(in_ff_degrees(union.node_count()), "query size must be 2 mod 4");
    Ok(union)
}
