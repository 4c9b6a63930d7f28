//! Small hand-checked graphs for the attack pipeline.

use super::{Graph, PromiseInstance};
use crate::perm::Permutation;

/// The asymmetric tree on 7 nodes: a path 4-3-1-5-2-6 with a leaf 7 on node 1.
pub fn rigid_seven() -> Graph {
    Graph::from_edges(7, &[(1, 3), (1, 5), (1, 7), (2, 5), (2, 6), (3, 4)]).expect("valid")
}

/// [`rigid_seven`] plus the edge `{1, 2}`; rigid and not isomorphic to it.
pub fn rigid_seven_alt() -> Graph {
    Graph::from_edges(7, &[(1, 2), (1, 3), (1, 5), (1, 7), (2, 5), (2, 6), (3, 4)]).expect("valid")
}

/// Two copies of [`rigid_seven`]; the only non-trivial automorphism swaps them.
pub fn planted_yes() -> PromiseInstance {
    let r = rigid_seven();
    let swap: Vec<Vec<usize>> = (1..=7).map(|v| vec![v, v + 7]).collect();
    let swap: Vec<&[usize]> = swap.iter().map(Vec::as_slice).collect();
    let pi = Permutation::from_cycles(14, &swap).expect("disjoint transpositions");
    PromiseInstance::planted_yes(r.disjoint_union(&r), pi).expect("swap is an automorphism")
}

/// [`rigid_seven`] next to [`rigid_seven_alt`]: rigid, 14 nodes.
pub fn planted_no() -> PromiseInstance {
    PromiseInstance::planted_no(rigid_seven().disjoint_union(&rigid_seven_alt())).expect("14 nodes")
}
