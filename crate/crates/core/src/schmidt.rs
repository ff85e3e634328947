//! Automorphism-group order and Schmidt's criterion read off a decomposition
//! tree, for graphs far beyond the reach of the backtracking search.
//!
//! For `G = a_1 G_1 + .. + a_k G_k` with the `G_i` connected and pairwise
//! non-isomorphic, `Aut(G) = Π Aut(G_i) ≀ S_{a_i}`. Such a `G` fails Schmidt's
//! criterion iff some index `l` has: `a_i = 1` and `Aut(G_i) = 1` for all
//! `i ≠ l`; `a_l ≤ 3`; `G_l` fails the criterion; and `Aut(G_l) = 1` if
//! `a_l > 1`. Both quantities are complement invariant, which handles
//! complemented sums.

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::automorphisms::{count_automorphisms, schmidt_bruteforce_colored, AutConfig};
use crate::canonical::{psi, rooted_forest_shape, rooted_shape, RootedForest, RootedShape, RootedTree};
use crate::decomposition::{decompose, BaseClass, DecompTree, LeafClass, NodeKind};
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymmetrySummary {
    #[serde(serialize_with = "crate::schmidt::ser_big")]
    pub aut_order: BigUint,
    pub is_asymmetric: bool,
    pub satisfies_schmidt: bool,
}

pub(crate) fn ser_big<S: serde::Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

impl SymmetrySummary {
    fn new(aut_order: BigUint, satisfies_schmidt: bool) -> Self {
        let is_asymmetric = aut_order.is_one();
        debug_assert!(!(is_asymmetric && satisfies_schmidt));
        SymmetrySummary {
            aut_order,
            is_asymmetric,
            satisfies_schmidt,
        }
    }
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// One group of isomorphic summands: `(|Aut(G_i)|, Schmidt(G_i), a_i)`.
type Part = (BigUint, bool, usize);

fn combine(parts: &[Part]) -> SymmetrySummary {
    let order = parts
        .iter()
        .fold(BigUint::one(), |acc, (o, _, a)| acc * o.pow(*a as u32) * factorial(*a));
    // only a summand with a_i > 1 or a nontrivial group can play the role of l
    let special: Vec<&Part> = parts
        .iter()
        .filter(|(o, _, a)| *a > 1 || !o.is_one())
        .collect();
    let schmidt = match special[..] {
        [] => false,
        [(o, s, a)] => !(*a <= 3 && !*s && (*a == 1 || o.is_one())),
        _ => true,
    };
    SymmetrySummary::new(order, schmidt)
}

fn shape_summary(children: &[(RootedShape, usize)]) -> SymmetrySummary {
    let parts: Vec<Part> = children
        .iter()
        .map(|(c, m)| {
            let s = shape_summary(&c.children);
            (s.aut_order, s.satisfies_schmidt, *m)
        })
        .collect();
    combine(&parts)
}

/// Root-fixing automorphisms of a rooted forest, and the rooted criterion.
pub fn rooted_summary(f: &RootedForest) -> SymmetrySummary {
    shape_summary(&rooted_forest_shape(f))
}

pub fn rooted_aut_order(f: &RootedForest) -> BigUint {
    rooted_summary(f).aut_order
}

pub fn rooted_schmidt(f: &RootedForest) -> bool {
    rooted_summary(f).satisfies_schmidt
}

/// A rooted tree has the symmetries of the forest left by deleting its root.
pub fn rooted_tree_summary(t: &RootedTree) -> SymmetrySummary {
    shape_summary(&rooted_shape(t).children)
}

/// Trees go through the center-rooted tree, whose root-fixing automorphisms
/// are those of the tree with the same supports.
pub fn tree_summary(t: &Graph) -> Result<SymmetrySummary> {
    Ok(rooted_tree_summary(&psi(t)?))
}

fn leaf_summary(g: &Graph, class: LeafClass) -> SymmetrySummary {
    match class {
        LeafClass::SingleVertex => SymmetrySummary::new(BigUint::one(), false),
        LeafClass::Tree => tree_summary(g).expect("leaf is a tree"),
        LeafClass::CoTree => tree_summary(&g.complement()).expect("leaf complement is a tree"),
        LeafClass::Complete | LeafClass::Edgeless => {
            SymmetrySummary::new(factorial(g.n()), g.n() >= 4)
        }
        LeafClass::Small => small_summary(g),
    }
}

/// By search; meant for base graphs on a handful of vertices.
pub(crate) fn small_summary(g: &Graph) -> SymmetrySummary {
    SymmetrySummary::new(
        BigUint::from(count_automorphisms(g)),
        schmidt_bruteforce_colored(g, &vec![0; g.n()]).is_some(),
    )
}

pub fn structural_summary(d: &DecompTree) -> SymmetrySummary {
    match d.kind() {
        NodeKind::Leaf(class) => leaf_summary(d.graph(), *class),
        NodeKind::Sum(children) | NodeKind::CoSum(children) => {
            let parts: Vec<Part> = children
                .iter()
                .map(|c| {
                    let s = structural_summary(&c.tree);
                    (s.aut_order, s.satisfies_schmidt, c.mult)
                })
                .collect();
            combine(&parts)
        }
    }
}

pub fn aut_order_structural(d: &DecompTree) -> BigUint {
    structural_summary(d).aut_order
}

pub fn schmidt_structural(d: &DecompTree) -> bool {
    structural_summary(d).satisfies_schmidt
}

/// Decomposition when `g` lies in a supported class, backtracking when it is
/// small enough, [`Error::Unsupported`] otherwise.
pub fn symmetry_summary(g: &Graph, cfg: &AutConfig) -> Result<SymmetrySummary> {
    for base in [BaseClass::TreeCograph, BaseClass::G5] {
        if let Some(d) = decompose(g, base) {
            return Ok(structural_summary(&d));
        }
    }
    if g.n() <= cfg.max_n {
        return Ok(small_summary(g));
    }
    Err(Error::Unsupported(format!(
        "graph on {} vertices is in no supported class and above the search limit {}",
        g.n(),
        cfg.max_n
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphisms::count_automorphisms_colored;
    use crate::decomposition::{build_x, enumerate_rooted_trees};
    use crate::graph::disjoint_sum;
    use crate::graph::families::*;

    fn cograph(g: &Graph) -> DecompTree {
        decompose(g, BaseClass::Cograph).unwrap()
    }

    #[test]
    fn orders() {
        assert_eq!(aut_order_structural(&cograph(&edgeless(6))), factorial(6));
        let g = disjoint_sum(&[complete(3), complete(2)]);
        assert_eq!(aut_order_structural(&cograph(&g)), BigUint::from(12u32));
    }

    #[test]
    fn schmidt_examples() {
        assert!(schmidt_structural(&cograph(&complete(2).repeat(2))));
        assert!(!schmidt_structural(&cograph(&build_x(5).unwrap())));
        assert!(schmidt_structural(&cograph(&edgeless(4))));
        assert!(!schmidt_structural(&cograph(&edgeless(3))));
    }

    #[test]
    fn summaries() {
        let cfg = AutConfig::default();
        let s = symmetry_summary(&path(4), &cfg).unwrap();
        assert_eq!((s.aut_order.clone(), s.is_asymmetric, s.satisfies_schmidt), (BigUint::from(2u32), false, false));
        let s = symmetry_summary(&complete(4), &cfg).unwrap();
        assert_eq!((s.aut_order.clone(), s.satisfies_schmidt), (BigUint::from(24u32), true));
        let s = symmetry_summary(&bull(), &cfg).unwrap();
        assert_eq!((s.aut_order.clone(), s.satisfies_schmidt), (BigUint::from(2u32), false));
        // far past the search limit
        let s = symmetry_summary(&edgeless(30), &cfg).unwrap();
        assert_eq!(s.aut_order, factorial(30));
    }

    #[test]
    fn rooted_examples() {
        let single = RootedForest::new(complete(1), vec![0]).unwrap();
        assert!(!rooted_schmidt(&single));
        assert!(rooted_aut_order(&single).is_one());
        // two copies of a cherry rooted at its center
        let f = RootedForest::new(star(2).repeat(2), vec![0, 3]).unwrap();
        assert!(rooted_schmidt(&f));
        assert_eq!(rooted_aut_order(&f), BigUint::from(8u32));
    }

    #[test]
    fn rooted_orders_match_search() {
        for n in 1..=8 {
            for t in enumerate_rooted_trees(n).unwrap() {
                let f = t.as_forest();
                let brute = count_automorphisms_colored(f.graph(), &f.root_colors());
                assert_eq!(rooted_aut_order(&f), BigUint::from(brute));
                let brute_s = schmidt_bruteforce_colored(f.graph(), &f.root_colors()).is_some();
                assert_eq!(rooted_tree_summary(&t).satisfies_schmidt, brute_s);
            }
        }
    }
}
