//! Small worked examples through the public API, one module after another.

use num_bigint::BigUint;
use qautgraph::automorphisms::{count_automorphisms, schmidt_bruteforce, AutConfig, Permutation};
use qautgraph::canonical::{iso_test, psi, tree_canonical};
use qautgraph::decomposition::{
    build_x, build_y, decompose, recognize_g5_cograph, recognize_tree_cograph, BaseClass,
    LeafClass, NodeKind,
};
use qautgraph::graph::{disjoint_sum, families::*};
use qautgraph::homcount::{hom_component_product, lovasz_sum, CountConfig};
use qautgraph::io::{parse_graph6, write_graph6};
use qautgraph::magic::{
    block_qi_embed, check_eccentricity_blocks, is_quantum_iso, MagicUnitary,
};
use qautgraph::quantum_expr::{qu_expr, QExpr};
use qautgraph::schmidt::symmetry_summary;
use qautgraph::Graph;

#[test]
fn graph6_star() {
    let g = parse_graph6("D?{").unwrap();
    assert_eq!(g.edges(), vec![(0, 4), (1, 4), (2, 4), (3, 4)]);
    assert!(iso_test(&g, &star(4)).unwrap());
    assert_eq!(write_graph6(&g), "D?{");
}

#[test]
fn sums_and_complements() {
    assert!(complete(4).complement().is_edgeless());
    assert!(iso_test(&path(4).complement(), &path(4)).unwrap());
    let s = disjoint_sum(&[complete(2), complete(3)]);
    assert_eq!((s.n(), s.edge_count()), (5, 4));
    let sizes: Vec<usize> = s.connected_components().iter().map(|(v, _)| v.len()).collect();
    assert_eq!(sizes, vec![2, 3]);
}

#[test]
fn z_family() {
    assert!(build_x(2).unwrap().is_edgeless());
    assert!(build_y(2).unwrap().is_complete());
    let y3 = build_y(3).unwrap();
    assert!(y3.is_edgeless() && y3.n() == 3);
    for n in 1..=8 {
        assert_eq!(build_x(n).unwrap().n(), n);
    }
}

#[test]
fn class_boundaries() {
    assert!(decompose(&path(4), BaseClass::Cograph).is_none());
    assert!(decompose(&path(6), BaseClass::G5).is_none());
    assert!(recognize_tree_cograph(&path(6)));
    let c5 = decompose(&cycle(5), BaseClass::G5).unwrap();
    assert_eq!(c5.kind(), &NodeKind::Leaf(LeafClass::Small));
    assert!(recognize_g5_cograph(&cycle(5)) && !recognize_tree_cograph(&cycle(5)));
    assert!(!recognize_tree_cograph(&bull()));
}

#[test]
fn trees_through_psi() {
    let k2 = psi(&complete(2)).unwrap();
    assert_eq!(k2.graph().n(), 3);
    assert_eq!(k2.graph().degree(k2.root()), 2);
    assert_ne!(tree_canonical(&path(4)).unwrap(), tree_canonical(&star(3)).unwrap());
}

#[test]
fn symmetry_of_named_graphs() {
    let cfg = AutConfig::default();
    assert_eq!(count_automorphisms(&complete(4)), 24);
    assert_eq!(count_automorphisms(&cycle(5)), 10);
    assert!(!schmidt_bruteforce(&cycle(5), &cfg).unwrap().0);
    assert!(!schmidt_bruteforce(&complete(1), &cfg).unwrap().0);
    let x5 = symmetry_summary(&build_x(5).unwrap(), &cfg).unwrap();
    assert!(!x5.satisfies_schmidt);
    let four = symmetry_summary(&edgeless(4), &cfg).unwrap();
    assert!(four.satisfies_schmidt);
    assert_eq!(four.aut_order, BigUint::from(24u32));
}

#[test]
fn quantum_groups() {
    assert_eq!(qu_expr(&complete(4)).unwrap(), QExpr::SPlus(4));
    let q = qu_expr(&disjoint_sum(&[star(3), star(3), complete(1)])).unwrap();
    assert_eq!(q.to_string(), "Wr(S+(3),2)");
    assert_eq!(q.classical_order(), BigUint::from(72u32));
    assert!(qu_expr(&cycle(6)).is_err());
    // a tree and its complement share the same group
    let t = chair();
    assert_eq!(qu_expr(&t).unwrap(), qu_expr(&t.complement()).unwrap());
}

#[test]
fn counting() {
    let cfg = CountConfig::default();
    assert_eq!(lovasz_sum(&complete(2), &complete(2), &cfg).unwrap(), 2);
    assert_eq!(lovasz_sum(&complete(1), &pan(), &cfg).unwrap(), 5);
    let g = disjoint_sum(&[complete(2), complete(1)]);
    assert_eq!(hom_component_product(&g, &complete(3), &cfg).unwrap(), 18);
}

#[test]
fn quantum_isomorphism_helpers() {
    let g = pan();
    let sigma = Permutation::from_images(vec![4, 2, 0, 1, 3]).unwrap();
    let h: Graph = g.relabel(sigma.images()).unwrap();
    let u = MagicUnitary::from_permutation(&sigma, 2);
    assert!(is_quantum_iso(&u, &g, &h).unwrap());
    assert!(!is_quantum_iso(&u, &g, &g).unwrap());
    assert!(check_eccentricity_blocks(&u, &g, &h).unwrap().passed);
    let e = block_qi_embed(&u);
    assert_eq!(e.n(), 10);
}
