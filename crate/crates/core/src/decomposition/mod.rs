//! Decomposition trees for graphs built from a base class by disjoint sums
//! and complements, and recognition of the classes used in this crate.
//!
//! A graph `g` of the closure lies in the base class, or is disconnected (a
//! sum of its components), or has a disconnected complement (the complement
//! of a sum). Recursing on that case split gives a tree that is unique once
//! the children of every node are grouped by isomorphism and sorted by key.

mod enumerate;

pub use enumerate::{
    enumerate_forests, enumerate_graphs, enumerate_rooted_trees, enumerate_trees,
    MAX_ENUMERATED_GRAPH, MAX_ENUMERATED_TREE,
};

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::canonical::{small_graph_key, tree_canonical, CanonKey};
use crate::error::{Error, Result};
use crate::graph::{disjoint_sum, Graph};
use crate::io::write_graph6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BaseClass {
    /// `{K_1}`; its closure is the class of cographs.
    Cograph,
    /// Trees, complements of trees, complete and edgeless graphs.
    TreeCograph,
    /// Every graph on at most five vertices.
    G5,
}

/// Which base-class description matched a leaf. The checks run in the order
/// of the variants, so the tag is a function of the isomorphism class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LeafClass {
    SingleVertex,
    Tree,
    CoTree,
    Complete,
    Edgeless,
    Small,
}

impl BaseClass {
    pub fn classify(self, g: &Graph) -> Option<LeafClass> {
        let n = g.n();
        if n == 0 {
            return None;
        }
        if n == 1 {
            return Some(LeafClass::SingleVertex);
        }
        match self {
            BaseClass::Cograph => None,
            BaseClass::TreeCograph => {
                if g.is_tree() {
                    Some(LeafClass::Tree)
                } else if g.complement().is_tree() {
                    Some(LeafClass::CoTree)
                } else if g.is_complete() {
                    Some(LeafClass::Complete)
                } else if g.is_edgeless() {
                    Some(LeafClass::Edgeless)
                } else {
                    None
                }
            }
            BaseClass::G5 => (n <= 5).then_some(LeafClass::Small),
        }
    }

    pub fn contains(self, g: &Graph) -> bool {
        self.classify(g).is_some()
    }

    pub fn name(self) -> &'static str {
        match self {
            BaseClass::Cograph => "cograph",
            BaseClass::TreeCograph => "tree-cograph",
            BaseClass::G5 => "g5-cograph",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Child {
    pub tree: DecompTree,
    pub mult: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Leaf(LeafClass),
    /// Disjoint sum of the children.
    Sum(Vec<Child>),
    /// Complement of the disjoint sum of the children.
    CoSum(Vec<Child>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompTree {
    kind: NodeKind,
    graph: Graph,
    key: CanonKey,
}

impl DecompTree {
    pub fn kind(&self) -> &NodeKind {
        &self.kind
    }

    /// The graph this node represents, in the labelling it was found in.
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// Isomorphism-complete key within the base class the tree was built for.
    pub fn key(&self) -> &CanonKey {
        &self.key
    }

    pub fn children(&self) -> &[Child] {
        match &self.kind {
            NodeKind::Leaf(_) => &[],
            NodeKind::Sum(c) | NodeKind::CoSum(c) => c,
        }
    }

    /// Rebuilds a graph from the tree alone.
    pub fn evaluate(&self) -> Graph {
        match &self.kind {
            NodeKind::Leaf(_) => self.graph.clone(),
            NodeKind::Sum(children) => sum_of(children),
            NodeKind::CoSum(children) => sum_of(children).complement(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(DecompJson::from(self)).expect("tree serialises")
    }

    pub fn depth(&self) -> usize {
        1 + self
            .children()
            .iter()
            .map(|c| c.tree.depth())
            .max()
            .unwrap_or(0)
    }
}

fn sum_of(children: &[Child]) -> Graph {
    let parts: Vec<Graph> = children
        .iter()
        .flat_map(|c| std::iter::repeat_n(c.tree.evaluate(), c.mult))
        .collect();
    disjoint_sum(&parts)
}

#[derive(Serialize)]
struct DecompJson {
    kind: &'static str,
    graph6: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    leaf: Option<LeafClass>,
    children: Vec<ChildJson>,
}

#[derive(Serialize)]
struct ChildJson {
    tree: DecompJson,
    mult: usize,
}

impl From<&DecompTree> for DecompJson {
    fn from(d: &DecompTree) -> Self {
        let (kind, leaf) = match d.kind {
            NodeKind::Leaf(c) => ("leaf", Some(c)),
            NodeKind::Sum(_) => ("sum", None),
            NodeKind::CoSum(_) => ("cosum", None),
        };
        DecompJson {
            kind,
            graph6: write_graph6(&d.graph),
            leaf,
            children: d
                .children()
                .iter()
                .map(|c| ChildJson {
                    tree: DecompJson::from(&c.tree),
                    mult: c.mult,
                })
                .collect(),
        }
    }
}

fn leaf_key(g: &Graph, class: LeafClass) -> CanonKey {
    let bytes = match class {
        LeafClass::SingleVertex => b"K1".to_vec(),
        LeafClass::Tree => tree_canonical(g).expect("leaf is a tree").as_bytes().to_vec(),
        LeafClass::CoTree => {
            let mut b = b"C".to_vec();
            b.extend_from_slice(
                tree_canonical(&g.complement())
                    .expect("leaf complement is a tree")
                    .as_bytes(),
            );
            b
        }
        LeafClass::Complete => format!("K{}", g.n()).into_bytes(),
        LeafClass::Edgeless => format!("E{}", g.n()).into_bytes(),
        LeafClass::Small => small_graph_key(g).as_bytes().to_vec(),
    };
    CanonKey::from_bytes(bytes)
}

/// Decomposes each part, groups isomorphic parts and sorts the groups.
fn group(parts: Vec<Graph>, base: BaseClass) -> Option<Vec<Child>> {
    let mut trees = parts
        .into_iter()
        .map(|p| decompose(&p, base))
        .collect::<Option<Vec<_>>>()?;
    trees.sort_by(|a, b| a.key.cmp(&b.key));
    let mut out: Vec<Child> = Vec::new();
    for t in trees {
        match out.last_mut() {
            Some(c) if c.tree.key == t.key => c.mult += 1,
            _ => out.push(Child { tree: t, mult: 1 }),
        }
    }
    Some(out)
}

fn node_key(tag: u8, children: &[Child]) -> CanonKey {
    let mut out = vec![tag];
    for c in children {
        out.extend(c.tree.key.framed());
        out.extend(format!("*{};", c.mult).bytes());
    }
    CanonKey::from_bytes(out)
}

/// `None` when `g` is not in the closure of `base`. The graph with no
/// vertices is in no class.
///
/// Components are grouped by key. Keys are complete for the class, so this
/// is grouping by isomorphism.
pub fn decompose(g: &Graph, base: BaseClass) -> Option<DecompTree> {
    if let Some(class) = base.classify(g) {
        return Some(DecompTree {
            kind: NodeKind::Leaf(class),
            graph: g.clone(),
            key: leaf_key(g, class),
        });
    }
    if g.n() == 0 {
        return None;
    }
    let comps = g.connected_components();
    if comps.len() > 1 {
        let children = group(comps.into_iter().map(|(_, h)| h).collect(), base)?;
        return Some(DecompTree {
            key: node_key(b'S', &children),
            kind: NodeKind::Sum(children),
            graph: g.clone(),
        });
    }
    let co_comps = g.complement().connected_components();
    if co_comps.len() > 1 {
        let children = group(co_comps.into_iter().map(|(_, h)| h).collect(), base)?;
        return Some(DecompTree {
            key: node_key(b'C', &children),
            kind: NodeKind::CoSum(children),
            graph: g.clone(),
        });
    }
    None
}

/// Whether `g` contains an induced path on four vertices `a-b-c-d`.
pub fn has_induced_p4(g: &Graph) -> bool {
    for (b, c) in g.edges() {
        for (b, c) in [(b, c), (c, b)] {
            let mut ends_a: FixedBitSet = g.neighbor_set(b).clone();
            ends_a.difference_with(g.neighbor_set(c));
            ends_a.set(c, false);
            let mut ends_d: FixedBitSet = g.neighbor_set(c).clone();
            ends_d.difference_with(g.neighbor_set(b));
            ends_d.set(b, false);
            for a in ends_a.ones() {
                // d adjacent to c while a is not, so d != a
                if !g.neighbor_set(a).is_superset(&ends_d) {
                    return true;
                }
            }
        }
    }
    false
}

/// Cographs, decided twice: by decomposition and by an induced-`P_4` scan.
/// The two answers must agree.
pub fn recognize_cograph(g: &Graph) -> bool {
    if g.n() == 0 {
        return true;
    }
    let by_tree = decompose(g, BaseClass::Cograph).is_some();
    let by_scan = !has_induced_p4(g);
    assert_eq!(
        by_tree, by_scan,
        "cograph recognisers disagree on {}",
        write_graph6(g)
    );
    by_tree
}

pub fn recognize_forest(g: &Graph) -> bool {
    g.is_forest()
}

pub fn recognize_tree_cograph(g: &Graph) -> bool {
    decompose(g, BaseClass::TreeCograph).is_some()
}

pub fn recognize_g5_cograph(g: &Graph) -> bool {
    decompose(g, BaseClass::G5).is_some()
}

/// `Z_1(G) = G` and `Z_{k+1}(G) = K_1 + Z_k(G)^c`; the new vertex is appended.
pub fn build_z(g: &Graph, n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidArgument("Z_n needs n >= 1".into()));
    }
    let mut z = g.clone();
    for _ in 1..n {
        z = disjoint_sum(&[z.complement(), Graph::new(1)]);
    }
    Ok(z)
}

/// `X_n = Z_n(K_1)`, on `n` vertices.
pub fn build_x(n: usize) -> Result<Graph> {
    build_z(&Graph::new(1), n)
}

/// `Y_n = Z_{n-1}(K_2)`, on `n` vertices.
pub fn build_y(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidArgument("Y_n needs n >= 2".into()));
    }
    build_z(&crate::graph::families::complete(2), n - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphisms::are_isomorphic;
    use crate::graph::families::*;

    #[test]
    fn examples() {
        assert!(decompose(&path(4), BaseClass::Cograph).is_none());
        assert!(decompose(&path(6), BaseClass::G5).is_none());
        let c5 = decompose(&cycle(5), BaseClass::G5).unwrap();
        assert_eq!(c5.kind(), &NodeKind::Leaf(LeafClass::Small));
        assert!(decompose(&Graph::new(0), BaseClass::Cograph).is_none());
    }

    #[test]
    fn recognisers() {
        assert!(!recognize_tree_cograph(&bull()));
        assert!(recognize_tree_cograph(&path(7)));
        assert!(recognize_forest(&path(7)));
        assert!(recognize_g5_cograph(&cycle(5)));
        assert!(!recognize_tree_cograph(&cycle(5)));
        assert!(recognize_cograph(&complete(3).repeat(2)));
        assert!(!recognize_cograph(&path(4)));
        assert!(!recognize_cograph(&cycle(5)));
        assert!(recognize_cograph(&cycle(4)));
    }

    #[test]
    fn sum_grouping() {
        let g = disjoint_sum(&[complete(2), complete(1), complete(2)]);
        let d = decompose(&g, BaseClass::Cograph).unwrap();
        let NodeKind::Sum(ch) = d.kind() else { panic!() };
        let mults: Vec<usize> = ch.iter().map(|c| c.mult).collect();
        assert_eq!(mults.iter().sum::<usize>(), 3);
        assert_eq!(ch.len(), 2);
        assert!(are_isomorphic(&d.evaluate(), &g));
        let d = decompose(&complete(4), BaseClass::Cograph).unwrap();
        let NodeKind::CoSum(ch) = d.kind() else { panic!() };
        assert_eq!((ch.len(), ch[0].mult), (1, 4));
    }

    #[test]
    fn z_family() {
        assert_eq!(build_x(2).unwrap(), edgeless(2));
        assert_eq!(build_y(2).unwrap(), complete(2));
        assert_eq!(build_y(3).unwrap(), edgeless(3));
        assert_eq!(build_x(1).unwrap(), complete(1));
        for n in 1..9 {
            assert_eq!(build_x(n).unwrap().n(), n);
            assert_eq!(build_z(&cycle(5), n).unwrap().n(), n + 4);
        }
        for n in 2..9 {
            assert_eq!(build_y(n).unwrap().n(), n);
        }
        assert!(build_y(1).is_err());
        assert!(build_x(0).is_err());
    }

    #[test]
    fn json_shape() {
        let d = decompose(&complete(2).repeat(2), BaseClass::Cograph).unwrap();
        let j = d.to_json();
        assert_eq!(j["kind"], "sum");
        assert_eq!(j["children"][0]["mult"], 2);
        assert_eq!(j["children"][0]["tree"]["kind"], "cosum");
        let leaf = &j["children"][0]["tree"]["children"][0]["tree"];
        assert_eq!(leaf["kind"], "leaf");
        assert_eq!(leaf["graph6"], "@");
    }

    #[test]
    fn p4_scan() {
        assert!(has_induced_p4(&path(4)));
        assert!(has_induced_p4(&path(4).complement()));
        assert!(!has_induced_p4(&complete(5)));
        assert!(!has_induced_p4(&star(4)));
        assert!(has_induced_p4(&pan()));
    }
}
