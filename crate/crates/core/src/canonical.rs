//! Canonical keys, isomorphism testing, rooted trees, the center-rooting map
//! and the unrooting embedding.

use std::fmt;

use crate::automorphisms::find_isomorphism;
use crate::decomposition::{decompose, BaseClass, DecompTree};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::refine;

/// Byte string identifying an isomorphism class within one family of objects.
/// Displayed as lowercase hex.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonKey(Vec<u8>);

impl CanonKey {
    pub fn from_bytes(bytes: Vec<u8>) -> Self {
        CanonKey(bytes)
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        hex::encode(&self.0)
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        hex::decode(s)
            .map(CanonKey)
            .map_err(|e| Error::ExprParse {
                pos: 0,
                msg: format!("bad hex key: {e}"),
            })
    }

    /// `len:bytes`, so that concatenations of framed keys are unambiguous.
    pub(crate) fn framed(&self) -> Vec<u8> {
        let mut out = format!("{}:", self.0.len()).into_bytes();
        out.extend_from_slice(&self.0);
        out
    }
}

impl fmt::Display for CanonKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl fmt::Debug for CanonKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonKey({})", String::from_utf8_lossy(&self.0))
    }
}

/// Key of an arbitrary graph from its canonical relabelling. Complete, but
/// only cheap for small or very regular graphs.
pub fn small_graph_key(g: &Graph) -> CanonKey {
    let (s, _) = refine::canonical(g);
    let mut out = b"G".to_vec();
    out.extend_from_slice(s.as_bytes());
    CanonKey(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedTree {
    graph: Graph,
    root: usize,
}

impl RootedTree {
    pub fn new(graph: Graph, root: usize) -> Result<Self> {
        if !graph.is_tree() {
            return Err(Error::NotATree);
        }
        graph.check_vertex(root)?;
        Ok(RootedTree { graph, root })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// `T \ {r}`, rooted at the former neighbours of `r`. Vertices above `r`
    /// shift down by one.
    pub fn remove_root(&self) -> RootedForest {
        let r = self.root;
        let graph = self.graph.remove_vertices(&[r]).expect("root in range");
        let roots = self
            .graph
            .neighbors(r)
            .map(|v| if v > r { v - 1 } else { v })
            .collect();
        RootedForest {
            graph,
            roots: VertexSet::from_sorted(roots),
        }
    }

    pub fn as_forest(&self) -> RootedForest {
        RootedForest {
            graph: self.graph.clone(),
            roots: VertexSet::from_sorted(vec![self.root]),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedForest {
    graph: Graph,
    roots: VertexSet,
}

impl RootedForest {
    /// `roots` must pick exactly one vertex of every component.
    pub fn new(graph: Graph, mut roots: Vec<usize>) -> Result<Self> {
        if !graph.is_forest() {
            return Err(Error::NotAForest);
        }
        for &r in &roots {
            graph.check_vertex(r)?;
        }
        roots.sort_unstable();
        let labels = graph.component_labels();
        let mut hit = vec![false; graph.component_count()];
        for &r in &roots {
            if std::mem::replace(&mut hit[labels[r]], true) {
                return Err(Error::InvalidRoots(format!(
                    "two roots in the component of vertex {r}"
                )));
            }
        }
        if let Some(c) = hit.iter().position(|h| !h) {
            let v = labels.iter().position(|&l| l == c).expect("component non-empty");
            return Err(Error::InvalidRoots(format!(
                "no root in the component of vertex {v}"
            )));
        }
        Ok(RootedForest {
            graph,
            roots: VertexSet::from_sorted(roots),
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn roots(&self) -> &VertexSet {
        &self.roots
    }

    pub fn components(&self) -> Vec<RootedTree> {
        self.graph
            .connected_components()
            .into_iter()
            .map(|(set, graph)| {
                let root = set
                    .iter()
                    .position(|v| self.roots.contains(v))
                    .expect("one root per component");
                RootedTree { graph, root }
            })
            .collect()
    }

    /// A new vertex joined to every root; it becomes vertex `n` and the root.
    pub fn plant(&self) -> RootedTree {
        let n = self.graph.n();
        let mut graph = crate::graph::disjoint_sum(&[self.graph.clone(), Graph::new(1)]);
        for r in self.roots.iter() {
            graph.set_edge_unchecked(r, n);
        }
        RootedTree { graph, root: n }
    }

    /// Vertex colouring marking the roots, for coloured automorphism searches.
    pub fn root_colors(&self) -> Vec<usize> {
        (0..self.graph.n())
            .map(|v| usize::from(self.roots.contains(v)))
            .collect()
    }
}

/// A rooted tree up to isomorphism: its key, size, and the classes of the
/// subtrees hanging below the root, with multiplicities, sorted by key.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedShape {
    pub key: CanonKey,
    pub size: usize,
    pub children: Vec<(RootedShape, usize)>,
}

fn group_shapes(mut shapes: Vec<RootedShape>) -> Vec<(RootedShape, usize)> {
    shapes.sort_by(|a, b| a.key.cmp(&b.key));
    let mut out: Vec<(RootedShape, usize)> = Vec::new();
    for s in shapes {
        match out.last_mut() {
            Some((last, m)) if last.key == s.key => *m += 1,
            _ => out.push((s, 1)),
        }
    }
    out
}

fn shape_at(g: &Graph, v: usize, parent: Option<usize>) -> RootedShape {
    let kids: Vec<RootedShape> = g
        .neighbors(v)
        .filter(|&w| Some(w) != parent)
        .map(|w| shape_at(g, w, Some(v)))
        .collect();
    let children = group_shapes(kids);
    let mut key = b"(".to_vec();
    let mut size = 1;
    for (c, m) in &children {
        for _ in 0..*m {
            key.extend_from_slice(c.key.as_bytes());
        }
        size += c.size * m;
    }
    key.push(b')');
    RootedShape {
        key: CanonKey(key),
        size,
        children,
    }
}

pub fn rooted_shape(t: &RootedTree) -> RootedShape {
    shape_at(&t.graph, t.root, None)
}

/// Components of a rooted forest grouped by rooted isomorphism class.
pub fn rooted_forest_shape(f: &RootedForest) -> Vec<(RootedShape, usize)> {
    group_shapes(f.components().iter().map(rooted_shape).collect())
}

/// AHU encoding: a vertex is `(` followed by its children's encodings in
/// sorted order, then `)`.
pub fn rooted_tree_canonical(t: &RootedTree) -> CanonKey {
    rooted_shape(t).key
}

pub fn rooted_forest_canonical(f: &RootedForest) -> CanonKey {
    let mut out = b"F".to_vec();
    for (s, m) in rooted_forest_shape(f) {
        out.extend(s.key.framed());
        out.extend(format!("*{m};").bytes());
    }
    CanonKey(out)
}

/// Roots a tree at its center, subdividing the central edge if there is one.
/// The subdivision vertex is appended last.
pub fn psi(t: &Graph) -> Result<RootedTree> {
    if !t.is_tree() {
        return Err(Error::NotATree);
    }
    let z = t.center()?;
    match *z.as_slice() {
        [x] => Ok(RootedTree {
            graph: t.clone(),
            root: x,
        }),
        [x, y] => {
            let n = t.n();
            let mut g = crate::graph::disjoint_sum(&[t.clone(), Graph::new(1)]);
            let mut edges = g.edges();
            edges.retain(|&e| e != (x, y));
            edges.push((x, n));
            edges.push((y, n));
            g = Graph::from_edges(n + 1, &edges)?;
            Ok(RootedTree { graph: g, root: n })
        }
        _ => unreachable!("the center of a tree has one or two vertices"),
    }
}

/// Vertex count followed by the AHU key of the center-rooted tree.
pub fn tree_canonical(t: &Graph) -> Result<CanonKey> {
    let r = psi(t)?;
    let mut out = format!("T{}:", t.n()).into_bytes();
    out.extend_from_slice(rooted_tree_canonical(&r).as_bytes());
    Ok(CanonKey(out))
}

/// The key cached at the root of a decomposition tree.
pub fn decomp_canonical(d: &DecompTree) -> CanonKey {
    d.key().clone()
}

/// A tree containing `f` whose automorphisms are exactly the root-preserving
/// automorphisms of `f`, extended by the identity.
///
/// The vertices of `f` keep their labels, the new center `x` is vertex `n`,
/// and `d = max(2, 1 + Δ(f))` pendant paths follow. Their vertex counts are
/// consecutive, starting one above the longest component of `f` that is a
/// path rooted at an end.
pub fn unroot_embed(f: &RootedForest) -> Graph {
    let g = &f.graph;
    let n = g.n();
    let d = (1 + g.max_degree()).max(2);
    let longest_rooted_path = f
        .components()
        .iter()
        .filter(|t| {
            let h = &t.graph;
            h.degree(t.root) <= 1 && (0..h.n()).all(|v| h.degree(v) <= 2)
        })
        .map(|t| t.graph.n())
        .max()
        .unwrap_or(0);
    let lengths: Vec<usize> = (1..=d).map(|i| longest_rooted_path + i).collect();
    let total = n + 1 + lengths.iter().sum::<usize>();
    let mut out = Graph::new(total);
    for (u, v) in g.edges() {
        out.set_edge_unchecked(u, v);
    }
    let x = n;
    for r in f.roots.iter() {
        out.set_edge_unchecked(x, r);
    }
    let mut next = n + 1;
    for len in lengths {
        out.set_edge_unchecked(x, next);
        for i in 1..len {
            out.set_edge_unchecked(next + i - 1, next + i);
        }
        next += len;
    }
    out
}

/// Largest graph handed to the unrestricted backtracking fallback.
pub const BRUTE_FORCE_ISO_LIMIT: usize = 8;

/// Isomorphism test dispatching on the class of the inputs: keys from the
/// decomposition when both graphs lie in a supported class, backtracking for
/// small graphs, and [`Error::Unsupported`] otherwise.
pub fn iso_test(g: &Graph, h: &Graph) -> Result<bool> {
    if g.n() != h.n() || g.edge_count() != h.edge_count() {
        return Ok(false);
    }
    let mut dg = g.degrees();
    let mut dh = h.degrees();
    dg.sort_unstable();
    dh.sort_unstable();
    if dg != dh {
        return Ok(false);
    }
    for base in [BaseClass::TreeCograph, BaseClass::G5] {
        match (decompose(g, base), decompose(h, base)) {
            (Some(a), Some(b)) => return Ok(a.key() == b.key()),
            (None, None) => {}
            _ => return Ok(false),
        }
    }
    if g.n() <= BRUTE_FORCE_ISO_LIMIT {
        return Ok(find_isomorphism(g, h).is_some());
    }
    Err(Error::Unsupported(format!(
        "isomorphism of unclassified graphs on {} vertices",
        g.n()
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphisms::{count_automorphisms, count_automorphisms_colored};
    use crate::graph::families::*;
    use crate::graph::disjoint_sum;

    #[test]
    fn rooted_keys() {
        let k1 = RootedTree::new(complete(1), 0).unwrap();
        assert_eq!(rooted_tree_canonical(&k1).as_bytes(), b"()");
        let mid = RootedTree::new(path(3), 1).unwrap();
        let end = RootedTree::new(path(3), 0).unwrap();
        assert_eq!(rooted_tree_canonical(&mid).as_bytes(), b"(()())");
        assert_eq!(rooted_tree_canonical(&end).as_bytes(), b"((()))");
    }

    #[test]
    fn tree_keys() {
        assert_ne!(tree_canonical(&path(4)).unwrap(), tree_canonical(&star(3)).unwrap());
        assert_eq!(
            tree_canonical(&path(5)).unwrap(),
            tree_canonical(&path(5).relabel(&[2, 4, 0, 1, 3]).unwrap()).unwrap()
        );
        assert_eq!(tree_canonical(&cycle(4)), Err(Error::NotATree));
    }

    #[test]
    fn psi_examples() {
        let p = psi(&path(3)).unwrap();
        assert_eq!((p.graph().clone(), p.root()), (path(3), 1));
        let p = psi(&complete(2)).unwrap();
        assert_eq!(p.graph().edges(), vec![(0, 2), (1, 2)]);
        assert_eq!(p.root(), 2);
        let p = psi(&path(4)).unwrap();
        assert_eq!(p.graph().n(), 5);
        assert_eq!(p.root(), 4);
        assert!(p.graph().has_edge(1, 4) && p.graph().has_edge(2, 4));
        assert!(!p.graph().has_edge(1, 2));
    }

    #[test]
    fn forests_and_roots() {
        let g = disjoint_sum(&[path(3), complete(1)]);
        assert!(RootedForest::new(g.clone(), vec![1, 3]).is_ok());
        assert!(matches!(RootedForest::new(g.clone(), vec![1]), Err(Error::InvalidRoots(_))));
        assert!(matches!(RootedForest::new(g.clone(), vec![0, 1, 3]), Err(Error::InvalidRoots(_))));
        assert_eq!(RootedForest::new(cycle(3), vec![0]), Err(Error::NotAForest));
        let t = RootedTree::new(star(3), 0).unwrap();
        let f = t.remove_root();
        assert_eq!(f.graph(), &edgeless(3));
        assert_eq!(f.roots().as_slice(), &[0, 1, 2]);
        let back = f.plant();
        assert_eq!(rooted_tree_canonical(&back), rooted_tree_canonical(&t));
    }

    #[test]
    fn unroot_examples() {
        let single = RootedForest::new(complete(1), vec![0]).unwrap();
        let g = unroot_embed(&single);
        assert!(g.is_tree());
        assert_eq!(count_automorphisms(&g), 1);

        let two = RootedForest::new(edgeless(2), vec![0, 1]).unwrap();
        let g = unroot_embed(&two);
        assert!(g.is_tree());
        assert_eq!(count_automorphisms(&g), 2);

        // a root-ended path of length 3 must not collide with a pendant path
        let f = RootedForest::new(disjoint_sum(&[path(3), path(3)]), vec![0, 4]).unwrap();
        let g = unroot_embed(&f);
        let rooted = count_automorphisms_colored(f.graph(), &f.root_colors());
        assert_eq!(count_automorphisms(&g), rooted);
        assert_eq!(g.induced_subgraph(&(0..6).collect::<Vec<_>>()).unwrap(), *f.graph());
    }

    #[test]
    fn iso_dispatch() {
        assert!(iso_test(&path(4), &path(4).complement()).unwrap());
        assert!(!iso_test(&cycle(5), &bull()).unwrap());
        assert!(iso_test(&bull(), &bull()).unwrap());
        assert!(!iso_test(&cycle(6), &complete(3).repeat(2)).unwrap());
        // pentagonal prism: connected, co-connected, 10 vertices
        let prism = Graph::from_edges(
            10,
            &[
                (0, 1), (1, 2), (2, 3), (3, 4), (4, 0),
                (5, 6), (6, 7), (7, 8), (8, 9), (9, 5),
                (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
            ],
        )
        .unwrap();
        assert!(matches!(iso_test(&prism, &prism), Err(Error::Unsupported(_))));
    }
}
