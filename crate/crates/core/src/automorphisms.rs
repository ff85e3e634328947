//! Automorphisms and isomorphisms of small graphs by backtracking.
//!
//! All searches share one engine: both graphs are colour-refined together
//! (so colours are comparable across them), then vertices of the first graph
//! are mapped in the order `0, 1, .., n-1`, each to an unused vertex of the
//! same colour, checking adjacency against every vertex mapped so far. With
//! candidates tried in ascending order, maps are produced in lexicographic
//! order of their image sequences. Constraints such as fixed points or a
//! prescribed image are expressed through the initial colourings.

use std::fmt;
use std::ops::ControlFlow;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::graph::{disjoint_sum, Graph, VertexSet};
use crate::refine::refine;

/// A bijection of `{0, .., n-1}`, stored as its image sequence.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        VertexSet::new(images.clone(), n)
            .map_err(|e| Error::InvalidPermutation(e.to_string()))?;
        Ok(Permutation { images })
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        if a >= n || b >= n {
            return Err(Error::InvalidPermutation(format!(
                "transposition ({a} {b}) on {n} points"
            )));
        }
        images.swap(a, b);
        Ok(Permutation { images })
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.n(), other.n(), "composing permutations of different degree");
        Permutation {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.n()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { images: inv }
    }

    /// The moved points, ascending.
    pub fn support(&self) -> VertexSet {
        VertexSet::from_sorted(
            (0..self.n()).filter(|&i| self.images[i] != i).collect(),
        )
    }

    fn support_bits(&self) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.n());
        for i in 0..self.n() {
            if self.images[i] != i {
                s.insert(i);
            }
        }
        s
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Whether `uv ∈ E(g) ⇔ σ(u)σ(v) ∈ E(g)`.
    pub fn is_automorphism_of(&self, g: &Graph) -> bool {
        self.n() == g.n()
            && g.edges()
                .iter()
                .all(|&(u, v)| g.has_edge(self.images[u], self.images[v]))
    }

    /// Disjoint cycles of length at least two, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for s in 0..self.n() {
            if seen[s] || self.images[s] == s {
                continue;
            }
            let mut cyc = vec![s];
            seen[s] = true;
            let mut x = self.images[s];
            while x != s {
                seen[x] = true;
                cyc.push(x);
                x = self.images[x];
            }
            out.push(cyc);
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(usize::to_string).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{:?}", self.images)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct AutConfig {
    /// Largest graph accepted by the enumerating operations.
    pub max_n: usize,
    /// Largest group [`automorphisms`] will store.
    pub max_elements: usize,
}

impl Default for AutConfig {
    fn default() -> Self {
        AutConfig {
            max_n: 11,
            max_elements: 1_000_000,
        }
    }
}

impl AutConfig {
    fn check(&self, g: &Graph) -> Result<()> {
        if g.n() > self.max_n {
            Err(Error::SizeLimit {
                n: g.n(),
                limit: self.max_n,
            })
        } else {
            Ok(())
        }
    }
}

#[derive(Clone, Debug)]
pub struct AutGroup {
    n: usize,
    elements: Vec<Permutation>,
    orbits: Vec<VertexSet>,
}

impl AutGroup {
    pub fn n(&self) -> usize {
        self.n
    }

    /// All automorphisms in lexicographic order; the identity comes first.
    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Orbits ordered by least element.
    pub fn orbits(&self) -> &[VertexSet] {
        &self.orbits
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }
}

/// Backtracking isomorphism search between coloured graphs.
struct Matcher<'a> {
    g: &'a Graph,
    h: &'a Graph,
    cg: Vec<usize>,
    ch: Vec<usize>,
    map: Vec<usize>,
    used: FixedBitSet,
}

impl<'a> Matcher<'a> {
    /// `None` when the colour classes already rule out any isomorphism.
    fn new(g: &'a Graph, colg: &[usize], h: &'a Graph, colh: &[usize]) -> Option<Self> {
        if g.n() != h.n() || g.edge_count() != h.edge_count() {
            return None;
        }
        let n = g.n();
        let union = disjoint_sum(&[g.clone(), h.clone()]);
        let init: Vec<usize> = colg.iter().chain(colh).copied().collect();
        let joint = refine(&union, &init);
        let (cg, ch) = joint.split_at(n);
        let mut a = cg.to_vec();
        let mut b = ch.to_vec();
        a.sort_unstable();
        b.sort_unstable();
        if a != b {
            return None;
        }
        Some(Matcher {
            g,
            h,
            cg: cg.to_vec(),
            ch: ch.to_vec(),
            map: vec![usize::MAX; n],
            used: FixedBitSet::with_capacity(n),
        })
    }

    fn consistent(&self, x: usize, y: usize) -> bool {
        (0..x).all(|x2| self.g.has_edge(x, x2) == self.h.has_edge(y, self.map[x2]))
    }

    fn run<F>(&mut self, x: usize, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        if x == self.g.n() {
            return visit(&self.map);
        }
        for y in 0..self.h.n() {
            if self.used.contains(y) || self.cg[x] != self.ch[y] || !self.consistent(x, y) {
                continue;
            }
            self.map[x] = y;
            self.used.insert(y);
            let flow = self.run(x + 1, visit);
            self.used.set(y, false);
            self.map[x] = usize::MAX;
            flow?;
        }
        ControlFlow::Continue(())
    }

    fn for_each<F>(&mut self, mut visit: F)
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let _ = self.run(0, &mut visit);
    }

    fn first(&mut self) -> Option<Vec<usize>> {
        let mut found = None;
        self.for_each(|m| {
            found = Some(m.to_vec());
            ControlFlow::Break(())
        });
        found
    }
}

/// Lexicographically least colour-preserving isomorphism `g → h`, if any.
/// The permutation maps a vertex of `g` to its image in `h`.
pub fn find_isomorphism_colored(
    g: &Graph,
    colg: &[usize],
    h: &Graph,
    colh: &[usize],
) -> Option<Permutation> {
    Matcher::new(g, colg, h, colh)?
        .first()
        .map(|images| Permutation { images })
}

pub fn find_isomorphism(g: &Graph, h: &Graph) -> Option<Permutation> {
    find_isomorphism_colored(g, &vec![0; g.n()], h, &vec![0; h.n()])
}

pub fn are_isomorphic(g: &Graph, h: &Graph) -> bool {
    find_isomorphism(g, h).is_some()
}

/// Visits every colour-preserving automorphism in lexicographic order until
/// the visitor breaks.
fn for_each_automorphism<F>(g: &Graph, colors: &[usize], visit: F)
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    Matcher::new(g, colors, g, colors)
        .expect("a graph is isomorphic to itself")
        .for_each(visit);
}

/// Fresh colours for the given points; all other vertices keep `base`.
fn pin(base: &[usize], points: &[usize]) -> Vec<usize> {
    let k = base.iter().max().map_or(0, |m| m + 1);
    let mut out = base.to_vec();
    for (i, &p) in points.iter().enumerate() {
        out[p] = k + i;
    }
    out
}

/// Whether some colour-preserving automorphism fixes `fixed` pointwise and
/// sends `x` to `y`.
fn extends(g: &Graph, colors: &[usize], fixed: &[usize], x: usize, y: usize) -> bool {
    let base = pin(colors, fixed);
    let k = base.iter().max().map_or(0, |m| m + 1);
    let mut cx = base.clone();
    let mut cy = base;
    cx[x] = k;
    cy[y] = k;
    find_isomorphism_colored(g, &cx, g, &cy).is_some()
}

/// `|Aut|` of a vertex-coloured graph, as the product of orbit sizes along
/// the stabiliser chain of `0, 1, .., n-1`. Nothing is enumerated.
pub fn count_automorphisms_colored(g: &Graph, colors: &[usize]) -> u128 {
    let n = g.n();
    let mut order: u128 = 1;
    for x in 0..n {
        let fixed: Vec<usize> = (0..x).collect();
        let orbit = (0..n)
            .filter(|&y| colors[y] == colors[x] && !fixed.contains(&y))
            .filter(|&y| y == x || extends(g, colors, &fixed, x, y))
            .count();
        order *= orbit as u128;
    }
    order
}

pub fn count_automorphisms(g: &Graph) -> u128 {
    count_automorphisms_colored(g, &vec![0; g.n()])
}

/// Orbits of the colour-preserving automorphism group, ordered by least element.
pub fn orbits_colored(g: &Graph, colors: &[usize]) -> Vec<VertexSet> {
    let n = g.n();
    let mut assigned = vec![false; n];
    let mut out = Vec::new();
    for x in 0..n {
        if assigned[x] {
            continue;
        }
        let orbit: Vec<usize> = (x..n)
            .filter(|&y| !assigned[y] && colors[y] == colors[x])
            .filter(|&y| y == x || extends(g, colors, &[], x, y))
            .collect();
        for &y in &orbit {
            assigned[y] = true;
        }
        out.push(VertexSet::from_sorted(orbit));
    }
    out
}

pub fn orbits(g: &Graph) -> Vec<VertexSet> {
    orbits_colored(g, &vec![0; g.n()])
}

pub fn automorphisms(g: &Graph, cfg: &AutConfig) -> Result<AutGroup> {
    cfg.check(g)?;
    let mut elements = Vec::new();
    let mut overflow = false;
    for_each_automorphism(g, &vec![0; g.n()], |m| {
        if elements.len() == cfg.max_elements {
            overflow = true;
            return ControlFlow::Break(());
        }
        elements.push(Permutation { images: m.to_vec() });
        ControlFlow::Continue(())
    });
    if overflow {
        return Err(Error::BudgetExceeded {
            required: count_automorphisms(g),
            budget: cfg.max_elements as u128,
        });
    }
    Ok(AutGroup {
        n: g.n(),
        elements,
        orbits: orbits(g),
    })
}

/// Lexicographically least non-identity automorphism fixing `fixed` pointwise.
fn least_nontrivial_fixing(g: &Graph, colors: &[usize], fixed: &[usize]) -> Option<Permutation> {
    let pinned = pin(colors, fixed);
    let mut found = None;
    for_each_automorphism(g, &pinned, |m| {
        if m.iter().enumerate().any(|(i, &j)| i != j) {
            found = Some(Permutation { images: m.to_vec() });
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    found
}

/// Two nontrivial automorphisms with disjoint supports, if they exist.
///
/// `g` has disjoint support from `f` exactly when it fixes `Supp(f)`
/// pointwise. Walking `f` through the group in lexicographic order and
/// taking the least nontrivial element of that pointwise stabiliser gives
/// the lexicographically least pair `(f, g)`: a partner smaller than `f`
/// would have been found while visiting that partner.
pub fn schmidt_bruteforce_colored(
    g: &Graph,
    colors: &[usize],
) -> Option<(Permutation, Permutation)> {
    let mut witness = None;
    for_each_automorphism(g, colors, |m| {
        let f = Permutation { images: m.to_vec() };
        if f.is_identity() {
            return ControlFlow::Continue(());
        }
        match least_nontrivial_fixing(g, colors, &f.support()) {
            Some(h) => {
                debug_assert!(f.support_bits().is_disjoint(&h.support_bits()));
                witness = Some((f, h));
                ControlFlow::Break(())
            }
            None => ControlFlow::Continue(()),
        }
    });
    witness
}

pub fn schmidt_bruteforce(
    g: &Graph,
    cfg: &AutConfig,
) -> Result<(bool, Option<(Permutation, Permutation)>)> {
    cfg.check(g)?;
    let w = schmidt_bruteforce_colored(g, &vec![0; g.n()]);
    Ok((w.is_some(), w))
}

/// Plain pairwise scan over a stored group. Kept as an independent check of
/// [`schmidt_bruteforce`].
pub fn schmidt_pairwise(group: &AutGroup) -> Option<(Permutation, Permutation)> {
    let supports: Vec<FixedBitSet> = group.elements.iter().map(|p| p.support_bits()).collect();
    for i in 1..supports.len() {
        for j in i + 1..supports.len() {
            if supports[i].is_disjoint(&supports[j]) {
                return Some((group.elements[i].clone(), group.elements[j].clone()));
            }
        }
    }
    None
}

/// Weichsel's conditions: constant degree on every part, and for parts `A`,
/// `B`, if one vertex of `A` has a neighbour in `B` then all of them do.
pub fn is_star_partition(g: &Graph, parts: &[Vec<usize>]) -> Result<bool> {
    let n = g.n();
    let mut part_of = vec![usize::MAX; n];
    for (k, p) in parts.iter().enumerate() {
        if p.is_empty() {
            return Err(Error::NotAPartition(format!("part {k} is empty")));
        }
        for &v in p {
            if v >= n {
                return Err(Error::NotAPartition(format!("vertex {v} out of range")));
            }
            if part_of[v] != usize::MAX {
                return Err(Error::NotAPartition(format!("vertex {v} in two parts")));
            }
            part_of[v] = k;
        }
    }
    if let Some(v) = part_of.iter().position(|&k| k == usize::MAX) {
        return Err(Error::NotAPartition(format!("vertex {v} not covered")));
    }
    for p in parts {
        let d = g.degree(p[0]);
        if p.iter().any(|&v| g.degree(v) != d) {
            return Ok(false);
        }
        let touched = |v: usize| {
            let mut t = FixedBitSet::with_capacity(parts.len());
            for w in g.neighbors(v) {
                t.insert(part_of[w]);
            }
            t
        };
        let first = touched(p[0]);
        if p.iter().any(|&v| touched(v) != first) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;

    fn cfg() -> AutConfig {
        AutConfig::default()
    }

    #[test]
    fn permutation_basics() {
        let id = Permutation::identity(4);
        assert!(id.support().is_empty());
        let t = Permutation::transposition(4, 0, 1).unwrap();
        assert_eq!(t.support().as_slice(), &[0, 1]);
        let c5 = Permutation::from_images(vec![1, 2, 3, 4, 0]).unwrap();
        assert_eq!(c5.support().len(), 5);
        assert_eq!(c5.compose(&c5.inverse()), Permutation::identity(5));
        assert_eq!(c5.to_string(), "(0 1 2 3 4)");
        assert_eq!(id.to_string(), "()");
        assert!(Permutation::from_images(vec![0, 0]).is_err());
        let a = Permutation::from_images(vec![1, 0, 2]).unwrap();
        let b = Permutation::from_images(vec![0, 2, 1]).unwrap();
        // apply b then a: 1 -> 2 -> 2
        assert_eq!(a.compose(&b).apply(1), 2);
    }

    #[test]
    fn group_orders() {
        assert_eq!(automorphisms(&complete(4), &cfg()).unwrap().order(), 24);
        assert_eq!(automorphisms(&bull(), &cfg()).unwrap().order(), 2);
        assert_eq!(automorphisms(&cycle(5), &cfg()).unwrap().order(), 10);
        assert_eq!(count_automorphisms(&edgeless(9)), 362_880);
        assert_eq!(count_automorphisms(&cycle(7)), 14);
        assert_eq!(count_automorphisms(&Graph::new(0)), 1);
        assert!(matches!(
            automorphisms(&path(12), &cfg()),
            Err(Error::SizeLimit { n: 12, limit: 11 })
        ));
    }

    #[test]
    fn elements_are_sorted_and_form_a_group() {
        let grp = automorphisms(&complete(3).repeat(2), &cfg()).unwrap();
        let els = grp.elements();
        assert_eq!(els.len(), 72);
        assert!(els[0].is_identity());
        assert!(els.windows(2).all(|w| w[0] < w[1]));
        for a in els {
            assert!(els.binary_search(&a.inverse()).is_ok());
            for b in els.iter().step_by(7) {
                assert!(els.binary_search(&a.compose(b)).is_ok());
            }
        }
    }

    #[test]
    fn schmidt_examples() {
        let (s, w) = schmidt_bruteforce(&complete(4), &cfg()).unwrap();
        assert!(s);
        let (f, g) = w.unwrap();
        assert_eq!(f.images(), &[0, 1, 3, 2]);
        assert_eq!(g.images(), &[1, 0, 2, 3]);
        assert!(!schmidt_bruteforce(&cycle(5), &cfg()).unwrap().0);
        assert!(!schmidt_bruteforce(&complete(1), &cfg()).unwrap().0);
        assert!(!schmidt_bruteforce(&complete(3), &cfg()).unwrap().0);
        assert!(schmidt_bruteforce(&star(4), &cfg()).unwrap().0);
    }

    #[test]
    fn lazy_schmidt_matches_pairwise_scan() {
        for g in [complete(4), star(3), star(4), cycle(6), path(5), bull(), pan(), complete(2).repeat(2)] {
            let grp = automorphisms(&g, &cfg()).unwrap();
            assert_eq!(schmidt_bruteforce(&g, &cfg()).unwrap().1, schmidt_pairwise(&grp), "{g:?}");
        }
    }

    #[test]
    fn isomorphism_search() {
        let g = pan();
        let h = g.relabel(&[3, 0, 4, 2, 1]).unwrap();
        let p = find_isomorphism(&g, &h).unwrap();
        assert_eq!(g.relabel(p.images()).unwrap(), h);
        assert!(find_isomorphism(&cycle(6), &complete(3).repeat(2)).is_none());
        assert!(find_isomorphism(&path(4), &star(3)).is_none());
    }

    #[test]
    fn orbit_partitions() {
        let o = orbits(&path(4));
        assert_eq!(o.len(), 2);
        assert_eq!(o[0].as_slice(), &[0, 3]);
        let o = orbits(&bull());
        assert_eq!(
            o.iter().map(|s| s.to_vec()).collect::<Vec<_>>(),
            vec![vec![0, 1], vec![2], vec![3, 4]]
        );
    }

    #[test]
    fn star_partitions() {
        let p3 = path(3);
        assert!(is_star_partition(&p3, &[vec![0, 2], vec![1]]).unwrap());
        assert!(!is_star_partition(&p3, &[vec![0, 1], vec![2]]).unwrap());
        assert!(is_star_partition(&p3, &[vec![0], vec![1], vec![2]]).unwrap());
        assert!(is_star_partition(&p3, &[vec![0, 1]]).is_err());
        assert!(is_star_partition(&p3, &[vec![0, 1], vec![1, 2]]).is_err());
        assert!(is_star_partition(&p3, &[vec![0, 1, 2], vec![]]).is_err());
    }
}
