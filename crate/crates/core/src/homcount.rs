//! Exact homomorphism counting, the cancellation formula expressing
//! `hom(G, H)` through quotients and monomorphisms, and fractional
//! isomorphism by colour refinement.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::automorphisms::count_automorphisms;
use crate::decomposition::enumerate_graphs;
use crate::error::{Error, Result};
use crate::graph::{disjoint_sum, Graph};
use crate::refine;

pub const DEFAULT_BUDGET: u128 = 100_000_000;
/// Largest source graph for [`lovasz_sum`].
pub const MAX_LOVASZ_SOURCE: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountConfig {
    /// Upper bound on `|V(h)|^|V(g)|`, the number of vertex maps.
    pub budget: u128,
}

impl Default for CountConfig {
    fn default() -> Self {
        CountConfig {
            budget: DEFAULT_BUDGET,
        }
    }
}

fn check_budget(g: &Graph, h: &Graph, cfg: &CountConfig) -> Result<()> {
    let required = (h.n() as u128)
        .checked_pow(g.n() as u32)
        .unwrap_or(u128::MAX);
    if required > cfg.budget {
        return Err(Error::BudgetExceeded {
            required,
            budget: cfg.budget,
        });
    }
    Ok(())
}

/// Calls `f` on every morphism `g → h` (injective ones only if asked), as the
/// image vector. Vertices are placed in order and each edge is checked as
/// soon as both ends are placed.
fn for_each_hom(g: &Graph, h: &Graph, injective: bool, f: &mut impl FnMut(&[usize])) {
    fn go(
        v: usize,
        g: &Graph,
        h: &Graph,
        injective: bool,
        img: &mut Vec<usize>,
        used: &mut [bool],
        f: &mut impl FnMut(&[usize]),
    ) {
        if v == g.n() {
            f(img);
            return;
        }
        for x in 0..h.n() {
            if injective && used[x] {
                continue;
            }
            if g.neighbors(v).filter(|&w| w < v).all(|w| h.has_edge(img[w], x)) {
                img.push(x);
                used[x] = true;
                go(v + 1, g, h, injective, img, used, f);
                used[x] = false;
                img.pop();
            }
        }
    }
    let mut used = vec![false; h.n()];
    go(0, g, h, injective, &mut Vec::with_capacity(g.n()), &mut used, f);
}

pub fn hom_count(g: &Graph, h: &Graph, cfg: &CountConfig) -> Result<u128> {
    check_budget(g, h, cfg)?;
    let mut count = 0;
    for_each_hom(g, h, false, &mut |_| count += 1);
    Ok(count)
}

/// Injective morphisms.
pub fn mon_count(g: &Graph, h: &Graph, cfg: &CountConfig) -> Result<u128> {
    check_budget(g, h, cfg)?;
    let mut count = 0;
    for_each_hom(g, h, true, &mut |_| count += 1);
    Ok(count)
}

/// Morphisms onto `h` that are surjective on vertices and on edges.
pub fn quo_count(g: &Graph, h: &Graph, cfg: &CountConfig) -> Result<u128> {
    check_budget(g, h, cfg)?;
    if h.n() > g.n() || h.edge_count() > g.edge_count() {
        return Ok(0);
    }
    let h_edges = h.edges();
    let g_edges = g.edges();
    let mut count = 0;
    let mut hit = vec![false; h.n()];
    let mut covered = vec![false; h.n() * h.n()];
    for_each_hom(g, h, false, &mut |img| {
        hit.iter_mut().for_each(|b| *b = false);
        covered.iter_mut().for_each(|b| *b = false);
        img.iter().for_each(|&x| hit[x] = true);
        for &(a, b) in &g_edges {
            let (x, y) = (img[a].min(img[b]), img[a].max(img[b]));
            covered[x * h.n() + y] = true;
        }
        if hit.iter().all(|&b| b) && h_edges.iter().all(|&(x, y)| covered[x * h.n() + y]) {
            count += 1;
        }
    });
    Ok(count)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HomCounts {
    pub hom: u128,
    pub mon: u128,
    pub quo: u128,
    /// `|Aut(g)|`.
    pub aut: u128,
}

pub fn hom_counts(g: &Graph, h: &Graph, cfg: &CountConfig) -> Result<HomCounts> {
    Ok(HomCounts {
        hom: hom_count(g, h, cfg)?,
        mon: mon_count(g, h, cfg)?,
        quo: quo_count(g, h, cfg)?,
        aut: count_automorphisms(g),
    })
}

/// `hom(g, h) = Σ_A quo(g, A) / aut(A) · mon(A, h)` over one graph `A` per
/// isomorphism class on at most `|V(g)|` vertices. Every quotient term is
/// checked to be integral.
pub fn lovasz_sum(g: &Graph, h: &Graph, cfg: &CountConfig) -> Result<u128> {
    if g.n() > MAX_LOVASZ_SOURCE {
        return Err(Error::SizeLimit {
            n: g.n(),
            limit: MAX_LOVASZ_SOURCE,
        });
    }
    let mut total = 0;
    for k in 0..=g.n() {
        for a in enumerate_graphs(k)? {
            if a.edge_count() > g.edge_count() {
                continue;
            }
            let quo = quo_count(g, &a, cfg)?;
            if quo == 0 {
                continue;
            }
            let aut = count_automorphisms(&a);
            if quo % aut != 0 {
                return Err(Error::NonIntegralTerm {
                    numerator: quo,
                    denominator: aut,
                });
            }
            total += quo / aut * mon_count(&a, h, cfg)?;
        }
    }
    Ok(total)
}

/// `Π_i Σ_j hom(G_i, H_j)` over the components of `g` and `h`.
pub fn hom_component_product(g: &Graph, h: &Graph, cfg: &CountConfig) -> Result<u128> {
    let hs: Vec<Graph> = h.connected_components().into_iter().map(|(_, c)| c).collect();
    let mut product = 1;
    for (_, gi) in g.connected_components() {
        let mut sum = 0;
        for hj in &hs {
            sum += hom_count(&gi, hj, cfg)?;
        }
        product *= sum;
    }
    Ok(product)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FIsoVerdict {
    pub equivalent: bool,
    /// Index into the family of the first graph with differing counts.
    pub witness: Option<usize>,
}

/// Whether `hom(A, g) = hom(A, h)` for every `A` in `family`.
pub fn f_isomorphic(g: &Graph, h: &Graph, family: &[Graph], cfg: &CountConfig) -> Result<FIsoVerdict> {
    for (i, a) in family.iter().enumerate() {
        if hom_count(a, g, cfg)? != hom_count(a, h, cfg)? {
            return Ok(FIsoVerdict {
                equivalent: false,
                witness: Some(i),
            });
        }
    }
    Ok(FIsoVerdict {
        equivalent: true,
        witness: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColorPartition {
    /// Dense colour ids, one per vertex.
    pub colors: Vec<usize>,
    pub stable: bool,
    pub rounds: usize,
}

impl ColorPartition {
    pub fn class_count(&self) -> usize {
        self.colors.iter().max().map_or(0, |m| m + 1)
    }

    /// Colour → number of vertices.
    pub fn histogram(&self) -> BTreeMap<usize, usize> {
        let mut hist = BTreeMap::new();
        for &c in &self.colors {
            *hist.entry(c).or_insert(0) += 1;
        }
        hist
    }
}

/// Coarsest equitable partition, from the uniform colouring.
pub fn color_refinement(g: &Graph) -> ColorPartition {
    let (colors, rounds) = refine::refine_with_rounds(g, &vec![0; g.n()]);
    let stable = refine::refine_step(g, &colors) == colors;
    ColorPartition {
        colors,
        stable,
        rounds,
    }
}

/// Refines `g + h` and compares the colour histograms of the two sides,
/// which holds iff the graphs have a common equitable partition, i.e. iff a
/// doubly stochastic matrix intertwines their adjacency matrices.
pub fn fractionally_isomorphic(g: &Graph, h: &Graph) -> bool {
    if g.n() != h.n() {
        return false;
    }
    let p = color_refinement(&disjoint_sum(&[g.clone(), h.clone()]));
    let mut left = p.colors[..g.n()].to_vec();
    let mut right = p.colors[g.n()..].to_vec();
    left.sort_unstable();
    right.sort_unstable();
    left == right
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;

    fn cfg() -> CountConfig {
        CountConfig::default()
    }

    #[test]
    fn small_counts() {
        let (k2, k3) = (complete(2), complete(3));
        assert_eq!(hom_count(&k2, &k3, &cfg()).unwrap(), 6);
        assert_eq!(mon_count(&k2, &k3, &cfg()).unwrap(), 6);
        assert_eq!(quo_count(&k2, &k3, &cfg()).unwrap(), 0);
        assert_eq!(quo_count(&path(3), &k2, &cfg()).unwrap(), 2);
        assert_eq!(hom_count(&complete(1), &cycle(5), &cfg()).unwrap(), 5);
        assert_eq!(hom_count(&k2, &cycle(5), &cfg()).unwrap(), 10);
        assert_eq!(hom_count(&k3, &path(4), &cfg()).unwrap(), 0);
        assert_eq!(hom_count(&Graph::new(0), &k3, &cfg()).unwrap(), 1);
        let c = hom_counts(&cycle(4), &cycle(4), &cfg()).unwrap();
        assert_eq!((c.mon, c.aut, c.quo), (8, 8, 8));
    }

    #[test]
    fn budget() {
        let tight = CountConfig { budget: 100 };
        assert!(matches!(
            hom_count(&edgeless(3), &edgeless(5), &tight),
            Err(Error::BudgetExceeded { required: 125, budget: 100 })
        ));
        assert!(hom_count(&edgeless(2), &edgeless(10), &tight).is_ok());
    }

    #[test]
    fn cancellation_formula() {
        assert_eq!(lovasz_sum(&complete(2), &complete(2), &cfg()).unwrap(), 2);
        assert_eq!(lovasz_sum(&complete(1), &cycle(6), &cfg()).unwrap(), 6);
        for (g, h) in [(path(4), cycle(5)), (star(3), complete(4)), (bull(), pan())] {
            assert_eq!(
                lovasz_sum(&g, &h, &cfg()).unwrap(),
                hom_count(&g, &h, &cfg()).unwrap()
            );
        }
        assert!(lovasz_sum(&path(6), &path(2), &cfg()).is_err());
    }

    #[test]
    fn component_products() {
        assert_eq!(hom_component_product(&edgeless(2), &cycle(5), &cfg()).unwrap(), 25);
        let g = disjoint_sum(&[complete(2), complete(1)]);
        assert_eq!(hom_component_product(&g, &complete(3), &cfg()).unwrap(), 18);
        let h = disjoint_sum(&[cycle(3), path(3)]);
        assert_eq!(
            hom_component_product(&g, &h, &cfg()).unwrap(),
            hom_count(&g, &h, &cfg()).unwrap()
        );
    }

    #[test]
    fn f_isomorphism() {
        let family = [complete(1)];
        let v = f_isomorphic(&path(4), &star(3), &family, &cfg()).unwrap();
        assert!(v.equivalent);
        let family = [complete(1), complete(2), path(3)];
        let v = f_isomorphic(&path(4), &star(3), &family, &cfg()).unwrap();
        assert_eq!(v, FIsoVerdict { equivalent: false, witness: Some(2) });
    }

    #[test]
    fn fractional() {
        let two_triangles = complete(3).repeat(2);
        assert!(fractionally_isomorphic(&cycle(6), &two_triangles));
        assert!(!fractionally_isomorphic(&path(4), &star(3)));
        assert!(!fractionally_isomorphic(&path(3), &path(4)));
        let p = color_refinement(&path(5));
        assert!(p.stable);
        assert_eq!(p.class_count(), 3);
        assert_eq!(p.histogram().values().copied().collect::<Vec<_>>(), vec![2, 2, 1]);
    }
}
