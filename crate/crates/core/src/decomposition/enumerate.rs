//! Exhaustive generation of small graphs, trees and forests up to isomorphism.

use std::collections::BTreeMap;

use crate::canonical::{rooted_tree_canonical, tree_canonical, RootedTree};
use crate::error::{Error, Result};
use crate::graph::{disjoint_sum, Graph};
use crate::io::parse_graph6;
use crate::refine;

pub const MAX_ENUMERATED_GRAPH: usize = 7;
pub const MAX_ENUMERATED_TREE: usize = 14;

fn limit(n: usize, max: usize) -> Result<()> {
    if n > max {
        Err(Error::SizeLimit { n, limit: max })
    } else {
        Ok(())
    }
}

/// One graph per isomorphism class on `n` vertices, each in canonical
/// labelling, sorted by canonical graph6 string.
///
/// Every graph on `n` vertices arises from one on `n - 1` by adding a vertex
/// with some neighbourhood, so augmenting all representatives and keeping
/// one per canonical form is exhaustive.
pub fn enumerate_graphs(n: usize) -> Result<Vec<Graph>> {
    limit(n, MAX_ENUMERATED_GRAPH)?;
    let mut level: BTreeMap<String, Graph> = BTreeMap::new();
    level.insert(crate::io::write_graph6(&Graph::new(0)), Graph::new(0));
    for k in 1..=n {
        let mut next = BTreeMap::new();
        for g in level.values() {
            for mask in 0u32..(1 << (k - 1)) {
                let mut h = disjoint_sum(&[g.clone(), Graph::new(1)]);
                for v in 0..k - 1 {
                    if mask >> v & 1 == 1 {
                        h.set_edge_unchecked(v, k - 1);
                    }
                }
                let (s, _) = refine::canonical(&h);
                next.entry(s).or_insert(());
            }
        }
        level = next
            .into_keys()
            .map(|s| {
                let g = parse_graph6(&s).expect("canonical form parses");
                (s, g)
            })
            .collect();
    }
    Ok(level.into_values().collect())
}

/// One tree per isomorphism class on `n ≥ 1` vertices, sorted by key.
pub fn enumerate_trees(n: usize) -> Result<Vec<Graph>> {
    limit(n, MAX_ENUMERATED_TREE)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut level = vec![Graph::new(1)];
    for k in 2..=n {
        let mut next = BTreeMap::new();
        for t in &level {
            for v in 0..k - 1 {
                let mut u = disjoint_sum(&[t.clone(), Graph::new(1)]);
                u.set_edge_unchecked(v, k - 1);
                next.entry(tree_canonical(&u).expect("leaf added to a tree"))
                    .or_insert(u);
            }
        }
        level = next.into_values().collect();
    }
    Ok(level)
}

/// One rooted tree per rooted isomorphism class on `n ≥ 1` vertices.
pub fn enumerate_rooted_trees(n: usize) -> Result<Vec<RootedTree>> {
    let mut out = BTreeMap::new();
    for t in enumerate_trees(n)? {
        for r in 0..n {
            let rt = RootedTree::new(t.clone(), r)?;
            out.entry(rooted_tree_canonical(&rt)).or_insert(rt);
        }
    }
    Ok(out.into_values().collect())
}

/// One forest per isomorphism class on `n` vertices: all multisets of trees
/// with total size `n`, largest components first.
pub fn enumerate_forests(n: usize) -> Result<Vec<Graph>> {
    limit(n, MAX_ENUMERATED_TREE)?;
    let pool: Vec<Graph> = (1..=n)
        .rev()
        .map(enumerate_trees)
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    fill(&pool, 0, n, &mut chosen, &mut out);
    Ok(out)
}

/// Picks trees from `pool[start..]` (with repetition, non-decreasing index)
/// until `remaining` vertices are used.
fn fill(pool: &[Graph], start: usize, remaining: usize, chosen: &mut Vec<Graph>, out: &mut Vec<Graph>) {
    if remaining == 0 {
        out.push(disjoint_sum(chosen));
        return;
    }
    for i in start..pool.len() {
        if pool[i].n() > remaining {
            continue;
        }
        chosen.push(pool[i].clone());
        fill(pool, i, remaining - pool[i].n(), chosen, out);
        chosen.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphisms::are_isomorphic;

    #[test]
    fn graph_counts() {
        let counts: Vec<usize> = (0..=6).map(|n| enumerate_graphs(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 11, 34, 156]);
        assert!(enumerate_graphs(8).is_err());
    }

    #[test]
    fn four_vertex_graphs_against_brute_force() {
        // all 64 labelled graphs, deduplicated by backtracking isomorphism
        let mut reps: Vec<Graph> = Vec::new();
        for mask in 0u32..64 {
            let mut g = Graph::new(4);
            let mut k = 0;
            for j in 1..4 {
                for i in 0..j {
                    if mask >> k & 1 == 1 {
                        g.add_edge(i, j).unwrap();
                    }
                    k += 1;
                }
            }
            if !reps.iter().any(|r| are_isomorphic(r, &g)) {
                reps.push(g);
            }
        }
        let ours = enumerate_graphs(4).unwrap();
        assert_eq!(reps.len(), 11);
        assert_eq!(ours.len(), 11);
        for r in &reps {
            assert_eq!(ours.iter().filter(|g| are_isomorphic(g, r)).count(), 1);
        }
    }

    #[test]
    fn tree_counts() {
        let counts: Vec<usize> = (1..=10).map(|n| enumerate_trees(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 3, 6, 11, 23, 47, 106]);
        let rooted: Vec<usize> = (1..=7)
            .map(|n| enumerate_rooted_trees(n).unwrap().len())
            .collect();
        assert_eq!(rooted, vec![1, 1, 2, 4, 9, 20, 48]);
        let forests: Vec<usize> = (1..=9).map(|n| enumerate_forests(n).unwrap().len()).collect();
        assert_eq!(forests, vec![1, 2, 3, 6, 10, 20, 37, 76, 153]);
    }
}
