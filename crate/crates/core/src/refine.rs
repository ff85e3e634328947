//! Colour refinement and an individualisation-refinement canonical form.
//!
//! Colours are always dense ranks `0..k`. New colours are ranks of the
//! signature `(old colour, sorted multiset of neighbour colours)` among all
//! signatures present, so the numbering is isomorphism invariant whenever the
//! initial colouring is. Signatures are compared exactly; nothing is hashed.

use crate::graph::Graph;
use crate::io::write_graph6;

/// Replaces arbitrary labels by their rank among the distinct labels.
pub(crate) fn densify<T: Ord + Clone>(labels: &[T]) -> Vec<usize> {
    let mut sorted: Vec<&T> = labels.iter().collect();
    sorted.sort();
    sorted.dedup();
    labels
        .iter()
        .map(|l| sorted.binary_search(&l).expect("label present"))
        .collect()
}

/// One refinement round. Returns the new colouring.
pub(crate) fn refine_step(g: &Graph, colors: &[usize]) -> Vec<usize> {
    let sigs: Vec<(usize, Vec<usize>)> = (0..g.n())
        .map(|v| {
            let mut nb: Vec<usize> = g.neighbors(v).map(|w| colors[w]).collect();
            nb.sort_unstable();
            (colors[v], nb)
        })
        .collect();
    densify(&sigs)
}

fn class_count(colors: &[usize]) -> usize {
    colors.iter().max().map_or(0, |m| m + 1)
}

/// Iterates [`refine_step`] to the coarsest stable colouring finer than
/// `init`. Also returns the number of rounds that changed something.
pub(crate) fn refine_with_rounds(g: &Graph, init: &[usize]) -> (Vec<usize>, usize) {
    let mut colors = densify(init);
    let mut rounds = 0;
    loop {
        let next = refine_step(g, &colors);
        if class_count(&next) == class_count(&colors) {
            return (next, rounds);
        }
        colors = next;
        rounds += 1;
    }
}

pub(crate) fn refine(g: &Graph, init: &[usize]) -> Vec<usize> {
    refine_with_rounds(g, init).0
}

/// Individualises `v`: it gets a colour of its own just below its old cell.
fn individualize(colors: &[usize], v: usize) -> Vec<usize> {
    let mut out: Vec<usize> = colors.iter().map(|&c| 2 * c + 1).collect();
    out[v] = 2 * colors[v];
    out
}

fn target_cell(colors: &[usize]) -> Option<Vec<usize>> {
    let k = class_count(colors);
    let mut cells = vec![Vec::new(); k];
    for (v, &c) in colors.iter().enumerate() {
        cells[c].push(v);
    }
    cells.into_iter().find(|c| c.len() > 1)
}

/// Drops all but the first vertex of every class of twins inside `cell`.
/// Swapping two twins of one cell is an automorphism fixing the colouring, so
/// their search subtrees yield the same leaves.
fn twin_representatives(g: &Graph, cell: &[usize]) -> Vec<usize> {
    let mut reps: Vec<usize> = Vec::new();
    'outer: for &v in cell {
        for &r in &reps {
            let mut a = g.neighbor_set(v).clone();
            let mut b = g.neighbor_set(r).clone();
            a.set(r, false);
            b.set(v, false);
            if a == b {
                continue 'outer;
            }
        }
        reps.push(v);
    }
    reps
}

fn search(g: &Graph, colors: Vec<usize>, best: &mut Option<(String, Vec<usize>)>) {
    let colors = refine(g, &colors);
    match target_cell(&colors) {
        None => {
            let h = g.relabel(&colors).expect("discrete colouring is a bijection");
            let s = write_graph6(&h);
            if best.as_ref().is_none_or(|(b, _)| s < *b) {
                *best = Some((s, colors));
            }
        }
        Some(cell) => {
            for v in twin_representatives(g, &cell) {
                search(g, individualize(&colors, v), best);
            }
        }
    }
}

/// Canonical form of a vertex-coloured graph: returns the graph6 string of
/// the canonical relabelling and the relabelling itself (`labels[v]` is the
/// new name of `v`). Two coloured graphs are isomorphic by a colour-preserving
/// map iff their strings agree and their colour multisets, read in canonical
/// order, agree.
pub(crate) fn canonical_colored(g: &Graph, init: &[usize]) -> (String, Vec<usize>) {
    let mut best = None;
    search(g, densify(init), &mut best);
    best.expect("search visits at least one leaf")
}

pub(crate) fn canonical(g: &Graph) -> (String, Vec<usize>) {
    canonical_colored(g, &vec![0; g.n()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;
    use crate::graph::disjoint_sum;

    #[test]
    fn regular_graphs_are_not_split() {
        let c6 = cycle(6);
        assert!(refine(&c6, &[0; 6]).iter().all(|&c| c == 0));
        let two_triangles = disjoint_sum(&[cycle(3), cycle(3)]);
        assert!(refine(&two_triangles, &[0; 6]).iter().all(|&c| c == 0));
    }

    #[test]
    fn path_refines_by_distance_to_ends() {
        let p5 = path(5);
        let c = refine(&p5, &[0; 5]);
        assert_eq!(c[0], c[4]);
        assert_eq!(c[1], c[3]);
        assert_ne!(c[0], c[1]);
        assert_ne!(c[1], c[2]);
    }

    #[test]
    fn canonical_is_invariant() {
        let g = pan();
        let (s, _) = canonical(&g);
        for images in [[4, 3, 2, 1, 0], [1, 2, 3, 4, 0], [2, 0, 4, 1, 3]] {
            let h = g.relabel(&images).unwrap();
            assert_eq!(canonical(&h).0, s);
        }
        assert_ne!(canonical(&bull()).0, s);
        assert_ne!(canonical(&cycle(6)).0, canonical(&disjoint_sum(&[cycle(3), cycle(3)])).0);
    }

    #[test]
    fn symmetric_graphs_are_fast() {
        // twin pruning keeps these to a handful of leaves
        assert_eq!(canonical(&complete(12)).0, write_graph6(&complete(12)));
        assert_eq!(canonical(&edgeless(12)).0, write_graph6(&edgeless(12)));
        let k33 = complete(3).repeat(2).complement();
        let (s, labels) = canonical(&k33);
        assert_eq!(parse(&s), k33.relabel(&labels).unwrap());
    }

    fn parse(s: &str) -> Graph {
        crate::io::parse_graph6(s).unwrap()
    }
}
