//! Exhaustive and seeded verification suites. Each suite checks a
//! classification result or identity against an independent computation
//! (usually backtracking search or plain enumeration) over every small case.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use rand::rngs::StdRng;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::automorphisms::{
    are_isomorphic, automorphisms, count_automorphisms, count_automorphisms_colored,
    schmidt_bruteforce_colored, AutConfig, Permutation,
};
use crate::canonical::{iso_test, psi, rooted_tree_canonical};
use crate::decomposition::{
    build_x, build_y, decompose, enumerate_forests, enumerate_graphs, enumerate_trees,
    recognize_cograph, recognize_tree_cograph, BaseClass,
};
use crate::graph::{disjoint_sum, families, Graph};
use crate::homcount::{f_isomorphic, fractionally_isomorphic, hom_count, lovasz_sum, CountConfig};
use crate::io::write_graph6;
use crate::magic::{
    adapted_to, bistochastic_error, check_component_projections, check_eccentricity_blocks,
    convolve, entrywise_trace, from_automorphism_pattern, is_magic_unitary, is_quantum_iso,
    k4_witness, max_commutator_norm, positivity_permutation, random_magic_unitary,
    real_intertwining_error, MagicUnitary,
};
use crate::quantum_expr::qu_expr;
use crate::schmidt::structural_summary;

pub const SUITES: [&str; 12] = [
    "cograph-classification",
    "schmidt-alternative",
    "abelianization",
    "quantum-asymmetry",
    "psi",
    "census",
    "lovasz",
    "hom-identities",
    "f-isomorphism",
    "magic",
    "fractional",
    "components",
];

#[derive(Clone, Debug, Serialize)]
pub struct SuiteOutcome {
    pub suite: String,
    pub passed: bool,
    /// What was checked, or the first counterexample.
    pub detail: String,
    #[serde(skip)]
    pub seconds: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    pub tol: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { seed: 0, tol: 1e-9 }
    }
}

type Check = std::result::Result<String, String>;

/// Runs one suite by name; `None` for an unknown name.
pub fn run_suite(name: &str, cfg: &VerifyConfig) -> Option<SuiteOutcome> {
    let start = Instant::now();
    let result = match name {
        "cograph-classification" => cograph_classification(),
        "schmidt-alternative" => schmidt_alternative(),
        "abelianization" => abelianization(),
        "quantum-asymmetry" => quantum_asymmetry(),
        "psi" => psi_fidelity(),
        "census" => census(),
        "lovasz" => lovasz(cfg.seed),
        "hom-identities" => hom_identities(),
        "f-isomorphism" => f_isomorphism(),
        "magic" => magic(cfg),
        "fractional" => fractional(),
        "components" => components(cfg),
        _ => return None,
    };
    let (passed, detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    Some(SuiteOutcome {
        suite: name.to_string(),
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    })
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn schmidt_brute(g: &Graph) -> bool {
    schmidt_bruteforce_colored(g, &vec![0; g.n()]).is_some()
}

fn all_graphs_up_to(n: usize) -> Vec<Graph> {
    (1..=n)
        .flat_map(|k| enumerate_graphs(k).expect("within enumeration limit"))
        .collect()
}

fn canon(g: &Graph) -> String {
    crate::refine::canonical(g).0
}

fn cograph_classification() -> Check {
    let mut classes = 0;
    for n in 1..=7 {
        let mut failing = BTreeSet::new();
        for g in enumerate_graphs(n).map_err(|e| e.to_string())? {
            classes += 1;
            if recognize_cograph(&g) && !schmidt_brute(&g) {
                failing.insert(canon(&g));
            }
        }
        let expected: BTreeSet<String> = if n == 1 {
            [canon(&Graph::new(1))].into()
        } else {
            let (x, y) = (build_x(n).expect("n >= 1"), build_y(n).expect("n >= 2"));
            [x.complement(), x, y.complement(), y].iter().map(canon).collect()
        };
        ensure(failing == expected, || {
            format!("n = {n}: non-Schmidt cographs {failing:?}, expected {expected:?}")
        })?;
    }
    Ok(format!("{classes} isomorphism classes on 1..=7 vertices"))
}

fn schmidt_alternative() -> Check {
    let mut checked = 0;
    for g in all_graphs_up_to(7) {
        let brute = schmidt_brute(&g);
        for base in [BaseClass::Cograph, BaseClass::TreeCograph, BaseClass::G5] {
            let Some(d) = decompose(&g, base) else { continue };
            checked += 1;
            let structural = structural_summary(&d).satisfies_schmidt;
            ensure(structural == brute, || {
                format!("{} ({}): structural {structural}, search {brute}", write_graph6(&g), base.name())
            })?;
        }
        if let Ok(q) = qu_expr(&g) {
            ensure(q.is_commutative() == !brute, || {
                format!("{}: {q} commutative = {}, Schmidt = {brute}", write_graph6(&g), q.is_commutative())
            })?;
        }
    }
    Ok(format!("{checked} (graph, class) memberships"))
}

fn abelianization() -> Check {
    let mut forests = 0;
    for n in 1..=9 {
        for f in enumerate_forests(n).map_err(|e| e.to_string())? {
            forests += 1;
            let q = qu_expr(&f).map_err(|e| e.to_string())?;
            let aut = count_automorphisms(&f);
            ensure(q.classical_order() == aut.into(), || {
                format!("forest {}: {} vs |Aut| = {aut}", write_graph6(&f), q.classical_order())
            })?;
        }
    }
    let mut tree_cographs = 0;
    for g in all_graphs_up_to(7) {
        if !recognize_tree_cograph(&g) {
            continue;
        }
        tree_cographs += 1;
        let q = qu_expr(&g).map_err(|e| e.to_string())?;
        let aut = count_automorphisms(&g);
        ensure(q.classical_order() == aut.into(), || {
            format!("{}: {} vs |Aut| = {aut}", write_graph6(&g), q.classical_order())
        })?;
    }
    Ok(format!("{forests} forests on 1..=9 vertices, {tree_cographs} tree-cographs on 1..=7"))
}

fn quantum_asymmetry() -> Check {
    let mut trees = 0;
    let mut asymmetric = 0;
    for n in 1..=9 {
        for t in enumerate_trees(n).map_err(|e| e.to_string())? {
            trees += 1;
            let trivial = qu_expr(&t).map_err(|e| e.to_string())?.is_trivial();
            let asym = count_automorphisms(&t) == 1;
            asymmetric += usize::from(asym);
            ensure(trivial == asym, || {
                format!("tree {}: trivial {trivial}, asymmetric {asym}", write_graph6(&t))
            })?;
        }
    }
    Ok(format!("{trees} trees, {asymmetric} asymmetric"))
}

fn psi_fidelity() -> Check {
    let mut trees = 0;
    for n in 1..=9 {
        let mut keys = BTreeSet::new();
        for t in enumerate_trees(n).map_err(|e| e.to_string())? {
            trees += 1;
            let rooted = psi(&t).map_err(|e| e.to_string())?;
            let f = rooted.as_forest();
            let rooted_aut = count_automorphisms_colored(f.graph(), &f.root_colors());
            let aut = count_automorphisms(&t);
            ensure(aut == rooted_aut, || {
                format!("tree {}: |Aut| = {aut}, rooted {rooted_aut}", write_graph6(&t))
            })?;
            ensure(keys.insert(rooted_tree_canonical(&rooted)), || {
                format!("two trees on {n} vertices share a rooted image")
            })?;
        }
    }
    Ok(format!("{trees} trees on 1..=9 vertices"))
}

fn census() -> Check {
    let five = enumerate_graphs(5).map_err(|e| e.to_string())?;
    let negatives: Vec<&Graph> = five.iter().filter(|g| !recognize_tree_cograph(g)).collect();
    ensure(five.len() == 34 && negatives.len() == 4, || {
        format!("{} graphs, {} outside the class", five.len(), negatives.len())
    })?;
    let expected = [
        (families::cycle(5), families::cycle(5)),
        (families::bull(), families::complete(3)),
        (families::pan(), families::path(3)),
        (families::pan().complement(), families::complete(2)),
    ];
    for (g, center) in &expected {
        let found = negatives.iter().find(|h| are_isomorphic(h, g));
        let Some(h) = found else {
            return Err(format!("{} is not among the negatives", write_graph6(g)));
        };
        let z = h.induced_subgraph(&h.center().map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure(are_isomorphic(&z, center), || {
            format!("center of {} is {}, expected {}", write_graph6(h), write_graph6(&z), write_graph6(center))
        })?;
    }
    Ok("C5, bull, pan and pan complement, with centers C5, K3, P3, K2".into())
}

fn random_graph<R: Rng>(n: usize, rng: &mut R) -> Graph {
    let mut g = Graph::new(n);
    for j in 1..n {
        for i in 0..j {
            if rng.random_bool(0.5) {
                g.add_edge(i, j).expect("in range");
            }
        }
    }
    g
}

fn lovasz(seed: u64) -> Check {
    let cfg = CountConfig::default();
    let small = all_graphs_up_to(4);
    let mut pairs = 0;
    let mut run = |g: &Graph, h: &Graph| -> std::result::Result<(), String> {
        let via_formula = lovasz_sum(g, h, &cfg).map_err(|e| format!("{}: {e}", write_graph6(g)))?;
        let direct = hom_count(g, h, &cfg).map_err(|e| e.to_string())?;
        pairs += 1;
        ensure(via_formula == direct, || {
            format!("hom({}, {}): formula {via_formula}, direct {direct}", write_graph6(g), write_graph6(h))
        })
    };
    for g in &small {
        for h in &small {
            run(g, h)?;
        }
    }
    let mut rng = StdRng::seed_from_u64(seed);
    for _ in 0..200 {
        let g = random_graph(5, &mut rng);
        let m = rng.random_range(1..=6);
        let h = random_graph(m, &mut rng);
        run(&g, &h)?;
    }
    Ok(format!("{pairs} pairs, every quotient term integral"))
}

fn hom_identities() -> Check {
    let cfg = CountConfig::default();
    let (k1, k2) = (families::complete(1), families::complete(2));
    let graphs = all_graphs_up_to(6);
    for g in &graphs {
        let v = hom_count(&k1, g, &cfg).map_err(|e| e.to_string())?;
        let e = hom_count(&k2, g, &cfg).map_err(|e| e.to_string())?;
        ensure(v == g.n() as u128 && e == 2 * g.edge_count() as u128, || {
            format!("{}: hom(K1) = {v}, hom(K2) = {e}", write_graph6(g))
        })?;
    }
    Ok(format!("{} graphs on 1..=6 vertices", graphs.len()))
}

fn f_isomorphism() -> Check {
    let cfg = CountConfig::default();
    let trees: Vec<Graph> = (1..=6)
        .flat_map(|n| enumerate_trees(n).expect("within limit"))
        .collect();
    let forests: Vec<Graph> = (1..=6)
        .flat_map(|n| enumerate_forests(n).expect("within limit"))
        .collect();
    let mut pairs = 0;
    for (i, f) in forests.iter().enumerate() {
        for g in &forests[i + 1..] {
            pairs += 1;
            let v = f_isomorphic(f, g, &trees, &cfg).map_err(|e| e.to_string())?;
            ensure(!v.equivalent, || {
                format!("forests {} and {} have equal tree counts", write_graph6(f), write_graph6(g))
            })?;
        }
    }
    Ok(format!("{pairs} pairs of distinct forests separated by {} trees", trees.len()))
}

fn check_grid(u: &MagicUnitary, what: &str) -> std::result::Result<(), String> {
    let report = is_magic_unitary(u);
    ensure(report.is_valid(), || format!("{what}: {:?}", report.violations.first()))
}

fn random_permutation<R: Rng>(n: usize, rng: &mut R) -> Permutation {
    use rand::seq::SliceRandom;
    let mut images: Vec<usize> = (0..n).collect();
    images.shuffle(rng);
    Permutation::from_images(images).expect("bijection")
}

fn magic(cfg: &VerifyConfig) -> Check {
    let tol = cfg.tol;
    let k4 = k4_witness().with_tol(tol);
    check_grid(&k4, "K4 witness")?;
    ensure(adapted_to(&k4, &families::complete(4)).unwrap_or(false), || "K4 witness not adapted".into())?;
    let c = max_commutator_norm(&k4);
    ensure((c - 0.5).abs() <= tol, || format!("K4 commutator norm {c}"))?;

    let mut rng = StdRng::seed_from_u64(cfg.seed);
    for trial in 0..200 {
        let n = rng.random_range(1..=6);
        let (d1, d2) = (rng.random_range(1..=4), rng.random_range(1..=4));
        let u = random_magic_unitary(n, d1, &mut rng).with_tol(tol);
        let v = random_magic_unitary(n, d2, &mut rng).with_tol(tol);
        check_grid(&u, &format!("random grid {trial}"))?;
        let w = convolve(&u, &v).map_err(|e| e.to_string())?;
        check_grid(&w, &format!("convolution {trial}"))?;
        positivity_permutation(&u).map_err(|e| format!("trial {trial}: {e}"))?;
        let s = bistochastic_error(&entrywise_trace(&u));
        ensure(s <= tol, || format!("trial {trial}: traces off by {s}"))?;
    }

    // quantum isomorphisms k4 ∘ P_τ-conjugated: K4 → K4, and automorphism
    // patterns of a path moved to a relabelled copy
    let g = families::path(5);
    let autos = automorphisms(&g, &AutConfig::default()).map_err(|e| e.to_string())?;
    for trial in 0..20 {
        let pattern: Vec<Permutation> = (0..3)
            .map(|_| autos.elements().choose(&mut rng).expect("non-empty").clone())
            .collect();
        let u = from_automorphism_pattern(&pattern, &mut rng).map_err(|e| e.to_string())?;
        let tau = random_permutation(5, &mut rng);
        let h = g.relabel(tau.images()).map_err(|e| e.to_string())?;
        let qi = convolve(&MagicUnitary::from_permutation(&tau, 1), &u)
            .map_err(|e| e.to_string())?
            .with_tol(tol);
        ensure(is_quantum_iso(&qi, &g, &h).unwrap_or(false), || format!("trial {trial}: not a quantum iso"))?;
        let err = real_intertwining_error(&entrywise_trace(&qi), &g, &h).map_err(|e| e.to_string())?;
        ensure(err <= tol, || format!("trial {trial}: traces intertwine up to {err}"))?;
    }
    Ok(format!("K4 commutator norm {c:.12}, 200 random grids, 20 quantum isomorphisms"))
}

fn fractional() -> Check {
    let mut pairs = 0;
    for n in 1..=8 {
        let trees = enumerate_trees(n).map_err(|e| e.to_string())?;
        for a in &trees {
            for b in &trees {
                pairs += 1;
                if fractionally_isomorphic(a, b) {
                    ensure(iso_test(a, b).unwrap_or(false), || {
                        format!("trees {} and {} fractionally isomorphic only", write_graph6(a), write_graph6(b))
                    })?;
                }
            }
        }
    }
    let (c6, two_k3) = (families::cycle(6), families::complete(3).repeat(2));
    ensure(fractionally_isomorphic(&c6, &two_k3), || "C6 and 2K3 separated by refinement".into())?;
    ensure(!iso_test(&c6, &two_k3).map_err(|e| e.to_string())?, || "C6 and 2K3 reported isomorphic".into())?;
    Ok(format!("{pairs} tree pairs; C6 and 2K3 fractionally isomorphic, not isomorphic"))
}

/// A disconnected graph on at most 8 vertices made of repeated random
/// connected pieces, so that it has automorphisms moving components.
fn random_disconnected<R: Rng>(rng: &mut R) -> Graph {
    loop {
        let mut parts = Vec::new();
        let mut size = 0;
        while size < 8 {
            let k = rng.random_range(1..=3.min(8 - size));
            let piece = random_graph(k, rng);
            if !piece.is_connected() {
                continue;
            }
            let copies = rng.random_range(1..=((8 - size) / k).min(3));
            for _ in 0..copies {
                parts.push(piece.clone());
            }
            size += k * copies;
            if rng.random_bool(0.3) {
                break;
            }
        }
        let g = disjoint_sum(&parts);
        if !g.is_connected() {
            return g;
        }
    }
}

fn components(cfg: &VerifyConfig) -> Check {
    let mut rng = StdRng::seed_from_u64(cfg.seed ^ 0x5eed);
    let mut patterns: BTreeMap<usize, usize> = BTreeMap::new();
    for trial in 0..50 {
        let g = random_disconnected(&mut rng);
        let autos = automorphisms(&g, &AutConfig::default()).map_err(|e| e.to_string())?;
        let d = rng.random_range(1..=4);
        let pattern: Vec<Permutation> = (0..d)
            .map(|_| autos.elements().choose(&mut rng).expect("non-empty").clone())
            .collect();
        let u = from_automorphism_pattern(&pattern, &mut rng).map_err(|e| e.to_string())?;
        let tau = random_permutation(g.n(), &mut rng);
        let h = g.relabel(tau.images()).map_err(|e| e.to_string())?;
        let qi = convolve(&MagicUnitary::from_permutation(&tau, 1), &u)
            .map_err(|e| e.to_string())?
            .with_tol(cfg.tol);
        let r = check_component_projections(&qi, &g, &h).map_err(|e| format!("trial {trial}: {e}"))?;
        ensure(r.passed, || format!("trial {trial} on {}: {r:?}", write_graph6(&g)))?;
        *patterns.entry(r.pattern.len()).or_insert(0) += 1;
        for (a, b) in [(g.clone(), h.clone()), (g.complement(), h.complement())] {
            let e = check_eccentricity_blocks(&qi, &a, &b).map_err(|e| format!("trial {trial}: {e}"))?;
            ensure(e.passed, || format!("trial {trial} on {}: {e:?}", write_graph6(&a)))?;
        }
    }
    Ok(format!("50 quantum isomorphisms, nonzero component-grid counts {patterns:?}"))
}
