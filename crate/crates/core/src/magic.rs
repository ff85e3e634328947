//! Magic unitaries with matrix entries: checks, constructions and the matrix
//! lemmas that can be tested numerically.
//!
//! A magic unitary here is an `n × n` grid of `d × d` complex matrices. It is
//! valid when every entry is an orthogonal projection and every row and
//! column of entries sums to the identity. For a quantum isomorphism
//! `g → h` rows are indexed by vertices of `h` and columns by vertices of
//! `g`, and the condition is `U · Adj(g) = Adj(h) · U`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::automorphisms::Permutation;
use crate::error::{Error, Result};
use crate::graph::Graph;

pub type ComplexMatrix = DMatrix<Complex64>;

pub const DEFAULT_TOL: f64 = 1e-9;

fn eye(d: usize) -> ComplexMatrix {
    ComplexMatrix::identity(d, d)
}

fn zeros(d: usize) -> ComplexMatrix {
    ComplexMatrix::zeros(d, d)
}

/// Largest singular value.
pub fn spectral_norm(m: &ComplexMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().max()
}

fn frobenius(m: &ComplexMatrix) -> f64 {
    m.norm()
}

#[derive(Clone, Debug, PartialEq)]
pub struct MagicUnitary {
    n: usize,
    d: usize,
    entries: Vec<ComplexMatrix>,
    tol: f64,
}

impl MagicUnitary {
    /// `entries` in row-major order, each `d × d`. Only shapes are checked.
    pub fn new(n: usize, d: usize, entries: Vec<ComplexMatrix>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {n}x{n} grid",
                entries.len()
            )));
        }
        if let Some(k) = entries.iter().position(|e| e.shape() != (d, d)) {
            return Err(Error::DimensionMismatch(format!(
                "entry ({}, {}) has shape {:?}, expected ({d}, {d})",
                k / n.max(1),
                k % n.max(1),
                entries[k].shape()
            )));
        }
        Ok(MagicUnitary {
            n,
            d,
            entries,
            tol: DEFAULT_TOL,
        })
    }

    fn from_fn(n: usize, d: usize, mut f: impl FnMut(usize, usize) -> ComplexMatrix) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        MagicUnitary {
            n,
            d,
            entries,
            tol: DEFAULT_TOL,
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn entry(&self, i: usize, j: usize) -> &ComplexMatrix {
        &self.entries[i * self.n + j]
    }

    pub fn identity(n: usize, d: usize) -> Self {
        Self::from_fn(n, d, |i, j| if i == j { eye(d) } else { zeros(d) })
    }

    /// `P_σ` with `[P_σ]_{ij} = δ_{i,σ(j)}`, entries scaled to `d × d`.
    pub fn from_permutation(p: &Permutation, d: usize) -> Self {
        Self::from_fn(p.n(), d, |i, j| {
            if p.apply(j) == i {
                eye(d)
            } else {
                zeros(d)
            }
        })
    }

    /// The regular representation of the cyclic group generated by `σ`:
    /// entry `(i, j)` is diagonal with `k`-th coefficient `δ_{i,σ^k(j)}`, over
    /// `k < order(σ)`. It has the support of `σ` and non-scalar entries
    /// unless `σ` is the identity.
    pub fn cyclic_lift(p: &Permutation) -> Self {
        let n = p.n();
        let mut powers = vec![Permutation::identity(n)];
        loop {
            let next = p.compose(powers.last().expect("non-empty"));
            if next.is_identity() {
                break;
            }
            powers.push(next);
        }
        let d = powers.len();
        Self::from_fn(n, d, |i, j| {
            ComplexMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                d,
                powers
                    .iter()
                    .map(|q| Complex64::new(f64::from(u8::from(q.apply(j) == i)), 0.0)),
            ))
        })
    }

    /// `x` with `u_xx` not the identity.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&x| frobenius(&(self.entry(x, x) - eye(self.d))) > self.tol)
            .collect()
    }

    fn is_scalar(&self) -> bool {
        self.entries.iter().all(|e| {
            let c = if self.d == 0 { Complex64::new(0.0, 0.0) } else { e[(0, 0)] };
            frobenius(&(e - eye(self.d) * c)) <= self.tol
        })
    }

    /// The permutation of a grid whose entries are all `0` or `1`.
    fn as_permutation(&self) -> Option<Permutation> {
        let mut images = vec![usize::MAX; self.n];
        for j in 0..self.n {
            for i in 0..self.n {
                if frobenius(&(self.entry(i, j) - eye(self.d))) <= self.tol {
                    images[j] = i;
                }
            }
        }
        Permutation::from_images(images).ok()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let grid: Vec<Vec<Vec<Vec<[f64; 2]>>>> = (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| {
                        let e = self.entry(i, j);
                        (0..self.d)
                            .map(|r| (0..self.d).map(|c| [e[(r, c)].re, e[(r, c)].im]).collect())
                            .collect()
                    })
                    .collect()
            })
            .collect();
        serde_json::json!({ "n": self.n, "d": self.d, "tol": self.tol, "entries": grid })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    NotHermitian,
    NotIdempotent,
    RowSum,
    ColumnSum,
    RowOrthogonality,
    ColumnOrthogonality,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Entry, row or column concerned; `j` is unused for sums.
    pub i: usize,
    pub j: usize,
    /// Frobenius norm of the defect.
    pub norm: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct MagicReport {
    pub violations: Vec<Violation>,
    /// Projections and sums pass but orthogonality along a row or column
    /// fails. Orthogonality follows from the other two, so this points to a
    /// tolerance problem rather than a bad grid.
    pub orthogonality_anomaly: bool,
}

impl MagicReport {
    /// No violation among the projection and sum conditions.
    pub fn is_valid(&self) -> bool {
        self.violations.iter().all(|v| {
            !matches!(
                v.kind,
                ViolationKind::RowOrthogonality | ViolationKind::ColumnOrthogonality
            )
        }) && self.violations.is_empty()
    }
}

pub fn is_magic_unitary(u: &MagicUnitary) -> MagicReport {
    let (n, d, tol) = (u.n, u.d, u.tol);
    let mut violations = Vec::new();
    let mut push = |kind, i, j, norm: f64, limit: f64| {
        if norm > limit {
            violations.push(Violation { kind, i, j, norm });
        }
    };
    for i in 0..n {
        for j in 0..n {
            let e = u.entry(i, j);
            push(ViolationKind::NotHermitian, i, j, frobenius(&(e - e.adjoint())), tol);
            push(ViolationKind::NotIdempotent, i, j, frobenius(&(e * e - e)), tol);
        }
    }
    for i in 0..n {
        let row = (0..n).fold(zeros(d), |acc, j| acc + u.entry(i, j));
        push(ViolationKind::RowSum, i, 0, frobenius(&(row - eye(d))), tol);
        let col = (0..n).fold(zeros(d), |acc, j| acc + u.entry(j, i));
        push(ViolationKind::ColumnSum, i, 0, frobenius(&(col - eye(d))), tol);
    }
    let basic_ok = violations.is_empty();
    let mut anomaly = false;
    for i in 0..n {
        for j in 0..n {
            for k in j + 1..n {
                let r = frobenius(&(u.entry(i, j) * u.entry(i, k)));
                let c = frobenius(&(u.entry(j, i) * u.entry(k, i)));
                if r > 10.0 * tol {
                    anomaly |= basic_ok;
                    violations.push(Violation { kind: ViolationKind::RowOrthogonality, i, j: k, norm: r });
                }
                if c > 10.0 * tol {
                    anomaly |= basic_ok;
                    violations.push(Violation { kind: ViolationKind::ColumnOrthogonality, i, j: k, norm: c });
                }
            }
        }
    }
    MagicReport {
        violations,
        orthogonality_anomaly: anomaly,
    }
}

fn check_size(u: &MagicUnitary, g: &Graph, what: &str) -> Result<()> {
    if u.n != g.n() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} grid against {what} on {} vertices",
            u.n,
            u.n,
            g.n()
        )));
    }
    Ok(())
}

/// Largest Frobenius defect of `U · Adj(g) = Adj(h) · U`, entry by entry.
pub fn intertwining_error(u: &MagicUnitary, g: &Graph, h: &Graph) -> Result<f64> {
    check_size(u, g, "graph")?;
    check_size(u, h, "graph")?;
    let mut worst: f64 = 0.0;
    for x in 0..u.n {
        for a in 0..u.n {
            let left = g.neighbors(a).fold(zeros(u.d), |acc, b| acc + u.entry(x, b));
            let right = h.neighbors(x).fold(zeros(u.d), |acc, y| acc + u.entry(y, a));
            worst = worst.max(frobenius(&(left - right)));
        }
    }
    Ok(worst)
}

pub fn adapted_to(u: &MagicUnitary, g: &Graph) -> Result<bool> {
    Ok(intertwining_error(u, g, g)? <= u.tol)
}

pub fn is_quantum_iso(u: &MagicUnitary, g: &Graph, h: &Graph) -> Result<bool> {
    Ok(intertwining_error(u, g, h)? <= u.tol)
}

fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// `r_ij = Σ_k p_ik ⊗ q_kj`. If `p` is a quantum isomorphism `h → l` and
/// `q` one from `g → h`, the result is one from `g → l`.
pub fn convolve(p: &MagicUnitary, q: &MagicUnitary) -> Result<MagicUnitary> {
    if p.n != q.n {
        return Err(Error::DimensionMismatch(format!(
            "convolving grids of sizes {} and {}",
            p.n, q.n
        )));
    }
    let d = p.d * q.d;
    Ok(MagicUnitary::from_fn(p.n, d, |i, j| {
        (0..p.n).fold(zeros(d), |acc, k| acc + kron(p.entry(i, k), q.entry(k, j)))
    })
    .with_tol(p.tol.max(q.tol)))
}

/// `[[0, U], [U*, 0]]`. For a quantum isomorphism `g → h` this is adapted to
/// `h + g` (vertices of `h` first).
pub fn block_qi_embed(u: &MagicUnitary) -> MagicUnitary {
    let n = u.n;
    MagicUnitary::from_fn(2 * n, u.d, |i, j| match (i < n, j < n) {
        (true, false) => u.entry(i, j - n).clone(),
        (false, true) => u.entry(j, i - n).adjoint(),
        _ => zeros(u.d),
    })
    .with_tol(u.tol)
}

/// Unitary discrete Fourier transform of size `m`.
fn dft(m: usize) -> ComplexMatrix {
    let scale = 1.0 / (m as f64).sqrt();
    ComplexMatrix::from_fn(m, m, |r, c| {
        Complex64::from_polar(scale, 2.0 * std::f64::consts::PI * (r * c) as f64 / m as f64)
    })
}

/// Combines two adapted magic unitaries with disjoint supports into one
/// adapted unitary acting as `u` on `Supp(u)`, as `v` on `Supp(v)` and as
/// the identity elsewhere.
///
/// The free product of the two coefficient algebras is replaced by a finite
/// surrogate: `u` acts on the first tensor factor of `C^{d_u} ⊗ C^{d_v}` and
/// `v` on the second, and `v`'s copy is conjugated by the Fourier matrix so
/// that the two families do not commute. Permutation grids are first
/// replaced by their cyclic lifts, which have the same support.
pub fn schmidt_combine(u: &MagicUnitary, v: &MagicUnitary, g: &Graph) -> Result<MagicUnitary> {
    for w in [u, v] {
        check_size(w, g, "graph")?;
        if !adapted_to(w, g)? {
            return Err(Error::NotAdapted);
        }
    }
    let lift = |w: &MagicUnitary| -> MagicUnitary {
        match (w.is_scalar(), w.as_permutation()) {
            (true, Some(p)) => MagicUnitary::cyclic_lift(&p).with_tol(w.tol),
            _ => w.clone(),
        }
    };
    let (u, v) = (lift(u), lift(v));
    let (su, sv) = (u.support(), v.support());
    if su.is_empty() || sv.is_empty() {
        return Err(Error::InvalidArgument(
            "both magic unitaries must differ from the identity".into(),
        ));
    }
    if let Some(&x) = su.iter().find(|x| sv.contains(x)) {
        return Err(Error::OverlappingSupports(x));
    }
    let d = u.d * v.d;
    let r = dft(d);
    let (iu, iv) = (eye(u.d), eye(v.d));
    Ok(MagicUnitary::from_fn(u.n, d, |i, j| {
        if su.contains(&i) || su.contains(&j) {
            kron(u.entry(i, j), &iv)
        } else if sv.contains(&i) || sv.contains(&j) {
            &r * kron(&iu, v.entry(i, j)) * r.adjoint()
        } else if i == j {
            eye(d)
        } else {
            zeros(d)
        }
    })
    .with_tol(u.tol.max(v.tol)))
}

/// A `4 × 4` magic unitary with `2 × 2` entries, two of which do not commute.
pub fn k4_witness() -> MagicUnitary {
    let c = |x: f64| Complex64::new(x, 0.0);
    let p = ComplexMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(0.0)]);
    let q = ComplexMatrix::from_element(2, 2, c(0.5));
    let one = eye(2);
    let z = zeros(2);
    let entries = vec![
        p.clone(), &one - &p, z.clone(), z.clone(),
        &one - &p, p.clone(), z.clone(), z.clone(),
        z.clone(), z.clone(), q.clone(), &one - &q,
        z.clone(), z.clone(), &one - &q, q.clone(),
    ];
    MagicUnitary::new(4, 2, entries).expect("shapes are consistent")
}

/// Largest spectral norm of a commutator of two entries.
pub fn max_commutator_norm(u: &MagicUnitary) -> f64 {
    let mut worst: f64 = 0.0;
    for a in 0..u.entries.len() {
        for b in a + 1..u.entries.len() {
            let (x, y) = (&u.entries[a], &u.entries[b]);
            worst = worst.max(spectral_norm(&(x * y - y * x)));
        }
    }
    worst
}

/// A permutation `τ` with `u_{i,τ(i)} ≠ 0` for every `i`, found as a
/// perfect matching of the bipartite graph of nonzero entries. For a grid
/// `P_σ` this returns `σ^{-1}`.
pub fn positivity_permutation(u: &MagicUnitary) -> Result<Permutation> {
    let n = u.n;
    let nonzero: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| frobenius(u.entry(i, j)) > u.tol).collect())
        .collect();
    let mut match_of_col = vec![usize::MAX; n];
    fn augment(i: usize, nz: &[Vec<usize>], seen: &mut [bool], m: &mut [usize]) -> bool {
        for &j in &nz[i] {
            if !seen[j] {
                seen[j] = true;
                if m[j] == usize::MAX || augment(m[j], nz, seen, m) {
                    m[j] = i;
                    return true;
                }
            }
        }
        false
    }
    for i in 0..n {
        let mut seen = vec![false; n];
        if !augment(i, &nonzero, &mut seen, &mut match_of_col) {
            return Err(Error::NoPerfectMatching);
        }
    }
    let mut images = vec![0; n];
    for (j, &i) in match_of_col.iter().enumerate() {
        images[i] = j;
    }
    Permutation::from_images(images)
}

/// Normalised traces `tr(u_ij) / d`; doubly stochastic for a magic unitary.
pub fn entrywise_trace(u: &MagicUnitary) -> DMatrix<f64> {
    DMatrix::from_fn(u.n, u.n, |i, j| u.entry(i, j).trace().re / u.d as f64)
}

/// Largest defect of row sums, column sums and entry range of a real matrix
/// against double stochasticity.
pub fn bistochastic_error(s: &DMatrix<f64>) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..s.nrows() {
        worst = worst.max((s.row(i).sum() - 1.0).abs());
    }
    for j in 0..s.ncols() {
        worst = worst.max((s.column(j).sum() - 1.0).abs());
    }
    for x in s.iter() {
        worst = worst.max(-x).max(x - 1.0);
    }
    worst
}

/// Largest entry of `S · Adj(g) − Adj(h) · S` for a real `|V(h)| × |V(g)|`
/// matrix, e.g. the [`entrywise_trace`] of a quantum isomorphism `g → h`.
pub fn real_intertwining_error(s: &DMatrix<f64>, g: &Graph, h: &Graph) -> Result<f64> {
    if s.shape() != (h.n(), g.n()) {
        return Err(Error::DimensionMismatch(format!(
            "{:?} matrix for graphs on {} and {} vertices",
            s.shape(),
            g.n(),
            h.n()
        )));
    }
    let a = g.adjacency_matrix().map(|x| x as f64);
    let b = h.adjacency_matrix().map(|x| x as f64);
    Ok((s * a - b * s).amax())
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentReport {
    /// Component counts of `h` (rows) and `g` (columns).
    pub components_h: usize,
    pub components_g: usize,
    /// How far `Σ_{x ∈ H_i} u_xa` varies with `a ∈ G_j`.
    pub p_spread: f64,
    /// How far `Σ_{b ∈ G_j} u_xb` varies with `x ∈ H_i`.
    pub q_spread: f64,
    /// Largest `‖p_ij − q_ji‖`.
    pub p_vs_q: f64,
    /// Validity of the grid `(p_ij)` as a magic unitary.
    pub grid_valid: bool,
    /// `(i, j)` with `p_ij ≠ 0`.
    pub pattern: Vec<(usize, usize)>,
    pub passed: bool,
}

fn require_qi(u: &MagicUnitary, g: &Graph, h: &Graph) -> Result<()> {
    if !is_quantum_iso(u, g, h)? {
        return Err(Error::NotQuantumIso);
    }
    Ok(())
}

/// Component projections of a quantum isomorphism `g → h`: for components
/// `H_i` of `h` and `G_j` of `g`, `p_ij = Σ_{x ∈ H_i} u_xa` does not depend on
/// the choice of `a ∈ G_j`, equals `q_ji = Σ_{b ∈ G_j} u_xb` for any
/// `x ∈ H_i`, and the `p_ij` form a magic unitary.
pub fn check_component_projections(
    u: &MagicUnitary,
    g: &Graph,
    h: &Graph,
) -> Result<ComponentReport> {
    require_qi(u, g, h)?;
    let cg: Vec<Vec<usize>> = g.connected_components().into_iter().map(|(s, _)| s.into_vec()).collect();
    let ch: Vec<Vec<usize>> = h.connected_components().into_iter().map(|(s, _)| s.into_vec()).collect();
    let d = u.d;
    let sum = |xs: &[usize], a: usize| xs.iter().fold(zeros(d), |acc, &x| acc + u.entry(x, a));
    let sum_cols = |x: usize, bs: &[usize]| bs.iter().fold(zeros(d), |acc, &b| acc + u.entry(x, b));
    let (mut p_spread, mut q_spread, mut p_vs_q) = (0f64, 0f64, 0f64);
    let mut grid = Vec::new();
    for hi in &ch {
        for gj in &cg {
            let p = sum(hi, gj[0]);
            for &a in gj {
                p_spread = p_spread.max(frobenius(&(sum(hi, a) - &p)));
            }
            let q = sum_cols(hi[0], gj);
            for &x in hi {
                q_spread = q_spread.max(frobenius(&(sum_cols(x, gj) - &q)));
            }
            p_vs_q = p_vs_q.max(frobenius(&(&p - q)));
            grid.push(p);
        }
    }
    let mut pattern = Vec::new();
    for i in 0..ch.len() {
        for j in 0..cg.len() {
            if frobenius(&grid[i * cg.len() + j]) > u.tol {
                pattern.push((i, j));
            }
        }
    }
    let grid_valid = ch.len() == cg.len()
        && is_magic_unitary(&MagicUnitary::new(ch.len(), d, grid)?.with_tol(u.tol * u.n as f64)).is_valid();
    let slack = u.tol * u.n as f64;
    let passed = grid_valid && p_spread <= slack && q_spread <= slack && p_vs_q <= slack;
    Ok(ComponentReport {
        components_h: ch.len(),
        components_g: cg.len(),
        p_spread,
        q_spread,
        p_vs_q,
        grid_valid,
        pattern,
        passed,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct EccentricityReport {
    /// Largest entry norm between vertices of different eccentricity.
    pub off_block: f64,
    /// Largest entry norm between vertices of different degree.
    pub off_degree: f64,
    /// The center rows and columns form a quantum isomorphism between the
    /// induced centers.
    pub center_is_qi: bool,
    pub passed: bool,
}

/// For a quantum isomorphism `g → h`, entries `u_xa` vanish unless `x` and
/// `a` have the same eccentricity (and the same degree); the block on the
/// centers is a quantum isomorphism of the centers.
pub fn check_eccentricity_blocks(
    u: &MagicUnitary,
    g: &Graph,
    h: &Graph,
) -> Result<EccentricityReport> {
    require_qi(u, g, h)?;
    let (eg, eh) = (g.eccentricities()?, h.eccentricities()?);
    let (mut off_block, mut off_degree) = (0f64, 0f64);
    for x in 0..u.n {
        for a in 0..u.n {
            let norm = frobenius(u.entry(x, a));
            if eh[x] != eg[a] {
                off_block = off_block.max(norm);
            }
            if h.degree(x) != g.degree(a) {
                off_degree = off_degree.max(norm);
            }
        }
    }
    let (zg, zh) = (g.center()?, h.center()?);
    let center_is_qi = zg.len() == zh.len() && {
        let block = MagicUnitary::from_fn(zh.len(), u.d, |i, j| u.entry(zh[i], zg[j]).clone())
            .with_tol(u.tol * u.n as f64);
        is_magic_unitary(&block).is_valid()
            && is_quantum_iso(&block, &g.induced_subgraph(&zg)?, &h.induced_subgraph(&zh)?)?
    };
    let passed = off_block <= u.tol && off_degree <= u.tol && center_is_qi;
    Ok(EccentricityReport {
        off_block,
        off_degree,
        center_is_qi,
        passed,
    })
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases
/// of the diagonal of `R` removed.
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let z = ComplexMatrix::from_fn(d, d, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = z.qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = nalgebra::DVector::from_fn(d, |i, _| {
        let x = r[(i, i)];
        if x.norm() > 0.0 {
            x / x.norm()
        } else {
            Complex64::new(1.0, 0.0)
        }
    });
    q * ComplexMatrix::from_diagonal(&phases)
}

fn random_projection<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let w = random_unitary(d, rng);
    let rank = rng.random_range(0..=d);
    let diag = nalgebra::DVector::from_fn(d, |i, _| Complex64::new(f64::from(u8::from(i < rank)), 0.0));
    &w * ComplexMatrix::from_diagonal(&diag) * w.adjoint()
}

fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Permutation {
    let mut images: Vec<usize> = (0..n).collect();
    images.shuffle(rng);
    Permutation::from_images(images).expect("shuffle is a bijection")
}

/// A valid magic unitary by construction: a block-diagonal grid of random
/// `2 × 2` blocks `[[p, 1-p], [1-p, p]]`, `1 × 1` identity blocks and larger
/// blocks of conjugated permutation patterns, with rows and columns then
/// permuted independently at random.
pub fn random_magic_unitary<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> MagicUnitary {
    let mut blocks: Vec<MagicUnitary> = Vec::new();
    let mut left = n;
    while left > 0 {
        let m = rng.random_range(1..=left.min(3));
        left -= m;
        let block = match m {
            1 => MagicUnitary::identity(1, d),
            2 => {
                let p = random_projection(d, rng);
                let q = eye(d) - &p;
                MagicUnitary::new(2, d, vec![p.clone(), q.clone(), q, p]).expect("2x2 block")
            }
            _ => {
                let w = random_unitary(d, rng);
                let perms: Vec<Permutation> = (0..d).map(|_| random_permutation(m, rng)).collect();
                MagicUnitary::from_fn(m, d, |i, j| {
                    let diag = nalgebra::DVector::from_fn(d, |k, _| {
                        Complex64::new(f64::from(u8::from(perms[k].apply(j) == i)), 0.0)
                    });
                    &w * ComplexMatrix::from_diagonal(&diag) * w.adjoint()
                })
            }
        };
        blocks.push(block);
    }
    let mut offsets = Vec::new();
    let mut at = 0;
    for b in &blocks {
        offsets.push(at);
        at += b.n;
    }
    let diag = MagicUnitary::from_fn(n, d, |i, j| {
        for (b, &o) in blocks.iter().zip(&offsets) {
            if (o..o + b.n).contains(&i) {
                return if (o..o + b.n).contains(&j) {
                    b.entry(i - o, j - o).clone()
                } else {
                    zeros(d)
                };
            }
        }
        unreachable!("blocks cover every row")
    });
    let (rows, cols) = (random_permutation(n, rng), random_permutation(n, rng));
    MagicUnitary::from_fn(n, d, |i, j| diag.entry(rows.apply(i), cols.apply(j)).clone())
}

/// `u_ij = Σ_k δ_{i,σ_k(j)} W e_k e_k^* W^*` for the given automorphisms
/// `σ_k` and a random unitary `W`. Adapted to every graph the `σ_k` are
/// automorphisms of.
pub fn from_automorphism_pattern<R: Rng + ?Sized>(autos: &[Permutation], rng: &mut R) -> Result<MagicUnitary> {
    let d = autos.len();
    let Some(first) = autos.first() else {
        return Err(Error::InvalidArgument("need at least one automorphism".into()));
    };
    let n = first.n();
    if autos.iter().any(|p| p.n() != n) {
        return Err(Error::DimensionMismatch("automorphisms of different degree".into()));
    }
    let w = random_unitary(d, rng);
    Ok(MagicUnitary::from_fn(n, d, |i, j| {
        let diag = nalgebra::DVector::from_fn(d, |k, _| {
            Complex64::new(f64::from(u8::from(autos[k].apply(j) == i)), 0.0)
        });
        &w * ComplexMatrix::from_diagonal(&diag) * w.adjoint()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn perm(v: &[usize]) -> Permutation {
        Permutation::from_images(v.to_vec()).unwrap()
    }

    #[test]
    fn validity() {
        assert!(is_magic_unitary(&MagicUnitary::identity(4, 3)).is_valid());
        let p = MagicUnitary::from_permutation(&perm(&[2, 0, 1]), 2);
        assert!(is_magic_unitary(&p).is_valid());
        let mut bad = MagicUnitary::identity(3, 2);
        bad.entries[0][(0, 0)] = Complex64::new(0.5, 0.0);
        let r = is_magic_unitary(&bad);
        assert!(!r.is_valid());
        assert!(r
            .violations
            .iter()
            .any(|v| v.kind == ViolationKind::NotIdempotent && (v.i, v.j) == (0, 0)));
        assert!(MagicUnitary::new(2, 2, vec![eye(2); 3]).is_err());
    }

    #[test]
    fn k4() {
        let u = k4_witness();
        assert!(is_magic_unitary(&u).is_valid());
        assert!(adapted_to(&u, &complete(4)).unwrap());
        assert!((max_commutator_norm(&u) - 0.5).abs() < 1e-12);
        let tau = positivity_permutation(&u).unwrap();
        assert!((0..4).all(|i| frobenius(u.entry(i, tau.apply(i))) > 0.5));
        let s = entrywise_trace(&u);
        assert!((s[(0, 0)] - 0.5).abs() < 1e-12 && (s[(2, 3)] - 0.5).abs() < 1e-12);
        assert!(bistochastic_error(&s) < 1e-12);
    }

    #[test]
    fn permutations() {
        let sigma = perm(&[1, 2, 0, 3]);
        let p = MagicUnitary::from_permutation(&sigma, 1);
        assert_eq!(positivity_permutation(&p).unwrap(), sigma.inverse());
        let s = entrywise_trace(&p);
        assert_eq!(s[(1, 0)], 1.0);
        let g = path(4);
        assert!(adapted_to(&MagicUnitary::from_permutation(&perm(&[3, 2, 1, 0]), 1), &g).unwrap());
        assert!(!adapted_to(&MagicUnitary::from_permutation(&perm(&[1, 0, 2, 3]), 1), &g).unwrap());
        let h = g.relabel(sigma.images()).unwrap();
        assert!(is_quantum_iso(&p, &g, &h).unwrap());
        assert!(real_intertwining_error(&entrywise_trace(&p), &g, &h).unwrap() < 1e-12);
        assert!(real_intertwining_error(&entrywise_trace(&p), &g, &g).unwrap() > 0.5);
        let tau = perm(&[0, 3, 1, 2]);
        let c = convolve(&p, &MagicUnitary::from_permutation(&tau, 1)).unwrap();
        assert_eq!(c, MagicUnitary::from_permutation(&sigma.compose(&tau), 1));
    }

    #[test]
    fn convolution_and_embedding() {
        let i = MagicUnitary::identity(3, 2);
        assert_eq!(convolve(&i, &i).unwrap(), MagicUnitary::identity(3, 4));
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = random_magic_unitary(5, 2, &mut rng);
        let b = random_magic_unitary(5, 3, &mut rng);
        assert!(is_magic_unitary(&a).is_valid());
        assert!(is_magic_unitary(&convolve(&a, &b).unwrap()).is_valid());
        let e = block_qi_embed(&a);
        assert!(is_magic_unitary(&e).is_valid());
        let swap = block_qi_embed(&MagicUnitary::identity(2, 1));
        assert_eq!(swap, MagicUnitary::from_permutation(&perm(&[2, 3, 0, 1]), 1));
    }

    #[test]
    fn embedding_of_a_quantum_iso() {
        let g = path(4);
        let sigma = perm(&[2, 0, 3, 1]);
        let h = g.relabel(sigma.images()).unwrap();
        let u = MagicUnitary::from_permutation(&sigma, 1);
        let e = block_qi_embed(&u);
        let hg = crate::graph::disjoint_sum(&[h, g]);
        assert!(adapted_to(&e, &hg).unwrap());
    }

    #[test]
    fn combine_on_k4() {
        let g = complete(4);
        let u = MagicUnitary::from_permutation(&perm(&[1, 0, 2, 3]), 1);
        let v = MagicUnitary::from_permutation(&perm(&[0, 1, 3, 2]), 1);
        let w = schmidt_combine(&u, &v, &g).unwrap();
        assert!(is_magic_unitary(&w).is_valid());
        assert!(adapted_to(&w, &g).unwrap());
        assert_eq!(w.support(), vec![0, 1, 2, 3]);
        assert!(max_commutator_norm(&w) > 0.1);
        assert!(frobenius(w.entry(0, 2)) < 1e-12);
        let overlapping = MagicUnitary::from_permutation(&perm(&[0, 2, 1, 3]), 1);
        assert!(matches!(
            schmidt_combine(&u, &overlapping, &g),
            Err(Error::OverlappingSupports(1))
        ));
        assert_eq!(
            schmidt_combine(&u, &v, &path(4)),
            Err(Error::NotAdapted)
        );
    }

    #[test]
    fn cyclic_lift_support() {
        let c = MagicUnitary::cyclic_lift(&perm(&[1, 2, 0, 3]));
        assert_eq!(c.d(), 3);
        assert_eq!(c.support(), vec![0, 1, 2]);
        assert!(is_magic_unitary(&c).is_valid());
        assert!(adapted_to(&c, &crate::graph::disjoint_sum(&[cycle(3), complete(1)])).unwrap());
    }

    #[test]
    fn components_and_eccentricity() {
        let g = crate::graph::disjoint_sum(&[complete(2), complete(1)]);
        let r = check_component_projections(&MagicUnitary::identity(3, 1), &g, &g).unwrap();
        assert!(r.passed);
        assert_eq!(r.pattern, vec![(0, 0), (1, 1)]);

        let g = complete(2).repeat(2);
        let swap = MagicUnitary::from_permutation(&perm(&[2, 3, 0, 1]), 1);
        let r = check_component_projections(&swap, &g, &g).unwrap();
        assert!(r.passed);
        assert_eq!(r.pattern, vec![(0, 1), (1, 0)]);

        let pan = pan();
        let flip = perm(&[0, 3, 2, 1, 4]);
        let u = MagicUnitary::from_permutation(&flip, 1);
        let e = check_eccentricity_blocks(&u, &pan, &pan).unwrap();
        assert!(e.passed);
        assert!(check_eccentricity_blocks(&MagicUnitary::identity(5, 2), &pan, &pan)
            .unwrap()
            .passed);
        let not_qi = MagicUnitary::from_permutation(&perm(&[1, 0, 2, 3, 4]), 1);
        assert!(matches!(
            check_eccentricity_blocks(&not_qi, &pan, &pan),
            Err(Error::NotQuantumIso)
        ));
    }
}
