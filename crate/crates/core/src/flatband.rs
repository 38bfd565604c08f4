//! Flat-band eigenstates at energy `-2`.
//!
//! Two constructions: an orthonormal basis of the whole eigenspace taken
//! from a dense eigendecomposition, and explicit integer states supported on
//! even cycles of the layout. Walking an even cycle and putting alternating
//! `+1, -1` on its edges cancels at every layout vertex the cycle visits,
//! which makes the vector an exact eigenvector of `A_LG` with eigenvalue `-2`.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linegraph::{line_graph, signed_line_graph, LineGraph, Orientation};
use crate::matrix::IntMatrix;
use crate::spectra::{Coupling, EigenPairs, SpectralOptions, FLAT_ENERGY};

/// Residual bound every flat state must satisfy.
pub const FLAT_RESIDUAL_TOL: f64 = 1e-8;
/// Pivot threshold for rank decisions on integer-seeded vectors.
pub const RANK_PIVOT_TOL: f64 = 1e-10;
/// Largest layout accepted by [`independent_even_cycle_states`].
pub const MAX_CYCLE_SEARCH_VERTICES: usize = 200;
pub const DEFAULT_SEARCH_BUDGET: usize = 20_000_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum FlatSource {
    NullSpace,
    /// Layout vertices of the cycle in walking order.
    EvenCycle(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlatState {
    /// Indexed by line-graph vertex.
    pub vector: Vec<f64>,
    pub source: FlatSource,
}

impl FlatState {
    /// Exact integer entries for even-cycle states.
    pub fn integer_entries(&self) -> Option<Vec<i64>> {
        match self.source {
            FlatSource::EvenCycle(_) => Some(self.vector.iter().map(|&x| x as i64).collect()),
            FlatSource::NullSpace => None,
        }
    }
}

/// Row-compressed copy of an integer matrix for repeated products.
struct SparseRows {
    rows: Vec<Vec<(usize, f64)>>,
}

impl SparseRows {
    fn new(m: &IntMatrix) -> Self {
        let rows = (0..m.dim())
            .map(|i| {
                m.row(i)
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x != 0)
                    .map(|(j, &x)| (j, x as f64))
                    .collect()
            })
            .collect();
        SparseRows { rows }
    }

    /// `|(M + 2I) v|_inf`
    fn flat_residual(&self, v: &[f64]) -> f64 {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mv: f64 = row.iter().map(|&(j, a)| a * v[j]).sum();
                (mv - FLAT_ENERGY * v[i]).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// `|(M + 2I) v|_inf` for an arbitrary vector.
pub fn flat_residual(m: &IntMatrix, v: &[f64]) -> f64 {
    SparseRows::new(m).flat_residual(v)
}

/// Orthonormal basis of the eigenspace of `m` at `-2`.
///
/// Eigenvectors whose eigenvalue lies within `flat_tol` of `-2` are
/// collected and re-orthonormalised; each result is checked against
/// [`FLAT_RESIDUAL_TOL`].
pub fn flat_band_basis(m: &IntMatrix, opts: &SpectralOptions) -> Result<Vec<FlatState>> {
    if !m.is_symmetric() {
        return Err(Error::domain("coupling matrix is not symmetric"));
    }
    let pairs = EigenPairs::compute(m.to_mat().as_ref(), opts.max_dim)?;
    let n = m.dim();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for (k, &lambda) in pairs.values.iter().enumerate() {
        if (lambda - FLAT_ENERGY).abs() > opts.flat_tol {
            continue;
        }
        let mut v: Vec<f64> = (0..n).map(|i| pairs.vectors[(i, k)]).collect();
        // two passes of modified Gram-Schmidt
        for _ in 0..2 {
            for b in &basis {
                let c = dot(b, &v);
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let norm = dot(&v, &v).sqrt();
        if norm < 1e-6 {
            return Err(Error::Verification(format!(
                "eigenvector {k} is linearly dependent on the flat basis"
            )));
        }
        v.iter_mut().for_each(|x| *x /= norm);
        basis.push(v);
    }

    let sparse = SparseRows::new(m);
    basis
        .into_iter()
        .enumerate()
        .map(|(k, vector)| {
            let r = sparse.flat_residual(&vector);
            if r > FLAT_RESIDUAL_TOL {
                Err(Error::Verification(format!(
                    "flat basis vector {k} has residual {r:.3e}"
                )))
            } else {
                Ok(FlatState {
                    vector,
                    source: FlatSource::NullSpace,
                })
            }
        })
        .collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Alternating `+1/-1` vector on the edges of an even simple cycle.
pub fn even_cycle_state(g: &Graph, cycle: &[usize], lg: &LineGraph) -> Result<FlatState> {
    if lg.back_map.as_slice() != g.edges() {
        return Err(Error::domain("line graph was not built from this layout"));
    }
    let len = cycle.len();
    if len < 3 {
        return Err(Error::domain(format!("a cycle needs at least 3 vertices, got {len}")));
    }
    let mut seen = vec![false; g.vertex_count()];
    for &v in cycle {
        if v >= g.vertex_count() || std::mem::replace(&mut seen[v], true) {
            return Err(Error::domain(format!(
                "{cycle:?} is not a simple cycle (vertex {v})"
            )));
        }
    }
    if len % 2 == 1 {
        return Err(Error::domain(format!("cycle of odd length {len}")));
    }
    let mut vector = vec![0.0; g.edge_count()];
    for i in 0..len {
        let (u, w) = (cycle[i], cycle[(i + 1) % len]);
        let e = g.edge_index(u, w).ok_or_else(|| {
            Error::domain(format!("{cycle:?} is not a cycle: ({u},{w}) is not an edge"))
        })?;
        vector[e] = if i % 2 == 0 { 1.0 } else { -1.0 };
    }
    Ok(FlatState {
        vector,
        source: FlatSource::EvenCycle(cycle.to_vec()),
    })
}

/// `A v + 2 v == 0` in integer arithmetic, `A` the adjacency of `line`.
pub fn is_exact_flat_state(line: &Graph, v: &[i64]) -> bool {
    v.len() == line.vertex_count()
        && (0..v.len()).all(|i| 2 * v[i] + line.neighbors(i).iter().map(|&j| v[j]).sum::<i64>() == 0)
}

/// Prime for exact rank computations. Every nonzero minor of a (signed)
/// incidence matrix is `+-2^k`, so ranks modulo an odd prime equal ranks
/// over the rationals.
const RANK_PRIME: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % RANK_PRIME as u128) as u64
}

fn inv_mod(a: u64) -> u64 {
    let (mut base, mut exp, mut acc) = (a, RANK_PRIME - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base);
        }
        base = mul_mod(base, base);
        exp >>= 1;
    }
    acc
}

/// Exact rank over GF(p) of sparse vectors, each a sorted `(index, value)` list.
fn sparse_rank_mod_p(vectors: impl IntoIterator<Item = Vec<(usize, u64)>>, dim: usize) -> usize {
    // basis[k]: row with leading index k, normalised to a leading 1.
    let mut basis: Vec<Option<Vec<(usize, u64)>>> = vec![None; dim];
    let mut rank = 0;
    for mut r in vectors {
        while let Some(&(k, c)) = r.first() {
            match &basis[k] {
                Some(row) => {
                    let mut merged = Vec::with_capacity(r.len() + row.len());
                    let (mut i, mut j) = (0, 0);
                    while i < r.len() || j < row.len() {
                        let take_r = j == row.len() || (i < r.len() && r[i].0 <= row[j].0);
                        let take_row = i == r.len() || (j < row.len() && row[j].0 <= r[i].0);
                        let idx = if take_r { r[i].0 } else { row[j].0 };
                        let mut v = if take_r { r[i].1 } else { 0 };
                        if take_row {
                            v = (v + RANK_PRIME - mul_mod(c, row[j].1)) % RANK_PRIME;
                        }
                        if v != 0 {
                            merged.push((idx, v));
                        }
                        i += usize::from(take_r);
                        j += usize::from(take_row);
                    }
                    r = merged;
                }
                None => {
                    let inv = inv_mod(c);
                    r.iter_mut().for_each(|e| e.1 = mul_mod(e.1, inv));
                    basis[k] = Some(r);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

/// Exact flat-band dimension `m - rank(N)` of a coupling matrix, with `N` the
/// unsigned (full wave) or oriented (half wave) incidence matrix of `g`.
///
/// The coupling matrix is first checked to equal `N^T N - 2I` entry by
/// entry, so the kernel of `A + 2I` is the kernel of `N`.
pub fn exact_flat_dimension(
    g: &Graph,
    coupling: Coupling,
    orientation: Option<&Orientation>,
) -> Result<usize> {
    let m = g.edge_count();
    let default;
    let o = match orientation {
        Some(o) => o,
        None => {
            default = crate::linegraph::default_orientation(g);
            &default
        }
    };
    let slg = signed_line_graph(g, o)?;
    // Incidence entry of edge e at its endpoint v.
    let entry = |e: usize, v: usize| -> i64 {
        match coupling {
            Coupling::FullWave => 1,
            Coupling::HalfWave if o.head(e) == v => 1,
            Coupling::HalfWave => -1,
        }
    };
    let incidence = g.incidence();
    let mut products = 0;
    for (v, edges) in incidence.iter().enumerate() {
        for (a, &e) in edges.iter().enumerate() {
            for &f in &edges[a + 1..] {
                let want = match coupling {
                    Coupling::FullWave => slg.base.has_edge(e, f).then_some(1),
                    Coupling::HalfWave => slg.sign(e, f).map(i64::from),
                };
                if want != Some(entry(e, v) * entry(f, v)) {
                    return Err(Error::Internal(format!(
                        "coupling entry ({e},{f}) differs from the incidence product"
                    )));
                }
                products += 1;
            }
        }
    }
    if products != slg.base.edge_count() {
        return Err(Error::Internal(
            "line graph has couplings without a shared layout vertex".into(),
        ));
    }
    let to_mod = |x: i64| if x >= 0 { x as u64 } else { RANK_PRIME - (-x) as u64 };
    let columns = g.edges().iter().enumerate().map(|(e, &(u, v))| {
        vec![(u, to_mod(entry(e, u))), (v, to_mod(entry(e, v)))]
    });
    Ok(m - sparse_rank_mod_p(columns, g.vertex_count()))
}

/// Incremental row-echelon rank with a fixed pivot threshold.
#[derive(Debug, Default)]
pub struct RankTracker {
    rows: Vec<(usize, Vec<f64>)>,
}

impl RankTracker {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds `v` if it is independent of the vectors seen so far.
    pub fn insert(&mut self, v: &[f64]) -> bool {
        let mut r = v.to_vec();
        for (pivot, row) in &self.rows {
            let c = r[*pivot];
            if c != 0.0 {
                r.iter_mut().zip(row).for_each(|(x, y)| *x -= c * y);
            }
        }
        let (pivot, &max) = match r
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        {
            Some(p) => p,
            None => return false,
        };
        if max.abs() <= RANK_PIVOT_TOL {
            return false;
        }
        r.iter_mut().for_each(|x| *x /= max);
        self.rows.push((pivot, r));
        true
    }
}

/// Outcome of [`independent_even_cycle_states`].
#[derive(Debug, Clone, Serialize)]
pub struct EvenCycleSearch {
    /// A maximal independent set among the cycles examined.
    pub states: Vec<FlatState>,
    pub rank: usize,
    /// Dimension of the full-wave flat band: `m - n`, plus one if bipartite.
    pub target: usize,
    pub max_length: usize,
    pub cycles_examined: usize,
    pub budget_exhausted: bool,
}

impl EvenCycleSearch {
    /// `false` flags a partial result.
    pub fn complete(&self) -> bool {
        self.rank == self.target
    }
}

/// Enumerates even simple cycles by increasing length, up to `search_limit`
/// (default `2 * girth + 4`), and keeps those that raise the rank.
pub fn independent_even_cycle_states(
    g: &Graph,
    search_limit: Option<usize>,
    budget: usize,
) -> Result<EvenCycleSearch> {
    let n = g.vertex_count();
    if n > MAX_CYCLE_SEARCH_VERTICES {
        return Err(Error::Resource(format!(
            "cycle search is limited to {MAX_CYCLE_SEARCH_VERTICES} layout vertices, got {n}"
        )));
    }
    if !g.is_connected() {
        return Err(Error::domain("cycle search needs a connected layout"));
    }
    let lg = line_graph(g)?;
    let m = g.edge_count();
    let target = (m + usize::from(g.is_bipartite())).saturating_sub(n);
    let max_length = search_limit.unwrap_or_else(|| g.girth().map_or(0, |girth| 2 * girth + 4));

    let mut tracker = RankTracker::new();
    let mut states = Vec::new();
    let mut cycles_examined = 0;
    let mut remaining = budget;
    let mut budget_exhausted = false;
    for len in (4..=max_length).step_by(2) {
        if tracker.rank() == target {
            break;
        }
        let (cycles, exhausted) = cycles_of_length(g, len, &mut remaining);
        for cycle in cycles {
            cycles_examined += 1;
            let state = even_cycle_state(g, &cycle, &lg)?;
            if tracker.insert(&state.vector) {
                states.push(state);
                if tracker.rank() == target {
                    break;
                }
            }
        }
        if exhausted {
            budget_exhausted = true;
            break;
        }
    }
    Ok(EvenCycleSearch {
        rank: tracker.rank(),
        states,
        target,
        max_length,
        cycles_examined,
        budget_exhausted,
    })
}

/// Simple cycles with exactly `len` vertices, each reported once: it starts
/// at its smallest vertex and its second vertex is smaller than its last.
/// Returns `true` as second component when the step budget ran out.
pub fn cycles_of_length(g: &Graph, len: usize, budget: &mut usize) -> (Vec<Vec<usize>>, bool) {
    let n = g.vertex_count();
    let mut out = Vec::new();
    if len < 3 {
        return (out, false);
    }
    let mut dist = vec![usize::MAX; n];
    let mut on_path = vec![false; n];
    for start in 0..n {
        // distances back to `start` inside the subgraph on vertices >= start
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[start] = 0;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbors(u) {
                if w > start && dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        let mut path = vec![start];
        on_path[start] = true;
        let exhausted = extend(g, len, start, &dist, &mut path, &mut on_path, &mut out, budget);
        on_path[start] = false;
        if exhausted {
            return (out, true);
        }
    }
    (out, false)
}

#[allow(clippy::too_many_arguments)]
fn extend(
    g: &Graph,
    len: usize,
    start: usize,
    dist: &[usize],
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    out: &mut Vec<Vec<usize>>,
    budget: &mut usize,
) -> bool {
    let tail = *path.last().expect("path starts non-empty");
    for &w in g.neighbors(tail) {
        if *budget == 0 {
            return true;
        }
        *budget -= 1;
        if w == start && path.len() == len && path[1] < tail {
            out.push(path.clone());
            continue;
        }
        if w <= start || on_path[w] || path.len() >= len {
            continue;
        }
        // after stepping to w, len - path.len() - 1 more steps must lead home
        if dist[w] == usize::MAX || dist[w] > len - path.len() {
            continue;
        }
        path.push(w);
        on_path[w] = true;
        let exhausted = extend(g, len, start, dist, path, on_path, out, budget);
        on_path[w] = false;
        path.pop();
        if exhausted {
            return true;
        }
    }
    false
}
