//! Dense eigensolves and the spectral identities linking a layout to its
//! (signed) line graph.
//!
//! With `N` the vertex–edge incidence matrix of a layout (unsigned for
//! full-wave coupling, oriented for half-wave coupling), `N^T N = A_LG + 2I`
//! and `N N^T` is the signless Laplacian `Q = D + A` (resp. the Laplacian
//! `L = D - A`). The two Gram matrices share their nonzero spectrum, so
//!
//! ```text
//! spec(A_LG)  = { mu - 2 : mu in spec(Q) }  +  { -2 repeated m - n times }
//! spec(A*_LG) = { nu - 2 : nu in spec(L) }  +  { -2 repeated m - n times }
//! ```
//!
//! Everything here is checked numerically by solving both sides
//! independently and comparing the sorted eigenvalue lists.

use faer::{Mat, MatRef, Side};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linegraph::{line_graph, signed_line_graph, Orientation};
use crate::matrix::{adjacency_matrix, laplacian, signless_laplacian, IntMatrix};

pub const DEFAULT_CLUSTER_TOL: f64 = 1e-8;
pub const DEFAULT_FLAT_TOL: f64 = 1e-6;
pub const DEFAULT_IDENTITY_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_DIM: usize = 6000;
/// Bottom of every (signed) line-graph spectrum.
pub const FLAT_ENERGY: f64 = -2.0;
const BOUND_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralOptions {
    /// Absolute gap below which neighbouring eigenvalues are merged.
    pub cluster_tol: f64,
    /// Eigenvalues within this distance of `-2` count as flat band.
    pub flat_tol: f64,
    /// Per-eigenvalue tolerance for the line-graph identities.
    pub identity_tol: f64,
    /// Largest matrix dimension handed to the dense solver.
    pub max_dim: usize,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        SpectralOptions {
            cluster_tol: DEFAULT_CLUSTER_TOL,
            flat_tol: DEFAULT_FLAT_TOL,
            identity_tol: DEFAULT_IDENTITY_TOL,
            max_dim: DEFAULT_MAX_DIM,
        }
    }
}

/// Full-wave (uniform hopping) or half-wave (orientation-signed hopping).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coupling {
    #[serde(rename = "full")]
    FullWave,
    #[serde(rename = "half")]
    HalfWave,
}

fn check_solvable(m: MatRef<'_, f64>, max_dim: usize) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::domain(format!(
            "matrix is {}x{}, not square",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.nrows() > max_dim {
        return Err(Error::Resource(format!(
            "matrix dimension {} exceeds the eigensolver cap {max_dim}",
            m.nrows()
        )));
    }
    for j in 0..m.ncols() {
        for i in 0..j {
            let (a, b) = (m[(i, j)], m[(j, i)]);
            if (a - b).abs() > 1e-12 * a.abs().max(b.abs()).max(1.0) {
                return Err(Error::domain(format!(
                    "matrix is not symmetric at ({i},{j}): {a} vs {b}"
                )));
            }
        }
    }
    Ok(())
}

/// Eigenvalues of a real symmetric matrix, ascending.
pub fn symmetric_eigenvalues(m: MatRef<'_, f64>, max_dim: usize) -> Result<Vec<f64>> {
    check_solvable(m, max_dim)?;
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    let mut values = m
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Solver(format!("{e:?}")))?;
    values.sort_by(f64::total_cmp);
    Ok(values)
}

pub fn eigenvalues(m: &IntMatrix, max_dim: usize) -> Result<Vec<f64>> {
    if m.dim() > max_dim {
        return Err(Error::Resource(format!(
            "matrix dimension {} exceeds the eigensolver cap {max_dim}",
            m.dim()
        )));
    }
    if !m.is_symmetric() {
        return Err(Error::domain("integer matrix is not symmetric"));
    }
    symmetric_eigenvalues(m.to_mat().as_ref(), max_dim)
}

/// Eigenvalues with an orthonormal set of eigenvectors (columns).
#[derive(Debug, Clone)]
pub struct EigenPairs {
    pub values: Vec<f64>,
    pub vectors: Mat<f64>,
}

impl EigenPairs {
    pub fn compute(m: MatRef<'_, f64>, max_dim: usize) -> Result<Self> {
        check_solvable(m, max_dim)?;
        let evd = m
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| Error::Solver(format!("{e:?}")))?;
        let n = m.nrows();
        let s = evd.S();
        let values: Vec<f64> = (0..n).map(|i| s[i]).collect();
        Ok(EigenPairs {
            values,
            vectors: evd.U().to_owned(),
        })
    }

    /// `max_k |M v_k - lambda_k v_k| / |M|`, with `|M|` the spectral norm.
    pub fn max_relative_residual(&self, m: MatRef<'_, f64>) -> f64 {
        let norm = self
            .values
            .iter()
            .fold(0.0f64, |acc, v| acc.max(v.abs()))
            .max(f64::MIN_POSITIVE);
        let mv = m * self.vectors.as_ref();
        let mut worst = 0.0f64;
        for (k, &lambda) in self.values.iter().enumerate() {
            let r: f64 = (0..m.nrows())
                .map(|i| {
                    let d = mv[(i, k)] - lambda * self.vectors[(i, k)];
                    d * d
                })
                .sum::<f64>()
                .sqrt();
            worst = worst.max(r);
        }
        worst / norm
    }
}

/// Eigenvalues grouped into `(value, multiplicity)` clusters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumMultiset {
    entries: Vec<(f64, usize)>,
    cluster_tol: f64,
}

impl SpectrumMultiset {
    /// Sorts `values` and merges runs whose consecutive gaps are at most
    /// `cluster_tol`; each cluster is represented by its mean.
    pub fn from_values(values: &[f64], cluster_tol: f64) -> Self {
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mut entries: Vec<(f64, usize)> = Vec::new();
        let mut run: Vec<f64> = Vec::new();
        for v in sorted {
            if let Some(&last) = run.last() {
                if v - last > cluster_tol {
                    entries.push(mean(&run));
                    run.clear();
                }
            }
            run.push(v);
        }
        if !run.is_empty() {
            entries.push(mean(&run));
        }
        SpectrumMultiset {
            entries,
            cluster_tol,
        }
    }

    pub fn entries(&self) -> &[(f64, usize)] {
        &self.entries
    }

    pub fn cluster_tol(&self) -> f64 {
        self.cluster_tol
    }

    /// Sum of multiplicities: the matrix dimension.
    pub fn dimension(&self) -> usize {
        self.entries.iter().map(|e| e.1).sum()
    }

    pub fn min(&self) -> Option<f64> {
        self.entries.first().map(|e| e.0)
    }

    pub fn max(&self) -> Option<f64> {
        self.entries.last().map(|e| e.0)
    }

    /// Total multiplicity of clusters within `tol` of `value`.
    pub fn multiplicity_near(&self, value: f64, tol: f64) -> usize {
        self.entries
            .iter()
            .filter(|e| (e.0 - value).abs() <= tol)
            .map(|e| e.1)
            .sum()
    }

    /// Eigenvalues with repetition, ascending.
    pub fn expanded(&self) -> Vec<f64> {
        self.entries
            .iter()
            .flat_map(|&(v, k)| std::iter::repeat_n(v, k))
            .collect()
    }

    /// Same number of clusters, values within `tol`, identical multiplicities.
    pub fn matches(&self, expected: &[(f64, usize)], tol: f64) -> bool {
        self.entries.len() == expected.len()
            && self
                .entries
                .iter()
                .zip(expected)
                .all(|(a, b)| (a.0 - b.0).abs() <= tol && a.1 == b.1)
    }
}

fn mean(run: &[f64]) -> (f64, usize) {
    (run.iter().sum::<f64>() / run.len() as f64, run.len())
}

pub fn eigen_spectrum(m: &IntMatrix, opts: &SpectralOptions) -> Result<SpectrumMultiset> {
    Ok(SpectrumMultiset::from_values(
        &eigenvalues(m, opts.max_dim)?,
        opts.cluster_tol,
    ))
}

/// Coupling matrix of a layout: `A_LG` or `A*_LG`.
pub fn coupling_matrix(
    g: &Graph,
    coupling: Coupling,
    orientation: Option<&Orientation>,
) -> Result<IntMatrix> {
    match coupling {
        Coupling::FullWave => Ok(adjacency_matrix(&line_graph(g)?.graph)),
        Coupling::HalfWave => {
            let default;
            let o = match orientation {
                Some(o) => o,
                None => {
                    default = crate::linegraph::default_orientation(g);
                    &default
                }
            };
            Ok(signed_line_graph(g, o)?.adjacency_matrix())
        }
    }
}

/// Both sides of a line-graph spectral identity and their agreement.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub coupling: Coupling,
    pub layout_vertices: usize,
    pub layout_edges: usize,
    /// Sorted eigenvalues of `A_LG` (full wave) or `A*_LG` (half wave).
    pub line_spectrum: Vec<f64>,
    /// Sorted eigenvalues of `Q` (full wave) or `L` (half wave).
    pub laplacian_spectrum: Vec<f64>,
    pub max_deviation: f64,
    pub worst_index: usize,
    pub tolerance: f64,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.max_deviation <= self.tolerance
    }

    /// Spectrum predicted from the layout side.
    pub fn predicted(&self) -> Vec<f64> {
        predicted_line_spectrum(
            &self.laplacian_spectrum,
            self.layout_edges - self.layout_vertices,
        )
    }

    pub fn into_verified(self) -> Result<Self> {
        if self.passed() {
            return Ok(self);
        }
        let predicted = self.predicted();
        Err(Error::Verification(format!(
            "{:?} identity off by {:.3e} (tolerance {:.1e}) at sorted index {}: line graph {} vs layout {}",
            self.coupling,
            self.max_deviation,
            self.tolerance,
            self.worst_index,
            self.line_spectrum[self.worst_index],
            predicted[self.worst_index]
        )))
    }
}

fn predicted_line_spectrum(laplacian_values: &[f64], extra_flat: usize) -> Vec<f64> {
    let mut out: Vec<f64> = laplacian_values.iter().map(|mu| mu - 2.0).collect();
    out.extend(std::iter::repeat_n(FLAT_ENERGY, extra_flat));
    out.sort_by(f64::total_cmp);
    out
}

/// Solves the line-graph side and the layout side independently and
/// compares them as sorted multisets. Never fails on a mismatch; see
/// [`IdentityReport::into_verified`].
pub fn identity_report(
    g: &Graph,
    coupling: Coupling,
    orientation: Option<&Orientation>,
    opts: &SpectralOptions,
) -> Result<IdentityReport> {
    let (n, m) = (g.vertex_count(), g.edge_count());
    if !g.is_connected() || m == 0 {
        return Err(Error::domain("identity needs a connected layout with edges"));
    }
    if m < n {
        return Err(Error::domain(format!(
            "identity needs m >= n (layout has n = {n}, m = {m})"
        )));
    }
    let line = coupling_matrix(g, coupling, orientation)?;
    let layout = match coupling {
        Coupling::FullWave => signless_laplacian(g),
        Coupling::HalfWave => laplacian(g),
    };
    let line_spectrum = eigenvalues(&line, opts.max_dim)?;
    drop(line);
    let laplacian_spectrum = eigenvalues(&layout, opts.max_dim)?;

    let predicted = predicted_line_spectrum(&laplacian_spectrum, m - n);
    let (worst_index, max_deviation) = line_spectrum
        .iter()
        .zip(&predicted)
        .map(|(a, b)| (a - b).abs())
        .enumerate()
        .fold((0, 0.0f64), |best, (i, d)| if d > best.1 { (i, d) } else { best });

    Ok(IdentityReport {
        coupling,
        layout_vertices: n,
        layout_edges: m,
        line_spectrum,
        laplacian_spectrum,
        max_deviation,
        worst_index,
        tolerance: opts.identity_tol,
    })
}

/// `spec(A_LG) = (spec(Q) - 2) + {-2}^(m-n)`, or a verification error.
pub fn verify_identity_full(g: &Graph) -> Result<IdentityReport> {
    identity_report(g, Coupling::FullWave, None, &SpectralOptions::default())?.into_verified()
}

/// `spec(A*_LG) = (spec(L) - 2) + {-2}^(m-n)`, or a verification error.
pub fn verify_identity_half(g: &Graph, orientation: &Orientation) -> Result<IdentityReport> {
    identity_report(
        g,
        Coupling::HalfWave,
        Some(orientation),
        &SpectralOptions::default(),
    )?
    .into_verified()
}

/// Number of eigenvalues within `flat_tol` of `-2`.
pub fn flat_band_multiplicity(spectrum: &SpectrumMultiset, flat_tol: f64) -> usize {
    spectrum.multiplicity_near(FLAT_ENERGY, flat_tol)
}

pub fn count_flat(values: &[f64], flat_tol: f64) -> usize {
    values
        .iter()
        .filter(|v| (*v - FLAT_ENERGY).abs() <= flat_tol)
        .count()
}

/// Distance from `-2` to the first eigenvalue above the flat band.
pub fn spectral_gap_above_flat(spectrum: &SpectrumMultiset, flat_tol: f64) -> Option<f64> {
    spectrum
        .entries()
        .iter()
        .map(|e| e.0)
        .find(|&v| v > FLAT_ENERGY + flat_tol)
        .map(|v| v - FLAT_ENERGY)
}

/// Largest-eigenvalue bounds for the two couplings, with `q` read as the
/// maximal layout degree and a minimal degree of at least 2:
///
/// ```text
///     2 <= max spec(A_LG)  <= 2(q - 1)
/// q - 2 <= max spec(A*_LG) <= 2(q - 1)
/// ```
///
/// For a regular layout the first upper bound is attained.
#[derive(Debug, Clone, Serialize)]
pub struct BoundsReport {
    pub min_degree: usize,
    pub max_degree: usize,
    pub regular: bool,
    pub full_max: f64,
    pub half_max: f64,
    pub full_range: (f64, f64),
    pub half_range: (f64, f64),
    /// Distance to the nearest bound; negative when violated.
    pub full_slack: f64,
    pub half_slack: f64,
    /// `|full_max - 2(q-1)|`, only meaningful for regular layouts.
    pub regular_gap: f64,
}

impl BoundsReport {
    pub fn evaluate(g: &Graph, full_max: f64, half_max: f64) -> Result<Self> {
        let (k_min, k_max) = (g.min_degree(), g.max_degree());
        if k_min < 2 {
            return Err(Error::domain(format!(
                "eigenvalue bounds assume minimal degree >= 2, layout has {k_min}"
            )));
        }
        let upper = 2.0 * (k_max as f64 - 1.0);
        let full_range = (2.0, upper);
        let half_range = (k_max as f64 - 2.0, upper);
        let slack = |x: f64, (lo, hi): (f64, f64)| (x - lo).min(hi - x);
        Ok(BoundsReport {
            min_degree: k_min,
            max_degree: k_max,
            regular: k_min == k_max,
            full_max,
            half_max,
            full_range,
            half_range,
            full_slack: slack(full_max, full_range),
            half_slack: slack(half_max, half_range),
            regular_gap: (full_max - upper).abs(),
        })
    }

    pub fn passed(&self) -> bool {
        self.full_slack >= -BOUND_SLACK
            && self.half_slack >= -BOUND_SLACK
            && (!self.regular || self.regular_gap <= BOUND_SLACK)
    }
}

/// Evaluates the bounds and fails with diagnostics if any is violated.
pub fn check_bounds(g: &Graph, full: &SpectrumMultiset, half: &SpectrumMultiset) -> Result<BoundsReport> {
    let (Some(full_max), Some(half_max)) = (full.max(), half.max()) else {
        return Err(Error::domain("empty spectrum"));
    };
    let report = BoundsReport::evaluate(g, full_max, half_max)?;
    if report.passed() {
        Ok(report)
    } else {
        Err(Error::Verification(format!(
            "eigenvalue bounds violated: full max {full_max} in {:?}, half max {half_max} in {:?}, regular gap {:.3e}",
            report.full_range, report.half_range, report.regular_gap
        )))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianParams {
    pub omega0: f64,
    pub t: f64,
    pub mode: Coupling,
}

impl HamiltonianParams {
    pub fn new(omega0: f64, t: f64, mode: Coupling) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) || !omega0.is_finite() {
            return Err(Error::domain(format!(
                "hopping amplitude must be positive and finite (t = {t}, omega0 = {omega0})"
            )));
        }
        Ok(HamiltonianParams { omega0, t, mode })
    }
}

/// Physical spectrum `omega0 - t * lambda` of the tight-binding Hamiltonian.
pub fn hamiltonian_spectrum(
    spectrum: &SpectrumMultiset,
    params: &HamiltonianParams,
) -> Result<SpectrumMultiset> {
    let checked = HamiltonianParams::new(params.omega0, params.t, params.mode)?;
    let mut entries: Vec<(f64, usize)> = spectrum
        .entries()
        .iter()
        .map(|&(v, k)| (checked.omega0 - checked.t * v, k))
        .collect();
    entries.reverse();
    Ok(SpectrumMultiset {
        entries,
        cluster_tol: spectrum.cluster_tol() * checked.t,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramBin {
    pub left: f64,
    pub right: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub bins: Vec<HistogramBin>,
    /// Exact flat-band count, independent of binning.
    pub flat_band_count: usize,
}

/// Histogram margin beyond `-2` and the top eigenvalue.
pub const HISTOGRAM_MARGIN: f64 = 0.05;

/// Equal-width bins over `[-2 - 0.05, max + 0.05]`.
pub fn histogram(values: &[f64], bins: usize, flat_tol: f64) -> Result<Histogram> {
    if bins == 0 {
        return Err(Error::domain("histogram needs at least one bin"));
    }
    let Some(max) = values.iter().copied().reduce(f64::max) else {
        return Err(Error::domain("histogram of an empty spectrum"));
    };
    let lo = FLAT_ENERGY.min(values.iter().copied().fold(f64::INFINITY, f64::min)) - HISTOGRAM_MARGIN;
    let hi = max + HISTOGRAM_MARGIN;
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &v in values {
        let idx = (((v - lo) / width) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    Ok(Histogram {
        bins: counts
            .into_iter()
            .enumerate()
            .map(|(i, count)| HistogramBin {
                left: lo + i as f64 * width,
                right: if i + 1 == bins { hi } else { lo + (i + 1) as f64 * width },
                count,
            })
            .collect(),
        flat_band_count: count_flat(values, flat_tol),
    })
}
