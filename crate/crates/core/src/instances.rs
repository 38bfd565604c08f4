//! Exact reference spectra.
//!
//! Values are stored as `a + b * sqrt(5)` with rational `a`, `b` and only
//! expanded to floating point when compared.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MatrixKind {
    /// Adjacency matrix of the layout itself.
    LayoutAdjacency,
    /// Line-graph adjacency `A_LG`.
    FullWave,
    /// Signed line-graph adjacency `A*_LG`.
    HalfWave,
}

/// `a + b_sqrt5 * sqrt(5)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadraticSurd {
    pub a: f64,
    pub b_sqrt5: f64,
}

impl QuadraticSurd {
    pub fn value(&self) -> f64 {
        self.a + self.b_sqrt5 * 5f64.sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenEntry {
    pub value: QuadraticSurd,
    pub mult: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenSpectrum {
    pub name: String,
    pub kind: MatrixKind,
    pub dimension: usize,
    pub entries: Vec<GoldenEntry>,
}

impl GoldenSpectrum {
    /// `(value, multiplicity)` pairs in ascending order of value.
    pub fn numeric(&self) -> Vec<(f64, usize)> {
        let mut out: Vec<(f64, usize)> = self
            .entries
            .iter()
            .map(|e| (e.value.value(), e.mult))
            .collect();
        out.sort_by(|x, y| x.0.total_cmp(&y.0));
        out
    }

    pub fn multiplicity_of(&self, value: f64, tol: f64) -> usize {
        self.numeric()
            .iter()
            .filter(|e| (e.0 - value).abs() <= tol)
            .map(|e| e.1)
            .sum()
    }
}

const FIXTURES: &[(&str, MatrixKind, &str)] = &[
    (
        "dodecahedron",
        MatrixKind::LayoutAdjacency,
        include_str!("../fixtures/dodecahedron_layout_adjacency.json"),
    ),
    (
        "dodecahedron",
        MatrixKind::FullWave,
        include_str!("../fixtures/dodecahedron_full_wave.json"),
    ),
    (
        "dodecahedron",
        MatrixKind::HalfWave,
        include_str!("../fixtures/dodecahedron_half_wave.json"),
    ),
];

pub fn golden(name: &str, kind: MatrixKind) -> Result<GoldenSpectrum> {
    let (_, _, text) = FIXTURES
        .iter()
        .find(|(n, k, _)| *n == name && *k == kind)
        .ok_or_else(|| Error::Lookup {
            kind: "golden spectrum",
            name: format!("{name}/{kind:?}"),
        })?;
    let spectrum: GoldenSpectrum = serde_json::from_str(text)?;
    let total: usize = spectrum.entries.iter().map(|e| e.mult).sum();
    if total != spectrum.dimension {
        return Err(Error::Internal(format!(
            "fixture {name}/{kind:?}: multiplicities sum to {total}, dimension {}",
            spectrum.dimension
        )));
    }
    Ok(spectrum)
}
