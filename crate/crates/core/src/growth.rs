//! Exact growth counts of ring layouts and the flat-band fraction.
//!
//! For a layout with `l` rings, `t_l = 1 + sum_{j<=l} B_j` polygons,
//! `n_l = (B_{l+1} + 2(t_l - 1)) / (q - 2)` vertices and, from Euler's
//! formula, `m_l = n_l + t_l - 1` edges. The full-wave flat-band fraction is
//! `f_l = (m_l - n_l) / m_l = (q - 2) / (C_l + q)` with
//! `C_l = B_{l+1} / (t_l - 1)`, which tends to `sigma - 1` where
//! `sigma = (tau - 2 + sqrt(tau^2 - 4 tau)) / 2`.
//!
//! Counts are carried in `i128`; floating point only appears in the
//! closed forms used for cross-checks and in the fractions themselves.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{GeometryClass, SchlafliSpec};
use crate::tiling::{ring_counts, RingCounts};

fn require_flat_or_hyperbolic(spec: SchlafliSpec) -> Result<()> {
    if spec.geometry() == GeometryClass::Spherical {
        return Err(Error::domain(format!(
            "{spec} is spherical (tau = {} < 4); growth constants are undefined",
            spec.tau()
        )));
    }
    Ok(())
}

/// Larger root of `x^2 - (tau - 2) x + 1`; equals 1 exactly for Euclidean tilings.
pub fn sigma(spec: SchlafliSpec) -> Result<f64> {
    require_flat_or_hyperbolic(spec)?;
    let tau = spec.tau() as f64;
    Ok((tau - 2.0 + (tau * tau - 4.0 * tau).sqrt()) / 2.0)
}

/// Asymptotic flat-band fraction `(q - 2) / (sigma - 1 + q)`.
pub fn f_infinity(spec: SchlafliSpec) -> Result<f64> {
    let q = spec.q() as f64;
    Ok((q - 2.0) / (sigma(spec)? - 1.0 + q))
}

/// `B_l` from the closed-form solution of `B_{l+1} = (tau - 2) B_l - B_{l-1}`.
pub fn closed_form_b(spec: SchlafliSpec, ring: usize) -> Result<f64> {
    if ring == 0 {
        return Err(Error::domain("ring index starts at 1"));
    }
    let s = sigma(spec)?;
    let scale = spec.p() as f64 * (spec.q() as f64 - 2.0);
    let l = ring as f64;
    Ok(match spec.geometry() {
        GeometryClass::Euclidean => scale * (l - 1.0),
        _ => scale / (s * s - 1.0) * (s.powf(l) - s.powf(2.0 - l)),
    })
}

/// Polygons, vertices and edges of the `rings`-ring layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LayoutCounts {
    pub polygons: i128,
    pub vertices: i128,
    pub edges: i128,
}

pub fn counts(spec: SchlafliSpec, rings: usize) -> Result<LayoutCounts> {
    counts_from(&ring_counts(spec, rings)?)
}

fn counts_from(rc: &RingCounts) -> Result<LayoutCounts> {
    let q = rc.spec.q() as i128;
    let polygons = 1 + (1..=rc.rings).map(|j| rc.anchored(j)).sum::<i128>();
    let numerator = rc.anchored(rc.rings + 1) + 2 * (polygons - 1);
    if numerator % (q - 2) != 0 {
        return Err(Error::Internal(format!(
            "{}: B_(l+1) + 2(t_l - 1) = {numerator} is not divisible by q - 2",
            rc.spec
        )));
    }
    let vertices = numerator / (q - 2);
    if vertices != rc.total_vertices() {
        return Err(Error::Internal(format!(
            "{}: vertex count {vertices} disagrees with ring sum {}",
            rc.spec,
            rc.total_vertices()
        )));
    }
    // Euler: n - m + t = 1
    let edges = vertices + polygons - 1;
    Ok(LayoutCounts {
        polygons,
        vertices,
        edges,
    })
}

/// `C_l = B_{l+1} / (t_l - 1)` and `f_l = (q - 2) / (C_l + q)`.
///
/// Needs `l >= 2`: the one-ring layout is a single polygon, `t_1 - 1 = 0`.
pub fn c_and_f(spec: SchlafliSpec, rings: usize) -> Result<(f64, f64)> {
    if rings < 2 {
        return Err(Error::domain(format!(
            "C_l needs at least two rings (got {rings})"
        )));
    }
    let rc = ring_counts(spec, rings)?;
    let c = counts_from(&rc)?;
    let c_ell = rc.anchored(rings + 1) as f64 / (c.polygons - 1) as f64;
    let q = spec.q() as f64;
    Ok((c_ell, (q - 2.0) / (c_ell + q)))
}

/// Hyperbolic closed form of `C_l` in terms of `sigma`.
pub fn closed_form_c(spec: SchlafliSpec, rings: usize) -> Result<f64> {
    if rings < 2 {
        return Err(Error::domain("C_l needs at least two rings"));
    }
    let s = sigma(spec)?;
    let l = rings as f64;
    Ok(match spec.geometry() {
        GeometryClass::Euclidean => 2.0 / (l - 1.0),
        _ => {
            (s - 1.0) * (1.0 - s.powf(-2.0 * l))
                / (1.0 + s.powf(1.0 - 2.0 * l) - (s + 1.0) * s.powf(-l))
        }
    })
}

/// Flat-band fractions from exact counts: `(m - n) / m` for full-wave and
/// `(m - n + 1) / m` for half-wave coupling.
pub fn flat_fractions(spec: SchlafliSpec, rings: usize) -> Result<(f64, f64)> {
    let c = counts(spec, rings)?;
    let m = c.edges as f64;
    let excess = (c.edges - c.vertices) as f64;
    Ok((excess / m, (excess + 1.0) / m))
}

/// Average degree `2 m_l / n_l` of the finite layout.
pub fn avg_degree(spec: SchlafliSpec, rings: usize) -> Result<f64> {
    let c = counts(spec, rings)?;
    Ok(2.0 * c.edges as f64 / c.vertices as f64)
}

/// Large-layout limit `2 (sigma - 1 + q) / (sigma + 1)`.
pub fn avg_degree_limit(spec: SchlafliSpec) -> Result<f64> {
    let s = sigma(spec)?;
    Ok(2.0 * (s - 1.0 + spec.q() as f64) / (s + 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub ring: usize,
    pub f_ell: f64,
    pub f_inf: f64,
    pub ratio: f64,
}

/// `f_l / f` for `l = 1..=max_rings`.
pub fn convergence_table(spec: SchlafliSpec, max_rings: usize) -> Result<Vec<ConvergenceRow>> {
    if max_rings < 3 {
        return Err(Error::domain("convergence table needs at least three rings"));
    }
    let f_inf = f_infinity(spec)?;
    let rc = ring_counts(spec, max_rings)?;
    let mut rows = Vec::with_capacity(max_rings);
    let mut polygons = 1i128;
    let mut vertices = 0i128;
    for ring in 1..=max_rings {
        polygons += rc.anchored(ring);
        vertices += rc.ring_size(ring);
        let edges = vertices + polygons - 1;
        let f_ell = (edges - vertices) as f64 / edges as f64;
        rows.push(ConvergenceRow {
            ring,
            f_ell,
            f_inf,
            ratio: f_ell / f_inf,
        });
    }
    Ok(rows)
}

/// Everything the growth analysis knows about one `(spec, rings)` pair.
#[derive(Debug, Clone, Serialize)]
pub struct GrowthReport {
    pub p: u32,
    pub q: u32,
    pub tau: i64,
    pub geometry: GeometryClass,
    pub rings: usize,
    pub sigma: f64,
    /// `b_j` for `j = 1..=rings+1`.
    pub b_series: Vec<i128>,
    /// `B_j` for `j = 1..=rings+1`.
    #[serde(rename = "B_series")]
    pub big_b_series: Vec<i128>,
    pub t_ell: i128,
    pub n_ell: i128,
    pub m_ell: i128,
    /// Undefined for a single ring.
    pub c_ell: Option<f64>,
    pub c_limit: f64,
    pub f_ell: f64,
    pub f_ell_half_wave: f64,
    pub f_inf: f64,
    pub avg_degree: f64,
    pub avg_degree_limit: f64,
}

pub fn growth_report(spec: SchlafliSpec, rings: usize) -> Result<GrowthReport> {
    let rc = ring_counts(spec, rings)?;
    let c = counts_from(&rc)?;
    let s = sigma(spec)?;
    let (f_ell, f_ell_half_wave) = flat_fractions(spec, rings)?;
    Ok(GrowthReport {
        p: spec.p(),
        q: spec.q(),
        tau: spec.tau(),
        geometry: spec.geometry(),
        rings,
        sigma: s,
        b_series: rc.free_series().to_vec(),
        big_b_series: rc.anchored_series().to_vec(),
        t_ell: c.polygons,
        n_ell: c.vertices,
        m_ell: c.edges,
        c_ell: if rings >= 2 { Some(c_and_f(spec, rings)?.0) } else { None },
        c_limit: s - 1.0,
        f_ell,
        f_ell_half_wave,
        f_inf: f_infinity(spec)?,
        avg_degree: 2.0 * c.edges as f64 / c.vertices as f64,
        avg_degree_limit: avg_degree_limit(spec)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(p: u32, q: u32) -> SchlafliSpec {
        SchlafliSpec::new(p, q).unwrap()
    }

    #[test]
    fn sigma_values() {
        assert_eq!(sigma(spec(4, 4)).unwrap(), 1.0);
        assert!((sigma(spec(5, 4)).unwrap() - (2.0 + 3f64.sqrt())).abs() < 1e-12);
        assert!((sigma(spec(6, 4)).unwrap() - (3.0 + 2.0 * 2f64.sqrt())).abs() < 1e-12);
        assert!(sigma(spec(5, 3)).is_err());
    }

    #[test]
    fn asymptotic_fractions() {
        assert_eq!(f_infinity(spec(4, 4)).unwrap(), 0.5);
        assert!((f_infinity(spec(5, 4)).unwrap() - 0.2971).abs() < 5e-5);
        assert!((f_infinity(spec(6, 4)).unwrap() - 0.22654).abs() < 5e-6);
    }

    #[test]
    fn closed_form_b_matches_recurrence_values() {
        assert!((closed_form_b(spec(5, 4), 2).unwrap() - 10.0).abs() < 1e-9);
        assert!((closed_form_b(spec(6, 4), 2).unwrap() - 12.0).abs() < 1e-9);
        assert!((closed_form_b(spec(4, 4), 3).unwrap() - 16.0).abs() < 1e-12);
        assert!(closed_form_b(spec(4, 4), 0).is_err());
    }

    #[test]
    fn layout_counts() {
        let c = |p, q, l| {
            let c = counts(spec(p, q), l).unwrap();
            (c.polygons, c.vertices, c.edges)
        };
        assert_eq!(c(5, 4, 4), (201, 480, 680));
        assert_eq!(c(6, 4, 4), (505, 1728, 2232));
        assert_eq!(c(4, 4, 2), (9, 16, 24));
    }

    #[test]
    fn euclidean_c() {
        let (c3, _) = c_and_f(spec(4, 4), 3).unwrap();
        assert_eq!(c3, 1.0);
        assert!(c_and_f(spec(4, 4), 1).is_err());
        assert!(c_and_f(spec(6, 4), 1).is_err());
    }

    #[test]
    fn c_approaches_sigma_minus_one() {
        let limit = sigma(spec(5, 4)).unwrap() - 1.0;
        let (c6, _) = c_and_f(spec(5, 4), 6).unwrap();
        assert!((c6 - limit).abs() / limit < 0.01);
    }

    #[test]
    fn average_degree_limits() {
        assert_eq!(avg_degree_limit(spec(4, 4)).unwrap(), 4.0);
        let k = avg_degree_limit(spec(6, 4)).unwrap();
        assert!((k - 2.5858).abs() < 1e-3);
        assert!((1.0 - 2.0 / k - f_infinity(spec(6, 4)).unwrap()).abs() < 1e-12);
        assert!(avg_degree(spec(6, 4), 3).unwrap() < 4.0);
    }

    #[test]
    fn report_fields_agree() {
        let r = growth_report(spec(6, 4), 4).unwrap();
        assert_eq!(r.m_ell, 2232);
        assert_eq!(r.big_b_series.len(), 5);
        assert!((r.f_ell - (r.m_ell - r.n_ell) as f64 / r.m_ell as f64).abs() < 1e-15);
        assert!(r.f_ell < r.f_inf && r.f_inf < 1.0 && r.sigma >= 1.0);
        let json = serde_json::to_value(&r).unwrap();
        assert!(json.get("B_series").is_some());
        assert!(growth_report(spec(6, 4), 1).unwrap().c_ell.is_none());
    }

    #[test]
    fn convergence_needs_three_rings() {
        assert!(convergence_table(spec(5, 4), 2).is_err());
        let rows = convergence_table(spec(7, 3), 8).unwrap();
        assert!(rows.windows(2).all(|w| w[1].f_ell > w[0].f_ell));
        assert!(rows.iter().all(|r| r.ratio < 1.0));
    }
}
