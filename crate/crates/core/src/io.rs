//! File formats: graph JSON and the CSV tables written by the CLI.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flatband::{FlatSource, FlatState};
use crate::graph::{Graph, SchlafliSpec};
use crate::growth::ConvergenceRow;
use crate::linegraph::{LineGraph, Orientation, SignedLineGraph};
use crate::spectra::{Histogram, SpectrumMultiset};
use crate::tiling::{LayoutGraph, VertexType};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexJson {
    pub id: usize,
    pub ring: usize,
    #[serde(rename = "type")]
    pub kind: VertexType,
}

/// `{"p","q","rings","vertices":[{"id","ring","type"}],"edges":[[u,v]]}`,
/// plus the bounded faces when known.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphJson {
    pub p: u32,
    pub q: u32,
    pub rings: usize,
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub faces: Vec<Vec<usize>>,
}

impl GraphJson {
    pub fn from_layout(layout: &LayoutGraph) -> Self {
        GraphJson {
            p: layout.spec.p(),
            q: layout.spec.q(),
            rings: layout.rings,
            vertices: (0..layout.graph.vertex_count())
                .map(|id| VertexJson {
                    id,
                    ring: layout.ring_of[id],
                    kind: layout.type_of[id],
                })
                .collect(),
            edges: layout.graph.edges().iter().map(|&(u, v)| [u, v]).collect(),
            faces: layout.faces.clone(),
        }
    }

    /// Validates ids and edges and rebuilds the layout.
    pub fn into_layout(self) -> Result<LayoutGraph> {
        let n = self.vertices.len();
        let mut ring_of = vec![0; n];
        let mut type_of = vec![VertexType::Unassigned; n];
        let mut seen = vec![false; n];
        for v in &self.vertices {
            if v.id >= n || std::mem::replace(&mut seen[v.id], true) {
                return Err(Error::domain(format!(
                    "vertex id {} is duplicated or outside 0..{n}",
                    v.id
                )));
            }
            ring_of[v.id] = v.ring;
            type_of[v.id] = v.kind;
        }
        let graph = Graph::new(n, self.edges.iter().map(|e| (e[0], e[1])))?;
        if let Some(face) = self.faces.iter().flatten().find(|&&v| v >= n) {
            return Err(Error::domain(format!("face references unknown vertex {face}")));
        }
        Ok(LayoutGraph {
            graph,
            spec: SchlafliSpec::new(self.p, self.q)?,
            rings: self.rings,
            ring_of,
            type_of,
            faces: self.faces,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineGraphJson {
    #[serde(flatten)]
    pub graph: GraphJson,
    /// Layout edge behind each line-graph vertex.
    pub back_map: Vec<[usize; 2]>,
}

impl LineGraphJson {
    pub fn new(layout: &LayoutGraph, lg: &LineGraph) -> Self {
        LineGraphJson {
            graph: bare_graph_json(layout, &lg.graph),
            back_map: lg.back_map.iter().map(|&(u, v)| [u, v]).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignedLineGraphJson {
    #[serde(flatten)]
    pub graph: GraphJson,
    pub back_map: Vec<[usize; 2]>,
    pub signs: Vec<(usize, usize, i8)>,
    /// `[foot, head]` per layout edge.
    pub orientation: Vec<[usize; 2]>,
}

impl SignedLineGraphJson {
    pub fn new(layout: &LayoutGraph, slg: &SignedLineGraph) -> Self {
        SignedLineGraphJson {
            graph: bare_graph_json(layout, &slg.base),
            back_map: slg.back_map.iter().map(|&(u, v)| [u, v]).collect(),
            signs: slg.signed_edges().collect(),
            orientation: slg
                .orientation()
                .arcs()
                .iter()
                .map(|&(f, h)| [f, h])
                .collect(),
        }
    }

    /// The stored orientation, validated against `layout`.
    pub fn orientation_for(&self, layout: &Graph) -> Result<Orientation> {
        Orientation::new(layout, self.orientation.iter().map(|a| (a[0], a[1])).collect())
    }
}

fn bare_graph_json(layout: &LayoutGraph, g: &Graph) -> GraphJson {
    GraphJson {
        p: layout.spec.p(),
        q: layout.spec.q(),
        rings: layout.rings,
        vertices: (0..g.vertex_count())
            .map(|id| VertexJson {
                id,
                ring: 0,
                kind: VertexType::Unassigned,
            })
            .collect(),
        edges: g.edges().iter().map(|&(u, v)| [u, v]).collect(),
        faces: Vec::new(),
    }
}

/// `x` with `digits` significant digits, trailing zeros removed.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() { "0".into() } else { x.to_string() };
    }
    let sci = format!("{:.*e}", digits.saturating_sub(1), x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    let out = if (-5..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    };
    if out == "-0" {
        "0".into()
    } else {
        out
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub const CSV_DIGITS: usize = 12;

/// Values closer to zero than the clustering tolerance are written as `0`.
pub fn spectrum_csv(s: &SpectrumMultiset) -> String {
    let mut out = String::from("eigenvalue,multiplicity\n");
    for &(v, k) in s.entries() {
        let v = if v.abs() < s.cluster_tol() { 0.0 } else { v };
        let _ = writeln!(out, "{},{k}", format_significant(v, CSV_DIGITS));
    }
    out
}

/// Histogram rows followed by a `# flat_band_count=N` footer line.
pub fn histogram_csv(h: &Histogram) -> String {
    let mut out = String::from("bin_left,bin_right,count\n");
    for b in &h.bins {
        let _ = writeln!(
            out,
            "{},{},{}",
            format_significant(b.left, CSV_DIGITS),
            format_significant(b.right, CSV_DIGITS),
            b.count
        );
    }
    let _ = writeln!(out, "# flat_band_count={}", h.flat_band_count);
    out
}

pub fn convergence_csv(rows: &[ConvergenceRow]) -> String {
    let mut out = String::from("ring,f_ell,f_inf,ratio\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            r.ring,
            format_significant(r.f_ell, CSV_DIGITS),
            format_significant(r.f_inf, CSV_DIGITS),
            format_significant(r.ratio, CSV_DIGITS)
        );
    }
    out
}

/// One row per line-graph vertex, one column per state.
pub fn flat_states_csv(states: &[FlatState]) -> String {
    let mut out = String::from("vertex");
    for k in 0..states.len() {
        let _ = write!(out, ",state_{k}");
    }
    out.push('\n');
    let dim = states.first().map_or(0, |s| s.vector.len());
    for i in 0..dim {
        let _ = write!(out, "{i}");
        for s in states {
            let _ = write!(out, ",{}", format_significant(s.vector[i], CSV_DIGITS));
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct FlatStateProvenance {
    pub state: usize,
    pub source: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cycle: Option<Vec<usize>>,
}

/// Sidecar describing where each column of [`flat_states_csv`] came from.
pub fn flat_states_sidecar(states: &[FlatState]) -> Vec<FlatStateProvenance> {
    states
        .iter()
        .enumerate()
        .map(|(state, s)| match &s.source {
            FlatSource::NullSpace => FlatStateProvenance {
                state,
                source: "null_space",
                cycle: None,
            },
            FlatSource::EvenCycle(c) => FlatStateProvenance {
                state,
                source: "even_cycle",
                cycle: Some(c.clone()),
            },
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linegraph::{default_orientation, line_graph, signed_line_graph};
    use crate::tiling::{catalog_instance, generate_layout};

    #[test]
    fn significant_digits() {
        assert_eq!(format_significant(-2.0, 12), "-2");
        assert_eq!(format_significant(5f64.sqrt(), 12), "2.2360679775");
        assert_eq!(format_significant(1.0 - 5f64.sqrt(), 12), "-1.2360679775");
        assert_eq!(format_significant(1234.5678, 12), "1234.5678");
        assert_eq!(format_significant(1.5e-9, 12), "1.5e-9");
        assert_eq!(format_significant(-0.0, 12), "0");
        assert_eq!(format_significant(-1e-20, 3), "-1e-20");
    }

    #[test]
    fn layout_json_roundtrip() {
        let layout = generate_layout(SchlafliSpec::new(6, 4).unwrap(), 2).unwrap();
        let text = serde_json::to_string(&GraphJson::from_layout(&layout)).unwrap();
        let back: GraphJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.into_layout().unwrap(), layout);
    }

    #[test]
    fn catalog_json_shape() {
        let d = catalog_instance("dodecahedron").unwrap();
        let v = serde_json::to_value(GraphJson::from_layout(&d)).unwrap();
        assert_eq!(v["rings"], 0);
        assert_eq!(v["vertices"][0]["type"], "-");
        assert_eq!(v["edges"].as_array().unwrap().len(), 30);
    }

    #[test]
    fn dangling_edge_rejected() {
        let text = r#"{"p":4,"q":4,"rings":1,"vertices":[{"id":0,"ring":1,"type":"b"},{"id":1,"ring":1,"type":"b"}],"edges":[[0,5]]}"#;
        let parsed: GraphJson = serde_json::from_str(text).unwrap();
        assert!(matches!(parsed.into_layout(), Err(Error::Domain(_))));
        let dup = r#"{"p":4,"q":4,"rings":1,"vertices":[{"id":0,"ring":1,"type":"b"},{"id":0,"ring":1,"type":"b"}],"edges":[]}"#;
        let parsed: GraphJson = serde_json::from_str(dup).unwrap();
        assert!(parsed.into_layout().is_err());
    }

    #[test]
    fn signed_json_carries_orientation() {
        let d = catalog_instance("dodecahedron").unwrap();
        let o = default_orientation(&d.graph);
        let slg = signed_line_graph(&d.graph, &o).unwrap();
        let j = SignedLineGraphJson::new(&d, &slg);
        assert_eq!(j.signs.len(), 60);
        assert_eq!(j.orientation_for(&d.graph).unwrap(), o);
        let text = serde_json::to_string(&j).unwrap();
        assert!(text.contains("\"signs\""));
        let back: SignedLineGraphJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back, j);
        let lj = LineGraphJson::new(&d, &line_graph(&d.graph).unwrap());
        assert_eq!(lj.back_map.len(), 30);
    }
}
