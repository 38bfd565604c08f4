//! Polygon-centred `{p,q}` layouts grown by concentric rings.
//!
//! Ring 1 is the central `p`-gon. Each later ring is the outer boundary of the
//! polygons attached to the previous one. A ring vertex is of type `b` when it
//! has no neighbour in the previous ring and of type `B` when it has exactly
//! one. Counting edges that leave ring `j` gives
//!
//! ```text
//! B_{j+1} = (q-2) b_j + (q-3) B_j
//! b_{j+1} = ((q-2)(p-3) - 1) b_j + ((q-3)(p-3) - 1) B_j
//! ```
//!
//! with `b_1 = p`, `B_1 = 0`. [`generate_layout`] builds the graph itself and
//! reproduces these counts exactly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{GeometryClass, Graph, SchlafliSpec};

/// Largest layout [`generate_layout`] will materialise.
pub const MAX_LAYOUT_VERTICES: i128 = 5_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VertexType {
    /// No neighbour in the previous ring.
    #[serde(rename = "b")]
    Free,
    /// Exactly one neighbour in the previous ring.
    #[serde(rename = "B")]
    Anchored,
    /// Catalog instances carry no ring structure.
    #[serde(rename = "-")]
    Unassigned,
}

/// Exact per-ring vertex counts `(b_j, B_j)` for `j = 1..=rings+1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RingCounts {
    pub spec: SchlafliSpec,
    pub rings: usize,
    free: Vec<i128>,
    anchored: Vec<i128>,
}

impl RingCounts {
    /// `b_j` (1-based ring index, up to `rings + 1`).
    pub fn free(&self, ring: usize) -> i128 {
        self.free[ring - 1]
    }

    /// `B_j` (1-based ring index, up to `rings + 1`).
    pub fn anchored(&self, ring: usize) -> i128 {
        self.anchored[ring - 1]
    }

    pub fn ring_size(&self, ring: usize) -> i128 {
        self.free(ring) + self.anchored(ring)
    }

    pub fn free_series(&self) -> &[i128] {
        &self.free
    }

    pub fn anchored_series(&self) -> &[i128] {
        &self.anchored
    }

    /// Vertices in rings `1..=rings`.
    pub fn total_vertices(&self) -> i128 {
        (1..=self.rings).map(|j| self.ring_size(j)).sum()
    }
}

fn check_growable(spec: SchlafliSpec, rings: usize) -> Result<()> {
    if spec.p() == 3 {
        return Err(Error::Unsupported(format!(
            "{spec}: triangular tilings (p = 3) cannot be grown ring by ring"
        )));
    }
    if spec.geometry() == GeometryClass::Spherical {
        return Err(Error::Unsupported(format!(
            "{spec} is spherical (tau = {}); finite spherical tilings are only available from the catalog",
            spec.tau()
        )));
    }
    if rings == 0 {
        return Err(Error::domain("a layout needs at least one ring"));
    }
    Ok(())
}

pub fn ring_counts(spec: SchlafliSpec, rings: usize) -> Result<RingCounts> {
    check_growable(spec, rings)?;
    let p = spec.p() as i128;
    let q = spec.q() as i128;
    let m11 = (q - 2) * (p - 3) - 1;
    let m12 = (q - 3) * (p - 3) - 1;
    let overflow = || Error::Resource(format!("{spec}: ring counts overflow 128 bits"));

    let mut free = vec![p];
    let mut anchored = vec![0i128];
    for j in 0..rings {
        let (b, big) = (free[j], anchored[j]);
        let next_free = m11
            .checked_mul(b)
            .and_then(|x| m12.checked_mul(big).and_then(|y| x.checked_add(y)))
            .ok_or_else(overflow)?;
        let next_anchored = (q - 2)
            .checked_mul(b)
            .and_then(|x| (q - 3).checked_mul(big).and_then(|y| x.checked_add(y)))
            .ok_or_else(overflow)?;
        free.push(next_free);
        anchored.push(next_anchored);
    }
    Ok(RingCounts {
        spec,
        rings,
        free,
        anchored,
    })
}

/// A layout graph with its ring bookkeeping and polygonal faces.
#[derive(Debug, Clone, PartialEq)]
pub struct LayoutGraph {
    pub graph: Graph,
    pub spec: SchlafliSpec,
    /// Number of rings; 0 for catalog instances.
    pub rings: usize,
    /// 1-based ring index per vertex; 0 for catalog instances.
    pub ring_of: Vec<usize>,
    pub type_of: Vec<VertexType>,
    /// Bounded faces, each listed as a closed vertex walk.
    pub faces: Vec<Vec<usize>>,
}

impl LayoutGraph {
    /// Observed `(b_j, B_j)` per ring, read off the constructed graph.
    pub fn observed_ring_counts(&self) -> Vec<(usize, usize)> {
        let mut counts = vec![(0, 0); self.rings];
        for (v, &ring) in self.ring_of.iter().enumerate() {
            if ring == 0 {
                continue;
            }
            let prev = self
                .graph
                .neighbors(v)
                .iter()
                .filter(|&&w| self.ring_of[w] + 1 == ring)
                .count();
            if prev == 0 {
                counts[ring - 1].0 += 1;
            } else {
                counts[ring - 1].1 += 1;
            }
        }
        counts
    }

    /// Structural checks: ring annotations, interior degrees, faces, Euler.
    pub fn check_invariants(&self) -> Result<()> {
        let g = &self.graph;
        let fail = |msg: String| Err(Error::Verification(msg));
        if !g.is_connected() {
            return fail("layout is disconnected".into());
        }
        let p = self.spec.p() as usize;
        if let Some(face) = self.faces.iter().find(|f| f.len() != p) {
            return fail(format!("face {face:?} is not a {p}-gon"));
        }
        for face in &self.faces {
            for i in 0..face.len() {
                if !g.has_edge(face[i], face[(i + 1) % face.len()]) {
                    return fail(format!("face {face:?} is not a closed walk"));
                }
            }
        }
        let euler = g.vertex_count() as i64 - g.edge_count() as i64 + self.faces.len() as i64;
        let expected_euler = if self.rings == 0 { 2 } else { 1 };
        if euler != expected_euler {
            return fail(format!("Euler characteristic {euler}, expected {expected_euler}"));
        }
        if self.rings == 0 {
            return Ok(());
        }
        let q = self.spec.q() as usize;
        for v in 0..g.vertex_count() {
            let ring = self.ring_of[v];
            let back = g
                .neighbors(v)
                .iter()
                .filter(|&&w| self.ring_of[w] + 1 == ring)
                .count();
            if g.neighbors(v).iter().any(|&w| self.ring_of[w].abs_diff(ring) > 1) {
                return fail(format!("vertex {v} skips a ring"));
            }
            let consistent = match self.type_of[v] {
                VertexType::Free => back == 0,
                VertexType::Anchored => back == 1,
                VertexType::Unassigned => false,
            };
            if !consistent {
                return fail(format!(
                    "vertex {v} typed {:?} has {back} neighbours in ring {}",
                    self.type_of[v],
                    ring.saturating_sub(1)
                ));
            }
            if ring < self.rings && g.degree(v) != q {
                return fail(format!("interior vertex {v} has degree {}", g.degree(v)));
            }
            if g.degree(v) > q {
                return fail(format!("vertex {v} has degree {} > q", g.degree(v)));
            }
        }
        Ok(())
    }
}

/// Grows a polygon-centred layout with `rings` concentric rings.
///
/// Vertices are numbered ring by ring, anticlockwise within a ring, starting
/// from the central polygon. Ring `j + 1` is built by sweeping ring `j` once:
/// every ring-`j` vertex emits its missing edges (spokes) outward, each spoke
/// ends at a new `B` vertex, and consecutive spokes are closed into a `p`-gon
/// with `p - 3 - d` new `b` vertices, where `d` is the number of ring-`j`
/// edges between the two spoke roots.
pub fn generate_layout(spec: SchlafliSpec, rings: usize) -> Result<LayoutGraph> {
    let counts = ring_counts(spec, rings)?;
    if counts.total_vertices() > MAX_LAYOUT_VERTICES {
        return Err(Error::Resource(format!(
            "{spec} with {rings} rings has {} vertices (cap {MAX_LAYOUT_VERTICES})",
            counts.total_vertices()
        )));
    }

    let p = spec.p() as usize;
    let q = spec.q() as usize;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut ring_of: Vec<usize> = Vec::new();
    let mut type_of: Vec<VertexType> = Vec::new();
    let mut faces: Vec<Vec<usize>> = vec![(0..p).collect()];

    let mut frontier: Vec<usize> = (0..p).collect();
    ring_of.extend(std::iter::repeat_n(1, p));
    type_of.extend(std::iter::repeat_n(VertexType::Free, p));
    edges.extend((0..p).map(|i| (i, (i + 1) % p)));

    for ring in 1..rings {
        let len = frontier.len();
        // Position in the frontier of the root of each spoke, in sweep order.
        let roots: Vec<usize> = frontier
            .iter()
            .enumerate()
            .flat_map(|(pos, &v)| {
                let missing = match type_of[v] {
                    VertexType::Anchored => q - 3,
                    _ => q - 2,
                };
                std::iter::repeat_n(pos, missing)
            })
            .collect();
        if roots.is_empty() {
            return Err(Error::Internal(format!("{spec}: ring {ring} emits no spokes")));
        }

        let spokes = roots.len();
        let gaps: Vec<usize> = (0..spokes)
            .map(|s| (roots[(s + 1) % spokes] + len - roots[s]) % len)
            .collect();

        // Allocate ring `ring + 1` in sweep order so ids run anticlockwise.
        let mut next: Vec<usize> = Vec::new();
        let mut anchors = Vec::with_capacity(spokes);
        let mut runs = Vec::with_capacity(spokes);
        for (s, &gap) in gaps.iter().enumerate() {
            let fresh = p as isize - 3 - gap as isize;
            if fresh < 0 {
                return Err(Error::Internal(format!(
                    "{spec}: polygon after spoke {s} of ring {} would need {fresh} new vertices",
                    ring + 1
                )));
            }
            let anchor = push_vertex(&mut ring_of, &mut type_of, ring + 1, VertexType::Anchored);
            anchors.push(anchor);
            next.push(anchor);
            let run: Vec<usize> = (0..fresh)
                .map(|_| push_vertex(&mut ring_of, &mut type_of, ring + 1, VertexType::Free))
                .collect();
            next.extend(&run);
            runs.push(run);
        }

        for s in 0..spokes {
            let t = (s + 1) % spokes;
            let root = frontier[roots[s]];
            edges.push((root, anchors[s]));

            let mut face = vec![root, anchors[s]];
            face.extend(&runs[s]);
            face.push(anchors[t]);
            // back along the previous ring from the next root to this one
            let mut pos = roots[t];
            while frontier[pos] != root {
                face.push(frontier[pos]);
                pos = (pos + len - 1) % len;
            }
            faces.push(face);
        }

        let size = next.len();
        edges.extend((0..size).map(|i| (next[i], next[(i + 1) % size])));
        frontier = next;
    }

    let graph = Graph::new(ring_of.len(), edges)?;
    let layout = LayoutGraph {
        graph,
        spec,
        rings,
        ring_of,
        type_of,
        faces,
    };
    let observed = layout.observed_ring_counts();
    for (j, &(b, big)) in observed.iter().enumerate() {
        if b as i128 != counts.free(j + 1) || big as i128 != counts.anchored(j + 1) {
            return Err(Error::Internal(format!(
                "{spec}: ring {} has (b, B) = ({b}, {big}), recurrence gives ({}, {})",
                j + 1,
                counts.free(j + 1),
                counts.anchored(j + 1)
            )));
        }
    }
    Ok(layout)
}

fn push_vertex(
    ring_of: &mut Vec<usize>,
    type_of: &mut Vec<VertexType>,
    ring: usize,
    kind: VertexType,
) -> usize {
    ring_of.push(ring);
    type_of.push(kind);
    ring_of.len() - 1
}

/// Names accepted by [`catalog_instance`].
pub const CATALOG: &[&str] = &["tetrahedron", "cube", "dodecahedron"];

/// Finite spherical layouts. The returned faces cover the whole sphere.
pub fn catalog_instance(name: &str) -> Result<LayoutGraph> {
    let (spec, n, edges, faces) = match name {
        "tetrahedron" => {
            let edges: Vec<_> = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).collect();
            let faces = vec![vec![0, 1, 2], vec![0, 3, 1], vec![1, 3, 2], vec![0, 2, 3]];
            (SchlafliSpec::new(3, 3)?, 4, edges, faces)
        }
        "cube" => {
            let (edges, faces) = generalized_petersen(4, 1);
            (SchlafliSpec::new(4, 3)?, 8, edges, faces)
        }
        "dodecahedron" => {
            let (edges, faces) = generalized_petersen(10, 2);
            (SchlafliSpec::new(5, 3)?, 20, edges, faces)
        }
        other => {
            return Err(Error::Lookup {
                kind: "catalog instance",
                name: other.to_string(),
            })
        }
    };
    let graph = Graph::new(n, edges)?;
    Ok(LayoutGraph {
        graph,
        spec,
        rings: 0,
        ring_of: vec![0; n],
        type_of: vec![VertexType::Unassigned; n],
        faces,
    })
}

/// `GP(k, s)` for the two prism-like Platonic cases: outer cycle `0..k`,
/// spokes `i -- k+i`, inner star polygon `k+i -- k+(i+s)`.
fn generalized_petersen(k: usize, s: usize) -> (Vec<(usize, usize)>, Vec<Vec<usize>>) {
    let outer = |i: usize| i % k;
    let inner = |i: usize| k + i % k;
    let mut edges = Vec::new();
    for i in 0..k {
        edges.push((outer(i), outer(i + 1)));
        edges.push((outer(i), inner(i)));
        edges.push((inner(i), inner(i + s)));
    }
    let mut faces = Vec::new();
    match s {
        1 => {
            for i in 0..k {
                faces.push(vec![outer(i), outer(i + 1), inner(i + 1), inner(i)]);
            }
            faces.push((0..k).map(outer).collect());
            faces.push((0..k).rev().map(inner).collect());
        }
        2 => {
            for i in 0..k {
                faces.push(vec![outer(i), outer(i + 1), outer(i + 2), inner(i + 2), inner(i)]);
            }
            faces.push((0..k).step_by(2).map(inner).collect());
            faces.push((1..k).step_by(2).map(inner).collect());
        }
        _ => unreachable!("only GP(k,1) and GP(10,2) are catalogued"),
    }
    (edges, faces)
}
