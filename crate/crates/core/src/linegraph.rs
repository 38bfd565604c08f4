//! Line graphs, edge orientations and signed line graphs.
//!
//! Line-graph vertex `i` is layout edge `i` in the layout's canonical edge
//! order. For the signed line graph, two layout edges meeting at a vertex
//! `x` are coupled with `+1` when `x` is the head of both or the foot of
//! both, and with `-1` when it is the head of one and the foot of the other.

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::matrix::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineGraph {
    pub graph: Graph,
    /// Layout edge behind each line-graph vertex.
    pub back_map: Vec<(usize, usize)>,
}

pub fn line_graph(g: &Graph) -> Result<LineGraph> {
    if g.edge_count() == 0 {
        return Err(Error::domain("the line graph of an edgeless graph is empty"));
    }
    let mut edges = Vec::new();
    for incident in g.incidence() {
        for (a, &i) in incident.iter().enumerate() {
            for &j in &incident[a + 1..] {
                edges.push((i, j));
            }
        }
    }
    Ok(LineGraph {
        graph: Graph::new(g.edge_count(), edges)?,
        back_map: g.edges().to_vec(),
    })
}

/// A head and a foot for every layout edge, stored as `(foot, head)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orientation {
    arcs: Vec<(usize, usize)>,
}

impl Orientation {
    /// Checks that `arcs[e]` is a reordering of the endpoints of edge `e`.
    pub fn new(g: &Graph, arcs: Vec<(usize, usize)>) -> Result<Self> {
        if arcs.len() != g.edge_count() {
            return Err(Error::domain(format!(
                "orientation covers {} edges, graph has {}",
                arcs.len(),
                g.edge_count()
            )));
        }
        for (e, (&(foot, head), &(u, v))) in arcs.iter().zip(g.edges()).enumerate() {
            if (foot.min(head), foot.max(head)) != (u, v) {
                return Err(Error::domain(format!(
                    "arc {e} = ({foot},{head}) does not match edge ({u},{v})"
                )));
            }
        }
        Ok(Orientation { arcs })
    }

    pub fn foot(&self, edge: usize) -> usize {
        self.arcs[edge].0
    }

    pub fn head(&self, edge: usize) -> usize {
        self.arcs[edge].1
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    fn reverse(&mut self, edge: usize) {
        let (foot, head) = self.arcs[edge];
        self.arcs[edge] = (head, foot);
    }
}

/// Foot at the smaller endpoint, head at the larger one.
pub fn default_orientation(g: &Graph) -> Orientation {
    Orientation {
        arcs: g.edges().to_vec(),
    }
}

pub fn random_orientation<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> Orientation {
    Orientation {
        arcs: g
            .edges()
            .iter()
            .map(|&(u, v)| if rng.random_bool(0.5) { (v, u) } else { (u, v) })
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedLineGraph {
    /// The unsigned line graph.
    pub base: Graph,
    /// Sign of each edge of `base`, indexed like `base.edges()`.
    signs: Vec<i8>,
    pub back_map: Vec<(usize, usize)>,
    orientation: Orientation,
}

pub fn signed_line_graph(g: &Graph, orientation: &Orientation) -> Result<SignedLineGraph> {
    let orientation = Orientation::new(g, orientation.arcs.clone())?;
    let lg = line_graph(g)?;
    let signs = lg
        .graph
        .edges()
        .iter()
        .map(|&(i, j)| coupling_sign(&lg.back_map, &orientation, i, j))
        .collect();
    Ok(SignedLineGraph {
        base: lg.graph,
        signs,
        back_map: lg.back_map,
        orientation,
    })
}

fn coupling_sign(back_map: &[(usize, usize)], o: &Orientation, i: usize, j: usize) -> i8 {
    let (a, b) = back_map[i];
    let shared = if a == back_map[j].0 || a == back_map[j].1 { a } else { b };
    let at_head = |e: usize| o.head(e) == shared;
    if at_head(i) == at_head(j) {
        1
    } else {
        -1
    }
}

impl SignedLineGraph {
    pub fn orientation(&self) -> &Orientation {
        &self.orientation
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// `(i, j, sign)` for every line-graph edge, in canonical edge order.
    pub fn signed_edges(&self) -> impl Iterator<Item = (usize, usize, i8)> + '_ {
        self.base
            .edges()
            .iter()
            .zip(&self.signs)
            .map(|(&(i, j), &s)| (i, j, s))
    }

    pub fn sign(&self, i: usize, j: usize) -> Option<i8> {
        self.base.edge_index(i, j).map(|e| self.signs[e])
    }

    /// Reverses the orientation of layout edge `edge`; equivalent to
    /// conjugating the signed adjacency by `diag(.., -1 at edge, ..)`.
    pub fn switch_edge(&self, edge: usize) -> Result<Self> {
        let mut out = self.clone();
        out.switch_in_place(edge)?;
        Ok(out)
    }

    pub fn switch_in_place(&mut self, edge: usize) -> Result<()> {
        if edge >= self.back_map.len() {
            return Err(Error::domain(format!(
                "layout edge {edge} does not exist ({} edges)",
                self.back_map.len()
            )));
        }
        self.orientation.reverse(edge);
        for &other in self.base.neighbors(edge) {
            let id = self
                .base
                .edge_index(edge, other)
                .expect("neighbour list and edge list agree");
            self.signs[id] = -self.signs[id];
        }
        Ok(())
    }

    pub fn adjacency_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.base.vertex_count());
        for (i, j, s) in self.signed_edges() {
            m.set(i, j, s as i32);
            m.set(j, i, s as i32);
        }
        m
    }
}
