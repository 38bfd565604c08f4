//! Layout graphs of `{p,q}` tilings and the tight-binding spectra of their
//! line graphs.
//!
//! A resonator lattice places one resonator on every edge of a *layout*
//! graph; photons hop between resonators that meet at a common vertex. The
//! hopping lattice is therefore the line graph of the layout, with uniform
//! signs for full-wave modes and orientation-dependent signs (a signed line
//! graph) for half-wave modes.
//!
//! The crate is organised bottom-up:
//!
//! - [`graph`] and [`matrix`]: simple undirected graphs, their adjacency,
//!   degree and (signless) Laplacian matrices, and the `{p,q}` classifier.
//! - [`tiling`]: polygon-centred layouts grown ring by ring, the integer ring
//!   recurrences, and a small catalog of spherical instances.
//! - [`linegraph`]: line graphs, orientations, signed line graphs, switching.
//! - [`spectra`]: dense eigensolves, clustered spectra, and the line-graph /
//!   Laplacian spectral identities.
//! - [`flatband`]: eigenstates of the flat band at `-2`.
//! - [`growth`]: exact ring counts and the closed-form flat-band fractions.
//! - [`instances`]: exact reference spectra.
//! - [`io`]: JSON and CSV formats shared with the command-line tool.

pub mod error;
pub mod flatband;
pub mod graph;
pub mod growth;
pub mod instances;
pub mod io;
pub mod linegraph;
pub mod matrix;
pub mod spectra;
pub mod tiling;

pub use error::{Error, Result};
pub use graph::{classify_geometry, GeometryClass, Graph, SchlafliSpec};
pub use linegraph::{LineGraph, Orientation, SignedLineGraph};
pub use matrix::IntMatrix;
pub use spectra::SpectrumMultiset;
pub use tiling::{LayoutGraph, RingCounts, VertexType};
