//! Bond percolation laboratory for the `d`-dimensional hypercube.
//!
//! The crate samples random subgraphs `Q^d_p` in a bit-packed form, extracts
//! the component structure and measures the quantities that govern the
//! giant component: vertex and edge expansion, bottleneck ratios, spectral
//! gaps, lazy-walk mixing, diameter, long cycles and clique minors. Every
//! heuristic returns a certificate that is re-validated before it is handed
//! back, so a weak run can under-report but never over-report.
//!
//! Module map:
//!
//! * [`hypercube`] – vertices, edges, sampling and the two-round sprinkling coupling.
//! * [`components`] – component census and the giant-component measurements.
//! * [`analytic`] – closed-form bounds and fixed points.
//! * [`decomposition`] – spanning trees and the bounded-diameter tree decomposition.
//! * [`expansion`] – cut statistics, exact and spectral Cheeger bounds, path packings.
//! * [`walks`] – lazy random walk, exact and sampled mixing times.
//! * [`long_structures`] – diameter, long cycles, clique minors.

pub mod analytic;
pub mod components;
pub mod decomposition;
mod error;
pub mod expansion;
pub mod graph;
pub mod hypercube;
pub mod long_structures;
pub mod seed;
pub mod snapshot;
pub mod walks;

pub use error::{Error, Result};
pub use graph::{Graph, LocalGraph};
pub use hypercube::{EdgeId, GenerationParams, HypercubeSubgraph, VertexId};
