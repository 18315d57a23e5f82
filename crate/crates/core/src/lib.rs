//! Construction and auditing of (d,1)-total labelings.
//!
//! * [`graph`] / [`generate`] / [`io`]: simple graphs, plane embeddings,
//!   generators and file formats.
//! * [`labeling`]: the constraint system and availability sets of partial
//!   labelings.
//! * [`exact`]: exact labeling numbers of small graphs.
//! * [`reduction`]: the reducible-configuration labeler for plane graphs
//!   with maximum degree at most `M`, `M ≥ 12`, using colors `0..=M+2`.
//! * [`discharging`]: charges, discharging rules and structural scans.

pub mod discharging;
pub mod exact;
pub mod generate;
pub mod graph;
pub mod io;
pub mod labeling;
pub mod reduction;
pub mod small_graphs;

pub use graph::{Edge, Face, Graph, GraphError, PlaneGraph};
pub use labeling::{Color, ColorInterval, ColorSet, Element, PartialLabeling, Violation};
