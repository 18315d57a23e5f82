//! The reducible-configuration labeler: find a configuration, shrink the
//! graph, label the rest and extend back.

pub mod config;
pub mod extend;
pub mod labeler;
pub mod list_coloring;

pub use config::{find_configuration, find_k_alternator, Alternator, ConfigKind, IrreducibleError, ReducibleConfig};
pub use extend::{extend, BoundCheck, ExtendError, TraceStep};
pub use labeler::{label_graph, label_planar, label_planar_with, reduced_graph, LabelError, LabelOptions, LabelRun, ReductionStep};
pub use list_coloring::{list_edge_color_bipartite, ListColoringError};
