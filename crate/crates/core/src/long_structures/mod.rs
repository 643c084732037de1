//! Long paths, cycles and minors in a component, each reported with a
//! machine-checkable certificate.

pub mod cycles;
pub mod diameter;
pub mod minors;

pub use cycles::{cycle_bound_from_expansion, longest_cycle_heuristic, CycleCertificate};
pub use diameter::{diameter, DiameterMethod, DiameterResult, ALL_PAIRS_CAP};
pub use minors::{greedy_minor, minor_bound_from_separator, MinorCertificate};
