//! CLI support: the built-in atlas, random plats and verification reports.

pub mod atlas;
pub mod random;
pub mod sweep;
pub mod verify;

pub use atlas::{atlas, lookup, AtlasEntry};
pub use random::{random_plat, random_plats};
pub use sweep::{sweep_verify, SweepBounds, SweepReport};
pub use verify::{verify_diagram, DiagramReport, VerifyOptions};
