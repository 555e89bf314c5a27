//! Fundamental-groupoid machinery for punctured planes.
//!
//! * [`groupoid`]: finite groupoids as explicit partial composition tables,
//!   with exhaustive axiom checks.
//! * [`planar`]: polyline paths, angle lifts, winding numbers and homotopy
//!   classes in a plane with punctures.
//! * [`representation`]: one-dimensional groupoid representations built
//!   from a mesh, mesh weights and a flux per puncture, including the
//!   rotation-symmetric spiral mesh.
//! * [`propagator`]: exhaustive lattice-walk path integrals split into
//!   winding sectors, and their Aharonov–Bohm flux dependence.

pub mod config;
pub mod error;
pub mod groupoid;
pub mod planar;
pub mod propagator;
pub mod representation;

pub use error::{Error, Result};
pub use groupoid::{AxiomReport, FiniteGroupoid, WeakGroupoid};
pub use planar::{HomotopyClass, Point, Polyline, PuncturedPlane};
pub use propagator::{LatticeSpec, SectorAmplitudes, Site, TotalPropagator};
pub use representation::{GroupRepZ, GroupoidRep, Mesh, MeshWeights, PolarFrame};
