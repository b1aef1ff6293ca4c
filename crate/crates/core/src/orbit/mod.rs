//! Orbits of vectors and isotropic planes under reflection and wall groups.

pub mod bfs;
pub mod escape;

pub use bfs::{orbit_bfs, transitivity_probe, OrbitProbe, TransitivityReport};
pub use escape::{escape, escape_even, escape_generic, escape_odd, EscapeStep, EscapeTrace, Growth, StepKind};
pub mod family;
pub mod planes;
pub mod coset;

pub use coset::{coset_certificate, CosetCertificate};
pub use family::{characteristic_family, characteristic_family_i64, CharacteristicFamily, LeadingBlock};
pub use planes::{enumerate_isotropic_planes, family_parameters, plane_family_2u, plane_family_range, plane_orbit, IsotropicPlane, PlaneOrbitEntry};
