//! Finite-index subgroups of the modular group and the real elliptic modular
//! surfaces built over their quotient curves.
//!
//! The pipeline runs from exact matrix arithmetic ([`psl2`]) through coset
//! actions ([`subgroup`]) and the explicit family [`gamma`] to Kodaira fibers
//! ([`fibers`]) and the numerical invariants of the surface ([`surface`]).
//! [`curve`] holds the j-function and the real classification of genus-one
//! curves.

mod enumerate;

pub mod curve;
pub mod error;
pub mod fibers;
pub mod gamma;
pub mod psl2;
pub mod report;
pub mod subgroup;
pub mod surface;
pub mod svg;

pub use error::{Error, Result};
pub use fibers::{FiberConfiguration, FiberKind, FiberType, LiftAssignment, RealFiberForm};
pub use gamma::GammaK;
pub use psl2::{ExtendedRational, GeneratorWord, HalfPlanePoint, ProjectiveClass, UnimodularMatrix};
pub use subgroup::{CosetRepresentation, CuspClass, SubgroupInvariants};
pub use surface::{HodgeInvariants, RealTopologyReport, SurfaceModel};

