//! Analysis of 3D lattice walks confined to the octant via spherical geometry.
//!
//! The pipeline: a step set is parsed and validated ([`stepset`]), its
//! inventory polynomial is minimized over the open octant ([`critical`]),
//! the covariance of the tilted step distribution yields a spherical
//! triangle whose principal Dirichlet eigenvalue drives the excursion
//! asymptotics. The eigenvalue comes from closed forms where available
//! ([`spectra`]) or from a P1 finite element solver with sequence
//! extrapolation ([`fem`]). Exact-arithmetic probes of the walk group
//! ([`group`]) and exact excursion enumeration ([`enumerate`])
//! cross-validate the predictions.

pub mod critical;
pub mod enumerate;
pub mod fem;
pub mod group;
pub mod spectra;
pub mod stepset;

pub(crate) mod geom;
