//! Direct Arbitrary-Lagrangian-Eulerian ADER discontinuous Galerkin solver
//! for 3D hyperbolic conservation laws (compressible Euler) on moving
//! polyhedral meshes whose topology changes through elementary tetrahedral
//! flips. The space-time gaps opened by a flip are filled with degenerate
//! 4D "hole" elements that are solved with a locally implicit space-time
//! DG system, keeping the overall scheme explicit and exactly conservative.
//!
//! The crate is organized along the pipeline of one timestep:
//!
//! * [`mesh`] — tetrahedralization, its centroid-based polyhedral dual,
//!   built-in mesh builders and a plain-text import/export format;
//! * [`motion`] — generator trajectories, smoothing, and the incremental
//!   edge-removal flip optimizer;
//! * [`spacetime`] — 4D space-time control volumes, hole elements, lateral
//!   prism surfaces and their normals/measures;
//! * [`basis`] / [`quadrature`] — modal polynomial machinery and Gaussian
//!   rules on the reference elements;
//! * [`euler`] — flux, equation of state, and the Rusanov-type ALE flux;
//! * [`solver`] — Picard predictor, locally implicit hole solve, corrector,
//!   and the orchestrated timestep.

pub mod basis;
pub mod euler;
pub mod geometry;
pub mod mesh;
pub mod motion;
pub mod quadrature;
pub mod solver;
pub mod spacetime;

use thiserror::Error;

/// Errors surfaced by mesh construction, geometry building and the solver.
#[derive(Debug, Error)]
pub enum Error {
    #[error("edge ({0}, {1}) not present in the tetrahedralization")]
    EdgeNotFound(usize, usize),
    #[error("mesh topology corrupt: {0}")]
    TopologyCorrupt(String),
    #[error("space-time construction failed: {0}")]
    SpaceTimeConstruction(String),
    #[error("geometry degenerate: {0}")]
    DegenerateGeometry(String),
    #[error("invalid state in cell {cell}: {reason}")]
    InvalidState { cell: usize, reason: String },
    #[error("predictor failed to converge in cell {0}")]
    PredictorDiverged(usize),
    #[error("hole solve failed to converge (hole {0})")]
    HoleNewtonFailed(usize),
    #[error("singular mass matrix in cell {0}")]
    SingularMass(usize),
    #[error("non-finite signal speed encountered")]
    NonFiniteSignal,
    #[error("mesh i/o: {0}")]
    MeshIo(String),
    #[error("unsupported polynomial degree {0} (supported: 0..=3)")]
    UnsupportedDegree(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
