//! A discontinuous Galerkin solver with one degree of freedom per element.
//!
//! The solver works on general polygonal meshes. Each element carries a single
//! unknown (the value at its barycenter); a constrained weighted least-squares
//! fit over a patch of neighbouring elements reconstructs a polynomial of
//! arbitrary degree `k` from those values. The reconstructed space is plugged
//! into a symmetric interior penalty bilinear form with upwind stabilization
//! for steady convection-diffusion-reaction problems.
//!
//! Crate layout:
//! - [`mesh`]: polygonal meshes (triangulations, Lloyd-relaxed and general
//!   Voronoi meshes), text I/O, sub-triangulation.
//! - [`quadrature`]: Gauss rules on segments and triangles, assembled into
//!   rules for polygonal elements.
//! - [`patch`]: element patches grown by face adjacency and pruned by
//!   barycenter distance, with inverse-distance weights.
//! - [`reconstruct`]: the local and global reconstruction operator, its basis
//!   functions and the unisolvence (singular value) check.
//! - [`forms`]: problem data, jumps/averages, upwind fluxes and the local
//!   bilinear/linear form kernels.
//! - [`assembly`]: global sparse system assembly, direct solve, solution
//!   evaluation.
//! - [`analysis`]: L2 / DG-energy / SUPG-type error norms and convergence
//!   rates.
//! - [`cli`]: benchmark problem definitions and the convergence/solve drivers
//!   used by the `prdg` binary.

pub mod analysis;
pub mod assembly;
pub mod cli;
pub mod forms;
pub mod geom;
pub mod mesh;
pub mod patch;
pub mod quadrature;
pub mod reconstruct;

/// Errors reported by the solver library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("geometry error: {0}")]
    Geometry(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("patch of element {element} is not unisolvent (sigma_min = {sigma_min:.3e}, sigma_max = {sigma_max:.3e})")]
    Unisolvence {
        element: usize,
        sigma_min: f64,
        sigma_max: f64,
    },
    #[error("solver error: {0}")]
    Solver(String),
    #[error("point ({0}, {1}) lies outside the mesh")]
    OutsideDomain(f64, f64),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
