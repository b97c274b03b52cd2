//! Plane-strain nonlinear finite elements.
//!
//! Structured Q4 meshes, F-bar elements, displacement-driven load stepping
//! and Newton-Raphson equilibrium iteration with a banded direct solver.

pub mod band;
pub mod element;
pub mod mesh;
pub mod solver;
pub mod vtk;

pub use element::{
    element_force_and_fd_stiffness, element_force_and_stiffness, fbar_modify, ElementGeometry,
    ElementOutput, GaussResult, RateTangent,
};
pub use mesh::{mesh_rect, Mesh};
pub use solver::{
    newton_solve_step, run_load_program, BcValue, Constraint, DofMap, FemModel, LoadProgram,
    NewtonSettings, SolveReport, SolverState, StepReport, StepSnapshot, Traction,
};
pub use vtk::render_vtk;
