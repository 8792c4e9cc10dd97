//! The sum-of-squares program `Δ² − εΔ = x*Qx`, `Q ⪰ 0`, maximizing `ε`.

mod admm;
mod polish;
mod problem;
mod sdpa;

pub use admm::{project_psd_centered, solve_internal, GramSolution, SolverParams, SolverStats};
pub use polish::{polish, PolishParams};
pub use problem::{assemble, Constraint, SdpProblem};
pub use sdpa::{
    export_problem, exported_index, import_solution, parse_sdpa, problem_to_sdpa, write_sdpa,
    SdpaData, IMPORT_TOLERANCE,
};
