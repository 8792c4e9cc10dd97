use nalgebra::DMatrix;

use super::admm::{project_psd_centered, GramSolution, SolverStats};
use super::problem::SdpProblem;

/// Settings of the feasibility phase run when the main solver stops early.
#[derive(Debug, Clone, serde::Serialize)]
pub struct PolishParams {
    /// Candidate back-offs `δ`; `ε` is fixed at `ε_numeric − δ·max(ε_numeric, 1)`.
    pub backoffs: Vec<f64>,
    /// Eigenvalue margin kept off the ones direction.
    pub margin: f64,
    pub tolerance: f64,
    pub max_iters: usize,
}

impl Default for PolishParams {
    fn default() -> Self {
        PolishParams {
            backoffs: vec![1e-5, 1e-4, 1e-3, 1e-2],
            margin: 1e-6,
            tolerance: 1e-11,
            max_iters: 20_000,
        }
    }
}

/// Subtracts the least-squares correction that makes `Σ_{F_g} V_ij =
/// t_g − u_g ε` hold for every constraint. Fibres are disjoint, so each
/// constraint is corrected independently.
fn project_fixed_eps(p: &SdpProblem, v: &mut DMatrix<f64>, eps: f64) {
    for c in &p.constraints {
        let s: f64 = c.pairs.iter().map(|&(i, j)| v[(i as usize, j as usize)]).sum();
        let lam = (s + c.u as f64 * eps - c.t as f64) / c.pairs.len() as f64;
        for &(i, j) in &c.pairs {
            v[(i as usize, j as usize)] -= lam;
        }
    }
}

/// `{Q : Q − μP ⪰ 0, Q·1 = 0}` with `P = I − J/n`.
fn project_with_margin(x: &DMatrix<f64>, mu: f64) -> DMatrix<f64> {
    let n = x.nrows();
    let p = DMatrix::from_fn(n, n, |i, j| (if i == j { 1.0 } else { 0.0 }) - 1.0 / n as f64);
    project_psd_centered(&(x - &p * mu)) + p * mu
}

/// Douglas–Rachford on the affine set with `ε` fixed and the shifted cone,
/// warm-started at `q0`. Returns the cone iterate once the constraint
/// residual is below tolerance.
fn feasible_point(
    problem: &SdpProblem,
    q0: &DMatrix<f64>,
    eps: f64,
    params: &PolishParams,
) -> Option<(DMatrix<f64>, usize, f64)> {
    let mut z = q0.clone();
    let mut w = DMatrix::<f64>::zeros(problem.n, problem.n);
    for it in 1..=params.max_iters {
        let mut q = &z - &w;
        project_fixed_eps(problem, &mut q, eps);
        z = project_with_margin(&(&q + &w), params.margin);
        w += &q - &z;
        if it % 10 == 0 {
            let rm: Vec<f64> = z.transpose().as_slice().to_vec();
            let (res, _) = problem.constraint_residual(&rm, eps);
            if res <= params.tolerance {
                return Some((z, it, res));
            }
            if !res.is_finite() {
                return None;
            }
        }
    }
    None
}

/// Backs `ε` off the numeric value and looks for a Gram matrix that meets
/// every constraint to `tolerance` with a positive margin. Tries each
/// back-off in turn; `None` if none succeeds.
pub fn polish(problem: &SdpProblem, solution: &GramSolution, params: &PolishParams) -> Option<GramSolution> {
    let eps0 = solution.epsilon;
    for &b in &params.backoffs {
        let eps = eps0 - b * eps0.abs().max(1.0);
        if let Some((q, iters, res)) = feasible_point(problem, &solution.q, eps, params) {
            let stats = SolverStats {
                iterations: solution.stats.iterations + iters,
                constraint_residual: res,
                ..solution.stats.clone()
            };
            return Some(GramSolution {
                q,
                epsilon: eps,
                stats,
            });
        }
    }
    None
}
