use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use super::problem::SdpProblem;

/// Parameters of the internal operator-splitting solver.
#[derive(Debug, Clone, Serialize)]
pub struct SolverParams {
    pub tolerance: f64,
    pub max_iters: usize,
    /// Over-relaxation factor in `(0, 2)`.
    pub relaxation: f64,
    pub rho: f64,
    /// Weight of `ε` in the metric of the affine projection.
    pub eps_weight: f64,
    /// Iterations before the first penalty update; the gap doubles after
    /// each update so that only finitely many happen. 0 disables.
    pub adapt_every: usize,
    /// Memory of the Anderson extrapolation; 0 disables it.
    pub anderson: usize,
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams {
            tolerance: 1e-8,
            max_iters: 200_000,
            relaxation: 1.6,
            rho: 1.0,
            eps_weight: 1.0,
            adapt_every: 50,
            anderson: 10,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolverStats {
    pub iterations: usize,
    pub converged: bool,
    pub primal_residual: f64,
    pub dual_residual: f64,
    /// `max_g |Σ_{F_g} Q_ij + u_g ε − t_g|` at the returned point.
    pub constraint_residual: f64,
    pub min_eigenvalue: f64,
    pub final_rho: f64,
}

/// Numeric solution: `Q` symmetric PSD with `Q·1 = 0`, and `ε`.
#[derive(Debug, Clone)]
pub struct GramSolution {
    pub q: DMatrix<f64>,
    pub epsilon: f64,
    pub stats: SolverStats,
}

/// Projection onto `{Q ⪰ 0, Q·1 = 0}`: centre the symmetric part, then
/// clip negative eigenvalues.
pub fn project_psd_centered(x: &DMatrix<f64>) -> DMatrix<f64> {
    let n = x.nrows();
    let mut y = (x + x.transpose()) * 0.5;
    let means: Vec<f64> = (0..n).map(|i| y.row(i).sum() / n as f64).collect();
    let total = means.iter().sum::<f64>() / n as f64;
    for j in 0..n {
        for i in 0..n {
            y[(i, j)] += total - means[i] - means[j];
        }
    }
    let eig = SymmetricEigen::new(y);
    let keep: Vec<usize> = (0..n).filter(|&k| eig.eigenvalues[k] > 0.0).collect();
    if keep.is_empty() {
        return DMatrix::zeros(n, n);
    }
    let mut v = DMatrix::zeros(n, keep.len());
    for (c, &k) in keep.iter().enumerate() {
        let s = eig.eigenvalues[k].sqrt();
        for i in 0..n {
            v[(i, c)] = eig.eigenvectors[(i, k)] * s;
        }
    }
    &v * v.transpose()
}

fn min_eigenvalue(x: &DMatrix<f64>) -> f64 {
    SymmetricEigen::new(x.clone())
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

struct AffineProjector {
    inv_m: Vec<f64>,
    u: Vec<f64>,
    t: Vec<f64>,
    w: f64,
    /// `uᵀ D⁻¹ u`
    udu: f64,
}

impl AffineProjector {
    fn new(p: &SdpProblem, w: f64) -> Self {
        let inv_m: Vec<f64> = p
            .constraints
            .iter()
            .map(|c| 1.0 / c.pairs.len() as f64)
            .collect();
        let u: Vec<f64> = p.constraints.iter().map(|c| c.u as f64).collect();
        let t = p.constraints.iter().map(|c| c.t as f64).collect();
        let udu = u.iter().zip(&inv_m).map(|(a, b)| a * a * b).sum();
        AffineProjector {
            inv_m,
            u,
            t,
            w,
            udu,
        }
    }

    /// Nearest point to `(v, e0)` on the affine set, in the metric
    /// `‖Q‖_F² + w·ε²`. Solves `(diag(m) + uuᵀ/w) λ = r` by
    /// Sherman–Morrison. Overwrites `v` with `Q`; returns `ε`.
    fn project(&self, p: &SdpProblem, v: &mut DMatrix<f64>, e0: f64) -> f64 {
        let r: Vec<f64> = p
            .constraints
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let s: f64 = c
                    .pairs
                    .iter()
                    .map(|&(i, j)| v[(i as usize, j as usize)])
                    .sum();
                s + self.u[k] * e0 - self.t[k]
            })
            .collect();
        let dr: Vec<f64> = r.iter().zip(&self.inv_m).map(|(a, b)| a * b).collect();
        let udr: f64 = self.u.iter().zip(&dr).map(|(a, b)| a * b).sum();
        let coef = udr / (self.w + self.udu);
        let mut ul = 0.0;
        for (k, c) in p.constraints.iter().enumerate() {
            let lam = dr[k] - self.inv_m[k] * self.u[k] * coef;
            ul += self.u[k] * lam;
            for &(i, j) in &c.pairs {
                v[(i as usize, j as usize)] -= lam;
            }
        }
        e0 - ul / self.w
    }
}

fn row_major(q: &DMatrix<f64>) -> Vec<f64> {
    q.transpose().as_slice().to_vec()
}

/// One relaxed ADMM step on the state `(Z, W, ε)`.
struct Step {
    z: DMatrix<f64>,
    w: DMatrix<f64>,
    eps: f64,
    primal: f64,
    dual: f64,
}

fn admm_step(
    problem: &SdpProblem,
    proj: &AffineProjector,
    params: &SolverParams,
    rho: f64,
    z: &DMatrix<f64>,
    w: &DMatrix<f64>,
    eps: f64,
) -> Step {
    let alpha = params.relaxation;
    let mut q = z - w;
    let e0 = eps + 1.0 / (rho * params.eps_weight);
    let eps = proj.project(problem, &mut q, e0);
    let xh = &q * alpha + z * (1.0 - alpha);
    let z_new = project_psd_centered(&(&xh + w));
    let w_new = w + &xh - &z_new;
    Step {
        primal: (&q - &z_new).norm(),
        dual: rho * (&z_new - z).norm(),
        z: z_new,
        w: w_new,
        eps,
    }
}

fn pack(z: &DMatrix<f64>, w: &DMatrix<f64>, eps: f64) -> DVector<f64> {
    let n2 = z.len();
    let mut v = DVector::zeros(2 * n2 + 1);
    v.rows_mut(0, n2).copy_from_slice(z.as_slice());
    v.rows_mut(n2, n2).copy_from_slice(w.as_slice());
    v[2 * n2] = eps;
    v
}

fn unpack(v: &DVector<f64>, n: usize) -> (DMatrix<f64>, DMatrix<f64>, f64) {
    let n2 = n * n;
    (
        DMatrix::from_column_slice(n, n, &v.as_slice()[..n2]),
        DMatrix::from_column_slice(n, n, &v.as_slice()[n2..2 * n2]),
        v[2 * n2],
    )
}

/// Type-II Anderson extrapolation of the fixed-point map `x ↦ F(x)`.
struct Anderson {
    memory: usize,
    prev: Option<(DVector<f64>, DVector<f64>)>,
    dx: VecDeque<DVector<f64>>,
    dg: VecDeque<DVector<f64>>,
}

impl Anderson {
    fn new(memory: usize) -> Self {
        Anderson {
            memory,
            prev: None,
            dx: VecDeque::new(),
            dg: VecDeque::new(),
        }
    }

    fn reset(&mut self) {
        self.prev = None;
        self.dx.clear();
        self.dg.clear();
    }

    /// Records `x` and `f = F(x)`; returns the extrapolated point, if any.
    fn push(&mut self, x: &DVector<f64>, f: &DVector<f64>) -> Option<DVector<f64>> {
        let g = f - x;
        if let Some((px, pg)) = self.prev.take() {
            self.dx.push_back(x - px);
            self.dg.push_back(&g - pg);
            if self.dx.len() > self.memory {
                self.dx.pop_front();
                self.dg.pop_front();
            }
        }
        self.prev = Some((x.clone(), g.clone()));
        let m = self.dg.len();
        if m == 0 {
            return None;
        }
        let mut gram = DMatrix::zeros(m, m);
        let mut rhs = DVector::zeros(m);
        for a in 0..m {
            rhs[a] = self.dg[a].dot(&g);
            for b in 0..=a {
                let v = self.dg[a].dot(&self.dg[b]);
                gram[(a, b)] = v;
                gram[(b, a)] = v;
            }
        }
        let reg = 1e-10 * (1.0 + gram.diagonal().max());
        for a in 0..m {
            gram[(a, a)] += reg;
        }
        let gamma = gram.cholesky()?.solve(&rhs);
        if !gamma.iter().all(|v| v.is_finite()) {
            return None;
        }
        let mut out = f.clone();
        for a in 0..m {
            out -= (&self.dx[a] + &self.dg[a]) * gamma[a];
        }
        Some(out)
    }
}

/// ADMM on `maximize ε` over the affine constraint set intersected with
/// the cone `{Q ⪰ 0, Q·1 = 0}`, with safeguarded Anderson extrapolation.
/// Deterministic: starts from `Q = 0, ε = 0` and adapts the penalty on a
/// geometric schedule.
pub fn solve_internal(problem: &SdpProblem, params: &SolverParams) -> GramSolution {
    let n = problem.n;
    let proj = AffineProjector::new(problem, params.eps_weight);
    let mut rho = params.rho;
    let mut z = DMatrix::<f64>::zeros(n, n);
    let mut w = DMatrix::<f64>::zeros(n, n);
    let mut eps = 0.0f64;
    let mut stats = SolverStats {
        iterations: 0,
        converged: false,
        primal_residual: f64::INFINITY,
        dual_residual: f64::INFINITY,
        constraint_residual: f64::INFINITY,
        min_eigenvalue: 0.0,
        final_rho: rho,
    };
    let mut prev_eps = eps;
    let mut interval = params.adapt_every;
    let mut next_adapt = interval;
    let mut accel = Anderson::new(params.anderson);
    // plain iterate to fall back on when an extrapolated point is rejected
    let mut fallback: Option<(DVector<f64>, f64)> = None;
    for it in 1..=params.max_iters {
        let x = pack(&z, &w, eps);
        let mut step = admm_step(problem, &proj, params, rho, &z, &w, eps);
        let mut fx = pack(&step.z, &step.w, step.eps);
        let mut res = (&fx - &x).norm();
        if let Some((safe, safe_res)) = fallback.take() {
            if res > safe_res {
                let (sz, sw, se) = unpack(&safe, n);
                accel.reset();
                step = admm_step(problem, &proj, params, rho, &sz, &sw, se);
                fx = pack(&step.z, &step.w, step.eps);
                res = (&fx - &safe).norm();
                accel.push(&safe, &fx);
            } else if let Some(next) = accel.push(&x, &fx) {
                fallback = Some((fx.clone(), res));
                fx = next;
            }
        } else if params.anderson > 0 {
            if let Some(next) = accel.push(&x, &fx) {
                fallback = Some((fx.clone(), res));
                fx = next;
            }
        }
        let (rp, rd) = (step.primal, step.dual);
        let (nz, nw, ne) = unpack(&fx, n);
        z = nz;
        w = nw;
        eps = ne;
        stats.iterations = it;
        stats.primal_residual = rp;
        stats.dual_residual = rd;

        let scale = 1.0 + step.z.norm();
        let check = rp <= params.tolerance * scale
            && rd <= params.tolerance * scale
            && (step.eps - prev_eps).abs() <= params.tolerance * (1.0 + step.eps.abs());
        prev_eps = step.eps;
        if check {
            let (cres, _) = problem.constraint_residual(&row_major(&step.z), step.eps);
            if cres <= params.tolerance {
                z = step.z;
                eps = step.eps;
                stats.constraint_residual = cres;
                stats.converged = true;
                break;
            }
        }
        if params.adapt_every > 0 && it == next_adapt {
            interval *= 2;
            next_adapt += interval;
            let factor = if rp > 10.0 * rd {
                2.0
            } else if rd > 10.0 * rp {
                0.5
            } else {
                1.0
            };
            if factor != 1.0 {
                rho *= factor;
                w /= factor;
                accel.reset();
                fallback = None;
            }
        }
    }
    if !stats.converged {
        // the last point may be extrapolated; return a projected one
        let step = admm_step(problem, &proj, params, rho, &z, &w, eps);
        z = step.z;
        eps = step.eps;
    }
    let (cres, _) = problem.constraint_residual(&row_major(&z), eps);
    stats.constraint_residual = cres;
    stats.min_eigenvalue = min_eigenvalue(&z);
    stats.final_rho = rho;
    GramSolution {
        q: z,
        epsilon: eps,
        stats,
    }
}
