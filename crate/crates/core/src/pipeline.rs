//! End-to-end runs: group → ball → SDP → solve → certify → report.

use std::path::{Path, PathBuf};
use std::time::Instant;

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::backend::{GroupBackend, IdentificationStats};
use crate::ball::{enumerate_ball, PairingTable};
use crate::catalog::{AnyGroup, BuildOptions, BuiltGroup, Preset, Quantity, ReferenceValue};
use crate::certify::{certify, to_f64, Certificate, Certified, CertifyContext};
use crate::elements::ElementTable;
use crate::error::{Error, Result};
use crate::ring::laplacian;
use crate::rewrite::RewriteBudget;
use crate::sdp::{
    assemble, export_problem, import_solution, polish, solve_internal, PolishParams, SdpProblem,
    SolverParams, SolverStats,
};
use crate::with_group;

/// Where the numeric solution comes from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverChoice {
    Internal,
    /// Write the problem in SDPA format and stop, unless a solution file is
    /// supplied.
    Export,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub group: String,
    pub radius: Option<usize>,
    pub solver: SolverChoice,
    pub params: SolverParams,
    /// Feasibility phase used when the solver stops early or the direct
    /// certificate is not positive; `None` disables it.
    pub polish: Option<PolishParams>,
    pub bits: u32,
    pub max_rules: usize,
    pub max_rule_len: usize,
    /// Closure radius for incomplete rewriting; `None` means `2d + 2`.
    pub closure_radius: Option<usize>,
    #[serde(skip)]
    pub out_dir: Option<PathBuf>,
    /// Primal solution of an exported problem, to certify instead of solving.
    #[serde(skip)]
    pub solution: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(group: &str) -> Self {
        let b = RewriteBudget::default();
        RunConfig {
            group: group.into(),
            radius: None,
            solver: SolverChoice::Internal,
            params: SolverParams::default(),
            polish: Some(PolishParams::default()),
            bits: 32,
            max_rules: b.max_rules,
            max_rule_len: b.max_rule_len,
            closure_radius: None,
            out_dir: None,
            solution: None,
        }
    }
}

/// Outcome category; decides the exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunStatus {
    Certified,
    NotConverged,
    Nonpositive,
    CertificationFailed,
    Exported,
}

impl RunStatus {
    /// `0` certified positive (converged or not), `2` no positive bound
    /// and the solver did not converge (or nothing was solved), `3`
    /// certification failed or gave `ε ≤ 0` after convergence.
    pub fn exit_code(self) -> i32 {
        match self {
            RunStatus::Certified => 0,
            RunStatus::NotConverged | RunStatus::Exported => 2,
            RunStatus::Nonpositive | RunStatus::CertificationFailed => 3,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    #[serde(flatten)]
    pub reference: ReferenceValue,
    /// Run value minus reference value, on the matching quantity.
    pub delta_numeric: Option<f64>,
    pub delta_certified: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub group: String,
    pub backend: String,
    pub s_size: usize,
    pub radius: usize,
    pub ball_size: usize,
    pub ball2_size: usize,
    pub constraints: usize,
    pub complete_identification: bool,
    pub identification: Option<IdentificationStats>,
    pub solver: Option<SolverStats>,
    pub eps_numeric: Option<f64>,
    pub kappa_numeric: Option<f64>,
    /// `ε` fixed by the feasibility phase, when its certificate was used.
    pub eps_polished: Option<f64>,
    pub eps_certified: Option<f64>,
    /// Exact certified `ε` as `p/q`.
    pub eps_certified_exact: Option<String>,
    /// `√(2ε_certified/|S|)` floored at ten decimals.
    pub kappa_certified: Option<String>,
    pub c_l1: Option<f64>,
    pub tau: Option<String>,
    pub d_exponent: Option<u32>,
    pub status: RunStatus,
    pub message: Option<String>,
    pub references: Vec<Comparison>,
    pub wall_time_secs: f64,
    pub config: RunConfig,
    pub certificate_path: Option<String>,
    pub sdpa_path: Option<String>,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    pub const CSV_HEADER: &'static str = "group,d,S,ball,ball2d,eps_numeric,eps_certified,kappa_numeric,kappa_certified,iterations,converged,status,wall_time_secs";

    pub fn csv_row(&self) -> String {
        let f = |x: Option<f64>| x.map(|v| format!("{v:.10}")).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{:.3}",
            self.group,
            self.radius,
            self.s_size,
            self.ball_size,
            self.ball2_size,
            f(self.eps_numeric),
            f(self.eps_certified),
            f(self.kappa_numeric),
            self.kappa_certified.clone().unwrap_or_default(),
            self.solver.as_ref().map(|s| s.iterations).unwrap_or(0),
            self.solver.as_ref().is_some_and(|s| s.converged),
            serde_json::to_value(self.status)
                .ok()
                .and_then(|v| v.as_str().map(String::from))
                .unwrap_or_default(),
            self.wall_time_secs
        )
    }
}

/// Everything a run produced.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub report: RunReport,
    pub certificate: Option<Certificate>,
    pub sdpa: Option<String>,
}

fn file_stem(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '.' { c } else { '_' })
        .collect()
}

/// Builds the group for a run, with the closure radius filled in.
pub fn build_group(cfg: &RunConfig) -> Result<(Preset, BuiltGroup, usize)> {
    let preset = Preset::parse(&cfg.group)?;
    let d = match cfg.radius {
        Some(d) => d,
        None => preset.resolve_default_radius()?,
    };
    if d == 0 {
        return Err(Error::Domain("radius must be at least 1".into()));
    }
    let options = BuildOptions {
        budget: RewriteBudget {
            max_rules: cfg.max_rules,
            max_rule_len: cfg.max_rule_len,
        },
        closure_radius: Some(cfg.closure_radius.unwrap_or(2 * d + 2)),
    };
    let built = preset.build(options)?;
    Ok((preset, built, d))
}

/// Writes the SDPA form of the problem for `cfg`.
pub fn export_sdp(cfg: &RunConfig) -> Result<String> {
    let (_, built, d) = build_group(cfg)?;
    with_group!(&built.group, |g| {
        let mut table = ElementTable::new(g);
        let problem = assemble_for(&mut table, d)?;
        Ok(export_problem(
            &problem,
            &format!("{} d={d} n={} m={}", built.name, problem.n, problem.constraints.len()),
        ))
    })
}

fn assemble_for<B: GroupBackend>(table: &mut ElementTable<'_, B>, d: usize) -> Result<SdpProblem> {
    let gens = table.generating_set();
    let bundle = laplacian(table, &gens)?;
    let ball = enumerate_ball(table, d);
    let pairing = PairingTable::build(table, &ball);
    assemble(table, &bundle, &ball, &pairing)
}

/// Runs the full pipeline and writes the certificate (and the SDPA file in
/// export mode) into `cfg.out_dir` when set.
pub fn run_bound(cfg: &RunConfig) -> Result<RunOutput> {
    let start = Instant::now();
    let (preset, built, d) = build_group(cfg)?;
    let mut out = with_group!(&built.group, |g| run_with(g, &built, cfg, d))?;
    let r = &mut out.report;
    r.identification = match &built.group {
        AnyGroup::Presented(p) => Some(p.stats().clone()),
        _ => None,
    };
    r.references = preset
        .references(d, r.s_size)
        .into_iter()
        .map(|reference| {
            let pick = |eps: Option<f64>, kappa: Option<f64>| match reference.quantity {
                Quantity::Epsilon => eps,
                _ => kappa,
            };
            let kc = r.kappa_certified.as_ref().and_then(|s| s.parse::<f64>().ok());
            let value = reference.value;
            Comparison {
                delta_numeric: pick(r.eps_numeric, r.kappa_numeric).map(|x| x - value),
                delta_certified: pick(r.eps_certified, kc).map(|x| x - value),
                reference,
            }
        })
        .collect();
    if let Some(dir) = &cfg.out_dir {
        std::fs::create_dir_all(dir)?;
        let stem = format!("{}-d{d}", file_stem(&built.name));
        if let Some(c) = &out.certificate {
            let p = dir.join(format!("{stem}.cert"));
            std::fs::write(&p, c.to_text())?;
            out.report.certificate_path = Some(p.display().to_string());
        }
        if let Some(s) = &out.sdpa {
            let p = dir.join(format!("{stem}.dat-s"));
            std::fs::write(&p, s)?;
            out.report.sdpa_path = Some(p.display().to_string());
        }
    }
    out.report.wall_time_secs = start.elapsed().as_secs_f64();
    Ok(out)
}

fn run_with<B: GroupBackend>(group: &B, built: &BuiltGroup, cfg: &RunConfig, d: usize) -> Result<RunOutput> {
    let mut table = ElementTable::new(group);
    let gens = table.generating_set();
    let bundle = laplacian(&table, &gens)?;
    let ball = enumerate_ball(&mut table, d);
    let pairing = PairingTable::build(&mut table, &ball);
    let problem = assemble(&mut table, &bundle, &ball, &pairing)?;
    let s_size = bundle.s_size;
    let mut report = RunReport {
        group: built.name.clone(),
        backend: built.group.backend_name().into(),
        s_size,
        radius: d,
        ball_size: ball.len(),
        ball2_size: pairing.universe_size(),
        constraints: problem.constraints.len(),
        complete_identification: group.decides_equality(),
        identification: None,
        solver: None,
        eps_numeric: None,
        kappa_numeric: None,
        eps_polished: None,
        eps_certified: None,
        eps_certified_exact: None,
        kappa_certified: None,
        c_l1: None,
        tau: None,
        d_exponent: None,
        status: RunStatus::Exported,
        message: None,
        references: Vec::new(),
        wall_time_secs: 0.0,
        config: cfg.clone(),
        certificate_path: None,
        sdpa_path: None,
    };
    let solution = match (&cfg.solution, &cfg.solver) {
        (Some(path), _) => import_solution(&problem, &std::fs::read_to_string(path)?)?,
        (None, SolverChoice::Internal) => solve_internal(&problem, &cfg.params),
        (None, SolverChoice::Export) => {
            let text = export_problem(
                &problem,
                &format!("{} d={d} n={} m={}", built.name, problem.n, problem.constraints.len()),
            );
            report.message = Some("problem exported; certify with certify-from-solution".into());
            return Ok(RunOutput {
                report,
                certificate: None,
                sdpa: Some(text),
            });
        }
    };
    report.eps_numeric = Some(solution.epsilon);
    report.kappa_numeric = Some((2.0 * solution.epsilon.max(0.0) / s_size as f64).sqrt());
    report.solver = Some(solution.stats.clone());
    let converged = solution.stats.converged;
    let failed = |status: RunStatus| if converged { status } else { RunStatus::NotConverged };
    let ctx = CertifyContext {
        group: built.descriptor(),
        bits: cfg.bits,
    };
    let positive = |r: &Result<Certified>| matches!(r, Ok(c) if c.certificate.eps_certified > BigRational::zero());
    let mut attempt = match certify(&ctx, &mut table, &bundle, &ball, &pairing, &solution) {
        Err(e) if !matches!(e, Error::Certification(_)) => return Err(e),
        r => r,
    };
    if let Some(pp) = cfg.polish.as_ref().filter(|_| !converged || !positive(&attempt)) {
        if let Some(p) = polish(&problem, &solution, pp) {
            let second = certify(&ctx, &mut table, &bundle, &ball, &pairing, &p);
            let better = match (&second, &attempt) {
                (Ok(b), Ok(a)) => b.certificate.eps_certified > a.certificate.eps_certified,
                (Ok(_), Err(_)) => true,
                _ => false,
            };
            if better {
                report.eps_polished = Some(p.epsilon);
                attempt = second;
            }
        }
    }
    match attempt {
        Ok(c) => {
            let cert = c.certificate;
            let eps_c = to_f64(&cert.eps_certified);
            report.eps_certified = Some(eps_c);
            report.eps_certified_exact = Some(cert.eps_certified.to_string());
            report.kappa_certified = Some(cert.kappa_certified.clone());
            report.c_l1 = Some(to_f64(&cert.c_l1));
            report.tau = Some(cert.tau.to_string());
            report.d_exponent = Some(cert.d_exponent);
            if eps_c > 0.0 {
                report.status = RunStatus::Certified;
            } else {
                report.status = failed(RunStatus::Nonpositive);
                report.message = Some(format!(
                    "certified ε is not positive: ε = {:.6e}, ‖c‖₁ = {:.6e}, penalty 2^{} ‖c‖₁",
                    to_f64(&cert.eps),
                    to_f64(&cert.c_l1),
                    2 * cert.d_exponent - if cert.involution_free { 2 } else { 1 }
                ));
            }
            Ok(RunOutput {
                report,
                certificate: Some(cert),
                sdpa: None,
            })
        }
        Err(Error::Certification(msg)) => {
            report.status = failed(RunStatus::CertificationFailed);
            report.message = Some(msg);
            Ok(RunOutput {
                report,
                certificate: None,
                sdpa: None,
            })
        }
        Err(e) => Err(e),
    }
}

/// Verifies a certificate file against the group it names.
pub fn verify_file(path: &Path) -> Result<crate::certify::Verified> {
    let cert = Certificate::parse(&std::fs::read_to_string(path)?)?;
    let group = crate::catalog::build_from_descriptor(&cert.group)?;
    with_group!(&group, |g| crate::certify::verify_certificate(&cert, g))
}
