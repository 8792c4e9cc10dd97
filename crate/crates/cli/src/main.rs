//! `kazhdan`: certified lower bounds for spectral gaps and Kazhdan constants.
//!
//! Exit codes: 0 certified positive bound, 2 solver did not converge (or
//! the problem was only exported), 3 certification failed or gave `ε ≤ 0`
//! (also a rejected certificate), 4 input error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kazhdan::catalog::{
    generate_triangle_presentations, parse_triangle, BuildOptions, Preset, ReferenceKind,
};
use kazhdan::error::Error;
use kazhdan::pipeline::{export_sdp, run_bound, verify_file, RunConfig, RunReport, SolverChoice};
use kazhdan::rewrite::RewriteBudget;
use kazhdan::sdp::SolverParams;

#[derive(Parser)]
#[command(name = "kazhdan", version, about = "Certified lower bounds for spectral gaps and Kazhdan constants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve and certify one or more groups.
    Bound {
        /// Preset names or presentation files.
        #[arg(required = true)]
        groups: Vec<String>,
        #[command(flatten)]
        run: RunArgs,
        /// Print one aligned table for all runs instead of JSON.
        #[arg(long)]
        table: bool,
        /// Print CSV rows instead of JSON.
        #[arg(long, conflicts_with = "table")]
        csv: bool,
    },
    /// Re-check a certificate file from scratch.
    Verify { certificate: PathBuf },
    /// List the preset families.
    List,
    /// Show generators, relator lengths and radii for a group.
    Describe { group: String },
    /// Check a triangle-presentation file against the axioms.
    ValidateTriangle { file: PathBuf },
    /// Generate all triangle presentations over PG(2,2) up to collineation.
    GenTriangle {
        #[arg(long, default_value_t = 2)]
        q: u32,
        /// Directory for the generated files.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Write the SDP in sparse SDPA format.
    ExportSdp {
        group: String,
        #[arg(short = 'd', long = "radius")]
        radius: Option<usize>,
        #[command(flatten)]
        rewrite: RewriteArgs,
        /// Output file; standard output if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify a primal solution produced by an external SDP solver.
    CertifyFromSolution {
        group: String,
        /// Solver output holding the primal matrix.
        #[arg(long)]
        solution: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverArg {
    Internal,
    Export,
}

#[derive(Args, Clone)]
struct RewriteArgs {
    /// Maximum number of rewriting rules.
    #[arg(long = "rewrite-budget", default_value_t = RewriteBudget::default().max_rules)]
    max_rules: usize,
    /// Maximum length of a rule's left side.
    #[arg(long = "max-rule-len", default_value_t = RewriteBudget::default().max_rule_len)]
    max_rule_len: usize,
    /// Radius of the ball closure used when rewriting does not complete
    /// (default 2d+2).
    #[arg(long = "closure-radius")]
    closure_radius: Option<usize>,
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Support radius d of the sum of squares.
    #[arg(short = 'd', long = "radius")]
    radius: Option<usize>,
    #[arg(long, value_enum, default_value = "internal")]
    solver: SolverArg,
    #[arg(long, default_value_t = SolverParams::default().tolerance)]
    tol: f64,
    #[arg(long = "max-iters", default_value_t = SolverParams::default().max_iters)]
    max_iters: usize,
    /// Skip the feasibility phase that backs ε off slightly when the
    /// solver stops early.
    #[arg(long = "no-polish")]
    no_polish: bool,
    /// Gram entries are rounded to multiples of 2^-bits.
    #[arg(long = "round-denom-bits", default_value_t = 32)]
    bits: u32,
    #[command(flatten)]
    rewrite: RewriteArgs,
    /// Directory for reports, certificates and exported problems.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn config(&self, group: &str) -> RunConfig {
        let mut c = RunConfig::new(group);
        c.radius = self.radius;
        c.solver = match self.solver {
            SolverArg::Internal => SolverChoice::Internal,
            SolverArg::Export => SolverChoice::Export,
        };
        c.params.tolerance = self.tol;
        c.params.max_iters = self.max_iters;
        if self.no_polish {
            c.polish = None;
        }
        c.bits = self.bits;
        c.max_rules = self.rewrite.max_rules;
        c.max_rule_len = self.rewrite.max_rule_len;
        c.closure_radius = self.rewrite.closure_radius;
        c.out_dir = self.out.clone();
        c
    }
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::Certification(_) | Error::Verification(_) => 3,
        _ => 4,
    }
}

fn fail(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(error_code(&e))
}

/// `println!` panics when stdout is closed early (`kazhdan list | head`);
/// exit quietly instead.
fn quiet_broken_pipe() {
    let default = std::panic::take_hook();
    std::panic::set_hook(Box::new(move |info| {
        let msg = info
            .payload()
            .downcast_ref::<String>()
            .map(String::as_str)
            .or_else(|| info.payload().downcast_ref::<&str>().copied())
            .unwrap_or("");
        if msg.contains("Broken pipe") {
            std::process::exit(0);
        }
        default(info);
    }));
}

fn main() -> ExitCode {
    quiet_broken_pipe();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(4)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => fail(e),
    }
}

fn write_report(report: &RunReport, dir: &Path) -> Result<(), Error> {
    let stem: String = format!("{}-d{}", report.group, report.radius)
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '.' { c } else { '_' })
        .collect();
    std::fs::write(dir.join(format!("{stem}.json")), serde_json::to_string_pretty(report)?)?;
    Ok(())
}

fn run(command: Command) -> Result<u8, Error> {
    match command {
        Command::Bound {
            groups,
            run,
            table,
            csv,
        } => {
            let mut reports = Vec::new();
            let mut code = 0u8;
            for g in &groups {
                let out = run_bound(&run.config(g))?;
                let r = out.report;
                if let Some(dir) = &run.out {
                    write_report(&r, dir)?;
                }
                code = code.max(r.exit_code() as u8);
                if !table && !csv {
                    println!("{}", serde_json::to_string_pretty(&r)?);
                }
                if let Some(m) = &r.message {
                    eprintln!("{}: {m}", r.group);
                }
                reports.push(r);
            }
            if csv {
                println!("{}", RunReport::CSV_HEADER);
                for r in &reports {
                    println!("{}", r.csv_row());
                }
            }
            if table {
                print_table(&reports);
            }
            Ok(code)
        }
        Command::CertifyFromSolution { group, solution, run } => {
            let mut cfg = run.config(&group);
            cfg.solution = Some(solution);
            let out = run_bound(&cfg)?;
            if let Some(dir) = &run.out {
                write_report(&out.report, dir)?;
            }
            println!("{}", serde_json::to_string_pretty(&out.report)?);
            if let Some(m) = &out.report.message {
                eprintln!("{m}");
            }
            Ok(out.report.exit_code() as u8)
        }
        Command::Verify { certificate } => {
            let v = verify_file(&certificate)?;
            println!(
                "certificate ok: n = {}, residual terms = {}, |c|_1 = {}, eps_certified = {}, kappa_certified = {}",
                v.n, v.residual_terms, v.c_l1, v.eps_certified, v.kappa_certified
            );
            Ok(if v.is_positive() { 0 } else { 3 })
        }
        Command::List => {
            for (name, what) in PRESETS {
                println!("{name:<22} {what}");
            }
            Ok(0)
        }
        Command::Describe { group } => {
            let preset = Preset::parse(&group)?;
            let built = preset.build(BuildOptions::default())?;
            println!("group: {}", built.name);
            println!("backend: {}", built.group.backend_name());
            println!("|S|: {}", built.group.symmetric_size());
            println!("complete identification: {}", built.group.decides_equality());
            if let Some(p) = &built.presentation {
                println!("relators: {}", p.relators().len());
                let lens: Vec<String> = built.relator_lengths().iter().map(|l| l.to_string()).collect();
                println!("relator lengths: {}", lens.join(" "));
                println!("presentation:");
                for line in p.to_text().lines() {
                    println!("  {line}");
                }
            }
            if let Some(d) = built.suggested_radius() {
                println!("suggested d (relator heuristic): {d}");
            }
            println!("default d: {}", built.default_radius);
            let refs = preset.references(built.default_radius, built.group.symmetric_size());
            if !refs.is_empty() {
                println!("references:");
                for r in refs {
                    let kind = match r.kind {
                        ReferenceKind::Exact => "exact",
                        ReferenceKind::UpperBound => "upper bound",
                        ReferenceKind::LowerBound => "lower bound",
                        ReferenceKind::Reported => "reported",
                    };
                    println!("  {:<22} {:.10}  ({kind}; {})", r.name, r.value, r.expression);
                }
            }
            Ok(0)
        }
        Command::ValidateTriangle { file } => {
            let t = parse_triangle(&std::fs::read_to_string(&file)?)?;
            let spec = t.to_presentation()?;
            println!(
                "valid: q = {}, {} points, {} triples, {} relators, |S| = {}",
                t.q(),
                t.plane.size(),
                t.triples.len(),
                spec.relators().len(),
                spec.symmetric_size()
            );
            Ok(0)
        }
        Command::GenTriangle { q, out } => {
            let all = generate_triangle_presentations(q)?;
            std::fs::create_dir_all(&out)?;
            for (k, t) in all.iter().enumerate() {
                let p = out.join(format!("triangle-q{q}-{k:02}.tri"));
                std::fs::write(&p, t.to_text())?;
                println!("{}", p.display());
            }
            eprintln!("{} presentations up to collineation", all.len());
            Ok(0)
        }
        Command::ExportSdp {
            group,
            radius,
            rewrite,
            out,
        } => {
            let mut cfg = RunConfig::new(&group);
            cfg.radius = radius;
            cfg.max_rules = rewrite.max_rules;
            cfg.max_rule_len = rewrite.max_rule_len;
            cfg.closure_radius = rewrite.closure_radius;
            let text = export_sdp(&cfg)?;
            match out {
                Some(p) => std::fs::write(p, text)?,
                None => print!("{text}"),
            }
            Ok(0)
        }
    }
}

const PRESETS: &[(&str, &str)] = &[
    ("cyclic:m", "Z/m with one generator"),
    ("free:k", "free group of rank k"),
    ("ronan:G1 .. ronan:G4", "Ronan's groups on three generators of order 3"),
    ("steinberg:n", "Steinberg group St_n(Z), generators x_ij"),
    ("sl:n:Z", "SL(n, Z), elementary matrices"),
    ("sl:n:Fp", "SL(n, F_p), elementary matrices (e.g. sl:2:F5)"),
    ("coxeter:X", "finite Coxeter group: A1.., B2.., D4.., E6-E8, F4, H3, H4, I2:m"),
    ("gmpn:m:p:n", "complex reflection group G(m,p,n)"),
    ("a2tilde:FILE", "group of a triangle presentation file"),
    ("a2tilde:gen[:k]", "k-th generated triangle presentation over PG(2,2)"),
    ("FILE", "presentation file (gens:, involutions:, rel:)"),
];

fn print_table(reports: &[RunReport]) {
    println!(
        "{:<18} {:>2} {:>4} {:>6} {:>8} {:>14} {:>14} {:>14} {:>8}",
        "group", "d", "|S|", "|B_d|", "|B_2d|", "eps numeric", "kappa numeric", "kappa certif.", "status"
    );
    for r in reports {
        let status = serde_json::to_value(r.status)
            .ok()
            .and_then(|v| v.as_str().map(String::from))
            .unwrap_or_default();
        println!(
            "{:<18} {:>2} {:>4} {:>6} {:>8} {:>14} {:>14} {:>14} {:>8}",
            r.group,
            r.radius,
            r.s_size,
            r.ball_size,
            r.ball2_size,
            r.eps_numeric.map(|v| format!("{v:.8}")).unwrap_or_default(),
            r.kappa_numeric.map(|v| format!("{v:.8}")).unwrap_or_default(),
            r.kappa_certified.as_deref().map(|s| &s[..s.len().min(12)]).unwrap_or(""),
            status
        );
    }
}
