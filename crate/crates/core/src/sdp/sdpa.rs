//! Sparse SDPA interchange: problem export and primal-solution import.
//! The layout is described in `docs/sdp-format.md`.

use std::collections::HashMap;
use std::fmt::Write as _;

use nalgebra::{DMatrix, SymmetricEigen};

use super::admm::{GramSolution, SolverStats};
use super::problem::SdpProblem;
use crate::error::{Error, Result};

/// Import accepts a solution when every constraint holds to this tolerance.
pub const IMPORT_TOLERANCE: f64 = 1e-6;

/// The numeric content of an SDPA sparse file.
#[derive(Debug, Clone, PartialEq)]
pub struct SdpaData {
    pub block_sizes: Vec<i64>,
    pub rhs: Vec<f64>,
    /// `(matrix, block, i, j, value)`, 1-based, `i ≤ j`.
    pub entries: Vec<(usize, usize, usize, usize, f64)>,
}

/// Exported constraint number (1-based) of each problem constraint.
/// A constraint whose fibre is the transpose of an earlier one, with the
/// same targets, shares that constraint's number.
pub fn exported_index(problem: &SdpProblem) -> Vec<usize> {
    let n = problem.n;
    let mut owner = vec![usize::MAX; n * n];
    for (k, c) in problem.constraints.iter().enumerate() {
        for &(i, j) in &c.pairs {
            owner[i as usize * n + j as usize] = k;
        }
    }
    let mut number = vec![0usize; problem.constraints.len()];
    let mut next = 0;
    for (k, c) in problem.constraints.iter().enumerate() {
        let (i, j) = c.pairs[0];
        let partner = owner[j as usize * n + i as usize];
        let twin = partner < k && {
            let p = &problem.constraints[partner];
            p.t == c.t
                && p.u == c.u
                && p.pairs.len() == c.pairs.len()
                && c
                    .pairs
                    .iter()
                    .all(|&(a, b)| owner[b as usize * n + a as usize] == partner)
        };
        if twin {
            number[k] = number[partner];
        } else {
            next += 1;
            number[k] = next;
        }
    }
    number
}

/// The SDPA data of a problem: variable `diag(Q, ε)`, one constraint
/// `A_g • Q + u_g ε = t_g` per exported constraint, objective `ε`.
pub fn problem_to_sdpa(problem: &SdpProblem) -> SdpaData {
    let number = exported_index(problem);
    let m = number.iter().copied().max().unwrap_or(0);
    let mut rhs = vec![0.0; m];
    let mut entries = vec![(0, 2, 1, 1, 1.0)];
    let mut seen = vec![false; m + 1];
    for (k, c) in problem.constraints.iter().enumerate() {
        let num = number[k];
        if seen[num] {
            continue;
        }
        seen[num] = true;
        rhs[num - 1] = c.t as f64;
        let mut weight: HashMap<(u32, u32), f64> = HashMap::new();
        for &(i, j) in &c.pairs {
            *weight.entry((i.min(j), i.max(j))).or_default() += if i == j { 1.0 } else { 0.5 };
        }
        let mut cells: Vec<_> = weight.into_iter().collect();
        cells.sort_by_key(|&(p, _)| p);
        for ((i, j), v) in cells {
            entries.push((num, 1, i as usize + 1, j as usize + 1, v));
        }
        if c.u != 0 {
            entries.push((num, 2, 1, 1, c.u as f64));
        }
    }
    SdpaData {
        block_sizes: vec![problem.n as i64, 1],
        rhs,
        entries,
    }
}

pub fn write_sdpa(data: &SdpaData, comment: &str) -> String {
    let mut out = String::new();
    for line in comment.lines() {
        let _ = writeln!(out, "\" {line}");
    }
    let _ = writeln!(out, "{}", data.rhs.len());
    let _ = writeln!(out, "{}", data.block_sizes.len());
    let sizes: Vec<String> = data.block_sizes.iter().map(|s| s.to_string()).collect();
    let _ = writeln!(out, "{}", sizes.join(" "));
    let rhs: Vec<String> = data.rhs.iter().map(|v| format!("{v}")).collect();
    let _ = writeln!(out, "{}", rhs.join(" "));
    for &(k, b, i, j, v) in &data.entries {
        let _ = writeln!(out, "{k} {b} {i} {j} {v}");
    }
    out
}

pub fn export_problem(problem: &SdpProblem, comment: &str) -> String {
    write_sdpa(&problem_to_sdpa(problem), comment)
}

fn numbers(line: &str) -> Vec<&str> {
    line.split(|c: char| c.is_whitespace() || "{}(),".contains(c))
        .filter(|t| !t.is_empty())
        .collect()
}

fn num<T: std::str::FromStr>(tok: &str, line: usize) -> Result<T> {
    tok.parse()
        .map_err(|_| Error::parse(line, format!("bad number `{tok}`")))
}

pub fn parse_sdpa(text: &str) -> Result<SdpaData> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('"') && !l.starts_with('*'));
    let mut next = |what: &str| {
        lines
            .next()
            .ok_or_else(|| Error::parse(0, format!("missing {what}")))
    };
    let (ln, l) = next("constraint count")?;
    let m: usize = num(numbers(l).first().copied().unwrap_or(""), ln)?;
    let (ln, l) = next("block count")?;
    let nb: usize = num(numbers(l).first().copied().unwrap_or(""), ln)?;
    let (ln, l) = next("block sizes")?;
    let block_sizes = numbers(l)
        .iter()
        .take(nb)
        .map(|t| num::<i64>(t, ln))
        .collect::<Result<Vec<_>>>()?;
    if block_sizes.len() != nb {
        return Err(Error::parse(ln, "block size count mismatch"));
    }
    let mut rhs = Vec::new();
    while rhs.len() < m {
        let (ln, l) = next("right-hand side")?;
        for t in numbers(l) {
            rhs.push(num::<f64>(t, ln)?);
        }
    }
    if rhs.len() != m {
        return Err(Error::parse(0, "right-hand side length mismatch"));
    }
    let mut entries = Vec::new();
    for (ln, l) in lines {
        let f = numbers(l);
        if f.len() != 5 {
            return Err(Error::parse(ln, "expected `matrix block i j value`"));
        }
        let (k, b, i, j): (usize, usize, usize, usize) =
            (num(f[0], ln)?, num(f[1], ln)?, num(f[2], ln)?, num(f[3], ln)?);
        let v: f64 = num(f[4], ln)?;
        if k > m || b == 0 || b > nb || i == 0 || j == 0 {
            return Err(Error::parse(ln, "entry index out of range"));
        }
        entries.push((k, b, i.min(j), i.max(j), v));
    }
    Ok(SdpaData {
        block_sizes,
        rhs,
        entries,
    })
}

fn as_index(tok: &str) -> Option<usize> {
    tok.parse::<usize>().ok().filter(|&v| v > 0)
}

/// Reads primal matrix entries from a solver output file and validates
/// them against the problem.
///
/// Accepted lines: `2 block i j value` (primal entries in CSDP-style
/// solution files; lines starting with `1` hold the dual slack and are
/// skipped) and `block i j value`. Any other line, such as the leading
/// dual vector, is ignored.
pub fn import_solution(problem: &SdpProblem, text: &str) -> Result<GramSolution> {
    let n = problem.n;
    let mut q = DMatrix::<f64>::zeros(n, n);
    let mut eps = 0.0;
    let mut any = false;
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('"') || line.starts_with('*') {
            continue;
        }
        let f = numbers(line);
        let idx: Vec<Option<usize>> = f.iter().take(f.len().saturating_sub(1)).map(|t| as_index(t)).collect();
        let (b, i, j, v) = match f.len() {
            5 if idx.iter().all(Option::is_some) => {
                if idx[0] != Some(2) {
                    continue;
                }
                (idx[1].unwrap(), idx[2].unwrap(), idx[3].unwrap(), f[4])
            }
            4 if idx.iter().all(Option::is_some) => {
                (idx[0].unwrap(), idx[1].unwrap(), idx[2].unwrap(), f[3])
            }
            _ => continue,
        };
        let v: f64 = num(v, ln + 1)?;
        match b {
            1 if i <= n && j <= n => {
                q[(i - 1, j - 1)] = v;
                q[(j - 1, i - 1)] = v;
            }
            2 if i == 1 && j == 1 => eps = v,
            _ => {
                return Err(Error::Dimension(format!(
                    "line {}: entry ({b}, {i}, {j}) outside blocks [{n}, 1]",
                    ln + 1
                )))
            }
        }
        any = true;
    }
    if !any {
        return Err(Error::parse(0, "no primal matrix entries found"));
    }
    let row_major = q.transpose().as_slice().to_vec();
    let (res, worst) = problem.constraint_residual(&row_major, eps);
    if !(res <= IMPORT_TOLERANCE) {
        return Err(Error::Infeasible {
            element: problem.constraints[worst].label.clone(),
            violation: res,
        });
    }
    let min_eigenvalue = SymmetricEigen::new(q.clone())
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    Ok(GramSolution {
        q,
        epsilon: eps,
        stats: SolverStats {
            iterations: 0,
            converged: true,
            primal_residual: 0.0,
            dual_residual: 0.0,
            constraint_residual: res,
            min_eigenvalue,
            final_rho: 0.0,
        },
    })
}
