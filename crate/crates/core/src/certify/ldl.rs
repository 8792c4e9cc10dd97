use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// `Q′ = P·round(Q)·P` held as an integer matrix over a common
/// denominator: `Q′ = num / (2^bits · n²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundedGram {
    pub n: usize,
    pub bits: u32,
    /// Row-major `n×n`.
    pub num: Vec<BigInt>,
    pub den: BigInt,
}

impl RoundedGram {
    pub fn get(&self, i: usize, j: usize) -> BigRational {
        BigRational::new(self.num[i * self.n + j].clone(), self.den.clone())
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        let d = self.den.to_f64().unwrap_or(f64::INFINITY);
        DMatrix::from_fn(self.n, self.n, |i, j| {
            self.num[i * self.n + j].to_f64().unwrap_or(f64::NAN) / d
        })
    }
}

pub fn pow2(k: u32) -> BigInt {
    BigInt::one() << k
}

/// Rounds the upper triangle of `q` to multiples of `2^-bits`, mirrors it,
/// and applies `P = I − J/n` on both sides exactly. Row sums of the result
/// are zero as an identity.
pub fn round_and_project(q: &DMatrix<f64>, bits: u32) -> RoundedGram {
    let n = q.nrows();
    let scale = (bits as f64).exp2();
    let mut r = vec![BigInt::zero(); n * n];
    for i in 0..n {
        for j in i..n {
            let v = BigInt::from((q[(i, j)] * scale).round() as i128);
            r[i * n + j] = v.clone();
            r[j * n + i] = v;
        }
    }
    let rows: Vec<BigInt> = (0..n).map(|i| r[i * n..(i + 1) * n].iter().sum()).collect();
    let total: BigInt = rows.iter().sum();
    let nn = BigInt::from(n);
    let n2 = &nn * &nn;
    let mut num = vec![BigInt::zero(); n * n];
    for i in 0..n {
        for j in 0..n {
            num[i * n + j] = &n2 * &r[i * n + j] - &nn * (&rows[i] + &rows[j]) + &total;
        }
    }
    RoundedGram {
        n,
        bits,
        num,
        den: pow2(bits) * n2,
    }
}

/// `τ` values tried in order: `0, 2^-40, 2^-36, …, 2^-8`.
pub fn shift_schedule() -> Vec<Option<u32>> {
    std::iter::once(None)
        .chain((8..=40).rev().step_by(4).map(Some))
        .collect()
}

pub fn tau_value(shift: Option<u32>) -> BigRational {
    match shift {
        None => BigRational::zero(),
        Some(k) => BigRational::new(BigInt::one(), pow2(k)),
    }
}

/// `M = Q′ + τP` as integers over a common denominator.
#[derive(Debug, Clone)]
pub struct ShiftedGram {
    pub n: usize,
    pub num: Vec<BigInt>,
    pub den: BigInt,
    pub tau: BigRational,
}

pub fn shifted(q: &RoundedGram, shift: Option<u32>) -> ShiftedGram {
    let n = q.n;
    match shift {
        None => ShiftedGram {
            n,
            num: q.num.clone(),
            den: q.den.clone(),
            tau: BigRational::zero(),
        },
        Some(k) => {
            // τP = 2^-k (nI − J)/n = 2^bits·n·(nI − J) / (2^(bits+k)·n²)
            let f = pow2(k);
            let c = pow2(q.bits) * BigInt::from(n);
            let mut num: Vec<BigInt> = q.num.iter().map(|x| x * &f).collect();
            for i in 0..n {
                for j in 0..n {
                    let p = if i == j { n as i64 - 1 } else { -1 };
                    num[i * n + j] += &c * p;
                }
            }
            ShiftedGram {
                n,
                num,
                den: &q.den * f,
                tau: tau_value(shift),
            }
        }
    }
}

/// `B = L·diag(r)·Lᵀ` for the leading `(n−1)×(n−1)` block `B` of `M`,
/// with `L` unit lower triangular and `r ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LdlFactors {
    pub r: Vec<BigRational>,
    /// Strictly lower entries `(i, k, L_ik)` with `L_ik ≠ 0`, sorted.
    pub l: Vec<(usize, usize, BigRational)>,
}

/// Why an elimination stopped.
#[derive(Debug, Clone)]
pub enum LdlFailure {
    NegativePivot { index: usize, value: f64 },
    ZeroPivotNonzeroColumn { index: usize },
}

/// Fraction-free symmetric elimination on the integer numerator of the
/// leading block. A zero pivot whose remaining column vanishes is skipped
/// with `r = 0`; any other zero or a negative pivot fails.
pub fn ldl_leading_block(m: &ShiftedGram) -> std::result::Result<LdlFactors, LdlFailure> {
    let k = m.n.saturating_sub(1);
    // lower triangle only
    let mut a: Vec<Vec<BigInt>> = (0..k)
        .map(|i| m.num[i * m.n..i * m.n + i + 1].to_vec())
        .collect();
    let mut prev = BigInt::one();
    let mut r = Vec::with_capacity(k);
    let mut l = Vec::new();
    for p in 0..k {
        let piv = a[p][p].clone();
        if piv.is_negative() {
            let value = BigRational::new(piv, &prev * &m.den).to_f64().unwrap_or(f64::NAN);
            return Err(LdlFailure::NegativePivot { index: p, value });
        }
        if piv.is_zero() {
            if (p + 1..k).any(|i| !a[i][p].is_zero()) {
                return Err(LdlFailure::ZeroPivotNonzeroColumn { index: p });
            }
            r.push(BigRational::zero());
            continue;
        }
        r.push(BigRational::new(piv.clone(), &prev * &m.den));
        for i in p + 1..k {
            if !a[i][p].is_zero() {
                l.push((i, p, BigRational::new(a[i][p].clone(), piv.clone())));
            }
        }
        for i in p + 1..k {
            let aip = a[i][p].clone();
            for j in p + 1..=i {
                let v = &piv * &a[i][j] - &aip * &a[j][p];
                let (q, rem) = v.div_rem(&prev);
                debug_assert!(rem.is_zero());
                a[i][j] = q;
            }
        }
        prev = piv;
    }
    Ok(LdlFactors { r, l })
}

/// Smallest eigenvalue of `M` off the ones direction, in floating point.
pub fn min_eigenvalue_off_ones(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    if n <= 1 {
        return 0.0;
    }
    let lift = m.norm() + 1.0;
    let shifted = DMatrix::from_fn(n, n, |i, j| m[(i, j)] + lift / n as f64);
    let eig = SymmetricEigen::new(shifted);
    let mut v: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    v.sort_by(|a, b| a.total_cmp(b));
    v[0]
}

/// Tries each shift on the schedule, skipping those the floating-point
/// spectrum already rules out, until the exact factorization succeeds.
pub fn exact_ldl_with_shift(q: &RoundedGram) -> Result<(ShiftedGram, LdlFactors)> {
    let lam = min_eigenvalue_off_ones(&q.to_f64());
    let slack = 1e-12 * (1.0 + q.to_f64().norm());
    let mut last = String::from("no shift tried");
    for shift in shift_schedule() {
        let tau = tau_value(shift).to_f64().unwrap_or(0.0);
        if lam + tau < -slack {
            last = format!("float spectrum minimum {lam:e} below −τ = {:e}", -tau);
            continue;
        }
        let m = shifted(q, shift);
        match ldl_leading_block(&m) {
            Ok(f) => return Ok((m, f)),
            Err(LdlFailure::NegativePivot { index, value }) => {
                last = format!("negative pivot {value:e} at index {index}");
            }
            Err(LdlFailure::ZeroPivotNonzeroColumn { index }) => {
                last = format!("zero pivot with nonzero column at index {index}");
            }
        }
    }
    Err(Error::Certification(format!(
        "no shift up to 2^-8 makes the rounded Gram matrix PSD ({last})"
    )))
}

/// `(L·diag(r)·Lᵀ)_{ij}` for `i, j < n−1`, exactly.
pub fn reconstruct_block(n1: usize, f: &LdlFactors) -> Vec<Vec<BigRational>> {
    let mut cols: Vec<Vec<(usize, BigRational)>> = vec![Vec::new(); n1];
    for (i, k, v) in &f.l {
        cols[*k].push((*i, v.clone()));
    }
    let mut out = vec![vec![BigRational::zero(); n1]; n1];
    for k in 0..n1 {
        let rk = &f.r[k];
        if rk.is_zero() {
            continue;
        }
        let mut col: Vec<(usize, BigRational)> = vec![(k, BigRational::one())];
        col.extend(cols[k].iter().cloned());
        for (a, (i, li)) in col.iter().enumerate() {
            let w = li * rk;
            for (j, lj) in col.iter().take(a + 1) {
                out[*i][*j] += &w * lj;
            }
        }
    }
    for i in 0..n1 {
        for j in i + 1..n1 {
            out[i][j] = out[j][i].clone();
        }
    }
    out
}
