//! Exact-rational certification of a numeric Gram solution.
//!
//! The numeric `Q` is rounded and projected so that every implicit `b_i`
//! has coefficient sum zero, shifted by `τP` until an exact `LDLᵀ`
//! factorization with nonnegative `r` exists, and the exact residual
//! `c = Δ² − εΔ − Σ r_i b_i* b_i` is charged against `ε` through
//! `ε − 2^{2D−1}‖c‖₁` (or `2^{2D−2}` when no generator is an involution).

mod certificate;
mod ldl;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::backend::GroupBackend;
use crate::ball::{Ball, PairingTable};
use crate::elements::ElementTable;
use crate::error::{Error, Result};
use crate::ring::{LaplacianBundle, RingElem};
use crate::sdp::GramSolution;
use crate::word::{shortlex_cmp, Word};

pub use certificate::{verify_certificate, Certificate, GroupDescriptor, Verified};
pub use ldl::{
    exact_ldl_with_shift, ldl_leading_block, min_eigenvalue_off_ones, pow2, reconstruct_block,
    round_and_project, shift_schedule, shifted, tau_value, LdlFactors, LdlFailure, RoundedGram,
    ShiftedGram,
};

/// Least `D ≥ 1` with `2d ≤ 2^D`, for words of length at most `d`.
pub fn d_exponent(max_word_len: usize) -> u32 {
    let target = 2 * max_word_len.max(1);
    let mut d = 1u32;
    while (1usize << d) < target {
        d += 1;
    }
    d
}

/// `2^{2D−1}`, or `2^{2D−2}` when `S` has no involutions.
pub fn penalty_factor(d_exp: u32, involution_free: bool) -> BigInt {
    pow2(2 * d_exp - if involution_free { 2 } else { 1 })
}

/// Largest multiple of `2^-bits` not above `x`, so the certified value
/// never exceeds the numeric one.
pub fn floor_dyadic(x: f64, bits: u32) -> BigRational {
    let v = (x * (bits as f64).exp2()).floor();
    BigRational::new(BigInt::from(v as i128), pow2(bits))
}

/// `Σ_{(i,j)∈F} (Q′ + τP)_ij` for one fibre.
pub fn accounted(q: &RoundedGram, tau: &BigRational, pairs: &[(u32, u32)]) -> BigRational {
    let n = q.n;
    let mut s = BigInt::zero();
    let mut diag = 0i64;
    for &(i, j) in pairs {
        s += &q.num[i as usize * n + j as usize];
        if i == j {
            diag += 1;
        }
    }
    let mut out = BigRational::new(s, q.den.clone());
    if !tau.is_zero() {
        let p = BigRational::from_integer(BigInt::from(diag))
            - BigRational::new(BigInt::from(pairs.len()), BigInt::from(n));
        out += tau * p;
    }
    out
}

/// `c = Δ² − εΔ − Σ_{ij} M_ij u_i⁻¹u_j` with `M = Q′ + τP`.
pub fn residual(
    delta_sq: &RingElem<BigRational>,
    delta: &RingElem<BigRational>,
    eps: &BigRational,
    q: &RoundedGram,
    tau: &BigRational,
    pairing: &PairingTable,
) -> Result<RingElem<BigRational>> {
    let mut c = delta_sq.sub(&delta.scale(eps));
    for (g, pairs) in pairing.fibres() {
        c.add_term(*g, -accounted(q, tau, pairs));
    }
    if !c.augmentation().is_zero() {
        return Err(Error::Certification(
            "residual is not in the augmentation ideal".into(),
        ));
    }
    Ok(c)
}

/// `⌊√x · 10^10⌋ / 10^10` rendered with ten decimals; `0` for `x ≤ 0`.
pub fn sqrt_floor_decimal(x: &BigRational) -> String {
    if !x.is_positive() {
        return "0.0000000000".into();
    }
    let scaled = (x * BigRational::from_integer(BigInt::from(10u64).pow(20))).floor();
    let k = scaled.to_integer().sqrt();
    let unit = BigInt::from(10u64).pow(10);
    let (whole, frac) = (&k / &unit, &k % &unit);
    format!("{whole}.{frac:0>10}")
}

/// `κ = √(2ε/|S|)`, floored at ten decimals.
pub fn kappa_floor(eps: &BigRational, s_size: usize) -> String {
    sqrt_floor_decimal(&(eps * BigRational::new(BigInt::from(2), BigInt::from(s_size))))
}

/// Everything the certification step produces, besides serialization.
#[derive(Debug, Clone)]
pub struct Certified {
    pub certificate: Certificate,
    pub residual: RingElem<BigRational>,
}

/// Inputs of [`certify`] that describe the group and its run.
#[derive(Debug, Clone)]
pub struct CertifyContext {
    pub group: GroupDescriptor,
    pub bits: u32,
}

/// Runs the full certification chain on a numeric solution.
pub fn certify<B: GroupBackend>(
    ctx: &CertifyContext,
    table: &mut ElementTable<'_, B>,
    bundle: &LaplacianBundle,
    ball: &Ball,
    pairing: &PairingTable,
    solution: &GramSolution,
) -> Result<Certified> {
    let group = table.group();
    let q = round_and_project(&solution.q, ctx.bits);
    let eps = floor_dyadic(solution.epsilon, ctx.bits);
    let (m, ldl) = exact_ldl_with_shift(&q)?;
    let delta_sq = bundle.delta_squared(table);
    let c = residual(&delta_sq, &bundle.delta, &eps, &q, &m.tau, pairing)?;
    let c_l1 = c.l1_norm();
    let ball_words: Vec<_> = ball.elements().iter().map(|&g| table.stable_word(g)).collect();
    let max_len = ball_words.iter().map(|w| w.len()).max().unwrap_or(0);
    let d_exp = d_exponent(max_len);
    let involution_free = group.involution_free();
    let eps_certified =
        &eps - BigRational::from_integer(penalty_factor(d_exp, involution_free)) * &c_l1;
    let kappa_certified = kappa_floor(&eps_certified, bundle.s_size);
    let mut terms: Vec<(Word, BigRational)> = c
        .iter()
        .map(|(g, v)| (table.stable_word(g), v.clone()))
        .collect();
    terms.sort_by(|a, b| shortlex_cmp(&a.0, &b.0));
    let alphabet = group.alphabet();
    let certificate = Certificate {
        group: ctx.group.clone(),
        s_size: bundle.s_size,
        radius: ball.radius(),
        d_exponent: d_exp,
        involution_free,
        complete_identification: group.decides_equality(),
        bits: ctx.bits,
        eps_numeric: solution.epsilon,
        eps,
        tau: m.tau.clone(),
        ball_words: ball_words
            .iter()
            .map(|w| alphabet.display(w).to_string())
            .collect(),
        gram: q,
        ldl,
        residual: terms
            .into_iter()
            .map(|(w, v)| (alphabet.display(&w).to_string(), v))
            .collect(),
        c_l1,
        eps_certified,
        kappa_certified,
    };
    Ok(Certified {
        certificate,
        residual: c,
    })
}

/// `ε_certified` as a float, for reports.
pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
