use num_traits::ToPrimitive;

use crate::backend::GroupBackend;
use crate::ball::{Ball, PairingTable};
use crate::elements::{ElementId, ElementTable};
use crate::error::{Error, Result};
use crate::ring::LaplacianBundle;

/// One linear constraint `Σ_{(i,j)∈F_g} Q_ij + u_g·ε = t_g`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub element: ElementId,
    /// Shortlex word of `g`, for diagnostics and interchange.
    pub label: String,
    /// The fibre `F_g` of ordered index pairs.
    pub pairs: Vec<(u32, u32)>,
    /// Coefficient of `g` in `Δ²`.
    pub t: i64,
    /// Coefficient of `g` in `Δ`.
    pub u: i64,
}

/// Maximize `ε` subject to the Gram constraints and `Q ⪰ 0`.
#[derive(Debug, Clone)]
pub struct SdpProblem {
    pub n: usize,
    pub s_size: usize,
    pub constraints: Vec<Constraint>,
}

impl SdpProblem {
    /// `max_g |Σ_{F_g} Q_ij + u_g ε − t_g|` for a row-major `n×n` matrix.
    pub fn constraint_residual(&self, q: &[f64], eps: f64) -> (f64, usize) {
        let mut worst = (0.0f64, 0usize);
        for (k, c) in self.constraints.iter().enumerate() {
            let s: f64 = c
                .pairs
                .iter()
                .map(|&(i, j)| q[i as usize * self.n + j as usize])
                .sum();
            let r = (s + c.u as f64 * eps - c.t as f64).abs();
            if r > worst.0 || r.is_nan() {
                worst = (r, k);
            }
        }
        worst
    }
}

fn small(x: &num_rational::BigRational, what: &str) -> Result<i64> {
    if !x.is_integer() {
        return Err(Error::Inconsistent(format!("non-integral {what} coefficient")));
    }
    x.to_integer()
        .to_i64()
        .ok_or_else(|| Error::Inconsistent(format!("{what} coefficient out of range")))
}

/// Builds the constraint system over the pairing universe of `ball`.
pub fn assemble<B: GroupBackend>(
    table: &mut ElementTable<'_, B>,
    bundle: &LaplacianBundle,
    ball: &Ball,
    pairing: &PairingTable,
) -> Result<SdpProblem> {
    if ball.radius() == 0 {
        return Err(Error::Domain("support radius must be at least 1".into()));
    }
    let d2 = bundle.delta_squared(table);
    for g in d2.support().chain(bundle.delta.support()) {
        if pairing.fibre(g).is_none() {
            return Err(Error::Inconsistent(format!(
                "`{}` in the support of Δ² is not a product of ball elements",
                table.display(g)
            )));
        }
    }
    let mut constraints = Vec::with_capacity(pairing.universe_size());
    for (g, pairs) in pairing.fibres() {
        constraints.push(Constraint {
            element: *g,
            label: table.display(*g),
            pairs: pairs.clone(),
            t: small(&d2.coeff(*g), "Δ²")?,
            u: small(&bundle.delta.coeff(*g), "Δ")?,
        });
    }
    let (st, su) = constraints
        .iter()
        .fold((0i64, 0i64), |(a, b), c| (a + c.t, b + c.u));
    if st != 0 || su != 0 {
        return Err(Error::Inconsistent(
            "targets are not in the augmentation ideal".into(),
        ));
    }
    Ok(SdpProblem {
        n: ball.len(),
        s_size: bundle.s_size,
        constraints,
    })
}
