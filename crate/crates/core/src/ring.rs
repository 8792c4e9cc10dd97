//! Sparse group-ring elements over floats or exact rationals.

use std::collections::BTreeMap;
use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive};

use crate::backend::GroupBackend;
use crate::elements::{ElementId, ElementTable};
use crate::error::{Error, Result};
use crate::word::shortlex_cmp;

/// Coefficient type of a group-ring element: `f64` or [`BigRational`].
pub trait Scalar: Clone + Debug + Display + Num + Signed + Send + Sync {
    fn from_i64(v: i64) -> Self;
    fn to_f64(&self) -> f64;
}

impl Scalar for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// Finite formal sum `Σ r_g g` with no stored zero coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct RingElem<S> {
    terms: BTreeMap<ElementId, S>,
}

impl<S: Scalar> Default for RingElem<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar> RingElem<S> {
    pub fn zero() -> Self {
        RingElem {
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(g: ElementId, coeff: S) -> Self {
        let mut x = Self::zero();
        x.add_term(g, coeff);
        x
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (ElementId, S)>) -> Self {
        let mut x = Self::zero();
        for (g, c) in terms {
            x.add_term(g, c);
        }
        x
    }

    pub fn add_term(&mut self, g: ElementId, coeff: S) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&g) {
            Some(c) => {
                *c = c.clone() + coeff;
                if c.is_zero() {
                    self.terms.remove(&g);
                }
            }
            None => {
                self.terms.insert(g, coeff);
            }
        }
    }

    pub fn coeff(&self, g: ElementId) -> S {
        self.terms.get(&g).cloned().unwrap_or_else(S::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (ElementId, &S)> {
        self.terms.iter().map(|(g, c)| (*g, c))
    }

    pub fn support(&self) -> impl Iterator<Item = ElementId> + '_ {
        self.terms.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (g, c) in other.iter() {
            out.add_term(g, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (g, c) in other.iter() {
            out.add_term(g, -c.clone());
        }
        out
    }

    pub fn scale(&self, k: &S) -> Self {
        Self::from_terms(self.iter().map(|(g, c)| (g, c.clone() * k.clone())))
    }

    /// Coefficient sum, the ring homomorphism to scalars.
    pub fn augmentation(&self) -> S {
        self.terms.values().fold(S::zero(), |a, c| a + c.clone())
    }

    pub fn l1_norm(&self) -> S {
        self.terms.values().fold(S::zero(), |a, c| a + c.abs())
    }

    /// `(Σ r_g g)* = Σ r_g g⁻¹`.
    pub fn star<B: GroupBackend>(&self, table: &ElementTable<'_, B>) -> Self {
        Self::from_terms(self.iter().map(|(g, c)| (table.inv(g), c.clone())))
    }

    /// Convolution product; every product id is canonicalized on creation.
    pub fn mul<B: GroupBackend>(&self, other: &Self, table: &mut ElementTable<'_, B>) -> Self {
        let mut out = Self::zero();
        for (g, a) in self.iter() {
            for (h, b) in other.iter() {
                let gh = table.mul(g, h);
                out.add_term(gh, a.clone() * b.clone());
            }
        }
        out
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> RingElem<T> {
        RingElem::from_terms(self.iter().map(|(g, c)| (g, f(c))))
    }

    pub fn to_f64(&self) -> RingElem<f64> {
        self.map(|c| c.to_f64())
    }

    /// One `coefficient<TAB>word` line per term, sorted by shortlex word.
    pub fn debug_dump<B: GroupBackend>(&self, table: &ElementTable<'_, B>) -> String {
        let mut rows: Vec<(ElementId, &S)> = self.iter().collect();
        rows.sort_by(|a, b| shortlex_cmp(table.word(a.0), table.word(b.0)));
        let mut out = String::new();
        for (g, c) in rows {
            out.push_str(&format!("{}\t{}\n", c, table.display(g)));
        }
        out
    }
}

/// The unnormalized Laplacian `Δ = |S|·e − Σ_{s∈S} s` with its generating set.
#[derive(Debug, Clone)]
pub struct LaplacianBundle {
    pub delta: RingElem<BigRational>,
    pub generators: Vec<ElementId>,
    pub s_size: usize,
}

impl LaplacianBundle {
    pub fn delta_squared<B: GroupBackend>(
        &self,
        table: &mut ElementTable<'_, B>,
    ) -> RingElem<BigRational> {
        self.delta.mul(&self.delta, table)
    }
}

/// Builds `Δ` for the given symmetric multiset of generators.
pub fn laplacian<B: GroupBackend>(
    table: &ElementTable<'_, B>,
    generators: &[ElementId],
) -> Result<LaplacianBundle> {
    if generators.is_empty() {
        return Err(Error::NotSymmetric("empty generating set".into()));
    }
    let mut count: BTreeMap<ElementId, i64> = BTreeMap::new();
    for &s in generators {
        *count.entry(s).or_default() += 1;
    }
    for (&s, &k) in &count {
        let inv = table.inv(s);
        if count.get(&inv).copied().unwrap_or(0) != k {
            return Err(Error::NotSymmetric(format!(
                "inverse of `{}` missing",
                table.display(s)
            )));
        }
    }
    let mut delta = RingElem::monomial(
        table.identity(),
        BigRational::from_i64(generators.len() as i64),
    );
    for &s in generators {
        delta.add_term(s, -BigRational::one());
    }
    Ok(LaplacianBundle {
        delta,
        generators: generators.to_vec(),
        s_size: generators.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::PresentedGroup;
    use crate::presentation::parse_presentation;
    use crate::rewrite::RewriteBudget;
    use num_traits::Zero;

    fn free(k: usize) -> PresentedGroup {
        let names: Vec<String> = (0..k).map(|i| format!("x{i}")).collect();
        let spec = parse_presentation(&format!("gens: {}\n", names.join(" "))).unwrap();
        PresentedGroup::new(spec, RewriteBudget::default())
    }

    #[test]
    fn star_of_monomials() {
        let g = free(1);
        let mut t = ElementTable::new(&g);
        let a = t.generator(0);
        let x = RingElem::from_terms([(t.identity(), 2.0), (a, 3.0)]);
        let y = x.star(&t);
        assert_eq!(y.coeff(t.inv(a)), 3.0);
        assert_eq!(y.coeff(t.identity()), 2.0);
        assert_eq!(y.coeff(a), 0.0);
    }

    #[test]
    fn one_minus_s_times_adjoint() {
        let g = free(1);
        let mut t = ElementTable::new(&g);
        let s = t.generator(0);
        let e = t.identity();
        let x = RingElem::from_terms([(e, 1.0), (s, -1.0)]);
        let p = x.mul(&x.star(&t), &mut t);
        assert_eq!(p.len(), 3);
        assert_eq!(p.coeff(e), 2.0);
        assert_eq!(p.coeff(s), -1.0);
        assert_eq!(p.coeff(t.inv(s)), -1.0);
    }

    #[test]
    fn laplacian_invariants() {
        let g = free(3);
        let mut t = ElementTable::new(&g);
        let gens = t.generating_set();
        let b = laplacian(&t, &gens).unwrap();
        assert_eq!(b.s_size, 6);
        assert!(b.delta.augmentation().is_zero());
        assert_eq!(b.delta.star(&t), b.delta);
        let d2 = b.delta_squared(&mut t);
        assert!(d2.augmentation().is_zero());
        // |S|² + |S| on the identity over a free group
        assert_eq!(d2.coeff(t.identity()), BigRational::from_i64(42));
    }

    #[test]
    fn asymmetric_set_is_rejected() {
        let g = free(2);
        let mut t = ElementTable::new(&g);
        let a = t.generator(0);
        assert!(laplacian(&t, &[a]).is_err());
    }

    #[test]
    fn dump_is_sorted_by_word() {
        let g = free(1);
        let mut t = ElementTable::new(&g);
        let gens = t.generating_set();
        let b = laplacian(&t, &gens).unwrap();
        let dump = b.delta.debug_dump(&t);
        assert_eq!(dump, "2\te\n-1\tx0\n-1\tX0\n");
    }
}
