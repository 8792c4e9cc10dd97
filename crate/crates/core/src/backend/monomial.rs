use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::word::{Alphabet, Letter};

use super::GroupBackend;

/// The monomial matrix `[(ζ^k_1, ..., ζ^k_n), σ]`: row `i` has the single
/// nonzero entry `ζ_m^{k_i}` in column `σ(i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub perm: Vec<u8>,
    pub exps: Vec<u16>,
}

/// The complex reflection group `G(m, p, n)` with its standard generators.
#[derive(Debug, Clone)]
pub struct MonomialGroup {
    m: u16,
    p: u16,
    n: usize,
    alphabet: Alphabet,
    gens: Vec<Monomial>,
}

impl MonomialGroup {
    /// Generators:
    /// `G(m,1,n)`: `[(ζ_m,1,..),id]` and the adjacent transpositions;
    /// `G(m,m,n)`: `[(ζ_m^-1,ζ_m,1,..),(1 2)]` and the transpositions;
    /// `G(m,p,n)`, `1<p<m`: `[(ζ_{m/p},1,..),id]`, `[(ζ_m^-1,ζ_m,..),(1 2)]`
    /// and the transpositions. Generators of order two count once in `S`.
    pub fn new(m: u16, p: u16, n: usize) -> Result<Self> {
        if m == 0 || p == 0 || m % p != 0 {
            return Err(Error::Group(format!("G({m},{p},{n}) needs p | m")));
        }
        if !(1..=32).contains(&n) {
            return Err(Error::Group(format!("G({m},{p},{n}): n out of range")));
        }
        let ident_perm: Vec<u8> = (0..n as u8).collect();
        let mut gens: Vec<(String, Monomial)> = Vec::new();
        if p < m {
            let mut exps = vec![0u16; n];
            exps[0] = p % m;
            gens.push((
                "t".into(),
                Monomial {
                    perm: ident_perm.clone(),
                    exps,
                },
            ));
        }
        if p > 1 && n >= 2 {
            let mut exps = vec![0u16; n];
            exps[0] = m - 1;
            exps[1] = 1 % m;
            let mut perm = ident_perm.clone();
            perm.swap(0, 1);
            gens.push(("u".into(), Monomial { perm, exps }));
        }
        for i in 0..n.saturating_sub(1) {
            let mut perm = ident_perm.clone();
            perm.swap(i, i + 1);
            gens.push((
                format!("s{}", i + 1),
                Monomial {
                    perm,
                    exps: vec![0; n],
                },
            ));
        }
        let mut g = MonomialGroup {
            m,
            p,
            n,
            alphabet: Alphabet::new(Vec::new(), Vec::new()),
            gens: Vec::new(),
        };
        let mut names = Vec::new();
        let mut inverse = Vec::new();
        let mut elems = Vec::new();
        for (name, x) in gens {
            let xi = g.invert(&x);
            let base = names.len() as Letter;
            if xi == x {
                names.push(name);
                inverse.push(base);
                elems.push(x);
            } else {
                names.push(name.clone());
                names.push(name.to_uppercase());
                inverse.push(base + 1);
                inverse.push(base);
                elems.push(x);
                elems.push(xi);
            }
        }
        if names.is_empty() {
            return Err(Error::Group(format!("G({m},{p},{n}) has no generators")));
        }
        g.alphabet = Alphabet::new(names, inverse);
        g.gens = elems;
        Ok(g)
    }

    pub fn params(&self) -> (u16, u16, usize) {
        (self.m, self.p, self.n)
    }

    /// Whether `x` satisfies the defining constraint `Σ k_j ≡ 0 (mod p)`.
    pub fn contains(&self, x: &Monomial) -> bool {
        let s: u32 = x.exps.iter().map(|&k| k as u32).sum();
        x.perm.len() == self.n && s % self.p as u32 == 0
    }

    /// The complex `n x n` matrix realised by `x`, row-major.
    pub fn realize(&self, x: &Monomial) -> Vec<Complex64> {
        let n = self.n;
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            let angle = 2.0 * std::f64::consts::PI * x.exps[i] as f64 / self.m as f64;
            out[i * n + x.perm[i] as usize] = Complex64::from_polar(1.0, angle);
        }
        out
    }
}

impl GroupBackend for MonomialGroup {
    type Elem = Monomial;

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn identity(&self) -> Monomial {
        Monomial {
            perm: (0..self.n as u8).collect(),
            exps: vec![0; self.n],
        }
    }

    fn generator(&self, s: Letter) -> Monomial {
        self.gens[s as usize].clone()
    }

    /// `[(a),σ]·[(b),τ] = [(a_i b_{σ(i)}), i ↦ τ(σ(i))]`, the matrix product.
    fn multiply(&self, x: &Monomial, y: &Monomial) -> Monomial {
        let perm = x.perm.iter().map(|&s| y.perm[s as usize]).collect();
        let exps = (0..self.n)
            .map(|i| (x.exps[i] + y.exps[x.perm[i] as usize]) % self.m)
            .collect();
        Monomial { perm, exps }
    }

    fn invert(&self, x: &Monomial) -> Monomial {
        // inverse has row σ(i) -> column i with entry conj(a_i)
        let mut perm = vec![0u8; self.n];
        let mut exps = vec![0u16; self.n];
        for i in 0..self.n {
            let j = x.perm[i] as usize;
            perm[j] = i as u8;
            exps[j] = (self.m - x.exps[i] % self.m) % self.m;
        }
        Monomial { perm, exps }
    }

    fn decides_equality(&self) -> bool {
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transposition_squared_is_identity() {
        let g = MonomialGroup::new(2, 1, 2).unwrap();
        let s1 = g.alphabet().lookup("s1").unwrap();
        assert_eq!(g.canonicalize(&[s1, s1]), g.identity());
        assert!(g.alphabet().is_self_inverse(s1));
    }

    #[test]
    fn generating_set_sizes() {
        // G(3,1,2): t, T, s1 ; G(3,3,2): u, s1 ; G(4,2,3): t (order 2), u, s1, s2
        assert_eq!(MonomialGroup::new(3, 1, 2).unwrap().symmetric_size(), 3);
        assert_eq!(MonomialGroup::new(3, 3, 2).unwrap().symmetric_size(), 2);
        assert_eq!(MonomialGroup::new(4, 2, 3).unwrap().symmetric_size(), 4);
        assert!(MonomialGroup::new(4, 3, 2).is_err());
    }

    #[test]
    fn constraint_is_preserved() {
        let g = MonomialGroup::new(6, 3, 3).unwrap();
        let mut x = g.identity();
        for s in [0u16, 2, 1, 3, 0, 2, 2] {
            x = g.multiply(&x, &g.generator(s % g.symmetric_size() as u16));
            assert!(g.contains(&x));
            assert!(g.contains(&g.invert(&x)));
        }
    }
}
