use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::word::{Alphabet, Letter};

use super::GroupBackend;

/// Coefficient ring of a matrix group.
pub trait MatrixRing: Clone + Debug + Send + Sync {
    type Entry: Clone + Eq + Hash + Debug + Send + Sync;

    fn zero(&self) -> Self::Entry;
    fn from_i64(&self, v: i64) -> Self::Entry;
    fn add(&self, a: &Self::Entry, b: &Self::Entry) -> Self::Entry;
    fn mul(&self, a: &Self::Entry, b: &Self::Entry) -> Self::Entry;
    fn is_zero(&self, a: &Self::Entry) -> bool;
    /// Inverse of a square row-major matrix, if it exists over the ring.
    fn invert(&self, m: &[Self::Entry], n: usize) -> Option<Vec<Self::Entry>>;
    fn tag(&self) -> Field;
}

/// Field tag of a matrix group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Integers,
    Prime(u32),
}

/// Rational integers with arbitrary precision entries.
#[derive(Debug, Clone, Copy, Default)]
pub struct Integers;

/// The prime field `F_p`.
#[derive(Debug, Clone, Copy)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if p < 2 || !(2..p).take_while(|d| d * d <= p).all(|d| p % d != 0) {
            return Err(Error::Group(format!("{p} is not prime")));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    fn inv(&self, a: u32) -> u32 {
        // a^(p-2)
        let p = self.p as u64;
        let (mut base, mut e, mut acc) = (a as u64 % p, p - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc as u32
    }
}

pub type IntMatrix = Vec<BigInt>;
pub type FieldMatrix = Vec<u32>;

impl MatrixRing for Integers {
    type Entry = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }

    fn from_i64(&self, v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }

    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }

    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }

    fn invert(&self, m: &[BigInt], n: usize) -> Option<Vec<BigInt>> {
        // Gauss-Jordan over Q, then require an integral result.
        let mut a: Vec<BigRational> = m.iter().map(|x| BigRational::from(x.clone())).collect();
        let mut inv: Vec<BigRational> = (0..n * n)
            .map(|k| {
                if k / n == k % n {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[r * n + col].is_zero())?;
            if piv != col {
                for c in 0..n {
                    a.swap(piv * n + c, col * n + c);
                    inv.swap(piv * n + c, col * n + c);
                }
            }
            let p = a[col * n + col].clone();
            for c in 0..n {
                a[col * n + c] = &a[col * n + c] / &p;
                inv[col * n + c] = &inv[col * n + c] / &p;
            }
            for r in 0..n {
                if r == col || a[r * n + col].is_zero() {
                    continue;
                }
                let f = a[r * n + col].clone();
                for c in 0..n {
                    let t = &f * &a[col * n + c];
                    a[r * n + c] -= t;
                    let t = &f * &inv[col * n + c];
                    inv[r * n + c] -= t;
                }
            }
        }
        inv.into_iter()
            .map(|q| q.is_integer().then(|| q.to_integer()))
            .collect()
    }

    fn tag(&self) -> Field {
        Field::Integers
    }
}

impl MatrixRing for PrimeField {
    type Entry = u32;

    fn zero(&self) -> u32 {
        0
    }

    fn from_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    fn add(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 + *b as u64) % self.p as u64) as u32
    }

    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.p as u64) as u32
    }

    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }

    fn invert(&self, m: &[u32], n: usize) -> Option<Vec<u32>> {
        let p = self.p as u64;
        let mut a = m.to_vec();
        let mut inv: Vec<u32> = (0..n * n).map(|k| (k / n == k % n) as u32).collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| a[r * n + col] != 0)?;
            if piv != col {
                for c in 0..n {
                    a.swap(piv * n + c, col * n + c);
                    inv.swap(piv * n + c, col * n + c);
                }
            }
            let pinv = self.inv(a[col * n + col]) as u64;
            for c in 0..n {
                a[col * n + c] = (a[col * n + c] as u64 * pinv % p) as u32;
                inv[col * n + c] = (inv[col * n + c] as u64 * pinv % p) as u32;
            }
            for r in 0..n {
                let f = a[r * n + col] as u64;
                if r == col || f == 0 {
                    continue;
                }
                for c in 0..n {
                    a[r * n + c] = ((a[r * n + c] as u64 + p * p - f * a[col * n + c] as u64) % p) as u32;
                    inv[r * n + c] =
                        ((inv[r * n + c] as u64 + p * p - f * inv[col * n + c] as u64) % p) as u32;
                }
            }
        }
        Some(inv)
    }

    fn tag(&self) -> Field {
        Field::Prime(self.p)
    }
}

/// A group generated by invertible `n x n` matrices over a ring.
#[derive(Debug, Clone)]
pub struct MatrixGroup<R: MatrixRing> {
    n: usize,
    ring: R,
    alphabet: Alphabet,
    gens: Vec<Vec<R::Entry>>,
}

impl<R: MatrixRing> MatrixGroup<R> {
    /// Validates invertibility and closure under inverses of the generators.
    pub fn new(n: usize, ring: R, alphabet: Alphabet, gens: Vec<Vec<R::Entry>>) -> Result<Self> {
        if gens.len() != alphabet.len() || gens.is_empty() {
            return Err(Error::Group("one matrix per generator symbol required".into()));
        }
        let g = MatrixGroup {
            n,
            ring,
            alphabet,
            gens,
        };
        let id = g.identity();
        for (s, m) in g.gens.iter().enumerate() {
            if m.len() != n * n {
                return Err(Error::Group(format!("generator {s} is not {n}x{n}")));
            }
            let inv = g
                .ring
                .invert(m, n)
                .ok_or_else(|| Error::Group(format!("generator `{}` is not invertible", g.alphabet.name(s as Letter))))?;
            let partner = &g.gens[g.alphabet.inverse(s as Letter) as usize];
            if *partner != inv || g.multiply(m, partner) != id {
                return Err(Error::NotSymmetric(format!(
                    "inverse of `{}` is not `{}`",
                    g.alphabet.name(s as Letter),
                    g.alphabet.name(g.alphabet.inverse(s as Letter))
                )));
            }
        }
        Ok(g)
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }
}

/// The elementary matrices `I ± E_ij` (`i != j`) over `ring`, ordered
/// `e12, E12, e13, E13, ...`; `E_ij` names the inverse of `e_ij`. Over
/// `F_2` each is an involution and appears once.
pub fn elementary_generators<R: MatrixRing>(n: usize, ring: &R) -> (Alphabet, Vec<Vec<R::Entry>>) {
    let mut names = Vec::new();
    let mut inverse = Vec::new();
    let mut gens = Vec::new();
    let unit = |i: usize, j: usize, v: i64| {
        (0..n * n)
            .map(|k| {
                let (r, c) = (k / n, k % n);
                if r == c {
                    ring.from_i64(1)
                } else if (r, c) == (i, j) {
                    ring.from_i64(v)
                } else {
                    ring.zero()
                }
            })
            .collect::<Vec<_>>()
    };
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let plus = unit(i, j, 1);
            let minus = unit(i, j, -1);
            let base = names.len() as Letter;
            if plus == minus {
                names.push(format!("e{}{}", i + 1, j + 1));
                inverse.push(base);
                gens.push(plus);
            } else {
                names.push(format!("e{}{}", i + 1, j + 1));
                names.push(format!("E{}{}", i + 1, j + 1));
                inverse.push(base + 1);
                inverse.push(base);
                gens.push(plus);
                gens.push(minus);
            }
        }
    }
    (Alphabet::new(names, inverse), gens)
}

impl<R: MatrixRing> GroupBackend for MatrixGroup<R> {
    type Elem = Vec<R::Entry>;

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn identity(&self) -> Self::Elem {
        let n = self.n;
        (0..n * n)
            .map(|k| {
                if k / n == k % n {
                    self.ring.from_i64(1)
                } else {
                    self.ring.zero()
                }
            })
            .collect()
    }

    fn generator(&self, s: Letter) -> Self::Elem {
        self.gens[s as usize].clone()
    }

    fn multiply(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        let n = self.n;
        let mut out = vec![self.ring.zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = &x[i * n + k];
                if self.ring.is_zero(a) {
                    continue;
                }
                for j in 0..n {
                    let b = &y[k * n + j];
                    if self.ring.is_zero(b) {
                        continue;
                    }
                    out[i * n + j] = self.ring.add(&out[i * n + j], &self.ring.mul(a, b));
                }
            }
        }
        out
    }

    fn invert(&self, x: &Self::Elem) -> Self::Elem {
        self.ring
            .invert(x, self.n)
            .expect("group elements are products of invertible generators")
    }

    fn decides_equality(&self) -> bool {
        true
    }
}
