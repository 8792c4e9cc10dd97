//! Group backends: the ways a group's elements are represented and compared.
//!
//! All backends present the symmetric generating set `S` as letters
//! `0..|S|`, with an involution marking each letter's inverse. Equality of
//! canonical elements is always sound (equal elements are equal in the
//! group); it is complete for the matrix and monomial backends and for
//! presented groups whose rewriting system completed.

mod matrix;
mod monomial;
mod presented;

use std::fmt::Debug;
use std::hash::Hash;

use crate::word::{Alphabet, Letter, Word};

pub use matrix::{
    elementary_generators, Field, FieldMatrix, IntMatrix, Integers, MatrixGroup, MatrixRing,
    PrimeField,
};
pub use monomial::{Monomial, MonomialGroup};
pub use presented::{IdentificationStats, PresentedGroup};

/// A group with a distinguished symmetric generating set.
pub trait GroupBackend: Send + Sync {
    /// Canonical element representative.
    type Elem: Clone + Eq + Hash + Debug + Send + Sync;

    /// Names and inverse pairing of the generating letters.
    fn alphabet(&self) -> &Alphabet;

    fn identity(&self) -> Self::Elem;

    fn generator(&self, s: Letter) -> Self::Elem;

    fn multiply(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;

    fn invert(&self, x: &Self::Elem) -> Self::Elem;

    /// Whether equal group elements always get equal representatives.
    fn decides_equality(&self) -> bool;

    /// Canonical representative of the product of a word's letters.
    fn canonicalize(&self, word: &[Letter]) -> Self::Elem {
        let mut acc = self.identity();
        for &l in word {
            acc = self.multiply(&acc, &self.generator(l));
        }
        acc
    }

    /// A word that canonicalizes back to exactly `x`, when the
    /// representation itself is a word.
    fn representative_word(&self, _x: &Self::Elem) -> Option<Word> {
        None
    }

    fn symmetric_size(&self) -> usize {
        self.alphabet().len()
    }

    /// True when no generator is (provably) its own inverse in the group.
    ///
    /// Backends that cannot decide equality must answer `false` unless the
    /// claim is certain, since it selects the sharper residual penalty.
    fn involution_free(&self) -> bool {
        if !self.decides_equality() {
            return false;
        }
        (0..self.symmetric_size() as Letter).all(|s| {
            let g = self.generator(s);
            self.multiply(&g, &g) != self.identity()
        })
    }
}
