//! Letters, words and the symmetric alphabet `S` they are written in.

use std::cmp::Ordering;
use std::fmt;

/// Index of a symbol of the symmetric generating set.
pub type Letter = u16;

/// A word over the symmetric generating set, read left to right.
pub type Word = Vec<Letter>;

/// Shortlex order: shorter words first, ties broken by letter order.
pub fn shortlex_cmp(a: &[Letter], b: &[Letter]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// Named symbols together with the involution `s -> s^-1`.
///
/// A symbol whose inverse is itself models a self-inverse generator and is
/// counted once in `S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
    inverse: Vec<Letter>,
}

impl Alphabet {
    /// Builds an alphabet; `inverse` must be an involution on `0..names.len()`.
    pub fn new(names: Vec<String>, inverse: Vec<Letter>) -> Self {
        assert_eq!(names.len(), inverse.len());
        for (i, &j) in inverse.iter().enumerate() {
            assert_eq!(
                inverse[j as usize] as usize, i,
                "inverse map must be an involution"
            );
        }
        Alphabet { names, inverse }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, l: Letter) -> &str {
        &self.names[l as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn inverse(&self, l: Letter) -> Letter {
        self.inverse[l as usize]
    }

    pub fn inverse_map(&self) -> &[Letter] {
        &self.inverse
    }

    pub fn is_self_inverse(&self, l: Letter) -> bool {
        self.inverse[l as usize] == l
    }

    pub fn lookup(&self, name: &str) -> Option<Letter> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| i as Letter)
    }

    /// The formal inverse of a word: reversed, each letter inverted.
    pub fn invert_word(&self, w: &[Letter]) -> Word {
        w.iter().rev().map(|&l| self.inverse(l)).collect()
    }

    /// Cancels adjacent `s s^-1` pairs.
    pub fn free_reduce(&self, w: &[Letter]) -> Word {
        let mut out: Word = Vec::with_capacity(w.len());
        for &l in w {
            if out.last().is_some_and(|&p| self.inverse(p) == l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        out
    }

    pub fn display<'a>(&'a self, w: &'a [Letter]) -> WordDisplay<'a> {
        WordDisplay { alphabet: self, word: w }
    }

    /// Parses the space separated form produced by [`Alphabet::display`].
    pub fn parse_word(&self, text: &str) -> Option<Word> {
        let text = text.trim();
        if text == "e" {
            return Some(Vec::new());
        }
        text.split_whitespace().map(|t| self.lookup(t)).collect()
    }
}

/// Space separated symbol names; the empty word prints as `e`.
pub struct WordDisplay<'a> {
    alphabet: &'a Alphabet,
    word: &'a [Letter],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("e");
        }
        for (i, &l) in self.word.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(self.alphabet.name(l))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(
            vec!["a".into(), "A".into(), "s".into()],
            vec![1, 0, 2],
        )
    }

    #[test]
    fn shortlex_orders_by_length_first() {
        assert_eq!(shortlex_cmp(&[2], &[0, 0]), Ordering::Less);
        assert_eq!(shortlex_cmp(&[0, 1], &[0, 2]), Ordering::Less);
        assert_eq!(shortlex_cmp(&[], &[]), Ordering::Equal);
    }

    #[test]
    fn free_reduction_and_inverse() {
        let a = ab();
        assert_eq!(a.free_reduce(&[0, 2, 2, 1]), Vec::<Letter>::new());
        assert_eq!(a.invert_word(&[0, 2]), vec![2, 1]);
        assert_eq!(a.display(&[0, 1, 2]).to_string(), "a A s");
        assert_eq!(a.parse_word("a s"), Some(vec![0, 2]));
        assert_eq!(a.parse_word("e"), Some(vec![]));
    }
}
