//! Interning of canonical group elements into dense [`ElementId`] handles.

use std::collections::HashMap;
use std::fmt;

use crate::backend::GroupBackend;
use crate::word::{shortlex_cmp, Letter, Word};

/// Handle of a canonical group element inside one [`ElementTable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementId(pub u32);

impl ElementId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Canonical elements seen so far, each with the shortlex-least known word
/// expressing it. The word length is an upper bound on the true word
/// length; the identity is always `ElementId(0)` with the empty word.
#[derive(Debug, Clone)]
pub struct ElementTable<'g, B: GroupBackend> {
    group: &'g B,
    elems: Vec<B::Elem>,
    words: Vec<Word>,
    inverse: Vec<ElementId>,
    index: HashMap<B::Elem, ElementId>,
}

impl<'g, B: GroupBackend> ElementTable<'g, B> {
    pub fn new(group: &'g B) -> Self {
        let mut t = ElementTable {
            group,
            elems: Vec::new(),
            words: Vec::new(),
            inverse: Vec::new(),
            index: HashMap::new(),
        };
        let e = group.identity();
        t.index.insert(e.clone(), ElementId(0));
        t.elems.push(e);
        t.words.push(Vec::new());
        t.inverse.push(ElementId(0));
        t
    }

    pub fn group(&self) -> &'g B {
        self.group
    }

    pub fn identity(&self) -> ElementId {
        ElementId(0)
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn get(&self, elem: &B::Elem) -> Option<ElementId> {
        self.index.get(elem).copied()
    }

    pub fn elem(&self, id: ElementId) -> &B::Elem {
        &self.elems[id.index()]
    }

    pub fn word(&self, id: ElementId) -> &[Letter] {
        &self.words[id.index()]
    }

    /// Recorded word length (length of the stored word).
    pub fn word_len(&self, id: ElementId) -> usize {
        self.words[id.index()].len()
    }

    pub fn inv(&self, id: ElementId) -> ElementId {
        self.inverse[id.index()]
    }

    fn improve(&mut self, id: ElementId, word: &[Letter]) {
        if shortlex_cmp(word, &self.words[id.index()]).is_lt() {
            self.words[id.index()] = word.to_vec();
            let inv = self.inverse[id.index()];
            let iw = self.group.alphabet().invert_word(word);
            if self.inverse[inv.index()] == id && shortlex_cmp(&iw, &self.words[inv.index()]).is_lt() {
                self.words[inv.index()] = iw;
            }
        }
    }

    /// Interns `elem`, known to be expressed by `word`.
    pub fn intern(&mut self, elem: B::Elem, word: &[Letter]) -> ElementId {
        if let Some(&id) = self.index.get(&elem) {
            self.improve(id, word);
            return id;
        }
        let inv_elem = self.group.invert(&elem);
        let inv_word = self.group.alphabet().invert_word(word);
        let id = ElementId(self.elems.len() as u32);
        self.index.insert(elem.clone(), id);
        self.elems.push(elem);
        self.words.push(word.to_vec());
        if let Some(&inv) = self.index.get(&inv_elem) {
            self.inverse.push(inv);
            self.improve(inv, &inv_word);
        } else if inv_elem == self.elems[id.index()] {
            self.inverse.push(id);
        } else {
            let inv = ElementId(self.elems.len() as u32);
            self.inverse.push(inv);
            self.index.insert(inv_elem.clone(), inv);
            self.elems.push(inv_elem);
            self.words.push(inv_word);
            self.inverse.push(id);
        }
        id
    }

    pub fn canonicalize(&mut self, word: &[Letter]) -> ElementId {
        let e = self.group.canonicalize(word);
        let w = self.group.alphabet().free_reduce(word);
        self.intern(e, &w)
    }

    pub fn generator(&mut self, s: Letter) -> ElementId {
        let e = self.group.generator(s);
        self.intern(e, &[s])
    }

    pub fn mul(&mut self, a: ElementId, b: ElementId) -> ElementId {
        let e = self.group.multiply(&self.elems[a.index()], &self.elems[b.index()]);
        if let Some(&id) = self.index.get(&e) {
            return id;
        }
        let mut w = self.words[a.index()].clone();
        w.extend_from_slice(&self.words[b.index()]);
        let w = self.group.alphabet().free_reduce(&w);
        self.intern(e, &w)
    }

    /// Symmetric generating set as ids (one per letter, with repetition
    /// if two letters name the same element).
    pub fn generating_set(&mut self) -> Vec<ElementId> {
        (0..self.group.symmetric_size() as Letter)
            .map(|s| self.generator(s))
            .collect()
    }

    /// A word whose canonical form is exactly this element: the backend's
    /// own word if it has one, else the recorded word.
    pub fn stable_word(&self, id: ElementId) -> Word {
        self.group
            .representative_word(self.elem(id))
            .unwrap_or_else(|| self.words[id.index()].clone())
    }

    pub fn display(&self, id: ElementId) -> String {
        self.group
            .alphabet()
            .display(&self.words[id.index()])
            .to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::MonomialGroup;

    #[test]
    fn inverse_pairs_share_length() {
        let g = MonomialGroup::new(3, 1, 3).unwrap();
        let mut t = ElementTable::new(&g);
        let x = t.canonicalize(&[0, 2, 3, 0]);
        let xi = t.inv(x);
        assert_eq!(t.word_len(x), t.word_len(xi));
        assert_eq!(t.inv(xi), x);
        assert_eq!(t.mul(x, xi), t.identity());
        assert_eq!(t.word_len(t.identity()), 0);
    }
}
