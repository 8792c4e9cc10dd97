//! Balls in the word metric and the pairing table `(u, v) ↦ u⁻¹v`.

use std::collections::HashMap;

use crate::backend::GroupBackend;
use crate::elements::{ElementId, ElementTable};
use crate::error::{Error, Result};
use crate::word::{Letter, Word};

/// Elements of word length at most `radius`: identity first, then by
/// length, then by the shortlex order of their least words.
#[derive(Debug, Clone)]
pub struct Ball {
    radius: usize,
    elements: Vec<ElementId>,
    words: Vec<Word>,
    position: HashMap<ElementId, usize>,
}

impl Ball {
    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[ElementId] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> ElementId {
        self.elements[i]
    }

    /// Least word reaching the `i`-th element during enumeration.
    pub fn word(&self, i: usize) -> &[Letter] {
        &self.words[i]
    }

    pub fn position(&self, g: ElementId) -> Option<usize> {
        self.position.get(&g).copied()
    }

    pub fn contains(&self, g: ElementId) -> bool {
        self.position.contains_key(&g)
    }

    /// A ball given by explicit words, e.g. read back from a certificate.
    /// Words naming the same element are rejected.
    pub fn from_words<B: GroupBackend>(
        table: &mut ElementTable<'_, B>,
        radius: usize,
        words: Vec<Word>,
    ) -> Result<Ball> {
        let mut ball = Ball {
            radius,
            elements: Vec::with_capacity(words.len()),
            words: Vec::with_capacity(words.len()),
            position: HashMap::new(),
        };
        for w in words {
            let id = table.canonicalize(&w);
            if ball.position.insert(id, ball.elements.len()).is_some() {
                return Err(Error::Inconsistent(format!(
                    "ball word `{}` repeats an element",
                    table.group().alphabet().display(&w)
                )));
            }
            ball.elements.push(id);
            ball.words.push(w);
        }
        Ok(ball)
    }
}

/// Breadth-first enumeration, deduplicating through canonical ids.
///
/// Since each layer is produced in order from the previous one, the first
/// word reaching an element is its shortlex-least word.
pub fn enumerate_ball<B: GroupBackend>(table: &mut ElementTable<'_, B>, radius: usize) -> Ball {
    let group = table.group();
    let k = group.symmetric_size() as Letter;
    let gens: Vec<B::Elem> = (0..k).map(|s| group.generator(s)).collect();
    let e = table.identity();
    let mut ball = Ball {
        radius,
        elements: vec![e],
        words: vec![Vec::new()],
        position: HashMap::from([(e, 0)]),
    };
    let mut frontier = 0..1;
    for _ in 0..radius {
        let start = ball.elements.len();
        for i in frontier.clone() {
            for s in 0..k {
                let x = group.multiply(table.elem(ball.elements[i]), &gens[s as usize]);
                let mut w = ball.words[i].clone();
                w.push(s);
                let id = table.intern(x, &w);
                if let std::collections::hash_map::Entry::Vacant(v) = ball.position.entry(id) {
                    v.insert(ball.elements.len());
                    ball.elements.push(id);
                    ball.words.push(w);
                }
            }
        }
        frontier = start..ball.elements.len();
        if frontier.is_empty() {
            break;
        }
    }
    ball
}

/// For each product `g = u⁻¹v` of ball elements, the ordered index pairs
/// `(i, j)` with `u_i⁻¹ u_j = g`. Fibres appear in order of first
/// occurrence in a row-major scan, so the layout is deterministic.
#[derive(Debug, Clone)]
pub struct PairingTable {
    n: usize,
    products: Vec<ElementId>,
    fibres: Vec<(ElementId, Vec<(u32, u32)>)>,
    fibre_of: HashMap<ElementId, usize>,
}

impl PairingTable {
    pub fn build<B: GroupBackend>(table: &mut ElementTable<'_, B>, ball: &Ball) -> Self {
        let n = ball.len();
        let mut products = Vec::with_capacity(n * n);
        let mut fibres: Vec<(ElementId, Vec<(u32, u32)>)> = Vec::new();
        let mut fibre_of = HashMap::new();
        for i in 0..n {
            let ui = table.inv(ball.element(i));
            for j in 0..n {
                let g = table.mul(ui, ball.element(j));
                products.push(g);
                let f = *fibre_of.entry(g).or_insert_with(|| {
                    fibres.push((g, Vec::new()));
                    fibres.len() - 1
                });
                fibres[f].1.push((i as u32, j as u32));
            }
        }
        PairingTable {
            n,
            products,
            fibres,
            fibre_of,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `u_i⁻¹ u_j`.
    pub fn product(&self, i: usize, j: usize) -> ElementId {
        self.products[i * self.n + j]
    }

    pub fn fibres(&self) -> &[(ElementId, Vec<(u32, u32)>)] {
        &self.fibres
    }

    pub fn fibre(&self, g: ElementId) -> Option<&[(u32, u32)]> {
        self.fibre_of.get(&g).map(|&f| self.fibres[f].1.as_slice())
    }

    /// Number of distinct products, i.e. the size of the pairing universe.
    pub fn universe_size(&self) -> usize {
        self.fibres.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::PresentedGroup;
    use crate::presentation::parse_presentation;
    use crate::rewrite::RewriteBudget;

    fn z3() -> PresentedGroup {
        PresentedGroup::new(
            parse_presentation("gens: a\nrel: a^3\n").unwrap(),
            RewriteBudget::default(),
        )
    }

    #[test]
    fn cyclic_ball_and_pairing() {
        let g = z3();
        let mut t = ElementTable::new(&g);
        let b0 = enumerate_ball(&mut t, 0);
        assert_eq!(b0.len(), 1);
        let b = enumerate_ball(&mut t, 1);
        assert_eq!(b.len(), 3);
        assert_eq!(b.element(0), t.identity());
        let a = t.generator(0);
        let a2 = t.mul(a, a);
        let p = PairingTable::build(&mut t, &b);
        let (ia, ia2) = (b.position(a).unwrap(), b.position(a2).unwrap());
        assert_eq!(p.product(ia, ia2), a);
        for i in 0..b.len() {
            assert_eq!(p.product(i, i), t.identity());
        }
        assert_eq!(enumerate_ball(&mut t, 5).len(), 3);
    }

    #[test]
    fn free_group_ball_sizes() {
        let g = PresentedGroup::new(
            parse_presentation("gens: a b c\n").unwrap(),
            RewriteBudget::default(),
        );
        let mut t = ElementTable::new(&g);
        assert_eq!(enumerate_ball(&mut t, 1).len(), 7);
        assert_eq!(enumerate_ball(&mut t, 2).len(), 1 + 6 + 30);
    }
}
