use std::collections::{BTreeSet, HashMap};

use crate::presentation::PresentationSpec;
use crate::rewrite::{bounded_completion, RewriteBudget, RewriteSystem};
use crate::word::{shortlex_cmp, Alphabet, Letter, Word};

use super::GroupBackend;

/// Summary of how equality of words is decided for a presented group.
#[derive(Debug, Clone, Default, PartialEq, Eq, serde::Serialize)]
pub struct IdentificationStats {
    pub rules: usize,
    pub complete: bool,
    /// Extra identifications found by the ball closure.
    pub closure_merges: usize,
    pub closure_radius: usize,
}

/// A finitely presented group with elements as shortlex normal forms.
#[derive(Debug, Clone)]
pub struct PresentedGroup {
    spec: PresentationSpec,
    system: RewriteSystem,
    /// normal form -> class representative, from the ball closure
    merges: HashMap<Word, Word>,
    stats: IdentificationStats,
}

impl PresentedGroup {
    pub fn new(spec: PresentationSpec, budget: RewriteBudget) -> Self {
        let system = bounded_completion(&spec, budget);
        let stats = IdentificationStats {
            rules: system.rule_count(),
            complete: system.is_complete(),
            ..Default::default()
        };
        PresentedGroup {
            spec,
            system,
            merges: HashMap::new(),
            stats,
        }
    }

    pub fn spec(&self) -> &PresentationSpec {
        &self.spec
    }

    pub fn rewrite_system(&self) -> &RewriteSystem {
        &self.system
    }

    pub fn stats(&self) -> &IdentificationStats {
        &self.stats
    }

    /// Normal form under the rewriting system, before closure merges.
    pub fn normal_form(&self, word: &[Letter]) -> Word {
        self.system.reduce(&self.spec.alphabet().free_reduce(word))
    }

    fn representative(&self, nf: Word) -> Word {
        match self.merges.get(&nf) {
            Some(r) => r.clone(),
            None => nf,
        }
    }

    /// Refines identification inside the ball of the given radius.
    ///
    /// Builds the partial Cayley graph on the normal forms of words of
    /// length at most `radius`, then repeatedly scans every relator from
    /// every vertex, merging vertices (coincidences) and filling single
    /// missing edges (deductions) until nothing changes. Every merge is a
    /// consequence of the relators, so the refined identification stays
    /// sound. A complete rewriting system makes this a no-op.
    pub fn with_ball_closure(mut self, radius: usize) -> Self {
        if self.system.is_complete() {
            return self;
        }
        let alphabet = self.spec.alphabet().clone();
        let k = alphabet.len();

        // Vertices: BFS over normal forms.
        let mut vertices: Vec<Word> = vec![Vec::new()];
        let mut index: HashMap<Word, usize> = HashMap::new();
        index.insert(Vec::new(), 0);
        let mut frontier = vec![0usize];
        for _ in 0..radius {
            let mut next = Vec::new();
            for &v in &frontier {
                for s in 0..k as Letter {
                    let mut w = vertices[v].clone();
                    w.push(s);
                    let nf = self.normal_form(&w);
                    if !index.contains_key(&nf) {
                        index.insert(nf.clone(), vertices.len());
                        next.push(vertices.len());
                        vertices.push(nf);
                    }
                }
            }
            frontier = next;
        }
        let nv = vertices.len();

        let mut cg = Coset::new(nv, k, alphabet.inverse_map().to_vec());
        for v in 0..nv {
            for s in 0..k {
                let mut w = vertices[v].clone();
                w.push(s as Letter);
                if let Some(&u) = index.get(&self.normal_form(&w)) {
                    cg.define(v, s, u);
                }
            }
        }
        cg.process_coincidences();

        let mut cycles: BTreeSet<Word> = BTreeSet::new();
        for r in self.spec.relators() {
            let r = alphabet.free_reduce(r);
            if r.is_empty() {
                continue;
            }
            for w in [r.clone(), alphabet.invert_word(&r)] {
                for i in 0..w.len() {
                    let mut rot = w[i..].to_vec();
                    rot.extend_from_slice(&w[..i]);
                    cycles.insert(rot);
                }
            }
        }
        let cycles: Vec<Word> = cycles.into_iter().collect();

        loop {
            let before = cg.changes;
            for v in 0..nv {
                if cg.find(v) != v {
                    continue;
                }
                for c in &cycles {
                    cg.scan(v, c);
                    cg.process_coincidences();
                    if cg.find(v) != v {
                        break;
                    }
                }
            }
            if cg.changes == before {
                break;
            }
        }

        // Representative per class: shortlex-least vertex word.
        let mut rep: HashMap<usize, usize> = HashMap::new();
        for v in 0..nv {
            let root = cg.find(v);
            let e = rep.entry(root).or_insert(v);
            if shortlex_cmp(&vertices[v], &vertices[*e]).is_lt() {
                *e = v;
            }
        }
        let mut merges = HashMap::new();
        for v in 0..nv {
            let r = rep[&cg.find(v)];
            if r != v {
                merges.insert(vertices[v].clone(), vertices[r].clone());
            }
        }
        self.stats.closure_merges = merges.len();
        self.stats.closure_radius = radius;
        self.merges = merges;
        self
    }
}

/// Partial coset table over a fixed vertex set, with union-find classes.
struct Coset {
    parent: Vec<usize>,
    table: Vec<Vec<Option<usize>>>,
    inverse: Vec<Letter>,
    queue: Vec<(usize, usize)>,
    changes: usize,
}

impl Coset {
    fn new(n: usize, k: usize, inverse: Vec<Letter>) -> Self {
        Coset {
            parent: (0..n).collect(),
            table: vec![vec![None; k]; n],
            inverse,
            queue: Vec::new(),
            changes: 0,
        }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn edge(&mut self, v: usize, s: usize) -> Option<usize> {
        let v = self.find(v);
        let t = self.table[v][s]?;
        Some(self.find(t))
    }

    fn define(&mut self, v: usize, s: usize, u: usize) {
        let v = self.find(v);
        let u = self.find(u);
        let si = self.inverse[s] as usize;
        match self.table[v][s].map(|t| self.find(t)) {
            Some(t) if t != u => self.queue.push((t, u)),
            Some(_) => {}
            None => {
                self.table[v][s] = Some(u);
                self.changes += 1;
            }
        }
        match self.table[u][si].map(|t| self.find(t)) {
            Some(t) if t != v => self.queue.push((t, v)),
            Some(_) => {}
            None => {
                self.table[u][si] = Some(v);
                self.changes += 1;
            }
        }
    }

    fn process_coincidences(&mut self) {
        while let Some((a, b)) = self.queue.pop() {
            let a = self.find(a);
            let b = self.find(b);
            if a == b {
                continue;
            }
            let (keep, gone) = if a < b { (a, b) } else { (b, a) };
            self.parent[gone] = keep;
            self.changes += 1;
            let row = std::mem::take(&mut self.table[gone]);
            for (s, t) in row.into_iter().enumerate() {
                if let Some(t) = t {
                    self.define(keep, s, t);
                }
            }
        }
    }

    /// Scans cycle `c` from vertex `v`: forwards and backwards as far as the
    /// table allows; closes the gap with a deduction or a coincidence.
    fn scan(&mut self, v: usize, c: &[Letter]) {
        let mut f = self.find(v);
        let mut i = 0;
        while i < c.len() {
            match self.edge(f, c[i] as usize) {
                Some(t) => {
                    f = t;
                    i += 1;
                }
                None => break,
            }
        }
        if i == c.len() {
            let v = self.find(v);
            if f != v {
                self.queue.push((f, v));
            }
            return;
        }
        let mut b = self.find(v);
        let mut j = c.len();
        while j > i {
            let inv = self.inverse[c[j - 1] as usize] as usize;
            match self.edge(b, inv) {
                Some(t) => {
                    b = t;
                    j -= 1;
                }
                None => break,
            }
        }
        if j == i {
            if f != b {
                self.queue.push((f, b));
            }
        } else if j == i + 1 {
            self.define(f, c[i] as usize, b);
        }
    }
}

impl GroupBackend for PresentedGroup {
    type Elem = Word;

    fn alphabet(&self) -> &Alphabet {
        self.spec.alphabet()
    }

    fn identity(&self) -> Word {
        Vec::new()
    }

    fn generator(&self, s: Letter) -> Word {
        self.canonicalize(&[s])
    }

    fn multiply(&self, x: &Word, y: &Word) -> Word {
        let mut w = x.clone();
        w.extend_from_slice(y);
        self.canonicalize(&w)
    }

    fn invert(&self, x: &Word) -> Word {
        self.canonicalize(&self.spec.alphabet().invert_word(x))
    }

    fn decides_equality(&self) -> bool {
        self.system.is_complete()
    }

    fn canonicalize(&self, word: &[Letter]) -> Word {
        self.representative(self.normal_form(word))
    }

    fn representative_word(&self, x: &Word) -> Option<Word> {
        Some(x.clone())
    }
}
