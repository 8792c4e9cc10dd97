//! Shortlex Knuth–Bendix completion with rule-count and rule-length caps.
//!
//! Every rule is an equation derived from the relators and free reductions,
//! so reducing two words to the same normal form always proves them equal in
//! the group. When completion finishes inside the budget the system is
//! confluent and normal forms are canonical; otherwise `complete` is false
//! and distinct normal forms may still name the same element.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use crate::presentation::PresentationSpec;
use crate::word::{shortlex_cmp, Alphabet, Letter, Word};

/// Caps on the completion procedure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RewriteBudget {
    pub max_rules: usize,
    pub max_rule_len: usize,
}

impl Default for RewriteBudget {
    fn default() -> Self {
        RewriteBudget {
            max_rules: 20_000,
            max_rule_len: 40,
        }
    }
}

/// Reversed-lhs trie used to find a rule whose left side is a suffix.
#[derive(Debug, Clone, Default)]
struct SuffixTrie {
    // children stored sparsely: alphabets are small
    children: Vec<Vec<(Letter, u32)>>,
    terminal: Vec<Option<u32>>,
}

impl SuffixTrie {
    fn new() -> Self {
        SuffixTrie {
            children: vec![Vec::new()],
            terminal: vec![None],
        }
    }

    fn child(&self, node: usize, l: Letter) -> Option<usize> {
        self.children[node]
            .iter()
            .find(|(c, _)| *c == l)
            .map(|&(_, n)| n as usize)
    }

    fn insert(&mut self, lhs: &[Letter], rule: u32) {
        let mut node = 0;
        for &l in lhs.iter().rev() {
            node = match self.child(node, l) {
                Some(n) => n,
                None => {
                    let n = self.children.len();
                    self.children.push(Vec::new());
                    self.terminal.push(None);
                    self.children[node].push((l, n as u32));
                    n
                }
            };
        }
        self.terminal[node] = Some(rule);
    }

    fn remove(&mut self, lhs: &[Letter]) {
        let mut node = 0;
        for &l in lhs.iter().rev() {
            match self.child(node, l) {
                Some(n) => node = n,
                None => return,
            }
        }
        self.terminal[node] = None;
    }

    /// Shortest rule whose lhs is a suffix of `w`, with its length.
    fn match_suffix(&self, w: &[Letter]) -> Option<(u32, usize)> {
        let mut node = 0;
        for (k, &l) in w.iter().rev().enumerate() {
            node = self.child(node, l)?;
            if let Some(r) = self.terminal[node] {
                return Some((r, k + 1));
            }
        }
        None
    }
}

#[derive(Debug, Clone)]
struct Rule {
    lhs: Word,
    rhs: Word,
    alive: bool,
}

/// A shortlex rewriting system for a presented group.
#[derive(Debug, Clone)]
pub struct RewriteSystem {
    alphabet: Alphabet,
    rules: Vec<Rule>,
    trie: SuffixTrie,
    complete: bool,
}

impl RewriteSystem {
    /// Whether completion finished within budget (normal forms canonical).
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn rules(&self) -> impl Iterator<Item = (&[Letter], &[Letter])> {
        self.rules
            .iter()
            .filter(|r| r.alive)
            .map(|r| (r.lhs.as_slice(), r.rhs.as_slice()))
    }

    pub fn rule_count(&self) -> usize {
        self.rules.iter().filter(|r| r.alive).count()
    }

    /// Rewrites `w` until no left-hand side occurs in it.
    pub fn reduce(&self, w: &[Letter]) -> Word {
        let mut out: Word = Vec::with_capacity(w.len());
        let mut input: Word = w.iter().rev().copied().collect();
        while let Some(c) = input.pop() {
            out.push(c);
            if let Some((r, len)) = self.trie.match_suffix(&out) {
                out.truncate(out.len() - len);
                input.extend(self.rules[r as usize].rhs.iter().rev());
            }
        }
        out
    }

    /// Like [`RewriteSystem::reduce`] but also records each rule applied.
    pub fn reduce_traced(&self, w: &[Letter]) -> (Word, Vec<RewriteStep>) {
        let mut out: Word = Vec::with_capacity(w.len());
        let mut input: Word = w.iter().rev().copied().collect();
        let mut steps = Vec::new();
        while let Some(c) = input.pop() {
            out.push(c);
            if let Some((r, len)) = self.trie.match_suffix(&out) {
                let start = out.len() - len;
                let mut before: Word = out.clone();
                before.extend(input.iter().rev());
                out.truncate(start);
                let rule = &self.rules[r as usize];
                input.extend(rule.rhs.iter().rev());
                steps.push(RewriteStep {
                    before,
                    position: start,
                    lhs: rule.lhs.clone(),
                    rhs: rule.rhs.clone(),
                });
            }
        }
        (out, steps)
    }

    fn is_reducible(&self, w: &[Letter]) -> bool {
        (1..=w.len()).any(|end| self.trie.match_suffix(&w[..end]).is_some())
    }
}

/// One rewrite `before[position..position+|lhs|] = lhs  ->  rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteStep {
    pub before: Word,
    pub position: usize,
    pub lhs: Word,
    pub rhs: Word,
}

#[derive(Debug, PartialEq, Eq)]
struct Pending {
    size: usize,
    seq: usize,
    a: Word,
    b: Word,
}

impl Ord for Pending {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on (size, seq)
        other
            .size
            .cmp(&self.size)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

impl PartialOrd for Pending {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct Completion {
    sys: RewriteSystem,
    budget: RewriteBudget,
    pending: BinaryHeap<Pending>,
    seq: usize,
    dropped: bool,
    /// rule ids keyed by a proper prefix of their lhs
    by_prefix: HashMap<Word, Vec<u32>>,
    /// rule ids keyed by a proper suffix of their lhs
    by_suffix: HashMap<Word, Vec<u32>>,
}

impl Completion {
    fn push(&mut self, a: Word, b: Word) {
        self.seq += 1;
        self.pending.push(Pending {
            size: a.len().max(b.len()),
            seq: self.seq,
            a,
            b,
        });
    }

    fn alive_count(&self) -> usize {
        self.sys.rules.iter().filter(|r| r.alive).count()
    }

    fn add_equation(&mut self, a: &[Letter], b: &[Letter]) -> bool {
        let a = self.sys.reduce(a);
        let b = self.sys.reduce(b);
        let (lhs, rhs) = match shortlex_cmp(&a, &b) {
            Ordering::Equal => return false,
            Ordering::Greater => (a, b),
            Ordering::Less => (b, a),
        };
        if lhs.len() > self.budget.max_rule_len {
            self.dropped = true;
            return false;
        }
        let id = self.sys.rules.len() as u32;
        for k in 1..lhs.len() {
            self.by_prefix.entry(lhs[..k].to_vec()).or_default().push(id);
            self.by_suffix
                .entry(lhs[lhs.len() - k..].to_vec())
                .or_default()
                .push(id);
        }
        self.sys.trie.insert(&lhs, id);
        self.sys.rules.push(Rule {
            lhs,
            rhs,
            alive: true,
        });
        true
    }

    /// Retires rules whose lhs became reducible and re-queues them;
    /// normalises right-hand sides.
    fn interreduce(&mut self) {
        let n = self.sys.rules.len();
        for i in 0..n {
            if !self.sys.rules[i].alive {
                continue;
            }
            let lhs = self.sys.rules[i].lhs.clone();
            // hide rule i, then test whether lhs is still reducible
            self.sys.trie.remove(&lhs);
            if self.sys.is_reducible(&lhs) {
                self.sys.rules[i].alive = false;
                let rhs = self.sys.rules[i].rhs.clone();
                self.push(lhs, rhs);
            } else {
                self.sys.trie.insert(&lhs, i as u32);
            }
        }
        for i in 0..n {
            if self.sys.rules[i].alive {
                let rhs = self.sys.reduce(&self.sys.rules[i].rhs);
                self.sys.rules[i].rhs = rhs;
            }
        }
    }

    fn critical_pairs(&mut self, k: usize) {
        let lhs_k = self.sys.rules[k].lhs.clone();
        let rhs_k = self.sys.rules[k].rhs.clone();
        let mut found: Vec<(Word, Word)> = Vec::new();
        // suffix of lhs_k == prefix of lhs_j
        for len in 1..lhs_k.len() {
            let suffix = &lhs_k[lhs_k.len() - len..];
            if let Some(ids) = self.by_prefix.get(suffix) {
                for &j in ids {
                    let j = j as usize;
                    if j > k || !self.sys.rules[j].alive {
                        continue;
                    }
                    let rj = &self.sys.rules[j];
                    // lhs_k[..-len] ++ lhs_j  ==  lhs_k ++ lhs_j[len..]
                    let mut x = rhs_k.clone();
                    x.extend_from_slice(&rj.lhs[len..]);
                    let mut y = lhs_k[..lhs_k.len() - len].to_vec();
                    y.extend_from_slice(&rj.rhs);
                    found.push((x, y));
                }
            }
        }
        // prefix of lhs_k == suffix of lhs_j
        for len in 1..lhs_k.len() {
            let prefix = &lhs_k[..len];
            if let Some(ids) = self.by_suffix.get(prefix) {
                for &j in ids {
                    let j = j as usize;
                    if j >= k || !self.sys.rules[j].alive {
                        continue;
                    }
                    let rj = &self.sys.rules[j];
                    let mut x = rj.rhs.clone();
                    x.extend_from_slice(&lhs_k[len..]);
                    let mut y = rj.lhs[..rj.lhs.len() - len].to_vec();
                    y.extend_from_slice(&rhs_k);
                    found.push((x, y));
                }
            }
        }
        for (x, y) in found {
            self.push(x, y);
        }
    }

    fn drain(&mut self) -> bool {
        let mut added_since = 0usize;
        while let Some(p) = self.pending.pop() {
            if self.add_equation(&p.a, &p.b) {
                added_since += 1;
                if added_since >= 64 {
                    self.interreduce();
                    added_since = 0;
                }
                if self.alive_count() > self.budget.max_rules {
                    return false;
                }
            }
        }
        if added_since > 0 {
            self.interreduce();
            if !self.pending.is_empty() {
                return self.drain();
            }
        }
        true
    }
}

/// Runs Knuth–Bendix completion on `spec` within `budget`.
pub fn bounded_completion(spec: &PresentationSpec, budget: RewriteBudget) -> RewriteSystem {
    let alphabet = spec.alphabet().clone();
    let mut c = Completion {
        sys: RewriteSystem {
            alphabet: alphabet.clone(),
            rules: Vec::new(),
            trie: SuffixTrie::new(),
            complete: false,
        },
        budget,
        pending: BinaryHeap::new(),
        seq: 0,
        dropped: false,
        by_prefix: HashMap::new(),
        by_suffix: HashMap::new(),
    };
    for l in 0..alphabet.len() as Letter {
        c.push(vec![l, alphabet.inverse(l)], Vec::new());
    }
    for r in spec.relators() {
        let r = alphabet.free_reduce(r);
        if !r.is_empty() {
            c.push(r, Vec::new());
        }
    }
    if !c.drain() {
        return finish(c, false);
    }
    let mut next = 0;
    while next < c.sys.rules.len() {
        if c.sys.rules[next].alive {
            c.critical_pairs(next);
            if !c.drain() {
                return finish(c, false);
            }
        }
        next += 1;
    }
    let complete = !c.dropped;
    finish(c, complete)
}

fn finish(mut c: Completion, complete: bool) -> RewriteSystem {
    c.pending.clear();
    c.interreduce();
    // Interreduction may re-queue equations; fold them in without
    // further completion so no derived identity is lost.
    while let Some(p) = c.pending.pop() {
        c.add_equation(&p.a, &p.b);
    }
    c.sys.complete = complete;
    c.sys
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_presentation;

    fn normal_forms(sys: &RewriteSystem, max_len: usize) -> Vec<Word> {
        let n = sys.alphabet().len() as Letter;
        let mut seen = std::collections::BTreeSet::new();
        let mut frontier = vec![Vec::<Letter>::new()];
        seen.insert(Vec::new());
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &frontier {
                for l in 0..n {
                    let mut x = w.clone();
                    x.push(l);
                    let r = sys.reduce(&x);
                    if seen.insert(r.clone()) {
                        next.push(r);
                    }
                }
            }
            frontier = next;
        }
        seen.into_iter().collect()
    }

    #[test]
    fn cyclic_group_of_order_three() {
        let spec = parse_presentation("gens: a\nrel: a^3\n").unwrap();
        let sys = bounded_completion(&spec, RewriteBudget::default());
        assert!(sys.is_complete());
        let nf = normal_forms(&sys, 6);
        assert_eq!(nf.len(), 3);
        assert!(sys.reduce(&[0, 0, 0]).is_empty());
    }

    #[test]
    fn coxeter_a2_is_symmetric_group() {
        let spec = parse_presentation("involutions: s t\nrel: (s t)^3\n").unwrap();
        let sys = bounded_completion(&spec, RewriteBudget::default());
        assert!(sys.is_complete());
        assert_eq!(normal_forms(&sys, 8).len(), 6);
    }

    #[test]
    fn free_group_keeps_only_free_reductions() {
        let spec = parse_presentation("gens: a b\n").unwrap();
        let sys = bounded_completion(&spec, RewriteBudget::default());
        assert!(sys.is_complete());
        assert_eq!(sys.rule_count(), 4);
        assert!(sys.rules().all(|(l, r)| l.len() == 2 && r.is_empty()));
    }

    #[test]
    fn tight_budget_is_flagged_incomplete() {
        let spec = parse_presentation("involutions: s t u\nrel: (s t)^3\nrel: (t u)^3\nrel: (s u)^2\n")
            .unwrap();
        let sys = bounded_completion(
            &spec,
            RewriteBudget {
                max_rules: 1000,
                max_rule_len: 3,
            },
        );
        assert!(!sys.is_complete());
    }

    #[test]
    fn traced_reduction_replays() {
        let spec = parse_presentation("involutions: s t\nrel: (s t)^3\n").unwrap();
        let sys = bounded_completion(&spec, RewriteBudget::default());
        let w = vec![0, 1, 0, 1, 0, 1, 1, 0];
        let (nf, steps) = sys.reduce_traced(&w);
        assert_eq!(nf, sys.reduce(&w));
        let mut cur = w.clone();
        for s in &steps {
            assert_eq!(s.before, cur);
            assert_eq!(&cur[s.position..s.position + s.lhs.len()], s.lhs.as_slice());
            let mut next = cur[..s.position].to_vec();
            next.extend_from_slice(&s.rhs);
            next.extend_from_slice(&cur[s.position + s.lhs.len()..]);
            cur = next;
        }
        assert_eq!(cur, nf);
    }
}
