//! Finite presentations and their text format.
//!
//! ```text
//! # Ronan's G1
//! gens: a b c
//! rel: a^3
//! rel: (a*b)^2 = b*a
//! ```
//!
//! Recognised keys: `gens:` (generator names), `involutions:` (self-inverse
//! generators, counted once in `S`), `inverse: x y` (name `y` for the
//! inverse of `x`), `rel:` (a word, or `u = v` which is stored as `u v^-1`).
//! Inside words `*` or whitespace concatenates, `^k` raises to an integer
//! power, `(..)` groups, `[x, y]` is the commutator `x y x^-1 y^-1` and `1`
//! is the empty word. The inverse of a symbol is written with a trailing `'`,
//! `^-1`, or by swapping the case of its first character.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::word::{Alphabet, Letter, Word};

/// Generators, the inverse involution on symbols, and relators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentationSpec {
    alphabet: Alphabet,
    /// Letters of the declared generators (one per inverse pair).
    generators: Vec<Letter>,
    relators: Vec<Word>,
}

impl PresentationSpec {
    /// Builds a presentation directly from an alphabet and relators.
    pub fn new(alphabet: Alphabet, relators: Vec<Word>) -> Result<Self> {
        if alphabet.is_empty() {
            return Err(Error::Presentation("empty generator list".into()));
        }
        for r in &relators {
            if let Some(&bad) = r.iter().find(|&&l| l as usize >= alphabet.len()) {
                return Err(Error::UnknownSymbol(format!("letter #{bad}")));
            }
        }
        let generators = (0..alphabet.len() as Letter)
            .filter(|&l| alphabet.inverse(l) >= l)
            .collect();
        Ok(PresentationSpec {
            alphabet,
            generators,
            relators,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn generators(&self) -> &[Letter] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// Size of the symmetric generating set.
    pub fn symmetric_size(&self) -> usize {
        self.alphabet.len()
    }

    pub fn max_relator_len(&self) -> usize {
        self.relators.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Support radius suggested by the relator-length heuristic: the least
    /// `d` with every relator shorter than `4d`.
    pub fn suggested_radius(&self) -> usize {
        self.max_relator_len() / 4 + 1
    }

    /// Serialises back into the text format; [`parse_presentation`] of the
    /// result reproduces `self`.
    pub fn to_text(&self) -> String {
        let a = &self.alphabet;
        let mut out = String::new();
        let gens: Vec<&str> = self.generators.iter().map(|&g| a.name(g)).collect();
        let _ = writeln!(out, "gens: {}", gens.join(" "));
        let invol: Vec<&str> = self
            .generators
            .iter()
            .filter(|&&g| a.is_self_inverse(g))
            .map(|&g| a.name(g))
            .collect();
        if !invol.is_empty() {
            let _ = writeln!(out, "involutions: {}", invol.join(" "));
        }
        for &g in &self.generators {
            if !a.is_self_inverse(g) {
                let _ = writeln!(out, "inverse: {} {}", a.name(g), a.name(a.inverse(g)));
            }
        }
        for r in &self.relators {
            if r.is_empty() {
                out.push_str("rel: 1\n");
            } else {
                let parts: Vec<&str> = r.iter().map(|&l| a.name(l)).collect();
                let _ = writeln!(out, "rel: {}", parts.join("*"));
            }
        }
        out
    }
}

fn swap_first_case(name: &str) -> Option<String> {
    let mut chars = name.chars();
    let first = chars.next()?;
    let swapped: String = if first.is_lowercase() {
        first.to_uppercase().collect()
    } else if first.is_uppercase() {
        first.to_lowercase().collect()
    } else {
        return None;
    };
    Some(swapped + chars.as_str())
}

fn is_ident(tok: &str) -> bool {
    let mut chars = tok.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_')
}

/// Parses the presentation text format described in the module docs.
pub fn parse_presentation(text: &str) -> Result<PresentationSpec> {
    let mut gens: Vec<(String, usize)> = Vec::new();
    let mut involutions: Vec<(String, usize)> = Vec::new();
    let mut inverse_names: Vec<(String, String, usize)> = Vec::new();
    let mut rels: Vec<(String, usize)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, rest) = line
            .split_once(':')
            .ok_or_else(|| Error::parse(line_no, format!("expected `key: value`, got `{line}`")))?;
        let rest = rest.trim();
        match key.trim() {
            "gens" | "generators" => {
                for tok in rest.split(|c: char| c.is_whitespace() || c == ',') {
                    if tok.is_empty() {
                        continue;
                    }
                    if !is_ident(tok) {
                        return Err(Error::parse(line_no, format!("bad generator name `{tok}`")));
                    }
                    gens.push((tok.to_string(), line_no));
                }
            }
            "involutions" => {
                for tok in rest.split(|c: char| c.is_whitespace() || c == ',') {
                    if tok.is_empty() {
                        continue;
                    }
                    if !is_ident(tok) {
                        return Err(Error::parse(line_no, format!("bad generator name `{tok}`")));
                    }
                    involutions.push((tok.to_string(), line_no));
                }
            }
            "inverse" => {
                let toks: Vec<&str> = rest.split_whitespace().collect();
                if toks.len() != 2 || !toks.iter().all(|t| is_ident(t)) {
                    return Err(Error::parse(line_no, "expected `inverse: <gen> <name>`"));
                }
                inverse_names.push((toks[0].to_string(), toks[1].to_string(), line_no));
            }
            "rel" | "relator" => rels.push((rest.to_string(), line_no)),
            other => return Err(Error::parse(line_no, format!("unknown key `{other}`"))),
        }
    }

    // Involutions may be declared without repeating them under `gens:`.
    let mut declared: Vec<String> = Vec::new();
    for (g, _) in gens.iter().chain(involutions.iter()) {
        if !declared.contains(g) {
            declared.push(g.clone());
        }
    }
    let is_invol = |g: &str| involutions.iter().any(|(i, _)| i == g);

    let mut partner: HashMap<String, String> = HashMap::new();
    let mut secondary: HashMap<String, usize> = HashMap::new();
    for (g, h, line) in &inverse_names {
        if !declared.contains(g) {
            return Err(Error::parse(*line, format!("`{g}` is not a declared generator")));
        }
        if is_invol(g) || is_invol(h) || g == h {
            return Err(Error::parse(
                *line,
                format!("unbalanced inverse pairing: `{g}`/`{h}` involves an involution"),
            ));
        }
        if partner.contains_key(g) || partner.contains_key(h) || secondary.contains_key(g) {
            return Err(Error::parse(
                *line,
                format!("unbalanced inverse pairing: `{g}` or `{h}` paired twice"),
            ));
        }
        partner.insert(g.clone(), h.clone());
        secondary.insert(h.clone(), *line);
    }

    let mut names: Vec<String> = Vec::new();
    let mut inverse: Vec<Letter> = Vec::new();
    for g in &declared {
        if secondary.contains_key(g) {
            continue;
        }
        let base = names.len() as Letter;
        if is_invol(g) {
            names.push(g.clone());
            inverse.push(base);
            continue;
        }
        let inv_name = match partner.get(g) {
            Some(h) => h.clone(),
            None => match swap_first_case(g) {
                Some(s) if !declared.contains(&s) => s,
                _ => format!("{g}'"),
            },
        };
        names.push(g.clone());
        names.push(inv_name);
        inverse.push(base + 1);
        inverse.push(base);
    }
    for (h, line) in &secondary {
        if !partner.values().any(|v| v == h) || names.iter().filter(|n| *n == h).count() != 1 {
            return Err(Error::parse(*line, format!("unbalanced inverse pairing for `{h}`")));
        }
    }
    {
        let mut seen = std::collections::HashSet::new();
        for n in &names {
            if !seen.insert(n) {
                return Err(Error::Presentation(format!("symbol `{n}` declared twice")));
            }
        }
    }
    if names.is_empty() {
        return Err(Error::Presentation("empty generator list".into()));
    }
    let alphabet = Alphabet::new(names, inverse);

    let mut relators = Vec::with_capacity(rels.len());
    for (text, line) in &rels {
        let w = parse_relation(&alphabet, text).map_err(|e| match e {
            Error::UnknownSymbol(s) => Error::parse(*line, format!("unknown symbol `{s}`")),
            Error::Parse { msg, .. } => Error::parse(*line, msg),
            other => other,
        })?;
        relators.push(w);
    }
    PresentationSpec::new(alphabet, relators)
}

/// Parses `u` or `u = v` into a single relator word (`u v^-1`).
pub fn parse_relation(alphabet: &Alphabet, text: &str) -> Result<Word> {
    let mut sides = text.split('=');
    let lhs = parse_word_expr(alphabet, sides.next().unwrap_or(""))?;
    match sides.next() {
        None => Ok(lhs),
        Some(rhs) => {
            if sides.next().is_some() {
                return Err(Error::parse(0, "more than one `=` in relation"));
            }
            let rhs = parse_word_expr(alphabet, rhs)?;
            let mut w = lhs;
            w.extend(alphabet.invert_word(&rhs));
            Ok(w)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Caret,
    Star,
}

fn tokenize(text: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '(' => {
                out.push(Tok::LParen);
                i += 1
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1
            }
            '[' => {
                out.push(Tok::LBrack);
                i += 1
            }
            ']' => {
                out.push(Tok::RBrack);
                i += 1
            }
            ',' => {
                out.push(Tok::Comma);
                i += 1
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1
            }
            '*' | '.' => {
                out.push(Tok::Star);
                i += 1
            }
            '-' | '0'..='9' => {
                let start = i;
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let v = s
                    .parse::<i64>()
                    .map_err(|_| Error::parse(0, format!("bad integer `{s}`")))?;
                out.push(Tok::Int(v));
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                while i < chars.len() && chars[i] == '\'' {
                    i += 1;
                }
                out.push(Tok::Ident(chars[start..i].iter().collect()));
            }
            other => return Err(Error::parse(0, format!("unexpected character `{other}`"))),
        }
    }
    Ok(out)
}

struct ExprParser<'a> {
    alphabet: &'a Alphabet,
    toks: Vec<Tok>,
    pos: usize,
}

impl ExprParser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::parse(0, format!("expected {t:?}, found {:?}", self.peek())))
        }
    }

    fn word(&mut self) -> Result<Word> {
        let mut w = Vec::new();
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                }
                Some(Tok::Ident(_)) | Some(Tok::LParen) | Some(Tok::LBrack) | Some(Tok::Int(1)) => {
                    w.extend(self.factor()?);
                }
                _ => return Ok(w),
            }
        }
    }

    fn factor(&mut self) -> Result<Word> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let k = match self.peek() {
                Some(Tok::Int(k)) => *k,
                other => return Err(Error::parse(0, format!("expected exponent, found {other:?}"))),
            };
            self.pos += 1;
            let unit = if k < 0 {
                self.alphabet.invert_word(&base)
            } else {
                base
            };
            let mut w = Vec::with_capacity(unit.len() * k.unsigned_abs() as usize);
            for _ in 0..k.unsigned_abs() {
                w.extend_from_slice(&unit);
            }
            return Ok(w);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Word> {
        match self.peek().cloned() {
            Some(Tok::Int(1)) => {
                self.pos += 1;
                Ok(Vec::new())
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let w = self.word()?;
                self.expect(Tok::RParen)?;
                Ok(w)
            }
            Some(Tok::LBrack) => {
                self.pos += 1;
                let x = self.word()?;
                self.expect(Tok::Comma)?;
                let y = self.word()?;
                self.expect(Tok::RBrack)?;
                let mut w = x.clone();
                w.extend_from_slice(&y);
                w.extend(self.alphabet.invert_word(&x));
                w.extend(self.alphabet.invert_word(&y));
                Ok(w)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                resolve_symbol(self.alphabet, &name)
            }
            other => Err(Error::parse(0, format!("unexpected token {other:?}"))),
        }
    }
}

fn resolve_single(alphabet: &Alphabet, name: &str) -> Option<Letter> {
    if let Some(l) = alphabet.lookup(name) {
        return Some(l);
    }
    if let Some(base) = name.strip_suffix('\'') {
        return resolve_single(alphabet, base).map(|l| alphabet.inverse(l));
    }
    None
}

fn resolve_symbol(alphabet: &Alphabet, name: &str) -> Result<Word> {
    if let Some(l) = resolve_single(alphabet, name) {
        return Ok(vec![l]);
    }
    // Juxtaposed one-character symbols, as in `abab`.
    let mut w = Vec::new();
    let chars: Vec<char> = name.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let mut j = i + 1;
        while j < chars.len() && chars[j] == '\'' {
            j += 1;
        }
        let piece: String = chars[i..j].iter().collect();
        match resolve_single(alphabet, &piece) {
            Some(l) => w.push(l),
            None => return Err(Error::UnknownSymbol(name.to_string())),
        }
        i = j;
    }
    Ok(w)
}

/// Parses a word expression (no `=`).
pub fn parse_word_expr(alphabet: &Alphabet, text: &str) -> Result<Word> {
    let toks = tokenize(text)?;
    let mut p = ExprParser {
        alphabet,
        toks,
        pos: 0,
    };
    let w = p.word()?;
    if p.pos != p.toks.len() {
        return Err(Error::parse(0, format!("trailing input {:?}", p.peek())));
    }
    Ok(w)
}
