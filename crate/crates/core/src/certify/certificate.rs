//! Plain-text certificate files and their independent re-verification.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::ldl::{pow2, reconstruct_block, LdlFactors, RoundedGram};
use super::{d_exponent, kappa_floor, penalty_factor, residual};
use crate::backend::GroupBackend;
use crate::ball::{Ball, PairingTable};
use crate::elements::ElementTable;
use crate::error::{Error, Result};
use crate::ring::laplacian;

const MAGIC: &str = "kazhdan-certificate v1";

/// How to rebuild the group a certificate talks about.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupDescriptor {
    /// Preset name, or a free-form label for inline presentations.
    pub name: String,
    /// Presentation text, when the group is not a catalog preset.
    pub presentation: Option<String>,
    pub max_rules: usize,
    pub max_rule_len: usize,
    /// Radius used for ball closure, if any.
    pub closure_radius: Option<usize>,
}

/// Everything needed to re-check `Δ² − εΔ = Σ r_i b_i* b_i + c` exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub group: GroupDescriptor,
    pub s_size: usize,
    pub radius: usize,
    pub d_exponent: u32,
    pub involution_free: bool,
    pub complete_identification: bool,
    pub bits: u32,
    pub eps_numeric: f64,
    pub eps: BigRational,
    pub tau: BigRational,
    /// Ball elements in Gram-matrix order, as displayed words.
    pub ball_words: Vec<String>,
    pub gram: RoundedGram,
    pub ldl: LdlFactors,
    /// `(word, coefficient)` for every term of `c`.
    pub residual: Vec<(String, BigRational)>,
    pub c_l1: BigRational,
    pub eps_certified: BigRational,
    pub kappa_certified: String,
}

/// Summary of a successful verification.
#[derive(Debug, Clone, PartialEq)]
pub struct Verified {
    pub n: usize,
    pub residual_terms: usize,
    pub c_l1: BigRational,
    pub eps_certified: BigRational,
    pub kappa_certified: String,
}

impl Verified {
    /// True when the certified gap is strictly positive.
    pub fn is_positive(&self) -> bool {
        self.eps_certified.is_positive()
    }
}

fn bool_str(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

impl Certificate {
    pub fn to_text(&self) -> String {
        let mut o = String::new();
        let g = &self.group;
        let _ = writeln!(o, "{MAGIC}");
        let _ = writeln!(o, "group {}", g.name);
        if let Some(p) = &g.presentation {
            let _ = writeln!(o, "presentation-begin");
            for line in p.lines() {
                let _ = writeln!(o, "{line}");
            }
            let _ = writeln!(o, "presentation-end");
        }
        let _ = writeln!(o, "max-rules {}", g.max_rules);
        let _ = writeln!(o, "max-rule-len {}", g.max_rule_len);
        match g.closure_radius {
            Some(r) => {
                let _ = writeln!(o, "closure-radius {r}");
            }
            None => {
                let _ = writeln!(o, "closure-radius none");
            }
        }
        let _ = writeln!(o, "generators {}", self.s_size);
        let _ = writeln!(o, "radius {}", self.radius);
        let _ = writeln!(o, "d-exponent {}", self.d_exponent);
        let _ = writeln!(o, "involution-free {}", bool_str(self.involution_free));
        let _ = writeln!(
            o,
            "complete-identification {}",
            bool_str(self.complete_identification)
        );
        let _ = writeln!(o, "bits {}", self.bits);
        let _ = writeln!(o, "eps-numeric {:e}", self.eps_numeric);
        let _ = writeln!(o, "eps {}", self.eps);
        let _ = writeln!(o, "tau {}", self.tau);
        let _ = writeln!(o, "ball {}", self.ball_words.len());
        for w in &self.ball_words {
            let _ = writeln!(o, "{w}");
        }
        let n = self.gram.n;
        let _ = writeln!(o, "gram-den {}", self.gram.den);
        let _ = writeln!(o, "gram {n}");
        for i in 0..n {
            let row: Vec<String> = self.gram.num[i * n..(i + 1) * n]
                .iter()
                .map(|x| x.to_string())
                .collect();
            let _ = writeln!(o, "{}", row.join(" "));
        }
        let _ = writeln!(o, "ldl-r {}", self.ldl.r.len());
        for r in &self.ldl.r {
            let _ = writeln!(o, "{r}");
        }
        let _ = writeln!(o, "ldl-l {}", self.ldl.l.len());
        for (i, k, v) in &self.ldl.l {
            let _ = writeln!(o, "{i} {k} {v}");
        }
        let _ = writeln!(o, "residual {}", self.residual.len());
        for (w, v) in &self.residual {
            let _ = writeln!(o, "{v}\t{w}");
        }
        let _ = writeln!(o, "c-l1 {}", self.c_l1);
        let _ = writeln!(o, "eps-certified {}", self.eps_certified);
        let _ = writeln!(o, "kappa-certified {}", self.kappa_certified);
        let _ = writeln!(o, "end");
        o
    }

    pub fn parse(text: &str) -> Result<Certificate> {
        let mut rd = Reader {
            lines: text.lines().enumerate().collect(),
            pos: 0,
        };
        let (ln, first) = rd.next()?;
        if first.trim() != MAGIC {
            return Err(Error::parse(ln, format!("expected `{MAGIC}`")));
        }
        let name = rd.field("group")?.to_string();
        let presentation = if rd.peek().map(|l| l.trim()) == Some("presentation-begin") {
            rd.next()?;
            let mut body = String::new();
            loop {
                let (_, l) = rd.next()?;
                if l.trim() == "presentation-end" {
                    break;
                }
                body.push_str(l);
                body.push('\n');
            }
            Some(body)
        } else {
            None
        };
        let max_rules = rd.num("max-rules")?;
        let max_rule_len = rd.num("max-rule-len")?;
        let closure_radius = match rd.field("closure-radius")? {
            "none" => None,
            v => Some(rd.parse_at(v)?),
        };
        let s_size = rd.num("generators")?;
        let radius = rd.num("radius")?;
        let d_exp = rd.num("d-exponent")?;
        let involution_free = rd.flag("involution-free")?;
        let complete_identification = rd.flag("complete-identification")?;
        let bits = rd.num("bits")?;
        let eps_numeric = rd.num("eps-numeric")?;
        let eps = rd.num("eps")?;
        let tau = rd.num("tau")?;
        let nb: usize = rd.num("ball")?;
        let mut ball_words = Vec::with_capacity(nb);
        for _ in 0..nb {
            ball_words.push(rd.next()?.1.trim().to_string());
        }
        let den: BigInt = rd.num("gram-den")?;
        let n: usize = rd.num("gram")?;
        if n != nb {
            return Err(Error::parse(
                rd.line(),
                format!("gram size {n} differs from ball size {nb}"),
            ));
        }
        let mut num = Vec::with_capacity(n * n);
        for _ in 0..n {
            let (ln, l) = rd.next()?;
            let row: Vec<&str> = l.split_whitespace().collect();
            if row.len() != n {
                return Err(Error::parse(ln, format!("gram row needs {n} entries")));
            }
            for x in row {
                num.push(BigInt::from_str(x).map_err(|_| Error::parse(ln, "bad integer"))?);
            }
        }
        let nr: usize = rd.num("ldl-r")?;
        let mut r = Vec::with_capacity(nr);
        for _ in 0..nr {
            let (_, l) = rd.next()?;
            r.push(rd.parse_at(l.trim())?);
        }
        let nl: usize = rd.num("ldl-l")?;
        let mut l = Vec::with_capacity(nl);
        for _ in 0..nl {
            let (ln, line) = rd.next()?;
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(Error::parse(ln, "expected `i k value`"));
            }
            l.push((
                rd.parse_at(parts[0])?,
                rd.parse_at(parts[1])?,
                rd.parse_at(parts[2])?,
            ));
        }
        let nc: usize = rd.num("residual")?;
        let mut res = Vec::with_capacity(nc);
        for _ in 0..nc {
            let (ln, line) = rd.next()?;
            let (v, w) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(ln, "expected `value<TAB>word`"))?;
            res.push((w.trim().to_string(), rd.parse_at(v.trim())?));
        }
        let c_l1 = rd.num("c-l1")?;
        let eps_certified = rd.num("eps-certified")?;
        let kappa_certified = rd.field("kappa-certified")?.to_string();
        let (ln, end) = rd.next()?;
        if end.trim() != "end" {
            return Err(Error::parse(ln, "expected `end`"));
        }
        Ok(Certificate {
            group: GroupDescriptor {
                name,
                presentation,
                max_rules,
                max_rule_len,
                closure_radius,
            },
            s_size,
            radius,
            d_exponent: d_exp,
            involution_free,
            complete_identification,
            bits,
            eps_numeric,
            eps,
            tau,
            ball_words,
            gram: RoundedGram { n, bits, num, den },
            ldl: LdlFactors { r, l },
            residual: res,
            c_l1,
            eps_certified,
            kappa_certified,
        })
    }
}

struct Reader<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Reader<'a> {
    fn line(&self) -> usize {
        self.pos
    }

    fn peek(&self) -> Option<&'a str> {
        self.lines.get(self.pos).map(|x| x.1)
    }

    fn next(&mut self) -> Result<(usize, &'a str)> {
        let (i, l) = *self
            .lines
            .get(self.pos)
            .ok_or_else(|| Error::parse(self.pos + 1, "unexpected end of certificate"))?;
        self.pos += 1;
        Ok((i + 1, l))
    }

    fn field(&mut self, key: &str) -> Result<&'a str> {
        let (ln, l) = self.next()?;
        match l.split_once(' ') {
            Some((k, v)) if k == key => Ok(v.trim()),
            _ => Err(Error::parse(ln, format!("expected `{key} <value>`"))),
        }
    }

    fn parse_at<T: FromStr>(&self, v: &str) -> Result<T> {
        v.parse()
            .map_err(|_| Error::parse(self.pos, format!("cannot parse `{v}`")))
    }

    fn num<T: FromStr>(&mut self, key: &str) -> Result<T> {
        let v = self.field(key)?;
        self.parse_at(v)
    }

    fn flag(&mut self, key: &str) -> Result<bool> {
        match self.field(key)? {
            "true" => Ok(true),
            "false" => Ok(false),
            _ => Err(Error::parse(self.pos, format!("`{key}` must be true or false"))),
        }
    }
}

fn reject(msg: impl Into<String>) -> Error {
    Error::Verification(msg.into())
}

/// Re-checks a certificate against `group` using exact arithmetic only.
/// Stops at the first failing check.
pub fn verify_certificate<B: GroupBackend>(cert: &Certificate, group: &B) -> Result<Verified> {
    if cert.s_size != group.symmetric_size() {
        return Err(reject(format!(
            "certificate has {} generators, group has {}",
            cert.s_size,
            group.symmetric_size()
        )));
    }
    let alphabet = group.alphabet();
    let mut table = ElementTable::new(group);
    let gens = table.generating_set();
    let bundle = laplacian(&table, &gens)?;

    let mut words = Vec::with_capacity(cert.ball_words.len());
    for w in &cert.ball_words {
        let word = alphabet
            .parse_word(w)
            .ok_or_else(|| reject(format!("ball word `{w}` uses unknown letters")))?;
        if word.len() > cert.radius {
            return Err(reject(format!("ball word `{w}` is longer than the radius")));
        }
        words.push(word);
    }
    let max_len = words.iter().map(|w| w.len()).max().unwrap_or(0);
    let ball = Ball::from_words(&mut table, cert.radius, words)
        .map_err(|e| reject(e.to_string()))?;
    let n = ball.len();

    let q = &cert.gram;
    if q.n != n || q.num.len() != n * n {
        return Err(reject("Gram matrix size does not match the ball"));
    }
    let nn = BigInt::from(n);
    if q.bits != cert.bits || q.den != pow2(cert.bits) * &nn * &nn {
        return Err(reject("Gram denominator is not 2^bits·n²"));
    }
    for i in 0..n {
        for j in 0..i {
            if q.num[i * n + j] != q.num[j * n + i] {
                return Err(reject(format!("Gram matrix is not symmetric at ({i}, {j})")));
            }
        }
        let row: BigInt = q.num[i * n..(i + 1) * n].iter().sum();
        if !row.is_zero() {
            return Err(reject(format!("Gram row {i} does not sum to zero")));
        }
    }
    if cert.tau.is_negative() {
        return Err(reject("τ is negative"));
    }
    let n1 = n.saturating_sub(1);
    if cert.ldl.r.len() != n1 {
        return Err(reject("wrong number of LDL pivots"));
    }
    if let Some(k) = cert.ldl.r.iter().position(|r| r.is_negative()) {
        return Err(reject(format!("pivot r_{k} is negative")));
    }
    let mut last = None;
    for (i, k, _) in &cert.ldl.l {
        if *i >= n1 || k >= i || last.is_some_and(|p| p >= (*k, *i)) {
            return Err(reject(format!("LDL entry ({i}, {k}) out of place")));
        }
        last = Some((*k, *i));
    }
    let block = reconstruct_block(n1, &cert.ldl);
    let off = -&cert.tau / BigRational::from_integer(nn.clone());
    let on = &cert.tau + &off;
    for (i, row) in block.iter().enumerate() {
        for (j, v) in row.iter().enumerate().take(i + 1) {
            let m = q.get(i, j) + if i == j { &on } else { &off };
            if *v != m {
                return Err(reject(format!(
                    "L·diag(r)·Lᵀ differs from Q′ + τP at ({i}, {j})"
                )));
            }
        }
    }

    let pairing = PairingTable::build(&mut table, &ball);
    let delta_sq = bundle.delta_squared(&mut table);
    let c = residual(&delta_sq, &bundle.delta, &cert.eps, q, &cert.tau, &pairing)
        .map_err(|e| reject(e.to_string()))?;

    let mut stored: HashMap<B::Elem, BigRational> = HashMap::new();
    for (w, v) in &cert.residual {
        let word = alphabet
            .parse_word(w)
            .ok_or_else(|| reject(format!("residual word `{w}` uses unknown letters")))?;
        let id = table.canonicalize(&word);
        if stored.insert(table.elem(id).clone(), v.clone()).is_some() {
            return Err(reject(format!("residual lists `{w}` twice")));
        }
    }
    if stored.len() != c.len()
        || c
            .iter()
            .any(|(g, v)| stored.get(table.elem(g)) != Some(v))
    {
        return Err(reject("stored residual differs from the recomputed one"));
    }

    let c_l1 = c.l1_norm();
    if c_l1 != cert.c_l1 {
        return Err(reject(format!(
            "‖c‖₁ is {c_l1}, certificate claims {}",
            cert.c_l1
        )));
    }
    let d_exp = d_exponent(max_len);
    if d_exp != cert.d_exponent {
        return Err(reject(format!("D is {d_exp}, certificate claims {}", cert.d_exponent)));
    }
    let invfree = group.involution_free();
    if invfree != cert.involution_free {
        return Err(reject("involution-free flag does not match the group"));
    }
    if group.decides_equality() != cert.complete_identification {
        return Err(reject("identification flag does not match the group"));
    }
    let eps_certified =
        &cert.eps - BigRational::from_integer(penalty_factor(d_exp, invfree)) * &c_l1;
    if eps_certified != cert.eps_certified {
        return Err(reject(format!(
            "ε_certified is {eps_certified}, certificate claims {}",
            cert.eps_certified
        )));
    }
    let kappa = kappa_floor(&eps_certified, cert.s_size);
    if kappa != cert.kappa_certified {
        return Err(reject(format!(
            "κ_certified is {kappa}, certificate claims {}",
            cert.kappa_certified
        )));
    }
    Ok(Verified {
        n,
        residual_terms: c.len(),
        c_l1,
        eps_certified,
        kappa_certified: kappa,
    })
}
