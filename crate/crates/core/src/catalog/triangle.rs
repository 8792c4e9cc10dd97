//! Triangle presentations over finite projective planes.
//!
//! File format (`#` starts a comment, points `x1..xN`, lines `l1..lN`):
//!
//! ```text
//! q: 2
//! lambda: x1 -> l3
//! triple: x1 x2 x4
//! ```
//!
//! Every point needs one `lambda:` line, and every triple is listed
//! explicitly (cyclic images included). For prime `q` the plane is built
//! from normalized vectors of `F_q³`; otherwise, or to use a different
//! labelling, give all lines as `line: l1 = x1 x2 x4`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::presentation::{parse_presentation, PresentationSpec};

pub type Triple = (usize, usize, usize);

/// A finite projective plane with points and lines numbered `0..N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectivePlane {
    pub q: u32,
    /// Sorted points of each line.
    pub lines: Vec<Vec<usize>>,
    incidence: Vec<Vec<bool>>,
}

fn is_prime(q: u32) -> bool {
    q >= 2 && (2..q).take_while(|d| d * d <= q).all(|d| q % d != 0)
}

impl ProjectivePlane {
    pub fn size(&self) -> usize {
        self.lines.len()
    }

    pub fn incident(&self, point: usize, line: usize) -> bool {
        self.incidence[line][point]
    }

    /// `PG(2, q)` for prime `q`: normalized vectors `(1,b,c)`, `(0,1,c)`,
    /// `(0,0,1)` in that order, for points and (as duals) for lines.
    pub fn canonical(q: u32) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::Domain(format!(
                "built-in plane needs prime q, got {q}; list the lines explicitly"
            )));
        }
        let mut vs: Vec<[u32; 3]> = Vec::new();
        for b in 0..q {
            for c in 0..q {
                vs.push([1, b, c]);
            }
        }
        for c in 0..q {
            vs.push([0, 1, c]);
        }
        vs.push([0, 0, 1]);
        let lines = vs
            .iter()
            .map(|l| {
                (0..vs.len())
                    .filter(|&p| (0..3).map(|k| l[k] * vs[p][k]).sum::<u32>() % q == 0)
                    .collect()
            })
            .collect();
        Self::from_lines(q, lines)
    }

    /// Checks the plane axioms for explicitly given lines.
    pub fn from_lines(q: u32, mut lines: Vec<Vec<usize>>) -> Result<Self> {
        let n = (q * q + q + 1) as usize;
        let bad = |m: String| Error::Group(format!("not a projective plane of order {q}: {m}"));
        if lines.len() != n {
            return Err(bad(format!("{} lines, expected {n}", lines.len())));
        }
        let mut incidence = vec![vec![false; n]; n];
        for (j, l) in lines.iter_mut().enumerate() {
            l.sort_unstable();
            l.dedup();
            if l.len() != q as usize + 1 || l.iter().any(|&p| p >= n) {
                return Err(bad(format!("line l{} needs {} distinct points", j + 1, q + 1)));
            }
            for &p in l.iter() {
                incidence[j][p] = true;
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                let k = (0..n).filter(|&j| incidence[j][a] && incidence[j][b]).count();
                if k != 1 {
                    return Err(bad(format!("points x{} and x{} lie on {k} common lines", a + 1, b + 1)));
                }
            }
        }
        Ok(ProjectivePlane { q, lines, incidence })
    }
}

/// Point-to-line bijection `λ` and triple set `T` over a plane.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrianglePresentation {
    pub plane: ProjectivePlane,
    pub lambda: Vec<usize>,
    pub triples: BTreeSet<Triple>,
    /// Source line of each triple, when parsed from a file.
    pub triple_lines: BTreeMap<Triple, usize>,
    /// Whether the plane came from explicit `line:` entries.
    pub explicit_lines: bool,
}

fn axiom(a: char, detail: String) -> Error {
    Error::TriangleAxiom { axiom: a, detail }
}

fn show(t: Triple) -> String {
    format!("(x{}, x{}, x{})", t.0 + 1, t.1 + 1, t.2 + 1)
}

impl TrianglePresentation {
    pub fn q(&self) -> u32 {
        self.plane.q
    }

    fn at_line(&self, t: Triple) -> String {
        match self.triple_lines.get(&t) {
            Some(l) => format!(" (line {l})"),
            None => String::new(),
        }
    }

    /// Checks that `λ` is a bijection and axioms (A), (B), (C).
    pub fn validate(&self) -> Result<()> {
        let n = self.plane.size();
        let mut seen = vec![false; n];
        for &l in &self.lambda {
            if l >= n || std::mem::replace(&mut seen[l], true) {
                return Err(axiom('λ', "lambda is not a bijection from points to lines".into()));
            }
        }
        if self.lambda.len() != n {
            return Err(axiom('λ', "lambda must map every point".into()));
        }
        for &t in &self.triples {
            let (x, y, z) = t;
            if x >= n || y >= n || z >= n {
                return Err(axiom('A', format!("{} names an unknown point", show(t))));
            }
            if !self.triples.contains(&(y, z, x)) {
                return Err(axiom(
                    'B',
                    format!("{}{} is listed but {} is not", show(t), self.at_line(t), show((y, z, x))),
                ));
            }
        }
        let mut third: HashMap<(usize, usize), Triple> = HashMap::new();
        for &t in &self.triples {
            if let Some(prev) = third.insert((t.0, t.1), t) {
                return Err(axiom(
                    'C',
                    format!(
                        "{}{} and {}{} share the pair (x{}, x{})",
                        show(prev),
                        self.at_line(prev),
                        show(t),
                        self.at_line(t),
                        t.0 + 1,
                        t.1 + 1
                    ),
                ));
            }
        }
        for x in 0..n {
            for y in 0..n {
                let on = self.plane.incident(y, self.lambda[x]);
                let has = third.contains_key(&(x, y));
                if on && !has {
                    return Err(axiom(
                        'A',
                        format!("x{} lies on lambda(x{}) but no triple starts (x{}, x{})", y + 1, x + 1, x + 1, y + 1),
                    ));
                }
                if has && !on {
                    let t = third[&(x, y)];
                    return Err(axiom(
                        'A',
                        format!("{}{} but x{} is not on lambda(x{})", show(t), self.at_line(t), y + 1, x + 1),
                    ));
                }
            }
        }
        Ok(())
    }

    /// One representative per cyclic orbit: the least rotation.
    pub fn orbits(&self) -> Vec<Triple> {
        let mut out: BTreeSet<Triple> = BTreeSet::new();
        for &(x, y, z) in &self.triples {
            out.insert((x, y, z).min((y, z, x)).min((z, x, y)));
        }
        out.into_iter().collect()
    }

    /// `⟨a_x | a_x a_y a_z = 1 for (x,y,z) ∈ T⟩`, one relator per orbit.
    pub fn to_presentation(&self) -> Result<PresentationSpec> {
        self.validate()?;
        parse_presentation(&self.presentation_text())
    }

    pub fn presentation_text(&self) -> String {
        let n = self.plane.size();
        let gens: Vec<String> = (1..=n).map(|i| format!("a{i}")).collect();
        let mut out = format!("gens: {}\n", gens.join(" "));
        for (x, y, z) in self.orbits() {
            let _ = writeln!(out, "rel: a{} a{} a{}", x + 1, y + 1, z + 1);
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("q: {}\n", self.q());
        if self.explicit_lines {
            for (j, l) in self.plane.lines.iter().enumerate() {
                let pts: Vec<String> = l.iter().map(|p| format!("x{}", p + 1)).collect();
                let _ = writeln!(out, "line: l{} = {}", j + 1, pts.join(" "));
            }
        }
        for (x, l) in self.lambda.iter().enumerate() {
            let _ = writeln!(out, "lambda: x{} -> l{}", x + 1, l + 1);
        }
        for (x, y, z) in &self.triples {
            let _ = writeln!(out, "triple: x{} x{} x{}", x + 1, y + 1, z + 1);
        }
        out
    }
}

fn index(tok: &str, prefix: char, n: usize, line: usize) -> Result<usize> {
    let digits = tok.strip_prefix(prefix).unwrap_or(tok);
    match digits.parse::<usize>() {
        Ok(i) if (1..=n).contains(&i) => Ok(i - 1),
        _ => Err(Error::parse(line, format!("`{tok}` is not one of {prefix}1..{prefix}{n}"))),
    }
}

/// Parses and validates a triangle-presentation file.
pub fn parse_triangle(text: &str) -> Result<TrianglePresentation> {
    let mut q: Option<u32> = None;
    let mut lines_given: Vec<(usize, usize, Vec<usize>)> = Vec::new();
    let mut lambda: Vec<(usize, usize, usize)> = Vec::new();
    let mut triples: Vec<(usize, Vec<String>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, rest) = line
            .split_once(':')
            .ok_or_else(|| Error::parse(ln, "expected `key: value`"))?;
        let rest = rest.trim();
        match key.trim() {
            "q" => {
                let v: u32 = rest.parse().map_err(|_| Error::parse(ln, "q must be an integer"))?;
                if v < 2 || q.replace(v).is_some() {
                    return Err(Error::parse(ln, "q must be given once and be at least 2"));
                }
            }
            "line" | "lambda" | "triple" if q.is_none() => {
                return Err(Error::parse(ln, "`q:` must come first"));
            }
            "line" => {
                let n = q.map(|q| (q * q + q + 1) as usize).unwrap_or(0);
                let (name, pts) = rest
                    .split_once('=')
                    .ok_or_else(|| Error::parse(ln, "expected `line: lj = x.. x..`"))?;
                let j = index(name.trim(), 'l', n, ln)?;
                let pts = pts
                    .split_whitespace()
                    .map(|t| index(t, 'x', n, ln))
                    .collect::<Result<Vec<_>>>()?;
                lines_given.push((ln, j, pts));
            }
            "lambda" => {
                let n = q.map(|q| (q * q + q + 1) as usize).unwrap_or(0);
                let (x, l) = rest
                    .split_once("->")
                    .ok_or_else(|| Error::parse(ln, "expected `lambda: xi -> lj`"))?;
                lambda.push((ln, index(x.trim(), 'x', n, ln)?, index(l.trim(), 'l', n, ln)?));
            }
            "triple" => {
                triples.push((ln, rest.split_whitespace().map(String::from).collect()));
            }
            other => return Err(Error::parse(ln, format!("unknown key `{other}`"))),
        }
    }
    let q = q.ok_or_else(|| Error::parse(0, "missing `q:`"))?;
    let n = (q * q + q + 1) as usize;
    let explicit_lines = !lines_given.is_empty();
    let plane = if explicit_lines {
        let mut ls: Vec<Option<Vec<usize>>> = vec![None; n];
        for (ln, j, pts) in lines_given {
            if ls[j].replace(pts).is_some() {
                return Err(Error::parse(ln, format!("line l{} given twice", j + 1)));
            }
        }
        let ls = ls
            .into_iter()
            .enumerate()
            .map(|(j, l)| l.ok_or_else(|| Error::parse(0, format!("line l{} missing", j + 1))))
            .collect::<Result<Vec<_>>>()?;
        ProjectivePlane::from_lines(q, ls)?
    } else {
        ProjectivePlane::canonical(q)?
    };
    let mut lam = vec![usize::MAX; n];
    for (ln, x, l) in lambda {
        if lam[x] != usize::MAX {
            return Err(Error::parse(ln, format!("lambda(x{}) given twice", x + 1)));
        }
        lam[x] = l;
    }
    if let Some(x) = lam.iter().position(|&l| l == usize::MAX) {
        return Err(Error::parse(0, format!("lambda(x{}) missing", x + 1)));
    }
    let mut set = BTreeSet::new();
    let mut at = BTreeMap::new();
    for (ln, toks) in triples {
        if toks.len() != 3 {
            return Err(Error::parse(ln, "a triple needs three points"));
        }
        let t = (
            index(&toks[0], 'x', n, ln)?,
            index(&toks[1], 'x', n, ln)?,
            index(&toks[2], 'x', n, ln)?,
        );
        if !set.insert(t) {
            return Err(Error::parse(ln, format!("triple {} repeated", show(t))));
        }
        at.insert(t, ln);
    }
    let tp = TrianglePresentation {
        plane,
        lambda: lam,
        triples: set,
        triple_lines: at,
        explicit_lines,
    };
    tp.validate()?;
    Ok(tp)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn rec(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == p.len() {
            out.push(p.clone());
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            rec(k + 1, p, out);
            p.swap(k, i);
        }
    }
    rec(0, &mut p, &mut out);
    out.sort();
    out
}

/// Point permutations preserving the line set, with the induced line map.
fn collineations(plane: &ProjectivePlane) -> Vec<(Vec<usize>, Vec<usize>)> {
    let line_of: HashMap<Vec<usize>, usize> = plane
        .lines
        .iter()
        .enumerate()
        .map(|(j, l)| (l.clone(), j))
        .collect();
    permutations(plane.size())
        .into_iter()
        .filter_map(|s| {
            let lm = plane
                .lines
                .iter()
                .map(|l| {
                    let mut img: Vec<usize> = l.iter().map(|&p| s[p]).collect();
                    img.sort_unstable();
                    line_of.get(&img).copied()
                })
                .collect::<Option<Vec<_>>>()?;
            Some((s, lm))
        })
        .collect()
}

type Key = (Vec<usize>, Vec<Triple>);

fn canonical_key(lambda: &[usize], triples: &BTreeSet<Triple>, group: &[(Vec<usize>, Vec<usize>)]) -> Key {
    group
        .iter()
        .map(|(s, lm)| {
            let mut lam = vec![0; lambda.len()];
            for (x, &l) in lambda.iter().enumerate() {
                lam[s[x]] = lm[l];
            }
            let mut t: Vec<Triple> = triples.iter().map(|&(a, b, c)| (s[a], s[b], s[c])).collect();
            t.sort_unstable();
            (lam, t)
        })
        .min()
        .expect("identity is a collineation")
}

fn exact_covers(
    pairs: &[(usize, usize)],
    orbits: &[Vec<(usize, usize)>],
    covered: &mut BTreeSet<(usize, usize)>,
    chosen: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    let Some(&next) = pairs.iter().find(|p| !covered.contains(p)) else {
        out.push(chosen.clone());
        return;
    };
    for (k, o) in orbits.iter().enumerate() {
        if o.contains(&next) && o.iter().all(|p| !covered.contains(p)) {
            covered.extend(o.iter().copied());
            chosen.push(k);
            exact_covers(pairs, orbits, covered, chosen, out);
            chosen.pop();
            for p in o {
                covered.remove(p);
            }
        }
    }
}

/// All triangle presentations over `PG(2, 2)`, up to collineations,
/// in a fixed order.
///
/// For each bijection `λ`, the pairs `(x, y)` with `y ∈ λ(x)` must be
/// covered exactly once by cyclic orbits of triples; the search runs over
/// all such exact covers.
pub fn generate_triangle_presentations(q: u32) -> Result<Vec<TrianglePresentation>> {
    if q != 2 {
        return Err(Error::Domain(format!("generation supports q = 2 only, got {q}")));
    }
    let plane = ProjectivePlane::canonical(2)?;
    let n = plane.size();
    let group = collineations(&plane);
    let mut found: BTreeMap<Key, ()> = BTreeMap::new();
    for lambda in permutations(n) {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|x| plane.lines[lambda[x]].iter().map(move |&y| (x, y)))
            .collect();
        let e: BTreeSet<(usize, usize)> = pairs.iter().copied().collect();
        let mut reps: BTreeSet<Triple> = BTreeSet::new();
        for &(x, y) in &pairs {
            for z in 0..n {
                if e.contains(&(y, z)) && e.contains(&(z, x)) {
                    reps.insert((x, y, z).min((y, z, x)).min((z, x, y)));
                }
            }
        }
        let reps: Vec<Triple> = reps.into_iter().collect();
        let orbits: Vec<Vec<(usize, usize)>> = reps
            .iter()
            .map(|&(x, y, z)| {
                let mut o = vec![(x, y), (y, z), (z, x)];
                o.sort_unstable();
                o.dedup();
                o
            })
            .collect();
        let mut covers = Vec::new();
        exact_covers(&pairs, &orbits, &mut BTreeSet::new(), &mut Vec::new(), &mut covers);
        for cover in covers {
            let mut t = BTreeSet::new();
            for k in cover {
                let (x, y, z) = reps[k];
                t.extend([(x, y, z), (y, z, x), (z, x, y)]);
            }
            found.insert(canonical_key(&lambda, &t, &group), ());
        }
    }
    let out = found
        .into_keys()
        .map(|(lambda, t)| TrianglePresentation {
            plane: plane.clone(),
            lambda,
            triples: t.into_iter().collect(),
            triple_lines: BTreeMap::new(),
            explicit_lines: false,
        })
        .collect();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fano_plane() {
        let p = ProjectivePlane::canonical(2).unwrap();
        assert_eq!(p.size(), 7);
        assert!(p.lines.iter().all(|l| l.len() == 3));
        assert_eq!(collineations(&p).len(), 168);
        assert_eq!(ProjectivePlane::canonical(3).unwrap().size(), 13);
        assert!(ProjectivePlane::canonical(4).is_err());
    }

    #[test]
    fn generated_presentations_validate_and_round_trip() {
        let all = generate_triangle_presentations(2).unwrap();
        assert!(!all.is_empty());
        for t in &all {
            t.validate().unwrap();
            let back = parse_triangle(&t.to_text()).unwrap();
            assert_eq!(back.triples, t.triples);
            assert_eq!(back.lambda, t.lambda);
            let p = t.to_presentation().unwrap();
            assert_eq!(p.symmetric_size(), 14);
        }
    }

    #[test]
    fn missing_cyclic_image_names_the_triple() {
        let t = &generate_triangle_presentations(2).unwrap()[0];
        let text = t.to_text();
        let last = text.lines().last().unwrap().to_string();
        let cut: String = text.lines().filter(|l| *l != last).map(|l| format!("{l}\n")).collect();
        match parse_triangle(&cut) {
            Err(Error::TriangleAxiom { axiom, detail }) => {
                assert!(axiom == 'B' || axiom == 'A', "{axiom} {detail}");
            }
            other => panic!("expected axiom error, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_third_point_violates_c() {
        let t = &generate_triangle_presentations(2).unwrap()[0];
        let (x, y, z) = *t.triples.iter().next().unwrap();
        let w = (0..7)
            .find(|&w| {
                w != z
                    && [(x, y, w), (y, w, x), (w, x, y)]
                        .iter()
                        .all(|u| !t.triples.contains(u))
            })
            .unwrap();
        let mut text = t.to_text();
        for (a, b, c) in [(x, y, w), (y, w, x), (w, x, y)] {
            text.push_str(&format!("triple: x{} x{} x{}\n", a + 1, b + 1, c + 1));
        }
        match parse_triangle(&text) {
            Err(Error::TriangleAxiom { axiom: 'C', detail }) => {
                assert!(detail.contains("line"), "{detail}");
            }
            other => panic!("expected axiom (C), got {other:?}"),
        }
    }

    #[test]
    fn parse_errors_cite_lines() {
        let err = parse_triangle("q: 2\nlambda: x9 -> l1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
    }
}
