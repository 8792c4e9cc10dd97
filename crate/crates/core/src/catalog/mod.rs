//! Built-in groups, triangle presentations and reference values.
//!
//! Preset names:
//!
//! | name | group |
//! |---|---|
//! | `cyclic:m` | `Z/m` |
//! | `free:k` | free group of rank `k` |
//! | `ronan:G1` .. `ronan:G4` | Ronan's Ã₂ groups |
//! | `steinberg:n` | `St_n(Z)` with generators `x_ij` |
//! | `sl:n:Z`, `sl:n:F5` | `SL(n, Z)`, `SL(n, F_p)` with elementary generators |
//! | `coxeter:A3`, `coxeter:I2:5` | finite Coxeter groups |
//! | `gmpn:m:p:n` | complex reflection group `G(m,p,n)` |
//! | `a2tilde:FILE` | group of a triangle presentation file |
//! | `a2tilde:gen[:k]` | `k`-th generated triangle presentation over `PG(2,2)` |
//!
//! Anything else is read as a presentation file.

mod coxeter;
pub mod reference;
pub mod triangle;

use std::fmt::Write as _;
use std::path::PathBuf;

pub use coxeter::CoxeterType;
pub use reference::{Quantity, ReferenceKind, ReferenceValue};
pub use triangle::{
    generate_triangle_presentations, parse_triangle, ProjectivePlane, TrianglePresentation,
};

use crate::backend::{
    elementary_generators, GroupBackend, Integers, MatrixGroup, MonomialGroup, PresentedGroup,
    PrimeField,
};
use crate::certify::GroupDescriptor;
use crate::error::{Error, Result};
use crate::presentation::{parse_presentation, PresentationSpec};
use crate::rewrite::RewriteBudget;

/// Any of the concrete backends, for callers that pick a group at run time.
#[derive(Debug, Clone)]
pub enum AnyGroup {
    Presented(PresentedGroup),
    IntMatrix(MatrixGroup<Integers>),
    PrimeMatrix(MatrixGroup<PrimeField>),
    Monomial(MonomialGroup),
}

/// Runs `$body` with `$b` bound to the concrete backend inside an
/// [`AnyGroup`](crate::catalog::AnyGroup).
#[macro_export]
macro_rules! with_group {
    ($g:expr, |$b:ident| $body:expr) => {
        match $g {
            $crate::catalog::AnyGroup::Presented($b) => $body,
            $crate::catalog::AnyGroup::IntMatrix($b) => $body,
            $crate::catalog::AnyGroup::PrimeMatrix($b) => $body,
            $crate::catalog::AnyGroup::Monomial($b) => $body,
        }
    };
}

impl AnyGroup {
    pub fn symmetric_size(&self) -> usize {
        with_group!(self, |g| g.symmetric_size())
    }

    pub fn decides_equality(&self) -> bool {
        with_group!(self, |g| g.decides_equality())
    }

    pub fn backend_name(&self) -> &'static str {
        match self {
            AnyGroup::Presented(_) => "presented",
            AnyGroup::IntMatrix(_) => "integer-matrix",
            AnyGroup::PrimeMatrix(_) => "prime-field-matrix",
            AnyGroup::Monomial(_) => "monomial",
        }
    }
}

/// A parsed preset name.
#[derive(Debug, Clone, PartialEq)]
pub enum Preset {
    Cyclic(u32),
    Free(u32),
    Ronan(u8),
    Steinberg(u32),
    SlIntegers(u32),
    SlPrime(u32, u32),
    Coxeter(CoxeterType),
    Gmpn(u16, u16, u32),
    A2TildeFile(PathBuf),
    A2TildeGenerated(usize),
    File(PathBuf),
}

/// Rewriting and identification settings for presented groups.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BuildOptions {
    pub budget: RewriteBudget,
    /// Ball radius for closure when completion does not finish.
    pub closure_radius: Option<usize>,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            budget: RewriteBudget::default(),
            closure_radius: None,
        }
    }
}

/// A built group with the data shown by `describe` and stored in
/// certificates.
#[derive(Debug, Clone)]
pub struct BuiltGroup {
    pub name: String,
    pub group: AnyGroup,
    pub presentation: Option<PresentationSpec>,
    /// Whether a certificate must carry the presentation text, because the
    /// group came from a file.
    pub inline: bool,
    pub default_radius: usize,
    pub options: BuildOptions,
}

fn num<T: std::str::FromStr>(s: &str, name: &str) -> Result<T> {
    s.parse().map_err(|_| Error::UnknownPreset(name.to_string()))
}

const RONAN: [&str; 4] = [
    "rel: (a b)^2 = b a\nrel: (b c)^2 = c b\nrel: (c a)^2 = a c\n",
    "rel: (a b)^2 = b a\nrel: (b c)^2 = c b\nrel: (a c)^2 = c a\n",
    "rel: (a b)^2 = b a\nrel: (a c)^2 = c a\nrel: (c^-1 b)^2 = b c^-1\n",
    "rel: (a b)^2 = b a\nrel: (a c)^2 = c a\nrel: (b c^-1)^2 = c^-1 b\n",
];

/// Presentation text of Ronan's group `G_k`, `k ∈ 1..=4`.
pub fn ronan_text(k: u8) -> String {
    format!(
        "gens: a b c\nrel: a^3\nrel: b^3\nrel: c^3\n{}",
        RONAN[k as usize - 1]
    )
}

/// `St_n(Z)`: `[x_ij, x_jk] = x_ik` for distinct `i, j, k`, and
/// `[x_ij, x_kl] = 1` for `i ≠ l`, `j ≠ k`.
pub fn steinberg_text(n: u32) -> String {
    let idx: Vec<(u32, u32)> = (1..=n)
        .flat_map(|i| (1..=n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let names: Vec<String> = idx.iter().map(|(i, j)| format!("x{i}{j}")).collect();
    let mut out = format!("gens: {}\n", names.join(" "));
    for &(i, j) in &idx {
        for k in (1..=n).filter(|&k| k != i && k != j) {
            let _ = writeln!(out, "rel: [x{i}{j}, x{j}{k}] = x{i}{k}");
        }
    }
    for (a, &(i, j)) in idx.iter().enumerate() {
        for &(k, l) in &idx[a + 1..] {
            if i != l && j != k {
                let _ = writeln!(out, "rel: [x{i}{j}, x{k}{l}]");
            }
        }
    }
    out
}

fn cyclic_text(m: u32) -> String {
    if m == 2 {
        "involutions: a\nrel: a^2\n".into()
    } else {
        format!("gens: a\nrel: a^{m}\n")
    }
}

fn free_text(k: u32) -> String {
    let names: Vec<String> = (1..=k).map(|i| format!("x{i}")).collect();
    format!("gens: {}\n", names.join(" "))
}

impl Preset {
    pub fn parse(s: &str) -> Result<Preset> {
        let parts: Vec<&str> = s.split(':').collect();
        let unknown = || Error::UnknownPreset(s.to_string());
        let p = match parts.as_slice() {
            ["cyclic", m] => {
                let m: u32 = num(m, s)?;
                if m < 2 {
                    return Err(Error::Domain(format!("cyclic group needs m ≥ 2, got {m}")));
                }
                Preset::Cyclic(m)
            }
            ["free", k] => {
                let k: u32 = num(k, s)?;
                if k == 0 {
                    return Err(Error::Domain("free group needs rank ≥ 1".into()));
                }
                Preset::Free(k)
            }
            ["ronan", g] => match *g {
                "G1" => Preset::Ronan(1),
                "G2" => Preset::Ronan(2),
                "G3" => Preset::Ronan(3),
                "G4" => Preset::Ronan(4),
                _ => return Err(unknown()),
            },
            ["steinberg", n] => {
                let n: u32 = num(n, s)?;
                if !(3..=9).contains(&n) {
                    return Err(Error::Domain(format!("steinberg:{n} needs 3 ≤ n ≤ 9")));
                }
                Preset::Steinberg(n)
            }
            ["sl", n, "Z"] => {
                let n: u32 = num(n, s)?;
                if !(2..=9).contains(&n) {
                    return Err(Error::Domain(format!("sl:{n}:Z needs 2 ≤ n ≤ 9")));
                }
                Preset::SlIntegers(n)
            }
            ["sl", n, f] if f.starts_with('F') => {
                let n: u32 = num(n, s)?;
                let p: u32 = num(&f[1..], s)?;
                PrimeField::new(p)?;
                if !(2..=9).contains(&n) {
                    return Err(Error::Domain(format!("{s} needs 2 ≤ n ≤ 9")));
                }
                Preset::SlPrime(n, p)
            }
            ["coxeter", rest @ ..] if !rest.is_empty() => {
                Preset::Coxeter(CoxeterType::parse(&rest.join(":"))?)
            }
            ["gmpn", m, p, n] => {
                let (m, p, n): (u16, u16, u32) = (num(m, s)?, num(p, s)?, num(n, s)?);
                if p == 0 || m == 0 || m % p != 0 {
                    return Err(Error::Group(format!("G({m},{p},{n}) needs p | m")));
                }
                Preset::Gmpn(m, p, n)
            }
            ["a2tilde", "gen"] => Preset::A2TildeGenerated(0),
            ["a2tilde", "gen", k] => Preset::A2TildeGenerated(num(k, s)?),
            ["a2tilde", ..] => Preset::A2TildeFile(PathBuf::from(&s["a2tilde:".len()..])),
            _ => {
                let path = PathBuf::from(s);
                if path.is_file() {
                    Preset::File(path)
                } else {
                    return Err(unknown());
                }
            }
        };
        Ok(p)
    }

    /// Canonical preset string.
    pub fn name(&self) -> String {
        match self {
            Preset::Cyclic(m) => format!("cyclic:{m}"),
            Preset::Free(k) => format!("free:{k}"),
            Preset::Ronan(k) => format!("ronan:G{k}"),
            Preset::Steinberg(n) => format!("steinberg:{n}"),
            Preset::SlIntegers(n) => format!("sl:{n}:Z"),
            Preset::SlPrime(n, p) => format!("sl:{n}:F{p}"),
            Preset::Coxeter(t) => format!("coxeter:{t}"),
            Preset::Gmpn(m, p, n) => format!("gmpn:{m}:{p}:{n}"),
            Preset::A2TildeFile(p) => format!("a2tilde:{}", p.display()),
            Preset::A2TildeGenerated(k) => format!("a2tilde:gen:{k}"),
            Preset::File(p) => p.display().to_string(),
        }
    }

    /// Radius used when `-d` is not given, matching the comparison tables.
    /// Presentation files use the relator-length heuristic.
    pub fn resolve_default_radius(&self) -> Result<usize> {
        let spec = match self {
            Preset::File(_) => self
                .presentation_text()?
                .map(|t| parse_presentation(&t))
                .transpose()?,
            _ => None,
        };
        Ok(self.default_radius(spec.as_ref()))
    }

    fn default_radius(&self, spec: Option<&PresentationSpec>) -> usize {
        match self {
            Preset::Cyclic(_) | Preset::Free(_) => 1,
            Preset::Ronan(_) | Preset::Steinberg(_) => 2,
            Preset::SlIntegers(_) | Preset::SlPrime(..) => 2,
            Preset::Coxeter(t) => t.default_radius(),
            Preset::Gmpn(..) => 3,
            Preset::A2TildeFile(_) | Preset::A2TildeGenerated(_) => 1,
            Preset::File(_) => spec.map(|s| s.suggested_radius()).unwrap_or(1),
        }
    }

    /// Triangle presentation behind an `a2tilde:` preset.
    pub fn triangle(&self) -> Result<Option<TrianglePresentation>> {
        match self {
            Preset::A2TildeFile(p) => Ok(Some(parse_triangle(&std::fs::read_to_string(p)?)?)),
            Preset::A2TildeGenerated(k) => {
                let all = generate_triangle_presentations(2)?;
                let n = all.len();
                all.into_iter().nth(*k).map(Some).ok_or_else(|| {
                    Error::Domain(format!("only {n} generated presentations, index {k}"))
                })
            }
            _ => Ok(None),
        }
    }

    /// Presentation text for presented presets.
    fn presentation_text(&self) -> Result<Option<String>> {
        Ok(match self {
            Preset::Cyclic(m) => Some(cyclic_text(*m)),
            Preset::Free(k) => Some(free_text(*k)),
            Preset::Ronan(k) => Some(ronan_text(*k)),
            Preset::Steinberg(n) => Some(steinberg_text(*n)),
            Preset::Coxeter(t) => Some(t.presentation_text()),
            Preset::A2TildeFile(_) | Preset::A2TildeGenerated(_) => {
                self.triangle()?.map(|t| t.presentation_text())
            }
            Preset::File(p) => Some(std::fs::read_to_string(p)?),
            Preset::SlIntegers(_) | Preset::SlPrime(..) | Preset::Gmpn(..) => None,
        })
    }

    pub fn build(&self, options: BuildOptions) -> Result<BuiltGroup> {
        let name = self.name();
        let inline = matches!(self, Preset::A2TildeFile(_) | Preset::File(_));
        if let Some(text) = self.presentation_text()? {
            let spec = parse_presentation(&text)?;
            let group = presented(&spec, options);
            return Ok(BuiltGroup {
                default_radius: self.default_radius(Some(&spec)),
                name,
                group: AnyGroup::Presented(group),
                presentation: Some(spec),
                inline,
                options,
            });
        }
        let group = match *self {
            Preset::SlIntegers(n) => {
                let (a, g) = elementary_generators(n as usize, &Integers);
                AnyGroup::IntMatrix(MatrixGroup::new(n as usize, Integers, a, g)?)
            }
            Preset::SlPrime(n, p) => {
                let f = PrimeField::new(p)?;
                let (a, g) = elementary_generators(n as usize, &f);
                AnyGroup::PrimeMatrix(MatrixGroup::new(n as usize, f, a, g)?)
            }
            Preset::Gmpn(m, p, n) => AnyGroup::Monomial(MonomialGroup::new(m, p, n as usize)?),
            _ => unreachable!("presented presets handled above"),
        };
        Ok(BuiltGroup {
            default_radius: self.default_radius(None),
            name,
            group,
            presentation: None,
            inline,
            options,
        })
    }

    /// Reference values to compare a run at radius `d` against.
    pub fn references(&self, d: usize, s_size: usize) -> Vec<ReferenceValue> {
        use reference::*;
        let mut out = Vec::new();
        match self {
            Preset::Ronan(_) => {
                out.push(ronan_eps());
                out.push(ronan_kappa());
                if d == 2 {
                    out.push(reported("reported_certified", 0.238, "certified lower bound, d = 2"));
                }
            }
            Preset::Coxeter(t) => {
                out.push(coxeter_gap(*t));
                out.push(coxeter_gap_stated(*t));
                out.push(coxeter_gap_kappa(*t));
                out.extend(coxeter_kappa(*t).ok());
            }
            Preset::A2TildeFile(_) | Preset::A2TildeGenerated(_) => {
                if let Ok(Some(t)) = self.triangle() {
                    if let Ok(e) = eps_q(t.q()) {
                        out.push(ReferenceValue {
                            name: "a2tilde_gap".into(),
                            expression: format!("{s_size}·({})", e.expression),
                            value: e.value * s_size as f64,
                            kind: ReferenceKind::Exact,
                            quantity: Quantity::Epsilon,
                        });
                        out.push(e);
                    }
                    out.extend(a2tilde_kappa(t.q()).ok());
                }
            }
            Preset::SlIntegers(n) => {
                out.extend(kassabov_lower(*n).ok());
                out.extend(zuk_upper(*n).ok());
                if *n == 3 && d == 2 {
                    out.push(reported("reported_certified", 0.2155, "certified lower bound, d = 2"));
                }
            }
            Preset::Steinberg(3) if d == 2 => {
                out.push(reported("reported_certified", 0.171028, "certified lower bound, d = 2"));
            }
            Preset::SlPrime(n, p) => {
                out.extend(kassabov_lower_finite(*n).ok());
                let r = match (n, p, d) {
                    (2, 3, 2) => Some(0.7961),
                    (2, 5, 2) => Some(0.2580),
                    (3, 3, 2) => Some(0.6716),
                    (2, 3, 3) => Some(0.7958),
                    (2, 5, 3) => Some(0.6145),
                    (2, 7, 3) => Some(0.5387),
                    _ => None,
                };
                if let Some(v) = r {
                    out.push(reported("reported_certified", v, &format!("certified lower bound, d = {d}")));
                }
            }
            Preset::Gmpn(m, p, n) => {
                if *p == 1 {
                    out.extend(bagno_kappa_hat(*m as u32, *n).ok());
                }
                if p == m {
                    out.extend(gmmn_upper(*m as u32, *n).ok());
                }
            }
            _ => {}
        }
        out
    }
}

fn presented(spec: &PresentationSpec, options: BuildOptions) -> PresentedGroup {
    let g = PresentedGroup::new(spec.clone(), options.budget);
    match options.closure_radius {
        Some(r) => g.with_ball_closure(r),
        None => g,
    }
}

impl BuiltGroup {
    /// How a certificate for this group names it.
    pub fn descriptor(&self) -> GroupDescriptor {
        GroupDescriptor {
            name: self.name.clone(),
            presentation: if self.inline {
                self.presentation.as_ref().map(|p| p.to_text())
            } else {
                None
            },
            max_rules: self.options.budget.max_rules,
            max_rule_len: self.options.budget.max_rule_len,
            closure_radius: self.options.closure_radius,
        }
    }

    /// Lengths of the defining relators, for presented groups.
    pub fn relator_lengths(&self) -> Vec<usize> {
        self.presentation
            .as_ref()
            .map(|p| p.relators().iter().map(|r| r.len()).collect())
            .unwrap_or_default()
    }

    /// Radius from the relator-length heuristic (least `d` with every
    /// relator shorter than `4d`); `None` for non-presented groups.
    pub fn suggested_radius(&self) -> Option<usize> {
        self.presentation.as_ref().map(|p| p.suggested_radius())
    }
}

/// Rebuilds the group named by a certificate.
pub fn build_from_descriptor(desc: &GroupDescriptor) -> Result<AnyGroup> {
    let options = BuildOptions {
        budget: RewriteBudget {
            max_rules: desc.max_rules,
            max_rule_len: desc.max_rule_len,
        },
        closure_radius: desc.closure_radius,
    };
    match &desc.presentation {
        Some(text) => Ok(AnyGroup::Presented(presented(
            &parse_presentation(text)?,
            options,
        ))),
        None => Ok(Preset::parse(&desc.name)?.build(options)?.group),
    }
}
