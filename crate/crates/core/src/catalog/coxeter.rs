//! Dynkin data for the finite irreducible Coxeter groups.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoxeterType {
    A(u32),
    B(u32),
    D(u32),
    E(u32),
    F4,
    H(u32),
    /// Dihedral group of order `2m`.
    I2(u32),
}

impl CoxeterType {
    /// Parses `A3`, `B2`, `D4`, `E6`, `F4`, `H3`, `I2:5` (or `I2(5)`).
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::UnknownPreset(format!("coxeter:{s}"));
        if let Some(rest) = s.strip_prefix("I2") {
            let m = rest
                .trim_start_matches([':', '(', '_'])
                .trim_end_matches(')')
                .parse::<u32>()
                .map_err(|_| bad())?;
            return Self::checked(CoxeterType::I2(m));
        }
        let mut chars = s.chars();
        let fam = chars.next().ok_or_else(bad)?;
        let n: u32 = chars.as_str().trim_start_matches('_').parse().map_err(|_| bad())?;
        let t = match fam {
            'A' => CoxeterType::A(n),
            'B' => CoxeterType::B(n),
            'D' => CoxeterType::D(n),
            'E' => CoxeterType::E(n),
            'F' if n == 4 => CoxeterType::F4,
            'H' => CoxeterType::H(n),
            _ => return Err(bad()),
        };
        Self::checked(t)
    }

    fn checked(t: Self) -> Result<Self> {
        let ok = match t {
            CoxeterType::A(n) => n >= 1,
            CoxeterType::B(n) => n >= 2,
            CoxeterType::D(n) => n >= 4,
            CoxeterType::E(n) => (6..=8).contains(&n),
            CoxeterType::F4 => true,
            CoxeterType::H(n) => (3..=4).contains(&n),
            CoxeterType::I2(m) => m >= 3,
        };
        if ok {
            Ok(t)
        } else {
            Err(Error::Domain(format!("no Coxeter group of type {t}")))
        }
    }

    pub fn rank(self) -> usize {
        match self {
            CoxeterType::A(n)
            | CoxeterType::B(n)
            | CoxeterType::D(n)
            | CoxeterType::E(n)
            | CoxeterType::H(n) => n as usize,
            CoxeterType::F4 => 4,
            CoxeterType::I2(_) => 2,
        }
    }

    pub fn coxeter_number(self) -> u32 {
        match self {
            CoxeterType::A(n) => n + 1,
            CoxeterType::B(n) => 2 * n,
            CoxeterType::D(n) => 2 * (n - 1),
            CoxeterType::E(6) => 12,
            CoxeterType::E(7) => 18,
            CoxeterType::E(_) => 30,
            CoxeterType::F4 => 12,
            CoxeterType::H(3) => 10,
            CoxeterType::H(_) => 30,
            CoxeterType::I2(m) => m,
        }
    }

    /// Edges `(i, j, m_ij)` of the Dynkin diagram, 0-based, `m_ij ≥ 3`.
    /// Unlisted pairs commute.
    pub fn edges(self) -> Vec<(usize, usize, u32)> {
        let chain = |k: usize| (0..k.saturating_sub(1)).map(|i| (i, i + 1, 3)).collect::<Vec<_>>();
        match self {
            CoxeterType::A(n) => chain(n as usize),
            CoxeterType::B(n) => {
                let mut e = chain(n as usize);
                e.last_mut().unwrap().2 = 4;
                e
            }
            CoxeterType::D(n) => {
                let n = n as usize;
                let mut e = chain(n - 1);
                e.push((n - 3, n - 1, 3));
                e
            }
            CoxeterType::E(n) => {
                let n = n as usize;
                let mut e = chain(n - 1);
                e.push((2, n - 1, 3));
                e
            }
            CoxeterType::F4 => vec![(0, 1, 3), (1, 2, 4), (2, 3, 3)],
            CoxeterType::H(n) => {
                let mut e = chain(n as usize);
                e[0].2 = 5;
                e
            }
            CoxeterType::I2(m) => vec![(0, 1, m)],
        }
    }

    /// Presentation text with involutions `s1..sn`.
    pub fn presentation_text(self) -> String {
        let n = self.rank();
        let names: Vec<String> = (1..=n).map(|i| format!("s{i}")).collect();
        let mut m = vec![vec![2u32; n]; n];
        for (i, j, v) in self.edges() {
            m[i][j] = v;
            m[j][i] = v;
        }
        let mut out = format!("involutions: {}\n", names.join(" "));
        for i in 0..n {
            for j in i + 1..n {
                out.push_str(&format!("rel: ({} {})^{}\n", names[i], names[j], m[i][j]));
            }
        }
        out
    }

    /// Radius the comparison tables use: 2 for simply laced types, else 3.
    pub fn default_radius(self) -> usize {
        match self {
            CoxeterType::A(_) | CoxeterType::D(_) | CoxeterType::E(_) => 2,
            _ => 3,
        }
    }
}

impl fmt::Display for CoxeterType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoxeterType::A(n) => write!(f, "A{n}"),
            CoxeterType::B(n) => write!(f, "B{n}"),
            CoxeterType::D(n) => write!(f, "D{n}"),
            CoxeterType::E(n) => write!(f, "E{n}"),
            CoxeterType::F4 => write!(f, "F4"),
            CoxeterType::H(n) => write!(f, "H{n}"),
            CoxeterType::I2(m) => write!(f, "I2:{m}"),
        }
    }
}
