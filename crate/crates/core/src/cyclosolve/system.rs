//! Congruence systems `ζ^α·u = ζ^β·u` with magnitude constraints and a box.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::chaincore::{format_rational, parse_rational};

use super::affine::{Affine, PhaseExponent, Q};
use super::CycloError;

/// What is known about the modulus of a complex (or radial) variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MagnitudeKind {
    Zero,
    Nonzero,
    Free,
}

impl fmt::Display for MagnitudeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MagnitudeKind::Zero => "ZERO",
            MagnitudeKind::Nonzero => "NONZERO",
            MagnitudeKind::Free => "FREE",
        })
    }
}

/// `ζ^lhs · var = ζ^rhs · var`; without a variable both sides multiply 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Equation {
    pub lhs: PhaseExponent,
    pub rhs: PhaseExponent,
    pub var: Option<String>,
}

impl Equation {
    /// `θ₁ − θ₂`, which must be a multiple of the modulus when active.
    pub fn difference(&self) -> Affine {
        self.lhs.exponent.sub(&self.rhs.exponent)
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.var {
            Some(v) => write!(f, "{}*{v} == {}*{v}", self.lhs, self.rhs),
            None => write!(f, "{} == {}", self.lhs, self.rhs),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceSystem {
    pub modulus: u32,
    /// Parameters with closed boxes, in elimination order.
    pub params: Vec<(String, Q, Q)>,
    pub magnitudes: Vec<(String, MagnitudeKind)>,
    /// Each group lies on a unit sphere `Σ|v|² = 1`, so not all vanish.
    pub spheres: Vec<Vec<String>>,
    pub equations: Vec<Equation>,
}

impl CongruenceSystem {
    pub fn new(modulus: u32) -> Self {
        CongruenceSystem {
            modulus,
            params: Vec::new(),
            magnitudes: Vec::new(),
            spheres: Vec::new(),
            equations: Vec::new(),
        }
    }

    pub fn param(mut self, name: &str, lo: Q, hi: Q) -> Self {
        self.params.push((name.to_string(), lo, hi));
        self
    }

    pub fn magnitude(mut self, name: &str, kind: MagnitudeKind) -> Self {
        self.magnitudes.push((name.to_string(), kind));
        self
    }

    pub fn sphere(mut self, group: &[&str]) -> Self {
        self.spheres
            .push(group.iter().map(|s| s.to_string()).collect());
        self
    }

    /// Adds `ζ^lhs · var = ζ^rhs · var`.
    pub fn equation(mut self, lhs: Affine, rhs: Affine, var: Option<&str>) -> Self {
        let m = self.modulus;
        self.equations.push(Equation {
            lhs: PhaseExponent {
                exponent: lhs,
                modulus: m,
            },
            rhs: PhaseExponent {
                exponent: rhs,
                modulus: m,
            },
            var: var.map(str::to_string),
        });
        self
    }

    pub fn param_names(&self) -> Vec<String> {
        self.params.iter().map(|p| p.0.clone()).collect()
    }

    pub fn bounds(&self) -> BTreeMap<String, (Q, Q)> {
        self.params
            .iter()
            .map(|(n, a, b)| (n.clone(), (a.clone(), b.clone())))
            .collect()
    }

    pub fn kind_of(&self, var: &str) -> Option<MagnitudeKind> {
        self.magnitudes
            .iter()
            .find(|(n, _)| n == var)
            .map(|&(_, k)| k)
    }

    pub fn validate(&self) -> Result<(), CycloError> {
        if self.modulus < 2 {
            return Err(CycloError::Invalid(format!(
                "modulus must be at least 2, got {}",
                self.modulus
            )));
        }
        let mut names = BTreeSet::new();
        for (n, lo, hi) in &self.params {
            if lo > hi {
                return Err(CycloError::Invalid(format!("empty box for {n}")));
            }
            if !names.insert(n.as_str()) {
                return Err(CycloError::Invalid(format!("parameter {n} declared twice")));
            }
        }
        let mut vars = BTreeSet::new();
        for (v, _) in &self.magnitudes {
            if names.contains(v.as_str()) || !vars.insert(v.as_str()) {
                return Err(CycloError::Invalid(format!("variable {v} declared twice")));
            }
        }
        for g in &self.spheres {
            if let Some(v) = g.iter().find(|v| !vars.contains(v.as_str())) {
                return Err(CycloError::Invalid(format!(
                    "sphere uses undeclared variable {v}"
                )));
            }
        }
        for e in &self.equations {
            if e.lhs.modulus != self.modulus || e.rhs.modulus != self.modulus {
                return Err(CycloError::Invalid(format!(
                    "equation {e} has a different modulus"
                )));
            }
            if let Some(v) = &e.var {
                if !vars.contains(v.as_str()) {
                    return Err(CycloError::Invalid(format!(
                        "equation uses undeclared variable {v}"
                    )));
                }
            }
            for p in e.lhs.exponent.params().chain(e.rhs.exponent.params()) {
                if !names.contains(p) {
                    return Err(CycloError::Invalid(format!(
                        "equation uses undeclared parameter {p}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Line-oriented text form, `#` comments allowed:
    ///
    /// ```text
    /// modulus 7
    /// t in [0,1]
    /// r in FREE
    /// sphere r x
    /// zeta(4t)*r == zeta(1+s)*r
    /// ```
    pub fn parse(text: &str) -> Result<Self, CycloError> {
        let mut sys: Option<CongruenceSystem> = None;
        let mut pending: Vec<(usize, String)> = Vec::new();
        let err = |line: usize, msg: String| CycloError::Parse { line, msg };
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("modulus") {
                let m: u32 = rest
                    .trim()
                    .parse()
                    .map_err(|_| err(line_no, format!("bad modulus '{}'", rest.trim())))?;
                if sys.is_some() {
                    return Err(err(line_no, "modulus declared twice".into()));
                }
                sys = Some(CongruenceSystem::new(m));
                continue;
            }
            let s = sys
                .as_mut()
                .ok_or_else(|| err(line_no, "the first statement must be 'modulus m'".into()))?;
            if let Some(rest) = line.strip_prefix("sphere ") {
                s.spheres
                    .push(rest.split_whitespace().map(str::to_string).collect());
            } else if line.contains("==") {
                pending.push((line_no, line.to_string()));
            } else if let Some((name, spec)) = line.split_once(" in ") {
                let name = name.trim().to_string();
                let spec = spec.trim();
                if let Some(inner) = spec.strip_prefix('[').and_then(|x| x.strip_suffix(']')) {
                    let (a, b) = inner
                        .split_once(',')
                        .ok_or_else(|| err(line_no, "box needs '[a,b]'".into()))?;
                    let lo = parse_rational(a.trim()).map_err(|e| err(line_no, e.to_string()))?;
                    let hi = parse_rational(b.trim()).map_err(|e| err(line_no, e.to_string()))?;
                    s.params.push((name, lo, hi));
                } else {
                    let kind = match spec.trim_start_matches('{').trim_end_matches('}') {
                        "ZERO" => MagnitudeKind::Zero,
                        "NONZERO" => MagnitudeKind::Nonzero,
                        "FREE" => MagnitudeKind::Free,
                        other => {
                            return Err(err(line_no, format!("unknown magnitude kind '{other}'")))
                        }
                    };
                    s.magnitudes.push((name, kind));
                }
            } else {
                return Err(err(line_no, format!("unrecognised statement '{line}'")));
            }
        }
        let mut sys = sys.ok_or_else(|| err(0, "missing 'modulus m'".into()))?;
        for (line_no, line) in pending {
            let (l, r) = line.split_once("==").expect("checked above");
            let (la, lv) = parse_side(l.trim()).map_err(|m| err(line_no, m))?;
            let (ra, rv) = parse_side(r.trim()).map_err(|m| err(line_no, m))?;
            if lv != rv {
                return Err(err(
                    line_no,
                    "both sides must carry the same variable".into(),
                ));
            }
            sys = sys.equation(la, ra, lv.as_deref());
        }
        sys.validate()?;
        Ok(sys)
    }

    pub fn render(&self) -> String {
        let mut out = format!("modulus {}\n", self.modulus);
        for (n, a, b) in &self.params {
            out += &format!("{n} in [{},{}]\n", format_rational(a), format_rational(b));
        }
        for (v, k) in &self.magnitudes {
            out += &format!("{v} in {k}\n");
        }
        for g in &self.spheres {
            out += &format!("sphere {}\n", g.join(" "));
        }
        for e in &self.equations {
            out += &format!("{e}\n");
        }
        out
    }
}

/// `zeta(expr)`, `zeta(expr)*var` or a bare `var` (exponent zero).
fn parse_side(s: &str) -> Result<(Affine, Option<String>), String> {
    if let Some(rest) = s.strip_prefix("zeta(") {
        let close = matching_paren(rest).ok_or("unbalanced parentheses")?;
        let expr = Affine::parse(&rest[..close]).map_err(|e| e.to_string())?;
        let tail = rest[close + 1..].trim();
        if tail.is_empty() {
            return Ok((expr, None));
        }
        let var = tail
            .strip_prefix('*')
            .ok_or("expected '*var' after zeta(...)")?
            .trim();
        if var.is_empty() || !var.chars().all(|c| c.is_alphanumeric() || c == '_') {
            return Err(format!("bad variable '{var}'"));
        }
        Ok((expr, Some(var.to_string())))
    } else if !s.is_empty() && s.chars().all(|c| c.is_alphanumeric() || c == '_') {
        if s == "1" {
            Ok((Affine::default(), None))
        } else {
            Ok((Affine::default(), Some(s.to_string())))
        }
    } else {
        Err(format!("cannot read side '{s}'"))
    }
}

fn matching_paren(s: &str) -> Option<usize> {
    let mut depth = 1usize;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    const TEXT: &str =
        "modulus 7\n# X against A\nt in [0,1]\ns in [0,1]\nr in FREE\nx in FREE\nsphere r x\n\
                        zeta(4t)*r == zeta(1+s)*r\nzeta(t)*x == zeta(2+2s)*x\n";

    #[test]
    fn round_trip() {
        let s = CongruenceSystem::parse(TEXT).unwrap();
        assert_eq!(s.equations.len(), 2);
        assert_eq!(
            s.equations[0].difference(),
            Affine::parse("4t - 1 - s").unwrap()
        );
        assert_eq!(CongruenceSystem::parse(&s.render()).unwrap(), s);
    }

    #[test]
    fn parse_errors_have_lines() {
        let bad = "modulus 7\nt in [0,1]\nzeta(t)*r == zeta(1)*x\n";
        match CongruenceSystem::parse(bad) {
            Err(CycloError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(CongruenceSystem::parse("t in [0,1]\n").is_err());
        assert!(CongruenceSystem::parse("modulus 7\nzeta(u) == zeta(0)\n").is_err());
        assert!(CongruenceSystem::parse("modulus 7\nt in [1,0]\n").is_err());
    }
}
