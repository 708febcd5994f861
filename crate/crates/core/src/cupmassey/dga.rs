//! Explicit finite DGAs: validation, a text format, and generators.
//!
//! The basis element named `1` is the unit; its products are implicit.

use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::{One, Signed};
use rand::Rng;
use rustc_hash::FxHashMap;

use crate::chaincore::{
    format_rational, parse_rational, CoefficientRing, Field, SparseMatrix, SparseVec,
};

use super::algebra::CochainAlgebra;
use super::MasseyError;

/// A graded-basis algebra with differential and structure constants, all in
/// global basis indices.
#[derive(Clone, Debug)]
pub struct Dga<F: Field> {
    field: F,
    names: Vec<String>,
    degrees: Vec<usize>,
    local: Vec<usize>,
    by_degree: Vec<Vec<usize>>,
    differential: Vec<SparseVec<F::Elem>>,
    products: FxHashMap<(usize, usize), SparseVec<F::Elem>>,
    unit: usize,
}

impl<F: Field> Dga<F> {
    /// Builds and validates: homogeneity, unit, `d∘d = 0`, Leibniz on basis
    /// pairs and associativity on basis triples.
    pub fn new(
        field: F,
        basis: Vec<(String, usize)>,
        differential: Vec<(usize, SparseVec<F::Elem>)>,
        products: Vec<((usize, usize), SparseVec<F::Elem>)>,
    ) -> Result<Self, MasseyError> {
        let n = basis.len();
        let bad = |m: String| MasseyError::InvalidDga(m);
        let mut seen = FxHashMap::default();
        for (i, (name, _)) in basis.iter().enumerate() {
            if seen.insert(name.clone(), i).is_some() {
                return Err(bad(format!("basis element `{name}` listed twice")));
            }
        }
        let unit = *seen
            .get("1")
            .ok_or_else(|| bad("no unit element named `1`".into()))?;
        if basis[unit].1 != 0 {
            return Err(bad("the unit must have degree 0".into()));
        }
        let top = basis.iter().map(|b| b.1).max().unwrap_or(0);
        let mut by_degree = vec![Vec::new(); top + 1];
        let mut local = vec![0; n];
        for (i, (_, d)) in basis.iter().enumerate() {
            local[i] = by_degree[*d].len();
            by_degree[*d].push(i);
        }
        let (names, degrees): (Vec<String>, Vec<usize>) = basis.into_iter().unzip();
        let check_index = |v: &SparseVec<F::Elem>| v.iter().all(|(k, _)| *k < n);
        let mut diff = vec![SparseVec::new(); n];
        for (i, v) in differential {
            if i >= n || !check_index(&v) {
                return Err(bad("differential refers to an unknown basis element".into()));
            }
            if let Some((k, _)) = v.iter().find(|(k, _)| degrees[*k] != degrees[i] + 1) {
                return Err(bad(format!(
                    "d({}) contains `{}` of the wrong degree",
                    names[i], names[*k]
                )));
            }
            diff[i] = v;
        }
        let mut table = FxHashMap::default();
        for ((i, j), v) in products {
            if i >= n || j >= n || !check_index(&v) {
                return Err(bad("product refers to an unknown basis element".into()));
            }
            if let Some((k, _)) = v
                .iter()
                .find(|(k, _)| degrees[*k] != degrees[i] + degrees[j])
            {
                return Err(bad(format!(
                    "{}·{} contains `{}` of the wrong degree",
                    names[i], names[j], names[*k]
                )));
            }
            if (i == unit || j == unit)
                && v != SparseVec::unit(&field, if i == unit { j } else { i })
            {
                return Err(bad(format!(
                    "product {}·{} contradicts the unit",
                    names[i], names[j]
                )));
            }
            if !v.is_empty() {
                table.insert((i, j), v);
            }
        }
        for i in 0..n {
            table.insert((unit, i), SparseVec::unit(&field, i));
            table.insert((i, unit), SparseVec::unit(&field, i));
        }
        let dga = Dga {
            field,
            names,
            degrees,
            local,
            by_degree,
            differential: diff,
            products: table,
            unit,
        };
        dga.validate()?;
        Ok(dga)
    }

    fn validate(&self) -> Result<(), MasseyError> {
        let bad = |m: String| Err(MasseyError::InvalidDga(m));
        let f = &self.field;
        let n = self.names.len();
        if !self.differential[self.unit].is_empty() {
            return bad("d(1) must vanish".into());
        }
        for i in 0..n {
            if !self.d_global(&self.differential[i]).is_empty() {
                return bad(format!("d∘d is nonzero on `{}`", self.names[i]));
            }
        }
        let sign = |a: usize| {
            if self.degrees[a] % 2 == 0 {
                f.one()
            } else {
                f.neg(&f.one())
            }
        };
        for a in 0..n {
            for b in 0..n {
                let ab = SparseVec::unit(f, a);
                let bb = SparseVec::unit(f, b);
                let lhs = self.d_global(&self.mul_global(&ab, &bb));
                let r1 = self.mul_global(&self.differential[a], &bb);
                let r2 = self.mul_global(&ab, &self.differential[b]);
                if lhs != r1.axpy(f, &sign(a), &r2) {
                    return bad(format!(
                        "Leibniz rule fails on ({}, {})",
                        self.names[a], self.names[b]
                    ));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let Some(ab) = self.products.get(&(a, b)) else {
                    continue;
                };
                for c in 0..n {
                    let cv = SparseVec::unit(f, c);
                    let left = self.mul_global(ab, &cv);
                    let right = self.mul_global(
                        &SparseVec::unit(f, a),
                        &self.mul_global(&SparseVec::unit(f, b), &cv),
                    );
                    if left != right {
                        return bad(format!(
                            "product is not associative on ({}, {}, {})",
                            self.names[a], self.names[b], self.names[c]
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    fn d_global(&self, v: &SparseVec<F::Elem>) -> SparseVec<F::Elem> {
        let mut pairs = Vec::new();
        for (i, c) in v.iter() {
            pairs.extend(
                self.differential[*i]
                    .iter()
                    .map(|(k, x)| (*k, self.field.mul(c, x))),
            );
        }
        SparseVec::from_pairs(&self.field, pairs)
    }

    fn mul_global(&self, a: &SparseVec<F::Elem>, b: &SparseVec<F::Elem>) -> SparseVec<F::Elem> {
        let f = &self.field;
        let mut pairs = Vec::new();
        for (i, x) in a.iter() {
            for (j, y) in b.iter() {
                if let Some(p) = self.products.get(&(*i, *j)) {
                    let c = f.mul(x, y);
                    pairs.extend(p.iter().map(|(k, z)| (*k, f.mul(&c, z))));
                }
            }
        }
        SparseVec::from_pairs(f, pairs)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn degree_of(&self, i: usize) -> usize {
        self.degrees[i]
    }

    /// Global indices of the basis in one degree.
    pub fn basis_in_degree(&self, d: usize) -> &[usize] {
        self.by_degree.get(d).map_or(&[], |v| v.as_slice())
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// A basis element as a vector in its own degree.
    pub fn element(&self, name: &str) -> Option<(usize, SparseVec<F::Elem>)> {
        let i = self.index_of(name)?;
        Some((self.degrees[i], SparseVec::unit(&self.field, self.local[i])))
    }

    /// Renders a degree-`d` vector as a linear combination of basis names.
    pub fn format_vector(&self, d: usize, v: &SparseVec<F::Elem>) -> String {
        let terms: Vec<(String, BigRational)> = v
            .iter()
            .filter(|(_, c)| !self.field.is_zero(c))
            .map(|(i, c)| {
                (
                    self.names[self.by_degree[d][*i]].clone(),
                    self.field.to_rational(c),
                )
            })
            .collect();
        format_combination(&terms)
    }

    /// The untyped description of this algebra.
    pub fn to_file(&self) -> DgaFile {
        let f = &self.field;
        let name = |i: usize| self.names[i].clone();
        let combo = |v: &SparseVec<F::Elem>| {
            v.iter()
                .map(|(k, c)| (name(*k), f.to_rational(c)))
                .collect::<Vec<_>>()
        };
        let basis = self
            .names
            .iter()
            .cloned()
            .zip(self.degrees.iter().copied())
            .collect();
        let differential = (0..self.names.len())
            .filter(|&i| !self.differential[i].is_empty())
            .map(|i| (name(i), combo(&self.differential[i])))
            .collect();
        let mut keys: Vec<&(usize, usize)> = self
            .products
            .keys()
            .filter(|(a, b)| *a != self.unit && *b != self.unit)
            .collect();
        keys.sort();
        let products = keys
            .into_iter()
            .map(|&(a, b)| ((name(a), name(b)), combo(&self.products[&(a, b)])))
            .collect();
        DgaFile {
            ring: f.ring(),
            basis,
            differential,
            products,
        }
    }
}

impl<F: Field> CochainAlgebra for Dga<F> {
    type F = F;

    fn field(&self) -> &F {
        &self.field
    }

    fn top_degree(&self) -> usize {
        self.by_degree.len() - 1
    }

    fn dim(&self, degree: usize) -> usize {
        self.by_degree.get(degree).map_or(0, Vec::len)
    }

    fn differential(&self, degree: usize) -> SparseMatrix<F::Elem> {
        let cols = self
            .basis_in_degree(degree)
            .iter()
            .map(|&g| {
                SparseVec::from_pairs(
                    &self.field,
                    self.differential[g]
                        .iter()
                        .map(|(k, c)| (self.local[*k], c.clone()))
                        .collect(),
                )
            })
            .collect();
        SparseMatrix::from_columns(self.dim(degree + 1), cols).expect("homogeneous differential")
    }

    fn multiply(
        &self,
        p: usize,
        a: &SparseVec<F::Elem>,
        q: usize,
        b: &SparseVec<F::Elem>,
    ) -> SparseVec<F::Elem> {
        let f = &self.field;
        let mut pairs = Vec::new();
        for (i, x) in a.iter() {
            let gi = self.by_degree[p][*i];
            for (j, y) in b.iter() {
                let gj = self.by_degree[q][*j];
                if let Some(prod) = self.products.get(&(gi, gj)) {
                    let c = f.mul(x, y);
                    pairs.extend(prod.iter().map(|(k, z)| (self.local[*k], f.mul(&c, z))));
                }
            }
        }
        SparseVec::from_pairs(f, pairs)
    }
}

type Combination = Vec<(String, BigRational)>;

/// A DGA as read from text: coefficients are rationals, names unresolved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgaFile {
    pub ring: CoefficientRing,
    pub basis: Vec<(String, usize)>,
    pub differential: Vec<(String, Combination)>,
    pub products: Vec<((String, String), Combination)>,
}

fn format_combination(terms: &[(String, BigRational)]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (name, c)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !mag.is_one() {
            let _ = write!(out, "{}*", format_rational(&mag));
        }
        out.push_str(name);
    }
    out
}

fn valid_name(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

fn parse_combination(s: &str, line: usize) -> Result<Combination, MasseyError> {
    let err = |msg: String| MasseyError::Parse { line, msg };
    let s = s.trim();
    if s == "0" {
        return Ok(Vec::new());
    }
    let mut terms = Vec::new();
    let mut rest = s;
    let mut sign = BigRational::one();
    let mut first = true;
    while !rest.is_empty() {
        rest = rest.trim_start();
        if let Some(r) = rest.strip_prefix('+') {
            if first {
                return Err(err(format!("leading `+` in `{s}`")));
            }
            rest = r;
        } else if let Some(r) = rest.strip_prefix('-') {
            sign = -sign;
            rest = r;
        } else if !first {
            return Err(err(format!("expected `+` or `-` in `{s}`")));
        }
        rest = rest.trim_start();
        let end = rest.find(['+', '-']).unwrap_or(rest.len());
        let term = rest[..end].trim();
        rest = &rest[end..];
        let (coef, name) = match term.rsplit_once(['*', '·']) {
            Some((c, n)) => (parse_rational(c).map_err(|e| err(e.to_string()))?, n.trim()),
            None => match term.split_once(char::is_whitespace) {
                Some((c, n)) => (parse_rational(c).map_err(|e| err(e.to_string()))?, n.trim()),
                None => (BigRational::one(), term),
            },
        };
        if !valid_name(name) {
            return Err(err(format!("bad basis name `{name}`")));
        }
        terms.push((name.to_string(), &sign * coef));
        sign = BigRational::one();
        first = false;
    }
    Ok(terms)
}

impl DgaFile {
    /// Parses the text format. Lines: `RING <Z|Q|Fp:p>`, section headers
    /// `BASIS`, `DIFFERENTIAL`, `PRODUCT`; entries `name degree`,
    /// `name -> combination` and `a*b -> combination`. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, MasseyError> {
        #[derive(PartialEq)]
        enum Section {
            None,
            Basis,
            Differential,
            Product,
        }
        let mut section = Section::None;
        let mut file = DgaFile {
            ring: CoefficientRing::Rationals,
            basis: Vec::new(),
            differential: Vec::new(),
            products: Vec::new(),
        };
        for (no, raw) in text.lines().enumerate() {
            let line = no + 1;
            let err = |msg: String| MasseyError::Parse { line, msg };
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            match content {
                "BASIS" => section = Section::Basis,
                "DIFFERENTIAL" => section = Section::Differential,
                "PRODUCT" => section = Section::Product,
                _ if content.starts_with("RING") => {
                    let r = content["RING".len()..].trim();
                    file.ring = r
                        .parse()
                        .map_err(|e: crate::chaincore::ChainError| err(e.to_string()))?;
                }
                _ => match section {
                    Section::None => return Err(err(format!("`{content}` outside any section"))),
                    Section::Basis => {
                        let mut it = content.split_whitespace();
                        let (Some(name), Some(deg), None) = (it.next(), it.next(), it.next())
                        else {
                            return Err(err(format!("expected `name degree`, got `{content}`")));
                        };
                        if !valid_name(name) {
                            return Err(err(format!("bad basis name `{name}`")));
                        }
                        let deg: usize = deg
                            .parse()
                            .map_err(|_| err(format!("bad degree `{deg}`")))?;
                        file.basis.push((name.to_string(), deg));
                    }
                    Section::Differential => {
                        let (lhs, rhs) = content
                            .split_once("->")
                            .ok_or_else(|| err("expected `->`".into()))?;
                        let lhs = lhs.trim();
                        if !valid_name(lhs) {
                            return Err(err(format!("bad basis name `{lhs}`")));
                        }
                        file.differential
                            .push((lhs.to_string(), parse_combination(rhs, line)?));
                    }
                    Section::Product => {
                        let (lhs, rhs) = content
                            .split_once("->")
                            .ok_or_else(|| err("expected `->`".into()))?;
                        let (a, b) = lhs
                            .split_once(['*', '·'])
                            .ok_or_else(|| err(format!("expected `a*b`, got `{}`", lhs.trim())))?;
                        let (a, b) = (a.trim(), b.trim());
                        if !valid_name(a) || !valid_name(b) {
                            return Err(err(format!("bad product `{}`", lhs.trim())));
                        }
                        file.products.push((
                            (a.to_string(), b.to_string()),
                            parse_combination(rhs, line)?,
                        ));
                    }
                },
            }
        }
        Ok(file)
    }

    pub fn render(&self) -> String {
        let mut out = format!("RING {}\nBASIS\n", self.ring);
        for (n, d) in &self.basis {
            let _ = writeln!(out, "{n} {d}");
        }
        out.push_str("DIFFERENTIAL\n");
        for (n, c) in &self.differential {
            let _ = writeln!(out, "{n} -> {}", format_combination(c));
        }
        out.push_str("PRODUCT\n");
        for ((a, b), c) in &self.products {
            let _ = writeln!(out, "{a}*{b} -> {}", format_combination(c));
        }
        out
    }

    /// Resolves names and maps coefficients into `field`.
    pub fn build<F: Field>(&self, field: F) -> Result<Dga<F>, MasseyError> {
        let index: FxHashMap<&str, usize> = self
            .basis
            .iter()
            .enumerate()
            .map(|(i, (n, _))| (n.as_str(), i))
            .collect();
        let lookup = |n: &str| {
            index
                .get(n)
                .copied()
                .ok_or_else(|| MasseyError::InvalidDga(format!("unknown basis element `{n}`")))
        };
        let vec = |c: &Combination| -> Result<SparseVec<F::Elem>, MasseyError> {
            let mut pairs = Vec::new();
            for (n, q) in c {
                let x = field.from_rational(q).ok_or_else(|| {
                    MasseyError::InvalidDga(format!(
                        "coefficient {q} is undefined in {}",
                        field.ring()
                    ))
                })?;
                pairs.push((lookup(n)?, x));
            }
            Ok(SparseVec::from_pairs(&field, pairs))
        };
        let mut diff = Vec::new();
        for (n, c) in &self.differential {
            diff.push((lookup(n)?, vec(c)?));
        }
        let mut prods = Vec::new();
        for ((a, b), c) in &self.products {
            prods.push(((lookup(a)?, lookup(b)?), vec(c)?));
        }
        Dga::new(field.clone(), self.basis.clone(), diff, prods)
    }
}

/// Subsets of `0..k` of size at most `max_degree`, by size then lexicographically.
fn monomials(k: usize, max_degree: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    for size in 1..=max_degree.min(k) {
        let mut cur: Vec<usize> = (0..size).collect();
        loop {
            out.push(cur.clone());
            let mut i = size;
            while i > 0 && cur[i - 1] == k - size + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            cur[i - 1] += 1;
            for j in i..size {
                cur[j] = cur[j - 1] + 1;
            }
        }
    }
    out
}

fn generator_name(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("g{i}_")
    }
}

/// The exterior algebra on `k` degree-one generators, truncated above
/// `max_degree`, with `d(gᵢ) = Σ c · gⱼgₗ` (each entry `(j, l, c)`, `j < l`).
/// The differential on monomials follows from the Leibniz rule.
pub fn exterior_dga<F: Field>(
    field: F,
    k: usize,
    max_degree: usize,
    generator_differential: &[Vec<(usize, usize, F::Elem)>],
) -> Result<Dga<F>, MasseyError> {
    let monos = monomials(k, max_degree);
    let index: FxHashMap<Vec<usize>, usize> = monos
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    let name = |m: &Vec<usize>| {
        if m.is_empty() {
            "1".to_string()
        } else {
            m.iter().map(|&i| generator_name(i)).collect()
        }
    };
    let basis: Vec<(String, usize)> = monos.iter().map(|m| (name(m), m.len())).collect();
    // Product of monomials with the Koszul sign, or None when it vanishes.
    let mono_mul = |a: &[usize], b: &[usize]| -> Option<(usize, bool)> {
        if a.len() + b.len() > max_degree || a.iter().any(|x| b.contains(x)) {
            return None;
        }
        let inversions: usize = a.iter().map(|x| b.iter().filter(|y| *y < x).count()).sum();
        let mut m: Vec<usize> = a.iter().chain(b).copied().collect();
        m.sort_unstable();
        Some((index[&m], inversions % 2 == 1))
    };
    let one = field.one();
    let mut products = Vec::new();
    for (i, a) in monos.iter().enumerate() {
        for (j, b) in monos.iter().enumerate() {
            if a.is_empty() || b.is_empty() {
                continue;
            }
            if let Some((t, neg)) = mono_mul(a, b) {
                products.push((
                    (i, j),
                    SparseVec::unit(&field, t)
                        .scale(&field, &if neg { field.neg(&one) } else { one.clone() }),
                ));
            }
        }
    }
    // d(gᵢ · m) = d(gᵢ)·m − gᵢ·d(m), by increasing monomial size.
    let mut diff: Vec<SparseVec<F::Elem>> = vec![SparseVec::new(); monos.len()];
    let mul_vec = |a: &SparseVec<F::Elem>, b: &SparseVec<F::Elem>| -> SparseVec<F::Elem> {
        let mut pairs = Vec::new();
        for (i, x) in a.iter() {
            for (j, y) in b.iter() {
                if let Some((t, neg)) = mono_mul(&monos[*i], &monos[*j]) {
                    let c = field.mul(x, y);
                    pairs.push((t, if neg { field.neg(&c) } else { c }));
                }
            }
        }
        SparseVec::from_pairs(&field, pairs)
    };
    for (i, m) in monos.iter().enumerate() {
        match m.len() {
            0 => {}
            1 => {
                let g = m[0];
                let pairs = generator_differential
                    .get(g)
                    .map(|terms| {
                        terms
                            .iter()
                            .filter_map(|(j, l, c)| {
                                let key = vec![*j.min(l), *j.max(l)];
                                let sign_flip = j > l;
                                index
                                    .get(&key)
                                    .map(|&t| (t, if sign_flip { field.neg(c) } else { c.clone() }))
                            })
                            .collect()
                    })
                    .unwrap_or_default();
                diff[i] = SparseVec::from_pairs(&field, pairs);
            }
            _ => {
                let head = index[&vec![m[0]]];
                let tail = index[&m[1..].to_vec()];
                let h = SparseVec::unit(&field, head);
                let t = SparseVec::unit(&field, tail);
                let a = mul_vec(&diff[head], &t);
                let b = mul_vec(&h, &diff[tail]);
                diff[i] = a.sub(&field, &b);
            }
        }
    }
    let differential = diff
        .into_iter()
        .enumerate()
        .filter(|(_, v)| !v.is_empty())
        .collect();
    Dga::new(field, basis, differential, products)
}

/// The Heisenberg algebra: `Λ(a, b, c)` with `dc = ab`.
pub fn heisenberg<F: Field>(field: F) -> Dga<F> {
    let one = field.one();
    exterior_dga(field, 3, 3, &[vec![], vec![], vec![(0, 1, one)]])
        .expect("the Heisenberg algebra is a DGA")
}

/// A random truncated exterior DGA with at most 12 basis elements and
/// `d(gᵢ)` supported on products of earlier generators.
pub fn random_exterior_dga<F: Field>(field: F, rng: &mut impl Rng) -> Dga<F> {
    let elements = field.elements();
    let sample = |rng: &mut dyn rand::RngCore| -> F::Elem {
        match &elements {
            Some(all) => all[rng.gen_range(0..all.len())].clone(),
            None => field.from_i64(rng.gen_range(-2..=2)),
        }
    };
    loop {
        let (k, max_degree) = match rng.gen_range(0..4) {
            0 => (2, 2),
            1 => (3, 2),
            2 => (3, 3),
            _ => (4, 2),
        };
        let mut gd: Vec<Vec<(usize, usize, F::Elem)>> = vec![Vec::new(); k];
        for (i, terms) in gd.iter_mut().enumerate() {
            for l in 0..i {
                for j in 0..l {
                    if rng.gen_bool(0.6) {
                        let c = sample(rng);
                        if !field.is_zero(&c) {
                            terms.push((j, l, c));
                        }
                    }
                }
            }
        }
        if let Ok(d) = exterior_dga(field.clone(), k, max_degree, &gd) {
            return d;
        }
    }
}

impl<F: Field> Dga<F> {
    /// Total number of basis elements.
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}
