//! Graded-commutative presentations and a Batalin–Vilkovisky axiom checker
//! on finite degree windows.
//!
//! Degrees are the shifted string-homology degrees; parity is `degree mod 2`.
//! Monomials are exponent vectors in generator order. Odd generators appear
//! at most once, root generators (`y^p = 1`) are reduced mod `p`, and any
//! monomial divisible by an annihilator is zero.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::BvError;
use crate::sector::SectorRing;

pub type Q = BigRational;
pub type Monomial = Vec<u32>;

fn odd(d: i64) -> bool {
    d.rem_euclid(2) == 1
}

fn sign(negative: bool) -> Q {
    if negative {
        -Q::one()
    } else {
        Q::one()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
    /// `Some(p)` for a central relation `g^p = 1`.
    pub root_order: Option<u32>,
}

impl Generator {
    pub fn new(name: &str, degree: i64) -> Self {
        Generator { name: name.to_string(), degree, root_order: None }
    }

    pub fn root(name: &str, p: u32) -> Self {
        Generator { name: name.to_string(), degree: 0, root_order: Some(p) }
    }
}

/// A linear combination of normal-form monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Q>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn term(m: Monomial, c: Q) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(m, c);
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Polynomial::zero();
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, v) in &other.terms {
            out.add_term(m.clone(), v.clone());
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPresentation {
    name: String,
    generators: Vec<Generator>,
    annihilators: Vec<Monomial>,
}

impl GradedPresentation {
    /// Root generators must be even of degree 0 and may not occur in
    /// annihilators; otherwise `y^p = 1` and `y·m = 0` would give two normal
    /// forms for `m`.
    pub fn new(name: &str, generators: Vec<Generator>, annihilators: Vec<Monomial>) -> Result<Self, BvError> {
        let n = generators.len();
        for (i, g) in generators.iter().enumerate() {
            if generators[..i].iter().any(|h| h.name == g.name) {
                return Err(BvError::Presentation(format!("duplicate generator {}", g.name)));
            }
            match g.root_order {
                Some(0) => return Err(BvError::ZeroOrder),
                Some(_) if g.degree != 0 => {
                    return Err(BvError::Presentation(format!("root generator {} must have degree 0", g.name)))
                }
                _ => {}
            }
        }
        for a in &annihilators {
            if a.len() != n {
                return Err(BvError::Presentation(format!("annihilator has {} exponents, expected {n}", a.len())));
            }
            if a.iter().all(|&e| e == 0) {
                return Err(BvError::Presentation("annihilator 1 kills the ring".into()));
            }
            if let Some(i) = (0..n).find(|&i| a[i] > 0 && generators[i].root_order.is_some()) {
                return Err(BvError::Presentation(format!("root generator {} in an annihilator", generators[i].name)));
            }
        }
        Ok(GradedPresentation { name: name.to_string(), generators, annihilators })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn annihilators(&self) -> &[Monomial] {
        &self.annihilators
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    fn is_odd(&self, i: usize) -> bool {
        odd(self.generators[i].degree)
    }

    pub fn degree(&self, m: &[u32]) -> i64 {
        m.iter().zip(&self.generators).map(|(&e, g)| i64::from(e) * g.degree).sum()
    }

    /// Normal form of a sorted exponent vector, `None` when it vanishes.
    pub fn normalize(&self, mut m: Monomial) -> Option<Monomial> {
        for (e, g) in m.iter_mut().zip(&self.generators) {
            if odd(g.degree) && *e > 1 {
                return None;
            }
            if let Some(p) = g.root_order {
                *e %= p;
            }
        }
        let killed = self.annihilators.iter().any(|a| a.iter().zip(&m).all(|(x, y)| x <= y));
        (!killed).then_some(m)
    }

    /// `a·b` with Koszul sign `(−1)^{Σ_{i>j} a_i b_j}` over odd generators.
    pub fn monomial_product(&self, a: &[u32], b: &[u32]) -> Option<(bool, Monomial)> {
        let mut flips = 0u64;
        let mut odd_a_after = 0u64;
        for j in (0..a.len()).rev() {
            if self.is_odd(j) {
                flips += odd_a_after * u64::from(b[j]);
                odd_a_after += u64::from(a[j]);
            }
        }
        let m: Monomial = a.iter().zip(b).map(|(x, y)| x + y).collect();
        self.normalize(m).map(|m| (flips % 2 == 1, m))
    }

    pub fn one(&self) -> Polynomial {
        Polynomial::term(vec![0; self.generators.len()], Q::one())
    }

    pub fn generator(&self, name: &str) -> Option<Polynomial> {
        let i = self.generator_index(name)?;
        let mut m = vec![0; self.generators.len()];
        m[i] = 1;
        Some(self.monomial(m))
    }

    pub fn monomial(&self, m: Monomial) -> Polynomial {
        self.normalize(m).map_or_else(Polynomial::zero, |m| Polynomial::term(m, Q::one()))
    }

    /// Product of a word of generator indices, multiplied left to right.
    pub fn word(&self, word: &[usize]) -> Polynomial {
        word.iter().fold(self.one(), |acc, &i| {
            let mut m = vec![0; self.generators.len()];
            m[i] = 1;
            self.multiply(&acc, &Polynomial::term(m, Q::one()))
        })
    }

    pub fn multiply(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                if let Some((neg, m)) = self.monomial_product(ma, mb) {
                    let c = ca * cb;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        out
    }

    /// Largest exponent a generator can carry in a nonzero normal form.
    fn exponent_bound(&self, i: usize) -> Option<u32> {
        let g = &self.generators[i];
        if odd(g.degree) {
            return Some(1);
        }
        if let Some(p) = g.root_order {
            return Some(p - 1);
        }
        self.annihilators
            .iter()
            .filter(|a| a.iter().enumerate().all(|(j, &e)| (j == i) == (e > 0)))
            .map(|a| a[i] - 1)
            .min()
    }

    /// Normal-form monomials with degree in `[lo, hi]`, sorted by degree and
    /// then exponent vector. Unbounded generators of degree 0, or of both
    /// signs, give `InfiniteWindow`; mixed annihilators are not used to bound
    /// exponents.
    pub fn window_basis(&self, lo: i64, hi: i64) -> Result<Vec<Monomial>, BvError> {
        let n = self.generators.len();
        let bounds: Vec<Option<u32>> = (0..n).map(|i| self.exponent_bound(i)).collect();
        let free: Vec<usize> = (0..n).filter(|&i| bounds[i].is_none()).collect();
        let infinite = BvError::InfiniteWindow { lo, hi };
        if lo > hi {
            return Ok(Vec::new());
        }
        let positive = free.iter().any(|&i| self.generators[i].degree > 0);
        let negative = free.iter().any(|&i| self.generators[i].degree < 0);
        if free.iter().any(|&i| self.generators[i].degree == 0) || (positive && negative) {
            return Err(infinite);
        }
        // degree range reachable by the bounded generators
        let (mut bmin, mut bmax) = (0i64, 0i64);
        for i in 0..n {
            if let Some(b) = bounds[i] {
                let d = self.generators[i].degree * i64::from(b);
                bmin += d.min(0);
                bmax += d.max(0);
            }
        }
        let caps: Vec<u32> = (0..n)
            .map(|i| match bounds[i] {
                Some(b) => b,
                None => {
                    let d = self.generators[i].degree;
                    let room = if d > 0 { hi - bmin } else { bmax - lo };
                    u32::try_from((room / d.abs()).max(0)).unwrap_or(u32::MAX)
                }
            })
            .collect();
        let mut out = Vec::new();
        let mut m = vec![0u32; n];
        loop {
            let d = self.degree(&m);
            if (lo..=hi).contains(&d) {
                if let Some(nf) = self.normalize(m.clone()) {
                    if nf == m {
                        out.push(m.clone());
                    }
                }
            }
            let Some(i) = (0..n).find(|&i| m[i] < caps[i]) else { break };
            m[i] += 1;
            m[..i].iter_mut().for_each(|e| *e = 0);
        }
        out.sort_by(|a, b| self.degree(a).cmp(&self.degree(b)).then_with(|| a.cmp(b)));
        Ok(out)
    }

    pub fn format_monomial(&self, m: &[u32]) -> String {
        let parts: Vec<String> = m
            .iter()
            .zip(&self.generators)
            .filter(|(&e, _)| e > 0)
            .map(|(&e, g)| if e == 1 { g.name.clone() } else { format!("{}^{e}", g.name) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    pub fn format(&self, p: &Polynomial) -> String {
        format_terms(p.terms().map(|(m, c)| (self.format_monomial(m), c)))
    }

    pub fn to_json(&self) -> Value {
        let relations: Vec<String> = self
            .generators
            .iter()
            .filter_map(|g| g.root_order.map(|p| format!("{}^{p} = 1", g.name)))
            .chain(self.annihilators.iter().map(|a| format!("{} = 0", self.format_monomial(a))))
            .collect();
        json!({
            "name": self.name,
            "generators": self.generators.iter().map(|g| json!({
                "name": g.name,
                "degree": g.degree,
                "parity": if odd(g.degree) { "odd" } else { "even" },
            })).collect::<Vec<_>>(),
            "relations": relations,
        })
    }
}

fn format_terms<'a>(terms: impl Iterator<Item = (String, &'a Q)>) -> String {
    let mut s = String::new();
    for (label, c) in terms {
        let neg = c.is_negative();
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let a = c.abs();
        if a.is_one() {
            s.push_str(&label);
        } else if label == "1" {
            let _ = write!(s, "{a}");
        } else {
            let _ = write!(s, "{a}*{label}");
        }
    }
    if s.is_empty() {
        "0".into()
    } else {
        s
    }
}

/// `Λ[a] ⊗ Q[u, v]/(v^p = 1)` with `|a| = −n`, `|u| = n − 1`, `|v| = 0`.
pub fn lens_ring(n: i64, p: u32) -> Result<GradedPresentation, BvError> {
    if n < 1 || n % 2 == 0 {
        return Err(BvError::EvenDimension(n));
    }
    if p == 0 {
        return Err(BvError::ZeroOrder);
    }
    GradedPresentation::new(
        &format!("L({n},{p})"),
        vec![Generator::new("a", -n), Generator::new("u", n - 1), Generator::root("v", p)],
        Vec::new(),
    )
}

/// `Λ[b] ⊗ Q[a, v, y]/(a², ab, av, y^p − 1)` with `|b| = 1`, `|a| = −2`,
/// `|v| = 2`, `|y| = 0`.
pub fn sphere_quotient_ring(p: u32) -> Result<GradedPresentation, BvError> {
    if p == 0 {
        return Err(BvError::ZeroOrder);
    }
    GradedPresentation::new(
        &format!("S2/Z{p}"),
        vec![Generator::new("b", 1), Generator::new("a", -2), Generator::new("v", 2), Generator::root("y", p)],
        vec![vec![0, 2, 0, 0], vec![1, 1, 0, 0], vec![0, 1, 1, 0]],
    )
}

/// Sparse vector over a window basis.
pub type Vector = BTreeMap<usize, Q>;

fn axpy(out: &mut Vector, c: &Q, x: &Vector) {
    for (&i, v) in x {
        let e = out.entry(i).or_insert_with(Q::zero);
        *e += c * v;
        if e.is_zero() {
            out.remove(&i);
        }
    }
}

fn combine(terms: &[(Q, &Vector)]) -> Vector {
    let mut out = Vector::new();
    for (c, x) in terms {
        axpy(&mut out, c, x);
    }
    out
}

pub fn basis_vector(i: usize) -> Vector {
    Vector::from([(i, Q::one())])
}

/// Multiplication table of a graded algebra restricted to a degree window.
#[derive(Clone, Debug)]
pub struct WindowAlgebra {
    name: String,
    labels: Vec<String>,
    degrees: Vec<i64>,
    lo: i64,
    hi: i64,
    /// `Err(d)` marks a nonzero product of degree `d` outside the window.
    table: Vec<Vec<Result<Vector, i64>>>,
    /// Whether the algebra vanishes in degree `hi + 1`, so that `Δ` of a top
    /// degree element is forced to be zero.
    closed_above: bool,
}

impl WindowAlgebra {
    pub fn from_presentation(p: &GradedPresentation, lo: i64, hi: i64) -> Result<Self, BvError> {
        let basis = p.window_basis(lo, hi)?;
        let index: BTreeMap<&Monomial, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let table = basis
            .iter()
            .map(|x| {
                basis
                    .iter()
                    .map(|y| match p.monomial_product(x, y) {
                        None => Ok(Vector::new()),
                        Some((neg, m)) => match index.get(&m) {
                            Some(&k) => Ok(Vector::from([(k, sign(neg))])),
                            None => Err(p.degree(&m)),
                        },
                    })
                    .collect()
            })
            .collect();
        let closed_above = p.window_basis(hi + 1, hi + 1)?.is_empty();
        Ok(WindowAlgebra {
            name: p.name().to_string(),
            labels: basis.iter().map(|m| p.format_monomial(m)).collect(),
            degrees: basis.iter().map(|m| p.degree(m)).collect(),
            lo,
            hi,
            table,
            closed_above,
        })
    }

    /// The whole ring as a window; constants must be rational.
    pub fn from_sector_ring(name: &str, ring: &SectorRing) -> Result<Self, BvError> {
        let d = ring.dim();
        let mut table = vec![vec![Ok(Vector::new()); d]; d];
        for (i, row) in table.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                let mut v = Vector::new();
                for (k, c) in ring.product_basis(i, j).iter().enumerate() {
                    let c = c
                        .as_rational()
                        .ok_or_else(|| BvError::Presentation(format!("constant {c} of b{i}*b{j} is not rational")))?;
                    if !c.is_zero() {
                        v.insert(k, c);
                    }
                }
                *slot = Ok(v);
            }
        }
        let degrees = ring.degrees().to_vec();
        let lo = degrees.iter().copied().min().unwrap_or(0);
        let hi = degrees.iter().copied().max().unwrap_or(0);
        Ok(WindowAlgebra { name: name.to_string(), labels: ring.labels().to_vec(), degrees, lo, hi, table, closed_above: true })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn product_basis(&self, i: usize, j: usize) -> Result<&Vector, BvError> {
        self.table[i][j].as_ref().map_err(|&degree| BvError::WindowOverflow { degree, lo: self.lo, hi: self.hi })
    }

    pub fn mul(&self, x: &Vector, y: &Vector) -> Result<Vector, BvError> {
        let mut out = Vector::new();
        for (&i, a) in x {
            for (&j, b) in y {
                axpy(&mut out, &(a * b), self.product_basis(i, j)?);
            }
        }
        Ok(out)
    }

    pub fn format(&self, x: &Vector) -> String {
        format_terms(x.iter().map(|(&i, c)| (self.labels[i].clone(), c)))
    }

    /// Presentation-free description: basis, degrees, nonzero products.
    pub fn to_json(&self) -> Value {
        let mut products = Vec::new();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let value = match &self.table[i][j] {
                    Ok(v) if v.is_empty() => continue,
                    Ok(v) => Value::String(self.format(v)),
                    Err(d) => json!({ "outside_window": d }),
                };
                products.push(json!({ "left": self.labels[i], "right": self.labels[j], "product": value }));
            }
        }
        json!({
            "name": self.name,
            "window": [self.lo, self.hi],
            "basis": self.labels.iter().zip(&self.degrees).map(|(l, d)| json!({ "label": l, "degree": d })).collect::<Vec<_>>(),
            "products": products,
        })
    }

    pub fn to_markdown(&self) -> String {
        let mut s = format!("### {} in degrees [{}, {}]\n\n| * |", self.name, self.lo, self.hi);
        for l in &self.labels {
            let _ = write!(s, " {l} |");
        }
        s.push_str("\n|---|");
        s.push_str(&"---|".repeat(self.dim()));
        s.push('\n');
        for i in 0..self.dim() {
            let _ = write!(s, "| **{}** |", self.labels[i]);
            for j in 0..self.dim() {
                let cell = match &self.table[i][j] {
                    Ok(v) => self.format(v),
                    Err(_) => "…".into(),
                };
                let _ = write!(s, " {cell} |");
            }
            s.push('\n');
        }
        s
    }
}

/// A linear operator on a window basis; `column(j)` is `Δ(b_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Delta {
    columns: Vec<Vector>,
}

impl Delta {
    pub fn zero(dim: usize) -> Self {
        Delta { columns: vec![Vector::new(); dim] }
    }

    pub fn from_entries(dim: usize, entries: &[(usize, usize, Q)]) -> Result<Self, BvError> {
        let mut d = Delta::zero(dim);
        for (row, col, v) in entries {
            if *row >= dim || *col >= dim {
                return Err(BvError::OperatorShape { rows: row + 1, cols: col + 1, dim });
            }
            axpy(&mut d.columns[*col], v, &basis_vector(*row));
        }
        Ok(d)
    }

    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &Vector {
        &self.columns[j]
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Q)> {
        self.columns.iter().enumerate().flat_map(|(c, v)| v.iter().map(move |(&r, x)| (r, c, x)))
    }

    /// `{"entries": [[row, col, value], ...]}` with rows and columns given
    /// by basis label or index and values as integers or `"p/q"` strings.
    /// An optional `"dim"` must match the window.
    pub fn from_json(alg: &WindowAlgebra, v: &Value) -> Result<Self, BvError> {
        let bad = |m: &str| BvError::Json(m.to_string());
        if let Some(d) = v.get("dim") {
            let d = d.as_u64().ok_or_else(|| bad("dim must be an integer"))? as usize;
            if d != alg.dim() {
                return Err(BvError::OperatorShape { rows: d, cols: d, dim: alg.dim() });
            }
        }
        let index = |x: &Value| -> Result<usize, BvError> {
            match x {
                Value::String(s) => alg.index_of(s).ok_or_else(|| BvError::UnknownBasis(s.clone())),
                Value::Number(n) => {
                    let i = n.as_u64().ok_or_else(|| bad("basis index must be a natural number"))? as usize;
                    if i < alg.dim() {
                        Ok(i)
                    } else {
                        Err(BvError::UnknownBasis(i.to_string()))
                    }
                }
                _ => Err(bad("basis reference must be a label or an index")),
            }
        };
        let value = |x: &Value| -> Result<Q, BvError> {
            match x {
                Value::Number(n) => n.as_i64().map(|k| Q::from_integer(k.into())).ok_or_else(|| bad("coefficient must be an integer")),
                Value::String(s) => s.trim().parse::<Q>().map_err(|_| bad(&format!("bad coefficient {s:?}"))),
                _ => Err(bad("coefficient must be a number or a string")),
            }
        };
        let entries = v.get("entries").and_then(Value::as_array).ok_or_else(|| bad("missing entries array"))?;
        let mut parsed = Vec::with_capacity(entries.len());
        for e in entries {
            let t = e.as_array().filter(|t| t.len() == 3).ok_or_else(|| bad("entry must be [row, col, value]"))?;
            parsed.push((index(&t[0])?, index(&t[1])?, value(&t[2])?));
        }
        Delta::from_entries(alg.dim(), &parsed)
    }

    pub fn to_json(&self, alg: &WindowAlgebra) -> Value {
        let entries: Vec<Value> = self
            .entries()
            .map(|(r, c, x)| json!([alg.labels[r], alg.labels[c], x.to_string()]))
            .collect();
        json!({ "dim": self.dim(), "entries": entries })
    }
}

/// A window algebra with a candidate BV operator.
#[derive(Clone, Debug)]
pub struct BvData {
    pub algebra: WindowAlgebra,
    pub delta: Delta,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub name: &'static str,
    pub checked: usize,
    /// Instances whose evaluation leaves the window.
    pub skipped: usize,
    pub witness: Option<String>,
}

impl AxiomReport {
    fn new(name: &'static str) -> Self {
        AxiomReport { name, checked: 0, skipped: 0, witness: None }
    }

    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BvReport {
    pub algebra: String,
    pub dim: usize,
    pub axioms: Vec<AxiomReport>,
}

impl BvReport {
    pub fn passed(&self) -> bool {
        self.axioms.iter().all(AxiomReport::passed)
    }

    pub fn first_witness(&self) -> Option<&str> {
        self.axioms.iter().find_map(|a| a.witness.as_deref())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "algebra": self.algebra,
            "dim": self.dim,
            "verdict": if self.passed() { "pass" } else { "fail" },
            "axioms": self.axioms.iter().map(|a| json!({
                "name": a.name,
                "checked": a.checked,
                "skipped": a.skipped,
                "passed": a.passed(),
                "witness": a.witness,
            })).collect::<Vec<_>>(),
        })
    }
}

impl BvData {
    pub fn new(algebra: WindowAlgebra, delta: Delta) -> Result<Self, BvError> {
        if delta.dim() != algebra.dim() {
            return Err(BvError::OperatorShape { rows: delta.dim(), cols: delta.dim(), dim: algebra.dim() });
        }
        Ok(BvData { algebra, delta })
    }

    pub fn zero(algebra: WindowAlgebra) -> Self {
        let delta = Delta::zero(algebra.dim());
        BvData { algebra, delta }
    }

    /// `Δ` on a window element; unknown on top-degree elements unless the
    /// algebra vanishes one degree above the window.
    pub fn apply(&self, x: &Vector) -> Result<Vector, BvError> {
        let alg = &self.algebra;
        let mut out = Vector::new();
        for (&j, c) in x {
            if alg.degrees[j] == alg.hi && !alg.closed_above {
                return Err(BvError::WindowOverflow { degree: alg.hi + 1, lo: alg.lo, hi: alg.hi });
            }
            axpy(&mut out, c, &self.delta.columns[j]);
        }
        Ok(out)
    }

    /// `{x,y} = (−1)^{|x|}Δ(xy) − (−1)^{|x|}Δ(x)y − xΔ(y)` for `x` of degree
    /// `deg_x`.
    pub fn bracket(&self, x: &Vector, deg_x: i64, y: &Vector) -> Result<Vector, BvError> {
        let alg = &self.algebra;
        let s = sign(odd(deg_x));
        let first = self.apply(&alg.mul(x, y)?)?;
        let second = alg.mul(&self.apply(x)?, y)?;
        let third = alg.mul(x, &self.apply(y)?)?;
        Ok(combine(&[(s.clone(), &first), (-s, &second), (-Q::one(), &third)]))
    }

    pub fn check(&self) -> BvReport {
        let alg = &self.algebra;
        let d = alg.dim();
        let deg = &alg.degrees;
        let label = |i: usize| alg.labels[i].as_str();
        let mut degree = AxiomReport::new("degree");
        for j in 0..d {
            degree.checked += 1;
            if let Some((&i, _)) = self.delta.columns[j].iter().find(|(&i, _)| deg[i] != deg[j] + 1) {
                degree.witness = Some(format!(
                    "Δ({}) has a component along {} in degree {}, expected degree {}",
                    label(j),
                    label(i),
                    deg[i],
                    deg[j] + 1
                ));
                break;
            }
        }

        let mut square = AxiomReport::new("delta_squared");
        for j in 0..d {
            match self.apply(&basis_vector(j)).and_then(|x| self.apply(&x)) {
                Err(_) => square.skipped += 1,
                Ok(v) => {
                    square.checked += 1;
                    if !v.is_empty() {
                        square.witness = Some(format!("Δ²({}) = {}", label(j), alg.format(&v)));
                        break;
                    }
                }
            }
        }

        let bracket = |i: usize, j: usize| self.bracket(&basis_vector(i), deg[i], &basis_vector(j));
        let mut anti = AxiomReport::new("antisymmetry");
        'anti: for i in 0..d {
            for j in i..d {
                let (Ok(ab), Ok(ba)) = (bracket(i, j), bracket(j, i)) else {
                    anti.skipped += 1;
                    continue;
                };
                anti.checked += 1;
                // {a,b} + (−1)^{(|a|+1)(|b|+1)} {b,a} = 0
                let s = sign(odd(deg[i] + 1) && odd(deg[j] + 1));
                let sum = combine(&[(Q::one(), &ab), (s, &ba)]);
                if !sum.is_empty() {
                    anti.witness = Some(format!(
                        "{{{a},{b}}} = {}, {{{b},{a}}} = {}",
                        alg.format(&ab),
                        alg.format(&ba),
                        a = label(i),
                        b = label(j)
                    ));
                    break 'anti;
                }
            }
        }

        let mut jacobi = AxiomReport::new("jacobi");
        let mut leibniz = AxiomReport::new("leibniz");
        for i in 0..d {
            let a = basis_vector(i);
            for j in 0..d {
                let b = basis_vector(j);
                for k in 0..d {
                    let c = basis_vector(k);
                    if jacobi.witness.is_none() {
                        // {a,{b,c}} = {{a,b},c} + (−1)^{(|a|+1)(|b|+1)} {b,{a,c}}
                        let result = (|| {
                            let lhs = self.bracket(&a, deg[i], &bracket(j, k)?)?;
                            let r1 = self.bracket(&bracket(i, j)?, deg[i] + deg[j] + 1, &c)?;
                            let r2 = self.bracket(&b, deg[j], &bracket(i, k)?)?;
                            let s = sign(odd(deg[i] + 1) && odd(deg[j] + 1));
                            Ok::<_, BvError>((lhs.clone(), combine(&[(Q::one(), &lhs), (-Q::one(), &r1), (-s, &r2)])))
                        })();
                        match result {
                            Err(_) => jacobi.skipped += 1,
                            Ok((lhs, diff)) => {
                                jacobi.checked += 1;
                                if !diff.is_empty() {
                                    jacobi.witness = Some(format!(
                                        "at ({}, {}, {}): {{a,{{b,c}}}} = {}, defect {}",
                                        label(i),
                                        label(j),
                                        label(k),
                                        alg.format(&lhs),
                                        alg.format(&diff)
                                    ));
                                }
                            }
                        }
                    }
                    if leibniz.witness.is_none() {
                        // {a,bc} = {a,b}c + (−1)^{(|a|+1)|b|} b{a,c}
                        let result = (|| {
                            let lhs = self.bracket(&a, deg[i], &alg.mul(&b, &c)?)?;
                            let r1 = alg.mul(&bracket(i, j)?, &c)?;
                            let r2 = alg.mul(&b, &bracket(i, k)?)?;
                            let s = sign(odd(deg[i] + 1) && odd(deg[j]));
                            Ok::<_, BvError>((lhs.clone(), combine(&[(Q::one(), &lhs), (-Q::one(), &r1), (-s, &r2)])))
                        })();
                        match result {
                            Err(_) => leibniz.skipped += 1,
                            Ok((lhs, diff)) => {
                                leibniz.checked += 1;
                                if !diff.is_empty() {
                                    leibniz.witness = Some(format!(
                                        "at ({}, {}, {}): {{a,bc}} = {}, defect {}",
                                        label(i),
                                        label(j),
                                        label(k),
                                        alg.format(&lhs),
                                        alg.format(&diff)
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
        BvReport { algebra: alg.name.clone(), dim: d, axioms: vec![degree, square, anti, jacobi, leibniz] }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    #[test]
    fn constructor_errors() {
        assert_eq!(lens_ring(4, 2), Err(BvError::EvenDimension(4)));
        assert_eq!(lens_ring(-1, 2), Err(BvError::EvenDimension(-1)));
        assert_eq!(lens_ring(3, 0), Err(BvError::ZeroOrder));
        assert_eq!(sphere_quotient_ring(0), Err(BvError::ZeroOrder));
        let bad = GradedPresentation::new("x", vec![Generator::root("y", 2), Generator::new("a", 1)], vec![vec![1, 1]]);
        assert!(matches!(bad, Err(BvError::Presentation(_))));
        let bad = GradedPresentation::new("x", vec![Generator { name: "y".into(), degree: 2, root_order: Some(3) }], vec![]);
        assert!(matches!(bad, Err(BvError::Presentation(_))));
        let bad = GradedPresentation::new("x", vec![Generator::new("a", 1), Generator::new("a", 2)], vec![]);
        assert!(matches!(bad, Err(BvError::Presentation(_))));
    }

    #[test]
    fn lens_basics() {
        let l = lens_ring(3, 2).unwrap();
        let a = l.generator("a").unwrap();
        let v = l.generator("v").unwrap();
        let u = l.generator("u").unwrap();
        assert!(l.multiply(&a, &a).is_zero());
        assert_eq!(l.multiply(&v, &v), l.one());
        assert_eq!(l.multiply(&l.one(), &u), u);
        assert_eq!(l.window_basis(0, 0).unwrap().len(), 2);
        // n = 1 puts u in degree 0 with no relation
        assert_eq!(lens_ring(1, 2).unwrap().window_basis(0, 0), Err(BvError::InfiniteWindow { lo: 0, hi: 0 }));
    }

    #[test]
    fn koszul_signs() {
        // two odd generators anticommute
        let p = GradedPresentation::new("ext", vec![Generator::new("x", 1), Generator::new("z", -1)], vec![]).unwrap();
        let xz = p.word(&[0, 1]);
        let zx = p.word(&[1, 0]);
        assert_eq!(zx, xz.scale(&q(-1)));
        assert!(p.word(&[0, 1, 0]).is_zero());
    }

    #[test]
    fn sphere_relations() {
        let s = sphere_quotient_ring(3).unwrap();
        let g = |n: &str| s.generator(n).unwrap();
        assert!(s.multiply(&g("a"), &g("b")).is_zero());
        assert!(s.multiply(&g("a"), &g("v")).is_zero());
        let y3 = s.multiply(&s.multiply(&g("y"), &g("y")), &g("y"));
        assert_eq!(y3, s.one());
        // degree −2 holds a y^j only; degree 2 holds v y^j
        assert_eq!(s.window_basis(-2, -2).unwrap().len(), 3);
        assert_eq!(s.window_basis(3, 3).unwrap().len(), 3);
    }

    #[test]
    fn mixed_sign_free_generators_are_infinite() {
        let p = GradedPresentation::new("t", vec![Generator::new("s", 2), Generator::new("t", -2)], vec![]).unwrap();
        assert_eq!(p.window_basis(0, 0), Err(BvError::InfiniteWindow { lo: 0, hi: 0 }));
    }

    #[test]
    fn synthetic_bracket() {
        // Λ[x], |x| = 1, Δ(x) = 1
        let p = GradedPresentation::new("ext", vec![Generator::new("x", 1)], vec![]).unwrap();
        let alg = WindowAlgebra::from_presentation(&p, 0, 1).unwrap();
        let x = alg.index_of("x").unwrap();
        let one = alg.index_of("1").unwrap();
        let data = BvData::new(alg.clone(), Delta::from_entries(2, &[(one, x, q(1))]).unwrap()).unwrap();
        let xx = data.bracket(&basis_vector(x), 1, &basis_vector(x)).unwrap();
        // direct: −Δ(x²) + Δ(x)x − xΔ(x) = 0 + x − x
        assert!(xx.is_empty());
        let one_x = data.bracket(&basis_vector(one), 0, &basis_vector(x)).unwrap();
        assert!(one_x.is_empty());
        let report = data.check();
        assert_eq!(report.axioms[0].name, "degree");
        assert!(!report.axioms[0].passed());
    }

    #[test]
    fn delta_json() {
        let alg = WindowAlgebra::from_presentation(&lens_ring(3, 2).unwrap(), -3, 6).unwrap();
        let v = serde_json::json!({ "entries": [["1", "a", 1], [0, 1, "1/2"]] });
        let d = Delta::from_json(&alg, &v).unwrap();
        assert_eq!(Delta::from_json(&alg, &d.to_json(&alg)).unwrap(), d);
        let v = serde_json::json!({ "entries": [["w", "a", 1]] });
        assert_eq!(Delta::from_json(&alg, &v), Err(BvError::UnknownBasis("w".into())));
        let v = serde_json::json!({ "dim": 3, "entries": [] });
        assert!(matches!(Delta::from_json(&alg, &v), Err(BvError::OperatorShape { .. })));
        assert!(matches!(Delta::from_entries(2, &[(5, 0, q(1))]), Err(BvError::OperatorShape { .. })));
    }

    #[test]
    fn overflow_is_reported() {
        let alg = WindowAlgebra::from_presentation(&lens_ring(3, 2).unwrap(), 0, 2).unwrap();
        let u = basis_vector(alg.index_of("u").unwrap());
        assert!(matches!(alg.mul(&u, &u), Err(BvError::WindowOverflow { degree: 4, .. })));
    }
}
