//! Sector rings of finite G-sets: the string product on twisted sectors, the
//! invariant orbifold string ring, Dijkgraaf–Witten algebras, twisted
//! centers and Morita comparisons.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::cocycle::{discrete_torsion, Phase, TwoCocycle};
use crate::cyclo::CycloNumber;
use crate::error::SectorError;
use crate::group::{conjugacy_classes, Element, FiniteGroup, GSet, IDENTITY};
use crate::linalg::{self, Matrix};

/// A sector element `(g, x)` with `x` fixed by `g`.
pub type Sector = (Element, usize);

/// All sector pairs `(g, x)` with `x·g = x`, in lexicographic order.
pub fn sector_basis(x: &GSet) -> Vec<Sector> {
    x.group().elements().flat_map(|g| x.fixed_points(g).into_iter().map(move |m| (g, m))).collect()
}

/// The string product in dimension zero: `(g,x)·(h,y) = (gh,x)` if `x = y`,
/// and zero otherwise.
pub fn sector_product(x: &GSet, a: Sector, b: Sector) -> Result<Option<Sector>, SectorError> {
    for &(g, m) in &[a, b] {
        if m >= x.size() || x.act(m, g) != m {
            return Err(SectorError::NotFixed { g, point: m });
        }
    }
    Ok((a.1 == b.1).then(|| (x.group().mul(a.0, b.0), a.1)))
}

/// `(g,x)·h = (h⁻¹gh, x·h)`.
pub fn act_on_sector(x: &GSet, s: Sector, h: Element) -> Sector {
    (x.group().conj(s.0, h), x.act(s.1, h))
}

/// A finite-dimensional algebra over `Q(ζ_N)` with structure constants in a
/// fixed basis.
#[derive(Clone)]
pub struct SectorRing {
    labels: Vec<String>,
    level: usize,
    structure: Vec<CycloNumber>,
    unit: Vec<CycloNumber>,
    degrees: Vec<i64>,
    trace: Option<Vec<CycloNumber>>,
}

impl fmt::Debug for SectorRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SectorRing").field("basis", &self.labels).field("level", &self.level).finish()
    }
}

impl SectorRing {
    /// `structure[i][j][k]` is the coefficient of `b_k` in `b_i b_j`.
    pub fn new(
        labels: Vec<String>,
        level: usize,
        structure: Vec<Vec<Vec<CycloNumber>>>,
        unit: Vec<CycloNumber>,
        trace: Option<Vec<CycloNumber>>,
    ) -> Self {
        let d = labels.len();
        assert_eq!(structure.len(), d);
        let lift = |c: &CycloNumber| c.lift(num_integer::lcm(level, c.level()));
        let flat: Vec<CycloNumber> = structure.iter().flatten().flatten().map(lift).collect();
        assert_eq!(flat.len(), d * d * d);
        let level = flat.iter().chain(&unit).chain(trace.iter().flatten()).fold(level, |l, c| num_integer::lcm(l, c.level()));
        let lift_to = |c: &CycloNumber| c.lift(level);
        SectorRing {
            labels,
            level,
            structure: flat.iter().map(lift_to).collect(),
            unit: unit.iter().map(lift_to).collect(),
            degrees: vec![0; d],
            trace: trace.map(|t| t.iter().map(lift_to).collect()),
        }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unit(&self) -> &[CycloNumber] {
        &self.unit
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn trace(&self) -> Option<&[CycloNumber]> {
        self.trace.as_deref()
    }

    #[inline]
    pub fn constant(&self, i: usize, j: usize, k: usize) -> &CycloNumber {
        let d = self.dim();
        &self.structure[(i * d + j) * d + k]
    }

    /// `b_i b_j` as a coordinate vector.
    pub fn product_basis(&self, i: usize, j: usize) -> &[CycloNumber] {
        let d = self.dim();
        &self.structure[(i * d + j) * d..(i * d + j + 1) * d]
    }

    /// True when every structure constant is rational.
    pub fn is_rational(&self) -> bool {
        self.structure.iter().all(|c| c.as_rational().is_some())
    }

    pub fn zero_vector(&self) -> Vec<CycloNumber> {
        vec![CycloNumber::zero(self.level); self.dim()]
    }

    pub fn basis_vector(&self, i: usize) -> Vec<CycloNumber> {
        let mut v = self.zero_vector();
        v[i] = CycloNumber::one(self.level);
        v
    }

    pub fn mul(&self, x: &[CycloNumber], y: &[CycloNumber]) -> Vec<CycloNumber> {
        let d = self.dim();
        let mut out = self.zero_vector();
        for i in 0..d {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..d {
                if y[j].is_zero() {
                    continue;
                }
                let s = &x[i] * &y[j];
                for (k, c) in self.product_basis(i, j).iter().enumerate() {
                    if !c.is_zero() {
                        out[k] = &out[k] + &(&s * c);
                    }
                }
            }
        }
        out
    }

    /// Matrix of `y ↦ x·y`, columns indexed by basis elements.
    pub fn left_matrix(&self, x: &[CycloNumber]) -> Matrix {
        let d = self.dim();
        let mut m = linalg::zeros(self.level, d, d);
        for j in 0..d {
            let col = self.mul(x, &self.basis_vector(j));
            for (k, c) in col.into_iter().enumerate() {
                m[k][j] = c;
            }
        }
        m
    }

    /// First basis triple where `(b_i b_j) b_k ≠ b_i (b_j b_k)`.
    pub fn associativity_failure(&self) -> Option<(usize, usize, usize)> {
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                let ij = self.product_basis(i, j).to_vec();
                for k in 0..d {
                    let left = self.mul(&ij, &self.basis_vector(k));
                    let right = self.mul(&self.basis_vector(i), self.product_basis(j, k));
                    if left != right {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    pub fn unit_law_holds(&self) -> bool {
        (0..self.dim()).all(|i| {
            let b = self.basis_vector(i);
            self.mul(&self.unit, &b) == b && self.mul(&b, &self.unit) == b
        })
    }

    pub fn is_commutative(&self) -> bool {
        let d = self.dim();
        (0..d).all(|i| (0..d).all(|j| self.product_basis(i, j) == self.product_basis(j, i)))
    }

    /// `⟨b_i, b_j⟩ = trace(b_i b_j)`.
    pub fn pairing_matrix(&self) -> Option<Matrix> {
        let trace = self.trace.as_ref()?;
        let d = self.dim();
        Some(
            (0..d)
                .map(|i| {
                    (0..d)
                        .map(|j| {
                            self.product_basis(i, j)
                                .iter()
                                .zip(trace)
                                .fold(CycloNumber::zero(self.level), |acc, (c, t)| &acc + &(c * t))
                        })
                        .collect()
                })
                .collect(),
        )
    }

    /// Nondegeneracy of the trace pairing; `None` without a trace.
    pub fn is_frobenius(&self) -> Option<bool> {
        let m = self.pairing_matrix()?;
        Some(!linalg::determinant(&m, self.level).is_zero())
    }

    /// Checks associativity, the unit law and, with a trace, nondegeneracy.
    pub fn validate(&self) -> Result<(), SectorError> {
        if let Some((i, j, k)) = self.associativity_failure() {
            return Err(SectorError::NotAssociative(i, j, k));
        }
        assert!(self.unit_law_holds(), "unit law fails");
        if self.is_frobenius() == Some(false) {
            return Err(SectorError::Degenerate);
        }
        Ok(())
    }

    /// Dimension of the center.
    pub fn center_dimension(&self) -> usize {
        let d = self.dim();
        // x central iff x b_j = b_j x for all j: stack the linear conditions
        let mut rows: Matrix = Vec::new();
        for j in 0..d {
            for k in 0..d {
                rows.push((0..d).map(|i| self.constant(i, j, k) - self.constant(j, i, k)).collect());
            }
        }
        d - linalg::rank(&rows)
    }

    /// Rank of the form `(x, y) ↦ Tr(L_x L_y)`.
    pub fn trace_form_rank(&self) -> usize {
        let d = self.dim();
        let ls: Vec<Matrix> = (0..d).map(|i| self.left_matrix(&self.basis_vector(i))).collect();
        let form: Matrix = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let p = linalg::mat_mul(&ls[i], &ls[j], self.level);
                        (0..d).fold(CycloNumber::zero(self.level), |acc, k| &acc + &p[k][k])
                    })
                    .collect()
            })
            .collect();
        linalg::rank(&form)
    }

    /// Checks that `phi` (row `i` = image of `b_i` in the basis of `other`)
    /// is an algebra isomorphism onto `other`.
    pub fn is_isomorphism(&self, other: &SectorRing, phi: &Matrix) -> bool {
        let d = self.dim();
        if other.dim() != d || phi.len() != d || phi.iter().any(|r| r.len() != d) {
            return false;
        }
        let level = phi.iter().flatten().fold(num_integer::lcm(self.level, other.level), |l, c| num_integer::lcm(l, c.level()));
        let phi: Matrix = phi.iter().map(|r| r.iter().map(|c| c.lift(level)).collect()).collect();
        if linalg::determinant(&phi, level).is_zero() {
            return false;
        }
        let image = |v: &[CycloNumber]| -> Vec<CycloNumber> {
            (0..d).fold(vec![CycloNumber::zero(level); d], |acc, i| {
                acc.iter().zip(&phi[i]).map(|(a, p)| a + &(&v[i] * p)).collect()
            })
        };
        if image(&self.unit) != other.unit {
            return false;
        }
        for i in 0..d {
            for j in 0..d {
                let lhs = image(self.product_basis(i, j));
                let rhs = other.mul(&phi[i], &phi[j]);
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    /// `{"basis", "level", "structure": [[i,j,k,coeff]...], "unit", "trace"}`.
    pub fn to_json(&self) -> Value {
        let d = self.dim();
        let mut structure = Vec::new();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let c = self.constant(i, j, k);
                    if !c.is_zero() {
                        structure.push(json!([i, j, k, c.to_string()]));
                    }
                }
            }
        }
        let strings = |v: &[CycloNumber]| v.iter().map(ToString::to_string).collect::<Vec<_>>();
        json!({
            "basis": self.labels,
            "level": self.level,
            "structure": structure,
            "unit": strings(&self.unit),
            "trace": self.trace.as_deref().map(strings),
        })
    }

    /// `b_i b_j` written as a linear combination of basis labels.
    pub fn format_vector(&self, v: &[CycloNumber]) -> String {
        let terms: Vec<String> = v
            .iter()
            .zip(&self.labels)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, l)| {
                if c.is_one() {
                    l.clone()
                } else if c.coeffs().len() == 1 {
                    format!("{c}*{l}")
                } else {
                    format!("({c})*{l}")
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

fn rational(k: i64) -> CycloNumber {
    CycloNumber::from_int(1, k)
}

/// The ring of invariant sector classes of a G-set.
///
/// Basis: orbit sums of sector pairs under `(g,x)·h = (h⁻¹gh, x·h)`, ordered
/// by least pair. The product multiplies orbit sums sectorwise; the result
/// is invariant, so its coordinate on an orbit is its coefficient on that
/// orbit's least pair. With this normalization the unit is the sum of the
/// identity-sector orbits and a point recovers the class algebra of `G`
/// with class sums as basis. The trace of an orbit sum is its number of
/// identity-sector pairs divided by `|G|`.
pub fn orbifold_string_ring(x: &GSet) -> SectorRing {
    let group = x.group();
    let pairs = sector_basis(x);
    let index: BTreeMap<Sector, usize> = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut orbit_of = vec![usize::MAX; pairs.len()];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for (i, &p) in pairs.iter().enumerate() {
        if orbit_of[i] != usize::MAX {
            continue;
        }
        let mut members: Vec<usize> = group.elements().map(|h| index[&act_on_sector(x, p, h)]).collect();
        members.sort_unstable();
        members.dedup();
        for &m in &members {
            orbit_of[m] = orbits.len();
        }
        orbits.push(members);
    }
    let d = orbits.len();
    let reps: Vec<usize> = orbits.iter().map(|o| o[0]).collect();
    let mut structure = vec![vec![vec![rational(0); d]; d]; d];
    for i in 0..d {
        for j in 0..d {
            // coefficient of each pair in (orbit i)·(orbit j)
            let mut counts = vec![0i64; pairs.len()];
            for &p in &orbits[i] {
                for &q in &orbits[j] {
                    if let Some(r) = sector_product(x, pairs[p], pairs[q]).expect("sector pairs") {
                        counts[index[&r]] += 1;
                    }
                }
            }
            for k in 0..d {
                structure[i][j][k] = rational(counts[reps[k]]);
            }
        }
    }
    let order = BigRational::from_integer(group.order().into());
    let unit: Vec<CycloNumber> =
        orbits.iter().map(|o| rational(i64::from(pairs[o[0]].0 == IDENTITY))).collect();
    let trace: Vec<CycloNumber> = orbits
        .iter()
        .map(|o| {
            let n = if pairs[o[0]].0 == IDENTITY { o.len() } else { 0 };
            CycloNumber::from_rational(1, BigRational::from_integer(n.into()) / &order)
        })
        .collect();
    let point = x.size() == 1;
    let labels: Vec<String> = reps
        .iter()
        .map(|&r| {
            let (g, m) = pairs[r];
            if point {
                format!("[{}]", group.label(g))
            } else {
                format!("[{}@{}]", group.label(g), m)
            }
        })
        .collect();
    SectorRing::new(labels, 1, structure, unit, Some(trace))
}

/// The Dijkgraaf–Witten Frobenius algebra `Z(Q[G])` on class sums, with
/// trace the identity coefficient divided by `|G|`.
pub fn dw_frobenius(group: &FiniteGroup) -> SectorRing {
    let point = GSet::point(std::sync::Arc::new(group.clone()));
    let ring = orbifold_string_ring(&point);
    debug_assert_eq!(ring.is_frobenius(), Some(true));
    ring
}

fn phase_number(p: Phase, level: usize) -> CycloNumber {
    let q = p.q();
    let den = *q.denom() as usize;
    assert!(level.is_multiple_of(den), "phase {p} not in level {level}");
    CycloNumber::root(level, *q.numer() * (level / den) as i64)
}

/// Representatives of the α-regular conjugacy classes, ascending.
pub fn regular_classes(alpha: &TwoCocycle) -> Vec<Element> {
    let tau = discrete_torsion(alpha);
    conjugacy_classes(alpha.group()).reps.into_iter().filter(|&g| tau.is_regular(g)).collect()
}

/// The center of the α-twisted group algebra (`u_g u_h = α(g,h) u_{gh}`).
///
/// For each α-regular class with representative `g` the basis element is
/// `z_g = Σ_t τ(g,t) u_{t⁻¹gt}`, summed over the least `t` reaching each
/// conjugate; this equals `Σ_t u_t⁻¹ u_g u_t`. Coordinates of a central
/// element are read off at the representatives.
pub fn twisted_center(alpha: &TwoCocycle) -> SectorRing {
    let group = alpha.group();
    let n = group.order();
    let level = alpha.level();
    let tau = discrete_torsion(alpha);
    let reps = regular_classes(alpha);
    let z: Vec<Vec<CycloNumber>> = reps
        .iter()
        .map(|&g| {
            let mut v = vec![CycloNumber::zero(level); n];
            let mut seen = vec![false; n];
            for t in group.elements() {
                let c = group.conj(g, t);
                if !std::mem::replace(&mut seen[c], true) {
                    v[c] = phase_number(tau.get(g, t), level);
                }
            }
            v
        })
        .collect();
    let twisted_mul = |a: &[CycloNumber], b: &[CycloNumber]| -> Vec<CycloNumber> {
        let mut out = vec![CycloNumber::zero(level); n];
        for x in 0..n {
            if a[x].is_zero() {
                continue;
            }
            for y in 0..n {
                if b[y].is_zero() {
                    continue;
                }
                let c = &(&a[x] * &b[y]) * &phase_number(alpha.get(x, y), level);
                let xy = group.mul(x, y);
                out[xy] = &out[xy] + &c;
            }
        }
        out
    };
    let d = reps.len();
    let mut structure = vec![vec![vec![CycloNumber::zero(level); d]; d]; d];
    for i in 0..d {
        for j in 0..d {
            let p = twisted_mul(&z[i], &z[j]);
            for (k, &r) in reps.iter().enumerate() {
                structure[i][j][k] = p[r].clone();
            }
        }
    }
    let unit: Vec<CycloNumber> = reps.iter().map(|&r| CycloNumber::from_int(level, i64::from(r == IDENTITY))).collect();
    let inv_order = BigRational::new(One::one(), n.into());
    let trace: Vec<CycloNumber> = reps
        .iter()
        .map(|&r| CycloNumber::from_rational(level, if r == IDENTITY { inv_order.clone() } else { BigRational::zero() }))
        .collect();
    let labels = reps.iter().map(|&r| format!("[{}]", group.label(r))).collect();
    SectorRing::new(labels, level, structure, unit, Some(trace))
}

/// How two rings were shown (not) to be isomorphic.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum MoritaVerdict {
    /// `witness[i]` is the image of basis element `i` of the first ring.
    Isomorphic { method: String, witness: Vec<Vec<String>>, #[serde(skip)] matrix: Matrix },
    NotIsomorphic { obstruction: String },
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct MoritaReport {
    pub dim_x: usize,
    pub dim_y: usize,
    #[serde(flatten)]
    pub verdict: MoritaVerdict,
}

impl MoritaReport {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self.verdict, MoritaVerdict::Isomorphic { .. })
    }
}

/// Compares the orbifold string rings of two G-sets.
pub fn morita_compare(x: &GSet, y: &GSet) -> MoritaReport {
    let a = orbifold_string_ring(x);
    let b = orbifold_string_ring(y);
    MoritaReport { dim_x: a.dim(), dim_y: b.dim(), verdict: find_isomorphism(&a, &b) }
}

fn verdict_from(method: &str, a: &SectorRing, b: &SectorRing, m: Matrix) -> MoritaVerdict {
    debug_assert!(a.is_isomorphism(b, &m));
    let witness = m.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
    MoritaVerdict::Isomorphic { method: method.into(), witness, matrix: m }
}

/// Searches for an algebra isomorphism `a → b`: first by basis
/// permutations compatible with the characteristic polynomials of the
/// left-multiplication operators, then by matching primitive idempotents
/// when both rings are commutative and split semisimple over `Q`.
pub fn find_isomorphism(a: &SectorRing, b: &SectorRing) -> MoritaVerdict {
    if a.dim() != b.dim() {
        return MoritaVerdict::NotIsomorphic { obstruction: format!("dimension {} != {}", a.dim(), b.dim()) };
    }
    if a.is_commutative() != b.is_commutative() {
        return MoritaVerdict::NotIsomorphic { obstruction: "commutativity differs".into() };
    }
    let (ca, cb) = (a.center_dimension(), b.center_dimension());
    if ca != cb {
        return MoritaVerdict::NotIsomorphic { obstruction: format!("center dimension {ca} != {cb}") };
    }
    let (ra, rb) = (a.trace_form_rank(), b.trace_form_rank());
    if ra != rb {
        return MoritaVerdict::NotIsomorphic { obstruction: format!("trace form rank {ra} != {rb}") };
    }
    if let Some(perm) = permutation_isomorphism(a, b) {
        let level = num_integer::lcm(a.level(), b.level());
        let mut m = linalg::zeros(level, a.dim(), a.dim());
        for (i, &p) in perm.iter().enumerate() {
            m[i][p] = CycloNumber::one(level);
        }
        return verdict_from("permutation", a, b, m);
    }
    if a.is_commutative() && a.is_rational() && b.is_rational() {
        match (primitive_idempotents(a), primitive_idempotents(b)) {
            (Split::Yes(ea), Split::Yes(eb)) => {
                // b_i = Σ_k λ_ik e_k, so φ(b_i) = Σ_k λ_ik f_k
                let level = 1;
                let inv = linalg::inverse(&ea, level).expect("idempotents form a basis");
                let m = linalg::mat_mul(&inv, &eb, level);
                if a.is_isomorphism(b, &m) {
                    return verdict_from("idempotents", a, b, m);
                }
            }
            (Split::Yes(_), Split::No) | (Split::No, Split::Yes(_)) => {
                return MoritaVerdict::NotIsomorphic {
                    obstruction: "only one ring is split semisimple over Q".into(),
                };
            }
            _ => {}
        }
    }
    MoritaVerdict::Inconclusive
}

fn permutation_isomorphism(a: &SectorRing, b: &SectorRing) -> Option<Vec<usize>> {
    let d = a.dim();
    let pa: Vec<Vec<CycloNumber>> = (0..d).map(|i| linalg::charpoly(&a.left_matrix(&a.basis_vector(i)), a.level())).collect();
    let pb: Vec<Vec<CycloNumber>> = (0..d).map(|i| linalg::charpoly(&b.left_matrix(&b.basis_vector(i)), b.level())).collect();
    let candidates: Vec<Vec<usize>> = (0..d)
        .map(|i| (0..d).filter(|&j| pa[i] == pb[j] && a.unit[i] == b.unit[j]).collect())
        .collect();
    let mut perm = vec![usize::MAX; d];
    let mut used = vec![false; d];
    fn consistent(a: &SectorRing, b: &SectorRing, perm: &[usize], upto: usize) -> bool {
        // all triples with max index == upto
        for i in 0..=upto {
            for j in 0..=upto {
                for k in 0..=upto {
                    if i.max(j).max(k) != upto {
                        continue;
                    }
                    if a.constant(i, j, k) != b.constant(perm[i], perm[j], perm[k]) {
                        return false;
                    }
                }
            }
        }
        true
    }
    fn search(
        a: &SectorRing,
        b: &SectorRing,
        cand: &[Vec<usize>],
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        i: usize,
    ) -> bool {
        if i == perm.len() {
            return true;
        }
        for &j in &cand[i] {
            if used[j] {
                continue;
            }
            perm[i] = j;
            used[j] = true;
            if consistent(a, b, perm, i) && search(a, b, cand, perm, used, i + 1) {
                return true;
            }
            used[j] = false;
        }
        perm[i] = usize::MAX;
        false
    }
    search(a, b, &candidates, &mut perm, &mut used, 0).then_some(perm)
}

enum Split {
    /// Rows are the primitive idempotents in basis coordinates.
    Yes(Matrix),
    No,
    Unknown,
}

/// Joint eigenspace refinement of the left-multiplication operators of a
/// commutative rational algebra.
fn primitive_idempotents(a: &SectorRing) -> Split {
    let d = a.dim();
    let level = a.level();
    // each space is given by a basis of column vectors
    let mut spaces: Vec<Vec<Vec<CycloNumber>>> = vec![(0..d).map(|i| a.basis_vector(i)).collect()];
    for i in 0..d {
        let l = a.left_matrix(&a.basis_vector(i));
        let cp: Vec<BigRational> = linalg::charpoly(&l, level).iter().map(|c| c.as_rational().expect("rational")).collect();
        let Some(mut roots) = linalg::rational_roots(&cp) else { return Split::Unknown };
        if roots.len() < d {
            return Split::No;
        }
        roots.dedup();
        let mut next = Vec::new();
        for space in &spaces {
            let mut total = 0;
            for r in &roots {
                // vectors v = Σ c_s w_s in the space with (L - r) v = 0
                let lambda = CycloNumber::from_rational(level, r.clone());
                let images: Vec<Vec<CycloNumber>> = space
                    .iter()
                    .map(|w| {
                        let lw = a.mul(&a.basis_vector(i), w);
                        lw.iter().zip(w).map(|(x, y)| x - &(&lambda * y)).collect()
                    })
                    .collect();
                let sys: Matrix = (0..d).map(|row| images.iter().map(|col| col[row].clone()).collect()).collect();
                let kernel = linalg::nullspace(&sys, level);
                if kernel.is_empty() {
                    continue;
                }
                total += kernel.len();
                let sub: Vec<Vec<CycloNumber>> = kernel
                    .iter()
                    .map(|c| {
                        space.iter().zip(c).fold(a.zero_vector(), |acc, (w, s)| {
                            acc.iter().zip(w).map(|(x, y)| x + &(s * y)).collect()
                        })
                    })
                    .collect();
                next.push(sub);
            }
            if total < space.len() {
                return Split::No;
            }
        }
        spaces = next;
    }
    if spaces.len() != d {
        return Split::No;
    }
    let mut rows = Vec::new();
    for space in spaces {
        let v = &space[0];
        let sq = a.mul(v, v);
        // v² = c v for a joint eigenvector
        let Some(k) = (0..d).find(|&k| !v[k].is_zero()) else { return Split::No };
        let c = &sq[k] * &v[k].inverse().expect("nonzero");
        let Some(ci) = c.inverse() else { return Split::No };
        rows.push(v.iter().map(|x| x * &ci).collect());
    }
    Split::Yes(rows)
}
