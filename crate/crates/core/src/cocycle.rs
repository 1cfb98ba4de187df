//! Root-of-unity valued 2-cocycles and the discrete-torsion 1-cocycle on the
//! inertia groupoid.

use std::fmt;
use std::ops::Mul;
use std::sync::Arc;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CocycleError;
use crate::group::{Element, FiniteGroup, IDENTITY};

/// `exp(2πi q)` with `q` in `[0,1)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Phase(Ratio<i64>);

impl Phase {
    pub const ONE: Phase = Phase(Ratio::new_raw(0, 1));

    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Phase::from_ratio(Ratio::new(num, den))
    }

    pub fn from_ratio(q: Ratio<i64>) -> Self {
        let f = q - q.floor();
        Phase(f)
    }

    /// The exponent `q`.
    pub fn q(self) -> Ratio<i64> {
        self.0
    }

    pub fn is_one(self) -> bool {
        self.0.is_zero()
    }

    pub fn inv(self) -> Self {
        Phase::from_ratio(-self.0)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn div(self, other: Phase) -> Self {
        self * other.inv()
    }

    /// Smallest `N` with `Phase^N = 1`.
    pub fn order(self) -> usize {
        *self.0.denom() as usize
    }
}

impl Mul for Phase {
    type Output = Phase;
    // phases multiply by adding exponents
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Phase) -> Phase {
        Phase::from_ratio(self.0 + rhs.0)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Phase({self})")
    }
}

/// Why a table fails to be a normalized 2-cocycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CocycleViolation {
    Normalization { g: Element },
    Identity { g: Element, h: Element, k: Element },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CocycleReport {
    pub valid: bool,
    pub witness: Option<CocycleViolation>,
}

fn check_dims(group: &FiniteGroup, table: &[Vec<Phase>]) -> Result<(), CocycleError> {
    let n = group.order();
    if table.len() != n {
        return Err(CocycleError::DimensionMismatch { rows: table.len(), cols: n, order: n });
    }
    if let Some(row) = table.iter().find(|r| r.len() != n) {
        return Err(CocycleError::DimensionMismatch { rows: n, cols: row.len(), order: n });
    }
    Ok(())
}

fn first_identity_failure(group: &FiniteGroup, a: &dyn Fn(Element, Element) -> Phase) -> Option<(Element, Element, Element)> {
    for g in group.elements() {
        for h in group.elements() {
            let gh = group.mul(g, h);
            for k in group.elements() {
                if a(g, h) * a(gh, k) != a(g, group.mul(h, k)) * a(h, k) {
                    return Some((g, h, k));
                }
            }
        }
    }
    None
}

/// Checks normalization and `α(g,h)α(gh,k) = α(g,hk)α(h,k)` on all triples.
pub fn is_two_cocycle(group: &FiniteGroup, table: &[Vec<Phase>]) -> Result<CocycleReport, CocycleError> {
    check_dims(group, table)?;
    if let Some(g) = group.elements().find(|&g| !table[IDENTITY][g].is_one() || !table[g][IDENTITY].is_one()) {
        return Ok(CocycleReport { valid: false, witness: Some(CocycleViolation::Normalization { g }) });
    }
    let witness = first_identity_failure(group, &|g, h| table[g][h]).map(|(g, h, k)| CocycleViolation::Identity { g, h, k });
    Ok(CocycleReport { valid: witness.is_none(), witness })
}

/// A normalized 2-cocycle `α : G × G → μ_∞`.
#[derive(Clone, PartialEq, Eq)]
pub struct TwoCocycle {
    group: Arc<FiniteGroup>,
    table: Vec<Phase>,
}

impl fmt::Debug for TwoCocycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TwoCocycle").field("group", &self.group.name()).finish()
    }
}

impl TwoCocycle {
    /// Validates a table. An un-normalized table is divided by `α(e,e)`
    /// first; for a genuine cocycle `α(e,g) = α(g,e) = α(e,e)`.
    pub fn new(group: Arc<FiniteGroup>, table: &[Vec<Phase>]) -> Result<Self, CocycleError> {
        check_dims(&group, table)?;
        let c = table[IDENTITY][IDENTITY].inv();
        let scaled: Vec<Vec<Phase>> = table.iter().map(|row| row.iter().map(|&x| x * c).collect()).collect();
        let report = is_two_cocycle(&group, &scaled)?;
        match report.witness {
            None => Ok(TwoCocycle { table: scaled.into_iter().flatten().collect(), group }),
            Some(CocycleViolation::Identity { g, h, k }) => Err(CocycleError::NotCocycle { g, h, k }),
            Some(CocycleViolation::Normalization { .. }) => {
                // a normalization failure after scaling means the identity fails somewhere
                let (g, h, k) = first_identity_failure(&group, &|g, h| scaled[g][h]).expect("non-cocycle");
                Err(CocycleError::NotCocycle { g, h, k })
            }
        }
    }

    pub fn trivial(group: Arc<FiniteGroup>) -> Self {
        let n = group.order();
        TwoCocycle { group, table: vec![Phase::ONE; n * n] }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn group_arc(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    #[inline]
    pub fn get(&self, g: Element, h: Element) -> Phase {
        self.table[g * self.group.order() + h]
    }

    pub fn table(&self) -> Vec<Vec<Phase>> {
        self.table.chunks(self.group.order()).map(<[Phase]>::to_vec).collect()
    }

    /// Pointwise product `α·α'`.
    pub fn product(&self, other: &TwoCocycle) -> TwoCocycle {
        assert_eq!(self.group.order(), other.group.order(), "cocycles over different groups");
        let table = self.table.iter().zip(&other.table).map(|(&a, &b)| a * b).collect();
        TwoCocycle { group: self.group.clone(), table }
    }

    /// lcm of the orders of all values.
    pub fn level(&self) -> usize {
        self.table.iter().fold(1, |acc, p| acc.lcm(&p.order()))
    }
}

/// `δβ(g,h) = β(g)β(h)β(gh)⁻¹`.
pub fn coboundary(group: Arc<FiniteGroup>, beta: &[Phase]) -> Result<TwoCocycle, CocycleError> {
    let n = group.order();
    if beta.len() != n {
        return Err(CocycleError::DimensionMismatch { rows: beta.len(), cols: 1, order: n });
    }
    if !beta[IDENTITY].is_one() {
        return Err(CocycleError::BetaNotNormalized);
    }
    let mut table = Vec::with_capacity(n * n);
    for g in 0..n {
        for h in 0..n {
            table.push(beta[g] * beta[h] * beta[group.mul(g, h)].inv());
        }
    }
    Ok(TwoCocycle { group, table })
}

/// `τ(g,h)` on the arrow `g → h⁻¹gh` of the inertia groupoid.
#[derive(Clone, PartialEq, Eq)]
pub struct TorsionCocycle {
    group: Arc<FiniteGroup>,
    tau: Vec<Phase>,
}

impl fmt::Debug for TorsionCocycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TorsionCocycle").field("group", &self.group.name()).finish()
    }
}

/// `τ(g,h) = α(g,h) / α(h, h⁻¹gh)`.
pub fn discrete_torsion(alpha: &TwoCocycle) -> TorsionCocycle {
    let group = alpha.group_arc().clone();
    let n = group.order();
    let mut tau = Vec::with_capacity(n * n);
    for g in 0..n {
        for h in 0..n {
            tau.push(alpha.get(g, h).div(alpha.get(h, group.conj(g, h))));
        }
    }
    TorsionCocycle { group, tau }
}

impl TorsionCocycle {
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    #[inline]
    pub fn get(&self, g: Element, h: Element) -> Phase {
        self.tau[g * self.group.order() + h]
    }

    pub fn table(&self) -> Vec<Vec<Phase>> {
        self.tau.chunks(self.group.order()).map(<[Phase]>::to_vec).collect()
    }

    /// First `(g,h,k)` violating `τ(g,hk) = τ(g,h)·τ(h⁻¹gh,k)`.
    pub fn groupoid_law_failure(&self) -> Option<(Element, Element, Element)> {
        let grp = &self.group;
        for g in grp.elements() {
            for h in grp.elements() {
                let t = grp.conj(g, h);
                for k in grp.elements() {
                    if self.get(g, grp.mul(h, k)) != self.get(g, h) * self.get(t, k) {
                        return Some((g, h, k));
                    }
                }
            }
        }
        None
    }

    /// `g` is α-regular when `τ(g,h) = 1` on all of `C(g)`.
    pub fn is_regular(&self, g: Element) -> bool {
        self.group.centralizer(g).into_iter().all(|h| self.get(g, h).is_one())
    }
}

/// The character `h ↦ τ(g,h)` of `C(g)`, as `(h, value)` pairs in
/// ascending order of `h`.
pub fn restrict_to_centralizer(tau: &TorsionCocycle, g: Element) -> Result<Vec<(Element, Phase)>, CocycleError> {
    let grp = tau.group();
    let cent = grp.centralizer(g);
    for &h1 in &cent {
        for &h2 in &cent {
            if tau.get(g, grp.mul(h1, h2)) != tau.get(g, h1) * tau.get(g, h2) {
                return Err(CocycleError::NotCharacter { g, h1, h2 });
            }
        }
    }
    Ok(cent.into_iter().map(|h| (h, tau.get(g, h))).collect())
}

#[derive(Serialize, Deserialize)]
struct CocycleJson {
    group: Value,
    denominator: i64,
    num: Vec<Vec<i64>>,
}

/// Parses `{"group", "denominator", "num"}`; entry `(g,h)` is `num[g][h]/denominator`.
pub fn parse_cocycle(
    text: &str,
    resolve: &dyn Fn(&str) -> Result<FiniteGroup, crate::error::GroupError>,
) -> Result<TwoCocycle, CocycleError> {
    let doc: CocycleJson = serde_json::from_str(text)?;
    if doc.denominator == 0 {
        return Err(CocycleError::ZeroDenominator);
    }
    let group = Arc::new(crate::group::group_from_value(&doc.group, resolve)?);
    let table: Vec<Vec<Phase>> =
        doc.num.iter().map(|row| row.iter().map(|&a| Phase::new(a, doc.denominator)).collect()).collect();
    TwoCocycle::new(group, &table)
}

pub fn cocycle_to_json(alpha: &TwoCocycle) -> Value {
    phase_table_json(alpha.group(), &alpha.table())
}

/// Serializes a phase table over a common denominator.
pub fn phase_table_json(group: &FiniteGroup, table: &[Vec<Phase>]) -> Value {
    let den = table.iter().flatten().fold(1i64, |acc, p| acc.lcm(p.q().denom()));
    let num: Vec<Vec<i64>> = table
        .iter()
        .map(|row| row.iter().map(|p| (p.q() * Ratio::from_integer(den)).to_integer()).collect())
        .collect();
    serde_json::to_value(CocycleJson { group: Value::String(group.name().to_string()), denominator: den, num })
        .expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn z2xz2() -> Arc<FiniteGroup> {
        Arc::new(catalog::group("Z2xZ2").unwrap())
    }

    #[test]
    fn phase_arithmetic() {
        assert_eq!(Phase::new(5, 4), Phase::new(1, 4));
        assert_eq!(Phase::new(-1, 3), Phase::new(2, 3));
        assert_eq!(Phase::new(1, 4) * Phase::new(3, 4), Phase::ONE);
        assert_eq!(Phase::new(1, 6).inv(), Phase::new(5, 6));
        assert_eq!(Phase::new(2, 4).order(), 2);
        assert_eq!(Phase::new(3, 3).to_string(), "0");
    }

    #[test]
    fn trivial_table_is_cocycle() {
        for name in ["Z5", "S3", "Q8"] {
            let g = catalog::group(name).unwrap();
            let table = vec![vec![Phase::ONE; g.order()]; g.order()];
            assert!(is_two_cocycle(&g, &table).unwrap().valid);
        }
    }

    #[test]
    fn nontrivial_z2xz2_cocycle() {
        let g = z2xz2();
        let alpha = catalog::cocycle(&g, "nontrivial").unwrap();
        for a in g.elements() {
            for b in g.elements() {
                let expected = Phase::new(((a / 2) * (b % 2)) as i64, 2);
                assert_eq!(alpha.get(a, b), expected);
            }
        }
        let tau = discrete_torsion(&alpha);
        for a in g.elements() {
            for b in g.elements() {
                let (a1, a2, b1, b2) = ((a / 2) as i64, (a % 2) as i64, (b / 2) as i64, (b % 2) as i64);
                assert_eq!(tau.get(a, b), Phase::new(a1 * b2 - a2 * b1, 2));
            }
        }
        // g = (1,0): h = (b1,b2) ↦ exp(πi b2)
        let chi = restrict_to_centralizer(&tau, 2).unwrap();
        for (h, p) in chi {
            assert_eq!(p, Phase::new((h % 2) as i64, 2));
        }
    }

    #[test]
    fn perturbed_cocycle_is_rejected_with_witness() {
        let g = z2xz2();
        let mut table = catalog::cocycle(&g, "nontrivial").unwrap().table();
        table[1][3] = table[1][3] * Phase::new(1, 3);
        let report = is_two_cocycle(&g, &table).unwrap();
        assert!(!report.valid);
        let Some(CocycleViolation::Identity { g: a, h, k }) = report.witness else {
            panic!("expected identity witness");
        };
        let lhs = table[a][h] * table[g.mul(a, h)][k];
        let rhs = table[a][g.mul(h, k)] * table[h][k];
        assert_ne!(lhs, rhs);
        assert!(TwoCocycle::new(g.clone(), &table).is_err());
    }

    #[test]
    fn dimension_mismatch() {
        let g = z2xz2();
        let table = vec![vec![Phase::ONE; 3]; 4];
        assert!(matches!(is_two_cocycle(&g, &table), Err(CocycleError::DimensionMismatch { .. })));
    }

    #[test]
    fn unnormalized_input_is_normalized() {
        let g = Arc::new(FiniteGroup::cyclic(3));
        let c = Phase::new(1, 5);
        let table = vec![vec![c; 3]; 3];
        let alpha = TwoCocycle::new(g, &table).unwrap();
        assert!(alpha.table().iter().flatten().all(|p| p.is_one()));
    }

    #[test]
    fn coboundary_examples() {
        let z2 = Arc::new(FiniteGroup::cyclic(2));
        let d = coboundary(z2.clone(), &[Phase::ONE, Phase::new(1, 4)]).unwrap();
        assert_eq!(d.get(1, 1), Phase::new(1, 2));
        assert!(is_two_cocycle(&z2, &d.table()).unwrap().valid);
        let triv = coboundary(z2.clone(), &[Phase::ONE, Phase::ONE]).unwrap();
        assert_eq!(triv, TwoCocycle::trivial(z2.clone()));
        assert!(matches!(coboundary(z2, &[Phase::new(1, 2), Phase::ONE]), Err(CocycleError::BetaNotNormalized)));
    }

    #[test]
    fn torsion_of_trivial_cocycle_is_trivial() {
        let g = Arc::new(FiniteGroup::symmetric(3));
        let tau = discrete_torsion(&TwoCocycle::trivial(g.clone()));
        assert!(tau.table().iter().flatten().all(|p| p.is_one()));
        assert!(tau.groupoid_law_failure().is_none());
        assert!(restrict_to_centralizer(&tau, IDENTITY).unwrap().iter().all(|(_, p)| p.is_one()));
    }

    #[test]
    fn json_round_trip() {
        let g = z2xz2();
        let alpha = catalog::cocycle(&g, "nontrivial").unwrap();
        let text = cocycle_to_json(&alpha).to_string();
        let back = parse_cocycle(&text, &|n| catalog::group(n)).unwrap();
        assert_eq!(back.table(), alpha.table());
        let bad = r#"{"group": "Z2", "denominator": 0, "num": [[0,0],[0,0]]}"#;
        assert!(matches!(parse_cocycle(bad, &|n| catalog::group(n)), Err(CocycleError::ZeroDenominator)));
    }
}
