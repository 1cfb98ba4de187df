//! Exact arithmetic in cyclotomic fields `Q(ζ_N)`.
//!
//! An element is a polynomial in `ζ` of degree below `φ(N)`, reduced modulo
//! the `N`-th cyclotomic polynomial. Values of different levels are combined
//! by lifting both to the lcm of the levels.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Poly = Vec<BigRational>;

fn trim(p: &mut Poly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Poly {
    let mut out: Poly = (0..a.len().max(b.len()))
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
            x - y
        })
        .collect();
    trim(&mut out);
    out
}

/// Quotient and remainder; `b` must be nonzero.
fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Poly, Poly) {
    let mut r: Poly = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead = b[db].clone();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let c = r.last().expect("nonempty") / &lead;
        for (i, y) in b.iter().enumerate() {
            r[k + i] -= &c * y;
        }
        q[k] = c;
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

fn euler_phi(n: usize) -> usize {
    (1..=n).filter(|k| k.gcd(&n) == 1).count()
}

fn cyclotomic(n: usize) -> Arc<Poly> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Poly>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().expect("cache").get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Φ_d for every proper divisor d of n.
    let mut p: Poly = vec![BigRational::zero(); n + 1];
    p[0] = -BigRational::one();
    p[n] = BigRational::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            let (q, r) = poly_divmod(&p, &cyclotomic(d));
            debug_assert!(r.is_empty());
            p = q;
        }
    }
    let p = Arc::new(p);
    cache.lock().expect("cache").insert(n, p.clone());
    p
}

/// The `N`-th cyclotomic polynomial with integer coefficients, lowest degree first.
pub fn cyclotomic_polynomial(n: usize) -> Vec<BigInt> {
    cyclotomic(n).iter().map(|c| c.to_integer()).collect()
}

/// An element of `Q(ζ_N)`.
#[derive(Clone)]
pub struct CycloNumber {
    level: usize,
    coeffs: Poly,
}

impl CycloNumber {
    pub fn zero(level: usize) -> Self {
        assert!(level > 0, "level must be positive");
        CycloNumber { level, coeffs: Vec::new() }
    }

    pub fn one(level: usize) -> Self {
        Self::from_rational(level, BigRational::one())
    }

    pub fn from_rational(level: usize, q: BigRational) -> Self {
        Self::from_poly(level, vec![q])
    }

    pub fn from_int(level: usize, k: i64) -> Self {
        Self::from_rational(level, BigRational::from_integer(k.into()))
    }

    /// `ζ_N^a`.
    pub fn root(level: usize, a: i64) -> Self {
        let k = a.rem_euclid(level as i64) as usize;
        let mut p = vec![BigRational::zero(); k + 1];
        p[k] = BigRational::one();
        Self::from_poly(level, p)
    }

    /// Reduces an arbitrary polynomial in `ζ_N`.
    pub fn from_poly(level: usize, p: Poly) -> Self {
        assert!(level > 0, "level must be positive");
        let phi = cyclotomic(level);
        let (_, r) = poly_divmod(&p, &phi);
        CycloNumber { level, coeffs: r }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// Coefficients of `1, ζ, ζ², …` (trailing zeros dropped).
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// The rational value, if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.coeffs.len() {
            0 => Some(BigRational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    /// Re-expresses the element in `Q(ζ_M)` for a multiple `M` of the level.
    pub fn lift(&self, level: usize) -> Self {
        if level == self.level {
            return self.clone();
        }
        assert!(level.is_multiple_of(self.level), "cannot lift level {} to {level}", self.level);
        let step = level / self.level;
        let mut p = vec![BigRational::zero(); self.coeffs.len().saturating_sub(1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            p[i * step] = c.clone();
        }
        Self::from_poly(level, p)
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        let l = self.level.lcm(&other.level);
        (self.lift(l), other.lift(l))
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // extended Euclid: s·a + t·Φ = g, g a nonzero constant since Φ is irreducible
        let phi = cyclotomic(self.level);
        let (mut r0, mut r1) = ((*phi).clone(), self.coeffs.clone());
        let (mut s0, mut s1): (Poly, Poly) = (Vec::new(), vec![BigRational::one()]);
        while !r1.is_empty() {
            let (q, r) = poly_divmod(&r0, &r1);
            let s = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        debug_assert_eq!(r0.len(), 1);
        let c = r0[0].clone();
        let scaled: Poly = s0.into_iter().map(|x| x / &c).collect();
        Some(Self::from_poly(self.level, scaled))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.level);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Number field conjugate `ζ ↦ ζ^k` for `k` prime to the level.
    pub fn galois(&self, k: usize) -> Self {
        assert_eq!(k.gcd(&self.level), 1, "exponent must be a unit");
        let mut acc = Self::zero(self.level);
        for (i, c) in self.coeffs.iter().enumerate() {
            let term = &Self::root(self.level, (i * k) as i64) * &Self::from_rational(self.level, c.clone());
            acc = &acc + &term;
        }
        acc
    }

    /// Degree of `Q(ζ_N)` over `Q`.
    pub fn field_degree(level: usize) -> usize {
        euler_phi(level)
    }
}

impl PartialEq for CycloNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.level == other.level {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = self.aligned(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CycloNumber {}

impl<'a> Add<&'a CycloNumber> for &'a CycloNumber {
    type Output = CycloNumber;
    fn add(self, rhs: &CycloNumber) -> CycloNumber {
        if self.level != rhs.level {
            let (a, b) = self.aligned(rhs);
            return &a + &b;
        }
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut p: Poly = (0..n)
            .map(|i| match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                (Some(x), Some(y)) => x + y,
                (Some(x), None) | (None, Some(x)) => x.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        trim(&mut p);
        CycloNumber { level: self.level, coeffs: p }
    }
}

impl<'a> Sub<&'a CycloNumber> for &'a CycloNumber {
    type Output = CycloNumber;
    fn sub(self, rhs: &CycloNumber) -> CycloNumber {
        self + &(-rhs)
    }
}

impl Neg for &CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        CycloNumber { level: self.level, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        -&self
    }
}

impl<'a> Mul<&'a CycloNumber> for &'a CycloNumber {
    type Output = CycloNumber;
    fn mul(self, rhs: &CycloNumber) -> CycloNumber {
        if self.level != rhs.level {
            let (a, b) = self.aligned(rhs);
            return &a * &b;
        }
        if self.is_zero() || rhs.is_zero() {
            return CycloNumber::zero(self.level);
        }
        CycloNumber::from_poly(self.level, poly_mul(&self.coeffs, &rhs.coeffs))
    }
}

impl Add for CycloNumber {
    type Output = CycloNumber;
    fn add(self, rhs: CycloNumber) -> CycloNumber {
        &self + &rhs
    }
}

impl Sub for CycloNumber {
    type Output = CycloNumber;
    fn sub(self, rhs: CycloNumber) -> CycloNumber {
        &self - &rhs
    }
}

impl Mul for CycloNumber {
    type Output = CycloNumber;
    fn mul(self, rhs: CycloNumber) -> CycloNumber {
        &self * &rhs
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Prints as `a0 + a1*z + a2*z^2 + …` with `z = ζ_N`; zero terms are omitted.
impl fmt::Display for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{i}"),
            };
            let mag = c.abs();
            let body = if i == 0 {
                fmt_rational(&mag)
            } else if mag.is_one() {
                mono
            } else {
                format!("{}*{mono}", fmt_rational(&mag))
            };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                write!(f, "{body}")?;
                first = false;
            } else {
                write!(f, " {} {body}", if c.is_negative() { "-" } else { "+" })?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]_{}", self, self.level)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn cyclotomic_polynomials() {
        let as_i64 = |n| cyclotomic_polynomial(n).iter().map(|c| i64::try_from(c).unwrap()).collect::<Vec<_>>();
        assert_eq!(as_i64(1), [-1, 1]);
        assert_eq!(as_i64(2), [1, 1]);
        assert_eq!(as_i64(4), [1, 0, 1]);
        assert_eq!(as_i64(6), [1, -1, 1]);
        assert_eq!(as_i64(12), [1, 0, -1, 0, 1]);
        for n in 1..=30 {
            assert_eq!(cyclotomic(n).len() - 1, euler_phi(n));
        }
    }

    #[test]
    fn roots_of_unity() {
        for n in 1..=12 {
            let z = CycloNumber::root(n, 1);
            assert!(z.pow(n as u32).is_one(), "level {n}");
            let sum = (0..n as i64).fold(CycloNumber::zero(n), |acc, k| &acc + &CycloNumber::root(n, k));
            if n > 1 {
                assert!(sum.is_zero(), "sum of roots at level {n}");
            }
        }
        assert_eq!(CycloNumber::root(2, 1), CycloNumber::from_int(2, -1));
        assert_eq!(CycloNumber::root(4, 2), CycloNumber::from_int(1, -1));
    }

    #[test]
    fn inverses() {
        for n in [1, 3, 5, 8, 12] {
            let x = CycloNumber::from_poly(n, vec![q(2, 3), q(-1, 1), q(5, 7)]);
            if x.is_zero() {
                continue;
            }
            let y = x.inverse().unwrap();
            assert!((&x * &y).is_one(), "level {n}");
        }
        assert!(CycloNumber::zero(5).inverse().is_none());
    }

    #[test]
    fn lifting_preserves_values() {
        let z3 = CycloNumber::root(3, 1);
        let z6 = CycloNumber::root(6, 2);
        assert_eq!(z3, z6);
        let z4 = CycloNumber::root(4, 1);
        let prod = &z3 * &z4;
        assert_eq!(prod.level(), 12);
        assert_eq!(prod, CycloNumber::root(12, 7));
    }

    #[test]
    fn display() {
        assert_eq!(CycloNumber::zero(3).to_string(), "0");
        assert_eq!(CycloNumber::from_int(4, 3).to_string(), "3");
        let x = CycloNumber::from_poly(5, vec![q(1, 2), q(-1, 1), q(0, 1), q(3, 1)]);
        assert_eq!(x.to_string(), "1/2 - z + 3*z^3");
        assert_eq!(CycloNumber::root(3, 2).to_string(), "-1 - z");
    }
}
