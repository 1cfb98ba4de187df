//! Dense linear algebra over `Q(ζ_N)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::cyclo::CycloNumber;

pub type Matrix = Vec<Vec<CycloNumber>>;

pub fn zeros(level: usize, rows: usize, cols: usize) -> Matrix {
    vec![vec![CycloNumber::zero(level); cols]; rows]
}

pub fn identity(level: usize, n: usize) -> Matrix {
    let mut m = zeros(level, n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = CycloNumber::one(level);
    }
    m
}

pub fn mat_mul(a: &Matrix, b: &Matrix, level: usize) -> Matrix {
    let cols = b.first().map_or(0, Vec::len);
    let mut out = zeros(level, a.len(), cols);
    for (i, row) in a.iter().enumerate() {
        for (k, x) in row.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for j in 0..cols {
                if !b[k][j].is_zero() {
                    out[i][j] = &out[i][j] + &(x * &b[k][j]);
                }
            }
        }
    }
    out
}

/// Row echelon form in place; returns the pivot columns.
pub fn row_reduce(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].inverse().expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = &f * &m[r][j];
                    m[i][j] = &m[i][j] - &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    let mut a = m.clone();
    row_reduce(&mut a).len()
}

pub fn determinant(m: &Matrix, level: usize) -> CycloNumber {
    let n = m.len();
    let mut a = m.clone();
    let mut det = CycloNumber::one(level);
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return CycloNumber::zero(level);
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det = &det * &a[c][c];
        let inv = a[c][c].inverse().expect("nonzero pivot");
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            for j in c..n {
                let t = &f * &a[c][j];
                a[i][j] = &a[i][j] - &t;
            }
        }
    }
    det
}

/// Basis of `{v : m v = 0}`.
pub fn nullspace(m: &Matrix, level: usize) -> Vec<Vec<CycloNumber>> {
    let cols = m.first().map_or(0, Vec::len);
    let mut a = m.clone();
    let pivots = row_reduce(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![CycloNumber::zero(level); cols];
            v[f] = CycloNumber::one(level);
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -&a[r][f];
            }
            v
        })
        .collect()
}

/// Inverse of a square matrix, if it exists.
pub fn inverse(m: &Matrix, level: usize) -> Option<Matrix> {
    let n = m.len();
    let mut a: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { CycloNumber::one(level) } else { CycloNumber::zero(level) }));
            r
        })
        .collect();
    let pivots = row_reduce(&mut a);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Characteristic polynomial `det(xI − M)` by Berkowitz's division-free
/// algorithm; coefficients lowest degree first, monic.
pub fn charpoly(m: &Matrix, level: usize) -> Vec<CycloNumber> {
    let n = m.len();
    // vector of coefficients, highest degree first, for the leading k×k block
    let mut c: Vec<CycloNumber> = vec![CycloNumber::one(level)];
    for k in 0..n {
        // block [[A, R], [C, a]] with A the leading k×k, a = m[k][k]
        let a = &m[k][k];
        let r: Vec<&CycloNumber> = (0..k).map(|j| &m[j][k]).collect();
        let cvec: Vec<&CycloNumber> = (0..k).map(|j| &m[k][j]).collect();
        // Toeplitz column: 1, -a, -C R, -C A R, -C A^2 R, ...
        let mut t = vec![CycloNumber::one(level), -a];
        let mut v: Vec<CycloNumber> = r.iter().map(|x| (*x).clone()).collect();
        for _ in 0..k {
            let s = cvec.iter().zip(&v).fold(CycloNumber::zero(level), |acc, (x, y)| &acc + &(*x * y));
            t.push(-s);
            v = (0..k)
                .map(|i| (0..k).fold(CycloNumber::zero(level), |acc, j| &acc + &(&m[i][j] * &v[j])))
                .collect();
        }
        let mut next = vec![CycloNumber::zero(level); c.len() + 1];
        for (i, slot) in next.iter_mut().enumerate() {
            let mut acc = CycloNumber::zero(level);
            for (j, cj) in c.iter().enumerate() {
                if i >= j && i - j < t.len() {
                    acc = &acc + &(&t[i - j] * cj);
                }
            }
            *slot = acc;
        }
        c = next;
    }
    c.reverse();
    c
}

fn small_divisors(n: &BigInt) -> Option<Vec<i128>> {
    let n = n.abs().to_i128()?;
    if n == 0 || n > 1_000_000_000_000 {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1i128;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            out.push(n / d);
        }
        d += 1;
    }
    out.sort_unstable();
    out.dedup();
    Some(out)
}

/// Rational roots with multiplicity of a polynomial with rational
/// coefficients (lowest degree first). `None` when the constant term is too
/// large to factor by trial division.
pub fn rational_roots(poly: &[BigRational]) -> Option<Vec<BigRational>> {
    let mut p: Vec<BigRational> = poly.to_vec();
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    let mut roots = Vec::new();
    while p.len() > 1 && p[0].is_zero() {
        p.remove(0);
        roots.push(BigRational::zero());
    }
    if p.len() <= 1 {
        return Some(roots);
    }
    let den = p.iter().fold(BigInt::from(1), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
    let nums = small_divisors(&ints[0])?;
    let dens = small_divisors(ints.last().expect("nonconstant"))?;
    let mut candidates: Vec<BigRational> = Vec::new();
    for &a in &nums {
        for &b in &dens {
            for s in [1i128, -1] {
                candidates.push(BigRational::new(BigInt::from(s * a), BigInt::from(b)));
            }
        }
    }
    candidates.sort();
    candidates.dedup();
    for r in candidates {
        loop {
            // synthetic division by (x - r)
            let deg = p.len() - 1;
            if deg == 0 {
                break;
            }
            let mut q = vec![BigRational::zero(); deg];
            let mut acc = BigRational::zero();
            for i in (0..=deg).rev() {
                acc = &acc * &r + &p[i];
                if i > 0 {
                    q[i - 1] = acc.clone();
                }
            }
            if acc.is_zero() {
                roots.push(r.clone());
                p = q;
            } else {
                break;
            }
        }
    }
    Some(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_matrix(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| CycloNumber::from_int(1, x)).collect()).collect()
    }

    fn ints(p: &[CycloNumber]) -> Vec<i64> {
        p.iter().map(|c| c.as_rational().unwrap().to_integer().try_into().unwrap()).collect()
    }

    #[test]
    fn charpoly_small() {
        let m = int_matrix(&[&[2, 1], &[1, 2]]);
        assert_eq!(ints(&charpoly(&m, 1)), [3, -4, 1]);
        let m = int_matrix(&[&[0, 1, 0], &[0, 0, 1], &[6, -11, 6]]);
        assert_eq!(ints(&charpoly(&m, 1)), [-6, 11, -6, 1]);
        assert_eq!(ints(&charpoly(&Vec::new(), 1)), [1]);
    }

    #[test]
    fn charpoly_matches_determinant_oracle() {
        // det(xI - M) at x = 0..4 compared to the polynomial evaluation
        let m = int_matrix(&[&[1, 2, 0, -1], &[3, 0, 1, 1], &[0, 2, 2, 5], &[1, 1, 1, 0]]);
        let p = ints(&charpoly(&m, 1));
        for x in 0..5i64 {
            let shifted: Matrix = (0..4)
                .map(|i| {
                    (0..4)
                        .map(|j| {
                            let d = if i == j { CycloNumber::from_int(1, x) } else { CycloNumber::zero(1) };
                            &d - &m[i][j]
                        })
                        .collect()
                })
                .collect();
            let det = determinant(&shifted, 1).as_rational().unwrap();
            let val: i64 = p.iter().rev().fold(0, |acc, c| acc * x + c);
            assert_eq!(det, BigRational::from_integer(val.into()));
        }
    }

    #[test]
    fn inverse_and_nullspace() {
        let m = int_matrix(&[&[1, 2], &[3, 4]]);
        let inv = inverse(&m, 1).unwrap();
        assert_eq!(mat_mul(&m, &inv, 1), identity(1, 2));
        let s = int_matrix(&[&[1, 2], &[2, 4]]);
        assert!(inverse(&s, 1).is_none());
        let ns = nullspace(&s, 1);
        assert_eq!(ns.len(), 1);
        assert_eq!(rank(&s), 1);
    }

    #[test]
    fn roots() {
        let q = |n: i64| BigRational::from_integer(n.into());
        // (x-1)^2 (x+3) x = x^4 + x^3 - 5x^2 + 3x
        let r = rational_roots(&[q(0), q(3), q(-5), q(1), q(1)]).unwrap();
        let mut r: Vec<i64> = r.iter().map(|x| x.to_integer().try_into().unwrap()).collect();
        r.sort();
        assert_eq!(r, [-3, 0, 1, 1]);
        // x^2 - 2 has none
        assert!(rational_roots(&[q(-2), q(0), q(1)]).unwrap().is_empty());
    }
}
