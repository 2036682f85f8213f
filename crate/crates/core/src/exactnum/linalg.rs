use std::collections::HashMap;

use num_traits::{One, Zero};

use super::{PolyZ, RatFuncZ, Rational, Ring};
use crate::error::{Error, Result};

/// Solves `A X = B` over `Q(zeta)` by fraction-free Gauss-Jordan elimination.
///
/// Every intermediate entry is a minor of `[A | B]`, so the divisions by the
/// previous pivot are exact polynomial divisions.
pub fn bareiss_solve(a: &[Vec<PolyZ>], b: &[Vec<PolyZ>]) -> Result<Vec<Vec<RatFuncZ>>> {
    let n = a.len();
    assert!(a.iter().all(|r| r.len() == n), "matrix must be square");
    assert_eq!(b.len(), n, "right-hand side has wrong row count");
    let w = b.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<PolyZ>> =
        (0..n).map(|i| a[i].iter().cloned().chain(b[i].iter().cloned()).collect()).collect();
    let mut prev = PolyZ::from_int(1);
    for k in 0..n {
        let p = (k..n).find(|&i| !m[i][k].is_zero()).ok_or(Error::SingularMatrix)?;
        m.swap(k, p);
        let pivot = m[k][k].clone();
        for i in 0..n {
            if i == k {
                continue;
            }
            let f = m[i][k].clone();
            for j in 0..n + w {
                if j == k {
                    continue;
                }
                let v = pivot.mul(&m[i][j]).sub(&f.mul(&m[k][j]));
                m[i][j] = v.div_exact(&prev).expect("fraction-free step must divide exactly");
            }
            m[i][k] = PolyZ::zero();
        }
        prev = pivot;
    }
    // every diagonal entry now equals det(A) up to the sign of the row swaps
    let mut out = vec![vec![RatFuncZ::zero(); w]; n];
    for i in 0..n {
        let d = m[i][i].clone();
        for j in 0..w {
            out[i][j] = RatFuncZ::new(m[i][n + j].clone(), d.clone());
        }
    }
    Ok(out)
}

/// Determinant of a rational matrix by Gaussian elimination.
pub fn rational_det(a: &[Vec<Rational>]) -> Rational {
    let n = a.len();
    let mut m = a.to_vec();
    let mut det = Rational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return Rational::zero();
        };
        if p != k {
            m.swap(p, k);
            det = -det;
        }
        let piv = m[k][k].clone();
        det *= &piv;
        let inv = piv.recip();
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let f = &m[i][k] * &inv;
            for j in k..n {
                let t = &f * &m[k][j];
                m[i][j] -= t;
            }
        }
    }
    det
}

/// Inverse of a rational matrix.
pub fn rational_inverse(a: &[Vec<Rational>]) -> Result<Vec<Vec<Rational>>> {
    let n = a.len();
    let mut m: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut r = a[i].clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&i| !m[i][k].is_zero()).ok_or(Error::SingularMatrix)?;
        m.swap(k, p);
        let inv = m[k][k].recip();
        for x in m[k].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i == k || m[i][k].is_zero() {
                continue;
            }
            let f = m[i][k].clone();
            for j in 0..2 * n {
                let t = &f * &m[k][j];
                m[i][j] -= t;
            }
        }
    }
    Ok(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Determinant over an arbitrary commutative ring (Laplace expansion with
/// memoized column subsets).
pub fn det_generic<R: Ring>(a: &[Vec<R>]) -> R {
    let n = a.len();
    if n == 0 {
        return R::one();
    }
    let mut memo: HashMap<u32, R> = HashMap::new();
    memo.insert(0, R::one());
    rec(a, (1u32 << n) - 1, &mut memo)
}

fn rec<R: Ring>(a: &[Vec<R>], cols: u32, memo: &mut HashMap<u32, R>) -> R {
    if let Some(v) = memo.get(&cols) {
        return v.clone();
    }
    let row = cols.count_ones() as usize - 1;
    let mut acc = R::zero();
    for j in 0..a.len() {
        if cols & (1 << j) == 0 || a[row][j].is_zero() {
            continue;
        }
        let t = a[row][j].mul(&rec(a, cols & !(1 << j), memo));
        acc = if (cols >> (j + 1)).count_ones() % 2 == 1 { acc.sub(&t) } else { acc.add(&t) };
    }
    memo.insert(cols, acc.clone());
    acc
}
