use std::collections::HashMap;

use super::{Rational, Ring};

/// Truncated power series `sum_{k<=order} a_k eps^k`.
#[derive(Clone, PartialEq, Debug)]
pub struct Jet<R> {
    coeffs: Vec<R>,
}

impl<R: Ring> Jet<R> {
    /// Builds a jet of order `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<R>) -> Self {
        assert!(!coeffs.is_empty(), "jet needs at least one coefficient");
        Jet { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Jet { coeffs: vec![R::zero(); order + 1] }
    }

    pub fn constant(c: R, order: usize) -> Self {
        let mut j = Self::zero(order);
        j.coeffs[0] = c;
        j
    }

    pub fn one(order: usize) -> Self {
        Self::constant(R::one(), order)
    }

    /// `c0 + c1 * eps`, padded with zeros.
    pub fn linear(c0: R, c1: R, order: usize) -> Self {
        let mut j = Self::constant(c0, order);
        if order >= 1 {
            j.coeffs[1] = c1;
        }
        j
    }

    /// `c0 + c1 * log(1 + eps)` truncated at `order`.
    pub fn log_linear(c0: R, c1: R, order: usize) -> Self {
        let mut j = Self::constant(c0, order);
        for k in 1..=order {
            let sign = if k % 2 == 1 { 1 } else { -1 };
            j.coeffs[k] = c1.scale(&super::rat(sign, k as i64));
        }
        j
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &R {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn check(&self, o: &Self) {
        assert_eq!(self.order(), o.order(), "jets of different order");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check(o);
        Jet { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.check(o);
        Jet { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn neg(&self) -> Self {
        Jet { coeffs: self.coeffs.iter().map(|a| a.neg()).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check(o);
        let m = self.order();
        let mut out = vec![R::zero(); m + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(m + 1 - i) {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        Jet { coeffs: out }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Jet { coeffs: self.coeffs.iter().map(|a| a.scale(r)).collect() }
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Jet<S> {
        Jet { coeffs: self.coeffs.iter().map(f).collect() }
    }
}

/// Determinant of a square jet matrix by Laplace expansion along rows with
/// memoized column subsets. Works over any commutative ring; no division.
pub fn jet_det<R: Ring>(m: &[Vec<Jet<R>>]) -> Jet<R> {
    let n = m.len();
    if n == 0 {
        return Jet::one(0);
    }
    let order = m[0][0].order();
    assert!(n <= 20, "jet_det dimension too large");
    let mut memo: HashMap<u32, Jet<R>> = HashMap::new();
    memo.insert(0, Jet::one(order));
    det_rec(m, (1u32 << n) - 1, &mut memo)
}

fn det_rec<R: Ring>(m: &[Vec<Jet<R>>], cols: u32, memo: &mut HashMap<u32, Jet<R>>) -> Jet<R> {
    if let Some(v) = memo.get(&cols) {
        return v.clone();
    }
    let row = cols.count_ones() as usize - 1;
    let order = m[0][0].order();
    let mut acc = Jet::zero(order);
    // columns in increasing order; the sign alternates with the rank of j in `cols`
    for j in 0..m.len() {
        if cols & (1 << j) == 0 {
            continue;
        }
        // parity of the number of chosen columns after j
        let after = (cols >> (j + 1)).count_ones();
        let sign_neg = after % 2 == 1;
        let e = &m[row][j];
        if e.is_zero() {
            continue;
        }
        let minor = det_rec(m, cols & !(1 << j), memo);
        let t = e.mul(&minor);
        acc = if sign_neg { acc.sub(&t) } else { acc.add(&t) };
    }
    memo.insert(cols, acc.clone());
    acc
}
