use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{fmt_rational, ExactValue, Jet, Rational};

/// Dense univariate polynomial in `zeta` over the rationals.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct PolyZ {
    c: Vec<Rational>,
}

impl PolyZ {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        PolyZ { c }
    }

    pub fn zero() -> Self {
        PolyZ { c: vec![] }
    }

    pub fn constant(r: Rational) -> Self {
        PolyZ::new(vec![r])
    }

    pub fn from_int(n: i64) -> Self {
        PolyZ::constant(Rational::from_integer(BigInt::from(n)))
    }

    /// `c * zeta^k`.
    pub fn monomial(k: usize, c: Rational) -> Self {
        let mut v = vec![Rational::zero(); k + 1];
        v[k] = c;
        PolyZ::new(v)
    }

    pub fn from_i64s(c: &[i64]) -> Self {
        PolyZ::new(c.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.c.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> Rational {
        self.c.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        PolyZ::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }

    pub fn neg(&self) -> Self {
        PolyZ { c: self.c.iter().map(|x| -x).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return PolyZ::zero();
        }
        let mut c = vec![Rational::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        PolyZ::new(c)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        PolyZ::new(self.c.iter().map(|x| x * r).collect())
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = PolyZ::from_int(1);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.c.len() - 1;
        let lead_inv = d.lead().recip();
        let mut r = self.c.clone();
        if r.len() < d.c.len() {
            return (PolyZ::zero(), self.clone());
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let f = &r[k + dd] * &lead_inv;
            if !f.is_zero() {
                for (j, dc) in d.c.iter().enumerate() {
                    r[k + j] -= &f * dc;
                }
            }
            q[k] = f;
        }
        r.truncate(dd);
        (PolyZ::new(q), PolyZ::new(r))
    }

    /// Exact division; `None` if the remainder is nonzero.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.divrem(d);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let l = a.lead().recip();
        a.scale(&l)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.c.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        PolyZ::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    /// Coefficients of `p(1 + eps)` in powers of `eps`.
    pub fn shift_to_one(&self) -> Vec<Rational> {
        let n = self.c.len();
        let mut out = vec![Rational::zero(); n];
        // binomial expansion of (1+eps)^k
        let mut row: Vec<BigInt> = vec![BigInt::one()];
        for k in 0..n {
            if k > 0 {
                let mut next = vec![BigInt::one(); k + 1];
                for j in 1..k {
                    next[j] = &row[j - 1] + &row[j];
                }
                row = next;
            }
            if self.c[k].is_zero() {
                continue;
            }
            for (j, b) in row.iter().enumerate() {
                out[j] += &self.c[k] * Rational::from_integer(b.clone());
            }
        }
        out
    }

    /// Integer polynomial with coprime coefficients and positive leading
    /// coefficient proportional to `self`.
    pub fn primitive(&self) -> Self {
        self.scale(&self.content_normalizer())
    }

    /// Least common multiple of denominators times gcd-inverse of
    /// numerators: the rational `u` with `u * self` primitive integral and
    /// positive leading coefficient.
    fn content_normalizer(&self) -> Rational {
        if self.is_zero() {
            return Rational::one();
        }
        let mut l = BigInt::one();
        for c in &self.c {
            l = l.lcm(c.denom());
        }
        let mut g = BigInt::zero();
        for c in &self.c {
            let v = c.numer() * (&l / c.denom());
            g = g.gcd(&v);
        }
        let mut u = Rational::new(l, g);
        if self.lead().is_negative() {
            u = -u;
        }
        u
    }

    pub fn fmt_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            let mon = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{}^{}", var, k),
            };
            let body = if k == 0 {
                fmt_rational(&a)
            } else if a.is_one() {
                mon
            } else {
                format!("{}*{}", fmt_rational(&a), mon)
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }
}

impl fmt::Display for PolyZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_var("zeta"))
    }
}

impl fmt::Debug for PolyZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyZ({})", self)
    }
}

/// Reduced rational function in `zeta`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFuncZ {
    num: PolyZ,
    den: PolyZ,
}

impl RatFuncZ {
    pub fn new(num: PolyZ, den: PolyZ) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFuncZ { num, den: PolyZ::from_int(1) };
        }
        let g = num.gcd(&den);
        let (num, den) = (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap());
        let u = den.content_normalizer();
        RatFuncZ { num: num.scale(&u), den: den.scale(&u) }
    }

    pub fn from_poly(p: PolyZ) -> Self {
        RatFuncZ::new(p, PolyZ::from_int(1))
    }

    /// `p / 1` without reduction.
    pub(crate) fn from_poly_unchecked(p: PolyZ) -> Self {
        RatFuncZ { num: p, den: PolyZ::from_int(1) }
    }

    pub fn zero() -> Self {
        RatFuncZ::from_poly(PolyZ::zero())
    }

    pub fn num(&self) -> &PolyZ {
        &self.num
    }

    pub fn den(&self) -> &PolyZ {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        RatFuncZ::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        RatFuncZ { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        RatFuncZ::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn div(&self, o: &Self) -> Self {
        assert!(!o.is_zero(), "rational function division by zero");
        RatFuncZ::new(self.num.mul(&o.den), self.den.mul(&o.num))
    }

    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }
}

impl super::Ring for RatFuncZ {
    fn zero() -> Self {
        RatFuncZ::zero()
    }
    fn one() -> Self {
        RatFuncZ::from_poly_unchecked(PolyZ::from_int(1))
    }
    fn is_zero(&self) -> bool {
        RatFuncZ::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        RatFuncZ::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        RatFuncZ::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        RatFuncZ::mul(self, o)
    }
    fn neg(&self) -> Self {
        RatFuncZ::neg(self)
    }
    fn from_rational(r: &Rational) -> Self {
        RatFuncZ::from_poly(PolyZ::constant(r.clone()))
    }
}

impl fmt::Display for RatFuncZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) && self.den.coeff(0).is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFuncZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFuncZ({})", self)
    }
}

// Number of leading zero coefficients.
fn valuation(c: &[Rational]) -> usize {
    c.iter().take_while(|x| x.is_zero()).count()
}

/// Laurent expansion at `zeta = 1` in `eps = zeta - 1`.
///
/// Returns the pole order `m` (0 when analytic) and the coefficients
/// `a_{-m}, ..., a_{-m+extra_order}` as a jet of order `extra_order`.
/// A zero of `f` at `zeta = 1` gives `m = 0` with leading zeros in the jet.
pub fn ratfunc_expand_at_one(f: &RatFuncZ, extra_order: usize) -> (usize, Jet<ExactValue>) {
    if f.is_zero() {
        return (0, Jet::zero(extra_order));
    }
    let n = f.num.shift_to_one();
    let d = f.den.shift_to_one();
    let vn = valuation(&n);
    let vd = valuation(&d);
    let m = vd.saturating_sub(vn);
    // f = eps^(vn - vd) * N'(eps) / D'(eps); we want coefficients starting at eps^(-m)
    let offset = vn + m - vd; // number of known leading zeros in the requested window
    let terms = extra_order + 1;
    let np: Vec<Rational> = n[vn..].to_vec();
    let dp: Vec<Rational> = d[vd..].to_vec();
    let series = series_div(&np, &dp, terms.saturating_sub(offset));
    let mut out = vec![ExactValue::from_int(0); terms];
    for (k, s) in series.into_iter().enumerate() {
        if k + offset < terms {
            out[k + offset] = ExactValue::from_rational(s);
        }
    }
    (m, Jet::new(out))
}

/// First `terms` coefficients of the power series `n / d` (`d[0] != 0`).
pub(crate) fn series_div(n: &[Rational], d: &[Rational], terms: usize) -> Vec<Rational> {
    let inv = d[0].recip();
    let mut out: Vec<Rational> = Vec::with_capacity(terms);
    for k in 0..terms {
        let mut acc = n.get(k).cloned().unwrap_or_else(Rational::zero);
        for j in 1..=k.min(d.len().saturating_sub(1)) {
            acc -= &d[j] * &out[k - j];
        }
        out.push(acc * &inv);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    #[test]
    fn expand_simple_pole() {
        let f = RatFuncZ::new(PolyZ::from_int(1), PolyZ::from_i64s(&[1, -1]));
        let (m, j) = ratfunc_expand_at_one(&f, 2);
        assert_eq!(m, 1);
        assert_eq!(j.coeff(0), &ExactValue::from_int(-1));
        assert!(j.coeff(1).is_zero());
        let g = RatFuncZ::new(PolyZ::from_i64s(&[0, 1]), PolyZ::from_i64s(&[1, -1]));
        let (m, j) = ratfunc_expand_at_one(&g, 1);
        assert_eq!(m, 1);
        assert_eq!(j.coeff(0), &ExactValue::from_int(-1));
        assert_eq!(j.coeff(1), &ExactValue::from_int(-1));
    }

    #[test]
    fn expand_zero_at_one() {
        // (zeta - 1)^2 / (zeta + 1) = eps^2/2 - eps^3/4 + ...
        let f = RatFuncZ::new(PolyZ::from_i64s(&[1, -2, 1]), PolyZ::from_i64s(&[1, 1]));
        let (m, j) = ratfunc_expand_at_one(&f, 3);
        assert_eq!(m, 0);
        assert!(j.coeff(0).is_zero() && j.coeff(1).is_zero());
        assert_eq!(j.coeff(2), &ExactValue::frac(1, 2));
        assert_eq!(j.coeff(3), &ExactValue::frac(-1, 4));
    }

    #[test]
    fn normalization() {
        let f = RatFuncZ::new(PolyZ::from_i64s(&[2, 2]), PolyZ::from_i64s(&[-4, 0, 4]));
        assert_eq!(f.den(), &PolyZ::from_i64s(&[-1, 1]));
        assert_eq!(f.num(), &PolyZ::new(vec![rat(1, 2)]));
    }
}
