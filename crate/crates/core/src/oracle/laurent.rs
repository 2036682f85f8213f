use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::exactnum::{fmt_rational, int, PolyZ, RatFuncZ, Rational, Ring};

/// Laurent polynomial in `z` with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentZ {
    terms: BTreeMap<i64, Rational>,
}

impl LaurentZ {
    pub fn monomial(e: i64, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        LaurentZ { terms }
    }

    pub fn z_pow(e: i64) -> Self {
        LaurentZ::monomial(e, Rational::one())
    }

    pub fn coeff(&self, e: i64) -> Rational {
        self.terms.get(&e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    fn add_term(&mut self, e: i64, c: &Rational) {
        let v = self.terms.entry(e).or_insert_with(Rational::zero);
        *v += c;
        if v.is_zero() {
            self.terms.remove(&e);
        }
    }

    /// Multiplies by `z^e`.
    pub fn shift(&self, e: i64) -> Self {
        LaurentZ { terms: self.terms.iter().map(|(&k, c)| (k + e, c.clone())).collect() }
    }

    /// `f(1/z)`.
    pub fn reflect(&self) -> Self {
        LaurentZ { terms: self.terms.iter().map(|(&k, c)| (-k, c.clone())).collect() }
    }

    pub fn eval_one(&self) -> Rational {
        self.terms.values().fold(Rational::zero(), |a, c| a + c)
    }

    /// `d/dz` at `z = 1`.
    pub fn deriv_one(&self) -> Rational {
        self.terms.iter().fold(Rational::zero(), |a, (&e, c)| a + c * int(e))
    }

    pub fn min_exp(&self) -> i64 {
        self.terms.keys().next().copied().unwrap_or(0)
    }

    /// As `p(z) / z^m`.
    pub fn to_ratfunc(&self) -> RatFuncZ {
        let m = self.min_exp().min(0);
        let mut c = Vec::new();
        for (&e, v) in &self.terms {
            let k = (e - m) as usize;
            if c.len() <= k {
                c.resize(k + 1, Rational::zero());
            }
            c[k] = v.clone();
        }
        RatFuncZ::new(PolyZ::new(c), PolyZ::monomial((-m) as usize, Rational::one()))
    }

    /// The Laurent polynomial equal to `f`, if `f` has only a pole at 0.
    pub fn from_ratfunc(f: &RatFuncZ) -> Option<Self> {
        let d = f.den();
        let k = d.degree()?;
        if (0..k).any(|i| !d.coeff(i).is_zero()) {
            return None;
        }
        let lead = d.coeff(k);
        let mut out = LaurentZ::zero();
        for (i, c) in f.num().coeffs().iter().enumerate() {
            out.add_term(i as i64 - k as i64, &(c / &lead));
        }
        Some(out)
    }
}

impl Ring for LaurentZ {
    fn zero() -> Self {
        LaurentZ::default()
    }
    fn one() -> Self {
        LaurentZ::z_pow(0)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (&e, c) in &o.terms {
            r.add_term(e, c);
        }
        r
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        let mut r = LaurentZ::zero();
        for (&a, x) in &self.terms {
            for (&b, y) in &o.terms {
                r.add_term(a + b, &(x * y));
            }
        }
        r
    }
    fn neg(&self) -> Self {
        LaurentZ { terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect() }
    }
    fn from_rational(r: &Rational) -> Self {
        LaurentZ::monomial(0, r.clone())
    }
    fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return LaurentZ::zero();
        }
        LaurentZ { terms: self.terms.iter().map(|(&e, c)| (e, c * r)).collect() }
    }
}

impl fmt::Display for LaurentZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&e, c)| match e {
                0 => fmt_rational(c),
                1 => format!("{}*z", fmt_rational(c)),
                _ => format!("{}*z^{}", fmt_rational(c), e),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for LaurentZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
