use std::fmt;

use num_traits::One;

use super::{ExactValue, PolyZ, RatFuncZ, Rational, Ring, Tag};

/// Element of the fraction field `Q(t)`, needed once edge cuts divide by
/// non-constant elements of `Q[t]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FracValue {
    tag: Tag,
    f: RatFuncZ,
}

fn join(a: Tag, b: Tag) -> Tag {
    match (a, b) {
        (Tag::RationalOnly, x) | (x, Tag::RationalOnly) => x,
        (x, y) if x == y => x,
        (x, y) => panic!("generator mismatch: {} vs {}", x.name(), y.name()),
    }
}

impl FracValue {
    pub fn from_exact(v: &ExactValue) -> Self {
        FracValue { tag: v.tag(), f: RatFuncZ::from_poly(PolyZ::new(v.coeffs().to_vec())) }
    }

    pub fn from_ratfunc(tag: Tag, f: RatFuncZ) -> Self {
        FracValue::make(tag, f)
    }

    pub fn tag(&self) -> Tag {
        self.tag
    }

    pub fn ratfunc(&self) -> &RatFuncZ {
        &self.f
    }

    fn poly_den(&self) -> bool {
        self.f.den().degree() == Some(0) && self.f.den().coeff(0).is_one()
    }

    fn make(tag: Tag, f: RatFuncZ) -> Self {
        let tag = if f.num().degree().unwrap_or(0) == 0 && f.den().degree() == Some(0) {
            Tag::RationalOnly
        } else {
            tag
        };
        FracValue { tag, f }
    }

    /// The value as a polynomial in `t`, if the denominator is constant.
    pub fn to_exact(&self) -> Option<ExactValue> {
        if self.f.den().degree() != Some(0) {
            return None;
        }
        let d = self.f.den().coeff(0);
        Some(ExactValue::new(self.tag, self.f.num().coeffs().to_vec()).scale(&d.recip()))
    }

    pub fn num(&self) -> ExactValue {
        ExactValue::new(self.tag, self.f.num().coeffs().to_vec())
    }

    pub fn den(&self) -> ExactValue {
        ExactValue::new(self.tag, self.f.den().coeffs().to_vec())
    }

    pub fn to_f64(&self) -> f64 {
        match self.to_exact() {
            Some(v) => v.to_f64(),
            None => self.num().to_f64() / self.den().to_f64(),
        }
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        if o.f.is_zero() {
            return None;
        }
        Some(FracValue::make(join(self.tag, o.tag), self.f.div(&o.f)))
    }

    pub fn pretty(&self) -> String {
        match self.to_exact() {
            Some(v) => v.pretty(),
            None => format!("({}) / ({})", self.num().pretty(), self.den().pretty()),
        }
    }
}

impl From<ExactValue> for FracValue {
    fn from(v: ExactValue) -> Self {
        FracValue::from_exact(&v)
    }
}

impl fmt::Debug for FracValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

impl fmt::Display for FracValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

impl Ring for FracValue {
    fn zero() -> Self {
        FracValue { tag: Tag::RationalOnly, f: RatFuncZ::zero() }
    }
    fn one() -> Self {
        FracValue { tag: Tag::RationalOnly, f: RatFuncZ::from_poly(PolyZ::from_int(1)) }
    }
    fn is_zero(&self) -> bool {
        self.f.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        let tag = join(self.tag, o.tag);
        // skip the gcd when both sides are polynomials
        if self.poly_den() && o.poly_den() {
            return FracValue::make(tag, RatFuncZ::from_poly_unchecked(self.f.num().add(o.f.num())));
        }
        FracValue::make(tag, self.f.add(&o.f))
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        let tag = join(self.tag, o.tag);
        if self.poly_den() && o.poly_den() {
            return FracValue::make(tag, RatFuncZ::from_poly_unchecked(self.f.num().mul(o.f.num())));
        }
        FracValue::make(tag, self.f.mul(&o.f))
    }
    fn neg(&self) -> Self {
        FracValue { tag: self.tag, f: self.f.neg() }
    }
    fn from_rational(r: &Rational) -> Self {
        FracValue { tag: Tag::RationalOnly, f: RatFuncZ::from_poly(PolyZ::constant(r.clone())) }
    }
    fn scale(&self, r: &Rational) -> Self {
        if self.poly_den() {
            return FracValue::make(self.tag, RatFuncZ::from_poly_unchecked(self.f.num().scale(r)));
        }
        self.mul(&Self::from_rational(r))
    }
}
