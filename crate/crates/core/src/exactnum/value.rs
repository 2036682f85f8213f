use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::precision::{pi_fixed, sqrt3_fixed};
use super::{fmt_rational, rational_bits, Rational, Ring};
use crate::error::{Error, Result};

/// Which transcendental the polynomial variable `t` stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    RationalOnly,
    PiInv,
    Sqrt3PiInv,
}

impl Tag {
    pub fn name(self) -> &'static str {
        match self {
            Tag::RationalOnly => "1",
            Tag::PiInv => "1/pi",
            Tag::Sqrt3PiInv => "sqrt3/pi",
        }
    }

    pub fn from_name(s: &str) -> Option<Tag> {
        match s {
            "1" => Some(Tag::RationalOnly),
            "1/pi" => Some(Tag::PiInv),
            "sqrt3/pi" => Some(Tag::Sqrt3PiInv),
            _ => None,
        }
    }

    fn join(self, o: Tag) -> Tag {
        match (self, o) {
            (Tag::RationalOnly, x) | (x, Tag::RationalOnly) => x,
            (a, b) if a == b => a,
            (a, b) => panic!("generator mismatch: {} vs {}", a.name(), b.name()),
        }
    }
}

/// An element `sum_k c_k t^k` of `Q[t]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactValue {
    tag: Tag,
    coeffs: Vec<Rational>,
}

impl ExactValue {
    pub fn new(tag: Tag, coeffs: Vec<Rational>) -> Self {
        let mut v = ExactValue { tag, coeffs };
        v.canonicalize();
        v
    }

    fn canonicalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        if self.coeffs.len() <= 1 {
            self.tag = Tag::RationalOnly;
        }
    }

    pub fn from_rational(r: Rational) -> Self {
        ExactValue::new(Tag::RationalOnly, vec![r])
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn frac(p: i64, q: i64) -> Self {
        Self::from_rational(super::rat(p, q))
    }

    /// `c * t^k`.
    pub fn monomial(tag: Tag, k: usize, c: Rational) -> Self {
        let mut v = vec![Rational::zero(); k + 1];
        v[k] = c;
        ExactValue::new(tag, v)
    }

    /// The generator `1/pi`.
    pub fn pi_inv() -> Self {
        Self::monomial(Tag::PiInv, 1, Rational::one())
    }

    /// The generator `sqrt(3)/pi`.
    pub fn sqrt3_pi_inv() -> Self {
        Self::monomial(Tag::Sqrt3PiInv, 1, Rational::one())
    }

    pub fn tag(&self) -> Tag {
        self.tag
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `t^k` (zero past the degree).
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let tag = self.tag.join(o.tag);
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n).map(|k| self.coeff(k) + o.coeff(k)).collect();
        ExactValue::new(tag, c)
    }

    pub fn neg(&self) -> Self {
        ExactValue { tag: self.tag, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return ExactValue::from_int(0);
        }
        let tag = self.tag.join(o.tag);
        let mut c = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        ExactValue::new(tag, c)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        ExactValue::new(self.tag, self.coeffs.iter().map(|c| c * r).collect())
    }

    /// Division by a constant; `None` when dividing by a non-rational or zero.
    pub fn div(&self, o: &Self) -> Option<Self> {
        let r = o.as_rational()?;
        if r.is_zero() {
            return None;
        }
        Some(self.scale(&r.recip()))
    }

    fn eval_at_bits(&self, bits: u64) -> f64 {
        let pi = pi_fixed(bits);
        let one = BigInt::one() << bits;
        let t_num = match self.tag {
            Tag::RationalOnly => one.clone(),
            Tag::PiInv => (BigInt::one() << (2 * bits)) / &pi,
            Tag::Sqrt3PiInv => (sqrt3_fixed(bits) << bits) / &pi,
        };
        let t = Rational::new(t_num, one);
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * &t + c;
        }
        acc.to_f64().unwrap_or(f64::NAN)
    }

    /// Numeric value with `t` substituted to enough precision that the
    /// result is the correctly rounded double up to rare ties.
    pub fn to_f64(&self) -> f64 {
        match self.coeffs.len() {
            0 => return 0.0,
            1 => return self.coeffs[0].to_f64().unwrap_or(f64::NAN),
            _ => {}
        }
        let h = self.coeffs.iter().map(rational_bits).max().unwrap_or(0);
        let mut bits = 128 + 2 * h + 16 * self.coeffs.len() as u64;
        let mut prev = self.eval_at_bits(bits);
        loop {
            bits *= 2;
            let next = self.eval_at_bits(bits);
            if next == prev || bits > 1 << 16 {
                return next;
            }
            prev = next;
        }
    }

    /// Canonical text form, e.g. `1/4 - 1/(4*pi) + 1/(2*pi^2)` or
    /// `31/108 - sqrt3/(2*pi)`. Terms appear in increasing degree.
    pub fn pretty(&self) -> String {
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let term = self.render_term(k, &c.abs());
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&term);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    fn render_term(&self, k: usize, c: &Rational) -> String {
        if k == 0 {
            return fmt_rational(c);
        }
        let (mut num, den) = (c.numer().clone(), c.denom().clone());
        let mut root = false;
        if self.tag == Tag::Sqrt3PiInv {
            num *= BigInt::from(3).pow((k / 2) as u32);
            root = k % 2 == 1;
        }
        // re-reduce after folding powers of three into the numerator
        let g = num_integer::Integer::gcd(&num, &den);
        let (num, den) = (num / &g, den / &g);
        let numer = match (num.is_one(), root) {
            (true, true) => "sqrt3".to_string(),
            (false, true) => format!("{}*sqrt3", num),
            (_, false) => num.to_string(),
        };
        let pik = if k == 1 { "pi".to_string() } else { format!("pi^{}", k) };
        if den.is_one() {
            format!("{}/{}", numer, pik)
        } else {
            format!("{}/({}*{})", numer, den, pik)
        }
    }

    /// Parses the output of [`ExactValue::pretty`]. The generator is
    /// inferred (`sqrt3` forces the root generator) unless `tag` is given.
    pub fn parse(s: &str, tag: Option<Tag>) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty value".into()));
        }
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        let mut depth = 0;
        for (i, ch) in compact.chars().enumerate() {
            match ch {
                '(' => {
                    depth += 1;
                    cur.push(ch)
                }
                ')' => {
                    depth -= 1;
                    cur.push(ch)
                }
                '+' | '-' if depth == 0 && !(cur.is_empty() && i == 0) => {
                    terms.push((neg, std::mem::take(&mut cur)));
                    neg = ch == '-';
                }
                '-' if i == 0 => neg = true,
                _ => cur.push(ch),
            }
        }
        terms.push((neg, cur));
        let mut parsed = Vec::new();
        let mut saw_root = false;
        let mut saw_pi = false;
        for (neg, body) in terms {
            let (num, root, den, k) = parse_term(&body)?;
            saw_root |= root;
            saw_pi |= k > 0;
            parsed.push((neg, num, root, den, k));
        }
        let tag = tag.unwrap_or(if saw_root {
            Tag::Sqrt3PiInv
        } else if saw_pi {
            Tag::PiInv
        } else {
            Tag::RationalOnly
        });
        let mut acc = ExactValue::from_int(0);
        for (neg, num, root, den, k) in parsed {
            let mut c = Rational::new(num, den);
            if neg {
                c = -c;
            }
            match tag {
                Tag::Sqrt3PiInv => {
                    if root != (k % 2 == 1) {
                        return Err(Error::Parse(format!("sqrt3 parity mismatch in {}", s)));
                    }
                    c /= Rational::from_integer(BigInt::from(3).pow((k / 2) as u32));
                }
                _ if root => return Err(Error::Parse("sqrt3 with rational generator".into())),
                Tag::RationalOnly if k > 0 => {
                    return Err(Error::Parse("pi with rational generator".into()))
                }
                _ => {}
            }
            acc = acc.add(&ExactValue::monomial(if k == 0 { Tag::RationalOnly } else { tag }, k, c));
        }
        Ok(acc)
    }
}

// Returns (numerator, has sqrt3, denominator, power of pi).
fn parse_term(body: &str) -> Result<(BigInt, bool, BigInt, usize)> {
    let bad = || Error::Parse(format!("bad term '{}'", body));
    let (numer, denom) = match body.split_once('/') {
        Some((a, b)) => (a, Some(b)),
        None => (body, None),
    };
    let mut num = BigInt::one();
    let mut root = false;
    for f in numer.split('*') {
        if f == "sqrt3" {
            root = true;
        } else {
            num *= f.parse::<BigInt>().map_err(|_| bad())?;
        }
    }
    let mut den = BigInt::one();
    let mut k = 0usize;
    if let Some(d) = denom {
        let d = d.strip_prefix('(').and_then(|x| x.strip_suffix(')')).unwrap_or(d);
        for f in d.split('*') {
            if f == "pi" {
                k += 1;
            } else if let Some(e) = f.strip_prefix("pi^") {
                k += e.parse::<usize>().map_err(|_| bad())?;
            } else {
                den *= f.parse::<BigInt>().map_err(|_| bad())?;
            }
        }
    }
    if den.is_zero() {
        return Err(bad());
    }
    Ok((num, root, den, k))
}

impl fmt::Display for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

impl fmt::Debug for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactValue({})", self.pretty())
    }
}

impl From<Rational> for ExactValue {
    fn from(r: Rational) -> Self {
        ExactValue::from_rational(r)
    }
}

impl Ring for ExactValue {
    fn zero() -> Self {
        ExactValue::from_int(0)
    }
    fn one() -> Self {
        ExactValue::from_int(1)
    }
    fn is_zero(&self) -> bool {
        ExactValue::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        ExactValue::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        ExactValue::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        ExactValue::mul(self, o)
    }
    fn neg(&self) -> Self {
        ExactValue::neg(self)
    }
    fn from_rational(r: &Rational) -> Self {
        ExactValue::from_rational(r.clone())
    }
    fn scale(&self, r: &Rational) -> Self {
        ExactValue::scale(self, r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn p(c: &[(i64, i64)]) -> ExactValue {
        ExactValue::new(Tag::PiInv, c.iter().map(|&(a, b)| rat(a, b)).collect())
    }

    #[test]
    fn numeric_values() {
        assert_eq!(ExactValue::frac(5, 16).to_f64(), 0.3125);
        let v = p(&[(1, 4), (-1, 4), (1, 2)]);
        assert!((v.to_f64() - 0.221083).abs() < 1e-6);
        assert_eq!(ExactValue::from_int(0).to_f64(), 0.0);
    }

    #[test]
    fn pretty_forms() {
        assert_eq!(p(&[(1, 4), (-1, 4), (1, 2)]).pretty(), "1/4 - 1/(4*pi) + 1/(2*pi^2)");
        assert_eq!(ExactValue::pi_inv().pretty(), "1/pi");
        let s = ExactValue::new(Tag::Sqrt3PiInv, vec![rat(31, 108), rat(-1, 2)]);
        assert_eq!(s.pretty(), "31/108 - sqrt3/(2*pi)");
        let s2 = ExactValue::new(Tag::Sqrt3PiInv, vec![rat(0, 1), rat(0, 1), rat(1, 1)]);
        assert_eq!(s2.pretty(), "3/pi^2");
        assert_eq!(ExactValue::from_int(0).pretty(), "0");
    }

    #[test]
    fn parse_round_trip() {
        for v in [
            p(&[(1, 4), (-1, 4), (1, 2)]),
            p(&[(0, 1), (0, 1), (0, 1), (-3, 2), (1, 2)]),
            ExactValue::new(Tag::Sqrt3PiInv, vec![rat(-59, 108), rat(1, 1), rat(2, 9)]),
            ExactValue::frac(-7, 3),
        ] {
            let back = ExactValue::parse(&v.pretty(), Some(v.tag())).unwrap();
            assert_eq!(back, v);
        }
    }
}
