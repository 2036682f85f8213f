use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::{fmt_rational, Rational, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GenKind {
    L,
    Lp,
    G,
    Gp,
}

/// A named generator such as `L_{1,2}` or `G'_{2,3}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    pub kind: GenKind,
    pub i: u16,
    pub j: u16,
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            GenKind::L => "L",
            GenKind::Lp => "L'",
            GenKind::G => "G",
            GenKind::Gp => "G'",
        };
        write!(f, "{}_{{{},{}}}", name, self.i, self.j)
    }
}

/// Sorted list of (generator, exponent) with positive exponents.
pub type Monomial = Vec<(Generator, u32)>;

fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
    let mut out: Monomial = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else if i >= a.len() || b[j].0 < a[i].0 {
            out.push(b[j]);
            j += 1;
        } else {
            out.push((a[i].0, a[i].1 + b[j].1));
            i += 1;
            j += 1;
        }
    }
    out
}

/// Sparse polynomial over the rationals in named generators.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = MultiPoly::zero();
        if !c.is_zero() {
            p.terms.insert(Vec::new(), c);
        }
        p
    }

    pub fn gen(g: Generator) -> Self {
        let mut p = MultiPoly::zero();
        p.terms.insert(vec![(g, 1)], Rational::one());
        p
    }

    fn sym(kind: GenKind, i: usize, j: usize) -> Self {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        MultiPoly::gen(Generator { kind, i: a as u16, j: b as u16 })
    }

    fn antisym(kind: GenKind, i: usize, j: usize) -> Self {
        if i == j {
            return MultiPoly::zero();
        }
        let g = MultiPoly::sym(kind, i, j);
        if i < j {
            g
        } else {
            g.neg()
        }
    }

    /// `L_{i,j}`, symmetric in its indices.
    pub fn l(i: usize, j: usize) -> Self {
        MultiPoly::sym(GenKind::L, i, j)
    }

    /// `L'_{i,j}`, antisymmetric: stored as `L'_{min,max}` with a sign.
    pub fn lp(i: usize, j: usize) -> Self {
        MultiPoly::antisym(GenKind::Lp, i, j)
    }

    pub fn g(i: usize, j: usize) -> Self {
        MultiPoly::sym(GenKind::G, i, j)
    }

    pub fn gp(i: usize, j: usize) -> Self {
        MultiPoly::antisym(GenKind::Gp, i, j)
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().map(|x| x.1).sum()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| m.iter().map(|x| x.1).sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Evaluates with a generator assignment in any ring.
    pub fn eval<R: Ring>(&self, f: &dyn Fn(&Generator) -> R) -> R {
        let mut acc = R::zero();
        for (m, c) in &self.terms {
            let mut t = R::from_rational(c);
            for (g, e) in m {
                let v = f(g);
                for _ in 0..*e {
                    t = t.mul(&v);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Substitutes a polynomial for each generator.
    pub fn substitute(&self, f: &dyn Fn(&Generator) -> MultiPoly) -> MultiPoly {
        self.eval(f)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let mut parts: Vec<String> = Vec::new();
            if !a.is_one() || m.is_empty() {
                parts.push(fmt_rational(&a));
            }
            for (g, e) in m {
                if *e == 1 {
                    parts.push(g.to_string());
                } else {
                    parts.push(format!("{}^{}", g, e));
                }
            }
            f.write_str(&parts.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({})", self)
    }
}

impl Ring for MultiPoly {
    fn zero() -> Self {
        MultiPoly::zero()
    }
    fn one() -> Self {
        MultiPoly::constant(Rational::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        let mut out = MultiPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                out.add_term(mono_mul(ma, mb), ca * cb);
            }
        }
        out
    }
    fn neg(&self) -> Self {
        MultiPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
    fn from_rational(r: &Rational) -> Self {
        MultiPoly::constant(r.clone())
    }
    fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * r)).collect() }
    }
}
