use num_traits::Zero;

use super::{FiniteGraph, LaurentZ};
use crate::error::{Error, Result};
use crate::exactnum::{bareiss_solve, rational_inverse, PolyZ, RatFuncZ, Rational, Ring};

/// `G(z) = Delta(z)^{-1}` with a Dirichlet condition at the boundary vertex.
#[derive(Clone, Debug)]
pub struct GreenMatrix {
    index: Vec<Option<usize>>,
    m: Vec<Vec<RatFuncZ>>,
}

impl GreenMatrix {
    /// `G_{u,v}`; zero when either vertex is the boundary.
    pub fn get(&self, u: usize, v: usize) -> RatFuncZ {
        match (self.index[u], self.index[v]) {
            (Some(i), Some(j)) => self.m[i][j].clone(),
            _ => RatFuncZ::zero(),
        }
    }
}

fn interior(g: &FiniteGraph, skip: &[usize]) -> (Vec<usize>, Vec<Option<usize>>) {
    let mut ids = Vec::new();
    let mut index = vec![None; g.len()];
    for v in 0..g.len() {
        if !skip.contains(&v) {
            index[v] = Some(ids.len());
            ids.push(v);
        }
    }
    (ids, index)
}

// z^s M as a polynomial matrix, with s the largest negative exponent.
fn clear_negative(m: &[Vec<LaurentZ>]) -> (Vec<Vec<PolyZ>>, i64) {
    let s = -m.iter().flatten().map(|x| x.min_exp()).min().unwrap_or(0).min(0);
    let p = m
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| {
                    let f = x.shift(s).to_ratfunc();
                    debug_assert!(f.den().degree() == Some(0));
                    f.num().scale(&f.den().coeff(0).recip())
                })
                .collect()
        })
        .collect();
    (p, s)
}

pub fn exact_green(g: &FiniteGraph) -> Result<GreenMatrix> {
    let b = g.boundary.ok_or_else(|| Error::Invalid("graph has no boundary vertex".into()))?;
    let (ids, index) = interior(g, &[b]);
    let lap = g.laplacian();
    let sub: Vec<Vec<LaurentZ>> = ids.iter().map(|&i| ids.iter().map(|&j| lap[i][j].clone()).collect()).collect();
    let (p, s) = clear_negative(&sub);
    let n = ids.len();
    // (z^s D) X = z^s I
    let rhs: Vec<Vec<PolyZ>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { PolyZ::monomial(s as usize, Rational::from_integer(1.into())) } else { PolyZ::zero() }).collect())
        .collect();
    let m = bareiss_solve(&p, &rhs).map_err(|_| Error::SingularLaplacian)?;
    Ok(GreenMatrix { index, m })
}

/// `G(1)` and `G'(1)` over all vertices (boundary rows and columns zero),
/// using `G' = -G Delta'(1) G`.
pub fn green_at_one(g: &FiniteGraph) -> Result<(Vec<Vec<Rational>>, Vec<Vec<Rational>>)> {
    let b = g.boundary.ok_or_else(|| Error::Invalid("graph has no boundary vertex".into()))?;
    let (ids, _) = interior(g, &[b]);
    let (d, dp) = g.laplacian_at_one();
    let n = ids.len();
    let sub: Vec<Vec<Rational>> = ids.iter().map(|&i| ids.iter().map(|&j| d[i][j].clone()).collect()).collect();
    let gi = rational_inverse(&sub).map_err(|_| Error::SingularLaplacian)?;
    let dps: Vec<Vec<Rational>> = ids.iter().map(|&i| ids.iter().map(|&j| dp[i][j].clone()).collect()).collect();
    let t = matmul(&dps, &gi);
    let gp = matmul(&gi, &t);
    let v = g.len();
    let mut out = vec![vec![Rational::zero(); v]; v];
    let mut outp = vec![vec![Rational::zero(); v]; v];
    for i in 0..n {
        for j in 0..n {
            out[ids[i]][ids[j]] = gi[i][j].clone();
            outp[ids[i]][ids[j]] = -gp[i][j].clone();
        }
    }
    Ok((out, outp))
}

fn matmul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    let mut c = vec![vec![Rational::zero(); m]; n];
    for i in 0..n {
        for (k, x) in a[i].iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[k][j].is_zero() {
                    c[i][j] += x * &b[k][j];
                }
            }
        }
    }
    c
}

/// Response matrix on the nodes, `L = -A + B C^{-1} B*`, over `Q(z)`.
pub fn response_matrix(g: &FiniteGraph) -> Result<Vec<Vec<RatFuncZ>>> {
    let (ids, _) = interior(g, &g.nodes);
    let lap = g.laplacian();
    let nn = g.nodes.len();
    let a: Vec<Vec<RatFuncZ>> =
        g.nodes.iter().map(|&i| g.nodes.iter().map(|&j| lap[i][j].neg().to_ratfunc()).collect()).collect();
    if ids.is_empty() {
        return Ok(a);
    }
    let c: Vec<Vec<LaurentZ>> = ids.iter().map(|&i| ids.iter().map(|&j| lap[i][j].clone()).collect()).collect();
    let (cp, s) = clear_negative(&c);
    // right-hand side z^s B*, so X = C^{-1} B*
    let bs: Vec<Vec<LaurentZ>> = ids.iter().map(|&i| g.nodes.iter().map(|&j| lap[i][j].shift(s)).collect()).collect();
    let (bp, s2) = clear_negative(&bs);
    let x = bareiss_solve(&cp, &bp).map_err(|_| Error::SingularLaplacian)?;
    let zs2 = RatFuncZ::new(PolyZ::from_int(1), PolyZ::monomial(s2 as usize, Rational::from_integer(1.into())));
    let mut out = a;
    for (r, &i) in g.nodes.iter().enumerate() {
        for col in 0..nn {
            let mut acc = RatFuncZ::zero();
            for (k, &v) in ids.iter().enumerate() {
                if lap[i][v].is_zero() || x[k][col].is_zero() {
                    continue;
                }
                acc = acc.add(&lap[i][v].to_ratfunc().mul(&x[k][col]));
            }
            out[r][col] = out[r][col].add(&acc.mul(&zs2));
        }
    }
    Ok(out)
}

/// `f(1)` and `f'(1)`.
pub fn value_and_deriv(f: &RatFuncZ) -> Option<(Rational, Rational)> {
    let one = Rational::from_integer(1.into());
    let (n, d) = (f.num(), f.den());
    let d1 = d.eval(&one);
    if d1.is_zero() {
        return None;
    }
    let n1 = n.eval(&one);
    let np = n.derivative().eval(&one);
    let dp = d.derivative().eval(&one);
    Some((&n1 / &d1, (np * &d1 - &n1 * dp) / (&d1 * &d1)))
}

/// Response data `L(1)`, `L'(1)` indexed by node label `1..=n` (row and
/// column 0 unused).
pub fn response_first_order(g: &FiniteGraph) -> Result<(Vec<Vec<Rational>>, Vec<Vec<Rational>>)> {
    let l = response_matrix(g)?;
    let n = l.len();
    let mut v = vec![vec![Rational::zero(); n + 1]; n + 1];
    let mut d = v.clone();
    for i in 0..n {
        for j in 0..n {
            let (a, b) = value_and_deriv(&l[i][j]).ok_or(Error::SingularLaplacian)?;
            v[i + 1][j + 1] = a;
            d[i + 1][j + 1] = b;
        }
    }
    Ok((v, d))
}

/// Green's data `G(1)`, `G'(1)` by node label, with the Dirichlet vertex
/// at the boundary.
pub fn green_first_order(g: &FiniteGraph) -> Result<(Vec<Vec<Rational>>, Vec<Vec<Rational>>)> {
    let (gv, gd) = green_at_one(g)?;
    let n = g.nodes.len();
    let mut v = vec![vec![Rational::zero(); n + 1]; n + 1];
    let mut d = v.clone();
    for i in 0..n {
        for j in 0..n {
            v[i + 1][j + 1] = gv[g.nodes[i]][g.nodes[j]].clone();
            d[i + 1][j + 1] = gd[g.nodes[i]][g.nodes[j]].clone();
        }
    }
    Ok((v, d))
}
