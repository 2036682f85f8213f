// Grove interpretations of the response matrix, checked identically in z:
// entries, principal minors, and mixed minors with interior nodes.

use std::collections::HashMap;

use super::{enumerate_groves, exact_green, response_matrix, FiniteGraph, GroveTable, LaurentZ};
use crate::error::{Error, Result};
use crate::exactnum::{det_generic, RatFuncZ, Ring};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub entries: usize,
    pub principal_minors: usize,
    pub mixed_minors: usize,
    pub green_blocks: usize,
}

fn perm_sign(p: &[usize]) -> i64 {
    let mut s = 1;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                s = -s;
            }
        }
    }
    s
}

// sum over groves pairing each r with some s (all other marks singletons) of
// sign(pairing) * weight * transports to r from s
fn pairing_sum(table: &GroveTable, rows: &[usize], cols: &[usize], singles: &[usize]) -> LaurentZ {
    let mut acc = LaurentZ::zero();
    'ty: for (t, w) in table {
        if t.parts.len() != rows.len() + singles.len() {
            continue;
        }
        let mut perm = vec![usize::MAX; rows.len()];
        let mut shift = 0i64;
        let mut nsingle = 0;
        for p in &t.parts {
            match p.len() {
                1 => {
                    if !singles.contains(&p[0].0) {
                        continue 'ty;
                    }
                    nsingle += 1;
                }
                2 => {
                    let phi: HashMap<usize, i64> = p.iter().copied().collect();
                    let (a, b) = (p[0].0, p[1].0);
                    let (r, s) = if rows.contains(&a) && cols.contains(&b) {
                        (a, b)
                    } else if rows.contains(&b) && cols.contains(&a) {
                        (b, a)
                    } else {
                        continue 'ty;
                    };
                    let ri = rows.iter().position(|&x| x == r).unwrap();
                    perm[ri] = cols.iter().position(|&x| x == s).unwrap();
                    shift += phi[&r] - phi[&s];
                }
                _ => continue 'ty,
            }
        }
        if nsingle != singles.len() || perm.contains(&usize::MAX) {
            continue;
        }
        let term = w.shift(shift);
        acc = if perm_sign(&perm) > 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

fn submatrix(l: &[Vec<RatFuncZ>], rows: &[usize], cols: &[usize]) -> Vec<Vec<RatFuncZ>> {
    rows.iter().map(|&i| cols.iter().map(|&j| l[i][j].clone()).collect()).collect()
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..(1 << n)).map(move |m| (0..n).filter(|&i| m & (1 << i) != 0).collect())
}

/// Verifies the grove interpretations of the entries and minors of the
/// response matrix on the nodes. Node `n` is taken as the Dirichlet vertex
/// for the Green's-function block check when it is the boundary.
pub fn check_response_theorems(g: &FiniteGraph) -> Result<Report> {
    g.validate()?;
    let n = g.nodes.len();
    if n > 8 {
        return Err(Error::TooLarge(format!("{} nodes", n)));
    }
    let l = response_matrix(g)?;
    let mut rep = Report::default();
    let v = &g.nodes;
    let full = enumerate_groves(g, v)?;
    let all: Vec<usize> = v.clone();
    let den = pairing_sum(&full, &[], &[], &all).to_ratfunc();
    if den.is_zero() {
        return Err(Error::SingularLaplacian);
    }
    let fail = |what: String| Err(Error::Mismatch(what));

    // entries
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let singles: Vec<usize> = all.iter().copied().filter(|&x| x != v[i] && x != v[j]).collect();
            let num = pairing_sum(&full, &[v[i]], &[v[j]], &singles).to_ratfunc();
            if l[i][j].mul(&den) != num {
                return fail(format!("L_{},{}", i + 1, j + 1));
            }
            rep.entries += 1;
        }
    }
    // principal minors, S interior
    let mut tables: HashMap<Vec<usize>, GroveTable> = HashMap::new();
    for s in subsets(n).filter(|s| !s.is_empty()) {
        let q: Vec<usize> = (0..n).filter(|i| !s.contains(i)).map(|i| v[i]).collect();
        let table = match tables.get(&q) {
            Some(t) => t,
            None => {
                let t = enumerate_groves(g, &q)?;
                tables.entry(q.clone()).or_insert(t)
            }
        };
        let num = pairing_sum(table, &[], &[], &q).to_ratfunc();
        let det = det_generic(&submatrix(&l, &s, &s));
        let lhs = det.mul(&den);
        let rhs = if s.len() % 2 == 0 { num } else { num.neg() };
        if lhs != rhs {
            return fail(format!("principal minor {:?}", s));
        }
        rep.principal_minors += 1;
    }
    // mixed minors det L_{R,T}^{S,T}, |T| <= 1
    for t in subsets(n).filter(|t| t.len() <= 1) {
        let rest: Vec<usize> = (0..n).filter(|i| !t.contains(i)).collect();
        let marks: Vec<usize> = rest.iter().map(|&i| v[i]).collect();
        let table = match tables.get(&marks) {
            Some(x) => x,
            None => {
                let x = enumerate_groves(g, &marks)?;
                tables.entry(marks.clone()).or_insert(x)
            }
        };
        for r in subsets(rest.len()) {
            if r.is_empty() {
                continue;
            }
            let r: Vec<usize> = r.iter().map(|&k| rest[k]).collect();
            let others: Vec<usize> = rest.iter().copied().filter(|i| !r.contains(i)).collect();
            for s in subsets(others.len()).filter(|s| s.len() == r.len()) {
                let s: Vec<usize> = s.iter().map(|&k| others[k]).collect();
                let q: Vec<usize> = others.iter().copied().filter(|i| !s.contains(i)).collect();
                let rows: Vec<usize> = r.iter().chain(t.iter()).copied().collect();
                let cols: Vec<usize> = s.iter().chain(t.iter()).copied().collect();
                let det = det_generic(&submatrix(&l, &rows, &cols));
                let vr: Vec<usize> = r.iter().map(|&i| v[i]).collect();
                let vs: Vec<usize> = s.iter().map(|&i| v[i]).collect();
                let vq: Vec<usize> = q.iter().map(|&i| v[i]).collect();
                let num = pairing_sum(table, &vr, &vs, &vq).to_ratfunc();
                let rhs = if t.len() % 2 == 0 { num } else { num.neg() };
                if det.mul(&den) != rhs {
                    return fail(format!("mixed minor R={:?} S={:?} T={:?}", r, s, t));
                }
                rep.mixed_minors += 1;
            }
        }
    }
    // L on nodes 1..n-1 against minus the inverse Green's block
    if n >= 2 && g.boundary == Some(v[n - 1]) {
        let gm = exact_green(g)?;
        let m = n - 1;
        let gb: Vec<Vec<RatFuncZ>> = (0..m).map(|i| (0..m).map(|j| gm.get(v[i], v[j])).collect()).collect();
        // L_sub * G_sub = -I
        for i in 0..m {
            for j in 0..m {
                let mut acc = RatFuncZ::zero();
                for k in 0..m {
                    acc = acc.add(&l[i][k].mul(&gb[k][j]));
                }
                let want = if i == j { RatFuncZ::one().neg() } else { RatFuncZ::zero() };
                if acc != want {
                    return fail(format!("L G != -I at ({},{})", i + 1, j + 1));
                }
            }
        }
        rep.green_blocks += 1;
    }
    Ok(rep)
}
