// Exact potential kernels a(p) with Delta a = -[p = 0].
//
// Square lattice: diagonal values a(n,n) = (1/pi) sum_{j<=n} 1/(2j-1), then
// each column is filled from the one before it by harmonicity. Triangular
// lattice: the axis a(n,0) comes from a Chebyshev integral, rows above it by
// harmonicity. Hexagonal lattice: the black sublattice is a triangular
// lattice of spacing sqrt3, white values are averages of black neighbors.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_traits::Zero;

use super::{Lattice, Pt};
use crate::error::{Error, Result};
use crate::exactnum::{int, rat, ExactValue, Rational, Tag};

/// Largest `|p|_inf` served by [`potential_kernel`].
pub const DEFAULT_WINDOW: i64 = 64;

// exact values converted to floats out to this sup-radius in the numeric path
const EXACT_F64_RADIUS: i64 = 40;

struct Table {
    bound: i64,
    vals: HashMap<Pt, ExactValue>,
}

type Cache = RwLock<HashMap<Lattice, Arc<Table>>>;

fn cache() -> &'static Cache {
    static C: OnceLock<Cache> = OnceLock::new();
    C.get_or_init(|| RwLock::new(HashMap::new()))
}

fn canonical(lat: Lattice, p: Pt) -> Pt {
    match lat {
        Lattice::Square => {
            let (x, y) = (p.0.abs(), p.1.abs());
            if x >= y {
                (x, y)
            } else {
                (y, x)
            }
        }
        Lattice::Triangular => lat
            .point_group()
            .into_iter()
            .map(|g| g(p))
            .find(|&(x, y)| x >= y && y >= 0)
            .expect("point group covers the sector"),
        Lattice::Hexagonal => unreachable!(),
    }
}

fn table(lat: Lattice, need: i64) -> Arc<Table> {
    if let Some(t) = cache().read().unwrap().get(&lat) {
        if t.bound >= need {
            return t.clone();
        }
    }
    let mut bound = 16;
    while bound < need {
        bound *= 2;
    }
    let t = Arc::new(match lat {
        Lattice::Square => square_table(bound),
        Lattice::Triangular => triangular_table(bound),
        Lattice::Hexagonal => unreachable!(),
    });
    let mut w = cache().write().unwrap();
    match w.get(&lat) {
        Some(old) if old.bound >= bound => old.clone(),
        _ => {
            w.insert(lat, t.clone());
            t
        }
    }
}

// a(K) from harmonicity at `c`, K being the only unknown canonical neighbor
fn fill(lat: Lattice, vals: &mut HashMap<Pt, ExactValue>, c: Pt, key: Pt) {
    let mut m = 0i64;
    let mut known = ExactValue::from_int(0);
    for q in lat.neighbors(c) {
        let k = canonical(lat, q);
        if k == key {
            m += 1;
        } else {
            let v = vals.get(&k).unwrap_or_else(|| panic!("fill {key:?} from {c:?}: {k:?} unknown"));
            known = known.add(v);
        }
    }
    assert!(m > 0);
    let ac = &vals[&canonical(lat, c)];
    let mut rhs = ac.scale(&int(lat.degree() as i64)).sub(&known);
    if c == (0, 0) {
        rhs = rhs.add(&ExactValue::from_int(1));
    }
    vals.insert(key, rhs.scale(&rat(1, m)));
}

fn square_table(bound: i64) -> Table {
    let lat = Lattice::Square;
    let mut vals = HashMap::new();
    vals.insert((0, 0), ExactValue::from_int(0));
    let mut h = Rational::zero();
    for n in 1..=bound {
        h += rat(1, 2 * n - 1);
        vals.insert((n, n), ExactValue::new(Tag::PiInv, vec![Rational::zero(), h.clone()]));
    }
    for x in 0..bound {
        for y in 0..=x {
            fill(lat, &mut vals, (x, y), (x + 1, y));
        }
    }
    Table { bound, vals }
}

/// `a(n, 0)` on the triangular lattice: `(1/pi) sum_{j<=n} I_{2j-1}` with
/// `I_m = int_0^1 U_{m-1}(x) / sqrt(4 - x^2) dx`.
pub fn triangular_axis(n: usize) -> Vec<ExactValue> {
    let deg = 2 * n;
    // J_k = int_0^1 x^k / sqrt(4 - x^2) dx = alpha_k pi + beta_k sqrt3, k even
    let mut alpha = vec![Rational::zero(); deg + 1];
    let mut beta = vec![Rational::zero(); deg + 1];
    alpha[0] = rat(1, 6);
    let mut k = 2;
    while k <= deg {
        let kk = k as i64;
        alpha[k] = &alpha[k - 2] * rat(4 * (kk - 1), kk);
        beta[k] = &beta[k - 2] * rat(4 * (kk - 1), kk) - rat(1, kk);
        k += 2;
    }
    // Chebyshev U_m as coefficient vectors
    let mut u: Vec<Vec<Rational>> = vec![vec![int(1)], vec![int(0), int(2)]];
    while u.len() < deg {
        let m = u.len();
        let mut next = vec![Rational::zero(); m + 1];
        for (i, c) in u[m - 1].iter().enumerate() {
            next[i + 1] += c * int(2);
        }
        for (i, c) in u[m - 2].iter().enumerate() {
            next[i] -= c;
        }
        u.push(next);
    }
    let mut out = vec![ExactValue::from_int(0)];
    let (mut sa, mut sb) = (Rational::zero(), Rational::zero());
    for j in 1..=n {
        for (i, c) in u[2 * j - 2].iter().enumerate() {
            if !c.is_zero() {
                sa += c * &alpha[i];
                sb += c * &beta[i];
            }
        }
        out.push(ExactValue::new(Tag::Sqrt3PiInv, vec![sa.clone(), sb.clone()]));
    }
    out
}

fn triangular_table(bound: i64) -> Table {
    let lat = Lattice::Triangular;
    let mut vals = HashMap::new();
    for (x, v) in triangular_axis(2 * bound as usize).into_iter().enumerate() {
        vals.insert((x as i64, 0), v);
    }
    for y in 1..=bound {
        for x in y..=(2 * bound - y) {
            fill(lat, &mut vals, (x, y - 1), (x, y));
        }
    }
    Table { bound, vals }
}

fn hex_to_tri(d: Pt) -> Pt {
    ((2 * d.0 - d.1) / 3, (2 * d.1 - d.0) / 3)
}

fn lookup(lat: Lattice, d: Pt) -> ExactValue {
    let k = canonical(lat, d);
    table(lat, k.0).vals[&k].clone()
}

fn check_window(d: Pt, window: i64) -> Result<()> {
    if d.0.abs().max(d.1.abs()) > window {
        return Err(Error::WindowExceeded(format!("({},{})", d.0, d.1), window));
    }
    Ok(())
}

/// Potential kernel `a(p) = A_{0,p}`, with the origin black on the
/// hexagonal lattice.
pub fn potential_kernel(lat: Lattice, p: Pt) -> Result<ExactValue> {
    potential_kernel_in(lat, p, DEFAULT_WINDOW)
}

pub fn potential_kernel_in(lat: Lattice, p: Pt, window: i64) -> Result<ExactValue> {
    check_window(p, window)?;
    Ok(match lat {
        Lattice::Square | Lattice::Triangular => lookup(lat, p),
        Lattice::Hexagonal => match lat.class(p) {
            0 => lookup(Lattice::Triangular, hex_to_tri(p)).scale(&int(3)),
            1 => {
                let mut s = ExactValue::from_int(0);
                for q in lat.neighbors(p) {
                    s = s.add(&lookup(Lattice::Triangular, hex_to_tri(q)));
                }
                s
            }
            _ => return Err(Error::Invalid(format!("({},{}) is not a hexagonal vertex", p.0, p.1))),
        },
    })
}

/// Displacement from a black source to the target, respecting colors.
pub(crate) fn displacement(lat: Lattice, u: Pt, v: Pt) -> Pt {
    if lat == Lattice::Hexagonal && lat.class(u) == 1 {
        (u.0 - v.0, u.1 - v.1)
    } else {
        (v.0 - u.0, v.1 - u.1)
    }
}

/// `G_{u,v} = -a(v - u)`.
pub fn gbar(lat: Lattice, u: Pt, v: Pt) -> Result<ExactValue> {
    for p in [u, v] {
        if !lat.is_vertex(p) {
            return Err(Error::Invalid(format!("({},{}) is not a vertex", p.0, p.1)));
        }
    }
    Ok(potential_kernel(lat, displacement(lat, u, v))?.neg())
}

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

fn asymptotic(lat: Lattice, d: Pt) -> f64 {
    let (x, y) = lat.position(d);
    let r = (x * x + y * y).sqrt();
    let pi = std::f64::consts::PI;
    let (l2, l3) = (2f64.ln(), 3f64.ln());
    match lat {
        Lattice::Square => (r.ln() + 1.5 * l2 + EULER_GAMMA) / (2.0 * pi),
        Lattice::Triangular => (r.ln() + EULER_GAMMA + l2 + 0.5 * l3) / (2.0 * 3f64.sqrt() * pi),
        Lattice::Hexagonal => 3f64.sqrt() * (r.ln() + EULER_GAMMA + l2) / (2.0 * pi),
    }
}

type F64Cache = RwLock<HashMap<(Lattice, Pt), f64>>;

/// Floating-point kernel: exact values near the origin, the logarithmic
/// asymptotic expansion further out.
pub fn potential_kernel_f64(lat: Lattice, d: Pt) -> f64 {
    if d.0.abs().max(d.1.abs()) > EXACT_F64_RADIUS {
        return asymptotic(lat, d);
    }
    static C: OnceLock<F64Cache> = OnceLock::new();
    let c = C.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(&v) = c.read().unwrap().get(&(lat, d)) {
        return v;
    }
    let v = potential_kernel(lat, d).map(|e| e.to_f64()).unwrap_or(f64::NAN);
    c.write().unwrap().insert((lat, d), v);
    v
}
