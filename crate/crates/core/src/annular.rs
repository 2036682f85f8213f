//! The annular matrix `A_n`, its exact inverse, and grove-type ratios built
//! from first-order response or Green's data.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{ToPrimitive, Zero};

use crate::combinat::{
    canonical_orientation, cycle_lemma_backward, disk_order, enumerate_annular_pairings,
    DirectedPairing, Node, PartialPairing, RowIndex,
};
use crate::error::{Error, Result};
use crate::exactnum::{
    bareiss_solve, jet_det, ratfunc_expand_at_one, ExactValue, Jet, MultiPoly, PolyZ, RatFuncZ,
    Rational, Ring,
};

/// Largest `n` for which `A_n` is built.
pub const N_CAP: usize = 10;

#[derive(Clone, Debug)]
pub struct AnnularMatrix {
    pub n: usize,
    pub rows: Vec<RowIndex>,
    pub cols: Vec<DirectedPairing>,
    pub entries: Vec<Vec<PolyZ>>,
}

impl AnnularMatrix {
    pub fn render(&self) -> String {
        render_matrix(&self.entries, |p| p.to_string())
    }
}

pub fn render_matrix<T>(m: &[Vec<T>], f: impl Fn(&T) -> String) -> String {
    let cells: Vec<Vec<String>> = m.iter().map(|r| r.iter().map(&f).collect()).collect();
    let w = cells.iter().flatten().map(|s| s.len()).max().unwrap_or(1);
    cells
        .iter()
        .map(|r| r.iter().map(|s| format!("{:>w$}", s, w = w)).collect::<Vec<_>>().join("  "))
        .collect::<Vec<_>>()
        .join("\n")
}

// Parity of a permutation given as images.
fn perm_sign(p: &[usize]) -> i64 {
    let mut seen = vec![false; p.len()];
    let mut sign = 1;
    for i in 0..p.len() {
        if seen[i] {
            continue;
        }
        let mut len = 0;
        let mut j = i;
        while !seen[j] {
            seen[j] = true;
            j = p[j];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// Entry of `A_n` at row `(R,S)` and column `sigma`: zero unless every pair of
/// `sigma` joins one node of `R` to one of `S`; otherwise the sign of the
/// induced matching `r_i <-> s_rho(i)` times `zeta^k`, where `k` counts the
/// pairs traversed against their canonical direction whose two ends lie on
/// opposite sides of the zipper in disk order.
pub fn an_entry(row: &RowIndex, col: &DirectedPairing) -> PolyZ {
    let n = col.n;
    let h = col.pairs.last().expect("nonempty pairing").0;
    let left: Vec<Node> = (h + 1..n).collect();
    let side = |x: Node| -> u8 {
        if left.contains(&x) {
            0
        } else if x < h {
            1
        } else {
            2
        }
    };
    let rpos: HashMap<Node, usize> = row.r.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let spos: HashMap<Node, usize> = row.s.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mut rho = vec![usize::MAX; row.r.len()];
    let mut flips = 0usize;
    for &(dest, src) in &col.pairs {
        let (ri, si, reversed) = match (rpos.get(&dest), spos.get(&src)) {
            (Some(&a), Some(&b)) => (a, b, false),
            _ => match (rpos.get(&src), spos.get(&dest)) {
                (Some(&a), Some(&b)) => (a, b, true),
                _ => return PolyZ::zero(),
            },
        };
        rho[ri] = si;
        if reversed {
            let (a, b) = (side(dest), side(src));
            if a != b && a != 2 && b != 2 {
                flips += 1;
            }
        }
    }
    let sign = perm_sign(&rho);
    PolyZ::monomial(flips, crate::exactnum::int(sign))
}

fn an_cache() -> &'static Mutex<HashMap<usize, Arc<AnnularMatrix>>> {
    static C: OnceLock<Mutex<HashMap<usize, Arc<AnnularMatrix>>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

fn inv_cache() -> &'static Mutex<HashMap<usize, Arc<Vec<Vec<RatFuncZ>>>>> {
    static C: OnceLock<Mutex<HashMap<usize, Arc<Vec<Vec<RatFuncZ>>>>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `A_n` with rows in cycle-lemma order (row `i` corresponds to column `i`).
pub fn build_an(n: usize) -> Result<Arc<AnnularMatrix>> {
    if n < 2 || n % 2 != 0 {
        return Err(Error::Invalid(format!("n = {} must be even and >= 2", n)));
    }
    if n > N_CAP {
        return Err(Error::CapExceeded(n, N_CAP));
    }
    if let Some(a) = an_cache().lock().unwrap().get(&n) {
        return Ok(a.clone());
    }
    let cols = enumerate_annular_pairings(n);
    let rows: Vec<RowIndex> = cols.iter().map(|c| cycle_lemma_backward(c).unwrap()).collect();
    let entries = rows.iter().map(|r| cols.iter().map(|c| an_entry(r, c)).collect()).collect();
    let a = Arc::new(AnnularMatrix { n, rows, cols, entries });
    // concurrent builders produce identical values; keep the first
    Ok(an_cache().lock().unwrap().entry(n).or_insert(a).clone())
}

/// `A_n^{-1}`: row `i` is indexed by column pairing `i` of `A_n`, column `j`
/// by row index `j`.
pub fn invert_an(n: usize) -> Result<Arc<Vec<Vec<RatFuncZ>>>> {
    if let Some(a) = inv_cache().lock().unwrap().get(&n) {
        return Ok(a.clone());
    }
    let a = build_an(n)?;
    let m = a.entries.len();
    let id: Vec<Vec<PolyZ>> = (0..m)
        .map(|i| (0..m).map(|j| if i == j { PolyZ::from_int(1) } else { PolyZ::zero() }).collect())
        .collect();
    let inv = Arc::new(bareiss_solve(&a.entries, &id)?);
    Ok(inv_cache().lock().unwrap().entry(n).or_insert(inv).clone())
}

/// Determinant of `A_n` as a polynomial in `zeta`.
pub fn det_an(n: usize) -> Result<PolyZ> {
    Ok(poly_det(&build_an(n)?.entries))
}

/// Exact checks on `A_n`: the determinant, the all-ones row of the scaled
/// inverse, and the patterns observed in `(1 - zeta)^(n/2-1) A_n^{-1}`.
#[derive(Clone, Debug)]
pub struct MatrixChecks {
    pub n: usize,
    pub size: usize,
    pub det: PolyZ,
    /// `2^(n-2) - binomial(n, n/2)/2`
    pub expected_degree: usize,
    pub all_ones_row: bool,
    /// every scaled entry is a polynomial of degree <= n/2-1 with
    /// nonnegative integer coefficients
    pub scaled_entries_ok: bool,
    /// per row, the common value of the scaled entries at `zeta = 1`
    pub row_values: Vec<Option<Rational>>,
    pub row_values_divide: bool,
}

impl MatrixChecks {
    pub fn det_ok(&self) -> bool {
        let lead = self.det.lead();
        self.det.coeff(0) == crate::exactnum::int(1)
            && self.det.degree() == Some(self.expected_degree)
            && (lead == crate::exactnum::int(1) || lead == crate::exactnum::int(-1))
    }

    pub fn closed_form_ok(&self) -> bool {
        let c = PolyZ::from_i64s(&[1, -1]).pow(self.expected_degree);
        self.det == c || self.det == c.neg()
    }

    pub fn all_ok(&self) -> bool {
        self.det_ok() && self.closed_form_ok() && self.all_ones_row && self.scaled_entries_ok && self.row_values_divide
    }
}

pub fn check_matrix(n: usize) -> Result<MatrixChecks> {
    let a = build_an(n)?;
    let inv = invert_an(n)?;
    let det = det_an(n)?;
    let m = n / 2 - 1;
    let size = a.cols.len();
    let half = crate::combinat::binomial(n as u64, n as u64 / 2) as usize / 2;
    let scale = PolyZ::from_i64s(&[1, -1]).pow(m);
    let scaled: Vec<Vec<Option<PolyZ>>> = inv
        .iter()
        .map(|row| row.iter().map(|f| f.num().mul(&scale).div_exact(f.den())).collect())
        .collect();
    let int_ok = |p: &PolyZ| p.coeffs().iter().all(|c| c.is_integer() && *c >= Rational::zero());
    let scaled_entries_ok = scaled.iter().flatten().all(|e| match e {
        Some(p) => int_ok(p) && p.degree().is_none_or(|d| d <= m),
        None => false,
    });
    // sigma_0 pairs n/2-k with n/2+k and n with n/2
    let mut s0: Vec<(Node, Node)> = (1..n / 2).map(|k| (n / 2 - k, n / 2 + k)).collect();
    s0.push((n, n / 2));
    let key = |ps: &[(Node, Node)]| {
        let mut v: Vec<(Node, Node)> = ps.iter().map(|&(x, y)| (x.min(y), x.max(y))).collect();
        v.sort_unstable();
        v
    };
    let all_ones_row = a
        .cols
        .iter()
        .position(|c| key(&c.pairs) == key(&s0))
        .is_some_and(|j| scaled[j].iter().all(|e| e.as_ref() == Some(&PolyZ::from_int(1))));
    let one = crate::exactnum::int(1);
    let row_values: Vec<Option<Rational>> = scaled
        .iter()
        .map(|row| {
            let vals: Vec<Rational> = row.iter().map(|e| e.as_ref().map_or(Rational::zero(), |p| p.eval(&one))).collect();
            vals.iter().all(|v| *v == vals[0]).then(|| vals[0].clone())
        })
        .collect();
    let fact: u64 = (1..=m as u64).product();
    let row_values_divide = row_values.iter().all(|v| match v {
        Some(v) if v.is_integer() => v.to_integer().to_u64().is_some_and(|v| v > 0 && fact % v == 0),
        _ => false,
    });
    Ok(MatrixChecks {
        n,
        size,
        det,
        expected_degree: (1usize << (n - 2)) - half,
        all_ones_row,
        scaled_entries_ok,
        row_values,
        row_values_divide,
    })
}

/// Bareiss determinant over `Q[zeta]`.
pub fn poly_det(a: &[Vec<PolyZ>]) -> PolyZ {
    let n = a.len();
    let mut m = a.to_vec();
    let mut prev = PolyZ::from_int(1);
    let mut sign = 1i64;
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return PolyZ::zero();
        };
        if p != k {
            m.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = v.div_exact(&prev).expect("exact Bareiss step");
            }
            m[i][k] = PolyZ::zero();
        }
        prev = m[k][k].clone();
    }
    m[n - 1][n - 1].scale(&crate::exactnum::int(sign))
}

/// How first-order data is extended to a jet in `eps = zeta - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JetForm {
    /// `X + (X'/2) eps`, higher coefficients zero.
    Linear,
    /// `X + (X'/2) log(1 + eps)`, i.e. `X + X' log z`; this extension keeps
    /// the reflection symmetry `L_ji(z) = L_ij(1/z)` at every order.
    Log,
}

/// The form used throughout the library.
pub const DEFAULT_JET_FORM: JetForm = JetForm::Log;

fn first_order_jet<R: Ring>(c0: R, c1_z: R, order: usize, form: JetForm) -> Jet<R> {
    let half = c1_z.scale(&crate::exactnum::rat(1, 2));
    match form {
        JetForm::Linear => Jet::linear(c0, half, order),
        JetForm::Log => Jet::log_linear(c0, c1_z, order).scale_tail(&crate::exactnum::rat(1, 2)),
    }
}

impl<R: Ring> Jet<R> {
    // scales every coefficient except the constant one
    fn scale_tail(&self, r: &Rational) -> Self {
        let mut c: Vec<R> = self.coeffs().to_vec();
        for x in c.iter_mut().skip(1) {
            *x = x.scale(r);
        }
        Jet::new(c)
    }
}

/// First-order data at `z = 1` on the nodes: values and `z`-derivatives.
pub trait FirstOrderTable<R: Ring> {
    fn value(&self, i: Node, j: Node) -> R;
    fn deriv(&self, i: Node, j: Node) -> R;
}

/// Green's data `G_{i,j}`, `G'_{i,j}` with the outer node column replaced by
/// ones (`G^_{i,n} = 1`).
pub struct GreenTable<'a, R> {
    pub n: usize,
    pub data: &'a dyn FirstOrderTable<R>,
}

/// Response data `L_{i,j}`, `L'_{i,j}` over the paired nodes.
pub struct ResponseTable<'a, R> {
    pub data: &'a dyn FirstOrderTable<R>,
}

pub enum Table<'a, R> {
    Green(GreenTable<'a, R>),
    Response(ResponseTable<'a, R>),
}

/// Plain closure-backed first-order table.
pub struct FnTable<R> {
    pub value: Box<dyn Fn(Node, Node) -> R + Send + Sync>,
    pub deriv: Box<dyn Fn(Node, Node) -> R + Send + Sync>,
}

impl<R: Ring> FirstOrderTable<R> for FnTable<R> {
    fn value(&self, i: Node, j: Node) -> R {
        (self.value)(i, j)
    }
    fn deriv(&self, i: Node, j: Node) -> R {
        (self.deriv)(i, j)
    }
}

/// Ratio computed by the annular inversion together with its bookkeeping.
#[derive(Clone, Debug)]
pub struct GroveRatio<R> {
    pub value: R,
    pub pole_order: usize,
    pub terms: usize,
}

/// `Z[sigma]/Z[1|2|...|n]` (response form) or `Z[sigma]/Z[1,2,...,n]` (Green
/// form). Singletons of `sigma` enter the Green form as extra rows and
/// columns; internal nodes play no role. The response table is read on the
/// paired nodes only.
pub fn grove_ratio<R: Ring>(sigma: &PartialPairing, table: &Table<'_, R>) -> Result<R> {
    grove_ratio_with(sigma, table, DEFAULT_JET_FORM).map(|g| g.value)
}

pub fn grove_ratio_with<R: Ring>(
    sigma: &PartialPairing,
    table: &Table<'_, R>,
    form: JetForm,
) -> Result<GroveRatio<R>> {
    let n = sigma.n;
    let mut labels: Vec<Node> = sigma.pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
    labels.sort_unstable();
    let m = labels.len();
    if m == 0 || labels.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Invalid(format!("bad pairing {}", sigma)));
    }
    let is_green = matches!(table, Table::Green(_));
    if is_green && *labels.last().unwrap() != n {
        return Err(Error::Invalid("Green form needs node n in a pair".into()));
    }
    let rel: HashMap<Node, Node> = labels.iter().enumerate().map(|(i, &x)| (x, i + 1)).collect();
    let rel_pairs: Vec<(Node, Node)> = sigma.pairs.iter().map(|&(a, b)| (rel[&a], rel[&b])).collect();
    let canon = canonical_orientation(m, &rel_pairs)?;
    let a = build_an(m)?;
    let inv = invert_an(m)?;
    let col = a
        .cols
        .iter()
        .position(|c| c.pairs == canon.pairs)
        .ok_or_else(|| Error::NotAnnular(sigma.to_string()))?;
    let row = &inv[col];
    let mut poles = Vec::new();
    for f in row.iter() {
        if f.is_zero() {
            poles.push(None);
        } else {
            let (p, _) = ratfunc_expand_at_one(f, 0);
            poles.push(Some(p));
        }
    }
    let msig = poles.iter().flatten().copied().max().unwrap_or(0);
    let order = msig;
    let sign_m = if msig % 2 == 0 { 1 } else { -1 };
    let t_nodes: Vec<Node> = if is_green { sigma.singletons.clone() } else { vec![] };
    let entry = |i: Node, j: Node| -> Jet<R> {
        match table {
            Table::Green(g) => {
                if j == g.n {
                    Jet::one(order)
                } else {
                    first_order_jet(g.data.value(i, j), g.data.deriv(i, j), order, form)
                }
            }
            Table::Response(r) => first_order_jet(r.data.value(i, j), r.data.deriv(i, j), order, form),
        }
    };
    let mut total: Jet<R> = Jet::zero(order);
    let mut terms = 0;
    for (ri, f) in row.iter().enumerate() {
        let Some(pole) = poles[ri] else { continue };
        let (_, ser) = ratfunc_expand_at_one(f, order);
        // alpha = (1 - zeta)^msig f = (-eps)^msig f
        let mut alpha = Vec::with_capacity(order + 1);
        for k in 0..=order {
            let idx = k as i64 - msig as i64 + pole as i64;
            let c = if idx >= 0 && (idx as usize) <= order {
                ser.coeff(idx as usize).as_rational().expect("rational expansion")
            } else {
                Rational::zero()
            };
            alpha.push(R::from_rational(&(c * crate::exactnum::int(sign_m))));
        }
        let alpha = Jet::new(alpha);
        let rix = &a.rows[ri];
        let rows_orig: Vec<Node> =
            rix.r.iter().map(|&x| labels[x - 1]).chain(t_nodes.iter().copied()).collect();
        let cols_orig: Vec<Node> =
            rix.s.iter().map(|&x| labels[x - 1]).chain(t_nodes.iter().copied()).collect();
        let mat: Vec<Vec<Jet<R>>> =
            rows_orig.iter().map(|&i| cols_orig.iter().map(|&j| entry(i, j)).collect()).collect();
        total = total.add(&alpha.mul(&jet_det(&mat)));
        terms += 1;
    }
    for k in 0..order {
        if !total.coeff(k).is_zero() {
            return Err(Error::PrefixNotZero {
                order: k,
                detail: format!("{:?}", total.coeff(k)),
            });
        }
    }
    let value = total.coeff(order).scale(&crate::exactnum::int(sign_m));
    Ok(GroveRatio { value, pole_order: msig, terms })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Basis {
    L,
    G,
}

struct SymbolicTable {
    basis: Basis,
}

impl FirstOrderTable<MultiPoly> for SymbolicTable {
    fn value(&self, i: Node, j: Node) -> MultiPoly {
        match self.basis {
            Basis::L => MultiPoly::l(i, j),
            Basis::G => MultiPoly::g(i, j),
        }
    }
    fn deriv(&self, i: Node, j: Node) -> MultiPoly {
        match self.basis {
            Basis::L => MultiPoly::lp(i, j),
            Basis::G => MultiPoly::gp(i, j),
        }
    }
}

/// Closed-form polynomial for the grove ratio in formal generators.
pub fn grove_polynomial(sigma: &PartialPairing, basis: Basis) -> Result<MultiPoly> {
    grove_polynomial_with(sigma, basis, DEFAULT_JET_FORM)
}

pub fn grove_polynomial_with(sigma: &PartialPairing, basis: Basis, form: JetForm) -> Result<MultiPoly> {
    let t = SymbolicTable { basis };
    let table = match basis {
        Basis::L => Table::Response(ResponseTable { data: &t }),
        Basis::G => Table::Green(GreenTable { n: sigma.n, data: &t }),
    };
    grove_ratio_with(sigma, &table, form).map(|g| g.value)
}

fn ratio_of_constants(a: &ExactValue, b: &ExactValue) -> Result<ExactValue> {
    if b.is_zero() {
        return Err(Error::ZeroConstantTerm);
    }
    a.div(b).ok_or_else(|| Error::Invalid(format!("cannot divide by non-rational {}", b)))
}

/// `d/dz log L_{12}` at `z = 1` from a jet in `z - 1`.
pub fn crossing_probability_20(l_jet: &Jet<ExactValue>) -> Result<ExactValue> {
    if l_jet.order() < 1 {
        return Ok(ExactValue::from_int(0));
    }
    ratio_of_constants(l_jet.coeff(1), l_jet.coeff(0))
}

/// `d/dz log(Z[sigma] / Z[1|...|n])` at `z = 1` from numerator and
/// denominator jets in `z - 1`.
pub fn expected_winding(num: &Jet<ExactValue>, den: &Jet<ExactValue>) -> Result<ExactValue> {
    if num.coeff(0).is_zero() || den.coeff(0).is_zero() {
        return Err(Error::ZeroConstantTerm);
    }
    let c = |j: &Jet<ExactValue>| if j.order() >= 1 { j.coeff(1).clone() } else { ExactValue::from_int(0) };
    Ok(ratio_of_constants(&c(num), num.coeff(0))?.sub(&ratio_of_constants(&c(den), den.coeff(0))?))
}

/// Disk order used for the annular matrix, exposed for display.
pub fn disk_order_of(col: &DirectedPairing) -> Vec<Node> {
    disk_order(col.n, col.pairs.last().unwrap().0)
}
