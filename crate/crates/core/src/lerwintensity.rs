//! Edge and vertex intensities of loop-erased random walk from the origin to
//! infinity.
//!
//! A directed edge `v -> w` is handled by cutting lattice edges until the
//! origin, `v` and `w` sit on one face. That face becomes the inner boundary
//! of an annulus whose outer node is infinity. A spanning tree whose
//! origin-to-infinity path uses `v -> w` and meets the cut edges in `S`
//! becomes, after removing `S` and the target edge, a grove of the cut graph
//! whose parts are joined into a tree by those edges.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::sync::{Arc, Mutex, OnceLock};

use crate::annular::{grove_ratio, FirstOrderTable, GreenTable, Table};
use crate::combinat::{annular_embeddable, reduce_partition, Node, PartialPairing, Partition, ReduceMode};
use crate::cutgraph::{fresh_context, CutContext};
use crate::error::{Error, Result};
use crate::exactnum::{int, ExactValue, FracValue, PolyZ, RatFuncZ, Rational, Ring, Tag};
use crate::latticegreen::{self, geometry, zipper_edges, Lattice, Pt};

pub const ORIGIN: Pt = (0, 0);

// faces visited by the cut search before giving up
const SEARCH_LIMIT: usize = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CutState {
    Absent,
    Present,
}

/// One family of spanning trees: which cut edges the tree keeps, and the
/// grove partition left on the listed nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseSpec {
    pub states: Vec<CutState>,
    pub partition: Partition,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeQuery {
    pub lattice: Lattice,
    pub v: Pt,
    pub w: Pt,
    pub cuts: Vec<(Pt, Pt)>,
    /// Inner nodes counterclockwise, the zipper between the last and the
    /// first. Infinity is node `nodes.len() + 1`.
    pub nodes: Vec<Pt>,
}

fn ukey(a: Pt, b: Pt) -> (Pt, Pt) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Cut sets used for the worked lattice examples, keyed by undirected edge.
pub fn preset(lat: Lattice, v: Pt, w: Pt) -> Option<Vec<(Pt, Pt)>> {
    let k = ukey(v, w);
    let c = |s: &[(Pt, Pt)]| Some(s.iter().map(|&(a, b)| ukey(a, b)).collect());
    match lat {
        Lattice::Square => match k {
            ((1, 0), (1, 1)) | ((0, 0), (1, 0)) => c(&[]),
            ((1, 0), (2, 0)) | ((1, 1), (2, 1)) | ((2, 0), (2, 1)) => c(&[((1, 0), (1, 1))]),
            ((2, 0), (3, 0)) => c(&[((1, 0), (1, 1)), ((2, 0), (2, 1))]),
            _ => None,
        },
        Lattice::Triangular => match k {
            ((0, 1), (1, 0)) | ((0, 0), (1, 0)) => c(&[]),
            ((1, 0), (1, 1)) => c(&[((1, 0), (0, 1))]),
            ((1, 0), (2, 0)) => c(&[((1, 0), (0, 1)), ((1, 0), (1, 1))]),
            _ => None,
        },
        Lattice::Hexagonal => None,
    }
}

fn ccw_neighbors(lat: Lattice, q: Pt) -> Vec<Pt> {
    let c = lat.position(q);
    let mut nb = lat.neighbors(q);
    nb.sort_by(|a, b| {
        let (pa, pb) = (lat.position(*a), lat.position(*b));
        let ta = (pa.1 - c.1).atan2(pa.0 - c.0);
        let tb = (pb.1 - c.1).atan2(pb.0 - c.0);
        ta.partial_cmp(&tb).unwrap()
    });
    nb
}

// Next vertex after p -> q along the face on the left, skipping cut edges.
fn step(lat: Lattice, p: Pt, q: Pt, cut: &HashSet<(Pt, Pt)>) -> Pt {
    let nb = ccw_neighbors(lat, q);
    let d = nb.len();
    let i = nb.iter().position(|&x| x == p).expect("p is a neighbor of q");
    for k in 1..d {
        let r = nb[(i + d - k) % d];
        if !cut.contains(&ukey(q, r)) {
            return r;
        }
    }
    p
}

// A lattice face, named by the least directed edge on its boundary.
fn face(lat: Lattice, p: Pt, q: Pt) -> Vec<(Pt, Pt)> {
    let none = HashSet::new();
    let mut out = vec![(p, q)];
    let (mut a, mut b) = (p, q);
    loop {
        let c = step(lat, a, b, &none);
        (a, b) = (b, c);
        if (a, b) == (p, q) {
            break;
        }
        out.push((a, b));
    }
    let m = out.iter().enumerate().min_by_key(|x| x.1).unwrap().0;
    out.rotate_left(m);
    out
}

fn start_edge(lat: Lattice) -> (Pt, Pt) {
    let f = lat.start_face();
    (f[0], f[1])
}

fn is_zipper(lat: Lattice, a: Pt, b: Pt) -> bool {
    geometry::zipper_orientation(lat, a, b).is_some()
}

/// A shortest chain of faces from the start face to a face on the target
/// edge. Each crossed edge is cut; zipper edges and the target edge are never
/// crossed.
pub fn auto_cuts(lat: Lattice, v: Pt, w: Pt) -> Result<Vec<(Pt, Pt)>> {
    check_edge(lat, v, w)?;
    let (p, q) = start_edge(lat);
    let f0 = face(lat, p, q);
    let target = |f: &[(Pt, Pt)]| f.iter().any(|&(a, b)| ukey(a, b) == ukey(v, w));
    let mut parent: HashMap<(Pt, Pt), Option<((Pt, Pt), (Pt, Pt))>> = HashMap::new();
    parent.insert(f0[0], None);
    let mut queue = VecDeque::from([f0]);
    while let Some(f) = queue.pop_front() {
        if target(&f) {
            let mut cuts = Vec::new();
            let mut cur = f[0];
            while let Some((prev, e)) = parent[&cur] {
                cuts.push(e);
                cur = prev;
            }
            cuts.reverse();
            return Ok(cuts);
        }
        if parent.len() > SEARCH_LIMIT {
            break;
        }
        for &(a, b) in &f {
            if is_zipper(lat, a, b) || ukey(a, b) == ukey(v, w) {
                continue;
            }
            let g = face(lat, b, a);
            if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(g[0]) {
                e.insert(Some((f[0], ukey(a, b))));
                queue.push_back(g);
            }
        }
    }
    Err(Error::InvalidCutSet(format!("no face chain reaches {:?}-{:?}", v, w)))
}

fn check_edge(lat: Lattice, v: Pt, w: Pt) -> Result<()> {
    for p in [v, w] {
        if !lat.is_vertex(p) {
            return Err(Error::Invalid(format!("({},{}) is not a {} vertex", p.0, p.1, lat)));
        }
    }
    if !lat.adjacent(v, w) {
        return Err(Error::Invalid(format!("{:?} and {:?} are not adjacent", v, w)));
    }
    Ok(())
}

/// Inner nodes of the merged face in counterclockwise order starting after
/// the zipper, or `InvalidCutSet` if the cuts do not put the origin, the
/// target and the cut endpoints on one face.
pub fn node_order(lat: Lattice, v: Pt, w: Pt, cuts: &[(Pt, Pt)]) -> Result<Vec<Pt>> {
    check_edge(lat, v, w)?;
    let bad = |m: String| Err(Error::InvalidCutSet(m));
    let mut cut = HashSet::new();
    for &(s, t) in cuts {
        if !lat.is_vertex(s) || !lat.is_vertex(t) || !lat.adjacent(s, t) {
            return bad(format!("{:?}-{:?} is not a lattice edge", s, t));
        }
        if !cut.insert(ukey(s, t)) {
            return bad(format!("{:?}-{:?} listed twice", s, t));
        }
    }
    if cut.contains(&ukey(v, w)) {
        return bad("the target edge is cut".into());
    }
    // cut zipper edges must be its first few
    let zip = zipper_edges(lat, cuts.len() as i64 + 3);
    let m = zip.iter().take_while(|&&(k, l)| cut.contains(&ukey(k, l))).count();
    if cut.iter().filter(|&&(s, t)| is_zipper(lat, s, t)).count() != m {
        return bad("cut zipper edges are not a prefix of the zipper".into());
    }
    // the faces merged with the start face
    let (p0, q0) = start_edge(lat);
    let f0 = face(lat, p0, q0);
    let mut hole: HashSet<(Pt, Pt)> = HashSet::from([f0[0]]);
    let mut queue = VecDeque::from([f0]);
    while let Some(f) = queue.pop_front() {
        for &(a, b) in &f {
            if cut.contains(&ukey(a, b)) {
                let g = face(lat, b, a);
                if hole.insert(g[0]) {
                    queue.push_back(g);
                }
            }
        }
    }
    for &(s, t) in cuts {
        if !hole.contains(&face(lat, s, t)[0]) || !hole.contains(&face(lat, t, s)[0]) {
            return bad(format!("{:?}-{:?} does not border the merged face", s, t));
        }
    }
    let (k, l) = zip[m];
    let mut seq = Vec::new();
    let (mut a, mut b) = (k, l);
    loop {
        seq.push(b);
        let c = step(lat, a, b, &cut);
        (a, b) = (b, c);
        if (a, b) == (k, l) {
            break;
        }
        if seq.len() > 8 * (cuts.len() + 2) * lat.degree() {
            return bad("boundary walk does not close".into());
        }
    }
    let mut need: BTreeSet<Pt> = [ORIGIN, v, w].into_iter().collect();
    need.extend(cuts.iter().flat_map(|&(s, t)| [s, t]));
    for &p in &need {
        let times = seq.iter().filter(|&&x| x == p).count();
        if times != 1 {
            return bad(format!("{:?} appears {} times on the merged face boundary", p, times));
        }
    }
    Ok(seq.into_iter().filter(|p| need.contains(p)).collect())
}

impl EdgeQuery {
    /// Query with the preset cut set if there is one, else a searched one.
    pub fn new(lat: Lattice, v: Pt, w: Pt) -> Result<EdgeQuery> {
        check_edge(lat, v, w)?;
        let cuts = match preset(lat, v, w) {
            Some(c) => c,
            None => auto_cuts(lat, v, w)?,
        };
        EdgeQuery::with_cuts(lat, v, w, cuts)
    }

    pub fn with_cuts(lat: Lattice, v: Pt, w: Pt, cuts: Vec<(Pt, Pt)>) -> Result<EdgeQuery> {
        let nodes = node_order(lat, v, w, &cuts)?;
        Ok(EdgeQuery { lattice: lat, v, w, cuts, nodes })
    }

    /// Query with an explicit node order, which must agree with the face.
    pub fn with_nodes(lat: Lattice, v: Pt, w: Pt, cuts: Vec<(Pt, Pt)>, nodes: Vec<Pt>) -> Result<EdgeQuery> {
        let q = EdgeQuery::with_cuts(lat, v, w, cuts)?;
        if q.nodes != nodes {
            return Err(Error::InvalidCutSet(format!("node order {:?} does not match the face order {:?}", nodes, q.nodes)));
        }
        Ok(q)
    }

    /// Number of nodes including infinity.
    pub fn n(&self) -> usize {
        self.nodes.len() + 1
    }

    pub fn label(&self, p: Pt) -> Option<Node> {
        self.nodes.iter().position(|&x| x == p).map(|i| i + 1)
    }
}

fn lab(q: &EdgeQuery, p: Pt) -> Node {
    q.label(p).expect("node of the query")
}

/// All grove cases whose trees route the origin-to-infinity path through the
/// target edge.
pub fn enumerate_cases(q: &EdgeQuery) -> Vec<CaseSpec> {
    let n = q.n();
    let (o, v, w) = (lab(q, ORIGIN), lab(q, q.v), lab(q, q.w));
    let cut_labels: Vec<(Node, Node)> = q.cuts.iter().map(|&(s, t)| (lab(q, s), lab(q, t))).collect();
    let k = cut_labels.len();
    let mut out = Vec::new();
    for mask in 0..(1usize << k) {
        let present: Vec<(Node, Node)> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| cut_labels[i]).collect();
        let mut listed: BTreeSet<Node> = [o, v, w, n].into_iter().collect();
        listed.extend(present.iter().flat_map(|&(a, b)| [a, b]));
        let listed: Vec<Node> = listed.into_iter().collect();
        let mut edges = present.clone();
        edges.push((v, w));
        let states: Vec<CutState> =
            (0..k).map(|i| if mask >> i & 1 == 1 { CutState::Present } else { CutState::Absent }).collect();
        for parts in tree_partitions(&listed, &edges, present.len() + 2) {
            if !path_uses(&parts, &edges, o, n, v, w) {
                continue;
            }
            let partition = Partition::new(n, parts).expect("labels in range");
            if annular_embeddable(&partition) {
                out.push(CaseSpec { states: states.clone(), partition });
            }
        }
    }
    out
}

// Partitions of `items` into `m` blocks with the endpoints of every edge in
// different blocks.
fn tree_partitions(items: &[Node], edges: &[(Node, Node)], m: usize) -> Vec<Vec<Vec<Node>>> {
    fn go(
        items: &[Node],
        edges: &[(Node, Node)],
        m: usize,
        i: usize,
        block: &mut HashMap<Node, usize>,
        cur: &mut Vec<Vec<Node>>,
        out: &mut Vec<Vec<Vec<Node>>>,
    ) {
        if cur.len() + (items.len() - i) < m {
            return;
        }
        if i == items.len() {
            out.push(cur.clone());
            return;
        }
        let x = items[i];
        let clash = |b: usize, block: &HashMap<Node, usize>| {
            edges.iter().any(|&(a, c)| {
                (a == x && block.get(&c) == Some(&b)) || (c == x && block.get(&a) == Some(&b))
            })
        };
        for b in 0..cur.len() {
            if clash(b, block) {
                continue;
            }
            cur[b].push(x);
            block.insert(x, b);
            go(items, edges, m, i + 1, block, cur, out);
            block.remove(&x);
            cur[b].pop();
        }
        if cur.len() < m {
            cur.push(vec![x]);
            block.insert(x, cur.len() - 1);
            go(items, edges, m, i + 1, block, cur, out);
            block.remove(&x);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, edges, m, 0, &mut HashMap::new(), &mut Vec::new(), &mut out);
    out
}

// The block graph is a tree and its path from the origin's block to
// infinity's block steps from v's block to w's block.
fn path_uses(parts: &[Vec<Node>], edges: &[(Node, Node)], o: Node, n: Node, v: Node, w: Node) -> bool {
    let block = |x: Node| parts.iter().position(|p| p.contains(&x)).unwrap();
    let m = parts.len();
    let mut adj = vec![Vec::new(); m];
    let mut root: Vec<usize> = (0..m).collect();
    fn find(r: &mut [usize], x: usize) -> usize {
        if r[x] != x {
            let y = find(r, r[x]);
            r[x] = y;
        }
        r[x]
    }
    for &(a, b) in edges {
        let (x, y) = (block(a), block(b));
        let (rx, ry) = (find(&mut root, x), find(&mut root, y));
        if rx == ry {
            return false;
        }
        root[rx] = ry;
        adj[x].push(y);
        adj[y].push(x);
    }
    let (s, t) = (block(o), block(n));
    let mut prev = vec![usize::MAX; m];
    prev[s] = s;
    let mut queue = VecDeque::from([s]);
    while let Some(x) = queue.pop_front() {
        for &y in &adj[x] {
            if prev[y] == usize::MAX {
                prev[y] = x;
                queue.push_back(y);
            }
        }
    }
    let (bv, bw) = (block(v), block(w));
    let mut x = t;
    while x != s {
        if x == bw && prev[x] == bv {
            return true;
        }
        x = prev[x];
    }
    false
}

// `num / d^e` for one fixed polynomial `d`: after several cuts all Green's
// data share a denominator, and keeping it apart avoids polynomial gcds
// inside the determinants.
#[derive(Clone, Debug)]
struct Scaled {
    num: PolyZ,
    e: u32,
    d: Option<Arc<PolyZ>>,
}

impl Scaled {
    fn lift(&self, e: u32, d: &Option<Arc<PolyZ>>) -> PolyZ {
        match d.as_ref().or(self.d.as_ref()) {
            Some(d) if e > self.e => self.num.mul(&d.pow((e - self.e) as usize)),
            _ => self.num.clone(),
        }
    }

    fn with(&self, o: &Self, f: impl Fn(&PolyZ, &PolyZ) -> PolyZ) -> Self {
        let e = self.e.max(o.e);
        let d = self.d.clone().or_else(|| o.d.clone());
        Scaled { num: f(&self.lift(e, &d), &o.lift(e, &d)), e, d }
    }
}

impl PartialEq for Scaled {
    fn eq(&self, o: &Self) -> bool {
        self.sub(o).is_zero()
    }
}

impl Ring for Scaled {
    fn zero() -> Self {
        Scaled { num: PolyZ::zero(), e: 0, d: None }
    }
    fn one() -> Self {
        Scaled { num: PolyZ::from_int(1), e: 0, d: None }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        self.with(o, |a, b| a.add(b))
    }
    fn sub(&self, o: &Self) -> Self {
        self.with(o, |a, b| a.sub(b))
    }
    fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Scaled::zero();
        }
        Scaled { num: self.num.mul(&o.num), e: self.e + o.e, d: self.d.clone().or_else(|| o.d.clone()) }
    }
    fn neg(&self) -> Self {
        Scaled { num: self.num.neg(), e: self.e, d: self.d.clone() }
    }
    fn from_rational(r: &Rational) -> Self {
        Scaled { num: PolyZ::constant(r.clone()), e: 0, d: None }
    }
    fn scale(&self, r: &Rational) -> Self {
        Scaled { num: self.num.scale(r), e: self.e, d: self.d.clone() }
    }
}

fn poly_of(v: &ExactValue) -> PolyZ {
    PolyZ::new(v.coeffs().to_vec())
}

struct NodeTable {
    n: usize,
    g: Vec<Vec<Scaled>>,
    gp: Vec<Vec<Scaled>>,
}

impl NodeTable {
    fn new(n: usize, g: &[Vec<FracValue>], gp: &[Vec<FracValue>]) -> NodeTable {
        let mut d = PolyZ::from_int(1);
        for x in g.iter().chain(gp).flatten() {
            let den = poly_of(&x.den());
            let q = den.div_exact(&den.gcd(&d)).expect("gcd divides");
            d = d.mul(&q).primitive();
        }
        let d = Arc::new(d);
        let conv = |x: &FracValue| Scaled {
            num: poly_of(&x.num()).mul(&d.div_exact(&poly_of(&x.den())).expect("common denominator")),
            e: 1,
            d: Some(d.clone()),
        };
        let g = g.iter().map(|r| r.iter().map(conv).collect()).collect();
        let gp = gp.iter().map(|r| r.iter().map(conv).collect()).collect();
        NodeTable { n, g, gp }
    }
}

impl FirstOrderTable<Scaled> for NodeTable {
    fn value(&self, i: Node, j: Node) -> Scaled {
        if i == self.n || j == self.n {
            return Scaled::zero();
        }
        self.g[i - 1][j - 1].clone()
    }
    fn deriv(&self, i: Node, j: Node) -> Scaled {
        if i == self.n || j == self.n {
            return Scaled::zero();
        }
        self.gp[i - 1][j - 1].clone()
    }
}

/// Runs the case sum on Green's data for the uncut graph. The window of
/// `ctx` must contain the query nodes.
pub fn evaluate(q: &EdgeQuery, ctx: &CutContext) -> Result<FracValue> {
    let ce = ctx
        .conductance(q.v, q.w)
        .cloned()
        .ok_or_else(|| Error::Invalid(format!("{:?}-{:?} is not an edge of the context", q.v, q.w)))?;
    let mut cc = Vec::new();
    for &(s, t) in &q.cuts {
        cc.push(
            ctx.conductance(s, t)
                .cloned()
                .ok_or_else(|| Error::InvalidCutSet(format!("{:?}-{:?} is not an edge of the context", s, t)))?,
        );
    }
    let cut = ctx.cut_all(&q.cuts)?;
    let n = q.n();
    let mut g = Vec::new();
    let mut gp = Vec::new();
    for &a in &q.nodes {
        let mut row = Vec::new();
        let mut drow = Vec::new();
        for &b in &q.nodes {
            row.push(cut.g(a, b)?.clone());
            drow.push(cut.gp(a, b)?.clone());
        }
        g.push(row);
        gp.push(drow);
    }
    let tag = g.iter().flatten().map(|x| x.tag()).find(|&t| t != Tag::RationalOnly).unwrap_or(Tag::RationalOnly);
    let table = NodeTable::new(n, &g, &gp);
    let green = Table::Green(GreenTable { n, data: &table });
    let mut memo: HashMap<PartialPairing, Scaled> = HashMap::new();
    let mut total = Scaled::zero();
    for case in enumerate_cases(q) {
        let mut weight = ce.clone();
        for (st, c) in case.states.iter().zip(&cc) {
            if *st == CutState::Present {
                weight *= c;
            }
        }
        let mut sum = Scaled::zero();
        for (coef, pp) in reduce_partition(&case.partition, ReduceMode::AnnularOne)? {
            if !memo.contains_key(&pp) {
                let r = match grove_ratio(&pp, &green) {
                    Ok(r) => r,
                    Err(Error::NotAnnular(_)) => Scaled::zero(),
                    Err(e) => return Err(e),
                };
                memo.insert(pp.clone(), r);
            }
            sum = sum.add(&memo[&pp].scale(&int(coef)));
        }
        total = total.add(&sum.scale(&weight));
    }
    let den = match &total.d {
        Some(d) => d.pow(total.e as usize),
        None => PolyZ::from_int(1),
    };
    let total = FracValue::from_ratfunc(tag, RatFuncZ::new(total.num, den));
    Ok(total.mul(cut.z_ratio()))
}

/// `P_{v,w}` on the lattice for the given query.
pub fn edge_intensity(q: &EdgeQuery) -> Result<ExactValue> {
    let ctx = fresh_context(q.lattice, &q.nodes)?;
    let p = evaluate(q, &ctx)?;
    p.to_exact().ok_or_else(|| Error::Mismatch(format!("intensity {} is not a polynomial in the generator", p)))
}

/// `P_{w,v}` from `P_{v,w}`: the two differ by the current through the edge.
pub fn reverse_intensity(lat: Lattice, v: Pt, w: Pt, p_vw: &ExactValue) -> Result<ExactValue> {
    check_edge(lat, v, w)?;
    let d = latticegreen::gbar(lat, ORIGIN, v)?.sub(&latticegreen::gbar(lat, ORIGIN, w)?);
    Ok(p_vw.sub(&d))
}

type Memo = Mutex<HashMap<(Lattice, Pt, Pt), ExactValue>>;

fn memo() -> &'static Memo {
    static M: OnceLock<Memo> = OnceLock::new();
    M.get_or_init(|| Mutex::new(HashMap::new()))
}

// Among the images of v -> w and w -> v under the point group, the query
// with the fewest cuts; the flag says the edge is reversed.
fn cheapest(lat: Lattice, v: Pt, w: Pt) -> Result<(EdgeQuery, bool)> {
    let mut best: Option<(usize, bool, Pt, Pt)> = None;
    for g in lat.point_group() {
        for (a, b, rev) in [(g(v), g(w), false), (g(w), g(v), true)] {
            let k = match preset(lat, a, b) {
                Some(c) => c.len(),
                None => match auto_cuts(lat, a, b) {
                    Ok(c) => c.len(),
                    Err(_) => continue,
                },
            };
            let cand = (k, rev, a, b);
            if best.as_ref().is_none_or(|x| cand < *x) {
                best = Some(cand);
            }
        }
    }
    let (_, rev, a, b) = best.ok_or_else(|| Error::InvalidCutSet(format!("no cut set for {:?}-{:?}", v, w)))?;
    Ok((EdgeQuery::new(lat, a, b)?, rev))
}

/// `P_{v,w}`, computed on the cheapest symmetric image and memoized.
pub fn directed_intensity(lat: Lattice, v: Pt, w: Pt) -> Result<ExactValue> {
    check_edge(lat, v, w)?;
    if let Some(x) = memo().lock().unwrap().get(&(lat, v, w)) {
        return Ok(x.clone());
    }
    let (q, rev) = cheapest(lat, v, w)?;
    let key = (lat, q.v, q.w);
    let cached = memo().lock().unwrap().get(&key).cloned();
    let p = match cached {
        Some(p) => p,
        None => {
            let p = edge_intensity(&q)?;
            memo().lock().unwrap().insert(key, p.clone());
            p
        }
    };
    let out = if rev { reverse_intensity(lat, w, v, &p)? } else { p };
    memo().lock().unwrap().insert((lat, v, w), out.clone());
    Ok(out)
}

/// `P_{v,w}` for each edge, in parallel when the feature is on.
pub fn directed_intensities(lat: Lattice, edges: &[(Pt, Pt)]) -> Vec<Result<ExactValue>> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        edges.par_iter().map(|&(v, w)| directed_intensity(lat, v, w)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        edges.iter().map(|&(v, w)| directed_intensity(lat, v, w)).collect()
    }
}

/// `P_{v,w} + P_{w,v}`.
pub fn undirected_intensity(lat: Lattice, a: Pt, b: Pt) -> Result<ExactValue> {
    let p = directed_intensity(lat, a, b)?;
    Ok(p.add(&reverse_intensity(lat, a, b, &p)?))
}

/// Probability that the walk visits `w`.
pub fn vertex_intensity(lat: Lattice, w: Pt) -> Result<ExactValue> {
    if !lat.is_vertex(w) {
        return Err(Error::Invalid(format!("({},{}) is not a {} vertex", w.0, w.1, lat)));
    }
    if w == ORIGIN {
        return Ok(ExactValue::from_int(1));
    }
    let edges: Vec<(Pt, Pt)> = lat.neighbors(w).into_iter().map(|v| (v, w)).collect();
    let mut s = ExactValue::from_int(0);
    for p in directed_intensities(lat, &edges) {
        s = s.add(&p?);
    }
    Ok(s)
}
