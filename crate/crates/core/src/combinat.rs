//! Pairings and partitions of boundary nodes, the cycle-lemma bijection
//! between rows and columns of the annular matrix, and the reduction of a
//! general partition to signed partial pairings.
//!
//! Nodes are labelled `1..=n`. Nodes `1..n-1` sit counterclockwise on the
//! inner boundary with the zipper between `n-1` and `1`; node `n` is the
//! single node on the outer boundary.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};

pub type Node = usize;

/// Pairs are `(dest, src)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DirectedPairing {
    pub n: usize,
    pub pairs: Vec<(Node, Node)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RowIndex {
    pub r: Vec<Node>,
    pub s: Vec<Node>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialPairing {
    pub n: usize,
    pub pairs: Vec<(Node, Node)>,
    pub singletons: Vec<Node>,
    pub unlisted: Vec<Node>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    pub n: usize,
    pub parts: Vec<Vec<Node>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReduceMode {
    Circular,
    AnnularOne,
}

fn fmt_pairs(pairs: &[(Node, Node)]) -> String {
    pairs.iter().map(|(r, s)| format!("{}<-{}", r, s)).collect::<Vec<_>>().join(" | ")
}

impl fmt::Display for DirectedPairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_pairs(&self.pairs))
    }
}

impl fmt::Display for PartialPairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> =
            self.pairs.iter().map(|(r, s)| format!("{},{}", r, s)).collect();
        parts.extend(self.singletons.iter().map(|s| s.to_string()));
        write!(f, "{}", parts.join("|"))?;
        if !self.unlisted.is_empty() {
            let u: Vec<String> = self.unlisted.iter().map(|x| x.to_string()).collect();
            write!(f, " (internal {})", u.join(","))?;
        }
        Ok(())
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .parts
            .iter()
            .map(|p| p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        f.write_str(&parts.join("|"))
    }
}

impl Partition {
    /// Sorts each part and the list of parts; drops empty parts.
    pub fn new(n: usize, parts: Vec<Vec<Node>>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for mut p in parts {
            if p.is_empty() {
                continue;
            }
            p.sort_unstable();
            for &x in &p {
                if x == 0 || x > n || !seen.insert(x) {
                    return Err(Error::Invalid(format!("node {} repeated or out of range", x)));
                }
            }
            out.push(p);
        }
        out.sort();
        Ok(Partition { n, parts: out })
    }

    /// Parses `"1,5,8|2,3,4|6,7"`.
    pub fn parse(n: usize, s: &str) -> Result<Self> {
        let mut parts = Vec::new();
        for block in s.split('|') {
            let mut p = Vec::new();
            for x in block.split(',') {
                let x = x.trim();
                if x.is_empty() {
                    continue;
                }
                p.push(x.parse::<Node>().map_err(|_| Error::Parse(format!("bad node '{}'", x)))?);
            }
            parts.push(p);
        }
        Partition::new(n, parts)
    }

    pub fn listed(&self) -> BTreeSet<Node> {
        self.parts.iter().flatten().copied().collect()
    }

    fn part_of(&self, x: Node) -> Option<usize> {
        self.parts.iter().position(|p| p.contains(&x))
    }

    /// The partition as a partial pairing when every part has size at most 2.
    pub fn to_partial_pairing(&self) -> Option<PartialPairing> {
        let listed = self.listed();
        let mut pairs = Vec::new();
        let mut singletons = Vec::new();
        for p in &self.parts {
            match p.len() {
                1 => singletons.push(p[0]),
                2 => pairs.push((p[0], p[1])),
                _ => return None,
            }
        }
        let unlisted = (1..=self.n).filter(|x| !listed.contains(x)).collect();
        Some(PartialPairing { n: self.n, pairs, singletons, unlisted })
    }
}

impl PartialPairing {
    /// Parses `"1,3|2,4"`; singletons are one-element parts, any node not
    /// mentioned is internal.
    pub fn parse(n: usize, s: &str) -> Result<Self> {
        Partition::parse(n, s)?
            .to_partial_pairing()
            .ok_or_else(|| Error::Invalid(format!("'{}' has a part of size > 2", s)))
    }

    pub fn from_pairing(p: &DirectedPairing) -> Self {
        PartialPairing { n: p.n, pairs: p.pairs.clone(), singletons: vec![], unlisted: vec![] }
    }
}

/// Inner nodes in disk order after cutting along the connection `h - n`:
/// `h+1, ..., n-1, 1, ..., h-1`.
pub fn disk_order(n: usize, h: Node) -> Vec<Node> {
    (h + 1..n).chain(1..h).collect()
}

/// True when no two parts interleave around a circle whose cyclic order is
/// given by `order` (nodes missing from `order` are ignored).
pub fn noncrossing_on_circle(order: &[Node], parts: &[Vec<Node>]) -> bool {
    let pos: HashMap<Node, usize> = order.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let label: Vec<Vec<usize>> = parts
        .iter()
        .map(|p| {
            let mut v: Vec<usize> = p.iter().filter_map(|x| pos.get(x).copied()).collect();
            v.sort_unstable();
            v
        })
        .collect();
    for a in 0..label.len() {
        for b in a + 1..label.len() {
            let mut seq: Vec<(usize, bool)> = label[a].iter().map(|&p| (p, false)).collect();
            seq.extend(label[b].iter().map(|&p| (p, true)));
            if seq.len() < 4 {
                continue;
            }
            seq.sort_unstable();
            let changes =
                (0..seq.len()).filter(|&i| seq[i].1 != seq[(i + 1) % seq.len()].1).count();
            if changes > 2 {
                return false;
            }
        }
    }
    true
}

fn undirected(pairs: &[(Node, Node)]) -> Vec<(Node, Node)> {
    pairs.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect()
}

/// Canonical counterclockwise orientation of an annular pairing: in each
/// pair the destination is the node met first in disk order; pairs listed by
/// destination position with the pair containing `n` last.
pub fn canonical_orientation(n: usize, pairs: &[(Node, Node)]) -> Result<DirectedPairing> {
    if n % 2 != 0 || pairs.len() * 2 != n {
        return Err(Error::NotAnnular(format!("{} pairs for n = {}", pairs.len(), n)));
    }
    let mut seen = vec![false; n + 1];
    for &(a, b) in pairs {
        for x in [a, b] {
            if x == 0 || x > n || seen[x] {
                return Err(Error::NotAnnular(format!("node {} repeated or out of range", x)));
            }
            seen[x] = true;
        }
    }
    let up = undirected(pairs);
    let h = up
        .iter()
        .find(|p| p.1 == n)
        .map(|p| p.0)
        .ok_or_else(|| Error::NotAnnular("node n unpaired".into()))?;
    let order = disk_order(n, h);
    let rest: Vec<Vec<Node>> =
        up.iter().filter(|p| p.1 != n).map(|&(a, b)| vec![a, b]).collect();
    if !noncrossing_on_circle(&order, &rest) {
        return Err(Error::NotAnnular(fmt_pairs(pairs)));
    }
    let pos: HashMap<Node, usize> = order.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mut directed: Vec<(Node, Node)> = rest
        .iter()
        .map(|p| if pos[&p[0]] < pos[&p[1]] { (p[0], p[1]) } else { (p[1], p[0]) })
        .collect();
    directed.sort_by_key(|p| pos[&p.0]);
    directed.push((h, n));
    Ok(DirectedPairing { n, pairs: directed })
}

// Dyck words of length 2k, lexicographic with '-' < '+'; true means '+'.
fn dyck_words(k: usize) -> Vec<Vec<bool>> {
    fn go(k: usize, up: usize, down: usize, cur: &mut Vec<bool>, out: &mut Vec<Vec<bool>>) {
        if up == k && down == k {
            out.push(cur.clone());
            return;
        }
        if down < up {
            cur.push(false);
            go(k, up, down + 1, cur, out);
            cur.pop();
        }
        if up < k {
            cur.push(true);
            go(k, up + 1, down, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(k, 0, 0, &mut Vec::new(), &mut out);
    out
}

// Chords of a Dyck word read along `order`, as (dest at '+', src at '-').
fn dyck_chords(order: &[Node], word: &[bool]) -> Vec<(Node, Node)> {
    let mut stack = Vec::new();
    let mut chords = Vec::new();
    for (i, &up) in word.iter().enumerate() {
        if up {
            stack.push(i);
        } else {
            let o = stack.pop().expect("not a Dyck word");
            chords.push((o, i));
        }
    }
    chords.sort_unstable();
    chords.into_iter().map(|(a, b)| (order[a], order[b])).collect()
}

/// All annular-embeddable pairings of `n` nodes in column order: the
/// partner `h` of `n` runs from `n-1` down to `1`; for each `h` the Dyck
/// words on the disk order are taken lexicographically.
pub fn enumerate_annular_pairings(n: usize) -> Vec<DirectedPairing> {
    assert!(n >= 2 && n % 2 == 0, "n must be even and at least 2");
    let mut out = Vec::new();
    for h in (1..n).rev() {
        let order = disk_order(n, h);
        for w in dyck_words((n - 2) / 2) {
            let mut pairs = dyck_chords(&order, &w);
            pairs.push((h, n));
            out.push(DirectedPairing { n, pairs });
        }
    }
    out
}

/// Row `(R, S)` to the annular pairing: mark `+` at `R`, `-` at `S \ {n}`
/// around the inner circle; the unique `+` after which the cyclic reading is
/// a Dyck path is the partner of `n`, and the Dyck chords pair the rest.
pub fn cycle_lemma_forward(row: &RowIndex) -> Result<DirectedPairing> {
    let n = row.r.len() + row.s.len();
    let rs: BTreeSet<Node> = row.r.iter().copied().collect();
    let ss: BTreeSet<Node> = row.s.iter().copied().collect();
    if row.r.len() != row.s.len()
        || !ss.contains(&n)
        || rs.len() != row.r.len()
        || ss.len() != row.s.len()
        || rs.union(&ss).count() != n
        || rs.iter().chain(ss.iter()).any(|&x| x == 0 || x > n)
    {
        return Err(Error::Invalid("not a valid row index".into()));
    }
    for &h in &rs {
        let order = disk_order(n, h);
        let word: Vec<bool> = order.iter().map(|x| rs.contains(x)).collect();
        let mut height: i64 = 0;
        let ok = word.iter().all(|&u| {
            height += if u { 1 } else { -1 };
            height >= 0
        }) && height == 0;
        if ok {
            let mut pairs = dyck_chords(&order, &word);
            pairs.push((h, n));
            return Ok(DirectedPairing { n, pairs });
        }
    }
    Err(Error::Invalid("cycle lemma found no rotation".into()))
}

/// Annular pairing to its row: `R` are the destinations in listing order,
/// `S` the sources in the same order (so `n` comes last).
pub fn cycle_lemma_backward(p: &DirectedPairing) -> Result<RowIndex> {
    let c = canonical_orientation(p.n, &p.pairs)?;
    Ok(RowIndex { r: c.pairs.iter().map(|x| x.0).collect(), s: c.pairs.iter().map(|x| x.1).collect() })
}

/// Whether a grove with the given listed parts can exist on some graph
/// embedded in the annulus with one outer node.
pub fn annular_embeddable(p: &Partition) -> bool {
    let n = p.n;
    match p.part_of(n) {
        None => (0..p.parts.len()).any(|k| {
            let mut q = p.clone();
            q.parts[k].push(n);
            annular_embeddable(&q)
        }),
        Some(k) => {
            let inner: Vec<Node> = (1..n).collect();
            if p.parts[k].len() == 1 {
                return noncrossing_on_circle(&inner, &p.parts);
            }
            p.parts[k].iter().filter(|&&h| h != n).any(|&h| {
                let mut order: Vec<Node> = Vec::with_capacity(n);
                for &x in &inner {
                    order.push(x);
                    if x == h {
                        order.push(n);
                    }
                }
                noncrossing_on_circle(&order, &p.parts)
            })
        }
    }
}

pub fn circular_embeddable(p: &Partition) -> bool {
    let order: Vec<Node> = (1..=p.n).collect();
    noncrossing_on_circle(&order, &p.parts)
}

fn embeddable(p: &Partition, mode: ReduceMode) -> bool {
    match mode {
        ReduceMode::Circular => circular_embeddable(p),
        ReduceMode::AnnularOne => annular_embeddable(p),
    }
}

// The node to de-list, or None when every part has size at most 2.
fn choose_delist(p: &Partition, mode: ReduceMode) -> Option<(usize, Node)> {
    let n = p.n;
    if p.parts.iter().all(|q| q.len() <= 2) {
        return None;
    }
    let by_order = |order: &[Node]| -> Option<(usize, Node)> {
        let pos: HashMap<Node, usize> = order.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let mut best: Option<(usize, usize)> = None;
        for (k, q) in p.parts.iter().enumerate() {
            if q.len() <= 2 {
                continue;
            }
            for &x in q {
                if let Some(&ps) = pos.get(&x) {
                    if best.is_none_or(|b| ps < b.0) {
                        best = Some((ps, k));
                    }
                }
            }
        }
        let (ps_i, k) = best?;
        let j = p.parts[k]
            .iter()
            .filter_map(|x| pos.get(x).map(|&ps| (ps, *x)))
            .filter(|&(ps, _)| ps > ps_i)
            .min()?
            .1;
        Some((k, j))
    };
    match mode {
        ReduceMode::Circular => by_order(&(1..=n).collect::<Vec<_>>()),
        ReduceMode::AnnularOne => match p.part_of(n) {
            Some(k) if p.parts[k].len() > 2 => {
                // shrink the part of n first: keep its smallest inner node
                Some((k, p.parts[k][1]))
            }
            Some(k) if p.parts[k].len() == 2 => by_order(&disk_order(n, p.parts[k][0])),
            _ => by_order(&(1..n).collect::<Vec<_>>()),
        },
    }
}

/// Expresses `Z[sigma]` as a signed sum of partial-pairing grove counts by
/// repeatedly de-listing a node `j`:
/// `Z[sigma] = Z[sigma*] - sum_Q Z[sigma* with j joined to Q]`,
/// the sum over the parts `Q` of `sigma*` other than the one `j` left.
/// Terms that cannot be embedded are dropped.
pub fn reduce_partition(p: &Partition, mode: ReduceMode) -> Result<Vec<(i64, PartialPairing)>> {
    let mut memo: HashMap<Partition, BTreeMap<PartialPairing, i64>> = HashMap::new();
    let res = reduce_rec(p, mode, 0, &mut memo)?;
    Ok(res.into_iter().filter(|(_, c)| *c != 0).map(|(pp, c)| (c, pp)).collect())
}

const MAX_DEPTH: usize = 256;

fn reduce_rec(
    p: &Partition,
    mode: ReduceMode,
    depth: usize,
    memo: &mut HashMap<Partition, BTreeMap<PartialPairing, i64>>,
) -> Result<BTreeMap<PartialPairing, i64>> {
    if depth > MAX_DEPTH {
        return Err(Error::NonReducible(p.to_string()));
    }
    if let Some(v) = memo.get(p) {
        return Ok(v.clone());
    }
    let mut out = BTreeMap::new();
    if !embeddable(p, mode) {
        memo.insert(p.clone(), out.clone());
        return Ok(out);
    }
    match choose_delist(p, mode) {
        None => {
            out.insert(p.to_partial_pairing().expect("parts of size <= 2"), 1);
        }
        Some((k, j)) => {
            let mut star = p.clone();
            star.parts[k].retain(|&x| x != j);
            let star = Partition::new(p.n, star.parts).expect("valid partition");
            let from: Vec<Node> = p.parts[k].iter().copied().filter(|&x| x != j).collect();
            let mut acc: BTreeMap<PartialPairing, i64> = reduce_rec(&star, mode, depth + 1, memo)?;
            for (qi, q) in star.parts.iter().enumerate() {
                if *q == from {
                    continue;
                }
                let mut t = star.clone();
                t.parts[qi].push(j);
                let t = Partition::new(p.n, t.parts).expect("valid partition");
                for (pp, c) in reduce_rec(&t, mode, depth + 1, memo)? {
                    *acc.entry(pp).or_insert(0) -= c;
                }
            }
            acc.retain(|_, c| *c != 0);
            out = acc;
        }
    }
    memo.insert(p.clone(), out.clone());
    Ok(out)
}

/// `binomial(n, k)` for small arguments.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// All set partitions of `items`.
pub fn set_partitions(items: &[Node]) -> Vec<Vec<Vec<Node>>> {
    let mut out = Vec::new();
    fn go(items: &[Node], i: usize, cur: &mut Vec<Vec<Node>>, out: &mut Vec<Vec<Vec<Node>>>) {
        if i == items.len() {
            out.push(cur.clone());
            return;
        }
        for k in 0..cur.len() {
            cur[k].push(items[i]);
            go(items, i + 1, cur, out);
            cur[k].pop();
        }
        cur.push(vec![items[i]]);
        go(items, i + 1, cur, out);
        cur.pop();
    }
    go(items, 0, &mut Vec::new(), &mut out);
    out
}
