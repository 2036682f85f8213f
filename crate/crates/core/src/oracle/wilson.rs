// Loop-erased walks from the origin to the wired boundary of a box; the
// loop erasure is the origin-to-root path of the uniform spanning tree
// that Wilson's algorithm would produce with the origin walked first.

use std::collections::HashMap;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::latticegreen::{Lattice, Pt};

const OUT: u32 = u32::MAX;
const CHUNK: u64 = 1 << 12;

/// Empirical LERW counts: vertex visits, directed edge traversals and the
/// last vertex before the walk leaves the box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntensityTable {
    pub lattice: Lattice,
    pub side: i64,
    pub seed: u64,
    pub samples: u64,
    pub vertices: HashMap<Pt, u64>,
    pub edges: HashMap<(Pt, Pt), u64>,
    pub exits: HashMap<Pt, u64>,
}

impl IntensityTable {
    pub fn vertex(&self, p: Pt) -> f64 {
        self.vertices.get(&p).copied().unwrap_or(0) as f64 / self.samples.max(1) as f64
    }

    pub fn edge(&self, v: Pt, w: Pt) -> f64 {
        self.edges.get(&(v, w)).copied().unwrap_or(0) as f64 / self.samples.max(1) as f64
    }

    /// Binomial standard error of a frequency estimate.
    pub fn std_err(&self, p: f64) -> f64 {
        (p * (1.0 - p) / self.samples.max(1) as f64).sqrt()
    }
}

struct Grid {
    half: i64,
    w: i64,
    deg: usize,
    // nbr[v * deg + k], OUT outside the box, unused for non-vertices
    nbr: Vec<u32>,
    origin: u32,
}

impl Grid {
    fn new(lat: Lattice, half: i64) -> Grid {
        let w = 2 * half + 1;
        let deg = lat.degree();
        let mut nbr = vec![OUT; (w * w) as usize * deg];
        let idx = |p: Pt| ((p.1 + half) * w + (p.0 + half)) as usize;
        for y in -half..=half {
            for x in -half..=half {
                if !lat.is_vertex((x, y)) {
                    continue;
                }
                for (k, q) in lat.neighbors((x, y)).into_iter().enumerate() {
                    if q.0.abs() <= half && q.1.abs() <= half {
                        nbr[idx((x, y)) * deg + k] = idx(q) as u32;
                    }
                }
            }
        }
        Grid { half, w, deg, nbr, origin: idx((0, 0)) as u32 }
    }

    fn pt(&self, i: u32) -> Pt {
        let i = i as i64;
        (i % self.w - self.half, i / self.w - self.half)
    }
}

struct Counts {
    vertex: Vec<u64>,
    // edge[v * deg + k] for the step from v to its k-th neighbor
    edge: Vec<u64>,
}

fn run_chunk(grid: &Grid, seed: u64, chunk: u64, n: u64) -> Counts {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    let cells = (grid.w * grid.w) as usize;
    let deg = grid.deg;
    let mut c = Counts { vertex: vec![0; cells], edge: vec![0; cells * deg] };
    let mut pos = vec![0u32; cells];
    let mut path: Vec<u32> = Vec::with_capacity(4096);
    let mut dirs: Vec<u8> = Vec::with_capacity(4096);
    // rejection threshold for 8-bit draws
    let limit = (256 / deg * deg) as u32;
    let mut bits = 0u64;
    let mut left = 0;
    for _ in 0..n {
        path.clear();
        dirs.clear();
        path.push(grid.origin);
        pos[grid.origin as usize] = 0;
        let mut v = grid.origin;
        loop {
            let k = loop {
                if left == 0 {
                    bits = rng.next_u64();
                    left = 8;
                }
                let b = (bits & 0xff) as u32;
                bits >>= 8;
                left -= 1;
                if b < limit {
                    break (b as usize) % deg;
                }
            };
            let u = grid.nbr[v as usize * deg + k];
            if u == OUT {
                dirs.push(k as u8);
                break;
            }
            let p = pos[u as usize] as usize;
            if p < path.len() && path[p] == u {
                path.truncate(p + 1);
                dirs.truncate(p);
            } else {
                pos[u as usize] = path.len() as u32;
                path.push(u);
                dirs.push(k as u8);
            }
            v = u;
        }
        for (i, &x) in path.iter().enumerate() {
            c.vertex[x as usize] += 1;
            c.edge[x as usize * deg + dirs[i] as usize] += 1;
        }
    }
    c
}

fn run_all(grid: &Grid, seed: u64, samples: u64, parallel: bool) -> Vec<Counts> {
    let chunks: Vec<(u64, u64)> =
        (0..samples.div_ceil(CHUNK)).map(|i| (i, CHUNK.min(samples - i * CHUNK))).collect();
    #[cfg(feature = "parallel")]
    if parallel {
        use rayon::prelude::*;
        return chunks.par_iter().map(|&(i, n)| run_chunk(grid, seed, i, n)).collect();
    }
    let _ = parallel;
    chunks.iter().map(|&(i, n)| run_chunk(grid, seed, i, n)).collect()
}

/// Samples `samples` loop-erased walks from the origin on the wired box
/// `|x|, |y| <= side/2`. Chunk `i` of 4096 walks draws from stream `i` of a
/// ChaCha8 generator seeded with `seed`, so the result does not depend on
/// the thread count.
pub fn wilson_sample(lat: Lattice, side: i64, seed: u64, samples: u64) -> IntensityTable {
    wilson_sample_with(lat, side, seed, samples, cfg!(feature = "parallel"))
}

/// [`wilson_sample`] with the thread pool switched on or off at run time.
/// Without the `parallel` feature the flag is ignored. Both paths give the
/// same table.
pub fn wilson_sample_with(lat: Lattice, side: i64, seed: u64, samples: u64, parallel: bool) -> IntensityTable {
    let grid = Grid::new(lat, side / 2);
    let parts = run_all(&grid, seed, samples, parallel);
    let cells = (grid.w * grid.w) as usize;
    let mut vertex = vec![0u64; cells];
    let mut edge = vec![0u64; cells * grid.deg];
    for p in parts {
        for (a, b) in vertex.iter_mut().zip(p.vertex) {
            *a += b;
        }
        for (a, b) in edge.iter_mut().zip(p.edge) {
            *a += b;
        }
    }
    let mut out = IntensityTable {
        lattice: lat,
        side,
        seed,
        samples,
        vertices: HashMap::new(),
        edges: HashMap::new(),
        exits: HashMap::new(),
    };
    for (i, &n) in vertex.iter().enumerate() {
        if n > 0 {
            out.vertices.insert(grid.pt(i as u32), n);
        }
    }
    for (j, &n) in edge.iter().enumerate() {
        if n == 0 {
            continue;
        }
        let v = (j / grid.deg) as u32;
        let u = grid.nbr[j];
        if u == OUT {
            *out.exits.entry(grid.pt(v)).or_insert(0) += n;
        } else {
            out.edges.insert((grid.pt(v), grid.pt(u)), n);
        }
    }
    out
}
