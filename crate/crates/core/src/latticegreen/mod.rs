//! Potential kernels and zipper derivatives on the square, triangular and
//! hexagonal lattices.
//!
//! Points are integer pairs `(x, y)` in lattice coordinates. The embedding is
//! `(x, y)` for the square lattice, `(x + y/2, y*sqrt3/2)` for the triangular
//! lattice and `(x - y/2, y*sqrt3/2)` for the hexagonal one, where points with
//! `x + y = 2 (mod 3)` are not vertices. Class 0 is black, class 1 white.

mod derivative;
pub(crate) mod geometry;
mod kernel;

pub use derivative::{gbar_prime, gbar_prime_logged, gbar_prime_numeric, zipper_edges, Term, TermKind};
pub use kernel::{
    gbar, potential_kernel, potential_kernel_f64, potential_kernel_in, triangular_axis, DEFAULT_WINDOW,
};

use crate::exactnum::Tag;

pub type Pt = (i64, i64);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Lattice {
    Square,
    Triangular,
    Hexagonal,
}

const SQ_DIRS: [Pt; 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];
const TRI_DIRS: [Pt; 6] = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)];
const HEX_BLACK: [Pt; 3] = [(1, 0), (0, 1), (-1, -1)];
const HEX_WHITE: [Pt; 3] = [(-1, 0), (0, -1), (1, 1)];

impl Lattice {
    pub const ALL: [Lattice; 3] = [Lattice::Square, Lattice::Triangular, Lattice::Hexagonal];

    pub fn name(self) -> &'static str {
        match self {
            Lattice::Square => "square",
            Lattice::Triangular => "triangular",
            Lattice::Hexagonal => "hexagonal",
        }
    }

    pub fn from_name(s: &str) -> Option<Lattice> {
        match s.to_ascii_lowercase().as_str() {
            "square" | "z2" => Some(Lattice::Square),
            "triangular" | "tri" => Some(Lattice::Triangular),
            "hexagonal" | "hex" | "honeycomb" => Some(Lattice::Hexagonal),
            _ => None,
        }
    }

    pub fn tag(self) -> Tag {
        match self {
            Lattice::Square => Tag::PiInv,
            _ => Tag::Sqrt3PiInv,
        }
    }

    pub fn degree(self) -> usize {
        match self {
            Lattice::Square => 4,
            Lattice::Triangular => 6,
            Lattice::Hexagonal => 3,
        }
    }

    /// `(x + y) mod 3` on the hexagonal lattice, 0 elsewhere.
    pub fn class(self, p: Pt) -> i64 {
        match self {
            Lattice::Hexagonal => (p.0 + p.1).rem_euclid(3),
            _ => 0,
        }
    }

    pub fn is_vertex(self, p: Pt) -> bool {
        self.class(p) != 2
    }

    pub fn neighbors(self, p: Pt) -> Vec<Pt> {
        let dirs: &[Pt] = match self {
            Lattice::Square => &SQ_DIRS,
            Lattice::Triangular => &TRI_DIRS,
            Lattice::Hexagonal => match self.class(p) {
                0 => &HEX_BLACK,
                1 => &HEX_WHITE,
                _ => &[],
            },
        };
        dirs.iter().map(|d| (p.0 + d.0, p.1 + d.1)).collect()
    }

    pub fn adjacent(self, p: Pt, q: Pt) -> bool {
        self.neighbors(p).contains(&q)
    }

    /// Horizontal shear of the embedding: affine x = x + shear*y/2.
    pub(crate) fn shear(self) -> i64 {
        match self {
            Lattice::Square => 0,
            Lattice::Triangular => 1,
            Lattice::Hexagonal => -1,
        }
    }

    /// Euclidean position of a point.
    pub fn position(self, p: Pt) -> (f64, f64) {
        let (x, y) = (p.0 as f64, p.1 as f64);
        match self {
            Lattice::Square => (x, y),
            _ => (x + self.shear() as f64 * y / 2.0, y * 3f64.sqrt() / 2.0),
        }
    }

    /// `p -> c - p` is the half-turn about the point where the zipper starts
    /// (square, hexagonal) or about the midpoint of the edge below it
    /// (triangular).
    pub fn half_turn_center(self) -> Pt {
        match self {
            Lattice::Square => (1, 1),
            Lattice::Triangular => (1, 0),
            Lattice::Hexagonal => (2, 2),
        }
    }

    /// Lattice automorphisms fixing the origin.
    pub fn point_group(self) -> Vec<fn(Pt) -> Pt> {
        match self {
            Lattice::Square => vec![
                |(x, y)| (x, y),
                |(x, y)| (-y, x),
                |(x, y)| (-x, -y),
                |(x, y)| (y, -x),
                |(x, y)| (y, x),
                |(x, y)| (-x, y),
                |(x, y)| (-y, -x),
                |(x, y)| (x, -y),
            ],
            Lattice::Triangular => vec![
                |(x, y)| (x, y),
                |(x, y)| (-y, x + y),
                |(x, y)| (-x - y, x),
                |(x, y)| (-x, -y),
                |(x, y)| (y, -x - y),
                |(x, y)| (x + y, -x),
                |(x, y)| (y, x),
                |(x, y)| (x + y, -y),
                |(x, y)| (x, -x - y),
                |(x, y)| (-y, -x),
                |(x, y)| (-x - y, y),
                |(x, y)| (-x, x + y),
            ],
            Lattice::Hexagonal => vec![
                |(x, y)| (x, y),
                |(x, y)| (-y, x - y),
                |(x, y)| (y - x, -x),
                |(x, y)| (y, x),
                |(x, y)| (x - y, -y),
                |(x, y)| (-x, y - x),
            ],
        }
    }

    /// Vertices of the face the zipper starts in, counterclockwise.
    pub fn start_face(self) -> Vec<Pt> {
        match self {
            Lattice::Square => vec![(0, 0), (1, 0), (1, 1), (0, 1)],
            Lattice::Triangular => vec![(0, 0), (1, 0), (0, 1)],
            Lattice::Hexagonal => vec![(1, 0), (2, 1), (2, 2), (1, 2), (0, 1), (0, 0)],
        }
    }
}

impl std::fmt::Display for Lattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}
