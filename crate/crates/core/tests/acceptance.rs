// SPDX-License-Identifier: MIT OR Apache-2.0
// End-to-end acceptance run. Each criterion prints one PASS/FAIL line;
// the test fails if any criterion fails.

use std::collections::HashMap;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use annulus_lerw::annular::{build_an, check_matrix, grove_polynomial, grove_polynomial_with, grove_ratio, invert_an, Basis, FnTable, GreenTable, JetForm, ResponseTable, Table};
use annulus_lerw::combinat::{binomial, reduce_partition, PartialPairing, Partition, ReduceMode};
use annulus_lerw::cutgraph::fresh_context;
use annulus_lerw::exactnum::{int, rat, ExactValue, Generator, MultiPoly, PolyZ, RatFuncZ, Rational, Ring};
use annulus_lerw::latticegreen::{gbar, gbar_prime, gbar_prime_numeric, Lattice, Pt};
use annulus_lerw::lerwintensity::{directed_intensity, evaluate, undirected_intensity, vertex_intensity, EdgeQuery, ORIGIN};
use annulus_lerw::oracle::{check_response_theorems, cut_context, green_first_order, path_edge_probabilities, random_annular_graph, response_first_order, wilson_sample, wired_grid, z_partition};
use annulus_lerw::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// tolerances
const MC_SIGMAS: f64 = 3.0;
const NUMERIC_TOL: f64 = 2e-3;
const NUMERIC_RADIUS: i64 = 10_000;
const MC_SIDE: i64 = 200;
const MC_SAMPLES: u64 = 1_000_000;
const MC_SEED: u64 = 2024;
const P11_REFERENCE: f64 = 0.221083;

const SQ: Lattice = Lattice::Square;

fn ev(s: &str) -> ExactValue {
    ExactValue::parse(s, None).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn say(line: String) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{}", line);
    let _ = out.flush();
}

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn same(what: &str, got: &ExactValue, want: &str) -> Result<(), String> {
    let w = ev(want);
    ensure(*got == w, || format!("{}: got {}, want {}", what, got.pretty(), w.pretty()))
}

fn criterion_1() -> Check {
    let rows = [
        (SQ, (1, 0), "5/16"),
        (SQ, (1, 1), "1/4 - 1/(4*pi) + 1/(2*pi^2)"),
        (SQ, (2, 0), "1/8 + 1/(4*pi) + 1/(4*pi^2) - 3/(2*pi^3) + 1/(2*pi^4)"),
        (Lattice::Triangular, (1, 0), "5/18"),
        (Lattice::Hexagonal, (1, 0), "13/36"),
    ];
    for (lat, w, want) in rows {
        let got = vertex_intensity(lat, w).map_err(|e| e.to_string())?;
        same(&format!("{lat} P{w:?}"), &got, want)?;
    }
    Ok("5 vertex intensities exact".into())
}

fn criterion_2() -> Check {
    let rows = [
        ((1, 1), (1, 0), "3/16 - 1/(2*pi)"),
        ((2, 0), (1, 0), "1/pi - 5/16"),
        ((2, 1), (1, 1), "3/16 + 1/(4*pi^2) - 5/(8*pi)"),
        ((2, 1), (2, 0), "5/8 - 3/(8*pi^2) - 7/(4*pi)"),
        ((0, 0), (1, 0), "1/4"),
        ((1, 0), (2, 0), "7/16 - 1/pi"),
        ((1, 0), (1, 1), "1/(2*pi) - 1/16"),
        ((1, 0), (0, 0), "0"),
    ];
    for (v, w, want) in rows {
        let got = directed_intensity(SQ, v, w).map_err(|e| e.to_string())?;
        same(&format!("P{v:?}->{w:?}"), &got, want)?;
    }
    Ok("8 directed edge intensities exact".into())
}

fn criterion_3() -> Check {
    let u = |lat, a, b| undirected_intensity(lat, a, b).map_err(|e: Error| e.to_string());
    // (x,x)(x,x-1) against (x,x-1)(x+1,x-1)
    let mut fam = Vec::new();
    for x in 1..=2i64 {
        let a = u(SQ, (x, x), (x, x - 1))?;
        let b = u(SQ, (x, x - 1), (x + 1, x - 1))?;
        ensure(a == b, || format!("x={x}: {} vs {}", a.pretty(), b.pretty()))?;
        fam.push(a);
    }
    same("x=1", &fam[0], "1/8")?;
    same("x=2", &fam[1], "1/8 - 1/(2*pi) + 3/(2*pi^2) - 2/pi^3 + 2/pi^4")?;
    let tri = Lattice::Triangular;
    same("tri {(1,1),(1,0)}", &u(tri, (1, 1), (1, 0))?, "2/27")?;
    same("tri {(1,0),(2,0)}", &u(tri, (1, 0), (2, 0))?, "2/27")?;
    Ok("1/8 pair, x=2 family, triangular 2/27 pair".into())
}

fn criterion_4() -> Check {
    let err = |e: Error| e.to_string();
    let (p10, p20, p11, p00) = ((1, 0), (2, 0), (1, 1), (0, 0));
    // uncut tables on {(1,0),(1,1),(0,0)}; upper triangles, the rest by symmetry
    let g0 = [(p10, p10, "0"), (p10, p11, "-1/4"), (p10, p00, "-1/4"), (p11, p11, "0"), (p11, p00, "-1/pi"), (p00, p00, "0")];
    let gp0 = [(p10, p11, "-3/32"), (p10, p00, "-5/32"), (p11, p00, "-1/(2*pi)")];
    let ctx = fresh_context(SQ, &[p10, p20, p11, p00, (2, 1)]).map_err(err)?;
    let look = |c: &annulus_lerw::cutgraph::CutContext, g: bool, u: Pt, v: Pt| -> Result<ExactValue, String> {
        let f = if g { c.g(u, v) } else { c.gp(u, v) }.map_err(err)?;
        f.to_exact().ok_or_else(|| format!("{u:?},{v:?} is not in Q[1/pi]"))
    };
    let mut count = 0;
    for (u, v, want) in g0 {
        same(&format!("G{u:?}{v:?}"), &look(&ctx, true, u, v)?, want)?;
        same(&format!("G{v:?}{u:?}"), &look(&ctx, true, v, u)?, want)?;
        same(&format!("lattice G{u:?}{v:?}"), &gbar(SQ, u, v).map_err(err)?, want)?;
        count += 2;
    }
    for (u, v, want) in gp0 {
        same(&format!("G'{u:?}{v:?}"), &look(&ctx, false, u, v)?, want)?;
        let back = look(&ctx, false, v, u)?.add(&ev(want));
        same(&format!("G'{v:?}{u:?} + G'{u:?}{v:?}"), &back, "0")?;
        count += 2;
    }
    same("G'(0,0),(2,1)", &gbar_prime(SQ, p00, (2, 1)).map_err(err)?, "1/(2*pi^2) + 1/pi - 5/32")?;
    same("ctx G'(0,0),(2,1)", &look(&ctx, false, p00, (2, 1))?, "1/(2*pi^2) + 1/pi - 5/32")?;
    count += 1;

    let cut = ctx.cut_edge(p10, p11).map_err(err)?;
    let z = cut.z_ratio().to_exact().ok_or("z ratio is not in Q[1/pi]")?;
    same("Z~/Z", &z, "1/2")?;
    let order = [p10, p20, p11, p00];
    let g1 = [
        ["1/8", "1/(2*pi) - 3/8", "-3/8", "1/(2*pi) - 3/8"],
        ["1/(2*pi) - 3/8", "1/8 + 2/pi^2 - 1/pi", "1/8 - 3/(2*pi)", "-7/8 + 2/pi^2 + 1/pi"],
        ["-3/8", "1/8 - 3/(2*pi)", "1/8", "1/8 - 3/(2*pi)"],
        ["1/(2*pi) - 3/8", "-7/8 + 2/pi^2 + 1/pi", "1/8 - 3/(2*pi)", "1/8 + 2/pi^2 - 1/pi"],
    ];
    let gp1 = [
        ["0", "1/(16*pi) - 3/32", "-3/16", "7/(16*pi) - 9/32"],
        ["3/32 - 1/(16*pi)", "0", "1/32 - 9/(16*pi)", "-9/16 + 3/(2*pi^2) + 5/(8*pi)"],
        ["3/16", "9/(16*pi) - 1/32", "0", "1/32 - 9/(16*pi)"],
        ["9/32 - 7/(16*pi)", "9/16 - 3/(2*pi^2) - 5/(8*pi)", "9/(16*pi) - 1/32", "0"],
    ];
    for (i, &u) in order.iter().enumerate() {
        for (j, &v) in order.iter().enumerate() {
            same(&format!("cut G{u:?}{v:?}"), &look(&cut, true, u, v)?, g1[i][j])?;
            same(&format!("cut G'{u:?}{v:?}"), &look(&cut, false, u, v)?, gp1[i][j])?;
            count += 2;
        }
    }
    Ok(format!("{} table entries and Z~/Z = 1/2", count + 1))
}

fn poly(s: &str) -> PolyZ {
    PolyZ::new(s.split(',').map(|c| int(c.parse().unwrap())).collect())
}

fn table(rows: &[&str]) -> Vec<Vec<PolyZ>> {
    rows.iter().map(|r| r.split('|').map(poly).collect()).collect()
}

const A4: &[&str] = &["1|0|-1", "-1|1|0", "0|0,-1|1"];
const A4_INV: &[&str] = &["1|0,1|1", "1|1|1", "0,1|0,1|1"];
const A6: &[&str] = &[
    "1|-1|0|0|-1|0|0|0|1|-1",
    "0|1|0|0|0|0|0|0,1|-1|0",
    "1|-1|1|-1|0|0|-1|0|0|0",
    "-1|0|0|1|0|0|0|0|0|1",
    "0|0|0,1|0,-1|1|0,-1|0|0|-1|0",
    "0|1|-1|0|0|1|0|0|0|0",
    "-1|0|0|0|1|0,-1|1|-1|0|0",
    "0|0|0|0,1|-1|0|0|1|0|0",
    "0|0|0,-1|0|0|0|0,1|0,-1|1|-1",
    "0|0|0|0|0|0,0,1|0,-1|0|0|1",
];
const A6_INV: &[&str] = &[
    "1,1|1,1|0,1,1|0,2|1,1|0,1,1|0,2|0,2|1,1|2",
    "0,1|1|0,1|0,1|0,1|0,0,1|0,1|0,1|1|1",
    "1,1|2|1,1|1,1|1,1|0,2|1,1|1,1|2|2",
    "1|1|0,1|1|1|0,1|0,1|0,1|1|1",
    "0,2|0,2|0,1,1|0,2|1,1|0,1,1|0,1,1|0,2|1,1|1,1",
    "1|1|1|1|1|1|1|1|1|1",
    "1,1|1,1|0,2|0,2|1,1|0,2|1,1|1,1|1,1|2",
    "0,1|0,1|0,1|0,1|1|0,1|0,1|1|1|1",
    "0,1,1|0,2|0,1,1|0,1,1|0,2|0,0,2|0,1,1|0,2|1,1|1,1",
    "0,1|0,1|0,0,1|0,0,1|0,1|0,0,1|0,1|0,1|0,1|1",
];

fn criterion_5() -> Check {
    let err = |e: Error| e.to_string();
    let displays: [(usize, Vec<Vec<PolyZ>>, Vec<Vec<PolyZ>>); 3] =
        [(2, vec![vec![poly("1")]], vec![vec![poly("1")]]), (4, table(A4), table(A4_INV)), (6, table(A6), table(A6_INV))];
    for (n, a, inv) in displays {
        let got = build_an(n).map_err(err)?;
        ensure(got.entries == a, || format!("A_{n} differs from the display"))?;
        let scale = RatFuncZ::from_poly(PolyZ::new(vec![int(1), int(-1)]).pow(n / 2 - 1));
        for (i, row) in invert_an(n).map_err(err)?.iter().enumerate() {
            for (j, f) in row.iter().enumerate() {
                ensure(f.mul(&scale) == RatFuncZ::from_poly(inv[i][j].clone()), || format!("A_{n}^-1 entry ({i},{j})"))?;
            }
        }
    }
    let mut degs = Vec::new();
    for n in [2usize, 4, 6, 8] {
        let c = check_matrix(n).map_err(err)?;
        let want = (1usize << (n - 2)) - binomial(n as u64, n as u64 / 2) as usize / 2;
        ensure(c.expected_degree == want, || format!("n={n}: expected degree {}", c.expected_degree))?;
        ensure(c.det.coeff(0) == int(1), || format!("n={n}: det(0) != 1"))?;
        ensure(c.det.degree() == Some(want), || format!("n={n}: deg det = {:?}", c.det.degree()))?;
        let lead = c.det.lead();
        ensure(lead == int(1) || lead == int(-1), || format!("n={n}: lead {lead}"))?;
        ensure(c.all_ones_row, || format!("n={n}: no all-ones row"))?;
        ensure(c.scaled_entries_ok, || format!("n={n}: scaled inverse not nonnegative integral of low degree"))?;
        ensure(c.row_values_divide, || format!("n={n}: row values at 1 do not divide (n/2-1)!"))?;
        ensure(c.all_ok(), || format!("n={n}: property suite"))?;
        degs.push(want.to_string());
    }
    Ok(format!("A_2, A_4, A_6 and inverses match; n=2..8 degrees {}", degs.join(",")))
}

// sums of products such as "2 L_{1,5} L'_{2,3} - G_{1,3}"
fn parse(s: &str) -> MultiPoly {
    let mut out = MultiPoly::zero();
    let mut sign = 1i64;
    let mut term: Vec<&str> = Vec::new();
    let flush = |term: &mut Vec<&str>, sign: i64, out: &mut MultiPoly| {
        if term.is_empty() {
            return;
        }
        let mut t = MultiPoly::constant(int(sign));
        for f in term.drain(..) {
            if let Ok(k) = f.parse::<i64>() {
                t = t.scale(&int(k));
                continue;
            }
            let (name, idx) = f.split_once("_{").unwrap();
            let (a, b) = idx.trim_end_matches('}').split_once(',').unwrap();
            let (a, b): (usize, usize) = (a.parse().unwrap(), b.parse().unwrap());
            let g = match name {
                "L" => MultiPoly::l(a, b),
                "L'" => MultiPoly::lp(a, b),
                "G" => MultiPoly::g(a, b),
                "G'" => MultiPoly::gp(a, b),
                _ => panic!("bad factor {}", f),
            };
            t = t.mul(&g);
        }
        *out = out.add(&t);
    };
    for tok in s.split_whitespace() {
        match tok {
            "+" | "-" => {
                flush(&mut term, sign, &mut out);
                sign = if tok == "+" { 1 } else { -1 };
            }
            _ => term.push(tok),
        }
    }
    flush(&mut term, sign, &mut out);
    out
}

const Z_45_12_36: &str = "L_{1,4} L_{2,6} L_{3,5} - L_{1,4} L_{2,5} L_{3,6} - L_{1,3} L_{2,6} L_{4,5} + L_{1,2} L_{3,6} L_{4,5} + L_{1,3} L_{2,5} L_{4,6}
- L_{1,2} L_{3,5} L_{4,6} - L_{3,6} L_{4,5} L'_{1,2} + L_{3,5} L_{4,6} L'_{1,2} + L_{2,6} L_{4,5} L'_{1,3} - L_{2,5} L_{4,6} L'_{1,3}
- L_{2,6} L_{3,5} L'_{1,4} + L_{2,5} L_{3,6} L'_{1,4} - L_{1,6} L_{4,5} L'_{2,3} + 2 L_{1,5} L_{4,6} L'_{2,3} - L_{1,4} L_{5,6} L'_{2,3}
+ 2 L_{5,6} L'_{1,4} L'_{2,3} - 2 L_{4,6} L'_{1,5} L'_{2,3} + L_{1,6} L_{3,5} L'_{2,4} - 2 L_{1,5} L_{3,6} L'_{2,4} + L_{1,3} L_{5,6} L'_{2,4}
- 2 L_{5,6} L'_{1,3} L'_{2,4} + 2 L_{3,6} L'_{1,5} L'_{2,4} + L_{1,4} L_{3,6} L'_{2,5} - L_{1,3} L_{4,6} L'_{2,5} + 2 L_{4,6} L'_{1,3} L'_{2,5}
- 2 L_{3,6} L'_{1,4} L'_{2,5} - L_{1,6} L_{2,5} L'_{3,4} + 2 L_{1,5} L_{2,6} L'_{3,4} - L_{1,2} L_{5,6} L'_{3,4} + 2 L_{5,6} L'_{1,2} L'_{3,4}
- 2 L_{2,6} L'_{1,5} L'_{3,4} + 2 L_{1,6} L'_{2,5} L'_{3,4} - L_{1,4} L_{2,6} L'_{3,5} + L_{1,2} L_{4,6} L'_{3,5} - 2 L_{4,6} L'_{1,2} L'_{3,5}
+ 2 L_{2,6} L'_{1,4} L'_{3,5} - 2 L_{1,6} L'_{2,4} L'_{3,5} + L_{1,3} L_{2,6} L'_{4,5} - L_{1,2} L_{3,6} L'_{4,5} + 2 L_{3,6} L'_{1,2} L'_{4,5}
- 2 L_{2,6} L'_{1,3} L'_{4,5} + 2 L_{1,6} L'_{2,3} L'_{4,5}";

const Z_42_51_36: &str = "L_{5,6} L'_{1,4} L'_{2,3} - L_{4,6} L'_{1,5} L'_{2,3} - L_{5,6} L'_{1,3} L'_{2,4} + L_{3,6} L'_{1,5} L'_{2,4} + L_{4,6} L'_{1,3} L'_{2,5}
- L_{3,6} L'_{1,4} L'_{2,5} + L_{5,6} L'_{1,2} L'_{3,4} - L_{2,6} L'_{1,5} L'_{3,4} + L_{1,6} L'_{2,5} L'_{3,4} - L_{4,6} L'_{1,2} L'_{3,5}
+ L_{2,6} L'_{1,4} L'_{3,5} - L_{1,6} L'_{2,4} L'_{3,5} + L_{3,6} L'_{1,2} L'_{4,5} - L_{2,6} L'_{1,3} L'_{4,5} + L_{1,6} L'_{2,3} L'_{4,5}";

fn pfaffian(m: &[Vec<MultiPoly>], idx: &[usize]) -> MultiPoly {
    if idx.is_empty() {
        return MultiPoly::constant(int(1));
    }
    let i = idx[0];
    let mut acc = MultiPoly::zero();
    for (k, &j) in idx.iter().enumerate().skip(1) {
        let rest: Vec<usize> = idx[1..].iter().copied().filter(|&x| x != j).collect();
        let t = m[i][j].mul(&pfaffian(m, &rest));
        acc = if k % 2 == 1 { acc.add(&t) } else { acc.sub(&t) };
    }
    acc
}

fn criterion_6() -> Check {
    let pp = |n, s| PartialPairing::parse(n, s).unwrap();
    let err = |e: Error| e.to_string();
    let mut n_checked = 0;
    for (basis, x) in [(Basis::L, "L"), (Basis::G, "G")] {
        let common = format!("- {x}'_{{1,2}} {t1} - {x}'_{{2,3}} {t2} - {x}'_{{3,1}} {t3}",
            t1 = if x == "L" { "L_{3,4}" } else { "" },
            t2 = if x == "L" { "L_{1,4}" } else { "" },
            t3 = if x == "L" { "L_{2,4}" } else { "" });
        let (a12, a13, a23) =
            if x == "L" { ("L_{1,2} L_{3,4}", "L_{1,3} L_{2,4}", "L_{1,4} L_{2,3}") } else { ("G_{1,2}", "G_{1,3}", "G_{2,3}") };
        let cases = [
            ("1,2|3,4", format!("{common} + {a12} - {a13}")),
            ("1,3|2,4", common.clone()),
            ("2,3|1,4", format!("{common} + {a23} - {a13}")),
        ];
        for (sigma, want) in cases {
            let got = grove_polynomial(&pp(4, sigma), basis).map_err(err)?;
            ensure(got == parse(&want), || format!("{x} basis {sigma}"))?;
            n_checked += 1;
        }
    }
    let a = grove_polynomial(&pp(6, "4,5|1,2|3,6"), Basis::L).map_err(err)?;
    ensure(a == parse(Z_45_12_36), || "Z[4,5|1,2|3,6] expansion".into())?;
    let lin = grove_polynomial_with(&pp(6, "4,5|1,2|3,6"), Basis::L, JetForm::Linear).map_err(err)?;
    ensure(lin == a, || "linear jet form disagrees".into())?;
    let b = grove_polynomial(&pp(6, "4,2|5,1|3,6"), Basis::L).map_err(err)?;
    ensure(b.num_terms() == 15 && b == parse(Z_42_51_36), || "Z[4,2|5,1|3,6] expansion".into())?;

    let m: Vec<Vec<MultiPoly>> = (1..=6)
        .map(|i| {
            (1..=6)
                .map(|j| match (i, j) {
                    _ if i == j => MultiPoly::zero(),
                    _ if i == 6 || j == 6 => {
                        let l = MultiPoly::l(i, j);
                        if i < j {
                            l
                        } else {
                            l.neg()
                        }
                    }
                    _ => MultiPoly::lp(i, j),
                })
                .collect()
        })
        .collect();
    let pf = pfaffian(&m, &[0, 1, 2, 3, 4, 5]);
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    for k in 0..50 {
        let vals: HashMap<Generator, ExactValue> = b
            .terms()
            .keys()
            .chain(pf.terms().keys())
            .flatten()
            .map(|(g, _)| (*g, ExactValue::from_rational(rat(rng.gen_range(-60..60), rng.gen_range(1..25)))))
            .collect();
        let f = |g: &Generator| vals[g].clone();
        ensure(b.eval(&f) == pf.eval(&f), || format!("Pfaffian identity fails at assignment {k}"))?;
    }
    Ok(format!("{n_checked} n=4 formulas, 42/15-monomial six-node expansions, Pfaffian at 50 points"))
}

fn table_from(v: Vec<Vec<Rational>>, d: Vec<Vec<Rational>>) -> FnTable<ExactValue> {
    FnTable {
        value: Box::new(move |i, j| ExactValue::from_rational(v[i][j].clone())),
        deriv: Box::new(move |i, j| ExactValue::from_rational(d[i][j].clone())),
    }
}

fn shuffled<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut nodes: Vec<usize> = (1..=n).collect();
    for i in (1..n).rev() {
        nodes.swap(i, rng.gen_range(0..=i));
    }
    nodes
}

fn random_pairing<R: Rng>(rng: &mut R, n: usize, all_listed: bool) -> Partition {
    let nodes = shuffled(rng, n);
    let k = rng.gen_range(1..=n / 2);
    let mut parts: Vec<Vec<usize>> = (0..k).map(|i| vec![nodes[2 * i], nodes[2 * i + 1]]).collect();
    for &x in &nodes[2 * k..] {
        if all_listed || rng.gen_bool(0.5) {
            parts.push(vec![x]);
        }
    }
    Partition::new(n, parts).unwrap()
}

// arbitrary part sizes, node n never alone (the Green form needs it paired)
fn random_partition<R: Rng>(rng: &mut R, n: usize) -> Partition {
    let nodes = shuffled(rng, n - 1);
    let k = rng.gen_range(1..n);
    let mut parts: Vec<Vec<usize>> = nodes[..k].iter().map(|&x| vec![x]).collect();
    parts[0].push(n);
    for &x in &nodes[k..] {
        if rng.gen_bool(0.8) {
            let j = rng.gen_range(0..k);
            parts[j].push(x);
        }
    }
    Partition::new(n, parts).unwrap()
}

fn criterion_7() -> Check {
    let err = |e: Error| e.to_string();
    let mut rng = ChaCha8Rng::seed_from_u64(2718);
    let (mut graphs, mut ratios, mut reductions) = (0, 0, 0);
    while graphs < 100 {
        let n = [2, 4, 6][graphs % 3];
        let g = random_annular_graph(&mut rng, n, 12);
        ensure(g.len() <= 12, || format!("{} vertices", g.len()))?;
        check_response_theorems(&g).map_err(|e| format!("response theorems: {e}"))?;
        let (lv, ld) = response_first_order(&g).map_err(err)?;
        let (gv, gd) = green_first_order(&g).map_err(err)?;
        let lt = table_from(lv, ld);
        let gt = table_from(gv, gd);
        let z = |p: &Partition| z_partition(&g, p).map(|l| l.eval_one()).map_err(err);
        let z_single = z(&Partition::new(n, (1..=n).map(|i| vec![i]).collect()).unwrap())?;
        let z_tree = z(&Partition::new(n, vec![(1..=n).collect()]).unwrap())?;
        for _ in 0..2 {
            let sigma = random_pairing(&mut rng, n, true);
            let want = &z(&sigma)? / &z_single;
            let pp = sigma.to_partial_pairing().unwrap();
            match grove_ratio(&pp, &Table::Response(ResponseTable { data: &lt })) {
                Ok(r) => ensure(r.as_rational() == Some(want.clone()), || format!("response form {sigma}: {} vs {want}", r.pretty()))?,
                Err(Error::NotAnnular(_)) => ensure(want == int(0), || format!("{sigma} rejected but Z = {want}"))?,
                Err(e) => return Err(e.to_string()),
            }
            ratios += 1;
            let sigma = random_pairing(&mut rng, n, false);
            let pp = sigma.to_partial_pairing().unwrap();
            if pp.pairs.iter().any(|p| p.0 == n || p.1 == n) {
                let want = &z(&sigma)? / &z_tree;
                match grove_ratio(&pp, &Table::Green(GreenTable { n, data: &gt })) {
                    Ok(r) => ensure(r.as_rational() == Some(want.clone()), || format!("green form {sigma}: {} vs {want}", r.pretty()))?,
                    Err(Error::NotAnnular(_)) => ensure(want == int(0), || format!("{sigma} rejected but Z = {want}"))?,
                    Err(e) => return Err(e.to_string()),
                }
                ratios += 1;
            }
        }
        // general partitions through the reduction, Green form
        if n >= 4 && g.boundary == g.nodes.last().copied() {
            let p = random_partition(&mut rng, n);
            let want = &z(&p)? / &z_tree;
            let mut acc = ExactValue::from_int(0);
            for (coef, pp) in reduce_partition(&p, ReduceMode::AnnularOne).map_err(err)? {
                match grove_ratio(&pp, &Table::Green(GreenTable { n, data: &gt })) {
                    Ok(r) => acc = acc.add(&r.scale(&int(coef))),
                    Err(Error::NotAnnular(_)) => {}
                    Err(e) => return Err(e.to_string()),
                }
            }
            ensure(acc.as_rational() == Some(want.clone()), || format!("reduction of {p}: {} vs {want}", acc.pretty()))?;
            reductions += 1;
        }
        graphs += 1;
    }
    ensure(reductions >= 50, || format!("only {reductions} reductions checked"))?;
    Ok(format!("{graphs} graphs, {ratios} grove ratios, {reductions} reductions"))
}

fn criterion_8() -> Check {
    let (g, ids) = wired_grid(SQ, 3);
    let edges = [((1, 1), (1, 0)), ((2, 0), (1, 0)), ((2, 1), (1, 1)), ((3, 0), (2, 0)), ((0, 0), (1, 0)), ((1, 0), (0, 0))];
    let want = path_edge_probabilities(&g, ids[&ORIGIN], &edges.map(|(v, w)| (ids[&v], ids[&w]))).map_err(|e| e.to_string())?;
    let mut cut = 0;
    for ((v, w), e) in edges.into_iter().zip(want) {
        let q = EdgeQuery::new(SQ, v, w).map_err(|e| e.to_string())?;
        if !q.cuts.is_empty() {
            cut += 1;
        }
        let ctx = cut_context(&g, &ids, &q.nodes).map_err(|e| e.to_string())?;
        let p = evaluate(&q, &ctx).map_err(|e| e.to_string())?;
        let got = p.to_exact().and_then(|x| x.as_rational()).ok_or_else(|| format!("{v:?}->{w:?} not rational"))?;
        ensure(got == e, || format!("{v:?}->{w:?}: pipeline {got}, trees {e}"))?;
    }
    ensure(cut >= 1, || "no edge needed a cut".into())?;
    Ok(format!("{} edges on the 7x7 wired grid ({cut} with cuts)", edges.len()))
}

fn criterion_9() -> Check {
    let t = wilson_sample(SQ, MC_SIDE, MC_SEED, MC_SAMPLES);
    let mut parts = Vec::new();
    for (w, exact) in [((1, 0), 5.0 / 16.0), ((1, 1), P11_REFERENCE)] {
        let p = t.vertex(w);
        let se = t.std_err(p);
        let z = (p - exact) / se;
        ensure(z.abs() <= MC_SIGMAS, || format!("P{w:?} = {p:.6} vs {exact:.6}, std err {se:.6}, z = {z:+.2}"))?;
        parts.push(format!("P{w:?}={p:.5} (z={z:+.2})"));
    }
    Ok(format!("{MC_SAMPLES} samples, side {MC_SIDE}, seed {MC_SEED}: {}", parts.join(" ")))
}

fn criterion_10() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst: f64 = 0.0;
    for lat in Lattice::ALL {
        let mut pairs = 0;
        while pairs < 20 {
            let u = (rng.gen_range(-4..=4), rng.gen_range(-4..=4));
            let v = (rng.gen_range(-4..=4), rng.gen_range(-4..=4));
            if !lat.is_vertex(u) || !lat.is_vertex(v) || u == v {
                continue;
            }
            let exact = gbar_prime(lat, u, v).map_err(|e| e.to_string())?.to_f64();
            let num = gbar_prime_numeric(lat, u, v, NUMERIC_RADIUS);
            let d = (exact - num).abs();
            ensure(d <= NUMERIC_TOL, || format!("{lat} {u:?} {v:?}: exact {exact} numeric {num}"))?;
            worst = worst.max(d);
            pairs += 1;
        }
    }
    Ok(format!("60 pairs, max deviation {worst:.2e}"))
}

#[test]
fn acceptance_criteria() {
    let all: [(usize, fn() -> Check); 10] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut failed = Vec::new();
    for (k, f) in all {
        if only.is_some_and(|o| o != k) {
            continue;
        }
        let t0 = Instant::now();
        let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = t0.elapsed().as_secs_f64();
        match r {
            Ok(m) => say(format!("criterion {k:>2}: PASS ({secs:.1}s) {m}")),
            Err(m) => {
                say(format!("criterion {k:>2}: FAIL ({secs:.1}s) {m}"));
                failed.push(k);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
