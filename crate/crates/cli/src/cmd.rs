use std::fmt::Write as _;
use std::path::Path;

use serde_json::{json, Value};

use annulus_lerw::annular::{build_an, check_matrix, grove_ratio, invert_an, render_matrix, FnTable, GreenTable, Table};
use annulus_lerw::combinat::{binomial, reduce_partition, Partition, ReduceMode};
use annulus_lerw::exactnum::{fmt_rational, int, ExactValue, Rational};
use annulus_lerw::latticegreen::{potential_kernel, Lattice, Pt};
use annulus_lerw::lerwintensity::{directed_intensity, edge_intensity, vertex_intensity, EdgeQuery, ORIGIN};
use annulus_lerw::oracle::{green_first_order, wilson_sample, z_partition, FiniteGraph};
use annulus_lerw::Error;

use crate::exactjson::to_json;
use crate::graphfile::parse_graph;

pub enum Failure {
    Usage(String),
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Invalid(m) | Error::Parse(m) => Failure::Usage(m),
            e => Failure::Compute(e),
        }
    }
}

type Out = Result<String, Failure>;

fn show(v: &ExactValue, json: bool) -> String {
    if json {
        to_json(v).to_string()
    } else {
        v.pretty()
    }
}

pub fn potential(lat: Lattice, p: Pt, json: bool) -> Out {
    Ok(show(&potential_kernel(lat, p)?, json))
}

pub fn intensity(
    lat: Lattice,
    edge: Option<(Pt, Pt)>,
    vertex: Option<Pt>,
    cuts: Option<Vec<(Pt, Pt)>>,
    nodes: Option<Vec<Pt>>,
    json: bool,
) -> Out {
    let v = match (edge, vertex) {
        (Some((v, w)), _) => match (cuts, nodes) {
            (None, _) => directed_intensity(lat, v, w)?,
            (Some(c), None) => edge_intensity(&EdgeQuery::with_cuts(lat, v, w, c)?)?,
            (Some(c), Some(n)) => edge_intensity(&EdgeQuery::with_nodes(lat, v, w, c, n)?)?,
        },
        (None, Some(w)) => vertex_intensity(lat, w)?,
        (None, None) => return Err(Failure::Usage("give --edge or --vertex".into())),
    };
    Ok(show(&v, json))
}

pub fn annular(n: usize, inverse: bool, check: bool, json: bool) -> Out {
    let a = build_an(n)?;
    let labels: Vec<String> = a.cols.iter().map(|c| c.to_string()).collect();
    let mut out = String::new();
    if json {
        let entries: Vec<Vec<String>> = if inverse {
            invert_an(n)?.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
        } else {
            a.entries.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
        };
        out.push_str(&json!({"n": n, "inverse": inverse, "columns": labels, "entries": entries}).to_string());
    } else if inverse {
        out.push_str(&render_matrix(&invert_an(n)?, |x| x.to_string()));
    } else {
        let _ = writeln!(out, "columns: {}", labels.join(" "));
        out.push_str(&a.render());
    }
    if check {
        let report = check_an(n)?;
        if !out.is_empty() && !out.ends_with('\n') {
            out.push('\n');
        }
        out.push_str(&report.0);
        if !report.1 {
            print!("{}", out);
            return Err(Failure::Compute(Error::Mismatch(format!("A_{} property check failed", n))));
        }
    }
    Ok(out.trim_end().to_string())
}

fn check_an(n: usize) -> Result<(String, bool), Error> {
    let c = check_matrix(n)?;
    let mut out = String::new();
    let mut line = |name: String, pass: bool| {
        let _ = writeln!(out, "{}: {}", name, if pass { "ok" } else { "FAILED" });
    };
    let half = binomial(n as u64, n as u64 / 2) / 2;
    let deg = c.det.degree().unwrap_or(0);
    line(format!("size {} = C({},{})/2", c.size, n, n / 2), c.size as u64 == half);
    line(format!("deg det A_{} = {} = 2^{} - {}", n, deg, n - 2, half), deg == c.expected_degree);
    line(format!("det(0) = {}, leading coefficient {}", fmt_rational(&c.det.coeff(0)), fmt_rational(&c.det.lead())), c.det_ok());
    line(format!("det A_{} = +-(1 - zeta)^{}", n, c.expected_degree), c.closed_form_ok());
    line("all-ones row of (1 - zeta)^(n/2-1) A^-1".into(), c.all_ones_row);
    line(format!("(1 - zeta)^{} A^-1 has nonnegative integer entries of degree <= {}", n / 2 - 1, n / 2 - 1), c.scaled_entries_ok);
    let vals: Vec<String> = c.row_values.iter().map(|v| v.as_ref().map_or("-".into(), fmt_rational)).collect();
    line(format!("row values at zeta = 1 [{}] divide {}!", vals.join(" "), n / 2 - 1), c.row_values_divide);
    Ok((out, c.all_ok()))
}

fn laurent_json(z: &annulus_lerw::oracle::LaurentZ) -> Value {
    Value::Array(z.terms().map(|(k, c)| json!([k.to_string(), fmt_rational(c)])).collect())
}

pub fn grove(path: &Path, sigma: &str) -> Out {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {}", path.display(), e)))?;
    let g = parse_graph(&text).map_err(Failure::Usage)?;
    let n = g.nodes.len();
    if n == 0 {
        return Err(Failure::Usage("graph file lists no nodes".into()));
    }
    let p = Partition::parse(n, sigma)?;
    let z = z_partition(&g, &p)?;
    let tree = z_partition(&g, &Partition::new(n, vec![(1..=n).collect()])?)?.eval_one();
    let ratio = if tree == int(0) { None } else { Some(z.eval_one() / &tree) };
    let mut doc = json!({
        "type": p.to_string(),
        "enumeration": {
            "laurent": laurent_json(&z),
            "pretty": z.to_string(),
            "at_one": fmt_rational(&z.eval_one()),
            "per_tree": ratio.as_ref().map(fmt_rational),
        },
    });
    if g.boundary.is_some() && g.boundary == g.nodes.last().copied() {
        let piped = pipeline(&g, &p);
        doc["pipeline"] = match &piped {
            Ok(r) => json!({"per_tree": fmt_rational(r), "agrees": ratio.as_ref() == Some(r)}),
            Err(e) => json!({"error": e.to_string()}),
        };
    }
    Ok(doc.to_string())
}

// Z[sigma]/Z[tree] from the Green's data at the nodes
fn pipeline(g: &FiniteGraph, p: &Partition) -> Result<Rational, Error> {
    let n = g.nodes.len();
    let (v, d) = green_first_order(g)?;
    let table = FnTable {
        value: Box::new(move |i, j| ExactValue::from_rational(v[i][j].clone())),
        deriv: Box::new(move |i, j| ExactValue::from_rational(d[i][j].clone())),
    };
    let green = Table::Green(GreenTable { n, data: &table });
    let mut acc = ExactValue::from_int(0);
    for (coef, pp) in reduce_partition(p, ReduceMode::AnnularOne)? {
        match grove_ratio(&pp, &green) {
            Ok(r) => acc = acc.add(&r.scale(&int(coef))),
            Err(Error::NotAnnular(_)) => {}
            Err(e) => return Err(e),
        }
    }
    acc.as_rational().ok_or_else(|| Error::Mismatch("pipeline value is not rational".into()))
}

struct Row {
    name: String,
    count: f64,
    exact: Option<ExactValue>,
}

pub fn sample(lat: Lattice, side: i64, samples: u64, seed: u64, json: bool) -> Out {
    if side < 2 {
        return Err(Failure::Usage(format!("--side {} is too small", side)));
    }
    let t = wilson_sample(lat, side, seed, samples);
    let mut rows = Vec::new();
    if samples > 0 {
        let verts: Vec<Pt> = match lat {
            Lattice::Square => vec![(1, 0), (1, 1), (2, 0)],
            _ => vec![(1, 0)],
        };
        for w in verts {
            rows.push(Row { name: format!("vertex {:?}", w), count: t.vertex(w), exact: vertex_intensity(lat, w).ok() });
        }
        let mut edges = vec![(ORIGIN, (1, 0))];
        if lat == Lattice::Square {
            edges.extend([((1, 1), (1, 0)), ((2, 0), (1, 0))]);
        }
        for (v, w) in edges {
            if lat.adjacent(v, w) {
                rows.push(Row {
                    name: format!("edge {:?}->{:?}", v, w),
                    count: t.edge(v, w),
                    exact: directed_intensity(lat, v, w).ok(),
                });
            }
        }
    }
    if json {
        let list: Vec<Value> = rows
            .iter()
            .map(|r| {
                let se = t.std_err(r.count);
                json!({
                    "name": r.name,
                    "empirical": r.count,
                    "std_err": se,
                    "exact": r.exact.as_ref().map(to_json),
                    "z": r.exact.as_ref().map(|e| if se > 0.0 { (r.count - e.to_f64()) / se } else { 0.0 }),
                })
            })
            .collect();
        let doc = json!({"lattice": lat.name(), "side": side, "samples": samples, "seed": seed, "rows": list});
        return Ok(doc.to_string());
    }
    let mut out = format!("# {} side={} samples={} seed={}\n", lat, side, samples, seed);
    let _ = writeln!(out, "{:<24} {:>10} {:>10} {:>10} {:>7}", "quantity", "empirical", "std.err", "exact", "z");
    for r in &rows {
        let se = t.std_err(r.count);
        let (ex, z) = match &r.exact {
            Some(e) => {
                let z = if se > 0.0 { (r.count - e.to_f64()) / se } else { 0.0 };
                (format!("{:.6}", e.to_f64()), format!("{:+.2}", z))
            }
            None => ("-".into(), "-".into()),
        };
        let _ = writeln!(out, "{:<24} {:>10.6} {:>10.6} {:>10} {:>7}", r.name, r.count, se, ex, z);
    }
    Ok(out.trim_end().to_string())
}
