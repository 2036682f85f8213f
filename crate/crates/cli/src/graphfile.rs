// Graph files: {"vertices": [...], "edges": [{"u", "v", "c": "p/q", "zip"}],
// "boundary": id, "nodes": [...]}. Ids may be strings or numbers.

use std::collections::HashMap;

use serde_json::Value;

use annulus_lerw::exactnum::{int, parse_rational};
use annulus_lerw::oracle::FiniteGraph;

fn id_of(v: &Value) -> Result<String, String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        _ => Err(format!("vertex ids must be strings or numbers, got {}", v)),
    }
}

pub fn parse_graph(text: &str) -> Result<FiniteGraph, String> {
    let doc: Value = serde_json::from_str(text).map_err(|e| format!("graph file is not JSON: {}", e))?;
    let verts = doc.get("vertices").and_then(Value::as_array).ok_or("missing \"vertices\" array")?;
    let mut g = FiniteGraph::new();
    let mut ids: HashMap<String, usize> = HashMap::new();
    for v in verts {
        let name = id_of(v)?;
        if ids.contains_key(&name) {
            return Err(format!("vertex {} listed twice", name));
        }
        let i = g.add_vertex(name.clone());
        ids.insert(name, i);
    }
    let look = |v: &Value| -> Result<usize, String> {
        let name = id_of(v)?;
        ids.get(&name).copied().ok_or_else(|| format!("unknown vertex {}", name))
    };
    for e in doc.get("edges").and_then(Value::as_array).ok_or("missing \"edges\" array")? {
        let u = look(e.get("u").ok_or("edge without \"u\"")?)?;
        let v = look(e.get("v").ok_or("edge without \"v\"")?)?;
        let c = match e.get("c") {
            None => int(1),
            Some(Value::String(s)) => parse_rational(s).ok_or_else(|| format!("bad conductance '{}'", s))?,
            Some(Value::Number(n)) => parse_rational(&n.to_string()).ok_or_else(|| format!("bad conductance {}", n))?,
            Some(x) => return Err(format!("bad conductance {}", x)),
        };
        if c <= int(0) {
            return Err("conductances must be positive".into());
        }
        let zip = match e.get("zip") {
            None => 0,
            Some(z) => z.as_i64().filter(|z| z.abs() <= 1).ok_or_else(|| format!("bad zip {}", z))?,
        };
        g.add_edge(u, v, c, zip);
    }
    g.boundary = match doc.get("boundary") {
        None | Some(Value::Null) => None,
        Some(b) => Some(look(b)?),
    };
    if let Some(nodes) = doc.get("nodes") {
        let nodes = nodes.as_array().ok_or("\"nodes\" must be an array")?;
        g.nodes = nodes.iter().map(look).collect::<Result<_, _>>()?;
    }
    g.validate().map_err(|e| e.to_string())?;
    Ok(g)
}
