// Exact values as JSON: {"generator", "coeffs": [["k", "p/q"], ...], "float", "pretty"}.

use serde_json::{json, Value};

use annulus_lerw::exactnum::{fmt_rational, int, parse_rational, ExactValue, Rational, Tag};

pub fn to_json(v: &ExactValue) -> Value {
    let coeffs: Vec<Value> = v
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != int(0))
        .map(|(k, c)| json!([k.to_string(), fmt_rational(c)]))
        .collect();
    json!({
        "generator": v.tag().name(),
        "coeffs": coeffs,
        "float": v.to_f64(),
        "pretty": v.pretty(),
    })
}

#[cfg_attr(not(test), allow(dead_code))]
pub fn from_json(j: &Value) -> Option<ExactValue> {
    let tag = Tag::from_name(j.get("generator")?.as_str()?)?;
    let mut coeffs: Vec<Rational> = Vec::new();
    for pair in j.get("coeffs")?.as_array()? {
        let k: usize = pair.get(0)?.as_str()?.parse().ok()?;
        let c = parse_rational(pair.get(1)?.as_str()?)?;
        if coeffs.len() <= k {
            coeffs.resize(k + 1, int(0));
        }
        coeffs[k] += c;
    }
    Some(ExactValue::new(tag, coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for s in ["0", "5/16", "1/4 - 1/(4*pi) + 1/(2*pi^2)", "-25/16 + 19/(4*pi) + 1/(2*pi^4)"] {
            let v = ExactValue::parse(s, None).unwrap();
            let j = to_json(&v);
            let back = from_json(&serde_json::from_str(&j.to_string()).unwrap()).unwrap();
            assert_eq!(back, v, "{}", s);
        }
        let v = ExactValue::new(Tag::Sqrt3PiInv, vec![annulus_lerw::exactnum::rat(1, 2), int(-3)]);
        assert_eq!(from_json(&to_json(&v)).unwrap(), v);
    }
}
