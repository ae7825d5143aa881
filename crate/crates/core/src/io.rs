//! JSON forms of rings, elements, matrices, pairs and pairing tables.
//! Numbers are always exact strings; object keys come out sorted, so the
//! output of [`to_canonical_string`] is byte-stable.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::identify::PairingTable;
use crate::linalg::{Algebra, Matrix, ScAlgebra};
use crate::pair::DualPair;
use crate::poly::MonicPoly;
use crate::ring::{format_rational, parse_rational, Elem, FracCyclic, Ring, RingKind};

fn bad(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| bad(format!("missing field \"{key}\"")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| bad(format!("{what} must be an array")))
}

pub fn ring_to_json(r: &Ring) -> Value {
    match r.kind() {
        RingKind::Rationals => json!({"kind": "Q"}),
        RingKind::PrimeField(p) => json!({"kind": "Fp", "p": p}),
        RingKind::Extension { base, modulus } => json!({
            "kind": "ext",
            "base": ring_to_json(base),
            "modulus": modulus.iter().map(|c| elem_to_json(base, c)).collect::<Vec<_>>(),
        }),
    }
}

pub fn ring_from_json(v: &Value) -> Result<Ring> {
    match field(v, "kind")?.as_str() {
        Some("Q") => Ok(Ring::rationals()),
        Some("Fp") => {
            let p = field(v, "p")?;
            let p = p
                .as_u64()
                .or_else(|| p.as_str().and_then(|s| s.parse().ok()))
                .ok_or_else(|| bad("\"p\" must be a positive integer"))?;
            Ring::prime_field(p)
        }
        Some("ext") => {
            let base = ring_from_json(field(v, "base")?)?;
            let modulus = array(field(v, "modulus")?, "modulus")?
                .iter()
                .map(|c| elem_from_json(&base, c))
                .collect::<Result<Vec<_>>>()?;
            Ring::extension(&base, modulus)
        }
        _ => Err(bad("ring kind must be one of Q, Fp, ext")),
    }
}

pub fn elem_to_json(r: &Ring, x: &Elem) -> Value {
    match x {
        Elem::Rat(q) => Value::String(format_rational(q)),
        Elem::Mod(v) => Value::String(v.to_string()),
        Elem::Ext(c) => {
            let base = r.base().expect("extension element");
            Value::Array(c.iter().map(|y| elem_to_json(base, y)).collect())
        }
    }
}

pub fn elem_from_json(r: &Ring, v: &Value) -> Result<Elem> {
    match (r.kind(), v) {
        (RingKind::Extension { base, modulus }, Value::Array(c)) => {
            if c.len() != modulus.len() {
                return Err(bad(format!("expected {} coordinates, got {}", modulus.len(), c.len())));
            }
            Ok(Elem::Ext(c.iter().map(|y| elem_from_json(base, y)).collect::<Result<Vec<_>>>()?))
        }
        (RingKind::Extension { .. }, _) => {
            let inner = r.base().expect("extension");
            r.embed(&elem_from_json(inner, v)?, inner)
        }
        (_, Value::String(s)) => r.from_rational(&parse_rational(s)?),
        (_, Value::Number(n)) => r.from_rational(&parse_rational(&n.to_string())?),
        _ => Err(bad(format!("cannot read {v} as an element of {r}"))),
    }
}

pub fn vec_to_json(r: &Ring, xs: &[Elem]) -> Value {
    Value::Array(xs.iter().map(|x| elem_to_json(r, x)).collect())
}

pub fn vec_from_json(r: &Ring, v: &Value) -> Result<Vec<Elem>> {
    array(v, "vector")?.iter().map(|x| elem_from_json(r, x)).collect()
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    Value::Array(m.to_rows().iter().map(|row| vec_to_json(m.ring(), row)).collect())
}

pub fn matrix_from_json(r: &Ring, v: &Value) -> Result<Matrix> {
    let rows = array(v, "matrix")?
        .iter()
        .map(|row| vec_from_json(r, row))
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(r, rows)
}

fn sc_to_json(a: &ScAlgebra) -> Value {
    let r = a.ring();
    Value::Array(
        a.tensor_nested()
            .iter()
            .map(|m| Value::Array(m.iter().map(|v| vec_to_json(r, v)).collect()))
            .collect(),
    )
}

fn sc_from_json(r: &Ring, t: &Value, unit: &Value) -> Result<ScAlgebra> {
    let tensor = array(t, "structure constants")?
        .iter()
        .map(|m| array(m, "structure constants")?.iter().map(|v| vec_from_json(r, v)).collect())
        .collect::<Result<Vec<Vec<Vec<Elem>>>>>()?;
    ScAlgebra::from_tensor(r, tensor, vec_from_json(r, unit)?)
}

fn side_to_json(out: &mut Map<String, Value>, a: &Algebra, poly_key: &str, sc_key: &str, unit_key: &str) {
    let r = a.sc.ring();
    match &a.monic {
        Some(f) => {
            out.insert(poly_key.into(), vec_to_json(r, &f.coeffs));
        }
        None => {
            out.insert(sc_key.into(), sc_to_json(&a.sc));
            out.insert(unit_key.into(), vec_to_json(r, a.sc.unit()));
        }
    }
}

fn side_from_json(r: &Ring, v: &Value, poly_key: &str, sc_key: &str, unit_key: &str) -> Result<Algebra> {
    if let Some(f) = v.get(poly_key) {
        return Ok(Algebra::monogenic(MonicPoly::new(r, vec_from_json(r, f)?)));
    }
    let sc = sc_from_json(r, field(v, sc_key)?, field(v, unit_key)?)?;
    let bad_axioms = sc.axiom_violations();
    if !bad_axioms.is_empty() {
        return Err(bad(format!("\"{sc_key}\" is not a commutative unital algebra: {}", bad_axioms.join("; "))));
    }
    Ok(Algebra::from_sc(sc))
}

pub fn pair_to_json(p: &DualPair) -> Value {
    let mut out = Map::new();
    out.insert("base".into(), ring_to_json(p.base()));
    side_to_json(&mut out, p.a(), "f", "sc_a", "unit_a");
    side_to_json(&mut out, p.b(), "g", "sc_b", "unit_b");
    out.insert("phi".into(), matrix_to_json(p.phi()));
    Value::Object(out)
}

pub fn pair_from_json(v: &Value) -> Result<DualPair> {
    let r = ring_from_json(field(v, "base")?)?;
    let a = side_from_json(&r, v, "f", "sc_a", "unit_a")?;
    let b = side_from_json(&r, v, "g", "sc_b", "unit_b")?;
    let phi = matrix_from_json(&r, field(v, "phi")?)?;
    DualPair::new(a, b, phi)
}

pub fn table_to_json(t: &PairingTable) -> Value {
    json!({
        "n": t.n(),
        "T": t.rows().iter().map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

pub fn table_from_json(v: &Value) -> Result<PairingTable> {
    let n = field(v, "n")?.as_u64().ok_or_else(|| bad("\"n\" must be a positive integer"))? as usize;
    let rows = array(field(v, "T")?, "T")?
        .iter()
        .map(|row| {
            array(row, "table row")?
                .iter()
                .map(|x| FracCyclic::parse(x.as_str().ok_or_else(|| bad("table entries are \"num/den\" strings"))?))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    if rows.len() != n {
        return Err(Error::MalformedTable(format!("\"n\" is {n} but the table has {} rows", rows.len())));
    }
    PairingTable::new(rows)
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

pub fn parse(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| bad(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use num_rational::BigRational;

    fn round_trip(p: &DualPair) {
        let s = to_canonical_string(&pair_to_json(p));
        let back = pair_from_json(&parse(&s).unwrap()).unwrap();
        assert_eq!(&back, p);
        assert_eq!(to_canonical_string(&pair_to_json(&back)), s);
    }

    #[test]
    fn pairs_round_trip() {
        let q = Ring::rationals();
        round_trip(&gallery::e2_pair(&BigRational::new(3.into(), 7.into())).unwrap());
        round_trip(&gallery::supersingular());
        round_trip(&gallery::mu_constant_pair(3, &q).unwrap());
        round_trip(&gallery::mu_pair_idempotent(4, &Ring::prime_field(5).unwrap()).unwrap());
        let l = Ring::galois_field(3, 2).unwrap();
        round_trip(&gallery::mu_constant_pair(2, &q).unwrap().base_change(&Ring::quadratic(&BigRational::from_integer(5.into()))).unwrap());
        round_trip(&gallery::trivial(&l));
    }

    #[test]
    fn documented_format() {
        let p = gallery::mu_constant_pair(2, &Ring::rationals()).unwrap();
        let v = pair_to_json(&p);
        assert_eq!(v["base"], json!({"kind": "Q"}));
        assert_eq!(v["f"], json!(["-1/1", "0/1"]));
        assert_eq!(v["phi"], json!([["1/1", "0/1"], ["1/1", "1/1"]]));
        let text = r#"{"base":{"kind":"Fp","p":7},"f":[6,0],"g":["0","6"],"phi":[["1","0"],["1","1"]]}"#;
        let p7 = pair_from_json(&parse(text).unwrap()).unwrap();
        assert_eq!(p7.rank(), 2);
        assert!(p7.verify_axioms().passed());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(ring_from_json(&json!({"kind": "Fp", "p": 6})), Err(Error::CompositeModulus(_))));
        assert!(pair_from_json(&json!({"base": {"kind": "Q"}, "f": ["0"]})).is_err());
        let t = json!({"n": 2, "T": [["0/1", "1/3"], ["0/1", "0/1"]]});
        assert!(matches!(table_from_json(&t), Err(Error::MalformedTable(_))));
        let t = json!({"n": 2, "T": [["0/1", "0/1"], ["0/1", "1/2"]]});
        assert_eq!(table_from_json(&t).unwrap().get(1, 1), FracCyclic::new(1, 2));
    }
}
