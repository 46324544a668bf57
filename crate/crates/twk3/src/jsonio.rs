//! JSON encoding of the public types. Rationals are always strings
//! ("p" or "p/q"), integers are JSON numbers; serde_json's default map
//! keeps keys sorted, so output is deterministic.

use num::ToPrimitive;
use serde_json::{json, Map, Value};

use crate::criteria::{DivisorDatum, MinusTwoVerdict, SignedOnlyVerdict};
use crate::disc::DiscriminantForm;
use crate::isometry::{Isometry, SquareClass};
use crate::lattice::Lattice;
use crate::mat::{IMat, Int, QVec, Rat};
use crate::mukai::{BField, ExtendedVector, LbdResult};
use crate::rat::{rat_from_str, rat_to_string};
use crate::signs::SignBasis;
use crate::{Error, Result};

pub fn int_to_json(v: &Int) -> Value {
    match v.to_i64() {
        Some(n) => json!(n),
        None => json!(v.to_string()),
    }
}

pub fn int_from_json(v: &Value) -> Result<Int> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(Int::from)
            .ok_or_else(|| Error::Json("non-integral number".into())),
        Value::String(s) => s.parse().map_err(|_| Error::Json(format!("bad integer `{s}`"))),
        _ => Err(Error::Json("expected integer".into())),
    }
}

pub fn rat_to_json(v: &Rat) -> Value {
    json!(rat_to_string(v))
}

pub fn rat_from_json(v: &Value) -> Result<Rat> {
    match v {
        Value::String(s) => rat_from_str(s).map_err(|e| Error::Json(e.to_string())),
        Value::Number(n) => n
            .as_i64()
            .map(|x| Rat::from(Int::from(x)))
            .ok_or_else(|| Error::Json("non-integral number".into())),
        _ => Err(Error::Json("expected rational string".into())),
    }
}

pub fn imat_to_json(m: &IMat) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array((0..m.cols()).map(|j| int_to_json(m.get(i, j))).collect()))
            .collect(),
    )
}

pub fn imat_from_json(v: &Value) -> Result<IMat> {
    let rows = v.as_array().ok_or_else(|| Error::Json("expected matrix".into()))?;
    let mut data = Vec::new();
    for row in rows {
        let row = row.as_array().ok_or_else(|| Error::Json("expected matrix row".into()))?;
        data.push(row.iter().map(int_from_json).collect::<Result<Vec<_>>>()?);
    }
    if data.is_empty() {
        return Err(Error::Json("empty matrix".into()));
    }
    Ok(IMat::from_rows(data))
}

pub fn ivec_to_json(v: &[Int]) -> Value {
    Value::Array(v.iter().map(int_to_json).collect())
}

pub fn ivec_from_json(v: &Value) -> Result<Vec<Int>> {
    v.as_array()
        .ok_or_else(|| Error::Json("expected vector".into()))?
        .iter()
        .map(int_from_json)
        .collect()
}

pub fn qvec_to_json(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(rat_to_json).collect())
}

pub fn qvec_from_json(v: &Value) -> Result<QVec> {
    v.as_array()
        .ok_or_else(|| Error::Json("expected vector".into()))?
        .iter()
        .map(rat_from_json)
        .collect()
}

pub fn lattice_to_json(l: &Lattice) -> Value {
    let mut m = Map::new();
    m.insert("gram".into(), imat_to_json(l.gram()));
    if let Some(label) = l.label() {
        m.insert("label".into(), json!(label));
    }
    Value::Object(m)
}

pub fn lattice_from_json(v: &Value) -> Result<Lattice> {
    let gram = imat_from_json(v.get("gram").ok_or_else(|| Error::Json("missing gram".into()))?)?;
    let label = v.get("label").and_then(|l| l.as_str()).map(String::from);
    Lattice::new(gram, label)
}

pub fn isometry_to_json(iso: &Isometry) -> Value {
    json!({
        "lattice": lattice_to_json(iso.lattice()),
        "matrix": imat_to_json(iso.matrix()),
    })
}

pub fn isometry_from_json(v: &Value) -> Result<Isometry> {
    let lattice =
        lattice_from_json(v.get("lattice").ok_or_else(|| Error::Json("missing lattice".into()))?)?;
    let matrix =
        imat_from_json(v.get("matrix").ok_or_else(|| Error::Json("missing matrix".into()))?)?;
    Isometry::new(lattice, matrix)
}

pub fn square_class_to_json(c: &SquareClass) -> Value {
    match c {
        SquareClass::Real { sign } => json!({ "place": "real", "sign": sign }),
        SquareClass::Padic { p, unit, val_parity } => {
            json!({ "place": p, "unit": unit, "val_parity": val_parity })
        }
    }
}

pub fn bfield_to_json(b: &BField) -> Value {
    json!({ "coords": qvec_to_json(b.coords()) })
}

pub fn bfield_from_json(v: &Value) -> Result<BField> {
    let coords =
        qvec_from_json(v.get("coords").ok_or_else(|| Error::Json("missing coords".into()))?)?;
    if coords.len() != crate::mukai::LAMBDA_RANK {
        return Err(Error::Json("B-field needs 22 coordinates".into()));
    }
    Ok(BField::new(coords))
}

pub fn extended_to_json(v: &ExtendedVector) -> Value {
    qvec_to_json(&v.to_coords())
}

pub fn extended_from_json(v: &Value) -> Result<ExtendedVector> {
    let coords = qvec_from_json(v)?;
    if coords.len() != crate::mukai::EXTENDED_RANK {
        return Err(Error::Json("extended vector needs 24 coordinates".into()));
    }
    Ok(ExtendedVector::from_coords(&coords))
}

pub fn sign_basis_to_json(w: &SignBasis) -> Value {
    Value::Array(w.vectors().iter().map(extended_to_json).collect())
}

pub fn sign_basis_from_json(v: &Value) -> Result<SignBasis> {
    let arr = v.as_array().ok_or_else(|| Error::Json("expected sign basis".into()))?;
    if arr.len() != 4 {
        return Err(Error::Json("sign basis needs 4 vectors".into()));
    }
    let vs: Vec<ExtendedVector> =
        arr.iter().map(extended_from_json).collect::<Result<Vec<_>>>()?;
    SignBasis::new([vs[0].clone(), vs[1].clone(), vs[2].clone(), vs[3].clone()])
}

pub fn discriminant_to_json(d: &DiscriminantForm) -> Value {
    let mut m = Map::new();
    m.insert(
        "invariant_factors".into(),
        Value::Array(d.invariant_factors().iter().map(int_to_json).collect()),
    );
    m.insert(
        "generators".into(),
        Value::Array(d.generators().iter().map(|g| qvec_to_json(g)).collect()),
    );
    m.insert("order".into(), int_to_json(&d.order()));
    if let Ok(q) = d.q_values() {
        m.insert("q_values".into(), Value::Array(q.iter().map(rat_to_json).collect()));
    }
    m.insert(
        "b_matrix".into(),
        Value::Array(d.b_matrix().iter().map(|row| qvec_to_json(row)).collect()),
    );
    Value::Object(m)
}

pub fn lbd_result_to_json(r: &LbdResult) -> Value {
    json!({
        "gram": imat_to_json(&r.gram),
        "basis": Value::Array(r.basis.iter().map(extended_to_json).collect()),
        "abc": [int_to_json(&r.abc.0), int_to_json(&r.abc.1), int_to_json(&r.abc.2)],
        "g": [int_to_json(&r.g.0), int_to_json(&r.g.1), int_to_json(&r.g.2)],
    })
}

pub fn verdict_to_json(v: &SignedOnlyVerdict) -> Value {
    match v {
        SignedOnlyVerdict::ProvenSignedOnly { prime, abc, g } => json!({
            "status": "ProvenSignedOnly",
            "evidence": {
                "prime": int_to_json(prime),
                "abc": [int_to_json(&abc.0), int_to_json(&abc.1), int_to_json(&abc.2)],
                "g": [int_to_json(&g.0), int_to_json(&g.1), int_to_json(&g.2)],
            },
        }),
        SignedOnlyVerdict::NonSignedWitness { witness, basis_src, basis_tgt } => json!({
            "status": "NonSignedWitness",
            "evidence": {
                "witness": isometry_to_json(witness),
                "basis_src": sign_basis_to_json(basis_src),
                "basis_tgt": sign_basis_to_json(basis_tgt),
            },
        }),
        SignedOnlyVerdict::Unknown { searched_bound } => json!({
            "status": "Unknown",
            "evidence": { "searched_bound": searched_bound },
        }),
    }
}

pub fn minus_two_to_json(v: &MinusTwoVerdict) -> Value {
    match v {
        MinusTwoVerdict::No { reason } => json!({ "represents": false, "reason": reason }),
        MinusTwoVerdict::Yes { witness } => {
            json!({ "represents": true, "witness": ivec_to_json(witness) })
        }
    }
}

pub fn divisor_datum_to_json(d: &DivisorDatum) -> Value {
    json!({
        "m": d.m,
        "k": d.k,
        "B_m": bfield_to_json(&d.b_m),
        "eta": rat_to_json(&d.eta),
        "zeta": qvec_to_json(&d.zeta),
        "zeta_norm": rat_to_json(&d.zeta_norm),
        "zeta_norm_closed": rat_to_json(&d.zeta_norm_closed),
        "zeta_primitive": ivec_to_json(&d.zeta_primitive),
        "lambda_m": rat_to_json(&d.lambda_m),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::int;

    #[test]
    fn lattice_round_trip() {
        let l = Lattice::hyperbolic_u().twist(&int(2)).unwrap();
        let v = lattice_to_json(&l);
        let back = lattice_from_json(&v).unwrap();
        assert_eq!(back.gram(), l.gram());
        assert_eq!(back.label(), l.label());
    }

    #[test]
    fn isometry_round_trip() {
        let iso = Isometry::neg_identity(Lattice::hyperbolic_u());
        let back = isometry_from_json(&isometry_to_json(&iso)).unwrap();
        assert_eq!(back.matrix(), iso.matrix());
    }

    #[test]
    fn square_class_shape() {
        let c = SquareClass::Padic { p: 7, unit: 3, val_parity: 1 };
        assert_eq!(
            serde_json::to_string(&square_class_to_json(&c)).unwrap(),
            r#"{"place":7,"unit":3,"val_parity":1}"#
        );
        let r = SquareClass::Real { sign: -1 };
        assert_eq!(
            serde_json::to_string(&square_class_to_json(&r)).unwrap(),
            r#"{"place":"real","sign":-1}"#
        );
    }

    #[test]
    fn bfield_round_trip() {
        let b = crate::parse::parse_bfield("e2*7 + f3/7").unwrap();
        let back = bfield_from_json(&bfield_to_json(&b)).unwrap();
        assert_eq!(back, b);
    }
}
