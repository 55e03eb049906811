//! JSON documents emitted by the command line tool and the C interface.

use serde_json::{json, Value};

use crate::classify::{ClassificationReport, STATEMENT_TAGS};
use crate::dyadic::LocalReport;
use crate::order::Element;
use crate::sos::{Certificate, Decomposition, LengthResult, LengthValue};
use crate::text::{element_to_json, elements_to_json};

fn big(x: &num_bigint::BigInt) -> Value {
    Value::Number(x.to_string().parse().expect("integer literal"))
}

pub fn certificate_json(c: &Certificate) -> Value {
    match c {
        Certificate::CapExhausted { cap } => json!({ "reason": c.tag(), "cap": cap }),
        _ => json!({ "reason": c.tag() }),
    }
}

/// `{"target":[..],"length":n,"witness":[[..],..],"certificate":null}`; the
/// length is `null` when there is no decomposition.
pub fn length_json(r: &LengthResult) -> Value {
    let length = match r.value {
        LengthValue::Finite(n) => json!(n),
        _ => Value::Null,
    };
    json!({
        "target": element_to_json(&r.target),
        "length": length,
        "witness": r.witness.as_ref().map(|w| elements_to_json(w.terms())),
        "certificate": r.certificate.as_ref().map(certificate_json),
    })
}

pub fn decomposition_json(d: &Decomposition) -> Value {
    json!({
        "target": element_to_json(d.target()),
        "form": d.kind().tag(),
        "terms": elements_to_json(d.terms()),
        "coefficients": elements_to_json(d.coefficients()),
    })
}

/// Result of a search for a fixed number of squares or a form representation.
pub fn search_json(target: &Element, form: &str, squares: Option<usize>, padded: bool, found: Option<&Decomposition>) -> Value {
    json!({
        "target": element_to_json(target),
        "form": form,
        "squares": squares,
        "padded": padded,
        "found": found.is_some(),
        "witness": found.map(|d| elements_to_json(d.terms())),
        "coefficients": found.map(|d| elements_to_json(d.coefficients())),
    })
}

pub fn local_json(r: &LocalReport) -> Value {
    json!({
        "v2": r.v2,
        "isSquare": r.is_square,
        "isMinusSquare": r.is_minus_square,
        "representsI3": r.represents_i3,
    })
}

pub fn classification_json(r: &ClassificationReport) -> Value {
    let statements: serde_json::Map<String, Value> =
        STATEMENT_TAGS.iter().zip(r.statements.as_array()).map(|(t, b)| (t.to_string(), json!(b))).collect();
    json!({
        "target": element_to_json(&r.target),
        "norm": big(&r.target.norm()),
        "statements": statements,
        "witnesses": {
            "decomposition": r.decomposition.as_ref().map(|d| elements_to_json(d.terms())),
            "fourSquares": r.four_squares.as_ref().map(|d| elements_to_json(d.terms())),
            "unitFactor": r.unit_factor.as_ref().map(element_to_json),
            "splitting": r.splitting.as_ref().map(|(a, b)| elements_to_json(&[a.clone(), b.clone()])),
            "squareRoot": r.square_root.as_ref().map(element_to_json),
        },
        "consistent": r.consistent,
    })
}

/// Characteristic data of one element, for the `arith` command.
pub fn element_info_json(e: &Element) -> Value {
    let cp = e.char_poly();
    json!({
        "element": element_to_json(e),
        "text": e.to_string(),
        "trace": big(&e.trace()),
        "norm": big(&e.norm()),
        "charPoly": [big(&cp.s1), big(&cp.s2), big(&cp.s3)],
        "totallyPositive": e.is_totally_positive(),
        "totallyNonnegative": e.is_totally_nonnegative(),
        "unit": e.is_unit(),
        "squareRoot": e.is_square().as_ref().map(element_to_json),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::CubicOrderSpec;
    use crate::sos::length;

    #[test]
    fn length_document_shape() {
        let o = CubicOrderSpec::k49();
        let v = length_json(&length(&o.from_int(7)).unwrap());
        assert_eq!(v["target"], json!([7, 0, 0]));
        assert_eq!(v["length"], json!(4));
        assert_eq!(v["witness"].as_array().unwrap().len(), 4);
        assert!(v["certificate"].is_null());
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["target", "length", "witness", "certificate"]);
        let s = length_json(&length(&o.special()).unwrap());
        assert!(s["length"].is_null());
        assert_eq!(s["certificate"]["reason"], json!("norm-7-exceptional"));
    }

    #[test]
    fn local_document_for_two() {
        let o = CubicOrderSpec::k49();
        let r = crate::dyadic::local_report(&o.from_int(2)).unwrap();
        let v = local_json(&r);
        assert_eq!(v, json!({ "v2": 1, "isSquare": false, "isMinusSquare": false, "representsI3": true }));
    }
}
