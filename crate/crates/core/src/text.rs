//! Text and JSON forms of elements and orders.
//!
//! Element text: `a + b*r + c*r^2`, integer literals, optional whitespace;
//! terms may appear in any order, repeat, omit the coefficient (`r^2`) or use
//! higher powers of `r`, which are reduced in the order. Element JSON:
//! `[a, b, c]`. Order JSON: `{"p":1,"q":-2,"r":-1}`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde_json::{json, Number, Value};

use crate::error::{Error, Result};
use crate::order::{CubicOrderSpec, Element};

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.coords();
        write!(f, "{a}")?;
        for (coef, power) in [(b, "r"), (c, "r^2")] {
            if coef.is_negative() {
                write!(f, " - {}*{power}", -coef)?;
            } else {
                write!(f, " + {coef}*{power}")?;
            }
        }
        Ok(())
    }
}

fn parse_error(position: usize, message: impl Into<String>) -> Error {
    Error::Parse { position, message: message.into() }
}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(parse_error(start, "expected an integer"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("digits form an integer"))
    }

    /// `r` optionally followed by `^n`; returns the exponent.
    fn power(&mut self) -> Result<u32> {
        let at = self.pos;
        if !self.eat(b'r') {
            return Err(parse_error(at, "expected 'r'"));
        }
        if self.eat(b'^') {
            let at = self.pos;
            let e = self.integer()?;
            return u32::try_from(e).map_err(|_| parse_error(at, "exponent too large"));
        }
        Ok(1)
    }
}

/// Parses the text syntax or the JSON triple syntax.
pub fn parse_element(order: &CubicOrderSpec, text: &str) -> Result<Element> {
    if text.trim_start().starts_with('[') {
        let v: Value = serde_json::from_str(text).map_err(|e| parse_error(e.column().saturating_sub(1), e.to_string()))?;
        return element_from_json(order, &v);
    }
    let mut cur = Cursor { src: text.as_bytes(), pos: 0 };
    let mut acc = order.zero();
    let mut first = true;
    loop {
        let negative = match cur.peek() {
            None if first => return Err(parse_error(cur.pos, "empty expression")),
            None => break,
            Some(b'+') => {
                cur.pos += 1;
                false
            }
            Some(b'-') => {
                cur.pos += 1;
                true
            }
            Some(_) if first => false,
            Some(c) => return Err(parse_error(cur.pos, format!("expected '+' or '-', found '{}'", c as char))),
        };
        first = false;
        let term = match cur.peek() {
            Some(b'r') => order.theta().pow(cur.power()?),
            Some(c) if c.is_ascii_digit() => {
                let k = cur.integer()?;
                if cur.eat(b'*') {
                    order.theta().pow(cur.power()?).scale(&k)
                } else {
                    order.from_int(k)
                }
            }
            Some(c) => return Err(parse_error(cur.pos, format!("unexpected '{}'", c as char))),
            None => return Err(parse_error(cur.pos, "expected a term")),
        };
        acc = if negative { acc - term } else { acc + term };
    }
    Ok(acc)
}

fn int_json(x: &BigInt) -> Value {
    Value::Number(x.to_string().parse::<Number>().expect("integer literal is a JSON number"))
}

pub fn element_to_json(e: &Element) -> Value {
    Value::Array(e.coords().iter().map(int_json).collect())
}

pub fn elements_to_json(es: &[Element]) -> Value {
    Value::Array(es.iter().map(element_to_json).collect())
}

fn json_int(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => n.to_string().parse().ok(),
        _ => None,
    }
}

pub fn element_from_json(order: &CubicOrderSpec, v: &Value) -> Result<Element> {
    let arr = v.as_array().ok_or_else(|| parse_error(0, "expected a JSON array [a, b, c]"))?;
    if arr.len() != 3 {
        return Err(parse_error(0, format!("expected 3 coordinates, found {}", arr.len())));
    }
    let mut coords: [BigInt; 3] = Default::default();
    for (i, (slot, x)) in coords.iter_mut().zip(arr).enumerate() {
        *slot = json_int(x).ok_or_else(|| parse_error(i, "coordinates must be integers"))?;
    }
    Ok(order.from_coords(coords))
}

pub fn order_to_json(order: &CubicOrderSpec) -> Value {
    let (p, q, r) = order.coefficients();
    json!({ "p": p, "q": q, "r": r })
}

pub fn parse_order_json(text: &str) -> Result<CubicOrderSpec> {
    let v: Value = serde_json::from_str(text).map_err(|e| parse_error(e.column().saturating_sub(1), e.to_string()))?;
    let get = |key: &str| v.get(key).and_then(Value::as_i64).ok_or_else(|| parse_error(0, format!("missing integer field \"{key}\"")));
    CubicOrderSpec::new(get("p")?, get("q")?, get("r")?)
}

/// Parses `p,q,r` as used by the `--order` flag.
pub fn parse_order_triple(text: &str) -> Result<CubicOrderSpec> {
    if text.trim_start().starts_with('{') {
        return parse_order_json(text);
    }
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(parse_error(0, "expected p,q,r"));
    }
    let mut vals = [0i64; 3];
    let mut offset = 0;
    for (slot, part) in vals.iter_mut().zip(&parts) {
        *slot = part.parse().map_err(|_| parse_error(offset, format!("invalid integer '{part}'")))?;
        offset += part.len() + 1;
    }
    CubicOrderSpec::new(vals[0], vals[1], vals[2])
}

pub fn is_zero_json(v: &Value) -> bool {
    json_int(v).is_some_and(|x| x.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn k49() -> CubicOrderSpec {
        CubicOrderSpec::k49()
    }

    #[test]
    fn parses_text_forms() {
        let o = k49();
        assert_eq!(parse_element(&o, "7").unwrap(), o.from_int(7));
        assert_eq!(parse_element(&o, "1+1*r+1*r^2").unwrap(), o.special());
        assert_eq!(parse_element(&o, " 3 - 2*r + 5*r^2 ").unwrap(), o.element(3, -2, 5));
        assert_eq!(parse_element(&o, "-r").unwrap(), o.element(0, -1, 0));
        assert_eq!(parse_element(&o, "r^3").unwrap(), o.element(1, 2, -1));
        assert_eq!(parse_element(&o, "r^2 + 2").unwrap(), o.element(2, 0, 1));
        assert_eq!(parse_element(&o, "[4, -1, 0]").unwrap(), o.element(4, -1, 0));
    }

    #[test]
    fn parse_errors_report_positions() {
        let o = k49();
        assert_eq!(parse_element(&o, "").unwrap_err(), parse_error(0, "empty expression"));
        match parse_element(&o, "1 + 2*x") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 6),
            other => panic!("{other:?}"),
        }
        match parse_element(&o, "1 2") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 2),
            other => panic!("{other:?}"),
        }
        assert!(parse_element(&o, "[1, 2]").is_err());
        assert!(parse_element(&o, "[1, 2, 0.5]").is_err());
    }

    #[test]
    fn big_coordinates_survive_json() {
        let o = k49();
        let big = BigInt::parse_bytes(b"123456789012345678901234567890", 10).unwrap();
        let e = o.from_coords([big.clone(), -big, BigInt::from(1)]);
        let text = element_to_json(&e).to_string();
        assert_eq!(parse_element(&o, &text).unwrap(), e);
    }

    #[test]
    fn order_json() {
        let o = parse_order_json(r#"{"p":1,"q":-2,"r":-1}"#).unwrap();
        assert!(o.is_k49());
        assert_eq!(order_to_json(&o).to_string(), r#"{"p":1,"q":-2,"r":-1}"#);
        assert!(parse_order_triple("1,-2,-1").unwrap().is_k49());
        assert!(matches!(parse_order_triple("0,-1,0"), Err(Error::Reducible(_))));
        assert!(matches!(parse_order_triple("1,x,0"), Err(Error::Parse { .. })));
    }

    proptest! {
        #[test]
        fn display_round_trips(a in -1000i64..=1000, b in -1000i64..=1000, c in -1000i64..=1000) {
            let o = k49();
            let e = o.element(a, b, c);
            prop_assert_eq!(parse_element(&o, &e.to_string()).unwrap(), e.clone());
            prop_assert_eq!(element_from_json(&o, &element_to_json(&e)).unwrap(), e);
        }
    }
}
