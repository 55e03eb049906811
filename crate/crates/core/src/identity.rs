//! Symbolic check of the doubling identity
//! `2(x² + y² + z² + w² + xw + yw + zw) = (x+y+w)² + (x−y)² + (z+w)² + z²`.

use std::collections::BTreeMap;
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_traits::Zero;

/// A polynomial in four commuting variables `x, y, z, w`, keyed by exponent
/// vectors.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly4(BTreeMap<[u32; 4], BigInt>);

impl Poly4 {
    pub fn var(i: usize) -> Self {
        let mut e = [0; 4];
        e[i] = 1;
        Poly4(BTreeMap::from([(e, BigInt::from(1))]))
    }

    pub fn constant(c: i64) -> Self {
        let mut p = Poly4::default();
        p.add_term([0; 4], BigInt::from(c));
        p
    }

    fn add_term(&mut self, e: [u32; 4], c: BigInt) {
        let slot = self.0.entry(e).or_default();
        *slot += c;
        if slot.is_zero() {
            self.0.remove(&e);
        }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn neg(&self) -> Self {
        Poly4(self.0.iter().map(|(e, c)| (*e, -c)).collect())
    }

    /// Coefficient table, zero coefficients omitted.
    pub fn coefficients(&self) -> &BTreeMap<[u32; 4], BigInt> {
        &self.0
    }
}

impl Add for &Poly4 {
    type Output = Poly4;
    fn add(self, rhs: &Poly4) -> Poly4 {
        let mut out = self.clone();
        for (e, c) in &rhs.0 {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Mul for &Poly4 {
    type Output = Poly4;
    fn mul(self, rhs: &Poly4) -> Poly4 {
        let mut out = Poly4::default();
        for (ea, ca) in &self.0 {
            for (eb, cb) in &rhs.0 {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]];
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

/// Both sides of the doubling identity, expanded.
pub fn doubling_identity_sides() -> (Poly4, Poly4) {
    let [x, y, z, w] = [0, 1, 2, 3].map(Poly4::var);
    let mut ky = Poly4::default();
    for v in [&x, &y, &z, &w] {
        ky = &ky + &v.square();
    }
    for v in [&x, &y, &z] {
        ky = &ky + &(v * &w);
    }
    let left = &Poly4::constant(2) * &ky;
    let right = [&(&x + &y) + &w, &x + &y.neg(), &z + &w, z.clone()].iter().fold(Poly4::default(), |acc, t| &acc + &t.square());
    (left, right)
}

pub fn doubling_identity_holds() -> bool {
    let (l, r) = doubling_identity_sides();
    l == r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_expands_equal() {
        let (l, r) = doubling_identity_sides();
        assert_eq!(l, r);
        assert_eq!(l.coefficients().len(), 7);
        assert_eq!(l.coefficients()[&[2, 0, 0, 0]], BigInt::from(2));
        assert_eq!(l.coefficients()[&[0, 1, 0, 1]], BigInt::from(2));
    }

    #[test]
    fn wrong_identity_is_detected() {
        let [x, y] = [0, 1].map(Poly4::var);
        assert_ne!((&x + &y).square(), &x.square() + &y.square());
    }
}
