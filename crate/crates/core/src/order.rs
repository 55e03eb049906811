//! Exact arithmetic in a monogenic cubic order `Z[θ]`.
//!
//! An order is fixed by a monic integer cubic `x³ + p·x² + q·x + r`; elements
//! are coordinate triples over the power basis `(1, θ, θ²)`. Every decision in
//! this module is made with exact integers. Total positivity in particular is
//! read off the signs of the characteristic polynomial, which is valid because
//! the orders accepted here are totally real.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::dyadic::UnitSquareTable;
use crate::error::{Error, Result};
use crate::lattice::{self, PosDefForm};

/// Coefficients `(p, q, r)` of the defining polynomial of the default order:
/// `x³ + x² − 2x − 1`, the minimal polynomial of `ζ₇ + ζ₇⁻¹`.
pub const K49_COEFFICIENTS: (i64, i64, i64) = (1, -2, -1);

/// A monogenic totally real cubic order together with its derived constants.
///
/// Cloning is cheap (the data is shared); two handles compare equal iff their
/// defining polynomials agree.
#[derive(Clone)]
pub struct CubicOrderSpec(Arc<OrderData>);

struct OrderData {
    p: i64,
    q: i64,
    r: i64,
    discriminant: BigInt,
    power_sums: [BigInt; 5],
    trace_gram: [[BigInt; 3]; 3],
    dyadic_inert: bool,
    /// Coordinates of θ³ and θ⁴ in the power basis.
    theta3: [BigInt; 3],
    theta4: [BigInt; 3],
    trace_form: OnceLock<PosDefForm>,
    unit_squares: OnceLock<UnitSquareTable>,
}

/// Returns the discriminant of `x³ + p x² + q x + r`.
pub fn cubic_discriminant(p: &BigInt, q: &BigInt, r: &BigInt) -> BigInt {
    let pq = p * q;
    &pq * &pq - BigInt::from(4) * q * q * q - BigInt::from(4) * p * p * p * r - BigInt::from(27) * r * r + BigInt::from(18) * pq * r
}

fn eval_cubic(p: &BigInt, q: &BigInt, r: &BigInt, x: &BigInt) -> BigInt {
    ((x + p) * x + q) * x + r
}

/// Finds an integer root of a monic cubic with three distinct real roots.
///
/// The cubic is monotone on three integer ranges separated by the critical
/// points `(−p ± √(p²−3q))/3`; each range is binary searched and the few
/// integers straddling a critical point are tested directly.
fn integer_root(p: &BigInt, q: &BigInt, r: &BigInt) -> Option<BigInt> {
    let f = |x: &BigInt| eval_cubic(p, q, r, x);
    let crit = p * p - BigInt::from(3) * q;
    debug_assert!(crit.is_positive());
    let s = crit.sqrt();
    let three = BigInt::from(3);
    let lo_crit: BigInt = -p - &s - 1;
    let hi_crit: BigInt = -p + &s + 1;
    let a = lo_crit.div_floor(&three);
    let b = Integer::div_ceil(&hi_crit, &three);
    let cauchy: BigInt = [p, q, r].iter().map(|c| c.abs()).max().unwrap() + 1;

    // increasing = true: search for f(x) = 0 on a range where f increases.
    let search = |lo: BigInt, hi: BigInt, increasing: bool| -> Option<BigInt> {
        if lo > hi {
            return None;
        }
        let (mut lo, mut hi) = (lo, hi);
        // smallest x in [lo, hi] with f(x) >= 0 (resp. <= 0)
        let ok = |v: &BigInt| if increasing { !v.is_negative() } else { !v.is_positive() };
        if !ok(&f(&hi)) {
            return None;
        }
        while lo < hi {
            let mid = (&lo + &hi).div_floor(&BigInt::from(2));
            if ok(&f(&mid)) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        f(&lo).is_zero().then_some(lo)
    };

    let neg_bound = -cauchy.clone();
    if let Some(x) = search(neg_bound.clone(), a.clone().min(cauchy.clone()), true) {
        return Some(x);
    }
    let inner_lo = &a + 2;
    let inner_hi = &b - 2;
    let mut direct: Vec<BigInt> = Vec::new();
    if inner_lo <= inner_hi {
        if let Some(x) = search(inner_lo, inner_hi, false) {
            return Some(x);
        }
        direct.push(&a + 1);
        direct.push(&b - 1);
    } else {
        let mut x: BigInt = &a + 1;
        while x < b {
            direct.push(x.clone());
            x += 1;
        }
    }
    if let Some(x) = direct.into_iter().find(|x| f(x).is_zero()) {
        return Some(x);
    }
    search(b.max(neg_bound), cauchy, true)
}

/// Returns true iff `x³ + p x² + q x + r` is irreducible modulo 2.
///
/// A cubic over `F₂` is irreducible iff it has no root in `{0, 1}`.
pub fn is_irreducible_mod2(p: i64, q: i64, r: i64) -> bool {
    let f0 = r.rem_euclid(2);
    let f1 = (1 + p.rem_euclid(2) + q.rem_euclid(2) + r.rem_euclid(2)) % 2;
    f0 != 0 && f1 != 0
}

impl CubicOrderSpec {
    /// Builds the order `Z[θ]` for `θ` a root of `x³ + p x² + q x + r`.
    pub fn new(p: i64, q: i64, r: i64) -> Result<Self> {
        let (bp, bq, br) = (BigInt::from(p), BigInt::from(q), BigInt::from(r));
        let discriminant = cubic_discriminant(&bp, &bq, &br);
        if !discriminant.is_positive() {
            return Err(Error::NotTotallyReal(discriminant));
        }
        if let Some(root) = integer_root(&bp, &bq, &br) {
            return Err(Error::Reducible(root));
        }

        // Newton's identities with e1 = −p, e2 = q, e3 = −r.
        let (e1, e2, e3) = (-&bp, bq.clone(), -&br);
        let p0 = BigInt::from(3);
        let p1 = e1.clone();
        let p2 = &e1 * &p1 - BigInt::from(2) * &e2;
        let p3 = &e1 * &p2 - &e2 * &p1 + BigInt::from(3) * &e3;
        let p4 = &e1 * &p3 - &e2 * &p2 + &e3 * &p1;
        let power_sums = [p0, p1, p2, p3, p4];
        let trace_gram: [[BigInt; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| power_sums[i + j].clone()));

        let g = &trace_gram;
        let m1 = g[0][0].clone();
        let m2 = &g[0][0] * &g[1][1] - &g[0][1] * &g[1][0];
        let m3 = det3(g);
        if !(m1.is_positive() && m2.is_positive() && m3.is_positive()) {
            return Err(Error::TraceFormNotPositiveDefinite);
        }

        let theta3 = [-&br, -&bq, -&bp];
        let theta4 = [&bp * &br, &bp * &bq - &br, &bp * &bp - &bq];
        Ok(CubicOrderSpec(Arc::new(OrderData {
            p,
            q,
            r,
            discriminant,
            power_sums,
            trace_gram,
            dyadic_inert: is_irreducible_mod2(p, q, r),
            theta3,
            theta4,
            trace_form: OnceLock::new(),
            unit_squares: OnceLock::new(),
        })))
    }

    /// The order `Z[ρ]`, `ρ = ζ₇ + ζ₇⁻¹`.
    pub fn k49() -> Self {
        let (p, q, r) = K49_COEFFICIENTS;
        Self::new(p, q, r).expect("x^3 + x^2 - 2x - 1 defines a totally real order")
    }

    pub fn coefficients(&self) -> (i64, i64, i64) {
        (self.0.p, self.0.q, self.0.r)
    }

    pub fn is_k49(&self) -> bool {
        self.coefficients() == K49_COEFFICIENTS
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.0.discriminant
    }

    /// `Tr(θ⁰) .. Tr(θ⁴)`.
    pub fn power_sums(&self) -> &[BigInt; 5] {
        &self.0.power_sums
    }

    /// `Tr(θ^(i+j))` for `0 <= i, j < 3`.
    pub fn trace_gram(&self) -> &[[BigInt; 3]; 3] {
        &self.0.trace_gram
    }

    pub fn dyadic_inert(&self) -> bool {
        self.0.dyadic_inert
    }

    pub(crate) fn trace_form(&self) -> &PosDefForm {
        self.0.trace_form.get_or_init(|| lattice::trace_square_form(self))
    }

    pub(crate) fn unit_square_table(&self) -> &UnitSquareTable {
        self.0.unit_squares.get_or_init(|| UnitSquareTable::build(self))
    }

    pub fn element(&self, a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Element {
        Element { order: self.clone(), coords: [a.into(), b.into(), c.into()] }
    }

    pub fn from_coords(&self, coords: [BigInt; 3]) -> Element {
        Element { order: self.clone(), coords }
    }

    pub fn from_int(&self, n: impl Into<BigInt>) -> Element {
        self.element(n, 0, 0)
    }

    pub fn zero(&self) -> Element {
        self.from_int(0)
    }

    pub fn one(&self) -> Element {
        self.from_int(1)
    }

    /// The generator `θ`.
    pub fn theta(&self) -> Element {
        self.element(0, 1, 0)
    }

    /// `1 + θ + θ²`; in K49 this is the norm-7 element `1 + ρ + ρ²`.
    pub fn special(&self) -> Element {
        self.element(1, 1, 1)
    }

    fn same(&self, other: &CubicOrderSpec) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.coefficients() == other.coefficients()
    }
}

impl PartialEq for CubicOrderSpec {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}

impl Eq for CubicOrderSpec {}

impl fmt::Debug for CubicOrderSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (p, q, r) = self.coefficients();
        write!(f, "CubicOrderSpec(x^3 + {p}x^2 + {q}x + {r})")
    }
}

fn det3(m: &[[BigInt; 3]; 3]) -> BigInt {
    &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1]) - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
        + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
}

/// Coefficients of the characteristic polynomial `x³ − s1·x² + s2·x − s3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharPoly {
    pub s1: BigInt,
    pub s2: BigInt,
    pub s3: BigInt,
}

/// An element `a + b·θ + c·θ²` of a cubic order.
#[derive(Clone)]
pub struct Element {
    order: CubicOrderSpec,
    coords: [BigInt; 3],
}

impl Element {
    pub fn order(&self) -> &CubicOrderSpec {
        &self.order
    }

    pub fn coords(&self) -> &[BigInt; 3] {
        &self.coords
    }

    pub fn into_coords(self) -> [BigInt; 3] {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1].is_zero() && self.coords[2].is_zero()
    }

    /// True iff the element lies in the rational subring `Z`.
    pub fn is_rational(&self) -> bool {
        self.coords[1].is_zero() && self.coords[2].is_zero()
    }

    fn check_same(&self, other: &Element) -> Result<()> {
        if self.order.same(&other.order) {
            Ok(())
        } else {
            Err(Error::MixedOrders)
        }
    }

    pub fn try_add(&self, other: &Element) -> Result<Element> {
        self.check_same(other)?;
        Ok(self.with(std::array::from_fn(|i| &self.coords[i] + &other.coords[i])))
    }

    pub fn try_sub(&self, other: &Element) -> Result<Element> {
        self.check_same(other)?;
        Ok(self.with(std::array::from_fn(|i| &self.coords[i] - &other.coords[i])))
    }

    pub fn try_mul(&self, other: &Element) -> Result<Element> {
        self.check_same(other)?;
        let [a0, a1, a2] = &self.coords;
        let [b0, b1, b2] = &other.coords;
        let c0 = a0 * b0;
        let c1 = a0 * b1 + a1 * b0;
        let c2 = a0 * b2 + a1 * b1 + a2 * b0;
        let c3 = a1 * b2 + a2 * b1;
        let c4 = a2 * b2;
        let (t3, t4) = (&self.order.0.theta3, &self.order.0.theta4);
        Ok(self.with(std::array::from_fn(|i| {
            let base = match i {
                0 => &c0,
                1 => &c1,
                _ => &c2,
            };
            base + &c3 * &t3[i] + &c4 * &t4[i]
        })))
    }

    fn with(&self, coords: [BigInt; 3]) -> Element {
        Element { order: self.order.clone(), coords }
    }

    pub fn square(&self) -> Element {
        self * self
    }

    pub fn pow(&self, mut exp: u32) -> Element {
        let mut base = self.clone();
        let mut acc = self.order.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = base.square();
            }
        }
        acc
    }

    pub fn scale(&self, k: &BigInt) -> Element {
        self.with(std::array::from_fn(|i| &self.coords[i] * k))
    }

    /// Divides every coordinate by `k`, if all are divisible.
    pub fn div_int(&self, k: &BigInt) -> Option<Element> {
        if k.is_zero() {
            return None;
        }
        let mut out: [BigInt; 3] = Default::default();
        for (o, c) in out.iter_mut().zip(&self.coords) {
            let (quot, rem) = c.div_rem(k);
            if !rem.is_zero() {
                return None;
            }
            *o = quot;
        }
        Some(self.with(out))
    }

    /// Coordinates of `self·θ`.
    fn times_theta(&self) -> [BigInt; 3] {
        let [a, b, c] = &self.coords;
        let d = &self.order.0;
        [-(c * d.r), a - c * d.q, b - c * d.p]
    }

    /// Matrix of multiplication by `self`; column `k` holds `self·θ^k`.
    pub fn multiplication_matrix(&self) -> [[BigInt; 3]; 3] {
        let col0 = self.coords.clone();
        let col1 = self.times_theta();
        let col2 = self.with(col1.clone()).times_theta();
        let cols = [col0, col1, col2];
        std::array::from_fn(|i| std::array::from_fn(|j| cols[j][i].clone()))
    }

    pub fn trace(&self) -> BigInt {
        let ps = &self.order.0.power_sums;
        &self.coords[0] * &ps[0] + &self.coords[1] * &ps[1] + &self.coords[2] * &ps[2]
    }

    /// `Tr(self²)`, evaluated through the trace Gram matrix.
    pub fn trace_of_square(&self) -> BigInt {
        let g = &self.order.0.trace_gram;
        let v = &self.coords;
        let mut acc = BigInt::zero();
        for i in 0..3 {
            for j in 0..3 {
                acc += &g[i][j] * &v[i] * &v[j];
            }
        }
        acc
    }

    pub fn norm(&self) -> BigInt {
        det3(&self.multiplication_matrix())
    }

    pub fn char_poly(&self) -> CharPoly {
        let s1 = self.trace();
        // s2 = e2 of the conjugates = (Tr(α)² − Tr(α²)) / 2
        let s2 = (&s1 * &s1 - self.trace_of_square()) / 2;
        CharPoly { s1, s2, s3: self.norm() }
    }

    /// All conjugates are strictly positive.
    pub fn is_totally_positive(&self) -> bool {
        let s1 = self.trace();
        if !s1.is_positive() {
            return false;
        }
        let s2: BigInt = (&s1 * &s1 - self.trace_of_square()) / 2;
        s2.is_positive() && self.norm().is_positive()
    }

    /// All conjugates are nonnegative.
    pub fn is_totally_nonnegative(&self) -> bool {
        let s1 = self.trace();
        if s1.is_negative() {
            return false;
        }
        let s2: BigInt = (&s1 * &s1 - self.trace_of_square()) / 2;
        !s2.is_negative() && !self.norm().is_negative()
    }

    /// Solves `divisor · γ = self` exactly.
    pub fn divide_exact(&self, divisor: &Element) -> Result<Element> {
        self.check_same(divisor)?;
        let m = divisor.multiplication_matrix();
        let det = det3(&m);
        if det.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // γ = adj(M)·α / det(M)
        let cof = |r0: usize, r1: usize, c0: usize, c1: usize| &m[r0][c0] * &m[r1][c1] - &m[r0][c1] * &m[r1][c0];
        let adj = [
            [cof(1, 2, 1, 2), -cof(0, 2, 1, 2), cof(0, 1, 1, 2)],
            [-cof(1, 2, 0, 2), cof(0, 2, 0, 2), -cof(0, 1, 0, 2)],
            [cof(1, 2, 0, 1), -cof(0, 2, 0, 1), cof(0, 1, 0, 1)],
        ];
        let mut out: [BigInt; 3] = Default::default();
        for (i, o) in out.iter_mut().enumerate() {
            let num: BigInt = (0..3).map(|j| &adj[i][j] * &self.coords[j]).sum();
            let (quot, rem) = num.div_rem(&det);
            if !rem.is_zero() {
                return Err(Error::NotDivisible);
            }
            *o = quot;
        }
        Ok(self.with(out))
    }

    pub fn is_unit(&self) -> bool {
        self.norm().abs().is_one()
    }

    /// Returns `x` with `x² = self`, if one exists, in canonical sign.
    ///
    /// Candidates are exactly the lattice points with `Tr(x²) = Tr(self)`.
    pub fn is_square(&self) -> Option<Element> {
        if self.is_zero() {
            return Some(self.clone());
        }
        if !self.is_totally_nonnegative() {
            return None;
        }
        let value = lattice::Rational::from_integer(self.trace());
        self.order
            .trace_form()
            .shell(&value)
            .map(|v| self.order.from_coords([v[0].clone(), v[1].clone(), v[2].clone()]))
            .find(|x| &x.square() == self)
            .map(|x| x.canonical_sign())
    }

    /// The representative of `{x, −x}` whose first nonzero coordinate is positive.
    pub fn canonical_sign(&self) -> Element {
        match self.coords.iter().find(|c| !c.is_zero()) {
            Some(c) if c.is_negative() => -self,
            _ => self.clone(),
        }
    }

    /// Lexicographic comparison of coordinate triples.
    pub fn cmp_coords(&self, other: &Element) -> Ordering {
        self.coords.cmp(&other.coords)
    }
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords && self.order.same(&other.order)
    }
}

impl Eq for Element {}

impl Hash for Element {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = &self.coords;
        write!(f, "[{a}, {b}, {c}]")
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.with(std::array::from_fn(|i| -&self.coords[i]))
    }
}

impl Neg for Element {
    type Output = Element;
    fn neg(self) -> Element {
        -&self
    }
}

// Operator forms panic on mixed orders; use the `try_*` methods to get an error instead.
macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Element> for &Element {
            type Output = Element;
            fn $method(self, rhs: &Element) -> Element {
                self.$checked(rhs).expect("arithmetic on elements of different orders")
            }
        }
        impl $trait<Element> for Element {
            type Output = Element;
            fn $method(self, rhs: Element) -> Element {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Element> for Element {
            type Output = Element;
            fn $method(self, rhs: &Element) -> Element {
                (&self).$method(rhs)
            }
        }
        impl $trait<Element> for &Element {
            type Output = Element;
            fn $method(self, rhs: Element) -> Element {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn k49() -> CubicOrderSpec {
        CubicOrderSpec::k49()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn k49_constants() {
        let o = k49();
        assert_eq!(o.power_sums().to_vec(), ints(&[3, -1, 5, -4, 13]));
        let g: Vec<Vec<BigInt>> = o.trace_gram().iter().map(|row| row.to_vec()).collect();
        assert_eq!(g, vec![ints(&[3, -1, 5]), ints(&[-1, 5, -4]), ints(&[5, -4, 13])]);
        assert_eq!(o.discriminant(), &BigInt::from(49));
        assert!(o.dyadic_inert());
    }

    #[test]
    fn rejects_bad_polynomials() {
        assert!(matches!(CubicOrderSpec::new(0, -1, 0), Err(Error::Reducible(_))));
        assert!(matches!(CubicOrderSpec::new(0, 0, -2), Err(Error::NotTotallyReal(_))));
        // (x − 1)(x² − 3) = x³ − x² − 3x + 3
        assert_eq!(CubicOrderSpec::new(-1, -3, 3).unwrap_err(), Error::Reducible(BigInt::from(1)));
        // (x + 5)(x − 2)(x − 7)
        assert!(matches!(CubicOrderSpec::new(-4, -31, 70), Err(Error::Reducible(_))));
        // x³ − 3x − 1, the real subfield of Q(ζ₉)
        assert!(CubicOrderSpec::new(0, -3, -1).is_ok());
    }

    #[test]
    fn integer_root_finder_matches_scan() {
        for p in -6i64..=6 {
            for q in -12i64..=6 {
                for r in -12i64..=12 {
                    let (bp, bq, br) = (BigInt::from(p), BigInt::from(q), BigInt::from(r));
                    if !cubic_discriminant(&bp, &bq, &br).is_positive() {
                        continue;
                    }
                    let scan = (-40i64..=40).any(|x| x * x * x + p * x * x + q * x + r == 0);
                    assert_eq!(integer_root(&bp, &bq, &br).is_some(), scan, "({p},{q},{r})");
                }
            }
        }
    }

    #[test]
    fn reduction_of_theta_powers() {
        let o = k49();
        let rho = o.theta();
        let rho2 = rho.square();
        assert_eq!(rho2, o.element(0, 0, 1));
        assert_eq!(&rho * &rho2, o.element(1, 2, -1));
        assert_eq!(&rho * &rho.pow(3), o.element(-1, -1, 3));
        let a = o.element(3, -7, 2);
        assert_eq!(&o.one() * &a, a);
    }

    #[test]
    fn char_poly_examples() {
        let o = k49();
        let cp = o.theta().char_poly();
        assert_eq!((cp.s1, cp.s2, cp.s3), (BigInt::from(-1), BigInt::from(-2), BigInt::from(1)));
        let cp = o.one().char_poly();
        assert_eq!((cp.s1, cp.s2, cp.s3), (BigInt::from(3), BigInt::from(3), BigInt::from(1)));
        let special = o.special();
        assert_eq!(special.norm(), BigInt::from(7));
        assert_eq!(special.trace(), BigInt::from(7));
        assert_eq!(o.theta().norm(), BigInt::from(1));
    }

    #[test]
    fn positivity_examples() {
        let o = k49();
        assert!(o.special().is_totally_positive());
        assert!(!o.theta().is_totally_positive());
        assert!(!o.zero().is_totally_positive());
        assert!(o.zero().is_totally_nonnegative());
    }

    #[test]
    fn division() {
        let o = k49();
        let s = o.special();
        assert_eq!(s.divide_exact(&s).unwrap(), o.one());
        let two_rho = o.element(0, 2, 0);
        assert_eq!(two_rho.divide_exact(&o.from_int(2)).unwrap(), o.theta());
        // 7 is a unit times (1 + ρ + ρ²)³, so the quotient is integral of norm 49.
        let g = o.from_int(7).divide_exact(&s).unwrap();
        assert_eq!(&g * &s, o.from_int(7));
        assert_eq!(g.norm(), BigInt::from(49));
        assert_eq!(o.one().divide_exact(&o.from_int(2)), Err(Error::NotDivisible));
        assert_eq!(o.one().divide_exact(&o.zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn units_and_squares() {
        let o = k49();
        assert!(o.theta().is_unit());
        assert!(!o.special().is_unit());
        assert_eq!(o.from_int(4).is_square(), Some(o.from_int(2)));
        assert_eq!(o.special().is_square(), None);
        assert_eq!(o.theta().square().is_square(), Some(o.theta()));
        let x = o.element(-2, 3, -1);
        assert_eq!(x.square().is_square(), Some(x.canonical_sign()));
        assert_eq!(o.from_int(2).is_square(), None);
        assert_eq!(o.zero().is_square(), Some(o.zero()));
    }

    #[test]
    fn mixed_orders_are_errors() {
        let a = k49().one();
        let b = CubicOrderSpec::new(0, -3, -1).unwrap().one();
        assert_eq!(a.try_add(&b), Err(Error::MixedOrders));
        assert_eq!(a.try_mul(&b), Err(Error::MixedOrders));
        assert_ne!(a, b);
    }

    #[test]
    fn trace_gram_matches_products() {
        for (p, q, r) in [(1, -2, -1), (0, -3, -1), (-1, -4, 1)] {
            let o = CubicOrderSpec::new(p, q, r).unwrap();
            let basis = [o.one(), o.theta(), o.theta().square()];
            for i in 0..3 {
                for j in 0..3 {
                    assert_eq!((&basis[i] * &basis[j]).trace(), o.trace_gram()[i][j]);
                }
            }
        }
    }

    #[test]
    fn mod2_irreducibility() {
        assert!(is_irreducible_mod2(1, -2, -1));
        assert!(!is_irreducible_mod2(0, 0, -2));
        assert!(!is_irreducible_mod2(0, -4, -1));
    }
}
