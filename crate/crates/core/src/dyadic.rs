//! The dyadic completion `O₍₂₎`, seen through the finite rings `O/2^k O`.
//!
//! Everything here assumes 2 is inert, so that `(1, θ, θ²)` stays a basis of
//! `O₍₂₎` over `Z₂`, the 2-adic valuation of an element is the minimum over its
//! coordinates, and `O/2O` is the field with 8 elements. Functions refuse
//! orders where 2 splits or ramifies.

use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::order::{CubicOrderSpec, Element};

/// Reduction exponent at which squareness of a dyadic unit is decided.
///
/// With ramification index 1 the derivative `2x` of `x² − u` has valuation 1
/// at a unit `x`, and Hensel lifting needs a root modulo `2^n` with
/// `n > 2·1`. So a unit is a square in `O₍₂₎` iff it is a square in `O/8O`.
pub const HENSEL_EXPONENT: u32 = 3;

pub fn assert_inert(order: &CubicOrderSpec) -> bool {
    order.dyadic_inert()
}

/// Size of the residue field `O/2O` when 2 is inert.
pub fn residue_field_size(order: &CubicOrderSpec) -> Option<u64> {
    order.dyadic_inert().then_some(8)
}

fn require_inert(order: &CubicOrderSpec) -> Result<()> {
    if order.dyadic_inert() {
        Ok(())
    } else {
        Err(Error::NotInert)
    }
}

/// Arithmetic on raw coordinate triples of `O/2^k O`.
#[derive(Clone, Debug)]
pub struct ResidueRing {
    k: u32,
    mask: u64,
    theta3: [u64; 3],
    theta4: [u64; 3],
}

pub type Triple = [u64; 3];

impl ResidueRing {
    pub fn new(order: &CubicOrderSpec, k: u32) -> Result<Self> {
        if !(1..=20).contains(&k) {
            return Err(Error::PreconditionViolated(format!("residue exponent {k} outside 1..=20")));
        }
        let (p, q, r) = order.coefficients();
        let mask = (1u64 << k) - 1;
        // Two's complement wrapping agrees with reduction modulo 2^k.
        let w = |x: i64| (x as u64) & mask;
        let theta3 = [w(r.wrapping_neg()), w(q.wrapping_neg()), w(p.wrapping_neg())];
        let theta4 = [w(p.wrapping_mul(r)), w(p.wrapping_mul(q).wrapping_sub(r)), w(p.wrapping_mul(p).wrapping_sub(q))];
        Ok(ResidueRing { k, mask, theta3, theta4 })
    }

    pub fn exponent(&self) -> u32 {
        self.k
    }

    /// Number of elements, `2^(3k)`.
    pub fn size(&self) -> u64 {
        1u64 << (3 * self.k)
    }

    pub fn add(&self, a: &Triple, b: &Triple) -> Triple {
        std::array::from_fn(|i| a[i].wrapping_add(b[i]) & self.mask)
    }

    pub fn neg(&self, a: &Triple) -> Triple {
        std::array::from_fn(|i| a[i].wrapping_neg() & self.mask)
    }

    pub fn mul(&self, a: &Triple, b: &Triple) -> Triple {
        let c0 = a[0].wrapping_mul(b[0]);
        let c1 = a[0].wrapping_mul(b[1]).wrapping_add(a[1].wrapping_mul(b[0]));
        let c2 = a[0].wrapping_mul(b[2]).wrapping_add(a[1].wrapping_mul(b[1])).wrapping_add(a[2].wrapping_mul(b[0]));
        let c3 = a[1].wrapping_mul(b[2]).wrapping_add(a[2].wrapping_mul(b[1]));
        let c4 = a[2].wrapping_mul(b[2]);
        let out = [c0, c1, c2];
        std::array::from_fn(|i| {
            out[i].wrapping_add(c3.wrapping_mul(self.theta3[i])).wrapping_add(c4.wrapping_mul(self.theta4[i])) & self.mask
        })
    }

    pub fn square(&self, a: &Triple) -> Triple {
        self.mul(a, a)
    }

    /// A residue is a unit iff it is nonzero modulo 2 (2 is prime).
    pub fn is_unit(&self, a: &Triple) -> bool {
        a.iter().any(|c| c & 1 == 1)
    }

    /// Reduction modulo `2^j` for `j <= k`.
    pub fn truncate(&self, a: &Triple, j: u32) -> Triple {
        let m = (1u64 << j) - 1;
        std::array::from_fn(|i| a[i] & m)
    }

    pub fn index(&self, a: &Triple) -> usize {
        (a[0] | (a[1] << self.k) | (a[2] << (2 * self.k))) as usize
    }

    pub fn from_index(&self, i: u64) -> Triple {
        [i & self.mask, (i >> self.k) & self.mask, (i >> (2 * self.k)) & self.mask]
    }

    pub fn elements(&self) -> impl Iterator<Item = Triple> + '_ {
        (0..self.size()).map(move |i| self.from_index(i))
    }

    pub fn units(&self) -> impl Iterator<Item = Triple> + '_ {
        self.elements().filter(move |a| self.is_unit(a))
    }

    pub fn reduce(&self, e: &Element) -> Triple {
        let m = BigInt::from(1u64 << self.k);
        std::array::from_fn(|i| e.coords()[i].mod_floor(&m).to_u64().expect("reduced below 2^k"))
    }

    /// Membership table of the squares `{x² : x ∈ O/2^k O}`.
    pub fn square_table(&self) -> Vec<bool> {
        let mut t = vec![false; self.size() as usize];
        for x in self.elements() {
            t[self.index(&self.square(&x))] = true;
        }
        t
    }
}

/// An element of `O/2^k O`.
#[derive(Clone)]
pub struct DyadicResidue {
    order: CubicOrderSpec,
    k: u32,
    coords: Triple,
}

impl DyadicResidue {
    pub fn from_element(e: &Element, k: u32) -> Result<Self> {
        let ring = ResidueRing::new(e.order(), k)?;
        Ok(DyadicResidue { order: e.order().clone(), k, coords: ring.reduce(e) })
    }

    pub fn exponent(&self) -> u32 {
        self.k
    }

    pub fn coords(&self) -> &Triple {
        &self.coords
    }

    fn ring(&self) -> ResidueRing {
        ResidueRing::new(&self.order, self.k).expect("exponent validated at construction")
    }

    fn combine(&self, other: &Self, f: impl Fn(&ResidueRing, &Triple, &Triple) -> Triple) -> Result<Self> {
        if self.order != other.order || self.k != other.k {
            return Err(Error::MixedOrders);
        }
        Ok(DyadicResidue { order: self.order.clone(), k: self.k, coords: f(&self.ring(), &self.coords, &other.coords) })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, ResidueRing::add)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.combine(other, ResidueRing::mul)
    }

    pub fn neg(&self) -> Self {
        DyadicResidue { order: self.order.clone(), k: self.k, coords: self.ring().neg(&self.coords) }
    }

    pub fn is_unit(&self) -> bool {
        self.coords.iter().any(|c| c & 1 == 1)
    }
}

impl PartialEq for DyadicResidue {
    fn eq(&self, other: &Self) -> bool {
        self.k == other.k && self.coords == other.coords && self.order == other.order
    }
}

impl Eq for DyadicResidue {}

impl Hash for DyadicResidue {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.k.hash(state);
        self.coords.hash(state);
    }
}

impl fmt::Debug for DyadicResidue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} mod 2^{}", self.coords, self.k)
    }
}

/// Squares of `O/8O`, cached per order.
#[derive(Clone, Debug)]
pub struct UnitSquareTable {
    ring: ResidueRing,
    squares: Vec<bool>,
}

impl UnitSquareTable {
    pub(crate) fn build(order: &CubicOrderSpec) -> Self {
        let ring = ResidueRing::new(order, HENSEL_EXPONENT).expect("valid exponent");
        let squares = ring.square_table();
        UnitSquareTable { ring, squares }
    }

    fn contains(&self, unit: &Element) -> bool {
        self.squares[self.ring.index(&self.ring.reduce(unit))]
    }
}

/// 2-adic valuation; `None` stands for the valuation of zero.
pub fn v2(alpha: &Element) -> Result<Option<u64>> {
    require_inert(alpha.order())?;
    Ok(alpha.coords().iter().filter_map(|c| c.trailing_zeros()).min())
}

/// Splits `α = 2^v · u` with `u` a dyadic unit.
fn unit_part(alpha: &Element) -> Option<(u64, Element)> {
    let v = alpha.coords().iter().filter_map(|c| c.trailing_zeros()).min()?;
    let u = alpha.div_int(&(BigInt::from(1) << v)).expect("divisible by 2^v2");
    Some((v, u))
}

/// Whether `α` is a square in `O₍₂₎`.
pub fn is_square_local(alpha: &Element) -> Result<bool> {
    require_inert(alpha.order())?;
    Ok(match unit_part(alpha) {
        None => true,
        Some((v, _)) if v % 2 == 1 => false,
        Some((_, u)) => alpha.order().unit_square_table().contains(&u),
    })
}

/// Whether `α = −t²` for some `t ∈ O₍₂₎`.
pub fn is_minus_square_local(alpha: &Element) -> Result<bool> {
    is_square_local(&-alpha)
}

/// Local representability of nonzero `α` by `x² + y² + z²` over `O₍₂₎`:
/// exactly the elements that are not minus a square.
pub fn represents_i3_local(alpha: &Element) -> Result<bool> {
    if alpha.is_zero() {
        return Err(Error::ZeroElement);
    }
    Ok(!is_minus_square_local(alpha)?)
}

/// Brute-force squareness of a dyadic unit modulo `2^k`.
pub fn unit_is_square_mod(unit: &Element, k: u32) -> Result<bool> {
    require_inert(unit.order())?;
    let ring = ResidueRing::new(unit.order(), k)?;
    let target = ring.reduce(unit);
    let found = ring.elements().any(|x| ring.square(&x) == target);
    Ok(found)
}

/// Local data of one element, as reported by the `local` command.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalReport {
    pub v2: Option<u64>,
    pub is_square: bool,
    pub is_minus_square: bool,
    /// `None` for the zero element, where the question is not asked.
    pub represents_i3: Option<bool>,
}

pub fn local_report(alpha: &Element) -> Result<LocalReport> {
    Ok(LocalReport {
        v2: v2(alpha)?,
        is_square: is_square_local(alpha)?,
        is_minus_square: is_minus_square_local(alpha)?,
        represents_i3: if alpha.is_zero() { None } else { Some(represents_i3_local(alpha)?) },
    })
}

/// Result of one exhaustive residue scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanOutcome {
    pub name: &'static str,
    pub modulus_exponent: u32,
    pub checked: u64,
    pub counterexamples: u64,
    /// Up to [`MAX_REPORTED`] counterexample tuples.
    pub examples: Vec<Vec<Triple>>,
}

pub const MAX_REPORTED: usize = 8;

impl ScanOutcome {
    fn new(name: &'static str, k: u32) -> Self {
        ScanOutcome { name, modulus_exponent: k, checked: 0, counterexamples: 0, examples: Vec::new() }
    }

    fn record(&mut self, ok: bool, tuple: impl FnOnce() -> Vec<Triple>) {
        self.checked += 1;
        if !ok {
            self.counterexamples += 1;
            if self.examples.len() < MAX_REPORTED {
                self.examples.push(tuple());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.counterexamples == 0
    }
}

/// For all units `u, v` of `O/2^k O` there is no `w` with `w² ≡ u² + v²`.
pub fn scan_unit_square_sums(order: &CubicOrderSpec, k: u32) -> Result<ScanOutcome> {
    require_inert(order)?;
    if k < 2 {
        return Err(Error::PreconditionViolated("sums of two unit squares need modulus at least 4".into()));
    }
    let ring = ResidueRing::new(order, k)?;
    let squares = ring.square_table();
    let unit_squares: Vec<(Triple, Triple)> = ring.units().map(|u| (u, ring.square(&u))).collect();
    let mut out = ScanOutcome::new("unit-square-sums", k);
    for (u, u2) in &unit_squares {
        for (v, v2) in &unit_squares {
            let s = ring.add(u2, v2);
            out.record(!squares[ring.index(&s)], || vec![*u, *v]);
        }
    }
    Ok(out)
}

/// No unit `u` and `y, z` of `O/4O` satisfy `u² + y² + z² ≡ 0`.
pub fn scan_three_squares_zero(order: &CubicOrderSpec) -> Result<ScanOutcome> {
    require_inert(order)?;
    let ring = ResidueRing::new(order, 2)?;
    let all: Vec<(Triple, Triple)> = ring.elements().map(|x| (x, ring.square(&x))).collect();
    let mut out = ScanOutcome::new("three-squares-zero", 2);
    for (u, u2) in all.iter().filter(|(u, _)| ring.is_unit(u)) {
        for (y, y2) in &all {
            let partial = ring.add(u2, y2);
            for (z, z2) in &all {
                let s = ring.add(&partial, z2);
                out.record(s != [0, 0, 0], || vec![*u, *y, *z]);
            }
        }
    }
    Ok(out)
}

/// Over all pairs of `O/4O`: `x ≡ y (2)` ⟺ `x² ≡ y² (4)` ⟺ `x² ≡ y² (2)`.
pub fn scan_square_congruences(order: &CubicOrderSpec) -> Result<ScanOutcome> {
    require_inert(order)?;
    let ring = ResidueRing::new(order, 2)?;
    let all: Vec<(Triple, Triple)> = ring.elements().map(|x| (x, ring.square(&x))).collect();
    let mut out = ScanOutcome::new("square-congruences", 2);
    for (x, x2) in &all {
        for (y, y2) in &all {
            let a = ring.truncate(x, 1) == ring.truncate(y, 1);
            let b = x2 == y2;
            let c = ring.truncate(x2, 1) == ring.truncate(y2, 1);
            out.record(a == b && b == c, || vec![*x, *y]);
        }
    }
    Ok(out)
}

/// For every unit residue modulo 32: square modulo 32 ⟺ square modulo 8.
pub fn scan_hensel_threshold(order: &CubicOrderSpec) -> Result<ScanOutcome> {
    require_inert(order)?;
    let fine = ResidueRing::new(order, 5)?;
    let coarse = ResidueRing::new(order, HENSEL_EXPONENT)?;
    let fine_squares = fine.square_table();
    let coarse_squares = coarse.square_table();
    let mut out = ScanOutcome::new("hensel-threshold", 5);
    for u in fine.units() {
        let at_32 = fine_squares[fine.index(&u)];
        let at_8 = coarse_squares[coarse.index(&fine.truncate(&u, HENSEL_EXPONENT))];
        out.record(at_32 == at_8, || vec![u]);
    }
    Ok(out)
}

/// Counts of the rings scanned by [`residue_scan_lemmas`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueScanReport {
    pub units_mod_4: u64,
    pub units_mod_2k: u64,
    pub scans: Vec<ScanOutcome>,
}

impl ResidueScanReport {
    pub fn passed(&self) -> bool {
        self.scans.iter().all(ScanOutcome::passed)
    }
}

/// Runs the three residue-level facts behind the dyadic analysis: the
/// unit-square-sum scan modulo `2^k`, and the two modulo-4 scans.
pub fn residue_scan_lemmas(order: &CubicOrderSpec, k: u32) -> Result<ResidueScanReport> {
    let scans = vec![scan_unit_square_sums(order, k)?, scan_three_squares_zero(order)?, scan_square_congruences(order)?];
    let r4 = ResidueRing::new(order, 2)?;
    let rk = ResidueRing::new(order, k)?;
    Ok(ResidueScanReport { units_mod_4: r4.units().count() as u64, units_mod_2k: rk.units().count() as u64, scans })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn k49() -> CubicOrderSpec {
        CubicOrderSpec::k49()
    }

    #[test]
    fn inertness() {
        assert!(assert_inert(&k49()));
        assert_eq!(residue_field_size(&k49()), Some(8));
        assert!(!crate::order::is_irreducible_mod2(0, 0, -2));
        let split = CubicOrderSpec::new(0, -4, -1).unwrap();
        assert!(!assert_inert(&split));
        assert_eq!(v2(&split.one()), Err(Error::NotInert));
        assert_eq!(is_square_local(&split.one()), Err(Error::NotInert));
    }

    #[test]
    fn residue_field_is_a_field() {
        let ring = ResidueRing::new(&k49(), 1).unwrap();
        assert_eq!(ring.size(), 8);
        for a in ring.units() {
            assert_eq!(ring.units().filter(|b| ring.mul(&a, b) == [1, 0, 0]).count(), 1);
        }
    }

    #[test]
    fn residue_arithmetic_matches_order() {
        let o = k49();
        let ring = ResidueRing::new(&o, 3).unwrap();
        let a = o.element(5, -3, 11);
        let b = o.element(-2, 7, 4);
        assert_eq!(ring.mul(&ring.reduce(&a), &ring.reduce(&b)), ring.reduce(&(&a * &b)));
        assert_eq!(ring.add(&ring.reduce(&a), &ring.reduce(&b)), ring.reduce(&(&a + &b)));
        let ra = DyadicResidue::from_element(&a, 3).unwrap();
        let rb = DyadicResidue::from_element(&b, 3).unwrap();
        assert_eq!(ra.mul(&rb).unwrap(), DyadicResidue::from_element(&(&a * &b), 3).unwrap());
        assert_eq!(ra.neg(), DyadicResidue::from_element(&-&a, 3).unwrap());
        assert!(ra.is_unit());
    }

    #[test]
    fn valuations() {
        let o = k49();
        assert_eq!(v2(&o.from_int(7)).unwrap(), Some(0));
        assert_eq!(v2(&o.element(2, 2, 0)).unwrap(), Some(1));
        assert_eq!(v2(&o.zero()).unwrap(), None);
        assert_eq!(v2(&o.element(8, 0, -24)).unwrap(), Some(3));
    }

    #[test]
    fn local_squares() {
        let o = k49();
        assert!(is_square_local(&o.from_int(-7)).unwrap());
        assert!(!is_square_local(&o.from_int(2)).unwrap());
        assert!(is_square_local(&o.theta().square()).unwrap());
        assert!(is_minus_square_local(&o.from_int(7)).unwrap());
        assert!(!is_minus_square_local(&o.from_int(2)).unwrap());
        assert!(is_minus_square_local(&o.special()).unwrap());
        assert!(!represents_i3_local(&o.from_int(7)).unwrap());
        assert!(represents_i3_local(&o.from_int(2)).unwrap());
        assert!(!represents_i3_local(&o.from_int(-1)).unwrap());
        assert_eq!(represents_i3_local(&o.zero()), Err(Error::ZeroElement));
        assert!(is_square_local(&o.zero()).unwrap());
    }

    #[test]
    fn local_report_for_two() {
        let r = local_report(&k49().from_int(2)).unwrap();
        assert_eq!(r, LocalReport { v2: Some(1), is_square: false, is_minus_square: false, represents_i3: Some(true) });
    }

    #[test]
    fn mod8_squareness_brute_force_for_minus_seven() {
        // 512 residues modulo 8, one of which squares to −7.
        assert!(unit_is_square_mod(&k49().from_int(-7), 3).unwrap());
        assert!(!unit_is_square_mod(&k49().from_int(3), 3).unwrap());
    }

    #[test]
    fn scans_have_the_expected_sizes_and_no_counterexamples() {
        let o = k49();
        let report = residue_scan_lemmas(&o, 3).unwrap();
        assert_eq!(report.units_mod_4, 56);
        assert_eq!(report.units_mod_2k, 448);
        let [i, ii, iii] = [&report.scans[0], &report.scans[1], &report.scans[2]];
        assert_eq!(i.checked, 448 * 448);
        assert_eq!(ii.checked, 56 * 64 * 64);
        assert_eq!(iii.checked, 64 * 64);
        assert!(report.passed(), "{report:?}");
        assert!(scan_unit_square_sums(&o, 2).unwrap().passed());
    }

    #[test]
    fn hensel_threshold_is_stable() {
        let s = scan_hensel_threshold(&k49()).unwrap();
        assert_eq!(s.checked, 32768 - 4096);
        assert!(s.passed());
    }

    #[test]
    fn scans_pass_for_another_inert_cubic() {
        // x³ − 3x − 1 is irreducible mod 2 as well.
        let o = CubicOrderSpec::new(0, -3, -1).unwrap();
        assert!(residue_scan_lemmas(&o, 2).unwrap().passed());
    }

    fn element() -> impl Strategy<Value = Element> {
        (-60i64..=60, -60i64..=60, -60i64..=60).prop_map(|(a, b, c)| k49().element(a, b, c))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn squares_are_local_squares(a in element()) {
            prop_assert!(is_square_local(&a.square()).unwrap());
            if !a.is_zero() {
                prop_assert!(!is_square_local(&a.square().scale(&BigInt::from(2))).unwrap());
            }
        }

        #[test]
        fn squareness_invariant_under_square_factors(a in element(), b in element()) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            prop_assert_eq!(is_square_local(&a).unwrap(), is_square_local(&(&a * &b.square())).unwrap());
        }

        #[test]
        fn i3_locality_invariant_under_four(a in element()) {
            prop_assume!(!a.is_zero());
            prop_assert_eq!(represents_i3_local(&a).unwrap(), represents_i3_local(&a.scale(&BigInt::from(4))).unwrap());
        }
    }

    #[test]
    fn zero_coordinates_are_ignored_by_valuation() {
        assert_eq!(v2(&k49().element(0, 4, 0)).unwrap(), Some(2));
    }
}
