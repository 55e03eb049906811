//! Indecomposable elements and the characterization of totally positive
//! elements that are not sums of squares.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::lattice::{form_of_quadratic, totally_positive_up_to_trace, OrderForm, Rational};
use crate::order::{CubicOrderSpec, Element};
use crate::sos::{decompose, Decomposer, Decomposition};

/// Lengths searched when deciding that an element is not a sum of squares.
pub const EXCEPTIONAL_SEARCH_CAP: usize = 6;

/// `Ok(None)` when `alpha` cannot be split as a sum of two totally positive
/// elements, otherwise a splitting `(β, α − β)`.
///
/// Any summand `β` satisfies `0 < σ(β) < σ(α)` in every embedding, hence
/// `Tr(β²) < Tr(α²)` and `0 < Tr(β) < Tr(α)`; the trace form ellipsoid at
/// `Tr(α²)` is searched exhaustively.
pub fn indecomposable_witness(alpha: &Element) -> Result<Option<(Element, Element)>> {
    if !alpha.is_totally_positive() {
        return Err(Error::NotTotallyPositive);
    }
    let order = alpha.order();
    let tr = alpha.trace();
    let bound = Rational::from_integer(alpha.trace_of_square());
    for v in order.trace_form().points(&bound) {
        let beta = order.from_coords([v[0].clone(), v[1].clone(), v[2].clone()]);
        let tb = beta.trace();
        if !tb.is_positive() || tb >= tr {
            continue;
        }
        if !beta.is_totally_positive() {
            continue;
        }
        let rest = alpha - &beta;
        if rest.is_totally_positive() {
            return Ok(Some((beta, rest)));
        }
    }
    Ok(None)
}

pub fn is_indecomposable(alpha: &Element) -> Result<bool> {
    Ok(indecomposable_witness(alpha)?.is_none())
}

fn require_k49(order: &CubicOrderSpec) -> Result<()> {
    if order.is_k49() {
        Ok(())
    } else {
        Err(Error::UnsupportedOrder(format!("{order:?} is not K49")))
    }
}

/// The unit `u` (canonical sign) with `alpha = u²·(1 + θ + θ²)`, if any.
pub fn unit_square_factor(alpha: &Element) -> Result<Option<Element>> {
    let order = alpha.order();
    require_k49(order)?;
    let gamma = match alpha.divide_exact(&order.special()) {
        Ok(g) => g,
        Err(Error::NotDivisible) => return Ok(None),
        Err(e) => return Err(e),
    };
    if !gamma.is_unit() {
        return Ok(None);
    }
    Ok(gamma.is_square())
}

/// Truth values of the five equivalent statements about a totally positive
/// element of K49.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Statements {
    /// Not a sum of squares (no decomposition with up to six squares).
    pub not_sum_of_squares: bool,
    /// Not a sum of four squares, zeros allowed.
    pub not_sum_of_four: bool,
    pub norm_is_seven: bool,
    /// `α = u²·(1 + θ + θ²)` for a unit `u`.
    pub unit_square_times_special: bool,
    /// Indecomposable and not a square.
    pub indecomposable_nonsquare: bool,
}

impl Statements {
    pub fn as_array(&self) -> [bool; 5] {
        [self.not_sum_of_squares, self.not_sum_of_four, self.norm_is_seven, self.unit_square_times_special, self.indecomposable_nonsquare]
    }

    pub fn consistent(&self) -> bool {
        let a = self.as_array();
        a.iter().all(|&b| b == a[0])
    }
}

pub const STATEMENT_TAGS: [&str; 5] =
    ["not-in-sum-of-squares", "not-sum-of-four", "norm-is-7", "unit-square-times-special", "indecomposable-nonsquare"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationReport {
    pub target: Element,
    pub statements: Statements,
    /// Shortest decomposition found within [`EXCEPTIONAL_SEARCH_CAP`] squares.
    pub decomposition: Option<Decomposition>,
    /// Padded four-square representation.
    pub four_squares: Option<Decomposition>,
    pub unit_factor: Option<Element>,
    pub splitting: Option<(Element, Element)>,
    pub square_root: Option<Element>,
    pub consistent: bool,
}

/// Evaluates every statement independently of the others.
pub fn classify(alpha: &Element) -> Result<ClassificationReport> {
    require_k49(alpha.order())?;
    if !alpha.is_totally_positive() {
        return Err(Error::NotTotallyPositive);
    }
    let search = Decomposer::new(alpha);
    let decomposition = (1..=EXCEPTIONAL_SEARCH_CAP).find_map(|n| search.find(n, false));
    let four_squares = search.find(4, true);
    let unit_factor = unit_square_factor(alpha)?;
    let splitting = indecomposable_witness(alpha)?;
    let square_root = alpha.is_square();
    let statements = Statements {
        not_sum_of_squares: decomposition.is_none(),
        not_sum_of_four: four_squares.is_none(),
        norm_is_seven: alpha.norm() == BigInt::from(7),
        unit_square_times_special: unit_factor.is_some(),
        indecomposable_nonsquare: splitting.is_none() && square_root.is_none(),
    };
    Ok(ClassificationReport {
        target: alpha.clone(),
        consistent: statements.consistent(),
        statements,
        decomposition,
        four_squares,
        unit_factor,
        splitting,
        square_root,
    })
}

/// [`classify`], failing with [`Error::InconsistentEquivalence`] unless all
/// five statements agree.
pub fn verify_theorem_2_3(alpha: &Element) -> Result<ClassificationReport> {
    let report = classify(alpha)?;
    if !report.consistent {
        return Err(Error::InconsistentEquivalence(format!("{alpha}: {:?}", report.statements)));
    }
    Ok(report)
}

/// Units `u` in canonical sign with `Tr(c·u²) <= bound`.
pub fn units_with_weighted_square_trace(c: &Element, bound: &BigInt) -> Result<Vec<Element>> {
    let order = c.order();
    let form = form_of_quadratic(&OrderForm::diagonal(order, vec![c.clone()])?)?;
    Ok(form
        .points(&Rational::from_integer(bound.clone()))
        .map(|v| order.from_coords([v[0].clone(), v[1].clone(), v[2].clone()]))
        .filter(|u| u.is_unit() && &u.canonical_sign() == u)
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndecomposableSurvey {
    pub trace_bound: BigInt,
    /// Totally positive elements examined.
    pub examined: usize,
    /// Indecomposables with trace at most the bound, in enumeration order.
    pub found: Vec<Element>,
    /// `u²` and `u²·(1 + θ + θ²)` with trace at most the bound, from units
    /// enumerated directly. Only computed in K49.
    pub expected: Option<Vec<Element>>,
}

impl IndecomposableSurvey {
    pub fn matches_expected(&self) -> Option<bool> {
        let expected = self.expected.as_ref()?;
        let a: BTreeSet<_> = self.found.iter().map(|e| e.coords().clone()).collect();
        let b: BTreeSet<_> = expected.iter().map(|e| e.coords().clone()).collect();
        Some(a == b)
    }
}

pub fn indecomposables_up_to_trace(order: &CubicOrderSpec, trace_bound: &BigInt) -> Result<IndecomposableSurvey> {
    let candidates = totally_positive_up_to_trace(order, trace_bound);
    let mut found = Vec::new();
    for a in &candidates {
        if is_indecomposable(a)? {
            found.push(a.clone());
        }
    }
    let expected = if order.is_k49() {
        let mut out = Vec::new();
        for c in [order.one(), order.special()] {
            for u in units_with_weighted_square_trace(&c, trace_bound)? {
                out.push(&c * u.square());
            }
        }
        Some(out)
    } else {
        None
    };
    Ok(IndecomposableSurvey { trace_bound: trace_bound.clone(), examined: candidates.len(), found, expected })
}

/// Units `u` with `Tr(u²) <= bound` where total positivity and being a
/// square disagree. Empty in K49.
pub fn unit_positivity_exceptions(order: &CubicOrderSpec, bound: &BigInt) -> Result<(usize, Vec<Element>)> {
    let units = units_with_weighted_square_trace(&order.one(), bound)?;
    let mut bad = Vec::new();
    for u in &units {
        if u.is_totally_positive() != u.is_square().is_some() {
            bad.push(u.clone());
        }
        let v = -u;
        if v.is_totally_positive() != v.is_square().is_some() {
            bad.push(v);
        }
    }
    Ok((2 * units.len(), bad))
}

/// Whether `alpha` is a sum of at most `n` squares, zeros allowed.
pub fn is_sum_of_at_most(alpha: &Element, n: usize) -> bool {
    decompose(alpha, n, true).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k49() -> CubicOrderSpec {
        CubicOrderSpec::k49()
    }

    #[test]
    fn indecomposable_examples() {
        let o = k49();
        assert!(is_indecomposable(&o.one()).unwrap());
        assert!(is_indecomposable(&o.special()).unwrap());
        assert_eq!(indecomposable_witness(&o.from_int(2)).unwrap(), Some((o.one(), o.one())));
        assert_eq!(is_indecomposable(&o.theta()), Err(Error::NotTotallyPositive));
    }

    #[test]
    fn unit_factor_examples() {
        let o = k49();
        let s = o.special();
        assert_eq!(unit_square_factor(&s).unwrap(), Some(o.one()));
        let rho = o.theta();
        assert_eq!(unit_square_factor(&(rho.square() * &s)).unwrap(), Some(rho.clone()));
        assert_eq!(unit_square_factor(&(rho.square() * &s * -o.one())).unwrap(), None);
        assert_eq!(unit_square_factor(&o.from_int(7)).unwrap(), None);
        let other = CubicOrderSpec::new(0, -3, -1).unwrap();
        assert!(matches!(unit_square_factor(&other.one()), Err(Error::UnsupportedOrder(_))));
    }

    #[test]
    fn classification_examples() {
        let o = k49();
        let r = verify_theorem_2_3(&o.special()).unwrap();
        assert_eq!(r.statements.as_array(), [true; 5]);
        assert_eq!(r.unit_factor, Some(o.one()));
        for n in [7, 4] {
            let r = verify_theorem_2_3(&o.from_int(n)).unwrap();
            assert_eq!(r.statements.as_array(), [false; 5]);
            assert!(r.decomposition.unwrap().verify());
        }
        assert!(verify_theorem_2_3(&o.one()).unwrap().square_root.is_some());
    }

    #[test]
    fn small_indecomposable_survey() {
        let o = k49();
        let s3 = indecomposables_up_to_trace(&o, &BigInt::from(3)).unwrap();
        assert!(s3.found.contains(&o.one()));
        let s7 = indecomposables_up_to_trace(&o, &BigInt::from(7)).unwrap();
        assert!(s7.found.contains(&o.special()));
        let s = indecomposables_up_to_trace(&o, &BigInt::from(16)).unwrap();
        assert_eq!(s.matches_expected(), Some(true));
    }

    #[test]
    fn units_are_squares_iff_totally_positive() {
        let o = k49();
        let (checked, bad) = unit_positivity_exceptions(&o, &BigInt::from(200)).unwrap();
        assert!(checked > 10);
        assert!(bad.is_empty(), "{bad:?}");
    }

    #[test]
    fn indecomposability_is_invariant_under_unit_squares() {
        let o = k49();
        let u = o.theta() + o.one();
        for a in totally_positive_up_to_trace(&o, &BigInt::from(10)) {
            let b = &a * u.square();
            assert_eq!(is_indecomposable(&a).unwrap(), is_indecomposable(&b).unwrap(), "{a}");
        }
    }
}
