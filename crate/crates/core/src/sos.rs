//! Sums of squares: decompositions, lengths, the three-squares criterion and
//! representations by the two universal forms.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::dyadic;
use crate::error::{Error, Result};
use crate::lattice::{form_of_quadratic, OrderForm, PosDefForm, Rational};
use crate::order::{CubicOrderSpec, Element};

/// Largest length searched in orders other than K49.
pub const DEFAULT_LENGTH_CAP: usize = 6;

/// Upper bound on the length in K49.
pub const K49_PYTHAGORAS_NUMBER: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormKind {
    SumOfSquares,
    KalaYatsyna,
    DiagonalFive,
}

impl FormKind {
    pub fn tag(self) -> &'static str {
        match self {
            FormKind::SumOfSquares => "sum-of-squares",
            FormKind::KalaYatsyna => "kala-yatsyna",
            FormKind::DiagonalFive => "diagonal-5var",
        }
    }
}

/// The two universal forms over K49.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UniversalForm {
    /// `x² + y² + z² + w² + xw + yw + zw`
    KalaYatsyna,
    /// `x₁² + x₂² + x₃² + x₄² + (1 + θ + θ²)·x₅²`
    DiagonalFive,
}

impl UniversalForm {
    pub fn kind(self) -> FormKind {
        match self {
            UniversalForm::KalaYatsyna => FormKind::KalaYatsyna,
            UniversalForm::DiagonalFive => FormKind::DiagonalFive,
        }
    }

    pub fn order_form(self, order: &CubicOrderSpec) -> OrderForm {
        match self {
            UniversalForm::KalaYatsyna => OrderForm::kala_yatsyna(order),
            UniversalForm::DiagonalFive => OrderForm::diagonal_five(order),
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "kala-yatsyna" | "ky" => Some(UniversalForm::KalaYatsyna),
            "diagonal-5var" | "d5" => Some(UniversalForm::DiagonalFive),
            _ => None,
        }
    }
}

/// How parallel searches pick among several witnesses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SearchMode {
    /// The first witness in sequential enumeration order.
    #[default]
    Deterministic,
    /// Whichever witness a worker finds first.
    FirstFound,
}

/// A verified representation of `target` by one of the supported forms.
///
/// For [`FormKind::KalaYatsyna`] the coefficients are the diagonal ones; the
/// cross terms `xw + yw + zw` are implied by the kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    target: Element,
    terms: Vec<Element>,
    coefficients: Vec<Element>,
    kind: FormKind,
}

impl Decomposition {
    /// Builds and re-checks a decomposition.
    pub fn new(target: Element, terms: Vec<Element>, kind: FormKind) -> Result<Self> {
        let order = target.order().clone();
        let form = match kind {
            FormKind::SumOfSquares => OrderForm::sum_of_squares(&order, terms.len()),
            FormKind::KalaYatsyna => OrderForm::kala_yatsyna(&order),
            FormKind::DiagonalFive => OrderForm::diagonal_five(&order),
        };
        let value = form.evaluate(&terms).map_err(|e| Error::InvalidWitness(format!("{} terms for {}: {e}", terms.len(), kind.tag())))?;
        if value != target {
            return Err(Error::InvalidWitness(format!("{} evaluates to {value}, not {target}", kind.tag())));
        }
        let coefficients = match kind {
            FormKind::KalaYatsyna => vec![order.one(); 4],
            _ => form.diagonal_coefficients().expect("diagonal form"),
        };
        Ok(Decomposition { target, terms, coefficients, kind })
    }

    pub fn target(&self) -> &Element {
        &self.target
    }

    pub fn terms(&self) -> &[Element] {
        &self.terms
    }

    pub fn coefficients(&self) -> &[Element] {
        &self.coefficients
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Whether some term is zero.
    pub fn is_padded(&self) -> bool {
        self.terms.iter().any(Element::is_zero)
    }

    pub fn nonzero_terms(&self) -> usize {
        self.terms.iter().filter(|t| !t.is_zero()).count()
    }

    /// Recomputes the form value from the terms.
    pub fn verify(&self) -> bool {
        Decomposition::new(self.target.clone(), self.terms.clone(), self.kind).is_ok()
    }

    /// The same decomposition with every term multiplied by `u`, a
    /// decomposition of `u²·target`.
    pub fn scaled_by(&self, u: &Element) -> Result<Self> {
        let terms = self.terms.iter().map(|t| t.try_mul(u)).collect::<Result<Vec<_>>>()?;
        Decomposition::new(self.target.try_mul(&u.square())?, terms, self.kind)
    }
}

struct Candidate {
    root: Element,
    square: Element,
    trace: BigInt,
}

/// Exhaustive search for sums of squares equal to a fixed target.
///
/// Candidates are the `x` in canonical sign with `α − x²` totally
/// nonnegative. Every such `x` has `Tr(x²) <= Tr(α)` because each conjugate
/// of `x²` is dominated by the matching conjugate of `α`, so the trace form
/// ellipsoid at `Tr(α)` contains all of them. They are sorted by
/// non-increasing `Tr(x²)`, then by coordinates, and a branch only uses
/// candidates at or after its previous one, so each multiset of terms is
/// visited once.
pub struct Decomposer {
    target: Element,
    candidates: Vec<Candidate>,
    by_square: HashMap<Element, usize>,
}

impl Decomposer {
    pub fn new(target: &Element) -> Self {
        let order = target.order();
        let mut candidates = Vec::new();
        if !target.is_zero() && target.is_totally_nonnegative() {
            let bound = Rational::from_integer(target.trace());
            for v in order.trace_form().points(&bound) {
                let x = order.from_coords([v[0].clone(), v[1].clone(), v[2].clone()]);
                if x.is_zero() || x.canonical_sign() != x {
                    continue;
                }
                let square = x.square();
                if !(target - &square).is_totally_nonnegative() {
                    continue;
                }
                candidates.push(Candidate { trace: square.trace(), root: x, square });
            }
        }
        candidates.sort_by(|a, b| b.trace.cmp(&a.trace).then_with(|| a.root.cmp_coords(&b.root)));
        let by_square = candidates.iter().enumerate().map(|(i, c)| (c.square.clone(), i)).collect();
        Decomposer { target: target.clone(), candidates, by_square }
    }

    pub fn target(&self) -> &Element {
        &self.target
    }

    /// Number of admissible squares.
    pub fn candidate_count(&self) -> usize {
        self.candidates.len()
    }

    /// Sequential search; see [`Decomposer::find_with`].
    pub fn find(&self, n: usize, padded: bool) -> Option<Decomposition> {
        let mut acc = Vec::new();
        self.search(&self.target, n, 0, padded, &mut acc).then(|| self.finish(acc, n))
    }

    /// A decomposition into exactly `n` squares, all nonzero unless `padded`.
    ///
    /// The first level is split across rayon workers.
    pub fn find_with(&self, n: usize, padded: bool, mode: SearchMode) -> Option<Decomposition> {
        let rem = &self.target;
        if n <= 1 || rem.is_zero() {
            return self.find(n, padded);
        }
        let first = self.first_index(&rem.trace(), 0);
        let branch = |i: usize| {
            let c = &self.candidates[i];
            if &c.trace * n < rem.trace() {
                return None;
            }
            let next = rem - &c.square;
            if !next.is_totally_nonnegative() {
                return None;
            }
            let mut acc = vec![i];
            self.search(&next, n - 1, i, padded, &mut acc).then_some(acc)
        };
        let range = (first..self.candidates.len()).into_par_iter();
        let found = match mode {
            SearchMode::Deterministic => range.find_map_first(branch),
            SearchMode::FirstFound => range.find_map_any(branch),
        };
        found.map(|acc| self.finish(acc, n))
    }

    fn first_index(&self, trace: &BigInt, start: usize) -> usize {
        self.candidates.partition_point(|c| &c.trace > trace).max(start)
    }

    fn search(&self, rem: &Element, k: usize, start: usize, padded: bool, acc: &mut Vec<usize>) -> bool {
        if rem.is_zero() {
            return k == 0 || padded;
        }
        if k == 0 {
            return false;
        }
        if k == 1 {
            return match self.by_square.get(rem) {
                Some(&i) if i >= start => {
                    acc.push(i);
                    true
                }
                _ => false,
            };
        }
        let tr = rem.trace();
        for i in self.first_index(&tr, start)..self.candidates.len() {
            let c = &self.candidates[i];
            // The remaining k terms each have trace at most c.trace.
            if &c.trace * k < tr {
                break;
            }
            let next = rem - &c.square;
            if !next.is_totally_nonnegative() {
                continue;
            }
            acc.push(i);
            if self.search(&next, k - 1, i, padded, acc) {
                return true;
            }
            acc.pop();
        }
        false
    }

    fn finish(&self, acc: Vec<usize>, n: usize) -> Decomposition {
        let order = self.target.order();
        let mut terms: Vec<Element> = acc.into_iter().map(|i| self.candidates[i].root.clone()).collect();
        terms.resize(n, order.zero());
        Decomposition::new(self.target.clone(), terms, FormKind::SumOfSquares).expect("search result verifies")
    }
}

/// A sum of exactly `n` squares equal to `alpha`, or `None` if there is none.
///
/// With `padded`, zero terms are allowed (a representation by the sum of `n`
/// squares form); otherwise every term is nonzero.
pub fn decompose(alpha: &Element, n: usize, padded: bool) -> Option<Decomposition> {
    Decomposer::new(alpha).find(n, padded)
}

pub fn decompose_with(alpha: &Element, n: usize, padded: bool, mode: SearchMode) -> Option<Decomposition> {
    Decomposer::new(alpha).find_with(n, padded, mode)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LengthValue {
    Finite(usize),
    /// Certified: no decomposition exists at any length.
    NotASumOfSquares,
    /// No decomposition with at most `cap` squares; only in orders where no
    /// bound on the length is known.
    NotFoundUpToCap(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certificate {
    NotTotallyNonnegative,
    /// Totally positive of norm 7 in K49, i.e. a unit square times `1 + θ + θ²`.
    Norm7Exceptional,
    CapExhausted {
        cap: usize,
    },
}

impl Certificate {
    pub fn tag(self) -> &'static str {
        match self {
            Certificate::NotTotallyNonnegative => "not-totally-nonnegative",
            Certificate::Norm7Exceptional => "norm-7-exceptional",
            Certificate::CapExhausted { .. } => "length-cap-exhausted",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LengthResult {
    pub target: Element,
    pub value: LengthValue,
    pub witness: Option<Decomposition>,
    pub certificate: Option<Certificate>,
}

impl LengthResult {
    pub fn finite(&self) -> Option<usize> {
        match self.value {
            LengthValue::Finite(n) => Some(n),
            _ => None,
        }
    }
}

/// Length with the default cap for orders other than K49.
pub fn length(alpha: &Element) -> Result<LengthResult> {
    length_with_cap(alpha, DEFAULT_LENGTH_CAP)
}

/// Minimal number of nonzero squares summing to `alpha`.
///
/// In K49 a failure to find a decomposition with at most four squares
/// contradicts the Pythagoras number bound and is reported as
/// [`Error::TheoremViolation`].
pub fn length_with_cap(alpha: &Element, cap: usize) -> Result<LengthResult> {
    let order = alpha.order();
    let result = |value, witness, certificate| LengthResult { target: alpha.clone(), value, witness, certificate };
    if alpha.is_zero() {
        let empty = Decomposition::new(alpha.clone(), Vec::new(), FormKind::SumOfSquares)?;
        return Ok(result(LengthValue::Finite(0), Some(empty), None));
    }
    if !alpha.is_totally_nonnegative() {
        return Ok(result(LengthValue::NotASumOfSquares, None, Some(Certificate::NotTotallyNonnegative)));
    }
    if order.is_k49() && alpha.norm() == BigInt::from(7) {
        return Ok(result(LengthValue::NotASumOfSquares, None, Some(Certificate::Norm7Exceptional)));
    }
    let max = if order.is_k49() { K49_PYTHAGORAS_NUMBER } else { cap };
    let search = Decomposer::new(alpha);
    for n in 1..=max {
        if let Some(d) = search.find(n, false) {
            return Ok(result(LengthValue::Finite(n), Some(d), None));
        }
    }
    if order.is_k49() {
        return Err(Error::TheoremViolation(format!("{alpha} is not a sum of {max} squares")));
    }
    Ok(result(LengthValue::NotFoundUpToCap(cap), None, Some(Certificate::CapExhausted { cap })))
}

fn require_k49(order: &CubicOrderSpec) -> Result<()> {
    if order.is_k49() {
        Ok(())
    } else {
        Err(Error::UnsupportedOrder(format!("{order:?} is not K49")))
    }
}

/// The local-global criterion for sums of three squares in K49: `alpha` is
/// a sum of three squares (zeros allowed) iff it is totally positive and not
/// of the form `−t²` in the dyadic completion.
pub fn is_sum_of_three_local_global(alpha: &Element) -> Result<bool> {
    require_k49(alpha.order())?;
    if alpha.is_zero() {
        return Err(Error::ZeroElement);
    }
    Ok(alpha.is_totally_positive() && !dyadic::is_minus_square_local(alpha)?)
}

/// Exhaustive representability by the sum of three squares, zeros allowed.
pub fn represents_i3(alpha: &Element) -> bool {
    decompose(alpha, 3, true).is_some()
}

/// A four-square decomposition `(x+y)² + (x−y)² + z² + z²` of `alpha` built
/// from a three-square representation `x² + y² + z²` of `alpha/2`.
///
/// Requires `alpha` totally positive and dyadically `−(2t)²`; then `alpha/2`
/// has odd valuation and is a sum of three squares.
pub fn four_squares_for_even_case(alpha: &Element) -> Result<Decomposition> {
    let fail = |why: &str| Err(Error::PreconditionViolated(format!("{alpha}: {why}")));
    if !alpha.is_totally_positive() {
        return fail("not totally positive");
    }
    match dyadic::v2(alpha)? {
        Some(v) if v >= 2 => {}
        _ => return fail("2-adic valuation below 2"),
    }
    if !dyadic::is_minus_square_local(alpha)? {
        return fail("not a dyadic minus square");
    }
    let half = alpha.div_int(&BigInt::from(2)).expect("valuation at least 2");
    let three = match decompose(&half, 3, true) {
        Some(d) => d,
        None if alpha.order().is_k49() => {
            return Err(Error::TheoremViolation(format!("{half} is not a sum of three squares")));
        }
        None => return fail("half is not a sum of three squares"),
    };
    let [x, y, z] = [&three.terms[0], &three.terms[1], &three.terms[2]];
    Decomposition::new(alpha.clone(), vec![x + y, x - y, z.clone(), z.clone()], FormKind::SumOfSquares)
}

/// `(x, y, z, w) ↦ (x+y+w, x−y, z+w, z)`, turning a value `β` of the
/// Kala–Yatsyna form into four squares summing to `2β`.
pub fn doubling_map(v: &[Element; 4]) -> [Element; 4] {
    let [x, y, z, w] = v;
    [x + y + w, x - y, z + w, z.clone()]
}

pub fn double_then_four_squares(alpha: &Element) -> Result<Decomposition> {
    double_then_four_squares_with(alpha, SearchMode::Deterministic)
}

/// Four squares summing to an even totally positive `alpha`, obtained by
/// representing `alpha/2` with the Kala–Yatsyna form and applying
/// [`doubling_map`].
pub fn double_then_four_squares_with(alpha: &Element, mode: SearchMode) -> Result<Decomposition> {
    if !alpha.is_totally_positive() {
        return Err(Error::NotTotallyPositive);
    }
    let half = alpha.div_int(&BigInt::from(2)).ok_or(Error::NotEven)?;
    let ky =
        represent_by_form_with(&half, UniversalForm::KalaYatsyna, mode)?.ok_or_else(|| Error::KyRepresentationMissing(half.to_string()))?;
    let v = [ky.terms[0].clone(), ky.terms[1].clone(), ky.terms[2].clone(), ky.terms[3].clone()];
    let squares = doubling_map(&v).iter().map(Element::canonical_sign).collect();
    Decomposition::new(alpha.clone(), squares, FormKind::SumOfSquares)
}

/// The coordinates of `Q(x)` as integer quadratic polynomials in the stacked
/// coordinates of `x`.
struct QuadraticMap {
    order: CubicOrderSpec,
    entries: Vec<(usize, usize, [BigInt; 3])>,
    small: Vec<(usize, usize, [i128; 3])>,
}

/// Inputs below this magnitude are evaluated in `i128`.
const SMALL_INPUT: i64 = 1 << 24;

impl QuadraticMap {
    fn new(form: &OrderForm) -> Self {
        let order = form.order().clone();
        let basis = [order.one(), order.theta(), order.theta().square()];
        let mut acc: BTreeMap<(usize, usize), [BigInt; 3]> = BTreeMap::new();
        for (i, j, c) in form.terms() {
            for k in 0..3 {
                for l in 0..3 {
                    let (a, b) = (3 * i + k, 3 * j + l);
                    let key = (a.min(b), a.max(b));
                    let prod = c * &basis[k] * &basis[l];
                    let slot = acc.entry(key).or_default();
                    for (s, v) in slot.iter_mut().zip(prod.coords()) {
                        *s += v;
                    }
                }
            }
        }
        let entries: Vec<_> = acc.into_iter().filter(|(_, c)| c.iter().any(|x| !x.is_zero())).map(|((a, b), c)| (a, b, c)).collect();
        let small = entries.iter().map(|(a, b, c)| (*a, *b, c.clone().map(|x| x.to_i128().expect("small form coefficient")))).collect();
        QuadraticMap { order, entries, small }
    }

    fn eval(&self, v: &[BigInt]) -> Element {
        let small: Option<Vec<i128>> = v.iter().map(|x| x.to_i64().filter(|x| x.abs() < SMALL_INPUT).map(i128::from)).collect();
        if let Some(s) = small {
            let mut out = [0i128; 3];
            for (a, b, c) in &self.small {
                let m = s[*a] * s[*b];
                if m != 0 {
                    for (o, k) in out.iter_mut().zip(c) {
                        *o += k * m;
                    }
                }
            }
            return self.order.from_coords(out.map(BigInt::from));
        }
        let mut out: [BigInt; 3] = Default::default();
        for (a, b, c) in &self.entries {
            let m = &v[*a] * &v[*b];
            for (o, k) in out.iter_mut().zip(c) {
                *o += k * &m;
            }
        }
        self.order.from_coords(out)
    }
}

struct FormSearch {
    kind: FormKind,
    form: OrderForm,
    trace_form: PosDefForm,
    map: QuadraticMap,
}

impl FormSearch {
    fn new(order: &CubicOrderSpec, which: UniversalForm) -> Result<Self> {
        let form = which.order_form(order);
        let trace_form = form_of_quadratic(&form)?;
        let map = QuadraticMap::new(&form);
        Ok(FormSearch { kind: which.kind(), form, trace_form, map })
    }

    /// Witness for an enumerated point, with signs normalized: per term for
    /// diagonal forms, for the whole vector otherwise.
    fn decomposition(&self, target: &Element, v: &[BigInt]) -> Decomposition {
        let mut terms = self.form.unpack(v);
        if self.form.diagonal_coefficients().is_some() {
            terms = terms.iter().map(Element::canonical_sign).collect();
        } else if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
            terms = terms.iter().map(|t| -t).collect();
        }
        Decomposition::new(target.clone(), terms, self.kind).expect("enumerated point verifies")
    }
}

pub fn represent_by_form(alpha: &Element, form: UniversalForm) -> Result<Option<Decomposition>> {
    represent_by_form_with(alpha, form, SearchMode::Deterministic)
}

/// Exhaustive search for `x` with `Q(x) = alpha`.
///
/// Solutions lie on the shell `Tr(Q(x)) = Tr(alpha)` of the stacked trace
/// form, which is searched slice by slice in parallel.
pub fn represent_by_form_with(alpha: &Element, form: UniversalForm, mode: SearchMode) -> Result<Option<Decomposition>> {
    let search = FormSearch::new(alpha.order(), form)?;
    let shell = Rational::from_integer(alpha.trace());
    let hit = |slice: crate::lattice::Points| slice.into_iter().find(|v| &search.map.eval(v) == alpha);
    let slices = search.trace_form.slices(&shell, true).into_par_iter();
    let found = match mode {
        SearchMode::Deterministic => slices.find_map_first(hit),
        SearchMode::FirstFound => slices.find_map_any(hit),
    };
    Ok(found.map(|v| search.decomposition(alpha, &v)))
}

/// Witnesses for every value of a universal form with trace at most a bound.
///
/// One pass over the ellipsoid `Tr(Q(x)) <= bound`; for each value the first
/// point in enumeration order is kept, so the table does not depend on the
/// number of workers.
pub struct RepresentationTable {
    form: UniversalForm,
    trace_bound: BigInt,
    points: u64,
    witnesses: HashMap<Element, Vec<BigInt>>,
    search: FormSearch,
}

/// A represented value with the first coefficient vector reaching it.
type FirstWitness = (Element, Vec<BigInt>);

impl RepresentationTable {
    pub fn build(order: &CubicOrderSpec, form: UniversalForm, trace_bound: &BigInt) -> Result<Self> {
        let search = FormSearch::new(order, form)?;
        let bound = Rational::from_integer(trace_bound.clone());
        let pieces: Vec<(u64, Vec<FirstWitness>)> = search
            .trace_form
            .slices(&bound, false)
            .into_par_iter()
            .map(|slice| {
                let mut seen = HashSet::new();
                let mut firsts = Vec::new();
                let mut count = 0u64;
                for v in slice {
                    count += 1;
                    let value = search.map.eval(&v);
                    if seen.insert(value.clone()) {
                        firsts.push((value, v));
                    }
                }
                (count, firsts)
            })
            .collect();
        let mut witnesses = HashMap::new();
        let mut points = 0;
        for (count, firsts) in pieces {
            points += count;
            for (value, v) in firsts {
                witnesses.entry(value).or_insert(v);
            }
        }
        Ok(RepresentationTable { form, trace_bound: trace_bound.clone(), points, witnesses, search })
    }

    pub fn form(&self) -> UniversalForm {
        self.form
    }

    pub fn trace_bound(&self) -> &BigInt {
        &self.trace_bound
    }

    /// Number of lattice points visited.
    pub fn points_visited(&self) -> u64 {
        self.points
    }

    /// Number of distinct values found.
    pub fn len(&self) -> usize {
        self.witnesses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.witnesses.is_empty()
    }

    /// A witness for `alpha`. `None` is conclusive when `Tr(alpha)` is within
    /// the table's bound.
    pub fn get(&self, alpha: &Element) -> Option<Decomposition> {
        self.witnesses.get(alpha).map(|v| self.search.decomposition(alpha, v))
    }

    pub fn covers(&self, alpha: &Element) -> bool {
        alpha.trace() <= self.trace_bound
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::totally_positive_up_to_trace;
    use proptest::prelude::*;

    fn k49() -> CubicOrderSpec {
        CubicOrderSpec::k49()
    }

    /// Every multiset of `n` nonzero squares (canonical sign) from the
    /// trace-form ellipsoid, without pruning.
    fn brute_force_sums(order: &CubicOrderSpec, n: usize, trace_bound: i64, padded: bool) -> std::collections::HashSet<Element> {
        let roots: Vec<Element> = order
            .trace_form()
            .points(&Rational::from_integer(BigInt::from(trace_bound)))
            .map(|v| order.from_coords([v[0].clone(), v[1].clone(), v[2].clone()]))
            .filter(|x| padded || !x.is_zero())
            .filter(|x| &x.canonical_sign() == x)
            .collect();
        let mut sums = std::collections::HashSet::new();
        fn rec(roots: &[Element], start: usize, left: usize, acc: Element, bound: i64, out: &mut std::collections::HashSet<Element>) {
            if acc.trace() > BigInt::from(bound) {
                return;
            }
            if left == 0 {
                out.insert(acc);
                return;
            }
            for i in start..roots.len() {
                rec(roots, i, left - 1, &acc + roots[i].square(), bound, out);
            }
        }
        rec(&roots, 0, n, order.zero(), trace_bound, &mut sums);
        sums
    }

    #[test]
    fn seven_needs_four_squares() {
        let o = k49();
        let seven = o.from_int(7);
        assert!(decompose(&seven, 3, false).is_none());
        assert!(decompose(&seven, 3, true).is_none());
        let d = decompose(&seven, 4, false).unwrap();
        assert_eq!(d.len(), 4);
        assert!(d.verify());
        let l = length(&seven).unwrap();
        assert_eq!(l.value, LengthValue::Finite(4));
        assert!(l.witness.unwrap().verify());
    }

    #[test]
    fn small_lengths() {
        let o = k49();
        assert_eq!(length(&o.zero()).unwrap().value, LengthValue::Finite(0));
        assert_eq!(length(&o.one()).unwrap().value, LengthValue::Finite(1));
        let two = length(&o.from_int(2)).unwrap();
        assert_eq!(two.value, LengthValue::Finite(2));
        assert!(decompose(&o.from_int(2), 1, false).is_none());
        let l = length(&o.special()).unwrap();
        assert_eq!(l.value, LengthValue::NotASumOfSquares);
        assert_eq!(l.certificate, Some(Certificate::Norm7Exceptional));
        let neg = length(&o.theta()).unwrap();
        assert_eq!(neg.certificate, Some(Certificate::NotTotallyNonnegative));
    }

    #[test]
    fn length_two_golden_for_two_plus_theta_squared() {
        let o = k49();
        let a = o.element(2, 0, 1);
        assert!(a.is_totally_positive());
        let d = decompose(&a, 2, false);
        let l = length(&a).unwrap();
        assert_eq!(d.is_some(), l.finite() == Some(2) || l.finite() == Some(1));
        assert!(l.finite().unwrap() <= 4);
    }

    #[test]
    fn terms_follow_canonical_order() {
        let o = k49();
        for a in totally_positive_up_to_trace(&o, &BigInt::from(14)) {
            if let Some(d) = length(&a).unwrap().witness {
                for t in d.terms() {
                    assert_eq!(&t.canonical_sign(), t);
                }
                for w in d.terms().windows(2) {
                    assert!(w[0].trace_of_square() >= w[1].trace_of_square());
                }
            }
        }
    }

    #[test]
    fn decompose_matches_brute_force() {
        let o = k49();
        let bound = 12;
        for n in 1..=3 {
            for padded in [false, true] {
                let sums = brute_force_sums(&o, n, bound, padded);
                for a in totally_positive_up_to_trace(&o, &BigInt::from(bound)) {
                    assert_eq!(decompose(&a, n, padded).is_some(), sums.contains(&a), "{a} n={n} padded={padded}");
                }
            }
        }
    }

    #[test]
    fn parallel_modes_agree() {
        let o = k49();
        for a in totally_positive_up_to_trace(&o, &BigInt::from(12)) {
            for n in 1..=4 {
                let seq = decompose(&a, n, false);
                let det = decompose_with(&a, n, false, SearchMode::Deterministic);
                let any = decompose_with(&a, n, false, SearchMode::FirstFound);
                assert_eq!(seq, det);
                assert_eq!(seq.is_some(), any.is_some());
                if let Some(d) = any {
                    assert!(d.verify());
                }
            }
        }
    }

    #[test]
    fn three_squares_criterion_examples() {
        let o = k49();
        assert!(!is_sum_of_three_local_global(&o.from_int(7)).unwrap());
        assert!(is_sum_of_three_local_global(&o.from_int(2)).unwrap());
        assert!(is_sum_of_three_local_global(&o.from_int(3)).unwrap());
        assert!(represents_i3(&o.from_int(2)));
        assert_eq!(is_sum_of_three_local_global(&o.zero()), Err(Error::ZeroElement));
        let other = CubicOrderSpec::new(0, -3, -1).unwrap();
        assert!(matches!(is_sum_of_three_local_global(&other.one()), Err(Error::UnsupportedOrder(_))));
    }

    #[test]
    fn three_squares_criterion_matches_search() {
        let o = k49();
        let bound = Rational::from_integer(BigInt::from(200));
        for v in o.trace_form().points(&bound) {
            let a = o.from_coords([v[0].clone(), v[1].clone(), v[2].clone()]);
            if a.is_zero() {
                continue;
            }
            assert_eq!(is_sum_of_three_local_global(&a).unwrap(), represents_i3(&a), "{a}");
        }
    }

    #[test]
    fn even_case_construction() {
        let o = k49();
        let d = four_squares_for_even_case(&o.from_int(28)).unwrap();
        assert_eq!(d.len(), 4);
        assert!(d.verify());
        assert!(matches!(four_squares_for_even_case(&o.from_int(7)), Err(Error::PreconditionViolated(_))));
        assert!(matches!(four_squares_for_even_case(&o.from_int(4)), Err(Error::PreconditionViolated(_))));
        let mut hits = 0;
        for a in totally_positive_up_to_trace(&o, &BigInt::from(24)) {
            let a = a.scale(&BigInt::from(4));
            if dyadic::is_minus_square_local(&a).unwrap() {
                let d = four_squares_for_even_case(&a).unwrap();
                assert!(d.verify());
                hits += 1;
            }
        }
        assert!(hits > 0);
    }

    #[test]
    fn doubling_examples() {
        let o = k49();
        let d = double_then_four_squares(&o.from_int(2)).unwrap();
        assert!(d.verify());
        assert_eq!(d.nonzero_terms(), 2);
        assert!(d.terms().iter().all(|t| t.is_zero() || t.is_one()));
        let d = double_then_four_squares(&o.from_int(14)).unwrap();
        assert!(d.verify());
        assert_eq!(double_then_four_squares(&o.from_int(7)), Err(Error::NotEven));
        assert_eq!(double_then_four_squares(&o.zero()), Err(Error::NotTotallyPositive));
        let d = double_then_four_squares_with(&o.special().scale(&BigInt::from(2)), SearchMode::FirstFound).unwrap();
        assert!(d.verify());
    }

    #[test]
    fn universal_form_examples() {
        let o = k49();
        let s = o.special();
        let d5 = represent_by_form(&s, UniversalForm::DiagonalFive).unwrap().unwrap();
        assert_eq!(d5.terms(), &[o.zero(), o.zero(), o.zero(), o.zero(), o.one()]);
        assert_eq!(d5.coefficients()[4], s);
        let ky = represent_by_form(&s, UniversalForm::KalaYatsyna).unwrap().unwrap();
        assert!(ky.terms().iter().any(|t| !t.is_zero()));
        assert!(represent_by_form(&o.theta(), UniversalForm::KalaYatsyna).unwrap().is_none());
    }

    #[test]
    fn table_agrees_with_direct_search() {
        let o = k49();
        let bound = BigInt::from(12);
        for form in [UniversalForm::KalaYatsyna, UniversalForm::DiagonalFive] {
            let table = RepresentationTable::build(&o, form, &bound).unwrap();
            for a in totally_positive_up_to_trace(&o, &bound) {
                let direct = represent_by_form(&a, form).unwrap();
                let cached = table.get(&a);
                assert!(direct.is_some(), "{a} via {form:?}");
                assert!(cached.unwrap().verify());
            }
        }
    }

    #[test]
    fn invalid_witness_is_rejected() {
        let o = k49();
        let bad = Decomposition::new(o.from_int(3), vec![o.one(), o.one()], FormKind::SumOfSquares);
        assert!(matches!(bad, Err(Error::InvalidWitness(_))));
        let short = Decomposition::new(o.from_int(3), vec![o.one()], FormKind::DiagonalFive);
        assert!(matches!(short, Err(Error::InvalidWitness(_))));
    }

    #[test]
    fn generic_order_reports_cap() {
        let o = CubicOrderSpec::new(0, -3, -1).unwrap();
        let l = length_with_cap(&o.from_int(7), 2).unwrap();
        assert_eq!(l.value, LengthValue::NotFoundUpToCap(2));
        assert_eq!(l.certificate, Some(Certificate::CapExhausted { cap: 2 }));
        assert_eq!(length_with_cap(&o.from_int(2), 2).unwrap().value, LengthValue::Finite(2));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn unit_square_scaling_keeps_length(idx in 0usize..64, e in 0u32..3) {
            let o = k49();
            let tp = totally_positive_up_to_trace(&o, &BigInt::from(16));
            let a = &tp[idx % tp.len()];
            let u = (o.theta() + o.one()).pow(e) * o.theta().pow(e);
            let la = length(a).unwrap();
            let scaled = a * &u.square();
            let lb = length(&scaled).unwrap();
            prop_assert_eq!(la.value, lb.value);
            if let Some(w) = la.witness {
                prop_assert!(w.scaled_by(&u).unwrap().verify());
            }
        }
    }
}
