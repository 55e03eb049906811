//! Lattice-point enumeration inside ellipsoids of positive definite forms.
//!
//! Every bounded search in the crate goes through [`PosDefForm::points`]:
//! squares, decompositions, units, indecomposables and surveys. The Gram matrix
//! is factored exactly as `Q(x) = Σ dᵢ (xᵢ + Σ_{j>i} μᵢⱼ xⱼ)²` over the
//! rationals, and the factorization is then scaled to integers so that the
//! per-coordinate intervals come from integer square roots and floor/ceil
//! divisions. No lattice point is lost to rounding.
//!
//! Enumeration order: the last coordinate is outermost and every coordinate
//! runs upwards, so the output is lexicographic from the last index inward.

#![allow(clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::order::{CubicOrderSpec, Element};

pub type Rational = BigRational;

/// A positive definite quadratic form `v ↦ vᵀ·G·v` with rational Gram matrix.
#[derive(Clone, Debug)]
pub struct PosDefForm {
    gram: Vec<Vec<Rational>>,
    pivots: Vec<Rational>,
    upper: Vec<Vec<Rational>>,
    inverse_diag: Vec<Rational>,
    scaled: Scaled,
}

/// The LDL factorization with every denominator cleared:
/// `Q(x) = Σ weights[i]·(m·xᵢ + Σ_{j>i} cross[i][j]·xⱼ)² / scale`.
#[derive(Clone, Debug)]
struct Scaled {
    m: BigInt,
    cross: Vec<Vec<BigInt>>,
    weights: Vec<BigInt>,
    scale: BigInt,
}

fn lcm_all<'a>(it: impl Iterator<Item = &'a BigInt>) -> BigInt {
    it.fold(BigInt::one(), |acc, d| acc.lcm(d))
}

impl PosDefForm {
    pub fn new(gram: Vec<Vec<Rational>>) -> Result<Self> {
        let n = gram.len();
        if n == 0 {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        for row in &gram {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: row.len() });
            }
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::NotPositiveDefinite);
                }
            }
        }

        let mut pivots: Vec<Rational> = Vec::with_capacity(n);
        let mut upper = vec![vec![Rational::zero(); n]; n];
        for i in 0..n {
            let mut d = gram[i][i].clone();
            for k in 0..i {
                d -= &pivots[k] * &upper[k][i] * &upper[k][i];
            }
            if !d.is_positive() {
                return Err(Error::NotPositiveDefinite);
            }
            for j in i + 1..n {
                let mut s = gram[i][j].clone();
                for k in 0..i {
                    s -= &pivots[k] * &upper[k][i] * &upper[k][j];
                }
                upper[i][j] = s / &d;
            }
            pivots.push(d);
        }

        let inverse_diag = inverse_diagonal(&gram);

        let m = lcm_all((0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| upper[i][j].denom()));
        let cross: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if j > i { (&upper[i][j] * Rational::from_integer(m.clone())).to_integer() } else { BigInt::zero() })
                    .collect()
            })
            .collect();
        let lcm_b = lcm_all(pivots.iter().map(|d| d.denom()));
        let weights = pivots.iter().map(|d| d.numer() * (&lcm_b / d.denom())).collect();
        let scale = lcm_b * &m * &m;

        Ok(PosDefForm { gram, pivots, upper, inverse_diag, scaled: Scaled { m, cross, weights, scale } })
    }

    pub fn from_integer_gram(gram: &[Vec<BigInt>]) -> Result<Self> {
        Self::new(gram.iter().map(|row| row.iter().map(|x| Rational::from_integer(x.clone())).collect()).collect())
    }

    pub fn dim(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<Rational>] {
        &self.gram
    }

    /// Diagonal of the exact LDL factorization; all strictly positive.
    pub fn pivots(&self) -> &[Rational] {
        &self.pivots
    }

    /// Strictly upper triangular factor `μ`.
    pub fn ldl_upper(&self) -> &[Vec<Rational>] {
        &self.upper
    }

    pub fn evaluate(&self, v: &[BigInt]) -> Rational {
        let n = self.dim();
        assert_eq!(v.len(), n, "vector length must match the form dimension");
        let mut acc = Rational::zero();
        for i in 0..n {
            for j in 0..n {
                if !v[i].is_zero() && !v[j].is_zero() {
                    acc += &self.gram[i][j] * Rational::from_integer(&v[i] * &v[j]);
                }
            }
        }
        acc
    }

    /// `|vᵢ| <= bounds[i]` for every `v` with `Q(v) <= bound`, from `vᵢ² <= bound·(G⁻¹)ᵢᵢ`.
    pub fn coordinate_bounds(&self, bound: &Rational) -> Vec<BigInt> {
        if bound.is_negative() {
            return vec![BigInt::zero(); self.dim()];
        }
        self.inverse_diag.iter().map(|g| (bound * g).floor().to_integer().sqrt()).collect()
    }

    /// All integer vectors with `Q(v) <= bound`.
    pub fn points(&self, bound: &Rational) -> Points {
        Points::new(self, bound, false, None)
    }

    /// All integer vectors with `Q(v) = value`.
    pub fn shell(&self, value: &Rational) -> Points {
        Points::new(self, value, true, None)
    }

    /// Range of the outermost (last) coordinate over the ellipsoid, if nonempty.
    pub fn outer_range(&self, bound: &Rational) -> Option<(BigInt, BigInt)> {
        let budget = self.budget(bound)?;
        let s = &self.scaled;
        let n = self.dim();
        let r = (&budget / &s.weights[n - 1]).sqrt();
        let lo = (-&r).div_ceil(&s.m);
        let hi = r.div_floor(&s.m);
        (lo <= hi).then_some((lo, hi))
    }

    /// Disjoint pieces of the ellipsoid, one per value of the outermost
    /// coordinate, in enumeration order. Concatenating them reproduces
    /// [`PosDefForm::points`] exactly.
    pub fn slices(&self, bound: &Rational, exact: bool) -> Vec<Points> {
        match self.outer_range(bound) {
            None => Vec::new(),
            Some((lo, hi)) => {
                let mut out = Vec::new();
                let mut v = lo;
                while v <= hi {
                    out.push(Points::new(self, bound, exact, Some((v.clone(), v.clone()))));
                    v += 1;
                }
                out
            }
        }
    }

    /// Integer budget `floor(bound·scale)`, or `None` for a negative bound.
    fn budget(&self, bound: &Rational) -> Option<BigInt> {
        if bound.is_negative() {
            return None;
        }
        Some((bound * Rational::from_integer(self.scaled.scale.clone())).floor().to_integer())
    }
}

fn inverse_diagonal(gram: &[Vec<Rational>]) -> Vec<Rational> {
    let n = gram.len();
    let mut a: Vec<Vec<Rational>> = gram
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).expect("positive definite matrix is invertible");
        a.swap(col, piv);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..2 * n {
                    let t = &f * &a[col][c];
                    a[r][c] -= t;
                }
            }
        }
    }
    (0..n).map(|i| a[i][n + i].clone()).collect()
}

/// Integer arithmetic used by the enumeration walker.
trait Lane: Clone + Integer + Signed + Roots {
    fn from_big(v: &BigInt) -> Self;
    fn to_big(&self) -> BigInt;
}

impl Lane for i128 {
    fn from_big(v: &BigInt) -> Self {
        v.to_i128().expect("value checked to fit in i128")
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Lane for BigInt {
    fn from_big(v: &BigInt) -> Self {
        v.clone()
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// Depth-first walker over the scaled factorization.
#[derive(Clone, Debug)]
struct Walker<T> {
    n: usize,
    exact: bool,
    m: T,
    cross: Vec<Vec<T>>,
    weights: Vec<T>,
    start_budget: T,
    outer: Option<(T, T)>,
    x: Vec<T>,
    hi: Vec<T>,
    shift: Vec<T>,
    budget: Vec<T>,
    level: usize,
    started: bool,
    done: bool,
}

impl<T: Lane> Walker<T> {
    fn new(s: &Scaled, budget: &BigInt, exact: bool, outer: Option<&(BigInt, BigInt)>) -> Self {
        let n = s.weights.len();
        Walker {
            n,
            exact,
            m: T::from_big(&s.m),
            cross: s.cross.iter().map(|row| row.iter().map(T::from_big).collect()).collect(),
            weights: s.weights.iter().map(T::from_big).collect(),
            start_budget: T::from_big(budget),
            outer: outer.map(|(a, b)| (T::from_big(a), T::from_big(b))),
            x: vec![T::zero(); n],
            hi: vec![T::zero(); n],
            shift: vec![T::zero(); n],
            budget: vec![T::zero(); n],
            level: n - 1,
            started: false,
            done: false,
        }
    }

    /// Sets the interval of coordinate `i` given the outer coordinates.
    fn open_level(&mut self, i: usize) {
        let mut s = T::zero();
        for j in i + 1..self.n {
            if !self.cross[i][j].is_zero() && !self.x[j].is_zero() {
                s = s + self.cross[i][j].clone() * self.x[j].clone();
            }
        }
        let rem = self.budget[i].clone();
        let (mut lo, mut hi) = if rem.is_negative() {
            (T::one(), T::zero())
        } else {
            // weights[i]·y² <= rem  ⟺  |y| <= isqrt(floor(rem / weights[i]))
            let r = (rem / self.weights[i].clone()).sqrt();
            let neg = -(s.clone()) - r.clone();
            (neg.div_ceil(&self.m), (r - s.clone()).div_floor(&self.m))
        };
        if i == self.n - 1 {
            if let Some((a, b)) = &self.outer {
                if *a > lo {
                    lo = a.clone();
                }
                if *b < hi {
                    hi = b.clone();
                }
            }
        }
        self.shift[i] = s;
        self.x[i] = lo;
        self.hi[i] = hi;
    }

    fn next_point(&mut self) -> Option<Vec<T>> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.level = self.n - 1;
            self.budget[self.n - 1] = self.start_budget.clone();
            self.open_level(self.n - 1);
        }
        loop {
            let i = self.level;
            if self.x[i] > self.hi[i] {
                if i == self.n - 1 {
                    self.done = true;
                    return None;
                }
                self.level += 1;
                let up = self.level;
                self.x[up] = self.x[up].clone() + T::one();
                continue;
            }
            let y = self.m.clone() * self.x[i].clone() + self.shift[i].clone();
            let left = self.budget[i].clone() - self.weights[i].clone() * y.clone() * y;
            if i == 0 {
                let point = self.x.clone();
                self.x[0] = self.x[0].clone() + T::one();
                if !self.exact || left.is_zero() {
                    return Some(point);
                }
                continue;
            }
            self.budget[i - 1] = left;
            self.level = i - 1;
            self.open_level(i - 1);
        }
    }
}

/// Stream of lattice points; see [`PosDefForm::points`].
#[derive(Clone, Debug)]
pub struct Points(Inner);

#[derive(Clone, Debug)]
enum Inner {
    Empty,
    Small(Walker<i128>),
    Big(Walker<BigInt>),
}

impl Points {
    fn new(form: &PosDefForm, bound: &Rational, exact: bool, outer: Option<(BigInt, BigInt)>) -> Self {
        let s = &form.scaled;
        let budget = if exact {
            let v = bound * Rational::from_integer(s.scale.clone());
            if bound.is_negative() || !v.is_integer() {
                return Points(Inner::Empty);
            }
            v.to_integer()
        } else {
            match form.budget(bound) {
                Some(b) => b,
                None => return Points(Inner::Empty),
            }
        };

        // A priori magnitude of every intermediate value: coordinates stay
        // within the box (plus one overshoot step), so |y| <= Y and all
        // products are at most weight·Y².
        let bx: Vec<BigInt> = form.coordinate_bounds(bound).into_iter().map(|b| b + 2).collect();
        let n = form.dim();
        let mut worst = budget.abs();
        for i in 0..n {
            let mut y = s.m.abs() * &bx[i];
            for j in i + 1..n {
                y += s.cross[i][j].abs() * &bx[j];
            }
            let term = s.weights[i].abs() * &y * &y + &y;
            if term > worst {
                worst = term;
            }
        }
        if worst.bits() < 120 {
            Points(Inner::Small(Walker::new(s, &budget, exact, outer.as_ref())))
        } else {
            Points(Inner::Big(Walker::new(s, &budget, exact, outer.as_ref())))
        }
    }
}

impl Iterator for Points {
    type Item = Vec<BigInt>;

    fn next(&mut self) -> Option<Vec<BigInt>> {
        match &mut self.0 {
            Inner::Empty => None,
            Inner::Small(w) => w.next_point().map(|v| v.iter().map(Lane::to_big).collect()),
            Inner::Big(w) => w.next_point(),
        }
    }
}

/// All integer vectors `v` with `vᵀ·G·v <= bound`.
pub fn enumerate_ellipsoid(form: &PosDefForm, bound: &Rational) -> Points {
    form.points(bound)
}

/// The form `v ↦ Tr(elem(v)²)` on coordinates over the power basis.
pub fn trace_square_form(order: &CubicOrderSpec) -> PosDefForm {
    let g: Vec<Vec<BigInt>> = order.trace_gram().iter().map(|row| row.to_vec()).collect();
    PosDefForm::from_integer_gram(&g).expect("trace form of a totally real order is positive definite")
}

/// A quadratic form `Σ_{i<=j} c_ij·x_i·x_j` with coefficients in the order.
#[derive(Clone, Debug)]
pub struct OrderForm {
    order: CubicOrderSpec,
    vars: usize,
    terms: Vec<(usize, usize, Element)>,
}

impl OrderForm {
    pub fn new(order: &CubicOrderSpec, vars: usize, terms: Vec<(usize, usize, Element)>) -> Result<Self> {
        for (i, j, c) in &terms {
            if i > j || *j >= vars {
                return Err(Error::DimensionMismatch { expected: vars, found: (*j).max(*i) + 1 });
            }
            if c.order() != order {
                return Err(Error::MixedOrders);
            }
        }
        Ok(OrderForm { order: order.clone(), vars, terms })
    }

    pub fn diagonal(order: &CubicOrderSpec, coefficients: Vec<Element>) -> Result<Self> {
        let n = coefficients.len();
        Self::new(order, n, coefficients.into_iter().enumerate().map(|(i, c)| (i, i, c)).collect())
    }

    pub fn sum_of_squares(order: &CubicOrderSpec, n: usize) -> Self {
        Self::diagonal(order, vec![order.one(); n]).expect("unit coefficients")
    }

    /// `x² + y² + z² + w² + xw + yw + zw`.
    pub fn kala_yatsyna(order: &CubicOrderSpec) -> Self {
        let one = order.one();
        let mut terms: Vec<_> = (0..4).map(|i| (i, i, one.clone())).collect();
        terms.extend((0..3).map(|i| (i, 3, one.clone())));
        Self::new(order, 4, terms).expect("valid indices")
    }

    /// `x₁² + x₂² + x₃² + x₄² + (1 + θ + θ²)·x₅²`.
    pub fn diagonal_five(order: &CubicOrderSpec) -> Self {
        let one = order.one();
        Self::diagonal(order, vec![one.clone(), one.clone(), one.clone(), one, order.special()]).expect("same order")
    }

    pub fn order(&self) -> &CubicOrderSpec {
        &self.order
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn terms(&self) -> &[(usize, usize, Element)] {
        &self.terms
    }

    /// Diagonal coefficients, when the form has no cross terms.
    pub fn diagonal_coefficients(&self) -> Option<Vec<Element>> {
        let mut out = vec![self.order.zero(); self.vars];
        for (i, j, c) in &self.terms {
            if i != j {
                return None;
            }
            out[*i] = &out[*i] + c;
        }
        Some(out)
    }

    pub fn evaluate(&self, xs: &[Element]) -> Result<Element> {
        if xs.len() != self.vars {
            return Err(Error::DimensionMismatch { expected: self.vars, found: xs.len() });
        }
        let mut acc = self.order.zero();
        for (i, j, c) in &self.terms {
            if xs[*i].is_zero() || xs[*j].is_zero() {
                continue;
            }
            acc = acc.try_add(&c.try_mul(&xs[*i])?.try_mul(&xs[*j])?)?;
        }
        Ok(acc)
    }

    /// Splits stacked coordinates (three per variable) into elements.
    pub fn unpack(&self, v: &[BigInt]) -> Vec<Element> {
        unpack(&self.order, v)
    }
}

pub fn unpack(order: &CubicOrderSpec, v: &[BigInt]) -> Vec<Element> {
    v.chunks(3).map(|c| order.from_coords([c[0].clone(), c[1].clone(), c[2].clone()])).collect()
}

/// The `3n`-dimensional form `x ↦ Tr(Q(x))` on stacked coordinates.
///
/// Cross coefficients are split evenly between the two symmetric Gram
/// entries, so odd traces give half-integer entries.
pub fn form_of_quadratic(form: &OrderForm) -> Result<PosDefForm> {
    let order = form.order();
    let n = 3 * form.vars();
    let basis = [order.one(), order.theta(), order.theta().square()];
    let mut gram = vec![vec![Rational::zero(); n]; n];
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    for (i, j, c) in form.terms() {
        for k in 0..3 {
            for l in 0..3 {
                let t = Rational::from_integer((c * &basis[k] * &basis[l]).trace());
                if i == j {
                    gram[3 * i + k][3 * i + l] += t;
                } else {
                    let h = &t * &half;
                    gram[3 * i + k][3 * j + l] += h.clone();
                    gram[3 * j + l][3 * i + k] += h;
                }
            }
        }
    }
    PosDefForm::new(gram)
}

/// Totally positive elements with `Tr(α) <= trace_bound`, in enumeration order.
///
/// Uses the ellipsoid `Tr(α²) <= trace_bound²`, which contains them because
/// `Σσᵢ² <= (Σσᵢ)²` when every conjugate is positive.
pub fn totally_positive_up_to_trace(order: &CubicOrderSpec, trace_bound: &BigInt) -> Vec<Element> {
    if trace_bound.is_negative() {
        return Vec::new();
    }
    let bound = Rational::from_integer(trace_bound * trace_bound);
    order
        .trace_form()
        .points(&bound)
        .map(|v| order.from_coords([v[0].clone(), v[1].clone(), v[2].clone()]))
        .filter(|a| &a.trace() <= trace_bound && a.is_totally_positive())
        .collect()
}
