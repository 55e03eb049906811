//! Length survey over all totally positive elements up to a trace bound.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lattice::totally_positive_up_to_trace;
use crate::order::{CubicOrderSpec, Element};
use crate::sos::{length_with_cap, Decomposer, Decomposition, LengthValue, SearchMode, DEFAULT_LENGTH_CAP};
use crate::text::{element_to_json, elements_to_json, order_to_json};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub order: CubicOrderSpec,
    pub trace_bound: u64,
    pub max_length_cap: usize,
    pub deterministic: bool,
    pub workers: usize,
    pub output: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            order: CubicOrderSpec::k49(),
            trace_bound: 30,
            max_length_cap: DEFAULT_LENGTH_CAP,
            deterministic: true,
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            output: OutputFormat::Text,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trace_bound < 3 {
            return Err(Error::Config(format!("trace bound {} is below 3", self.trace_bound)));
        }
        if self.workers == 0 {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        if self.max_length_cap == 0 {
            return Err(Error::Config("length cap must be at least 1".into()));
        }
        Ok(())
    }

    pub fn search_mode(&self) -> SearchMode {
        if self.deterministic {
            SearchMode::Deterministic
        } else {
            SearchMode::FirstFound
        }
    }

    pub fn trace_bound_int(&self) -> BigInt {
        BigInt::from(self.trace_bound)
    }

    /// Runs `f` on a pool with the configured number of workers.
    pub fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T> {
        let pool =
            rayon::ThreadPoolBuilder::new().num_threads(self.workers).build().map_err(|e| Error::Config(format!("thread pool: {e}")))?;
        Ok(pool.install(f))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub element: Element,
    pub message: String,
}

impl Violation {
    pub fn to_json(&self) -> Value {
        json!({ "element": element_to_json(&self.element), "message": self.message })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurveyReport {
    pub order: CubicOrderSpec,
    pub trace_bound: u64,
    pub total_elements: usize,
    pub length_histogram: BTreeMap<usize, usize>,
    /// Elements with no decomposition, each paired with its norm.
    pub exceptional: Vec<(Element, BigInt)>,
    pub max_length: usize,
    /// A decomposition realizing `max_length`, first in enumeration order.
    pub max_length_witness: Option<Decomposition>,
    /// Theorem checks that failed; always empty outside K49, where the
    /// checks become observations.
    pub violations: Vec<Violation>,
    pub observations: Vec<String>,
    pub elapsed_ms: u128,
}

impl SurveyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Everything except timing; identical across worker counts.
    pub fn verdict_json(&self) -> Value {
        let histogram: serde_json::Map<String, Value> = self.length_histogram.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
        let exceptional: Vec<Value> = self
            .exceptional
            .iter()
            .map(|(e, n)| json!({ "element": element_to_json(e), "norm": n.to_string().parse::<serde_json::Number>().unwrap() }))
            .collect();
        json!({
            "order": order_to_json(&self.order),
            "traceBound": self.trace_bound,
            "totalElements": self.total_elements,
            "lengthHistogram": histogram,
            "exceptionalElements": exceptional,
            "maxLength": self.max_length,
            "maxLengthWitness": self.max_length_witness.as_ref().map(|d| json!({
                "target": element_to_json(d.target()),
                "witness": elements_to_json(d.terms()),
            })),
            "violations": self.violations.iter().map(Violation::to_json).collect::<Vec<_>>(),
            "observations": self.observations,
            "passed": self.passed(),
        })
    }

    pub fn to_json(&self) -> Value {
        json!({ "schemaVersion": SCHEMA_VERSION, "survey": self.verdict_json(), "elapsedMs": self.elapsed_ms as u64 })
    }

    pub fn to_text(&self) -> String {
        let (p, q, r) = self.order.coefficients();
        let mut s = format!("order ({p},{q},{r}), trace bound {}\n", self.trace_bound);
        s += &format!("totally positive elements: {}\n", self.total_elements);
        for (len, count) in &self.length_histogram {
            s += &format!("  length {len}: {count}\n");
        }
        s += &format!("exceptional elements: {}\n", self.exceptional.len());
        for (e, n) in &self.exceptional {
            s += &format!("  {e}  (norm {n})\n");
        }
        s += &format!("max length: {}\n", self.max_length);
        for o in &self.observations {
            s += &format!("observation: {o}\n");
        }
        for v in &self.violations {
            s += &format!("VIOLATION: {}: {}\n", v.element, v.message);
        }
        s += &format!("elapsed: {} ms\n", self.elapsed_ms);
        s
    }
}

enum Outcome {
    Length(usize, Decomposition),
    Exceptional(BigInt),
    CapExhausted(usize),
    Violation(String),
}

/// In K49 an exceptional element must have norm 7 and no decomposition with
/// up to `cap` squares; both are checked rather than assumed.
fn survey_one(alpha: &Element, cap: usize) -> Outcome {
    let k49 = alpha.order().is_k49();
    match length_with_cap(alpha, cap) {
        Err(e) => Outcome::Violation(e.to_string()),
        Ok(res) => match (res.value, res.witness) {
            (LengthValue::Finite(n), Some(w)) => Outcome::Length(n, w),
            (LengthValue::NotASumOfSquares, _) if k49 => {
                let norm = alpha.norm();
                let search = Decomposer::new(alpha);
                match (1..=cap).find_map(|n| search.find(n, false)) {
                    Some(d) => Outcome::Violation(format!("element of norm {norm} has a decomposition into {} squares", d.len())),
                    None if norm != BigInt::from(7) => Outcome::Violation(format!("exceptional element has norm {norm}")),
                    None => Outcome::Exceptional(norm),
                }
            }
            (LengthValue::NotFoundUpToCap(c), _) => Outcome::CapExhausted(c),
            (value, _) => Outcome::Violation(format!("unexpected length result {value:?}")),
        },
    }
}

pub fn survey(config: &RunConfig) -> Result<SurveyReport> {
    config.validate()?;
    let start = Instant::now();
    let order = &config.order;
    let k49 = order.is_k49();
    let elements = totally_positive_up_to_trace(order, &config.trace_bound_int());
    let cap = config.max_length_cap;
    let outcomes: Vec<Outcome> = config.install(|| elements.par_iter().map(|a| survey_one(a, cap)).collect())?;

    let mut length_histogram = BTreeMap::new();
    let mut exceptional = Vec::new();
    let mut max_length = 0;
    let mut max_length_witness = None;
    let mut violations = Vec::new();
    let mut observations = Vec::new();
    for (alpha, outcome) in elements.iter().zip(outcomes) {
        match outcome {
            Outcome::Length(n, w) => {
                *length_histogram.entry(n).or_insert(0) += 1;
                if n > max_length {
                    max_length = n;
                    max_length_witness = Some(w);
                }
            }
            Outcome::Exceptional(norm) => exceptional.push((alpha.clone(), norm)),
            Outcome::CapExhausted(c) => {
                let norm = alpha.norm();
                observations.push(format!("{alpha}: no decomposition with at most {c} squares (norm {norm})"));
                exceptional.push((alpha.clone(), norm));
            }
            Outcome::Violation(message) => {
                if k49 {
                    violations.push(Violation { element: alpha.clone(), message });
                } else {
                    observations.push(format!("{alpha}: {message}"));
                }
            }
        }
    }
    if k49 && max_length > crate::sos::K49_PYTHAGORAS_NUMBER {
        let w = max_length_witness.as_ref().expect("positive max length has a witness");
        violations.push(Violation { element: w.target().clone(), message: format!("length {max_length} exceeds 4") });
    }
    exceptional.sort_by(|a, b| a.0.cmp_coords(&b.0));
    Ok(SurveyReport {
        order: order.clone(),
        trace_bound: config.trace_bound,
        total_elements: elements.len(),
        length_histogram,
        exceptional,
        max_length,
        max_length_witness,
        violations,
        observations,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(bound: u64, workers: usize) -> RunConfig {
        RunConfig { trace_bound: bound, workers, ..RunConfig::default() }
    }

    #[test]
    fn small_bounds() {
        let o = CubicOrderSpec::k49();
        let r3 = survey(&config(3, 1)).unwrap();
        assert_eq!(r3.total_elements, 1);
        assert_eq!(r3.length_histogram.get(&1), Some(&1));
        assert!(r3.exceptional.is_empty());
        let r6 = survey(&config(6, 2)).unwrap();
        assert!(r6.exceptional.is_empty());
        let r7 = survey(&config(7, 2)).unwrap();
        assert!(r7.exceptional.iter().any(|(e, n)| e == &o.special() && n == &BigInt::from(7)));
        assert!(r7.passed());
    }

    #[test]
    fn histogram_accounts_for_every_element() {
        let r = survey(&config(21, 4)).unwrap();
        assert!(r.passed());
        assert_eq!(r.max_length, 4);
        let sum: usize = r.length_histogram.values().sum();
        assert_eq!(sum + r.exceptional.len(), r.total_elements);
        assert!(r.exceptional.iter().all(|(_, n)| n == &BigInt::from(7)));
    }

    #[test]
    fn verdict_independent_of_workers() {
        let a = survey(&config(12, 1)).unwrap().verdict_json();
        let b = survey(&config(12, 8)).unwrap().verdict_json();
        assert_eq!(a.to_string(), b.to_string());
    }

    #[test]
    fn rejects_bad_config() {
        assert!(matches!(survey(&config(2, 1)), Err(Error::Config(_))));
        assert!(matches!(survey(&config(10, 0)), Err(Error::Config(_))));
    }

    #[test]
    fn generic_order_downgrades_checks() {
        let cfg = RunConfig { order: CubicOrderSpec::new(0, -3, -1).unwrap(), trace_bound: 9, max_length_cap: 3, ..config(9, 2) };
        let r = survey(&cfg).unwrap();
        assert!(r.violations.is_empty());
        let sum: usize = r.length_histogram.values().sum();
        assert_eq!(sum + r.exceptional.len(), r.total_elements);
    }
}
