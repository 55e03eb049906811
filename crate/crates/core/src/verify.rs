//! The theorem checks run by `sosk49 verify`.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::classify::{classify, indecomposables_up_to_trace, IndecomposableSurvey, STATEMENT_TAGS};
use crate::dyadic::{residue_scan_lemmas, scan_hensel_threshold, ScanOutcome, HENSEL_EXPONENT};
use crate::error::{Error, Result};
use crate::identity::doubling_identity_sides;
use crate::lattice::{totally_positive_up_to_trace, Rational};
use crate::order::{CubicOrderSpec, Element};
use crate::sos::{
    decompose, double_then_four_squares_with, is_sum_of_three_local_global, length, represents_i3, RepresentationTable, UniversalForm,
};
use crate::survey::{survey, RunConfig, SurveyReport, SCHEMA_VERSION};
use crate::text::{element_to_json, elements_to_json};

/// Bound on `Tr(α²)` for the three-squares oracle comparison.
pub const THREE_SQUARES_TRACE_SQUARE_BOUND: u64 = 400;

/// Number of even elements pushed through the doubling construction.
pub const DOUBLING_SAMPLES: usize = 100;

pub const DOUBLING_SEED: u64 = 0x5eed_0049;

/// Worker counts compared by the determinism check.
pub const WORKER_COUNTS: [usize; 3] = [1, 4, 8];

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub checked: u64,
    pub summary: String,
    pub counterexample: Option<Value>,
}

impl CheckResult {
    fn new(name: &'static str, checked: u64, summary: String, counterexample: Option<Value>) -> Self {
        CheckResult { name, passed: counterexample.is_none(), checked, summary, counterexample }
    }

    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        let mut s = format!("{status} {:<28} checked={:<8} {}", self.name, self.checked, self.summary);
        if let Some(c) = &self.counterexample {
            s += &format!("\n     counterexample: {c}");
        }
        s
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "passed": self.passed,
            "checked": self.checked,
            "summary": self.summary,
            "counterexample": self.counterexample,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schemaVersion": SCHEMA_VERSION,
            "checks": self.checks.iter().map(CheckResult::to_json).collect::<Vec<_>>(),
            "passed": self.passed(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut s: String = self.checks.iter().map(|c| c.line() + "\n").collect();
        s += if self.passed() { "all checks passed\n" } else { "some checks FAILED\n" };
        s
    }
}

fn require_k49(order: &CubicOrderSpec) -> Result<()> {
    if order.is_k49() {
        Ok(())
    } else {
        Err(Error::UnsupportedOrder("the verification suite needs the order (1,-2,-1)".into()))
    }
}

/// `7` has length 4: a verifying four-square witness exists and exhaustive
/// search rules out three squares, with or without zeros.
pub fn check_length_of_seven(order: &CubicOrderSpec) -> Result<CheckResult> {
    let seven = order.from_int(7);
    let res = length(&seven)?;
    let witness_ok = res.witness.as_ref().is_some_and(|w| w.verify() && w.len() == 4);
    let three = decompose(&seven, 3, true);
    let bad = (res.finite() != Some(4) || !witness_ok || three.is_some()).then(|| {
        json!({
            "length": format!("{:?}", res.value),
            "threeSquares": three.map(|d| elements_to_json(d.terms())),
        })
    });
    let summary = match &res.witness {
        Some(w) => format!("length(7) = 4 via {}", elements_to_json(w.terms())),
        None => "no witness".into(),
    };
    Ok(CheckResult::new("length-of-seven", 2, summary, bad))
}

/// Lengths never exceed 4; once `7` (trace 21) is in range, length 4 occurs.
pub fn check_pythagoras(report: &SurveyReport) -> CheckResult {
    let at_four = report.length_histogram.get(&4).copied().unwrap_or(0);
    let above: usize = report.length_histogram.range(5..).map(|(_, c)| c).sum();
    let needs_four = report.trace_bound >= 21;
    let bad = if let Some(v) = report.violations.first() {
        Some(v.to_json())
    } else if above > 0 || report.max_length > 4 || (needs_four && (report.max_length != 4 || at_four == 0)) {
        Some(json!({ "maxLength": report.max_length, "lengthFour": at_four, "lengthAboveFour": above }))
    } else {
        None
    };
    let summary =
        format!("maxLength={} histogram={:?} exceptional={}", report.max_length, report.length_histogram, report.exceptional.len());
    CheckResult::new("pythagoras-number", report.total_elements as u64, summary, bad)
}

pub fn check_exceptional_equivalence(config: &RunConfig, elements: &[Element]) -> Result<CheckResult> {
    let reports = config.install(|| elements.par_iter().map(classify).collect::<Result<Vec<_>>>())??;
    let exceptional = reports.iter().filter(|r| r.consistent && r.statements.norm_is_seven).count();
    let bad = reports.iter().find(|r| !r.consistent).map(|r| {
        let values: serde_json::Map<String, Value> =
            STATEMENT_TAGS.iter().zip(r.statements.as_array()).map(|(t, b)| (t.to_string(), json!(b))).collect();
        json!({ "element": element_to_json(&r.target), "statements": values })
    });
    Ok(CheckResult::new("exceptional-equivalence", reports.len() as u64, format!("{exceptional} exceptional, all of norm 7"), bad))
}

pub fn check_three_squares(config: &RunConfig) -> Result<CheckResult> {
    let order = &config.order;
    let bound = Rational::from_integer(BigInt::from(THREE_SQUARES_TRACE_SQUARE_BOUND));
    let elements: Vec<Element> = order
        .trace_form()
        .points(&bound)
        .map(|v| order.from_coords([v[0].clone(), v[1].clone(), v[2].clone()]))
        .filter(|a| !a.is_zero())
        .collect();
    let results = config
        .install(|| elements.par_iter().map(|a| Ok((is_sum_of_three_local_global(a)?, represents_i3(a)))).collect::<Result<Vec<_>>>())??;
    let represented = results.iter().filter(|r| r.1).count();
    let bad = elements
        .iter()
        .zip(&results)
        .find(|(_, (local, global))| local != global)
        .map(|(a, (local, global))| json!({ "element": element_to_json(a), "criterion": local, "search": global }));
    let summary = format!("Tr(a^2) <= {THREE_SQUARES_TRACE_SQUARE_BOUND}: {represented} sums of three squares");
    Ok(CheckResult::new("three-squares-local-global", elements.len() as u64, summary, bad))
}

fn scan_failure(s: &ScanOutcome) -> Option<Value> {
    (!s.passed()).then(|| json!({ "scan": s.name, "counterexamples": s.counterexamples, "examples": format!("{:?}", s.examples) }))
}

pub fn check_residue_scans(order: &CubicOrderSpec) -> Result<CheckResult> {
    let report = residue_scan_lemmas(order, HENSEL_EXPONENT)?;
    let checked = report.scans.iter().map(|s| s.checked).sum();
    let summary = report.scans.iter().map(|s| format!("{}={}", s.name, s.checked)).collect::<Vec<_>>().join(" ");
    let bad = report.scans.iter().find_map(scan_failure);
    Ok(CheckResult::new("dyadic-residue-scans", checked, summary, bad))
}

pub fn check_hensel_threshold(order: &CubicOrderSpec) -> Result<CheckResult> {
    let s = scan_hensel_threshold(order)?;
    Ok(CheckResult::new("hensel-threshold", s.checked, "unit squares mod 32 agree with mod 8".into(), scan_failure(&s)))
}

pub fn check_universal_forms(config: &RunConfig, elements: &[Element]) -> Result<CheckResult> {
    let mut checked = 0;
    let mut parts = Vec::new();
    for form in [UniversalForm::KalaYatsyna, UniversalForm::DiagonalFive] {
        let table = config.install(|| RepresentationTable::build(&config.order, form, &config.trace_bound_int()))??;
        let mut norm7 = 0;
        for a in elements {
            checked += 1;
            match table.get(a) {
                Some(d) if d.verify() => {
                    if a.norm() == BigInt::from(7) {
                        norm7 += 1;
                    }
                }
                _ => {
                    let bad = json!({ "form": form.kind().tag(), "element": element_to_json(a) });
                    return Ok(CheckResult::new("universal-forms", checked, "missing representation".into(), Some(bad)));
                }
            }
        }
        parts.push(format!("{}: {} points, {} norm-7", form.kind().tag(), table.points_visited(), norm7));
    }
    Ok(CheckResult::new("universal-forms", checked, parts.join("; "), None))
}

/// Evaluates both sides of the doubling identity at a few integer points, as a
/// guard on the symbolic expansion.
fn identity_spot_checks() -> bool {
    let (l, r) = doubling_identity_sides();
    let pts: [[i64; 4]; 4] = [[1, 2, 3, 4], [-3, 5, 0, 7], [2, -2, 9, -1], [11, 13, -17, 19]];
    pts.iter().all(|p| {
        let eval = |poly: &crate::identity::Poly4| -> BigInt {
            poly.coefficients().iter().map(|(e, c)| (0..4).fold(c.clone(), |acc, i| acc * BigInt::from(p[i]).pow(e[i]))).sum()
        };
        let [x, y, z, w] = *p;
        let direct = 2 * (x * x + y * y + z * z + w * w + x * w + y * w + z * w);
        eval(&l) == BigInt::from(direct) && eval(&r) == BigInt::from(direct)
    })
}

/// The even elements `2β` fed to the doubling construction: a seeded sample
/// of totally positive `β` with `Tr(β) <= bound/2`, topped up with larger
/// traces when that pool holds fewer than [`DOUBLING_SAMPLES`].
pub fn doubling_sample(order: &CubicOrderSpec, trace_bound: u64) -> Vec<Element> {
    let mut half_bound = (trace_bound / 2).max(1);
    let mut pool = totally_positive_up_to_trace(order, &BigInt::from(half_bound));
    while pool.len() < DOUBLING_SAMPLES {
        half_bound += 1;
        pool = totally_positive_up_to_trace(order, &BigInt::from(half_bound));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(DOUBLING_SEED);
    let two = BigInt::from(2);
    pool.choose_multiple(&mut rng, DOUBLING_SAMPLES).map(|b| b.scale(&two)).collect()
}

pub fn check_doubling(config: &RunConfig) -> Result<CheckResult> {
    let (l, r) = doubling_identity_sides();
    if l != r || !identity_spot_checks() {
        let bad = json!({ "left": format!("{:?}", l.coefficients()), "right": format!("{:?}", r.coefficients()) });
        return Ok(CheckResult::new("doubling-identity", 1, "polynomial sides differ".into(), Some(bad)));
    }
    let sample = doubling_sample(&config.order, config.trace_bound);
    let mode = config.search_mode();
    let results = config.install(|| sample.par_iter().map(|a| double_then_four_squares_with(a, mode)).collect::<Vec<_>>())?;
    let bad = sample.iter().zip(&results).find_map(|(a, res)| match res {
        Ok(d) if d.verify() && d.len() == 4 => None,
        Ok(d) => Some(json!({ "element": element_to_json(a), "witness": elements_to_json(d.terms()) })),
        Err(e) => Some(json!({ "element": element_to_json(a), "error": e.to_string() })),
    });
    let summary = format!("{} monomials match; {} even elements", l.coefficients().len(), sample.len());
    Ok(CheckResult::new("doubling-identity", 1 + sample.len() as u64, summary, bad))
}

pub fn check_indecomposables(survey: &IndecomposableSurvey) -> CheckResult {
    let expected = survey.expected.clone().unwrap_or_default();
    let bad = (survey.matches_expected() != Some(true))
        .then(|| json!({ "found": elements_to_json(&survey.found), "expected": elements_to_json(&expected) }));
    let summary = format!("{} indecomposables, {} expected from units", survey.found.len(), expected.len());
    CheckResult::new("indecomposables", survey.examined as u64, summary, bad)
}

fn indecomposable_verdict(s: &IndecomposableSurvey) -> Value {
    json!({ "found": elements_to_json(&s.found), "expected": s.expected.as_deref().map(elements_to_json) })
}

/// Re-runs the parallel reports with each of [`WORKER_COUNTS`] and compares
/// their verdict JSON byte for byte against the first run.
pub fn check_determinism(config: &RunConfig, baseline: &SurveyReport, indecomposables: &IndecomposableSurvey) -> Result<CheckResult> {
    let base_survey = baseline.verdict_json().to_string();
    let base_indec = indecomposable_verdict(indecomposables).to_string();
    let mut checked = 0;
    for workers in WORKER_COUNTS {
        let cfg = RunConfig { workers, ..config.clone() };
        let s = survey(&cfg)?.verdict_json().to_string();
        let bound = cfg.trace_bound_int();
        let i = indecomposable_verdict(&cfg.install(|| indecomposables_up_to_trace(&cfg.order, &bound))??).to_string();
        checked += 2;
        if s != base_survey || i != base_indec {
            let bad = json!({ "workers": workers, "surveyMatches": s == base_survey, "indecomposablesMatch": i == base_indec });
            return Ok(CheckResult::new("determinism", checked, "verdicts differ".into(), Some(bad)));
        }
    }
    Ok(CheckResult::new("determinism", checked, format!("identical verdicts for workers {WORKER_COUNTS:?}"), None))
}

/// All checks, in order, against the configured order and trace bound.
pub fn run_verify(config: &RunConfig) -> Result<VerifyReport> {
    config.validate()?;
    let order = &config.order;
    require_k49(order)?;
    let elements = totally_positive_up_to_trace(order, &config.trace_bound_int());
    let survey_report = survey(config)?;
    let bound = config.trace_bound_int();
    let indecomposables = config.install(|| indecomposables_up_to_trace(order, &bound))??;
    let checks = vec![
        check_length_of_seven(order)?,
        check_pythagoras(&survey_report),
        check_exceptional_equivalence(config, &elements)?,
        check_three_squares(config)?,
        check_residue_scans(order)?,
        check_hensel_threshold(order)?,
        check_universal_forms(config, &elements)?,
        check_doubling(config)?,
        check_indecomposables(&indecomposables),
        check_determinism(config, &survey_report, &indecomposables)?,
    ];
    Ok(VerifyReport { checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes() {
        let cfg = RunConfig { trace_bound: 10, workers: 2, ..RunConfig::default() };
        let report = run_verify(&cfg).unwrap();
        for c in &report.checks {
            assert!(c.passed, "{}", c.line());
        }
        assert_eq!(report.checks.len(), 10);
    }

    #[test]
    fn rejects_other_orders() {
        let cfg = RunConfig { order: CubicOrderSpec::new(0, -3, -1).unwrap(), ..RunConfig::default() };
        assert!(matches!(run_verify(&cfg), Err(Error::UnsupportedOrder(_))));
    }

    #[test]
    fn doubling_sample_is_reproducible() {
        let o = CubicOrderSpec::k49();
        let a = doubling_sample(&o, 30);
        assert_eq!(a.len(), DOUBLING_SAMPLES);
        assert_eq!(a, doubling_sample(&o, 30));
        assert!(a.iter().all(|x| x.is_totally_positive() && x.div_int(&BigInt::from(2)).is_some()));
    }
}
