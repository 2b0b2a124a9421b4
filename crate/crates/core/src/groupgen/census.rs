use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use super::{ElementRecord, GroupGenError};
use crate::bounds::{mahler_measure, trace_window, voutier_lower_bound};
use crate::exact::{euler_phi, FieldElement, Interval, NumberField, Precision, Rational, RealAlgebraic};
use crate::hyp::{exact_eigenvalue, ElementOrder, IsometryKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// Nontrivial `|tr|` strictly inside `(2cos(π/2d), 2cosh((1/16)(loglog 2d/log 2d)³))`.
    StatedWindow,
    /// Elliptic `|tr|` above the largest `2cos(π/m)` with `φ(2m) ≤ 4d`.
    CorrectedElliptic,
    /// Hyperbolic `|tr|` below the window's upper endpoint.
    CorrectedHyperbolic,
    /// `log M(u_{γ²})` below Voutier's bound at `2d`.
    HyperbolicMahler,
    /// Trace not an algebraic integer.
    Integrality,
    /// Elliptic without a finite order `n` satisfying `φ(n) ≤ 4d`.
    EllipticOrder,
}

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub check: CheckKind,
    pub index: usize,
    pub z: Vec<i64>,
    pub coords: String,
    pub trace: String,
    pub trace_decimal: String,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckSummary {
    pub check: CheckKind,
    pub applicable: bool,
    pub violations: usize,
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceCount {
    pub trace: String,
    pub decimal: String,
    pub count: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceSummary {
    pub index: usize,
    pub abs_trace: String,
    pub decimal: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ClassCounts {
    pub central: usize,
    pub elliptic: usize,
    pub parabolic: usize,
    pub hyperbolic: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusReport {
    pub degree: u64,
    pub count: usize,
    pub class_counts: ClassCounts,
    pub traces: Vec<TraceCount>,
    pub min_hyperbolic_abs_trace: Option<TraceSummary>,
    pub max_elliptic_abs_trace: Option<TraceSummary>,
    pub window_lower: String,
    pub window_upper: String,
    pub elliptic_max: String,
    pub elliptic_max_m: u64,
    pub voutier_2d: String,
    pub checks: Vec<CheckSummary>,
    pub violations: Vec<Violation>,
}

impl CensusReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations_of(&self, check: CheckKind) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(move |v| v.check == check)
    }
}

fn abs_value(t: &FieldElement) -> RealAlgebraic {
    let v = t.real_value();
    if v.sign() < 0 {
        v.neg()
    } else {
        v
    }
}

fn decimal(v: &RealAlgebraic) -> String {
    v.interval(64).decimal(10)
}

/// Certified comparison of an algebraic number with an enclosure.
fn compare_enclosure(x: &RealAlgebraic, e: &Interval) -> Option<Ordering> {
    Precision::with_cap(e.prec().max(64) + 64).refine(|p| {
        let xi = x.interval(p);
        if xi.certainly_lt(e) {
            Some(Ordering::Less)
        } else if xi.certainly_gt(e) {
            Some(Ordering::Greater)
        } else {
            None
        }
    })
}

/// `log M(u_{γ²})` for the trace `t` of `γ`.
fn log_mahler_of_square(t: &FieldElement) -> Result<Interval, GroupGenError> {
    let tsq = &(t * t) - &FieldElement::from_int(t.field(), 2);
    let u = exact_eigenvalue(&tsq)?;
    let m = mahler_measure(u.minpoly(), &Rational::new(BigInt::one(), BigInt::one() << 96))?;
    Ok(m.ln()?)
}

/// Audits every record against the trace windows for trace-field degree `d`.
pub fn trace_census(records: &[ElementRecord], d: u64) -> Result<CensusReport, GroupGenError> {
    let w = trace_window(d)?;
    let upper = w.upper_interval();
    let emax = &w.corrected_elliptic_max;
    let voutier = voutier_lower_bound(2 * d)?;
    let v_int = voutier.value.interval();

    let mut counts = ClassCounts::default();
    let mut violations = vec![];
    let mut grouped: BTreeMap<String, (FieldElement, usize)> = BTreeMap::new();
    let mut min_hyp: Option<(usize, RealAlgebraic)> = None;
    let mut max_ell: Option<(usize, RealAlgebraic)> = None;

    for (index, r) in records.iter().enumerate() {
        let mut flag = |check: CheckKind, detail: String| {
            violations.push(Violation {
                check,
                index,
                z: r.z.clone(),
                coords: r.coords.to_string(),
                trace: r.trace.to_string(),
                trace_decimal: r.trace_decimal(),
                detail,
            })
        };
        grouped.entry(r.trace.to_string()).or_insert_with(|| (r.trace.clone(), 0)).1 += 1;
        if !r.trace.is_integral() {
            flag(CheckKind::Integrality, "trace is not an algebraic integer".into());
        }
        let kind = r.class.kind;
        match kind {
            IsometryKind::Central => counts.central += 1,
            IsometryKind::Elliptic => counts.elliptic += 1,
            IsometryKind::Parabolic => counts.parabolic += 1,
            IsometryKind::Hyperbolic => counts.hyperbolic += 1,
        }
        if kind == IsometryKind::Central {
            continue;
        }
        let at = abs_value(&r.trace);
        let vs_upper = compare_enclosure(&at, &upper);
        let above_lower = at.cmp(&w.lower) == Ordering::Greater;
        match vs_upper {
            Some(Ordering::Less) if above_lower => {
                flag(CheckKind::StatedWindow, format!("|tr| = {} inside the window", decimal(&at)))
            }
            None if above_lower => flag(
                CheckKind::StatedWindow,
                format!("|tr| = {} not separated from the upper endpoint", decimal(&at)),
            ),
            _ => {}
        }
        match kind {
            IsometryKind::Elliptic => {
                if at.cmp(&emax.value) == Ordering::Greater {
                    flag(
                        CheckKind::CorrectedElliptic,
                        format!("|tr| = {} above 2cos(π/{})", decimal(&at), emax.m),
                    );
                }
                match r.class.order {
                    Some(ElementOrder::Finite(n)) if euler_phi(n) <= 4 * d => {}
                    Some(ElementOrder::Finite(n)) => {
                        flag(CheckKind::EllipticOrder, format!("order {n} has φ({n}) > {}", 4 * d))
                    }
                    _ => flag(CheckKind::EllipticOrder, "no finite order found".into()),
                }
                if max_ell.as_ref().is_none_or(|(_, m)| at.cmp(m) == Ordering::Greater) {
                    max_ell = Some((index, at.clone()));
                }
            }
            IsometryKind::Hyperbolic => {
                if vs_upper != Some(Ordering::Greater) {
                    flag(
                        CheckKind::CorrectedHyperbolic,
                        format!("|tr| = {} not above the window's upper endpoint", decimal(&at)),
                    );
                }
                if voutier.informative {
                    let l = log_mahler_of_square(&r.trace)?;
                    if !v_int.certainly_le(&l) {
                        flag(
                            CheckKind::HyperbolicMahler,
                            format!("log M = {} vs bound {}", l.decimal(10), voutier.value.decimal()),
                        );
                    }
                }
                if min_hyp.as_ref().is_none_or(|(_, m)| at.cmp(m) == Ordering::Less) {
                    min_hyp = Some((index, at.clone()));
                }
            }
            _ => {}
        }
    }

    let mut traces: Vec<(FieldElement, usize)> = grouped.into_values().collect();
    traces.sort_by(|a, b| a.0.real_value().cmp(&b.0.real_value()));
    let summary = |x: Option<(usize, RealAlgebraic)>| {
        x.map(|(index, v)| TraceSummary {
            index,
            abs_trace: match v.as_rational() {
                Some(q) => crate::exact::format_rational(q),
                None => v.minpoly().to_string(),
            },
            decimal: decimal(&v),
        })
    };
    let count_of = |c: CheckKind| violations.iter().filter(|v| v.check == c).count();
    let check = |c: CheckKind, applicable: bool, note: Option<String>| CheckSummary {
        check: c,
        applicable,
        violations: count_of(c),
        note,
    };
    let checks = vec![
        check(CheckKind::StatedWindow, true, None),
        check(CheckKind::CorrectedElliptic, true, None),
        check(CheckKind::CorrectedHyperbolic, true, None),
        check(
            CheckKind::HyperbolicMahler,
            voutier.informative,
            (!voutier.informative).then(|| format!("Voutier bound at n = {} is not positive", 2 * d)),
        ),
        check(CheckKind::Integrality, true, None),
        check(CheckKind::EllipticOrder, true, None),
    ];
    Ok(CensusReport {
        degree: d,
        count: records.len(),
        class_counts: counts,
        traces: traces
            .into_iter()
            .map(|(t, count)| TraceCount {
                decimal: match t.as_rational() {
                    Some(q) => crate::exact::format_sig(q, 10),
                    None => t.embed_prec(64).decimal(10),
                },
                trace: t.to_string(),
                count,
            })
            .collect(),
        min_hyperbolic_abs_trace: summary(min_hyp),
        max_elliptic_abs_trace: summary(max_ell),
        window_lower: decimal(&w.lower),
        window_upper: w.upper.decimal(),
        elliptic_max: decimal(&emax.value),
        elliptic_max_m: emax.m,
        voutier_2d: voutier.value.decimal(),
        checks,
        violations,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceSquareFailure {
    pub index: usize,
    pub trace: String,
    pub trace_of_square: String,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantTraceReport {
    pub checked: usize,
    pub all_integral: bool,
    pub failures: Vec<TraceSquareFailure>,
    /// Distinct `tr(γ²) = tr(γ)² − 2`, increasing.
    pub trace_squares: Vec<String>,
    pub field_degree: usize,
    /// Largest degree over ℚ among the `tr(γ²)`.
    pub max_degree: usize,
    /// Some `tr(γ²)` generates the base field, so `kΓ = k`.
    pub generates_base_field: bool,
    pub trace_ring: String,
}

/// Checks that every `tr(γ²)` is an algebraic integer of the base field.
pub fn invariant_trace_check(records: &[ElementRecord], field: &Arc<NumberField>) -> InvariantTraceReport {
    let mut failures = vec![];
    let mut seen: BTreeMap<String, FieldElement> = BTreeMap::new();
    let mut max_degree = 0;
    for (index, r) in records.iter().enumerate() {
        let t = &r.trace;
        if **t.field() != **field {
            failures.push(TraceSquareFailure {
                index,
                trace: t.to_string(),
                trace_of_square: String::new(),
                reason: "trace lies outside the given field".into(),
            });
            continue;
        }
        let sq = &(t * t) - &FieldElement::from_int(field, 2);
        if !sq.is_integral() {
            failures.push(TraceSquareFailure {
                index,
                trace: t.to_string(),
                trace_of_square: sq.to_string(),
                reason: "tr(γ²) is not an algebraic integer".into(),
            });
        }
        max_degree = max_degree.max(sq.minpoly().degree());
        seen.entry(sq.to_string()).or_insert(sq);
    }
    let mut values: Vec<FieldElement> = seen.into_values().collect();
    values.sort_by(|a, b| a.real_value().cmp(&b.real_value()));
    let all_integral = failures.is_empty();
    let trace_ring = if !all_integral {
        "not integral".to_string()
    } else if field.is_rationals() {
        "Z".to_string()
    } else {
        format!("subring of the integers of a degree-{} field", field.degree())
    };
    InvariantTraceReport {
        checked: records.len(),
        all_integral,
        failures,
        trace_squares: values.iter().map(|v| v.to_string()).collect(),
        field_degree: field.degree(),
        max_degree,
        generates_base_field: !records.is_empty() && max_degree == field.degree(),
        trace_ring,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_rational;
    use crate::groupgen::enumerate::make_record;
    use crate::groupgen::fixtures::{ball, ball50, order};
    use crate::quat::QuatElement;

    fn sixth_root() -> ElementRecord {
        // (1 + j + k)/2 in (2, 3): trace 1, norm 1, order 6
        let alg = order().algebra().clone();
        let h = parse_rational("1/2").unwrap();
        let z = parse_rational("0").unwrap();
        let x = QuatElement::from_rationals(&alg, [h.clone(), z, h.clone(), h]);
        make_record(x, vec![0; 4], false).unwrap()
    }

    #[test]
    fn empty_census() {
        let r = trace_census(&[], 1).unwrap();
        assert_eq!(r.count, 0);
        assert!(r.passed());
        assert!(r.min_hyperbolic_abs_trace.is_none());
    }

    #[test]
    fn trace_one_hits_only_the_uncorrected_window() {
        let rec = sixth_root();
        assert_eq!(rec.order(), Some(ElementOrder::Finite(6)));
        let r = trace_census(&[rec], 1).unwrap();
        assert_eq!(r.violations_of(CheckKind::StatedWindow).count(), 1);
        assert_eq!(r.violations_of(CheckKind::CorrectedElliptic).count(), 0);
        assert_eq!(r.violations_of(CheckKind::EllipticOrder).count(), 0);
        assert_eq!(r.elliptic_max_m, 6);
    }

    #[test]
    fn census_at_fifty() {
        let e = ball50();
        let r = trace_census(&e.records, 1).unwrap();
        assert_eq!(r.count, 1025);
        assert_eq!(r.class_counts.central, 1);
        assert_eq!(r.class_counts.elliptic, 32);
        assert_eq!(r.class_counts.parabolic, 0);
        assert_eq!(r.class_counts.hyperbolic, 992);
        assert_eq!(r.min_hyperbolic_abs_trace.as_ref().unwrap().abs_trace, "4");
        assert!(r.passed(), "{:?}", r.violations);
        assert!(r.checks.iter().all(|c| c.violations == 0));
    }

    #[test]
    fn squares_of_traces_are_integers() {
        let e = ball("6");
        let k = order().algebra().field().clone();
        let rep = invariant_trace_check(&e.records, &k);
        assert_eq!(rep.checked, 13);
        assert!(rep.all_integral);
        assert_eq!(rep.trace_ring, "Z");
        assert!(rep.generates_base_field);
        assert_eq!(rep.trace_squares.first().map(String::as_str), Some("-2"));
        let rep = invariant_trace_check(&[sixth_root()], &k);
        assert_eq!(rep.trace_squares, vec!["-1".to_string()]);
    }
}
