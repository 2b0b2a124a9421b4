use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use super::{BoundsError, BOUND_PREC};
use crate::exact::{rat, euler_phi, two_cos_minpoly, Interval, Rational, RealAlgebraic};

/// Sweep cutoff for the safety constant; beyond it a monotone tail bound applies.
const SWEEP_LIMIT: u64 = 64;

fn int(n: u64, prec: u32) -> Interval {
    Interval::point(Rational::from_integer(BigInt::from(n)), prec)
}

/// `log log n / log n`.
fn loglog_ratio(n: u64, prec: u32) -> Interval {
    let l = int(n, prec).ln().expect("n ≥ 2");
    l.ln().expect("ln n > 0").div(&l).expect("ln n > 0")
}

/// `(1/16)·(log log 2d / log 2d)³`.
fn window_argument(d: u64, prec: u32) -> Interval {
    loglog_ratio(2 * d, prec).powi(3).expect("cube").mul_rat(&rat(1, 16))
}

/// `2cos(π/m)` as an exact algebraic number (largest real root of its minpoly).
fn two_cos_pi_over(m: u64) -> RealAlgebraic {
    let p = two_cos_minpoly(2 * m);
    let top = p.isolate_real_roots().expect("nonzero").len() - 1;
    RealAlgebraic::from_irreducible_root(&p, top).expect("root exists")
}

#[derive(Clone, Debug, Serialize)]
pub struct VoutierBound {
    pub n: u64,
    pub value: super::Quantity,
    /// False when the bound is not positive (n = 2).
    pub informative: bool,
}

/// `¼·(log log n / log n)³`.
pub fn voutier_lower_bound(n: u64) -> Result<VoutierBound, BoundsError> {
    if n < 2 {
        return Err(BoundsError::TooSmall("n", 2));
    }
    let v = loglog_ratio(n, BOUND_PREC).powi(3)?.mul_rat(&rat(1, 4));
    Ok(VoutierBound {
        n,
        informative: v.certainly_positive(),
        value: super::Quantity::enclosed(v),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct EllipticMax {
    pub m: u64,
    pub value: RealAlgebraic,
}

/// `max 2cos(π/m)` over `m ≥ 1` with `φ(2m) ≤ 4d`; `φ(n) ≥ √(n/2)` bounds the search by `m ≤ 16d²`.
pub fn elliptic_trace_max(d: u64) -> Result<EllipticMax, BoundsError> {
    if d < 1 {
        return Err(BoundsError::TooSmall("d", 1));
    }
    let m = (1..=16 * d * d).rev().find(|&m| euler_phi(2 * m) <= 4 * d).unwrap_or(1);
    Ok(EllipticMax {
        m,
        value: two_cos_pi_over(m),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceWindow {
    pub degree: u64,
    /// `2cos(π/2d)`.
    pub lower: RealAlgebraic,
    /// `2cosh((1/16)(log log 2d / log 2d)³)`.
    pub upper: super::Quantity,
    pub corrected_elliptic_max: EllipticMax,
}

impl TraceWindow {
    pub fn upper_interval(&self) -> Interval {
        self.upper.interval()
    }
}

pub fn trace_window(d: u64) -> Result<TraceWindow, BoundsError> {
    if d < 1 {
        return Err(BoundsError::TooSmall("d", 1));
    }
    let upper = window_argument(d, BOUND_PREC).cosh().mul_rat(&rat(2, 1));
    Ok(TraceWindow {
        degree: d,
        lower: two_cos_pi_over(2 * d),
        upper: super::Quantity::enclosed(upper),
        corrected_elliptic_max: elliptic_trace_max(d)?,
    })
}

fn one_minus_cos(d: u64, prec: u32) -> Interval {
    let wp = prec + 32;
    let x = crate::exact::pi(wp).div(&int(2 * d, wp)).expect("d ≥ 1");
    (&Interval::from_int(1, wp) - &x.cos()).round_to(prec)
}

fn delta_zero_at(d: u64, prec: u32) -> Interval {
    let wp = prec + 32;
    let a = &window_argument(d, wp).cosh() - &Interval::from_int(1, wp);
    let b = one_minus_cos(d, wp);
    a.min(&b).round_to(prec)
}

/// `min{cosh((1/16)(log log 2d / log 2d)³) − 1, 1 − cos(π/2d)}`.
pub fn delta_zero(d: u64) -> Result<Interval, BoundsError> {
    if d < 1 {
        return Err(BoundsError::TooSmall("d", 1));
    }
    Ok(delta_zero_at(d, BOUND_PREC))
}

#[derive(Clone, Debug, Serialize)]
pub struct SafetyConstant {
    pub d_max: u64,
    pub c: super::Quantity,
    pub argmin_d: u64,
    /// `d²·δ₀(d)` at the minimizer.
    pub min_scaled_delta0: super::Quantity,
    /// Degrees evaluated one by one.
    pub swept_to: u64,
    /// Certified lower bound for `d²·δ₀(d)` over all `d > swept_to`.
    pub tail_lower_bound: Option<super::Quantity>,
    pub note: String,
}

/// Lower bound for `d²·δ₀(d)` valid for every `d ≥ big_d ≥ 11`:
/// `cosh(y) − 1 ≥ y²/2` gives `d²·r⁶/512` with `r = log log 2d / log 2d`, and
/// `e^{2t}(log t / t)⁶` is increasing for `t = log 2d ≥ 3`; the cosine term
/// satisfies `d²(1 − cos(π/2d)) ≥ π²/8 − π⁴/(384d²)`.
fn tail_bound(big_d: u64, prec: u32) -> Interval {
    let r6 = loglog_ratio(2 * big_d, prec).powi(6).expect("power");
    let hyp = (&int(big_d * big_d, prec) * &r6).mul_rat(&rat(1, 512));
    let pi = crate::exact::pi(prec);
    let pi2 = pi.sqr();
    let cos_term = &pi2.mul_rat(&rat(1, 8)) - &pi2.sqr().div(&int(384 * big_d * big_d, prec)).expect("nonzero");
    hyp.min(&cos_term)
}

/// `c = (1/5)·min_{1 ≤ d ≤ d_max} d²·δ₀(d)`.
pub fn compute_safety_constant(d_max: u64) -> Result<SafetyConstant, BoundsError> {
    if d_max < 1 {
        return Err(BoundsError::TooSmall("d_max", 1));
    }
    let prec = 96;
    let swept_to = d_max.min(SWEEP_LIMIT.max(11));
    let vals: Vec<(u64, Interval)> = (1..=swept_to)
        .into_par_iter()
        .map(|d| (d, (&int(d * d, prec) * &delta_zero_at(d, prec))))
        .collect();
    let (argmin_d, min) = vals
        .iter()
        .min_by(|a, b| a.1.mid().cmp(&b.1.mid()).then(a.0.cmp(&b.0)))
        .cloned()
        .expect("nonempty sweep");
    let tail = (swept_to < d_max).then(|| tail_bound(swept_to + 1, prec));
    if let Some(t) = &tail {
        if !t.certainly_gt(&min) {
            return Err(BoundsError::Uncertified {
                poly: "safety-constant tail".into(),
                bits: prec,
            });
        }
    }
    let c = min.mul_rat(&rat(1, 5));
    Ok(SafetyConstant {
        d_max,
        c: super::Quantity::enclosed(c.round_to(BOUND_PREC)),
        argmin_d,
        min_scaled_delta0: super::Quantity::enclosed(min),
        swept_to,
        tail_lower_bound: tail.map(super::Quantity::enclosed),
        note: "factor 1/5: for det-1 g1, g2 within delta of 1 entrywise, \
               ||g1^-1 g2 - 1|| <= 2(1+delta)(2 delta) < 5 delta when delta < 1/4"
            .into(),
    })
}

impl SafetyConstant {
    pub fn value(&self) -> Interval {
        self.c.interval()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::IntPolynomial;

    // oracle values: 50-digit mpmath evaluation of the closed forms
    const VOUTIER_4: f64 = 0.00327008350985;
    const VOUTIER_2: f64 = -0.0369599600805;
    const UPPER_1: f64 = 2.00008537802302;
    const UPPER_2: f64 = 2.00000066834042;
    const UPPER_3: f64 = 2.00000464492247;
    const DELTA0_1: f64 = 4.26890115078706e-5;
    const DELTA0_2: f64 = 3.34170211154807e-7;
    const DELTA0_3: f64 = 2.32246123502701e-6;
    const DELTA0_10: f64 = 4.71411691060798e-6;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs()
    }

    #[test]
    fn voutier_values() {
        let v = voutier_lower_bound(4).unwrap();
        assert!(v.informative && close(v.value.to_f64(), VOUTIER_4, 1e-10));
        let v = voutier_lower_bound(2).unwrap();
        assert!(!v.informative && close(v.value.to_f64(), VOUTIER_2, 1e-10));
        assert!(close(voutier_lower_bound(6).unwrap().value.to_f64(), 0.00862083121014, 1e-10));
        assert!(voutier_lower_bound(1).is_err());
    }

    #[test]
    fn windows() {
        let w = trace_window(1).unwrap();
        assert_eq!(w.lower.as_rational(), Some(&Rational::from_integer(0.into())));
        assert!(close(w.upper.to_f64(), UPPER_1, 1e-13));
        let w = trace_window(2).unwrap();
        assert_eq!(w.lower.minpoly(), &IntPolynomial::from_i64(&[-2, 0, 1]));
        assert!(close(w.lower.to_f64(), std::f64::consts::SQRT_2, 1e-15));
        assert!(close(w.upper.to_f64(), UPPER_2, 1e-13));
        let w = trace_window(3).unwrap();
        assert!(close(w.lower.to_f64(), 3f64.sqrt(), 1e-15));
        assert!(close(w.upper.to_f64(), UPPER_3, 1e-13));
    }

    #[test]
    fn window_is_ordered_and_lower_increases() {
        let mut prev = -3.0;
        for d in 1..40 {
            let w = trace_window(d).unwrap();
            let two = Interval::from_int(2, 64);
            assert!(w.lower.to_f64() < 2.0 && w.lower.to_f64() > prev);
            prev = w.lower.to_f64();
            assert!(!w.upper.interval().certainly_lt(&two));
        }
    }

    #[test]
    fn elliptic_max() {
        let e = elliptic_trace_max(1).unwrap();
        assert_eq!(e.m, 6);
        assert_eq!(e.value.minpoly(), &IntPolynomial::from_i64(&[-3, 0, 1]));
        let e = elliptic_trace_max(2).unwrap();
        assert_eq!(e.m, 15);
        assert!(close(e.value.to_f64(), 1.95629520146761, 1e-13));
        for d in 1..30 {
            // brute-force oracle over a generous range
            let best = (1..2000u64).filter(|&m| euler_phi(2 * m) <= 4 * d).max().unwrap();
            let e = elliptic_trace_max(d).unwrap();
            assert_eq!(e.m, best);
            assert!(e.value.to_f64() < 2.0);
        }
    }

    #[test]
    fn delta_zero_values() {
        assert!(close(delta_zero(1).unwrap().to_f64(), DELTA0_1, 1e-12));
        assert!(close(delta_zero(2).unwrap().to_f64(), DELTA0_2, 1e-12));
        assert!(close(delta_zero(3).unwrap().to_f64(), DELTA0_3, 1e-12));
        assert!(close(delta_zero(10).unwrap().to_f64(), DELTA0_10, 1e-12));
    }

    #[test]
    fn delta_zero_positive_small() {
        for d in 1..=64u64 {
            assert!(delta_zero_at(d, 64).certainly_positive(), "{d}");
        }
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(48))]
        #[test]
        fn delta_zero_positive(d in 1u64..2_000_000) {
            proptest::prop_assert!(delta_zero_at(d, 64).certainly_positive());
        }
    }

    #[test]
    fn safety_constants() {
        let s = compute_safety_constant(1).unwrap();
        assert_eq!(s.argmin_d, 1);
        assert!(close(s.c.to_f64(), DELTA0_1 / 5.0, 1e-12));
        let s10 = compute_safety_constant(10).unwrap();
        assert_eq!(s10.argmin_d, 2);
        assert!(close(s10.c.to_f64(), 2.67336168923846e-7, 1e-10));
        let big = compute_safety_constant(1_000_000).unwrap();
        assert_eq!(big.argmin_d, 2);
        assert!(big.tail_lower_bound.is_some());
        assert!(close(big.c.to_f64(), s10.c.to_f64(), 1e-14));
    }

    #[test]
    fn tail_bound_is_below_true_values() {
        for d in [11u64, 50, 400, 4097] {
            let t = tail_bound(d, 96);
            for e in [d, d + 1, 3 * d] {
                let v = &int(e * e, 96) * &delta_zero_at(e, 96);
                assert!(t.certainly_lt(&v), "{d} {e}");
            }
        }
    }
}
