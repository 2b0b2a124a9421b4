//! Closed-form quantities: Mahler measure and Salem detection, Voutier's
//! bound, the trace window, injectivity constants, the decay exponent, and
//! the translate and generator-norm bounds.

mod generator;
mod mahler;
mod window;

pub use generator::{
    decay_exponent, generator_bound, generator_bound_csv, translate_bound, BoundInputs, BoundReport,
    Exponent, LambdaSource, SpectralData, SubstitutionCheck, Variant,
};
pub use mahler::{is_salem, mahler_measure, trace_mahler_check, SalemTest, TraceMahler};
pub use window::{
    compute_safety_constant, delta_zero, elliptic_trace_max, trace_window, voutier_lower_bound,
    EllipticMax, SafetyConstant, TraceWindow, VoutierBound,
};

use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::exact::{format_rational, format_sig, ExactError, Interval, Rational};

/// Working precision for closed-form evaluations.
pub const BOUND_PREC: u32 = 160;

/// Values whose natural log exceeds this are kept in log form only.
const LN_DIRECT_LIMIT: i64 = 20_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("{0} must be at least {1}")]
    TooSmall(&'static str, i64),
    #[error("lambda must lie in (0, 1/4], got {0}")]
    LambdaOutOfRange(String),
    #[error("{0} must be positive, got {1}")]
    NotPositive(&'static str, String),
    #[error("delta must lie in (0, 1], got {0}")]
    DeltaOutOfRange(String),
    #[error("m_S must exceed 1 for the salem variant, got {0}")]
    SalemConstant(String),
    #[error("the salem variant needs m_S")]
    MissingSalemConstant,
    #[error("polynomial {0} is reducible; the Salem test needs an irreducible polynomial")]
    Reducible(String),
    #[error("polynomial {0} is not monic")]
    NotMonic(String),
    #[error("root moduli of {poly} not certified at {bits} bits")]
    Uncertified { poly: String, bits: u32 },
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// A real quantity with an exact rational value when known, a certified
/// enclosure, or (for very large values) an enclosure of its natural log.
#[derive(Clone, Debug)]
pub struct Quantity {
    exact: Option<Rational>,
    enclosure: Option<Interval>,
    ln: Option<Interval>,
}

impl Quantity {
    pub fn rational(r: Rational) -> Self {
        Quantity {
            enclosure: Some(Interval::point(r.clone(), BOUND_PREC)),
            exact: Some(r),
            ln: None,
        }
    }

    pub fn int(n: i64) -> Self {
        Self::rational(Rational::from_integer(n.into()))
    }

    pub fn enclosed(i: Interval) -> Self {
        if i.is_point() {
            return Self::rational(i.lo().clone());
        }
        Quantity {
            exact: None,
            enclosure: Some(i),
            ln: None,
        }
    }

    /// Positive value given by an enclosure of its natural log.
    pub fn from_ln(ln: Interval) -> Self {
        let direct = ln.hi() < &Rational::from_integer(LN_DIRECT_LIMIT.into());
        Quantity {
            exact: None,
            enclosure: direct.then(|| ln.exp()),
            ln: Some(ln),
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        self.exact.as_ref()
    }

    pub fn enclosure(&self) -> Option<&Interval> {
        self.enclosure.as_ref()
    }

    /// Enclosure, panicking for values kept only in log form.
    pub fn interval(&self) -> Interval {
        self.enclosure.clone().expect("quantity too large for a direct enclosure")
    }

    pub fn is_positive(&self) -> bool {
        match (&self.exact, &self.enclosure) {
            (Some(r), _) => r.is_positive(),
            (None, Some(i)) => i.certainly_positive(),
            _ => true,
        }
    }

    /// Natural log, for positive quantities.
    pub fn ln(&self) -> Result<Interval, ExactError> {
        match (&self.ln, &self.enclosure) {
            (Some(l), _) => Ok(l.clone()),
            (None, Some(i)) => i.ln(),
            _ => unreachable!("quantity without value"),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match (&self.exact, &self.enclosure, &self.ln) {
            (Some(r), _, _) => Interval::point(r.clone(), 64).to_f64(),
            (_, Some(i), _) => i.to_f64(),
            (_, _, Some(l)) => l.to_f64().exp(),
            _ => f64::NAN,
        }
    }

    /// Ten significant digits.
    pub fn decimal(&self) -> String {
        if let Some(r) = &self.exact {
            return format_sig(r, 10);
        }
        if let Some(i) = &self.enclosure {
            return i.decimal(10);
        }
        let l = self.ln.as_ref().expect("quantity without value");
        let ln10 = Interval::from_int(10, l.prec()).ln().expect("ln 10");
        let log10 = l.div(&ln10).expect("ln 10 is positive");
        let e = log10.mid().floor();
        let frac = &log10 - &Interval::point(e.clone(), l.prec());
        let mant = (&frac * &ln10).exp();
        let s = mant.decimal(10);
        let (m, k) = s.split_once('e').unwrap();
        let k: i64 = k.parse().unwrap();
        format!("{m}e{}", e.to_integer() + k)
    }

    /// Radius of the enclosure (zero for exact values).
    pub fn radius(&self) -> Option<Rational> {
        if self.exact.is_some() {
            return Some(Rational::zero());
        }
        self.enclosure.as_ref().map(Interval::radius)
    }

    pub fn mul(&self, o: &Quantity) -> Quantity {
        if let (Some(a), Some(b)) = (&self.exact, &o.exact) {
            return Self::rational(a * b);
        }
        if let (Some(a), Some(b)) = (&self.enclosure, &o.enclosure) {
            return Self::enclosed(a * b);
        }
        if self.exact.as_ref().is_some_and(Zero::is_zero) || o.exact.as_ref().is_some_and(Zero::is_zero) {
            return Self::int(0);
        }
        Self::from_ln(&self.ln().expect("positive") + &o.ln().expect("positive"))
    }

    /// `self^e` for a positive base (or base 0 with `e > 0`).
    pub fn pow(&self, e: &Quantity) -> Result<Quantity, ExactError> {
        if let Some(b) = &self.exact {
            if b.is_one() {
                return Ok(Self::int(1));
            }
            if b.is_zero() {
                return Ok(Self::int(0));
            }
            if let Some(r) = e.exact.as_ref().filter(|r| r.is_integer() && r.abs() <= Rational::from_integer(4096.into())) {
                let n: i32 = r.to_integer().try_into().unwrap();
                return Ok(Self::rational(num_traits::pow::Pow::pow(b, n)));
            }
        }
        let ei = e
            .enclosure
            .clone()
            .unwrap_or_else(|| e.exact.clone().map(|r| Interval::point(r, BOUND_PREC)).expect("exponent"));
        Ok(Self::from_ln(&self.ln()? * &ei))
    }
}

impl Serialize for Quantity {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(None)?;
        m.serialize_entry("decimal", &self.decimal())?;
        if let Some(r) = &self.exact {
            m.serialize_entry("exact", &format_rational(r))?;
        } else if let Some(r) = self.radius() {
            m.serialize_entry("radius", &format_sig(&r, 3))?;
        }
        m.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_rational;

    #[test]
    fn exact_powers_stay_exact() {
        let two = Quantity::int(2);
        let p = two.pow(&Quantity::int(60)).unwrap();
        assert_eq!(p.exact().unwrap(), &Rational::from_integer(num_bigint::BigInt::from(1u64 << 60)));
        let one = Quantity::int(1).pow(&Quantity::rational(parse_rational("384/5").unwrap())).unwrap();
        assert_eq!(one.exact().unwrap(), &Rational::one());
    }

    #[test]
    fn huge_values_use_log_form() {
        let q = Quantity::int(10).pow(&Quantity::rational(parse_rational("100001/2").unwrap())).unwrap();
        assert!(q.enclosure().is_none());
        let d = q.decimal();
        assert!(d.starts_with("3.16227766") && d.ends_with("e50000"), "{d}");
    }

    #[test]
    fn serializes_decimal_and_exact() {
        let j = serde_json::to_value(Quantity::rational(parse_rational("384/5").unwrap())).unwrap();
        assert_eq!(j["exact"], "384/5");
        assert_eq!(j["decimal"], "7.68e1");
    }
}
