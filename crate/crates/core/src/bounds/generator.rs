use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::window::{delta_zero, trace_window, TraceWindow};
use super::{BoundsError, Quantity, BOUND_PREC};
use crate::exact::{rat, format_rational, rational_sqrt, Interval, Rational};

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

fn ser_opt_rational<S: serde::Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&format_rational(r)),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LambdaSource {
    User,
    CongruenceDefault,
    MinWithQuarter,
}

/// The clamped spectral parameter `λ = min{1/4, λ₁}`.
#[derive(Clone, Debug, Serialize)]
pub struct SpectralData {
    #[serde(serialize_with = "ser_rational")]
    lambda: Rational,
    #[serde(serialize_with = "ser_opt_rational", skip_serializing_if = "Option::is_none")]
    lambda1: Option<Rational>,
    source: LambdaSource,
}

impl SpectralData {
    pub fn new(lambda: Rational) -> Result<Self, BoundsError> {
        if !lambda.is_positive() || lambda > rat(1, 4) {
            return Err(BoundsError::LambdaOutOfRange(format_rational(&lambda)));
        }
        Ok(SpectralData {
            lambda,
            lambda1: None,
            source: LambdaSource::User,
        })
    }

    /// Clamps a raw first eigenvalue to `min{1/4, λ₁}`.
    pub fn from_lambda1(lambda1: Rational) -> Result<Self, BoundsError> {
        if !lambda1.is_positive() {
            return Err(BoundsError::LambdaOutOfRange(format_rational(&lambda1)));
        }
        let clamped = lambda1 > rat(1, 4);
        Ok(SpectralData {
            lambda: if clamped { rat(1, 4) } else { lambda1.clone() },
            lambda1: Some(lambda1),
            source: if clamped { LambdaSource::MinWithQuarter } else { LambdaSource::User },
        })
    }

    /// `λ = 975/4096` for congruence groups.
    pub fn congruence() -> Self {
        SpectralData {
            lambda: rat(975, 4096),
            lambda1: None,
            source: LambdaSource::CongruenceDefault,
        }
    }

    pub fn lambda(&self) -> &Rational {
        &self.lambda
    }

    pub fn source(&self) -> LambdaSource {
        self.source
    }
}

/// `s = 1 − √(1 − 4λ)`, exact when `1 − 4λ` is a rational square.
pub fn decay_exponent(spectral: &SpectralData) -> Quantity {
    let disc = Rational::one() - rat(4, 1) * spectral.lambda();
    match rational_sqrt(&disc) {
        Some(r) => Quantity::rational(Rational::one() - r),
        None => {
            let root = Interval::point(disc, BOUND_PREC).sqrt().expect("λ ≤ 1/4");
            Quantity::enclosed(&Interval::from_int(1, BOUND_PREC) - &root)
        }
    }
}

/// `coefficient / s`.
#[derive(Clone, Debug, Serialize)]
pub struct Exponent {
    #[serde(serialize_with = "ser_rational")]
    pub coefficient_over_s: Rational,
    pub value: Quantity,
}

impl Exponent {
    fn new(coefficient: Rational, s: &Quantity) -> Self {
        let value = match s.exact() {
            Some(e) => Quantity::rational(&coefficient / e),
            None => Quantity::enclosed(
                Interval::point(coefficient.clone(), BOUND_PREC)
                    .div(&s.interval())
                    .expect("s > 0"),
            ),
        };
        Exponent {
            coefficient_over_s: coefficient,
            value,
        }
    }
}

fn check_delta(delta: &Quantity) -> Result<(), BoundsError> {
    let ok = match (delta.exact(), delta.enclosure()) {
        (Some(r), _) => r.is_positive() && r <= &Rational::one(),
        (None, Some(i)) => i.certainly_positive() && i.hi() <= &Rational::one(),
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(BoundsError::DeltaOutOfRange(delta.decimal()))
    }
}

fn check_positive(name: &'static str, q: &Quantity) -> Result<(), BoundsError> {
    if q.is_positive() {
        Ok(())
    } else {
        Err(BoundsError::NotPositive(name, q.decimal()))
    }
}

/// `c·vol^{3/s}·δ^{−15/s}`.
pub fn translate_bound(
    vol: &Quantity,
    spectral: &SpectralData,
    delta: &Quantity,
    c: &Quantity,
) -> Result<Quantity, BoundsError> {
    check_positive("vol", vol)?;
    check_positive("c", c)?;
    check_delta(delta)?;
    let s = decay_exponent(spectral);
    let ev = Exponent::new(rat(3, 1), &s).value;
    let ed = Exponent::new(rat(-15, 1), &s).value;
    Ok(c.mul(&vol.pow(&ev)?).mul(&delta.pow(&ed)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    General,
    Congruence,
    TorsionFree,
    Salem,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Variant::General => "general",
            Variant::Congruence => "congruence",
            Variant::TorsionFree => "torsion-free",
            Variant::Salem => "salem",
        };
        write!(f, "{s}")
    }
}

impl FromStr for Variant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "general" => Ok(Variant::General),
            "congruence" => Ok(Variant::Congruence),
            "torsion-free" | "torsion_free" => Ok(Variant::TorsionFree),
            "salem" => Ok(Variant::Salem),
            other => Err(format!("unknown variant {other:?}")),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundInputs {
    pub d: u64,
    #[serde(serialize_with = "ser_rational")]
    pub vol: Rational,
    pub spectral: SpectralData,
    /// Leading constant `C`.
    #[serde(serialize_with = "ser_rational", rename = "C")]
    pub leading: Rational,
    /// Safety constant `c` in `δ`.
    #[serde(serialize_with = "ser_rational", rename = "c")]
    pub safety: Rational,
    #[serde(serialize_with = "ser_opt_rational", rename = "m_S", skip_serializing_if = "Option::is_none")]
    pub m_s: Option<Rational>,
}

impl BoundInputs {
    /// `C = c = 1`, `vol = 1`.
    pub fn new(d: u64, spectral: SpectralData) -> Self {
        BoundInputs {
            d,
            vol: Rational::one(),
            spectral,
            leading: Rational::one(),
            safety: Rational::one(),
            m_s: None,
        }
    }
}

/// `δ ∝ base^k` turns `δ^{−30/s}` into `base^{−30k/s}`; compares with the stated exponent.
#[derive(Clone, Debug, Serialize)]
pub struct SubstitutionCheck {
    pub delta_form: String,
    #[serde(serialize_with = "ser_rational")]
    pub delta_power_of_base: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub derived_coefficient_over_s: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub stated_coefficient_over_s: Rational,
    pub consistent: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AlternativeForm {
    pub form: String,
    pub base_exponent: Exponent,
    pub bound: Quantity,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub variant: Variant,
    pub inputs: BoundInputs,
    pub s: Quantity,
    pub form: String,
    pub base: String,
    pub base_value: Quantity,
    pub base_exponent: Exponent,
    pub vol_exponent: Exponent,
    pub bound: Quantity,
    pub delta: Quantity,
    pub delta0: Quantity,
    /// `None` when the comparison is not decided at working precision.
    pub delta_below_delta0: Option<bool>,
    pub internal_form: String,
    pub internal_vol_exponent: Exponent,
    pub internal_delta_exponent: Exponent,
    pub internal_bound: Quantity,
    pub substitution: SubstitutionCheck,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alternative: Option<AlternativeForm>,
    pub window: TraceWindow,
    pub notes: Vec<String>,
}

/// `(log log 2d / log 2d)⁶`.
fn torsion_free_factor(d: u64) -> Interval {
    let l = Interval::point(Rational::from_integer(BigInt::from(2 * d)), BOUND_PREC).ln().expect("2d ≥ 2");
    l.ln().expect("positive").div(&l).expect("positive").powi(6).expect("power")
}

fn ln_quantity(x: &Rational) -> Quantity {
    if x.is_one() {
        return Quantity::int(0);
    }
    Quantity::enclosed(Interval::point(x.clone(), BOUND_PREC).ln().expect("positive"))
}

pub fn generator_bound(inputs: &BoundInputs, variant: Variant) -> Result<BoundReport, BoundsError> {
    if inputs.d < 1 {
        return Err(BoundsError::TooSmall("d", 1));
    }
    let vol = Quantity::rational(inputs.vol.clone());
    let big_c = Quantity::rational(inputs.leading.clone());
    let small_c = Quantity::rational(inputs.safety.clone());
    check_positive("vol", &vol)?;
    check_positive("C", &big_c)?;
    check_positive("c", &small_c)?;
    let mut notes = vec![];
    let mut inputs = inputs.clone();
    if variant == Variant::Congruence && inputs.spectral.lambda() != &rat(975, 4096) {
        notes.push(format!(
            "congruence variant forces lambda = 975/4096 (given {})",
            format_rational(inputs.spectral.lambda())
        ));
        inputs.spectral = SpectralData::congruence();
    }
    let d = inputs.d;
    let s = decay_exponent(&inputs.spectral);
    let d_q = Quantity::int(d as i64);
    let (base, base_value, coefficient, delta, delta_form, power) = match variant {
        Variant::General | Variant::Congruence => (
            "d",
            d_q.clone(),
            rat(60, 1),
            Quantity::rational(&inputs.safety / Rational::from_integer(BigInt::from(d * d))),
            "c * d^-2",
            rat(-2, 1),
        ),
        Variant::TorsionFree => {
            let lnd = ln_quantity(&Rational::from_integer(BigInt::from(d)));
            if d == 1 {
                notes.push("log(d) = 0 at d = 1: closed-form bound degenerates to 0 (non-informative)".into());
            }
            let delta = Quantity::enclosed(torsion_free_factor(d).mul_rat(&inputs.safety));
            (
                "log_d",
                lnd,
                rat(180, 1),
                delta,
                "c * (loglog(2d)/log(2d))^6",
                rat(-6, 1),
            )
        }
        Variant::Salem => {
            let m = inputs.m_s.clone().ok_or(BoundsError::MissingSalemConstant)?;
            if m <= Rational::one() {
                return Err(BoundsError::SalemConstant(format_rational(&m)));
            }
            let lm = ln_quantity(&m);
            let delta = Quantity::enclosed(lm.interval().sqr().mul_rat(&inputs.safety));
            ("log_m_S", lm, rat(-60, 1), delta, "c * log(m_S)^2", rat(2, 1))
        }
    };
    let base_exponent = Exponent::new(coefficient.clone(), &s);
    let vol_exponent = Exponent::new(rat(6, 1), &s);
    let bound = big_c
        .mul(&base_value.pow(&base_exponent.value)?)
        .mul(&vol.pow(&vol_exponent.value)?);
    let internal_vol_exponent = Exponent::new(rat(6, 1), &s);
    let internal_delta_exponent = Exponent::new(rat(-30, 1), &s);
    check_positive("delta", &delta)?;
    let internal_bound = vol
        .pow(&internal_vol_exponent.value)?
        .mul(&delta.pow(&internal_delta_exponent.value)?);
    let derived = rat(-30, 1) * &power;
    let substitution = SubstitutionCheck {
        delta_form: delta_form.into(),
        delta_power_of_base: power,
        consistent: derived == coefficient,
        derived_coefficient_over_s: derived,
        stated_coefficient_over_s: coefficient,
    };
    let alternative = if variant == Variant::TorsionFree {
        let e = Exponent::new(rat(120, 1), &s);
        let b = big_c.mul(&base_value.pow(&e.value)?).mul(&vol.pow(&vol_exponent.value)?);
        Some(AlternativeForm {
            form: "C * log(d)^(120/s) * vol^(6/s)  [delta = c * log(d)^-4]".into(),
            base_exponent: e,
            bound: b,
        })
    } else {
        None
    };
    let d0 = delta_zero(d)?;
    let di = delta.interval();
    let delta_below_delta0 = if di.certainly_lt(&d0) {
        Some(true)
    } else if d0.certainly_le(&di) {
        Some(false)
    } else {
        None
    };
    if delta_below_delta0 != Some(true) {
        notes.push("delta is not below delta0: injectivity hypothesis fails for this c".into());
    }
    let form = match variant {
        Variant::General | Variant::Congruence => "C * d^(60/s) * vol^(6/s)",
        Variant::TorsionFree => "C * log(d)^(180/s) * vol^(6/s)",
        Variant::Salem => "C * log(m_S)^(-60/s) * vol^(6/s)",
    };
    Ok(BoundReport {
        variant,
        inputs,
        s,
        form: form.into(),
        base: base.into(),
        base_value,
        base_exponent,
        vol_exponent,
        bound,
        delta,
        delta0: Quantity::enclosed(d0),
        delta_below_delta0,
        internal_form: "vol^(6/s) * delta^(-30/s)".into(),
        internal_vol_exponent,
        internal_delta_exponent,
        internal_bound,
        substitution,
        alternative,
        window: trace_window(d)?,
        notes,
    })
}

/// One CSV row per report, for sweeps over `d` or `λ`.
pub fn generator_bound_csv(reports: &[BoundReport]) -> String {
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record([
        "variant",
        "d",
        "lambda",
        "s",
        "base",
        "base_exponent",
        "vol_exponent",
        "delta",
        "delta0",
        "bound",
        "internal_bound",
    ])
    .expect("in-memory write");
    for r in reports {
        let exact_or = |q: &Quantity| q.exact().map(format_rational).unwrap_or_else(|| q.decimal());
        w.write_record([
            r.variant.to_string(),
            r.inputs.d.to_string(),
            format_rational(r.inputs.spectral.lambda()),
            exact_or(&r.s),
            r.base.clone(),
            exact_or(&r.base_exponent.value),
            exact_or(&r.vol_exponent.value),
            r.delta.decimal(),
            r.delta0.decimal(),
            r.bound.decimal(),
            r.internal_bound.decimal(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

impl BoundReport {
    pub fn is_zero_bound(&self) -> bool {
        self.bound.exact().is_some_and(Zero::is_zero)
    }
}
