//! Closed intervals with dyadic endpoints and outward (directed) rounding.
//!
//! Every endpoint is a binary floating value `m·2^e` with at most `prec`
//! significant bits; operations round the lower endpoint down and the upper
//! endpoint up, so the exact result of the operation always lies inside the
//! returned interval. Elementary functions are evaluated by Taylor / atanh
//! series with explicit remainder bounds.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rational::{bit_length, format_sig, int, Rational};
use super::ExactError;

/// Default working precision in bits.
pub const DEFAULT_PREC: u32 = 128;

const GUARD: u32 = 32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
    prec: u32,
}

pub(crate) fn round_down(x: &Rational, prec: u32) -> Rational {
    if x.is_zero() {
        return Rational::zero();
    }
    let n = x.numer();
    let d = x.denom();
    if d.is_one() && bit_length(n) <= prec as i64 {
        return x.clone();
    }
    if let Some(k) = pow2_exp(d) {
        let bits = n.bits();
        if bits <= prec as u64 {
            return x.clone();
        }
        // BigInt shifts round toward negative infinity
        let shift = bits - prec as u64;
        let m = n >> shift;
        return if k >= shift {
            dyadic(m, k - shift)
        } else {
            Rational::from_integer(m << (shift - k))
        };
    }
    let e = bit_length(n) - bit_length(d) - prec as i64;
    if e >= 0 {
        let m = n.div_floor(&(d << (e as usize)));
        Rational::from_integer(m << (e as usize))
    } else {
        let m = (n << ((-e) as usize)).div_floor(d);
        dyadic(m, (-e) as u64)
    }
}

/// `m / 2^k` in lowest terms.
fn dyadic(m: BigInt, k: u64) -> Rational {
    if m.is_zero() {
        return Rational::zero();
    }
    let tz = m.trailing_zeros().unwrap_or(0).min(k);
    Rational::new_raw(m >> tz, BigInt::one() << (k - tz))
}

pub(crate) fn round_up(x: &Rational, prec: u32) -> Rational {
    -round_down(&-x, prec)
}

fn pow2_exp(d: &BigInt) -> Option<u64> {
    let tz = d.trailing_zeros()?;
    (d.bits() == tz + 1).then_some(tz)
}

/// Comparison with a shift-only path for dyadic operands.
pub(crate) fn qcmp(a: &Rational, b: &Rational) -> Ordering {
    match (pow2_exp(a.denom()), pow2_exp(b.denom())) {
        (Some(i), Some(j)) if i >= j => a.numer().cmp(&(b.numer() << (i - j))),
        (Some(i), Some(j)) => (a.numer() << (j - i)).cmp(b.numer()),
        _ => (a.numer() * b.denom()).cmp(&(b.numer() * a.denom())),
    }
}

/// Equality of normalized rationals, field by field.
pub(crate) fn qeq(a: &Rational, b: &Rational) -> bool {
    a.numer() == b.numer() && a.denom() == b.denom()
}

fn le(a: &Rational, b: &Rational) -> bool {
    qcmp(a, b) != Ordering::Greater
}

fn lt(a: &Rational, b: &Rational) -> bool {
    qcmp(a, b) == Ordering::Less
}

fn qmin(a: &Rational, b: &Rational) -> Rational {
    if le(a, b) { a.clone() } else { b.clone() }
}

fn qmax(a: &Rational, b: &Rational) -> Rational {
    if le(a, b) { b.clone() } else { a.clone() }
}

pub(crate) fn qadd(a: &Rational, b: &Rational) -> Rational {
    match (pow2_exp(a.denom()), pow2_exp(b.denom())) {
        (Some(i), Some(j)) => {
            let k = i.max(j);
            dyadic((a.numer() << (k - i)) + (b.numer() << (k - j)), k)
        }
        _ => a + b,
    }
}

pub(crate) fn qsub(a: &Rational, b: &Rational) -> Rational {
    match (pow2_exp(a.denom()), pow2_exp(b.denom())) {
        (Some(i), Some(j)) => {
            let k = i.max(j);
            dyadic((a.numer() << (k - i)) - (b.numer() << (k - j)), k)
        }
        _ => a - b,
    }
}

fn qmul(a: &Rational, b: &Rational) -> Rational {
    match (pow2_exp(a.denom()), pow2_exp(b.denom())) {
        (Some(i), Some(j)) => dyadic(a.numer() * b.numer(), i + j),
        _ => a * b,
    }
}

pub(crate) fn qhalf(a: &Rational) -> Rational {
    match pow2_exp(a.denom()) {
        Some(i) => dyadic(a.numer().clone(), i + 1),
        None => a / int(2),
    }
}

fn pow2(e: i64) -> Rational {
    if e >= 0 {
        Rational::from_integer(BigInt::one() << (e as usize))
    } else {
        Rational::new(BigInt::one(), BigInt::one() << ((-e) as usize))
    }
}

/// Rough log2 |x| (exact up to ±1).
fn log2_estimate(x: &Rational) -> i64 {
    bit_length(x.numer()) - bit_length(x.denom())
}

impl Interval {
    /// `[lo, hi]` rounded outward to `prec` bits.
    pub fn new(lo: Rational, hi: Rational, prec: u32) -> Self {
        assert!(le(&lo, &hi), "interval endpoints out of order");
        Interval {
            lo: round_down(&lo, prec),
            hi: round_up(&hi, prec),
            prec,
        }
    }

    /// Interval with exact, unrounded endpoints.
    pub fn exact(lo: Rational, hi: Rational, prec: u32) -> Self {
        assert!(le(&lo, &hi), "interval endpoints out of order");
        Interval { lo, hi, prec }
    }

    /// Degenerate interval `[x, x]` (exact, not rounded).
    pub fn point(x: Rational, prec: u32) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
            prec,
        }
    }

    pub fn from_int(n: i64, prec: u32) -> Self {
        Self::point(int(n), prec)
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(mut self, prec: u32) -> Self {
        self.prec = prec;
        self
    }

    pub fn mid(&self) -> Rational {
        qhalf(&qadd(&self.lo, &self.hi))
    }

    pub fn width(&self) -> Rational {
        qsub(&self.hi, &self.lo)
    }

    pub fn radius(&self) -> Rational {
        qhalf(&self.width())
    }

    pub fn is_point(&self) -> bool {
        qeq(&self.lo, &self.hi)
    }

    /// Midpoint as `f64` (for display and heuristics only).
    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.mid())
    }

    pub fn contains(&self, x: &Rational) -> bool {
        le(&self.lo, x) && le(x, &self.hi)
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&Rational::zero())
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        le(&self.lo, &other.hi) && le(&other.lo, &self.hi)
    }

    pub fn subset_of(&self, other: &Interval) -> bool {
        le(&other.lo, &self.lo) && le(&self.hi, &other.hi)
    }

    pub fn certainly_lt(&self, other: &Interval) -> bool {
        lt(&self.hi, &other.lo)
    }

    pub fn certainly_le(&self, other: &Interval) -> bool {
        le(&self.hi, &other.lo)
    }

    pub fn certainly_gt(&self, other: &Interval) -> bool {
        other.certainly_lt(self)
    }

    pub fn certainly_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn certainly_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// Strict ordering when decisive; `None` when the intervals overlap.
    pub fn compare(&self, other: &Interval) -> Option<Ordering> {
        if self.certainly_lt(other) {
            Some(Ordering::Less)
        } else if self.certainly_gt(other) {
            Some(Ordering::Greater)
        } else if self.is_point() && other.is_point() && qeq(&self.lo, &other.lo) {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Sign when decisive (`0` only for the exact point zero).
    pub fn sign(&self) -> Option<i8> {
        if self.certainly_positive() {
            Some(1)
        } else if self.certainly_negative() {
            Some(-1)
        } else if self.is_point() {
            Some(0)
        } else {
            None
        }
    }

    fn joined_prec(&self, other: &Interval) -> u32 {
        self.prec.max(other.prec)
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: qmin(&self.lo, &other.lo),
            hi: qmax(&self.hi, &other.hi),
            prec: self.joined_prec(other),
        }
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = qmax(&self.lo, &other.lo);
        let hi = qmin(&self.hi, &other.hi);
        le(&lo, &hi).then(|| Interval {
            lo,
            hi,
            prec: self.joined_prec(other),
        })
    }

    pub fn abs(&self) -> Interval {
        if self.lo.is_negative() && self.hi.is_positive() {
            let m = qmax(&-&self.lo, &self.hi);
            Interval::exact(Rational::zero(), m, self.prec)
        } else if self.hi.is_positive() || self.hi.is_zero() && !self.lo.is_negative() {
            self.clone()
        } else {
            -self
        }
    }

    pub fn max(&self, other: &Interval) -> Interval {
        Interval {
            lo: qmax(&self.lo, &other.lo),
            hi: qmax(&self.hi, &other.hi),
            prec: self.joined_prec(other),
        }
    }

    pub fn min(&self, other: &Interval) -> Interval {
        Interval {
            lo: qmin(&self.lo, &other.lo),
            hi: qmin(&self.hi, &other.hi),
            prec: self.joined_prec(other),
        }
    }

    /// `max(1, x)`.
    pub fn max_one(&self) -> Interval {
        self.max(&Interval::from_int(1, self.prec))
    }

    pub fn sqr(&self) -> Interval {
        let a = self.abs();
        Interval::new(qmul(&a.lo, &a.lo), qmul(&a.hi, &a.hi), self.prec)
    }

    pub fn mul_rat(&self, r: &Rational) -> Interval {
        if pow2_exp(r.denom()).is_some() {
            self * &Interval::point(r.clone(), self.prec)
        } else {
            self * &Interval::new(r.clone(), r.clone(), self.prec + GUARD)
        }
    }

    pub fn recip(&self) -> Result<Interval, ExactError> {
        if self.contains_zero() {
            return Err(ExactError::ContainsZero(self.to_string()));
        }
        Ok(Interval::new(
            Rational::one() / &self.hi,
            Rational::one() / &self.lo,
            self.prec,
        ))
    }

    pub fn div(&self, other: &Interval) -> Result<Interval, ExactError> {
        Ok(self * &other.recip()?)
    }

    pub fn powi(&self, n: i64) -> Result<Interval, ExactError> {
        if n < 0 {
            return self.recip()?.powi(-n);
        }
        let mut result = Interval::from_int(1, self.prec);
        let mut base = self.clone();
        let mut e = n as u64;
        // odd powers keep sign information, so multiply rather than square the abs
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        Ok(result)
    }

    pub fn sqrt(&self) -> Result<Interval, ExactError> {
        if self.hi.is_negative() {
            return Err(ExactError::Domain {
                op: "sqrt",
                interval: self.to_string(),
            });
        }
        let lo = if self.lo.is_negative() {
            Rational::zero()
        } else {
            sqrt_bound(&self.lo, self.prec, false)
        };
        let hi = sqrt_bound(&self.hi, self.prec, true);
        Ok(Interval::new(lo, hi, self.prec))
    }

    pub fn exp(&self) -> Interval {
        let wp = self.prec + GUARD;
        let lo = exp_point(&self.lo, wp).lo;
        let hi = exp_point(&self.hi, wp).hi;
        Interval::new(lo, hi, self.prec)
    }

    pub fn ln(&self) -> Result<Interval, ExactError> {
        if !self.lo.is_positive() {
            return Err(ExactError::Domain {
                op: "ln",
                interval: self.to_string(),
            });
        }
        let wp = self.prec + GUARD;
        let lo = ln_point(&self.lo, wp).lo;
        let hi = ln_point(&self.hi, wp).hi;
        Ok(Interval::new(lo, hi, self.prec))
    }

    /// `base^exponent = exp(exponent · ln base)`, for a positive base.
    pub fn pow(&self, exponent: &Interval) -> Result<Interval, ExactError> {
        let p = self.joined_prec(exponent);
        let wp = p + GUARD;
        let l = self.clone().with_prec(wp).ln()?;
        Ok((&l * &exponent.clone().with_prec(wp)).exp().round_to(p))
    }

    pub fn cosh(&self) -> Interval {
        let wp = self.prec + GUARD;
        let at = |x: &Rational| {
            let e = exp_point(x, wp);
            let inv = exp_point(&-x, wp);
            (&e + &inv).mul_rat(&Rational::new(1.into(), 2.into()))
        };
        let result = if !self.lo.is_negative() {
            Interval::exact(at(&self.lo).lo, at(&self.hi).hi, wp)
        } else if !self.hi.is_positive() {
            Interval::exact(at(&self.hi).lo, at(&self.lo).hi, wp)
        } else {
            let top = at(&self.lo).hi.max(at(&self.hi).hi);
            Interval::exact(Rational::one(), top, wp)
        };
        result.round_to(self.prec)
    }

    pub fn cos(&self) -> Interval {
        self.trig(cos_point)
    }

    pub fn sin(&self) -> Interval {
        self.trig(sin_point)
    }

    /// 1-Lipschitz trig evaluation: value at the (range-reduced) midpoint,
    /// widened by the radius, clamped to `[-1, 1]`.
    fn trig(&self, f: fn(&Rational, u32) -> Interval) -> Interval {
        let wp = self.prec + GUARD;
        let unit = Interval::exact(int(-1), int(1), self.prec);
        if self.width() > int(4) {
            return unit;
        }
        let mut m = Interval::point(self.mid(), wp);
        let approx = rational_to_f64(m.lo());
        let k = (approx / std::f64::consts::TAU).round();
        if k != 0.0 {
            let two_pi = pi(wp).mul_rat(&int(2));
            m = &m - &two_pi.mul_rat(&Rational::from_integer(BigInt::from(k as i64)));
        }
        let center = m.mid();
        let spread = m.radius() + self.radius();
        let v = f(&center, wp);
        let widened = Interval::exact(v.lo - &spread, v.hi + &spread, wp);
        widened
            .intersect(&unit)
            .unwrap_or(unit)
            .round_to(self.prec)
    }

    /// `arccosh(x) = ln(x + sqrt(x² − 1))` for `x ≥ 1`. A lower endpoint below 1
    /// is clamped to 1, so callers must only pass enclosures of values `≥ 1`.
    pub fn arccosh(&self) -> Result<Interval, ExactError> {
        if self.hi < Rational::one() {
            return Err(ExactError::Domain {
                op: "arccosh",
                interval: self.to_string(),
            });
        }
        let wp = self.prec + GUARD;
        let x = Interval::exact(self.lo.clone().max(Rational::one()), self.hi.clone(), wp);
        let t = &x.sqr() - &Interval::from_int(1, wp);
        let t = Interval::exact(t.lo.max(Rational::zero()), t.hi, wp);
        let s = t.sqrt()?;
        Ok((&x + &s).ln()?.round_to(self.prec))
    }

    /// Re-rounds outward to `prec` bits and adopts that precision.
    pub fn round_to(&self, prec: u32) -> Interval {
        Interval::new(self.lo.clone(), self.hi.clone(), prec)
    }

    pub fn decimal(&self, digits: usize) -> String {
        format_sig(&self.mid(), digits)
    }
}

fn sqrt_bound(x: &Rational, prec: u32, upper: bool) -> Rational {
    if x.is_zero() {
        return Rational::zero();
    }
    let n = x.numer();
    let d = x.denom();
    let s = (prec as i64 + 2 - log2_estimate(x) / 2).max(0) as usize;
    let radicand = (n * d) << (2 * s);
    let q = radicand.sqrt();
    let den = d << s;
    if upper {
        if &q * &q == radicand {
            Rational::new(q, den)
        } else {
            Rational::new(q + 1, den)
        }
    } else {
        Rational::new(q, den)
    }
}

pub(crate) fn rational_to_f64(x: &Rational) -> f64 {
    match (x.numer().to_f64(), x.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() && d != 0.0 => n / d,
        _ => {
            let shift = log2_estimate(x) - 60;
            let scaled = x / pow2(shift);
            let v = scaled.numer().to_f64().unwrap_or(0.0) / scaled.denom().to_f64().unwrap_or(1.0);
            v * 2f64.powi(shift as i32)
        }
    }
}

/// `exp(r)` for a rational point.
fn exp_point(r: &Rational, wp: u32) -> Interval {
    if r.is_zero() {
        return Interval::point(Rational::one(), wp);
    }
    let k = (log2_estimate(r) + 10).max(0);
    let y = r / pow2(k);
    let wp2 = wp + k as u32 + 16;
    let yi = Interval::point(y.clone(), wp2);
    let ay = y.abs();
    let mut term = Interval::point(Rational::one(), wp2);
    let mut sum = term.clone();
    let tiny = pow2(-(wp2 as i64) - 4);
    let mut n = 1i64;
    loop {
        term = (&term * &yi).mul_rat(&Rational::new(1.into(), n.into()));
        sum = &sum + &term;
        n += 1;
        if term.abs().hi < tiny {
            break;
        }
    }
    // remainder ≤ |term|·|y|/n · 1/(1−|y|) ≤ 2|term|·|y|/n  for |y| ≤ 1/2
    let rem = term.abs().hi * &ay * int(2) / int(n);
    let mut result = Interval::new(sum.lo - &rem, sum.hi + &rem, wp2);
    for _ in 0..k {
        result = result.sqr();
    }
    result.round_to(wp)
}

/// `sum_{n≥0} z^{2n+1}/(2n+1)` for |z| ≤ 1/3, enclosed.
fn atanh_series(z: &Rational, wp: u32) -> Interval {
    if z.is_zero() {
        return Interval::point(Rational::zero(), wp);
    }
    let zi = Interval::point(z.clone(), wp);
    let z2 = zi.sqr();
    let mut pw = zi.clone();
    let mut sum = zi;
    let tiny = pow2(-(wp as i64) - 4);
    let mut k = 1i64;
    loop {
        pw = &pw * &z2;
        let term = pw.mul_rat(&Rational::new(1.into(), (2 * k + 1).into()));
        sum = &sum + &term;
        k += 1;
        if pw.abs().hi < tiny {
            break;
        }
    }
    // remainder ≤ |z|^{2k+1}/((2k+1)(1−z²)) ≤ 2·|pw|·z²
    let z2r = z * z;
    let rem = pw.abs().hi * &z2r * int(2);
    Interval::new(sum.lo - &rem, sum.hi + &rem, wp)
}

fn cache_get(cache: &'static OnceLock<Mutex<HashMap<u32, Interval>>>, wp: u32, f: impl FnOnce() -> Interval) -> Interval {
    let m = cache.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = m.lock().unwrap().get(&wp) {
        return v.clone();
    }
    let v = f();
    m.lock().unwrap().insert(wp, v.clone());
    v
}

/// ln 2 = 2·atanh(1/3).
pub(crate) fn ln2(wp: u32) -> Interval {
    static CACHE: OnceLock<Mutex<HashMap<u32, Interval>>> = OnceLock::new();
    cache_get(&CACHE, wp, || {
        atanh_series(&Rational::new(1.into(), 3.into()), wp + 8)
            .mul_rat(&int(2))
            .round_to(wp)
    })
}

fn arctan_inv(x: i64, wp: u32) -> Interval {
    // atan(1/x) = sum (-1)^k / ((2k+1) x^{2k+1}); alternating, decreasing
    let mut sum = Interval::point(Rational::zero(), wp);
    let mut k = 0i64;
    let tiny = pow2(-(wp as i64) - 4);
    let xb = BigInt::from(x);
    let mut pw = xb.clone();
    loop {
        let t = Rational::new(BigInt::one(), &pw * BigInt::from(2 * k + 1));
        let ti = Interval::new(t.clone(), t.clone(), wp);
        sum = if k % 2 == 0 { &sum + &ti } else { &sum - &ti };
        k += 1;
        pw = &pw * &xb * &xb;
        if t < tiny {
            let next = Rational::new(BigInt::one(), &pw * BigInt::from(2 * k + 1));
            return Interval::new(sum.lo - &next, sum.hi + &next, wp);
        }
    }
}

/// π by Machin's formula.
pub fn pi(wp: u32) -> Interval {
    static CACHE: OnceLock<Mutex<HashMap<u32, Interval>>> = OnceLock::new();
    cache_get(&CACHE, wp, || {
        let w = wp + 8;
        let a = arctan_inv(5, w).mul_rat(&int(16));
        let b = arctan_inv(239, w).mul_rat(&int(4));
        (&a - &b).round_to(wp)
    })
}

fn ln_point(r: &Rational, wp: u32) -> Interval {
    let mut e = log2_estimate(r);
    let mut m = r / pow2(e);
    let four_thirds = Rational::new(4.into(), 3.into());
    let two_thirds = Rational::new(2.into(), 3.into());
    while m > four_thirds {
        m /= int(2);
        e += 1;
    }
    while m < two_thirds {
        m *= int(2);
        e -= 1;
    }
    let w = wp + 8 + (64 - (e.unsigned_abs()).leading_zeros());
    let z = (&m - Rational::one()) / (&m + Rational::one());
    let lm = atanh_series(&z, w).mul_rat(&int(2));
    let result = &lm + &ln2(w).mul_rat(&int(e));
    result.round_to(wp)
}

/// Taylor series for cos with Lagrange remainder |y|^{2N}/(2N)!.
fn cos_point(y: &Rational, wp: u32) -> Interval {
    let yi = Interval::point(y.clone(), wp);
    let y2 = yi.sqr();
    let mut term = Interval::point(Rational::one(), wp);
    let mut sum = term.clone();
    let tiny = pow2(-(wp as i64) - 4);
    let mut n = 1i64;
    loop {
        term = -&(&term * &y2).mul_rat(&Rational::new(1.into(), ((2 * n - 1) * (2 * n)).into()));
        sum = &sum + &term;
        n += 1;
        let next = (&term * &y2).mul_rat(&Rational::new(1.into(), ((2 * n - 1) * (2 * n)).into()));
        if next.abs().hi < tiny && n > 2 {
            let rem = next.abs().hi;
            return Interval::new(sum.lo - &rem, sum.hi + &rem, wp);
        }
    }
}

fn sin_point(y: &Rational, wp: u32) -> Interval {
    let yi = Interval::point(y.clone(), wp);
    let y2 = yi.sqr();
    let mut term = yi;
    let mut sum = term.clone();
    let tiny = pow2(-(wp as i64) - 4);
    let mut n = 1i64;
    loop {
        term = -&(&term * &y2).mul_rat(&Rational::new(1.into(), ((2 * n) * (2 * n + 1)).into()));
        sum = &sum + &term;
        n += 1;
        let next = (&term * &y2).mul_rat(&Rational::new(1.into(), ((2 * n) * (2 * n + 1)).into()));
        if next.abs().hi < tiny && n > 2 {
            let rem = next.abs().hi;
            return Interval::new(sum.lo - &rem, sum.hi + &rem, wp);
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            format_sig(&self.lo, 12),
            format_sig(&self.hi, 12)
        )
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
            prec: self.prec,
        }
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        -&self
    }
}

impl Add for &Interval {
    type Output = Interval;
    fn add(self, o: &Interval) -> Interval {
        Interval::new(qadd(&self.lo, &o.lo), qadd(&self.hi, &o.hi), self.joined_prec(o))
    }
}

impl Sub for &Interval {
    type Output = Interval;
    fn sub(self, o: &Interval) -> Interval {
        Interval::new(qsub(&self.lo, &o.hi), qsub(&self.hi, &o.lo), self.joined_prec(o))
    }
}

impl Mul for &Interval {
    type Output = Interval;
    fn mul(self, o: &Interval) -> Interval {
        let prec = self.joined_prec(o);
        if self.is_point() && o.is_point() {
            let p = qmul(&self.lo, &o.lo);
            return Interval::new(p.clone(), p, prec);
        }
        let (a_pos, a_neg) = (!self.lo.is_negative(), !self.hi.is_positive());
        let (b_pos, b_neg) = (!o.lo.is_negative(), !o.hi.is_positive());
        let (lo, hi) = match (a_pos, a_neg, b_pos, b_neg) {
            (true, _, true, _) => (qmul(&self.lo, &o.lo), qmul(&self.hi, &o.hi)),
            (_, true, _, true) => (qmul(&self.hi, &o.hi), qmul(&self.lo, &o.lo)),
            (true, _, _, true) => (qmul(&self.hi, &o.lo), qmul(&self.lo, &o.hi)),
            (_, true, true, _) => (qmul(&self.lo, &o.hi), qmul(&self.hi, &o.lo)),
            _ => {
                let c = [
                    qmul(&self.lo, &o.lo),
                    qmul(&self.lo, &o.hi),
                    qmul(&self.hi, &o.lo),
                    qmul(&self.hi, &o.hi),
                ];
                let lo = c.iter().skip(1).fold(c[0].clone(), |m, x| qmin(&m, x));
                let hi = c.iter().skip(1).fold(c[0].clone(), |m, x| qmax(&m, x));
                (lo, hi)
            }
        };
        Interval::new(lo, hi, prec)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Interval {
            type Output = Interval;
            fn $m(self, o: Interval) -> Interval {
                (&self).$m(&o)
            }
        }
        impl $tr<&Interval> for Interval {
            type Output = Interval;
            fn $m(self, o: &Interval) -> Interval {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
