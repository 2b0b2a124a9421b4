//! Univariate integer polynomials.
//!
//! Real roots are isolated with the Descartes rule of signs applied to
//! bisected Möbius transforms (Vincent–Collins–Akritas), entirely in exact
//! integer arithmetic. Irreducibility is certified for degree ≤ 4 by a
//! Kronecker search for factors of degree ≤ 2.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::interval::{qadd, qcmp, qhalf, qsub, Interval};
use super::rational::{int, Rational};
use super::ExactError;

/// Integer polynomial, constant term first. The zero polynomial has no
/// coefficients; otherwise the leading coefficient is nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

/// Outcome of an irreducibility check over ℚ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Irreducibility {
    Proven,
    Reducible(IntPolynomial),
    /// Degree above the certified range and no rational root found.
    Unknown,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// `x - r` scaled to be primitive with integer coefficients.
    pub fn linear_from_root(r: &Rational) -> Self {
        Self::new(vec![-r.numer().clone(), r.denom().clone()])
    }

    pub fn monomial(degree: usize) -> Self {
        let mut c = vec![BigInt::zero(); degree + 1];
        c[degree] = BigInt::one();
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn constant(&self) -> BigInt {
        self.coeffs.first().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn eval_rational(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + Rational::from_integer(c.clone());
        }
        acc
    }

    /// Sign of `self(x)` by integer evaluation of the homogenized form.
    pub fn sign_at(&self, x: &Rational) -> i8 {
        let (n, d) = (x.numer(), x.denom());
        let mut acc = BigInt::zero();
        let mut dpow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * n + c * &dpow;
            dpow *= d;
        }
        match acc.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_interval(&self, x: &Interval) -> Interval {
        let prec = x.prec();
        let mut acc = Interval::from_int(0, prec);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + &Interval::point(Rational::from_integer(c.clone()), prec);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.leading().is_negative() {
            g = -g;
        }
        Self::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// `x^n p(1/x)`.
    pub fn reversed(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::new(c)
    }

    /// Palindromic coefficient sequence.
    pub fn is_reciprocal(&self) -> bool {
        !self.is_zero() && self.reversed() == *self && self.coeffs[0] != BigInt::zero()
    }

    /// `p(-x)`.
    pub fn compose_neg(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// `p(x + 1)`.
    fn taylor_shift_one(&self) -> Self {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = c[j + 1].clone();
                c[j] += t;
            }
        }
        Self::new(c)
    }

    /// `2^n p(x/2)`.
    fn halve_argument(&self) -> Self {
        let n = self.degree();
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c << (n - i))
                .collect(),
        )
    }

    /// `p(2^k x)`.
    fn scale_argument_pow2(&self, k: usize) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c << (k * i))
                .collect(),
        )
    }

    fn sign_variations(&self) -> usize {
        let signs: Vec<bool> = self
            .coeffs
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| c.is_positive())
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Exact quotient over ℤ if `d` divides `self`.
    pub fn div_exact(&self, d: &IntPolynomial) -> Option<IntPolynomial> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.degree() < d.degree() {
            return None;
        }
        let mut r = self.coeffs.clone();
        let dl = d.leading();
        let dn = d.degree();
        let mut q = vec![BigInt::zero(); self.degree() - dn + 1];
        for i in (0..q.len()).rev() {
            let top = &r[i + dn];
            if top.is_zero() {
                continue;
            }
            let (qi, rem) = top.div_rem(&dl);
            if !rem.is_zero() {
                return None;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[i + j] -= &qi * dc;
            }
            q[i] = qi;
        }
        r.iter().all(|c| c.is_zero()).then(|| Self::new(q))
    }

    /// Pseudo-remainder `lc(d)^(deg a - deg d + 1) · a mod d`.
    fn pseudo_rem(&self, d: &IntPolynomial) -> IntPolynomial {
        let mut r = self.clone();
        let dl = d.leading();
        let dn = d.degree();
        while !r.is_zero() && r.degree() >= dn {
            let rl = r.leading();
            let shift = r.degree() - dn;
            let mut c: Vec<BigInt> = r.coeffs.iter().map(|x| x * &dl).collect();
            for (j, dc) in d.coeffs.iter().enumerate() {
                c[shift + j] -= &rl * dc;
            }
            r = Self::new(c);
        }
        r
    }

    /// Primitive gcd over ℚ[x] (positive leading coefficient).
    pub fn gcd(&self, other: &IntPolynomial) -> IntPolynomial {
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        a.primitive_part()
    }

    pub fn squarefree_part(&self) -> IntPolynomial {
        if self.degree() == 0 {
            return self.primitive_part();
        }
        let g = self.gcd(&self.derivative());
        self.primitive_part().div_exact(&g).expect("gcd divides").primitive_part()
    }

    /// Yun's algorithm: `self = c · ∏ fᵢ^i` with the `fᵢ` squarefree, primitive,
    /// pairwise coprime. Returns `(fᵢ, i)` for nonconstant `fᵢ`.
    pub fn squarefree_decomposition(&self) -> Vec<(IntPolynomial, usize)> {
        let mut out = vec![];
        if self.degree() == 0 {
            return out;
        }
        let f = self.primitive_part();
        let fp = f.derivative();
        let a0 = to_rat(&f.gcd(&fp));
        let mut b = rat_divmod(&to_rat(&f), &a0).0;
        let mut c = rat_divmod(&to_rat(&fp), &a0).0;
        let mut i = 1;
        while b.len() > 1 {
            let d = rat_sub(&c, &rat_derivative(&b));
            let g = from_rat_primitive(&b).gcd(&from_rat_primitive(&d));
            if g.degree() > 0 {
                out.push((g.clone(), i));
            }
            let gq = to_rat(&g);
            b = rat_divmod(&b, &gq).0;
            c = rat_divmod(&d, &gq).0;
            i += 1;
        }
        out
    }

    /// Isolating intervals for the distinct real roots, ascending. Each entry
    /// `(lo, hi)` is either an exact root (`lo == hi`) or an open interval
    /// with rational endpoints containing exactly one root and no root at
    /// its endpoints.
    pub fn isolate_real_roots(&self) -> Result<Vec<(Rational, Rational)>, ExactError> {
        if self.is_zero() {
            return Err(ExactError::ZeroPolynomial);
        }
        let mut p = self.squarefree_part();
        let mut out = vec![];
        if p.degree() == 0 {
            return Ok(out);
        }
        let sf = p.clone();
        if p.constant().is_zero() {
            out.push((Rational::zero(), Rational::zero()));
            p = Self::new(p.coeffs[1..].to_vec());
        }
        for (lo, hi) in isolate_positive(&p.compose_neg()) {
            out.push((-hi, -lo));
        }
        out.extend(isolate_positive(&p));
        let out = out
            .into_iter()
            .map(|(lo, hi)| {
                if lo != hi && (sf.eval_rational(&lo).is_zero() || sf.eval_rational(&hi).is_zero()) {
                    clean_endpoints(&sf, lo, hi)
                } else {
                    (lo, hi)
                }
            })
            .collect::<Vec<_>>();
        let mut out = out;
        out.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(out)
    }

    /// Shrinks an isolating interval (as returned by
    /// [`isolate_real_roots`](Self::isolate_real_roots)) to width ≤ `width`.
    pub fn refine_root(&self, lo: &Rational, hi: &Rational, width: &Rational) -> (Rational, Rational) {
        let (mut lo, mut hi) = (lo.clone(), hi.clone());
        if lo == hi {
            return (lo, hi);
        }
        let p = self.squarefree_part();
        let slo = p.sign_at(&lo);
        while qcmp(&qsub(&hi, &lo), width) == std::cmp::Ordering::Greater {
            let mid = qhalf(&qadd(&lo, &hi));
            let s = p.sign_at(&mid);
            if s == 0 {
                return (mid.clone(), mid);
            }
            if s == slo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (lo, hi)
    }

    /// One interval per distinct real root, pairwise disjoint, ascending,
    /// each of width ≤ `width`.
    pub fn real_roots(&self, width: &Rational, prec: u32) -> Result<Vec<Interval>, ExactError> {
        let iso = self.isolate_real_roots()?;
        Ok(iso
            .iter()
            .map(|(lo, hi)| {
                let (a, b) = self.refine_root(lo, hi, width);
                Interval::exact(a, b, prec)
            })
            .collect())
    }

    pub fn real_root_count(&self) -> Result<usize, ExactError> {
        Ok(self.isolate_real_roots()?.len())
    }

    /// Distinct rational roots, ascending.
    pub fn rational_roots(&self) -> Result<Vec<Rational>, ExactError> {
        let p = self.squarefree_part();
        if p.degree() == 0 {
            return Ok(vec![]);
        }
        let lead = p.leading().abs();
        let lead_q = Rational::from_integer(lead.clone());
        let w = Rational::new(BigInt::one(), &lead * 4);
        let mut out = vec![];
        for (lo, hi) in p.isolate_real_roots()? {
            if lo == hi {
                out.push(lo);
                continue;
            }
            let (a, b) = p.refine_root(&lo, &hi, &w);
            if a == b {
                out.push(a);
                continue;
            }
            let cand = Rational::new(((&a + &b) / int(2) * &lead_q).round().to_integer(), lead.clone());
            if cand > a && cand < b && p.eval_rational(&cand).is_zero() {
                out.push(cand);
            }
        }
        Ok(out)
    }

    /// Certified irreducibility over ℚ for degree ≤ 4; for higher degree
    /// only a rational-root (linear factor) search is attempted.
    pub fn irreducibility(&self) -> Irreducibility {
        let p = self.primitive_part();
        if p.degree() == 0 {
            return Irreducibility::Reducible(p);
        }
        if p.degree() == 1 {
            return Irreducibility::Proven;
        }
        if let Ok(roots) = p.rational_roots() {
            if let Some(r) = roots.first() {
                return Irreducibility::Reducible(Self::linear_from_root(r));
            }
        }
        if p.degree() <= 3 {
            return Irreducibility::Proven;
        }
        if p.degree() == 4 {
            return match quadratic_factor(&p) {
                Some(f) => Irreducibility::Reducible(f),
                None => Irreducibility::Proven,
            };
        }
        Irreducibility::Unknown
    }

    /// Complete factorization into irreducible primitive factors (with
    /// multiplicity) when every squarefree piece has degree ≤ 4; pieces of
    /// higher degree are returned unfactored with `false` in the flag.
    pub fn factor(&self) -> Vec<(IntPolynomial, usize, bool)> {
        let mut out = vec![];
        for (f, m) in self.squarefree_decomposition() {
            let mut stack = vec![f];
            while let Some(g) = stack.pop() {
                match g.irreducibility() {
                    Irreducibility::Proven => out.push((g, m, true)),
                    Irreducibility::Unknown => out.push((g, m, false)),
                    Irreducibility::Reducible(h) => {
                        let q = g.div_exact(&h).expect("factor divides").primitive_part();
                        stack.push(h.primitive_part());
                        stack.push(q);
                    }
                }
            }
        }
        out.sort();
        out
    }
}

fn sgn(r: &Rational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

// Rational-coefficient helpers for Yun's algorithm.
fn to_rat(p: &IntPolynomial) -> Vec<Rational> {
    p.coeffs.iter().map(|c| Rational::from_integer(c.clone())).collect()
}

fn rat_trim(mut v: Vec<Rational>) -> Vec<Rational> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn rat_derivative(p: &[Rational]) -> Vec<Rational> {
    rat_trim(p.iter().enumerate().skip(1).map(|(i, c)| c * int(i as i64)).collect())
}

fn rat_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    rat_trim(
        (0..n)
            .map(|i| {
                a.get(i).cloned().unwrap_or_default() - b.get(i).cloned().unwrap_or_default()
            })
            .collect(),
    )
}

fn rat_divmod(a: &[Rational], d: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut r = a.to_vec();
    if r.len() < d.len() {
        return (vec![], rat_trim(r));
    }
    let dl = d.last().unwrap().clone();
    let mut q = vec![Rational::zero(); r.len() - d.len() + 1];
    for i in (0..q.len()).rev() {
        let qi = &r[i + d.len() - 1] / &dl;
        for (j, dc) in d.iter().enumerate() {
            r[i + j] -= &qi * dc;
        }
        q[i] = qi;
    }
    (rat_trim(q), rat_trim(r))
}



fn from_rat_primitive(p: &[Rational]) -> IntPolynomial {
    if p.is_empty() {
        return IntPolynomial::zero();
    }
    let l = p.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    IntPolynomial::new(p.iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect())
        .primitive_part()
}

/// Shrinks an interval holding exactly one root of the squarefree `p` in its
/// interior until neither endpoint is a root.
fn clean_endpoints(p: &IntPolynomial, mut lo: Rational, mut hi: Rational) -> (Rational, Rational) {
    let dp = p.derivative();
    loop {
        let s_lo = sgn(&p.eval_rational(&lo));
        let s_hi = sgn(&p.eval_rational(&hi));
        if s_lo != 0 && s_hi != 0 {
            return (lo, hi);
        }
        let right_of_lo = if s_lo != 0 { s_lo } else { sgn(&dp.eval_rational(&lo)) };
        let mid = (&lo + &hi) / int(2);
        let s_mid = sgn(&p.eval_rational(&mid));
        if s_mid == 0 {
            return (mid.clone(), mid);
        }
        if right_of_lo != s_mid {
            hi = mid;
        } else {
            lo = mid;
        }
    }
}

/// Roots in (0, ∞) of a squarefree polynomial with `p(0) ≠ 0`.
fn isolate_positive(p: &IntPolynomial) -> Vec<(Rational, Rational)> {
    let mut out = vec![];
    if p.degree() == 0 || p.sign_variations() == 0 {
        return out;
    }
    // Cauchy bound 1 + max|aᵢ/aₙ| < 2^k
    let lead_bits = p.leading().bits() as i64;
    let max_bits = p.coeffs.iter().map(|c| c.bits() as i64).max().unwrap_or(0);
    let k = (max_bits - lead_bits + 2).max(1) as usize;
    let q = p.scale_argument_pow2(k);
    let hi = Rational::from_integer(BigInt::one() << k);
    vca(q, Rational::zero(), hi, &mut out);
    out
}

/// `q` has its roots of interest in (0, 1), mapped affinely onto (lo, hi).
fn vca(q: IntPolynomial, lo: Rational, hi: Rational, out: &mut Vec<(Rational, Rational)>) {
    let v = q.reversed().taylor_shift_one().sign_variations();
    if v == 0 {
        return;
    }
    if v == 1 {
        out.push((lo, hi));
        return;
    }
    let mid = (&lo + &hi) / int(2);
    let left = q.halve_argument();
    let mut right = left.taylor_shift_one();
    if right.constant().is_zero() {
        out.push((mid.clone(), mid.clone()));
        right = IntPolynomial::new(right.coeffs[1..].to_vec());
    }
    vca(left, lo, mid.clone(), out);
    vca(right, mid, hi, out);
}

fn small_divisors(n: &BigInt) -> Option<Vec<i64>> {
    let n = n.abs().to_u64()?;
    if n == 0 || n > 1_000_000_000_000 {
        return None;
    }
    let mut ds = vec![];
    let mut i = 1u64;
    while i * i <= n {
        if n % i == 0 {
            ds.push(i as i64);
            if i * i != n {
                ds.push((n / i) as i64);
            }
        }
        i += 1;
    }
    ds.sort();
    Some(ds)
}

/// Kronecker search for a quadratic factor of a primitive polynomial
/// without rational roots.
fn quadratic_factor(p: &IntPolynomial) -> Option<IntPolynomial> {
    let pts: Vec<i64> = [0i64, 1, -1, 2, -2, 3, -3]
        .into_iter()
        .filter(|&x| !p.eval_int(&BigInt::from(x)).is_zero())
        .take(3)
        .collect();
    let divs: Vec<Vec<i64>> = pts
        .iter()
        .map(|&x| small_divisors(&p.eval_int(&BigInt::from(x))))
        .collect::<Option<Vec<_>>>()?;
    let xs: Vec<Rational> = pts.iter().map(|&x| int(x)).collect();
    for &d0 in &divs[0] {
        for &d1 in &divs[1] {
            for s1 in [1i64, -1] {
                for &d2 in &divs[2] {
                    for s2 in [1i64, -1] {
                        let ys = [int(d0), int(s1 * d1), int(s2 * d2)];
                        if let Some(g) = interpolate_quadratic(&xs, &ys) {
                            if g.degree() == 2 && p.div_exact(&g).is_some() {
                                return Some(g.primitive_part());
                            }
                        }
                    }
                }
            }
        }
    }
    None
}

fn interpolate_quadratic(xs: &[Rational], ys: &[Rational]) -> Option<IntPolynomial> {
    let mut c = [Rational::zero(), Rational::zero(), Rational::zero()];
    for i in 0..3 {
        let (a, b) = match i {
            0 => (&xs[1], &xs[2]),
            1 => (&xs[0], &xs[2]),
            _ => (&xs[0], &xs[1]),
        };
        let denom = (&xs[i] - a) * (&xs[i] - b);
        let s = &ys[i] / denom;
        // (x - a)(x - b) = x² - (a+b)x + ab
        c[0] += &s * a * b;
        c[1] -= &s * (a + b);
        c[2] += &s;
    }
    c.iter()
        .all(|v| v.is_integer())
        .then(|| IntPolynomial::new(c.iter().map(|v| v.to_integer()).collect()))
}

pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// The n-th cyclotomic polynomial.
pub fn cyclotomic(n: u64) -> IntPolynomial {
    static CACHE: OnceLock<Mutex<HashMap<u64, IntPolynomial>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    let mut num = IntPolynomial::monomial(n as usize) - IntPolynomial::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            num = num.div_exact(&cyclotomic(d)).expect("cyclotomic divisor");
        }
    }
    cache.lock().unwrap().insert(n, num.clone());
    num
}

/// Minimal polynomial of `2cos(2π/n)`.
pub fn two_cos_minpoly(n: u64) -> IntPolynomial {
    assert!(n >= 1);
    match n {
        1 => return IntPolynomial::from_i64(&[-2, 1]),
        2 => return IntPolynomial::from_i64(&[2, 1]),
        _ => {}
    }
    let phi = cyclotomic(n);
    let m = phi.degree() / 2;
    // Dickson polynomials D_k(y) = x^k + x^-k with y = x + 1/x
    let y = IntPolynomial::from_i64(&[0, 1]);
    let mut dickson = vec![IntPolynomial::from_i64(&[2]), y.clone()];
    for k in 2..=m {
        let next = &y * &dickson[k - 1] - dickson[k - 2].clone();
        dickson.push(next);
    }
    let c = phi.coeffs();
    let mut psi = IntPolynomial::new(vec![c[m].clone()]);
    for k in 1..=m {
        psi = psi + dickson[k].scale(&c[m + k]);
    }
    psi.primitive_part()
}

impl IntPolynomial {
    pub fn scale(&self, s: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }
}

impl Add for IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, o: IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        IntPolynomial::new(
            (0..n)
                .map(|i| {
                    self.coeffs.get(i).cloned().unwrap_or_default()
                        + o.coeffs.get(i).cloned().unwrap_or_default()
                })
                .collect(),
        )
    }
}

impl Neg for IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl Sub for IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, o: IntPolynomial) -> IntPolynomial {
        self + (-o)
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, o: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || o.is_zero() {
            return IntPolynomial::zero();
        }
        let mut c = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        IntPolynomial::new(c)
    }
}

impl Mul for IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, o: IntPolynomial) -> IntPolynomial {
        &self * &o
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = i == 0 || !a.is_one();
            if show_coeff {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

/// JSON integer array, constant term first. Integers outside the `i64` range
/// are written as decimal strings.
impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let vals: Vec<serde_json::Value> = self
            .coeffs
            .iter()
            .map(|c| match c.to_i64() {
                Some(v) => serde_json::Value::from(v),
                None => serde_json::Value::from(c.to_string()),
            })
            .collect();
        vals.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let vals = Vec::<serde_json::Value>::deserialize(d)?;
        let coeffs = vals
            .iter()
            .map(|v| match v {
                serde_json::Value::Number(n) => n
                    .as_i64()
                    .map(BigInt::from)
                    .ok_or_else(|| format!("non-integer coefficient {n}")),
                serde_json::Value::String(s) => {
                    s.parse::<BigInt>().map_err(|_| format!("bad integer {s:?}"))
                }
                other => Err(format!("bad coefficient {other}")),
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        Ok(IntPolynomial::new(coeffs))
    }
}
