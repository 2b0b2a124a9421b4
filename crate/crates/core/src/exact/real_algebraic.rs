use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use super::interval::{qadd, qcmp, qeq, qhalf, Interval};
use super::poly::IntPolynomial;
use super::rational::{format_rational, int, Rational};
use super::ExactError;

/// A real root of an integer polynomial, held as its minimal polynomial and an
/// isolating interval with rational endpoints. The interval is either a single
/// rational point (degree 1) or open with no root at its endpoints.
///
/// `certified` is false when the minimal polynomial has degree above 4 and
/// was not proven irreducible; it is then only known to be squarefree.
#[derive(Clone, Debug)]
pub struct RealAlgebraic {
    minpoly: IntPolynomial,
    lo: Rational,
    hi: Rational,
    certified: bool,
}

/// Roots of the squarefree polynomial `f` inside `[lo, hi]`, as isolating
/// intervals contained in it. `lo` and `hi` themselves are tested exactly.
fn roots_in(f: &IntPolynomial, lo: &Rational, hi: &Rational) -> Vec<(Rational, Rational)> {
    let mut out = vec![];
    let Ok(iso) = f.isolate_real_roots() else {
        return out;
    };
    for (mut a, mut b) in iso {
        if a < b {
            if f.sign_at(&a) == 0 {
                b = a.clone();
            } else if f.sign_at(&b) == 0 {
                a = b.clone();
            }
        }
        let sa = f.sign_at(&a);
        let lt = |x: &Rational, y: &Rational| qcmp(x, y) == Ordering::Less;
        loop {
            if lt(&b, lo) || lt(hi, &a) {
                break;
            }
            if !lt(&a, lo) && !lt(hi, &b) {
                out.push((a, b));
                break;
            }
            if qeq(&a, &b) {
                break;
            }
            // the interval straddles an endpoint; an endpoint root is an exact point
            let at = |x: &Rational| lt(&a, x) && lt(x, &b) && f.sign_at(x) == 0;
            if at(lo) || at(hi) {
                let r = if at(lo) { lo.clone() } else { hi.clone() };
                out.push((r.clone(), r));
                break;
            }
            let mid = qhalf(&qadd(&a, &b));
            match f.sign_at(&mid) {
                0 => {
                    a = mid.clone();
                    b = mid;
                }
                s if s == sa => a = mid,
                _ => b = mid,
            }
        }
    }
    out
}

impl RealAlgebraic {
    pub fn from_rational(r: Rational) -> Self {
        RealAlgebraic {
            minpoly: IntPolynomial::linear_from_root(&r),
            lo: r.clone(),
            hi: r,
            certified: true,
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(int(n))
    }

    /// The `index`-th real root (ascending, distinct roots) of `p`. The
    /// minimal polynomial is the irreducible factor of `p` vanishing there.
    pub fn from_root_index(p: &IntPolynomial, index: usize) -> Result<Self, ExactError> {
        let iso = p.isolate_real_roots()?;
        let (lo, hi) = iso.get(index).cloned().ok_or_else(|| {
            ExactError::NoRootInEnclosure(format!("{p} (root index {index})"))
        })?;
        Self::from_isolated(p, lo, hi)
    }

    /// The unique root of `p` inside the closed enclosure.
    pub fn from_poly_in(p: &IntPolynomial, enclosure: &Interval) -> Result<Self, ExactError> {
        if p.is_zero() {
            return Err(ExactError::ZeroPolynomial);
        }
        let sf = p.squarefree_part();
        let found = roots_in(&sf, enclosure.lo(), enclosure.hi());
        match found.len() {
            0 => Err(ExactError::NoRootInEnclosure(p.to_string())),
            1 => {
                let (lo, hi) = found.into_iter().next().unwrap();
                Self::from_isolated(p, lo, hi)
            }
            _ => Err(ExactError::AmbiguousEnclosure(p.to_string())),
        }
    }

    /// Like [`from_root_index`](Self::from_root_index), for a polynomial
    /// known to be irreducible by construction (cyclotomic-type families).
    pub fn from_irreducible_root(p: &IntPolynomial, index: usize) -> Result<Self, ExactError> {
        let p = p.primitive_part();
        let iso = p.isolate_real_roots()?;
        let (lo, hi) = iso
            .get(index)
            .cloned()
            .ok_or_else(|| ExactError::NoRootInEnclosure(format!("{p} (root index {index})")))?;
        if p.degree() == 1 {
            return Ok(Self::from_rational(lo));
        }
        Ok(RealAlgebraic {
            minpoly: p,
            lo,
            hi,
            certified: true,
        })
    }

    fn from_isolated(p: &IntPolynomial, lo: Rational, hi: Rational) -> Result<Self, ExactError> {
        if lo == hi {
            return Ok(Self::from_rational(lo));
        }
        for (f, _, certified) in p.factor() {
            let r = roots_in(&f, &lo, &hi);
            if let Some((a, b)) = r.into_iter().next() {
                if f.degree() == 1 {
                    let c = f.coeffs();
                    return Ok(Self::from_rational(Rational::new(-c[0].clone(), c[1].clone())));
                }
                return Ok(RealAlgebraic {
                    minpoly: f,
                    lo: a,
                    hi: b,
                    certified,
                });
            }
        }
        Err(ExactError::NoRootInEnclosure(p.to_string()))
    }

    pub fn minpoly(&self) -> &IntPolynomial {
        &self.minpoly
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree()
    }

    pub fn is_certified(&self) -> bool {
        self.certified
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        (self.lo == self.hi).then_some(&self.lo)
    }

    /// Is the value an algebraic integer (monic minimal polynomial)?
    pub fn is_algebraic_integer(&self) -> bool {
        self.minpoly.is_monic()
    }

    pub fn bounds(&self) -> (&Rational, &Rational) {
        (&self.lo, &self.hi)
    }

    /// Same number with an isolating interval of width ≤ `width`.
    pub fn refined(&self, width: &Rational) -> Self {
        let (lo, hi) = self.minpoly.refine_root(&self.lo, &self.hi, width);
        RealAlgebraic {
            minpoly: self.minpoly.clone(),
            lo,
            hi,
            certified: self.certified,
        }
    }

    /// Enclosure of width ≤ `width` carried at `prec` bits.
    pub fn enclosure(&self, width: &Rational, prec: u32) -> Interval {
        let r = self.refined(width);
        if r.lo == r.hi {
            Interval::exact(r.lo, r.hi, prec)
        } else {
            Interval::new(r.lo, r.hi, prec)
        }
    }

    /// Enclosure with width about `2^-prec` relative to magnitude.
    pub fn interval(&self, prec: u32) -> Interval {
        let mag = self.lo.abs().max(self.hi.abs()) + int(1);
        let w = mag / Rational::from_integer(num_bigint::BigInt::from(1) << (prec as usize + 2));
        self.enclosure(&w, prec)
    }

    pub fn to_f64(&self) -> f64 {
        self.interval(64).to_f64()
    }

    pub fn sign(&self) -> i8 {
        match self.cmp(&RealAlgebraic::from_int(0)) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    pub fn neg(&self) -> Self {
        RealAlgebraic {
            minpoly: self.minpoly.compose_neg().primitive_part(),
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
            certified: self.certified,
        }
    }

    pub fn recip(&self) -> Result<Self, ExactError> {
        if let Some(r) = self.as_rational() {
            if r.is_zero() {
                return Err(ExactError::DivisionByZero);
            }
            return Ok(Self::from_rational(r.recip()));
        }
        let mut cur = self.clone();
        // degree ≥ 2 with irreducible minpoly: the root is nonzero
        while !(cur.lo.is_positive() || cur.hi.is_negative()) {
            let w = (&cur.hi - &cur.lo) / int(2);
            cur = cur.refined(&w);
            if cur.as_rational().is_some() {
                return cur.recip();
            }
        }
        Ok(RealAlgebraic {
            minpoly: cur.minpoly.reversed().primitive_part(),
            lo: cur.hi.recip(),
            hi: cur.lo.recip(),
            certified: cur.certified,
        })
    }

    /// `self²`, via the even polynomial `p(x)p(−x) = Q(x²)`.
    pub fn square(&self) -> Result<Self, ExactError> {
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_rational(r * r));
        }
        let even = &self.minpoly * &self.minpoly.compose_neg();
        let q = IntPolynomial::new(even.coeffs().iter().step_by(2).cloned().collect());
        let mut cur = self.clone();
        while !(cur.lo.is_positive() || cur.hi.is_negative()) {
            let w = (&cur.hi - &cur.lo) / int(2);
            cur = cur.refined(&w);
        }
        let sf = q.squarefree_part();
        // shrink until the square's enclosure isolates a single root of q
        loop {
            let (a, b) = if cur.lo.is_positive() {
                (&cur.lo * &cur.lo, &cur.hi * &cur.hi)
            } else {
                (&cur.hi * &cur.hi, &cur.lo * &cur.lo)
            };
            let found = roots_in(&sf, &a, &b);
            if found.len() == 1 {
                let (lo, hi) = found.into_iter().next().unwrap();
                return Self::from_isolated(&q, lo, hi);
            }
            let w = (&cur.hi - &cur.lo) / int(2);
            cur = cur.refined(&w);
        }
    }

    /// Total order; always decisive.
    pub fn cmp(&self, other: &RealAlgebraic) -> Ordering {
        if let (Some(x), Some(y)) = (self.as_rational(), other.as_rational()) {
            return x.cmp(y);
        }
        if self.same_value(other) {
            return Ordering::Equal;
        }
        let (mut x, mut y) = (self.clone(), other.clone());
        loop {
            if x.hi < y.lo {
                return Ordering::Less;
            }
            if y.hi < x.lo {
                return Ordering::Greater;
            }
            let wx = (&x.hi - &x.lo) / int(2);
            let wy = (&y.hi - &y.lo) / int(2);
            x = x.refined(&wx);
            y = y.refined(&wy);
        }
    }

    fn same_value(&self, other: &RealAlgebraic) -> bool {
        if self.hi < other.lo || other.hi < self.lo {
            return false;
        }
        let g = self.minpoly.gcd(&other.minpoly);
        if g.degree() == 0 {
            return false;
        }
        let lo = (&self.lo).max(&other.lo).clone();
        let hi = (&self.hi).min(&other.hi).clone();
        // endpoints of open isolating intervals are never roots, so a root of g
        // in the intersection lies inside both and equals both values
        !roots_in(&g.squarefree_part(), &lo, &hi).is_empty()
    }
}

impl PartialEq for RealAlgebraic {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl fmt::Display for RealAlgebraic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_rational() {
            Some(r) => write!(f, "{}", format_rational(r)),
            None => write!(
                f,
                "root of {} in ({}, {}) ≈ {}",
                self.minpoly,
                format_rational(&self.lo),
                format_rational(&self.hi),
                self.interval(64).decimal(10)
            ),
        }
    }
}

#[derive(Serialize)]
struct RealAlgebraicRepr {
    decimal: String,
    minpoly: IntPolynomial,
    lo: String,
    hi: String,
    certified_irreducible: bool,
}

impl Serialize for RealAlgebraic {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let r = self.refined(&Rational::new(1.into(), num_bigint::BigInt::from(1u64) << 40));
        RealAlgebraicRepr {
            decimal: self.interval(64).decimal(10),
            minpoly: self.minpoly.clone(),
            lo: format_rational(&r.lo),
            hi: format_rational(&r.hi),
            certified_irreducible: self.certified,
        }
        .serialize(s)
    }
}
