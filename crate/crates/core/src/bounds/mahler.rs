use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{BoundsError, Quantity, BOUND_PREC};
use crate::exact::{FieldElement, IntPolynomial, Interval, Irreducibility, Rational, RealAlgebraic};
use crate::hyp::exact_eigenvalue;

const PREC_CAP: u32 = 8192;

#[derive(Clone, Debug)]
struct CInterval {
    re: Interval,
    im: Interval,
}

impl CInterval {
    fn point(re: Rational, im: Rational, prec: u32) -> Self {
        CInterval {
            re: Interval::point(re, prec),
            im: Interval::point(im, prec),
        }
    }

    fn from_f64(z: Complex64, prec: u32) -> Self {
        let q = |x: f64| Rational::from_float(x).unwrap_or_else(Rational::zero);
        Self::point(q(z.re), q(z.im), prec)
    }

    fn add(&self, o: &Self) -> Self {
        CInterval {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }

    fn sub(&self, o: &Self) -> Self {
        CInterval {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }

    fn mul(&self, o: &Self) -> Self {
        CInterval {
            re: &(&self.re * &o.re) - &(&self.im * &o.im),
            im: &(&self.re * &o.im) + &(&self.im * &o.re),
        }
    }

    fn abs_sqr(&self) -> Interval {
        &self.re.sqr() + &self.im.sqr()
    }

    fn div(&self, o: &Self) -> Option<Self> {
        let den = o.abs_sqr();
        let re = (&(&self.re * &o.re) + &(&self.im * &o.im)).div(&den).ok()?;
        let im = (&(&self.im * &o.re) - &(&self.re * &o.im)).div(&den).ok()?;
        Some(CInterval { re, im })
    }

    fn abs(&self) -> Interval {
        self.abs_sqr().sqrt().expect("nonnegative")
    }

    fn mid(&self, prec: u32) -> Self {
        CInterval {
            re: Interval::point(self.re.mid(), prec).round_to(prec),
            im: Interval::point(self.im.mid(), prec).round_to(prec),
        }
        .collapse()
    }

    // midpoint of the rounded enclosure, as a point
    fn collapse(self) -> Self {
        let p = self.re.prec();
        CInterval {
            re: Interval::point(self.re.lo().clone(), p),
            im: Interval::point(self.im.lo().clone(), p),
        }
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

fn horner(c: &[CInterval], z: &CInterval) -> CInterval {
    let mut acc = c.last().unwrap().clone();
    for a in c.iter().rev().skip(1) {
        acc = acc.mul(z).add(a);
    }
    acc
}

fn coeffs_at(p: &IntPolynomial, prec: u32) -> Vec<CInterval> {
    p.coeffs()
        .iter()
        .map(|c| CInterval::point(Rational::from_integer(c.clone()), Rational::zero(), prec))
        .collect()
}

/// Double-precision Aberth iteration; a starting point for refinement.
fn aberth_f64(p: &IntPolynomial) -> Vec<Complex64> {
    let n = p.degree();
    let c: Vec<f64> = p.coeffs().iter().map(|x| x.to_f64().unwrap_or(f64::MAX)).collect();
    let lead = c[n];
    let radius = 1.0 + c[..n].iter().map(|x| (x / lead).abs()).fold(0.0, f64::max).min(1e6);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / n as f64 + 0.4))
        .collect();
    let eval = |x: Complex64| {
        let mut v = Complex64::new(c[n], 0.0);
        let mut d = Complex64::new(0.0, 0.0);
        for a in c[..n].iter().rev() {
            d = d * x + v;
            v = v * x + a;
        }
        (v, d)
    };
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (v, d) = eval(z[i]);
            if v == Complex64::new(0.0, 0.0) {
                continue;
            }
            let w = v / d;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let step = w / (1.0 - w * s);
            if step.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm() / z[i].norm().max(1.0));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    if z.iter().any(|x| !x.is_finite()) {
        return (0..n)
            .map(|k| Complex64::from_polar(1.5, std::f64::consts::TAU * k as f64 / n as f64 + 0.4))
            .collect();
    }
    z
}

/// One high-precision Aberth sweep; returns the largest relative step.
fn aberth_step(c: &[CInterval], dc: &[CInterval], z: &mut [CInterval], prec: u32) -> f64 {
    let n = z.len();
    let one = CInterval::point(Rational::one(), Rational::zero(), prec);
    let mut moved = 0.0f64;
    for i in 0..n {
        let v = horner(c, &z[i]);
        let d = horner(dc, &z[i]);
        let Some(w) = v.div(&d) else { continue };
        let mut s = CInterval::point(Rational::zero(), Rational::zero(), prec);
        for j in (0..n).filter(|&j| j != i) {
            if let Some(r) = one.div(&z[i].sub(&z[j])) {
                s = s.add(&r);
            }
        }
        let Some(step) = w.div(&one.sub(&w.mul(&s))) else { continue };
        let step = step.mid(prec);
        let rel = step.to_c64().norm() / z[i].to_c64().norm().max(1.0);
        if rel.is_finite() {
            moved = moved.max(rel);
        }
        z[i] = z[i].sub(&step).mid(prec);
    }
    moved
}

/// Certified disks `|θ − zᵢ| ≤ rᵢ`, one root each, for squarefree `f`
/// (Weierstrass-correction inclusion: radius `n·|f(zᵢ)/(a·∏(zᵢ − zⱼ))|`).
fn certify(f: &IntPolynomial, z: &[CInterval], prec: u32) -> Option<Vec<Interval>> {
    let n = z.len();
    let c = coeffs_at(f, prec);
    let lead = c[n].clone();
    let nn = Rational::from_integer(BigInt::from(n));
    let mut radii = vec![];
    for i in 0..n {
        let mut den = lead.clone();
        for j in (0..n).filter(|&j| j != i) {
            den = den.mul(&z[i].sub(&z[j]));
        }
        let w = horner(&c, &z[i]).div(&den)?;
        radii.push(w.abs().mul_rat(&nn).hi().clone());
    }
    for i in 0..n {
        for j in i + 1..n {
            let gap = z[i].sub(&z[j]).abs();
            if gap.lo() <= &(&radii[i] + &radii[j]) {
                return None;
            }
        }
    }
    Some(
        (0..n)
            .map(|i| {
                let m = z[i].abs();
                let lo = (m.lo() - &radii[i]).max(Rational::zero());
                Interval::new(lo, m.hi() + &radii[i], prec)
            })
            .collect(),
    )
}

/// Certified enclosures of the moduli of all complex roots of a squarefree
/// polynomial, each of width at most `width`.
fn root_moduli(f: &IntPolynomial, width: &Rational) -> Result<Vec<Interval>, BoundsError> {
    let n = f.degree();
    if n == 0 {
        return Ok(vec![]);
    }
    if n == 1 {
        let c = f.coeffs();
        let r = Rational::new(-c[0].clone(), c[1].clone()).abs();
        return Ok(vec![Interval::point(r, BOUND_PREC)]);
    }
    let dp = f.derivative();
    let mut prec = 64u32;
    let mut z: Vec<CInterval> = aberth_f64(f).into_iter().map(|x| CInterval::from_f64(x, prec)).collect();
    while prec <= PREC_CAP {
        let c = coeffs_at(f, prec);
        let dc = coeffs_at(&dp, prec);
        z = z.into_iter().map(|x| x.mid(prec)).collect();
        let tol = 2f64.powi(-(prec.min(1000) as i32) + 8);
        for _ in 0..60 {
            if aberth_step(&c, &dc, &mut z, prec) < tol {
                break;
            }
        }
        if let Some(m) = certify(f, &z, prec) {
            if m.iter().all(|i| &i.width() <= width) {
                return Ok(m);
            }
        }
        prec *= 2;
    }
    Err(BoundsError::Uncertified {
        poly: f.to_string(),
        bits: PREC_CAP,
    })
}

/// `|a₀|·∏ max(1, |θᵢ|)` over all complex roots with multiplicity, enclosed
/// to width at most `width`.
pub fn mahler_measure(p: &IntPolynomial, width: &Rational) -> Result<Interval, BoundsError> {
    if p.is_zero() {
        return Err(crate::exact::ExactError::ZeroPolynomial.into());
    }
    let factors = p.squarefree_decomposition();
    let mut lead = Rational::from_integer(p.leading());
    for (f, k) in &factors {
        lead /= Rational::from_integer(num_traits::pow(f.leading(), *k));
    }
    let total_deg = p.degree().max(1);
    let mut tol = width / Rational::from_integer(BigInt::from(4 * total_deg));
    loop {
        let mut m = Interval::point(lead.abs(), BOUND_PREC);
        for (f, k) in &factors {
            let mut mf = Interval::point(Rational::from_integer(f.leading().abs()), BOUND_PREC);
            for r in root_moduli(f, &tol)? {
                mf = &mf * &r.max_one();
            }
            m = &m * &mf.powi(*k as i64)?;
        }
        if &m.width() <= width || tol.numer().is_zero() {
            return Ok(m);
        }
        if tol < Rational::new(BigInt::one(), BigInt::one() << PREC_CAP) {
            return Err(BoundsError::Uncertified {
                poly: p.to_string(),
                bits: PREC_CAP,
            });
        }
        tol /= Rational::from_integer(BigInt::from(1u64 << 20));
    }
}

/// `y`-polynomial `Q` with `x^m·Q(x + 1/x) = p(x)` for reciprocal `p` of
/// even degree `2m`.
fn trace_polynomial(p: &IntPolynomial) -> IntPolynomial {
    let m = p.degree() / 2;
    let y = IntPolynomial::from_i64(&[0, 1]);
    let mut dickson = vec![IntPolynomial::from_i64(&[2]), y.clone()];
    for k in 2..=m {
        let next = &y * &dickson[k - 1] - dickson[k - 2].clone();
        dickson.push(next);
    }
    let c = p.coeffs();
    let mut q = IntPolynomial::new(vec![c[m].clone()]);
    for k in 1..=m {
        q = q + dickson[k].scale(&c[m + k]);
    }
    q
}

#[derive(Clone, Debug, Serialize)]
pub struct SalemTest {
    pub is_salem: bool,
    pub theta: Option<RealAlgebraic>,
    pub note: Option<String>,
}

/// Exact test: `p` reciprocal of even degree `2m`, and its trace polynomial
/// `Q` has all `m` roots real, exactly one above 2 and none at or below −2.
pub fn is_salem(p: &IntPolynomial) -> Result<SalemTest, BoundsError> {
    if !p.is_monic() {
        return Err(BoundsError::NotMonic(p.to_string()));
    }
    if let Irreducibility::Reducible(_) = p.irreducibility() {
        return Err(BoundsError::Reducible(p.to_string()));
    }
    let no = SalemTest {
        is_salem: false,
        theta: None,
        note: None,
    };
    if p.degree() < 2 || p.degree() % 2 == 1 || !p.is_reciprocal() {
        return Ok(no);
    }
    let q = trace_polynomial(p);
    let mut roots = q.isolate_real_roots()?;
    if roots.len() != q.degree() {
        return Ok(no);
    }
    // Q(±2) = ±p(±1) ≠ 0, so refinement separates every root from ±2
    let two = Rational::from_integer(2.into());
    let straddles = |lo: &Rational, hi: &Rational| {
        (lo < &two && hi > &two) || (lo < &-two.clone() && hi > &-two.clone())
    };
    for r in roots.iter_mut() {
        let mut width = r.1.clone() - &r.0;
        while straddles(&r.0, &r.1) {
            width /= Rational::from_integer(256.into());
            *r = q.refine_root(&r.0, &r.1, &width);
        }
    }
    let above = roots.iter().filter(|(lo, _)| lo >= &two).count();
    let below = roots.iter().filter(|(_, hi)| hi <= &-two.clone()).count();
    if above != 1 || below != 0 {
        return Ok(no);
    }
    let idx = p.isolate_real_roots()?.len() - 1;
    let theta = RealAlgebraic::from_root_index(p, idx)?;
    let note = (p.degree() < 4).then(|| "degree < 4: nonstandard Salem by some conventions".to_string());
    Ok(SalemTest {
        is_salem: true,
        theta: Some(theta),
        note,
    })
}

/// Both readings of the trace identity for `γ` with trace `t`:
/// `2cosh(½·log M(u))` and `2cosh(¼·log M(u))`, `u` the large eigenvalue of `γ²`.
#[derive(Clone, Debug, Serialize)]
pub struct TraceMahler {
    pub trace: String,
    pub trace_of_square: String,
    pub u_square_minpoly: IntPolynomial,
    pub mahler: Quantity,
    pub half_log_form: Quantity,
    pub quarter_log_form: Quantity,
}

pub fn trace_mahler_check(t: &FieldElement) -> Result<TraceMahler, BoundsError> {
    let k = t.field();
    let tsq = &(t * t) - &FieldElement::from_int(k, 2);
    let u = exact_eigenvalue(&tsq)?;
    let m = mahler_measure(u.minpoly(), &Rational::new(BigInt::one(), BigInt::one() << 100))?;
    let l = m.ln()?;
    let form = |frac: i64| {
        let x = l.mul_rat(&Rational::new(BigInt::one(), BigInt::from(frac)));
        Quantity::enclosed(x.cosh().mul_rat(&Rational::from_integer(2.into())))
    };
    Ok(TraceMahler {
        trace: t.to_string(),
        trace_of_square: tsq.to_string(),
        u_square_minpoly: u.minpoly().clone(),
        mahler: Quantity::enclosed(m.clone()),
        half_log_form: form(2),
        quarter_log_form: form(4),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{cyclotomic, NumberField};
    use proptest::prelude::*;

    fn w(bits: u32) -> Rational {
        Rational::new(BigInt::one(), BigInt::one() << bits)
    }

    fn lehmer() -> IntPolynomial {
        IntPolynomial::from_i64(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1])
    }

    #[test]
    fn simple_measures() {
        let m = mahler_measure(&IntPolynomial::from_i64(&[-2, 1]), &w(40)).unwrap();
        assert!(m.contains(&Rational::from_integer(2.into())));
        for n in [5, 12, 30] {
            let m = mahler_measure(&cyclotomic(n), &w(50)).unwrap();
            assert!(m.contains(&Rational::one()));
            assert!(m.width() < w(40));
        }
        // 3x² − 1: 3·1 (roots ±1/√3 inside the circle)
        let m = mahler_measure(&IntPolynomial::from_i64(&[-1, 0, 3]), &w(40)).unwrap();
        assert!(m.contains(&Rational::from_integer(3.into())));
        // repeated factor (x − 2)²
        let m = mahler_measure(&IntPolynomial::from_i64(&[4, -4, 1]), &w(40)).unwrap();
        assert!(m.contains(&Rational::from_integer(4.into())));
    }

    #[test]
    fn lehmer_measure() {
        // oracle: the real root above 1 isolated exactly; other roots on the circle or inside
        let theta = RealAlgebraic::from_root_index(&lehmer(), 1).unwrap();
        let oracle = theta.interval(128);
        let m = mahler_measure(&lehmer(), &w(60)).unwrap();
        assert!(m.overlaps(&oracle));
        assert!((m.to_f64() - 1.176280818259917).abs() < 1e-14);
    }

    #[test]
    fn salem_examples() {
        let t = is_salem(&IntPolynomial::from_i64(&[1, -1, -1, -1, 1])).unwrap();
        assert!(t.is_salem);
        assert!((t.theta.unwrap().to_f64() - 1.722083805739043).abs() < 1e-12);
        let t = is_salem(&IntPolynomial::from_i64(&[1, -3, 1])).unwrap();
        assert!(t.is_salem && t.note.is_some());
        assert!((t.theta.unwrap().to_f64() - 2.618033988749895).abs() < 1e-12);
        assert!(!is_salem(&IntPolynomial::from_i64(&[-1, -1, 1])).unwrap().is_salem);
        assert!(is_salem(&lehmer()).unwrap().is_salem);
        // cyclotomic: reciprocal but no root above 1
        assert!(!is_salem(&cyclotomic(7)).unwrap().is_salem);
        // trace polynomial y² − 7y + 11: both roots above 2
        assert!(!is_salem(&IntPolynomial::from_i64(&[1, -7, 13, -7, 1])).unwrap().is_salem);
        assert!(matches!(is_salem(&IntPolynomial::from_i64(&[-1, 0, 2])), Err(BoundsError::NotMonic(_))));
    }

    #[test]
    fn trace_mahler_for_trace_six() {
        let q = NumberField::rationals();
        let r = trace_mahler_check(&FieldElement::from_int(&q, 6)).unwrap();
        assert_eq!(r.u_square_minpoly, IntPolynomial::from_i64(&[1, -34, 1]));
        assert!((r.mahler.to_f64() - 33.97056274847714).abs() < 1e-12);
        assert!((r.half_log_form.to_f64() - 6.0).abs() < 1e-12);
        assert!((r.quarter_log_form.to_f64() - 2.0f64.sqrt() * 2.0).abs() < 1e-12);
    }

    fn monic() -> impl Strategy<Value = IntPolynomial> {
        prop::collection::vec(-3i64..=3, 1..5).prop_map(|mut c| {
            c.push(1);
            IntPolynomial::from_i64(&c)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn multiplicative(p in monic(), q in monic()) {
            let a = mahler_measure(&p, &w(40)).unwrap();
            let b = mahler_measure(&q, &w(40)).unwrap();
            let ab = mahler_measure(&(&p * &q), &w(40)).unwrap();
            prop_assert!(ab.overlaps(&(&a * &b)));
            prop_assert!(ab.hi() >= &Rational::one());
        }

        #[test]
        fn hyperbolic_trace_polynomial(t in 3i64..60) {
            // M(x² − t·x + 1) = u, the large root
            let p = IntPolynomial::from_i64(&[1, -t, 1]);
            let m = mahler_measure(&p, &w(40)).unwrap();
            let u = RealAlgebraic::from_root_index(&p, 1).unwrap().interval(128);
            prop_assert!(m.overlaps(&u));
        }
    }
}
