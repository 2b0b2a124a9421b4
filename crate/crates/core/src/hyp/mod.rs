//! Determinant-one real 2×2 matrices: norms, isometry classification,
//! translation lengths, and the Möbius action on the upper half-plane.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::exact::{
    charpoly as charpoly_of, clear_denominators, format_rational, format_sig, ExactError, FieldElement, Interval,
    NumberField, Rational, RealAlgebraic,
};
use crate::quat::QuatElement;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HypError {
    #[error("trace enclosure {0} does not separate |tr| from 2; no exact trace available")]
    Undecided(String),
    #[error("translation length needs a hyperbolic element (|tr| > 2), got {0:?}")]
    NotHyperbolic(IsometryKind),
    #[error("point must lie in the upper half-plane (Im z > 0), got Im z = {0}")]
    NotInUpperHalfPlane(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Exact counterpart of a matrix: rational entries, or the quaternion whose
/// image under ρ it is.
#[derive(Clone, Debug, PartialEq)]
pub enum ExactShadow {
    Rational([Rational; 4]),
    Quat(QuatElement),
}

/// `[[e11, e12], [e21, e22]]` with interval entries and an optional exact
/// shadow.
#[derive(Clone, Debug)]
pub struct Mat2 {
    e: [Interval; 4],
    exact: Option<ExactShadow>,
}

impl Mat2 {
    pub fn from_parts(e: [Interval; 4], exact: Option<ExactShadow>) -> Self {
        Mat2 { e, exact }
    }

    pub fn from_rationals(e: [Rational; 4], prec: u32) -> Self {
        Mat2 {
            e: e.clone().map(|x| Interval::point(x, prec)),
            exact: Some(ExactShadow::Rational(e)),
        }
    }

    pub fn from_ints(e: [i64; 4], prec: u32) -> Self {
        Self::from_rationals(e.map(|n| Rational::from_integer(n.into())), prec)
    }

    pub fn from_intervals(e: [Interval; 4]) -> Self {
        Mat2 { e, exact: None }
    }

    pub fn identity(prec: u32) -> Self {
        Self::from_ints([1, 0, 0, 1], prec)
    }

    pub fn entries(&self) -> &[Interval; 4] {
        &self.e
    }

    pub fn exact(&self) -> Option<&ExactShadow> {
        self.exact.as_ref()
    }

    pub fn prec(&self) -> u32 {
        self.e.iter().map(Interval::prec).max().unwrap_or(64)
    }

    pub fn trace(&self) -> Interval {
        &self.e[0] + &self.e[3]
    }

    pub fn det(&self) -> Interval {
        &(&self.e[0] * &self.e[3]) - &(&self.e[1] * &self.e[2])
    }

    /// Exact trace as an element of the base field (ℚ for rational shadows).
    pub fn exact_trace(&self) -> Option<FieldElement> {
        match self.exact.as_ref()? {
            ExactShadow::Rational(r) => Some(FieldElement::from_rational(
                &NumberField::rationals(),
                &r[0] + &r[3],
            )),
            ExactShadow::Quat(q) => Some(q.trd()),
        }
    }

    /// Product of the interval entries only.
    pub fn mul_intervals(&self, o: &Mat2) -> [Interval; 4] {
        let (a, b) = (&self.e, &o.e);
        [
            &(&a[0] * &b[0]) + &(&a[1] * &b[2]),
            &(&a[0] * &b[1]) + &(&a[1] * &b[3]),
            &(&a[2] * &b[0]) + &(&a[3] * &b[2]),
            &(&a[2] * &b[1]) + &(&a[3] * &b[3]),
        ]
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let exact = match (&self.exact, &o.exact) {
            (Some(ExactShadow::Rational(a)), Some(ExactShadow::Rational(b))) => Some(ExactShadow::Rational([
                &a[0] * &b[0] + &a[1] * &b[2],
                &a[0] * &b[1] + &a[1] * &b[3],
                &a[2] * &b[0] + &a[3] * &b[2],
                &a[2] * &b[1] + &a[3] * &b[3],
            ])),
            (Some(ExactShadow::Quat(x)), Some(ExactShadow::Quat(y))) => x.mul(y).ok().map(ExactShadow::Quat),
            _ => None,
        };
        Mat2 {
            e: self.mul_intervals(o),
            exact,
        }
    }

    /// `[[e22, −e12], [−e21, e11]]`, the inverse when det = 1.
    pub fn adjugate(&self) -> Mat2 {
        let e = &self.e;
        let exact = self.exact.as_ref().map(|s| match s {
            ExactShadow::Rational(r) => ExactShadow::Rational([r[3].clone(), -&r[1], -&r[2], r[0].clone()]),
            ExactShadow::Quat(q) => ExactShadow::Quat(q.conj()),
        });
        Mat2 {
            e: [e[3].clone(), -&e[1], -&e[2], e[0].clone()],
            exact,
        }
    }

    pub fn neg(&self) -> Mat2 {
        let exact = self.exact.as_ref().map(|s| match s {
            ExactShadow::Rational(r) => ExactShadow::Rational(r.clone().map(|x| -x)),
            ExactShadow::Quat(q) => ExactShadow::Quat(q.neg()),
        });
        Mat2 {
            e: self.e.clone().map(|x| -x),
            exact,
        }
    }

    fn exact_scalar(&self) -> Option<Rational> {
        match self.exact.as_ref()? {
            ExactShadow::Rational(r) => {
                (r[1].is_zero() && r[2].is_zero() && r[0] == r[3]).then(|| r[0].clone())
            }
            ExactShadow::Quat(q) => q.as_scalar().and_then(|s| s.as_rational().cloned()),
        }
    }

    pub fn is_identity_exact(&self) -> bool {
        self.exact_scalar().is_some_and(|s| s.is_one())
    }

    pub fn is_minus_identity_exact(&self) -> bool {
        self.exact_scalar().is_some_and(|s| (-s).is_one())
    }

    /// `max |eᵢⱼ|`.
    pub fn sup_norm(&self) -> Interval {
        let a = self.e.clone().map(|x| x.abs());
        a[0].max(&a[1]).max(&a[2]).max(&a[3])
    }

    /// `‖m‖_F² / 2 = cosh d(m·i, i)` for det-1 matrices.
    pub fn frobenius_half(&self) -> Interval {
        let s = self.e.iter().fold(Interval::from_int(0, self.prec()), |acc, x| &acc + &x.sqr());
        s.mul_rat(&Rational::new(1.into(), 2.into()))
    }
}

impl PartialEq for Mat2 {
    fn eq(&self, other: &Self) -> bool {
        match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => a == b,
            _ => self.e == other.e,
        }
    }
}

#[derive(Serialize)]
struct EntryRepr {
    mid: String,
    rad: String,
}

impl Serialize for Mat2 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let entry = |x: &Interval| EntryRepr {
            mid: format_sig(&x.mid(), 17),
            rad: format_sig(&x.radius(), 3),
        };
        let rows = [[entry(&self.e[0]), entry(&self.e[1])], [entry(&self.e[2]), entry(&self.e[3])]];
        let mut st = s.serialize_struct("Mat2", 2)?;
        st.serialize_field("entries", &rows)?;
        match &self.exact {
            Some(ExactShadow::Rational(r)) => {
                let f = |i: usize| format_rational(&r[i]);
                st.serialize_field("exact", &serde_json::json!({"rational": [[f(0), f(1)], [f(2), f(3)]]}))?;
            }
            Some(ExactShadow::Quat(q)) => {
                st.serialize_field("exact", &serde_json::json!({ "quaternion": q }))?;
            }
            None => st.serialize_field("exact", &Option::<()>::None)?,
        }
        st.end()
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = |x: &Interval| x.decimal(10);
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            d(&self.e[0]),
            d(&self.e[1]),
            d(&self.e[2]),
            d(&self.e[3])
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IsometryKind {
    Central,
    Elliptic,
    Parabolic,
    Hyperbolic,
}

impl fmt::Display for IsometryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            IsometryKind::Central => "central",
            IsometryKind::Elliptic => "elliptic",
            IsometryKind::Parabolic => "parabolic",
            IsometryKind::Hyperbolic => "hyperbolic",
        };
        write!(f, "{s}")
    }
}

/// Order of an element in SL₂.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElementOrder {
    Finite(u64),
    Infinite,
    /// Elliptic, but no finite order within the search bound.
    NotFound,
}

impl Serialize for ElementOrder {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ElementOrder::Finite(n) => s.serialize_u64(*n),
            ElementOrder::Infinite => s.serialize_str("infinity"),
            ElementOrder::NotFound => s.serialize_str("not_found"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IsometryClass {
    pub kind: IsometryKind,
    /// Eigenvalue outside the unit circle (hyperbolic, exact trace).
    pub u: Option<RealAlgebraic>,
    /// Enclosure of that eigenvalue (hyperbolic).
    #[serde(skip)]
    pub u_enclosure: Option<Interval>,
    pub order: Option<ElementOrder>,
    /// Parabolic elements contradict cocompactness.
    pub note: Option<String>,
}

fn u_enclosure(t: &Interval) -> Result<Interval, ExactError> {
    // (|t| + √(t² − 4)) / 2 with the sign of t
    let four = Interval::from_int(4, t.prec());
    let disc = &t.sqr() - &four;
    let disc = Interval::exact(disc.lo().clone().max(Rational::zero()), disc.hi().clone().max(Rational::zero()), t.prec());
    let r = disc.sqrt()?;
    let u = (&t.abs() + &r).mul_rat(&Rational::new(1.into(), 2.into()));
    Ok(if t.certainly_negative() { -u } else { u })
}

/// Exact eigenvalue `u` (|u| > 1) of `x² − t·x + 1` for `t` in the base field.
pub fn exact_eigenvalue(t: &FieldElement) -> Result<RealAlgebraic, ExactError> {
    let d = t.field().degree();
    // ℚ-linear action of u on k², companion blocks [[0, −I], [I, M_t]]
    let mt = t.mult_matrix();
    let mut m = vec![vec![Rational::zero(); 2 * d]; 2 * d];
    for i in 0..d {
        m[i][d + i] = -Rational::one();
        m[d + i][i] = Rational::one();
        for j in 0..d {
            m[d + i][d + j] = mt[i][j].clone();
        }
    }
    let p = clear_denominators(&charpoly_of(&m));
    let mut prec = 16;
    loop {
        let te = t.embed_prec(prec);
        let enc = u_enclosure(&te)?;
        match RealAlgebraic::from_poly_in(&p, &enc) {
            Ok(u) => return Ok(u),
            Err(ExactError::AmbiguousEnclosure(_)) if prec < 1 << 14 => prec *= 2,
            Err(e) => return Err(e),
        }
    }
}

/// Search bound for finite orders: `2·(4d)²`.
pub fn order_search_bound(degree: usize) -> u64 {
    2 * (4 * degree as u64).pow(2)
}

pub fn classify(m: &Mat2) -> Result<IsometryClass, HypError> {
    if let Some(t) = m.exact_trace() {
        return classify_exact(m, &t);
    }
    let t = m.trace();
    let two = Interval::from_int(2, t.prec());
    let at = t.abs();
    if at.certainly_gt(&two) {
        return Ok(IsometryClass {
            kind: IsometryKind::Hyperbolic,
            u: None,
            u_enclosure: Some(u_enclosure(&t)?),
            order: Some(ElementOrder::Infinite),
            note: None,
        });
    }
    if at.certainly_lt(&two) {
        return Ok(IsometryClass {
            kind: IsometryKind::Elliptic,
            u: None,
            u_enclosure: None,
            order: Some(ElementOrder::NotFound),
            note: None,
        });
    }
    Err(HypError::Undecided(t.to_string()))
}

fn classify_exact(m: &Mat2, t: &FieldElement) -> Result<IsometryClass, HypError> {
    let k = t.field();
    let two = FieldElement::from_int(k, 2);
    let s_minus = (t - &two).sign();
    let s_plus = (t + &two).sign();
    if m.is_identity_exact() || m.is_minus_identity_exact() {
        let n = if m.is_identity_exact() { 1 } else { 2 };
        return Ok(IsometryClass {
            kind: IsometryKind::Central,
            u: None,
            u_enclosure: None,
            order: Some(ElementOrder::Finite(n)),
            note: None,
        });
    }
    if s_minus > 0 || s_plus < 0 {
        let u = exact_eigenvalue(t)?;
        let enc = u.interval(m.prec());
        return Ok(IsometryClass {
            kind: IsometryKind::Hyperbolic,
            u: Some(u),
            u_enclosure: Some(enc),
            order: Some(ElementOrder::Infinite),
            note: None,
        });
    }
    if s_minus == 0 || s_plus == 0 {
        return Ok(IsometryClass {
            kind: IsometryKind::Parabolic,
            u: None,
            u_enclosure: None,
            order: Some(ElementOrder::Infinite),
            note: Some("parabolic element contradicts cocompactness".into()),
        });
    }
    let bound = order_search_bound(k.degree());
    let mut p = m.clone();
    let mut order = ElementOrder::NotFound;
    for n in 1..=bound {
        if p.is_identity_exact() {
            order = ElementOrder::Finite(n);
            break;
        }
        p = p.mul(m);
    }
    Ok(IsometryClass {
        kind: IsometryKind::Elliptic,
        u: None,
        u_enclosure: None,
        order: Some(order),
        note: None,
    })
}

/// `2·log|u|`.
pub fn translation_length(m: &Mat2) -> Result<Interval, HypError> {
    let c = classify(m)?;
    if c.kind != IsometryKind::Hyperbolic {
        return Err(HypError::NotHyperbolic(c.kind));
    }
    let prec = m.prec();
    let u = match &c.u {
        Some(u) => u.interval(prec + 16),
        None => c.u_enclosure.unwrap(),
    };
    Ok(u.abs().ln()?.mul_rat(&Rational::from_integer(2.into())).round_to(prec))
}

/// Point of the upper half-plane.
#[derive(Clone, Debug)]
pub struct Point {
    pub re: Interval,
    pub im: Interval,
}

impl Point {
    pub fn new(re: Interval, im: Interval) -> Result<Self, HypError> {
        if !im.certainly_positive() {
            return Err(HypError::NotInUpperHalfPlane(im.to_string()));
        }
        Ok(Point { re, im })
    }

    pub fn from_rationals(re: Rational, im: Rational, prec: u32) -> Result<Self, HypError> {
        Self::new(Interval::point(re, prec), Interval::point(im, prec))
    }

    /// The base point `i`.
    pub fn i(prec: u32) -> Self {
        Point {
            re: Interval::from_int(0, prec),
            im: Interval::from_int(1, prec),
        }
    }
}

/// `(e11·z + e12) / (e21·z + e22)`.
pub fn mobius_act(m: &Mat2, z: &Point) -> Result<Point, HypError> {
    let [a, b, c, d] = &m.e;
    let (x, y) = (&z.re, &z.im);
    let dr = &(c * x) + d;
    let di = c * y;
    let den = &dr.sqr() + &di.sqr();
    let nr = &(a * x) + b;
    let re = (&(&nr * &dr) + &(&(a * c) * &y.sqr())).div(&den)?;
    let im = (y * &m.det()).div(&den)?;
    Point::new(re, im)
}

/// `arccosh(1 + |z − w|² / (2·Im z·Im w))`.
pub fn hyp_dist(z: &Point, w: &Point) -> Result<Interval, HypError> {
    let num = &(&z.re - &w.re).sqr() + &(&z.im - &w.im).sqr();
    let den = (&z.im * &w.im).mul_rat(&Rational::from_integer(2.into()));
    let arg = &Interval::from_int(1, num.prec()) + &num.div(&den)?;
    // the argument is ≥ 1 mathematically
    let arg = Interval::exact(arg.lo().clone().max(Rational::one()), arg.hi().clone(), arg.prec());
    Ok(arg.arccosh()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::IntPolynomial;
    use crate::quat::{embed_matrix, QuatAlgebra};
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn norms() {
        assert!(Mat2::identity(64).sup_norm().contains(&q(1, 1)));
        assert!(Mat2::from_ints([2, 1, 3, 2], 64).sup_norm().is_point());
        assert_eq!(Mat2::from_ints([2, 1, 3, 2], 64).sup_norm().mid(), q(3, 1));
        let alg = QuatAlgebra::over_q(q(2, 1), q(3, 1)).unwrap();
        let m = embed_matrix(&QuatElement::from_ints(&alg, [3, 2, 0, 0]), 96).unwrap();
        assert!((m.sup_norm().to_f64() - 5.82842712474619).abs() < 1e-14);
    }

    #[test]
    fn classification_examples() {
        let c = classify(&Mat2::from_ints([0, -1, 1, 0], 64)).unwrap();
        assert_eq!(c.kind, IsometryKind::Elliptic);
        assert_eq!(c.order, Some(ElementOrder::Finite(4)));
        let c = classify(&Mat2::from_ints([1, -1, 1, 0], 64)).unwrap();
        assert_eq!(c.kind, IsometryKind::Elliptic);
        assert_eq!(c.order, Some(ElementOrder::Finite(6)));
        let c = classify(&Mat2::from_ints([5, 2, 2, 1], 64)).unwrap();
        assert_eq!(c.kind, IsometryKind::Hyperbolic);
        let u = c.u.unwrap();
        assert_eq!(u.minpoly(), &IntPolynomial::from_i64(&[1, -6, 1]));
        assert!((u.to_f64() - 5.82842712474619).abs() < 1e-14);
        let c = classify(&Mat2::from_ints([1, 1, 0, 1], 64)).unwrap();
        assert_eq!(c.kind, IsometryKind::Parabolic);
        assert!(c.note.is_some());
        let c = classify(&Mat2::from_ints([-1, 0, 0, -1], 64)).unwrap();
        assert_eq!(c.kind, IsometryKind::Central);
        assert_eq!(c.order, Some(ElementOrder::Finite(2)));
    }

    #[test]
    fn undecided_without_exact_trace() {
        let near = Interval::exact(q(99, 100), q(101, 100), 64);
        let m = Mat2::from_intervals([near.clone(), Interval::from_int(0, 64), Interval::from_int(0, 64), near]);
        assert!(matches!(classify(&m), Err(HypError::Undecided(_))));
    }

    #[test]
    fn translation_lengths() {
        let e = Interval::point(q(1, 2), 128).exp();
        let einv = Interval::point(q(-1, 2), 128).exp();
        let z = Interval::from_int(0, 128);
        let m = Mat2::from_intervals([e, z.clone(), z, einv]);
        let l = translation_length(&m).unwrap();
        assert!((l.to_f64() - 1.0).abs() < 1e-15);
        let l = translation_length(&Mat2::from_ints([5, 2, 2, 1], 128)).unwrap();
        assert!((l.to_f64() - 3.525494348078172).abs() < 1e-14);
        assert!(matches!(
            translation_length(&Mat2::from_ints([0, -1, 1, 0], 64)),
            Err(HypError::NotHyperbolic(IsometryKind::Elliptic))
        ));
    }

    #[test]
    fn mobius_examples() {
        let i = Point::i(64);
        let p = mobius_act(&Mat2::from_ints([1, 1, 0, 1], 64), &i).unwrap();
        assert!(p.re.contains(&q(1, 1)) && p.im.contains(&q(1, 1)));
        let z = Point::from_rationals(q(1, 3), q(2, 5), 64).unwrap();
        let p = mobius_act(&Mat2::identity(64), &z).unwrap();
        assert!(p.re.contains(&q(1, 3)) && p.im.contains(&q(2, 5)));
        let p = mobius_act(&Mat2::from_ints([0, 1, -1, 0], 64), &Point::from_rationals(q(0, 1), q(2, 1), 64).unwrap()).unwrap();
        assert!(p.re.contains(&q(0, 1)) && p.im.contains(&q(1, 2)));
        assert!(Point::from_rationals(q(0, 1), q(-1, 1), 64).is_err());
    }

    #[test]
    fn distances() {
        let i = Point::i(128);
        assert!(hyp_dist(&i, &i).unwrap().contains(&Rational::zero()));
        let two_i = Point::from_rationals(q(0, 1), q(2, 1), 128).unwrap();
        assert!((hyp_dist(&i, &two_i).unwrap().to_f64() - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn exact_eigenvalue_over_quadratic_field() {
        // t = 2 + √2 > 2 at the larger root
        let k = NumberField::new(IntPolynomial::from_i64(&[-2, 0, 1]), 1).unwrap();
        let t = FieldElement::new(&k, vec![q(2, 1), q(1, 1)]).unwrap();
        let u = exact_eigenvalue(&t).unwrap();
        let tf = 2.0 + std::f64::consts::SQRT_2;
        let want = (tf + (tf * tf - 4.0).sqrt()) / 2.0;
        assert!((u.to_f64() - want).abs() < 1e-12);
        assert_eq!(u.degree(), 4);
    }

    fn sl2() -> impl Strategy<Value = [i64; 4]> {
        // products of elementary matrices stay in SL₂(ℤ)
        prop::collection::vec((-3i64..=3, any::<bool>()), 1..5).prop_map(|steps| {
            let mut m = [1i64, 0, 0, 1];
            for (k, upper) in steps {
                let e = if upper { [1, k, 0, 1] } else { [1, 0, k, 1] };
                m = [
                    m[0] * e[0] + m[1] * e[2],
                    m[0] * e[1] + m[1] * e[3],
                    m[2] * e[0] + m[3] * e[2],
                    m[2] * e[1] + m[3] * e[3],
                ];
            }
            m
        })
    }

    fn point() -> impl Strategy<Value = Point> {
        (-20i64..20, 1i64..20).prop_map(|(x, y)| Point::from_rationals(q(x, 7), q(y, 5), 128).unwrap())
    }

    proptest! {
        #[test]
        fn eigenvalue_identities(t in 3i64..40) {
            let m = Mat2::from_ints([t, -1, 1, 0], 128);
            let c = classify(&m).unwrap();
            let u = c.u.unwrap();
            let ui = u.interval(128);
            let s = &ui + &ui.recip().unwrap();
            prop_assert!(s.contains(&q(t, 1)));
            let c2 = classify(&m.mul(&m)).unwrap();
            prop_assert_eq!(c2.u.unwrap(), u.square().unwrap());
        }

        #[test]
        fn classification_is_conjugation_invariant(m in sl2(), g in sl2()) {
            let m = Mat2::from_ints(m, 64);
            let g = Mat2::from_ints(g, 64);
            let conj = g.mul(&m).mul(&g.adjugate());
            prop_assert_eq!(classify(&conj).unwrap().kind, classify(&m).unwrap().kind);
        }

        #[test]
        fn inverse_has_same_norm(m in sl2()) {
            let m = Mat2::from_ints(m, 64);
            prop_assert_eq!(m.adjugate().sup_norm(), m.sup_norm());
        }

        #[test]
        fn action_and_isometry(g in sl2(), h in sl2(), z in point(), w in point()) {
            let g = Mat2::from_ints(g, 128);
            let h = Mat2::from_ints(h, 128);
            let lhs = mobius_act(&g.mul(&h), &z).unwrap();
            let rhs = mobius_act(&g, &mobius_act(&h, &z).unwrap()).unwrap();
            prop_assert!(lhs.re.overlaps(&rhs.re) && lhs.im.overlaps(&rhs.im));
            let d0 = hyp_dist(&z, &w).unwrap();
            let d1 = hyp_dist(&mobius_act(&g, &z).unwrap(), &mobius_act(&g, &w).unwrap()).unwrap();
            prop_assert!(d0.overlaps(&d1));
        }
    }
}
