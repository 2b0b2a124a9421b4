use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::interval::Interval;
use super::poly::{IntPolynomial, Irreducibility};
use super::rational::{format_rational, int, Rational};
use super::real_algebraic::RealAlgebraic;
use super::ExactError;

/// Totally real number field `ℚ[x]/(p)` with a distinguished real place,
/// indexed among the roots of `p` in ascending order.
#[derive(Debug)]
pub struct NumberField {
    minpoly: IntPolynomial,
    place_index: usize,
    roots: Vec<RealAlgebraic>,
    trusted: bool,
    // θ^d, …, θ^(2d−2) in the power basis
    reduction: Vec<Vec<Rational>>,
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.minpoly == other.minpoly && self.place_index == other.place_index
    }
}

impl Eq for NumberField {}

impl NumberField {
    /// Requires irreducibility to be proven (degree ≤ 4).
    pub fn new(minpoly: IntPolynomial, place_index: usize) -> Result<Arc<Self>, ExactError> {
        Self::build(minpoly, place_index, false)
    }

    /// Accepts a polynomial whose irreducibility cannot be certified here;
    /// the field records that it is trusted. Detected reducibility is still
    /// an error.
    pub fn new_trusted(minpoly: IntPolynomial, place_index: usize) -> Result<Arc<Self>, ExactError> {
        Self::build(minpoly, place_index, true)
    }

    pub fn rationals() -> Arc<Self> {
        Self::build(IntPolynomial::from_i64(&[0, 1]), 0, false).expect("ℚ")
    }

    fn build(minpoly: IntPolynomial, place_index: usize, allow_trust: bool) -> Result<Arc<Self>, ExactError> {
        if minpoly.is_zero() {
            return Err(ExactError::ZeroPolynomial);
        }
        let p = minpoly.primitive_part();
        let d = p.degree();
        if d == 0 {
            return Err(ExactError::Reducible(p.to_string()));
        }
        let trusted = match p.irreducibility() {
            Irreducibility::Proven => false,
            Irreducibility::Reducible(_) => return Err(ExactError::Reducible(p.to_string())),
            Irreducibility::Unknown if allow_trust => true,
            Irreducibility::Unknown => return Err(ExactError::UncertifiedIrreducible(d)),
        };
        if p.real_root_count()? != d {
            return Err(ExactError::NotTotallyReal(p.to_string()));
        }
        if place_index >= d {
            return Err(ExactError::PlaceIndex { index: place_index, degree: d });
        }
        let roots = (0..d)
            .map(|i| RealAlgebraic::from_irreducible_root(&p, i))
            .collect::<Result<Vec<_>, _>>()?;
        let lead = Rational::from_integer(p.leading());
        // θ^d = −(c₀ + … + c_{d−1}θ^{d−1}) / c_d
        let mut reduction = vec![];
        let mut cur: Vec<Rational> = p.coeffs()[..d]
            .iter()
            .map(|c| -Rational::from_integer(c.clone()) / &lead)
            .collect();
        for _ in 0..d.saturating_sub(1) {
            reduction.push(cur.clone());
            // multiply by θ
            let top = cur[d - 1].clone();
            let mut next = vec![Rational::zero(); d];
            for i in (1..d).rev() {
                next[i] = cur[i - 1].clone();
            }
            for i in 0..d {
                next[i] += &top * &reduction[0][i];
            }
            cur = next;
        }
        Ok(Arc::new(NumberField {
            minpoly: p,
            place_index,
            roots,
            trusted,
            reduction,
        }))
    }

    pub fn minpoly(&self) -> &IntPolynomial {
        &self.minpoly
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree()
    }

    pub fn place_index(&self) -> usize {
        self.place_index
    }

    pub fn is_trusted(&self) -> bool {
        self.trusted
    }

    pub fn is_rationals(&self) -> bool {
        self.degree() == 1
    }

    /// Image of the generator at real place `i`.
    pub fn root(&self, i: usize) -> &RealAlgebraic {
        &self.roots[i]
    }

    pub fn distinguished_root(&self) -> &RealAlgebraic {
        &self.roots[self.place_index]
    }
}

impl Serialize for NumberField {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("NumberField", 3)?;
        st.serialize_field("minpoly", &self.minpoly)?;
        st.serialize_field("place_index", &self.place_index)?;
        st.serialize_field("trusted", &self.trusted)?;
        st.end()
    }
}

/// Element of a number field in the power basis `1, θ, …, θ^(d−1)`.
#[derive(Clone, Debug)]
pub struct FieldElement {
    field: Arc<NumberField>,
    coords: Vec<Rational>,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords && *self.field == *other.field
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

impl FieldElement {
    pub fn new(field: &Arc<NumberField>, coords: Vec<Rational>) -> Result<Self, ExactError> {
        if coords.len() != field.degree() {
            return Err(ExactError::CoordinateCount {
                expected: field.degree(),
                got: coords.len(),
            });
        }
        Ok(FieldElement {
            field: field.clone(),
            coords,
        })
    }

    pub fn from_rational(field: &Arc<NumberField>, r: Rational) -> Self {
        let mut coords = vec![Rational::zero(); field.degree()];
        coords[0] = r;
        FieldElement {
            field: field.clone(),
            coords,
        }
    }

    pub fn from_int(field: &Arc<NumberField>, n: i64) -> Self {
        Self::from_rational(field, int(n))
    }

    pub fn zero(field: &Arc<NumberField>) -> Self {
        Self::from_int(field, 0)
    }

    pub fn one(field: &Arc<NumberField>) -> Self {
        Self::from_int(field, 1)
    }

    /// The generator θ (equal to the rational 0 when the field is ℚ via `x`).
    pub fn generator(field: &Arc<NumberField>) -> Self {
        if field.degree() == 1 {
            let c = field.minpoly.coeffs();
            return Self::from_rational(field, Rational::new(-c[0].clone(), c[1].clone()));
        }
        let mut coords = vec![Rational::zero(); field.degree()];
        coords[1] = Rational::one();
        FieldElement {
            field: field.clone(),
            coords,
        }
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|r| r.is_one())
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.coords[1..].iter().all(|c| c.is_zero()).then(|| &self.coords[0])
    }

    fn same_field(&self, other: &FieldElement) -> Result<(), ExactError> {
        if Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field {
            Ok(())
        } else {
            Err(ExactError::FieldMismatch)
        }
    }

    pub fn checked_add(&self, o: &FieldElement) -> Result<FieldElement, ExactError> {
        self.same_field(o)?;
        Ok(FieldElement {
            field: self.field.clone(),
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn checked_sub(&self, o: &FieldElement) -> Result<FieldElement, ExactError> {
        self.same_field(o)?;
        Ok(FieldElement {
            field: self.field.clone(),
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn checked_mul(&self, o: &FieldElement) -> Result<FieldElement, ExactError> {
        self.same_field(o)?;
        let d = self.field.degree();
        let mut prod = vec![Rational::zero(); 2 * d - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coords.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let mut coords: Vec<Rational> = prod[..d].to_vec();
        for (k, c) in prod[d..].iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, r) in self.field.reduction[k].iter().enumerate() {
                coords[i] += c * r;
            }
        }
        Ok(FieldElement {
            field: self.field.clone(),
            coords,
        })
    }

    pub fn scale(&self, r: &Rational) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            coords: self.coords.iter().map(|c| c * r).collect(),
        }
    }

    pub fn inv(&self) -> Result<FieldElement, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        let d = self.field.degree();
        let m = self.mult_matrix();
        let mut e = vec![Rational::zero(); d];
        e[0] = Rational::one();
        let coords = solve(&m, &e).ok_or(ExactError::DivisionByZero)?;
        Ok(FieldElement {
            field: self.field.clone(),
            coords,
        })
    }

    pub fn checked_div(&self, o: &FieldElement) -> Result<FieldElement, ExactError> {
        self.same_field(o)?;
        self.checked_mul(&o.inv()?)
    }

    pub fn pow(&self, e: u32) -> FieldElement {
        let mut acc = FieldElement::one(&self.field);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Matrix of multiplication by `self` on the power basis; column `j`
    /// holds the coordinates of `self · θ^j`.
    pub fn mult_matrix(&self) -> Vec<Vec<Rational>> {
        let d = self.field.degree();
        let theta = if d == 1 {
            FieldElement::one(&self.field)
        } else {
            FieldElement::generator(&self.field)
        };
        let mut cols = vec![];
        let mut cur = self.clone();
        for _ in 0..d {
            cols.push(cur.coords.clone());
            cur = &cur * &theta;
        }
        (0..d).map(|i| (0..d).map(|j| cols[j][i].clone()).collect()).collect()
    }

    /// Characteristic polynomial of multiplication by `self`, monic, constant
    /// term first.
    pub fn charpoly(&self) -> Vec<Rational> {
        charpoly(&self.mult_matrix())
    }

    /// Minimal polynomial over ℚ, primitive with positive leading coefficient.
    pub fn minpoly(&self) -> IntPolynomial {
        clear_denominators(&self.charpoly()).squarefree_part()
    }

    pub fn trace(&self) -> Rational {
        let m = self.mult_matrix();
        (0..m.len()).map(|i| m[i][i].clone()).sum()
    }

    pub fn norm(&self) -> Rational {
        let cp = self.charpoly();
        if cp.len().is_multiple_of(2) {
            -cp[0].clone()
        } else {
            cp[0].clone()
        }
    }

    /// Algebraic integer test: the characteristic polynomial has integer
    /// coefficients.
    pub fn is_integral(&self) -> bool {
        self.charpoly().iter().all(|c| c.is_integer())
    }

    /// Enclosure of the image at real place `place`, width ≤ `width`.
    pub fn embed_at(&self, place: usize, width: &Rational) -> Interval {
        if let Some(r) = self.as_rational() {
            return Interval::point(r.clone(), 64);
        }
        let root = self.field.root(place);
        let mut w = width / int(16);
        let mut prec = 64u32.max((-(super::interval::rational_to_f64(width).log2())) as u32 + 32);
        loop {
            let t = root.enclosure(&w, prec);
            let v = self.eval_interval(&t);
            if &v.width() <= width {
                return v;
            }
            w /= int(256);
            prec += 16;
        }
    }

    /// Enclosure under the distinguished embedding.
    pub fn embed(&self, width: &Rational) -> Interval {
        self.embed_at(self.field.place_index, width)
    }

    /// Enclosure under the distinguished embedding at working precision
    /// `prec` (width about `2^-prec` relative).
    pub fn embed_prec(&self, prec: u32) -> Interval {
        if let Some(r) = self.as_rational() {
            return Interval::point(r.clone(), prec);
        }
        let root = self.field.distinguished_root();
        let t = root.interval(prec + 16);
        self.eval_interval(&t).round_to(prec)
    }

    fn eval_interval(&self, t: &Interval) -> Interval {
        let prec = t.prec();
        let mut acc = Interval::from_int(0, prec);
        for c in self.coords.iter().rev() {
            acc = &(&acc * t) + &Interval::point(c.clone(), prec);
        }
        acc
    }

    /// Exact sign under real place `place`.
    pub fn sign_at(&self, place: usize) -> i8 {
        if self.is_zero() {
            return 0;
        }
        if let Some(r) = self.as_rational() {
            return if r.is_positive() { 1 } else { -1 };
        }
        let mut w = Rational::new(BigInt::one(), BigInt::from(1u64 << 20));
        loop {
            let v = self.embed_at(place, &w);
            if let Some(s) = v.sign() {
                if s != 0 {
                    return s;
                }
            }
            w = &w * &w;
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign_at(self.field.place_index)
    }

    /// Exact real algebraic value under place `place`.
    pub fn real_value_at(&self, place: usize) -> RealAlgebraic {
        if let Some(r) = self.as_rational() {
            return RealAlgebraic::from_rational(r.clone());
        }
        let p = self.minpoly();
        let mut w = Rational::new(BigInt::one(), BigInt::from(1u64 << 16));
        loop {
            let e = self.embed_at(place, &w);
            if let Ok(v) = RealAlgebraic::from_poly_in(&p, &e) {
                return v;
            }
            w = &w * &w;
        }
    }

    pub fn real_value(&self) -> RealAlgebraic {
        self.real_value_at(self.field.place_index)
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, o: &FieldElement) -> FieldElement {
        self.checked_add(o).expect("field mismatch")
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, o: &FieldElement) -> FieldElement {
        self.checked_sub(o).expect("field mismatch")
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, o: &FieldElement) -> FieldElement {
        self.checked_mul(o).expect("field mismatch")
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = vec![];
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cs = format_rational(c);
            parts.push(match i {
                0 => cs,
                1 => format!("{cs}*t"),
                _ => format!("{cs}*t^{i}"),
            });
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<String> = self.coords.iter().map(format_rational).collect();
        if v.len() == 1 {
            v[0].serialize(s)
        } else {
            v.serialize(s)
        }
    }
}

/// Faddeev–LeVerrier characteristic polynomial of a square rational matrix,
/// monic, constant term first.
pub fn charpoly(a: &[Vec<Rational>]) -> Vec<Rational> {
    let n = a.len();
    let mut c = vec![Rational::zero(); n + 1];
    c[n] = Rational::one();
    let mut m = vec![vec![Rational::zero(); n]; n];
    for k in 1..=n {
        // M_k = A·M_{k−1} + c_{n−k+1}·I
        let mut next = mat_mul(a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &c[n - k + 1];
        }
        m = next;
        let am = mat_mul(a, &m);
        let tr: Rational = (0..n).map(|i| am[i][i].clone()).sum();
        c[n - k] = -tr / int(k as i64);
    }
    c
}

pub(crate) fn mat_mul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = a.len();
    let p = b.first().map_or(0, |r| r.len());
    let mut out = vec![vec![Rational::zero(); p]; n];
    for i in 0..n {
        for (k, bk) in b.iter().enumerate() {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..p {
                out[i][j] += &a[i][k] * &bk[j];
            }
        }
    }
    out
}

/// Solves `m·x = rhs` by Gaussian elimination; `None` if singular.
pub fn solve(m: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .zip(rhs)
        .map(|(row, r)| {
            let mut row = row.clone();
            row.push(r.clone());
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = a[col][col].recip();
        for v in a[col].iter_mut() {
            *v *= &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..=n {
                    let t = &f * &a[col][c];
                    a[r][c] -= t;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n].clone()).collect())
}

/// Inverse of a square rational matrix; `None` if singular.
pub fn invert(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let cols = (0..n)
        .map(|j| {
            let e: Vec<Rational> = (0..n).map(|i| if i == j { Rational::one() } else { Rational::zero() }).collect();
            solve(m, &e)
        })
        .collect::<Option<Vec<_>>>()?;
    Some((0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect())
}

/// Integer polynomial proportional to a rational one.
pub fn clear_denominators(p: &[Rational]) -> IntPolynomial {
    let l = p.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let lq = Rational::from_integer(l);
    IntPolynomial::new(p.iter().map(|c| (c * &lq).to_integer()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;
    use proptest::prelude::*;

    fn q_sqrt2() -> Arc<NumberField> {
        NumberField::new(IntPolynomial::from_i64(&[-2, 0, 1]), 1).unwrap()
    }

    fn el(k: &Arc<NumberField>, c: &[(i64, i64)]) -> FieldElement {
        FieldElement::new(k, c.iter().map(|&(n, d)| rat(n, d)).collect()).unwrap()
    }

    #[test]
    fn sqrt_two_arithmetic() {
        let k = q_sqrt2();
        let s = FieldElement::generator(&k);
        assert_eq!((&s * &s).as_rational(), Some(&int(2)));
        assert_eq!(s.inv().unwrap(), el(&k, &[(0, 1), (1, 2)]));
        let a = el(&k, &[(1, 1), (1, 1)]);
        let b = el(&k, &[(1, 1), (-1, 1)]);
        assert_eq!((&a * &b).as_rational(), Some(&int(-1)));
        assert!(FieldElement::zero(&k).inv().is_err());
    }

    #[test]
    fn embeddings() {
        let k = q_sqrt2();
        let s = FieldElement::generator(&k);
        let e = s.embed(&rat(1, 1_000_000_000));
        assert!(e.width() <= rat(1, 1_000_000_000));
        assert!((e.to_f64() - std::f64::consts::SQRT_2).abs() < 1e-8);
        let h = FieldElement::from_rational(&k, rat(3, 2));
        assert!(h.embed(&rat(1, 10)).is_point());
        assert_eq!(s.sign_at(0), -1);
        assert_eq!(s.sign_at(1), 1);

        let k5 = NumberField::new(IntPolynomial::from_i64(&[-5, 0, 1]), 1).unwrap();
        let phi = el(&k5, &[(1, 2), (1, 2)]);
        assert!((phi.embed(&rat(1, 1 << 40)).to_f64() - 1.61803399).abs() < 1e-8);
        assert_eq!(phi.minpoly(), IntPolynomial::from_i64(&[-1, -1, 1]));
        assert!(phi.is_integral());
    }

    #[test]
    fn invalid_fields_rejected() {
        assert!(matches!(
            NumberField::new(IntPolynomial::from_i64(&[1, 0, 1]), 0),
            Err(ExactError::NotTotallyReal(_))
        ));
        assert!(matches!(
            NumberField::new(IntPolynomial::from_i64(&[-4, 0, 1]), 0),
            Err(ExactError::Reducible(_))
        ));
        assert!(matches!(
            NumberField::new(IntPolynomial::from_i64(&[-2, 0, 1]), 2),
            Err(ExactError::PlaceIndex { .. })
        ));
    }

    #[test]
    fn cubic_field_charpoly_and_norm() {
        // ℚ(2cos(2π/7)), x³ + x² − 2x − 1
        let k = NumberField::new(IntPolynomial::from_i64(&[-1, -2, 1, 1]), 2).unwrap();
        let t = FieldElement::generator(&k);
        assert_eq!(t.charpoly(), vec![int(-1), int(-2), int(1), int(1)]);
        assert_eq!(t.norm(), int(1));
        assert_eq!(t.trace(), int(-1));
        assert!((t.embed(&rat(1, 1 << 40)).to_f64() - 1.246979603717467).abs() < 1e-12);
        let u = &t * &t;
        assert_eq!(u.real_value().minpoly().degree(), 3);
    }

    #[test]
    fn charpoly_of_matrix() {
        let m = vec![vec![int(2), int(1)], vec![int(3), int(2)]];
        assert_eq!(charpoly(&m), vec![int(1), int(-4), int(1)]);
        let inv = invert(&m).unwrap();
        assert_eq!(inv, vec![vec![int(2), int(-1)], vec![int(-3), int(2)]]);
    }

    fn small() -> impl Strategy<Value = (i64, i64, i64)> {
        (-20i64..=20, -20i64..=20, 1i64..=6)
    }

    proptest! {
        #[test]
        fn ring_axioms(a in small(), b in small(), c in small(), d in small()) {
            let k = NumberField::new(IntPolynomial::from_i64(&[-1, -2, 1, 1]), 0).unwrap();
            let x = el(&k, &[(a.0, a.2), (a.1, a.2), (b.0, b.2)]);
            let y = el(&k, &[(b.1, b.2), (c.0, c.2), (c.1, 1)]);
            let z = el(&k, &[(d.0, d.2), (d.1, 1), (a.0, c.2)]);
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            if !x.is_zero() {
                prop_assert!((&x * &x.inv().unwrap()).is_one());
            }
            prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
        }
    }
}
