use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use super::hilbert::{ramification_set, RamificationSet};
use super::QuatError;
use crate::exact::{rational_sqrt, FieldElement, Interval, NumberField, Rational};
use crate::hyp::{ExactShadow, Mat2};

/// The algebra `(a, b / k)` with basis `1, i, j, ij`, `i² = a`, `j² = b`,
/// `ij = −ji`.
#[derive(Debug)]
pub struct QuatAlgebra {
    field: Arc<NumberField>,
    a: FieldElement,
    b: FieldElement,
    signs: Vec<(i8, i8)>,
    ramification: Option<RamificationSet>,
    division_asserted: bool,
}

impl PartialEq for QuatAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b
    }
}

impl QuatAlgebra {
    pub fn new(field: &Arc<NumberField>, a: FieldElement, b: FieldElement) -> Result<Arc<Self>, QuatError> {
        Ok(Arc::new(Self::build(field, a, b, false)?))
    }

    /// For fields other than ℚ, where ramification is not computed here: the
    /// caller asserts that the algebra is a division algebra.
    pub fn new_asserted_division(
        field: &Arc<NumberField>,
        a: FieldElement,
        b: FieldElement,
    ) -> Result<Arc<Self>, QuatError> {
        Ok(Arc::new(Self::build(field, a, b, true)?))
    }

    pub fn over_q(a: Rational, b: Rational) -> Result<Arc<Self>, QuatError> {
        let k = NumberField::rationals();
        let a = FieldElement::from_rational(&k, a);
        let b = FieldElement::from_rational(&k, b);
        Self::new(&k, a, b)
    }

    fn build(field: &Arc<NumberField>, a: FieldElement, b: FieldElement, asserted: bool) -> Result<Self, QuatError> {
        if a.is_zero() || b.is_zero() {
            return Err(QuatError::ZeroParameter);
        }
        if a.field() != field || b.field() != field {
            return Err(QuatError::AlgebraMismatch);
        }
        let signs = (0..field.degree()).map(|i| (a.sign_at(i), b.sign_at(i))).collect();
        let ramification = if field.is_rationals() {
            Some(ramification_set(a.as_rational().unwrap(), b.as_rational().unwrap())?)
        } else {
            None
        };
        Ok(QuatAlgebra {
            field: field.clone(),
            a,
            b,
            signs,
            ramification,
            division_asserted: asserted,
        })
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn a(&self) -> &FieldElement {
        &self.a
    }

    pub fn b(&self) -> &FieldElement {
        &self.b
    }

    /// Signs of `(a, b)` at each real place, ascending root order.
    pub fn signs(&self) -> &[(i8, i8)] {
        &self.signs
    }

    /// Ramification over ℚ; `None` for other base fields.
    pub fn ramification(&self) -> Option<&RamificationSet> {
        self.ramification.as_ref()
    }

    pub fn division_asserted(&self) -> bool {
        self.division_asserted
    }

    pub fn is_split_at_distinguished(&self) -> bool {
        let (sa, sb) = self.signs[self.field.place_index()];
        sa > 0 || sb > 0
    }

    /// Split at the distinguished real place and ramified at every other one.
    pub fn is_fuchsian(&self) -> bool {
        self.is_split_at_distinguished()
            && self
                .signs
                .iter()
                .enumerate()
                .all(|(i, &(sa, sb))| i == self.field.place_index() || (sa < 0 && sb < 0))
    }

    /// Division algebra? Decided over ℚ, asserted otherwise (`None` when
    /// neither is available). Ramification at another real place also
    /// forces a division algebra.
    pub fn is_division(&self) -> Option<bool> {
        if let Some(r) = &self.ramification {
            return Some(r.is_division());
        }
        let ramified_real = self
            .signs
            .iter()
            .any(|&(sa, sb)| sa < 0 && sb < 0);
        if ramified_real || self.division_asserted {
            Some(true)
        } else {
            None
        }
    }

    /// Fuchsian and division: `ρ(O¹)` is a cocompact lattice.
    pub fn is_cocompact(&self) -> Option<bool> {
        if !self.is_fuchsian() {
            return Some(false);
        }
        self.is_division()
    }

    /// An isomorphic presentation with `a > 0` at the distinguished place.
    /// Returns the new algebra and whether `i` and `j` were exchanged (the
    /// coordinate map is then `(x₀, x₁, x₂, x₃) ↦ (x₀, x₂, x₁, −x₃)`).
    pub fn normalized(self: &Arc<Self>) -> Result<(Arc<QuatAlgebra>, bool), QuatError> {
        let (sa, sb) = self.signs[self.field.place_index()];
        if sa > 0 {
            return Ok((self.clone(), false));
        }
        if sb > 0 {
            let alg = Self::build(&self.field, self.b.clone(), self.a.clone(), self.division_asserted)?;
            return Ok((Arc::new(alg), true));
        }
        Err(QuatError::RamifiedAtDistinguishedPlace)
    }

    /// Enclosure of `√σ(a)` at the distinguished place.
    pub fn sqrt_a(&self, prec: u32) -> Result<Interval, QuatError> {
        if self.signs[self.field.place_index()].0 <= 0 {
            return Err(QuatError::NotSplitPresentation);
        }
        Ok(self.a.embed_prec(prec + 16).sqrt()?.round_to(prec))
    }
}

impl Serialize for QuatAlgebra {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("QuatAlgebra", 6)?;
        st.serialize_field("field", &*self.field)?;
        st.serialize_field("a", &self.a)?;
        st.serialize_field("b", &self.b)?;
        st.serialize_field("signs", &self.signs)?;
        st.serialize_field("ramification", &self.ramification)?;
        st.serialize_field("division_asserted", &self.division_asserted)?;
        st.end()
    }
}

/// `x₀ + x₁i + x₂j + x₃ij`.
#[derive(Clone, Debug)]
pub struct QuatElement {
    alg: Arc<QuatAlgebra>,
    c: [FieldElement; 4],
}

impl PartialEq for QuatElement {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c && *self.alg == *other.alg
    }
}

impl Eq for QuatElement {}

impl QuatElement {
    pub fn new(alg: &Arc<QuatAlgebra>, c: [FieldElement; 4]) -> Result<Self, QuatError> {
        if c.iter().any(|x| x.field() != alg.field()) {
            return Err(QuatError::AlgebraMismatch);
        }
        Ok(QuatElement { alg: alg.clone(), c })
    }

    pub fn from_rationals(alg: &Arc<QuatAlgebra>, c: [Rational; 4]) -> Self {
        let k = alg.field();
        QuatElement {
            alg: alg.clone(),
            c: c.map(|r| FieldElement::from_rational(k, r)),
        }
    }

    pub fn from_ints(alg: &Arc<QuatAlgebra>, c: [i64; 4]) -> Self {
        Self::from_rationals(alg, c.map(|n| Rational::from_integer(n.into())))
    }

    pub fn scalar(alg: &Arc<QuatAlgebra>, x: FieldElement) -> Self {
        let z = FieldElement::zero(alg.field());
        QuatElement {
            alg: alg.clone(),
            c: [x, z.clone(), z.clone(), z],
        }
    }

    pub fn one(alg: &Arc<QuatAlgebra>) -> Self {
        Self::scalar(alg, FieldElement::one(alg.field()))
    }

    pub fn algebra(&self) -> &Arc<QuatAlgebra> {
        &self.alg
    }

    pub fn coords(&self) -> &[FieldElement; 4] {
        &self.c
    }

    /// Coordinates when the base field is ℚ.
    pub fn rational_coords(&self) -> Option<[Rational; 4]> {
        let v: Option<Vec<Rational>> = self.c.iter().map(|x| x.as_rational().cloned()).collect();
        v.map(|v| [v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()])
    }

    fn same_algebra(&self, o: &QuatElement) -> Result<(), QuatError> {
        if Arc::ptr_eq(&self.alg, &o.alg) || *self.alg == *o.alg {
            Ok(())
        } else {
            Err(QuatError::AlgebraMismatch)
        }
    }

    pub fn mul(&self, o: &QuatElement) -> Result<QuatElement, QuatError> {
        self.same_algebra(o)?;
        let (a, b) = (&self.alg.a, &self.alg.b);
        let ab = a * b;
        let [x0, x1, x2, x3] = &self.c;
        let [y0, y1, y2, y3] = &o.c;
        let z0 = &(&(&(x0 * y0) + &(a * &(x1 * y1))) + &(b * &(x2 * y2))) - &(&ab * &(x3 * y3));
        let z1 = &(&(&(x0 * y1) + &(x1 * y0)) - &(b * &(x2 * y3))) + &(b * &(x3 * y2));
        let z2 = &(&(&(x0 * y2) + &(x2 * y0)) + &(a * &(x1 * y3))) - &(a * &(x3 * y1));
        let z3 = &(&(&(x0 * y3) + &(x3 * y0)) + &(x1 * y2)) - &(x2 * y1);
        Ok(QuatElement {
            alg: self.alg.clone(),
            c: [z0, z1, z2, z3],
        })
    }

    pub fn add(&self, o: &QuatElement) -> Result<QuatElement, QuatError> {
        self.same_algebra(o)?;
        Ok(QuatElement {
            alg: self.alg.clone(),
            c: std::array::from_fn(|i| &self.c[i] + &o.c[i]),
        })
    }

    pub fn sub(&self, o: &QuatElement) -> Result<QuatElement, QuatError> {
        self.same_algebra(o)?;
        Ok(QuatElement {
            alg: self.alg.clone(),
            c: std::array::from_fn(|i| &self.c[i] - &o.c[i]),
        })
    }

    pub fn neg(&self) -> QuatElement {
        QuatElement {
            alg: self.alg.clone(),
            c: std::array::from_fn(|i| -&self.c[i]),
        }
    }

    pub fn scale(&self, s: &FieldElement) -> QuatElement {
        QuatElement {
            alg: self.alg.clone(),
            c: std::array::from_fn(|i| s * &self.c[i]),
        }
    }

    pub fn conj(&self) -> QuatElement {
        let [x0, x1, x2, x3] = &self.c;
        QuatElement {
            alg: self.alg.clone(),
            c: [x0.clone(), -x1, -x2, -x3],
        }
    }

    pub fn trd(&self) -> FieldElement {
        &self.c[0] + &self.c[0]
    }

    pub fn nrd(&self) -> FieldElement {
        let (a, b) = (&self.alg.a, &self.alg.b);
        let [x0, x1, x2, x3] = &self.c;
        &(&(&(x0 * x0) - &(a * &(x1 * x1))) - &(b * &(x2 * x2))) + &(&(a * b) * &(x3 * x3))
    }

    /// `x⁻¹ = conj(x) / nrd(x)`.
    pub fn inverse(&self) -> Result<QuatElement, QuatError> {
        let n = self.nrd().inv()?;
        Ok(self.conj().scale(&n))
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    /// The scalar `x₀` if `x₁ = x₂ = x₃ = 0`.
    pub fn as_scalar(&self) -> Option<&FieldElement> {
        self.c[1..].iter().all(|x| x.is_zero()).then_some(&self.c[0])
    }

    pub fn is_one(&self) -> bool {
        self.as_scalar().is_some_and(|s| s.is_one())
    }

    pub fn is_minus_one(&self) -> bool {
        self.as_scalar().is_some_and(|s| (-s).is_one())
    }

    pub fn pow(&self, e: u32) -> QuatElement {
        let mut acc = QuatElement::one(&self.alg);
        for _ in 0..e {
            acc = acc.mul(self).expect("same algebra");
        }
        acc
    }
}

impl fmt::Display for QuatElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["", "i", "j", "ij"];
        let mut parts = vec![];
        for (x, n) in self.c.iter().zip(names) {
            if x.is_zero() {
                continue;
            }
            let s = if x.as_rational().is_some() {
                x.to_string()
            } else {
                format!("({x})")
            };
            parts.push(if n.is_empty() {
                s
            } else if x.is_one() {
                n.to_string()
            } else {
                format!("{s}*{n}")
            });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl Serialize for QuatElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.c.serialize(s)
    }
}

/// `ρ(x) = [[x₀ + x₁√a, x₂ + x₃√a], [b(x₂ − x₃√a), x₀ − x₁√a]]` at the
/// distinguished place, with entries enclosed at `prec` bits. The exact
/// shadow is a rational matrix when every entry is rational, otherwise the
/// quaternion itself.
pub fn embed_matrix(x: &QuatElement, prec: u32) -> Result<Mat2, QuatError> {
    let alg = x.algebra();
    if alg.signs()[alg.field().place_index()].0 <= 0 {
        return Err(QuatError::NotSplitPresentation);
    }
    let wp = prec + 16;
    if let (Some(c), Some(a), Some(b)) = (x.rational_coords(), alg.a.as_rational(), alg.b.as_rational()) {
        if let Some(r) = rational_sqrt(a) {
            let e = [
                &c[0] + &c[1] * &r,
                &c[2] + &c[3] * &r,
                b * (&c[2] - &c[3] * &r),
                &c[0] - &c[1] * &r,
            ];
            return Ok(Mat2::from_rationals(e, prec));
        }
    }
    let s = alg.sqrt_a(wp)?;
    let bb = alg.b.embed_prec(wp);
    let [x0, x1, x2, x3] = x.coords().clone().map(|v| v.embed_prec(wp));
    let e = [
        &x0 + &(&x1 * &s),
        &x2 + &(&x3 * &s),
        &bb * &(&x2 - &(&x3 * &s)),
        &x0 - &(&x1 * &s),
    ];
    Ok(Mat2::from_parts(
        e.map(|v| v.round_to(prec)),
        Some(ExactShadow::Quat(x.clone())),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{IntPolynomial, Rational};
    use num_traits::{One, Zero};
    use proptest::prelude::*;

    fn alg23() -> Arc<QuatAlgebra> {
        QuatAlgebra::over_q(Rational::from_integer(2.into()), Rational::from_integer(3.into())).unwrap()
    }

    #[test]
    fn reduced_norm_and_trace() {
        let a = alg23();
        let one = QuatElement::one(&a);
        assert!(one.nrd().is_one());
        assert_eq!(one.trd().as_rational().cloned(), Some(Rational::from_integer(2.into())));
        assert!(QuatElement::from_ints(&a, [3, 2, 0, 0]).nrd().is_one());
        let x = QuatElement::from_ints(&a, [0, 1, 1, 1]);
        assert!(x.nrd().is_one());
        assert!(x.trd().is_zero());
        // nrd(x) = x·conj(x) as a scalar
        let p = x.mul(&x.conj()).unwrap();
        assert!(p.is_one());
    }

    #[test]
    fn matrix_embedding_examples() {
        let a = alg23();
        let m = embed_matrix(&QuatElement::one(&a), 64).unwrap();
        assert!(m.is_identity_exact());
        let m = embed_matrix(&QuatElement::from_ints(&a, [2, 0, 1, 0]), 64).unwrap();
        let e = m.entries();
        let want = [2.0, 1.0, 3.0, 2.0];
        for (x, w) in e.iter().zip(want) {
            assert!((x.to_f64() - w).abs() < 1e-15);
        }
        assert!((m.trace().to_f64() - 4.0).abs() < 1e-15);
        assert!(m.det().contains(&Rational::one()));
        let m = embed_matrix(&QuatElement::from_ints(&a, [3, 2, 0, 0]), 64).unwrap();
        assert!((m.entries()[0].to_f64() - 5.82842712474619).abs() < 1e-14);
        assert!((m.entries()[3].to_f64() - 0.171572875253810).abs() < 1e-14);
        assert!(m.entries()[1].contains(&Rational::zero()));
    }

    #[test]
    fn normalization_swaps_generators() {
        let a = QuatAlgebra::over_q(Rational::from_integer((-1).into()), Rational::from_integer(3.into())).unwrap();
        assert!(embed_matrix(&QuatElement::one(&a), 64).is_err());
        let (n, swapped) = a.normalized().unwrap();
        assert!(swapped);
        assert_eq!(n.a().as_rational().cloned(), Some(Rational::from_integer(3.into())));
        let bad = QuatAlgebra::over_q(Rational::from_integer((-1).into()), Rational::from_integer((-1).into())).unwrap();
        assert!(bad.normalized().is_err());
        assert!(!bad.is_fuchsian());
    }

    #[test]
    fn real_quadratic_base_field() {
        // (√2, −1) over ℚ(√2), split at the larger root and ramified at −√2
        let k = NumberField::new(IntPolynomial::from_i64(&[-2, 0, 1]), 1).unwrap();
        let a = FieldElement::generator(&k);
        let b = FieldElement::from_int(&k, -1);
        let alg = QuatAlgebra::new(&k, a, b).unwrap();
        assert!(alg.is_fuchsian());
        assert_eq!(alg.is_division(), Some(true));
        let x = QuatElement::new(&alg, [
            FieldElement::from_int(&k, 1),
            FieldElement::from_int(&k, 1),
            FieldElement::from_int(&k, 1),
            FieldElement::zero(&k),
        ])
        .unwrap();
        let m = embed_matrix(&x, 96).unwrap();
        let n = x.nrd().embed_prec(96);
        assert!(m.det().overlaps(&n));
    }

    fn small_q() -> impl Strategy<Value = Rational> {
        (-9i64..=9, 1i64..=4).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
    }

    fn quat() -> impl Strategy<Value = [Rational; 4]> {
        [small_q(), small_q(), small_q(), small_q()]
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative(x in quat(), y in quat()) {
            let a = alg23();
            let x = QuatElement::from_rationals(&a, x);
            let y = QuatElement::from_rationals(&a, y);
            let xy = x.mul(&y).unwrap();
            prop_assert_eq!(xy.nrd(), &x.nrd() * &y.nrd());
            prop_assert_eq!(xy.conj(), y.conj().mul(&x.conj()).unwrap());
        }

        #[test]
        fn rho_is_a_homomorphism(x in quat(), y in quat()) {
            let a = alg23();
            let x = QuatElement::from_rationals(&a, x);
            let y = QuatElement::from_rationals(&a, y);
            let mx = embed_matrix(&x, 128).unwrap();
            let my = embed_matrix(&y, 128).unwrap();
            let mxy = embed_matrix(&x.mul(&y).unwrap(), 128).unwrap();
            let prod = mx.mul_intervals(&my);
            for (p, q) in prod.iter().zip(mxy.entries()) {
                prop_assert!(p.overlaps(q));
            }
            let adj = mx.adjugate();
            let mc = embed_matrix(&x.conj(), 128).unwrap();
            for (p, q) in adj.entries().iter().zip(mc.entries()) {
                prop_assert!(p.overlaps(q));
            }
            prop_assert!(mx.det().contains(x.nrd().as_rational().unwrap()));
            prop_assert!(mx.trace().contains(x.trd().as_rational().unwrap()));
        }
    }
}
