use std::sync::Arc;

use serde::{Serialize, Serializer};

use super::algebra::{QuatAlgebra, QuatElement};
use super::QuatError;
use crate::exact::{FieldElement, Rational};

/// The lattice `Σ ℤ[θ]·eᵢ` spanned by four basis elements over the ring
/// generated by the field generator (ℤ when the base field is ℚ).
#[derive(Clone, Debug)]
pub struct QuatOrder {
    alg: Arc<QuatAlgebra>,
    basis: [QuatElement; 4],
    // rows of the inverse of the basis matrix (basis rows in 1, i, j, ij)
    inverse: Vec<Vec<FieldElement>>,
}

fn invert_over_field(m: &[Vec<FieldElement>]) -> Option<Vec<Vec<FieldElement>>> {
    let n = m.len();
    let k = m[0][0].field().clone();
    let mut a: Vec<Vec<FieldElement>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| FieldElement::from_int(&k, i64::from(i == j))));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = a[col][col].inv().ok()?;
        for v in a[col].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..2 * n {
                    let t = &f * &a[col][c];
                    a[r][c] = &a[r][c] - &t;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

impl QuatOrder {
    /// Validates the basis: nonsingular, contains 1, closed under
    /// multiplication (all 16 basis products).
    pub fn new(alg: &Arc<QuatAlgebra>, basis: [QuatElement; 4]) -> Result<Self, QuatError> {
        if !alg.field().is_rationals() && !alg.field().minpoly().is_monic() {
            return Err(QuatError::NonIntegralRing);
        }
        let m: Vec<Vec<FieldElement>> = basis.iter().map(|e| e.coords().to_vec()).collect();
        let inverse = invert_over_field(&m).ok_or(QuatError::SingularBasis)?;
        let order = QuatOrder {
            alg: alg.clone(),
            basis,
            inverse,
        };
        if !order.contains(&QuatElement::one(alg))? {
            return Err(QuatError::MissingIdentity);
        }
        for i in 0..4 {
            for j in 0..4 {
                let p = order.basis[i].mul(&order.basis[j])?;
                if !order.contains(&p)? {
                    return Err(QuatError::NotClosed(i, j));
                }
            }
        }
        Ok(order)
    }

    /// `ℤ[θ]⟨1, i, j, ij⟩`.
    pub fn natural(alg: &Arc<QuatAlgebra>) -> Result<Self, QuatError> {
        let basis = std::array::from_fn(|i| {
            let mut c = [0i64; 4];
            c[i] = 1;
            QuatElement::from_ints(alg, c)
        });
        Self::new(alg, basis)
    }

    /// Basis from rational coordinate rows (base field ℚ or rational entries).
    pub fn from_rational_rows(alg: &Arc<QuatAlgebra>, rows: [[Rational; 4]; 4]) -> Result<Self, QuatError> {
        let basis = rows.map(|r| QuatElement::from_rationals(alg, r));
        Self::new(alg, basis)
    }

    pub fn algebra(&self) -> &Arc<QuatAlgebra> {
        &self.alg
    }

    pub fn basis(&self) -> &[QuatElement; 4] {
        &self.basis
    }

    pub fn is_natural(&self) -> bool {
        self.basis.iter().enumerate().all(|(i, e)| {
            e.coords()
                .iter()
                .enumerate()
                .all(|(j, c)| if i == j { c.is_one() } else { c.is_zero() })
        })
    }

    /// Coordinates of `x` in the order basis, over the base field.
    pub fn coordinates(&self, x: &QuatElement) -> Result<[FieldElement; 4], QuatError> {
        if *x.algebra().as_ref() != *self.alg.as_ref() {
            return Err(QuatError::AlgebraMismatch);
        }
        let k = self.alg.field();
        Ok(std::array::from_fn(|j| {
            let mut acc = FieldElement::zero(k);
            for i in 0..4 {
                acc = &acc + &(&x.coords()[i] * &self.inverse[i][j]);
            }
            acc
        }))
    }

    pub fn contains(&self, x: &QuatElement) -> Result<bool, QuatError> {
        Ok(self
            .coordinates(x)?
            .iter()
            .all(|c| c.coords().iter().all(|r| r.is_integer())))
    }

    /// ℤ-basis `θ^m · eᵢ` (m < [k:ℚ]), ordered by basis index then power.
    pub fn z_basis(&self) -> Vec<QuatElement> {
        let k = self.alg.field();
        let d = k.degree();
        let mut out = vec![];
        for e in &self.basis {
            let mut t = FieldElement::one(k);
            let theta = FieldElement::generator(k);
            for _ in 0..d {
                out.push(e.scale(&t));
                t = &t * &theta;
            }
        }
        out
    }

    /// Element with the given ℤ-coordinates on [`z_basis`](Self::z_basis).
    pub fn element_from_z(&self, coeffs: &[i64]) -> QuatElement {
        let k = self.alg.field();
        let mut acc = QuatElement::scalar(&self.alg, FieldElement::zero(k));
        for (n, e) in coeffs.iter().zip(self.z_basis()) {
            if *n != 0 {
                acc = acc
                    .add(&e.scale(&FieldElement::from_int(k, *n)))
                    .expect("same algebra");
            }
        }
        acc
    }

    /// ℤ-coordinates on [`z_basis`](Self::z_basis) of an order element.
    pub fn z_coordinates(&self, x: &QuatElement) -> Result<Option<Vec<Rational>>, QuatError> {
        let c = self.coordinates(x)?;
        let v: Vec<Rational> = c.iter().flat_map(|f| f.coords().to_vec()).collect();
        Ok(v.iter().all(|r| r.is_integer()).then_some(v))
    }
}

impl Serialize for QuatOrder {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.basis.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_rational;
    use num_traits::Zero;

    fn alg(a: i64, b: i64) -> Arc<QuatAlgebra> {
        QuatAlgebra::over_q(Rational::from_integer(a.into()), Rational::from_integer(b.into())).unwrap()
    }

    fn rows(s: [[&str; 4]; 4]) -> [[Rational; 4]; 4] {
        s.map(|r| r.map(|x| parse_rational(x).unwrap()))
    }

    #[test]
    fn natural_order_membership() {
        let a = alg(2, 3);
        let o = QuatOrder::natural(&a).unwrap();
        assert!(o.is_natural());
        assert!(o.contains(&QuatElement::from_ints(&a, [3, 2, 0, 0])).unwrap());
        let half = QuatElement::from_rationals(&a, [parse_rational("1/2").unwrap(), Rational::zero(), Rational::zero(), Rational::zero()]);
        assert!(!o.contains(&half).unwrap());
    }

    #[test]
    fn hurwitz_style_order() {
        // (−1, −1): ℤ⟨1, i, j, (1+i+j+ij)/2⟩ is closed (Hurwitz order)
        let a = alg(-1, -1);
        let b = rows([
            ["1", "0", "0", "0"],
            ["0", "1", "0", "0"],
            ["0", "0", "1", "0"],
            ["1/2", "1/2", "1/2", "1/2"],
        ]);
        let o = QuatOrder::from_rational_rows(&a, b.clone()).unwrap();
        let h = QuatElement::from_rationals(&a, std::array::from_fn(|_| parse_rational("1/2").unwrap()));
        assert!(o.contains(&h).unwrap());
        // basis-product oracle: the Hurwitz order is the set of quaternions
        // with all coordinates in ℤ or all in ℤ + 1/2
        let hurwitz = |x: &QuatElement| {
            let c = x.rational_coords().unwrap();
            let twice: Vec<Rational> = c.iter().map(|r| r * Rational::from_integer(2.into())).collect();
            twice.iter().all(|t| t.is_integer())
                && (c.iter().all(|r| r.is_integer()) || c.iter().all(|r| !r.is_integer()))
        };
        for x in o.basis() {
            for y in o.basis() {
                let p = x.mul(y).unwrap();
                assert!(hurwitz(&p));
                assert!(o.contains(&p).unwrap());
            }
        }
        // the same half-integral vector fails to close in (2, 3)
        let bad = QuatOrder::from_rational_rows(&alg(2, 3), b);
        assert!(matches!(bad, Err(QuatError::NotClosed(..))));
    }

    #[test]
    fn invalid_bases() {
        let a = alg(2, 3);
        let sing = rows([["1", "0", "0", "0"], ["0", "1", "0", "0"], ["0", "1", "0", "0"], ["0", "0", "0", "1"]]);
        assert!(matches!(QuatOrder::from_rational_rows(&a, sing), Err(QuatError::SingularBasis)));
        let no_one = rows([["2", "0", "0", "0"], ["0", "1", "0", "0"], ["0", "0", "1", "0"], ["0", "0", "0", "1"]]);
        assert!(matches!(QuatOrder::from_rational_rows(&a, no_one), Err(QuatError::MissingIdentity)));
    }

    #[test]
    fn traces_and_norms_of_order_elements_are_integral() {
        let a = alg(2, 3);
        let o = QuatOrder::natural(&a).unwrap();
        for c in [[1, 2, -1, 3], [0, 1, 1, 1], [5, -2, 2, 7]] {
            let x = QuatElement::from_ints(&a, c);
            assert!(o.contains(&x).unwrap());
            assert!(x.trd().as_rational().unwrap().is_integer());
            assert!(x.nrd().as_rational().unwrap().is_integer());
        }
        assert_eq!(o.z_basis().len(), 4);
        assert_eq!(o.element_from_z(&[3, 2, 0, 0]), QuatElement::from_ints(&a, [3, 2, 0, 0]));
    }
}
