use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::algebra::{QuatAlgebra, QuatElement};
use super::order::QuatOrder;
use super::QuatError;
use crate::exact::{parse_rational, FieldElement, IntPolynomial, NumberField, Rational};

/// A base-field scalar: a rational string (`"p/q"`), an integer, or a list of
/// power-basis coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarSpec {
    Int(i64),
    Rational(String),
    Coords(Vec<ScalarSpec>),
}

impl ScalarSpec {
    fn to_rational(&self) -> Result<Rational, QuatError> {
        match self {
            ScalarSpec::Int(n) => Ok(Rational::from_integer((*n).into())),
            ScalarSpec::Rational(s) => parse_rational(s).map_err(QuatError::from),
            ScalarSpec::Coords(_) => Err(QuatError::Config("nested coordinate list".into())),
        }
    }

    pub fn to_element(&self, k: &Arc<NumberField>) -> Result<FieldElement, QuatError> {
        match self {
            ScalarSpec::Coords(v) => {
                let c = v.iter().map(|s| s.to_rational()).collect::<Result<Vec<_>, _>>()?;
                Ok(FieldElement::new(k, c)?)
            }
            other => Ok(FieldElement::from_rational(k, other.to_rational()?)),
        }
    }
}

fn default_minpoly() -> IntPolynomial {
    IntPolynomial::from_i64(&[0, 1])
}

fn is_default_minpoly(p: &IntPolynomial) -> bool {
    *p == default_minpoly()
}

fn is_zero(n: &usize) -> bool {
    *n == 0
}

fn is_false(b: &bool) -> bool {
    !*b
}

/// Algebra description as read from a job file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraConfig {
    #[serde(default = "default_minpoly", skip_serializing_if = "is_default_minpoly")]
    pub field_minpoly: IntPolynomial,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub place_index: usize,
    pub a: ScalarSpec,
    pub b: ScalarSpec,
    /// Rows are basis elements in coordinates `1, i, j, ij`; natural order if absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order_basis: Option<Vec<Vec<ScalarSpec>>>,
    /// Accept a field polynomial of degree above 4 without an irreducibility proof.
    #[serde(default, skip_serializing_if = "is_false")]
    pub trusted_field: bool,
    /// Over fields other than ℚ: the user asserts the algebra is a division algebra.
    #[serde(default, skip_serializing_if = "is_false")]
    pub assert_division: bool,
}

/// A validated algebra with its order, in a presentation where `a > 0` at
/// the distinguished place.
#[derive(Clone, Debug)]
pub struct BuiltAlgebra {
    pub algebra: Arc<QuatAlgebra>,
    pub order: QuatOrder,
    /// `i` and `j` were exchanged to make `a` positive at the split place.
    pub swapped: bool,
}

impl AlgebraConfig {
    pub fn over_q(a: &str, b: &str) -> Self {
        AlgebraConfig {
            field_minpoly: default_minpoly(),
            place_index: 0,
            a: ScalarSpec::Rational(a.to_string()),
            b: ScalarSpec::Rational(b.to_string()),
            order_basis: None,
            trusted_field: false,
            assert_division: false,
        }
    }

    pub fn build(&self) -> Result<BuiltAlgebra, QuatError> {
        let k = if self.trusted_field {
            NumberField::new_trusted(self.field_minpoly.clone(), self.place_index)?
        } else {
            NumberField::new(self.field_minpoly.clone(), self.place_index)?
        };
        let a = self.a.to_element(&k)?;
        let b = self.b.to_element(&k)?;
        let raw = if self.assert_division {
            QuatAlgebra::new_asserted_division(&k, a, b)?
        } else {
            QuatAlgebra::new(&k, a, b)?
        };
        let (algebra, swapped) = raw.normalized()?;
        let order = match &self.order_basis {
            None => QuatOrder::natural(&algebra)?,
            Some(rows) => {
                if rows.len() != 4 || rows.iter().any(|r| r.len() != 4) {
                    return Err(QuatError::Config("order_basis must be a 4×4 array".into()));
                }
                let mut basis = vec![];
                for r in rows {
                    let c = r.iter().map(|s| s.to_element(&k)).collect::<Result<Vec<_>, _>>()?;
                    let c = if swapped {
                        [c[0].clone(), c[2].clone(), c[1].clone(), -&c[3]]
                    } else {
                        [c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone()]
                    };
                    basis.push(QuatElement::new(&algebra, c)?);
                }
                QuatOrder::new(&algebra, basis.try_into().unwrap())?
            }
        };
        Ok(BuiltAlgebra {
            algebra,
            order,
            swapped,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_config() {
        let c: AlgebraConfig = serde_json::from_str(r#"{"a": "2", "b": 3}"#).unwrap();
        let built = c.build().unwrap();
        assert!(built.order.is_natural());
        assert!(!built.swapped);
        assert_eq!(built.algebra.ramification().unwrap().finite_places, vec![2, 3]);
    }

    #[test]
    fn rejects_unknown_keys() {
        let r: Result<AlgebraConfig, _> = serde_json::from_str(r#"{"a": "2", "b": "3", "c": 1}"#);
        assert!(r.is_err());
    }

    #[test]
    fn swaps_into_split_presentation() {
        let c: AlgebraConfig = serde_json::from_str(
            r#"{"a": "-1", "b": "3", "order_basis": [["1","0","0","0"],["0","1","0","0"],["0","0","1","0"],["0","0","0","1"]]}"#,
        )
        .unwrap();
        let built = c.build().unwrap();
        assert!(built.swapped);
        assert!(built.algebra.a().as_rational().unwrap() > &Rational::from_integer(0.into()));
    }

    #[test]
    fn quadratic_field_config() {
        let c: AlgebraConfig = serde_json::from_str(
            r#"{"field_minpoly": [-2, 0, 1], "place_index": 1, "a": ["0", "1"], "b": "-1"}"#,
        )
        .unwrap();
        let built = c.build().unwrap();
        assert!(built.algebra.is_fuchsian());
        assert_eq!(built.order.z_basis().len(), 8);
        let back = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<AlgebraConfig>(&back).unwrap(), c);
    }
}
