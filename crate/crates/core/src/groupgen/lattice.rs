use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, ToPrimitive, Zero};

use super::GroupGenError;
use crate::exact::{FieldElement, Rational};
use crate::quat::{embed_matrix, QuatElement, QuatOrder};

/// Integer coordinates on the order's ℤ-basis.
pub type ZCoords = Vec<i64>;

/// Integer arithmetic on an order through its ℤ-basis: structure constants,
/// conjugation, and the reduced norm as integer quadratic forms.
#[derive(Clone, Debug)]
pub(crate) struct Lattice {
    pub order: QuatOrder,
    pub basis: Vec<QuatElement>,
    pub dim: usize,
    table: Vec<Vec<(usize, i64)>>,
    conj: Vec<Vec<(usize, i64)>>,
    // per power-basis coordinate of nrd: terms (k, l, c) with k ≤ l
    nrd_forms: Vec<Vec<(usize, usize, i128)>>,
    nrd_den: i128,
    pub one: ZCoords,
    real: Vec<[f64; 4]>,
}

fn to_int(r: &Rational) -> Option<i64> {
    r.is_integer().then(|| r.to_integer().to_i64()).flatten()
}

fn sparse(v: &[Rational], what: &str) -> Result<Vec<(usize, i64)>, GroupGenError> {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| to_int(c).map(|n| (k, n)).ok_or_else(|| GroupGenError::Lattice(format!("{what} has coefficient {c}"))))
        .collect()
}

impl Lattice {
    pub fn new(order: &QuatOrder) -> Result<Self, GroupGenError> {
        let basis = order.z_basis();
        let dim = basis.len();
        let zc = |x: &QuatElement, what: &str| -> Result<Vec<Rational>, GroupGenError> {
            order
                .z_coordinates(x)?
                .ok_or_else(|| GroupGenError::Lattice(format!("{what} leaves the lattice")))
        };
        let mut table = Vec::with_capacity(dim * dim);
        for x in &basis {
            for y in &basis {
                let p = x.mul(y)?;
                table.push(sparse(&zc(&p, "a basis product")?, "a basis product")?);
            }
        }
        let conj = basis
            .iter()
            .map(|x| sparse(&zc(&x.conj(), "a conjugate")?, "a conjugate"))
            .collect::<Result<Vec<_>, _>>()?;
        let one_q = QuatElement::one(order.algebra());
        let one = sparse(&zc(&one_q, "1")?, "1")?;
        let mut one_v = vec![0; dim];
        for (k, n) in one {
            one_v[k] = n;
        }

        let k = order.algebra().field();
        let deg = k.degree();
        let mut raw: Vec<(usize, usize, FieldElement)> = vec![];
        let nrds: Vec<FieldElement> = basis.iter().map(QuatElement::nrd).collect();
        for a in 0..dim {
            raw.push((a, a, nrds[a].clone()));
            for b in a + 1..dim {
                let s = basis[a].add(&basis[b])?.nrd();
                raw.push((a, b, &(&s - &nrds[a]) - &nrds[b]));
            }
        }
        let mut den = BigInt::one();
        for (_, _, c) in &raw {
            for r in c.coords() {
                den = den.lcm(r.denom());
            }
        }
        let den_i = den
            .to_i128()
            .ok_or_else(|| GroupGenError::Lattice("norm form denominator too large".into()))?;
        let mut nrd_forms = vec![vec![]; deg];
        for (a, b, c) in &raw {
            for (m, r) in c.coords().iter().enumerate() {
                if r.is_zero() {
                    continue;
                }
                let v = (r * Rational::from_integer(den.clone())).to_integer();
                let v = v
                    .to_i128()
                    .ok_or_else(|| GroupGenError::Lattice("norm form coefficient too large".into()))?;
                nrd_forms[m].push((*a, *b, v));
            }
        }
        let real = basis
            .iter()
            .map(|x| {
                let m = embed_matrix(x, 64)?;
                Ok(m.entries().clone().map(|e| e.to_f64()))
            })
            .collect::<Result<Vec<_>, GroupGenError>>()?;
        Ok(Lattice {
            order: order.clone(),
            basis,
            dim,
            table,
            conj,
            nrd_forms,
            nrd_den: den_i,
            one: one_v,
            real,
        })
    }

    /// Exact test `nrd(x) = 1`.
    pub fn has_unit_norm(&self, z: &[i64]) -> bool {
        self.nrd_forms.iter().enumerate().all(|(m, terms)| {
            let mut s: i128 = 0;
            for &(a, b, c) in terms {
                s += c * z[a] as i128 * z[b] as i128;
            }
            s == if m == 0 { self.nrd_den } else { 0 }
        })
    }

    /// Values of the last coordinate in `[-bound, bound]` that give
    /// `nrd = 1`, the other coordinates of `z` fixed.
    pub fn complete_last(&self, z: &mut [i64], bound: i64, out: &mut Vec<ZCoords>) {
        let l = self.dim - 1;
        let (mut qa, mut qb, mut qc) = (0i128, 0i128, 0i128);
        for &(a, b, c) in &self.nrd_forms[0] {
            match (a == l, b == l) {
                (true, true) => qa += c,
                (false, true) => qb += c * z[a] as i128,
                (true, false) => qb += c * z[b] as i128,
                (false, false) => qc += c * z[a] as i128 * z[b] as i128,
            }
        }
        qc -= self.nrd_den;
        let mut push = |t: i128| {
            if t.abs() <= bound as i128 {
                z[l] = t as i64;
                if self.has_unit_norm(z) {
                    out.push(z.to_vec());
                }
            }
        };
        if qa == 0 {
            if qb == 0 {
                if qc == 0 {
                    (-bound..=bound).for_each(|t| push(t as i128));
                }
            } else if qc % qb == 0 {
                push(-qc / qb);
            }
            return;
        }
        let disc = qb * qb - 4 * qa * qc;
        if disc < 0 {
            return;
        }
        let s = disc.sqrt();
        if s * s != disc {
            return;
        }
        for num in if s == 0 { vec![-qb] } else { vec![-qb - s, -qb + s] } {
            if num % (2 * qa) == 0 {
                push(num / (2 * qa));
            }
        }
    }

    pub fn mul(&self, x: &[i64], y: &[i64]) -> Result<ZCoords, GroupGenError> {
        let mut acc = vec![0i128; self.dim];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                let p = xi as i128 * yj as i128;
                for &(k, c) in &self.table[i * self.dim + j] {
                    acc[k] = p
                        .checked_mul(c as i128)
                        .and_then(|t| acc[k].checked_add(t))
                        .ok_or(GroupGenError::CoordinateOverflow)?;
                }
            }
        }
        acc.into_iter()
            .map(|v| i64::try_from(v).map_err(|_| GroupGenError::CoordinateOverflow))
            .collect()
    }

    /// Conjugate, which is the inverse for norm-one elements.
    pub fn conj(&self, x: &[i64]) -> ZCoords {
        let mut out = vec![0i64; self.dim];
        for (i, &xi) in x.iter().enumerate() {
            for &(k, c) in &self.conj[i] {
                out[k] += xi * c;
            }
        }
        out
    }

    pub fn neg(x: &[i64]) -> ZCoords {
        x.iter().map(|v| -v).collect()
    }

    /// Representative of `±x` whose first nonzero coordinate is positive.
    pub fn canonical(x: ZCoords) -> ZCoords {
        match x.iter().find(|v| **v != 0) {
            Some(v) if *v < 0 => Self::neg(&x),
            _ => x,
        }
    }

    pub fn element(&self, z: &[i64]) -> QuatElement {
        let k = self.order.algebra().field();
        let mut acc = QuatElement::scalar(self.order.algebra(), FieldElement::zero(k));
        for (n, e) in z.iter().zip(&self.basis) {
            if *n != 0 {
                acc = acc.add(&e.scale(&FieldElement::from_int(k, *n))).expect("same algebra");
            }
        }
        acc
    }

    pub fn coordinates(&self, x: &QuatElement) -> Result<Option<ZCoords>, GroupGenError> {
        Ok(match self.order.z_coordinates(x)? {
            Some(v) => v.iter().map(to_int).collect(),
            None => None,
        })
    }

    /// Floating-point `ρ(x)`.
    pub fn real_matrix(&self, z: &[i64]) -> [f64; 4] {
        let mut m = [0.0; 4];
        for (n, r) in z.iter().zip(&self.real) {
            if *n != 0 {
                for e in 0..4 {
                    m[e] += *n as f64 * r[e];
                }
            }
        }
        m
    }

    /// Floating-point `cosh d(ρ(x)·i, i)`.
    pub fn cosh_dist(&self, z: &[i64]) -> f64 {
        self.real_matrix(z).iter().map(|v| v * v).sum::<f64>() / 2.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quat::QuatAlgebra;

    fn lat() -> Lattice {
        let alg = QuatAlgebra::over_q(Rational::from_integer(2.into()), Rational::from_integer(3.into())).unwrap();
        Lattice::new(&QuatOrder::natural(&alg).unwrap()).unwrap()
    }

    #[test]
    fn multiplication_matches_quaternions() {
        let l = lat();
        let x = vec![3, 2, 0, 0];
        let y = vec![0, 1, 1, 1];
        let p = l.mul(&x, &y).unwrap();
        let q = l.element(&x).mul(&l.element(&y)).unwrap();
        assert_eq!(l.coordinates(&q).unwrap().unwrap(), p);
        assert_eq!(l.one, vec![1, 0, 0, 0]);
    }

    #[test]
    fn norm_forms() {
        let l = lat();
        assert!(l.has_unit_norm(&[3, 2, 0, 0]));
        assert!(l.has_unit_norm(&[0, 1, 1, 1]));
        assert!(!l.has_unit_norm(&[1, 1, 0, 0]));
        let x = vec![2, 0, 1, 0];
        assert_eq!(l.mul(&x, &l.conj(&x)).unwrap(), l.one);
    }

    #[test]
    fn canonical_sign() {
        assert_eq!(Lattice::canonical(vec![0, -1, 2, 0]), vec![0, 1, -2, 0]);
        assert_eq!(Lattice::canonical(vec![0, 1, -2, 0]), vec![0, 1, -2, 0]);
    }
}
