use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::QuatError;
use crate::exact::Rational;

/// A place of ℚ.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Prime(u64),
    Infinity,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Prime(p) => write!(f, "{p}"),
            Place::Infinity => write!(f, "inf"),
        }
    }
}

impl std::str::FromStr for Place {
    type Err = QuatError;
    fn from_str(s: &str) -> Result<Self, QuatError> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Place::Infinity),
            t => {
                let p: u64 = t.parse().map_err(|_| QuatError::BadPlace(s.to_string()))?;
                if p < 2 || !is_prime(p) {
                    return Err(QuatError::BadPlace(s.to_string()));
                }
                Ok(Place::Prime(p))
            }
        }
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Largest prime factor found by trial division before giving up.
const TRIAL_LIMIT: u64 = 10_000_000;

/// Distinct prime factors of a nonzero integer.
pub(crate) fn prime_factors(n: &BigInt) -> Result<Vec<u64>, QuatError> {
    let mut m = n.abs();
    let mut out = vec![];
    let mut p = 2u64;
    while m > BigInt::one() {
        let pb = BigInt::from(p);
        if &pb * &pb > m {
            let last = m.to_u64().ok_or_else(|| QuatError::Factorization(n.to_string()))?;
            out.push(last);
            break;
        }
        if (&m % &pb).is_zero() {
            out.push(p);
            while (&m % &pb).is_zero() {
                m /= &pb;
            }
        }
        p += if p == 2 { 1 } else { 2 };
        if p > TRIAL_LIMIT {
            return Err(QuatError::Factorization(n.to_string()));
        }
    }
    Ok(out)
}

/// Integer in the same square class as the rational `r` (numerator times
/// denominator).
fn square_class_int(r: &Rational) -> BigInt {
    r.numer() * r.denom()
}

fn split_p(n: &BigInt, p: u64) -> (u32, BigInt) {
    let pb = BigInt::from(p);
    let mut v = 0;
    let mut u = n.clone();
    while (&u % &pb).is_zero() {
        u /= &pb;
        v += 1;
    }
    (v, u)
}

fn legendre(u: &BigInt, p: u64) -> i8 {
    let pb = BigInt::from(p);
    let r = u.mod_floor(&pb);
    if r.is_zero() {
        return 0;
    }
    let e = BigInt::from((p - 1) / 2);
    if r.modpow(&e, &pb).is_one() {
        1
    } else {
        -1
    }
}

fn mod8(u: &BigInt) -> u64 {
    u.mod_floor(&BigInt::from(8)).to_u64().unwrap()
}

/// Hilbert symbol `(a, b)_v` over ℚ by the closed forms.
pub fn hilbert_symbol(a: &Rational, b: &Rational, place: &Place) -> Result<i8, QuatError> {
    if a.is_zero() || b.is_zero() {
        return Err(QuatError::ZeroSymbolArgument);
    }
    let p = match place {
        Place::Infinity => {
            return Ok(if a.is_negative() && b.is_negative() { -1 } else { 1 });
        }
        Place::Prime(p) => *p,
    };
    let (alpha, u) = split_p(&square_class_int(a), p);
    let (beta, v) = split_p(&square_class_int(b), p);
    if p == 2 {
        let eps = |x: &BigInt| ((mod8(x) - 1) / 2) % 2;
        let omega = |x: &BigInt| {
            let r = mod8(x);
            ((r * r - 1) / 8) % 2
        };
        let e = eps(&u) * eps(&v) + alpha as u64 * omega(&v) + beta as u64 * omega(&u);
        return Ok(if e.is_multiple_of(2) { 1 } else { -1 });
    }
    let eps_p = (p - 1) / 2;
    let mut s: i8 = if (alpha as u64 * beta as u64 * eps_p).is_multiple_of(2) { 1 } else { -1 };
    if beta % 2 == 1 {
        s *= legendre(&u, p);
    }
    if alpha % 2 == 1 {
        s *= legendre(&v, p);
    }
    Ok(s)
}

/// Places where `(a, b)_ℚ` ramifies.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamificationSet {
    pub finite_places: Vec<u64>,
    pub infinite_ramified: bool,
}

impl RamificationSet {
    pub fn is_division(&self) -> bool {
        !self.finite_places.is_empty() || self.infinite_ramified
    }

    pub fn len(&self) -> usize {
        self.finite_places.len() + usize::from(self.infinite_ramified)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Discriminant: product of the ramified primes.
    pub fn discriminant(&self) -> BigInt {
        self.finite_places.iter().map(|&p| BigInt::from(p)).product()
    }
}

impl fmt::Display for RamificationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.finite_places.iter().map(|p| p.to_string()).collect();
        if self.infinite_ramified {
            parts.push("inf".into());
        }
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Primes dividing `2ab`, ascending.
pub fn relevant_primes(a: &Rational, b: &Rational) -> Result<Vec<u64>, QuatError> {
    let mut set = BTreeSet::from([2u64]);
    for n in [a.numer(), a.denom(), b.numer(), b.denom()] {
        set.extend(prime_factors(n)?);
    }
    Ok(set.into_iter().collect())
}

pub fn ramification_set(a: &Rational, b: &Rational) -> Result<RamificationSet, QuatError> {
    let mut finite_places = vec![];
    for p in relevant_primes(a, b)? {
        if hilbert_symbol(a, b, &Place::Prime(p))? == -1 {
            finite_places.push(p);
        }
    }
    let infinite_ramified = hilbert_symbol(a, b, &Place::Infinity)? == -1;
    Ok(RamificationSet {
        finite_places,
        infinite_ramified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{parse_rational, Rational};
    use proptest::prelude::*;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    /// Squarefree integer in the square class of `r`.
    fn squarefree(r: &Rational) -> i64 {
        let mut n = (r.numer() * r.denom()).to_i64().unwrap();
        let mut d = 2i64;
        while d * d <= n.abs() {
            while n % (d * d) == 0 {
                n /= d * d;
            }
            d += 1;
        }
        n
    }

    /// Independent oracle: a primitive solution of z² = a x² + b y² modulo
    /// p^k, which lifts to ℚ_p for squarefree a, b (k = 5 at 2, k = 3 odd).
    fn brute_force(a: &Rational, b: &Rational, p: u64) -> i8 {
        let (a, b) = (squarefree(a), squarefree(b));
        let k = if p == 2 { 5 } else { 3 };
        let m = (p as i64).pow(k);
        let squares: std::collections::HashSet<i64> = (0..m).map(|z| z * z % m).collect();
        for x in 0..m {
            for y in 0..m {
                if x % p as i64 == 0 && y % p as i64 == 0 {
                    continue;
                }
                let v = (a * x * x + b * y * y).rem_euclid(m);
                if squares.contains(&v) {
                    return 1;
                }
            }
        }
        -1
    }

    #[test]
    fn closed_forms_on_examples() {
        let (two, three) = (q("2"), q("3"));
        assert_eq!(hilbert_symbol(&two, &three, &Place::Prime(3)).unwrap(), -1);
        assert_eq!(hilbert_symbol(&two, &three, &Place::Prime(2)).unwrap(), -1);
        assert_eq!(hilbert_symbol(&two, &three, &Place::Prime(5)).unwrap(), 1);
        assert_eq!(hilbert_symbol(&q("-1"), &q("-1"), &Place::Infinity).unwrap(), -1);
        for p in [Place::Prime(2), Place::Prime(7), Place::Infinity] {
            assert_eq!(hilbert_symbol(&q("1"), &q("-13/5"), &p).unwrap(), 1);
        }
        assert!(hilbert_symbol(&q("0"), &three, &Place::Prime(2)).is_err());
    }

    #[test]
    fn closed_forms_match_brute_force() {
        let vals = ["-15", "-7", "-6", "-5", "-3", "-2", "-1", "1", "2", "3", "5", "6", "7", "10", "3/2", "-5/3"];
        for a in vals {
            for b in vals {
                for p in [2u64, 3, 5] {
                    let (qa, qb) = (q(a), q(b));
                    assert_eq!(
                        hilbert_symbol(&qa, &qb, &Place::Prime(p)).unwrap(),
                        brute_force(&qa, &qb, p),
                        "({a},{b})_{p}"
                    );
                }
            }
        }
    }

    #[test]
    fn ramification_examples() {
        let r = ramification_set(&q("-1"), &q("-1")).unwrap();
        assert_eq!(r.finite_places, vec![2]);
        assert!(r.infinite_ramified);
        let r = ramification_set(&q("2"), &q("3")).unwrap();
        assert_eq!(r.finite_places, vec![2, 3]);
        assert!(!r.infinite_ramified);
        assert_eq!(r.discriminant(), BigInt::from(6));
        let r = ramification_set(&q("1"), &q("7")).unwrap();
        assert!(r.is_empty() && !r.is_division());
    }

    proptest! {
        #[test]
        fn ramification_parity(an in -500i64..500, ad in 1i64..30, bn in -500i64..500, bd in 1i64..30) {
            prop_assume!(an != 0 && bn != 0);
            let a = Rational::new(an.into(), ad.into());
            let b = Rational::new(bn.into(), bd.into());
            prop_assert_eq!(ramification_set(&a, &b).unwrap().len() % 2, 0);
        }
    }
}
