use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use super::lattice::{Lattice, ZCoords};
use super::{ElementRecord, GroupGenError};
use crate::exact::{format_rational, Interval, Precision, Rational, DEFAULT_PREC};
use crate::hyp::{classify, IsometryKind};
use crate::quat::{embed_matrix, QuatElement, QuatOrder};

/// Default cap on the number of coefficient vectors scanned.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Clone, Debug)]
pub struct EnumerationJob {
    pub order: QuatOrder,
    /// Norm cap `N`.
    pub cap: Rational,
    /// Keep one representative of `±x`.
    pub projective: bool,
    pub budget: u64,
    pub precision: Precision,
}

impl EnumerationJob {
    pub fn new(order: &QuatOrder, cap: Rational) -> Result<Self, GroupGenError> {
        if cap < Rational::one() {
            return Err(GroupGenError::CapTooSmall(format_rational(&cap)));
        }
        Ok(EnumerationJob {
            order: order.clone(),
            cap,
            projective: true,
            budget: DEFAULT_BUDGET,
            precision: Precision::default(),
        })
    }
}

impl Serialize for EnumerationJob {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("EnumerationJob", 5)?;
        st.serialize_field("algebra", &**self.order.algebra())?;
        st.serialize_field("order_basis", &self.order)?;
        st.serialize_field("cap", &format_rational(&self.cap))?;
        st.serialize_field("projective", &self.projective)?;
        st.serialize_field("budget", &self.budget)?;
        st.end()
    }
}

/// A unit whose norm could not be compared with the cap at the precision cap.
#[derive(Clone, Debug, Serialize)]
pub struct UndecidedNorm {
    pub z: ZCoords,
    pub coords: String,
    pub norm: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Enumeration {
    pub job: EnumerationJob,
    /// Half-widths of the integer coefficient box.
    pub coefficient_box: Vec<i64>,
    pub candidates: u64,
    pub records: Vec<ElementRecord>,
    pub undecided: Vec<UndecidedNorm>,
}

/// Interval Gauss–Jordan inverse; `None` when a pivot is not separated from 0.
fn interval_inverse(m: &[Vec<Interval>]) -> Option<Vec<Vec<Interval>>> {
    let n = m.len();
    let prec = m[0][0].prec();
    let mut a: Vec<Vec<Interval>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| Interval::from_int(i64::from(i == j), prec)));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| a[x][col].mid().abs().cmp(&a[y][col].mid().abs()).then(y.cmp(&x)))?;
        a.swap(col, piv);
        if a[col][col].contains_zero() {
            return None;
        }
        let p = a[col][col].clone();
        for v in a[col].iter_mut() {
            *v = v.div(&p).ok()?;
        }
        for r in 0..n {
            if r != col {
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

/// Rows: the four entries of `ρ(x)`, then at each other real place the
/// weighted coordinates `√|a^α b^β|·x_c`, each bounded by 1 when `nrd(x) = 1`.
fn constraint_matrix(lat: &Lattice, prec: u32) -> Result<Vec<Vec<Interval>>, GroupGenError> {
    let alg = lat.order.algebra();
    let k = alg.field();
    let width = Rational::new(BigInt::one(), BigInt::one() << (prec + 8));
    let mut rows = vec![vec![]; lat.dim];
    for x in &lat.basis {
        let m = embed_matrix(x, prec)?;
        for (r, e) in m.entries().iter().enumerate() {
            rows[r].push(e.clone());
        }
        let mut r = 4;
        for place in (0..k.degree()).filter(|&p| p != k.place_index()) {
            let a = alg.a().embed_at(place, &width).abs().sqrt()?;
            let b = alg.b().embed_at(place, &width).abs().sqrt()?;
            let w = [Interval::from_int(1, prec), a.clone(), b.clone(), &a * &b];
            for (c, wc) in x.coords().iter().zip(w) {
                rows[r].push(&c.embed_at(place, &width) * &wc);
                r += 1;
            }
        }
    }
    Ok(rows)
}

fn coefficient_box(lat: &Lattice, cap: &Rational, precision: &Precision) -> Result<Vec<i64>, GroupGenError> {
    for prec in precision.ladder().map(|p| p.max(DEFAULT_PREC)) {
        let m = constraint_matrix(lat, prec)?;
        let Some(inv) = interval_inverse(&m) else { continue };
        let bounds: Vec<Interval> = (0..lat.dim)
            .map(|j| if j < 4 { Interval::point(cap.clone(), prec) } else { Interval::from_int(1, prec) })
            .collect();
        return inv
            .iter()
            .map(|row| {
                let s = row
                    .iter()
                    .zip(&bounds)
                    .fold(Interval::from_int(0, prec), |acc, (e, b)| &acc + &(&e.abs() * b));
                s.hi().floor().to_integer().to_i64().ok_or(GroupGenError::CoordinateOverflow)
            })
            .collect();
    }
    Err(GroupGenError::BoxUncertified(precision.cap))
}

enum NormCheck {
    Inside { boundary: bool },
    Outside,
    Undecided(Interval),
}

fn check_norm(x: &QuatElement, cap: &Rational, precision: &Precision) -> Result<NormCheck, GroupGenError> {
    let mut last = None;
    for p in precision.ladder() {
        let m = embed_matrix(x, p)?;
        let n = m.sup_norm();
        let c = Interval::point(cap.clone(), p);
        if n.certainly_gt(&c) {
            return Ok(NormCheck::Outside);
        }
        if n.certainly_lt(&c) {
            return Ok(NormCheck::Inside { boundary: false });
        }
        if n.certainly_le(&c) && m.entries().iter().any(|e| e.is_point() && &e.lo().abs() == cap) {
            return Ok(NormCheck::Inside { boundary: true });
        }
        last = Some(n);
    }
    Ok(NormCheck::Undecided(last.expect("nonempty precision ladder")))
}

pub(crate) fn make_record(x: QuatElement, z: ZCoords, boundary: bool) -> Result<ElementRecord, GroupGenError> {
    let matrix = embed_matrix(&x, DEFAULT_PREC)?;
    let class = classify(&matrix)?;
    let translation_length = match (&class.kind, &class.u) {
        (IsometryKind::Hyperbolic, Some(u)) => {
            Some(u.interval(DEFAULT_PREC + 16).abs().ln()?.mul_rat(&Rational::from_integer(2.into())).round_to(DEFAULT_PREC))
        }
        _ => None,
    };
    Ok(ElementRecord {
        z,
        trace: x.trd(),
        norm: matrix.sup_norm(),
        coords: x,
        matrix,
        boundary,
        class,
        translation_length,
    })
}

fn scan(lat: &Lattice, bounds: &[i64], projective: bool) -> Vec<ZCoords> {
    let dim = lat.dim;
    let last = dim - 1;
    (-bounds[0]..=bounds[0])
        .into_par_iter()
        .flat_map_iter(|first| {
            let mut out = vec![];
            let mut z: Vec<i64> = bounds.iter().map(|b| -b).collect();
            z[0] = first;
            loop {
                lat.complete_last(&mut z, bounds[last], &mut out);
                let mut i = last - 1;
                loop {
                    if i == 0 {
                        if projective {
                            out.retain(|z| z.iter().find(|v| **v != 0).is_some_and(|v| *v > 0));
                        }
                        return out;
                    }
                    if z[i] < bounds[i] {
                        z[i] += 1;
                        break;
                    }
                    z[i] = -bounds[i];
                    i -= 1;
                }
            }
        })
        .collect()
}

/// Every `x ∈ O¹` with `max |ρ(x)ᵢⱼ| ≤ N`, sorted by integer coordinates.
pub fn enumerate_unit_ball(job: &EnumerationJob) -> Result<Enumeration, GroupGenError> {
    if job.cap < Rational::one() {
        return Err(GroupGenError::CapTooSmall(format_rational(&job.cap)));
    }
    let alg = job.order.algebra();
    if !alg.is_fuchsian() {
        return Err(GroupGenError::NotFuchsian);
    }
    let lat = Lattice::new(&job.order)?;
    let bounds = coefficient_box(&lat, &job.cap, &job.precision)?;
    let size = bounds.iter().fold(BigInt::one(), |acc, b| acc * BigInt::from(2 * b + 1));
    if size > BigInt::from(job.budget) {
        return Err(GroupGenError::BoxOverflow {
            candidates: size.to_string(),
            budget: job.budget,
        });
    }
    let candidates = size.to_u64().expect("within budget");
    let mut units = scan(&lat, &bounds, job.projective);
    units.sort();
    let checked: Vec<Result<Option<Result<ElementRecord, UndecidedNorm>>, GroupGenError>> = units
        .into_par_iter()
        .map(|z| {
            let x = lat.element(&z);
            Ok(match check_norm(&x, &job.cap, &job.precision)? {
                NormCheck::Outside => None,
                NormCheck::Inside { boundary } => Some(Ok(make_record(x, z, boundary)?)),
                NormCheck::Undecided(n) => Some(Err(UndecidedNorm {
                    coords: x.to_string(),
                    z,
                    norm: n.to_string(),
                })),
            })
        })
        .collect();
    let mut records = vec![];
    let mut undecided = vec![];
    for c in checked {
        match c? {
            Some(Ok(r)) => records.push(r),
            Some(Err(u)) => undecided.push(u),
            None => {}
        }
    }
    Ok(Enumeration {
        job: job.clone(),
        coefficient_box: bounds,
        candidates,
        records,
        undecided,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quat::QuatAlgebra;

    fn job(cap: i64) -> EnumerationJob {
        let alg = QuatAlgebra::over_q(Rational::from_integer(2.into()), Rational::from_integer(3.into())).unwrap();
        EnumerationJob::new(&QuatOrder::natural(&alg).unwrap(), Rational::from_integer(cap.into())).unwrap()
    }

    fn zs(e: &Enumeration) -> Vec<ZCoords> {
        e.records.iter().map(|r| r.z.clone()).collect()
    }

    #[test]
    fn identity_only_at_cap_one() {
        let e = enumerate_unit_ball(&job(1)).unwrap();
        assert_eq!(zs(&e), vec![vec![1, 0, 0, 0]]);
        let mut j = job(1);
        j.projective = false;
        assert_eq!(zs(&enumerate_unit_ball(&j).unwrap()), vec![vec![-1, 0, 0, 0], vec![1, 0, 0, 0]]);
    }

    #[test]
    fn cap_three() {
        let e = enumerate_unit_ball(&job(3)).unwrap();
        let z = zs(&e);
        assert_eq!(z.len(), 5);
        assert!(z.contains(&vec![0, 1, 1, 1]));
        assert!(z.contains(&vec![2, 0, 1, 0]));
        assert!(!z.contains(&vec![3, 2, 0, 0]));
        let r = e.records.iter().find(|r| r.z == vec![2, 0, 1, 0]).unwrap();
        assert!(r.boundary);
        assert_eq!(r.trace.to_string(), "4");
    }

    #[test]
    fn box_is_rigorous() {
        let e = super::super::fixtures::ball50();
        // analytic box: N, N/√2, 2N/3, 2N/(3√2)
        assert_eq!(e.coefficient_box, vec![50, 35, 33, 23]);
    }

    #[test]
    fn cap_below_one_rejected() {
        let alg = QuatAlgebra::over_q(Rational::from_integer(2.into()), Rational::from_integer(3.into())).unwrap();
        let o = QuatOrder::natural(&alg).unwrap();
        assert!(matches!(
            EnumerationJob::new(&o, Rational::new(1.into(), 2.into())),
            Err(GroupGenError::CapTooSmall(_))
        ));
    }

    #[test]
    fn counts_match_independent_scan() {
        // brute-force scan with exact integer tests, computed offline
        for (cap, proj, mat) in [(1, 1, 2), (3, 5, 10), (6, 13, 26), (10, 39, 78)] {
            let mut j = job(cap);
            assert_eq!(enumerate_unit_ball(&j).unwrap().records.len(), proj, "N = {cap}");
            j.projective = false;
            assert_eq!(enumerate_unit_ball(&j).unwrap().records.len(), mat, "N = {cap}");
        }
        assert_eq!(super::super::fixtures::ball50().records.len(), 1025);
    }

    #[test]
    fn balls_are_nested() {
        let small = zs(&enumerate_unit_ball(&job(3)).unwrap());
        let big = zs(&enumerate_unit_ball(&job(6)).unwrap());
        assert!(small.iter().all(|z| big.contains(z)));
    }

    #[test]
    fn budget_is_enforced() {
        let mut j = job(50);
        j.budget = 1000;
        assert!(matches!(enumerate_unit_ball(&j), Err(GroupGenError::BoxOverflow { .. })));
    }

    /// `p + q√r ≤ n`, exactly.
    fn le_surd(p: i64, q: i64, r: i64, n: i64) -> bool {
        let m = n - p;
        match (q >= 0, m >= 0) {
            (true, false) => false,
            (true, true) => q * q * r <= m * m,
            (false, true) => true,
            (false, false) => q * q * r >= m * m,
        }
    }

    fn naive(cap: i64) -> Vec<ZCoords> {
        // |x0|, |x2| ≤ N and |x1|, |x3| ≤ N/√2 inside the ball
        let r = 12;
        let mut out = vec![];
        for x0 in -r..=r {
            for x1 in -r..=r {
                for x2 in -r..=r {
                    for x3 in -r..=r {
                        if x0 * x0 - 2 * x1 * x1 - 3 * x2 * x2 + 6 * x3 * x3 != 1 {
                            continue;
                        }
                        let entries = [(x0, x1), (x0, -x1), (x2, x3), (3 * x2, -3 * x3)];
                        if entries.iter().all(|&(p, q)| le_surd(p, q, 2, cap) && le_surd(-p, -q, 2, cap)) {
                            let z = vec![x0, x1, x2, x3];
                            if z.iter().find(|v| **v != 0).is_some_and(|v| *v > 0) {
                                out.push(z);
                            }
                        }
                    }
                }
            }
        }
        out.sort();
        out
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(10))]
        #[test]
        fn complete_against_naive_scan(cap in 1i64..=10) {
            let got = zs(&enumerate_unit_ball(&job(cap)).unwrap());
            proptest::prop_assert_eq!(got, naive(cap));
        }
    }
}
