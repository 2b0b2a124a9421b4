//! Acceptance suite: one PASS/FAIL line per criterion.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use smallgens::bounds::{
    compute_safety_constant, decay_exponent, delta_zero, generator_bound, mahler_measure, trace_mahler_check,
    trace_window, voutier_lower_bound, BoundInputs, SpectralData, Variant,
};
use smallgens::cli::{run_job, JobConfig, EXIT_INCONCLUSIVE, EXIT_OK};
use smallgens::exact::{cyclotomic, parse_rational};
use smallgens::groupgen::{
    enumerate_unit_ball, invariant_trace_check, trace_census, verify_generation, Enumeration, EnumerationJob,
    GenerationOptions, TargetStatus,
};
use smallgens::hyp::ElementOrder;
use smallgens::quat::{hilbert_symbol, ramification_set, Place, QuatAlgebra, QuatElement, QuatOrder};
use smallgens::{IntPolynomial, IsometryKind, Rational};

fn q(s: &str) -> Rational {
    parse_rational(s).unwrap()
}

fn f(x: f64) -> Rational {
    Rational::from_float(x).unwrap()
}

fn within(label: &str, got: f64, want: f64, tol: f64) {
    assert!((got - want).abs() <= tol, "{label}: got {got}, want {want} ± {tol}");
}

fn in_time(label: &str, start: Instant, limit: Duration) {
    let t = start.elapsed();
    assert!(t < limit, "{label}: {t:?} exceeds {limit:?}");
}

fn order23() -> QuatOrder {
    QuatOrder::natural(&QuatAlgebra::over_q(q("2"), q("3")).unwrap()).unwrap()
}

fn ball(order: &QuatOrder, cap: &str) -> Enumeration {
    enumerate_unit_ball(&EnumerationJob::new(order, q(cap)).unwrap()).unwrap()
}

fn exponents() {
    let t = Instant::now();
    let spectral = SpectralData::new(q("975/4096")).unwrap();
    assert_eq!(decay_exponent(&spectral).exact(), Some(&q("25/32")));
    let mut inputs = BoundInputs::new(1, spectral);
    inputs.vol = q("1");
    let r = generator_bound(&inputs, Variant::Congruence).unwrap();
    assert_eq!(r.base_exponent.value.exact(), Some(&q("384/5")));
    assert_eq!(r.vol_exponent.value.exact(), Some(&q("192/25")));
    in_time("runtime", t, Duration::from_secs(1));
}

fn substitution() {
    let t = Instant::now();
    let mut inputs = BoundInputs::new(2, SpectralData::new(q("1/4")).unwrap());
    inputs.vol = q("1");
    inputs.leading = q("1");
    inputs.safety = q("1");
    let r = generator_bound(&inputs, Variant::General).unwrap();
    let s = &r.substitution;
    assert!(s.consistent);
    assert_eq!(s.derived_coefficient_over_s, s.stated_coefficient_over_s);
    assert_eq!(s.derived_coefficient_over_s, q("60"));
    assert_eq!(r.internal_delta_exponent.coefficient_over_s, q("-30"));
    assert_eq!(r.internal_vol_exponent.coefficient_over_s, q("6"));
    assert_eq!(r.bound.exact(), Some(&Rational::from_integer(BigInt::from(2).pow(60u32))));
    in_time("runtime", t, Duration::from_secs(1));
}

fn mahler_suite() {
    let t = Instant::now();
    let width = Rational::new(BigInt::one(), BigInt::one() << 80);
    let m = |p: &IntPolynomial| mahler_measure(p, &width).unwrap();
    let lehmer = m(&IntPolynomial::from_i64(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]));
    assert!(lehmer.lo() >= &q("1.1762808") && lehmer.hi() <= &q("1.1762809"), "Lehmer {lehmer:?}");
    for n in [3, 12, 30] {
        let c = m(&cyclotomic(n));
        assert!(c.contains(&Rational::one()), "Phi_{n}");
        assert!(c.width() <= f(1e-12), "Phi_{n} width");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let monic = |rng: &mut ChaCha8Rng| {
        let deg = rng.gen_range(1..=5);
        let mut c: Vec<i64> = (0..deg).map(|_| rng.gen_range(-4..=4)).collect();
        c.push(1);
        IntPolynomial::from_i64(&c)
    };
    for _ in 0..100 {
        let (a, b) = (monic(&mut rng), monic(&mut rng));
        let ab = m(&(&a * &b));
        let prod = &m(&a) * &m(&b);
        assert!(ab.overlaps(&prod), "enclosures of M(ab) and M(a)M(b) disagree");
        within("multiplicativity", prod.to_f64() / ab.to_f64(), 1.0, 1e-9);
    }
    in_time("runtime", t, Duration::from_secs(10));
}

#[allow(clippy::approx_constant)]
fn window_numerics() {
    let t = Instant::now();
    let w = trace_window(2).unwrap();
    within("lower", w.lower.to_f64(), 1.4142136, 1e-7);
    within("upper", w.upper.to_f64(), 2.0000007, 1e-7);
    let v4 = voutier_lower_bound(4).unwrap();
    within("voutier(4)", v4.value.to_f64(), 0.0032701, 1e-7);
    assert!(v4.informative);
    let v2 = voutier_lower_bound(2).unwrap();
    assert!(!v2.informative && v2.value.to_f64() < 0.0, "voutier(2) not flagged");
    let d0 = delta_zero(2).unwrap().to_f64();
    within("delta_zero(2)", d0 / 3.342e-7, 1.0, 1e-2);
    within("delta_zero(2) oracle", d0 / 3.34170211154807e-7, 1.0, 1e-12);
    in_time("runtime", t, Duration::from_secs(1));
}

fn safety_constant() {
    let t = Instant::now();
    let s = compute_safety_constant(1_000_000).unwrap();
    assert_eq!(s.argmin_d, 2);
    within("c", s.c.to_f64() / 2.67336168923846e-7, 1.0, 1e-4);
    in_time("runtime", t, Duration::from_secs(30));
}

/// `p + q√r ≤ n` decided in integers.
fn le_surd(p: i64, q: i64, r: i64, n: i64) -> bool {
    let m = n - p;
    match (q >= 0, m >= 0) {
        (true, false) => false,
        (true, true) => q * q * r <= m * m,
        (false, true) => true,
        (false, false) => q * q * r >= m * m,
    }
}

/// Projective units of the natural order of (2,3) with all matrix entries
/// at most `n` in absolute value, by brute force over a box derived by hand.
fn naive_ball(n: i64) -> Vec<Vec<i64>> {
    let (r0, r1, r2, r3) = (50, 36, 34, 24);
    assert!(n <= 50);
    let mut out = vec![];
    for x0 in -r0..=r0 {
        for x1 in -r1..=r1 {
            let h = x0 * x0 - 2 * x1 * x1 - 1;
            for x2 in -r2..=r2 {
                for x3 in -r3..=r3 {
                    if h - 3 * x2 * x2 + 6 * x3 * x3 != 0 {
                        continue;
                    }
                    let entries = [(x0, x1), (x0, -x1), (x2, x3), (3 * x2, -3 * x3)];
                    if entries.iter().all(|&(p, q)| le_surd(p, q, 2, n) && le_surd(-p, -q, 2, n)) {
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

fn census() {
    let t = Instant::now();
    let order = order23();
    let e = ball(&order, "50");
    let mut got: Vec<Vec<i64>> = e.records.iter().map(|r| r.z.to_vec()).collect();
    got.sort();
    assert!(e.undecided.is_empty());
    assert_eq!(got, naive_ball(50), "enumeration differs from brute force");
    assert_eq!(got.len(), 1025);
    let two = Rational::from_integer(2.into());
    let mut min_hyp: Option<Rational> = None;
    for r in &e.records {
        let tr = r.trace.as_rational().expect("rational trace").clone();
        assert!(tr.is_integer() && (tr.to_integer() % BigInt::from(2)).is_zero(), "odd or non-integral trace {tr}");
        match r.class.kind {
            IsometryKind::Elliptic => {
                assert!(tr.is_zero());
                assert_eq!(r.order(), Some(ElementOrder::Finite(4)));
            }
            IsometryKind::Hyperbolic => {
                let a = tr.abs();
                assert!(a > two);
                min_hyp = Some(min_hyp.map_or(a.clone(), |m| m.min(a)));
            }
            IsometryKind::Central => assert!(r.z.iter().eq([1, 0, 0, 0].iter())),
            IsometryKind::Parabolic => panic!("parabolic element in a cocompact group"),
        }
    }
    let min_hyp = min_hyp.unwrap();
    assert_eq!(min_hyp, q("4"));
    let w = trace_window(1).unwrap();
    within("window upper", w.upper.to_f64(), 2.0000854, 1e-7);
    assert!(w.upper_interval().hi() <= &min_hyp);
    let report = trace_census(&e.records, 1).unwrap();
    assert!(report.passed(), "{:?}", report.violations);
    assert_eq!(
        (report.class_counts.central, report.class_counts.elliptic, report.class_counts.hyperbolic),
        (1, 32, 992)
    );
    let inv = invariant_trace_check(&e.records, order.algebra().field());
    assert!(inv.all_integral && inv.failures.is_empty());
    in_time("runtime", t, Duration::from_secs(300));
}

fn trace_mahler() {
    let t = Instant::now();
    let alg = QuatAlgebra::over_q(q("2"), q("3")).unwrap();
    let g = QuatElement::from_ints(&alg, [3, 2, 0, 0]);
    assert!(g.nrd().is_one());
    let c = trace_mahler_check(&g.trd()).unwrap();
    within("half-log form", c.half_log_form.to_f64(), 6.0, 1e-9);
    within("quarter-log form", c.quarter_log_form.to_f64(), 2.8284271, 1e-6);
    within("quarter-log form", c.quarter_log_form.to_f64(), 8f64.sqrt(), 1e-12);
    in_time("runtime", t, Duration::from_secs(1));
}

fn multiply_word(gens: &[QuatElement], word: &[i64]) -> QuatElement {
    let alg = gens[0].algebra();
    word.iter().fold(QuatElement::one(alg), |acc, &k| {
        let g = &gens[k.unsigned_abs() as usize - 1];
        acc.mul(&if k > 0 { g.clone() } else { g.conj() }).unwrap()
    })
}

fn generation() {
    let t = Instant::now();
    let order = order23();
    // Smallest cap past the norm-6 ball that the BFS oracle found generating.
    let gens = ball(&order, "29/4");
    let targets = ball(&order, "50");
    assert_eq!((gens.records.len(), targets.records.len()), (17, 1025));
    let opts = GenerationOptions { greedy: false, ..GenerationOptions::default() };
    let cert = verify_generation(&order, &gens.records, &targets.records, &opts).unwrap();
    assert!(cert.all_certified());
    assert_eq!(cert.max_length, Some(6));
    let mut hist = BTreeMap::new();
    let s: Vec<QuatElement> = gens.records.iter().map(|r| r.coords.clone()).collect();
    for e in &cert.entries {
        assert_eq!(e.status, TargetStatus::Certified);
        assert!(e.minimal);
        let word = e.word.as_ref().unwrap();
        assert!(word.len() <= 20);
        *hist.entry(word.len()).or_insert(0) += 1;
        let prod = multiply_word(&s, word);
        let target = &targets.records[e.target].coords;
        let want = if e.sign > 0 { target.clone() } else { target.neg() };
        assert_eq!(prod.coords(), want.coords(), "word {word:?} misses target {}", e.target);
    }
    let golden = BTreeMap::from([(0, 1), (1, 16), (2, 178), (3, 446), (4, 288), (5, 90), (6, 6)]);
    assert_eq!(hist, golden);

    let job = |w: usize| {
        let cfg = JobConfig::from_json(&format!(
            r#"{{"command":"generators","a":2,"b":3,"gen_cap":"29/4","target_cap":50,"workers":{w}}}"#
        ))
        .unwrap();
        let out = run_job(&cfg);
        assert_eq!(out.exit_code, EXIT_OK);
        (out.report.to_json(), out.csv.unwrap())
    };
    let one = job(1);
    assert_eq!(job(2), one, "2 workers differ from 1");
    assert_eq!(job(8), one, "8 workers differ from 1");

    let literal = run_job(
        &JobConfig::from_json(
            r#"{"command":"generators","a":2,"b":3,"gen_cap":6,"target_cap":50,"node_cap":20000}"#,
        )
        .unwrap(),
    );
    assert_eq!(literal.exit_code, EXIT_INCONCLUSIVE);
    let c = &literal.report.results["certificate"];
    assert_eq!((c["certified"].as_u64(), c["inconclusive"].as_u64()), (Some(421), Some(604)));
    println!("  norm-6 generating ball: 421 of 1025 certified, 604 inconclusive (exit 3)");
    in_time("runtime", t, Duration::from_secs(600));
}

/// Whether `z² = a x² + b y²` has a primitive solution modulo `p^k`, which
/// for squarefree `a`, `b` is enough for a `p`-adic solution by Hensel.
fn locally_solvable(a: i64, b: i64, p: i64) -> bool {
    let k = if p == 2 { 5 } else { 3 };
    let m = p.pow(k);
    let mut square = vec![false; m as usize];
    let mut unit_square = vec![false; m as usize];
    for z in 0..m {
        let s = (z * z % m) as usize;
        square[s] = true;
        if z % p != 0 {
            unit_square[s] = true;
        }
    }
    for x in 0..m {
        for y in 0..m {
            let v = (a * x * x + b * y * y).rem_euclid(m) as usize;
            let hit = if x % p != 0 || y % p != 0 { square[v] } else { unit_square[v] };
            if hit {
                return true;
            }
        }
    }
    false
}

fn hilbert() {
    let t = Instant::now();
    let primes = [2u64, 3, 5, 7];
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let squarefree = |rng: &mut ChaCha8Rng| {
        let mut v: i64 = if rng.gen_bool(0.5) { -1 } else { 1 };
        for p in primes {
            if rng.gen_bool(0.5) {
                v *= p as i64;
            }
        }
        v
    };
    for _ in 0..200 {
        let (a, b) = (squarefree(&mut rng), squarefree(&mut rng));
        let (qa, qb) = (Rational::from_integer(a.into()), Rational::from_integer(b.into()));
        let mut product = hilbert_symbol(&qa, &qb, &Place::Infinity).unwrap();
        assert_eq!(product == -1, a < 0 && b < 0);
        for p in primes {
            let s = hilbert_symbol(&qa, &qb, &Place::Prime(p)).unwrap();
            assert_eq!(s == 1, locally_solvable(a, b, p as i64), "({a},{b})_{p}");
            product *= s;
        }
        assert_eq!(hilbert_symbol(&qa, &qb, &Place::Prime(11)).unwrap(), 1);
        assert_eq!(product, 1, "product formula fails for ({a},{b})");
    }
    let r = ramification_set(&q("2"), &q("3")).unwrap();
    assert_eq!((r.finite_places.clone(), r.infinite_ramified), (vec![2, 3], false));
    assert!(!locally_solvable(2, 3, 2) && !locally_solvable(2, 3, 3) && locally_solvable(2, 3, 5));
    let r = ramification_set(&q("-1"), &q("-1")).unwrap();
    assert_eq!((r.finite_places.clone(), r.infinite_ramified), (vec![2], true));
    assert!(!locally_solvable(-1, -1, 2) && locally_solvable(-1, -1, 3));
    in_time("runtime", t, Duration::from_secs(30));
}

fn main() {
    let criteria: [(&str, fn()); 9] = [
        ("1 congruence exponents exact", exponents),
        ("2 exponent substitution", substitution),
        ("3 Mahler measure suite", mahler_suite),
        ("4 window and Voutier numerics", window_numerics),
        ("5 safety constant", safety_constant),
        ("6 census on (2,3), N = 50", census),
        ("7 trace and Mahler cross-check", trace_mahler),
        ("8 generation certificate", generation),
        ("9 Hilbert symbols", hilbert),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, run) in criteria {
        let t = Instant::now();
        match catch_unwind(AssertUnwindSafe(run)) {
            Ok(()) => println!("PASS {name} ({:.2} s)", t.elapsed().as_secs_f64()),
            Err(e) => {
                failed += 1;
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!("FAIL {name}: {msg}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
