use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;
use serde_json::{json, Value};

use super::{command_name, CliError, Command, JobConfig, LambdaPreset, Num};
use crate::bounds::{
    compute_safety_constant, delta_zero, generator_bound, generator_bound_csv, is_salem, mahler_measure,
    trace_mahler_check, trace_window, voutier_lower_bound, BoundInputs, Quantity, SpectralData, Variant,
};
use crate::exact::{format_rational, FieldElement, NumberField, Precision, Rational};
use crate::groupgen::{
    enumerate_unit_ball, invariant_trace_check, records_csv, trace_census, verify_generation, Enumeration,
    EnumerationJob, GenerationOptions, TargetStatus, DEFAULT_BUDGET,
};
use crate::quat::{hilbert_symbol, ramification_set, relevant_primes, BuiltAlgebra, Place, ScalarSpec};

pub(super) struct CmdOutput {
    pub results: Value,
    pub violations: Vec<Value>,
    pub inconclusive: Vec<String>,
    pub csv: Option<String>,
    pub timings: BTreeMap<String, f64>,
}

impl CmdOutput {
    fn new(results: Value) -> Self {
        CmdOutput {
            results,
            violations: vec![],
            inconclusive: vec![],
            csv: None,
            timings: BTreeMap::new(),
        }
    }
}

struct Clock(BTreeMap<String, f64>, Instant);

impl Clock {
    fn start() -> Self {
        Clock(BTreeMap::new(), Instant::now())
    }

    fn lap(&mut self, stage: &str) {
        self.0.insert(stage.to_string(), self.1.elapsed().as_secs_f64());
        self.1 = Instant::now();
    }
}

fn need<'a, T>(v: &'a Option<T>, key: &str, c: Command) -> Result<&'a T, CliError> {
    v.as_ref()
        .ok_or_else(|| CliError::BadInput(format!("{} needs {key}", command_name(c))))
}

fn rational(n: &Option<Num>, key: &str) -> Result<Rational, CliError> {
    match n {
        Some(v) => v.parse(key),
        None => Err(CliError::BadInput(format!("missing {key}"))),
    }
}

fn one() -> Option<Num> {
    Some(Num::Str("1".into()))
}

fn build(cfg: &JobConfig, c: Command) -> Result<BuiltAlgebra, CliError> {
    Ok(need(&cfg.algebra, "an algebra (a and b, or algebra)", c)?.build()?)
}

fn rational_of(s: &ScalarSpec, key: &str) -> Result<Rational, CliError> {
    match s {
        ScalarSpec::Int(n) => Ok(Rational::from_integer((*n).into())),
        ScalarSpec::Rational(t) => Num::Str(t.clone()).parse(key),
        ScalarSpec::Coords(_) => Err(CliError::BadInput(format!("{key} must be rational"))),
    }
}

/// Fills defaults and checks presence and ranges of every required key.
pub(super) fn defaults(command: Command, c: &mut JobConfig) -> Result<(), CliError> {
    let sweep = |c: &JobConfig| -> Result<(), CliError> {
        let d = *need(&c.d, "d", command)?;
        if d < 1 {
            return Err(CliError::BadInput("d must be at least 1".into()));
        }
        if c.d_to.is_some_and(|t| t < d) {
            return Err(CliError::BadInput("d_to must be at least d".into()));
        }
        Ok(())
    };
    match command {
        Command::Bound => {
            sweep(c)?;
            need(&c.vol, "vol", command)?;
            let variant = *c.variant.get_or_insert(Variant::General);
            c.leading = c.leading.take().or_else(one);
            c.safety = c.safety.take().or_else(one);
            match (&c.lambda, &c.lambda_preset) {
                (Some(_), Some(_)) => return Err(CliError::BadInput("give lambda or lambda_preset, not both".into())),
                (None, None) if variant == Variant::Congruence => c.lambda_preset = Some(LambdaPreset::Congruence),
                (None, None) => return Err(CliError::BadInput("bound needs lambda or lambda_preset".into())),
                _ => {}
            }
            if variant == Variant::Salem {
                need(&c.m_s, "m_S", command)?;
            } else if c.m_s.is_some() {
                return Err(CliError::BadInput("m_S applies only to the salem variant".into()));
            }
        }
        Command::Window => sweep(c)?,
        Command::Mahler => {
            if c.poly.is_none() && c.trace.is_none() {
                return Err(CliError::BadInput("mahler needs poly or trace".into()));
            }
            if c.algebra.is_some() {
                build(c, command)?;
            }
        }
        Command::Salem => {
            need(&c.poly, "poly", command)?;
        }
        Command::Hilbert => {
            let alg = need(&c.algebra, "a and b", command)?;
            if alg.field_minpoly.degree() != 1 {
                return Err(CliError::BadInput("hilbert works over the rationals".into()));
            }
            rational_of(&alg.a, "a")?;
            rational_of(&alg.b, "b")?;
        }
        Command::Enumerate | Command::TraceCensus | Command::Generators => {
            let built = build(c, command)?;
            c.projective.get_or_insert(true);
            c.budget.get_or_insert(DEFAULT_BUDGET);
            c.precision_cap.get_or_insert(Precision::default().cap);
            match command {
                Command::Enumerate => {
                    need(&c.cap, "cap", command)?;
                }
                Command::TraceCensus => {
                    need(&c.cap, "cap", command)?;
                    let d = *c.d.get_or_insert(built.algebra.field().degree() as u64);
                    if d < 1 {
                        return Err(CliError::BadInput("d must be at least 1".into()));
                    }
                }
                _ => {
                    need(&c.gen_cap, "gen_cap", command)?;
                    need(&c.target_cap, "target_cap", command)?;
                    let g = GenerationOptions::default();
                    c.max_word_length.get_or_insert(g.max_word_length);
                    c.node_cap.get_or_insert(g.node_cap);
                    c.greedy.get_or_insert(g.greedy);
                }
            }
        }
        Command::SafetyConstant => {
            if *c.d_max.get_or_insert(1_000_000) < 1 {
                return Err(CliError::BadInput("d_max must be at least 1".into()));
            }
        }
    }
    Ok(())
}

pub(super) fn execute(cfg: &JobConfig) -> Result<CmdOutput, CliError> {
    let command = cfg.command.expect("resolved");
    let mut clock = Clock::start();
    let mut out = match command {
        Command::Bound => bound(cfg)?,
        Command::Window => window(cfg)?,
        Command::Mahler => mahler(cfg)?,
        Command::Salem => salem(cfg)?,
        Command::Hilbert => hilbert(cfg)?,
        Command::Enumerate => enumerate(cfg, &mut clock)?,
        Command::TraceCensus => census(cfg, &mut clock)?,
        Command::Generators => generators(cfg, &mut clock)?,
        Command::SafetyConstant => safety(cfg)?,
    };
    clock.lap("total");
    out.timings = clock.0;
    Ok(out)
}

fn degrees(cfg: &JobConfig) -> std::ops::RangeInclusive<u64> {
    let d = cfg.d.expect("resolved");
    d..=cfg.d_to.unwrap_or(d)
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn bound(cfg: &JobConfig) -> Result<CmdOutput, CliError> {
    let spectral = match (&cfg.lambda, cfg.lambda_preset) {
        (_, Some(LambdaPreset::Congruence)) => SpectralData::congruence(),
        (Some(l), None) => SpectralData::from_lambda1(l.parse("lambda")?)?,
        (None, None) => unreachable!("resolved"),
    };
    let variant = cfg.variant.expect("resolved");
    let mut reports = vec![];
    for d in degrees(cfg) {
        let mut inputs = BoundInputs::new(d, spectral.clone());
        inputs.vol = rational(&cfg.vol, "vol")?;
        inputs.leading = rational(&cfg.leading, "C")?;
        inputs.safety = rational(&cfg.safety, "c")?;
        inputs.m_s = cfg.m_s.as_ref().map(|m| m.parse("m_S")).transpose()?;
        reports.push(generator_bound(&inputs, variant)?);
    }
    let mut out = CmdOutput::new(json!({ "reports": to_value(&reports) }));
    for r in &reports {
        if !r.substitution.consistent {
            out.violations.push(json!({
                "check": "exponent_substitution",
                "d": r.inputs.d,
                "detail": format!(
                    "substituting {} gives {}/s, stated {}/s",
                    r.substitution.delta_form,
                    format_rational(&r.substitution.derived_coefficient_over_s),
                    format_rational(&r.substitution.stated_coefficient_over_s)
                ),
            }));
        }
    }
    out.csv = Some(generator_bound_csv(&reports));
    Ok(out)
}

fn window(cfg: &JobConfig) -> Result<CmdOutput, CliError> {
    let mut rows = vec![];
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record(["d", "lower", "upper", "elliptic_max", "elliptic_max_m", "delta0", "voutier_2d"])
        .expect("in-memory csv");
    for d in degrees(cfg) {
        let tw = trace_window(d)?;
        let d0 = Quantity::enclosed(delta_zero(d)?);
        let v = voutier_lower_bound(2 * d)?;
        w.write_record([
            d.to_string(),
            tw.lower.interval(64).decimal(10),
            tw.upper.decimal(),
            tw.corrected_elliptic_max.value.interval(64).decimal(10),
            tw.corrected_elliptic_max.m.to_string(),
            d0.decimal(),
            v.value.decimal(),
        ])
        .expect("in-memory csv");
        rows.push(json!({ "d": d, "window": to_value(&tw), "delta0": to_value(&d0), "voutier_2d": to_value(&v) }));
    }
    let mut out = CmdOutput::new(json!({ "windows": rows }));
    out.csv = Some(String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8"));
    Ok(out)
}

fn mahler(cfg: &JobConfig) -> Result<CmdOutput, CliError> {
    let mut results = serde_json::Map::new();
    if let Some(p) = &cfg.poly {
        let width = Rational::new(BigInt::one(), BigInt::one() << 96);
        let m = Quantity::enclosed(mahler_measure(p, &width)?);
        results.insert("poly".into(), to_value(p));
        results.insert("mahler_measure".into(), to_value(&m));
    }
    if let Some(t) = &cfg.trace {
        let k = match &cfg.algebra {
            Some(a) => a.build()?.algebra.field().clone(),
            None => NumberField::rationals(),
        };
        let t: FieldElement = t.to_element(&k)?;
        results.insert("trace_check".into(), to_value(&trace_mahler_check(&t)?));
    }
    Ok(CmdOutput::new(Value::Object(results)))
}

fn salem(cfg: &JobConfig) -> Result<CmdOutput, CliError> {
    let p = cfg.poly.as_ref().expect("resolved");
    let t = is_salem(p)?;
    Ok(CmdOutput::new(json!({ "poly": to_value(p), "salem": to_value(&t) })))
}

fn hilbert(cfg: &JobConfig) -> Result<CmdOutput, CliError> {
    let alg = cfg.algebra.as_ref().expect("resolved");
    let a = rational_of(&alg.a, "a")?;
    let b = rational_of(&alg.b, "b")?;
    let mut places: Vec<Place> = relevant_primes(&a, &b)?.into_iter().map(Place::Prime).collect();
    places.push(Place::Infinity);
    let mut symbols = vec![];
    let mut product = 1i8;
    for p in &places {
        let s = hilbert_symbol(&a, &b, p)?;
        product *= s;
        symbols.push(json!({ "place": p.to_string(), "symbol": s }));
    }
    let ram = ramification_set(&a, &b)?;
    let mut out = CmdOutput::new(json!({
        "a": format_rational(&a),
        "b": format_rational(&b),
        "symbols": symbols,
        "product": product,
        "ramification": to_value(&ram),
        "discriminant": ram.discriminant().to_string(),
        "division": ram.is_division(),
    }));
    if product != 1 {
        out.violations.push(json!({ "check": "product_formula", "detail": format!("product of symbols is {product}") }));
    }
    Ok(out)
}

fn enumeration(cfg: &JobConfig, built: &BuiltAlgebra, cap: &Option<Num>, key: &str) -> Result<Enumeration, CliError> {
    let mut job = EnumerationJob::new(&built.order, rational(cap, key)?)?;
    job.projective = cfg.projective.expect("resolved");
    job.budget = cfg.budget.expect("resolved");
    job.precision = Precision::with_cap(cfg.precision_cap.expect("resolved"));
    Ok(enumerate_unit_ball(&job)?)
}

fn summary(e: &Enumeration) -> Value {
    json!({
        "coefficient_box": e.coefficient_box,
        "candidates": e.candidates,
        "count": e.records.len(),
        "undecided": to_value(&e.undecided),
    })
}

fn undecided(e: &Enumeration, what: &str) -> Option<String> {
    (!e.undecided.is_empty()).then(|| format!("{} {what} norms undecided at the precision cap", e.undecided.len()))
}

fn presentation(built: &BuiltAlgebra) -> Value {
    json!({
        "a": built.algebra.a().to_string(),
        "b": built.algebra.b().to_string(),
        "swapped": built.swapped,
    })
}

fn enumerate(cfg: &JobConfig, clock: &mut Clock) -> Result<CmdOutput, CliError> {
    let built = build(cfg, Command::Enumerate)?;
    let e = enumeration(cfg, &built, &cfg.cap, "cap")?;
    clock.lap("enumerate");
    let mut results = summary(&e);
    results["presentation"] = presentation(&built);
    results["records"] = to_value(&e.records);
    let mut out = CmdOutput::new(results);
    out.inconclusive.extend(undecided(&e, "record"));
    out.csv = Some(records_csv(&e.records));
    Ok(out)
}

fn census(cfg: &JobConfig, clock: &mut Clock) -> Result<CmdOutput, CliError> {
    let built = build(cfg, Command::TraceCensus)?;
    let e = enumeration(cfg, &built, &cfg.cap, "cap")?;
    clock.lap("enumerate");
    let report = trace_census(&e.records, cfg.d.expect("resolved"))?;
    let inv = invariant_trace_check(&e.records, built.algebra.field());
    clock.lap("census");
    let mut out = CmdOutput::new(json!({
        "presentation": presentation(&built),
        "enumeration": summary(&e),
        "census": to_value(&report),
        "invariant_trace": to_value(&inv),
    }));
    out.violations.extend(report.violations.iter().map(to_value));
    out.violations.extend(inv.failures.iter().map(|f| {
        let mut v = to_value(f);
        v["check"] = json!("invariant_trace");
        v
    }));
    out.inconclusive.extend(undecided(&e, "record"));
    out.csv = Some(records_csv(&e.records));
    Ok(out)
}

fn generators(cfg: &JobConfig, clock: &mut Clock) -> Result<CmdOutput, CliError> {
    let built = build(cfg, Command::Generators)?;
    let gens = enumeration(cfg, &built, &cfg.gen_cap, "gen_cap")?;
    let targets = enumeration(cfg, &built, &cfg.target_cap, "target_cap")?;
    clock.lap("enumerate");
    let opts = GenerationOptions {
        max_word_length: cfg.max_word_length.expect("resolved"),
        node_cap: cfg.node_cap.expect("resolved"),
        projective: cfg.projective.expect("resolved"),
        greedy: cfg.greedy.expect("resolved"),
    };
    let cert = verify_generation(&built.order, &gens.records, &targets.records, &opts)?;
    clock.lap("generate");
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record(["target", "z", "status", "length", "method", "minimal", "sign", "word"])
        .expect("in-memory csv");
    for e in &cert.entries {
        let z: Vec<String> = targets.records[e.target].z.iter().map(i64::to_string).collect();
        let word: Vec<String> = e.word.iter().flatten().map(i64::to_string).collect();
        w.write_record([
            e.target.to_string(),
            z.join(" "),
            to_value(&e.status).as_str().unwrap_or_default().to_string(),
            e.length.map(|l| l.to_string()).unwrap_or_default(),
            e.method.map(|m| to_value(&m).as_str().unwrap_or_default().to_string()).unwrap_or_default(),
            e.minimal.to_string(),
            e.sign.to_string(),
            word.join(" "),
        ])
        .expect("in-memory csv");
    }
    let mut out = CmdOutput::new(json!({
        "presentation": presentation(&built),
        "generating_ball": summary(&gens),
        "target_ball": summary(&targets),
        "certificate": to_value(&cert),
    }));
    out.inconclusive.extend(undecided(&gens, "generator"));
    out.inconclusive.extend(undecided(&targets, "target"));
    let open = cert.entries.iter().filter(|e| e.status == TargetStatus::Inconclusive).count();
    if open > 0 {
        out.inconclusive.push(format!(
            "{open} of {} targets not reached within word length {} and node cap {}",
            cert.entries.len(),
            opts.max_word_length,
            opts.node_cap
        ));
    }
    out.csv = Some(String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8"));
    Ok(out)
}

fn safety(cfg: &JobConfig) -> Result<CmdOutput, CliError> {
    let s = compute_safety_constant(cfg.d_max.expect("resolved"))?;
    Ok(CmdOutput::new(json!({ "safety_constant": to_value(&s) })))
}
