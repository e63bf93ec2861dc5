use std::collections::BTreeMap;
use std::time::Instant;

use serde_json::{json, Value};

use formstr_core::fields::{Elem, FieldDescriptor};
use formstr_core::glcase::{ns_example_check, shift_decompose};
use formstr_core::poly::{identifiers, parse_in_ring, parse_poly, Exponents};
use formstr_core::strength::{
    astr, extension_lift_search, str_bounds, str_exact_finite_field_capped, Decomposition, Form, LiftOutcome,
    SearchLimits, StrengthCertificate,
};
use formstr_core::torsor::{SymShiftModel, TorsorAlgebra};
use formstr_core::verify;

use crate::args::{Command, ExtendArgs, FormArgs, GlcaseCommand, Mode, StrengthArgs, TorsorArgs, TorsorCommand, VerifyArgs, WitnessArgs};
use crate::cache::Cache;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// A usage or input error; reported on stderr with exit code 1.
#[derive(Debug)]
pub struct UsageError(pub String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type Res<T> = std::result::Result<T, UsageError>;

#[derive(serde::Serialize, serde::Deserialize, Debug, Clone, PartialEq)]
pub struct Envelope {
    pub command: String,
    pub inputs: Value,
    pub field: Option<String>,
    pub input: Option<String>,
    pub payload: Value,
    pub timing: Value,
    pub version: String,
    pub cache_hit: bool,
}

impl Envelope {
    /// A property report in the payload came back false.
    pub fn falsified(&self) -> bool {
        self.payload.get("passed") == Some(&Value::Bool(false))
    }
}

pub struct Ctx {
    pub cache: Option<Cache>,
}

struct Prepared {
    command: &'static str,
    inputs: Value,
    field: Option<String>,
    input: Option<String>,
    cacheable: bool,
}

pub fn run(cmd: &Command, ctx: &Ctx) -> Res<Envelope> {
    let start = Instant::now();
    let mut timing = serde_json::Map::new();
    let (prep, payload, hit) = match cmd {
        Command::Strength(a) => {
            let (form, prep) = prepare_form("strength", &a.form, json!({"mode": mode_name(a.mode), "max_s": a.max_s, "budget": a.budget}))?;
            cached(ctx, prep, || strength(a, &form))?
        }
        Command::Extend(a) => {
            let (form, prep) = prepare_form("extend", &a.form, json!({"target_s": a.target_s, "degree_budget": a.degree_budget}))?;
            cached(ctx, prep, || extend(a, &form))?
        }
        Command::Torsor(t) => torsor(t, ctx)?,
        Command::Glcase(g) => glcase(g, ctx)?,
        Command::Verify(v) => {
            let (payload, times) = run_verify(v);
            timing.insert("criteria_ms".into(), times);
            let prep = Prepared { command: "verify", inputs: json!({"only": v.only}), field: None, input: None, cacheable: false };
            (prep, payload, false)
        }
    };
    timing.insert("elapsed_ms".into(), json!(start.elapsed().as_secs_f64() * 1e3));
    Ok(Envelope {
        command: prep.command.into(),
        inputs: prep.inputs,
        field: prep.field,
        input: prep.input,
        payload,
        timing: Value::Object(timing),
        version: VERSION.into(),
        cache_hit: hit,
    })
}

fn cached(ctx: &Ctx, prep: Prepared, compute: impl FnOnce() -> Res<Value>) -> Res<(Prepared, Value, bool)> {
    let key = crate::cache::key(VERSION, prep.command, &prep.inputs);
    let cache = ctx.cache.as_ref().filter(|_| prep.cacheable);
    if let Some(v) = cache.and_then(|c| c.get(&key)) {
        return Ok((prep, v, true));
    }
    let v = compute()?;
    if let Some(c) = cache {
        c.put(&key, &v);
    }
    Ok((prep, v, false))
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Astr => "astr",
        Mode::Exact => "exact",
        Mode::Bounds => "bounds",
    }
}

/// Orders x2 before x10.
fn natural_key(s: &str) -> (String, u64, String) {
    let split = s.trim_end_matches(|c: char| c.is_ascii_digit()).len();
    let (head, digits) = s.split_at(split);
    (head.to_string(), digits.parse().unwrap_or(0), s.to_string())
}

fn parse_field(spec: &str) -> Res<FieldDescriptor> {
    FieldDescriptor::parse(spec).map_err(|e| UsageError(format!("field {spec:?}: {e}")))
}

fn prepare_form(command: &'static str, a: &FormArgs, extra: Value) -> Res<(Form, Prepared)> {
    let field = parse_field(&a.field)?;
    let vars = match &a.vars {
        Some(v) => v.clone(),
        None => {
            let mut v = identifiers(&a.form, &field)?;
            v.sort_by_key(|s| natural_key(s));
            v
        }
    };
    if vars.is_empty() {
        return Err(UsageError("the form has no variables".into()));
    }
    let poly = parse_poly(&a.form, &vars, &field)?;
    let form = Form::new(poly)?;
    let mut inputs = json!({"field": field.to_string(), "form": form.to_string(), "vars": vars});
    if let (Value::Object(m), Value::Object(e)) = (&mut inputs, extra) {
        m.extend(e);
    }
    let prep = Prepared { command, inputs, field: Some(field.to_string()), input: Some(form.to_string()), cacheable: true };
    Ok((form, prep))
}

fn witness_json(w: &Decomposition) -> Value {
    Value::Array(w.terms.iter().map(|(g, h)| json!([g.to_string(), h.to_string()])).collect())
}

fn certificate_json(c: &StrengthCertificate) -> Value {
    json!({
        "status": format!("{:?}", c.status),
        "str": c.value(),
        "lower": c.lower,
        "lower_reason": format!("{:?}", c.lower_reason),
        "upper": c.upper,
        "witness": witness_json(&c.witness),
        "field": c.field.to_string(),
        "extension": c.extension.as_ref().map(|(l, w)| json!({"field": l.to_string(), "witness": witness_json(w)})),
    })
}

fn strength(a: &StrengthArgs, f: &Form) -> Res<Value> {
    Ok(match a.mode {
        Mode::Astr => {
            let r = astr(f)?;
            json!({
                "mode": "astr",
                "astr": r.value,
                "route": format!("{:?}", r.route),
                "pattern": r.pattern.as_ref().map(|p| p.to_string()),
            })
        }
        Mode::Exact => {
            let c = str_exact_finite_field_capped(f, a.budget, a.max_s)?;
            json!({"mode": "exact", "certificate": certificate_json(&c)})
        }
        Mode::Bounds => {
            let limits = SearchLimits { max_s: a.max_s, ..SearchLimits::default() };
            let c = str_bounds(f, &limits)?;
            json!({"mode": "bounds", "certificate": certificate_json(&c)})
        }
    })
}

fn extend(a: &ExtendArgs, f: &Form) -> Res<Value> {
    let out = extension_lift_search(f, a.target_s, a.degree_budget, &SearchLimits::default())?;
    Ok(match out {
        LiftOutcome::Found(l) => json!({
            "found": true,
            "field": l.field.to_string(),
            "degree": l.degree,
            "witness": witness_json(&l.witness),
            "verified": l.witness.verify(&l.form),
        }),
        LiftOutcome::Exhausted { tried } => json!({
            "found": false,
            "tried": tried,
            "note": "no extension within the degree budget; inconclusive",
        }),
    })
}

fn torsor_algebra(t: &TorsorArgs) -> Res<(TorsorAlgebra, formstr_core::Poly, Value)> {
    let field = parse_field(&t.field)?;
    let base: Vec<&String> = t.base.iter().filter(|s| !s.is_empty()).collect();
    let alg = TorsorAlgebra::new(&field, &base, &t.fiber)?;
    let f = alg.parse(&t.f)?;
    let inputs = json!({"field": field.to_string(), "base": base, "fiber": t.fiber, "f": f.to_string()});
    Ok((alg, f, inputs))
}

fn parse_elem(field: &FieldDescriptor, s: &str) -> Res<Elem> {
    let p = parse_poly(s, &[] as &[&str], field)?;
    p.as_constant().ok_or_else(|| UsageError(format!("{s:?} is not a field element")))
}

fn torsor(t: &TorsorCommand, ctx: &Ctx) -> Res<(Prepared, Value, bool)> {
    let prep = |command, inputs: Value, alg: &TorsorAlgebra, f: &formstr_core::Poly| Prepared {
        command,
        inputs,
        field: Some(alg.field().to_string()),
        input: Some(f.to_string()),
        cacheable: false,
    };
    match t {
        TorsorCommand::Delta(a) => {
            let (alg, f, inputs) = torsor_algebra(a)?;
            let d = alg.delta(&f);
            let comps: BTreeMap<String, String> = d.components.iter().map(|(i, p)| (i.to_string(), p.to_string())).collect();
            let payload = json!({"shadow_variables": alg.shadow_names(), "components": comps});
            Ok((prep("torsor delta", inputs, &alg, &f), payload, false))
        }
        TorsorCommand::Derive { torsor: a, r } => {
            let (alg, f, mut inputs) = torsor_algebra(a)?;
            if r.len() != a.fiber.len() {
                return Err(UsageError(format!("--r needs {} values, one per fiber variable", a.fiber.len())));
            }
            let rv: Vec<Elem> = r.iter().map(|s| parse_elem(alg.field(), s)).collect::<Res<_>>()?;
            inputs["r"] = json!(rv.iter().map(|x| alg.field().format_elem(x)).collect::<Vec<_>>());
            let payload = json!({"derivative": alg.directional_derivative(&f, &rv).to_string()});
            Ok((prep("torsor derive", inputs, &alg, &f), payload, false))
        }
        TorsorCommand::Descend(a) => {
            let (alg, f, inputs) = torsor_algebra(a)?;
            let d = alg.frobenius_descend(&f)?;
            let terms: Vec<Value> = d
                .terms
                .iter()
                .map(|(c, u)| json!({"coefficient": c.to_string(), "fiber_exponents": u}))
                .collect();
            let payload = json!({
                "q": d.q,
                "terms": terms,
                "reconstructs": alg.reconstruct(&d) == f,
                "delta_q_nonzero": !alg.delta(&f).component(d.q as u32).is_zero(),
            });
            Ok((prep("torsor descend", inputs, &alg, &f), payload, false))
        }
        TorsorCommand::Witness(a) => witness(a, ctx),
    }
}

fn witness(a: &WitnessArgs, ctx: &Ctx) -> Res<(Prepared, Value, bool)> {
    let field = parse_field(&a.field)?;
    let params: Vec<&String> = a.params.iter().filter(|s| !s.is_empty()).collect();
    let model = SymShiftModel::new(&field, &params, a.m, a.n, a.d)?;
    let f = parse_in_ring(&a.f, model.ring())?;
    let gens = match &a.ideal {
        Some(g) => g.iter().map(|s| parse_in_ring(s, model.ring())).collect::<Result<Vec<_>, _>>()?,
        None => vec![f.clone()],
    };
    let pure_u = model.pure_u();
    let mut r0: BTreeMap<Exponents, Elem> = BTreeMap::new();
    for entry in a.r0.iter().filter(|s| !s.is_empty()) {
        let (name, value) = entry.split_once('=').ok_or_else(|| UsageError(format!("--r0 entry {entry:?} is not name=value")))?;
        let coord = pure_u
            .iter()
            .find(|e| model.coord_name(e) == name.trim())
            .ok_or_else(|| UsageError(format!("{name:?} is not a pure-U coordinate")))?;
        r0.insert(coord.clone(), parse_elem(&field, value.trim())?);
    }
    let r0_text: BTreeMap<String, String> = r0.iter().map(|(e, c)| (model.coord_name(e).to_string(), field.format_elem(c))).collect();
    let inputs = json!({
        "field": field.to_string(), "params": params, "m": a.m, "n": a.n, "d": a.d,
        "f": f.to_string(), "ideal": gens.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
        "r0": r0_text, "phi": a.phi,
    });
    let prep = Prepared { command: "torsor witness", inputs, field: Some(field.to_string()), input: Some(f.to_string()), cacheable: true };
    cached(ctx, prep, || {
        let j = model.orbit_ideal(&gens);
        let w = model.embed_witness(&f, &r0, &a.phi, &j)?;
        Ok(json!({
            "h": w.h.to_string(),
            "w": w.w.to_string(),
            "report": {
                "affine_linear": w.report.affine_linear,
                "in_ideal": w.report.in_ideal,
                "derivative_identity": w.report.derivative_identity,
            },
            "passed": w.report.passed(),
        }))
    })
}

fn glcase(g: &GlcaseCommand, ctx: &Ctx) -> Res<(Prepared, Value, bool)> {
    match *g {
        GlcaseCommand::ShiftDims { a, m, n } => {
            let pieces = shift_decompose(a, m, n);
            let total: u64 = pieces.iter().map(|p| p.1).sum();
            let payload = json!({
                "pieces": pieces.iter().map(|(i, d)| json!({"fiber_degree": i, "dimension": d})).collect::<Vec<_>>(),
                "total": total,
            });
            let prep = Prepared { command: "glcase shift-dims", inputs: json!({"a": a, "m": m, "n": n}), field: None, input: None, cacheable: false };
            Ok((prep, payload, false))
        }
        GlcaseCommand::NsCheck { n } => {
            let prep = Prepared { command: "glcase ns-check", inputs: json!({"n": n}), field: Some("GF(2)".into()), input: None, cacheable: true };
            cached(ctx, prep, || {
                let r = ns_example_check(n);
                Ok(json!({
                    "n": n,
                    "generators": r.generators.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                    "injective": r.injective,
                    "f_surjective": r.f_surjective,
                    "squares": r.squares.iter().map(|s| json!({"generator": format!("{}^2", s.generator), "reduces_to": s.image.to_string()})).collect::<Vec<_>>(),
                    "passed": r.passed(),
                }))
            })
        }
    }
}

fn run_verify(v: &VerifyArgs) -> (Value, Value) {
    let reports: Vec<_> = verify::run_all_matching(|id| v.only.as_ref().is_none_or(|o| o.contains(&id)));
    let criteria: Vec<Value> = reports
        .iter()
        .map(|r| json!({"id": r.id, "title": r.title, "correct": r.passed, "detail": r.detail, "limit_ms": r.limit.as_millis() as u64}))
        .collect();
    let times: BTreeMap<String, Value> = reports
        .iter()
        .map(|r| (r.id.to_string(), json!({"elapsed_ms": r.elapsed.as_secs_f64() * 1e3, "within_limit": r.within_time()})))
        .collect();
    let passed = reports.iter().all(|r| r.passed);
    (json!({"criteria": criteria, "passed": passed}), json!(times))
}
