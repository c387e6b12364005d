//! JSON encoding of the core types.
//!
//! Exact rationals serialize as decimal strings "p/q" to stay bit-exact;
//! float-backend values serialize as high-precision decimal literals inside
//! JSON numbers (`serde_json` arbitrary-precision keeps every digit).

use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Map, Number, Value};

use osckit_core::builder::{ClosureRoot, ClosureSystem, ProbeBranch, SolutionForm, Unknown};
use osckit_core::expalg::{parse_rational, CNum, ExpPoly};
use osckit_core::frobenius::{FrobeniusPair, LommelMap};
use osckit_core::mp::{MpC, MpFloat};
use osckit_core::oscillation::{RaySample, SectorDecomp, ZeroLattice};
use osckit_core::polyq::{BiPoly, RatPoly};
use osckit_core::verify::VerifyReport;

/// Current schema version of solution files.
pub const SCHEMA: u64 = 1;

#[derive(Debug)]
pub struct CodecError(pub String);

impl std::fmt::Display for CodecError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for CodecError {}

fn err(msg: impl Into<String>) -> CodecError {
    CodecError(msg.into())
}

fn mp_number(x: &MpFloat) -> Value {
    // Finite multiprecision values format as valid JSON number literals;
    // arbitrary-precision Numbers carry every digit through.
    Value::Number(Number::from_string_unchecked(x.to_decimal_string()))
}

pub fn cnum_to_json(c: &CNum) -> Value {
    match c {
        CNum::Exact { re, im } => json!({
            "exact": re.to_string(),
            "exact_im": im.to_string(),
        }),
        CNum::Float(z) => Value::Object({
            let mut m = Map::new();
            m.insert(
                "float".into(),
                Value::Array(vec![mp_number(&z.re), mp_number(&z.im)]),
            );
            m
        }),
    }
}

pub fn cnum_from_json(v: &Value, precision: usize) -> Result<CNum, CodecError> {
    let obj = v.as_object().ok_or_else(|| err("expected a number object"))?;
    if let Some(re) = obj.get("exact") {
        let re = re.as_str().ok_or_else(|| err("exact part must be a string"))?;
        let re = parse_rational(re).ok_or_else(|| err(format!("bad rational: {re}")))?;
        let im = match obj.get("exact_im") {
            None => BigRational::zero(),
            Some(s) => {
                let s = s.as_str().ok_or_else(|| err("exact_im must be a string"))?;
                parse_rational(s).ok_or_else(|| err(format!("bad rational: {s}")))?
            }
        };
        return Ok(CNum::from_rationals(re, im));
    }
    if let Some(fl) = obj.get("float") {
        let arr = fl.as_array().filter(|a| a.len() == 2).ok_or_else(|| err("float needs [re, im]"))?;
        let parse = |v: &Value| -> Result<MpFloat, CodecError> {
            let text = match v {
                Value::Number(n) => n.to_string(),
                Value::String(s) => s.clone(),
                _ => return Err(err("float parts must be numbers")),
            };
            MpFloat::parse(&text, precision).ok_or_else(|| err(format!("bad float literal: {text}")))
        };
        return Ok(CNum::from_mpc(MpC::new(parse(&arr[0])?, parse(&arr[1])?)));
    }
    Err(err("number object needs either \"exact\" or \"float\""))
}

pub fn exppoly_to_json(p: &ExpPoly) -> Value {
    json!({
        "den": p.den(),
        "terms": p.terms().map(|(j, c)| json!([j, cnum_to_json(c)])).collect::<Vec<_>>(),
    })
}

pub fn exppoly_from_json(v: &Value, precision: usize) -> Result<ExpPoly, CodecError> {
    let obj = v.as_object().ok_or_else(|| err("expected an exponential polynomial object"))?;
    let den = obj.get("den").and_then(Value::as_u64).ok_or_else(|| err("missing den"))?;
    if den != 1 && den != 2 {
        return Err(err("den must be 1 or 2"));
    }
    let terms = obj.get("terms").and_then(Value::as_array).ok_or_else(|| err("missing terms"))?;
    let mut pairs = Vec::with_capacity(terms.len());
    for t in terms {
        let pair = t.as_array().filter(|a| a.len() == 2).ok_or_else(|| err("terms are [j, num] pairs"))?;
        let j = pair[0].as_i64().ok_or_else(|| err("exponent must be an integer"))?;
        pairs.push((j, cnum_from_json(&pair[1], precision)?));
    }
    Ok(ExpPoly::from_terms(den as u8, pairs))
}

pub fn solution_to_json(s: &SolutionForm) -> Value {
    json!({
        "schema": SCHEMA,
        "l": s.l,
        "s": s.s,
        "b2": cnum_to_json(&s.b2),
        "b3": cnum_to_json(&s.b3),
        "k": s.k,
        "c0": cnum_to_json(&s.c0),
        "c": cnum_to_json(&s.c),
        "kappa": exppoly_to_json(&s.kappa),
        "g": exppoly_to_json(&s.g),
        "branch": s.branch,
        "verified": s.verified,
    })
}

pub fn solution_from_json(v: &Value, precision: usize) -> Result<SolutionForm, CodecError> {
    let obj = v.as_object().ok_or_else(|| err("expected a solution object"))?;
    if obj.get("schema").and_then(Value::as_u64) != Some(SCHEMA) {
        return Err(err("unsupported or missing schema version"));
    }
    let get = |k: &str| obj.get(k).ok_or_else(|| err(format!("missing field {k}")));
    Ok(SolutionForm {
        l: get("l")?.as_u64().ok_or_else(|| err("l must be an integer"))? as u32,
        s: get("s")?.as_u64().ok_or_else(|| err("s must be an integer"))? as u32,
        b2: cnum_from_json(get("b2")?, precision)?,
        b3: cnum_from_json(get("b3")?, precision)?,
        kappa: exppoly_from_json(get("kappa")?, precision)?,
        g: exppoly_from_json(get("g")?, precision)?,
        k: get("k")?.as_u64().ok_or_else(|| err("k must be an integer"))? as usize,
        c0: cnum_from_json(get("c0")?, precision)?,
        c: cnum_from_json(get("c")?, precision)?,
        branch: obj.get("branch").and_then(Value::as_str).unwrap_or("").to_string(),
        verified: obj.get("verified").and_then(Value::as_bool).unwrap_or(false),
    })
}

fn ratpoly_coeffs(p: &RatPoly) -> Value {
    Value::Array(p.coeffs().iter().map(|c| Value::String(c.to_string())).collect())
}

fn bipoly_to_json(b: &BiPoly) -> Value {
    json!({
        "unknowns": ["t", "b2"],
        "y_coeffs": b.y_coeffs().iter().map(ratpoly_coeffs).collect::<Vec<_>>(),
    })
}

fn closure_root_to_json(r: &ClosureRoot) -> Value {
    json!({
        "value": cnum_to_json(&r.value),
        "diagnostic": r.diagnostic,
    })
}

pub fn closure_to_json(c: &ClosureSystem) -> Value {
    match c {
        ClosureSystem::Univariate { unknown, equations, roots } => {
            let name = match unknown {
                Unknown::B2 => "b2",
                Unknown::T => "t",
                Unknown::C1 => "c1",
            };
            let mut obj = Map::new();
            obj.insert("unknown".into(), Value::String(name.into()));
            if let Some(first) = equations.first() {
                obj.insert("coeffs".into(), ratpoly_coeffs(first));
            }
            if equations.len() > 1 {
                obj.insert(
                    "equations".into(),
                    Value::Array(equations.iter().map(ratpoly_coeffs).collect()),
                );
            }
            obj.insert("roots".into(), Value::Array(roots.iter().map(closure_root_to_json).collect()));
            Value::Object(obj)
        }
        ClosureSystem::Parametric { relation, note } => json!({
            "parametric": bipoly_to_json(relation),
            "note": note,
        }),
    }
}

pub fn probe_branch_to_json(b: &ProbeBranch) -> Value {
    json!({
        "k": b.k,
        "c0": b.c0_sign,
        "closure": closure_to_json(&b.system),
        "solutions": b.solutions.iter().map(solution_to_json).collect::<Vec<_>>(),
    })
}

pub fn verify_report_to_json(r: &VerifyReport) -> Value {
    json!({
        "residual": exppoly_to_json(&r.residual),
        "is_solution": r.is_solution,
        "wronskian": r.wronskian_constant.as_ref().map(cnum_to_json),
        "notes": r.notes,
    })
}

pub fn lommel_to_json(m: &LommelMap) -> Value {
    json!({
        "h": m.h.iter().map(cnum_to_json).collect::<Vec<_>>(),
        "y_equation": {
            "d1": cnum_to_json(&m.d1),
            "d2": cnum_to_json(&m.d2),
            "d3": cnum_to_json(&m.d3),
        },
        "transform": {
            "alpha": cnum_to_json(&m.alpha),
            "beta": cnum_to_json(&m.beta),
            "gamma": cnum_to_json(&m.gamma),
            "p": cnum_to_json(&m.p),
        },
    })
}

pub fn frobenius_to_json(fp: &FrobeniusPair, n: usize) -> Value {
    json!({
        "rho1": cnum_to_json(&fp.rho1),
        "rho2": cnum_to_json(&fp.rho2),
        "d": fp.d,
        "u1": fp.u1_series.coeffs().iter().map(cnum_to_json).collect::<Vec<_>>(),
        "u2": fp.u2_series.coeffs().iter().map(cnum_to_json).collect::<Vec<_>>(),
        "N": n,
    })
}

pub fn lattice_to_json(lat: &ZeroLattice, counts: &[(f64, usize)], lambda: Option<f64>) -> Value {
    json!({
        "den": lat.den,
        "period": lat.period(),
        "entries": lat
            .entries
            .iter()
            .map(|e| json!({"base": [e.base.re, e.base.im], "multiplicity": e.multiplicity}))
            .collect::<Vec<_>>(),
        "counts": counts.iter().map(|(r, n)| json!({"r": r, "n": n})).collect::<Vec<_>>(),
        "lambda": lambda,
    })
}

pub fn ray_samples_to_json(theta: f64, samples: &[RaySample]) -> Value {
    json!({
        "theta": theta,
        "samples": samples
            .iter()
            .map(|s| {
                let (fr, fi) = s.f.to_f64_pair();
                let (pr, pi) = s.fp.to_f64_pair();
                json!({"r": s.r, "f": [fr, fi], "fp": [pr, pi]})
            })
            .collect::<Vec<_>>(),
    })
}

pub fn sectors_to_json(d: &SectorDecomp) -> Value {
    json!({
        "k": d.k,
        "boundaries": d.boundaries,
        "signs": d.signs,
    })
}
