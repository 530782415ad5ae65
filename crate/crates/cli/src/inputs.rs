//! Loading measures, polynomials, points and problems from the command line.
//!
//! Each loader accepts either a path to a JSON file or the JSON (or preset
//! name) inline, so quick runs do not need scratch files.

use std::fs;
use std::path::Path;

use mu_corona::corona::{CoronaProblem, CoronaSolution};
use mu_corona::measure::MeasureSpec;
use mu_corona::poly::{check_finite, CPoly, TrigPoly};
use mu_corona::Complex64 as C64;
use serde::Deserialize;
use serde_json::Value;

use crate::Failure;

fn text_of(arg: &str) -> Result<String, Failure> {
    let path = Path::new(arg);
    if path.is_file() {
        fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {arg}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

fn json_of(arg: &str, what: &str) -> Result<Value, Failure> {
    let text = text_of(arg)?;
    serde_json::from_str(&text).map_err(|e| Failure::input(format!("{what} '{arg}' is not valid JSON: {e}")))
}

/// A preset name (`hardy`, `atom:1`, ...), or a file holding a measure
/// object or a quoted preset name.
pub fn measure(arg: &str) -> Result<MeasureSpec, Failure> {
    let value = if Path::new(arg).is_file() { json_of(arg, "measure")? } else { Value::String(arg.to_string()) };
    Ok(MeasureSpec::from_value(value)?)
}

/// Coefficient list `[[re, im], ...]`, constant term first.
pub fn poly(arg: &str) -> Result<CPoly, Failure> {
    let p: CPoly = serde_json::from_value(json_of(arg, "polynomial")?)
        .map_err(|e| Failure::input(format!("polynomial '{arg}': {e}")))?;
    check_finite(&p, "polynomial")?;
    Ok(p)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum TrigInput {
    Analytic(CPoly),
    Trig(TrigPoly),
}

/// Either an analytic coefficient list or `{"coeffs": [[m, re, im], ...]}`.
pub fn trig_poly(arg: &str) -> Result<TrigPoly, Failure> {
    match serde_json::from_value(json_of(arg, "trigonometric polynomial")?) {
        Ok(TrigInput::Analytic(p)) => Ok(TrigPoly::from_analytic_parts(&p, &CPoly::zero())),
        Ok(TrigInput::Trig(t)) => Ok(t),
        Err(e) => Err(Failure::input(format!("trigonometric polynomial '{arg}': {e}"))),
    }
}

/// `re,im;re,im;...` or a JSON list of `[re, im]` pairs.
pub fn points(arg: &str) -> Result<Vec<C64>, Failure> {
    let text = text_of(arg)?;
    let trimmed = text.trim();
    if trimmed.starts_with('[') {
        let pairs: Vec<[f64; 2]> =
            serde_json::from_str(trimmed).map_err(|e| Failure::input(format!("points '{arg}': {e}")))?;
        return Ok(pairs.into_iter().map(|[re, im]| C64::new(re, im)).collect());
    }
    trimmed.split(';').filter(|s| !s.trim().is_empty()).map(point).collect()
}

/// `re,im` or a bare real number.
pub fn point(arg: &str) -> Result<C64, Failure> {
    let parts: Vec<&str> = arg.split(',').map(str::trim).collect();
    let num = |s: &str| s.parse::<f64>().map_err(|_| Failure::input(format!("bad number '{s}' in point '{arg}'")));
    match parts.as_slice() {
        [re] => Ok(C64::new(num(re)?, 0.0)),
        [re, im] => Ok(C64::new(num(re)?, num(im)?)),
        _ => Err(Failure::input(format!("point '{arg}' should be 're,im'"))),
    }
}

pub fn problem(arg: &str) -> Result<CoronaProblem, Failure> {
    Ok(CoronaProblem::from_json(&text_of(arg)?)?)
}

/// A solution file as written by `corona solve`, or a bare solution object.
pub fn solution(arg: &str) -> Result<CoronaSolution, Failure> {
    let mut value = json_of(arg, "solution")?;
    if let Some(inner) = value.get_mut("report") {
        value = inner.take();
    }
    serde_json::from_value(value).map_err(|e| Failure::input(format!("solution '{arg}': {e}")))
}
