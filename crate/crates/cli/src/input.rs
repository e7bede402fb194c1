//! Parsing of complex literals, pole lists, polynomial expressions and the
//! function sources accepted on the command line.

use std::fs;
use std::path::{Path, PathBuf};

use nbest_core::rational::{rational_to_hardy, AdmissiblePair, Polynomial};
use nbest_core::tm::normalized_szego;
use nbest_core::tm::sample_on_grid;
use nbest_core::{BlaschkeForm, BoundaryGrid, Cpx, DiscPoint, HardyFunction, PoleTuple};
use serde_json::Value;

use crate::CliError;

/// Grid size used when neither a flag nor the input fixes one.
pub const DEFAULT_GRID_SIZE: usize = 1024;

type Result<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Parses `0.4+0.2i`, `-0.3i`, `i`, `2`, `1e-3-2e-2j` and the like.
pub fn parse_complex(text: &str) -> Result<Cpx> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || usage(format!("cannot parse complex number '{text}'"));
    if s.is_empty() {
        return Err(bad());
    }
    let real = |t: &str| t.parse::<f64>().map_err(|_| bad());
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        return Ok(Cpx::new(real(&s)?, 0.0));
    };
    // split before the last sign that is not an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re_part, im_part) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let im = match im_part {
        "" | "+" => 1.0,
        "-" => -1.0,
        t => real(t)?,
    };
    let re = if re_part.is_empty() { 0.0 } else { real(re_part)? };
    let z = Cpx::new(re, im);
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(bad());
    }
    Ok(z)
}

/// Accepts a number, `[re, im]`, `{"re": .., "im": ..}` or a string literal.
pub fn complex_from_value(v: &Value) -> Result<Cpx> {
    let bad = || usage(format!("expected a complex number, found {v}"));
    match v {
        Value::Number(n) => n.as_f64().map(|x| Cpx::new(x, 0.0)).ok_or_else(bad),
        Value::String(s) => parse_complex(s),
        Value::Array(parts) if parts.len() == 2 => match (parts[0].as_f64(), parts[1].as_f64()) {
            (Some(re), Some(im)) => Ok(Cpx::new(re, im)),
            _ => Err(bad()),
        },
        Value::Object(map) => match (map.get("re").and_then(Value::as_f64), map.get("im").and_then(Value::as_f64)) {
            (Some(re), Some(im)) => Ok(Cpx::new(re, im)),
            _ => Err(bad()),
        },
        _ => Err(bad()),
    }
}

fn complex_list(v: &Value, what: &str) -> Result<Vec<Cpx>> {
    v.as_array()
        .ok_or_else(|| usage(format!("'{what}' must be an array")))?
        .iter()
        .map(complex_from_value)
        .collect()
}

fn point(z: Cpx) -> Result<DiscPoint> {
    DiscPoint::new(z).map_err(|e| usage(format!("bad pole: {e}")))
}

/// Comma- or whitespace-separated pole list.
pub fn parse_poles(text: &str) -> Result<PoleTuple> {
    let poles = text
        .split([',', ';'])
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| parse_complex(t).and_then(point))
        .collect::<Result<Vec<_>>>()?;
    if poles.is_empty() {
        return Err(usage("empty pole list"));
    }
    Ok(PoleTuple::new(poles))
}

/// Taylor coefficients from `1,0.5i,2` (lowest degree first) or from an
/// expression in `z` such as `z^2+0.5z-(0.1+0.2i)`.
pub fn parse_polynomial(text: &str) -> Result<Vec<Cpx>> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if !s.contains('z') {
        return s.split(',').map(parse_complex).collect();
    }
    let mut coeffs: Vec<Cpx> = Vec::new();
    for (sign, term) in split_terms(&s)? {
        let (coef_text, degree) = match term.find('z') {
            Some(pos) => {
                let coef_text = term[..pos].trim_end_matches('*');
                let degree = match &term[pos + 1..] {
                    "" => 1,
                    rest => rest
                        .strip_prefix('^')
                        .and_then(|d| d.parse::<usize>().ok())
                        .ok_or_else(|| usage(format!("bad power in term '{term}'")))?,
                };
                (coef_text, degree)
            }
            None => (term, 0),
        };
        let coef_text = coef_text.trim_start_matches('(').trim_end_matches(')');
        let c = if coef_text.is_empty() { Cpx::new(1.0, 0.0) } else { parse_complex(coef_text)? };
        if coeffs.len() <= degree {
            coeffs.resize(degree + 1, Cpx::new(0.0, 0.0));
        }
        coeffs[degree] += sign * c;
    }
    Ok(coeffs)
}

/// Splits at top-level `+`/`-`, ignoring exponent signs and parentheses.
fn split_terms(s: &str) -> Result<Vec<(f64, &str)>> {
    let bytes = s.as_bytes();
    let mut terms = Vec::new();
    let (mut depth, mut start, mut sign) = (0i32, 0usize, 1.0);
    for k in 0..bytes.len() {
        match bytes[k] {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' | b'-' if depth == 0 && (k == 0 || !matches!(bytes[k - 1], b'e' | b'E' | b'^')) => {
                if k > start {
                    terms.push((sign, &s[start..k]));
                }
                sign = if bytes[k] == b'-' { -1.0 } else { 1.0 };
                start = k + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(usage(format!("unbalanced parentheses in '{s}'")));
    }
    if start < s.len() {
        terms.push((sign, &s[start..]));
    }
    if terms.is_empty() {
        return Err(usage(format!("empty polynomial '{s}'")));
    }
    Ok(terms)
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| usage(format!("{}: invalid JSON: {e}", path.display())))
}

/// Reads a Blaschke form file; complex entries may use any accepted notation
/// and `grid_size` may be omitted.
pub fn read_form(path: &Path, grid_size: Option<usize>) -> Result<BlaschkeForm> {
    let v = read_json(path)?;
    let field = |name: &str| v.get(name).ok_or_else(|| usage(format!("{}: missing '{name}'", path.display())));
    let poles = complex_list(field("poles")?, "poles")?
        .into_iter()
        .map(point)
        .collect::<Result<Vec<_>>>()?;
    let coeffs = complex_list(field("coeffs")?, "coeffs")?;
    let size = grid_size
        .or_else(|| v.get("grid_size").and_then(Value::as_u64).map(|m| m as usize))
        .unwrap_or(DEFAULT_GRID_SIZE);
    Ok(BlaschkeForm::new(PoleTuple::new(poles), coeffs, BoundaryGrid::new(size)?)?)
}

/// Where a function comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    TaylorFile(PathBuf),
    RationalPair(PathBuf),
    Builtin(String),
    SampledSignal(PathBuf),
}

/// A function source plus an optional grid override.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionSpec {
    pub source: Source,
    pub grid_size: Option<usize>,
}

impl FunctionSpec {
    pub fn resolve(&self) -> Result<HardyFunction> {
        let m = self.grid_size.unwrap_or(DEFAULT_GRID_SIZE);
        match &self.source {
            Source::TaylorFile(path) => {
                let v = read_json(path)?;
                let (coeffs, file_grid) = match &v {
                    Value::Array(_) => (complex_list(&v, "taylor")?, None),
                    Value::Object(map) => {
                        let t = map
                            .get("taylor")
                            .ok_or_else(|| usage(format!("{}: missing 'taylor'", path.display())))?;
                        let g = map.get("grid_size").and_then(Value::as_u64).map(|g| g as usize);
                        (complex_list(t, "taylor")?, g)
                    }
                    _ => return Err(usage(format!("{}: expected an array or object", path.display()))),
                };
                let size = self.grid_size.or(file_grid).unwrap_or(DEFAULT_GRID_SIZE);
                Ok(HardyFunction::from_taylor(&coeffs, size)?)
            }
            Source::RationalPair(path) => {
                let v = read_json(path)?;
                let poly = |name: &str| -> Result<Polynomial> {
                    let field = v.get(name).ok_or_else(|| usage(format!("{}: missing '{name}'", path.display())))?;
                    Ok(Polynomial::new(complex_list(field, name)?))
                };
                let (p, q) = (poly("p")?, poly("q")?);
                let n = v
                    .get("n")
                    .and_then(Value::as_u64)
                    .map(|n| n as usize)
                    .unwrap_or(p.degree().max(q.degree()));
                Ok(rational_to_hardy(&AdmissiblePair::new(p, q, n), m)?)
            }
            Source::Builtin(name) => builtin(name, self.grid_size),
            Source::SampledSignal(path) => {
                let text = fs::read_to_string(path).map_err(|source| CliError::Io {
                    path: path.clone(),
                    source,
                })?;
                let signal = text
                    .lines()
                    .filter(|l| !l.trim_start().starts_with('#'))
                    .flat_map(|l| l.split([',', ' ', '\t', ';']))
                    .filter(|t| !t.is_empty())
                    .map(|t| t.parse::<f64>().map_err(|_| usage(format!("{}: bad sample '{t}'", path.display()))))
                    .collect::<Result<Vec<_>>>()?;
                if self.grid_size.is_some_and(|g| g != signal.len()) {
                    return Err(usage("--grid-size must match the signal length"));
                }
                Ok(HardyFunction::from_real_signal(&signal)?)
            }
        }
    }
}

/// `szego:a`, `geom:a`, `poly:<coeffs or expression>`, `blaschke-form:<file>`.
pub fn builtin(name: &str, grid_size: Option<usize>) -> Result<HardyFunction> {
    let m = grid_size.unwrap_or(DEFAULT_GRID_SIZE);
    let (kind, arg) = name
        .split_once(':')
        .ok_or_else(|| usage(format!("builtin '{name}' needs the form kind:argument")))?;
    match kind {
        "szego" => {
            let a = point(parse_complex(arg)?)?;
            Ok(sample_on_grid(BoundaryGrid::new(m)?, |z| normalized_szego(a, z))?)
        }
        "geom" => {
            let a = point(parse_complex(arg)?)?;
            let ac = a.value().conj();
            let mut coeffs = Vec::with_capacity(m / 2);
            let mut power = Cpx::new(1.0, 0.0);
            for _ in 0..m / 2 {
                coeffs.push(power);
                power *= ac;
            }
            Ok(HardyFunction::from_taylor(&coeffs, m)?)
        }
        "poly" => Ok(HardyFunction::from_taylor(&parse_polynomial(arg)?, m)?),
        "blaschke-form" => Ok(read_form(Path::new(arg), grid_size)?.to_function()?),
        other => Err(usage(format!(
            "unknown builtin kind '{other}' (known: szego, geom, poly, blaschke-form)"
        ))),
    }
}
