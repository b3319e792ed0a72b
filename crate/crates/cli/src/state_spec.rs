//! `--state` specifications: a named state, `schmidt(a2=…)`, or `@file.json`.
//!
//! A state file holds `{"dims": [dA, dB], "entries": [[[re, im], …], …]}`
//! for a density matrix or `{"dims": [dA, dB], "ket": [[re, im], …]}` for a
//! pure state. Plain numbers are accepted where a `[re, im]` pair is expected.

use std::path::Path;

use locc_core::{BipartiteState, ComplexMatrix, C64};
use nalgebra::{DMatrix, DVector};
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum StateSpecError {
    #[error("at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("{path}: {message}")]
    File { path: String, message: String },
    #[error(transparent)]
    State(#[from] locc_core::Error),
}

fn parse_err(column: usize, message: impl Into<String>) -> StateSpecError {
    StateSpecError::Parse { column, message: message.into() }
}

pub const NAMED: [&str; 6] = ["singlet", "psi_plus", "phi_plus", "phi_minus", "product00", "maxmix"];

pub fn parse_state(spec: &str) -> Result<BipartiteState, StateSpecError> {
    let trimmed = spec.trim_end();
    let lead = trimmed.len() - trimmed.trim_start().len();
    let body = trimmed.trim_start();
    if body.is_empty() {
        return Err(parse_err(1, "empty state specification"));
    }
    if let Some(path) = body.strip_prefix('@') {
        if path.is_empty() {
            return Err(parse_err(lead + 2, "expected a path after '@'"));
        }
        return load_file(Path::new(path));
    }
    let name_len = body.find(|c: char| !(c.is_ascii_alphanumeric() || c == '_')).unwrap_or(body.len());
    let (name, rest) = body.split_at(name_len);
    let col = |offset: usize| lead + offset + 1;
    if name.is_empty() {
        return Err(parse_err(col(0), format!("unexpected character {:?}", rest.chars().next().unwrap())));
    }
    if name == "schmidt" {
        return parse_schmidt(rest, lead + name_len);
    }
    if !rest.is_empty() {
        return Err(parse_err(col(name_len), format!("unexpected trailing input {rest:?}")));
    }
    Ok(match name {
        "singlet" => BipartiteState::singlet(),
        "psi_plus" => BipartiteState::psi_plus(),
        "phi_plus" => BipartiteState::phi_plus(),
        "phi_minus" => BipartiteState::phi_minus(),
        "product00" => BipartiteState::product00(),
        "maxmix" => BipartiteState::maximally_mixed([2, 2]),
        other => {
            return Err(parse_err(
                col(0),
                format!("unknown state {other:?}; expected one of {}, schmidt(a2=…) or @file", NAMED.join(", ")),
            ))
        }
    })
}

/// `(a2=<float>)`, with `offset` characters already consumed.
fn parse_schmidt(rest: &str, offset: usize) -> Result<BipartiteState, StateSpecError> {
    let col = |i: usize| offset + i + 1;
    let mut i = 0;
    let bytes = rest.as_bytes();
    let skip_ws = |i: &mut usize| {
        while *i < bytes.len() && bytes[*i].is_ascii_whitespace() {
            *i += 1;
        }
    };
    let expect = |i: &mut usize, token: &str| -> Result<(), StateSpecError> {
        if rest[*i..].starts_with(token) {
            *i += token.len();
            Ok(())
        } else {
            Err(parse_err(col(*i), format!("expected {token:?}")))
        }
    };
    expect(&mut i, "(")?;
    skip_ws(&mut i);
    expect(&mut i, "a2")?;
    skip_ws(&mut i);
    expect(&mut i, "=")?;
    skip_ws(&mut i);
    let start = i;
    while i < bytes.len() && (bytes[i].is_ascii_digit() || b".eE+-".contains(&bytes[i])) {
        i += 1;
    }
    let number = &rest[start..i];
    let a2: f64 = number.parse().map_err(|_| parse_err(col(start), format!("invalid number {number:?}")))?;
    skip_ws(&mut i);
    expect(&mut i, ")")?;
    if i != rest.len() {
        return Err(parse_err(col(i), format!("unexpected trailing input {:?}", &rest[i..])));
    }
    if !(0.0..=1.0).contains(&a2) {
        return Err(parse_err(col(start), format!("a2 = {a2} outside [0, 1]")));
    }
    Ok(BipartiteState::schmidt_a2(a2)?)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Amplitude {
    Pair([f64; 2]),
    Real(f64),
}

impl From<&Amplitude> for C64 {
    fn from(a: &Amplitude) -> Self {
        match *a {
            Amplitude::Pair([re, im]) => C64::new(re, im),
            Amplitude::Real(re) => C64::new(re, 0.0),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    dims: [usize; 2],
    #[serde(default)]
    entries: Option<Vec<Vec<Amplitude>>>,
    #[serde(default)]
    ket: Option<Vec<Amplitude>>,
}

fn load_file(path: &Path) -> Result<BipartiteState, StateSpecError> {
    let file_err = |message: String| StateSpecError::File { path: path.display().to_string(), message };
    let text = std::fs::read_to_string(path).map_err(|e| file_err(e.to_string()))?;
    let f: StateFile = serde_json::from_str(&text).map_err(|e| file_err(e.to_string()))?;
    let d = f.dims[0] * f.dims[1];
    match (f.entries, f.ket) {
        (Some(rows), None) => {
            if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                return Err(file_err(format!("entries must be {d}x{d} for dims {:?}", f.dims)));
            }
            let m = DMatrix::from_fn(d, d, |i, j| C64::from(&rows[i][j]));
            Ok(BipartiteState::from_density(ComplexMatrix::new(m, f.dims.to_vec())?)?)
        }
        (None, Some(amps)) => {
            if amps.len() != d {
                return Err(file_err(format!("ket must have {d} amplitudes for dims {:?}", f.dims)));
            }
            let v = DVector::from_iterator(d, amps.iter().map(C64::from));
            let n = v.norm();
            if (n - 1.0).abs() > 1e-10 {
                return Err(locc_core::Error::NotAState(format!("ket has norm {n}")).into());
            }
            Ok(BipartiteState::from_ket(v, f.dims)?)
        }
        _ => Err(file_err("exactly one of \"entries\" or \"ket\" is required".into())),
    }
}
