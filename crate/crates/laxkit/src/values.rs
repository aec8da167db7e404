//! Parsing of numbers and `NAME=VALUE` bindings from the command line.

use std::collections::{BTreeMap, HashMap};

use exactalg::rational::parse;
use exactalg::Rat;
use crate::error::CliError;

/// Larger decimal exponents are refused rather than expanded.
const MAX_EXPONENT: i32 = 400;

fn pow10(k: usize) -> Rat {
    num_traits::pow(Rat::from_integer(10.into()), k)
}

/// Exact value of `p`, `p/q` or a decimal literal like `-0.125` or `2.5e-3`.
pub fn parse_rational(s: &str) -> Result<Rat, CliError> {
    let s = s.trim();
    if let Some(r) = parse(s) {
        return Ok(r);
    }
    let bad = || CliError::usage(format!("`{s}` is not a number"));
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().ok().filter(|e| e.abs() <= MAX_EXPONENT).ok_or_else(bad)?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac.is_empty() || !int_part.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all = format!("{int_part}{frac}");
    let n: Rat = parse(if all.is_empty() { "0" } else { &all }).ok_or_else(bad)?;
    let mut r = n / pow10(frac.len());
    let scale = pow10(exp.unsigned_abs() as usize);
    if exp >= 0 {
        r *= scale;
    } else {
        r /= scale;
    }
    if neg {
        r = -r;
    }
    Ok(r)
}

pub fn parse_float(s: &str) -> Result<f64, CliError> {
    let v: f64 = s.trim().parse().map_err(|_| CliError::usage(format!("`{s}` is not a number")))?;
    if !v.is_finite() {
        return Err(CliError::usage(format!("`{s}` is not finite")));
    }
    Ok(v)
}

/// Comma-separated list, e.g. `1,2,-0.5`.
pub fn parse_list(s: &str) -> Result<Vec<Rat>, CliError> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(parse_rational).collect()
}

/// `--bind A=1` pairs, later bindings override earlier ones.
pub fn parse_bindings(items: &[String]) -> Result<BTreeMap<String, Rat>, CliError> {
    let mut out = BTreeMap::new();
    for item in items {
        let (name, value) =
            item.split_once('=').ok_or_else(|| CliError::usage(format!("binding `{item}` is not NAME=VALUE")))?;
        let name = name.trim();
        if name.is_empty() {
            return Err(CliError::usage(format!("binding `{item}` has no name")));
        }
        out.insert(name.to_string(), parse_rational(value)?);
    }
    Ok(out)
}

pub fn float_bindings(b: &BTreeMap<String, Rat>) -> HashMap<String, f64> {
    b.iter().map(|(k, v)| (k.clone(), exactalg::rational::to_f64(v))).collect()
}
