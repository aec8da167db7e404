//! Polynomial maps between systems.
//!
//! ```text
//! morphism SRC -> DST
//! z1 = y1^2
//! z2 = y2
//! ```
//! Every target variable gets exactly one line; right-hand sides use the
//! source variables and constants.

use exactalg::MultiPoly;

use crate::expr::parse_expr;
use crate::{DslError, VectorFieldSystem};

#[derive(Debug, Clone, PartialEq)]
pub struct Morphism {
    pub source: String,
    pub target: String,
    /// Image of each target variable, in the target's variable order.
    pub components: Vec<MultiPoly>,
}

/// Header names of a morphism file.
pub fn morphism_header(text: &str) -> Result<(String, String), DslError> {
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let rest = line
            .strip_prefix("morphism")
            .ok_or_else(|| DslError::syntax(ln + 1, 1, "expected `morphism SRC -> DST`"))?;
        let (a, b) =
            rest.split_once("->").ok_or_else(|| DslError::syntax(ln + 1, 1, "expected `morphism SRC -> DST`"))?;
        return Ok((a.trim().to_string(), b.trim().to_string()));
    }
    Err(DslError::syntax(1, 1, "empty morphism"))
}

pub fn parse_morphism(text: &str, src: &VectorFieldSystem, dst: &VectorFieldSystem) -> Result<Morphism, DslError> {
    let (source, target) = morphism_header(text)?;
    let mut comps: Vec<Option<MultiPoly>> = vec![None; dst.dim()];
    let mut header_seen = false;
    for (ln, raw) in text.lines().enumerate() {
        let line_no = ln + 1;
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        if !header_seen {
            header_seen = true;
            continue;
        }
        let (lhs, rhs) = body.split_once('=').ok_or_else(|| DslError::syntax(line_no, 1, "expected `VAR = expr`"))?;
        let name = lhs.trim();
        let i = dst.vars().iter().position(|v| v == name).ok_or_else(|| DslError::Undeclared {
            line: line_no,
            col: 1 + lhs.len() - lhs.trim_start().len(),
            name: name.to_string(),
        })?;
        if comps[i].is_some() {
            return Err(DslError::Invalid { line: line_no, msg: format!("`{name}` mapped twice") });
        }
        comps[i] = Some(parse_expr(rhs, src.symbols(), line_no, lhs.len() + 2)?);
    }
    let components = comps
        .into_iter()
        .zip(dst.vars())
        .map(|(c, v)| c.ok_or_else(|| DslError::Dimension(format!("no image for `{v}`"))))
        .collect::<Result<_, _>>()?;
    Ok(Morphism { source, target, components })
}
