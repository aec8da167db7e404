use exactalg::{MultiPoly, Rat};
use sysdsl::VectorFieldSystem;

use crate::error::PainleveError;
use crate::linalg::rat_str;
use crate::propagate::LaurentFamily;

/// `H(z(t)) = b` restricted to a Laurent family: a relation between the
/// free parameters and the values of the invariants.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantRelation {
    pub invariant: String,
    /// Symbol standing for the value of the invariant.
    pub value: String,
    /// Constant term of `H(z(t))` minus `value`.
    pub relation: MultiPoly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintVariety {
    pub relations: Vec<InvariantRelation>,
    /// Parameters removed by linear elimination, in order.
    pub eliminated: Vec<String>,
    /// Remaining relations after elimination.
    pub reduced: Vec<MultiPoly>,
}

impl ConstraintVariety {
    /// Reduced relations up to rational and monomial factors.
    pub fn canonical(&self) -> Vec<MultiPoly> {
        self.reduced.iter().map(MultiPoly::canonical).collect()
    }
}

/// Substitutes the family into invariants, keeps the `t^0` coefficients as
/// relations `H_k = b_k` and eliminates parameters that enter linearly until
/// one relation is left. Polar coefficients must vanish identically; if one
/// does not, the polynomial is not a first integral.
pub fn constraint_curve(
    sys: &VectorFieldSystem,
    fam: &LaurentFamily,
    names: &[&str],
) -> Result<ConstraintVariety, PainleveError> {
    let prefix = sys.hints().prefix.clone().unwrap_or_else(|| "b".to_string());
    let mut relations = Vec::new();
    for (k, name) in names.iter().enumerate() {
        let h = sys.invariant(name).ok_or_else(|| PainleveError::UnknownInvariant(name.to_string()))?;
        let s = fam.compose(h);
        if s.valid_to().is_some_and(|v| v < 1) {
            return Err(PainleveError::SeriesTooShort(name.to_string()));
        }
        for (e, c) in s.terms() {
            if e < 0 && !c.is_zero() {
                return Err(PainleveError::PolarPart {
                    name: name.to_string(),
                    exponent: rat_str(&Rat::new(e.into(), (fam.ell as i64).into())),
                    coeff: c.to_string(),
                });
            }
        }
        let value = format!("{prefix}{}", k + 1);
        let c0 = s.coeff(0).unwrap_or_else(MultiPoly::zero);
        relations.push(InvariantRelation {
            invariant: name.to_string(),
            relation: &c0 - &MultiPoly::var(&value),
            value,
        });
    }

    let mut reduced: Vec<MultiPoly> = relations.iter().map(|r| r.relation.clone()).collect();
    let mut eliminated = Vec::new();
    while reduced.len() > 1 {
        let Some((i, p)) = pick_linear(&reduced, &fam.free_parameters) else { break };
        let lin = reduced.remove(i);
        let a = lin.coeff_of(&p, 1);
        let b = lin.coeff_of(&p, 0);
        let root = -&b;
        reduced = reduced
            .iter()
            .map(|s| match a.as_constant() {
                Some(c) => s.substitute_one(&p, &root.scale(&c.recip())).compact(),
                None => homogenized(s, &p, &a, &root),
            })
            .collect();
        eliminated.push(p);
    }
    Ok(ConstraintVariety { relations, eliminated, reduced })
}

/// `a^d S(r/a)` with `d = deg_p S`, a polynomial whenever `a != 0`.
fn homogenized(s: &MultiPoly, p: &str, a: &MultiPoly, r: &MultiPoly) -> MultiPoly {
    let d = s.degree_in(p);
    let mut acc = MultiPoly::zero();
    for k in 0..=d {
        acc = acc + &(&s.coeff_of(p, k) * &r.pow(k)) * &a.pow(d - k);
    }
    acc.compact()
}

/// A relation linear in some parameter, preferring a constant coefficient
/// and otherwise the latest parameter.
fn pick_linear(rels: &[MultiPoly], params: &[String]) -> Option<(usize, String)> {
    let mut best: Option<(bool, usize, usize)> = None;
    for (i, r) in rels.iter().enumerate() {
        for (k, p) in params.iter().enumerate() {
            if r.degree_in(p) != 1 {
                continue;
            }
            let constant = r.coeff_of(p, 1).as_constant().is_some();
            let key = (constant, k, usize::MAX - i);
            if best.as_ref().is_none_or(|b| key > *b) {
                best = Some(key);
            }
        }
    }
    best.map(|(_, k, i)| (usize::MAX - i, params[k].clone()))
}
