use std::collections::BTreeMap;

use exactalg::{MultiPoly, Rat};
use num_traits::{Signed, Zero};
use sysdsl::VectorFieldSystem;

use crate::error::PainleveError;
use crate::linalg::split_var_power;
use crate::weights::WeightVector;

/// One solution branch of a polynomial system. Unknowns that were never
/// fixed map to themselves and act as free parameters.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Solution {
    pub values: BTreeMap<String, MultiPoly>,
    pub sheet: Option<i8>,
}

pub(crate) struct Solved {
    pub solutions: Vec<Solution>,
    /// Branches abandoned because they needed irrational roots or could not
    /// be triangularized by substitution.
    pub dropped: usize,
}

/// Solves `eqs = 0` for `unknowns` by recursive substitution: linear
/// unknowns with constant coefficients are eliminated, monomial factors are
/// split into cases, univariate equations are solved over the rationals and
/// equations `a*u + b` divisible by `a` split into `a = 0` and `u = -b/a`.
pub(crate) fn solve_polynomial_system(eqs: &[MultiPoly], unknowns: &[String]) -> Solved {
    let mut out = Solved { solutions: Vec::new(), dropped: 0 };
    go(eqs.to_vec(), BTreeMap::new(), None, unknowns, &mut out);
    out
}

fn involves_unknown(p: &MultiPoly, unknowns: &[String]) -> bool {
    unknowns.iter().any(|u| p.contains_var(u))
}

fn assign(values: &mut BTreeMap<String, MultiPoly>, u: &str, v: MultiPoly) {
    for w in values.values_mut() {
        *w = w.substitute_one(u, &v);
    }
    values.insert(u.to_string(), v);
}

fn go(
    eqs: Vec<MultiPoly>,
    values: BTreeMap<String, MultiPoly>,
    sheet: Option<i8>,
    unknowns: &[String],
    out: &mut Solved,
) {
    let mut live = Vec::new();
    for e in eqs {
        let e = e.substitute(&values);
        if e.is_zero() {
            continue;
        }
        if !involves_unknown(&e, unknowns) {
            // A nonzero relation among constants: this branch is empty.
            return;
        }
        live.push(e);
    }
    if live.is_empty() {
        let mut all = values.clone();
        for u in unknowns {
            all.entry(u.clone()).or_insert_with(|| MultiPoly::var(u));
        }
        out.solutions.push(Solution { values: all, sheet });
        return;
    }

    // Linear unknown with a constant coefficient, latest unknown first.
    for (k, e) in live.iter().enumerate() {
        for u in unknowns.iter().rev() {
            if e.degree_in(u) != 1 {
                continue;
            }
            let Some(a) = e.coeff_of(u, 1).as_constant() else { continue };
            let b = e.coeff_of(u, 0);
            let mut vals = values.clone();
            assign(&mut vals, u, b.scale(&(-a.recip())));
            let mut rest = live.clone();
            rest.remove(k);
            go(rest, vals, sheet, unknowns, out);
            return;
        }
    }

    // Monomial factor u^k: split into u = 0 and the cofactor.
    for (k, e) in live.iter().enumerate() {
        for u in unknowns {
            let (pw, q) = split_var_power(e, u);
            if pw == 0 {
                continue;
            }
            let mut vals = values.clone();
            assign(&mut vals, u, MultiPoly::zero());
            go(live.clone(), vals, sheet, unknowns, out);
            let mut rest = live.clone();
            rest[k] = q;
            go(rest, values, sheet, unknowns, out);
            return;
        }
    }

    // Univariate equation with rational coefficients.
    for (k, e) in live.iter().enumerate() {
        let used = e.used_vars();
        if used.len() != 1 || !unknowns.contains(&used[0]) {
            continue;
        }
        let u = &used[0];
        let Some(p) = e.to_upoly(u) else { continue };
        let roots = p.rational_roots().unwrap_or_default();
        let found: usize = roots.iter().map(|(_, m)| *m as usize).sum();
        if found < p.degree() {
            out.dropped += 1;
        }
        for (r, _) in &roots {
            let paired = !r.is_zero() && roots.iter().any(|(s, _)| *s == -r.clone());
            let sh = if sheet.is_none() && paired { Some(if r.is_positive() { 1 } else { -1 }) } else { sheet };
            let mut vals = values.clone();
            assign(&mut vals, u, MultiPoly::constant(r.clone()));
            let mut rest = live.clone();
            rest.remove(k);
            go(rest, vals, sh, unknowns, out);
        }
        return;
    }

    // Equation a*u + b with a | b: split into a = 0 and u = -b/a.
    for (k, e) in live.iter().enumerate() {
        for u in unknowns {
            if e.degree_in(u) != 1 {
                continue;
            }
            let a = e.coeff_of(u, 1);
            if a.is_constant() || !involves_unknown(&a, unknowns) {
                continue;
            }
            let Some(q) = e.div_exact(&a) else { continue };
            let mut left = live.clone();
            left[k] = a;
            go(left, values.clone(), sheet, unknowns, out);
            let mut right = live.clone();
            right[k] = q;
            go(right, values, sheet, unknowns, out);
            return;
        }
    }
    out.dropped += 1;
}

/// Leading behaviour `z_i ~ leading_i * t^(-k_i)` of a Laurent family.
#[derive(Debug, Clone, PartialEq)]
pub struct Balance {
    pub weight_vector: WeightVector,
    pub leading: Vec<MultiPoly>,
    /// Free parameters of the leading coefficients.
    pub params: Vec<String>,
    /// `Some(+1)` / `Some(-1)` when the balance comes in a pair differing
    /// by the sign of a square root.
    pub sheet: Option<i8>,
}

impl Balance {
    /// Exponents `k_i`, equal to the weights.
    pub fn exponents(&self) -> &[Rat] {
        &self.weight_vector.weights
    }

    pub fn ell(&self) -> u32 {
        self.weight_vector.ell()
    }
}

fn fresh(base: &str, taken: &[String]) -> String {
    let mut s = base.to_string();
    while taken.contains(&s) {
        s.push('_');
    }
    s
}

/// Parameter names for a system: declared hints first, then `a1, a2, ...`.
pub(crate) fn param_name(sys: &VectorFieldSystem, k: usize, taken: &[String]) -> String {
    match sys.hints().params.get(k) {
        Some(n) if !taken.contains(n) => n.clone(),
        _ => fresh(&format!("a{}", k + 1), taken),
    }
}

/// Nonzero solutions of `k_i c_i + fhat_i(c) = 0` over the rationals.
/// Solutions that are specializations of a richer solution are dropped.
pub fn indicial_solve(sys: &VectorFieldSystem, wv: &WeightVector) -> Result<Vec<Balance>, PainleveError> {
    let vars = sys.vars().to_vec();
    let eqs: Vec<MultiPoly> = (0..vars.len())
        .map(|i| &MultiPoly::var(&vars[i]).scale(&wv.weights[i]) + &wv.dominant[i])
        .collect();
    let solved = solve_polynomial_system(&eqs, &vars);

    let mut sols: Vec<Solution> = Vec::new();
    for s in solved.solutions {
        if s.values.values().all(MultiPoly::is_zero) || sols.iter().any(|t| t.values == s.values) {
            continue;
        }
        sols.push(s);
    }
    let free_of = |s: &Solution| -> Vec<String> {
        vars.iter().filter(|u| s.values.values().any(|v| v.contains_var(u))).cloned().collect()
    };
    let keep: Vec<bool> = sols
        .iter()
        .map(|b| !sols.iter().any(|richer| free_of(richer).len() > free_of(b).len() && specializes(b, richer, &vars)))
        .collect();

    let taken: Vec<String> = sys.symbols().to_vec();
    let mut out = Vec::new();
    for (s, _) in sols.iter().zip(&keep).filter(|(_, k)| **k) {
        let free = free_of(s);
        let mut ren = BTreeMap::new();
        let mut params = Vec::new();
        for (k, u) in free.iter().enumerate() {
            let name = param_name(sys, k, &taken);
            ren.insert(u.clone(), MultiPoly::var(&name));
            params.push(name);
        }
        let leading = vars.iter().map(|v| s.values[v].substitute(&ren)).collect();
        out.push(Balance { weight_vector: wv.clone(), leading, params, sheet: s.sheet });
    }
    if out.is_empty() {
        return Err(PainleveError::NoBalance);
    }
    out.sort_by(|a, b| {
        b.params.len().cmp(&a.params.len()).then_with(|| b.sheet.cmp(&a.sheet))
    });
    Ok(out)
}

/// True if `b` is obtained from `richer` by fixing some of its parameters.
fn specializes(b: &Solution, richer: &Solution, vars: &[String]) -> bool {
    let ren: BTreeMap<String, MultiPoly> =
        vars.iter().map(|v| (v.clone(), MultiPoly::var(&format!("__s_{v}")))).collect();
    let unknowns: Vec<String> = vars.iter().map(|v| format!("__s_{v}")).collect();
    let eqs: Vec<MultiPoly> = vars.iter().map(|v| &richer.values[v].substitute(&ren) - &b.values[v]).collect();
    !solve_polynomial_system(&eqs, &unknowns).solutions.is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;
    use exactalg::rational::{int, rat};

    #[test]
    fn solver_branches() {
        // x*(x^2 - 1/4) = 0, y - 2x = 0
        let x = MultiPoly::var("x");
        let y = MultiPoly::var("y");
        let eqs = vec![&x * &(&x.pow(2) - &MultiPoly::constant(rat(1, 4))), &y - &x.scale(&int(2))];
        let s = solve_polynomial_system(&eqs, &["x".into(), "y".into()]);
        let mut xs: Vec<Rat> = s.solutions.iter().map(|s| s.values["x"].as_constant().unwrap()).collect();
        xs.sort();
        assert_eq!(xs, vec![rat(-1, 2), int(0), rat(1, 2)]);
        assert!(s.solutions.iter().all(|s| s.values["y"] == s.values["x"].scale(&int(2))));
        let sheets: Vec<Option<i8>> = s.solutions.iter().map(|s| s.sheet).collect();
        assert!(sheets.contains(&Some(1)) && sheets.contains(&Some(-1)));
    }

    #[test]
    fn irrational_branches_are_counted() {
        let x = MultiPoly::var("x");
        let s = solve_polynomial_system(&[&x.pow(2) - &MultiPoly::from_int(2)], &["x".into()]);
        assert!(s.solutions.is_empty());
        assert_eq!(s.dropped, 1);
    }

    #[test]
    fn non_monomial_factors_split() {
        // (y - 1)(z - x + 1) = 0, x = 2
        let v = |n: &str| MultiPoly::var(n);
        let one = MultiPoly::one();
        let eqs = vec![&(&v("y") - &one) * &(&(&v("z") - &v("x")) + &one), &v("x") - &MultiPoly::from_int(2)];
        let s = solve_polynomial_system(&eqs, &["x".into(), "y".into(), "z".into()]);
        assert_eq!(s.dropped, 0);
        assert_eq!(s.solutions.len(), 2);
        assert!(s.solutions.iter().any(|s| s.values["y"] == one && s.values["z"] == v("z")));
        assert!(s.solutions.iter().any(|s| s.values["z"] == one && s.values["y"] == v("y")));
    }

    #[test]
    fn free_unknowns_survive() {
        let x = MultiPoly::var("x");
        let y = MultiPoly::var("y");
        let s = solve_polynomial_system(&[&y + &x], &["x".into(), "y".into()]);
        assert_eq!(s.solutions.len(), 1);
        assert_eq!(s.solutions[0].values["x"], x);
        assert_eq!(s.solutions[0].values["y"], -x);
    }
}
