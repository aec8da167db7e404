use std::collections::BTreeMap;

use exactalg::rational::int;
use exactalg::{MultiPoly, PuiseuxSeries, Rat, RingMatrix};
use num_traits::{ToPrimitive, Zero};
use sysdsl::VectorFieldSystem;

use crate::error::PainleveError;
use crate::indicial::{param_name, Balance};
use crate::kowalewski::kowalewski;
use crate::linalg::{combinations, eval_matrix, generic_point, matrix_symbols, rat_str};

/// A free parameter introduced at a resonance: the coefficient of `var` at
/// `level` (in units of t past the leading order) is `scale * name`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResonanceParam {
    pub level: Rat,
    pub name: String,
    pub var: String,
    pub scale: Rat,
}

/// Truncated Laurent (Puiseux) solutions `z_i(t)` depending on free parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentFamily {
    pub balance: Balance,
    pub ell: u32,
    /// Depth in units of t past the leading order.
    pub order: u32,
    /// One series per variable, exponents in `Z / ell`.
    pub series: Vec<PuiseuxSeries>,
    /// Balance parameters followed by resonance parameters.
    pub free_parameters: Vec<String>,
    pub resonance_params: Vec<ResonanceParam>,
    /// Symbolic constants of the system that appear in the coefficients.
    pub constants: Vec<String>,
    vars: Vec<String>,
}

impl LaurentFamily {
    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn series_of(&self, var: &str) -> Option<&PuiseuxSeries> {
        self.vars.iter().position(|v| v == var).map(|i| &self.series[i])
    }

    pub fn series_map(&self) -> BTreeMap<String, PuiseuxSeries> {
        self.vars.iter().cloned().zip(self.series.iter().cloned()).collect()
    }

    /// Coefficient of `t^exponent` in the series of `var`.
    pub fn coefficient(&self, var: &str, exponent: &Rat) -> Option<MultiPoly> {
        let s = self.series_of(var)?;
        let k = exponent * Rat::from_integer(self.ell.into());
        if !k.is_integer() {
            return Some(MultiPoly::zero());
        }
        s.coeff(k.to_integer().to_i64()?)
    }

    /// Substitutes the family into a polynomial in the phase variables.
    pub fn compose(&self, p: &MultiPoly) -> PuiseuxSeries {
        PuiseuxSeries::eval_poly(p, &self.series_map())
    }

    /// Symbol order used for printing coefficients.
    pub fn coefficient_symbols(&self) -> Vec<String> {
        self.free_parameters.iter().chain(&self.constants).cloned().collect()
    }
}

/// Explicit parameters and the total including the movable pole position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParameterCount {
    pub explicit: usize,
    pub total: usize,
}

pub fn count_free_parameters(fam: &LaurentFamily) -> ParameterCount {
    let explicit = fam.free_parameters.len();
    ParameterCount { explicit, total: explicit + 1 }
}

fn level_str(j: usize, ell: u32) -> String {
    rat_str(&Rat::new((j as i64).into(), (ell as i64).into()))
}

/// Propagates the balance to `order` steps (in units of t) past the leading
/// order. With weights in `Z / ell` the expansion runs in `s = t^(1/ell)`;
/// at step `j` the new coefficients solve `((j/ell) I - L) c_j = R_j`.
/// At a resonance the kernel directions become fresh parameters, placed on
/// pinned variables when the system declares pins.
pub fn propagate(sys: &VectorFieldSystem, bal: &Balance, order: u32) -> Result<LaurentFamily, PainleveError> {
    let m = sys.dim();
    let vars = sys.vars().to_vec();
    let ell = bal.ell();
    let ell_i = ell as i64;
    let kow = kowalewski(sys, bal)?;
    let needed = kow.max_resonance().map_or(1, |r| r.ceil().to_integer().to_u32().unwrap_or(u32::MAX) + 1);
    if order < needed {
        return Err(PainleveError::OrderTooLow { order, needed });
    }
    let lows: Vec<i64> =
        bal.exponents().iter().map(|l| (l * int(ell_i)).to_integer().to_i64().expect("small exponent")).collect();
    let n = (order * ell) as usize;
    let lmat = &kow.matrix;

    let mut coeffs: Vec<Vec<MultiPoly>> = bal.leading.iter().map(|c| vec![c.clone()]).collect();
    let mut params = bal.params.clone();
    let mut res_params: Vec<ResonanceParam> = Vec::new();
    let mut taken: Vec<String> = sys.symbols().to_vec();
    taken.extend(params.iter().cloned());

    for j in 1..=n {
        let map: BTreeMap<String, PuiseuxSeries> = (0..m)
            .map(|i| {
                let mut c = coeffs[i].clone();
                c.push(MultiPoly::zero());
                let s = PuiseuxSeries::from_coeffs(ell, -lows[i], c, Some(j as i64 + 1 - lows[i]));
                (vars[i].clone(), s)
            })
            .collect();
        let rhs: Vec<MultiPoly> = (0..m)
            .map(|i| {
                let e = j as i64 - lows[i] - ell_i;
                PuiseuxSeries::eval_poly(&sys.equations()[i], &map).coeff(e).expect("truncation covers the step")
            })
            .collect();
        let level = Rat::new((j as i64).into(), ell_i.into());
        let mmat = RingMatrix::from_fn(m, m, |a, b| {
            let v = -lmat.get(a, b).clone();
            if a == b { v + MultiPoly::constant(level.clone()) } else { v }
        });
        let det = mmat.det()?;
        let c: Vec<MultiPoly> = if !det.is_zero() {
            let Some(d) = det.as_constant() else {
                return Err(PainleveError::SingularStep { level: level_str(j, ell), det: det.to_string() });
            };
            let adj = mmat.adjugate()?;
            adj.apply(&rhs)?.iter().map(|x| x.scale(&d.recip())).collect()
        } else {
            let (c, fresh) = resonant_step(sys, &mmat, &rhs, &level, &vars, &mut taken, params.len())?;
            for p in fresh {
                params.push(p.name.clone());
                res_params.push(p);
            }
            c
        };
        for i in 0..m {
            coeffs[i].push(c[i].clone());
        }
    }

    let series: Vec<PuiseuxSeries> = (0..m)
        .map(|i| PuiseuxSeries::from_coeffs(ell, -lows[i], coeffs[i].clone(), Some(n as i64 + 1 - lows[i])))
        .collect();
    let constants: Vec<String> = sys
        .consts()
        .iter()
        .filter(|k| series.iter().any(|s| s.terms().any(|(_, c)| c.contains_var(k))))
        .cloned()
        .collect();
    let order_syms: Vec<String> = params.iter().chain(&constants).cloned().collect();
    let series = series
        .into_iter()
        .map(|s| s.map_coeffs(|c| c.with_vars(&order_syms).unwrap_or_else(|_| c.clone())))
        .collect();
    let fam = LaurentFamily {
        balance: bal.clone(),
        ell,
        order,
        series,
        free_parameters: params,
        resonance_params: res_params,
        constants,
        vars,
    };
    check_residual(sys, &fam)?;
    Ok(fam)
}

fn resonant_step(
    sys: &VectorFieldSystem,
    mmat: &RingMatrix<MultiPoly>,
    rhs: &[MultiPoly],
    level: &Rat,
    vars: &[String],
    taken: &mut Vec<String>,
    n_params: usize,
) -> Result<(Vec<MultiPoly>, Vec<ResonanceParam>), PainleveError> {
    let m = vars.len();
    let point = generic_point(&matrix_symbols(mmat));
    let mq = eval_matrix(mmat, &point);
    let r = mq.rank();
    let kdim = m - r;

    let pinned: Vec<(usize, Rat)> = sys
        .hints()
        .pins
        .iter()
        .filter(|p| &p.level == level)
        .filter_map(|p| vars.iter().position(|v| *v == p.var).map(|i| (i, p.scale.clone())))
        .collect();
    let mut candidates: Vec<Vec<usize>> = Vec::new();
    let mut preferred: Vec<usize> = pinned.iter().map(|(i, _)| *i).take(kdim).collect();
    for i in 0..m {
        if preferred.len() < kdim && !preferred.contains(&i) {
            preferred.push(i);
        }
    }
    candidates.push(preferred);
    candidates.extend(combinations(m, kdim));

    for free in candidates {
        let cols: Vec<usize> = (0..m).filter(|i| !free.contains(i)).collect();
        for rows in combinations(m, r) {
            let sub = mmat.submatrix(&rows, &cols);
            let Some(d) = sub.det()?.as_constant() else { continue };
            if d.is_zero() {
                continue;
            }
            let mut c = vec![MultiPoly::zero(); m];
            let mut fresh = Vec::new();
            for &f in &free {
                let name = param_name(sys, n_params + fresh.len(), taken);
                taken.push(name.clone());
                let scale = pinned.iter().find(|(i, _)| *i == f).map_or_else(|| int(1), |(_, s)| s.clone());
                c[f] = MultiPoly::var(&name).scale(&scale);
                fresh.push(ResonanceParam { level: level.clone(), name, var: vars[f].clone(), scale });
            }
            let reduced: Vec<MultiPoly> = rows
                .iter()
                .map(|&i| {
                    let mut acc = rhs[i].clone();
                    for &f in &free {
                        acc = acc - mmat.get(i, f) * &c[f];
                    }
                    acc
                })
                .collect();
            let x = sub.adjugate()?.apply(&reduced)?;
            for (k, &col) in cols.iter().enumerate() {
                c[col] = x[k].scale(&d.recip());
            }
            let residuals: Vec<String> = (0..m)
                .filter_map(|i| {
                    let mut acc = -rhs[i].clone();
                    for k in 0..m {
                        acc = acc + mmat.get(i, k) * &c[k];
                    }
                    (!acc.is_zero()).then(|| format!("{}: {}", vars[i], acc))
                })
                .collect();
            if !residuals.is_empty() {
                let certificate = mq
                    .transpose()
                    .kernel()
                    .into_iter()
                    .map(|v| v.iter().map(rat_str).collect::<Vec<_>>().join(" "))
                    .collect();
                return Err(PainleveError::Obstruction { level: rat_str(level), residuals, certificate });
            }
            return Ok((c, fresh));
        }
    }
    Err(PainleveError::SingularStep { level: rat_str(level), det: "no constant complementary minor".into() })
}

/// Verifies `dz/dt - f(z)` vanishes through the computed order.
pub fn check_residual(sys: &VectorFieldSystem, fam: &LaurentFamily) -> Result<(), PainleveError> {
    let map = fam.series_map();
    for (i, v) in fam.vars().iter().enumerate() {
        let lhs = fam.series[i].derivative();
        let rhs = PuiseuxSeries::eval_poly(&sys.equations()[i], &map);
        let diff = &lhs - &rhs;
        let bad = diff.terms().find(|(_, c)| !c.is_zero()).map(|(k, c)| (k, c.to_string()));
        if let Some((k, residual)) = bad {
            return Err(PainleveError::Residual {
                var: v.clone(),
                exponent: rat_str(&Rat::new(k.into(), (fam.ell as i64).into())),
                residual,
            });
        }
    }
    Ok(())
}
