use std::collections::BTreeMap;

use exactalg::{MultiPoly, Rat};
use serde::Serialize;
use sysdsl::VectorFieldSystem;

use crate::curve::constraint_curve;
use crate::error::PainleveError;
use crate::indicial::{indicial_solve, Balance};
use crate::kowalewski::{kowalewski, weight_checks, KowalewskiData};
use crate::linalg::rat_str;
use crate::morphism::restoring_morphism_check;
use crate::propagate::{count_free_parameters, propagate, LaurentFamily};
use crate::weights::detect_weights;

const DEFAULT_EXTRA_ORDER: u32 = 4;

#[derive(Debug, Clone, Serialize)]
pub struct EigenvalueEntry {
    pub value: String,
    pub multiplicity: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct WeightCheckEntry {
    pub invariant: String,
    pub weight: String,
    pub homogeneous: bool,
    pub gradient_nonzero: bool,
    pub in_spectrum: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResonanceEntry {
    pub level: String,
    pub name: String,
    pub var: String,
    pub scale: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyReport {
    pub order: u32,
    pub free_parameters: Vec<String>,
    pub resonance_parameters: Vec<ResonanceEntry>,
    pub explicit_parameters: usize,
    pub total_parameters: usize,
    /// variable -> exponent of t -> coefficient
    pub series: BTreeMap<String, BTreeMap<String, String>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CurveReport {
    pub relations: BTreeMap<String, String>,
    pub eliminated: Vec<String>,
    pub reduced: Vec<String>,
    pub canonical: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BalanceReport {
    pub leading: BTreeMap<String, String>,
    pub leading_exponents: BTreeMap<String, String>,
    pub sheet: Option<i8>,
    pub spectrum: Vec<EigenvalueEntry>,
    /// Eigenvalues that are not rational, as decimal strings.
    pub irrational_spectrum: Vec<String>,
    pub resonances: Vec<String>,
    pub parameter_dependent_spectrum: bool,
    pub weight_checks: Vec<WeightCheckEntry>,
    pub status: String,
    pub error: Option<String>,
    pub certificate: Vec<String>,
    pub principal: bool,
    pub family: Option<FamilyReport>,
    pub curve: Option<CurveReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct WeightReport {
    pub weights: Vec<String>,
    pub ell: u32,
    pub fractional: bool,
    pub balances: Vec<BalanceReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MorphismSummary {
    pub target: String,
    pub components: BTreeMap<String, String>,
    pub chain_rule: bool,
    pub integral_exponents: Option<bool>,
    pub failures: Vec<String>,
    pub target_curve: Option<CurveReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PainleveReport {
    pub system: String,
    pub dimension: usize,
    pub requested_order: Option<u32>,
    pub weight_vectors: Vec<WeightReport>,
    /// Largest explicit parameter count over all families.
    pub principal_explicit: Option<usize>,
    pub principal_total: Option<usize>,
    pub obstructions: usize,
    pub morphism: Option<MorphismSummary>,
}

impl PainleveReport {
    pub fn has_obstruction(&self) -> bool {
        self.obstructions > 0
    }
}

fn series_map(fam: &LaurentFamily) -> BTreeMap<String, BTreeMap<String, String>> {
    fam.vars()
        .iter()
        .zip(&fam.series)
        .map(|(v, s)| {
            let ell = Rat::from_integer((fam.ell as i64).into());
            let terms = s.terms().map(|(k, c)| (rat_str(&(Rat::from_integer(k.into()) / &ell)), c.to_string())).collect();
            (v.clone(), terms)
        })
        .collect()
}

fn family_report(fam: &LaurentFamily) -> FamilyReport {
    let count = count_free_parameters(fam);
    FamilyReport {
        order: fam.order,
        free_parameters: fam.free_parameters.clone(),
        resonance_parameters: fam
            .resonance_params
            .iter()
            .map(|r| ResonanceEntry {
                level: rat_str(&r.level),
                name: r.name.clone(),
                var: r.var.clone(),
                scale: rat_str(&r.scale),
            })
            .collect(),
        explicit_parameters: count.explicit,
        total_parameters: count.total,
        series: series_map(fam),
    }
}

fn curve_report(sys: &VectorFieldSystem, fam: &LaurentFamily) -> Result<Option<CurveReport>, PainleveError> {
    let names: Vec<&str> = sys.invariants().iter().map(|(n, _)| n.as_str()).collect();
    if names.is_empty() {
        return Ok(None);
    }
    let c = constraint_curve(sys, fam, &names)?;
    Ok(Some(CurveReport {
        relations: c.relations.iter().map(|r| (r.invariant.clone(), r.relation.to_string())).collect(),
        eliminated: c.eliminated.clone(),
        reduced: c.reduced.iter().map(MultiPoly::to_string).collect(),
        canonical: c.canonical().iter().map(MultiPoly::to_string).collect(),
    }))
}

fn spectrum_entries(k: &KowalewskiData) -> (Vec<EigenvalueEntry>, Vec<String>) {
    let exact = k.exact.iter().map(|(r, m)| EigenvalueEntry { value: rat_str(r), multiplicity: *m }).collect();
    let rational_count: u32 = k.exact.iter().map(|(_, m)| *m).sum();
    let mut other: Vec<String> = Vec::new();
    if (rational_count as usize) < k.eigenvalues.len() {
        for e in &k.eigenvalues {
            let z = e.value;
            let near_rational =
                k.exact.iter().any(|(r, _)| (num_traits::ToPrimitive::to_f64(r).unwrap_or(f64::NAN) - z.re).abs() < 1e-8)
                    && z.im.abs() < 1e-8;
            if !near_rational {
                other.push(if z.im.abs() < 1e-12 { format!("{:.12}", z.re) } else { format!("{:.12}{:+.12}i", z.re, z.im) });
            }
        }
    }
    (exact, other)
}

/// Propagation order used for one balance.
pub fn effective_order(requested: Option<u32>, kow: &KowalewskiData) -> u32 {
    let needed = kow.max_resonance().map_or(1, |r| {
        num_traits::ToPrimitive::to_u32(&r.ceil().to_integer()).unwrap_or(u32::MAX) + 1
    });
    match requested {
        Some(o) => o.max(needed),
        None => needed - 1 + DEFAULT_EXTRA_ORDER,
    }
}

struct Analyzed {
    report: BalanceReport,
    family: Option<LaurentFamily>,
}

fn analyze_balance(sys: &VectorFieldSystem, bal: &Balance, order: Option<u32>) -> Result<Analyzed, PainleveError> {
    let kow = kowalewski(sys, bal)?;
    let (spectrum, irrational_spectrum) = spectrum_entries(&kow);
    let checks = weight_checks(sys, bal, &kow)
        .into_iter()
        .map(|c| WeightCheckEntry {
            invariant: c.invariant,
            weight: rat_str(&c.weight),
            homogeneous: c.homogeneous,
            gradient_nonzero: c.gradient_nonzero,
            in_spectrum: c.in_spectrum,
        })
        .collect();
    let mut report = BalanceReport {
        leading: sys.vars().iter().cloned().zip(bal.leading.iter().map(|c| c.to_string())).collect(),
        leading_exponents: sys.vars().iter().cloned().zip(bal.exponents().iter().map(|e| rat_str(&-e))).collect(),
        sheet: bal.sheet,
        spectrum,
        irrational_spectrum,
        resonances: kow.resonances.iter().map(rat_str).collect(),
        parameter_dependent_spectrum: kow.parameter_dependent,
        weight_checks: checks,
        status: "ok".into(),
        error: None,
        certificate: Vec::new(),
        principal: false,
        family: None,
        curve: None,
    };
    let order = effective_order(order, &kow);
    match propagate(sys, bal, order) {
        Ok(fam) => {
            report.family = Some(family_report(&fam));
            Ok(Analyzed { report, family: Some(fam) })
        }
        Err(e) => {
            report.status = if matches!(e, PainleveError::Obstruction { .. }) { "obstruction" } else { "error" }.into();
            if let PainleveError::Obstruction { certificate, .. } = &e {
                report.certificate = certificate.clone();
            }
            report.error = Some(e.to_string());
            Ok(Analyzed { report, family: None })
        }
    }
}

fn principal_family(
    sys: &VectorFieldSystem,
    order: Option<u32>,
) -> Result<Option<LaurentFamily>, PainleveError> {
    let mut best: Option<LaurentFamily> = None;
    for wv in detect_weights(sys) {
        let Ok(bals) = indicial_solve(sys, &wv) else { continue };
        for bal in bals {
            let a = analyze_balance(sys, &bal, order)?;
            if let Some(f) = a.family {
                if best.as_ref().is_none_or(|b| f.free_parameters.len() > b.free_parameters.len()) {
                    best = Some(f);
                }
            }
        }
    }
    Ok(best)
}

/// Full pipeline: weights, balances, spectra, families, curves of the
/// principal families and, if given, a restoring morphism into `target`.
pub fn analyze(
    sys: &VectorFieldSystem,
    order: Option<u32>,
    morphism: Option<(&VectorFieldSystem, &[MultiPoly])>,
) -> Result<PainleveReport, PainleveError> {
    let mut weight_vectors = Vec::new();
    let mut families: Vec<(usize, usize, LaurentFamily)> = Vec::new();
    for (wi, wv) in detect_weights(sys).into_iter().enumerate() {
        let bals = match indicial_solve(sys, &wv) {
            Ok(b) => b,
            Err(PainleveError::NoBalance) => Vec::new(),
            Err(e) => return Err(e),
        };
        let mut reports = Vec::new();
        for (bi, bal) in bals.iter().enumerate() {
            let a = analyze_balance(sys, bal, order)?;
            if let Some(f) = a.family {
                families.push((wi, bi, f));
            }
            reports.push(a.report);
        }
        weight_vectors.push(WeightReport {
            weights: wv.weights.iter().map(rat_str).collect(),
            ell: wv.ell(),
            fractional: wv.ell() > 1,
            balances: reports,
        });
    }
    let principal_explicit = families.iter().map(|(_, _, f)| f.free_parameters.len()).max();
    for (wi, bi, fam) in &families {
        if Some(fam.free_parameters.len()) == principal_explicit {
            let r = &mut weight_vectors[*wi].balances[*bi];
            r.principal = true;
            r.curve = curve_report(sys, fam)?;
        }
    }
    let obstructions =
        weight_vectors.iter().flat_map(|w| &w.balances).filter(|b| b.status == "obstruction").count();

    let morphism = match morphism {
        None => None,
        Some((dst, phi)) => {
            let fam = families
                .iter()
                .filter(|(_, _, f)| Some(f.free_parameters.len()) == principal_explicit)
                .map(|(_, _, f)| f)
                .next();
            let check = restoring_morphism_check(sys, dst, phi, fam)?;
            let target_curve = match principal_family(dst, order)? {
                Some(f) => curve_report(dst, &f)?,
                None => None,
            };
            Some(MorphismSummary {
                target: dst.name().to_string(),
                components: dst.vars().iter().cloned().zip(phi.iter().map(|p| p.to_string())).collect(),
                chain_rule: check.chain_rule_holds(),
                integral_exponents: check.restores_integrality(),
                failures: check
                    .components
                    .iter()
                    .filter(|c| !c.residual.is_zero() || c.integral == Some(false))
                    .map(|c| c.target.clone())
                    .collect(),
                target_curve,
            })
        }
    };

    Ok(PainleveReport {
        system: sys.name().to_string(),
        dimension: sys.dim(),
        requested_order: order,
        weight_vectors,
        principal_explicit,
        principal_total: principal_explicit.map(|e| e + 1),
        obstructions,
        morphism,
    })
}
