//! The golden acceptance suite behind `laxkit check`.

use std::collections::BTreeSet;
use std::time::Instant;

use exactalg::rational::{int, parse as parse_rat, rat};
use exactalg::{MultiPoly, Rat};
use jacobispec::{moments_exact, pade_exact, series_at_infinity, spectral_data, spectral_report, PeriodicJacobi};
use laxflow::builtins::{flaschka, toda_b, toda_periodic, EulerArnold};
use laxflow::{
    convergence_study, coordinate_triples, flip_poisson_entry, hamiltonian_field, integrate_lax, integrate_pencil_field,
    isospectral_drift, isospectral_rms_drift, jacobi_identity_check, random_points, rigid_body_dims, bracket_polynomial,
    MatrixPencil, StepConfig,
};
use nalgebra::DMatrix;
use painleve::{
    analyze, constraint_curve, detect_weights, indicial_solve, kowalewski, propagate, weight_checks, LaurentFamily,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sysdsl::{builtin, parse_expr, VectorFieldSystem};

const SERIES: &str = include_str!("../golden/series.txt");
const CURVES: &str = include_str!("../golden/curves.txt");
const RIGID: &str = include_str!("../golden/rigid.txt");

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Criterion {
    pub id: u8,
    pub group: &'static str,
    pub name: &'static str,
    /// Wall-clock budget in seconds, if the criterion has one.
    pub budget: Option<f64>,
}

pub const CRITERIA: [Criterion; 10] = [
    Criterion { id: 1, group: "painleve", name: "henon-heiles golden series", budget: Some(10.0) },
    Criterion { id: 2, group: "painleve", name: "rdg and rdg-5 golden series, both sheets", budget: Some(30.0) },
    Criterion { id: 3, group: "painleve", name: "constraint curves", budget: Some(30.0) },
    Criterion { id: 4, group: "painleve", name: "free parameter counts", budget: Some(10.0) },
    Criterion { id: 5, group: "painleve", name: "invariant weights in spectrum(L)", budget: None },
    Criterion { id: 6, group: "poisson", name: "involutions and casimirs", budget: None },
    Criterion { id: 7, group: "flow", name: "isospectrality and rk4 order", budget: Some(20.0) },
    Criterion { id: 8, group: "jacobi", name: "jacobi spectral suite", budget: Some(60.0) },
    Criterion { id: 9, group: "flow", name: "rigid body dimensions", budget: None },
    Criterion { id: 10, group: "poisson", name: "negative controls", budget: None },
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckOptions {
    /// Replaces every floating-point tolerance when set.
    pub tol: Option<f64>,
    pub seed: u64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { tol: None, seed: 1 }
    }
}

impl CheckOptions {
    fn tol(&self, pinned: f64) -> f64 {
        self.tol.unwrap_or(pinned)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub id: u8,
    pub group: String,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    #[serde(skip)]
    pub seconds: f64,
}

impl CheckOutcome {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} [{}] {}: {} ({:.2}s) {}",
            self.id,
            self.group,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.seconds,
            self.detail
        )
    }
}

type Verdict = Result<(bool, String), String>;

/// Criteria whose id or group appears in `only` (all when empty).
pub fn select(only: &[String]) -> Result<Vec<Criterion>, String> {
    if only.is_empty() {
        return Ok(CRITERIA.to_vec());
    }
    let mut ids = BTreeSet::new();
    for item in only.iter().flat_map(|s| s.split(',')) {
        let item = item.trim();
        let hit: Vec<u8> = CRITERIA.iter().filter(|c| c.group == item || c.id.to_string() == item).map(|c| c.id).collect();
        if hit.is_empty() {
            return Err(format!("unknown criterion or group `{item}`"));
        }
        ids.extend(hit);
    }
    Ok(CRITERIA.iter().filter(|c| ids.contains(&c.id)).copied().collect())
}

pub fn run(c: &Criterion, opts: &CheckOptions) -> CheckOutcome {
    let start = Instant::now();
    let verdict = match c.id {
        1 => golden_series(&["henon-heiles"]),
        2 => golden_series(&["rdg", "rdg-5"]),
        3 => curves(),
        4 => parameter_counts(),
        5 => weights_in_spectrum(),
        6 => involutions(),
        7 => isospectrality(opts),
        8 => jacobi_suite(opts),
        9 => rigid_dims(),
        10 => negative_controls(opts),
        _ => Err(format!("no criterion {}", c.id)),
    };
    let seconds = start.elapsed().as_secs_f64();
    let (mut passed, mut detail) = verdict.unwrap_or_else(|e| (false, format!("error: {e}")));
    if let Some(b) = c.budget {
        if seconds > b {
            passed = false;
            detail = format!("{detail}; over the {b}s budget");
        }
    }
    CheckOutcome { id: c.id, group: c.group.into(), name: c.name.into(), passed, detail, seconds }
}

pub fn run_all(criteria: &[Criterion], opts: &CheckOptions) -> Vec<CheckOutcome> {
    criteria.iter().map(|c| run(c, opts)).collect()
}

fn load(name: &str) -> Result<VectorFieldSystem, String> {
    builtin::load(name).ok_or_else(|| format!("no builtin `{name}`"))
}

fn parse_weights(s: &str) -> Result<Vec<Rat>, String> {
    s.split(',').map(|w| parse_rat(w).ok_or_else(|| format!("bad weight `{w}`"))).collect()
}

/// Families on the given weight vector that carry the most free parameters.
fn families_on(sys: &VectorFieldSystem, weights: &[Rat], order: u32) -> Result<Vec<LaurentFamily>, String> {
    let wv = detect_weights(sys)
        .into_iter()
        .find(|w| w.weights == weights)
        .ok_or_else(|| format!("{}: weight vector not detected", sys.name()))?;
    let mut out = Vec::new();
    for b in indicial_solve(sys, &wv).map_err(|e| e.to_string())? {
        out.push(propagate(sys, &b, order).map_err(|e| e.to_string())?);
    }
    let best = out.iter().map(|f| f.free_parameters.len()).max().unwrap_or(0);
    out.retain(|f| f.free_parameters.len() == best);
    Ok(out)
}

fn sheet_poly(fam: &LaurentFamily, src: &str) -> Result<MultiPoly, String> {
    let mut syms = fam.coefficient_symbols();
    syms.push("e".into());
    let p = parse_expr(src, &syms, 1, 1).map_err(|e| format!("golden `{src}`: {e}"))?;
    let e = MultiPoly::from_int(fam.balance.sheet.map_or(1, i64::from));
    Ok(p.substitute_one("e", &e).compact())
}

fn golden_series(systems: &[&str]) -> Verdict {
    let mut checked = 0;
    let mut sheets = 0;
    let mut mismatches = Vec::new();
    for line in SERIES.lines().filter(|l| l.starts_with("family ")) {
        let w: Vec<&str> = line.split_whitespace().collect();
        let [_, name, order, weights, count] = w[..] else { return Err(format!("bad line `{line}`")) };
        if !systems.contains(&name) {
            continue;
        }
        let sys = load(name)?;
        let order: u32 = order.parse().map_err(|_| format!("bad order in `{line}`"))?;
        let fams = families_on(&sys, &parse_weights(weights)?, order)?;
        let want: usize = count.parse().map_err(|_| format!("bad count in `{line}`"))?;
        if fams.len() != want {
            return Ok((false, format!("{name}: {} principal families, expected {want}", fams.len())));
        }
        for fam in &fams {
            sheets += 1;
            for row in SERIES.lines().filter(|l| l.starts_with(&format!("{name} "))) {
                let r: Vec<&str> = row.splitn(4, ' ').collect();
                let [_, var, exp, coeff] = r[..] else { return Err(format!("bad row `{row}`")) };
                let exp = parse_rat(exp).ok_or_else(|| format!("bad exponent in `{row}`"))?;
                let got = fam.coefficient(var, &exp).ok_or_else(|| format!("{name}: no variable {var}"))?.compact();
                let want = sheet_poly(fam, coeff)?;
                checked += 1;
                if got != want {
                    mismatches.push(format!("{name} sheet {:?} {var} t^{exp}: got {got}, want {want}", fam.balance.sheet));
                }
            }
        }
    }
    if checked == 0 {
        return Err("no golden rows".into());
    }
    Ok(match mismatches.first() {
        None => (true, format!("{checked} coefficients exact over {sheets} families")),
        Some(m) => (false, format!("{} of {checked} differ, first: {m}", mismatches.len())),
    })
}

fn curves() -> Verdict {
    let mut done = Vec::new();
    for line in CURVES.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()) {
        let (head, poly) = line.split_once('|').ok_or_else(|| format!("bad line `{line}`"))?;
        let w: Vec<&str> = head.split_whitespace().collect();
        let [name, order, weights, sheet, symbols] = w[..] else { return Err(format!("bad line `{line}`")) };
        let sys = load(name)?;
        let fams = families_on(&sys, &parse_weights(weights)?, order.parse().map_err(|_| "bad order".to_string())?)?;
        let sheet = match sheet {
            "." => None,
            s => Some(s.parse::<i8>().map_err(|_| format!("bad sheet `{s}`"))?),
        };
        let fam = fams.iter().find(|f| f.balance.sheet == sheet).ok_or_else(|| format!("{name}: no family on sheet {sheet:?}"))?;
        let names: Vec<&str> = sys.invariants().iter().map(|(n, _)| n.as_str()).collect();
        let got = constraint_curve(&sys, fam, &names).map_err(|e| e.to_string())?.canonical();
        let syms: Vec<String> = symbols.split(',').map(String::from).collect();
        let want = parse_expr(poly.trim(), &syms, 1, 1).map_err(|e| e.to_string())?.canonical();
        if got != vec![want.clone()] {
            let shown: Vec<String> = got.iter().map(|p| p.to_string()).collect();
            return Ok((false, format!("{name}: got {shown:?}, want {want}")));
        }
        done.push(name);
    }
    Ok((true, format!("exact canonical match for {}", done.join(", "))))
}

fn parameter_counts() -> Verdict {
    let mut parts = Vec::new();
    let mut ok = true;
    // (system, phase dimension m, expected explicit parameters)
    for (name, m, explicit) in [("kvm", 5usize, 4usize), ("henon-heiles", 4, 3), ("rdg", 4, 3)] {
        let r = analyze(&load(name)?, None, None).map_err(|e| e.to_string())?;
        let (e, t) = (r.principal_explicit, r.principal_total);
        ok &= e == Some(explicit) && t == Some(explicit + 1) && explicit == m - 1 && r.obstructions == 0;
        parts.push(format!("{name}: {} explicit + t0 = {} (m-1 = {})", e.unwrap_or(0), t.unwrap_or(0), m - 1));
    }
    Ok((ok, parts.join("; ")))
}

fn weights_in_spectrum() -> Verdict {
    // KvM: every balance where dH is nonzero at the leading term has the weight in its spectrum
    let sys = load("kvm")?;
    let mut seen = BTreeSet::new();
    let mut consistent = true;
    for wv in detect_weights(&sys) {
        for b in indicial_solve(&sys, &wv).unwrap_or_default() {
            let k = kowalewski(&sys, &b).map_err(|e| e.to_string())?;
            for c in weight_checks(&sys, &b, &k) {
                consistent &= c.consistent();
                if c.gradient_nonzero && c.in_spectrum {
                    seen.insert(c.weight.to_string());
                }
            }
        }
    }
    let kvm_ok = consistent && ["1", "2", "5"].iter().all(|w| seen.contains(*w));

    // RDG: weights 4 and 8 in tau = t^(1/ell) units
    let sys = load("rdg")?;
    let fams = families_on(&sys, &parse_weights("1/2,1,3/2,2")?, 6)?;
    let fam = fams.first().ok_or("no rdg family")?;
    let k = kowalewski(&sys, &fam.balance).map_err(|e| e.to_string())?;
    let ell = int(fam.ell as i64);
    let scaled: Vec<Rat> = k.exact.iter().map(|(r, _)| r * &ell).collect();
    let rdg_ok = scaled.contains(&int(4)) && scaled.contains(&int(8));
    let shown: Vec<String> = scaled.iter().map(|r| r.to_string()).collect();
    Ok((
        kvm_ok && rdg_ok,
        format!(
            "kvm weights in spectrum {:?} (consistent: {consistent}); rdg spectrum x {} = {{{}}}",
            seen,
            fam.ell,
            shown.join(", ")
        ),
    ))
}

fn involutions() -> Verdict {
    let cases: [(&str, (&str, &str), Option<&str>); 4] = [
        ("henon-heiles", ("H1", "H2"), None),
        ("henon-heiles-5", ("F1", "F2"), Some("F3")),
        ("rdg-5", ("F1", "F2"), Some("F3")),
        ("kvm", ("H1", "H2"), Some("H3")),
    ];
    let mut parts = Vec::new();
    let mut ok = true;
    for (name, (f, g), casimir) in cases {
        let sys = load(name)?;
        let b = bracket_polynomial(&sys, f, g).map_err(|e| e.to_string())?;
        let mut good = b.is_zero();
        let mut msg = format!("{name}: {{{f},{g}}} = {}", if b.is_zero() { "0".to_string() } else { b.to_string() });
        if let Some(c) = casimir {
            let field = hamiltonian_field(&sys, c).map_err(|e| e.to_string())?;
            let zero = field.iter().all(MultiPoly::is_zero);
            good &= zero;
            msg.push_str(&format!(", J grad {c} {}", if zero { "= 0" } else { "!= 0" }));
        }
        ok &= good;
        parts.push(msg);
    }
    Ok((ok, parts.join("; ")))
}

fn random_skew(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let m = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    &m - m.transpose()
}

fn isospectrality(opts: &CheckOptions) -> Verdict {
    let tol = opts.tol(1e-8);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let x: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let y: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let (a, b) = flaschka(&x, &y, true).map_err(|e| e.to_string())?;
    let toda = toda_periodic(&a, &b).map_err(|e| e.to_string())?;
    let ea = EulerArnold::new(vec![1.0, 2.0, 3.5, 5.0], vec![0.3, -0.4, 0.9, 0.2]).map_err(|e| e.to_string())?;
    let x0 = ea.pencil(&random_skew(4, &mut rng)).map_err(|e| e.to_string())?;
    let hs = [0.5, 1.0, -1.5, 2.0];
    let run = |p: &MatrixPencil, toda_flow: bool, dt: f64| {
        let cfg = StepConfig::new(dt, 1.0);
        if toda_flow { integrate_lax(p.clone(), toda_b, &cfg) } else { integrate_lax(p.clone(), |s| ea.b(s), &cfg) }
    };
    let d_toda = isospectral_drift(&run(&toda, true, 1e-3).map_err(|e| e.to_string())?, &hs, 3).map_err(|e| e.to_string())?;
    let d_ea = isospectral_drift(&run(&x0, false, 1e-3).map_err(|e| e.to_string())?, &hs, 4).map_err(|e| e.to_string())?;
    // order measured where the error is above rounding: dt0 halved twice
    let (_, r_toda) = convergence_study(0.05, 3, |dt| isospectral_rms_drift(&run(&toda, true, dt)?, &[1.0, 2.0], 3))
        .map_err(|e| e.to_string())?;
    let (_, r_ea) = convergence_study(0.025, 3, |dt| isospectral_rms_drift(&run(&x0, false, dt)?, &[0.7, 1.3], 4))
        .map_err(|e| e.to_string())?;
    let in_band = |r: &[f64]| r.iter().all(|v| (12.0..=20.0).contains(v));
    let ok = d_toda < tol && d_ea < tol && in_band(&r_toda) && in_band(&r_ea);
    let fmt = |r: &[f64]| r.iter().map(|v| format!("{v:.2}")).collect::<Vec<_>>().join(",");
    Ok((
        ok,
        format!(
            "drift toda {d_toda:.1e}, so(4) {d_ea:.1e} (tol {tol:.0e}); halving ratios toda [{}], so(4) [{}] (16 +- 25%)",
            fmt(&r_toda),
            fmt(&r_ea)
        ),
    ))
}

fn random_jacobi(n: usize, rng: &mut ChaCha8Rng) -> Result<PeriodicJacobi, String> {
    let a: Vec<Rat> = (0..n).map(|_| rat(rng.gen_range(2..=12), 4)).collect();
    let b: Vec<Rat> = (0..n).map(|_| rat(rng.gen_range(-8..=8), 4)).collect();
    PeriodicJacobi::new(a, b).map_err(|e| e.to_string())
}

fn jacobi_suite(opts: &CheckOptions) -> Verdict {
    let (tol_s, tol_m) = (opts.tol(1e-6), opts.tol(1e-8));
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut worst_s: f64 = 0.0;
    let mut worst_m: f64 = 0.0;
    let mut pade_ok = true;
    let mut count = 0;
    for n in [2, 3, 4] {
        for _ in 0..3 {
            let m = random_jacobi(n, &mut rng)?;
            let a0: f64 = rng.gen_range(2..=8) as f64 / 4.0;
            // interlacing is asserted inside spectral_data
            spectral_data(&m).map_err(|e| e.to_string())?;
            let r = spectral_report(&m, a0, true).map_err(|e| e.to_string())?;
            let s = r.stieltjes.ok_or("missing check block")?;
            worst_s = worst_s.max(s.max_residual);
            worst_m = worst_m.max(s.mass_error);
            let (a, b) = m.sequences_exact(12);
            let a0q = exactalg::rational::from_f64(a0);
            let cs = moments_exact(&a, &b, &a0q, 10).map_err(|e| e.to_string())?;
            for k in 1..=5 {
                let (ak, bk) = pade_exact(&a, &b, &a0q, k).map_err(|e| e.to_string())?;
                pade_ok &= series_at_infinity(&ak, &bk, 2 * k)[..] == cs[..2 * k];
            }
            count += 1;
        }
    }
    let ok = worst_s < tol_s && worst_m < tol_m && pade_ok;
    Ok((
        ok,
        format!(
            "{count} matrices (N = 2,3,4): interlacing ok, stieltjes residual {worst_s:.1e} (tol {tol_s:.0e}), mass error {worst_m:.1e} (tol {tol_m:.0e}), pade moments exact: {pade_ok}"
        ),
    ))
}

fn rigid_dims() -> Verdict {
    for n in 3..=50u32 {
        let d = rigid_body_dims(n).map_err(|e| e.to_string())?;
        let orbit = n * (n - 1) / 2 - n / 2;
        if d.dim_orbit != orbit || 2 * d.dim_prym != d.dim_orbit || d.genus_c - d.genus_c0 != d.dim_prym {
            return Ok((false, format!("n = {n}: {d:?}")));
        }
    }
    for line in RIGID.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()) {
        let v: Vec<u32> = line.split_whitespace().map(|x| x.parse().map_err(|_| format!("bad row `{line}`"))).collect::<Result<_, _>>()?;
        let d = rigid_body_dims(v[0]).map_err(|e| e.to_string())?;
        if [d.dim_orbit, d.genus_c, d.genus_c0, d.dim_prym] != v[1..5] {
            return Ok((false, format!("n = {}: got {d:?}, table says {:?}", v[0], &v[1..])));
        }
    }
    Ok((true, "identities hold for 3 <= n <= 50; n = 3,4,5 match the table".into()))
}

fn negative_controls(opts: &CheckOptions) -> Verdict {
    // Toda pencil moved by a symmetric (not commutator) field
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let x: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let y: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let (a, b) = flaschka(&x, &y, true).map_err(|e| e.to_string())?;
    let p = toda_periodic(&a, &b).map_err(|e| e.to_string())?;
    let bp = toda_b(&p).map_err(|e| e.to_string())?;
    let coeff = |k: i32| bp.coeff(k).cloned().ok_or_else(|| format!("no h^{k} block"));
    let field = MatrixPencil::new(-1, vec![coeff(-1)?, DMatrix::identity(3, 3) + coeff(0)?, coeff(1)?]).map_err(|e| e.to_string())?;
    let t = integrate_pencil_field(p, |_| Ok(field.clone()), &StepConfig::new(1e-3, 1.0)).map_err(|e| e.to_string())?;
    let drift = isospectral_drift(&t, &[1.0], 3).map_err(|e| e.to_string())?;

    // 5-variable Henon-Heiles bracket with one entry sign-flipped
    let sys = load("henon-heiles-5")?;
    let bad = flip_poisson_entry(&sys, 0, 3).map_err(|e| e.to_string())?.bind("A", &int(2)).map_err(|e| e.to_string())?;
    let r = jacobi_identity_check(&bad, &coordinate_triples(&bad), &random_points(5, 3, opts.seed)).map_err(|e| e.to_string())?;
    let witness = r.witness.map(|w| format!("{:?} = {}", w.triple, w.value));
    let ok = drift > 1e-3 && witness.is_some();
    Ok((
        ok,
        format!("non-commutator drift {drift:.2e} (> 1e-3); corrupted J witness: {}", witness.unwrap_or_else(|| "none".into())),
    ))
}
