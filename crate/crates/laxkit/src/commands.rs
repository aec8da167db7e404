use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::Path;

use exactalg::rational::to_f64;
use exactalg::Rat;
use jacobispec::{orthogonality_check, spectral_report, toda_csv, toda_flow_jacobi, measure_decompose, PeriodicJacobi};
use laxflow::builtins::{eval_pencil_spec, flaschka, kvm_curve, toda_b, toda_coordinates, toda_open, toda_periodic, EulerArnold, Manakov, RankTwo};
use laxflow::{integrate_lax, invariant_drift, isospectral_drift, isospectral_relative_drift, CompiledSystem, MatrixPencil, StepConfig, Trajectory};
use nalgebra::DMatrix;
use painleve::analyze;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sysdsl::{builtin, parse_morphism, parse_system, VectorFieldSystem};

use crate::checks::{run_all, select, CheckOptions};
use crate::cli::{CheckArgs, FlowArgs, JacobiArgs, PainleveArgs};
use crate::error::CliError;
use crate::output::{csv_line, envelope, fmt_f64, Artifacts, Format};
use crate::values::{float_bindings, parse_float, parse_list, parse_rational};

/// Options shared by every command.
#[derive(Debug, Clone)]
pub struct Common {
    pub seed: u64,
    pub bindings: BTreeMap<String, Rat>,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })
}

/// Builtin name or file path to `(label, system)`.
fn load_system(input: Option<&Path>, builtin_name: Option<&str>) -> Result<(String, VectorFieldSystem), CliError> {
    match (input, builtin_name) {
        (_, Some(name)) => builtin::load(name)
            .map(|s| (name.to_string(), s))
            .ok_or_else(|| CliError::usage(format!("unknown builtin `{name}`; known: {}", builtin::names().collect::<Vec<_>>().join(", ")))),
        (Some(path), None) => {
            let sys = parse_system(&read(path)?)?;
            let label = path.file_stem().and_then(|s| s.to_str()).unwrap_or("system").to_string();
            Ok((label, sys))
        }
        (None, None) => Err(CliError::usage("give a system file or --builtin")),
    }
}

fn bind_all(mut sys: VectorFieldSystem, b: &BTreeMap<String, Rat>) -> Result<VectorFieldSystem, CliError> {
    for (name, value) in b {
        if sys.consts().contains(name) {
            sys = sys.bind(name, value)?;
        }
    }
    Ok(sys)
}

fn check_unused(b: &BTreeMap<String, Rat>, systems: &[&VectorFieldSystem]) -> Result<(), CliError> {
    for name in b.keys() {
        if !systems.iter().any(|s| s.consts().contains(name)) {
            return Err(CliError::usage(format!("--bind {name}: no such constant")));
        }
    }
    Ok(())
}

pub fn painleve(args: &PainleveArgs, common: &Common) -> Result<Artifacts, CliError> {
    if args.order == Some(0) {
        return Err(CliError::usage("--order must be at least 1"));
    }
    let (label, raw) = load_system(args.input.as_deref(), args.builtin.as_deref())?;
    let target = if args.morphism {
        let name = args.builtin.as_deref().ok_or_else(|| CliError::usage("--morphism needs --builtin"))?;
        let (_, dst, m) = builtin::morphism(name).ok_or_else(|| CliError::usage(format!("`{name}` has no shipped morphism")))?;
        Some((dst, m.components))
    } else if let (Some(path), Some(t)) = (&args.morphism_file, &args.target) {
        let (_, dst) = if Path::new(t).exists() { load_system(Some(Path::new(t)), None)? } else { load_system(None, Some(t))? };
        let m = parse_morphism(&read(path)?, &raw, &dst)?;
        Some((dst, m.components))
    } else {
        None
    };
    check_unused(&common.bindings, &[Some(&raw), target.as_ref().map(|t| &t.0)].into_iter().flatten().collect::<Vec<_>>())?;
    let sys = bind_all(raw, &common.bindings)?;
    let target = match target {
        Some((dst, comps)) => {
            let comps = comps
                .into_iter()
                .map(|c| common.bindings.iter().fold(c, |c, (n, v)| c.substitute_one(n, &exactalg::MultiPoly::constant(v.clone()))))
                .collect::<Vec<_>>();
            Some((bind_all(dst, &common.bindings)?, comps))
        }
        None => None,
    };
    let report = analyze(&sys, args.order, target.as_ref().map(|(d, c)| (d, c.as_slice())))?;

    let mut out = Artifacts::default();
    out.negative = report.has_obstruction();
    out.summary.push(format!(
        "{}: {} weight vector(s), principal explicit parameters {:?}, obstructions {}",
        label,
        report.weight_vectors.len(),
        report.principal_explicit,
        report.obstructions
    ));
    out.push(format!("painleve-{label}.json"), envelope("painleve", &report)?, Format::Json);
    let mut csv = csv_line(["weights", "balance", "sheet", "var", "exponent", "coefficient"].map(String::from));
    for wv in &report.weight_vectors {
        for (bi, b) in wv.balances.iter().enumerate() {
            let Some(f) = &b.family else { continue };
            for (var, terms) in &f.series {
                for (exp, c) in terms {
                    let sheet = b.sheet.map_or(String::new(), |s| s.to_string());
                    csv.push_str(&csv_line([wv.weights.join(" "), bi.to_string(), sheet, var.clone(), exp.clone(), c.clone()]));
                }
            }
        }
    }
    out.push(format!("painleve-{label}.csv"), csv, Format::Csv);
    Ok(out)
}

#[derive(Debug, Serialize)]
struct FlowSummary {
    system: String,
    kind: &'static str,
    dimension: usize,
    dt: f64,
    t_end: f64,
    steps: usize,
    seed: u64,
    initial: Vec<f64>,
    tolerance: f64,
    /// Max drift of `tr A(h)^k`, `k <= N`, over sampled h.
    #[serde(skip_serializing_if = "Option::is_none")]
    isospectral_drift: Option<f64>,
    /// Same, each term relative to `max(1, |tr A(0,h)^k|)`; this one is judged.
    #[serde(skip_serializing_if = "Option::is_none")]
    isospectral_relative_drift: Option<f64>,
    /// Per declared invariant.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    invariant_drift: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    kvm_curve: Option<laxflow::builtins::KvmCurve>,
    passed: bool,
}

const H_SAMPLES: [f64; 4] = [0.5, 1.0, -1.5, 2.0];

fn parse_x0(s: &Option<String>, len: usize) -> Result<Option<Vec<f64>>, CliError> {
    let Some(s) = s else { return Ok(None) };
    let v: Vec<f64> = s.split(',').map(parse_float).collect::<Result<_, _>>()?;
    if v.len() != len {
        return Err(CliError::usage(format!("--x0 needs {len} values, got {}", v.len())));
    }
    Ok(Some(v))
}

fn random_skew(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let m = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    &m - m.transpose()
}

fn skew_from(v: &[f64], n: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            m[(i, j)] = v[k];
            m[(j, i)] = -v[k];
            k += 1;
        }
    }
    m
}

fn skew_entries(m: &DMatrix<f64>) -> Vec<f64> {
    let n = m.nrows();
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| m[(i, j)]).collect()
}

struct LaxRun {
    traj: Trajectory<MatrixPencil>,
    /// Phase coordinates at each step, for the trajectory file.
    rows: Vec<Vec<f64>>,
    names: Vec<String>,
    initial: Vec<f64>,
    n: usize,
}

fn spread(n: usize) -> Vec<f64> {
    (0..n).map(|i| 1.0 + i as f64 + 0.25 * (i * i) as f64).collect()
}

fn lax_builtin(name: &str, n: Option<usize>, x0: &Option<String>, cfg: &StepConfig, rng: &mut ChaCha8Rng) -> Result<Option<LaxRun>, CliError> {
    let run = match name {
        "toda-periodic" | "toda-open" => {
            let periodic = name == "toda-periodic";
            let n = n.unwrap_or(3);
            let xy = match parse_x0(x0, 2 * n)? {
                Some(v) => v,
                None => (0..2 * n).map(|_| rng.gen_range(-1.0..1.0)).collect(),
            };
            let (a, b) = flaschka(&xy[..n], &xy[n..], periodic)?;
            let p = if periodic { toda_periodic(&a, &b)? } else { toda_open(&a, &b)? };
            let traj = integrate_lax(p, toda_b, cfg)?;
            let names = (1..=a.len()).map(|j| format!("a{j}")).chain((1..=n).map(|j| format!("b{j}"))).collect();
            let rows = traj
                .states
                .iter()
                .map(|p| {
                    let (a, b) = toda_coordinates(p);
                    a.into_iter().chain(b).collect()
                })
                .collect();
            LaxRun { traj, rows, names, initial: xy, n }
        }
        "euler-arnold" | "manakov" => {
            let n = n.unwrap_or(4);
            let m0 = match parse_x0(x0, n * (n - 1) / 2)? {
                Some(v) => skew_from(&v, n),
                None => random_skew(n, rng),
            };
            let names = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| format!("m{i}{j}"))).collect();
            let (traj, lead) = if name == "euler-arnold" {
                let beta: Vec<f64> = (0..n).map(|i| (i as f64 * 0.7).sin()).collect();
                let ea = EulerArnold::new(spread(n), beta)?;
                (integrate_lax(ea.pencil(&m0)?, |s| ea.b(s), cfg)?, 0)
            } else {
                let mk = Manakov::new(spread(n))?;
                let p = mk.pencil(&m0)?;
                let k = p.low();
                (integrate_lax(p, |s| mk.b(s), cfg)?, k)
            };
            // the skew part sits in the lowest block of both pencils
            let rows = traj.states.iter().map(|p| p.coeff(lead).map(skew_entries).unwrap_or_default()).collect();
            LaxRun { traj, rows, names, initial: skew_entries(&m0), n }
        }
        "neumann" | "jacobi-geodesic" => {
            let n = n.unwrap_or(4);
            let sys = if name == "neumann" { RankTwo::neumann(spread(n))? } else { RankTwo::jacobi_geodesic(spread(n))? };
            let s0 = match parse_x0(x0, 2 * n)? {
                Some(v) => v,
                None => {
                    // |x| = 1 and x.y = 0
                    let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                    let nx = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                    let x: Vec<f64> = x.iter().map(|v| v / nx).collect();
                    let y: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.5..0.5)).collect();
                    let dot: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
                    let y: Vec<f64> = y.iter().zip(&x).map(|(b, a)| b - dot * a).collect();
                    x.into_iter().chain(y).collect()
                }
            };
            let t = sys.integrate(s0.clone(), cfg)?;
            let mut pencils = Vec::with_capacity(t.states.len());
            for s in &t.states {
                pencils.push(sys.pencil(s)?);
            }
            let traj = Trajectory { times: t.times, states: pencils, dt: t.dt, method_order: t.method_order };
            let names = (1..=n).map(|j| format!("x{j}")).chain((1..=n).map(|j| format!("y{j}"))).collect();
            LaxRun { traj, rows: t.states, names, initial: s0, n }
        }
        _ => return Ok(None),
    };
    Ok(Some(run))
}

pub fn flow(args: &FlowArgs, common: &Common) -> Result<Artifacts, CliError> {
    if !(args.dt > 0.0 && args.dt.is_finite()) {
        return Err(CliError::usage(format!("--dt must be positive, got {}", args.dt)));
    }
    if !(args.t_end >= 0.0 && args.t_end.is_finite()) {
        return Err(CliError::usage(format!("--t-end must be nonnegative, got {}", args.t_end)));
    }
    if !(args.tol > 0.0) {
        return Err(CliError::usage("--tol must be positive"));
    }
    if args.n.is_some_and(|n| n < 2) {
        return Err(CliError::usage("-N must be at least 2"));
    }
    let cfg = StepConfig::new(args.dt, args.t_end);
    let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
    let stride = args.stride.max(1);
    let keep = |i: usize, len: usize| i.is_multiple_of(stride) || i + 1 == len;

    let mut csv = String::new();
    let summary;
    let label;
    if let Some(run) = match args.builtin.as_deref() {
        Some(name) => lax_builtin(name, args.n, &args.x0, &cfg, &mut rng)?,
        None => None,
    } {
        label = args.builtin.clone().unwrap_or_default();
        let drift = isospectral_drift(&run.traj, &H_SAMPLES, run.n as u32)?;
        let rel = isospectral_relative_drift(&run.traj, &H_SAMPLES, run.n as u32)?;
        let mut header = vec!["t".to_string()];
        header.extend(run.names.iter().cloned());
        header.extend((1..=run.n).map(|k| format!("I{k}")));
        csv.push_str(&csv_line(header));
        let len = run.traj.states.len();
        for (i, (t, p)) in run.traj.times.iter().zip(&run.traj.states).enumerate() {
            if !keep(i, len) {
                continue;
            }
            let mut row = vec![fmt_f64(*t)];
            row.extend(run.rows[i].iter().copied().map(fmt_f64));
            for k in 1..=run.n {
                row.push(fmt_f64(p.trace_power(1.0, k as u32)? / k as f64));
            }
            csv.push_str(&csv_line(row));
        }
        summary = FlowSummary {
            system: label.clone(),
            kind: "lax",
            dimension: run.n,
            dt: args.dt,
            t_end: args.t_end,
            steps: len - 1,
            seed: common.seed,
            initial: run.initial,
            tolerance: args.tol,
            isospectral_drift: Some(drift),
            isospectral_relative_drift: Some(rel),
            invariant_drift: BTreeMap::new(),
            kvm_curve: None,
            passed: rel < args.tol,
        };
    } else {
        let (name, raw) = load_system(args.input.as_deref(), args.builtin.as_deref())?;
        if args.n.is_some() {
            return Err(CliError::usage("-N applies to the Lax builtins only"));
        }
        label = name;
        check_unused(&common.bindings, &[&raw])?;
        if let Some(c) = raw.consts().iter().find(|c| !common.bindings.contains_key(*c)) {
            return Err(CliError::usage(format!("constant `{c}` is not bound; pass --bind {c}=VALUE")));
        }
        let fb: HashMap<String, f64> = float_bindings(&common.bindings);
        let compiled = CompiledSystem::new(&raw, &fb)?;
        let x0 = match parse_x0(&args.x0, raw.dim())? {
            Some(v) => v,
            // small and positive: bounded for the shipped systems, valid for kvm
            None => (0..raw.dim()).map(|_| rng.gen_range(0.1..0.4)).collect(),
        };
        let traj = compiled.integrate(x0.clone(), &cfg)?;
        let drifts = invariant_drift(&compiled, &traj);
        let inv_names: Vec<String> = raw.invariants().iter().map(|(n, _)| n.clone()).collect();
        let iso = match raw.pencils().first() {
            Some(spec) => {
                let eval = eval_pencil_spec(spec, &raw, &fb)?;
                let mut ps = Vec::with_capacity(traj.states.len());
                for s in &traj.states {
                    ps.push(eval(s)?.0);
                }
                let pt = Trajectory { times: traj.times.clone(), states: ps, dt: traj.dt, method_order: traj.method_order };
                let k = spec.dim as u32;
                Some((isospectral_drift(&pt, &H_SAMPLES, k)?, isospectral_relative_drift(&pt, &H_SAMPLES, k)?))
            }
            None => None,
        };
        let mut header = vec!["t".to_string()];
        header.extend(raw.vars().iter().cloned());
        header.extend(inv_names.iter().cloned());
        csv.push_str(&csv_line(header));
        let len = traj.states.len();
        for (i, (t, x)) in traj.times.iter().zip(&traj.states).enumerate() {
            if !keep(i, len) {
                continue;
            }
            let row = std::iter::once(*t).chain(x.iter().copied()).chain(compiled.invariant_values(x));
            csv.push_str(&csv_line(row.map(fmt_f64)));
        }
        let kvm = (args.builtin.as_deref() == Some("kvm")).then(|| {
            let v = compiled.invariant_values(traj.last());
            kvm_curve(v[0], v[1], v[2])
        });
        let passed = drifts.iter().all(|d| *d < args.tol) && iso.is_none_or(|d| d.1 < args.tol);
        summary = FlowSummary {
            system: label.clone(),
            kind: "polynomial",
            dimension: raw.dim(),
            dt: args.dt,
            t_end: args.t_end,
            steps: len - 1,
            seed: common.seed,
            initial: x0,
            tolerance: args.tol,
            isospectral_drift: iso.map(|d| d.0),
            isospectral_relative_drift: iso.map(|d| d.1),
            invariant_drift: inv_names.into_iter().zip(drifts).collect(),
            kvm_curve: kvm,
            passed,
        };
    }

    let mut out = Artifacts::default();
    out.negative = !summary.passed;
    let worst = summary.invariant_drift.values().copied().chain(summary.isospectral_relative_drift).fold(0.0, f64::max);
    out.summary.push(format!(
        "{}: max drift {:.3e} over t in [0, {}] at dt = {} ({})",
        label,
        worst,
        args.t_end,
        args.dt,
        if summary.passed { "within tolerance" } else { "over tolerance" }
    ));
    out.push(format!("flow-{label}.json"), envelope("flow", &summary)?, Format::Json);
    if args.gnuplot {
        let cols = csv.lines().next().unwrap_or("").split(',').count();
        let mut gp = "set datafile separator ','\nset key autotitle columnhead\nset xlabel 't'\nplot ".to_string();
        gp.push_str(&(2..=cols).map(|c| format!("'flow-{label}.csv' using 1:{c} with lines")).collect::<Vec<_>>().join(", \\\n     "));
        gp.push('\n');
        out.push(format!("flow-{label}.gp"), gp, Format::Csv);
    }
    out.files.insert(1, (format!("flow-{label}.csv"), csv, Format::Csv));
    Ok(out)
}

#[derive(Debug, Deserialize)]
struct JacobiInput {
    a: Vec<serde_json::Value>,
    b: Vec<serde_json::Value>,
    #[serde(default)]
    a0: Option<serde_json::Value>,
}

fn json_number(v: &serde_json::Value) -> Result<Rat, CliError> {
    match v {
        serde_json::Value::Number(n) => parse_rational(&n.to_string()),
        serde_json::Value::String(s) => parse_rational(s),
        other => Err(CliError::usage(format!("`{other}` is not a number"))),
    }
}

#[derive(Debug, Serialize)]
struct TodaSummary {
    dt: f64,
    t_end: f64,
    samples: usize,
    band_edge_drift: f64,
    trace_drift: f64,
    invariant_drift: Vec<f64>,
    min_abs_a: f64,
}

#[derive(Debug, Serialize)]
struct JacobiReport {
    spectral: jacobispec::SpectralReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    orthogonality: Option<jacobispec::Orthogonality>,
    #[serde(skip_serializing_if = "Option::is_none")]
    toda: Option<TodaSummary>,
    tolerance: f64,
    passed: bool,
}

pub fn jacobi(args: &JacobiArgs, common: &Common) -> Result<Artifacts, CliError> {
    if !(args.tol > 0.0) {
        return Err(CliError::usage("--tol must be positive"));
    }
    let (a, b, a0) = if let Some(path) = &args.input {
        let inp: JacobiInput = serde_json::from_str(&read(path)?)?;
        let a = inp.a.iter().map(json_number).collect::<Result<Vec<_>, _>>()?;
        let b = inp.b.iter().map(json_number).collect::<Result<Vec<_>, _>>()?;
        (a, b, inp.a0.as_ref().map(json_number).transpose()?)
    } else {
        let a0 = args.a0.as_deref().map(parse_rational).transpose()?;
        match (&args.a, &args.b, args.n) {
            (Some(a), Some(b), None) => (parse_list(a)?, parse_list(b)?, a0),
            (None, None, Some(n)) => {
                let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
                let a = (0..n).map(|_| exactalg::rational::rat(rng.gen_range(2..=12), 4)).collect();
                let b = (0..n).map(|_| exactalg::rational::rat(rng.gen_range(-8..=8), 4)).collect();
                (a, b, a0)
            }
            _ => return Err(CliError::usage("give -a and -b together, -N for a random matrix, or --input")),
        }
    };
    if a.len() != b.len() {
        return Err(CliError::usage(format!("-a has {} entries and -b has {}", a.len(), b.len())));
    }
    let m = PeriodicJacobi::new(a, b)?;
    let a0 = to_f64(&a0.unwrap_or_else(|| m.a_n().clone()));
    let spectral = spectral_report(&m, a0, args.check_stieltjes)?;
    let orthogonality = match args.orthogonality {
        Some(k) => Some(orthogonality_check(&m, &measure_decompose(&m, a0)?, k)?),
        None => None,
    };
    let toda_run = if args.toda {
        if !(args.dt > 0.0 && args.dt.is_finite()) || !(args.t_end >= 0.0 && args.t_end.is_finite()) {
            return Err(CliError::usage("--dt must be positive and --t-end nonnegative"));
        }
        let stride = ((args.t_end / args.dt / 50.0).round() as usize).max(1);
        Some(toda_flow_jacobi(&m, args.t_end, args.dt, stride)?)
    } else {
        None
    };
    let mut passed = true;
    if let Some(s) = &spectral.stieltjes {
        passed &= s.max_residual < args.tol && s.mass_error < args.tol;
    }
    if let Some(o) = &orthogonality {
        let scale = 1.0 + o.norms.iter().copied().fold(0.0, f64::max);
        passed &= o.max_off_diagonal < args.tol * scale && o.max_norm_error < args.tol * scale;
    }
    if let Some(r) = &toda_run {
        passed &= r.band_edge_drift < args.tol;
    }
    let mut out = Artifacts::default();
    out.negative = !passed;
    out.summary.push(format!(
        "N = {}: {} bands, genus {}, {} atom(s){}",
        spectral.n,
        spectral.bands.len(),
        spectral.genus,
        spectral.atoms.len(),
        spectral.stieltjes.as_ref().map_or(String::new(), |s| format!(", stieltjes residual {:.2e}", s.max_residual))
    ));
    let mut bands = csv_line(["j", "band_lo", "band_hi", "gap_lo", "gap_hi", "sigma", "atom_mass"].map(String::from));
    for (j, band) in spectral.bands.iter().enumerate() {
        let row = spectral.interlacing.get(j);
        let atom = spectral.atoms.iter().find(|a| a.gap == j + 1);
        bands.push_str(&csv_line([
            (j + 1).to_string(),
            fmt_f64(band.lo),
            fmt_f64(band.hi),
            row.map_or(String::new(), |r| fmt_f64(r.gap.lo)),
            row.map_or(String::new(), |r| fmt_f64(r.gap.hi)),
            row.map_or(String::new(), |r| fmt_f64(r.sigma)),
            atom.map_or(String::new(), |a| fmt_f64(a.mass)),
        ]));
    }
    let toda_csv_text = toda_run.as_ref().map(toda_csv);
    let report = JacobiReport {
        spectral,
        orthogonality,
        toda: toda_run.map(|r| TodaSummary {
            dt: r.dt,
            t_end: r.t_end,
            samples: r.samples.len(),
            band_edge_drift: r.band_edge_drift,
            trace_drift: r.trace_drift,
            invariant_drift: r.invariant_drift,
            min_abs_a: r.min_abs_a,
        }),
        tolerance: args.tol,
        passed,
    };
    out.push("jacobi.json", envelope("jacobi", &report)?, Format::Json);
    out.push("jacobi-bands.csv", bands, Format::Csv);
    if let Some(t) = toda_csv_text {
        out.push("jacobi-toda.csv", t, Format::Csv);
    }
    Ok(out)
}

#[derive(Debug, Serialize)]
struct CheckReport {
    tolerance_override: Option<f64>,
    seed: u64,
    criteria: Vec<crate::checks::CheckOutcome>,
    passed: usize,
    failed: usize,
}

pub fn check(args: &CheckArgs, common: &Common) -> Result<Artifacts, CliError> {
    if args.tol.is_some_and(|t| !(t > 0.0)) {
        return Err(CliError::usage("--tol must be positive"));
    }
    let criteria = select(&args.only).map_err(CliError::Usage)?;
    let opts = CheckOptions { tol: args.tol, seed: common.seed };
    let outcomes = run_all(&criteria, &opts);
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    let mut out = Artifacts::default();
    out.negative = failed > 0;
    let mut table = String::new();
    for o in &outcomes {
        table.push_str(&o.line());
        table.push('\n');
    }
    out.summary.push(format!("{} passed, {failed} failed", outcomes.len() - failed));
    let report = CheckReport { tolerance_override: args.tol, seed: common.seed, passed: outcomes.len() - failed, failed, criteria: outcomes };
    out.push("check.json", envelope("check", &report)?, Format::Json);
    out.push("check.txt", table, Format::Csv);
    Ok(out)
}
