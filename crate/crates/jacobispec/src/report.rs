use std::fmt::Write;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::JacobiError;
use crate::fraction::gamma_fraction;
use crate::jacobi::{spectral_data, Interval, PeriodicJacobi};
use crate::measure::{measure_from_spectral, Atom};
use crate::toda::TodaRun;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterlacingRow {
    pub j: usize,
    pub gap: Interval,
    pub sigma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StieltjesCheck {
    pub depth: usize,
    pub points: Vec<[f64; 2]>,
    pub max_residual: f64,
    pub total_mass: f64,
    pub mass_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralReport {
    pub n: usize,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub a0: f64,
    pub alpha: f64,
    pub p: Vec<f64>,
    pub branch_points: Vec<f64>,
    pub bands: Vec<Interval>,
    pub interlacing: Vec<InterlacingRow>,
    pub genus: usize,
    pub atoms: Vec<Atom>,
    pub zero_mass_candidates: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stieltjes: Option<StieltjesCheck>,
}

/// Points `z` with distance at least `dist` from `[lo, hi]`: a ring of 20.
pub fn z_grid(lo: f64, hi: f64, dist: f64) -> Vec<Complex64> {
    let c = 0.5 * (lo + hi);
    let r = 0.5 * (hi - lo) + dist + 0.5;
    (0..20)
        .map(|k| {
            let th = std::f64::consts::PI * (2 * k + 1) as f64 / 20.0;
            Complex64::new(c + r * th.cos(), r * th.sin())
        })
        .collect()
}

pub fn spectral_report(m: &PeriodicJacobi, a0: f64, check: bool) -> Result<SpectralReport, JacobiError> {
    let sd = spectral_data(m)?;
    let measure = measure_from_spectral(m, &sd, a0)?;
    let interlacing = sd
        .gaps
        .iter()
        .zip(&sd.auxiliary_spectrum)
        .enumerate()
        .map(|(j, (g, s))| InterlacingRow { j: j + 1, gap: g.clone(), sigma: *s })
        .collect();
    let stieltjes = if check {
        let depth = 200;
        let (a, b) = m.sequences(depth);
        let lo = sd.branch_points[0];
        let hi = *sd.branch_points.last().expect("2N branch points");
        let grid = z_grid(lo, hi, 1.0);
        let mut worst: f64 = 0.0;
        for z in &grid {
            let f = gamma_fraction(&a, &b, a0, *z, depth)?;
            worst = worst.max((measure.stieltjes(*z)? - f).norm());
        }
        let total_mass = measure.total_mass()?;
        Some(StieltjesCheck {
            depth,
            points: grid.iter().map(|z| [z.re, z.im]).collect(),
            max_residual: worst,
            total_mass,
            mass_error: (total_mass - a0 * a0).abs(),
        })
    } else {
        None
    };
    Ok(SpectralReport {
        n: sd.n,
        a: m.a_f64(),
        b: m.b_f64(),
        a0,
        alpha: sd.alpha,
        p: sd.p.clone(),
        branch_points: sd.branch_points.clone(),
        bands: sd.stable_bands.clone(),
        interlacing,
        genus: sd.genus,
        atoms: measure.atoms.clone(),
        zero_mass_candidates: measure.dropped.clone(),
        stieltjes,
    })
}

/// One row per sample: time, a, b, band edges, auxiliary spectrum.
pub fn toda_csv(run: &TodaRun) -> String {
    let mut out = String::new();
    let Some(s0) = run.samples.first() else { return out };
    let n = s0.a.len();
    let mut cols = vec!["t".to_string()];
    cols.extend((1..=n).map(|j| format!("a{j}")));
    cols.extend((1..=n).map(|j| format!("b{j}")));
    cols.extend((1..=2 * n).map(|j| format!("xi{j}")));
    cols.extend((1..n).map(|j| format!("sigma{j}")));
    out.push_str(&cols.join(","));
    out.push('\n');
    for s in &run.samples {
        let row: Vec<String> = std::iter::once(s.time)
            .chain(s.a.iter().copied())
            .chain(s.b.iter().copied())
            .chain(s.band_edges.iter().copied())
            .chain(s.auxiliary_spectrum.iter().copied())
            .map(|v| format!("{v:.17e}"))
            .collect();
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}
