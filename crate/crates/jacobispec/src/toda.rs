use laxflow::builtins::toda_rhs;
use laxflow::{rk4, StepConfig};
use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::JacobiError;
use crate::jacobi::{spectral_data, PeriodicJacobi, SpectralData};

/// Flaschka state `(a_1..a_N, b_1..b_N)` packed in one vector.
fn split(y: &[f64]) -> (&[f64], &[f64]) {
    y.split_at(y.len() / 2)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TodaSample {
    pub time: f64,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub band_edges: Vec<f64>,
    pub auxiliary_spectrum: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TodaRun {
    pub dt: f64,
    pub t_end: f64,
    pub samples: Vec<TodaSample>,
    /// Max over samples of `max_i |xi_i(t) - xi_i(0)|`.
    pub band_edge_drift: f64,
    /// Max `|sum b(t) - sum b(0)|`.
    pub trace_drift: f64,
    /// Max `|I_k(t) - I_k(0)|` for `k = 1..N`, `I_k = tr A(1)^k / k`.
    pub invariant_drift: Vec<f64>,
    /// Smallest `|a_j(t)|` seen at any step.
    pub min_abs_a: f64,
}

/// `I_k = tr A(1)^k / k` for `k = 1..=k_max`.
pub fn toda_invariants(a: &[f64], b: &[f64], k_max: usize) -> Vec<f64> {
    let n = b.len();
    let mut m = DMatrix::<f64>::from_diagonal(&nalgebra::DVector::from_column_slice(b));
    for j in 0..n {
        let k = (j + 1) % n;
        m[(j, k)] += a[j];
        m[(k, j)] += a[j];
    }
    let mut p = m.clone();
    let mut out = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        out.push(p.trace() / k as f64);
        p = &p * &m;
    }
    out
}

/// Periodic Toda flow in Flaschka form, with the spectral data recomputed
/// every `sample_stride` steps. Interlacing violations and `a_j` reaching
/// zero are errors.
pub fn toda_flow_jacobi(m: &PeriodicJacobi, t_end: f64, dt: f64, sample_stride: usize) -> Result<TodaRun, JacobiError> {
    let n = m.n();
    let mut y0 = m.a_f64();
    y0.extend(m.b_f64());
    let rhs = |y: &Vec<f64>| {
        let (a, b) = split(y);
        let (mut da, db) = toda_rhs(a, b, true);
        da.extend(db);
        Ok(da)
    };
    let traj = rk4(y0, rhs, &StepConfig::new(dt, t_end))?;
    let (a0, b0) = split(traj.first());
    let inv0 = toda_invariants(a0, b0, n);
    let sum0: f64 = b0.iter().sum();
    let mut min_abs_a = f64::INFINITY;
    let mut trace_drift: f64 = 0.0;
    let mut invariant_drift = vec![0.0f64; n];
    for (t, y) in traj.times.iter().zip(&traj.states) {
        let (a, b) = split(y);
        if let Some(j) = a.iter().position(|x| *x == 0.0) {
            return Err(JacobiError::Degeneration { j: j + 1, time: *t });
        }
        min_abs_a = min_abs_a.min(y[..n].iter().fold(f64::INFINITY, |acc, x| acc.min(x.abs())));
        trace_drift = trace_drift.max((b.iter().sum::<f64>() - sum0).abs());
        for (d, (v, v0)) in invariant_drift.iter_mut().zip(toda_invariants(a, b, n).iter().zip(&inv0)) {
            *d = d.max((v - v0).abs());
        }
    }
    let stride = sample_stride.max(1);
    let last = traj.states.len() - 1;
    let mut samples = Vec::new();
    let mut first: Option<SpectralData> = None;
    let mut band_edge_drift: f64 = 0.0;
    for (i, (t, y)) in traj.times.iter().zip(&traj.states).enumerate() {
        if i % stride != 0 && i != last {
            continue;
        }
        let (a, b) = split(y);
        let sd = spectral_data(&PeriodicJacobi::from_f64(a, b)?)?;
        if let Some(f) = &first {
            for (x, x0) in sd.branch_points.iter().zip(&f.branch_points) {
                band_edge_drift = band_edge_drift.max((x - x0).abs());
            }
        }
        samples.push(TodaSample {
            time: *t,
            a: a.to_vec(),
            b: b.to_vec(),
            band_edges: sd.branch_points.clone(),
            auxiliary_spectrum: sd.auxiliary_spectrum.clone(),
        });
        if first.is_none() {
            first = Some(sd);
        }
    }
    Ok(TodaRun { dt, t_end, samples, band_edge_drift, trace_drift, invariant_drift, min_abs_a })
}
