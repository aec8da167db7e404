use std::collections::HashMap;

use exactalg::MultiPoly;
use num_traits::ToPrimitive;
use serde::Serialize;
use sysdsl::VectorFieldSystem;

use crate::error::LaxError;
use crate::pencil::MatrixPencil;

/// A state that can be advanced by a one-step method.
pub trait FlowState: Clone {
    /// `self + a * d`
    fn axpy(&self, a: f64, d: &Self) -> Self;
    fn max_abs(&self) -> f64;
}

impl FlowState for Vec<f64> {
    fn axpy(&self, a: f64, d: &Self) -> Self {
        self.iter().zip(d).map(|(x, y)| x + a * y).collect()
    }

    fn max_abs(&self) -> f64 {
        self.iter().fold(0.0, |m, x| if x.is_nan() { f64::NAN } else { m.max(x.abs()) })
    }
}

impl FlowState for MatrixPencil {
    fn axpy(&self, a: f64, d: &Self) -> Self {
        MatrixPencil::axpy(self, a, d)
    }

    fn max_abs(&self) -> f64 {
        if self.is_finite() { MatrixPencil::max_abs(self) } else { f64::NAN }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepConfig {
    pub dt: f64,
    pub t_end: f64,
    /// Abort once the state norm exceeds this.
    pub blowup: f64,
    /// Keep every `stride`-th state (the final state is always kept).
    pub stride: usize,
}

impl StepConfig {
    pub fn new(dt: f64, t_end: f64) -> Self {
        StepConfig { dt, t_end, blowup: 1e8, stride: 1 }
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.stride = stride.max(1);
        self
    }

    fn validate(&self) -> Result<(), LaxError> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(LaxError::StepSize(self.dt));
        }
        if !(self.t_end >= 0.0) || !self.t_end.is_finite() {
            return Err(LaxError::EndTime(self.t_end));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<S> {
    pub times: Vec<f64>,
    pub states: Vec<S>,
    pub dt: f64,
    pub method_order: u32,
}

impl<S> Trajectory<S> {
    pub fn first(&self) -> &S {
        &self.states[0]
    }

    pub fn last(&self) -> &S {
        self.states.last().expect("trajectory holds the initial state")
    }

    pub fn map<T>(&self, f: impl FnMut(&S) -> T) -> Trajectory<T> {
        Trajectory { times: self.times.clone(), states: self.states.iter().map(f).collect(), dt: self.dt, method_order: self.method_order }
    }
}

/// Classical fixed-step RK4. The step count is `ceil(t_end / dt)`, with the
/// last step shortened to land on `t_end`.
pub fn rk4<S, F>(y0: S, f: F, cfg: &StepConfig) -> Result<Trajectory<S>, LaxError>
where
    S: FlowState,
    F: Fn(&S) -> Result<S, LaxError>,
{
    cfg.validate()?;
    let steps = ((cfg.t_end / cfg.dt) - 1e-9).ceil().max(0.0) as usize;
    let mut times = vec![0.0];
    let mut states = vec![y0.clone()];
    let mut y = y0;
    let mut t = 0.0;
    for s in 0..steps {
        let h = if s + 1 == steps { cfg.t_end - t } else { cfg.dt };
        let k1 = f(&y)?;
        let k2 = f(&y.axpy(h / 2.0, &k1))?;
        let k3 = f(&y.axpy(h / 2.0, &k2))?;
        let k4 = f(&y.axpy(h, &k3))?;
        y = y.axpy(h / 6.0, &k1).axpy(h / 3.0, &k2).axpy(h / 3.0, &k3).axpy(h / 6.0, &k4);
        t = if s + 1 == steps { cfg.t_end } else { (s + 1) as f64 * cfg.dt };
        let norm = y.max_abs();
        if !(norm <= cfg.blowup) {
            return Err(LaxError::BlowUp { time: t, bound: cfg.blowup });
        }
        if (s + 1) % cfg.stride == 0 || s + 1 == steps {
            times.push(t);
            states.push(y.clone());
        }
    }
    Ok(Trajectory { times, states, dt: cfg.dt, method_order: 4 })
}

/// Integrates `dA/dt = [A, B(A)]` coefficientwise in h. Powers of h produced
/// by the commutator outside the window of `A` must cancel.
pub fn integrate_lax<B>(a0: MatrixPencil, b: B, cfg: &StepConfig) -> Result<Trajectory<MatrixPencil>, LaxError>
where
    B: Fn(&MatrixPencil) -> Result<MatrixPencil, LaxError>,
{
    let (low, high) = a0.h_range();
    rk4(
        a0,
        |a| {
            let bb = b(a)?;
            let c = a.commutator(&bb)?;
            let tol = 1e-9 * (1.0 + a.max_abs() * bb.max_abs());
            c.restrict(low, high, tol)
        },
        cfg,
    )
}

/// Integrates an arbitrary pencil-valued right-hand side (no commutator).
pub fn integrate_pencil_field<F>(a0: MatrixPencil, f: F, cfg: &StepConfig) -> Result<Trajectory<MatrixPencil>, LaxError>
where
    F: Fn(&MatrixPencil) -> Result<MatrixPencil, LaxError>,
{
    rk4(a0, f, cfg)
}

/// `max |tr A(t,h)^k - tr A(0,h)^k|` over the trajectory, the sample values
/// of h and `1 <= k <= k_max`.
pub fn isospectral_drift(traj: &Trajectory<MatrixPencil>, h_samples: &[f64], k_max: u32) -> Result<f64, LaxError> {
    Ok(isospectral_drift_by_power(traj, h_samples, k_max)?.into_iter().fold(0.0, f64::max))
}

/// Drift split by power `k = 1..=k_max`.
pub fn isospectral_drift_by_power(
    traj: &Trajectory<MatrixPencil>,
    h_samples: &[f64],
    k_max: u32,
) -> Result<Vec<f64>, LaxError> {
    let a0 = traj.first();
    let mut out = vec![0.0f64; k_max as usize];
    for &h in h_samples {
        for k in 1..=k_max {
            let base = a0.trace_power(h, k)?;
            for s in &traj.states {
                let d = (s.trace_power(h, k)? - base).abs();
                out[k as usize - 1] = out[k as usize - 1].max(d);
            }
        }
    }
    Ok(out)
}

/// Like [`isospectral_drift`] but each `(h, k)` term is divided by
/// `max(1, |tr A(0,h)^k|)`, so large pencils are not judged on roundoff.
pub fn isospectral_relative_drift(traj: &Trajectory<MatrixPencil>, h_samples: &[f64], k_max: u32) -> Result<f64, LaxError> {
    let a0 = traj.first();
    let mut worst = 0.0f64;
    for &h in h_samples {
        for k in 1..=k_max {
            let base = a0.trace_power(h, k)?;
            let scale = base.abs().max(1.0);
            for s in &traj.states {
                worst = worst.max((s.trace_power(h, k)? - base).abs() / scale);
            }
        }
    }
    Ok(worst)
}

/// Root-mean-square of `tr A(t,h)^k - tr A(0,h)^k` over every stored time,
/// sample of h and `1 <= k <= k_max`. Smoother than the maximum under step
/// refinement, so it is the quantity used to measure convergence order.
pub fn isospectral_rms_drift(traj: &Trajectory<MatrixPencil>, h_samples: &[f64], k_max: u32) -> Result<f64, LaxError> {
    let a0 = traj.first();
    let (mut acc, mut count) = (0.0, 0usize);
    for &h in h_samples {
        for k in 1..=k_max {
            let base = a0.trace_power(h, k)?;
            for s in &traj.states {
                acc += (s.trace_power(h, k)? - base).powi(2);
                count += 1;
            }
        }
    }
    Ok(if count == 0 { 0.0 } else { (acc / count as f64).sqrt() })
}

/// A polynomial compiled for fast float evaluation in fixed variable order.
#[derive(Debug, Clone, PartialEq)]
pub struct CompiledPoly {
    terms: Vec<(f64, Vec<(usize, u32)>)>,
}

impl CompiledPoly {
    /// Every symbol of `p` must be one of `vars` (bind constants first).
    pub fn new(p: &MultiPoly, vars: &[String]) -> Result<Self, LaxError> {
        let names = p.vars();
        let mut idx = Vec::with_capacity(names.len());
        for n in names {
            idx.push(vars.iter().position(|v| v == n));
        }
        let mut terms = Vec::new();
        for (e, c) in p.terms() {
            let mut mono = Vec::new();
            for (k, &d) in e.iter().enumerate() {
                if d > 0 {
                    let i = idx[k].ok_or_else(|| LaxError::Unknown(names[k].clone()))?;
                    mono.push((i, d));
                }
            }
            terms.push((c.to_f64().unwrap_or(f64::NAN), mono));
        }
        Ok(CompiledPoly { terms })
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|(c, m)| m.iter().fold(*c, |acc, &(i, d)| acc * x[i].powi(d as i32))).sum()
    }
}

/// Right-hand side and invariants of a system with all constants bound.
#[derive(Debug, Clone, PartialEq)]
pub struct CompiledSystem {
    pub vars: Vec<String>,
    pub field: Vec<CompiledPoly>,
    pub invariants: Vec<(String, CompiledPoly)>,
    consts: Vec<f64>,
}

impl CompiledSystem {
    pub fn new(sys: &VectorFieldSystem, bindings: &HashMap<String, f64>) -> Result<Self, LaxError> {
        let mut all = sys.vars().to_vec();
        let mut consts = Vec::new();
        for c in sys.consts() {
            let v = bindings.get(c).ok_or_else(|| LaxError::Params(format!("constant `{c}` is not bound")))?;
            all.push(c.clone());
            consts.push(*v);
        }
        let field = sys.equations().iter().map(|p| CompiledPoly::new(p, &all)).collect::<Result<_, _>>()?;
        let invariants = sys
            .invariants()
            .iter()
            .map(|(n, p)| Ok((n.clone(), CompiledPoly::new(p, &all)?)))
            .collect::<Result<_, LaxError>>()?;
        Ok(CompiledSystem { vars: sys.vars().to_vec(), field, invariants, consts })
    }

    fn extend(&self, x: &[f64]) -> Vec<f64> {
        let mut v = x.to_vec();
        v.extend_from_slice(&self.consts);
        v
    }

    pub fn rhs(&self, x: &[f64]) -> Vec<f64> {
        let v = self.extend(x);
        self.field.iter().map(|p| p.eval(&v)).collect()
    }

    pub fn invariant_values(&self, x: &[f64]) -> Vec<f64> {
        let v = self.extend(x);
        self.invariants.iter().map(|(_, p)| p.eval(&v)).collect()
    }

    pub fn integrate(&self, x0: Vec<f64>, cfg: &StepConfig) -> Result<Trajectory<Vec<f64>>, LaxError> {
        if x0.len() != self.vars.len() {
            return Err(LaxError::Dimension(format!("{} initial values for {} variables", x0.len(), self.vars.len())));
        }
        rk4(x0, |x| Ok(self.rhs(x)), cfg)
    }
}

/// `max_t |H_i(t) - H_i(0)|` for each invariant of a compiled system.
pub fn invariant_drift(sys: &CompiledSystem, traj: &Trajectory<Vec<f64>>) -> Vec<f64> {
    let h0 = sys.invariant_values(traj.first());
    let mut out = vec![0.0f64; h0.len()];
    for s in &traj.states {
        for (k, v) in sys.invariant_values(s).iter().enumerate() {
            out[k] = out[k].max((v - h0[k]).abs());
        }
    }
    out
}

/// Successive error ratios `e(dt) / e(dt/2)`; about 16 for a fourth-order method.
pub fn halving_ratios(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| w[0] / w[1]).collect()
}

/// Runs `error(dt)` for `dt0, dt0/2, ...` (`levels` values) and returns the
/// errors with their halving ratios.
pub fn convergence_study(
    dt0: f64,
    levels: usize,
    mut error: impl FnMut(f64) -> Result<f64, LaxError>,
) -> Result<(Vec<f64>, Vec<f64>), LaxError> {
    let errors = (0..levels).map(|i| error(dt0 / f64::from(1u32 << i))).collect::<Result<Vec<_>, _>>()?;
    let ratios = halving_ratios(&errors);
    Ok((errors, ratios))
}
