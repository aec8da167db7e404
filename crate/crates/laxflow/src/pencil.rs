use std::collections::BTreeMap;

use exactalg::{Rat, RingMatrix};
use nalgebra::DMatrix;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::LaxError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Symmetry {
    Symmetric,
    Skew,
    None,
}

/// `A(h) = sum_{k=l}^{m} A_k h^k` with square float blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixPencil {
    low: i32,
    coeffs: Vec<DMatrix<f64>>,
    pub symmetry: Symmetry,
}

impl MatrixPencil {
    /// Blocks `A_low, A_{low+1}, ...`.
    pub fn new(low: i32, coeffs: Vec<DMatrix<f64>>) -> Result<Self, LaxError> {
        let n = coeffs.first().ok_or(LaxError::Empty)?.nrows();
        for (i, c) in coeffs.iter().enumerate() {
            if c.nrows() != n || c.ncols() != n {
                return Err(LaxError::Dimension(format!(
                    "block h^{} is {}x{}, expected {n}x{n}",
                    low + i as i32,
                    c.nrows(),
                    c.ncols()
                )));
            }
        }
        Ok(MatrixPencil { low, coeffs, symmetry: Symmetry::None })
    }

    pub fn constant(a: DMatrix<f64>) -> Result<Self, LaxError> {
        Self::new(0, vec![a])
    }

    pub fn zeros(n: usize, low: i32, high: i32) -> Self {
        let len = (high - low + 1).max(1) as usize;
        MatrixPencil { low, coeffs: vec![DMatrix::zeros(n, n); len], symmetry: Symmetry::None }
    }

    pub fn with_symmetry(mut self, s: Symmetry) -> Self {
        self.symmetry = s;
        self
    }

    pub fn dim(&self) -> usize {
        self.coeffs[0].nrows()
    }

    pub fn h_range(&self) -> (i32, i32) {
        (self.low, self.high())
    }

    pub fn low(&self) -> i32 {
        self.low
    }

    pub fn high(&self) -> i32 {
        self.low + self.coeffs.len() as i32 - 1
    }

    pub fn coeff(&self, k: i32) -> Option<&DMatrix<f64>> {
        usize::try_from(k - self.low).ok().and_then(|i| self.coeffs.get(i))
    }

    pub fn coeffs(&self) -> &[DMatrix<f64>] {
        &self.coeffs
    }

    pub fn eval(&self, h: f64) -> Result<DMatrix<f64>, LaxError> {
        if h == 0.0 && self.low < 0 {
            return Err(LaxError::PoleAtZero);
        }
        let n = self.dim();
        let mut acc = DMatrix::zeros(n, n);
        for (i, c) in self.coeffs.iter().enumerate() {
            acc += c * h.powi(self.low + i as i32);
        }
        Ok(acc)
    }

    /// `[A, B]` computed per power of h over the full window.
    pub fn commutator(&self, b: &MatrixPencil) -> Result<MatrixPencil, LaxError> {
        if self.dim() != b.dim() {
            return Err(LaxError::Dimension(format!("pencils of size {} and {}", self.dim(), b.dim())));
        }
        let mut out = MatrixPencil::zeros(self.dim(), self.low + b.low, self.high() + b.high());
        for (i, x) in self.coeffs.iter().enumerate() {
            for (j, y) in b.coeffs.iter().enumerate() {
                out.coeffs[i + j] += x * y - y * x;
            }
        }
        Ok(out)
    }

    /// Drops powers outside `[low, high]`; any of them larger than `tol` in
    /// absolute value is an error.
    pub fn restrict(&self, low: i32, high: i32, tol: f64) -> Result<MatrixPencil, LaxError> {
        let n = self.dim();
        let mut out = MatrixPencil::zeros(n, low, high);
        for (i, c) in self.coeffs.iter().enumerate() {
            let k = self.low + i as i32;
            if (low..=high).contains(&k) {
                out.coeffs[(k - low) as usize] = c.clone();
            } else if c.amax() > tol {
                return Err(LaxError::Window { degree: k, low, high });
            }
        }
        out.symmetry = self.symmetry;
        Ok(out)
    }

    /// `self + a * d` for pencils with the same window.
    pub fn axpy(&self, a: f64, d: &MatrixPencil) -> MatrixPencil {
        debug_assert_eq!(self.h_range(), d.h_range());
        MatrixPencil {
            low: self.low,
            coeffs: self.coeffs.iter().zip(&d.coeffs).map(|(x, y)| x + y * a).collect(),
            symmetry: self.symmetry,
        }
    }

    /// Largest entry in absolute value over all blocks.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.amax()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.iter().all(|x| x.is_finite()))
    }

    /// `tr A(h)^k`.
    pub fn trace_power(&self, h: f64, k: u32) -> Result<f64, LaxError> {
        let a = self.eval(h)?;
        let mut p = DMatrix::identity(self.dim(), self.dim());
        for _ in 0..k {
            p = &p * &a;
        }
        Ok(p.trace())
    }
}

/// Pencil with rational blocks; its spectral curve is computed exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalPencil {
    pub low: i32,
    pub coeffs: Vec<RingMatrix<Rat>>,
}

impl RationalPencil {
    pub fn new(low: i32, coeffs: Vec<RingMatrix<Rat>>) -> Result<Self, LaxError> {
        let n = coeffs.first().ok_or(LaxError::Empty)?.rows();
        if coeffs.iter().any(|c| c.rows() != n || c.cols() != n) {
            return Err(LaxError::Dimension("blocks of different sizes".into()));
        }
        Ok(RationalPencil { low, coeffs })
    }

    pub fn dim(&self) -> usize {
        self.coeffs[0].rows()
    }

    pub fn high(&self) -> i32 {
        self.low + self.coeffs.len() as i32 - 1
    }

    pub fn eval(&self, h: &Rat) -> Result<RingMatrix<Rat>, LaxError> {
        if h.is_zero() && self.low < 0 {
            return Err(LaxError::PoleAtZero);
        }
        let n = self.dim();
        let mut acc = RingMatrix::<Rat>::zeros(n, n);
        for (i, c) in self.coeffs.iter().enumerate() {
            acc = acc.add(&c.scale(&rat_pow(h, self.low + i as i32)))?;
        }
        Ok(acc)
    }

    pub fn to_float(&self) -> MatrixPencil {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| DMatrix::from_fn(c.rows(), c.cols(), |i, j| c.get(i, j).to_f64().unwrap_or(f64::NAN)))
            .collect();
        MatrixPencil { low: self.low, coeffs, symmetry: Symmetry::None }
    }
}

fn rat_pow(h: &Rat, k: i32) -> Rat {
    if k >= 0 {
        num_traits::pow(h.clone(), k as usize)
    } else {
        num_traits::pow(h.recip(), (-k) as usize)
    }
}

/// `P(z, h) = det(A(h) - z I)` as a map `(z-degree, h-degree) -> coefficient`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralCurve {
    pub dim: usize,
    pub h_window: (i32, i32),
    pub coeffs: BTreeMap<(u32, i32), f64>,
    /// Present when the pencil had rational entries.
    #[serde(skip)]
    pub exact: Option<BTreeMap<(u32, i32), Rat>>,
}

impl SpectralCurve {
    pub fn coeff(&self, zdeg: u32, hdeg: i32) -> f64 {
        self.coeffs.get(&(zdeg, hdeg)).copied().unwrap_or(0.0)
    }

    pub fn eval(&self, z: f64, h: f64) -> f64 {
        self.coeffs.iter().map(|(&(j, k), c)| c * z.powi(j as i32) * h.powi(k)).sum()
    }

    /// Largest coefficient difference.
    pub fn max_diff(&self, o: &SpectralCurve) -> f64 {
        let keys: std::collections::BTreeSet<_> = self.coeffs.keys().chain(o.coeffs.keys()).collect();
        keys.into_iter().map(|&(j, k)| (self.coeff(j, k) - o.coeff(j, k)).abs()).fold(0.0, f64::max)
    }

    /// Largest violation of `P(z, h) = (-1)^n P(-z, -h)`.
    pub fn sign_involution_defect(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|(&(j, k), c)| {
                let s = if (self.dim as i64 + j as i64 + k as i64) % 2 == 0 { 1.0 } else { -1.0 };
                (c - s * c).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Largest violation of `P(z, h) = P(z, 1/h)`.
    pub fn reciprocal_defect(&self) -> f64 {
        self.coeffs.iter().map(|(&(j, k), c)| (c - self.coeff(j, -k)).abs()).fold(0.0, f64::max)
    }

    /// Coefficients with magnitude above `tol`, for display.
    pub fn significant(&self, tol: f64) -> Vec<((u32, i32), f64)> {
        self.coeffs.iter().filter(|(_, c)| c.abs() > tol).map(|(k, c)| (*k, *c)).collect()
    }
}

/// Default nodes `1, -1, 2, -2, 1/2, -1/2, 3, -3, 1/3, ...`, never zero.
pub fn default_nodes(count: usize) -> Vec<Rat> {
    let mut out = Vec::with_capacity(count);
    let mut k = 1i64;
    while out.len() < count {
        let mut cand = vec![Rat::from_integer(k.into())];
        if k > 1 {
            cand.push(Rat::new(1.into(), k.into()));
        }
        for c in cand {
            for v in [c.clone(), -c] {
                if out.len() < count {
                    out.push(v);
                }
            }
        }
        k += 1;
    }
    out
}

fn check_distinct<T: PartialEq + std::fmt::Debug>(nodes: &[T]) -> Result<(), LaxError> {
    for (i, x) in nodes.iter().enumerate() {
        if nodes[..i].contains(x) {
            return Err(LaxError::SingularInterpolation(format!("{x:?}")));
        }
    }
    Ok(())
}

fn window(n: usize, low: i32, high: i32) -> (i32, i32) {
    (n as i32 * low.min(0), n as i32 * high.max(0))
}

/// Interpolates `det(A(h0) - z I)` at `degree + 1` nodes per power of z.
pub fn pencil_charpoly(p: &MatrixPencil) -> Result<SpectralCurve, LaxError> {
    let n = p.dim();
    let (wl, wh) = window(n, p.low(), p.high());
    let nodes: Vec<f64> = default_nodes((wh - wl) as usize + 1).iter().map(|r| r.to_f64().unwrap_or(0.0)).collect();
    pencil_charpoly_at(p, &nodes)
}

/// As [`pencil_charpoly`] with caller-chosen nodes.
pub fn pencil_charpoly_at(p: &MatrixPencil, nodes: &[f64]) -> Result<SpectralCurve, LaxError> {
    check_distinct(nodes)?;
    let n = p.dim();
    let (wl, wh) = window(n, p.low(), p.high());
    let d = (wh - wl) as usize;
    if nodes.len() < d + 1 {
        return Err(LaxError::Params(format!("{} nodes for degree {d}", nodes.len())));
    }
    let nodes = &nodes[..d + 1];
    if nodes.contains(&0.0) && wl < 0 {
        return Err(LaxError::PoleAtZero);
    }
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    // values[node][j] = coefficient of z^j times h^{-wl}
    let mut values = Vec::with_capacity(d + 1);
    for &h in nodes {
        let a = p.eval(h)?;
        let m = RingMatrix::from_fn(n, n, |i, j| a[(i, j)]);
        let c = m.charpoly()?;
        let shift = h.powi(-wl);
        values.push(c.iter().map(|x| sign * x * shift).collect::<Vec<f64>>());
    }
    let v = DMatrix::from_fn(d + 1, d + 1, |i, k| nodes[i].powi(k as i32));
    let lu = v.lu();
    let mut coeffs = BTreeMap::new();
    for j in 0..=n {
        let rhs = nalgebra::DVector::from_fn(d + 1, |i, _| values[i][j]);
        let sol = lu.solve(&rhs).ok_or_else(|| LaxError::SingularInterpolation("vandermonde".into()))?;
        for k in 0..=d {
            coeffs.insert((j as u32, wl + k as i32), sol[k]);
        }
    }
    Ok(SpectralCurve { dim: n, h_window: (wl, wh), coeffs, exact: None })
}

/// Exact version for rational pencils (Newton interpolation over Q).
pub fn pencil_charpoly_exact(p: &RationalPencil) -> Result<SpectralCurve, LaxError> {
    let n = p.dim();
    let (wl, wh) = window(n, p.low, p.high());
    let d = (wh - wl) as usize;
    let nodes = default_nodes(d + 1);
    let sign = if n.is_multiple_of(2) { Rat::one() } else { -Rat::one() };
    let mut per_power: Vec<Vec<Rat>> = vec![Vec::with_capacity(d + 1); n + 1];
    for h in &nodes {
        let c = p.eval(h)?.charpoly()?;
        let shift = rat_pow(h, -wl);
        for (j, x) in c.iter().enumerate() {
            per_power[j].push(&sign * x * &shift);
        }
    }
    let mut exact = BTreeMap::new();
    for (j, vals) in per_power.iter().enumerate() {
        for (k, c) in newton_interpolate(&nodes, vals).into_iter().enumerate() {
            exact.insert((j as u32, wl + k as i32), c);
        }
    }
    let coeffs = exact.iter().map(|(k, c)| (*k, c.to_f64().unwrap_or(f64::NAN))).collect();
    Ok(SpectralCurve { dim: n, h_window: (wl, wh), coeffs, exact: Some(exact) })
}

/// Monomial coefficients of the interpolating polynomial.
fn newton_interpolate(x: &[Rat], y: &[Rat]) -> Vec<Rat> {
    let n = x.len();
    let mut dd = y.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&x[i] - &x[i - level]);
        }
    }
    let mut poly = vec![Rat::zero(); n];
    for i in (0..n).rev() {
        // poly = poly * (X - x_i) + dd_i
        let mut next = vec![Rat::zero(); n];
        for k in 0..n {
            if poly[k].is_zero() {
                continue;
            }
            if k + 1 < n {
                next[k + 1] += &poly[k];
            }
            next[k] -= &poly[k] * &x[i];
        }
        next[0] += &dd[i];
        poly = next;
    }
    poly
}

#[cfg(test)]
mod tests {
    use super::*;
    use exactalg::rational::int;

    #[test]
    fn newton_recovers_monomials() {
        let xs = default_nodes(4);
        let f = |x: &Rat| x * x * x - int(2) * x + int(5);
        let ys: Vec<Rat> = xs.iter().map(f).collect();
        assert_eq!(newton_interpolate(&xs, &ys), vec![int(5), int(-2), int(0), int(1)]);
    }

    #[test]
    fn nodes_are_distinct_and_nonzero() {
        let n = default_nodes(15);
        assert!(check_distinct(&n).is_ok());
        assert!(n.iter().all(|x| !x.is_zero()));
    }

    #[test]
    fn out_of_window_commutator_is_rejected() {
        let e = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let f = DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 1.0, 0.0]);
        let a = MatrixPencil::new(0, vec![DMatrix::zeros(2, 2), e]).unwrap();
        let b = MatrixPencil::new(0, vec![DMatrix::zeros(2, 2), f]).unwrap();
        let c = a.commutator(&b).unwrap();
        assert_eq!(c.h_range(), (0, 2));
        assert!(matches!(c.restrict(0, 1, 1e-12), Err(LaxError::Window { degree: 2, .. })));
    }
}
