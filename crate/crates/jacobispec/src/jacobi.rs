use exactalg::rational::{from_f64, to_f64};
use exactalg::{Rat, RealRoot, UPoly};
use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::JacobiError;

/// N-periodic Jacobi matrix: diagonal `b_1..b_N`, off-diagonal `a_1..a_N`.
/// Indices run from 1 and `a_0` means `a_N` throughout.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicJacobi {
    a: Vec<Rat>,
    b: Vec<Rat>,
}

impl PeriodicJacobi {
    pub fn new(a: Vec<Rat>, b: Vec<Rat>) -> Result<Self, JacobiError> {
        if a.len() < 2 || a.len() != b.len() {
            return Err(JacobiError::Invalid(format!("need N >= 2 values of a and b, got {} and {}", a.len(), b.len())));
        }
        if a.iter().any(Zero::is_zero) {
            return Err(JacobiError::AlphaZero);
        }
        Ok(PeriodicJacobi { a, b })
    }

    pub fn from_f64(a: &[f64], b: &[f64]) -> Result<Self, JacobiError> {
        if a.iter().chain(b).any(|x| !x.is_finite()) {
            return Err(JacobiError::Invalid("entries must be finite".into()));
        }
        Self::new(a.iter().map(|x| from_f64(*x)).collect(), b.iter().map(|x| from_f64(*x)).collect())
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[Rat] {
        &self.a
    }

    pub fn b(&self) -> &[Rat] {
        &self.b
    }

    pub fn a_f64(&self) -> Vec<f64> {
        self.a.iter().map(to_f64).collect()
    }

    pub fn b_f64(&self) -> Vec<f64> {
        self.b.iter().map(to_f64).collect()
    }

    /// `a_N`, the periodic value of `a_0`.
    pub fn a_n(&self) -> &Rat {
        &self.a[self.n() - 1]
    }

    pub fn alpha(&self) -> Rat {
        self.a.iter().fold(Rat::one(), |p, x| p * x)
    }

    /// `a_j` and `b_j` for `j = 1, 2, ...` continued periodically.
    pub fn sequences(&self, len: usize) -> (Vec<f64>, Vec<f64>) {
        let (a, b) = (self.a_f64(), self.b_f64());
        ((0..len).map(|j| a[j % a.len()]).collect(), (0..len).map(|j| b[j % b.len()]).collect())
    }

    pub fn sequences_exact(&self, len: usize) -> (Vec<Rat>, Vec<Rat>) {
        (
            (0..len).map(|j| self.a[j % self.n()].clone()).collect(),
            (0..len).map(|j| self.b[j % self.n()].clone()).collect(),
        )
    }

    /// `A(h)`: tridiagonal with `a_N / h` top right and `a_N h` bottom left
    /// (added to `a_1` when N = 2).
    pub fn pencil(&self, h: Complex64) -> DMatrix<Complex64> {
        let n = self.n();
        let (a, b) = (self.a_f64(), self.b_f64());
        let mut m = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(b[i], 0.0)
            } else if i.abs_diff(j) == 1 {
                Complex64::new(a[i.min(j)], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        m[(0, n - 1)] += a[n - 1] / h;
        m[(n - 1, 0)] += a[n - 1] * h;
        m
    }

    /// `det(A(h) - z I)` computed directly.
    pub fn pencil_det(&self, h: Complex64, z: Complex64) -> Complex64 {
        let n = self.n();
        (self.pencil(h) - DMatrix::<Complex64>::identity(n, n) * z).determinant()
    }

    /// `det(T[lo..hi] - z)` for the open tridiagonal block with rows `lo..hi`
    /// (0-based, exclusive end), by the three-term recursion.
    fn block_det(&self, lo: usize, hi: usize) -> UPoly {
        let mut prev = UPoly::one();
        if hi <= lo {
            return prev;
        }
        let lin = |j: usize| UPoly::new(vec![self.b[j].clone(), -Rat::one()]);
        let mut cur = lin(lo);
        for j in lo + 1..hi {
            let next = lin(j).mul(&cur).sub(&prev.scale(&(&self.a[j - 1] * &self.a[j - 1])));
            prev = cur;
            cur = next;
        }
        cur
    }

    /// Monic `P(z)` with `det(A(h) - z I) = (-1)^{N+1} (alpha (h + 1/h) - P(z))`.
    pub fn p_poly(&self) -> UPoly {
        let n = self.n();
        let an2 = self.a_n() * self.a_n();
        let p = self.block_det(0, n).sub(&self.block_det(1, n - 1).scale(&an2));
        if n.is_multiple_of(2) { p } else { p.scale(&-Rat::one()) }
    }

    /// Cofactor `Delta_{N,N}(z) = det(T[1..N-1] - z)`.
    pub fn delta_nn(&self) -> UPoly {
        self.block_det(0, self.n() - 1)
    }

    /// Interior determinant over rows `2..N-1` evaluated at `z`; 1 for N = 2.
    pub fn lambda_poly(&self) -> UPoly {
        self.block_det(1, self.n() - 1)
    }

    /// `(-1)^{N+1} (alpha (h + 1/h) - P(z))`.
    pub fn curve(&self, h: Complex64, z: Complex64) -> Complex64 {
        let alpha = to_f64(&self.alpha());
        let s = if self.n() % 2 == 1 { 1.0 } else { -1.0 };
        (alpha * (h + 1.0 / h) - self.p_poly().eval_complex(z)) * s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralData {
    pub n: usize,
    pub alpha: f64,
    /// Coefficients of P, ascending.
    pub p: Vec<f64>,
    /// Roots of `P^2 - 4 alpha^2` with multiplicity, sorted.
    pub branch_points: Vec<f64>,
    pub stable_bands: Vec<Interval>,
    pub gaps: Vec<Interval>,
    pub auxiliary_spectrum: Vec<f64>,
    /// Coefficients of `Delta_{N,N}`, ascending.
    pub delta_nn: Vec<f64>,
    pub genus: usize,
    #[serde(skip)]
    pub p_exact: UPoly,
    #[serde(skip)]
    pub delta_exact: UPoly,
}

impl SpectralData {
    pub fn closed_gaps(&self, tol: f64) -> usize {
        self.gaps.iter().filter(|g| g.hi - g.lo <= tol).count()
    }

    /// Both values of h over z: `(P(z) +- sqrt(P(z)^2 - 4 alpha^2)) / (2 alpha)`.
    pub fn h_values(&self, z: Complex64) -> [Complex64; 2] {
        let p = eval_c(&self.p, z);
        let s = (p * p - 4.0 * self.alpha * self.alpha).sqrt();
        [(p + s) / (2.0 * self.alpha), (p - s) / (2.0 * self.alpha)]
    }
}

pub(crate) fn eval_c(c: &[f64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, k| acc * z + k)
}

pub(crate) fn eval_r(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, k| acc * x + k)
}

const ROOT_TOL: f64 = 1e-15;

fn expand(roots: &[RealRoot]) -> Vec<f64> {
    let mut v: Vec<f64> =
        roots.iter().flat_map(|r| std::iter::repeat_n(r.value, r.multiplicity as usize)).collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Branch points, bands, gaps and auxiliary spectrum. Interlacing of the
/// auxiliary spectrum with the gaps is checked and reported as an error.
pub fn spectral_data(m: &PeriodicJacobi) -> Result<SpectralData, JacobiError> {
    let n = m.n();
    let alpha = m.alpha();
    if alpha.is_zero() {
        return Err(JacobiError::AlphaZero);
    }
    let p = m.p_poly();
    let disc = p.mul(&p).sub(&UPoly::constant(Rat::from_integer(4.into()) * &alpha * &alpha));
    let xi = expand(&disc.real_roots(ROOT_TOL)?);
    if xi.len() != 2 * n {
        return Err(JacobiError::BranchPoints { expected: 2 * n, found: xi.len() });
    }
    let delta = m.delta_nn();
    let sigma = expand(&delta.real_roots(ROOT_TOL)?);
    if sigma.len() != n - 1 {
        return Err(JacobiError::Degenerate(format!("{} real zeros of Delta_NN, expected {}", sigma.len(), n - 1)));
    }
    let stable_bands = (0..n).map(|j| Interval { lo: xi[2 * j], hi: xi[2 * j + 1] }).collect();
    let gaps: Vec<Interval> = (0..n - 1).map(|j| Interval { lo: xi[2 * j + 1], hi: xi[2 * j + 2] }).collect();
    let scale = 1.0 + xi.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    for (j, (s, g)) in sigma.iter().zip(&gaps).enumerate() {
        let slack = 1e-9 * scale;
        if *s < g.lo - slack || *s > g.hi + slack {
            return Err(JacobiError::Interlacing { j: j + 1, sigma: *s, lo: g.lo, hi: g.hi });
        }
    }
    Ok(SpectralData {
        n,
        alpha: to_f64(&alpha),
        p: p.coeffs_f64(),
        branch_points: xi,
        stable_bands,
        gaps,
        auxiliary_spectrum: sigma,
        delta_nn: delta.coeffs_f64(),
        genus: n - 1,
        p_exact: p,
        delta_exact: delta,
    })
}

/// The root of `alpha h^2 - P h + alpha = 0` with `|h| <= 1`.
pub fn h_inner(p_value: f64, alpha: f64) -> f64 {
    let d = (p_value * p_value - 4.0 * alpha * alpha).max(0.0).sqrt();
    // the larger-modulus root is computed stably, its reciprocal is the answer
    let big = (p_value + p_value.signum() * d) / (2.0 * alpha);
    if big == 0.0 { 0.0 } else { 1.0 / big }
}
