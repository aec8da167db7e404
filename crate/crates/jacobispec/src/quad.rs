use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::JacobiError;

/// Gauss-Legendre nodes and weights on `[-1, 1]` (Golub-Welsch).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let j = DMatrix::from_fn(n, n, |i, k| {
        if i.abs_diff(k) == 1 {
            let m = i.max(k) as f64;
            m / (4.0 * m * m - 1.0).sqrt()
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(j);
    let mut pairs: Vec<(f64, f64)> =
        (0..n).map(|i| (eig.eigenvalues[i], 2.0 * eig.eigenvectors[(0, i)].powi(2))).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// `int_lo^hi f(x) dx` after `x = c + r cos(theta)`, which absorbs square-root
/// behaviour at both endpoints. Doubles the node count until two successive
/// rules agree to `tol` (absolute plus relative).
pub fn band_integral(
    lo: f64,
    hi: f64,
    tol: f64,
    f: impl Fn(f64) -> Complex64,
) -> Result<Complex64, JacobiError> {
    band_integral_with_edges(lo, hi, tol, |x, _, _| f(x))
}

/// Like [`band_integral`], but `f` also receives `x - lo` and `hi - x`
/// computed without cancellation.
pub fn band_integral_with_edges(
    lo: f64,
    hi: f64,
    tol: f64,
    f: impl Fn(f64, f64, f64) -> Complex64,
) -> Result<Complex64, JacobiError> {
    if hi <= lo {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let c = 0.5 * (lo + hi);
    let r = 0.5 * (hi - lo);
    let rule = |n: usize| {
        let (x, w) = gauss_legendre(n);
        let half = std::f64::consts::FRAC_PI_2;
        x.iter()
            .zip(&w)
            .map(|(t, wt)| {
                let theta = half * (t + 1.0);
                let to_hi = 2.0 * r * (0.5 * theta).sin().powi(2);
                let from_lo = 2.0 * r * (0.5 * theta).cos().powi(2);
                f(c + r * theta.cos(), from_lo, to_hi) * (r * theta.sin() * wt * half)
            })
            .sum::<Complex64>()
    };
    let mut n = 24;
    let mut prev = rule(n);
    while n < 1536 {
        n *= 2;
        let next = rule(n);
        if (next - prev).norm() <= tol * (1.0 + next.norm()) {
            return Ok(next);
        }
        prev = next;
    }
    Err(JacobiError::Quadrature { lo, hi })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_polynomials() {
        let (x, w) = gauss_legendre(6);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(10)).sum();
        assert!((s - 2.0 / 11.0).abs() < 1e-13);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
    }

    #[test]
    fn semicircle_area() {
        let v = band_integral(-2.0, 2.0, 1e-12, |x| Complex64::new((4.0 - x * x).max(0.0).sqrt(), 0.0)).unwrap();
        assert!((v.re - 2.0 * std::f64::consts::PI).abs() < 1e-11);
    }
}
