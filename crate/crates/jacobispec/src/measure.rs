use exactalg::rational::to_f64;
use exactalg::UPoly;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::JacobiError;
use crate::jacobi::{eval_r, h_inner, spectral_data, Interval, PeriodicJacobi, SpectralData};
use crate::quad::band_integral_with_edges;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Atom {
    pub location: f64,
    pub mass: f64,
    /// Index j of the gap `[xi_{2j}, xi_{2j+1}]` holding the atom.
    pub gap: usize,
}

/// `dsigma = sum_j m_j delta(x - sigma_j) + rho(x) dx` with `rho` supported
/// on the stable bands.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StieltjesMeasure {
    pub atoms: Vec<Atom>,
    /// Candidate atoms whose mass vanished (below tolerance).
    pub dropped: Vec<f64>,
    pub bands: Vec<Interval>,
    pub alpha: f64,
    /// `(a0 / a_N)^2`.
    pub scale: f64,
    pub a0: f64,
    #[serde(skip)]
    branch_points: Vec<f64>,
    #[serde(skip)]
    sigma: Vec<f64>,
}

/// Relative size below which a residue counts as zero.
pub const ATOM_TOL: f64 = 1e-10;
/// Target accuracy of every band quadrature.
pub const QUAD_TOL: f64 = 1e-13;

impl StieltjesMeasure {
    /// `sqrt(4 alpha^2 - P(x)^2) / (2 pi |Delta_NN(x)|)`, zero off the bands.
    pub fn density(&self, x: f64) -> f64 {
        match self.bands.iter().position(|b| b.lo < x && x < b.hi) {
            Some(j) => self.band_density(j, x, x - self.bands[j].lo, self.bands[j].hi - x),
            None => 0.0,
        }
    }

    // Product form `sqrt(prod |x - xi_i|) / prod |x - sigma_l|` (both
    // polynomials have leading coefficient of modulus one). Points sitting on
    // an edge of the band use the exact edge distance.
    fn band_density(&self, j: usize, x: f64, from_lo: f64, to_hi: f64) -> f64 {
        let band = &self.bands[j];
        let eps = 1e-13 * (1.0 + band.lo.abs().max(band.hi.abs()));
        let dist = |q: f64| {
            if (q - band.lo).abs() <= eps {
                from_lo
            } else if (q - band.hi).abs() <= eps {
                to_hi
            } else {
                (x - q).abs()
            }
        };
        let mut num = 1.0;
        let mut den = 1.0;
        for (i, xi) in self.branch_points.iter().enumerate() {
            num *= if i == 2 * j { from_lo } else if i == 2 * j + 1 { to_hi } else { dist(*xi) };
        }
        for s in &self.sigma {
            den *= dist(*s);
        }
        self.scale * num.sqrt() / (2.0 * std::f64::consts::PI * den)
    }

    /// `int f dsigma` (atoms plus band quadratures).
    pub fn integrate(&self, f: impl Fn(f64) -> Complex64) -> Result<Complex64, JacobiError> {
        let mut acc: Complex64 = self.atoms.iter().map(|a| f(a.location) * a.mass).sum();
        for (j, band) in self.bands.iter().enumerate() {
            acc += band_integral_with_edges(band.lo, band.hi, QUAD_TOL, |x, d_lo, d_hi| {
                f(x) * self.band_density(j, x, d_lo, d_hi)
            })?;
        }
        Ok(acc)
    }

    pub fn total_mass(&self) -> Result<f64, JacobiError> {
        Ok(self.integrate(|_| Complex64::new(1.0, 0.0))?.re)
    }

    /// `int dsigma(x) / (z - x)`.
    pub fn stieltjes(&self, z: Complex64) -> Result<Complex64, JacobiError> {
        self.integrate(|x| 1.0 / (z - x))
    }

    /// Distance from `z` to the support.
    pub fn distance(&self, z: Complex64) -> f64 {
        let mut d = f64::INFINITY;
        for b in &self.bands {
            let x = z.re.clamp(b.lo, b.hi);
            d = d.min((z - x).norm());
        }
        for a in &self.atoms {
            d = d.min((z - a.location).norm());
        }
        d
    }
}

/// Atoms from the residue formula at the auxiliary spectrum (h on the
/// `|h| < 1` sheet) and the continuous part on the stable bands.
pub fn measure_decompose(m: &PeriodicJacobi, a0: f64) -> Result<StieltjesMeasure, JacobiError> {
    let sd = spectral_data(m)?;
    measure_from_spectral(m, &sd, a0)
}

pub fn measure_from_spectral(m: &PeriodicJacobi, sd: &SpectralData, a0: f64) -> Result<StieltjesMeasure, JacobiError> {
    if !(a0 != 0.0 && a0.is_finite()) {
        return Err(JacobiError::Invalid("a0 must be finite and nonzero".into()));
    }
    let n = m.n();
    let sigma = &sd.auxiliary_spectrum;
    for w in sigma.windows(2) {
        if (w[1] - w[0]).abs() < 1e-12 * (1.0 + w[0].abs()) {
            return Err(JacobiError::Degenerate(format!("coincident auxiliary eigenvalues at {}", w[0])));
        }
    }
    let an = to_f64(m.a_n());
    let scale = (a0 / an).powi(2);
    let lambda: UPoly = m.lambda_poly();
    let lambda = lambda.coeffs_f64();
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut atoms = Vec::new();
    let mut dropped = Vec::new();
    for (j, &s) in sigma.iter().enumerate() {
        let h = h_inner(eval_r(&sd.p, s), sd.alpha);
        let num = sd.alpha * h + sign * an * an * eval_r(&lambda, s);
        let den: f64 = sigma.iter().enumerate().filter(|(l, _)| *l != j).map(|(_, t)| s - t).product();
        let mass = scale * num / den;
        let size = scale * (sd.alpha.abs() + an * an);
        if mass.abs() <= ATOM_TOL * size {
            dropped.push(s);
        } else if mass < 0.0 {
            return Err(JacobiError::NegativeMass { j: j + 1, mass });
        } else {
            atoms.push(Atom { location: s, mass, gap: j + 1 });
        }
    }
    Ok(StieltjesMeasure {
        atoms,
        dropped,
        bands: sd.stable_bands.clone(),
        alpha: sd.alpha,
        scale,
        a0,
        branch_points: sd.branch_points.clone(),
        sigma: sd.auxiliary_spectrum.clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Orthogonality {
    pub k_max: usize,
    /// Largest `|int B_k B_l dsigma|` over `k != l`.
    pub max_off_diagonal: f64,
    /// Largest `|int B_k^2 dsigma - a0^2 prod_{i<=k} a_i^2|`.
    pub max_norm_error: f64,
    pub norms: Vec<f64>,
}

/// Orthogonality of the Pade denominators `B_0..B_{k_max}` against the measure.
pub fn orthogonality_check(m: &PeriodicJacobi, measure: &StieltjesMeasure, k_max: usize) -> Result<Orthogonality, JacobiError> {
    let (a, b) = m.sequences_exact(k_max + 1);
    let seq = crate::fraction::pade_sequence(&a, &b, &exactalg::rational::from_f64(measure.a0), (k_max).max(1))?;
    let polys: Vec<Vec<f64>> = seq.iter().take(k_max + 1).map(|(_, bk)| bk.coeffs_f64()).collect();
    let af: Vec<f64> = a.iter().map(to_f64).collect();
    let mut max_off: f64 = 0.0;
    let mut max_norm: f64 = 0.0;
    let mut norms = Vec::new();
    let mut expected = measure.a0 * measure.a0;
    for k in 0..=k_max {
        for l in 0..=k {
            let v = measure.integrate(|x| Complex64::new(eval_r(&polys[k], x) * eval_r(&polys[l], x), 0.0))?.re;
            if k == l {
                norms.push(v);
                max_norm = max_norm.max((v - expected).abs());
            } else {
                max_off = max_off.max(v.abs());
            }
        }
        expected *= af[k] * af[k];
    }
    Ok(Orthogonality { k_max, max_off_diagonal: max_off, max_norm_error: max_norm, norms })
}
