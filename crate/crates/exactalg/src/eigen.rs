use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;

use crate::error::AlgError;
use crate::matrix::RingMatrix;
use crate::upoly::UPoly;

pub const DEFAULT_INTEGER_TOL: f64 = 1e-6;

/// An eigenvalue together with the integrality verdict.
#[derive(Clone, Debug)]
pub struct ClassifiedEigenvalue {
    pub value: Complex64,
    pub nearest_integer: Option<i64>,
}

/// Complex eigenvalues of a square float matrix (Schur decomposition).
pub fn eigenvalues(m: &RingMatrix<f64>) -> Result<Vec<Complex64>, AlgError> {
    if !m.is_square() {
        return Err(AlgError::NotSquare(m.rows(), m.cols()));
    }
    let n = m.rows();
    for i in 0..n {
        for j in 0..n {
            if !m.get(i, j).is_finite() {
                return Err(AlgError::NonFinite(i, j));
            }
        }
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let d = DMatrix::from_fn(n, n, |i, j| *m.get(i, j));
    let mut ev: Vec<Complex64> = d.complex_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
    Ok(ev)
}

/// Flags eigenvalues within `tol` of an integer (imaginary part included).
pub fn classify_integer(values: &[Complex64], tol: f64) -> Vec<ClassifiedEigenvalue> {
    values
        .iter()
        .map(|&v| {
            let r = v.re.round();
            let hit = (v.re - r).abs() < tol && v.im.abs() < tol;
            ClassifiedEigenvalue { value: v, nearest_integer: hit.then_some(r as i64) }
        })
        .collect()
}

/// Rational eigenvalues with algebraic multiplicities, from the exact
/// characteristic polynomial. Sizes above 12 are refused.
pub fn rational_eigenvalues(m: &RingMatrix<BigRational>) -> Result<Vec<(BigRational, u32)>, AlgError> {
    if !m.is_square() {
        return Err(AlgError::NotSquare(m.rows(), m.cols()));
    }
    if m.rows() > 12 {
        return Err(AlgError::Dimension(format!("exact eigenvalues limited to size 12, got {}", m.rows())));
    }
    if m.rows() == 0 {
        return Ok(Vec::new());
    }
    UPoly::new(m.charpoly()?).rational_roots()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn identity_eigenvalues() {
        let m = RingMatrix::<f64>::identity(3);
        let ev = eigenvalues(&m).unwrap();
        assert!(ev.iter().all(|v| (v.re - 1.0).abs() < 1e-12 && v.im.abs() < 1e-12));
    }

    #[test]
    fn diagonal_integer_spectrum() {
        let m = RingMatrix::from_fn(3, 3, |i, j| if i == j { [-1.0, 2.0, 5.0][i] } else { 0.0 });
        let c = classify_integer(&eigenvalues(&m).unwrap(), DEFAULT_INTEGER_TOL);
        let ints: Vec<i64> = c.iter().filter_map(|x| x.nearest_integer).collect();
        assert_eq!(ints, vec![-1, 2, 5]);
        let q = m.map(|x| crate::rational::from_f64(*x));
        assert_eq!(rational_eigenvalues(&q).unwrap(), vec![(int(-1), 1), (int(2), 1), (int(5), 1)]);
    }

    #[test]
    fn rejects_non_square_and_nan() {
        assert!(eigenvalues(&RingMatrix::<f64>::zeros(2, 3)).is_err());
        let mut m = RingMatrix::<f64>::identity(2);
        m.set(1, 0, f64::NAN);
        assert_eq!(eigenvalues(&m).unwrap_err(), AlgError::NonFinite(1, 0));
    }
}
