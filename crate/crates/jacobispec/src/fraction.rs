use exactalg::{Rat, UPoly};
use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::JacobiError;

const SAFE_DENOMINATOR: f64 = 1e-290;

/// `a0^2 / (z - b_1 - a_1^2 / (z - b_2 - ... - a_{k-1}^2 / (z - b_k)))`,
/// evaluated bottom-up. `a[j-1]` is `a_j` and `b[j-1]` is `b_j`.
pub fn gamma_fraction(a: &[f64], b: &[f64], a0: f64, z: Complex64, depth: usize) -> Result<Complex64, JacobiError> {
    if depth == 0 {
        return Err(JacobiError::Invalid("depth must be at least 1".into()));
    }
    if b.len() < depth || a.len() + 1 < depth {
        return Err(JacobiError::Invalid(format!("depth {depth} needs {depth} values of b and {} of a", depth - 1)));
    }
    let mut d = z - b[depth - 1];
    for j in (1..depth).rev() {
        if d.norm() < SAFE_DENOMINATOR {
            return Err(JacobiError::Division { level: j + 1 });
        }
        d = z - b[j - 1] - a[j - 1] * a[j - 1] / d;
    }
    if d.norm() < SAFE_DENOMINATOR {
        return Err(JacobiError::Division { level: 1 });
    }
    Ok(a0 * a0 / d)
}

/// Convergents `A_k / B_k` by the three-term recursion
/// `X_j = (z - b_j) X_{j-1} - a_{j-1}^2 X_{j-2}` with `B_{-1} = 0, B_0 = 1`,
/// `A_0 = 0, A_1 = a0^2`. Coefficients are ascending.
pub fn pade(a: &[f64], b: &[f64], a0: f64, k: usize) -> Result<(Vec<f64>, Vec<f64>), JacobiError> {
    let (ar, br): (Vec<Rat>, Vec<Rat>) =
        (a.iter().map(|x| exactalg::rational::from_f64(*x)).collect(), b.iter().map(|x| exactalg::rational::from_f64(*x)).collect());
    let (pa, pb) = pade_exact(&ar, &br, &exactalg::rational::from_f64(a0), k)?;
    Ok((pa.coeffs_f64(), pb.coeffs_f64()))
}

/// Exact convergents over Q.
pub fn pade_exact(a: &[Rat], b: &[Rat], a0: &Rat, k: usize) -> Result<(UPoly, UPoly), JacobiError> {
    Ok(pade_sequence(a, b, a0, k)?.pop().expect("k >= 1"))
}

/// `(A_j, B_j)` for `j = 0..=k`.
pub fn pade_sequence(a: &[Rat], b: &[Rat], a0: &Rat, k: usize) -> Result<Vec<(UPoly, UPoly)>, JacobiError> {
    if k == 0 {
        return Err(JacobiError::Invalid("k must be at least 1".into()));
    }
    if b.len() < k || a.len() + 1 < k {
        return Err(JacobiError::Invalid(format!("k = {k} needs {k} values of b and {} of a", k - 1)));
    }
    let lin = |j: usize| UPoly::new(vec![-b[j - 1].clone(), Rat::one()]);
    let mut out = vec![(UPoly::zero(), UPoly::one())];
    let b1 = lin(1);
    out.push((UPoly::constant(a0 * a0), b1));
    for j in 2..=k {
        let w = &a[j - 2] * &a[j - 2];
        let (a1, b1) = &out[j - 1];
        let (a2, b2) = &out[j - 2];
        let next = (lin(j).mul(a1).sub(&a2.scale(&w)), lin(j).mul(b1).sub(&b2.scale(&w)));
        out.push(next);
    }
    Ok(out)
}

/// First `count` coefficients `c_j` of `A / B = sum c_j z^{-j-1}`.
pub fn series_at_infinity(num: &UPoly, den: &UPoly, count: usize) -> Vec<Rat> {
    let k = den.degree();
    let lead = den.lead();
    // A/B = w * N(w) / D(w) with w = 1/z, D(w) = w^k B(1/w), N(w) = w^{k-1} A(1/w)
    let d: Vec<Rat> = (0..=k).map(|i| den.coeff(k - i)).collect();
    let nn: Vec<Rat> = (0..k).map(|i| if num.is_zero() || k - 1 - i > num.degree() { Rat::zero() } else { num.coeff(k - 1 - i) }).collect();
    let mut c = Vec::with_capacity(count);
    for j in 0..count {
        let mut acc = if j < nn.len() { nn[j].clone() } else { Rat::zero() };
        for i in 1..=j.min(k) {
            acc -= &d[i] * &c[j - i];
        }
        c.push(acc / &lead);
    }
    c
}

/// `c_j = a0^2 <T^j e_1, e_1>` for the Jacobi operator with diagonal `b` and
/// off-diagonal `a`, truncated far enough to be exact.
pub fn moments(a: &[f64], b: &[f64], a0: f64, count: usize) -> Result<Vec<f64>, JacobiError> {
    let need = count / 2 + 1;
    if b.len() < need || a.len() + 1 < need {
        return Err(JacobiError::Invalid(format!("{count} moments need {need} diagonal entries")));
    }
    let mut v = vec![0.0; need];
    v[0] = 1.0;
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        out.push(a0 * a0 * v[0]);
        let mut w = vec![0.0; need];
        for i in 0..need {
            w[i] += b[i] * v[i];
            if i + 1 < need {
                w[i] += a[i] * v[i + 1];
                w[i + 1] += a[i] * v[i];
            }
        }
        v = w;
    }
    Ok(out)
}

pub fn moments_exact(a: &[Rat], b: &[Rat], a0: &Rat, count: usize) -> Result<Vec<Rat>, JacobiError> {
    let need = count / 2 + 1;
    if b.len() < need || a.len() + 1 < need {
        return Err(JacobiError::Invalid(format!("{count} moments need {need} diagonal entries")));
    }
    let mut v = vec![Rat::zero(); need];
    v[0] = Rat::one();
    let a02 = a0 * a0;
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        out.push(&a02 * &v[0]);
        let mut w = vec![Rat::zero(); need];
        for i in 0..need {
            w[i] += &b[i] * &v[i];
            if i + 1 < need {
                w[i] += &a[i] * &v[i + 1];
                let t = &a[i] * &v[i];
                w[i + 1] += t;
            }
        }
        v = w;
    }
    Ok(out)
}

/// Partial sums of `sum 1/|a_j|`; divergence (Carleman) makes the operator
/// self-adjoint. Periodic data always diverges.
pub fn carleman_partial_sum(a: &[f64]) -> f64 {
    a.iter().map(|x| 1.0 / x.abs()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use exactalg::rational::int;

    #[test]
    fn depth_one_is_a0_squared_over_z() {
        let z = Complex64::new(0.3, 1.7);
        let v = gamma_fraction(&[0.0, 0.0], &[0.0, 0.0, 0.0], 1.5, z, 3).unwrap();
        assert!((v - 2.25 / z).norm() < 1e-15);
    }

    #[test]
    fn series_of_a_simple_fraction() {
        // 1 / (z - 1) = sum z^{-j-1}
        let c = series_at_infinity(&UPoly::one(), &UPoly::new(vec![int(-1), int(1)]), 5);
        assert_eq!(c, vec![int(1); 5]);
    }
}
