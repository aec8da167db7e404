use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::AlgError;
use crate::rational::{self, from_f64, to_f64};

/// Dense univariate polynomial over Q, coefficients in ascending order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UPoly {
    coeffs: Vec<BigRational>,
}

/// A real root located inside `[lo, hi]`.
#[derive(Clone, Debug)]
pub struct RealRoot {
    pub value: f64,
    pub lo: BigRational,
    pub hi: BigRational,
    pub multiplicity: u32,
    /// Set when the root was verified to be exactly rational.
    pub exact: Option<BigRational>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UPoly::new(vec![BigRational::one()])
    }

    /// `z`
    pub fn x() -> Self {
        UPoly::new(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn constant(c: BigRational) -> Self {
        UPoly::new(vec![c])
    }

    pub fn from_ints(c: &[i64]) -> Self {
        UPoly::new(c.iter().map(|&k| rational::int(k)).collect())
    }

    /// Exact conversion of float coefficients (ascending order).
    pub fn from_f64(c: &[f64]) -> Self {
        UPoly::new(c.iter().map(|&k| from_f64(k)).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeffs_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(to_f64).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lead(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + to_f64(c))
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + to_f64(c))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        UPoly::new(self.coeffs.iter().map(|k| k * c).collect())
    }

    pub fn add(&self, o: &UPoly) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        UPoly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }

    pub fn sub(&self, o: &UPoly) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        UPoly::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }

    pub fn mul(&self, o: &UPoly) -> Self {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::new(out)
    }

    pub fn derivative(&self) -> Self {
        UPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    /// Euclidean division.
    pub fn div_rem(&self, d: &UPoly) -> Result<(UPoly, UPoly), AlgError> {
        if d.is_zero() {
            return Err(AlgError::DivisionByZero);
        }
        let mut r = self.coeffs.clone();
        let dd = d.degree();
        let lead = d.lead();
        if r.len() < d.coeffs.len() {
            return Ok((UPoly::zero(), self.clone()));
        }
        let mut q = vec![BigRational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &lead;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] -= &c * dc;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        Ok((UPoly::new(q), UPoly::new(r)))
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lead().recip())
    }

    pub fn gcd(&self, o: &UPoly) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.div_rem(&b).expect("nonzero divisor").1;
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Yun's square-free decomposition: `[(f_1, 1), (f_2, 2), ...]` with
    /// `self = c * prod f_i^i` and each `f_i` square-free, monic, nonconstant.
    pub fn square_free(&self) -> Vec<(UPoly, u32)> {
        let mut out = Vec::new();
        if self.degree() == 0 {
            return out;
        }
        let f = self.monic();
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.div_rem(&a0).unwrap().0;
        let mut c = fp.div_rem(&a0).unwrap().0;
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        loop {
            let a = b.gcd(&d);
            if a.degree() > 0 {
                out.push((a.clone(), i));
            }
            b = b.div_rem(&a).unwrap().0;
            if b.degree() == 0 {
                break;
            }
            c = d.div_rem(&a).unwrap().0;
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    fn sturm_chain(&self) -> Vec<UPoly> {
        let mut chain = vec![self.clone(), self.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let r = chain[n - 2].div_rem(&chain[n - 1]).unwrap().1;
            if r.is_zero() {
                break;
            }
            // positive rescaling keeps sign structure; keeps sizes bounded
            let s = r.lead().abs().recip();
            chain.push(r.scale(&-s));
        }
        chain
    }

    fn sign_changes(chain: &[UPoly], x: &BigRational) -> usize {
        let mut last = 0i8;
        let mut n = 0;
        for p in chain {
            let v = p.eval(x);
            let s = if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            };
            if s != 0 {
                if last != 0 && s != last {
                    n += 1;
                }
                last = s;
            }
        }
        n
    }

    /// Number of distinct real roots in `(a, b]` (Sturm).
    pub fn count_roots(&self, a: &BigRational, b: &BigRational) -> usize {
        let chain = self.sturm_chain();
        Self::sign_changes(&chain, a) - Self::sign_changes(&chain, b)
    }

    /// Cauchy bound: every root has modulus below the returned value.
    pub fn root_bound(&self) -> BigRational {
        let lead = self.lead().abs();
        let m = self.coeffs[..self.coeffs.len().saturating_sub(1)]
            .iter()
            .map(|c| c.abs() / &lead)
            .fold(BigRational::zero(), |a, b| if b > a { b } else { a });
        m + BigRational::one()
    }

    /// All real roots inside `[lo, hi]`, sorted, each bracketed to width `tol`.
    pub fn real_roots_in(&self, lo: f64, hi: f64, tol: f64) -> Result<Vec<RealRoot>, AlgError> {
        if self.is_zero() {
            return Err(AlgError::ZeroPolynomial);
        }
        if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(AlgError::BadInterval(lo, hi));
        }
        let lo = from_f64(lo);
        let hi = from_f64(hi);
        let tol = from_f64(tol.max(1e-300));
        let mut out = Vec::new();
        for (f, mult) in self.square_free() {
            for mut r in f.isolate(&lo, &hi, &tol) {
                r.multiplicity = mult;
                out.push(r);
            }
        }
        out.sort_by(|a, b| a.value.partial_cmp(&b.value).unwrap());
        Ok(out)
    }

    /// All real roots.
    pub fn real_roots(&self, tol: f64) -> Result<Vec<RealRoot>, AlgError> {
        if self.is_zero() {
            return Err(AlgError::ZeroPolynomial);
        }
        let b = to_f64(&self.root_bound()) * 1.0001 + 1.0;
        self.real_roots_in(-b, b, tol)
    }

    // square-free input; Sturm counts on half-open intervals (a, b]
    fn isolate(&self, lo: &BigRational, hi: &BigRational, tol: &BigRational) -> Vec<RealRoot> {
        let chain = self.sturm_chain();
        let mut out = Vec::new();
        if self.eval(lo).is_zero() {
            out.push(self.exact_root(lo.clone()));
        }
        let two = BigRational::from_integer(BigInt::from(2));
        let mut stack = vec![(lo.clone(), hi.clone())];
        while let Some((a, b)) = stack.pop() {
            let n = Self::sign_changes(&chain, &a) - Self::sign_changes(&chain, &b);
            match n {
                0 => {}
                1 => out.push(self.refine(a, b, tol)),
                _ => {
                    let m = (&a + &b) / &two;
                    stack.push((a, m.clone()));
                    stack.push((m, b));
                }
            }
        }
        out.sort_by(|a, b| a.value.partial_cmp(&b.value).unwrap());
        out
    }

    fn exact_root(&self, x: BigRational) -> RealRoot {
        RealRoot { value: to_f64(&x), lo: x.clone(), hi: x.clone(), multiplicity: 1, exact: Some(x) }
    }

    // exactly one simple root in (a, b]
    fn refine(&self, mut a: BigRational, mut b: BigRational, tol: &BigRational) -> RealRoot {
        if self.eval(&b).is_zero() {
            return self.exact_root(b);
        }
        let two = BigRational::from_integer(BigInt::from(2));
        let sb = self.eval(&b).is_positive();
        let fp = self.derivative();
        let mut iters = 0;
        while &b - &a > *tol && iters < 2000 {
            iters += 1;
            let m = (&a + &b) / &two;
            let fm = self.eval(&m);
            if fm.is_zero() {
                return self.exact_root(m);
            }
            if fm.is_positive() == sb {
                b = m;
            } else {
                a = m;
            }
            if iters % 4 == 0 {
                // Newton step from the float midpoint, kept only if it shrinks the bracket
                let x = to_f64(&((&a + &b) / &two));
                let d = fp.eval_f64(x);
                let xn = x - self.eval_f64(x) / d;
                if d != 0.0 && xn.is_finite() {
                    let w = (to_f64(&(&b - &a)) * 1e-6).max(f64::MIN_POSITIVE);
                    for cand in [xn - w, xn + w] {
                        let c = from_f64(cand);
                        if c > a && c < b {
                            let fc = self.eval(&c);
                            if fc.is_zero() {
                                return self.exact_root(c);
                            }
                            if fc.is_positive() == sb {
                                b = c;
                            } else {
                                a = c;
                            }
                        }
                    }
                }
            }
        }
        let exact = self.rational_in(&a, &b);
        let value = match &exact {
            Some(r) => to_f64(r),
            None => to_f64(&((&a + &b) / &two)),
        };
        RealRoot { value, lo: a, hi: b, multiplicity: 1, exact }
    }

    // rational root theorem restricted to one isolating interval
    fn rational_in(&self, a: &BigRational, b: &BigRational) -> Option<BigRational> {
        let (_, prim) = self.integer_primitive();
        let lead = prim.coeffs.last()?.numer().clone();
        let divs = rational::divisors(&lead, 1_000_000)?;
        let mid = to_f64(&((a + b) / BigRational::from_integer(BigInt::from(2))));
        for q in divs {
            let p = (mid * q as f64).round();
            if !p.is_finite() {
                continue;
            }
            let cand = BigRational::new(BigInt::from(p as i128), BigInt::from(q));
            if &cand >= a && &cand <= b && self.eval(&cand).is_zero() {
                return Some(cand);
            }
        }
        None
    }

    /// `self = c * p` with `p` having coprime integer coefficients.
    pub fn integer_primitive(&self) -> (BigRational, UPoly) {
        if self.is_zero() {
            return (BigRational::zero(), self.clone());
        }
        let l = rational::lcm_of_denoms(self.coeffs.iter());
        let scaled: Vec<BigRational> =
            self.coeffs.iter().map(|c| c * BigRational::from_integer(l.clone())).collect();
        let mut g = rational::gcd_of_numers(scaled.iter());
        if self.lead().is_negative() {
            g = -g;
        }
        let content = BigRational::new(g, l);
        (content.clone(), self.scale(&content.recip()))
    }

    /// Exact rational roots with multiplicities.
    pub fn rational_roots(&self) -> Result<Vec<(BigRational, u32)>, AlgError> {
        if self.is_zero() {
            return Err(AlgError::ZeroPolynomial);
        }
        let mut out = Vec::new();
        for (f, mult) in self.square_free() {
            for r in f.rational_roots_squarefree() {
                out.push((r, mult));
            }
        }
        out.sort();
        Ok(out)
    }

    fn rational_roots_squarefree(&self) -> Vec<BigRational> {
        let (_, p) = self.integer_primitive();
        // zero root handled separately so the constant-term divisors are nonzero
        let mut roots = Vec::new();
        let mut p = p;
        if p.coeff(0).is_zero() {
            roots.push(BigRational::zero());
            p = UPoly::new(p.coeffs[1..].to_vec());
        }
        if p.degree() == 0 {
            return roots;
        }
        let lead = p.lead().numer().clone();
        let c0 = p.coeff(0).numer().clone();
        match (rational::divisors(&lead, 10_000_000), rational::divisors(&c0, 10_000_000)) {
            (Some(qs), Some(ps)) => {
                for q in &qs {
                    for pp in &ps {
                        for s in [1i64, -1] {
                            let cand = BigRational::new(
                                BigInt::from(*pp as i128 * s as i128),
                                BigInt::from(*q),
                            );
                            if !roots.contains(&cand) && p.eval(&cand).is_zero() {
                                roots.push(cand);
                            }
                        }
                    }
                }
            }
            _ => {
                if let Ok(rs) = p.real_roots(1e-12) {
                    roots.extend(rs.into_iter().filter_map(|r| r.exact));
                }
            }
        }
        roots.sort();
        roots
    }

    /// Numeric value of the leading coefficient as f64 (for diagnostics).
    pub fn lead_f64(&self) -> f64 {
        self.lead().to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = crate::MultiPoly::from_upoly(self, "z");
        write!(f, "{}", p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn vals(p: &UPoly) -> Vec<(f64, u32)> {
        p.real_roots_in(-2.0, 2.0, 1e-14)
            .unwrap()
            .into_iter()
            .map(|r| (r.value, r.multiplicity))
            .collect()
    }

    #[test]
    fn symmetric_quadratic() {
        let p = UPoly::from_ints(&[-1, 0, 1]);
        assert_eq!(vals(&p), vec![(-1.0, 1), (1.0, 1)]);
    }

    #[test]
    fn cubic_with_zero_root() {
        let p = UPoly::from_ints(&[0, -1, 0, 1]);
        assert_eq!(vals(&p), vec![(-1.0, 1), (0.0, 1), (1.0, 1)]);
    }

    #[test]
    fn branch_points_of_closed_gap() {
        // (z^2 - 2)^2 - 4 = z^4 - 4 z^2
        let p = UPoly::from_ints(&[-2, 0, 1]);
        let q = p.mul(&p).sub(&UPoly::from_ints(&[4]));
        let r = q.real_roots_in(-3.0, 3.0, 1e-14).unwrap();
        let v: Vec<(f64, u32)> = r.iter().map(|r| (r.value, r.multiplicity)).collect();
        assert_eq!(v, vec![(-2.0, 1), (0.0, 2), (2.0, 1)]);
        assert!(r.iter().all(|r| r.exact.is_some()));
    }

    #[test]
    fn irrational_roots_are_bracketed() {
        let p = UPoly::from_ints(&[-2, 0, 1]);
        let r = p.real_roots(1e-15).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[1].value - 2f64.sqrt()).abs() < 1e-14);
        assert!(r[1].exact.is_none());
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert_eq!(UPoly::zero().real_roots(1e-9).unwrap_err(), AlgError::ZeroPolynomial);
    }

    #[test]
    fn rational_roots_with_multiplicity() {
        // (2z - 1)^2 (z + 3)
        let a = UPoly::from_ints(&[-1, 2]);
        let p = a.mul(&a).mul(&UPoly::from_ints(&[3, 1]));
        let r = p.rational_roots().unwrap();
        assert_eq!(r, vec![(int(-3), 1), (crate::rational::rat(1, 2), 2)]);
    }
}
