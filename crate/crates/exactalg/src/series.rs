use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::AlgError;
use crate::matrix::Ring;
use crate::poly::MultiPoly;

/// Truncated Puiseux series `sum_k c_k t^{k/l}` with [`MultiPoly`] coefficients.
///
/// `coeffs[j]` is the coefficient of `t^{(low + j)/l}`. Every coefficient with
/// exponent numerator below `valid_to` is known; `valid_to == None` means the
/// series is exact (a finite sum). The first stored coefficient is nonzero
/// unless the series is zero, in which case `coeffs` is empty.
#[derive(Clone, PartialEq)]
pub struct PuiseuxSeries {
    ell: u32,
    low: i64,
    coeffs: Vec<MultiPoly>,
    valid_to: Option<i64>,
}

impl PuiseuxSeries {
    /// Exact zero.
    pub fn zero() -> Self {
        PuiseuxSeries { ell: 1, low: 0, coeffs: Vec::new(), valid_to: None }
    }

    /// `O(t^{valid_to/l})`
    pub fn big_o(ell: u32, valid_to: i64) -> Self {
        PuiseuxSeries { ell, low: valid_to, coeffs: Vec::new(), valid_to: Some(valid_to) }
    }

    /// Single term `c t^{k/l}` (exact).
    pub fn monomial(ell: u32, k: i64, c: MultiPoly) -> Self {
        Self::from_coeffs(ell, k, vec![c], None)
    }

    pub fn constant(c: MultiPoly) -> Self {
        Self::monomial(1, 0, c)
    }

    /// General constructor; normalizes leading zeros and drops terms at or
    /// beyond `valid_to`.
    pub fn from_coeffs(ell: u32, low: i64, coeffs: Vec<MultiPoly>, valid_to: Option<i64>) -> Self {
        assert!(ell > 0, "branching index must be positive");
        let mut s = PuiseuxSeries { ell, low, coeffs, valid_to };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        if let Some(v) = self.valid_to {
            let keep = (v - self.low).max(0) as usize;
            self.coeffs.truncate(keep);
        }
        let lead_zeros = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros == self.coeffs.len() {
            self.coeffs.clear();
            self.low = self.valid_to.unwrap_or(0);
            return;
        }
        self.coeffs.drain(..lead_zeros);
        self.low += lead_zeros as i64;
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    /// Exponent numerator of the leading term (meaningless for zero series).
    pub fn low(&self) -> i64 {
        self.low
    }

    pub fn valid_to(&self) -> Option<i64> {
        self.valid_to
    }

    pub fn is_exact(&self) -> bool {
        self.valid_to.is_none()
    }

    /// True when no nonzero coefficient is known.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `t^{k/l}`; `None` when beyond the known order.
    pub fn coeff(&self, k: i64) -> Option<MultiPoly> {
        if let Some(v) = self.valid_to {
            if k >= v {
                return None;
            }
        }
        if k < self.low || self.coeffs.is_empty() {
            return Some(MultiPoly::zero());
        }
        Some(self.coeffs.get((k - self.low) as usize).cloned().unwrap_or_else(MultiPoly::zero))
    }

    /// Nonzero terms as `(k, c)` meaning `c t^{k/l}`.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &MultiPoly)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(j, c)| (self.low + j as i64, c))
    }

    /// Rewrites in `t^{1/(l m)}`.
    pub fn rescale(&self, new_ell: u32) -> Result<Self, AlgError> {
        if !new_ell.is_multiple_of(self.ell) {
            return Err(AlgError::BranchingMismatch(self.ell, new_ell));
        }
        let m = (new_ell / self.ell) as i64;
        if m == 1 {
            return Ok(self.clone());
        }
        let mut coeffs = Vec::new();
        for (j, c) in self.coeffs.iter().enumerate() {
            if j > 0 {
                for _ in 1..m {
                    coeffs.push(MultiPoly::zero());
                }
            }
            coeffs.push(c.clone());
        }
        Ok(Self::from_coeffs(new_ell, self.low * m, coeffs, self.valid_to.map(|v| v * m)))
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        if a.ell == b.ell {
            return (a.clone(), b.clone());
        }
        let l = (a.ell as u64).lcm(&(b.ell as u64)) as u32;
        (a.rescale(l).unwrap(), b.rescale(l).unwrap())
    }

    pub fn truncate(&self, valid_to: i64) -> Self {
        let v = match self.valid_to {
            Some(w) => w.min(valid_to),
            None => valid_to,
        };
        Self::from_coeffs(self.ell, self.low, self.coeffs.clone(), Some(v))
    }

    fn add_impl(&self, o: &Self, sign: bool) -> Self {
        if o.is_exact() && o.is_zero() {
            return self.clone();
        }
        if self.is_exact() && self.is_zero() {
            return if sign { o.clone() } else { -o };
        }
        let (a, b) = Self::common(self, o);
        let valid_to = min_opt(a.valid_to, b.valid_to);
        let lo = match (a.is_zero(), b.is_zero()) {
            (true, true) => return Self::big_o(a.ell, valid_to.unwrap_or(0)),
            (true, false) => b.low,
            (false, true) => a.low,
            (false, false) => a.low.min(b.low),
        };
        let hi = a.end().max(b.end());
        let hi = match valid_to {
            Some(v) => hi.min(v),
            None => hi,
        };
        let mut coeffs = Vec::with_capacity((hi - lo).max(0) as usize);
        for k in lo..hi {
            let x = a.coeff_raw(k);
            let y = b.coeff_raw(k);
            coeffs.push(if sign { x + y } else { x - y });
        }
        Self::from_coeffs(a.ell, lo, coeffs, valid_to)
    }

    fn end(&self) -> i64 {
        self.low + self.coeffs.len() as i64
    }

    fn coeff_raw(&self, k: i64) -> MultiPoly {
        if k < self.low {
            return MultiPoly::zero();
        }
        self.coeffs.get((k - self.low) as usize).cloned().unwrap_or_else(MultiPoly::zero)
    }

    fn mul_same(&self, o: &Self) -> Self {
        if (self.is_exact() && self.is_zero()) || (o.is_exact() && o.is_zero()) {
            return Self { ell: self.ell, ..Self::zero() };
        }
        // a zero series with finite validity behaves like O(t^{valid_to})
        let low_eff = |s: &Self| if s.is_zero() { s.valid_to.unwrap() } else { s.low };
        let valid_to = min_opt(
            o.valid_to.map(|vb| low_eff(self) + vb),
            self.valid_to.map(|va| va + low_eff(o)),
        );
        if self.is_zero() || o.is_zero() {
            return Self::big_o(self.ell, valid_to.expect("inexact factor"));
        }
        let low = self.low + o.low;
        let mut n = self.coeffs.len() + o.coeffs.len() - 1;
        if let Some(v) = valid_to {
            n = n.min((v - low).max(0) as usize);
        }
        let mut coeffs = vec![MultiPoly::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= n || a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if i + j >= n {
                    break;
                }
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        Self::from_coeffs(self.ell, low, coeffs, valid_to)
    }

    pub fn scale(&self, c: &MultiPoly) -> Self {
        Self::from_coeffs(self.ell, self.low, self.coeffs.iter().map(|x| x * c).collect(), self.valid_to)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::monomial(self.ell, 0, MultiPoly::one());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Multiplies by `t^{k/l}`.
    pub fn shift(&self, k: i64) -> Self {
        Self::from_coeffs(self.ell, self.low + k, self.coeffs.clone(), self.valid_to.map(|v| v + k))
    }

    /// `d/dt`
    pub fn derivative(&self) -> Self {
        let l = self.ell as i64;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| c.scale(&BigRational::new(BigInt::from(self.low + j as i64), BigInt::from(l))))
            .collect();
        Self::from_coeffs(self.ell, self.low - l, coeffs, self.valid_to.map(|v| v - l))
    }

    /// True when every known nonzero term has an integral exponent.
    pub fn has_integral_exponents(&self) -> bool {
        let l = self.ell as i64;
        self.terms().all(|(k, _)| k % l == 0)
    }

    /// Substitutes every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&MultiPoly) -> MultiPoly) -> Self {
        Self::from_coeffs(self.ell, self.low, self.coeffs.iter().map(f).collect(), self.valid_to)
    }

    /// Evaluates `f` with some of its variables replaced by series. Variables
    /// not in `subs` stay in the coefficients.
    pub fn eval_poly(f: &MultiPoly, subs: &BTreeMap<String, PuiseuxSeries>) -> PuiseuxSeries {
        let vars = f.vars().to_vec();
        let idx: Vec<Option<&PuiseuxSeries>> = vars.iter().map(|v| subs.get(v)).collect();
        let mut cache: HashMap<(usize, u32), PuiseuxSeries> = HashMap::new();
        let mut acc = PuiseuxSeries::zero();
        for (e, c) in f.terms() {
            let mut kept = e.to_vec();
            let mut s = PuiseuxSeries::zero();
            let mut first = true;
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if let Some(series) = idx[i] {
                    kept[i] = 0;
                    let p = cache.entry((i, k)).or_insert_with(|| series.pow(k)).clone();
                    s = if first { p } else { &s * &p };
                    first = false;
                }
            }
            let coeff = MultiPoly::from_terms(&vars, [(kept, c.clone())]).unwrap().compact();
            let term = if first { PuiseuxSeries::constant(coeff) } else { s.scale(&coeff) };
            acc = &acc + &term;
        }
        acc
    }
}

fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(x.min(y)),
    }
}

/// Cauchy product; both factors must share the branching index.
pub fn series_mul(a: &PuiseuxSeries, b: &PuiseuxSeries) -> Result<PuiseuxSeries, AlgError> {
    if a.ell != b.ell {
        return Err(AlgError::BranchingMismatch(a.ell, b.ell));
    }
    Ok(a.mul_same(b))
}

impl Add<&PuiseuxSeries> for &PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn add(self, o: &PuiseuxSeries) -> PuiseuxSeries {
        self.add_impl(o, true)
    }
}

impl Sub<&PuiseuxSeries> for &PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn sub(self, o: &PuiseuxSeries) -> PuiseuxSeries {
        self.add_impl(o, false)
    }
}

impl Mul<&PuiseuxSeries> for &PuiseuxSeries {
    type Output = PuiseuxSeries;
    /// Rescales to a common branching index first.
    fn mul(self, o: &PuiseuxSeries) -> PuiseuxSeries {
        let (a, b) = PuiseuxSeries::common(self, o);
        a.mul_same(&b)
    }
}

impl Neg for &PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn neg(self) -> PuiseuxSeries {
        PuiseuxSeries::from_coeffs(self.ell, self.low, self.coeffs.iter().map(|c| -c).collect(), self.valid_to)
    }
}

macro_rules! by_value {
    ($tr:ident, $m:ident) => {
        impl $tr for PuiseuxSeries {
            type Output = PuiseuxSeries;
            fn $m(self, o: PuiseuxSeries) -> PuiseuxSeries {
                (&self).$m(&o)
            }
        }
    };
}
by_value!(Add, add);
by_value!(Sub, sub);
by_value!(Mul, mul);

impl Neg for PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn neg(self) -> PuiseuxSeries {
        -&self
    }
}

impl Ring for PuiseuxSeries {
    fn zero() -> Self {
        PuiseuxSeries::zero()
    }
    fn one() -> Self {
        PuiseuxSeries::constant(MultiPoly::one())
    }
    fn is_zero(&self) -> bool {
        PuiseuxSeries::is_zero(self)
    }
    fn div_int(&self, k: i64) -> Self {
        self.map_coeffs(|c| c.scale(&BigRational::new(BigInt::from(1), BigInt::from(k))))
    }
    fn from_int(k: i64) -> Self {
        PuiseuxSeries::constant(MultiPoly::from_int(k))
    }
}

impl fmt::Debug for PuiseuxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PuiseuxSeries({})", self)
    }
}

impl fmt::Display for PuiseuxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, c) in self.terms() {
            let e = BigRational::new(BigInt::from(k), BigInt::from(self.ell));
            let t = if Zero::is_zero(&e) {
                String::new()
            } else if e == BigRational::from_integer(BigInt::from(1)) {
                "*t".to_string()
            } else {
                format!("*t^({})", crate::rational::fmt(&e))
            };
            parts.push(format!("({}){}", c, t));
        }
        if let Some(v) = self.valid_to {
            let e = BigRational::new(BigInt::from(v), BigInt::from(self.ell));
            parts.push(format!("O(t^({}))", crate::rational::fmt(&e)));
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn c(n: i64, d: i64) -> MultiPoly {
        MultiPoly::constant(rat(n, d))
    }

    #[test]
    fn inverse_powers_cancel() {
        let a = PuiseuxSeries::from_coeffs(1, -1, vec![c(1, 1)], Some(5));
        let b = PuiseuxSeries::from_coeffs(1, 1, vec![c(1, 1)], Some(7));
        let p = series_mul(&a, &b).unwrap();
        assert_eq!(p.coeff(0), Some(c(1, 1)));
        assert_eq!(p.coeff(1), Some(MultiPoly::zero()));
        assert_eq!(p.valid_to(), Some(6));
    }

    #[test]
    fn square_of_half_power() {
        let alpha = MultiPoly::var("alpha");
        let a = PuiseuxSeries::monomial(2, -1, alpha.clone());
        let p = series_mul(&a, &a).unwrap();
        assert_eq!(p.low(), -2);
        assert_eq!(p.coeff(-2), Some(alpha.pow(2)));
        assert!(p.has_integral_exponents());
    }

    #[test]
    fn leading_square_of_y2() {
        let y2 = PuiseuxSeries::from_coeffs(2, -4, vec![c(-3, 8), MultiPoly::zero(), MultiPoly::var("A")], Some(0));
        let s = series_mul(&y2, &y2).unwrap();
        assert_eq!(s.coeff(-8), Some(c(9, 64)));
    }

    #[test]
    fn mismatched_branching_rejected() {
        let a = PuiseuxSeries::monomial(2, 1, c(1, 1));
        let b = PuiseuxSeries::monomial(3, 1, c(1, 1));
        assert_eq!(series_mul(&a, &b).unwrap_err(), AlgError::BranchingMismatch(2, 3));
        // operator form rescales
        let p = &a * &b;
        assert_eq!(p.ell(), 6);
        assert_eq!(p.coeff(5), Some(c(1, 1)));
    }

    #[test]
    fn derivative_of_power() {
        let a = PuiseuxSeries::monomial(2, -3, c(1, 1));
        let d = a.derivative();
        assert_eq!(d.low(), -5);
        assert_eq!(d.coeff(-5), Some(c(-3, 2)));
    }
}
