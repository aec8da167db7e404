use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::AlgError;
use crate::poly::MultiPoly;

/// Commutative ring with exact division by small positive integers, which is
/// all Faddeev-LeVerrier needs.
pub trait Ring:
    Clone + Debug + PartialEq + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn div_int(&self, k: i64) -> Self;
    fn from_int(k: i64) -> Self;
}

impl Ring for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn div_int(&self, k: i64) -> Self {
        self / BigRational::from_integer(BigInt::from(k))
    }
    fn from_int(k: i64) -> Self {
        BigRational::from_integer(BigInt::from(k))
    }
}

impl Ring for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn div_int(&self, k: i64) -> Self {
        self / k as f64
    }
    fn from_int(k: i64) -> Self {
        k as f64
    }
}

impl Ring for MultiPoly {
    fn zero() -> Self {
        MultiPoly::zero()
    }
    fn one() -> Self {
        MultiPoly::one()
    }
    fn is_zero(&self) -> bool {
        MultiPoly::is_zero(self)
    }
    fn div_int(&self, k: i64) -> Self {
        self.scale(&BigRational::new(BigInt::from(1), BigInt::from(k)))
    }
    fn from_int(k: i64) -> Self {
        MultiPoly::from_int(k)
    }
}

/// Dense row-major matrix over a [`Ring`].
#[derive(Clone, Debug, PartialEq)]
pub struct RingMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Ring> RingMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RingMatrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        RingMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, AlgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(AlgError::Dimension("ragged rows".into()));
        }
        Ok(RingMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> RingMatrix<U> {
        RingMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, o: &Self) -> Result<Self, AlgError> {
        if self.cols != o.rows {
            return Err(AlgError::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        Ok(Self::from_fn(self.rows, o.cols, |i, j| {
            let mut acc = T::zero();
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                acc = acc + a.clone() * o.get(k, j).clone();
            }
            acc
        }))
    }

    pub fn add(&self, o: &Self) -> Result<Self, AlgError> {
        self.zip(o, |a, b| a.clone() + b.clone())
    }

    pub fn sub(&self, o: &Self) -> Result<Self, AlgError> {
        self.zip(o, |a, b| a.clone() - b.clone())
    }

    fn zip(&self, o: &Self, f: impl Fn(&T, &T) -> T) -> Result<Self, AlgError> {
        if self.rows != o.rows || self.cols != o.cols {
            return Err(AlgError::Dimension("shape mismatch".into()));
        }
        Ok(RingMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|a| a.clone() * c.clone())
    }

    /// `M v`
    pub fn apply(&self, v: &[T]) -> Result<Vec<T>, AlgError> {
        if v.len() != self.cols {
            return Err(AlgError::Dimension("vector length".into()));
        }
        Ok((0..self.rows)
            .map(|i| {
                (0..self.cols).fold(T::zero(), |acc, k| acc + self.get(i, k).clone() * v[k].clone())
            })
            .collect())
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    /// Faddeev-LeVerrier. Returns the coefficients `c_0..c_n` (ascending) of
    /// `det(lambda I - M)` together with the adjugate of `M`.
    pub fn charpoly_adjugate(&self) -> Result<(Vec<T>, Self), AlgError> {
        if !self.is_square() {
            return Err(AlgError::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        let mut c = vec![T::zero(); n + 1];
        c[n] = T::one();
        if n == 0 {
            return Ok((c, Self::zeros(0, 0)));
        }
        let mut mk = Self::zeros(n, n);
        let id = Self::identity(n);
        for k in 1..=n {
            let am = self.mul(&mk)?;
            mk = am.add(&id.scale(&c[n - k + 1]))?;
            let t = self.mul(&mk)?.trace();
            c[n - k] = -(t.div_int(k as i64));
        }
        let sign = if n % 2 == 1 { T::one() } else { -T::one() };
        let adj = mk.scale(&sign);
        Ok((c, adj))
    }

    /// `det(lambda I - M)` coefficients, ascending.
    pub fn charpoly(&self) -> Result<Vec<T>, AlgError> {
        Ok(self.charpoly_adjugate()?.0)
    }

    pub fn det(&self) -> Result<T, AlgError> {
        if !self.is_square() {
            return Err(AlgError::NotSquare(self.rows, self.cols));
        }
        if self.rows <= 3 {
            return Ok(self.det_laplace());
        }
        let c = self.charpoly()?;
        Ok(if self.rows.is_multiple_of(2) { c[0].clone() } else { -c[0].clone() })
    }

    pub fn adjugate(&self) -> Result<Self, AlgError> {
        Ok(self.charpoly_adjugate()?.1)
    }

    /// Cofactor expansion along the first row; used for small matrices and as
    /// an independent check of Faddeev-LeVerrier.
    pub fn det_laplace(&self) -> T {
        let n = self.rows;
        match n {
            0 => T::one(),
            1 => self.data[0].clone(),
            _ => {
                let mut acc = T::zero();
                for j in 0..n {
                    let a = self.get(0, j);
                    if a.is_zero() {
                        continue;
                    }
                    let rows: Vec<usize> = (1..n).collect();
                    let cols: Vec<usize> = (0..n).filter(|&k| k != j).collect();
                    let minor = self.submatrix(&rows, &cols).det_laplace();
                    let term = a.clone() * minor;
                    acc = if j % 2 == 0 { acc + term } else { acc - term };
                }
                acc
            }
        }
    }
}

impl RingMatrix<BigRational> {
    /// Rank by Gaussian elimination over Q.
    pub fn rank(&self) -> usize {
        let mut m: Vec<Vec<BigRational>> =
            (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j).clone()).collect()).collect();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&r| !Zero::is_zero(&m[r][col])) else {
                continue;
            };
            m.swap(rank, p);
            let piv = m[rank][col].clone();
            for r in 0..self.rows {
                if r != rank && !Zero::is_zero(&m[r][col]) {
                    let f = &m[r][col] / &piv;
                    for c in col..self.cols {
                        let v = &f * &m[rank][c];
                        m[r][c] -= v;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// Basis of the right kernel over Q.
    pub fn kernel(&self) -> Vec<Vec<BigRational>> {
        let mut m: Vec<Vec<BigRational>> =
            (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j).clone()).collect()).collect();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&r| !Zero::is_zero(&m[r][col])) else {
                continue;
            };
            m.swap(rank, p);
            let piv = m[rank][col].clone();
            for c in 0..self.cols {
                m[rank][c] = &m[rank][c] / &piv;
            }
            for r in 0..self.rows {
                if r != rank && !Zero::is_zero(&m[r][col]) {
                    let f = m[r][col].clone();
                    for c in 0..self.cols {
                        let v = &f * &m[rank][c];
                        m[r][c] -= v;
                    }
                }
            }
            pivots.push(col);
            rank += 1;
        }
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![<BigRational as Zero>::zero(); self.cols];
                v[f] = <BigRational as One>::one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -m[r][f].clone();
                }
                v
            })
            .collect()
    }

    pub fn to_f64(&self) -> RingMatrix<f64> {
        self.map(crate::rational::to_f64)
    }
}

impl RingMatrix<MultiPoly> {
    /// Exact evaluation of every entry.
    pub fn eval(
        &self,
        assignment: &std::collections::BTreeMap<String, BigRational>,
    ) -> Result<RingMatrix<BigRational>, AlgError> {
        let mut data = Vec::with_capacity(self.data.len());
        for p in &self.data {
            data.push(p.eval(assignment)?);
        }
        Ok(RingMatrix { rows: self.rows, cols: self.cols, data })
    }

    /// Entries as rationals if every entry is constant.
    pub fn as_constant(&self) -> Option<RingMatrix<BigRational>> {
        let mut data = Vec::with_capacity(self.data.len());
        for p in &self.data {
            data.push(p.as_constant()?);
        }
        Some(RingMatrix { rows: self.rows, cols: self.cols, data })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn m(rows: &[&[i64]]) -> RingMatrix<BigRational> {
        RingMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&k| int(k)).collect()).collect()).unwrap()
    }

    #[test]
    fn faddeev_matches_laplace() {
        let a = m(&[&[2, -1, 0, 3], &[1, 4, 2, -2], &[0, 5, -3, 1], &[7, 1, 1, 1]]);
        assert_eq!(a.det().unwrap(), a.det_laplace());
        let adj = a.adjugate().unwrap();
        let prod = a.mul(&adj).unwrap();
        let d = a.det_laplace();
        assert_eq!(prod, RingMatrix::identity(4).scale(&d));
    }

    #[test]
    fn charpoly_of_diagonal() {
        let a = m(&[&[-1, 0, 0], &[0, 2, 0], &[0, 0, 5]]);
        // (x+1)(x-2)(x-5) = x^3 - 6x^2 + 3x + 10
        assert_eq!(a.charpoly().unwrap(), vec![int(10), int(3), int(-6), int(1)]);
    }

    #[test]
    fn rank_and_kernel() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let k = a.kernel();
        assert_eq!(k.len(), 1);
        assert!(a.apply(&k[0]).unwrap().iter().all(Zero::is_zero));
    }

    #[test]
    fn dimension_checked() {
        let a = m(&[&[1, 2]]);
        assert!(a.mul(&a).is_err());
    }
}
