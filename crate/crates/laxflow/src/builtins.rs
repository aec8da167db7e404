//! Constructors for the classical Lax flows. Every `b` function returns the
//! second pencil in the convention `dA/dt = [A, B]`.

use std::collections::HashMap;

use exactalg::{Rat, RingMatrix, UPoly};
use nalgebra::DMatrix;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use sysdsl::{PencilSpec, VectorFieldSystem};

use crate::error::LaxError;
use crate::integrate::{rk4, CompiledPoly, StepConfig, Trajectory};
use crate::pencil::{MatrixPencil, RationalPencil, SpectralCurve, Symmetry};

/// Flaschka variables `a_j = exp((x_j - x_{j+1})/2) / 2`, `b_j = -y_j / 2`.
/// Periodic lattices wrap `x_{N+1} = x_1`; open ones return `N - 1` values of a.
pub fn flaschka(x: &[f64], y: &[f64], periodic: bool) -> Result<(Vec<f64>, Vec<f64>), LaxError> {
    let n = x.len();
    if n < 2 || y.len() != n {
        return Err(LaxError::Params(format!("need N >= 2 positions and momenta, got {} and {}", n, y.len())));
    }
    let len = if periodic { n } else { n - 1 };
    let a = (0..len).map(|j| 0.5 * ((x[j] - x[(j + 1) % n]) / 2.0).exp()).collect();
    let b = y.iter().map(|v| -v / 2.0).collect();
    Ok((a, b))
}

fn check_toda(a: &[f64], b: &[f64], periodic: bool) -> Result<usize, LaxError> {
    let n = b.len();
    let expect = if periodic { n } else { n.saturating_sub(1) };
    if n < 2 || a.len() != expect {
        return Err(LaxError::Params(format!("N = {n} needs {expect} off-diagonal entries, got {}", a.len())));
    }
    if periodic && n < 3 {
        return Err(LaxError::Params("the periodic lattice needs N >= 3".into()));
    }
    if a.iter().any(|v| *v == 0.0 || !v.is_finite()) || b.iter().any(|v| !v.is_finite()) {
        return Err(LaxError::Params("off-diagonal entries must be finite and nonzero".into()));
    }
    Ok(n)
}

fn toda_blocks(a: &[f64], b: &[f64], skew: bool) -> DMatrix<f64> {
    let n = b.len();
    let s = if skew { -1.0 } else { 1.0 };
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            if skew { 0.0 } else { b[i] }
        } else if j == i + 1 && i < a.len() {
            a[i]
        } else if i == j + 1 && j < a.len() {
            s * a[j]
        } else {
            0.0
        }
    })
}

/// Periodic Jacobi pencil with `a_N` in the corners: `h^{-1}` top right,
/// `h` bottom left. Requires N >= 3 so the corners do not overlap `a_1`.
pub fn toda_periodic(a: &[f64], b: &[f64]) -> Result<MatrixPencil, LaxError> {
    let n = check_toda(a, b, true)?;
    let inner = toda_blocks(&a[..n - 1], b, false);
    let mut lo = DMatrix::zeros(n, n);
    let mut hi = DMatrix::zeros(n, n);
    lo[(0, n - 1)] = a[n - 1];
    hi[(n - 1, 0)] = a[n - 1];
    Ok(MatrixPencil::new(-1, vec![lo, inner, hi])?.with_symmetry(Symmetry::Symmetric))
}

/// Open lattice: constant tridiagonal matrix.
pub fn toda_open(a: &[f64], b: &[f64]) -> Result<MatrixPencil, LaxError> {
    check_toda(a, b, false)?;
    Ok(MatrixPencil::constant(toda_blocks(a, b, false))?.with_symmetry(Symmetry::Symmetric))
}

/// `(a, b)` read back from a Toda pencil.
pub fn toda_coordinates(p: &MatrixPencil) -> (Vec<f64>, Vec<f64>) {
    let a0 = p.coeff(0).expect("Toda pencil has an h^0 block");
    let n = p.dim();
    let b = (0..n).map(|i| a0[(i, i)]).collect();
    let mut a: Vec<f64> = (0..n - 1).map(|i| a0[(i, i + 1)]).collect();
    if let Some(lo) = p.coeff(-1) {
        a.push(lo[(0, n - 1)]);
    }
    (a, b)
}

/// Second pencil of the Toda flow (the skew part of A with reversed sign).
pub fn toda_b(p: &MatrixPencil) -> Result<MatrixPencil, LaxError> {
    let (a, b) = toda_coordinates(p);
    let n = b.len();
    let inner = -toda_blocks(&a[..n - 1], &b, true);
    if p.low() < 0 {
        let mut lo = DMatrix::zeros(n, n);
        let mut hi = DMatrix::zeros(n, n);
        lo[(0, n - 1)] = a[n - 1];
        hi[(n - 1, 0)] = -a[n - 1];
        MatrixPencil::new(-1, vec![lo, inner, hi])
    } else {
        MatrixPencil::constant(inner)
    }
}

/// `a_j' = a_j (b_{j+1} - b_j)`, `b_j' = 2 (a_j^2 - a_{j-1}^2)` with
/// periodic or open boundary (`a_0 = a_N = 0` for the open chain).
pub fn toda_rhs(a: &[f64], b: &[f64], periodic: bool) -> (Vec<f64>, Vec<f64>) {
    let n = b.len();
    let at = |j: isize| -> f64 {
        if periodic {
            a[j.rem_euclid(n as isize) as usize]
        } else if j >= 0 && (j as usize) < a.len() {
            a[j as usize]
        } else {
            0.0
        }
    };
    let da = (0..a.len()).map(|j| a[j] * (b[(j + 1) % n] - b[j])).collect();
    let db = (0..n).map(|j| 2.0 * (at(j as isize).powi(2) - at(j as isize - 1).powi(2))).collect();
    (da, db)
}

fn check_distinct(alpha: &[f64]) -> Result<(), LaxError> {
    for i in 0..alpha.len() {
        for j in 0..i {
            if alpha[i] == alpha[j] {
                return Err(LaxError::Params(format!("alpha_{} = alpha_{} = {}", j + 1, i + 1, alpha[i])));
            }
        }
    }
    Ok(())
}

fn diag(v: &[f64]) -> DMatrix<f64> {
    DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(v))
}

fn check_skew(x: &DMatrix<f64>, n: usize) -> Result<(), LaxError> {
    if x.nrows() != n || x.ncols() != n {
        return Err(LaxError::Dimension(format!("expected a {n}x{n} matrix")));
    }
    if (x + x.transpose()).amax() > 1e-12 * (1.0 + x.amax()) {
        return Err(LaxError::Params("matrix is not skew-symmetric".into()));
    }
    Ok(())
}

/// Geodesic flow on SO(n): `A = X + alpha h`, `B = lambda X + beta h`,
/// `lambda_ij = (beta_i - beta_j) / (alpha_i - alpha_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EulerArnold {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
}

impl EulerArnold {
    pub fn new(alpha: Vec<f64>, beta: Vec<f64>) -> Result<Self, LaxError> {
        if alpha.len() != beta.len() || alpha.len() < 2 {
            return Err(LaxError::Params("alpha and beta must have the same length n >= 2".into()));
        }
        check_distinct(&alpha)?;
        Ok(EulerArnold { alpha, beta })
    }

    pub fn n(&self) -> usize {
        self.alpha.len()
    }

    pub fn lambda(&self, i: usize, j: usize) -> f64 {
        (self.beta[i] - self.beta[j]) / (self.alpha[i] - self.alpha[j])
    }

    pub fn pencil(&self, x: &DMatrix<f64>) -> Result<MatrixPencil, LaxError> {
        check_skew(x, self.n())?;
        MatrixPencil::new(0, vec![x.clone(), diag(&self.alpha)])
    }

    pub fn b(&self, p: &MatrixPencil) -> Result<MatrixPencil, LaxError> {
        let x = p.coeff(0).ok_or(LaxError::Empty)?;
        let n = self.n();
        let lx = DMatrix::from_fn(n, n, |i, j| if i == j { 0.0 } else { self.lambda(i, j) * x[(i, j)] });
        MatrixPencil::new(0, vec![lx, diag(&self.beta)])
    }
}

/// Rigid body `M' = [M, Omega]`, `M = Omega J + J Omega`, as the pencil
/// `A = M + J^2 h`, `B = Omega + J h`.
#[derive(Debug, Clone, PartialEq)]
pub struct Manakov {
    pub inertia: Vec<f64>,
}

impl Manakov {
    pub fn new(inertia: Vec<f64>) -> Result<Self, LaxError> {
        if inertia.len() < 2 || inertia.iter().any(|l| !(*l > 0.0)) {
            return Err(LaxError::Params("inertia must be n >= 2 positive values".into()));
        }
        Ok(Manakov { inertia })
    }

    pub fn n(&self) -> usize {
        self.inertia.len()
    }

    pub fn omega(&self, m: &DMatrix<f64>) -> DMatrix<f64> {
        let l = &self.inertia;
        DMatrix::from_fn(self.n(), self.n(), |i, j| m[(i, j)] / (l[i] + l[j]))
    }

    pub fn pencil(&self, m: &DMatrix<f64>) -> Result<MatrixPencil, LaxError> {
        check_skew(m, self.n())?;
        let j2: Vec<f64> = self.inertia.iter().map(|l| l * l).collect();
        Ok(MatrixPencil::new(0, vec![m.clone(), diag(&j2)])?.with_symmetry(Symmetry::Skew))
    }

    pub fn b(&self, p: &MatrixPencil) -> Result<MatrixPencil, LaxError> {
        let m = p.coeff(0).ok_or(LaxError::Empty)?;
        MatrixPencil::new(0, vec![self.omega(m), diag(&self.inertia)])
    }

    /// `-tr(M Omega) / 4`.
    pub fn energy(&self, m: &DMatrix<f64>) -> f64 {
        -(m * self.omega(m)).trace() / 4.0
    }
}

/// Rank-two perturbation `A = alpha h^2 - h x^y - y (x) y` with
/// `B = ad_beta ad_alpha^{-1} (y^x) + beta h`, `x^y = x y^T - y x^T`.
/// `beta = alpha` is the Neumann problem, `beta = 1/alpha` the geodesic
/// flow on the ellipsoid.
#[derive(Debug, Clone, PartialEq)]
pub struct RankTwo {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
}

fn wedge(u: &[f64], v: &[f64]) -> DMatrix<f64> {
    DMatrix::from_fn(u.len(), u.len(), |i, j| u[i] * v[j] - v[i] * u[j])
}

impl RankTwo {
    pub fn neumann(alpha: Vec<f64>) -> Result<Self, LaxError> {
        check_distinct(&alpha)?;
        Ok(RankTwo { beta: alpha.clone(), alpha })
    }

    pub fn jacobi_geodesic(alpha: Vec<f64>) -> Result<Self, LaxError> {
        check_distinct(&alpha)?;
        if alpha.contains(&0.0) {
            return Err(LaxError::Params("alpha must be nonzero".into()));
        }
        Ok(RankTwo { beta: alpha.iter().map(|a| 1.0 / a).collect(), alpha })
    }

    pub fn n(&self) -> usize {
        self.alpha.len()
    }

    fn split<'a>(&self, s: &'a [f64]) -> Result<(&'a [f64], &'a [f64]), LaxError> {
        if s.len() != 2 * self.n() {
            return Err(LaxError::Dimension(format!("state of length {} for n = {}", s.len(), self.n())));
        }
        Ok(s.split_at(self.n()))
    }

    fn ad(&self, x: &[f64], y: &[f64]) -> DMatrix<f64> {
        let w = wedge(y, x);
        let n = self.n();
        DMatrix::from_fn(n, n, |i, j| {
            if i == j { 0.0 } else { (self.beta[i] - self.beta[j]) / (self.alpha[i] - self.alpha[j]) * w[(i, j)] }
        })
    }

    /// State `(x, y)` to the pencil `A(h)`.
    pub fn pencil(&self, s: &[f64]) -> Result<MatrixPencil, LaxError> {
        let (x, y) = self.split(s)?;
        let yy = nalgebra::DVector::from_column_slice(y);
        MatrixPencil::new(0, vec![-(&yy * yy.transpose()), -wedge(x, y), diag(&self.alpha)])
    }

    pub fn b(&self, s: &[f64]) -> Result<MatrixPencil, LaxError> {
        let (x, y) = self.split(s)?;
        MatrixPencil::new(0, vec![self.ad(x, y), diag(&self.beta)])
    }

    /// `x' = -M x - beta y`, `y' = -M y` with `M = ad_beta ad_alpha^{-1}(y^x)`.
    pub fn rhs(&self, s: &[f64]) -> Result<Vec<f64>, LaxError> {
        let (x, y) = self.split(s)?;
        let m = self.ad(x, y);
        let xv = nalgebra::DVector::from_column_slice(x);
        let yv = nalgebra::DVector::from_column_slice(y);
        let dx = -(&m * &xv) - yv.component_mul(&nalgebra::DVector::from_column_slice(&self.beta));
        let dy = -(&m * &yv);
        Ok(dx.iter().chain(dy.iter()).copied().collect())
    }

    pub fn integrate(&self, s0: Vec<f64>, cfg: &StepConfig) -> Result<Trajectory<Vec<f64>>, LaxError> {
        self.split(&s0)?;
        rk4(s0, |s| self.rhs(s), cfg)
    }

    /// Exact pencil for rational `(x, y)` and rational `alpha`.
    pub fn rational_pencil(alpha: &[Rat], x: &[Rat], y: &[Rat]) -> Result<RationalPencil, LaxError> {
        let n = alpha.len();
        if x.len() != n || y.len() != n {
            return Err(LaxError::Dimension("alpha, x and y must have the same length".into()));
        }
        let a0 = RingMatrix::from_fn(n, n, |i, j| -(&y[i] * &y[j]));
        let a1 = RingMatrix::from_fn(n, n, |i, j| -(&x[i] * &y[j] - &y[i] * &x[j]));
        let a2 = RingMatrix::from_fn(n, n, |i, j| if i == j { alpha[i].clone() } else { Rat::zero() });
        RationalPencil::new(0, vec![a0, a1, a2])
    }
}

/// Branch points of a rank-two spectral curve. With `zeta = z / h^2` the
/// curve is `h^2 a(zeta) = N(zeta)`, hyperelliptic over the zeta-line; the
/// branch points are the odd-multiplicity roots of `a N` plus infinity when
/// `deg(a N)` is odd.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HyperellipticData {
    pub degree: usize,
    pub finite_branch_points: usize,
    pub branch_points: usize,
    pub genus: usize,
}

pub fn rank_two_branch_points(curve: &SpectralCurve) -> Result<HyperellipticData, LaxError> {
    let exact = curve.exact.as_ref().ok_or_else(|| LaxError::Params("curve was not computed exactly".into()))?;
    let n = curve.dim;
    // z^j h^k -> zeta^j h^{2j+k}; collect the h^{2n} and h^{2n-2} layers.
    let mut a = vec![Rat::zero(); n + 1];
    let mut nn = vec![Rat::zero(); n + 1];
    for (&(j, k), c) in exact {
        if c.is_zero() {
            continue;
        }
        let total = 2 * j as i32 + k;
        if total == 2 * n as i32 {
            a[j as usize] += c;
        } else if total == 2 * n as i32 - 2 {
            nn[j as usize] -= c;
        } else {
            return Err(LaxError::Params(format!("term z^{j} h^{k} does not fit the rank-two form")));
        }
    }
    let disc = UPoly::new(a).mul(&UPoly::new(nn));
    if disc.is_zero() {
        return Err(LaxError::Params("degenerate curve".into()));
    }
    let degree = disc.degree();
    let finite: usize = disc.square_free().iter().filter(|(_, m)| m % 2 == 1).map(|(f, _)| f.degree()).sum();
    let total = finite + (degree % 2);
    Ok(HyperellipticData { degree, finite_branch_points: finite, branch_points: total, genus: total / 2 - 1 })
}

/// `w^2 = (z^3 - c1 z^2 + c2 z)^2 - 4 c3 z` with `c1 = H2`, `c2 = H1`,
/// `c3 = H3` for the periodic 5-particle Kac-van Moerbeke lattice.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KvmCurve {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    /// Coefficients of the right-hand side in z, ascending.
    pub polynomial: Vec<f64>,
}

pub fn kvm_curve(h1: f64, h2: f64, h3: f64) -> KvmCurve {
    let (c1, c2) = (h2, h1);
    // (z^3 - c1 z^2 + c2 z)^2 = z^2 (z^2 - c1 z + c2)^2
    let q = [c2, -c1, 1.0];
    let mut sq = [0.0; 5];
    for i in 0..3 {
        for j in 0..3 {
            sq[i + j] += q[i] * q[j];
        }
    }
    let mut poly = vec![0.0; 7];
    for (k, v) in sq.iter().enumerate() {
        poly[k + 2] = *v;
    }
    poly[1] -= 4.0 * h3;
    KvmCurve { c1, c2, c3: h3, polynomial: poly }
}

/// Evaluates the pencils declared in a system file at a phase point.
pub fn eval_pencil_spec(
    spec: &PencilSpec,
    sys: &VectorFieldSystem,
    bindings: &HashMap<String, f64>,
) -> Result<impl Fn(&[f64]) -> Result<(MatrixPencil, MatrixPencil), LaxError>, LaxError> {
    let mut names = sys.vars().to_vec();
    let mut consts = Vec::new();
    for c in sys.consts() {
        let v = bindings.get(c).ok_or_else(|| LaxError::Params(format!("constant `{c}` is not bound")))?;
        names.push(c.clone());
        consts.push(*v);
    }
    let compile = |map: &std::collections::BTreeMap<i32, RingMatrix<exactalg::MultiPoly>>| -> Result<(i32, Vec<Vec<CompiledPoly>>), LaxError> {
        let low = map.keys().next().copied().unwrap_or(0);
        let high = map.keys().next_back().copied().unwrap_or(0);
        let mut blocks = Vec::new();
        for k in low..=high {
            let mut entries = Vec::new();
            for i in 0..spec.dim {
                for j in 0..spec.dim {
                    let e = map.get(&k).map(|m| m.get(i, j).clone()).unwrap_or_else(exactalg::MultiPoly::zero);
                    entries.push(CompiledPoly::new(&e, &names)?);
                }
            }
            blocks.push(entries);
        }
        Ok((low, blocks))
    };
    let (la, ba) = compile(&spec.a)?;
    let (lb, bb) = compile(&spec.b)?;
    let n = spec.dim;
    Ok(move |x: &[f64]| {
        let mut v = x.to_vec();
        v.extend_from_slice(&consts);
        let build = |low: i32, blocks: &[Vec<CompiledPoly>]| {
            let mats = blocks.iter().map(|e| DMatrix::from_fn(n, n, |i, j| e[i * n + j].eval(&v))).collect();
            MatrixPencil::new(low, mats)
        };
        Ok((build(la, &ba)?, build(lb, &bb)?))
    })
}

/// Rational convenience for tests and fixtures.
pub fn to_f64s(v: &[Rat]) -> Vec<f64> {
    v.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
}
