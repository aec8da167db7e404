use exactalg::{classify_integer, eigenvalues, ClassifiedEigenvalue, MultiPoly, Rat, RingMatrix, UPoly};
use exactalg::DEFAULT_INTEGER_TOL;
use num_traits::Signed;
use sysdsl::VectorFieldSystem;

use crate::error::PainleveError;
use crate::indicial::Balance;
use crate::linalg::{eval_matrix, generic_point, matrix_symbols};

#[derive(Debug, Clone)]
pub struct KowalewskiData {
    /// `L = d fhat / dz (leading) + diag(k)`, over the balance parameters.
    pub matrix: RingMatrix<MultiPoly>,
    /// Coefficients of `det(x I - L)`, lowest degree first.
    pub charpoly: Vec<MultiPoly>,
    /// True if the characteristic polynomial depends on the parameters; the
    /// numeric data below then refers to a generic parameter point.
    pub parameter_dependent: bool,
    pub eigenvalues: Vec<ClassifiedEigenvalue>,
    /// Rational eigenvalues with multiplicity, ascending.
    pub exact: Vec<(Rat, u32)>,
    /// Positive eigenvalues that fall on the branching grid `Z / ell`.
    pub resonances: Vec<Rat>,
    /// Basis of `ker(L - k I)` for each resonance (at a generic parameter
    /// point when `L` is not constant).
    pub kernels: Vec<(Rat, Vec<Vec<Rat>>)>,
}

impl KowalewskiData {
    pub fn max_resonance(&self) -> Option<&Rat> {
        self.resonances.last()
    }

    /// Whether `k` is an exact eigenvalue.
    pub fn has_eigenvalue(&self, k: &Rat) -> bool {
        self.exact.iter().any(|(r, _)| r == k)
    }
}

/// Jacobian of the dominant part at the balance, with `k_i` on the diagonal.
pub fn kowalewski_matrix(sys: &VectorFieldSystem, bal: &Balance) -> RingMatrix<MultiPoly> {
    let vars = sys.vars();
    let subs = vars.iter().cloned().zip(bal.leading.iter().cloned()).collect();
    let dom = &bal.weight_vector.dominant;
    RingMatrix::from_fn(vars.len(), vars.len(), |i, j| {
        let mut e = dom[i].derivative(&vars[j]).substitute(&subs);
        if i == j {
            e = e + MultiPoly::constant(bal.exponents()[i].clone());
        }
        e.compact()
    })
}

pub fn kowalewski(sys: &VectorFieldSystem, bal: &Balance) -> Result<KowalewskiData, PainleveError> {
    let l = kowalewski_matrix(sys, bal);
    let charpoly = l.charpoly()?;
    let parameter_dependent = charpoly.iter().any(|c| c.as_constant().is_none());
    let point = generic_point(&matrix_symbols(&l));
    let lq = eval_matrix(&l, &point);
    let cp: Vec<Rat> = charpoly.iter().map(|c| c.eval(&point).expect("generic point")).collect();
    let exact = UPoly::new(cp).rational_roots()?;
    let numeric = eigenvalues(&lq.to_f64())?;
    let ell = bal.ell() as i64;
    let resonances: Vec<Rat> = exact
        .iter()
        .map(|(r, _)| r.clone())
        .filter(|r| r.is_positive() && (r * Rat::from_integer(ell.into())).is_integer())
        .collect();
    let kernels = resonances
        .iter()
        .map(|k| {
            let shifted = RingMatrix::from_fn(lq.rows(), lq.cols(), |i, j| {
                let v = lq.get(i, j).clone();
                if i == j { v - k } else { v }
            });
            (k.clone(), shifted.kernel())
        })
        .collect();
    Ok(KowalewskiData {
        matrix: l,
        charpoly,
        parameter_dependent,
        eigenvalues: classify_integer(&numeric, DEFAULT_INTEGER_TOL),
        exact,
        resonances,
        kernels,
    })
}

/// The weight/eigenvalue property for one invariant: if the top-weight part
/// of `H` has weight `k` and a nonzero gradient at the leading coefficients,
/// `k` is an eigenvalue of `L`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightCheck {
    pub invariant: String,
    pub weight: Rat,
    pub homogeneous: bool,
    pub gradient_nonzero: bool,
    pub in_spectrum: bool,
}

impl WeightCheck {
    /// False only when the hypothesis holds and the conclusion fails.
    pub fn consistent(&self) -> bool {
        !self.gradient_nonzero || self.in_spectrum
    }
}

pub fn weight_checks(sys: &VectorFieldSystem, bal: &Balance, kow: &KowalewskiData) -> Vec<WeightCheck> {
    let wv = &bal.weight_vector;
    let subs = sys.vars().iter().cloned().zip(bal.leading.iter().cloned()).collect();
    sys.invariants()
        .iter()
        .filter_map(|(name, h)| {
            let (weight, top) = wv.top_component(sys, h)?;
            let homogeneous = wv.weight_of(sys, h).is_some();
            let gradient_nonzero = sys.vars().iter().any(|v| !top.derivative(v).substitute(&subs).is_zero());
            let in_spectrum = kow.has_eigenvalue(&weight);
            Some(WeightCheck { invariant: name.clone(), weight, homogeneous, gradient_nonzero, in_spectrum })
        })
        .collect()
}
