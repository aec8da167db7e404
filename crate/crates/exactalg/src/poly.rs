use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::AlgError;
use crate::rational;
use crate::upoly::UPoly;

type Exps = Vec<u32>;

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Every polynomial carries its own ordered variable list; binary operations
/// work on the union of the two lists (left operand's order first). Equality
/// is semantic, so `x + y` over `[x, y]` equals `x + y` over `[y, x, z]`.
#[derive(Clone)]
pub struct MultiPoly {
    vars: Arc<[String]>,
    terms: BTreeMap<Exps, BigRational>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly { vars: Arc::from(Vec::<String>::new()), terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        MultiPoly { vars: Arc::from(Vec::<String>::new()), terms }
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(rational::int(n))
    }

    pub fn var(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![1], BigRational::one());
        MultiPoly { vars: Arc::from(vec![name.to_string()]), terms }
    }

    /// Zero polynomial over a given variable list.
    pub fn zero_over(vars: &[String]) -> Self {
        MultiPoly { vars: Arc::from(vars.to_vec()), terms: BTreeMap::new() }
    }

    /// Builds a polynomial from explicit terms; zero coefficients are dropped
    /// and repeated exponent vectors are summed.
    pub fn from_terms(
        vars: &[String],
        terms: impl IntoIterator<Item = (Vec<u32>, BigRational)>,
    ) -> Result<Self, AlgError> {
        let mut out = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != vars.len() {
                return Err(AlgError::Dimension(format!(
                    "exponent vector of length {} for {} variables",
                    e.len(),
                    vars.len()
                )));
            }
            add_term(&mut out, e, c);
        }
        Ok(MultiPoly { vars: Arc::from(vars.to_vec()), terms: out })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigRational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k == 0))
    }

    /// The value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<BigRational> {
        if self.is_constant() {
            Some(self.constant_term())
        } else {
            None
        }
    }

    pub fn constant_term(&self) -> BigRational {
        self.terms
            .iter()
            .find(|(e, _)| e.iter().all(|&k| k == 0))
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigRational::zero)
    }

    /// Names of variables that actually occur with a positive exponent.
    pub fn used_vars(&self) -> Vec<String> {
        (0..self.vars.len())
            .filter(|&i| self.terms.keys().any(|e| e[i] > 0))
            .map(|i| self.vars[i].clone())
            .collect()
    }

    pub fn contains_var(&self, name: &str) -> bool {
        match self.index_of(name) {
            Some(i) => self.terms.keys().any(|e| e[i] > 0),
            None => false,
        }
    }

    fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Re-expresses the polynomial over `vars`, which must contain every used variable.
    pub fn with_vars(&self, vars: &[String]) -> Result<Self, AlgError> {
        if *self.vars == *vars {
            return Ok(self.clone());
        }
        let map: Vec<Option<usize>> =
            self.vars.iter().map(|v| vars.iter().position(|w| w == v)).collect();
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut ne = vec![0u32; vars.len()];
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => ne[j] = k,
                    None => return Err(AlgError::MissingSymbol(self.vars[i].clone())),
                }
            }
            add_term(&mut terms, ne, c.clone());
        }
        Ok(MultiPoly { vars: Arc::from(vars.to_vec()), terms })
    }

    fn with_shared(&self, vars: &Arc<[String]>) -> Self {
        if Arc::ptr_eq(&self.vars, vars) || *self.vars == **vars {
            return MultiPoly { vars: vars.clone(), terms: self.terms.clone() };
        }
        self.with_vars(vars).expect("superset variable list")
    }

    /// Drops variables that never occur.
    pub fn compact(&self) -> Self {
        let used: Vec<usize> =
            (0..self.vars.len()).filter(|&i| self.terms.keys().any(|e| e[i] > 0)).collect();
        if used.len() == self.vars.len() {
            return self.clone();
        }
        let vars: Vec<String> = used.iter().map(|&i| self.vars[i].clone()).collect();
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (used.iter().map(|&i| e[i]).collect(), c.clone()))
            .collect();
        MultiPoly { vars: Arc::from(vars), terms }
    }

    fn union_vars(a: &Arc<[String]>, b: &Arc<[String]>) -> Arc<[String]> {
        if Arc::ptr_eq(a, b) || **a == **b {
            return a.clone();
        }
        if b.iter().all(|v| a.contains(v)) {
            return a.clone();
        }
        if a.iter().all(|v| b.contains(v)) {
            return b.clone();
        }
        let mut v: Vec<String> = a.to_vec();
        for w in b.iter() {
            if !v.contains(w) {
                v.push(w.clone());
            }
        }
        Arc::from(v)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return MultiPoly { vars: self.vars.clone(), terms: BTreeMap::new() };
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = MultiPoly::one().with_shared(&self.vars);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, name: &str) -> u32 {
        match self.index_of(name) {
            Some(i) => self.terms.keys().map(|e| e[i]).max().unwrap_or(0),
            None => 0,
        }
    }

    /// Coefficient of `name^k`, as a polynomial in the remaining variables.
    pub fn coeff_of(&self, name: &str, k: u32) -> Self {
        let Some(i) = self.index_of(name) else {
            return if k == 0 { self.clone() } else { MultiPoly::zero_over(&self.vars) };
        };
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[i] == k {
                let mut ne = e.clone();
                ne[i] = 0;
                terms.insert(ne, c.clone());
            }
        }
        MultiPoly { vars: self.vars.clone(), terms }
    }

    pub fn derivative(&self, name: &str) -> Self {
        let Some(i) = self.index_of(name) else {
            return MultiPoly::zero_over(&self.vars);
        };
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut ne = e.clone();
                let k = ne[i];
                ne[i] -= 1;
                add_term(&mut terms, ne, c * BigRational::from_integer(BigInt::from(k)));
            }
        }
        MultiPoly { vars: self.vars.clone(), terms }
    }

    /// Exact value at a point; every used variable must be assigned.
    pub fn eval(&self, assignment: &BTreeMap<String, BigRational>) -> Result<BigRational, AlgError> {
        let mut vals: Vec<Option<&BigRational>> = Vec::with_capacity(self.vars.len());
        for v in self.vars.iter() {
            vals.push(assignment.get(v));
        }
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let x = vals[i].ok_or_else(|| AlgError::MissingSymbol(self.vars[i].clone()))?;
                t *= pow_rat(x, k);
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Floating evaluation with values given per variable name.
    pub fn eval_f64(&self, assignment: &HashMap<String, f64>) -> Result<f64, AlgError> {
        let mut vals = Vec::with_capacity(self.vars.len());
        for v in self.vars.iter() {
            vals.push(assignment.get(v).copied());
        }
        let mut acc = 0.0;
        for (e, c) in &self.terms {
            let mut t = rational::to_f64(c);
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let x = vals[i].ok_or_else(|| AlgError::MissingSymbol(self.vars[i].clone()))?;
                t *= x.powi(k as i32);
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Replaces each named variable by a polynomial.
    pub fn substitute(&self, subs: &BTreeMap<String, MultiPoly>) -> Self {
        if subs.is_empty() {
            return self.clone();
        }
        let idx: Vec<Option<&MultiPoly>> = self.vars.iter().map(|v| subs.get(v)).collect();
        if idx.iter().all(|s| s.is_none()) {
            return self.clone();
        }
        let mut cache: HashMap<(usize, u32), MultiPoly> = HashMap::new();
        let mut acc = MultiPoly::zero();
        for (e, c) in &self.terms {
            let mut kept = e.clone();
            let mut factor = MultiPoly::constant(c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if let Some(s) = idx[i] {
                    kept[i] = 0;
                    let p = cache.entry((i, k)).or_insert_with(|| s.pow(k)).clone();
                    factor = &factor * &p;
                }
            }
            let mono = MultiPoly {
                vars: self.vars.clone(),
                terms: std::iter::once((kept, BigRational::one())).collect(),
            };
            acc = &acc + &(&mono * &factor);
        }
        acc.compact_against(&self.vars, subs)
    }

    // Keep the original variable order where possible for stable printing.
    fn compact_against(self, orig: &[String], subs: &BTreeMap<String, MultiPoly>) -> Self {
        let mut order: Vec<String> = orig.iter().filter(|v| !subs.contains_key(*v)).cloned().collect();
        for v in self.vars.iter() {
            if !order.contains(v) {
                order.push(v.clone());
            }
        }
        let used = self.used_vars();
        let order: Vec<String> = order.into_iter().filter(|v| used.contains(v)).collect();
        self.with_vars(&order).expect("union of variables")
    }

    pub fn substitute_one(&self, name: &str, value: &MultiPoly) -> Self {
        let mut m = BTreeMap::new();
        m.insert(name.to_string(), value.clone());
        self.substitute(&m)
    }

    /// Exponentwise minimum over all terms, keyed by variable name.
    pub fn monomial_content(&self) -> Vec<(String, u32)> {
        if self.terms.is_empty() {
            return Vec::new();
        }
        let n = self.vars.len();
        let mut m = vec![u32::MAX; n];
        for e in self.terms.keys() {
            for i in 0..n {
                m[i] = m[i].min(e[i]);
            }
        }
        (0..n).filter(|&i| m[i] > 0).map(|i| (self.vars[i].clone(), m[i])).collect()
    }

    /// Divides out the monomial content.
    pub fn strip_monomial_content(&self) -> Self {
        let content = self.monomial_content();
        if content.is_empty() {
            return self.clone();
        }
        let idx: Vec<(usize, u32)> =
            content.iter().map(|(v, k)| (self.index_of(v).unwrap(), *k)).collect();
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut ne = e.clone();
                for &(i, k) in &idx {
                    ne[i] -= k;
                }
                (ne, c.clone())
            })
            .collect();
        MultiPoly { vars: self.vars.clone(), terms }
    }

    /// Splits off the rational content: `self = c * p` with `p` having coprime
    /// integer coefficients and a positive leading coefficient.
    pub fn primitive(&self) -> (BigRational, Self) {
        if self.is_zero() {
            return (BigRational::zero(), self.clone());
        }
        let l = rational::lcm_of_denoms(self.terms.values());
        let scaled: Vec<BigRational> =
            self.terms.values().map(|c| c * BigRational::from_integer(l.clone())).collect();
        let mut g = rational::gcd_of_numers(scaled.iter());
        if self.leading_coeff().is_negative() {
            g = -g;
        }
        let content = BigRational::new(g, l);
        let inv = content.recip();
        (content, self.scale(&inv))
    }

    /// Canonical representative of the polynomial up to a nonzero rational
    /// factor and a monomial factor.
    pub fn canonical(&self) -> Self {
        self.strip_monomial_content().primitive().1.compact()
    }

    /// Leading term in graded-lex order (variable order of this polynomial).
    pub fn leading_term(&self) -> Option<(&[u32], &BigRational)> {
        self.terms.iter().max_by(|a, b| grlex(a.0, b.0)).map(|(e, c)| (e.as_slice(), c))
    }

    pub fn leading_coeff(&self) -> BigRational {
        self.leading_term().map(|(_, c)| c.clone()).unwrap_or_else(BigRational::zero)
    }

    /// Univariate view in `name`; `None` if other variables occur.
    pub fn to_upoly(&self, name: &str) -> Option<UPoly> {
        let i = self.index_of(name);
        let mut coeffs: Vec<BigRational> = Vec::new();
        for (e, c) in &self.terms {
            for (j, &k) in e.iter().enumerate() {
                if k > 0 && Some(j) != i {
                    return None;
                }
            }
            let d = i.map(|i| e[i]).unwrap_or(0) as usize;
            if coeffs.len() <= d {
                coeffs.resize(d + 1, BigRational::zero());
            }
            coeffs[d] += c;
        }
        Some(UPoly::new(coeffs))
    }

    pub fn from_upoly(p: &UPoly, name: &str) -> Self {
        let vars = vec![name.to_string()];
        let terms = p
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (vec![k as u32], c.clone()));
        MultiPoly::from_terms(&vars, terms).expect("univariate")
    }

    /// Terms sorted in graded-lex order, highest first.
    pub fn sorted_terms(&self) -> Vec<(&[u32], &BigRational)> {
        let mut v: Vec<(&[u32], &BigRational)> =
            self.terms.iter().map(|(e, c)| (e.as_slice(), c)).collect();
        v.sort_by(|a, b| grlex(b.0, a.0));
        v
    }

    pub fn map_coeffs(&self, f: impl Fn(&BigRational) -> BigRational) -> Self {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            add_term(&mut terms, e.clone(), f(c));
        }
        MultiPoly { vars: self.vars.clone(), terms }
    }

    fn binop(&self, rhs: &MultiPoly, sign: bool) -> MultiPoly {
        let vars = Self::union_vars(&self.vars, &rhs.vars);
        let a = self.with_shared(&vars);
        let b = rhs.with_shared(&vars);
        let mut terms = a.terms;
        for (e, c) in b.terms {
            add_term(&mut terms, e, if sign { c } else { -c });
        }
        MultiPoly { vars, terms }
    }

    /// `self / d` when `d` divides `self` exactly, `None` otherwise.
    pub fn div_exact(&self, d: &MultiPoly) -> Option<MultiPoly> {
        if d.is_zero() {
            return None;
        }
        let vars = Self::union_vars(&self.vars, &d.vars);
        let mut rem = self.with_shared(&vars);
        let d = d.with_shared(&vars);
        let (dl, dc) = d.terms.iter().max_by(|a, b| grlex(a.0, b.0)).map(|(e, c)| (e.clone(), c.clone()))?;
        let mut quot = BTreeMap::new();
        while let Some((rl, rc)) = rem.terms.iter().max_by(|a, b| grlex(a.0, b.0)).map(|(e, c)| (e.clone(), c.clone())) {
            if rl.iter().zip(&dl).any(|(r, q)| r < q) {
                return None;
            }
            let e: Exps = rl.iter().zip(&dl).map(|(r, q)| r - q).collect();
            let c = rc / &dc;
            let step = MultiPoly { vars: vars.clone(), terms: BTreeMap::from([(e.clone(), c.clone())]) };
            rem = &rem - &(&step * &d);
            add_term(&mut quot, e, c);
        }
        Some(MultiPoly { vars, terms: quot })
    }

    fn mul_impl(&self, rhs: &MultiPoly) -> MultiPoly {
        let vars = Self::union_vars(&self.vars, &rhs.vars);
        if self.is_zero() || rhs.is_zero() {
            return MultiPoly { vars, terms: BTreeMap::new() };
        }
        let a = self.with_shared(&vars);
        let b = rhs.with_shared(&vars);
        let mut terms = BTreeMap::new();
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e: Exps = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                add_term(&mut terms, e, ca * cb);
            }
        }
        MultiPoly { vars, terms }
    }
}

fn add_term(terms: &mut BTreeMap<Exps, BigRational>, e: Exps, c: BigRational) {
    if c.is_zero() {
        return;
    }
    match terms.entry(e) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let s = o.get() + &c;
            if s.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}

fn pow_rat(x: &BigRational, k: u32) -> BigRational {
    num_traits::pow(x.clone(), k as usize)
}

/// Graded-lex comparison: total degree first, then lexicographic.
fn grlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.vars, &other.vars) || *self.vars == *other.vars {
            return self.terms == other.terms;
        }
        (self - other).is_zero()
    }
}

impl Eq for MultiPoly {}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({})", self)
    }
}

impl fmt::Display for MultiPoly {
    /// Canonical form: graded-lex descending, `c*x^a*y^b` monomials.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.sorted_terms() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        self.vars[i].clone()
                    } else {
                        format!("{}^{}", self.vars[i], k)
                    }
                })
                .collect();
            if mono.is_empty() {
                write!(f, "{}", rational::fmt(&a))?;
            } else if a.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", rational::fmt(&a), mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl From<BigRational> for MultiPoly {
    fn from(c: BigRational) -> Self {
        MultiPoly::constant(c)
    }
}

impl From<i64> for MultiPoly {
    fn from(c: i64) -> Self {
        MultiPoly::from_int(c)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: &MultiPoly) -> MultiPoly {
                let f: fn(&MultiPoly, &MultiPoly) -> MultiPoly = $body;
                f(self, rhs)
            }
        }
        impl $tr<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: &MultiPoly) -> MultiPoly {
                (&self).$m(rhs)
            }
        }
        impl $tr<MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: MultiPoly) -> MultiPoly {
                self.$m(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| a.binop(b, true));
forward_binop!(Sub, sub, |a, b| a.binop(b, false));
forward_binop!(Mul, mul, |a, b| a.mul_impl(b));

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn x() -> MultiPoly {
        MultiPoly::var("x")
    }
    fn y() -> MultiPoly {
        MultiPoly::var("y")
    }

    #[test]
    fn eval_linear() {
        let p = x() + y();
        let mut a = BTreeMap::new();
        a.insert("x".to_string(), int(1));
        a.insert("y".to_string(), int(2));
        assert_eq!(p.eval(&a).unwrap(), int(3));
    }

    #[test]
    fn eval_zero_poly() {
        let a = BTreeMap::new();
        assert_eq!(MultiPoly::zero().eval(&a).unwrap(), int(0));
    }

    #[test]
    fn eval_missing_symbol_is_named() {
        let p = x() * y();
        let mut a = BTreeMap::new();
        a.insert("x".to_string(), int(1));
        assert_eq!(p.eval(&a), Err(AlgError::MissingSymbol("y".into())));
    }

    #[test]
    fn eval_quintic_curve_head() {
        let a = MultiPoly::var("alpha");
        let b = MultiPoly::var("beta");
        let p = b.pow(3).scale(&int(64)) - (a.pow(3) * b.pow(2)).scale(&int(16));
        let mut asg = BTreeMap::new();
        asg.insert("alpha".to_string(), int(1));
        asg.insert("beta".to_string(), int(1));
        assert_eq!(p.eval(&asg).unwrap(), int(48));
    }

    #[test]
    fn display_is_graded_lex() {
        let p = x().pow(2) * y().scale(&rat(3, 4)) - x() + MultiPoly::from_int(2) - y().pow(3);
        assert_eq!(p.to_string(), "3/4*x^2*y - y^3 - x + 2");
    }

    #[test]
    fn equality_ignores_variable_order() {
        let p = x() + y();
        let q = (y() + x()).with_vars(&["y".into(), "x".into(), "z".into()]).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn substitution_and_derivative() {
        let p = x().pow(2) * y();
        let q = p.substitute_one("x", &(y() + MultiPoly::from_int(1)));
        assert_eq!(q, (y() + MultiPoly::from_int(1)).pow(2) * y());
        assert_eq!(p.derivative("x"), (x() * y()).scale(&int(2)));
        assert_eq!(p.coeff_of("y", 1), x().pow(2));
    }

    #[test]
    fn canonical_strips_content() {
        let p = (x().pow(2) * y() - x().scale(&rat(1, 2))).scale(&rat(-6, 5));
        assert_eq!(p.canonical(), x() * y().scale(&int(2)) - MultiPoly::from_int(1));
    }
}
