use std::collections::BTreeSet;

use exactalg::rational::int;
use exactalg::{MultiPoly, Rat, RingMatrix};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use sysdsl::VectorFieldSystem;

use crate::indicial::solve_polynomial_system;
use crate::linalg::{rat_str, solve_affine};

/// A monomial of lower weight than the dominant part, entering the Laurent
/// expansion `activation` steps (in units of t) after the leading order.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerTerm {
    pub term: MultiPoly,
    pub activation: Rat,
}

/// Weights `l_i` with `f_i(a^l z) = a^(l_i + 1) fhat_i(z) + lower order`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    pub weights: Vec<Rat>,
    /// Weight-homogeneous part of each right-hand side.
    pub dominant: Vec<MultiPoly>,
    pub lower: Vec<Vec<LowerTerm>>,
}

impl WeightVector {
    /// Least common denominator of the weights.
    pub fn ell(&self) -> u32 {
        self.weights
            .iter()
            .fold(exactalg::BigInt::one(), |acc, w| acc.lcm(w.denom()))
            .to_u32()
            .expect("branching index fits in u32")
    }

    /// Weight of a polynomial if it is weight-homogeneous; constants have weight 0.
    pub fn weight_of(&self, sys: &VectorFieldSystem, p: &MultiPoly) -> Option<Rat> {
        let p = p.with_vars(sys.symbols()).ok()?;
        let mut w: Option<Rat> = None;
        for (e, _) in p.terms() {
            let x = mono_weight(e, &self.weights);
            match &w {
                None => w = Some(x),
                Some(y) if *y == x => {}
                Some(_) => return None,
            }
        }
        w
    }

    /// Highest weight occurring in `p` and the sum of its terms of that weight.
    pub fn top_component(&self, sys: &VectorFieldSystem, p: &MultiPoly) -> Option<(Rat, MultiPoly)> {
        let p = p.with_vars(sys.symbols()).ok()?;
        let top = p.terms().map(|(e, _)| mono_weight(e, &self.weights)).max()?;
        let terms: Vec<(Vec<u32>, Rat)> = p
            .terms()
            .filter(|(e, _)| mono_weight(e, &self.weights) == top)
            .map(|(e, c)| (e.to_vec(), c.clone()))
            .collect();
        Some((top, MultiPoly::from_terms(sys.symbols(), terms).ok()?.compact()))
    }

    pub fn label(&self) -> String {
        let w: Vec<String> = self.weights.iter().map(rat_str).collect();
        format!("({})", w.join(", "))
    }
}

fn mono_weight(e: &[u32], l: &[Rat]) -> Rat {
    let mut w = Rat::zero();
    for (k, li) in e.iter().zip(l) {
        if *k > 0 {
            w += li * int(*k as i64);
        }
    }
    w
}

/// Checks a candidate weight vector and splits every right-hand side into its
/// dominant and lower-order parts.
pub fn classify(sys: &VectorFieldSystem, weights: &[Rat]) -> Option<WeightVector> {
    if weights.iter().any(|w| !w.is_positive()) {
        return None;
    }
    let symbols = sys.symbols();
    let mut dominant = Vec::new();
    let mut lower = Vec::new();
    for (i, f) in sys.equations().iter().enumerate() {
        let f = f.with_vars(symbols).ok()?;
        let target = &weights[i] + Rat::one();
        let mut dom = Vec::new();
        let mut low = Vec::new();
        for (e, c) in f.terms() {
            let w = mono_weight(e, weights);
            let t = MultiPoly::from_terms(symbols, [(e.to_vec(), c.clone())]).ok()?;
            if w > target {
                return None;
            }
            if w == target {
                dom.push(t);
            } else {
                low.push(LowerTerm { term: t, activation: &target - &w });
            }
        }
        if dom.is_empty() && !f.is_zero() {
            return None;
        }
        let mut d = MultiPoly::zero_over(symbols);
        for t in dom {
            d = d + t;
        }
        dominant.push(d);
        lower.push(low);
    }
    Some(WeightVector { weights: weights.to_vec(), dominant, lower })
}

const MAX_ANCHOR_CHOICES: usize = 1 << 16;

/// All rational weight vectors for which a nonempty dominant part is
/// weight-homogeneous.
///
/// Each equation contributes one anchor monomial, turning homogeneity into a
/// linear system for the weights. A unique solution is checked directly. A
/// one-parameter line `l0 + lambda*d` is cut down by requiring the variables
/// moving along `d` to have a nonzero leading coefficient: their dominant
/// equations are linear in those variables, so `lambda` must be a root of
/// the determinant of that linear indicial system.
pub fn detect_weights(sys: &VectorFieldSystem) -> Vec<WeightVector> {
    let m = sys.dim();
    let symbols = sys.symbols();
    let mut anchors: Vec<Vec<Vec<u32>>> = Vec::new();
    for f in sys.equations() {
        let f = f.with_vars(symbols).expect("system polynomial");
        let mut a: Vec<Vec<u32>> = Vec::new();
        for (e, _) in f.terms() {
            let v = e[..m].to_vec();
            if v.iter().any(|&k| k > 0) && !a.contains(&v) {
                a.push(v);
            }
        }
        if a.is_empty() {
            return Vec::new();
        }
        anchors.push(a);
    }

    let mut seen_points: BTreeSet<Vec<Rat>> = BTreeSet::new();
    let mut seen_lines: BTreeSet<(Vec<Rat>, Vec<Rat>)> = BTreeSet::new();
    let mut found: Vec<WeightVector> = Vec::new();
    let mut consider = |w: Vec<Rat>, found: &mut Vec<WeightVector>| {
        if seen_points.insert(w.clone()) {
            if let Some(v) = classify(sys, &w) {
                found.push(v);
            }
        }
    };

    let mut idx = vec![0usize; m];
    for _ in 0..MAX_ANCHOR_CHOICES {
        let a: Vec<Vec<Rat>> = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| int(anchors[i][idx[i]][j] as i64) - if i == j { Rat::one() } else { Rat::zero() })
                    .collect()
            })
            .collect();
        if let Some((x0, basis)) = solve_affine(&a, &vec![Rat::one(); m]) {
            match basis.len() {
                0 => consider(x0, &mut found),
                1 => {
                    let (x0, d) = normalize_line(x0, basis[0].clone());
                    if seen_lines.insert((x0.clone(), d.clone())) {
                        for w in line_candidates(sys, &x0, &d) {
                            consider(w, &mut found);
                        }
                    }
                }
                _ => {}
            }
        }
        // next anchor choice
        let mut k = 0;
        loop {
            if k == m {
                found.sort_by(|a, b| a.weights.cmp(&b.weights));
                return found;
            }
            idx[k] += 1;
            if idx[k] < anchors[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
    found.sort_by(|a, b| a.weights.cmp(&b.weights));
    found
}

/// Scales the direction so its first nonzero entry is 1 and moves the base
/// point so that entry of `x0` is 0.
fn normalize_line(x0: Vec<Rat>, d: Vec<Rat>) -> (Vec<Rat>, Vec<Rat>) {
    let p = d.iter().position(|x| !x.is_zero()).expect("nonzero direction");
    let s = d[p].recip();
    let d: Vec<Rat> = d.iter().map(|x| x * &s).collect();
    let shift = x0[p].clone();
    let x0 = x0.iter().zip(&d).map(|(a, b)| a - &(b * &shift)).collect();
    (x0, d)
}

fn line_candidates(sys: &VectorFieldSystem, x0: &[Rat], d: &[Rat]) -> Vec<Vec<Rat>> {
    let m = sys.dim();
    if d.iter().any(|x| x.is_negative()) {
        return Vec::new();
    }
    let symbols = sys.symbols();
    let in_d: Vec<bool> = d.iter().map(|x| !x.is_zero()).collect();
    // Monomials that stay dominant along the whole line.
    let mut fhat: Vec<MultiPoly> = Vec::new();
    for (i, f) in sys.equations().iter().enumerate() {
        let f = f.with_vars(symbols).expect("system polynomial");
        let mut acc = MultiPoly::zero_over(symbols);
        for (e, c) in f.terms() {
            if mono_weight(e, x0) == &x0[i] + Rat::one() && mono_weight(e, d) == d[i] {
                acc = acc + MultiPoly::from_terms(symbols, [(e.to_vec(), c.clone())]).expect("term");
            }
        }
        fhat.push(acc);
    }
    let vars = sys.vars();
    let fixed: Vec<usize> = (0..m).filter(|&i| !in_d[i]).collect();
    let moving: Vec<usize> = (0..m).filter(|&i| in_d[i]).collect();
    if fixed.iter().any(|&i| moving.iter().any(|&j| fhat[i].contains_var(&vars[j]))) {
        return Vec::new();
    }
    let eqs: Vec<MultiPoly> =
        fixed.iter().map(|&i| &MultiPoly::var(&vars[i]).scale(&x0[i]) + &fhat[i]).collect();
    let unknowns: Vec<String> = fixed.iter().map(|&i| vars[i].clone()).collect();
    let lam = "__lambda";
    let mut out = Vec::new();
    for s in solve_polynomial_system(&eqs, &unknowns).solutions {
        if s.values.values().any(|v| v.as_constant().is_none()) {
            continue;
        }
        let mut subs = s.values.clone();
        for &j in &moving {
            subs.insert(vars[j].clone(), MultiPoly::zero());
        }
        let mut ok = true;
        let mmat = RingMatrix::from_fn(moving.len(), moving.len(), |a, b| {
            let (i, j) = (moving[a], moving[b]);
            let dij = fhat[i].derivative(&vars[j]);
            if moving.iter().any(|&k| dij.contains_var(&vars[k])) {
                ok = false;
            }
            let mut e = dij.substitute(&subs);
            if i == j {
                e = e + MultiPoly::constant(x0[i].clone()) + MultiPoly::var(lam).scale(&d[i]);
            }
            e
        });
        if !ok {
            continue;
        }
        let Ok(det) = mmat.det() else { continue };
        let Some(p) = det.to_upoly(lam) else { continue };
        if p.is_zero() {
            continue;
        }
        for (r, _) in p.rational_roots().unwrap_or_default() {
            out.push(x0.iter().zip(d).map(|(a, b)| a + &(b * &r)).collect());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use exactalg::rational::rat;
    use sysdsl::builtin;

    fn weights(name: &str) -> Vec<Vec<Rat>> {
        detect_weights(&builtin::load(name).unwrap()).into_iter().map(|w| w.weights).collect()
    }

    #[test]
    fn quadratic_lattice_has_unit_weights() {
        assert_eq!(weights("kvm"), vec![vec![int(1); 5]]);
    }

    #[test]
    fn oscillator_has_none() {
        assert!(weights("oscillator").is_empty());
    }

    #[test]
    fn henon_heiles_half_integer_weights() {
        let w = weights("henon-heiles");
        assert!(w.contains(&vec![rat(1, 2), int(2), rat(3, 2), int(3)]), "{w:?}");
    }

    #[test]
    fn rdg_weights() {
        let w = weights("rdg");
        assert!(w.contains(&vec![int(1), int(1), int(2), int(2)]), "{w:?}");
        assert!(w.contains(&vec![rat(1, 2), int(1), rat(3, 2), int(2)]), "{w:?}");
    }
}
