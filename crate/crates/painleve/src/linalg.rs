//! Small exact helpers shared by the analysis stages.

use std::collections::BTreeMap;

use exactalg::rational::rat;
use exactalg::{MultiPoly, Rat, RingMatrix};
use num_traits::{One, Zero};

/// Solution set `x0 + span(basis)` of `A x = b`, or `None` if inconsistent.
pub fn solve_affine(a: &[Vec<Rat>], b: &[Rat]) -> Option<(Vec<Rat>, Vec<Vec<Rat>>)> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<Rat>> = a.iter().zip(b).map(|(r, v)| r.iter().cloned().chain([v.clone()]).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in 0..=cols {
                    let d = &f * &m[r][k];
                    m[i][k] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut x0 = vec![Rat::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x0[c] = m[i][cols].clone();
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let basis = free
        .iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); cols];
            v[f] = Rat::one();
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = -m[i][f].clone();
            }
            v
        })
        .collect();
    Some((x0, basis))
}

/// Deterministic "generic" rational values for a list of symbols.
pub fn generic_point(symbols: &[String]) -> BTreeMap<String, Rat> {
    const P: [i64; 12] = [37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83];
    symbols
        .iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), rat(P[i % P.len()] + 7 * (i / P.len()) as i64, 29 + i as i64)))
        .collect()
}

/// Evaluates a polynomial matrix at a point covering its symbols.
pub fn eval_matrix(m: &RingMatrix<MultiPoly>, point: &BTreeMap<String, Rat>) -> RingMatrix<Rat> {
    RingMatrix::from_fn(m.rows(), m.cols(), |i, j| m.get(i, j).eval(point).expect("generic point covers all symbols"))
}

/// Symbols used anywhere in a polynomial matrix.
pub fn matrix_symbols(m: &RingMatrix<MultiPoly>) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            for v in m.get(i, j).used_vars() {
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
    }
    out
}

/// `p / x^k` for the largest `k` dividing every term; returns `(k, quotient)`.
pub fn split_var_power(p: &MultiPoly, x: &str) -> (u32, MultiPoly) {
    let Some(i) = p.vars().iter().position(|v| v == x) else { return (0, p.clone()) };
    let k = p.terms().map(|(e, _)| e[i]).min().unwrap_or(0);
    if k == 0 {
        return (0, p.clone());
    }
    let terms = p.terms().map(|(e, c)| {
        let mut e = e.to_vec();
        e[i] -= k;
        (e, c.clone())
    });
    (k, MultiPoly::from_terms(p.vars(), terms).expect("same variables"))
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

pub fn rat_str(r: &Rat) -> String {
    exactalg::rational::fmt(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use exactalg::rational::int;

    #[test]
    fn affine_line() {
        // x + y = 1  ->  (1, 0) + s(-1, 1)
        let (x0, basis) = solve_affine(&[vec![int(1), int(1)]], &[int(1)]).unwrap();
        assert_eq!(x0, vec![int(1), int(0)]);
        assert_eq!(basis, vec![vec![int(-1), int(1)]]);
        assert!(solve_affine(&[vec![int(1)], vec![int(1)]], &[int(1), int(2)]).is_none());
    }

    #[test]
    fn var_power() {
        let x = MultiPoly::var("x");
        let y = MultiPoly::var("y");
        let p = &x.pow(2) * &(&y + &MultiPoly::from_int(1));
        let (k, q) = split_var_power(&p, "x");
        assert_eq!(k, 2);
        assert_eq!(q, &y + &MultiPoly::from_int(1));
        assert_eq!(combinations(4, 2).len(), 6);
    }
}
