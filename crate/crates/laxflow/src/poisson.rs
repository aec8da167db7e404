use std::collections::BTreeMap;

use exactalg::{MultiPoly, Rat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sysdsl::VectorFieldSystem;

use crate::error::LaxError;

/// Resolves an invariant name or a phase variable to a polynomial.
pub fn resolve(sys: &VectorFieldSystem, name: &str) -> Result<MultiPoly, LaxError> {
    if let Some(p) = sys.invariant(name) {
        return Ok(p.clone());
    }
    if sys.vars().iter().any(|v| v == name) {
        return Ok(MultiPoly::var(name));
    }
    Err(LaxError::Unknown(name.to_string()))
}

/// `{F, G}` as an expanded polynomial.
pub fn bracket_polynomial(sys: &VectorFieldSystem, f: &str, g: &str) -> Result<MultiPoly, LaxError> {
    Ok(sys.bracket(&resolve(sys, f)?, &resolve(sys, g)?)?.compact())
}

/// `{F, G}` evaluated exactly at rational points (constants must be bound).
pub fn poisson_bracket(sys: &VectorFieldSystem, f: &str, g: &str, points: &[Vec<Rat>]) -> Result<Vec<Rat>, LaxError> {
    let b = bracket_polynomial(sys, f, g)?;
    points.iter().map(|p| eval_at(sys, &b, p)).collect()
}

/// `J grad F`; zero for a Casimir.
pub fn hamiltonian_field(sys: &VectorFieldSystem, f: &str) -> Result<Vec<MultiPoly>, LaxError> {
    Ok(sys.hamiltonian_field_of(&resolve(sys, f)?)?.iter().map(MultiPoly::compact).collect())
}

fn eval_at(sys: &VectorFieldSystem, p: &MultiPoly, point: &[Rat]) -> Result<Rat, LaxError> {
    if point.len() != sys.dim() {
        return Err(LaxError::Dimension(format!("point of length {} for {} variables", point.len(), sys.dim())));
    }
    let a: BTreeMap<String, Rat> = sys.vars().iter().cloned().zip(point.iter().cloned()).collect();
    Ok(p.eval(&a)?)
}

/// Rational points with small numerators and denominators, reproducible
/// from the seed.
pub fn random_points(dim: usize, count: usize, seed: u64) -> Vec<Vec<Rat>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (0..dim).map(|_| Rat::new(rng.gen_range(-20i64..=20).into(), rng.gen_range(1i64..=7).into())).collect())
        .collect()
}

/// All triples of phase variables `i < j < k`.
pub fn coordinate_triples(sys: &VectorFieldSystem) -> Vec<[String; 3]> {
    let v = sys.vars();
    let mut out = Vec::new();
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            for k in j + 1..v.len() {
                out.push([v[i].clone(), v[j].clone(), v[k].clone()]);
            }
        }
    }
    out
}

/// `{F,{G,H}} + {G,{H,F}} + {H,{F,G}}` expanded.
pub fn jacobiator(sys: &VectorFieldSystem, f: &MultiPoly, g: &MultiPoly, h: &MultiPoly) -> Result<MultiPoly, LaxError> {
    let t1 = sys.bracket(f, &sys.bracket(g, h)?)?;
    let t2 = sys.bracket(g, &sys.bracket(h, f)?)?;
    let t3 = sys.bracket(h, &sys.bracket(f, g)?)?;
    Ok((t1 + t2 + t3).compact())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JacobiWitness {
    pub triple: [String; 3],
    pub point: Vec<String>,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JacobiCheck {
    pub triples: usize,
    pub points: usize,
    pub witness: Option<JacobiWitness>,
}

impl JacobiCheck {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

/// Evaluates the Jacobiator of each triple at each point and stops at the
/// first nonzero value. With no points the expanded polynomial must vanish.
pub fn jacobi_identity_check(
    sys: &VectorFieldSystem,
    triples: &[[String; 3]],
    points: &[Vec<Rat>],
) -> Result<JacobiCheck, LaxError> {
    if sys.poisson().is_none() {
        return Err(sysdsl::DslError::MissingPoisson(sys.name().to_string()).into());
    }
    for t in triples {
        let [f, g, h] = [resolve(sys, &t[0])?, resolve(sys, &t[1])?, resolve(sys, &t[2])?];
        let jac = jacobiator(sys, &f, &g, &h)?;
        if points.is_empty() && !jac.is_zero() {
            return Ok(JacobiCheck {
                triples: triples.len(),
                points: 0,
                witness: Some(JacobiWitness { triple: t.clone(), point: Vec::new(), value: jac.to_string() }),
            });
        }
        for p in points {
            let v = eval_at(sys, &jac, p)?;
            if !num_traits::Zero::is_zero(&v) {
                return Ok(JacobiCheck {
                    triples: triples.len(),
                    points: points.len(),
                    witness: Some(JacobiWitness {
                        triple: t.clone(),
                        point: p.iter().map(|x| x.to_string()).collect(),
                        value: v.to_string(),
                    }),
                });
            }
        }
    }
    Ok(JacobiCheck { triples: triples.len(), points: points.len(), witness: None })
}

/// Copy of `sys` with the Poisson entries `(i, j)` and `(j, i)` negated.
pub fn flip_poisson_entry(sys: &VectorFieldSystem, i: usize, j: usize) -> Result<VectorFieldSystem, LaxError> {
    let jm = sys.poisson().ok_or_else(|| sysdsl::DslError::MissingPoisson(sys.name().to_string()))?;
    if i >= sys.dim() || j >= sys.dim() || i == j {
        return Err(LaxError::Params(format!("entry ({}, {}) is not off-diagonal", i + 1, j + 1)));
    }
    let mut m = jm.clone();
    m.set(i, j, -jm.get(i, j).clone());
    m.set(j, i, -jm.get(j, i).clone());
    Ok(sys.clone().with_poisson(m)?)
}
