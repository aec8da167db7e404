use serde::Serialize;

use crate::error::LaxError;

/// Dimension bookkeeping for the free n-dimensional rigid body.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RigidBodyDims {
    pub n: u32,
    pub dim_orbit: u32,
    pub genus_c: u32,
    pub genus_c0: u32,
    pub dim_prym: u32,
}

/// Generic coadjoint orbit of so(n), genus of the spectral curve, of its
/// quotient by `(z, h) -> (-z, -h)`, and of the Prym variety.
pub fn rigid_body_dims(n: u32) -> Result<RigidBodyDims, LaxError> {
    if n < 3 {
        return Err(LaxError::Params(format!("rigid body needs n >= 3, got {n}")));
    }
    let dim_orbit = n * (n - 1) / 2 - n / 2;
    let genus_c = (n - 1) * (n - 2) / 2;
    let (genus_c0, dim_prym) = if n.is_multiple_of(2) { ((n - 2) * (n - 2) / 4, n * (n - 2) / 4) } else { ((n - 1) * (n - 3) / 4, (n - 1) * (n - 1) / 4) };
    // Riemann-Hurwitz: the quotient loses half the orbit dimension.
    assert_eq!(2 * (genus_c - genus_c0), dim_orbit, "n = {n}");
    assert_eq!(genus_c - genus_c0, dim_prym, "n = {n}");
    Ok(RigidBodyDims { n, dim_orbit, genus_c, genus_c0, dim_prym })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        let d = |n, o, g, g0, p| RigidBodyDims { n, dim_orbit: o, genus_c: g, genus_c0: g0, dim_prym: p };
        assert_eq!(rigid_body_dims(3).unwrap(), d(3, 2, 1, 0, 1));
        assert_eq!(rigid_body_dims(4).unwrap(), d(4, 4, 3, 1, 2));
        assert_eq!(rigid_body_dims(5).unwrap(), d(5, 8, 6, 2, 4));
        assert!(rigid_body_dims(2).is_err());
    }
}
