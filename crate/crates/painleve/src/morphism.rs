use std::collections::BTreeMap;

use exactalg::MultiPoly;
use sysdsl::VectorFieldSystem;

use crate::error::PainleveError;
use crate::propagate::LaurentFamily;

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentCheck {
    pub target: String,
    /// `d/dt phi_k - g_k(phi)`; zero when the chain rule holds.
    pub residual: MultiPoly,
    /// Whether `phi_k` along the family has only integral exponents.
    pub integral: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MorphismReport {
    pub components: Vec<ComponentCheck>,
}

impl MorphismReport {
    pub fn chain_rule_holds(&self) -> bool {
        self.components.iter().all(|c| c.residual.is_zero())
    }

    pub fn restores_integrality(&self) -> Option<bool> {
        self.components.iter().map(|c| c.integral).collect::<Option<Vec<bool>>>().map(|v| v.iter().all(|b| *b))
    }

    pub fn passes(&self) -> bool {
        self.chain_rule_holds() && self.restores_integrality() != Some(false)
    }

    /// First component whose chain-rule identity fails.
    pub fn first_failure(&self) -> Option<&ComponentCheck> {
        self.components.iter().find(|c| !c.residual.is_zero() || c.integral == Some(false))
    }
}

/// Checks that `phi` carries the flow of `src` onto the flow of `dst` as a
/// polynomial identity, and optionally that it turns a Puiseux family of
/// `src` into Laurent series in t.
pub fn restoring_morphism_check(
    src: &VectorFieldSystem,
    dst: &VectorFieldSystem,
    phi: &[MultiPoly],
    family: Option<&LaurentFamily>,
) -> Result<MorphismReport, PainleveError> {
    if phi.len() != dst.dim() {
        return Err(PainleveError::MorphismArity { got: phi.len(), want: dst.dim() });
    }
    let subs: BTreeMap<String, MultiPoly> = dst.vars().iter().cloned().zip(phi.iter().cloned()).collect();
    let components = dst
        .vars()
        .iter()
        .zip(phi)
        .zip(dst.equations())
        .map(|((v, p), g)| ComponentCheck {
            target: v.clone(),
            residual: (&src.time_derivative(p) - &g.substitute(&subs)).compact(),
            integral: family.map(|f| f.compose(p).has_integral_exponents()),
        })
        .collect();
    Ok(MorphismReport { components })
}
