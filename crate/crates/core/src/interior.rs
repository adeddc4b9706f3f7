//! The Einstein functional Wres(∇̃_V∇̃_W D_F^{−2m}) on a closed manifold,
//! assembled from the general Laplace-type formula
//!
//! υ_{n−1}/6·dim·∫G(V,W) + υ_{n−1}/2·∫F(V,W) + ½∫(Tr E)g(V,W),
//!
//! with υ_{n−1} = 2π^m/Γ(m), dim = 2^{p/2+q} the fiber dimension, Tr E and
//! F(V,W) computed from the sub-Dirac data.

use std::sync::Arc;

use crate::clifford::Signature;
use crate::error::Result;
use crate::frame::N;
use crate::paper_data::interior::{check_parity, gamma_int, interior_coefficients};
use crate::paper_data::traces::{trace_e, verify_f_vanishing};
use crate::scalar::{ExactScalar, Marker, Registry, ScalarPoly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InteriorResult {
    /// multiplier of ∫G(V,W), a rational multiple of π^m
    pub einstein: ScalarPoly,
    /// multiplier of ∫F(V,W) times F itself
    pub f_term: ScalarPoly,
    /// multiplier of ∫s·g(V,W)
    pub scalar: ExactScalar,
}

/// Both routes, for the dual-route check.
#[derive(Clone, Debug)]
pub struct InteriorRoutes {
    pub assembled: InteriorResult,
    pub closed_form: InteriorResult,
}

impl InteriorRoutes {
    pub fn agree(&self) -> bool {
        self.assembled == self.closed_form
    }
}

fn assemble(p: u8, q: u8, reg: &Arc<Registry>) -> Result<InteriorResult> {
    let m = check_parity(p, q)?;
    let sig = Signature::new(p, q)?;
    let dim = ExactScalar::from_int(sig.dim()? as i64);
    let upsilon = ScalarPoly::marker(reg, Marker::Pi)
        .pow(m)
        .scale(&(&ExactScalar::from_int(2) / &gamma_int(m)));
    let einstein = upsilon.scale(&(&dim / &ExactScalar::from_int(6)));
    // F(V,W) is built from the n = 4 boundary frame; other dimensions only
    // enter through Tr E.
    let f = if p as u32 + q as u32 == N as u32 {
        verify_f_vanishing(p, q, reg)?.f_term
    } else {
        ScalarPoly::zero(reg)
    };
    let f_term = &upsilon.scale(&ExactScalar::ratio(1, 2)) * &f;
    let tr_e = trace_e(p, q, reg)?;
    let s = reg.marker(Marker::ScalarCurvature);
    let scalar = &tr_e.coefficient(&crate::scalar::Monomial::var(s)) * &ExactScalar::ratio(1, 2);
    Ok(InteriorResult { einstein, f_term, scalar })
}

pub fn einstein_functional_routes(p: u8, q: u8, reg: &Arc<Registry>) -> Result<InteriorRoutes> {
    let assembled = assemble(p, q, reg)?;
    let (einstein, scalar) = interior_coefficients(p, q, reg)?;
    Ok(InteriorRoutes {
        assembled,
        closed_form: InteriorResult {
            einstein,
            f_term: ScalarPoly::zero(reg),
            scalar,
        },
    })
}

/// The assembled constants (Einstein, F, scalar).
pub fn einstein_functional(p: u8, q: u8, reg: &Arc<Registry>) -> Result<InteriorResult> {
    assemble(p, q, reg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn two_two() {
        let reg = Registry::global();
        let r = einstein_functional_routes(2, 2, &reg).unwrap();
        assert!(r.agree());
        let pi2 = ScalarPoly::marker(&reg, Marker::Pi).pow(2);
        assert_eq!(r.assembled.einstein, pi2.scale(&ExactScalar::ratio(8, 3)));
        assert!(r.assembled.f_term.is_zero());
        assert_eq!(r.assembled.scalar, ExactScalar::one());
    }

    #[test]
    fn other_signatures() {
        let reg = Registry::global();
        let r = einstein_functional_routes(2, 4, &reg).unwrap();
        assert!(r.agree());
        let pi3 = ScalarPoly::marker(&reg, Marker::Pi).pow(3);
        assert_eq!(r.assembled.einstein, pi3.scale(&ExactScalar::ratio(16, 3)));
        assert_eq!(r.assembled.scalar, ExactScalar::from_int(4));
        assert!(einstein_functional_routes(4, 0, &reg).unwrap().agree());
        assert!(einstein_functional_routes(4, 2, &reg).unwrap().agree());
        assert!(matches!(einstein_functional(3, 1, &reg), Err(Error::InvalidSignature { .. })));
    }
}
