//! Closed-form interior constants of the Einstein functional.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{ExactScalar, Marker, Registry, ScalarPoly};

pub(crate) fn check_parity(p: u8, q: u8) -> Result<u32> {
    if p % 2 == 1 {
        return Err(Error::InvalidSignature { p, q, reason: "p must be even" });
    }
    let n = p as u32 + q as u32;
    if n == 0 || n % 2 == 1 {
        return Err(Error::InvalidSignature { p, q, reason: "p + q must be even and positive" });
    }
    Ok(n / 2)
}

/// Γ(m) = (m−1)! for a positive integer m.
pub(crate) fn gamma_int(m: u32) -> ExactScalar {
    ExactScalar::from_int((1..m as i64).product())
}

/// (2^{p/2+q+1}π^{n/2}/(6Γ(n/2)), 2^{p/2+q−3}): multipliers of ∫G(V,W) and
/// ∫s·g(V,W).
pub fn interior_coefficients(p: u8, q: u8, reg: &Arc<Registry>) -> Result<(ScalarPoly, ExactScalar)> {
    let m = check_parity(p, q)?;
    let e = p as i32 / 2 + q as i32;
    let two = ExactScalar::from_int(2);
    let c = &two.pow(e + 1) / &(&ExactScalar::from_int(6) * &gamma_int(m));
    let einstein = ScalarPoly::marker(reg, Marker::Pi).pow(m).scale(&c);
    Ok((einstein, two.pow(e - 3)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pi(reg: &Arc<Registry>, k: u32, c: ExactScalar) -> ScalarPoly {
        ScalarPoly::marker(reg, Marker::Pi).pow(k).scale(&c)
    }

    #[test]
    fn closed_forms() {
        let r = Registry::global();
        assert_eq!(interior_coefficients(2, 2, &r).unwrap(), (pi(&r, 2, ExactScalar::ratio(8, 3)), ExactScalar::one()));
        assert_eq!(interior_coefficients(4, 0, &r).unwrap(), (pi(&r, 2, ExactScalar::ratio(4, 3)), ExactScalar::ratio(1, 2)));
        assert_eq!(interior_coefficients(2, 4, &r).unwrap(), (pi(&r, 3, ExactScalar::ratio(16, 3)), ExactScalar::from_int(4)));
        assert!(matches!(interior_coefficients(1, 3, &r), Err(Error::InvalidSignature { .. })));
        assert!(matches!(interior_coefficients(2, 1, &r), Err(Error::InvalidSignature { .. })));
    }
}
