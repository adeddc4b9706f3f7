//! Moments of ξ′ monomials over the unit sphere S^{d−1} ⊂ ℝ^d.
//!
//! ∫ ξ^a dσ = Ω·Π(2a_i−1)!! / Π_{k=1..A}(d+2k−2) for even a (A = Σa_i/2),
//! zero otherwise; Ω is the sphere area, kept as the marker Ω₃ for d = 3.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use num_bigint::BigInt;
use num_rational::BigRational;

use crate::scalar::{ExactScalar, Kind, Marker, Monomial, ScalarPoly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentQuery {
    /// ξ′ index (1-based) → exponent
    pub exponents: BTreeMap<u8, u32>,
    pub dimension: u32,
}

impl MomentQuery {
    pub fn new(exponents: impl IntoIterator<Item = (u8, u32)>) -> Self {
        Self {
            exponents: exponents.into_iter().collect(),
            dimension: 3,
        }
    }
}

fn double_factorial_odd(a: u32) -> BigInt {
    // (2a−1)!!
    (1..=a).fold(BigInt::from(1), |acc, k| acc * BigInt::from(2 * k - 1))
}

/// Rational factor of a moment, relative to the sphere area.
pub fn moment_ratio(q: &MomentQuery) -> BigRational {
    assert!(q.dimension >= 2, "sphere dimension must be at least 2");
    if q.exponents.values().any(|e| e % 2 == 1) {
        return BigRational::default();
    }
    let num = q
        .exponents
        .values()
        .fold(BigInt::from(1), |acc, e| acc * double_factorial_odd(e / 2));
    let half: u32 = q.exponents.values().map(|e| e / 2).sum();
    let den = (1..=half).fold(BigInt::from(1), |acc, k| acc * BigInt::from(q.dimension + 2 * k - 2));
    BigRational::new(num, den)
}

/// Exact moment as a multiple of Ω₃.
pub fn sphere_moment(reg: &std::sync::Arc<crate::scalar::Registry>, q: &MomentQuery) -> ScalarPoly {
    ScalarPoly::marker(reg, Marker::Omega3).scale(&ExactScalar::from_rational(moment_ratio(q)))
}

/// Linear extension of [`sphere_moment`] in the ξ′ variables; everything else
/// passes through.
pub fn integrate_sphere(p: &ScalarPoly) -> ScalarPoly {
    let reg = p.registry();
    let is_xi = |v| matches!(reg.kind(v), Kind::XiPrime(_));
    let omega = Monomial::var(reg.marker(Marker::Omega3));
    let mut out = ScalarPoly::zero(reg);
    for (key, rest) in p.collect(is_xi) {
        let q = MomentQuery::new(key.factors().iter().map(|&(v, e)| match reg.kind(v) {
            Kind::XiPrime(j) => (j, e),
            _ => unreachable!(),
        }));
        let r = moment_ratio(&q);
        if r == BigRational::default() {
            continue;
        }
        out = &out + &rest.mul_monomial(&omega).scale(&ExactScalar::from_rational(r));
    }
    out
}

/// Product rule on S²: Gauss–Legendre in cos θ times the trapezoid in φ.
/// Exact for polynomials of degree < min(2·n_theta, n_phi).
pub fn sphere_nodes(n_theta: usize, n_phi: usize) -> Vec<([f64; 3], f64)> {
    let gl = GaussLegendre::new(NonZeroUsize::new(n_theta).unwrap());
    let mut out = Vec::with_capacity(n_theta * n_phi);
    for &(z, w) in gl.as_node_weight_pairs() {
        let s = (1.0 - z * z).sqrt();
        for k in 0..n_phi {
            let phi = 2.0 * PI * k as f64 / n_phi as f64;
            out.push(([s * phi.cos(), s * phi.sin(), z], w * 2.0 * PI / n_phi as f64));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Registry;
    use proptest::prelude::*;

    fn xi(j: u8) -> ScalarPoly {
        ScalarPoly::of(&Registry::global(), Kind::XiPrime(j))
    }

    fn omega(c: ExactScalar) -> ScalarPoly {
        ScalarPoly::marker(&Registry::global(), Marker::Omega3).scale(&c)
    }

    #[test]
    fn low_moments() {
        let r = Registry::global();
        let m = |e: &[(u8, u32)]| sphere_moment(&r, &MomentQuery::new(e.iter().copied()));
        assert!(m(&[(1, 1)]).is_zero());
        assert!(m(&[(1, 1), (2, 1)]).is_zero());
        assert_eq!(m(&[(1, 2)]), omega(ExactScalar::ratio(1, 3)));
        assert_eq!(m(&[(1, 4)]), omega(ExactScalar::ratio(1, 5)));
        assert_eq!(m(&[(1, 2), (2, 2)]), omega(ExactScalar::ratio(1, 15)));
        assert_eq!(m(&[]), omega(ExactScalar::one()));
    }

    #[test]
    fn integrate_examples() {
        let r = Registry::global();
        let x = |j| ScalarPoly::of(&r, Kind::X(j));
        let y = |j| ScalarPoly::of(&r, Kind::Y(j));
        let mut s = ScalarPoly::zero(&r);
        let mut diag = ScalarPoly::zero(&r);
        for j in 1..=3 {
            for l in 1..=3 {
                s = &s + &(&(&x(j) * &y(l)) * &(&xi(j) * &xi(l)));
            }
            diag = &diag + &(&x(j) * &y(j));
        }
        let om = omega(ExactScalar::one());
        assert_eq!(integrate_sphere(&s), (&diag * &om).scale(&ExactScalar::ratio(1, 3)));
        assert_eq!(integrate_sphere(&(&x(4) * &y(4))), &(&x(4) * &y(4)) * &om);
        let odd = (1..=3).fold(ScalarPoly::zero(&r), |acc, j| &acc + &(&(&x(j) * &y(4)) * &xi(j)));
        assert!(integrate_sphere(&odd).is_zero());
    }

    #[test]
    fn rank_two_isotropy() {
        for j in 1..=3 {
            for l in 1..=3 {
                let a = integrate_sphere(&(&xi(j) * &xi(l)));
                let expect = if j == l { omega(ExactScalar::ratio(1, 3)) } else { ScalarPoly::zero(&Registry::global()) };
                assert_eq!(a, expect);
            }
        }
    }

    #[test]
    fn numeric_moments_through_degree_six() {
        let nodes = sphere_nodes(8, 16);
        for a in 0..=6u32 {
            for b in 0..=6 - a {
                for c in 0..=6 - a - b {
                    let num: f64 = nodes
                        .iter()
                        .map(|(p, w)| w * p[0].powi(a as i32) * p[1].powi(b as i32) * p[2].powi(c as i32))
                        .sum();
                    let exact = crate::scalar::ExactScalar::from_rational(moment_ratio(&MomentQuery::new([(1, a), (2, b), (3, c)])))
                        .to_complex64()
                        .re
                        * 4.0
                        * PI;
                    assert!((num - exact).abs() < 1e-6, "({a},{b},{c}): {num} vs {exact}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn unit_sphere_constraint(p in crate::scalar::poly::tests::arb_poly()) {
            let norm = (1..=3).fold(ScalarPoly::zero(&Registry::global()), |acc, j| &acc + &xi(j).pow(2));
            prop_assert_eq!(integrate_sphere(&(&norm * &p)), integrate_sphere(&p));
        }
    }
}
