//! The orthonormal frame at a boundary point x₀ of a 4-manifold and the
//! Clifford-valued building blocks the symbol jets are made of.
//!
//! Frame: e_a = f_a for a ≤ p, e_{p+s} = h_s; e₄ = ∂_{xₙ} is the inward
//! normal. Connection scalars use Γ(a;b,c) = ⟨∇_{e_a} e_b, e_c⟩, so the
//! spin-connection forms ω_{b,c}(e_a) are −Γ(a;b,c).

use std::sync::Arc;

use crate::clifford::{CliffordElement, Generator, Signature};
use crate::error::{Error, Result};
use crate::scalar::{ExactScalar, Family, Kind, Marker, Monomial, Registry, ScalarPoly};
use crate::xi::XiRational;

pub const N: u8 = 4;

/// Which connection scalars are allowed to be nonzero at x₀.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gauge {
    /// Every Γ(a;b,c) is an independent unknown.
    Generic,
    /// Boundary normal coordinates with the frame parallel along the normal
    /// geodesic: Γ vanishes when all indices are tangential or a = n, so
    /// only the second fundamental form Γ(a;b,n), a,b < n, survives.
    BoundaryNormal,
}

#[derive(Clone)]
pub struct Frame {
    sig: Signature,
    reg: Arc<Registry>,
    gauge: Gauge,
}

impl Frame {
    pub fn new(sig: Signature, reg: &Arc<Registry>, gauge: Gauge) -> Result<Self> {
        if sig.p() as u32 + sig.q() as u32 != N as u32 {
            return Err(Error::InvalidSignature {
                p: sig.p(),
                q: sig.q(),
                reason: "boundary frame needs p + q = 4",
            });
        }
        sig.log2_dim()?;
        Ok(Self {
            sig,
            reg: reg.clone(),
            gauge,
        })
    }

    pub fn boundary(reg: &Arc<Registry>) -> Self {
        Self::new(Signature::new(2, 2).unwrap(), reg, Gauge::BoundaryNormal).unwrap()
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn registry(&self) -> &Arc<Registry> {
        &self.reg
    }

    pub fn generator_of(&self, a: u8) -> Generator {
        assert!((1..=N).contains(&a), "frame index {a}");
        if a <= self.sig.p() {
            Generator::Leaf(a)
        } else {
            Generator::Normal(a - self.sig.p())
        }
    }

    /// c(e_a)
    pub fn c(&self, a: u8) -> CliffordElement {
        CliffordElement::generator(self.sig, &self.reg, self.generator_of(a))
    }

    /// ĉ(h_s)
    pub fn hat(&self, s: u8) -> CliffordElement {
        CliffordElement::generator(self.sig, &self.reg, Generator::Hat(s))
    }

    pub fn one(&self) -> CliffordElement {
        CliffordElement::identity(self.sig, &self.reg)
    }

    pub fn zero(&self) -> CliffordElement {
        CliffordElement::zero(self.sig, &self.reg)
    }

    pub fn scalar(&self, p: ScalarPoly) -> CliffordElement {
        CliffordElement::scalar(self.sig, p)
    }

    pub fn var(&self, k: Kind) -> ScalarPoly {
        ScalarPoly::of(&self.reg, k)
    }

    pub fn constant(&self, c: ExactScalar) -> ScalarPoly {
        ScalarPoly::constant(&self.reg, c)
    }

    pub fn xi(&self, j: u8) -> ScalarPoly {
        self.var(Kind::XiPrime(j))
    }

    pub fn x(&self, a: u8) -> ScalarPoly {
        self.var(Kind::X(a))
    }

    pub fn y(&self, a: u8) -> ScalarPoly {
        self.var(Kind::Y(a))
    }

    pub fn hp(&self) -> ScalarPoly {
        self.var(Kind::HPrime)
    }

    pub fn marker(&self, m: Marker) -> ScalarPoly {
        ScalarPoly::marker(&self.reg, m)
    }

    /// Σ_j X_j ∂_{x_j} Y_l
    pub fn xdy(&self, l: u8) -> ScalarPoly {
        ScalarPoly::family(&self.reg, Family::XdY, &[l])
    }

    /// Γ(a;b,c), zero where the gauge forces it.
    pub fn gamma(&self, a: u8, b: u8, c: u8) -> ScalarPoly {
        if self.gauge == Gauge::BoundaryNormal && (a == N || (a < N && b < N && c < N)) {
            return ScalarPoly::zero(&self.reg);
        }
        ScalarPoly::family(&self.reg, Family::Gamma, &[a, b, c])
    }

    fn is_leaf(&self, a: u8) -> bool {
        a <= self.sig.p()
    }

    fn leaves(&self) -> impl Iterator<Item = u8> {
        1..=self.sig.p()
    }

    fn normals(&self) -> impl Iterator<Item = u8> + '_ {
        self.sig.p() + 1..=N
    }

    fn hat_of(&self, a: u8) -> CliffordElement {
        debug_assert!(!self.is_leaf(a));
        self.hat(a - self.sig.p())
    }

    /// c(ξ′) = Σ_{j<n} ξ_j c(e_j)
    pub fn c_xi_prime(&self) -> CliffordElement {
        (1..N).fold(self.zero(), |acc, j| &acc + &self.c(j).scale(&self.xi(j)))
    }

    /// c(ξ) = c(ξ′) + ξₙ c(e₄)
    pub fn c_xi(&self) -> XiRational {
        &XiRational::constant(self.c_xi_prime()) + &XiRational::term(self.c(N), 1, 0, 0)
    }

    /// Σ_a v_a ξ_a with ξ₄ = ξₙ.
    pub fn pair_xi(&self, v: &dyn Fn(u8) -> ScalarPoly) -> XiRational {
        let tangential = (1..N).fold(ScalarPoly::zero(&self.reg), |acc, j| &acc + &(&v(j) * &self.xi(j)));
        &XiRational::constant(self.scalar(tangential)) + &XiRational::term(self.scalar(v(N)), 1, 0, 0)
    }

    /// Σ_{a,b ≤ n} X_a Y_b ξ_a ξ_b as a function of ξₙ.
    pub fn s_full(&self) -> XiRational {
        let x = self.pair_xi(&|a| self.x(a));
        let y = self.pair_xi(&|a| self.y(a));
        &x * &y
    }

    /// 1/(1+ξₙ²)^k
    pub fn inv_norm(&self, k: u32) -> XiRational {
        XiRational::over_norm(self.one(), 0, k)
    }

    /// ξₙ^m/(1+ξₙ²)^k times a Clifford constant
    pub fn rational(&self, c: CliffordElement, m: u32, k: u32) -> XiRational {
        XiRational::over_norm(c, m, k)
    }

    fn conn(&self, v: &dyn Fn(u8) -> ScalarPoly, b: u8, c: u8) -> ScalarPoly {
        (1..=N).fold(ScalarPoly::zero(&self.reg), |acc, a| &acc + &(&v(a) * &self.gamma(a, b, c)))
    }

    /// M(V) = ¼ Σ_{j,l ≤ p} ⟨∇_V f_j, f_l⟩ c(f_j)c(f_l)
    pub fn block_m(&self, v: &dyn Fn(u8) -> ScalarPoly) -> CliffordElement {
        let mut acc = self.zero();
        for j in self.leaves() {
            for l in self.leaves() {
                let w = self.conn(v, j, l);
                if !w.is_zero() {
                    acc = &acc + &(&self.c(j) * &self.c(l)).scale(&w);
                }
            }
        }
        acc.scale_exact(&ExactScalar::ratio(1, 4))
    }

    /// N(V) = ¼ Σ_{s,t} ⟨∇_V h_s, h_t⟩ [c(h_s)c(h_t) − ĉ(h_s)ĉ(h_t)]
    pub fn block_n(&self, v: &dyn Fn(u8) -> ScalarPoly) -> CliffordElement {
        let mut acc = self.zero();
        for s in self.normals() {
            for t in self.normals() {
                let w = self.conn(v, s, t);
                if !w.is_zero() {
                    let e = &(&self.c(s) * &self.c(t)) - &(&self.hat_of(s) * &self.hat_of(t));
                    acc = &acc + &e.scale(&w);
                }
            }
        }
        acc.scale_exact(&ExactScalar::ratio(1, 4))
    }

    /// A(V) = ½ Σ_{j,s} ⟨S(V) f_j, h_s⟩ c(f_j)c(h_s), with the shape operator
    /// entries read as Γ(V; j, s).
    pub fn block_a(&self, v: &dyn Fn(u8) -> ScalarPoly) -> CliffordElement {
        let mut acc = self.zero();
        for j in self.leaves() {
            for s in self.normals() {
                let w = self.conn(v, j, s);
                if !w.is_zero() {
                    acc = &acc + &(&self.c(j) * &self.c(s)).scale(&w);
                }
            }
        }
        acc.scale_exact(&ExactScalar::ratio(1, 2))
    }

    /// M + N + A along V.
    pub fn connection_form(&self, v: &dyn Fn(u8) -> ScalarPoly) -> CliffordElement {
        &(&self.block_m(v) + &self.block_n(v)) + &self.block_a(v)
    }

    /// The basis vector e_k as a coefficient function.
    pub fn unit(&self, k: u8) -> impl Fn(u8) -> ScalarPoly + '_ {
        move |a| {
            if a == k {
                ScalarPoly::one(&self.reg)
            } else {
                ScalarPoly::zero(&self.reg)
            }
        }
    }

    /// Zero-order part σ₀(D_F) of the sub-Dirac symbol.
    pub fn sigma0_dirac(&self) -> CliffordElement {
        let mut acc = self.zero();
        let mut add = |coef: ScalarPoly, e: CliffordElement, w: ExactScalar| {
            if !coef.is_zero() {
                acc = &acc + &e.scale(&coef).scale_exact(&w);
            }
        };
        let quarter = ExactScalar::ratio(1, 4);
        let half = ExactScalar::ratio(1, 2);
        for i in self.leaves() {
            for k in self.leaves() {
                for l in self.leaves() {
                    add(self.gamma(i, k, l), &(&self.c(i) * &self.c(k)) * &self.c(l), quarter.clone());
                }
            }
        }
        for s in self.normals() {
            for k in self.leaves() {
                for l in self.leaves() {
                    add(self.gamma(s, k, l), &(&self.c(k) * &self.c(l)) * &self.c(s), quarter.clone());
                }
            }
        }
        for r in self.normals() {
            for t in self.normals() {
                let bracket = &(&self.hat_of(r) * &self.hat_of(t)) - &(&self.c(r) * &self.c(t));
                for i in self.leaves() {
                    add(self.gamma(i, r, t), &self.c(i) * &bracket, -&quarter);
                }
                for s in self.normals() {
                    add(self.gamma(s, r, t), &self.c(s) * &bracket, -&quarter);
                }
            }
        }
        for s in self.normals() {
            for i in self.leaves() {
                for j in self.leaves() {
                    add(self.gamma(i, j, s), &(&self.c(i) * &self.c(j)) * &self.c(s), half.clone());
                }
                for t in self.normals() {
                    add(self.gamma(s, t, i), &(&self.c(s) * &self.c(t)) * &self.c(i), half.clone());
                }
            }
        }
        acc
    }
}

/// Σ_{j<n} Γ(j;j,n) = −div_{∂M}(∂xₙ): eliminates Γ(1;1,n) in favour of the
/// divergence atom.
pub fn rewrite_div(p: &ScalarPoly) -> ScalarPoly {
    let reg = p.registry();
    let Some(v) = reg.lookup(&Kind::family(Family::Gamma, &[1, 1, N]).unwrap().1) else {
        return p.clone();
    };
    let g = |a: u8| ScalarPoly::family(reg, Family::Gamma, &[a, a, N]);
    let by = &(&-&ScalarPoly::marker(reg, Marker::DivNormal) - &g(2)) - &g(3);
    p.substitute_poly(v, &by).expect("Γ(1;1,4) is not a marker")
}

/// Canonical representative on |ξ′| = 1: ξ₃² ↦ 1 − ξ₁² − ξ₂².
pub fn reduce_unit_sphere(p: &ScalarPoly) -> ScalarPoly {
    let reg = p.registry();
    let Some(x3) = reg.lookup(&Kind::XiPrime(3)) else {
        return p.clone();
    };
    if p.degree_in(x3) < 2 {
        return p.clone();
    }
    let rest_sq = &(&ScalarPoly::one(reg) - &ScalarPoly::of(reg, Kind::XiPrime(1)).pow(2))
        - &ScalarPoly::of(reg, Kind::XiPrime(2)).pow(2);
    let mut out = ScalarPoly::zero(reg);
    for (m, c) in p.terms() {
        let e = m.degree_in(x3);
        let (_, rest) = m.partition(|v| v == x3);
        let t = ScalarPoly::term(reg, c.clone(), rest.mul(&Monomial::power(x3, e % 2)));
        out = &out + &(&t * &rest_sq.pow(e / 2));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frame() -> Frame {
        Frame::boundary(&Registry::global())
    }

    #[test]
    fn c_xi_squares_to_minus_norm_on_the_sphere() {
        let f = frame();
        let sq = &f.c_xi() * &f.c_xi();
        let reduced = sq.map_coefficients(|c| c.map_coefficients(reduce_unit_sphere));
        let expect = &XiRational::term(-f.one(), 0, 0, 0) + &XiRational::term(-f.one(), 2, 0, 0);
        assert_eq!(reduced, expect);
    }

    #[test]
    fn sigma0_against_normal_generator() {
        let f = frame();
        let s0 = f.sigma0_dirac();
        let t = CliffordElement::trace_product(&s0, &f.c(N)).unwrap();
        let expect = (1..N).fold(ScalarPoly::zero(f.registry()), |acc, i| &acc + &f.gamma(i, i, N));
        assert_eq!(t, expect.scale(&ExactScalar::from_int(4)));
        assert_eq!(rewrite_div(&t), f.marker(Marker::DivNormal).scale(&ExactScalar::from_int(-4)));
        let t = CliffordElement::trace_product(&s0, &f.c_xi_prime()).unwrap();
        assert!(t.is_zero());
    }

    #[test]
    fn generic_gauge_keeps_tangential_trace() {
        let reg = Registry::global();
        let f = Frame::new(Signature::new(2, 2).unwrap(), &reg, Gauge::Generic).unwrap();
        let t = CliffordElement::trace_product(&f.sigma0_dirac(), &f.c(1)).unwrap();
        let expect = (1..=N).fold(ScalarPoly::zero(&reg), |acc, i| &acc + &f.gamma(i, i, 1));
        assert_eq!(t, expect.scale(&ExactScalar::from_int(4)));
    }

    #[test]
    fn blocks_are_traceless() {
        let f = frame();
        let x = |a| f.x(a);
        for b in [f.block_m(&x), f.block_n(&x), f.block_a(&x)] {
            assert!(b.trace().unwrap().is_zero());
        }
    }

    #[test]
    fn unit_sphere_reduction_keeps_sphere_integral() {
        let f = frame();
        let p = &(&f.xi(3).pow(4) * &f.x(1)) + &(&f.xi(3).pow(3) * &f.xi(1));
        let r = reduce_unit_sphere(&p);
        assert!(r.degree_in(f.registry().lookup(&Kind::XiPrime(3)).unwrap()) <= 1);
        assert_eq!(crate::sphere::integrate_sphere(&r), crate::sphere::integrate_sphere(&p));
    }
}
