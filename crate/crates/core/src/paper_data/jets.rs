//! Symbol jets of the two operator pairs at a boundary point x₀, on
//! |ξ′| = 1, in boundary normal coordinates.
//!
//! Conventions used throughout:
//! - ∂ₓₙ|ξ|² = h′(0) and ∂ₓₙc(ξ′) = ½h′(0)c(ξ′); tangential derivatives vanish.
//! - X, Y are constant along the normal; X(Y_l) enters only through the
//!   XdY atoms.
//! - D_x = −i∂_x.

use crate::boundary::{BoundarySymbol, JetKey, SymbolJet};
use crate::clifford::CliffordElement;
use crate::frame::{Frame, N};
use crate::scalar::{ExactScalar, ScalarPoly};
use crate::xi::XiRational;

fn r(n: i64, d: i64) -> ExactScalar {
    ExactScalar::ratio(n, d)
}

fn i_times(n: i64, d: i64) -> ExactScalar {
    ExactScalar::gaussian(0, n, d)
}

/// Helpers over one frame.
pub struct Jets<'a> {
    f: &'a Frame,
}

impl<'a> Jets<'a> {
    pub fn new(f: &'a Frame) -> Self {
        Self { f }
    }

    fn k(&self, c: CliffordElement) -> XiRational {
        XiRational::constant(c)
    }

    fn hp(&self) -> ScalarPoly {
        self.f.hp()
    }

    /// ξₙ^m/(1+ξₙ²)^k
    fn w(&self, m: u32, k: u32) -> XiRational {
        self.f.rational(self.f.one(), m, k)
    }

    /// −Σ_{a,b} X_aY_b ξ_aξ_b
    pub fn sigma2_nabla(&self) -> XiRational {
        -&self.f.s_full()
    }

    /// ∂_{ξₙ}σ₂(∇∇) = −(Xₙ(Y·ξ) + Yₙ(X·ξ))
    fn d_xin_sigma2(&self) -> XiRational {
        let x = self.f.pair_xi(&|a| self.f.x(a));
        let y = self.f.pair_xi(&|a| self.f.y(a));
        -&(&y.scale(&self.f.x(N)) + &x.scale(&self.f.y(N)))
    }

    /// Σ_a ξ_a (M+N+A)(e_a), with ξ₄ = ξₙ
    pub fn connection_along_xi(&self) -> XiRational {
        let mut acc = XiRational::zero(self.f.signature(), self.f.registry());
        for a in 1..=N {
            let c = self.f.connection_form(&self.f.unit(a));
            let t = if a < N {
                XiRational::constant(c.scale(&self.f.xi(a)))
            } else {
                XiRational::term(c, 1, 0, 0)
            };
            acc = &acc + &t;
        }
        acc
    }

    /// σ₁(∇_X∇_Y) = iΣX(Y_l)ξ_l + i(M+N+A)(Y)(X·ξ) + i(M+N+A)(X)(Y·ξ)
    pub fn sigma1_nabla(&self) -> XiRational {
        let f = self.f;
        let xdy = f.pair_xi(&|l| f.xdy(l));
        let cy = f.connection_form(&|a| f.y(a));
        let cx = f.connection_form(&|a| f.x(a));
        let x = f.pair_xi(&|a| f.x(a));
        let y = f.pair_xi(&|a| f.y(a));
        let sum = &(&xdy + &(&self.k(cy) * &x)) + &(&self.k(cx) * &y);
        sum.scale_exact(&ExactScalar::i())
    }

    /// ½h′(0)c(ξ′) = ∂ₓₙc(ξ)
    fn dxn_c_xi(&self) -> XiRational {
        self.k(self.f.c_xi_prime().scale(&self.hp()).scale_exact(&r(1, 2)))
    }

    // ---- D_F^{-2} ----

    /// |ξ|^{−2}
    pub fn inv_laplace_m2(&self) -> XiRational {
        self.w(0, 1)
    }

    /// ∂ₓₙ|ξ|^{−2} = −h′/(1+ξₙ²)²
    pub fn inv_laplace_m2_dxn(&self) -> XiRational {
        self.w(0, 2).scale(&-&self.hp())
    }

    /// σ₋₃(D_F^{−2}) = −2ih′ξₙ/(1+ξₙ²)³ − i/(1+ξₙ²)²·(3/2 h′ξₙ − 2Σξ_k(M+N+A)(e_k))
    pub fn inv_laplace_m3(&self) -> XiRational {
        let first = self.w(1, 3).scale(&self.hp()).scale_exact(&i_times(-2, 1));
        let inner = &XiRational::term(self.f.scalar(self.hp()).scale_exact(&r(3, 2)), 1, 0, 0)
            - &self.connection_along_xi().scale_exact(&r(2, 1));
        let second = (&self.w(0, 2) * &inner).scale_exact(&-ExactScalar::i());
        &first + &second
    }

    // ---- ∇_X∇_Y D_F^{-2} ----

    pub fn nabla_laplace_0(&self) -> XiRational {
        &self.sigma2_nabla() * &self.w(0, 1)
    }

    /// ∂ₓₙσ₀ = Σ X_aY_b ξ_aξ_b h′/(1+ξₙ²)²
    pub fn nabla_laplace_0_dxn(&self) -> XiRational {
        (&self.f.s_full() * &self.w(0, 2)).scale(&self.hp())
    }

    /// σ₂σ₋₃(D^{−2}) + σ₁σ₋₂(D^{−2}) + ∂_{ξₙ}σ₂·D_{xₙ}σ₋₂(D^{−2})
    pub fn nabla_laplace_m1(&self) -> XiRational {
        let a = &self.sigma2_nabla() * &self.inv_laplace_m3();
        let b = &self.sigma1_nabla() * &self.inv_laplace_m2();
        let c = (&self.d_xin_sigma2() * &self.inv_laplace_m2_dxn()).scale_exact(&-ExactScalar::i());
        &(&a + &b) + &c
    }

    // ---- D_F^{-1} ----

    /// σ₋₁(D_F^{−1}) = ic(ξ)/|ξ|²
    pub fn inv_dirac_m1(&self) -> XiRational {
        (&self.f.c_xi() * &self.w(0, 1)).scale_exact(&ExactScalar::i())
    }

    /// ∂ₓₙ[ic(ξ)/|ξ|²]
    fn inv_dirac_m1_dxn(&self) -> XiRational {
        let a = &self.dxn_c_xi() * &self.w(0, 1);
        let b = (&self.f.c_xi() * &self.w(0, 2)).scale(&self.hp());
        (&a - &b).scale_exact(&ExactScalar::i())
    }

    /// c(ξ)σ₀c(ξ)/|ξ|⁴ + c(ξ)c(dxₙ)[∂ₓₙc(ξ)|ξ|² − c(ξ)h′]/|ξ|⁶
    pub fn inv_dirac_m2(&self) -> XiRational {
        let cx = self.f.c_xi();
        let s0 = self.k(self.f.sigma0_dirac());
        let a = &(&(&cx * &s0) * &cx) * &self.w(0, 2);
        let norm = &self.w(0, 0) + &self.w(2, 0);
        let bracket = &(&self.dxn_c_xi() * &norm) - &cx.scale(&self.hp());
        let b = &(&(&cx * &self.k(self.f.c(N))) * &bracket) * &self.w(0, 3);
        &a + &b
    }

    // ---- ∇_X∇_Y D_F^{-1} ----

    /// −iΣX_aY_bξ_aξ_b c(ξ)/|ξ|²
    pub fn nabla_dirac_1(&self) -> XiRational {
        &self.sigma2_nabla() * &self.inv_dirac_m1()
    }

    pub fn nabla_dirac_1_dxn(&self) -> XiRational {
        &self.sigma2_nabla() * &self.inv_dirac_m1_dxn()
    }

    /// A + B + C: σ₂σ₋₂(D^{−1}) + σ₁σ₋₁(D^{−1}) + ∂_{ξₙ}σ₂·D_{xₙ}σ₋₁(D^{−1})
    pub fn nabla_dirac_0(&self) -> XiRational {
        let a = &self.sigma2_nabla() * &self.inv_dirac_m2();
        let b = &self.sigma1_nabla() * &self.inv_dirac_m1();
        let c = (&self.d_xin_sigma2() * &self.inv_dirac_m1_dxn()).scale_exact(&-ExactScalar::i());
        &(&a + &b) + &c
    }

    // ---- D_F^{-3} ----

    /// p₃ = σ₃(D_F³) = i c(ξ)|ξ|²
    pub fn dirac_cubed_3(&self) -> XiRational {
        let norm = &self.w(0, 0) + &self.w(2, 0);
        (&self.f.c_xi() * &norm).scale_exact(&ExactScalar::i())
    }

    /// σ₂(D_F³) = c(dxₙ)h′ + 2c(ξ)[2Σξ_k(M+N+A)(e_k) − 3/2 h′ξₙ] + Σ_l c(e_l)(M+N)(e_l)|ξ|²
    pub fn dirac_cubed_2(&self) -> XiRational {
        let f = self.f;
        let first = self.k(f.c(N).scale(&self.hp()));
        let inner = &self.connection_along_xi().scale_exact(&r(2, 1))
            - &XiRational::term(f.scalar(self.hp()).scale_exact(&r(3, 2)), 1, 0, 0);
        let second = (&f.c_xi() * &inner).scale_exact(&r(2, 1));
        let mut mn = f.zero();
        for l in 1..=N {
            let u = f.unit(l);
            mn = &mn + &(&f.c(l) * &(&f.block_m(&u) + &f.block_n(&u)));
        }
        let norm = &self.w(0, 0) + &self.w(2, 0);
        let third = &self.k(mn) * &norm;
        &(&first + &second) + &third
    }

    /// σ₋₃(D_F^{−3}) = ic(ξ)/|ξ|⁴
    pub fn inv_dirac_cubed_m3(&self) -> XiRational {
        (&self.f.c_xi() * &self.w(0, 2)).scale_exact(&ExactScalar::i())
    }

    /// ∂ₓₙ[ic(ξ)/|ξ|⁴] = i[½h′c(ξ′)/|ξ|⁴ − 2h′c(ξ)/|ξ|⁶]
    pub fn inv_dirac_cubed_m3_dxn(&self) -> XiRational {
        let a = &self.dxn_c_xi() * &self.w(0, 2);
        let b = (&self.f.c_xi() * &self.w(0, 3)).scale(&self.hp()).scale_exact(&r(2, 1));
        (&a - &b).scale_exact(&ExactScalar::i())
    }

    /// c(ξ)σ₂(D³)c(ξ)/|ξ|⁸ + ic(ξ)/|ξ|⁸·(|ξ|⁴c(dxₙ)∂ₓₙc(ξ′) − 2h′c(dxₙ)c(ξ)
    /// + 2ξₙc(ξ)∂ₓₙc(ξ′) + 4ξₙh′)
    pub fn inv_dirac_cubed_m4(&self) -> XiRational {
        let f = self.f;
        let cx = f.c_xi();
        let a = &(&(&cx * &self.dirac_cubed_2()) * &cx) * &self.w(0, 4);
        let cn = self.k(f.c(N));
        let norm2 = &(&self.w(0, 0) + &self.w(2, 0).scale_exact(&r(2, 1))) + &self.w(4, 0);
        let t1 = &(&norm2 * &cn) * &self.dxn_c_xi();
        let t2 = (&cn * &cx).scale(&self.hp()).scale_exact(&r(-2, 1));
        let t3 = (&(&self.w(1, 0) * &cx) * &self.dxn_c_xi()).scale_exact(&r(2, 1));
        let t4 = self.w(1, 0).scale(&self.hp()).scale_exact(&r(4, 1));
        let bracket = &(&(&t1 + &t2) + &t3) + &t4;
        let b = (&(&cx * &self.w(0, 4)) * &bracket).scale_exact(&ExactScalar::i());
        &a + &b
    }

    /// q₋₄ from the composition formula −q₋₃[p₂q₋₃ + ∂_{ξₙ}p₃·D_{xₙ}q₋₃].
    pub fn inv_dirac_cubed_m4_composed(&self) -> XiRational {
        let q3 = self.inv_dirac_cubed_m3();
        let d = (&self.dirac_cubed_3().derivative() * &self.inv_dirac_cubed_m3_dxn()).scale_exact(&-ExactScalar::i());
        let inner = &(&self.dirac_cubed_2() * &q3) + &d;
        -&(&q3 * &inner)
    }

    // ---- assembled symbols ----

    /// P = ∇_X∇_Y D_F^{−2}, orders 0 and −1.
    pub fn d2d2_left(&self) -> BoundarySymbol {
        BoundarySymbol::new("nabla_X nabla_Y D^-2", 0)
            .with(
                SymbolJet::new(0)
                    .with(JetKey::VALUE, self.nabla_laplace_0())
                    .with(JetKey::normal(1), self.nabla_laplace_0_dxn()),
            )
            .with(SymbolJet::new(-1).with(JetKey::VALUE, self.nabla_laplace_m1()))
    }

    /// Q = D_F^{−2}, orders −2 and −3.
    pub fn d2d2_right(&self) -> BoundarySymbol {
        BoundarySymbol::new("D^-2", -2)
            .with(
                SymbolJet::new(-2)
                    .with(JetKey::VALUE, self.inv_laplace_m2())
                    .with(JetKey::normal(1), self.inv_laplace_m2_dxn()),
            )
            .with(SymbolJet::new(-3).with(JetKey::VALUE, self.inv_laplace_m3()))
    }

    /// P = ∇_X∇_Y D_F^{−1}, orders 1 and 0.
    pub fn d1d3_left(&self) -> BoundarySymbol {
        BoundarySymbol::new("nabla_X nabla_Y D^-1", 1)
            .with(
                SymbolJet::new(1)
                    .with(JetKey::VALUE, self.nabla_dirac_1())
                    .with(JetKey::normal(1), self.nabla_dirac_1_dxn()),
            )
            .with(SymbolJet::new(0).with(JetKey::VALUE, self.nabla_dirac_0()))
    }

    /// Q = D_F^{−3}, orders −3 and −4.
    pub fn d1d3_right(&self) -> BoundarySymbol {
        BoundarySymbol::new("D^-3", -3)
            .with(
                SymbolJet::new(-3)
                    .with(JetKey::VALUE, self.inv_dirac_cubed_m3())
                    .with(JetKey::normal(1), self.inv_dirac_cubed_m3_dxn()),
            )
            .with(SymbolJet::new(-4).with(JetKey::VALUE, self.inv_dirac_cubed_m4()))
    }
}
