//! Curvature and Clifford trace identities on S(F) ⊗ Λ(F^{⊥,*}).
//!
//! All traces are over the full 2^{p/2+q}-dimensional fiber.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::clifford::matrix::{MatrixRep, WordCache};
use crate::clifford::{CliffordElement, Generator, Signature};
use crate::error::Result;
use crate::frame::{rewrite_div, Frame, Gauge, N};
use crate::scalar::{ExactScalar, Family, Kind, Marker, Registry, ScalarPoly};

/// Frame vector e_a (1-based, leaves first) as a Clifford generator.
fn gen(sig: Signature, a: u8) -> Generator {
    if a <= sig.p() {
        Generator::Leaf(a)
    } else {
        Generator::Normal(a - sig.p())
    }
}

fn riemann(reg: &Arc<Registry>, a: u8, b: u8, c: u8, d: u8) -> ScalarPoly {
    ScalarPoly::family(reg, Family::Riemann, &[a, b, c, d])
}

/// The three curvature endomorphisms of E, in the order
/// ⟨R(f_i,h_r)h_t,h_s⟩c(f_i)c(h_r)ĉ(h_s)ĉ(h_t),
/// ⟨R(f_i,f_j)h_t,h_s⟩c(f_i)c(f_j)ĉ(h_s)ĉ(h_t),
/// ⟨R(h_r,h_u)h_t,h_s⟩c(h_r)c(h_u)ĉ(h_s)ĉ(h_t), each with weight ¼.
pub fn curvature_terms(sig: Signature, reg: &Arc<Registry>) -> [CliffordElement; 3] {
    let (p, q) = (sig.p(), sig.q());
    let leaves: Vec<u8> = (1..=p).collect();
    let normals: Vec<u8> = (1..=q).collect();
    let idx = |s: u8| p + s;
    let mut out = [
        CliffordElement::zero(sig, reg),
        CliffordElement::zero(sig, reg),
        CliffordElement::zero(sig, reg),
    ];
    let mut add = |slot: usize, coef: ScalarPoly, letters: &[Generator]| {
        if !coef.is_zero() {
            let e = CliffordElement::product_of(sig, reg, letters).scale(&coef);
            out[slot] = &out[slot] + &e;
        }
    };
    for &s in &normals {
        for &t in &normals {
            let hats = [Generator::Hat(s), Generator::Hat(t)];
            for &i in &leaves {
                for &r in &normals {
                    add(0, riemann(reg, i, idx(r), idx(t), idx(s)), &[gen(sig, i), gen(sig, idx(r)), hats[0], hats[1]]);
                }
                for &j in &leaves {
                    add(1, riemann(reg, i, j, idx(t), idx(s)), &[gen(sig, i), gen(sig, j), hats[0], hats[1]]);
                }
            }
            for &r in &normals {
                for &u in &normals {
                    add(2, riemann(reg, idx(r), idx(u), idx(t), idx(s)), &[gen(sig, idx(r)), gen(sig, idx(u)), hats[0], hats[1]]);
                }
            }
        }
    }
    out.map(|e| e.scale_exact(&ExactScalar::ratio(1, 4)))
}

/// E = s/4 + the curvature terms.
pub fn e_term(sig: Signature, reg: &Arc<Registry>) -> CliffordElement {
    let s = ScalarPoly::marker(reg, Marker::ScalarCurvature).scale(&ExactScalar::ratio(1, 4));
    curvature_terms(sig, reg)
        .iter()
        .fold(CliffordElement::scalar(sig, s), |acc, t| &acc + t)
}

/// Tr of each curvature term of E.
pub fn curvature_traces(p: u8, q: u8, reg: &Arc<Registry>) -> Result<[ScalarPoly; 3]> {
    let sig = Signature::new(p, q)?;
    sig.log2_dim()?;
    let [a, b, c] = curvature_terms(sig, reg);
    Ok([a.trace()?, b.trace()?, c.trace()?])
}

/// Tr E; expected 2^{p/2+q−2}·s.
pub fn trace_e(p: u8, q: u8, reg: &Arc<Registry>) -> Result<ScalarPoly> {
    let sig = Signature::new(p, q)?;
    e_term(sig, reg).trace()
}

/// 2^{p/2+q−2}·s
pub fn trace_e_closed_form(p: u8, q: u8, reg: &Arc<Registry>) -> ScalarPoly {
    let e = p as i32 / 2 + q as i32 - 2;
    ScalarPoly::marker(reg, Marker::ScalarCurvature).scale(&ExactScalar::from_int(2).pow(e))
}

/// Replace every Γ(b;j,l) by its derivative e_a(Γ(b;j,l)).
fn differentiate_gamma(e: &CliffordElement, a: u8) -> CliffordElement {
    let reg = e.registry().clone();
    e.map_coefficients(|p| {
        let mut out = p.clone();
        for v in p.vars() {
            if let Kind::Family(Family::Gamma, idx) = reg.kind(v) {
                let d = ScalarPoly::family(&reg, Family::DGamma, &[a, idx[0], idx[1], idx[2]]);
                out = out.substitute_poly(v, &d).expect("Γ is not a marker");
            }
        }
        out
    })
}

/// Traces entering F(V,W) for one ordered pair (e_a, e_b).
#[derive(Clone, Debug)]
pub struct CurvatureTraces {
    pub a: u8,
    pub b: u8,
    /// Tr e_a(Ā(e_b)), Tr e_b(Ā(e_a))
    pub derivative: [ScalarPoly; 2],
    /// Tr [Ā(e_a), Ā(e_b)]
    pub commutator: ScalarPoly,
    /// Tr Ā([e_a, e_b])
    pub bracket: ScalarPoly,
}

impl CurvatureTraces {
    pub fn vanishes(&self) -> bool {
        self.derivative.iter().all(|p| p.is_zero()) && self.commutator.is_zero() && self.bracket.is_zero()
    }
}

#[derive(Clone, Debug)]
pub struct FVanishing {
    pub pairs: Vec<CurvatureTraces>,
    /// Σ V_aW_b Tr F_{ab}
    pub f_term: ScalarPoly,
    /// max |Tr [Ā(e_a),Ā(e_b)]| from the matrix representation at random
    /// connection values, when the fiber is small enough to represent
    pub matrix_commutator: Option<f64>,
}

impl FVanishing {
    pub fn passes(&self) -> bool {
        self.pairs.iter().all(CurvatureTraces::vanishes)
            && self.f_term.is_zero()
            && self.matrix_commutator.is_none_or(|m| m < 1e-12)
    }
}

/// F(V,W) = Σ V_aW_b Tr F_{ab} with the connection Ā = M + N + A in a
/// generic gauge.
pub fn verify_f_vanishing(p: u8, q: u8, reg: &Arc<Registry>) -> Result<FVanishing> {
    let sig = Signature::new(p, q)?;
    let f = Frame::new(sig, reg, Gauge::Generic)?;
    let abar = |a: u8| f.connection_form(&f.unit(a));
    let mut pairs = Vec::new();
    let mut f_term = ScalarPoly::zero(reg);
    let v = |a| ScalarPoly::of(reg, Kind::X(a));
    let w = |a| ScalarPoly::of(reg, Kind::Y(a));
    for a in 1..=N {
        for b in 1..=N {
            let (aa, ab) = (abar(a), abar(b));
            let d_ab = differentiate_gamma(&ab, a);
            let d_ba = differentiate_gamma(&aa, b);
            let comm = &(&aa * &ab) - &(&ab * &aa);
            let lie = f.connection_form(&|c| &f.gamma(a, b, c) - &f.gamma(b, a, c));
            let fab = &(&(&d_ab - &d_ba) + &comm) - &lie;
            f_term = &f_term + &(&(&v(a) * &w(b)) * &fab.trace()?);
            pairs.push(CurvatureTraces {
                a,
                b,
                derivative: [d_ab.trace()?, d_ba.trace()?],
                commutator: comm.trace()?,
                bracket: lie.trace()?,
            });
        }
    }
    let matrix_commutator = if sig.dim()? <= 16 {
        Some(matrix_commutator_trace(&f, 0x5eed)?)
    } else {
        None
    };
    Ok(FVanishing {
        pairs,
        f_term,
        matrix_commutator,
    })
}

/// Independent check: represent Ā(e_a) numerically and take the trace of
/// the commutator in matrices.
fn matrix_commutator_trace(f: &Frame, seed: u64) -> Result<f64> {
    let rep = MatrixRep::new(f.signature())?;
    let words = WordCache::new(&rep);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values: Vec<f64> = (0..4096).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let value = |v: crate::scalar::VarId| Some(Complex64::new(values[v.0 as usize % values.len()], 0.0));
    let mut worst = 0.0f64;
    for a in 1..=N {
        for b in 1..=N {
            let ma = rep.represent_numeric(&f.connection_form(&f.unit(a)), &value, &words)?;
            let mb = rep.represent_numeric(&f.connection_form(&f.unit(b)), &value, &words)?;
            let t = ma.trace_mul(&mb) - mb.trace_mul(&ma);
            worst = worst.max(t.norm());
        }
    }
    Ok(worst)
}

/// Tr[c(e_k)c(e_l)] over the full fiber, summed against δ: the value at k = l.
/// (Tr[c(f₁)c(f₁)], Tr[c(f₁)c(f₂)])
pub fn trace_leaf_pair(p: u8, q: u8, reg: &Arc<Registry>) -> Result<(ExactScalar, ScalarPoly)> {
    let sig = Signature::new(p, q)?;
    let c = |a| CliffordElement::generator(sig, reg, Generator::Leaf(a));
    let diag = CliffordElement::trace_product(&c(1), &c(1))?;
    let off = CliffordElement::trace_product(&c(1), &c(2))?;
    Ok((diag.as_constant().expect("constant"), off))
}

/// Tr[ĉ(h_r)ĉ(h_t) − c(h_r)c(h_t)] at r = t, and whether r ≠ t vanishes.
/// (Tr[ĉ(h₁)ĉ(h₁) − c(h₁)c(h₁)], the same with h₁, h₂)
pub fn trace_normal_pair(p: u8, q: u8, reg: &Arc<Registry>) -> Result<(ExactScalar, ScalarPoly)> {
    let sig = Signature::new(p, q)?;
    let c = |s| CliffordElement::generator(sig, reg, Generator::Normal(s));
    let h = |s| CliffordElement::generator(sig, reg, Generator::Hat(s));
    let bracket = |r, t| &(&h(r) * &h(t)) - &(&c(r) * &c(t));
    let diag = bracket(1, 1).trace()?;
    let off = bracket(1, 2).trace()?;
    Ok((diag.as_constant().expect("constant"), off))
}

/// Tr[σ₀(D_F)c(∂xₙ)] with Σ_{j<n}Γ(j;j,n) rewritten as −div.
pub fn trace_sigma0_normal(f: &Frame) -> Result<ScalarPoly> {
    Ok(rewrite_div(&CliffordElement::trace_product(&f.sigma0_dirac(), &f.c(N))?))
}

/// Tr[σ₀(D_F)c(ξ′)]
pub fn trace_sigma0_tangential(f: &Frame) -> Result<ScalarPoly> {
    CliffordElement::trace_product(&f.sigma0_dirac(), &f.c_xi_prime())
}
