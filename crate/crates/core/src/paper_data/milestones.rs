//! Printed π⁺ intermediates for ∇_X∇_Y D⁻², next to their recomputation
//! from the encoded jets. Notation used below:
//!
//! Σ′ = Σ_{j,l<n} X_jY_lξ_jξ_l,  X(ξ′)Yₙ = Σ_{j<n} X_jY_nξ_j,  XₙY(ξ′) = Σ_{l<n} X_nY_lξ_l.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::jets::Jets;
use crate::boundary::oracle::OracleEvidence;
use crate::error::Result;
use crate::frame::{reduce_unit_sphere, Frame, N};
use super::suite::{MilestoneAtom, MilestoneTerm};
use crate::scalar::{ExactScalar, Kind, ScalarPoly, VarId};
use crate::xi::quadrature::cauchy_pi_plus_derivative;
use crate::xi::XiRational;

/// Which jet the projection acts on, and how often it is differentiated
/// afterwards.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    Sigma0,
    DxnSigma0,
}

#[derive(Clone, Debug)]
pub struct Milestone {
    pub id: String,
    pub quote: String,
    pub source: Source,
    pub derivatives: u32,
    pub printed: XiRational,
    pub recomputed: XiRational,
}

impl Milestone {
    pub fn matches(&self) -> bool {
        self.printed == self.recomputed
    }

    pub fn difference(&self) -> XiRational {
        &self.printed - &self.recomputed
    }
}

struct Atoms<'a> {
    f: &'a Frame,
}

impl Atoms<'_> {
    fn tangential(&self, v: &dyn Fn(u8) -> ScalarPoly) -> ScalarPoly {
        (1..N).fold(ScalarPoly::zero(self.f.registry()), |acc, j| &acc + &(&v(j) * &self.f.xi(j)))
    }

    fn sigma_prime(&self) -> ScalarPoly {
        &self.tangential(&|a| self.f.x(a)) * &self.tangential(&|a| self.f.y(a))
    }

    fn normal(&self) -> ScalarPoly {
        &self.f.x(N) * &self.f.y(N)
    }

    fn x_yn(&self) -> ScalarPoly {
        &self.tangential(&|a| self.f.x(a)) * &self.f.y(N)
    }

    fn xn_y(&self) -> ScalarPoly {
        &self.f.x(N) * &self.tangential(&|a| self.f.y(a))
    }

    /// c·p·ξ^m/(ξ−i)^a
    fn t(&self, c: ExactScalar, p: &ScalarPoly, m: u32, a: u32) -> XiRational {
        XiRational::term(self.f.scalar(p.scale(&c)), m, a, 0)
    }
}

fn on_sphere(f: &XiRational) -> XiRational {
    f.map_coefficients(|c| c.map_coefficients(reduce_unit_sphere))
}

pub fn source_jet(j: &Jets, s: Source) -> XiRational {
    match s {
        Source::Sigma0 => j.nabla_laplace_0(),
        Source::DxnSigma0 => j.nabla_laplace_0_dxn(),
    }
}

/// Which projection each milestone id describes.
pub fn milestone_kind(id: &str) -> Option<(Source, u32)> {
    Some(match id {
        "pi_plus_dxn_sigma0_nabla_laplace" => (Source::DxnSigma0, 0),
        "pi_plus_sigma0_nabla_laplace" => (Source::Sigma0, 0),
        "d_xin_pi_plus_sigma0_nabla_laplace" => (Source::Sigma0, 1),
        "d2_xin_pi_plus_sigma0_nabla_laplace" => (Source::Sigma0, 2),
        _ => return None,
    })
}

/// ∂^k_{ξₙ}π⁺ of the source jet, restricted to |ξ′| = 1.
pub fn recompute(f: &Frame, source: Source, derivatives: u32) -> XiRational {
    on_sphere(&source_jet(&Jets::new(f), source).pi_plus().derivative_n(derivatives))
}

/// The printed expression, rebuilt from its term records.
pub fn printed_form(f: &Frame, terms: &[MilestoneTerm]) -> XiRational {
    let a = Atoms { f };
    let sum = terms.iter().fold(XiRational::zero(f.signature(), f.registry()), |acc, t| {
        let mut p = match t.atom {
            MilestoneAtom::SigmaPrime => a.sigma_prime(),
            MilestoneAtom::Normal => a.normal(),
            MilestoneAtom::XYn => a.x_yn(),
            MilestoneAtom::XnY => a.xn_y(),
        };
        if t.h_prime {
            p = &p * &f.hp();
        }
        &acc + &a.t(t.coeff.clone(), &p, t.power, t.pole)
    });
    on_sphere(&sum)
}

pub fn milestone(f: &Frame, id: &str, quote: &str, terms: &[MilestoneTerm]) -> Option<Milestone> {
    let (source, derivatives) = milestone_kind(id)?;
    Some(Milestone {
        id: id.to_string(),
        quote: quote.to_string(),
        source,
        derivatives,
        printed: printed_form(f, terms),
        recomputed: recompute(f, source, derivatives),
    })
}

/// Value of a scalar-valued ξₙ-rational function.
pub fn eval_scalar(f: &XiRational, z: Complex64, value: &dyn Fn(VarId) -> Option<Complex64>) -> Result<Complex64> {
    f.eval_with(z, |c| c.scalar_part().eval(value))
}

/// Cauchy-contour π⁺ of the raw jet at random real bindings, |ξ′| = 1 and a
/// few real ξₙ, against the exact recomputation.
pub fn milestone_oracle(f: &Frame, m: &Milestone, seed: u64) -> Result<OracleEvidence> {
    let reg = f.registry();
    let j = Jets::new(f);
    let raw = source_jet(&j, m.source);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut xi: [f64; 3] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
    let norm = xi.iter().map(|x| x * x).sum::<f64>().sqrt();
    xi.iter_mut().for_each(|x| *x /= norm);
    let mut vals = std::collections::BTreeMap::new();
    let value = |v: VarId| -> Option<Complex64> {
        match reg.kind(v) {
            Kind::XiPrime(k) => Some(Complex64::new(xi[k as usize - 1], 0.0)),
            Kind::Marker(crate::scalar::Marker::Pi) => Some(Complex64::new(PI, 0.0)),
            _ => None,
        }
    };
    let mut vars = std::collections::BTreeSet::new();
    crate::boundary::oracle::xi_vars(&raw, &mut vars);
    for v in vars {
        if value(v).is_none() {
            vals.insert(v, Complex64::new(rng.gen_range(-1.0..1.0), 0.0));
        }
    }
    let bind = |v: VarId| value(v).or_else(|| vals.get(&v).copied());
    let g = |z: Complex64| eval_scalar(&raw, z, &bind).unwrap_or(Complex64::new(f64::NAN, 0.0));
    let mut numeric = Vec::new();
    for x in [-1.7, -0.3, 0.45, 2.2] {
        let z = Complex64::new(x, 0.0);
        numeric.push(OracleEvidence::compare(cauchy_pi_plus_derivative(&g, z, m.derivatives), eval_scalar(&m.recomputed, z, &bind)?));
    }
    let worst = numeric
        .into_iter()
        .max_by(|a, b| a.abs_error.total_cmp(&b.abs_error))
        .expect("sample points");
    Ok(worst)
}
