//! Boundary term of the residue of a product of two Boutet de Monvel
//! operators in dimension n:
//!
//! Φ = Σ (−i)^{|α|+j+k+1}/(α!(j+k+1)!) ∫_{|ξ′|=1} ∫_ℝ
//!       tr[∂ₓₙ^j ∂_{ξ′}^α ∂_{ξₙ}^k π⁺σ_r(P) · ∂_{x′}^α ∂_{ξₙ}^{j+1} ∂ₓₙ^k σ_l(Q)] dξₙ σ(ξ′)
//!
//! summed over r − k − |α| + l − j − 1 = −n.

pub mod oracle;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::clifford::Signature;
use crate::error::{Error, Result};
use crate::frame::{reduce_unit_sphere, rewrite_div};
use crate::scalar::{ExactScalar, Family, Kind, Marker, Monomial, Registry, ScalarPoly};
use crate::sphere::integrate_sphere;
use crate::xi::XiRational;

/// Tangential derivative multi-index (exponents of ∂_{x₁}, ∂_{x₂}, ∂_{x₃}).
pub type MultiIndex = [u32; 3];

/// Derivative multi-order of a jet entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct JetKey {
    pub xn: u32,
    pub xprime: MultiIndex,
}

impl JetKey {
    pub const VALUE: JetKey = JetKey { xn: 0, xprime: [0; 3] };

    pub fn normal(k: u32) -> Self {
        JetKey { xn: k, xprime: [0; 3] }
    }
}

/// A homogeneous symbol component and its derivatives at (x₀, |ξ′| = 1).
/// Absent entries are zero.
#[derive(Clone, Debug)]
pub struct SymbolJet {
    pub order: i32,
    pub jets: BTreeMap<JetKey, XiRational>,
}

impl SymbolJet {
    pub fn new(order: i32) -> Self {
        Self {
            order,
            jets: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: JetKey, value: XiRational) -> Self {
        self.jets.insert(key, value);
        self
    }

    pub fn get(&self, key: JetKey, sig: Signature, reg: &std::sync::Arc<Registry>) -> XiRational {
        self.jets.get(&key).cloned().unwrap_or_else(|| XiRational::zero(sig, reg))
    }
}

#[derive(Clone, Debug)]
pub struct BoundarySymbol {
    pub name: String,
    pub orders: BTreeMap<i32, SymbolJet>,
    pub max_order: i32,
}

impl BoundarySymbol {
    pub fn new(name: impl Into<String>, max_order: i32) -> Self {
        Self {
            name: name.into(),
            orders: BTreeMap::new(),
            max_order,
        }
    }

    pub fn with(mut self, jet: SymbolJet) -> Self {
        assert!(jet.order <= self.max_order, "order {} exceeds {}", jet.order, self.max_order);
        self.orders.insert(jet.order, jet);
        self
    }

    pub fn order(&self, r: i32, side: &'static str) -> Result<&SymbolJet> {
        self.orders.get(&r).ok_or(Error::MissingJetOrder { side, order: r })
    }
}

/// One admissible index tuple of the boundary formula; `alpha` is |α|.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CaseSpec {
    pub r: i32,
    pub l: i32,
    pub k: u32,
    pub j: u32,
    pub alpha: u32,
}

impl CaseSpec {
    pub fn label(&self) -> String {
        format!("r={},l={},k={},j={},|a|={}", self.r, self.l, self.k, self.j, self.alpha)
    }
}

/// All solutions of r − k − |α| + l − j − 1 = −n with r ≤ r_max, l ≤ l_max.
/// Ordered by k + j + |α| descending, then r, then l descending; within a
/// pair (r,l) the |α|, j, k cases come in that order.
pub fn enumerate_cases(n: u32, r_max: i32, l_max: i32) -> Vec<CaseSpec> {
    assert!(n.is_multiple_of(2), "dimension must be even");
    let n = n as i32;
    let mut out = Vec::new();
    // t = k + j + |α| = r + l + n − 1 ≥ 0
    let r_min = 1 - n - l_max;
    for r in (r_min..=r_max).rev() {
        for l in ((1 - n - r)..=l_max).rev() {
            let t = (r + l + n - 1) as u32;
            for alpha in (0..=t).rev() {
                for j in (0..=t - alpha).rev() {
                    let k = t - alpha - j;
                    out.push(CaseSpec { r, l, k, j, alpha });
                }
            }
        }
    }
    out.sort_by_key(|c| (std::cmp::Reverse(c.k + c.j + c.alpha), std::cmp::Reverse(c.r), std::cmp::Reverse(c.l)));
    out
}

fn factorial(n: u32) -> ExactScalar {
    ExactScalar::from_int((1..=n as i64).product())
}

/// (−i)^{|α|+j+k+1}/(α!(j+k+1)!) for |α| ≤ 1; for longer α the α! of each
/// multi-index is applied separately by [`alpha_weight`].
pub fn case_prefactor(c: &CaseSpec) -> ExactScalar {
    let minus_i = -ExactScalar::i();
    &minus_i.pow((c.alpha + c.j + c.k + 1) as i32) / &factorial(c.j + c.k + 1)
}

/// 1/α!
pub fn alpha_weight(a: &MultiIndex) -> ExactScalar {
    a.iter().fold(ExactScalar::one(), |acc, &e| &acc / &factorial(e))
}

/// Multi-indices of length `len` over the three tangential directions.
pub fn multi_indices(len: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    for a in (0..=len).rev() {
        for b in (0..=len - a).rev() {
            out.push([a, b, len - a - b]);
        }
    }
    out
}

pub(crate) fn xi_prime_derivative(f: &XiRational, alpha: &MultiIndex) -> XiRational {
    let reg = f.registry().clone();
    let mut out = f.clone();
    for (d, &e) in alpha.iter().enumerate() {
        let v = reg.intern(Kind::XiPrime(d as u8 + 1));
        for _ in 0..e {
            out = out.map_coefficients(|c| c.map_coefficients(|p| p.derivative(v)));
        }
    }
    out
}

/// The two factors under the trace for one multi-index.
#[derive(Clone, Debug)]
pub struct CaseFactors {
    pub alpha: MultiIndex,
    pub pi_plus: XiRational,
    pub left: XiRational,
    pub right: XiRational,
}

pub fn case_factors(c: &CaseSpec, p: &BoundarySymbol, q: &BoundarySymbol, sig: Signature, reg: &std::sync::Arc<Registry>) -> Result<Vec<CaseFactors>> {
    let pj = p.order(c.r, "left")?;
    let qj = q.order(c.l, "right")?;
    let mut out = Vec::new();
    for alpha in multi_indices(c.alpha) {
        let base = pj.get(JetKey::normal(c.j), sig, reg);
        if base.signature() != sig {
            let o = base.signature();
            return Err(Error::SignatureMismatch(sig.p(), sig.q(), o.p(), o.q()));
        }
        let pi_plus = base.pi_plus();
        let left = xi_prime_derivative(&pi_plus, &alpha).derivative_n(c.k);
        let right = qj.get(JetKey { xn: c.k, xprime: alpha }, sig, reg).derivative_n(c.j + 1);
        out.push(CaseFactors { alpha, pi_plus, left, right });
    }
    Ok(out)
}

/// ∫ over ξₙ and the sphere of tr(f·g), without prefactor.
fn integrate_pair(f: &XiRational, g: &XiRational) -> Result<(XiRational, ScalarPoly, ScalarPoly)> {
    let t = XiRational::trace_product(f, g)?.map_coefficients(|c| c.map_coefficients(reduce_unit_sphere));
    let line = t.integral()?.scalar_part();
    let sphere = integrate_sphere(&line);
    Ok((t, line, sphere))
}

/// Result of one case, with the integration-by-parts cross-check and a
/// stable text dump of the intermediate values.
#[derive(Clone, Debug)]
pub struct CaseEvaluation {
    pub spec: CaseSpec,
    pub value: ScalarPoly,
    pub rewritten: ScalarPoly,
    pub intermediates: String,
}

pub fn evaluate_case(c: &CaseSpec, p: &BoundarySymbol, q: &BoundarySymbol, sig: Signature) -> Result<CaseEvaluation> {
    let reg = p
        .orders
        .values()
        .flat_map(|j| j.jets.values())
        .next()
        .map(|x| x.registry().clone())
        .unwrap_or_else(Registry::global);
    let pre = case_prefactor(c);
    let mut value = ScalarPoly::zero(&reg);
    let mut rewritten = ScalarPoly::zero(&reg);
    let mut dump = String::new();
    for fac in case_factors(c, p, q, sig, &reg)? {
        let w = &pre * &alpha_weight(&fac.alpha);
        let (trace, line, sphere) = integrate_pair(&fac.left, &fac.right)?;
        // move one ∂_{ξₙ} from the right factor onto the left one
        let q_lower = q
            .order(c.l, "right")?
            .get(JetKey { xn: c.k, xprime: fac.alpha }, sig, &reg)
            .derivative_n(c.j);
        let (_, _, ibp) = integrate_pair(&fac.left.derivative(), &q_lower)?;
        value = &value + &sphere.scale(&w);
        rewritten = &rewritten - &ibp.scale(&w);
        let tag = format!("{} alpha={:?}", c.label(), fac.alpha);
        let _ = writeln!(dump, "[{tag}] pi_plus = {}", fac.pi_plus);
        let _ = writeln!(dump, "[{tag}] left = {}", fac.left);
        let _ = writeln!(dump, "[{tag}] right = {}", fac.right);
        let _ = writeln!(dump, "[{tag}] trace = {trace}");
        let _ = writeln!(dump, "[{tag}] xi_integral = {line}");
        let _ = writeln!(dump, "[{tag}] sphere = {sphere}");
    }
    let value = rewrite_div(&value);
    let rewritten = rewrite_div(&rewritten);
    if value != rewritten {
        return Err(Error::IntegrationByParts {
            case: c.label(),
            direct: value.to_string(),
            rewritten: rewritten.to_string(),
        });
    }
    let _ = writeln!(dump, "[{}] prefactor = {pre}", c.label());
    let _ = writeln!(dump, "[{}] value = {value}", c.label());
    Ok(CaseEvaluation {
        spec: *c,
        value,
        rewritten,
        intermediates: dump,
    })
}

/// Named coefficients of a boundary value, read off by monomial matching:
///
/// value = [t·Σ_{j<n}X_jY_j + ν·XₙYₙ] h′πΩ₃ + a·X(Yₙ)Ω₃
///       + [d_t·Σ_{j<n}X_jY_j + d_ν·XₙYₙ] div·h′πΩ₃ + residual
///
/// The X(Yₙ) coefficient `a` may itself contain π.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructuredCoefficients {
    pub tangential: ExactScalar,
    pub normal: ExactScalar,
    pub x_yn: ScalarPoly,
    pub div_tangential: ExactScalar,
    pub div_normal: ExactScalar,
    pub residual: ScalarPoly,
}

/// Standard monomials of the structured decomposition.
pub struct Atoms {
    reg: std::sync::Arc<Registry>,
}

impl Atoms {
    pub fn new(reg: &std::sync::Arc<Registry>) -> Self {
        Self { reg: reg.clone() }
    }

    fn v(&self, k: Kind) -> ScalarPoly {
        ScalarPoly::of(&self.reg, k)
    }

    fn weight(&self) -> ScalarPoly {
        &(&self.v(Kind::HPrime) * &self.v(Kind::Marker(Marker::Pi))) * &self.v(Kind::Marker(Marker::Omega3))
    }

    /// Σ_{j<n} X_jY_j
    pub fn g_tangential(&self) -> ScalarPoly {
        (1..4).fold(ScalarPoly::zero(&self.reg), |acc, j| &acc + &(&self.v(Kind::X(j)) * &self.v(Kind::Y(j))))
    }

    pub fn xn_yn(&self) -> ScalarPoly {
        &self.v(Kind::X(4)) * &self.v(Kind::Y(4))
    }

    pub fn tangential(&self) -> ScalarPoly {
        &self.g_tangential() * &self.weight()
    }

    pub fn normal(&self) -> ScalarPoly {
        &self.xn_yn() * &self.weight()
    }

    /// X(Yₙ)Ω₃
    pub fn x_yn(&self) -> ScalarPoly {
        &ScalarPoly::family(&self.reg, crate::scalar::Family::XdY, &[4]) * &self.v(Kind::Marker(Marker::Omega3))
    }

    pub fn div_tangential(&self) -> ScalarPoly {
        &self.tangential() * &self.v(Kind::Marker(Marker::DivNormal))
    }

    pub fn div_normal(&self) -> ScalarPoly {
        &self.normal() * &self.v(Kind::Marker(Marker::DivNormal))
    }

    pub fn assemble(&self, c: &StructuredCoefficients) -> ScalarPoly {
        let mut out = c.residual.clone();
        out = &out + &self.tangential().scale(&c.tangential);
        out = &out + &self.normal().scale(&c.normal);
        out = &out + &(&self.x_yn() * &c.x_yn);
        out = &out + &self.div_tangential().scale(&c.div_tangential);
        out = &out + &self.div_normal().scale(&c.div_normal);
        out
    }

    fn lead(p: &ScalarPoly) -> Monomial {
        p.terms().next().map(|(m, _)| m.clone()).expect("nonzero atom")
    }

    pub fn extract(&self, value: &ScalarPoly) -> StructuredCoefficients {
        let mut rest = value.clone();
        let mut take = |atom: ScalarPoly| {
            let c = rest.coefficient(&Self::lead(&atom));
            rest = &rest - &atom.scale(&c);
            c
        };
        let tangential = take(self.tangential());
        let normal = take(self.normal());
        let div_tangential = take(self.div_tangential());
        let div_normal = take(self.div_normal());
        // X(Yₙ)·Ω₃·(polynomial in π)
        let xdy = ScalarPoly::family(&self.reg, crate::scalar::Family::XdY, &[4]).vars()[0];
        let omega = self.reg.marker(Marker::Omega3);
        let pi = self.reg.marker(Marker::Pi);
        let mut x_yn = ScalarPoly::zero(&self.reg);
        for (m, c) in rest.terms() {
            let (key, other) = m.partition(|v| v == xdy || v == omega);
            if key == Self::lead(&self.x_yn()) && other.factors().iter().all(|(v, _)| *v == pi) {
                x_yn = &x_yn + &ScalarPoly::term(&self.reg, c.clone(), other);
            }
        }
        let residual = &rest - &(&self.x_yn() * &x_yn);
        StructuredCoefficients {
            tangential,
            normal,
            x_yn,
            div_tangential,
            div_normal,
            residual,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BoundaryResult {
    pub cases: Vec<CaseEvaluation>,
    pub total: ScalarPoly,
    pub coefficients: StructuredCoefficients,
}

impl BoundaryResult {
    pub fn case(&self, c: &CaseSpec) -> Option<&CaseEvaluation> {
        self.cases.iter().find(|e| e.spec == *c)
    }

    pub fn intermediates(&self) -> String {
        self.cases.iter().map(|c| c.intermediates.as_str()).collect()
    }
}

pub fn assemble_boundary(p: &BoundarySymbol, q: &BoundarySymbol, sig: Signature, family: &[CaseSpec]) -> Result<BoundaryResult> {
    let reg = p
        .orders
        .values()
        .flat_map(|j| j.jets.values())
        .next()
        .map(|x| x.registry().clone())
        .unwrap_or_else(Registry::global);
    let cases = family
        .iter()
        .map(|c| evaluate_case(c, p, q, sig))
        .collect::<Result<Vec<_>>>()?;
    let total = cases.iter().fold(ScalarPoly::zero(&reg), |acc, c| &acc + &c.value);
    let coefficients = Atoms::new(&reg).extract(&total);
    Ok(BoundaryResult { cases, total, coefficients })
}

/// Extrinsic form: impose Xₙ = 0 and trade h′(0) for K = −(3/2)h′(0).
pub fn extrinsic_form(total: &ScalarPoly) -> ScalarPoly {
    let reg = total.registry();
    let x4 = reg.intern(Kind::X(4));
    let hp = reg.intern(Kind::HPrime);
    let k = ScalarPoly::of(reg, Kind::Extrinsic).scale(&ExactScalar::ratio(-2, 3));
    let zero = ScalarPoly::zero(reg);
    total
        .substitute_poly(x4, &zero)
        .and_then(|p| p.substitute_poly(hp, &k))
        .expect("X₄ and h′ are not markers")
}

/// Umbilic boundary model: Γ(a;b,n) = ½h′δ_ab for tangential a, b, so the
/// divergence marker becomes −(n−1)h′/2.
pub fn umbilic_form(total: &ScalarPoly, n: u8) -> ScalarPoly {
    let reg = total.registry();
    let hp = ScalarPoly::of(reg, Kind::HPrime);
    let zero = ScalarPoly::zero(reg);
    let mut out = total
        .specialize_marker(Marker::DivNormal, &hp.scale(&ExactScalar::ratio(-(i64::from(n) - 1), 2)))
        .expect("same registry");
    for v in total.vars() {
        let Kind::Family(Family::Gamma, idx) = reg.kind(v) else { continue };
        let by = match (idx[0], idx[1], idx[2]) {
            (a, b, c) if c == n && a < n && a == b => hp.scale(&ExactScalar::ratio(1, 2)),
            (a, b, c) if c == n && a < n && b < n => zero.clone(),
            _ => continue,
        };
        out = out.substitute_poly(v, &by).expect("Γ is not a marker");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_cases_in_each_family() {
        let c = |r, l, k, j, alpha| CaseSpec { r, l, k, j, alpha };
        assert_eq!(
            enumerate_cases(4, 0, -2),
            vec![c(0, -2, 0, 0, 1), c(0, -2, 0, 1, 0), c(0, -2, 1, 0, 0), c(0, -3, 0, 0, 0), c(-1, -2, 0, 0, 0)]
        );
        let mut d1d3 = enumerate_cases(4, 1, -3);
        d1d3.sort();
        let mut expect = vec![c(1, -3, 0, 0, 1), c(1, -3, 0, 1, 0), c(1, -3, 1, 0, 0), c(0, -3, 0, 0, 0), c(1, -4, 0, 0, 0)];
        expect.sort();
        assert_eq!(d1d3, expect);
        assert!(enumerate_cases(4, -2, -2).is_empty());
        for c in enumerate_cases(6, 2, -2) {
            assert_eq!(c.r - c.k as i32 - c.alpha as i32 + c.l - c.j as i32 - 1, -6);
        }
    }

    #[test]
    fn prefactors() {
        let c = |k, j, alpha| CaseSpec { r: 0, l: -2, k, j, alpha };
        assert_eq!(case_prefactor(&c(0, 1, 0)), ExactScalar::ratio(-1, 2));
        assert_eq!(case_prefactor(&c(0, 0, 0)), -ExactScalar::i());
        assert_eq!(case_prefactor(&c(0, 0, 1)), ExactScalar::from_int(-1));
        assert_eq!(case_prefactor(&c(1, 0, 0)), ExactScalar::ratio(-1, 2));
        assert_eq!(alpha_weight(&[2, 1, 0]), ExactScalar::ratio(1, 2));
        assert_eq!(multi_indices(1), vec![[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
        assert_eq!(multi_indices(2).len(), 6);
    }

    #[test]
    fn extraction_round_trips() {
        let reg = Registry::global();
        let a = Atoms::new(&reg);
        let c = StructuredCoefficients {
            tangential: ExactScalar::gaussian(-113, -132, 960),
            normal: ExactScalar::gaussian(-71, 26, 96),
            x_yn: ScalarPoly::constant(&reg, ExactScalar::gaussian(0, 3, 2)),
            div_tangential: ExactScalar::ratio(1, 3),
            div_normal: ExactScalar::ratio(1, 2),
            residual: ScalarPoly::of(&reg, Kind::X(1)),
        };
        assert_eq!(a.extract(&a.assemble(&c)), c);
    }

    #[test]
    fn extrinsic_substitution() {
        let reg = Registry::global();
        let a = Atoms::new(&reg);
        let total = &a.tangential().scale(&ExactScalar::ratio(-5, 24)) + &a.normal().scale(&ExactScalar::ratio(-3, 2));
        let k = &(&a.g_tangential() * &ScalarPoly::of(&reg, Kind::Extrinsic))
            * &(&ScalarPoly::marker(&reg, Marker::Pi) * &ScalarPoly::marker(&reg, Marker::Omega3));
        assert_eq!(extrinsic_form(&total), k.scale(&ExactScalar::ratio(5, 36)));
        assert!(extrinsic_form(&ScalarPoly::zero(&reg)).is_zero());
        // −c·h′ ↦ (2c/3)·K
        let c = ExactScalar::ratio(7, 5);
        assert_eq!(extrinsic_form(&a.tangential().scale(&-c.clone())), k.scale(&(&c * &ExactScalar::ratio(2, 3))));
    }
}
