//! Floating-point cross-check of one boundary case. Shares nothing with
//! the residue path beyond the partial-fraction representation of the
//! inputs: π⁺ and ∂_{ξₙ} come from Cauchy integrals, the ξₙ integral from
//! adaptive quadrature, the Clifford trace from the matrix representation
//! and the sphere integral from a product rule with |ξ′| = 1 built in.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{alpha_weight, case_prefactor, multi_indices, xi_prime_derivative, BoundarySymbol, CaseSpec, JetKey};
use crate::clifford::matrix::{MatrixRep, WordCache};
use crate::clifford::Signature;
use crate::error::{Error, Result};
use crate::frame::N;
use crate::scalar::{Family, Kind, Marker, Registry, ScalarPoly, VarId};
use crate::sphere::sphere_nodes;
use crate::xi::quadrature::{cauchy_derivative, cauchy_pi_plus_derivative, integrate_real_line, l1_estimate};
use crate::xi::{XiBasis, XiRational};

/// Relative agreement required between the symbolic value and the oracle.
pub const ORACLE_TOLERANCE: f64 = 1e-9;
/// Absolute floor for values that vanish identically.
pub const ORACLE_FLOOR: f64 = 1e-12;

/// Random real values for every indeterminate, with π, Ω₃ = 4π and
/// div = −Σ_{j<n}Γ(j;j,n) tied to them.
#[derive(Clone, Debug)]
pub struct Bindings {
    values: BTreeMap<VarId, f64>,
    reg: std::sync::Arc<Registry>,
}

impl Bindings {
    pub fn random(reg: &std::sync::Arc<Registry>, vars: impl IntoIterator<Item = VarId>, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut values = BTreeMap::new();
        let ids: BTreeSet<VarId> = vars.into_iter().collect();
        for v in ids {
            match reg.kind(v) {
                Kind::XiPrime(_) | Kind::Marker(_) => {}
                _ => {
                    values.insert(v, rng.gen_range(-1.0..1.0));
                }
            }
        }
        // the divergence atom is tied to the Γ(j;j,n) it abbreviates
        let mut div = 0.0;
        for j in 1..N {
            let (sign, k) = Kind::family(Family::Gamma, &[j, j, N]).unwrap();
            let id = reg.intern(k);
            let x = *values.entry(id).or_insert_with(|| rng.gen_range(-1.0..1.0));
            div -= sign as f64 * x;
        }
        values.insert(reg.marker(Marker::DivNormal), div);
        values.insert(reg.marker(Marker::Pi), PI);
        values.insert(reg.marker(Marker::Omega3), 4.0 * PI);
        Self { values, reg: reg.clone() }
    }

    pub fn with_xi(&self, xi: [f64; 3]) -> impl Fn(VarId) -> Option<Complex64> + '_ {
        move |v| match self.reg.kind(v) {
            Kind::XiPrime(j) => Some(Complex64::new(xi[j as usize - 1], 0.0)),
            _ => self.values.get(&v).map(|&x| Complex64::new(x, 0.0)),
        }
    }

    pub fn value(&self) -> impl Fn(VarId) -> Option<Complex64> + '_ {
        move |v| self.values.get(&v).map(|&x| Complex64::new(x, 0.0))
    }
}

pub(crate) fn xi_vars(f: &XiRational, out: &mut BTreeSet<VarId>) {
    for (_, c) in f.terms() {
        for (_, p) in c.terms() {
            out.extend(p.vars());
        }
    }
}

fn symbol_vars(s: &BoundarySymbol, out: &mut BTreeSet<VarId>) {
    for jet in s.orders.values() {
        for f in jet.jets.values() {
            xi_vars(f, out);
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleEvidence {
    pub numeric: [f64; 2],
    pub symbolic: [f64; 2],
    pub abs_error: f64,
    pub tolerance: f64,
    pub agrees: bool,
}

impl OracleEvidence {
    pub fn compare(numeric: Complex64, symbolic: Complex64) -> Self {
        let abs_error = (numeric - symbolic).norm();
        let scale = numeric.norm().max(symbolic.norm());
        Self {
            numeric: [numeric.re, numeric.im],
            symbolic: [symbolic.re, symbolic.im],
            abs_error,
            tolerance: ORACLE_TOLERANCE,
            agrees: abs_error <= ORACLE_TOLERANCE * scale || abs_error <= ORACLE_FLOOR,
        }
    }

    pub fn combine(parts: &[OracleEvidence]) -> Self {
        let sum = |f: &dyn Fn(&OracleEvidence) -> [f64; 2]| {
            parts.iter().fold(Complex64::new(0.0, 0.0), |acc, e| {
                let v = f(e);
                acc + Complex64::new(v[0], v[1])
            })
        };
        Self::compare(sum(&|e| e.numeric), sum(&|e| e.symbolic))
    }
}

fn basis_fn(b: XiBasis) -> impl Fn(Complex64) -> Complex64 {
    move |z| b.eval(z)
}

/// Numeric value of one case at the given bindings.
pub fn case_numeric(c: &CaseSpec, p: &BoundarySymbol, q: &BoundarySymbol, sig: Signature, bind: &Bindings) -> Result<Complex64> {
    let reg = &bind.reg;
    let rep = MatrixRep::new(sig)?;
    let words = WordCache::new(&rep);
    let nodes = sphere_nodes(8, 16);
    let pj = p.order(c.r, "left")?;
    let qj = q.order(c.l, "right")?;
    let pre = case_prefactor(c);
    let mut total = Complex64::new(0.0, 0.0);
    for alpha in multi_indices(c.alpha) {
        let left = xi_prime_derivative(&pj.get(JetKey::normal(c.j), sig, reg), &alpha);
        let right = qj.get(JetKey { xn: c.k, xprime: alpha }, sig, reg);
        if left.is_zero() || right.is_zero() {
            continue;
        }
        // T_bd = ∫_{S²} tr(L_b R_d)
        let mut t: BTreeMap<(XiBasis, XiBasis), Complex64> = BTreeMap::new();
        for (xi, w) in &nodes {
            let value = bind.with_xi(*xi);
            let lm: Vec<_> = left
                .terms()
                .map(|(b, e)| Ok((*b, rep.represent_numeric(e, &value, &words)?)))
                .collect::<Result<_>>()?;
            for (d, e) in right.terms() {
                let rm = rep.represent_numeric(e, &value, &words)?;
                for (b, m) in &lm {
                    *t.entry((*b, *d)).or_default() += m.trace_mul(&rm) * *w;
                }
            }
        }
        let (k, j) = (c.k, c.j);
        let integrand = |x: f64| {
            let z = Complex64::new(x, 0.0);
            t.iter()
                .map(|((b, d), tv)| {
                    let psi = cauchy_pi_plus_derivative(&basis_fn(*b), z, k);
                    let chi = cauchy_derivative(&basis_fn(*d), z, j + 1);
                    psi * chi * tv
                })
                .sum::<Complex64>()
        };
        let l1 = l1_estimate(&integrand);
        if l1 == 0.0 {
            continue;
        }
        // the contour sums carry ~1e-15 relative noise, so ask for a little less
        let v = integrate_real_line(&integrand, 1e-11 * l1)?;
        total += v * (&pre * &alpha_weight(&alpha)).to_complex64();
    }
    Ok(total)
}

pub fn symbolic_value(value: &ScalarPoly, bind: &Bindings) -> Result<Complex64> {
    value.eval(&bind.value())
}

/// Cross-check of one case value against the numeric pipeline.
pub fn case_oracle(c: &CaseSpec, value: &ScalarPoly, p: &BoundarySymbol, q: &BoundarySymbol, sig: Signature, seed: u64) -> Result<OracleEvidence> {
    let reg = value.registry();
    let mut vars = BTreeSet::new();
    symbol_vars(p, &mut vars);
    symbol_vars(q, &mut vars);
    vars.extend(value.vars());
    let bind = Bindings::random(reg, vars, seed);
    let numeric = case_numeric(c, p, q, sig, &bind)?;
    let symbolic = symbolic_value(value, &bind)?;
    if !numeric.is_finite() {
        return Err(Error::Quadrature(format!("non-finite oracle value for {}", c.label())));
    }
    Ok(OracleEvidence::compare(numeric, symbolic))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::{enumerate_cases, evaluate_case};
    use crate::frame::Frame;
    use crate::paper_data::jets::Jets;

    #[test]
    fn every_case_matches_quadrature() {
        let reg = Registry::global();
        let f = Frame::boundary(&reg);
        let j = Jets::new(&f);
        for (p, q, rm, lm) in [(j.d2d2_left(), j.d2d2_right(), 0, -2), (j.d1d3_left(), j.d1d3_right(), 1, -3)] {
            for c in enumerate_cases(4, rm, lm) {
                let ev = evaluate_case(&c, &p, &q, f.signature()).unwrap();
                let t = std::time::Instant::now();
                let o = case_oracle(&c, &ev.value, &p, &q, f.signature(), 7).unwrap();
                eprintln!("{} {:?} {:?}", c.label(), o, t.elapsed());
                assert!(o.agrees, "{}: {:?}", c.label(), o);
            }
        }
    }
}
