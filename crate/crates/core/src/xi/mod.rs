//! Rational functions of ξₙ with poles only at ±i and Clifford-valued
//! coefficients.
//!
//! Values are kept in partial-fraction form over the basis
//! ξₙ^m, (ξₙ−i)^{−k}, (ξₙ+i)^{−k}. Every rational function with poles at
//! ±i has exactly one such expansion, so equality is structural, π⁺ is
//! "keep the (ξₙ−i) part", and integration reads off one residue.

pub mod quadrature;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::binomial;
use num_rational::BigRational;
use serde::Serialize;

use crate::clifford::{CliffordElement, Signature};
use crate::error::{Error, Result};
use crate::scalar::{ExactScalar, Marker, Registry, ScalarPoly};

/// One partial-fraction basis function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum XiBasis {
    /// ξₙ^m
    Power(u32),
    /// (ξₙ−i)^{−k}, k ≥ 1
    Plus(u32),
    /// (ξₙ+i)^{−k}, k ≥ 1
    Minus(u32),
}

impl XiBasis {
    pub fn eval(self, xi: Complex64) -> Complex64 {
        let i = Complex64::i();
        match self {
            XiBasis::Power(m) => xi.powu(m),
            XiBasis::Plus(k) => (xi - i).powi(-(k as i32)),
            XiBasis::Minus(k) => (xi + i).powi(-(k as i32)),
        }
    }

    /// Exponent of |ξₙ| at infinity.
    pub fn decay(self) -> i64 {
        match self {
            XiBasis::Power(m) => m as i64,
            XiBasis::Plus(k) | XiBasis::Minus(k) => -(k as i64),
        }
    }
}

impl fmt::Display for XiBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            XiBasis::Power(0) => f.write_str("1"),
            XiBasis::Power(1) => f.write_str("xi"),
            XiBasis::Power(m) => write!(f, "xi^{m}"),
            XiBasis::Plus(k) => write!(f, "(xi-i)^-{k}"),
            XiBasis::Minus(k) => write!(f, "(xi+i)^-{k}"),
        }
    }
}

/// `numerator · ξₙ^power / ((ξₙ−i)^pole_plus (ξₙ+i)^pole_minus)`.
#[derive(Clone, Debug)]
pub struct XiTerm {
    pub numerator: CliffordElement,
    pub power: u32,
    pub pole_plus: u32,
    pub pole_minus: u32,
}

fn big_binom(n: u64, k: u64) -> ExactScalar {
    ExactScalar::from_rational(BigRational::from_integer(binomial(BigInt::from(n), BigInt::from(k))))
}

/// binom(−b, j) = (−1)^j C(b+j−1, j)
fn neg_binom(b: u32, j: u32) -> ExactScalar {
    let c = big_binom((b + j - 1) as u64, j as u64);
    if j.is_multiple_of(2) {
        c
    } else {
        -c
    }
}

type Expansion = Vec<(XiBasis, ExactScalar)>;

fn push(out: &mut BTreeMap<XiBasis, ExactScalar>, b: XiBasis, c: ExactScalar) {
    let e = out.entry(b).or_default();
    *e += &c;
}

type ExpansionCache = Mutex<HashMap<(u32, u32, u32), Expansion>>;

/// Partial fractions of ξ^m (ξ−i)^{−a} (ξ+i)^{−b}.
fn decompose(m: u32, a: u32, b: u32) -> Expansion {
    static CACHE: OnceLock<ExpansionCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().unwrap().get(&(m, a, b)) {
        return hit.clone();
    }
    let i = ExactScalar::i();
    let two_i = ExactScalar::gaussian(0, 2, 1);
    // step 1: (ξ−i)^{−a}(ξ+i)^{−b}
    let mut pf: BTreeMap<XiBasis, ExactScalar> = BTreeMap::new();
    match (a, b) {
        (0, 0) => push(&mut pf, XiBasis::Power(0), ExactScalar::one()),
        (a, 0) => push(&mut pf, XiBasis::Plus(a), ExactScalar::one()),
        (0, b) => push(&mut pf, XiBasis::Minus(b), ExactScalar::one()),
        (a, b) => {
            // Laurent coefficients of (2i + t)^{−b} at t = ξ − i, and of
            // (−2i + u)^{−a} at u = ξ + i
            for j in 0..a {
                let c = &neg_binom(b, j) * &two_i.pow(-((b + j) as i32));
                push(&mut pf, XiBasis::Plus(a - j), c);
            }
            for j in 0..b {
                let c = &neg_binom(a, j) * &(-&two_i).pow(-((a + j) as i32));
                push(&mut pf, XiBasis::Minus(b - j), c);
            }
        }
    }
    // step 2: multiply by ξ^m, re-expanding ξ about the pole
    let mut out: BTreeMap<XiBasis, ExactScalar> = BTreeMap::new();
    for (basis, c) in pf {
        let (k, shift, plus) = match basis {
            XiBasis::Power(0) => {
                push(&mut out, XiBasis::Power(m), c);
                continue;
            }
            XiBasis::Plus(k) => (k, i.clone(), true),
            XiBasis::Minus(k) => (k, -&i, false),
            XiBasis::Power(_) => unreachable!(),
        };
        // ξ = (ξ ∓ i) ± i with shift = ±i
        for j in 0..=m {
            let cj = &(&c * &big_binom(m as u64, j as u64)) * &shift.pow((m - j) as i32);
            if j < k {
                let b = if plus { XiBasis::Plus(k - j) } else { XiBasis::Minus(k - j) };
                push(&mut out, b, cj);
            } else {
                // (ξ ∓ i)^d = Σ_t C(d,t) ξ^t (∓i)^{d−t}
                let d = j - k;
                let back = -&shift;
                for t in 0..=d {
                    let ct = &(&cj * &big_binom(d as u64, t as u64)) * &back.pow((d - t) as i32);
                    push(&mut out, XiBasis::Power(t), ct);
                }
            }
        }
    }
    let res: Expansion = out.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    cache.lock().unwrap().insert((m, a, b), res.clone());
    res
}

fn basis_mul(x: XiBasis, y: XiBasis) -> Expansion {
    use XiBasis::*;
    match (x, y) {
        (Power(m), Power(k)) => vec![(Power(m + k), ExactScalar::one())],
        (Power(m), Plus(a)) | (Plus(a), Power(m)) => decompose(m, a, 0),
        (Power(m), Minus(b)) | (Minus(b), Power(m)) => decompose(m, 0, b),
        (Plus(a), Plus(b)) => vec![(Plus(a + b), ExactScalar::one())],
        (Minus(a), Minus(b)) => vec![(Minus(a + b), ExactScalar::one())],
        (Plus(a), Minus(b)) | (Minus(b), Plus(a)) => decompose(0, a, b),
    }
}

/// Rational function of ξₙ in canonical partial-fraction form.
#[derive(Clone)]
pub struct XiRational {
    sig: Signature,
    reg: Arc<Registry>,
    terms: BTreeMap<XiBasis, CliffordElement>,
}

impl PartialEq for XiRational {
    fn eq(&self, o: &Self) -> bool {
        self.sig == o.sig && Arc::ptr_eq(&self.reg, &o.reg) && self.terms == o.terms
    }
}

impl Eq for XiRational {}

impl XiRational {
    pub fn zero(sig: Signature, reg: &Arc<Registry>) -> Self {
        Self {
            sig,
            reg: reg.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: CliffordElement) -> Self {
        Self::basis(XiBasis::Power(0), c)
    }

    pub fn basis(b: XiBasis, c: CliffordElement) -> Self {
        let mut out = Self::zero(c.signature(), c.registry());
        out.accumulate(b, c);
        out
    }

    /// `numerator · ξ^m / ((ξ−i)^a (ξ+i)^b)`, reduced to canonical form.
    pub fn term(numerator: CliffordElement, m: u32, a: u32, b: u32) -> Self {
        let mut out = Self::zero(numerator.signature(), numerator.registry());
        for (basis, c) in decompose(m, a, b) {
            out.accumulate(basis, numerator.scale_exact(&c));
        }
        out
    }

    /// `numerator · ξ^m / (1+ξ²)^k`.
    pub fn over_norm(numerator: CliffordElement, m: u32, k: u32) -> Self {
        Self::term(numerator, m, k, k)
    }

    pub fn from_terms(sig: Signature, reg: &Arc<Registry>, terms: &[XiTerm]) -> Self {
        terms.iter().fold(Self::zero(sig, reg), |acc, t| {
            &acc + &Self::term(t.numerator.clone(), t.power, t.pole_plus, t.pole_minus)
        })
    }

    /// Canonical form as a term list.
    pub fn to_terms(&self) -> Vec<XiTerm> {
        self.terms
            .iter()
            .map(|(b, c)| {
                let (power, pole_plus, pole_minus) = match *b {
                    XiBasis::Power(m) => (m, 0, 0),
                    XiBasis::Plus(k) => (0, k, 0),
                    XiBasis::Minus(k) => (0, 0, k),
                };
                XiTerm {
                    numerator: c.clone(),
                    power,
                    pole_plus,
                    pole_minus,
                }
            })
            .collect()
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn registry(&self) -> &Arc<Registry> {
        &self.reg
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&XiBasis, &CliffordElement)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, b: XiBasis) -> CliffordElement {
        self.terms
            .get(&b)
            .cloned()
            .unwrap_or_else(|| CliffordElement::zero(self.sig, &self.reg))
    }

    fn accumulate(&mut self, b: XiBasis, c: CliffordElement) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(b) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn check(&self, o: &XiRational) -> Result<()> {
        if self.sig != o.sig {
            return Err(Error::SignatureMismatch(self.sig.p(), self.sig.q(), o.sig.p(), o.sig.q()));
        }
        if !Arc::ptr_eq(&self.reg, &o.reg) {
            return Err(Error::RegistryMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, o: &XiRational) -> Result<XiRational> {
        self.check(o)?;
        let mut out = self.clone();
        for (b, c) in &o.terms {
            out.accumulate(*b, c.clone());
        }
        Ok(out)
    }

    /// Product with factor order preserved (coefficients do not commute).
    pub fn try_mul(&self, o: &XiRational) -> Result<XiRational> {
        self.check(o)?;
        let mut out = XiRational::zero(self.sig, &self.reg);
        for (bx, cx) in &self.terms {
            for (by, cy) in &o.terms {
                let prod = cx.try_mul(cy)?;
                for (b, s) in basis_mul(*bx, *by) {
                    out.accumulate(b, prod.scale_exact(&s));
                }
            }
        }
        Ok(out)
    }

    pub fn map_coefficients(&self, f: impl Fn(&CliffordElement) -> CliffordElement) -> XiRational {
        let mut out = XiRational::zero(self.sig, &self.reg);
        for (b, c) in &self.terms {
            out.accumulate(*b, f(c));
        }
        out
    }

    /// `c · self`
    pub fn left_mul(&self, c: &CliffordElement) -> XiRational {
        self.map_coefficients(|x| c * x)
    }

    /// `self · c`
    pub fn right_mul(&self, c: &CliffordElement) -> XiRational {
        self.map_coefficients(|x| x * c)
    }

    pub fn scale(&self, p: &ScalarPoly) -> XiRational {
        self.map_coefficients(|x| x.scale(p))
    }

    pub fn scale_exact(&self, s: &ExactScalar) -> XiRational {
        self.map_coefficients(|x| x.scale_exact(s))
    }

    pub fn derivative(&self) -> XiRational {
        let mut out = XiRational::zero(self.sig, &self.reg);
        for (b, c) in &self.terms {
            let (nb, k) = match *b {
                XiBasis::Power(0) => continue,
                XiBasis::Power(m) => (XiBasis::Power(m - 1), m as i64),
                XiBasis::Plus(k) => (XiBasis::Plus(k + 1), -(k as i64)),
                XiBasis::Minus(k) => (XiBasis::Minus(k + 1), -(k as i64)),
            };
            out.accumulate(nb, c.scale_exact(&ExactScalar::from_int(k)));
        }
        out
    }

    pub fn derivative_n(&self, n: u32) -> XiRational {
        (0..n).fold(self.clone(), |f, _| f.derivative())
    }

    fn filter(&self, keep: impl Fn(XiBasis) -> bool) -> XiRational {
        XiRational {
            sig: self.sig,
            reg: self.reg.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(b, _)| keep(**b))
                .map(|(b, c)| (*b, c.clone()))
                .collect(),
        }
    }

    /// Principal part at ξₙ = +i.
    pub fn pi_plus(&self) -> XiRational {
        self.filter(|b| matches!(b, XiBasis::Plus(_)))
    }

    /// Principal part at ξₙ = −i.
    pub fn pi_minus(&self) -> XiRational {
        self.filter(|b| matches!(b, XiBasis::Minus(_)))
    }

    pub fn poly_part(&self) -> XiRational {
        self.filter(|b| matches!(b, XiBasis::Power(_)))
    }

    /// Exponent of the leading |ξₙ| power at infinity, `None` for zero.
    pub fn decay_degree(&self) -> Option<i64> {
        if self.terms.is_empty() {
            return None;
        }
        if let Some(m) = self
            .terms
            .keys()
            .filter_map(|b| match b {
                XiBasis::Power(m) => Some(*m as i64),
                _ => None,
            })
            .max()
        {
            return Some(m);
        }
        // (ξ∓i)^{−k} = Σ_j C(k+j−1, j) (±i)^j ξ^{−k−j}
        let depth = self.terms.keys().map(|b| (-b.decay()) as u32).max().unwrap_or(0) + 8;
        for order in 1..=depth {
            let mut acc = CliffordElement::zero(self.sig, &self.reg);
            for (b, c) in &self.terms {
                let (k, s) = match *b {
                    XiBasis::Plus(k) => (k, ExactScalar::i()),
                    XiBasis::Minus(k) => (k, -ExactScalar::i()),
                    XiBasis::Power(_) => continue,
                };
                if order < k {
                    continue;
                }
                let j = order - k;
                let coeff = &big_binom((k + j - 1) as u64, j as u64) * &s.pow(j as i32);
                acc = &acc + &c.scale_exact(&coeff);
            }
            if !acc.is_zero() {
                return Some(-(order as i64));
            }
        }
        Some(-(depth as i64))
    }

    /// ∫_ℝ f dξₙ = 2πi Σ Res_{+i}, which for this basis is 2πi·[(ξ−i)^{−1}].
    pub fn integral(&self) -> Result<CliffordElement> {
        let poly = self.poly_part();
        if !poly.is_zero() {
            return Err(Error::InsufficientDecay(format!("polynomial part {poly}")));
        }
        let a1 = self.coefficient(XiBasis::Plus(1));
        let b1 = self.coefficient(XiBasis::Minus(1));
        let r = &a1 + &b1;
        if !r.is_zero() {
            return Err(Error::InsufficientDecay(format!("1/ξ tail with coefficient {r}")));
        }
        let two_pi_i = ScalarPoly::marker(&self.reg, Marker::Pi).scale(&ExactScalar::gaussian(0, 2, 1));
        Ok(a1.scale(&two_pi_i))
    }

    /// Tr(f·g) as a scalar-valued rational function (coefficients on the
    /// identity word).
    pub fn trace_product(f: &XiRational, g: &XiRational) -> Result<XiRational> {
        f.check(g)?;
        let mut out = XiRational::zero(f.sig, &f.reg);
        for (bx, cx) in &f.terms {
            for (by, cy) in &g.terms {
                let t = CliffordElement::trace_product(cx, cy)?;
                if t.is_zero() {
                    continue;
                }
                let t = CliffordElement::scalar(f.sig, t);
                for (b, s) in basis_mul(*bx, *by) {
                    out.accumulate(b, t.scale_exact(&s));
                }
            }
        }
        Ok(out)
    }

    /// Pointwise value with each coefficient mapped through `coeff`.
    pub fn eval_with<T>(&self, xi: Complex64, coeff: impl Fn(&CliffordElement) -> Result<T>) -> Result<T>
    where
        T: std::ops::Add<Output = T> + std::ops::Mul<Complex64, Output = T> + Default,
    {
        let mut acc = T::default();
        for (b, c) in &self.terms {
            acc = acc + coeff(c)? * b.eval(xi);
        }
        Ok(acc)
    }

    pub fn laurent(&self, center: Pole, max_order: i32) -> LaurentExpansion {
        let i = ExactScalar::i();
        let shift = match center {
            Pole::Plus => i,
            Pole::Minus => -&i,
        };
        let mut coeffs: BTreeMap<i32, CliffordElement> = BTreeMap::new();
        let mut add = |o: i32, c: CliffordElement| {
            if o > max_order || c.is_zero() {
                return;
            }
            let e = coeffs
                .entry(o)
                .or_insert_with(|| CliffordElement::zero(self.sig, &self.reg));
            *e = &*e + &c;
        };
        let two = &shift * &ExactScalar::from_int(2);
        for (b, c) in &self.terms {
            match (*b, center) {
                (XiBasis::Power(m), _) => {
                    // ξ^m = (t + shift)^m
                    for j in 0..=m {
                        let s = &big_binom(m as u64, j as u64) * &shift.pow((m - j) as i32);
                        add(j as i32, c.scale_exact(&s));
                    }
                }
                (XiBasis::Plus(k), Pole::Plus) | (XiBasis::Minus(k), Pole::Minus) => {
                    add(-(k as i32), c.clone());
                }
                (XiBasis::Plus(k), Pole::Minus) | (XiBasis::Minus(k), Pole::Plus) => {
                    // the other pole: (t + 2·shift)^{−k}
                    for j in 0..=max_order.max(0) as u32 {
                        let s = &neg_binom(k, j) * &two.pow(-((k + j) as i32));
                        add(j as i32, c.scale_exact(&s));
                    }
                }
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        LaurentExpansion { center, coefficients: coeffs }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Pole {
    Plus,
    Minus,
}

/// Truncated Laurent series about ±i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentExpansion {
    pub center: Pole,
    pub coefficients: BTreeMap<i32, CliffordElement>,
}

impl LaurentExpansion {
    pub fn principal_part(&self, sig: Signature, reg: &Arc<Registry>) -> XiRational {
        let mut out = XiRational::zero(sig, reg);
        for (o, c) in self.coefficients.range(..0) {
            let k = (-o) as u32;
            let b = match self.center {
                Pole::Plus => XiBasis::Plus(k),
                Pole::Minus => XiBasis::Minus(k),
            };
            out.accumulate(b, c.clone());
        }
        out
    }
}

impl std::ops::Add for &XiRational {
    type Output = XiRational;
    /// Panics on signature or registry mismatch.
    fn add(self, o: &XiRational) -> XiRational {
        self.try_add(o).expect("xi add")
    }
}

impl std::ops::Sub for &XiRational {
    type Output = XiRational;
    fn sub(self, o: &XiRational) -> XiRational {
        self.try_add(&-o).expect("xi sub")
    }
}

impl std::ops::Mul for &XiRational {
    type Output = XiRational;
    fn mul(self, o: &XiRational) -> XiRational {
        self.try_mul(o).expect("xi mul")
    }
}

impl std::ops::Neg for &XiRational {
    type Output = XiRational;
    fn neg(self) -> XiRational {
        self.map_coefficients(|c| -c)
    }
}

impl fmt::Display for XiRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (b, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "[{c}]*{b}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for XiRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "XiRational({self})")
    }
}
