use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use smallvec::SmallVec;

use super::exact::ExactScalar;
use super::registry::{Family, Kind, Marker, Registry, VarId};
use crate::error::{Error, Result};

/// Sparse exponent vector, sorted by variable id, no zero exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(SmallVec<[(VarId, u32); 4]>);

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(v: VarId) -> Self {
        Self::power(v, 1)
    }

    pub fn power(v: VarId, e: u32) -> Self {
        if e == 0 {
            return Self::one();
        }
        let mut s = SmallVec::new();
        s.push((v, e));
        Monomial(s)
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (VarId, u32)>) -> Self {
        pairs
            .into_iter()
            .fold(Self::one(), |acc, (v, e)| acc.mul(&Self::power(v, e)))
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(VarId, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn degree_in(&self, v: VarId) -> u32 {
        self.0
            .iter()
            .find(|(w, _)| *w == v)
            .map_or(0, |(_, e)| *e)
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &o.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Splits into (factors whose variable satisfies `keep`, the rest).
    pub fn partition(&self, keep: impl Fn(VarId) -> bool) -> (Monomial, Monomial) {
        let (a, b): (SmallVec<_>, SmallVec<_>) = self.0.iter().copied().partition(|(v, _)| keep(*v));
        (Monomial(a), Monomial(b))
    }

    fn without(&self, v: VarId) -> (u32, Monomial) {
        let e = self.degree_in(v);
        let rest = self.0.iter().copied().filter(|(w, _)| *w != v).collect();
        (e, Monomial(rest))
    }
}

/// Sparse multivariate polynomial with Gaussian-rational coefficients.
#[derive(Clone)]
pub struct ScalarPoly {
    reg: Arc<Registry>,
    terms: BTreeMap<Monomial, ExactScalar>,
}

impl PartialEq for ScalarPoly {
    fn eq(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.reg, &o.reg) && self.terms == o.terms
    }
}

impl Eq for ScalarPoly {}

impl std::fmt::Debug for ScalarPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ScalarPoly({self})")
    }
}

impl ScalarPoly {
    pub fn zero(reg: &Arc<Registry>) -> Self {
        Self {
            reg: reg.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(reg: &Arc<Registry>, c: ExactScalar) -> Self {
        Self::term(reg, c, Monomial::one())
    }

    pub fn one(reg: &Arc<Registry>) -> Self {
        Self::constant(reg, ExactScalar::one())
    }

    pub fn term(reg: &Arc<Registry>, c: ExactScalar, m: Monomial) -> Self {
        let mut p = Self::zero(reg);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn var(reg: &Arc<Registry>, v: VarId) -> Self {
        Self::term(reg, ExactScalar::one(), Monomial::var(v))
    }

    /// Interns `kind` (which must already be canonical) and returns it as a
    /// degree-one polynomial.
    pub fn of(reg: &Arc<Registry>, kind: Kind) -> Self {
        Self::var(reg, reg.intern(kind))
    }

    /// Family member with antisymmetry applied; degenerate members are 0.
    pub fn family(reg: &Arc<Registry>, family: Family, idx: &[u8]) -> Self {
        match Kind::family(family, idx) {
            None => Self::zero(reg),
            Some((sign, kind)) => Self::of(reg, kind).scale(&ExactScalar::from_int(sign as i64)),
        }
    }

    pub fn marker(reg: &Arc<Registry>, m: Marker) -> Self {
        Self::of(reg, Kind::Marker(m))
    }

    pub fn registry(&self) -> &Arc<Registry> {
        &self.reg
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &ExactScalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> ExactScalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// The constant if this polynomial has no indeterminates.
    pub fn as_constant(&self) -> Option<ExactScalar> {
        match self.terms.len() {
            0 => Some(ExactScalar::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, v: VarId) -> u32 {
        self.terms.keys().map(|m| m.degree_in(v)).max().unwrap_or(0)
    }

    pub fn vars(&self) -> Vec<VarId> {
        let mut vs: Vec<VarId> = self
            .terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|(v, _)| *v))
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }

    fn check(&self, o: &ScalarPoly) -> Result<()> {
        if Arc::ptr_eq(&self.reg, &o.reg) {
            Ok(())
        } else {
            Err(Error::RegistryMismatch)
        }
    }

    fn accumulate(&mut self, m: Monomial, c: ExactScalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: ExactScalar) {
        self.accumulate(m, c);
    }

    pub fn try_add(&self, o: &ScalarPoly) -> Result<ScalarPoly> {
        self.check(o)?;
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.accumulate(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, o: &ScalarPoly) -> Result<ScalarPoly> {
        self.check(o)?;
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.accumulate(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, o: &ScalarPoly) -> Result<ScalarPoly> {
        self.check(o)?;
        let mut out = ScalarPoly::zero(&self.reg);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                out.accumulate(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &ExactScalar) -> ScalarPoly {
        if c.is_zero() {
            return ScalarPoly::zero(&self.reg);
        }
        ScalarPoly {
            reg: self.reg.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> ScalarPoly {
        ScalarPoly {
            reg: self.reg.clone(),
            terms: self.terms.iter().map(|(k, x)| (k.mul(m), x.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> ScalarPoly {
        (0..e).fold(ScalarPoly::one(&self.reg), |acc, _| &acc * self)
    }

    pub fn map_coefficients(&self, f: impl Fn(&ExactScalar) -> ExactScalar) -> ScalarPoly {
        let mut out = ScalarPoly::zero(&self.reg);
        for (m, c) in &self.terms {
            out.accumulate(m.clone(), f(c));
        }
        out
    }

    pub fn derivative(&self, v: VarId) -> ScalarPoly {
        let mut out = ScalarPoly::zero(&self.reg);
        for (m, c) in &self.terms {
            let (e, rest) = m.without(v);
            if e == 0 {
                continue;
            }
            let m2 = rest.mul(&Monomial::power(v, e - 1));
            out.accumulate(m2, c * &ExactScalar::from_int(e as i64));
        }
        out
    }

    /// Partial evaluation. Markers cannot be bound.
    pub fn substitute(&self, bindings: &BTreeMap<VarId, ExactScalar>) -> Result<ScalarPoly> {
        for v in bindings.keys() {
            let k = self.reg.kind(*v);
            if k.is_marker() {
                return Err(Error::MarkerSubstitution(k.name()));
            }
        }
        let mut out = ScalarPoly::zero(&self.reg);
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = Monomial::one();
            for &(v, e) in m.factors() {
                match bindings.get(&v) {
                    Some(x) => coeff = &coeff * &x.pow(e as i32),
                    None => rest = rest.mul(&Monomial::power(v, e)),
                }
            }
            out.accumulate(rest, coeff);
        }
        Ok(out)
    }

    /// Replaces `v` by a polynomial (used for rewriting rules such as the
    /// boundary-divergence identity). Markers cannot be replaced.
    pub fn substitute_poly(&self, v: VarId, by: &ScalarPoly) -> Result<ScalarPoly> {
        self.check(by)?;
        let k = self.reg.kind(v);
        if k.is_marker() {
            return Err(Error::MarkerSubstitution(k.name()));
        }
        Ok(self.replace(v, by))
    }

    /// Replaces a marker by a polynomial. Markers stay opaque everywhere
    /// else; this is only for evaluating inside an explicit geometric model.
    pub fn specialize_marker(&self, m: Marker, by: &ScalarPoly) -> Result<ScalarPoly> {
        self.check(by)?;
        Ok(self.replace(self.reg.marker(m), by))
    }

    fn replace(&self, v: VarId, by: &ScalarPoly) -> ScalarPoly {
        let mut out = ScalarPoly::zero(&self.reg);
        let mut powers: Vec<ScalarPoly> = vec![ScalarPoly::one(&self.reg)];
        for (m, c) in &self.terms {
            let (e, rest) = m.without(v);
            while powers.len() <= e as usize {
                let next = powers.last().unwrap() * by;
                powers.push(next);
            }
            for (pm, pc) in &powers[e as usize].terms {
                out.accumulate(rest.mul(pm), c * pc);
            }
        }
        out
    }

    /// Floating-point evaluation; every variable present must be bound,
    /// markers included.
    pub fn eval(&self, value: &dyn Fn(VarId) -> Option<Complex64>) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = c.to_complex64();
            for &(v, e) in m.factors() {
                let x = value(v).ok_or_else(|| Error::Unbound(self.reg.name(v)))?;
                t *= x.powu(e);
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Groups terms by their part in the variables selected by `key`:
    /// `self = Σ_k k · out[k]` with `out[k]` free of selected variables.
    pub fn collect(&self, key: impl Fn(VarId) -> bool) -> BTreeMap<Monomial, ScalarPoly> {
        let mut out: BTreeMap<Monomial, ScalarPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (k, rest) = m.partition(&key);
            out.entry(k)
                .or_insert_with(|| ScalarPoly::zero(&self.reg))
                .accumulate(rest, c.clone());
        }
        out.retain(|_, p| !p.is_zero());
        out
    }
}

impl<'a> Add<&'a ScalarPoly> for &'a ScalarPoly {
    type Output = ScalarPoly;
    /// Panics on registry mismatch; use [`ScalarPoly::try_add`] to recover.
    fn add(self, o: &ScalarPoly) -> ScalarPoly {
        self.try_add(o).expect("poly add")
    }
}

impl<'a> Sub<&'a ScalarPoly> for &'a ScalarPoly {
    type Output = ScalarPoly;
    fn sub(self, o: &ScalarPoly) -> ScalarPoly {
        self.try_sub(o).expect("poly sub")
    }
}

impl<'a> Mul<&'a ScalarPoly> for &'a ScalarPoly {
    type Output = ScalarPoly;
    fn mul(self, o: &ScalarPoly) -> ScalarPoly {
        self.try_mul(o).expect("poly mul")
    }
}

impl Neg for &ScalarPoly {
    type Output = ScalarPoly;
    fn neg(self) -> ScalarPoly {
        self.scale(&-ExactScalar::one())
    }
}

impl Neg for ScalarPoly {
    type Output = ScalarPoly;
    fn neg(self) -> ScalarPoly {
        -&self
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    fn reg() -> Arc<Registry> {
        Registry::global()
    }

    fn v(k: Kind) -> ScalarPoly {
        ScalarPoly::of(&reg(), k)
    }

    fn q(n: i64, d: i64) -> ExactScalar {
        ExactScalar::ratio(n, d)
    }

    #[test]
    fn add_cancels() {
        let (x1, x2) = (v(Kind::XiPrime(1)), v(Kind::XiPrime(2)));
        assert_eq!(&(&x1 + &x2) + &(-&x1), x2);
        let a = (&v(Kind::X(1)) * &v(Kind::Y(1))).scale(&q(5, 24));
        let b = (&v(Kind::X(1)) * &v(Kind::Y(1))).scale(&q(-1, 8));
        assert_eq!(&a + &b, (&v(Kind::X(1)) * &v(Kind::Y(1))).scale(&q(1, 12)));
        assert_eq!(&ScalarPoly::zero(&reg()) + &a, a);
    }

    #[test]
    fn mul_distributes() {
        let (x1, x2) = (v(Kind::XiPrime(1)), v(Kind::XiPrime(2)));
        let (a1, a2, b1) = (v(Kind::X(1)), v(Kind::X(2)), v(Kind::Y(1)));
        let lhs = &(&(&a1 * &x1) + &(&a2 * &x2)) * &(&b1 * &x1);
        let rhs = &(&(&a1 * &b1) * &x1.pow(2)) + &(&(&a2 * &b1) * &(&x1 * &x2));
        assert_eq!(lhs, rhs);
        let z = ScalarPoly::constant(&reg(), ExactScalar::gaussian(1, 1, 1));
        let zc = ScalarPoly::constant(&reg(), ExactScalar::gaussian(1, -1, 1));
        assert_eq!(&z * &zc, ScalarPoly::constant(&reg(), ExactScalar::from_int(2)));
    }

    #[test]
    fn substitution() {
        let r = reg();
        let xi1 = r.intern(Kind::XiPrime(1));
        let p = v(Kind::XiPrime(1)).pow(2);
        let b = BTreeMap::from([(xi1, q(1, 2))]);
        assert_eq!(p.substitute(&b).unwrap().as_constant(), Some(q(1, 4)));
        let p = &(&v(Kind::X(1)) * &v(Kind::Y(1))) * &v(Kind::XiPrime(1));
        let b0 = BTreeMap::from([(xi1, ExactScalar::zero())]);
        assert!(p.substitute(&b0).unwrap().is_zero());
        let p = &v(Kind::HPrime) * &v(Kind::XiPrime(1)).pow(2);
        let b35 = BTreeMap::from([(xi1, q(3, 5))]);
        assert_eq!(p.substitute(&b35).unwrap(), v(Kind::HPrime).scale(&q(9, 25)));
    }

    #[test]
    fn marker_substitution_rejected() {
        let r = reg();
        let pi = r.marker(Marker::Pi);
        let p = ScalarPoly::var(&r, pi);
        let b = BTreeMap::from([(pi, q(22, 7))]);
        assert!(matches!(p.substitute(&b), Err(Error::MarkerSubstitution(_))));
        assert!(p.substitute_poly(pi, &p).is_err());
    }

    #[test]
    fn registry_mismatch() {
        let other = Registry::new();
        let a = ScalarPoly::of(&reg(), Kind::X(1));
        let b = ScalarPoly::of(&other, Kind::X(1));
        assert_eq!(a.try_add(&b), Err(Error::RegistryMismatch));
        assert_eq!(a.try_mul(&b), Err(Error::RegistryMismatch));
    }

    #[test]
    fn antisymmetric_family() {
        let r = reg();
        let g = ScalarPoly::family(&r, Family::Gamma, &[1, 4, 2]);
        let h = ScalarPoly::family(&r, Family::Gamma, &[1, 2, 4]);
        assert!((&g + &h).is_zero());
        assert!(ScalarPoly::family(&r, Family::Gamma, &[1, 2, 2]).is_zero());
    }

    #[test]
    fn substitute_poly_and_derivative() {
        let r = reg();
        let x = r.intern(Kind::XiPrime(1));
        let p = v(Kind::XiPrime(1)).pow(3);
        assert_eq!(p.derivative(x), v(Kind::XiPrime(1)).pow(2).scale(&q(3, 1)));
        let s = &v(Kind::X(1)) + &v(Kind::Y(2));
        assert_eq!(p.substitute_poly(x, &s).unwrap(), s.pow(3));
    }

    #[test]
    fn degree_queries() {
        let p = &(&v(Kind::X(1)) * &v(Kind::XiPrime(1)).pow(3)) + &v(Kind::Y(2));
        assert_eq!(p.total_degree(), Some(4));
        assert_eq!(p.degree_in(reg().intern(Kind::XiPrime(1))), 3);
        assert_eq!(ScalarPoly::zero(&reg()).total_degree(), None);
    }

    pub(crate) fn arb_poly() -> impl Strategy<Value = ScalarPoly> {
        let term = (
            -20i64..20,
            1i64..6,
            -20i64..20,
            prop::collection::vec((0u8..6, 0u32..3), 0..3),
        );
        prop::collection::vec(term, 0..6).prop_map(|ts| {
            let r = reg();
            let vars = [
                Kind::XiPrime(1),
                Kind::XiPrime(2),
                Kind::X(1),
                Kind::Y(4),
                Kind::HPrime,
                Kind::Marker(Marker::Pi),
            ];
            let mut p = ScalarPoly::zero(&r);
            for (a, d, b, fs) in ts {
                let m = Monomial::from_pairs(fs.into_iter().map(|(k, e)| (r.intern(vars[k as usize].clone()), e)));
                p.accumulate(m, ExactScalar::gaussian(a, b, d));
            }
            p
        })
    }

    proptest! {
        #[test]
        fn ring_laws(p in arb_poly(), q in arb_poly(), s in arb_poly()) {
            prop_assert_eq!(&(&p + &q) + &s, &p + &(&q + &s));
            prop_assert_eq!(&p * &(&q + &s), &(&p * &q) + &(&p * &s));
            prop_assert_eq!(&p * &q, &q * &p);
            prop_assert!(p.terms().all(|(_, c)| !c.is_zero()));
        }

        #[test]
        fn substitution_is_a_homomorphism(p in arb_poly(), q in arb_poly(),
                                          vals in prop::collection::vec((-9i64..9, 1i64..7), 5)) {
            let r = reg();
            let keys = [Kind::XiPrime(1), Kind::XiPrime(2), Kind::X(1), Kind::Y(4), Kind::HPrime];
            let b: BTreeMap<VarId, ExactScalar> = keys.iter().zip(vals)
                .map(|(k, (n, d))| (r.intern(k.clone()), ExactScalar::ratio(n, d)))
                .collect();
            let lhs = (&p * &q).substitute(&b).unwrap();
            let rhs = &p.substitute(&b).unwrap() * &q.substitute(&b).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
