//! Clifford algebra generated by c(f₁..f_p), c(h₁..h_q), ĉ(h₁..h_q).
//!
//! c-generators square to −1, ĉ-generators to +1, and all distinct
//! generators anticommute. A normal-ordered word is a bitmask; bit order
//! is the normal-ordering order (leaf < normal < hat, then by index).

pub mod matrix;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{ExactScalar, Registry, ScalarPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Signature {
    p: u8,
    q: u8,
}

impl Signature {
    pub fn new(p: u8, q: u8) -> Result<Self> {
        if p as u32 + 2 * q as u32 > 32 {
            return Err(Error::InvalidSignature {
                p,
                q,
                reason: "more than 32 generators",
            });
        }
        Ok(Self { p, q })
    }

    pub fn p(self) -> u8 {
        self.p
    }

    pub fn q(self) -> u8 {
        self.q
    }

    pub fn generators(self) -> u32 {
        self.p as u32 + 2 * self.q as u32
    }

    /// log₂ of the fiber dimension of S(F)⊗Λ(F^⊥*); needs even p.
    pub fn log2_dim(self) -> Result<u32> {
        if !self.p.is_multiple_of(2) {
            return Err(Error::InvalidSignature {
                p: self.p,
                q: self.q,
                reason: "leaf dimension must be even",
            });
        }
        Ok(self.p as u32 / 2 + self.q as u32)
    }

    pub fn dim(self) -> Result<u64> {
        Ok(1u64 << self.log2_dim()?)
    }

    fn check(self, o: Signature) -> Result<()> {
        if self == o {
            Ok(())
        } else {
            Err(Error::SignatureMismatch(self.p, self.q, o.p, o.q))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Generator {
    /// c(f_i), 1 ≤ i ≤ p.
    Leaf(u8),
    /// c(h_s), 1 ≤ s ≤ q.
    Normal(u8),
    /// ĉ(h_s), 1 ≤ s ≤ q.
    Hat(u8),
}

impl Generator {
    pub fn bit(self, sig: Signature) -> u32 {
        let (base, i, limit) = match self {
            Generator::Leaf(i) => (0, i, sig.p),
            Generator::Normal(s) => (sig.p as u32, s, sig.q),
            Generator::Hat(s) => (sig.p as u32 + sig.q as u32, s, sig.q),
        };
        assert!(i >= 1 && i <= limit, "{self:?} out of range for {sig:?}");
        base + i as u32 - 1
    }

    pub fn from_bit(sig: Signature, b: u32) -> Generator {
        let (p, q) = (sig.p as u32, sig.q as u32);
        if b < p {
            Generator::Leaf(b as u8 + 1)
        } else if b < p + q {
            Generator::Normal((b - p) as u8 + 1)
        } else {
            Generator::Hat((b - p - q) as u8 + 1)
        }
    }

    pub fn square(self) -> i8 {
        match self {
            Generator::Hat(_) => 1,
            _ => -1,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Leaf(i) => write!(f, "c(f{i})"),
            Generator::Normal(s) => write!(f, "c(h{s})"),
            Generator::Hat(s) => write!(f, "ĉ(h{s})"),
        }
    }
}

/// Normal-ordered product of distinct generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
pub struct CliffordWord(pub u32);

impl CliffordWord {
    pub const IDENTITY: CliffordWord = CliffordWord(0);

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_identity(self) -> bool {
        self.0 == 0
    }

    pub fn letters(self, sig: Signature) -> Vec<Generator> {
        (0..32)
            .filter(|b| self.0 >> b & 1 == 1)
            .map(|b| Generator::from_bit(sig, b))
            .collect()
    }

    fn hat_mask(sig: Signature) -> u32 {
        let lo = sig.p as u32 + sig.q as u32;
        ((1u64 << (lo + sig.q as u32)) - (1u64 << lo)) as u32
    }
}

/// Product of two normal-ordered words: `(sign, word)`.
pub fn word_mul(sig: Signature, a: CliffordWord, b: CliffordWord) -> (i8, CliffordWord) {
    let mut swaps = 0u32;
    let mut rest = b.0;
    while rest != 0 {
        let y = rest.trailing_zeros();
        swaps += (a.0 >> y >> 1).count_ones();
        rest &= rest - 1;
    }
    let common = a.0 & b.0;
    let negative_squares = (common & !CliffordWord::hat_mask(sig)).count_ones();
    let sign = if (swaps + negative_squares).is_multiple_of(2) { 1 } else { -1 };
    (sign, CliffordWord(a.0 ^ b.0))
}

/// Reduces an arbitrary letter sequence by adjacent swaps and
/// cancellations. Independent of [`word_mul`]; used to test it.
pub fn normal_order(sig: Signature, letters: &[Generator]) -> (i8, CliffordWord) {
    let mut w: Vec<u32> = letters.iter().map(|g| g.bit(sig)).collect();
    let mut sign = 1i8;
    let mut k = 0;
    while k + 1 < w.len() {
        if w[k] == w[k + 1] {
            sign *= Generator::from_bit(sig, w[k]).square();
            w.drain(k..k + 2);
            k = k.saturating_sub(1);
        } else if w[k] > w[k + 1] {
            w.swap(k, k + 1);
            sign = -sign;
            k = k.saturating_sub(1);
        } else {
            k += 1;
        }
    }
    (sign, CliffordWord(w.iter().fold(0, |m, b| m | 1 << b)))
}

/// Σ (ScalarPoly × normal-ordered word).
#[derive(Clone)]
pub struct CliffordElement {
    sig: Signature,
    reg: Arc<Registry>,
    terms: BTreeMap<CliffordWord, ScalarPoly>,
}

impl PartialEq for CliffordElement {
    fn eq(&self, o: &Self) -> bool {
        self.sig == o.sig && Arc::ptr_eq(&self.reg, &o.reg) && self.terms == o.terms
    }
}

impl Eq for CliffordElement {}

impl CliffordElement {
    pub fn zero(sig: Signature, reg: &Arc<Registry>) -> Self {
        Self {
            sig,
            reg: reg.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(sig: Signature, p: ScalarPoly) -> Self {
        Self::word(sig, CliffordWord::IDENTITY, p)
    }

    pub fn identity(sig: Signature, reg: &Arc<Registry>) -> Self {
        Self::scalar(sig, ScalarPoly::one(reg))
    }

    pub fn word(sig: Signature, w: CliffordWord, p: ScalarPoly) -> Self {
        let mut e = Self::zero(sig, p.registry());
        if !p.is_zero() {
            e.terms.insert(w, p);
        }
        e
    }

    pub fn generator(sig: Signature, reg: &Arc<Registry>, g: Generator) -> Self {
        Self::word(sig, CliffordWord(1 << g.bit(sig)), ScalarPoly::one(reg))
    }

    /// Product of a letter sequence, reduced.
    pub fn product_of(sig: Signature, reg: &Arc<Registry>, letters: &[Generator]) -> Self {
        let (s, w) = normal_order(sig, letters);
        Self::word(sig, w, ScalarPoly::constant(reg, ExactScalar::from_int(s as i64)))
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

    pub fn terms(&self) -> impl Iterator<Item = (&CliffordWord, &ScalarPoly)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: CliffordWord) -> ScalarPoly {
        self.terms
            .get(&w)
            .cloned()
            .unwrap_or_else(|| ScalarPoly::zero(&self.reg))
    }

    pub fn scalar_part(&self) -> ScalarPoly {
        self.coefficient(CliffordWord::IDENTITY)
    }

    fn check(&self, o: &CliffordElement) -> Result<()> {
        self.sig.check(o.sig)?;
        if Arc::ptr_eq(&self.reg, &o.reg) {
            Ok(())
        } else {
            Err(Error::RegistryMismatch)
        }
    }

    fn accumulate(&mut self, w: CliffordWord, p: ScalarPoly) {
        if p.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(p);
            }
            Entry::Occupied(mut e) => {
                let s = e.get() + &p;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn try_add(&self, o: &CliffordElement) -> Result<CliffordElement> {
        self.check(o)?;
        let mut out = self.clone();
        for (w, p) in &o.terms {
            out.accumulate(*w, p.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, o: &CliffordElement) -> Result<CliffordElement> {
        self.try_add(&-o)
    }

    pub fn try_mul(&self, o: &CliffordElement) -> Result<CliffordElement> {
        self.check(o)?;
        let mut out = CliffordElement::zero(self.sig, &self.reg);
        for (wa, pa) in &self.terms {
            for (wb, pb) in &o.terms {
                let (s, w) = word_mul(self.sig, *wa, *wb);
                let p = pa.try_mul(pb)?;
                out.accumulate(w, if s < 0 { -p } else { p });
            }
        }
        Ok(out)
    }

    /// Multiplication by a commuting scalar polynomial.
    pub fn scale(&self, p: &ScalarPoly) -> CliffordElement {
        self.map_coefficients(|c| c * p)
    }

    pub fn scale_exact(&self, c: &ExactScalar) -> CliffordElement {
        self.map_coefficients(|p| p.scale(c))
    }

    pub fn map_coefficients(&self, f: impl Fn(&ScalarPoly) -> ScalarPoly) -> CliffordElement {
        let mut out = CliffordElement::zero(self.sig, &self.reg);
        for (w, p) in &self.terms {
            out.accumulate(*w, f(p));
        }
        out
    }

    /// Trace over the full 2^{p/2+q}-dimensional fiber.
    pub fn trace(&self) -> Result<ScalarPoly> {
        let dim = self.sig.dim()?;
        Ok(self.scalar_part().scale(&ExactScalar::from_int(dim as i64)))
    }

    /// `Tr(a·b)` without forming the product: only w·w contributes.
    pub fn trace_product(a: &CliffordElement, b: &CliffordElement) -> Result<ScalarPoly> {
        a.check(b)?;
        let dim = ExactScalar::from_int(a.sig.dim()? as i64);
        let mut acc = ScalarPoly::zero(&a.reg);
        let (small, large, flip) = if a.terms.len() <= b.terms.len() {
            (a, b, false)
        } else {
            (b, a, true)
        };
        for (w, ps) in &small.terms {
            if let Some(pl) = large.terms.get(w) {
                let (s, _) = word_mul(a.sig, *w, *w);
                let prod = if flip { pl * ps } else { ps * pl };
                acc = &acc + &prod.scale(&ExactScalar::from_int(s as i64));
            }
        }
        Ok(acc.scale(&dim))
    }
}

impl fmt::Display for CliffordElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (w, p)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({p})")?;
            for g in w.letters(self.sig) {
                write!(f, "·{g}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CliffordElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CliffordElement({self})")
    }
}

impl<'a> Add<&'a CliffordElement> for &'a CliffordElement {
    type Output = CliffordElement;
    /// Panics on signature or registry mismatch.
    fn add(self, o: &CliffordElement) -> CliffordElement {
        self.try_add(o).expect("clifford add")
    }
}

impl<'a> Sub<&'a CliffordElement> for &'a CliffordElement {
    type Output = CliffordElement;
    fn sub(self, o: &CliffordElement) -> CliffordElement {
        self.try_sub(o).expect("clifford sub")
    }
}

impl<'a> Mul<&'a CliffordElement> for &'a CliffordElement {
    type Output = CliffordElement;
    fn mul(self, o: &CliffordElement) -> CliffordElement {
        self.try_mul(o).expect("clifford mul")
    }
}

impl Neg for &CliffordElement {
    type Output = CliffordElement;
    fn neg(self) -> CliffordElement {
        self.map_coefficients(|p| -p)
    }
}

impl Neg for CliffordElement {
    type Output = CliffordElement;
    fn neg(self) -> CliffordElement {
        -&self
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::scalar::Family;
    use proptest::prelude::*;

    pub(crate) fn sig22() -> Signature {
        Signature::new(2, 2).unwrap()
    }

    fn reg() -> Arc<Registry> {
        Registry::global()
    }

    fn g(x: Generator) -> CliffordElement {
        CliffordElement::generator(sig22(), &reg(), x)
    }

    fn int(n: i64) -> CliffordElement {
        CliffordElement::scalar(sig22(), ScalarPoly::constant(&reg(), ExactScalar::from_int(n)))
    }

    #[test]
    fn relations() {
        let f1 = g(Generator::Leaf(1));
        let f2 = g(Generator::Leaf(2));
        let hh1 = g(Generator::Hat(1));
        let h1 = g(Generator::Normal(1));
        assert_eq!(&f1 * &f1, int(-1));
        assert_eq!(&hh1 * &hh1, int(1));
        assert!((&(&f1 * &f2) + &(&f2 * &f1)).is_zero());
        assert!((&(&h1 * &hh1) + &(&hh1 * &h1)).is_zero());
    }

    #[test]
    fn traces() {
        let s = sig22();
        assert_eq!(int(1).trace().unwrap().as_constant(), Some(ExactScalar::from_int(8)));
        let f12 = &g(Generator::Leaf(1)) * &g(Generator::Leaf(2));
        assert!(f12.trace().unwrap().is_zero());
        let hh = &g(Generator::Hat(1)) * &g(Generator::Hat(1));
        let cc = &g(Generator::Normal(1)) * &g(Generator::Normal(1));
        assert_eq!((&hh - &cc).trace().unwrap().as_constant(), Some(ExactScalar::from_int(16)));
        let odd = CliffordElement::identity(Signature::new(3, 1).unwrap(), &reg());
        assert!(matches!(odd.trace(), Err(Error::InvalidSignature { .. })));
        assert_eq!(s.dim().unwrap(), 8);
    }

    #[test]
    fn signature_mismatch() {
        let a = int(1);
        let b = CliffordElement::identity(Signature::new(4, 2).unwrap(), &reg());
        assert!(matches!(a.try_mul(&b), Err(Error::SignatureMismatch(..))));
    }

    #[test]
    fn symmetric_contraction_of_antisymmetric_family_vanishes() {
        // Σ_{k,l} Γ(a;k,l) δ_kl = 0 structurally, and Σ Γ(a;k,l) c_k c_l has no scalar part
        let r = reg();
        let mut sym = CliffordElement::zero(sig22(), &r);
        let mut anti = CliffordElement::zero(sig22(), &r);
        for k in 1..=2u8 {
            for l in 1..=2u8 {
                let gam = ScalarPoly::family(&r, Family::Gamma, &[3, k, l]);
                if k == l {
                    sym = &sym + &CliffordElement::scalar(sig22(), gam.clone());
                }
                let w = &g(Generator::Leaf(k)) * &g(Generator::Leaf(l));
                anti = &anti + &w.scale(&gam);
            }
        }
        assert!(sym.is_zero());
        assert!(anti.trace().unwrap().is_zero());
        assert!(!anti.is_zero());
    }

    fn arb_letters(sig: Signature) -> impl Strategy<Value = Vec<Generator>> {
        prop::collection::vec(0..sig.generators(), 0..7)
            .prop_map(move |bs| bs.into_iter().map(|b| Generator::from_bit(sig, b)).collect())
    }

    pub(crate) fn arb_element(sig: Signature) -> impl Strategy<Value = CliffordElement> {
        prop::collection::vec((arb_letters(sig), -5i64..6, -5i64..6), 1..4).prop_map(move |ts| {
            let r = reg();
            ts.into_iter().fold(CliffordElement::zero(sig, &r), |acc, (ls, a, b)| {
                let w = CliffordElement::product_of(sig, &r, &ls[..ls.len().min(4)]);
                &acc + &w.scale_exact(&ExactScalar::gaussian(a, b, 1))
            })
        })
    }

    fn confluence(sig: Signature, a: Vec<Generator>, b: Vec<Generator>, c: Vec<Generator>) {
        let r = reg();
        let (ea, eb, ec) = (
            CliffordElement::product_of(sig, &r, &a),
            CliffordElement::product_of(sig, &r, &b),
            CliffordElement::product_of(sig, &r, &c),
        );
        let left = &(&ea * &eb) * &ec;
        let right = &ea * &(&eb * &ec);
        let all: Vec<Generator> = a.iter().chain(&b).chain(&c).copied().collect();
        assert_eq!(left, right);
        assert_eq!(left, CliffordElement::product_of(sig, &r, &all));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn confluent_22(a in arb_letters(sig22()), b in arb_letters(sig22()), c in arb_letters(sig22())) {
            confluence(sig22(), a, b, c);
        }

        #[test]
        fn confluent_42(a in arb_letters(Signature::new(4, 2).unwrap()),
                        b in arb_letters(Signature::new(4, 2).unwrap()),
                        c in arb_letters(Signature::new(4, 2).unwrap())) {
            confluence(Signature::new(4, 2).unwrap(), a, b, c);
        }

        #[test]
        fn trace_cyclic(a in arb_element(sig22()), b in arb_element(sig22())) {
            let ab = (&a * &b).trace().unwrap();
            prop_assert_eq!(&ab, &(&b * &a).trace().unwrap());
            prop_assert_eq!(ab, CliffordElement::trace_product(&a, &b).unwrap());
        }
    }
}
