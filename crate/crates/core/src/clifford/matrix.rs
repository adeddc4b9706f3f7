//! Explicit matrix representation used as an oracle for the symbolic
//! algebra. Built from Pauli blocks by Kronecker products; ĉ-generators
//! are Hermitian involutions Γ, c-generators are iΓ.

use num_complex::Complex64;

use super::{CliffordElement, CliffordWord, Signature};
use crate::error::{Error, Result};
use crate::scalar::{ExactScalar, VarId};

/// Dense square matrix over Gaussian rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    n: usize,
    data: Vec<ExactScalar>,
}

impl ExactMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![ExactScalar::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for k in 0..n {
            m.data[k * n + k] = ExactScalar::one();
        }
        m
    }

    pub fn from_rows(rows: &[&[ExactScalar]]) -> Self {
        let n = rows.len();
        let data = rows.iter().flat_map(|r| r.iter().cloned()).collect::<Vec<_>>();
        assert_eq!(data.len(), n * n);
        Self { n, data }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> &ExactScalar {
        &self.data[r * self.n + c]
    }

    pub fn kron(&self, o: &ExactMatrix) -> ExactMatrix {
        let n = self.n * o.n;
        let mut m = Self::zeros(n);
        for i in 0..self.n {
            for j in 0..self.n {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..o.n {
                    for l in 0..o.n {
                        m.data[(i * o.n + k) * n + j * o.n + l] = a * o.get(k, l);
                    }
                }
            }
        }
        m
    }

    pub fn mul(&self, o: &ExactMatrix) -> ExactMatrix {
        let n = self.n;
        let mut m = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        m.data[i * n + j] += &(a * b);
                    }
                }
            }
        }
        m
    }

    pub fn add(&self, o: &ExactMatrix) -> ExactMatrix {
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect();
        Self { n: self.n, data }
    }

    pub fn scale(&self, c: &ExactScalar) -> ExactMatrix {
        Self {
            n: self.n,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn trace(&self) -> ExactScalar {
        (0..self.n).fold(ExactScalar::zero(), |acc, k| &acc + self.get(k, k))
    }

    pub fn to_complex(&self) -> ComplexMatrix {
        ComplexMatrix {
            n: self.n,
            data: self.data.iter().map(ExactScalar::to_complex64).collect(),
        }
    }
}

/// Dense square matrix over `Complex64`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.n + c]
    }

    pub fn axpy(&mut self, a: Complex64, x: &ComplexMatrix) {
        for (d, s) in self.data.iter_mut().zip(&x.data) {
            *d += a * s;
        }
    }

    pub fn mul(&self, o: &ComplexMatrix) -> ComplexMatrix {
        let n = self.n;
        let mut m = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    m.data[i * n + j] += a * o.get(k, j);
                }
            }
        }
        m
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|k| self.get(k, k)).sum()
    }

    /// `tr(self · o)` in O(n²).
    pub fn trace_mul(&self, o: &ComplexMatrix) -> Complex64 {
        let n = self.n;
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for k in 0..n {
                acc += self.get(i, k) * o.get(k, i);
            }
        }
        acc
    }
}

fn pauli() -> [ExactMatrix; 4] {
    let (z, o, i) = (ExactScalar::zero(), ExactScalar::one(), ExactScalar::i());
    let m = |a: [&ExactScalar; 4]| {
        ExactMatrix::from_rows(&[&[a[0].clone(), a[1].clone()], &[a[2].clone(), a[3].clone()]])
    };
    [
        ExactMatrix::identity(2),
        m([&z, &o, &o, &z]),
        m([&z, &-&i, &i, &z]),
        m([&o, &z, &z, &-&o]),
    ]
}

/// Matrices for every generator of a signature with even p.
pub struct MatrixRep {
    sig: Signature,
    gens: Vec<ExactMatrix>,
}

impl MatrixRep {
    pub fn new(sig: Signature) -> Result<Self> {
        let m = sig.log2_dim()? as usize;
        let [id, s1, s2, s3] = pauli();
        let mut gens = Vec::with_capacity(2 * m);
        for k in 0..m {
            for s in [&s1, &s2] {
                let mut acc = ExactMatrix::identity(1);
                for slot in 0..m {
                    let f = match slot.cmp(&k) {
                        std::cmp::Ordering::Less => &s3,
                        std::cmp::Ordering::Equal => s,
                        std::cmp::Ordering::Greater => &id,
                    };
                    acc = acc.kron(f);
                }
                gens.push(acc);
            }
        }
        // bit b ↦ Γ_{b+1}; c-type generators get the factor i
        let i = ExactScalar::i();
        let hat_from = sig.p() as u32 + sig.q() as u32;
        let gens = gens
            .into_iter()
            .enumerate()
            .map(|(b, g)| if (b as u32) < hat_from { g.scale(&i) } else { g })
            .collect();
        Ok(Self { sig, gens })
    }

    pub fn dim(&self) -> usize {
        self.gens.first().map_or(1, ExactMatrix::size)
    }

    pub fn generator(&self, bit: u32) -> &ExactMatrix {
        &self.gens[bit as usize]
    }

    pub fn word(&self, w: CliffordWord) -> ExactMatrix {
        let mut acc = ExactMatrix::identity(self.dim());
        for b in 0..32 {
            if w.0 >> b & 1 == 1 {
                acc = acc.mul(&self.gens[b]);
            }
        }
        acc
    }

    /// Exact image of an element whose coefficients are all constants.
    pub fn represent(&self, e: &CliffordElement) -> Result<ExactMatrix> {
        if e.signature() != self.sig {
            let (s, o) = (self.sig, e.signature());
            return Err(Error::SignatureMismatch(s.p(), s.q(), o.p(), o.q()));
        }
        let mut acc = ExactMatrix::zeros(self.dim());
        for (w, p) in e.terms() {
            let c = p.as_constant().ok_or_else(|| {
                Error::Unbound(p.vars().first().map(|v| e.registry().name(*v)).unwrap_or_default())
            })?;
            acc = acc.add(&self.word(*w).scale(&c));
        }
        Ok(acc)
    }

    /// Floating image with coefficients evaluated numerically.
    pub fn represent_numeric(
        &self,
        e: &CliffordElement,
        value: &dyn Fn(VarId) -> Option<Complex64>,
        words: &WordCache,
    ) -> Result<ComplexMatrix> {
        let mut acc = ComplexMatrix::zeros(self.dim());
        for (w, p) in e.terms() {
            acc.axpy(p.eval(value)?, words.get(*w));
        }
        Ok(acc)
    }
}

/// Precomputed complex word matrices.
pub struct WordCache {
    words: std::collections::HashMap<CliffordWord, ComplexMatrix>,
}

impl WordCache {
    pub fn new(rep: &MatrixRep) -> Self {
        let n = rep.sig.generators();
        let words = (0..1u64 << n)
            .map(|w| {
                let w = CliffordWord(w as u32);
                (w, rep.word(w).to_complex())
            })
            .collect();
        Self { words }
    }

    pub fn get(&self, w: CliffordWord) -> &ComplexMatrix {
        &self.words[&w]
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::{arb_element, sig22};
    use super::*;
    use crate::clifford::Generator;
    use crate::scalar::{Registry, ScalarPoly};
    use proptest::prelude::*;
    use std::sync::OnceLock;

    fn rep() -> &'static MatrixRep {
        static R: OnceLock<MatrixRep> = OnceLock::new();
        R.get_or_init(|| MatrixRep::new(sig22()).unwrap())
    }

    #[test]
    fn eight_dimensional_relations() {
        let r = rep();
        assert_eq!(r.dim(), 8);
        let id = ExactMatrix::identity(8);
        for a in 0..6 {
            let sq = r.generator(a).mul(r.generator(a));
            let expect = if a < 4 { id.scale(&-ExactScalar::one()) } else { id.clone() };
            assert_eq!(sq, expect, "generator {a}");
            for b in 0..a {
                let anti = r.generator(a).mul(r.generator(b)).add(&r.generator(b).mul(r.generator(a)));
                assert_eq!(anti, ExactMatrix::zeros(8));
            }
        }
    }

    #[test]
    fn hat_minus_c_square_trace() {
        let reg = Registry::global();
        let s = sig22();
        let hh = CliffordElement::product_of(s, &reg, &[Generator::Hat(1), Generator::Hat(1)]);
        let cc = CliffordElement::product_of(s, &reg, &[Generator::Normal(1), Generator::Normal(1)]);
        let m = rep().represent(&(&hh - &cc)).unwrap();
        assert_eq!(m.trace(), ExactScalar::from_int(16));
        let f11 = CliffordElement::product_of(s, &reg, &[Generator::Leaf(1), Generator::Leaf(1)]);
        assert_eq!(rep().represent(&f11).unwrap().trace(), ExactScalar::from_int(-8));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn representation_is_faithful_to_products(a in arb_element(sig22()), b in arb_element(sig22())) {
            let r = rep();
            let (ma, mb) = (r.represent(&a).unwrap(), r.represent(&b).unwrap());
            prop_assert_eq!(r.represent(&(&a * &b)).unwrap(), ma.mul(&mb));
            prop_assert_eq!(ScalarPoly::constant(a.registry(), ma.trace()), a.trace().unwrap());
        }
    }
}
