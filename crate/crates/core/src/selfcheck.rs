//! Seeded property sweeps over the analytic kernels, sized so a single run
//! gives a pass/fail verdict with fixed sample counts.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::clifford::matrix::MatrixRep;
use crate::clifford::{CliffordElement, Generator, Signature};
use crate::scalar::{ExactScalar, Marker, Registry};
use crate::sphere::{moment_ratio, sphere_nodes, MomentQuery};
use crate::xi::quadrature::numeric_xi_oracle;
use crate::xi::{XiBasis, XiRational};

pub const PI_PLUS_SAMPLES: usize = 1_000;
pub const QUADRATURE_SAMPLES: usize = 150;
pub const QUADRATURE_TOLERANCE: f64 = 1e-9;
pub const SPHERE_DEGREE: u32 = 6;
pub const SPHERE_TOLERANCE: f64 = 1e-6;
pub const CLIFFORD_SAMPLES: usize = 10_000;
pub const MATRIX_SAMPLES: usize = 1_000;

#[derive(Clone, Debug, Serialize)]
pub struct PropertyOutcome {
    pub name: &'static str,
    pub samples: usize,
    pub failures: usize,
    /// Largest observed error for floating-point properties.
    pub worst: Option<f64>,
}

impl PropertyOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

struct Tally {
    name: &'static str,
    samples: usize,
    failures: usize,
    worst: Option<f64>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally { name, samples: 0, failures: 0, worst: None }
    }

    fn check(&mut self, ok: bool) {
        self.samples += 1;
        self.failures += usize::from(!ok);
    }

    fn error(&mut self, err: f64, tol: f64) {
        self.worst = Some(self.worst.map_or(err, |w: f64| w.max(err)));
        self.check(err <= tol);
    }

    fn done(self) -> PropertyOutcome {
        PropertyOutcome {
            name: self.name,
            samples: self.samples,
            failures: self.failures,
            worst: self.worst,
        }
    }
}

fn sig22() -> Signature {
    Signature::new(2, 2).expect("valid signature")
}

/// Σ (a+bi) ξ^m /((ξ−i)^p (ξ+i)^q) with small random parameters.
fn scalar_xi(rng: &mut ChaCha8Rng) -> XiRational {
    let reg = Registry::global();
    let sig = sig22();
    (0..rng.gen_range(1..5)).fold(XiRational::zero(sig, &reg), |acc, _| {
        let c = ExactScalar::gaussian(rng.gen_range(-9..10), rng.gen_range(-9..10), 1);
        let e = CliffordElement::identity(sig, &reg).scale_exact(&c);
        &acc + &XiRational::term(e, rng.gen_range(0..9), rng.gen_range(0..7), rng.gen_range(0..7))
    })
}

fn letters(rng: &mut ChaCha8Rng, sig: Signature, max: usize) -> Vec<Generator> {
    (0..rng.gen_range(0..=max))
        .map(|_| Generator::from_bit(sig, rng.gen_range(0..sig.generators())))
        .collect()
}

fn element(rng: &mut ChaCha8Rng, sig: Signature) -> CliffordElement {
    let reg = Registry::global();
    (0..rng.gen_range(1..4)).fold(CliffordElement::zero(sig, &reg), |acc, _| {
        let w = CliffordElement::product_of(sig, &reg, &letters(rng, sig, 4));
        let c = ExactScalar::gaussian(rng.gen_range(-5..6), rng.gen_range(-5..6), 1);
        &acc + &w.scale_exact(&c)
    })
}

fn pi_plus(seed: u64) -> Vec<PropertyOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idem = Tally::new("pi_plus_idempotent");
    let mut decomp = Tally::new("pi_plus_pi_minus_poly_decomposition");
    let mut ibp = Tally::new("derivative_integrates_to_zero");
    for _ in 0..PI_PLUS_SAMPLES {
        let f = scalar_xi(&mut rng);
        let p = f.pi_plus();
        idem.check(p.pi_plus() == p);
        decomp.check(&(&p + &f.pi_minus()) + &f.poly_part() == f);
        let decaying = &p + &f.pi_minus();
        ibp.check(decaying.derivative().integral().is_ok_and(|v| v.is_zero()));
    }
    vec![idem.done(), decomp.done(), ibp.done()]
}

fn quadrature(seed: u64) -> PropertyOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tally::new("xi_integral_vs_quadrature");
    let pi = Registry::global().marker(Marker::Pi);
    for _ in 0..QUADRATURE_SAMPLES {
        let g = scalar_xi(&mut rng);
        let f = &g.pi_plus() + &g.pi_minus();
        // drop the 1/ξ tail so the integral converges absolutely
        let tail = &f.coefficient(XiBasis::Plus(1)) + &f.coefficient(XiBasis::Minus(1));
        let f = &f - &XiRational::term(tail, 0, 0, 1);
        let exact = f
            .integral()
            .and_then(|v| v.scalar_part().eval(&|v| (v == pi).then_some(Complex64::new(PI, 0.0))));
        let num = numeric_xi_oracle(&f, &|_| None);
        match (exact, num) {
            (Ok(e), Ok(n)) => t.error((n - e).norm() / e.norm().max(1.0), QUADRATURE_TOLERANCE),
            _ => t.check(false),
        }
    }
    t.done()
}

fn sphere() -> PropertyOutcome {
    let mut t = Tally::new("sphere_moments_vs_quadrature");
    let nodes = sphere_nodes(8, 16);
    for a in 0..=SPHERE_DEGREE {
        for b in 0..=SPHERE_DEGREE - a {
            for c in 0..=SPHERE_DEGREE - a - b {
                let num: f64 = nodes
                    .iter()
                    .map(|(p, w)| w * p[0].powi(a as i32) * p[1].powi(b as i32) * p[2].powi(c as i32))
                    .sum();
                let ratio = moment_ratio(&MomentQuery::new([(1, a), (2, b), (3, c)]));
                let exact = ExactScalar::from_rational(ratio).to_complex64().re * 4.0 * PI;
                t.error((num - exact).abs(), SPHERE_TOLERANCE);
            }
        }
    }
    t.done()
}

fn clifford(seed: u64) -> Vec<PropertyOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let reg = Registry::global();
    let sig = sig22();
    let mut conf = Tally::new("clifford_normal_ordering_confluence");
    let mut cyc = Tally::new("clifford_trace_cyclicity");
    for _ in 0..CLIFFORD_SAMPLES {
        let (a, b, c) = (letters(&mut rng, sig, 6), letters(&mut rng, sig, 6), letters(&mut rng, sig, 6));
        let word = |l: &[Generator]| CliffordElement::product_of(sig, &reg, l);
        let (ea, eb, ec) = (word(&a), word(&b), word(&c));
        let left = &(&ea * &eb) * &ec;
        let all: Vec<Generator> = a.iter().chain(&b).chain(&c).copied().collect();
        conf.check(left == &ea * &(&eb * &ec) && left == word(&all));

        let (x, y) = (element(&mut rng, sig), element(&mut rng, sig));
        let ok = match ((&x * &y).trace(), (&y * &x).trace(), CliffordElement::trace_product(&x, &y)) {
            (Ok(p), Ok(q), Ok(r)) => p == q && p == r,
            _ => false,
        };
        cyc.check(ok);
    }
    vec![conf.done(), cyc.done()]
}

fn matrix(seed: u64) -> PropertyOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tally::new("matrix_representation_oracle");
    let sig = sig22();
    let Ok(rep) = MatrixRep::new(sig) else {
        t.check(false);
        return t.done();
    };
    for _ in 0..MATRIX_SAMPLES {
        let (a, b) = (element(&mut rng, sig), element(&mut rng, sig));
        let ok = match (rep.represent(&a), rep.represent(&b), rep.represent(&(&a * &b)), a.trace()) {
            (Ok(ma), Ok(mb), Ok(mab), Ok(tr)) => mab == ma.mul(&mb) && tr.as_constant() == Some(ma.trace()),
            _ => false,
        };
        t.check(ok);
    }
    t.done()
}

/// Runs every sweep with streams derived from `seed`.
pub fn run_properties(seed: u64) -> Vec<PropertyOutcome> {
    let mut out = pi_plus(seed);
    out.push(quadrature(seed ^ 1));
    out.push(sphere());
    out.extend(clifford(seed ^ 2));
    out.push(matrix(seed ^ 3));
    out
}
