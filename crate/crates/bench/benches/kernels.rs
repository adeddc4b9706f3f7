use criterion::{black_box, criterion_group, criterion_main, Criterion};
use einres_core::boundary::{enumerate_cases, evaluate_case};
use einres_core::paper_data::jets::Jets;
use einres_core::xi::XiRational;
use einres_core::{CliffordElement, ExactScalar, Frame, Generator, Kind, Registry, ScalarPoly, Signature};

fn scalar_poly(c: &mut Criterion) {
    let reg = Registry::global();
    let v = |k| ScalarPoly::of(&reg, k);
    let p = (1..=3).fold(v(Kind::HPrime), |acc, j| &acc + &(&v(Kind::X(j)) * &v(Kind::XiPrime(j))).scale(&ExactScalar::ratio(j as i64, 7)));
    let q = p.pow(3);
    c.bench_function("poly_mul_cubed_by_linear", |b| b.iter(|| black_box(&q) * black_box(&p)));
}

fn clifford(c: &mut Criterion) {
    let reg = Registry::global();
    let sig = Signature::new(2, 2).unwrap();
    let letters: Vec<Generator> = (0..sig.generators()).map(|b| Generator::from_bit(sig, b)).collect();
    let a = letters.iter().fold(CliffordElement::zero(sig, &reg), |acc, &g| {
        &acc + &CliffordElement::product_of(sig, &reg, &[g, letters[0]])
    });
    let b2 = &a * &a;
    c.bench_function("clifford_product", |b| b.iter(|| black_box(&b2) * black_box(&a)));
    c.bench_function("clifford_trace_product", |b| b.iter(|| CliffordElement::trace_product(black_box(&b2), black_box(&a)).unwrap()));
}

fn xi_integral(c: &mut Criterion) {
    let reg = Registry::global();
    let sig = Signature::new(2, 2).unwrap();
    let one = CliffordElement::identity(sig, &reg);
    let f = &XiRational::term(one.clone(), 3, 4, 3) + &XiRational::over_norm(one, 2, 5);
    c.bench_function("xi_pi_plus", |b| b.iter(|| black_box(&f).pi_plus()));
    c.bench_function("xi_integral", |b| b.iter(|| black_box(&f).integral().unwrap()));
}

fn boundary_case(c: &mut Criterion) {
    let reg = Registry::global();
    let frame = Frame::boundary(&reg);
    let jets = Jets::new(&frame);
    let (p, q) = (jets.d2d2_left(), jets.d2d2_right());
    let cases = enumerate_cases(4, 0, -2);
    let mut g = c.benchmark_group("boundary");
    g.sample_size(10);
    g.bench_function("evaluate_case_phi_2", |b| {
        b.iter(|| evaluate_case(black_box(&cases[1]), &p, &q, frame.signature()).unwrap())
    });
    g.finish();
}

criterion_group!(benches, scalar_poly, clifford, xi_integral, boundary_case);
criterion_main!(benches);
