use criterion::{criterion_group, criterion_main, Criterion};

use germ_core::report::GermSpec;
use germ_core::{analyze, buchberger, gram_matrix, jacobian_ideal, milnor_algebra, parse_polynomial, varset, MonomialOrder};

fn spec(poly: &str, vars: &[&str]) -> GermSpec {
    GermSpec {
        name: None,
        polynomial: poly.to_string(),
        variables: vars.iter().map(|s| s.to_string()).collect(),
        order: None,
        expect: None,
    }
}

fn bench_groebner(c: &mut Criterion) {
    let vs = varset(vec!["x", "y"]);
    let f = parse_polynomial("x^2*y^2 + x^5 + y^5", &vs).unwrap();
    let ideal = jacobian_ideal(&f).unwrap();
    c.bench_function("groebner_t_series", |b| {
        b.iter(|| buchberger(std::hint::black_box(&ideal), MonomialOrder::Grevlex))
    });
}

fn bench_gram(c: &mut Criterion) {
    let vs = varset(vec!["x", "y"]);
    let f = parse_polynomial("x^4 + y^4", &vs).unwrap();
    let a = milnor_algebra(&f, MonomialOrder::Grevlex).unwrap();
    c.bench_function("gram_quartic_pair", |b| b.iter(|| gram_matrix(std::hint::black_box(&a)).unwrap()));
}

fn bench_analyze(c: &mut Criterion) {
    let s = spec("x^3 + y^4", &["x", "y"]);
    c.bench_function("analyze_cusp_quartic", |b| b.iter(|| analyze(std::hint::black_box(&s)).unwrap()));
}

criterion_group!(benches, bench_groebner, bench_gram, bench_analyze);
criterion_main!(benches);
