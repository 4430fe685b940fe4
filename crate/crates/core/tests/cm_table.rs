use chudnovsky::cmcoeffs::{appendix_b_check, appendix_b_log2, cm_point, coefficient_table};
use chudnovsky::mpnum::abs_c;
use chudnovsky::piengine::formula_catalog;
use chudnovsky::PrecisionCtx;
use rug::ops::Pow;
use rug::{Complex, Integer};

// (N, c, AC, b, a) as published.
const PUBLISHED: [(u32, i64, i64, i64, i64); 11] = [
    (7, 1, 2, 756, 180),
    (8, -1, 2, 896, 320),
    (11, 1, 3, 5544, 2304),
    (12, -1, 3, 7128, 3240),
    (16, -2, 4, 48384, 25344),
    (19, 1, 5, 102600, 57600),
    (27, 1, 7, 892584, 564480),
    (28, -1, 7, 1055754, 674730),
    (43, 1, 11, 23600808, 16727040),
    (67, 1, 17, 907582536, 695819520),
    (163, 1, 41, 10996566783048, 9351571368960),
];

#[test]
fn every_row_matches_the_published_table() {
    let ctx = PrecisionCtx::new(256);
    let rows = coefficient_table(ctx).unwrap();
    let catalog = formula_catalog();
    assert_eq!(rows.len(), 11);
    for (row, &(n, c, ac, b, a)) in rows.iter().zip(PUBLISHED.iter()) {
        assert_eq!(row.n, n);
        assert_eq!(cm_point(n).unwrap().ac(), ac);
        assert_eq!(row.c, c, "c_{n}");
        assert!([-2, -1, 1].contains(&row.c));
        assert_eq!(row.b, b, "b_{n}");
        assert_eq!(row.a, a, "a_{n}");
        let spec = catalog.iter().find(|s| s.n == n).unwrap();
        assert_eq!(row.j, spec.j, "j_{n}");
        assert_eq!(row.frac, spec.frac, "frac_{n}");
        let lhs = Integer::from(row.b.square_ref());
        let rhs = Integer::from(1728 - &row.j) * n * c * Integer::from(ac).pow(4);
        assert_eq!(lhs, rhs);
        assert!(row.coarse_bounds_hold(), "coarse bounds for N={n}");
    }
}

#[test]
fn certificates_are_strict() {
    let ctx = PrecisionCtx::new(256);
    for row in coefficient_table(ctx).unwrap() {
        assert!(row.j_radius < 0.5 && row.a_radius < 0.01);
        assert!(row.coarse_a_radius <= 0.01);
        // An independent evaluation at twice the precision lies inside the radius.
        let hi = PrecisionCtx::new(512);
        let p = cm_point(row.n).unwrap().qpoint(hi).unwrap();
        let j_hi = chudnovsky::qseries::modular_j1728_certified(&p, hi).unwrap().value;
        let dj = abs_c(&Complex::with_val(hi.prec(), &j_hi - &row.j));
        assert!(dj < row.j_radius, "N={}", row.n);
        let s_hi = chudnovsky::qseries::modular_s2(&p, hi).unwrap();
        let da = abs_c(&(Complex::with_val(hi.prec(), &s_hi * &row.b) - &row.a));
        assert!(da < row.a_radius, "N={}", row.n);
    }
}

#[test]
fn trace_and_kappa_identities_all_rows() {
    let ctx = PrecisionCtx::new(256);
    for p in [7u32, 8, 11, 12, 16, 19, 27, 28, 43, 67, 163] {
        let r = appendix_b_check(p, ctx).unwrap();
        assert!(r < 1e-25, "N={p}: {}", r.to_f64());
    }
}

#[test]
fn trace_and_kappa_residual_scales_with_precision() {
    let lo = appendix_b_log2(11, PrecisionCtx::with_guard(128, 0)).unwrap();
    let hi = appendix_b_log2(11, PrecisionCtx::with_guard(256, 0)).unwrap();
    assert!(hi < lo - 100.0, "{lo} {hi}");
}
