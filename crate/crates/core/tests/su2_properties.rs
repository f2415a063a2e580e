use std::f64::consts::PI;

use proptest::prelude::*;

use trigauge::su2::{haar_class_cdf, stream_rng, ALGEBRA_TOL};
use trigauge::GroupElement;

fn element() -> impl Strategy<Value = GroupElement> {
    (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0)
        .prop_filter("non-zero", |(a, b, c, d)| {
            a * a + b * b + c * c + d * d > 1e-3
        })
        .prop_map(|(a, b, c, d)| GroupElement::new(a, b, c, d))
}

/// Matrix view `[[a + b i, c + d i], [-c + d i, a - b i]]` as (re, im) pairs.
fn matrix(g: GroupElement) -> [[(f64, f64); 2]; 2] {
    [[(g.a, g.b), (g.c, g.d)], [(-g.c, g.d), (g.a, -g.b)]]
}

fn matmul(x: [[(f64, f64); 2]; 2], y: [[(f64, f64); 2]; 2]) -> [[(f64, f64); 2]; 2] {
    let mut out = [[(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                let (a, b) = x[i][k];
                let (c, d) = y[k][j];
                out[i][j].0 += a * c - b * d;
                out[i][j].1 += a * d + b * c;
            }
        }
    }
    out
}

#[test]
fn group_laws_over_random_triples() {
    let mut rng = stream_rng(100, 0);
    for _ in 0..10_000 {
        let (g, h, k) = (
            GroupElement::haar(&mut rng),
            GroupElement::haar(&mut rng),
            GroupElement::haar(&mut rng),
        );
        assert!(((g * h) * k).approx_eq(g * (h * k), ALGEBRA_TOL));
        assert!((g * g.inverse()).approx_eq(GroupElement::IDENTITY, ALGEBRA_TOL));
        assert!((g.inverse() * g).approx_eq(GroupElement::IDENTITY, ALGEBRA_TOL));
    }
}

#[test]
fn haar_trace_mean_is_zero() {
    let mut rng = stream_rng(101, 0);
    let n = 100_000;
    let mean = (0..n)
        .map(|_| GroupElement::haar(&mut rng).trace())
        .sum::<f64>()
        / n as f64;
    assert!(mean.abs() < 0.02, "mean trace {mean}");
}

#[test]
fn haar_class_distribution_matches_sine_squared_law() {
    let mut rng = stream_rng(102, 0);
    let n = 100_000;
    let mut t: Vec<f64> = (0..n)
        .map(|_| GroupElement::haar(&mut rng).conj_class())
        .collect();
    t.sort_by(f64::total_cmp);
    let ks = t
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = haar_class_cdf(x);
            (f - i as f64 / n as f64)
                .abs()
                .max((f - (i + 1) as f64 / n as f64).abs())
        })
        .fold(0.0, f64::max);
    assert!(ks < 0.01, "KS statistic {ks}");
}

#[test]
fn class_cdf_matches_quadrature_of_density() {
    // Midpoint rule on 2 sin^2(pi t).
    let n = 20_000;
    let mut acc = 0.0;
    for i in 0..n {
        let t = (i as f64 + 0.5) / n as f64;
        acc += 2.0 * (PI * t).sin().powi(2) / n as f64;
        if (i + 1) % 5000 == 0 {
            let upper = (i + 1) as f64 / n as f64;
            assert!((acc - haar_class_cdf(upper)).abs() < 1e-8);
        }
    }
}

proptest! {
    #[test]
    fn quaternion_product_matches_matrix_product(g in element(), h in element()) {
        let via_q = matrix(g * h);
        let via_m = matmul(matrix(g), matrix(h));
        for i in 0..2 {
            for j in 0..2 {
                prop_assert!((via_q[i][j].0 - via_m[i][j].0).abs() < 1e-12);
                prop_assert!((via_q[i][j].1 - via_m[i][j].1).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn class_is_inverse_and_conjugation_invariant(g in element(), h in element()) {
        prop_assert!((g.conj_class() - g.inverse().conj_class()).abs() < 1e-12);
        prop_assert!((GroupElement::adjoint(h, g).conj_class() - g.conj_class()).abs() < 1e-10);
        let t = g.conj_class();
        prop_assert!((0.0..=1.0).contains(&t));
    }

    #[test]
    fn class_axis_round_trip(t in 0.0f64..=1.0, x in -1.0f64..1.0, y in -1.0f64..1.0, z in -1.0f64..1.0) {
        let n = (x * x + y * y + z * z).sqrt();
        prop_assume!(n > 1e-3);
        let g = GroupElement::from_class_axis(t, [x / n, y / n, z / n]).unwrap();
        prop_assert!((g.conj_class() - t).abs() < 1e-10);
        prop_assert!((g.norm() - 1.0).abs() < ALGEBRA_TOL);
    }

    #[test]
    fn serde_round_trip(g in element()) {
        let text = serde_json::to_string(&g).unwrap();
        let back: GroupElement = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, g);
    }
}
