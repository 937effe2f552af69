mod common;

use common::*;
use proptest::prelude::*;
use shepard_bernoulli::bench::Polynomial;
use shepard_bernoulli::gtpoly::{gt_eval, gt_minus_taylor};
use shepard_bernoulli::jets::{jet_from_callable, jet_len};
use shepard_bernoulli::{GtData, Jet, Point, Triangle};

fn point() -> impl Strategy<Value = Point> {
    (-1.0..2.0f64, -1.0..2.0f64).prop_map(|(x, y)| Point::new(x, y))
}

fn triangle() -> impl Strategy<Value = Triangle> {
    (point(), point(), point())
        .prop_map(|(a, b, c)| Triangle::new(a, b, c))
        .prop_filter("reasonably shaped", |t| t.quality() < 50.0 * t.longest_side())
}

fn data_for(f: &dyn shepard_bernoulli::Differentiable, t: Triangle, m: usize) -> GtData {
    let jets = t.v.map(|v| jet_from_callable(f, v, m - 1).unwrap());
    GtData::new(t, jets, m).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reproduces_monomials(t in triangle(), m in 1usize..=3, ab in (0usize..=3, 0usize..=3), p in point()) {
        let (a, b) = ab;
        prop_assume!(a + b <= m);
        let poly = Polynomial::monomial(a, b);
        let d = data_for(&poly, t, m);
        let want = poly.eval(p);
        let got = gt_eval(&d, p).unwrap();
        prop_assert!((got - want).abs() <= 1e-9 * (1.0 + want.abs()), "{got} vs {want}");
    }

    #[test]
    fn interpolates_vertex_values(t in triangle(), m in 1usize..=4, seed in any::<u64>()) {
        // arbitrary jets, not sampled from any one function
        let mut s = seed;
        let mut next = move || { s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407); ((s >> 11) as f64 / (1u64 << 53) as f64) * 4.0 - 2.0 };
        let jets = t.v.map(|v| Jet::from_table(v, m - 1, (0..jet_len(m - 1)).map(|_| next()).collect()).unwrap());
        let d = GtData::new(t, jets.clone(), m).unwrap();
        for (v, j) in t.v.iter().zip(&jets) {
            let got = gt_eval(&d, *v).unwrap();
            prop_assert!((got - j.value()).abs() < 1e-12 * (1.0 + j.value().abs()), "{got} vs {}", j.value());
        }
    }

    #[test]
    fn linear_case_is_lagrange(t in triangle(), f in prop::array::uniform3(-5.0..5.0f64), p in point()) {
        let jets = [0, 1, 2].map(|k| Jet::from_table(t.v[k], 0, vec![f[k]]).unwrap());
        for rot in 0..3 {
            let idx = [rot, (rot + 1) % 3, (rot + 2) % 3];
            let tr = Triangle::new(t.v[idx[0]], t.v[idx[1]], t.v[idx[2]]);
            let d = GtData::new(tr, idx.map(|k| jets[k].clone()), 1).unwrap();
            let l = t.barycentric(p).unwrap();
            let want = l[0] * f[0] + l[1] * f[1] + l[2] * f[2];
            let got = gt_eval(&d, p).unwrap();
            prop_assert!((got - want).abs() < 1e-12 * (1.0 + want.abs()), "{got} vs {want}");
        }
    }
}

fn rotated(d: &GtData, rot: usize) -> GtData {
    let idx = [rot, (rot + 1) % 3, (rot + 2) % 3];
    GtData::new(
        Triangle::new(d.triangle.v[idx[0]], d.triangle.v[idx[1]], d.triangle.v[idx[2]]),
        idx.map(|k| d.jets[k].clone()),
        d.degree,
    )
    .unwrap()
}

#[test]
fn quadratic_ignores_reference_vertex_but_cubic_does_not() {
    let mut cubic_differs = false;
    for seed in 0..30u64 {
        let pts = random_points(3, seed);
        let t = Triangle::new(pts[0], pts[1], pts[2]);
        if t.is_degenerate() {
            continue;
        }
        let probes = random_points(10, 100 + seed);
        let f = |p: Point, dx: usize, dy: usize| wave(p, dx, dy) + exp_cos(p, dx, dy);
        for m in [2, 3] {
            let d = data_for(&f, t, m);
            for p in &probes {
                let base = gt_eval(&d, *p).unwrap();
                for rot in 1..3 {
                    let other = gt_eval(&rotated(&d, rot), *p).unwrap();
                    if m == 2 {
                        assert!((base - other).abs() < 1e-11 * (1.0 + base.abs()), "{base} vs {other}");
                    } else if (base - other).abs() > 1e-6 {
                        cubic_differs = true;
                    }
                }
            }
        }
    }
    assert!(cubic_differs);
}

#[test]
fn tends_to_taylor_as_triangle_shrinks() {
    let v1 = Point::new(0.2, -0.1);
    let p = Point::new(0.45, 0.3);
    let full = jet_from_callable(&exp_cos, v1, 3).unwrap();
    let hs = [0.2, 0.1, 0.05, 0.025];
    let residuals: Vec<f64> = hs
        .iter()
        .map(|&h| {
            let t = Triangle::new(v1, v1 + Point::new(h, 0.0), v1 + Point::new(0.0, h));
            gt_minus_taylor(&data_for(&exp_cos, t, 3), &full, p).unwrap().abs()
        })
        .collect();
    let slope = loglog_slope(&hs, &residuals);
    assert!(slope >= 0.8, "slope {slope}, residuals {residuals:?}");
    assert!(gt_minus_taylor(&data_for(&exp_cos, Triangle::new(v1, v1 + Point::new(0.1, 0.0), v1 + Point::new(0.0, 0.1)), 3), &full, v1).unwrap().abs() < 1e-14);
}

#[test]
fn gradient_at_reference_vertex_converges() {
    let v1 = Point::new(0.3, 0.4);
    let dirs = [Point::new(1.0, 0.2), Point::new(-0.3, 0.9)];
    for m in [2, 3] {
        let rs = [0.2, 0.1, 0.05, 0.025];
        let errs: Vec<f64> = rs
            .iter()
            .map(|&r| {
                let t = Triangle::new(v1, v1 + r * dirs[0], v1 + r * dirs[1]);
                let d = data_for(&wave, t, m);
                let h = 1e-3 * r;
                let gx = (gt_eval(&d, v1 + Point::new(h, 0.0)).unwrap() - gt_eval(&d, v1 - Point::new(h, 0.0)).unwrap()) / (2.0 * h);
                let gy = (gt_eval(&d, v1 + Point::new(0.0, h)).unwrap() - gt_eval(&d, v1 - Point::new(0.0, h)).unwrap()) / (2.0 * h);
                (gx - wave(v1, 1, 0)).hypot(gy - wave(v1, 0, 1))
            })
            .collect();
        let slope = loglog_slope(&rs, &errs);
        assert!(slope >= m as f64 - 0.2, "m={m}: slope {slope}, errors {errs:?}");
    }
}
