use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use spaceform::ambient::AmbientSpace;
use spaceform::calculus::{jet, FnChart, JetConfig};
use spaceform::catalog::{self, CatalogEntry};
use spaceform::exec::Exec;
use spaceform::shape::{shape_operator, stress_bienergy, unit_normal, ShapeFrame};

fn entry(id: &str, pairs: &[(&str, f64)]) -> CatalogEntry {
    let params: BTreeMap<String, f64> = pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    catalog::instantiate(id, &params).unwrap()
}

fn interior_frames(e: &CatalogEntry) -> Vec<ShapeFrame> {
    let s = e.surface.sample(JetConfig::default(), Exec::Parallel).unwrap();
    s.frames.into_iter().zip(&s.mask).filter(|(_, &m)| m).map(|(f, _)| f).collect()
}

#[test]
fn stress_bienergy_of_biharmonic_hyperspheres() {
    for m in [2usize, 3] {
        let frames = interior_frames(&entry("small_hypersphere", &[("m", m as f64)]));
        let mf = m as f64;
        let expected = DMatrix::<f64>::identity(m, m) * (-mf * mf / 2.0 + 2.0 * mf);
        for fr in &frames {
            assert!((fr.f - 1.0).abs() < 1e-9);
            assert!((fr.norm_a2 - mf).abs() < 1e-8);
            assert!((stress_bienergy(fr) - &expected).amax() < 1e-8);
        }
    }
}

#[test]
fn product_and_minimal_torus_frames() {
    for fr in interior_frames(&entry("clifford_product", &[("m1", 2.0), ("m2", 1.0)])) {
        let mut l = fr.lambda.clone();
        l.iter_mut().for_each(|x| *x = (*x * 1e6).round() / 1e6);
        assert_eq!(l, vec![1.0, 1.0, -1.0]);
        assert!((fr.f - 1.0 / 3.0).abs() < 1e-9);
        assert!((fr.norm_a2 - 3.0).abs() < 1e-8);
        assert!((fr.trace_a3() - 1.0).abs() < 1e-8);
    }
    for fr in interior_frames(&entry("clifford_product", &[])) {
        assert!(fr.f.abs() < 1e-10);
        assert!((fr.lambda[0] - 1.0).abs() < 1e-9 && (fr.lambda[1] + 1.0).abs() < 1e-9);
        assert!(stress_bienergy(&fr).amax() < 1e-9);
    }
}

#[test]
fn trace_identity_on_every_catalog_entry() {
    for fam in catalog::families() {
        let e = fam.instantiate(&BTreeMap::new()).unwrap();
        let m = e.dim_m as f64;
        for fr in interior_frames(&e) {
            let lhs = stress_bienergy(&fr).trace();
            let rhs = m * m * fr.f * fr.f * (2.0 - m / 2.0);
            assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + rhs.abs()), "{}: {lhs} vs {rhs}", fam.id);
        }
    }
}

#[test]
fn flipped_entries_negate_the_shape_operator() {
    for id in ["bicons_r3", "cone_s3", "hyperbolic_sphere", "clifford_product"] {
        let e = entry(id, &[]);
        let a = interior_frames(&e);
        let b = interior_frames(&e.flipped());
        for (x, y) in a.iter().zip(&b) {
            assert!((&x.a + &y.a).amax() < 1e-12, "{id}");
            assert!((x.f + y.f).abs() < 1e-12);
            assert!((x.norm_a2 - y.norm_a2).abs() < 1e-12);
            assert!((stress_bienergy(x) - stress_bienergy(y)).amax() < 1e-12);
        }
    }
}

fn ellipsoid(a: f64, b: f64, c: f64) -> FnChart<impl Fn(&[f64]) -> DVector<f64> + Send + Sync> {
    FnChart::new(2, 3, move |x: &[f64]| {
        DVector::from_vec(vec![a * x[0].sin() * x[1].cos(), b * x[0].sin() * x[1].sin(), c * x[0].cos()])
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn orientation_flip_is_odd(
        a in 0.5f64..2.0, b in 0.5f64..2.0, c in 0.5f64..2.0,
        t in 0.3f64..2.8, p in 0.0f64..std::f64::consts::TAU,
    ) {
        let space = AmbientSpace::euclidean(3);
        let j = jet(&ellipsoid(a, b, c), &[t, p], JetConfig::default()).unwrap();
        let up = shape_operator(&j, &unit_normal(&j, &space, 1.0).unwrap(), &space).unwrap();
        let down = shape_operator(&j, &unit_normal(&j, &space, -1.0).unwrap(), &space).unwrap();
        prop_assert!((&up.eta + &down.eta).amax() < 1e-14);
        prop_assert!((&up.a + &down.a).amax() < 1e-9);
        prop_assert!((up.f + down.f).abs() < 1e-9);
        prop_assert!((up.norm_a2 - down.norm_a2).abs() < 1e-9);
        prop_assert!((stress_bienergy(&up) - stress_bienergy(&down)).amax() < 1e-9);
        // the shape operator is self-adjoint with respect to g
        let ga = &up.g * &up.a;
        prop_assert!((&ga - ga.transpose()).amax() < 1e-9);
        // Gauss equation in R^3: K = det A, and the ellipsoid is convex
        prop_assert!(up.lambda[0] * up.lambda[1] > 0.0);
    }
}
