use micropolar::operators::{
    curl, divergence, gradient, laplacian_vector, leray_project, multiplier_sup, resolvent_symbol, CutoffSpec,
    ResolventSpec,
};
use micropolar::spectral::random::{gaussian_scalar, gaussian_vector};
use micropolar::spectral::{inner_product, lebesgue_norm, sobolev_norm, Grid, Region, VectorField};
use micropolar::verification::{
    counterexample_residual, interpolation, liouville_ledger, transport, trilinear_nullity,
};
use proptest::prelude::*;

fn l2(v: &VectorField) -> f64 {
    sobolev_norm(v, 0.0).unwrap()
}

fn grid() -> impl Strategy<Value = Grid> {
    (prop_oneof![Just(8usize), Just(12), Just(16)], 0.5f64..3.0).prop_map(|(n, l)| Grid::new(n, l).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn parseval(g in grid(), seed in any::<u64>()) {
        let v = gaussian_vector(g, seed);
        let spectral = l2(&v);
        let physical = lebesgue_norm(&v, 2.0, Region::All).unwrap();
        prop_assert!((spectral - physical).abs() <= 1e-12 * spectral);
    }

    #[test]
    fn leray_is_an_idempotent_solenoidal_projection(g in grid(), seed in any::<u64>()) {
        let v = gaussian_vector(g, seed);
        let p = leray_project(&v);
        let pp = leray_project(&p);
        prop_assert!(l2(&(&pp - &p)) <= 1e-13 * l2(&v));
        prop_assert!(sobolev_norm(&divergence(&p), 0.0).unwrap() <= 1e-12 * sobolev_norm(&v, 1.0).unwrap());
        // Orthogonal: <Pv, v - Pv> = 0.
        prop_assert!(inner_product(&p, &(&v - &p)).unwrap().abs() <= 1e-12 * l2(&v).powi(2));
    }

    #[test]
    fn curl_curl_identity(g in grid(), seed in any::<u64>()) {
        let v = gaussian_vector(g, seed);
        let lhs = curl(&curl(&v));
        let rhs = &gradient(&divergence(&v)) - &laplacian_vector(&v);
        prop_assert!(l2(&(&lhs - &rhs)) <= 1e-12 * l2(&lhs).max(1e-300));
    }

    #[test]
    fn products_stay_hermitian(g in grid(), seed in any::<u64>()) {
        let a = gaussian_vector(g, seed);
        let b = gaussian_vector(g, seed.wrapping_add(1));
        prop_assert!(a.hermitian_defect() < 1e-14);
        prop_assert!(transport(&a, &b).hermitian_defect() < 1e-12);
        prop_assert!(gaussian_scalar(g, seed).hermitian_defect() < 1e-14);
    }

    #[test]
    fn multiplier_bound(eps in 0.01f64..1.0, sigma in 1.0f64..2.0, xi_max in 0.5f64..50.0, t in 0.0f64..1.0) {
        let spec = ResolventSpec::new(eps, sigma).unwrap();
        let sup = multiplier_sup(&spec, xi_max).unwrap();
        let xi = xi_max * t.max(1e-6);
        let value = xi.powf(2.0 * sigma) * resolvent_symbol(eps, xi * xi);
        prop_assert!(value <= sup * (1.0 + 1e-9));
    }

    #[test]
    fn interpolation_inequality(g in grid(), seed in any::<u64>()) {
        let i = interpolation(&gaussian_vector(g, seed));
        prop_assert!(i.left <= i.right * (1.0 + 1e-12));
    }

    #[test]
    fn counterexample_on_large_points(pts in prop::collection::vec(prop::array::uniform3(-100.0f64..100.0), 1..64)) {
        prop_assert!(counterexample_residual(&pts).max() < 1e-12);
    }

    #[test]
    fn trilinear_nullity_of_random_fields(seed in any::<u64>(), r in 1.0f64..1.5) {
        let g = Grid::new(12, 1.0).unwrap();
        let u = leray_project(&gaussian_vector(g, seed));
        let w = gaussian_vector(g, seed ^ 0xabcdef);
        let (a, b) = trilinear_nullity(&u, &w, &CutoffSpec::theta(r).unwrap()).unwrap();
        prop_assert!(a < 1e-8 && b < 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn liouville_left_side_is_nonnegative(seed in any::<u64>(), kappa in 1.0f64..200.0, q in 3.0f64..4.5) {
        let g = Grid::new(12, 1.0).unwrap();
        let u = leray_project(&gaussian_vector(g, seed));
        let w = gaussian_vector(g, seed.wrapping_mul(3));
        let p = gaussian_scalar(g, seed.wrapping_mul(5));
        for rep in liouville_ledger(&u, &w, &p, &[1.0, 1.5], q, kappa).unwrap() {
            prop_assert!(rep.left >= 0.0);
        }
    }
}
