use fractal_bem_core::galerkin::{assemble_matrix, AssemblyOptions, GalerkinSystem};
use fractal_bem_core::ifs::{fractal_dimension, SimilarityMap};
use fractal_bem_core::kernels::KernelConfig;
use fractal_bem_core::linalg::{cholesky, norm2};
use fractal_bem_core::postprocess::{
    far_field, far_field_directions, hminushalf_norm, near_field, prolong_coeffs, screened_gram,
};
use fractal_bem_core::quadrature::QuadPolicy;
use fractal_bem_core::wavelets::WaveletBasis;
use fractal_bem_core::{Attractor, Complex64, Mesh};
use proptest::prelude::*;

fn screen() -> impl Strategy<Value = Attractor> {
    prop_oneof![
        (0.05f64..0.49).prop_map(|r| Attractor::cantor_set(r).unwrap()),
        (0.1f64..0.45).prop_map(|r| Attractor::cantor_dust(r).unwrap()),
        Just(Attractor::nonhomogeneous_dust().unwrap()),
    ]
}

// Dusts need d > 1 for the single-layer energy to be finite.
fn bem_screen() -> impl Strategy<Value = Attractor> {
    prop_oneof![
        (0.05f64..0.49).prop_map(|r| Attractor::cantor_set(r).unwrap()),
        (0.26f64..0.45).prop_map(|r| Attractor::cantor_dust(r).unwrap()),
        Just(Attractor::nonhomogeneous_dust().unwrap()),
    ]
}

fn complex_vec(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec(
        (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| Complex64::new(a, b)),
        n,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn dimension_solves_moran_equation(rhos in prop::collection::vec(0.05f64..0.6, 2..6)) {
        let maps: Vec<_> = rhos.iter().enumerate()
            .map(|(i, r)| SimilarityMap::scalar(*r, i as f64).unwrap())
            .collect();
        if let Ok(d) = fractal_dimension(&maps, 2) {
            let s: f64 = rhos.iter().map(|r| r.powf(d)).sum();
            prop_assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn mesh_partitions_measure(a in screen(), frac in 0.02f64..1.0, gamma in 0.1f64..10.0) {
        let a = a.with_measure_scale(gamma).unwrap();
        let h = frac * a.diam();
        let mesh = Mesh::new(&a, h).unwrap();
        let total: f64 = mesh.measures().iter().sum();
        prop_assert!((total - gamma).abs() <= 1e-12 * gamma);
        let el = mesh.elements();
        for (i, e) in el.iter().enumerate() {
            prop_assert!(e.diam <= h * (1.0 + 1e-12));
            if let Some(p) = e.address.parent() {
                prop_assert!(a.component_diam(&p).unwrap() > h * (1.0 - 1e-12));
            }
            for f in &el[i + 1..] {
                prop_assert!(!e.address.is_prefix_of(&f.address) && !f.address.is_prefix_of(&e.address));
            }
        }
    }

    #[test]
    fn finer_meshes_are_nested(a in screen(), f1 in 0.05f64..1.0, f2 in 0.05f64..1.0) {
        let (lo, hi) = if f1 < f2 { (f1, f2) } else { (f2, f1) };
        let coarse = Mesh::new(&a, hi * a.diam()).unwrap();
        let fine = Mesh::new(&a, lo * a.diam()).unwrap();
        prop_assert!(fine.len() >= coarse.len());
        prop_assert!(coarse.parent_map(&fine).is_ok());
    }

    #[test]
    fn prolongation_preserves_coefficient_norm(a in screen(), v in complex_vec(64)) {
        let coarse = Mesh::new(&a, 0.5 * a.diam()).unwrap();
        let fine = Mesh::new(&a, 0.1 * a.diam()).unwrap();
        let c = &v[..coarse.len().min(v.len())];
        prop_assume!(c.len() == coarse.len());
        let p = prolong_coeffs(c, &coarse, &fine).unwrap();
        prop_assert!((norm2(&p) - norm2(c)).abs() <= 1e-13 * norm2(c).max(1e-300));
    }

    #[test]
    fn wavelet_round_trip_and_parseval(a in screen(), frac in 0.05f64..0.6, seed in complex_vec(300)) {
        let b = WaveletBasis::new(&a).unwrap();
        let mesh = Mesh::new(&a, frac * a.diam()).unwrap();
        prop_assume!(mesh.len() <= seed.len());
        let f = &seed[..mesh.len()];
        let c = b.analyze(&mesh, f).unwrap();
        let l2: f64 = f.iter().zip(mesh.measures()).map(|(v, m)| v.norm_sqr() * m).sum();
        prop_assert!((c.energy() - l2).abs() <= 1e-12 * l2);
        let g = b.reconstruct(&c, &mesh).unwrap();
        for (x, y) in f.iter().zip(&g) {
            prop_assert!((x - y).norm() <= 1e-11);
        }
        let l = c.energy().sqrt();
        let (lo, hi) = (b.fractional_norm(&c, -0.4).unwrap(), b.fractional_norm(&c, 0.4).unwrap());
        if b.nu0() >= 0 {
            prop_assert!(lo <= l * (1.0 + 1e-14) && l <= hi * (1.0 + 1e-14));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn galerkin_matrix_symmetric(a in bem_screen(), k in 0.1f64..10.0) {
        let mesh = Mesh::new(&a, 0.3 * a.diam()).unwrap();
        let pol = QuadPolicy::relative(0.2, true);
        let m = assemble_matrix(&mesh, &KernelConfig::helmholtz(a.n(), k).unwrap(), &pol, &AssemblyOptions::default()).unwrap();
        prop_assert!(m.is_symmetric());
    }

    #[test]
    fn screened_form_is_a_norm(a in bem_screen(), v in complex_vec(64), w in complex_vec(64), s in -3.0f64..3.0) {
        let mesh = Mesh::new(&a, 0.3 * a.diam()).unwrap();
        let n = mesh.len();
        prop_assume!(n <= 64);
        let g = screened_gram(&mesh, &QuadPolicy::relative(0.2, true), &AssemblyOptions::default()).unwrap();
        prop_assert!(cholesky(&g).is_ok());
        let (v, w) = (&v[..n], &w[..n]);
        let nv = hminushalf_norm(v, &g).unwrap();
        let nw = hminushalf_norm(w, &g).unwrap();
        let sum: Vec<Complex64> = v.iter().zip(w).map(|(a, b)| a + b).collect();
        let scaled: Vec<Complex64> = v.iter().map(|a| a * s).collect();
        prop_assert!(hminushalf_norm(&sum, &g).unwrap() <= (nv + nw) * (1.0 + 1e-12));
        prop_assert!((hminushalf_norm(&scaled, &g).unwrap() - s.abs() * nv).abs() <= 1e-12 * nv.max(1e-300));
        prop_assert!(nv > 0.0);
    }

    #[test]
    fn fields_do_not_depend_on_measure_scale(a in bem_screen(), gamma in 0.2f64..5.0, k in 0.5f64..4.0) {
        let n = a.n();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let theta = if n == 1 { [s, -s, 0.0] } else { [0.0, s, -s] };
        let pts = [[0.3, 0.8, if n == 1 { 0.0 } else { -0.7 }], [2.0, -1.0, 0.0]];
        let dirs = far_field_directions(n, k);
        let run = |g: f64| {
            let b = a.clone().with_measure_scale(g).unwrap();
            let mesh = Mesh::new(&b, 0.3 * b.diam()).unwrap();
            let sol = GalerkinSystem::assemble(&mesh, k, theta, QuadPolicy::relative(0.2, true), &AssemblyOptions::default())
                .unwrap().solve().unwrap();
            let mut v = near_field(&sol, &pts, None).unwrap();
            v.extend(far_field(&sol, &dirs, None).unwrap());
            v
        };
        for (u, v) in run(1.0).iter().zip(&run(gamma)) {
            prop_assert!((u - v).norm() <= 1e-12 * u.norm());
        }
    }
}
