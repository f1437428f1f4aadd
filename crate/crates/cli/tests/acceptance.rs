//! Acceptance criteria. Each test prints one `[PASS]`/`[FAIL]` line with the
//! measured value and the target.

use std::io::Write;

use fractal_bem::config::{Geometry, RunConfig, WaveNumberSpec};
use fractal_bem::study;
use fractal_bem_core::bessel::{j0, k0, k0_scaled, y0};
use fractal_bem_core::galerkin::{assemble_matrix, AssemblyOptions, GalerkinSystem};
use fractal_bem_core::ifs::barycentre_defect;
use fractal_bem_core::kernels::KernelConfig;
use fractal_bem_core::linalg::cholesky;
use fractal_bem_core::postprocess::{
    far_field, far_field_directions, near_field, near_field_samples, screened_gram,
};
use fractal_bem_core::quadrature::{diag_singular_part, QuadPolicy};
use fractal_bem_core::wavelets::WaveletBasis;
use fractal_bem_core::{trace_index, Attractor, Complex64, Mesh};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Bypasses the test harness capture so the lines show in every run.
fn emit(line: String) {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{line}").unwrap();
}

fn report(id: u32, what: &str, pass: bool, detail: String) {
    let tag = if pass { "PASS" } else { "FAIL" };
    emit(format!("[{tag}] criterion {id}: {what}: {detail}"));
    assert!(pass, "criterion {id} ({what}) failed: {detail}");
}

fn within(v: f64, target: f64, rel: f64) -> bool {
    (v - target).abs() <= rel * target
}

fn cantor_set(rho: f64) -> RunConfig {
    RunConfig::preset(Geometry::CantorSet { rho }, 0.1, 0)
}

fn cantor_dust(rho: f64) -> RunConfig {
    RunConfig::preset(Geometry::CantorDust { rho }, 0.1, 0)
}

#[test]
fn criterion_1_cantor_set_increment_rate() {
    let s = study::convergence(&cantor_set(1.0 / 3.0), 1..=7, None).unwrap();
    let r = s.ratio.unwrap();
    let target = 2f64.sqrt();
    report(
        1,
        "Cantor set H^-1/2 increment ratio",
        within(r, target, 0.15),
        format!("{r:.4} vs {target:.4} ± 15%"),
    );
}

#[test]
fn criterion_2_cantor_dust_increment_rate() {
    let mut all = true;
    let mut parts = Vec::new();
    for rho in [0.26, 1.0 / 3.0, 0.49] {
        let s = study::convergence(&cantor_dust(rho), 1..=5, None).unwrap();
        let r = s.ratio.unwrap();
        let target = (4.0 * rho).sqrt();
        all &= within(r, target, 0.15);
        parts.push(format!("rho={rho:.4}: {r:.4} vs {target:.4}"));
    }
    report(
        2,
        "Cantor dust H^-1/2 increment ratio",
        all,
        format!("{} (± 15%)", parts.join("; ")),
    );
}

#[test]
fn criterion_3_far_field_superconvergence() {
    let set = study::convergence(&cantor_set(1.0 / 3.0), 1..=7, None).unwrap();
    let dust = study::convergence(&cantor_dust(1.0 / 3.0), 1..=5, None).unwrap();
    let (a, b) = (set.farfield_ratio.unwrap(), dust.farfield_ratio.unwrap());
    let tb = 4.0 / 3.0;
    report(
        3,
        "far-field increment ratio",
        within(a, 2.0, 0.2) && within(b, tb, 0.2),
        format!("set {a:.4} vs 2; dust {b:.4} vs {tb:.4} (± 20%)"),
    );
}

#[test]
fn criterion_4_matrix_norms() {
    let ks = [WaveNumberSpec::Real(0.1), WaveNumberSpec::Real(5.0)];
    let rows = study::condition(&cantor_dust(1.0 / 3.0), &ks, 1..=5).unwrap();
    let t = trace_index(2, (4f64).ln() / 3f64.ln());
    let mut pass = true;
    let mut parts = Vec::new();
    for k in ks {
        let r: Vec<_> = rows.iter().filter(|r| r.k == k).collect();
        let (lo, hi) = r.iter().fold((f64::INFINITY, 0.0f64), |(a, b), x| {
            (a.min(x.norm), b.max(x.norm))
        });
        pass &= hi / lo < 2.0;
        let growth: Vec<f64> = r
            .windows(2)
            .filter(|w| w[0].level >= 2)
            .map(|w| w[1].inverse_norm / w[0].inverse_norm)
            .collect();
        pass &= growth.iter().all(|g| within(*g, 4.0 / 3.0, 0.15));
        parts.push(format!(
            "k={k}: |A| spread {:.3}, |A^-1| growth {:?}",
            hi / lo,
            growth
                .iter()
                .map(|g| (g * 1e4).round() / 1e4)
                .collect::<Vec<_>>()
        ));
    }
    report(
        4,
        "dust matrix norms",
        pass,
        format!(
            "{} (targets: spread < 2, growth 4/3 ± 15%; -2t_d = {:.3})",
            parts.join("; "),
            -2.0 * t
        ),
    );
}

#[test]
fn criterion_5_classical_limit() {
    let a = study::reference_errors(&cantor_set(0.49), 2..=6, 8, None).unwrap();
    let b = study::reference_errors(&cantor_set(0.5), 2..=6, 8, None).unwrap();
    let rel: Vec<f64> = a
        .iter()
        .zip(&b)
        .map(|(x, y)| (x.relative_error - y.relative_error).abs() / y.relative_error)
        .collect();
    let worst = rel.iter().cloned().fold(0.0, f64::max);
    report(
        5,
        "rho = 0.49 vs interval relative errors",
        worst <= 0.2,
        format!("largest level-wise discrepancy {worst:.4} (≤ 0.2)"),
    );
}

#[test]
fn criterion_6_singular_quadrature_self_convergence() {
    let att = Attractor::cantor_set(1.0 / 3.0).unwrap();
    let q: Vec<f64> = (4..=10)
        .map(|j| diag_singular_part(&att, &att.root(), 3f64.powi(-j)).unwrap())
        .collect();
    let d: Vec<f64> = q.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    // differences for j = 4..8
    let d = &d[..5];
    let ratios: Vec<f64> = d.windows(2).map(|w| w[1] / w[0]).collect();
    let geometric = ratios.iter().all(|r| *r < 1.0)
        && ratios.iter().cloned().fold(0.0, f64::max)
            / ratios.iter().cloned().fold(f64::INFINITY, f64::min)
            < 1.5;
    let aitken: Vec<f64> = q
        .windows(3)
        .map(|w| w[2] - (w[2] - w[1]).powi(2) / ((w[2] - w[1]) - (w[1] - w[0])))
        .collect();
    let spread = aitken.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - aitken.iter().cloned().fold(f64::INFINITY, f64::min);
    report(
        6,
        "diagonal singular integral self-convergence",
        geometric && spread <= 1e-5,
        format!(
            "difference ratios {:?}, extrapolated limits spread {spread:.2e} around {:.8}",
            ratios
                .iter()
                .map(|r| (r * 1e4).round() / 1e4)
                .collect::<Vec<_>>(),
            aitken.last().unwrap()
        ),
    );
}

#[test]
fn criterion_7_measure_normalisation() {
    let mut worst = 0.0f64;
    for (att, level) in [
        (Attractor::cantor_set(1.0 / 3.0).unwrap(), 4),
        (Attractor::cantor_dust(1.0 / 3.0).unwrap(), 2),
    ] {
        let n = att.n();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let theta = if n == 1 { [s, -s, 0.0] } else { [0.0, s, -s] };
        let fields: Vec<(Vec<Complex64>, Vec<Complex64>)> = [1.0, 2.7]
            .into_iter()
            .map(|g| {
                let a = att.clone().with_measure_scale(g).unwrap();
                let mesh = Mesh::level(&a, level).unwrap();
                let pol = QuadPolicy::relative(a.rho_max().powi(2), true);
                let sol =
                    GalerkinSystem::assemble(&mesh, 1.0, theta, pol, &AssemblyOptions::default())
                        .unwrap()
                        .solve()
                        .unwrap();
                (
                    near_field(&sol, &near_field_samples(n, 1.0), None).unwrap(),
                    far_field(&sol, &far_field_directions(n, 1.0), None).unwrap(),
                )
            })
            .collect();
        for (u, v) in fields[0]
            .0
            .iter()
            .chain(&fields[0].1)
            .zip(fields[1].0.iter().chain(&fields[1].1))
        {
            worst = worst.max((u - v).norm() / u.norm());
        }
    }
    report(
        7,
        "fields independent of H^d(Γ)",
        worst <= 1e-12,
        format!("max relative difference {worst:.2e} (≤ 1e-12)"),
    );
}

fn sub(name: &str, pass: bool, detail: String, failures: &mut Vec<String>) {
    emit(format!(
        "    {} {name}: {detail}",
        if pass { "ok  " } else { "FAIL" }
    ));
    if !pass {
        failures.push(name.to_string());
    }
}

#[test]
fn criterion_8_property_suites() {
    let mut failures = Vec::new();
    let presets = [
        Attractor::cantor_set(1.0 / 3.0).unwrap(),
        Attractor::cantor_dust(1.0 / 3.0).unwrap(),
        Attractor::sierpinski().unwrap(),
        Attractor::nonhomogeneous_dust().unwrap(),
    ];

    let mut worst = 0.0f64;
    for a in &presets {
        for h in [0.3, 0.05, 0.01] {
            let mesh = Mesh::new(a, h * a.diam()).unwrap();
            let total: f64 = mesh.measures().iter().sum();
            worst = worst.max((total - a.measure_scale()).abs());
        }
    }
    sub(
        "measure partition",
        worst <= 1e-12,
        format!("{worst:.1e}"),
        &mut failures,
    );

    let mut symmetric = true;
    let mut spd = true;
    for (a, levels) in [(&presets[0], 0..=6), (&presets[1], 0..=5)] {
        let pol = QuadPolicy::relative(a.rho_max().powi(2), true);
        for level in levels {
            let mesh = Mesh::level(a, level).unwrap();
            if level <= 4 {
                let k = KernelConfig::helmholtz(a.n(), 5.0).unwrap();
                symmetric &= assemble_matrix(&mesh, &k, &pol, &AssemblyOptions::default())
                    .unwrap()
                    .is_symmetric();
            }
            let g = screened_gram(&mesh, &pol, &AssemblyOptions::default()).unwrap();
            symmetric &= g.is_symmetric();
            spd &= cholesky(&g).is_ok();
        }
    }
    sub("matrix symmetry", symmetric, "exact".into(), &mut failures);
    sub(
        "screened SPD",
        spd,
        "Cholesky on set l<=6, dust l<=5".into(),
        &mut failures,
    );

    let mut gram_err = 0.0f64;
    let mut parseval = 0.0f64;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for a in [&presets[0], &presets[1], &presets[3]] {
        let b = WaveletBasis::new(a).unwrap();
        let mesh = Mesh::new(a, 0.13 * a.diam()).unwrap();
        let fs = b.basis_functions(&mesh).unwrap();
        let mu = mesh.measures();
        for (i, u) in fs.iter().enumerate() {
            for (j, v) in fs.iter().enumerate() {
                let g: f64 = u.iter().zip(v).zip(&mu).map(|((x, y), m)| x * y * m).sum();
                gram_err = gram_err.max((g - if i == j { 1.0 } else { 0.0 }).abs());
            }
        }
        let f: Vec<Complex64> = (0..mesh.len())
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let l2: f64 = f.iter().zip(&mu).map(|(v, m)| v.norm_sqr() * m).sum();
        let c = b.analyze(&mesh, &f).unwrap();
        parseval = parseval.max((c.energy() - l2).abs() / l2);
    }
    sub(
        "wavelet Gram",
        gram_err <= 1e-10,
        format!("{gram_err:.1e}"),
        &mut failures,
    );
    sub(
        "Parseval",
        parseval <= 1e-12,
        format!("{parseval:.1e}"),
        &mut failures,
    );

    let bary = presets.iter().map(barycentre_defect).fold(0.0, f64::max);
    sub(
        "barycentre fixed point",
        bary <= 1e-12,
        format!("{bary:.1e}"),
        &mut failures,
    );

    let mut asym = 0.0f64;
    for a in [&presets[0], &presets[1]] {
        let n = a.n();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let theta = if n == 1 { [s, -s, 0.0] } else { [0.0, s, -s] };
        let mesh = Mesh::level(a, 3).unwrap();
        let pol = QuadPolicy::relative(a.rho_max().powi(2), true);
        let sol = GalerkinSystem::assemble(&mesh, 1.0, theta, pol, &AssemblyOptions::default())
            .unwrap()
            .solve()
            .unwrap();
        let dirs = far_field_directions(n, 1.0);
        let far = far_field(&sol, &dirs, None).unwrap();
        let r = 1e3;
        let pts: Vec<[f64; 3]> = dirs
            .iter()
            .map(|d| [r * d[0], r * d[1], r * d[2]])
            .collect();
        let near = near_field(&sol, &pts, None).unwrap();
        for (u, f) in near.iter().zip(&far) {
            asym = asym.max((u.norm() * r.powf(n as f64 / 2.0) - f.norm()).abs() / f.norm());
        }
    }
    sub(
        "near/far consistency at R = 1e3",
        asym <= 0.02,
        format!("{asym:.2e}"),
        &mut failures,
    );

    let a = &presets[0];
    let b = WaveletBasis::new(a).unwrap();
    let t = trace_index(1, a.d());
    let levels: Vec<usize> = (2..=8).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let rows = b.inverse_estimate_check(&levels, t, 100, &mut rng).unwrap();
    let sup: Vec<f64> = rows.iter().map(|r| r.max_ratio).collect();
    let growth = study::log_slope(&sup).unwrap().exp() - 1.0;
    sub(
        "inverse estimate",
        growth < 0.05,
        format!(
            "suprema {:?}, fitted growth {:.2}% per level",
            sup.iter()
                .map(|s| (s * 1e4).round() / 1e4)
                .collect::<Vec<_>>(),
            100.0 * growth
        ),
        &mut failures,
    );

    report(
        8,
        "property suites",
        failures.is_empty(),
        format!("failed: {failures:?}"),
    );
}

#[test]
fn criterion_9_bessel_accuracy() {
    let mut r = csv::Reader::from_path(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/tests/data/bessel_reference.csv"
    ))
    .unwrap();
    let mut worst = [0.0f64; 3];
    let mut count = 0;
    for rec in r.records() {
        let rec = rec.unwrap();
        let v: Vec<f64> = rec.iter().map(|s| s.parse().unwrap()).collect();
        let (x, rj, ry, rk) = (v[0], v[1], v[2], v[3]);
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs();
        worst[0] = worst[0].max(rel(j0(x), rj));
        worst[1] = worst[1].max(rel(y0(x).unwrap(), ry));
        let mut ek = rel(k0_scaled(x).unwrap(), rk);
        let plain = rk * (-x).exp();
        if plain > 1e-300 {
            ek = ek.max(rel(k0(x).unwrap(), plain));
        }
        worst[2] = worst[2].max(ek);
        count += 1;
    }
    report(
        9,
        "Bessel J0, Y0, K0 relative accuracy",
        count > 200 && worst.iter().all(|w| *w <= 1e-7),
        format!(
            "{count} points, worst J0 {:.1e}, Y0 {:.1e}, K0 {:.1e} (≤ 1e-7)",
            worst[0], worst[1], worst[2]
        ),
    );
}
