use super::*;
use crate::quad::{Grid, GridFunction};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

fn params(beta: C, m: C) -> WhittakerParams {
    WhittakerParams::new(beta, m)
}

fn rel(a: C, b: C) -> f64 {
    (a - b).norm() / b.norm()
}

#[test]
fn hydrogen_ground_state() {
    let records = eigenvalues(WhittakerParams::real(2.0, 0.5), 3).unwrap();
    assert_eq!(records.len(), 4);
    assert_eq!(records[0].lambda, c(-1.0, 0.0));
    assert_eq!(records[0].kind, EigenKind::Eigenvalue);
    for r in &records {
        let n = (r.n + 1) as f64;
        assert!((r.lambda.re + 1.0 / (n * n)).abs() < 1e-15);
    }
}

#[test]
fn repulsive_coulomb_has_no_eigenvalues() {
    let records = eigenvalues(WhittakerParams::real(-1.0, 0.0), 10).unwrap();
    assert!(records.iter().all(|r| r.kind == EigenKind::Resonance));
}

#[test]
fn lonely_eigenvalue_below_minus_half() {
    let records = eigenvalues(WhittakerParams::real(-1.0, -0.75), 10).unwrap();
    let eig: Vec<_> = records.iter().filter(|r| r.kind == EigenKind::Eigenvalue).collect();
    assert_eq!(eig.len(), 1);
    assert_eq!(eig[0].n, 0);
    // -beta^2 / (4 (m + 1/2)^2) with (m + 1/2)^2 = 1/16.
    assert_eq!(eig[0].lambda, c(-4.0, 0.0));
}

#[test]
fn eigenvalue_edge_cases() {
    assert!(eigenvalues(WhittakerParams::real(0.0, 1.3), 5).unwrap().is_empty());
    let skipped = eigenvalues(WhittakerParams::real(1.0, -0.5), 3).unwrap();
    assert_eq!(skipped.iter().map(|r| r.n).collect::<Vec<_>>(), vec![1, 2, 3]);
    let upper = eigenvalues(WhittakerParams::real(1.0, 0.5), 2).unwrap();
    assert_eq!(skipped[0].lambda, upper[0].lambda);
    assert_eq!(eigenvalues(WhittakerParams::real(0.0, -0.5), 3), Err(Error::SingularFamilyPoint));
    assert!(matches!(eigenvalues(WhittakerParams::real(1.0, -1.0), 3), Err(Error::Domain(_))));
    assert_eq!(classify(c(1.0, 0.0), c(0.0, 0.0)), EigenKind::Undefined);
    assert_eq!(classify(c(1.0, 0.0), c(0.0, -2.4)), EigenKind::Resonance);
}

#[test]
fn classification_matches_pole_half_plane() {
    for &(b, m) in &[(c(1.0, 0.3), c(-0.75, -2.4)), (c(-0.4, 1.0), c(0.2, 0.7)), (c(0.0, 1.0), c(1.5, -1.0))] {
        for r in eigenvalues(params(b, m), 6).unwrap() {
            let expected = if r.k_pole.re > 0.0 { EigenKind::Eigenvalue } else { EigenKind::Resonance };
            assert_eq!(r.kind, expected);
            assert!(rel(-r.k_pole * r.k_pole, r.lambda) < 1e-15);
        }
    }
}

#[test]
fn resolvent_free_half_integer() {
    let r = resolvent_kernel(WhittakerParams::real(0.0, 0.5), c(1.0, 0.0), 1.0, 2.0).unwrap();
    let exact = 1f64.sinh() * (-2f64).exp();
    assert!(rel(r.value, c(exact, 0.0)) < 1e-14);
}

#[test]
fn resolvent_is_symmetric() {
    let p = params(c(0.7, -0.2), c(0.35, 0.4));
    let k = c(0.9, 0.3);
    let a = resolvent_kernel(p, k, 1.0, 2.0).unwrap().value;
    let b = resolvent_kernel(p, k, 2.0, 1.0).unwrap().value;
    assert_eq!(a, b);
}

#[test]
fn resolvent_at_minus_half_equals_plus_half() {
    let k = c(1.0, 0.0);
    let lower = resolvent_kernel(WhittakerParams::real(1.0, -0.5), k, 1.0, 1.0).unwrap().value;
    let upper = resolvent_kernel(WhittakerParams::real(1.0, 0.5), k, 1.0, 1.0).unwrap().value;
    assert_eq!(lower, upper);
    assert_eq!(resolvent_kernel(WhittakerParams::real(0.0, -0.5), k, 1.0, 1.0), Err(Error::SingularFamilyPoint));
}

#[test]
fn resolvent_reference_values() {
    // mpmath, 30 digits: Gamma(1/2+m-b)/(2k) whitm/Gamma(1+2m) * whitw.
    let r1 = resolvent_kernel(WhittakerParams::real(0.4, 0.3), c(1.1, 0.2), 0.7, 1.9).unwrap().value;
    assert!(rel(r1, c(0.139247490998968388, -0.0653231449630914420)) < 1e-12);
    let r2 = resolvent_kernel(params(c(1.0, -0.5), c(0.2, 0.4)), c(0.8, 0.0), 2.5, 0.6).unwrap().value;
    assert!(rel(r2, c(-0.0470555232799235835, -0.237807576118207593)) < 1e-12);
}

#[test]
fn resolvent_errors() {
    let p = WhittakerParams::real(2.0, 0.5);
    assert!(matches!(resolvent_kernel(p, c(1.0, 0.0), 1.0, 1.0), Err(Error::PoleAtEigenvalue(_))));
    assert!(matches!(resolvent_kernel(p, c(-1.0, 0.0), 1.0, 1.0), Err(Error::Domain(_))));
    assert!(matches!(resolvent_kernel(p, c(0.0, 1.0), 1.0, 1.0), Err(Error::Domain(_))));
}

#[test]
fn resolvent_dilation_covariance() {
    let p = params(c(0.6, 0.2), c(0.3, -0.1));
    let k = c(0.8, 0.1);
    let (x, y) = (0.9, 2.3);
    let base = resolvent_kernel(p, k, x, y).unwrap().value;
    for s in [0.5, 2.0, 3.7] {
        let scaled = params(p.beta * s, p.m);
        let value = resolvent_kernel(scaled, k * s, x / s, y / s).unwrap().value * s;
        assert!(rel(value, base) < 1e-10, "s = {s}");
    }
}

#[test]
fn resolvent_pole_is_simple() {
    let p = WhittakerParams::real(1.5, 0.3);
    let pole = eigenvalues(p, 0).unwrap()[0].k_pole;
    let mut products = Vec::new();
    for radius in [1e-2, 1e-3, 1e-4] {
        for j in 0..8 {
            let k = pole + C::from_polar(radius, j as f64 * PI / 4.0);
            products.push(resolvent_kernel(p, k, 0.8, 1.6).unwrap().value.norm() * radius);
        }
    }
    let (lo, hi) = products.iter().fold((f64::MAX, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
    assert!(lo > 0.0 && hi / lo < 1.05, "{lo} {hi}");
}

#[test]
fn contour_integral_gives_riesz_projection() {
    for &(beta, m, n) in &[(2.0, 0.5, 0), (2.0, 0.5, 1), (1.5, 0.3, 0)] {
        let p = WhittakerParams::real(beta, m);
        let pole = eigenvalues(p, n).unwrap()[n].k_pole;
        let radius = 0.3 * pole.re.min((pole - eigenvalues(p, n + 1).unwrap()[n + 1].k_pole).norm());
        let (x, y) = (0.7, 1.9);
        let contour = contour_projection(p, pole, radius, 64, x, y).unwrap();
        let exact = riesz_projection_kernel(p, n, x, y).unwrap().value;
        assert!(rel(contour, exact) < 1e-6, "{beta} {m} {n}: {contour} vs {exact}");
    }
}

#[test]
fn riesz_ground_state_closed_form() {
    // beta = 2, m = 1/2, N = 0: 4 x y e^{-x-y}.
    let v = riesz_projection_kernel(WhittakerParams::real(2.0, 0.5), 0, 0.3, 1.7).unwrap().value;
    assert!(rel(v, c(4.0 * 0.3 * 1.7 * (-2.0f64).exp(), 0.0)) < 1e-14);
    assert_eq!(
        riesz_projection_kernel(WhittakerParams::real(-2.0, 0.5), 0, 1.0, 1.0).unwrap_err(),
        Error::NotAnEigenvalue(0)
    );
    assert_eq!(
        riesz_projection_kernel(WhittakerParams::real(1.0, -0.5), 0, 1.0, 1.0).unwrap_err(),
        Error::NotAnEigenvalue(0)
    );
    let routed = riesz_projection_kernel(WhittakerParams::real(1.0, -0.5), 2, 0.4, 1.1).unwrap().value;
    let upper = riesz_projection_kernel(WhittakerParams::real(1.0, 0.5), 1, 0.4, 1.1).unwrap().value;
    assert_eq!(routed, upper);
}

#[test]
fn riesz_idempotent_with_unit_trace() {
    let p = WhittakerParams::real(2.0, 0.5);
    let grid = Grid::graded(1e-4, 1.0, 60.0);
    let kernel = |x: f64, y: f64| riesz_projection_kernel(p, 0, x, y).unwrap().value;
    let trace = grid.integrate(grid.nodes.iter().map(|&x| kernel(x, x)));
    assert!((trace - 1.0).norm() < 1e-6);
    let (x, y) = (0.6, 2.2);
    let square = grid.integrate(grid.nodes.iter().map(|&z| kernel(x, z) * kernel(z, y)));
    assert!(rel(square, kernel(x, y)) < 1e-6);
}

#[test]
fn riesz_column_is_an_eigenfunction() {
    let p = WhittakerParams::real(1.5, 0.3);
    let lambda = eigenvalues(p, 0).unwrap()[0].lambda;
    let grid = Grid::trapezoid(0.5, 6.0, 5500);
    let column = grid.sample(|x| riesz_projection_kernel(p, 0, x, 1.0).unwrap().value);
    let applied = apply_operator_fd(p, &column);
    let (mut residual, mut norm) = (0.0, 0.0);
    for (i, v) in applied.iter().enumerate() {
        residual += (v - lambda * column.values[i + 1]).norm_sqr();
        norm += (lambda * column.values[i + 1]).norm_sqr();
    }
    assert!((residual / norm).sqrt() < 1e-5);
}

#[test]
fn boundary_values_free_half_integer() {
    let p = WhittakerParams::real(0.0, 0.5);
    let k = 1.3;
    let (x, y) = (0.4, 2.1);
    let plus = resolvent_boundary_kernel(p, k, Sign::Plus, x, y).unwrap().value;
    let minus = resolvent_boundary_kernel(p, k, Sign::Minus, y, x).unwrap().value;
    let expected = (k * x).sin() / k * C::from_polar(1.0, k * y);
    assert!(rel(plus, expected) < 1e-13);
    assert!(rel(minus, expected.conj()) < 1e-13);
}

#[test]
fn boundary_values_reference() {
    let p = WhittakerParams::real(0.4, 0.3);
    let plus = resolvent_boundary_kernel(p, 1.0, Sign::Plus, 0.7, 1.9).unwrap();
    let minus = resolvent_boundary_kernel(p, 1.0, Sign::Minus, 1.9, 0.7).unwrap();
    assert!(rel(plus.value, c(-0.702629371367298152, 0.376102333878670009)) < 1e-12);
    assert!(rel(minus.value, c(-0.702629371367298152, -0.376102333878670009)) < 1e-12);
    let jump = (plus.value - minus.value) / (C::i() * 2.0 * PI);
    let density = spectral_density_kernel(p, 1.0, 0.7, 1.9).unwrap().value;
    assert!(rel(jump, density) < 1e-10);
    assert!(rel(density, c(0.119717091090377437, 0.0)) < 1e-12);
}

#[test]
fn boundary_values_are_limits_of_the_resolvent() {
    let p = params(c(0.5, 0.1), c(0.2, 0.05));
    let k = 0.9;
    let eps = 1e-7;
    for (side, kappa) in [(Sign::Plus, c(eps, -k)), (Sign::Minus, c(eps, k))] {
        let limit = resolvent_boundary_kernel(p, k, side, 0.8, 1.7).unwrap().value;
        let near = resolvent_kernel(p, kappa, 0.8, 1.7).unwrap().value;
        assert!(rel(near, limit) < 1e-6, "{side:?}: {near} vs {limit}");
    }
}

#[test]
fn exceptional_energies_are_refused() {
    // i beta / (N + m + 1/2) real: beta = i, m = 0.3 gives k = 1/(2 (N + 0.8)) on the minus side.
    let p = params(c(0.0, 1.0), c(0.3, 0.0));
    let minus = exceptional_energies(p, Sign::Minus, 2);
    assert_eq!(minus.len(), 3);
    assert!((minus[0] - 0.625).abs() < 1e-15);
    assert!(exceptional_energies(p, Sign::Plus, 2).is_empty());
    assert!(matches!(resolvent_boundary_kernel(p, minus[1], Sign::Minus, 1.0, 1.0), Err(Error::ExceptionalEnergy(_))));
    assert!(resolvent_boundary_kernel(p, minus[1], Sign::Plus, 1.0, 1.0).is_ok());
    assert!(matches!(spectral_density_kernel(p, minus[0], 1.0, 1.0), Err(Error::ExceptionalEnergy(_))));
}

#[test]
fn density_free_half_integer() {
    let v = spectral_density_kernel(WhittakerParams::real(0.0, 0.5), 1.0, PI / 2.0, PI / 2.0).unwrap().value;
    assert!(rel(v, c(1.0 / PI, 0.0)) < 1e-14);
}

#[test]
fn density_complex_reference() {
    let v = spectral_density_kernel(params(c(0.4, 0.2), c(0.3, -0.1)), 1.3, 0.7, 1.9).unwrap().value;
    assert!(rel(v, c(0.00165626185306537443, -0.0872019385779078317)) < 1e-11);
}

fn bump_grid(h: f64) -> GridFunction {
    let n = (40.0 / h).round() as usize;
    let grid = Grid::trapezoid(h, h * (n as f64), n - 1);
    grid.sample(|x| c((-(x - 4.0) * (x - 4.0)).exp(), 0.0))
}

#[test]
fn apply_resolvent_matches_direct_sum() {
    let p = params(c(0.5, 0.2), c(0.8, 0.0));
    let k = c(1.2, 0.1);
    let grid = Grid::trapezoid(0.05, 12.0, 239);
    let f = grid.sample(|x| c((x * 0.7).sin() * (-x / 3.0).exp(), 0.1 * x));
    let g = apply_resolvent_with(p, k, &f, Execution::Sequential).unwrap();
    for i in [0, 57, 120, 239] {
        let direct: C = (0..f.nodes.len())
            .map(|j| f.weights[j] * resolvent_kernel(p, k, f.nodes[i], f.nodes[j]).unwrap().value * f.values[j])
            .sum();
        assert!(rel(g.values[i], direct) < 1e-12);
    }
    let parallel = apply_resolvent_with(p, k, &f, Execution::Parallel).unwrap();
    assert_eq!(parallel, g);
    let zero = f.scale(c(0.0, 0.0));
    assert!(apply_resolvent(p, k, &zero).unwrap().values.iter().all(|v| v.norm() == 0.0));
}

// Measured from x = 0.25 on: nearer zero the difference quotient of
// g ~ x^{1/2+m} has an O(h^2 x^{-7/2+m}) error of its own.
fn resolvent_identity_error(p: WhittakerParams, k: C, h: f64) -> f64 {
    let f = bump_grid(h);
    let g = apply_resolvent(p, k, &f).unwrap();
    let lg = apply_operator_fd(p, &g);
    let (mut err, mut norm) = (0.0, 0.0);
    for (i, v) in lg.iter().enumerate().filter(|(i, _)| f.nodes[i + 1] >= 0.25) {
        let target = f.values[i + 1];
        err += (v + k * k * g.values[i + 1] - target).norm_sqr();
        norm += target.norm_sqr();
    }
    (err / norm).sqrt()
}

#[test]
fn resolvent_inverts_the_operator() {
    let p = WhittakerParams::real(0.5, 0.8);
    let k = c(1.2, 0.0);
    let coarse = resolvent_identity_error(p, k, 4e-3);
    let fine = resolvent_identity_error(p, k, 2e-3);
    assert!(fine < 1e-3);
    assert!((coarse / fine).log2() > 1.8, "{coarse} {fine}");
}

#[test]
fn spectrum_picture_with_extra_resonance() {
    let t = default_t_grid(50);
    let lower = spectrum_descriptor(params(c(1.0, 0.0), c(-0.75, -2.4)), 0.0, 8, &t).unwrap();
    let upper = spectrum_descriptor(params(c(1.0, 0.0), c(0.25, -2.4)), 0.0, 8, &t).unwrap();
    assert_eq!(lower.discrete[0].kind, EigenKind::Resonance);
    for n in 1..=8 {
        assert!(rel(lower.presented[n], upper.presented[n - 1]) < 1e-15);
        assert_eq!(lower.discrete[n].kind, upper.discrete[n - 1].kind);
    }
    for (d, point) in [&lower, &upper].iter().flat_map(|d| d.presented.iter().map(move |p| (d, *p))) {
        assert!(d.trajectory_residual(point) < 1e-12);
    }
    assert_eq!(lower.trajectory.len(), 51);
    assert_eq!(*lower.trajectory.last().unwrap(), c(0.0, 0.0));
}

#[test]
fn real_parameters_give_a_real_picture() {
    let d = spectrum_descriptor(WhittakerParams::real(1.3, 0.2), 0.0, 5, &default_t_grid(20)).unwrap();
    assert!(d.presented.iter().all(|p| p.im == 0.0 && p.re < 0.0));
    assert!(d.trajectory.iter().all(|p| p.im.abs() < 1e-15 && p.re <= 0.0));
    let free = spectrum_descriptor(WhittakerParams::real(0.0, 0.2), 0.3, 5, &[]).unwrap();
    assert!(free.discrete.is_empty());
    assert_eq!(free.ray_angle, -0.6);
}

#[test]
fn rotated_picture_keeps_points_fixed() {
    let m = c(-0.75, 3.2);
    let t = default_t_grid(10);
    let base = spectrum_descriptor(params(c(1.0, 0.0), m), 0.0, 6, &t).unwrap();
    let rotated = spectrum_descriptor(params(C::from_polar(1.0, PI / 2.0), m), PI / 2.0, 6, &t).unwrap();
    assert!((rotated.ray_angle + PI).abs() < 1e-15);
    for (a, b) in base.presented.iter().zip(&rotated.presented) {
        assert!(rel(*b, *a) < 1e-14);
        assert!(rotated.trajectory_residual(*b) < 1e-12);
    }
    for (a, b) in base.trajectory.iter().zip(&rotated.trajectory) {
        assert!((a - b).norm() <= 1e-14 * a.norm().max(1e-300));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn resolvent_symmetry(br in -2.0..2.0f64, bi in -1.0..1.0f64, mr in -0.9..2.5f64, mi in -1.0..1.0f64,
                          kr in 0.3..2.0f64, ki in -1.0..1.0f64, x in 0.1..5.0f64, y in 0.1..5.0f64) {
        let p = params(c(br, bi), c(mr, mi));
        let k = c(kr, ki);
        if let (Ok(a), Ok(b)) = (resolvent_kernel(p, k, x, y), resolvent_kernel(p, k, y, x)) {
            prop_assert_eq!(a.value, b.value);
        }
    }

    #[test]
    fn real_density_is_nonnegative(beta in -3.0..3.0f64, m in -0.9..3.0f64, k in 0.05..4.0f64, x in 0.01..20.0f64) {
        let v = spectral_density_kernel(WhittakerParams::real(beta, m), k, x, x).unwrap().value;
        prop_assert!(v.re >= -1e-14 * v.norm().max(1e-300));
        prop_assert!(v.im.abs() <= 1e-12 * v.norm().max(1e-300));
    }

    #[test]
    fn eigenvalues_lie_on_the_trajectory(br in -2.0..2.0f64, bi in -2.0..2.0f64, mr in -0.95..3.0f64,
                                         mi in -3.0..3.0f64, phi in -3.0..3.0f64) {
        let p = params(c(br, bi), c(mr, mi));
        prop_assume!(p.beta.norm() > 0.05);
        let phase = arg(p.beta);
        let d = spectrum_descriptor(p, phase, 10, &[]).unwrap();
        for point in &d.presented {
            prop_assert!(d.trajectory_residual(*point) < 1e-12);
        }
        let other = spectrum_descriptor(p, phi, 10, &[]).unwrap();
        for point in &other.presented {
            prop_assert!(other.trajectory_residual(*point) < 1e-12);
        }
    }
}
