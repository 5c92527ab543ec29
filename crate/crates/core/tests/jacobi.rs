use phase_catenoid::catenoid::{jacobi_fields, z2_root};
use phase_catenoid::domain::{critical_placement, make_ball};
use phase_catenoid::jacobi::*;
use phase_catenoid::profile::compute_constants;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Entries of the boundary matrix computed from the closed forms written
/// out by hand, independent of the library's Jacobi-field routine.
fn det_oracle(y1: f64, y2: f64, k1: f64, k2: f64) -> f64 {
    let z1 = |y: f64| y / (1.0 + y * y).sqrt();
    let dz1 = |y: f64| (1.0 + y * y).powf(-1.5);
    let z2 = |y: f64| z1(y) * (y + (1.0 + y * y).sqrt()).ln() - 1.0;
    let dz2 = |y: f64| y / (1.0 + y * y) + (y + (1.0 + y * y).sqrt()).ln() * (1.0 + y * y).powf(-1.5);
    let a = dz1(y1) + k1 * z1(y1);
    let b = dz2(y1) + k1 * z2(y1);
    let c = dz1(y2) - k2 * z1(y2);
    let d = dz2(y2) - k2 * z2(y2);
    a * d - b * c
}

#[test]
fn determinant_matches_hand_oracle() {
    let flat = nondeg_determinant(-1.0, 1.0, 0.0, 0.0);
    assert!((flat - det_oracle(-1.0, 1.0, 0.0, 0.0)).abs() < 1e-12);
    assert!((flat - 0.5739).abs() < 1e-3);
    let ys = z2_root();
    let k = ys / (1.0 + ys * ys);
    let ball = nondeg_determinant(-ys, ys, k, k);
    assert!((ball - det_oracle(-ys, ys, k, k)).abs() < 1e-12);
    assert!((ball + 0.2853).abs() < 1e-3);
}

#[test]
fn placement_determinant_is_nonzero() {
    let ys = z2_root();
    let p = critical_placement(&make_ball((1.0 + ys * ys) / ys).unwrap()).unwrap();
    let (k1, k2) = p.kappa();
    let det = nondeg_determinant(-p.y_bar, p.y_bar, k1, k2);
    assert!((det + 0.285_306_545_034_419).abs() < 1e-7);
    let report = spectrum(-p.y_bar, p.y_bar, k1, k2, &[0], 4).unwrap();
    assert!(report.nondegenerate);
}

fn manufactured() -> (impl Fn(f64) -> f64, impl Fn(f64) -> (f64, f64)) {
    // u = z₁ z₂ with closed-form derivatives
    let u = |y: f64| {
        let j = jacobi_fields(y);
        (
            j.z1 * j.z2,
            j.dz1 * j.z2 + j.z1 * j.dz2,
            j.d2z1 * j.z2 + 2.0 * j.dz1 * j.dz2 + j.z1 * j.d2z2,
        )
    };
    let f = move |y: f64| {
        let (a, b, c) = u(y);
        apply_mode_operator(0, y, a, b, c)
    };
    let val = move |y: f64| {
        let (a, b, _) = u(y);
        (a, b)
    };
    (f, val)
}

#[test]
fn manufactured_solution_is_recovered() {
    let (f, u) = manufactured();
    let (y1, y2, k1, k2) = (-1.2, 0.9, 0.3, -0.4);
    let (u1, du1) = u(y1);
    let (u2, du2) = u(y2);
    let p = RobinProblem {
        y1,
        y2,
        mode: 0,
        kappa1: k1,
        kappa2: k2,
        g1: du1 + k1 * u1,
        g2: du2 - k2 * u2,
    };
    let exact = solve_robin_fundamental(&p, &f, 64).unwrap();
    for (y, h) in exact.y.iter().zip(&exact.h) {
        assert!((u(*y).0 - h).abs() < 1e-11);
    }
    let err = |n: usize| {
        let s = solve_robin_fd(&p, &f, n).unwrap();
        s.y.iter().zip(&s.h).fold(0.0f64, |m, (y, h)| m.max((u(*y).0 - h).abs()))
    };
    let (e1, e2, e3) = (err(100), err(200), err(400));
    let o1 = (e1 / e2).log2();
    let o2 = (e2 / e3).log2();
    assert!(o1 > 1.9 && o2 > 1.9, "orders {o1} {o2}");
}

#[test]
fn fd_converges_to_fundamental() {
    let f = |y: f64| (2.0 * y).sin() + 0.3;
    let p = RobinProblem {
        y1: -1.5,
        y2: 1.5,
        mode: 0,
        kappa1: 0.46,
        kappa2: 0.46,
        g1: 0.2,
        g2: -0.1,
    };
    let reference = solve_robin_fundamental(&p, f, 800).unwrap();
    let err = |n: usize| {
        let s = solve_robin_fd(&p, f, n).unwrap();
        let stride = 800 / n;
        (0..=n).fold(0.0f64, |m, i| m.max((s.h[i] - reference.h[i * stride]).abs()))
    };
    let (e1, e2, e3) = (err(50), err(100), err(200));
    assert!((e1 / e2).log2() > 1.9);
    assert!((e2 / e3).log2() > 1.9);
}

#[test]
fn star_norm_estimate_is_uniform() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let ys = z2_root();
    let k = ys / (1.0 + ys * ys);
    let mut ratios = Vec::new();
    for _ in 0..20 {
        let c: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
        let f = |y: f64| c[0] + c[1] * y + c[2] * (3.0 * y).cos() + c[3] * y * y;
        let p = RobinProblem {
            y1: -ys,
            y2: ys,
            mode: 0,
            kappa1: k,
            kappa2: k,
            g1: rng.random_range(-1.0..1.0),
            g2: rng.random_range(-1.0..1.0),
        };
        let h = solve_robin_fundamental(&p, f, 400).unwrap();
        ratios.push(star_norm(&h, STAR_NORM_P) / data_norm(&p, f, 400, STAR_NORM_P));
    }
    let max = ratios.iter().cloned().fold(0.0, f64::max);
    assert!(max.is_finite() && max < 100.0, "ratios {ratios:?}");
}

#[test]
fn eigenvalues_decrease_with_mode() {
    let r = spectrum(-1.0, 1.0, 0.2, 0.2, &[0, 1, 2, 3], 3).unwrap();
    for w in r.modes.windows(2) {
        for (a, b) in w[0].eigenvalues.iter().zip(&w[1].eigenvalues) {
            assert!(a > b);
        }
    }
    for m in &r.modes {
        assert!(m.drift.iter().all(|d| *d < 1e-6), "{:?}", m.drift);
    }
}

#[test]
fn flat_interval_is_nondegenerate_and_large_piece_unstable() {
    let r = spectrum(-1.0, 1.0, 0.0, 0.0, &[0], 4).unwrap();
    assert!(r.nondegenerate);
    let r = spectrum(-5.0, 5.0, 0.0, 0.0, &[0], 4).unwrap();
    assert!(r.morse_index >= 1);
    assert!(r.modes[0].eigenvalues[0] > 0.0);
}

#[test]
fn determinant_root_matches_eigenvalue_crossing() {
    let (y1, y2) = (-1.0, 1.0);
    let det = |k: f64| nondeg_determinant(y1, y2, k, k);
    let (mut lo, mut hi) = (0.3, 0.7);
    assert!(det(lo) * det(hi) < 0.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if det(lo) * det(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let k_det = 0.5 * (lo + hi);

    let eig = |k: f64| mode_spectrum(y1, y2, 0, k, k, 4, SPECTRUM_GRID).unwrap().eigenvalues;
    let (a, b) = (eig(0.3), eig(0.7));
    let j = (0..4).find(|&j| a[j] * b[j] < 0.0).expect("an eigenvalue crosses zero");
    let (mut lo, mut hi) = (0.3, 0.7);
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if eig(lo)[j] * eig(mid)[j] <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let k_eig = 0.5 * (lo + hi);
    assert!((k_det - 0.5).abs() < 1e-12);
    assert!((k_det - k_eig).abs() < 1e-6, "{k_det} {k_eig}");
}

#[test]
fn certificate_on_small_piece() {
    // z = -z₂ is positive on (-ȳ*, ȳ*)
    let (y1, y2) = (-0.5, 0.5);
    let z = |y: f64| {
        let j = jacobi_fields(y);
        (-j.z2, -j.dz2, -j.d2z2)
    };
    let c = stability_certificate(y1, y2, -1.5, -1.5, z, 11).unwrap();
    assert!(c.certified && c.margin > 0.0);
    assert!(c.sampled_min_ratio >= 0.0);
    let r = spectrum(y1, y2, -1.5, -1.5, &[0, 1, 2, 3], 3).unwrap();
    assert_eq!(r.morse_index, 0);

    let c = stability_certificate(y1, y2, 0.0, 0.0, z, 11).unwrap();
    assert!(!c.certified);

    assert!(stability_certificate(-2.0, 2.0, -1.5, -1.5, z, 1).is_err());
}

#[test]
fn quadratic_form_identity() {
    let (y1, y2, k1, k2) = (-0.5, 0.5, -1.5, -1.5);
    let z = |y: f64| {
        let j = jacobi_fields(y);
        (-j.z2, -j.dz2)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let (a, b, w) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(1.0..4.0));
        let phi = |y: f64| (a + b * (w * y).sin(), b * w * (w * y).cos());
        let q = quadratic_form(y1, y2, 0, k1, k2, phi).unwrap();
        let rho = |y: f64| (1.0 + y * y).sqrt();
        let bdry = |y: f64, sign: f64, k: f64| {
            let (zv, dz) = z(y);
            (sign * dz / zv - k) * phi(y).0.powi(2) * rho(y)
        };
        let grad = phase_catenoid::quadrature::integrate(
            |y| {
                let (p, dp) = phi(y);
                let (zv, dz) = z(y);
                (dp - p * dz / zv).powi(2) * rho(y)
            },
            y1,
            y2,
            phase_catenoid::quadrature::QuadSettings::rel(1e-13),
        )
        .unwrap()
        .value;
        let rhs = bdry(y1, -1.0, k1) + bdry(y2, 1.0, k2) + grad;
        let norm = phase_catenoid::quadrature::integrate(|y| phi(y).0.powi(2) * rho(y), y1, y2, Default::default())
            .unwrap()
            .value;
        assert!((q - rhs).abs() < 1e-6 * norm);
    }
}

#[test]
fn reduced_h_scaling() {
    let ys = z2_root();
    let p = critical_placement(&make_ball((1.0 + ys * ys) / ys).unwrap()).unwrap();
    let k = compute_constants(1e-13).unwrap();
    let h0 = solve_reduced_h(&p, 0.0, &k).unwrap();
    assert_eq!((h0.a, h0.b), (0.0, 0.0));
    let h1 = solve_reduced_h(&p, 0.1, &k).unwrap();
    let h2 = solve_reduced_h(&p, 0.2, &k).unwrap();
    for i in 0..=20 {
        let y = -ys + 2.0 * ys * i as f64 / 20.0;
        assert!((h2.eval(y).0 - 2.0 * h1.eval(y).0).abs() < 1e-12);
    }
    // the FD path reproduces the closed form, and the constant is grid-stable
    let prob = reduced_robin_problem(&p, 0.1, &k);
    let fd1 = solve_robin_fd(&prob, |_| 0.0, 200).unwrap();
    let fd2 = solve_robin_fd(&prob, |_| 0.0, 400).unwrap();
    let s1 = star_norm(&fd1, STAR_NORM_P) / 0.1;
    let s2 = star_norm(&fd2, STAR_NORM_P) / 0.1;
    assert!((s1 - h1.kappa_const).abs() < 1e-3 * h1.kappa_const);
    assert!((s2 - h1.kappa_const).abs() < (s1 - h1.kappa_const).abs().max(1e-9));
    let sup = h1.sample(400).h.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    assert!(sup <= h1.kappa_const * 0.1);
}
