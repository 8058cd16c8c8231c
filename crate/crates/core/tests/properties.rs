mod common;

use std::f64::consts::PI;

use num_complex::Complex64;
use skinlab::analysis::{
    classify, fit_envelope, global_envelope, localization, winding_number, winding_number_with,
    EigenClass, EnvelopeFit, DEFAULT_THETA_STEPS,
};
use skinlab::eigen::eig_sym_tridiag;
use skinlab::eigen::{det_shifted, eig_general, residual_tolerance, spectral_moments, CMatrix};
use skinlab::gauge::{gauge_vector, hermitize, ungauge};
use skinlab::lattice::{
    build_flux_twisted, build_hamiltonian, build_hatano_nelson, build_hatano_nelson_twisted,
    Boundary, LatticeParams, Regime,
};
use skinlab::solve::{solve, solve_matrix, SolveOptions};

use common::{closure_defect, matching_distance, random_instances};

fn obc(t: f64, gamma: f64, length: usize) -> LatticeParams {
    LatticeParams::obc(t, gamma, length).unwrap()
}

fn counts(p: &LatticeParams) -> (usize, usize, usize) {
    let c = classify(&solve(p, SolveOptions::default()).unwrap()).counts;
    (c.n_real, c.n_imaginary, c.n_complex)
}

#[test]
fn classify_examples() {
    assert_eq!(counts(&obc(1.0, 0.01, 100)), (100, 0, 0));
    assert_eq!(counts(&obc(1.0, 0.011, 100)).1, 10);
    assert_eq!(counts(&obc(1.0, 1.5, 50)), (0, 50, 0));
}

#[test]
fn integer_split_count_law() {
    for (t, gamma, length) in [
        (1.0, 0.02, 100),
        (1.0, 0.05, 60),
        (2.0, 0.1, 50),
        (-1.0, 0.1, 30),
        (1.0, -0.04, 81),
        (0.5, 0.125, 8),
        (1.0, 0.2, 15),
    ] {
        let p = obc(t, gamma, length);
        let Regime::IntegerSplit { m } = p.regime() else {
            panic!("{p:?} is not an integer split")
        };
        assert_eq!(counts(&p), (m, length - m, 0), "{p:?}");
    }
}

#[test]
fn zero_mode_of_an_odd_imaginary_block_counts_as_real() {
    // m = 4, block B has 5 sites and a zero mode; near-zero values are Real
    let p = obc(1.0, 0.25, 9);
    assert_eq!(p.regime(), Regime::IntegerSplit { m: 4 });
    assert_eq!(counts(&p), (5, 4, 0));
    let p = obc(1.0, 1.01, 41);
    assert_eq!(counts(&p), (1, 40, 0));
}

#[test]
fn full_regime_laws() {
    for p in [
        obc(1.0, 0.005, 150),
        obc(-2.0, 0.01, 120),
        obc(1.0, 0.0, 40),
    ] {
        assert_eq!(counts(&p), (p.length, 0, 0), "{p:?}");
    }
    for p in [obc(1.0, 1.01, 40), obc(0.3, -2.0, 64)] {
        assert_eq!(p.regime(), Regime::FullyAntiHermitizable);
        assert_eq!(counts(&p), (0, p.length, 0), "{p:?}");
    }
}

#[test]
fn classified_values_come_in_pairs() {
    for gamma in [0.01, 0.011, 0.02, 0.07, 0.3, 1.5] {
        for length in [99, 100] {
            let cs = classify(&solve(&obc(1.0, gamma, length), SolveOptions::default()).unwrap());
            for class in [EigenClass::Real, EigenClass::Imaginary] {
                let values = cs.axis_values(class);
                let n = values.len();
                for k in 0..n {
                    assert!(
                        (values[k] + values[n - 1 - k]).abs() < 1e-6,
                        "γ={gamma} L={length} {class:?}: {} vs {}",
                        values[k],
                        values[n - 1 - k]
                    );
                }
            }
        }
    }
}

#[test]
fn envelope_law_at_weak_gradient() {
    // bulk-bound states only: support at least 3 sites away from both ends
    for gamma in [0.02, 0.021] {
        let s = solve(&obc(1.0, gamma, 100), SolveOptions::with_vectors(0)).unwrap();
        let mut tested = 0;
        for v in s.eigenvectors.as_ref().unwrap() {
            let fit = fit_envelope(v, gamma).unwrap();
            let first = fit.support_mask.iter().position(|&m| m).unwrap();
            let last = fit.support_mask.iter().rposition(|&m| m).unwrap();
            if first < 3 || last + 3 >= v.len() {
                continue;
            }
            tested += 1;
            assert!(
                (fit.width_ratio() - 1.0).abs() <= 0.2,
                "γ={gamma}: x0 {:.2}, width ratio {:.3}",
                fit.center,
                fit.width_ratio()
            );
        }
        assert!(tested >= 2, "γ={gamma}: only {tested} bulk states");
    }
}

#[test]
fn monotone_dissolution() {
    let mut previous = 0;
    for k in 0..=40 {
        let gamma = 0.0025 * k as f64;
        let p = obc(1.0, gamma, 100);
        let s = solve(&p, SolveOptions::with_vectors(0)).unwrap();
        let cs = classify(&s);
        assert!(cs.counts.n_imaginary >= previous, "γ={gamma}");
        previous = cs.counts.n_imaginary;
        if cs.counts.n_real > 0 && cs.counts.n_imaginary > 0 {
            let vectors = s.eigenvectors.as_ref().unwrap();
            let mean_centroid = |class| {
                let c: Vec<f64> = cs
                    .of_class(class)
                    .map(|e| localization(&vectors[e.source_index]).unwrap().centroid)
                    .collect();
                c.iter().sum::<f64>() / c.len() as f64
            };
            assert!(
                mean_centroid(EigenClass::Imaginary) > mean_centroid(EigenClass::Real),
                "γ={gamma}"
            );
        }
    }
}

#[test]
fn imaginary_states_move_into_the_bulk() {
    let s = solve(&obc(1.0, 0.011, 100), SolveOptions::with_vectors(0)).unwrap();
    let cs = classify(&s);
    let vectors = s.eigenvectors.as_ref().unwrap();
    let mut by_magnitude: Vec<(f64, f64)> = cs
        .of_class(EigenClass::Imaginary)
        .map(|e| {
            (
                e.value.im.abs(),
                localization(&vectors[e.source_index]).unwrap().centroid,
            )
        })
        .collect();
    by_magnitude.sort_by(|a, b| a.0.total_cmp(&b.0));
    for w in by_magnitude.windows(2) {
        assert!(w[1].1 >= w[0].1 - 1e-6, "{by_magnitude:?}");
    }
}

#[test]
fn weak_gradient_states_lean_toward_the_first_site() {
    let p = obc(1.0, 0.001, 100);
    let blocks = hermitize(&p).unwrap();
    let s = eig_sym_tridiag(&blocks.block_a, true).unwrap();
    let states: Vec<_> = s
        .eigenvectors
        .unwrap()
        .iter()
        .map(|v| ungauge(&blocks.gauge, v).unwrap())
        .collect();
    for v in &states {
        let m = localization(v).unwrap();
        // the reciprocal chain has every centroid at (L+1)/2
        assert!(m.centroid < 30.0, "centroid {}", m.centroid);
    }
    let env = global_envelope(&states).unwrap();
    // the envelope is flat near its top, so compare the fitted centre
    let fit = EnvelopeFit::of_profile(&env, 0.001).unwrap();
    assert!((fit.center - 1.0).abs() <= 0.5, "x0 = {}", fit.center);
}

#[test]
fn localization_examples() {
    let mut delta = vec![Complex64::new(0.0, 0.0); 20];
    delta[6] = Complex64::new(1.0, 0.0);
    let m = localization(&delta).unwrap();
    assert_eq!((m.centroid, m.ipr), (7.0, 1.0));
    let uniform = vec![Complex64::new(0.1, 0.0); 100];
    assert!((localization(&uniform).unwrap().ipr - 0.01).abs() < 1e-15);
    let s = solve(&obc(1.0, 0.0, 50), SolveOptions::with_vectors(0)).unwrap();
    for v in s.eigenvectors.unwrap() {
        let ipr = localization(&v).unwrap().ipr;
        assert!(ipr < 5.0 / 50.0, "extended state with ipr {ipr}");
    }
}

#[test]
fn winding_is_grid_independent() {
    let cases = [
        (
            LatticeParams::pbc(1.0, 0.001, 100).unwrap(),
            Complex64::new(0.0, 0.0),
        ),
        (
            LatticeParams::pbc(1.0, 2.0, 100).unwrap(),
            Complex64::new(1.0, 0.0),
        ),
        (
            LatticeParams::pbc(1.0, 0.05, 30).unwrap(),
            Complex64::new(0.3, 0.01),
        ),
    ];
    for (p, base) in cases {
        let coarse = winding_number(&p, base, 128).unwrap();
        let fine = winding_number(&p, base, 256).unwrap();
        assert_eq!(coarse.winding, fine.winding, "{p:?}");
    }
    let w = winding_number(&cases[0].0, cases[0].1, DEFAULT_THETA_STEPS).unwrap();
    assert_ne!(w.winding, 0);
}

#[test]
fn hatano_nelson_examples() {
    let real = solve_matrix(
        &build_hatano_nelson(1.0, 0.5, 50, Boundary::Obc).unwrap(),
        SolveOptions::default(),
    )
    .unwrap();
    assert_eq!(classify(&real).counts.n_real, 50);
    let imag = solve_matrix(
        &build_hatano_nelson(1.0, 1.5, 50, Boundary::Obc).unwrap(),
        SolveOptions::default(),
    )
    .unwrap();
    assert_eq!(classify(&imag).counts.n_imaginary, 50);
    let sym = build_hatano_nelson(1.0, 0.0, 10, Boundary::Obc).unwrap();
    assert_eq!(sym.upper, sym.lower);
    let w = winding_number_with(
        |th| build_hatano_nelson_twisted(1.0, 0.5, 40, th).unwrap(),
        Complex64::new(0.0, 0.0),
        DEFAULT_THETA_STEPS,
    )
    .unwrap();
    assert_eq!(w.winding.abs(), 1);
}

#[test]
fn flux_half_turn_changes_the_spectrum() {
    let p = LatticeParams::pbc(1.0, 0.001, 20).unwrap();
    let at = |theta: f64| {
        eig_general(
            &CMatrix::from(&build_flux_twisted(&p, theta).unwrap()),
            false,
        )
        .unwrap()
        .eigenvalues
    };
    let (zero, half, full) = (at(0.0), at(PI), at(2.0 * PI));
    assert!(matching_distance(&zero, &full) < 1e-10);
    assert!(matching_distance(&zero, &half) > 1e-3);
}

#[test]
fn periodic_weak_gradient_spectrum_is_a_loop() {
    let p = LatticeParams::pbc(1.0, 0.001, 100).unwrap();
    let s = solve(&p, SolveOptions::default()).unwrap();
    let cs = classify(&s);
    assert!(cs.counts.n_complex > 50, "{:?}", cs.counts);
    assert!(closure_defect(&s.eigenvalues, |z| z.conj()) < 1e-8);
}

#[test]
fn similarity_invariance_for_fully_hermitizable_chains() {
    for (gamma, length) in [(0.01, 100), (0.005, 150), (0.03, 30)] {
        let p = obc(1.0, gamma, length);
        assert_eq!(p.regime(), Regime::FullyHermitizable);
        let h = build_hamiltonian(&p).unwrap();
        let blocks = solve(&p, SolveOptions::default()).unwrap();
        let direct = solve(
            &p,
            SolveOptions {
                force_general: true,
                ..SolveOptions::default()
            },
        )
        .unwrap();
        let d = matching_distance(&blocks.eigenvalues, &direct.eigenvalues);
        assert!(d < 1e-8 * h.frobenius_norm(), "γ={gamma} L={length}: {d:e}");
    }
}

#[test]
fn general_solver_residuals_at_full_size() {
    for p in [
        obc(1.0, 0.07, 100),
        obc(1.0, 0.011, 100),
        LatticeParams::pbc(1.0, 0.001, 100).unwrap(),
    ] {
        let h = build_hamiltonian(&p).unwrap();
        let s = solve_matrix(&h, SolveOptions::with_vectors(0)).unwrap();
        assert!(
            s.max_residual() < residual_tolerance(h.frobenius_norm()),
            "{p:?}: {:e}",
            s.max_residual()
        );
        assert!(!s.any_flagged());
    }
}

#[test]
fn determinant_identities() {
    for p in random_instances(7, 120, 40) {
        let h = build_hamiltonian(&p).unwrap();
        let s = eig_general(&CMatrix::from(&h), false).unwrap();
        let scale = h.frobenius_norm();
        for e in &s.eigenvalues {
            let d = det_shifted(&h, *e);
            // |det(H − E)| relative to the natural size ‖H‖_F^L
            assert!(
                d.log_abs() - p.length as f64 * scale.max(1.0).ln() < (1e-6f64).ln(),
                "{p:?}"
            );
        }
        if s.eigenvalues.iter().all(|z| z.norm() > 1e-8 * scale) {
            let log_sum: f64 = s.eigenvalues.iter().map(|z| z.norm().ln()).sum();
            let log_det = spectral_moments(&h).log_abs_det;
            assert!(
                (log_sum - log_det).abs() <= 1e-6 * log_det.abs().max(1.0),
                "{p:?}: {log_sum} vs {log_det}"
            );
        }
    }
}

#[test]
fn gauge_examples_from_the_contract() {
    let g = gauge_vector(&obc(1.0, 0.02, 100)).unwrap();
    assert_eq!(g.block_starts, vec![0, 50]);
    assert_eq!((g.log_mag[0], g.sign[0]), (0.0, 1));
    let d = hermitize(&obc(1.0, 0.07, 100)).unwrap();
    assert_eq!((d.block_a.len(), d.block_b.len()), (14, 86));
}
