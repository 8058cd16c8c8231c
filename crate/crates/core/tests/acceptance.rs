//! Acceptance suite: one PASS/FAIL line per criterion.

mod common;

use std::time::Instant;

use num_complex::Complex64;
use skinlab::analysis::{
    classify, decoupling_check, fit_envelope, global_envelope, level_spacings, real_state_tails,
    winding_number, EigenClass, EnvelopeFit, DEFAULT_THETA_STEPS, LADDER_THRESHOLD,
};
use skinlab::eigen::{eig_general, residual_tolerance, spectral_moments, CMatrix, Spectrum};
use skinlab::lattice::{build_hamiltonian, Boundary, LatticeParams};
use skinlab::solve::{block_spectra, solve, SolveOptions};

use common::{closure_defect, contour_roots, matching_distance, random_instances};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn obc(gamma: f64, length: usize) -> LatticeParams {
    LatticeParams::obc(1.0, gamma, length).unwrap()
}

fn spectrum(p: &LatticeParams) -> Spectrum {
    solve(p, SolveOptions::default()).unwrap()
}

fn with_vectors(p: &LatticeParams) -> Spectrum {
    solve(p, SolveOptions::with_vectors(0)).unwrap()
}

fn general(p: &LatticeParams) -> Spectrum {
    solve(
        p,
        SolveOptions {
            force_general: true,
            ..SolveOptions::default()
        },
    )
    .unwrap()
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_1() -> Outcome {
    let s = spectrum(&obc(0.01, 100));
    let cs = classify(&s);
    let max_im = s.eigenvalues.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    check(
        cs.counts.n_real == 100 && max_im < 1e-6,
        format!("n_real = {}, max|Im E| = {max_im:.2e}", cs.counts.n_real),
    )
}

fn criterion_2() -> Outcome {
    let p = obc(0.02, 100);
    let full = general(&p);
    let cs = classify(&full);
    let (a, b) = block_spectra(&p).unwrap();
    let mut blocks: Vec<f64> = a.iter().map(|z| z.re).collect();
    blocks.sort_by(f64::total_cmp);
    let mut blocks_im: Vec<f64> = b.iter().map(|z| z.im).collect();
    blocks_im.sort_by(f64::total_cmp);
    let real = cs.axis_values(EigenClass::Real);
    let imag = cs.axis_values(EigenClass::Imaginary);
    let dev = if real.len() == blocks.len() && imag.len() == blocks_im.len() {
        real.iter()
            .zip(&blocks)
            .chain(imag.iter().zip(&blocks_im))
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    check(
        cs.counts.n_real == 50 && cs.counts.n_imaginary == 50 && dev < 1e-8,
        format!(
            "n_real = {}, n_imaginary = {}, block/full deviation = {dev:.2e}",
            cs.counts.n_real, cs.counts.n_imaginary
        ),
    )
}

fn criterion_3() -> Outcome {
    let p = obc(0.07, 100);
    let full = spectrum(&p);
    let cs = classify(&full);
    let (a, b) = block_spectra(&p).unwrap();
    let worst = a
        .iter()
        .chain(&b)
        .map(|z| {
            full.eigenvalues
                .iter()
                .map(|e| (e - z).norm())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);
    check(
        cs.counts.n_complex == 0 && worst > 1e-4,
        format!(
            "n_real = {}, n_imaginary = {}, n_complex = {}, largest block-to-spectrum gap = {worst:.3e}",
            cs.counts.n_real, cs.counts.n_imaginary, cs.counts.n_complex
        ),
    )
}

fn criterion_4() -> Outcome {
    let gamma = 0.011;
    let s = with_vectors(&obc(gamma, 100));
    let cs = classify(&s);
    let vectors = s.eigenvectors.as_ref().unwrap();
    let mut details = vec![format!("n_imaginary = {}", cs.counts.n_imaginary)];
    let mut ok = cs.counts.n_imaginary == 10;
    for target in [0.6864, -0.6864] {
        let t = Complex64::new(0.0, target);
        let k = (0..s.len())
            .min_by(|&a, &b| {
                (s.eigenvalues[a] - t)
                    .norm()
                    .total_cmp(&(s.eigenvalues[b] - t).norm())
            })
            .unwrap();
        let e = s.eigenvalues[k];
        let fit = fit_envelope(&vectors[k], gamma).unwrap();
        let good = (e.im.abs() - 0.6864).abs() < 1e-3
            && (fit.center - 32.0).abs() <= 1.0
            && (fit.width_ratio() - 1.0).abs() <= 0.2;
        ok &= good;
        details.push(format!(
            "E = {:+.5}i: x0 = {:.2}, w = {:.4e} ({:.1}% of |γ|/2)",
            e.im,
            fit.center,
            fit.width_param,
            100.0 * fit.width_ratio()
        ));
    }
    check(ok, details.join("; "))
}

fn criterion_5() -> Outcome {
    let cs = classify(&spectrum(&obc(1.5, 100)));
    check(
        cs.counts.n_imaginary == 100,
        format!("n_imaginary = {}", cs.counts.n_imaginary),
    )
}

fn criterion_6() -> Outcome {
    let real = level_spacings(&classify(&spectrum(&obc(0.01, 100))), EigenClass::Real).unwrap();
    let imag =
        level_spacings(&classify(&spectrum(&obc(0.02, 100))), EigenClass::Imaginary).unwrap();
    check(
        real.relative_stdev < LADDER_THRESHOLD && imag.relative_stdev > LADDER_THRESHOLD,
        format!(
            "real ladder rel. stdev = {:.3e}, imaginary rel. stdev = {:.3e} (threshold {LADDER_THRESHOLD})",
            real.relative_stdev, imag.relative_stdev
        ),
    )
}

fn criterion_7() -> Outcome {
    let gamma = 0.001;
    let s = with_vectors(&obc(gamma, 100));
    let env = global_envelope(s.eigenvectors.as_ref().unwrap()).unwrap();
    let fit = EnvelopeFit::of_profile(&env, gamma).unwrap();
    check(
        (fit.center - 1.0).abs() <= 0.5 && (fit.width_ratio() - 1.0).abs() <= 0.2,
        format!(
            "x0 = {:.3}, w = {:.4e} ({:.1}% of 5e-4)",
            fit.center,
            fit.width_param,
            100.0 * fit.width_ratio()
        ),
    )
}

fn criterion_8() -> Outcome {
    let r = decoupling_check(&obc(0.02, 100)).unwrap();
    let tails = real_state_tails(&obc(0.021, 100), 0).unwrap();
    let lo = tails.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = tails.iter().copied().fold(0.0, f64::max);
    check(
        r.decoupled && r.max_residual < r.tolerance && r.max_leak < 1e-12 && lo > 0.0 && hi < 1e-3,
        format!(
            "γ=0.02: {} padded states, max residual {:.2e} (tol {:.2e}), max leak {:.1e}; γ=0.021: {} real-state tails in [{lo:.1e}, {hi:.1e}]",
            r.states,
            r.max_residual,
            r.tolerance,
            r.max_leak,
            tails.len()
        ),
    )
}

fn criterion_9() -> Outcome {
    let weak = LatticeParams::pbc(1.0, 0.001, 100).unwrap();
    let w_weak = winding_number(&weak, Complex64::new(0.0, 0.0), DEFAULT_THETA_STEPS);
    let strong = LatticeParams::pbc(1.0, 2.0, 100).unwrap();
    let w_strong = winding_number(&strong, Complex64::new(1.0, 0.0), DEFAULT_THETA_STEPS);
    let max_re = spectrum(&strong)
        .eigenvalues
        .iter()
        .map(|z| z.re.abs())
        .fold(0.0, f64::max);
    let ok = matches!(&w_weak, Ok(r) if r.winding != 0)
        && matches!(&w_strong, Ok(r) if r.winding == 0)
        && max_re < 1e-6;
    let summary = format!(
        "W(γ=0.001, base 0) = {}, W(γ=2, base 1) = {}, max|Re E| (γ=2, PBC) = {max_re:.2e}",
        w_weak
            .as_ref()
            .map(|r| r.winding.to_string())
            .unwrap_or_else(|e| e.to_string()),
        w_strong
            .as_ref()
            .map(|r| r.winding.to_string())
            .unwrap_or_else(|e| e.to_string()),
    );
    check(ok, summary)
}

fn criterion_10() -> Outcome {
    let mut ok = true;
    let mut details = Vec::new();
    for length in [200, 400] {
        let p = obc(0.01, length);
        let cs = classify(&spectrum(&p));
        let r = decoupling_check(&p).unwrap();
        ok &= cs.counts.n_real > 0 && cs.counts.n_imaginary > 0 && r.m == 100 && r.decoupled;
        details.push(format!(
            "L={length}: n_real = {}, n_imaginary = {}, m = {}, max residual {:.2e}, max leak {:.1e}",
            cs.counts.n_real, cs.counts.n_imaginary, r.m, r.max_residual, r.max_leak
        ));
    }
    check(ok, details.join("; "))
}

fn criterion_11() -> Outcome {
    let instances = random_instances(20240611, 200, 12);
    let mut failures = Vec::new();
    let mut worst_oracle = 0.0f64;
    let mut oracle_runs = 0;
    for (i, p) in instances.iter().enumerate() {
        let h = build_hamiltonian(p).unwrap();
        let frob = h.frobenius_norm();
        let s = with_vectors(p);
        let radius = s.spectral_radius().max(1.0);
        let sum: Complex64 = s.eigenvalues.iter().sum();
        let sum_sq: Complex64 = s.eigenvalues.iter().map(|z| z * z).sum();
        let moments = spectral_moments(&h);
        let mut bad = Vec::new();
        if sum.norm() > 1e-9 * p.length as f64 * frob {
            bad.push(format!("ΣE = {sum:.2e}"));
        }
        if (sum_sq.re - moments.trace_sq).abs() + sum_sq.im.abs()
            > 1e-6 * moments.trace_sq.abs() + 1e-12 * frob * frob
        {
            bad.push(format!("ΣE² = {sum_sq:.6e} vs {:.6e}", moments.trace_sq));
        }
        let pair_tol = 1e-6 * radius;
        if (p.boundary == Boundary::Obc || p.length % 2 == 0)
            && closure_defect(&s.eigenvalues, |z| -z) > pair_tol
        {
            bad.push("±E closure".into());
        }
        if closure_defect(&s.eigenvalues, |z| z.conj()) > pair_tol {
            bad.push("conjugation closure".into());
        }
        if s.max_residual() >= residual_tolerance(frob) || s.any_flagged() {
            bad.push(format!("residual {:.2e}", s.max_residual()));
        }
        if p.length <= 6 {
            let roots = contour_roots(&h, 1e-10);
            let direct = eig_general(&CMatrix::from(&h), false).unwrap();
            let d = matching_distance(&direct.eigenvalues, &roots);
            worst_oracle = worst_oracle.max(d);
            oracle_runs += 1;
            if d > 1e-8 {
                bad.push(format!("oracle distance {d:.2e}"));
            }
        }
        if !bad.is_empty() {
            failures.push(format!("#{i} {p:?}: {}", bad.join(", ")));
        }
    }
    check(
        failures.is_empty(),
        if failures.is_empty() {
            format!("200 instances clean; {oracle_runs} contour oracles, worst distance {worst_oracle:.2e}")
        } else {
            format!(
                "{} failing instances: {}",
                failures.len(),
                failures.join(" | ")
            )
        },
    )
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("purely real spectrum (γ=0.01)", criterion_1),
        ("integer-split counts and block match (γ=0.02)", criterion_2),
        ("non-integer mismatch (γ=0.07)", criterion_3),
        (
            "ten imaginary levels and ±0.6864i envelope (γ=0.011)",
            criterion_4,
        ),
        ("purely imaginary regime (γ=1.5)", criterion_5),
        ("real ladder vs imaginary spacings", criterion_6),
        ("global skin envelope (γ=0.001)", criterion_7),
        ("decoupling (γ=0.02) and small tails (γ=0.021)", criterion_8),
        ("winding and point gap (PBC)", criterion_9),
        ("thermodynamic trend (L=200, 400)", criterion_10),
        ("random-instance property suite", criterion_11),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {:>2}: {name} [{secs:.2}s] {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {:>2}: {name} [{secs:.2}s] {detail}", k + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
