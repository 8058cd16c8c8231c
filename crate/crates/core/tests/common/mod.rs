#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_4, PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use skinlab::eigen::{det_shifted, ScaledComplex};
use skinlab::lattice::{BandedHamiltonian, Boundary, LatticeParams};

fn wrap(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    if y > PI {
        y - TAU
    } else {
        y
    }
}

fn phase_step(a: &ScaledComplex, b: &ScaledComplex) -> f64 {
    wrap(b.phase() - a.phase())
}

struct Contour<'a> {
    h: &'a BandedHamiltonian,
}

impl Contour<'_> {
    fn f(&self, z: Complex64) -> ScaledComplex {
        det_shifted(self.h, z)
    }

    fn segment(
        &self,
        z0: Complex64,
        z1: Complex64,
        f0: ScaledComplex,
        f1: ScaledComplex,
        depth: u32,
    ) -> f64 {
        let step = phase_step(&f0, &f1);
        if step.abs() < FRAC_PI_4 || depth > 60 {
            return step;
        }
        let zm = (z0 + z1) * 0.5;
        let fm = self.f(zm);
        self.segment(z0, zm, f0, fm, depth + 1) + self.segment(zm, z1, fm, f1, depth + 1)
    }

    /// Number of zeros of `det(H − z)` inside the axis-aligned box.
    fn count(&self, lo: Complex64, hi: Complex64) -> i64 {
        let corners = [
            lo,
            Complex64::new(hi.re, lo.im),
            hi,
            Complex64::new(lo.re, hi.im),
        ];
        let mut total = 0.0;
        for k in 0..4 {
            let (a, b) = (corners[k], corners[(k + 1) % 4]);
            let pieces = 16;
            let mut prev_z = a;
            let mut prev_f = self.f(a);
            for p in 1..=pieces {
                let z = a + (b - a) * (p as f64 / pieces as f64);
                let fz = self.f(z);
                total += self.segment(prev_z, z, prev_f, fz, 0);
                prev_z = z;
                prev_f = fz;
            }
        }
        (total / TAU).round() as i64
    }

    fn bisect(
        &self,
        lo: Complex64,
        hi: Complex64,
        count: i64,
        size: f64,
        out: &mut Vec<Complex64>,
    ) {
        if count <= 0 {
            return;
        }
        let span = hi - lo;
        if span.re.max(span.im) < size {
            let c = (lo + hi) * 0.5;
            out.extend(std::iter::repeat_n(c, count as usize));
            return;
        }
        // off-centre cuts keep symmetric spectra off the cut lines
        let mid = lo + Complex64::new(span.re * 0.5087, span.im * 0.4931);
        let quads = [
            (lo, mid),
            (Complex64::new(mid.re, lo.im), Complex64::new(hi.re, mid.im)),
            (Complex64::new(lo.re, mid.im), Complex64::new(mid.re, hi.im)),
            (mid, hi),
        ];
        for (a, b) in quads {
            let c = self.count(a, b);
            self.bisect(a, b, c, size, out);
        }
    }
}

/// Roots of `det(H − z)` located by recursive argument-principle bisection,
/// repeated by multiplicity.
pub fn contour_roots(h: &BandedHamiltonian, size: f64) -> Vec<Complex64> {
    let n = h.len();
    let radius = (0..n)
        .map(|r| (0..n).map(|c| h.get(r, c).norm()).sum::<f64>())
        .fold(0.0, f64::max)
        + 0.1;
    let lo = Complex64::new(-radius - 0.0123, -radius - 0.0217);
    let hi = Complex64::new(radius + 0.0371, radius + 0.0153);
    let contour = Contour { h };
    let total = contour.count(lo, hi);
    let mut out = Vec::new();
    contour.bisect(lo, hi, total, size, &mut out);
    out
}

/// Largest distance in a greedy nearest-partner matching of two multisets.
pub fn matching_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for x in a {
        let (k, d) = b
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, y)| (k, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        used[k] = true;
        worst = worst.max(d);
    }
    worst
}

/// Largest distance from each value's image under `map` to the set.
pub fn closure_defect(values: &[Complex64], map: impl Fn(Complex64) -> Complex64) -> f64 {
    let image: Vec<Complex64> = values.iter().map(|&z| map(z)).collect();
    matching_distance(&image, values)
}

/// Seeded random chain parameters with `length ≤ max_length`.
pub fn random_instances(seed: u64, count: usize, max_length: usize) -> Vec<LatticeParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let t = sign * rng.gen_range(0.2..2.0);
            let gamma = rng.gen_range(-1.5..1.5);
            let periodic = rng.gen_bool(0.5);
            let boundary = if periodic {
                Boundary::Pbc
            } else {
                Boundary::Obc
            };
            let length = rng.gen_range(boundary.min_length()..=max_length);
            LatticeParams::new(t, gamma, length, boundary).unwrap()
        })
        .collect()
}
