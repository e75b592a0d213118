//! Finite-difference consistency of the synthetic field's gradient and
//! Hessian, the governing-equation residual under nested stencils, and the
//! split-field (exact difference) behavior in both the benign and the
//! catastrophic regimes.

use mbh::{split_field, synth_field, FieldSample, PointSource};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_source(rng: &mut ChaCha8Rng, center: [f64; 2], spread: f64) -> PointSource {
    let unit = |rng: &mut ChaCha8Rng| -> [f64; 2] {
        loop {
            let v: [f64; 2] = [rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)];
            let n = v[0].hypot(v[1]);
            if n > 1e-3 {
                return [v[0] / n, v[1] / n];
            }
        }
    };
    PointSource {
        location: [
            center[0] + rng.gen_range(-spread..spread),
            center[1] + rng.gen_range(-spread..spread),
        ],
        charge: rng.gen_range(-1.0..1.0),
        dipole_weight: rng.gen_range(0.0..1.0),
        dipole_dir: unit(rng),
        quad_weight: rng.gen_range(0.0..1.0),
        quad_dirs: [unit(rng), unit(rng)],
    }
}

fn eval(sources: &[PointSource], lambda: f64, x: [f64; 2]) -> FieldSample {
    synth_field(sources, lambda, x).unwrap()
}

#[test]
fn gradient_and_hessian_match_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for case in 0..100 {
        let lambda = 10f64.powf(rng.gen_range(-2.0..0.5));
        let sources: Vec<PointSource> =
            (0..5).map(|_| random_source(&mut rng, [2.5, 0.0], 0.5)).collect();
        let x = [rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)];
        let f = eval(&sources, lambda, x);

        let h = 1e-5;
        let fe = eval(&sources, lambda, [x[0] + h, x[1]]);
        let fw = eval(&sources, lambda, [x[0] - h, x[1]]);
        let fn_ = eval(&sources, lambda, [x[0], x[1] + h]);
        let fs = eval(&sources, lambda, [x[0], x[1] - h]);

        let gx = (fe.value - fw.value) / (2.0 * h);
        let gy = (fn_.value - fs.value) / (2.0 * h);
        let gn = f.gradient[0].hypot(f.gradient[1]);
        assert!(
            ((gx - f.gradient[0]).hypot(gy - f.gradient[1])) <= 1e-7 * gn,
            "case {case}: gradient fd mismatch"
        );

        // Hessian against central differences of the analytic gradient
        // (differencing the value twice would sit on the eps/h^2 noise floor).
        let uxx = (fe.gradient[0] - fw.gradient[0]) / (2.0 * h);
        let uyy = (fn_.gradient[1] - fs.gradient[1]) / (2.0 * h);
        let uxy = (fn_.gradient[0] - fs.gradient[0]) / (2.0 * h);
        let hn = (f.hessian[0].powi(2) + f.hessian[1].powi(2) + f.hessian[2].powi(2)).sqrt();
        let dh = ((uxx - f.hessian[0]).powi(2)
            + (uxy - f.hessian[1]).powi(2)
            + (uyy - f.hessian[2]).powi(2))
        .sqrt();
        assert!(dh <= 1e-6 * hn, "case {case}: hessian fd mismatch {dh:e} vs {hn:e}");
    }
}

/// Applies `lap` via a 5-point stencil to a closure.
fn laplacian(f: &dyn Fn([f64; 2]) -> f64, x: [f64; 2], h: f64) -> f64 {
    (f([x[0] + h, x[1]]) + f([x[0] - h, x[1]]) + f([x[0], x[1] + h]) + f([x[0], x[1] - h])
        - 4.0 * f(x))
        / (h * h)
}

#[test]
fn governing_equation_residual() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let lambda = 0.7;
    let sources: Vec<PointSource> =
        (0..4).map(|_| random_source(&mut rng, [3.0, 1.0], 0.4)).collect();
    let x = [0.2, -0.3]; // distance >= 1 from every source

    let residual_at = |h: f64| -> (f64, f64) {
        let u = |y: [f64; 2]| eval(&sources, lambda, y).value;
        let lap_u = |y: [f64; 2]| laplacian(&u, y, h);
        let bilap = laplacian(&lap_u, x, h);
        let lap = lap_u(x);
        (bilap - lambda * lambda * lap, (lambda * lambda * lap).abs())
    };

    let (r1, scale) = residual_at(1e-2);
    assert!(r1.abs() <= 1e-4 * scale, "residual {r1:e} vs scale {scale:e}");
    // The nested 5-point operator is second order: halving h twice should
    // shrink the residual ~16x (allow half that for noise).
    let (r2, _) = residual_at(2.5e-3);
    assert!(
        r2.abs() <= r1.abs() / 8.0,
        "no h^2 convergence: {r1:e} -> {r2:e}"
    );
}

#[test]
fn split_difference_reproduces_field_in_benign_regime() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for _ in 0..20 {
        let lambda = rng.gen_range(0.1..2.0);
        let sources: Vec<PointSource> =
            (0..5).map(|_| random_source(&mut rng, [2.0, -1.0], 0.3)).collect();
        let x = [rng.gen_range(-0.2..0.2), rng.gen_range(-0.2..0.2)];
        // Enforce min lambda * dist >= 0.1 for the stated bound.
        let min_dist = sources
            .iter()
            .map(|s| (x[0] - s.location[0]).hypot(x[1] - s.location[1]))
            .fold(f64::INFINITY, f64::min);
        if lambda * min_dist < 0.1 {
            continue;
        }
        let u = eval(&sources, lambda, x);
        let (l, h) = split_field(&sources, lambda, x).unwrap();
        let d = h.sub(&l);
        assert!((d.value - u.value).abs() <= 1e-12 * u.value.abs());
        let gn = u.gradient[0].hypot(u.gradient[1]);
        assert!(
            (d.gradient[0] - u.gradient[0]).hypot(d.gradient[1] - u.gradient[1]) <= 1e-12 * gn
        );
        let hn = (u.hessian[0].powi(2) + u.hessian[1].powi(2) + u.hessian[2].powi(2)).sqrt();
        let dh = ((d.hessian[0] - u.hessian[0]).powi(2)
            + (d.hessian[1] - u.hessian[1]).powi(2)
            + (d.hessian[2] - u.hessian[2]).powi(2))
        .sqrt();
        assert!(dh <= 1e-12 * hn);
    }
}

#[test]
fn split_difference_cancels_catastrophically_at_small_lambda() {
    // Each split part carries a second-directional term of size
    // ~ q / (2 pi (lambda rho)^2) while the combined field is O(1), so the
    // difference loses ~ |log10 (lambda rho)^2| digits.
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let lambda = 2f64.powi(-20);
    let mut sources: Vec<PointSource> =
        (0..3).map(|_| random_source(&mut rng, [0.65, 0.1], 0.1)).collect();
    for s in sources.iter_mut() {
        s.charge = 0.0;
        s.dipole_weight = 0.0;
        s.quad_weight = rng.gen_range(0.5..1.0);
    }
    let x = [0.0, 0.0];
    let u = eval(&sources, lambda, x);
    let (l, h) = split_field(&sources, lambda, x).unwrap();
    let d = h.sub(&l);
    let rel = ((d.value - u.value) / u.value).abs();
    assert!(
        rel >= 1e-4,
        "exact difference unexpectedly accurate at lambda=2^-20: rel {rel:e}"
    );
}
