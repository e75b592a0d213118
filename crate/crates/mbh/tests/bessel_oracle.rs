//! Grid comparison of the f64 Bessel implementations against independent
//! high-precision series evaluation, plus the Wronskian and recurrence
//! identities used as library-free cross-checks.

use hiprec::Fx;
use mbh::{mod_bessel_derivs, mod_bessel_i_seq, mod_bessel_k_seq};

const EPS: f64 = f64::EPSILON;

fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        ((a - b) / b).abs()
    }
}

#[test]
fn i_seq_matches_oracle() {
    // Spec bound: relative error <= 10 eps for x <= 700.
    let xs = [1e-6, 1e-3, 0.1, 0.5, 1.0, 1.9, 2.0, 2.1, 3.7, 10.0, 47.3, 120.0, 400.0, 700.0];
    for &x in &xs {
        let nmax = 60usize;
        let seq = mod_bessel_i_seq(nmax, x).unwrap();
        let xf = Fx::from_f64(x);
        for n in (0..=nmax).step_by(5) {
            let reference = hiprec::bessel_i(n as u32, &xf);
            if reference.is_zero() {
                continue;
            }
            let rf = reference.to_f64();
            if rf == 0.0 || !rf.is_normal() {
                // Underflowed in f64; the public sequence agrees by returning 0.
                continue;
            }
            let e = rel(seq.values[n], rf);
            assert!(e <= 10.0 * EPS, "I_{n}({x}): rel err {e:.3e}");
        }
    }
}

#[test]
fn i_seq_high_order() {
    // Orders up to 160 (the expansion machinery reaches ~2p + 2).
    for &x in &[0.3, 2.5, 8.0, 30.0, 95.0] {
        let seq = mod_bessel_i_seq(160, x).unwrap();
        let xf = Fx::from_f64(x);
        for &n in &[80usize, 120, 160] {
            let rf = hiprec::bessel_i(n as u32, &xf).to_f64();
            if !rf.is_normal() {
                continue;
            }
            let e = rel(seq.values[n], rf);
            assert!(e <= 10.0 * EPS, "I_{n}({x}): rel err {e:.3e}");
        }
    }
}

#[test]
fn k_seq_matches_oracle() {
    // Spec bound: relative error <= 100 eps across the supported range.
    let xs = [1e-6, 1e-3, 0.1, 0.5, 1.0, 1.9, 2.0, 2.1, 3.7, 10.0, 47.3, 120.0, 400.0, 700.0];
    for &x in &xs {
        let nmax = 40usize;
        let seq = match mod_bessel_k_seq(nmax, x) {
            Ok(s) => s,
            Err(_) => continue, // overflow at tiny x and large order is legal
        };
        let xf = Fx::from_f64(x);
        for n in (0..=nmax).step_by(4) {
            let rf = hiprec::bessel_k(n as u32, &xf).to_f64();
            if !rf.is_finite() || !rf.is_normal() {
                continue;
            }
            let e = rel(seq.values[n], rf);
            assert!(e <= 100.0 * EPS, "K_{n}({x}): rel err {e:.3e}");
        }
    }
}

#[test]
fn k_seq_high_order() {
    for &x in &[2.5, 8.0, 30.0] {
        let seq = mod_bessel_k_seq(160, x).unwrap();
        let xf = Fx::from_f64(x);
        for &n in &[80usize, 160] {
            let rf = hiprec::bessel_k(n as u32, &xf).to_f64();
            if !rf.is_finite() {
                continue;
            }
            let e = rel(seq.values[n], rf);
            assert!(e <= 100.0 * EPS, "K_{n}({x}): rel err {e:.3e}");
        }
    }
}

#[test]
fn wronskian_identity() {
    // I_n(x) K_n'(x) - I_n'(x) K_n(x) = -1/x on a log grid over [1e-6, 50].
    let mut x = 1e-6;
    while x <= 50.0 {
        for &n in &[0i32, 1, 2, 10, 49] {
            match mod_bessel_derivs(n, x) {
                Ok((ip, kp)) => {
                    let na = n.unsigned_abs() as usize;
                    let i = mod_bessel_i_seq(na, x).unwrap().values[na];
                    let k = match mod_bessel_k_seq(na, x) {
                        Ok(s) => s.values[na],
                        Err(_) => continue,
                    };
                    let w = i * kp - ip * k;
                    let expect = -1.0 / x;
                    assert!(
                        rel(w, expect) <= 1e-13,
                        "Wronskian n={n} x={x:.3e}: {w:.17e} vs {expect:.17e}"
                    );
                }
                Err(_) => continue, // overflow region (large n, tiny x)
            }
        }
        x *= 3.1622776601683795; // half-decade steps
    }
}

#[test]
fn recurrence_consistency() {
    // I_{n-1} - I_{n+1} = (2n/x) I_n and K_{n+1} - K_{n-1} = (2n/x) K_n.
    for &x in &[0.05f64, 0.7, 2.3, 9.0, 60.0] {
        let i = mod_bessel_i_seq(30, x).unwrap();
        let k = mod_bessel_k_seq(30, x).unwrap();
        for n in 1..30usize {
            let lhs_i = i.values[n - 1] - i.values[n + 1];
            let rhs_i = 2.0 * n as f64 / x * i.values[n];
            if rhs_i != 0.0 {
                assert!(rel(lhs_i, rhs_i) <= 1e-12, "I recurrence n={n} x={x}");
            }
            let lhs_k = k.values[n + 1] - k.values[n - 1];
            let rhs_k = 2.0 * n as f64 / x * k.values[n];
            assert!(rel(lhs_k, rhs_k) <= 1e-12, "K recurrence n={n} x={x}");
        }
    }
}

#[test]
fn i_monotonicity_invariants() {
    // I values positive for x > 0 and non-increasing in order; K values
    // positive and strictly increasing in order.
    let i = mod_bessel_i_seq(25, 3.3).unwrap();
    for n in 0..25 {
        assert!(i.values[n] > 0.0);
        assert!(i.values[n] >= i.values[n + 1]);
    }
    let k = mod_bessel_k_seq(25, 3.3).unwrap();
    for n in 0..25 {
        assert!(k.values[n] > 0.0);
        assert!(k.values[n + 1] > k.values[n]);
    }
}
