//! Independent reference computations used by the integration tests.
#![allow(dead_code)]

use nalgebra::{Matrix3, Matrix4, Schur};
use num_complex::Complex64;

use socscatter::dispersion::{self, Branch};
use socscatter::scattering::matching_matrix;
use socscatter::SystemParams;

/// Roots of `k⁴ − (2E+4)k² + (E² − Ω²)` as eigenvalues of the companion matrix.
///
/// The polynomial is even in k, which stalls unshifted-symmetric QR; expanding
/// about `k = y + c` breaks the symmetry.
pub fn companion_quartet(energy: f64, omega: f64) -> Vec<Complex64> {
    let c = 0.371;
    let b2 = -(2.0 * energy + 4.0);
    let b0 = energy * energy - omega * omega;
    // Monic y⁴ + a3 y³ + a2 y² + a1 y + a0 after the shift.
    let a3 = 4.0 * c;
    let a2 = 6.0 * c * c + b2;
    let a1 = 4.0 * c * c * c + 2.0 * b2 * c;
    let a0 = c.powi(4) + b2 * c * c + b0;
    let companion = Matrix4::new(
        0.0, 0.0, 0.0, -a0, //
        1.0, 0.0, 0.0, -a1, //
        0.0, 1.0, 0.0, -a2, //
        0.0, 0.0, 1.0, -a3,
    );
    let schur = Schur::try_new(companion, f64::EPSILON, 10_000).expect("Schur did not converge");
    schur.complex_eigenvalues().iter().map(|y| y + c).collect()
}

/// Reduced three-component Hamiltonian on (|S⟩, |T₁⟩, |T₂⟩) at K = 0, δ = 0,
/// kinetic term included.
pub fn hamiltonian(k: Complex64, omega: f64) -> Matrix3<Complex64> {
    let soc = std::f64::consts::SQRT_2 * k;
    let kin = k * k;
    let z = Complex64::from(0.0);
    let o = Complex64::from(omega);
    Matrix3::new(
        kin,
        soc,
        -soc, //
        soc,
        kin + o,
        z, //
        -soc,
        z,
        kin - o,
    )
}

/// Five-point central difference of `dE/dk` for a real branch energy.
pub fn group_velocity_fd(branch: Branch, k: f64, params: &SystemParams) -> f64 {
    let h = 1e-3;
    let e = |x: f64| dispersion::branch_energy(branch, Complex64::from(x), params).re;
    (-e(k + 2.0 * h) + 8.0 * e(k + h) - 8.0 * e(k - h) + e(k - 2.0 * h)) / (12.0 * h)
}

/// Bound-state condition from the determinant: `det M(g)` is affine in g, so
/// `det M(g) / det M(0) = 1 − g·G(E)`. Returns G(E).
pub fn contact_green(energy: f64, params: &SystemParams) -> f64 {
    let set = dispersion::build_channel_set(energy, params).unwrap();
    let d0 = matching_matrix(&set, 0.0).determinant();
    let d1 = matching_matrix(&set, 1.0).determinant();
    let g = (d0 - d1) / d0;
    assert!(g.im.abs() < 1e-8 * g.re.abs().max(1.0), "G not real: {g}");
    g.re
}

/// Bisection root of `1 − g·G(E)` on `[lo, hi]` (sign change required).
pub fn bound_state_by_bisection(params: &SystemParams, mut lo: f64, mut hi: f64) -> f64 {
    let f = |e: f64| 1.0 - params.g * contact_green(e, params);
    let mut flo = f(lo);
    assert!(flo * f(hi) < 0.0, "no sign change on [{lo}, {hi}]");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm * flo <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
        if hi - lo < 1e-14 {
            break;
        }
    }
    0.5 * (lo + hi)
}

pub fn max_abs_diff_sorted(mut a: Vec<Complex64>, mut b: Vec<Complex64>) -> f64 {
    let key = |z: &Complex64| (z.re, z.im);
    let cmp = |x: &Complex64, y: &Complex64| {
        let (a, b) = (key(x), key(y));
        a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1))
    };
    a.sort_by(cmp);
    b.sort_by(cmp);
    // Greedy nearest matching is robust to sort ties from rounding.
    let mut worst: f64 = 0.0;
    let mut used = vec![false; b.len()];
    for x in &a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}
