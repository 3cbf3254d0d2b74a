mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use socscatter::dispersion::{self, Branch, Kind};
use socscatter::SystemParams;

use common::*;

fn p(omega: f64) -> SystemParams {
    SystemParams::new(omega, -1.0).unwrap()
}

#[test]
fn closed_form_quartet_matches_companion_eigenvalues() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    while checked < 10_000 {
        let omega = rng.gen_range(0.1..10.0);
        let energy = rng.gen_range(-30.0..30.0);
        let Ok(roots) = dispersion::solve_wavevectors(energy, &p(omega)) else {
            continue;
        };
        let ours: Vec<Complex64> = roots[2..].iter().map(|w| w.k).collect();
        let oracle = companion_quartet(energy, omega);
        let scale = oracle.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let err = max_abs_diff_sorted(ours.clone(), oracle.clone());
        let tol = 1e-10 * scale;
        assert!(
            err < tol,
            "E {energy} Ω {omega}: {ours:?} vs {oracle:?} ({err:e})"
        );
        checked += 1;
    }
}

#[test]
fn states_are_eigenvectors_of_the_reduced_hamiltonian() {
    for omega in [0.5, 1.0, 2.0, 5.0] {
        for i in 0..300 {
            let energy = -12.0 + 0.0713 * i as f64;
            let Ok(set) = dispersion::build_channel_set(energy, &p(omega)) else {
                continue;
            };
            for s in set.states() {
                let h = hamiltonian(s.k, omega);
                let v = nalgebra::Vector3::from_column_slice(&s.spinor);
                let r = h * v - v * Complex64::from(energy);
                assert!(
                    r.norm() < 1e-9 * v.norm().max(1.0) * energy.abs().max(1.0),
                    "Ω {omega} E {energy} label {} residual {}",
                    s.label,
                    r.norm()
                );
                assert!(v.norm() > 0.0);
            }
        }
    }
}

#[test]
fn flux_equals_group_velocity() {
    for omega in [1.0, 5.0, 0.5] {
        let params = p(omega);
        for i in 0..=1000 {
            let k = -5.0 + 0.01 * i as f64;
            for b in [Branch::Upper, Branch::Middle, Branch::Lower] {
                let v = dispersion::flux(b, k, &params);
                let fd = group_velocity_fd(b, k, &params);
                assert!(
                    (v - fd).abs() <= 1e-8 * v.abs().max(1.0),
                    "{b:?} k {k} Ω {omega}: {v} vs {fd}"
                );
            }
        }
    }
}

#[test]
fn double_minimum_geometry() {
    for omega in [0.5, 1.0, 1.5] {
        let params = p(omega);
        let k_min = (1.0 - omega * omega / 4.0).sqrt();
        let e_min = dispersion::branch_energy(Branch::Lower, Complex64::from(k_min), &params).re;
        assert!((e_min - params.lowest_threshold()).abs() < 1e-14);
        for i in 1..100 {
            let k = k_min * i as f64 / 100.0;
            assert!(dispersion::flux(Branch::Lower, k, &params) < 0.0);
            let k = k_min * (1.0 + i as f64 / 50.0);
            assert!(dispersion::flux(Branch::Lower, k, &params) > 0.0);
        }
    }
}

#[test]
fn kinds_follow_the_region() {
    // SM, Ω = 5: quartet purely imaginary on (-7.25, -5), fully complex below.
    let set = dispersion::build_channel_set(-6.0, &p(5.0)).unwrap();
    for l in 3..=6 {
        assert_eq!(set.state(l).kind, Kind::Evanescent);
    }
    let set = dispersion::build_channel_set(-8.0, &p(5.0)).unwrap();
    for l in 3..=6 {
        assert_eq!(set.state(l).kind, Kind::ComplexOscillatory);
    }
    // DM, Ω = 1: the evanescent quartet pair is the upper continuation above
    // the branch point and the lower continuation below it.
    let above = dispersion::build_channel_set(-0.1, &p(1.0)).unwrap();
    assert_eq!(above.state(4).branch.branch, Branch::Upper);
    let below = dispersion::build_channel_set(-0.5, &p(1.0)).unwrap();
    assert_eq!(below.state(4).branch.branch, Branch::Lower);
    assert_eq!(below.state(4).kind, Kind::Evanescent);
}

proptest! {
    #[test]
    fn roots_closed_under_negation(energy in -20.0f64..20.0, omega in 0.05f64..10.0) {
        let params = p(omega);
        if let Ok(roots) = dispersion::solve_wavevectors(energy, &params) {
            for pair in roots.chunks(2) {
                prop_assert!((pair[0].k + pair[1].k).norm() < 1e-14 * pair[0].k.norm().max(1.0));
                prop_assert_eq!(pair[0].branch, pair[1].branch);
            }
            // Conjugation maps the root set onto itself.
            let ks: Vec<Complex64> = roots.iter().map(|w| w.k).collect();
            let conj: Vec<Complex64> = ks.iter().map(|k| k.conj()).collect();
            prop_assert!(max_abs_diff_sorted(ks, conj) < 1e-12 * (energy.abs() + omega).max(1.0));
        }
    }

    #[test]
    fn propagating_states_have_unit_norm_and_signed_flux(energy in -12.0f64..12.0, omega in 0.1f64..8.0) {
        if let Ok(set) = dispersion::build_channel_set(energy, &p(omega)) {
            for s in set.states() {
                if s.is_open() {
                    let n: f64 = s.spinor.iter().map(|z| z.norm_sqr()).sum();
                    prop_assert!((n - 1.0).abs() < 1e-12);
                    prop_assert_eq!(s.placement.is_right(), s.flux > 0.0);
                } else {
                    prop_assert_eq!(s.flux, 0.0);
                    prop_assert_eq!(s.placement.is_right(), s.k.im > 0.0);
                }
            }
        }
    }
}
