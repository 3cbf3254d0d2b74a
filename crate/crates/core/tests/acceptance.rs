//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test --test acceptance`.

mod common;

use std::process::ExitCode;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use socscatter::dispersion::{self, Branch};
use socscatter::scattering::{solve_scattering, sweep, SWEEP_EXCLUSION};
use socscatter::spectra::{
    default_bound_window, find_bound_states, find_resonances, resonance_curve, secular,
    DEFAULT_BOUND_GRID, DEFAULT_GRID, DEFAULT_REFINE_TOL,
};
use socscatter::{Error, SystemParams};

use common::{companion_quartet, group_velocity_fd, max_abs_diff_sorted};

type Outcome = (bool, String);
type Criterion = (&'static str, fn() -> Outcome);

fn p(omega: f64, g: f64) -> SystemParams {
    SystemParams::new(omega, g).unwrap()
}

fn peaks(omega: f64, g: f64) -> Vec<(f64, f64)> {
    find_resonances(
        &p(omega, g),
        (-omega, 0.0),
        DEFAULT_GRID,
        DEFAULT_REFINE_TOL,
    )
    .unwrap()
    .into_iter()
    .map(|pk| (pk.energy, pk.reflection))
    .collect()
}

fn flux_conservation() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut points = 0;
    for omega in [1.0, 5.0] {
        for g in [-1.0, -3.0] {
            let params = p(omega, g);
            let (lo, hi) = (params.lowest_threshold(), omega + 5.0);
            let grid: Vec<f64> = (0..2000)
                .map(|i| lo + (hi - lo) * (i as f64 + 0.5) / 2000.0)
                .collect();
            for label in [2, 4, 6] {
                for pt in sweep(&grid, label, &params, SWEEP_EXCLUSION) {
                    match pt.outcome {
                        Ok(r) => {
                            worst = worst.max(r.conservation_residual);
                            points += 1;
                        }
                        Err(
                            Error::ClosedIncidentChannel { .. } | Error::DegenerateEnergy { .. },
                        ) => {}
                        Err(e) => return (false, format!("Ω {omega} g {g} i {label}: {e}")),
                    }
                }
            }
        }
    }
    (
        worst <= 1e-9,
        format!("max residual {worst:.2e} over {points} open points"),
    )
}

fn highest_threshold_transparency() -> Outcome {
    let params = p(5.0, -1.0);
    let above = solve_scattering(5.0 + 1e-6, 4, &params)
        .map(|r| {
            format!(
                " [E=5+1e-6: T44={:.7}, ΣR={:.1e}]",
                r.transmission[&4],
                r.total_reflection()
            )
        })
        .unwrap_or_default();
    match solve_scattering(5.0 - 1e-6, 4, &params) {
        Ok(r) => {
            let t = r.transmission[&4];
            let rs = r.total_reflection();
            (
                t >= 1.0 - 1e-4 && rs <= 1e-4,
                format!("T44={t:.7} ΣR={rs:.2e}"),
            )
        }
        Err(e) => (false, format!("E=5-1e-6: {e}{above}")),
    }
}

fn middle_threshold_reflection() -> Outcome {
    let r = solve_scattering(1e-6, 2, &p(5.0, -1.0)).unwrap();
    let back = r.reflection[&1];
    (
        back >= 1.0 - 1e-3,
        format!("R into incoming channel = {back:.6}"),
    )
}

fn lowest_threshold_transparency() -> Outcome {
    let r = solve_scattering(-5.0 + 1e-6, 6, &p(5.0, -1.0)).unwrap();
    let t = r.transmission[&6];
    (t >= 1.0 - 1e-3, format!("T66={t:.8}"))
}

fn double_minimum_anomaly() -> Outcome {
    let rs: Vec<f64> = [-0.5, -1.0, -2.0, -4.0]
        .iter()
        .map(|&g| {
            solve_scattering(-1.25 + 1e-6, 6, &p(1.0, g))
                .unwrap()
                .total_reflection()
        })
        .collect();
    let max = rs.iter().copied().fold(f64::MIN, f64::max);
    let min = rs.iter().copied().fold(f64::MAX, f64::min);
    let partial = rs.iter().all(|r| (0.01..=0.99).contains(r));
    let spread = max - min;
    (
        partial && spread <= 1e-6,
        format!("R in [{min:.7}, {max:.7}], spread {spread:.2e} (limit 1e-6)"),
    )
}

fn resonance_position() -> Outcome {
    let found = peaks(5.0, -1.0);
    let ok = found.len() == 1 && (found[0].0 + 0.22).abs() <= 0.03 && found[0].1 >= 0.99;
    (ok, format!("peaks {found:?}"))
}

fn double_peak_window() -> Outcome {
    let weak = peaks(4.0, -2.0).len();
    let strong = peaks(4.0, -2.9).len();
    (
        weak == 1 && strong == 2,
        format!("{weak} peak(s) at g=-2.0, {strong} at g=-2.9"),
    )
}

fn double_minimum_single_peak() -> Outcome {
    let grid: Vec<f64> = (0..20).map(|i| -6.0 + 5.8 * i as f64 / 19.0).collect();
    let curve = resonance_curve(&p(1.0, -1.0), &grid);
    let counts: Vec<usize> = curve.entries.iter().map(|e| e.peaks.len()).collect();
    if counts.iter().any(|&n| n != 1) {
        return (false, format!("peak counts {counts:?}"));
    }
    // Ordered by increasing |g|.
    let energies: Vec<f64> = curve
        .entries
        .iter()
        .rev()
        .map(|e| e.peaks[0].energy)
        .collect();
    let decreasing = energies.windows(2).all(|w| w[1] < w[0]);
    (
        decreasing,
        format!(
            "E_res from {:.4} (g=-0.2) to {:.4} (g=-6)",
            energies[0], energies[19]
        ),
    )
}

fn quasi_bound_colocation() -> Outcome {
    let params = p(5.0, -1.0);
    let found = peaks(5.0, -1.0);
    let Some(&(e_res, _)) = found.first() else {
        return (false, "no resonance".into());
    };
    let step = 5.0 / (DEFAULT_GRID - 1) as f64;
    let grid: Vec<f64> = (1..DEFAULT_GRID - 1)
        .map(|i| -5.0 + step * i as f64)
        .collect();
    let results: Vec<_> = sweep(&grid, 6, &params, SWEEP_EXCLUSION)
        .into_iter()
        .map(|pt| pt.outcome.unwrap())
        .collect();
    let mut worst: f64 = 0.0;
    for label in [1, 2, 3, 4] {
        let (i, _) = results
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.occupation[&label].total_cmp(&b.1.occupation[&label]))
            .unwrap();
        worst = worst.max((grid[i] - e_res).abs());
    }
    (
        worst <= 2.0 * step,
        format!(
            "E_res={e_res:.5}, max occupation offset {worst:.4} (limit {:.4})",
            2.0 * step
        ),
    )
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst_root: f64 = 0.0;
    let mut draws = 0;
    while draws < 10_000 {
        let omega = rng.gen_range(0.1..10.0);
        let energy = rng.gen_range(-30.0..30.0);
        let Ok(roots) = dispersion::solve_wavevectors(energy, &p(omega, -1.0)) else {
            continue;
        };
        let ours: Vec<_> = roots[2..].iter().map(|w| w.k).collect();
        let oracle = companion_quartet(energy, omega);
        let scale = oracle.iter().map(|z| z.norm()).fold(1.0, f64::max);
        worst_root = worst_root.max(max_abs_diff_sorted(ours, oracle) / scale);
        draws += 1;
    }
    let mut worst_flux: f64 = 0.0;
    for omega in [1.0, 5.0] {
        let params = p(omega, -1.0);
        for i in 0..=1000 {
            let k = -5.0 + 0.01 * i as f64;
            for b in [Branch::Upper, Branch::Middle, Branch::Lower] {
                let v = dispersion::flux(b, k, &params);
                let rel = (v - group_velocity_fd(b, k, &params)).abs() / v.abs().max(1.0);
                worst_flux = worst_flux.max(rel);
            }
        }
    }
    (
        worst_root <= 1e-10 && worst_flux <= 1e-8,
        format!("roots {worst_root:.1e} (10^4 draws), flux {worst_flux:.1e}"),
    )
}

fn bound_states() -> Outcome {
    let dm = p(1.0, -1.0);
    let found = find_bound_states(&dm, default_bound_window(&dm), DEFAULT_BOUND_GRID).unwrap();
    let dm_ok = found
        .iter()
        .any(|&e| e < -1.25 && secular(e, &dm).unwrap() <= 1e-8);
    let mut sm = Vec::new();
    for g in [-0.2, -0.1, -0.05] {
        let params = p(4.0, g);
        let e =
            find_bound_states(&params, default_bound_window(&params), DEFAULT_BOUND_GRID).unwrap();
        sm.push(e.first().copied());
    }
    let sm_ok = sm.iter().all(Option::is_some)
        && sm.windows(2).all(|w| w[0].unwrap() < w[1].unwrap())
        && sm.iter().all(|e| e.unwrap() < -4.0);
    (
        dm_ok && sm_ok,
        format!("Ω=1,g=-1: {found:?}; Ω=4, g=-0.2,-0.1,-0.05: {sm:?}"),
    )
}

fn free_particle_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut worst: f64 = 0.0;
    let mut points = 0;
    while points < 100 {
        let omega = rng.gen_range(0.2..8.0);
        let energy = rng.gen_range(-1.0 - omega * omega / 4.0..omega + 10.0);
        let params = p(omega, 0.0);
        let Ok(set) = dispersion::build_channel_set(energy, &params) else {
            continue;
        };
        let incoming: Vec<usize> = set.incoming_labels().collect();
        if incoming.is_empty() {
            continue;
        }
        for label in incoming {
            let r = solve_scattering(energy, label, &params).unwrap();
            worst = worst.max((r.transmission[&label] - 1.0).abs());
        }
        points += 1;
    }
    (
        worst <= 1e-12,
        format!("max |T_ii - 1| = {worst:.1e} over {points} points"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("flux conservation", flux_conservation),
        (
            "highest-threshold transparency",
            highest_threshold_transparency,
        ),
        (
            "middle-threshold total reflection",
            middle_threshold_reflection,
        ),
        (
            "single-minimum lowest-threshold transparency",
            lowest_threshold_transparency,
        ),
        (
            "double-minimum lowest-threshold anomaly",
            double_minimum_anomaly,
        ),
        ("resonance position", resonance_position),
        ("single-minimum double-peak window", double_peak_window),
        (
            "double-minimum single-peak rule",
            double_minimum_single_peak,
        ),
        ("quasi-bound co-location", quasi_bound_colocation),
        ("oracle equivalence", oracle_equivalence),
        ("bound states", bound_states),
        ("free-particle identity", free_particle_identity),
    ];
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let (ok, detail) = check();
        failed += !ok as usize;
        println!(
            "{} {:>2} {name}: {detail}",
            if ok { "PASS" } else { "FAIL" },
            n + 1
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
