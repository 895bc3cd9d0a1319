//! Cross-validation of the Bessel-ratio dispersion formulas against the
//! ODE-shooting oracle, and localization of the resonance singularity.

use cylbif_core::dispersion::{self, structural_constants};
use cylbif_core::error::Error;
use cylbif_core::shooting;
use cylbif_core::spectrum::ball_spectrum;

/// 40 regular periods for mode `k`, spread over both branches and away
/// from the singular point `k delta` by at least 1e-2.
fn period_ladder(mu: f64, delta: f64, k: u32) -> Vec<f64> {
    let kf = k as f64;
    let lo = 0.35 * kf * mu;
    let hi = 2.5 * kf * delta;
    let mut out = Vec::new();
    let mut i = 0usize;
    while out.len() < 40 {
        let t = lo + (hi - lo) * i as f64 / 47.0;
        i += 1;
        if (t - kf * delta).abs() < 1e-2 {
            continue;
        }
        out.push(t);
    }
    out
}

#[test]
fn shooting_matches_dispersion_across_dimensions_and_modes() {
    let mut checked = 0usize;
    for n in [1u32, 2, 3, 4, 5] {
        let spec = ball_spectrum(n).unwrap();
        let sc = structural_constants(&spec);
        for k in [1u32, 2, 3] {
            for t in period_ladder(sc.mu, sc.delta, k) {
                let shot = shooting::shoot_c(&spec, k, t).unwrap();
                let disp = dispersion::sigma_k(&spec, k, t).unwrap();
                let diff = (shot.sigma_value - disp).abs();
                assert!(
                    diff <= 1e-6 * (1.0 + disp.abs()),
                    "N={n} k={k} T={t}: shoot {} vs dispersion {disp} (diff {diff:e})",
                    shot.sigma_value
                );
                checked += 1;
            }
        }
    }
    assert_eq!(checked, 5 * 3 * 40);
}

#[test]
fn resonance_localized_at_k_delta() {
    for n in [1u32, 2, 3, 4, 5] {
        let spec = ball_spectrum(n).unwrap();
        let sc = structural_constants(&spec);
        for k in [1u32, 2, 3] {
            let target = k as f64 * sc.delta;
            // y(1) changes sign across the resonance; bisect it.
            let mut lo = target - 1e-3;
            let mut hi = target + 1e-3;
            let y_at = |t: f64| {
                shooting::shoot_profile(&spec, k, t, shooting::DEFAULT_STEP)
                    .unwrap()
                    .y_at_1()
            };
            let y_lo = y_at(lo);
            let y_hi = y_at(hi);
            assert!(
                y_lo * y_hi < 0.0,
                "N={n} k={k}: no sign change of y(1) in [{lo}, {hi}]"
            );
            for _ in 0..40 {
                let mid = 0.5 * (lo + hi);
                if y_at(mid).signum() == y_lo.signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let t_res = 0.5 * (lo + hi);
            assert!(
                (t_res - target).abs() <= 1e-3,
                "N={n} k={k}: resonance at {t_res} vs {target}"
            );
            assert!(y_at(t_res).abs() < 1e-6, "N={n} k={k}: |y(1)| at resonance");
            // shoot_c reports the non-existence as an error there.
            assert!(matches!(
                shooting::shoot_c(&spec, k, t_res),
                Err(Error::Resonance { .. })
            ));
            // sigma_k flips sign across the singular point (+inf -> -inf).
            let left = dispersion::sigma_k(&spec, k, t_res - 1e-3).unwrap();
            let right = dispersion::sigma_k(&spec, k, t_res + 1e-3).unwrap();
            assert!(
                left > 0.0 && right < 0.0,
                "N={n} k={k}: sigma signs {left}, {right} across resonance"
            );
        }
    }
}

#[test]
fn shooting_sees_the_same_roots() {
    // The dispersion roots are genuine sign changes of the oracle too.
    for n in [1u32, 2, 3, 4, 5, 8] {
        let spec = ball_spectrum(n).unwrap();
        for root in [
            cylbif_core::bifurcation::find_t_star(&spec).unwrap().0,
            cylbif_core::bifurcation::find_t_upper_star(&spec).unwrap().0,
        ] {
            let lo = shooting::shoot_c(&spec, 1, root - 1e-6).unwrap().sigma_value;
            let hi = shooting::shoot_c(&spec, 1, root + 1e-6).unwrap().sigma_value;
            assert!(lo < 0.0 && hi > 0.0, "N={n} root {root}: oracle {lo}, {hi}");
        }
    }
}
