use narrowfront_core::pde::{front_position, front_speed, solve_limit_1d, FrontSample};
use narrowfront_core::reflected_sde::{step_reflect, State};
use narrowfront_core::rng::{substream, Domain};
use narrowfront_core::stats::Accumulator;
use narrowfront_core::wavefront::{bistable_speed, Intervals, StepProfile};
use narrowfront_core::{Axis, Grid, ProfileFamily, Reaction, TubeProfile};
use proptest::prelude::*;
use rand::RngCore;

fn sinusoidal() -> TubeProfile {
    TubeProfile::new(
        ProfileFamily::Sinusoidal {
            base: 1.0,
            amplitude: 0.3,
            wavenumber: 1.5,
            phase: 0.2,
        },
        -10.0,
        10.0,
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn reflected_step_stays_in_closed_strip(
        x in -5.0..5.0f64,
        frac in 0.05..0.95f64,
        dw1 in -0.02..0.02f64,
        dw2 in -0.02..0.02f64,
    ) {
        let p = sinusoidal();
        let eps = 0.1;
        let s = p.section(x).unwrap();
        let y = eps * (s.lower.value + frac * (s.upper.value - s.lower.value));
        let out = step_reflect(State { x, y }, dw1, dw2, &p, eps).unwrap();
        let s2 = p.section(out.state.x).unwrap();
        let tol = 1e-9;
        prop_assert!(out.state.y >= eps * s2.lower.value - tol && out.state.y <= eps * s2.upper.value + tol);
        prop_assert!(out.delta_l >= 0.0);
        prop_assert_eq!(out.side.is_none(), out.delta_l == 0.0);
        let moved = (out.state.x - x - dw1).hypot(out.state.y - y - dw2);
        prop_assert!((moved - out.delta_l).abs() < 1e-9);
    }

    #[test]
    fn accumulator_merge_matches_sequential(xs in prop::collection::vec(-10.0..10.0f64, 2..60), cut in 0usize..60) {
        let cut = cut.min(xs.len());
        let all: Accumulator = xs.iter().copied().collect();
        let mut left: Accumulator = xs[..cut].iter().copied().collect();
        let right: Accumulator = xs[cut..].iter().copied().collect();
        left.merge(&right);
        prop_assert_eq!(left.n, all.n);
        prop_assert!((left.mean - all.mean).abs() < 1e-12);
        prop_assert!((left.variance() - all.variance()).abs() < 1e-9 * (1.0 + all.variance()));
    }

    #[test]
    fn intervals_are_sorted_disjoint_and_cover_inputs(raw in prop::collection::vec((-5.0..5.0f64, 0.0..2.0f64), 1..8)) {
        let spans: Vec<(f64, f64)> = raw.iter().map(|&(a, w)| (a, a + w)).collect();
        let iv = Intervals::new(spans.clone()).unwrap();
        prop_assert!(iv.spans.windows(2).all(|w| w[0].1 < w[1].0));
        for (a, b) in spans {
            prop_assert!(iv.contains(a) && iv.contains(b) && iv.contains(0.5 * (a + b)));
        }
    }

    #[test]
    fn step_closed_forms_scale_with_x2(d1 in 0.2..2.0f64, ratio in 2.1..6.0f64, x2 in 0.2..3.0f64, lam in 0.5..3.0f64) {
        let s = StepProfile::new(d1, ratio * d1, x2).unwrap();
        let t = StepProfile::new(d1, ratio * d1, lam * x2).unwrap();
        prop_assert!(s.t0().unwrap() < s.t1().unwrap());
        prop_assert!(s.x1().unwrap() < x2);
        prop_assert!((t.t0().unwrap() - lam * s.t0().unwrap()).abs() < 1e-12 * lam);
        prop_assert!((t.t1().unwrap() - lam * s.t1().unwrap()).abs() < 1e-12 * lam);
    }

    #[test]
    fn bistable_speed_scales_with_root_surface_ratio(w in 0.2..5.0f64, mu in 0.01..0.49f64) {
        let unit = TubeProfile::constant(1.0, -1.0, 1.0).unwrap();
        let p = TubeProfile::constant(w, -1.0, 1.0).unwrap();
        let a1 = bistable_speed(&unit, mu, 0.0).unwrap();
        let aw = bistable_speed(&p, mu, 0.0).unwrap();
        prop_assert!((aw / a1 - w.sqrt().recip()).abs() < 1e-12);
    }

    #[test]
    fn substreams_are_reproducible_and_distinct(master in any::<u64>(), key in any::<u64>(), i in 0u64..1000) {
        let a = substream(master, Domain::Reflected, &[key], i).next_u64();
        prop_assert_eq!(a, substream(master, Domain::Reflected, &[key], i).next_u64());
        prop_assert_ne!(a, substream(master, Domain::Reflected, &[key], i + 1).next_u64());
        prop_assert_ne!(a, substream(master, Domain::Limit, &[key], i).next_u64());
    }

    #[test]
    fn linear_track_regresses_to_its_slope(v in -3.0..3.0f64, x0 in -5.0..5.0f64) {
        let samples: Vec<FrontSample> = (0..20)
            .map(|i| {
                let t = 0.5 * i as f64;
                FrontSample { t, x: Some(x0 + v * t), at_edge: false, monotone: true }
            })
            .collect();
        prop_assert!((front_speed(&samples, 1.0, 9.0).unwrap() - v).abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn kpp_solution_obeys_maximum_principle(a in 0.0..1.0f64, c in -2.0..2.0f64, w in 0.3..2.0f64, rate in 0.1..2.0f64) {
        let p = sinusoidal();
        let grid = Grid::new_1d(Axis::with_spacing(-10.0, 10.0, 0.1).unwrap(), 1.0, 2e-3, 50);
        let u = solve_limit_1d(&p, &Reaction::kpp(rate), |x| a * (-((x - c) / w).powi(2)).exp(), &grid).unwrap();
        prop_assert!(u.values.iter().all(|&v| (-1e-12..=1.0 + 1e-12).contains(&v)));
        let s = front_position(&u, 2.0);
        prop_assert!(s.iter().all(|f| f.x.is_none()));
    }
}
