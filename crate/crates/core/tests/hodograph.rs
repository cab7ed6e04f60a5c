use proptest::prelude::*;
use sonic_core::boundary::{BoundaryJets, BoundaryPoint};
use sonic_core::hodograph::{
    apply_t, check_strong_determinacy, default_grid, lambdas, psi_phi, reconstruct_bar_fields, solve,
    solve_fixed_point, sources, State, TimeFactors,
};
use sonic_core::iteration::weighted_norm;
use sonic_core::{
    weighted_distance, Error, FieldTriple, GasConstants, HodographBoundary, Jet, LateralCurve, ShearedGrid,
    SolverSettings,
};

fn air() -> GasConstants {
    GasConstants::new(1.4).unwrap()
}

/// `a0 = a1 = -0.5`, `H0 = 0` on `[-0.6, 0]`.
fn constant_boundary() -> HodographBoundary {
    HodographBoundary::from_functions(-0.6, 0.0, 61, |r| {
        let x = Jet::from_derivatives(&[-r, -1.0]);
        Ok(BoundaryJets {
            a0: Jet::constant(-0.5),
            a1: Jet::constant(-0.5),
            h0: Jet::constant(0.0),
            x_bar: x,
            y_bar: x,
            s0: Jet::constant(1.4f64.powf(-1.4)),
            b0: Jet::constant(3.0),
        })
    })
    .unwrap()
}

/// Zero-state first source with constant `a0`, `a1` and `H0 = 0`, written
/// out from the displayed formula.
fn b1_zero_state(t: f64, a0: f64, a1: f64) -> f64 {
    let k = 0.2;
    let t2 = t * t;
    let f = (1.0 - t2) * (k + 1.0 - t2);
    let vp = a0 + a1 * t;
    let um = -a0 + a1 * t;
    let brace = (k + 1.0) * 2.0 * t * a1 - t2 * (k + 2.0 - t2) * vp;
    let last = (k + 2.0 - 2.0 * t2) * um * vp * t;
    (-a1 * brace + last) / (f * vp)
}

/// Composite Gauss-Legendre (5 points) on `n` panels.
fn gauss(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let x = [0.0, 0.538_469_310_105_683_1, -0.538_469_310_105_683_1, 0.906_179_845_938_664, -0.906_179_845_938_664];
    let w = [
        0.568_888_888_888_888_9,
        0.478_628_670_499_366_5,
        0.478_628_670_499_366_5,
        0.236_926_885_056_189_1,
        0.236_926_885_056_189_1,
    ];
    let h = (b - a) / n as f64;
    (0..n)
        .map(|p| {
            let m = a + (p as f64 + 0.5) * h;
            (0..5).map(|q| w[q] * f(m + 0.5 * h * x[q])).sum::<f64>() * 0.5 * h
        })
        .sum()
}

fn small_grid(hb: &HodographBoundary, delta: f64) -> ShearedGrid {
    default_grid(hb, &air(), delta, 16, 17, 3.0).unwrap()
}

#[test]
fn first_sweep_matches_quadrature_of_the_zero_state_source() {
    let hb = constant_boundary();
    let xi = 0.2;
    let oracle = gauss(|t| b1_zero_state(t, -0.5, -0.5), 0.0, xi, 64);
    let err = |nt: usize| {
        let g = default_grid(&hb, &air(), xi, nt, 17, 3.0).unwrap();
        let out = apply_t(&FieldTriple::zeros(&g), &hb, &air()).unwrap();
        assert!(out.f[2].iter().all(|&w| w == 0.0));
        (0..g.nr).map(|i| (out.get(0, nt, i) - oracle).abs()).fold(0.0, f64::max)
    };
    let (coarse, fine) = (err(8), err(16));
    assert!(fine < 1e-6 * oracle.abs(), "{fine} vs {oracle}");
    assert!(coarse / fine > 12.0, "{coarse} / {fine}");
}

#[test]
fn constant_data_converge_with_contraction() {
    let hb = constant_boundary();
    let st = SolverSettings {
        delta: 0.2,
        nt: 16,
        nr: 17,
        max_halvings: 0,
        ..Default::default()
    };
    let sol = solve(&hb, &air(), &st).unwrap();
    assert!(sol.report.converged);
    assert!(sol.report.max_ratio_from(3).unwrap() < 1.0);
    assert!(sol.report.bound_holds());
    assert!(weighted_norm(&sol.fields) <= sol.m_est);
    assert!(check_strong_determinacy(&sol.fields, &hb, &air()).unwrap().passed());
}

#[test]
fn infinite_tolerance_stops_after_one_sweep() {
    let hb = constant_boundary();
    let g = small_grid(&hb, 0.1);
    let (f, rep) = solve_fixed_point(&hb, &air(), &g, f64::INFINITY, 50, 1e9).unwrap();
    assert_eq!(rep.iterations(), 1);
    assert!(rep.converged);
    assert_eq!(f, apply_t(&FieldTriple::zeros(&g), &hb, &air()).unwrap());
}

#[test]
fn huge_delta_fails() {
    let gc = air();
    let data = sonic_core::cases::smoke(0.6);
    let hb = sonic_core::boundary::to_hodograph(&sonic_core::boundary::derive_boundary(&data, &gc).unwrap()).unwrap();
    let st = SolverSettings {
        delta: 0.99,
        nt: 16,
        nr: 17,
        max_halvings: 0,
        ..Default::default()
    };
    let err = solve(&hb, &gc, &st).unwrap_err();
    assert!(
        matches!(err, Error::NoContraction { .. } | Error::DomainExit { .. } | Error::SingularDenominator { .. }),
        "{err:?}"
    );
}

#[test]
fn fixed_lateral_boundaries_lose_determinacy() {
    let gc = air();
    let data = sonic_core::cases::smoke(0.6);
    let hb = sonic_core::boundary::to_hodograph(&sonic_core::boundary::derive_boundary(&data, &gc).unwrap()).unwrap();
    let g = ShearedGrid::new(0.1, 16, 17, LateralCurve::fixed(hb.r1), LateralCurve::fixed(hb.r2)).unwrap();
    let rep = check_strong_determinacy(&FieldTriple::zeros(&g), &hb, &gc).unwrap();
    match rep.first_exit {
        Some(Error::DomainExit { t, .. }) => assert!(t > 0.0),
        other => panic!("expected a lateral exit, got {other:?}"),
    }
    let shrunk = small_grid(&hb, 0.1);
    assert!(check_strong_determinacy(&FieldTriple::zeros(&shrunk), &hb, &gc).unwrap().passed());
}

#[test]
fn bar_fields_take_boundary_traces_at_zero() {
    let hb = constant_boundary();
    let g = small_grid(&hb, 0.1);
    let [u, v, h] = reconstruct_bar_fields(&FieldTriple::zeros(&g), &hb).unwrap();
    for i in 0..g.nr {
        let k = g.index(0, i);
        assert_eq!(u[k], 0.5);
        assert_eq!(v[k], -0.5);
        assert_eq!(h[k], 0.0);
    }
    let k = g.index(16, 3);
    assert!((u[k] - (0.5 - 0.5 * 0.1)).abs() < 1e-15);
    assert!((v[k] - (-0.5 - 0.5 * 0.1)).abs() < 1e-15);
}

#[test]
fn weighted_distance_of_quartic_fields() {
    let g = ShearedGrid::new(0.5, 8, 5, LateralCurve::fixed(0.0), LateralCurve::fixed(1.0)).unwrap();
    let a = FieldTriple::zeros(&g);
    let b = FieldTriple::from_fn(&g, |t, _| [-3.0 * t.powi(4), -3.0 * t.powi(4), t.powi(6)]);
    let d = weighted_distance(&a, &b).unwrap();
    assert!((d - 1.5625).abs() < 1e-14);
    assert_eq!(d, weighted_distance(&b, &a).unwrap());
    assert_eq!(weighted_distance(&b, &b).unwrap(), 0.0);
}

#[test]
fn vanishing_a1_makes_the_third_speed_singular() {
    let gc = air();
    let bp = BoundaryPoint {
        a0: -0.5,
        a1: 0.0,
        ..Default::default()
    };
    let tf = TimeFactors::new(0.05, &gc);
    let err = lambdas(&State::new(0.0, 0.0, 0.0, 0.05), &tf, 0.0, &bp).unwrap_err();
    assert!(matches!(err, Error::SingularDenominator { .. }));
}

#[test]
fn psi_phi_with_pressure_gradient() {
    let gc = air();
    let bp = BoundaryPoint {
        a0: -0.5,
        h0: 0.0617143,
        ..Default::default()
    };
    let (psi, phi) = psi_phi(0.0, &bp, &gc);
    assert!((psi + 0.535715).abs() < 1e-5);
    assert!((phi - 0.535715).abs() < 1e-5);
}

fn boundary_point() -> impl Strategy<Value = BoundaryPoint> {
    (-1.0f64..-0.2, -1.0f64..-0.2, 0.0f64..0.2, -1.0f64..1.0, -1.0f64..1.0, -0.5f64..0.5).prop_map(
        |(a0, a1, h0, a0p, a1p, h0p)| BoundaryPoint {
            a0,
            a0p,
            a1,
            a1p,
            h0,
            h0p,
        },
    )
}

proptest! {
    #[test]
    fn psi_plus_phi_is_twice_a1_t(bp in boundary_point(), t in 0.0f64..0.9) {
        let (psi, phi) = psi_phi(t, &bp, &air());
        prop_assert!((psi + phi - 2.0 * bp.a1 * t).abs() < 1e-14);
    }

    #[test]
    fn flat_h0_gives_no_third_source(bp in boundary_point(), t in 0.01f64..0.3, u in -0.01f64..0.01, v in -0.01f64..0.01, w in -0.01f64..0.01) {
        let gc = air();
        let bp = BoundaryPoint { h0p: 0.0, ..bp };
        let b = sources(&State::new(u, v, w, t), &TimeFactors::new(t, &gc), 0.0, &bp, &gc).unwrap();
        prop_assert_eq!(b[2], 0.0);
    }

    /// Reflecting `r -> -r` with `U~ = V`, `V~ = U`, `W~ = -W`, `a0~ = -a0`,
    /// `a1~ = a1`, `H0~ = -H0` swaps the first two families.
    #[test]
    fn reflection_swaps_the_first_two_families(bp in boundary_point(), t in 0.01f64..0.3, u in -0.05f64..0.05, v in -0.05f64..0.05, w in -0.05f64..0.05) {
        let gc = air();
        let tf = TimeFactors::new(t, &gc);
        let rb = BoundaryPoint { a0: -bp.a0, a0p: bp.a0p, a1: bp.a1, a1p: -bp.a1p, h0: -bp.h0, h0p: bp.h0p };
        let st = State::new(u, v, w, t);
        let rs = State::new(v, u, -w, t);
        let (l, b) = (lambdas(&st, &tf, 0.0, &bp).unwrap(), sources(&st, &tf, 0.0, &bp, &gc).unwrap());
        let (rl, rbs) = (lambdas(&rs, &tf, 0.0, &rb).unwrap(), sources(&rs, &tf, 0.0, &rb, &gc).unwrap());
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * (1.0 + a.abs());
        prop_assert!(close(rl[0], -l[1]) && close(rl[1], -l[0]) && close(rl[2], -l[2]));
        prop_assert!(close(rbs[0], b[1]) && close(rbs[1], b[0]) && close(rbs[2], -b[2]));
    }

    #[test]
    fn sweeps_keep_a_zero_trace(c in proptest::collection::vec(-0.5f64..0.5, 3)) {
        let hb = constant_boundary();
        let g = small_grid(&hb, 0.1);
        let seed = FieldTriple::from_fn(&g, |t, r| [c[0] * t * t, c[1] * t * t * (1.0 + r), c[2] * t * t]);
        let out = apply_t(&seed, &hb, &air()).unwrap();
        for comp in 0..3 {
            prop_assert!(out.level(comp, 0).iter().all(|&x| x == 0.0));
        }
    }
}
