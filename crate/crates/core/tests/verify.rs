use sonic_core::boundary::{derive_boundary, to_hodograph};
use sonic_core::hodograph::{solve, SolverSettings};
use sonic_core::inverse::recover_physical;
use sonic_core::verify::{
    bernoulli_consistency, entropy_consistency, residual_characteristic_form, residual_decomposition_xi,
    residual_euler, residual_hodograph_system, ResidualReport,
};
use sonic_core::{GasConstants, LateralCurve, PhysicalSolution, ShearedGrid};

fn air() -> GasConstants {
    GasConstants::new(1.4).unwrap()
}

/// A uniform supersonic state laid on an affine chart.
fn constant_state() -> PhysicalSolution {
    let gc = air();
    let g = ShearedGrid::new(
        0.1,
        16,
        17,
        LateralCurve {
            base: -0.6,
            quadratic: 1.0,
            cubic: 2.0,
        },
        LateralCurve::fixed(0.0),
    )
    .unwrap();
    let n = g.len();
    let node = |k: usize| (g.t(k / g.nr), g.r(k / g.nr, k % g.nr));
    let col = |f: &dyn Fn(f64, f64) -> f64| (0..n).map(|k| f(node(k).0, node(k).1)).collect::<Vec<f64>>();
    let (t0, th) = (0.3f64, -0.2f64);
    let om = t0.acos();
    let st = sonic_core::inverse::physical_state(t0, th, 0.6, 3.0, &gc).unwrap();
    PhysicalSolution {
        grid: g.clone(),
        gc,
        t: vec![t0; n],
        r: col(&|_, r| r),
        x: col(&|t, r| 1.0 + 2.0 * t + 0.5 * r),
        y: col(&|t, r| -t + r),
        theta: vec![th; n],
        omega: vec![om; n],
        alpha: vec![th + om; n],
        beta: vec![th - om; n],
        h: vec![0.0; n],
        s: vec![0.6; n],
        b: vec![3.0; n],
        c: vec![st.c; n],
        u: vec![st.u; n],
        v: vec![st.v; n],
        rho: vec![st.rho; n],
        p: vec![st.p; n],
        e: vec![0.5 * (st.u * st.u + st.v * st.v) + st.p / (0.4 * st.rho); n],
        err: [vec![0.0; n], vec![0.0; n], vec![0.0; n]],
        ubar: vec![0.0; n],
        vbar: vec![0.0; n],
        jac_factor: vec![-1.0; n],
        jac: vec![-1.0; n],
    }
}

fn smoke(n: usize) -> PhysicalSolution {
    let gc = air();
    let hb = to_hodograph(&derive_boundary(&sonic_core::cases::smoke(0.6), &gc).unwrap()).unwrap();
    let st = SolverSettings {
        nt: n - 1,
        nr: n,
        max_halvings: 0,
        ..Default::default()
    };
    let sol = solve(&hb, &gc, &st).unwrap();
    recover_physical(&sol.fields, &hb, &gc).unwrap()
}

#[test]
fn constant_states_have_zero_residuals() {
    let phys = constant_state();
    for rep in [
        residual_characteristic_form(&phys).unwrap(),
        residual_euler(&phys).unwrap(),
        residual_decomposition_xi(&phys).unwrap(),
    ] {
        assert!(rep.max_abs() < 1e-12, "{rep:?}");
    }
    assert!(entropy_consistency(&phys) < 1e-14);
    assert!(bernoulli_consistency(&phys) < 1e-13);
}

#[test]
fn injected_errors_raise_residuals_linearly() {
    let base = smoke(33);
    let plus = |phys: &PhysicalSolution| residual_characteristic_form(phys).unwrap().get("plus").unwrap().max_abs;
    let mass = |phys: &PhysicalSolution| residual_euler(phys).unwrap().get("mass").unwrap().max_abs;
    let theta_bumped = |eps: f64| {
        let mut p = base.clone();
        for k in 0..p.len() {
            p.theta[k] += eps * p.t[k];
        }
        plus(&p)
    };
    let rho_bumped = |eps: f64| {
        let mut p = base.clone();
        for k in 0..p.len() {
            p.rho[k] *= 1.0 + eps * p.t[k];
        }
        mass(&p)
    };
    for (clean, bumped) in [
        (plus(&base), &theta_bumped as &dyn Fn(f64) -> f64),
        (mass(&base), &rho_bumped as &dyn Fn(f64) -> f64),
    ] {
        let (e1, e2) = (bumped(1e-2) - clean, bumped(2e-2) - clean);
        assert!(e1 > 10.0 * clean, "{clean} {e1}");
        assert!((e2 / e1 - 2.0).abs() < 0.2, "{e1} {e2}");
    }
}

#[test]
fn smoke_residuals_converge_at_second_order() {
    let gc = air();
    let hb = to_hodograph(&derive_boundary(&sonic_core::cases::smoke(0.6), &gc).unwrap()).unwrap();
    let run = |n: usize| {
        let st = SolverSettings {
            nt: n - 1,
            nr: n,
            max_halvings: 0,
            ..Default::default()
        };
        let sol = solve(&hb, &gc, &st).unwrap();
        let phys = recover_physical(&sol.fields, &hb, &gc).unwrap();
        [
            residual_hodograph_system(&sol.fields, &hb, &gc).unwrap(),
            residual_characteristic_form(&phys).unwrap(),
            residual_euler(&phys).unwrap(),
            residual_decomposition_xi(&phys).unwrap(),
        ]
    };
    let (a, b) = (run(33), run(65));
    for k in 0..4 {
        let order = ResidualReport::order_of_max(&a[k], &b[k]);
        assert!(order > 1.8, "operator {k}: order {order}");
    }
}
