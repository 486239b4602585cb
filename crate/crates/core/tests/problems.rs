mod common;

use switchvi::linalg::{Matrix, Vector};
use switchvi::problem::{Regularizer, VIProblem};
use switchvi::problems::{
    affine_problem, garnet_mdp, logistic_loss, nash_cournot, nash_cournot_scenario, nonmonotone_rank2, sparse_logistic,
    strongly_monotone_affine, zero_sum_from_matrix, zero_sum_game, NashCournotParams, NashScenario, OperatorData,
};
use switchvi::prox::FeasibleSetSpec;
use switchvi::rng::{make_rng, standard_normal};
use switchvi::solvers::{solve, Method, SolveConfig, Status};

fn v(xs: &[f64]) -> Vector {
    Vector::from_column_slice(xs)
}

fn residual(p: &VIProblem, x: &Vector) -> f64 {
    (x - p.prox(&(x - p.apply(x)), 1.0)).norm()
}

#[test]
fn nash_single_firm_by_hand() {
    let params = NashCournotParams { gamma: 1.0, beta: v(&[1.0]), c: v(&[0.0]), l_cap: v(&[1.0]) };
    let p = nash_cournot(params, 0).unwrap();
    // p(Q) = 1, p'(Q) = −1/5000, marginal cost 5000
    let f = p.apply(&v(&[5000.0]));
    assert!((f[0] - 5000.0).abs() < 1e-9, "{}", f[0]);
}

#[test]
fn nash_scenario_parameters_stay_in_their_ranges() {
    for (scenario, gamma, lo, hi) in [(NashScenario::I, 1.1, 0.5, 2.0), (NashScenario::II, 1.5, 0.3, 4.0)] {
        let p = nash_cournot_scenario(200, scenario, 7).unwrap();
        let Some(OperatorData::NashCournot(q)) = p.operator().data() else { panic!() };
        assert_eq!(q.gamma, gamma);
        assert!(q.beta.iter().all(|b| (lo..hi).contains(b)));
        assert!(q.c.iter().all(|c| (1.0..100.0).contains(c)));
        assert!(q.l_cap.iter().all(|l| (0.5..5.0).contains(l)));
        assert!(p.x0.iter().all(|x| (0.0..1.0).contains(x)));
        assert!(matches!(p.regularizer, Regularizer::Indicator { set: FeasibleSetSpec::NonnegOrthant }));
    }
}

#[test]
fn logistic_weight_matches_column_sums() {
    let p = sparse_logistic(40, 25, 3).unwrap();
    let Some(OperatorData::Logistic { d }) = p.operator().data() else { panic!() };
    // rows of D are −bᵢaᵢ, so Σᵢ bᵢaᵢ is minus the column sums of D
    let colsum = (0..d.ncols()).map(|j| d.column(j).sum().abs()).fold(0.0, f64::max);
    let Regularizer::L1 { weight } = p.regularizer else { panic!() };
    assert!((weight - 0.005 * colsum).abs() <= 1e-12 * weight);
    assert_eq!(p.x0, Vector::zeros(40));
}

#[test]
fn logistic_operator_is_the_loss_gradient() {
    let p = sparse_logistic(8, 12, 4).unwrap();
    let Some(OperatorData::Logistic { d }) = p.operator().data() else { panic!() };
    let mut rng = make_rng(9);
    for _ in 0..5 {
        let x = Vector::from_fn(8, |_, _| 0.3 * standard_normal(&mut rng));
        let g = common::central_gradient(|y| logistic_loss(d, y), &x, 1e-5);
        assert!((p.apply(&x) - g).amax() < 1e-6);
    }
}

#[test]
fn one_by_one_game_is_solved_at_the_start() {
    let p = zero_sum_from_matrix(Matrix::from_element(1, 1, 0.7)).unwrap();
    assert_eq!(residual(&p, &p.x0), 0.0);
    let run = solve(&p, Method::Alg2, &SolveConfig::default()).unwrap();
    assert_eq!(run.status, Status::Converged);
}

#[test]
fn game_lipschitz_constant_is_the_spectral_norm() {
    let p = zero_sum_game(6, 4, 2).unwrap();
    let Some(OperatorData::ZeroSum { a }) = p.operator().data() else { panic!() };
    let sv = a.clone().svd(false, false).singular_values.max();
    assert!((p.lipschitz.unwrap() - sv).abs() < 1e-10);
}

#[test]
fn mdp_rows_and_value_iteration() {
    for gamma in [0.9, 0.99] {
        let p = garnet_mdp(50, 5, 5, gamma, 11).unwrap();
        let Some(OperatorData::Garnet(m)) = p.operator().data() else { panic!() };
        for row in &m.transitions {
            assert!(row.len() <= 5);
            assert!((row.iter().map(|(_, q)| q).sum::<f64>() - 1.0).abs() <= 1e-12);
            assert!(row.iter().all(|(_, q)| *q >= 0.0));
        }
        let vstar = Vector::from_vec(common::value_iteration(m, 1e-12));
        assert!(p.apply(&vstar).amax() < 1e-10, "gamma {gamma}");
    }
}

#[test]
fn affine_two_dimensional_solution_beats_a_fine_grid() {
    let m = Matrix::from_row_slice(2, 2, &[3.0, 1.0, -0.5, 2.0]);
    let q = v(&[-4.0, -1.0]);
    let radius = 2.0;
    let set = FeasibleSetSpec::Simplex { radius };
    let p = affine_problem(m.clone(), q.clone(), Regularizer::indicator(set), v(&[1.0, 1.0])).unwrap();
    let run = solve(&p, Method::Alg2, &SolveConfig { tol: 1e-12, ..SolveConfig::default() }).unwrap();
    assert_eq!(run.status, Status::Converged);
    let x = &run.x;
    assert!(common::affine_simplex_kkt_error(&m, &q, radius, x) < 1e-10);
    let (exact, _) = common::affine_simplex_kkt_solve(&m, &q, radius, x).unwrap();
    assert!((x - &exact).amax() < 1e-10);
    let f = &m * x + &q;
    for k in 0..=20_000 {
        let y1 = radius * k as f64 / 20_000.0;
        let y = v(&[y1, radius - y1]);
        assert!(f.dot(&(y - x)) >= -1e-9, "grid point {k}");
    }
}

#[test]
fn affine_generator_builds_a_strongly_monotone_matrix() {
    let p = strongly_monotone_affine(30, 5).unwrap();
    let Some(OperatorData::Affine { m, .. }) = p.operator().data() else { panic!() };
    let sym = (m + m.transpose()) * 0.5;
    let lo = sym.symmetric_eigenvalues().min();
    assert!(lo > 0.0);
    assert!((p.strong_monotonicity.unwrap() - lo).abs() < 1e-8 * lo.abs().max(1.0));
}

#[test]
fn rank2_matches_a_dense_recomputation() {
    let p = nonmonotone_rank2(4, 6).unwrap();
    let Some(OperatorData::Rank2 { a, b }) = p.operator().data() else { panic!() };
    let mut rng = make_rng(1);
    for _ in 0..10 {
        let x = Vector::from_fn(4, |_, _| standard_normal(&mut rng));
        let t1 = a * x.map(f64::sin);
        let t2 = b * x.map(f64::exp);
        let mx = &t1 * t1.transpose() + &t2 * t2.transpose();
        assert!((p.apply(&x) - mx * &x).amax() < 1e-10 * (1.0 + t2.norm_squared() * x.norm()));
    }
    assert!(p.x0.amax() < 1e-2);
    assert!(!p.monotone);
}

#[test]
fn snapshots_round_trip_through_json() {
    let problems = vec![
        strongly_monotone_affine(5, 1).unwrap(),
        zero_sum_game(3, 2, 1).unwrap(),
        sparse_logistic(6, 4, 1).unwrap(),
        nash_cournot_scenario(5, NashScenario::II, 1).unwrap(),
        garnet_mdp(6, 2, 3, 0.9, 1).unwrap(),
        nonmonotone_rank2(4, 1).unwrap(),
    ];
    let mut rng = make_rng(0);
    for p in problems {
        let snap = p.snapshot().unwrap();
        let json = serde_json::to_string(&snap).unwrap();
        let back = VIProblem::from_snapshot(serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back.snapshot().unwrap(), snap, "{}", p.name);
        let x = Vector::from_fn(p.dim(), |_, _| standard_normal(&mut rng).abs());
        assert_eq!(back.apply(&x), p.apply(&x), "{}", p.name);
    }
}

#[test]
fn generators_reject_empty_dimensions() {
    assert!(strongly_monotone_affine(0, 0).is_err());
    assert!(zero_sum_game(0, 3, 0).is_err());
    assert!(sparse_logistic(0, 3, 0).is_err());
    assert!(nonmonotone_rank2(0, 0).is_err());
    assert!(garnet_mdp(0, 1, 1, 0.9, 0).is_err());
}
