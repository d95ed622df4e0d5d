use ladm_core::oracle::{energy, integrate, integrate_from, OracleConfig};

const BETAS: [f64; 4] = [0.1, 0.2, 0.5, 0.9];

#[test]
fn energy_and_speed_over_long_horizon() {
    for beta in BETAS {
        let traj = integrate(beta, &OracleConfig::with_t_end(100.0)).unwrap();
        assert!(traj.energy_drift <= 1e-9, "beta = {beta}: drift {}", traj.energy_drift);
        assert!(traj.max_speed() <= beta + 1e-9, "beta = {beta}: {}", traj.max_speed());
        assert!(traj.samples.iter().all(|s| s.v.abs() < 1.0));
    }
}

#[test]
fn time_reversal_returns_to_start() {
    for beta in BETAS {
        let t_end = 20.0;
        let forward = integrate(beta, &OracleConfig::with_t_end(t_end)).unwrap();
        let last = *forward.samples.last().unwrap();
        let back = integrate_from(last.x, -last.v, &OracleConfig::with_t_end(t_end)).unwrap();
        let end = *back.samples.last().unwrap();
        assert!(end.x.abs() < 1e-8, "beta = {beta}: x = {}", end.x);
        assert!((end.v + beta).abs() < 1e-8, "beta = {beta}: v = {}", end.v);
    }
}

#[test]
fn tolerance_refinement_is_consistent() {
    for beta in BETAS {
        let loose = integrate(beta, &OracleConfig::with_t_end(100.0).with_tol(1e-10)).unwrap();
        let tight = integrate(beta, &OracleConfig::with_t_end(100.0).with_tol(1e-12)).unwrap();
        assert!(tight.accepted_steps() > loose.accepted_steps());
        for i in 0..=1000 {
            let t = 0.1 * f64::from(i);
            let d = (loose.position_at(t).unwrap() - tight.position_at(t).unwrap()).abs();
            assert!(d <= 1e-8, "beta = {beta}, t = {t}: {d}");
        }
    }
}

#[test]
fn energy_is_even_in_state() {
    for (x, v) in [(0.3, 0.2), (-1.2, 0.7), (0.0, -0.99)] {
        assert_eq!(energy(x, v).unwrap(), energy(-x, -v).unwrap());
    }
}
