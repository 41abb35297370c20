use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rcm_perc::connection::DEFAULT_QUAD_TOL;
use rcm_perc::ConnectionModel;

fn any_model() -> impl Strategy<Value = ConnectionModel> {
    prop_oneof![
        (0.1f64..5.0).prop_map(|r| ConnectionModel::gilbert(r).unwrap()),
        (0.1f64..5.0, 0.01f64..=1.0).prop_map(|(r, p)| ConnectionModel::penetrable(r, p).unwrap()),
        (0.1f64..5.0, 0.1f64..3.0, 1u32..=16).prop_map(|(r, b, n)| ConnectionModel::soft_sphere(r, b, n).unwrap()),
        (0.1f64..5.0, prop::collection::vec(-0.5f64..1.5, 2..8)).prop_map(|(r, vals)| {
            let k = vals.len() - 1;
            let radii = (0..=k).map(|i| r * i as f64 / k as f64).collect();
            ConnectionModel::tabulated(radii, vals).unwrap()
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn finite_range(model in any_model(), excess in 1e-9f64..100.0) {
        prop_assert_eq!(model.phi_at(model.range() + excess), 0.0);
    }

    #[test]
    fn phi_in_unit_interval(model in any_model(), t in 0.0f64..=1.0) {
        let v = model.phi_at(t * model.range());
        prop_assert!((0.0..=1.0).contains(&v));
        prop_assert_eq!(v, model.phi_at(t * model.range()));
    }
}

proptest! {
    #[test]
    fn soft_sphere_below_gilbert(range in 0.1f64..5.0, n in 1u32..=16, t in 0.0f64..2.0) {
        let s = ConnectionModel::soft_sphere(range, 1.0, n).unwrap();
        let g = ConnectionModel::gilbert(range).unwrap();
        prop_assert!(s.phi_at(t * range) <= g.phi_at(t * range));
    }

    #[test]
    fn penetrable_monotone_in_p(range in 0.1f64..5.0, p in 0.01f64..=1.0, q in 0.01f64..=1.0, t in 0.0f64..2.0) {
        let (lo, hi) = if p <= q { (p, q) } else { (q, p) };
        let a = ConnectionModel::penetrable(range, lo).unwrap();
        let b = ConnectionModel::penetrable(range, hi).unwrap();
        prop_assert!(a.phi_at(t * range) <= b.phi_at(t * range));
    }
}

#[test]
fn soft_sphere_mass_below_gilbert() {
    for d in 1..=5 {
        for n in [1, 6, 12] {
            let s = ConnectionModel::soft_sphere(2.0, 1.0, n).unwrap();
            let g = ConnectionModel::gilbert(2.0).unwrap();
            let ms = s.effective_connectivity_mass(d, DEFAULT_QUAD_TOL).unwrap();
            let mg = g.effective_connectivity_mass(d, DEFAULT_QUAD_TOL).unwrap();
            assert!(ms < mg, "d={d} n={n}");
        }
    }
}

/// Composite Simpson on `R^d ∫_0^1 φ(R u) u^{d-1} du` with 2·10^5 panels.
fn soft_sphere_mass_oracle(d: u32, range: f64, beta: f64, n: u32) -> f64 {
    let f = |u: f64| {
        let phi = if u == 0.0 {
            1.0
        } else {
            1.0 - (-beta / u.powi(n as i32)).exp()
        };
        phi * u.powi(d as i32 - 1)
    };
    let steps = 200_000;
    let h = 1.0 / steps as f64;
    let mut sum = f(0.0) + f(1.0);
    for i in 1..steps {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(i as f64 * h);
    }
    let radial = range.powi(d as i32) * sum * h / 3.0;
    let df = f64::from(d);
    let sphere = 2.0 * std::f64::consts::PI.powf(df / 2.0) / statrs::function::gamma::gamma(df / 2.0);
    sphere * radial
}

#[test]
fn soft_sphere_mass_matches_simpson_oracle() {
    for d in 1..=5 {
        for (beta, n) in [(1.0, 6), (1.0, 12), (0.5, 3), (2.0, 1)] {
            let s = ConnectionModel::soft_sphere(2.0, beta, n).unwrap();
            let got = s.effective_connectivity_mass(d, 1e-10).unwrap();
            let want = soft_sphere_mass_oracle(d, 2.0, beta, n);
            assert!(
                ((got - want) / want).abs() < 1e-9,
                "d={d} beta={beta} n={n}: {got} vs {want}"
            );
        }
    }
}

#[test]
fn penetrable_acceptance_frequency() {
    let model = ConnectionModel::penetrable(2.0, 0.75).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let n = 1_000_000;
    let hits = (0..n)
        .filter(|_| model.decide_connection(&[0.0, 0.0], &[1.2, -0.7], &mut rng))
        .count();
    let sigma = (0.75 * 0.25 / n as f64).sqrt();
    assert!((hits as f64 / n as f64 - 0.75).abs() < 3.0 * sigma);
}

#[test]
fn decision_frequency_tracks_phi() {
    use rand::Rng;
    let models = [
        ConnectionModel::soft_sphere(2.0, 1.0, 6).unwrap(),
        ConnectionModel::tabulated(vec![0.0, 1.0, 2.0], vec![0.9, 0.6, 0.1]).unwrap(),
    ];
    let mut radii_rng = ChaCha8Rng::seed_from_u64(5);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let n = 1_000_000;
    let mut failures = 0;
    for i in 0..20 {
        let model = &models[i % 2];
        let r: f64 = radii_rng.random_range(0.0..2.0);
        let phi = model.phi_at(r);
        let y = [r, 0.0];
        let hits = (0..n)
            .filter(|_| model.decide_connection(&[0.0, 0.0], &y, &mut rng))
            .count();
        let sigma = (phi * (1.0 - phi) / n as f64).sqrt();
        // σ = 0 when φ = 1: the frequency must then be exact
        if (hits as f64 / n as f64 - phi).abs() > 3.0 * sigma {
            failures += 1;
        }
    }
    // 20 radii at 3σ: one miss is within chance (p ≈ 0.05)
    assert!(failures <= 1, "{failures} radii outside 3σ");
}
