use econokit::linreg::{f_test, fit_ols, tail_prob, Dist, RegressionData, Sides};
use econokit::simulate::{run_seed, NormalStream};
use proptest::prelude::*;

fn random_data(rng: &mut NormalStream, t: usize, free: usize, intercept: bool) -> RegressionData {
    let cols: Vec<(String, Vec<f64>)> =
        (0..free).map(|j| (format!("x{j}"), (0..t).map(|_| rng.normal(1.0)).collect())).collect();
    let y: Vec<f64> = (0..t)
        .map(|i| 0.7 + cols.iter().enumerate().map(|(j, c)| (j as f64 - 1.0) * c.1[i]).sum::<f64>() + rng.normal(1.0))
        .collect();
    RegressionData::new("y", y, cols, intercept).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fit_identities(seed in any::<u64>(), t in 8usize..40, free in 1usize..5, intercept in any::<bool>()) {
        let mut rng = NormalStream::new(seed);
        let data = random_data(&mut rng, t, free, intercept);
        let fit = fit_ols(&data).unwrap();
        let y = data.response();
        let scale = y.iter().map(|v| v.abs()).fold(0.0, f64::max);
        for i in 0..t {
            prop_assert!((fit.fitted[i] + fit.residuals[i] - y[i]).abs() <= 1e-10 * scale.max(1.0));
        }
        if intercept {
            let s: f64 = fit.residuals.iter().sum();
            prop_assert!(s.abs() <= 1e-8 * scale.max(1.0));
        }
        for j in 0..fit.k {
            let col = data.column(j);
            let dot: f64 = col.iter().zip(&fit.residuals).map(|(a, b)| a * b).sum();
            let norm = col.iter().map(|v| v * v).sum::<f64>().sqrt() * fit.residuals.iter().map(|v| v * v).sum::<f64>().sqrt();
            prop_assert!(dot.abs() <= 1e-8 * norm.max(1e-300));
            prop_assert_eq!(fit.t_stat[j], fit.coef[j] / fit.se[j]);
            prop_assert_eq!(fit.ci95[j], (fit.coef[j] - 1.96 * fit.se[j], fit.coef[j] + 1.96 * fit.se[j]));
        }
        prop_assert!(fit.adj_r2 <= fit.r2);
        prop_assert_eq!(fit.ser, (fit.ssr / (t - fit.k) as f64).sqrt());
        let expect = fit.k as f64 * ((t as f64).ln() - 2.0);
        prop_assert!(((fit.bic - fit.aic) - expect).abs() <= 8.0 * f64::EPSILON * fit.aic.abs().max(fit.bic.abs()));
    }

    #[test]
    fn r2_never_falls_when_a_column_is_appended(seed in any::<u64>(), t in 10usize..40, free in 1usize..4) {
        let mut rng = NormalStream::new(seed);
        let data = random_data(&mut rng, t, free, true);
        let extra: Vec<f64> = (0..t).map(|_| rng.normal(1.0)).collect();
        let small = fit_ols(&data).unwrap();
        let big = fit_ols(&data.with_column("extra", extra).unwrap()).unwrap();
        prop_assert!(big.r2 >= small.r2 - 1e-12);
        prop_assert!(big.ssr <= small.ssr * (1.0 + 1e-12));
    }
}

#[test]
fn adjusted_r2_can_fall_when_a_column_is_appended() {
    let mut fell = 0;
    for seed in 0..50 {
        let mut rng = NormalStream::new(seed);
        let data = random_data(&mut rng, 20, 2, true);
        let extra: Vec<f64> = (0..20).map(|_| rng.normal(1.0)).collect();
        let small = fit_ols(&data).unwrap();
        let big = fit_ols(&data.with_column("extra", extra).unwrap()).unwrap();
        assert!(big.r2 >= small.r2);
        if big.adj_r2 < small.adj_r2 {
            fell += 1;
        }
    }
    assert!(fell > 0);
}

#[test]
fn f_test_matches_double_fit_oracle() {
    let mut rng = NormalStream::new(8);
    let t = 60;
    let x: Vec<Vec<f64>> = (0..3).map(|_| (0..t).map(|_| rng.normal(1.0)).collect()).collect();
    let y: Vec<f64> = (0..t).map(|i| 1.0 + 0.4 * x[0][i] + 0.3 * x[1][i] + rng.normal(1.0)).collect();
    let full = RegressionData::new(
        "y",
        y.clone(),
        vec![("a".into(), x[0].clone()), ("b".into(), x[1].clone()), ("c".into(), x[2].clone())],
        true,
    )
    .unwrap();
    let restricted = RegressionData::new("y", y, vec![("a".into(), x[0].clone())], true).unwrap();
    let fu = fit_ols(&full).unwrap();
    let fr = fit_ols(&restricted).unwrap();
    let f = f_test(&fu, &fr).unwrap();

    let (q, df) = (2.0, (t - 4) as f64);
    let oracle = ((fr.ssr - fu.ssr) / q) / (fu.ssr / df);
    assert!((f.value - oracle).abs() <= 1e-12 * oracle);
    assert_eq!((f.df_num, f.df_den), (2, t - 4));
    let p = tail_prob(Dist::FisherF(q, df), oracle, Sides::One).unwrap();
    assert!((f.p_value - p).abs() <= 1e-12);

    // identical models are not a nested pair
    assert!(f_test(&fu, &fu).is_err());
}

#[test]
fn f_test_size_on_irrelevant_regressor() {
    let runs = 2000;
    let mut rejections = 0;
    for r in 0..runs {
        let mut rng = NormalStream::new(run_seed(90, r));
        let t = 50;
        let x1: Vec<f64> = (0..t).map(|_| rng.normal(1.0)).collect();
        let x2: Vec<f64> = (0..t).map(|_| rng.normal(1.0)).collect();
        let y: Vec<f64> = x1.iter().map(|v| 2.0 + 0.5 * v + rng.normal(1.0)).collect();
        let u = fit_ols(&RegressionData::new("y", y.clone(), vec![("x1".into(), x1.clone()), ("x2".into(), x2)], true).unwrap()).unwrap();
        let rr = fit_ols(&RegressionData::new("y", y, vec![("x1".into(), x1)], true).unwrap()).unwrap();
        if f_test(&u, &rr).unwrap().p_value < 0.05 {
            rejections += 1;
        }
    }
    let rate = rejections as f64 / runs as f64;
    assert!((0.03..=0.07).contains(&rate), "size {rate}");
}
