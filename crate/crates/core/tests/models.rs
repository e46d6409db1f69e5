use econokit::autoregression::fit_ar;
use econokit::cointegration::egadf_test;
use econokit::simulate::{
    gen_ar, gen_cointegrated_pair, gen_var, gen_verona_like, generate, run_seed, ArDgp, CointDgp, DgpKind, DgpSpec,
    SimSettings, VarDgp, VeronaDgp,
};
use econokit::stability::{adf_test, qlr_candidate_rows, qlr_test, AdfSpec, Deterministics};
use econokit::var::fit_var;
use econokit::QuarterIndex;
use nalgebra::DMatrix;

fn var_dgp() -> VarDgp {
    VarDgp {
        names: vec!["EXP".into(), "IMP".into(), "ACTE".into()],
        intercepts: vec![0.01, 0.02, 0.0],
        coefs: vec![
            DMatrix::from_row_slice(3, 3, &[0.3, 0.1, 0.0, 0.2, 0.2, 0.0, 0.0, 0.1, 0.4]),
            DMatrix::from_row_slice(3, 3, &[-0.1, 0.0, 0.0, 0.0, 0.1, 0.0, 0.0, 0.0, 0.1]),
        ],
        cov: DMatrix::from_row_slice(3, 3, &[1.0, 0.5, 0.2, 0.5, 1.0, 0.1, 0.2, 0.1, 0.5]),
    }
}

#[test]
fn adf_decisions_are_monotone() {
    for r in 0..200 {
        let phi = 0.6 + 0.4 * (r as f64 / 200.0);
        let y = gen_ar(&ArDgp { intercept: 0.0, phi: vec![phi], sigma: 1.0 }, &SimSettings::new(120, run_seed(1, r))).unwrap();
        for det in [Deterministics::InterceptOnly, Deterministics::InterceptAndTrend] {
            let a = adf_test(&y, AdfSpec { deterministics: det, lags: (r % 4) as usize }).unwrap();
            assert!(a.decisions.is_monotone());
        }
    }
}

#[test]
fn qlr_candidate_count_and_maximum() {
    for t in [40usize, 86, 91, 200] {
        let y = gen_ar(&ArDgp { intercept: 1.0, phi: vec![0.4], sigma: 1.0 }, &SimSettings::new(t + 1, t as u64)).unwrap();
        let m = fit_ar(&y, 1, None).unwrap();
        let q = qlr_test(&m.design, 0.15).unwrap();
        let n = m.design.nobs() as f64;
        let expected = (0.85 * n).round() as usize - (0.15 * n).round() as usize + 1;
        assert_eq!(q.candidates.len(), expected);
        assert_eq!(qlr_candidate_rows(m.design.nobs(), 0.15), ((0.15 * n).round() as usize, (0.85 * n).round() as usize));
        assert!(q.f_values.iter().all(|&f| f <= q.qlr_stat));
        assert!(q.candidates.windows(2).all(|w| w[1] == w[0].succ()));
    }
}

#[test]
fn verona_like_break_is_localized() {
    let brk: QuarterIndex = "2010Q1".parse().unwrap();
    let mut near = 0;
    let runs = 100;
    for r in 0..runs {
        let y = gen_verona_like(&VeronaDgp::default(), &SimSettings::new(92, run_seed(7, r))).unwrap();
        let ly = y.map(f64::ln).unwrap();
        let m = fit_ar(&ly, 4, None).unwrap();
        let q = qlr_test(&m.design, 0.15).unwrap();
        if q.break_at.since(brk).abs() <= 4 {
            near += 1;
        }
    }
    assert!(near >= 80, "{near} of {runs} within four quarters");
}

#[test]
fn var_residuals_and_covariance() {
    let s = gen_var(&var_dgp(), &SimSettings::new(90, 3)).unwrap();
    let m = fit_var(&s, 2, None).unwrap();
    for (i, eq) in m.equations.iter().enumerate() {
        let d = m.design(i);
        for j in 0..d.ncols() {
            let col = d.column(j);
            let dot: f64 = col.iter().zip(&eq.residuals).map(|(a, b)| a * b).sum();
            let norm = col.iter().map(|v| v * v).sum::<f64>().sqrt() * eq.residuals.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!(dot.abs() <= 1e-8 * norm);
        }
    }
    let c = &m.resid_cov;
    assert!((c - c.transpose()).abs().max() <= 1e-12 * c.abs().max());
    let eig = c.clone().symmetric_eigen().eigenvalues;
    assert!(eig.iter().all(|&l| l >= -1e-10 * c.trace()));
    let dof = (m.nobs - (3 * 2 + 1)) as f64;
    for i in 0..3 {
        assert!((c[(i, i)] - m.equations[i].ssr / dof).abs() <= 1e-12 * c[(i, i)]);
    }
}

#[test]
fn swapping_cointegration_roles_changes_the_estimate() {
    let (y, x) = gen_cointegrated_pair(
        &CointDgp { alpha: 0.5, theta: 0.64, sigma_w: 1.0, phi_u: 0.7, sigma_u: 1.0 },
        &SimSettings::new(120, 9),
    )
    .unwrap();
    let a = egadf_test(&y, &x, 1).unwrap();
    let b = egadf_test(&x, &y, 1).unwrap();
    assert_eq!((a.y_name.as_str(), a.x_name.as_str()), ("y", "x"));
    assert_eq!((b.y_name.as_str(), b.x_name.as_str()), ("x", "y"));
    assert!((a.theta - b.theta).abs() > 1e-6);
    assert!((a.theta * b.theta - 1.0).abs() > 1e-6);
    assert_ne!(a.adf_stat, b.adf_stat);
}

#[test]
fn generation_is_identical_across_threads() {
    let spec = DgpSpec { kind: DgpKind::Var(var_dgp()), settings: SimSettings::new(150, 77) };
    let here = generate(&spec).unwrap();
    let handles: Vec<_> = (0..4)
        .map(|_| {
            let spec = spec.clone();
            std::thread::spawn(move || generate(&spec).unwrap())
        })
        .collect();
    for h in handles {
        let there = h.join().unwrap();
        for (a, b) in here.iter().zip(&there) {
            let bits = |s: &econokit::Series| s.values().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
            assert_eq!(bits(a), bits(b));
        }
    }
}

#[test]
fn refit_recovers_ar_coefficients() {
    let dgp = ArDgp { intercept: 0.5, phi: vec![0.5, -0.3], sigma: 1.0 };
    let runs = 400;
    let mut covered = [0usize; 2];
    let mut est = vec![Vec::new(); 2];
    for r in 0..runs {
        let y = gen_ar(&dgp, &SimSettings::new(300, run_seed(33, r))).unwrap();
        let m = fit_ar(&y, 2, None).unwrap();
        for j in 0..2 {
            let (b, se) = (m.phi()[j], m.fit.se[j + 1]);
            if (b - dgp.phi[j]).abs() <= 3.0 * se {
                covered[j] += 1;
            }
            est[j].push(b);
        }
    }
    for j in 0..2 {
        assert!(covered[j] as f64 >= 0.99 * runs as f64, "phi_{}: {} of {runs} within 3 SE", j + 1, covered[j]);
        let n = runs as f64;
        let mean = est[j].iter().sum::<f64>() / n;
        let sd = (est[j].iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
        assert!((mean - dgp.phi[j]).abs() <= 0.5 * sd, "phi_{} mean {mean}, sampling sd {sd}", j + 1);
    }
}
