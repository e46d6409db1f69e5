use econokit::series::{acf, lead_lag_corr, summary};
use econokit::simulate::{gen_ar, gen_verona_like, ArDgp, NormalStream, SimSettings, VeronaDgp};
use econokit::Series;

#[test]
fn summary_matches_two_pass_oracle() {
    let y = gen_ar(&ArDgp { intercept: 3.0, phi: vec![0.8], sigma: 2.0 }, &SimSettings::new(1000, 12)).unwrap();
    let s = summary(&y).unwrap();
    let v = y.values();
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    let ss: f64 = v.iter().map(|x| (x - mean) * (x - mean)).sum();
    let sd = (ss / (v.len() - 1) as f64).sqrt();
    assert_eq!(s.count, 1000);
    assert!((s.mean - mean).abs() <= 1e-10 * mean.abs());
    assert!((s.sd - sd).abs() <= 1e-10 * sd);
    assert!((s.sd * s.sd * 999.0 - ss).abs() <= 1e-10 * ss);
}

#[test]
fn iid_noise_has_small_autocorrelation() {
    let mut rng = NormalStream::new(5000);
    let s = Series::new("e", "1800Q1".parse().unwrap(), (0..5000).map(|_| rng.standard_normal()).collect()).unwrap();
    let t = acf(&s, 7).unwrap();
    assert_eq!(t.lags, (1..=7).collect::<Vec<_>>());
    assert!(t.rho[0].abs() < 0.05, "rho_1 = {}", t.rho[0]);
    assert!(t.rho.iter().all(|r| r.abs() <= 3.5 / (5000f64).sqrt()));
}

#[test]
fn persistent_series_is_strongly_autocorrelated() {
    let y = gen_ar(&ArDgp::export_like(), &SimSettings::new(92, 4)).unwrap();
    let t = acf(&y, 7).unwrap();
    assert!(t.rho[0] > 0.6);
    assert!(t.rho.iter().all(|r| (-1.0..=1.0).contains(r)));
}

#[test]
fn national_provincial_pair_peaks_at_zero() {
    let province = gen_verona_like(&VeronaDgp::default(), &SimSettings::new(92, 21)).unwrap();
    let mut rng = NormalStream::new(22);
    let national = Series::new(
        "EXPn",
        province.start(),
        province.values().iter().map(|v| 40.0 * v * (0.01 * rng.standard_normal()).exp()).collect(),
    )
    .unwrap();
    let table = lead_lag_corr(&national, &province, -4, 4).unwrap();
    assert_eq!(table.len(), 9);
    assert_eq!(table.iter().map(|r| r.p).collect::<Vec<_>>(), (-4..=4).collect::<Vec<_>>());
    let best = table.iter().max_by(|a, b| a.corr.total_cmp(&b.corr)).unwrap();
    assert_eq!(best.p, 0);
    assert!(best.corr > 0.95);
    for r in &table {
        let back = lead_lag_corr(&province, &national, -r.p, -r.p).unwrap();
        assert!((back[0].corr - r.corr).abs() < 1e-12);
        assert_eq!(r.nobs, 92 - r.p.unsigned_abs() as usize);
    }
}
