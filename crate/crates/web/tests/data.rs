use econokit_web::{acf_data, fan_chart_data, qlr_scan_data};

#[test]
fn fan_chart_shapes() {
    let f = fan_chart_data(3, 4, 8).unwrap();
    assert_eq!(f.actual.len(), 92);
    assert_eq!(f.dates.first().unwrap(), "1991:I");
    assert_eq!(f.forecast_dates, ["2014:I", "2014:II", "2014:III", "2014:IV", "2015:I", "2015:II", "2015:III", "2015:IV"]);
    for h in 0..8 {
        assert!(f.lo95[h] < f.forecast[h] && f.forecast[h] < f.hi95[h]);
    }
    assert!((f.hi95[0] - f.forecast[0] - 1.96 * f.ser).abs() <= 1e-6 * f.ser);
    assert_eq!(fan_chart_data(3, 4, 8).unwrap(), f);
}

#[test]
fn qlr_scan_finds_the_break() {
    let s = qlr_scan_data(5, 6, -0.4).unwrap();
    assert_eq!(s.q, 7);
    assert_eq!(s.critical, Some([2.84, 3.15, 3.82]));
    assert_eq!(s.dates.len(), s.f.len());
    assert!(s.f.iter().all(|&f| f <= s.qlr));
    assert_eq!(s.break_at, "2010:I");
}

#[test]
fn acf_explorer_and_errors() {
    let a = acf_data(1, 0.9, 200, 10).unwrap();
    assert_eq!(a.lags, (1..=10).collect::<Vec<_>>());
    assert!(a.rho[0] > 0.7);
    assert!(acf_data(1, 0.9, 5, 10).is_err());
    assert!(fan_chart_data(1, 60, 4).is_err());
}
