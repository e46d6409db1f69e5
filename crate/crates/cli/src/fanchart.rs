//! Plot-ready forecast data: `date,actual,forecast,lo95,hi95`.

use econokit::autoregression::ForecastPath;
use econokit::Series;

use crate::CliError;

/// Actual values through the forecast origin, then the forecast rows.
/// `actual` must end exactly at `path.origin`.
pub fn emit_fanchart(actual: &Series, path: &ForecastPath, sink: &mut impl std::io::Write) -> Result<(), CliError> {
    if actual.end() != path.origin {
        return Err(CliError::Data(format!(
            "forecast origin {} is not the last actual observation {}",
            path.origin,
            actual.end()
        )));
    }
    let mut out = String::from("date,actual,forecast,lo95,hi95\n");
    for (d, v) in actual.rows() {
        out.push_str(&format!("{d},{v},,,\n"));
    }
    for h in 0..path.horizon() {
        let (lo, hi) = path.ci95[h];
        out.push_str(&format!("{},,{},{lo},{hi}\n", path.dates[h], path.point[h]));
    }
    sink.write_all(out.as_bytes())
        .map_err(|e| CliError::Data(format!("cannot write fan chart: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_path_writes_actuals_only() {
        let s = Series::new("y", "2000Q1".parse().unwrap(), vec![1.0, 2.0, 3.0]).unwrap();
        let mut buf = Vec::new();
        emit_fanchart(&s, &ForecastPath::empty("y", s.end()), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "date,actual,forecast,lo95,hi95\n2000Q1,1,,,\n2000Q2,2,,,\n2000Q3,3,,,\n");
    }

    #[test]
    fn misaligned_origin() {
        let s = Series::new("y", "2000Q1".parse().unwrap(), vec![1.0, 2.0, 3.0]).unwrap();
        let path = ForecastPath::empty("y", "2000Q2".parse().unwrap());
        assert!(emit_fanchart(&s, &path, &mut Vec::new()).is_err());
    }

    #[test]
    fn white_noise_band_has_constant_width() {
        let y = Series::new("y", "2000Q1".parse().unwrap(), vec![0.3, -1.2, 0.8, 0.1]).unwrap();
        let sigma = 0.7;
        let point = vec![0.0; 5];
        let path = ForecastPath {
            variable: "y".into(),
            origin: y.end(),
            dates: (1..=5).map(|h| y.end().offset(h)).collect(),
            ci95: point.iter().map(|p| (p - 1.96 * sigma, p + 1.96 * sigma)).collect(),
            se: vec![sigma; 5],
            point,
            nonstationary: false,
        };
        let mut buf = Vec::new();
        emit_fanchart(&y, &path, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let widths: Vec<f64> = text
            .lines()
            .skip(1 + y.len())
            .map(|l| {
                let f: Vec<&str> = l.split(',').collect();
                assert!(f[1].is_empty());
                f[4].parse::<f64>().unwrap() - f[3].parse::<f64>().unwrap()
            })
            .collect();
        assert_eq!(widths.len(), 5);
        assert!(widths.iter().all(|w| *w == 2.0 * 1.96 * sigma));
    }
}
