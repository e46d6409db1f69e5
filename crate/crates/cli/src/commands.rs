//! Subcommand definitions and their report builders.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use econokit::autoregression::{fit_ar, forecast_ar, select_ar_lag, ForecastPath};
use econokit::cointegration::{egadf_test_with, EgOptions};
use econokit::linreg::FitResult;
use econokit::series::{acf, diff, lead_lag_corr, log_diff, summary};
use econokit::simulate::{
    generate, ArDgp, BreakDgp, CointDgp, DgpKind, DgpSpec, SimSettings, VarDgp, VeronaDgp,
};
use econokit::stability::{adf_test, qlr_test, AdfSpec, Deterministics};
use econokit::var::{fit_var, forecast_var, granger_all, granger_test, select_var_lag, GrangerResult};
use econokit::{CriticalValues, Decisions, Level, QuarterIndex, Series};
use nalgebra::DMatrix;

use crate::csvio::{read_csv, write_csv};
use crate::fanchart::emit_fanchart;
use crate::report::{
    render_report, Cell, CoefficientTable, CriteriaRow, CriteriaTable, ForecastRow, ForecastTable, Format,
    GenericTable, Note, ReportDocument, Section, Verdict, VerdictBlock,
};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "econokit", version, about = "Quarterly time-series econometrics from CSV files")]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: FormatArg,
    /// Also write the report (or simulated CSV) to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for commands that draw random numbers.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Transform {
    None,
    /// Natural log.
    Log,
    /// First difference.
    Diff,
    /// First difference of natural logs.
    #[value(name = "log-diff", alias = "log_diff")]
    LogDiff,
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// CSV file(s) with a `date` column and one or more value columns.
    #[arg(long, short = 'i', required = true)]
    pub input: Vec<PathBuf>,
    /// Pick series by column name (comma-separated, in order).
    #[arg(long, value_delimiter = ',')]
    pub series: Vec<String>,
    /// Read `;`-separated files that use `,` as the decimal mark.
    #[arg(long)]
    pub locale_comma: bool,
    /// Transformation applied to every series before windowing.
    #[arg(long, value_enum, default_value = "none")]
    pub transform: Transform,
    /// First quarter of the sample window (e.g. 1996Q1).
    #[arg(long)]
    pub from: Option<QuarterIndex>,
    /// Last quarter of the sample window (e.g. 2008Q4).
    #[arg(long)]
    pub to: Option<QuarterIndex>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TrendArg {
    /// Intercept only.
    None,
    /// Intercept and linear time trend.
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SimKind {
    Ar,
    Var,
    #[value(name = "break_shift", alias = "break-shift")]
    BreakShift,
    #[value(name = "cointegrated_pair", alias = "cointegrated-pair")]
    CointegratedPair,
    #[value(name = "verona_like", alias = "verona-like")]
    VeronaLike,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mean, standard deviation and span of each series.
    Summarize {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Sample autocorrelations.
    Acf {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 7)]
        max_lag: usize,
    },
    /// Fit an AR(p) model by OLS.
    FitAr {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        lags: usize,
    },
    /// Compare AR lag orders by BIC, AIC, adjusted R² and SER.
    SelectLag {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 6)]
        max_lag: usize,
        #[arg(long, default_value_t = 1)]
        min_lag: usize,
    },
    /// Iterated AR(p) forecasts with 95% bands.
    Forecast {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        lags: usize,
        #[arg(long, default_value_t = 4)]
        horizon: usize,
        /// Write `date,actual,forecast,lo95,hi95` to this file.
        #[arg(long)]
        fanchart: Option<PathBuf>,
    },
    /// Augmented Dickey–Fuller unit-root test.
    Adf {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 0)]
        lags: usize,
        #[arg(long, value_enum, default_value = "none")]
        trend: TrendArg,
    },
    /// Quandt likelihood-ratio break test on an AR(p) regression.
    Qlr {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 1)]
        lags: usize,
        #[arg(long, default_value_t = 0.15)]
        trimming: f64,
        /// Include the Chow F statistic for every candidate date.
        #[arg(long)]
        scan: bool,
    },
    /// Fit a VAR(p) by equation-wise OLS.
    FitVar {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        lags: usize,
    },
    /// System AIC/BIC for VAR lag orders 1..=max-lag.
    VarSelect {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 4)]
        max_lag: usize,
    },
    /// Granger-causality F tests in a VAR(p).
    Granger {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        lags: usize,
        #[arg(long, requires = "effect")]
        cause: Option<String>,
        #[arg(long, requires = "cause")]
        effect: Option<String>,
    },
    /// Iterated VAR(p) forecasts with 95% bands.
    VarForecast {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        lags: usize,
        #[arg(long, default_value_t = 4)]
        horizon: usize,
        /// Write one fan-chart CSV per variable to `<PREFIX>_<name>.csv`.
        #[arg(long)]
        fanchart_prefix: Option<PathBuf>,
    },
    /// Engle–Granger two-step cointegration test (first series is y).
    Coint {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 0)]
        lags: usize,
    },
    /// Lead/lag correlations corr(a_t, b_{t+p}).
    Xcorr {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = -4, allow_negative_numbers = true)]
        min_lead: i64,
        #[arg(long, default_value_t = 4, allow_negative_numbers = true)]
        max_lead: i64,
    },
    /// Generate synthetic series as CSV.
    Simulate {
        #[arg(value_enum, required_unless_present = "spec")]
        kind: Option<SimKind>,
        /// Full generator spec as JSON (overrides the kind and its flags).
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Number of quarters (default 92 for verona_like, 200 otherwise).
        #[arg(long)]
        len: Option<usize>,
        #[arg(long, default_value = "1991Q1")]
        start: QuarterIndex,
        /// AR coefficients, comma-separated.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        phi: Option<Vec<f64>>,
        #[arg(long, allow_negative_numbers = true)]
        intercept: Option<f64>,
        #[arg(long)]
        sigma: Option<f64>,
        /// First quarter of the shifted regime.
        #[arg(long)]
        break_at: Option<QuarterIndex>,
        /// Intercept shift (break_shift) or log-level shift (verona_like).
        #[arg(long, allow_negative_numbers = true)]
        magnitude: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        theta: Option<f64>,
    },
}

/// Everything a command produces; nothing touches the filesystem until the
/// command has fully succeeded.
#[derive(Debug, Default)]
pub struct Outcome {
    pub stdout: Vec<u8>,
    pub files: Vec<(PathBuf, Vec<u8>)>,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn apply_transform(s: &Series, t: Transform) -> Result<Series, CliError> {
    Ok(match t {
        Transform::None => s.clone(),
        Transform::Diff => diff(s)?,
        Transform::LogDiff => log_diff(s)?,
        Transform::Log => {
            if s.values().iter().any(|&v| v <= 0.0) {
                return Err(CliError::Data(format!("series '{}' has non-positive values; cannot take logs", s.name())));
            }
            s.map(f64::ln)?.with_name(format!("l_{}", s.name()))
        }
    })
}

fn load(args: &InputArgs) -> Result<Vec<Series>, CliError> {
    let mut all = Vec::new();
    for path in &args.input {
        all.extend(read_csv(path, args.locale_comma)?);
    }
    let picked = if args.series.is_empty() {
        all
    } else {
        args.series
            .iter()
            .map(|name| {
                all.iter().find(|s| s.name() == name).cloned().ok_or_else(|| {
                    let have: Vec<&str> = all.iter().map(|s| s.name()).collect();
                    usage(format!("no series named '{name}' in the input (have: {})", have.join(", ")))
                })
            })
            .collect::<Result<Vec<_>, _>>()?
    };
    picked
        .iter()
        .map(|s| {
            let t = apply_transform(s, args.transform)?;
            Ok(t.window_opt(args.from, args.to)?)
        })
        .collect()
}

fn load_one(args: &InputArgs) -> Result<Series, CliError> {
    let mut v = load(args)?;
    if v.len() != 1 {
        let names: Vec<&str> = v.iter().map(|s| s.name()).collect();
        return Err(usage(format!(
            "this command takes one series but the input holds {} ({}); choose one with --series",
            v.len(),
            names.join(", ")
        )));
    }
    Ok(v.remove(0))
}

fn load_exactly(args: &InputArgs, n: usize, what: &str) -> Result<Vec<Series>, CliError> {
    let v = load(args)?;
    if v.len() != n {
        return Err(usage(format!("{what} needs exactly {n} series, got {}; use --series to choose", v.len())));
    }
    Ok(v)
}

fn load_system(args: &InputArgs) -> Result<Vec<Series>, CliError> {
    let v = load(args)?;
    if v.len() < 2 {
        return Err(usage("a VAR needs at least two series; pass a wide CSV or several --input files"));
    }
    Ok(v)
}

fn fmt_crit(c: f64) -> String {
    format!("{c:.2}")
}

fn level_rows(critical: &CriticalValues, decisions: &Decisions, yes: &str, no: &str) -> Vec<Vec<Cell>> {
    Level::ALL
        .iter()
        .map(|&l| {
            vec![
                Cell::Text(l.to_string()),
                Cell::Text(fmt_crit(critical.at(l))),
                Cell::Text(if decisions.at(l) { yes } else { no }.to_string()),
            ]
        })
        .collect()
}

fn forecast_section(path: &ForecastPath, title: impl Into<String>) -> Section {
    Section::Forecast(ForecastTable {
        title: title.into(),
        variable: path.variable.clone(),
        origin: path.origin,
        rows: (0..path.horizon())
            .map(|h| ForecastRow {
                quarter: path.dates[h],
                forecast: path.point[h],
                error: path.se[h],
                lo95: path.ci95[h].0,
                hi95: path.ci95[h].1,
            })
            .collect(),
    })
}

fn nonstationary_note(path: &ForecastPath) -> Option<Section> {
    path.nonstationary.then(|| {
        Section::Note(Note {
            title: "Warning".into(),
            lines: vec![format!(
                "The fitted model for {} has a unit or explosive root; bands grow without bound.",
                path.variable
            )],
        })
    })
}

fn ci_table(fit: &FitResult) -> Section {
    Section::Table(GenericTable {
        title: "95% confidence intervals".into(),
        columns: vec!["".into(), "Coefficient".into(), "Lower".into(), "Upper".into()],
        rows: (0..fit.k)
            .map(|j| {
                vec![
                    Cell::Text(fit.names[j].clone()),
                    Cell::Num(fit.coef[j]),
                    Cell::Num(fit.ci95[j].0),
                    Cell::Num(fit.ci95[j].1),
                ]
            })
            .collect(),
    })
}

fn granger_verdict(g: &GrangerResult) -> Verdict {
    let reject = g.decisions.at(Level::Five);
    Verdict {
        test: format!("{} -> {}", g.cause, g.effect),
        statistic: g.f.value,
        critical: None,
        p_value: Some(g.f.p_value),
        level: Level::Five.to_string(),
        reject: Some(reject),
        text: format!(
            "F({}, {}) = {:.4}, p = {:.4}; {} {} Granger-cause {} at 5%",
            g.f.df_num,
            g.f.df_den,
            g.f.value,
            g.f.p_value,
            g.cause,
            if reject { "does" } else { "does not" },
            g.effect
        ),
    }
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let mut files = Vec::new();
    let doc = match &cli.command {
        Command::Simulate {
            kind,
            spec,
            len,
            start,
            phi,
            intercept,
            sigma,
            break_at,
            magnitude,
            theta,
        } => {
            let spec = match spec {
                Some(path) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
                    serde_json::from_str::<DgpSpec>(&text)
                        .map_err(|e| CliError::Data(format!("{}: invalid generator spec: {e}", path.display())))?
                }
                None => {
                    let kind = kind.expect("clap requires kind without --spec");
                    let len = len.unwrap_or(if kind == SimKind::VeronaLike { 92 } else { 200 });
                    let settings = SimSettings { len, seed: cli.seed, start: *start };
                    DgpSpec {
                        kind: sim_kind(kind, &settings, phi, *intercept, *sigma, *break_at, *magnitude, *theta)?,
                        settings,
                    }
                }
            };
            let series = generate(&spec)?;
            let csv = write_csv(&series).into_bytes();
            if let Some(out) = &cli.out {
                files.push((out.clone(), csv.clone()));
            }
            return Ok(Outcome { stdout: csv, files });
        }
        Command::Summarize { input } => {
            let series = load(input)?;
            let mut doc = ReportDocument::new("summarize");
            let mut rows = Vec::new();
            for s in &series {
                let st = summary(s)?;
                rows.push(vec![
                    Cell::Text(s.name().to_string()),
                    Cell::Text(s.start().roman()),
                    Cell::Text(s.end().roman()),
                    Cell::Text(st.count.to_string()),
                    Cell::Num(st.mean),
                    Cell::Num(st.sd),
                ]);
            }
            doc.push(Section::Table(GenericTable {
                title: "Summary statistics".into(),
                columns: ["Series", "First", "Last", "T", "Mean", "Std. Dev."].map(String::from).to_vec(),
                rows,
            }));
            if matches!(input.transform, Transform::Diff | Transform::LogDiff) {
                let lines = series
                    .iter()
                    .map(|s| Ok(format!("{}: annualized mean (4 x quarterly) = {}", s.name(), crate::report::sig6(4.0 * summary(s)?.mean))))
                    .collect::<Result<Vec<_>, CliError>>()?;
                doc.push(Section::Note(Note { title: "Annualized growth".into(), lines }));
            }
            doc
        }
        Command::Acf { input, max_lag } => {
            let s = load_one(input)?;
            let t = acf(&s, *max_lag)?;
            let band = 1.96 / (s.len() as f64).sqrt();
            let mut doc = ReportDocument::new("acf");
            doc.push(Section::Table(GenericTable {
                title: format!("Autocorrelations of {} (T = {}, ±1.96/√T = {:.4})", s.name(), s.len(), band),
                columns: vec!["Lag".into(), "ACF".into(), "".into()],
                rows: t
                    .lags
                    .iter()
                    .zip(&t.rho)
                    .map(|(l, r)| {
                        vec![
                            Cell::Text(l.to_string()),
                            Cell::Num(*r),
                            Cell::Text(if r.abs() > band { "*" } else { "" }.into()),
                        ]
                    })
                    .collect(),
            }));
            doc
        }
        Command::FitAr { input, lags } => {
            let s = load_one(input)?;
            let m = fit_ar(&s, *lags, None)?;
            let mut doc = ReportDocument::new("fit-ar");
            doc.push(Section::Coefficients(CoefficientTable::from_fit(
                format!("AR({}) model, OLS", m.p),
                &m.fit,
                Some(m.sample),
            )));
            doc.push(ci_table(&m.fit));
            if !m.is_stationary() {
                doc.push(Section::Note(Note {
                    title: "Warning".into(),
                    lines: vec![format!(
                        "Largest companion-root modulus is {:.4}; the fitted model is not stationary.",
                        m.spectral_radius()
                    )],
                }));
            }
            doc
        }
        Command::SelectLag { input, max_lag, min_lag } => {
            let s = load_one(input)?;
            let sel = select_ar_lag(&s, *max_lag, *min_lag)?;
            let mut doc = ReportDocument::new("select-lag");
            doc.push(Section::Criteria(CriteriaTable {
                title: format!("Lag-order selection for {} (common sample, T = {})", s.name(), sel.nobs),
                columns: ["BIC", "AIC", "Adjusted R²", "SER"].map(String::from).to_vec(),
                rows: sel
                    .candidates
                    .iter()
                    .enumerate()
                    .map(|(i, &p)| CriteriaRow {
                        p,
                        values: vec![sel.bic[i], sel.aic[i], sel.adj_r2[i], sel.ser[i]],
                    })
                    .collect(),
                chosen: vec![Some(sel.chosen_bic), Some(sel.chosen_aic), None, None],
            }));
            doc
        }
        Command::Forecast { input, lags, horizon, fanchart } => {
            let s = load_one(input)?;
            let m = fit_ar(&s, *lags, None)?;
            let path = forecast_ar(&m, &s, *horizon)?;
            if let Some(fc) = fanchart {
                let mut buf = Vec::new();
                emit_fanchart(&s, &path, &mut buf)?;
                files.push((fc.clone(), buf));
            }
            let mut doc = ReportDocument::new("forecast");
            doc.push(forecast_section(&path, format!("AR({}) forecasts with 95% bands", m.p)));
            if let Some(n) = nonstationary_note(&path) {
                doc.push(n);
            }
            doc
        }
        Command::Adf { input, lags, trend } => {
            let s = load_one(input)?;
            let det = match trend {
                TrendArg::None => Deterministics::InterceptOnly,
                TrendArg::Linear => Deterministics::InterceptAndTrend,
            };
            let r = adf_test(&s, AdfSpec { deterministics: det, lags: *lags })?;
            let label = match det {
                Deterministics::InterceptOnly => "intercept",
                Deterministics::InterceptAndTrend => "intercept and trend",
            };
            let mut doc = ReportDocument::new("adf");
            doc.push(Section::Coefficients(CoefficientTable::from_fit(
                format!("ADF regression ({label}, {} lagged differences)", lags),
                &r.fit,
                r.fit.first_date.map(|a| (a, a.offset(r.fit.nobs as i64 - 1))),
            )));
            let five = r.decisions.at(Level::Five);
            doc.push(Section::Verdicts(VerdictBlock {
                title: format!("Unit-root test for {}", s.name()),
                verdicts: vec![Verdict {
                    test: format!("ADF ({label})"),
                    statistic: r.t_stat,
                    critical: Some(r.critical.five),
                    p_value: None,
                    level: Level::Five.to_string(),
                    reject: Some(five),
                    text: format!(
                        "t = {:.4}; 5% critical {}; {} unit root",
                        r.t_stat,
                        fmt_crit(r.critical.five),
                        if five { "reject" } else { "fail to reject" }
                    ),
                }],
            }));
            doc.push(Section::Table(GenericTable {
                title: "Dickey–Fuller critical values".into(),
                columns: vec!["Level".into(), "Critical".into(), "Decision".into()],
                rows: level_rows(&r.critical, &r.decisions, "reject", "fail to reject"),
            }));
            doc
        }
        Command::Qlr { input, lags, trimming, scan } => {
            let s = load_one(input)?;
            if !(*trimming > 0.0 && *trimming < 0.5) {
                return Err(usage(format!("--trimming must lie in (0, 0.5), got {trimming}")));
            }
            let m = fit_ar(&s, *lags, None)?;
            let r = qlr_test(&m.design, *trimming)?;
            let mut doc = ReportDocument::new("qlr");
            let mut verdicts = Vec::new();
            match (r.critical, r.decisions) {
                (Some(c), Some(d)) => {
                    for l in Level::ALL {
                        verdicts.push(Verdict {
                            test: format!("QLR ({l})"),
                            statistic: r.qlr_stat,
                            critical: Some(c.at(l)),
                            p_value: None,
                            level: l.to_string(),
                            reject: Some(d.at(l)),
                            text: format!(
                                "QLR = {:.4} at {}; {l} critical {}; {} the no-break null",
                                r.qlr_stat,
                                r.break_at.roman(),
                                fmt_crit(c.at(l)),
                                if d.at(l) { "reject" } else { "fail to reject" }
                            ),
                        });
                    }
                }
                _ => verdicts.push(Verdict {
                    test: "QLR".into(),
                    statistic: r.qlr_stat,
                    critical: None,
                    p_value: None,
                    level: String::new(),
                    reject: None,
                    text: format!(
                        "QLR = {:.4} at {}; no tabulated critical values for q = {}",
                        r.qlr_stat,
                        r.break_at.roman(),
                        r.q
                    ),
                }),
            }
            doc.push(Section::Verdicts(VerdictBlock {
                title: format!(
                    "Break test for AR({}) model of {}, {}-{}, {:.0}% trimming, q = {}",
                    m.p,
                    s.name(),
                    m.sample.0.roman(),
                    m.sample.1.roman(),
                    trimming * 100.0,
                    r.q
                ),
                verdicts,
            }));
            if *scan {
                doc.push(Section::Table(GenericTable {
                    title: "Chow F by candidate break date".into(),
                    columns: vec!["Quarter".into(), "F".into()],
                    rows: r
                        .candidates
                        .iter()
                        .zip(&r.f_values)
                        .map(|(d, f)| vec![Cell::Text(d.roman()), Cell::Num(*f)])
                        .collect(),
                }));
            }
            doc
        }
        Command::FitVar { input, lags } => {
            let series = load_system(input)?;
            let m = fit_var(&series, *lags, None)?;
            let mut doc = ReportDocument::new("fit-var");
            for eq in &m.equations {
                doc.push(Section::Coefficients(CoefficientTable::from_fit(
                    format!("VAR({}) equation for {}", m.p, eq.response_name),
                    eq,
                    Some(m.sample),
                )));
            }
            doc.push(matrix_table("Residual covariance", &m.variables, &m.resid_cov));
            doc.push(Section::Note(Note {
                title: "Stability".into(),
                lines: vec![format!(
                    "Largest companion-root modulus: {:.4} ({})",
                    m.spectral_radius(),
                    if m.spectral_radius() < 1.0 { "stable" } else { "not stable" }
                )],
            }));
            doc
        }
        Command::VarSelect { input, max_lag } => {
            let series = load_system(input)?;
            let sel = select_var_lag(&series, *max_lag)?;
            let mut doc = ReportDocument::new("var-select");
            doc.push(Section::Criteria(CriteriaTable {
                title: format!("VAR lag-order selection (common sample, T = {})", sel.nobs),
                columns: vec!["AIC".into(), "BIC".into(), "log-lik".into()],
                rows: sel
                    .candidates
                    .iter()
                    .enumerate()
                    .map(|(i, &p)| CriteriaRow { p, values: vec![sel.aic[i], sel.bic[i], sel.loglik[i]] })
                    .collect(),
                chosen: vec![Some(sel.chosen_aic), Some(sel.chosen_bic), None],
            }));
            doc
        }
        Command::Granger { input, lags, cause, effect } => {
            let series = load_system(input)?;
            let m = fit_var(&series, *lags, None)?;
            let results = match (cause, effect) {
                (Some(c), Some(e)) => {
                    m.index_of(c).map_err(|err| usage(err.to_string()))?;
                    m.index_of(e).map_err(|err| usage(err.to_string()))?;
                    vec![granger_test(&m, c, e)?]
                }
                _ => granger_all(&m)?,
            };
            let mut doc = ReportDocument::new("granger");
            doc.push(Section::Table(GenericTable {
                title: format!("Granger causality in a VAR({}), {}-{}", m.p, m.sample.0.roman(), m.sample.1.roman()),
                columns: ["Cause", "Effect", "F", "df1", "df2", "p-Value"].map(String::from).to_vec(),
                rows: results
                    .iter()
                    .map(|g| {
                        vec![
                            Cell::Text(g.cause.clone()),
                            Cell::Text(g.effect.clone()),
                            Cell::Num(g.f.value),
                            Cell::Text(g.f.df_num.to_string()),
                            Cell::Text(g.f.df_den.to_string()),
                            Cell::Num(g.f.p_value),
                        ]
                    })
                    .collect(),
            }));
            doc.push(Section::Verdicts(VerdictBlock {
                title: "Verdicts".into(),
                verdicts: results.iter().map(granger_verdict).collect(),
            }));
            doc
        }
        Command::VarForecast { input, lags, horizon, fanchart_prefix } => {
            let series = load_system(input)?;
            let m = fit_var(&series, *lags, None)?;
            let paths = forecast_var(&m, &series, *horizon)?;
            let mut doc = ReportDocument::new("var-forecast");
            for (s, path) in series.iter().zip(&paths) {
                if let Some(prefix) = fanchart_prefix {
                    let mut buf = Vec::new();
                    emit_fanchart(s, path, &mut buf)?;
                    let mut name = prefix.as_os_str().to_owned();
                    name.push(format!("_{}.csv", s.name()));
                    files.push((PathBuf::from(name), buf));
                }
                doc.push(forecast_section(path, format!("VAR({}) forecasts for {}", m.p, path.variable)));
            }
            if let Some(n) = paths.first().and_then(nonstationary_note) {
                doc.push(n);
            }
            doc
        }
        Command::Coint { input, lags } => {
            let v = load_exactly(input, 2, "coint")?;
            let r = egadf_test_with(&v[0], &v[1], &EgOptions { lags: *lags, ..EgOptions::default() })?;
            let mut doc = ReportDocument::new("coint");
            doc.push(Section::Coefficients(CoefficientTable::from_fit(
                "Cointegrating regression, OLS",
                &r.stage1,
                r.stage1.first_date.map(|a| (a, a.offset(r.stage1.nobs as i64 - 1))),
            )));
            let five = r.cointegrated.at(Level::Five);
            doc.push(Section::Verdicts(VerdictBlock {
                title: format!(
                    "Engle–Granger test on z = {} - {} - {} * {}",
                    r.y_name,
                    crate::report::sig6(r.alpha),
                    crate::report::sig6(r.theta),
                    r.x_name
                ),
                verdicts: vec![Verdict {
                    test: format!("EG-ADF ({} lagged differences)", r.lags),
                    statistic: r.adf_stat,
                    critical: Some(r.critical.five),
                    p_value: None,
                    level: Level::Five.to_string(),
                    reject: Some(five),
                    text: format!(
                        "t = {:.4}; 5% critical {}; {}",
                        r.adf_stat,
                        fmt_crit(r.critical.five),
                        if five { "cointegrated" } else { "not cointegrated" }
                    ),
                }],
            }));
            doc.push(Section::Table(GenericTable {
                title: "Engle–Granger critical values".into(),
                columns: vec!["Level".into(), "Critical".into(), "Decision".into()],
                rows: level_rows(&r.critical, &r.cointegrated, "cointegrated", "not cointegrated"),
            }));
            doc
        }
        Command::Xcorr { input, min_lead, max_lead } => {
            if min_lead > max_lead {
                return Err(usage("--min-lead must not exceed --max-lead"));
            }
            let v = load_exactly(input, 2, "xcorr")?;
            let rows = lead_lag_corr(&v[0], &v[1], *min_lead, *max_lead)?;
            let mut doc = ReportDocument::new("xcorr");
            let best = rows
                .iter()
                .fold(None::<&econokit::series::LeadLagRow>, |b, r| match b {
                    Some(b) if b.corr.abs() >= r.corr.abs() => Some(b),
                    _ => Some(r),
                });
            doc.push(Section::Table(GenericTable {
                title: format!("corr({}_t, {}_t+p)", v[0].name(), v[1].name()),
                columns: vec!["p".into(), "Correlation".into(), "Pairs".into()],
                rows: rows
                    .iter()
                    .map(|r| vec![Cell::Text(r.p.to_string()), Cell::Num(r.corr), Cell::Text(r.nobs.to_string())])
                    .collect(),
            }));
            if let Some(b) = best {
                doc.push(Section::Note(Note {
                    title: "Strongest association".into(),
                    lines: vec![format!("p = {} (correlation {:.4})", b.p, b.corr)],
                }));
            }
            doc
        }
    };
    let format = match cli.format {
        FormatArg::Text => Format::Text,
        FormatArg::Json => Format::Json,
    };
    let bytes = render_report(&doc, format);
    if let Some(out) = &cli.out {
        files.push((out.clone(), bytes.clone()));
    }
    Ok(Outcome { stdout: bytes, files })
}

fn matrix_table(title: &str, names: &[String], m: &DMatrix<f64>) -> Section {
    let mut columns = vec![String::new()];
    columns.extend(names.iter().cloned());
    Section::Table(GenericTable {
        title: title.into(),
        columns,
        rows: (0..m.nrows())
            .map(|i| {
                let mut r = vec![Cell::Text(names[i].clone())];
                r.extend((0..m.ncols()).map(|j| Cell::Num(m[(i, j)])));
                r
            })
            .collect(),
    })
}

#[allow(clippy::too_many_arguments)]
fn sim_kind(
    kind: SimKind,
    settings: &SimSettings,
    phi: &Option<Vec<f64>>,
    intercept: Option<f64>,
    sigma: Option<f64>,
    break_at: Option<QuarterIndex>,
    magnitude: Option<f64>,
    theta: Option<f64>,
) -> Result<DgpKind, CliError> {
    let ar = || ArDgp {
        intercept: intercept.unwrap_or(0.0),
        phi: phi.clone().unwrap_or_else(|| vec![0.5]),
        sigma: sigma.unwrap_or(1.0),
    };
    let row_of = |d: QuarterIndex| -> Result<usize, CliError> {
        let r = d.since(settings.start);
        if r < 0 || r as usize >= settings.len {
            return Err(usage(format!("--break-at {d} lies outside the simulated span")));
        }
        Ok(r as usize)
    };
    Ok(match kind {
        SimKind::Ar => DgpKind::Ar(ar()),
        SimKind::BreakShift => DgpKind::BreakShift(BreakDgp {
            base: ar(),
            break_at: match break_at {
                Some(d) => row_of(d)?,
                None => settings.len / 2,
            },
            magnitude: magnitude.unwrap_or(2.0),
        }),
        SimKind::CointegratedPair => DgpKind::CointegratedPair(CointDgp {
            alpha: intercept.unwrap_or(0.0),
            theta: theta.unwrap_or(1.0),
            sigma_w: 1.0,
            phi_u: phi.as_ref().and_then(|p| p.first().copied()).unwrap_or(0.5),
            sigma_u: sigma.unwrap_or(1.0),
        }),
        SimKind::Var => DgpKind::Var(default_var()),
        SimKind::VeronaLike => {
            let mut d = VeronaDgp::default();
            if let Some(b) = break_at {
                row_of(b)?;
                d.break_at = Some(b);
            }
            if let Some(m) = magnitude {
                d.break_size = m;
            }
            if let Some(s) = sigma {
                d.noise_sigma = s;
            }
            DgpKind::VeronaLike(d)
        }
    })
}

/// Three-variable stationary VAR(2) with one-way dependence from `x1` to `x2`.
fn default_var() -> VarDgp {
    VarDgp {
        names: vec!["x1".into(), "x2".into(), "x3".into()],
        intercepts: vec![0.0, 0.0, 0.0],
        coefs: vec![
            DMatrix::from_row_slice(3, 3, &[0.5, 0.0, 0.0, 0.4, 0.3, 0.0, 0.0, 0.1, 0.4]),
            DMatrix::from_row_slice(3, 3, &[-0.2, 0.0, 0.0, 0.0, -0.2, 0.0, 0.0, 0.0, 0.2]),
        ],
        cov: DMatrix::identity(3, 3),
    }
}
