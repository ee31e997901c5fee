//! Parameter sweeps over the concentration and CSV output.

use std::fmt;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;

use crate::closed_forms::FormulaId;
use crate::composite::{contrast_from_ratio, CompositeParams};
use crate::error::{Error, Result};
use crate::lattice::{Lattice, LatticeKind};
use crate::rayleigh::{solve_tensor, SolveMethod, DEFAULT_TRUNCATION};
use crate::series::{
    expand_effective_series, required_sum_order, sigma22_series, BiPolynomial, DEFAULT_SERIES_ORDER,
    MAX_SERIES_ORDER,
};
use crate::sums::{build_sum_table, LatticeSumTable};

pub const DEFAULT_SUM_TOLERANCE: f64 = 1e-13;
pub const CSV_HEADER: &str = "f,method,sigma11,sigma12,sigma22,order,residual,status";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Solver,
    Series,
    Closed(FormulaId),
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::Solver,
        Method::Series,
        Method::Closed(FormulaId::Cma),
        Method::Closed(FormulaId::PerrinsHex),
        Method::Closed(FormulaId::KellerHex),
        Method::Closed(FormulaId::MatchedPerfectHex),
        Method::Closed(FormulaId::MatchedContrastHex),
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Solver => "solver",
            Method::Series => "series",
            Method::Closed(id) => id.name(),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown method '{s}'")))
    }
}

/// Contrast given either as the conductivity ratio `σ` or as `ϱ` itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Contrast {
    Ratio(f64),
    Rho(f64),
}

impl Contrast {
    pub fn rho(self) -> Result<f64> {
        match self {
            Contrast::Ratio(s) => contrast_from_ratio(s),
            Contrast::Rho(r) if (-1.0..=1.0).contains(&r) => Ok(r),
            Contrast::Rho(r) => Err(Error::invalid(format!("contrast must lie in [-1, 1], got {r}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub lattice: LatticeKind,
    pub methods: Vec<Method>,
    pub contrast: Contrast,
    pub f_min: f64,
    pub f_max: f64,
    pub steps: usize,
    pub truncation: usize,
    pub series_order: usize,
    pub sum_tolerance: f64,
    pub solve: SolveMethod,
    pub output: Option<PathBuf>,
}

impl SweepConfig {
    /// Single-method, single-point configuration with default numerics.
    pub fn point(lattice: LatticeKind, method: Method, contrast: Contrast, f: f64) -> Self {
        SweepConfig {
            lattice,
            methods: vec![method],
            contrast,
            f_min: f,
            f_max: f,
            steps: 1,
            truncation: DEFAULT_TRUNCATION,
            series_order: DEFAULT_SERIES_ORDER,
            sum_tolerance: DEFAULT_SUM_TOLERANCE,
            solve: SolveMethod::Direct,
            output: None,
        }
    }

    /// Checks everything except the touching bound, which is reported per
    /// row by [`run_sweep`].
    pub fn validate(&self) -> Result<()> {
        if self.methods.is_empty() {
            return Err(Error::invalid("at least one method is required"));
        }
        for (i, m) in self.methods.iter().enumerate() {
            if self.methods[..i].contains(m) {
                return Err(Error::invalid(format!("method '{m}' listed twice")));
            }
        }
        self.contrast.rho()?;
        if !(self.f_min.is_finite() && self.f_max.is_finite() && 0.0 <= self.f_min && self.f_min <= self.f_max) {
            return Err(Error::invalid(format!(
                "need 0 <= f_min <= f_max, got f_min = {}, f_max = {}",
                self.f_min, self.f_max
            )));
        }
        if self.steps == 0 {
            return Err(Error::invalid("steps must be at least 1"));
        }
        if self.series_order > MAX_SERIES_ORDER {
            return Err(Error::invalid(format!(
                "series order {} exceeds the cap {MAX_SERIES_ORDER}",
                self.series_order
            )));
        }
        if !(self.sum_tolerance > 0.0) {
            return Err(Error::invalid(format!(
                "sum tolerance must be positive, got {}",
                self.sum_tolerance
            )));
        }
        if let SolveMethod::Iterative { max_iter, tol } = self.solve {
            if max_iter == 0 || !(tol > 0.0) {
                return Err(Error::invalid("iterative solve needs max_iter >= 1 and tol > 0"));
            }
        }
        build_lattice(self.lattice)?;
        Ok(())
    }

    /// Grid `f_min + i (f_max - f_min)/steps`, `i = 0..=steps`; a degenerate
    /// range gives the single point.
    pub fn f_grid(&self) -> Vec<f64> {
        if self.f_min == self.f_max {
            return vec![self.f_min];
        }
        let h = (self.f_max - self.f_min) / self.steps as f64;
        (0..=self.steps)
            .map(|i| if i == self.steps { self.f_max } else { self.f_min + i as f64 * h })
            .collect()
    }
}

pub fn build_lattice(kind: LatticeKind) -> Result<Lattice> {
    match kind {
        LatticeKind::Square => Ok(Lattice::square()),
        LatticeKind::Hexagonal => Ok(Lattice::hexagonal()),
        LatticeKind::Rectangular(a) => Lattice::rectangular(a),
        LatticeKind::General(tau) => Lattice::general(tau),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowStatus {
    Ok,
    DomainError,
    ConvergenceFailure,
}

impl RowStatus {
    pub fn name(self) -> &'static str {
        match self {
            RowStatus::Ok => "ok",
            RowStatus::DomainError => "domain-error",
            RowStatus::ConvergenceFailure => "convergence-failure",
        }
    }

    fn of(err: &Error) -> Self {
        match err {
            Error::Domain(_) | Error::Pole(_) | Error::InvalidArgument(_) => RowStatus::DomainError,
            _ => RowStatus::ConvergenceFailure,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RowValues {
    pub sigma11: f64,
    pub sigma12: f64,
    pub sigma22: f64,
    pub order: Option<usize>,
    pub residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RowOutcome {
    Ok(RowValues),
    Failed { status: RowStatus, message: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub f: f64,
    pub method: Method,
    pub outcome: RowOutcome,
}

impl ResultRow {
    pub fn status(&self) -> RowStatus {
        match &self.outcome {
            RowOutcome::Ok(_) => RowStatus::Ok,
            RowOutcome::Failed { status, .. } => *status,
        }
    }

    pub fn values(&self) -> Option<&RowValues> {
        match &self.outcome {
            RowOutcome::Ok(v) => Some(v),
            RowOutcome::Failed { .. } => None,
        }
    }
}

struct Engine {
    lattice: Lattice,
    rho: f64,
    sums: Option<std::result::Result<LatticeSumTable, Error>>,
    series: Option<std::result::Result<(BiPolynomial, BiPolynomial), Error>>,
}

impl Engine {
    fn new(config: &SweepConfig) -> Result<Self> {
        let lattice = build_lattice(config.lattice)?;
        let rho = config.contrast.rho()?;
        let wants = |m: Method| config.methods.contains(&m);
        let mut need = 0;
        if wants(Method::Solver) {
            need = 2 * config.truncation as u32 + 2;
        }
        if wants(Method::Series) {
            need = need.max(required_sum_order(config.series_order));
        }
        let sums = (need > 0).then(|| build_sum_table(&lattice, need, config.sum_tolerance));
        let series = match (&sums, wants(Method::Series)) {
            (Some(Ok(table)), true) => Some(
                expand_effective_series(table, config.series_order)
                    .and_then(|p| Ok((p, sigma22_series(table, config.series_order)?))),
            ),
            (Some(Err(e)), true) => Some(Err(e.clone())),
            _ => None,
        };
        Ok(Engine {
            lattice,
            rho,
            sums,
            series,
        })
    }

    fn row(&self, config: &SweepConfig, method: Method, f: f64) -> Result<RowValues> {
        let params = CompositeParams::new(&self.lattice, f, self.rho)?;
        match method {
            Method::Solver => {
                let sums = self.sums.as_ref().expect("table built for solver").as_ref().map_err(Clone::clone)?;
                let sol = solve_tensor(sums, &params, config.truncation, config.solve)?;
                Ok(RowValues {
                    sigma11: sol.tensor.sigma11,
                    sigma12: sol.tensor.sigma12,
                    sigma22: sol.tensor.sigma22,
                    order: Some(config.truncation),
                    residual: Some(sol.residual),
                })
            }
            Method::Series => {
                let (p11, p22) = self.series.as_ref().expect("series built").as_ref().map_err(Clone::clone)?;
                let first: Complex64 = p11.evaluate(self.rho, f);
                let second = p22.evaluate(self.rho, f);
                Ok(RowValues {
                    sigma11: first.re,
                    sigma12: -first.im,
                    sigma22: second.re,
                    order: Some(config.series_order),
                    residual: Some(p11.tail_estimate(self.rho, f).max(p22.tail_estimate(self.rho, f))),
                })
            }
            Method::Closed(id) => {
                if id.hexagonal_only() && self.lattice.kind() != LatticeKind::Hexagonal {
                    return Err(Error::domain(format!(
                        "the {id} formula applies to the hexagonal array only"
                    )));
                }
                let v = id.evaluate(f, self.rho)?;
                Ok(RowValues {
                    sigma11: v,
                    sigma12: 0.0,
                    sigma22: v,
                    order: None,
                    residual: None,
                })
            }
        }
    }
}

/// Evaluates every `(f, method)` pair, `f` major. Failures are recorded in
/// their rows; only an invalid configuration is an error.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<ResultRow>> {
    config.validate()?;
    let engine = Engine::new(config)?;
    let mut rows = Vec::new();
    for f in config.f_grid() {
        for &method in &config.methods {
            let outcome = match engine.row(config, method, f) {
                Ok(v) => RowOutcome::Ok(v),
                Err(e) => RowOutcome::Failed {
                    status: RowStatus::of(&e),
                    message: e.to_string(),
                },
            };
            rows.push(ResultRow { f, method, outcome });
        }
    }
    Ok(rows)
}

fn num(x: f64) -> String {
    // `+ 0.0` folds -0 into +0
    format!("{:.16e}", x + 0.0)
}

/// CSV text: fixed header, 17 significant digits, LF line endings.
pub fn render_csv(rows: &[ResultRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        let _ = write!(out, "{},{},", num(row.f), row.method);
        match row.values() {
            Some(v) => {
                let order = v.order.map(|o| o.to_string()).unwrap_or_default();
                let residual = v.residual.map(num).unwrap_or_default();
                let _ = write!(
                    out,
                    "{},{},{},{order},{residual},",
                    num(v.sigma11),
                    num(v.sigma12),
                    num(v.sigma22)
                );
            }
            None => out.push_str(",,,,,"),
        }
        out.push_str(row.status().name());
        out.push('\n');
    }
    out
}

pub fn write_csv(rows: &[ResultRow], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, render_csv(rows)).map_err(|e| Error::io(path, e))
}

/// Path of the plotting script written next to `csv`.
pub fn plot_script_path(csv: &Path) -> PathBuf {
    let mut name = csv.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".plot.py");
    csv.with_file_name(name)
}

/// Matplotlib script that draws `σ11(f)` per method from `csv`.
pub fn plot_script(csv: &Path) -> String {
    let name = csv.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    format!(
        r#"import csv
import os
from collections import defaultdict

import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
data = os.path.join(here, {name:?})
curves = defaultdict(lambda: ([], []))
with open(data, newline="") as fh:
    for row in csv.DictReader(fh):
        if row["status"] != "ok":
            continue
        xs, ys = curves[row["method"]]
        xs.append(float(row["f"]))
        ys.append(float(row["sigma11"]))

fig, ax = plt.subplots()
for method, (xs, ys) in curves.items():
    ax.plot(xs, ys, label=method)
ax.set_xlabel("f")
ax.set_ylabel("sigma_11")
ax.legend()
fig.savefig(os.path.splitext(data)[0] + ".png", dpi=150)
"#
    )
}

pub fn write_plot_script(csv: &Path) -> Result<PathBuf> {
    let path = plot_script_path(csv);
    std::fs::write(&path, plot_script(csv)).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(lattice: LatticeKind, methods: &[Method], rho: f64, f: (f64, f64, usize)) -> SweepConfig {
        let mut c = SweepConfig::point(lattice, methods[0], Contrast::Rho(rho), f.0);
        c.methods = methods.to_vec();
        c.f_max = f.1;
        c.steps = f.2;
        c
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("pade".parse::<Method>().is_err());
    }

    #[test]
    fn grid_cardinality() {
        let c = config(LatticeKind::Hexagonal, &[Method::Series], 1.0, (0.0, 0.9, 90));
        let g = c.f_grid();
        assert_eq!(g.len(), 91);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[90], 0.9);
        assert_eq!(config(LatticeKind::Square, &[Method::Solver], 1.0, (0.3, 0.3, 1)).f_grid(), vec![0.3]);
    }

    #[test]
    fn validation() {
        let ok = config(LatticeKind::Square, &[Method::Solver], 0.5, (0.1, 0.5, 4));
        assert!(ok.validate().is_ok());
        let mut bad = ok.clone();
        bad.methods.clear();
        assert!(bad.validate().is_err());
        let mut bad = ok.clone();
        bad.steps = 0;
        assert!(bad.validate().is_err());
        let mut bad = ok.clone();
        bad.f_min = 0.6;
        assert!(bad.validate().is_err());
        let mut bad = ok.clone();
        bad.contrast = Contrast::Rho(1.5);
        assert!(bad.validate().is_err());
        let mut bad = ok.clone();
        bad.methods.push(Method::Solver);
        assert!(bad.validate().is_err());
        let mut bad = ok;
        bad.contrast = Contrast::Ratio(-2.0);
        assert!(bad.validate().is_err());
    }

    #[test]
    fn homogeneous_sweep() {
        let c = config(LatticeKind::Square, &Method::ALL, 0.0, (0.0, 0.7, 7));
        for row in run_sweep(&c).unwrap() {
            if let Some(v) = row.values() {
                assert!((v.sigma11 - 1.0).abs() < 1e-15, "{row:?}");
                assert!((v.sigma22 - 1.0).abs() < 1e-15);
                assert_eq!(v.sigma12, 0.0);
            }
        }
    }

    #[test]
    fn failures_stay_in_their_rows() {
        let c = config(
            LatticeKind::Square,
            &[Method::Closed(FormulaId::Cma), Method::Closed(FormulaId::PerrinsHex)],
            1.0,
            (0.7, 0.8, 1),
        );
        let rows = run_sweep(&c).unwrap();
        let status: Vec<_> = rows.iter().map(|r| r.status()).collect();
        // 0.8 is past the square touching bound π/4
        assert_eq!(
            status,
            [RowStatus::Ok, RowStatus::DomainError, RowStatus::DomainError, RowStatus::DomainError]
        );
    }

    #[test]
    fn csv_layout() {
        assert_eq!(render_csv(&[]), format!("{CSV_HEADER}\n"));
        let c = config(LatticeKind::Hexagonal, &[Method::Closed(FormulaId::KellerHex)], 1.0, (0.5, 0.95, 1));
        let text = render_csv(&run_sweep(&c).unwrap());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(!text.contains('\r'));
        assert!(lines[1].starts_with("5.0000000000000000e-1,keller,"), "{}", lines[1]);
        assert!(lines[1].ends_with(",,,ok"));
        assert_eq!(lines[2], "9.4999999999999996e-1,keller,,,,,,domain-error");
    }

    #[test]
    fn plot_script_sits_next_to_csv() {
        let p = plot_script_path(Path::new("/tmp/out/run.csv"));
        assert_eq!(p, Path::new("/tmp/out/run.csv.plot.py"));
        assert!(plot_script(Path::new("/tmp/out/run.csv")).contains("\"run.csv\""));
    }
}
