//! Eisenstein–Rayleigh lattice sums `S_m = Σ' P^{-m}`.
//!
//! Sums are taken in the Eisenstein order: for every row `m2` the inner sum
//! over `m1` is completed first, then rows are accumulated outward. The
//! inner sum is truncated at `|m1| <= M1` and the two remaining one-sided
//! tails are closed with an Euler–Maclaurin remainder, so a row costs
//! `O(M1)` and is accurate far beyond the raw `O(1/M1)` partial sum. After
//! the inner limit each row decays like `exp(-2π |m2| Im(ω2)/ω1)`, so few
//! rows are needed. For `m = 2` this ordering is what defines the value; for
//! `m >= 4` the sum converges absolutely and the same ordering is reused.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::Lattice;

/// Largest inner cutoff tried before reporting a convergence failure.
pub const MAX_CUTOFF: usize = 100_000;

const INITIAL_INNER: usize = 32;
const INITIAL_OUTER: usize = 4;

/// Values are accepted once the doubling change is below the tolerance, or
/// below this relative floor for sums whose magnitude makes an absolute
/// tolerance meaningless in double precision.
const RELATIVE_FLOOR: f64 = 1e-14;

/// B_2, B_4, ..., B_10.
const BERNOULLI: [f64; 5] = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0];

/// A lattice-sum value together with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumEstimate {
    pub value: Complex64,
    pub error: f64,
}

impl SumEstimate {
    fn exact(value: Complex64) -> Self {
        SumEstimate { value, error: 0.0 }
    }
}

/// `Σ_{n=M+1}^∞ (a n + c)^{-p}` by Euler–Maclaurin at `x = M`.
fn one_sided_tail(a: f64, c: Complex64, p: u32, cutoff: usize) -> Complex64 {
    let u = c + a * cutoff as f64;
    let w = u.inv();
    let pf = p as f64;
    let mut tail = w.powu(p - 1) / (a * (pf - 1.0)) - 0.5 * w.powu(p);
    let mut factorial = 1.0;
    for (k, b) in BERNOULLI.iter().enumerate() {
        let j = 2 * k as u32 + 1;
        factorial *= (2 * k + 1) as f64 * (2 * k + 2) as f64;
        // j-th derivative of (a x + c)^{-p}
        let falling: f64 = (0..j).map(|i| -pf - i as f64).product();
        let deriv = w.powu(p + j) * (falling * a.powi(j as i32));
        tail -= deriv * (b / factorial);
    }
    tail
}

/// Inner-limit sum of row `c = m2 ω2`: `Σ_{m1} (m1 ω1 + c)^{-p}`, origin excluded.
fn row_sum(omega1: f64, c: Complex64, p: u32, cutoff: usize) -> Complex64 {
    // keep the Euler–Maclaurin point well clear of the row's pole
    let cutoff = cutoff.max((2.0 * c.norm() / omega1).ceil() as usize + 8);
    let mut sum = Complex64::new(0.0, 0.0);
    for n in (1..=cutoff).rev() {
        let shift = omega1 * n as f64;
        sum += (c + shift).inv().powu(p) + (c - shift).inv().powu(p);
    }
    if c != Complex64::new(0.0, 0.0) {
        sum += c.inv().powu(p);
    }
    sum + one_sided_tail(omega1, c, p, cutoff) + one_sided_tail(-omega1, c, p, cutoff)
}

/// Eisenstein-ordered sum `Σ_{|m2|<=outer} Σ_{|m1|<=inner} P^{-p}` with
/// the inner tails closed.
fn iterated_sum(lattice: &Lattice, p: u32, inner: usize, outer: usize) -> Complex64 {
    let omega1 = lattice.omega1();
    let omega2 = lattice.omega2();
    let mut total = Complex64::new(0.0, 0.0);
    for m2 in (1..=outer).rev() {
        let c = omega2 * m2 as f64;
        total += row_sum(omega1, c, p, inner) + row_sum(omega1, -c, p, inner);
    }
    total + row_sum(omega1, Complex64::new(0.0, 0.0), p, inner)
}

/// `S_2` under the Eisenstein summation order with inner cutoff `M1` and
/// outer cutoff `M2`. The error estimate is the change when both cutoffs
/// are doubled.
pub fn eisenstein_s2(lattice: &Lattice, inner_cutoff: usize, outer_cutoff: usize) -> Result<SumEstimate> {
    if outer_cutoff < 1 || inner_cutoff < outer_cutoff {
        return Err(Error::invalid(format!(
            "Eisenstein cutoffs need inner >= outer >= 1, got inner = {inner_cutoff}, outer = {outer_cutoff}"
        )));
    }
    let value = iterated_sum(lattice, 2, inner_cutoff, outer_cutoff);
    let finer = iterated_sum(lattice, 2, 2 * inner_cutoff, 2 * outer_cutoff);
    Ok(SumEstimate {
        value,
        error: (finer - value).norm(),
    })
}

/// Lattice sum `S_m` to absolute accuracy `tolerance`.
///
/// Odd orders, and orders the lattice symmetry forces to vanish, are
/// returned as exact zeros without summation. Lattices closed under complex
/// conjugation get an exactly real value.
pub fn lattice_sum(lattice: &Lattice, order: u32, tolerance: f64) -> Result<SumEstimate> {
    if order < 2 {
        return Err(Error::invalid(format!("lattice sums start at order 2, got {order}")));
    }
    if !(tolerance > 0.0) {
        return Err(Error::invalid(format!("tolerance must be positive, got {tolerance}")));
    }
    if order % 2 == 1 || lattice.symmetry_forces_zero(order) {
        return Ok(SumEstimate::exact(Complex64::new(0.0, 0.0)));
    }
    let mut inner = INITIAL_INNER;
    let mut outer = INITIAL_OUTER;
    let mut coarse = iterated_sum(lattice, order, inner, outer);
    loop {
        let fine = iterated_sum(lattice, order, 2 * inner, 2 * outer);
        let error = (fine - coarse).norm();
        if error <= tolerance.max(RELATIVE_FLOOR * fine.norm()) {
            let value = if lattice.is_mirror_symmetric() {
                Complex64::new(fine.re, 0.0)
            } else {
                fine
            };
            return Ok(SumEstimate { value, error });
        }
        inner *= 2;
        outer *= 2;
        if inner > MAX_CUTOFF {
            return Err(Error::ConvergenceFailure {
                what: format!("lattice sum S_{order}"),
                estimate: fine,
                achieved: error,
            });
        }
        coarse = fine;
    }
}

/// Smallest `|x ω1 + y ω2|` over the boundary `max(|x|, |y|) = 1`.
fn shell_radius(lattice: &Lattice) -> f64 {
    let edge = |fixed: Complex64, dir: Complex64| -> f64 {
        // min over t in [-1, 1] of |fixed + t dir|
        let t = (-(fixed.conj() * dir).re / dir.norm_sqr()).clamp(-1.0, 1.0);
        (fixed + dir * t).norm()
    };
    let w1 = Complex64::new(lattice.omega1(), 0.0);
    let w2 = lattice.omega2();
    edge(w1, w2).min(edge(w2, w1))
}

/// Absolutely convergent sum over square shells `max(|m1|, |m2|) = n`,
/// `n = 1..=shells`, with a rigorous bound on the omitted tail. Requires
/// `order >= 3`.
pub fn shell_sum(lattice: &Lattice, order: u32, shells: usize) -> Result<SumEstimate> {
    if order < 3 {
        return Err(Error::invalid(format!(
            "shell summation needs an absolutely convergent order >= 3, got {order}"
        )));
    }
    let mut total = Complex64::new(0.0, 0.0);
    for n in (1..=shells as i64).rev() {
        let mut shell = Complex64::new(0.0, 0.0);
        for k in -n..n {
            shell += lattice.point(k, -n).inv().powu(order)
                + lattice.point(n, k).inv().powu(order)
                + lattice.point(-k, n).inv().powu(order)
                + lattice.point(-n, -k).inv().powu(order);
        }
        total += shell;
    }
    let lambda = shell_radius(lattice);
    let m = order as f64;
    let error = 8.0 * lambda.powf(-m) * (shells as f64).powf(2.0 - m) / (m - 2.0);
    Ok(SumEstimate { value: total, error })
}

/// Lattice sums `S_2 ..= S_max_order` of one lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeSumTable {
    lattice: Lattice,
    tolerance: f64,
    // indexed by order; entries 0 and 1 unused
    values: Vec<Complex64>,
    accuracy: Vec<f64>,
}

impl LatticeSumTable {
    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn max_order(&self) -> u32 {
        (self.values.len() - 1) as u32
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn get(&self, order: u32) -> Option<Complex64> {
        if order < 2 {
            return None;
        }
        self.values.get(order as usize).copied()
    }

    pub fn accuracy(&self, order: u32) -> Option<f64> {
        if order < 2 {
            return None;
        }
        self.accuracy.get(order as usize).copied()
    }

    /// `S_order`, or an invalid-argument error naming the missing order.
    pub fn require(&self, order: u32) -> Result<Complex64> {
        self.get(order).ok_or_else(|| {
            Error::invalid(format!(
                "lattice sum table covers orders up to {}, order {order} required",
                self.max_order()
            ))
        })
    }

    /// Sums of the lattice turned by a quarter turn, which carries the second
    /// principal direction onto the first: `S_2 -> 2π - S_2` and
    /// `S_m -> (-1)^{m/2} S_m` for even `m >= 4`.
    pub fn quarter_turn(&self) -> Self {
        let mut table = self.clone();
        table.values[2] = Complex64::new(2.0 * PI, 0.0) - table.values[2];
        for m in (6..table.values.len()).step_by(4) {
            table.values[m] = -table.values[m];
        }
        table
    }

    /// Plain-text form, one `order real imag accuracy` line per order.
    pub fn to_fixture(&self) -> String {
        let mut out = String::new();
        for m in 2..=self.max_order() {
            let v = self.values[m as usize];
            let _ = writeln!(out, "{m} {:?} {:?} {:e}", v.re, v.im, self.accuracy[m as usize]);
        }
        out
    }

    pub fn write_fixture(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_fixture()).map_err(|e| Error::io(path, e))
    }
}

/// Parses `order real imag accuracy` lines; `#` starts a comment.
pub fn parse_fixture(text: &str) -> Result<Vec<(u32, SumEstimate)>> {
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let bad = || Error::invalid(format!("malformed lattice-sum line {}: '{line}'", lineno + 1));
        if fields.len() != 4 {
            return Err(bad());
        }
        let order: u32 = fields[0].parse().map_err(|_| bad())?;
        let nums: Vec<f64> = fields[1..]
            .iter()
            .map(|s| s.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad())?;
        rows.push((
            order,
            SumEstimate {
                value: Complex64::new(nums[0], nums[1]),
                error: nums[2],
            },
        ));
    }
    Ok(rows)
}

/// Computes every `S_m`, `2 <= m <= max_order`.
pub fn build_sum_table(lattice: &Lattice, max_order: u32, tolerance: f64) -> Result<LatticeSumTable> {
    if max_order < 2 {
        return Err(Error::invalid(format!("max_order must be >= 2, got {max_order}")));
    }
    let n = max_order as usize + 1;
    let mut values = vec![Complex64::new(0.0, 0.0); n];
    let mut accuracy = vec![0.0; n];
    for m in 2..=max_order {
        let est = lattice_sum(lattice, m, tolerance)?;
        values[m as usize] = est.value;
        accuracy[m as usize] = est.error;
    }
    Ok(LatticeSumTable {
        lattice: *lattice,
        tolerance,
        values,
        accuracy,
    })
}
