//! Expansion of `σ11 - iσ12` as a truncated polynomial in the contrast `ϱ`
//! and the concentration `f`.
//!
//! Each chain `(m_1, ..., m_k)` of positive indices contributes
//!
//! ```text
//! ϱ^{k+2} f^{2+e} · 2/π^{e+1} · s_{m_1}^{(1)} s_{m_2}^{(m_1)} ⋯ s_{m_k}^{(m_{k-1})} s_1^{(m_k)},
//! ```
//!
//! with `e = Σ (2 m_j - 1)`. The chains are never enumerated: a transfer DP
//! over `(last index, e)` carries the partial products, one entry per
//! chain length.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::binomial::binomial;
use crate::error::{Error, Result};
use crate::lattice::{Lattice, LatticeKind};
use crate::sums::{build_sum_table, LatticeSumTable};

pub const DEFAULT_SERIES_ORDER: usize = 26;
pub const MAX_SERIES_ORDER: usize = 40;
/// Accuracy requested from the lattice sums behind [`hexagonal_coefficients`].
pub const SERIES_SUM_TOLERANCE: f64 = 1e-13;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// `Σ c_{j,k} ϱ^k f^j` over `0 <= k <= j <= order_f`.
#[derive(Debug, Clone, PartialEq)]
pub struct BiPolynomial {
    order_f: usize,
    // coeffs[j][k], k <= j
    coeffs: Vec<Vec<Complex64>>,
    lattice: Option<LatticeKind>,
}

impl BiPolynomial {
    pub fn zero(order_f: usize, lattice: Option<LatticeKind>) -> Self {
        BiPolynomial {
            order_f,
            coeffs: (0..=order_f).map(|j| vec![ZERO; j + 1]).collect(),
            lattice,
        }
    }

    pub fn order_f(&self) -> usize {
        self.order_f
    }

    pub fn lattice(&self) -> Option<LatticeKind> {
        self.lattice
    }

    /// Coefficient of `ϱ^k f^j`; zero outside the stored triangle.
    pub fn coeff(&self, j: usize, k: usize) -> Complex64 {
        self.coeffs
            .get(j)
            .and_then(|row| row.get(k))
            .copied()
            .unwrap_or(ZERO)
    }

    /// Adds `value` to the coefficient of `ϱ^k f^j`. Monomials above the
    /// truncation order are dropped.
    pub fn add(&mut self, j: usize, k: usize, value: Complex64) -> Result<()> {
        if k > j {
            return Err(Error::invalid(format!("monomial rho^{k} f^{j} has k > j")));
        }
        if j <= self.order_f {
            self.coeffs[j][k] += value;
        }
        Ok(())
    }

    /// Coefficients of `f^j` once `ϱ` is fixed.
    pub fn at_contrast(&self, rho: f64) -> Vec<Complex64> {
        self.coeffs
            .iter()
            .map(|row| row.iter().rev().fold(ZERO, |acc, &c| acc * rho + c))
            .collect()
    }

    /// Horner evaluation in `f`, with each coefficient a polynomial in `ϱ`.
    pub fn evaluate(&self, rho: f64, f: f64) -> Complex64 {
        self.at_contrast(rho)
            .iter()
            .rev()
            .fold(ZERO, |acc, &c| acc * f + c)
    }

    /// Magnitude of the highest retained `f` power at `(ϱ, f)`, a rough
    /// estimate of the truncation error.
    pub fn tail_estimate(&self, rho: f64, f: f64) -> f64 {
        let top = self.at_contrast(rho)[self.order_f];
        top.norm() * f.powi(self.order_f as i32)
    }

    /// The same polynomial with `ϱ` replaced by `-ϱ`.
    pub fn reflect_contrast(&self) -> Self {
        let mut out = self.clone();
        for row in &mut out.coeffs {
            for c in row.iter_mut().skip(1).step_by(2) {
                *c = -*c;
            }
        }
        out
    }

    /// Product truncated to the smaller of the two orders.
    pub fn mul_truncated(&self, other: &BiPolynomial) -> Self {
        let n = self.order_f.min(other.order_f);
        let lattice = if self.lattice == other.lattice { self.lattice } else { None };
        let mut out = BiPolynomial::zero(n, lattice);
        for j1 in 0..=n {
            for j2 in 0..=n - j1 {
                for (k1, &a) in self.coeffs[j1].iter().enumerate() {
                    if a == ZERO {
                        continue;
                    }
                    for (k2, &b) in other.coeffs[j2].iter().enumerate() {
                        out.coeffs[j1 + j2][k1 + k2] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Largest deviation from the constant polynomial `1`.
    pub fn distance_from_one(&self) -> f64 {
        let mut worst: f64 = (self.coeff(0, 0) - 1.0).norm();
        for row in self.coeffs.iter().skip(1) {
            for c in row {
                worst = worst.max(c.norm());
            }
        }
        worst
    }

    /// Plain-text export with header `j,k,re,im`, one line per stored
    /// monomial.
    pub fn to_table(&self) -> String {
        let mut out = String::from("j,k,re,im\n");
        for (j, row) in self.coeffs.iter().enumerate() {
            for (k, c) in row.iter().enumerate() {
                let _ = writeln!(out, "{j},{k},{:.16e},{:.16e}", c.re, c.im);
            }
        }
        out
    }

    /// Reads the format of [`BiPolynomial::to_table`]; the order is the
    /// largest `j` present.
    pub fn from_table(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line == "j,k,re,im" {
                continue;
            }
            let bad = || Error::invalid(format!("malformed coefficient line {}: '{line}'", lineno + 1));
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 4 {
                return Err(bad());
            }
            let j: usize = fields[0].parse().map_err(|_| bad())?;
            let k: usize = fields[1].parse().map_err(|_| bad())?;
            let re: f64 = fields[2].parse().map_err(|_| bad())?;
            let im: f64 = fields[3].parse().map_err(|_| bad())?;
            entries.push((j, k, Complex64::new(re, im)));
        }
        let order = entries.iter().map(|e| e.0).max().unwrap_or(0);
        let mut poly = BiPolynomial::zero(order, None);
        for (j, k, c) in entries {
            poly.add(j, k, c)?;
        }
        Ok(poly)
    }
}

/// `s_{to}^{(from)} = C(2 from + 2 to - 3, 2 from - 1) · S_{2(from + to - 1)}`.
pub fn chain_weight(sums: &LatticeSumTable, m_from: u32, m_to: u32) -> Result<Complex64> {
    if m_from == 0 || m_to == 0 {
        return Err(Error::invalid(format!(
            "chain indices start at 1, got ({m_from}, {m_to})"
        )));
    }
    let s = sums.require(2 * (m_from + m_to - 1))?;
    Ok(s * binomial(2 * m_from + 2 * m_to - 3, 2 * m_from - 1))
}

/// Highest lattice-sum order the expansion to `f^order_f` touches.
pub fn required_sum_order(order_f: usize) -> u32 {
    let n = order_f.saturating_sub(1) as u32;
    (n - n % 2).max(2)
}

fn check_order(order_f: usize) -> Result<()> {
    if order_f > MAX_SERIES_ORDER {
        return Err(Error::invalid(format!(
            "series order {order_f} exceeds the cap {MAX_SERIES_ORDER}"
        )));
    }
    Ok(())
}

/// Expansion of `σ11 - iσ12` through `f^order_f`.
pub fn expand_effective_series(sums: &LatticeSumTable, order_f: usize) -> Result<BiPolynomial> {
    check_order(order_f)?;
    let need = required_sum_order(order_f);
    if order_f >= 2 && sums.max_order() < need {
        return Err(Error::invalid(format!(
            "series to f^{order_f} needs lattice sums through order {need}, table stops at {}",
            sums.max_order()
        )));
    }
    let n = order_f;
    let mut poly = BiPolynomial::zero(n, Some(sums.lattice().kind()));
    poly.add(0, 0, Complex64::new(1.0, 0.0))?;
    poly.add(1, 1, Complex64::new(2.0, 0.0))?;
    if n < 2 {
        return Ok(poly);
    }
    poly.add(2, 2, sums.require(2)? * (2.0 / PI))?;
    if n < 3 {
        return Ok(poly);
    }

    // Exponent budget for e = Σ (2 m_j - 1).
    let budget = n - 2;
    let max_index = budget.div_ceil(2);
    let weight = |from: usize, to: usize| chain_weight(sums, from as u32, to as u32);

    // dp[e][m][k]: sum over chains of length k, last index m, exponent e.
    let mut dp = vec![vec![Vec::<Complex64>::new(); max_index + 1]; budget + 1];
    for m in 1..=max_index {
        let e = 2 * m - 1;
        let mut v = vec![ZERO; 2];
        v[1] = weight(1, m)?;
        dp[e][m] = v;
    }

    for e in 1..=budget {
        for m in 1..=max_index {
            let state = std::mem::take(&mut dp[e][m]);
            if state.is_empty() {
                continue;
            }
            let close = weight(m, 1)? * (2.0 / PI.powi(e as i32 + 1));
            for (k, &v) in state.iter().enumerate().skip(1) {
                poly.add(2 + e, k + 2, v * close)?;
            }
            for next in 1..=max_index {
                let e2 = e + 2 * next - 1;
                if e2 > budget {
                    break;
                }
                let w = weight(m, next)?;
                let target = &mut dp[e2][next];
                if target.len() < state.len() + 1 {
                    target.resize(state.len() + 1, ZERO);
                }
                for (k, &v) in state.iter().enumerate().skip(1) {
                    target[k + 1] += v * w;
                }
            }
        }
    }
    Ok(poly)
}

/// Expansion of `σ22`: the same chains over the quarter-turned sums.
pub fn sigma22_series(sums: &LatticeSumTable, order_f: usize) -> Result<BiPolynomial> {
    expand_effective_series(&sums.quarter_turn(), order_f)
}

/// Coefficients of `f^0 ..= f^order_f` for perfectly conducting disks on the
/// hexagonal array.
pub fn hexagonal_coefficients(order_f: usize) -> Result<Vec<f64>> {
    check_order(order_f)?;
    let sums = build_sum_table(&Lattice::hexagonal(), required_sum_order(order_f), SERIES_SUM_TOLERANCE)?;
    let poly = expand_effective_series(&sums, order_f)?;
    Ok(poly.at_contrast(1.0).iter().map(|c| c.re).collect())
}
