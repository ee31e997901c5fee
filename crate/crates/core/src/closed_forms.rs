//! Closed-form approximations of the effective conductivity.
//!
//! Only Clausius–Mossotti applies to any array; the others are fitted to
//! the hexagonal array and use the decimal constants exactly as published.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Touching concentration of the hexagonal array, `π/√12`.
pub const HEX_FC: f64 = 0.906_899_682_117_108_9;

/// Published constants, verbatim.
pub mod constants {
    // Perrins-McPhedran fit: 1 + 2fϱ/(1 - fϱ - A ϱ² f⁶/(1 - B ϱ² f¹²) - C ϱ² f¹²)
    pub const PERRINS_A: f64 = 0.075422;
    pub const PERRINS_B: f64 = 1.060283;
    pub const PERRINS_C: f64 = 0.000076;

    // Matched formula for perfect conductors, prefactor
    // α(f) = a0/√(f_c - f) + a1 + a2 √(f_c - f) + a3 (f_c - f)
    pub const ALPHA: [f64; 4] = [4.82231, -5.79784, 2.13365, -0.328432];

    // numerator F(f), coefficients of f^0 ..= f^13
    pub const F_NUM: [f64; 14] = [
        1.49313, 1.30576, 0.383574, 0.467713, 0.471121, 0.510435, 0.256682, 0.434917, 0.813868,
        0.961464, 0.317194, 0.377055, -1.2022, -0.931575,
    ];

    // denominator G(f), coefficients of f^0 ..= f^13
    pub const G_DEN: [f64; 14] = [
        1.49313, 1.30576, 0.383574, 0.394949, 0.4479, 0.5034, 0.3033, 0.2715, 0.7328, 0.827239,
        0.25509, 0.239752, -1.26489, -1.0,
    ];

    // U(f, ϱ) as a polynomial in x = ϱ f plus the mixed terms below:
    // U = 26.4332 + 11.8598 x + 2.10888 x³ - 0.660339 x⁹ - x¹¹ - 0.232667 x⁷
    //     + 1.99365 ϱ³ f⁷ + 0.457218 ϱ⁵ f⁵ + 1.59231 ϱ⁵ f⁹ + 1.44959 ϱ⁷ f¹¹
    pub const U0: f64 = 26.4332;
    pub const U1: f64 = 11.8598;
    pub const U3: f64 = 2.10888;
    pub const U3_F7: f64 = 1.99365;
    pub const U5_F5: f64 = 0.457218;
    pub const U5_F9: f64 = 1.59231;
    pub const U7_F7: f64 = 0.232667;
    pub const U7_F11: f64 = 1.44959;
    pub const U9: f64 = 0.660339;
}

/// Closed-form formula selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FormulaId {
    Cma,
    PerrinsHex,
    KellerHex,
    MatchedPerfectHex,
    MatchedContrastHex,
}

impl FormulaId {
    pub const ALL: [FormulaId; 5] = [
        FormulaId::Cma,
        FormulaId::PerrinsHex,
        FormulaId::KellerHex,
        FormulaId::MatchedPerfectHex,
        FormulaId::MatchedContrastHex,
    ];

    /// Name used on the command line and in output tables.
    pub fn name(self) -> &'static str {
        match self {
            FormulaId::Cma => "cma",
            FormulaId::PerrinsHex => "perrins",
            FormulaId::KellerHex => "keller",
            FormulaId::MatchedPerfectHex => "matched-perfect",
            FormulaId::MatchedContrastHex => "matched-contrast",
        }
    }

    /// True for the formulas fitted to the hexagonal array.
    pub fn hexagonal_only(self) -> bool {
        self != FormulaId::Cma
    }

    /// True for the formulas written for perfectly conducting disks.
    pub fn perfect_conductor_only(self) -> bool {
        matches!(self, FormulaId::KellerHex | FormulaId::MatchedPerfectHex)
    }

    pub fn evaluate(self, f: f64, rho: f64) -> Result<f64> {
        if self.perfect_conductor_only() && rho != 1.0 {
            return Err(Error::domain(format!(
                "the {} formula holds for perfectly conducting disks only (rho = 1), got rho = {rho}",
                self.name()
            )));
        }
        match self {
            FormulaId::Cma => clausius_mossotti(f, rho),
            FormulaId::PerrinsHex => perrins_mcphedran_hex(f, rho),
            FormulaId::KellerHex => keller_hex(f),
            FormulaId::MatchedPerfectHex => matched_perfect_hex(f),
            FormulaId::MatchedContrastHex => matched_contrast_hex(f, rho),
        }
    }
}

impl fmt::Display for FormulaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FormulaId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FormulaId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown formula '{s}'")))
    }
}

// Denominators smaller than this are treated as poles.
const POLE_GUARD: f64 = 1e-12;

fn check_inputs(f: f64, rho: f64) -> Result<()> {
    if !(f.is_finite() && f >= 0.0) {
        return Err(Error::invalid(format!("concentration must be nonnegative, got {f}")));
    }
    if !(-1.0..=1.0).contains(&rho) {
        return Err(Error::invalid(format!("contrast must lie in [-1, 1], got {rho}")));
    }
    Ok(())
}

fn check_below_fc(f: f64) -> Result<()> {
    check_inputs(f, 0.0)?;
    if f >= HEX_FC {
        return Err(Error::domain(format!(
            "concentration {f} at or beyond the hexagonal percolation threshold {HEX_FC}"
        )));
    }
    Ok(())
}

fn nonzero(den: f64, what: &str) -> Result<f64> {
    if den.abs() < POLE_GUARD || !den.is_finite() {
        return Err(Error::Pole(format!("{what} vanishes ({den:e})")));
    }
    Ok(den)
}

fn polynomial(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// `(1 + fϱ)/(1 - fϱ)`.
pub fn clausius_mossotti(f: f64, rho: f64) -> Result<f64> {
    check_inputs(f, rho)?;
    let den = nonzero(1.0 - f * rho, "1 - f rho")?;
    Ok((1.0 + f * rho) / den)
}

pub fn perrins_mcphedran_hex(f: f64, rho: f64) -> Result<f64> {
    use constants::*;
    check_inputs(f, rho)?;
    let r2 = rho * rho;
    let f6 = f.powi(6);
    let f12 = f6 * f6;
    let inner = nonzero(1.0 - PERRINS_B * r2 * f12, "inner denominator")?;
    let den = 1.0 - f * rho - PERRINS_A * r2 * f6 / inner - PERRINS_C * r2 * f12;
    Ok(1.0 + 2.0 * f * rho / nonzero(den, "denominator")?)
}

/// Taylor coefficients in `f` of [`perrins_mcphedran_hex`] at fixed `ϱ`,
/// orders `0 ..= order`.
pub fn perrins_taylor_coefficients(rho: f64, order: usize) -> Vec<f64> {
    use constants::*;
    let n = order + 1;
    let r2 = rho * rho;
    // 1/(1 - B ϱ² f¹²) = Σ (B ϱ²)^i f^{12 i}
    let mut den = vec![0.0; n];
    den[0] = 1.0;
    if n > 1 {
        den[1] = -rho;
    }
    let mut term = PERRINS_A * r2;
    let mut p = 6;
    while p < n {
        den[p] -= term;
        term *= PERRINS_B * r2;
        p += 12;
    }
    if n > 12 {
        den[12] -= PERRINS_C * r2;
    }
    let inv = reciprocal(&den);
    let mut out = vec![0.0; n];
    out[0] = 1.0;
    for j in 1..n {
        out[j] += 2.0 * rho * inv[j - 1];
    }
    out
}

// Reciprocal of a power series with a[0] != 0, same length.
fn reciprocal(a: &[f64]) -> Vec<f64> {
    let mut b = vec![0.0; a.len()];
    b[0] = 1.0 / a[0];
    for j in 1..a.len() {
        let s: f64 = (1..=j).map(|i| a[i] * b[j - i]).sum();
        b[j] = -s / a[0];
    }
    b
}

/// `(3^{1/4} π^{3/2}/√2) / √(f_c - f)`, the percolation law of the
/// hexagonal array of perfect conductors.
pub fn keller_hex(f: f64) -> Result<f64> {
    check_below_fc(f)?;
    Ok(keller_prefactor() / (HEX_FC - f).sqrt())
}

pub fn keller_prefactor() -> f64 {
    3f64.powf(0.25) * PI.powf(1.5) / 2f64.sqrt()
}

/// `α(f) F(f)/G(f)` for perfect conductors on the hexagonal array.
pub fn matched_perfect_hex(f: f64) -> Result<f64> {
    use constants::*;
    check_below_fc(f)?;
    let d = HEX_FC - f;
    let s = d.sqrt();
    let alpha = ALPHA[0] / s + ALPHA[1] + ALPHA[2] * s + ALPHA[3] * d;
    let g = nonzero(polynomial(&G_DEN, f), "G(f)")?;
    Ok(alpha * polynomial(&F_NUM, f) / g)
}

fn matched_u(f: f64, rho: f64) -> f64 {
    use constants::*;
    let x = rho * f;
    let (r3, r5, r7) = (rho.powi(3), rho.powi(5), rho.powi(7));
    U0 + U1 * x + U3 * x.powi(3) - U7_F7 * x.powi(7) - U9 * x.powi(9) - x.powi(11)
        + U3_F7 * r3 * f.powi(7)
        + U5_F5 * r5 * f.powi(5)
        + U5_F9 * r5 * f.powi(9)
        + U7_F11 * r7 * f.powi(11)
}

/// `σ*(f,ϱ) U(f,ϱ)/W(f,ϱ)` with `σ* = ((1 + ϱf/f_c)/(1 - ϱf/f_c))^{1/2}`
/// and `W(f,ϱ) = U(f,-ϱ)`.
pub fn matched_contrast_hex(f: f64, rho: f64) -> Result<f64> {
    check_inputs(f, rho)?;
    check_below_fc(f)?;
    let t = rho * f / HEX_FC;
    if t.abs() >= 1.0 {
        return Err(Error::domain(format!("|rho f| = {} reaches f_c", (rho * f).abs())));
    }
    let star = ((1.0 + t) / (1.0 - t)).sqrt();
    let w = nonzero(matched_u(f, -rho), "W(f, rho)")?;
    Ok(star * matched_u(f, rho) / w)
}
