//! Truncated ℝ-linear Rayleigh system for the Taylor coefficients of the
//! complex flux inside the inclusion,
//!
//! ```text
//! α_l = ϱ Σ_{m=0..L} K[l][m] conj(α_m) + δ_{l0},
//! K[l][m] = (-1)^m C(l+m+1, l) S_{l+m+2} r0^{2(m+1)},
//! ```
//!
//! and the effective tensor `σ11 - iσ12 = 1 + 2ϱf α_0`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::binomial::binomial;
use crate::composite::CompositeParams;
use crate::error::{Error, Result};
use crate::sums::LatticeSumTable;

pub const DEFAULT_TRUNCATION: usize = 12;
pub const DEFAULT_ITERATION_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSystem {
    order: usize,
    coupling: Vec<Vec<Complex64>>,
    rho: f64,
    f: f64,
    forcing: Vec<f64>,
}

impl TruncatedSystem {
    /// Assembles the `(L+1) × (L+1)` coupling matrix. Needs `S_2 ..= S_{2L+2}`.
    pub fn build(sums: &LatticeSumTable, params: &CompositeParams, order: usize) -> Result<Self> {
        let needed = 2 * order as u32 + 2;
        if sums.max_order() < needed {
            return Err(Error::invalid(format!(
                "truncation order {order} needs lattice sums up to order {needed}, table has {}",
                sums.max_order()
            )));
        }
        let r2 = params.r0 * params.r0;
        let coupling = (0..=order)
            .map(|l| {
                (0..=order)
                    .map(|m| {
                        let s = sums.get((l + m + 2) as u32).expect("order checked above");
                        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                        let factor = binomial((l + m + 1) as u32, l as u32);
                        s * (sign * factor * r2.powi(m as i32 + 1))
                    })
                    .collect()
            })
            .collect();
        let mut forcing = vec![0.0; order + 1];
        forcing[0] = 1.0;
        Ok(TruncatedSystem {
            order,
            coupling,
            rho: params.rho,
            f: params.f,
            forcing,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn coupling(&self, l: usize, m: usize) -> Complex64 {
        self.coupling[l][m]
    }

    pub fn forcing(&self) -> &[f64] {
        &self.forcing
    }

    /// Same system with the forcing vector scaled by `c`.
    pub fn scaled_forcing(&self, c: f64) -> Self {
        let mut s = self.clone();
        s.forcing.iter_mut().for_each(|x| *x *= c);
        s
    }

    /// Right-hand side `ϱ K conj(α) + forcing`.
    fn apply(&self, alpha: &[Complex64]) -> Vec<Complex64> {
        self.coupling
            .iter()
            .zip(&self.forcing)
            .map(|(row, &b)| {
                let s: Complex64 = row.iter().zip(alpha).map(|(k, a)| k * a.conj()).sum();
                s * self.rho + b
            })
            .collect()
    }

    /// Largest row defect of the conjugate-linear relation.
    pub fn residual(&self, alpha: &[Complex64]) -> f64 {
        self.apply(alpha)
            .iter()
            .zip(alpha)
            .map(|(rhs, a)| (a - rhs).norm())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FluxCoefficients {
    pub alpha: Vec<Complex64>,
    pub residual: f64,
    /// Iterations used by [`solve_iterative`]; `None` for the direct solve.
    pub iterations: Option<usize>,
}

impl FluxCoefficients {
    pub fn alpha0(&self) -> Complex64 {
        self.alpha[0]
    }
}

/// Solves the system exactly after splitting every unknown into real and
/// imaginary parts, `(Re α_0, Im α_0, Re α_1, ...)`.
pub fn solve_direct(system: &TruncatedSystem) -> Result<FluxCoefficients> {
    let n = system.order + 1;
    let rho = system.rho;
    let mut a = DMatrix::<f64>::identity(2 * n, 2 * n);
    let mut b = DVector::<f64>::zeros(2 * n);
    for l in 0..n {
        b[2 * l] = system.forcing[l];
        for m in 0..n {
            let k = system.coupling[l][m];
            // K conj(α) = (Re K x + Im K y) + i (Im K x - Re K y)
            a[(2 * l, 2 * m)] -= rho * k.re;
            a[(2 * l, 2 * m + 1)] -= rho * k.im;
            a[(2 * l + 1, 2 * m)] -= rho * k.im;
            a[(2 * l + 1, 2 * m + 1)] += rho * k.re;
        }
    }
    let singular = || Error::SingularSystem {
        rho,
        f: system.f,
        order: system.order,
    };
    let x = a.lu().solve(&b).ok_or_else(singular)?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(singular());
    }
    let alpha: Vec<Complex64> = (0..n).map(|l| Complex64::new(x[2 * l], x[2 * l + 1])).collect();
    let residual = system.residual(&alpha);
    Ok(FluxCoefficients {
        alpha,
        residual,
        iterations: None,
    })
}

/// Successive approximations `α ← ϱ K conj(α) + forcing`, starting from the
/// forcing vector, until consecutive iterates differ by less than `tol` in
/// the max norm.
pub fn solve_iterative(system: &TruncatedSystem, max_iter: usize, tol: f64) -> Result<FluxCoefficients> {
    if system.rho.abs() > 1.0 {
        return Err(Error::invalid(format!("|rho| must not exceed 1, got {}", system.rho)));
    }
    let mut alpha: Vec<Complex64> = system.forcing.iter().map(|&b| Complex64::new(b, 0.0)).collect();
    let mut change = f64::INFINITY;
    for it in 1..=max_iter {
        let next = system.apply(&alpha);
        change = next
            .iter()
            .zip(&alpha)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        alpha = next;
        if change < tol {
            let residual = system.residual(&alpha);
            return Ok(FluxCoefficients {
                alpha,
                residual,
                iterations: Some(it),
            });
        }
    }
    Err(Error::ConvergenceFailure {
        what: format!("successive approximations (order {})", system.order),
        estimate: alpha[0],
        achieved: change,
    })
}

/// Homogenized conductivity tensor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveTensor {
    pub sigma11: f64,
    pub sigma12: f64,
    pub sigma22: f64,
}

impl EffectiveTensor {
    pub const IDENTITY: EffectiveTensor = EffectiveTensor {
        sigma11: 1.0,
        sigma12: 0.0,
        sigma22: 1.0,
    };
}

/// `σ11 - iσ12 = 1 + 2ϱf α_0` from the principal system, `σ22` from the
/// companion system built on [`LatticeSumTable::quarter_turn`].
pub fn effective_tensor(
    params: &CompositeParams,
    coeffs_11: &FluxCoefficients,
    coeffs_22: &FluxCoefficients,
) -> EffectiveTensor {
    let scale = 2.0 * params.rho * params.f;
    let first = Complex64::new(1.0, 0.0) + coeffs_11.alpha0() * scale;
    let second = Complex64::new(1.0, 0.0) + coeffs_22.alpha0() * scale;
    EffectiveTensor {
        sigma11: first.re,
        sigma12: -first.im,
        sigma22: second.re,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SolveMethod {
    Direct,
    Iterative { max_iter: usize, tol: f64 },
}

impl SolveMethod {
    fn run(&self, system: &TruncatedSystem) -> Result<FluxCoefficients> {
        match *self {
            SolveMethod::Direct => solve_direct(system),
            SolveMethod::Iterative { max_iter, tol } => solve_iterative(system, max_iter, tol),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TensorSolution {
    pub tensor: EffectiveTensor,
    /// Larger of the two systems' residuals.
    pub residual: f64,
}

/// Builds and solves both principal systems at truncation `order`.
pub fn solve_tensor(
    sums: &LatticeSumTable,
    params: &CompositeParams,
    order: usize,
    method: SolveMethod,
) -> Result<TensorSolution> {
    let first = method.run(&TruncatedSystem::build(sums, params, order)?)?;
    let second = method.run(&TruncatedSystem::build(&sums.quarter_turn(), params, order)?)?;
    Ok(TensorSolution {
        tensor: effective_tensor(params, &first, &second),
        residual: first.residual.max(second.residual),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyEntry {
    pub order: usize,
    pub result: Result<TensorSolution>,
}

/// Solves at each truncation order; a failing order is recorded, not fatal.
pub fn convergence_study(
    sums: &LatticeSumTable,
    params: &CompositeParams,
    orders: &[usize],
) -> Result<Vec<StudyEntry>> {
    if orders.is_empty() {
        return Err(Error::invalid("convergence study needs at least one order"));
    }
    if orders.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid(format!("orders must be strictly ascending, got {orders:?}")));
    }
    Ok(orders
        .iter()
        .map(|&order| StudyEntry {
            order,
            result: solve_tensor(sums, params, order, SolveMethod::Direct),
        })
        .collect())
}
