use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::lattice::Lattice;

/// Concentrations closer than this to the touching bound are rejected.
pub const TOUCHING_GUARD: f64 = 1e-9;

/// Contrast `ϱ = (σ - 1)/(σ + 1)` for inclusion/matrix conductivity ratio `σ`.
/// `σ = +∞` maps to `ϱ = 1`.
pub fn contrast_from_ratio(sigma: f64) -> Result<f64> {
    if sigma == f64::INFINITY {
        return Ok(1.0);
    }
    if !(sigma.is_finite() && sigma >= 0.0) {
        return Err(Error::invalid(format!(
            "conductivity ratio must be in [0, inf], got {sigma}"
        )));
    }
    Ok((sigma - 1.0) / (sigma + 1.0))
}

/// Inverse of [`contrast_from_ratio`]; `ϱ = 1` gives `+∞`.
pub fn ratio_from_contrast(rho: f64) -> f64 {
    if rho == 1.0 {
        f64::INFINITY
    } else {
        (1.0 + rho) / (1.0 - rho)
    }
}

/// One disk of radius `r0` per unit-area cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompositeParams {
    pub r0: f64,
    /// Concentration `π r0²`.
    pub f: f64,
    /// Inclusion conductivity relative to the matrix (may be `+∞`).
    pub sigma: f64,
    pub rho: f64,
    /// Touching concentration of the lattice the parameters were checked against.
    pub f_max: f64,
}

impl CompositeParams {
    /// Validates concentration and contrast against `lattice`.
    pub fn new(lattice: &Lattice, f: f64, rho: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&rho) {
            return Err(Error::invalid(format!("contrast must lie in [-1, 1], got {rho}")));
        }
        let f_max = lattice.touching_concentration();
        if !(f.is_finite() && f >= 0.0) {
            return Err(Error::invalid(format!("concentration must be nonnegative, got {f}")));
        }
        if f > f_max - TOUCHING_GUARD {
            return Err(Error::domain(format!(
                "concentration {f} at or beyond the touching bound {f_max} of the {} lattice",
                lattice.kind()
            )));
        }
        Ok(CompositeParams {
            r0: (f / PI).sqrt(),
            f,
            sigma: ratio_from_contrast(rho),
            rho,
            f_max,
        })
    }

    pub fn from_ratio(lattice: &Lattice, f: f64, sigma: f64) -> Result<Self> {
        let rho = contrast_from_ratio(sigma)?;
        let mut p = Self::new(lattice, f, rho)?;
        p.sigma = sigma;
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contrast_limits() {
        assert_eq!(contrast_from_ratio(f64::INFINITY).unwrap(), 1.0);
        assert_eq!(contrast_from_ratio(0.0).unwrap(), -1.0);
        assert_eq!(contrast_from_ratio(1.0).unwrap(), 0.0);
        assert_eq!(contrast_from_ratio(3.0).unwrap(), 0.5);
        assert!(contrast_from_ratio(-1.0).is_err());
        assert!(contrast_from_ratio(f64::NAN).is_err());
        assert_eq!(ratio_from_contrast(1.0), f64::INFINITY);
        assert_eq!(ratio_from_contrast(-1.0), 0.0);
    }

    #[test]
    fn radius_from_concentration() {
        let p = CompositeParams::new(&Lattice::square(), 0.5, 1.0).unwrap();
        assert!((PI * p.r0 * p.r0 - 0.5).abs() < 1e-15);
        assert_eq!(p.sigma, f64::INFINITY);
    }

    #[test]
    fn touching_guard() {
        let sq = Lattice::square();
        assert!(CompositeParams::new(&sq, PI / 4.0 - 1e-6, 1.0).is_ok());
        assert!(matches!(CompositeParams::new(&sq, PI / 4.0, 1.0), Err(Error::Domain(_))));
        assert!(CompositeParams::new(&sq, PI / 4.0 - 1e-10, 1.0).is_err());
        assert!(CompositeParams::new(&sq, -0.1, 1.0).is_err());
        assert!(CompositeParams::new(&sq, 0.1, 1.5).is_err());
    }
}
