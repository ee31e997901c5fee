//! Period lattices of the composite, normalized to a unit-area cell.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Shape of the period lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LatticeKind {
    Square,
    Hexagonal,
    /// Rectangle with side ratio `omega1 / |omega2| = aspect`.
    Rectangular(f64),
    /// Arbitrary lattice with modulus `tau = omega2 / omega1`, `Im tau > 0`.
    General(Complex64),
}

impl fmt::Display for LatticeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeKind::Square => write!(f, "square"),
            LatticeKind::Hexagonal => write!(f, "hexagonal"),
            LatticeKind::Rectangular(a) => write!(f, "rectangular({a})"),
            LatticeKind::General(t) => write!(f, "general({}{:+}i)", t.re, t.im),
        }
    }
}

/// Fundamental pair of periods with `omega1 > 0`, `Im omega2 > 0` and cell
/// area `omega1 * Im omega2 = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lattice {
    omega1: f64,
    omega2: Complex64,
    kind: LatticeKind,
}

impl Lattice {
    pub fn square() -> Self {
        Lattice {
            omega1: 1.0,
            omega2: Complex64::i(),
            kind: LatticeKind::Square,
        }
    }

    pub fn hexagonal() -> Self {
        // omega1^2 sin(pi/3) = 1
        let omega1 = (2.0 / 3f64.sqrt()).sqrt();
        Lattice {
            omega1,
            omega2: Complex64::from_polar(omega1, PI / 3.0),
            kind: LatticeKind::Hexagonal,
        }
    }

    /// Rectangular lattice `omega1 = sqrt(a)`, `omega2 = i / sqrt(a)`.
    /// The aspect-1 rectangle is returned as the square lattice.
    pub fn rectangular(aspect: f64) -> Result<Self> {
        if !(aspect.is_finite() && aspect > 0.0) {
            return Err(Error::invalid(format!("aspect must be positive, got {aspect}")));
        }
        if aspect == 1.0 {
            return Ok(Lattice::square());
        }
        let s = aspect.sqrt();
        Ok(Lattice {
            omega1: s,
            omega2: Complex64::new(0.0, 1.0 / s),
            kind: LatticeKind::Rectangular(aspect),
        })
    }

    /// Lattice spanned by `1` and `tau`, rescaled to unit cell area.
    pub fn general(tau: Complex64) -> Result<Self> {
        if !(tau.re.is_finite() && tau.im.is_finite() && tau.im > 0.0) {
            return Err(Error::invalid(format!(
                "modulus must have positive imaginary part, got {tau}"
            )));
        }
        let omega1 = 1.0 / tau.im.sqrt();
        Ok(Lattice {
            omega1,
            omega2: tau * omega1,
            kind: LatticeKind::General(tau),
        })
    }

    pub fn omega1(&self) -> f64 {
        self.omega1
    }

    pub fn omega2(&self) -> Complex64 {
        self.omega2
    }

    pub fn kind(&self) -> LatticeKind {
        self.kind
    }

    pub fn area(&self) -> f64 {
        self.omega1 * self.omega2.im
    }

    /// Lattice point `m1 omega1 + m2 omega2`.
    pub fn point(&self, m1: i64, m2: i64) -> Complex64 {
        self.omega2 * m2 as f64 + self.omega1 * m1 as f64
    }

    /// Length of the shortest nonzero lattice vector.
    pub fn shortest_vector(&self) -> f64 {
        // Lagrange-Gauss reduction of the basis.
        let mut u = Complex64::new(self.omega1, 0.0);
        let mut v = self.omega2;
        loop {
            if v.norm_sqr() < u.norm_sqr() {
                std::mem::swap(&mut u, &mut v);
            }
            let mu = ((u.conj() * v).re / u.norm_sqr()).round();
            if mu == 0.0 {
                break;
            }
            v -= u * mu;
            if v.norm_sqr() >= u.norm_sqr() {
                break;
            }
        }
        u.norm().min(v.norm())
    }

    /// Concentration at which neighbouring disks touch.
    pub fn touching_concentration(&self) -> f64 {
        let r = 0.5 * self.shortest_vector();
        PI * r * r
    }

    /// True when the lattice is closed under complex conjugation, which makes
    /// every lattice sum real.
    pub fn is_mirror_symmetric(&self) -> bool {
        !matches!(self.kind, LatticeKind::General(_))
    }

    /// True when the point group forces `S_m = 0` for this order. `S_2`
    /// is conditionally convergent and never forced.
    pub(crate) fn symmetry_forces_zero(&self, order: u32) -> bool {
        if order < 3 {
            return false;
        }
        match self.kind {
            LatticeKind::Square => !order.is_multiple_of(4),
            LatticeKind::Hexagonal => !order.is_multiple_of(6),
            _ => false,
        }
    }
}

/// Builds a lattice from a kind tag; `aspect` is required for rectangles.
pub fn make_lattice(kind: &str, aspect: Option<f64>) -> Result<Lattice> {
    match (kind, aspect) {
        ("square", None) => Ok(Lattice::square()),
        ("hex" | "hexagonal", None) => Ok(Lattice::hexagonal()),
        ("rect" | "rectangular", Some(a)) => Lattice::rectangular(a),
        ("rect" | "rectangular", None) => Err(Error::invalid("rectangular lattice needs an aspect")),
        ("square" | "hex" | "hexagonal", Some(_)) => {
            Err(Error::invalid(format!("{kind} lattice takes no aspect")))
        }
        _ => Err(Error::invalid(format!("unknown lattice kind '{kind}'"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_periods() {
        let l = make_lattice("square", None).unwrap();
        assert_eq!(l.omega1(), 1.0);
        assert_eq!(l.omega2(), Complex64::i());
        assert_eq!(l.area(), 1.0);
    }

    #[test]
    fn unit_rectangle_is_square() {
        assert_eq!(Lattice::rectangular(1.0).unwrap(), Lattice::square());
    }

    #[test]
    fn hexagonal_periods() {
        let l = Lattice::hexagonal();
        let w1 = (2.0 / 3f64.sqrt()).sqrt();
        assert!((l.omega1() - w1).abs() < 1e-15);
        let ratio = l.omega2() / l.omega1();
        assert!((ratio - Complex64::from_polar(1.0, PI / 3.0)).norm() < 1e-15);
        assert!((l.area() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rectangular_periods() {
        let l = Lattice::rectangular(2.0).unwrap();
        assert!((l.omega1() - 2f64.sqrt()).abs() < 1e-15);
        assert!((l.omega2().im - 1.0 / 2f64.sqrt()).abs() < 1e-15);
        assert!((l.area() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bad_aspect_rejected() {
        assert!(matches!(Lattice::rectangular(0.0), Err(Error::InvalidArgument(_))));
        assert!(matches!(Lattice::rectangular(-2.0), Err(Error::InvalidArgument(_))));
        assert!(make_lattice("rect", None).is_err());
        assert!(make_lattice("square", Some(2.0)).is_err());
        assert!(make_lattice("triangle", None).is_err());
    }

    #[test]
    fn general_lattice_normalized() {
        let l = Lattice::general(Complex64::new(0.3, 1.7)).unwrap();
        assert!((l.area() - 1.0).abs() < 1e-14);
        assert!(Lattice::general(Complex64::new(0.3, -1.0)).is_err());
    }

    #[test]
    fn touching_bounds() {
        assert!((Lattice::square().touching_concentration() - PI / 4.0).abs() < 1e-15);
        let hex = Lattice::hexagonal().touching_concentration();
        assert!((hex - PI / 12f64.sqrt()).abs() < 1e-14);
        // rectangle: the short side omega2 = i/2 sets the bound
        let r = Lattice::rectangular(4.0).unwrap().touching_concentration();
        assert!((r - PI / 16.0).abs() < 1e-15);
        // skewed basis of the hexagonal lattice reduces to the same bound
        let skew = Lattice::general(Complex64::new(1.5, 3f64.sqrt() / 2.0)).unwrap();
        assert!((skew.touching_concentration() - hex).abs() < 1e-12);
    }
}
