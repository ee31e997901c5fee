//! Exact integer binomial coefficients.
//!
//! The coupling factors of the Rayleigh system and the chain weights of the
//! concentration series are factorial ratios that overflow 64-bit integers
//! long before the orders used in practice, so they are formed exactly with
//! arbitrary-precision integers and rounded to `f64` once.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

/// `n! / (k! (n - k)!)` computed exactly, then rounded to the nearest `f64`.
pub fn binomial(n: u32, k: u32) -> f64 {
    assert!(k <= n, "binomial({n}, {k}) with k > n");
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc.to_f64().expect("binomial coefficient exceeds f64 range")
}
