#![allow(dead_code)]

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::PathBuf;

use effcond::{parse_fixture, Lattice, LatticeSumTable, SumEstimate};
use num_complex::Complex64;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

/// Reference sums for `lattice_sums_<name>.txt`, indexed by order.
pub fn reference_sums(name: &str) -> Vec<(u32, SumEstimate)> {
    let path = fixture_path(&format!("lattice_sums_{name}.txt"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_fixture(&text).unwrap()
}

pub fn table(lattice: &Lattice, max_order: u32) -> LatticeSumTable {
    effcond::build_sum_table(lattice, max_order, 1e-13).unwrap()
}

/// The hexagonal ϱ = 1 coefficients of `f^0 ..= f^26` as published.
pub const PRINTED_HEXAGONAL: [f64; 27] = [
    1.0,
    2.0,
    2.0,
    2.0,
    2.0,
    2.0,
    2.0,
    2.1508443464271876,
    2.301688692854377,
    2.452533039281566,
    2.6033773857087543,
    2.754221732135944,
    2.9050660785631326,
    3.0674404324522926,
    3.2411917947659736,
    3.426320165504177,
    3.6228255446669055,
    3.8307079322541555,
    4.049967328265928,
    4.441422739726373,
    4.845994396051242,
    5.264540375940583,
    5.69791875809444,
    6.146987621212864,
    6.6126050439959,
    7.135044602470776,
    7.700073986554016,
];

/// Published contrast coefficients `(j, k, c_{j,k})` beyond the
/// Clausius-Mossotti part, hexagonal array.
pub const PRINTED_CONTRAST: [(usize, usize, f64); 5] = [
    (7, 3, 0.150844),
    (8, 4, 0.301688),
    (9, 5, 0.452532),
    (10, 6, 0.603376),
    (11, 7, 0.75422),
];

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

fn weight(sums: &LatticeSumTable, from: u32, to: u32) -> Complex64 {
    let b = factorial(2 * from + 2 * to - 3) / (factorial(2 * from - 1) * factorial(2 * to - 2));
    sums.get(2 * (from + to - 1)).unwrap() * b
}

/// Walks every chain inside the exponent budget and adds its monomial.
pub fn enumerate_chains(sums: &LatticeSumTable, n: usize) -> BTreeMap<(usize, usize), Complex64> {
    fn extend(
        sums: &LatticeSumTable,
        budget: usize,
        chain: &mut Vec<u32>,
        e: usize,
        product: Complex64,
        out: &mut BTreeMap<(usize, usize), Complex64>,
    ) {
        let last = *chain.last().unwrap();
        let term = product * weight(sums, last, 1) * (2.0 / PI.powi(e as i32 + 1));
        *out.entry((2 + e, chain.len() + 2)).or_default() += term;
        let mut next = 1;
        while e + 2 * next as usize - 1 <= budget {
            chain.push(next);
            extend(sums, budget, chain, e + 2 * next as usize - 1, product * weight(sums, last, next), out);
            chain.pop();
            next += 1;
        }
    }

    let mut out = BTreeMap::new();
    out.insert((0, 0), Complex64::new(1.0, 0.0));
    out.insert((1, 1), Complex64::new(2.0, 0.0));
    out.insert((2, 2), sums.get(2).unwrap() * (2.0 / PI));
    out.retain(|&(j, _), _| j <= n);
    if n < 3 {
        return out;
    }
    let budget = n - 2;
    let mut first = 1u32;
    while 2 * first as usize - 1 <= budget {
        let mut chain = vec![first];
        extend(sums, budget, &mut chain, 2 * first as usize - 1, weight(sums, 1, first), &mut out);
        first += 1;
    }
    out
}
