mod common;

use common::table;
use effcond::*;

fn solve(lattice: &Lattice, sums: &LatticeSumTable, f: f64, rho: f64, order: usize) -> EffectiveTensor {
    let params = CompositeParams::new(lattice, f, rho).unwrap();
    solve_tensor(sums, &params, order, SolveMethod::Direct).unwrap().tensor
}

#[test]
fn truncation_study_settles_near_touching() {
    let hex = Lattice::hexagonal();
    let sums = table(&hex, 34);
    let params = CompositeParams::new(&hex, 0.8, 1.0).unwrap();
    let values: Vec<f64> = convergence_study(&sums, &params, &[2, 4, 8, 16])
        .unwrap()
        .into_iter()
        .map(|e| e.result.unwrap().tensor.sigma11)
        .collect();
    let steps: Vec<f64> = values.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    assert!(steps.windows(2).all(|s| s[1] < s[0]), "{values:?}");
    assert!(steps[2] < 5e-3, "{values:?}");
    assert!(values.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn solver_matches_series_at_moderate_concentration() {
    let hex = Lattice::hexagonal();
    let sums = table(&hex, 26);
    let poly = expand_effective_series(&sums, 26).unwrap();
    for rho in [1.0, 0.5, -0.7] {
        let series = poly.evaluate(rho, 0.5).re;
        for order in [4, 6, 10] {
            let t = solve(&hex, &sums, 0.5, rho, order);
            assert!((t.sigma11 - series).abs() < 1e-4, "rho {rho} L {order}: {} vs {series}", t.sigma11);
        }
    }
}

#[test]
fn square_array_obeys_reciprocity() {
    // for an isotropic two-phase array σ*(ϱ) σ*(−ϱ) = 1
    let square = Lattice::square();
    let sums = table(&square, 26);
    for f in [0.1, 0.4, 0.7] {
        for rho in [0.3, 0.9] {
            let a = solve(&square, &sums, f, rho, 12).sigma11;
            let b = solve(&square, &sums, f, -rho, 12).sigma11;
            assert!((a * b - 1.0).abs() < 1e-8, "f {f} rho {rho}: {}", a * b);
        }
    }
}

#[test]
fn rectangular_array_is_orthotropic() {
    let rect = Lattice::rectangular(2.0).unwrap();
    let sums = table(&rect, 26);
    let t = solve(&rect, &sums, 0.3, 1.0, 12);
    assert!(t.sigma12.abs() < 1e-14);
    assert!((t.sigma11 - t.sigma22).abs() > 1e-2, "{t:?}");

    let tall = Lattice::rectangular(0.5).unwrap();
    let swapped = solve(&tall, &table(&tall, 26), 0.3, 1.0, 12);
    assert!((t.sigma11 - swapped.sigma22).abs() < 1e-10);
    assert!((t.sigma22 - swapped.sigma11).abs() < 1e-10);
}

#[test]
fn direct_and_iterative_agree_for_weak_contrast() {
    let hex = Lattice::hexagonal();
    let sums = table(&hex, 26);
    let params = CompositeParams::new(&hex, 0.6, 0.4).unwrap();
    let a = solve_tensor(&sums, &params, 12, SolveMethod::Direct).unwrap();
    let b = solve_tensor(&sums, &params, 12, SolveMethod::Iterative { max_iter: 500, tol: 1e-14 }).unwrap();
    assert!((a.tensor.sigma11 - b.tensor.sigma11).abs() < 1e-12);
    assert!(a.residual < 1e-12 && b.residual < 1e-12);
}
