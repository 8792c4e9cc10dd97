//! Helpers shared by integration tests.

use std::collections::HashMap;

use kazhdan::backend::GroupBackend;
use kazhdan::catalog::{BuildOptions, Preset};
use kazhdan::with_group;
use nalgebra::{DMatrix, SymmetricEigen};

/// Smallest nonzero eigenvalue of `Δ` acting on `ℓ²(G)` by right
/// multiplication, from the full multiplication table.
pub fn regular_gap<B: GroupBackend>(g: &B) -> f64 {
    let gens: Vec<B::Elem> = (0..g.alphabet().len() as u16).map(|s| g.generator(s)).collect();
    let mut index: HashMap<B::Elem, usize> = HashMap::new();
    let mut elems = vec![g.identity()];
    index.insert(g.identity(), 0);
    let mut k = 0;
    while k < elems.len() {
        for s in &gens {
            let y = g.multiply(&elems[k], s);
            if !index.contains_key(&y) {
                index.insert(y.clone(), elems.len());
                elems.push(y);
            }
        }
        k += 1;
        assert!(elems.len() < 5000, "group too large for the oracle");
    }
    let n = elems.len();
    let mut lap = DMatrix::<f64>::zeros(n, n);
    for (i, x) in elems.iter().enumerate() {
        lap[(i, i)] += gens.len() as f64;
        for s in &gens {
            lap[(i, index[&g.multiply(x, s)])] -= 1.0;
        }
    }
    let mut ev: Vec<f64> = SymmetricEigen::new(lap).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    assert!(ev[0].abs() < 1e-9);
    ev.into_iter().find(|&v| v > 1e-9).unwrap()
}

/// The regular-representation gap of a finite preset.
pub fn oracle(name: &str) -> f64 {
    let built = Preset::parse(name).unwrap().build(BuildOptions::default()).unwrap();
    with_group!(&built.group, |g| regular_gap(g))
}
