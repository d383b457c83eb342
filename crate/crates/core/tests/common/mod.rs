//! Shared oracles and generators for the integration suites. The series
//! expansion here is the independent check for the enumerative Hilbert
//! counts: it never touches the monomial enumeration path.

use kfree_core::weighted_algebra::{ExponentVector, WeightVector, WeightedForm};
use num_bigint::BigInt;
use rand::Rng;

/// Coefficients of `prod_i 1/(1 - x^{w_i})` up to `u_max`, by the standard
/// coin-counting dynamic program.
pub fn monomial_series(weights: &[u64], u_max: usize) -> Vec<u64> {
    let mut dp = vec![0u64; u_max + 1];
    dp[0] = 1;
    for &w in weights {
        let w = w as usize;
        for j in w..=u_max {
            dp[j] += dp[j - w];
        }
    }
    dp
}

/// Coefficients of `(1 - x^d) prod_i 1/(1 - x^{w_i})` up to `u_max`.
pub fn hilbert_series(weights: &[u64], d: u64, u_max: usize) -> Vec<u64> {
    let full = monomial_series(weights, u_max);
    (0..=u_max)
        .map(|u| {
            if (u as u64) >= d {
                full[u] - full[u - d as usize]
            } else {
                full[u]
            }
        })
        .collect()
}

/// A random well-formed weight vector with 2 to 4 coordinates, weights at
/// most 5.
pub fn random_well_formed_weights<R: Rng>(rng: &mut R) -> WeightVector {
    loop {
        let len = rng.gen_range(2..=4);
        let ws: Vec<u64> = (0..len).map(|_| rng.gen_range(1..=5)).collect();
        let w = WeightVector::new(ws).unwrap();
        if kfree_core::is_well_formed(&w) {
            return w;
        }
    }
}

/// A random nonzero weighted homogeneous form over `w` with the given
/// degree, at most `max_terms` terms and coefficients in `[-9, 9]`.
pub fn random_form<R: Rng>(
    rng: &mut R,
    w: &WeightVector,
    degree: u64,
    max_terms: usize,
) -> Option<WeightedForm> {
    let monomials = kfree_core::enumerate_monomials(w, degree);
    if monomials.is_empty() {
        return None;
    }
    let count = rng.gen_range(1..=max_terms.min(monomials.len()));
    let mut terms: Vec<(ExponentVector, BigInt)> = Vec::new();
    for _ in 0..count {
        let m = monomials[rng.gen_range(0..monomials.len())].clone();
        let mut c = 0i64;
        while c == 0 {
            c = rng.gen_range(-9..=9);
        }
        terms.push((m, BigInt::from(c)));
    }
    let form = WeightedForm::new(w.clone(), terms).unwrap();
    if form.is_zero() {
        None
    } else {
        Some(form)
    }
}

/// A random principal ideal of weighted degree at most `max_degree`.
pub fn random_ideal<R: Rng>(rng: &mut R, max_degree: u64) -> kfree_core::PrincipalIdeal {
    loop {
        let w = random_well_formed_weights(rng);
        let degree = rng.gen_range(1..=max_degree);
        if let Some(form) = random_form(rng, &w, degree, 6) {
            return kfree_core::PrincipalIdeal::new(form).unwrap();
        }
    }
}
