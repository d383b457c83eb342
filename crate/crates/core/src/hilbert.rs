//! Hilbert functions of principal weighted homogeneous ideals, the
//! per-coordinate exponent sums over the surviving monomials, and the exact
//! limit coefficients they converge to.
//!
//! Everything here depends on the generator only through its leading
//! monomial: a degree-`u` monomial survives exactly when that leading
//! monomial does not divide it, so counts and exponent sums reduce to
//! lattice-point enumeration, which stays exact.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::weighted_algebra::{for_each_monomial, ExponentVector, WeightVector, WeightedForm};

/// A principal ideal generated by one weighted homogeneous form, normalized
/// to a primitive generator, with the leading monomial cached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrincipalIdeal {
    generator: WeightedForm,
    leading: ExponentVector,
    degree: u64,
}

impl PrincipalIdeal {
    pub fn new(generator: WeightedForm) -> Result<Self> {
        if generator.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let generator = generator.primitive_part();
        let leading = generator.leading_term()?.0.clone();
        let degree = generator.degree().expect("nonzero form has a degree");
        Ok(PrincipalIdeal {
            generator,
            leading,
            degree,
        })
    }

    pub fn generator(&self) -> &WeightedForm {
        &self.generator
    }

    pub fn weights(&self) -> &WeightVector {
        self.generator.weights()
    }

    pub fn leading_monomial(&self) -> &ExponentVector {
        &self.leading
    }

    /// Weighted degree of the generator.
    pub fn degree(&self) -> u64 {
        self.degree
    }

    /// Number of degree-`u` monomials outside the leading-term ideal. For a
    /// principal ideal this also equals `R(u) - R(u - d)` with `R` the raw
    /// monomial count, and the `u`-th coefficient of
    /// `(1 - x^d) / prod (1 - x^{w_i})`.
    pub fn hilbert_function(&self, u: u64) -> u64 {
        let mut count = 0u64;
        let lead = &self.leading.0;
        for_each_monomial(self.weights(), u, |e| {
            if !divides(lead, e) {
                count += 1;
            }
        });
        count
    }

    /// Sum of the `m`-th exponents over the degree-`u` monomials outside the
    /// leading-term ideal.
    pub fn sigma(&self, m: usize, u: u64) -> Result<u64> {
        if m >= self.weights().len() {
            return Err(Error::IndexOutOfRange {
                index: m,
                len: self.weights().len(),
            });
        }
        let lead = &self.leading.0;
        let mut acc = 0u64;
        for_each_monomial(self.weights(), u, |e| {
            if !divides(lead, e) {
                acc += e[m];
            }
        });
        Ok(acc)
    }

    /// Exact limit ratio of `sigma(m, u)` against `u * H(u)`:
    /// `(d - w_m a_m) / ((r+1) w_m d)` where `a` is the leading monomial.
    pub fn a_coefficient(&self, m: usize) -> Result<BigRational> {
        let w = self.weights();
        if m >= w.len() {
            return Err(Error::IndexOutOfRange {
                index: m,
                len: w.len(),
            });
        }
        let r1 = (w.dim() + 1) as u64;
        let wm = w.weights()[m];
        let am = self.leading.0[m];
        let num = BigInt::from(self.degree) - BigInt::from(wm * am);
        let den = BigInt::from(r1 * wm * self.degree);
        Ok(BigRational::new(num, den))
    }
}

fn divides(lead: &[u64], e: &[u64]) -> bool {
    lead.iter().zip(e).all(|(a, b)| a <= b)
}

/// One row of the Hilbert profile table emitted by the command line.
#[derive(Debug, Clone, Serialize)]
pub struct HilbertRow {
    pub u: u64,
    pub hilbert: u64,
    pub sigma: Vec<u64>,
    pub ratio: Vec<Option<f64>>,
    pub target: Vec<f64>,
}

/// Tabulate `u, H(u), sigma_m(u), sigma_m(u)/(u H(u))` with the limit
/// coefficients, for `u = 0..=u_max`.
pub fn profile(ideal: &PrincipalIdeal, u_max: u64) -> Result<Vec<HilbertRow>> {
    let n = ideal.weights().len();
    let targets: Vec<f64> = (0..n)
        .map(|m| {
            let a = ideal.a_coefficient(m)?;
            Ok(rational_to_f64(&a))
        })
        .collect::<Result<_>>()?;
    let mut rows = Vec::with_capacity(u_max as usize + 1);
    for u in 0..=u_max {
        let h = ideal.hilbert_function(u);
        let sigma: Vec<u64> = (0..n).map(|m| ideal.sigma(m, u)).collect::<Result<_>>()?;
        let ratio = sigma
            .iter()
            .map(|&s| {
                if u == 0 || h == 0 {
                    None
                } else {
                    Some(s as f64 / (u as f64 * h as f64))
                }
            })
            .collect();
        rows.push(HilbertRow {
            u,
            hilbert: h,
            sigma,
            ratio,
            target: targets.clone(),
        });
    }
    Ok(rows)
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}
