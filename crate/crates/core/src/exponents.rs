//! Closed-form exponent calculus for the two surface settings and the
//! admissibility thresholds. Strict comparisons against 1 are decided in
//! exact rational arithmetic by squaring, so no grid point ever depends on
//! floating-point rounding.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::weighted_algebra::WeightVector;

/// The pair `(d, k)` with its ratio `k/d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Regime {
    pub d: u64,
    pub k: u64,
}

impl Regime {
    pub fn new(d: u64, k: u64) -> Result<Self> {
        if d < 2 || k < 2 {
            return Err(Error::Regime("need d >= 2 and k >= 2".into()));
        }
        Ok(Regime { d, k })
    }

    pub fn lambda(&self) -> BigRational {
        BigRational::new(BigInt::from(self.k), BigInt::from(self.d))
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn check_surface_regime(d: u64, k: u64) -> Result<()> {
    if k == 0 || d <= 2 * k {
        return Err(Error::Regime(format!(
            "need d - 2k >= 1, got d = {d}, k = {k}"
        )));
    }
    Ok(())
}

/// Rational prefix `c` and radicand `q` with `psi = c * sqrt(q)`:
/// `c = (1 + (d - k b)/(d - 2k) + b/2) / 2` and `q = 2(d - 2k)/d`.
fn psi_parts(d: u64, k: u64, beta: &BigRational) -> Result<(BigRational, BigRational)> {
    check_surface_regime(d, k)?;
    let db = BigRational::from(BigInt::from(d));
    let kb = BigRational::from(BigInt::from(k));
    let w2 = BigRational::from(BigInt::from(d - 2 * k));
    let c = (BigRational::one() + (&db - &kb * beta) / &w2 + beta / rat(2, 1)) / rat(2, 1);
    let q = rat(2, 1) * &w2 / &db;
    Ok((c, q))
}

/// The box-shape exponent
/// `psi = (1/2)(1 + (d - k b)/(d - 2k) + b/2) sqrt(2(d - 2k)/d)`.
pub fn psi(d: u64, k: u64, beta: &BigRational) -> Result<f64> {
    let (c, q) = psi_parts(d, k, beta)?;
    let cf = c.to_f64().ok_or_else(|| Error::Domain("psi prefix overflow".into()))?;
    let qf = q.to_f64().ok_or_else(|| Error::Domain("psi radicand overflow".into()))?;
    Ok(cf * qf.sqrt())
}

/// Exact value of `psi^2` when the rational prefix is nonnegative.
pub fn psi_squared(d: u64, k: u64, beta: &BigRational) -> Result<BigRational> {
    let (c, q) = psi_parts(d, k, beta)?;
    Ok(&c * &c * q)
}

/// Exact comparison of `psi` against 1. Decided by sign and squaring, so
/// boundary cases are certified without floating point.
pub fn psi_cmp_one(d: u64, k: u64, beta: &BigRational) -> Result<Ordering> {
    let (c, q) = psi_parts(d, k, beta)?;
    if c.is_negative() || c.is_zero() {
        return Ok(Ordering::Less);
    }
    Ok((&c * &c * q).cmp(&BigRational::one()))
}

/// The curve-stage exponent `((2 + b) l + 2 a_z (2 - b)) / l^2`.
pub fn big_psi(l: u64, beta: &BigRational, alpha_z: u64) -> Result<BigRational> {
    if l < 1 {
        return Err(Error::Domain("curve degree must be positive".into()));
    }
    if 2 * alpha_z > l {
        return Err(Error::Domain(format!(
            "need 2 alpha_z <= l, got alpha_z = {alpha_z}, l = {l}"
        )));
    }
    let lb = BigRational::from(BigInt::from(l));
    let az = BigRational::from(BigInt::from(2 * alpha_z));
    let num = (rat(2, 1) + beta) * &lb + az * (rat(2, 1) - beta);
    Ok(num / (&lb * &lb))
}

/// Least admissible k for a binary form of largest irreducible factor
/// degree `d`: the smallest integer `k >= 2` strictly exceeding
/// `min(7d/18, ceil(d/2) - 2)`.
pub fn threshold_binary(d: u64) -> u64 {
    assert!(d >= 2, "threshold needs d >= 2");
    let branch_a = rat(7 * d as i64, 18);
    let ceil_half = d.div_ceil(2);
    let branch_b = rat(ceil_half as i64 - 2, 1);
    let min = branch_a.min(branch_b);
    // least integer strictly above min
    let k = (min.floor().to_integer().to_i64().unwrap() + 1).max(2);
    k as u64
}

/// Least admissible k for an irreducible univariate polynomial of degree
/// `d`: `ceil((3d + 1)/4)`.
pub fn threshold_univariate(d: u64) -> Result<u64> {
    if d < 3 {
        return Err(Error::Domain("univariate threshold needs d >= 3".into()));
    }
    Ok((3 * d + 1).div_ceil(4))
}

/// The exact limit coefficients for the surface `f(x,y) = v z^k`:
/// `(1/3, 1/3, 2k/(3d(d-2k)), (d-2k)/(6d))`.
pub fn a_coeffs_surface(d: u64, k: u64) -> Result<[BigRational; 4]> {
    check_surface_regime(d, k)?;
    let third = rat(1, 3);
    let av = BigRational::new(
        BigInt::from(2 * k),
        BigInt::from(3 * d * (d - 2 * k)),
    );
    let az = BigRational::new(BigInt::from(d - 2 * k), BigInt::from(6 * d));
    Ok([third.clone(), third, av, az])
}

/// Weight vector `(1, 1, d-k, 1)` for the univariate surface.
pub fn univariate_weights(d: u64, k: u64) -> Result<WeightVector> {
    if d <= k {
        return Err(Error::Regime(format!(
            "need d - k >= 1, got d = {d}, k = {k}"
        )));
    }
    WeightVector::new(vec![1, 1, d - k, 1])
}

/// Lower end of the admissible dyadic exponent range,
/// `2 - log log B / log B`.
pub fn beta_lower(big_b: u64) -> f64 {
    let l = (big_b as f64).ln();
    2.0 - l.ln() / l
}

/// Upper end of the admissible dyadic exponent range,
/// `d/k + log(d * height) / log B`.
pub fn beta_upper(big_b: u64, d: u64, k: u64, height: &BigInt) -> f64 {
    let l = (big_b as f64).ln();
    let h = height.to_f64().unwrap_or(f64::MAX);
    d as f64 / k as f64 + (d as f64 * h).ln() / l
}
