//! Local root counting for binary forms and univariate polynomials, fixed
//! power divisor detection, and the truncated Euler products built from
//! them. All products are exact rationals; truncation is always reported.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factor::{factorize, factorize_u64, primes_below};
use crate::weighted_algebra::{BinaryForm, UnivariatePoly};

/// Residue classes may multiply out to at most this many scan slots per
/// lifting level before the computation refuses to continue.
const LIFT_WORK_LIMIT: u64 = 50_000_000;

/// A truncated Euler product with its exact value and an honest note about
/// what the truncation leaves out.
#[derive(Debug, Clone, Serialize)]
pub struct DensityResult {
    /// Exact value of the partial product over `p <= prime_bound`,
    /// rendered as "num/den".
    #[serde(serialize_with = "ser_rational")]
    pub partial_product: BigRational,
    pub prime_bound: u64,
    /// Always true: the full product is never claimed.
    pub truncated: bool,
    /// Empirical description of the omitted tail; not a rigorous bound.
    pub tail_note: String,
    pub float_value: f64,
}

fn ser_rational<S: serde::Serializer>(
    r: &BigRational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

/// Number of residues `t mod m` with `f(t) = 0 mod m`, where `f` is given
/// by coefficients already reduced into `[0, m)`. `m = p^e`. Scans all `p`
/// lifts of every root at each level, so it is exact with no smoothness
/// assumptions. `keep_divisible` restricts to roots `t = 0 mod p`.
fn count_roots_prime_power(
    coeffs: &[BigInt],
    p: u64,
    e: u32,
    keep_divisible: bool,
) -> Result<u64> {
    let pe = checked_prime_power(p, e)?;
    // Pull the p-content out of the coefficients first: if f = p^c g with
    // g nonzero mod p, roots of f mod p^e are the full fibers over roots of
    // g mod p^{e-c}.
    let pb = BigInt::from(p);
    let mut content = u32::MAX;
    for c in coeffs {
        if c.is_zero() {
            continue;
        }
        let mut v = 0u32;
        let mut cc = c.clone();
        while v < e && (&cc % &pb).is_zero() {
            cc /= &pb;
            v += 1;
        }
        content = content.min(v);
        if content == 0 {
            break;
        }
    }
    if content == u32::MAX || content >= e {
        // Zero polynomial mod p^e: every residue is a root.
        let total = pe;
        return Ok(if keep_divisible { total / p } else { total });
    }
    let reduced_e = e - content;
    let reduced_m = checked_prime_power(p, reduced_e)?;
    let rm = BigInt::from(reduced_m);
    let cmod: Vec<u64> = coeffs
        .iter()
        .map(|c| {
            let shifted = c / pb.pow(content);
            shifted
                .mod_floor(&rm)
                .to_u64()
                .expect("residue fits u64 by construction")
        })
        .collect();
    let eval = |t: u64, m: u64| -> u64 {
        let mut acc = 0u64;
        for c in cmod.iter().rev() {
            acc = ((acc as u128 * t as u128 + (c % m) as u128) % m as u128) as u64;
        }
        acc
    };
    // Level 1: scan all residues mod p.
    let mut roots: Vec<u64> = Vec::new();
    for t in 0..p {
        if keep_divisible && t != 0 {
            continue;
        }
        if eval(t, p) == 0 {
            roots.push(t);
        }
    }
    let mut modulus = p;
    for _ in 1..reduced_e {
        let work = roots.len() as u64 * p;
        if work > LIFT_WORK_LIMIT {
            return Err(Error::WorkLimit(format!(
                "residue lifting would scan {work} classes at modulus {modulus}*{p}"
            )));
        }
        let next_modulus = modulus * p;
        let mut next = Vec::new();
        for &r in &roots {
            for c in 0..p {
                let t = r + modulus * c;
                if eval(t, next_modulus) == 0 {
                    next.push(t);
                }
            }
        }
        roots = next;
        modulus = next_modulus;
    }
    // Each root mod p^{e-c} has p^c lifts.
    Ok(roots.len() as u64 * checked_prime_power(p, content)?)
}

fn checked_prime_power(p: u64, e: u32) -> Result<u64> {
    let mut acc: u64 = 1;
    for _ in 0..e {
        acc = acc
            .checked_mul(p)
            .ok_or_else(|| Error::Domain(format!("prime power {p}^{e} exceeds 64 bits")))?;
    }
    if acc > (1u64 << 62) {
        return Err(Error::Domain(format!(
            "prime power {p}^{e} is beyond the desk-scale residue scan"
        )));
    }
    Ok(acc)
}

/// Number of residues `i mod m` with `g(i) = 0 mod m`.
pub fn rho_univariate(g: &UnivariatePoly, m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::Domain("modulus must be positive".into()));
    }
    if m == 1 {
        return Ok(1);
    }
    let mut acc: u64 = 1;
    for (p, e) in factorize_u64(m) {
        let count = count_roots_prime_power(g.coefficients(), p, e, false)?;
        acc = acc
            .checked_mul(count)
            .ok_or_else(|| Error::Domain("root count overflow".into()))?;
    }
    Ok(acc)
}

fn rho_binary_prime_power(f: &BinaryForm, p: u64, e: u32) -> Result<u128> {
    if e == 0 {
        return Ok(1);
    }
    let pe = checked_prime_power(p, e)?;
    let d = f.degree() as u32;
    // Primitive pairs split by which of the two slots is a unit: for unit y
    // the count follows f(t,1); for y divisible by p and unit x it follows
    // f(1,s) restricted to s = 0 mod p. Non-primitive pairs (p | x and
    // p | y) rescale by p^degree and recurse.
    let units = (pe - pe / p) as u128;
    let fx = f.dehomogenize_x();
    let fy = f.dehomogenize_y();
    let a = count_roots_prime_power(fx.coefficients(), p, e, false)? as u128;
    let b = count_roots_prime_power(fy.coefficients(), p, e, true)? as u128;
    let nonprim: u128 = if e <= d {
        let side = checked_prime_power(p, e - 1)? as u128;
        side * side
    } else {
        let scale = checked_prime_power(p, d - 1)? as u128;
        scale * scale * rho_binary_prime_power(f, p, e - d)?
    };
    Ok(units * (a + b) + nonprim)
}

/// Number of pairs `(i, j)` in `[0, m)^2` with `F(i, j) = 0 mod m`.
pub fn rho_binary(f: &BinaryForm, m: u64) -> Result<u128> {
    if m == 0 {
        return Err(Error::Domain("modulus must be positive".into()));
    }
    if m == 1 {
        return Ok(1);
    }
    let mut acc: u128 = 1;
    for (p, e) in factorize_u64(m) {
        acc = acc
            .checked_mul(rho_binary_prime_power(f, p, e)?)
            .ok_or_else(|| Error::Domain("pair count overflow".into()))?;
    }
    Ok(acc)
}

/// Smallest prime `p` whose `k`-th power divides `F` everywhere, or `None`.
/// The gcd over the probe grid provably contains every fixed divisor; each
/// candidate from it is then certified by an exact residue count.
pub fn fixed_power_divisor(f: &BinaryForm, k: u32, probe: u64) -> Result<Option<u64>> {
    let d = f.degree();
    if k < 2 {
        return Err(Error::Domain("fixed divisor detection needs k >= 2".into()));
    }
    if probe < 2 * k as u64 * d {
        return Err(Error::Domain(format!(
            "probe grid {probe} is smaller than 2kD = {}",
            2 * k as u64 * d
        )));
    }
    let mut g = BigInt::zero();
    for x in 0..probe {
        for y in 0..probe {
            let v = f.evaluate(&BigInt::from(x), &BigInt::from(y));
            if !v.is_zero() {
                g = g.gcd(&v);
            }
            if g.is_one() {
                return Ok(None);
            }
        }
    }
    if g.is_zero() {
        return Err(Error::InvalidForm(
            "form vanishes on the whole probe grid".into(),
        ));
    }
    let mut candidates: Vec<u64> = Vec::new();
    for (p, e) in factorize(&g)? {
        if e >= k {
            let p = p
                .to_u64()
                .ok_or_else(|| Error::Domain("fixed divisor candidate exceeds 64 bits".into()))?;
            candidates.push(p);
        }
    }
    candidates.sort_unstable();
    for p in candidates {
        let pk = checked_prime_power(p, k)?;
        let expect = (pk as u128) * (pk as u128);
        if rho_binary(f, pk)? == expect {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

/// Default probe width for fixed divisor detection.
pub fn default_probe(k: u32, degree: u64) -> u64 {
    4 * k as u64 * degree
}

/// Exact partial product over primes `p <= prime_bound` of
/// `(1 - rho_F(p^k) / p^{2k})`.
pub fn density_binary(f: &BinaryForm, k: u32, prime_bound: u64) -> Result<DensityResult> {
    if prime_bound < 2 {
        return Err(Error::Domain("prime bound must be at least 2".into()));
    }
    if k < 2 {
        return Err(Error::Domain("density needs k >= 2".into()));
    }
    let mut product = BigRational::one();
    let mut tail_constant = 0f64;
    for &p in primes_below(prime_bound + 1).iter() {
        let pk = checked_prime_power(p, k)?;
        let rho = rho_binary(f, pk)?;
        let denom = BigInt::from(pk).pow(2);
        let factor = BigRational::one() - BigRational::new(BigInt::from(rho), denom);
        product *= factor;
        // observed rho / p^{2k-2}
        let scale = (p as f64).powi(2 * k as i32 - 2);
        tail_constant = tail_constant.max(rho as f64 / scale);
        if product.is_zero() {
            break;
        }
    }
    let float_value = product.to_f64().unwrap_or(f64::NAN);
    Ok(DensityResult {
        partial_product: product,
        prime_bound,
        truncated: true,
        tail_note: format!(
            "partial product over p <= {prime_bound}; omitted factors are of the shape \
             (1 - c/p^2) with observed c <= {tail_constant:.6} (empirical, not rigorous)"
        ),
        float_value,
    })
}

/// Exact partial product over primes `p <= prime_bound` of
/// `(1 - rho_g(p^k) / p^k)`.
pub fn density_univariate(g: &UnivariatePoly, k: u32, prime_bound: u64) -> Result<DensityResult> {
    if prime_bound < 2 {
        return Err(Error::Domain("prime bound must be at least 2".into()));
    }
    if k < 2 {
        return Err(Error::Domain("density needs k >= 2".into()));
    }
    let mut product = BigRational::one();
    let mut tail_constant = 0f64;
    for &p in primes_below(prime_bound + 1).iter() {
        let pk = checked_prime_power(p, k)?;
        let rho = rho_univariate(g, pk)?;
        let factor = BigRational::one() - BigRational::new(BigInt::from(rho), BigInt::from(pk));
        product *= factor;
        let scale = (p as f64).powi(k as i32 - 2);
        tail_constant = tail_constant.max(rho as f64 / scale);
        if product.is_zero() {
            break;
        }
    }
    let float_value = product.to_f64().unwrap_or(f64::NAN);
    Ok(DensityResult {
        partial_product: product,
        prime_bound,
        truncated: true,
        tail_note: format!(
            "partial product over p <= {prime_bound}; omitted factors are of the shape \
             (1 - c/p^2) with observed c <= {tail_constant:.6} (empirical, not rigorous)"
        ),
        float_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bf(coeffs: &[i64]) -> BinaryForm {
        BinaryForm::from_i64(coeffs).unwrap()
    }

    /// Brute-force oracle: scan the full residue square.
    fn rho_binary_brute(f: &BinaryForm, m: u64) -> u128 {
        let mut count = 0u128;
        for i in 0..m {
            for j in 0..m {
                let v = f.evaluate(&BigInt::from(i), &BigInt::from(j));
                if v.mod_floor(&BigInt::from(m)).is_zero() {
                    count += 1;
                }
            }
        }
        count
    }

    fn rho_univariate_brute(g: &UnivariatePoly, m: u64) -> u64 {
        (0..m)
            .filter(|&i| g.evaluate(&BigInt::from(i)).mod_floor(&BigInt::from(m)).is_zero())
            .count() as u64
    }

    #[test]
    fn rho_binary_examples() {
        let xy = bf(&[0, 1, 0]);
        assert_eq!(rho_binary(&xy, 1).unwrap(), 1);
        assert_eq!(rho_binary(&xy, 5).unwrap(), 9);
        assert_eq!(rho_binary(&xy, 5).unwrap(), rho_binary_brute(&xy, 5));
        assert!(rho_binary(&xy, 0).is_err());
    }

    #[test]
    fn rho_binary_matches_brute_force() {
        let forms = [
            bf(&[1, 0, 1]),          // x^2 + y^2
            bf(&[1, 0, 0, 2]),       // x^3 + 2y^3
            bf(&[1, -1, 2, 1]),      // mixed cubic
            bf(&[4, 0, 0, 0, 0, 0, 4]), // 4(x^6 + y^6)
            bf(&[0, 1, 1, 0]),       // x^2 y + x y^2
        ];
        for f in &forms {
            for m in [2u64, 3, 4, 5, 8, 9, 12, 16, 25, 27, 36] {
                assert_eq!(
                    rho_binary(f, m).unwrap(),
                    rho_binary_brute(f, m),
                    "form {f}, m = {m}"
                );
            }
        }
    }

    #[test]
    fn rho_univariate_examples() {
        let x = UnivariatePoly::from_i64(&[0, 1]);
        assert_eq!(rho_univariate(&x, 7).unwrap(), 1);
        assert_eq!(rho_univariate(&x, 1).unwrap(), 1);
        let g = UnivariatePoly::from_i64(&[-1, 0, 1]); // x^2 - 1
        assert_eq!(rho_univariate(&g, 8).unwrap(), 4);
        for m in [2u64, 3, 4, 6, 8, 9, 16, 24, 27, 49] {
            assert_eq!(
                rho_univariate(&g, m).unwrap(),
                rho_univariate_brute(&g, m),
                "m = {m}"
            );
        }
    }

    #[test]
    fn rho_multiplicative() {
        let f = bf(&[1, 2, 3]);
        assert_eq!(
            rho_binary(&f, 6).unwrap(),
            rho_binary(&f, 2).unwrap() * rho_binary(&f, 3).unwrap()
        );
        assert_eq!(
            rho_binary(&f, 36).unwrap(),
            rho_binary(&f, 4).unwrap() * rho_binary(&f, 9).unwrap()
        );
    }

    #[test]
    fn fixed_divisor_examples() {
        let f = bf(&[4, 0, 0, 0, 0, 0, 4]); // 4(x^6 + y^6)
        assert_eq!(fixed_power_divisor(&f, 2, default_probe(2, 6)).unwrap(), Some(2));
        let g = bf(&[1, 0, 1]);
        assert_eq!(fixed_power_divisor(&g, 2, default_probe(2, 2)).unwrap(), None);
        assert!(fixed_power_divisor(&g, 2, 3).is_err());
        // The Fermat-style form x^p y - x y^p has p as a fixed divisor but
        // only to the first power, so no k-th power divisor for k = 2.
        let h = bf(&[0, 1, 0, -1, 0]); // x^3 y - x y^3, fixed divisor 6
        assert_eq!(fixed_power_divisor(&h, 2, default_probe(2, 4)).unwrap(), None);
    }

    #[test]
    fn density_zero_with_fixed_divisor() {
        let f = bf(&[4, 0, 0, 0, 0, 0, 4]);
        let d = density_binary(&f, 2, 50).unwrap();
        assert!(d.partial_product.is_zero());
        assert!(d.truncated);
    }

    #[test]
    fn density_monotone_in_prime_bound() {
        let f = bf(&[1, 0, 0, 2]);
        let d1 = density_binary(&f, 2, 100).unwrap();
        let d2 = density_binary(&f, 2, 1000).unwrap();
        assert!(d1.partial_product >= d2.partial_product);
        assert!(d2.partial_product > BigRational::zero());
        assert!(d2.partial_product < BigRational::one());
    }

    #[test]
    fn density_univariate_zeta_trend() {
        // g = x: the factor at p is 1 - 1/p^2, approaching 6/pi^2.
        let g = UnivariatePoly::from_i64(&[0, 1]);
        let d = density_univariate(&g, 2, 10_000).unwrap();
        let target = 6.0 / std::f64::consts::PI.powi(2);
        assert!((d.float_value - target).abs() < 1e-4, "{}", d.float_value);
    }

    #[test]
    fn density_univariate_vanishes_iff_fixed_divisor() {
        // g = x(x+1)(x+2)... + adjusted: x^2 + x is always even, and with
        // k = 2 the factor at 2 needs rho(4) = 4; x^2 + x hits only 0,3 mod
        // 4 -> rho(4) = 2, nonzero factor. Use 4x^2 + 4x instead? Simpler:
        // g with every value divisible by 4: 4x^2.
        let g = UnivariatePoly::from_i64(&[0, 0, 4]);
        let d = density_univariate(&g, 2, 50).unwrap();
        assert!(d.partial_product.is_zero());
        let h = UnivariatePoly::from_i64(&[1, 0, 1]);
        let dh = density_univariate(&h, 2, 50).unwrap();
        assert!(!dh.partial_product.is_zero());
    }
}
