//! Direct power-free counting for binary forms: the plain count, the
//! three-term decomposition by the size of the offending prime, the count
//! of representable power-free values, and the capped local prime-power
//! product used in the representability argument.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::factor::{factorize, factorize_u64};
use crate::weighted_algebra::BinaryForm;

/// Counts from one decomposition run. `m1` counts pairs whose offending
/// primes (if any) all exceed the cutoff `xi`; `m2` the subset of those
/// with an offending prime in the middle window; `m3` pairs with an
/// offending prime beyond the large threshold `B^2 / log B`. The sandwich
/// `m1 - m2 - m3 <= n_kfree <= m1` is checked on every run.
#[derive(Debug, Clone, Serialize)]
pub struct SieveReport {
    pub big_b: u64,
    pub k: u32,
    pub n_kfree: u64,
    pub m1: u64,
    pub m2: u64,
    pub m3: u64,
    /// Small-prime cutoff, by default `log(B) / (2k)`.
    pub xi: f64,
    pub xi_note: String,
    pub sandwich_holds: bool,
}

/// True when no `k`-th prime power divides `n`. Zero is rejected: every
/// prime power divides it.
pub fn is_kfree(n: &BigInt, k: u32) -> Result<bool> {
    if n.is_zero() {
        return Err(Error::Domain(
            "zero is divisible by every prime power".into(),
        ));
    }
    if k < 1 {
        return Err(Error::Domain("k must be positive".into()));
    }
    if let Some(u) = n.abs().to_u64() {
        return Ok(is_kfree_u64(u, k));
    }
    Ok(factorize(n)?.into_iter().all(|(_, e)| e < k))
}

pub(crate) fn is_kfree_u64(n: u64, k: u32) -> bool {
    debug_assert!(n > 0);
    factorize_u64(n).into_iter().all(|(_, e)| e < k)
}

/// Number of pairs `(x, y)` in `[1, B]^2` where `F(x, y)` is nonzero and
/// `k`-free.
pub fn count_kfree(f: &BinaryForm, k: u32, big_b: u64) -> Result<u64> {
    if k < 2 {
        return Err(Error::Domain("counting needs k >= 2".into()));
    }
    let count = (1..=big_b)
        .into_par_iter()
        .map(|x| {
            let mut row = 0u64;
            for y in 1..=big_b {
                if let Some(v) = f.evaluate_i128(x as i128, y as i128) {
                    if v != 0 && is_kfree_u64_or_big(v, k) {
                        row += 1;
                    }
                } else {
                    let v = f.evaluate(&BigInt::from(x), &BigInt::from(y));
                    if !v.is_zero() && is_kfree(&v, k).expect("nonzero") {
                        row += 1;
                    }
                }
            }
            row
        })
        .sum();
    Ok(count)
}

fn is_kfree_u64_or_big(v: i128, k: u32) -> bool {
    let a = v.unsigned_abs();
    if let Ok(u) = u64::try_from(a) {
        is_kfree_u64(u, k)
    } else {
        is_kfree(&BigInt::from(v), k).expect("nonzero")
    }
}

/// Number of pairs with `|x|, |y| <= B` and `b^k` dividing `F(x, y)`,
/// counted exactly from the residue classes of `F mod b^k` and the exact
/// number of representatives of each class inside the box.
pub fn count_divisible(f: &BinaryForm, b: u64, k: u32, big_b: u64) -> Result<u128> {
    if b == 0 {
        return Err(Error::Domain("divisor must be positive".into()));
    }
    let side = 2 * big_b as u128 + 1;
    if b == 1 {
        return Ok(side * side);
    }
    let mut m: u64 = 1;
    for _ in 0..k {
        m = m
            .checked_mul(b)
            .ok_or_else(|| Error::Domain(format!("modulus {b}^{k} exceeds 64 bits")))?;
    }
    if m > 4096 {
        return Err(Error::Domain(format!(
            "modulus {m} is beyond the desk-scale residue enumeration"
        )));
    }
    // Number of x in [-B, B] with x = i (mod m), for i in [0, m):
    // nonnegative representatives i, i+m, ... and negative ones i-m, i-2m, ...
    let reps = |i: u64| -> u128 {
        let bb = big_b as u128;
        let mm = m as u128;
        let i = i as u128;
        let up = if bb >= i { (bb - i) / mm + 1 } else { 0 };
        let down = if bb + i >= mm { (bb + i - mm) / mm + 1 } else { 0 };
        up + down
    };
    let mb = BigInt::from(m);
    let mut total: u128 = 0;
    for i in 0..m {
        for j in 0..m {
            let v = f.evaluate(&BigInt::from(i), &BigInt::from(j));
            if v.mod_floor(&mb).is_zero() {
                total += reps(i) * reps(j);
            }
        }
    }
    Ok(total)
}

/// Classify each pair in `[1, B]^2` by the primes whose `k`-th power
/// divides the value, with the cutoff `xi` (default `log(B)/(2k)`)
/// overridable. Pairs where the form vanishes are excluded throughout.
pub fn m_decomposition(
    f: &BinaryForm,
    k: u32,
    big_b: u64,
    xi_override: Option<f64>,
) -> Result<SieveReport> {
    if big_b < 3 {
        return Err(Error::Domain("decomposition needs B >= 3".into()));
    }
    if k < 2 {
        return Err(Error::Domain("decomposition needs k >= 2".into()));
    }
    let logb = (big_b as f64).ln();
    let xi = xi_override.unwrap_or(logb / (2.0 * k as f64));
    let large = (big_b as f64).powi(2) / logb;

    #[derive(Default, Clone, Copy)]
    struct Buckets {
        m1: u64,
        m2: u64,
        m3: u64,
        n: u64,
    }

    let buckets = (1..=big_b)
        .into_par_iter()
        .map(|x| {
            let mut acc = Buckets::default();
            for y in 1..=big_b {
                let offending: Vec<f64> = match f.evaluate_i128(x as i128, y as i128) {
                    Some(0) => continue,
                    Some(v) => {
                        let a = v.unsigned_abs();
                        if let Ok(u) = u64::try_from(a) {
                            factorize_u64(u)
                                .into_iter()
                                .filter(|&(_, e)| e >= k)
                                .map(|(p, _)| p as f64)
                                .collect()
                        } else {
                            big_offenders(&BigInt::from(v), k)
                        }
                    }
                    None => {
                        let v = f.evaluate(&BigInt::from(x), &BigInt::from(y));
                        if v.is_zero() {
                            continue;
                        }
                        big_offenders(&v, k)
                    }
                };
                let has_small = offending.iter().any(|&p| p <= xi);
                let has_mid = offending.iter().any(|&p| p > xi && p <= large);
                let has_large = offending.iter().any(|&p| p > large);
                if !has_small {
                    acc.m1 += 1;
                    if has_mid {
                        acc.m2 += 1;
                    }
                }
                if has_large {
                    acc.m3 += 1;
                }
                if offending.is_empty() {
                    acc.n += 1;
                }
            }
            acc
        })
        .reduce(Buckets::default, |a, b| Buckets {
            m1: a.m1 + b.m1,
            m2: a.m2 + b.m2,
            m3: a.m3 + b.m3,
            n: a.n + b.n,
        });

    let sandwich = buckets.m1 as i128 - buckets.m2 as i128 - buckets.m3 as i128
        <= buckets.n as i128
        && buckets.n <= buckets.m1;
    Ok(SieveReport {
        big_b,
        k,
        n_kfree: buckets.n,
        m1: buckets.m1,
        m2: buckets.m2,
        m3: buckets.m3,
        xi,
        xi_note: if xi_override.is_some() {
            format!("xi overridden to {xi}")
        } else {
            format!("xi = log(B)/(2k) = {xi}")
        },
        sandwich_holds: sandwich,
    })
}

fn big_offenders(v: &BigInt, k: u32) -> Vec<f64> {
    factorize(v)
        .expect("nonzero")
        .into_iter()
        .filter(|&(_, e)| e >= k)
        .map(|(p, _)| p.to_f64().unwrap_or(f64::INFINITY))
        .collect()
}

/// Lower bound for the number of `k`-free integers `t` with `|t| <= B`
/// representable as `F(x, y)` with `|x|, |y| <= xy_cap`. Deduplicated in
/// `t`; a lower bound because the preimage search is capped.
pub fn count_representable(f: &BinaryForm, k: u32, big_b: u64, xy_cap: u64) -> Result<u64> {
    if k < 2 {
        return Err(Error::Domain("representability needs k >= 2".into()));
    }
    let bound = BigInt::from(big_b);
    let cap = xy_cap as i64;
    let mut seen: BTreeSet<BigInt> = BTreeSet::new();
    for x in -cap..=cap {
        for y in -cap..=cap {
            let t = f.evaluate(&BigInt::from(x), &BigInt::from(y));
            if t.is_zero() || t.abs() > bound {
                continue;
            }
            if seen.contains(&t) {
                continue;
            }
            if is_kfree(&t, k)? {
                seen.insert(t);
            }
        }
    }
    Ok(seen.len() as u64)
}

/// Product of the prime-power parts `p^{v_p(h)}` of `h` over primes
/// `p <= B^theta` not dividing `disc`, keeping only parts that are
/// themselves at most `B^theta`. The threshold comparisons are exact:
/// `x <= B^(num/den)` is decided as `x^den <= B^num`.
pub fn local_product(
    h: &BigInt,
    theta_num: u32,
    theta_den: u32,
    big_b: u64,
    disc: &BigInt,
) -> Result<BigInt> {
    if h.is_zero() {
        return Err(Error::Domain("local product of zero is undefined".into()));
    }
    if big_b < 2 {
        return Err(Error::Domain("needs B >= 2".into()));
    }
    if theta_num == 0 || theta_den == 0 || theta_num > theta_den {
        return Err(Error::Domain("theta must lie in (0, 1]".into()));
    }
    let b_num = BigInt::from(big_b).pow(theta_num);
    let below_threshold =
        |x: &BigInt| -> bool { x.pow(theta_den) <= b_num };
    let mut acc = BigInt::from(1);
    for (p, e) in factorize(h)? {
        if !below_threshold(&p) {
            continue;
        }
        if (disc % &p).is_zero() && !disc.is_zero() {
            continue;
        }
        let part = p.pow(e);
        if below_threshold(&part) {
            acc *= part;
        }
    }
    Ok(acc)
}
