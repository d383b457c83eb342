//! Prime generation and exact integer factorization at desk scale: a
//! segmentless sieve for small primes, deterministic Miller-Rabin below
//! 2^64, and Brent's variant of Pollard rho for the cofactors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::weighted_algebra::{mulmod, powmod};

/// Primes up to `limit`, ascending.
pub fn primes_below(limit: u64) -> Vec<u64> {
    if limit < 3 {
        return if limit > 2 { vec![2] } else { vec![] };
    }
    let n = limit as usize;
    let mut sieve = vec![true; n];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2usize;
    while i * i < n {
        if sieve[i] {
            let mut j = i * i;
            while j < n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(i, &b)| if b { Some(i as u64) } else { None })
        .collect()
}

const SMALL_PRIME_LIMIT: u64 = 100_000;

/// Shared table of primes below 100000, built once.
pub fn small_primes() -> &'static [u64] {
    static TABLE: OnceLock<Vec<u64>> = OnceLock::new();
    TABLE.get_or_init(|| primes_below(SMALL_PRIME_LIMIT))
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    // This base set decides primality for every n < 2^64.
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime(mut n: u64) -> u64 {
    loop {
        n += 1;
        if is_prime_u64(n) {
            return n;
        }
    }
}

fn pollard_brent(n: u64, seed: u64) -> Option<u64> {
    if n.is_even() {
        return Some(2);
    }
    let c = 1 + seed % (n - 1);
    let f = |x: u64| (mulmod(x, x, n) + c) % n;
    let mut x = seed % n;
    let (mut y, mut r, mut q) = (x, 1u64, 1u64);
    let mut g = 1u64;
    let mut ys = x;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0u64;
        while k < r && g == 1 {
            ys = y;
            let batch = 128.min(r - k);
            for _ in 0..batch {
                y = f(y);
                q = mulmod(q, x.abs_diff(y), n);
            }
            g = q.gcd(&n);
            k += batch;
        }
        r *= 2;
    }
    if g == n {
        loop {
            ys = f(ys);
            g = x.abs_diff(ys).gcd(&n);
            if g > 1 {
                break;
            }
        }
    }
    if g == n {
        None
    } else {
        Some(g)
    }
}

fn factor_u64_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        out.push(n);
        return;
    }
    let mut seed = 2u64;
    loop {
        if let Some(d) = pollard_brent(n, seed) {
            if d != 1 && d != n {
                factor_u64_into(d, out);
                factor_u64_into(n / d, out);
                return;
            }
        }
        seed += 1;
    }
}

/// Prime factorization of a positive 64-bit integer as ascending
/// `(prime, exponent)` pairs.
pub fn factorize_u64(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n > 0, "factorize_u64 needs a positive argument");
    let mut out: Vec<(u64, u32)> = Vec::new();
    for &p in small_primes().iter().take(1000) {
        if p * p > n {
            break;
        }
        if n % p == 0 {
            let mut e = 0u32;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
    }
    if n > 1 {
        let mut rest = Vec::new();
        factor_u64_into(n, &mut rest);
        rest.sort_unstable();
        let mut i = 0;
        while i < rest.len() {
            let p = rest[i];
            let mut e = 0u32;
            while i < rest.len() && rest[i] == p {
                e += 1;
                i += 1;
            }
            out.push((p, e));
        }
    }
    out.sort_unstable_by_key(|&(p, _)| p);
    out
}

/// Strong probable-prime test with fixed bases for big integers. Exact
/// below 2^64; above that the bases 2..41 are decisive for every integer
/// below 3.3e24, which covers every magnitude this crate produces.
pub fn is_prime_bigint(n: &BigInt) -> bool {
    if let Some(u) = n.to_u64() {
        return is_prime_u64(u);
    }
    if n.is_negative() || n.is_even() {
        return false;
    }
    let one = BigInt::one();
    let nm1 = n - &one;
    let mut d = nm1.clone();
    let mut s = 0u32;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'witness: for &a in &[2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let a = BigInt::from(a);
        let mut x = a.modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&BigInt::from(2u32), n);
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_brent_bigint(n: &BigInt, seed: u64) -> Option<BigInt> {
    let one = BigInt::one();
    let c = BigInt::from(seed);
    let f = |x: &BigInt| (x * x + &c).mod_floor(n);
    let mut x = BigInt::from(seed + 2);
    let (mut y, mut r) = (x.clone(), 1u64);
    let mut q = BigInt::one();
    let mut g = BigInt::one();
    let mut ys = x.clone();
    while g == one {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0u64;
        while k < r && g == one {
            ys = y.clone();
            let batch = 64.min(r - k);
            for _ in 0..batch {
                y = f(&y);
                q = (q * (&x - &y).abs()).mod_floor(n);
            }
            g = q.gcd(n);
            k += batch;
        }
        r *= 2;
        if r > 1 << 24 {
            return None;
        }
    }
    if &g == n {
        loop {
            ys = f(&ys);
            g = (&x - &ys).abs().gcd(n);
            if g > one {
                break;
            }
        }
    }
    if &g == n {
        None
    } else {
        Some(g)
    }
}

fn factor_bigint_into(n: BigInt, out: &mut Vec<BigInt>) -> Result<()> {
    if n.is_one() {
        return Ok(());
    }
    if let Some(u) = n.to_u64() {
        for (p, e) in factorize_u64(u) {
            for _ in 0..e {
                out.push(BigInt::from(p));
            }
        }
        return Ok(());
    }
    if is_prime_bigint(&n) {
        out.push(n);
        return Ok(());
    }
    // Perfect powers split for free and keep rho off the worst cases.
    for e in 2u32..=n.bits() as u32 {
        let root = n.nth_root(e);
        if root.pow(e) == n {
            for _ in 0..e {
                factor_bigint_into(root.clone(), out)?;
            }
            return Ok(());
        }
        if root < BigInt::from(2) {
            break;
        }
    }
    let mut seed = 1u64;
    loop {
        if let Some(d) = pollard_brent_bigint(&n, seed) {
            if !d.is_one() && d != n {
                factor_bigint_into(d.clone(), out)?;
                factor_bigint_into(n / d, out)?;
                return Ok(());
            }
        }
        seed += 1;
        if seed > 64 {
            return Err(Error::WorkLimit(format!(
                "failed to factor {n} within the rho budget"
            )));
        }
    }
}

/// Prime factorization of `|n|` for nonzero `n`, ascending.
pub fn factorize(n: &BigInt) -> Result<Vec<(BigInt, u32)>> {
    if n.is_zero() {
        return Err(Error::Domain("zero has no finite factorization".into()));
    }
    let mut n = n.abs();
    let mut flat = Vec::new();
    for &p in small_primes().iter().take(200) {
        let pb = BigInt::from(p);
        while (&n % &pb).is_zero() {
            n /= &pb;
            flat.push(pb.clone());
        }
        if n.is_one() {
            break;
        }
    }
    if !n.is_one() {
        factor_bigint_into(n, &mut flat)?;
    }
    flat.sort();
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    for p in flat {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    Ok(out)
}
