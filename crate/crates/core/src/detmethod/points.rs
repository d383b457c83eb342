//! Point enumeration on the surface, reduction to canonical residue
//! representatives, singularity and multiplicity of residue points, and
//! full orbit counts over small prime fields.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

use super::{big_mod_u64, LatticePoint, PrimeConstraint, ResiduePoint, SearchBox, SurfaceX};
use crate::error::{Error, Result};
use crate::factor::primes_below;
use crate::weighted_algebra::{mulmod, powmod, WeightedForm};

impl SurfaceX {
    /// All primitive points `(x, y, v, z)` with `1 <= x <= bx`,
    /// `1 <= y <= by`, `gcd(x, y) = 1`, `bz/2 < z <= bz` (prime when
    /// flagged), `0 < |v| <= bv`, `f(x, y) = v z^k`, and every congruence
    /// constraint satisfied. Scan order is row-by-row in `x`, so the output
    /// is deterministic.
    pub fn enumerate_points(
        &self,
        bounds: &SearchBox,
        z_prime_only: bool,
        constraints: &[PrimeConstraint],
    ) -> Vec<LatticePoint> {
        let z_candidates: Vec<u64> = if z_prime_only {
            primes_below(bounds.bz + 1)
                .into_iter()
                .filter(|&z| 2 * z > bounds.bz)
                .collect()
        } else {
            ((bounds.bz / 2 + 1)..=bounds.bz).collect()
        };
        if z_candidates.is_empty() {
            return Vec::new();
        }
        let rows: Vec<Vec<LatticePoint>> = (1..=bounds.bx)
            .into_par_iter()
            .map(|x| {
                let mut row = Vec::new();
                for y in 1..=bounds.by {
                    if x.gcd(&y) != 1 {
                        continue;
                    }
                    let value = self.f().evaluate(&BigInt::from(x), &BigInt::from(y));
                    if value.is_zero() {
                        continue;
                    }
                    for &z in &z_candidates {
                        let zk = BigInt::from(z).pow(self.k());
                        let (v, r) = value.div_rem(&zk);
                        if !r.is_zero() || v.is_zero() || v.abs() > bounds.bv {
                            continue;
                        }
                        let point = LatticePoint::new([
                            BigInt::from(x),
                            BigInt::from(y),
                            v,
                            BigInt::from(z),
                        ]);
                        debug_assert!(super::is_on_surface(self, &point));
                        let ok = constraints.iter().all(|c| {
                            self.reduce_point(&point, c.p)
                                .map(|r| r == c.point)
                                .unwrap_or(false)
                        });
                        if ok {
                            row.push(point);
                        }
                    }
                }
                row
            })
            .collect();
        rows.into_iter().flatten().collect()
    }

    /// Canonical residue representative modulo `p`: scale by the group
    /// action so the first nonzero weight-one coordinate becomes 1. Unique
    /// because the stabilizer of that normalization is trivial.
    pub fn reduce_point(&self, point: &LatticePoint, p: u64) -> Result<ResiduePoint> {
        let w2 = self.weights().weights()[2];
        let x = big_mod_u64(point.x(), p);
        let y = big_mod_u64(point.y(), p);
        let v = big_mod_u64(point.v(), p);
        let z = big_mod_u64(point.z(), p);
        let (pivot, rest_first) = if x != 0 {
            (x, y)
        } else if y != 0 {
            (y, x)
        } else {
            return Err(Error::Domain(format!(
                "both unit-weight coordinates vanish mod {p}; the point is not primitive"
            )));
        };
        let lambda = powmod(pivot, p - 2, p); // p prime, pivot a unit
        let scaled = |coord: u64, weight: u64| mulmod(coord, powmod(lambda, weight, p), p);
        let out = if x != 0 {
            [1, scaled(rest_first, 1), scaled(v, w2), scaled(z, 2)]
        } else {
            [0, 1, scaled(v, w2), scaled(z, 2)]
        };
        Ok(ResiduePoint(out))
    }

    /// Evaluate the defining form at a residue tuple.
    pub(crate) fn form_value_mod(&self, r: &ResiduePoint, p: u64) -> u64 {
        self.form().evaluate_mod(&r.0, p)
    }

    /// A residue point on the reduced surface is singular when all four
    /// weighted partials vanish there.
    pub fn is_singular_mod_p(&self, point: &ResiduePoint, p: u64) -> Result<bool> {
        if self.form_value_mod(point, p) != 0 {
            return Err(Error::NotOnSurface);
        }
        Ok(self
            .partials()
            .iter()
            .all(|g| g.evaluate_mod(&point.0, p) == 0))
    }

    /// Multiplicity of a residue point on the reduced surface: dehomogenize
    /// in a unit-weight chart where the point has coordinate 1, translate
    /// the point to the origin, and take the least total degree of a
    /// surviving term.
    pub fn multiplicity_mod_p(&self, point: &ResiduePoint, p: u64) -> Result<u32> {
        if self.form_value_mod(point, p) != 0 {
            return Err(Error::NotOnSurface);
        }
        let chart = if point.0[0] != 0 {
            0
        } else if point.0[1] != 0 {
            1
        } else {
            return Err(Error::Domain(
                "multiplicity chart needs a nonzero unit-weight coordinate".into(),
            ));
        };
        // With the chart coordinate pinned to 1 the remaining three
        // coordinates are affine; the canonical representative already has
        // the chart coordinate equal to 1.
        debug_assert_eq!(point.0[chart], 1);
        let rest: Vec<usize> = (0..4).filter(|&i| i != chart).collect();
        let center: Vec<u64> = rest.iter().map(|&i| point.0[i]).collect();
        let min_degree = shifted_min_degree(self.form(), &rest, &center, p);
        Ok(min_degree.expect("form is nonzero mod every prime"))
    }

    /// Multiplicity along an orbit with both unit-weight coordinates zero,
    /// measured on the affine cone at a representative.
    fn cone_multiplicity(&self, rep: &[u64; 4], p: u64) -> u32 {
        let mut terms: BTreeMap<[u16; 4], u64> = BTreeMap::new();
        let pascal = pascal_table(self.d() as usize + 1, p);
        for (e, c) in self.form().terms() {
            let cm = big_mod_u64(c, p);
            if cm == 0 {
                continue;
            }
            // expand prod (t_i + a_i)^{e_i}
            let mut partial: Vec<([u16; 4], u64)> = vec![([0u16; 4], cm)];
            for (i, &ei) in e.exponents().iter().enumerate() {
                if ei == 0 {
                    continue;
                }
                let a = rep[i];
                let mut next = Vec::with_capacity(partial.len() * (ei as usize + 1));
                for (exps, coef) in &partial {
                    for j in 0..=ei {
                        let bin = pascal[ei as usize][j as usize];
                        let apow = powmod(a, ei - j, p);
                        let c2 = mulmod(*coef, mulmod(bin, apow, p), p);
                        if c2 == 0 {
                            continue;
                        }
                        let mut e2 = *exps;
                        e2[i] += j as u16;
                        next.push((e2, c2));
                    }
                }
                partial = next;
            }
            for (exps, coef) in partial {
                let slot = terms.entry(exps).or_insert(0);
                *slot = (*slot + coef) % p;
            }
        }
        terms
            .into_iter()
            .filter(|&(_, c)| c != 0)
            .map(|(e, _)| e.iter().map(|&x| x as u32).sum())
            .min()
            .expect("form is nonzero mod every prime")
    }

    /// Orbit and multiplicity census of the reduced surface over the field
    /// with `p` elements.
    pub fn count_fp_points(&self, p: u64) -> Result<FpCount> {
        self.count_fp_points_capped(p, super::DEFAULT_FP_CAP)
    }

    pub fn count_fp_points_capped(&self, p: u64, cap: u64) -> Result<FpCount> {
        if p > cap {
            return Err(Error::WorkLimit(format!(
                "orbit enumeration at p = {p} exceeds the cap {cap}"
            )));
        }
        if !crate::factor::is_prime_u64(p) {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
        let w2 = self.weights().weights()[2];
        let mut orbits = 0u64;
        let mut n_p = 0u64;
        let mut affine = 0u64;
        // Chart x = 1: free orbits of size p - 1.
        for y in 0..p {
            for v in 0..p {
                for z in 0..p {
                    let r = ResiduePoint([1, y, v, z]);
                    if self.form_value_mod(&r, p) == 0 {
                        orbits += 1;
                        affine += p - 1;
                        n_p += self.multiplicity_mod_p(&r, p)? as u64;
                    }
                }
            }
        }
        // Chart x = 0, y = 1.
        for v in 0..p {
            for z in 0..p {
                let r = ResiduePoint([0, 1, v, z]);
                if self.form_value_mod(&r, p) == 0 {
                    orbits += 1;
                    affine += p - 1;
                    n_p += self.multiplicity_mod_p(&r, p)? as u64;
                }
            }
        }
        // Locus x = y = 0: orbits of (v, z) under v -> l^w2 v, z -> l^2 z.
        let mut seen = vec![false; (p * p) as usize];
        for v in 0..p {
            for z in 0..p {
                if v == 0 && z == 0 {
                    continue;
                }
                if seen[(v * p + z) as usize] {
                    continue;
                }
                // Mark the orbit and decide membership on the surface:
                // the form restricts to -v z^k there.
                let mut size = 0u64;
                let mut members = Vec::new();
                for l in 1..p {
                    let vv = mulmod(v, powmod(l, w2, p), p);
                    let zz = mulmod(z, powmod(l, 2, p), p);
                    let idx = (vv * p + zz) as usize;
                    if !seen[idx] {
                        seen[idx] = true;
                        size += 1;
                        members.push((vv, zz));
                    }
                }
                let on_surface = mulmod(v, powmod(z, self.k() as u64, p), p) == 0;
                if on_surface {
                    orbits += 1;
                    affine += size;
                    let rep = members
                        .iter()
                        .min()
                        .copied()
                        .expect("orbit has at least one member");
                    n_p += self.cone_multiplicity(&[0, 0, rep.0, rep.1], p) as u64;
                }
            }
        }
        Ok(FpCount {
            p,
            orbits,
            n_p,
            affine_nonzero: affine,
        })
    }
}

/// Census of one reduced surface: number of projective points (orbits),
/// the multiplicity-weighted count, and the number of nonzero affine
/// solutions they cover.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FpCount {
    pub p: u64,
    pub orbits: u64,
    pub n_p: u64,
    pub affine_nonzero: u64,
}

/// Minimal total degree of the chart polynomial after translating
/// `center` to the origin; `None` only if the form vanishes identically.
/// The chart coordinate itself is pinned to 1, so only the `rest`
/// coordinates enter the expansion.
fn shifted_min_degree(
    form: &WeightedForm,
    rest: &[usize],
    center: &[u64],
    p: u64,
) -> Option<u32> {
    let mut terms: BTreeMap<[u16; 3], u64> = BTreeMap::new();
    let max_e = form
        .terms()
        .map(|(e, _)| e.exponents().iter().max().copied().unwrap_or(0))
        .max()
        .unwrap_or(0) as usize;
    let pascal = pascal_table(max_e + 1, p);
    for (e, c) in form.terms() {
        let cm = big_mod_u64(c, p);
        if cm == 0 {
            continue;
        }
        let mut partial: Vec<([u16; 3], u64)> = vec![([0u16; 3], cm)];
        for (slot, &i) in rest.iter().enumerate() {
            let ei = e.exponents()[i];
            if ei == 0 {
                continue;
            }
            let a = center[slot];
            let mut next = Vec::with_capacity(partial.len() * (ei as usize + 1));
            for (exps, coef) in &partial {
                for j in 0..=ei {
                    let bin = pascal[ei as usize][j as usize];
                    let apow = powmod(a, ei - j, p);
                    let c2 = mulmod(*coef, mulmod(bin, apow, p), p);
                    if c2 == 0 {
                        continue;
                    }
                    let mut e2 = *exps;
                    e2[slot] += j as u16;
                    next.push((e2, c2));
                }
            }
            partial = next;
        }
        for (exps, coef) in partial {
            let slot = terms.entry(exps).or_insert(0);
            *slot = (*slot + coef) % p;
        }
    }
    terms
        .into_iter()
        .filter(|&(_, c)| c != 0)
        .map(|(e, _)| e.iter().map(|&x| x as u32).sum())
        .min()
}

fn pascal_table(rows: usize, p: u64) -> Vec<Vec<u64>> {
    let mut t = vec![vec![0u64; rows + 1]; rows + 1];
    for n in 0..=rows {
        t[n][0] = 1 % p;
        for k in 1..=n {
            let up = if k < n { t[n - 1][k] } else { 0 };
            t[n][k] = (t[n - 1][k - 1] + up) % p;
        }
    }
    t
}
