//! Guaranteed p-adic valuations of monomial-evaluation determinants. When
//! `s` points share one residue point, the determinant picks up `p^A(s)`
//! where `A(s)` sums the first `s` entries of the nondecreasing sequence
//! listing each `t >= 0` with the multiplicity of the degree-`t` piece of
//! the local ring; classes at distinct residue points contribute the sum of
//! their individual bounds.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{LatticePoint, ResiduePoint, SurfaceX};
use crate::error::{Error, Result};
use crate::linalg::{determinant, valuation};
use crate::weighted_algebra::{weighted_degree, ExponentVector};

/// `A(s) = n_1 + ... + n_s` where the sequence `(n_l)` lists each `t >= 0`
/// exactly `g(t)` times.
pub fn valuation_bound(s: u64, mut g: impl FnMut(u64) -> u64) -> u64 {
    let mut total = 0u64;
    let mut consumed = 0u64;
    let mut t = 0u64;
    while consumed < s {
        let copies = g(t).min(s - consumed);
        total += copies * t;
        consumed += copies;
        t += 1;
        assert!(
            t <= 2 * s + 2,
            "generator produced too few entries to reach s = {s}"
        );
    }
    total
}

/// The nonsingular surface case: `g(t) = t + 1`.
pub fn valuation_bound_surface(s: u64) -> u64 {
    valuation_bound(s, |t| t + 1)
}

/// Exact integer matrix of monomial evaluations: rows indexed by
/// monomials, columns by points.
#[derive(Debug, Clone)]
pub struct MonomialMatrix {
    monomials: Vec<ExponentVector>,
    points: Vec<LatticePoint>,
    entries: Vec<Vec<BigInt>>,
}

impl MonomialMatrix {
    pub fn monomials(&self) -> &[ExponentVector] {
        &self.monomials
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    /// Rows = monomials, columns = points.
    pub fn entries(&self) -> &[Vec<BigInt>] {
        &self.entries
    }

    pub fn is_square(&self) -> bool {
        self.monomials.len() == self.points.len()
    }

    /// Transposed view (rows = points), used for kernel extraction.
    pub fn rows_by_points(&self) -> Vec<Vec<BigInt>> {
        let (nm, np) = (self.monomials.len(), self.points.len());
        let mut out = vec![vec![BigInt::zero(); nm]; np];
        for (i, row) in self.entries.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                out[j][i] = v.clone();
            }
        }
        out
    }
}

impl SurfaceX {
    /// Evaluate each monomial at each point. All monomials must share one
    /// weighted degree.
    pub fn build_monomial_matrix(
        &self,
        points: &[LatticePoint],
        monomials: &[ExponentVector],
    ) -> Result<MonomialMatrix> {
        let mut degree = None;
        for m in monomials {
            let d = weighted_degree(m, self.weights())?;
            match degree {
                None => degree = Some(d),
                Some(d0) if d0 != d => {
                    return Err(Error::InvalidForm(format!(
                        "monomials of mixed weighted degrees {d0} and {d}"
                    )))
                }
                _ => {}
            }
        }
        let entries = monomials
            .iter()
            .map(|m| {
                points
                    .iter()
                    .map(|pt| {
                        let mut acc = BigInt::one();
                        for (c, &e) in pt.coords().iter().zip(m.exponents()) {
                            if e > 0 {
                                acc *= c.pow(e as u32);
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        Ok(MonomialMatrix {
            monomials: monomials.to_vec(),
            points: points.to_vec(),
            entries,
        })
    }
}

/// One residue class at a prime: its representative, how many of the
/// matrix points reduce to it, and whether it is nonsingular.
#[derive(Debug, Clone, Serialize)]
pub struct ResidueClass {
    pub point: ResiduePoint,
    pub count: u64,
    pub nonsingular: bool,
}

/// Outcome of a divisibility check at one prime.
#[derive(Debug, Clone, Serialize)]
pub struct ValuationRecord {
    pub p: u64,
    /// None when the determinant vanishes (unbounded valuation).
    pub valuation: Option<u64>,
    pub bound: u64,
    pub determinant_zero: bool,
    pub pass: bool,
}

/// Certify `v_p(det) >= sum of per-class bounds` for a square monomial
/// matrix whose points reduce to the given residue classes. Nonsingular
/// classes contribute the full bound `A(s_P)`; singular ones only the
/// column-difference bound `s_P - 1`.
pub fn verify_padic_divisibility(
    matrix: &MonomialMatrix,
    p: u64,
    classes: &[ResidueClass],
) -> Result<ValuationRecord> {
    if !matrix.is_square() {
        return Err(Error::NotSquare {
            rows: matrix.monomials().len(),
            cols: matrix.points().len(),
        });
    }
    let s: u64 = classes.iter().map(|c| c.count).sum();
    if s != matrix.points().len() as u64 {
        return Err(Error::Domain(format!(
            "residue classes cover {s} points but the matrix has {}",
            matrix.points().len()
        )));
    }
    let bound: u64 = classes
        .iter()
        .map(|c| {
            if c.nonsingular {
                valuation_bound_surface(c.count)
            } else {
                c.count.saturating_sub(1)
            }
        })
        .sum();
    let det = determinant(matrix.entries())?;
    if det.is_zero() {
        return Ok(ValuationRecord {
            p,
            valuation: None,
            bound,
            determinant_zero: true,
            pass: true,
        });
    }
    let v = valuation(&det, p);
    Ok(ValuationRecord {
        p,
        valuation: Some(v),
        bound,
        determinant_zero: false,
        pass: v >= bound,
    })
}
