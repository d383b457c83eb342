//! Exact integer linear algebra: fraction-free determinants and integer
//! kernel vectors for the monomial-evaluation matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Fraction-free (Bareiss) determinant. Consumes the matrix.
pub fn determinant_bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    debug_assert!(m.iter().all(|r| r.len() == n));
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n {
        // Pivot search: first nonzero entry in column k at or below row k.
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = t / &prev; // exact by the Bareiss identity
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Determinant of a square matrix given by rows.
pub fn determinant(rows: &[Vec<BigInt>]) -> Result<BigInt> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::NotSquare {
            rows: n,
            cols: rows.first().map(|r| r.len()).unwrap_or(0),
        });
    }
    Ok(determinant_bareiss(rows.to_vec()))
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(n: &BigInt, p: u64) -> u64 {
    assert!(!n.is_zero(), "valuation of zero is unbounded");
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0u64;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        v += 1;
        n = q;
    }
}

/// An integer vector in the kernel of the matrix (rows x cols, cols >
/// rank), taken from the first column where Gaussian elimination fails to
/// find a new pivot. The vector is primitive with its first nonzero entry
/// positive, so the choice is deterministic.
pub fn kernel_vector(rows: &[Vec<BigInt>]) -> Option<Vec<BigInt>> {
    let nrows = rows.len();
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    if ncols == 0 {
        return None;
    }
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|c| BigRational::from(c.clone())).collect())
        .collect();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut row = 0usize;
    let mut free_col = None;
    for col in 0..ncols {
        let pivot = (row..nrows).find(|&i| !m[i][col].is_zero());
        match pivot {
            Some(i) => {
                m.swap(row, i);
                let inv = m[row][col].recip();
                for j in col..ncols {
                    let scaled = &m[row][j] * &inv;
                    m[row][j] = scaled;
                }
                for i in 0..nrows {
                    if i != row && !m[i][col].is_zero() {
                        let factor = m[i][col].clone();
                        for j in col..ncols {
                            let t = &m[i][j] - &factor * &m[row][j];
                            m[i][j] = t;
                        }
                    }
                }
                pivot_cols.push(col);
                row += 1;
            }
            None => {
                free_col = Some(col);
                break;
            }
        }
    }
    let free = free_col?;
    // Solution with x_free = 1 and the pivot variables back-substituted.
    let mut sol = vec![BigRational::zero(); ncols];
    sol[free] = BigRational::one();
    for (r, &pc) in pivot_cols.iter().enumerate() {
        sol[pc] = -m[r][free].clone();
    }
    // Clear denominators and divide out the gcd.
    let mut lcm = BigInt::one();
    for s in &sol {
        lcm = lcm.lcm(s.denom());
    }
    let mut ints: Vec<BigInt> = sol.iter().map(|s| (s * BigRational::from(lcm.clone())).to_integer()).collect();
    let mut g = BigInt::zero();
    for c in &ints {
        g = g.gcd(c);
    }
    if !g.is_zero() && !g.is_one() {
        for c in &mut ints {
            *c = &*c / &g;
        }
    }
    if let Some(first) = ints.iter().find(|c| !c.is_zero()) {
        if first.is_negative() {
            for c in &mut ints {
                *c = -&*c;
            }
        }
    }
    Some(ints)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&c| BigInt::from(c)).collect())
            .collect()
    }

    #[test]
    fn small_determinants() {
        assert_eq!(determinant(&m(&[&[2]])).unwrap(), BigInt::from(2));
        assert_eq!(
            determinant(&m(&[&[1, 2], &[3, 4]])).unwrap(),
            BigInt::from(-2)
        );
        assert_eq!(
            determinant(&m(&[&[0, 1], &[1, 0]])).unwrap(),
            BigInt::from(-1)
        );
        assert_eq!(
            determinant(&m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]])).unwrap(),
            BigInt::zero()
        );
        assert!(determinant(&m(&[&[1, 2]])).is_err());
    }

    #[test]
    fn determinant_vs_cofactor_expansion() {
        // Pseudo-random 5x5 checked against a naive expansion.
        fn naive(rows: &[Vec<BigInt>]) -> BigInt {
            let n = rows.len();
            if n == 1 {
                return rows[0][0].clone();
            }
            let mut acc = BigInt::zero();
            for j in 0..n {
                if rows[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<BigInt>> = rows[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, v)| v.clone())
                            .collect()
                    })
                    .collect();
                let term = &rows[0][j] * naive(&minor);
                if j % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
        let mut seed = 123456789u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 33) % 19) as i64 - 9
        };
        for _ in 0..10 {
            let rows: Vec<Vec<BigInt>> = (0..5)
                .map(|_| (0..5).map(|_| BigInt::from(next())).collect())
                .collect();
            assert_eq!(determinant(&rows).unwrap(), naive(&rows));
        }
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation(&BigInt::from(7), 7), 1);
        assert_eq!(valuation(&BigInt::from(-392), 7), 2);
        assert_eq!(valuation(&BigInt::from(5), 7), 0);
    }

    #[test]
    fn kernel_basics() {
        // [1 1] has kernel (1, -1) up to sign; normalized first entry > 0.
        let k = kernel_vector(&m(&[&[1, 1]])).unwrap();
        assert_eq!(k, vec![BigInt::from(1), BigInt::from(-1)]);

        // A rank-2 3x4 matrix: the kernel vector must annihilate all rows.
        let rows = m(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 1]]);
        let k = kernel_vector(&rows).unwrap();
        for r in &rows {
            let dot: BigInt = r.iter().zip(&k).map(|(a, b)| a * b).sum();
            assert!(dot.is_zero());
        }
        // Primitivity.
        let mut g = BigInt::zero();
        for c in &k {
            g = g.gcd(c);
        }
        assert_eq!(g, BigInt::one());

        // Full-rank square matrix has no kernel column before exhaustion.
        assert!(kernel_vector(&m(&[&[1, 0], &[0, 1]])).is_none());
    }
}
