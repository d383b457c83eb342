//! Monomial and polynomial arithmetic over weighted projective space:
//! weighted degrees, the graded total order, leading terms, exact
//! evaluation, formal partials, and the substitution that eliminates the
//! `v` coordinate of a surface `f(x,y) = v z^k`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Positive integer weights `(w_0, ..., w_{r+1})` defining a weighted
/// projective space. `r` is `len - 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightVector {
    weights: Vec<u64>,
}

impl WeightVector {
    pub fn new(weights: Vec<u64>) -> Result<Self> {
        if weights.len() < 2 {
            return Err(Error::InvalidForm(
                "a weight vector needs at least two coordinates".into(),
            ));
        }
        if weights.iter().any(|&w| w == 0) {
            return Err(Error::InvalidForm("weights must be positive".into()));
        }
        Ok(WeightVector { weights })
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The dimension parameter `r` (two less than the coordinate count).
    pub fn dim(&self) -> usize {
        self.weights.len() - 2
    }

    /// True when the first two weights are 1; the determinant-method
    /// machinery requires this.
    pub fn has_unit_pair(&self) -> bool {
        self.weights[0] == 1 && self.weights[1] == 1
    }

    /// Product of the non-unit slots `w_2 ... w_{r+1}`.
    pub fn tail_product(&self) -> u64 {
        self.weights[2..].iter().product()
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, w) in self.weights.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{w}")?;
        }
        write!(f, ")")
    }
}

/// Exponents `(a_0, ..., a_{r+1})` of a monomial. The derived `Ord` is the
/// plain lexicographic order on the exponent list, used only for stable
/// storage; the graded order lives in [`compare_graded`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExponentVector(pub Vec<u64>);

impl ExponentVector {
    pub fn new(exponents: Vec<u64>) -> Self {
        ExponentVector(exponents)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponents(&self) -> &[u64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Componentwise divisibility: does `self` divide `other` as monomials?
    pub fn divides(&self, other: &ExponentVector) -> bool {
        self.0.len() == other.0.len()
            && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

/// Weighted degree `sum a_i w_i` of an exponent vector.
pub fn weighted_degree(e: &ExponentVector, w: &WeightVector) -> Result<u64> {
    if e.len() != w.len() {
        return Err(Error::DimensionMismatch {
            expected: w.len(),
            got: e.len(),
        });
    }
    Ok(e.0.iter().zip(w.weights()).map(|(a, wi)| a * wi).sum())
}

/// A weight vector is well-formed when every subset of all but one of the
/// weights has gcd 1.
pub fn is_well_formed(w: &WeightVector) -> bool {
    let n = w.len();
    (0..n).all(|skip| {
        let mut g = 0u64;
        for (i, &wi) in w.weights().iter().enumerate() {
            if i != skip {
                g = g.gcd(&wi);
            }
        }
        g == 1
    })
}

/// The graded total order: compare weighted degrees first; on a tie compare
/// exponents from the last coordinate downwards, larger exponent winning.
pub fn compare_graded(a: &ExponentVector, b: &ExponentVector, w: &WeightVector) -> Result<Ordering> {
    let da = weighted_degree(a, w)?;
    let db = weighted_degree(b, w)?;
    match da.cmp(&db) {
        Ordering::Equal => {
            for i in (0..a.len()).rev() {
                match a.0[i].cmp(&b.0[i]) {
                    Ordering::Equal => continue,
                    other => return Ok(other),
                }
            }
            Ok(Ordering::Equal)
        }
        other => Ok(other),
    }
}

/// Visit every exponent vector of weighted degree `u`, in an unspecified
/// order. Recurses over coordinates from the highest weight down so the
/// branching factor shrinks fastest.
pub(crate) fn for_each_monomial<F: FnMut(&[u64])>(w: &WeightVector, u: u64, mut visit: F) {
    let n = w.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| w.weights()[j].cmp(&w.weights()[i]));
    let mut buf = vec![0u64; n];
    fn rec<F: FnMut(&[u64])>(
        w: &[u64],
        order: &[usize],
        pos: usize,
        rem: u64,
        buf: &mut [u64],
        visit: &mut F,
    ) {
        if pos == order.len() - 1 {
            let idx = order[pos];
            if rem % w[idx] == 0 {
                buf[idx] = rem / w[idx];
                visit(buf);
            }
            return;
        }
        let idx = order[pos];
        let wi = w[idx];
        for e in 0..=rem / wi {
            buf[idx] = e;
            rec(w, order, pos + 1, rem - e * wi, buf, visit);
        }
    }
    rec(w.weights(), &order, 0, u, &mut buf, &mut visit);
}

/// Number of distinct monomials of weighted degree `u`.
pub fn monomial_count(w: &WeightVector, u: u64) -> u64 {
    let mut count = 0u64;
    for_each_monomial(w, u, |_| count += 1);
    count
}

/// All exponent vectors of weighted degree `u`, sorted descending under the
/// graded order so downstream matrices are reproducible.
pub fn enumerate_monomials(w: &WeightVector, u: u64) -> Vec<ExponentVector> {
    let mut out = Vec::new();
    for_each_monomial(w, u, |e| out.push(ExponentVector::new(e.to_vec())));
    out.sort_by(|a, b| compare_graded(b, a, w).expect("uniform lengths"));
    out
}

/// A sparse integer polynomial, weighted homogeneous with respect to its
/// weight vector. The zero polynomial carries no degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedForm {
    weights: WeightVector,
    terms: BTreeMap<ExponentVector, BigInt>,
    degree: Option<u64>,
}

impl WeightedForm {
    /// Build a form from `(exponent, coefficient)` pairs. Zero coefficients
    /// are dropped; all surviving terms must share one weighted degree.
    pub fn new<I>(weights: WeightVector, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ExponentVector, BigInt)>,
    {
        let mut map: BTreeMap<ExponentVector, BigInt> = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != weights.len() {
                return Err(Error::DimensionMismatch {
                    expected: weights.len(),
                    got: e.len(),
                });
            }
            if c.is_zero() {
                continue;
            }
            let entry = map.entry(e).or_insert_with(BigInt::zero);
            *entry += c;
            if entry.is_zero() {
                // remove cancelled key
            }
        }
        map.retain(|_, c| !c.is_zero());
        let mut degree = None;
        for e in map.keys() {
            let d = weighted_degree(e, &weights)?;
            match degree {
                None => degree = Some(d),
                Some(d0) if d0 != d => {
                    return Err(Error::InvalidForm(format!(
                        "mixed weighted degrees {d0} and {d}"
                    )))
                }
                _ => {}
            }
        }
        Ok(WeightedForm {
            weights,
            terms: map,
            degree,
        })
    }

    pub fn zero(weights: WeightVector) -> Self {
        WeightedForm {
            weights,
            terms: BTreeMap::new(),
            degree: None,
        }
    }

    /// The form consisting of a single term.
    pub fn monomial(weights: WeightVector, e: ExponentVector, c: BigInt) -> Result<Self> {
        Self::new(weights, [(e, c)])
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &BigInt)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Weighted degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u64> {
        self.degree
    }

    pub fn coefficient(&self, e: &ExponentVector) -> BigInt {
        self.terms.get(e).cloned().unwrap_or_else(BigInt::zero)
    }

    /// The term maximal under the graded order.
    pub fn leading_term(&self) -> Result<(&ExponentVector, &BigInt)> {
        let mut best: Option<&ExponentVector> = None;
        for e in self.terms.keys() {
            best = Some(match best {
                None => e,
                Some(b) => {
                    if compare_graded(e, b, &self.weights)? == Ordering::Greater {
                        e
                    } else {
                        b
                    }
                }
            });
        }
        match best {
            Some(e) => Ok((e, &self.terms[e])),
            None => Err(Error::ZeroPolynomial),
        }
    }

    /// Exact value at an integer point.
    pub fn evaluate(&self, point: &[BigInt]) -> Result<BigInt> {
        if point.len() != self.weights.len() {
            return Err(Error::DimensionMismatch {
                expected: self.weights.len(),
                got: point.len(),
            });
        }
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &ei) in point.iter().zip(&e.0) {
                if ei > 0 {
                    t *= xi.pow(ei as u32);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Value at a residue tuple mod `p`.
    pub(crate) fn evaluate_mod(&self, point: &[u64], p: u64) -> u64 {
        debug_assert_eq!(point.len(), self.weights.len());
        let mut acc: u64 = 0;
        for (e, c) in &self.terms {
            let mut t = c.mod_floor(&BigInt::from(p))
                .to_u64_digits()
                .1
                .first()
                .copied()
                .unwrap_or(0);
            for (&xi, &ei) in point.iter().zip(&e.0) {
                t = mulmod(t, powmod(xi % p, ei, p), p);
            }
            acc = (acc + t) % p;
        }
        acc
    }

    /// Formal partial derivative with respect to coordinate `i`.
    pub fn partial(&self, i: usize) -> Result<WeightedForm> {
        if i >= self.weights.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.weights.len(),
            });
        }
        let mut terms = Vec::new();
        for (e, c) in &self.terms {
            if e.0[i] == 0 {
                continue;
            }
            let mut de = e.0.clone();
            de[i] -= 1;
            terms.push((ExponentVector::new(de), c * BigInt::from(e.0[i])));
        }
        WeightedForm::new(self.weights.clone(), terms)
    }

    /// Sum of two forms over the same weights, when degrees are compatible.
    pub fn try_add(&self, other: &WeightedForm) -> Result<WeightedForm> {
        if self.weights != other.weights {
            return Err(Error::DimensionMismatch {
                expected: self.weights.len(),
                got: other.weights.len(),
            });
        }
        if let (Some(a), Some(b)) = (self.degree, other.degree) {
            if a != b {
                return Err(Error::InvalidForm(format!(
                    "cannot add forms of weighted degrees {a} and {b}"
                )));
            }
        }
        let all = self
            .terms
            .iter()
            .chain(other.terms.iter())
            .map(|(e, c)| (e.clone(), c.clone()));
        WeightedForm::new(self.weights.clone(), all)
    }

    /// Gcd of the coefficients (zero for the zero form).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
        }
        g
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == BigInt::one()
    }

    /// Divide out the content; the zero form is returned unchanged.
    pub fn primitive_part(&self) -> WeightedForm {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), c / &g))
            .collect::<Vec<_>>();
        WeightedForm::new(self.weights.clone(), terms).expect("content division keeps degrees")
    }
}

pub(crate) fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn powmod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    acc
}

// Serialized shape: {"weights":[..],"degree":n,"terms":[{"exp":[..],"coef":"-12"},..]}
// with coefficients as decimal strings so arbitrary precision survives JSON.
#[derive(Serialize, Deserialize)]
struct TermRepr {
    exp: Vec<u64>,
    coef: String,
}

#[derive(Serialize, Deserialize)]
struct FormRepr {
    weights: Vec<u64>,
    degree: Option<u64>,
    terms: Vec<TermRepr>,
}

impl Serialize for WeightedForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = FormRepr {
            weights: self.weights.weights().to_vec(),
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermRepr {
                    exp: e.0.clone(),
                    coef: c.to_string(),
                })
                .collect(),
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeightedForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = FormRepr::deserialize(d)?;
        let weights = WeightVector::new(repr.weights).map_err(serde::de::Error::custom)?;
        let terms = repr
            .terms
            .into_iter()
            .map(|t| {
                let c: BigInt = t.coef.parse().map_err(serde::de::Error::custom)?;
                Ok((ExponentVector::new(t.exp), c))
            })
            .collect::<std::result::Result<Vec<_>, D::Error>>()?;
        WeightedForm::new(weights, terms).map_err(serde::de::Error::custom)
    }
}

/// An integer binary form of degree `D`, stored as coefficients
/// `a_D, ..., a_0` meaning `sum a_i x^i y^(D-i)`. The discriminant is
/// computed once at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryForm {
    coeffs: Vec<BigInt>,
    disc: BigInt,
}

impl BinaryForm {
    /// `coeffs` runs from the `x^D` coefficient down to the `y^D` one.
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::InvalidForm(
                "a binary form needs degree at least 1".into(),
            ));
        }
        if coeffs.iter().all(|c| c.is_zero()) {
            return Err(Error::InvalidForm("the zero form is not allowed".into()));
        }
        let disc = discriminant(&coeffs);
        Ok(BinaryForm { coeffs, disc })
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn degree(&self) -> u64 {
        (self.coeffs.len() - 1) as u64
    }

    /// Coefficients `a_D ... a_0`.
    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.disc
    }

    /// Largest absolute coefficient.
    pub fn height(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .expect("nonempty coefficient list")
    }

    pub fn lead_x(&self) -> &BigInt {
        &self.coeffs[0]
    }

    pub fn lead_y(&self) -> &BigInt {
        self.coeffs.last().expect("nonempty coefficient list")
    }

    pub fn evaluate(&self, x: &BigInt, y: &BigInt) -> BigInt {
        // Horner in x, with y powers folded in afterwards.
        let d = self.coeffs.len() - 1;
        let mut acc = BigInt::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            // coefficient of x^(d-i) y^i
            acc = acc * x + c * y.pow(i as u32);
        }
        // acc now equals sum a_{d-i} x^{d-i} y^i
        let _ = d;
        acc
    }

    /// Overflow-checked fast path for small arguments.
    pub fn evaluate_i128(&self, x: i128, y: i128) -> Option<i128> {
        let mut acc: i128 = 0;
        let mut ypow: Vec<i128> = Vec::with_capacity(self.coeffs.len());
        let mut yp: i128 = 1;
        for _ in 0..self.coeffs.len() {
            ypow.push(yp);
            yp = yp.checked_mul(y)?;
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            let c = i128::try_from(c).ok()?;
            acc = acc
                .checked_mul(x)?
                .checked_add(c.checked_mul(ypow[i])?)?;
        }
        Some(acc)
    }

    /// `f(t, 1)` as a univariate polynomial in `t`.
    pub fn dehomogenize_x(&self) -> UnivariatePoly {
        let mut asc: Vec<BigInt> = self.coeffs.iter().rev().cloned().collect();
        asc.shrink_to_fit();
        UnivariatePoly::new(asc)
    }

    /// `f(1, s)` as a univariate polynomial in `s`.
    pub fn dehomogenize_y(&self) -> UnivariatePoly {
        UnivariatePoly::new(self.coeffs.clone())
    }

    /// Terms `(i, D-i) -> a_i` embedded in the first two coordinates of a
    /// weighted space.
    pub fn weighted_terms(&self, total_len: usize) -> Vec<(ExponentVector, BigInt)> {
        let d = self.coeffs.len() - 1;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let mut e = vec![0u64; total_len];
                e[0] = (d - i) as u64;
                e[1] = i as u64;
                (ExponentVector::new(e), c.clone())
            })
            .collect()
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.coeffs.len() - 1;
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let xe = d - i;
            let ye = i;
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            if a != BigInt::one() || (xe == 0 && ye == 0) {
                write!(f, "{a}")?;
            }
            if xe > 0 {
                write!(f, "x")?;
                if xe > 1 {
                    write!(f, "^{xe}")?;
                }
            }
            if ye > 0 {
                write!(f, "y")?;
                if ye > 1 {
                    write!(f, "^{ye}")?;
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

// JSON shape: {"degree": D, "coefs": ["a_D", ..., "a_0"]}
#[derive(Serialize, Deserialize)]
struct BinaryRepr {
    degree: u64,
    coefs: Vec<String>,
}

impl Serialize for BinaryForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BinaryRepr {
            degree: self.degree(),
            coefs: self.coeffs.iter().map(|c| c.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BinaryForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = BinaryRepr::deserialize(d)?;
        if repr.coefs.len() as u64 != repr.degree + 1 {
            return Err(serde::de::Error::custom("coefficient count must be degree + 1"));
        }
        let coeffs = repr
            .coefs
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(serde::de::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        BinaryForm::new(coeffs).map_err(serde::de::Error::custom)
    }
}

/// Dense univariate integer polynomial, coefficients ascending in the
/// variable; trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnivariatePoly {
    coeffs: Vec<BigInt>,
}

impl UnivariatePoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        UnivariatePoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of the trimmed polynomial; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// Ascending coefficients of the trimmed polynomial.
    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn evaluate(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
}

/// Substitute `v -> f(x,y)/z^k` into a form over `(1, 1, d-2k, 2)` and clear
/// denominators with the minimal power `z^L`; the result is weighted
/// homogeneous of degree `2L + l` over `(1, 1, 2)`.
pub fn eliminate_v(gstar: &WeightedForm, f: &BinaryForm, k: u64) -> Result<WeightedForm> {
    if k == 0 {
        return Err(Error::Regime("the exponent k must be positive".into()));
    }
    let d = f.degree();
    if d <= 2 * k {
        return Err(Error::Regime(format!(
            "need deg f - 2k >= 1, got d = {d}, k = {k}"
        )));
    }
    let w2 = d - 2 * k;
    let expected = WeightVector::new(vec![1, 1, w2, 2])?;
    if gstar.weights() != &expected {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: gstar.weights().len(),
        });
    }
    let out_weights = WeightVector::new(vec![1, 1, 2])?;
    if gstar.is_zero() {
        return Ok(WeightedForm::zero(out_weights));
    }
    let l = gstar.degree().expect("nonzero form has a degree");

    // Powers of f as (x-exp, y-exp) -> coefficient maps, built on demand.
    let mut fpows: Vec<BTreeMap<(u64, u64), BigInt>> = Vec::new();
    let mut one = BTreeMap::new();
    one.insert((0u64, 0u64), BigInt::one());
    fpows.push(one);
    let fmap: BTreeMap<(u64, u64), BigInt> = f
        .coefficients()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| ((d - i as u64, i as u64), c.clone()))
        .collect();

    let mut laurent: BTreeMap<(u64, u64, i64), BigInt> = BTreeMap::new();
    for (e, c) in gstar.terms() {
        let (a, b, m, zexp) = (e.0[0], e.0[1], e.0[2], e.0[3]);
        while fpows.len() as u64 <= m {
            let prev = fpows.last().unwrap();
            let mut next: BTreeMap<(u64, u64), BigInt> = BTreeMap::new();
            for ((i1, j1), c1) in prev {
                for ((i2, j2), c2) in &fmap {
                    *next.entry((i1 + i2, j1 + j2)).or_insert_with(BigInt::zero) += c1 * c2;
                }
            }
            next.retain(|_, c| !c.is_zero());
            fpows.push(next);
        }
        for ((i, j), fc) in &fpows[m as usize] {
            let key = (a + i, b + j, zexp as i64 - (k * m) as i64);
            let entry = laurent.entry(key).or_insert_with(BigInt::zero);
            *entry += c * fc;
        }
    }
    laurent.retain(|_, c| !c.is_zero());
    if laurent.is_empty() {
        return Ok(WeightedForm::zero(out_weights));
    }
    let min_z = laurent.keys().map(|&(_, _, z)| z).min().unwrap();
    let shift = if min_z < 0 { -min_z } else { 0 };
    let terms: Vec<(ExponentVector, BigInt)> = laurent
        .into_iter()
        .map(|((a, b, z), c)| {
            (
                ExponentVector::new(vec![a, b, (z + shift) as u64]),
                c,
            )
        })
        .collect();
    let out = WeightedForm::new(out_weights, terms)?;
    debug_assert_eq!(out.degree(), Some(2 * shift as u64 + l));
    Ok(out)
}

/// Collect the part of a form over `(1,1,2)` that is free of the third
/// coordinate, as a binary form in the first two.
pub fn z_free_binary_part(g: &WeightedForm) -> Result<Option<BinaryForm>> {
    if g.weights().len() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: g.weights().len(),
        });
    }
    let Some(l) = g.degree() else {
        return Ok(None);
    };
    let mut coeffs = vec![BigInt::zero(); l as usize + 1];
    let mut any = false;
    for (e, c) in g.terms() {
        if e.0[2] == 0 {
            // exponent (a, l-a, 0): slot for x^a is index l-a in descending order
            coeffs[(l - e.0[0]) as usize] = c.clone();
            any = true;
        }
    }
    if !any {
        return Ok(None);
    }
    Ok(Some(BinaryForm::new(coeffs)?))
}

/// Resultant of two univariate integer polynomials, by Sylvester matrix on
/// the trimmed degrees.
pub fn resultant(p: &UnivariatePoly, q: &UnivariatePoly) -> BigInt {
    use crate::linalg::determinant_bareiss;
    let (Some(m), Some(n)) = (p.degree(), q.degree()) else {
        return BigInt::zero();
    };
    if m == 0 && n == 0 {
        return BigInt::one();
    }
    if m == 0 {
        return p.coefficients()[0].pow(n as u32);
    }
    if n == 0 {
        return q.coefficients()[0].pow(m as u32);
    }
    let size = m + n;
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    // n rows of p's coefficients (descending), then m rows of q's.
    for row in 0..n {
        for (t, c) in p.coefficients().iter().rev().enumerate() {
            mat[row][row + t] = c.clone();
        }
    }
    for row in 0..m {
        for (t, c) in q.coefficients().iter().rev().enumerate() {
            mat[n + row][row + t] = c.clone();
        }
    }
    determinant_bareiss(mat)
}

/// Sylvester determinant of two binary forms given by full descending
/// coefficient lists at their formal degrees (leading zeros allowed).
fn sylvester_binary(p: &[BigInt], q: &[BigInt]) -> BigInt {
    use crate::linalg::determinant_bareiss;
    let m = p.len() - 1;
    let n = q.len() - 1;
    let size = m + n;
    if size == 0 {
        return BigInt::one();
    }
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    for row in 0..n {
        for (t, c) in p.iter().enumerate() {
            mat[row][row + t] = c.clone();
        }
    }
    for row in 0..m {
        for (t, c) in q.iter().enumerate() {
            mat[n + row][row + t] = c.clone();
        }
    }
    determinant_bareiss(mat)
}

/// Discriminant of a binary form with descending coefficients `a_D..a_0`,
/// via the resultant of the two partial derivatives:
/// `disc = (-1)^(D(D-1)/2) Res(F_x, F_y) / D^(D-2)`.
fn discriminant(coeffs: &[BigInt]) -> BigInt {
    let d = coeffs.len() - 1;
    if d == 1 {
        return BigInt::one();
    }
    // F_x has descending coefficients (D-i) a_{D-i} for x^(D-1-i) y^i read
    // off from F = sum a_{D-i} x^(D-i) y^i.
    let fx: Vec<BigInt> = (0..d)
        .map(|i| BigInt::from((d - i) as u64) * &coeffs[i])
        .collect();
    let fy: Vec<BigInt> = (0..d)
        .map(|i| BigInt::from(i as u64 + 1) * &coeffs[i + 1])
        .collect();
    let res = sylvester_binary(&fx, &fy);
    let sign = if (d * (d - 1) / 2) % 2 == 1 { -1 } else { 1 };
    let denom = BigInt::from(d as u64).pow(d as u32 - 2);
    let signed = res * BigInt::from(sign);
    let (q, r) = signed.div_rem(&denom);
    debug_assert!(r.is_zero(), "discriminant division must be exact");
    q
}
