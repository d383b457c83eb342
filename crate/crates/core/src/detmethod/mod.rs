//! The constructive core: enumerate rational points on the surface
//! `f(x,y) = v z^k` in its weighted projective space, reduce them modulo
//! primes, measure multiplicities, certify the p-adic valuation bounds of
//! monomial-evaluation determinants, and extract the auxiliary form that
//! vanishes on every enumerated point.

mod extract;
mod pipeline;
mod points;
mod valuation;

pub use extract::AuxiliaryForm;
pub use pipeline::{
    compute_vw, resultant_coprimality, run_pipeline, select_primes, DetReport, RefinementReport,
    Verdicts, MAX_EXTRACTION_POINTS,
};
pub use points::FpCount;
pub use valuation::{
    valuation_bound, valuation_bound_surface, verify_padic_divisibility, MonomialMatrix,
    ResidueClass, ValuationRecord,
};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::weighted_algebra::{BinaryForm, ExponentVector, WeightVector, WeightedForm};

/// Largest prime for which full orbit enumeration over the finite field is
/// attempted by default.
pub const DEFAULT_FP_CAP: u64 = 101;

/// The weighted projective surface `f(x,y) - v z^k = 0` over
/// `(1, 1, d-2k, 2)`, with the four weighted partials cached.
#[derive(Debug, Clone)]
pub struct SurfaceX {
    f: BinaryForm,
    k: u32,
    weights: WeightVector,
    form: WeightedForm,
    partials: Vec<WeightedForm>,
}

impl SurfaceX {
    pub fn f(&self) -> &BinaryForm {
        &self.f
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn d(&self) -> u64 {
        self.f.degree()
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    pub fn form(&self) -> &WeightedForm {
        &self.form
    }

    pub(crate) fn partials(&self) -> &[WeightedForm] {
        &self.partials
    }
}

/// Build the surface for an irreducible `f` of degree `d` with
/// `d - 2k >= 1`. The defining form has leading monomial `v z^k` under the
/// graded order.
pub fn make_surface(f: BinaryForm, k: u32) -> Result<SurfaceX> {
    if k < 2 {
        return Err(Error::Regime("need k >= 2".into()));
    }
    let d = f.degree();
    if d <= 2 * k as u64 {
        return Err(Error::Regime(format!(
            "need d - 2k >= 1, got d = {d}, k = {k}"
        )));
    }
    let weights = WeightVector::new(vec![1, 1, d - 2 * k as u64, 2])?;
    let mut terms = f.weighted_terms(4);
    terms.push((
        ExponentVector::new(vec![0, 0, 1, k as u64]),
        BigInt::from(-1),
    ));
    let form = WeightedForm::new(weights.clone(), terms)?;
    debug_assert_eq!(
        form.leading_term()?.0,
        &ExponentVector::new(vec![0, 0, 1, k as u64])
    );
    let partials = (0..4).map(|i| form.partial(i)).collect::<Result<Vec<_>>>()?;
    Ok(SurfaceX {
        f,
        k,
        weights,
        form,
        partials,
    })
}

/// Search box: `1 <= x <= bx`, `1 <= y <= by`, `0 < |v| <= bv`,
/// `bz/2 < z <= bz`.
#[derive(Debug, Clone, Serialize)]
pub struct SearchBox {
    pub bx: u64,
    pub by: u64,
    #[serde(serialize_with = "crate::detmethod::ser_bigint")]
    pub bv: BigInt,
    pub bz: u64,
}

impl SearchBox {
    pub fn new(bx: u64, by: u64, bv: BigInt, bz: u64) -> Result<Self> {
        if bx < 1 || by < 1 || bz < 1 || bv < BigInt::from(1) {
            return Err(Error::Domain("box bounds must be at least 1".into()));
        }
        Ok(SearchBox { bx, by, bv, bz })
    }
}

/// A primitive integer point on the surface: `gcd(x, y) = 1` and the
/// defining form vanishes exactly.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct LatticePoint {
    coords: [BigInt; 4],
}

impl LatticePoint {
    pub fn new(coords: [BigInt; 4]) -> Self {
        LatticePoint { coords }
    }

    pub fn coords(&self) -> &[BigInt; 4] {
        &self.coords
    }

    pub fn x(&self) -> &BigInt {
        &self.coords[0]
    }

    pub fn y(&self) -> &BigInt {
        &self.coords[1]
    }

    pub fn v(&self) -> &BigInt {
        &self.coords[2]
    }

    pub fn z(&self) -> &BigInt {
        &self.coords[3]
    }
}

impl Serialize for LatticePoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let strs: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        strs.serialize(s)
    }
}

/// Canonical representative of a point of the weighted projective space
/// over a prime field: the first nonzero weight-one coordinate is scaled
/// to 1, which pins the class uniquely.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ResiduePoint(pub [u64; 4]);

/// Congruence constraint: points must reduce to `point` in the space over
/// the field with `p` elements.
#[derive(Debug, Clone, Serialize)]
pub struct PrimeConstraint {
    pub p: u64,
    pub point: ResiduePoint,
    pub nonsingular: bool,
}

pub(crate) fn ser_bigint<S: serde::Serializer>(
    v: &BigInt,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub(crate) fn big_mod_u64(v: &BigInt, p: u64) -> u64 {
    use num_integer::Integer;
    use num_traits::ToPrimitive;
    v.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits")
}

/// True when the defining form vanishes exactly at the point.
pub fn is_on_surface(surface: &SurfaceX, point: &LatticePoint) -> bool {
    surface
        .form()
        .evaluate(point.coords())
        .map(|v| v.is_zero())
        .unwrap_or(false)
}
