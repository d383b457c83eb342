//! The end-to-end run: build the dyadic box, enumerate points, select the
//! prime set, extract and verify the auxiliary form globally and per
//! residue class of the first selected prime, and certify the valuation
//! bounds at every selected prime.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use std::collections::BTreeMap;

use super::valuation::{verify_padic_divisibility, ResidueClass, ValuationRecord};
use super::{AuxiliaryForm, LatticePoint, ResiduePoint, SearchBox, SurfaceX};
use crate::error::{Error, Result};
use crate::exponents::psi;
use crate::factor::next_prime;
use crate::weighted_algebra::{resultant, BinaryForm, ExponentVector, WeightedForm};

/// Refuse exact kernel extraction beyond this many points; the matrices
/// grow quadratically and the entries exponentially.
pub const MAX_EXTRACTION_POINTS: usize = 150;

/// Box volume and the box-shape weight: `V = prod B_i` and
/// `log W = ((r+1)/r) (w/d)^(1/r) * sum a_m log B_m` with the exact limit
/// coefficients of the surface ideal.
pub fn compute_vw(surface: &SurfaceX, bounds: &SearchBox) -> Result<(f64, f64)> {
    let ideal = surface.ideal();
    let logs = [
        (bounds.bx as f64).ln(),
        (bounds.by as f64).ln(),
        bounds.bv.to_f64().unwrap_or(f64::MAX).ln(),
        (bounds.bz as f64).ln(),
    ];
    let log_v: f64 = logs.iter().sum();
    let r = surface.weights().dim() as f64;
    let w = surface.weights().tail_product() as f64;
    let d = surface.d() as f64;
    let mut weighted = 0f64;
    for (m, lg) in logs.iter().enumerate() {
        let a = ideal.a_coefficient(m)?;
        weighted += a.to_f64().ok_or_else(|| Error::Domain("coefficient overflow".into()))? * lg;
    }
    let log_w = ((r + 1.0) / r) * (w / d).powf(1.0 / r) * weighted;
    Ok((log_v.exp(), log_w))
}

/// Consecutive primes above `log B`, skipping divisors of the extreme
/// coefficients of `f` (the primes where the reduced surface can fail to be
/// integral), while the running product stays below `2 B^psi`.
pub fn select_primes(surface: &SurfaceX, big_b: u64, psi_value: f64) -> (Vec<u64>, BigInt) {
    let log_b = (big_b as f64).ln();
    let threshold = std::f64::consts::LN_2 + psi_value * log_b;
    let bad = |p: u64| -> bool {
        let pb = BigInt::from(p);
        (surface.f().lead_x() % &pb).is_zero() || (surface.f().lead_y() % &pb).is_zero()
    };
    let mut primes = Vec::new();
    let mut product = BigInt::one();
    let mut log_product = 0f64;
    let mut p = next_prime(log_b.floor().max(1.0) as u64);
    while (p as f64) <= log_b {
        p = next_prime(p);
    }
    loop {
        if !bad(p) {
            if log_product + (p as f64).ln() >= threshold {
                break;
            }
            log_product += (p as f64).ln();
            product *= BigInt::from(p);
            primes.push(p);
        }
        p = next_prime(p);
        if primes.len() > 10_000 {
            break; // absurd parameter combinations stop here
        }
    }
    (primes, product)
}

/// Pass/fail verdicts for one extracted form. `vacuous` marks the
/// no-points case, where the checks hold by emptiness.
#[derive(Debug, Clone, Serialize)]
pub struct Verdicts {
    pub vanishes_on_points: bool,
    pub primitive: bool,
    pub not_divisible_by_surface_form: bool,
    pub degree_within_bound: bool,
    pub vacuous: bool,
}

impl Verdicts {
    pub fn all_pass(&self) -> bool {
        self.vanishes_on_points
            && self.primitive
            && self.not_divisible_by_surface_form
            && self.degree_within_bound
    }
}

/// Extraction restricted to one residue class of the first selected prime.
#[derive(Debug, Clone, Serialize)]
pub struct RefinementReport {
    pub p: u64,
    pub class_point: ResiduePoint,
    pub nonsingular: bool,
    pub points_used: u64,
    pub degree: u64,
    pub auxiliary_form: WeightedForm,
    pub verdicts: Verdicts,
}

/// Full record of a determinant-method run.
#[derive(Debug, Clone, Serialize)]
pub struct DetReport {
    pub f: BinaryForm,
    pub k: u32,
    pub big_b: u64,
    pub beta: String,
    pub weights: Vec<u64>,
    pub bounds: SearchBox,
    pub v_cap_note: String,
    pub z_prime_only: bool,
    pub psi: f64,
    pub log_v: f64,
    pub log_w: f64,
    pub selected_primes: Vec<u64>,
    #[serde(serialize_with = "super::ser_bigint")]
    pub prime_product: BigInt,
    pub points: Vec<LatticePoint>,
    pub points_used: u64,
    pub degree: Option<u64>,
    pub basis: Vec<ExponentVector>,
    pub auxiliary_form: WeightedForm,
    pub verdicts: Verdicts,
    pub valuation_records: Vec<ValuationRecord>,
    pub refinements: Vec<RefinementReport>,
}

impl DetReport {
    pub fn all_pass(&self) -> bool {
        self.verdicts.all_pass()
            && self.valuation_records.iter().all(|r| r.pass)
            && self.refinements.iter().all(|r| r.verdicts.all_pass())
    }
}

fn judge(surface: &SurfaceX, aux: &WeightedForm, points: &[LatticePoint], u_bound: u64) -> Verdicts {
    let vanishes = points
        .iter()
        .all(|pt| aux.evaluate(pt.coords()).map(|v| v.is_zero()).unwrap_or(false));
    let lead = surface
        .form()
        .leading_term()
        .expect("surface form nonzero")
        .0
        .clone();
    let not_divisible = !aux.is_zero() && aux.terms().all(|(e, _)| !lead.divides(e));
    Verdicts {
        vanishes_on_points: vanishes,
        primitive: aux.is_primitive(),
        not_divisible_by_surface_form: not_divisible,
        degree_within_bound: aux.degree().map(|d| d <= u_bound).unwrap_or(false),
        vacuous: points.is_empty(),
    }
}

/// Floor of `B^(num/den)` for nonnegative rational exponents.
fn integer_power_floor(base: u64, num: u32, den: u32) -> BigInt {
    debug_assert!(den > 0);
    BigInt::from(base).pow(num).nth_root(den)
}

/// Run the whole determinant-method verification at one dyadic level
/// `H = B^beta`. The `v` bound is the explicit cap
/// `d * height(f) * B^d / (B_z/2)^k`, which contains every solution.
pub fn run_pipeline(
    f: BinaryForm,
    k: u32,
    big_b: u64,
    beta_num: u32,
    beta_den: u32,
    z_prime_only: bool,
    max_verification_prime: Option<u64>,
) -> Result<DetReport> {
    if big_b < 2 {
        return Err(Error::Domain("need B >= 2".into()));
    }
    if beta_den == 0 {
        return Err(Error::Domain("beta denominator must be positive".into()));
    }
    let surface = make_surface_checked(f, k)?;
    let d = surface.d();
    let bz_big = integer_power_floor(big_b, beta_num, beta_den);
    let bz = bz_big
        .to_u64()
        .ok_or_else(|| Error::Domain("z bound exceeds 64 bits".into()))?
        .max(1);
    // |v| = |f(x,y)| / z^k <= d * height * B^d / (bz/2)^k.
    let height = surface.f().height();
    let numerator = BigInt::from(d) * &height * BigInt::from(big_b).pow(d as u32)
        * BigInt::from(2u64).pow(k);
    let denominator = BigInt::from(bz).pow(k);
    let bv = (numerator / denominator).max(BigInt::one());
    let v_cap_note = format!(
        "explicit cap |v| <= d*height(f)*B^d/(B_z/2)^k = {bv}; the nominal bound B^(d-k*beta) is {}",
        nominal_v_bound(big_b, d, k, beta_num, beta_den)
    );
    let bounds = SearchBox::new(big_b, big_b, bv, bz)?;

    let mut points = surface.enumerate_points(&bounds, z_prime_only, &[]);
    points.sort();
    let s = points.len();
    if s > MAX_EXTRACTION_POINTS {
        return Err(Error::WorkLimit(format!(
            "{s} points exceed the exact-extraction cap of {MAX_EXTRACTION_POINTS}; shrink the box"
        )));
    }

    let beta_rat = BigRational::new(BigInt::from(beta_num), BigInt::from(beta_den));
    let psi_value = psi(d, k as u64, &beta_rat)?;
    let (log_v, log_w) = compute_vw(&surface, &bounds)?;
    let (primes, product) = select_primes(&surface, big_b, psi_value);

    // Global extraction (a fixed degree-one monomial when no points exist).
    let (aux, degree, basis) = if s == 0 {
        let basis = surface.non_leading_basis(1);
        let form = WeightedForm::monomial(
            surface.weights().clone(),
            basis[0].clone(),
            BigInt::one(),
        )?;
        (
            AuxiliaryForm {
                form,
                degree: 1,
                basis_size: basis.len() as u64,
            },
            None,
            basis,
        )
    } else {
        let aux = surface.extract_auxiliary_form(&points)?;
        let basis = surface.non_leading_basis(aux.degree);
        let degree = Some(aux.degree);
        (aux, degree, basis)
    };
    let verdicts = judge(&surface, &aux.form, &points, aux.degree);

    // Valuation certification at each selected prime within the cap.
    let verify_cap = max_verification_prime.unwrap_or(u64::MAX);
    let mut valuation_records = Vec::new();
    for &p in primes.iter().filter(|&&p| p <= verify_cap) {
        if s < 2 {
            continue;
        }
        let classes = classify(&surface, &points, p)?;
        let u_check = surface.minimal_excess_degree(s as u64 - 1); // H(u) >= s
        let check_basis: Vec<ExponentVector> = surface
            .non_leading_basis(u_check)
            .into_iter()
            .take(s)
            .collect();
        let matrix = surface.build_monomial_matrix(&points, &check_basis)?;
        valuation_records.push(verify_padic_divisibility(&matrix, p, &classes)?);
    }

    // One refinement stage: split on residue classes of the first prime.
    let mut refinements = Vec::new();
    if let Some(&p1) = primes.first() {
        if s > 0 {
            let mut classes: BTreeMap<ResiduePoint, Vec<LatticePoint>> = BTreeMap::new();
            for pt in &points {
                classes
                    .entry(surface.reduce_point(pt, p1)?)
                    .or_default()
                    .push(pt.clone());
            }
            for (rp, pts) in classes {
                let nonsingular = !surface.is_singular_mod_p(&rp, p1)?;
                let aux_c = surface.extract_auxiliary_form(&pts)?;
                let verdicts = judge(&surface, &aux_c.form, &pts, aux_c.degree);
                refinements.push(RefinementReport {
                    p: p1,
                    class_point: rp,
                    nonsingular,
                    points_used: pts.len() as u64,
                    degree: aux_c.degree,
                    auxiliary_form: aux_c.form,
                    verdicts,
                });
            }
        }
    }

    Ok(DetReport {
        f: surface.f().clone(),
        k,
        big_b,
        beta: format!("{beta_num}/{beta_den}"),
        weights: surface.weights().weights().to_vec(),
        bounds,
        v_cap_note,
        z_prime_only,
        psi: psi_value,
        log_v,
        log_w,
        selected_primes: primes,
        prime_product: product,
        points,
        points_used: s as u64,
        degree,
        basis,
        auxiliary_form: aux.form,
        verdicts,
        valuation_records,
        refinements,
    })
}

fn nominal_v_bound(big_b: u64, d: u64, k: u32, beta_num: u32, beta_den: u32) -> String {
    let exp_num = d as i64 * beta_den as i64 - k as i64 * beta_num as i64;
    if exp_num <= 0 {
        "<= 1".to_string()
    } else {
        integer_power_floor(big_b, exp_num as u32, beta_den).to_string()
    }
}

fn make_surface_checked(f: BinaryForm, k: u32) -> Result<SurfaceX> {
    super::make_surface(f, k)
}

fn classify(
    surface: &SurfaceX,
    points: &[LatticePoint],
    p: u64,
) -> Result<Vec<ResidueClass>> {
    let mut map: BTreeMap<ResiduePoint, u64> = BTreeMap::new();
    for pt in points {
        *map.entry(surface.reduce_point(pt, p)?).or_insert(0) += 1;
    }
    map.into_iter()
        .map(|(rp, count)| {
            Ok(ResidueClass {
                nonsingular: !surface.is_singular_mod_p(&rp, p)?,
                point: rp,
                count,
            })
        })
        .collect()
}

/// Resultant of the two dehomogenized binary forms; they are coprime
/// exactly when it is nonzero.
pub fn resultant_coprimality(f: &BinaryForm, g1: &BinaryForm) -> (BigInt, bool) {
    let r = resultant(&f.dehomogenize_x(), &g1.dehomogenize_x());
    let coprime = !r.is_zero();
    (r, coprime)
}
