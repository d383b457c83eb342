//! Acceptance suite: every release-gating property in one place, one
//! pass/fail line per criterion. Run with `--nocapture` to see the lines.

mod common;

use kfree_core::densities::density_binary;
use kfree_core::detmethod::{
    run_pipeline, valuation_bound_surface, verify_padic_divisibility, ResidueClass,
};
use kfree_core::exponents::{a_coeffs_surface, psi, psi_cmp_one, threshold_binary};
use kfree_core::sieve::{count_kfree, count_representable, m_decomposition};
use kfree_core::weighted_algebra::{BinaryForm, ExponentVector, WeightedForm};
use kfree_core::{make_surface, LatticePoint, SurfaceX};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::cmp::Ordering;

fn report(number: u32, label: &str, ok: bool) {
    println!(
        "acceptance {number:02} {label}: {}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "acceptance criterion {number:02} ({label}) failed");
}

fn f_x6_2y6() -> BinaryForm {
    BinaryForm::from_i64(&[1, 0, 0, 0, 0, 0, 2]).unwrap()
}

fn f_x3_2y3() -> BinaryForm {
    BinaryForm::from_i64(&[1, 0, 0, 2]).unwrap()
}

#[test]
fn acceptance_01_hilbert_matches_series_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    let mut ok = true;
    for _ in 0..100 {
        let ideal = common::random_ideal(&mut rng, 12);
        let series = common::hilbert_series(ideal.weights().weights(), ideal.degree(), 40);
        for u in 0..=40u64 {
            if ideal.hilbert_function(u) != series[u as usize] {
                ok = false;
            }
        }
    }
    report(1, "hilbert function equals series coefficients", ok);
}

#[test]
fn acceptance_02_sigma_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    let mut ok = true;
    for _ in 0..100 {
        let ideal = common::random_ideal(&mut rng, 12);
        let ws = ideal.weights().weights().to_vec();
        for u in 0..=40u64 {
            let h = ideal.hilbert_function(u);
            let mut acc = 0u64;
            for (m, &wm) in ws.iter().enumerate() {
                acc += wm * ideal.sigma(m, u).unwrap();
            }
            if acc != u * h {
                ok = false;
            }
        }
    }
    report(2, "weighted exponent sums equal u * hilbert", ok);
}

#[test]
fn acceptance_03_a_coefficient_normalization_and_surface_values() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xBADA55);
    let mut ok = true;
    for _ in 0..100 {
        let ideal = common::random_ideal(&mut rng, 12);
        let mut acc = BigRational::zero();
        for (m, &wm) in ideal.weights().weights().iter().enumerate() {
            acc += BigRational::from(BigInt::from(wm)) * ideal.a_coefficient(m).unwrap();
        }
        if !acc.is_one() {
            ok = false;
        }
    }
    // Closed-form surface values against the general coefficient formula.
    for d in 5..=30u64 {
        for k in 2..=(d - 1) / 2 {
            let coeffs: Vec<i64> = (0..=d)
                .map(|i| if i == 0 { 1 } else if i == d { 2 } else { 0 })
                .collect();
            let f = BinaryForm::from_i64(&coeffs).unwrap();
            let surface = make_surface(f, k as u32).unwrap();
            let ideal = surface.ideal();
            let closed = a_coeffs_surface(d, k).unwrap();
            for m in 0..4 {
                if ideal.a_coefficient(m).unwrap() != closed[m] {
                    ok = false;
                }
            }
        }
    }
    report(3, "a-coefficients normalize and match closed forms", ok);
}

#[test]
fn acceptance_04_sigma_ratio_convergence() {
    let surface = make_surface(f_x6_2y6(), 2).unwrap();
    let ideal = surface.ideal();
    let u = 200u64;
    let h = ideal.hilbert_function(u);
    let mut ok = true;
    for m in 0..4 {
        let sigma = ideal.sigma(m, u).unwrap();
        let ratio = sigma as f64 / (u as f64 * h as f64);
        let target = ideal.a_coefficient(m).unwrap().to_f64().unwrap();
        if (ratio - target).abs() > 0.05 {
            ok = false;
        }
    }
    report(4, "sigma ratios within 0.05 of limits at u = 200", ok);
}

/// Pool of surface points with z = 1 whose (x, y) residues mod p equal the
/// given class, drawn from coprime pairs in [1, span]^2.
fn class_pool(surface: &SurfaceX, p: u64, class: (u64, u64), span: u64) -> Vec<LatticePoint> {
    let mut pool = Vec::new();
    for x in 1..=span {
        for y in 1..=span {
            if num_integer::gcd(x, y) != 1 {
                continue;
            }
            if (x % p, y % p) != class {
                continue;
            }
            let v = surface.f().evaluate(&BigInt::from(x), &BigInt::from(y));
            pool.push(LatticePoint::new([
                BigInt::from(x),
                BigInt::from(y),
                v,
                BigInt::from(1),
            ]));
        }
    }
    pool
}

fn basis_of_size(surface: &SurfaceX, s: usize) -> Vec<ExponentVector> {
    let u = surface.minimal_excess_degree(s as u64 - 1); // least u with H(u) >= s
    surface.non_leading_basis(u).into_iter().take(s).collect()
}

#[test]
fn acceptance_05_divisibility_single_class() {
    let surface = make_surface(f_x6_2y6(), 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
    let mut ok = true;
    let mut nonzero_dets = 0u32;
    for case in 0..20 {
        let p = [5u64, 7, 11][case % 3];
        let class = loop {
            let a = rng.gen_range(0..p);
            let b = rng.gen_range(0..p);
            if (a, b) != (0, 0) {
                break (a, b);
            }
        };
        let pool = class_pool(&surface, p, class, 12 * p);
        let s = rng.gen_range(2..=8usize).min(pool.len());
        let mut points = Vec::new();
        let mut used = std::collections::BTreeSet::new();
        while points.len() < s {
            let i = rng.gen_range(0..pool.len());
            if used.insert(i) {
                points.push(pool[i].clone());
            }
        }
        let residue = surface.reduce_point(&points[0], p).unwrap();
        if surface.is_singular_mod_p(&residue, p).unwrap() {
            ok = false;
            continue;
        }
        let basis = basis_of_size(&surface, s);
        let matrix = surface.build_monomial_matrix(&points, &basis).unwrap();
        let record = verify_padic_divisibility(
            &matrix,
            p,
            &[ResidueClass {
                point: residue,
                count: s as u64,
                nonsingular: true,
            }],
        )
        .unwrap();
        if record.bound != valuation_bound_surface(s as u64) || !record.pass {
            ok = false;
        }
        if !record.determinant_zero {
            nonzero_dets += 1;
        }
    }
    println!("  ({nonzero_dets}/20 cases had a nonzero determinant)");
    report(5, "single-class determinant valuation bound", ok);
}

#[test]
fn acceptance_06_divisibility_combined_classes() {
    let surface = make_surface(f_x6_2y6(), 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0xFACADE);
    let mut ok = true;
    for case in 0..20 {
        let p = [5u64, 7, 11][case % 3];
        let class_count = rng.gen_range(2..=3usize);
        let mut classes = Vec::new();
        let mut points = Vec::new();
        let mut seen_classes = std::collections::BTreeSet::new();
        for _ in 0..class_count {
            let class = loop {
                let a = rng.gen_range(0..p);
                let b = rng.gen_range(0..p);
                if (a, b) != (0, 0) && seen_classes.insert((a, b)) {
                    break (a, b);
                }
            };
            let pool = class_pool(&surface, p, class, 12 * p);
            let s_p = rng.gen_range(1..=4usize).min(pool.len());
            let mut used = std::collections::BTreeSet::new();
            let mut class_points = Vec::new();
            while class_points.len() < s_p {
                let i = rng.gen_range(0..pool.len());
                if used.insert(i) {
                    class_points.push(pool[i].clone());
                }
            }
            let residue = surface.reduce_point(&class_points[0], p).unwrap();
            classes.push(ResidueClass {
                point: residue,
                count: s_p as u64,
                nonsingular: !surface.is_singular_mod_p(&residue, p).unwrap(),
            });
            points.extend(class_points);
        }
        let s = points.len();
        let basis = basis_of_size(&surface, s);
        let matrix = surface.build_monomial_matrix(&points, &basis).unwrap();
        let record = verify_padic_divisibility(&matrix, p, &classes).unwrap();
        let expected: u64 = classes
            .iter()
            .map(|c| valuation_bound_surface(c.count))
            .sum();
        if record.bound != expected || !record.pass {
            ok = false;
        }
    }
    report(6, "combined-class determinant valuation bound", ok);
}

#[test]
fn acceptance_07_pipeline_verdicts() {
    let report_run = run_pipeline(f_x6_2y6(), 2, 50, 2, 1, true, None).unwrap();
    let mut ok = report_run.all_pass();
    if let Some(u) = report_run.degree {
        if report_run
            .auxiliary_form
            .degree()
            .map(|d| d > u)
            .unwrap_or(true)
        {
            ok = false;
        }
    }
    // The same checks on a run that is guaranteed to produce points.
    let busy = run_pipeline(f_x6_2y6(), 2, 8, 0, 1, false, None).unwrap();
    if busy.points_used == 0 || !busy.all_pass() {
        ok = false;
    }
    report(7, "pipeline verdicts all pass", ok);
}

#[test]
fn acceptance_08_sieve_sandwich() {
    let forms = [
        BinaryForm::from_i64(&[1, 0, 1]).unwrap(),
        BinaryForm::from_i64(&[1, 0, 0, 2]).unwrap(),
    ];
    let mut ok = true;
    for f in &forms {
        for k in [2u32, 3] {
            for big_b in [50u64, 200, 500] {
                let rep = m_decomposition(f, k, big_b, None).unwrap();
                let n = count_kfree(f, k, big_b).unwrap();
                if !rep.sandwich_holds || rep.n_kfree != n || rep.m2 > rep.m1 {
                    ok = false;
                }
            }
        }
    }
    report(8, "m1/m2/m3 sandwich encloses the k-free count", ok);
}

#[test]
fn acceptance_09_density_matches_count() {
    let f = f_x3_2y3();
    let n = count_kfree(&f, 2, 1000).unwrap();
    let empirical = n as f64 / 1e6;
    let density = density_binary(&f, 2, 10_000).unwrap();
    let diff = (empirical - density.float_value).abs();
    println!("  (count/B^2 = {empirical:.6}, partial product = {:.6})", density.float_value);
    report(9, "truncated product within 0.02 of direct count", diff <= 0.02);
}

#[test]
fn acceptance_10_hand_checked_count() {
    let f = BinaryForm::from_i64(&[1, 0, 1]).unwrap();
    report(10, "count of squarefree values at B = 4", count_kfree(&f, 2, 4).unwrap() == 9);
}

#[test]
fn acceptance_11_point_count_shape() {
    let surface = make_surface(f_x6_2y6(), 2).unwrap();
    let d = 6f64;
    let mut ok = true;
    for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        let census = surface.count_fp_points(p).unwrap();
        let deviation = (census.n_p as f64 - (p * p) as f64).abs();
        if deviation > d * d * (p as f64).powf(1.5) {
            ok = false;
        }
    }
    report(11, "multiplicity-weighted counts near p^2", ok);
}

#[test]
fn acceptance_12_threshold_table() {
    let mut ok = true;
    for d in 6..=16u64 {
        // Evaluate the defining minimum in exact rationals.
        let branch_a = BigRational::new(BigInt::from(7 * d), BigInt::from(18));
        let branch_b = BigRational::from(BigInt::from((d + 1) / 2)) - BigRational::from(BigInt::from(2));
        let min = branch_a.min(branch_b);
        let expected = {
            let mut k = 2i64;
            while BigRational::from(BigInt::from(k)) <= min {
                k += 1;
            }
            k as u64
        };
        if threshold_binary(d) != expected {
            ok = false;
        }
    }
    // Degree-6 forms admit k = 6 up to d = 15 and not at d = 16.
    for d in 6..=15u64 {
        if threshold_binary(d) > 6 {
            ok = false;
        }
    }
    if threshold_binary(16) != 7 {
        ok = false;
    }
    report(12, "admissibility thresholds match the exact formula", ok);
}

#[test]
fn acceptance_13_exponent_boundary() {
    let beta2 = BigRational::from(BigInt::from(2));
    let mut ok = psi_cmp_one(18, 7, &beta2).unwrap() == Ordering::Equal;
    let v = psi(6, 2, &beta2).unwrap();
    if (v - 3.0 / 6f64.sqrt()).abs() > 1e-12 {
        ok = false;
    }
    report(13, "exponent equals 1 exactly on the boundary", ok);
}

#[test]
fn acceptance_14_euler_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xE01E4);
    let mut ok = true;
    let mut tested = 0;
    while tested < 200 {
        let w = loop {
            let len = rng.gen_range(2..=4);
            let ws: Vec<u64> = (0..len).map(|_| rng.gen_range(1..=4)).collect();
            break kfree_core::WeightVector::new(ws).unwrap();
        };
        let degree = rng.gen_range(1..=12);
        let Some(form) = common::random_form(&mut rng, &w, degree, 6) else {
            continue;
        };
        tested += 1;
        let d = form.degree().unwrap();
        // sum_i w_i x_i dF/dx_i must equal d * F as polynomials.
        let mut acc = WeightedForm::zero(w.clone());
        for i in 0..w.len() {
            let partial = form.partial(i).unwrap();
            if partial.is_zero() {
                continue;
            }
            let shifted: Vec<(ExponentVector, BigInt)> = partial
                .terms()
                .map(|(e, c)| {
                    let mut e = e.exponents().to_vec();
                    e[i] += 1;
                    (
                        ExponentVector::new(e),
                        c * BigInt::from(w.weights()[i]),
                    )
                })
                .collect();
            let term = WeightedForm::new(w.clone(), shifted).unwrap();
            acc = acc.try_add(&term).unwrap();
        }
        let scaled = WeightedForm::new(
            w.clone(),
            form.terms()
                .map(|(e, c)| (e.clone(), c * BigInt::from(d)))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        if acc != scaled {
            ok = false;
        }
    }
    report(14, "weighted euler identity on 200 random forms", ok);
}

#[test]
fn acceptance_15_representability_growth() {
    let f = f_x3_2y3();
    let mut ok = true;
    for big_b in [100u64, 1000, 10_000] {
        let cap = (big_b as f64).powf(1.0 / 3.0).ceil() as u64 + 2;
        let count = count_representable(&f, 2, big_b, cap).unwrap();
        let floor = 0.5 * (big_b as f64).powf(2.0 / 3.0);
        println!("  (B = {big_b}: {count} representable values, floor {floor:.1})");
        if (count as f64) < floor {
            ok = false;
        }
    }
    report(15, "representable value count grows like B^(2/3)", ok);
}

/// Every enumerated point re-verifies its defining constraints; kept here
/// so the acceptance binary exercises the invariant end to end.
#[test]
fn enumerated_points_reverify() {
    let surface = make_surface(f_x6_2y6(), 2).unwrap();
    let bounds = kfree_core::SearchBox::new(40, 40, BigInt::from(10u64).pow(9), 20).unwrap();
    let points = surface.enumerate_points(&bounds, true, &[]);
    for pt in &points {
        assert!(kfree_core::detmethod::is_on_surface(&surface, pt));
        assert!(num_integer::gcd(
            pt.x().to_i64().unwrap().unsigned_abs(),
            pt.y().to_i64().unwrap().unsigned_abs()
        ) == 1);
        assert!(pt.v().abs() <= bounds.bv);
        assert!(!pt.v().is_zero());
    }
}
