//! Construction of the auxiliary form: pick the least degree with more
//! surviving monomials than points, evaluate, and read off an exact
//! integer kernel vector. Because the basis avoids every multiple of the
//! leading monomial of the defining form, the resulting form can never be
//! a multiple of it.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use super::{LatticePoint, SurfaceX};
use crate::error::{Error, Result};
use crate::hilbert::PrincipalIdeal;
use crate::linalg::kernel_vector;
use crate::weighted_algebra::{enumerate_monomials, ExponentVector, WeightedForm};

/// The extracted form together with the degree and basis that produced it.
#[derive(Debug, Clone, Serialize)]
pub struct AuxiliaryForm {
    pub form: WeightedForm,
    pub degree: u64,
    pub basis_size: u64,
}

impl SurfaceX {
    /// Monomials of weighted degree `u` outside the leading-term ideal,
    /// sorted descending under the graded order.
    pub fn non_leading_basis(&self, u: u64) -> Vec<ExponentVector> {
        let lead = self
            .form()
            .leading_term()
            .expect("surface form is nonzero")
            .0
            .clone();
        enumerate_monomials(self.weights(), u)
            .into_iter()
            .filter(|e| !lead.divides(e))
            .collect()
    }

    /// The ideal generated by the defining form.
    pub fn ideal(&self) -> PrincipalIdeal {
        PrincipalIdeal::new(self.form().clone()).expect("surface form is nonzero")
    }

    /// Least `u` with strictly more surviving monomials than `target`.
    pub fn minimal_excess_degree(&self, target: u64) -> u64 {
        let ideal = self.ideal();
        let mut u = 0u64;
        loop {
            if ideal.hilbert_function(u) > target {
                return u;
            }
            u += 1;
        }
    }

    /// A primitive integer form of minimal basis degree vanishing at every
    /// given point, not divisible by the defining form. The kernel vector
    /// comes from the first rank-deficient column of the evaluation matrix,
    /// normalized primitive with positive leading coefficient, so the
    /// output is deterministic.
    pub fn extract_auxiliary_form(&self, points: &[LatticePoint]) -> Result<AuxiliaryForm> {
        if points.is_empty() {
            return Err(Error::Domain(
                "auxiliary extraction needs at least one point".into(),
            ));
        }
        let s = points.len() as u64;
        let u = self.minimal_excess_degree(s);
        let basis = self.non_leading_basis(u);
        debug_assert!(basis.len() as u64 > s);
        let matrix = self.build_monomial_matrix(points, &basis)?;
        let rows = matrix.rows_by_points();
        let kernel = kernel_vector(&rows).ok_or_else(|| {
            Error::Domain("evaluation matrix unexpectedly has full column rank".into())
        })?;
        let terms: Vec<(ExponentVector, BigInt)> = basis
            .iter()
            .cloned()
            .zip(kernel)
            .filter(|(_, c)| !c.is_zero())
            .collect();
        let form = WeightedForm::new(self.weights().clone(), terms)?;
        debug_assert!(!form.is_zero());
        Ok(AuxiliaryForm {
            form,
            degree: u,
            basis_size: basis.len() as u64,
        })
    }
}
