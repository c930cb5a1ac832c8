//! Systems whose coefficients vary with the point.
//!
//! Admissibility is checked pointwise by freezing the coefficients. Affine
//! coefficients `a^j_m(y) = a^j_m + sum_i d^{j,i}_m (y_i - x0_i)` carry extra
//! structure that can be validated exactly.

use std::sync::Arc;

use crate::admissibility::{solve_admissibility, AdmissibilityReport, CRConditionSet};
use crate::algebra::{AlgElem, AlgebraTable};
use crate::error::{Error, Result};
use crate::par::{map_slice, Exec};

type CoeffFn = dyn Fn(&[f64]) -> Vec<Vec<AlgElem>> + Send + Sync;

/// Affine coefficient data.
#[derive(Debug, Clone)]
pub struct AffineData {
    pub x0: Vec<f64>,
    /// `base[m][j]`
    pub base: Vec<Vec<AlgElem>>,
    /// `d[m][j][i]`, the coefficient of `y_i - x0_i` in `a^j_m`.
    pub d: Vec<Vec<Vec<AlgElem>>>,
}

/// Condition set whose coefficients are functions of the point.
#[derive(Clone)]
pub struct VarCRConditionSet {
    algebra: Arc<AlgebraTable>,
    n: usize,
    q: usize,
    coeffs: Arc<CoeffFn>,
    affine: Option<AffineData>,
}

impl std::fmt::Debug for VarCRConditionSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("VarCRConditionSet")
            .field("algebra", &self.algebra.name())
            .field("n", &self.n)
            .field("q", &self.q)
            .field("affine", &self.affine.is_some())
            .finish()
    }
}

impl VarCRConditionSet {
    /// `coeffs(y)[m][j]` is `a^j_m(y)`.
    pub fn new<F>(algebra: Arc<AlgebraTable>, n: usize, q: usize, coeffs: F) -> Self
    where
        F: Fn(&[f64]) -> Vec<Vec<AlgElem>> + Send + Sync + 'static,
    {
        VarCRConditionSet {
            algebra,
            n,
            q,
            coeffs: Arc::new(coeffs),
            affine: None,
        }
    }

    pub fn affine(algebra: Arc<AlgebraTable>, data: AffineData) -> Result<Self> {
        let q = data.base.len();
        let n = data.x0.len();
        let dim = algebra.dim();
        let shape_ok = data
            .base
            .iter()
            .all(|r| r.len() == n && r.iter().all(|e| e.dim() == dim))
            && data.d.len() == q
            && data.d.iter().all(|r| {
                r.len() == n
                    && r.iter()
                        .all(|c| c.len() == n && c.iter().all(|e| e.dim() == dim))
            });
        if !shape_ok {
            return Err(Error::DimensionMismatch(
                "affine data has inconsistent shape".into(),
            ));
        }
        let dd = data.clone();
        let coeffs = move |y: &[f64]| -> Vec<Vec<AlgElem>> {
            (0..q)
                .map(|m| {
                    (0..n)
                        .map(|j| {
                            let mut e = dd.base[m][j].clone();
                            for i in 0..n {
                                e.axpy(y[i] - dd.x0[i], &dd.d[m][j][i]);
                            }
                            e
                        })
                        .collect()
                })
                .collect()
        };
        let mut s = Self::new(algebra, n, q, coeffs);
        s.affine = Some(data);
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn affine_data(&self) -> Option<&AffineData> {
        self.affine.as_ref()
    }

    /// Freeze the coefficients at `y`.
    pub fn at(&self, y: &[f64]) -> Result<CRConditionSet> {
        if y.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates, n = {}",
                y.len(),
                self.n
            )));
        }
        CRConditionSet::new(self.algebra.clone(), self.n, self.q, (self.coeffs)(y))
    }
}

/// Solve the frozen system at every point; failures are reported per point.
pub fn pointwise_admissibility(
    cs: &VarCRConditionSet,
    points: &[Vec<f64>],
    tol: f64,
    exec: Exec,
) -> Vec<Result<AdmissibilityReport>> {
    map_slice(exec, points, |y| {
        cs.at(y).and_then(|c| solve_admissibility(&c, tol))
    })
}

/// Result of [`validate_affine`].
#[derive(Debug, Clone, PartialEq)]
pub struct AffineValidation {
    pub antisymmetric: bool,
    pub diagonal_uniform: bool,
    /// Common diagonal value `d_m`, when uniform.
    pub diagonal: Option<Vec<AlgElem>>,
}

impl AffineValidation {
    pub fn holds(&self) -> bool {
        self.antisymmetric && self.diagonal_uniform
    }
}

/// Check `d^{j,i}_m + d^{i,j}_m = 0` for `i != j` and that `d^{j,j}_m`
/// does not depend on `j`. Comparisons are exact.
pub fn validate_affine(cs: &VarCRConditionSet) -> Result<AffineValidation> {
    let data = cs.affine.as_ref().ok_or(Error::NoAffineData)?;
    let n = cs.n;
    let mut antisymmetric = true;
    let mut diagonal_uniform = true;
    for dm in &data.d {
        for j in 0..n {
            for i in (j + 1)..n {
                if dm[j][i].add(&dm[i][j]).0.iter().any(|v| *v != 0.0) {
                    antisymmetric = false;
                }
            }
            if dm[j][j] != dm[0][0] {
                diagonal_uniform = false;
            }
        }
    }
    let diagonal = diagonal_uniform.then(|| data.d.iter().map(|dm| dm[0][0].clone()).collect());
    Ok(AffineValidation {
        antisymmetric,
        diagonal_uniform,
        diagonal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra;

    #[test]
    fn at_checks_dimension() {
        let c = Arc::new(algebra::complex());
        let cc = c.clone();
        let v = VarCRConditionSet::new(c, 2, 1, move |_| vec![vec![cc.unit(), cc.e(1)]]);
        assert!(v.at(&[0.0]).is_err());
        assert!(v.at(&[0.0, 1.0]).is_ok());
    }

    #[test]
    fn no_affine_data() {
        let c = Arc::new(algebra::complex());
        let cc = c.clone();
        let v = VarCRConditionSet::new(c, 2, 1, move |_| vec![vec![cc.unit(), cc.e(1)]]);
        assert_eq!(validate_affine(&v).unwrap_err(), Error::NoAffineData);
    }
}
