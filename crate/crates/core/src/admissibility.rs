//! Admissibility of first-order systems: existence of a linear kernel `phi`
//! making the Cauchy form closed.
//!
//! A condition set is `q` operators `sum_j (df/dx_j) a^j_m`, `m = 0..q`,
//! in `n` real variables. The kernel is `phi_m(x, y) = sum_i b^i_m (y_i - x_i)`
//! and admissibility asks for `b` with
//!
//! ```text
//! sum_m a^j_m b^j_m                  = kappa e_0     (every j)
//! sum_m a^j_m b^i_m + a^i_m b^j_m    = 0             (i != j)
//! ```
//!
//! where `kappa = 1 / (n |B_n|)`. The system is linear in `b`.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgElem, AlgebraTable};
use crate::error::{Error, Result};
use crate::linalg::lstsq_min_norm;
use crate::verify::ball_volume;

/// Default feasibility threshold on the normalized residual.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Relative singular-value cutoff used by the least-squares solve.
pub const RCOND: f64 = 1e-10;

/// `1 / (n |B_n|)`.
pub fn kappa(n: usize) -> f64 {
    1.0 / (n as f64 * ball_volume(n))
}

/// `q` first-order operators in `n` variables with coefficients `a[m][j]`.
#[derive(Debug, Clone)]
pub struct CRConditionSet {
    algebra: Arc<AlgebraTable>,
    n: usize,
    q: usize,
    a: Vec<Vec<AlgElem>>,
}

impl CRConditionSet {
    /// `a[m][j]` is the coefficient of `df/dx_j` in operator `m`.
    pub fn new(
        algebra: Arc<AlgebraTable>,
        n: usize,
        q: usize,
        a: Vec<Vec<AlgElem>>,
    ) -> Result<Self> {
        if n == 0 || q == 0 {
            return Err(Error::DimensionMismatch("n and q must be positive".into()));
        }
        if a.len() != q {
            return Err(Error::DimensionMismatch(format!(
                "{} operators given, q = {q}",
                a.len()
            )));
        }
        for (m, row) in a.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "operator {m} has {} coefficients, n = {n}",
                    row.len()
                )));
            }
            if let Some(e) = row.iter().find(|e| e.dim() != algebra.dim()) {
                return Err(Error::DimensionMismatch(format!(
                    "coefficient has {} coordinates, algebra dimension is {}",
                    e.dim(),
                    algebra.dim()
                )));
            }
        }
        Ok(CRConditionSet { algebra, n, q, a })
    }

    /// Single operator `sum_j (df/dx_j) a^j`.
    pub fn single(algebra: Arc<AlgebraTable>, coeffs: Vec<AlgElem>) -> Result<Self> {
        let n = coeffs.len();
        Self::new(algebra, n, 1, vec![coeffs])
    }

    /// `df/dx_1 + (df/dx_2) i` on the complex numbers.
    pub fn dbar() -> Self {
        let c = Arc::new(crate::algebra::complex());
        let coeffs = vec![c.unit(), c.e(1)];
        Self::single(c, coeffs).expect("valid")
    }

    /// `df/dx_0 + (df/dx_1) i + (df/dx_2) j + (df/dx_3) k` on the quaternions.
    pub fn fueter() -> Self {
        let h = Arc::new(crate::algebra::quaternions());
        let coeffs = (0..4).map(|k| h.e(k)).collect();
        Self::single(h, coeffs).expect("valid")
    }

    /// Conditions characterizing differentiability over the algebra itself:
    /// `n = dim`, `q = dim - 1`, operator `m` is `(df/dx_m) - (df/dx_0) e_m`.
    pub fn a_differentiable(algebra: Arc<AlgebraTable>) -> Result<Self> {
        let d = algebra.dim();
        if d < 2 {
            return Err(Error::DimensionMismatch("need dimension at least 2".into()));
        }
        let a = (1..d)
            .map(|m| {
                (0..d)
                    .map(|j| {
                        if j == 0 {
                            algebra.e(m).neg()
                        } else if j == m {
                            algebra.unit()
                        } else {
                            algebra.zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Self::new(algebra, d, d - 1, a)
    }

    /// Single operator `sum_j (df/dx_j) e_j` for algebras whose non-unit basis
    /// elements square to `-e_0` and pairwise anticommute.
    pub fn anticommuting_single(algebra: Arc<AlgebraTable>) -> Result<Self> {
        let defect = algebra.anticommuting_defect();
        if defect > crate::algebra::TABLE_TOL {
            return Err(Error::BasisNotAnticommuting(defect));
        }
        let coeffs = (0..algebra.dim()).map(|k| algebra.e(k)).collect();
        Self::single(algebra, coeffs)
    }

    /// Block-diagonal extension: `copies` independent copies of the system,
    /// copy `l` acting on variables `l*n .. (l+1)*n`.
    pub fn induced(&self, copies: usize) -> Result<Self> {
        if copies == 0 {
            return Err(Error::DimensionMismatch("copies must be positive".into()));
        }
        let (n, q) = (self.n, self.q);
        let mut a = Vec::with_capacity(q * copies);
        for l in 0..copies {
            for m in 0..q {
                let mut row = vec![self.algebra.zero(); n * copies];
                for j in 0..n {
                    row[l * n + j] = self.a[m][j].clone();
                }
                a.push(row);
            }
        }
        Self::new(self.algebra.clone(), n * copies, q * copies, a)
    }

    pub fn algebra(&self) -> &Arc<AlgebraTable> {
        &self.algebra
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// Coefficient `a^j_m`.
    pub fn a(&self, m: usize, j: usize) -> &AlgElem {
        &self.a[m][j]
    }

    pub fn coefficients(&self) -> &[Vec<AlgElem>] {
        &self.a
    }

    /// Apply the operators to a set of partial derivatives `df[j]`.
    pub fn apply(&self, df: &[AlgElem]) -> Vec<AlgElem> {
        (0..self.q)
            .map(|m| {
                let mut s = self.algebra.zero();
                for j in 0..self.n {
                    s = s.add(&self.algebra.mul(&df[j], &self.a[m][j]));
                }
                s
            })
            .collect()
    }
}

/// Solved kernel `phi_m(x, y) = sum_i b^i_m (y_i - x_i)`.
#[derive(Debug, Clone)]
pub struct KernelSolution {
    pub conditions: CRConditionSet,
    /// `b[m][i]`
    pub b: Vec<Vec<AlgElem>>,
    /// `c[j][i] = |B_n| sum_m a^j_m b^i_m`
    pub c: Vec<Vec<AlgElem>>,
    pub kappa: f64,
    /// Largest cond12 violation relative to `kappa`.
    pub residual: f64,
    /// Dimension of the affine family of admissible `b`.
    pub nullity: usize,
}

impl KernelSolution {
    /// Wrap a given `b`, computing `c` and the residual.
    pub fn from_b(conditions: CRConditionSet, b: Vec<Vec<AlgElem>>, nullity: usize) -> Self {
        let n = conditions.n;
        let k = kappa(n);
        let vol = ball_volume(n);
        let c = compute_c(&conditions, &b, vol);
        let residual = cond12_residual(&conditions, &b);
        KernelSolution {
            conditions,
            b,
            c,
            kappa: k,
            residual,
            nullity,
        }
    }

    pub fn b(&self, m: usize, i: usize) -> &AlgElem {
        &self.b[m][i]
    }
}

fn compute_c(cs: &CRConditionSet, b: &[Vec<AlgElem>], vol: f64) -> Vec<Vec<AlgElem>> {
    let alg = &cs.algebra;
    (0..cs.n)
        .map(|j| {
            (0..cs.n)
                .map(|i| {
                    let mut s = alg.zero();
                    for m in 0..cs.q {
                        s = s.add(&alg.mul(&cs.a[m][j], &b[m][i]));
                    }
                    s.scale(vol)
                })
                .collect()
        })
        .collect()
}

/// Largest deviation from the cond12 identities, divided by `kappa`.
pub fn cond12_residual(cs: &CRConditionSet, b: &[Vec<AlgElem>]) -> f64 {
    let alg = &cs.algebra;
    let k = kappa(cs.n);
    let mut worst: f64 = 0.0;
    for i in 0..cs.n {
        for j in i..cs.n {
            let mut s = alg.zero();
            for m in 0..cs.q {
                if i == j {
                    s = s.add(&alg.mul(&cs.a[m][j], &b[m][j]));
                } else {
                    s = s
                        .add(&alg.mul(&cs.a[m][j], &b[m][i]))
                        .add(&alg.mul(&cs.a[m][i], &b[m][j]));
                }
            }
            if i == j {
                s.0[0] -= k;
            }
            worst = worst.max(s.max_abs());
        }
    }
    worst / k
}

/// Outcome of the admissibility solve.
#[derive(Debug, Clone)]
pub struct AdmissibilityReport {
    pub feasible: bool,
    /// Relative residual of the row-normalized least-squares problem.
    pub residual: f64,
    pub free_dim: usize,
    pub rank: usize,
    /// Minimum-norm least-squares kernel; meaningful only when feasible.
    pub solution: KernelSolution,
}

#[inline]
fn unknown(dim: usize, q: usize, i: usize, m: usize, s: usize) -> usize {
    (i * q + m) * dim + s
}

/// Dense cond12 system `M x = r` over the coordinates of `b`.
pub fn assemble_system(cs: &CRConditionSet) -> (DMatrix<f64>, DVector<f64>) {
    let (n, q, d) = (cs.n, cs.q, cs.dim());
    let alg = &cs.algebra;
    let rows = n * (n + 1) / 2 * d;
    let cols = q * n * d;
    let mut mat = DMatrix::zeros(rows, cols);
    let mut rhs = DVector::zeros(rows);
    let k = kappa(n);
    let lm: Vec<Vec<DMatrix<f64>>> = (0..q)
        .map(|m| (0..n).map(|j| alg.left_mul_matrix(&cs.a[m][j])).collect())
        .collect();
    let mut block = 0;
    for i in 0..n {
        for j in i..n {
            let r0 = block * d;
            for m in 0..q {
                if i == j {
                    let c0 = unknown(d, q, j, m, 0);
                    let mut v = mat.view_mut((r0, c0), (d, d));
                    v += &lm[m][j];
                } else {
                    let c0 = unknown(d, q, i, m, 0);
                    let mut v = mat.view_mut((r0, c0), (d, d));
                    v += &lm[m][j];
                    let c1 = unknown(d, q, j, m, 0);
                    let mut w = mat.view_mut((r0, c1), (d, d));
                    w += &lm[m][i];
                }
            }
            if i == j {
                rhs[r0] = k;
            }
            block += 1;
        }
    }
    (mat, rhs)
}

/// Minimum-norm least-squares solve of the cond12 system.
///
/// Feasible when the relative residual of the row-normalized system is at
/// most `tol`. Residuals in `(tol, 1e3 tol)` are reported as
/// [`Error::IllConditioned`].
pub fn solve_admissibility(cs: &CRConditionSet, tol: f64) -> Result<AdmissibilityReport> {
    let (n, q, d) = (cs.n, cs.q, cs.dim());
    let (mut mat, mut rhs) = assemble_system(cs);
    for r in 0..mat.nrows() {
        let norm = mat.row(r).norm();
        if norm > 0.0 {
            mat.row_mut(r).scale_mut(1.0 / norm);
            rhs[r] /= norm;
        }
    }
    let sol = lstsq_min_norm(&mat, &rhs, RCOND);
    let residual = sol.residual.norm() / rhs.norm();
    if residual > tol && residual < 1e3 * tol {
        return Err(Error::IllConditioned {
            residual,
            gap: sol.gap,
        });
    }
    let b: Vec<Vec<AlgElem>> = (0..q)
        .map(|m| {
            (0..n)
                .map(|i| {
                    let s = unknown(d, q, i, m, 0);
                    AlgElem(sol.x.as_slice()[s..s + d].to_vec())
                })
                .collect()
        })
        .collect();
    let free_dim = q * n * d - sol.rank;
    let solution = KernelSolution::from_b(cs.clone(), b, free_dim);
    Ok(AdmissibilityReport {
        feasible: residual <= tol,
        residual,
        free_dim,
        rank: sol.rank,
        solution,
    })
}

/// Result of [`check_ellipticity`].
#[derive(Debug, Clone, Serialize)]
pub struct EllipticityReport {
    /// `sum_m P_m(X) Q_m(X) = kappa |X|^2 e_0` holds coefficient-wise.
    pub identity_holds: bool,
    pub worst_coefficient: f64,
    /// Minimum of `sum_m |P_m(X)|^2` over the unit-sphere sample.
    pub min_symbol_norm: f64,
    /// Minimum over the sample of the smallest singular value of
    /// `v -> (v P_m(X))_m`.
    pub min_symbol_injectivity: f64,
}

/// Check the symbol identity `sum_m P_m(X) Q_m(X) = kappa |X|^2 e_0` with
/// `P_m = sum_j a^j_m X_j` and `Q_m = sum_j b^j_m X_j`.
pub fn check_ellipticity(
    sol: &KernelSolution,
    samples: usize,
    seed: u64,
    tol: f64,
) -> EllipticityReport {
    let cs = &sol.conditions;
    let alg = &cs.algebra;
    let mut worst = sol.residual;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_norm = f64::INFINITY;
    let mut min_inj = f64::INFINITY;
    for _ in 0..samples.max(1) {
        let mut x: Vec<f64> = (0..cs.n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        x.iter_mut().for_each(|v| *v /= r);
        let mut total = 0.0;
        let mut stacked = DMatrix::zeros(cs.q * alg.dim(), alg.dim());
        let mut pq = alg.scalar(-sol.kappa);
        for m in 0..cs.q {
            let mut p = alg.zero();
            let mut qm = alg.zero();
            for j in 0..cs.n {
                p.axpy(x[j], &cs.a[m][j]);
                qm.axpy(x[j], &sol.b[m][j]);
            }
            pq = pq.add(&alg.mul(&p, &qm));
            total += p.norm().powi(2);
            let rm = alg.right_mul_matrix(&p);
            stacked
                .view_mut((m * alg.dim(), 0), (alg.dim(), alg.dim()))
                .copy_from(&rm);
        }
        worst = worst.max(pq.max_abs() / sol.kappa);
        min_norm = min_norm.min(total);
        let sv = stacked.singular_values();
        min_inj = min_inj.min(sv.min());
    }
    EllipticityReport {
        identity_holds: worst <= tol,
        worst_coefficient: worst,
        min_symbol_norm: min_norm,
        min_symbol_injectivity: min_inj,
    }
}

/// Algebra-valued determinant by Laplace expansion along the first column.
pub fn algebra_det(alg: &AlgebraTable, m: &[Vec<AlgElem>]) -> AlgElem {
    let k = m.len();
    if k == 0 {
        return alg.unit();
    }
    if k == 1 {
        return m[0][0].clone();
    }
    let mut s = alg.zero();
    for r in 0..k {
        let minor: Vec<Vec<AlgElem>> = (0..k)
            .filter(|&rr| rr != r)
            .map(|rr| m[rr][1..].to_vec())
            .collect();
        let term = alg.mul(&m[r][0], &algebra_det(alg, &minor));
        if r % 2 == 0 {
            s = s.add(&term);
        } else {
            s = s.sub(&term);
        }
    }
    s
}

/// Result of [`commutative_condition_a`].
#[derive(Debug, Clone)]
pub struct ConditionAReport {
    pub principal_rows: Vec<usize>,
    pub d0: AlgElem,
    /// `minors[k][m]`: `D_0` with principal row `m` deleted and the `k`-th
    /// remaining row appended at the bottom.
    pub minors: Vec<Vec<AlgElem>>,
    pub max_violation: f64,
    pub holds: bool,
    /// Kernel from the closed-form construction, when the conditions hold.
    pub kernel: Option<KernelSolution>,
    /// Feasibility from [`solve_admissibility`] on the same set.
    pub lsq_feasible: bool,
    pub agrees: bool,
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Determinantal admissibility test for commutative algebras.
///
/// With `A~[j][m] = a^j_m`, `D_0` the determinant of the principal rows and
/// `D^k_m` as in [`ConditionAReport::minors`], the set is admissible iff
/// `sum_m D^l_m D^k_m + delta_lk D_0^2 = 0` for all non-principal `k, l`.
/// When it holds, `b` is built by Cramer's rule.
pub fn commutative_condition_a(
    cs: &CRConditionSet,
    principal_rows: Option<&[usize]>,
    tol: f64,
) -> Result<ConditionAReport> {
    let alg = cs.algebra.clone();
    if !alg.is_commutative() {
        return Err(Error::NotCommutative(alg.commutativity_defect()));
    }
    let (n, q) = (cs.n, cs.q);
    if q > n {
        return Err(Error::DimensionMismatch("q exceeds n".into()));
    }
    // A~ is n x q.
    let at: Vec<Vec<AlgElem>> = (0..n)
        .map(|j| (0..q).map(|m| cs.a[m][j].clone()).collect())
        .collect();
    let rows_of =
        |idx: &[usize]| -> Vec<Vec<AlgElem>> { idx.iter().map(|&r| at[r].clone()).collect() };

    let (prin, d0, d0_inv) = match principal_rows {
        Some(p) => {
            if p.len() != q || p.iter().any(|&r| r >= n) {
                return Err(Error::DimensionMismatch(
                    "principal rows must be q distinct row indices".into(),
                ));
            }
            let d0 = algebra_det(&alg, &rows_of(p));
            let inv = alg
                .try_invert(&d0)
                .map_err(|_| Error::SingularPrincipalMinor)?;
            (p.to_vec(), d0, inv)
        }
        None => {
            let mut found = None;
            for p in combinations(n, q) {
                let d0 = algebra_det(&alg, &rows_of(&p));
                if let Ok(inv) = alg.try_invert(&d0) {
                    found = Some((p, d0, inv));
                    break;
                }
            }
            found.ok_or(Error::SingularPrincipalMinor)?
        }
    };
    let others: Vec<usize> = (0..n).filter(|r| !prin.contains(r)).collect();
    let p_rows = rows_of(&prin);

    // Minors as stated: delete principal row m, append the new row at the bottom.
    let minors: Vec<Vec<AlgElem>> = others
        .iter()
        .map(|&k| {
            (0..q)
                .map(|m| {
                    let mut rows: Vec<Vec<AlgElem>> = (0..q)
                        .filter(|&r| r != m)
                        .map(|r| p_rows[r].clone())
                        .collect();
                    rows.push(at[k].clone());
                    algebra_det(&alg, &rows)
                })
                .collect()
        })
        .collect();

    let d0sq = alg.mul(&d0, &d0);
    let scale = d0sq.max_abs().max(f64::MIN_POSITIVE);
    let mut worst: f64 = 0.0;
    for l in 0..others.len() {
        for k in 0..others.len() {
            let mut s = if l == k { d0sq.clone() } else { alg.zero() };
            for m in 0..q {
                s = s.add(&alg.mul(&minors[l][m], &minors[k][m]));
            }
            worst = worst.max(s.max_abs() / scale);
        }
    }
    let holds = worst <= tol;

    let kernel = if holds {
        Some(condition_a_kernel(
            cs, &at, &prin, &others, &p_rows, &d0_inv,
        ))
    } else {
        None
    };
    let lsq_feasible = match solve_admissibility(cs, tol) {
        Ok(r) => r.feasible,
        Err(Error::IllConditioned { .. }) => false,
        Err(e) => return Err(e),
    };
    Ok(ConditionAReport {
        principal_rows: prin,
        d0,
        minors,
        max_violation: worst,
        holds,
        kernel,
        lsq_feasible,
        agrees: holds == lsq_feasible,
    })
}

fn condition_a_kernel(
    cs: &CRConditionSet,
    at: &[Vec<AlgElem>],
    prin: &[usize],
    others: &[usize],
    p_rows: &[Vec<AlgElem>],
    d0_inv: &AlgElem,
) -> KernelSolution {
    let alg = &cs.algebra;
    let (n, q) = (cs.n, cs.q);
    let vol = ball_volume(n);
    let inv_n = 1.0 / n as f64;
    // G = A~_N A~_P^{-1} via Cramer with in-place row replacement.
    let g: Vec<Vec<AlgElem>> = others
        .iter()
        .map(|&k| {
            (0..q)
                .map(|m| {
                    let mut rows = p_rows.to_vec();
                    rows[m] = at[k].clone();
                    alg.mul(&algebra_det(alg, &rows), d0_inv)
                })
                .collect()
        })
        .collect();
    // A~_P^{-1}[m][l] = (-1)^{l+m} minor(l, m) / D_0
    let pinv: Vec<Vec<AlgElem>> = (0..q)
        .map(|m| {
            (0..q)
                .map(|l| {
                    let minor: Vec<Vec<AlgElem>> = (0..q)
                        .filter(|&r| r != l)
                        .map(|r| {
                            (0..q)
                                .filter(|&c| c != m)
                                .map(|c| p_rows[r][c].clone())
                                .collect()
                        })
                        .collect();
                    let v = alg.mul(&algebra_det(alg, &minor), d0_inv);
                    if (l + m) % 2 == 0 {
                        v
                    } else {
                        v.neg()
                    }
                })
                .collect()
        })
        .collect();
    // Column i of C restricted to the principal rows: C_PP = I/n, C_PN = -G^T/n.
    let c_p = |l: usize, i: usize| -> AlgElem {
        if let Some(pi) = prin.iter().position(|&r| r == i) {
            if pi == l {
                alg.scalar(inv_n)
            } else {
                alg.zero()
            }
        } else {
            let k = others.iter().position(|&r| r == i).expect("row index");
            g[k][l].scale(-inv_n)
        }
    };
    let b: Vec<Vec<AlgElem>> = (0..q)
        .map(|m| {
            (0..n)
                .map(|i| {
                    let mut s = alg.zero();
                    for l in 0..q {
                        s = s.add(&alg.mul(&pinv[m][l], &c_p(l, i)));
                    }
                    s.scale(1.0 / vol)
                })
                .collect()
        })
        .collect();
    let nullity = 0;
    KernelSolution::from_b(cs.clone(), b, nullity)
}

/// On-disk form of a condition set.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConditionFile {
    #[serde(default)]
    pub schema_version: Option<u32>,
    /// Built-in algebra name or path to an algebra file.
    pub algebra: String,
    pub n: usize,
    pub q: usize,
    /// `a[m][j]` as coordinate vectors.
    pub a: Vec<Vec<Vec<f64>>>,
}

impl ConditionFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("{} at line {}, column {}", e, e.line(), e.column())))
    }

    pub fn into_conditions(self, algebra: Arc<AlgebraTable>) -> Result<CRConditionSet> {
        let a = self
            .a
            .into_iter()
            .map(|row| row.into_iter().map(AlgElem).collect())
            .collect();
        CRConditionSet::new(algebra, self.n, self.q, a)
    }

    pub fn from_conditions(cs: &CRConditionSet, algebra_ref: &str) -> Self {
        ConditionFile {
            schema_version: Some(crate::SCHEMA_VERSION),
            algebra: algebra_ref.to_string(),
            n: cs.n,
            q: cs.q,
            a: cs
                .a
                .iter()
                .map(|row| row.iter().map(|e| e.0.clone()).collect())
                .collect(),
        }
    }
}

/// Serializable summary of an admissibility solve.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportFile {
    pub schema_version: u32,
    pub feasible: bool,
    pub residual: f64,
    pub free_dim: usize,
    /// `b[m][i]`
    pub b: Vec<Vec<Vec<f64>>>,
    /// `c[j][i]`
    pub c: Vec<Vec<Vec<f64>>>,
}

impl From<&AdmissibilityReport> for ReportFile {
    fn from(r: &AdmissibilityReport) -> Self {
        let coords = |v: &Vec<Vec<AlgElem>>| -> Vec<Vec<Vec<f64>>> {
            v.iter()
                .map(|row| row.iter().map(|e| e.0.clone()).collect())
                .collect()
        };
        ReportFile {
            schema_version: crate::SCHEMA_VERSION,
            feasible: r.feasible,
            residual: r.residual,
            free_dim: r.free_dim,
            b: coords(&r.solution.b),
            c: coords(&r.solution.c),
        }
    }
}
