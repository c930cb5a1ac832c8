//! Dense SVD helpers shared by the solvers.

use nalgebra::{DMatrix, DVector};

/// Thin SVD `a = u diag(s) vt` via faer. nalgebra's bidiagonal QR iteration
/// occasionally returns factors that do not recompose `a` on the structured,
/// rank-deficient systems built here.
pub(crate) struct Svd {
    pub u: DMatrix<f64>,
    pub s: Vec<f64>,
    pub vt: DMatrix<f64>,
}

pub(crate) fn svd(a: &DMatrix<f64>) -> Svd {
    let (m, n) = a.shape();
    let fm = faer::Mat::<f64>::from_fn(m, n, |i, j| a[(i, j)]);
    let d = fm.thin_svd().expect("svd failed to converge");
    let (u, sv, v) = (d.U(), d.S(), d.V());
    let k = m.min(n);
    let sdiag = sv.column_vector();
    Svd {
        u: DMatrix::from_fn(m, k, |i, j| u[(i, j)]),
        s: (0..k).map(|i| sdiag[i]).collect(),
        vt: DMatrix::from_fn(k, n, |i, j| v[(j, i)]),
    }
}

/// Minimum-norm least-squares solution.
#[derive(Debug, Clone)]
pub struct Lstsq {
    pub x: DVector<f64>,
    pub rank: usize,
    /// Smallest retained singular value relative to the largest one.
    pub gap: f64,
    pub residual: DVector<f64>,
}

/// Solve `min |a x - b|` with the smallest-norm `x`, discarding singular
/// values below `rcond * sigma_max`.
pub fn lstsq_min_norm(a: &DMatrix<f64>, b: &DVector<f64>, rcond: f64) -> Lstsq {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return Lstsq {
            x: DVector::zeros(n),
            rank: 0,
            gap: 0.0,
            residual: -b.clone(),
        };
    }
    let d = svd(a);
    let smax = d.s.iter().cloned().fold(0.0, f64::max);
    let cut = rcond * smax;
    let mut x = DVector::zeros(n);
    let mut rank = 0;
    let mut smin_kept = f64::INFINITY;
    for (k, &s) in d.s.iter().enumerate() {
        if s > cut && s > 0.0 {
            rank += 1;
            smin_kept = smin_kept.min(s);
            let coef = d.u.column(k).dot(b) / s;
            x.axpy(coef, &d.vt.row(k).transpose(), 1.0);
        }
    }
    let residual = a * &x - b;
    let gap = if rank == 0 { 0.0 } else { smin_kept / smax };
    Lstsq {
        x,
        rank,
        gap,
        residual,
    }
}

/// Orthonormal basis (as columns) of the null space of `a`. Singular values
/// at or below `rel_tol * sigma_max` count as zero.
pub fn null_space(a: &DMatrix<f64>, rel_tol: f64) -> DMatrix<f64> {
    let (m, n) = a.shape();
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    // Pad to at least square so that the full right singular basis is returned.
    let padded = if m < n {
        let mut p = DMatrix::zeros(n, n);
        p.view_mut((0, 0), (m, n)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let d = svd(&padded);
    let smax = d.s.iter().cloned().fold(0.0, f64::max);
    let cut = rel_tol * smax;
    let cols: Vec<DVector<f64>> =
        d.s.iter()
            .enumerate()
            .filter(|(_, &s)| smax == 0.0 || s <= cut)
            .map(|(k, _)| d.vt.row(k).transpose())
            .collect();
    if cols.is_empty() {
        return DMatrix::zeros(n, 0);
    }
    DMatrix::from_columns(&cols)
}
