//! The Cauchy kernel `Phi^j(y; x) = sum_m a^j_m phi_m(x, y) / |y - x|^n`.

use crate::admissibility::KernelSolution;
use crate::algebra::{AlgElem, AlgebraTable};
use crate::error::{Error, Result};

/// Step used by the finite-difference closedness check.
pub const FD_STEP: f64 = 1e-5;

/// Kernel built from an admissible [`KernelSolution`].
#[derive(Debug, Clone)]
pub struct CauchyKernel {
    sol: KernelSolution,
    /// `w[j][i] = sum_m a^j_m b^i_m`
    w: Vec<Vec<AlgElem>>,
}

fn diff(x: &[f64], y: &[f64]) -> Result<(Vec<f64>, f64)> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch(format!(
            "points have {} and {} coordinates",
            x.len(),
            y.len()
        )));
    }
    let d: Vec<f64> = y.iter().zip(x).map(|(a, b)| a - b).collect();
    let r = d.iter().map(|v| v * v).sum::<f64>().sqrt();
    let scale = 1.0 + x.iter().chain(y).fold(0.0f64, |m, v| m.max(v.abs()));
    if r <= 1e-14 * scale {
        return Err(Error::OnDiagonal);
    }
    Ok((d, r))
}

impl CauchyKernel {
    pub fn new(sol: KernelSolution) -> Self {
        let cs = &sol.conditions;
        let alg = cs.algebra();
        let w = (0..cs.n())
            .map(|j| {
                (0..cs.n())
                    .map(|i| {
                        let mut s = alg.zero();
                        for m in 0..cs.q() {
                            s = s.add(&alg.mul(cs.a(m, j), &sol.b[m][i]));
                        }
                        s
                    })
                    .collect()
            })
            .collect();
        CauchyKernel { sol, w }
    }

    pub fn solution(&self) -> &KernelSolution {
        &self.sol
    }

    pub fn algebra(&self) -> &AlgebraTable {
        self.sol.conditions.algebra()
    }

    pub fn n(&self) -> usize {
        self.sol.conditions.n()
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n() {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates, kernel has n = {}",
                x.len(),
                self.n()
            )));
        }
        Ok(())
    }

    /// `phi_m(x, y)` for every `m`.
    pub fn phi(&self, x: &[f64], y: &[f64]) -> Result<Vec<AlgElem>> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        Ok(self.phi_of_diff(&y.iter().zip(x).map(|(a, b)| a - b).collect::<Vec<_>>()))
    }

    /// `phi_m` as a function of `d = y - x`.
    pub fn phi_of_diff(&self, d: &[f64]) -> Vec<AlgElem> {
        let alg = self.algebra();
        self.sol
            .b
            .iter()
            .map(|bm| {
                let mut s = alg.zero();
                for (bi, di) in bm.iter().zip(d) {
                    s.axpy(*di, bi);
                }
                s
            })
            .collect()
    }

    /// Components `Phi^j(y; x)`, `j = 0..n`.
    pub fn kernel_field(&self, x: &[f64], y: &[f64]) -> Result<Vec<AlgElem>> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        let (d, r) = diff(x, y)?;
        let alg = self.algebra();
        let cs = &self.sol.conditions;
        let phi = self.phi_of_diff(&d);
        let rn = r.powi(self.n() as i32);
        Ok((0..self.n())
            .map(|j| {
                let mut s = alg.zero();
                for m in 0..cs.q() {
                    s = s.add(&alg.mul(cs.a(m, j), &phi[m]));
                }
                s.scale(1.0 / rn)
            })
            .collect())
    }

    /// `sum_j Phi^j(y; x) nu_j`.
    pub fn flux(&self, x: &[f64], y: &[f64], normal: &[f64]) -> Result<AlgElem> {
        let (d, r) = diff(x, y)?;
        Ok(self.flux_unchecked(&d, r, normal))
    }

    pub(crate) fn flux_unchecked(&self, d: &[f64], r: f64, normal: &[f64]) -> AlgElem {
        let n = self.n();
        let mut s = self.algebra().zero();
        let rn = r.powi(n as i32);
        for j in 0..n {
            if normal[j] == 0.0 {
                continue;
            }
            for i in 0..n {
                let c = normal[j] * d[i] / rn;
                if c != 0.0 {
                    s.axpy(c, &self.w[j][i]);
                }
            }
        }
        s
    }

    /// `d/dx_k sum_j Phi^j(y; x) nu_j`, differentiated analytically.
    pub fn flux_dx(&self, x: &[f64], y: &[f64], normal: &[f64], k: usize) -> Result<AlgElem> {
        let (d, r) = diff(x, y)?;
        Ok(self.flux_dx_unchecked(&d, r, normal, k))
    }

    pub(crate) fn flux_dx_unchecked(&self, d: &[f64], r: f64, normal: &[f64], k: usize) -> AlgElem {
        let n = self.n();
        let nf = n as f64;
        let rn = r.powi(n as i32);
        let rn2 = rn * r * r;
        let mut s = self.algebra().zero();
        for j in 0..n {
            if normal[j] == 0.0 {
                continue;
            }
            for i in 0..n {
                let mut c = nf * d[i] * d[k] / rn2;
                if i == k {
                    c -= 1.0 / rn;
                }
                s.axpy(normal[j] * c, &self.w[j][i]);
            }
        }
        s
    }

    /// Relative defect of `|y-x|^2 sum a^j_m b^j_m - n sum a^j_m (y_j - x_j) phi_m = 0`,
    /// which is `|y-x|^(n+2)` times the divergence of the kernel in `y`.
    pub fn closedness_residual(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        let (d, r) = diff(x, y)?;
        let alg = self.algebra();
        let cs = &self.sol.conditions;
        let n = self.n();
        let phi = self.phi_of_diff(&d);
        let mut trace = alg.zero();
        let mut cross = alg.zero();
        for m in 0..cs.q() {
            for j in 0..n {
                trace = trace.add(&alg.mul(cs.a(m, j), &self.sol.b[m][j]));
                cross = cross.add(&alg.mul(cs.a(m, j), &phi[m]).scale(d[j]));
            }
        }
        let lhs = trace.scale(r * r).sub(&cross.scale(n as f64));
        Ok(lhs.max_abs() / (r * r * self.norm_scale()))
    }

    /// Same quantity as [`closedness_residual`](Self::closedness_residual) but
    /// from central differences of `Phi^j` in `y_j` with step `h`.
    pub fn closedness_residual_fd(&self, x: &[f64], y: &[f64], h: f64) -> Result<f64> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        let (_, r) = diff(x, y)?;
        let n = self.n();
        let mut div = self.algebra().zero();
        for j in 0..n {
            let mut yp = y.to_vec();
            let mut ym = y.to_vec();
            yp[j] += h;
            ym[j] -= h;
            let fp = self.kernel_field(x, &yp)?;
            let fm = self.kernel_field(x, &ym)?;
            div = div.add(&fp[j].sub(&fm[j]).scale(0.5 / h));
        }
        let lhs = div.scale(r.powi(n as i32 + 2));
        Ok(lhs.max_abs() / (r * r * self.norm_scale()))
    }

    /// `n kappa`, the size of `sum_{m,j} a^j_m b^j_m` for an admissible kernel.
    fn norm_scale(&self) -> f64 {
        self.n() as f64 * self.sol.kappa
    }
}

/// Convenience wrapper around [`CauchyKernel::closedness_residual`].
pub fn closedness_residual(sol: &KernelSolution, x: &[f64], y: &[f64]) -> Result<f64> {
    CauchyKernel::new(sol.clone()).closedness_residual(x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::admissibility::{solve_admissibility, CRConditionSet, DEFAULT_TOL};

    fn dbar_kernel() -> CauchyKernel {
        CauchyKernel::new(
            solve_admissibility(&CRConditionSet::dbar(), DEFAULT_TOL)
                .unwrap()
                .solution,
        )
    }

    #[test]
    fn dbar_flux_is_mean_value_weight() {
        // On the unit circle about x the flux is 1/(2 pi) e_0.
        let k = dbar_kernel();
        let x = [0.0, 0.0];
        for t in [0.1, 1.3, 2.9] {
            let y = [f64::cos(t), f64::sin(t)];
            let f = k.flux(&x, &y, &y).unwrap();
            assert!((f.0[0] - 1.0 / (2.0 * std::f64::consts::PI)).abs() < 1e-15);
            assert!(f.0[1].abs() < 1e-15);
        }
    }

    #[test]
    fn on_diagonal_rejected() {
        let k = dbar_kernel();
        assert_eq!(
            k.kernel_field(&[0.5, 0.5], &[0.5, 0.5]),
            Err(Error::OnDiagonal)
        );
        assert!(matches!(
            k.kernel_field(&[0.5], &[0.5, 0.5]),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn flux_dx_matches_difference_quotient() {
        let k = dbar_kernel();
        let (x, y, nu) = ([0.1, -0.2], [0.7, 0.4], [0.6, 0.8]);
        for i in 0..2 {
            let an = k.flux_dx(&x, &y, &nu, i).unwrap();
            let h = 1e-6;
            let mut xp = x;
            let mut xm = x;
            xp[i] += h;
            xm[i] -= h;
            let fd = k
                .flux(&xp, &y, &nu)
                .unwrap()
                .sub(&k.flux(&xm, &y, &nu).unwrap())
                .scale(0.5 / h);
            assert!(an.sub(&fd).max_abs() < 1e-8);
        }
    }
}
