//! Numerical verification: sphere quadrature, reproduction of solutions,
//! the representation formula with its volume term, and kernel derivatives.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::algebra::AlgElem;
use crate::error::{Error, Result};
use crate::kernel::CauchyKernel;
use crate::par::{map_range, pairwise_sum_vec, Exec};
use crate::solutions::AlgFunction;

/// Volume of the unit ball in `R^n`, `pi^(n/2) / Gamma(n/2 + 1)`.
pub fn ball_volume(n: usize) -> f64 {
    // V_0 = 1, V_1 = 2, V_n = 2 pi / n V_{n-2}
    let mut v = if n.is_multiple_of(2) { 1.0 } else { 2.0 };
    let mut k = if n.is_multiple_of(2) { 2 } else { 3 };
    while k <= n {
        v *= 2.0 * PI / k as f64;
        k += 2;
    }
    v
}

/// Area of the unit sphere `S^(n-1)`.
pub fn sphere_area(n: usize) -> f64 {
    n as f64 * ball_volume(n)
}

/// Sphere integration scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Tensor-product Gauss-Legendre in hyperspherical angles; `nodes` per angle.
    ProductGauss,
    /// Uniform directions in antithetic pairs; `nodes` in total.
    MonteCarlo,
}

/// Quadrature settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub scheme: Scheme,
    pub nodes: usize,
    pub seed: u64,
    /// Fail with [`Error::QuadratureUnderResolved`] above this estimate.
    pub error_bound: Option<f64>,
    #[serde(skip)]
    pub exec: Exec,
}

impl QuadratureSpec {
    pub fn product(nodes: usize) -> Self {
        QuadratureSpec {
            scheme: Scheme::ProductGauss,
            nodes,
            seed: 0,
            error_bound: None,
            exec: Exec::default(),
        }
    }

    pub fn monte_carlo(nodes: usize, seed: u64) -> Self {
        QuadratureSpec {
            scheme: Scheme::MonteCarlo,
            nodes,
            seed,
            error_bound: None,
            exec: Exec::default(),
        }
    }

    /// Product rule for `n <= 4`, Monte Carlo above.
    pub fn auto(n: usize, nodes: usize, seed: u64) -> Self {
        if n <= 4 {
            Self::product(nodes)
        } else {
            Self::monte_carlo(nodes, seed)
        }
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    pub fn with_error_bound(mut self, bound: f64) -> Self {
        self.error_bound = Some(bound);
        self
    }

    fn validate(&self) -> Result<()> {
        if self.nodes < 8 {
            return Err(Error::DimensionMismatch(format!(
                "at least 8 quadrature nodes required, got {}",
                self.nodes
            )));
        }
        Ok(())
    }
}

/// Ball `|y - center| < radius`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Vec<f64>, radius: f64) -> Self {
        Ball { center, radius }
    }

    pub fn unit(n: usize) -> Self {
        Ball::new(vec![0.0; n], 1.0)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        let d2: f64 = x
            .iter()
            .zip(&self.center)
            .map(|(a, b)| (a - b).powi(2))
            .sum();
        d2.sqrt() < self.radius
    }
}

/// Gauss-Legendre nodes and weights on `[a, b]`.
fn gauss(nodes: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let rule = GaussLegendre::new(NonZeroUsize::new(nodes).expect("positive"));
    let (h, m) = (0.5 * (b - a), 0.5 * (b + a));
    rule.as_node_weight_pairs()
        .iter()
        .map(|&(x, w)| (m + h * x, h * w))
        .collect()
}

const CHUNK: usize = 512;

/// Tensor rule on `S^(n-1)` in hyperspherical angles.
struct ProductRule {
    n: usize,
    polar: Vec<(f64, f64)>,
    azimuth: Vec<(f64, f64)>,
    count: usize,
}

impl ProductRule {
    fn new(n: usize, nodes: usize) -> Self {
        let polar = gauss(nodes, 0.0, PI);
        let azimuth = gauss(nodes, 0.0, 2.0 * PI);
        let count = match n {
            1 => 2,
            _ => nodes.pow((n - 1) as u32),
        };
        ProductRule {
            n,
            polar,
            azimuth,
            count,
        }
    }

    /// Direction and weight of node `idx`.
    fn node(&self, idx: usize, out: &mut [f64]) -> f64 {
        let n = self.n;
        if n == 1 {
            out[0] = if idx == 0 { -1.0 } else { 1.0 };
            return 1.0;
        }
        let k = self.azimuth.len();
        let mut rest = idx;
        let (phi, wphi) = self.azimuth[rest % k];
        rest /= k;
        let mut w = wphi;
        let mut s = 1.0;
        for (a, o) in out.iter_mut().enumerate().take(n - 2) {
            let (t, wt) = self.polar[rest % k];
            rest /= k;
            *o = s * t.cos();
            w *= wt * t.sin().powi((n - 2 - a) as i32);
            s *= t.sin();
        }
        out[n - 2] = s * phi.cos();
        out[n - 1] = s * phi.sin();
        w
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Integral over the unit sphere of a vector-valued integrand of width `width`,
/// together with an error estimate.
pub fn integrate_sphere<F>(
    n: usize,
    spec: &QuadratureSpec,
    width: usize,
    f: F,
) -> Result<(Vec<f64>, f64)>
where
    F: Fn(&[f64]) -> Vec<f64> + Sync + Send,
{
    spec.validate()?;
    match spec.scheme {
        Scheme::ProductGauss => {
            let full = product_sum(n, spec.nodes, spec.exec, width, &f);
            let coarse = product_sum(n, (spec.nodes / 2).max(4), spec.exec, width, &f);
            let est = full
                .iter()
                .zip(&coarse)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            Ok((full, est))
        }
        Scheme::MonteCarlo => monte_carlo_sum(n, spec, width, &f),
    }
}

fn product_sum<F>(n: usize, nodes: usize, exec: Exec, width: usize, f: &F) -> Vec<f64>
where
    F: Fn(&[f64]) -> Vec<f64> + Sync + Send,
{
    let rule = ProductRule::new(n, nodes);
    let chunks = rule.count.div_ceil(CHUNK);
    let partial = map_range(exec, chunks, |c| {
        let mut acc = vec![0.0; width];
        let mut w = vec![0.0; n];
        for idx in c * CHUNK..((c + 1) * CHUNK).min(rule.count) {
            let wt = rule.node(idx, &mut w);
            for (a, v) in acc.iter_mut().zip(f(&w)) {
                *a += wt * v;
            }
        }
        acc
    });
    pairwise_sum_vec(&partial, width)
}

fn monte_carlo_sum<F>(
    n: usize,
    spec: &QuadratureSpec,
    width: usize,
    f: &F,
) -> Result<(Vec<f64>, f64)>
where
    F: Fn(&[f64]) -> Vec<f64> + Sync + Send,
{
    let pairs = spec.nodes.div_ceil(2);
    let chunks = pairs.div_ceil(CHUNK);
    let area = sphere_area(n);
    // Each chunk returns the sum of pair means and of their squared norms.
    let partial = map_range(spec.exec, chunks, |c| {
        let mut rng = ChaCha8Rng::seed_from_u64(splitmix(spec.seed ^ splitmix(c as u64)));
        let mut acc = vec![0.0; width + 1];
        let mut w = vec![0.0; n];
        let mut wn = vec![0.0; n];
        for _ in c * CHUNK..((c + 1) * CHUNK).min(pairs) {
            let mut r2: f64 = 0.0;
            for v in w.iter_mut() {
                *v = StandardNormal.sample(&mut rng);
                r2 += *v * *v;
            }
            let r = r2.sqrt();
            for (v, m) in w.iter_mut().zip(wn.iter_mut()) {
                *v /= r;
                *m = -*v;
            }
            let a = f(&w);
            let b = f(&wn);
            let mut sq = 0.0;
            for k in 0..width {
                let mean = 0.5 * (a[k] + b[k]);
                acc[k] += mean;
                sq += mean * mean;
            }
            acc[width] += sq;
        }
        acc
    });
    let tot = pairwise_sum_vec(&partial, width + 1);
    let p = pairs as f64;
    let mean: Vec<f64> = tot[..width].iter().map(|s| s / p).collect();
    let mean_sq: f64 = mean.iter().map(|m| m * m).sum();
    let var = (tot[width] / p - mean_sq).max(0.0);
    let stderr = area * (var / p).sqrt();
    Ok((mean.into_iter().map(|m| m * area).collect(), stderr))
}

/// Comparison of a computed value against the expected one.
#[derive(Debug, Clone, Serialize)]
pub struct ReproductionReport {
    pub computed: AlgElem,
    pub expected: AlgElem,
    pub abs_error: f64,
    pub rel_error: f64,
    pub error_estimate: f64,
    /// Nodes per angle (product rule) or sample count (Monte Carlo).
    pub nodes: usize,
    /// Largest `|sum_j (df/dy_j) a^j_m|` over a few probe points of the ball.
    pub condition_defect: f64,
}

impl ReproductionReport {
    fn new(computed: AlgElem, expected: AlgElem, error_estimate: f64, nodes: usize) -> Self {
        let abs_error = computed.sub(&expected).norm();
        let scale = expected.norm();
        let rel_error = if scale > 0.0 {
            abs_error / scale
        } else {
            abs_error
        };
        ReproductionReport {
            computed,
            expected,
            abs_error,
            rel_error,
            error_estimate,
            nodes,
            condition_defect: 0.0,
        }
    }
}

/// `max_m |sum_j (df/dy_j)(y) a^j_m|` over `x`, the center and the points
/// at half radius along each axis.
pub fn condition_defect(kernel: &CauchyKernel, f: &dyn AlgFunction, x: &[f64], ball: &Ball) -> f64 {
    let cs = &kernel.solution().conditions;
    let n = kernel.n();
    let mut pts = vec![x.to_vec(), ball.center.clone()];
    for k in 0..n {
        for s in [-0.5, 0.5] {
            let mut p = ball.center.clone();
            p[k] += s * ball.radius;
            pts.push(p);
        }
    }
    pts.iter()
        .flat_map(|y| cs.apply(&f.gradient(y)))
        .fold(0.0, |m, e| m.max(e.norm()))
}

fn check_point(kernel: &CauchyKernel, f: &dyn AlgFunction, x: &[f64], ball: &Ball) -> Result<()> {
    let n = kernel.n();
    if x.len() != n || ball.center.len() != n || f.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "kernel has n = {n}, point {}, center {}, function {}",
            x.len(),
            ball.center.len(),
            f.n()
        )));
    }
    if f.dim() != kernel.algebra().dim() {
        return Err(Error::DimensionMismatch(
            "function and algebra dimensions differ".into(),
        ));
    }
    if !ball.contains(x) {
        return Err(Error::PointOutsideDomain);
    }
    Ok(())
}

fn enforce_bound(spec: &QuadratureSpec, estimate: f64, scale: f64) -> Result<()> {
    if let Some(bound) = spec.error_bound {
        if estimate > bound * scale.max(1.0) {
            return Err(Error::QuadratureUnderResolved { estimate, bound });
        }
    }
    Ok(())
}

/// Boundary integral `int_{dB} f(y) sum_j Phi^j(y; x) nu_j dS`.
pub fn boundary_integral(
    kernel: &CauchyKernel,
    f: &dyn AlgFunction,
    x: &[f64],
    ball: &Ball,
    spec: &QuadratureSpec,
) -> Result<(AlgElem, f64)> {
    check_point(kernel, f, x, ball)?;
    let n = kernel.n();
    let alg = kernel.algebra();
    let dim = alg.dim();
    let rpow = ball.radius.powi(n as i32 - 1);
    let (sum, est) = integrate_sphere(n, spec, dim, |w| {
        let y: Vec<f64> = (0..n)
            .map(|k| ball.center[k] + ball.radius * w[k])
            .collect();
        let d: Vec<f64> = (0..n).map(|k| y[k] - x[k]).collect();
        let r = d.iter().map(|v| v * v).sum::<f64>().sqrt();
        let flux = kernel.flux_unchecked(&d, r, w);
        alg.mul(&f.eval(&y), &flux).scale(rpow).0
    })?;
    Ok((AlgElem(sum), est))
}

/// Reproduce `f(x)` from boundary values; `f` should solve the conditions.
pub fn boundary_reproduce(
    kernel: &CauchyKernel,
    f: &dyn AlgFunction,
    x: &[f64],
    ball: &Ball,
    spec: &QuadratureSpec,
) -> Result<ReproductionReport> {
    let (value, est) = boundary_integral(kernel, f, x, ball, spec)?;
    let expected = f.eval(x);
    enforce_bound(spec, est, expected.norm())?;
    let mut rep = ReproductionReport::new(value, expected, est, spec.nodes);
    rep.condition_defect = condition_defect(kernel, f, x, ball);
    Ok(rep)
}

/// Distance from `x` to the sphere of `ball` along the unit direction `w`.
fn exit_distance(x: &[f64], ball: &Ball, w: &[f64]) -> f64 {
    let d: Vec<f64> = x.iter().zip(&ball.center).map(|(a, c)| a - c).collect();
    let dw: f64 = d.iter().zip(w).map(|(a, b)| a * b).sum();
    let dd: f64 = d.iter().map(|a| a * a).sum();
    -dw + (dw * dw - dd + ball.radius * ball.radius).sqrt()
}

/// Volume term `int_B sum_{m,j} ((df/dy_j) a^j_m) phi_m(x, y) / |y - x|^n dV`.
///
/// Integrated in polar coordinates about `x`, where the kernel singularity
/// cancels against the volume element; `spec.nodes` is also the radial order.
pub fn volume_term(
    kernel: &CauchyKernel,
    f: &dyn AlgFunction,
    x: &[f64],
    ball: &Ball,
    spec: &QuadratureSpec,
) -> Result<(AlgElem, f64)> {
    check_point(kernel, f, x, ball)?;
    let n = kernel.n();
    let alg = kernel.algebra();
    let cs = &kernel.solution().conditions;
    let dim = alg.dim();
    let radial = gauss(spec.nodes, 0.0, 1.0);
    let (sum, est) = integrate_sphere(n, spec, dim, |w| {
        let phi = kernel.phi_of_diff(w);
        let rho_max = exit_distance(x, ball, w);
        let mut acc = alg.zero();
        for &(t, wt) in &radial {
            let rho = t * rho_max;
            let y: Vec<f64> = (0..n).map(|k| x[k] + rho * w[k]).collect();
            let ops = cs.apply(&f.gradient(&y));
            for (op, ph) in ops.iter().zip(&phi) {
                acc.axpy(wt * rho_max, &alg.mul(op, ph));
            }
        }
        acc.0
    })?;
    Ok((AlgElem(sum), est))
}

/// Check `f(x) = boundary integral - volume term` for any smooth `f`.
pub fn verify_representation(
    kernel: &CauchyKernel,
    f: &dyn AlgFunction,
    x: &[f64],
    ball: &Ball,
    spec: &QuadratureSpec,
) -> Result<ReproductionReport> {
    let (bd, e1) = boundary_integral(kernel, f, x, ball, spec)?;
    let (vol, e2) = volume_term(kernel, f, x, ball, spec)?;
    let expected = f.eval(x);
    let est = e1 + e2;
    enforce_bound(spec, est, expected.norm())?;
    let mut rep = ReproductionReport::new(bd.sub(&vol), expected, est, spec.nodes);
    rep.condition_defect = condition_defect(kernel, f, x, ball);
    Ok(rep)
}

/// Result of [`derivative_via_kernel`].
#[derive(Debug, Clone, Serialize)]
pub struct DerivativeReport {
    pub value: AlgElem,
    pub expected: AlgElem,
    pub rel_error: f64,
    /// Empirical constant `M` with `|df/dx_k (x)| <= M sup|f| / R`.
    pub m_constant: f64,
    pub sup_f: f64,
    pub bound_holds: bool,
}

/// `df/dx_k (x)` from the boundary integral of the differentiated kernel.
pub fn derivative_via_kernel(
    kernel: &CauchyKernel,
    f: &dyn AlgFunction,
    x: &[f64],
    ball: &Ball,
    k: usize,
    spec: &QuadratureSpec,
) -> Result<DerivativeReport> {
    check_point(kernel, f, x, ball)?;
    let n = kernel.n();
    if k >= n {
        return Err(Error::DimensionMismatch(format!(
            "no variable {k} in n = {n}"
        )));
    }
    let alg = kernel.algebra();
    let dim = alg.dim();
    let rpow = ball.radius.powi(n as i32 - 1);
    // Components: value (dim), operator norm integral, sup |f| is taken separately.
    let (sum, _) = integrate_sphere(n, spec, dim + 1, |w| {
        let y: Vec<f64> = (0..n)
            .map(|i| ball.center[i] + ball.radius * w[i])
            .collect();
        let d: Vec<f64> = (0..n).map(|i| y[i] - x[i]).collect();
        let r = d.iter().map(|v| v * v).sum::<f64>().sqrt();
        let kd = kernel.flux_dx_unchecked(&d, r, w, k);
        let mut out = alg.mul(&f.eval(&y), &kd).scale(rpow).0;
        out.push(alg.right_mul_matrix(&kd).norm() * rpow);
        out
    })?;
    let value = AlgElem(sum[..dim].to_vec());
    let m_constant = ball.radius * sum[dim];
    // sup |f| over the sphere, sampled on the same rule.
    let (sup, _) = integrate_sphere_max(n, spec, |w| {
        let y: Vec<f64> = (0..n)
            .map(|i| ball.center[i] + ball.radius * w[i])
            .collect();
        f.eval(&y).norm()
    })?;
    let expected = f.partial(x, k);
    let abs = value.sub(&expected).norm();
    let scale = expected.norm();
    let rel_error = if scale > 0.0 { abs / scale } else { abs };
    let bound_holds = value.norm() <= m_constant * sup / ball.radius * (1.0 + 1e-9) + 1e-14;
    Ok(DerivativeReport {
        value,
        expected,
        rel_error,
        m_constant,
        sup_f: sup,
        bound_holds,
    })
}

/// Maximum of a scalar function over the nodes of the sphere rule.
fn integrate_sphere_max<F>(n: usize, spec: &QuadratureSpec, f: F) -> Result<(f64, usize)>
where
    F: Fn(&[f64]) -> f64 + Sync + Send,
{
    spec.validate()?;
    let count;
    let maxes = match spec.scheme {
        Scheme::ProductGauss => {
            let rule = ProductRule::new(n, spec.nodes);
            count = rule.count;
            map_range(spec.exec, count.div_ceil(CHUNK), |c| {
                let mut w = vec![0.0; n];
                let mut m: f64 = 0.0;
                for idx in c * CHUNK..((c + 1) * CHUNK).min(rule.count) {
                    rule.node(idx, &mut w);
                    m = m.max(f(&w));
                }
                m
            })
        }
        Scheme::MonteCarlo => {
            count = spec.nodes;
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            let mut m: f64 = 0.0;
            let mut w = vec![0.0; n];
            for _ in 0..count {
                let mut r2: f64 = 0.0;
                for v in w.iter_mut() {
                    *v = StandardNormal.sample(&mut rng);
                    r2 += *v * *v;
                }
                let r = r2.sqrt();
                w.iter_mut().for_each(|v| *v /= r);
                m = m.max(f(&w));
            }
            vec![m]
        }
    };
    Ok((maxes.into_iter().fold(0.0, f64::max), count))
}

/// One radius of the Liouville probe.
#[derive(Debug, Clone, Serialize)]
pub struct LiouvilleSample {
    pub radius: f64,
    /// `|df/dx_k (x)| R / sup|f|`
    pub ratio: f64,
    pub m_constant: f64,
}

/// Evaluate the Cauchy estimate on concentric balls of growing radius.
pub fn liouville_probe(
    kernel: &CauchyKernel,
    f: &dyn AlgFunction,
    x: &[f64],
    radii: &[f64],
    k: usize,
    spec: &QuadratureSpec,
) -> Result<Vec<LiouvilleSample>> {
    radii
        .iter()
        .map(|&r| {
            let ball = Ball::new(x.to_vec(), r);
            let d = derivative_via_kernel(kernel, f, x, &ball, k, spec)?;
            let ratio = if d.sup_f > 0.0 {
                d.value.norm() * r / d.sup_f
            } else {
                0.0
            };
            Ok(LiouvilleSample {
                radius: r,
                ratio,
                m_constant: d.m_constant,
            })
        })
        .collect()
}
