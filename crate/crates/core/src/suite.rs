//! Reproducible experiment suites: the gallery of classical systems, the
//! dimension-3 and dimension-2 sweeps and the 2x2 matrix experiments.

use std::sync::Arc;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::admissibility::{
    commutative_condition_a, solve_admissibility, AdmissibilityReport, CRConditionSet,
};
use crate::algebra::{self, AlgElem, AlgebraTable};
use crate::error::{Error, Result};
use crate::kernel::CauchyKernel;
use crate::par::{map_range, Exec};
use crate::solutions::{polynomial_solution_basis, AlgPoly};
use crate::verify::{boundary_reproduce, Ball, QuadratureSpec};

/// Shared knobs for the suites.
#[derive(Debug, Clone, Copy)]
pub struct SuiteOptions {
    pub tol: f64,
    pub nodes: usize,
    pub seed: u64,
    pub exec: Exec,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            tol: crate::admissibility::DEFAULT_TOL,
            nodes: 32,
            seed: 0,
            exec: Exec::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    fn new(suite: &str, checks: Vec<Check>) -> Self {
        SuiteReport {
            schema_version: crate::SCHEMA_VERSION,
            suite: suite.to_string(),
            passed: checks.iter().all(|c| c.passed),
            checks,
        }
    }
}

/// Uniform element with coordinates in `[-1, 1)`.
pub fn random_elem(alg: &AlgebraTable, rng: &mut ChaCha8Rng) -> AlgElem {
    AlgElem(
        (0..alg.dim())
            .map(|_| rng.random_range(-1.0..1.0))
            .collect(),
    )
}

/// Smallest singular value of left multiplication by `a`.
pub fn left_conditioning(alg: &AlgebraTable, a: &AlgElem) -> f64 {
    alg.left_mul_matrix(a).singular_values().min()
}

/// Random element whose left multiplication has smallest singular value at
/// least `min_sv`.
pub fn random_invertible(alg: &AlgebraTable, rng: &mut ChaCha8Rng, min_sv: f64) -> AlgElem {
    loop {
        let a = random_elem(alg, rng);
        if left_conditioning(alg, &a) >= min_sv && alg.try_invert(&a).is_ok() {
            return a;
        }
    }
}

/// `X = sum_k x_k e_k`, the identity map as an algebra-valued polynomial.
pub fn identity_poly(alg: &AlgebraTable) -> AlgPoly {
    AlgPoly::linear(&(0..alg.dim()).map(|k| alg.e(k)).collect::<Vec<_>>())
}

/// `z^3 + 2 z` on the complex numbers.
pub fn complex_cubic() -> AlgPoly {
    let c = algebra::complex();
    let z = identity_poly(&c);
    z.mul(&z, &c).mul(&z, &c).add(&z.scale(2.0))
}

/// `zeta_l = x_l e_0 - x_0 e_l`, a degree-one Fueter solution.
pub fn fueter_zeta(l: usize) -> AlgPoly {
    let h = algebra::quaternions();
    let mut c = vec![h.zero(); 4];
    c[0] = h.e(l).neg();
    c[l] = h.unit();
    AlgPoly::linear(&c)
}

/// A solution of degree exactly one from the polynomial basis, if any.
pub fn degree_one_solution(cs: &CRConditionSet) -> Result<Option<AlgPoly>> {
    let basis = polynomial_solution_basis(cs, 1)?.basis;
    // Largest linear part gives the best-conditioned test function.
    let linear_size = |p: &AlgPoly| -> f64 {
        p.terms
            .iter()
            .filter(|t| t.exp.iter().sum::<u32>() == 1)
            .flat_map(|t| t.coeff.iter())
            .map(|c| c * c)
            .sum()
    };
    Ok(basis
        .into_iter()
        .max_by(|a, b| linear_size(a).total_cmp(&linear_size(b)))
        .filter(|p| linear_size(p) > 1e-6))
}

/// Named system from the gallery.
#[derive(Debug, Clone)]
pub struct GalleryCase {
    pub name: String,
    pub conditions: CRConditionSet,
    /// A solution used to exercise the reproducing formula.
    pub solution: Option<AlgPoly>,
}

fn case(name: &str, conditions: CRConditionSet, solution: Option<AlgPoly>) -> GalleryCase {
    GalleryCase {
        name: name.to_string(),
        conditions,
        solution,
    }
}

/// Commutative algebras used by the gallery.
pub fn commutative_gallery_algebras() -> Vec<AlgebraTable> {
    vec![
        algebra::complex(),
        algebra::dim2(1.0, 0.0),
        algebra::dim2(0.0, 0.0),
        algebra::dim2(-2.0, 0.0),
        algebra::dim2(-1.0, 1.0),
        algebra::tessarines(),
        algebra::cubic(1.0, 0.0, 0.0),
        algebra::cubic(-1.0, -1.0, -1.0),
    ]
}

/// Systems with built-in kernels or known infeasibility.
pub fn gallery_cases() -> Vec<GalleryCase> {
    let mut out = vec![
        case("dbar", CRConditionSet::dbar(), Some(complex_cubic())),
        case("fueter", CRConditionSet::fueter(), Some(fueter_zeta(1))),
        case(
            "fueter-induced-2",
            CRConditionSet::fueter().induced(2).expect("valid"),
            None,
        ),
        case(
            "dbar-induced-2",
            CRConditionSet::dbar().induced(2).expect("valid"),
            None,
        ),
    ];
    {
        let c = Arc::new(algebra::complex());
        let a1 = AlgElem(vec![2.0, 1.0]);
        let a2 = c.mul(&a1, &c.e(1));
        let cs = CRConditionSet::single(c, vec![a1, a2]).expect("valid");
        out.push(case("complex-rotated", cs, None));
    }
    for alg in commutative_gallery_algebras() {
        let name = format!("adiff:{}", alg.name());
        let alg = Arc::new(alg);
        let x = identity_poly(&alg);
        let sq = x.mul(&x, &alg);
        let cs = CRConditionSet::a_differentiable(alg).expect("dim >= 2");
        out.push(case(&name, cs, Some(sq)));
    }
    {
        let t = Arc::new(algebra::tessarines());
        let coeffs = (0..4).map(|k| t.e(k)).collect();
        out.push(case(
            "tessarines-single",
            CRConditionSet::single(t, coeffs).expect("valid"),
            None,
        ));
    }
    {
        let cl = Arc::new(algebra::clifford(2.0, 3.0));
        let cs = CRConditionSet::a_differentiable(cl).expect("valid");
        let sol = degree_one_solution(&cs).ok().flatten();
        out.push(case("adiff:clifford(2,3)", cs, sol));
    }
    for alg in [algebra::octonions(), algebra::sedenions()] {
        let name = format!("anticommuting:{}", alg.name());
        let cs = CRConditionSet::anticommuting_single(Arc::new(alg)).expect("anticommuting");
        out.push(case(&name, cs, None));
    }
    out
}

/// Random pairs `(x, y)` in the cube `[-1, 1]^n` with `|x - y| > 0.05`.
pub fn random_pairs(n: usize, count: usize, seed: u64) -> Vec<(Vec<f64>, Vec<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let y: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let d: f64 = x
            .iter()
            .zip(&y)
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt();
        if d > 0.05 {
            out.push((x, y));
        }
    }
    out
}

/// Largest closedness residual over `count` random pairs.
pub fn max_closedness(kernel: &CauchyKernel, count: usize, seed: u64) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (x, y) in random_pairs(kernel.n(), count, seed) {
        worst = worst.max(kernel.closedness_residual(&x, &y)?);
    }
    Ok(worst)
}

/// Gallery: admissibility, closedness and reproduction for every case, plus
/// the determinantal test on the commutative ones.
pub fn gallery(opts: &SuiteOptions) -> SuiteReport {
    let mut checks = Vec::new();
    for gc in gallery_cases() {
        let rep = match solve_admissibility(&gc.conditions, opts.tol) {
            Ok(r) => r,
            Err(e) => {
                checks.push(Check::new(
                    format!("{}: solve", gc.name),
                    false,
                    e.to_string(),
                ));
                continue;
            }
        };
        let alg = gc.conditions.algebra();
        let expected = expected_feasibility(&gc);
        checks.push(Check::new(
            format!("{}: feasibility", gc.name),
            expected.is_none_or(|e| e == rep.feasible),
            format!(
                "feasible={} residual={:.3e} free_dim={} expected={}",
                rep.feasible,
                rep.residual,
                rep.free_dim,
                expected.map_or("-".into(), |e| e.to_string())
            ),
        ));
        if alg.is_commutative() {
            match commutative_condition_a(&gc.conditions, None, opts.tol) {
                Ok(a) => checks.push(Check::new(
                    format!("{}: condition A", gc.name),
                    a.agrees,
                    format!(
                        "holds={} lsq={} violation={:.3e}",
                        a.holds, a.lsq_feasible, a.max_violation
                    ),
                )),
                Err(e) => checks.push(Check::new(
                    format!("{}: condition A", gc.name),
                    false,
                    e.to_string(),
                )),
            }
        }
        if !rep.feasible {
            continue;
        }
        let kernel = CauchyKernel::new(rep.solution.clone());
        match max_closedness(&kernel, 100, opts.seed) {
            Ok(c) => checks.push(Check::new(
                format!("{}: closedness", gc.name),
                c <= 1e-12,
                format!("max residual {c:.3e}"),
            )),
            Err(e) => checks.push(Check::new(
                format!("{}: closedness", gc.name),
                false,
                e.to_string(),
            )),
        }
        if let Some(f) = &gc.solution {
            if alg.is_associative() && kernel.n() <= 4 {
                let n = kernel.n();
                let x: Vec<f64> = (0..n).map(|k| 0.1 * (k as f64 + 1.0)).collect();
                let spec = QuadratureSpec::product(opts.nodes).with_exec(opts.exec);
                match boundary_reproduce(&kernel, f, &x, &Ball::unit(n), &spec) {
                    Ok(r) => checks.push(Check::new(
                        format!("{}: reproduction", gc.name),
                        r.rel_error < 1e-6,
                        format!("rel_error {:.3e}", r.rel_error),
                    )),
                    Err(e) => checks.push(Check::new(
                        format!("{}: reproduction", gc.name),
                        false,
                        e.to_string(),
                    )),
                }
            }
        }
    }
    SuiteReport::new("gallery", checks)
}

fn expected_feasibility(gc: &GalleryCase) -> Option<bool> {
    let alg = gc.conditions.algebra();
    if gc.name == "tessarines-single" {
        Some(false)
    } else if gc.name.starts_with("adiff:") && alg.is_commutative() {
        Some(alg.sum_of_squares().max_abs() <= 1e-12)
    } else {
        Some(true)
    }
}

/// One sample of the dimension-3 sweep.
#[derive(Debug, Clone, Serialize)]
pub struct Dim3Sample {
    pub algebra: String,
    pub commutative: bool,
    pub associativity_defect: f64,
    pub min_coefficient_sv: f64,
    pub feasible: bool,
    pub residual: f64,
}

/// Random associative three-dimensional algebras, alternating between
/// polynomial quotients and the non-commutative family.
pub fn dim3_algebras(count: usize, seed: u64) -> Vec<AlgebraTable> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| {
            let mut p = || rng.random_range(-2.0..2.0);
            if k % 2 == 0 {
                algebra::cubic(p(), p(), p())
            } else {
                algebra::noncom3(p(), p(), p(), p())
            }
        })
        .collect()
}

/// Single condition in three variables with random invertible coefficients
/// on each sampled algebra.
pub fn dim3_sweep(count: usize, seed: u64, tol: f64, exec: Exec) -> Result<Vec<Dim3Sample>> {
    let algs = dim3_algebras(count, seed);
    map_range(exec, count, |k| {
        let alg = Arc::new(algs[k].clone());
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1000 + k as u64));
        let coeffs: Vec<AlgElem> = (0..3)
            .map(|_| random_invertible(&alg, &mut rng, 0.1))
            .collect();
        let min_sv = coeffs
            .iter()
            .map(|a| left_conditioning(&alg, a))
            .fold(f64::INFINITY, f64::min);
        let cs = CRConditionSet::single(alg.clone(), coeffs)?;
        let rep = solve_admissibility(&cs, tol)?;
        Ok(Dim3Sample {
            algebra: alg.name().to_string(),
            commutative: alg.is_commutative(),
            associativity_defect: alg.associativity_defect(),
            min_coefficient_sv: min_sv,
            feasible: rep.feasible,
            residual: rep.residual,
        })
    })
    .into_iter()
    .collect()
}

pub fn dim3(opts: &SuiteOptions, count: usize) -> SuiteReport {
    let checks = match dim3_sweep(count, opts.seed, opts.tol, opts.exec) {
        Ok(samples) => samples
            .iter()
            .enumerate()
            .map(|(k, s)| {
                Check::new(
                    format!("sample {k}: {}", s.algebra),
                    !s.feasible && s.residual > 1e-2 && s.associativity_defect <= 1e-9,
                    format!(
                        "residual {:.3e}, min |a| sv {:.3}",
                        s.residual, s.min_coefficient_sv
                    ),
                )
            })
            .collect(),
        Err(e) => vec![Check::new("dim3 sweep", false, e.to_string())],
    };
    SuiteReport::new("dim3", checks)
}

/// One grid point of the dimension-2 sweep.
#[derive(Debug, Clone, Serialize)]
pub struct Dim2Point {
    pub a: f64,
    pub b: f64,
    pub discriminant: f64,
    pub predicted: bool,
    pub feasible: bool,
    /// Random invertible coefficient pairs tried when infeasibility is predicted.
    pub random_all_infeasible: bool,
}

/// Normalized generator `(e_1 - b/2 e_0) / sqrt(|b^2 + 4a| / 4)` of `dim2(a, b)`;
/// it squares to `-e_0` or `+e_0` according to the sign of `b^2 + 4a`.
pub fn dim2_generator(alg: &AlgebraTable, a: f64, b: f64) -> AlgElem {
    let s = ((b * b + 4.0 * a).abs() / 4.0).sqrt();
    alg.e(1).sub(&alg.scalar(b / 2.0)).scale(1.0 / s)
}

/// Sweep `dim2(a, b)` over a grid of `[-3, 3]^2`, skipping `|b^2 + 4a| < margin`.
pub fn dim2_sweep(
    steps: usize,
    margin: f64,
    seed: u64,
    tol: f64,
    exec: Exec,
) -> Result<Vec<Dim2Point>> {
    let grid: Vec<(f64, f64)> = (0..=steps)
        .flat_map(|i| (0..=steps).map(move |j| (i, j)))
        .map(|(i, j)| {
            let h = 6.0 / steps as f64;
            (-3.0 + h * i as f64, -3.0 + h * j as f64)
        })
        .filter(|(a, b)| (b * b + 4.0 * a).abs() >= margin)
        .collect();
    map_range(exec, grid.len(), |k| {
        let (a, b) = grid[k];
        let alg = Arc::new(algebra::dim2(a, b));
        let disc = b * b + 4.0 * a;
        let g = dim2_generator(&alg, a, b);
        let cs = CRConditionSet::single(alg.clone(), vec![alg.unit(), g])?;
        let feasible = solve_admissibility(&cs, tol)?.feasible;
        let mut random_all_infeasible = true;
        if disc > 0.0 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(k as u64));
            for _ in 0..3 {
                let c = vec![
                    random_invertible(&alg, &mut rng, 0.05),
                    random_invertible(&alg, &mut rng, 0.05),
                ];
                let cs = CRConditionSet::single(alg.clone(), c)?;
                if solve_admissibility(&cs, tol)?.feasible {
                    random_all_infeasible = false;
                }
            }
        }
        Ok(Dim2Point {
            a,
            b,
            discriminant: disc,
            predicted: disc < 0.0,
            feasible,
            random_all_infeasible,
        })
    })
    .into_iter()
    .collect()
}

pub fn dim2sweep(opts: &SuiteOptions) -> SuiteReport {
    let checks = match dim2_sweep(24, 0.05, opts.seed, opts.tol, opts.exec) {
        Ok(pts) => {
            let bad: Vec<&Dim2Point> = pts
                .iter()
                .filter(|p| p.predicted != p.feasible || !p.random_all_infeasible)
                .collect();
            let feasible = pts.iter().filter(|p| p.feasible).count();
            vec![Check::new(
                "dim2 grid agrees with b^2 + 4a < 0",
                bad.is_empty(),
                format!(
                    "{} points, {} feasible, {} disagreements",
                    pts.len(),
                    feasible,
                    bad.len()
                ),
            )]
        }
        Err(e) => vec![Check::new("dim2 grid", false, e.to_string())],
    };
    SuiteReport::new("dim2sweep", checks)
}

/// Single condition on `M_2(R)` with `a^0 = e_0` and random other coefficients.
pub fn m2r_single(seed: u64) -> CRConditionSet {
    let m = Arc::new(algebra::m2r());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coeffs = vec![m.unit()];
    coeffs.extend((0..3).map(|_| random_elem(&m, &mut rng)));
    CRConditionSet::single(m, coeffs).expect("valid")
}

/// Three conditions on `M_2(R)` in four variables: operator `m` is
/// `alpha_m df/dx_m + (df/dx_3) u_m` with random nonzero reals `alpha_m`
/// and random matrices `u_m`.
pub fn m2r_three(seed: u64) -> CRConditionSet {
    let m = Arc::new(algebra::m2r());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = (0..3)
        .map(|k| {
            let alpha = rng.random_range(0.5..2.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            let mut row = vec![m.zero(); 4];
            row[k] = m.scalar(alpha);
            row[3] = random_elem(&m, &mut rng);
            row
        })
        .collect();
    CRConditionSet::new(m, 4, 3, a).expect("valid")
}

/// Results of the 2x2 matrix experiments.
#[derive(Debug, Clone, Serialize)]
pub struct M2rResult {
    pub single_feasible: bool,
    pub single_residual: f64,
    pub three_feasible: bool,
    pub three_residual: f64,
    pub three_free_dim: usize,
    pub closedness: f64,
    pub reproduction_rel_error: f64,
}

pub fn m2r_experiment(opts: &SuiteOptions) -> Result<M2rResult> {
    let single = solve_admissibility(&m2r_single(opts.seed), opts.tol)?;
    let cs = m2r_three(opts.seed);
    let three: AdmissibilityReport = solve_admissibility(&cs, opts.tol)?;
    let kernel = CauchyKernel::new(three.solution.clone());
    let closedness = max_closedness(&kernel, 100, opts.seed)?;
    let f = degree_one_solution(&cs)?.ok_or(Error::Singular)?;
    let x = [0.1, -0.2, 0.15, 0.05];
    let spec = QuadratureSpec::product(opts.nodes).with_exec(opts.exec);
    let rep = boundary_reproduce(&kernel, &f, &x, &Ball::unit(4), &spec)?;
    Ok(M2rResult {
        single_feasible: single.feasible,
        single_residual: single.residual,
        three_feasible: three.feasible,
        three_residual: three.residual,
        three_free_dim: three.free_dim,
        closedness,
        reproduction_rel_error: rep.rel_error,
    })
}

pub fn m2r(opts: &SuiteOptions) -> SuiteReport {
    let checks = match m2r_experiment(opts) {
        Ok(r) => vec![
            Check::new(
                "single condition infeasible",
                !r.single_feasible,
                format!("residual {:.3e}", r.single_residual),
            ),
            Check::new(
                "three conditions feasible",
                r.three_feasible,
                format!(
                    "residual {:.3e}, free_dim {}",
                    r.three_residual, r.three_free_dim
                ),
            ),
            Check::new(
                "closedness",
                r.closedness <= 1e-12,
                format!("{:.3e}", r.closedness),
            ),
            Check::new(
                "degree-one reproduction",
                r.reproduction_rel_error < 1e-4,
                format!("rel_error {:.3e}", r.reproduction_rel_error),
            ),
        ],
        Err(e) => vec![Check::new("m2r", false, e.to_string())],
    };
    SuiteReport::new("m2r", checks)
}
