//! End-to-end acceptance battery. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.
//!
//! Run with: cargo test -p hypercauchy --test acceptance

use std::f64::consts::PI;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use hypercauchy::admissibility::{
    commutative_condition_a, solve_admissibility, CRConditionSet, DEFAULT_TOL,
};
use hypercauchy::algebra::{self, AlgElem, AlgebraTable};
use hypercauchy::kernel::CauchyKernel;
use hypercauchy::par::Exec;
use hypercauchy::solutions::AlgPoly;
use hypercauchy::suite::{self, SuiteOptions};
use hypercauchy::verify::{
    boundary_reproduce, derivative_via_kernel, verify_representation, Ball, QuadratureSpec,
};

type Outcome = Result<String, String>;
type Entry = (&'static str, Option<Duration>, fn() -> Outcome);

fn ensure(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn max_diff(a: &AlgElem, b: &AlgElem) -> f64 {
    a.0.iter()
        .zip(&b.0)
        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

fn kernel_of(cs: &CRConditionSet) -> Result<CauchyKernel, String> {
    let rep = solve_admissibility(cs, DEFAULT_TOL).map_err(|e| e.to_string())?;
    if !rep.feasible {
        return Err(format!("infeasible, residual {:.3e}", rep.residual));
    }
    Ok(CauchyKernel::new(rep.solution))
}

/// Largest analytic closedness residual over random off-diagonal pairs.
fn closedness(kernel: &CauchyKernel, seed: u64) -> Result<f64, String> {
    let mut worst: f64 = 0.0;
    let mut s = seed;
    let n = kernel.n();
    let mut next = || {
        // xorshift, kept local so the pairs do not come from library code
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        (s >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    };
    let mut count = 0;
    while count < 100 {
        let x: Vec<f64> = (0..n).map(|_| next()).collect();
        let y: Vec<f64> = (0..n).map(|_| next()).collect();
        let d: f64 = x
            .iter()
            .zip(&y)
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt();
        if d < 1e-3 {
            continue;
        }
        worst = worst.max(
            kernel
                .closedness_residual(&x, &y)
                .map_err(|e| e.to_string())?,
        );
        count += 1;
    }
    Ok(worst)
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let t = Instant::now();
    let out = f();
    let el = t.elapsed();
    match (out, limit) {
        (Ok(m), Some(l)) if el > l => Err(format!("{m}; took {el:.2?} > {l:?}")),
        (Ok(m), _) => Ok(format!("{m}; {el:.2?}")),
        (Err(m), _) => Err(format!("{m}; {el:.2?}")),
    }
}

// Expected b for a(e0, e1, ..) = basis: alpha * conjugate basis.
fn conjugate_basis(alg: &AlgebraTable, alpha: f64) -> Vec<AlgElem> {
    (0..alg.dim())
        .map(|k| if k == 0 { alg.unit() } else { alg.e(k).neg() }.scale(alpha))
        .collect()
}

fn c1_dbar() -> Outcome {
    let rep =
        solve_admissibility(&CRConditionSet::dbar(), DEFAULT_TOL).map_err(|e| e.to_string())?;
    // Hand solution: b^0 = e0 / (2 pi), b^1 = -i / (2 pi).
    let expected = [
        AlgElem(vec![1.0 / (2.0 * PI), 0.0]),
        AlgElem(vec![0.0, -1.0 / (2.0 * PI)]),
    ];
    let err = (0..2)
        .map(|i| max_diff(&rep.solution.b[0][i], &expected[i]))
        .fold(0.0, f64::max);
    ensure(
        rep.feasible && err < 1e-12,
        format!("max |b - b_exact| = {err:.2e}"),
    )
}

fn c2_fueter() -> Outcome {
    let rep =
        solve_admissibility(&CRConditionSet::fueter(), DEFAULT_TOL).map_err(|e| e.to_string())?;
    let h = algebra::quaternions();
    let expected = conjugate_basis(&h, 1.0 / (2.0 * PI * PI));
    let err = (0..4)
        .map(|i| max_diff(&rep.solution.b[0][i], &expected[i]))
        .fold(0.0, f64::max);
    ensure(
        rep.feasible && err < 1e-12,
        format!("max |b - b_exact| = {err:.2e}"),
    )
}

fn c3_complex_reproduction() -> Outcome {
    let kernel = kernel_of(&CRConditionSet::dbar())?;
    let f = suite::complex_cubic();
    let x = [0.3, 0.1];
    // z^3 + 2z at z = 0.3 + 0.1i, expanded by hand.
    let (zr, zi) = (0.3f64, 0.1f64);
    let z3r = zr * zr * zr - 3.0 * zr * zi * zi;
    let z3i = 3.0 * zr * zr * zi - zi * zi * zi;
    let exact = AlgElem(vec![z3r + 2.0 * zr, z3i + 2.0 * zi]);
    let rep = boundary_reproduce(
        &kernel,
        &f,
        &x,
        &Ball::unit(2),
        &QuadratureSpec::product(256),
    )
    .map_err(|e| e.to_string())?;
    let rel = rep.computed.sub(&exact).norm() / exact.norm();
    ensure(
        rel < 1e-10,
        format!("rel_error {rel:.2e} (value {:?})", rep.computed.0),
    )
}

fn c4_fueter_reproduction() -> Outcome {
    let kernel = kernel_of(&CRConditionSet::fueter())?;
    let f = suite::fueter_zeta(1);
    let x = [0.1, 0.2, 0.0, 0.0];
    let exact = AlgElem(vec![0.2, -0.1, 0.0, 0.0]);
    let rep = boundary_reproduce(
        &kernel,
        &f,
        &x,
        &Ball::unit(4),
        &QuadratureSpec::product(64),
    )
    .map_err(|e| e.to_string())?;
    let rel = rep.computed.sub(&exact).norm() / exact.norm();
    ensure(rel < 1e-6, format!("rel_error {rel:.2e} with 64^3 nodes"))
}

fn c5_dim3() -> Outcome {
    let samples =
        suite::dim3_sweep(100, 7, DEFAULT_TOL, Exec::default()).map_err(|e| e.to_string())?;
    let bad: Vec<_> = samples
        .iter()
        .enumerate()
        .filter(|(_, s)| s.feasible || s.residual <= 1e-2 || s.associativity_defect > 1e-9)
        .map(|(k, _)| k)
        .collect();
    let weakest = samples
        .iter()
        .map(|s| s.residual)
        .fold(f64::INFINITY, f64::min);
    let noncomm = samples.iter().filter(|s| !s.commutative).count();
    ensure(
        samples.len() == 100 && bad.is_empty(),
        format!(
            "{}/{} infeasible, min residual {weakest:.3}, {noncomm} non-commutative; failures {bad:?}",
            samples.len() - bad.len(),
            samples.len()
        ),
    )
}

fn c6_dim2() -> Outcome {
    let pts =
        suite::dim2_sweep(24, 0.05, 11, DEFAULT_TOL, Exec::default()).map_err(|e| e.to_string())?;
    let mut bad = Vec::new();
    for p in &pts {
        let elliptic = p.b * p.b + 4.0 * p.a < 0.0;
        if p.feasible != elliptic || (!elliptic && !p.random_all_infeasible) {
            bad.push((p.a, p.b));
        }
    }
    let feasible = pts.iter().filter(|p| p.feasible).count();
    ensure(
        bad.is_empty() && feasible > 0 && feasible < pts.len(),
        format!(
            "{} grid points, {feasible} feasible, disagreements {bad:?}",
            pts.len()
        ),
    )
}

fn c7_m2r() -> Outcome {
    let opts = SuiteOptions::default();
    let r = suite::m2r_experiment(&opts).map_err(|e| e.to_string())?;
    ensure(
        !r.single_feasible
            && r.three_feasible
            && r.closedness <= 1e-12
            && r.reproduction_rel_error < 1e-4,
        format!(
            "q=1 feasible={} (residual {:.3}), q=3 feasible={} closedness {:.2e} reproduction {:.2e}",
            r.single_feasible, r.single_residual, r.three_feasible, r.closedness, r.reproduction_rel_error
        ),
    )
}

/// `sum_k e_k^2` read straight off the multiplication table.
fn sum_of_squares(alg: &AlgebraTable) -> f64 {
    let d = alg.dim();
    let g = alg.gamma_flat();
    (0..d)
        .map(|s| (0..d).map(|k| g[(k * d + k) * d + s]).sum::<f64>().abs())
        .fold(0.0, f64::max)
}

fn c8_commutative_corollary() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for alg in suite::commutative_gallery_algebras() {
        let predicted = sum_of_squares(&alg) < 1e-12;
        let name = alg.name().to_string();
        let cs = CRConditionSet::a_differentiable(Arc::new(alg)).map_err(|e| e.to_string())?;
        let feasible = solve_admissibility(&cs, DEFAULT_TOL)
            .map_err(|e| e.to_string())?
            .feasible;
        ok &= predicted == feasible;
        lines.push(format!("{name}:{}", if feasible { "y" } else { "n" }));
    }
    let cl = CRConditionSet::a_differentiable(Arc::new(algebra::clifford(2.0, 3.0)))
        .map_err(|e| e.to_string())?;
    let cl_feasible = solve_admissibility(&cl, DEFAULT_TOL)
        .map_err(|e| e.to_string())?
        .feasible;
    ok &= cl_feasible;
    ensure(
        ok,
        format!("{}; clifford(2,3) feasible={cl_feasible}", lines.join(" ")),
    )
}

fn c9_condition_a() -> Outcome {
    let mut count = 0;
    let mut bad = Vec::new();
    for gc in suite::gallery_cases() {
        if !gc.conditions.algebra().is_commutative() {
            continue;
        }
        let lsq = solve_admissibility(&gc.conditions, DEFAULT_TOL).map_err(|e| e.to_string())?;
        match commutative_condition_a(&gc.conditions, None, DEFAULT_TOL) {
            Ok(a) if a.holds == lsq.feasible => {}
            Ok(a) => bad.push(format!("{} (A={} lsq={})", gc.name, a.holds, lsq.feasible)),
            Err(e) => bad.push(format!("{}: {e}", gc.name)),
        }
        count += 1;
    }
    ensure(
        bad.is_empty() && count > 0,
        format!("{count} commutative cases, disagreements {bad:?}"),
    )
}

fn c10_closedness() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut kernels = 0;
    for gc in suite::gallery_cases() {
        let rep = solve_admissibility(&gc.conditions, DEFAULT_TOL).map_err(|e| e.to_string())?;
        if !rep.feasible {
            continue;
        }
        let c = closedness(&CauchyKernel::new(rep.solution), 0x9e37_79b9_7f4a_7c15)?;
        worst = worst.max(c);
        kernels += 1;
    }
    ensure(
        worst <= 1e-12,
        format!("{kernels} kernels, worst residual {worst:.2e}"),
    )
}

fn c11_volume_term() -> Outcome {
    let kernel = kernel_of(&CRConditionSet::dbar())?;
    let c = algebra::complex();
    let mut f = AlgPoly::zero(2, 2);
    f.push(vec![2, 0], c.unit());
    let x = [0.2, 0.0];
    let rep = verify_representation(
        &kernel,
        &f,
        &x,
        &Ball::unit(2),
        &QuadratureSpec::product(64),
    )
    .map_err(|e| e.to_string())?;
    let exact = AlgElem(vec![0.04, 0.0]);
    let rel = rep.computed.sub(&exact).norm() / exact.norm();
    ensure(
        rel < 1e-3,
        format!("rel_error {rel:.2e}, value {:?}", rep.computed.0),
    )
}

fn c12_induced_fueter() -> Outcome {
    let cs = CRConditionSet::fueter()
        .induced(2)
        .map_err(|e| e.to_string())?;
    let kernel = kernel_of(&cs)?;
    // |B_8| = pi^4 / 24
    let alpha2 = 1.0 / (8.0 * PI.powi(4) / 24.0);
    let h = algebra::quaternions();
    let block = conjugate_basis(&h, alpha2);
    let b = &kernel.solution().b;
    let mut err: f64 = 0.0;
    for (m, row) in b.iter().enumerate() {
        for (i, bi) in row.iter().enumerate() {
            let expected = if i / 4 == m {
                block[i % 4].clone()
            } else {
                h.zero()
            };
            err = err.max(max_diff(bi, &expected));
        }
    }
    let cl = closedness(&kernel, 42)?;
    ensure(
        err < 1e-12 && cl <= 1e-12,
        format!("alpha2 = {alpha2:.12}, block error {err:.2e}, closedness {cl:.2e}"),
    )
}

fn c13_exotic() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for alg in [algebra::octonions(), algebra::sedenions()] {
        let name = alg.name().to_string();
        let cs = CRConditionSet::anticommuting_single(Arc::new(alg)).map_err(|e| e.to_string())?;
        let rep = solve_admissibility(&cs, DEFAULT_TOL).map_err(|e| e.to_string())?;
        ok &= rep.feasible;
        parts.push(format!("{name} feasible={}", rep.feasible));
    }
    let t = Arc::new(algebra::tessarines());
    let mut trials = vec![(0..4).map(|k| t.e(k)).collect::<Vec<_>>()];
    // A few invertible coefficient choices: unit plus small perturbations.
    for s in 1..=4 {
        let sf = s as f64;
        trials.push(
            (0..4)
                .map(|k| {
                    let mut v = vec![0.1 * sf * ((k + 1) as f64).sin(); 4];
                    v[k] += 1.0;
                    AlgElem(v)
                })
                .collect(),
        );
    }
    let mut tess_infeasible = true;
    for coeffs in trials {
        for a in &coeffs {
            t.try_invert(a)
                .map_err(|e| format!("coefficient not invertible: {e}"))?;
        }
        let cs = CRConditionSet::single(t.clone(), coeffs).map_err(|e| e.to_string())?;
        let rep = solve_admissibility(&cs, DEFAULT_TOL).map_err(|e| e.to_string())?;
        tess_infeasible &= !rep.feasible;
    }
    ok &= tess_infeasible;
    parts.push(format!("tessarine single infeasible={tess_infeasible}"));
    ensure(ok, parts.join(", "))
}

fn derivative_probe() -> Outcome {
    let kernel = kernel_of(&CRConditionSet::dbar())?;
    let f = suite::complex_cubic();
    let x = [0.3, 0.1];
    let rep = derivative_via_kernel(
        &kernel,
        &f,
        &x,
        &Ball::unit(2),
        0,
        &QuadratureSpec::product(256),
    )
    .map_err(|e| e.to_string())?;
    // d/dx (z^3 + 2z) = 3 z^2 + 2 at z = 0.3 + 0.1i
    let exact = AlgElem(vec![2.24, 0.18]);
    let rel = rep.value.sub(&exact).norm() / exact.norm();
    ensure(
        rel < 1e-5 && rep.bound_holds,
        format!("rel_error {rel:.2e}, M = {:.3}", rep.m_constant),
    )
}

fn main() -> ExitCode {
    let s = |n| Some(Duration::from_secs(n));
    let criteria: Vec<Entry> = vec![
        ("1 dbar kernel", s(1), c1_dbar),
        ("2 Fueter kernel", s(1), c2_fueter),
        ("3 complex reproduction", s(1), c3_complex_reproduction),
        ("4 Fueter reproduction", s(60), c4_fueter_reproduction),
        ("5 dimension-3 falsification", s(30), c5_dim3),
        ("6 dimension-2 sweep", None, c6_dim2),
        ("7 2x2 matrices", None, c7_m2r),
        ("8 commutative corollary", None, c8_commutative_corollary),
        ("9 condition A", None, c9_condition_a),
        ("10 closedness", None, c10_closedness),
        ("11 volume term", s(30), c11_volume_term),
        ("12 induced Fueter", None, c12_induced_fueter),
        ("13 exotic algebras", None, c13_exotic),
        ("derivative probe", None, derivative_probe),
    ];
    let mut failed = 0;
    for (name, limit, f) in criteria {
        match timed(limit, f) {
            Ok(m) => println!("PASS criterion {name}: {m}"),
            Err(m) => {
                failed += 1;
                println!("FAIL criterion {name}: {m}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
