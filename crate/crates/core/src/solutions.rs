//! Algebra-valued polynomials and polynomial solutions of a condition set.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::admissibility::CRConditionSet;
use crate::algebra::{AlgElem, AlgebraTable};
use crate::error::{Error, Result};
use crate::linalg::null_space;

/// Relative singular-value threshold for the solution null space.
pub const NULL_TOL: f64 = 1e-10;
/// Default step for finite-difference derivatives of callables.
pub const FD_STEP: f64 = 1e-5;

/// Central difference of `f` in direction `j` with step `h`.
pub fn central_difference<F>(f: F, y: &[f64], j: usize, h: f64) -> AlgElem
where
    F: Fn(&[f64]) -> AlgElem,
{
    let mut yp = y.to_vec();
    let mut ym = y.to_vec();
    yp[j] += h;
    ym[j] -= h;
    f(&yp).sub(&f(&ym)).scale(0.5 / h)
}

/// An algebra-valued function of `n` real variables.
pub trait AlgFunction: Sync {
    fn n(&self) -> usize;
    fn dim(&self) -> usize;
    fn eval(&self, y: &[f64]) -> AlgElem;

    /// `df/dy_j`; central differences with step [`FD_STEP`] unless overridden.
    fn partial(&self, y: &[f64], j: usize) -> AlgElem {
        central_difference(|p| self.eval(p), y, j, FD_STEP)
    }

    fn gradient(&self, y: &[f64]) -> Vec<AlgElem> {
        (0..self.n()).map(|j| self.partial(y, j)).collect()
    }
}

/// Wraps a closure as an [`AlgFunction`] with finite-difference derivatives.
pub struct FnFunction<F> {
    n: usize,
    dim: usize,
    f: F,
}

impl<F> FnFunction<F>
where
    F: Fn(&[f64]) -> AlgElem + Sync,
{
    pub fn new(n: usize, dim: usize, f: F) -> Self {
        FnFunction { n, dim, f }
    }
}

impl<F> AlgFunction for FnFunction<F>
where
    F: Fn(&[f64]) -> AlgElem + Sync,
{
    fn n(&self) -> usize {
        self.n
    }
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval(&self, y: &[f64]) -> AlgElem {
        (self.f)(y)
    }
}

/// All exponent vectors of total degree at most `degree`, by degree and
/// then lexicographically with the first variable largest.
pub fn monomials(n: usize, degree: usize) -> Vec<Vec<u32>> {
    fn fill(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n - 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for e in (0..=left).rev() {
            cur.push(e);
            fill(n, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
        return out;
    }
    for d in 0..=degree as u32 {
        fill(n, d, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

/// Sparse algebra-valued polynomial `sum_alpha c_alpha y^alpha`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgPoly {
    pub n: usize,
    pub dim: usize,
    pub terms: Vec<PolyTerm>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyTerm {
    pub exp: Vec<u32>,
    pub coeff: Vec<f64>,
}

fn pow(x: f64, e: u32) -> f64 {
    x.powi(e as i32)
}

impl AlgPoly {
    pub fn zero(n: usize, dim: usize) -> Self {
        AlgPoly {
            n,
            dim,
            terms: Vec::new(),
        }
    }

    pub fn constant(n: usize, c: &AlgElem) -> Self {
        let mut p = Self::zero(n, c.dim());
        p.push(vec![0; n], c.clone());
        p
    }

    /// `sum_j y_j c_j`.
    pub fn linear(coeffs: &[AlgElem]) -> Self {
        let n = coeffs.len();
        let dim = coeffs.first().map_or(1, |c| c.dim());
        let mut p = Self::zero(n, dim);
        for (j, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[j] = 1;
            p.push(e, c.clone());
        }
        p
    }

    /// Check shapes after deserialization.
    pub fn validate(&self) -> Result<()> {
        for t in &self.terms {
            if t.exp.len() != self.n || t.coeff.len() != self.dim {
                return Err(Error::DimensionMismatch(format!(
                    "term {:?} does not match n = {}, dim = {}",
                    t.exp, self.n, self.dim
                )));
            }
        }
        Ok(())
    }

    /// Add `c y^exp`, merging with an existing term of the same exponent.
    pub fn push(&mut self, exp: Vec<u32>, c: AlgElem) {
        if let Some(t) = self.terms.iter_mut().find(|t| t.exp == exp) {
            for (a, b) in t.coeff.iter_mut().zip(&c.0) {
                *a += b;
            }
        } else {
            self.terms.push(PolyTerm { exp, coeff: c.0 });
        }
    }

    pub fn degree(&self) -> usize {
        self.terms
            .iter()
            .filter(|t| t.coeff.iter().any(|c| *c != 0.0))
            .map(|t| t.exp.iter().sum::<u32>() as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn add(&self, other: &AlgPoly) -> AlgPoly {
        let mut p = self.clone();
        for t in &other.terms {
            p.push(t.exp.clone(), AlgElem(t.coeff.clone()));
        }
        p
    }

    pub fn scale(&self, s: f64) -> AlgPoly {
        let mut p = self.clone();
        for t in &mut p.terms {
            t.coeff.iter_mut().for_each(|c| *c *= s);
        }
        p
    }

    /// Product in the algebra, `self` on the left.
    pub fn mul(&self, other: &AlgPoly, alg: &AlgebraTable) -> AlgPoly {
        let mut p = AlgPoly::zero(self.n, self.dim);
        for s in &self.terms {
            for t in &other.terms {
                let exp = s.exp.iter().zip(&t.exp).map(|(a, b)| a + b).collect();
                let c = alg.mul(&AlgElem(s.coeff.clone()), &AlgElem(t.coeff.clone()));
                p.push(exp, c);
            }
        }
        p
    }

    /// Multiply every coefficient on the right by `c`.
    pub fn mul_right(&self, c: &AlgElem, alg: &AlgebraTable) -> AlgPoly {
        let mut p = self.clone();
        for t in &mut p.terms {
            t.coeff = alg.mul(&AlgElem(t.coeff.clone()), c).0;
        }
        p
    }

    pub fn derivative(&self, j: usize) -> AlgPoly {
        let mut p = AlgPoly::zero(self.n, self.dim);
        for t in &self.terms {
            if t.exp[j] == 0 {
                continue;
            }
            let mut e = t.exp.clone();
            let k = e[j] as f64;
            e[j] -= 1;
            p.push(e, AlgElem(t.coeff.iter().map(|c| c * k).collect()));
        }
        p
    }

    /// Largest coefficient magnitude.
    pub fn max_coeff(&self) -> f64 {
        self.terms
            .iter()
            .flat_map(|t| t.coeff.iter())
            .fold(0.0, |m, c| m.max(c.abs()))
    }
}

impl AlgFunction for AlgPoly {
    fn n(&self) -> usize {
        self.n
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, y: &[f64]) -> AlgElem {
        let mut out = AlgElem::zero(self.dim);
        for t in &self.terms {
            let m: f64 = t.exp.iter().zip(y).map(|(&e, &v)| pow(v, e)).product();
            for (o, c) in out.0.iter_mut().zip(&t.coeff) {
                *o += m * c;
            }
        }
        out
    }

    fn partial(&self, y: &[f64], j: usize) -> AlgElem {
        let mut out = AlgElem::zero(self.dim);
        for t in &self.terms {
            let ej = t.exp[j];
            if ej == 0 {
                continue;
            }
            let mut m = ej as f64;
            for (k, (&e, &v)) in t.exp.iter().zip(y).enumerate() {
                m *= if k == j { pow(v, e - 1) } else { pow(v, e) };
            }
            for (o, c) in out.0.iter_mut().zip(&t.coeff) {
                *o += m * c;
            }
        }
        out
    }
}

/// `sum_j (df/dx_j) a^j_m` for every `m`, computed exactly.
pub fn apply_cr_operator(cs: &CRConditionSet, f: &AlgPoly) -> Vec<AlgPoly> {
    let alg = cs.algebra();
    (0..cs.q())
        .map(|m| {
            let mut acc = AlgPoly::zero(cs.n(), cs.dim());
            for j in 0..cs.n() {
                acc = acc.add(&f.derivative(j).mul_right(cs.a(m, j), alg));
            }
            acc
        })
        .collect()
}

/// `sum_j (df/dx_j)(y) a^j_m` for every `m`, using the function's own
/// derivatives (exact for [`AlgPoly`]).
pub fn apply_cr_operator_at(cs: &CRConditionSet, f: &dyn AlgFunction, y: &[f64]) -> Vec<AlgElem> {
    cs.apply(&f.gradient(y))
}

/// Same with central differences of step `h` on an arbitrary callable.
pub fn apply_cr_operator_fd<F>(cs: &CRConditionSet, f: F, y: &[f64], h: f64) -> Vec<AlgElem>
where
    F: Fn(&[f64]) -> AlgElem,
{
    let grad: Vec<AlgElem> = (0..cs.n())
        .map(|j| central_difference(&f, y, j, h))
        .collect();
    cs.apply(&grad)
}

/// Polynomial solutions of a condition set up to a given degree.
#[derive(Debug, Clone)]
pub struct PolySolutionBasis {
    pub conditions: CRConditionSet,
    pub degree: usize,
    pub basis: Vec<AlgPoly>,
}

impl PolySolutionBasis {
    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }
}

/// Largest supported degree.
pub const MAX_DEGREE: usize = 6;

/// Orthonormal (in coefficient space) basis of the polynomial solutions of
/// degree at most `degree`.
pub fn polynomial_solution_basis(cs: &CRConditionSet, degree: usize) -> Result<PolySolutionBasis> {
    if degree > MAX_DEGREE {
        return Err(Error::DimensionMismatch(format!(
            "degree {degree} exceeds the supported maximum {MAX_DEGREE}"
        )));
    }
    Ok(PolySolutionBasis {
        conditions: cs.clone(),
        degree,
        basis: solution_polys(cs, degree),
    })
}

fn solution_polys(cs: &CRConditionSet, degree: usize) -> Vec<AlgPoly> {
    let (n, q, d) = (cs.n(), cs.q(), cs.dim());
    let alg = cs.algebra();
    let monos = monomials(n, degree);
    let lower = if degree == 0 {
        Vec::new()
    } else {
        monomials(n, degree - 1)
    };
    let row_of = |e: &[u32]| lower.iter().position(|m| m.as_slice() == e);
    let cols = monos.len() * d;
    let rows = q * lower.len() * d;
    if rows == 0 {
        return (0..cols)
            .map(|c| {
                let mut p = AlgPoly::zero(n, d);
                p.push(monos[c / d].clone(), alg.e(c % d));
                p
            })
            .collect();
    }
    let mut mat = DMatrix::zeros(rows, cols);
    // Right multiplication tables e_s a^j_m.
    let prods: Vec<Vec<Vec<AlgElem>>> = (0..q)
        .map(|m| {
            (0..n)
                .map(|j| (0..d).map(|s| alg.mul(&alg.e(s), cs.a(m, j))).collect())
                .collect()
        })
        .collect();
    for (mi, mono) in monos.iter().enumerate() {
        for j in 0..n {
            if mono[j] == 0 {
                continue;
            }
            let k = mono[j] as f64;
            let mut e = mono.clone();
            e[j] -= 1;
            let r = row_of(&e).expect("lower-degree monomial");
            for m in 0..q {
                for s in 0..d {
                    let col = mi * d + s;
                    let p = &prods[m][j][s];
                    for t in 0..d {
                        mat[((m * lower.len() + r) * d + t, col)] += k * p.0[t];
                    }
                }
            }
        }
    }
    let z = null_space(&mat, NULL_TOL);
    (0..z.ncols())
        .map(|c| {
            let mut p = AlgPoly::zero(n, d);
            for (mi, mono) in monos.iter().enumerate() {
                let coeff: Vec<f64> = (0..d).map(|s| z[(mi * d + s, c)]).collect();
                if coeff.iter().any(|v| *v != 0.0) {
                    p.push(mono.clone(), AlgElem(coeff));
                }
            }
            p
        })
        .collect()
}

/// Coordinates of `p` in the monomial-by-basis layout used by
/// [`polynomial_solution_basis`].
pub fn coefficient_vector(p: &AlgPoly, degree: usize) -> Vec<f64> {
    let monos = monomials(p.n, degree);
    let mut v = vec![0.0; monos.len() * p.dim];
    for t in &p.terms {
        if let Some(mi) = monos.iter().position(|m| *m == t.exp) {
            for s in 0..p.dim {
                v[mi * p.dim + s] += t.coeff[s];
            }
        }
    }
    v
}
