//! Finite-dimensional unital real algebras given by structure constants.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

/// Tolerance used for the unit check and for the structural flags.
pub const TABLE_TOL: f64 = 1e-12;

/// Element of an algebra, stored as real coordinates in the basis `e_0..e_{dim-1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AlgElem(pub Vec<f64>);

impl AlgElem {
    pub fn zero(dim: usize) -> Self {
        AlgElem(vec![0.0; dim])
    }

    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = vec![0.0; dim];
        v[k] = 1.0;
        AlgElem(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn add(&self, other: &AlgElem) -> AlgElem {
        AlgElem(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &AlgElem) -> AlgElem {
        AlgElem(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: f64) -> AlgElem {
        AlgElem(self.0.iter().map(|a| a * s).collect())
    }

    pub fn neg(&self) -> AlgElem {
        self.scale(-1.0)
    }

    /// `self += s * other`
    pub fn axpy(&mut self, s: f64, other: &AlgElem) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += s * b;
        }
    }

    /// Euclidean norm of the coordinate vector.
    pub fn norm(&self) -> f64 {
        self.0.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, a| m.max(a.abs()))
    }
}

/// Side on which an inverse multiplies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// Check `gamma[0][j][k] = gamma[j][0][k] = delta_jk` on flat structure constants.
pub fn validate_unit(dim: usize, gamma: &[f64]) -> bool {
    if gamma.len() != dim * dim * dim || dim == 0 {
        return false;
    }
    let g = |i: usize, j: usize, k: usize| gamma[(i * dim + j) * dim + k];
    (0..dim).all(|j| {
        (0..dim).all(|k| {
            let want = if j == k { 1.0 } else { 0.0 };
            (g(0, j, k) - want).abs() <= TABLE_TOL && (g(j, 0, k) - want).abs() <= TABLE_TOL
        })
    })
}

/// Structural properties detected when a table is built.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlgebraFlags {
    pub associative: bool,
    pub commutative: bool,
    pub associativity_defect: f64,
    pub commutativity_defect: f64,
}

/// Multiplication table `e_i e_j = sum_k gamma[i][j][k] e_k` with unit `e_0`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraTable {
    name: String,
    dim: usize,
    basis: Vec<String>,
    gamma: Vec<f64>,
    flags: AlgebraFlags,
}

/// On-disk form of an algebra.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraFile {
    #[serde(default)]
    pub schema_version: Option<u32>,
    pub dim: usize,
    pub basis: Vec<String>,
    /// `gamma[i][j][k]`
    pub gamma: Vec<Vec<Vec<f64>>>,
}

impl AlgebraTable {
    /// Build a table from flat structure constants indexed `(i * dim + j) * dim + k`.
    ///
    /// Fails unless `e_0` is a two-sided unit.
    pub fn new(name: impl Into<String>, basis: Vec<String>, gamma: Vec<f64>) -> Result<Self> {
        let dim = basis.len();
        if dim == 0 {
            return Err(Error::InvalidTable("empty basis".into()));
        }
        if gamma.len() != dim * dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "gamma has {} entries, expected {}",
                gamma.len(),
                dim * dim * dim
            )));
        }
        if gamma.iter().any(|g| !g.is_finite()) {
            return Err(Error::InvalidTable("non-finite structure constant".into()));
        }
        if !validate_unit(dim, &gamma) {
            return Err(Error::InvalidTable("e0 is not a two-sided unit".into()));
        }
        let mut t = AlgebraTable {
            name: name.into(),
            dim,
            basis,
            gamma,
            flags: AlgebraFlags {
                associative: true,
                commutative: true,
                associativity_defect: 0.0,
                commutativity_defect: 0.0,
            },
        };
        let a = t.associativity_defect();
        let c = t.commutativity_defect();
        t.flags = AlgebraFlags {
            associative: a <= TABLE_TOL,
            commutative: c <= TABLE_TOL,
            associativity_defect: a,
            commutativity_defect: c,
        };
        Ok(t)
    }

    /// Build from a closure giving `e_i e_j` as coordinates.
    pub fn from_products<F>(name: &str, basis: &[&str], prod: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> Vec<f64>,
    {
        let dim = basis.len();
        let mut gamma = vec![0.0; dim * dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                let p = prod(i, j);
                gamma[(i * dim + j) * dim..(i * dim + j + 1) * dim].copy_from_slice(&p);
            }
        }
        AlgebraTable::new(name, basis.iter().map(|s| s.to_string()).collect(), gamma)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis
    }

    pub fn flags(&self) -> AlgebraFlags {
        self.flags
    }

    pub fn is_commutative(&self) -> bool {
        self.flags.commutative
    }

    pub fn is_associative(&self) -> bool {
        self.flags.associative
    }

    /// Structure constant: coefficient of `e_k` in `e_i e_j`.
    #[inline]
    pub fn g(&self, i: usize, j: usize, k: usize) -> f64 {
        self.gamma[(i * self.dim + j) * self.dim + k]
    }

    pub fn gamma_flat(&self) -> &[f64] {
        &self.gamma
    }

    pub fn unit(&self) -> AlgElem {
        AlgElem::basis(self.dim, 0)
    }

    pub fn zero(&self) -> AlgElem {
        AlgElem::zero(self.dim)
    }

    pub fn e(&self, k: usize) -> AlgElem {
        AlgElem::basis(self.dim, k)
    }

    /// Embed a real scalar as `s e_0`.
    pub fn scalar(&self, s: f64) -> AlgElem {
        self.unit().scale(s)
    }

    pub fn mul(&self, a: &AlgElem, b: &AlgElem) -> AlgElem {
        let d = self.dim;
        debug_assert_eq!(a.dim(), d);
        debug_assert_eq!(b.dim(), d);
        let mut out = vec![0.0; d];
        for i in 0..d {
            let ai = a.0[i];
            if ai == 0.0 {
                continue;
            }
            for j in 0..d {
                let c = ai * b.0[j];
                if c == 0.0 {
                    continue;
                }
                let row = &self.gamma[(i * d + j) * d..(i * d + j + 1) * d];
                for (o, g) in out.iter_mut().zip(row) {
                    *o += c * g;
                }
            }
        }
        AlgElem(out)
    }

    /// Checked product; fails when an operand does not conform to the table.
    pub fn try_mul(&self, a: &AlgElem, b: &AlgElem) -> Result<AlgElem> {
        if a.dim() != self.dim || b.dim() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "operands have {} and {} coordinates, algebra has dimension {}",
                a.dim(),
                b.dim(),
                self.dim
            )));
        }
        Ok(self.mul(a, b))
    }

    /// Matrix of `x -> a x` in the basis.
    pub fn left_mul_matrix(&self, a: &AlgElem) -> DMatrix<f64> {
        let d = self.dim;
        DMatrix::from_fn(d, d, |k, s| (0..d).map(|r| a.0[r] * self.g(r, s, k)).sum())
    }

    /// Matrix of `x -> x a` in the basis.
    pub fn right_mul_matrix(&self, a: &AlgElem) -> DMatrix<f64> {
        let d = self.dim;
        DMatrix::from_fn(d, d, |k, s| (0..d).map(|r| a.0[r] * self.g(s, r, k)).sum())
    }

    /// Inverse on the given side: `x a = e_0` for [`Side::Left`], `a x = e_0`
    /// for [`Side::Right`].
    pub fn try_invert_side(&self, a: &AlgElem, side: Side) -> Result<AlgElem> {
        if a.dim() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "element has {} coordinates, algebra has dimension {}",
                a.dim(),
                self.dim
            )));
        }
        // x a = R_a x and a x = L_a x.
        let m = match side {
            Side::Left => self.right_mul_matrix(a),
            Side::Right => self.left_mul_matrix(a),
        };
        let s = linalg::svd(&m).s;
        let smax = s.iter().cloned().fold(0.0, f64::max);
        let smin = s.iter().cloned().fold(f64::INFINITY, f64::min);
        if smax == 0.0 || smin < 1e-10 * smax {
            return Err(Error::Singular);
        }
        let lu = m.lu();
        let rhs = DVector::from_column_slice(&self.unit().0);
        let x = lu.solve(&rhs).ok_or(Error::Singular)?;
        let inv = AlgElem(x.as_slice().to_vec());
        let check = match side {
            Side::Left => self.mul(&inv, a),
            Side::Right => self.mul(a, &inv),
        };
        if check.sub(&self.unit()).max_abs() > 1e-10 * (1.0 + inv.max_abs() * a.max_abs()) {
            return Err(Error::Singular);
        }
        Ok(inv)
    }

    /// Two-sided inverse: a right inverse that is also a left inverse.
    pub fn try_invert(&self, a: &AlgElem) -> Result<AlgElem> {
        let inv = self.try_invert_side(a, Side::Right)?;
        let left = self.mul(&inv, a).sub(&self.unit()).max_abs();
        if left > 1e-10 * (1.0 + inv.max_abs() * a.max_abs()) {
            return Err(Error::Singular);
        }
        Ok(inv)
    }

    /// `true` when `e_0` is a two-sided unit; always the case for a
    /// constructed table.
    pub fn validate_unit(&self) -> bool {
        validate_unit(self.dim, &self.gamma)
    }

    /// `max |(e_i e_j) e_k - e_i (e_j e_k)|` over basis triples.
    pub fn associativity_defect(&self) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let ij = self.mul(&self.e(i), &self.e(j));
                for k in 0..d {
                    let l = self.mul(&ij, &self.e(k));
                    let r = self.mul(&self.e(i), &self.mul(&self.e(j), &self.e(k)));
                    worst = worst.max(l.sub(&r).max_abs());
                }
            }
        }
        worst
    }

    /// `max |e_i e_j - e_j e_i|` over basis pairs.
    pub fn commutativity_defect(&self) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    worst = worst.max((self.g(i, j, k) - self.g(j, i, k)).abs());
                }
            }
        }
        worst
    }

    /// `e_0^2 + e_1^2 + ... + e_{dim-1}^2`
    pub fn sum_of_squares(&self) -> AlgElem {
        let mut s = self.zero();
        for k in 0..self.dim {
            s = s.add(&self.mul(&self.e(k), &self.e(k)));
        }
        s
    }

    /// Largest deviation from `e_i^2 = -e_0` and `e_i e_j = -e_j e_i` over `i, j >= 1`.
    pub fn anticommuting_defect(&self) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for i in 1..d {
            let sq = self.mul(&self.e(i), &self.e(i)).add(&self.unit());
            worst = worst.max(sq.max_abs());
            for j in (i + 1)..d {
                let s = self
                    .mul(&self.e(i), &self.e(j))
                    .add(&self.mul(&self.e(j), &self.e(i)));
                worst = worst.max(s.max_abs());
            }
        }
        worst
    }

    pub fn to_file(&self) -> AlgebraFile {
        let d = self.dim;
        AlgebraFile {
            schema_version: Some(crate::SCHEMA_VERSION),
            dim: d,
            basis: self.basis.clone(),
            gamma: (0..d)
                .map(|i| {
                    (0..d)
                        .map(|j| (0..d).map(|k| self.g(i, j, k)).collect())
                        .collect()
                })
                .collect(),
        }
    }

    pub fn from_file(name: &str, f: &AlgebraFile) -> Result<Self> {
        let d = f.dim;
        if f.basis.len() != d {
            return Err(Error::DimensionMismatch(format!(
                "basis has {} names, dim is {}",
                f.basis.len(),
                d
            )));
        }
        if f.gamma.len() != d
            || f.gamma
                .iter()
                .any(|r| r.len() != d || r.iter().any(|c| c.len() != d))
        {
            return Err(Error::DimensionMismatch(format!(
                "gamma must have shape {d}x{d}x{d}"
            )));
        }
        let gamma = f.gamma.iter().flatten().flatten().copied().collect();
        AlgebraTable::new(name, f.basis.clone(), gamma)
    }

    pub fn from_json(name: &str, text: &str) -> Result<Self> {
        let f: AlgebraFile = serde_json::from_str(text).map_err(|e| {
            Error::Parse(format!("{} at line {}, column {}", e, e.line(), e.column()))
        })?;
        Self::from_file(name, &f)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("serializable")
    }
}

fn names(prefix: &str, dim: usize) -> Vec<String> {
    (0..dim).map(|k| format!("{prefix}{k}")).collect()
}

/// `e_1^2 = a e_0 + b e_1`.
pub fn dim2(a: f64, b: f64) -> AlgebraTable {
    AlgebraTable::from_products(&format!("dim2({a},{b})"), &["e0", "e1"], |i, j| {
        match (i, j) {
            (0, 0) => vec![1.0, 0.0],
            (0, 1) | (1, 0) => vec![0.0, 1.0],
            _ => vec![a, b],
        }
    })
    .expect("valid table")
}

pub fn reals() -> AlgebraTable {
    AlgebraTable::new("reals", vec!["e0".into()], vec![1.0]).expect("valid table")
}

pub fn complex() -> AlgebraTable {
    let mut t = dim2(-1.0, 0.0);
    t.name = "complex".into();
    t.basis = vec!["1".into(), "i".into()];
    t
}

/// Conjugation used by the doubling: negate every non-unit coordinate.
fn conj(x: &[f64]) -> Vec<f64> {
    x.iter()
        .enumerate()
        .map(|(k, v)| if k == 0 { *v } else { -v })
        .collect()
}

/// Cayley-Dickson doubling: `(a, b)(c, d) = (ac - conj(d) b, d a + b conj(c))`.
pub fn cayley_dickson(base: &AlgebraTable) -> AlgebraTable {
    let d = base.dim;
    let n = 2 * d;
    let split = |k: usize| -> (AlgElem, AlgElem) {
        if k < d {
            (base.e(k), base.zero())
        } else {
            (base.zero(), base.e(k - d))
        }
    };
    let name = match base.name.as_str() {
        "reals" => "complex".to_string(),
        "complex" => "quaternions".to_string(),
        "quaternions" => "octonions".to_string(),
        "octonions" => "sedenions".to_string(),
        other => format!("cd({other})"),
    };
    let basis = names("e", n);
    let basis_ref: Vec<&str> = basis.iter().map(|s| s.as_str()).collect();
    AlgebraTable::from_products(&name, &basis_ref, |i, j| {
        let (a, b) = split(i);
        let (c, dd) = split(j);
        let first = base.mul(&a, &c).sub(&base.mul(&AlgElem(conj(&dd.0)), &b));
        let second = base.mul(&dd, &a).add(&base.mul(&b, &AlgElem(conj(&c.0))));
        let mut v = first.0;
        v.extend(second.0);
        v
    })
    .expect("doubling preserves the unit")
}

pub fn quaternions() -> AlgebraTable {
    let mut t = cayley_dickson(&complex());
    t.basis = vec!["1".into(), "i".into(), "j".into(), "k".into()];
    t
}

pub fn octonions() -> AlgebraTable {
    cayley_dickson(&quaternions())
}

pub fn sedenions() -> AlgebraTable {
    cayley_dickson(&octonions())
}

/// Commutative tessarines (bicomplex numbers): `i^2 = -1`, `j^2 = 1`, `k = ij`.
pub fn tessarines() -> AlgebraTable {
    // Products of the basis (1, i, j, k) as (sign, index).
    let table: [[(f64, usize); 4]; 4] = [
        [(1.0, 0), (1.0, 1), (1.0, 2), (1.0, 3)],
        [(1.0, 1), (-1.0, 0), (1.0, 3), (-1.0, 2)],
        [(1.0, 2), (1.0, 3), (1.0, 0), (1.0, 1)],
        [(1.0, 3), (-1.0, 2), (1.0, 1), (-1.0, 0)],
    ];
    AlgebraTable::from_products("tessarines", &["1", "i", "j", "k"], |a, b| {
        let (s, k) = table[a][b];
        let mut v = vec![0.0; 4];
        v[k] = s;
        v
    })
    .expect("valid table")
}

/// Real 2x2 matrices with basis `e0 = I, e1 = E12, e2 = E21, e3 = E11`.
pub fn m2r() -> AlgebraTable {
    AlgebraTable::from_products("m2r", &["I", "E12", "E21", "E11"], |i, j| {
        let v = |c: [f64; 4]| c.to_vec();
        match (i, j) {
            (0, k) | (k, 0) => AlgElem::basis(4, k).0,
            (1, 1) => v([0.0, 0.0, 0.0, 0.0]),
            (1, 2) => v([0.0, 0.0, 0.0, 1.0]),
            (1, 3) => v([0.0, 0.0, 0.0, 0.0]),
            (2, 1) => v([1.0, 0.0, 0.0, -1.0]),
            (2, 2) => v([0.0, 0.0, 0.0, 0.0]),
            (2, 3) => v([0.0, 0.0, 1.0, 0.0]),
            (3, 1) => v([0.0, 1.0, 0.0, 0.0]),
            (3, 2) => v([0.0, 0.0, 0.0, 0.0]),
            (3, 3) => v([0.0, 0.0, 0.0, 1.0]),
            _ => unreachable!(),
        }
    })
    .expect("valid table")
}

/// Quaternion-type algebra with `e1^2 = a1`, `e2^2 = a2`, `e3 = e1 e2`.
pub fn clifford(a1: f64, a2: f64) -> AlgebraTable {
    AlgebraTable::from_products(
        &format!("clifford({a1},{a2})"),
        &["e0", "e1", "e2", "e3"],
        |i, j| {
            let mut v = vec![0.0; 4];
            match (i, j) {
                (0, k) | (k, 0) => v[k] = 1.0,
                (1, 1) => v[0] = a1,
                (1, 2) => v[3] = 1.0,
                (1, 3) => v[2] = a1,
                (2, 1) => v[3] = -1.0,
                (2, 2) => v[0] = a2,
                (2, 3) => v[1] = -a2,
                (3, 1) => v[2] = -a1,
                (3, 2) => v[1] = a2,
                (3, 3) => v[0] = -a1 * a2,
                _ => unreachable!(),
            }
            v
        },
    )
    .expect("valid table")
}

/// `R[t] / (t^3 - c2 t^2 - c1 t - c0)` with basis `(1, t, t^2)`.
pub fn cubic(c0: f64, c1: f64, c2: f64) -> AlgebraTable {
    // Coordinates of t^p after reduction.
    let power = |p: usize| -> Vec<f64> {
        let mut v = vec![1.0, 0.0, 0.0];
        for _ in 0..p {
            let top = v[2];
            v = vec![top * c0, v[0] + top * c1, v[1] + top * c2];
        }
        v
    };
    AlgebraTable::from_products(
        &format!("cubic({c0},{c1},{c2})"),
        &["1", "t", "t2"],
        |i, j| power(i + j),
    )
    .expect("valid table")
}

/// Non-commutative associative three-dimensional family. The parameters are
/// the `e1` and `e2` coordinates of `e1 e2` and of `e2 e1`.
pub fn noncom3(p1_12: f64, p2_12: f64, p1_21: f64, p2_21: f64) -> AlgebraTable {
    AlgebraTable::from_products(
        &format!("noncom3({p1_12},{p2_12},{p1_21},{p2_21})"),
        &["e0", "e1", "e2"],
        |i, j| match (i, j) {
            (0, k) | (k, 0) => AlgElem::basis(3, k).0,
            (1, 1) => vec![-p2_12 * p2_21, p2_12 + p2_21, 0.0],
            (2, 2) => vec![-p1_12 * p1_21, 0.0, p1_12 + p1_21],
            (1, 2) => vec![-p1_12 * p2_12, p1_12, p2_12],
            (2, 1) => vec![-p1_21 * p2_21, p1_21, p2_21],
            _ => unreachable!(),
        },
    )
    .expect("valid table")
}

fn parse_args(args: &str, want: usize, name: &str) -> Result<Vec<f64>> {
    let vals: std::result::Result<Vec<f64>, _> =
        args.split(',').map(|s| s.trim().parse::<f64>()).collect();
    match vals {
        Ok(v) if v.len() == want => Ok(v),
        _ => Err(Error::UnknownAlgebra(name.to_string())),
    }
}

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: &[&str] = &[
    "reals",
    "complex",
    "split-complex",
    "dual",
    "quaternions",
    "tessarines",
    "m2r",
    "octonions",
    "sedenions",
    "dim2(a,b)",
    "clifford(a1,a2)",
    "cubic(c0,c1,c2)",
    "noncom3(p1,p2,p3,p4)",
];

/// Look up a built-in algebra by name, e.g. `complex` or `clifford(2,3)`.
pub fn builtin(name: &str) -> Result<AlgebraTable> {
    let name = name.trim();
    let (head, args) = match name.find('(') {
        Some(p) if name.ends_with(')') => (&name[..p], Some(&name[p + 1..name.len() - 1])),
        Some(_) => return Err(Error::UnknownAlgebra(name.to_string())),
        None => (name, None),
    };
    let t = match (head, args) {
        ("reals", None) => reals(),
        ("complex", None) => complex(),
        ("split-complex", None) => dim2(1.0, 0.0),
        ("dual", None) => dim2(0.0, 0.0),
        ("quaternions" | "quaternion", None) => quaternions(),
        ("tessarines" | "tessarine", None) => tessarines(),
        ("m2r", None) => m2r(),
        ("octonions" | "octonion", None) => octonions(),
        ("sedenions" | "sedenion", None) => sedenions(),
        ("dim2", Some(a)) => {
            let v = parse_args(a, 2, name)?;
            dim2(v[0], v[1])
        }
        ("clifford", Some(a)) => {
            let v = parse_args(a, 2, name)?;
            clifford(v[0], v[1])
        }
        ("cubic", Some(a)) => {
            let v = parse_args(a, 3, name)?;
            cubic(v[0], v[1], v[2])
        }
        ("noncom3", Some(a)) => {
            let v = parse_args(a, 4, name)?;
            noncom3(v[0], v[1], v[2], v[3])
        }
        _ => return Err(Error::UnknownAlgebra(name.to_string())),
    };
    Ok(t)
}
