//! Resolution of algebra, condition-set and function references.
//!
//! A reference is first tried as a built-in name and only then as a file
//! path. When both exist the built-in wins and a warning is returned.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::admissibility::{CRConditionSet, ConditionFile};
use crate::algebra::{builtin, AlgebraTable};
use crate::error::{Error, Result};
use crate::solutions::AlgPoly;
use crate::suite;

/// A resolved value together with any warnings produced on the way.
#[derive(Debug, Clone)]
pub struct Resolved<T> {
    pub value: T,
    pub warnings: Vec<String>,
}

fn locate(reference: &str, base: Option<&Path>) -> PathBuf {
    let p = Path::new(reference);
    match base {
        Some(b) if p.is_relative() => b.join(p),
        _ => p.to_path_buf(),
    }
}

fn collision(reference: &str, base: Option<&Path>) -> Vec<String> {
    let path = locate(reference, base);
    if path.is_file() {
        vec![format!(
            "`{reference}` names a built-in and the file {}; using the built-in",
            path.display()
        )]
    } else {
        Vec::new()
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// Resolve an algebra name or file.
pub fn resolve_algebra(reference: &str, base: Option<&Path>) -> Result<Resolved<AlgebraTable>> {
    match builtin(reference) {
        Ok(t) => Ok(Resolved {
            value: t,
            warnings: collision(reference, base),
        }),
        Err(Error::UnknownAlgebra(_)) => {
            let path = locate(reference, base);
            if !path.is_file() {
                return Err(Error::UnknownAlgebra(reference.to_string()));
            }
            let t = AlgebraTable::from_json(reference, &read(&path)?)?;
            Ok(Resolved {
                value: t,
                warnings: Vec::new(),
            })
        }
        Err(e) => Err(e),
    }
}

/// Names accepted by [`builtin_conditions`].
pub const BUILTIN_CONDITIONS: &[&str] = &[
    "dbar",
    "fueter",
    "induced(<conditions>,<copies>)",
    "adiff(<algebra>)",
    "anticommuting(<algebra>)",
    "m2r-single",
    "m2r-three",
];

fn split_args(s: &str) -> Option<(&str, &str)> {
    let p = s.find('(')?;
    if !s.ends_with(')') {
        return None;
    }
    Some((&s[..p], &s[p + 1..s.len() - 1]))
}

/// Look up a built-in condition set. `Ok(None)` means the name is not built in.
pub fn builtin_conditions(name: &str) -> Result<Option<CRConditionSet>> {
    let name = name.trim();
    let cs = match name {
        "dbar" => CRConditionSet::dbar(),
        "fueter" => CRConditionSet::fueter(),
        "m2r-single" => suite::m2r_single(0),
        "m2r-three" => suite::m2r_three(0),
        _ => match split_args(name) {
            Some(("adiff", alg)) => CRConditionSet::a_differentiable(Arc::new(builtin(alg)?))?,
            Some(("anticommuting", alg)) => {
                CRConditionSet::anticommuting_single(Arc::new(builtin(alg)?))?
            }
            Some(("induced", args)) => {
                let (inner, copies) = args.rsplit_once(',').ok_or_else(|| {
                    Error::Parse(format!(
                        "expected induced(<conditions>,<copies>) in `{name}`"
                    ))
                })?;
                let copies: usize = copies
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad copy count in `{name}`")))?;
                let base = builtin_conditions(inner)?
                    .ok_or_else(|| Error::Parse(format!("unknown condition set `{inner}`")))?;
                base.induced(copies)?
            }
            _ => return Ok(None),
        },
    };
    Ok(Some(cs))
}

/// Resolve a condition-set name or file. Algebra references inside a file
/// are resolved relative to the file's directory.
pub fn resolve_conditions(reference: &str) -> Result<Resolved<CRConditionSet>> {
    if let Some(cs) = builtin_conditions(reference)? {
        return Ok(Resolved {
            value: cs,
            warnings: collision(reference, None),
        });
    }
    let path = Path::new(reference);
    if !path.is_file() {
        return Err(Error::Parse(format!(
            "`{reference}` is neither a built-in condition set nor a readable file"
        )));
    }
    let file = ConditionFile::from_json(&read(path)?)?;
    let alg = resolve_algebra(&file.algebra, path.parent())?;
    let cs = file.into_conditions(Arc::new(alg.value))?;
    Ok(Resolved {
        value: cs,
        warnings: alg.warnings,
    })
}

/// Names accepted by [`resolve_function`].
pub const BUILTIN_FUNCTIONS: &[&str] = &["z3+2z", "zeta1", "zeta2", "zeta3", "square", "one"];

/// Resolve a test function: a built-in name or a polynomial JSON file.
/// `square` is `X^2` for `X = sum_k x_k e_k`; `one` is the constant `e_0`.
pub fn resolve_function(reference: &str, cs: &CRConditionSet) -> Result<Resolved<AlgPoly>> {
    let alg = cs.algebra();
    let f = match reference {
        "z3+2z" => Some(suite::complex_cubic()),
        "zeta1" => Some(suite::fueter_zeta(1)),
        "zeta2" => Some(suite::fueter_zeta(2)),
        "zeta3" => Some(suite::fueter_zeta(3)),
        "square" => {
            let x = suite::identity_poly(alg);
            Some(x.mul(&x, alg))
        }
        "one" => Some(AlgPoly::constant(cs.n(), &alg.unit())),
        _ => None,
    };
    if let Some(f) = f {
        return Ok(Resolved {
            value: f,
            warnings: collision(reference, None),
        });
    }
    let path = Path::new(reference);
    if !path.is_file() {
        return Err(Error::Parse(format!(
            "`{reference}` is neither a built-in function nor a readable file"
        )));
    }
    let text = read(path)?;
    let p: AlgPoly = serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("{} at line {}, column {}", e, e.line(), e.column())))?;
    p.validate()?;
    Ok(Resolved {
        value: p,
        warnings: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_condition_names() {
        assert_eq!(builtin_conditions("fueter").unwrap().unwrap().n(), 4);
        let ind = builtin_conditions("induced(fueter,2)").unwrap().unwrap();
        assert_eq!((ind.n(), ind.q()), (8, 2));
        let ad = builtin_conditions("adiff(tessarines)").unwrap().unwrap();
        assert_eq!((ad.n(), ad.q()), (4, 3));
        assert!(builtin_conditions("something.json").unwrap().is_none());
    }

    #[test]
    fn unknown_algebra_reference() {
        assert!(matches!(
            resolve_algebra("/nonexistent/alg.json", None),
            Err(Error::UnknownAlgebra(_))
        ));
    }
}
