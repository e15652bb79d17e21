//! Checking and finding singular vectors in V^k(sl_n).

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::arith::Rational;
use crate::lie::{Gen, LieError, Weight};
use crate::linalg::{nullspace_sparse, SparseMatrix};
use crate::vacuum::{weight_basis, VacuumContext, VacuumElement, VacuumEngine, VacuumMonomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SingularError {
    #[error("vector is not homogeneous in weight and degree")]
    Inhomogeneous,
    #[error("the zero vector is not a singular vector")]
    Zero,
    #[error("degree must be at least 1, got {0}")]
    Degree(i64),
    #[error("kernel vector {0} failed the singularity check")]
    CrossCheck(usize),
    #[error(transparent)]
    Lie(#[from] LieError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorCheck {
    pub label: String,
    pub residual: VacuumElement,
    pub is_zero: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularReport {
    pub weight: Weight,
    pub degree: i64,
    pub checks: Vec<OperatorCheck>,
}

impl SingularReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.is_zero)
    }
}

impl fmt::Display for SingularReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "weight {} degree {}", self.weight, self.degree)?;
        for c in &self.checks {
            let status = if c.is_zero { "zero" } else { "NONZERO" };
            writeln!(f, "  {:<10} {status} ({} terms)", c.label, c.residual.len())?;
        }
        write!(f, "{}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// The raising operators `e[i,i+1](0)` for each simple root and `f[1,n](1)`.
pub fn raising_operators(ctx: &VacuumContext) -> Vec<(Gen, i32)> {
    let alg = ctx.algebra();
    let n = alg.n();
    let mut ops: Vec<(Gen, i32)> = (1..n).map(|i| (alg.e(i, i + 1), 0)).collect();
    ops.push((alg.f(1, n), 1));
    ops
}

/// Every `e[i,j](0)` and every `x(1)`.
pub fn extended_operators(ctx: &VacuumContext) -> Vec<(Gen, i32)> {
    let alg = ctx.algebra();
    let n = alg.n();
    let mut ops = Vec::new();
    for i in 1..n {
        for j in i + 1..=n {
            ops.push((alg.e(i, j), 0));
        }
    }
    ops.extend(alg.generators().map(|g| (g, 1)));
    ops
}

fn label(ctx: &VacuumContext, op: (Gen, i32)) -> String {
    format!("{}({})", ctx.algebra().describe(op.0), op.1)
}

pub fn verify_singular(ctx: &VacuumContext, v: &VacuumElement) -> Result<SingularReport, SingularError> {
    verify_with(ctx, v, &raising_operators(ctx))
}

/// Same as [`verify_singular`] but with the full set of annihilation checks.
pub fn verify_singular_extended(ctx: &VacuumContext, v: &VacuumElement) -> Result<SingularReport, SingularError> {
    verify_with(ctx, v, &extended_operators(ctx))
}

fn verify_with(ctx: &VacuumContext, v: &VacuumElement, ops: &[(Gen, i32)]) -> Result<SingularReport, SingularError> {
    if v.is_zero() {
        return Err(SingularError::Zero);
    }
    let alg = ctx.algebra();
    let (root, degree) = v.grading(alg).ok_or(SingularError::Inhomogeneous)?;
    let mut eng = VacuumEngine::new(ctx);
    let checks = ops
        .iter()
        .map(|&op| {
            let residual = eng.act(op.0, op.1, v);
            OperatorCheck { label: label(ctx, op), is_zero: residual.is_zero(), residual }
        })
        .collect();
    Ok(SingularReport { weight: alg.root_to_weight(&root), degree, checks })
}

/// Basis of the singular vectors in the component of weight `weight` and degree `d`.
pub fn search_singular(ctx: &VacuumContext, weight: &Weight, d: i64) -> Result<Vec<VacuumElement>, SingularError> {
    if d < 1 {
        return Err(SingularError::Degree(d));
    }
    let basis = weight_basis(ctx, weight, d)?;
    if basis.is_empty() {
        return Ok(Vec::new());
    }
    let mut eng = VacuumEngine::new(ctx);
    let mut mat = SparseMatrix::new(basis.len());
    for op in raising_operators(ctx) {
        // Rows of this block are indexed by the monomials of the target component.
        let mut rows: HashMap<VacuumMonomial, usize> = HashMap::new();
        let mut entries: Vec<Vec<(usize, Rational)>> = Vec::new();
        for (j, m) in basis.iter().enumerate() {
            for (w, c) in eng.act_monomial(op.0, op.1, m).iter() {
                let next = rows.len();
                let i = *rows.entry(w.clone()).or_insert(next);
                if i == entries.len() {
                    entries.push(Vec::new());
                }
                entries[i].push((j, c.clone()));
            }
        }
        // Fix a deterministic row order within the block.
        let mut keyed: Vec<(VacuumMonomial, usize)> = rows.into_iter().collect();
        keyed.sort();
        for (_, i) in keyed {
            mat.push_row(std::mem::take(&mut entries[i]));
        }
    }
    let kernel = nullspace_sparse(&mat);
    let mut out = Vec::with_capacity(kernel.len());
    for (idx, vec) in kernel.into_iter().enumerate() {
        let mut v = VacuumElement::zero();
        for (m, c) in basis.iter().zip(vec) {
            v.add_term(m.clone(), c);
        }
        if !verify_singular(ctx, &v)?.passed() {
            return Err(SingularError::CrossCheck(idx));
        }
        out.push(v);
    }
    Ok(out)
}

/// Coefficients `c` with `sum c_i [words_i] = target`, where each word is read
/// as a literal product of creation operators. `None` unless the solution
/// exists and is unique.
pub fn coordinates_in_words(
    ctx: &VacuumContext,
    target: &VacuumElement,
    words: &[VacuumMonomial],
) -> Option<Vec<Rational>> {
    let mut eng = VacuumEngine::new(ctx);
    let cols = words.len() + 1;
    let mut rows: HashMap<VacuumMonomial, Vec<(usize, Rational)>> = HashMap::new();
    for (j, w) in words.iter().enumerate() {
        for (m, c) in eng.normal_form(w).ok()?.terms() {
            rows.entry(m.clone()).or_default().push((j, c.clone()));
        }
    }
    for (m, c) in target.terms() {
        rows.entry(m.clone()).or_default().push((words.len(), c.clone()));
    }
    let mut keyed: Vec<_> = rows.into_iter().collect();
    keyed.sort();
    let mut mat = SparseMatrix::new(cols);
    for (_, r) in keyed {
        mat.push_row(r);
    }
    let kernel = nullspace_sparse(&mat);
    let [k] = kernel.as_slice() else { return None };
    let lam = &k[words.len()];
    if lam.is_zero() {
        return None;
    }
    let s = -lam.inv().ok()?;
    Some(k[..words.len()].iter().map(|c| c * &s).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vacuum::Letter;

    fn q(n: i64, d: i64) -> Rational {
        Rational::frac(n, d)
    }

    #[test]
    fn vacuum_is_singular() {
        let c = VacuumContext::new(6, q(-7, 2)).unwrap();
        let r = verify_singular(&c, &VacuumElement::vacuum()).unwrap();
        assert!(r.passed());
        assert_eq!(r.degree, 0);
        assert_eq!(r.checks.len(), 6);
        assert!(verify_singular_extended(&c, &VacuumElement::vacuum()).unwrap().passed());
    }

    #[test]
    fn current_is_not_singular_at_level_one() {
        let c = VacuumContext::new(2, q(1, 1)).unwrap();
        let e = c.algebra().e(1, 2);
        let v = VacuumElement::monomial(vec![Letter::new(e, -1)], q(1, 1));
        let r = verify_singular(&c, &v).unwrap();
        assert!(!r.passed());
        assert!(r.checks[0].is_zero);
        assert_eq!(r.checks[1].residual, VacuumElement::scalar_vacuum(q(1, 1)));
    }

    #[test]
    fn rejects_bad_input() {
        let c = VacuumContext::new(3, q(1, 1)).unwrap();
        let alg = c.algebra();
        let mut v = VacuumElement::monomial(vec![Letter::new(alg.e(1, 2), -1)], q(1, 1));
        v.add_term(vec![Letter::new(alg.e(1, 2), -2)], q(1, 1));
        assert_eq!(verify_singular(&c, &v), Err(SingularError::Inhomogeneous));
        assert_eq!(verify_singular(&c, &VacuumElement::zero()), Err(SingularError::Zero));
        assert_eq!(search_singular(&c, &Weight::zero(2), 0), Err(SingularError::Degree(0)));
    }

    #[test]
    fn sl2_level_one() {
        let c = VacuumContext::new(2, q(1, 1)).unwrap();
        let e = c.algebra().e(1, 2);
        let got = search_singular(&c, &Weight::from_ints(&[4]), 2).unwrap();
        assert_eq!(got, vec![VacuumElement::monomial(vec![Letter::new(e, -1), Letter::new(e, -1)], q(1, 1))]);
        // At generic level e(-1)^2 is not singular.
        let c2 = VacuumContext::new(2, q(1, 2)).unwrap();
        assert!(search_singular(&c2, &Weight::from_ints(&[4]), 2).unwrap().is_empty());
    }

    #[test]
    fn sl2_level_k_gives_power_k_plus_one() {
        // e(-1)^{k+1}|0> is singular at nonnegative integer level k.
        for k in 0..4i64 {
            let c = VacuumContext::new(2, q(k, 1)).unwrap();
            let e = c.algebra().e(1, 2);
            let d = k + 1;
            let got = search_singular(&c, &Weight::from_ints(&[2 * d]), d).unwrap();
            let m = vec![Letter::new(e, -1); d as usize];
            assert_eq!(got, vec![VacuumElement::monomial(m, q(1, 1))], "k = {k}");
        }
    }

    #[test]
    fn word_coordinates() {
        let c = VacuumContext::new(3, q(1, 1)).unwrap();
        let alg = c.algebra();
        let (e, f, h) = (alg.e(1, 2), alg.f(1, 2), alg.h(1));
        // e(-1) f(-1)|0> = f(-1) e(-1)|0> + h(-2)|0>.
        let ef = vec![Letter::new(e, -1), Letter::new(f, -1)];
        let fe = vec![Letter::new(f, -1), Letter::new(e, -1)];
        let h2 = vec![Letter::new(h, -2)];
        let target = crate::vacuum::normal_form(&c, &ef).unwrap().scaled(&q(3, 1));
        assert_eq!(coordinates_in_words(&c, &target, &[ef.clone(), h2.clone()]), Some(vec![q(3, 1), q(0, 1)]));
        assert_eq!(coordinates_in_words(&c, &target, &[fe.clone(), h2.clone()]), Some(vec![q(3, 1), q(3, 1)]));
        // Dependent words leave the coordinates undetermined.
        assert_eq!(coordinates_in_words(&c, &target, &[ef.clone(), fe.clone(), h2.clone()]), None);
        // Target outside the span.
        assert_eq!(coordinates_in_words(&c, &target, &[fe]), None);
    }

    #[test]
    fn empty_components() {
        let c = VacuumContext::new(6, q(-7, 2)).unwrap();
        assert!(search_singular(&c, &Weight::from_ints(&[0, 1, 0, 1, 0]), 1).unwrap().is_empty());
        assert!(search_singular(&c, &Weight::from_ints(&[1, 0, 0, 0, 0]), 3).unwrap().is_empty());
    }
}
