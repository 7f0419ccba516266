//! Finite-dimensional associative algebras given by structure constants,
//! their bimodules, and basis-level axiom verification.
//!
//! Axioms are checked on basis tuples only; bilinearity extends them to the
//! whole space. Units are never assumed.

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::{unit_vec, vec_sub, Matrix, Tensor3};
use crate::report::VerificationReport;

/// A bilinear map between (possibly distinct) spaces, stored as a 3-index
/// tensor: `t[i][j][k]` = coefficient of output basis `k` at inputs `(i, j)`.
pub type BilinearMap = Tensor3;

/// An associative algebra by structure constants:
/// `mu[i][j][k]` = coefficient of `e_k` in `e_i * e_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Algebra {
    pub field: Field,
    pub dim: usize,
    pub basis_names: Vec<String>,
    pub mu: Tensor3,
}

impl Algebra {
    pub fn new(field: Field, dim: usize, mu: Tensor3) -> Result<Algebra> {
        if mu.dims() != (dim, dim, dim) {
            return Err(Error::ShapeMismatch(format!(
                "mu has dims {:?}, expected ({dim}, {dim}, {dim})",
                mu.dims()
            )));
        }
        if mu.field() != field {
            return Err(Error::ShapeMismatch("mu entries in wrong field".into()));
        }
        let basis_names = (0..dim).map(|i| format!("e{i}")).collect();
        Ok(Algebra {
            field,
            dim,
            basis_names,
            mu,
        })
    }

    pub fn zero_product(field: Field, dim: usize) -> Algebra {
        Algebra::new(field, dim, Tensor3::zero(dim, dim, dim, &field)).unwrap()
    }

    pub fn basis(&self, i: usize) -> Vec<Scalar> {
        unit_vec(self.dim, i, &self.field)
    }
}

/// Bilinear contraction of two vectors with the structure constants.
pub fn multiply(a: &Algebra, x: &[Scalar], y: &[Scalar]) -> Result<Vec<Scalar>> {
    if x.len() != a.dim || y.len() != a.dim {
        return Err(Error::ShapeMismatch("multiply vector length".into()));
    }
    Ok(a.mu.apply(x, y))
}

/// Checks associativity on every basis triple.
pub fn verify_algebra(a: &Algebra) -> VerificationReport {
    let mut report = VerificationReport::new();
    for i in 0..a.dim {
        for j in 0..a.dim {
            for k in 0..a.dim {
                let ei = a.basis(i);
                let ej = a.basis(j);
                let ek = a.basis(k);
                let lhs = a.mu.apply(&a.mu.apply(&ei, &ej), &ek);
                let rhs = a.mu.apply(&ei, &a.mu.apply(&ej, &ek));
                report.check("associativity", &[i, j, k], vec_sub(&lhs, &rhs));
            }
        }
    }
    report
}

/// An `A`-bimodule with left action `l[i][j][k]` (coefficient of `b_k` in
/// `e_i . b_j`) and right action `r[i][j][k]` (coefficient of `b_k` in
/// `b_i . e_j`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bimodule {
    pub base: Algebra,
    pub dim: usize,
    pub l: Tensor3,
    pub r: Tensor3,
}

impl Bimodule {
    pub fn new(base: Algebra, dim: usize, l: Tensor3, r: Tensor3) -> Result<Bimodule> {
        if l.dims() != (base.dim, dim, dim) {
            return Err(Error::ShapeMismatch("left action tensor dims".into()));
        }
        if r.dims() != (dim, base.dim, dim) {
            return Err(Error::ShapeMismatch("right action tensor dims".into()));
        }
        Ok(Bimodule { base, dim, l, r })
    }

    /// The regular bimodule: B = A with both actions given by the product.
    pub fn regular(a: &Algebra) -> Bimodule {
        Bimodule {
            base: a.clone(),
            dim: a.dim,
            l: a.mu.clone(),
            r: a.mu.clone(),
        }
    }

    pub fn act_l(&self, a: &[Scalar], u: &[Scalar]) -> Vec<Scalar> {
        self.l.apply(a, u)
    }

    pub fn act_r(&self, u: &[Scalar], a: &[Scalar]) -> Vec<Scalar> {
        self.r.apply(u, a)
    }

    pub fn basis(&self, i: usize) -> Vec<Scalar> {
        unit_vec(self.dim, i, &self.base.field)
    }
}

/// Checks the three bimodule compatibility identities on all mixed triples.
pub fn verify_bimodule(m: &Bimodule) -> VerificationReport {
    let mut report = VerificationReport::new();
    let a = &m.base;
    for i in 0..a.dim {
        for j in 0..a.dim {
            for k in 0..m.dim {
                let ei = a.basis(i);
                let ej = a.basis(j);
                let u = m.basis(k);
                // (a b) u = a (b u)
                let lhs = m.act_l(&a.mu.apply(&ei, &ej), &u);
                let rhs = m.act_l(&ei, &m.act_l(&ej, &u));
                report.check("left-action", &[i, j, k], vec_sub(&lhs, &rhs));
                // (a u) b = a (u b)
                let lhs = m.act_r(&m.act_l(&ei, &u), &ej);
                let rhs = m.act_l(&ei, &m.act_r(&u, &ej));
                report.check("middle-action", &[i, j, k], vec_sub(&lhs, &rhs));
                // (u a) b = u (a b)
                let lhs = m.act_r(&m.act_r(&u, &ei), &ej);
                let rhs = m.act_r(&u, &a.mu.apply(&ei, &ej));
                report.check("right-action", &[i, j, k], vec_sub(&lhs, &rhs));
            }
        }
    }
    report
}

/// True iff `f(x y) = f(x) f(y)` on all basis pairs.
pub fn is_algebra_morphism(src: &Algebra, dst: &Algebra, f: &Matrix) -> Result<bool> {
    if f.rows() != dst.dim || f.cols() != src.dim {
        return Err(Error::ShapeMismatch("morphism matrix dims".into()));
    }
    for i in 0..src.dim {
        for j in 0..src.dim {
            let lhs = f.mul_vec(&src.mu.apply(&src.basis(i), &src.basis(j)));
            let rhs = dst.mu.apply(&f.col(i), &f.col(j));
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
