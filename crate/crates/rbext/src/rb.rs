//! Rota-Baxter algebras and bimodules (weight 0), the induced dendriform
//! structure, and derivation spaces.

use crate::assoc::{is_algebra_morphism, Algebra, Bimodule};
use crate::dend::DendAlgebra;
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::{vec_add, vec_sub, Matrix, Tensor3};
use crate::report::VerificationReport;

/// An associative algebra with a distinguished Rota-Baxter operator `R`
/// satisfying `R(a) R(b) = R(R(a) b + a R(b))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RBAlgebra {
    pub alg: Algebra,
    pub rb: Matrix,
}

impl RBAlgebra {
    pub fn new(alg: Algebra, rb: Matrix) -> Result<RBAlgebra> {
        if rb.rows() != alg.dim || rb.cols() != alg.dim {
            return Err(Error::ShapeMismatch("Rota-Baxter operator dims".into()));
        }
        Ok(RBAlgebra { alg, rb })
    }

    pub fn dim(&self) -> usize {
        self.alg.dim
    }

    /// `R(e_i)` as a vector.
    pub fn r_basis(&self, i: usize) -> Vec<Scalar> {
        self.rb.col(i)
    }
}

/// A Rota-Baxter bimodule `(B, S)` over some `A_R`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RBBimodule {
    pub module: Bimodule,
    pub s: Matrix,
}

impl RBBimodule {
    pub fn new(module: Bimodule, s: Matrix) -> Result<RBBimodule> {
        if s.rows() != module.dim || s.cols() != module.dim {
            return Err(Error::ShapeMismatch("S operator dims".into()));
        }
        Ok(RBBimodule { module, s })
    }

    pub fn dim(&self) -> usize {
        self.module.dim
    }
}

/// Checks `R(a) R(b) = R(R(a) b + a R(b))` on all basis pairs.
pub fn verify_rb(ar: &RBAlgebra) -> VerificationReport {
    let mut report = VerificationReport::new();
    let a = &ar.alg;
    for i in 0..a.dim {
        for j in 0..a.dim {
            let ri = ar.r_basis(i);
            let rj = ar.r_basis(j);
            let lhs = a.mu.apply(&ri, &rj);
            let inner = vec_add(&a.mu.apply(&ri, &a.basis(j)), &a.mu.apply(&a.basis(i), &rj));
            let rhs = ar.rb.mul_vec(&inner);
            report.check("rota-baxter", &[i, j], vec_sub(&lhs, &rhs));
        }
    }
    report
}

/// Checks the two mixed identities
/// `R(a) S(u) = S(R(a) u + a S(u))` and `S(u) R(a) = S(S(u) a + u R(a))`.
pub fn verify_rb_bimodule(ar: &RBAlgebra, bs: &RBBimodule) -> VerificationReport {
    let mut report = VerificationReport::new();
    let a = &ar.alg;
    let m = &bs.module;
    for i in 0..a.dim {
        for k in 0..m.dim {
            let ra = ar.r_basis(i);
            let su = bs.s.col(k);
            let ea = a.basis(i);
            let u = m.basis(k);

            let lhs = m.act_l(&ra, &su);
            let rhs = bs
                .s
                .mul_vec(&vec_add(&m.act_l(&ra, &u), &m.act_l(&ea, &su)));
            report.check("rb-bimodule-left", &[i, k], vec_sub(&lhs, &rhs));

            let lhs = m.act_r(&su, &ra);
            let rhs = bs
                .s
                .mul_vec(&vec_add(&m.act_r(&su, &ea), &m.act_r(&u, &ra)));
            report.check("rb-bimodule-right", &[i, k], vec_sub(&lhs, &rhs));
        }
    }
    report
}

/// The dendriform structure induced by `R`: `a < b = a R(b)`, `a > b = R(a) b`.
pub fn induced_dendriform(ar: &RBAlgebra) -> Result<DendAlgebra> {
    let report = verify_rb(ar);
    if !report.ok() {
        return Err(Error::NotRotaBaxter(format!(
            "{} violations",
            report.violations.len()
        )));
    }
    let dim = ar.dim();
    let field = ar.alg.field;
    let mut prec = Tensor3::zero(dim, dim, dim, &field);
    let mut succ = Tensor3::zero(dim, dim, dim, &field);
    for i in 0..dim {
        for j in 0..dim {
            let p = ar.alg.mu.apply(&ar.alg.basis(i), &ar.r_basis(j));
            let s = ar.alg.mu.apply(&ar.r_basis(i), &ar.alg.basis(j));
            for k in 0..dim {
                prec.set(i, j, k, p[k].clone());
                succ.set(i, j, k, s[k].clone());
            }
        }
    }
    DendAlgebra::new(field, dim, prec, succ)
}

/// The total product `x *_R y = R(x) y + x R(y)`.
pub fn total_product(ar: &RBAlgebra, x: &[Scalar], y: &[Scalar]) -> Result<Vec<Scalar>> {
    if x.len() != ar.dim() || y.len() != ar.dim() {
        return Err(Error::ShapeMismatch("total_product vector length".into()));
    }
    let rx = ar.rb.mul_vec(x);
    let ry = ar.rb.mul_vec(y);
    Ok(vec_add(&ar.alg.mu.apply(&rx, y), &ar.alg.mu.apply(x, &ry)))
}

/// Algebra morphism additionally intertwining the operators: `f R = R' f`.
pub fn is_rb_morphism(src: &RBAlgebra, dst: &RBAlgebra, f: &Matrix) -> Result<bool> {
    if !is_algebra_morphism(&src.alg, &dst.alg, f)? {
        return Ok(false);
    }
    Ok(f.mul(&src.rb) == dst.rb.mul(f))
}

/// Deterministic basis of the space of maps `f : A -> B` with
/// `f(a b) = f(a) b + a f(b)` and `S f = f R`.
///
/// Assembles one block linear system over the `dimA * dimB` unknowns
/// (unknown `x[i * dimB + k]` = coefficient of `b_k` in `f(e_i)`) and reuses
/// the kernel routine, so the basis inherits its echelon conventions.
pub fn derivation_space(ar: &RBAlgebra, bs: &RBBimodule) -> Vec<Matrix> {
    let a = &ar.alg;
    let m = &bs.module;
    let (da, db) = (a.dim, m.dim);
    let field = a.field;
    let unknowns = da * db;
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    // Leibniz rows: f(e_i e_j) - f(e_i) e_j - e_i f(e_j) = 0, coordinate c
    for i in 0..da {
        for j in 0..da {
            for c in 0..db {
                let mut row = crate::linalg::zero_vec(unknowns, &field);
                for t in 0..da {
                    let coeff = a.mu.get(i, j, t);
                    if !coeff.is_zero() {
                        row[t * db + c] = row[t * db + c].add(coeff);
                    }
                }
                for k in 0..db {
                    let coeff = m.r.get(k, j, c);
                    if !coeff.is_zero() {
                        row[i * db + k] = row[i * db + k].sub(coeff);
                    }
                    let coeff = m.l.get(i, k, c);
                    if !coeff.is_zero() {
                        row[j * db + k] = row[j * db + k].sub(coeff);
                    }
                }
                rows.push(row);
            }
        }
    }
    // commutation rows: (S f - f R)(e_i) = 0, coordinate c
    for i in 0..da {
        for c in 0..db {
            let mut row = crate::linalg::zero_vec(unknowns, &field);
            for k in 0..db {
                let coeff = bs.s.get(c, k);
                if !coeff.is_zero() {
                    row[i * db + k] = row[i * db + k].add(coeff);
                }
            }
            for t in 0..da {
                let coeff = ar.rb.get(t, i);
                if !coeff.is_zero() {
                    row[t * db + c] = row[t * db + c].sub(coeff);
                }
            }
            rows.push(row);
        }
    }
    let system = Matrix::from_rows(rows, &field).expect("uniform row lengths");
    system
        .kernel_basis()
        .into_iter()
        .map(|v| {
            let mut f = Matrix::zero(db, da, &field);
            for i in 0..da {
                for k in 0..db {
                    f.set(k, i, v[i * db + k].clone());
                }
            }
            f
        })
        .collect()
}
