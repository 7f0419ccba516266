//! Dendriform algebras, their axioms, the total associative algebra, and the
//! combinatorial index maps used by the dendriform cocycle identities.
//!
//! The index maps follow the published table with one correction: the third
//! column of the `R_0` row is implemented as `[r - n + 1]` rather than the
//! printed `[i - n + 1]`. The printed value is constant in `r` and falls out
//! of range at `(m, n, i, r) = (2, 2, 1, 3)`; `[r - n + 1]` is the unique
//! in-range reading under which the cocycle identity specializes to the three
//! dendriform axioms (asserted by tests). The two column ranges overlap at
//! `r = i + n - 1`, where both readings agree on `[i]`.

use crate::assoc::Algebra;
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::{unit_vec, vec_add, vec_sub, Matrix, Tensor3};
use crate::report::VerificationReport;

/// A dendriform algebra: two bilinear products `<` (prec) and `>` (succ)
/// whose sum is associative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DendAlgebra {
    pub field: Field,
    pub dim: usize,
    pub prec: Tensor3,
    pub succ: Tensor3,
}

impl DendAlgebra {
    pub fn new(field: Field, dim: usize, prec: Tensor3, succ: Tensor3) -> Result<DendAlgebra> {
        if prec.dims() != (dim, dim, dim) || succ.dims() != (dim, dim, dim) {
            return Err(Error::ShapeMismatch("dendriform product tensor dims".into()));
        }
        Ok(DendAlgebra {
            field,
            dim,
            prec,
            succ,
        })
    }

    pub fn zero_products(field: Field, dim: usize) -> DendAlgebra {
        DendAlgebra {
            field,
            dim,
            prec: Tensor3::zero(dim, dim, dim, &field),
            succ: Tensor3::zero(dim, dim, dim, &field),
        }
    }

    pub fn basis(&self, i: usize) -> Vec<Scalar> {
        unit_vec(self.dim, i, &self.field)
    }

    /// The product tensor selected by slot 1 (`<`) or 2 (`>`).
    pub fn slot(&self, slot: usize) -> &Tensor3 {
        match slot {
            1 => &self.prec,
            2 => &self.succ,
            _ => panic!("dendriform slot must be 1 or 2"),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.prec.is_zero() && self.succ.is_zero()
    }
}

/// An element of `k[C_n]` with basis symbols `[1] .. [n]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalCn {
    pub coeffs: Vec<Scalar>,
}

impl FormalCn {
    pub fn unit(n: usize, r: usize, field: &Field) -> FormalCn {
        assert!(r >= 1 && r <= n, "C_n symbol out of range");
        FormalCn {
            coeffs: unit_vec(n, r - 1, field),
        }
    }

    pub fn all_ones(n: usize, field: &Field) -> FormalCn {
        FormalCn {
            coeffs: vec![Scalar::one(field); n],
        }
    }

    pub fn n(&self) -> usize {
        self.coeffs.len()
    }
}

/// Checks the three dendriform axioms on every basis triple.
pub fn verify_dendriform(d: &DendAlgebra) -> VerificationReport {
    let mut report = VerificationReport::new();
    for i in 0..d.dim {
        for j in 0..d.dim {
            for k in 0..d.dim {
                let a = d.basis(i);
                let b = d.basis(j);
                let c = d.basis(k);
                // (a < b) < c = a < (b < c + b > c)
                let lhs = d.prec.apply(&d.prec.apply(&a, &b), &c);
                let total_bc = vec_add(&d.prec.apply(&b, &c), &d.succ.apply(&b, &c));
                let rhs = d.prec.apply(&a, &total_bc);
                report.check("dend-1", &[i, j, k], vec_sub(&lhs, &rhs));
                // (a > b) < c = a > (b < c)
                let lhs = d.prec.apply(&d.succ.apply(&a, &b), &c);
                let rhs = d.succ.apply(&a, &d.prec.apply(&b, &c));
                report.check("dend-2", &[i, j, k], vec_sub(&lhs, &rhs));
                // (a < b + a > b) > c = a > (b > c)
                let total_ab = vec_add(&d.prec.apply(&a, &b), &d.succ.apply(&a, &b));
                let lhs = d.succ.apply(&total_ab, &c);
                let rhs = d.succ.apply(&a, &d.succ.apply(&b, &c));
                report.check("dend-3", &[i, j, k], vec_sub(&lhs, &rhs));
            }
        }
    }
    report
}

/// The total associative algebra with product `prec + succ`.
pub fn total_algebra(d: &DendAlgebra) -> Result<Algebra> {
    let report = verify_dendriform(d);
    if !report.ok() {
        return Err(Error::NotDendriform(format!(
            "{} violations",
            report.violations.len()
        )));
    }
    Algebra::new(d.field, d.dim, d.prec.add(&d.succ))
}

fn check_table_args(m: usize, n: usize, i: usize, r: usize) -> Result<()> {
    if m == 0 || n == 0 || i < 1 || i > m || r < 1 || r > m + n - 1 {
        return Err(Error::IndexOutOfRange(format!(
            "R-map arguments (m={m}, n={n}, i={i}, r={r})"
        )));
    }
    Ok(())
}

/// The map `R_0^{1,...,n,...,1} : C_{m+n-1} -> C_m` (superscript: m slots,
/// all 1 except n in the i-th place). Returns the 1-based symbol index.
pub fn r0_map(m: usize, n: usize, i: usize, r: usize) -> Result<usize> {
    check_table_args(m, n, i, r)?;
    Ok(if r <= i - 1 {
        r
    } else if r <= i + n - 1 {
        i
    } else {
        r - n + 1
    })
}

/// The map `R_i^{1,...,n,...,1} : C_{m+n-1} -> k[C_n]`: the unit symbol
/// `[r - i + 1]` inside the window, `[1] + ... + [n]` outside it.
pub fn ri_map(m: usize, n: usize, i: usize, r: usize, field: &Field) -> Result<FormalCn> {
    check_table_args(m, n, i, r)?;
    Ok(if r >= i && r <= i + n - 1 {
        FormalCn::unit(n, r - i + 1, field)
    } else {
        FormalCn::all_ones(n, field)
    })
}

/// Evaluates `pi_A(c; x, y) = c_1 (x < y) + c_2 (x > y)` for `c` in `k[C_2]`.
pub fn pi_eval(d: &DendAlgebra, c: &FormalCn, x: &[Scalar], y: &[Scalar]) -> Result<Vec<Scalar>> {
    if c.n() != 2 {
        return Err(Error::ShapeMismatch("pi_eval expects an element of k[C_2]".into()));
    }
    if x.len() != d.dim || y.len() != d.dim {
        return Err(Error::ShapeMismatch("pi_eval vector length".into()));
    }
    let p = crate::linalg::vec_scale(&c.coeffs[0], &d.prec.apply(x, y));
    let s = crate::linalg::vec_scale(&c.coeffs[1], &d.succ.apply(x, y));
    Ok(vec_add(&p, &s))
}

/// True iff `f` preserves both products on all basis pairs.
pub fn is_dend_morphism(src: &DendAlgebra, dst: &DendAlgebra, f: &Matrix) -> Result<bool> {
    if f.rows() != dst.dim || f.cols() != src.dim {
        return Err(Error::ShapeMismatch("morphism matrix dims".into()));
    }
    for i in 0..src.dim {
        for j in 0..src.dim {
            for (s_src, s_dst) in [(&src.prec, &dst.prec), (&src.succ, &dst.succ)] {
                let lhs = f.mul_vec(&s_src.apply(&src.basis(i), &src.basis(j)));
                let rhs = s_dst.apply(&f.col(i), &f.col(j));
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
