//! A small programmatic corpus of algebras, operators, bimodules, cocycles and
//! extensions used by the tests and shipped as JSON via `examples/gen_fixtures`.
//!
//! Everything here is parametric in the field, so the same objects exist over
//! the rationals and over small prime fields.

use crate::assoc::{Algebra, Bimodule};
use crate::dend::DendAlgebra;
use crate::dendext::{build_dend_extension, DendCocycle, DendExtension};
use crate::ext::{build_extension, Extension, RBCocycle};
use crate::field::{Field, Scalar};
use crate::linalg::{Matrix, Tensor3};
use crate::rb::{induced_dendriform, RBAlgebra, RBBimodule};

/// The dual numbers `k[x]/(x^2)`: `e0` is the unit, `e1^2 = 0`.
pub fn dual_numbers(field: &Field) -> Algebra {
    let one = Scalar::one(field);
    let mut mu = Tensor3::zero(2, 2, 2, field);
    mu.set(0, 0, 0, one.clone());
    mu.set(0, 1, 1, one.clone());
    mu.set(1, 0, 1, one);
    Algebra::new(*field, 2, mu).unwrap()
}

/// The dual numbers with the Rota-Baxter operator `R(e0) = e1`, `R(e1) = 0`.
pub fn fix_a(field: &Field) -> RBAlgebra {
    let mut r = Matrix::zero(2, 2, field);
    r.set(1, 0, Scalar::one(field));
    RBAlgebra::new(dual_numbers(field), r).unwrap()
}

/// The dual numbers with the zero operator.
pub fn fix_a0(field: &Field) -> RBAlgebra {
    RBAlgebra::new(dual_numbers(field), Matrix::zero(2, 2, field)).unwrap()
}

/// The 1-dimensional bimodule over the dual numbers on which both actions go
/// through the character `e0 -> 1`, `e1 -> 0`.
pub fn epsilon_bimodule(a: &Algebra) -> Bimodule {
    let field = a.field;
    let one = Scalar::one(&field);
    let mut l = Tensor3::zero(2, 1, 1, &field);
    l.set(0, 0, 0, one.clone());
    let mut r = Tensor3::zero(1, 2, 1, &field);
    r.set(0, 0, 0, one);
    Bimodule::new(a.clone(), 1, l, r).unwrap()
}

/// The epsilon bimodule of the given operator algebra, with `S = 0`.
pub fn fix_b0_over(ar: &RBAlgebra) -> RBBimodule {
    let m = epsilon_bimodule(&ar.alg);
    let s = Matrix::zero(1, 1, &ar.alg.field);
    RBBimodule::new(m, s).unwrap()
}

/// The 1-dimensional zero-product algebra with the zero operator; this is the
/// epsilon bimodule viewed as an operator algebra in its own right.
pub fn fix_b0_algebra(field: &Field) -> RBAlgebra {
    RBAlgebra::new(Algebra::zero_product(*field, 1), Matrix::zero(1, 1, field)).unwrap()
}

/// The split cocycle over (zero-operator dual numbers, 1-dim trivial B):
/// `psi` is the epsilon action, `chi = 0`, `Phi = 0`.
pub fn fix_sd_cocycle(field: &Field) -> RBCocycle {
    let a = fix_a0(field);
    let b = fix_b0_algebra(field);
    let eps = epsilon_bimodule(&a.alg);
    RBCocycle::new(
        a,
        b,
        Tensor3::zero(2, 2, 1, field),
        eps.l,
        eps.r,
        Matrix::zero(1, 2, field),
    )
    .unwrap()
}

/// The semidirect-product extension built from `fix_sd_cocycle`: 3-dimensional
/// `E` with `(a, u)(b, v) = (ab, eps(a) v + eps(b) u)` and zero operator.
pub fn fix_sd(field: &Field) -> Extension {
    build_extension(&fix_sd_cocycle(field)).unwrap()
}

/// A cocycle with nonzero `Phi` over (`fix_a`, trivial 1-dim B):
/// `psi` the epsilon action, `chi = 0`, `Phi(e0) = 1`, `Phi(e1) = 0`.
pub fn fix_phi_cocycle(field: &Field) -> RBCocycle {
    let a = fix_a(field);
    let b = fix_b0_algebra(field);
    let eps = epsilon_bimodule(&a.alg);
    let mut phi = Matrix::zero(1, 2, field);
    phi.set(0, 0, Scalar::one(field));
    RBCocycle::new(a, b, Tensor3::zero(2, 2, 1, field), eps.l, eps.r, phi).unwrap()
}

/// A cocycle over F_2 whose class is nonzero: `fix_sd_cocycle` with the extra
/// term `chi(e1, e1) = 1`. No map `phi` makes it equivalent to the split one.
pub fn fix_ns_cocycle_f2() -> RBCocycle {
    let f2 = Field::prime(2).unwrap();
    let mut c = fix_sd_cocycle(&f2);
    c.chi.set(1, 1, 0, Scalar::one(&f2));
    c
}

/// The non-split extension built from `fix_ns_cocycle_f2`.
pub fn fix_ns_f2() -> Extension {
    build_extension(&fix_ns_cocycle_f2()).unwrap()
}

/// The 2-dimensional dendriform algebra induced by `fix_a` through its
/// operator: `e0 < e0 = e0 > e0 = e1`, all other products zero.
pub fn fix_d(field: &Field) -> DendAlgebra {
    induced_dendriform(&fix_a(field)).unwrap()
}

/// The regular dendriform cocycle: `B = A = fix_d`, `psi` given by the
/// products of `A` in both slots and argument orders, `chi = 0`.
pub fn fix_dreg_cocycle(field: &Field) -> DendCocycle {
    let a = fix_d(field);
    let psi = [a.prec.clone(), a.succ.clone()];
    DendCocycle::new(
        a.clone(),
        a.clone(),
        [
            Tensor3::zero(2, 2, 2, field),
            Tensor3::zero(2, 2, 2, field),
        ],
        psi.clone(),
        psi,
    )
    .unwrap()
}

/// The 4-dimensional extension built from `fix_dreg_cocycle`.
pub fn fix_dreg(field: &Field) -> DendExtension {
    build_dend_extension(&fix_dreg_cocycle(field)).unwrap()
}

/// The split dendriform cocycle over (2-dim zero products, 1-dim zero
/// products): everything zero.
pub fn fix_dsd_cocycle(field: &Field) -> DendCocycle {
    DendCocycle::zero(
        DendAlgebra::zero_products(*field, 2),
        DendAlgebra::zero_products(*field, 1),
    )
}

/// The direct-sum extension built from `fix_dsd_cocycle`.
pub fn fix_dsd(field: &Field) -> DendExtension {
    build_dend_extension(&fix_dsd_cocycle(field)).unwrap()
}

/// A dendriform cocycle over F_2 whose class is nonzero: `fix_dsd_cocycle`
/// with the extra term `chi([1]; e1, e1) = 1`. Since `A` and `B` have zero
/// products, every coboundary vanishes and no `phi` splits it.
pub fn fix_dns_cocycle_f2() -> DendCocycle {
    let f2 = Field::prime(2).unwrap();
    let mut c = fix_dsd_cocycle(&f2);
    c.chi[0].set(1, 1, 0, Scalar::one(&f2));
    c
}

/// The non-split dendriform extension built from `fix_dns_cocycle_f2`.
pub fn fix_dns_f2() -> DendExtension {
    build_dend_extension(&fix_dns_cocycle_f2()).unwrap()
}
