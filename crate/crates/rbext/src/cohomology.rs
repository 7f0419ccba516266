//! The Hochschild coboundary, its operator-twisted companion, the combined
//! complex computing the cohomology of a Rota-Baxter algebra with bimodule
//! coefficients, and the classification of abelian extensions by degree-2
//! classes.
//!
//! Cochains are dense tensors over basis tuples; coboundaries are evaluated
//! on basis tuples and extended multilinearly. Everything is assembled into
//! exact matrices so that kernels, images and class membership are decided by
//! rank computations, not numerics.

use crate::error::{Error, Result};
use crate::ext::{canonical_section, extract_cocycle, Extension};
use crate::field::{Field, Scalar};
use crate::linalg::{vec_add, vec_scale, vec_sub, zero_vec, Matrix};
use crate::rb::{RBAlgebra, RBBimodule};

/// An `n`-cochain: a multilinear map `A^n -> B` stored on basis tuples.
/// Degree 0 is a plain vector of `B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cochain {
    pub n: usize,
    pub dim_a: usize,
    pub dim_b: usize,
    field: Field,
    data: Vec<Scalar>,
}

/// All `n`-tuples of indices below `dim`, in lexicographic order.
fn tuples(n: usize, dim: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..dim).map(move |i| {
                    let mut t2 = t.clone();
                    t2.push(i);
                    t2
                })
            })
            .collect();
    }
    out
}

impl Cochain {
    pub fn zero(n: usize, dim_a: usize, dim_b: usize, field: &Field) -> Cochain {
        Cochain {
            n,
            dim_a,
            dim_b,
            field: *field,
            data: zero_vec(dim_a.pow(n as u32) * dim_b, field),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    fn offset(&self, tuple: &[usize]) -> usize {
        assert_eq!(tuple.len(), self.n, "cochain arity mismatch");
        let mut o = 0;
        for &i in tuple {
            debug_assert!(i < self.dim_a);
            o = o * self.dim_a + i;
        }
        o * self.dim_b
    }

    pub fn get(&self, tuple: &[usize], k: usize) -> &Scalar {
        &self.data[self.offset(tuple) + k]
    }

    pub fn set(&mut self, tuple: &[usize], k: usize, v: Scalar) {
        let o = self.offset(tuple);
        self.data[o + k] = v;
    }

    /// Value on a basis tuple, as a vector of `B`.
    pub fn value(&self, tuple: &[usize]) -> Vec<Scalar> {
        let o = self.offset(tuple);
        self.data[o..o + self.dim_b].to_vec()
    }

    /// Multilinear evaluation on arbitrary argument vectors.
    pub fn eval(&self, args: &[Vec<Scalar>]) -> Vec<Scalar> {
        assert_eq!(args.len(), self.n, "cochain arity mismatch");
        let mut out = zero_vec(self.dim_b, &self.field);
        for t in tuples(self.n, self.dim_a) {
            let mut coeff = Scalar::one(&self.field);
            let mut zero = false;
            for (slot, &i) in t.iter().enumerate() {
                if args[slot][i].is_zero() {
                    zero = true;
                    break;
                }
                coeff = coeff.mul(&args[slot][i]);
            }
            if zero {
                continue;
            }
            out = vec_add(&out, &vec_scale(&coeff, &self.value(&t)));
        }
        out
    }

    pub fn add(&self, other: &Cochain) -> Cochain {
        assert_eq!((self.n, self.dim_a, self.dim_b), (other.n, other.dim_a, other.dim_b));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a = a.add(b);
        }
        out
    }

    pub fn sub(&self, other: &Cochain) -> Cochain {
        assert_eq!((self.n, self.dim_a, self.dim_b), (other.n, other.dim_a, other.dim_b));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a = a.sub(b);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|s| s.is_zero())
    }

    pub fn flat(&self) -> &[Scalar] {
        &self.data
    }

    pub fn from_flat(
        n: usize,
        dim_a: usize,
        dim_b: usize,
        field: &Field,
        data: Vec<Scalar>,
    ) -> Result<Cochain> {
        if data.len() != dim_a.pow(n as u32) * dim_b {
            return Err(Error::ShapeMismatch("cochain data length".into()));
        }
        Ok(Cochain {
            n,
            dim_a,
            dim_b,
            field: *field,
            data,
        })
    }
}

fn sign(field: &Field, exp: usize) -> Scalar {
    if exp % 2 == 0 {
        Scalar::one(field)
    } else {
        Scalar::one(field).neg()
    }
}

fn check_shapes(ar: &RBAlgebra, bs: &RBBimodule, c: &Cochain) -> Result<()> {
    if c.dim_a != ar.dim() || c.dim_b != bs.dim() {
        return Err(Error::ShapeMismatch("cochain dims vs algebra/bimodule".into()));
    }
    Ok(())
}

/// The Hochschild coboundary
/// `(df)(a_1, .., a_{n+1}) = a_1 f(a_2, .., a_{n+1})
///   + (-1)^{n+1} f(a_1, .., a_n) a_{n+1}
///   + sum_i (-1)^i f(a_1, .., a_i a_{i+1}, .., a_{n+1})`.
pub fn hoch_delta(ar: &RBAlgebra, bs: &RBBimodule, c: &Cochain) -> Result<Cochain> {
    check_shapes(ar, bs, c)?;
    let (a, m) = (&ar.alg, &bs.module);
    let f = a.field;
    let n = c.n;
    let mut out = Cochain::zero(n + 1, c.dim_a, c.dim_b, &f);
    for t in tuples(n + 1, c.dim_a) {
        let mut val = m.act_l(&a.basis(t[0]), &c.value(&t[1..]));
        let tail = m.act_r(&c.value(&t[..n]), &a.basis(t[n]));
        val = vec_add(&val, &vec_scale(&sign(&f, n + 1), &tail));
        for i in 1..=n {
            let args: Vec<Vec<Scalar>> = (0..n)
                .map(|slot| {
                    let pos = if slot < i - 1 { slot } else { slot + 1 };
                    if slot == i - 1 {
                        a.mu.apply(&a.basis(t[i - 1]), &a.basis(t[i]))
                    } else {
                        a.basis(t[pos])
                    }
                })
                .collect();
            val = vec_add(&val, &vec_scale(&sign(&f, i), &c.eval(&args)));
        }
        for k in 0..c.dim_b {
            out.set(&t, k, val[k].clone());
        }
    }
    Ok(out)
}

/// The operator-twisted coboundary
/// `(pf)(a_1, .., a_{n+1}) = R(a_1) f(..) - S(a_1 f(..))
///   + (-1)^{n+1} f(..) R(a_{n+1}) - (-1)^{n+1} S(f(..) a_{n+1})
///   + sum_i (-1)^i f(a_1, .., R(a_i) a_{i+1} + a_i R(a_{i+1}), .., a_{n+1})`.
pub fn hoch_partial(ar: &RBAlgebra, bs: &RBBimodule, c: &Cochain) -> Result<Cochain> {
    check_shapes(ar, bs, c)?;
    let (a, m) = (&ar.alg, &bs.module);
    let f = a.field;
    let n = c.n;
    let mut out = Cochain::zero(n + 1, c.dim_a, c.dim_b, &f);
    for t in tuples(n + 1, c.dim_a) {
        let head = c.value(&t[1..]);
        let mut val = m.act_l(&ar.r_basis(t[0]), &head);
        val = vec_sub(&val, &bs.s.mul_vec(&m.act_l(&a.basis(t[0]), &head)));
        let tail = c.value(&t[..n]);
        let sgn = sign(&f, n + 1);
        val = vec_add(&val, &vec_scale(&sgn, &m.act_r(&tail, &ar.r_basis(t[n]))));
        val = vec_sub(
            &val,
            &vec_scale(&sgn, &bs.s.mul_vec(&m.act_r(&tail, &a.basis(t[n])))),
        );
        for i in 1..=n {
            let merged = vec_add(
                &a.mu.apply(&ar.r_basis(t[i - 1]), &a.basis(t[i])),
                &a.mu.apply(&a.basis(t[i - 1]), &ar.r_basis(t[i])),
            );
            let args: Vec<Vec<Scalar>> = (0..n)
                .map(|slot| {
                    let pos = if slot < i - 1 { slot } else { slot + 1 };
                    if slot == i - 1 {
                        merged.clone()
                    } else {
                        a.basis(t[pos])
                    }
                })
                .collect();
            val = vec_add(&val, &vec_scale(&sign(&f, i), &c.eval(&args)));
        }
        for k in 0..c.dim_b {
            out.set(&t, k, val[k].clone());
        }
    }
    Ok(out)
}

/// A cochain of the combined operator-algebra complex: degrees 0 and 1 carry
/// a single component, degree `n >= 2` carries a pair `(f, g)` with `g` of
/// degree `n - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RBCochain {
    pub n: usize,
    pub f: Cochain,
    pub g: Option<Cochain>,
}

impl RBCochain {
    pub fn new(n: usize, f: Cochain, g: Option<Cochain>) -> Result<RBCochain> {
        if f.n != n {
            return Err(Error::ShapeMismatch("first component degree".into()));
        }
        match (&g, n) {
            (None, 0 | 1) => {}
            (Some(gg), _) if n >= 2 && gg.n == n - 1 && gg.dim_a == f.dim_a && gg.dim_b == f.dim_b => {}
            _ => return Err(Error::ShapeMismatch("second component degree".into())),
        }
        Ok(RBCochain { n, f, g })
    }

    pub fn zero(n: usize, dim_a: usize, dim_b: usize, field: &Field) -> RBCochain {
        let f = Cochain::zero(n, dim_a, dim_b, field);
        let g = (n >= 2).then(|| Cochain::zero(n - 1, dim_a, dim_b, field));
        RBCochain { n, f, g }
    }

    pub fn is_zero(&self) -> bool {
        self.f.is_zero() && self.g.as_ref().map_or(true, |g| g.is_zero())
    }

    /// Flat coordinates: first component then (if present) second.
    pub fn flat(&self) -> Vec<Scalar> {
        let mut v = self.f.flat().to_vec();
        if let Some(g) = &self.g {
            v.extend_from_slice(g.flat());
        }
        v
    }

    pub fn from_flat(
        n: usize,
        dim_a: usize,
        dim_b: usize,
        field: &Field,
        data: &[Scalar],
    ) -> Result<RBCochain> {
        let fd = dim_a.pow(n as u32) * dim_b;
        if n < 2 {
            if data.len() != fd {
                return Err(Error::ShapeMismatch("combined cochain length".into()));
            }
            return RBCochain::new(n, Cochain::from_flat(n, dim_a, dim_b, field, data.to_vec())?, None);
        }
        let gd = dim_a.pow((n - 1) as u32) * dim_b;
        if data.len() != fd + gd {
            return Err(Error::ShapeMismatch("combined cochain length".into()));
        }
        RBCochain::new(
            n,
            Cochain::from_flat(n, dim_a, dim_b, field, data[..fd].to_vec())?,
            Some(Cochain::from_flat(n - 1, dim_a, dim_b, field, data[fd..].to_vec())?),
        )
    }
}

/// Dimension of the degree-`n` combined cochain group.
pub fn rba_cochain_dim(dim_a: usize, dim_b: usize, n: usize) -> usize {
    let fd = dim_a.pow(n as u32) * dim_b;
    if n < 2 {
        fd
    } else {
        fd + dim_a.pow((n - 1) as u32) * dim_b
    }
}

/// The differential of the combined complex. Degree 0 sends `u` to
/// `a -> a u - u a`; degree 1 sends `f` to `(d f, S f - f R)`; degree `n >= 2`
/// sends `(f, g)` to
/// `(d f, p g + (-1)^n f R^(x n) - (-1)^n sum_i S f(R x .. x id_i x .. x R))`.
pub fn rba_delta(ar: &RBAlgebra, bs: &RBBimodule, c: &RBCochain) -> Result<RBCochain> {
    check_shapes(ar, bs, &c.f)?;
    let field = ar.alg.field;
    let (da, db) = (ar.dim(), bs.dim());
    let n = c.n;
    if n == 0 {
        return RBCochain::new(1, hoch_delta(ar, bs, &c.f)?, None);
    }
    let df = hoch_delta(ar, bs, &c.f)?;
    // second component: for n = 1 this is S f - f R, the g-free instance of
    // the general formula below
    let mut second = if n == 1 {
        Cochain::zero(1, da, db, &field)
    } else {
        hoch_partial(ar, bs, c.g.as_ref().expect("degree >= 2 carries g"))?
    };
    let sgn = sign(&field, n);
    for t in tuples(n, da) {
        // (-1)^n f(R a_1, .., R a_n)
        let all_r: Vec<Vec<Scalar>> = t.iter().map(|&i| ar.r_basis(i)).collect();
        let mut val = vec_scale(&sgn, &c.f.eval(&all_r));
        // -(-1)^n sum_i S f(R a_1, .., a_i, .., R a_n)
        for i in 0..n {
            let args: Vec<Vec<Scalar>> = t
                .iter()
                .enumerate()
                .map(|(slot, &idx)| {
                    if slot == i {
                        ar.alg.basis(idx)
                    } else {
                        ar.r_basis(idx)
                    }
                })
                .collect();
            val = vec_sub(&val, &vec_scale(&sgn, &bs.s.mul_vec(&c.f.eval(&args))));
        }
        let prev = second.value(&t);
        let total = vec_add(&prev, &val);
        for k in 0..db {
            second.set(&t, k, total[k].clone());
        }
    }
    RBCochain::new(n + 1, df, Some(second))
}

/// The matrix of the degree-`n` differential in flat coordinates.
pub fn rba_delta_matrix(ar: &RBAlgebra, bs: &RBBimodule, n: usize) -> Result<Matrix> {
    let field = ar.alg.field;
    let (da, db) = (ar.dim(), bs.dim());
    let src = rba_cochain_dim(da, db, n);
    let dst = rba_cochain_dim(da, db, n + 1);
    let mut cols = Vec::with_capacity(src);
    for j in 0..src {
        let mut unit = zero_vec(src, &field);
        unit[j] = Scalar::one(&field);
        let c = RBCochain::from_flat(n, da, db, &field, &unit)?;
        cols.push(rba_delta(ar, bs, &c)?.flat());
    }
    Ok(Matrix::from_cols(&cols, dst, &field))
}

/// `dim H^n` of the combined complex, for `n <= 3`.
pub fn cohomology_dim(ar: &RBAlgebra, bs: &RBBimodule, n: usize) -> Result<usize> {
    if n > 3 {
        return Err(Error::DegreeUnsupported(n));
    }
    let dn = rba_delta_matrix(ar, bs, n)?;
    let kernel_dim = dn.cols() - dn.rank();
    let image_dim = if n == 0 {
        0
    } else {
        rba_delta_matrix(ar, bs, n - 1)?.rank()
    };
    Ok(kernel_dim - image_dim)
}

/// A basis of cohomology representatives in degree `n <= 3`: kernel vectors of
/// the degree-`n` differential that are independent modulo the image of the
/// previous one, selected greedily in the deterministic kernel-basis order.
pub fn cohomology_basis(ar: &RBAlgebra, bs: &RBBimodule, n: usize) -> Result<Vec<RBCochain>> {
    if n > 3 {
        return Err(Error::DegreeUnsupported(n));
    }
    let field = ar.alg.field;
    let (da, db) = (ar.dim(), bs.dim());
    let dn = rba_delta_matrix(ar, bs, n)?;
    let kernel = dn.kernel_basis();
    let mut span: Vec<Vec<Scalar>> = if n == 0 {
        Vec::new()
    } else {
        let prev = rba_delta_matrix(ar, bs, n - 1)?;
        (0..prev.cols()).map(|j| prev.col(j)).collect()
    };
    let mut reps = Vec::new();
    let dim = rba_cochain_dim(da, db, n);
    let mut current_rank = Matrix::from_cols(&span, dim, &field).rank();
    for v in kernel {
        let mut candidate = span.clone();
        candidate.push(v.clone());
        let r = Matrix::from_cols(&candidate, dim, &field).rank();
        if r > current_rank {
            span = candidate;
            current_rank = r;
            reps.push(RBCochain::from_flat(n, da, db, &field, &v)?);
        }
    }
    Ok(reps)
}

/// The degree-2 class of an abelian extension: the extracted `(chi, Phi)` as a
/// combined 2-cocycle, together with a degree-1 witness when the class is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianClass {
    pub representative: RBCochain,
    pub witness: Option<RBCochain>,
}

impl AbelianClass {
    pub fn is_trivial(&self) -> bool {
        self.witness.is_some()
    }
}

/// Classifies an abelian extension (one whose `B` has the zero product) whose
/// induced bimodule is the supplied one: extracts `(chi, Phi)` along the
/// canonical section, checks it is a 2-cocycle of the combined complex, and
/// decides membership in the image of the degree-1 differential by an exact
/// solve.
pub fn classify_abelian(x: &Extension, bs: &RBBimodule) -> Result<AbelianClass> {
    if !x.b.alg.mu.is_zero() {
        return Err(Error::NotAbelian("classification needs B with zero product".into()));
    }
    let induced = crate::ext::induced_bimodule(x)?;
    if &induced != bs {
        return Err(Error::BimoduleMismatch);
    }
    let ar = &x.a;
    let field = ar.alg.field;
    let (da, db) = (ar.dim(), bs.dim());
    let s = canonical_section(x)?;
    let c = extract_cocycle(x, &s)?;
    let mut chi = Cochain::zero(2, da, db, &field);
    for i in 0..da {
        for j in 0..da {
            for k in 0..db {
                chi.set(&[i, j], k, c.chi.get(i, j, k).clone());
            }
        }
    }
    let mut phi = Cochain::zero(1, da, db, &field);
    for i in 0..da {
        for k in 0..db {
            phi.set(&[i], k, c.phi.get(k, i).clone());
        }
    }
    let representative = RBCochain::new(2, chi, Some(phi))?;
    if !rba_delta(ar, bs, &representative)?.is_zero() {
        return Err(Error::Validation(
            "extracted pair is not a 2-cocycle of the combined complex".into(),
        ));
    }
    let d1 = rba_delta_matrix(ar, bs, 1)?;
    let witness = d1
        .solve_affine(&representative.flat())
        .map(|(w, _)| RBCochain::from_flat(1, da, db, &field, &w))
        .transpose()?;
    Ok(AbelianClass {
        representative,
        witness,
    })
}
