//! Automorphism groups of operator algebras, the restriction homomorphism
//! from block-preserving automorphisms of an extension to pairs, twisted
//! cocycles, the Wells obstruction to inducing a pair of automorphisms, and
//! finite exactness checks of the Wells sequences.
//!
//! Enumerative operations work over prime fields only, with explicit budgets;
//! over the rationals the automorphism groups are infinite and only
//! verification of supplied maps is possible.

use crate::error::{Error, Result};
use crate::ext::{
    canonical_section, extract_cocycle, search_equivalence, Extension, RBCocycle,
};
#[cfg(test)]
use crate::ext::verify_equivalence;
use crate::field::{Field, Scalar};
use crate::linalg::{Matrix, MatrixEnumerator};
use crate::rb::{derivation_space, is_rb_morphism, RBAlgebra};

/// An automorphism of a Rota-Baxter algebra: an invertible matrix that
/// preserves the product and commutes with the operator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RBAut {
    pub on: RBAlgebra,
    pub m: Matrix,
}

impl RBAut {
    pub fn new(on: RBAlgebra, m: Matrix) -> Result<RBAut> {
        if m.rows() != on.dim() || m.cols() != on.dim() {
            return Err(Error::ShapeMismatch("automorphism matrix dims".into()));
        }
        if !m.is_invertible() {
            return Err(Error::Validation("matrix is not invertible".into()));
        }
        if !is_rb_morphism(&on, &on, &m)? {
            return Err(Error::Validation(
                "matrix does not preserve the operator-algebra structure".into(),
            ));
        }
        Ok(RBAut { on, m })
    }

    pub fn identity(on: RBAlgebra) -> RBAut {
        let m = Matrix::identity(on.dim(), &on.alg.field);
        RBAut { on, m }
    }

    pub fn inverse(&self) -> RBAut {
        RBAut {
            on: self.on.clone(),
            m: self.m.inverse().expect("automorphisms are invertible"),
        }
    }

    /// `self` after `other` (matrix product `self.m * other.m`).
    pub fn compose(&self, other: &RBAut) -> RBAut {
        assert_eq!(self.on, other.on, "automorphisms of different algebras");
        RBAut {
            on: self.on.clone(),
            m: self.m.mul(&other.m),
        }
    }
}

/// A pair of automorphisms `(beta on B, alpha on A)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutPair {
    pub beta: RBAut,
    pub alpha: RBAut,
}

impl AutPair {
    pub fn identity(b: RBAlgebra, a: RBAlgebra) -> AutPair {
        AutPair {
            beta: RBAut::identity(b),
            alpha: RBAut::identity(a),
        }
    }

    /// Componentwise composition: `self` after `other`.
    pub fn compose(&self, other: &AutPair) -> AutPair {
        AutPair {
            beta: self.beta.compose(&other.beta),
            alpha: self.alpha.compose(&other.alpha),
        }
    }
}

fn prime_of(field: &Field) -> Result<u64> {
    match field {
        Field::Prime(p) => Ok(*p),
        Field::Rationals => Err(Error::UnsupportedField(
            "automorphism enumeration over the rationals".into(),
        )),
    }
}

/// All automorphisms of a Rota-Baxter algebra over a prime field, in
/// lexicographic order of the matrix entries.
pub fn enumerate_aut(ar: &RBAlgebra, budget: u64) -> Result<Vec<RBAut>> {
    let p = prime_of(&ar.alg.field)?;
    let n = ar.dim();
    let count = MatrixEnumerator::count(n, n, p);
    if count > budget as u128 {
        return Err(Error::BudgetExceeded(count, budget));
    }
    let mut out = Vec::new();
    for m in MatrixEnumerator::new(n, n, p) {
        if m.is_invertible() && is_rb_morphism(ar, ar, &m)? {
            out.push(RBAut {
                on: ar.clone(),
                m,
            });
        }
    }
    Ok(out)
}

/// Whether an automorphism of `E` maps `image(i)` into itself. Since
/// `image(i) = kernel(pi)` this is exactly `pi . gamma . i = 0`.
pub fn preserves_b_block(x: &Extension, gamma: &Matrix) -> bool {
    x.pi.mul(gamma).mul(&x.i).is_zero()
}

/// The block-preserving automorphisms of `E`, in lexicographic order.
pub fn aut_b_group(x: &Extension, budget: u64) -> Result<Vec<RBAut>> {
    Ok(enumerate_aut(&x.e, budget)?
        .into_iter()
        .filter(|g| preserves_b_block(x, &g.m))
        .collect())
}

/// The restriction pair of a block-preserving automorphism: its action on `B`
/// in B-coordinates, and the induced map `pi . gamma . s` on `A` (which does
/// not depend on the section).
pub fn tau(x: &Extension, gamma: &RBAut) -> Result<AutPair> {
    if !preserves_b_block(x, &gamma.m) {
        return Err(Error::NotBlockPreserving);
    }
    let db = x.b.dim();
    let gi = gamma.m.mul(&x.i);
    // solve i . beta = gamma . i columnwise
    let mut beta = Matrix::zero(db, db, &x.b.alg.field);
    for j in 0..db {
        let (coords, _) = x
            .i
            .solve_affine(&gi.col(j))
            .ok_or_else(|| Error::ValueOutsideB("restricted image escapes B".into()))?;
        for k in 0..db {
            beta.set(k, j, coords[k].clone());
        }
    }
    let s = canonical_section(x)?;
    let alpha = x.pi.mul(&gamma.m).mul(&s);
    Ok(AutPair {
        beta: RBAut::new(x.b.clone(), beta)?,
        alpha: RBAut::new(x.a.clone(), alpha)?,
    })
}

/// Twists a cocycle by a pair: `chi'(a,b) = beta chi(inv(alpha) a, inv(alpha) b)`,
/// `psi'(a,u) = beta psi(inv(alpha) a, inv(beta) u)` slotwise, and
/// `Phi' = beta Phi inv(alpha)`.
pub fn twist_cocycle(c: &RBCocycle, p: &AutPair) -> Result<RBCocycle> {
    if p.alpha.on != c.a || p.beta.on != c.b {
        return Err(Error::ShapeMismatch(
            "pair components act on the wrong algebras".into(),
        ));
    }
    let (da, db) = (c.a.dim(), c.b.dim());
    let f = c.field();
    let ai = p.alpha.inverse().m;
    let bi = p.beta.inverse().m;
    let b = &p.beta.m;
    let mut chi = crate::linalg::Tensor3::zero(da, da, db, &f);
    let mut psi_l = crate::linalg::Tensor3::zero(da, db, db, &f);
    let mut psi_r = crate::linalg::Tensor3::zero(db, da, db, &f);
    for i in 0..da {
        let xa = ai.col(i);
        for j in 0..da {
            let val = b.mul_vec(&c.chi.apply(&xa, &ai.col(j)));
            for k in 0..db {
                chi.set(i, j, k, val[k].clone());
            }
        }
        for l in 0..db {
            let xu = bi.col(l);
            let val = b.mul_vec(&c.psi_l.apply(&xa, &xu));
            for k in 0..db {
                psi_l.set(i, l, k, val[k].clone());
            }
            let val = b.mul_vec(&c.psi_r.apply(&xu, &xa));
            for k in 0..db {
                psi_r.set(l, i, k, val[k].clone());
            }
        }
    }
    let phi = b.mul(&c.phi).mul(&ai);
    RBCocycle::new(c.a.clone(), c.b.clone(), chi, psi_l, psi_r, phi)
}

/// Outcome of the inducibility obstruction for a pair: whether the twisted
/// cocycle is equivalent to the extracted one, together with a witness and
/// both cocycles for reporting.
#[derive(Debug, Clone)]
pub struct WellsDecision {
    pub vanishes: bool,
    pub witness: Option<Matrix>,
    pub twisted: RBCocycle,
    pub original: RBCocycle,
}

/// Evaluates the obstruction of a pair against an extension: extract the
/// cocycle along the canonical section, twist it by the pair, and search for
/// an equivalence witness.
pub fn wells_map(x: &Extension, p: &AutPair, budget: u64) -> Result<WellsDecision> {
    let s = canonical_section(x)?;
    let original = extract_cocycle(x, &s)?;
    let twisted = twist_cocycle(&original, p)?;
    let witness = search_equivalence(&twisted, &original, budget)?;
    Ok(WellsDecision {
        vanishes: witness.is_some(),
        witness,
        twisted,
        original,
    })
}

/// The map `q : E -> B` with `i q = id - s pi` (B-coordinates of the
/// complement of the section).
fn b_projection(x: &Extension, s: &Matrix) -> Result<Matrix> {
    let de = x.e.dim();
    let db = x.b.dim();
    let f = x.e.alg.field;
    let compl = Matrix::identity(de, &f).sub(&s.mul(&x.pi));
    let mut q = Matrix::zero(db, de, &f);
    for j in 0..de {
        let (coords, _) = x
            .i
            .solve_affine(&compl.col(j))
            .ok_or_else(|| Error::ValueOutsideB("complement of section escapes B".into()))?;
        for k in 0..db {
            q.set(k, j, coords[k].clone());
        }
    }
    Ok(q)
}

/// Builds the automorphism of `E` induced by a pair and an equivalence
/// witness: in section coordinates `gamma(a, u) = (alpha a, beta u + phi alpha a)`.
pub fn lift_pair(x: &Extension, p: &AutPair, phi: &Matrix) -> Result<RBAut> {
    let s = canonical_section(x)?;
    let q = b_projection(x, &s)?;
    let alpha_pi = p.alpha.m.mul(&x.pi);
    let gamma = s
        .mul(&alpha_pi)
        .add(&x.i.mul(&p.beta.m).mul(&q))
        .add(&x.i.mul(phi).mul(&alpha_pi));
    RBAut::new(x.e.clone(), gamma)
}

/// Decides whether a pair is induced by some block-preserving automorphism of
/// `E`. When the obstruction vanishes the lifting is constructed and checked
/// to restrict back to the pair.
pub fn inducible(x: &Extension, p: &AutPair, budget: u64) -> Result<bool> {
    let w = wells_map(x, p, budget)?;
    let Some(phi) = w.witness else {
        return Ok(false);
    };
    let gamma = lift_pair(x, p, &phi)?;
    let back = tau(x, &gamma)?;
    if back.alpha.m != p.alpha.m || back.beta.m != p.beta.m {
        return Err(Error::Validation(
            "constructed lifting does not restrict to the pair".into(),
        ));
    }
    Ok(true)
}

/// Whether `alpha` lifts to an automorphism of `E` fixing `B` pointwise.
pub fn wells_a(x: &Extension, alpha: &RBAut, budget: u64) -> Result<bool> {
    let p = AutPair {
        beta: RBAut::identity(x.b.clone()),
        alpha: alpha.clone(),
    };
    inducible(x, &p, budget)
}

/// Whether `beta` extends to an automorphism of `E` inducing the identity on `A`.
pub fn wells_b(x: &Extension, beta: &RBAut, budget: u64) -> Result<bool> {
    let p = AutPair {
        beta: beta.clone(),
        alpha: RBAut::identity(x.a.clone()),
    };
    inducible(x, &p, budget)
}

/// The compatible pairs of an abelian extension: pairs `(beta, alpha)` with
/// `beta psi(a, u) = psi(alpha a, beta u)` and `beta psi(u, a) = psi(beta u, alpha a)`.
pub fn compatible_pairs(x: &Extension, budget: u64) -> Result<Vec<AutPair>> {
    if !x.b.alg.mu.is_zero() {
        return Err(Error::NotAbelian("compatible pairs need B with zero product".into()));
    }
    let bs = crate::ext::induced_bimodule(x)?;
    let auts_b = enumerate_aut(&x.b, budget)?;
    let auts_a = enumerate_aut(&x.a, budget)?;
    let mut out = Vec::new();
    let (da, db) = (x.a.dim(), x.b.dim());
    for beta in &auts_b {
        for alpha in &auts_a {
            let mut ok = true;
            'scan: for i in 0..da {
                let ea = x.a.alg.basis(i);
                let aa = alpha.m.col(i);
                for k in 0..db {
                    let u = x.b.alg.basis(k);
                    let bu = beta.m.col(k);
                    if beta.m.mul_vec(&bs.module.act_l(&ea, &u)) != bs.module.act_l(&aa, &bu) {
                        ok = false;
                        break 'scan;
                    }
                    if beta.m.mul_vec(&bs.module.act_r(&u, &ea)) != bs.module.act_r(&bu, &aa) {
                        ok = false;
                        break 'scan;
                    }
                }
            }
            if ok {
                out.push(AutPair {
                    beta: beta.clone(),
                    alpha: alpha.clone(),
                });
            }
        }
    }
    Ok(out)
}

/// One verified node of the Wells sequences.
#[derive(Debug, Clone)]
pub struct ExactnessNode {
    pub name: String,
    pub ok: bool,
}

#[derive(Debug, Clone)]
pub struct ExactnessReport {
    pub nodes: Vec<ExactnessNode>,
}

impl ExactnessReport {
    pub fn ok(&self) -> bool {
        self.nodes.iter().all(|n| n.ok)
    }
}

fn matrix_key(m: &Matrix) -> Vec<Scalar> {
    (0..m.rows())
        .flat_map(|r| (0..m.cols()).map(move |c| m.get(r, c).clone()))
        .collect()
}

fn same_matrix_set(xs: &[Matrix], ys: &[Matrix]) -> bool {
    let mut a: Vec<Vec<Scalar>> = xs.iter().map(matrix_key).collect();
    let mut b: Vec<Vec<Scalar>> = ys.iter().map(matrix_key).collect();
    a.sort();
    b.sort();
    a == b
}

/// Verifies, by exhaustive enumeration over a prime field, that the Wells
/// sequences of the extension are exact: the kernel of the restriction map is
/// the subgroup acting trivially on both ends, and at each group of pairs the
/// image of the restriction equals the vanishing locus of the obstruction.
pub fn check_wells_exactness(x: &Extension, budget: u64) -> Result<ExactnessReport> {
    let auts = aut_b_group(x, budget)?;
    let pairs_of: Vec<(RBAut, AutPair)> = auts
        .iter()
        .map(|g| tau(x, g).map(|p| (g.clone(), p)))
        .collect::<Result<_>>()?;
    let id_a = Matrix::identity(x.a.dim(), &x.a.alg.field);
    let id_b = Matrix::identity(x.b.dim(), &x.b.alg.field);

    // the subgroup restricting to (id, id), computed from the enumeration
    let fixing_both: Vec<Matrix> = pairs_of
        .iter()
        .filter(|(_, p)| p.alpha.m == id_a && p.beta.m == id_b)
        .map(|(g, _)| g.m.clone())
        .collect();

    let mut nodes = Vec::new();

    // tau is a group homomorphism on the enumerated group
    let mut hom_ok = true;
    'outer: for (g, pg) in &pairs_of {
        for (h, ph) in &pairs_of {
            let gh = g.compose(h);
            let pgh = tau(x, &gh)?;
            let expected = pg.compose(ph);
            if pgh.alpha.m != expected.alpha.m || pgh.beta.m != expected.beta.m {
                hom_ok = false;
                break 'outer;
            }
        }
    }
    nodes.push(ExactnessNode {
        name: "tau-homomorphism".into(),
        ok: hom_ok,
    });

    // kernel of tau = automorphisms fixing B pointwise and inducing id on A
    let kernel_direct: Vec<Matrix> = pairs_of
        .iter()
        .filter(|(g, _)| {
            // gamma i = i and pi gamma s = s-side identity, checked directly
            g.m.mul(&x.i) == x.i
        })
        .filter(|(_, p)| p.alpha.m == id_a)
        .map(|(g, _)| g.m.clone())
        .collect();
    nodes.push(ExactnessNode {
        name: "kernel-tau".into(),
        ok: same_matrix_set(&fixing_both, &kernel_direct),
    });

    // image of tau = pairs with vanishing obstruction
    let all_pairs = {
        let auts_b = enumerate_aut(&x.b, budget)?;
        let auts_a = enumerate_aut(&x.a, budget)?;
        let mut v = Vec::new();
        for beta in &auts_b {
            for alpha in &auts_a {
                v.push(AutPair {
                    beta: beta.clone(),
                    alpha: alpha.clone(),
                });
            }
        }
        v
    };
    let image: Vec<(Matrix, Matrix)> = pairs_of
        .iter()
        .map(|(_, p)| (p.beta.m.clone(), p.alpha.m.clone()))
        .collect();
    let mut image_ok = true;
    for p in &all_pairs {
        let in_image = image
            .iter()
            .any(|(b, a)| *b == p.beta.m && *a == p.alpha.m);
        let vanishes = wells_map(x, p, budget)?.vanishes;
        if in_image != vanishes {
            image_ok = false;
            break;
        }
    }
    nodes.push(ExactnessNode {
        name: "image-tau-equals-vanishing-locus".into(),
        ok: image_ok,
    });

    // refined sequence on automorphisms fixing B pointwise
    let fixing_b: Vec<&(RBAut, AutPair)> = pairs_of
        .iter()
        .filter(|(g, _)| g.m.mul(&x.i) == x.i)
        .collect();
    let tau1_image: Vec<Matrix> = fixing_b.iter().map(|(_, p)| p.alpha.m.clone()).collect();
    let mut wa_ok = true;
    for alpha in enumerate_aut(&x.a, budget)? {
        let liftable = wells_a(x, &alpha, budget)?;
        let in_image = tau1_image.iter().any(|m| *m == alpha.m);
        if liftable != in_image {
            wa_ok = false;
            break;
        }
    }
    nodes.push(ExactnessNode {
        name: "image-tau1-equals-wellsA-kernel".into(),
        ok: wa_ok,
    });
    let ker_tau1: Vec<Matrix> = fixing_b
        .iter()
        .filter(|(_, p)| p.alpha.m == id_a)
        .map(|(g, _)| g.m.clone())
        .collect();
    nodes.push(ExactnessNode {
        name: "kernel-tau1".into(),
        ok: same_matrix_set(&ker_tau1, &fixing_both),
    });

    // refined sequence on automorphisms inducing the identity on A
    let fixing_a: Vec<&(RBAut, AutPair)> = pairs_of
        .iter()
        .filter(|(_, p)| p.alpha.m == id_a)
        .collect();
    let tau2_image: Vec<Matrix> = fixing_a.iter().map(|(_, p)| p.beta.m.clone()).collect();
    let mut wb_ok = true;
    for beta in enumerate_aut(&x.b, budget)? {
        let extendable = wells_b(x, &beta, budget)?;
        let in_image = tau2_image.iter().any(|m| *m == beta.m);
        if extendable != in_image {
            wb_ok = false;
            break;
        }
    }
    nodes.push(ExactnessNode {
        name: "image-tau2-equals-wellsB-kernel".into(),
        ok: wb_ok,
    });
    let ker_tau2: Vec<Matrix> = fixing_a
        .iter()
        .filter(|(g, _)| g.m.mul(&x.i) == x.i)
        .map(|(g, _)| g.m.clone())
        .collect();
    nodes.push(ExactnessNode {
        name: "kernel-tau2".into(),
        ok: same_matrix_set(&ker_tau2, &fixing_both),
    });

    Ok(ExactnessReport { nodes })
}

/// The correspondence, for an abelian extension over a prime field, between
/// automorphisms restricting to the identity on both ends and derivations:
/// each such automorphism is sent to `gamma s - s` in B-coordinates.
#[derive(Debug, Clone)]
pub struct ThetaCorrespondence {
    /// Pairs (automorphism, associated derivation matrix).
    pub pairs: Vec<(RBAut, Matrix)>,
    /// Bijective onto the F_p-points of the derivation space.
    pub bijective: bool,
    /// Composition of automorphisms maps to addition of derivations.
    pub homomorphic: bool,
}

pub fn theta_iso(x: &Extension, budget: u64) -> Result<ThetaCorrespondence> {
    if !x.b.alg.mu.is_zero() {
        return Err(Error::NotAbelian("derivation correspondence needs abelian B".into()));
    }
    let p = prime_of(&x.a.alg.field)?;
    let s = canonical_section(x)?;
    let id_a = Matrix::identity(x.a.dim(), &x.a.alg.field);
    let id_b = Matrix::identity(x.b.dim(), &x.b.alg.field);
    let auts: Vec<RBAut> = aut_b_group(x, budget)?
        .into_iter()
        .filter(|g| {
            tau(x, g)
                .map(|pr| pr.alpha.m == id_a && pr.beta.m == id_b)
                .unwrap_or(false)
        })
        .collect();
    let (da, db) = (x.a.dim(), x.b.dim());
    let mut pairs = Vec::new();
    for g in auts {
        let diff = g.m.mul(&s).sub(&s);
        let mut theta = Matrix::zero(db, da, &x.a.alg.field);
        for j in 0..da {
            let (coords, _) = x
                .i
                .solve_affine(&diff.col(j))
                .ok_or_else(|| Error::ValueOutsideB("theta value escapes B".into()))?;
            for k in 0..db {
                theta.set(k, j, coords[k].clone());
            }
        }
        pairs.push((g, theta));
    }
    // bijectivity onto the F_p-points of the derivation space
    let bs = crate::ext::induced_bimodule(x)?;
    let der_basis = derivation_space(&x.a, &bs);
    let expected = (p as u128).pow(der_basis.len() as u32);
    let mut images: Vec<Vec<Scalar>> = pairs.iter().map(|(_, t)| matrix_key(t)).collect();
    images.sort();
    images.dedup();
    let bijective = images.len() as u128 == expected && pairs.len() as u128 == expected;
    // homomorphism: theta(g h) = theta(g) + theta(h)
    let mut homomorphic = true;
    'outer: for (g, tg) in &pairs {
        for (h, th) in &pairs {
            let gh = g.compose(h);
            let Some((_, tgh)) = pairs.iter().find(|(k, _)| k.m == gh.m) else {
                homomorphic = false;
                break 'outer;
            };
            if *tgh != tg.add(th) {
                homomorphic = false;
                break 'outer;
            }
        }
    }
    Ok(ThetaCorrespondence {
        pairs,
        bijective,
        homomorphic,
    })
}

/// The homomorphic section of the restriction map available on split abelian
/// extensions: `(beta, alpha) -> (a, u) |-> (alpha a, beta u)` in section
/// coordinates.
pub fn split_section(x: &Extension, p: &AutPair) -> Result<RBAut> {
    let s = canonical_section(x)?;
    let q = b_projection(x, &s)?;
    let gamma = s
        .mul(&p.alpha.m)
        .mul(&x.pi)
        .add(&x.i.mul(&p.beta.m).mul(&q));
    RBAut::new(x.e.clone(), gamma)
}
