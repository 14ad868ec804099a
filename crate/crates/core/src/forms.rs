//! `X ⊗_A Ω^r` for a right module `X` and a quotient `Ω = Ω_u / I` of the
//! universal calculus, for `r ≤ D`.
//!
//! Since `X ⊗_A Ω_u^r ≅ X ⊗ Ā^{⊗r}`, every degree has an explicit ambient
//! space with basis `(x, t)` at index `x·m^r + t`, standing for
//! `x ⊗ d(b_{t_1}) ⋯ d(b_{t_r})`. A [`FormModule`] is that ambient space
//! modulo relations (`X ⊗ I^r`, plus anything added with
//! [`FormModule::with_relations`]).

use std::sync::Arc;

use crate::algebra::Module;
use crate::error::{Error, Result};
use crate::linalg::{axpy, unit_vector, zero_vector, Matrix, Quotient, SparseMatrix, Subspace, Vector};
use crate::rational::Rational;
use crate::universal::Universal;

#[derive(Debug)]
struct FormCore {
    uni: Universal,
    xdim: usize,
    x_left: Option<Vec<SparseMatrix>>,
    /// `right[r][i]`: ambient action of `e_i` in degree `r`.
    right: Vec<Vec<SparseMatrix>>,
}

#[derive(Clone, Debug)]
pub struct FormModule {
    core: Arc<FormCore>,
    quotients: Vec<Quotient>,
}

impl FormCore {
    fn new(uni: &Universal, x: &Module) -> Result<Self> {
        let n = uni.n();
        if x.algebra_dim() != n {
            return Err(Error::AlgebraMismatch);
        }
        let m = uni.m();
        let a = uni.algebra();
        let mut right: Vec<Vec<SparseMatrix>> = vec![x.sparse_rights()];
        for r in 1..=uni.truncation() {
            let prev = &right[r - 1];
            let rows = x.dim() * uni.m_pow(r);
            let degree: Vec<SparseMatrix> = (0..n)
                .map(|i| {
                    let bar_f = uni.bar_of_basis(i);
                    let cols = (0..rows)
                        .map(|col| {
                            let (p, s) = (col / m, col % m);
                            let b = uni.bar_basis(s);
                            let mut acc = std::collections::BTreeMap::<usize, Rational>::new();
                            // ξ ⊗ bar(b e_i)
                            let bf = uni.bar(a.basis_product(b, i));
                            for (s2, c) in bf.iter().enumerate() {
                                if !c.is_zero() {
                                    *acc.entry(p * m + s2).or_insert_with(Rational::zero) += c;
                                }
                            }
                            // − (ξ·b) ⊗ bar(e_i)
                            for (q, c) in prev[b].column(p) {
                                for (s2, y) in bar_f {
                                    *acc.entry(q * m + s2).or_insert_with(Rational::zero) -= c * y;
                                }
                            }
                            acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
                        })
                        .collect();
                    SparseMatrix::new(rows, cols)
                })
                .collect();
            right.push(degree);
        }
        Ok(FormCore { uni: uni.clone(), xdim: x.dim(), x_left: x.sparse_lefts(), right })
    }
}

impl FormModule {
    /// `X ⊗_A (Ω_u / I)`; `ideal[r]` is `I^r` in normalized coordinates.
    pub fn new(uni: &Universal, x: &Module, ideal: &[Subspace]) -> Result<Self> {
        let core = Arc::new(FormCore::new(uni, x)?);
        let mut fm = FormModule { core, quotients: Vec::new() };
        let d = uni.truncation();
        fm.quotients = (0..=d)
            .map(|r| {
                let mut rel = Subspace::zero(fm.ambient_dim(r));
                if let Some(ideal_r) = ideal.get(r) {
                    for iota in ideal_r.basis() {
                        for xb in 0..fm.core.xdim {
                            rel.insert(fm.pure(&unit_vector(fm.core.xdim, xb), r, iota));
                        }
                    }
                }
                Quotient::new(rel)
            })
            .collect();
        Ok(fm)
    }

    /// Same ambient spaces with additional relations (given in ambient coordinates).
    pub fn with_relations(&self, extra: &[Subspace]) -> FormModule {
        let quotients = self
            .quotients
            .iter()
            .enumerate()
            .map(|(r, q)| match extra.get(r) {
                Some(e) => Quotient::new(q.sub().sum(e)),
                None => q.clone(),
            })
            .collect();
        FormModule { core: Arc::clone(&self.core), quotients }
    }

    /// Replaces all relations.
    pub fn with_exact_relations(&self, rels: Vec<Subspace>) -> FormModule {
        FormModule { core: Arc::clone(&self.core), quotients: rels.into_iter().map(Quotient::new).collect() }
    }

    pub fn universal(&self) -> &Universal {
        &self.core.uni
    }

    pub fn truncation(&self) -> usize {
        self.core.uni.truncation()
    }

    pub fn x_dim(&self) -> usize {
        self.core.xdim
    }

    pub fn has_left(&self) -> bool {
        self.core.x_left.is_some()
    }

    pub fn ambient_dim(&self, r: usize) -> usize {
        self.core.xdim * self.core.uni.m_pow(r)
    }

    pub fn dim(&self, r: usize) -> usize {
        self.quotients[r].dim()
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..=self.truncation()).map(|r| self.dim(r)).collect()
    }

    pub fn quotient(&self, r: usize) -> &Quotient {
        &self.quotients[r]
    }

    pub fn relations(&self, r: usize) -> &Subspace {
        self.quotients[r].sub()
    }

    pub fn project(&self, r: usize, v: Vector) -> Vector {
        self.quotients[r].project(v)
    }

    pub fn lift(&self, r: usize, c: &[Rational]) -> Vector {
        self.quotients[r].lift(c)
    }

    pub fn class_basis_lift(&self, r: usize, k: usize) -> Vector {
        unit_vector(self.ambient_dim(r), self.quotients[r].lift_index(k))
    }

    /// Ambient `v·e_i`.
    pub fn right_basis(&self, r: usize, v: &[Rational], i: usize) -> Vector {
        self.core.right[r][i].apply(v)
    }

    /// Ambient `v·f`.
    pub fn right_ambient(&self, r: usize, v: &[Rational], f: &[Rational]) -> Vector {
        let mut out = zero_vector(self.ambient_dim(r));
        for (i, c) in f.iter().enumerate() {
            if !c.is_zero() {
                self.core.right[r][i].apply_into(&mut out, c, v);
            }
        }
        out
    }

    /// Ambient `f·v`; needs a left action on `X`.
    pub fn left_ambient(&self, r: usize, f: &[Rational], v: &[Rational]) -> Result<Vector> {
        let left = self.core.x_left.as_ref().ok_or_else(|| Error::Invalid("no left action".into()))?;
        let mr = self.core.uni.m_pow(r);
        let mut out = zero_vector(self.ambient_dim(r));
        for (idx, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (x, t) = (idx / mr, idx % mr);
            for (i, fi) in f.iter().enumerate() {
                if fi.is_zero() {
                    continue;
                }
                let cf = c * fi;
                for (x2, a) in left[i].column(x) {
                    out[x2 * mr + t] += &cf * a;
                }
            }
        }
        Ok(out)
    }

    /// Ambient `ξ·ω` for `ξ` of degree `r` and `ω ∈ Ω_u^s`.
    pub fn mul_ambient(&self, r: usize, xi: &[Rational], s: usize, omega: &[Rational]) -> Vector {
        let ms = self.core.uni.m_pow(s);
        let mut out = zero_vector(self.ambient_dim(r + s));
        let mut cache: Vec<Option<Vector>> = vec![None; self.core.uni.n()];
        for (idx, c) in omega.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (i, t) = (idx / ms, idx % ms);
            let w = cache[i].get_or_insert_with(|| self.core.right[r][i].apply(xi));
            for (p, y) in w.iter().enumerate() {
                if !y.is_zero() {
                    out[p * ms + t] += c * y;
                }
            }
        }
        out
    }

    /// `ξ ⊗ t`: append a tail index (multiply by `d(b_{t_1}) ⋯`).
    pub fn append_tail(&self, r: usize, xi: &[Rational], s: usize, t: usize) -> Vector {
        let ms = self.core.uni.m_pow(s);
        let mut out = zero_vector(self.ambient_dim(r + s));
        for (p, y) in xi.iter().enumerate() {
            if !y.is_zero() {
                out[p * ms + t] = y.clone();
            }
        }
        out
    }

    /// Ambient `x ⊗ ω` for `x ∈ X` and `ω ∈ Ω_u^s`.
    pub fn pure(&self, x: &[Rational], s: usize, omega: &[Rational]) -> Vector {
        self.mul_ambient(0, x, s, omega)
    }

    /// Class `ξ̄·ω` for a class `ξ̄` of degree `r` and `ω ∈ Ω_u^s`.
    pub fn mul_class(&self, r: usize, xi: &[Rational], s: usize, omega: &[Rational]) -> Vector {
        self.project(r + s, self.mul_ambient(r, &self.lift(r, xi), s, omega))
    }

    pub fn right_class(&self, r: usize, xi: &[Rational], f: &[Rational]) -> Vector {
        self.project(r, self.right_ambient(r, &self.lift(r, xi), f))
    }

    pub fn left_class(&self, r: usize, f: &[Rational], xi: &[Rational]) -> Result<Vector> {
        Ok(self.project(r, self.left_ambient(r, f, &self.lift(r, xi))?))
    }

    /// Class of `x ⊗ ω`.
    pub fn pure_class(&self, x: &[Rational], s: usize, omega: &[Rational]) -> Vector {
        self.project(s, self.pure(x, s, omega))
    }

    /// Degree-`r` classes as a module with the induced actions.
    pub fn as_module(&self, r: usize) -> Result<Module> {
        let q = &self.quotients[r];
        let n = self.core.uni.n();
        let induce = |op: &dyn Fn(&[Rational]) -> Vector| -> Matrix {
            let cols: Vec<Vector> = q
                .complement()
                .iter()
                .map(|&j| q.project(op(&unit_vector(self.ambient_dim(r), j))))
                .collect();
            Matrix::from_cols(q.dim(), &cols)
        };
        let right: Vec<Matrix> = (0..n).map(|i| induce(&|v| self.right_basis(r, v, i))).collect();
        let names: Vec<String> = (0..q.dim()).map(|k| format!("c{}", k + 1)).collect();
        if self.has_left() {
            let left = (0..n)
                .map(|i| {
                    let e = unit_vector(n, i);
                    induce(&|v| self.left_ambient(r, &e, v).expect("left action"))
                })
                .collect();
            Module::bimodule(names, left, right)
        } else {
            Module::right_module(names, right)
        }
    }

    /// Subspace of degree-`r` classes spanned by `pure(x_b, ω)` for `x_b` in `sub` and all `ω ∈ Ω_u^r`.
    pub fn image_of_submodule(&self, r: usize, sub: &Subspace) -> Subspace {
        let ur = self.core.uni.dim(r);
        let mut out = Subspace::zero(self.dim(r));
        for x in sub.basis() {
            for w in 0..ur {
                out.insert(self.pure_class(x, r, &unit_vector(ur, w)));
            }
        }
        out
    }

    /// Class-space subspace to ambient subspace (lifted together with the relations).
    pub fn lift_subspace(&self, r: usize, sub: &Subspace) -> Subspace {
        let mut out = self.relations(r).clone();
        for v in sub.basis() {
            out.insert(self.lift(r, v));
        }
        out
    }

    /// Linear combination helper: `Σ c_k · class_basis_lift(k)`.
    pub fn lift_into(&self, r: usize, acc: &mut [Rational], c: &Rational, class: &[Rational]) {
        axpy(acc, c, &self.lift(r, class));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{check_bimodule, Algebra};
    use crate::tensor::tensor_over_a;
    use crate::universal::universal_first_order;

    #[test]
    fn omega_is_a_bimodule_in_each_degree() {
        for a in [Algebra::a2(), Algebra::m2()] {
            let u = Universal::new(&a, 3).unwrap();
            let fm = FormModule::new(&u, &Module::regular(&a), &[]).unwrap();
            for r in 0..=3 {
                assert!(check_bimodule(&a, &fm.as_module(r).unwrap()).is_pass(), "degree {r}");
            }
        }
    }

    #[test]
    fn degree_one_matches_kernel_of_mu() {
        let a = Algebra::m2();
        let u = Universal::new(&a, 2).unwrap();
        let fm = FormModule::new(&u, &Module::regular(&a), &[]).unwrap();
        let ku = universal_first_order(&a).unwrap();
        assert_eq!(fm.dim(1), ku.dim());
        // right action agrees after expansion
        for k in 0..u.dim(1) {
            let w = unit_vector(u.dim(1), k);
            for i in 0..4 {
                let lhs = u.expand(1, &fm.right_basis(1, &w, i));
                let t = u.expand(1, &w);
                let mut rhs = zero_vector(16);
                for (idx, c) in t.iter().enumerate() {
                    if !c.is_zero() {
                        let prod = a.basis_product(idx % 4, i);
                        for (j, y) in prod.iter().enumerate() {
                            rhs[(idx / 4) * 4 + j] += c * y;
                        }
                    }
                }
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn omega_tensor_omega_over_a2() {
        let a = Algebra::a2();
        let om = universal_first_order(&a).unwrap().module;
        assert_eq!(tensor_over_a(&om, &om).unwrap().dim(), 2);
        let u = Universal::new(&a, 2).unwrap();
        assert_eq!(FormModule::new(&u, &Module::regular(&a), &[]).unwrap().dim(2), 2);
    }
}
