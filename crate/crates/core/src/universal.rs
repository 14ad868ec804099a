//! The universal differential calculus of `A`, truncated at degree `D`.
//!
//! Degree `r` is modelled as `A ⊗ Ā^{⊗r}` with `Ā = A / k·1`: the basis
//! element `(i, s_1..s_r)` stands for `e_i d(b_{s_1}) ⋯ d(b_{s_r})`, where
//! `b_0, b_1, ..` are the algebra basis elements other than the first one
//! with a nonzero unit coordinate. Indices are lexicographic, so
//! `(i, t)` sits at `i·m^r + t` with `m = dim A − 1`.
//!
//! The inclusion into `A^{⊗(r+1)}` (the kernel-of-multiplication picture) is
//! [`Universal::expand`]; its inverse on the image is `id ⊗ bar^{⊗r}`.

use crate::algebra::{Algebra, Module};
use crate::error::{Error, Result};
use crate::linalg::{axpy, kernel, unit_vector, zero_vector, Matrix, SparseMatrix, Subspace, Vector};
use crate::rational::Rational;

#[derive(Clone, Debug)]
pub struct Universal {
    algebra: Algebra,
    truncation: usize,
    pivot: usize,
    others: Vec<usize>,
    bars: Vec<Vec<(usize, Rational)>>,
}

impl Universal {
    pub fn new(algebra: &Algebra, truncation: usize) -> Result<Self> {
        if truncation == 0 {
            return Err(Error::Invalid("truncation degree must be at least 1".into()));
        }
        let unit = algebra.unit();
        let pivot = unit
            .iter()
            .position(|x| !x.is_zero())
            .ok_or_else(|| Error::Invalid("unit is zero".into()))?;
        let others: Vec<usize> = (0..algebra.dim()).filter(|&i| i != pivot).collect();
        let mut u = Self { algebra: algebra.clone(), truncation, pivot, others, bars: Vec::new() };
        u.bars = (0..algebra.dim())
            .map(|i| {
                u.bar(&unit_vector(algebra.dim(), i))
                    .into_iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .collect()
            })
            .collect();
        Ok(u)
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// `dim A`.
    pub fn n(&self) -> usize {
        self.algebra.dim()
    }

    /// `dim Ā = dim A − 1`.
    pub fn m(&self) -> usize {
        self.others.len()
    }

    /// Algebra basis index behind the `s`-th `Ā` basis element.
    pub fn bar_basis(&self, s: usize) -> usize {
        self.others[s]
    }

    pub fn m_pow(&self, r: usize) -> usize {
        self.m().pow(r as u32)
    }

    pub fn dim(&self, r: usize) -> usize {
        self.n() * self.m_pow(r)
    }

    /// Image of `a` in `Ā`.
    pub fn bar(&self, a: &[Rational]) -> Vector {
        let u = self.algebra.unit();
        let ratio = &a[self.pivot] / &u[self.pivot];
        self.others.iter().map(|&s| &a[s] - &(&ratio * &u[s])).collect()
    }

    /// Sparse `bar(e_i)`.
    pub fn bar_of_basis(&self, i: usize) -> &[(usize, Rational)] {
        &self.bars[i]
    }

    /// `d a = 1 ⊗ ā` in degree 1.
    pub fn d_of_algebra(&self, a: &[Rational]) -> Vector {
        self.d(0, a)
    }

    /// `d(a_0 ⊗ t) = 1 ⊗ ā_0 ⊗ t` from degree `r` to `r + 1`.
    pub fn d(&self, r: usize, omega: &[Rational]) -> Vector {
        let mr = self.m_pow(r);
        let m = self.m();
        let mut out = zero_vector(self.dim(r + 1));
        let unit = self.algebra.unit();
        for (idx, c) in omega.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (i, t) = (idx / mr, idx % mr);
            for (s, b) in &self.bars[i] {
                let cb = c * b;
                for (k, uk) in unit.iter().enumerate() {
                    if !uk.is_zero() {
                        out[(k * m + s) * mr + t] += &cb * uk;
                    }
                }
            }
        }
        out
    }

    pub fn d_matrix(&self, r: usize) -> SparseMatrix {
        let cols = (0..self.dim(r))
            .map(|j| {
                self.d(r, &unit_vector(self.dim(r), j))
                    .into_iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .collect()
            })
            .collect();
        SparseMatrix::new(self.dim(r + 1), cols)
    }

    /// `e_f·ω` for `ω ∈ Ω_u^r`.
    pub fn left_basis(&self, r: usize, f: usize, omega: &[Rational]) -> Vector {
        let mr = self.m_pow(r);
        let mut out = zero_vector(self.dim(r));
        for (idx, c) in omega.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (i, t) = (idx / mr, idx % mr);
            for (j, y) in self.algebra.basis_product(f, i).iter().enumerate() {
                if !y.is_zero() {
                    out[j * mr + t] += c * y;
                }
            }
        }
        out
    }

    /// `e_i d(b_{t_1}) ⋯` as an element of `A^{⊗(r+1)}`.
    pub fn expand(&self, r: usize, omega: &[Rational]) -> Vector {
        let n = self.n();
        let mr = self.m_pow(r);
        let mut out = zero_vector(n.pow(r as u32 + 1));
        for (idx, c) in omega.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (i, t) = (idx / mr, idx % mr);
            let mut cur = unit_vector(n, i);
            for s in self.digits(r, t) {
                cur = self.times_d(&cur, self.others[s]);
            }
            axpy(&mut out, c, &cur);
        }
        out
    }

    /// `x · d(e_b)` for `x ∈ A^{⊗k}`: multiply the last factor into `1 ⊗ e_b − e_b ⊗ 1`.
    fn times_d(&self, x: &[Rational], b: usize) -> Vector {
        let n = self.n();
        let k = x.len() / n;
        let unit = self.algebra.unit();
        let mut out = zero_vector(x.len() * n);
        for (idx, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (head, last) = (idx / n, idx % n);
            // head ⊗ last ⊗ e_b
            out[(head * n + last) * n + b] += c;
            // − head ⊗ (last e_b) ⊗ 1
            for (p, y) in self.algebra.basis_product(last, b).iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                for (q, u) in unit.iter().enumerate() {
                    if !u.is_zero() {
                        out[(head * n + p) * n + q] -= &(c * y) * u;
                    }
                }
            }
        }
        debug_assert_eq!(out.len(), k * n * n);
        out
    }

    /// `id ⊗ bar^{⊗r}`: the inverse of [`Self::expand`] on its image.
    pub fn contract(&self, r: usize, tensor: &[Rational]) -> Vector {
        let n = self.n();
        let m = self.m();
        let mut out = zero_vector(self.dim(r));
        for (idx, c) in tensor.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut factors = Vec::with_capacity(r + 1);
            let mut rest = idx;
            for _ in 0..=r {
                factors.push(rest % n);
                rest /= n;
            }
            factors.reverse();
            let mut partial: Vec<(usize, Rational)> = vec![(factors[0], c.clone())];
            for &f in &factors[1..] {
                let mut next = Vec::new();
                for (p, x) in &partial {
                    for (s, b) in &self.bars[f] {
                        next.push((p * m + s, x * b));
                    }
                }
                partial = next;
            }
            for (p, x) in partial {
                out[p] += x;
            }
        }
        out
    }

    /// Converts a degree-`r` element of `A^{⊗(r+1)}` to normalized coordinates,
    /// failing if it is not in the universal calculus.
    pub fn from_tensor(&self, r: usize, tensor: &[Rational]) -> Result<Vector> {
        let expected = self.n().pow(r as u32 + 1);
        if tensor.len() != expected {
            return Err(Error::DimensionMismatch {
                context: format!("degree-{r} tensor"),
                expected,
                found: tensor.len(),
            });
        }
        let omega = self.contract(r, tensor);
        if self.expand(r, &omega) != tensor {
            return Err(Error::Invalid(format!("degree-{r} tensor is not in the universal calculus")));
        }
        Ok(omega)
    }

    /// Base-`m` digits of a tail index, most significant first.
    pub fn digits(&self, r: usize, mut t: usize) -> Vec<usize> {
        let m = self.m();
        let mut out = vec![0; r];
        for slot in out.iter_mut().rev() {
            *slot = t % m;
            t /= m;
        }
        out
    }

    pub fn describe_basis(&self, r: usize, idx: usize) -> String {
        let mr = self.m_pow(r);
        let (i, t) = (idx / mr, idx % mr);
        let mut s = self.algebra.name(i).to_string();
        for d in self.digits(r, t) {
            s.push_str(&format!(" d{}", self.algebra.name(self.others[d])));
        }
        s
    }

    pub fn describe(&self, r: usize, v: &[Rational]) -> String {
        crate::algebra::describe_vector(v, |i| format!("({})", self.describe_basis(r, i)))
    }
}

/// A first-order calculus in the kernel-of-multiplication picture: `Ω¹ = ker μ / K`.
#[derive(Clone, Debug)]
pub struct FirstOrderCalculus {
    /// Basis of `ker μ ⊂ A ⊗ A`.
    pub kernel_mu: Subspace,
    /// `K` in coordinates of `kernel_mu`.
    pub k: Subspace,
    pub omega1: crate::linalg::Quotient,
    /// Bimodule structure of `ker μ` in its basis.
    pub universal_module: Module,
    /// Bimodule structure of `Ω¹`.
    pub module: Module,
    /// `d: A → Ω¹` in class coordinates.
    pub d: Matrix,
}

/// `Ω¹_u = ker μ` with `d_u f = 1⊗f − f⊗1` and `K = 0`.
pub fn universal_first_order(a: &Algebra) -> Result<FirstOrderCalculus> {
    let k = kernel(&a.multiplication_map());
    let dim = k.dim();
    FirstOrderCalculus::from_kernel(a, k, Subspace::zero(dim))
}

impl FirstOrderCalculus {
    /// `ker μ / K` with `K` given in coordinates of the `ker μ` basis.
    pub fn from_kernel(a: &Algebra, kernel_mu: Subspace, k: Subspace) -> Result<Self> {
        let n = a.dim();
        let act = |op: &dyn Fn(usize, usize) -> Vector| -> Result<Matrix> {
            let cols = kernel_mu
                .basis()
                .iter()
                .map(|v| {
                    let mut out = zero_vector(n * n);
                    for (idx, c) in v.iter().enumerate() {
                        if !c.is_zero() {
                            axpy(&mut out, c, &op(idx / n, idx % n));
                        }
                    }
                    kernel_mu.coords(&out).ok_or(Error::NotContained)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Matrix::from_cols(kernel_mu.dim(), &cols))
        };
        let tensor = |x: &[Rational], y: &[Rational]| crate::tensor::outer(x, y);
        let mut left = Vec::with_capacity(n);
        let mut right = Vec::with_capacity(n);
        for f in 0..n {
            left.push(act(&|i, j| tensor(a.basis_product(f, i), &unit_vector(n, j)))?);
            right.push(act(&|i, j| tensor(&unit_vector(n, i), a.basis_product(j, f)))?);
        }
        let names = (0..kernel_mu.dim()).map(|i| format!("w{}", i + 1)).collect();
        let universal_module = Module::bimodule(names, left, right)?;
        let omega1 = crate::linalg::Quotient::new(k.clone());
        let module = quotient_module(&universal_module, &omega1)?;
        let d_cols: Vec<Vector> = (0..n)
            .map(|f| {
                let e = unit_vector(n, f);
                let du = crate::linalg::sub_vectors(&tensor(a.unit(), &e), &tensor(&e, a.unit()));
                Ok(omega1.project(kernel_mu.coords(&du).ok_or(Error::NotContained)?))
            })
            .collect::<Result<_>>()?;
        let d = Matrix::from_cols(omega1.dim(), &d_cols);
        Ok(FirstOrderCalculus { kernel_mu, k, omega1, universal_module, module, d })
    }

    /// Converts a presented calculus `(Ω¹, d)` by computing
    /// `K = ker(f⊗g ↦ f·dg)` on `ker μ`; fails if that map is not onto `Ω¹`.
    pub fn from_presented(a: &Algebra, omega1: &Module, d: &Matrix) -> Result<Self> {
        let n = a.dim();
        let left = omega1.require_left()?;
        let kernel_mu = kernel(&a.multiplication_map());
        let cols: Vec<Vector> = kernel_mu
            .basis()
            .iter()
            .map(|v| {
                let mut out = zero_vector(omega1.dim());
                for (idx, c) in v.iter().enumerate() {
                    if !c.is_zero() {
                        axpy(&mut out, c, &left[idx / n].apply(&d.col(idx % n)));
                    }
                }
                out
            })
            .collect();
        let pairing = Matrix::from_cols(omega1.dim(), &cols);
        let rank = pairing.rank();
        if rank != omega1.dim() {
            return Err(Error::NotSurjective { rank, codim: omega1.dim() });
        }
        let k = kernel(&pairing);
        Self::from_kernel(a, kernel_mu, k)
    }

    pub fn dim(&self) -> usize {
        self.omega1.dim()
    }

    /// Class of a `ker μ` element given in `A ⊗ A` coordinates.
    pub fn project_tensor(&self, t: &[Rational]) -> Option<Vector> {
        self.kernel_mu.coords(t).map(|c| self.omega1.project(c))
    }
}

/// Actions induced on `V / W` for an invariant subspace `W`.
pub fn quotient_module(m: &Module, q: &crate::linalg::Quotient) -> Result<Module> {
    let induce = |mat: &Matrix| -> Result<Matrix> {
        for w in q.sub().basis() {
            if !q.sub().contains(&mat.apply(w)) {
                return Err(Error::NotContained);
            }
        }
        let cols: Vec<Vector> = q.complement().iter().map(|&j| q.project(mat.col(j))).collect();
        Ok(Matrix::from_cols(q.dim(), &cols))
    };
    let right = m.rights().iter().map(induce).collect::<Result<Vec<_>>>()?;
    let names = q.complement().iter().map(|&j| m.name(j).to_string()).collect();
    match m.lefts() {
        Some(l) => Module::bimodule(names, l.iter().map(induce).collect::<Result<Vec<_>>>()?, right),
        None => Module::right_module(names, right),
    }
}
