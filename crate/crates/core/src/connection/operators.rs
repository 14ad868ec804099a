//! Right-A-linear maps `Φ: M → M ⊗ Ω^r`, extended right-Ω-linearly, and `∇̂`.

use crate::error::{Error, Result};
use crate::forms::FormModule;
use crate::linalg::{sub_vectors, add_vectors, unit_vector, zero_vector, Matrix, Vector};
use crate::rational::Rational;
use crate::verdict::Verdict;

use super::Connection;

/// A degree-`r` operator stored by its restriction to `M`: column `j` is
/// `Φ(x_j)` in class coordinates of degree `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeRHom {
    pub degree: usize,
    pub matrix: Matrix,
}

impl DegreeRHom {
    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn sub(&self, other: &DegreeRHom) -> DegreeRHom {
        assert_eq!(self.degree, other.degree);
        DegreeRHom { degree: self.degree, matrix: self.matrix.sub(&other.matrix) }
    }

    pub fn add(&self, other: &DegreeRHom) -> DegreeRHom {
        assert_eq!(self.degree, other.degree);
        DegreeRHom { degree: self.degree, matrix: self.matrix.add(&other.matrix) }
    }

    pub fn scale(&self, c: &Rational) -> DegreeRHom {
        DegreeRHom { degree: self.degree, matrix: self.matrix.scale(c) }
    }
}

/// An operator with its columns lifted to ambient coordinates.
#[derive(Clone, Debug)]
pub struct PreparedOp {
    degree: usize,
    lifted: Vec<Vector>,
}

/// Operators acting on the classes of `fm`, which is `M ⊗ Ω` or a quotient
/// of it sharing the same ambient spaces.
#[derive(Clone, Copy, Debug)]
pub struct OpContext<'a> {
    pub conn: &'a Connection,
    pub fm: &'a FormModule,
}

impl<'a> OpContext<'a> {
    pub fn new(conn: &'a Connection) -> Self {
        OpContext { conn, fm: conn.forms() }
    }

    pub fn on(conn: &'a Connection, fm: &'a FormModule) -> Self {
        OpContext { conn, fm }
    }

    pub fn truncation(&self) -> usize {
        self.conn.truncation()
    }

    pub fn module_dim(&self) -> usize {
        self.conn.module().dim()
    }

    pub fn identity(&self) -> DegreeRHom {
        let d = self.module_dim();
        let cols: Vec<Vector> = (0..d).map(|j| self.fm.project(0, unit_vector(d, j))).collect();
        DegreeRHom { degree: 0, matrix: Matrix::from_cols(self.fm.dim(0), &cols) }
    }

    /// `f̂: x ↦ f·x`.
    pub fn kappa0(&self, f: &[Rational]) -> Result<DegreeRHom> {
        let d = self.module_dim();
        let cols = (0..d)
            .map(|j| Ok(self.fm.project(0, self.fm.left_ambient(0, f, &unit_vector(d, j))?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(DegreeRHom { degree: 0, matrix: Matrix::from_cols(self.fm.dim(0), &cols) })
    }

    pub fn kappa0_basis(&self, i: usize) -> Result<DegreeRHom> {
        let n = self.conn.calculus().algebra().dim();
        self.kappa0(&unit_vector(n, i))
    }

    fn lifted(&self, phi: &DegreeRHom) -> Vec<Vector> {
        (0..phi.matrix.cols()).map(|j| self.fm.lift(phi.degree, &phi.matrix.col(j))).collect()
    }

    /// Ambient `Φ(ξ)` for ambient `ξ` of degree `s`, using `Φ(x ⊗ ω) = Φ(x)·ω`.
    fn apply_lifted(&self, lifted: &[Vector], r: usize, s: usize, xi: &[Rational]) -> Vector {
        let ms = self.fm.universal().m_pow(s);
        let mut out = zero_vector(self.fm.ambient_dim(r + s));
        for (idx, c) in xi.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (x, t) = (idx / ms, idx % ms);
            for (p, y) in lifted[x].iter().enumerate() {
                if !y.is_zero() {
                    out[p * ms + t] += c * y;
                }
            }
        }
        out
    }

    /// Extension of `Φ` to a degree-`s` class.
    pub fn apply_ext(&self, phi: &DegreeRHom, s: usize, class: &[Rational]) -> Result<Vector> {
        self.apply_prepared(&self.prepare(phi), s, class)
    }

    /// Caches the ambient lifts of `Φ(x_j)` for repeated [`OpContext::apply_prepared`] calls.
    pub fn prepare(&self, phi: &DegreeRHom) -> PreparedOp {
        PreparedOp { degree: phi.degree, lifted: self.lifted(phi) }
    }

    pub fn apply_prepared(&self, op: &PreparedOp, s: usize, class: &[Rational]) -> Result<Vector> {
        if op.degree + s > self.truncation() {
            return Err(Error::DegreeOverflow { degree: op.degree + s, truncation: self.truncation() });
        }
        let amb = self.apply_lifted(&op.lifted, op.degree, s, &self.fm.lift(s, class));
        Ok(self.fm.project(op.degree + s, amb))
    }

    /// Extended `∇` on degree-`s` classes.
    pub fn nabla(&self, s: usize, class: &[Rational]) -> Result<Vector> {
        self.conn.extend_on(self.fm, s, class)
    }

    /// `(∇̂Φ)(x) = ∇(Φx) − (−1)^r Φ(∇x)`.
    pub fn nabla_hat(&self, phi: &DegreeRHom) -> Result<DegreeRHom> {
        let r = phi.degree;
        if r + 1 > self.truncation() {
            return Err(Error::DegreeOverflow { degree: r + 1, truncation: self.truncation() });
        }
        let lifted = self.lifted(phi);
        let cols: Vec<Vector> = (0..self.module_dim())
            .map(|x| {
                let first = self.conn.extend_ambient(r, &lifted[x]);
                let second = self.apply_lifted(&lifted, r, 1, &self.conn_nabla_ambient(x));
                let v = if r.is_multiple_of(2) { sub_vectors(&first, &second) } else { add_vectors(&first, &second) };
                self.fm.project(r + 1, v)
            })
            .collect();
        Ok(DegreeRHom { degree: r + 1, matrix: Matrix::from_cols(self.fm.dim(r + 1), &cols) })
    }

    fn conn_nabla_ambient(&self, x: usize) -> Vector {
        let d = self.module_dim();
        self.conn.extend_ambient(0, &unit_vector(d, x))
    }

    pub fn nabla_hat_pow(&self, phi: &DegreeRHom, k: usize) -> Result<DegreeRHom> {
        let mut cur = phi.clone();
        for _ in 0..k {
            cur = self.nabla_hat(&cur)?;
        }
        Ok(cur)
    }

    /// `Φ∘Ψ`.
    pub fn compose(&self, phi: &DegreeRHom, psi: &DegreeRHom) -> Result<DegreeRHom> {
        let deg = phi.degree + psi.degree;
        if deg > self.truncation() {
            return Err(Error::DegreeOverflow { degree: deg, truncation: self.truncation() });
        }
        let lifted = self.lifted(phi);
        let cols: Vec<Vector> = (0..psi.matrix.cols())
            .map(|j| {
                let xi = self.fm.lift(psi.degree, &psi.matrix.col(j));
                self.fm.project(deg, self.apply_lifted(&lifted, phi.degree, psi.degree, &xi))
            })
            .collect();
        Ok(DegreeRHom { degree: deg, matrix: Matrix::from_cols(self.fm.dim(deg), &cols) })
    }

    /// Re-expresses an operator of another context (same ambient spaces) in this one.
    pub fn transport(&self, from: &FormModule, phi: &DegreeRHom) -> DegreeRHom {
        let cols: Vec<Vector> = (0..phi.matrix.cols())
            .map(|j| self.fm.project(phi.degree, from.lift(phi.degree, &phi.matrix.col(j))))
            .collect();
        DegreeRHom { degree: phi.degree, matrix: Matrix::from_cols(self.fm.dim(phi.degree), &cols) }
    }

    /// `Φ(x·f) = Φ(x)·f` on all basis pairs.
    pub fn check_right_linear(&self, phi: &DegreeRHom) -> Verdict {
        let module = self.conn.module();
        let n = module.algebra_dim();
        for x in 0..module.dim() {
            for i in 0..n {
                let lhs = phi.matrix.apply(&module.right(i).col(x));
                let rhs = self.fm.right_class(phi.degree, &phi.matrix.col(x), &unit_vector(n, i));
                let v = Verdict::zero(sub_vectors(&lhs, &rhs), || format!("({}, e{})", module.name(x), i + 1));
                if !v.is_pass() {
                    return v;
                }
            }
        }
        Verdict::Pass
    }

    /// Values on the right-module generators of `M`; injective on right-A-linear maps.
    pub fn key(&self, phi: &DegreeRHom) -> Vector {
        let mut out = Vec::with_capacity(self.key_dim(phi.degree));
        for &g in self.conn.right_generators() {
            out.extend(phi.matrix.col(g));
        }
        out
    }

    /// `Σ c_k ops[k]`, all of degree `degree`.
    pub fn combine(&self, degree: usize, ops: &[DegreeRHom], coeffs: &[Rational]) -> DegreeRHom {
        let mut matrix = Matrix::zeros(self.fm.dim(degree), self.module_dim());
        for (op, c) in ops.iter().zip(coeffs) {
            if !c.is_zero() {
                matrix = matrix.add(&op.matrix.scale(c));
            }
        }
        DegreeRHom { degree, matrix }
    }

    /// Columns `key(ops[k])`.
    pub fn key_matrix(&self, degree: usize, ops: &[DegreeRHom]) -> Matrix {
        let cols: Vec<Vector> = ops.iter().map(|op| self.key(op)).collect();
        Matrix::from_cols(self.key_dim(degree), &cols)
    }

    pub fn key_dim(&self, r: usize) -> usize {
        self.conn.right_generators().len() * self.fm.dim(r)
    }
}
