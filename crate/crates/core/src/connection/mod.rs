//! Right connections `∇: M → M ⊗_A Ω¹`, their extension to `M ⊗_A Ω`, and curvature.

mod full;
mod induced;
mod omega_hat;
mod operators;
mod quotient;

use std::sync::Arc;

pub use full::{induced_full_calculus, sigma_full, InducedCalculus, SigmaFull};
pub use induced::{induced_first_order, sigma_exists, InducedFirstOrder, SigmaMap, SigmaOutcome};
pub use omega_hat::{omega_hat_generate, OmegaHat, OpSpan};
pub use operators::{DegreeRHom, OpContext, PreparedOp};
pub use quotient::{j_ideal, JQuotient};

use crate::algebra::Module;
use crate::calculus::GradedCalculus;
use crate::error::{Error, Result};
use crate::forms::FormModule;
use crate::linalg::{add_vectors, is_zero_vector, sub_vectors, unit_vector, zero_vector, Matrix, Subspace, Vector};
use crate::rational::Rational;
use crate::verdict::{Verdict, Witness};

#[derive(Clone, Debug)]
pub struct Connection {
    name: String,
    calculus: Arc<GradedCalculus>,
    module: Module,
    forms: FormModule,
    nabla: Matrix,
    nabla_lift: Vec<Vector>,
    generators: Vec<usize>,
}

impl Connection {
    /// `nabla` has one column per basis element of `M`, in class coordinates of `M ⊗ Ω¹`.
    pub fn new(name: impl Into<String>, calculus: Arc<GradedCalculus>, module: Module, nabla: Matrix) -> Result<Self> {
        if module.algebra_dim() != calculus.algebra().dim() {
            return Err(Error::AlgebraMismatch);
        }
        let forms = FormModule::new(calculus.universal_model(), &module, calculus.ideals())?;
        if nabla.cols() != module.dim() || nabla.rows() != forms.dim(1) {
            return Err(Error::DimensionMismatch {
                context: "connection matrix".into(),
                expected: forms.dim(1) * module.dim(),
                found: nabla.rows() * nabla.cols(),
            });
        }
        let nabla_lift = (0..module.dim()).map(|j| forms.lift(1, &nabla.col(j))).collect();
        let generators = right_generators(&module);
        Ok(Connection { name: name.into(), calculus, module, forms, nabla, nabla_lift, generators })
    }

    /// From representatives in the ambient `M ⊗ Ā` of degree 1.
    pub fn from_ambient(name: impl Into<String>, calculus: Arc<GradedCalculus>, module: Module, images: &[Vector]) -> Result<Self> {
        let forms = FormModule::new(calculus.universal_model(), &module, calculus.ideals())?;
        let cols = images
            .iter()
            .map(|v| {
                if v.len() != forms.ambient_dim(1) {
                    return Err(Error::DimensionMismatch {
                        context: "connection image".into(),
                        expected: forms.ambient_dim(1),
                        found: v.len(),
                    });
                }
                Ok(forms.project(1, v.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        let nabla = Matrix::from_cols(forms.dim(1), &cols);
        Self::new(name, calculus, module, nabla)
    }

    /// From images in `M ⊗ A` (index `x·n + k` for `x ⊗ e_k`) lying in the kernel of the action map.
    pub fn from_tensor(name: impl Into<String>, calculus: Arc<GradedCalculus>, module: Module, images: &[Vector]) -> Result<Self> {
        let uni = calculus.universal_model().clone();
        let n = uni.n();
        let m = uni.m();
        let mut ambient = Vec::with_capacity(images.len());
        for (j, v) in images.iter().enumerate() {
            if v.len() != module.dim() * n {
                return Err(Error::DimensionMismatch {
                    context: format!("connection image {j}"),
                    expected: module.dim() * n,
                    found: v.len(),
                });
            }
            let mut contraction = zero_vector(module.dim());
            let mut out = zero_vector(module.dim() * m);
            for (idx, c) in v.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let (x, k) = (idx / n, idx % n);
                let xk = module.right(k).col(x);
                crate::linalg::axpy(&mut contraction, c, &xk);
                for (s, b) in uni.bar_of_basis(k) {
                    out[x * m + s] += c * b;
                }
            }
            if !is_zero_vector(&contraction) {
                return Err(Error::Invalid(format!("connection image {j} is not in M ⊗ Ω¹_u")));
            }
            ambient.push(out);
        }
        Self::from_ambient(name, calculus, module, &ambient)
    }

    /// Images `∇x_j` in `M ⊗ A` (index `x·n + k`), the inverse of [`Connection::from_tensor`].
    pub fn to_tensor(&self) -> Vec<Vector> {
        let uni = self.calculus.universal_model();
        let (n, m) = (uni.n(), uni.m());
        let d = self.module.dim();
        let unit = uni.algebra().unit();
        self.nabla_lift
            .iter()
            .map(|amb| {
                let mut out = zero_vector(d * n);
                for (idx, c) in amb.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let (x, s) = (idx / m, idx % m);
                    let b = uni.bar_basis(s);
                    out[x * n + b] += c;
                    let xb = self.module.right(b).col(x);
                    for (y, v) in xb.iter().enumerate() {
                        if v.is_zero() {
                            continue;
                        }
                        for (k, u) in unit.iter().enumerate() {
                            if !u.is_zero() {
                                out[y * n + k] -= &(c * v) * u;
                            }
                        }
                    }
                }
                out
            })
            .collect()
    }

    /// `∇ = d` on `M = A`.
    pub fn exterior(name: impl Into<String>, calculus: Arc<GradedCalculus>) -> Result<Self> {
        let a = calculus.algebra().clone();
        let n = a.dim();
        let images: Vec<Vector> = (0..n).map(|i| calculus.universal_model().d(0, &unit_vector(n, i))).collect();
        Self::from_ambient(name, calculus, Module::regular(&a), &images)
    }

    /// `∇ = d + Θ` on the free module `A^k`, where `theta[c'][c]` is the
    /// component of `∇(1_c)` along `1_{c'}`, a degree-1 class of the calculus.
    pub fn gauge(name: impl Into<String>, calculus: Arc<GradedCalculus>, k: usize, theta: &[Vec<Vector>]) -> Result<Self> {
        let a = calculus.algebra().clone();
        let n = a.dim();
        let uni = calculus.universal_model().clone();
        let module = Module::free(&a, k);
        let forms = FormModule::new(&uni, &module, calculus.ideals())?;
        let unit_in = |c: usize| {
            let mut v = zero_vector(n * k);
            for (i, u) in a.unit().iter().enumerate() {
                v[c * n + i] = u.clone();
            }
            v
        };
        let mut images = Vec::with_capacity(n * k);
        for c in 0..k {
            for i in 0..n {
                let e = unit_vector(n, i);
                let mut img = forms.pure(&unit_in(c), 1, &uni.d(0, &e));
                for (cp, row) in theta.iter().enumerate() {
                    let t = calculus.lift(1, &row[c]);
                    let te = calculus.forms().right_ambient(1, &t, &e);
                    img = add_vectors(&img, &forms.pure(&unit_in(cp), 1, &te));
                }
                images.push(img);
            }
        }
        Self::from_ambient(name, calculus, module, &images)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn calculus(&self) -> &Arc<GradedCalculus> {
        &self.calculus
    }

    pub fn module(&self) -> &Module {
        &self.module
    }

    pub fn forms(&self) -> &FormModule {
        &self.forms
    }

    pub fn matrix(&self) -> &Matrix {
        &self.nabla
    }

    pub fn truncation(&self) -> usize {
        self.calculus.truncation()
    }

    /// Basis indices generating `M` as a right module.
    pub fn right_generators(&self) -> &[usize] {
        &self.generators
    }

    /// `∇x` in classes of `M ⊗ Ω¹`.
    pub fn apply(&self, x: &[Rational]) -> Vector {
        self.nabla.apply(x)
    }

    /// Ambient extension `x ⊗ dω ↦ ∇x ⊗ dω` from degree `r` to `r + 1`.
    pub fn extend_ambient(&self, r: usize, v: &[Rational]) -> Vector {
        let fm = &self.forms;
        let mr = fm.universal().m_pow(r);
        let mut out = zero_vector(fm.ambient_dim(r + 1));
        for (idx, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (x, t) = (idx / mr, idx % mr);
            for (p, y) in self.nabla_lift[x].iter().enumerate() {
                if !y.is_zero() {
                    out[p * mr + t] += c * y;
                }
            }
        }
        out
    }

    /// Extended `∇` on classes of `fm` (which must share this connection's ambient spaces).
    pub fn extend_on(&self, fm: &FormModule, r: usize, class: &[Rational]) -> Result<Vector> {
        if r + 1 > self.truncation() {
            return Err(Error::DegreeOverflow { degree: r + 1, truncation: self.truncation() });
        }
        Ok(fm.project(r + 1, self.extend_ambient(r, &fm.lift(r, class))))
    }

    pub fn extend(&self, r: usize, class: &[Rational]) -> Result<Vector> {
        self.extend_on(&self.forms, r, class)
    }

    /// `∇∘∇` from degree `r` to `r + 2` on classes of `fm`.
    pub fn curvature_on(&self, fm: &FormModule, r: usize, class: &[Rational]) -> Result<Vector> {
        let once = self.extend_on(fm, r, class)?;
        self.extend_on(fm, r + 1, &once)
    }

    /// `∇(x·f) − (∇x)·f − x ⊗ df` for basis elements `x` of `M` and `f` of `A`.
    pub fn right_leibniz_residual(&self, x: usize, f: usize) -> Vector {
        let a = self.calculus.algebra();
        let d = self.module.dim();
        let ex = unit_vector(d, x);
        let e = unit_vector(a.dim(), f);
        let lhs = self.apply(&self.module.right(f).col(x));
        let rhs = add_vectors(
            &self.forms.right_class(1, &self.apply(&ex), &e),
            &self.forms.pure_class(&ex, 1, &self.calculus.universal_model().d(0, &e)),
        );
        sub_vectors(&lhs, &rhs)
    }

    /// `∇(x·f) = (∇x)·f + x ⊗ df` on all basis pairs.
    pub fn check_right_leibniz(&self) -> Verdict {
        let a = self.calculus.algebra();
        for x in 0..self.module.dim() {
            for i in 0..a.dim() {
                let v = Verdict::zero(self.right_leibniz_residual(x, i), || {
                    format!("(a, f) = ({}, {})", self.module.name(x), a.name(i))
                });
                if !v.is_pass() {
                    return v;
                }
            }
        }
        Verdict::Pass
    }

    /// `(∇y)·ω + y ⊗ dω` for `y ∈ M` and `ω ∈ Ω_u^s`, as an ambient vector.
    fn nabla_pair(&self, y: &[Rational], s: usize, omega: &[Rational]) -> Vector {
        let fm = &self.forms;
        let uni = fm.universal();
        let ny = fm.lift(1, &self.apply(y));
        add_vectors(&fm.mul_ambient(1, &ny, s, omega), &fm.pure(y, s + 1, &uni.d(s, omega)))
    }

    /// Well-definedness of the extension on the relations and on balancing
    /// pairs, and `∇(ξ·ω) = (∇ξ)·ω + (−1)^r ξ·dω` on basis pairs.
    pub fn check_extension(&self) -> Verdict {
        let fm = &self.forms;
        let uni = fm.universal();
        let a = uni.algebra();
        let top = self.truncation();
        let d = self.module.dim();
        for r in 0..top {
            for rel in fm.relations(r).basis() {
                let img = self.extend_ambient(r, rel);
                if !fm.relations(r + 1).contains(&img) {
                    return Verdict::Fail(Witness::with_residual(
                        format!("extension moves a degree-{r} relation out of the relations"),
                        fm.project(r + 1, img),
                    ));
                }
            }
        }
        for s in 0..top {
            for x in 0..d {
                let ex = unit_vector(d, x);
                for f in 0..a.dim() {
                    let xf = self.module.right(f).col(x);
                    for w in 0..uni.dim(s) {
                        let omega = unit_vector(uni.dim(s), w);
                        let f_omega = uni.left_basis(s, f, &omega);
                        let lhs = fm.project(s + 1, self.nabla_pair(&xf, s, &omega));
                        let rhs = fm.project(s + 1, self.nabla_pair(&ex, s, &f_omega));
                        let v = Verdict::zero(sub_vectors(&lhs, &rhs), || {
                            format!("balancing ({}, {}, {})", self.module.name(x), a.name(f), uni.describe_basis(s, w))
                        });
                        if !v.is_pass() {
                            return v;
                        }
                    }
                }
            }
        }
        for r in 0..top {
            for t in 0..top - r {
                for k in 0..fm.dim(r) {
                    let xi = fm.class_basis_lift(r, k);
                    for w in 0..uni.dim(t) {
                        let omega = unit_vector(uni.dim(t), w);
                        let lhs = fm.project(r + t + 1, self.extend_ambient(r + t, &fm.mul_ambient(r, &xi, t, &omega)));
                        let first = fm.mul_ambient(r + 1, &self.extend_ambient(r, &xi), t, &omega);
                        let second = fm.mul_ambient(r, &xi, t + 1, &uni.d(t, &omega));
                        let rhs = if r % 2 == 0 { add_vectors(&first, &second) } else { sub_vectors(&first, &second) };
                        let v = Verdict::zero(sub_vectors(&lhs, &fm.project(r + t + 1, rhs)), || {
                            format!("graded Leibniz (degree-{r} class {k}, {})", uni.describe_basis(t, w))
                        });
                        if !v.is_pass() {
                            return v;
                        }
                    }
                }
            }
        }
        Verdict::Pass
    }

    /// Curvature linearity report on the classes of `fm`.
    pub fn curvature_report(&self, fm: &FormModule) -> Result<CurvatureReport> {
        let top = self.truncation();
        if top < 2 {
            return Err(Error::Invalid("curvature needs truncation degree at least 2".into()));
        }
        let uni = fm.universal();
        let a = uni.algebra();
        let mut matrices = Vec::new();
        for r in 0..=top - 2 {
            let cols = (0..fm.dim(r))
                .map(|k| self.curvature_on(fm, r, &unit_vector(fm.dim(r), k)))
                .collect::<Result<Vec<_>>>()?;
            matrices.push(Matrix::from_cols(fm.dim(r + 2), &cols));
        }
        let mut right_omega = Verdict::Pass;
        'right: for r in 0..=top - 2 {
            for s in 0..=top - 2 - r {
                for k in 0..fm.dim(r) {
                    let xi = unit_vector(fm.dim(r), k);
                    let fxi = matrices[r].col(k);
                    for w in 0..uni.dim(s) {
                        let omega = unit_vector(uni.dim(s), w);
                        let lhs = matrices[r + s].apply(&fm.mul_class(r, &xi, s, &omega));
                        let rhs = fm.mul_class(r + 2, &fxi, s, &omega);
                        let v = Verdict::zero(sub_vectors(&lhs, &rhs), || {
                            format!("(degree-{r} class {k}, {})", uni.describe_basis(s, w))
                        });
                        if !v.is_pass() {
                            right_omega = v;
                            break 'right;
                        }
                    }
                }
            }
        }
        let mut left_a = Verdict::Pass;
        if fm.has_left() {
            'left: for r in 0..=top - 2 {
                for f in 0..a.dim() {
                    let e = unit_vector(a.dim(), f);
                    for k in 0..fm.dim(r) {
                        let xi = unit_vector(fm.dim(r), k);
                        let lhs = matrices[r].apply(&fm.left_class(r, &e, &xi)?);
                        let rhs = fm.left_class(r + 2, &e, &matrices[r].col(k))?;
                        let v = Verdict::zero(sub_vectors(&lhs, &rhs), || {
                            if r == 0 {
                                format!("(f, a) = ({}, {})", a.name(f), self.module.name(fm.quotient(0).lift_index(k)))
                            } else {
                                format!("(f, degree-{r} class {k}) = ({}, {k})", a.name(f))
                            }
                        });
                        if !v.is_pass() {
                            left_a = v;
                            break 'left;
                        }
                    }
                }
            }
        } else {
            left_a = Verdict::Fail(Witness::new("module has no left action"));
        }
        let flat = matrices[0].is_zero();
        Ok(CurvatureReport { matrices, flat, right_omega_linear: right_omega, left_a_linear: left_a })
    }
}

/// `∇²` per degree with its linearity verdicts.
#[derive(Clone, Debug)]
pub struct CurvatureReport {
    /// `matrices[r]`: `∇²` from degree `r` to `r + 2`.
    pub matrices: Vec<Matrix>,
    /// `∇² = 0` on `M`.
    pub flat: bool,
    pub right_omega_linear: Verdict,
    pub left_a_linear: Verdict,
}

fn right_generators(m: &Module) -> Vec<usize> {
    let d = m.dim();
    let mut span = Subspace::zero(d);
    let mut gens = Vec::new();
    for b in 0..d {
        let e = unit_vector(d, b);
        if span.contains(&e) {
            continue;
        }
        gens.push(b);
        let mut work = vec![e.clone()];
        span.insert(e);
        while let Some(v) = work.pop() {
            for mat in m.rights() {
                let w = mat.apply(&v);
                if span.insert(w.clone()) {
                    work.push(w);
                }
            }
        }
    }
    gens
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Algebra;
    use crate::calculus::Generator;
    use crate::rational::q;
    use crate::universal::Universal;

    fn a2_universal() -> Arc<GradedCalculus> {
        Arc::new(GradedCalculus::universal(&Algebra::a2(), 3).unwrap())
    }

    #[test]
    fn exterior_derivative_is_a_flat_connection() {
        let c = Connection::exterior("d", a2_universal()).unwrap();
        assert!(c.check_right_leibniz().is_pass());
        assert!(c.check_extension().is_pass());
        let rep = c.curvature_report(c.forms()).unwrap();
        assert!(rep.flat);
        assert!(rep.matrices.iter().all(Matrix::is_zero));
        assert!(rep.right_omega_linear.is_pass() && rep.left_a_linear.is_pass());
    }

    #[test]
    fn zero_map_is_not_a_connection() {
        let calc = a2_universal();
        let a = calc.algebra().clone();
        let c = Connection::new("zero", calc, Module::regular(&a), Matrix::zeros(2, 2)).unwrap();
        assert!(!c.check_right_leibniz().is_pass());
        assert!(!is_zero_vector(&c.right_leibniz_residual(0, 1)));
    }

    #[test]
    fn extension_matches_d_in_flat_case() {
        let calc = a2_universal();
        let c = Connection::exterior("d", Arc::clone(&calc)).unwrap();
        for r in 0..3 {
            for k in 0..2 {
                let e = unit_vector(2, k);
                assert_eq!(c.extend(r, &e).unwrap(), calc.d(r, &e));
            }
        }
        // degree 0: ∇ itself
        assert_eq!(c.extend(0, &unit_vector(2, 0)).unwrap(), c.apply(&unit_vector(2, 0)));
    }

    #[test]
    fn tensor_form_roundtrip() {
        let calc = a2_universal();
        // ∇e1 = d e1 = e2⊗e1 − e1⊗e2, ∇e2 = −∇e1
        let de1 = vec![q(0, 1), q(-1, 1), q(1, 1), q(0, 1)];
        let de2: Vec<_> = de1.iter().map(|x| -x).collect();
        let c = Connection::from_tensor("d", Arc::clone(&calc), Module::regular(calc.algebra()), &[de1, de2]).unwrap();
        let d = Connection::exterior("d", calc).unwrap();
        assert_eq!(c.matrix(), d.matrix());
        assert_eq!(d.to_tensor()[0], vec![q(0, 1), q(-1, 1), q(1, 1), q(0, 1)]);
        let bad = Connection::from_tensor(
            "bad",
            a2_universal(),
            Module::regular(&Algebra::a2()),
            &[vec![q(1, 1), q(0, 1), q(0, 1), q(0, 1)], vec![q(0, 1); 4]],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn quotient_calculus_connection() {
        let a = Algebra::a2();
        let uni = Universal::new(&a, 3).unwrap();
        let g = Generator { degree: 1, coords: uni.from_tensor(1, &[q(0, 1), q(1, 1), q(0, 1), q(0, 1)]).unwrap() };
        let calc = Arc::new(GradedCalculus::quotient(&uni, &[g]).unwrap());
        let c = Connection::exterior("d", calc).unwrap();
        assert!(c.check_right_leibniz().is_pass());
        assert!(c.check_extension().is_pass());
    }
}
