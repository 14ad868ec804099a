//! Truncated graded calculi presented as `Ω_u / I` for a graded differential ideal `I`.

use crate::algebra::{Algebra, Module};
use crate::error::{Error, Result};
use crate::forms::FormModule;
use crate::linalg::{factor_through, sub_vectors, unit_vector, Factorization, Matrix, Subspace, Vector};
use crate::rational::Rational;
use crate::universal::Universal;
use crate::verdict::{Verdict, Witness};

/// A homogeneous element of the universal calculus in normalized coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub degree: usize,
    pub coords: Vector,
}

#[derive(Clone, Debug)]
pub struct GradedCalculus {
    uni: Universal,
    ideal: Vec<Subspace>,
    forms: FormModule,
}

impl GradedCalculus {
    pub fn universal(a: &Algebra, truncation: usize) -> Result<Self> {
        let uni = Universal::new(a, truncation)?;
        let ideal = (0..=truncation).map(|r| Subspace::zero(uni.dim(r))).collect();
        Self::from_ideal(&uni, ideal)
    }

    /// Uses `ideal` as given; see [`GradedCalculus::check_ideal`].
    pub fn from_ideal(uni: &Universal, ideal: Vec<Subspace>) -> Result<Self> {
        let d = uni.truncation();
        if ideal.len() != d + 1 {
            return Err(Error::DimensionMismatch { context: "ideal degrees".into(), expected: d + 1, found: ideal.len() });
        }
        for (r, i) in ideal.iter().enumerate() {
            if i.ambient() != uni.dim(r) {
                return Err(Error::DimensionMismatch {
                    context: format!("ideal degree {r}"),
                    expected: uni.dim(r),
                    found: i.ambient(),
                });
            }
        }
        let forms = FormModule::new(uni, &Module::regular(uni.algebra()), &ideal)?;
        Ok(GradedCalculus { uni: uni.clone(), ideal, forms })
    }

    /// The smallest differential ideal containing `generators`, up to the truncation degree.
    pub fn quotient(uni: &Universal, generators: &[Generator]) -> Result<Self> {
        let ideal = saturate(uni, generators)?;
        Self::from_ideal(uni, ideal)
    }

    pub fn universal_model(&self) -> &Universal {
        &self.uni
    }

    pub fn algebra(&self) -> &Algebra {
        self.uni.algebra()
    }

    pub fn truncation(&self) -> usize {
        self.uni.truncation()
    }

    pub fn ideal(&self, r: usize) -> &Subspace {
        &self.ideal[r]
    }

    pub fn ideals(&self) -> &[Subspace] {
        &self.ideal
    }

    pub fn forms(&self) -> &FormModule {
        &self.forms
    }

    pub fn is_universal(&self) -> bool {
        self.ideal.iter().all(Subspace::is_zero)
    }

    pub fn dim(&self, r: usize) -> usize {
        self.forms.dim(r)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.forms.dims()
    }

    /// `π: Ω_u^r → Ω^r`.
    pub fn projection_matrix(&self, r: usize) -> Matrix {
        self.forms.quotient(r).projection_matrix()
    }

    pub fn project(&self, r: usize, omega: Vector) -> Vector {
        self.forms.project(r, omega)
    }

    pub fn lift(&self, r: usize, c: &[Rational]) -> Vector {
        self.forms.lift(r, c)
    }

    /// `d` on classes, degree `r → r + 1`.
    pub fn d(&self, r: usize, c: &[Rational]) -> Vector {
        self.project(r + 1, self.uni.d(r, &self.lift(r, c)))
    }

    /// `d: A → Ω¹` in class coordinates.
    pub fn d0(&self, a: &[Rational]) -> Vector {
        self.project(1, self.uni.d(0, a))
    }

    pub fn d_matrix(&self, r: usize) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim(r)).map(|k| self.d(r, &unit_vector(self.dim(r), k))).collect();
        Matrix::from_cols(self.dim(r + 1), &cols)
    }

    /// Class product `α·β` of degrees `r`, `s`.
    pub fn mul(&self, r: usize, alpha: &[Rational], s: usize, beta: &[Rational]) -> Vector {
        self.forms.mul_class(r, alpha, s, &self.lift(s, beta))
    }

    /// Degree-1 part as a bimodule.
    pub fn omega1_module(&self) -> Result<Module> {
        self.forms.as_module(1)
    }

    /// Two-sided ideal and closure under `d`, checked on bases within the truncation.
    pub fn check_ideal(&self) -> Verdict {
        let uni = &self.uni;
        let regular = &self.forms;
        let d = self.truncation();
        let n = uni.n();
        if !self.ideal[0].is_zero() {
            return Verdict::Fail(Witness::new("degree-0 part of the ideal is nonzero"));
        }
        for r in 1..=d {
            for v in self.ideal[r].basis() {
                for i in 0..n {
                    let e = unit_vector(n, i);
                    let checks = [
                        ("left", regular.left_ambient(r, &e, v).expect("regular")),
                        ("right", regular.right_basis(r, v, i)),
                    ];
                    for (side, w) in checks {
                        if !self.ideal[r].contains(&w) {
                            return Verdict::Fail(Witness::with_residual(
                                format!("{side} multiplication by {} leaves I^{r}", uni.algebra().name(i)),
                                w,
                            ));
                        }
                    }
                }
                if r < d {
                    let dv = uni.d(r, v);
                    if !self.ideal[r + 1].contains(&dv) {
                        return Verdict::Fail(Witness::with_residual(format!("d(I^{r}) not in I^{}", r + 1), dv));
                    }
                    for k in 0..uni.dim(1) {
                        let w = unit_vector(uni.dim(1), k);
                        let right = regular.mul_ambient(r, v, 1, &w);
                        let left = regular.mul_ambient(1, &w, r, v);
                        for (side, x) in [("right", right), ("left", left)] {
                            if !self.ideal[r + 1].contains(&x) {
                                return Verdict::Fail(Witness::with_residual(
                                    format!("{side} multiplication by ({}) leaves the ideal", uni.describe_basis(1, k)),
                                    x,
                                ));
                            }
                        }
                    }
                }
            }
        }
        Verdict::Pass
    }

    /// `d∘d = 0` on class bases, degrees `r ≤ D − 2`.
    pub fn check_d_squared(&self) -> Verdict {
        let d = self.truncation();
        for r in 0..d.saturating_sub(1) {
            for k in 0..self.dim(r) {
                let e = unit_vector(self.dim(r), k);
                let dd = self.d(r + 1, &self.d(r, &e));
                let v = Verdict::zero(dd, || format!("d d on degree-{r} class {k}"));
                if !v.is_pass() {
                    return v;
                }
            }
        }
        Verdict::Pass
    }

    /// `d(αβ) = (dα)β + (−1)^r α dβ` on class bases with `r + s + 1 ≤ D`.
    pub fn check_leibniz(&self) -> Verdict {
        let d = self.truncation();
        for r in 0..d {
            for s in 0..d - r {
                for i in 0..self.dim(r) {
                    let a = unit_vector(self.dim(r), i);
                    for j in 0..self.dim(s) {
                        let b = unit_vector(self.dim(s), j);
                        let lhs = self.d(r + s, &self.mul(r, &a, s, &b));
                        let mut rhs = self.mul(r + 1, &self.d(r, &a), s, &b);
                        let second = self.mul(r, &a, s + 1, &self.d(s, &b));
                        rhs = if r % 2 == 0 {
                            crate::linalg::add_vectors(&rhs, &second)
                        } else {
                            sub_vectors(&rhs, &second)
                        };
                        let v = Verdict::zero(sub_vectors(&lhs, &rhs), || {
                            format!("degree ({r}, {s}) classes ({i}, {j})")
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
}

/// Bimodule closure inside `Ω_u^r`.
fn bimodule_closure(regular: &FormModule, r: usize, seed: Subspace) -> Subspace {
    let n = regular.universal().n();
    let mut span = seed;
    let mut work: Vec<Vector> = span.basis().to_vec();
    while let Some(v) = work.pop() {
        for i in 0..n {
            let e = unit_vector(n, i);
            for w in [regular.left_ambient(r, &e, &v).expect("regular"), regular.right_basis(r, &v, i)] {
                if span.insert(w.clone()) {
                    work.push(w);
                }
            }
        }
    }
    span
}

/// `I^r` = bimodule closure of (degree-`r` generators + `d I^{r−1}`), in ascending degree.
///
/// Closure under `A` on both sides and under `d` already forces closure under
/// multiplication by `dA`, so the result is a two-sided differential ideal.
pub fn saturate(uni: &Universal, generators: &[Generator]) -> Result<Vec<Subspace>> {
    let d = uni.truncation();
    for g in generators {
        if g.degree == 0 {
            return Err(Error::Invalid("degree-0 generators would kill part of the algebra".into()));
        }
        if g.degree > d {
            return Err(Error::DegreeOverflow { degree: g.degree, truncation: d });
        }
        if g.coords.len() != uni.dim(g.degree) {
            return Err(Error::DimensionMismatch {
                context: format!("degree-{} generator", g.degree),
                expected: uni.dim(g.degree),
                found: g.coords.len(),
            });
        }
    }
    let regular = FormModule::new(uni, &Module::regular(uni.algebra()), &[])?;
    let mut ideal = vec![Subspace::zero(uni.dim(0))];
    for r in 1..=d {
        let mut seed = Subspace::zero(uni.dim(r));
        for g in generators.iter().filter(|g| g.degree == r) {
            seed.insert(g.coords.clone());
        }
        for v in ideal[r - 1].basis() {
            seed.insert(uni.d(r - 1, v));
        }
        ideal.push(bimodule_closure(&regular, r, seed));
    }
    Ok(ideal)
}

/// Per-degree maps `ρ^r` between two calculi.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CalculusMorphism {
    pub maps: Vec<Matrix>,
}

/// Which degrees `⪯` compares.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderMode {
    FirstOrder,
    AllDegrees,
}

#[derive(Clone, Debug)]
pub enum Preceq {
    /// `ρ: c₂ → c₁` with `d₁ = ρ∘d₂`.
    Holds(CalculusMorphism),
    /// An element of `I₂^r` (normalized coordinates) outside `I₁^r`.
    Fails { degree: usize, witness: Vector },
}

impl Preceq {
    pub fn holds(&self) -> bool {
        matches!(self, Preceq::Holds(_))
    }
}

/// `c₁ ⪯ c₂`: whether `c₁` is a quotient of `c₂` compatibly with `d`.
pub fn preceq(c1: &GradedCalculus, c2: &GradedCalculus, mode: OrderMode) -> Result<Preceq> {
    if c1.truncation() != c2.truncation() {
        return Err(Error::TruncationMismatch(c1.truncation(), c2.truncation()));
    }
    if c1.algebra() != c2.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let top = match mode {
        OrderMode::FirstOrder => 1,
        OrderMode::AllDegrees => c1.truncation(),
    };
    let mut maps = vec![Matrix::identity(c1.algebra().dim())];
    for r in 1..=top {
        match factor_through(&c2.projection_matrix(r), &c1.projection_matrix(r))? {
            Factorization::Factors(h) => maps.push(h),
            Factorization::Obstructed { witness, .. } => return Ok(Preceq::Fails { degree: r, witness }),
        }
    }
    Ok(Preceq::Holds(CalculusMorphism { maps }))
}

/// `ρ∘d₂ = d₁∘ρ` and `ρ(αβ) = ρ(α)ρ(β)` on class bases within the degrees covered by `rho`.
pub fn check_morphism(c1: &GradedCalculus, c2: &GradedCalculus, rho: &CalculusMorphism) -> Verdict {
    let top = rho.maps.len() - 1;
    for r in 0..top {
        for k in 0..c2.dim(r) {
            let e = unit_vector(c2.dim(r), k);
            let lhs = rho.maps[r + 1].apply(&c2.d(r, &e));
            let rhs = c1.d(r, &rho.maps[r].apply(&e));
            let v = Verdict::zero(sub_vectors(&lhs, &rhs), || format!("d on degree-{r} class {k}"));
            if !v.is_pass() {
                return v;
            }
        }
    }
    for r in 0..=top {
        for s in 0..=top - r {
            for i in 0..c2.dim(r) {
                let a = unit_vector(c2.dim(r), i);
                for j in 0..c2.dim(s) {
                    let b = unit_vector(c2.dim(s), j);
                    let lhs = rho.maps[r + s].apply(&c2.mul(r, &a, s, &b));
                    let rhs = c1.mul(r, &rho.maps[r].apply(&a), s, &rho.maps[s].apply(&b));
                    let v = Verdict::zero(sub_vectors(&lhs, &rhs), || format!("product of degree ({r}, {s}) classes ({i}, {j})"));
                    if !v.is_pass() {
                        return v;
                    }
                }
            }
        }
    }
    Verdict::Pass
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::is_zero_vector;
    use crate::rational::q;

    fn e1e2(uni: &Universal) -> Generator {
        Generator { degree: 1, coords: uni.from_tensor(1, &[q(0, 1), q(1, 1), q(0, 1), q(0, 1)]).unwrap() }
    }

    #[test]
    fn universal_checks() {
        for a in [Algebra::a2(), Algebra::m2()] {
            let c = GradedCalculus::universal(&a, 3).unwrap();
            assert!(c.check_ideal().is_pass());
            assert!(c.check_d_squared().is_pass());
            assert!(c.check_leibniz().is_pass());
        }
    }

    #[test]
    fn quotient_by_e1e2() {
        let a = Algebra::a2();
        let uni = Universal::new(&a, 3).unwrap();
        let c = GradedCalculus::quotient(&uni, &[e1e2(&uni)]).unwrap();
        assert_eq!(c.dim(1), 1);
        assert!(c.check_ideal().is_pass());
        assert!(c.check_d_squared().is_pass());
        assert!(c.check_leibniz().is_pass());
        let again = GradedCalculus::quotient(&uni, &[e1e2(&uni), e1e2(&uni)]).unwrap();
        assert_eq!(again.dims(), c.dims());
    }

    #[test]
    fn empty_and_total_generators() {
        let a = Algebra::a2();
        let uni = Universal::new(&a, 3).unwrap();
        assert_eq!(GradedCalculus::quotient(&uni, &[]).unwrap().dims(), vec![2, 2, 2, 2]);
        let all: Vec<Generator> =
            (0..2).map(|k| Generator { degree: 1, coords: unit_vector(2, k) }).collect();
        assert_eq!(GradedCalculus::quotient(&uni, &all).unwrap().dims(), vec![2, 0, 0, 0]);
        assert!(GradedCalculus::quotient(&uni, &[Generator { degree: 0, coords: unit_vector(2, 0) }]).is_err());
    }

    #[test]
    fn preceq_examples() {
        let a = Algebra::a2();
        let uni = Universal::new(&a, 3).unwrap();
        let u = GradedCalculus::universal(&a, 3).unwrap();
        let qc = GradedCalculus::quotient(&uni, &[e1e2(&uni)]).unwrap();
        match preceq(&u, &u, OrderMode::AllDegrees).unwrap() {
            Preceq::Holds(rho) => {
                assert!(rho.maps.iter().all(|m| *m == Matrix::identity(m.rows())));
            }
            Preceq::Fails { .. } => panic!("reflexivity"),
        }
        match preceq(&qc, &u, OrderMode::AllDegrees).unwrap() {
            Preceq::Holds(rho) => assert!(check_morphism(&qc, &u, &rho).is_pass()),
            Preceq::Fails { .. } => panic!("quotient is below the universal calculus"),
        }
        match preceq(&u, &qc, OrderMode::FirstOrder).unwrap() {
            Preceq::Fails { degree, witness } => {
                assert_eq!(degree, 1);
                let t = uni.expand(1, &witness);
                assert!(!is_zero_vector(&t));
                assert!(t[0].is_zero() && t[2].is_zero() && t[3].is_zero());
            }
            Preceq::Holds(_) => panic!("converse must fail"),
        }
        let zero = GradedCalculus::quotient(
            &uni,
            &(0..2).map(|k| Generator { degree: 1, coords: unit_vector(2, k) }).collect::<Vec<_>>(),
        )
        .unwrap();
        assert!(preceq(&zero, &qc, OrderMode::AllDegrees).unwrap().holds());
        assert!(matches!(
            preceq(&u, &GradedCalculus::universal(&a, 2).unwrap(), OrderMode::FirstOrder),
            Err(Error::TruncationMismatch(3, 2))
        ));
    }
}
