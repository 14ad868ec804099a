//! Finite-dimensional algebras and their modules, given by structure constants
//! and action matrices.

use crate::error::{Error, Result};
use crate::linalg::{axpy, is_zero_vector, kernel, sub_vectors, unit_vector, zero_vector, Matrix, SparseMatrix, Vector};
use crate::rational::Rational;
use crate::verdict::{Verdict, Witness};

/// Associative unital algebra with basis `e_0..e_{n-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    names: Vec<String>,
    structure: Vec<Vec<Vector>>,
    unit: Vector,
}

impl Algebra {
    /// Validates shapes only; run [`check_algebra`] for the axioms.
    pub fn new(names: Vec<String>, structure: Vec<Vec<Vector>>, unit: Vector) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::Invalid("algebra must have positive dimension".into()));
        }
        let shape = |context: String, found: usize| Error::DimensionMismatch { context, expected: n, found };
        if structure.len() != n {
            return Err(shape("structure rows".into(), structure.len()));
        }
        for (i, row) in structure.iter().enumerate() {
            if row.len() != n {
                return Err(shape(format!("structure[{i}]"), row.len()));
            }
            for (j, v) in row.iter().enumerate() {
                if v.len() != n {
                    return Err(shape(format!("structure[{i}][{j}]"), v.len()));
                }
            }
        }
        if unit.len() != n {
            return Err(shape("unit".into(), unit.len()));
        }
        Ok(Algebra { names, structure, unit })
    }

    /// Functions on a two-point set.
    pub fn a2() -> Self {
        Self::diagonal(2)
    }

    /// Functions on an `n`-point set: `e_i e_j = δ_ij e_i`.
    pub fn diagonal(n: usize) -> Self {
        let structure = (0..n)
            .map(|i| (0..n).map(|j| if i == j { unit_vector(n, i) } else { zero_vector(n) }).collect())
            .collect();
        let names = (1..=n).map(|i| format!("e{i}")).collect();
        Algebra::new(names, structure, vec![Rational::one(); n]).expect("well-formed")
    }

    /// Full 2x2 matrix algebra with matrix units `e11, e12, e21, e22`.
    pub fn m2() -> Self {
        let idx = |r: usize, c: usize| 2 * r + c;
        let mut structure = vec![vec![zero_vector(4); 4]; 4];
        for (i, j) in (0..2).flat_map(|i| (0..2).map(move |j| (i, j))) {
            for (k, l) in (0..2).flat_map(|k| (0..2).map(move |l| (k, l))) {
                if j == k {
                    structure[idx(i, j)][idx(k, l)] = unit_vector(4, idx(i, l));
                }
            }
        }
        let names = ["e11", "e12", "e21", "e22"].map(String::from).to_vec();
        let mut unit = zero_vector(4);
        unit[idx(0, 0)] = Rational::one();
        unit[idx(1, 1)] = Rational::one();
        Algebra::new(names, structure, unit).expect("well-formed")
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn unit(&self) -> &[Rational] {
        &self.unit
    }

    pub fn structure(&self) -> &[Vec<Vector>] {
        &self.structure
    }

    /// `e_i e_j`.
    pub fn basis_product(&self, i: usize, j: usize) -> &[Rational] {
        &self.structure[i][j]
    }

    pub fn mul(&self, a: &[Rational], b: &[Rational]) -> Vector {
        let mut out = zero_vector(self.dim());
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    axpy(&mut out, &(x * y), &self.structure[i][j]);
                }
            }
        }
        out
    }

    /// Matrix of `x ↦ e_i x`.
    pub fn left_regular(&self, i: usize) -> Matrix {
        Matrix::from_cols(self.dim(), &self.structure[i])
    }

    /// Matrix of `x ↦ x e_i`.
    pub fn right_regular(&self, i: usize) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim()).map(|j| self.structure[j][i].clone()).collect();
        Matrix::from_cols(self.dim(), &cols)
    }

    /// Multiplication map `A ⊗ A → A`, with `e_i ⊗ e_j` at index `i n + j`.
    pub fn multiplication_map(&self) -> Matrix {
        let n = self.dim();
        let cols: Vec<Vector> = (0..n * n).map(|k| self.structure[k / n][k % n].clone()).collect();
        Matrix::from_cols(n, &cols)
    }

    /// Describes a vector in this basis, e.g. `e1 - 2*e2`.
    pub fn describe(&self, v: &[Rational]) -> String {
        describe_vector(v, |i| self.names[i].clone())
    }
}

pub fn describe_vector(v: &[Rational], name: impl Fn(usize) -> String) -> String {
    let mut out = String::new();
    for (i, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let coef = if c.is_one() {
            String::new()
        } else if (-c).is_one() {
            "-".to_string()
        } else {
            format!("{c}*")
        };
        if !out.is_empty() {
            out.push_str(" + ");
        }
        out.push_str(&coef);
        out.push_str(&name(i));
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

/// Associativity on all basis triples, then the unit axioms.
pub fn check_algebra(a: &Algebra) -> Verdict {
    let n = a.dim();
    for i in 0..n {
        for j in 0..n {
            let ij = a.basis_product(i, j);
            for k in 0..n {
                let lhs = a.mul(ij, &unit_vector(n, k));
                let rhs = a.mul(&unit_vector(n, i), a.basis_product(j, k));
                if lhs != rhs {
                    return Verdict::Fail(Witness::with_residual(
                        format!("associativity ({}, {}, {})", a.name(i), a.name(j), a.name(k)),
                        sub_vectors(&lhs, &rhs),
                    ));
                }
            }
        }
    }
    for i in 0..n {
        let e = unit_vector(n, i);
        for (side, prod) in [("left", a.mul(a.unit(), &e)), ("right", a.mul(&e, a.unit()))] {
            if prod != e {
                return Verdict::Fail(Witness::with_residual(
                    format!("{side} unit on {}", a.name(i)),
                    sub_vectors(&prod, &e),
                ));
            }
        }
    }
    Verdict::Pass
}

/// A module given by action matrices, one per algebra basis element.
///
/// `right[i]` is the matrix of `x ↦ x·e_i`; `left[i]` (when present) that of
/// `x ↦ e_i·x`. A module without a left action is a right module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Module {
    names: Vec<String>,
    left: Option<Vec<Matrix>>,
    right: Vec<Matrix>,
}

impl Module {
    pub fn bimodule(names: Vec<String>, left: Vec<Matrix>, right: Vec<Matrix>) -> Result<Self> {
        let m = Module { names, left: Some(left), right };
        m.validate_shapes()?;
        Ok(m)
    }

    pub fn right_module(names: Vec<String>, right: Vec<Matrix>) -> Result<Self> {
        let m = Module { names, left: None, right };
        m.validate_shapes()?;
        Ok(m)
    }

    fn validate_shapes(&self) -> Result<()> {
        let d = self.dim();
        let all = self.right.iter().chain(self.left.iter().flatten());
        for (k, mat) in all.enumerate() {
            if mat.rows() != d || mat.cols() != d {
                return Err(Error::DimensionMismatch {
                    context: format!("action matrix {k}"),
                    expected: d,
                    found: if mat.rows() != d { mat.rows() } else { mat.cols() },
                });
            }
        }
        if let Some(l) = &self.left {
            if l.len() != self.right.len() {
                return Err(Error::AlgebraMismatch);
            }
        }
        Ok(())
    }

    /// `A` acting on itself from both sides.
    pub fn regular(a: &Algebra) -> Self {
        let n = a.dim();
        Module {
            names: a.names().to_vec(),
            left: Some((0..n).map(|i| a.left_regular(i)).collect()),
            right: (0..n).map(|i| a.right_regular(i)).collect(),
        }
    }

    /// `A` as a right module over itself.
    pub fn regular_right(a: &Algebra) -> Self {
        let mut m = Self::regular(a);
        m.left = None;
        m
    }

    /// `A^k` with the diagonal actions; basis `(copy, algebra basis)` in that order.
    pub fn free(a: &Algebra, k: usize) -> Self {
        let n = a.dim();
        let block = |mats: Vec<Matrix>| -> Vec<Matrix> {
            mats.into_iter()
                .map(|m| {
                    let mut big = Matrix::zeros(n * k, n * k);
                    for c in 0..k {
                        for i in 0..n {
                            for j in 0..n {
                                big[(c * n + i, c * n + j)] = m[(i, j)].clone();
                            }
                        }
                    }
                    big
                })
                .collect()
        };
        let names = (1..=k).flat_map(|c| a.names().iter().map(move |s| format!("{s}[{c}]"))).collect();
        Module {
            names,
            left: Some(block((0..n).map(|i| a.left_regular(i)).collect())),
            right: block((0..n).map(|i| a.right_regular(i)).collect()),
        }
    }

    pub fn zero(a: &Algebra, with_left: bool) -> Self {
        let n = a.dim();
        Module {
            names: Vec::new(),
            left: with_left.then(|| vec![Matrix::zeros(0, 0); n]),
            right: vec![Matrix::zeros(0, 0); n],
        }
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn algebra_dim(&self) -> usize {
        self.right.len()
    }

    pub fn is_bimodule(&self) -> bool {
        self.left.is_some()
    }

    pub fn right(&self, i: usize) -> &Matrix {
        &self.right[i]
    }

    pub fn rights(&self) -> &[Matrix] {
        &self.right
    }

    pub fn left(&self, i: usize) -> Option<&Matrix> {
        self.left.as_ref().map(|l| &l[i])
    }

    pub fn lefts(&self) -> Option<&[Matrix]> {
        self.left.as_deref()
    }

    pub fn require_left(&self) -> Result<&[Matrix]> {
        self.left.as_deref().ok_or_else(|| Error::Invalid("module has no left action".into()))
    }

    /// Drops the left action.
    pub fn as_right(&self) -> Module {
        Module { names: self.names.clone(), left: None, right: self.right.clone() }
    }

    /// `x·f` for algebra element `f`.
    pub fn act_right(&self, x: &[Rational], f: &[Rational]) -> Vector {
        act(&self.right, x, f)
    }

    /// `f·x`; panics without a left action.
    pub fn act_left(&self, f: &[Rational], x: &[Rational]) -> Vector {
        act(self.left.as_ref().expect("left action"), x, f)
    }

    /// Action matrix of `x ↦ x·f`.
    pub fn right_matrix(&self, f: &[Rational]) -> Matrix {
        combine(&self.right, f, self.dim())
    }

    pub fn left_matrix(&self, f: &[Rational]) -> Option<Matrix> {
        self.left.as_ref().map(|l| combine(l, f, self.dim()))
    }

    pub fn sparse_rights(&self) -> Vec<SparseMatrix> {
        self.right.iter().map(SparseMatrix::from_dense).collect()
    }

    pub fn sparse_lefts(&self) -> Option<Vec<SparseMatrix>> {
        self.left.as_ref().map(|l| l.iter().map(SparseMatrix::from_dense).collect())
    }

    pub fn describe(&self, v: &[Rational]) -> String {
        describe_vector(v, |i| self.names[i].clone())
    }

    /// Subquotient with actions restricted to an invariant subspace, in that subspace's basis.
    pub fn restrict(&self, sub: &crate::linalg::Subspace) -> Result<Module> {
        let restrict_all = |mats: &[Matrix]| -> Result<Vec<Matrix>> {
            mats.iter()
                .map(|m| {
                    let cols = sub
                        .basis()
                        .iter()
                        .map(|b| sub.coords(&m.apply(b)).ok_or(Error::NotContained))
                        .collect::<Result<Vec<_>>>()?;
                    Ok(Matrix::from_cols(sub.dim(), &cols))
                })
                .collect()
        };
        let names = (0..sub.dim()).map(|i| format!("b{}", i + 1)).collect();
        Ok(Module {
            names,
            left: self.left.as_deref().map(restrict_all).transpose()?,
            right: restrict_all(&self.right)?,
        })
    }
}

fn act(mats: &[Matrix], x: &[Rational], f: &[Rational]) -> Vector {
    let mut out = zero_vector(x.len());
    for (i, c) in f.iter().enumerate() {
        if !c.is_zero() {
            axpy(&mut out, c, &mats[i].apply(x));
        }
    }
    out
}

fn combine(mats: &[Matrix], f: &[Rational], d: usize) -> Matrix {
    let mut out = Matrix::zeros(d, d);
    for (i, c) in f.iter().enumerate() {
        if !c.is_zero() {
            out = out.add(&mats[i].scale(c));
        }
    }
    out
}

fn check_action(a: &Algebra, m: &Module, mats: &[Matrix], side: &str) -> Verdict {
    let n = a.dim();
    if mats.len() != n {
        return Verdict::Fail(Witness::new(format!(
            "{side} action has {} matrices for an algebra of dimension {n}",
            mats.len()
        )));
    }
    let unit = combine(mats, a.unit(), m.dim());
    if unit != Matrix::identity(m.dim()) {
        let j = (0..m.dim()).find(|&j| unit.col(j) != unit_vector(m.dim(), j)).unwrap_or(0);
        return Verdict::Fail(Witness::with_residual(
            format!("{side} unit on {}", m.name(j)),
            sub_vectors(&unit.col(j), &unit_vector(m.dim(), j)),
        ));
    }
    for i in 0..n {
        for j in 0..n {
            let prod = combine(mats, a.basis_product(i, j), m.dim());
            // left: e_i (e_j x); right: (x e_i) e_j
            let composed = if side == "left" { mats[i].mul(&mats[j]) } else { mats[j].mul(&mats[i]) };
            if prod != composed {
                return Verdict::Fail(Witness::with_residual(
                    format!("{side} associativity ({}, {})", a.name(i), a.name(j)),
                    prod.sub(&composed).as_slice().to_vec(),
                ));
            }
        }
    }
    Verdict::Pass
}

/// Unitality and associativity of the right action.
pub fn check_right_module(a: &Algebra, m: &Module) -> Verdict {
    check_action(a, m, m.rights(), "right")
}

/// Both actions plus `(f·x)·g = f·(x·g)`.
pub fn check_bimodule(a: &Algebra, m: &Module) -> Verdict {
    let Some(left) = m.lefts() else {
        return Verdict::Fail(Witness::new("module has no left action"));
    };
    let v = check_action(a, m, left, "left");
    if !v.is_pass() {
        return v;
    }
    let v = check_right_module(a, m);
    if !v.is_pass() {
        return v;
    }
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            let lr = left[i].mul(m.right(j));
            let rl = m.right(j).mul(&left[i]);
            if lr != rl {
                return Verdict::Fail(Witness::with_residual(
                    format!("commutation ({}, {})", a.name(i), a.name(j)),
                    lr.sub(&rl).as_slice().to_vec(),
                ));
            }
        }
    }
    Verdict::Pass
}

/// Left multiplication operators `f̂(x) = f·x`.
#[derive(Clone, Debug)]
pub struct Kappa0 {
    pub operators: Vec<Matrix>,
    pub rank: usize,
    pub injective: bool,
    pub right_linear: Verdict,
    pub multiplicative: Verdict,
}

impl Kappa0 {
    /// `κ₀` as a map `A → End(M)` with operators flattened row-major.
    pub fn matrix(&self) -> Matrix {
        let d = self.operators.first().map_or(0, |m| m.rows() * m.cols());
        let cols: Vec<Vector> = self.operators.iter().map(|m| m.as_slice().to_vec()).collect();
        Matrix::from_cols(d, &cols)
    }
}

pub fn kappa0(a: &Algebra, m: &Module) -> Result<Kappa0> {
    let left = m.require_left()?;
    let operators = left.to_vec();
    let rank = Matrix::from_cols(
        m.dim() * m.dim(),
        &operators.iter().map(|o| o.as_slice().to_vec()).collect::<Vec<_>>(),
    )
    .rank();
    let mut right_linear = Verdict::Pass;
    'outer: for (i, op) in operators.iter().enumerate() {
        for j in 0..a.dim() {
            let diff = op.mul(m.right(j)).sub(&m.right(j).mul(op));
            if !diff.is_zero() {
                right_linear = Verdict::Fail(Witness::with_residual(
                    format!("{} against right action of {}", a.name(i), a.name(j)),
                    diff.as_slice().to_vec(),
                ));
                break 'outer;
            }
        }
    }
    let mut multiplicative = Verdict::Pass;
    'outer2: for i in 0..a.dim() {
        for j in 0..a.dim() {
            let lhs = combine(&operators, a.basis_product(i, j), m.dim());
            let rhs = operators[i].mul(&operators[j]);
            if lhs != rhs {
                multiplicative = Verdict::Fail(Witness::with_residual(
                    format!("({}, {})", a.name(i), a.name(j)),
                    lhs.sub(&rhs).as_slice().to_vec(),
                ));
                break 'outer2;
            }
        }
    }
    Ok(Kappa0 { operators, injective: rank == a.dim(), rank, right_linear, multiplicative })
}

/// Right-module maps `X → Y`, stored as flattened `dim Y × dim X` matrices.
#[derive(Clone, Debug)]
pub struct RightHomSpace {
    pub source_dim: usize,
    pub target_dim: usize,
    pub space: crate::linalg::Subspace,
}

impl RightHomSpace {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn basis_maps(&self) -> Vec<Matrix> {
        self.space
            .basis()
            .iter()
            .map(|v| Matrix::from_flat(self.target_dim, self.source_dim, v.clone()))
            .collect()
    }

    pub fn contains(&self, phi: &Matrix) -> bool {
        phi.rows() == self.target_dim && phi.cols() == self.source_dim && self.space.contains(phi.as_slice())
    }
}

/// Solves `φ(x·f) = φ(x)·f` over all basis elements.
pub fn right_hom_space(x: &Module, y: &Module) -> Result<RightHomSpace> {
    if x.algebra_dim() != y.algebra_dim() {
        return Err(Error::AlgebraMismatch);
    }
    let (dx, dy) = (x.dim(), y.dim());
    let unknowns = dx * dy;
    let mut rows = Vec::new();
    for k in 0..x.algebra_dim() {
        let (rx, ry) = (x.right(k), y.right(k));
        // (φ R^X_k − R^Y_k φ)[i][j] = 0
        for i in 0..dy {
            for j in 0..dx {
                let mut row = zero_vector(unknowns);
                for l in 0..dx {
                    row[i * dx + l] += &rx[(l, j)];
                }
                for l in 0..dy {
                    row[l * dx + j] -= &ry[(i, l)];
                }
                if !is_zero_vector(&row) {
                    rows.push(row);
                }
            }
        }
    }
    let system = Matrix::try_from_rows(rows, Some(unknowns))?;
    Ok(RightHomSpace { source_dim: dx, target_dim: dy, space: kernel(&system) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn fixture_algebras_pass() {
        assert!(check_algebra(&Algebra::a2()).is_pass());
        assert!(check_algebra(&Algebra::m2()).is_pass());
    }

    #[test]
    fn bad_unit_is_caught() {
        let a = Algebra::new(vec!["e1".into()], vec![vec![vec![q(2, 1)]]], vec![q(1, 1)]).unwrap();
        match check_algebra(&a) {
            Verdict::Fail(w) => assert!(w.inputs.contains("unit on e1"), "{w}"),
            Verdict::Pass => panic!("should fail"),
        }
    }

    #[test]
    fn m2_matrix_units() {
        let a = Algebra::m2();
        // e12 e21 = e11, e21 e12 = e22, e12 e12 = 0
        assert_eq!(a.basis_product(1, 2), &unit_vector(4, 0)[..]);
        assert_eq!(a.basis_product(2, 1), &unit_vector(4, 3)[..]);
        assert!(is_zero_vector(a.basis_product(1, 1)));
    }

    #[test]
    fn bimodule_checks() {
        let a = Algebra::a2();
        assert!(check_bimodule(&a, &Module::regular(&a)).is_pass());
        let m = Module::regular(&a);
        let broken = Module::bimodule(m.names().to_vec(), vec![Matrix::zeros(2, 2); 2], m.rights().to_vec()).unwrap();
        let v = check_bimodule(&a, &broken);
        assert!(v.witness().unwrap().inputs.contains("left unit"));
        assert!(check_bimodule(&Algebra::m2(), &Module::free(&Algebra::m2(), 2)).is_pass());
    }

    #[test]
    fn kappa0_examples() {
        let a = Algebra::a2();
        let k = kappa0(&a, &Module::regular(&a)).unwrap();
        assert_eq!(k.operators[0], Matrix::from_i64_rows(&[&[1, 0], &[0, 0]]));
        assert!(k.right_linear.is_pass() && k.multiplicative.is_pass());
        let unit_op = combine(&k.operators, a.unit(), 2);
        assert_eq!(unit_op, Matrix::identity(2));

        let m2 = Algebra::m2();
        let k = kappa0(&m2, &Module::regular(&m2)).unwrap();
        assert_eq!(k.rank, 4);
        assert!(k.injective);
    }

    #[test]
    fn hom_space_examples() {
        let a = Algebra::a2();
        let reg = Module::regular(&a);
        let end = right_hom_space(&reg, &reg).unwrap();
        assert_eq!(end.dim(), 2);
        assert!(end.contains(&Matrix::identity(2)));
        for op in kappa0(&a, &reg).unwrap().operators {
            assert!(end.contains(&op));
        }
        assert!(!end.contains(&Matrix::from_i64_rows(&[&[0, 1], &[0, 0]])));
    }
}
