//! Tensor products over `A` as quotients of the plain tensor product.

use crate::algebra::Module;
use crate::error::{Error, Result};
use crate::linalg::{sub_vectors, unit_vector, zero_vector, Matrix, Quotient, Subspace, Vector};
use crate::rational::Rational;

/// `X ⊗_A Y`: the plain tensor product (index `x·dim Y + y`) modulo the
/// balancing relations, with the residual actions.
#[derive(Clone, Debug)]
pub struct BalancedTensor {
    left_dim: usize,
    right_dim: usize,
    quotient: Quotient,
    module: Module,
}

impl BalancedTensor {
    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    pub fn plain_dim(&self) -> usize {
        self.left_dim * self.right_dim
    }

    pub fn quotient(&self) -> &Quotient {
        &self.quotient
    }

    /// The class space with its inherited actions (left from `X`, right from `Y`).
    pub fn module(&self) -> &Module {
        &self.module
    }

    pub fn plain_index(&self, x: usize, y: usize) -> usize {
        x * self.right_dim + y
    }

    /// Class of `x ⊗ y`.
    pub fn pure(&self, x: &[Rational], y: &[Rational]) -> Vector {
        self.quotient.project(outer(x, y))
    }

    pub fn basis_pure(&self, x: usize, y: usize) -> Vector {
        self.quotient.project(unit_vector(self.plain_dim(), self.plain_index(x, y)))
    }

    pub fn project(&self, plain: Vector) -> Vector {
        self.quotient.project(plain)
    }

    pub fn lift(&self, class: &[Rational]) -> Vector {
        self.quotient.lift(class)
    }

    pub fn projection_matrix(&self) -> Matrix {
        self.quotient.projection_matrix()
    }
}

pub fn outer(x: &[Rational], y: &[Rational]) -> Vector {
    let mut out = zero_vector(x.len() * y.len());
    for (i, a) in x.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in y.iter().enumerate() {
            if !b.is_zero() {
                out[i * y.len() + j] = a * b;
            }
        }
    }
    out
}

/// Balanced tensor product of a right module `X` with a module `Y` that has a left action.
pub fn tensor_over_a(x: &Module, y: &Module) -> Result<BalancedTensor> {
    if x.algebra_dim() != y.algebra_dim() {
        return Err(Error::AlgebraMismatch);
    }
    let yl = y.require_left()?;
    let (dx, dy) = (x.dim(), y.dim());
    let mut relations = Subspace::zero(dx * dy);
    for k in 0..x.algebra_dim() {
        for i in 0..dx {
            let xf = x.right(k).col(i);
            for j in 0..dy {
                let fy = yl[k].col(j);
                relations.insert(sub_vectors(&outer(&xf, &unit_vector(dy, j)), &outer(&unit_vector(dx, i), &fy)));
            }
        }
    }
    let quotient = Quotient::new(relations);
    let induce = |plain_op: &dyn Fn(usize, usize) -> Vector| -> Matrix {
        let cols: Vec<Vector> = quotient
            .complement()
            .iter()
            .map(|&p| quotient.project(plain_op(p / dy.max(1), p % dy.max(1))))
            .collect();
        Matrix::from_cols(quotient.dim(), &cols)
    };
    let n = x.algebra_dim();
    let left = x.lefts().map(|xl| {
        (0..n)
            .map(|k| induce(&|i, j| outer(&xl[k].col(i), &unit_vector(dy, j))))
            .collect::<Vec<_>>()
    });
    let right: Vec<Matrix> = (0..n)
        .map(|k| induce(&|i, j| outer(&unit_vector(dx, i), &y.right(k).col(j))))
        .collect();
    let names: Vec<String> = quotient
        .complement()
        .iter()
        .map(|&p| format!("{}⊗{}", x.name(p / dy), y.name(p % dy)))
        .collect();
    let module = match left {
        Some(l) => Module::bimodule(names, l, right)?,
        None => Module::right_module(names, right)?,
    };
    Ok(BalancedTensor { left_dim: dx, right_dim: dy, quotient, module })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{check_bimodule, Algebra};

    #[test]
    fn unit_balancing() {
        let a = Algebra::a2();
        let reg = Module::regular(&a);
        let t = tensor_over_a(&reg, &reg).unwrap();
        assert_eq!(t.dim(), 2);
        assert!(check_bimodule(&a, t.module()).is_pass());
    }

    #[test]
    fn zero_factor() {
        let a = Algebra::a2();
        let t = tensor_over_a(&Module::regular(&a), &Module::zero(&a, true)).unwrap();
        assert_eq!(t.dim(), 0);
    }

    #[test]
    fn balancing_relations_vanish() {
        let a = Algebra::m2();
        let reg = Module::regular(&a);
        let t = tensor_over_a(&reg, &reg).unwrap();
        assert_eq!(t.dim(), 4);
        for x in 0..4 {
            for f in 0..4 {
                for y in 0..4 {
                    let lhs = t.pure(&reg.right(f).col(x), &unit_vector(4, y));
                    let rhs = t.pure(&unit_vector(4, x), &reg.left(f).unwrap().col(y));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}
