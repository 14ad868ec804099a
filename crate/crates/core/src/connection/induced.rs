//! The first-order calculus `Ω¹_∇` induced by a connection, `κ₁`, and `σ`.

use crate::error::{Error, Result};
use crate::linalg::{add_vectors, factor_through, sub_vectors, unit_vector, Factorization, Matrix, Vector};
use crate::tensor::{tensor_over_a, BalancedTensor};
use crate::verdict::{Verdict, Witness};

use super::omega_hat::OpSpan;
use super::operators::{DegreeRHom, OpContext};

#[derive(Clone, Debug)]
pub struct InducedFirstOrder {
    /// `κ₀(e_i)`.
    pub kappa0: Vec<DegreeRHom>,
    /// `d_∇ e_i = ∇̂ ê_i`.
    pub d_nabla: Vec<DegreeRHom>,
    /// `κ₁` on the normalized basis of `Ω¹_u`: `e_i d b_s ↦ ê_i ∘ ∇̂ b̂_s`.
    pub kappa1: Vec<DegreeRHom>,
    /// Span of `f̂ ∘ ∇̂ĝ ∘ ĥ`.
    pub omega1: OpSpan,
    pub kappa1_rank: usize,
    pub d_unit_zero: Verdict,
    pub derivation_law: Verdict,
    pub left_leibniz: Verdict,
    pub diagram: Verdict,
    pub bimodule_linear: Verdict,
    pub right_linear: Verdict,
}

impl InducedFirstOrder {
    pub fn dim(&self) -> usize {
        self.omega1.dim()
    }

    pub fn kappa1_injective(&self) -> bool {
        self.kappa1_rank == self.kappa1.len()
    }
}

/// `Ω¹_∇`, `d_∇` and `κ₁` with their identity checks.
pub fn induced_first_order(ctx: &OpContext<'_>) -> Result<InducedFirstOrder> {
    let conn = ctx.conn;
    let fm = ctx.fm;
    let calc = conn.calculus();
    let uni = calc.universal_model();
    let a = uni.algebra();
    let n = a.dim();
    let m = uni.m();
    let module = conn.module();
    module.require_left()?;
    if ctx.truncation() < 1 {
        return Err(Error::DegreeOverflow { degree: 1, truncation: 0 });
    }

    let kappa0 = (0..n).map(|i| ctx.kappa0_basis(i)).collect::<Result<Vec<_>>>()?;
    let d_nabla = kappa0.iter().map(|f| ctx.nabla_hat(f)).collect::<Result<Vec<_>>>()?;
    let mut kappa1 = Vec::with_capacity(n * m);
    for f in &kappa0 {
        for s in 0..m {
            kappa1.push(ctx.compose(f, &d_nabla[uni.bar_basis(s)])?);
        }
    }
    let kappa1_rank = ctx.key_matrix(1, &kappa1).rank();

    let mut omega1 = OpSpan::new(ctx, 1);
    for f in &kappa0 {
        for g in &d_nabla {
            let fg = ctx.compose(f, g)?;
            for h in &kappa0 {
                omega1.insert(ctx, ctx.compose(&fg, h)?);
            }
        }
    }

    let unit_op = ctx.kappa0(a.unit())?;
    let d_unit = ctx.nabla_hat(&unit_op)?;
    let d_unit_zero = Verdict::zero(d_unit.matrix.as_slice().to_vec(), || "d_∇(1)".into());

    let mut derivation_law = Verdict::Pass;
    'der: for f in 0..n {
        for g in 0..n {
            let lhs = ctx.nabla_hat(&ctx.kappa0(a.basis_product(f, g))?)?;
            let rhs = ctx.compose(&d_nabla[f], &kappa0[g])?.add(&ctx.compose(&kappa0[f], &d_nabla[g])?);
            let v = Verdict::zero(lhs.sub(&rhs).matrix.as_slice().to_vec(), || {
                format!("(f, g) = ({}, {})", a.name(f), a.name(g))
            });
            if !v.is_pass() {
                derivation_law = v;
                break 'der;
            }
        }
    }

    let mut left_leibniz = Verdict::Pass;
    let d = module.dim();
    'hnaf: for f in 0..n {
        let e = unit_vector(n, f);
        for x in 0..d {
            let ex = unit_vector(d, x);
            let fx = module.act_left(&e, &ex);
            let lhs = conn.apply(&fx);
            let rhs = add_vectors(&d_nabla[f].matrix.col(x), &fm.left_class(1, &e, &conn.apply(&ex))?);
            let v = Verdict::zero(sub_vectors(&lhs, &rhs), || format!("(f, a) = ({}, {})", a.name(f), module.name(x)));
            if !v.is_pass() {
                left_leibniz = v;
                break 'hnaf;
            }
        }
    }

    let mut diagram = Verdict::Pass;
    for (i, dn) in d_nabla.iter().enumerate() {
        let du = uni.d(0, &unit_vector(n, i));
        let lhs = ctx.combine(1, &kappa1, &du);
        let v = Verdict::zero(lhs.sub(dn).matrix.as_slice().to_vec(), || format!("f = {}", a.name(i)));
        if !v.is_pass() {
            diagram = v;
            break;
        }
    }

    let mut bimodule_linear = Verdict::Pass;
    let regular = calc.forms();
    'bim: for f in 0..n {
        for w in 0..uni.dim(1) {
            let alpha = unit_vector(uni.dim(1), w);
            let f_alpha = uni.left_basis(1, f, &alpha);
            for g in 0..n {
                let fag = regular.right_ambient(1, &f_alpha, &unit_vector(n, g));
                let lhs = ctx.combine(1, &kappa1, &fag);
                let rhs = ctx.compose(&ctx.compose(&kappa0[f], &kappa1[w])?, &kappa0[g])?;
                let v = Verdict::zero(lhs.sub(&rhs).matrix.as_slice().to_vec(), || {
                    format!("({}, {}, {})", a.name(f), uni.describe_basis(1, w), a.name(g))
                });
                if !v.is_pass() {
                    bimodule_linear = v;
                    break 'bim;
                }
            }
        }
    }

    let right_linear = omega1
        .ops
        .iter()
        .chain(d_nabla.iter())
        .map(|op| ctx.check_right_linear(op))
        .find(|v| !v.is_pass())
        .unwrap_or(Verdict::Pass);

    Ok(InducedFirstOrder {
        kappa0,
        d_nabla,
        kappa1,
        omega1,
        kappa1_rank,
        d_unit_zero,
        derivation_law,
        left_leibniz,
        diagram,
        bimodule_linear,
        right_linear,
    })
}

/// `σ: Ω¹ ⊗_A M → M ⊗_A Ω¹`, `σ(α ⊗ a) = κ̂₁(α)(a)`.
#[derive(Clone, Debug)]
pub struct SigmaMap {
    pub domain: BalancedTensor,
    /// Columns indexed by classes of `Ω¹ ⊗_A M`, rows by classes of `M ⊗_A Ω¹`.
    pub matrix: Matrix,
    /// `κ̂₁`: `Ω¹ → ` operator keys.
    pub kappa1_hat: Matrix,
    pub left_leibniz: Verdict,
    pub agrees_with_universal: Verdict,
}

#[derive(Clone, Debug)]
pub enum SigmaOutcome {
    Exists(Box<SigmaMap>),
    /// `witness ∈ K` (normalized coordinates of `Ω¹_u`) with `κ₁(witness) ≠ 0`.
    Absent { witness: Vector, image: Vector },
}

impl SigmaOutcome {
    pub fn exists(&self) -> bool {
        matches!(self, SigmaOutcome::Exists(_))
    }
}

/// Factors `κ₁` through `π₁: Ω¹_u → Ω¹`.
pub fn sigma_exists(ctx: &OpContext<'_>, induced: &InducedFirstOrder) -> Result<SigmaOutcome> {
    let conn = ctx.conn;
    let calc = conn.calculus();
    let uni = calc.universal_model();
    let module = conn.module();
    let fm = ctx.fm;
    let pi1 = calc.projection_matrix(1);
    let kmat = ctx.key_matrix(1, &induced.kappa1);
    let kappa1_hat = match factor_through(&pi1, &kmat)? {
        Factorization::Factors(h) => h,
        Factorization::Obstructed { witness, image } => return Ok(SigmaOutcome::Absent { witness, image }),
    };

    let omega1 = calc.omega1_module()?;
    let domain = tensor_over_a(&omega1, module)?;
    let d = module.dim();
    let k1 = calc.dim(1);
    let mut plain_cols = Vec::with_capacity(domain.plain_dim());
    let lifted_ops: Vec<DegreeRHom> =
        (0..k1).map(|k| ctx.combine(1, &induced.kappa1, &calc.lift(1, &unit_vector(k1, k)))).collect();
    for op in &lifted_ops {
        for x in 0..d {
            plain_cols.push(op.matrix.col(x));
        }
    }
    let plain = Matrix::from_cols(fm.dim(1), &plain_cols);
    let matrix = match factor_through(&domain.projection_matrix(), &plain)? {
        Factorization::Factors(h) => h,
        Factorization::Obstructed { witness, image } => {
            return Err(Error::AxiomFailure {
                check: "sigma_balancing".into(),
                witness: Witness::with_residual(format!("plain tensor {witness:?}"), image),
            })
        }
    };

    let a = uni.algebra();
    let n = a.dim();
    let mut left_leibniz = Verdict::Pass;
    'rlr: for f in 0..n {
        let e = unit_vector(n, f);
        let df = calc.d0(&e);
        for x in 0..d {
            let ex = unit_vector(d, x);
            let lhs = conn.apply(&module.act_left(&e, &ex));
            let rhs = add_vectors(&matrix.apply(&domain.pure(&df, &ex)), &fm.left_class(1, &e, &conn.apply(&ex))?);
            let v = Verdict::zero(sub_vectors(&lhs, &rhs), || format!("(f, a) = ({}, {})", a.name(f), module.name(x)));
            if !v.is_pass() {
                left_leibniz = v;
                break 'rlr;
            }
        }
    }

    let mut agrees = Verdict::Pass;
    'agree: for w in 0..uni.dim(1) {
        let omega = unit_vector(uni.dim(1), w);
        let cls = calc.project(1, omega);
        for x in 0..d {
            let ex = unit_vector(d, x);
            let lhs = matrix.apply(&domain.pure(&cls, &ex));
            let rhs = induced.kappa1[w].matrix.col(x);
            let v = Verdict::zero(sub_vectors(&lhs, &rhs), || {
                format!("({}, {})", uni.describe_basis(1, w), module.name(x))
            });
            if !v.is_pass() {
                agrees = v;
                break 'agree;
            }
        }
    }

    Ok(SigmaOutcome::Exists(Box::new(SigmaMap {
        domain,
        matrix,
        kappa1_hat,
        left_leibniz,
        agrees_with_universal: agrees,
    })))
}
