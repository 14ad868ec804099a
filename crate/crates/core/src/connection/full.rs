//! The graded calculus `Ω_∇ = Ω_u / ker κ` induced by a connection, and `σ_u`, `σ` in all degrees.

use std::sync::Arc;

use crate::calculus::{preceq, GradedCalculus, OrderMode, Preceq};
use crate::error::Result;
use crate::linalg::{factor_through, kernel, sub_vectors, unit_vector, Factorization, Matrix, Subspace, Vector};
use crate::verdict::{Verdict, Witness};

use super::omega_hat::{OmegaHat, OpSpan};
use super::operators::{DegreeRHom, OpContext, PreparedOp};
use super::quotient::JQuotient;

#[derive(Clone, Debug)]
pub struct InducedCalculus {
    /// `κ^r` on the normalized basis of `Ω_u^r`, as operators on `Ω(M)`.
    pub kappa: Vec<Vec<DegreeRHom>>,
    /// `d_∇ b_s`.
    pub d_generators: Vec<DegreeRHom>,
    /// Independent spanning sets of `Ω_∇^r`.
    pub spans: Vec<OpSpan>,
    /// `Ω_u / ker κ` (degree 0 kept as `A`).
    pub calculus: Arc<GradedCalculus>,
    pub kappa0_injective: bool,
    pub ideal_check: Verdict,
    pub d_squared: Verdict,
    pub diagram: Verdict,
    pub multiplicative: Verdict,
    pub matches_omega_hat: Verdict,
    pub derivation_law: Verdict,
}

impl InducedCalculus {
    /// `dim Ω_∇^r`, with `Ω⁰_∇ = A`.
    pub fn dims(&self) -> Vec<usize> {
        self.calculus.dims()
    }
}

fn fail_ops(lhs: &DegreeRHom, rhs: &DegreeRHom, label: impl FnOnce() -> String) -> Verdict {
    Verdict::zero(lhs.sub(rhs).matrix.as_slice().to_vec(), label)
}

/// Builds `κ` multiplicatively on `Ω(M)`, its kernel `I_∇`, and checks the calculus identities.
pub fn induced_full_calculus(ctx: &OpContext<'_>, hat: &OmegaHat, jq: &JQuotient) -> Result<InducedCalculus> {
    let conn = ctx.conn;
    let q = OpContext::on(conn, &jq.omega_m);
    let calc = conn.calculus();
    let uni = calc.universal_model();
    let a = uni.algebra();
    let n = a.dim();
    let m = uni.m();
    let top = q.truncation();

    let kappa0: Vec<DegreeRHom> = (0..n).map(|i| q.kappa0_basis(i)).collect::<Result<_>>()?;
    let d_generators: Vec<DegreeRHom> =
        (0..m).map(|s| q.nabla_hat(&kappa0[uni.bar_basis(s)])).collect::<Result<_>>()?;

    let mut tails: Vec<Vec<DegreeRHom>> = vec![vec![q.identity()]];
    for r in 1..=top {
        let mut level = Vec::with_capacity(uni.m_pow(r));
        let mr1 = uni.m_pow(r - 1);
        for s in 0..m {
            for t in 0..mr1 {
                level.push(q.compose(&d_generators[s], &tails[r - 1][t])?);
            }
        }
        tails.push(level);
    }
    let mut kappa = Vec::with_capacity(top + 1);
    for (r, level) in tails.iter().enumerate() {
        let mut ops = Vec::with_capacity(uni.dim(r));
        for f in &kappa0 {
            for t in level {
                ops.push(q.compose(f, t)?);
            }
        }
        kappa.push(ops);
    }

    let mut ideal = vec![Subspace::zero(uni.dim(0))];
    for (r, ops) in kappa.iter().enumerate().skip(1) {
        ideal.push(kernel(&q.key_matrix(r, ops)));
    }
    let kappa0_injective = q.key_matrix(0, &kappa[0]).rank() == n;
    let induced = GradedCalculus::from_ideal(uni, ideal)?;
    let ideal_check = induced.check_ideal();

    let mut spans = Vec::with_capacity(top + 1);
    for (r, ops) in kappa.iter().enumerate() {
        let mut span = OpSpan::new(&q, r);
        for op in ops {
            span.insert(&q, op.clone());
        }
        spans.push(span);
    }

    let mut d_squared = Verdict::Pass;
    'sq: for r in 0..=top.saturating_sub(2) {
        if top < 2 {
            break;
        }
        for (k, op) in spans[r].ops.iter().enumerate() {
            let sq = q.nabla_hat_pow(op, 2)?;
            if !sq.is_zero() {
                d_squared = Verdict::Fail(Witness::with_residual(
                    format!("degree-{r} element {k}"),
                    sq.matrix.as_slice().to_vec(),
                ));
                break 'sq;
            }
        }
    }

    let mut diagram = Verdict::Pass;
    'diag: for r in 0..top {
        for w in 0..uni.dim(r) {
            let dw = uni.d(r, &unit_vector(uni.dim(r), w));
            let lhs = q.combine(r + 1, &kappa[r + 1], &dw);
            let rhs = q.nabla_hat(&kappa[r][w])?;
            let v = fail_ops(&lhs, &rhs, || uni.describe_basis(r, w));
            if !v.is_pass() {
                diagram = v;
                break 'diag;
            }
        }
    }

    let regular = calc.forms();
    let mut multiplicative = Verdict::Pass;
    'mul: for r in 0..=top {
        for w in 0..uni.dim(r) {
            let omega = unit_vector(uni.dim(r), w);
            for f in 0..n {
                let e = unit_vector(n, f);
                let right = q.combine(r, &kappa[r], &regular.right_ambient(r, &omega, &e));
                let v = fail_ops(&right, &q.compose(&kappa[r][w], &kappa0[f])?, || {
                    format!("{} · {}", uni.describe_basis(r, w), a.name(f))
                });
                let left = q.combine(r, &kappa[r], &uni.left_basis(r, f, &omega));
                let v = v.and(|| {
                    fail_ops(&left, &q.compose(&kappa0[f], &kappa[r][w]).expect("degree"), || {
                        format!("{} · {}", a.name(f), uni.describe_basis(r, w))
                    })
                });
                if !v.is_pass() {
                    multiplicative = v;
                    break 'mul;
                }
            }
            if r < top {
                for s in 0..m {
                    let db = uni.d(0, &unit_vector(n, uni.bar_basis(s)));
                    let right = q.combine(r + 1, &kappa[r + 1], &regular.mul_ambient(r, &omega, 1, &db));
                    let v = fail_ops(&right, &q.compose(&kappa[r][w], &d_generators[s])?, || {
                        format!("{} · d{}", uni.describe_basis(r, w), a.name(uni.bar_basis(s)))
                    });
                    let left = q.combine(r + 1, &kappa[r + 1], &regular.mul_ambient(1, &db, r, &omega));
                    let v = v.and(|| {
                        fail_ops(&left, &q.compose(&d_generators[s], &kappa[r][w]).expect("degree"), || {
                            format!("d{} · {}", a.name(uni.bar_basis(s)), uni.describe_basis(r, w))
                        })
                    });
                    if !v.is_pass() {
                        multiplicative = v;
                        break 'mul;
                    }
                }
            }
        }
    }

    let mut matches_omega_hat = Verdict::Pass;
    for (r, span) in hat.degrees.iter().enumerate() {
        let mut image = Subspace::zero(q.key_dim(r));
        for op in &span.ops {
            image.insert(q.key(&q.transport(ctx.fm, op)));
        }
        let mine = spans[r].span();
        let outside = image.first_outside(mine).or_else(|| mine.first_outside(&image));
        if let Some(v) = outside {
            matches_omega_hat = Verdict::Fail(Witness::with_residual(format!("degree {r}"), v));
            break;
        }
    }

    let mut ring: Vec<&DegreeRHom> = kappa0.iter().collect();
    ring.extend(d_generators.iter());
    let mut derivation_law = Verdict::Pass;
    'der: for (i, phi) in ring.iter().enumerate() {
        for (j, psi) in ring.iter().enumerate() {
            if phi.degree + psi.degree + 1 > top {
                continue;
            }
            let lhs = q.nabla_hat(&q.compose(phi, psi)?)?;
            let first = q.compose(&q.nabla_hat(phi)?, psi)?;
            let second = q.compose(phi, &q.nabla_hat(psi)?)?;
            let rhs = if phi.degree % 2 == 0 { first.add(&second) } else { first.sub(&second) };
            let v = fail_ops(&lhs, &rhs, || format!("generators ({i}, {j})"));
            if !v.is_pass() {
                derivation_law = v;
                break 'der;
            }
        }
    }

    Ok(InducedCalculus {
        kappa,
        d_generators,
        spans,
        calculus: Arc::new(induced),
        kappa0_injective,
        ideal_check,
        d_squared,
        diagram,
        multiplicative,
        matches_omega_hat,
        derivation_law,
    })
}

#[derive(Clone, Debug)]
pub struct SigmaFull {
    /// `κ̂^r: Ω^r → ` operator keys, for each degree where it factors.
    pub factored: Vec<Matrix>,
    /// First obstruction: `(degree, element of I^r, its κ-image)`.
    pub obstruction: Option<(usize, Vector, Vector)>,
    pub unit_action: Verdict,
    pub multiplicative: Verdict,
    pub derivation: Verdict,
    /// `(Ω_∇, d_∇) ⪯ (Ω, d)` in both modes.
    pub preceq_first_order: Preceq,
    pub preceq_all: Preceq,
}

impl SigmaFull {
    pub fn exists(&self) -> bool {
        self.obstruction.is_none()
    }
}

/// `σ_u(ω ⊗ ξ) = κ(ω)(ξ)` on `Ω_u ⊗_A Ω(M)`, its identities, and the degree-wise factorization through `Ω`.
pub fn sigma_full(ctx: &OpContext<'_>, jq: &JQuotient, induced: &InducedCalculus) -> Result<SigmaFull> {
    let conn = ctx.conn;
    let q = OpContext::on(conn, &jq.omega_m);
    let om = &jq.omega_m;
    let calc = conn.calculus();
    let uni = calc.universal_model();
    let a = uni.algebra();
    let n = a.dim();
    let m = uni.m();
    let top = q.truncation();
    let kappa = &induced.kappa;

    let mut factored = Vec::new();
    let mut obstruction = None;
    for r in 1..=top {
        match factor_through(&calc.projection_matrix(r), &q.key_matrix(r, &kappa[r]))? {
            Factorization::Factors(h) => factored.push(h),
            Factorization::Obstructed { witness, image } => {
                obstruction = Some((r, witness, image));
                break;
            }
        }
    }

    let prepared: Vec<Vec<PreparedOp>> = kappa.iter().map(|ops| ops.iter().map(|op| q.prepare(op)).collect()).collect();
    let sigma_u = |r: usize, w: usize, s: usize, xi: &[crate::Rational]| q.apply_prepared(&prepared[r][w], s, xi);

    let mut unit_action = Verdict::Pass;
    'unit: for s in 0..=top {
        for k in 0..om.dim(s) {
            let xi = unit_vector(om.dim(s), k);
            for f in 0..n {
                let lhs = sigma_u(0, f, s, &xi)?;
                let rhs = om.left_class(s, &unit_vector(n, f), &xi)?;
                let v = Verdict::zero(sub_vectors(&lhs, &rhs), || format!("({}, degree-{s} class {k})", a.name(f)));
                if !v.is_pass() {
                    unit_action = v;
                    break 'unit;
                }
            }
        }
    }

    let regular = calc.forms();
    let mut generators: Vec<(usize, Vector, String)> =
        (0..n).map(|f| (0, unit_vector(n, f), a.name(f).to_string())).collect();
    for s in 0..m {
        let b = uni.bar_basis(s);
        generators.push((1, uni.d(0, &unit_vector(n, b)), format!("d{}", a.name(b))));
    }
    let mut multiplicative = Verdict::Pass;
    'mul: for (r1, w1, label) in &generators {
        for r2 in 0..=top - r1 {
            for w2 in 0..uni.dim(r2) {
                let omega2 = unit_vector(uni.dim(r2), w2);
                let product = regular.mul_ambient(*r1, w1, r2, &omega2);
                let k12 = q.prepare(&q.combine(r1 + r2, &kappa[r1 + r2], &product));
                let k1 = q.prepare(&q.combine(*r1, &kappa[*r1], w1));
                for s in 0..=top - r1 - r2 {
                    for k in 0..om.dim(s) {
                        let xi = unit_vector(om.dim(s), k);
                        let lhs = q.apply_prepared(&k12, s, &xi)?;
                        let rhs = q.apply_prepared(&k1, r2 + s, &sigma_u(r2, w2, s, &xi)?)?;
                        let v = Verdict::zero(sub_vectors(&lhs, &rhs), || {
                            format!("({label}, {}, degree-{s} class {k})", uni.describe_basis(r2, w2))
                        });
                        if !v.is_pass() {
                            multiplicative = v;
                            break 'mul;
                        }
                    }
                }
            }
        }
    }

    let mut derivation = Verdict::Pass;
    'der: for r in 0..top {
        for w in 0..uni.dim(r) {
            let dw = uni.d(r, &unit_vector(uni.dim(r), w));
            let kdw = q.prepare(&q.combine(r + 1, &kappa[r + 1], &dw));
            for s in 0..top - r {
                for k in 0..om.dim(s) {
                    let xi = unit_vector(om.dim(s), k);
                    let lhs = q.nabla(r + s, &sigma_u(r, w, s, &xi)?)?;
                    let first = q.apply_prepared(&kdw, s, &xi)?;
                    let second = sigma_u(r, w, s + 1, &q.nabla(s, &xi)?)?;
                    let rhs = if r % 2 == 0 {
                        crate::linalg::add_vectors(&first, &second)
                    } else {
                        sub_vectors(&first, &second)
                    };
                    let v = Verdict::zero(sub_vectors(&lhs, &rhs), || {
                        format!("({}, degree-{s} class {k})", uni.describe_basis(r, w))
                    });
                    if !v.is_pass() {
                        derivation = v;
                        break 'der;
                    }
                }
            }
        }
    }

    let preceq_first_order = preceq(&induced.calculus, calc, OrderMode::FirstOrder)?;
    let preceq_all = preceq(&induced.calculus, calc, OrderMode::AllDegrees)?;

    Ok(SigmaFull { factored, obstruction, unit_action, multiplicative, derivation, preceq_first_order, preceq_all })
}
