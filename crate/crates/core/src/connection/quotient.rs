//! The graded right submodule `J ⊆ M ⊗ Ω` and the quotient `Ω(M) = (M ⊗ Ω)/J`.

use crate::error::{Error, Result};
use crate::forms::FormModule;
use crate::linalg::{add_vectors, sub_vectors, unit_vector, Subspace};
use crate::verdict::{Verdict, Witness};

use super::omega_hat::OmegaHat;
use super::operators::OpContext;
use super::CurvatureReport;

/// Comparison of `J²` with the span of `∇²(f·a) − f·∇²(a)`.
#[derive(Clone, Debug)]
pub struct CommutatorSpan {
    pub span: Subspace,
    pub contained: Verdict,
    pub equal: bool,
}

#[derive(Clone, Debug)]
pub struct JQuotient {
    /// `J^r` in class coordinates of `M ⊗ Ω^r`.
    pub j: Vec<Subspace>,
    /// `Ω(M)`: same ambient spaces as `M ⊗ Ω`, with `J` added to the relations.
    pub omega_m: FormModule,
    pub low_degrees_zero: Verdict,
    pub nabla_closed: Verdict,
    pub omega_hat_closed: Verdict,
    /// `p∘Φ = Φ̂∘p` and `p∘∇ = ∇∘p` on class bases.
    pub coherence: Verdict,
    pub right_leibniz: Verdict,
    pub curvature: Option<CurvatureReport>,
    pub commutators: Option<CommutatorSpan>,
}

impl JQuotient {
    pub fn dims(&self) -> Vec<usize> {
        self.j.iter().map(Subspace::dim).collect()
    }

    pub fn omega_m_dims(&self) -> Vec<usize> {
        self.omega_m.dims()
    }

    pub fn is_trivial(&self) -> bool {
        self.j.iter().all(Subspace::is_zero)
    }
}

/// Generates `J` from `(∇̂²Φ)(x_b)·ω`, checks its closure properties and
/// builds `Ω(M)`; fails with [`Error::ClosureViolation`] if `∇J ⊄ J`.
pub fn j_ideal(ctx: &OpContext<'_>, hat: &OmegaHat) -> Result<JQuotient> {
    let conn = ctx.conn;
    let fm = ctx.fm;
    let uni = fm.universal();
    let top = ctx.truncation();
    let d = ctx.module_dim();

    let mut j: Vec<Subspace> = (0..=top).map(|r| Subspace::zero(fm.dim(r))).collect();
    for rp in 0..=top.saturating_sub(2) {
        if rp + 2 > top {
            break;
        }
        for phi in &hat.degrees[rp].ops {
            let sq = ctx.nabla_hat_pow(phi, 2)?;
            for b in 0..d {
                let lifted = fm.lift(rp + 2, &sq.matrix.col(b));
                for s in 0..=top - rp - 2 {
                    for w in 0..uni.dim(s) {
                        let v = fm.project(rp + 2 + s, fm.mul_ambient(rp + 2, &lifted, s, &unit_vector(uni.dim(s), w)));
                        j[rp + 2 + s].insert(v);
                    }
                }
            }
        }
    }

    let low_degrees_zero = if j.iter().take(2).all(Subspace::is_zero) {
        Verdict::Pass
    } else {
        let r = if j[0].is_zero() { 1 } else { 0 };
        Verdict::Fail(Witness::with_residual(format!("J^{r} ≠ 0"), j[r].basis()[0].clone()))
    };

    let mut nabla_closed = Verdict::Pass;
    'nabla: for r in 0..top {
        for v in j[r].basis() {
            let img = ctx.nabla(r, v)?;
            if !j[r + 1].contains(&img) {
                nabla_closed = Verdict::Fail(Witness::with_residual(format!("∇ of a degree-{r} element of J"), img));
                break 'nabla;
            }
        }
    }
    if let Verdict::Fail(w) = &nabla_closed {
        return Err(Error::ClosureViolation { check: "nabla_preserves_j".into(), witness: w.clone() });
    }

    let mut omega_hat_closed = Verdict::Pass;
    'phi: for (rp, span) in hat.degrees.iter().enumerate() {
        for (k, phi) in span.ops.iter().enumerate() {
            for r in 2..=top.saturating_sub(rp) {
                for v in j[r].basis() {
                    let img = ctx.apply_ext(phi, r, v)?;
                    if !j[r + rp].contains(&img) {
                        omega_hat_closed = Verdict::Fail(Witness::with_residual(
                            format!("degree-{rp} element {k} applied to a degree-{r} element of J"),
                            img,
                        ));
                        break 'phi;
                    }
                }
            }
        }
    }

    let extra: Vec<Subspace> = (0..=top).map(|r| fm.lift_subspace(r, &j[r])).collect();
    let omega_m = fm.with_relations(&extra);
    let qctx = OpContext::on(conn, &omega_m);

    let mut coherence = Verdict::Pass;
    'coh: for r in 0..=top {
        for k in 0..fm.dim(r) {
            let xi = unit_vector(fm.dim(r), k);
            let pxi = omega_m.project(r, fm.lift(r, &xi));
            if r < top {
                let lhs = omega_m.project(r + 1, fm.lift(r + 1, &ctx.nabla(r, &xi)?));
                let rhs = qctx.nabla(r, &pxi)?;
                let v = Verdict::zero(sub_vectors(&lhs, &rhs), || format!("p∘∇ on degree-{r} class {k}"));
                if !v.is_pass() {
                    coherence = v;
                    break 'coh;
                }
            }
            for phi in hat.ring_generators().filter(|p| p.degree + r <= top) {
                let lhs = omega_m.project(phi.degree + r, fm.lift(phi.degree + r, &ctx.apply_ext(phi, r, &xi)?));
                let rhs = qctx.apply_ext(&qctx.transport(fm, phi), r, &pxi)?;
                let v = Verdict::zero(sub_vectors(&lhs, &rhs), || {
                    format!("p∘Φ on degree-{r} class {k}, Φ of degree {}", phi.degree)
                });
                if !v.is_pass() {
                    coherence = v;
                    break 'coh;
                }
            }
        }
    }

    let a = uni.algebra();
    let module = conn.module();
    let mut right_leibniz = Verdict::Pass;
    'rl: for x in 0..d {
        let ex = unit_vector(d, x);
        let nx = qctx.nabla(0, &omega_m.project(0, ex.clone()))?;
        for i in 0..a.dim() {
            let e = unit_vector(a.dim(), i);
            let lhs = qctx.nabla(0, &omega_m.project(0, module.right(i).col(x)))?;
            let rhs = add_vectors(&omega_m.right_class(1, &nx, &e), &omega_m.pure_class(&ex, 1, &uni.d(0, &e)));
            let v = Verdict::zero(sub_vectors(&lhs, &rhs), || format!("(a, f) = ({}, {})", module.name(x), a.name(i)));
            if !v.is_pass() {
                right_leibniz = v;
                break 'rl;
            }
        }
    }

    let (curvature, commutators) = if top >= 2 && fm.has_left() {
        let report = conn.curvature_report(&omega_m)?;
        let mut span = Subspace::zero(fm.dim(2));
        for f in 0..a.dim() {
            let e = unit_vector(a.dim(), f);
            for x in 0..d {
                let ex = fm.project(0, unit_vector(d, x));
                let fx = fm.left_class(0, &e, &ex)?;
                let lhs = conn.curvature_on(fm, 0, &fx)?;
                let rhs = fm.left_class(2, &e, &conn.curvature_on(fm, 0, &ex)?)?;
                span.insert(sub_vectors(&lhs, &rhs));
            }
        }
        let contained = match span.first_outside(&j[2]) {
            None => Verdict::Pass,
            Some(v) => Verdict::Fail(Witness::with_residual("commutator outside J²", v)),
        };
        let equal = span.dim() == j[2].dim() && contained.is_pass();
        (Some(report), Some(CommutatorSpan { span, contained, equal }))
    } else {
        (None, None)
    };

    Ok(JQuotient {
        j,
        omega_m,
        low_degrees_zero,
        nabla_closed,
        omega_hat_closed,
        coherence,
        right_leibniz,
        curvature,
        commutators,
    })
}
