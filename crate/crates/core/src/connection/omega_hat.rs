//! The graded ring `Ω̂` generated by `κ₀(A)` under `∇̂` and composition.

use crate::error::Result;
use crate::linalg::{sub_vectors, unit_vector, Subspace};
use crate::verdict::{Verdict, Witness};

use super::operators::{DegreeRHom, OpContext};

/// An independent spanning set of operators of one degree, with its span.
#[derive(Clone, Debug)]
pub struct OpSpan {
    pub degree: usize,
    pub ops: Vec<DegreeRHom>,
    span: Subspace,
}

impl OpSpan {
    pub fn new(ctx: &OpContext<'_>, degree: usize) -> Self {
        OpSpan { degree, ops: Vec::new(), span: Subspace::zero(ctx.key_dim(degree)) }
    }

    pub fn insert(&mut self, ctx: &OpContext<'_>, op: DegreeRHom) -> bool {
        debug_assert_eq!(op.degree, self.degree);
        if self.span.insert(ctx.key(&op)) {
            self.ops.push(op);
            true
        } else {
            false
        }
    }

    pub fn contains(&self, ctx: &OpContext<'_>, op: &DegreeRHom) -> bool {
        self.span.contains(&ctx.key(op))
    }

    pub fn dim(&self) -> usize {
        self.ops.len()
    }

    pub fn span(&self) -> &Subspace {
        &self.span
    }
}

#[derive(Clone, Debug)]
pub struct OmegaHat {
    pub degrees: Vec<OpSpan>,
    pub kappa0: Vec<DegreeRHom>,
    /// `(k, s, ∇̂^k b̂_s)` for `1 ≤ k ≤ D`.
    pub generators: Vec<(usize, usize, DegreeRHom)>,
    /// Closure rounds run after seeding with normal-form monomials.
    pub rounds: usize,
    /// Elements the closure rounds added beyond the seed, per degree.
    pub closure_additions: Vec<usize>,
    pub right_linear: Verdict,
    pub derivation_law: Verdict,
    pub square_identity: Verdict,
}

impl OmegaHat {
    pub fn dims(&self) -> Vec<usize> {
        self.degrees.iter().map(OpSpan::dim).collect()
    }

    /// Highest degree whose span the closure rounds changed, if any.
    pub fn stabilization_degree(&self) -> Option<usize> {
        self.closure_additions.iter().rposition(|&a| a > 0)
    }

    /// Generators of the ring: `κ₀` basis and the iterates `∇̂^k b̂_s`.
    pub fn ring_generators(&self) -> impl Iterator<Item = &DegreeRHom> {
        self.kappa0.iter().chain(self.generators.iter().map(|(_, _, g)| g))
    }
}

/// Seeds each degree with `f̂₀∘∇̂^{k₁}b̂_{s₁}∘⋯` and closes under `∇̂` and
/// right composition with `κ₀(A)` until nothing new appears.
pub fn omega_hat_generate(ctx: &OpContext<'_>) -> Result<OmegaHat> {
    let top = ctx.truncation();
    let uni = ctx.conn.calculus().universal_model();
    let n = uni.n();
    let kappa0 = (0..n).map(|i| ctx.kappa0_basis(i)).collect::<Result<Vec<_>>>()?;
    let mut generators = Vec::new();
    for s in 0..uni.m() {
        let mut g = kappa0[uni.bar_basis(s)].clone();
        for k in 1..=top {
            g = ctx.nabla_hat(&g)?;
            generators.push((k, s, g.clone()));
        }
    }
    generators.sort_by_key(|(k, s, _)| (*k, *s));

    let mut words: Vec<OpSpan> = vec![OpSpan::new(ctx, 0)];
    words[0].insert(ctx, ctx.identity());
    for r in 1..=top {
        let mut w = OpSpan::new(ctx, r);
        for (k, _, g) in generators.iter().filter(|(k, _, _)| *k <= r) {
            for tail in &words[r - k].ops {
                w.insert(ctx, ctx.compose(g, tail)?);
            }
        }
        words.push(w);
    }
    let mut degrees = Vec::with_capacity(top + 1);
    for (r, w) in words.iter().enumerate() {
        let mut span = OpSpan::new(ctx, r);
        for f in &kappa0 {
            for tail in &w.ops {
                span.insert(ctx, ctx.compose(f, tail)?);
            }
        }
        degrees.push(span);
    }

    let mut closure_additions = vec![0; top + 1];
    let mut rounds = 0;
    loop {
        rounds += 1;
        let mut changed = false;
        for r in 0..=top {
            let mut idx = 0;
            while idx < degrees[r].ops.len() {
                let phi = degrees[r].ops[idx].clone();
                if r < top {
                    let next = ctx.nabla_hat(&phi)?;
                    if degrees[r + 1].insert(ctx, next) {
                        closure_additions[r + 1] += 1;
                        changed = true;
                    }
                }
                for f in &kappa0 {
                    if degrees[r].insert(ctx, ctx.compose(&phi, f)?) {
                        closure_additions[r] += 1;
                        changed = true;
                    }
                }
                idx += 1;
            }
        }
        if !changed {
            break;
        }
    }

    let right_linear = degrees
        .iter()
        .flat_map(|d| d.ops.iter())
        .map(|op| ctx.check_right_linear(op))
        .find(|v| !v.is_pass())
        .unwrap_or(Verdict::Pass);

    let mut ring: Vec<&DegreeRHom> = kappa0.iter().collect();
    ring.extend(generators.iter().map(|(_, _, g)| g));
    let mut derivation_law = Verdict::Pass;
    'outer: for (i, phi) in ring.iter().enumerate() {
        for (j, psi) in ring.iter().enumerate() {
            if phi.degree + psi.degree + 1 > top {
                continue;
            }
            let lhs = ctx.nabla_hat(&ctx.compose(phi, psi)?)?;
            let first = ctx.compose(&ctx.nabla_hat(phi)?, psi)?;
            let second = ctx.compose(phi, &ctx.nabla_hat(psi)?)?;
            let rhs = if phi.degree % 2 == 0 { first.add(&second) } else { first.sub(&second) };
            if lhs != rhs {
                derivation_law = Verdict::Fail(Witness::with_residual(
                    format!("ring generators ({i}, {j})"),
                    lhs.sub(&rhs).matrix.as_slice().to_vec(),
                ));
                break 'outer;
            }
        }
    }

    let mut square_identity = Verdict::Pass;
    let d = ctx.module_dim();
    'sq: for r in 0..=top.saturating_sub(2) {
        if top < 2 {
            break;
        }
        for (k, phi) in degrees[r].ops.iter().enumerate() {
            let lhs = ctx.nabla_hat_pow(phi, 2)?;
            for x in 0..d {
                let curv_phi = ctx.conn.curvature_on(ctx.fm, r, &phi.matrix.col(x))?;
                let curv_x = ctx.conn.curvature_on(ctx.fm, 0, &ctx.fm.project(0, unit_vector(d, x)))?;
                let rhs = sub_vectors(&curv_phi, &ctx.apply_ext(phi, 2, &curv_x)?);
                let v = Verdict::zero(sub_vectors(&lhs.matrix.col(x), &rhs), || {
                    format!("degree-{r} element {k} at {}", ctx.conn.module().name(x))
                });
                if !v.is_pass() {
                    square_identity = v;
                    break 'sq;
                }
            }
        }
    }

    Ok(OmegaHat { degrees, kappa0, generators, rounds, closure_additions, right_linear, derivation_law, square_identity })
}
