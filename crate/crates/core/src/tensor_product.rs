//! Connections on `N ⊗_A M` built from a connection `∇′` on `N` and `∇` on `M`.

use std::sync::Arc;

use crate::algebra::Module;
use crate::calculus::GradedCalculus;
use crate::connection::{Connection, InducedCalculus, InducedFirstOrder, SigmaOutcome};
use crate::error::{Error, Result};
use crate::forms::FormModule;
use crate::linalg::{factor_through, kernel, sub_vectors, unit_vector, zero_vector, Factorization, Matrix, Subspace, Vector};
use crate::rational::Rational;
use crate::tensor::{tensor_over_a, BalancedTensor};
use crate::verdict::{Verdict, Witness};

/// `N₀ = {b : b ⊗ a = 0 ∀a}` and `M₀ = {a : b ⊗ a = 0 ∀b}`.
#[derive(Clone, Debug)]
pub struct Degeneracy {
    pub n0: Subspace,
    pub m0: Subspace,
    pub n0_submodule: Verdict,
    pub m0_submodule: Verdict,
}

fn stable_under(sub: &Subspace, mats: &[Matrix], label: &str) -> Verdict {
    for (i, mat) in mats.iter().enumerate() {
        for v in sub.basis() {
            let w = mat.apply(v);
            if !sub.contains(&w) {
                return Verdict::Fail(Witness::with_residual(format!("{label} under basis element {}", i + 1), w));
            }
        }
    }
    Verdict::Pass
}

pub fn degeneracy_submodules(n: &Module, m: &Module) -> Result<Degeneracy> {
    let bt = tensor_over_a(n, m)?;
    let (dn, dm) = (n.dim(), m.dim());
    let n_rows: Vec<Vector> = (0..dn)
        .map(|b| (0..dm).flat_map(|a| bt.basis_pure(b, a)).collect())
        .collect();
    let m_rows: Vec<Vector> = (0..dm)
        .map(|a| (0..dn).flat_map(|b| bt.basis_pure(b, a)).collect())
        .collect();
    let n0 = kernel(&Matrix::from_cols(dm * bt.dim(), &n_rows));
    let m0 = kernel(&Matrix::from_cols(dn * bt.dim(), &m_rows));
    let mut n0_submodule = stable_under(&n0, n.rights(), "N₀ right action");
    if let Some(l) = n.lefts() {
        n0_submodule = n0_submodule.and(|| stable_under(&n0, l, "N₀ left action"));
    }
    let mut m0_submodule = stable_under(&m0, m.rights(), "M₀ right action");
    if let Some(l) = m.lefts() {
        m0_submodule = m0_submodule.and(|| stable_under(&m0, l, "M₀ left action"));
    }
    Ok(Degeneracy { n0, m0, n0_submodule, m0_submodule })
}

/// `∇(sub) ⊆ sub ⊗ Ω¹`, with `nabla` given in class coordinates of `fm`.
pub fn preserves_submodule(nabla: &Matrix, fm: &FormModule, sub: &Subspace, label: &str) -> Verdict {
    let target = fm.image_of_submodule(1, sub);
    for v in sub.basis() {
        let img = nabla.apply(v);
        if !target.contains(&img) {
            return Verdict::Fail(Witness::with_residual(format!("{label} leaves the submodule"), img));
        }
    }
    Verdict::Pass
}

/// `ν̂^r: N ⊗ Ω^r → N ⊗ Ω_∇^r` for `r ≤ D`.
#[derive(Clone, Debug)]
pub struct NuHat {
    pub maps: Vec<Matrix>,
    pub target: FormModule,
}

#[derive(Clone, Debug)]
pub enum NuOutcome {
    Built(NuHat),
    /// `κ̂` does not exist: an element of `N ⊗ I^r` outside `N ⊗ I_∇^r`.
    Unavailable { degree: usize, witness: Vector },
}

pub fn nu_hat(n_forms: &FormModule, n: &Module, induced: &GradedCalculus) -> Result<NuOutcome> {
    let target = FormModule::new(n_forms.universal(), n, induced.ideals())?;
    let mut maps = Vec::new();
    for r in 0..=n_forms.truncation() {
        match factor_through(&n_forms.quotient(r).projection_matrix(), &target.quotient(r).projection_matrix())? {
            Factorization::Factors(h) => maps.push(h),
            Factorization::Obstructed { witness, .. } => return Ok(NuOutcome::Unavailable { degree: r, witness }),
        }
    }
    Ok(NuOutcome::Built(NuHat { maps, target }))
}

/// `∇′_M` on `N ⊗ Ω_∇` with `∇′_M∘ν̂ = ν̂∘∇′`.
#[derive(Clone, Debug)]
pub struct Associated {
    /// `maps[r]`: degree `r` to `r + 1`.
    pub maps: Vec<Matrix>,
    pub connection: Connection,
    pub square: Verdict,
    pub right_leibniz: Verdict,
}

#[derive(Clone, Debug)]
pub enum AssociatedOutcome {
    Exists(Box<Associated>),
    /// `ν̂∘∇′` does not vanish on `ker ν̂^r`.
    Absent { degree: usize, witness: Vector, image: Vector },
    Unavailable(String),
}

pub fn associated_connection(n_conn: &Connection, nu: &NuHat, induced: &Arc<GradedCalculus>) -> Result<AssociatedOutcome> {
    let fm = n_conn.forms();
    let top = n_conn.truncation();
    let mut maps = Vec::with_capacity(top);
    for r in 0..top {
        let cols = (0..fm.dim(r))
            .map(|k| Ok(nu.maps[r + 1].apply(&n_conn.extend(r, &unit_vector(fm.dim(r), k))?)))
            .collect::<Result<Vec<_>>>()?;
        let g = Matrix::from_cols(nu.target.dim(r + 1), &cols);
        match factor_through(&nu.maps[r], &g)? {
            Factorization::Factors(h) => maps.push(h),
            Factorization::Obstructed { witness, image } => {
                return Ok(AssociatedOutcome::Absent { degree: r, witness, image })
            }
        }
    }
    let mut square = Verdict::Pass;
    'sq: for r in 0..top {
        for k in 0..fm.dim(r) {
            let e = unit_vector(fm.dim(r), k);
            let lhs = nu.maps[r + 1].apply(&n_conn.extend(r, &e)?);
            let rhs = maps[r].apply(&nu.maps[r].apply(&e));
            let v = Verdict::zero(sub_vectors(&lhs, &rhs), || format!("degree-{r} class {k}"));
            if !v.is_pass() {
                square = v;
                break 'sq;
            }
        }
    }
    let connection = Connection::new(
        format!("{}_M", n_conn.name()),
        Arc::clone(induced),
        n_conn.module().clone(),
        maps[0].clone(),
    )?;
    let right_leibniz = connection.check_right_leibniz();
    Ok(AssociatedOutcome::Exists(Box::new(Associated { maps, connection, square, right_leibniz })))
}

/// Which construction of `∇⊗` to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Original,
    Induced,
    Both,
}

/// One construction of `∇⊗` on `N ⊗_A M`.
#[derive(Clone, Debug)]
pub struct TensorConnection {
    pub route: &'static str,
    /// In class coordinates of `(N ⊗_A M) ⊗_A Ω¹`; absent on a balancing violation.
    pub matrix: Option<Matrix>,
    pub balancing: Verdict,
    pub right_leibniz: Verdict,
}

#[derive(Clone, Debug)]
pub struct TensorAnalysis {
    pub product: BalancedTensor,
    pub degeneracy: Degeneracy,
    pub compat_m: Verdict,
    pub compat_n: Verdict,
    pub compat_n_induced: Option<Verdict>,
    pub nu: NuOutcome,
    pub associated: AssociatedOutcome,
    pub original: Option<TensorConnection>,
    pub sigma_route: Option<TensorConnection>,
    pub induced_route: Option<TensorConnection>,
    /// Entrywise agreement with the `ν̂` route.
    pub sigma_agrees: Option<Verdict>,
    pub induced_agrees: Option<Verdict>,
}

struct Pairing<'a> {
    bt: &'a BalancedTensor,
    fx: &'a FormModule,
    m_conn: &'a Connection,
    d_nabla: &'a [DegreeOp],
    m: usize,
    bar: Vec<usize>,
}

type DegreeOp = crate::connection::DegreeRHom;

type FirstTerm<'a> = dyn Fn(usize, usize, &mut [Rational]) -> Result<()> + 'a;

impl Pairing<'_> {
    /// `ψ(n_j ⊗ ξ)` for ambient `ξ ∈ M ⊗ Ā`, as an ambient vector of `X ⊗ Ā`.
    fn psi(&self, j: usize, xi: &[Rational], out: &mut [Rational], c: &Rational) {
        let m = self.m;
        for (idx, y) in xi.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            let (k, t) = (idx / m, idx % m);
            for (p, z) in self.bt.basis_pure(j, k).iter().enumerate() {
                if !z.is_zero() {
                    out[p * m + t] += c * y * z;
                }
            }
        }
    }

    /// `(n ⊗ Φ)(a_k)` for an ambient `N ⊗ Ā` vector read as `Σ n_j ⊗ d b_t ↦ Σ n_j ⊗ (∇̂ b̂_t)(a_k)`.
    fn pair(&self, ambient: &[Rational], k: usize, out: &mut [Rational]) {
        let m = self.m;
        let mf = self.m_conn.forms();
        for (idx, c) in ambient.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (j, t) = (idx / m, idx % m);
            let val = mf.lift(1, &self.d_nabla[self.bar[t]].matrix.col(k));
            self.psi(j, &val, out, c);
        }
    }

    /// `b_j ⊗ ∇a_k`.
    fn second(&self, j: usize, k: usize, out: &mut [Rational]) {
        let mf = self.m_conn.forms();
        let na = mf.lift(1, &self.m_conn.apply(&unit_vector(self.m_conn.module().dim(), k)));
        self.psi(j, &na, out, &Rational::one());
    }

    fn finish(&self, route: &'static str, plain: Vec<Vector>, calc: &Arc<GradedCalculus>) -> Result<TensorConnection> {
        let g = Matrix::from_cols(self.fx.dim(1), &plain);
        match factor_through(&self.bt.projection_matrix(), &g)? {
            Factorization::Factors(h) => {
                let c = Connection::new(format!("tensor[{route}]"), Arc::clone(calc), self.bt.module().clone(), h.clone())?;
                Ok(TensorConnection { route, matrix: Some(h), balancing: Verdict::Pass, right_leibniz: c.check_right_leibniz() })
            }
            Factorization::Obstructed { witness, image } => Ok(TensorConnection {
                route,
                matrix: None,
                balancing: Verdict::Fail(Witness::with_residual(format!("balancing relation {witness:?}"), image)),
                right_leibniz: Verdict::Fail(Witness::new("not well defined on N ⊗_A M")),
            }),
        }
    }
}

fn agree(a: &TensorConnection, b: &TensorConnection) -> Verdict {
    match (&a.matrix, &b.matrix) {
        (Some(x), Some(y)) => Verdict::zero(x.sub(y).as_slice().to_vec(), || format!("{} vs {}", a.route, b.route)),
        _ => Verdict::Fail(Witness::new("a route is not well defined")),
    }
}

/// Runs the tensor-product constructions for `∇′` on `N` and `∇` on `M` over a common calculus.
pub fn analyze_tensor(
    n_conn: &Connection,
    m_conn: &Connection,
    first: &InducedFirstOrder,
    sigma: &SigmaOutcome,
    induced: &InducedCalculus,
    route: Route,
) -> Result<TensorAnalysis> {
    let calc = m_conn.calculus();
    if n_conn.calculus().ideals() != calc.ideals() || n_conn.truncation() != m_conn.truncation() {
        return Err(Error::Invalid("tensor connections must share a calculus".into()));
    }
    let uni = calc.universal_model();
    let n = n_conn.module();
    let mm = m_conn.module();
    let bt = tensor_over_a(n, mm)?;
    let fx = FormModule::new(uni, bt.module(), calc.ideals())?;
    let degeneracy = degeneracy_submodules(n, mm)?;
    let compat_m = preserves_submodule(m_conn.matrix(), m_conn.forms(), &degeneracy.m0, "∇ on M₀");
    let compat_n = preserves_submodule(n_conn.matrix(), n_conn.forms(), &degeneracy.n0, "∇′ on N₀");

    let nu = nu_hat(n_conn.forms(), n, &induced.calculus)?;
    let associated = match &nu {
        NuOutcome::Built(nh) => associated_connection(n_conn, nh, &induced.calculus)?,
        NuOutcome::Unavailable { .. } => AssociatedOutcome::Unavailable("κ̂ does not exist".into()),
    };
    let compat_n_induced = match (&associated, &nu) {
        (AssociatedOutcome::Exists(asc), NuOutcome::Built(nh)) => Some(preserves_submodule(
            asc.connection.matrix(),
            &nh.target,
            &degeneracy.n0,
            "∇′_M on N₀",
        )),
        _ => None,
    };

    let pairing = Pairing {
        bt: &bt,
        fx: &fx,
        m_conn,
        d_nabla: &first.d_nabla,
        m: uni.m(),
        bar: (0..uni.m()).map(|s| uni.bar_basis(s)).collect(),
    };
    let (dn, dm) = (n.dim(), mm.dim());
    let nf = n_conn.forms();
    let build = |first_term: &FirstTerm| -> Result<Vec<Vector>> {
        let mut plain = Vec::with_capacity(dn * dm);
        for j in 0..dn {
            for k in 0..dm {
                let mut out = zero_vector(fx.ambient_dim(1));
                first_term(j, k, &mut out)?;
                pairing.second(j, k, &mut out);
                plain.push(fx.project(1, out));
            }
        }
        Ok(plain)
    };

    let want_original = matches!(route, Route::Original | Route::Both);
    let want_induced = matches!(route, Route::Induced | Route::Both);

    let original = match (&nu, want_original) {
        (NuOutcome::Built(nh), true) => {
            let plain = build(&|j, k, out| {
                let nb = nh.maps[1].apply(&n_conn.apply(&unit_vector(dn, j)));
                pairing.pair(&nh.target.lift(1, &nb), k, out);
                Ok(())
            })?;
            Some(pairing.finish("original", plain, calc)?)
        }
        _ => None,
    };

    let sigma_route = match (sigma, want_original) {
        (SigmaOutcome::Exists(s), true) => {
            let mf = m_conn.forms();
            let plain = build(&|j, k, out| {
                let amb = nf.lift(1, &n_conn.apply(&unit_vector(dn, j)));
                let m = uni.m();
                for (idx, c) in amb.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let (jj, t) = (idx / m, idx % m);
                    let db = calc.d0(&unit_vector(uni.n(), uni.bar_basis(t)));
                    let val = s.matrix.apply(&s.domain.pure(&db, &unit_vector(dm, k)));
                    pairing.psi(jj, &mf.lift(1, &val), out, c);
                }
                Ok(())
            })?;
            Some(pairing.finish("sigma", plain, calc)?)
        }
        _ => None,
    };

    let induced_route = match (&associated, want_induced) {
        (AssociatedOutcome::Exists(asc), true) => {
            let NuOutcome::Built(nh) = &nu else { unreachable!("associated connection needs ν̂") };
            let plain = build(&|j, k, out| {
                let nb = asc.connection.apply(&unit_vector(dn, j));
                pairing.pair(&nh.target.lift(1, &nb), k, out);
                Ok(())
            })?;
            Some(pairing.finish("induced", plain, calc)?)
        }
        _ => None,
    };

    let sigma_agrees = match (&original, &sigma_route) {
        (Some(o), Some(s)) => Some(agree(o, s)),
        _ => None,
    };
    let induced_agrees = match (&original, &induced_route) {
        (Some(o), Some(i)) => Some(agree(o, i)),
        _ => None,
    };

    Ok(TensorAnalysis {
        product: bt,
        degeneracy,
        compat_m,
        compat_n,
        compat_n_induced,
        nu,
        associated,
        original,
        sigma_route,
        induced_route,
        sigma_agrees,
        induced_agrees,
    })
}
