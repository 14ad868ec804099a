//! Command pipelines turning a validated [`Model`] into a [`Report`].

use std::cell::OnceCell;

use serde_json::{json, Value};

use crate::algebra::{check_algebra, check_bimodule, check_right_module, kappa0};
use crate::calculus::{preceq, GradedCalculus, OrderMode, Preceq};
use crate::connection::{
    induced_first_order, induced_full_calculus, j_ideal, omega_hat_generate, sigma_exists, sigma_full, Connection,
    InducedCalculus, InducedFirstOrder, JQuotient, OmegaHat, OpContext, SigmaFull, SigmaOutcome,
};
use crate::error::{Error, Result};
use crate::linalg::{vector_to_strings, Matrix};
use crate::model::Model;
use crate::report::{Kind, Record, Report, Status};
use crate::universal::Universal;
use crate::tensor_product::{analyze_tensor, AssociatedOutcome, NuOutcome, Route, TensorAnalysis};
use crate::verdict::{Verdict, Witness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    /// Axioms of the algebra, modules, calculus and connections.
    Check,
    /// The induced calculus and its identities.
    Induce,
    /// Existence of the generalized permutation.
    Sigma,
    /// Curvature, `J` and the quotient `Ω(M)`.
    Curvature,
    /// Tensor products of connections.
    Tensor,
    /// The calculus against the induced one.
    Compare,
    All,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Induce => "induce",
            Command::Sigma => "sigma",
            Command::Curvature => "curvature",
            Command::Tensor => "tensor",
            Command::Compare => "compare",
            Command::All => "all",
        }
    }
}

const SECTIONS: [Command; 6] =
    [Command::Check, Command::Induce, Command::Sigma, Command::Curvature, Command::Tensor, Command::Compare];

/// Lazily computed analyses of one connection.
struct Stages<'a> {
    conn: &'a Connection,
    ctx: OpContext<'a>,
    first: OnceCell<Result<InducedFirstOrder>>,
    sigma: OnceCell<Result<SigmaOutcome>>,
    hat: OnceCell<Result<OmegaHat>>,
    jq: OnceCell<Result<JQuotient>>,
    full: OnceCell<Result<InducedCalculus>>,
    sigma_full: OnceCell<Result<SigmaFull>>,
}

fn upstream(e: &Error) -> Error {
    match e {
        Error::Unavailable(s) => Error::Unavailable(s.clone()),
        other => Error::Unavailable(other.to_string()),
    }
}

impl<'a> Stages<'a> {
    fn new(conn: &'a Connection) -> Self {
        Stages {
            conn,
            ctx: OpContext::new(conn),
            first: OnceCell::new(),
            sigma: OnceCell::new(),
            hat: OnceCell::new(),
            jq: OnceCell::new(),
            full: OnceCell::new(),
            sigma_full: OnceCell::new(),
        }
    }

    fn require_bimodule(&self) -> Result<()> {
        if self.conn.module().is_bimodule() {
            Ok(())
        } else {
            Err(Error::Unavailable(format!("module of `{}` has no left action", self.conn.name())))
        }
    }

    fn first(&self) -> Result<&InducedFirstOrder, &Error> {
        self.first
            .get_or_init(|| {
                self.require_bimodule()?;
                induced_first_order(&self.ctx)
            })
            .as_ref()
    }

    fn sigma(&self) -> Result<&SigmaOutcome, &Error> {
        self.sigma.get_or_init(|| sigma_exists(&self.ctx, self.first().map_err(upstream)?)).as_ref()
    }

    fn hat(&self) -> Result<&OmegaHat, &Error> {
        self.hat
            .get_or_init(|| {
                self.require_bimodule()?;
                omega_hat_generate(&self.ctx)
            })
            .as_ref()
    }

    fn jq(&self) -> Result<&JQuotient, &Error> {
        self.jq.get_or_init(|| j_ideal(&self.ctx, self.hat().map_err(upstream)?)).as_ref()
    }

    fn full(&self) -> Result<&InducedCalculus, &Error> {
        self.full
            .get_or_init(|| {
                let hat = self.hat().map_err(upstream)?;
                let jq = self.jq().map_err(upstream)?;
                induced_full_calculus(&self.ctx, hat, jq)
            })
            .as_ref()
    }

    fn sigma_full(&self) -> Result<&SigmaFull, &Error> {
        self.sigma_full
            .get_or_init(|| {
                let jq = self.jq().map_err(upstream)?;
                let full = self.full().map_err(upstream)?;
                sigma_full(&self.ctx, jq, full)
            })
            .as_ref()
    }
}

fn unavailable(id: impl Into<String>, anchor: &str, kind: Kind, reason: &dyn std::fmt::Display) -> Record {
    Record::new(id, anchor, kind, Status::Unavailable).with_data(json!({ "reason": reason.to_string() }))
}

fn pass_if(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn strings(v: &[crate::Rational]) -> Vec<String> {
    vector_to_strings(v)
}

fn matrix_json(m: &Matrix) -> Value {
    json!(m.to_rows().iter().map(|r| strings(r)).collect::<Vec<_>>())
}

fn element_witness(label: String, element: &[crate::Rational], image: Vec<crate::Rational>) -> Witness {
    Witness::with_residual(format!("{label} [{}]", strings(element).join(", ")), image)
}

fn preceq_record(id: String, uni: &Universal, result: Result<Preceq>) -> Record {
    match result {
        Ok(Preceq::Holds(_)) => Record::new(id, "preceq", Kind::Observation, Status::Pass),
        Ok(Preceq::Fails { degree, witness }) => Record::new(id, "preceq", Kind::Observation, Status::Fail).with_witness(
            Witness::with_residual(format!("{} lies in one ideal only", uni.describe(degree, &witness)), witness),
        ),
        Err(e) => unavailable(id, "preceq", Kind::Observation, &e),
    }
}

/// Runs `command` on `model`, restricted to the connection `connection` when given.
pub fn run(command: Command, model: &Model, connection: Option<&str>) -> Result<Report> {
    if let Some(name) = connection {
        if model.connection(name).is_none() {
            return Err(Error::Invalid(format!("unknown connection `{name}`")));
        }
    }
    let selected = |name: &str| connection.is_none_or(|c| c == name);
    let stages: Vec<Stages> = model.connections.iter().map(Stages::new).collect();
    let sections: &[Command] = match command {
        Command::All => &SECTIONS,
        ref c => std::slice::from_ref(c),
    };
    let mut out = Vec::new();
    for section in sections {
        match section {
            Command::Check => check(model, &stages, &selected, &mut out)?,
            Command::Tensor => tensor(model, &stages, &selected, &mut out),
            c => {
                for st in stages.iter().filter(|s| selected(s.conn.name())) {
                    match c {
                        Command::Induce => induce(st, &mut out),
                        Command::Sigma => sigma(st, &mut out),
                        Command::Curvature => curvature(st, &mut out),
                        Command::Compare => compare(st, &mut out),
                        _ => unreachable!(),
                    }
                }
            }
        }
    }
    Ok(Report::new(command.name(), out))
}

fn check(model: &Model, stages: &[Stages], selected: &dyn Fn(&str) -> bool, out: &mut Vec<Record>) -> Result<()> {
    let a = &model.algebra;
    out.push(Record::verdict("model.algebra", "algebra-axioms", Kind::Identity, &check_algebra(a)));
    for (name, m) in &model.modules {
        let v = if m.is_bimodule() { check_bimodule(a, m) } else { check_right_module(a, m) };
        out.push(Record::verdict(format!("model.module.{name}"), "module-axioms", Kind::Identity, &v));
        if m.is_bimodule() {
            let k = kappa0(a, m)?;
            out.push(
                Record::new(format!("model.kappa0.{name}"), "kappa0", Kind::Observation, pass_if(k.injective))
                    .with_data(json!({ "rank": k.rank, "injective": k.injective })),
            );
            out.push(Record::verdict(format!("model.kappa0.{name}.right_linear"), "kappa0", Kind::Identity, &k.right_linear));
            out.push(Record::verdict(format!("model.kappa0.{name}.multiplicative"), "kappa0", Kind::Identity, &k.multiplicative));
        }
    }
    let calc = &model.calculus;
    let uni = calc.universal_model();
    let n = uni.n();
    let udims: Vec<usize> = (0..=calc.truncation()).map(|r| uni.dim(r)).collect();
    out.push(
        Record::new("calculus.universal_dimension", "universal-dimension", Kind::Identity, pass_if(uni.dim(1) == n * n - n))
            .with_dims(udims)
            .with_data(json!({ "expected_degree_one": n * n - n })),
    );
    out.push(
        Record::new("calculus.dims", "calculus-ideal", Kind::Observation, Status::Pass)
            .with_dims(calc.dims())
            .with_data(json!({ "universal": calc.is_universal() })),
    );
    out.push(Record::verdict("calculus.ideal", "calculus-ideal", Kind::Identity, &calc.check_ideal()));
    out.push(Record::verdict("calculus.d_squared", "calculus-d-squared", Kind::Identity, &calc.check_d_squared()));
    out.push(Record::verdict("calculus.leibniz", "calculus-leibniz", Kind::Identity, &calc.check_leibniz()));
    for st in stages.iter().filter(|s| selected(s.conn.name())) {
        let p = st.conn.name();
        out.push(Record::verdict(format!("{p}.right_leibniz"), "right-leibniz", Kind::Identity, &st.conn.check_right_leibniz()));
        out.push(Record::verdict(format!("{p}.extension"), "connection-extension", Kind::Identity, &st.conn.check_extension()));
    }
    Ok(())
}

fn verdicts(out: &mut Vec<Record>, prefix: &str, items: &[(&str, &str, &Verdict)]) {
    for (id, anchor, v) in items {
        out.push(Record::verdict(format!("{prefix}.{id}"), anchor, Kind::Identity, v));
    }
}

fn induce(st: &Stages, out: &mut Vec<Record>) {
    let p = st.conn.name();
    match st.first() {
        Ok(first) => {
            out.push(
                Record::new(format!("{p}.first_order"), "induced-first-order", Kind::Observation, Status::Pass)
                    .with_dims(vec![first.dim()])
                    .with_data(json!({ "kappa1_rank": first.kappa1_rank, "kappa1_injective": first.kappa1_injective() })),
            );
            verdicts(
                out,
                &format!("{p}.first_order"),
                &[
                    ("d_unit", "derivation-law", &first.d_unit_zero),
                    ("derivation_law", "derivation-law", &first.derivation_law),
                    ("left_leibniz", "left-leibniz-d-nabla", &first.left_leibniz),
                    ("diagram", "kappa1-diagram", &first.diagram),
                    ("bimodule_linear", "kappa1-bimodule", &first.bimodule_linear),
                    ("right_linear", "nabla-hat", &first.right_linear),
                ],
            );
        }
        Err(e) => out.push(unavailable(format!("{p}.first_order"), "induced-first-order", Kind::Observation, e)),
    }
    match st.hat() {
        Ok(hat) => {
            out.push(
                Record::new(format!("{p}.omega_hat"), "omega-hat", Kind::Observation, Status::Pass)
                    .with_dims(hat.dims())
                    .with_data(json!({
                        "rounds": hat.rounds,
                        "closure_additions": hat.closure_additions,
                        "stabilization_degree": hat.stabilization_degree(),
                    })),
            );
            verdicts(
                out,
                &format!("{p}.omega_hat"),
                &[
                    ("right_linear", "nabla-hat", &hat.right_linear),
                    ("derivation_law", "omega-hat-derivation", &hat.derivation_law),
                    ("square", "nabla-hat-square", &hat.square_identity),
                ],
            );
        }
        Err(e) => out.push(unavailable(format!("{p}.omega_hat"), "omega-hat", Kind::Observation, e)),
    }
    match st.full() {
        Ok(full) => {
            out.push(
                Record::new(format!("{p}.induced"), "induced-calculus", Kind::Observation, Status::Pass)
                    .with_dims(full.dims())
                    .with_data(json!({ "kappa0_injective": full.kappa0_injective })),
            );
            verdicts(
                out,
                &format!("{p}.induced"),
                &[
                    ("ideal", "induced-calculus", &full.ideal_check),
                    ("d_squared", "d-nabla-squared", &full.d_squared),
                    ("diagram", "kappa-diagram", &full.diagram),
                    ("multiplicative", "kappa-multiplicative", &full.multiplicative),
                    ("omega_hat", "induced-calculus", &full.matches_omega_hat),
                    ("derivation_law", "derivation-law", &full.derivation_law),
                ],
            );
        }
        Err(e) => out.push(unavailable(format!("{p}.induced"), "induced-calculus", Kind::Observation, e)),
    }
}

fn sigma(st: &Stages, out: &mut Vec<Record>) {
    let p = st.conn.name();
    let uni = st.conn.calculus().universal_model();
    let id = format!("{p}.sigma");
    let dependents = [("left_leibniz", "sigma-left-leibniz"), ("universal", "sigma-universal-agreement")];
    match st.sigma() {
        Ok(SigmaOutcome::Exists(s)) => {
            out.push(
                Record::new(&id, "sigma-existence", Kind::Observation, Status::Pass)
                    .with_dims(vec![s.domain.dim()])
                    .with_data(json!({ "matrix": matrix_json(&s.matrix) })),
            );
            verdicts(
                out,
                &id,
                &[
                    (dependents[0].0, dependents[0].1, &s.left_leibniz),
                    (dependents[1].0, dependents[1].1, &s.agrees_with_universal),
                ],
            );
        }
        Ok(SigmaOutcome::Absent { witness, image }) => {
            out.push(
                Record::new(&id, "sigma-existence", Kind::Observation, Status::Absent)
                    .with_witness(Witness::with_residual(format!("κ₁ of {} ∈ K", uni.describe(1, witness)), image.clone())),
            );
            for (suffix, anchor) in dependents {
                out.push(unavailable(format!("{id}.{suffix}"), anchor, Kind::Identity, &"no σ exists"));
            }
        }
        Err(e) => {
            out.push(unavailable(&id, "sigma-existence", Kind::Observation, e));
            for (suffix, anchor) in dependents {
                out.push(unavailable(format!("{id}.{suffix}"), anchor, Kind::Identity, e));
            }
        }
    }
    let id = format!("{p}.sigma_u");
    match st.sigma_full() {
        Ok(sf) => {
            let mut r = Record::new(&id, "sigma-full", Kind::Observation, if sf.exists() { Status::Pass } else { Status::Absent })
                .with_data(json!({ "factored_degrees": sf.factored.len() }));
            if let Some((deg, element, image)) = &sf.obstruction {
                r = r.with_witness(Witness::with_residual(format!("κ of {} ∈ I", uni.describe(*deg, element)), image.clone()));
            }
            out.push(r);
            verdicts(
                out,
                &id,
                &[
                    ("unit", "sigma-u-identities", &sf.unit_action),
                    ("multiplicative", "sigma-u-identities", &sf.multiplicative),
                    ("derivation", "sigma-u-identities", &sf.derivation),
                ],
            );
            out.push(preceq_record(format!("{id}.preceq_first_order"), uni, Ok(sf.preceq_first_order.clone())));
            out.push(preceq_record(format!("{id}.preceq_all_degrees"), uni, Ok(sf.preceq_all.clone())));
        }
        Err(e) => out.push(unavailable(&id, "sigma-full", Kind::Observation, e)),
    }
}

fn curvature(st: &Stages, out: &mut Vec<Record>) {
    let conn = st.conn;
    let p = conn.name();
    let bimodule = conn.module().is_bimodule();
    match conn.curvature_report(conn.forms()) {
        Ok(cr) => {
            out.push(
                Record::new(format!("{p}.curvature"), "curvature-right-omega", Kind::Observation, Status::Pass)
                    .with_data(json!({ "flat": cr.flat })),
            );
            out.push(Record::verdict(
                format!("{p}.curvature.right_omega_linear"),
                "curvature-right-omega",
                Kind::Identity,
                &cr.right_omega_linear,
            ));
            if bimodule {
                out.push(Record::verdict(format!("{p}.curvature.left_a_linear"), "curvature-left-a", Kind::Observation, &cr.left_a_linear));
            } else {
                out.push(unavailable(format!("{p}.curvature.left_a_linear"), "curvature-left-a", Kind::Observation, &"no left action"));
            }
        }
        Err(e) => out.push(unavailable(format!("{p}.curvature"), "curvature-right-omega", Kind::Observation, &e)),
    }
    let jq = match st.jq() {
        Ok(jq) => jq,
        Err(Error::ClosureViolation { witness, .. }) => {
            out.push(Record::new(format!("{p}.j.nabla_closed"), "j-nabla-closed", Kind::Identity, Status::Fail).with_witness(witness.clone()));
            return;
        }
        Err(e) => {
            out.push(unavailable(format!("{p}.j"), "j-low-degrees", Kind::Observation, e));
            return;
        }
    };
    out.push(
        Record::new(format!("{p}.j"), "j-low-degrees", Kind::Observation, Status::Pass)
            .with_dims(jq.dims())
            .with_data(json!({ "trivial": jq.is_trivial(), "omega_m_dims": jq.omega_m_dims() })),
    );
    verdicts(
        out,
        &format!("{p}.j"),
        &[
            ("low_degrees", "j-low-degrees", &jq.low_degrees_zero),
            ("nabla_closed", "j-nabla-closed", &jq.nabla_closed),
            ("omega_hat_closed", "j-omega-hat-closed", &jq.omega_hat_closed),
        ],
    );
    verdicts(
        out,
        &format!("{p}.quotient"),
        &[("coherence", "quotient-coherence", &jq.coherence), ("right_leibniz", "right-leibniz", &jq.right_leibniz)],
    );
    match &jq.curvature {
        Some(cr) => verdicts(
            out,
            &format!("{p}.quotient.curvature"),
            &[
                ("right_omega_linear", "quotient-curvature", &cr.right_omega_linear),
                ("left_a_linear", "quotient-curvature", &cr.left_a_linear),
            ],
        ),
        None => out.push(unavailable(format!("{p}.quotient.curvature"), "quotient-curvature", Kind::Identity, &"curvature not computed")),
    }
    match &jq.commutators {
        Some(cs) => {
            out.push(
                Record::verdict(format!("{p}.commutators.contained"), "commutator-span", Kind::Identity, &cs.contained)
                    .with_dims(vec![cs.span.dim()]),
            );
            out.push(Record::new(format!("{p}.commutators.equal"), "commutator-span", Kind::Observation, pass_if(cs.equal)));
        }
        None => out.push(unavailable(format!("{p}.commutators"), "commutator-span", Kind::Identity, &"outside truncation")),
    }
}

fn compare(st: &Stages, out: &mut Vec<Record>) {
    let p = st.conn.name();
    let calc = st.conn.calculus();
    let full = match st.full() {
        Ok(full) => full,
        Err(e) => {
            out.push(unavailable(format!("{p}.compare"), "comparison", Kind::Observation, e));
            return;
        }
    };
    let uni = calc.universal_model();
    let udims: Vec<usize> = (0..=calc.truncation()).map(|r| uni.dim(r)).collect();
    out.push(
        Record::new(format!("{p}.compare"), "comparison", Kind::Observation, Status::Pass)
            .with_dims(full.dims())
            .with_data(json!({ "omega": calc.dims(), "omega_nabla": full.dims(), "universal": udims })),
    );
    let pairs: [(&str, &GradedCalculus, &GradedCalculus); 2] =
        [("induced_preceq_original", &full.calculus, calc), ("original_preceq_induced", calc, &full.calculus)];
    for (label, c1, c2) in pairs {
        for (mode, suffix) in [(OrderMode::FirstOrder, "first_order"), (OrderMode::AllDegrees, "all_degrees")] {
            out.push(preceq_record(format!("{p}.compare.{label}.{suffix}"), uni, preceq(c1, c2, mode)));
        }
    }
}

fn tensor(model: &Model, stages: &[Stages], selected: &dyn Fn(&str) -> bool, out: &mut Vec<Record>) {
    for spec in model.tensor.iter().filter(|t| selected(&t.left) || selected(&t.right)) {
        let p = format!("tensor[{},{}]", spec.left, spec.right);
        let find = |name: &str| stages.iter().find(|s| s.conn.name() == name).expect("validated reference");
        let (ns, ms) = (find(&spec.left), find(&spec.right));
        let inputs = (|| -> Result<TensorAnalysis> {
            let first = ms.first().map_err(upstream)?;
            let sigma = ms.sigma().map_err(upstream)?;
            let full = ms.full().map_err(upstream)?;
            analyze_tensor(ns.conn, ms.conn, first, sigma, full, spec.route)
        })();
        match inputs {
            Ok(ta) => tensor_records(&p, spec.route, &ta, out),
            Err(e) => out.push(unavailable(&p, "tensor-connection", Kind::Observation, &e)),
        }
    }
}

fn tensor_records(p: &str, route: Route, ta: &TensorAnalysis, out: &mut Vec<Record>) {
    let deg = &ta.degeneracy;
    out.push(
        Record::new(format!("{p}.degeneracy"), "degeneracy", Kind::Observation, Status::Pass)
            .with_dims(vec![deg.n0.dim(), deg.m0.dim()])
            .with_data(json!({ "product_dim": ta.product.dim() })),
    );
    verdicts(
        out,
        &format!("{p}.degeneracy"),
        &[("n0_submodule", "degeneracy", &deg.n0_submodule), ("m0_submodule", "degeneracy", &deg.m0_submodule)],
    );
    out.push(Record::verdict(format!("{p}.compat_m"), "compatibility", Kind::Observation, &ta.compat_m));
    out.push(Record::verdict(format!("{p}.compat_n"), "compatibility", Kind::Observation, &ta.compat_n));
    match &ta.compat_n_induced {
        Some(v) => out.push(Record::verdict(format!("{p}.compat_n_induced"), "compatibility", Kind::Observation, v)),
        None => out.push(unavailable(format!("{p}.compat_n_induced"), "compatibility", Kind::Observation, &"no associated connection")),
    }
    match &ta.nu {
        NuOutcome::Built(nh) => out.push(
            Record::new(format!("{p}.nu_hat"), "nu-hat", Kind::Observation, Status::Pass)
                .with_dims(nh.maps.iter().map(|m| m.rows()).collect()),
        ),
        NuOutcome::Unavailable { degree, witness } => out.push(
            Record::new(format!("{p}.nu_hat"), "nu-hat", Kind::Observation, Status::Unavailable)
                .with_witness(element_witness(format!("degree-{degree} element of N ⊗ I outside N ⊗ I_∇"), witness, Vec::new())),
        ),
    }
    let id = format!("{p}.associated");
    let dependents = [("square", "associated-connection"), ("right_leibniz", "right-leibniz")];
    match &ta.associated {
        AssociatedOutcome::Exists(a) => {
            out.push(
                Record::new(&id, "associated-connection", Kind::Observation, Status::Pass)
                    .with_data(json!({ "matrix": matrix_json(a.connection.matrix()) })),
            );
            verdicts(
                out,
                &id,
                &[(dependents[0].0, dependents[0].1, &a.square), (dependents[1].0, dependents[1].1, &a.right_leibniz)],
            );
        }
        AssociatedOutcome::Absent { degree, witness, image } => {
            out.push(
                Record::new(&id, "associated-connection", Kind::Observation, Status::Absent)
                    .with_witness(element_witness(format!("degree-{degree} kernel element of ν̂"), witness, image.clone())),
            );
            for (suffix, anchor) in dependents {
                out.push(unavailable(format!("{id}.{suffix}"), anchor, Kind::Identity, &"no associated connection"));
            }
        }
        AssociatedOutcome::Unavailable(reason) => {
            out.push(unavailable(&id, "associated-connection", Kind::Observation, reason));
            for (suffix, anchor) in dependents {
                out.push(unavailable(format!("{id}.{suffix}"), anchor, Kind::Identity, reason));
            }
        }
    }
    let want_original = matches!(route, Route::Original | Route::Both);
    let want_induced = matches!(route, Route::Induced | Route::Both);
    let routes = [
        ("original", &ta.original, want_original, "ν̂ does not exist"),
        ("sigma", &ta.sigma_route, want_original, "no σ exists"),
        ("induced", &ta.induced_route, want_induced, "no associated connection"),
    ];
    for (label, tc, wanted, missing) in routes {
        let id = format!("{p}.route.{label}");
        match tc {
            Some(tc) => {
                out.push(Record::verdict(format!("{id}.balancing"), "tensor-connection", Kind::Observation, &tc.balancing));
                if tc.matrix.is_some() {
                    out.push(Record::verdict(format!("{id}.right_leibniz"), "right-leibniz", Kind::Identity, &tc.right_leibniz));
                } else {
                    out.push(unavailable(format!("{id}.right_leibniz"), "right-leibniz", Kind::Identity, &"not well defined on N ⊗_A M"));
                }
            }
            None => {
                let reason = if wanted { missing } else { "route not requested" };
                out.push(unavailable(id, "tensor-connection", Kind::Observation, &reason));
            }
        }
    }
    for (label, v) in [("sigma", &ta.sigma_agrees), ("induced", &ta.induced_agrees)] {
        let id = format!("{p}.agreement.{label}");
        match v {
            Some(v) => out.push(Record::verdict(id, "route-agreement", Kind::Identity, v)),
            None => out.push(unavailable(id, "route-agreement", Kind::Identity, &"a route is missing")),
        }
    }
}
