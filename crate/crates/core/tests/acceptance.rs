//! Acceptance criteria, one line per criterion.

mod common;

use bimodconn::algebra::Algebra;
use bimodconn::fixtures::{fixture, FIXTURES};
use bimodconn::linalg::Matrix;
use bimodconn::pipeline::{run, Command};
use bimodconn::report::Status;
use bimodconn::tensor_product::degeneracy_submodules;

use common::{bimodule_connections, brute_degeneracy, loaded, loaded_one, same_subspace};

type Outcome = Result<(), String>;

type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn expect(report: &bimodconn::report::Report, id: &str, want: Status) -> Outcome {
    match report.record(id) {
        Some(r) if r.status == want => Ok(()),
        Some(r) => Err(format!("{id}: {:?}, expected {want:?}", r.status)),
        None => Err(format!("{id}: missing")),
    }
}

/// `n² − rank μ`, with `μ` built from structure constants.
fn kernel_mu_dim(a: &Algebra) -> usize {
    let n = a.dim();
    let cols: Vec<_> = (0..n * n).map(|ij| a.basis_product(ij / n, ij % n).to_vec()).collect();
    n * n - Matrix::from_cols(n, &cols).rank()
}

fn universal_dimension() -> Outcome {
    for (name, expected) in [("a2_flat", 2), ("m2_twist", 12), ("m2_grass", 12)] {
        let l = loaded_one(name);
        let dims = l.report.record("calculus.universal_dimension").and_then(|r| r.dims.clone()).unwrap_or_default();
        expect(&l.report, "calculus.universal_dimension", Status::Pass)?;
        ensure(dims.get(1) == Some(&expected), || format!("{name}: Ω¹_u dim {dims:?}"))?;
        ensure(kernel_mu_dim(&l.model.algebra) == expected, || format!("{name}: ker μ oracle"))?;
    }
    Ok(())
}

fn leibniz_and_derivation() -> Outcome {
    for l in loaded() {
        for c in &l.model.connections {
            expect(&l.report, &format!("{}.right_leibniz", c.name()), Status::Pass)?;
        }
        for c in bimodule_connections(&l.model) {
            for id in ["first_order.derivation_law", "first_order.d_unit", "omega_hat.derivation_law", "induced.derivation_law"] {
                expect(&l.report, &format!("{c}.{id}"), Status::Pass)?;
            }
        }
    }
    Ok(())
}

fn diagram() -> Outcome {
    for l in loaded() {
        for c in bimodule_connections(&l.model) {
            expect(&l.report, &format!("{c}.first_order.diagram"), Status::Pass)?;
            expect(&l.report, &format!("{c}.induced.diagram"), Status::Pass)?;
        }
    }
    Ok(())
}

fn sigma_dichotomy() -> Outcome {
    for name in ["a2_flat", "a2_flat_quotient"] {
        let r = &loaded_one(name).report;
        expect(r, "d.sigma", Status::Pass)?;
        expect(r, "d.sigma.left_leibniz", Status::Pass)?;
    }
    let r = &loaded_one("m2_twist").report;
    expect(r, "twist.sigma", Status::Absent)?;
    let w = r.record("twist.sigma").and_then(|x| x.witness.clone()).ok_or("twist: no witness")?;
    ensure(w.residual.is_some_and(|v| v.iter().any(|x| !x.is_zero())), || "twist: zero image".into())
}

fn curvature() -> Outcome {
    for l in loaded() {
        for c in &l.model.connections {
            expect(&l.report, &format!("{}.curvature.right_omega_linear", c.name()), Status::Pass)?;
        }
        for c in bimodule_connections(&l.model) {
            expect(&l.report, &format!("{c}.quotient.curvature.right_omega_linear"), Status::Pass)?;
            expect(&l.report, &format!("{c}.quotient.curvature.left_a_linear"), Status::Pass)?;
        }
    }
    let r = &loaded_one("m2_grass").report;
    expect(r, "grass.curvature.left_a_linear", Status::Fail)?;
    ensure(r.record("grass.curvature.left_a_linear").unwrap().witness.is_some(), || "grass: no witness".into())
}

fn j_closure() -> Outcome {
    for l in loaded() {
        for c in bimodule_connections(&l.model) {
            for id in ["j.low_degrees", "j.nabla_closed", "j.omega_hat_closed"] {
                expect(&l.report, &format!("{c}.{id}"), Status::Pass)?;
            }
            let dims = l.report.record(&format!("{c}.j")).and_then(|r| r.dims.clone()).unwrap_or_default();
            ensure(dims.len() == 4 && dims[0] == 0 && dims[1] == 0, || format!("{}: J dims {dims:?}", l.name))?;
        }
    }
    Ok(())
}

fn d_nabla_squared() -> Outcome {
    for l in loaded() {
        for c in bimodule_connections(&l.model) {
            expect(&l.report, &format!("{c}.induced.d_squared"), Status::Pass)?;
        }
    }
    let r = &loaded_one("m2_grass").report;
    let dims = r.record("grass.j").and_then(|x| x.dims.clone()).unwrap_or_default();
    ensure(dims.get(2).is_some_and(|&d| d > 0), || format!("grass: ∇̂² vanishes upstairs, J dims {dims:?}"))
}

fn sigma_u_identities() -> Outcome {
    for name in ["a2_flat", "a2_flat_quotient"] {
        let r = &loaded_one(name).report;
        for id in ["d.sigma_u.unit", "d.sigma_u.multiplicative", "d.sigma_u.derivation"] {
            expect(r, id, Status::Pass)?;
        }
    }
    Ok(())
}

fn tensor() -> Outcome {
    for l in loaded() {
        for t in &l.model.tensor {
            let p = format!("tensor[{},{}]", t.left, t.right);
            for route in ["original", "sigma", "induced"] {
                let id = format!("{p}.route.{route}.right_leibniz");
                if let Some(rec) = l.report.record(&id) {
                    ensure(rec.status != Status::Fail, || format!("{}: {id} fails", l.name))?;
                }
            }
            for id in ["agreement.sigma", "agreement.induced"] {
                let id = format!("{p}.{id}");
                ensure(l.report.record(&id).is_some_and(|r| r.status != Status::Fail), || format!("{}: {id}", l.name))?;
            }
        }
        for m in l.model.modules.values().filter(|m| m.is_bimodule()) {
            for n in l.model.modules.values() {
                let deg = degeneracy_submodules(n, m).map_err(|e| e.to_string())?;
                let (n0, m0) = brute_degeneracy(n, m);
                ensure(same_subspace(&deg.n0, &n0) && same_subspace(&deg.m0, &m0), || format!("{}: degeneracy", l.name))?;
            }
        }
    }
    for name in ["a2_flat", "a2_flat_quotient"] {
        let r = &loaded_one(name).report;
        for id in ["route.original.right_leibniz", "route.sigma.right_leibniz", "agreement.sigma", "associated.square"] {
            expect(r, &format!("tensor[dN,d].{id}"), Status::Pass)?;
        }
    }
    Ok(())
}

fn determinism() -> Outcome {
    for l in loaded() {
        let model = fixture(l.name).unwrap().validate(None).map_err(|e| e.to_string())?;
        let again = run(Command::All, &model, None).map_err(|e| e.to_string())?;
        ensure(again.to_json() == l.report.to_json(), || format!("{}: reports differ", l.name))?;
    }
    Ok(())
}

#[test]
fn acceptance_criteria() {
    assert_eq!(loaded().len(), FIXTURES.len());
    let criteria: [Criterion; 10] = [
        ("universal-calculus dimension law", universal_dimension),
        ("right Leibniz and derivation law", leibniz_and_derivation),
        ("κ₁∘d_u = d_∇ diagram", diagram),
        ("σ dichotomy", sigma_dichotomy),
        ("curvature linearity", curvature),
        ("J closure", j_closure),
        ("d_∇² = 0", d_nabla_squared),
        ("σ_u full-degree identities", sigma_u_identities),
        ("tensor products", tensor),
        ("determinism", determinism),
    ];
    let mut failed = Vec::new();
    for (i, (label, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(()) => println!("criterion {:>2} PASS  {label}", i + 1),
            Err(e) => {
                println!("criterion {:>2} FAIL  {label}: {e}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
