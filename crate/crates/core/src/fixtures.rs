//! The shipped example models, built programmatically.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{Algebra, Module};
use crate::calculus::{Generator, GradedCalculus};
use crate::connection::{induced_first_order, sigma_exists, Connection, OpContext};
use crate::error::{Error, Result};
use crate::linalg::{add_vectors, unit_vector, Matrix, Vector};
use crate::model::{AlgebraSpec, CalculusSpec, ConnectionSpec, GeneratorSpec, ModelFile, ModuleSpec, TensorSpec, SCHEMA_VERSION};
use crate::rational::{q, Rational};
use crate::tensor_product::Route;
use crate::universal::Universal;

pub const DEFAULT_TRUNCATION: usize = 3;

pub const FIXTURES: [&str; 5] = ["a2_flat", "a2_flat_quotient", "m2_twist", "m2_grass", "a2_degenerate"];

pub fn fixture(name: &str) -> Result<ModelFile> {
    match name {
        "a2_flat" => a2_flat(false),
        "a2_flat_quotient" => a2_flat(true),
        "m2_twist" => m2_twist(),
        "m2_grass" => m2_grass(),
        "a2_degenerate" => a2_degenerate(),
        other => Err(Error::Invalid(format!("unknown fixture `{other}`"))),
    }
}

fn ints(v: &[i64]) -> Vector {
    v.iter().map(|&x| q(x, 1)).collect()
}

/// Entries in `{-1, 0, 1}` with at most two nonzero, in a fixed order.
pub fn small_grid(dim: usize) -> Vec<Vector> {
    let mut out = Vec::new();
    for k in 0..dim {
        for s in [1, -1] {
            let mut v = vec![Rational::zero(); dim];
            v[k] = q(s, 1);
            out.push(v);
        }
    }
    for k1 in 0..dim {
        for k2 in k1 + 1..dim {
            for (s1, s2) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                let mut v = vec![Rational::zero(); dim];
                v[k1] = q(s1, 1);
                v[k2] = q(s2, 1);
                out.push(v);
            }
        }
    }
    out
}

fn model_file(
    a: &Algebra,
    modules: &[(&str, &Module)],
    truncation: usize,
    generators: Vec<GeneratorSpec>,
    connections: &[(&str, &Connection)],
    tensor: Vec<TensorSpec>,
) -> ModelFile {
    ModelFile {
        schema: SCHEMA_VERSION,
        algebra: AlgebraSpec::from_algebra(a),
        modules: modules.iter().map(|(n, m)| (n.to_string(), ModuleSpec::from_module(m))).collect::<BTreeMap<_, _>>(),
        calculus: CalculusSpec { truncation, generators },
        connections: connections
            .iter()
            .map(|(m, c)| ConnectionSpec {
                name: c.name().to_string(),
                module: m.to_string(),
                nabla: None,
                nabla_tensor: Some(c.to_tensor()),
            })
            .collect(),
        tensor,
    }
}

fn tensor(left: &str, right: &str) -> TensorSpec {
    TensorSpec { left: left.into(), right: right.into(), route: Route::Both }
}

/// `∇ = d` on `A` over the two-point algebra, optionally on the quotient by `e1⊗e2`.
fn a2_flat(quotient: bool) -> Result<ModelFile> {
    let a = Algebra::a2();
    let uni = Universal::new(&a, DEFAULT_TRUNCATION)?;
    let gens = if quotient { vec![GeneratorSpec { degree: 1, tensor: ints(&[0, 1, 0, 0]) }] } else { Vec::new() };
    let calc = Arc::new(quotient_from_specs(&uni, &gens)?);
    let reg = Module::regular(&a);
    let right = Module::regular_right(&a);
    let d = Connection::exterior("d", Arc::clone(&calc))?;
    let images: Vec<Vector> = (0..a.dim()).map(|i| calc.universal_model().d(0, &unit_vector(a.dim(), i))).collect();
    let dn = Connection::from_ambient("dN", calc, right.clone(), &images)?;
    Ok(model_file(&a, &[("A", &reg), ("N", &right)], DEFAULT_TRUNCATION, gens, &[("A", &d), ("N", &dn)], vec![tensor("dN", "d")]))
}

fn quotient_from_specs(uni: &Universal, gens: &[GeneratorSpec]) -> Result<GradedCalculus> {
    let gens = gens
        .iter()
        .map(|g| Ok(Generator { degree: g.degree, coords: uni.from_tensor(g.degree, &g.tensor)? }))
        .collect::<Result<Vec<_>>>()?;
    GradedCalculus::quotient(uni, &gens)
}

/// `∇a = da + θ·a` on `M = A`.
pub fn twisted(name: &str, calc: Arc<GradedCalculus>, theta: &[Rational]) -> Result<Connection> {
    let a = calc.algebra().clone();
    let n = a.dim();
    let lifted = calc.lift(1, theta);
    let images: Vec<Vector> = (0..n)
        .map(|i| {
            let e = unit_vector(n, i);
            add_vectors(&calc.universal_model().d(0, &e), &calc.forms().right_ambient(1, &lifted, &e))
        })
        .collect();
    Connection::from_ambient(name, calc, Module::regular(&a), &images)
}

/// First `θ` on the grid for which `σ` does not exist for `da + θ·a` on the given calculus.
pub fn search_twist(calc: &Arc<GradedCalculus>) -> Result<(Vector, Connection)> {
    for theta in small_grid(calc.dim(1)) {
        let conn = twisted("twist", Arc::clone(calc), &theta)?;
        let ctx = OpContext::new(&conn);
        let first = induced_first_order(&ctx)?;
        if !sigma_exists(&ctx, &first)?.exists() {
            return Ok((theta, conn));
        }
    }
    Err(Error::Invalid(
        "no twist on the search grid has κ₁(K) ≠ 0 for this algebra and calculus".into(),
    ))
}

/// `M = A` over `M₂(Q)`, calculus `⟨e11⊗e22⟩`, `∇ = d + θ` with `σ` obstructed.
fn m2_twist() -> Result<ModelFile> {
    let a = Algebra::m2();
    let uni = Universal::new(&a, DEFAULT_TRUNCATION)?;
    let mut t = vec![0; 16];
    t[3] = 1;
    let gens = vec![GeneratorSpec { degree: 1, tensor: ints(&t) }];
    let calc = Arc::new(quotient_from_specs(&uni, &gens)?);
    let (_, conn) = search_twist(&calc)?;
    Ok(model_file(&a, &[("A", &Module::regular(&a))], DEFAULT_TRUNCATION, gens, &[("A", &conn)], Vec::new()))
}

/// First gauge potential with a single nonzero entry whose curvature is not left-A-linear.
pub fn search_grass(calc: &Arc<GradedCalculus>, rank: usize) -> Result<Connection> {
    let dim1 = calc.dim(1);
    for cp in 0..rank {
        for c in 0..rank {
            for k in 0..dim1 {
                let mut theta = vec![vec![vec![Rational::zero(); dim1]; rank]; rank];
                theta[cp][c][k] = Rational::one();
                let conn = Connection::gauge("grass", Arc::clone(calc), rank, &theta)?;
                let rep = conn.curvature_report(conn.forms())?;
                if !rep.flat && !rep.left_a_linear.is_pass() {
                    return Ok(conn);
                }
            }
        }
    }
    Err(Error::Invalid("no gauge potential on the search grid has non-left-linear curvature".into()))
}

/// `M = A²` over `M₂(Q)` with a gauge potential, universal calculus.
fn m2_grass() -> Result<ModelFile> {
    let a = Algebra::m2();
    let calc = Arc::new(GradedCalculus::universal(&a, DEFAULT_TRUNCATION)?);
    let conn = search_grass(&calc, 2)?;
    let module = conn.module().clone();
    Ok(model_file(&a, &[("A2", &module)], DEFAULT_TRUNCATION, Vec::new(), &[("A2", &conn)], Vec::new()))
}

fn line_module(names: &str, acting: usize, with_left: bool) -> Result<Module> {
    let mats: Vec<Matrix> = (0..2).map(|i| Matrix::from_rows(vec![vec![q(i64::from(i == acting), 1)]])).collect();
    if with_left {
        Module::bimodule(vec![names.into()], mats.clone(), mats)
    } else {
        Module::right_module(vec![names.into()], mats)
    }
}

/// Degenerate pairings over the two-point algebra.
fn a2_degenerate() -> Result<ModelFile> {
    let a = Algebra::a2();
    let calc = Arc::new(GradedCalculus::universal(&a, DEFAULT_TRUNCATION)?);
    let n = Module::regular_right(&a);
    let m = line_module("m", 0, true)?;
    let n2 = line_module("n", 1, false)?;
    let nabla_m = Connection::from_tensor("nablaM", Arc::clone(&calc), m.clone(), &[ints(&[0, -1])])?;
    let compatible = Connection::from_tensor(
        "compatible",
        Arc::clone(&calc),
        n.clone(),
        &[ints(&[0, -1, 1, 0]), ints(&[0, 0, -1, 0])],
    )?;
    let leaky = Connection::from_tensor("leaky", Arc::clone(&calc), n.clone(), &[ints(&[0, -1, 1, 0]), ints(&[0, 1, -1, 0])])?;
    let nabla_n2 = Connection::from_tensor("nablaN2", calc, n2.clone(), &[ints(&[-1, 0])])?;
    Ok(model_file(
        &a,
        &[("M", &m), ("N", &n), ("N2", &n2)],
        DEFAULT_TRUNCATION,
        Vec::new(),
        &[("M", &nabla_m), ("N", &compatible), ("N", &leaky), ("N2", &nabla_n2)],
        vec![tensor("compatible", "nablaM"), tensor("leaky", "nablaM"), tensor("nablaN2", "nablaM")],
    ))
}
