//! Model files: an algebra, named modules, a calculus, named connections and tensor requests.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{check_algebra, check_bimodule, check_right_module, Algebra, Module};
use crate::calculus::{Generator, GradedCalculus};
use crate::connection::Connection;
use crate::error::{Error, Result};
use crate::forms::FormModule;
use crate::linalg::{Matrix, Vector};
use crate::rational::Rational;
use crate::tensor_product::Route;
use crate::universal::Universal;
use crate::verdict::Verdict;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub schema: u32,
    pub algebra: AlgebraSpec,
    pub modules: BTreeMap<String, ModuleSpec>,
    pub calculus: CalculusSpec,
    pub connections: Vec<ConnectionSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tensor: Vec<TensorSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub names: Vec<String>,
    /// `structure[i][j]`: coordinates of `e_i e_j`.
    pub structure: Vec<Vec<Vec<Rational>>>,
    pub unit: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpec {
    pub names: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left: Option<Vec<Vec<Vec<Rational>>>>,
    pub right: Vec<Vec<Vec<Rational>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalculusSpec {
    pub truncation: usize,
    /// Ideal generators as elements of `A^{⊗(degree+1)}`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub generators: Vec<GeneratorSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub degree: usize,
    pub tensor: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConnectionSpec {
    pub name: String,
    pub module: String,
    /// Rows of the matrix of `∇` in class coordinates of `M ⊗_A Ω¹`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nabla: Option<Vec<Vec<Rational>>>,
    /// `∇x_j` as elements of `M ⊗ A`, one per basis element.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nabla_tensor: Option<Vec<Vec<Rational>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorSpec {
    /// Connection on the right module `N`.
    pub left: String,
    /// Connection on the bimodule `M`.
    pub right: String,
    #[serde(default = "default_route")]
    pub route: Route,
}

fn default_route() -> Route {
    Route::Both
}

/// A validated model.
#[derive(Clone, Debug)]
pub struct Model {
    pub algebra: Algebra,
    pub modules: BTreeMap<String, Module>,
    pub calculus: Arc<GradedCalculus>,
    pub connections: Vec<Connection>,
    pub tensor: Vec<TensorSpec>,
}

impl Model {
    pub fn connection(&self, name: &str) -> Option<&Connection> {
        self.connections.iter().find(|c| c.name() == name)
    }
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema { path: path.into(), message: message.into() }
}

fn matrix(path: &str, rows: &[Vec<Rational>], shape: (usize, usize)) -> Result<Matrix> {
    if rows.len() != shape.0 {
        return Err(schema(path, format!("expected {} rows, found {}", shape.0, rows.len())));
    }
    for (i, r) in rows.iter().enumerate() {
        if r.len() != shape.1 {
            return Err(schema(format!("{path}[{i}]"), format!("expected {} entries, found {}", shape.1, r.len())));
        }
    }
    Ok(Matrix::from_rows(rows.to_vec()))
}

fn vector(path: &str, v: &[Rational], len: usize) -> Result<Vector> {
    if v.len() != len {
        return Err(schema(path, format!("expected {len} entries, found {}", v.len())));
    }
    Ok(v.to_vec())
}

fn require(check: &str, v: Verdict) -> Result<()> {
    match v {
        Verdict::Pass => Ok(()),
        Verdict::Fail(witness) => Err(Error::AxiomFailure { check: check.into(), witness }),
    }
}

impl ModelFile {
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let file: ModelFile = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            schema(if path.is_empty() { "$".to_string() } else { path }, e.into_inner().to_string())
        })?;
        if file.schema != SCHEMA_VERSION {
            return Err(schema("schema", format!("unsupported schema version {}", file.schema)));
        }
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("model serializes");
        s.push('\n');
        s
    }

    /// Builds and checks every component.
    pub fn validate(&self, truncation: Option<usize>) -> Result<Model> {
        let a = &self.algebra;
        let n = a.names.len();
        if n == 0 {
            return Err(schema("algebra.names", "algebra must have a basis"));
        }
        if a.structure.len() != n {
            return Err(schema("algebra.structure", format!("expected {n} rows, found {}", a.structure.len())));
        }
        let mut structure = Vec::with_capacity(n);
        for (i, row) in a.structure.iter().enumerate() {
            if row.len() != n {
                return Err(schema(format!("algebra.structure[{i}]"), format!("expected {n} products, found {}", row.len())));
            }
            let prods = row
                .iter()
                .enumerate()
                .map(|(j, v)| vector(&format!("algebra.structure[{i}][{j}]"), v, n))
                .collect::<Result<Vec<_>>>()?;
            structure.push(prods);
        }
        let unit = vector("algebra.unit", &a.unit, n)?;
        let algebra = Algebra::new(a.names.clone(), structure, unit)?;
        require("algebra", check_algebra(&algebra))?;

        let mut modules = BTreeMap::new();
        for (name, spec) in &self.modules {
            let d = spec.names.len();
            let path = format!("modules.{name}");
            let mats = |side: &str, list: &[Vec<Vec<Rational>>]| -> Result<Vec<Matrix>> {
                if list.len() != n {
                    return Err(schema(format!("{path}.{side}"), format!("expected {n} matrices, found {}", list.len())));
                }
                list.iter()
                    .enumerate()
                    .map(|(i, m)| matrix(&format!("{path}.{side}[{i}]"), m, (d, d)))
                    .collect()
            };
            let right = mats("right", &spec.right)?;
            let module = match &spec.left {
                Some(l) => Module::bimodule(spec.names.clone(), mats("left", l)?, right)?,
                None => Module::right_module(spec.names.clone(), right)?,
            };
            if module.is_bimodule() {
                require(&format!("bimodule {name}"), check_bimodule(&algebra, &module))?;
            } else {
                require(&format!("right module {name}"), check_right_module(&algebra, &module))?;
            }
            modules.insert(name.clone(), module);
        }

        let top = truncation.unwrap_or(self.calculus.truncation);
        if top < 1 {
            return Err(schema("calculus.truncation", "truncation degree must be at least 1"));
        }
        let uni = Universal::new(&algebra, top)?;
        let mut gens = Vec::with_capacity(self.calculus.generators.len());
        for (k, g) in self.calculus.generators.iter().enumerate() {
            let path = format!("calculus.generators[{k}]");
            if g.degree == 0 || g.degree > top {
                return Err(schema(format!("{path}.degree"), format!("degree must lie in 1..={top}")));
            }
            let t = vector(&format!("{path}.tensor"), &g.tensor, n.pow(g.degree as u32 + 1))?;
            let coords = uni.from_tensor(g.degree, &t).map_err(|e| schema(format!("{path}.tensor"), e.to_string()))?;
            gens.push(Generator { degree: g.degree, coords });
        }
        let calculus = Arc::new(GradedCalculus::quotient(&uni, &gens)?);
        require("calculus ideal", calculus.check_ideal())?;

        let mut connections: Vec<Connection> = Vec::with_capacity(self.connections.len());
        for (k, c) in self.connections.iter().enumerate() {
            let path = format!("connections[{k}]");
            if connections.iter().any(|o| o.name() == c.name) {
                return Err(schema(format!("{path}.name"), format!("duplicate connection name `{}`", c.name)));
            }
            let module = modules
                .get(&c.module)
                .ok_or_else(|| schema(format!("{path}.module"), format!("unknown module `{}`", c.module)))?
                .clone();
            let conn = match (&c.nabla, &c.nabla_tensor) {
                (Some(rows), None) => {
                    let rows_expected = FormModule::new(&uni, &module, calculus.ideals())?.dim(1);
                    let m = matrix(&format!("{path}.nabla"), rows, (rows_expected, module.dim()))?;
                    Connection::new(&c.name, Arc::clone(&calculus), module, m)?
                }
                (None, Some(images)) => {
                    if images.len() != module.dim() {
                        return Err(schema(
                            format!("{path}.nabla_tensor"),
                            format!("expected {} images, found {}", module.dim(), images.len()),
                        ));
                    }
                    Connection::from_tensor(&c.name, Arc::clone(&calculus), module, images)
                        .map_err(|e| schema(format!("{path}.nabla_tensor"), e.to_string()))?
                }
                _ => return Err(schema(path, "exactly one of `nabla` and `nabla_tensor` is required")),
            };
            require(&format!("right Leibniz rule of {}", c.name), conn.check_right_leibniz())?;
            connections.push(conn);
        }

        for (k, t) in self.tensor.iter().enumerate() {
            let path = format!("tensor[{k}]");
            for (side, name) in [("left", &t.left), ("right", &t.right)] {
                if !connections.iter().any(|c| c.name() == name) {
                    return Err(schema(format!("{path}.{side}"), format!("unknown connection `{name}`")));
                }
            }
            let right = connections.iter().find(|c| c.name() == t.right).expect("checked");
            if !right.module().is_bimodule() {
                return Err(schema(format!("{path}.right"), "the right factor must be a bimodule"));
            }
        }

        Ok(Model { algebra, modules, calculus, connections, tensor: self.tensor.clone() })
    }
}

pub fn parse_model(path: &Path, truncation: Option<usize>) -> Result<Model> {
    let text = std::fs::read_to_string(path)?;
    ModelFile::from_json(&text)?.validate(truncation)
}

impl AlgebraSpec {
    pub fn from_algebra(a: &Algebra) -> Self {
        AlgebraSpec { names: a.names().to_vec(), structure: a.structure().to_vec(), unit: a.unit().to_vec() }
    }
}

impl ModuleSpec {
    pub fn from_module(m: &Module) -> Self {
        let rows = |mats: &[Matrix]| mats.iter().map(Matrix::to_rows).collect();
        ModuleSpec { names: m.names().to_vec(), left: m.lefts().map(rows), right: rows(m.rights()) }
    }
}
