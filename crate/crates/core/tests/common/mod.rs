#![allow(dead_code)]

use std::sync::OnceLock;

use bimodconn::algebra::Module;
use bimodconn::fixtures::{fixture, FIXTURES};
use bimodconn::linalg::{kernel, zero_vector, Matrix, Subspace};
use bimodconn::model::Model;
use bimodconn::pipeline::{run, Command};
use bimodconn::report::{Report, Status};

pub struct Loaded {
    pub name: &'static str,
    pub model: Model,
    pub report: Report,
}

/// Every shipped fixture with its `all` report, computed once per test binary.
pub fn loaded() -> &'static [Loaded] {
    static CELL: OnceLock<Vec<Loaded>> = OnceLock::new();
    CELL.get_or_init(|| {
        FIXTURES
            .iter()
            .map(|&name| {
                let model = fixture(name).unwrap().validate(None).unwrap();
                let report = run(Command::All, &model, None).unwrap();
                Loaded { name, model, report }
            })
            .collect()
    })
}

pub fn loaded_one(name: &str) -> &'static Loaded {
    loaded().iter().find(|l| l.name == name).unwrap()
}

pub fn status(report: &Report, id: &str) -> Status {
    report.record(id).unwrap_or_else(|| panic!("missing record {id}")).status
}

/// Names of connections on bimodules.
pub fn bimodule_connections(model: &Model) -> Vec<&str> {
    model.connections.iter().filter(|c| c.module().is_bimodule()).map(|c| c.name()).collect()
}

/// `N₀` and `M₀` straight from the plain tensor product and its balancing relations.
pub fn brute_degeneracy(n: &Module, m: &Module) -> (Subspace, Subspace) {
    let (dn, dm) = (n.dim(), m.dim());
    let lefts = m.lefts().expect("right factor is a bimodule");
    let mut rels = Vec::new();
    for (nf, fm) in n.rights().iter().zip(lefts) {
        for j in 0..dn {
            for k in 0..dm {
                let mut v = zero_vector(dn * dm);
                for p in 0..dn {
                    v[p * dm + k] += nf.row(p)[j].clone();
                }
                for q in 0..dm {
                    v[j * dm + q] -= fm.row(q)[k].clone();
                }
                rels.push(v);
            }
        }
    }
    let balanced = Subspace::span(dn * dm, rels);
    let pure = |j: usize, k: usize| {
        let mut v = zero_vector(dn * dm);
        v[j * dm + k] = bimodconn::q(1, 1);
        balanced.reduce(v)
    };
    let n_cols: Vec<_> = (0..dn).map(|j| (0..dm).flat_map(|k| pure(j, k)).collect()).collect();
    let m_cols: Vec<_> = (0..dm).map(|k| (0..dn).flat_map(|j| pure(j, k)).collect()).collect();
    (
        kernel(&Matrix::from_cols(dm * dn * dm, &n_cols)),
        kernel(&Matrix::from_cols(dn * dn * dm, &m_cols)),
    )
}

pub fn same_subspace(a: &Subspace, b: &Subspace) -> bool {
    a.is_subspace_of(b) && b.is_subspace_of(a)
}
