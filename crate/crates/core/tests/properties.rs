//! Property tests over random inputs.

mod common;

use std::sync::Arc;

use proptest::prelude::*;

use bimodconn::algebra::{check_algebra, check_bimodule, check_right_module, Algebra, Module};
use bimodconn::calculus::{preceq, Generator, GradedCalculus, OrderMode};
use bimodconn::connection::*;
use bimodconn::fixtures::twisted;
use bimodconn::linalg::{factor_through, kernel, solve, Factorization, Matrix, Vector};
use bimodconn::tensor::tensor_over_a;
use bimodconn::tensor_product::degeneracy_submodules;
use bimodconn::universal::Universal;
use bimodconn::{q, Rational};

use common::{brute_degeneracy, same_subspace};

fn small() -> impl Strategy<Value = Rational> {
    (-3i64..=3).prop_map(|x| q(x, 1))
}

fn vector(len: usize) -> impl Strategy<Value = Vector> {
    prop::collection::vec(small(), len)
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    vector(rows * cols).prop_map(move |v| Matrix::from_flat(rows, cols, v))
}

fn sized_matrix() -> impl Strategy<Value = Matrix> {
    (1usize..=5, 1usize..=6).prop_flat_map(|(r, c)| matrix(r, c))
}

/// Structure constants of `a` in the basis given by the columns of `p`.
fn change_basis(a: &Algebra, p: &Matrix) -> Algebra {
    let n = a.dim();
    let to_new = |v: &[Rational]| solve(p, v).expect("invertible");
    let b: Vec<Vector> = (0..n).map(|i| p.col(i)).collect();
    let structure = (0..n).map(|i| (0..n).map(|j| to_new(&a.mul(&b[i], &b[j]))).collect()).collect();
    Algebra::new((0..n).map(|i| format!("b{}", i + 1)).collect(), structure, to_new(a.unit())).unwrap()
}

/// Diagonal action of `diag(n)` on basis vectors tagged with idempotents.
fn tagged(n: usize, tags: &[usize]) -> Vec<Matrix> {
    (0..n)
        .map(|i| {
            let d = tags.len();
            let mut m = Matrix::zeros(d, d);
            for (k, &t) in tags.iter().enumerate() {
                if t == i {
                    m = m.add(&Matrix::from_flat(d, d, (0..d * d).map(|x| q((x == k * d + k) as i64, 1)).collect()));
                }
            }
            m
        })
        .collect()
}

fn names(d: usize) -> Vec<String> {
    (0..d).map(|k| format!("x{}", k + 1)).collect()
}

fn a2_calculus(quotient: bool) -> Arc<GradedCalculus> {
    let a = Algebra::a2();
    let uni = Universal::new(&a, 3).unwrap();
    let gens = if quotient {
        vec![Generator { degree: 1, coords: uni.from_tensor(1, &[q(0, 1), q(1, 1), q(0, 1), q(0, 1)]).unwrap() }]
    } else {
        Vec::new()
    };
    Arc::new(GradedCalculus::quotient(&uni, &gens).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn rank_nullity(m in sized_matrix()) {
        let k = kernel(&m);
        prop_assert_eq!(m.rank() + k.dim(), m.cols());
        for v in k.basis() {
            prop_assert!(m.apply(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn composites_factor(f in matrix(3, 5), h in matrix(2, 3)) {
        let g = h.mul(&f);
        match factor_through(&f, &g).unwrap() {
            Factorization::Factors(h2) => prop_assert_eq!(h2.mul(&f), g),
            Factorization::Obstructed { .. } => prop_assert!(false, "h∘f must factor through f"),
        }
    }

    #[test]
    fn obstruction_witness_is_in_the_kernel(f in matrix(2, 4), g in matrix(2, 4)) {
        if let Factorization::Obstructed { witness, image } = factor_through(&f, &g).unwrap() {
            prop_assert!(f.apply(&witness).iter().all(|x| x.is_zero()));
            prop_assert_eq!(g.apply(&witness), image.clone());
            prop_assert!(image.iter().any(|x| !x.is_zero()));
        }
    }

    #[test]
    fn basis_change_preserves_axioms_and_dims(p in matrix(4, 4)) {
        prop_assume!(p.rank() == 4);
        let a = change_basis(&Algebra::m2(), &p);
        prop_assert!(check_algebra(&a).is_pass());
        let uni = Universal::new(&a, 2).unwrap();
        prop_assert_eq!(uni.dim(1), 12);
        prop_assert!(Connection::exterior("d", Arc::new(GradedCalculus::universal(&a, 2).unwrap())).unwrap().check_right_leibniz().is_pass());
    }

    #[test]
    fn degeneracy_matches_brute_force(
        n in 1usize..=3,
        ntags in prop::collection::vec(0usize..3, 1..=3),
        lt in prop::collection::vec(0usize..3, 1..=3),
        rt in prop::collection::vec(0usize..3, 1..=3),
    ) {
        let a = Algebra::diagonal(n);
        let ntags: Vec<usize> = ntags.iter().map(|t| t % n).collect();
        let d = lt.len().min(rt.len());
        let (lt, rt): (Vec<usize>, Vec<usize>) = (lt[..d].iter().map(|t| t % n).collect(), rt[..d].iter().map(|t| t % n).collect());
        let nm = Module::right_module(names(ntags.len()), tagged(n, &ntags)).unwrap();
        let mm = Module::bimodule(names(d), tagged(n, &lt), tagged(n, &rt)).unwrap();
        prop_assert!(check_right_module(&a, &nm).is_pass());
        prop_assert!(check_bimodule(&a, &mm).is_pass());
        let deg = degeneracy_submodules(&nm, &mm).unwrap();
        let (n0, m0) = brute_degeneracy(&nm, &mm);
        prop_assert!(same_subspace(&deg.n0, &n0));
        prop_assert!(same_subspace(&deg.m0, &m0));
        let matched = ntags.iter().map(|t| lt.iter().filter(|l| *l == t).count()).sum::<usize>();
        prop_assert_eq!(tensor_over_a(&nm, &mm).unwrap().dim(), matched);
    }

    #[test]
    fn quotient_calculi_are_below_the_universal_one(g in vector(4), deg2 in any::<bool>()) {
        let a = Algebra::a2();
        let uni = Universal::new(&a, 3).unwrap();
        let degree = if deg2 { 2 } else { 1 };
        let coords = g[..uni.dim(degree)].to_vec();
        let calc = GradedCalculus::quotient(&uni, &[Generator { degree, coords }]).unwrap();
        let u = GradedCalculus::universal(&a, 3).unwrap();
        prop_assert!(calc.check_ideal().is_pass());
        prop_assert!(calc.check_d_squared().is_pass());
        prop_assert!(calc.check_leibniz().is_pass());
        prop_assert!(preceq(&calc, &u, OrderMode::AllDegrees).unwrap().holds());
        prop_assert!(preceq(&calc, &calc, OrderMode::AllDegrees).unwrap().holds());
        let trivial = calc.dims() == u.dims();
        prop_assert_eq!(preceq(&u, &calc, OrderMode::AllDegrees).unwrap().holds(), trivial);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    /// Every identity of the pipeline on random twists `da + θa` of `A2`.
    #[test]
    fn a2_twists_satisfy_every_identity(quotient in any::<bool>(), t in vector(2)) {
        let calc = a2_calculus(quotient);
        let theta = t[..calc.dim(1)].to_vec();
        let conn = twisted("t", calc, &theta).unwrap();
        prop_assert!(conn.check_right_leibniz().is_pass());
        prop_assert!(conn.check_extension().is_pass());
        let ctx = OpContext::new(&conn);
        let first = induced_first_order(&ctx).unwrap();
        for v in [&first.d_unit_zero, &first.derivation_law, &first.left_leibniz, &first.diagram, &first.bimodule_linear, &first.right_linear] {
            prop_assert!(v.is_pass(), "{:?}", v);
        }
        let curv = conn.curvature_report(conn.forms()).unwrap();
        prop_assert!(curv.right_omega_linear.is_pass());
        let hat = omega_hat_generate(&ctx).unwrap();
        prop_assert!(hat.derivation_law.is_pass() && hat.square_identity.is_pass() && hat.right_linear.is_pass());
        let jq = j_ideal(&ctx, &hat).unwrap();
        for v in [&jq.low_degrees_zero, &jq.nabla_closed, &jq.omega_hat_closed, &jq.coherence, &jq.right_leibniz] {
            prop_assert!(v.is_pass(), "{:?}", v);
        }
        let qc = jq.curvature.as_ref().unwrap();
        prop_assert!(qc.left_a_linear.is_pass() && qc.right_omega_linear.is_pass());
        let full = induced_full_calculus(&ctx, &hat, &jq).unwrap();
        for v in [&full.ideal_check, &full.d_squared, &full.diagram, &full.multiplicative, &full.derivation_law] {
            prop_assert!(v.is_pass(), "{:?}", v);
        }
        let sigma = sigma_exists(&ctx, &first).unwrap();
        if let SigmaOutcome::Exists(s) = &sigma {
            prop_assert!(s.left_leibniz.is_pass() && s.agrees_with_universal.is_pass());
        }
        let sf = sigma_full(&ctx, &jq, &full).unwrap();
        prop_assert!(sf.unit_action.is_pass() && sf.multiplicative.is_pass() && sf.derivation.is_pass());
        prop_assert_eq!(sigma.exists(), sf.preceq_first_order.holds());
        prop_assert_eq!(sf.exists(), sf.preceq_all.holds());
        if !quotient {
            prop_assert!(sigma.exists());
        }
    }

    /// First-order identities on random twists over `M₂(Q)`.
    #[test]
    fn m2_twists_first_order(t in vector(12)) {
        let calc = Arc::new(GradedCalculus::universal(&Algebra::m2(), 2).unwrap());
        let conn = twisted("t", calc, &t).unwrap();
        prop_assert!(conn.check_right_leibniz().is_pass());
        let ctx = OpContext::new(&conn);
        let first = induced_first_order(&ctx).unwrap();
        prop_assert!(first.derivation_law.is_pass() && first.diagram.is_pass() && first.bimodule_linear.is_pass());
        match sigma_exists(&ctx, &first).unwrap() {
            SigmaOutcome::Exists(s) => prop_assert!(s.left_leibniz.is_pass()),
            SigmaOutcome::Absent { .. } => prop_assert!(false, "σ always exists for the universal calculus"),
        }
        let curv = conn.curvature_report(conn.forms()).unwrap();
        prop_assert!(curv.right_omega_linear.is_pass());
    }
}
