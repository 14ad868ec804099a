//! Worked examples checked against hand-rolled oracles.

mod common;

use std::sync::Arc;

use bimodconn::algebra::{Algebra, Module};
use bimodconn::calculus::{Generator, GradedCalculus};
use bimodconn::connection::*;
use bimodconn::fixtures::{fixture, search_twist};
use bimodconn::linalg::{add_vectors, sub_vectors, unit_vector, zero_vector, Vector};
use bimodconn::tensor::tensor_over_a;
use bimodconn::tensor_product::{analyze_tensor, degeneracy_submodules, AssociatedOutcome, NuOutcome, Route};
use bimodconn::universal::Universal;
use bimodconn::{q, Rational};

use common::{brute_degeneracy, same_subspace};

fn ints(v: &[i64]) -> Vector {
    v.iter().map(|&x| q(x, 1)).collect()
}

/// `(Σ x ⊗ y)·f = Σ x ⊗ yf` in `A ⊗ A`.
fn tensor_right(a: &Algebra, t: &[Rational], f: &[Rational]) -> Vector {
    let n = a.dim();
    let mut out = zero_vector(n * n);
    for (idx, c) in t.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let (x, y) = (idx / n, idx % n);
        let yf = a.mul(&unit_vector(n, y), f);
        for (j, z) in yf.iter().enumerate() {
            out[x * n + j] += c * z;
        }
    }
    out
}

/// `f ⊗ g` in `A ⊗ A`.
fn pure(f: &[Rational], g: &[Rational]) -> Vector {
    f.iter().flat_map(|x| g.iter().map(move |y| x * y)).collect()
}

/// `1 ⊗ f − f ⊗ 1`.
fn d_oracle(a: &Algebra, f: &[Rational]) -> Vector {
    sub_vectors(&pure(a.unit(), f), &pure(f, a.unit()))
}

fn universal(a: &Algebra) -> Arc<GradedCalculus> {
    Arc::new(GradedCalculus::universal(a, 3).unwrap())
}

/// Degree-1 class of `M ⊗ Ω¹_u` for `M = A`, as a tensor in `A ⊗ A`.
fn as_tensor(conn: &Connection, class: &[Rational]) -> Vector {
    conn.calculus().universal_model().expand(1, &conn.forms().lift(1, class))
}

#[test]
fn d_of_e1_over_a2() {
    let a = Algebra::a2();
    let calc = universal(&a);
    let d = calc.universal_model().expand(1, &calc.lift(1, &calc.d0(&ints(&[1, 0]))));
    assert_eq!(d, ints(&[0, -1, 1, 0]));
    assert_eq!(d, d_oracle(&a, &ints(&[1, 0])));
}

#[test]
fn nabla_hat_of_left_multiplication() {
    let a = Algebra::a2();
    let conn = Connection::exterior("d", universal(&a)).unwrap();
    let ctx = OpContext::new(&conn);
    let h = ctx.nabla_hat(&ctx.kappa0_basis(0).unwrap()).unwrap();
    assert_eq!(as_tensor(&conn, &h.matrix.col(1)), ints(&[0, -1, 0, 0]));
    let du = d_oracle(&a, &ints(&[1, 0]));
    for k in 0..2 {
        assert_eq!(as_tensor(&conn, &h.matrix.col(k)), tensor_right(&a, &du, &unit_vector(2, k)));
    }
    assert!(ctx.nabla_hat(&ctx.identity()).unwrap().is_zero());
}

/// For `∇ = d` on `A`, `κ₁(ω)(a) = ω·a` on every element of `Ω¹_u`.
#[test]
fn kappa1_is_right_multiplication_for_d() {
    for a in [Algebra::a2(), Algebra::m2()] {
        let n = a.dim();
        let conn = Connection::exterior("d", universal(&a)).unwrap();
        let ctx = OpContext::new(&conn);
        let first = induced_first_order(&ctx).unwrap();
        let uni = conn.calculus().universal_model();
        for w in 0..uni.dim(1) {
            let omega = unit_vector(uni.dim(1), w);
            let op = ctx.combine(1, &first.kappa1, &omega);
            for k in 0..n {
                let want = tensor_right(&a, &uni.expand(1, &omega), &unit_vector(n, k));
                assert_eq!(as_tensor(&conn, &op.matrix.col(k)), want);
            }
        }
        assert_eq!(first.kappa1_rank, n * n - n);
    }
}

#[test]
fn kappa1_of_e1_e2_over_a2() {
    let a = Algebra::a2();
    let conn = Connection::exterior("d", universal(&a)).unwrap();
    let ctx = OpContext::new(&conn);
    let first = induced_first_order(&ctx).unwrap();
    let w = conn.calculus().universal_model().from_tensor(1, &ints(&[0, 1, 0, 0])).unwrap();
    let op = ctx.combine(1, &first.kappa1, &w);
    assert_eq!(as_tensor(&conn, &op.matrix.col(0)), ints(&[0, 0, 0, 0]));
    assert_eq!(as_tensor(&conn, &op.matrix.col(1)), ints(&[0, 1, 0, 0]));
    assert_eq!(first.dim(), 2);
    assert!(first.kappa1_injective());
}

/// `Ω^{r+1}_u ≅ Ω^r_u ⊗_A Ω¹_u`, computed with a separate balanced tensor product.
#[test]
fn universal_dims_match_iterated_tensor_products() {
    for (a, top) in [(Algebra::a2(), 3), (Algebra::m2(), 2)] {
        let calc = universal(&a);
        let forms = calc.forms();
        let one = forms.as_module(1).unwrap();
        for r in 1..top {
            let bt = tensor_over_a(&forms.as_module(r).unwrap(), &one).unwrap();
            assert_eq!(bt.dim(), calc.dim(r + 1), "degree {}", r + 1);
        }
    }
    assert_eq!(universal(&Algebra::a2()).dims(), vec![2, 2, 2, 2]);
    assert_eq!(universal(&Algebra::m2()).dims(), vec![4, 12, 36, 108]);
}

#[test]
fn sigma_on_the_quotient_calculus() {
    let model = fixture("a2_flat_quotient").unwrap().validate(None).unwrap();
    let conn = model.connection("d").unwrap();
    let ctx = OpContext::new(conn);
    let first = induced_first_order(&ctx).unwrap();
    let w = conn.calculus().universal_model().from_tensor(1, &ints(&[0, 1, 0, 0])).unwrap();
    assert!(ctx.combine(1, &first.kappa1, &w).is_zero());
    match sigma_exists(&ctx, &first).unwrap() {
        SigmaOutcome::Exists(s) => {
            assert!(s.left_leibniz.is_pass());
            assert!(s.agrees_with_universal.is_pass());
        }
        SigmaOutcome::Absent { .. } => panic!("σ must exist on the quotient"),
    }
    assert_eq!(model.calculus.dims()[1], 1);
}

#[test]
fn twist_search_on_a2_finds_nothing() {
    let a = Algebra::a2();
    let uni = Universal::new(&a, 3).unwrap();
    let k = uni.from_tensor(1, &ints(&[0, 1, 0, 0])).unwrap();
    let calc = Arc::new(GradedCalculus::quotient(&uni, &[Generator { degree: 1, coords: k }]).unwrap());
    assert!(search_twist(&calc).is_err());
}

#[test]
fn twist_obstruction_persists_in_all_degrees() {
    let model = fixture("m2_twist").unwrap().validate(None).unwrap();
    let conn = &model.connections[0];
    let ctx = OpContext::new(conn);
    let first = induced_first_order(&ctx).unwrap();
    assert!(first.derivation_law.is_pass());
    let SigmaOutcome::Absent { witness, image } = sigma_exists(&ctx, &first).unwrap() else {
        panic!("σ must be absent on the twist");
    };
    assert!(conn.calculus().ideal(1).contains(&witness));
    assert!(image.iter().any(|x| !x.is_zero()));
    let hat = omega_hat_generate(&ctx).unwrap();
    let jq = j_ideal(&ctx, &hat).unwrap();
    let full = induced_full_calculus(&ctx, &hat, &jq).unwrap();
    let sf = sigma_full(&ctx, &jq, &full).unwrap();
    let (deg, w, _) = sf.obstruction.expect("full-degree σ absent");
    assert_eq!((deg, w), (1, witness));
    assert!(!sf.preceq_all.holds());
}

#[test]
fn flat_connection_has_trivial_j() {
    let a = Algebra::a2();
    let conn = Connection::exterior("d", universal(&a)).unwrap();
    let ctx = OpContext::new(&conn);
    let curv = conn.curvature_report(conn.forms()).unwrap();
    assert!(curv.flat);
    let hat = omega_hat_generate(&ctx).unwrap();
    assert_eq!(hat.dims()[1], 2);
    for i in 0..2 {
        assert!(ctx.nabla_hat_pow(&ctx.kappa0_basis(i).unwrap(), 2).unwrap().is_zero());
    }
    let jq = j_ideal(&ctx, &hat).unwrap();
    assert!(jq.is_trivial());
    assert_eq!(jq.omega_m_dims(), conn.forms().dims());
}

/// `∇̂²f̂ ≠ 0` on the free rank-2 module, yet it vanishes on `Ω(M)`.
#[test]
fn grass_curvature_dies_on_the_quotient() {
    let model = fixture("m2_grass").unwrap().validate(None).unwrap();
    let conn = &model.connections[0];
    let ctx = OpContext::new(conn);
    let hat = omega_hat_generate(&ctx).unwrap();
    let jq = j_ideal(&ctx, &hat).unwrap();
    assert!(jq.dims()[2] > 0);
    let q = OpContext::on(conn, &jq.omega_m);
    let mut upstairs = 0;
    for i in 0..4 {
        let f = ctx.kappa0_basis(i).unwrap();
        let sq = ctx.nabla_hat_pow(&f, 2).unwrap();
        if !sq.is_zero() {
            upstairs += 1;
        }
        assert!(q.transport(conn.forms(), &sq).is_zero());
    }
    assert!(upstairs > 0);
}

#[test]
fn degeneracy_of_column_modules() {
    let model = fixture("a2_degenerate").unwrap().validate(None).unwrap();
    let m = &model.modules["M"];
    let n2 = &model.modules["N2"];
    let n = &model.modules["N"];
    let deg = degeneracy_submodules(n2, m).unwrap();
    assert_eq!((deg.n0.dim(), deg.m0.dim()), (1, 1));
    let deg = degeneracy_submodules(n, m).unwrap();
    assert_eq!((deg.n0.dim(), deg.m0.dim()), (1, 0));
    let (n0, m0) = brute_degeneracy(n, m);
    assert!(same_subspace(&deg.n0, &n0) && same_subspace(&deg.m0, &m0));
    let regular = Module::regular(&model.algebra);
    let deg = degeneracy_submodules(&regular, &regular).unwrap();
    assert_eq!((deg.n0.dim(), deg.m0.dim()), (0, 0));
    let zero = Module::zero(&model.algebra, true);
    assert_eq!(degeneracy_submodules(&regular, &zero).unwrap().n0.dim(), 2);
}

#[test]
fn leaky_connection_leaves_n0() {
    let model = fixture("a2_degenerate").unwrap().validate(None).unwrap();
    let m = model.connection("nablaM").unwrap();
    let ctx = OpContext::new(m);
    let first = induced_first_order(&ctx).unwrap();
    let sigma = sigma_exists(&ctx, &first).unwrap();
    let hat = omega_hat_generate(&ctx).unwrap();
    let jq = j_ideal(&ctx, &hat).unwrap();
    let full = induced_full_calculus(&ctx, &hat, &jq).unwrap();
    for (name, compatible) in [("compatible", true), ("leaky", false)] {
        let t = analyze_tensor(model.connection(name).unwrap(), m, &first, &sigma, &full, Route::Both).unwrap();
        assert_eq!(t.compat_n.is_pass(), compatible, "{name}");
        if !compatible {
            assert!(t.compat_n.witness().and_then(|w| w.residual.as_ref()).is_some());
        }
    }
}

/// With `ν̂` invertible in degree 1 and the identity in degree 0, `∇′_M = ν̂¹∘∇′`.
#[test]
fn associated_connection_is_conjugate() {
    let model = fixture("a2_flat").unwrap().validate(None).unwrap();
    let d = model.connection("d").unwrap();
    let dn = model.connection("dN").unwrap();
    let ctx = OpContext::new(d);
    let first = induced_first_order(&ctx).unwrap();
    let sigma = sigma_exists(&ctx, &first).unwrap();
    let hat = omega_hat_generate(&ctx).unwrap();
    let jq = j_ideal(&ctx, &hat).unwrap();
    let full = induced_full_calculus(&ctx, &hat, &jq).unwrap();
    let t = analyze_tensor(dn, d, &first, &sigma, &full, Route::Both).unwrap();
    let NuOutcome::Built(nu) = &t.nu else { panic!("ν̂ must exist") };
    assert_eq!(nu.maps[0], bimodconn::linalg::Matrix::identity(2));
    assert_eq!(nu.maps[1].rank(), 2);
    let AssociatedOutcome::Exists(asc) = &t.associated else { panic!("∇′_M must exist") };
    assert_eq!(asc.connection.matrix(), &nu.maps[1].mul(dn.matrix()));
    assert!(asc.square.is_pass());
    let (o, s) = (t.original.unwrap(), t.sigma_route.unwrap());
    assert_eq!(o.matrix, s.matrix);
    assert!(o.right_leibniz.is_pass());
}

/// `f ⊗ g ↦ (h f) ⊗ g` in `A ⊗ A`.
fn tensor_left(a: &Algebra, h: &[Rational], t: &[Rational]) -> Vector {
    let n = a.dim();
    let mut out = zero_vector(n * n);
    for (idx, c) in t.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let (x, y) = (idx / n, idx % n);
        for (i, z) in a.mul(h, &unit_vector(n, x)).iter().enumerate() {
            out[i * n + y] += c * z;
        }
    }
    out
}

/// `∇(fa) = (df)·a + f·∇a` for `∇ = d` on `A2`, with both sides expanded by hand.
#[test]
fn left_leibniz_by_hand() {
    let a = Algebra::a2();
    let conn = Connection::exterior("d", universal(&a)).unwrap();
    for f in 0..2 {
        for k in 0..2 {
            let (ef, ek) = (unit_vector(2, f), unit_vector(2, k));
            let lhs = as_tensor(&conn, &conn.apply(&a.mul(&ef, &ek)));
            let sigma = tensor_right(&a, &d_oracle(&a, &ef), &ek);
            let f_nabla_a = tensor_left(&a, &ef, &d_oracle(&a, &ek));
            assert_eq!(lhs, add_vectors(&sigma, &f_nabla_a));
        }
    }
}
