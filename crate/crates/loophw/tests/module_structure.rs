//! Structure of the worked modules: weight sector dimensions, monomial
//! bases, submodule closures, vanishing relations among the w-operators,
//! highest-weight-modulo-V verification, and network dimension sums.

use loophw::analysis::analyze;
use loophw::linalg::{vec_is_zero, vec_scale, vec_sub, Subspace};
use loophw::loop_ops::{rho, GenKind};
use loophw::network::{
    build_network, build_network_jobs, conjecture_relation_check, modulo_v_checks,
    source_is_exact_highest_weight, NetLabel,
};
use loophw::scalars::{int, pow_int};
use loophw::{HwParams, ModuleRep, Rat};

const CAP: usize = 1 << 12;

fn params(spec: &str) -> HwParams<Rat> {
    HwParams::parse_spec(spec).unwrap()
}

fn r(n: i64) -> Rat {
    int(n)
}

fn w_vec(m: &ModuleRep<Rat>, p: &HwParams<Rat>, label: &str) -> Vec<Rat> {
    let omega = m.omega().unwrap();
    NetLabel::parse(label, p.s())
        .unwrap()
        .omega_vector(m, p, &omega)
        .unwrap()
}

#[test]
fn weight_sectors_of_weyl_modules() {
    let p = params("2:2,3:1");
    let w = ModuleRep::weyl(&p, CAP).unwrap();
    let dims: Vec<(i64, usize)> = w
        .weight_decomposition()
        .iter()
        .map(|(k, s)| (*k, s.rank()))
        .collect();
    assert_eq!(dims, vec![(-3, 1), (-1, 3), (1, 3), (3, 1)]);

    let p = params("2:2,3:2");
    let w = ModuleRep::weyl(&p, CAP).unwrap();
    let dims: Vec<(i64, usize)> = w
        .weight_decomposition()
        .iter()
        .map(|(k, s)| (*k, s.rank()))
        .collect();
    assert_eq!(dims, vec![(-4, 1), (-2, 4), (0, 6), (2, 4), (4, 1)]);
}

#[test]
fn closure_of_w1_in_dim8_weyl() {
    let p = params("2:2,3:1");
    let w = ModuleRep::weyl(&p, CAP).unwrap();
    let w1 = w_vec(&w, &p, "1^1");
    assert!(!vec_is_zero(&w1));
    let closure = w.submodule_closure(std::slice::from_ref(&w1));
    // spanned by w_1 Omega and rho_2 w_1 Omega
    assert_eq!(closure.rank(), 2);
    let rho2 = rho(GenKind::Lower, &p, 2).unwrap();
    let rho2_w1 = w.act_combo(&rho2, &w1);
    assert!(closure.contains(&w1));
    assert!(closure.contains(&rho2_w1));
    assert!(!vec_is_zero(&rho2_w1));
    // rho_1 w_1 Omega = 0: the reduced module has no a_1 left
    let rho1 = rho(GenKind::Lower, &p, 1).unwrap();
    assert!(vec_is_zero(&w.act_combo(&rho1, &w1)));
    // quotient by it is the 6-dimensional irreducible
    let q = w.quotient(&closure).unwrap();
    assert_eq!(q.dim(), 6);
    let omega_q = q.omega().unwrap();
    let report = analyze(&q, &omega_q, &p).unwrap();
    assert!(report.criterion_holds && report.oracle_irreducible);
}

#[test]
fn singular_vectors_locate_w1() {
    let p = params("2:2,3:1");
    let w = ModuleRep::weyl(&p, CAP).unwrap();
    let sing = w.singular_vectors();
    // top line plus the singular line at weight 1
    let weights: Vec<i64> = sing.iter().map(|(w, _)| *w).collect();
    assert_eq!(weights, vec![3, 1]);
    let w1 = w_vec(&w, &p, "1^1");
    assert!(sing[1].1.contains(&w1));

    let packed = ModuleRep::packed(&p, CAP).unwrap();
    let sing = packed.singular_vectors();
    assert_eq!(sing.len(), 1);
    assert_eq!(sing[0].0, 3);
    assert_eq!(sing[0].1.rank(), 1);
}

#[test]
fn monomial_basis_of_dim8_weyl() {
    let p = params("2:2,3:1");
    let w = ModuleRep::weyl(&p, CAP).unwrap();
    let omega = w.omega().unwrap();
    let rho1 = rho(GenKind::Lower, &p, 1).unwrap();
    let rho2 = rho(GenKind::Lower, &p, 2).unwrap();
    let w1 = w_vec(&w, &p, "1^1");
    let act = |c: &loophw::LoopCombo<Rat>, v: &[Rat]| w.act_combo(c, v);

    // the eight sector basis vectors
    let r1o = act(&rho1, &omega);
    let r2o = act(&rho2, &omega);
    let vectors = vec![
        omega.clone(),
        r1o.clone(),
        r2o.clone(),
        w1.clone(),
        act(&rho1, &r1o),
        act(&rho1, &r2o),
        act(&rho2, &w1),
        act(&rho1, &act(&rho1, &r2o)),
    ];
    let mut span = Subspace::new(w.dim());
    for v in &vectors {
        assert!(!vec_is_zero(v));
        assert!(span.insert(v.clone()), "monomial basis must be independent");
    }
    assert_eq!(span.rank(), 8);

    // nilpotency: rho_1^3 and w_1^2 kill Omega exactly; rho_2^2 Omega only
    // vanishes modulo the proper submodule generated by w_1 Omega, where the
    // modulo-V criterion holds
    assert!(vec_is_zero(&w.apply_divided(&rho1, 3, &omega)));
    let w1_op = NetLabel::parse("1^1", 2).unwrap();
    let w1w1 = w1_op.omega_vector(&w, &p, &w1).unwrap();
    assert!(vec_is_zero(&w1w1));
    let rho2_sq = w.apply_divided(&rho2, 2, &omega);
    assert!(!vec_is_zero(&rho2_sq));
    let v_sub = w.submodule_closure(std::slice::from_ref(&w1));
    assert!(v_sub.contains(&rho2_sq));
}

#[test]
fn w_relations_in_dim16_weyl() {
    let p = params("2:2,3:2");
    let w = ModuleRep::weyl(&p, CAP).unwrap();
    let omega = w.omega().unwrap();
    let (a1, a2) = (r(2), r(3));
    let a12 = a1 - a2;

    let w1 = w_vec(&w, &p, "1^1");
    let w2 = w_vec(&w, &p, "2^1");
    let w1w2 = w_vec(&w, &p, "1^1 2^1");
    assert!(!vec_is_zero(&w1) && !vec_is_zero(&w2) && !vec_is_zero(&w1w2));

    // w1 w2 Omega = a12^2 rho_1 w_1 Omega = a12^2 rho_2 w_2 Omega
    let rho1 = rho(GenKind::Lower, &p, 1).unwrap();
    let rho2 = rho(GenKind::Lower, &p, 2).unwrap();
    let c = a12.clone() * a12.clone();
    assert_eq!(w1w2, vec_scale(&w.act_combo(&rho1, &w1), &c));
    assert_eq!(w1w2, vec_scale(&w.act_combo(&rho2, &w2), &c));

    // squares vanish
    let l1 = NetLabel::parse("1^1", 2).unwrap();
    let l2 = NetLabel::parse("2^1", 2).unwrap();
    assert!(vec_is_zero(&l1.omega_vector(&w, &p, &w1).unwrap()));
    assert!(vec_is_zero(&l2.omega_vector(&w, &p, &w2).unwrap()));

    // the sixteen monomial vectors of the sector table are independent
    let act = |c: &loophw::LoopCombo<Rat>, v: &[Rat]| w.act_combo(c, v);
    let r1o = act(&rho1, &omega);
    let r2o = act(&rho2, &omega);
    let r1r2 = act(&rho1, &r2o);
    let vectors = vec![
        omega.clone(),
        r1o.clone(),
        r2o.clone(),
        w1.clone(),
        w2.clone(),
        act(&rho1, &r1o),
        r1r2.clone(),
        act(&rho2, &r2o),
        act(&rho2, &w1),
        act(&rho1, &w2),
        w1w2.clone(),
        act(&rho1, &r1r2),
        act(&rho2, &r1r2),
        act(&rho2, &act(&rho2, &w1)),
        act(&rho1, &act(&rho1, &w2)),
        act(&rho1, &act(&rho1, &act(&rho2, &r2o))),
    ];
    let mut span = Subspace::new(16);
    for v in &vectors {
        assert!(span.insert(v.clone()));
    }
    assert_eq!(span.rank(), 16);
}

#[test]
fn modulo_v_reports_pass_on_worked_networks() {
    for spec in ["2:2,3:2", "2:3,3:3", "2:5,3:1"] {
        let p = params(spec);
        let w = ModuleRep::weyl(&p, CAP).unwrap();
        let graph = build_network(&p, Some(&w)).unwrap();
        for label in graph.vertices.keys() {
            let report = modulo_v_checks(&w, &p, label).unwrap();
            assert!(
                report.all_passed(),
                "{spec} label {label}: {:?}",
                report
                    .failures()
                    .iter()
                    .map(|f| format!("{}: {}", f.name, f.detail))
                    .collect::<Vec<_>>()
            );
        }
    }
}

#[test]
fn maximal_vectors_are_exactly_highest_weight() {
    for spec in ["2:2", "2:2,3:1", "2:2,3:2", "2:3,3:3", "2:5,3:1"] {
        let p = params(spec);
        let w = ModuleRep::weyl(&p, CAP).unwrap();
        assert!(
            source_is_exact_highest_weight(&w, &p).unwrap(),
            "source of {spec}"
        );
    }
}

#[test]
fn staircase_vectors_have_shifted_eigenvalues() {
    // products w_{j^1} w_{j^3} ... are highest weight with d_n - 2 l a_j^n
    let p = params("2:5,3:1");
    let w = ModuleRep::weyl(&p, CAP).unwrap();
    for (label, ell) in [("1^1", 1i64), ("1^1 1^3", 2)] {
        let v = w_vec(&w, &p, label);
        assert!(!vec_is_zero(&v));
        for n in -2..=8i64 {
            assert!(
                vec_is_zero(&w.act_gen(GenKind::Raise, n, &v)),
                "{label} n={n}"
            );
            let hv = w.act_gen(GenKind::Cartan, n, &v);
            let expected = p.d(n) - r(2 * ell) * pow_int(&r(2), n);
            assert!(
                vec_is_zero(&vec_sub(&hv, &vec_scale(&v, &expected))),
                "{label} Cartan n={n}"
            );
        }
    }
}

#[test]
fn network_sums_match_weyl_dimension() {
    for spec in ["2:2", "2:4", "2:2,3:1", "2:3,3:1", "2:2,3:2", "2:2,3:1,5:1"] {
        let p = params(spec);
        let w = ModuleRep::weyl(&p, CAP).unwrap();
        let graph = build_network(&p, Some(&w)).unwrap();
        assert!(
            graph.discrepancies.is_empty(),
            "{spec}: {:?}",
            graph.discrepancies
        );
        assert_eq!(
            graph.total_quotient_dim(),
            1usize << p.r(),
            "network sum for {spec}"
        );
    }
}

#[test]
fn maximal_vector_generates_reduced_irreducible() {
    // closure of the source vector is irreducible with multiplicities
    // m_j - 2 l_j^max
    let p = params("2:3,3:3");
    let w = ModuleRep::weyl(&p, CAP).unwrap();
    let src_vec = w_vec(&w, &p, "1^1 2^1");
    let closure = w.submodule_closure(&[src_vec.clone()]);
    assert_eq!(closure.rank(), 4, "(3+1-2)(3+1-2)");
    let reduced = params("2:1,3:1");
    let restricted = w.restrict(&closure).unwrap();
    let omega_r = ModuleRep::<Rat>::restrict_vector(&closure, &src_vec).unwrap();
    let report = analyze(&restricted, &omega_r, &reduced).unwrap();
    assert!(report.criterion_holds && report.oracle_irreducible);
    assert_eq!(report.actual_dim, 4);
}

#[test]
fn network_sum_at_rank_eight() {
    let p = params("2:4,3:4");
    let w = ModuleRep::weyl(&p, CAP).unwrap();
    let graph = build_network(&p, Some(&w)).unwrap();
    assert!(graph.discrepancies.is_empty(), "{:?}", graph.discrepancies);
    assert_eq!(graph.vertices.len(), 49);
    assert_eq!(graph.total_quotient_dim(), 256);
}

#[test]
fn cut_extremes() {
    let p = params("2:3,3:3");
    let w = ModuleRep::weyl(&p, CAP).unwrap();
    let graph = build_network(&p, Some(&w)).unwrap();
    // keeping everything: the whole Weyl dimension
    assert_eq!(
        graph
            .reducible_dims(&std::collections::BTreeSet::new())
            .unwrap(),
        64
    );
    // keeping only the end point: the irreducible dimension
    let mut cut = std::collections::BTreeSet::new();
    cut.insert(NetLabel::parse("1^2", 2).unwrap());
    cut.insert(NetLabel::parse("2^2", 2).unwrap());
    assert_eq!(graph.reducible_dims(&cut).unwrap(), 16);
    // the end point itself cannot be declared zero
    let mut bad = std::collections::BTreeSet::new();
    bad.insert(NetLabel::parse("∅", 2).unwrap());
    assert!(graph.reducible_dims(&bad).is_err());
    // unknown labels are rejected
    let mut missing = std::collections::BTreeSet::new();
    missing.insert(NetLabel::parse("1^9", 2).unwrap());
    assert!(graph.reducible_dims(&missing).is_err());
}

#[test]
fn network_jobs_deterministic() {
    let p = params("2:3,3:3");
    let w = ModuleRep::weyl(&p, CAP).unwrap();
    let sequential = build_network_jobs(&p, Some(&w), 1).unwrap();
    let parallel = build_network_jobs(&p, Some(&w), 4).unwrap();
    assert_eq!(sequential.to_json(), parallel.to_json());
}

#[test]
fn conjectured_relations_status_on_deep_multiplicity() {
    // The quadratic w-relations hold for every n below the multiplicity.
    // At n = m_j the k = m_j term names an operator removing m_j + 1
    // copies, which has no sub-multiset meaning; with that term absent the
    // sum does not vanish. The boundary status is pinned as measured here,
    // not assumed: vanishing explanations only ever draw on n < m_j.
    for (spec, j, mj) in [("2:5,3:1", 1usize, 5usize), ("2:2,3:2", 1, 2), ("2:3,3:3", 2, 3)] {
        let p = params(spec);
        let w = ModuleRep::weyl(&p, CAP).unwrap();
        let omega = w.omega().unwrap();
        for n in 0..mj {
            assert!(
                conjecture_relation_check(&w, &omega, &p, j, n).unwrap(),
                "{spec} relation at n = {n}"
            );
        }
        assert!(
            !conjecture_relation_check(&w, &omega, &p, j, mj).unwrap(),
            "{spec} boundary n = {mj}"
        );
    }
}

#[test]
fn quotient_rejects_non_invariant_subspace() {
    let p = params("2:2,3:1");
    let w = ModuleRep::weyl(&p, CAP).unwrap();
    let mut sub = Subspace::new(w.dim());
    let mut v = vec![r(0); w.dim()];
    v[1] = r(1);
    sub.insert(v);
    assert!(w.quotient(&sub).is_err());
}

#[test]
fn eval_analysis_reports_doubled_parameter() {
    // the 3-dimensional evaluation module at a = 2 carries â = (2, 2)
    let p = params("2:2");
    let m = ModuleRep::eval_module(r(2), 2).unwrap();
    let omega = m.omega().unwrap();
    let report = analyze(&m, &omega, &p).unwrap();
    for (k, v) in &report.d {
        assert_eq!(*v, r(2) * pow_int(&r(2), *k));
    }
    assert_eq!(report.poly.coeffs(), &[r(1), r(-4), r(4)]);
}
