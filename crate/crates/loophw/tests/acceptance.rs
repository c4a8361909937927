//! Acceptance suite: one test per criterion, each printing a pass line.
//! Everything is exact arithmetic; the stated wall-clock budgets are asserted.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use loophw::analysis::analyze;
use loophw::linalg::vec_is_zero;
use loophw::network::{build_network, NetLabel};
use loophw::scalars::ratio;
use loophw::verify::{builtin_zoo, identity_suite, structural_suite, VerifyOptions};
use loophw::{HwParams, ModuleRep, Rat};

const CAP: usize = 1 << 12;

fn params(spec: &str) -> HwParams<Rat> {
    HwParams::parse_spec(spec).unwrap()
}

#[test]
fn criterion_1_three_parameter_modules() {
    let t0 = Instant::now();
    let p = params("2:2,3:1");

    let weyl = ModuleRep::weyl(&p, CAP).unwrap();
    assert_eq!(weyl.dim(), 8);
    let omega = weyl.omega().unwrap();
    let report = analyze(&weyl, &omega, &p).unwrap();
    assert_eq!(report.actual_dim, 8);
    assert!(!report.criterion_holds, "Weyl module must be reducible");
    assert!(!report.oracle_irreducible);
    let w1 = NetLabel::parse("1^1", 2)
        .unwrap()
        .omega_vector(&weyl, &p, &omega)
        .unwrap();
    assert!(!vec_is_zero(&w1), "w_1 Omega must not vanish");

    let packed = ModuleRep::packed(&p, CAP).unwrap();
    assert_eq!(packed.dim(), 6);
    let omega = packed.omega().unwrap();
    let report = analyze(&packed, &omega, &p).unwrap();
    assert_eq!(report.actual_dim, 6);
    assert!(report.criterion_holds);
    assert!(report.oracle_irreducible);

    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "budget exceeded: {elapsed:?}");
    println!(
        "PASS criterion 1: Weyl(a,a,b) dim 8 reducible with w1*Omega != 0; packed dim 6 irreducible [{} ms]",
        elapsed.as_millis()
    );
}

#[test]
fn criterion_2_four_parameter_dimensions() {
    let t0 = Instant::now();
    let p = params("2:2,3:2");
    let mut got = Vec::new();

    let cases: &[(Option<&str>, usize)] = &[
        (None, 16),
        (Some("1^1 2^1"), 15),
        (Some("2^1"), 12),
        (Some("1^1"), 12),
    ];
    for (quotient, expected) in cases {
        let weyl = ModuleRep::weyl(&p, CAP).unwrap();
        let module = match quotient {
            None => weyl,
            Some(spec) => {
                let omega = weyl.omega().unwrap();
                let label = NetLabel::parse(spec, 2).unwrap();
                let gen = label.omega_vector(&weyl, &p, &omega).unwrap();
                let sub = weyl.submodule_closure(&[gen]);
                weyl.quotient(&sub).unwrap()
            }
        };
        let omega = module.omega().unwrap();
        let report = analyze(&module, &omega, &p).unwrap();
        assert_eq!(report.actual_dim, *expected, "case {quotient:?}");
        assert_eq!(
            report.criterion_holds, report.oracle_irreducible,
            "criterion-oracle equivalence in case {quotient:?}"
        );
        got.push(report.actual_dim);
    }
    let packed = ModuleRep::packed(&p, CAP).unwrap();
    let omega = packed.omega().unwrap();
    let report = analyze(&packed, &omega, &p).unwrap();
    assert_eq!(report.actual_dim, 9);
    assert!(report.criterion_holds && report.oracle_irreducible);
    got.push(9);

    assert_eq!(got, vec![16, 15, 12, 12, 9]);
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "budget exceeded: {elapsed:?}");
    println!(
        "PASS criterion 2: dimensions 16, 15, 12, 12, 9 by exact rank [{} ms]",
        elapsed.as_millis()
    );
}

#[test]
fn criterion_3_network_33() {
    let t0 = Instant::now();
    let p = params("2:3,3:3");
    let weyl = ModuleRep::weyl(&p, CAP).unwrap();
    assert_eq!(weyl.dim(), 64);
    let graph = build_network(&p, Some(&weyl)).unwrap();

    assert_eq!(graph.vertices.len(), 9, "nine vertices");
    assert!(graph.discrepancies.is_empty(), "{:?}", graph.discrepancies);

    let mut dims: Vec<usize> = graph
        .vertices
        .values()
        .map(|v| v.exact_dim.unwrap())
        .collect();
    dims.sort_unstable();
    assert_eq!(dims, vec![4, 4, 4, 4, 8, 8, 8, 8, 16]);
    assert_eq!(graph.total_quotient_dim(), 64);

    // the eight listed transitions, twelve edges in all
    let expected_edges: BTreeSet<(String, String)> = [
        ("1^1 2^1", "1^2 2^1"),
        ("1^1 2^1", "1^1 2^2"),
        ("1^2 2^1", "2^1"),
        ("1^2 2^1", "1^2 2^2"),
        ("1^1 2^2", "1^2 2^2"),
        ("1^1 2^2", "1^1"),
        ("1^2 2^2", "2^2"),
        ("1^2 2^2", "1^2"),
        ("1^1", "1^2"),
        ("2^1", "2^2"),
        ("1^2", "∅"),
        ("2^2", "∅"),
    ]
    .iter()
    .map(|(a, b)| (a.to_string(), b.to_string()))
    .collect();
    let got_edges: BTreeSet<(String, String)> = graph
        .edges
        .iter()
        .map(|e| (e.parent.to_string(), e.child.to_string()))
        .collect();
    assert_eq!(got_edges, expected_edges, "adjacency matches the listing");

    // the 24-dimensional reducible module from the worked cut
    let mut cut = BTreeSet::new();
    for s in ["1^1", "1^2 2^2", "2^2"] {
        cut.insert(NetLabel::parse(s, 2).unwrap());
    }
    assert_eq!(graph.reducible_dims(&cut).unwrap(), 24);

    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "budget exceeded: {elapsed:?}");
    println!(
        "PASS criterion 3: m=(3,3) network, 9 vertices, dims sum 64, cut gives 24 [{} ms]",
        elapsed.as_millis()
    );
}

#[test]
fn criterion_4_network_51() {
    let t0 = Instant::now();
    let p = params("2:5,3:1");
    let weyl = ModuleRep::weyl(&p, CAP).unwrap();
    assert_eq!(weyl.dim(), 64);
    let graph = build_network(&p, Some(&weyl)).unwrap();
    assert!(graph.discrepancies.is_empty(), "{:?}", graph.discrepancies);

    let mut by_dim: Vec<usize> = graph
        .vertices
        .values()
        .map(|v| v.exact_dim.unwrap())
        .filter(|d| *d > 0)
        .collect();
    by_dim.sort_unstable();
    assert_eq!(by_dim, vec![4, 4, 4, 4, 4, 8, 8, 8, 8, 12]);
    assert_eq!(graph.total_quotient_dim(), 64);

    let vanished: Vec<(String, Option<(usize, usize)>)> = graph
        .vertices
        .values()
        .filter(|v| v.vanished)
        .map(|v| (v.label.to_string(), v.explained))
        .collect();
    assert_eq!(vanished.len(), 2);
    assert_eq!(vanished[0].0, "1^2 1^3");
    assert_eq!(vanished[1].0, "1^3 1^3");
    for (label, explained) in &vanished {
        assert!(
            explained.is_some(),
            "vanishing at {label} must be explained by a conjectured relation"
        );
    }

    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "budget exceeded: {elapsed:?}");
    println!(
        "PASS criterion 4: m=(5,1) network, dims 4x5 + 8x4 + 12 = 64 with explained vanishings [{} ms]",
        elapsed.as_millis()
    );
}

fn random_params(rng: &mut StdRng, r_max: usize) -> HwParams<Rat> {
    loop {
        let s = rng.gen_range(1..=3usize);
        let mut entries: Vec<(Rat, usize)> = Vec::new();
        let mut total = 0usize;
        for _ in 0..s {
            let m = rng.gen_range(1..=3usize);
            if total + m > r_max {
                break;
            }
            total += m;
            loop {
                let num = rng.gen_range(-9..=9i64);
                let den = rng.gen_range(1..=4i64);
                if num == 0 {
                    continue;
                }
                let a: Rat = ratio(num, den);
                if entries.iter().all(|(b, _)| *b != a) {
                    entries.push((a, m));
                    break;
                }
            }
        }
        if !entries.is_empty() {
            return HwParams::new(entries).unwrap();
        }
    }
}

/// Randomized construction: packed, Weyl, an arbitrary grouping of the
/// multiplicities into evaluation factors, or a quotient of the Weyl module
/// by a random w-monomial submodule.
fn random_module(rng: &mut StdRng, p: &HwParams<Rat>) -> Option<ModuleRep<Rat>> {
    match rng.gen_range(0..4) {
        0 => ModuleRep::packed(p, 64).ok(),
        1 => ModuleRep::weyl(p, 64).ok(),
        2 => {
            let mut factors = Vec::new();
            for (a, m) in p.entries() {
                let mut left = *m;
                while left > 0 {
                    let part = rng.gen_range(1..=left);
                    factors.push(ModuleRep::eval_module(a.clone(), part).ok()?);
                    left -= part;
                }
            }
            ModuleRep::tensor_capped(&factors, 64).ok()
        }
        _ => {
            let weyl = ModuleRep::weyl(p, 64).ok()?;
            let omega = weyl.omega().ok()?;
            let mut lists = vec![Vec::new(); p.s()];
            let mut any = false;
            for (j0, m) in p.multiplicities().iter().enumerate() {
                if *m >= 2 && rng.gen_bool(0.6) {
                    lists[j0].push(rng.gen_range(1..*m));
                    any = true;
                }
            }
            if !any {
                return Some(weyl);
            }
            let label = NetLabel::new(lists);
            let gen = label.omega_vector(&weyl, p, &omega).ok()?;
            let sub = weyl.submodule_closure(&[gen]);
            weyl.quotient(&sub).ok()
        }
    }
}

#[test]
fn criterion_5_randomized_criterion_oracle_equivalence() {
    let t0 = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x10057);
    let mut cases = 0usize;
    let mut irreducible = 0usize;
    while cases < 60 {
        let p = random_params(&mut rng, 6);
        if 1usize << p.r() > 64 {
            continue;
        }
        let Some(module) = random_module(&mut rng, &p) else {
            continue;
        };
        let omega = module.omega().unwrap();
        let report = analyze(&module, &omega, &p).unwrap();
        assert_eq!(
            report.criterion_holds,
            report.oracle_irreducible,
            "criterion/oracle disagree on params {p} (module dim {})",
            module.dim()
        );
        if report.criterion_holds {
            irreducible += 1;
            assert_eq!(report.actual_dim, report.dim_formula);
        }
        cases += 1;
    }
    assert!(irreducible > 0, "sample must contain irreducible cases");
    assert!(
        irreducible < cases,
        "sample must contain reducible cases too"
    );
    println!(
        "PASS criterion 5: criterion == oracle on {cases} randomized constructions ({irreducible} irreducible) [{} ms]",
        t0.elapsed().as_millis()
    );
}

#[test]
fn criterion_6_identity_suite_on_zoo() {
    let t0 = Instant::now();
    let zoo = builtin_zoo::<Rat>(CAP).unwrap();
    assert!(
        zoo.iter().any(|e| e.module.dim() == 64),
        "zoo reaches dim 64"
    );
    let opts = VerifyOptions::default();
    let mut checks = 0usize;
    for entry in &zoo {
        for outcome in identity_suite(entry, &opts).unwrap() {
            assert!(
                outcome.passed,
                "{} / {}: {}",
                outcome.module, outcome.name, outcome.detail
            );
            checks += 1;
        }
    }
    println!(
        "PASS criterion 6: {checks} exact identity checks over {} modules [{} ms]",
        zoo.len(),
        t0.elapsed().as_millis()
    );
}

#[test]
fn criterion_7_structural_properties_on_zoo() {
    let t0 = Instant::now();
    let zoo = builtin_zoo::<Rat>(CAP).unwrap();
    let opts = VerifyOptions::default();
    let mut checks = 0usize;
    let mut irreducible_modules = 0usize;
    for entry in &zoo {
        let outcomes = structural_suite(entry, &opts).unwrap();
        if outcomes.iter().any(|o| o.name == "basis") {
            irreducible_modules += 1;
        }
        for outcome in outcomes {
            assert!(
                outcome.passed,
                "{} / {}: {}",
                outcome.module, outcome.name, outcome.detail
            );
            checks += 1;
        }
    }
    assert!(
        irreducible_modules >= 3,
        "the zoo must exercise the irreducible toolbox"
    );
    println!(
        "PASS criterion 7: {checks} structural checks, {irreducible_modules} irreducible instances [{} ms]",
        t0.elapsed().as_millis()
    );
}
