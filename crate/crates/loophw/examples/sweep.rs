use loophw::analysis::analyze;
use loophw::network::NetLabel;
use loophw::scalars::ratio;
use loophw::{HwParams, ModuleRep, Rat};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn random_params(rng: &mut StdRng, r_max: usize) -> HwParams<Rat> {
    loop {
        let s = rng.gen_range(1..=3usize);
        let mut entries: Vec<(Rat, usize)> = Vec::new();
        let mut total = 0usize;
        for _ in 0..s {
            let m = rng.gen_range(1..=4usize);
            if total + m > r_max {
                break;
            }
            total += m;
            loop {
                let num = rng.gen_range(-12..=12i64);
                let den = rng.gen_range(1..=5i64);
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

fn main() {
    let t0 = std::time::Instant::now();
    let mut rng = StdRng::seed_from_u64(0xFEEDBEEF);
    let mut cases = 0;
    let mut irr = 0;
    while cases < 500 {
        let p = random_params(&mut rng, 6);
        if 1usize << p.r() > 64 {
            continue;
        }
        let module = match rng.gen_range(0..4) {
            0 => ModuleRep::packed(&p, 64).unwrap(),
            1 => ModuleRep::weyl(&p, 64).unwrap(),
            2 => {
                let mut factors = Vec::new();
                for (a, m) in p.entries() {
                    let mut left = *m;
                    while left > 0 {
                        let part = rng.gen_range(1..=left);
                        factors.push(ModuleRep::eval_module(a.clone(), part).unwrap());
                        left -= part;
                    }
                }
                ModuleRep::tensor_capped(&factors, 64).unwrap()
            }
            _ => {
                let weyl = ModuleRep::weyl(&p, 64).unwrap();
                let omega = weyl.omega().unwrap();
                let mut lists = vec![Vec::new(); p.s()];
                let mut any = false;
                for (j0, m) in p.multiplicities().iter().enumerate() {
                    if *m >= 2 && rng.gen_bool(0.6) {
                        lists[j0].push(rng.gen_range(1..*m));
                        any = true;
                    }
                }
                if !any {
                    continue;
                }
                let label = NetLabel::new(lists);
                let gen = label.omega_vector(&weyl, &p, &omega).unwrap();
                let sub = weyl.submodule_closure(&[gen]);
                weyl.quotient(&sub).unwrap()
            }
        };
        let omega = module.omega().unwrap();
        let report = analyze(&module, &omega, &p).unwrap();
        assert_eq!(
            report.criterion_holds, report.oracle_irreducible,
            "DISAGREEMENT at {p} dim {}",
            module.dim()
        );
        if report.criterion_holds {
            irr += 1;
            assert_eq!(report.actual_dim, report.dim_formula);
        }
        cases += 1;
    }
    println!(
        "sweep: {cases} cases, {irr} irreducible, 0 disagreements [{}s]",
        t0.elapsed().as_secs()
    );
}
