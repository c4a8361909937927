//! Exact verification of the algebra identities and structural properties on
//! a zoo of concrete modules: the defining relations, the parameterized
//! commutation relations and their divided-power forms, the recursive
//! lemmas acting on the highest weight vector, the reduction relations, and
//! the irreducible-case structure (basis, inner products, vanishing powers).

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::analysis::{
    analyze, basis_check, check_reduction, check_reduction_shifted, eigen_scalar,
    inner_product_check, power_vanishing_check,
};
use crate::linalg::{vec_is_zero, vec_scale, Matrix};
use crate::loop_ops::{rho, w_extended, GenKind, LoopCombo, ParamSeq};
use crate::rep::ModuleRep;
use crate::scalars::{binomial_extended, factorial, int, pow_int, ratio, Scalar};
use crate::{HwParams, Result};

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub module: String,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn ok(module: &str, name: &str) -> Self {
        CheckOutcome {
            module: module.into(),
            name: name.into(),
            passed: true,
            detail: String::new(),
        }
    }

    fn fail(module: &str, name: &str, detail: String) -> Self {
        CheckOutcome {
            module: module.into(),
            name: name.into(),
            passed: false,
            detail,
        }
    }

    fn from(module: &str, name: &str, failure: Option<String>) -> Self {
        match failure {
            None => CheckOutcome::ok(module, name),
            Some(d) => CheckOutcome::fail(module, name, d),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    /// Margin around `[0, r]` for degree windows.
    pub window: i64,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            window: 2,
            seed: 0xC0FFEE,
        }
    }
}

pub struct ZooEntry<T> {
    pub name: String,
    pub params: HwParams<T>,
    pub module: ModuleRep<T>,
}

/// The built-in module zoo: evaluation and Weyl modules over integral,
/// fractional and negative parameters, plus a quotient, up to dimension 64.
pub fn builtin_zoo<T: Scalar>(cap: usize) -> Result<Vec<ZooEntry<T>>> {
    let mut out: Vec<ZooEntry<T>> = Vec::new();
    let specs: &[(&str, &str, bool)] = &[
        ("packed 2:2", "2:2", false),
        ("weyl 2:2", "2:2", true),
        ("weyl 2:1,3:1", "2:1,3:1", true),
        ("packed 2:2,3:1", "2:2,3:1", false),
        ("weyl 2:2,3:1", "2:2,3:1", true),
        ("packed 2:2,3:2", "2:2,3:2", false),
        ("weyl 2:2,3:2", "2:2,3:2", true),
        ("weyl 1/2:2,5:1", "1/2:2,5:1", true),
        ("weyl -2:2,3:1", "-2:2,3:1", true),
        ("packed 2:2,3:1,5:1", "2:2,3:1,5:1", false),
        ("weyl 2:2,3:1,5:1", "2:2,3:1,5:1", true),
        ("weyl 2:3,3:3", "2:3,3:3", true),
        ("weyl 2:5,3:1", "2:5,3:1", true),
    ];
    for (name, spec, weyl) in specs {
        let params = HwParams::<T>::parse_spec(spec)?;
        let dim_needed = if *weyl {
            1usize << params.r()
        } else {
            crate::analysis::dim_formula(&params)
        };
        if dim_needed > cap {
            continue;
        }
        let module = if *weyl {
            ModuleRep::weyl(&params, cap)?
        } else {
            ModuleRep::packed(&params, cap)?
        };
        out.push(ZooEntry {
            name: (*name).into(),
            params,
            module,
        });
    }
    // a quotient entry: Weyl(2:2,3:2) modulo the closure of w_1 Omega
    if 16 <= cap {
        let params = HwParams::<T>::parse_spec("2:2,3:2")?;
        let weyl = ModuleRep::weyl(&params, cap)?;
        let omega = weyl.omega()?;
        let label = crate::network::NetLabel::parse("1^1", params.s())?;
        let gen = label.omega_vector(&weyl, &params, &omega)?;
        let sub = weyl.submodule_closure(&[gen]);
        let module = weyl.quotient(&sub)?;
        out.push(ZooEntry {
            name: "quotient (2:2,3:2)/w1".into(),
            params,
            module,
        });
    }
    Ok(out)
}

fn rand_scalar<T: Scalar>(rng: &mut StdRng, nonzero: bool) -> T {
    loop {
        let num = rng.gen_range(-6..=6i64);
        let den = rng.gen_range(1..=3i64);
        let v: T = ratio(num, den);
        if !nonzero || !v.is_zero() {
            return v;
        }
    }
}

fn rand_seq<T: Scalar>(rng: &mut StdRng, len: usize) -> ParamSeq<T> {
    ParamSeq::new((0..len).map(|_| rand_scalar(rng, false)).collect())
}

fn divided_powers<T: Scalar>(m: &Matrix<T>, n: usize) -> Vec<Matrix<T>> {
    let mut out = vec![Matrix::identity(m.n_rows())];
    for i in 1..=n {
        let next = out[i - 1].mul(m).scaled(&(T::one() / int::<T>(i as i64)));
        out.push(next);
    }
    out
}

/// `(X)^(n) v` recomputed from scratch by `n` applications and division.
fn divided_apply<T: Scalar>(m: &ModuleRep<T>, combo: &LoopCombo<T>, n: usize, v: &[T]) -> Vec<T> {
    let mut out = v.to_vec();
    for _ in 0..n {
        out = m.act_combo(combo, &out);
    }
    vec_scale(&out, &(T::one() / factorial::<T>(n)))
}

fn check_cdr<T: Scalar>(name: &str, module: &ModuleRep<T>, r: i64, w: i64) -> CheckOutcome {
    let (lo, hi) = (-w, r + w);
    let raise: Vec<Matrix<T>> = (lo..=hi)
        .map(|k| module.op_matrix(GenKind::Raise, k))
        .collect();
    let lower: Vec<Matrix<T>> = (lo..=hi)
        .map(|k| module.op_matrix(GenKind::Lower, k))
        .collect();
    let cartan: Vec<Matrix<T>> = (lo..=hi)
        .map(|k| module.op_matrix(GenKind::Cartan, k))
        .collect();
    let idx = |k: i64| (k - lo) as usize;
    for j in lo..=hi {
        for k in lo..=hi {
            let sum = j + k;
            if cartan[idx(j)].commutator(&raise[idx(k)])
                != module.op_matrix(GenKind::Raise, sum).scaled(&int::<T>(2))
            {
                return CheckOutcome::fail(name, "cdr", format!("[h_{j}, x_{k}^+] != 2 x_{sum}^+"));
            }
            if cartan[idx(j)].commutator(&lower[idx(k)])
                != module.op_matrix(GenKind::Lower, sum).scaled(&int::<T>(-2))
            {
                return CheckOutcome::fail(
                    name,
                    "cdr",
                    format!("[h_{j}, x_{k}^-] != -2 x_{sum}^-"),
                );
            }
            if raise[idx(j)].commutator(&lower[idx(k)]) != module.op_matrix(GenKind::Cartan, sum) {
                return CheckOutcome::fail(name, "cdr", format!("[x_{j}^+, x_{k}^-] != h_{sum}"));
            }
            if !cartan[idx(j)].commutator(&cartan[idx(k)]).is_zero()
                || !raise[idx(j)].commutator(&raise[idx(k)]).is_zero()
                || !lower[idx(j)].commutator(&lower[idx(k)]).is_zero()
            {
                return CheckOutcome::fail(
                    name,
                    "cdr",
                    format!("same-kind generators do not commute at ({j},{k})"),
                );
            }
        }
    }
    CheckOutcome::ok(name, "cdr")
}

fn check_dfr_ab<T: Scalar>(name: &str, module: &ModuleRep<T>, rng: &mut StdRng) -> CheckOutcome {
    for _ in 0..3 {
        let (la, lb) = (rng.gen_range(0..=2), rng.gen_range(0..=2));
        let alpha = rand_seq::<T>(rng, la);
        let beta = rand_seq::<T>(rng, lb);
        let (ell, mm) = (rng.gen_range(-1..=2i64), rng.gen_range(-1..=2i64));
        let compose = alpha.compose(&beta);
        let xp = module.combo_matrix(&LoopCombo::expand_with_params(GenKind::Raise, ell, &alpha));
        let xm = module.combo_matrix(&LoopCombo::expand_with_params(GenKind::Lower, mm, &beta));
        let h = module.combo_matrix(&LoopCombo::expand_with_params(GenKind::Cartan, ell, &alpha));
        let h_ab = module.combo_matrix(&LoopCombo::expand_with_params(
            GenKind::Cartan,
            ell + mm,
            &compose,
        ));
        let xp_ab = module.combo_matrix(&LoopCombo::expand_with_params(
            GenKind::Raise,
            ell + mm,
            &compose,
        ));
        let xm_ab = module.combo_matrix(&LoopCombo::expand_with_params(
            GenKind::Lower,
            ell + mm,
            &compose,
        ));
        let xp_beta =
            module.combo_matrix(&LoopCombo::expand_with_params(GenKind::Raise, mm, &beta));
        if xp.commutator(&xm) != h_ab {
            return CheckOutcome::fail(name, "dfr-ab", "[x^+(a), x^-(b)] != h(ab)".into());
        }
        if h.commutator(&xp_beta) != xp_ab.scaled(&int::<T>(2)) {
            return CheckOutcome::fail(name, "dfr-ab", "[h(a), x^+(b)] != 2 x^+(ab)".into());
        }
        if h.commutator(&xm) != xm_ab.scaled(&int::<T>(-2)) {
            return CheckOutcome::fail(name, "dfr-ab", "[h(a), x^-(b)] != -2 x^-(ab)".into());
        }
    }
    CheckOutcome::ok(name, "dfr-ab")
}

fn check_ab_divided<T: Scalar>(
    name: &str,
    module: &ModuleRep<T>,
    r: i64,
    rng: &mut StdRng,
) -> CheckOutcome {
    let t_max = (r + 1) as usize;
    let dim = module.dim();
    for _ in 0..2 {
        let alpha = rand_seq::<T>(rng, 1);
        let beta = rand_seq::<T>(rng, 1);
        let (mm, ell) = (rng.gen_range(0..=1i64), rng.gen_range(0..=1i64));
        let ab = alpha.compose(&beta);
        let aab = alpha.compose(&alpha).compose(&beta);
        let abb = alpha.compose(&beta).compose(&beta);
        let a_plus =
            module.combo_matrix(&LoopCombo::expand_with_params(GenKind::Raise, mm, &alpha));
        let a_plus_ell =
            module.combo_matrix(&LoopCombo::expand_with_params(GenKind::Raise, ell, &alpha));
        let h_ell =
            module.combo_matrix(&LoopCombo::expand_with_params(GenKind::Cartan, ell, &alpha));
        let b_minus =
            module.combo_matrix(&LoopCombo::expand_with_params(GenKind::Lower, ell, &beta));
        let b_minus_m =
            module.combo_matrix(&LoopCombo::expand_with_params(GenKind::Lower, mm, &beta));
        let b_plus_m =
            module.combo_matrix(&LoopCombo::expand_with_params(GenKind::Raise, mm, &beta));
        let h_lm = module.combo_matrix(&LoopCombo::expand_with_params(
            GenKind::Cartan,
            ell + mm,
            &ab,
        ));
        let xp_l2m = module.combo_matrix(&LoopCombo::expand_with_params(
            GenKind::Raise,
            ell + 2 * mm,
            &aab,
        ));
        let xm_l2m = module.combo_matrix(&LoopCombo::expand_with_params(
            GenKind::Lower,
            ell + 2 * mm,
            &abb,
        ));
        let xp_lm = module.combo_matrix(&LoopCombo::expand_with_params(
            GenKind::Raise,
            ell + mm,
            &ab,
        ));
        let xm_lm = module.combo_matrix(&LoopCombo::expand_with_params(
            GenKind::Lower,
            ell + mm,
            &ab,
        ));
        let ap_pow = divided_powers(&a_plus, t_max);
        let bm_pow = divided_powers(&b_minus_m, t_max);
        let bp_pow = divided_powers(&b_plus_m, t_max);
        for t in 0..=t_max {
            let lhs = ap_pow[t].commutator(&b_minus);
            let mut rhs: Matrix<T> = Matrix::zeros(dim, dim);
            if t >= 1 {
                rhs = rhs.plus(&ap_pow[t - 1].mul(&h_lm));
            }
            if t >= 2 {
                rhs = rhs.plus(&xp_l2m.mul(&ap_pow[t - 2]));
            }
            if lhs != rhs {
                return CheckOutcome::fail(
                    name,
                    "ab-divided",
                    format!("raising divided-power relation fails at t = {t}"),
                );
            }

            let lhs = a_plus_ell.commutator(&bm_pow[t]);
            let mut rhs: Matrix<T> = Matrix::zeros(dim, dim);
            if t >= 1 {
                rhs = rhs.plus(&bm_pow[t - 1].mul(&h_lm));
            }
            if t >= 2 {
                rhs = rhs.minus(&xm_l2m.mul(&bm_pow[t - 2]));
            }
            if lhs != rhs {
                return CheckOutcome::fail(
                    name,
                    "ab-divided",
                    format!("lowering divided-power relation fails at t = {t}"),
                );
            }

            let lhs = h_ell.commutator(&bm_pow[t]);
            let rhs = if t >= 1 {
                bm_pow[t - 1].mul(&xm_lm).scaled(&int::<T>(-2))
            } else {
                Matrix::zeros(dim, dim)
            };
            if lhs != rhs {
                return CheckOutcome::fail(
                    name,
                    "ab-divided",
                    format!("Cartan divided-power relation (lower) fails at t = {t}"),
                );
            }

            let lhs = h_ell.commutator(&bp_pow[t]);
            let rhs = if t >= 1 {
                bp_pow[t - 1].mul(&xp_lm).scaled(&int::<T>(2))
            } else {
                Matrix::zeros(dim, dim)
            };
            if lhs != rhs {
                return CheckOutcome::fail(
                    name,
                    "ab-divided",
                    format!("Cartan divided-power relation (raise) fails at t = {t}"),
                );
            }
        }
    }
    CheckOutcome::ok(name, "ab-divided")
}

fn check_ind_ell<T: Scalar>(
    name: &str,
    module: &ModuleRep<T>,
    p: &HwParams<T>,
    r: i64,
    rng: &mut StdRng,
) -> CheckOutcome {
    for ell in [-1i64, 0, 1, 2] {
        for a in [T::zero(), p.distinct()[0].clone(), rand_scalar(rng, false)] {
            let seq = ParamSeq::repeated(&a, 1);
            let e = module.op_matrix(GenKind::Raise, ell);
            let xm = module.combo_matrix(&LoopCombo::expand_with_params(
                GenKind::Lower,
                1 - ell,
                &seq,
            ));
            let h1a = module.combo_matrix(&LoopCombo::expand_with_params(GenKind::Cartan, 1, &seq));
            let e_pow = divided_powers(&e, (r + 1) as usize);
            let x_pow = divided_powers(&xm, (r + 2) as usize);
            for n in 1..=(r as usize) {
                let lhs = e_pow[n].mul(&x_pow[n + 1]);
                let mid = e_pow[n - 1].mul(&x_pow[n]);
                let rhs = xm
                    .mul(&e_pow[n].mul(&x_pow[n]))
                    .plus(&h1a.commutator(&mid).scaled(&ratio::<T>(1, 2)))
                    .minus(&e_pow[n - 1].mul(&x_pow[n + 1]).mul(&e));
                if lhs != rhs {
                    return CheckOutcome::fail(
                        name,
                        "ind-ell",
                        format!("recursive formula fails at l = {ell}, n = {n}, a = {a}"),
                    );
                }
            }
        }
    }
    CheckOutcome::ok(name, "ind-ell")
}

fn check_abc_on_omega<T: Scalar>(
    name: &str,
    module: &ModuleRep<T>,
    p: &HwParams<T>,
    omega: &[T],
    r: i64,
    rng: &mut StdRng,
) -> CheckOutcome {
    let max_n = (r + 1) as usize;
    for ell in [-1i64, 0, 1, 2] {
        for a in [T::zero(), p.distinct()[0].clone(), rand_scalar(rng, false)] {
            let seq = ParamSeq::repeated(&a, 1);
            let e = LoopCombo::gen(GenKind::Raise, ell);
            let xm = LoopCombo::expand_with_params(GenKind::Lower, 1 - ell, &seq);
            // pair[i] = (x_l^+)^(i) (x_{1-l}^-(a))^(i) Omega
            let mut pair = Vec::with_capacity(max_n + 1);
            for i in 0..=max_n {
                let v = divided_apply(module, &xm, i, omega);
                pair.push(divided_apply(module, &e, i, &v));
            }
            for n in 1..=max_n {
                // A_n on Omega
                let low = divided_apply(module, &xm, n, omega);
                let lhs = divided_apply(module, &e, n - 1, &low);
                let mut rhs = vec![T::zero(); module.dim()];
                for k in 1..=n {
                    let xk = LoopCombo::expand_with_params(
                        GenKind::Lower,
                        k as i64 - ell,
                        &ParamSeq::repeated(&a, k),
                    );
                    let term = module.act_combo(&xk, &pair[n - k]);
                    let sign: T = if (k - 1) % 2 == 0 {
                        T::one()
                    } else {
                        -T::one()
                    };
                    for (o, x) in rhs.iter_mut().zip(term) {
                        *o = o.clone() + sign.clone() * x;
                    }
                }
                if lhs != rhs {
                    return CheckOutcome::fail(
                        name,
                        "abc-omega",
                        format!("A_{n} fails on Omega at l = {ell}, a = {a}"),
                    );
                }
                // B_n on Omega
                let mut rhs = vec![T::zero(); module.dim()];
                for k in 1..=n {
                    let hk = LoopCombo::expand_with_params(
                        GenKind::Cartan,
                        k as i64,
                        &ParamSeq::repeated(&a, k),
                    );
                    let term = module.act_combo(&hk, &pair[n - k]);
                    let sign: T = if (k - 1) % 2 == 0 {
                        T::one()
                    } else {
                        -T::one()
                    };
                    for (o, x) in rhs.iter_mut().zip(term) {
                        *o = o.clone() + sign.clone() * x;
                    }
                }
                let rhs = vec_scale(&rhs, &(T::one() / int::<T>(n as i64)));
                if pair[n] != rhs {
                    return CheckOutcome::fail(
                        name,
                        "abc-omega",
                        format!("B_{n} fails on Omega at l = {ell}, a = {a}"),
                    );
                }
                // C_n on Omega: h_j(a) fixes the pair vector up to its
                // eigenvalue on Omega
                for j in -2..=2i64 {
                    let hj = LoopCombo::expand_with_params(
                        GenKind::Cartan,
                        j,
                        &ParamSeq::repeated(&a, 1),
                    );
                    let lhs = module.act_combo(&hj, &pair[n]);
                    let c = p.d_alpha(std::slice::from_ref(&a), j);
                    let rhs = vec_scale(&pair[n], &c);
                    if lhs != rhs {
                        return CheckOutcome::fail(
                            name,
                            "abc-omega",
                            format!("C fails on Omega at n = {n}, j = {j}, l = {ell}, a = {a}"),
                        );
                    }
                }
            }
        }
    }
    CheckOutcome::ok(name, "abc-omega")
}

/// Runs the full identity suite on one module. All checks are exact.
pub fn identity_suite<T: Scalar>(
    entry: &ZooEntry<T>,
    opts: &VerifyOptions,
) -> Result<Vec<CheckOutcome>> {
    let module = &entry.module;
    let p = &entry.params;
    let name = entry.name.as_str();
    let omega = module.omega()?;
    let r = p.r() as i64;
    let w = opts.window.max(1);
    let mut rng = StdRng::seed_from_u64(opts.seed);
    let mut out = Vec::new();

    out.push(check_cdr(name, module, r, w));
    out.push(check_dfr_ab(name, module, &mut rng));
    out.push(check_ab_divided(name, module, r, &mut rng));

    // rho inversion identity, symbolically, on the distinct parameter list
    {
        let seq = ParamSeq::new(p.distinct());
        let mut failure = None;
        for kind in [GenKind::Raise, GenKind::Lower] {
            for n in 1..=p.s() {
                let (lhs, rhs) = crate::loop_ops::rho_inverse_identity(kind, &seq, n)?;
                if lhs != rhs {
                    failure = Some(format!("rho inversion fails at n = {n}"));
                }
            }
        }
        out.push(CheckOutcome::from(name, "rho-x", failure));
    }

    out.push(check_ind_ell(name, module, p, r, &mut rng));
    out.push(check_abc_on_omega(name, module, p, &omega, r, &mut rng));

    // universal reduction relations
    out.push(if check_reduction(module, &omega, p) {
        CheckOutcome::ok(name, "red-all")
    } else {
        CheckOutcome::fail(name, "red-all", "x_n^-(â) does not kill Omega".into())
    });

    // explicit reduction relation and its Cartan shadow
    {
        let lambda = p.lambda();
        let rr = p.r();
        let mut failure = None;
        for ell in -2..=3i64 {
            let lhs = module.act_gen(GenKind::Lower, rr as i64 + 1 - ell, &omega);
            let mut rhs = vec![T::zero(); module.dim()];
            for k in 1..=rr {
                let term = module.act_gen(GenKind::Lower, k as i64 - ell, &omega);
                let sign: T = if (rr - k) % 2 == 0 {
                    T::one()
                } else {
                    -T::one()
                };
                let c = sign * lambda[rr - k].clone();
                for (o, x) in rhs.iter_mut().zip(term) {
                    *o = o.clone() + c.clone() * x;
                }
            }
            if lhs != rhs {
                failure = Some(format!("vector reduction fails at l = {ell}"));
                break;
            }
            let mut d_rhs = T::zero();
            for k in 1..=rr {
                let sign: T = if (rr - k) % 2 == 0 {
                    T::one()
                } else {
                    -T::one()
                };
                d_rhs = d_rhs + sign * lambda[rr - k].clone() * p.d(k as i64 - ell);
            }
            if p.d(rr as i64 + 1 - ell) != d_rhs {
                failure = Some(format!("Cartan reduction fails at l = {ell}"));
                break;
            }
        }
        out.push(CheckOutcome::from(name, "rr-ell", failure));
    }

    // shifted reduction relations
    {
        let mut failure = None;
        for a in [
            T::zero(),
            p.distinct()[0].clone(),
            rand_scalar(&mut rng, false),
        ] {
            if !check_reduction_shifted(module, &omega, p, &a) {
                failure = Some(format!("shifted reduction fails at a = {a}"));
                break;
            }
        }
        out.push(CheckOutcome::from(name, "rr-ell-a", failure));
    }

    // operator-level commutator expansion in the extended w-operators,
    // symbolically (module independent, parameter dependent)
    {
        let mut failure = None;
        'suma: for (j0, mj) in p.multiplicities().iter().enumerate() {
            for k in 1..*mj {
                for n in 1..=4i64 {
                    let mut seq = Vec::new();
                    for (i, (a, m)) in p.entries().iter().enumerate() {
                        let copies = if i == j0 { m - k } else { *m };
                        for _ in 0..copies {
                            seq.push(a.clone());
                        }
                    }
                    let lhs = LoopCombo::expand_with_params(
                        GenKind::Lower,
                        p.r() as i64 - k as i64 + n,
                        &ParamSeq::new(seq),
                    );
                    let mut rhs = LoopCombo::zero(GenKind::Lower);
                    for t in 0..=(n as usize) {
                        let c =
                            binomial_extended::<T>(n, t) * pow_int(&p.distinct()[j0], n - t as i64);
                        let w_low = w_extended(p, j0 + 1, k as i64 - t as i64)?;
                        rhs = rhs.plus(&w_low.scaled(&c));
                    }
                    if lhs != rhs {
                        failure = Some(format!(
                            "operator expansion fails at j = {}, k = {k}, n = {n}",
                            j0 + 1
                        ));
                        break 'suma;
                    }
                }
            }
        }
        out.push(CheckOutcome::from(name, "sum-a", failure));
    }

    // the same expansion acting on Omega, for negative degrees as well
    {
        let mut failure = None;
        'sumo: for (j0, mj) in p.multiplicities().iter().enumerate() {
            for k in 1..*mj {
                let w_jk = w_extended(p, j0 + 1, k as i64)?;
                let w_omega = module.act_combo(&w_jk, &omega);
                for n in (-4..=4i64).filter(|n| *n != 0) {
                    let mut lhs = module.act_gen(GenKind::Cartan, n, &w_omega);
                    let dn = p.d(n);
                    for (x, y) in lhs.iter_mut().zip(&w_omega) {
                        *x = x.clone() - dn.clone() * y.clone();
                    }
                    let t_max = if n > 0 {
                        (n as usize).min(k - 1)
                    } else {
                        k - 1
                    };
                    let mut rhs = vec![T::zero(); module.dim()];
                    for t in 0..=t_max {
                        let c = int::<T>(-2)
                            * binomial_extended::<T>(n, t)
                            * pow_int(&p.distinct()[j0], n - t as i64);
                        let w_low = w_extended(p, j0 + 1, (k - t) as i64)?;
                        let term = module.act_combo(&w_low, &omega);
                        for (o, x) in rhs.iter_mut().zip(term) {
                            if !x.is_zero() {
                                *o = o.clone() + c.clone() * x;
                            }
                        }
                    }
                    if lhs != rhs {
                        failure = Some(format!(
                            "expansion on Omega fails at j = {}, k = {k}, n = {n}",
                            j0 + 1
                        ));
                        break 'sumo;
                    }
                }
            }
        }
        out.push(CheckOutcome::from(name, "sum-omega", failure));
    }

    // h_m(alpha) acts on Omega by d_m(alpha), vanishing on full covers
    {
        let mut failure = None;
        for trial in 0..4 {
            let alpha: Vec<T> = if trial == 3 {
                p.distinct()
            } else {
                (0..rng.gen_range(0..=3))
                    .map(|_| rand_scalar::<T>(&mut rng, false))
                    .collect()
            };
            for mdeg in -2..=(r + 1) {
                let combo = LoopCombo::expand_with_params(
                    GenKind::Cartan,
                    mdeg,
                    &ParamSeq::new(alpha.clone()),
                );
                let lhs = module.act_combo(&combo, &omega);
                let rhs = vec_scale(&omega, &p.d_alpha(&alpha, mdeg));
                if lhs != rhs {
                    failure = Some(format!("h_{mdeg}(alpha) mismatch"));
                    break;
                }
            }
        }
        out.push(CheckOutcome::from(name, "h-alpha", failure));
    }

    // vanishing propagates to supersequences: of the full parameter list
    // always, and of the distinct list when the criterion holds
    {
        let mut failure = None;
        let mut bases = vec![p.flatten()];
        if crate::analysis::criterion(module, &omega, p) {
            bases.push(p.distinct());
        }
        for base in bases {
            for _ in 0..3 {
                let mut sup = base.clone();
                for _ in 0..rng.gen_range(1..=2) {
                    sup.push(rand_scalar(&mut rng, false));
                }
                let seq = ParamSeq::new(sup);
                for mdeg in -2..=(r + 3) {
                    let combo = LoopCombo::expand_with_params(GenKind::Lower, mdeg, &seq);
                    if !vec_is_zero(&module.act_combo(&combo, &omega)) {
                        failure = Some(format!("supersequence vanishing fails at degree {mdeg}"));
                        break;
                    }
                }
            }
        }
        out.push(CheckOutcome::from(name, "vanish-ab", failure));
    }

    // the omission identity for vanishing combinations
    {
        let alpha = ParamSeq::new(p.flatten());
        let ell_len = alpha.len() as i64;
        let mut failure = None;
        'aj: for j in 0..alpha.len() {
            for _ in 0..2 {
                let lb = rng.gen_range(1..=2);
                let beta = rand_seq::<T>(&mut rng, lb);
                let n = beta.len() as i64;
                let lhs_combo = LoopCombo::expand_with_params(
                    GenKind::Lower,
                    ell_len + n - 1,
                    &alpha.omit(j).compose(&beta),
                );
                let lhs = module.act_combo(&lhs_combo, &omega);
                let mut prod = T::one();
                for b in beta.values() {
                    prod = prod * (alpha.values()[j].clone() - b.clone());
                }
                let rhs_combo =
                    LoopCombo::expand_with_params(GenKind::Lower, ell_len - 1, &alpha.omit(j));
                let rhs = vec_scale(&module.act_combo(&rhs_combo, &omega), &prod);
                if lhs != rhs {
                    failure = Some(format!("omission identity fails at j = {}", j + 1));
                    break 'aj;
                }
            }
        }
        out.push(CheckOutcome::from(name, "ajbeta", failure));
    }

    Ok(out)
}

/// Structural properties: sector dimensions, nilpotency degrees, the
/// criterion-oracle equivalence, and the irreducible-case toolbox.
pub fn structural_suite<T: Scalar>(
    entry: &ZooEntry<T>,
    _opts: &VerifyOptions,
) -> Result<Vec<CheckOutcome>> {
    let module = &entry.module;
    let p = &entry.params;
    let name = entry.name.as_str();
    let omega = module.omega()?;
    let r = p.r();
    let mut out = Vec::new();

    let closure = module.submodule_closure(std::slice::from_ref(&omega));

    // weight -r sector of the generated module is a line
    {
        let bottom = closure
            .basis()
            .iter()
            .filter(|row| {
                row.iter()
                    .enumerate()
                    .any(|(i, x)| !x.is_zero() && module.weights()[i] == -(r as i64))
            })
            .count();
        out.push(if bottom == 1 {
            CheckOutcome::ok(name, "prop-1dim")
        } else {
            CheckOutcome::fail(
                name,
                "prop-1dim",
                format!("weight -{r} sector has dimension {bottom}"),
            )
        });
    }

    // (x_k^-)^r Omega != 0 and (x_k^-)^{r+1} Omega = 0
    {
        let mut failure = None;
        for k in -2..=(r as i64 + 2) {
            let combo = LoopCombo::gen(GenKind::Lower, k);
            let mut v = omega.clone();
            for _ in 0..r {
                v = module.act_combo(&combo, &v);
            }
            if vec_is_zero(&v) {
                failure = Some(format!("(x_{k}^-)^{r} Omega vanishes"));
                break;
            }
            if !vec_is_zero(&module.act_combo(&combo, &v)) {
                failure = Some(format!("(x_{k}^-)^{} Omega does not vanish", r + 1));
                break;
            }
        }
        out.push(CheckOutcome::from(name, "cor-uo", failure));
    }

    // full analysis, lambda_r nonzero, criterion-oracle equivalence
    let report = analyze(module, &omega, p)?;
    out.push(if !report.lambda[r - 1].is_zero() {
        CheckOutcome::ok(name, "lambda-r-nonzero")
    } else {
        CheckOutcome::fail(name, "lambda-r-nonzero", "lambda_r = 0".into())
    });
    out.push(if report.criterion_holds == report.oracle_irreducible {
        CheckOutcome::ok(name, "criterion-oracle")
    } else {
        CheckOutcome::fail(
            name,
            "criterion-oracle",
            format!(
                "criterion {} but oracle {}",
                report.criterion_holds, report.oracle_irreducible
            ),
        )
    });

    if report.criterion_holds {
        out.push(if report.actual_dim == report.dim_formula {
            CheckOutcome::ok(name, "dim-formula")
        } else {
            CheckOutcome::fail(
                name,
                "dim-formula",
                format!(
                    "dim {} != formula {}",
                    report.actual_dim, report.dim_formula
                ),
            )
        });
        out.push(match basis_check(module, &omega, p)? {
            true => CheckOutcome::ok(name, "basis"),
            false => CheckOutcome::fail(name, "basis", "rho-monomials are not a basis".into()),
        });
        out.push(match power_vanishing_check(module, &omega, p)? {
            true => CheckOutcome::ok(name, "power-vanishing"),
            false => CheckOutcome::fail(
                name,
                "power-vanishing",
                "(rho_j^-)^(m_j+1) does not vanish".into(),
            ),
        });
        // inner products over all tuple pairs with equal exponent sums
        {
            let tuples = all_tuples(&p.multiplicities());
            let mut failure = None;
            'inner: for ell in &tuples {
                for kk in &tuples {
                    if ell.iter().sum::<usize>() != kk.iter().sum::<usize>() {
                        continue;
                    }
                    if let Err(e) = inner_product_check(module, &omega, p, ell, kk) {
                        failure = Some(format!("{e}"));
                        break 'inner;
                    }
                }
            }
            out.push(CheckOutcome::from(name, "inner-product", failure));
        }
        // x_n^+ (rho_j^-)^(m_j+1) Omega = 0 over the window
        {
            let mut failure = None;
            'xn: for (j0, mj) in p.multiplicities().iter().enumerate() {
                let rj = rho(GenKind::Lower, p, j0 + 1)?;
                let v = module.apply_divided(&rj, mj + 1, &omega);
                for n in -2..=(r as i64 + 2) {
                    if !vec_is_zero(&module.act_gen(GenKind::Raise, n, &v)) {
                        failure = Some(format!("x_{n}^+ survives for j = {}", j0 + 1));
                        break 'xn;
                    }
                }
            }
            out.push(CheckOutcome::from(name, "xn", failure));
        }
    }

    let _ = eigen_scalar::<T>(&omega, &omega);
    Ok(out)
}

fn all_tuples(mults: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &m in mults {
        let mut next = Vec::new();
        for prefix in &out {
            for k in 0..=m {
                let mut t = prefix.clone();
                t.push(k);
                next.push(t);
            }
        }
        out = next;
    }
    out
}

/// Runs both suites over a zoo.
pub fn run_suites<T: Scalar>(
    zoo: &[ZooEntry<T>],
    opts: &VerifyOptions,
) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    for entry in zoo {
        out.extend(identity_suite(entry, opts)?);
        out.extend(structural_suite(entry, opts)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rat;

    #[test]
    fn suites_pass_on_small_zoo() {
        // the small members; the full zoo runs in the acceptance suite
        let zoo: Vec<ZooEntry<Rat>> = builtin_zoo(16).unwrap();
        assert!(!zoo.is_empty());
        let opts = VerifyOptions::default();
        for outcome in run_suites(&zoo, &opts).unwrap() {
            assert!(
                outcome.passed,
                "{} / {}: {}",
                outcome.module, outcome.name, outcome.detail
            );
        }
    }
}
