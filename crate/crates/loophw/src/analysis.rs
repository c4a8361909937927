//! Highest weight analysis: reads the highest weight data off a concrete
//! module, verifies the reduction relations, decides irreducibility by the
//! closed-form criterion, and cross-checks against the singular-vector
//! oracle, the dimension formula and the inner-product basis machinery.

use serde_json::{json, Value};

use crate::linalg::{vec_is_zero, Subspace};
use crate::loop_ops::{rho, GenKind, LoopCombo, ParamSeq};
use crate::rep::ModuleRep;
use crate::scalars::{binomial_extended, newton_lambda_from_d, pow_int, to_exact_i64, Scalar};
use crate::{Error, HwParams, HwPoly, Result};

/// Everything the analysis of one highest weight vector produces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HwReport<T> {
    pub r: usize,
    /// Measured Cartan eigenvalues over the window `k = -3 .. r`.
    pub d: Vec<(i64, T)>,
    pub lambda: Vec<T>,
    pub poly: HwPoly<T>,
    pub params: HwParams<T>,
    pub criterion_holds: bool,
    pub dim_formula: usize,
    pub actual_dim: usize,
    pub oracle_irreducible: bool,
}

impl<T: Scalar> HwReport<T> {
    pub fn to_json(&self) -> Value {
        json!({
            "r": self.r,
            "d": self.d.iter().map(|(k, v)| json!({"k": k, "value": v.to_string()})).collect::<Vec<_>>(),
            "lambda": self.lambda.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "poly": self.poly.coeffs().iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "params": self.params.to_json(),
            "criterion_holds": self.criterion_holds,
            "dim_formula": self.dim_formula,
            "actual_dim": self.actual_dim,
            "oracle_irreducible": self.oracle_irreducible,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let get = |k: &str| {
            v.get(k)
                .ok_or_else(|| Error::Parse(format!("missing {k:?}")))
        };
        let r = get("r")?
            .as_u64()
            .ok_or_else(|| Error::Parse("bad r".into()))? as usize;
        let mut d = Vec::new();
        for item in get("d")?
            .as_array()
            .ok_or_else(|| Error::Parse("bad d".into()))?
        {
            let k = item
                .get("k")
                .and_then(Value::as_i64)
                .ok_or_else(|| Error::Parse("bad d index".into()))?;
            let val = item
                .get("value")
                .and_then(Value::as_str)
                .and_then(T::parse_exact)
                .ok_or_else(|| Error::Parse("bad d value".into()))?;
            d.push((k, val));
        }
        let scalars = |key: &str| -> Result<Vec<T>> {
            get(key)?
                .as_array()
                .ok_or_else(|| Error::Parse(format!("bad {key}")))?
                .iter()
                .map(|x| {
                    x.as_str()
                        .and_then(T::parse_exact)
                        .ok_or_else(|| Error::Parse(format!("bad entry in {key}")))
                })
                .collect()
        };
        let lambda = scalars("lambda")?;
        let poly = HwPoly::from_lambda(&lambda);
        // consistency with the serialized coefficients
        let coeffs = scalars("poly")?;
        if coeffs != poly.coeffs() {
            return Err(Error::Parse("poly coefficients do not match lambda".into()));
        }
        Ok(HwReport {
            r,
            d,
            lambda,
            poly,
            params: HwParams::from_json(get("params")?)?,
            criterion_holds: get("criterion_holds")?
                .as_bool()
                .ok_or_else(|| Error::Parse("bad criterion_holds".into()))?,
            dim_formula: get("dim_formula")?
                .as_u64()
                .ok_or_else(|| Error::Parse("bad dim_formula".into()))?
                as usize,
            actual_dim: get("actual_dim")?
                .as_u64()
                .ok_or_else(|| Error::Parse("bad actual_dim".into()))?
                as usize,
            oracle_irreducible: get("oracle_irreducible")?
                .as_bool()
                .ok_or_else(|| Error::Parse("bad oracle_irreducible".into()))?,
        })
    }
}

/// Scalar `c` with `w = c v`, if `w` is a multiple of `v`.
pub(crate) fn eigen_scalar<T: Scalar>(w: &[T], v: &[T]) -> Option<T> {
    let lead = v.iter().position(|x| !x.is_zero())?;
    let c = w[lead].clone() / v[lead].clone();
    let scaled: Vec<T> = v.iter().map(|x| x.clone() * c.clone()).collect();
    if scaled == w {
        Some(c)
    } else {
        None
    }
}

fn require_highest_weight<T: Scalar>(m: &ModuleRep<T>, omega: &[T]) -> Result<()> {
    if vec_is_zero(omega) {
        return Err(Error::NotHighestWeight("zero vector".into()));
    }
    for comp in m.components() {
        for mat in comp.mats(GenKind::Raise) {
            if !vec_is_zero(&mat.matvec(omega)) {
                return Err(Error::NotHighestWeight(
                    "a raising component does not annihilate the vector".into(),
                ));
            }
        }
        for mat in comp.mats(GenKind::Cartan) {
            if eigen_scalar(&mat.matvec(omega), omega).is_none() {
                return Err(Error::NotHighestWeight(
                    "a Cartan component is not diagonal on the vector".into(),
                ));
            }
        }
    }
    Ok(())
}

/// The dimension `prod_j (m_j + 1)` of the irreducible module.
pub fn dim_formula<T: Scalar>(p: &HwParams<T>) -> usize {
    p.multiplicities().iter().map(|m| m + 1).product()
}

/// The closed-form irreducibility test: `x_s^-(a_1 .. a_s)` annihilates the
/// highest weight vector iff the generated module is irreducible.
pub fn criterion<T: Scalar>(m: &ModuleRep<T>, omega: &[T], p: &HwParams<T>) -> bool {
    let combo =
        LoopCombo::expand_with_params(GenKind::Lower, p.s() as i64, &ParamSeq::new(p.distinct()));
    vec_is_zero(&m.act_combo(&combo, omega))
}

/// Ground truth by brute force: the module generated by `omega` is
/// irreducible iff its only singular vectors form the line through `omega`.
/// Errors unless `omega` generates the whole of `m`; analyze() restricts
/// first when needed.
pub fn oracle_irreducible<T: Scalar>(m: &ModuleRep<T>, omega: &[T]) -> Result<bool> {
    require_highest_weight(m, omega)?;
    let closure = m.submodule_closure(&[omega.to_vec()]);
    if closure.rank() != m.dim() {
        return Err(Error::NotCyclic);
    }
    let total: usize = m.singular_vectors().iter().map(|(_, s)| s.rank()).sum();
    Ok(total == 1)
}

/// Universal reduction relations: `x_n^-(â)` annihilates the highest weight
/// vector for every degree `n` in the test window `[-2, r+3]`.
pub fn check_reduction<T: Scalar>(m: &ModuleRep<T>, omega: &[T], p: &HwParams<T>) -> bool {
    let flat = ParamSeq::new(p.flatten());
    let r = p.r() as i64;
    (-2..=r + 3).all(|n| {
        let combo = LoopCombo::expand_with_params(GenKind::Lower, n, &flat);
        vec_is_zero(&m.act_combo(&combo, omega))
    })
}

/// Shifted reduction relations:
/// `x_{r+1-l}^-((a)^{r+1}) Omega = sum_j (-1)^{r-j} lambda_{r+1-j}(a) x_{j-l}^-((a)^j) Omega`.
///
/// The `(a)^j`-exponent pattern of the right-hand side continues on the left
/// at `j = r+1`; with `a = 0` this collapses to the plain reduction relation.
pub fn check_reduction_shifted<T: Scalar>(
    m: &ModuleRep<T>,
    omega: &[T],
    p: &HwParams<T>,
    a: &T,
) -> bool {
    let r = p.r();
    let lam = p.lambda_shifted(a);
    for ell in 0..=2i64 {
        let lhs_combo = LoopCombo::expand_with_params(
            GenKind::Lower,
            r as i64 + 1 - ell,
            &ParamSeq::repeated(a, r + 1),
        );
        let lhs = m.act_combo(&lhs_combo, omega);
        let mut rhs = vec![T::zero(); m.dim()];
        for j in 1..=r {
            let combo = LoopCombo::expand_with_params(
                GenKind::Lower,
                j as i64 - ell,
                &ParamSeq::repeated(a, j),
            );
            let term = m.act_combo(&combo, omega);
            let sign: T = if (r - j) % 2 == 0 {
                T::one()
            } else {
                -T::one()
            };
            let c = sign * lam[r - j].clone();
            for (o, x) in rhs.iter_mut().zip(term) {
                *o = o.clone() + c.clone() * x;
            }
        }
        if lhs != rhs {
            return false;
        }
    }
    true
}

/// Full highest weight analysis of `omega` inside `m`, checked against the
/// expected parameters.
pub fn analyze<T: Scalar>(
    m: &ModuleRep<T>,
    omega: &[T],
    expected: &HwParams<T>,
) -> Result<HwReport<T>> {
    require_highest_weight(m, omega)?;
    let r_expected = expected.r();

    // measured Cartan eigenvalues over the reporting window
    let mut d = Vec::new();
    for k in -3..=(r_expected as i64) {
        let hv = m.act_gen(GenKind::Cartan, k, omega);
        let dk = eigen_scalar(&hv, omega).ok_or_else(|| {
            Error::NotHighestWeight(format!("h_{k} is not diagonal on the vector"))
        })?;
        d.push((k, dk));
    }
    let d0 = d
        .iter()
        .find(|(k, _)| *k == 0)
        .map(|(_, v)| v.clone())
        .unwrap();
    let r = to_exact_i64(&d0).filter(|n| *n >= 0).ok_or_else(|| {
        Error::NotHighestWeight(format!("d_0 = {d0} is not a nonnegative integer"))
    })? as usize;
    if r != r_expected {
        return Err(Error::ParameterMismatch {
            measured: format!("r = {r}"),
            expected: format!("r = {r_expected}"),
        });
    }

    // lambda_n as the eigenvalue of (x_0^+)^(n) (x_1^-)^(n), cross-checked
    // against the other degree pairings and against Newton's identities
    let mut lambda = Vec::with_capacity(r);
    for n in 1..=r {
        let mut value: Option<T> = None;
        for ell in [0i64, -1, 1, 2] {
            let lowered = m.apply_divided(&LoopCombo::gen(GenKind::Lower, 1 - ell), n, omega);
            let raised = m.apply_divided(&LoopCombo::gen(GenKind::Raise, ell), n, &lowered);
            let ln = eigen_scalar(&raised, omega).ok_or_else(|| {
                Error::NotHighestWeight(format!(
                    "(x_{ell}^+)^({n}) (x_{}^-)^({n}) is not diagonal on the vector",
                    1 - ell
                ))
            })?;
            match &value {
                None => value = Some(ln),
                Some(prev) if *prev != ln => {
                    return Err(Error::Discrepancy(format!(
                        "lambda_{n} differs between degree pairings: {prev} vs {ln}"
                    )))
                }
                _ => {}
            }
        }
        lambda.push(value.unwrap());
    }
    let d_slice: Vec<T> = (1..=r)
        .map(|k| d.iter().find(|(i, _)| *i == k as i64).unwrap().1.clone())
        .collect();
    if newton_lambda_from_d(&d_slice) != lambda {
        return Err(Error::Discrepancy(
            "Newton identities disagree with the measured lambda sequence".into(),
        ));
    }

    let poly = HwPoly::from_lambda(&lambda);
    let expected_poly = expected.poly();
    if poly != expected_poly {
        return Err(Error::ParameterMismatch {
            measured: poly.to_string(),
            expected: expected_poly.to_string(),
        });
    }

    let criterion_holds = criterion(m, omega, expected);
    let closure = m.submodule_closure(&[omega.to_vec()]);
    let actual_dim = closure.rank();
    let oracle = if actual_dim == m.dim() {
        oracle_irreducible(m, omega)?
    } else {
        let restricted = m.restrict(&closure)?;
        let omega_r = ModuleRep::restrict_vector(&closure, omega)?;
        oracle_irreducible(&restricted, &omega_r)?
    };

    Ok(HwReport {
        r,
        d,
        lambda,
        poly,
        params: expected.clone(),
        criterion_holds,
        dim_formula: dim_formula(expected),
        actual_dim,
        oracle_irreducible: oracle,
    })
}

/// Inner product of divided rho-monomials on the highest weight vector:
/// applies `prod_j (rho_j^-)^(k_j)` then `prod_j (rho_j^+)^(l_j)` and returns
/// the coefficient on `omega`, checking it against the closed form
/// `prod_j delta_{l_j k_j} C(m_j, k_j) prod_{t != j} (a_j - a_t)^{2 k_j}`.
pub fn inner_product_check<T: Scalar>(
    m: &ModuleRep<T>,
    omega: &[T],
    p: &HwParams<T>,
    ell: &[usize],
    kk: &[usize],
) -> Result<T> {
    let s = p.s();
    if ell.len() != s || kk.len() != s {
        return Err(Error::Range("one exponent per distinct parameter".into()));
    }
    if ell.iter().sum::<usize>() != kk.iter().sum::<usize>() {
        return Err(Error::Range("exponent sums must agree".into()));
    }
    if !criterion(m, omega, p) {
        return Err(Error::Inconsistent(
            "inner products require an irreducible highest weight module".into(),
        ));
    }
    let mut v = omega.to_vec();
    for j in 1..=s {
        v = m.apply_divided(&rho(GenKind::Lower, p, j)?, kk[j - 1], &v);
    }
    for j in 1..=s {
        v = m.apply_divided(&rho(GenKind::Raise, p, j)?, ell[j - 1], &v);
    }
    let measured = if vec_is_zero(&v) {
        T::zero()
    } else {
        eigen_scalar(&v, omega).ok_or_else(|| {
            Error::Discrepancy("rho-monomial image is not proportional to omega".into())
        })?
    };
    let mut expected = T::one();
    let distinct = p.distinct();
    let mults = p.multiplicities();
    for j in 0..s {
        if ell[j] != kk[j] {
            expected = T::zero();
            break;
        }
        expected = expected * binomial_extended::<T>(mults[j] as i64, kk[j]);
        for t in 0..s {
            if t != j {
                let diff = distinct[j].clone() - distinct[t].clone();
                expected = expected * pow_int(&diff, 2 * kk[j] as i64);
            }
        }
    }
    if measured != expected {
        return Err(Error::Discrepancy(format!(
            "inner product mismatch: measured {measured}, closed form {expected}"
        )));
    }
    Ok(measured)
}

/// Iterates all exponent tuples `0 <= k_j <= m_j`.
fn exponent_tuples(mults: &[usize]) -> Vec<Vec<usize>> {
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

/// The `prod (m_j + 1)` divided rho-monomials on `omega` form a basis of the
/// generated module (requires the criterion to hold).
pub fn basis_check<T: Scalar>(m: &ModuleRep<T>, omega: &[T], p: &HwParams<T>) -> Result<bool> {
    if !criterion(m, omega, p) {
        return Err(Error::Inconsistent(
            "basis check requires an irreducible highest weight module".into(),
        ));
    }
    let s = p.s();
    let rhos: Vec<LoopCombo<T>> = (1..=s)
        .map(|j| rho(GenKind::Lower, p, j))
        .collect::<Result<_>>()?;
    let mut span = Subspace::new(m.dim());
    let mut independent = true;
    for tuple in exponent_tuples(&p.multiplicities()) {
        let mut v = omega.to_vec();
        for (j, &k) in tuple.iter().enumerate() {
            v = m.apply_divided(&rhos[j], k, &v);
        }
        if !span.insert(v) {
            independent = false;
        }
    }
    let closure = m.submodule_closure(&[omega.to_vec()]);
    Ok(independent && span.rank() == closure.rank())
}

/// `(rho_j^-)^(m_j + 1)` annihilates `omega` for every `j` (requires the
/// criterion to hold).
pub fn power_vanishing_check<T: Scalar>(
    m: &ModuleRep<T>,
    omega: &[T],
    p: &HwParams<T>,
) -> Result<bool> {
    if !criterion(m, omega, p) {
        return Err(Error::Inconsistent(
            "power vanishing requires an irreducible highest weight module".into(),
        ));
    }
    for (j, mj) in p.multiplicities().iter().enumerate() {
        let r = rho(GenKind::Lower, p, j + 1)?;
        if !vec_is_zero(&m.apply_divided(&r, mj + 1, omega)) {
            return Ok(false);
        }
    }
    Ok(true)
}
