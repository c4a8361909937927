//! Construction of the local Weyl module for one evaluation parameter with
//! multiplicity, by an exact graded-limit computation.
//!
//! A plain tensor of fundamental evaluation modules at one and the same
//! parameter is not cyclic on its top vector: the equal-parameter components
//! merge and the closure collapses onto the irreducible submodule. The
//! universal module is recovered as the associated graded of a tensor at
//! distinct auxiliary points.
//!
//! Concretely, take `V = (k^2)^{tensor m}` with auxiliary shifts
//! `delta_i = i` and the commuting lowering operators
//!
//! ```text
//! Y_t = sum_i delta_i^t F^{(i)},   t = 0 .. m-1,
//! ```
//!
//! filtered by total `t`-degree: `F_d` is spanned by monomials in the `Y_t`
//! applied to the top vector with degrees summing to at most `d`. Passing to
//! the graded module `gr = (+) F_d / F_{d-1}` yields a cyclic highest weight
//! module of dimension `2^m` whose Cartan eigenvalues are `m a^k`; by
//! universality it is the local Weyl module. The graded action of `Y_t`
//! is the depth-`t` component matrix at `a`, and the loop generators are
//! recovered from `t^k = (a + s)^k` by binomial expansion.

use crate::linalg::{vec_is_zero, Matrix, Subspace};
use crate::rep::{Component, ModuleRep};
use crate::scalars::{int, pow_int, Scalar};
use crate::{Error, Result};

/// Lowering / raising / Cartan operators `sum_i delta_i^t X^(i)` on the
/// ambient tensor of `m` fundamental factors, computed for one power `t`.
fn ambient_op<T: Scalar>(m: usize, t: usize, kind: usize) -> Matrix<T> {
    let dim = 1usize << m;
    let mut out: Matrix<T> = Matrix::zeros(dim, dim);
    for idx in 0..dim {
        for factor in 0..m {
            let delta: T = pow_int(&int::<T>(factor as i64 + 1), t as i64);
            // bit 0 of the factor index = top (v+), bit 1 = bottom (v-),
            // stored big-endian: factor 0 owns the highest bit
            let shift = m - 1 - factor;
            let bit = (idx >> shift) & 1;
            match kind {
                // raise: v- -> v+
                0 if bit == 1 => {
                    out.add_at(idx & !(1 << shift), idx, delta);
                }
                // lower: v+ -> v-
                1 if bit == 0 => {
                    out.add_at(idx | (1 << shift), idx, delta);
                }
                // cartan: diagonal +-1
                2 => {
                    let sign = if bit == 0 { T::one() } else { -T::one() };
                    out.add_at(idx, idx, sign * delta);
                }
                _ => {}
            }
        }
    }
    out
}

fn ambient_weight(m: usize, idx: usize) -> i64 {
    m as i64 - 2 * (idx.count_ones() as i64)
}

pub fn local_weyl<T: Scalar>(a: T, m: usize) -> Result<ModuleRep<T>> {
    if a.is_zero() {
        return Err(Error::InvalidParameter(
            "evaluation parameter must be nonzero".into(),
        ));
    }
    if m == 0 {
        return Err(Error::InvalidParameter(
            "multiplicity must be positive".into(),
        ));
    }
    let dim = 1usize << m;
    let lowering: Vec<Matrix<T>> = (0..m).map(|t| ambient_op(m, t, 1)).collect();

    // adapted basis: rows in filtration-degree order, never modified after
    // insertion; a parallel echelon copy detects rank growth
    let mut omega = vec![T::zero(); dim];
    omega[0] = T::one();
    let mut adapted: Vec<(Vec<T>, usize)> = vec![(omega, 0)];
    let mut echelon: Subspace<T> = Subspace::new(dim);
    echelon.insert(adapted[0].0.clone());

    let max_degree = m * m + 1;
    'outer: for degree in 0..=max_degree {
        loop {
            let mut added = false;
            for i in 0..adapted.len() {
                let base_deg = adapted[i].1;
                let Some(t) = degree.checked_sub(base_deg) else {
                    continue;
                };
                if t >= m {
                    continue;
                }
                let img = lowering[t].matvec(&adapted[i].0);
                let res = echelon.reduce(img);
                if !vec_is_zero(&res) {
                    echelon.insert(res.clone());
                    adapted.push((res, degree));
                    added = true;
                }
            }
            if !added {
                break;
            }
        }
        if adapted.len() == dim {
            break 'outer;
        }
    }
    if adapted.len() != dim {
        return Err(Error::Inconsistent(format!(
            "graded construction reached rank {} of {dim}",
            adapted.len()
        )));
    }

    // coordinates in the adapted basis via one inversion
    let mut basis_cols: Matrix<T> = Matrix::zeros(dim, dim);
    for (j, (row, _)) in adapted.iter().enumerate() {
        for (i, x) in row.iter().enumerate() {
            if !x.is_zero() {
                basis_cols.set(i, j, x.clone());
            }
        }
    }
    let inv = basis_cols
        .inverse()
        .ok_or_else(|| Error::Inconsistent("adapted basis is singular".into()))?;

    let mut weights = Vec::with_capacity(dim);
    for (row, _) in &adapted {
        let lead = row
            .iter()
            .position(|x| !x.is_zero())
            .ok_or_else(|| Error::Inconsistent("zero basis row".into()))?;
        let w = ambient_weight(m, lead);
        if row
            .iter()
            .enumerate()
            .any(|(i, x)| !x.is_zero() && ambient_weight(m, i) != w)
        {
            return Err(Error::Inconsistent(
                "adapted basis row is not weight-homogeneous".into(),
            ));
        }
        weights.push(w);
    }

    // graded action per kind and depth
    let mut stacks: [Vec<Matrix<T>>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for (kind, stack) in stacks.iter_mut().enumerate() {
        for t in 0..m {
            let ambient = ambient_op::<T>(m, t, kind);
            let mut graded: Matrix<T> = Matrix::zeros(dim, dim);
            for (j, (row, base_deg)) in adapted.iter().enumerate() {
                let img = ambient.matvec(row);
                let coords = inv.matvec(&img);
                for (i, c) in coords.into_iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let target = base_deg + t;
                    if adapted[i].1 > target {
                        return Err(Error::Inconsistent(
                            "graded action escaped the filtration".into(),
                        ));
                    }
                    if adapted[i].1 == target {
                        graded.set(i, j, c);
                    }
                }
            }
            stack.push(graded);
        }
    }
    let [raise, lower, cartan] = stacks;
    Ok(ModuleRep::from_parts(
        dim,
        weights,
        vec![Component {
            a,
            raise,
            lower,
            cartan,
        }],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::vec_scale;
    use crate::loop_ops::GenKind;
    use crate::Rat;

    fn r(n: i64) -> Rat {
        int(n)
    }

    #[test]
    fn multiplicity_one_matches_eval() {
        let w = local_weyl(r(2), 1).unwrap();
        let e = ModuleRep::eval_module(r(2), 1).unwrap();
        assert_eq!(w.dim(), 2);
        for k in -2..=3 {
            assert_eq!(
                w.op_matrix(GenKind::Lower, k),
                e.op_matrix(GenKind::Lower, k)
            );
        }
    }

    #[test]
    fn local_weyl_two_is_cyclic_and_reducible() {
        let w = local_weyl(r(2), 2).unwrap();
        assert_eq!(w.dim(), 4);
        let omega = w.omega().unwrap();
        // d_k = 2 * 2^k even though the module is not the plain tensor
        for k in -2..=4 {
            let hv = w.act_gen(GenKind::Cartan, k, &omega);
            assert_eq!(hv, vec_scale(&omega, &(r(2) * pow_int(&r(2), k))));
        }
        for k in -2..=4 {
            assert!(vec_is_zero(&w.act_gen(GenKind::Raise, k, &omega)));
        }
        // cyclic: closure of the top vector is everything
        assert_eq!(w.submodule_closure(std::slice::from_ref(&omega)).rank(), 4);
        // w_1 Omega = x_1^-(a) Omega does not vanish: the Weyl behavior
        let combo = crate::loop_ops::LoopCombo::expand_with_params(
            GenKind::Lower,
            1,
            &crate::loop_ops::ParamSeq::new(vec![r(2)]),
        );
        assert!(!vec_is_zero(&w.act_combo(&combo, &omega)));
    }

    #[test]
    fn defining_relations_hold_on_local_weyl() {
        for m in 1..=3usize {
            let w = local_weyl(r(2), m).unwrap();
            let r_weight = m as i64;
            for j in -2..=(r_weight + 2) {
                for k in -2..=(r_weight + 2) {
                    let hj = w.op_matrix(GenKind::Cartan, j);
                    let xkp = w.op_matrix(GenKind::Raise, k);
                    let xkm = w.op_matrix(GenKind::Lower, k);
                    assert_eq!(
                        hj.commutator(&xkp),
                        w.op_matrix(GenKind::Raise, j + k).scaled(&r(2)),
                        "[h,x+] at m={m} j={j} k={k}"
                    );
                    assert_eq!(
                        hj.commutator(&xkm),
                        w.op_matrix(GenKind::Lower, j + k).scaled(&r(-2)),
                        "[h,x-] at m={m} j={j} k={k}"
                    );
                    let xjp = w.op_matrix(GenKind::Raise, j);
                    assert_eq!(
                        xjp.commutator(&xkm),
                        w.op_matrix(GenKind::Cartan, j + k),
                        "[x+,x-] at m={m} j={j} k={k}"
                    );
                    assert!(hj.commutator(&w.op_matrix(GenKind::Cartan, k)).is_zero());
                    assert!(xjp.commutator(&w.op_matrix(GenKind::Raise, k)).is_zero());
                    assert!(xkm.commutator(&w.op_matrix(GenKind::Lower, j)).is_zero());
                }
            }
        }
    }
}
