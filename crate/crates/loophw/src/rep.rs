//! Concrete finite-dimensional representations: evaluation modules, fused
//! Weyl modules, tensor products, generator actions for all integer degrees,
//! submodule closure, quotients, weight decomposition and singular vectors.
//!
//! Every module stores, per distinct evaluation parameter `a`, a stack of
//! component matrices indexed by a nilpotent depth `t`. The generators are
//! synthesized for every integer degree `k` as
//!
//! ```text
//! x_k = sum_{a} sum_{t} C(k, t) a^{k-t} X_{a,t}
//! ```
//!
//! with the extended binomial coefficient. Depth 0 alone reproduces plain
//! evaluation modules; the higher depths carry the Jordan-type structure a
//! Weyl module with repeated parameters requires. Negative degrees are always
//! available because evaluation parameters are nonzero.

use std::collections::{BTreeMap, VecDeque};

use serde_json::{json, Value};

use crate::linalg::{null_space_joint, vec_is_zero, vec_scale, Matrix, Subspace};
use crate::loop_ops::{GenKind, GenSymbol, LoopCombo};
use crate::scalars::{binomial_extended, factorial, int, pow_int, Scalar};
use crate::{Error, HwParams, Result, DEFAULT_DIM_CAP};

/// Action matrices attached to one distinct evaluation parameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component<T> {
    pub a: T,
    pub raise: Vec<Matrix<T>>,
    pub lower: Vec<Matrix<T>>,
    pub cartan: Vec<Matrix<T>>,
}

impl<T: Scalar> Component<T> {
    pub fn depth(&self) -> usize {
        self.raise.len()
    }

    pub fn mats(&self, kind: GenKind) -> &[Matrix<T>] {
        match kind {
            GenKind::Raise => &self.raise,
            GenKind::Lower => &self.lower,
            GenKind::Cartan => &self.cartan,
        }
    }
}

/// A concrete finite-dimensional representation of the sl2 loop algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleRep<T> {
    dim: usize,
    weights: Vec<i64>,
    components: Vec<Component<T>>,
}

impl<T: Scalar> ModuleRep<T> {
    pub(crate) fn from_parts(
        dim: usize,
        weights: Vec<i64>,
        mut components: Vec<Component<T>>,
    ) -> Self {
        components.sort_by(|x, y| x.a.cmp(&y.a));
        ModuleRep {
            dim,
            weights,
            components,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn components(&self) -> &[Component<T>] {
        &self.components
    }

    /// Total number of component matrices per kind; degrees `0..rank` of the
    /// synthesized generators span all components (confluent Vandermonde).
    pub fn component_rank(&self) -> usize {
        self.components.iter().map(Component::depth).sum()
    }

    /// The evaluation module: the `(m+1)`-dimensional sl2 irreducible with
    /// `x_k` acting as `a^k` times the sl2 raising/lowering operator.
    pub fn eval_module(a: T, m: usize) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::InvalidParameter(
                "evaluation parameter must be nonzero".into(),
            ));
        }
        let dim = m + 1;
        let mut raise: Matrix<T> = Matrix::zeros(dim, dim);
        let mut lower: Matrix<T> = Matrix::zeros(dim, dim);
        let mut cartan: Matrix<T> = Matrix::zeros(dim, dim);
        let mut weights = Vec::with_capacity(dim);
        for i in 0..dim {
            weights.push(m as i64 - 2 * i as i64);
            cartan.set(i, i, int(m as i64 - 2 * i as i64));
            if i > 0 {
                // E v_i = i v_{i-1}
                raise.set(i - 1, i, int(i as i64));
            }
            if i < m {
                // F v_i = (m-i) v_{i+1}
                lower.set(i + 1, i, int((m - i) as i64));
            }
        }
        Ok(ModuleRep::from_parts(
            dim,
            weights,
            vec![Component {
                a,
                raise: vec![raise],
                lower: vec![lower],
                cartan: vec![cartan],
            }],
        ))
    }

    /// The local Weyl module for one parameter with multiplicity `m`:
    /// the universal highest weight module with parameters `(a)^m`, dim `2^m`.
    pub fn local_weyl(a: T, m: usize) -> Result<Self> {
        crate::fusion::local_weyl(a, m)
    }

    /// Tensor product with the default dimension cap.
    pub fn tensor(factors: &[ModuleRep<T>]) -> Result<Self> {
        Self::tensor_capped(factors, DEFAULT_DIM_CAP)
    }

    /// Tensor product: each generator acts as the sum over factors, and
    /// components with equal parameter merge by addition (depth-wise).
    pub fn tensor_capped(factors: &[ModuleRep<T>], cap: usize) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidParameter(
                "tensor of an empty factor list".into(),
            ));
        }
        let mut dim = 1usize;
        for f in factors {
            dim = dim.checked_mul(f.dim).ok_or(Error::DimensionCap {
                dim: usize::MAX,
                cap,
            })?;
        }
        if dim > cap {
            return Err(Error::DimensionCap { dim, cap });
        }
        let mut strides = vec![1usize; factors.len()];
        for f in (0..factors.len()).rev() {
            if f + 1 < factors.len() {
                strides[f] = strides[f + 1] * factors[f + 1].dim;
            }
        }
        let mut weights = vec![0i64; dim];
        for (idx, w) in weights.iter_mut().enumerate() {
            *w = factors
                .iter()
                .zip(&strides)
                .map(|(f, s)| f.weights[(idx / s) % f.dim])
                .sum();
        }
        // merge components by parameter value
        let mut merged: BTreeMap<T, Component<T>> = BTreeMap::new();
        for (f_idx, f) in factors.iter().enumerate() {
            for comp in &f.components {
                let entry = merged.entry(comp.a.clone()).or_insert_with(|| Component {
                    a: comp.a.clone(),
                    raise: Vec::new(),
                    lower: Vec::new(),
                    cartan: Vec::new(),
                });
                for kind in [GenKind::Raise, GenKind::Lower, GenKind::Cartan] {
                    let mats = comp.mats(kind);
                    for (t, m) in mats.iter().enumerate() {
                        let lifted = lift_factor(m, f_idx, factors, &strides, dim);
                        let target = match kind {
                            GenKind::Raise => &mut entry.raise,
                            GenKind::Lower => &mut entry.lower,
                            GenKind::Cartan => &mut entry.cartan,
                        };
                        while target.len() <= t {
                            target.push(Matrix::zeros(dim, dim));
                        }
                        target[t] = target[t].plus(&lifted);
                    }
                }
            }
        }
        Ok(ModuleRep::from_parts(
            dim,
            weights,
            merged.into_values().collect(),
        ))
    }

    /// The Weyl module of the given highest weight parameters: the tensor of
    /// local Weyl modules over the distinct parameters. Dimension `2^r`.
    pub fn weyl(p: &HwParams<T>, cap: usize) -> Result<Self> {
        let mut factors = Vec::new();
        for (a, m) in p.entries() {
            factors.push(Self::local_weyl(a.clone(), *m)?);
        }
        Self::tensor_capped(&factors, cap)
    }

    /// The irreducible module of the given parameters: the tensor of one
    /// evaluation module per distinct parameter. Dimension `prod (m_j + 1)`.
    pub fn packed(p: &HwParams<T>, cap: usize) -> Result<Self> {
        let mut factors = Vec::new();
        for (a, m) in p.entries() {
            factors.push(Self::eval_module(a.clone(), *m)?);
        }
        Self::tensor_capped(&factors, cap)
    }

    /// The synthesized generator matrix `x_k` / `h_k`.
    pub fn op_matrix(&self, kind: GenKind, k: i64) -> Matrix<T> {
        self.combo_matrix(&LoopCombo::gen(kind, k))
    }

    /// Scalar weight each component matrix receives under a combination.
    fn component_factor(&self, combo: &LoopCombo<T>, a: &T, t: usize) -> T {
        let mut f = T::zero();
        for (deg, c) in combo.terms() {
            let b: T = binomial_extended(deg, t);
            if b.is_zero() {
                continue;
            }
            f = f + c.clone() * b * pow_int(a, deg - t as i64);
        }
        f
    }

    /// Matrix of a formal combination of same-kind generators.
    pub fn combo_matrix(&self, combo: &LoopCombo<T>) -> Matrix<T> {
        let mut out: Matrix<T> = Matrix::zeros(self.dim, self.dim);
        for comp in &self.components {
            for (t, m) in comp.mats(combo.kind()).iter().enumerate() {
                let f = self.component_factor(combo, &comp.a, t);
                if !f.is_zero() {
                    out = out.plus(&m.scaled(&f));
                }
            }
        }
        out
    }

    /// Applies a single generator to a vector.
    pub fn act_gen(&self, kind: GenKind, k: i64, v: &[T]) -> Vec<T> {
        self.act_combo(&LoopCombo::gen(kind, k), v)
    }

    pub fn act_symbol(&self, g: GenSymbol, v: &[T]) -> Vec<T> {
        self.act_gen(g.kind, g.degree, v)
    }

    /// Applies a formal combination to a vector.
    pub fn act_combo(&self, combo: &LoopCombo<T>, v: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); self.dim];
        for comp in &self.components {
            for (t, m) in comp.mats(combo.kind()).iter().enumerate() {
                let f = self.component_factor(combo, &comp.a, t);
                if f.is_zero() {
                    continue;
                }
                let img = m.matvec(v);
                for (o, x) in out.iter_mut().zip(img) {
                    if !x.is_zero() {
                        *o = o.clone() + f.clone() * x;
                    }
                }
            }
        }
        out
    }

    /// Divided power `(X)^{(n)} v = X^n v / n!` of a combination.
    pub fn apply_divided(&self, combo: &LoopCombo<T>, n: usize, v: &[T]) -> Vec<T> {
        let mut out = v.to_vec();
        for _ in 0..n {
            if vec_is_zero(&out) {
                return out;
            }
            out = self.act_combo(combo, &out);
        }
        vec_scale(&out, &(T::one() / factorial::<T>(n)))
    }

    /// The canonical highest weight vector: the unique top-weight basis line,
    /// normalized to coordinate 1.
    pub fn omega(&self) -> Result<Vec<T>> {
        let top = *self
            .weights
            .iter()
            .max()
            .ok_or_else(|| Error::InvalidParameter("empty module".into()))?;
        let idxs: Vec<usize> = (0..self.dim).filter(|&i| self.weights[i] == top).collect();
        if idxs.len() != 1 {
            return Err(Error::NotHighestWeight(format!(
                "top weight {top} sector has dimension {}",
                idxs.len()
            )));
        }
        let mut v = vec![T::zero(); self.dim];
        v[idxs[0]] = T::one();
        Ok(v)
    }

    /// Splits a vector into its weight-homogeneous parts.
    fn weight_parts(&self, v: &[T]) -> Vec<(i64, Vec<T>)> {
        let mut parts: BTreeMap<i64, Vec<T>> = BTreeMap::new();
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let part = parts
                .entry(self.weights[i])
                .or_insert_with(|| vec![T::zero(); self.dim]);
            part[i] = x.clone();
        }
        parts.into_iter().collect()
    }

    /// The smallest subspace containing the generators and invariant under
    /// every component matrix, equivalently under all `x_k` and `h_k`.
    pub fn submodule_closure(&self, gens: &[Vec<T>]) -> Subspace<T> {
        let mut mats: Vec<(&Matrix<T>, i64)> = Vec::new();
        for comp in &self.components {
            for m in &comp.raise {
                mats.push((m, 2));
            }
            for m in &comp.lower {
                mats.push((m, -2));
            }
            for m in &comp.cartan {
                mats.push((m, 0));
            }
        }
        let dim = self.dim;
        let mut buckets: BTreeMap<i64, Subspace<T>> = BTreeMap::new();
        let mut queue: VecDeque<(Vec<T>, i64)> = VecDeque::new();
        fn push<T: Scalar>(
            dim: usize,
            v: Vec<T>,
            w: i64,
            buckets: &mut BTreeMap<i64, Subspace<T>>,
            queue: &mut VecDeque<(Vec<T>, i64)>,
        ) {
            let bucket = buckets.entry(w).or_insert_with(|| Subspace::new(dim));
            let res = bucket.reduce(v);
            if !vec_is_zero(&res) {
                bucket.insert(res.clone());
                queue.push_back((res, w));
            }
        }
        for g in gens {
            for (w, part) in self.weight_parts(g) {
                push(dim, part, w, &mut buckets, &mut queue);
            }
        }
        while let Some((v, w)) = queue.pop_front() {
            for (m, shift) in &mats {
                let img = m.matvec(&v);
                if !vec_is_zero(&img) {
                    push(dim, img, w + shift, &mut buckets, &mut queue);
                }
            }
        }
        let mut all = Subspace::new(self.dim);
        for bucket in buckets.values() {
            for row in bucket.basis() {
                all.insert(row.clone());
            }
        }
        all
    }

    fn invariance_check(&self, v: &Subspace<T>) -> Result<()> {
        for comp in &self.components {
            for kind in [GenKind::Raise, GenKind::Lower, GenKind::Cartan] {
                for m in comp.mats(kind) {
                    for row in v.basis() {
                        if !v.contains(&m.matvec(row)) {
                            return Err(Error::NotInvariant);
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Quotient by an invariant subspace. The complement basis consists of
    /// the standard basis vectors at non-pivot columns, in index order.
    pub fn quotient(&self, v: &Subspace<T>) -> Result<ModuleRep<T>> {
        if v.n_cols() != self.dim {
            return Err(Error::Inconsistent("subspace dimension mismatch".into()));
        }
        self.invariance_check(v)?;
        let pivset: std::collections::BTreeSet<usize> = v.pivots().iter().copied().collect();
        let complement: Vec<usize> = (0..self.dim).filter(|i| !pivset.contains(i)).collect();
        let new_dim = complement.len();
        let weights: Vec<i64> = complement.iter().map(|&i| self.weights[i]).collect();
        let project = |m: &Matrix<T>| -> Matrix<T> {
            let mut out: Matrix<T> = Matrix::zeros(new_dim, new_dim);
            for (jc, &full_j) in complement.iter().enumerate() {
                let img = v.reduce(m.column(full_j));
                for (ic, &full_i) in complement.iter().enumerate() {
                    if !img[full_i].is_zero() {
                        out.set(ic, jc, img[full_i].clone());
                    }
                }
            }
            out
        };
        let components = self
            .components
            .iter()
            .map(|c| Component {
                a: c.a.clone(),
                raise: c.raise.iter().map(&project).collect(),
                lower: c.lower.iter().map(&project).collect(),
                cartan: c.cartan.iter().map(&project).collect(),
            })
            .collect();
        Ok(ModuleRep::from_parts(new_dim, weights, components))
    }

    /// Restriction of the action to an invariant subspace, in the canonical
    /// basis of the subspace.
    pub fn restrict(&self, s: &Subspace<T>) -> Result<ModuleRep<T>> {
        if s.n_cols() != self.dim {
            return Err(Error::Inconsistent("subspace dimension mismatch".into()));
        }
        let new_dim = s.rank();
        let mut weights = Vec::with_capacity(new_dim);
        for row in s.basis() {
            let mut w = None;
            for (i, x) in row.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                match w {
                    None => w = Some(self.weights[i]),
                    Some(prev) if prev != self.weights[i] => {
                        return Err(Error::Inconsistent(
                            "subspace basis is not weight-homogeneous".into(),
                        ))
                    }
                    _ => {}
                }
            }
            weights.push(w.ok_or_else(|| Error::Inconsistent("zero basis row".into()))?);
        }
        let project = |m: &Matrix<T>| -> Result<Matrix<T>> {
            let mut out: Matrix<T> = Matrix::zeros(new_dim, new_dim);
            for (j, row) in s.basis().iter().enumerate() {
                let img = m.matvec(row);
                let coords = s.coords(&img).ok_or(Error::NotInvariant)?;
                for (i, c) in coords.into_iter().enumerate() {
                    if !c.is_zero() {
                        out.set(i, j, c);
                    }
                }
            }
            Ok(out)
        };
        let mut components = Vec::new();
        for c in &self.components {
            let mut comp = Component {
                a: c.a.clone(),
                raise: Vec::new(),
                lower: Vec::new(),
                cartan: Vec::new(),
            };
            for m in &c.raise {
                comp.raise.push(project(m)?);
            }
            for m in &c.lower {
                comp.lower.push(project(m)?);
            }
            for m in &c.cartan {
                comp.cartan.push(project(m)?);
            }
            components.push(comp);
        }
        Ok(ModuleRep::from_parts(new_dim, weights, components))
    }

    /// Coordinates of a full-space vector in the restricted module's basis.
    pub fn restrict_vector(s: &Subspace<T>, v: &[T]) -> Result<Vec<T>> {
        s.coords(v)
            .ok_or_else(|| Error::Inconsistent("vector outside the subspace".into()))
    }

    /// For each weight, the joint kernel of the raising operators
    /// `x_k^+` for `k = 0 .. component_rank - 1`. Only nonzero kernels are
    /// returned, ordered by descending weight.
    pub fn singular_vectors(&self) -> Vec<(i64, Subspace<T>)> {
        let rank = self.component_rank().max(1);
        let ops: Vec<Matrix<T>> = (0..rank)
            .map(|k| self.op_matrix(GenKind::Raise, k as i64))
            .collect();
        let refs: Vec<&Matrix<T>> = ops.iter().collect();
        let mut sectors: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (i, w) in self.weights.iter().enumerate() {
            sectors.entry(*w).or_default().push(i);
        }
        let mut out = Vec::new();
        for (&w, idxs) in sectors.iter().rev() {
            let kernel = null_space_joint(&refs, idxs, self.dim);
            if !kernel.is_empty() {
                out.push((w, Subspace::from_vectors(self.dim, kernel)));
            }
        }
        out
    }

    /// Partition of the basis by `h_0` eigenvalue.
    pub fn weight_decomposition(&self) -> BTreeMap<i64, Subspace<T>> {
        let mut out: BTreeMap<i64, Subspace<T>> = BTreeMap::new();
        for (i, w) in self.weights.iter().enumerate() {
            let sub = out.entry(*w).or_insert_with(|| Subspace::new(self.dim));
            let mut e = vec![T::zero(); self.dim];
            e[i] = T::one();
            sub.insert(e);
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let sparse = |m: &Matrix<T>| -> Value {
            let mut triples = Vec::new();
            for i in 0..m.n_rows() {
                for j in 0..m.n_cols() {
                    if !m.get(i, j).is_zero() {
                        triples.push(json!({"row": i, "col": j, "value": m.get(i, j).to_string()}));
                    }
                }
            }
            Value::Array(triples)
        };
        json!({
            "dim": self.dim,
            "weights": self.weights,
            "components": self.components.iter().map(|c| json!({
                "a": c.a.to_string(),
                "raise": c.raise.iter().map(&sparse).collect::<Vec<_>>(),
                "lower": c.lower.iter().map(&sparse).collect::<Vec<_>>(),
                "cartan": c.cartan.iter().map(&sparse).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let dim = v
            .get("dim")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("missing \"dim\"".into()))? as usize;
        let weights: Vec<i64> = v
            .get("weights")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing \"weights\"".into()))?
            .iter()
            .map(|x| x.as_i64().ok_or_else(|| Error::Parse("bad weight".into())))
            .collect::<Result<_>>()?;
        let dense = |v: &Value| -> Result<Matrix<T>> {
            let mut m: Matrix<T> = Matrix::zeros(dim, dim);
            for t in v
                .as_array()
                .ok_or_else(|| Error::Parse("bad matrix triples".into()))?
            {
                let row = t.get("row").and_then(Value::as_u64).unwrap_or(u64::MAX) as usize;
                let col = t.get("col").and_then(Value::as_u64).unwrap_or(u64::MAX) as usize;
                let val = t
                    .get("value")
                    .and_then(Value::as_str)
                    .and_then(T::parse_exact)
                    .ok_or_else(|| Error::Parse("bad matrix entry".into()))?;
                if row >= dim || col >= dim {
                    return Err(Error::Parse("matrix index out of range".into()));
                }
                m.set(row, col, val);
            }
            Ok(m)
        };
        let mut components = Vec::new();
        for c in v
            .get("components")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing \"components\"".into()))?
        {
            let a = c
                .get("a")
                .and_then(Value::as_str)
                .and_then(T::parse_exact)
                .ok_or_else(|| Error::Parse("bad component parameter".into()))?;
            let stack = |key: &str| -> Result<Vec<Matrix<T>>> {
                c.get(key)
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::Parse(format!("missing {key:?}")))?
                    .iter()
                    .map(&dense)
                    .collect()
            };
            components.push(Component {
                a,
                raise: stack("raise")?,
                lower: stack("lower")?,
                cartan: stack("cartan")?,
            });
        }
        Ok(ModuleRep::from_parts(dim, weights, components))
    }
}

fn lift_factor<T: Scalar>(
    m: &Matrix<T>,
    f_idx: usize,
    factors: &[ModuleRep<T>],
    strides: &[usize],
    dim: usize,
) -> Matrix<T> {
    let stride = strides[f_idx];
    let fdim = factors[f_idx].dim;
    let mut out: Matrix<T> = Matrix::zeros(dim, dim);
    for idx_in in 0..dim {
        let i_in = (idx_in / stride) % fdim;
        for i_out in 0..fdim {
            let e = m.get(i_out, i_in);
            if e.is_zero() {
                continue;
            }
            let idx_out = (idx_in as i64 + (i_out as i64 - i_in as i64) * stride as i64) as usize;
            out.add_at(idx_out, idx_in, e.clone());
        }
    }
    out
}
