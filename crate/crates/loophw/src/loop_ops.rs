//! Formal loop-algebra elements: primitive generators, generators with
//! parameter sequences, the rho and w operators, and sequence algebra.
//!
//! A [`LoopCombo`] is a finite linear combination of primitive generators of a
//! single kind (raising, lowering or Cartan). Mixed-kind expressions such as
//! commutators are never materialized symbolically; the commutation relations
//! are verified on concrete modules instead.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use crate::scalars::{elem_sym_all, Scalar};
use crate::{Error, HwParams, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GenKind {
    Raise,
    Lower,
    Cartan,
}

impl GenKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GenKind::Raise => "raise",
            GenKind::Lower => "lower",
            GenKind::Cartan => "cartan",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "raise" => Ok(GenKind::Raise),
            "lower" => Ok(GenKind::Lower),
            "cartan" => Ok(GenKind::Cartan),
            other => Err(Error::Parse(format!("unknown generator kind {other:?}"))),
        }
    }

    /// Weight shift of the generator: +2, -2 or 0.
    pub fn weight_shift(self) -> i64 {
        match self {
            GenKind::Raise => 2,
            GenKind::Lower => -2,
            GenKind::Cartan => 0,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            GenKind::Raise => "x^+",
            GenKind::Lower => "x^-",
            GenKind::Cartan => "h",
        }
    }
}

/// A primitive generator `x_k^+`, `x_k^-` or `h_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenSymbol {
    pub kind: GenKind,
    pub degree: i64,
}

impl GenSymbol {
    pub fn new(kind: GenKind, degree: i64) -> Self {
        GenSymbol { kind, degree }
    }
}

/// An ordered finite sequence of scalar parameters.
///
/// Order is significant only for notation; everything the sequence is
/// expanded into is symmetric in the entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamSeq<T>(Vec<T>);

impl<T: Scalar> ParamSeq<T> {
    pub fn new(values: Vec<T>) -> Self {
        ParamSeq(values)
    }

    pub fn empty() -> Self {
        ParamSeq(Vec::new())
    }

    /// The sequence `(a)^n`: parameter `a` repeated `n` times.
    pub fn repeated(a: &T, n: usize) -> Self {
        ParamSeq(vec![a.clone(); n])
    }

    pub fn values(&self) -> &[T] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Concatenation `alpha beta`.
    pub fn compose(&self, other: &ParamSeq<T>) -> ParamSeq<T> {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        ParamSeq(v)
    }

    /// The sequence with the entry at 0-based position `i` removed.
    pub fn omit(&self, i: usize) -> ParamSeq<T> {
        let mut v = self.0.clone();
        v.remove(i);
        ParamSeq(v)
    }

    pub fn is_distinct(&self) -> bool {
        let mut sorted = self.0.clone();
        sorted.sort();
        sorted.windows(2).all(|w| w[0] != w[1])
    }
}

/// A finite formal linear combination of same-kind generators,
/// `sum_k c_k x_k` with exact coefficients and no stored zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopCombo<T> {
    kind: GenKind,
    terms: BTreeMap<i64, T>,
}

impl<T: Scalar> LoopCombo<T> {
    pub fn zero(kind: GenKind) -> Self {
        LoopCombo {
            kind,
            terms: BTreeMap::new(),
        }
    }

    /// The single generator `x_degree` of the given kind.
    pub fn gen(kind: GenKind, degree: i64) -> Self {
        let mut c = LoopCombo::zero(kind);
        c.add_term(degree, T::one());
        c
    }

    pub fn kind(&self) -> GenKind {
        self.kind
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &T)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub fn coeff(&self, degree: i64) -> T {
        self.terms.get(&degree).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, degree: i64, c: T) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(degree).or_insert_with(T::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.terms.remove(&degree);
        }
    }

    pub fn scaled(&self, c: &T) -> Self {
        let mut out = LoopCombo::zero(self.kind);
        for (k, v) in &self.terms {
            out.add_term(*k, v.clone() * c.clone());
        }
        out
    }

    pub fn plus(&self, other: &Self) -> Self {
        assert_eq!(self.kind, other.kind, "kind-homogeneous combinations only");
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(*k, v.clone());
        }
        out
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.plus(&other.scaled(&-T::one()))
    }

    /// Generator with parameters:
    /// `x_m(alpha) = sum_k (-1)^k e_k(alpha) x_{m-k}`.
    pub fn expand_with_params(kind: GenKind, m: i64, alpha: &ParamSeq<T>) -> Self {
        let e = elem_sym_all(alpha.values());
        let mut out = LoopCombo::zero(kind);
        for (k, ek) in e.into_iter().enumerate() {
            let c = if k % 2 == 0 { ek } else { -ek };
            out.add_term(m - k as i64, c);
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let mut terms = serde_json::Map::new();
        for (k, v) in &self.terms {
            terms.insert(k.to_string(), Value::String(v.to_string()));
        }
        json!({"kind": self.kind.as_str(), "terms": terms})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let kind = GenKind::parse(
            v.get("kind")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Parse("missing \"kind\"".into()))?,
        )?;
        let mut out = LoopCombo::zero(kind);
        let terms = v
            .get("terms")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Parse("missing \"terms\"".into()))?;
        for (k, c) in terms {
            let deg: i64 = k
                .parse()
                .map_err(|_| Error::Parse(format!("bad degree {k:?}")))?;
            let c = c
                .as_str()
                .and_then(T::parse_exact)
                .ok_or_else(|| Error::Parse(format!("bad coefficient for degree {k}")))?;
            out.add_term(deg, c);
        }
        Ok(out)
    }
}

impl<T: Scalar> From<GenSymbol> for LoopCombo<T> {
    fn from(g: GenSymbol) -> Self {
        LoopCombo::gen(g.kind, g.degree)
    }
}

impl<T: Scalar> fmt::Display for LoopCombo<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.terms.iter().rev() {
            let (sign, mag) = if c.is_negative() {
                ("-", -c.clone())
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            if mag.is_one() {
                write!(f, "{}_{{{}}}", self.kind.symbol(), k)?;
            } else {
                write!(f, "{} {}_{{{}}}", mag, self.kind.symbol(), k)?;
            }
        }
        Ok(())
    }
}

/// `rho_j = x_{s-1}(a_1, ..â_j.., a_s)`: the degree-(s-1) generator with the
/// distinct parameter list omitting the 1-based entry `j`.
pub fn rho<T: Scalar>(kind: GenKind, p: &HwParams<T>, j: usize) -> Result<LoopCombo<T>> {
    let s = p.s();
    if j == 0 || j > s {
        return Err(Error::Range(format!("rho index {j} outside 1..={s}")));
    }
    let seq = ParamSeq::new(p.distinct()).omit(j - 1);
    Ok(LoopCombo::expand_with_params(kind, s as i64 - 1, &seq))
}

/// Both sides of the inversion identity
/// `(-1)^{n-1} sum_{j<=n} rho_j / prod_{k<=n, k!=j} (alpha_k - alpha_j)
///  = x_{m-n}(alpha_{n+1}, .., alpha_m)`,
/// returned as `(lhs, rhs)` for term-by-term comparison.
pub fn rho_inverse_identity<T: Scalar>(
    kind: GenKind,
    seq: &ParamSeq<T>,
    n: usize,
) -> Result<(LoopCombo<T>, LoopCombo<T>)> {
    let m = seq.len();
    if n == 0 || n > m {
        return Err(Error::Range(format!("n = {n} outside 1..={m}")));
    }
    if !seq.is_distinct() {
        return Err(Error::DegenerateDenominator);
    }
    let vals = seq.values();
    let mut lhs = LoopCombo::zero(kind);
    for j in 0..n {
        let rho_j = LoopCombo::expand_with_params(kind, m as i64 - 1, &seq.omit(j));
        let mut denom = T::one();
        for (k, vk) in vals.iter().enumerate().take(n) {
            if k != j {
                denom = denom * (vk.clone() - vals[j].clone());
            }
        }
        lhs = lhs.plus(&rho_j.scaled(&(T::one() / denom)));
    }
    let sign = if (n - 1) % 2 == 0 {
        T::one()
    } else {
        -T::one()
    };
    lhs = lhs.scaled(&sign);
    let tail = ParamSeq::new(vals[n..].to_vec());
    let rhs = LoopCombo::expand_with_params(kind, (m - n) as i64, &tail);
    Ok((lhs, rhs))
}

/// The lowering operator `w_A = x_{r-|A|}(â \ A)` for a sub-multiset `A`
/// encoded as per-distinct-parameter removal counts.
pub fn w_operator<T: Scalar>(p: &HwParams<T>, counts: &[usize]) -> Result<LoopCombo<T>> {
    if counts.len() != p.s() {
        return Err(Error::NotContained(format!(
            "expected {} removal counts, got {}",
            p.s(),
            counts.len()
        )));
    }
    let mut seq = Vec::new();
    let mut removed = 0usize;
    for ((a, m), c) in p.entries().iter().zip(counts) {
        if *c > *m {
            return Err(Error::NotContained(format!(
                "cannot remove {c} copies of {a} (multiplicity {m})"
            )));
        }
        removed += *c;
        for _ in 0..(m - c) {
            seq.push(a.clone());
        }
    }
    Ok(LoopCombo::expand_with_params(
        GenKind::Lower,
        (p.r() - removed) as i64,
        &ParamSeq::new(seq),
    ))
}

/// `w_{j^k}` for a single 1-based parameter index `j`, extended to `k <= 0`:
/// negative `k` appends `-k` extra copies of `a_j` instead of removing.
/// Used by the recursive commutator expansions, where the operator identity
/// runs over degrees below the removal range.
pub fn w_extended<T: Scalar>(p: &HwParams<T>, j: usize, k: i64) -> Result<LoopCombo<T>> {
    if j == 0 || j > p.s() {
        return Err(Error::Range(format!(
            "parameter index {j} outside 1..={}",
            p.s()
        )));
    }
    let mj = p.entries()[j - 1].1 as i64;
    if k > mj {
        return Err(Error::NotContained(format!(
            "cannot remove {k} copies of parameter {j} (multiplicity {mj})"
        )));
    }
    let mut seq = Vec::new();
    for (idx, (a, m)) in p.entries().iter().enumerate() {
        let copies = if idx + 1 == j {
            (*m as i64 - k) as usize
        } else {
            *m
        };
        for _ in 0..copies {
            seq.push(a.clone());
        }
    }
    Ok(LoopCombo::expand_with_params(
        GenKind::Lower,
        p.r() as i64 - k,
        &ParamSeq::new(seq),
    ))
}
