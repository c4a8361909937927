//! Exact scalar arithmetic, symmetric-function utilities, Newton identities,
//! and highest weight parameter/polynomial bookkeeping.

use std::fmt;
use std::str::FromStr;

use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::{Error, Result};

/// Exact ordered field the whole crate is generic over.
///
/// The `Eq + Ord` bounds require exact equality and a total order, which keeps
/// floating-point types out by construction: every zero test in the engine is
/// a hard mathematical statement.
pub trait Scalar:
    Clone
    + Eq
    + Ord
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Signed
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    fn parse_exact(s: &str) -> Option<Self>;
}

impl<T> Scalar for T
where
    T: Clone
        + Eq
        + Ord
        + fmt::Debug
        + fmt::Display
        + Zero
        + One
        + Signed
        + FromPrimitive
        + ToPrimitive
        + FromStr
        + Send
        + Sync
        + 'static,
{
    fn parse_exact(s: &str) -> Option<Self> {
        s.trim().parse().ok()
    }
}

/// Embeds a machine integer into the scalar field.
pub fn int<T: Scalar>(n: i64) -> T {
    T::from_i64(n).expect("scalar field embeds i64")
}

/// `p/q` as a scalar; panics on `q = 0`.
pub fn ratio<T: Scalar>(p: i64, q: i64) -> T {
    assert!(q != 0, "zero denominator");
    int::<T>(p) / int::<T>(q)
}

/// Integer power with negative exponents allowed for nonzero bases.
pub fn pow_int<T: Scalar>(a: &T, k: i64) -> T {
    if k < 0 {
        assert!(!a.is_zero(), "negative power of zero");
        return pow_int(&(T::one() / a.clone()), -k);
    }
    let mut acc = T::one();
    let mut base = a.clone();
    let mut e = k as u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base.clone();
        }
        e >>= 1;
        if e > 0 {
            base = base.clone() * base;
        }
    }
    acc
}

/// Returns `Some(n)` iff the scalar is exactly the integer `n`.
pub fn to_exact_i64<T: Scalar>(x: &T) -> Option<i64> {
    let n = x.to_i64()?;
    if int::<T>(n) == *x {
        Some(n)
    } else {
        None
    }
}

pub fn factorial<T: Scalar>(n: usize) -> T {
    let mut acc = T::one();
    for i in 1..=n {
        acc = acc * int::<T>(i as i64);
    }
    acc
}

/// Binomial coefficient extended to arbitrary integer upper argument:
/// `n (n-1) ... (n-k+1) / k!`.
pub fn binomial_extended<T: Scalar>(n: i64, k: usize) -> T {
    let mut num = T::one();
    for i in 0..k {
        num = num * int::<T>(n - i as i64);
    }
    num / factorial::<T>(k)
}

/// All elementary symmetric polynomials `e_0 .. e_n` of the given values.
pub fn elem_sym_all<T: Scalar>(values: &[T]) -> Vec<T> {
    let mut e = vec![T::zero(); values.len() + 1];
    e[0] = T::one();
    for (i, v) in values.iter().enumerate() {
        // e'_k = e_k + v * e_{k-1}, processed downwards
        for k in (1..=i + 1).rev() {
            let add = v.clone() * e[k - 1].clone();
            e[k] = e[k].clone() + add;
        }
    }
    e
}

/// `k`-th elementary symmetric polynomial; `k = 0` gives 1.
pub fn elem_sym<T: Scalar>(values: &[T], k: usize) -> Result<T> {
    if k > values.len() {
        return Err(Error::Range(format!(
            "elementary symmetric degree {k} exceeds {} values",
            values.len()
        )));
    }
    Ok(elem_sym_all(values).swap_remove(k))
}

/// Power sum `sum_j v_j^k`; negative `k` requires nonzero values.
pub fn power_sum<T: Scalar>(values: &[T], k: i64) -> T {
    values.iter().fold(T::zero(), |acc, v| acc + pow_int(v, k))
}

/// Newton identity `lambda_n = (1/n) sum_{k=1}^{n} (-1)^{k-1} d_k lambda_{n-k}`;
/// takes `d_1 .. d_r` and returns `lambda_1 .. lambda_r` (`lambda_0 = 1` implied).
pub fn newton_lambda_from_d<T: Scalar>(d: &[T]) -> Vec<T> {
    let r = d.len();
    let mut lam = vec![T::one()];
    for n in 1..=r {
        let mut acc = T::zero();
        for k in 1..=n {
            let term = d[k - 1].clone() * lam[n - k].clone();
            if k % 2 == 1 {
                acc = acc + term;
            } else {
                acc = acc - term;
            }
        }
        lam.push(acc / int::<T>(n as i64));
    }
    lam.remove(0);
    lam
}

/// Distinct nonzero highest weight parameters with multiplicities.
///
/// Entries are kept sorted by value, so the 1-based index `j` used in labels
/// and operator names is stable for a given parameter set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HwParams<T> {
    entries: Vec<(T, usize)>,
}

impl<T: Scalar> HwParams<T> {
    pub fn new(mut entries: Vec<(T, usize)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidParameter(
                "at least one highest weight parameter is required".into(),
            ));
        }
        for (a, m) in &entries {
            if a.is_zero() {
                return Err(Error::InvalidParameter(
                    "highest weight parameters must be nonzero".into(),
                ));
            }
            if *m == 0 {
                return Err(Error::InvalidParameter(
                    "multiplicities must be positive".into(),
                ));
            }
        }
        entries.sort_by(|x, y| x.0.cmp(&y.0));
        if entries.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidParameter(
                "parameters must be distinct; merge multiplicities explicitly".into(),
            ));
        }
        Ok(HwParams { entries })
    }

    /// Parses the CLI grammar `a:m,a:m,...` with `a` an integer or `p/q`.
    pub fn parse_spec(s: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for part in s.split(',') {
            let part = part.trim();
            let (a, m) = part.split_once(':').ok_or_else(|| {
                Error::Parse(format!("expected a:m in parameter spec, got {part:?}"))
            })?;
            let a = T::parse_exact(a)
                .ok_or_else(|| Error::Parse(format!("bad rational {a:?} in parameter spec")))?;
            let m: usize = m
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad multiplicity {m:?} in parameter spec")))?;
            entries.push((a, m));
        }
        HwParams::new(entries)
    }

    pub fn entries(&self) -> &[(T, usize)] {
        &self.entries
    }

    /// Number of distinct parameters `s`.
    pub fn s(&self) -> usize {
        self.entries.len()
    }

    /// Total parameter count `r = sum m_j`.
    pub fn r(&self) -> usize {
        self.entries.iter().map(|(_, m)| m).sum()
    }

    pub fn distinct(&self) -> Vec<T> {
        self.entries.iter().map(|(a, _)| a.clone()).collect()
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.entries.iter().map(|(_, m)| *m).collect()
    }

    /// The flattened sequence `â`: each parameter repeated by multiplicity,
    /// ordered by entry then repetition.
    pub fn flatten(&self) -> Vec<T> {
        let mut out = Vec::with_capacity(self.r());
        for (a, m) in &self.entries {
            for _ in 0..*m {
                out.push(a.clone());
            }
        }
        out
    }

    /// Highest weight `d_k = sum_j â_j^k` for any integer `k`.
    pub fn d(&self, k: i64) -> T {
        self.entries.iter().fold(T::zero(), |acc, (a, m)| {
            acc + int::<T>(*m as i64) * pow_int(a, k)
        })
    }

    /// `d_m(alpha) = sum_j â_j^{m-n} prod_i (â_j - alpha_i)` with `n = |alpha|`.
    /// Vanishes for every `m` as soon as `alpha` contains all distinct parameters.
    pub fn d_alpha(&self, alpha: &[T], m: i64) -> T {
        let n = alpha.len() as i64;
        let mut acc = T::zero();
        for aj in self.flatten() {
            let mut prod = pow_int(&aj, m - n);
            for al in alpha {
                prod = prod * (aj.clone() - al.clone());
            }
            acc = acc + prod;
        }
        acc
    }

    /// Eigenvalues `lambda_1 .. lambda_r` (elementary symmetric polynomials of `â`).
    pub fn lambda(&self) -> Vec<T> {
        let mut e = elem_sym_all(&self.flatten());
        e.remove(0);
        e
    }

    /// Shifted eigenvalues `lambda_n(a)`: elementary symmetric polynomials of `â_j - a`.
    pub fn lambda_shifted(&self, a: &T) -> Vec<T> {
        let shifted: Vec<T> = self.flatten().into_iter().map(|x| x - a.clone()).collect();
        let mut e = elem_sym_all(&shifted);
        e.remove(0);
        e
    }

    /// Extends the power sums past degree `r` through Newton's second formula:
    /// `d_{r+1+j} = sum_{k=1}^{r} (-1)^{r-k} lambda_{r+1-k} d_{k+j}`.
    ///
    /// The provided `lambda` must be consistent with the parameters.
    pub fn newton_extend_d(&self, lambda: &[T], j: i64) -> Result<T> {
        if lambda != self.lambda().as_slice() {
            return Err(Error::Inconsistent(
                "lambda sequence does not match the parameters".into(),
            ));
        }
        let r = self.r();
        let mut acc = T::zero();
        for k in 1..=r {
            let term = lambda[r - k].clone() * self.d(k as i64 + j);
            if (r - k) % 2 == 0 {
                acc = acc + term;
            } else {
                acc = acc - term;
            }
        }
        Ok(acc)
    }

    /// The highest weight polynomial `P(u) = prod_j (1 - a_j u)^{m_j}`.
    pub fn poly(&self) -> HwPoly<T> {
        HwPoly::from_lambda(&self.lambda())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "params": self
                .entries
                .iter()
                .map(|(a, m)| json!({"a": a.to_string(), "m": m}))
                .collect::<Vec<_>>()
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let arr = v
            .get("params")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("expected {\"params\": [...]}".into()))?;
        let mut entries = Vec::new();
        for item in arr {
            let a = item
                .get("a")
                .and_then(Value::as_str)
                .and_then(T::parse_exact)
                .ok_or_else(|| Error::Parse("bad \"a\" field".into()))?;
            let m = item
                .get("m")
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::Parse("bad \"m\" field".into()))?
                as usize;
            entries.push((a, m));
        }
        HwParams::new(entries)
    }
}

impl<T: Scalar> fmt::Display for HwParams<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(a, m)| format!("{a}:{m}"))
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Highest weight polynomial `P(u) = sum_k (-1)^k lambda_k u^k`,
/// stored by its signed coefficients `c_k = (-1)^k lambda_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HwPoly<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> HwPoly<T> {
    /// Builds from `lambda_1 .. lambda_r` (`lambda_0 = 1` implied).
    pub fn from_lambda(lambda: &[T]) -> Self {
        let mut coeffs = vec![T::one()];
        for (k, l) in lambda.iter().enumerate() {
            let c = if (k + 1) % 2 == 1 {
                -l.clone()
            } else {
                l.clone()
            };
            coeffs.push(c);
        }
        HwPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Recovers `lambda_1 .. lambda_r`.
    pub fn lambda(&self) -> Vec<T> {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| if k % 2 == 1 { -c.clone() } else { c.clone() })
            .collect()
    }

    pub fn eval(&self, u: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * u.clone() + c.clone();
        }
        acc
    }

    pub fn derivative(&self) -> HwPoly<T> {
        if self.coeffs.len() <= 1 {
            return HwPoly {
                coeffs: vec![T::zero()],
            };
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| int::<T>(k as i64) * c.clone())
            .collect();
        HwPoly { coeffs }
    }

    /// Multiplicity of `u0` as a root, by exact derivative chain.
    pub fn root_multiplicity(&self, u0: &T) -> usize {
        let mut p = self.clone();
        let mut mult = 0;
        while mult <= self.degree() && p.eval(u0).is_zero() {
            mult += 1;
            p = p.derivative();
        }
        mult
    }
}

impl<T: Scalar> fmt::Display for HwPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() && self.coeffs.len() > 1 {
                continue;
            }
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
            match k {
                0 => write!(f, "{mag}")?,
                1 if mag.is_one() => write!(f, "u")?,
                1 => write!(f, "{mag} u")?,
                _ if mag.is_one() => write!(f, "u^{k}")?,
                _ => write!(f, "{mag} u^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
