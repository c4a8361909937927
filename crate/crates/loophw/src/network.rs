//! The submodule network: directed graph of w-monomial labels from the
//! maximal vector down to the empty label, with predicted and exact
//! irreducible-quotient dimensions, conjecture-based vanishing explanations,
//! and reducible-dimension enumeration by cuts.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde_json::{json, Value};

use crate::analysis::eigen_scalar;
use crate::linalg::{vec_is_zero, Subspace};
use crate::loop_ops::{rho, w_extended, w_operator, GenKind, LoopCombo, ParamSeq};
use crate::rep::ModuleRep;
use crate::scalars::{binomial_extended, int, pow_int, Scalar};
use crate::{Error, HwParams, Result};

/// A network label: per distinct parameter `j`, a nondecreasing list of
/// removal exponents `k` with `1 <= k <= m_j - 1`. The label stands for the
/// vector `prod_j prod_t w_{j^{k_j(t)}} Omega`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct NetLabel {
    lists: Vec<Vec<usize>>,
}

impl NetLabel {
    pub fn new(mut lists: Vec<Vec<usize>>) -> Self {
        for l in &mut lists {
            l.sort_unstable();
        }
        NetLabel { lists }
    }

    pub fn empty(s: usize) -> Self {
        NetLabel {
            lists: vec![Vec::new(); s],
        }
    }

    pub fn lists(&self) -> &[Vec<usize>] {
        &self.lists
    }

    pub fn is_empty(&self) -> bool {
        self.lists.iter().all(Vec::is_empty)
    }

    /// All `(j, k)` factors with 1-based `j`, in canonical order.
    pub fn factors(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (j0, list) in self.lists.iter().enumerate() {
            for &k in list {
                out.push((j0 + 1, k));
            }
        }
        out
    }

    /// Parses `"1^1 2^2"` (whitespace or `*` separated `j^k` tokens);
    /// an empty label is written `∅` or `empty`.
    pub fn parse(s: &str, n_params: usize) -> Result<Self> {
        let s = s.trim();
        let mut lists = vec![Vec::new(); n_params];
        if s.is_empty() || s == "∅" || s == "empty" || s == "()" {
            return Ok(NetLabel { lists });
        }
        for token in s.split(|c: char| c.is_whitespace() || c == '*') {
            if token.is_empty() {
                continue;
            }
            let (j, k) = token
                .split_once('^')
                .ok_or_else(|| Error::Parse(format!("expected j^k, got {token:?}")))?;
            let j: usize = j
                .parse()
                .map_err(|_| Error::Parse(format!("bad parameter index in {token:?}")))?;
            let k: usize = k
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in {token:?}")))?;
            if j == 0 || j > n_params {
                return Err(Error::Parse(format!(
                    "parameter index {j} outside 1..={n_params}"
                )));
            }
            if k == 0 {
                return Err(Error::Parse("exponent must be positive".into()));
            }
            lists[j - 1].push(k);
        }
        Ok(NetLabel::new(lists))
    }

    /// The concrete vector `prod w_{j^k} Omega` in the given module.
    pub fn omega_vector<T: Scalar>(
        &self,
        module: &ModuleRep<T>,
        p: &HwParams<T>,
        omega: &[T],
    ) -> Result<Vec<T>> {
        let mut v = omega.to_vec();
        for (j, k) in self.factors() {
            let mut counts = vec![0usize; p.s()];
            counts[j - 1] = k;
            let w = w_operator(p, &counts)?;
            v = module.act_combo(&w, &v);
        }
        Ok(v)
    }
}

impl fmt::Display for NetLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let factors = self.factors();
        if factors.is_empty() {
            return write!(f, "∅");
        }
        let parts: Vec<String> = factors.iter().map(|(j, k)| format!("{j}^{k}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Which descent procedure produced an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Proc {
    II,
    III,
    IV,
    V,
}

impl Proc {
    pub fn tag(self) -> &'static str {
        match self {
            Proc::II => "ii",
            Proc::III => "iii",
            Proc::IV => "iv",
            Proc::V => "v",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "ii" => Ok(Proc::II),
            "iii" => Ok(Proc::III),
            "iv" => Ok(Proc::IV),
            "v" => Ok(Proc::V),
            other => Err(Error::Parse(format!("unknown procedure tag {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetEdge {
    pub parent: NetLabel,
    pub child: NetLabel,
    pub proc: Proc,
    pub j: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetVertex<T> {
    pub label: NetLabel,
    pub m_prime: Vec<usize>,
    pub predicted_dim: usize,
    pub exact_dim: Option<usize>,
    pub vanished: bool,
    /// `(j, n)` of the conjecture relation explaining an exact-zero quotient.
    pub explained: Option<(usize, usize)>,
    /// Materialized vector when a concrete module is attached.
    pub omega: Option<Vec<T>>,
}

impl<T> NetVertex<T> {
    pub fn quotient_dim(&self) -> usize {
        self.exact_dim.unwrap_or(self.predicted_dim)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkGraph<T> {
    pub params: HwParams<T>,
    pub vertices: BTreeMap<NetLabel, NetVertex<T>>,
    pub edges: Vec<NetEdge>,
    pub discrepancies: Vec<String>,
}

/// Largest `l_j` with `l_j < (m_j + 1) / 2`, i.e. `floor(m_j / 2)`.
pub fn ell_max<T: Scalar>(p: &HwParams<T>) -> Vec<usize> {
    p.multiplicities().iter().map(|m| m / 2).collect()
}

/// The source label: per parameter the list `(1, 3, ..., 2 l_j^max - 1)`.
pub fn omega_max_label<T: Scalar>(p: &HwParams<T>) -> NetLabel {
    let lists = ell_max(p)
        .into_iter()
        .map(|l| (1..=l).map(|t| 2 * t - 1).collect())
        .collect();
    NetLabel::new(lists)
}

/// Daughter labels of a parental label, one per applicable parameter index.
pub fn daughters<T: Scalar>(p: &HwParams<T>, label: &NetLabel) -> Vec<(NetLabel, Proc, usize)> {
    let mults = p.multiplicities();
    let l0 = ell_max(p);
    let mut out = Vec::new();
    for j0 in 0..p.s() {
        let list = &label.lists()[j0];
        let lj = list.len();
        if lj == 0 {
            continue;
        }
        let last = list[lj - 1];
        let mj = mults[j0];
        let mut lists = label.lists().to_vec();
        let (proc, new_list) = if lj >= l0[j0] {
            if last + 1 < mj {
                // (ii): increment the last entry
                let mut l = list.clone();
                l[lj - 1] = last + 1;
                (Proc::II, l)
            } else {
                // (iii): incrementing reaches m_j, drop the entry
                (Proc::III, list[..lj - 1].to_vec())
            }
        } else if last < mj - 1 {
            // (iv): increment, then refill back up to l_j^(0)
            let mut l = list.clone();
            l[lj - 1] = last + 1;
            for i in 1..=(l0[j0] - lj) {
                l.push((last + 1).max(2 * (lj + i) - 1));
            }
            (Proc::IV, l)
        } else {
            // (v): drop the entry
            (Proc::V, list[..lj - 1].to_vec())
        };
        lists[j0] = new_list;
        out.push((NetLabel::new(lists), proc, j0 + 1));
    }
    out
}

/// The conjectured degree-`n` relation among products of two w-operators:
/// `sum_{k=1}^{n} k w_{j^{k+1}} w_{j^{n+1-k}} Omega = 0`. Terms whose removal
/// exponent exceeds `m_j` have no corresponding sub-multiset and are absent.
pub fn conjecture_relation_check<T: Scalar>(
    module: &ModuleRep<T>,
    omega: &[T],
    p: &HwParams<T>,
    j: usize,
    n: usize,
) -> Result<bool> {
    if j == 0 || j > p.s() {
        return Err(Error::Range(format!(
            "parameter index {j} outside 1..={}",
            p.s()
        )));
    }
    let mj = p.multiplicities()[j - 1];
    if n > mj {
        return Err(Error::Range(format!("n = {n} exceeds multiplicity {mj}")));
    }
    let mut sum = vec![T::zero(); module.dim()];
    for k in 1..=n {
        if k + 1 > mj {
            continue;
        }
        let w_hi = w_extended(p, j, (k + 1) as i64)?;
        let w_lo = w_extended(p, j, (n + 1 - k) as i64)?;
        let v = module.act_combo(&w_hi, &module.act_combo(&w_lo, omega));
        let c = int::<T>(k as i64);
        for (s, x) in sum.iter_mut().zip(v) {
            if !x.is_zero() {
                *s = s.clone() + c.clone() * x;
            }
        }
    }
    Ok(vec_is_zero(&sum))
}

fn enumerate_labels<T: Scalar>(p: &HwParams<T>) -> (BTreeSet<NetLabel>, Vec<NetEdge>) {
    let source = omega_max_label(p);
    let mut labels = BTreeSet::new();
    labels.insert(source.clone());
    let mut edges = Vec::new();
    let mut frontier = vec![source];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for parent in frontier {
            for (child, proc, j) in daughters(p, &parent) {
                edges.push(NetEdge {
                    parent: parent.clone(),
                    child: child.clone(),
                    proc,
                    j,
                });
                if labels.insert(child.clone()) {
                    next.push(child);
                }
            }
        }
        next.sort();
        next.dedup();
        frontier = next;
    }
    edges.sort_by(|a, b| (&a.parent, &a.child, a.j).cmp(&(&b.parent, &b.child, b.j)));
    (labels, edges)
}

pub fn build_network<T: Scalar>(
    p: &HwParams<T>,
    concrete: Option<&ModuleRep<T>>,
) -> Result<NetworkGraph<T>> {
    build_network_jobs(p, concrete, 1)
}

/// Builds the full network. With a concrete module attached, every vertex
/// gets its exact quotient dimension `dim(V_par + U omega) - dim V_par`
/// over the sum `V_par` of its parents' submodules; exact zeros are flagged
/// and matched against the conjectured relations. Any prediction that
/// disagrees with the exact rank outside an explained vanishing is recorded
/// as a discrepancy, never silently accepted.
pub fn build_network_jobs<T: Scalar>(
    p: &HwParams<T>,
    concrete: Option<&ModuleRep<T>>,
    jobs: usize,
) -> Result<NetworkGraph<T>> {
    let (labels, edges) = enumerate_labels(p);
    let mults = p.multiplicities();
    let mut vertices: BTreeMap<NetLabel, NetVertex<T>> = BTreeMap::new();
    for label in &labels {
        let m_prime: Vec<usize> = mults
            .iter()
            .zip(label.lists())
            .map(|(m, l)| m - 2 * l.len())
            .collect();
        let predicted_dim = m_prime.iter().map(|m| m + 1).product();
        vertices.insert(
            label.clone(),
            NetVertex {
                label: label.clone(),
                m_prime,
                predicted_dim,
                exact_dim: None,
                vanished: false,
                explained: None,
                omega: None,
            },
        );
    }
    let mut discrepancies = Vec::new();

    if let Some(module) = concrete {
        let omega = module.omega()?;
        let mut omegas: BTreeMap<NetLabel, Vec<T>> = BTreeMap::new();
        for label in &labels {
            omegas.insert(label.clone(), label.omega_vector(module, p, &omega)?);
        }
        let closures = closures_for(module, &omegas, jobs.max(1));
        for label in &labels {
            // the parental submodule sum accumulates along the network: when a
            // vertex vanishes, its own closure can be strictly smaller than an
            // ancestor's, so the sum runs over all ancestors
            let mut parent_sum = Subspace::new(module.dim());
            for anc in ancestors(&edges, label) {
                for row in closures[&anc].basis() {
                    parent_sum.insert(row.clone());
                }
            }
            let base = parent_sum.rank();
            let mut joined = parent_sum;
            for row in closures[label].basis() {
                joined.insert(row.clone());
            }
            let exact = joined.rank() - base;
            let vertex = vertices.get_mut(label).unwrap();
            vertex.omega = Some(omegas[label].clone());
            vertex.exact_dim = Some(exact);
            vertex.vanished = exact == 0;
            if vertex.vanished {
                vertex.explained = explain_vanishing(module, &omega, p, label)?;
                if vertex.explained.is_none() {
                    discrepancies.push(format!(
                        "unexplained vanishing at {label}: predicted {}",
                        vertex.predicted_dim
                    ));
                }
            } else if exact != vertex.predicted_dim {
                discrepancies.push(format!(
                    "dimension mismatch at {label}: predicted {}, exact {exact}",
                    vertex.predicted_dim
                ));
            }
        }
        // empirical completeness: quotients must tile the generated module
        let total: usize = vertices.values().map(|v| v.exact_dim.unwrap()).sum();
        let whole = module.submodule_closure(&[omega]).rank();
        if total != whole {
            discrepancies.push(format!(
                "network quotients sum to {total}, module dimension is {whole}"
            ));
        }
    }

    Ok(NetworkGraph {
        params: p.clone(),
        vertices,
        edges,
        discrepancies,
    })
}

/// All strict ancestors of a label along the network edges.
fn ancestors(edges: &[NetEdge], label: &NetLabel) -> BTreeSet<NetLabel> {
    let mut out: BTreeSet<NetLabel> = BTreeSet::new();
    let mut frontier = vec![label.clone()];
    while let Some(cur) = frontier.pop() {
        for e in edges {
            if e.child == cur && out.insert(e.parent.clone()) {
                frontier.push(e.parent.clone());
            }
        }
    }
    out
}

fn closures_for<T: Scalar>(
    module: &ModuleRep<T>,
    omegas: &BTreeMap<NetLabel, Vec<T>>,
    jobs: usize,
) -> BTreeMap<NetLabel, Subspace<T>> {
    if jobs <= 1 || omegas.len() <= 1 {
        return omegas
            .iter()
            .map(|(l, v)| (l.clone(), module.submodule_closure(std::slice::from_ref(v))))
            .collect();
    }
    let items: Vec<(&NetLabel, &Vec<T>)> = omegas.iter().collect();
    let mut out = BTreeMap::new();
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for chunk in items.chunks(items.len().div_ceil(jobs)) {
            handles.push(scope.spawn(move || {
                chunk
                    .iter()
                    .map(|(l, v)| ((*l).clone(), module.submodule_closure(&[(*v).clone()])))
                    .collect::<Vec<_>>()
            }));
        }
        for h in handles {
            for (l, s) in h.join().expect("closure worker panicked") {
                out.insert(l, s);
            }
        }
    });
    out
}

/// Searches the label's exponent pairs for a conjectured relation that
/// accounts for an exact-zero quotient.
fn explain_vanishing<T: Scalar>(
    module: &ModuleRep<T>,
    omega: &[T],
    p: &HwParams<T>,
    label: &NetLabel,
) -> Result<Option<(usize, usize)>> {
    let mults = p.multiplicities();
    for (j0, list) in label.lists().iter().enumerate() {
        if list.len() < 2 {
            continue;
        }
        // prefer the two largest exponents, then earlier pairs
        let mut pairs = Vec::new();
        for x in (0..list.len()).rev() {
            for y in (0..x).rev() {
                pairs.push((list[y], list[x]));
            }
        }
        for (ka, kb) in pairs {
            let n = ka + kb - 2;
            if n > mults[j0] {
                continue;
            }
            if conjecture_relation_check(module, omega, p, j0 + 1, n)? {
                return Ok(Some((j0 + 1, n)));
            }
        }
    }
    Ok(None)
}

impl<T: Scalar> NetworkGraph<T> {
    pub fn source(&self) -> NetLabel {
        omega_max_label(&self.params)
    }

    pub fn sink(&self) -> NetLabel {
        NetLabel::empty(self.params.s())
    }

    pub fn total_quotient_dim(&self) -> usize {
        self.vertices.values().map(NetVertex::quotient_dim).sum()
    }

    /// Dimension of the reducible module obtained by declaring the cut
    /// labels' vectors zero: the sum of quotient dimensions over every vertex
    /// with no path into the cut.
    pub fn reducible_dims(&self, cut: &BTreeSet<NetLabel>) -> Result<usize> {
        for label in cut {
            if !self.vertices.contains_key(label) {
                return Err(Error::InvalidCut(format!("label {label} is not a vertex")));
            }
        }
        if cut.contains(&self.sink()) {
            return Err(Error::InvalidCut(
                "the end point cannot be declared zero".into(),
            ));
        }
        // reverse reachability into the cut
        let mut reaches: BTreeSet<NetLabel> = cut.clone();
        let mut changed = true;
        while changed {
            changed = false;
            for e in &self.edges {
                if reaches.contains(&e.child) && reaches.insert(e.parent.clone()) {
                    changed = true;
                }
            }
        }
        Ok(self
            .vertices
            .values()
            .filter(|v| !reaches.contains(&v.label))
            .map(NetVertex::quotient_dim)
            .sum())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "params": self.params.to_json(),
            "vertices": self.vertices.values().map(|v| json!({
                "label": v.label.to_string(),
                "m_prime": v.m_prime,
                "predicted_dim": v.predicted_dim,
                "exact_dim": v.exact_dim,
                "vanished": v.vanished,
                "explained": v.explained.map(|(j, n)| json!({"j": j, "n": n})),
            })).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|e| json!({
                "parent": e.parent.to_string(),
                "child": e.child.to_string(),
                "proc": e.proc.tag(),
                "j": e.j,
            })).collect::<Vec<_>>(),
            "discrepancies": self.discrepancies,
        })
    }

    /// Rebuilds a graph from its JSON export. Materialized vectors are not
    /// part of the wire format, so `omega` comes back empty.
    pub fn from_json(v: &Value) -> Result<Self> {
        let params = HwParams::from_json(
            v.get("params")
                .ok_or_else(|| Error::Parse("missing \"params\"".into()))?,
        )?;
        let s = params.s();
        let mut vertices = BTreeMap::new();
        for item in v
            .get("vertices")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing \"vertices\"".into()))?
        {
            let label = NetLabel::parse(
                item.get("label")
                    .and_then(Value::as_str)
                    .ok_or_else(|| Error::Parse("missing vertex label".into()))?,
                s,
            )?;
            let m_prime: Vec<usize> = item
                .get("m_prime")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse("missing m_prime".into()))?
                .iter()
                .map(|x| {
                    x.as_u64()
                        .map(|n| n as usize)
                        .ok_or_else(|| Error::Parse("bad m_prime entry".into()))
                })
                .collect::<Result<_>>()?;
            let vertex = NetVertex {
                label: label.clone(),
                m_prime,
                predicted_dim: item
                    .get("predicted_dim")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| Error::Parse("missing predicted_dim".into()))?
                    as usize,
                exact_dim: item
                    .get("exact_dim")
                    .and_then(Value::as_u64)
                    .map(|n| n as usize),
                vanished: item
                    .get("vanished")
                    .and_then(Value::as_bool)
                    .unwrap_or(false),
                explained: item.get("explained").and_then(|e| {
                    let j = e.get("j")?.as_u64()? as usize;
                    let n = e.get("n")?.as_u64()? as usize;
                    Some((j, n))
                }),
                omega: None,
            };
            vertices.insert(label, vertex);
        }
        let mut edges = Vec::new();
        for item in v
            .get("edges")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing \"edges\"".into()))?
        {
            edges.push(NetEdge {
                parent: NetLabel::parse(
                    item.get("parent")
                        .and_then(Value::as_str)
                        .ok_or_else(|| Error::Parse("missing edge parent".into()))?,
                    s,
                )?,
                child: NetLabel::parse(
                    item.get("child")
                        .and_then(Value::as_str)
                        .ok_or_else(|| Error::Parse("missing edge child".into()))?,
                    s,
                )?,
                proc: Proc::parse(
                    item.get("proc")
                        .and_then(Value::as_str)
                        .ok_or_else(|| Error::Parse("missing edge proc".into()))?,
                )?,
                j: item
                    .get("j")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| Error::Parse("missing edge j".into()))?
                    as usize,
            });
        }
        let discrepancies = v
            .get("discrepancies")
            .and_then(Value::as_array)
            .map(|a| {
                a.iter()
                    .filter_map(|x| x.as_str().map(String::from))
                    .collect()
            })
            .unwrap_or_default();
        Ok(NetworkGraph {
            params,
            vertices,
            edges,
            discrepancies,
        })
    }

    /// Graphviz export: one node per vertex labeled `Sigma | dim`, dashed
    /// nodes for vanished vertices, edges labeled by procedure tag.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph network {\n  rankdir=TB;\n");
        for v in self.vertices.values() {
            let dim = match v.exact_dim {
                Some(d) => d.to_string(),
                None => v.predicted_dim.to_string(),
            };
            let style = if v.vanished { ", style=dashed" } else { "" };
            out.push_str(&format!(
                "  \"{}\" [label=\"{} | {}\"{}];\n",
                v.label, v.label, dim, style
            ));
        }
        for e in &self.edges {
            out.push_str(&format!(
                "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
                e.parent,
                e.child,
                e.proc.tag()
            ));
        }
        out.push_str("}\n");
        out
    }
}

/// One verified statement of a highest-weight-modulo-V report.
#[derive(Debug, Clone)]
pub struct CheckItem {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct ModuloVReport {
    pub label: NetLabel,
    pub items: Vec<CheckItem>,
}

impl ModuloVReport {
    pub fn all_passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }

    pub fn failures(&self) -> Vec<&CheckItem> {
        self.items.iter().filter(|i| !i.passed).collect()
    }
}

/// Verifies that the label's vector is highest weight modulo the sum `V` of
/// its parents' submodules: raising operators land in `V`, the Cartan
/// operators act by `d_n' = d_n - 2 sum_j l_j a_j^n` modulo `V`, the reduced
/// reduction relation of order `r'` holds modulo `V`, the divided rho-powers
/// vanish modulo `V` when the modulo-V criterion holds, and the commutator
/// expansions with extended binomial coefficients hold on the top vector.
pub fn modulo_v_checks<T: Scalar>(
    module: &ModuleRep<T>,
    p: &HwParams<T>,
    label: &NetLabel,
) -> Result<ModuloVReport> {
    let (labels, edges) = enumerate_labels(p);
    if !labels.contains(label) {
        return Err(Error::InvalidCut(format!("label {label} is not a vertex")));
    }
    let omega = module.omega()?;
    let w_vec = label.omega_vector(module, p, &omega)?;
    let mut parent_sum = Subspace::new(module.dim());
    for anc in ancestors(&edges, label) {
        let pv = anc.omega_vector(module, p, &omega)?;
        for row in module.submodule_closure(&[pv]).basis() {
            parent_sum.insert(row.clone());
        }
    }
    let in_v = |v: &[T]| vec_is_zero(&parent_sum.reduce(v.to_vec()));

    let r = p.r() as i64;
    let mut items = Vec::new();

    // raising operators modulo V
    let mut ok = true;
    let mut detail = String::new();
    for n in -2..=(r + 2) {
        if !in_v(&module.act_gen(GenKind::Raise, n, &w_vec)) {
            ok = false;
            detail = format!("x_{n}^+ omega escapes V");
            break;
        }
    }
    items.push(CheckItem {
        name: "raising_mod_v".into(),
        passed: ok,
        detail,
    });

    // Cartan eigenvalues modulo V
    let distinct = p.distinct();
    let ells: Vec<usize> = label.lists().iter().map(Vec::len).collect();
    let mut ok = true;
    let mut detail = String::new();
    for n in -2..=(r + 2) {
        let mut dn_prime = p.d(n);
        for (j0, l) in ells.iter().enumerate() {
            dn_prime = dn_prime - int::<T>(2 * *l as i64) * pow_int(&distinct[j0], n);
        }
        let mut diff = module.act_gen(GenKind::Cartan, n, &w_vec);
        for (d, x) in diff.iter_mut().zip(&w_vec) {
            *d = d.clone() - dn_prime.clone() * x.clone();
        }
        if !in_v(&diff) {
            ok = false;
            detail = format!("h_{n} omega is not d_{n}' omega modulo V");
            break;
        }
    }
    items.push(CheckItem {
        name: "cartan_mod_v".into(),
        passed: ok,
        detail,
    });

    // reduced reduction relation of order r'
    let m_prime: Vec<usize> = p
        .multiplicities()
        .iter()
        .zip(&ells)
        .map(|(m, l)| m - 2 * l)
        .collect();
    let mut flat_prime = Vec::new();
    for (j0, mp) in m_prime.iter().enumerate() {
        for _ in 0..*mp {
            flat_prime.push(distinct[j0].clone());
        }
    }
    let r_prime = flat_prime.len() as i64;
    let seq_prime = ParamSeq::new(flat_prime);
    let mut ok = true;
    let mut detail = String::new();
    for n in -2..=(r_prime + 3) {
        let combo = LoopCombo::expand_with_params(GenKind::Lower, n, &seq_prime);
        if !in_v(&module.act_combo(&combo, &w_vec)) {
            ok = false;
            detail = format!("x_{n}^-(â') omega escapes V");
            break;
        }
    }
    items.push(CheckItem {
        name: "reduction_mod_v".into(),
        passed: ok,
        detail,
    });

    // criterion modulo V, and the rho-power vanishing it implies
    let crit_combo = LoopCombo::expand_with_params(
        GenKind::Lower,
        p.s() as i64,
        &ParamSeq::new(distinct.clone()),
    );
    let crit_mod_v = in_v(&module.act_combo(&crit_combo, &w_vec));
    if crit_mod_v {
        let mut ok = true;
        let mut detail = String::new();
        for (j0, mp) in m_prime.iter().enumerate() {
            let rj = rho(GenKind::Lower, p, j0 + 1)?;
            if !in_v(&module.apply_divided(&rj, mp + 1, &w_vec)) {
                ok = false;
                detail = format!("(rho_{}^-)^({}) omega escapes V", j0 + 1, mp + 1);
                break;
            }
        }
        items.push(CheckItem {
            name: "rho_power_mod_v".into(),
            passed: ok,
            detail,
        });
    } else {
        items.push(CheckItem {
            name: "rho_power_mod_v".into(),
            passed: true,
            detail: "criterion does not hold modulo V; vacuous".into(),
        });
    }

    // commutator expansion on the top vector for the label's factors
    let mut ok = true;
    let mut detail = String::new();
    'outer: for (j, k) in label.factors() {
        for n in (-3..=3i64).filter(|n| *n != 0) {
            let w_jk = w_extended(p, j, k as i64)?;
            let w_omega = module.act_combo(&w_jk, &omega);
            let lhs = {
                let mut h_w = module.act_gen(GenKind::Cartan, n, &w_omega);
                let dn = p.d(n);
                for (x, y) in h_w.iter_mut().zip(&w_omega) {
                    *x = x.clone() - dn.clone() * y.clone();
                }
                h_w
            };
            let mut rhs = vec![T::zero(); module.dim()];
            let t_max = if n > 0 {
                (n as usize).min(k - 1)
            } else {
                k - 1
            };
            for t in 0..=t_max {
                let c = int::<T>(-2)
                    * binomial_extended::<T>(n, t)
                    * pow_int(&distinct[j - 1], n - t as i64);
                let w_low = w_extended(p, j, (k - t) as i64)?;
                let term = module.act_combo(&w_low, &omega);
                for (o, x) in rhs.iter_mut().zip(term) {
                    if !x.is_zero() {
                        *o = o.clone() + c.clone() * x;
                    }
                }
            }
            if lhs != rhs {
                ok = false;
                detail = format!("commutator expansion fails for w_{{{j}^{k}}} at n = {n}");
                break 'outer;
            }
        }
    }
    items.push(CheckItem {
        name: "commutator_expansion".into(),
        passed: ok,
        detail,
    });

    Ok(ModuloVReport {
        label: label.clone(),
        items,
    })
}

/// Builds a module and its parameters from the CLI-facing spec format
/// `{"factors":[{"a":"2","m":1},...], "quotient_by":["w:1^1", ...]}`.
///
/// Factors sharing a parameter value must all be fundamental (`m = 1`) and
/// fuse into the local Weyl module of their count; a lone factor contributes
/// the evaluation module of its weight.
pub fn module_from_spec_json<T: Scalar>(
    v: &Value,
    cap: usize,
) -> Result<(ModuleRep<T>, HwParams<T>)> {
    let factors = v
        .get("factors")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("missing \"factors\"".into()))?;
    let mut groups: BTreeMap<T, Vec<usize>> = BTreeMap::new();
    for f in factors {
        let a = f
            .get("a")
            .and_then(Value::as_str)
            .and_then(T::parse_exact)
            .ok_or_else(|| Error::Parse("bad factor parameter".into()))?;
        let m = f
            .get("m")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("bad factor weight".into()))? as usize;
        groups.entry(a).or_default().push(m);
    }
    let mut entries = Vec::new();
    let mut pieces = Vec::new();
    for (a, ms) in groups {
        let total: usize = ms.iter().sum();
        entries.push((a.clone(), total));
        if ms.len() == 1 {
            pieces.push(ModuleRep::eval_module(a, ms[0])?);
        } else if ms.iter().all(|m| *m == 1) {
            pieces.push(ModuleRep::local_weyl(a, ms.len())?);
        } else {
            return Err(Error::InvalidParameter(
                "repeated factors at one parameter must all be fundamental".into(),
            ));
        }
    }
    let params = HwParams::new(entries)?;
    let mut module = ModuleRep::tensor_capped(&pieces, cap)?;
    if let Some(quots) = v.get("quotient_by").and_then(Value::as_array) {
        let omega = module.omega()?;
        let mut gens = Vec::new();
        for q in quots {
            let s = q
                .as_str()
                .ok_or_else(|| Error::Parse("quotient generator must be a string".into()))?;
            let s = s.strip_prefix("w:").unwrap_or(s);
            let label = NetLabel::parse(s, params.s())?;
            gens.push(label.omega_vector(&module, &params, &omega)?);
        }
        let sub = module.submodule_closure(&gens);
        module = module.quotient(&sub)?;
    }
    Ok((module, params))
}

/// Exact highest weight data of the source vector: used to confirm the
/// maximal vector is genuinely highest weight, not just modulo V.
pub fn source_is_exact_highest_weight<T: Scalar>(
    module: &ModuleRep<T>,
    p: &HwParams<T>,
) -> Result<bool> {
    let omega = module.omega()?;
    let label = omega_max_label(p);
    let v = label.omega_vector(module, p, &omega)?;
    if vec_is_zero(&v) {
        return Ok(false);
    }
    let r = p.r() as i64;
    for n in -2..=(r + 2) {
        if !vec_is_zero(&module.act_gen(GenKind::Raise, n, &v)) {
            return Ok(false);
        }
    }
    let distinct = p.distinct();
    let ells = ell_max(p);
    for n in -2..=(r + 2) {
        let mut dn = p.d(n);
        for (j0, l) in ells.iter().enumerate() {
            dn = dn - int::<T>(2 * *l as i64) * pow_int(&distinct[j0], n);
        }
        let hv = module.act_gen(GenKind::Cartan, n, &v);
        match eigen_scalar(&hv, &v) {
            Some(c) if c == dn => {}
            _ => return Ok(false),
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::int;
    use crate::Rat;

    fn r(n: i64) -> Rat {
        int(n)
    }

    fn params(spec: &str) -> HwParams<Rat> {
        HwParams::parse_spec(spec).unwrap()
    }

    #[test]
    fn ell_max_cases() {
        assert_eq!(ell_max(&params("2:3,3:3")), vec![1, 1]);
        assert_eq!(ell_max(&params("2:5,3:1")), vec![2, 0]);
        assert_eq!(ell_max(&params("2:1")), vec![0]);
        assert_eq!(ell_max(&params("2:2,3:2")), vec![1, 1]);
    }

    #[test]
    fn omega_max_labels() {
        assert_eq!(omega_max_label(&params("2:3,3:3")).to_string(), "1^1 2^1");
        assert_eq!(omega_max_label(&params("2:5,3:1")).to_string(), "1^1 1^3");
        assert_eq!(omega_max_label(&params("2:2,3:2")).to_string(), "1^1 2^1");
    }

    #[test]
    fn label_parse_and_display() {
        let l = NetLabel::parse("2^1 1^1", 2).unwrap();
        assert_eq!(l.to_string(), "1^1 2^1");
        assert_eq!(NetLabel::parse("∅", 2).unwrap().to_string(), "∅");
        assert_eq!(NetLabel::parse("empty", 2).unwrap(), NetLabel::empty(2));
        assert!(NetLabel::parse("3^1", 2).is_err());
        assert!(NetLabel::parse("1^0", 2).is_err());
        let m = NetLabel::parse("1^1*1^3", 2).unwrap();
        assert_eq!(m.to_string(), "1^1 1^3");
    }

    #[test]
    fn daughters_33_matches_listing() {
        let p = params("2:3,3:3");
        let go = |s: &str| -> Vec<String> {
            let label = NetLabel::parse(s, 2).unwrap();
            daughters(&p, &label)
                .into_iter()
                .map(|(l, _, _)| l.to_string())
                .collect()
        };
        assert_eq!(go("1^1 2^1"), vec!["1^2 2^1", "1^1 2^2"]);
        assert_eq!(go("1^2 2^1"), vec!["2^1", "1^2 2^2"]);
        assert_eq!(go("1^1 2^2"), vec!["1^2 2^2", "1^1"]);
        assert_eq!(go("1^2 2^2"), vec!["2^2", "1^2"]);
        assert_eq!(go("1^1"), vec!["1^2"]);
        assert_eq!(go("2^1"), vec!["2^2"]);
        assert_eq!(go("1^2"), vec!["∅"]);
        assert_eq!(go("2^2"), vec!["∅"]);
        assert_eq!(go("∅"), Vec::<String>::new());
    }

    #[test]
    fn daughters_51_chain() {
        let p = params("2:5,3:1");
        let go = |s: &str| -> Vec<String> {
            let label = NetLabel::parse(s, 2).unwrap();
            daughters(&p, &label)
                .into_iter()
                .map(|(l, _, _)| l.to_string())
                .collect()
        };
        assert_eq!(go("1^1 1^3"), vec!["1^1 1^4"]);
        assert_eq!(go("1^1 1^4"), vec!["1^1"]);
        assert_eq!(go("1^1"), vec!["1^2 1^3"]);
        assert_eq!(go("1^2 1^3"), vec!["1^2 1^4"]);
        assert_eq!(go("1^2 1^4"), vec!["1^2"]);
        assert_eq!(go("1^2"), vec!["1^3 1^3"]);
        assert_eq!(go("1^3 1^3"), vec!["1^3 1^4"]);
        assert_eq!(go("1^3 1^4"), vec!["1^3"]);
        assert_eq!(go("1^3"), vec!["1^4 1^4"]);
        assert_eq!(go("1^4 1^4"), vec!["1^4"]);
        assert_eq!(go("1^4"), vec!["∅"]);
    }

    #[test]
    fn predicted_network_33() {
        let p = params("2:3,3:3");
        let g = build_network(&p, None).unwrap();
        assert_eq!(g.vertices.len(), 9);
        assert_eq!(g.edges.len(), 12);
        assert_eq!(g.total_quotient_dim(), 64);
        let dims: Vec<usize> = g.vertices.values().map(|v| v.predicted_dim).collect();
        let mut sorted = dims.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![4, 4, 4, 4, 8, 8, 8, 8, 16]);
        let json = g.to_json();
        let back = NetworkGraph::<Rat>::from_json(&json).unwrap();
        assert_eq!(back.to_json(), json);
    }

    #[test]
    fn predicted_network_22() {
        let p = params("2:2,3:2");
        let g = build_network(&p, None).unwrap();
        assert_eq!(g.vertices.len(), 4);
        let mut dims: Vec<usize> = g.vertices.values().map(|v| v.predicted_dim).collect();
        dims.sort_unstable();
        assert_eq!(dims, vec![1, 3, 3, 9]);
        assert_eq!(g.total_quotient_dim(), 16);
    }

    #[test]
    fn single_vertex_for_distinct_params() {
        let p = params("2:1,3:1");
        let g = build_network(&p, None).unwrap();
        assert_eq!(g.vertices.len(), 1);
        assert_eq!(g.total_quotient_dim(), 4);
        assert!(g.edges.is_empty());
    }

    #[test]
    fn conjecture_n1_on_weyl() {
        let p = params("2:2,3:2");
        let module = ModuleRep::weyl(&p, 1 << 12).unwrap();
        let omega = module.omega().unwrap();
        // n = 1: w_{j^2} w_{j^1} Omega = 0
        assert!(conjecture_relation_check(&module, &omega, &p, 1, 1).unwrap());
        assert!(conjecture_relation_check(&module, &omega, &p, 2, 1).unwrap());
        // n = 0 is an empty sum
        assert!(conjecture_relation_check(&module, &omega, &p, 1, 0).unwrap());
    }

    #[test]
    fn spec_json_builders() {
        let spec: Value = serde_json::from_str(
            r#"{"factors":[{"a":"2","m":1},{"a":"2","m":1},{"a":"3","m":1}]}"#,
        )
        .unwrap();
        let (module, p) = module_from_spec_json::<Rat>(&spec, 1 << 12).unwrap();
        assert_eq!(module.dim(), 8);
        assert_eq!(p, params("2:2,3:1"));

        let spec: Value = serde_json::from_str(
            r#"{"factors":[{"a":"2","m":2},{"a":"3","m":1}], "quotient_by":[]}"#,
        )
        .unwrap();
        let (module, _) = module_from_spec_json::<Rat>(&spec, 1 << 12).unwrap();
        assert_eq!(module.dim(), 6);

        let bad: Value =
            serde_json::from_str(r#"{"factors":[{"a":"2","m":2},{"a":"2","m":1}]}"#).unwrap();
        assert!(module_from_spec_json::<Rat>(&bad, 1 << 12).is_err());
        let _ = r(0);
    }
}
