//! Finite pointed-set modules over the free commutative monoid on `n`
//! generators, written `⟨x_1, …, x_n⟩`.
//!
//! A module is a finite pointed set `{0, 1, …, size}` (0 is the basepoint)
//! together with one total action map per generator. The basepoint is
//! absorbing and the maps commute pairwise. The commutative case with
//! `n = 1` equally models modules over the free monoid on one generator.
//!
//! Monoid elements are never materialized: the action of a monomial `x^e`
//! is computed by composing generator maps, which is enough because the
//! monoid is free commutative on those generators.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::budget::{Budget, BudgetExceeded};
use crate::shapes::{self, Point, SkewShape};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModuleError {
    #[error("generator count mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("malformed action table: {0}")]
    Malformed(String),
    #[error("not a submodule: {0}")]
    NotASubmodule(String),
    #[error("precondition failed: module is not {0}")]
    PreconditionFailed(&'static str),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
}

/// First violated module identity, with witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    BasepointMoved {
        generator: usize,
    },
    NonCommuting {
        gen_a: usize,
        gen_b: usize,
        element: usize,
        ab: usize,
        ba: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BasepointMoved { generator } => {
                write!(f, "generator x_{} moves the basepoint", generator + 1)
            }
            Violation::NonCommuting {
                gen_a,
                gen_b,
                element,
                ab,
                ba,
            } => write!(
                f,
                "x_{a} x_{b} · {element} = {ab} but x_{b} x_{a} · {element} = {ba}",
                a = gen_a + 1,
                b = gen_b + 1,
            ),
        }
    }
}

/// A finite pointed module: elements `0..=size` with 0 the basepoint, and
/// one action map per generator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointedModule {
    n: usize,
    size: usize,
    /// `action[g][m]` is `x_{g+1} · m`; `action[g][0] == 0`.
    action: Vec<Vec<usize>>,
}

impl fmt::Debug for PointedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PointedModule{}", self.literal())
    }
}

impl PointedModule {
    /// Structural validation only (lengths, ranges, fixed basepoint); the
    /// module identities are checked by [`validate`].
    pub fn new(n: usize, size: usize, action: Vec<Vec<usize>>) -> Result<Self, ModuleError> {
        if action.len() != n {
            return Err(ModuleError::Malformed(format!(
                "expected {n} action rows, got {}",
                action.len()
            )));
        }
        for (g, row) in action.iter().enumerate() {
            if row.len() != size + 1 {
                return Err(ModuleError::Malformed(format!(
                    "action row {g} has length {}, expected {}",
                    row.len(),
                    size + 1
                )));
            }
            if row[0] != 0 {
                return Err(ModuleError::Malformed(format!(
                    "action row {g} does not fix the basepoint"
                )));
            }
            if let Some(v) = row.iter().find(|&&v| v > size) {
                return Err(ModuleError::Malformed(format!(
                    "action row {g} contains out-of-range element {v}"
                )));
            }
        }
        Ok(PointedModule { n, size, action })
    }

    pub fn zero(n: usize) -> Self {
        PointedModule {
            n,
            size: 0,
            action: vec![vec![0]; n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of non-zero elements, `dim M`.
    pub fn dim(&self) -> usize {
        self.size
    }

    pub fn act(&self, generator: usize, element: usize) -> usize {
        self.action[generator][element]
    }

    pub fn action(&self) -> &[Vec<usize>] {
        &self.action
    }

    /// Action of the monomial with exponent vector `e`.
    pub fn act_monomial(&self, exponents: &[usize], element: usize) -> usize {
        let mut m = element;
        for (g, &e) in exponents.iter().enumerate() {
            for _ in 0..e {
                m = self.action[g][m];
                if m == 0 {
                    return 0;
                }
            }
        }
        m
    }

    /// Compact one-line literal, `{n:…,size:…,action:[…]}`.
    pub fn literal(&self) -> String {
        let rows: Vec<String> = self
            .action
            .iter()
            .map(|r| {
                let cells: Vec<String> = r.iter().map(|v| v.to_string()).collect();
                format!("[{}]", cells.join(","))
            })
            .collect();
        format!(
            "{{\"n\":{},\"size\":{},\"action\":[{}]}}",
            self.n,
            self.size,
            rows.join(",")
        )
    }

    fn preimages(&self) -> Vec<Vec<Vec<usize>>> {
        let mut pre = vec![vec![Vec::new(); self.size + 1]; self.n];
        for g in 0..self.n {
            for m in 1..=self.size {
                let v = self.action[g][m];
                if v != 0 {
                    pre[g][v].push(m);
                }
            }
        }
        pre
    }
}

/// Serde-friendly form of the module literal `{ n, size, action }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModuleLiteral {
    pub n: usize,
    pub size: usize,
    pub action: Vec<Vec<usize>>,
}

impl TryFrom<ModuleLiteral> for PointedModule {
    type Error = ModuleError;

    fn try_from(lit: ModuleLiteral) -> Result<Self, ModuleError> {
        PointedModule::new(lit.n, lit.size, lit.action)
    }
}

impl From<&PointedModule> for ModuleLiteral {
    fn from(m: &PointedModule) -> Self {
        ModuleLiteral {
            n: m.n,
            size: m.size,
            action: m.action.clone(),
        }
    }
}

/// Check the module identities: basepoint absorption and pairwise
/// commutation of the generator actions.
pub fn validate(m: &PointedModule) -> Result<(), Violation> {
    for g in 0..m.n {
        if m.action[g][0] != 0 {
            return Err(Violation::BasepointMoved { generator: g });
        }
    }
    for a in 0..m.n {
        for b in a + 1..m.n {
            for e in 1..=m.size {
                let ab = m.action[a][m.action[b][e]];
                let ba = m.action[b][m.action[a][e]];
                if ab != ba {
                    return Err(Violation::NonCommuting {
                        gen_a: a,
                        gen_b: b,
                        element: e,
                        ab,
                        ba,
                    });
                }
            }
        }
    }
    Ok(())
}

/// A `Z^n`-grading: degree vectors for the non-zero elements, compatible
/// with the action (`deg(x_i · m) = deg(m) + e_i` whenever `x_i · m ≠ 0`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grading {
    degrees: Vec<Point>,
}

impl Grading {
    pub fn degree(&self, element: usize) -> &[i64] {
        &self.degrees[element - 1]
    }

    pub fn degrees(&self) -> &[Point] {
        &self.degrees
    }

    /// Does this assignment actually grade `m`?
    pub fn is_valid_for(&self, m: &PointedModule) -> bool {
        if self.degrees.len() != m.dim() {
            return false;
        }
        for g in 0..m.n() {
            for e in 1..=m.dim() {
                let v = m.act(g, e);
                if v != 0 {
                    let mut expected = self.degrees[e - 1].clone();
                    expected[g] += 1;
                    if self.degrees[v - 1] != expected {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// The module `M_S` of a skew shape: elements are the boxes, `x_i` moves one
/// box in direction `i` and kills at the boundary. Returns the coordinate
/// grading alongside.
pub fn module_from_shape(s: &SkewShape) -> (PointedModule, Grading) {
    let boxes = s.boxes();
    let index: BTreeMap<&[i64], usize> = boxes
        .iter()
        .enumerate()
        .map(|(i, b)| (b.as_slice(), i + 1))
        .collect();
    let mut action = vec![vec![0; boxes.len() + 1]; s.n()];
    for (i, b) in boxes.iter().enumerate() {
        for (g, row) in action.iter_mut().enumerate() {
            let mut target = b.clone();
            target[g] += 1;
            row[i + 1] = index.get(target.as_slice()).copied().unwrap_or(0);
        }
    }
    let module = PointedModule {
        n: s.n(),
        size: boxes.len(),
        action,
    };
    let grading = Grading {
        degrees: boxes.to_vec(),
    };
    (module, grading)
}

/// Type α: every generator acts injectively off the preimage of the
/// basepoint (a partial injection). Since monomial actions are compositions
/// of the generator maps and a composition of partial injections is again a
/// partial injection, checking the generators covers the whole monoid.
pub fn is_type_alpha(m: &PointedModule) -> bool {
    for g in 0..m.n {
        let mut seen = vec![false; m.size + 1];
        for e in 1..=m.size {
            let v = m.action[g][e];
            if v != 0 {
                if seen[v] {
                    return false;
                }
                seen[v] = true;
            }
        }
    }
    true
}

/// Search for a grading by propagating forced degree differences over the
/// action graph; `None` when a cycle forces a conflict. Each connected
/// component is normalized so its minimum degree per axis is 0.
pub fn find_grading(m: &PointedModule) -> Option<Grading> {
    let pre = m.preimages();
    let mut deg: Vec<Option<Point>> = vec![None; m.size + 1];
    for start in 1..=m.size {
        if deg[start].is_some() {
            continue;
        }
        deg[start] = Some(vec![0; m.n]);
        let mut component = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(e) = queue.pop_front() {
            let base = deg[e].clone().expect("queued elements have degrees");
            for g in 0..m.n {
                let forward = m.action[g][e];
                if forward != 0 {
                    let mut expected = base.clone();
                    expected[g] += 1;
                    match &deg[forward] {
                        Some(existing) if *existing != expected => return None,
                        Some(_) => {}
                        None => {
                            deg[forward] = Some(expected);
                            component.push(forward);
                            queue.push_back(forward);
                        }
                    }
                }
                for &p in &pre[g][e] {
                    let mut expected = base.clone();
                    expected[g] -= 1;
                    match &deg[p] {
                        Some(existing) if *existing != expected => return None,
                        Some(_) => {}
                        None => {
                            deg[p] = Some(expected);
                            component.push(p);
                            queue.push_back(p);
                        }
                    }
                }
            }
        }
        let mut mins = vec![i64::MAX; m.n];
        for &e in &component {
            let d = deg[e].as_ref().unwrap();
            for (mn, c) in mins.iter_mut().zip(d) {
                *mn = (*mn).min(*c);
            }
        }
        for &e in &component {
            let d = deg[e].as_mut().unwrap();
            for (c, mn) in d.iter_mut().zip(&mins) {
                *c -= mn;
            }
        }
    }
    Some(Grading {
        degrees: (1..=m.size).map(|e| deg[e].clone().unwrap()).collect(),
    })
}

/// Does the generator `g` act nilpotently (some power of it kills every
/// element)?
pub fn generator_nilpotent(m: &PointedModule, g: usize) -> bool {
    let mut alive: BTreeSet<usize> = (1..=m.size).collect();
    for _ in 0..=m.size {
        if alive.is_empty() {
            return true;
        }
        alive = alive
            .iter()
            .map(|&e| m.action[g][e])
            .filter(|&v| v != 0)
            .collect();
    }
    alive.is_empty()
}

/// Support at the origin: every generator acts nilpotently; equivalently the
/// maximal ideal kills the module in at most `dim M` steps.
pub fn supported_at_origin(m: &PointedModule) -> bool {
    (0..m.n).all(|g| generator_nilpotent(m, g))
}

/// Minimal exponent vectors `e` with `x^e · M = 0`, searched up to exponent
/// `dim M` per variable (enough by the radical filtration bound). The zero
/// module reports `[0, …, 0]`, i.e. the unit ideal. A module with full
/// support reports an empty list.
pub fn annihilator(m: &PointedModule) -> Vec<Vec<usize>> {
    let bound = m.size;
    let mut kills: Vec<Vec<usize>> = Vec::new();
    let mut e = vec![0usize; m.n];
    loop {
        if (1..=m.size).all(|el| m.act_monomial(&e, el) == 0) {
            kills.push(e.clone());
        }
        let mut axis = 0;
        loop {
            if axis == m.n {
                break;
            }
            if e[axis] < bound {
                e[axis] += 1;
                break;
            }
            e[axis] = 0;
            axis += 1;
        }
        if axis == m.n {
            break;
        }
    }
    let mut minimal: Vec<Vec<usize>> = kills
        .iter()
        .filter(|e| {
            !kills
                .iter()
                .any(|f| *f != **e && f.iter().zip(e.iter()).all(|(a, b)| a <= b))
        })
        .cloned()
        .collect();
    minimal.sort();
    minimal
}

/// Smallest `r` with `m^r · M = 0` (`m` the maximal ideal), or `None` if the
/// module is not supported at the origin.
pub fn nilpotency_degree(m: &PointedModule) -> Option<usize> {
    let mut alive: BTreeSet<usize> = (1..=m.size).collect();
    for r in 0..=m.size {
        if alive.is_empty() {
            return Some(r);
        }
        let mut next = BTreeSet::new();
        for &e in &alive {
            for g in 0..m.n {
                let v = m.action[g][e];
                if v != 0 {
                    next.insert(v);
                }
            }
        }
        alive = next;
    }
    None
}

/// All submodules: subsets containing the basepoint and closed under every
/// generator. Returned as sorted element lists (including 0), ordered by
/// size then lexicographically.
pub fn submodules(m: &PointedModule, budget: &Budget) -> Result<Vec<Vec<usize>>, ModuleError> {
    if m.size >= 63 {
        return Err(ModuleError::Malformed(
            "submodule enumeration supports at most 62 elements".into(),
        ));
    }
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << m.size) {
        budget.charge(1)?;
        let has = |e: usize| e == 0 || mask >> (e - 1) & 1 == 1;
        let closed = (1..=m.size)
            .filter(|&e| has(e))
            .all(|e| (0..m.n).all(|g| has(m.action[g][e])));
        if closed {
            let mut elems = vec![0];
            elems.extend((1..=m.size).filter(|&e| has(e)));
            out.push(elems);
        }
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

fn is_submodule(m: &PointedModule, elems: &[usize]) -> Result<BTreeSet<usize>, ModuleError> {
    let set: BTreeSet<usize> = elems.iter().copied().collect();
    if !set.contains(&0) {
        return Err(ModuleError::NotASubmodule(
            "subset does not contain the basepoint".into(),
        ));
    }
    if let Some(&bad) = set.iter().find(|&&e| e > m.size) {
        return Err(ModuleError::NotASubmodule(format!(
            "element {bad} is out of range"
        )));
    }
    for &e in &set {
        for g in 0..m.n {
            let v = m.action[g][e];
            if !set.contains(&v) {
                return Err(ModuleError::NotASubmodule(format!(
                    "x_{} · {e} = {v} escapes the subset",
                    g + 1
                )));
            }
        }
    }
    Ok(set)
}

/// The submodule on the given elements as a module in its own right
/// (elements relabeled in increasing order).
pub fn submodule(m: &PointedModule, elems: &[usize]) -> Result<PointedModule, ModuleError> {
    let set = is_submodule(m, elems)?;
    let nonzero: Vec<usize> = set.into_iter().filter(|&e| e != 0).collect();
    Ok(induced_submodule(m, &nonzero))
}

/// Quotient by a submodule: its elements are identified with the basepoint.
/// Remaining elements are relabeled in increasing order.
pub fn quotient(m: &PointedModule, submodule: &[usize]) -> Result<PointedModule, ModuleError> {
    let set = is_submodule(m, submodule)?;
    let kept: Vec<usize> = (1..=m.size).filter(|e| !set.contains(e)).collect();
    let mut relabel = vec![0usize; m.size + 1];
    for (new, &old) in kept.iter().enumerate() {
        relabel[old] = new + 1;
    }
    let action = (0..m.n)
        .map(|g| {
            let mut row = vec![0; kept.len() + 1];
            for (new, &old) in kept.iter().enumerate() {
                row[new + 1] = relabel[m.action[g][old]];
            }
            row
        })
        .collect();
    Ok(PointedModule {
        n: m.n,
        size: kept.len(),
        action,
    })
}

/// Wedge sum: disjoint union with the basepoints identified.
pub fn direct_sum(a: &PointedModule, b: &PointedModule) -> Result<PointedModule, ModuleError> {
    if a.n != b.n {
        return Err(ModuleError::DimensionMismatch(a.n, b.n));
    }
    let size = a.size + b.size;
    let action = (0..a.n)
        .map(|g| {
            let mut row = vec![0; size + 1];
            row[1..=a.size].copy_from_slice(&a.action[g][1..]);
            for e in 1..=b.size {
                let v = b.action[g][e];
                row[a.size + e] = if v == 0 { 0 } else { a.size + v };
            }
            row
        })
        .collect();
    Ok(PointedModule {
        n: a.n,
        size,
        action,
    })
}

pub fn direct_sum_all(n: usize, parts: &[PointedModule]) -> Result<PointedModule, ModuleError> {
    let mut acc = PointedModule::zero(n);
    for p in parts {
        acc = direct_sum(&acc, p)?;
    }
    Ok(acc)
}

/// Smash product: the cartesian product with both basepoint slices
/// collapsed, carrying the diagonal action. `dim(M ∧ N) = dim M · dim N`.
pub fn smash_product(a: &PointedModule, b: &PointedModule) -> Result<PointedModule, ModuleError> {
    if a.n != b.n {
        return Err(ModuleError::DimensionMismatch(a.n, b.n));
    }
    let size = a.size * b.size;
    let idx = |i: usize, j: usize| {
        if i == 0 || j == 0 {
            0
        } else {
            (i - 1) * b.size + j
        }
    };
    let action = (0..a.n)
        .map(|g| {
            let mut row = vec![0; size + 1];
            for i in 1..=a.size {
                for j in 1..=b.size {
                    row[idx(i, j)] = idx(a.action[g][i], b.action[g][j]);
                }
            }
            row
        })
        .collect();
    Ok(PointedModule {
        n: a.n,
        size,
        action,
    })
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(len: usize) -> Self {
        UnionFind {
            parent: (0..len).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Tensor product over the monoid: quotient of the cartesian product by the
/// equivalence generated by `(x_i · m, n) ~ (m, x_i · n)`, computed by
/// union-find closure. Generator swaps suffice because a swap by a monomial
/// factors into single-generator swaps.
pub fn tensor_product(a: &PointedModule, b: &PointedModule) -> Result<PointedModule, ModuleError> {
    Ok(tensor_product_with_map(a, b)?.0)
}

/// Like [`tensor_product`], also returning where each pair `(i, j)` of
/// non-zero elements landed (0 when the pair collapsed to the basepoint).
pub fn tensor_product_with_map(
    a: &PointedModule,
    b: &PointedModule,
) -> Result<(PointedModule, BTreeMap<(usize, usize), usize>), ModuleError> {
    if a.n != b.n {
        return Err(ModuleError::DimensionMismatch(a.n, b.n));
    }
    let cols = b.size + 1;
    let idx = |i: usize, j: usize| i * cols + j;
    let mut uf = UnionFind::new((a.size + 1) * cols);
    for i in 0..=a.size {
        uf.union(idx(i, 0), idx(0, 0));
    }
    for j in 0..=b.size {
        uf.union(idx(0, j), idx(0, 0));
    }
    for i in 0..=a.size {
        for j in 0..=b.size {
            for g in 0..a.n {
                uf.union(idx(a.action[g][i], j), idx(i, b.action[g][j]));
            }
        }
    }
    let zero_root = uf.find(idx(0, 0));
    let mut label: BTreeMap<usize, usize> = BTreeMap::new();
    for i in 0..=a.size {
        for j in 0..=b.size {
            let root = uf.find(idx(i, j));
            if root != zero_root && !label.contains_key(&root) {
                let next = label.len() + 1;
                label.insert(root, next);
            }
        }
    }
    let size = label.len();
    let mut action = vec![vec![0usize; size + 1]; a.n];
    let mut placement = BTreeMap::new();
    for i in 1..=a.size {
        for j in 1..=b.size {
            let root = uf.find(idx(i, j));
            if root == zero_root {
                placement.insert((i, j), 0);
                continue;
            }
            let from = label[&root];
            placement.insert((i, j), from);
            for (g, row) in action.iter_mut().enumerate() {
                let target = uf.find(idx(a.action[g][i], j));
                row[from] = if target == zero_root {
                    0
                } else {
                    label[&target]
                };
            }
        }
    }
    Ok((
        PointedModule {
            n: a.n,
            size,
            action,
        },
        placement,
    ))
}

fn component_elements(m: &PointedModule) -> Vec<Vec<usize>> {
    let pre = m.preimages();
    let mut seen = vec![false; m.size + 1];
    let mut comps = Vec::new();
    for start in 1..=m.size {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(e) = queue.pop_front() {
            for g in 0..m.n {
                let v = m.action[g][e];
                if v != 0 && !seen[v] {
                    seen[v] = true;
                    comp.push(v);
                    queue.push_back(v);
                }
                for &p in &pre[g][e] {
                    if !seen[p] {
                        seen[p] = true;
                        comp.push(p);
                        queue.push_back(p);
                    }
                }
            }
        }
        comp.sort();
        comps.push(comp);
    }
    comps
}

pub(crate) fn induced_submodule(m: &PointedModule, elems: &[usize]) -> PointedModule {
    let mut relabel = vec![0usize; m.size + 1];
    for (new, &old) in elems.iter().enumerate() {
        relabel[old] = new + 1;
    }
    let action = (0..m.n)
        .map(|g| {
            let mut row = vec![0; elems.len() + 1];
            for (new, &old) in elems.iter().enumerate() {
                row[new + 1] = relabel[m.action[g][old]];
            }
            row
        })
        .collect();
    PointedModule {
        n: m.n,
        size: elems.len(),
        action,
    }
}

/// Krull–Schmidt decomposition: the indecomposable direct summands are the
/// connected components of the action graph. Components are ordered by
/// their smallest element.
pub fn decompose(m: &PointedModule) -> Vec<PointedModule> {
    component_elements(m)
        .iter()
        .map(|c| induced_submodule(m, c))
        .collect()
}

/// Swap the roles of the generators: generator `i` of the result acts as
/// generator `sigma[i]` of the source.
pub fn permute_generators(m: &PointedModule, sigma: &[usize]) -> PointedModule {
    assert_eq!(
        sigma.len(),
        m.n,
        "permutation arity must match generator count"
    );
    PointedModule {
        n: m.n,
        size: m.size,
        action: sigma.iter().map(|&i| m.action[i].clone()).collect(),
    }
}

/// Iterated color refinement; the resulting colors are isomorphism
/// invariants assigned canonically (by signature order), so equal-color
/// multisets are a necessary condition for isomorphism and color classes
/// bound every isomorphism search.
fn refine_colors(m: &PointedModule) -> Vec<usize> {
    let pre = m.preimages();
    let mut colors = vec![0usize; m.size + 1];
    for _ in 0..m.size.max(1) {
        let mut signatures: Vec<(Vec<usize>, usize)> = (1..=m.size)
            .map(|e| {
                let mut sig = vec![colors[e]];
                for g in 0..m.n {
                    let v = m.action[g][e];
                    sig.push(if v == 0 { usize::MAX } else { colors[v] });
                    let mut ins: Vec<usize> = pre[g][e].iter().map(|&p| colors[p]).collect();
                    ins.sort();
                    sig.push(ins.len());
                    sig.extend(ins);
                }
                (sig, e)
            })
            .collect();
        signatures.sort();
        let mut next = vec![0usize; m.size + 1];
        let mut current = 0;
        for i in 0..signatures.len() {
            if i > 0 && signatures[i].0 != signatures[i - 1].0 {
                current += 1;
            }
            next[signatures[i].1] = current + 1;
        }
        if next == colors {
            break;
        }
        colors = next;
    }
    colors
}

/// Backtracking search for an action-preserving pointed bijection.
pub fn isomorphic(a: &PointedModule, b: &PointedModule) -> bool {
    if a.n != b.n || a.size != b.size {
        return false;
    }
    let ca = refine_colors(a);
    let cb = refine_colors(b);
    let mut ma: Vec<usize> = ca[1..].to_vec();
    let mut mb: Vec<usize> = cb[1..].to_vec();
    ma.sort();
    mb.sort();
    if ma != mb {
        return false;
    }
    // Assign images for a's elements grouped by color; ascending element
    // order within color order is enough at this scale.
    let mut order: Vec<usize> = (1..=a.size).collect();
    order.sort_by_key(|&e| (ca[e], e));
    let mut image = vec![0usize; a.size + 1];
    let mut used = vec![false; b.size + 1];

    fn consistent(
        a: &PointedModule,
        b: &PointedModule,
        image: &[usize],
        x: usize,
        y: usize,
    ) -> bool {
        for g in 0..a.n {
            let ax = a.action[g][x];
            let by = b.action[g][y];
            if ax == 0 && by != 0 {
                return false;
            }
            if ax != 0 {
                let mapped = image[ax];
                if mapped != 0 && mapped != by {
                    return false;
                }
                if mapped == 0 && by == 0 {
                    return false;
                }
            }
            // Check constraints from already-assigned preimages: for any
            // assigned z with act(z) = x we need act(image(z)) = y, which is
            // covered when z was assigned unless x got its image later.
        }
        // Re-check all assigned elements whose action lands on x.
        for g in 0..a.n {
            for z in 1..=a.size {
                if image[z] != 0 && a.action[g][z] == x && b.action[g][image[z]] != y {
                    return false;
                }
            }
        }
        true
    }

    fn search(
        pos: usize,
        order: &[usize],
        a: &PointedModule,
        b: &PointedModule,
        ca: &[usize],
        cb: &[usize],
        image: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if pos == order.len() {
            return true;
        }
        let x = order[pos];
        for y in 1..=b.size {
            if used[y] || cb[y] != ca[x] {
                continue;
            }
            if consistent(a, b, image, x, y) {
                image[x] = y;
                used[y] = true;
                if search(pos + 1, order, a, b, ca, cb, image, used) {
                    return true;
                }
                image[x] = 0;
                used[y] = false;
            }
        }
        false
    }

    search(0, &order, a, b, &ca, &cb, &mut image, &mut used)
}

/// Canonical action table: the lexicographically smallest flattened table
/// over all relabelings compatible with the refinement colors.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalTable {
    pub n: usize,
    pub size: usize,
    /// Rows per generator over elements `1..=size`, flattened.
    pub table: Vec<usize>,
}

impl CanonicalTable {
    pub fn to_module(&self) -> PointedModule {
        let action = (0..self.n)
            .map(|g| {
                let mut row = vec![0usize; self.size + 1];
                row[1..].copy_from_slice(&self.table[g * self.size..(g + 1) * self.size]);
                row
            })
            .collect();
        PointedModule {
            n: self.n,
            size: self.size,
            action,
        }
    }
}

fn flatten_relabeled(m: &PointedModule, relabel: &[usize]) -> Vec<usize> {
    // relabel[old] = new (1-indexed), relabel[0] = 0.
    let mut by_new = vec![0usize; m.size + 1];
    for old in 1..=m.size {
        by_new[relabel[old]] = old;
    }
    let mut flat = Vec::with_capacity(m.n * m.size);
    for g in 0..m.n {
        for new in 1..=m.size {
            flat.push(relabel[m.action[g][by_new[new]]]);
        }
    }
    flat
}

fn canonical_table(m: &PointedModule) -> CanonicalTable {
    let colors = refine_colors(m);
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for e in 1..=m.size {
        groups.entry(colors[e]).or_default().push(e);
    }
    let groups: Vec<Vec<usize>> = groups.into_values().collect();
    // New labels are laid out group by group; search over within-group
    // permutations for the minimal flattened table.
    let mut offsets = Vec::new();
    let mut total = 1;
    for g in &groups {
        offsets.push(total);
        total += g.len();
    }
    let mut best: Option<Vec<usize>> = None;
    let mut relabel = vec![0usize; m.size + 1];
    fn assign(
        gi: usize,
        groups: &[Vec<usize>],
        offsets: &[usize],
        m: &PointedModule,
        relabel: &mut Vec<usize>,
        used: &mut Vec<bool>,
        best: &mut Option<Vec<usize>>,
    ) {
        if gi == groups.len() {
            let flat = flatten_relabeled(m, relabel);
            if best.as_ref().is_none_or(|b| flat < *b) {
                *best = Some(flat);
            }
            return;
        }
        fn perms(
            k: usize,
            gi: usize,
            groups: &[Vec<usize>],
            offsets: &[usize],
            m: &PointedModule,
            relabel: &mut Vec<usize>,
            used: &mut Vec<bool>,
            best: &mut Option<Vec<usize>>,
        ) {
            let group = &groups[gi];
            if k == group.len() {
                assign(gi + 1, groups, offsets, m, relabel, used, best);
                return;
            }
            for slot in 0..group.len() {
                if used[offsets[gi] + slot] {
                    continue;
                }
                used[offsets[gi] + slot] = true;
                relabel[group[k]] = offsets[gi] + slot;
                perms(k + 1, gi, groups, offsets, m, relabel, used, best);
                used[offsets[gi] + slot] = false;
                relabel[group[k]] = 0;
            }
        }
        perms(0, gi, groups, offsets, m, relabel, used, best);
    }
    let mut used = vec![false; m.size + 1];
    assign(0, &groups, &offsets, m, &mut relabel, &mut used, &mut best);
    CanonicalTable {
        n: m.n,
        size: m.size,
        table: best.unwrap_or_default(),
    }
}

/// Isomorphism class of one indecomposable summand: a connected skew shape
/// when the summand is type α, gradable, and supported at the origin;
/// otherwise a canonical action table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ComponentClass {
    Shape(SkewShape),
    Table(CanonicalTable),
}

impl ComponentClass {
    pub fn dim(&self) -> usize {
        match self {
            ComponentClass::Shape(s) => s.len(),
            ComponentClass::Table(t) => t.size,
        }
    }

    pub fn representative(&self) -> PointedModule {
        match self {
            ComponentClass::Shape(s) => module_from_shape(s).0,
            ComponentClass::Table(t) => t.to_module(),
        }
    }

    fn rank(&self) -> u8 {
        match self {
            ComponentClass::Shape(_) => 0,
            ComponentClass::Table(_) => 1,
        }
    }
}

impl Ord for ComponentClass {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.dim(), self.rank())
            .cmp(&(other.dim(), other.rank()))
            .then_with(|| match (self, other) {
                (ComponentClass::Shape(a), ComponentClass::Shape(b)) => a.cmp(b),
                (ComponentClass::Table(a), ComponentClass::Table(b)) => a.cmp(b),
                _ => unreachable!("rank already ordered the variants"),
            })
    }
}

impl PartialOrd for ComponentClass {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ComponentClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComponentClass::Shape(s) => write!(f, "{s}"),
            ComponentClass::Table(t) => write!(f, "{}", t.to_module().literal()),
        }
    }
}

/// Isomorphism class of a module: the multiset of its indecomposable
/// summands' classes, sorted canonically. The zero module is the empty
/// multiset.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModuleClass {
    n: usize,
    components: Vec<ComponentClass>,
}

impl fmt::Display for ModuleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "∅");
        }
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, " ⊕ ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl ModuleClass {
    pub fn zero(n: usize) -> Self {
        ModuleClass {
            n,
            components: Vec::new(),
        }
    }

    pub fn from_components(n: usize, mut components: Vec<ComponentClass>) -> Self {
        components.sort();
        ModuleClass { n, components }
    }

    /// The class of the shape module `M_S`: the multiset of the connected
    /// components of `S`. A disconnected convex shape is admitted; its
    /// particular embedding is forgotten.
    pub fn of_shape(s: &SkewShape) -> Self {
        ModuleClass {
            n: s.n(),
            components: {
                let mut comps: Vec<ComponentClass> = shapes::components(s)
                    .into_iter()
                    .map(ComponentClass::Shape)
                    .collect();
                comps.sort();
                comps
            },
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.components.iter().map(|c| c.dim()).sum()
    }

    pub fn components(&self) -> &[ComponentClass] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn is_indecomposable(&self) -> bool {
        self.components.len() == 1
    }

    /// All component classes are shapes.
    pub fn is_skew(&self) -> bool {
        self.components
            .iter()
            .all(|c| matches!(c, ComponentClass::Shape(_)))
    }

    pub fn representative(&self) -> PointedModule {
        let parts: Vec<PointedModule> =
            self.components.iter().map(|c| c.representative()).collect();
        direct_sum_all(self.n, &parts).expect("components share the generator count")
    }

    /// The class of the direct sum: the multiset union of the components.
    pub fn merged(&self, other: &ModuleClass) -> ModuleClass {
        assert_eq!(
            self.n, other.n,
            "classes live over the same generator count"
        );
        ModuleClass::from_components(
            self.n,
            self.components
                .iter()
                .chain(&other.components)
                .cloned()
                .collect(),
        )
    }
}

/// Recover the connected skew shape of an indecomposable module that is
/// type α, admits a grading, and is supported at the origin. The candidate
/// embedding (elements at their degree vectors) is verified box-by-box, so
/// a successful return really is an isomorphism `M ≃ M_S`.
pub fn shape_from_module(m: &PointedModule) -> Result<SkewShape, ModuleError> {
    if m.size == 0 {
        return Ok(SkewShape::empty(m.n));
    }
    if component_elements(m).len() > 1 {
        return Err(ModuleError::PreconditionFailed("indecomposable"));
    }
    if !is_type_alpha(m) {
        return Err(ModuleError::PreconditionFailed("type α"));
    }
    let grading = find_grading(m).ok_or(ModuleError::PreconditionFailed("gradable"))?;
    if !supported_at_origin(m) {
        return Err(ModuleError::PreconditionFailed("supported at the origin"));
    }
    try_shape(m, &grading).ok_or(ModuleError::PreconditionFailed(
        "isomorphic to a shape module (classification violated)",
    ))
}

fn try_shape(m: &PointedModule, grading: &Grading) -> Option<SkewShape> {
    let mut by_degree: BTreeMap<&[i64], usize> = BTreeMap::new();
    for e in 1..=m.size {
        if by_degree.insert(grading.degree(e), e).is_some() {
            return None;
        }
    }
    let shape = shapes::canonicalize(m.n, grading.degrees().to_vec()).ok()?;
    // The only candidate isomorphism sends an element to its degree box;
    // check it transports the action exactly.
    for e in 1..=m.size {
        for g in 0..m.n {
            let mut target = grading.degree(e).to_vec();
            target[g] += 1;
            let expected = by_degree.get(target.as_slice()).copied().unwrap_or(0);
            if m.action[g][e] != expected {
                return None;
            }
        }
    }
    Some(shape)
}

fn component_class(comp: &PointedModule) -> ComponentClass {
    if is_type_alpha(comp) && supported_at_origin(comp) {
        if let Some(grading) = find_grading(comp) {
            if let Some(shape) = try_shape(comp, &grading) {
                return ComponentClass::Shape(shape);
            }
        }
    }
    ComponentClass::Table(canonical_table(comp))
}

/// Canonical isomorphism-class key. Uses shape components whenever the
/// classification applies (with the embedding verified), and the minimal
/// action table otherwise.
pub fn canonical_class(m: &PointedModule) -> ModuleClass {
    let components = component_elements(m)
        .iter()
        .map(|c| component_class(&induced_submodule(m, c)))
        .collect();
    ModuleClass::from_components(m.n, components)
}

/// One 0/1 matrix per generator with entry `(x_i · m, m) = 1` when the
/// action does not kill `m` (rows and columns indexed by 1..=dim). Columns
/// always have at most one 1; type α says the same about rows.
pub fn base_change_matrices(m: &PointedModule) -> Vec<Vec<Vec<u8>>> {
    (0..m.n)
        .map(|g| {
            let mut mat = vec![vec![0u8; m.size]; m.size];
            for e in 1..=m.size {
                let v = m.action[g][e];
                if v != 0 {
                    mat[v - 1][e - 1] = 1;
                }
            }
            mat
        })
        .collect()
}

/// Is the module generated by a single element?
pub fn is_cyclic(m: &PointedModule) -> bool {
    if m.size == 0 {
        return true;
    }
    (1..=m.size).any(|seed| {
        let mut seen = vec![false; m.size + 1];
        let mut queue = VecDeque::from([seed]);
        seen[seed] = true;
        let mut count = 1;
        while let Some(e) = queue.pop_front() {
            for g in 0..m.n {
                let v = m.action[g][e];
                if v != 0 && !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == m.size
    })
}

/// Elements with no preimage under any generator. For modules supported at
/// the origin these form the unique minimal generating set.
pub fn minimal_generators(m: &PointedModule) -> Vec<usize> {
    let mut has_pre = vec![false; m.size + 1];
    for g in 0..m.n {
        for e in 1..=m.size {
            let v = m.action[g][e];
            if v != 0 {
                has_pre[v] = true;
            }
        }
    }
    (1..=m.size).filter(|&e| !has_pre[e]).collect()
}

/// Predicate bundle selecting a subcategory (and hence one of the Hall
/// algebras): the full category, type α, gradable, or both, each optionally
/// restricted to modules supported at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CategorySpec {
    pub n: usize,
    pub type_alpha: bool,
    pub gradable: bool,
    pub origin_support: bool,
}

impl CategorySpec {
    /// The unrestricted category.
    pub fn full(n: usize) -> Self {
        CategorySpec {
            n,
            type_alpha: false,
            gradable: false,
            origin_support: false,
        }
    }

    /// Type α + gradable + origin support: the skew-shape category.
    pub fn skew(n: usize) -> Self {
        CategorySpec {
            n,
            type_alpha: true,
            gradable: true,
            origin_support: true,
        }
    }

    pub fn module_in_category(&self, m: &PointedModule) -> bool {
        m.n() == self.n
            && (!self.type_alpha || is_type_alpha(m))
            && (!self.gradable || find_grading(m).is_some())
            && (!self.origin_support || supported_at_origin(m))
    }

    /// Closure under sub/quotient/sum means a class is in the category iff
    /// each indecomposable component is.
    pub fn class_in_category(&self, class: &ModuleClass) -> bool {
        class.n() == self.n
            && class.components().iter().all(|c| match c {
                ComponentClass::Shape(_) => true,
                ComponentClass::Table(t) => self.module_in_category(&t.to_module()),
            })
    }

    /// `true` when the whole skew category is selected.
    pub fn is_skew(&self) -> bool {
        self.type_alpha && self.gradable && self.origin_support
    }
}

fn generator_candidates(
    d: usize,
    type_alpha: bool,
    nilpotent: bool,
    budget: &Budget,
) -> Result<Vec<Vec<usize>>, BudgetExceeded> {
    let mut out = Vec::new();
    let mut row = vec![0usize; d + 1];
    fn rec(
        e: usize,
        d: usize,
        type_alpha: bool,
        nilpotent: bool,
        row: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
        budget: &Budget,
    ) -> Result<(), BudgetExceeded> {
        if e > d {
            if nilpotent {
                // Reject rows whose functional graph has a cycle.
                for start in 1..=d {
                    let mut slow = start;
                    let mut steps = 0;
                    while slow != 0 {
                        slow = row[slow];
                        steps += 1;
                        if steps > d {
                            return Ok(());
                        }
                    }
                }
            }
            budget.charge(1)?;
            out.push(row.clone());
            return Ok(());
        }
        for v in 0..=d {
            if type_alpha && v != 0 && used[v] {
                continue;
            }
            row[e] = v;
            if v != 0 {
                used[v] = true;
            }
            rec(e + 1, d, type_alpha, nilpotent, row, used, out, budget)?;
            if v != 0 {
                used[v] = false;
            }
            row[e] = 0;
        }
        Ok(())
    }
    let mut used = vec![false; d + 1];
    rec(
        1, d, type_alpha, nilpotent, &mut row, &mut used, &mut out, budget,
    )?;
    Ok(out)
}

fn rows_commute(a: &[usize], b: &[usize]) -> bool {
    (1..a.len()).all(|e| a[b[e]] == b[a[e]])
}

/// All isomorphism classes of dimension `d` in the category, by exhaustive
/// generation of commuting action tuples. With `indecomposable` set, only
/// connected action graphs are kept.
pub fn enumerate_modules(
    d: usize,
    cat: &CategorySpec,
    indecomposable: bool,
    budget: &Budget,
) -> Result<BTreeSet<ModuleClass>, ModuleError> {
    let mut out = BTreeSet::new();
    if d == 0 {
        if !indecomposable {
            out.insert(ModuleClass::zero(cat.n));
        }
        return Ok(out);
    }
    let candidates = generator_candidates(d, cat.type_alpha, cat.origin_support, budget)?;
    let mut rows: Vec<&Vec<usize>> = Vec::with_capacity(cat.n);
    fn rec<'a>(
        rows: &mut Vec<&'a Vec<usize>>,
        candidates: &'a [Vec<usize>],
        d: usize,
        cat: &CategorySpec,
        indecomposable: bool,
        budget: &Budget,
        out: &mut BTreeSet<ModuleClass>,
    ) -> Result<(), ModuleError> {
        if rows.len() == cat.n {
            budget.charge(1)?;
            let m = PointedModule {
                n: cat.n,
                size: d,
                action: rows.iter().map(|r| (*r).clone()).collect(),
            };
            if cat.gradable && find_grading(&m).is_none() {
                return Ok(());
            }
            if indecomposable && component_elements(&m).len() != 1 {
                return Ok(());
            }
            out.insert(canonical_class(&m));
            return Ok(());
        }
        for cand in candidates {
            budget.charge(1)?;
            if rows.iter().all(|r| rows_commute(r, cand)) {
                rows.push(cand);
                rec(rows, candidates, d, cat, indecomposable, budget, out)?;
                rows.pop();
            }
        }
        Ok(())
    }
    rec(
        &mut rows,
        &candidates,
        d,
        cat,
        indecomposable,
        budget,
        &mut out,
    )?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(points: &[&[i64]]) -> SkewShape {
        shapes::canonicalize(
            points[0].len(),
            points.iter().map(|p| p.to_vec()).collect::<Vec<_>>(),
        )
        .unwrap()
    }

    /// The k-vertex ladder: t shifts down a chain and kills the end.
    fn ladder(k: usize) -> PointedModule {
        module_from_shape(&SkewShape::interval(k)).0
    }

    /// t acts as a k-cycle.
    fn polygon(k: usize) -> PointedModule {
        let mut row = vec![0usize; k + 1];
        for e in 1..=k {
            row[e] = e % k + 1;
        }
        PointedModule::new(1, k, vec![row]).unwrap()
    }

    #[test]
    fn validate_zero_and_small() {
        assert!(validate(&PointedModule::zero(2)).is_ok());
        let m = PointedModule::new(2, 1, vec![vec![0, 0], vec![0, 0]]).unwrap();
        assert!(validate(&m).is_ok());
    }

    #[test]
    fn validate_reports_noncommuting_pair() {
        // x_1: 1 -> 2, 2 -> 2 (fixed); x_2: 1 -> 1, 2 -> 0. Then
        // x_1 x_2 · 1 = 2 but x_2 x_1 · 1 = 0.
        let m = PointedModule::new(2, 2, vec![vec![0, 2, 2], vec![0, 1, 0]]).unwrap();
        match validate(&m) {
            Err(Violation::NonCommuting {
                element: 1, ab, ba, ..
            }) => {
                assert_ne!(ab, ba);
            }
            other => panic!("expected non-commuting violation, got {other:?}"),
        }
    }

    #[test]
    fn shape_module_action_is_off_shape_zero() {
        let s = shape(&[&[1, 0], &[2, 0], &[3, 0], &[0, 1], &[1, 1], &[0, 2]]);
        let (m, grading) = module_from_shape(&s);
        assert!(validate(&m).is_ok());
        assert!(grading.is_valid_for(&m));
        assert!(is_type_alpha(&m));
        // Minimal generators are the minimal boxes (1,0) and (0,1).
        let gens: Vec<&[i64]> = minimal_generators(&m)
            .iter()
            .map(|&e| grading.degree(e))
            .collect();
        assert_eq!(gens, vec![&[0, 1][..], &[1, 0][..]]);
        // m · v = 0 exactly off-shape.
        for e in 1..=m.dim() {
            for g in 0..2 {
                let mut t = grading.degree(e).to_vec();
                t[g] += 1;
                assert_eq!(m.act(g, e) == 0, !s.contains(&t));
            }
        }
    }

    #[test]
    fn single_box_annihilated_by_generators() {
        let (m, _) = module_from_shape(&SkewShape::unit_box(2));
        assert_eq!(m.dim(), 1);
        assert_eq!(m.act(0, 1), 0);
        assert_eq!(m.act(1, 1), 0);
    }

    #[test]
    fn type_alpha_examples() {
        assert!(is_type_alpha(&ladder(3)));
        // t(a) = b = t(b), t(c) = 0 is not type α.
        let m = PointedModule::new(1, 3, vec![vec![0, 2, 2, 0]]).unwrap();
        assert!(!is_type_alpha(&m));
        let b = Budget::default();
        for s in shapes::enumerate_connected_shapes(2, 4, &b).unwrap() {
            assert!(is_type_alpha(&module_from_shape(&s).0));
        }
    }

    #[test]
    fn grading_of_cycle_is_none() {
        assert!(find_grading(&polygon(3)).is_none());
        assert!(!supported_at_origin(&polygon(3)));
        assert!(annihilator(&polygon(3)).is_empty());
    }

    #[test]
    fn tree_module_grades_but_is_not_alpha() {
        // t(a) = t(b) = c, t(c) = d, t(d) = 0.
        let m = PointedModule::new(1, 4, vec![vec![0, 3, 3, 4, 0]]).unwrap();
        let g = find_grading(&m).expect("tree admits a grading");
        assert!(g.is_valid_for(&m));
        assert!(!is_type_alpha(&m));
        assert!(supported_at_origin(&m));
    }

    #[test]
    fn annihilator_examples() {
        assert_eq!(annihilator(&PointedModule::zero(2)), vec![vec![0, 0]]);
        assert_eq!(annihilator(&ladder(3)), vec![vec![3]]);
        let (m, _) = module_from_shape(&shape(&[&[0, 0], &[1, 0], &[0, 1]]));
        let ann = annihilator(&m);
        // Killing monomials: x^2, y^2, xy are the minimal ones.
        assert_eq!(ann, vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
    }

    #[test]
    fn nilpotency_degree_bounded_by_dim() {
        let b = Budget::default();
        for k in 1..=5 {
            for s in shapes::enumerate_connected_shapes(2, k, &b).unwrap() {
                let (m, _) = module_from_shape(&s);
                let r = nilpotency_degree(&m).unwrap();
                assert!(r <= m.dim());
            }
        }
        assert_eq!(nilpotency_degree(&polygon(4)), None);
    }

    #[test]
    fn submodules_of_ladder_and_split_pair() {
        let b = Budget::default();
        assert_eq!(submodules(&ladder(3), &b).unwrap().len(), 4);
        let two = direct_sum(&ladder(1), &ladder(1)).unwrap();
        assert_eq!(submodules(&two, &b).unwrap().len(), 4);
    }

    #[test]
    fn submodules_of_shape_module_match_filters() {
        let b = Budget::default();
        for s in [
            shape(&[&[1, 0], &[2, 0], &[3, 0], &[0, 1], &[1, 1], &[0, 2]]),
            shape(&[&[0, 0], &[1, 0], &[0, 1]]),
        ] {
            let (m, grading) = module_from_shape(&s);
            let subs = submodules(&m, &b).unwrap();
            let filters = shapes::filters_of(&s);
            assert_eq!(subs.len(), filters.len());
            let sub_boxsets: BTreeSet<Vec<Point>> = subs
                .iter()
                .map(|elems| {
                    let mut boxes: Vec<Point> = elems
                        .iter()
                        .filter(|&&e| e != 0)
                        .map(|&e| grading.degree(e).to_vec())
                        .collect();
                    boxes.sort();
                    boxes
                })
                .collect();
            let filter_set: BTreeSet<Vec<Point>> = filters.into_iter().collect();
            assert_eq!(sub_boxsets, filter_set);
        }
    }

    #[test]
    fn ten_box_quotient_example() {
        let s = shape(&[
            &[0, 3],
            &[0, 2],
            &[1, 2],
            &[2, 2],
            &[1, 1],
            &[2, 1],
            &[3, 1],
            &[2, 0],
            &[3, 0],
            &[4, 0],
        ]);
        let (m, grading) = module_from_shape(&s);
        let marked: Vec<Point> = vec![vec![0, 3], vec![2, 2], vec![2, 1], vec![3, 1], vec![4, 0]];
        let sub: Vec<usize> = std::iter::once(0)
            .chain((1..=m.dim()).filter(|&e| marked.contains(&grading.degree(e).to_vec())))
            .collect();
        let q = quotient(&m, &sub).unwrap();
        // The submodule is box ⊕ box ⊕ hook, the quotient hook ⊕ domino.
        let sub_class = canonical_class(&induced_submodule(&m, &sub[1..]));
        let expected_sub = ModuleClass::from_components(
            2,
            vec![
                ComponentClass::Shape(SkewShape::unit_box(2)),
                ComponentClass::Shape(SkewShape::unit_box(2)),
                ComponentClass::Shape(shape(&[&[0, 0], &[1, 0], &[0, 1]])),
            ],
        );
        assert_eq!(sub_class, expected_sub);
        let expected_q = ModuleClass::from_components(
            2,
            vec![
                ComponentClass::Shape(shape(&[&[0, 0], &[1, 0]])),
                ComponentClass::Shape(shape(&[&[1, 0], &[0, 1], &[1, 1]])),
            ],
        );
        assert_eq!(canonical_class(&q), expected_q);
    }

    #[test]
    fn quotient_edges() {
        let m = ladder(3);
        let all: Vec<usize> = (0..=3).collect();
        assert_eq!(quotient(&m, &all).unwrap(), PointedModule::zero(1));
        let q = quotient(&m, &[0]).unwrap();
        assert_eq!(q, m);
        assert!(matches!(
            quotient(&m, &[0, 1]),
            Err(ModuleError::NotASubmodule(_))
        ));
    }

    #[test]
    fn third_isomorphism_on_nested_chain() {
        let b = Budget::default();
        let s = shape(&[&[1, 0], &[2, 0], &[3, 0], &[0, 1], &[1, 1], &[0, 2]]);
        let (m, _) = module_from_shape(&s);
        let subs = submodules(&m, &b).unwrap();
        for lo in &subs {
            for hi in &subs {
                let lo_set: BTreeSet<usize> = lo.iter().copied().collect();
                let hi_set: BTreeSet<usize> = hi.iter().copied().collect();
                if !lo_set.is_subset(&hi_set) {
                    continue;
                }
                // (hi/lo) ⊂ m/lo and (m/lo)/(hi/lo) ≅ m/hi.
                let m_mod_lo = quotient(&m, lo).unwrap();
                let kept: Vec<usize> = (1..=m.dim()).filter(|e| !lo_set.contains(e)).collect();
                let hi_in_quot: Vec<usize> = std::iter::once(0)
                    .chain(
                        kept.iter()
                            .enumerate()
                            .filter(|(_, old)| hi_set.contains(old))
                            .map(|(new, _)| new + 1),
                    )
                    .collect();
                let double = quotient(&m_mod_lo, &hi_in_quot).unwrap();
                let direct = quotient(&m, hi).unwrap();
                assert!(isomorphic(&double, &direct));
            }
        }
    }

    #[test]
    fn sum_and_smash_dimensions() {
        let a = ladder(2);
        let b = ladder(3);
        assert_eq!(direct_sum(&a, &b).unwrap().dim(), 5);
        let z = PointedModule::zero(1);
        assert!(isomorphic(&direct_sum(&a, &z).unwrap(), &a));
        let s = smash_product(&a, &b).unwrap();
        assert_eq!(s.dim(), 6);
        assert!(validate(&s).is_ok());
        assert!(matches!(
            direct_sum(&a, &PointedModule::zero(2)),
            Err(ModuleError::DimensionMismatch(1, 2))
        ));
    }

    #[test]
    fn smash_distributes_over_sum() {
        let m = ladder(2);
        let n = ladder(3);
        let l = polygon(2);
        let lhs = smash_product(&m, &direct_sum(&n, &l).unwrap()).unwrap();
        let rhs = direct_sum(
            &smash_product(&m, &n).unwrap(),
            &smash_product(&m, &l).unwrap(),
        )
        .unwrap();
        assert!(isomorphic(&lhs, &rhs));
    }

    #[test]
    fn tensor_distributes_and_commutes() {
        let m = ladder(2);
        let n = ladder(3);
        let l = polygon(2);
        let lhs = tensor_product(&m, &direct_sum(&n, &l).unwrap()).unwrap();
        let rhs = direct_sum(
            &tensor_product(&m, &n).unwrap(),
            &tensor_product(&m, &l).unwrap(),
        )
        .unwrap();
        assert!(isomorphic(&lhs, &rhs));
        assert!(isomorphic(
            &tensor_product(&m, &n).unwrap(),
            &tensor_product(&n, &m).unwrap()
        ));
        assert!(validate(&tensor_product(&m, &n).unwrap()).is_ok());
    }

    #[test]
    fn tensor_of_ladders_collapses() {
        // L_2 ⊗ L_2 ≅ L_2 while L_2 ∧ L_2 has dimension 4.
        let l2 = ladder(2);
        let t = tensor_product(&l2, &l2).unwrap();
        assert!(isomorphic(&t, &l2));
        assert_eq!(smash_product(&l2, &l2).unwrap().dim(), 4);
    }

    #[test]
    fn decompose_examples() {
        assert!(decompose(&PointedModule::zero(2)).is_empty());
        let s = shape(&[&[0, 0], &[1, 0], &[0, 1]]);
        let (m, _) = module_from_shape(&s);
        assert_eq!(decompose(&m).len(), 1);
        let (box2, _) = module_from_shape(&SkewShape::unit_box(2));
        let sum = direct_sum(&m, &box2).unwrap();
        let parts = decompose(&sum);
        assert_eq!(parts.len(), 2);
        assert!(isomorphic(&direct_sum_all(2, &parts).unwrap(), &sum));
    }

    #[test]
    fn isomorphism_examples() {
        let horiz = module_from_shape(&shape(&[&[0, 0], &[1, 0]])).0;
        let vert = module_from_shape(&shape(&[&[0, 0], &[0, 1]])).0;
        assert!(!isomorphic(&horiz, &vert));
        // Relabeled module is isomorphic to itself.
        let m = module_from_shape(&shape(&[&[0, 0], &[1, 0], &[0, 1]])).0;
        let relabeled = PointedModule::new(
            2,
            3,
            vec![
                // swap labels 1 <-> 3 of the hook module
                {
                    let mut row = vec![0; 4];
                    let perm = [0usize, 3, 2, 1];
                    for e in 1..=3 {
                        row[perm[e]] = perm[m.act(0, e)];
                    }
                    row
                },
                {
                    let mut row = vec![0; 4];
                    let perm = [0usize, 3, 2, 1];
                    for e in 1..=3 {
                        row[perm[e]] = perm[m.act(1, e)];
                    }
                    row
                },
            ],
        )
        .unwrap();
        assert!(isomorphic(&m, &relabeled));
        assert_eq!(canonical_class(&m), canonical_class(&relabeled));
    }

    #[test]
    fn shape_round_trip_up_to_five_boxes() {
        let b = Budget::default();
        for k in 0..=5 {
            for s in shapes::enumerate_connected_shapes(2, k, &b).unwrap() {
                let (m, _) = module_from_shape(&s);
                assert_eq!(shape_from_module(&m).unwrap(), s);
            }
        }
    }

    #[test]
    fn shape_classes_separate_distinct_shapes() {
        let b = Budget::default();
        let mut all = Vec::new();
        for k in 1..=5 {
            all.extend(shapes::enumerate_connected_shapes(2, k, &b).unwrap());
        }
        for s in &all {
            for t in &all {
                let (ms, _) = module_from_shape(s);
                let (mt, _) = module_from_shape(t);
                assert_eq!(isomorphic(&ms, &mt), s == t, "{s} vs {t}");
            }
        }
    }

    #[test]
    fn shape_from_module_rejects_non_alpha() {
        // t(a) = t(b) = c, t(c) = 0: connected but two elements collide.
        let m = PointedModule::new(1, 3, vec![vec![0, 3, 3, 0]]).unwrap();
        assert!(matches!(
            shape_from_module(&m),
            Err(ModuleError::PreconditionFailed("type α"))
        ));
        assert!(matches!(
            shape_from_module(&polygon(3)),
            Err(ModuleError::PreconditionFailed("gradable"))
        ));
    }

    #[test]
    fn ladder_shape_is_interval() {
        assert_eq!(
            shape_from_module(&ladder(3)).unwrap(),
            SkewShape::interval(3)
        );
    }

    #[test]
    fn base_change_matrix_properties() {
        let m = ladder(3);
        let mats = base_change_matrices(&m);
        assert_eq!(mats.len(), 1);
        // Shift matrix: nilpotent, ones on the superdiagonal pattern.
        let ones: usize = mats[0].iter().flatten().map(|&v| v as usize).sum();
        assert_eq!(ones, 2);
        for mat in &mats {
            for col in 0..3 {
                let col_sum: u8 = (0..3).map(|r| mat[r][col]).sum();
                assert!(col_sum <= 1);
            }
        }
        // Row sums ≤ 1 iff type α.
        let not_alpha = PointedModule::new(1, 3, vec![vec![0, 2, 2, 0]]).unwrap();
        let mats = base_change_matrices(&not_alpha);
        let max_row: u8 = mats[0].iter().map(|r| r.iter().sum()).max().unwrap();
        assert_eq!(max_row, 2);
        assert!(!is_type_alpha(&not_alpha));
    }

    #[test]
    fn cyclic_iff_unique_minimal_box() {
        let b = Budget::default();
        for k in 1..=5 {
            for s in shapes::enumerate_connected_shapes(2, k, &b).unwrap() {
                let (m, grading) = module_from_shape(&s);
                let minimal_boxes: Vec<&[i64]> = minimal_generators(&m)
                    .iter()
                    .map(|&e| grading.degree(e))
                    .collect();
                assert_eq!(is_cyclic(&m), minimal_boxes.len() == 1, "{s}");
            }
        }
    }

    #[test]
    fn enumerate_dimension_one_classes() {
        let b = Budget::default();
        let classes = enumerate_modules(1, &CategorySpec::full(1), false, &b).unwrap();
        // t·m = 0 and t·m = m.
        assert_eq!(classes.len(), 2);
    }

    #[test]
    fn enumerate_alpha_indecomposables_are_ladders_and_polygons() {
        let b = Budget::default();
        let mut cat = CategorySpec::full(1);
        cat.type_alpha = true;
        for d in 1..=4 {
            let classes = enumerate_modules(d, &cat, true, &b).unwrap();
            let expected: BTreeSet<ModuleClass> =
                [canonical_class(&ladder(d)), canonical_class(&polygon(d))]
                    .into_iter()
                    .collect();
            assert_eq!(classes, expected, "d = {d}");
        }
    }

    #[test]
    fn zero_dimension_enumeration() {
        let b = Budget::default();
        let classes = enumerate_modules(0, &CategorySpec::full(2), false, &b).unwrap();
        assert_eq!(classes.len(), 1);
        assert!(classes.iter().next().unwrap().is_zero());
    }

    #[test]
    fn class_of_disconnected_shape_forgets_embedding() {
        // Two embeddings of box ⊔ box give the same class.
        let a = shape(&[&[1, 0], &[0, 1]]);
        let b = shape(&[&[2, 0], &[0, 1]]);
        assert_eq!(ModuleClass::of_shape(&a), ModuleClass::of_shape(&b));
        assert_eq!(ModuleClass::of_shape(&a).components().len(), 2);
    }

    #[test]
    fn representative_round_trips_class() {
        let class = ModuleClass::from_components(
            1,
            vec![
                ComponentClass::Shape(SkewShape::interval(2)),
                ComponentClass::Table(canonical_table(&polygon(3))),
            ],
        );
        let rep = class.representative();
        assert_eq!(canonical_class(&rep), class);
    }

    #[test]
    fn module_literal_round_trip() {
        let m = ladder(3);
        let lit = ModuleLiteral::from(&m);
        let back = PointedModule::try_from(lit).unwrap();
        assert_eq!(m, back);
        assert!(PointedModule::new(1, 2, vec![vec![0, 3, 0]]).is_err());
        assert!(PointedModule::new(1, 2, vec![vec![1, 2, 0]]).is_err());
    }
}
