//! Standard and semistandard skew tableaux as filtrations of shape modules
//! (n = 2 only).
//!
//! A filling `f` of a shape `S` induces the chain of up-sets
//! `S_{≥k} = { s ∈ S | f(s) ≥ k }`. For a standard filling the chain is a
//! complete flag of submodules of `M_S` with one-box quotients; for a
//! semistandard filling each quotient is a direct sum of horizontal strips.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::budget::{Budget, BudgetExceeded};
use crate::modules::{self, PointedModule};
use crate::shapes::{self, Point, SkewShape};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TableauError {
    #[error("tableaux are only defined for n = 2 (shape has n = {0})")]
    UnsupportedDimension(usize),
    #[error("expected {expected} entries, got {got}")]
    EntryCountMismatch { expected: usize, got: usize },
    #[error("entries must be positive integers")]
    NonPositiveEntry,
    #[error("not a filtration: {0}")]
    NotAFiltration(String),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
}

/// A filling of a skew shape with positive integers, stored parallel to the
/// sorted box list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tableau {
    shape: SkewShape,
    entries: Vec<u32>,
}

impl Tableau {
    pub fn new(shape: SkewShape, entries: Vec<u32>) -> Result<Self, TableauError> {
        if shape.n() != 2 {
            return Err(TableauError::UnsupportedDimension(shape.n()));
        }
        if entries.len() != shape.len() {
            return Err(TableauError::EntryCountMismatch {
                expected: shape.len(),
                got: entries.len(),
            });
        }
        if entries.contains(&0) {
            return Err(TableauError::NonPositiveEntry);
        }
        Ok(Tableau { shape, entries })
    }

    pub fn shape(&self) -> &SkewShape {
        &self.shape
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn entry(&self, b: &[i64]) -> Option<u32> {
        self.shape
            .boxes()
            .iter()
            .position(|x| x.as_slice() == b)
            .map(|i| self.entries[i])
    }

    fn neighbor_entry(&self, b: &[i64], dx: i64, dy: i64) -> Option<u32> {
        self.entry(&[b[0] + dx, b[1] + dy])
    }

    /// Entries are a bijection onto `1..=m`, strictly increasing to the
    /// right in rows and upwards in columns.
    pub fn is_standard(&self) -> bool {
        let m = self.entries.len() as u32;
        let mut seen = vec![false; m as usize + 1];
        for &e in &self.entries {
            if e > m || seen[e as usize] {
                return false;
            }
            seen[e as usize] = true;
        }
        self.strict_columns() && self.rows_with(|a, b| a < b)
    }

    /// Weakly increasing to the right in rows, strictly increasing upwards
    /// in columns.
    pub fn is_semistandard(&self) -> bool {
        self.strict_columns() && self.rows_with(|a, b| a <= b)
    }

    fn rows_with(&self, ok: impl Fn(u32, u32) -> bool) -> bool {
        self.shape.boxes().iter().zip(&self.entries).all(|(b, &e)| {
            self.neighbor_entry(b, 1, 0)
                .is_none_or(|right| ok(e, right))
        })
    }

    fn strict_columns(&self) -> bool {
        self.shape
            .boxes()
            .iter()
            .zip(&self.entries)
            .all(|(b, &e)| self.neighbor_entry(b, 0, 1).is_none_or(|up| e < up))
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rendered = shapes::render_grid(&self.shape, |b| {
            self.entry(b).map(|e| e.to_string()).unwrap_or_default()
        })
        .expect("tableau shapes are two-dimensional");
        write!(f, "{rendered}")
    }
}

/// All standard tableaux of shape `S`, in a deterministic order.
///
/// Backtracking over linear extensions: label `k` goes to a box whose lower
/// neighbors inside the shape are already labeled; candidates are scanned in
/// lexicographic box order.
pub fn enumerate_standard(s: &SkewShape, budget: &Budget) -> Result<Vec<Tableau>, TableauError> {
    if s.n() != 2 {
        return Err(TableauError::UnsupportedDimension(s.n()));
    }
    let boxes = s.boxes();
    let index: BTreeMap<&[i64], usize> = boxes
        .iter()
        .enumerate()
        .map(|(i, b)| (b.as_slice(), i))
        .collect();
    let lower: Vec<Vec<usize>> = boxes
        .iter()
        .map(|b| {
            [(-1i64, 0i64), (0, -1)]
                .iter()
                .filter_map(|(dx, dy)| index.get([b[0] + dx, b[1] + dy].as_slice()).copied())
                .collect()
        })
        .collect();
    let mut entries = vec![0u32; boxes.len()];
    let mut filled = vec![false; boxes.len()];
    let mut out = Vec::new();
    fn rec(
        label: u32,
        lower: &[Vec<usize>],
        entries: &mut Vec<u32>,
        filled: &mut Vec<bool>,
        shape: &SkewShape,
        out: &mut Vec<Tableau>,
        budget: &Budget,
    ) -> Result<(), BudgetExceeded> {
        if label as usize > entries.len() {
            out.push(Tableau {
                shape: shape.clone(),
                entries: entries.clone(),
            });
            return Ok(());
        }
        for i in 0..entries.len() {
            if filled[i] || !lower[i].iter().all(|&j| filled[j]) {
                continue;
            }
            budget.charge(1)?;
            filled[i] = true;
            entries[i] = label;
            rec(label + 1, lower, entries, filled, shape, out, budget)?;
            filled[i] = false;
            entries[i] = 0;
        }
        Ok(())
    }
    rec(1, &lower, &mut entries, &mut filled, s, &mut out, budget)?;
    Ok(out)
}

/// The decreasing chain of up-sets `S_{≥k}` for `k = 1, …, max+1` (the last
/// is empty), each validated to be an order filter. Requires the filling to
/// be standard or semistandard.
pub fn filtration_from_tableau(t: &Tableau) -> Result<Vec<Vec<Point>>, TableauError> {
    if !t.is_standard() && !t.is_semistandard() {
        return Err(TableauError::NotAFiltration(
            "entries are neither standard nor semistandard".into(),
        ));
    }
    let max = t.entries.iter().copied().max().unwrap_or(0);
    let filters: Vec<Vec<Point>> = shapes::filters_of(t.shape()).into_iter().collect();
    let mut chain = Vec::new();
    for k in 1..=max + 1 {
        let mut level: Vec<Point> = t
            .shape
            .boxes()
            .iter()
            .zip(&t.entries)
            .filter(|(_, &e)| e >= k)
            .map(|(b, _)| b.clone())
            .collect();
        level.sort();
        if !filters.contains(&level) {
            return Err(TableauError::NotAFiltration(format!(
                "the boxes with entries ≥ {k} are not an order filter"
            )));
        }
        chain.push(level);
    }
    Ok(chain)
}

/// Class of the subquotient between consecutive chain levels, as connected
/// shapes of the difference box set.
pub fn subquotient_components(hi: &[Point], lo: &[Point]) -> Vec<SkewShape> {
    let diff: Vec<Point> = hi.iter().filter(|b| !lo.contains(b)).cloned().collect();
    shapes::split_canonical_components(2, &diff)
}

/// A connected shape all of whose boxes lie in one row.
pub fn is_horizontal_strip(s: &SkewShape) -> bool {
    s.is_connected() && !s.is_empty() && s.extent(1) == 1
}

/// Count maximal chains `0 = L_0 ⊂ L_1 ⊂ … ⊂ L_m = M_S` of submodules with
/// one-dimensional quotients, by direct search of the submodule lattice of
/// the shape module. Independent of the tableau backtracking; the two
/// counts must agree.
pub fn count_standard_via_chains(s: &SkewShape, budget: &Budget) -> Result<u64, TableauError> {
    if s.n() != 2 {
        return Err(TableauError::UnsupportedDimension(s.n()));
    }
    let (m, _) = modules::module_from_shape(s);
    let full: u64 = if m.dim() == 0 {
        0
    } else {
        (1u64 << m.dim()) - 1
    };
    let mut memo: BTreeMap<u64, u64> = BTreeMap::new();
    count_chains_from(&m, 0, full, &mut memo, budget)
}

fn count_chains_from(
    m: &PointedModule,
    mask: u64,
    full: u64,
    memo: &mut BTreeMap<u64, u64>,
    budget: &Budget,
) -> Result<u64, TableauError> {
    if mask == full {
        return Ok(1);
    }
    if let Some(&hit) = memo.get(&mask) {
        return Ok(hit);
    }
    budget.charge(1)?;
    let mut total = 0;
    for e in 1..=m.dim() {
        if mask >> (e - 1) & 1 == 1 {
            continue;
        }
        // Adding e keeps the subset closed iff the action sends e inside.
        let closed = (0..m.n()).all(|g| {
            let v = m.act(g, e);
            v == 0 || mask >> (v - 1) & 1 == 1
        });
        if closed {
            total += count_chains_from(m, mask | 1 << (e - 1), full, memo, budget)?;
        }
    }
    memo.insert(mask, total);
    Ok(total)
}
