//! n-dimensional skew shapes: finite convex subposets of `Z^n` up to translation.
//!
//! A shape is stored in canonical form: every axis has minimum coordinate 0
//! and the box list is sorted lexicographically. Convexity means box-interval
//! closure for the componentwise order: whenever `x <= z <= y` holds
//! componentwise for boxes `x, y` of the shape, `z` is a box too. For n = 2
//! the connected shapes are exactly the skew Young diagrams in French
//! notation (x to the right, y upwards).

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::budget::{Budget, BudgetExceeded};

/// An integer lattice point; the boxes of a shape.
pub type Point = Vec<i64>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ShapeError {
    #[error("not convex: {lo:?} <= {mid:?} <= {hi:?} but {mid:?} is missing")]
    NotConvex { lo: Point, mid: Point, hi: Point },
    #[error("expected points of dimension {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("ambient dimension must be at least 1")]
    ZeroDimension,
    #[error("operation is only defined for n = 2 (shape has n = {0})")]
    UnsupportedDimension(usize),
    #[error("cannot parse shape literal: {0}")]
    Parse(String),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
}

/// A canonical skew shape: translation-normalized, sorted, convex box set.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SkewShape {
    n: usize,
    boxes: Vec<Point>,
}

impl fmt::Debug for SkewShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SkewShape(n={}, {})", self.n, self)
    }
}

impl fmt::Display for SkewShape {
    /// The text literal: semicolon-separated tuples, `∅` for the empty shape.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.boxes.is_empty() {
            return write!(f, "∅");
        }
        for (i, b) in self.boxes.iter().enumerate() {
            if i > 0 {
                write!(f, ";")?;
            }
            write!(f, "(")?;
            for (j, c) in b.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{c}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl SkewShape {
    pub fn empty(n: usize) -> SkewShape {
        assert!(n >= 1, "ambient dimension must be at least 1");
        SkewShape {
            n,
            boxes: Vec::new(),
        }
    }

    /// Single box at the origin.
    pub fn unit_box(n: usize) -> SkewShape {
        assert!(n >= 1);
        SkewShape {
            n,
            boxes: vec![vec![0; n]],
        }
    }

    /// The interval `0..k` in `Z^1` (the shape of the k-vertex ladder).
    pub fn interval(k: usize) -> SkewShape {
        SkewShape {
            n: 1,
            boxes: (0..k as i64).map(|x| vec![x]).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn boxes(&self) -> &[Point] {
        &self.boxes
    }

    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        self.boxes.binary_search_by(|b| b.as_slice().cmp(p)).is_ok()
    }

    /// `max + 1` of the given coordinate over all boxes (0 for the empty
    /// shape). In canonical form the minimum per axis is 0, so this is the
    /// side length of the bounding box.
    pub fn extent(&self, axis: usize) -> i64 {
        self.boxes.iter().map(|b| b[axis] + 1).max().unwrap_or(0)
    }

    pub fn is_connected(&self) -> bool {
        components_of_points(&self.boxes.iter().cloned().collect()).len() <= 1
    }

    /// Box list shifted by `offset` (result is generally not canonical).
    pub fn translated(&self, offset: &[i64]) -> Vec<Point> {
        self.boxes
            .iter()
            .map(|b| b.iter().zip(offset).map(|(c, o)| c + o).collect())
            .collect()
    }
}

fn le(a: &[i64], b: &[i64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// First convexity violation in a deduplicated point set, if any.
fn convexity_witness(points: &BTreeSet<Point>) -> Option<(Point, Point, Point)> {
    for lo in points {
        for hi in points {
            if lo == hi || !le(lo, hi) {
                continue;
            }
            // Walk the box interval [lo, hi].
            let mut z = lo.clone();
            loop {
                if !points.contains(&z) {
                    return Some((lo.clone(), z, hi.clone()));
                }
                // Next point of the interval in odometer order.
                let mut axis = 0;
                loop {
                    if axis == z.len() {
                        break;
                    }
                    if z[axis] < hi[axis] {
                        z[axis] += 1;
                        break;
                    }
                    z[axis] = lo[axis];
                    axis += 1;
                }
                if axis == z.len() {
                    break;
                }
            }
        }
    }
    None
}

/// Componentwise-between closure check.
pub fn is_convex(points: &[Point]) -> bool {
    let set: BTreeSet<Point> = points.iter().cloned().collect();
    if set.iter().any(|p| p.len() != points[0].len()) {
        return false;
    }
    convexity_witness(&set).is_none()
}

/// Normalize a finite point set into a canonical [`SkewShape`].
///
/// Translates so the minimum of every coordinate is 0, sorts, and rejects
/// non-convex input.
///
/// ```
/// use skew_hall::shapes::canonicalize;
///
/// let s = canonicalize(2, vec![vec![5, 8], vec![6, 8]]).unwrap();
/// assert_eq!(s.to_string(), "(0,0);(1,0)");
/// assert!(canonicalize(2, vec![vec![0, 0], vec![1, 1]]).is_err());
/// ```
pub fn canonicalize<I>(n: usize, points: I) -> Result<SkewShape, ShapeError>
where
    I: IntoIterator<Item = Point>,
{
    if n == 0 {
        return Err(ShapeError::ZeroDimension);
    }
    let mut set = BTreeSet::new();
    for p in points {
        if p.len() != n {
            return Err(ShapeError::DimensionMismatch {
                expected: n,
                got: p.len(),
            });
        }
        set.insert(p);
    }
    if let Some((lo, mid, hi)) = convexity_witness(&set) {
        return Err(ShapeError::NotConvex { lo, mid, hi });
    }
    Ok(canonical_translate(n, &set))
}

/// Translation-normalize and sort without a convexity check.
fn canonical_translate(n: usize, set: &BTreeSet<Point>) -> SkewShape {
    if set.is_empty() {
        return SkewShape::empty(n);
    }
    let mut mins = vec![i64::MAX; n];
    for p in set {
        for (m, c) in mins.iter_mut().zip(p) {
            *m = (*m).min(*c);
        }
    }
    let boxes: Vec<Point> = set
        .iter()
        .map(|p| p.iter().zip(&mins).map(|(c, m)| c - m).collect())
        .collect();
    // BTreeSet iteration is lex-sorted and translation preserves lex order.
    SkewShape { n, boxes }
}

fn components_of_points(set: &BTreeSet<Point>) -> Vec<BTreeSet<Point>> {
    let mut remaining: BTreeSet<Point> = set.clone();
    let mut out = Vec::new();
    while let Some(seed) = remaining.iter().next().cloned() {
        let mut comp = BTreeSet::new();
        let mut queue = VecDeque::new();
        remaining.remove(&seed);
        queue.push_back(seed);
        while let Some(p) = queue.pop_front() {
            for axis in 0..p.len() {
                for step in [-1i64, 1] {
                    let mut q = p.clone();
                    q[axis] += step;
                    if remaining.remove(&q) {
                        queue.push_back(q);
                    }
                }
            }
            comp.insert(p);
        }
        out.push(comp);
    }
    out
}

/// Split a convex box set into canonical connected shapes. The pieces of a
/// convex set are convex (the box interval of two points in a piece stays
/// inside the piece), so no convexity recheck is needed.
pub(crate) fn split_canonical_components(n: usize, points: &[Point]) -> Vec<SkewShape> {
    let set: BTreeSet<Point> = points.iter().cloned().collect();
    let mut out: Vec<SkewShape> = components_of_points(&set)
        .iter()
        .map(|c| canonical_translate(n, c))
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.boxes.cmp(&b.boxes)));
    out
}

/// Connected components under unit-step adjacency, each canonicalized,
/// ordered by size then lexicographic box list.
pub fn components(s: &SkewShape) -> Vec<SkewShape> {
    let set: BTreeSet<Point> = s.boxes.iter().cloned().collect();
    let mut out: Vec<SkewShape> = components_of_points(&set)
        .iter()
        .map(|c| canonical_translate(s.n, c))
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.boxes.cmp(&b.boxes)));
    out
}

/// All canonical connected skew shapes with `k` boxes in dimension `n`.
///
/// Growth enumeration: connected box sets are grown one adjacent box at a
/// time with translation-dedup, and convexity is filtered at the end. Every
/// connected set of size k+1 stays connected after deleting some spanning
/// tree leaf, so the growth reaches all of them. `k = 0` yields the empty
/// shape (the class of the zero module).
pub fn enumerate_connected_shapes(
    n: usize,
    k: usize,
    budget: &Budget,
) -> Result<Vec<SkewShape>, ShapeError> {
    if n == 0 {
        return Err(ShapeError::ZeroDimension);
    }
    if k == 0 {
        return Ok(vec![SkewShape::empty(n)]);
    }
    let mut layer: BTreeSet<Vec<Point>> = BTreeSet::new();
    layer.insert(vec![vec![0; n]]);
    for _ in 1..k {
        let mut next = BTreeSet::new();
        for poly in &layer {
            let set: BTreeSet<Point> = poly.iter().cloned().collect();
            for p in poly {
                for axis in 0..n {
                    for step in [-1i64, 1] {
                        let mut q = p.clone();
                        q[axis] += step;
                        if set.contains(&q) {
                            continue;
                        }
                        budget.charge(1)?;
                        let mut grown = set.clone();
                        grown.insert(q);
                        next.insert(canonical_translate(n, &grown).boxes);
                    }
                }
            }
        }
        layer = next;
    }
    Ok(layer
        .into_iter()
        .filter(|boxes| {
            let set: BTreeSet<Point> = boxes.iter().cloned().collect();
            convexity_witness(&set).is_none()
        })
        .map(|boxes| SkewShape { n, boxes })
        .collect())
}

/// All canonical skew shapes with `k` boxes, connected or not.
///
/// DFS over grid cells in lexicographic order with incremental convexity
/// pruning: a missing middle box of a violation is lexicographically below
/// the newest cell, so it can never be added later and the branch is dead.
pub fn enumerate_shapes(n: usize, k: usize, budget: &Budget) -> Result<Vec<SkewShape>, ShapeError> {
    if n == 0 {
        return Err(ShapeError::ZeroDimension);
    }
    if k == 0 {
        return Ok(vec![SkewShape::empty(n)]);
    }
    // Every convex set of k boxes fits a k^n window after translation.
    let mut cells: Vec<Point> = Vec::new();
    let mut cursor = vec![0i64; n];
    loop {
        cells.push(cursor.clone());
        let mut axis = n;
        loop {
            if axis == 0 {
                break;
            }
            axis -= 1;
            if cursor[axis] + 1 < k as i64 {
                cursor[axis] += 1;
                for c in cursor.iter_mut().skip(axis + 1) {
                    *c = 0;
                }
                break;
            }
            if axis == 0 {
                axis = usize::MAX;
                break;
            }
        }
        if axis == usize::MAX {
            break;
        }
    }
    cells.sort();
    let mut out = Vec::new();
    let mut chosen: Vec<Point> = Vec::new();
    fn touches_origin(n: usize, chosen: &[Point]) -> bool {
        (0..n).all(|axis| chosen.iter().any(|p| p[axis] == 0))
    }
    fn extend_keeps_convex(chosen: &[Point], candidate: &Point) -> bool {
        let mut with: BTreeSet<Point> = chosen.iter().cloned().collect();
        with.insert(candidate.clone());
        for p in chosen {
            let lo: Point = p.iter().zip(candidate).map(|(a, b)| *a.min(b)).collect();
            let hi: Point = p.iter().zip(candidate).map(|(a, b)| *a.max(b)).collect();
            if !(le(&lo, p) && le(p, &hi)) || !(le(&lo, candidate) && le(candidate, &hi)) {
                continue;
            }
            // p and candidate comparable iff lo/hi equal one of them.
            if (lo == *p && hi == *candidate) || (lo == *candidate && hi == *p) {
                let mut z = lo.clone();
                loop {
                    if !with.contains(&z) {
                        return false;
                    }
                    let mut axis = 0;
                    loop {
                        if axis == z.len() {
                            break;
                        }
                        if z[axis] < hi[axis] {
                            z[axis] += 1;
                            break;
                        }
                        z[axis] = lo[axis];
                        axis += 1;
                    }
                    if axis == z.len() {
                        break;
                    }
                }
            }
        }
        true
    }
    fn rec(
        start: usize,
        k: usize,
        n: usize,
        cells: &[Point],
        chosen: &mut Vec<Point>,
        out: &mut Vec<SkewShape>,
        budget: &Budget,
    ) -> Result<(), ShapeError> {
        if chosen.len() == k {
            if touches_origin(n, chosen) {
                out.push(SkewShape {
                    n,
                    boxes: chosen.clone(),
                });
            }
            return Ok(());
        }
        for i in start..cells.len() {
            budget.charge(1)?;
            if extend_keeps_convex(chosen, &cells[i]) {
                chosen.push(cells[i].clone());
                rec(i + 1, k, n, cells, chosen, out, budget)?;
                chosen.pop();
            }
        }
        Ok(())
    }
    rec(0, k, n, &cells, &mut chosen, &mut out, budget)?;
    out.sort();
    Ok(out)
}

/// All order filters (up-closed box subsets) of `S`.
///
/// These are exactly the supports of submodules of the shape module. Each
/// filter is returned as a sorted box list; the output is ordered by size
/// then lexicographically.
pub fn filters_of(s: &SkewShape) -> Vec<Vec<Point>> {
    // Process boxes from top of the poset downwards so that the up-closure
    // constraint only looks at already-decided boxes.
    let mut order: Vec<usize> = (0..s.boxes.len()).collect();
    order.sort_by_key(|&i| {
        let sum: i64 = s.boxes[i].iter().sum();
        (std::cmp::Reverse(sum), s.boxes[i].clone())
    });
    // up_neighbors[i] = indices of boxes of S equal to box_i + e_axis.
    let index: BTreeMap<&[i64], usize> = s
        .boxes
        .iter()
        .enumerate()
        .map(|(i, b)| (b.as_slice(), i))
        .collect();
    let up_neighbors: Vec<Vec<usize>> = s
        .boxes
        .iter()
        .map(|b| {
            (0..s.n)
                .filter_map(|axis| {
                    let mut q = b.clone();
                    q[axis] += 1;
                    index.get(q.as_slice()).copied()
                })
                .collect()
        })
        .collect();

    let mut out = Vec::new();
    let mut chosen = vec![false; s.boxes.len()];
    fn rec(
        pos: usize,
        order: &[usize],
        up: &[Vec<usize>],
        chosen: &mut Vec<bool>,
        boxes: &[Point],
        out: &mut Vec<Vec<Point>>,
    ) {
        if pos == order.len() {
            let mut f: Vec<Point> = chosen
                .iter()
                .enumerate()
                .filter(|(_, &c)| c)
                .map(|(i, _)| boxes[i].clone())
                .collect();
            f.sort();
            out.push(f);
            return;
        }
        let i = order[pos];
        rec(pos + 1, order, up, chosen, boxes, out);
        if up[i].iter().all(|&j| chosen[j]) {
            chosen[i] = true;
            rec(pos + 1, order, up, chosen, boxes, out);
            chosen[i] = false;
        }
    }
    rec(0, &order, &up_neighbors, &mut chosen, &s.boxes, &mut out);
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Relabel the axes: coordinate `i` of the image is coordinate `sigma[i]`
/// of the source. For n = 2 the transposition is diagram transpose.
pub fn permute(s: &SkewShape, sigma: &[usize]) -> SkewShape {
    assert_eq!(sigma.len(), s.n, "permutation arity must match dimension");
    {
        let mut seen = vec![false; s.n];
        for &i in sigma {
            assert!(i < s.n && !seen[i], "sigma must be a permutation of 0..n");
            seen[i] = true;
        }
    }
    let set: BTreeSet<Point> = s
        .boxes
        .iter()
        .map(|b| sigma.iter().map(|&i| b[i]).collect())
        .collect();
    // Permuting coordinates preserves convexity and the per-axis minima.
    SkewShape {
        n: s.n,
        boxes: set.into_iter().collect(),
    }
}

/// Grid rendering shared with tableaux: one glyph cell per box.
pub(crate) fn render_grid<F>(s: &SkewShape, label: F) -> Result<String, ShapeError>
where
    F: Fn(&[i64]) -> String,
{
    if s.n != 2 {
        return Err(ShapeError::UnsupportedDimension(s.n));
    }
    if s.is_empty() {
        return Ok(String::new());
    }
    let labels: BTreeMap<&Point, String> = s.boxes.iter().map(|b| (b, label(b))).collect();
    let width = labels
        .values()
        .map(|l| l.chars().count())
        .max()
        .unwrap_or(0);
    let max_x = s.extent(0) - 1;
    let max_y = s.extent(1) - 1;
    let mut lines = Vec::new();
    for y in (0..=max_y).rev() {
        let mut line = String::new();
        for x in 0..=max_x {
            match labels.get(&vec![x, y]) {
                Some(l) => {
                    line.push('[');
                    for _ in l.chars().count()..width {
                        line.push(' ');
                    }
                    line.push_str(l);
                    line.push(']');
                }
                None => {
                    for _ in 0..width + 2 {
                        line.push(' ');
                    }
                }
            }
        }
        lines.push(line.trim_end().to_string());
    }
    Ok(lines.join("\n"))
}

/// French-notation ASCII diagram (n = 2 only): rows printed top-down,
/// y increasing upwards, one `[]` per box.
pub fn render_ascii(s: &SkewShape) -> Result<String, ShapeError> {
    render_grid(s, |_| String::new())
}

/// Parse the text literal: semicolon-separated integer tuples, e.g.
/// `(0,0);(1,0);(0,1)`. An empty string (or `∅`) is the empty shape, which
/// needs the explicit dimension `n`.
pub fn parse_shape_literal(n: usize, text: &str) -> Result<SkewShape, ShapeError> {
    let trimmed = text.trim();
    if trimmed.is_empty() || trimmed == "∅" {
        if n == 0 {
            return Err(ShapeError::ZeroDimension);
        }
        return Ok(SkewShape::empty(n));
    }
    let mut points = Vec::new();
    for part in trimmed.split(';') {
        let part = part.trim();
        let inner = part
            .strip_prefix('(')
            .and_then(|p| p.strip_suffix(')'))
            .ok_or_else(|| ShapeError::Parse(format!("expected `(a,b,...)`, got `{part}`")))?;
        let coords: Result<Point, _> = inner.split(',').map(|c| c.trim().parse::<i64>()).collect();
        let coords = coords.map_err(|e| ShapeError::Parse(format!("`{part}`: {e}")))?;
        points.push(coords);
    }
    canonicalize(n, points)
}
