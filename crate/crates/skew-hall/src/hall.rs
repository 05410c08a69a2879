//! The Hall algebra of pointed-set modules and its restrictions.
//!
//! Elements are finitely supported maps from isomorphism classes to exact
//! rationals. The product counts admissible extensions: the coefficient of
//! `δ_R` in `δ_M ⋆ δ_N` is the number of submodules `L ⊆ R` with `L ≅ N`
//! and `R/L ≅ M`. The coproduct evaluates at direct sums,
//! `Δ(f)(M, N) = f(M ⊕ N)`, which on a δ-basis splits the component
//! multiset. Restricting to type α and/or gradable modules is implemented
//! by projection (those spans are ideals and coideals), while the
//! origin-support condition restricts the basis (a subalgebra).
//!
//! In the skew category the antisymmetrized product of two connected
//! shapes is supported on connected shapes: the one disconnected term of
//! each product is the split extension, which cancels in the bracket.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::budget::{Budget, BudgetExceeded};
use crate::modules::{self, ComponentClass, ModuleClass, ModuleError, ModuleLiteral};
use crate::shapes::{self, SkewShape};

pub use crate::modules::CategorySpec;

#[derive(Debug, Error)]
pub enum HallError {
    #[error("class outside the selected category: {0}")]
    ClassOutsideCategory(String),
    #[error("expected an indecomposable (connected) class, got {0}")]
    NotIndecomposable(String),
    #[error(transparent)]
    Shape(#[from] shapes::ShapeError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
}

/// Render a rational without decimals: `p` or `p/q`.
pub fn format_rational(r: &Rational64) -> String {
    if r.denom() == &1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A finitely supported map from module classes to rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HallElement {
    n: usize,
    terms: BTreeMap<ModuleClass, Rational64>,
}

impl HallElement {
    pub fn zero(n: usize) -> Self {
        HallElement {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn delta(class: ModuleClass) -> Self {
        let mut e = HallElement::zero(class.n());
        e.add_term(class, Rational64::one());
        e
    }

    /// The unit: δ of the zero class.
    pub fn unit(n: usize) -> Self {
        HallElement::delta(ModuleClass::zero(n))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<ModuleClass, Rational64> {
        &self.terms
    }

    pub fn coefficient(&self, class: &ModuleClass) -> Rational64 {
        self.terms
            .get(class)
            .copied()
            .unwrap_or_else(Rational64::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, class: ModuleClass, coeff: Rational64) {
        if coeff.is_zero() {
            return;
        }
        let entry = self
            .terms
            .entry(class.clone())
            .or_insert_with(Rational64::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&class);
        }
    }

    pub fn scaled(&self, by: Rational64) -> HallElement {
        let mut out = HallElement::zero(self.n);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * by);
        }
        out
    }

    /// Largest term dimension (0 for the zero element).
    pub fn degree(&self) -> usize {
        self.terms.keys().map(|k| k.dim()).max().unwrap_or(0)
    }
}

impl std::ops::Add for &HallElement {
    type Output = HallElement;
    fn add(self, rhs: &HallElement) -> HallElement {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(k.clone(), *v);
        }
        out
    }
}

impl std::ops::Sub for &HallElement {
    type Output = HallElement;
    fn sub(self, rhs: &HallElement) -> HallElement {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(k.clone(), -v);
        }
        out
    }
}

impl fmt::Display for HallElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (class, coeff)) in self.terms.iter().enumerate() {
            if i == 0 {
                if coeff.is_negative() {
                    write!(f, "-")?;
                }
            } else if coeff.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = coeff.abs();
            if !mag.is_one() {
                write!(f, "{}·", format_rational(&mag))?;
            }
            write!(f, "[{class}]")?;
        }
        Ok(())
    }
}

/// An element of `H ⊗ H`, keyed by ordered pairs of classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorElement {
    n: usize,
    terms: BTreeMap<(ModuleClass, ModuleClass), Rational64>,
}

impl TensorElement {
    pub fn zero(n: usize) -> Self {
        TensorElement {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<(ModuleClass, ModuleClass), Rational64> {
        &self.terms
    }

    pub fn add_term(&mut self, key: (ModuleClass, ModuleClass), coeff: Rational64) {
        if coeff.is_zero() {
            return;
        }
        let entry = self
            .terms
            .entry(key.clone())
            .or_insert_with(Rational64::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn coefficient(&self, key: &(ModuleClass, ModuleClass)) -> Rational64 {
        self.terms
            .get(key)
            .copied()
            .unwrap_or_else(Rational64::zero)
    }

    /// Swap the tensor legs.
    pub fn flipped(&self) -> TensorElement {
        let mut out = TensorElement::zero(self.n);
        for ((a, b), v) in &self.terms {
            out.add_term((b.clone(), a.clone()), *v);
        }
        out
    }
}

impl fmt::Display for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, ((a, b), coeff)) in self.terms.iter().enumerate() {
            if i == 0 {
                if coeff.is_negative() {
                    write!(f, "-")?;
                }
            } else if coeff.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = coeff.abs();
            if !mag.is_one() {
                write!(f, "{}·", format_rational(&mag))?;
            }
            write!(f, "[{a}]⊗[{b}]")?;
        }
        Ok(())
    }
}

/// An element of the Hopf dual: a linear combination of monomials in the
/// variables `x_C`, one per indecomposable class. A monomial is the
/// multiset of its variables, which is exactly a [`ModuleClass`]; the
/// variable of a decomposable class is the product of its components'
/// variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualElement {
    n: usize,
    terms: BTreeMap<ModuleClass, Rational64>,
}

impl DualElement {
    pub fn zero(n: usize) -> Self {
        DualElement {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(class: ModuleClass) -> Self {
        let mut e = DualElement::zero(class.n());
        e.add_term(class, Rational64::one());
        e
    }

    pub fn terms(&self) -> &BTreeMap<ModuleClass, Rational64> {
        &self.terms
    }

    pub fn add_term(&mut self, class: ModuleClass, coeff: Rational64) {
        if coeff.is_zero() {
            return;
        }
        let entry = self
            .terms
            .entry(class.clone())
            .or_insert_with(Rational64::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&class);
        }
    }

    /// Polynomial multiplication: monomials multiply by taking the multiset
    /// union of their variables.
    pub fn product(&self, other: &DualElement) -> DualElement {
        let mut out = DualElement::zero(self.n);
        for (a, va) in &self.terms {
            for (b, vb) in &other.terms {
                out.add_term(a.merged(b), va * vb);
            }
        }
        out
    }
}

/// An element of `H* ⊗ H*`, keyed by ordered pairs of monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualTensorElement {
    n: usize,
    terms: BTreeMap<(ModuleClass, ModuleClass), Rational64>,
}

impl DualTensorElement {
    pub fn zero(n: usize) -> Self {
        DualTensorElement {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn terms(&self) -> &BTreeMap<(ModuleClass, ModuleClass), Rational64> {
        &self.terms
    }

    pub fn add_term(&mut self, key: (ModuleClass, ModuleClass), coeff: Rational64) {
        if coeff.is_zero() {
            return;
        }
        let entry = self
            .terms
            .entry(key.clone())
            .or_insert_with(Rational64::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn coefficient(&self, key: &(ModuleClass, ModuleClass)) -> Rational64 {
        self.terms
            .get(key)
            .copied()
            .unwrap_or_else(Rational64::zero)
    }
}

/// The Hopf pairing `⟨x_K, δ_C⟩ = [K = C]`, extended bilinearly.
pub fn pairing(dual: &DualElement, f: &HallElement) -> Rational64 {
    let mut acc = Rational64::zero();
    for (k, a) in &dual.terms {
        acc += a * f.coefficient(k);
    }
    acc
}

/// The pairing on tensor squares, leg by leg.
pub fn pairing_tensor(dual: &DualTensorElement, t: &TensorElement) -> Rational64 {
    let mut acc = Rational64::zero();
    for (k, a) in &dual.terms {
        acc += a * t.coefficient(k);
    }
    acc
}

/// Relabel the generators of every term by `sigma` (axis `i` of the image
/// reads axis `sigma[i]` of the source).
pub fn sn_act(sigma: &[usize], f: &HallElement) -> HallElement {
    let mut out = HallElement::zero(f.n());
    for (class, coeff) in f.terms() {
        out.add_term(permute_class(sigma, class), *coeff);
    }
    out
}

/// The induced permutation action on classes.
pub fn permute_class(sigma: &[usize], class: &ModuleClass) -> ModuleClass {
    let comps = class
        .components()
        .iter()
        .map(|c| match c {
            ComponentClass::Shape(s) => ComponentClass::Shape(shapes::permute(s, sigma)),
            ComponentClass::Table(t) => {
                let permuted = modules::permute_generators(&t.to_module(), sigma);
                // Stays indecomposable; reclassify to keep the key canonical.
                let class = modules::canonical_class(&permuted);
                class.components()[0].clone()
            }
        })
        .collect();
    ModuleClass::from_components(class.n(), comps)
}

/// One verified bialgebra identity.
#[derive(Debug, Clone)]
pub struct AxiomCheck {
    pub name: &'static str,
    pub passed: bool,
    pub witness: Option<String>,
}

/// Outcome of [`HallAlgebra::verify_axioms`].
#[derive(Debug, Clone)]
pub struct AxiomReport {
    pub category: CategorySpec,
    pub degree_bound: usize,
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for check in &self.checks {
            if check.passed {
                writeln!(f, "PASS {}", check.name)?;
            } else {
                writeln!(
                    f,
                    "FAIL {}: {}",
                    check.name,
                    check.witness.as_deref().unwrap_or("no witness recorded")
                )?;
            }
        }
        Ok(())
    }
}

/// Extension tally of one class `R`: for every submodule `L` of a fixed
/// representative, the pair `(class(R/L), class(L))` is counted once.
type Tally = BTreeMap<(ModuleClass, ModuleClass), i64>;

/// Per-submodule `(submodule components, quotient components)` of one
/// indecomposable component.
type ComponentPairs = Vec<(Vec<ComponentClass>, Vec<ComponentClass>)>;

/// The Hall algebra over a selected subcategory, with memoized class lists
/// and structure-constant tables. All caches behave as atomic maps, so a
/// `HallAlgebra` can be shared across threads.
///
/// ```
/// use skew_hall::hall::HallAlgebra;
/// use skew_hall::modules::{CategorySpec, ModuleClass};
/// use skew_hall::shapes::SkewShape;
///
/// let alg = HallAlgebra::new(CategorySpec::skew(1));
/// let l1 = ModuleClass::of_shape(&SkewShape::interval(1));
/// let l2 = ModuleClass::of_shape(&SkewShape::interval(2));
/// // One connected extension (the 3-ladder) and the split class.
/// assert_eq!(alg.delta_product(&l1, &l2).unwrap().terms().len(), 2);
/// ```
pub struct HallAlgebra {
    cat: CategorySpec,
    budget: Budget,
    shape_lists: Mutex<BTreeMap<usize, Arc<Vec<SkewShape>>>>,
    class_lists: Mutex<BTreeMap<usize, Arc<Vec<ModuleClass>>>>,
    tallies: Mutex<BTreeMap<ModuleClass, Arc<Tally>>>,
}

impl HallAlgebra {
    pub fn new(cat: CategorySpec) -> Self {
        HallAlgebra::with_budget(cat, Budget::default())
    }

    pub fn with_budget(cat: CategorySpec, budget: Budget) -> Self {
        HallAlgebra {
            cat,
            budget,
            shape_lists: Mutex::new(BTreeMap::new()),
            class_lists: Mutex::new(BTreeMap::new()),
            tallies: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn category(&self) -> &CategorySpec {
        &self.cat
    }

    pub fn budget(&self) -> &Budget {
        &self.budget
    }

    fn require_in_category(&self, class: &ModuleClass) -> Result<(), HallError> {
        if !self.cat.class_in_category(class) {
            return Err(HallError::ClassOutsideCategory(class.to_string()));
        }
        Ok(())
    }

    fn connected_shapes(&self, size: usize) -> Result<Arc<Vec<SkewShape>>, HallError> {
        if let Some(hit) = self.shape_lists.lock().unwrap().get(&size) {
            return Ok(hit.clone());
        }
        let list = Arc::new(shapes::enumerate_connected_shapes(
            self.cat.n,
            size,
            &self.budget,
        )?);
        self.shape_lists.lock().unwrap().insert(size, list.clone());
        Ok(list)
    }

    /// All classes of total dimension `d` inside the category, sorted.
    /// In the skew category these are multisets of connected shapes; in
    /// general they come from exhaustive module enumeration.
    pub fn classes_of_dim(&self, d: usize) -> Result<Arc<Vec<ModuleClass>>, HallError> {
        if let Some(hit) = self.class_lists.lock().unwrap().get(&d) {
            return Ok(hit.clone());
        }
        let list = if self.cat.is_skew() {
            let mut items: Vec<ComponentClass> = Vec::new();
            for size in 1..=d {
                for s in self.connected_shapes(size)?.iter() {
                    items.push(ComponentClass::Shape(s.clone()));
                }
            }
            let mut out = Vec::new();
            let mut current: Vec<ComponentClass> = Vec::new();
            fn rec(
                start: usize,
                remaining: usize,
                items: &[ComponentClass],
                current: &mut Vec<ComponentClass>,
                n: usize,
                out: &mut Vec<ModuleClass>,
            ) {
                if remaining == 0 {
                    out.push(ModuleClass::from_components(n, current.clone()));
                    return;
                }
                for (j, item) in items.iter().enumerate().skip(start) {
                    if item.dim() <= remaining {
                        current.push(item.clone());
                        rec(j, remaining - item.dim(), items, current, n, out);
                        current.pop();
                    }
                }
            }
            rec(0, d, &items, &mut current, self.cat.n, &mut out);
            out.sort();
            out
        } else {
            modules::enumerate_modules(d, &self.cat, false, &self.budget)?
                .into_iter()
                .collect()
        };
        let list = Arc::new(list);
        self.class_lists.lock().unwrap().insert(d, list.clone());
        Ok(list)
    }

    /// Submodule/quotient class pairs of one indecomposable component, one
    /// entry per submodule.
    fn component_pairs(&self, comp: &ComponentClass) -> Result<ComponentPairs, HallError> {
        match comp {
            ComponentClass::Shape(s) => Ok(shapes::filters_of(s)
                .into_iter()
                .map(|filter| {
                    let filter_set: BTreeSet<&[i64]> =
                        filter.iter().map(|b| b.as_slice()).collect();
                    let rest: Vec<shapes::Point> = s
                        .boxes()
                        .iter()
                        .filter(|b| !filter_set.contains(b.as_slice()))
                        .cloned()
                        .collect();
                    let sub = shapes::split_canonical_components(s.n(), &filter)
                        .into_iter()
                        .map(ComponentClass::Shape)
                        .collect();
                    let quot = shapes::split_canonical_components(s.n(), &rest)
                        .into_iter()
                        .map(ComponentClass::Shape)
                        .collect();
                    (sub, quot)
                })
                .collect()),
            ComponentClass::Table(t) => {
                let rep = t.to_module();
                let mut out = Vec::new();
                for sub in modules::submodules(&rep, &self.budget)? {
                    let sub_mod = modules::induced_submodule(&rep, &sub[1..]);
                    let quot_mod = modules::quotient(&rep, &sub)?;
                    out.push((
                        modules::canonical_class(&sub_mod).components().to_vec(),
                        modules::canonical_class(&quot_mod).components().to_vec(),
                    ));
                }
                Ok(out)
            }
        }
    }

    /// The extension tally of `R`: submodules of a representative are swept
    /// componentwise (a submodule of a direct sum splits along the summands)
    /// and grouped by `(quotient class, submodule class)`.
    pub fn extension_tally(&self, r: &ModuleClass) -> Result<Arc<Tally>, HallError> {
        if let Some(hit) = self.tallies.lock().unwrap().get(r) {
            return Ok(hit.clone());
        }
        let mut acc: BTreeMap<(Vec<ComponentClass>, Vec<ComponentClass>), i64> = BTreeMap::new();
        acc.insert((Vec::new(), Vec::new()), 1);
        for comp in r.components() {
            let pairs = self.component_pairs(comp)?;
            let mut next: BTreeMap<(Vec<ComponentClass>, Vec<ComponentClass>), i64> =
                BTreeMap::new();
            for ((sub_acc, quot_acc), count) in &acc {
                for (sub, quot) in &pairs {
                    self.budget.charge(1)?;
                    let mut s = sub_acc.clone();
                    s.extend(sub.iter().cloned());
                    s.sort();
                    let mut q = quot_acc.clone();
                    q.extend(quot.iter().cloned());
                    q.sort();
                    *next.entry((s, q)).or_insert(0) += count;
                }
            }
            acc = next;
        }
        let mut tally: Tally = BTreeMap::new();
        for ((sub, quot), count) in acc {
            let key = (
                ModuleClass::from_components(r.n(), quot),
                ModuleClass::from_components(r.n(), sub),
            );
            *tally.entry(key).or_insert(0) += count;
        }
        let tally = Arc::new(tally);
        self.tallies
            .lock()
            .unwrap()
            .insert(r.clone(), tally.clone());
        Ok(tally)
    }

    /// `P^R_{M,N}`: the number of submodules `L` of a representative of `R`
    /// with `L ≅ N` and `R/L ≅ M`.
    pub fn structure_constant(
        &self,
        r: &ModuleClass,
        m: &ModuleClass,
        n: &ModuleClass,
    ) -> Result<i64, HallError> {
        self.require_in_category(r)?;
        self.require_in_category(m)?;
        self.require_in_category(n)?;
        let tally = self.extension_tally(r)?;
        Ok(tally.get(&(m.clone(), n.clone())).copied().unwrap_or(0))
    }

    /// All classes `R` admitting an extension `0 → N → R → M → 0`, with
    /// multiplicities.
    ///
    /// For connected skew classes the candidates come from stacking: place a
    /// translate of `N`'s shape against `M`'s with per-axis offsets bounded
    /// by `span(M) + span(N) + 1`, keep disjoint convex unions, and count
    /// exactly per candidate. Larger offsets can only produce the split
    /// class, which the window already contains (projections of connected
    /// sets are intervals, so a connected union forces overlapping axis
    /// projections). Otherwise all classes of the right dimension are swept.
    pub fn extensions(
        &self,
        m: &ModuleClass,
        n: &ModuleClass,
    ) -> Result<BTreeMap<ModuleClass, i64>, HallError> {
        self.require_in_category(m)?;
        self.require_in_category(n)?;
        // Trivial flags: 0 → N → N and 0 → R → M admit only R = N resp. M.
        if m.is_zero() {
            return Ok(BTreeMap::from([(n.clone(), 1)]));
        }
        if n.is_zero() {
            return Ok(BTreeMap::from([(m.clone(), 1)]));
        }
        let d = m.dim() + n.dim();
        let mut out = BTreeMap::new();
        let candidates: Vec<ModuleClass> = if self.cat.is_skew()
            && m.is_skew()
            && n.is_skew()
            && m.components().len() == 1
            && n.components().len() == 1
        {
            let (s, t) = match (&m.components()[0], &n.components()[0]) {
                (ComponentClass::Shape(s), ComponentClass::Shape(t)) => (s, t),
                _ => unreachable!("skew classes have shape components"),
            };
            self.stack_candidates(s, t)?
        } else {
            self.classes_of_dim(d)?.iter().cloned().collect()
        };
        for r in candidates {
            let count = self
                .extension_tally(&r)?
                .get(&(m.clone(), n.clone()))
                .copied()
                .unwrap_or(0);
            if count > 0 {
                out.insert(r, count);
            }
        }
        Ok(out)
    }

    /// Candidate extension classes of two connected shapes: every connected
    /// stacking found in the offset window, plus the split class `{S, T}`.
    /// A disconnected extension of connected classes must be the split one
    /// (a submodule isomorphic to a connected module lies in a single
    /// summand), and the split module needs no convex embedding at all, so
    /// it is added directly rather than through a placement.
    fn stack_candidates(
        &self,
        s: &SkewShape,
        t: &SkewShape,
    ) -> Result<Vec<ModuleClass>, HallError> {
        let n = self.cat.n;
        let split: Vec<ComponentClass> = shapes::components(s)
            .into_iter()
            .chain(shapes::components(t))
            .map(ComponentClass::Shape)
            .collect();
        let mut found: BTreeSet<ModuleClass> = BTreeSet::new();
        found.insert(ModuleClass::from_components(n, split));
        if s.is_empty() || t.is_empty() {
            return Ok(found.into_iter().collect());
        }
        let bounds: Vec<i64> = (0..n)
            .map(|axis| (s.extent(axis) - 1) + (t.extent(axis) - 1) + 1)
            .collect();
        let mut offset: Vec<i64> = bounds.iter().map(|b| -b).collect();
        loop {
            self.budget.charge(1)?;
            let translated = t.translated(&offset);
            let mut union: BTreeSet<shapes::Point> = s.boxes().iter().cloned().collect();
            let mut disjoint = true;
            for b in &translated {
                if !union.insert(b.clone()) {
                    disjoint = false;
                    break;
                }
            }
            if disjoint {
                let points: Vec<shapes::Point> = union.into_iter().collect();
                if shapes::is_convex(&points) {
                    let comps = shapes::split_canonical_components(n, &points);
                    if comps.len() == 1 {
                        found.insert(ModuleClass::from_components(
                            n,
                            comps.into_iter().map(ComponentClass::Shape).collect(),
                        ));
                    }
                }
            }
            // Odometer step over the offset window.
            let mut axis = 0;
            loop {
                if axis == n {
                    break;
                }
                if offset[axis] < bounds[axis] {
                    offset[axis] += 1;
                    break;
                }
                offset[axis] = -bounds[axis];
                axis += 1;
            }
            if axis == n {
                break;
            }
        }
        Ok(found.into_iter().collect())
    }

    /// The product of delta elements, `δ_M ⋆ δ_N = Σ_R P^R_{M,N} δ_R`.
    pub fn delta_product(
        &self,
        m: &ModuleClass,
        n: &ModuleClass,
    ) -> Result<HallElement, HallError> {
        let mut out = HallElement::zero(self.cat.n);
        for (r, count) in self.extensions(m, n)? {
            out.add_term(r, Rational64::from_integer(count));
        }
        Ok(out)
    }

    /// Bilinear extension of the delta product; the unit is `δ` of the zero
    /// class.
    pub fn product(&self, f: &HallElement, g: &HallElement) -> Result<HallElement, HallError> {
        let mut out = HallElement::zero(self.cat.n);
        for (a, ca) in f.terms() {
            for (b, cb) in g.terms() {
                let prod = self.delta_product(a, b)?;
                for (r, count) in prod.terms() {
                    out.add_term(r.clone(), ca * cb * count);
                }
            }
        }
        Ok(out)
    }

    /// `Δ(f)(M, N) = f(M ⊕ N)`: on a delta basis, all ordered two-part
    /// splits of the component multiset, each with coefficient 1.
    pub fn coproduct(&self, f: &HallElement) -> TensorElement {
        let mut out = TensorElement::zero(self.cat.n);
        for (class, coeff) in f.terms() {
            for (left, right) in split_class(class) {
                out.add_term((left, right), *coeff);
            }
        }
        out
    }

    /// Counit: the coefficient of the zero class.
    pub fn counit(&self, f: &HallElement) -> Rational64 {
        f.coefficient(&ModuleClass::zero(self.cat.n))
    }

    /// The Lie bracket `[δ_S, δ_T] = δ_S ⋆ δ_T − δ_T ⋆ δ_S` of two
    /// indecomposable classes. The split terms cancel, so the result is
    /// supported on connected classes.
    pub fn bracket(&self, s: &ModuleClass, t: &ModuleClass) -> Result<HallElement, HallError> {
        if !s.is_indecomposable() {
            return Err(HallError::NotIndecomposable(s.to_string()));
        }
        if !t.is_indecomposable() {
            return Err(HallError::NotIndecomposable(t.to_string()));
        }
        let st = self.delta_product(s, t)?;
        let ts = self.delta_product(t, s)?;
        Ok(&st - &ts)
    }

    /// Antipode by the standard recursion on the reduced coproduct of a
    /// graded connected bialgebra: `S(δ_0) = δ_0` and
    /// `S(x) = −x − Σ S(x′) ⋆ x″` over proper splits.
    pub fn antipode(&self, f: &HallElement) -> Result<HallElement, HallError> {
        let mut memo: BTreeMap<ModuleClass, HallElement> = BTreeMap::new();
        let mut out = HallElement::zero(self.cat.n);
        for (class, coeff) in f.terms() {
            let s = self.antipode_delta(class, &mut memo)?;
            for (k, v) in s.terms() {
                out.add_term(k.clone(), coeff * v);
            }
        }
        Ok(out)
    }

    fn antipode_delta(
        &self,
        class: &ModuleClass,
        memo: &mut BTreeMap<ModuleClass, HallElement>,
    ) -> Result<HallElement, HallError> {
        if class.is_zero() {
            return Ok(HallElement::unit(self.cat.n));
        }
        if let Some(hit) = memo.get(class) {
            return Ok(hit.clone());
        }
        let mut acc = HallElement::delta(class.clone()).scaled(-Rational64::one());
        for (left, right) in split_class(class) {
            if left.is_zero() || right.is_zero() {
                continue;
            }
            let s_left = self.antipode_delta(&left, memo)?;
            let prod = self.product(&s_left, &HallElement::delta(right))?;
            for (k, v) in prod.terms() {
                acc.add_term(k.clone(), -v);
            }
        }
        memo.insert(class.clone(), acc.clone());
        Ok(acc)
    }

    /// Coproduct in the dual: `Δ(x_M) = Σ_{N ⊆ M} x_{M/N} ⊗ x_N` over the
    /// submodules of a representative of the indecomposable class `M`.
    pub fn dual_coproduct(&self, m: &ModuleClass) -> Result<DualTensorElement, HallError> {
        if !m.is_indecomposable() && !m.is_zero() {
            return Err(HallError::NotIndecomposable(m.to_string()));
        }
        self.require_in_category(m)?;
        let mut out = DualTensorElement::zero(self.cat.n);
        if m.is_zero() {
            out.add_term(
                (ModuleClass::zero(self.cat.n), ModuleClass::zero(self.cat.n)),
                Rational64::one(),
            );
            return Ok(out);
        }
        for (sub, quot) in self.component_pairs(&m.components()[0])? {
            out.add_term(
                (
                    ModuleClass::from_components(self.cat.n, quot),
                    ModuleClass::from_components(self.cat.n, sub),
                ),
                Rational64::one(),
            );
        }
        Ok(out)
    }

    /// Check the graded bialgebra axioms on every class of total dimension
    /// at most `degree_bound`.
    pub fn verify_axioms(&self, degree_bound: usize) -> Result<AxiomReport, HallError> {
        let mut checks = Vec::new();
        let mut classes_by_dim: Vec<Vec<ModuleClass>> = Vec::new();
        for d in 0..=degree_bound {
            classes_by_dim.push(self.classes_of_dim(d)?.iter().cloned().collect());
        }
        let all: Vec<ModuleClass> = classes_by_dim.iter().flatten().cloned().collect();

        // Grading: every product term lives in the sum of the dimensions.
        let mut grading = AxiomCheck {
            name: "grading additivity",
            passed: true,
            witness: None,
        };
        'grading: for a in &all {
            for b in &all {
                if a.dim() + b.dim() > degree_bound {
                    continue;
                }
                let prod = self.delta_product(a, b)?;
                for r in prod.terms().keys() {
                    if r.dim() != a.dim() + b.dim() {
                        grading.passed = false;
                        grading.witness = Some(format!("δ[{a}] ⋆ δ[{b}] contains [{r}]"));
                        break 'grading;
                    }
                }
            }
        }
        checks.push(grading);

        // Unit element.
        let mut unit = AxiomCheck {
            name: "unit",
            passed: true,
            witness: None,
        };
        let one = HallElement::unit(self.cat.n);
        for a in &all {
            let f = HallElement::delta(a.clone());
            if self.product(&one, &f)? != f || self.product(&f, &one)? != f {
                unit.passed = false;
                unit.witness = Some(format!("δ_0 does not fix δ[{a}]"));
                break;
            }
        }
        checks.push(unit);

        // Associativity on all class triples within the bound.
        let mut assoc = AxiomCheck {
            name: "associativity",
            passed: true,
            witness: None,
        };
        'assoc: for a in &all {
            for b in &all {
                if a.dim() + b.dim() > degree_bound {
                    continue;
                }
                for c in &all {
                    if a.dim() + b.dim() + c.dim() > degree_bound {
                        continue;
                    }
                    let ab = self.delta_product(a, b)?;
                    let left = self.product(&ab, &HallElement::delta(c.clone()))?;
                    let bc = self.delta_product(b, c)?;
                    let right = self.product(&HallElement::delta(a.clone()), &bc)?;
                    if left != right {
                        assoc.passed = false;
                        assoc.witness = Some(format!("([{a}] ⋆ [{b}]) ⋆ [{c}]"));
                        break 'assoc;
                    }
                }
            }
        }
        checks.push(assoc);

        // Coassociativity and cocommutativity on every class.
        let mut coassoc = AxiomCheck {
            name: "coassociativity",
            passed: true,
            witness: None,
        };
        let mut cocomm = AxiomCheck {
            name: "cocommutativity",
            passed: true,
            witness: None,
        };
        for r in &all {
            let delta = self.coproduct(&HallElement::delta(r.clone()));
            if cocomm.passed && delta.flipped() != delta {
                cocomm.passed = false;
                cocomm.witness = Some(format!("Δδ[{r}] is not symmetric"));
            }
            // (Δ ⊗ id)Δ vs (id ⊗ Δ)Δ as maps into triples.
            let mut left: BTreeMap<(ModuleClass, ModuleClass, ModuleClass), Rational64> =
                BTreeMap::new();
            let mut right = left.clone();
            for ((a, b), v) in delta.terms() {
                for (a1, a2) in split_class(a) {
                    *left
                        .entry((a1, a2, b.clone()))
                        .or_insert_with(Rational64::zero) += v;
                }
                for (b1, b2) in split_class(b) {
                    *right
                        .entry((a.clone(), b1, b2))
                        .or_insert_with(Rational64::zero) += v;
                }
            }
            left.retain(|_, v| !v.is_zero());
            right.retain(|_, v| !v.is_zero());
            if coassoc.passed && left != right {
                coassoc.passed = false;
                coassoc.witness = Some(format!("on δ[{r}]"));
            }
        }
        checks.push(coassoc);
        checks.push(cocomm);

        // Counit axiom.
        let mut counit = AxiomCheck {
            name: "counit",
            passed: true,
            witness: None,
        };
        for r in &all {
            let delta = self.coproduct(&HallElement::delta(r.clone()));
            let mut left = HallElement::zero(self.cat.n);
            let mut right = HallElement::zero(self.cat.n);
            for ((a, b), v) in delta.terms() {
                if a.is_zero() {
                    left.add_term(b.clone(), *v);
                }
                if b.is_zero() {
                    right.add_term(a.clone(), *v);
                }
            }
            let f = HallElement::delta(r.clone());
            if left != f || right != f {
                counit.passed = false;
                counit.witness = Some(format!("on δ[{r}]"));
                break;
            }
        }
        checks.push(counit);

        // Bialgebra compatibility: Δ(f ⋆ g) = Δ(f) ⋆ Δ(g).
        let mut compat = AxiomCheck {
            name: "bialgebra compatibility",
            passed: true,
            witness: None,
        };
        'compat: for a in &all {
            for b in &all {
                if a.dim() + b.dim() > degree_bound {
                    continue;
                }
                let prod = self.delta_product(a, b)?;
                let lhs = self.coproduct(&prod);
                let da = self.coproduct(&HallElement::delta(a.clone()));
                let db = self.coproduct(&HallElement::delta(b.clone()));
                let mut rhs = TensorElement::zero(self.cat.n);
                for ((a1, a2), va) in da.terms() {
                    for ((b1, b2), vb) in db.terms() {
                        let first = self.delta_product(a1, b1)?;
                        let second = self.delta_product(a2, b2)?;
                        for (r1, c1) in first.terms() {
                            for (r2, c2) in second.terms() {
                                rhs.add_term((r1.clone(), r2.clone()), va * vb * c1 * c2);
                            }
                        }
                    }
                }
                if lhs != rhs {
                    compat.passed = false;
                    compat.witness = Some(format!("Δ(δ[{a}] ⋆ δ[{b}])"));
                    break 'compat;
                }
            }
        }
        checks.push(compat);

        Ok(AxiomReport {
            category: self.cat,
            degree_bound,
            checks,
        })
    }
}

/// All ordered pairs of complementary sub-multisets of the component
/// multiset, each exactly once (coefficients of the coproduct are 0 or 1).
pub fn split_class(class: &ModuleClass) -> Vec<(ModuleClass, ModuleClass)> {
    // Group equal components with multiplicities.
    let mut groups: Vec<(&ComponentClass, usize)> = Vec::new();
    for c in class.components() {
        match groups.last_mut() {
            Some((g, count)) if *g == c => *count += 1,
            _ => groups.push((c, 1)),
        }
    }
    let mut out = Vec::new();
    let mut take = vec![0usize; groups.len()];
    loop {
        let mut left = Vec::new();
        let mut right = Vec::new();
        for (i, (comp, mult)) in groups.iter().enumerate() {
            for _ in 0..take[i] {
                left.push((*comp).clone());
            }
            for _ in take[i]..*mult {
                right.push((*comp).clone());
            }
        }
        out.push((
            ModuleClass::from_components(class.n(), left),
            ModuleClass::from_components(class.n(), right),
        ));
        let mut i = 0;
        loop {
            if i == groups.len() {
                break;
            }
            if take[i] < groups[i].1 {
                take[i] += 1;
                break;
            }
            take[i] = 0;
            i += 1;
        }
        if i == groups.len() {
            break;
        }
    }
    out
}

/// Wire form of one Hall element term: exact rational as a decimal-free
/// string, class as a list of components (a shape is an array of boxes, a
/// generic module its action literal).
#[derive(Debug, Clone, Serialize)]
pub struct TermWire {
    pub coeff: String,
    pub class: Vec<ComponentWire>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum ComponentWire {
    Shape(Vec<Vec<i64>>),
    Module(ModuleLiteral),
}

pub fn class_wire(class: &ModuleClass) -> Vec<ComponentWire> {
    class
        .components()
        .iter()
        .map(|c| match c {
            ComponentClass::Shape(s) => {
                ComponentWire::Shape(s.boxes().iter().map(|b| b.to_vec()).collect())
            }
            ComponentClass::Table(t) => ComponentWire::Module(ModuleLiteral::from(&t.to_module())),
        })
        .collect()
}

pub fn element_wire(f: &HallElement) -> Vec<TermWire> {
    f.terms()
        .iter()
        .map(|(class, coeff)| TermWire {
            coeff: format_rational(coeff),
            class: class_wire(class),
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct TensorTermWire {
    pub coeff: String,
    pub class_left: Vec<ComponentWire>,
    pub class_right: Vec<ComponentWire>,
}

pub fn tensor_wire(t: &TensorElement) -> Vec<TensorTermWire> {
    t.terms()
        .iter()
        .map(|((a, b), coeff)| TensorTermWire {
            coeff: format_rational(coeff),
            class_left: class_wire(a),
            class_right: class_wire(b),
        })
        .collect()
}

pub fn dual_tensor_wire(t: &DualTensorElement) -> Vec<TensorTermWire> {
    t.terms()
        .iter()
        .map(|((a, b), coeff)| TensorTermWire {
            coeff: format_rational(coeff),
            class_left: class_wire(a),
            class_right: class_wire(b),
        })
        .collect()
}
