//! Property suites for the structural invariants: canonical forms, filter
//! lattices, isomorphism keys, and the split-class behavior of products.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use num_rational::Rational64;
use proptest::prelude::*;

use skew_hall::budget::Budget;
use skew_hall::hall::{HallAlgebra, HallElement};
use skew_hall::modules::{
    self, canonical_class, direct_sum, isomorphic, module_from_shape, smash_product,
    tensor_product, CategorySpec, ModuleClass, PointedModule,
};
use skew_hall::shapes::{self, SkewShape};

fn pool2() -> &'static Vec<SkewShape> {
    static POOL: OnceLock<Vec<SkewShape>> = OnceLock::new();
    POOL.get_or_init(|| {
        let b = Budget::default();
        (1..=5usize)
            .flat_map(|k| shapes::enumerate_connected_shapes(2, k, &b).unwrap())
            .collect()
    })
}

fn pool3() -> &'static Vec<SkewShape> {
    static POOL: OnceLock<Vec<SkewShape>> = OnceLock::new();
    POOL.get_or_init(|| {
        let b = Budget::default();
        (1..=4usize)
            .flat_map(|k| shapes::enumerate_connected_shapes(3, k, &b).unwrap())
            .collect()
    })
}

fn arb_shape2() -> impl Strategy<Value = SkewShape> {
    (0..pool2().len()).prop_map(|i| pool2()[i].clone())
}

fn shapes_of_size(k: usize) -> &'static [SkewShape] {
    static BY_SIZE: OnceLock<Vec<Vec<SkewShape>>> = OnceLock::new();
    let by_size = BY_SIZE.get_or_init(|| {
        let b = Budget::default();
        (0..=5usize)
            .map(|k| shapes::enumerate_connected_shapes(2, k, &b).unwrap())
            .collect()
    });
    &by_size[k]
}

/// Three connected shapes whose total box count stays within 7.
fn arb_small_triple() -> impl Strategy<Value = (SkewShape, SkewShape, SkewShape)> {
    (1usize..=5)
        .prop_flat_map(|ka| (Just(ka), 1usize..=(6 - ka).min(5)))
        .prop_flat_map(|(ka, kb)| (Just(ka), Just(kb), 1usize..=(7 - ka - kb).min(5)))
        .prop_flat_map(|(ka, kb, kc)| {
            (
                (0..shapes_of_size(ka).len()).prop_map(move |i| shapes_of_size(ka)[i].clone()),
                (0..shapes_of_size(kb).len()).prop_map(move |i| shapes_of_size(kb)[i].clone()),
                (0..shapes_of_size(kc).len()).prop_map(move |i| shapes_of_size(kc)[i].clone()),
            )
        })
}

fn arb_shape3() -> impl Strategy<Value = SkewShape> {
    (0..pool3().len()).prop_map(|i| pool3()[i].clone())
}

fn arb_perm3() -> impl Strategy<Value = Vec<usize>> {
    Just(vec![0usize, 1, 2]).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonicalize_is_idempotent_up_to_translation(
        s in arb_shape2(),
        dx in -5i64..=5,
        dy in -5i64..=5,
    ) {
        let translated = s.translated(&[dx, dy]);
        let re = shapes::canonicalize(2, translated).unwrap();
        prop_assert_eq!(&re, &s);
        let twice = shapes::canonicalize(2, re.boxes().to_vec()).unwrap();
        prop_assert_eq!(twice, s);
    }

    #[test]
    fn permutations_invert(s in arb_shape3(), sigma in arb_perm3()) {
        let mut inverse = vec![0usize; 3];
        for (i, &v) in sigma.iter().enumerate() {
            inverse[v] = i;
        }
        let there = shapes::permute(&s, &sigma);
        prop_assert_eq!(shapes::permute(&there, &inverse), s);
    }

    #[test]
    fn components_partition_the_boxes(a in arb_shape2(), b in arb_shape2()) {
        // Build a possibly-disconnected convex union by stacking far apart
        // along the antidiagonal.
        let offset = [a.extent(0), -(b.extent(1))];
        let mut points: Vec<_> = a.boxes().to_vec();
        points.extend(b.translated(&offset));
        let union = shapes::canonicalize(2, points).unwrap();
        let comps = shapes::components(&union);
        prop_assert_eq!(comps.iter().map(|c| c.len()).sum::<usize>(), union.len());
        for c in &comps {
            prop_assert!(c.is_connected());
            prop_assert!(shapes::is_convex(c.boxes()));
        }
    }

    #[test]
    fn filters_form_a_lattice(s in arb_shape2()) {
        let filters: BTreeSet<Vec<Vec<i64>>> =
            shapes::filters_of(&s).into_iter().collect();
        for a in &filters {
            for b in &filters {
                let sa: BTreeSet<_> = a.iter().cloned().collect();
                let sb: BTreeSet<_> = b.iter().cloned().collect();
                let union: Vec<Vec<i64>> = sa.union(&sb).cloned().collect();
                let inter: Vec<Vec<i64>> = sa.intersection(&sb).cloned().collect();
                prop_assert!(filters.contains(&union));
                prop_assert!(filters.contains(&inter));
            }
        }
    }

    #[test]
    fn isomorphism_agrees_with_canonical_class(
        s in arb_shape2(),
        t in arb_shape2(),
        relabel in proptest::collection::vec(0usize..1000, 8),
    ) {
        let (ms, _) = module_from_shape(&s);
        let (mt, _) = module_from_shape(&t);
        prop_assert_eq!(isomorphic(&ms, &mt), s == t);
        prop_assert_eq!(
            canonical_class(&ms) == canonical_class(&mt),
            s == t
        );
        // A relabeled copy stays isomorphic with the same class key.
        let d = ms.dim();
        let mut perm: Vec<usize> = (1..=d).collect();
        for (i, r) in relabel.iter().take(d).enumerate() {
            perm.swap(i, r % d);
        }
        let mut full = vec![0usize; d + 1];
        for (i, &p) in perm.iter().enumerate() {
            full[i + 1] = p;
        }
        let relabeled = {
            let mut action = vec![vec![0usize; d + 1]; 2];
            for (g, row) in action.iter_mut().enumerate() {
                for e in 1..=d {
                    row[full[e]] = full[ms.act(g, e)];
                }
            }
            PointedModule::new(2, d, action).unwrap()
        };
        prop_assert!(isomorphic(&ms, &relabeled));
        prop_assert_eq!(canonical_class(&ms), canonical_class(&relabeled));
    }

    #[test]
    fn product_grading_and_split_class(s in arb_shape2(), t in arb_shape2()) {
        let alg = HallAlgebra::new(CategorySpec::skew(2));
        let cs = ModuleClass::of_shape(&s);
        let ct = ModuleClass::of_shape(&t);
        let prod = alg.delta_product(&cs, &ct).unwrap();
        let split = ModuleClass::from_components(
            2,
            cs.components().iter().chain(ct.components()).cloned().collect(),
        );
        let mut disconnected = Vec::new();
        for (r, v) in prod.terms() {
            prop_assert_eq!(r.dim(), s.len() + t.len());
            if !r.is_indecomposable() {
                disconnected.push((r.clone(), *v));
            }
        }
        // Exactly one disconnected class: the split extension, with
        // coefficient 1 for distinct shapes and 2 for equal ones (the two
        // complementary submodule choices).
        let expected = Rational64::from_integer(if s == t { 2 } else { 1 });
        prop_assert_eq!(disconnected.len(), 1);
        prop_assert_eq!(disconnected[0].0.clone(), split);
        prop_assert_eq!(disconnected[0].1, expected);
    }

    #[test]
    fn smash_and_tensor_distribute(
        a in (0..3usize).prop_map(|i| pool2()[i].clone()),
        b in (0..3usize).prop_map(|i| pool2()[i].clone()),
        c in (0..3usize).prop_map(|i| pool2()[i].clone()),
    ) {
        let (ma, _) = module_from_shape(&a);
        let (mb, _) = module_from_shape(&b);
        let (mc, _) = module_from_shape(&c);
        let bc = direct_sum(&mb, &mc).unwrap();
        let lhs = smash_product(&ma, &bc).unwrap();
        let rhs = direct_sum(
            &smash_product(&ma, &mb).unwrap(),
            &smash_product(&ma, &mc).unwrap(),
        ).unwrap();
        prop_assert!(isomorphic(&lhs, &rhs));
        let lhs = tensor_product(&ma, &bc).unwrap();
        let rhs = direct_sum(
            &tensor_product(&ma, &mb).unwrap(),
            &tensor_product(&ma, &mc).unwrap(),
        ).unwrap();
        prop_assert!(isomorphic(&lhs, &rhs));
    }

    #[test]
    fn generic_module_classes_survive_relabeling(
        raw in proptest::collection::vec(0usize..=6, 6),
        swaps in proptest::collection::vec((0usize..6, 0usize..6), 4),
    ) {
        // An arbitrary single-generator action table (trees, cycles, or
        // worse) exercises the canonical-table route of the class key.
        let d = raw.len();
        let mut row = vec![0usize];
        row.extend(raw.iter().map(|&v| v.min(d)));
        let m = PointedModule::new(1, d, vec![row]).unwrap();
        let mut perm: Vec<usize> = (0..=d).collect();
        for (i, j) in swaps {
            perm.swap(i + 1, j + 1);
        }
        let mut action = vec![vec![0usize; d + 1]];
        for e in 1..=d {
            action[0][perm[e]] = perm[m.act(0, e)];
        }
        let relabeled = PointedModule::new(1, d, action).unwrap();
        prop_assert!(isomorphic(&m, &relabeled));
        prop_assert_eq!(canonical_class(&m), canonical_class(&relabeled));
    }

    #[test]
    fn product_is_associative_on_connected_triples((a, b, c) in arb_small_triple()) {
        let alg = HallAlgebra::new(CategorySpec::skew(2));
        let (da, db, dc) = (
            HallElement::delta(ModuleClass::of_shape(&a)),
            HallElement::delta(ModuleClass::of_shape(&b)),
            HallElement::delta(ModuleClass::of_shape(&c)),
        );
        let left = alg.product(&alg.product(&da, &db).unwrap(), &dc).unwrap();
        let right = alg.product(&da, &alg.product(&db, &dc).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn coproduct_is_cocommutative(s in arb_shape2(), t in arb_shape2()) {
        let alg = HallAlgebra::new(CategorySpec::skew(2));
        let f = alg
            .product(
                &HallElement::delta(ModuleClass::of_shape(&s)),
                &HallElement::delta(ModuleClass::of_shape(&t)),
            )
            .unwrap();
        let delta = alg.coproduct(&f);
        prop_assert_eq!(delta.flipped(), delta);
    }
}

/// Reduced coproduct vanishes exactly on the connected classes.
#[test]
fn primitives_are_exactly_connected_classes() {
    let alg = HallAlgebra::new(CategorySpec::skew(2));
    for d in 1..=4usize {
        for r in alg.classes_of_dim(d).unwrap().iter() {
            let delta = alg.coproduct(&HallElement::delta(r.clone()));
            let reduced: Vec<_> = delta
                .terms()
                .keys()
                .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                .collect();
            assert_eq!(
                reduced.is_empty(),
                r.is_indecomposable(),
                "reduced coproduct of {r}"
            );
        }
    }
}

/// Computing in the type α + gradable quotient agrees with computing in
/// the ambient algebra and dropping out-of-category terms.
#[test]
fn quotient_categories_project_from_ambient() {
    let full = HallAlgebra::new(CategorySpec {
        n: 2,
        type_alpha: false,
        gradable: false,
        origin_support: true,
    });
    let restricted = HallAlgebra::new(CategorySpec::skew(2));
    let budget = Budget::default();
    let mut pairs = Vec::new();
    for a in 1..=2usize {
        for b in 1..=(4 - a).min(2) {
            for s in shapes::enumerate_connected_shapes(2, a, &budget).unwrap() {
                for t in shapes::enumerate_connected_shapes(2, b, &budget).unwrap() {
                    pairs.push((ModuleClass::of_shape(&s), ModuleClass::of_shape(&t)));
                }
            }
        }
    }
    for (s, t) in pairs {
        let ambient = full.delta_product(&s, &t).unwrap();
        let projected: Vec<(ModuleClass, Rational64)> = ambient
            .terms()
            .iter()
            .filter(|(k, _)| restricted.category().class_in_category(k))
            .map(|(k, v)| (k.clone(), *v))
            .collect();
        let direct: Vec<(ModuleClass, Rational64)> = restricted
            .delta_product(&s, &t)
            .unwrap()
            .terms()
            .iter()
            .map(|(k, v)| (k.clone(), *v))
            .collect();
        assert_eq!(projected, direct, "projection mismatch at ({s}, {t})");
    }
}

/// Modules built by composing constructions validate and decompose back.
#[test]
fn constructions_yield_valid_modules() {
    let budget = Budget::default();
    for s in shapes::enumerate_connected_shapes(2, 3, &budget).unwrap() {
        for t in shapes::enumerate_connected_shapes(2, 2, &budget).unwrap() {
            let (ms, _) = module_from_shape(&s);
            let (mt, _) = module_from_shape(&t);
            for m in [
                direct_sum(&ms, &mt).unwrap(),
                smash_product(&ms, &mt).unwrap(),
                tensor_product(&ms, &mt).unwrap(),
            ] {
                assert!(modules::validate(&m).is_ok());
                let parts = modules::decompose(&m);
                let rebuilt = modules::direct_sum_all(2, &parts).unwrap();
                assert!(isomorphic(&m, &rebuilt));
            }
        }
    }
}
