//! Randomized laws spanning several modules.

use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bass_serre::{act, classify, vertex_distance, Classification, TreeVertex};
use crate::cli::spec::parse_group_spec;
use crate::cli::{C2_C2_C2, C2_C3, S3_C2, Z6_C2};
use crate::finite_group::{ElementId, FiniteGroup};
use crate::free_product::{FpElement, FreeProduct, Order};
use crate::words::{MixedWord, Substitution};

fn ambients() -> Vec<Arc<FreeProduct>> {
    [C2_C3, S3_C2, Z6_C2, C2_C2_C2].iter().map(|t| parse_group_spec(t).unwrap()).collect()
}

/// `(ambient index, rng seed)`; elements are drawn from the seeded rng.
fn setting() -> impl Strategy<Value = (usize, u64)> {
    (0..4usize, any::<u64>())
}

fn draw(g: &Arc<FreeProduct>, rng: &mut ChaCha8Rng, max_norm: usize) -> FpElement {
    use rand::Rng;
    let n = rng.gen_range(0..=max_norm);
    g.random_element(rng, n)
}

fn reduced(x: &FpElement) -> bool {
    x.syllables().iter().all(|s| !s.elem.is_identity()) && x.syllables().windows(2).all(|w| w[0].factor != w[1].factor)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn group_laws((i, seed) in setting()) {
        let g = &ambients()[i];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y, z) = (draw(g, &mut rng, 6), draw(g, &mut rng, 6), draw(g, &mut rng, 6));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &g.identity(), x.clone());
        prop_assert_eq!(&g.identity() * &x, x.clone());
        prop_assert!((&x * &x.inverse()).is_identity());
        prop_assert!(reduced(&(&x * &y)));
        prop_assert!((&x * &y).norm() <= x.norm() + y.norm());
    }

    #[test]
    fn normalize_matches_products((i, seed) in setting(), raw_len in 0..10usize) {
        use rand::Rng;
        let g = &ambients()[i];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let raw: Vec<(usize, ElementId)> = (0..raw_len)
            .map(|_| {
                let f = rng.gen_range(0..g.factors().len());
                (f, ElementId(rng.gen_range(0..g.factors()[f].order()) as u32))
            })
            .collect();
        let product = raw.iter().fold(g.identity(), |acc, &(f, e)| &acc * &g.embed(f, e).unwrap());
        let n = g.normalize(&raw).unwrap();
        prop_assert!(reduced(&n));
        prop_assert_eq!(n, product);
    }

    #[test]
    fn powers_and_conjugates((i, seed) in setting(), k in -9i64..9, l in -9i64..9) {
        let g = &ambients()[i];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, c) = (draw(g, &mut rng, 5), draw(g, &mut rng, 5));
        prop_assert_eq!(&x.pow(k) * &x.pow(l), x.pow(k + l));
        prop_assert_eq!(x.pow(k).inverse(), x.pow(-k));
        prop_assert_eq!(x.conjugate(&c), &(&c * &x) * &c.inverse());
        prop_assert_eq!(x.conjugate(&c).order(), x.order());
    }

    #[test]
    fn cyclic_reduction_round_trips((i, seed) in setting()) {
        let g = &ambients()[i];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = draw(g, &mut rng, 9);
        let red = x.cyclic_reduce();
        prop_assert_eq!(red.core.conjugate(&red.conjugator), x.clone());
        prop_assert!(red.core.is_cyclically_reduced());
        prop_assert_eq!(red.core.norm() <= 1, x.order().is_finite());
        let back = red.core.cyclic_reduce();
        prop_assert!(back.conjugator.is_identity());
    }

    #[test]
    fn rendering_reparses((i, seed) in setting()) {
        let g = &ambients()[i];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = draw(g, &mut rng, 8);
        let back = MixedWord::parse(&x.to_string(), g).unwrap().evaluate(&Substitution::new()).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn evaluation_is_a_homomorphism((i, seed) in setting(), shape in 0..4usize) {
        let g = &ambients()[i];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let words = ["x1 x2^-1 x3", "[x1, x2^x3]", "(x1^3 [x1, x2^x3] x2^3)^2", "x3^2 x1 x2 x1"];
        let w1 = MixedWord::parse(words[shape], g).unwrap();
        let w2 = MixedWord::parse(words[(shape + 1) % 4], g).unwrap();
        let s: Substitution = (1..=3).map(|v| (v, draw(g, &mut rng, 4))).collect();
        let (a, b) = (w1.evaluate(&s).unwrap(), w2.evaluate(&s).unwrap());
        prop_assert_eq!(w1.concat(&w2).unwrap().evaluate(&s).unwrap(), &a * &b);
        prop_assert_eq!(w1.inverse().evaluate(&s).unwrap(), a.inverse());
        prop_assert_eq!(w1.pow(3).evaluate(&s).unwrap(), a.pow(3));
    }

    #[test]
    fn tree_action_is_isometric((i, seed) in setting()) {
        use rand::Rng;
        let g = &ambients()[i];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vertex = |rng: &mut ChaCha8Rng| {
            let x = draw(g, rng, 5);
            match rng.gen_range(0..=g.factors().len()) {
                0 => TreeVertex::element(x),
                f => TreeVertex::coset(f - 1, &x),
            }
        };
        let (v, w) = (vertex(&mut rng), vertex(&mut rng));
        let h = draw(g, &mut rng, 5);
        let d = vertex_distance(&v, &w).unwrap();
        prop_assert_eq!(vertex_distance(&act(&h, &v).unwrap(), &act(&h, &w).unwrap()).unwrap(), d);
        prop_assert_eq!(vertex_distance(&w, &v).unwrap(), d);
        // bipartite: same-type vertices are an even distance apart
        let same_type = matches!((&v, &w), (TreeVertex::Element(_), TreeVertex::Element(_)))
            || matches!((&v, &w), (TreeVertex::Coset { .. }, TreeVertex::Coset { .. }));
        prop_assert_eq!(d.is_multiple_of(2), same_type);
    }

    #[test]
    fn classification_matches_order((i, seed) in setting()) {
        let g = &ambients()[i];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = draw(g, &mut rng, 8);
        match classify(&u) {
            Classification::Elliptic(v) => {
                prop_assert!(u.order().is_finite());
                prop_assert_eq!(act(&u, &v).unwrap(), v);
            }
            Classification::Hyperbolic(ax) => {
                prop_assert_eq!(u.order(), Order::Infinite);
                let v = TreeVertex::element(g.identity());
                prop_assert!(vertex_distance(&v, &act(&u, &v).unwrap()).unwrap() >= ax.translation_length_edges);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn finite_factor_tables_are_groups(kind in 0..3usize, n in 2..9usize) {
        let g = match kind {
            0 => FiniteGroup::cyclic(n).unwrap(),
            1 => FiniteGroup::dihedral_reflections(n).unwrap(),
            _ => {
                let a = FiniteGroup::cyclic(n).unwrap().with_labels(&["u"]).unwrap();
                let b = FiniteGroup::cyclic(2).unwrap().with_labels(&["v"]).unwrap();
                FiniteGroup::direct_product(&a, &b).unwrap()
            }
        };
        // the stored table must pass the full table validation again
        let gens: Vec<(String, usize)> = g.generators().iter().map(|(l, e)| (l.clone(), e.index())).collect();
        let gens: Vec<(&str, usize)> = gens.iter().map(|(l, e)| (l.as_str(), *e)).collect();
        let rebuilt = FiniteGroup::from_cayley_table(&g.cayley_table(), &gens).unwrap();
        prop_assert_eq!(rebuilt.order(), g.order());
        for x in g.elements() {
            let ord = g.element_order(x).unwrap();
            prop_assert!(g.pow(x, ord as i64).is_identity());
            prop_assert_eq!(g.order() % ord as usize, 0);
            prop_assert_eq!(g.mul(x, g.inv(x)), g.identity());
        }
    }
}
