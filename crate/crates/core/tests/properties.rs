mod common;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use dimerkit::corpus;
use dimerkit::matchings::MatchingTable;
use dimerkit::model::{validate, ArrowSpec};
use dimerkit::{DimerAlgebra, DimerQuiver, PathWord};

fn nondegenerate_models() -> Vec<DimerQuiver> {
    common::models_with_covers()
        .into_iter()
        .map(|(_, q)| q)
        .filter(|q| DimerAlgebra::new(q).unwrap().is_nondegenerate())
        .collect()
}

/// The same quiver with its arrows renumbered by `perm`.
fn permute_arrows(q: &DimerQuiver, perm: &[usize]) -> DimerQuiver {
    let specs: Vec<ArrowSpec> = perm
        .iter()
        .map(|&k| {
            let a = &q.arrows()[k];
            ArrowSpec::new(a.name.clone(), a.tail.0, a.head.0, (a.winding.u1, a.winding.u2))
        })
        .collect();
    let mut inverse = vec![0; perm.len()];
    for (new, &old) in perm.iter().enumerate() {
        inverse[old] = new;
    }
    let faces = q
        .faces()
        .iter()
        .map(|f| (f.sign, f.boundary.iter().map(|a| dimerkit::ArrowId(inverse[a.0])).collect()))
        .collect();
    DimerQuiver::new(q.vertex_count(), specs, faces).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn weights_are_additive(model in 0usize..9, seed in any::<u64>(), l1 in 0usize..6, l2 in 0usize..6) {
        let models = nondegenerate_models();
        let q = &models[model % models.len()];
        let alg = DimerAlgebra::new(q).unwrap();
        let mut rng = StdRng::seed_from_u64(seed);
        let p = common::random_path(q, &mut rng, l1 + l2);
        let (head, tail) = p.arrows().split_at(l1);
        let first = PathWord::new(q, p.tail(), head.to_vec()).unwrap();
        let second = PathWord::new(q, first.head(), tail.to_vec()).unwrap();
        let joined = first.then(&second).unwrap();
        prop_assert_eq!(&joined, &p);
        prop_assert_eq!(alg.tau_weight(&p), alg.tau_weight(&first).plus(&alg.tau_weight(&second)));
        prop_assert_eq!(alg.eta_weight(&p), alg.eta_weight(&first).plus(&alg.eta_weight(&second)));
        prop_assert_eq!(p.winding(), first.winding() + second.winding());
    }

    #[test]
    fn equality_is_an_equivalence(model in 0usize..9, seed in any::<u64>(), len in 0usize..7) {
        let models = nondegenerate_models();
        let q = &models[model % models.len()];
        let alg = DimerAlgebra::new(q).unwrap();
        let mut rng = StdRng::seed_from_u64(seed);
        let p = common::random_path(q, &mut rng, len);
        let class = alg.eq_class(&p).unwrap();
        prop_assert!(alg.equal_mod_i(&p, &p).is_equal());
        for r in class.members.iter().take(8) {
            prop_assert!(alg.equal_mod_i(&p, r).is_equal());
            prop_assert!(alg.equal_mod_i(r, &p).is_equal());
            // the class of any member is the same class
            prop_assert_eq!(&alg.eq_class(r).unwrap(), &class);
        }
        let other = common::random_path(q, &mut rng, len);
        prop_assert_eq!(alg.equal_mod_i(&p, &other).is_equal(), class.contains(&other));
    }

    #[test]
    fn text_and_json_round_trip(model in 0usize..12) {
        let models = common::models_with_covers();
        let q = &models[model % models.len()].1;
        let text = q.to_dimer_text();
        let back = DimerQuiver::parse(&text).unwrap();
        prop_assert_eq!(&back, q);
        prop_assert_eq!(back.to_dimer_text(), text);
        let json = q.to_json();
        let back = DimerQuiver::from_json(&json).unwrap();
        prop_assert_eq!(&back, q);
    }

    #[test]
    fn matching_count_ignores_arrow_order(perm in Just((0..9).collect::<Vec<usize>>()).prop_shuffle()) {
        let q = corpus::figure_one();
        let shuffled = permute_arrows(&q, &perm);
        prop_assert!(validate(&shuffled).valid);
        let a = MatchingTable::compute(&q).unwrap();
        let b = MatchingTable::compute(&shuffled).unwrap();
        prop_assert_eq!(a.perfect.len(), b.perfect.len());
        prop_assert_eq!(a.simple.len(), b.simple.len());
        let qs = |q: &DimerQuiver, t: &MatchingTable| {
            let mut v = q.arrow_names(&t.qs_arrows(q).into_iter().collect::<Vec<_>>());
            v.sort();
            v
        };
        prop_assert_eq!(qs(&q, &a), qs(&shuffled, &b));
    }
}

#[test]
fn parser_rejects_garbage_without_panicking() {
    for text in ["", "vertices:", "vertices: 1\narrow", "vertices: 1\nface + [", "vertices: 99999999999999999999", "pos 0 nan nan"] {
        let _ = DimerQuiver::parse(text);
    }
    assert!(DimerQuiver::from_json("{").is_err());
}
