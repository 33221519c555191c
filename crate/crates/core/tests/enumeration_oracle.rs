use std::collections::BTreeSet;

use hypergroups::enumerate::{
    are_isomorphic, canonical_form, canonicalize, enumerate_by_brute_force, enumerate_hypergroups, find_isomorphism,
};
use hypergroups::Budget;

#[test]
fn generator_matches_brute_force_up_to_order_three() {
    for order in 1..=3 {
        let generated = enumerate_hypergroups(order, &Budget::unlimited()).unwrap();
        let brute = enumerate_by_brute_force(order);
        let g: Vec<_> = generated.iter().map(canonical_form).collect();
        let b: Vec<_> = brute.iter().map(canonical_form).collect();
        println!("order {order}: generator {} classes, brute force {} classes", g.len(), b.len());
        assert_eq!(g, b, "order {order}");
    }
}

#[test]
fn catalog_members_are_canonical_and_pairwise_distinct() {
    for order in 1..=4 {
        let all = enumerate_hypergroups(order, &Budget::unlimited()).unwrap();
        println!("order {order}: {} classes", all.len());
        let forms: BTreeSet<_> = all.iter().map(canonical_form).collect();
        assert_eq!(forms.len(), all.len());
        for h in &all {
            assert_eq!(&canonicalize(h), h);
        }
        // Canonical-form inequality agrees with direct permutation search.
        if order <= 3 {
            for (i, a) in all.iter().enumerate() {
                for b in &all[i + 1..] {
                    assert!(!are_isomorphic(a, b));
                    assert!(find_isomorphism(a, b).is_none());
                }
            }
        }
    }
}

#[test]
fn enumeration_is_deterministic_across_thread_counts() {
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| enumerate_hypergroups(4, &Budget::unlimited()).unwrap())
    };
    assert_eq!(run(1), run(4));
}
