use std::sync::OnceLock;

use proptest::prelude::*;

use hypergroups::arith::{is_solvable, rt_chain, sylow_p_subsets};
use hypergroups::enumerate::{canonical_form, enumerate_hypergroups};
use hypergroups::series::upper_center_series;
use hypergroups::subsets::{all_closed_subsets, generated_closed, thin_residue};
use hypergroups::{hgt, Budget, ElementSet, Hypergroup};

fn catalog() -> &'static [Hypergroup] {
    static CATALOG: OnceLock<Vec<Hypergroup>> = OnceLock::new();
    CATALOG.get_or_init(|| {
        let mut all: Vec<Hypergroup> = (1..=4)
            .flat_map(|n| enumerate_hypergroups(n, &Budget::unlimited()).unwrap())
            .collect();
        all.push(hypergroups::fixtures::s3());
        all
    })
}

fn member() -> impl Strategy<Value = Hypergroup> {
    (0..catalog().len()).prop_map(|i| catalog()[i].clone())
}

fn subset_of(h: &Hypergroup, bits: u64) -> ElementSet {
    ElementSet::from_bits(bits & h.all().bits())
}

/// A relabeling fixing 0, from a shuffle of the remaining indices.
fn relabeling(n: usize, keys: &[u32]) -> Vec<usize> {
    let mut rest: Vec<usize> = (1..n).collect();
    rest.sort_by_key(|&i| (keys[i % keys.len()], i));
    let mut perm = vec![0; n];
    for (new, &old) in rest.iter().enumerate() {
        perm[old] = new + 1;
    }
    perm
}

/// Every decided invariant that must not depend on element names.
fn invariants(h: &Hypergroup) -> impl PartialEq + std::fmt::Debug {
    let lattice = all_closed_subsets(h);
    let series = upper_center_series(h).unwrap();
    let rt = rt_chain(h).map(|c| c.valency());
    let sylow_counts: Vec<usize> = match rt {
        Some(v) => (2..=v.max(2))
            .filter(|p| hypergroups::arith::is_prime(*p))
            .map(|p| sylow_p_subsets(h, p).unwrap().len())
            .collect(),
        None => Vec::new(),
    };
    (
        h.is_thin(),
        h.is_commutative(),
        h.thin_elements().len(),
        lattice.len(),
        lattice.normal_subsets().count(),
        lattice.strongly_normal_subsets().count(),
        series.terms.iter().map(|t| t.len()).collect::<Vec<_>>(),
        series.is_exhaustive,
        thin_residue(h).len(),
        rt,
        is_solvable(h).0,
        sylow_counts,
    )
}

proptest! {
    #[test]
    fn star_reverses_products(h in member(), a in any::<u64>(), b in any::<u64>()) {
        let (a, b) = (subset_of(&h, a), subset_of(&h, b));
        let lhs = h.star_of_set(h.set_product(a, b));
        let rhs = h.set_product(h.star_of_set(b), h.star_of_set(a));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn generated_closed_is_a_closure(h in member(), a in any::<u64>(), b in any::<u64>()) {
        let a = subset_of(&h, a);
        let b = a.union(subset_of(&h, b));
        let ga = generated_closed(&h, a);
        prop_assert!(a.is_subset(ga));
        prop_assert!(hypergroups::subsets::is_closed(&h, ga).unwrap());
        prop_assert_eq!(generated_closed(&h, ga), ga);
        prop_assert!(ga.is_subset(generated_closed(&h, b)));
    }

    #[test]
    fn deciders_ignore_relabeling(h in member(), keys in prop::collection::vec(any::<u32>(), 1..8)) {
        let perm = relabeling(h.order(), &keys);
        let g = h.relabel(&perm);
        prop_assert_eq!(canonical_form(&g), canonical_form(&h));
        prop_assert_eq!(invariants(&g), invariants(&h));
    }

    #[test]
    fn hgt_round_trip(h in member(), keys in prop::collection::vec(any::<u32>(), 1..8)) {
        let g = h.relabel(&relabeling(h.order(), &keys));
        let text = hgt::to_string(&g);
        let back = hgt::parse(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(hgt::to_string(&back), text);
        prop_assert_eq!(canonical_form(&back), canonical_form(&h));
    }
}
