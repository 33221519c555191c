//! Every decider against the naive reference implementation, over the whole
//! catalog of orders 1 to 4 plus the named fixtures.

use std::collections::BTreeSet;

use hypergroups::arith::{is_solvable, p_valenced_record, primes_up_to, rt_chain, sylow_p_subsets};
use hypergroups::enumerate::enumerate_hypergroups;
use hypergroups::fixtures::{c2, k2, s3, t1, w3};
use hypergroups::oracle::NaiveHypergroup;
use hypergroups::series::{center, upper_center_series};
use hypergroups::subsets::{
    all_closed_subsets, is_normal, is_strongly_normal, subnormal_chain, thin_residue, NormalityMode,
};
use hypergroups::verify::{question_witness, Question};
use hypergroups::{quotient, Budget, ElementSet, Hypergroup, PValencedReading};

fn set(s: ElementSet) -> BTreeSet<usize> {
    s.iter().collect()
}

fn catalog() -> Vec<Hypergroup> {
    let mut all: Vec<Hypergroup> = (1..=4)
        .flat_map(|n| enumerate_hypergroups(n, &Budget::unlimited()).unwrap())
        .collect();
    all.extend([t1(), c2(), k2(), w3(), s3(), Hypergroup::cyclic(4), Hypergroup::cyclic(6)]);
    all
}

#[test]
fn lattice_and_normality() {
    for h in catalog() {
        let o = NaiveHypergroup::from_hypergroup(&h);
        assert_eq!(o.star(), h.star());
        let lattice = all_closed_subsets(&h);
        let fast: Vec<BTreeSet<usize>> = lattice.iter().map(set).collect();
        let mut naive = o.closed_subsets();
        let mut fast_sorted = fast.clone();
        naive.sort();
        fast_sorted.sort();
        assert_eq!(fast_sorted, naive);
        for f in lattice.iter() {
            assert_eq!(is_normal(&h, f).unwrap(), o.is_normal(&set(f)));
            assert_eq!(is_strongly_normal(&h, f).unwrap(), o.is_strongly_normal(&set(f)));
            let sub = subnormal_chain(&h, f, NormalityMode::Normal).unwrap().is_some();
            assert_eq!(sub, o.is_subnormal(&set(f), false), "{f} in {h:?}");
            let strong = subnormal_chain(&h, f, NormalityMode::StronglyNormal).unwrap().is_some();
            assert_eq!(strong, o.is_subnormal(&set(f), true));
        }
    }
}

#[test]
fn quotients() {
    for h in catalog() {
        let o = NaiveHypergroup::from_hypergroup(&h);
        for f in all_closed_subsets(&h).iter() {
            let q = quotient(&h, f).unwrap();
            let (nq, classes) = o.quotient(&set(f));
            assert_eq!(q.classes.iter().map(|&c| set(c)).collect::<Vec<_>>(), classes);
            assert_eq!(NaiveHypergroup::from_hypergroup(&q.quotient), nq);
        }
    }
}

#[test]
fn series_and_residue() {
    for h in catalog() {
        let o = NaiveHypergroup::from_hypergroup(&h);
        assert_eq!(set(center(&h)), o.center());
        let s = upper_center_series(&h).unwrap();
        assert_eq!(s.terms.iter().map(|&t| set(t)).collect::<Vec<_>>(), o.upper_center_series());
        assert_eq!(s.is_exhaustive, o.is_weakly_nilpotent());
        assert_eq!(set(thin_residue(&h)), o.thin_residue());
    }
}

#[test]
fn residually_thin_data() {
    for h in catalog() {
        let o = NaiveHypergroup::from_hypergroup(&h);
        let valencies = o.rt_valencies();
        assert!(valencies.len() <= 1, "chains disagree: {valencies:?}");
        assert_eq!(rt_chain(&h).map(|c| c.valency()), o.valency());
        assert_eq!(is_solvable(&h).0, o.is_solvable());
        let Some(n_h) = o.valency() else { continue };
        for p in primes_up_to(n_h.max(h.order() as u64)) {
            let mut fast: Vec<BTreeSet<usize>> = sylow_p_subsets(&h, p).unwrap().into_iter().map(set).collect();
            let mut naive = o.sylow(p);
            naive.sort();
            fast.sort();
            assert_eq!(fast, naive, "Sylow {p}-subsets");
            let lattice = all_closed_subsets(&h);
            for reading in [PValencedReading::Subset, PValencedReading::Singleton] {
                let fast = p_valenced_record(&h, &lattice, p, reading).unwrap().holds;
                assert_eq!(fast, o.is_p_valenced(p, reading), "{p}-valenced, {reading:?}");
            }
        }
    }
}

#[test]
fn question_predicates() {
    let mut counts = [0usize; 3];
    for h in catalog() {
        let o = NaiveHypergroup::from_hypergroup(&h);
        for (i, &q) in Question::ALL.iter().enumerate() {
            let fast = question_witness(&h, q, PValencedReading::Subset).unwrap().is_some();
            let naive = match q {
                Question::Q56 => o.q56_counterexample(),
                Question::Q57 => o.q57_counterexample(),
                Question::SylowNoPValenced => o.sylow_without_p_valenced(PValencedReading::Subset),
            };
            assert_eq!(fast, naive, "{q}");
            counts[i] += fast as usize;
        }
    }
    println!("findings among catalog and fixtures (q56, q57, sylow-no-pvalenced): {counts:?}");
}
