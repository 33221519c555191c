//! Inputs shared by the benchmarks.

use hypergroups::enumerate::enumerate_hypergroups;
use hypergroups::{Budget, Hypergroup};

/// Every hypergroup of order 1 to `max`, in catalog order.
pub fn catalog(max: usize) -> Vec<(String, Hypergroup)> {
    (1..=max)
        .flat_map(|n| {
            enumerate_hypergroups(n, &Budget::unlimited())
                .expect("orders up to 4 need no budget")
                .into_iter()
                .enumerate()
                .map(move |(i, h)| (format!("h{n}_{:03}", i + 1), h))
        })
        .collect()
}

/// The largest member of the order-4 catalog by closed-subset count.
pub fn richest_order_four() -> Hypergroup {
    catalog(4)
        .into_iter()
        .map(|(_, h)| h)
        .filter(|h| h.order() == 4)
        .max_by_key(|h| hypergroups::subsets::all_closed_subsets(h).len())
        .unwrap()
}
