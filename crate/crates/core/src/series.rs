//! Center, upper center series, weak nilpotency and central series.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergroup::Hypergroup;
use crate::quotient::quotient;
use crate::set::ElementSet;
use crate::subsets::{all_chains, closed, is_normal, ClosedSubsetLattice};

/// Thin elements `h` with `hx = xh` (as sets) for every `x`.
pub fn center(h: &Hypergroup) -> ElementSet {
    let n = h.order();
    (0..n)
        .filter(|&a| h.is_thin_element(a) && (0..n).all(|x| h.product(a, x) == h.product(x, a)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UpperCenterSeries {
    /// `Z_0 = {1} ⊊ Z_1 ⊊ ... ⊊ Z_m`, stopping at the first repeat.
    pub terms: Vec<ElementSet>,
    /// Index of the terminal term.
    pub stabilized_at: usize,
    pub is_exhaustive: bool,
}

impl UpperCenterSeries {
    pub fn hypercenter(&self) -> ElementSet {
        self.terms[self.stabilized_at]
    }

    /// `Z_i`, which equals the hypercenter for every `i` past stabilization.
    pub fn term(&self, i: usize) -> ElementSet {
        self.terms[i.min(self.stabilized_at)]
    }
}

/// Iterates `Z_{i+1} = ` union of the cosets central in `H//Z_i`.
pub fn upper_center_series(h: &Hypergroup) -> Result<UpperCenterSeries> {
    let mut terms = vec![h.identity_set()];
    loop {
        let current = *terms.last().unwrap();
        let q = quotient(h, current)?;
        let next = q.preimage(center(&q.quotient));
        if !closed(h, next) || !is_normal(h, next)? {
            return Err(Error::HypothesisViolation(format!(
                "upper center term {next} is not a normal closed subset"
            )));
        }
        if next == current {
            break;
        }
        terms.push(next);
    }
    let stabilized_at = terms.len() - 1;
    let is_exhaustive = terms[stabilized_at] == h.all();
    Ok(UpperCenterSeries { terms, stabilized_at, is_exhaustive })
}

/// Terminal term of the upper center series.
pub fn hypercenter(h: &Hypergroup) -> Result<ElementSet> {
    Ok(upper_center_series(h)?.hypercenter())
}

/// `(true, Some(class))` when some `Z_n = H`; the class is the least such `n`.
pub fn is_weakly_nilpotent(h: &Hypergroup) -> Result<(bool, Option<usize>)> {
    let s = upper_center_series(h)?;
    Ok(if s.is_exhaustive { (true, Some(s.stabilized_at)) } else { (false, None) })
}

pub(crate) fn weakly_nilpotent(h: &Hypergroup) -> bool {
    is_weakly_nilpotent(h).expect("quotients by series terms are well formed").0
}

/// Whether `H = H_0 ⊇ ... ⊇ H_r = {1}` satisfies `H_{i-1}//H_i ⊆ Z(H//H_i)`.
///
/// Every term must be closed and normal in `H`.
pub fn is_central_series(h: &Hypergroup, chain: &[ElementSet]) -> Result<bool> {
    match (chain.first(), chain.last()) {
        (Some(&first), Some(&last)) if first == h.all() && last == h.identity_set() => {}
        _ => return Err(Error::Precondition("chain must run from H down to {1}".into())),
    }
    for w in chain.windows(2) {
        if !w[1].is_subset(w[0]) {
            return Err(Error::Precondition(format!("chain is not descending at {}", w[1])));
        }
    }
    for &t in chain {
        if !closed(h, t) {
            return Err(Error::NotClosed(t));
        }
        if !is_normal(h, t)? {
            return Err(Error::Precondition(format!("{t} is not normal")));
        }
    }
    for w in chain.windows(2) {
        if !central_step(h, w[0], w[1])? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn central_step(h: &Hypergroup, upper: ElementSet, lower: ElementSet) -> Result<bool> {
    let q = quotient(h, lower)?;
    Ok(q.image(upper).is_subset(center(&q.quotient)))
}

/// All strictly descending central series through the normal closed subsets,
/// each listed from `H` down to `{1}`.
pub fn central_series(h: &Hypergroup, lattice: &ClosedSubsetLattice) -> Vec<Vec<ElementSet>> {
    let nodes: Vec<ElementSet> = lattice.normal_subsets().collect();
    let mut chains = all_chains(&nodes, h.identity_set(), h.all(), |lo, up| {
        central_step(h, up, lo).expect("normal closed subsets have quotients")
    });
    for c in &mut chains {
        c.reverse();
    }
    chains
}

/// Nilpotency in the commutator sense, via its characterization as
/// "thin residue trivial", i.e. `H` is a (nilpotent) group.
pub fn is_nilpotent_zhang_guo(h: &Hypergroup) -> bool {
    crate::subsets::thin_residue(h) == h.identity_set()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{c2, k2, s3, t1, w3};
    use crate::subsets::all_closed_subsets;

    fn set<const N: usize>(m: [usize; N]) -> ElementSet {
        ElementSet::from(m)
    }

    #[test]
    fn centers() {
        assert_eq!(center(&k2()), set([0]));
        assert_eq!(center(&c2()), set([0, 1]));
        assert_eq!(center(&w3()), set([0, 1]));
        assert_eq!(center(&s3()), set([0]));
    }

    #[test]
    fn series() {
        let s = upper_center_series(&w3()).unwrap();
        assert_eq!(s.terms, vec![set([0]), set([0, 1]), set([0, 1, 2])]);
        assert_eq!((s.stabilized_at, s.is_exhaustive), (2, true));
        let s = upper_center_series(&k2()).unwrap();
        assert_eq!(s.terms, vec![set([0])]);
        assert_eq!((s.stabilized_at, s.is_exhaustive), (0, false));
        let z4 = Hypergroup::cyclic(4);
        assert_eq!(upper_center_series(&z4).unwrap().terms, vec![set([0]), z4.all()]);
        assert_eq!(upper_center_series(&t1()).unwrap().terms, vec![set([0])]);
    }

    #[test]
    fn hypercenters_and_weak_nilpotency() {
        assert_eq!(hypercenter(&w3()).unwrap(), set([0, 1, 2]));
        assert_eq!(hypercenter(&k2()).unwrap(), set([0]));
        assert_eq!(hypercenter(&t1()).unwrap(), set([0]));
        assert_eq!(is_weakly_nilpotent(&w3()).unwrap(), (true, Some(2)));
        assert_eq!(is_weakly_nilpotent(&k2()).unwrap(), (false, None));
        assert_eq!(is_weakly_nilpotent(&t1()).unwrap(), (true, Some(0)));
        assert_eq!(is_weakly_nilpotent(&s3()).unwrap(), (false, None));
        assert_eq!(is_weakly_nilpotent(&Hypergroup::cyclic(6)).unwrap(), (true, Some(1)));
    }

    #[test]
    fn central_series_recognition() {
        let w3 = w3();
        assert!(is_central_series(&w3, &[w3.all(), set([0, 1]), set([0])]).unwrap());
        assert!(is_central_series(&c2(), &[set([0, 1]), set([0])]).unwrap());
        assert!(!is_central_series(&k2(), &[set([0, 1]), set([0])]).unwrap());
        assert!(is_central_series(&w3, &[set([0, 1]), set([0])]).is_err());
        assert!(is_central_series(&w3, &[w3.all(), set([0, 2]), set([0])]).is_err());
        let all = central_series(&w3, &all_closed_subsets(&w3));
        assert_eq!(all, vec![vec![w3.all(), set([0, 1]), set([0])]]);
        assert!(central_series(&k2(), &all_closed_subsets(&k2())).is_empty());
    }

    #[test]
    fn zhang_guo_nilpotency() {
        assert!(!is_nilpotent_zhang_guo(&w3()));
        assert!(is_nilpotent_zhang_guo(&c2()));
        assert!(!is_nilpotent_zhang_guo(&k2()));
    }
}
