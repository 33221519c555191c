//! Double-coset partitions and quotient hypergroups `H//F`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergroup::{Hypergroup, Table};
use crate::set::ElementSet;
use crate::subsets::{closed, is_strongly_normal, require_closed};

/// `FhF`.
pub fn coset(h: &Hypergroup, f: ElementSet, x: usize) -> Result<ElementSet> {
    require_closed(h, f)?;
    Ok(double_coset(h, f, x))
}

#[inline]
fn double_coset(h: &Hypergroup, f: ElementSet, x: usize) -> ElementSet {
    h.set_product(f, h.set_product(ElementSet::singleton(x), f))
}

/// `H//F` together with the map back to parent cosets.
#[derive(Debug, Clone, Serialize)]
pub struct QuotientMap {
    #[serde(skip)]
    pub parent: Hypergroup,
    pub by: ElementSet,
    /// Distinct cosets ordered by least member; `classes[0] == by`.
    pub classes: Vec<ElementSet>,
    #[serde(skip)]
    pub quotient: Hypergroup,
    pub class_of: Vec<usize>,
}

impl QuotientMap {
    /// Image `S//F` of a parent subset, as a set of class indices.
    pub fn image(&self, s: ElementSet) -> ElementSet {
        s.iter().map(|x| self.class_of[x]).collect()
    }

    /// Union of the cosets named by `classes`.
    pub fn preimage(&self, classes: ElementSet) -> ElementSet {
        classes.iter().fold(ElementSet::EMPTY, |acc, c| acc.union(self.classes[c]))
    }
}

/// Builds `H//F`, checking the partition, representative independence and the
/// quotient's axioms.
pub fn quotient(h: &Hypergroup, f: ElementSet) -> Result<QuotientMap> {
    require_closed(h, f)?;
    let n = h.order();
    let cosets: Vec<ElementSet> = (0..n).map(|x| double_coset(h, f, x)).collect();

    let mut classes: Vec<ElementSet> = Vec::new();
    for &c in &cosets {
        if classes.contains(&c) {
            continue;
        }
        if let Some(&d) = classes.iter().find(|d| !d.is_disjoint(c)) {
            return Err(Error::PartitionFailure(d, c));
        }
        classes.push(c);
    }
    classes.sort_by_key(|c| c.first());
    let class_of: Vec<usize> = cosets
        .iter()
        .map(|c| classes.iter().position(|d| d == c).unwrap())
        .collect();
    debug_assert_eq!(classes[0], f);

    let k = classes.len();
    let mut cells = Vec::with_capacity(k * k);
    for &ca in &classes {
        for &cb in &classes {
            let mut entry: Option<ElementSet> = None;
            for a in ca {
                for b in cb {
                    let afb = h.set_product(h.set_product(ElementSet::singleton(a), f), ElementSet::singleton(b));
                    let img: ElementSet = afb.iter().map(|x| class_of[x]).collect();
                    match entry {
                        None => entry = Some(img),
                        Some(e) if e != img => {
                            return Err(Error::QuotientAxiomFailure(format!(
                                "product of classes {ca} and {cb} depends on representatives ({a}, {b})"
                            )))
                        }
                        _ => {}
                    }
                }
            }
            cells.push(entry.unwrap());
        }
    }
    let star: Vec<usize> = classes.iter().map(|c| class_of[h.star_of(c.first().unwrap())]).collect();
    let quotient = Hypergroup::new(Table::new(k, cells), Some(star))
        .map_err(|e| Error::QuotientAxiomFailure(e.to_string()))?;
    Ok(QuotientMap { parent: h.clone(), by: f, classes, quotient, class_of })
}

/// Both sides of "`F//N` strongly normal in `H//N` iff `F` strongly normal in `H`".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CorrespondenceRecord {
    pub in_quotient: bool,
    pub in_parent: bool,
}

impl CorrespondenceRecord {
    pub fn agrees(&self) -> bool {
        self.in_quotient == self.in_parent
    }
}

/// Requires `N` closed and normal, `N ⊆ F`, `F` closed.
pub fn strongly_normal_correspondence(
    h: &Hypergroup,
    n: ElementSet,
    f: ElementSet,
) -> Result<CorrespondenceRecord> {
    require_closed(h, n)?;
    require_closed(h, f)?;
    if !crate::subsets::is_normal(h, n)? {
        return Err(Error::Precondition(format!("{n} is not normal")));
    }
    if !n.is_subset(f) {
        return Err(Error::Precondition(format!("{n} is not contained in {f}")));
    }
    let q = quotient(h, n)?;
    let image = q.image(f);
    debug_assert!(closed(&q.quotient, image));
    Ok(CorrespondenceRecord {
        in_quotient: is_strongly_normal(&q.quotient, image)?,
        in_parent: is_strongly_normal(h, f)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{c2, k2, s3, t1, w3};

    fn set<const N: usize>(m: [usize; N]) -> ElementSet {
        ElementSet::from(m)
    }

    #[test]
    fn cosets() {
        let w3 = w3();
        assert_eq!(coset(&w3, set([0, 1]), 2).unwrap(), set([2]));
        assert_eq!(coset(&w3, set([0, 1]), 1).unwrap(), set([0, 1]));
        assert_eq!(coset(&k2(), set([0]), 1).unwrap(), set([1]));
        assert!(coset(&w3, set([0, 2]), 1).is_err());
    }

    #[test]
    fn w3_over_center_is_c2() {
        let q = quotient(&w3(), set([0, 1])).unwrap();
        assert_eq!(q.classes, vec![set([0, 1]), set([2])]);
        assert_eq!(q.class_of, vec![0, 0, 1]);
        assert_eq!(q.quotient, c2());
        assert!(q.quotient.is_thin());
        assert_eq!(q.preimage(set([1])), set([2]));
    }

    #[test]
    fn trivial_quotients() {
        for h in [t1(), c2(), k2(), w3(), s3()] {
            let by_one = quotient(&h, h.identity_set()).unwrap();
            assert_eq!(by_one.quotient, h);
            let by_all = quotient(&h, h.all()).unwrap();
            assert_eq!(by_all.quotient, t1());
        }
    }

    #[test]
    fn s3_over_a3() {
        let q = quotient(&s3(), set([0, 4, 5])).unwrap();
        assert_eq!(q.quotient, c2());
        // By a non-normal subgroup: double cosets of <(12)> are {e,(12)} and the rest.
        let q = quotient(&s3(), set([0, 1])).unwrap();
        assert_eq!(q.classes, vec![set([0, 1]), set([2, 3, 4, 5])]);
        assert!(!q.quotient.is_thin());
    }

    #[test]
    fn correspondence() {
        let w3 = w3();
        let r = strongly_normal_correspondence(&w3, set([0]), set([0, 1])).unwrap();
        assert_eq!(r, CorrespondenceRecord { in_quotient: true, in_parent: true });
        assert!(strongly_normal_correspondence(&w3, set([0, 1]), set([0])).is_err());
    }
}
