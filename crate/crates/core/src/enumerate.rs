//! Canonical forms, isomorphism testing and exhaustive generation of all
//! hypergroups of a small order.
//!
//! The generator fixes one involution per conjugacy class as the star and then
//! decides membership triple-orbit by triple-orbit: the exchange axiom says that
//! `r ∈ pq` forces `q ∈ p*r` and `p ∈ rq*`, so the set of triples `(p, q, r)`
//! with `r ∈ pq` is a union of orbits of the group generated by
//! `(p, q, r) -> (p*, r, q)` and `(p, q, r) -> (r, q*, p)`. Empty cells and
//! associativity failures prune as soon as the cells they read are decided.
//! Every leaf is re-validated and canonicalized; duplicates collapse.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::hgt;
use crate::hypergroup::{Hypergroup, Table, IDENTITY};
use crate::set::ElementSet;

/// Largest order enumerated without an explicit budget.
pub const DEFAULT_MAX_ORDER: usize = 4;
/// Largest order enumerated at all.
pub const BUDGETED_MAX_ORDER: usize = 5;

/// Row-major cells under the lexicographically least identity-fixing relabeling.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CanonicalTable {
    pub order: usize,
    pub cells: Vec<ElementSet>,
}

/// Calls `f` with every permutation of `0..n` fixing 0, in lexicographic order.
pub fn for_each_relabeling(n: usize, mut f: impl FnMut(&[usize])) {
    fn rec(perm: &mut Vec<usize>, used: &mut [bool], n: usize, f: &mut dyn FnMut(&[usize])) {
        if perm.len() == n {
            f(perm);
            return;
        }
        for v in 1..n {
            if !used[v] {
                used[v] = true;
                perm.push(v);
                rec(perm, used, n, f);
                perm.pop();
                used[v] = false;
            }
        }
    }
    let mut used = vec![false; n.max(1)];
    let mut perm = vec![0];
    if n <= 1 {
        f(&perm[..n]);
        return;
    }
    rec(&mut perm, &mut used, n, &mut f);
}

fn map_set(s: ElementSet, perm: &[usize]) -> ElementSet {
    s.iter().map(|x| perm[x]).collect()
}

/// The least relabeled table and a relabeling (old -> new) attaining it.
pub fn canonical_relabeling(h: &Hypergroup) -> (CanonicalTable, Vec<usize>) {
    let n = h.order();
    let mut best: Option<(Vec<ElementSet>, Vec<usize>)> = None;
    let mut inverse = vec![0; n];
    let mut cells = Vec::with_capacity(n * n);
    for_each_relabeling(n, |perm| {
        for (old, &new) in perm.iter().enumerate() {
            inverse[new] = old;
        }
        cells.clear();
        let mut decided = best.is_none();
        for i in 0..n {
            for j in 0..n {
                let c = map_set(h.product(inverse[i], inverse[j]), perm);
                if !decided {
                    let b = best.as_ref().unwrap().0[cells.len()];
                    match c.cmp(&b) {
                        std::cmp::Ordering::Greater => return,
                        std::cmp::Ordering::Less => decided = true,
                        std::cmp::Ordering::Equal => {}
                    }
                }
                cells.push(c);
            }
        }
        if decided {
            best = Some((cells.clone(), perm.to_vec()));
        }
    });
    let (cells, perm) = best.expect("at least the identity relabeling");
    (CanonicalTable { order: n, cells }, perm)
}

pub fn canonical_form(h: &Hypergroup) -> CanonicalTable {
    canonical_relabeling(h).0
}

/// The isomorphic copy whose table is the canonical form.
pub fn canonicalize(h: &Hypergroup) -> Hypergroup {
    h.relabel(&canonical_relabeling(h).1)
}

pub fn are_isomorphic(a: &Hypergroup, b: &Hypergroup) -> bool {
    a.order() == b.order() && canonical_form(a) == canonical_form(b)
}

/// An identity-fixing bijection carrying the table of one hypergroup onto another.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isomorphism {
    /// `perm[x]` is the image of `x`.
    pub perm: Vec<usize>,
    /// Whether `perm(x*) = perm(x)*` for every `x`.
    pub preserves_star: bool,
}

/// Direct search over all identity-fixing bijections.
pub fn find_isomorphism(a: &Hypergroup, b: &Hypergroup) -> Option<Isomorphism> {
    if a.order() != b.order() {
        return None;
    }
    let n = a.order();
    let mut found = None;
    for_each_relabeling(n, |perm| {
        if found.is_some() {
            return;
        }
        let ok = (0..n).all(|i| (0..n).all(|j| map_set(a.product(i, j), perm) == b.product(perm[i], perm[j])));
        if ok {
            let preserves_star = (0..n).all(|x| perm[a.star_of(x)] == b.star_of(perm[x]));
            found = Some(Isomorphism { perm: perm.to_vec(), preserves_star });
        }
    });
    found
}

/// One star per conjugacy class of involutions fixing 0: `pairs` transpositions
/// `(1 2)(3 4)...`, the rest fixed.
fn star_representative(n: usize, pairs: usize) -> Vec<usize> {
    let mut star: Vec<usize> = (0..n).collect();
    for k in 0..pairs {
        star.swap(2 * k + 1, 2 * k + 2);
    }
    star
}

/// Search state for one star.
struct Search {
    n: usize,
    star: Vec<usize>,
    /// Each orbit: triples `(p, q, r)` over non-identity elements.
    orbits: Vec<Vec<(usize, usize, usize)>>,
    /// Orbits touching each cell.
    pending_init: Vec<usize>,
}

impl Search {
    fn new(n: usize, star: Vec<usize>) -> Self {
        let m = n - 1;
        let index = |p: usize, q: usize, r: usize| ((p - 1) * m + (q - 1)) * m + (r - 1);
        let mut seen = vec![false; m * m * m];
        let mut orbits = Vec::new();
        for p in 1..n {
            for q in 1..n {
                for r in 1..n {
                    if seen[index(p, q, r)] {
                        continue;
                    }
                    let mut orbit = Vec::new();
                    let mut stack = vec![(p, q, r)];
                    seen[index(p, q, r)] = true;
                    while let Some(t @ (a, b, c)) = stack.pop() {
                        orbit.push(t);
                        for u in [(star[a], c, b), (c, star[b], a)] {
                            if !seen[index(u.0, u.1, u.2)] {
                                seen[index(u.0, u.1, u.2)] = true;
                                stack.push(u);
                            }
                        }
                    }
                    orbit.sort();
                    orbits.push(orbit);
                }
            }
        }
        orbits.sort();
        let mut pending_init = vec![0; n * n];
        for orbit in &orbits {
            let mut cells: Vec<usize> = orbit.iter().map(|&(p, q, _)| p * n + q).collect();
            cells.dedup();
            cells.sort();
            cells.dedup();
            for c in cells {
                pending_init[c] += 1;
            }
        }
        Search { n, star, orbits, pending_init }
    }

    fn base_cells(&self) -> Vec<ElementSet> {
        let n = self.n;
        let mut cells = vec![ElementSet::EMPTY; n * n];
        for p in 0..n {
            for q in 0..n {
                if p == IDENTITY {
                    cells[p * n + q] = ElementSet::singleton(q);
                } else if q == IDENTITY {
                    cells[p * n + q] = ElementSet::singleton(p);
                } else if q == self.star[p] {
                    cells[p * n + q] = ElementSet::singleton(IDENTITY);
                }
            }
        }
        cells
    }

    fn apply(&self, cells: &mut [ElementSet], pending: &mut [usize], orbit: usize, include: bool) {
        let n = self.n;
        let mut touched: Vec<usize> = Vec::new();
        for &(p, q, r) in &self.orbits[orbit] {
            if include {
                cells[p * n + q].insert(r);
            }
            touched.push(p * n + q);
        }
        touched.sort();
        touched.dedup();
        for c in touched {
            pending[c] -= 1;
        }
    }

    fn undo(&self, cells: &mut [ElementSet], pending: &mut [usize], orbit: usize, include: bool) {
        let n = self.n;
        let mut touched: Vec<usize> = Vec::new();
        for &(p, q, r) in &self.orbits[orbit] {
            if include {
                cells[p * n + q].remove(r);
            }
            touched.push(p * n + q);
        }
        touched.sort();
        touched.dedup();
        for c in touched {
            pending[c] += 1;
        }
    }

    /// Rejects partial tables with a decided empty cell or a decided
    /// associativity failure.
    fn consistent(&self, cells: &[ElementSet], pending: &[usize]) -> bool {
        let n = self.n;
        let done = |i: usize, j: usize| pending[i * n + j] == 0;
        for c in 0..n * n {
            if pending[c] == 0 && cells[c].is_empty() {
                return false;
            }
        }
        for p in 1..n {
            for q in 1..n {
                if !done(p, q) {
                    continue;
                }
                let pq = cells[p * n + q];
                'r: for r in 1..n {
                    if !done(q, r) {
                        continue;
                    }
                    let qr = cells[q * n + r];
                    let mut left = ElementSet::EMPTY;
                    for y in qr {
                        if !done(p, y) {
                            continue 'r;
                        }
                        left = left.union(cells[p * n + y]);
                    }
                    let mut right = ElementSet::EMPTY;
                    for x in pq {
                        if !done(x, r) {
                            continue 'r;
                        }
                        right = right.union(cells[x * n + r]);
                    }
                    if left != right {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn run(
        &self,
        cells: &mut Vec<ElementSet>,
        pending: &mut Vec<usize>,
        depth: usize,
        budget: &Budget,
        out: &mut Vec<Hypergroup>,
    ) -> Result<()> {
        if depth.is_multiple_of(4) {
            budget.check()?;
        }
        if !self.consistent(cells, pending) {
            return Ok(());
        }
        if depth == self.orbits.len() {
            let table = Table::new(self.n, cells.clone());
            let h = Hypergroup::new(table, Some(self.star.clone()))?;
            out.push(h);
            return Ok(());
        }
        for include in [false, true] {
            self.apply(cells, pending, depth, include);
            self.run(cells, pending, depth + 1, budget, out)?;
            self.undo(cells, pending, depth, include);
        }
        Ok(())
    }

    /// Fixes the first `prefix.len()` orbit decisions, then searches the rest.
    fn run_from(&self, prefix: &[bool], budget: &Budget) -> Result<Vec<Hypergroup>> {
        let mut cells = self.base_cells();
        let mut pending = self.pending_init.clone();
        for (k, &include) in prefix.iter().enumerate() {
            self.apply(&mut cells, &mut pending, k, include);
            if !self.consistent(&cells, &pending) {
                return Ok(Vec::new());
            }
        }
        let mut out = Vec::new();
        self.run(&mut cells, &mut pending, prefix.len(), budget, &mut out)?;
        Ok(out)
    }
}

fn check_order(order: usize, budget: &Budget) -> Result<()> {
    if order == 0 {
        return Err(Error::Precondition("order must be positive".into()));
    }
    if order > BUDGETED_MAX_ORDER || (order > DEFAULT_MAX_ORDER && !budget.is_limited()) {
        return Err(Error::Precondition(format!(
            "order {order} exceeds the enumeration bound ({DEFAULT_MAX_ORDER}, or {BUDGETED_MAX_ORDER} with a budget)"
        )));
    }
    Ok(())
}

/// One canonical representative per isomorphism class, in canonical order.
pub fn enumerate_hypergroups(order: usize, budget: &Budget) -> Result<Vec<Hypergroup>> {
    check_order(order, budget)?;
    if order == 1 {
        return Ok(vec![Hypergroup::cyclic(1)]);
    }
    let searches: Vec<Search> = (0..=(order - 1) / 2)
        .map(|pairs| Search::new(order, star_representative(order, pairs)))
        .collect();
    // Static partition on the first few orbit decisions of every star.
    let mut jobs = Vec::new();
    for (s, search) in searches.iter().enumerate() {
        let depth = search.orbits.len().min(4);
        for bits in 0..1u32 << depth {
            let prefix: Vec<bool> = (0..depth).map(|k| bits >> k & 1 == 1).collect();
            jobs.push((s, prefix));
        }
    }
    let found: Vec<Vec<Hypergroup>> = jobs
        .par_iter()
        .map(|(s, prefix)| searches[*s].run_from(prefix, budget))
        .collect::<Result<_>>()?;
    Ok(dedupe(found.into_iter().flatten()))
}

/// Enumerates and keeps the classes satisfying `filter`.
pub fn enumerate_filtered(
    order: usize,
    budget: &Budget,
    filter: impl Fn(&Hypergroup) -> bool + Sync,
) -> Result<Vec<Hypergroup>> {
    let all = enumerate_hypergroups(order, budget)?;
    let keep: Vec<bool> = all.par_iter().map(&filter).collect();
    Ok(all.into_iter().zip(keep).filter(|(_, k)| *k).map(|(h, _)| h).collect())
}

fn dedupe(hs: impl Iterator<Item = Hypergroup>) -> Vec<Hypergroup> {
    let mut classes: BTreeMap<CanonicalTable, Hypergroup> = BTreeMap::new();
    for h in hs {
        let (form, perm) = canonical_relabeling(&h);
        classes.entry(form).or_insert_with(|| h.relabel(&perm));
    }
    classes.into_values().collect()
}

/// Every table with the identity row and column in place and all other cells
/// arbitrary nonempty subsets, filtered through full validation and
/// canonicalized. Only feasible for order at most 3.
pub fn enumerate_by_brute_force(order: usize) -> Vec<Hypergroup> {
    assert!((1..=3).contains(&order), "brute force is only feasible up to order 3");
    let n = order;
    let free: Vec<(usize, usize)> = (1..n).flat_map(|i| (1..n).map(move |j| (i, j))).collect();
    let choices = (1u64 << n) - 1;
    let total = choices.pow(free.len() as u32);
    let mut valid = Vec::new();
    for code in 0..total {
        let mut rest = code;
        let mut cells = vec![ElementSet::EMPTY; n * n];
        for x in 0..n {
            cells[x] = ElementSet::singleton(x);
            cells[x * n] = ElementSet::singleton(x);
        }
        for &(i, j) in &free {
            cells[i * n + j] = ElementSet::from_bits(rest % choices + 1);
            rest /= choices;
        }
        if let Ok(h) = Hypergroup::new(Table::new(n, cells), None) {
            valid.push(h);
        }
    }
    dedupe(valid.into_iter())
}

/// Short stable hash of the canonical HGT text.
pub fn canonical_hash(h: &Hypergroup) -> String {
    let text = hgt::to_string(&canonicalize(h));
    let digest = Sha256::digest(text.as_bytes());
    hex::encode(&digest[..8])
}

pub fn catalog_file_name(order: usize, seq: usize) -> String {
    format!("h{order}_{seq:03}.hgt")
}

/// Writes `h<order>_<seq>.hgt` files plus `index.txt` (`hash order flags`).
///
/// `flags` supplies the third index column for each member.
pub fn write_catalog(
    dir: &Path,
    members: &[Hypergroup],
    flags: impl Fn(&Hypergroup) -> String,
) -> std::io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut index = String::new();
    let mut paths = Vec::new();
    let mut seq: BTreeMap<usize, usize> = BTreeMap::new();
    for h in members {
        let k = seq.entry(h.order()).or_insert(0);
        *k += 1;
        let path = dir.join(catalog_file_name(h.order(), *k));
        fs::write(&path, hgt::to_string(h))?;
        let _ = writeln!(index, "{} {} {}", canonical_hash(h), h.order(), flags(h));
        paths.push(path);
    }
    let index_path = dir.join("index.txt");
    let mut existing = fs::read_to_string(&index_path).unwrap_or_default();
    // Lines for other orders are kept so several runs can share a directory.
    let orders: Vec<usize> = seq.keys().copied().collect();
    existing = existing
        .lines()
        .filter(|l| {
            l.split_whitespace()
                .nth(1)
                .and_then(|o| o.parse::<usize>().ok())
                .is_some_and(|o| !orders.contains(&o))
        })
        .map(|l| format!("{l}\n"))
        .collect();
    existing.push_str(&index);
    let mut lines: Vec<&str> = existing.lines().collect();
    lines.sort_by_key(|l| l.split_whitespace().nth(1).and_then(|o| o.parse::<usize>().ok()));
    fs::write(&index_path, lines.iter().map(|l| format!("{l}\n")).collect::<String>())?;
    Ok(paths)
}

/// Reads every `*.hgt` in `dir`, sorted by file name.
pub fn read_catalog(dir: &Path) -> Result<Vec<(String, Hypergroup)>> {
    let mut names: Vec<String> = fs::read_dir(dir)
        .map_err(|e| Error::Precondition(format!("cannot read {}: {e}", dir.display())))?
        .filter_map(|e| e.ok())
        .map(|e| e.file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".hgt"))
        .collect();
    names.sort_by_key(|n| catalog_sort_key(n));
    names
        .into_iter()
        .map(|name| {
            let text = fs::read_to_string(dir.join(&name))
                .map_err(|e| Error::Precondition(format!("cannot read {name}: {e}")))?;
            Ok((name, hgt::parse(&text)?))
        })
        .collect()
}

fn catalog_sort_key(name: &str) -> (usize, usize, String) {
    let parsed = name
        .strip_prefix('h')
        .and_then(|s| s.strip_suffix(".hgt"))
        .and_then(|s| s.split_once('_'))
        .and_then(|(o, q)| Some((o.parse().ok()?, q.parse().ok()?)));
    match parsed {
        Some((o, q)) => (o, q, String::new()),
        None => (usize::MAX, 0, name.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{c2, k2, s3, t1, w3};

    #[test]
    fn relabelings() {
        let mut seen = Vec::new();
        for_each_relabeling(4, |p| seen.push(p.to_vec()));
        assert_eq!(seen.len(), 6);
        assert!(seen.iter().all(|p| p[0] == 0));
        let mut one = Vec::new();
        for_each_relabeling(1, |p| one.push(p.to_vec()));
        assert_eq!(one, vec![vec![0]]);
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(canonical_form(&t1()).cells, vec![ElementSet::from([0])]);
        let w3 = w3();
        let swapped = w3.relabel(&[0, 2, 1]);
        assert_ne!(swapped, w3);
        assert_eq!(canonical_form(&swapped), canonical_form(&w3));
        let c = canonicalize(&w3);
        assert_eq!(canonicalize(&c), c);
        assert_eq!(canonical_form(&c).cells, c.table().cells());
    }

    #[test]
    fn isomorphism() {
        assert!(!are_isomorphic(&c2(), &k2()));
        assert!(are_isomorphic(&w3(), &w3()));
        let q = crate::quotient::quotient(&w3(), ElementSet::from([0])).unwrap();
        assert!(are_isomorphic(&w3(), &q.quotient));
        let s3 = s3();
        let shuffled = s3.relabel(&[0, 3, 1, 2, 5, 4]);
        let iso = find_isomorphism(&s3, &shuffled).unwrap();
        assert!(iso.preserves_star);
        assert!(are_isomorphic(&s3, &shuffled));
        assert!(find_isomorphism(&c2(), &k2()).is_none());
    }

    #[test]
    fn small_orders() {
        let b = Budget::unlimited();
        assert_eq!(enumerate_hypergroups(1, &b).unwrap(), vec![t1()]);
        let two = enumerate_hypergroups(2, &b).unwrap();
        assert_eq!(two.len(), 2);
        assert!(two.iter().any(|h| are_isomorphic(h, &c2())));
        assert!(two.iter().any(|h| are_isomorphic(h, &k2())));
        let three = enumerate_hypergroups(3, &b).unwrap();
        assert!(three.iter().any(|h| are_isomorphic(h, &w3())));
    }

    #[test]
    fn order_bounds() {
        assert!(enumerate_hypergroups(0, &Budget::unlimited()).is_err());
        assert!(enumerate_hypergroups(5, &Budget::unlimited()).is_err());
        assert!(enumerate_hypergroups(6, &Budget::seconds(10.0)).is_err());
    }

    #[test]
    fn budget_exhaustion() {
        assert_eq!(enumerate_hypergroups(4, &Budget::seconds(0.0)), Err(Error::BudgetExceeded));
    }

    #[test]
    fn brute_force_order_two() {
        let classes = enumerate_by_brute_force(2);
        assert_eq!(classes.len(), 2);
    }
}
