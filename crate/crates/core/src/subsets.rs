//! Closed subsets, generated closures, the closed-subset lattice and normality.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::hypergroup::{Hypergroup, Table, IDENTITY};
use crate::quotient::quotient;
use crate::set::ElementSet;

/// `F*F ⊆ F` for nonempty `F`.
pub fn is_closed(h: &Hypergroup, f: ElementSet) -> Result<bool> {
    if f.is_empty() {
        return Err(Error::EmptySubset);
    }
    Ok(closed(h, f))
}

#[inline]
pub(crate) fn closed(h: &Hypergroup, f: ElementSet) -> bool {
    !f.is_empty() && h.set_product(h.star_of_set(f), f).is_subset(f)
}

/// The three-part criterion: `1 ∈ A`, `A* ⊆ A` and `AA ⊆ A`.
pub fn satisfies_closure_criterion(h: &Hypergroup, a: ElementSet) -> bool {
    a.contains(IDENTITY) && h.star_of_set(a).is_subset(a) && h.set_product(a, a).is_subset(a)
}

pub(crate) fn require_closed(h: &Hypergroup, f: ElementSet) -> Result<()> {
    if closed(h, f) {
        Ok(())
    } else {
        Err(Error::NotClosed(f))
    }
}

/// Least closed subset containing `a`.
pub fn generated_closed(h: &Hypergroup, a: ElementSet) -> ElementSet {
    let mut s = a.union(h.identity_set());
    loop {
        let next = s.union(h.star_of_set(s)).union(h.set_product(s, s));
        if next == s {
            return s;
        }
        s = next;
    }
}

/// A closed subset viewed as a hypergroup in its own right.
#[derive(Debug, Clone)]
pub struct Restriction {
    pub hypergroup: Hypergroup,
    /// `members[k]` is the parent index of local element `k`.
    pub members: Vec<usize>,
}

impl Restriction {
    /// Parent subset -> local indices. Parent elements outside the subset are dropped.
    pub fn to_local(&self, s: ElementSet) -> ElementSet {
        self.members
            .iter()
            .enumerate()
            .filter(|(_, &m)| s.contains(m))
            .map(|(k, _)| k)
            .collect()
    }

    pub fn to_parent(&self, s: ElementSet) -> ElementSet {
        s.iter().map(|k| self.members[k]).collect()
    }
}

pub fn restriction(h: &Hypergroup, f: ElementSet) -> Result<Restriction> {
    require_closed(h, f)?;
    let members = f.to_vec();
    let mut local = vec![usize::MAX; h.order()];
    for (k, &m) in members.iter().enumerate() {
        local[m] = k;
    }
    let table = Table::from_fn(members.len(), |i, j| {
        h.product(members[i], members[j]).iter().map(|x| local[x]).collect()
    });
    let star = members.iter().map(|&m| local[h.star_of(m)]).collect();
    Ok(Restriction { hypergroup: Hypergroup::from_trusted(table, star), members })
}

/// The sub-hypergroup on a closed subset, re-indexed in ascending order.
pub fn restrict(h: &Hypergroup, f: ElementSet) -> Result<Hypergroup> {
    Ok(restriction(h, f)?.hypergroup)
}

/// `Fh ⊆ hF` for every `h ∈ H`.
pub fn is_normal(h: &Hypergroup, f: ElementSet) -> Result<bool> {
    require_closed(h, f)?;
    Ok(normal(h, f))
}

fn normal(h: &Hypergroup, f: ElementSet) -> bool {
    (0..h.order()).all(|x| {
        let x = ElementSet::singleton(x);
        h.set_product(f, x).is_subset(h.set_product(x, f))
    })
}

/// `h*Fh ⊆ F` for every `h ∈ H`.
pub fn is_strongly_normal(h: &Hypergroup, f: ElementSet) -> Result<bool> {
    require_closed(h, f)?;
    Ok(strongly_normal(h, f))
}

fn strongly_normal(h: &Hypergroup, f: ElementSet) -> bool {
    (0..h.order()).all(|x| {
        let left = h.set_product(ElementSet::singleton(h.star_of(x)), f);
        h.set_product(left, ElementSet::singleton(x)).is_subset(f)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormalityMode {
    Normal,
    StronglyNormal,
}

/// Whether closed `e ⊆ f` is (strongly) normal in the sub-hypergroup on `f`.
pub fn is_normal_in(h: &Hypergroup, e: ElementSet, f: ElementSet, mode: NormalityMode) -> Result<bool> {
    require_closed(h, e)?;
    if !e.is_subset(f) {
        return Err(Error::Precondition(format!("{e} is not contained in {f}")));
    }
    let r = restriction(h, f)?;
    let local = r.to_local(e);
    Ok(match mode {
        NormalityMode::Normal => normal(&r.hypergroup, local),
        NormalityMode::StronglyNormal => strongly_normal(&r.hypergroup, local),
    })
}

/// Whether the step quotient of `e ⊆ f`, formed inside `f`, is thin; returns
/// its order when it is.
pub(crate) fn thin_step(h: &Hypergroup, e: ElementSet, f: ElementSet) -> Result<Option<usize>> {
    let r = restriction(h, f)?;
    let q = quotient(&r.hypergroup, r.to_local(e))?;
    Ok(q.quotient.is_thin().then(|| q.quotient.order()))
}

/// All closed subsets of a hypergroup with inclusion data and normality flags.
#[derive(Debug, Clone, Serialize)]
pub struct ClosedSubsetLattice {
    /// Sorted by cardinality, then lexicographically.
    pub subsets: Vec<ElementSet>,
    /// Covering pairs `(lower, upper)` as indices into `subsets`.
    pub covers: Vec<(usize, usize)>,
    pub normal: Vec<bool>,
    pub strongly_normal: Vec<bool>,
    pub maximal: Vec<bool>,
}

impl ClosedSubsetLattice {
    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn index_of(&self, s: ElementSet) -> Option<usize> {
        self.subsets.iter().position(|&x| x == s)
    }

    pub fn contains(&self, s: ElementSet) -> bool {
        self.index_of(s).is_some()
    }

    pub fn iter(&self) -> impl Iterator<Item = ElementSet> + '_ {
        self.subsets.iter().copied()
    }

    pub fn strongly_normal_subsets(&self) -> impl Iterator<Item = ElementSet> + '_ {
        self.iter().zip(&self.strongly_normal).filter(|(_, &f)| f).map(|(s, _)| s)
    }

    pub fn normal_subsets(&self) -> impl Iterator<Item = ElementSet> + '_ {
        self.iter().zip(&self.normal).filter(|(_, &f)| f).map(|(s, _)| s)
    }

    pub fn maximal_subsets(&self) -> Vec<ElementSet> {
        self.iter().zip(&self.maximal).filter(|(_, &f)| f).map(|(s, _)| s).collect()
    }

    /// Closed subsets between `lo` and `hi` inclusive.
    pub fn interval(&self, lo: ElementSet, hi: ElementSet) -> impl Iterator<Item = ElementSet> + '_ {
        self.iter().filter(move |s| lo.is_subset(*s) && s.is_subset(hi))
    }
}

fn sort_subsets(set: BTreeSet<ElementSet>) -> Vec<ElementSet> {
    let mut v: Vec<ElementSet> = set.into_iter().collect();
    v.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    v
}

/// Closed subsets via closures of singletons, closed under joins.
pub fn all_closed_subsets(h: &Hypergroup) -> ClosedSubsetLattice {
    all_closed_subsets_within(h, &Budget::unlimited()).expect("unlimited budget")
}

pub fn all_closed_subsets_within(h: &Hypergroup, budget: &Budget) -> Result<ClosedSubsetLattice> {
    let mut found = BTreeSet::new();
    let mut queue = VecDeque::new();
    for x in 0..h.order() {
        let c = generated_closed(h, ElementSet::singleton(x));
        if found.insert(c) {
            queue.push_back(c);
        }
    }
    while let Some(c) = queue.pop_front() {
        budget.check()?;
        let known: Vec<ElementSet> = found.iter().copied().collect();
        for d in known {
            let j = generated_closed(h, c.union(d));
            if found.insert(j) {
                queue.push_back(j);
            }
        }
    }
    Ok(build_lattice(h, sort_subsets(found)))
}

/// Exhaustive scan of all `2^n` subsets.
pub fn closed_subsets_by_scan(h: &Hypergroup) -> Vec<ElementSet> {
    let n = h.order();
    assert!(n <= 20, "full scan is only meant for small orders");
    let found = (1u64..1 << n).map(ElementSet::from_bits).filter(|&s| closed(h, s)).collect();
    sort_subsets(found)
}

fn build_lattice(h: &Hypergroup, subsets: Vec<ElementSet>) -> ClosedSubsetLattice {
    let k = subsets.len();
    let mut covers = Vec::new();
    for (i, &a) in subsets.iter().enumerate() {
        for (j, &b) in subsets.iter().enumerate() {
            if i != j && a.is_subset(b) {
                let between = subsets.iter().any(|&c| c != a && c != b && a.is_subset(c) && c.is_subset(b));
                if !between {
                    covers.push((i, j));
                }
            }
        }
    }
    let all = h.all();
    let normal = subsets.iter().map(|&s| normal(h, s)).collect();
    let strongly_normal = subsets.iter().map(|&s| strongly_normal(h, s)).collect();
    let maximal = (0..k)
        .map(|i| subsets[i] != all && covers.iter().any(|&(a, b)| a == i && subsets[b] == all))
        .collect();
    ClosedSubsetLattice { subsets, covers, normal, strongly_normal, maximal }
}

/// Proper closed subsets with no closed subset strictly between them and `H`.
pub fn maximal_closed_subsets(h: &Hypergroup) -> Vec<ElementSet> {
    all_closed_subsets(h).maximal_subsets()
}

/// Intersection of all strongly normal closed subsets.
pub fn thin_residue(h: &Hypergroup) -> ElementSet {
    thin_residue_of(h, &all_closed_subsets(h))
}

pub fn thin_residue_of(h: &Hypergroup, lattice: &ClosedSubsetLattice) -> ElementSet {
    lattice.strongly_normal_subsets().fold(h.all(), ElementSet::intersection)
}

/// An ascending chain `F = F_0 ⊆ ... ⊆ F_n = H` of closed subsets, each link
/// (strongly) normal in the next.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubnormalChain {
    pub links: Vec<ElementSet>,
    pub mode: NormalityMode,
}

/// Shortest ascending chain from `from` to `to` through `nodes` whose every
/// step `(lower, upper)` with `lower ⊊ upper` satisfies `step`. Among shortest
/// chains the lexicographically least link sequence wins.
pub(crate) fn shortest_chain(
    nodes: &[ElementSet],
    from: ElementSet,
    to: ElementSet,
    mut step: impl FnMut(ElementSet, ElementSet) -> bool,
) -> Option<Vec<ElementSet>> {
    let nodes: Vec<ElementSet> = {
        let mut v: Vec<ElementSet> = nodes
            .iter()
            .copied()
            .filter(|s| from.is_subset(*s) && s.is_subset(to))
            .collect();
        v.sort();
        v.dedup();
        v
    };
    let k = nodes.len();
    let start = nodes.iter().position(|&s| s == from)?;
    let goal = nodes.iter().position(|&s| s == to)?;
    let mut edges = vec![Vec::new(); k];
    for i in 0..k {
        for j in 0..k {
            if i != j && nodes[i].is_subset(nodes[j]) && step(nodes[i], nodes[j]) {
                edges[i].push(j);
            }
        }
    }
    // Distance to the goal, by reverse BFS.
    let mut dist = vec![usize::MAX; k];
    dist[goal] = 0;
    let mut queue = VecDeque::from([goal]);
    while let Some(v) = queue.pop_front() {
        for u in 0..k {
            if dist[u] == usize::MAX && edges[u].contains(&v) {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
    if dist[start] == usize::MAX {
        return None;
    }
    // Nodes are sorted, so the first qualifying successor is the least.
    let mut chain = vec![nodes[start]];
    let mut cur = start;
    while cur != goal {
        cur = *edges[cur].iter().find(|&&u| dist[u] != usize::MAX && dist[u] + 1 == dist[cur]).unwrap();
        chain.push(nodes[cur]);
    }
    Some(chain)
}

/// Every strictly ascending chain from `from` to `to` through `nodes` whose
/// steps satisfy `step`.
pub(crate) fn all_chains(
    nodes: &[ElementSet],
    from: ElementSet,
    to: ElementSet,
    mut step: impl FnMut(ElementSet, ElementSet) -> bool,
) -> Vec<Vec<ElementSet>> {
    let mut nodes: Vec<ElementSet> = nodes
        .iter()
        .copied()
        .filter(|s| from.is_subset(*s) && s.is_subset(to))
        .collect();
    nodes.sort();
    nodes.dedup();
    let k = nodes.len();
    let mut edges = vec![Vec::new(); k];
    for i in 0..k {
        for j in 0..k {
            if i != j && nodes[i].is_subset(nodes[j]) && step(nodes[i], nodes[j]) {
                edges[i].push(j);
            }
        }
    }
    let (Some(start), Some(goal)) = (
        nodes.iter().position(|&s| s == from),
        nodes.iter().position(|&s| s == to),
    ) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    let mut path = vec![start];
    fn walk(edges: &[Vec<usize>], goal: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let cur = *path.last().unwrap();
        if cur == goal {
            out.push(path.clone());
            return;
        }
        for &next in &edges[cur] {
            path.push(next);
            walk(edges, goal, path, out);
            path.pop();
        }
    }
    walk(&edges, goal, &mut path, &mut out);
    out.into_iter().map(|p| p.into_iter().map(|i| nodes[i]).collect()).collect()
}

/// Shortest witness that closed `f` is (strongly) subnormal in `H`, if any.
pub fn subnormal_chain(h: &Hypergroup, f: ElementSet, mode: NormalityMode) -> Result<Option<SubnormalChain>> {
    subnormal_chain_in(h, &all_closed_subsets(h), f, mode)
}

pub fn subnormal_chain_in(
    h: &Hypergroup,
    lattice: &ClosedSubsetLattice,
    f: ElementSet,
    mode: NormalityMode,
) -> Result<Option<SubnormalChain>> {
    require_closed(h, f)?;
    let links = shortest_chain(&lattice.subsets, f, h.all(), |e, g| {
        is_normal_in(h, e, g, mode).expect("lattice members are closed")
    });
    Ok(links.map(|links| SubnormalChain { links, mode }))
}
