//! Residually thin chains, valencies, p-subsets, Sylow p-subsets,
//! p-valencedness and solvability.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergroup::Hypergroup;
use crate::quotient::quotient;
use crate::set::ElementSet;
use crate::subsets::{
    all_chains, all_closed_subsets, generated_closed, is_strongly_normal, require_closed, shortest_chain,
    subnormal_chain_in, thin_step, ClosedSubsetLattice, NormalityMode,
};

/// `{1} = F_0 ⊊ ... ⊊ F_n = H` with every `F_i//F_{i-1}` (formed in `F_i`) thin.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RtChain {
    pub links: Vec<ElementSet>,
    pub quotient_orders: Vec<usize>,
}

impl RtChain {
    pub fn valency(&self) -> u64 {
        self.quotient_orders.iter().map(|&k| k as u64).product()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValencyRecord {
    pub valency: u64,
    pub witness: RtChain,
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&k| is_prime(k)).collect()
}

pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `n` is a power of `p`; `p^0 = 1` counts.
pub fn is_p_number(mut n: u64, p: u64) -> bool {
    if n == 0 {
        return false;
    }
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

fn chain_with_orders(h: &Hypergroup, links: Vec<ElementSet>) -> RtChain {
    let quotient_orders = links
        .windows(2)
        .map(|w| thin_step(h, w[0], w[1]).ok().flatten().expect("chain steps are thin"))
        .collect();
    RtChain { links, quotient_orders }
}

fn thin_edge(h: &Hypergroup, lo: ElementSet, up: ElementSet) -> bool {
    thin_step(h, lo, up).expect("lattice members are closed").is_some()
}

/// Shortest RT chain for the closed subset `top`, using closed subsets of `H`
/// inside it (which are exactly the closed subsets of the restriction).
pub fn rt_chain_within(h: &Hypergroup, lattice: &ClosedSubsetLattice, top: ElementSet) -> Option<RtChain> {
    let links = shortest_chain(&lattice.subsets, h.identity_set(), top, |lo, up| thin_edge(h, lo, up))?;
    Some(chain_with_orders(h, links))
}

pub fn all_rt_chains_within(h: &Hypergroup, lattice: &ClosedSubsetLattice, top: ElementSet) -> Vec<RtChain> {
    all_chains(&lattice.subsets, h.identity_set(), top, |lo, up| thin_edge(h, lo, up))
        .into_iter()
        .map(|links| chain_with_orders(h, links))
        .collect()
}

/// Shortest witness that `H` is residually thin.
pub fn rt_chain(h: &Hypergroup) -> Option<RtChain> {
    rt_chain_within(h, &all_closed_subsets(h), h.all())
}

pub fn is_rt(h: &Hypergroup) -> bool {
    rt_chain(h).is_some()
}

/// Valency of the closed subset `top`; every RT chain must agree.
pub fn valency_within(h: &Hypergroup, lattice: &ClosedSubsetLattice, top: ElementSet) -> Result<ValencyRecord> {
    let witness = rt_chain_within(h, lattice, top).ok_or(Error::UndefinedForNonRT)?;
    let valency = witness.valency();
    if let Some(other) = all_rt_chains_within(h, lattice, top).iter().find(|c| c.valency() != valency) {
        return Err(Error::HypothesisViolation(format!(
            "RT chains disagree on valency: {valency} vs {} along {:?}",
            other.valency(),
            other.links
        )));
    }
    Ok(ValencyRecord { valency, witness })
}

pub fn valency(h: &Hypergroup) -> Result<ValencyRecord> {
    valency_within(h, &all_closed_subsets(h), h.all())
}

/// Closed `C` whose restriction is RT with p-power valency.
pub fn is_p_subset(h: &Hypergroup, c: ElementSet, p: u64) -> Result<bool> {
    require_closed(h, c)?;
    Ok(is_p_number(valency_within(h, &all_closed_subsets(h), c)?.valency, p))
}

fn p_subset_in(h: &Hypergroup, lattice: &ClosedSubsetLattice, c: ElementSet, p: u64) -> Option<u64> {
    rt_chain_within(h, lattice, c).map(|w| w.valency()).filter(|&v| is_p_number(v, p))
}

/// Closed p-subsets `C` with `n_H / n_C` an integer coprime to `p`.
pub fn sylow_p_subsets(h: &Hypergroup, p: u64) -> Result<Vec<ElementSet>> {
    sylow_p_subsets_in(h, &all_closed_subsets(h), p)
}

pub fn sylow_p_subsets_in(h: &Hypergroup, lattice: &ClosedSubsetLattice, p: u64) -> Result<Vec<ElementSet>> {
    let n_h = rt_chain_within(h, lattice, h.all()).ok_or(Error::UndefinedForNonRT)?.valency();
    Ok(lattice
        .iter()
        .filter(|&c| {
            p_subset_in(h, lattice, c, p).is_some_and(|n_c| n_h % n_c == 0 && (n_h / n_c) % p != 0)
        })
        .collect())
}

/// How `(h*)^U h^U ∈ O_ϑ(H//U)` selects the pairs that constrain p-valencedness.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PValencedReading {
    /// The product is a single thin element of `H//U`. Taken literally this
    /// makes every element p-valenced, since `|{t}| = 1`.
    Singleton,
    /// Every element of the product is thin in `H//U`.
    #[default]
    Subset,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PValencedCheck {
    pub element: usize,
    pub by: ElementSet,
    /// Product in `H//U`, as class indices.
    pub product: ElementSet,
    pub qualifies: bool,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PValencedRecord {
    pub prime: u64,
    pub reading: PValencedReading,
    pub holds: bool,
    pub checks: Vec<PValencedCheck>,
    /// Subnormal closed subsets skipped because their valency is undefined.
    pub excluded_non_rt: Vec<ElementSet>,
}

pub fn is_p_valenced(h: &Hypergroup, p: u64) -> Result<bool> {
    Ok(p_valenced_record(h, &all_closed_subsets(h), p, PValencedReading::default())?.holds)
}

pub fn p_valenced_record(
    h: &Hypergroup,
    lattice: &ClosedSubsetLattice,
    p: u64,
    reading: PValencedReading,
) -> Result<PValencedRecord> {
    if rt_chain_within(h, lattice, h.all()).is_none() {
        return Err(Error::UndefinedForNonRT);
    }
    let mut checks = Vec::new();
    let mut excluded_non_rt = Vec::new();
    for u in lattice.iter() {
        if subnormal_chain_in(h, lattice, u, NormalityMode::Normal)?.is_none() {
            continue;
        }
        let Some(n_u) = rt_chain_within(h, lattice, u).map(|c| c.valency()) else {
            excluded_non_rt.push(u);
            continue;
        };
        if !is_p_number(n_u, p) {
            continue;
        }
        let q = quotient(h, u)?;
        let thin = q.quotient.thin_elements();
        for x in 0..h.order() {
            let product = q.quotient.product(q.class_of[h.star_of(x)], q.class_of[x]);
            let qualifies = match reading {
                PValencedReading::Singleton => product.len() == 1 && product.is_subset(thin),
                PValencedReading::Subset => product.is_subset(thin),
            };
            let ok = !qualifies || is_p_number(product.len() as u64, p);
            checks.push(PValencedCheck { element: x, by: u, product, qualifies, ok });
        }
    }
    let holds = checks.iter().all(|c| c.ok);
    Ok(PValencedRecord { prime: p, reading, holds, checks, excluded_non_rt })
}

/// Subnormal closed p-subsets of `H`.
pub fn subnormal_p_subsets(h: &Hypergroup, lattice: &ClosedSubsetLattice, p: u64) -> Vec<ElementSet> {
    lattice
        .iter()
        .filter(|&c| p_subset_in(h, lattice, c, p).is_some())
        .filter(|&c| subnormal_chain_in(h, lattice, c, NormalityMode::Normal).ok().flatten().is_some())
        .collect()
}

/// The strongly normal p-subset generated by all subnormal p-subsets.
pub fn o_p(h: &Hypergroup, p: u64) -> Result<ElementSet> {
    o_p_in(h, &all_closed_subsets(h), p, PValencedReading::default())
}

pub fn o_p_in(h: &Hypergroup, lattice: &ClosedSubsetLattice, p: u64, reading: PValencedReading) -> Result<ElementSet> {
    if !p_valenced_record(h, lattice, p, reading)?.holds {
        return Err(Error::HypothesisViolation(format!("not {p}-valenced")));
    }
    let union = subnormal_p_subsets(h, lattice, p)
        .into_iter()
        .fold(ElementSet::EMPTY, ElementSet::union);
    let o = generated_closed(h, union);
    if !is_strongly_normal(h, o)? {
        return Err(Error::HypothesisViolation(format!("O_{p} = {o} is not strongly normal")));
    }
    if p_subset_in(h, lattice, o, p).is_none() {
        return Err(Error::HypothesisViolation(format!("O_{p} = {o} is not a {p}-subset")));
    }
    Ok(o)
}

/// RT with p-power valency.
pub fn is_p_hypergroup(h: &Hypergroup, p: u64) -> bool {
    rt_chain(h).is_some_and(|c| is_p_number(c.valency(), p))
}

/// Shortest chain `{1} = F_0 ⊊ ... ⊊ F_n = H` whose steps are thin of prime order.
pub fn is_solvable(h: &Hypergroup) -> (bool, Option<RtChain>) {
    let chain = solvable_chain_in(h, &all_closed_subsets(h));
    (chain.is_some(), chain)
}

pub fn solvable_chain_in(h: &Hypergroup, lattice: &ClosedSubsetLattice) -> Option<RtChain> {
    let links = shortest_chain(&lattice.subsets, h.identity_set(), h.all(), |lo, up| {
        thin_step(h, lo, up)
            .expect("lattice members are closed")
            .is_some_and(|k| is_prime(k as u64))
    })?;
    Some(chain_with_orders(h, links))
}
