//! Executable statement checks over single hypergroups and whole catalogs, and
//! counterexample searches for the open questions about weak nilpotency.
//!
//! Every check separates "hypotheses fail" (not applicable) from "hypotheses
//! hold but nothing to test" (vacuous), so coverage over a catalog shows which
//! statements were genuinely exercised.

use std::cell::OnceCell;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{
    all_rt_chains_within, is_p_number, o_p_in, p_valenced_record, prime_divisors, primes_up_to, rt_chain_within,
    solvable_chain_in, subnormal_p_subsets, sylow_p_subsets_in, PValencedReading, RtChain,
};
use crate::budget::Budget;
use crate::enumerate::{canonical_form, canonical_hash, enumerate_hypergroups};
use crate::error::{Error, Result};
use crate::hgt;
use crate::hypergroup::Hypergroup;
use crate::oracle::NaiveHypergroup;
use crate::quotient::quotient;
use crate::series::{center, central_series, is_central_series, upper_center_series, weakly_nilpotent, UpperCenterSeries};
use crate::set::ElementSet;
use crate::subsets::{
    all_closed_subsets, closed, is_normal, is_strongly_normal, restrict, satisfies_closure_criterion,
    subnormal_chain_in, thin_residue_of, ClosedSubsetLattice, NormalityMode,
};

macro_rules! checks {
    ($($variant:ident => $id:literal, $what:literal;)*) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum Check {
            $($variant,)*
        }

        impl Check {
            pub const ALL: &'static [Check] = &[$(Check::$variant,)*];

            pub fn id(self) -> &'static str {
                match self {
                    $(Check::$variant => $id,)*
                }
            }

            /// One-line statement of what is checked.
            pub fn statement(self) -> &'static str {
                match self {
                    $(Check::$variant => $what,)*
                }
            }
        }
    };
}

checks! {
    ClosedSubsetsWeaklyNilpotent => "closed-subsets-weakly-nilpotent",
        "closed subsets of a weakly nilpotent hypergroup are weakly nilpotent";
    QuotientsWeaklyNilpotent => "quotients-weakly-nilpotent",
        "H//T is weakly nilpotent for weakly nilpotent H and closed T";
    ClosedSubsetsStronglySubnormal => "closed-subsets-strongly-subnormal",
        "closed subsets of a finite weakly nilpotent hypergroup are strongly subnormal; maximal ones are strongly normal";
    WeaklyNilpotentSolvable => "weakly-nilpotent-solvable",
        "weakly nilpotent RT H, p-valenced for a prime p | n_H, is solvable";
    SylowStronglyNormal => "sylow-strongly-normal",
        "in weakly nilpotent RT p-valenced H with p | n_H every Sylow p-subset is strongly normal";
    ClosedCriterion => "closed-criterion",
        "A is closed iff 1 in A, A* within A and AA within A";
    StarReversesProducts => "star-reverses-products",
        "(AB)* = B*A* for all subsets A, B";
    StronglyNormalIffThinQuotient => "strongly-normal-iff-thin-quotient",
        "closed F is strongly normal iff H//F is thin";
    StronglyNormalInheritsPValenced => "strongly-normal-inherits-p-valenced",
        "strongly normal closed subsets of a p-valenced hypergroup are p-valenced";
    CenterSeriesNormal => "center-series-normal",
        "Z(H) and every Z_n(H) are normal closed subsets";
    CentralCosets => "central-cosets",
        "x^T is central in H//T for x in Z(H) and closed T";
    CentralSeriesBelowUpperCenter => "central-series-below-upper-center",
        "the ascending terms T_i of a central series satisfy T_i within Z_i(H)";
    CentralSeriesIffWeaklyNilpotent => "central-series-iff-weakly-nilpotent",
        "H has a central series iff H is weakly nilpotent";
    NontrivialCenter => "nontrivial-center",
        "a weakly nilpotent hypergroup of order > 1 has Z(H) != 1";
    PHypergroupSolvable => "p-hypergroup-solvable",
        "a finite RT hypergroup of p-power valency is solvable";
    OpInSylow => "o-p-in-sylow",
        "for RT p-valenced H, O_p(H) is a strongly normal p-subset containing every subnormal p-subset and lying in every Sylow p-subset";
    CenterQuotient => "center-quotient",
        "H//Z(H) is weakly nilpotent iff H is";
    HypercenterQuotient => "hypercenter-quotient",
        "H//Z_inf(H) is weakly nilpotent iff H is";
    QuotientWellFormed => "quotient-well-formed",
        "double cosets of every closed F partition H and define a hypergroup independent of representatives";
    ValencyChainIndependent => "valency-chain-independent",
        "all RT chains of an RT closed subset give the same valency";
    ValencyMultiplicative => "valency-multiplicative",
        "n_F n_{H//F} = n_H for strongly normal F of RT H with RT restriction and quotient";
    DoubleQuotient => "double-quotient",
        "(H//N)//(F//N) is isomorphic to H//F for normal closed N within closed F";
    StrongNormalityCorrespondence => "strong-normality-correspondence",
        "F//N is strongly normal in H//N iff F is strongly normal in H";
    ThinResidue => "thin-residue",
        "the thin residue is strongly normal, has a thin quotient, and is trivial iff H is thin";
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .iter()
            .copied()
            .find(|c| c.id() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown check `{s}`")))
    }
}

impl Serialize for Check {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.id())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Holds,
    HoldsVacuously,
    NotApplicable,
    Fails,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremCheckResult {
    pub check: Check,
    pub hypergroup: String,
    pub hypotheses_satisfied: bool,
    /// `None` when the hypotheses fail.
    pub conclusion_holds: Option<bool>,
    /// Number of individual instances of the conclusion that were evaluated.
    pub instances: usize,
    pub outcome: Outcome,
    /// Present iff the hypotheses hold and the conclusion fails.
    pub counterexample: Option<String>,
}

impl TheoremCheckResult {
    pub fn fails(&self) -> bool {
        self.outcome == Outcome::Fails
    }
}

/// Counts instances and keeps the first failing one.
#[derive(Default)]
struct Tally {
    instances: usize,
    counterexample: Option<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok && self.counterexample.is_none() {
            self.counterexample = Some(witness());
        }
    }

    /// An error from the library while evaluating an instance counts against it.
    fn check_result(&mut self, r: Result<bool>, witness: impl FnOnce() -> String) {
        match r {
            Ok(ok) => self.check(ok, witness),
            Err(e) => self.check(false, || format!("{}: {e}", witness())),
        }
    }
}

/// Cached analysis shared by all checks of one hypergroup.
pub struct Context<'a> {
    pub h: &'a Hypergroup,
    pub lattice: ClosedSubsetLattice,
    pub series: UpperCenterSeries,
    pub center: ElementSet,
    pub rt: Option<RtChain>,
    pub reading: PValencedReading,
    solvable: OnceCell<Option<RtChain>>,
}

impl<'a> Context<'a> {
    pub fn new(h: &'a Hypergroup, reading: PValencedReading) -> Result<Self> {
        let lattice = all_closed_subsets(h);
        let rt = rt_chain_within(h, &lattice, h.all());
        Ok(Context {
            h,
            series: upper_center_series(h)?,
            center: center(h),
            rt,
            lattice,
            reading,
            solvable: OnceCell::new(),
        })
    }

    pub fn weakly_nilpotent(&self) -> bool {
        self.series.is_exhaustive
    }

    pub fn valency(&self) -> Option<u64> {
        self.rt.as_ref().map(RtChain::valency)
    }

    pub fn solvable(&self) -> bool {
        self.solvable.get_or_init(|| solvable_chain_in(self.h, &self.lattice)).is_some()
    }

    pub fn p_valenced(&self, p: u64) -> Result<bool> {
        Ok(p_valenced_record(self.h, &self.lattice, p, self.reading)?.holds)
    }

    /// Primes `p | n_H` for which `H` is p-valenced.
    fn valenced_divisors(&self) -> Vec<u64> {
        let Some(n_h) = self.valency() else { return Vec::new() };
        prime_divisors(n_h).into_iter().filter(|&p| self.p_valenced(p).unwrap_or(false)).collect()
    }

    /// Primes up to `max(|H|, n_H)` for which RT `H` is p-valenced.
    fn valenced_primes(&self) -> Vec<u64> {
        let Some(n_h) = self.valency() else { return Vec::new() };
        primes_up_to(n_h.max(self.h.order() as u64))
            .into_iter()
            .filter(|&p| self.p_valenced(p).unwrap_or(false))
            .collect()
    }

    /// `(N, F)` with `N ⊆ F` closed and `N` normal.
    fn normal_pairs(&self) -> Vec<(ElementSet, ElementSet)> {
        let mut out = Vec::new();
        for n in self.lattice.normal_subsets() {
            for f in self.lattice.iter().filter(|f| n.is_subset(*f)) {
                out.push((n, f));
            }
        }
        out
    }

    pub fn run(&self, check: Check, id: &str) -> TheoremCheckResult {
        let (hypotheses, tally) = match check {
            Check::ClosedSubsetsWeaklyNilpotent => self.closed_subsets_weakly_nilpotent(),
            Check::QuotientsWeaklyNilpotent => self.quotients_weakly_nilpotent(),
            Check::ClosedSubsetsStronglySubnormal => self.closed_subsets_strongly_subnormal(),
            Check::WeaklyNilpotentSolvable => self.weakly_nilpotent_solvable(),
            Check::SylowStronglyNormal => self.sylow_strongly_normal(),
            Check::ClosedCriterion => self.closed_criterion(),
            Check::StarReversesProducts => self.star_reverses_products(),
            Check::StronglyNormalIffThinQuotient => self.strongly_normal_iff_thin_quotient(),
            Check::StronglyNormalInheritsPValenced => self.strongly_normal_inherits_p_valenced(),
            Check::CenterSeriesNormal => self.center_series_normal(),
            Check::CentralCosets => self.central_cosets(),
            Check::CentralSeriesBelowUpperCenter => self.central_series_below_upper_center(),
            Check::CentralSeriesIffWeaklyNilpotent => self.central_series_iff_weakly_nilpotent(),
            Check::NontrivialCenter => self.nontrivial_center(),
            Check::PHypergroupSolvable => self.p_hypergroup_solvable(),
            Check::OpInSylow => self.o_p_in_sylow(),
            Check::CenterQuotient => self.quotient_equivalence(self.center, "Z(H)"),
            Check::HypercenterQuotient => self.quotient_equivalence(self.series.hypercenter(), "Z_inf(H)"),
            Check::QuotientWellFormed => self.quotient_well_formed(),
            Check::ValencyChainIndependent => self.valency_chain_independent(),
            Check::ValencyMultiplicative => self.valency_multiplicative(),
            Check::DoubleQuotient => self.double_quotient(),
            Check::StrongNormalityCorrespondence => self.strong_normality_correspondence(),
            Check::ThinResidue => self.thin_residue(),
        };
        finish(check, id, hypotheses, tally)
    }

    fn closed_subsets_weakly_nilpotent(&self) -> (bool, Tally) {
        let mut t = Tally::default();
        if self.weakly_nilpotent() {
            for f in self.lattice.iter() {
                t.check_result(restrict(self.h, f).map(|r| weakly_nilpotent(&r)), || {
                    format!("closed subset {f} is not weakly nilpotent")
                });
            }
        }
        (self.weakly_nilpotent(), t)
    }

    fn quotients_weakly_nilpotent(&self) -> (bool, Tally) {
        let mut t = Tally::default();
        if self.weakly_nilpotent() {
            for f in self.lattice.iter() {
                t.check_result(quotient(self.h, f).map(|q| weakly_nilpotent(&q.quotient)), || {
                    format!("H//{f} is not weakly nilpotent")
                });
            }
        }
        (self.weakly_nilpotent(), t)
    }

    fn closed_subsets_strongly_subnormal(&self) -> (bool, Tally) {
        let mut t = Tally::default();
        if self.weakly_nilpotent() {
            for f in self.lattice.iter() {
                let chain = subnormal_chain_in(self.h, &self.lattice, f, NormalityMode::StronglyNormal);
                t.check_result(chain.map(|c| c.is_some()), || format!("{f} is not strongly subnormal"));
            }
            for m in self.lattice.maximal_subsets() {
                t.check_result(is_strongly_normal(self.h, m), || {
                    format!("maximal closed subset {m} is not strongly normal")
                });
            }
        }
        (self.weakly_nilpotent(), t)
    }

    fn weakly_nilpotent_solvable(&self) -> (bool, Tally) {
        let mut t = Tally::default();
        let primes = if self.weakly_nilpotent() { self.valenced_divisors() } else { Vec::new() };
        if !primes.is_empty() {
            t.check(self.solvable(), || format!("not solvable although p-valenced for p in {primes:?}"));
        }
        (!primes.is_empty(), t)
    }

    fn sylow_strongly_normal(&self) -> (bool, Tally) {
        let mut t = Tally::default();
        let primes = if self.weakly_nilpotent() { self.valenced_divisors() } else { Vec::new() };
        for &p in &primes {
            match sylow_p_subsets_in(self.h, &self.lattice, p) {
                Ok(sylows) => {
                    for s in sylows {
                        t.check_result(is_strongly_normal(self.h, s), || {
                            format!("Sylow {p}-subset {s} is not strongly normal")
                        });
                    }
                }
                Err(e) => t.check(false, || format!("Sylow {p}-subsets: {e}")),
            }
        }
        (!primes.is_empty(), t)
    }

    fn closed_criterion(&self) -> (bool, Tally) {
        let mut t = Tally::default();
        let n = self.h.order();
        if n <= 16 {
            for bits in 1u64..1 << n {
                let a = ElementSet::from_bits(bits);
                t.check(closed(self.h, a) == satisfies_closure_criterion(self.h, a), || {
                    format!("closedness and the three-part criterion disagree on {a}")
                });
            }
        } else {
            for a in self.lattice.iter() {
                t.check(satisfies_closure_criterion(self.h, a), || format!("closed {a} fails the criterion"));
            }
        }
        (true, t)
    }

    fn star_reverses_products(&self) -> (bool, Tally) {
        let mut t = Tally::default();
        let n = self.h.order();
        let subsets: Vec<ElementSet> = if n <= 6 {
            (1u64..1 << n).map(ElementSet::from_bits).collect()
        } else {
            (0..n).map(ElementSet::singleton).chain(self.lattice.iter()).collect()
        };
        for &a in &subsets {
            for &b in &subsets {
                let h = self.h;
                let lhs = h.star_of_set(h.set_product(a, b));
                let rhs = h.set_product(h.star_of_set(b), h.star_of_set(a));
                t.check(lhs == rhs, || format!("(AB)* != B*A* for A = {a}, B = {b}"));
            }
        }
        (true, t)
    }

    fn strongly_normal_iff_thin_quotient(&self) -> (bool, Tally) {
        let mut t = Tally::default();
        for f in self.lattice.iter() {
            let r = is_strongly_normal(self.h, f)
                .and_then(|sn| Ok(sn == quotient(self.h, f)?.quotient.is_thin()));
            t.check_result(r, || format!("strong normality of {f} and thinness of H//{f} disagree"));
        }
        (true, t)
    }

    fn strongly_normal_inherits_p_valenced(&self) -> (bool, Tally) {
        let mut t = Tally::default();
        let primes = self.valenced_primes();
        for &p in &primes {
            for f in self.lattice.strongly_normal_subsets() {
                let r = restrict(self.h, f).and_then(|r| {
                    Ok(p_valenced_record(&r, &all_closed_subsets(&r), p, self.reading)?.holds)
                });
                t.check_result(r, || format!("strongly normal {f} is not {p}-valenced"));
            }
        }
        (!primes.is_empty(), t)
    }

    fn center_series_normal(&self) -> (bool, Tally) {
        let mut t = Tally::default();
        for (i, &z) in std::iter::once(&self.center).chain(&self.series.terms).enumerate() {
            let label = if i == 0 { "Z(H)".to_string() } else { format!("Z_{}(H)", i - 1) };
            t.check_result(is_normal(self.h, z).map(|nm| nm && closed(self.h, z)), || {
                format!("{label} = {z} is not a normal closed subset")
            });
        }
        (true, t)
    }

    fn central_cosets(&self) -> (bool, Tally) {
        let mut t = Tally::default();
        for f in self.lattice.iter() {
            match quotient(self.h, f) {
                Ok(q) => {
                    let zq = center(&q.quotient);
                    for x in self.center {
                        t.check(zq.contains(q.class_of[x]), || format!("{x}^{f} is not central in H//{f}"));
                    }
                }
                Err(e) => t.check(false, || format!("H//{f}: {e}")),
            }
        }
        (true, t)
    }

    fn central_series_below_upper_center(&self) -> (bool, Tally) {
        let mut t = Tally::default();
        let chains = central_series(self.h, &self.lattice);
        for chain in &chains {
            let r = chain.len() - 1;
            for i in 0..=r {
                let ti = chain[r - i];
                t.check(ti.is_subset(self.series.term(i)), || {
                    format!("central series {chain:?}: T_{i} = {ti} is not within Z_{i}(H) = {}", self.series.term(i))
                });
            }
        }
        (!chains.is_empty(), t)
    }

    fn central_series_iff_weakly_nilpotent(&self) -> (bool, Tally) {
        let mut t = Tally::default();
        let has = !central_series(self.h, &self.lattice).is_empty();
        let wn = self.weakly_nilpotent();
        t.check(has == wn, || format!("central series exists: {has}, weakly nilpotent: {wn}"));
        if wn {
            let mut upper = self.series.terms.clone();
            upper.reverse();
            t.check_result(is_central_series(self.h, &upper), || {
                "the upper center series, reversed, is not a central series".to_string()
            });
        }
        (true, t)
    }

    fn nontrivial_center(&self) -> (bool, Tally) {
        let mut t = Tally::default();
        let hyp = self.weakly_nilpotent() && self.h.order() > 1;
        if hyp {
            t.check(self.center != self.h.identity_set(), || "Z(H) = {0}".to_string());
        }
        (hyp, t)
    }

    fn p_hypergroup_solvable(&self) -> (bool, Tally) {
        let mut t = Tally::default();
        let hyp = self.valency().is_some_and(is_prime_power);
        if hyp {
            t.check(self.solvable(), || format!("valency {} is a prime power but H is not solvable", self.valency().unwrap()));
        }
        (hyp, t)
    }

    fn o_p_in_sylow(&self) -> (bool, Tally) {
        let mut t = Tally::default();
        let primes = self.valenced_primes();
        for &p in &primes {
            let o = match o_p_in(self.h, &self.lattice, p, self.reading) {
                Ok(o) => o,
                Err(e) => {
                    t.check(false, || format!("O_{p}(H): {e}"));
                    continue;
                }
            };
            for u in subnormal_p_subsets(self.h, &self.lattice, p) {
                t.check(u.is_subset(o), || format!("subnormal {p}-subset {u} is not within O_{p}(H) = {o}"));
            }
            match sylow_p_subsets_in(self.h, &self.lattice, p) {
                Ok(sylows) => {
                    for s in sylows {
                        t.check(o.is_subset(s), || format!("Sylow {p}-subset {s} misses O_{p}(H) = {o}"));
                    }
                }
                Err(e) => t.check(false, || format!("Sylow {p}-subsets: {e}")),
            }
        }
        (!primes.is_empty(), t)
    }

    fn quotient_equivalence(&self, by: ElementSet, label: &str) -> (bool, Tally) {
        let mut t = Tally::default();
        let wn = self.weakly_nilpotent();
        t.check_result(quotient(self.h, by).map(|q| weakly_nilpotent(&q.quotient) == wn), || {
            format!("H//{label} weakly nilpotent differs from H weakly nilpotent ({wn})")
        });
        (true, t)
    }

    fn quotient_well_formed(&self) -> (bool, Tally) {
        let mut t = Tally::default();
        for f in self.lattice.iter() {
            let r = quotient(self.h, f).map(|q| {
                let disjoint = q.classes.iter().enumerate().all(|(i, a)| q.classes[i + 1..].iter().all(|b| a.is_disjoint(*b)));
                let covers = q.preimage(q.quotient.all()) == self.h.all();
                disjoint && covers && q.classes[0] == f
            });
            t.check_result(r, || format!("double cosets of {f} do not form a quotient hypergroup"));
        }
        (true, t)
    }

    fn valency_chain_independent(&self) -> (bool, Tally) {
        let mut t = Tally::default();
        let mut any = false;
        for f in self.lattice.iter() {
            let chains = all_rt_chains_within(self.h, &self.lattice, f);
            if let Some(first) = chains.first() {
                any = true;
                let v = first.valency();
                for c in &chains[1..] {
                    t.check(c.valency() == v, || {
                        format!("{f}: chains {:?} and {:?} give valencies {v} and {}", first.links, c.links, c.valency())
                    });
                }
                if chains.len() == 1 {
                    t.instances += 1;
                }
            }
        }
        (any, t)
    }

    fn valency_multiplicative(&self) -> (bool, Tally) {
        let mut t = Tally::default();
        let Some(n_h) = self.valency() else { return (false, t) };
        for f in self.lattice.strongly_normal_subsets() {
            let Some(n_f) = rt_chain_within(self.h, &self.lattice, f).map(|c| c.valency()) else { continue };
            let q = match quotient(self.h, f) {
                Ok(q) => q.quotient,
                Err(e) => {
                    t.check(false, || format!("H//{f}: {e}"));
                    continue;
                }
            };
            let Some(n_q) = rt_chain_within(&q, &all_closed_subsets(&q), q.all()).map(|c| c.valency()) else {
                continue;
            };
            t.check(n_f * n_q == n_h, || format!("n_F = {n_f}, n_(H//F) = {n_q}, n_H = {n_h} for F = {f}"));
        }
        (true, t)
    }

    fn double_quotient(&self) -> (bool, Tally) {
        let mut t = Tally::default();
        for (n, f) in self.normal_pairs() {
            let r = (|| {
                let qn = quotient(self.h, n)?;
                let twice = quotient(&qn.quotient, qn.image(f))?;
                let once = quotient(self.h, f)?;
                Ok(canonical_form(&twice.quotient) == canonical_form(&once.quotient))
            })();
            t.check_result(r, || format!("(H//{n})//({f}//{n}) is not isomorphic to H//{f}"));
        }
        (true, t)
    }

    fn strong_normality_correspondence(&self) -> (bool, Tally) {
        let mut t = Tally::default();
        for (n, f) in self.normal_pairs() {
            let r = crate::quotient::strongly_normal_correspondence(self.h, n, f).map(|c| c.agrees());
            t.check_result(r, || format!("strong normality of {f}//{n} in H//{n} differs from {f} in H"));
        }
        (true, t)
    }

    fn thin_residue(&self) -> (bool, Tally) {
        let mut t = Tally::default();
        let res = thin_residue_of(self.h, &self.lattice);
        t.check_result(is_strongly_normal(self.h, res), || format!("thin residue {res} is not strongly normal"));
        t.check_result(quotient(self.h, res).map(|q| q.quotient.is_thin()), || {
            format!("H//{res} is not thin")
        });
        t.check((res == self.h.identity_set()) == self.h.is_thin(), || {
            format!("thin residue {res} but H thin = {}", self.h.is_thin())
        });
        (true, t)
    }
}

fn finish(check: Check, id: &str, hypotheses: bool, tally: Tally) -> TheoremCheckResult {
    let (conclusion_holds, outcome, counterexample) = if !hypotheses {
        (None, Outcome::NotApplicable, None)
    } else if let Some(c) = tally.counterexample {
        (Some(false), Outcome::Fails, Some(c))
    } else if tally.instances == 0 {
        (Some(true), Outcome::HoldsVacuously, None)
    } else {
        (Some(true), Outcome::Holds, None)
    };
    TheoremCheckResult {
        check,
        hypergroup: id.to_string(),
        hypotheses_satisfied: hypotheses,
        conclusion_holds,
        instances: if hypotheses { tally.instances } else { 0 },
        outcome,
        counterexample,
    }
}

/// Runs `checks` on one hypergroup. Analysis errors surface as failures.
pub fn run_checks(h: &Hypergroup, id: &str, checks: &[Check], reading: PValencedReading) -> Vec<TheoremCheckResult> {
    match Context::new(h, reading) {
        Ok(ctx) => checks.iter().map(|&c| ctx.run(c, id)).collect(),
        Err(e) => checks
            .iter()
            .map(|&c| {
                let mut tally = Tally::default();
                tally.check(false, || format!("analysis failed: {e}"));
                finish(c, id, true, tally)
            })
            .collect(),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Coverage {
    pub check: Option<Check>,
    pub holds: usize,
    pub holds_vacuously: usize,
    pub not_applicable: usize,
    pub fails: usize,
}

impl Coverage {
    /// Exercised by at least one member with a nonvacuous conclusion.
    pub fn exercised(&self) -> bool {
        self.holds + self.fails > 0
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogVerification {
    pub reading: PValencedReading,
    pub members: usize,
    pub coverage: Vec<Coverage>,
    pub results: Vec<TheoremCheckResult>,
}

impl CatalogVerification {
    pub fn failures(&self) -> impl Iterator<Item = &TheoremCheckResult> {
        self.results.iter().filter(|r| r.fails())
    }
}

/// Checks every member in parallel; results keep catalog order, then check order.
pub fn verify_catalog(
    members: &[(String, Hypergroup)],
    checks: &[Check],
    reading: PValencedReading,
) -> CatalogVerification {
    let per_member: Vec<Vec<TheoremCheckResult>> = members
        .par_iter()
        .map(|(id, h)| run_checks(h, id, checks, reading))
        .collect();
    let results: Vec<TheoremCheckResult> = per_member.into_iter().flatten().collect();
    let coverage = checks
        .iter()
        .map(|&c| {
            let mut cov = Coverage { check: Some(c), ..Coverage::default() };
            for r in results.iter().filter(|r| r.check == c) {
                match r.outcome {
                    Outcome::Holds => cov.holds += 1,
                    Outcome::HoldsVacuously => cov.holds_vacuously += 1,
                    Outcome::NotApplicable => cov.not_applicable += 1,
                    Outcome::Fails => cov.fails += 1,
                }
            }
            cov
        })
        .collect();
    CatalogVerification { reading, members: members.len(), coverage, results }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Question {
    /// Every closed subset subnormal, yet not weakly nilpotent.
    #[serde(rename = "q56")]
    Q56,
    /// Weakly nilpotent, every Sylow closed subset normal, yet not nilpotent.
    #[serde(rename = "q57")]
    Q57,
    /// Weakly nilpotent RT, not p-valenced, with a Sylow p-subset that is not
    /// strongly normal.
    #[serde(rename = "sylow-no-pvalenced")]
    SylowNoPValenced,
}

impl Question {
    pub const ALL: &'static [Question] = &[Question::Q56, Question::Q57, Question::SylowNoPValenced];

    pub fn id(self) -> &'static str {
        match self {
            Question::Q56 => "q56",
            Question::Q57 => "q57",
            Question::SylowNoPValenced => "sylow-no-pvalenced",
        }
    }
}

impl fmt::Display for Question {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Question {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Question::ALL
            .iter()
            .copied()
            .find(|q| q.id() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown question `{s}`")))
    }
}

/// Explanation lines when `h` answers `question`, `None` otherwise.
pub fn question_witness(h: &Hypergroup, question: Question, reading: PValencedReading) -> Result<Option<Vec<String>>> {
    let ctx = Context::new(h, reading)?;
    let mut why = Vec::new();
    match question {
        Question::Q56 => {
            if ctx.weakly_nilpotent() {
                return Ok(None);
            }
            for f in ctx.lattice.iter() {
                let Some(chain) = subnormal_chain_in(h, &ctx.lattice, f, NormalityMode::Normal)? else {
                    return Ok(None);
                };
                why.push(format!("{f} is subnormal via {:?}", chain.links));
            }
            why.push(format!(
                "not weakly nilpotent: upper center series {:?} stops below H",
                ctx.series.terms
            ));
            let strongly = ctx
                .lattice
                .iter()
                .filter(|&f| !matches!(subnormal_chain_in(h, &ctx.lattice, f, NormalityMode::StronglyNormal), Ok(Some(_))))
                .collect::<Vec<_>>();
            why.push(if strongly.is_empty() {
                "every closed subset is also strongly subnormal".to_string()
            } else {
                format!("closed subsets that are not strongly subnormal: {strongly:?}")
            });
        }
        Question::Q57 => {
            let Some(n_h) = ctx.valency() else { return Ok(None) };
            if !ctx.weakly_nilpotent() {
                return Ok(None);
            }
            for p in prime_divisors(n_h) {
                for s in sylow_p_subsets_in(h, &ctx.lattice, p)? {
                    if !is_normal(h, s)? {
                        return Ok(None);
                    }
                    why.push(format!("Sylow {p}-subset {s} is normal"));
                }
            }
            let res = thin_residue_of(h, &ctx.lattice);
            if res == h.identity_set() {
                return Ok(None);
            }
            why.insert(0, format!("weakly nilpotent of class {}, valency {n_h}", ctx.series.stabilized_at));
            why.push(format!("thin residue {res} is nontrivial, so H is not a nilpotent group"));
        }
        Question::SylowNoPValenced => {
            let Some(n_h) = ctx.valency() else { return Ok(None) };
            if !ctx.weakly_nilpotent() {
                return Ok(None);
            }
            let mut found = false;
            for p in prime_divisors(n_h) {
                if ctx.p_valenced(p)? {
                    continue;
                }
                for s in sylow_p_subsets_in(h, &ctx.lattice, p)? {
                    if !is_strongly_normal(h, s)? {
                        found = true;
                        why.push(format!(
                            "not {p}-valenced, and Sylow {p}-subset {s} is not strongly normal (normal: {})",
                            is_normal(h, s)?
                        ));
                    }
                }
            }
            if !found {
                return Ok(None);
            }
            why.insert(0, format!("weakly nilpotent RT of valency {n_h}"));
        }
    }
    Ok(Some(why))
}

fn oracle_agrees(h: &Hypergroup, question: Question, reading: PValencedReading) -> bool {
    let o = NaiveHypergroup::from_hypergroup(h);
    match question {
        Question::Q56 => o.q56_counterexample(),
        Question::Q57 => o.q57_counterexample(),
        Question::SylowNoPValenced => o.sylow_without_p_valenced(reading),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderSweep {
    pub order: usize,
    pub classes: usize,
    pub findings: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub order: usize,
    pub hash: String,
    pub hgt: String,
    pub explanation: Vec<String>,
    pub oracle_confirmed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchStatus {
    Finding,
    Exhausted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchOutcome {
    pub question: Question,
    pub max_order: usize,
    pub reading: PValencedReading,
    pub status: SearchStatus,
    /// Orders swept, smallest first; the sweep stops at the first order with a finding.
    pub sweeps: Vec<OrderSweep>,
    /// First finding in canonical order.
    pub finding: Option<Finding>,
}

/// Sweeps orders `1..=max_order` and returns the first hypergroup (in canonical
/// order) answering `question`, re-validated by the reference oracle.
pub fn search_counterexample(
    question: Question,
    max_order: usize,
    reading: PValencedReading,
    budget: &Budget,
) -> Result<SearchOutcome> {
    let mut sweeps = Vec::new();
    for order in 1..=max_order {
        budget.check()?;
        let members = enumerate_hypergroups(order, budget)?;
        let witnesses: Vec<Option<Vec<String>>> = members
            .par_iter()
            .map(|h| {
                budget.check()?;
                question_witness(h, question, reading)
            })
            .collect::<Result<_>>()?;
        let findings = witnesses.iter().filter(|w| w.is_some()).count();
        sweeps.push(OrderSweep { order, classes: members.len(), findings });
        if let Some((h, why)) = members.iter().zip(witnesses).find_map(|(h, w)| w.map(|w| (h, w))) {
            if !oracle_agrees(h, question, reading) {
                return Err(Error::OracleDisagreement(format!(
                    "{question} finding {} is rejected by the reference implementation",
                    canonical_hash(h)
                )));
            }
            let finding = Finding {
                order,
                hash: canonical_hash(h),
                hgt: hgt::to_string(h),
                explanation: why,
                oracle_confirmed: true,
            };
            return Ok(SearchOutcome {
                question,
                max_order,
                reading,
                status: SearchStatus::Finding,
                sweeps,
                finding: Some(finding),
            });
        }
    }
    Ok(SearchOutcome { question, max_order, reading, status: SearchStatus::Exhausted, sweeps, finding: None })
}

/// Whether `n` is a power of some single prime (`1` included).
pub fn is_prime_power(n: u64) -> bool {
    prime_divisors(n).first().is_none_or(|&p| is_p_number(n, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{c2, k2, s3, t1, w3};

    fn outcome(h: &Hypergroup, c: Check) -> Outcome {
        run_checks(h, "t", &[c], PValencedReading::default())[0].outcome
    }

    #[test]
    fn ids_round_trip() {
        for &c in Check::ALL {
            assert_eq!(c.id().parse::<Check>().unwrap(), c);
        }
        for &q in Question::ALL {
            assert_eq!(q.id().parse::<Question>().unwrap(), q);
        }
        assert!("nope".parse::<Check>().is_err());
    }

    #[test]
    fn w3_exercises_the_main_statements() {
        let w3 = w3();
        for c in [
            Check::ClosedSubsetsWeaklyNilpotent,
            Check::QuotientsWeaklyNilpotent,
            Check::ClosedSubsetsStronglySubnormal,
            Check::WeaklyNilpotentSolvable,
            Check::SylowStronglyNormal,
        ] {
            assert_eq!(outcome(&w3, c), Outcome::Holds, "{c}");
        }
        assert!(run_checks(&w3, "w3", Check::ALL, PValencedReading::default()).iter().all(|r| !r.fails()));
    }

    #[test]
    fn k2_is_outside_the_weakly_nilpotent_statements() {
        let k2 = k2();
        assert_eq!(outcome(&k2, Check::ClosedSubsetsWeaklyNilpotent), Outcome::NotApplicable);
        assert_eq!(outcome(&k2, Check::QuotientsWeaklyNilpotent), Outcome::NotApplicable);
        assert_eq!(outcome(&k2, Check::WeaklyNilpotentSolvable), Outcome::NotApplicable);
        assert_eq!(outcome(&k2, Check::StronglyNormalIffThinQuotient), Outcome::Holds);
        assert!(run_checks(&k2, "k2", Check::ALL, PValencedReading::default()).iter().all(|r| !r.fails()));
    }

    #[test]
    fn trivial_hypergroup() {
        let t1 = t1();
        assert_eq!(outcome(&t1, Check::ClosedSubsetsWeaklyNilpotent), Outcome::Holds);
        assert_eq!(outcome(&t1, Check::NontrivialCenter), Outcome::NotApplicable);
        for r in run_checks(&t1, "t1", Check::ALL, PValencedReading::default()) {
            assert!(!r.fails(), "{r:?}");
        }
    }

    #[test]
    fn groups_pass_everything() {
        for h in [c2(), s3(), Hypergroup::cyclic(4), Hypergroup::cyclic(6)] {
            for r in run_checks(&h, "g", Check::ALL, PValencedReading::default()) {
                assert!(!r.fails(), "{r:?}");
            }
        }
    }

    #[test]
    fn result_invariant() {
        for h in [t1(), c2(), k2(), w3(), s3()] {
            for r in run_checks(&h, "x", Check::ALL, PValencedReading::default()) {
                assert_eq!(r.counterexample.is_some(), r.hypotheses_satisfied && r.conclusion_holds == Some(false));
                assert_eq!(r.conclusion_holds.is_none(), !r.hypotheses_satisfied);
            }
        }
    }

    #[test]
    fn trivial_searches() {
        let out = search_counterexample(Question::Q57, 1, PValencedReading::default(), &Budget::unlimited()).unwrap();
        assert_eq!(out.status, SearchStatus::Exhausted);
        assert_eq!(out.sweeps, vec![OrderSweep { order: 1, classes: 1, findings: 0 }]);
    }

    #[test]
    fn prime_powers() {
        assert!(is_prime_power(1) && is_prime_power(8) && is_prime_power(7));
        assert!(!is_prime_power(6) && !is_prime_power(12));
    }
}
