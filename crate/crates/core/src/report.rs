//! The per-hypergroup analysis record behind `hg analyze`, with a JSON form
//! (`report_version: 1`) and a text view rendered from the same data.

use std::fmt::Write as _;

use serde::Serialize;

use crate::arith::{
    o_p_in, p_valenced_record, primes_up_to, rt_chain_within, solvable_chain_in, sylow_p_subsets_in,
    PValencedReading, RtChain,
};
use crate::error::{Error, Result};
use crate::hypergroup::Hypergroup;
use crate::series::{center, upper_center_series, UpperCenterSeries};
use crate::set::ElementSet;
use crate::subsets::{all_closed_subsets, thin_residue_of};
use crate::verify::{run_checks, Check, Outcome};

pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeSummary {
    pub count: usize,
    pub closed: Vec<ElementSet>,
    pub normal: Vec<ElementSet>,
    pub strongly_normal: Vec<ElementSet>,
    pub maximal: Vec<ElementSet>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeReport {
    pub prime: u64,
    pub sylow: Vec<ElementSet>,
    pub p_valenced: bool,
    /// Absent when `H` is not p-valenced.
    pub o_p: Option<ElementSet>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckDigest {
    pub check: Check,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub report_version: u32,
    pub source: String,
    pub order: usize,
    pub star: Vec<usize>,
    pub commutative: bool,
    pub thin: bool,
    pub thin_elements: ElementSet,
    pub lattice: LatticeSummary,
    pub center: ElementSet,
    pub upper_center_series: UpperCenterSeries,
    pub weakly_nilpotent: bool,
    pub nilpotency_class: Option<usize>,
    pub thin_residue: ElementSet,
    pub residually_thin: bool,
    pub rt_chain: Option<RtChain>,
    pub valency: Option<u64>,
    pub p_valenced_reading: PValencedReading,
    pub primes: Vec<PrimeReport>,
    pub solvable: bool,
    pub solvable_chain: Option<RtChain>,
    pub checks: Vec<CheckDigest>,
}

/// Everything `analyze` reports. `primes` defaults to the primes up to the
/// valency when `H` is RT; asking for primes of a non-RT hypergroup is a
/// hypothesis failure.
pub fn analyze(
    h: &Hypergroup,
    source: &str,
    primes: Option<&[u64]>,
    reading: PValencedReading,
) -> Result<AnalysisReport> {
    let lattice = all_closed_subsets(h);
    let series = upper_center_series(h)?;
    let rt_chain = rt_chain_within(h, &lattice, h.all());
    let valency = rt_chain.as_ref().map(RtChain::valency);
    let primes: Vec<u64> = match (primes, valency) {
        (Some(ps), Some(_)) => ps.to_vec(),
        (Some(ps), None) if !ps.is_empty() => return Err(Error::UndefinedForNonRT),
        (Some(_), None) | (None, None) => Vec::new(),
        (None, Some(v)) => primes_up_to(v),
    };
    let primes = primes
        .into_iter()
        .map(|p| {
            if !crate::arith::is_prime(p) {
                return Err(Error::Precondition(format!("{p} is not prime")));
            }
            let p_valenced = p_valenced_record(h, &lattice, p, reading)?.holds;
            Ok(PrimeReport {
                prime: p,
                sylow: sylow_p_subsets_in(h, &lattice, p)?,
                p_valenced,
                o_p: if p_valenced { Some(o_p_in(h, &lattice, p, reading)?) } else { None },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let solvable_chain = solvable_chain_in(h, &lattice);
    let checks = run_checks(h, source, Check::ALL, reading)
        .into_iter()
        .map(|r| CheckDigest { check: r.check, outcome: r.outcome })
        .collect();
    Ok(AnalysisReport {
        report_version: REPORT_VERSION,
        source: source.to_string(),
        order: h.order(),
        star: h.star().to_vec(),
        commutative: h.is_commutative(),
        thin: h.is_thin(),
        thin_elements: h.thin_elements(),
        lattice: LatticeSummary {
            count: lattice.len(),
            closed: lattice.iter().collect(),
            normal: lattice.normal_subsets().collect(),
            strongly_normal: lattice.strongly_normal_subsets().collect(),
            maximal: lattice.maximal_subsets(),
        },
        center: center(h),
        weakly_nilpotent: series.is_exhaustive,
        nilpotency_class: series.is_exhaustive.then_some(series.stabilized_at),
        upper_center_series: series,
        thin_residue: thin_residue_of(h, &lattice),
        residually_thin: rt_chain.is_some(),
        rt_chain,
        valency,
        p_valenced_reading: reading,
        primes,
        solvable: solvable_chain.is_some(),
        solvable_chain,
        checks,
    })
}

fn sets(v: &[ElementSet]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn chain(c: &Option<RtChain>) -> String {
    match c {
        Some(c) => format!("{} (step orders {:?})", sets(&c.links), c.quotient_orders),
        None => "none".into(),
    }
}

impl AnalysisReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let yes = |b: bool| if b { "yes" } else { "no" };
        let _ = writeln!(out, "source: {}", self.source);
        let _ = writeln!(out, "order: {}", self.order);
        let _ = writeln!(out, "star: {:?}", self.star);
        let _ = writeln!(out, "commutative: {}", yes(self.commutative));
        let _ = writeln!(out, "thin: {}", yes(self.thin));
        let _ = writeln!(out, "thin elements: {}", self.thin_elements);
        let _ = writeln!(out, "closed subsets ({}): {}", self.lattice.count, sets(&self.lattice.closed));
        let _ = writeln!(out, "  normal: {}", sets(&self.lattice.normal));
        let _ = writeln!(out, "  strongly normal: {}", sets(&self.lattice.strongly_normal));
        let _ = writeln!(out, "  maximal: {}", sets(&self.lattice.maximal));
        let _ = writeln!(out, "center: {}", self.center);
        let _ = writeln!(out, "upper center series: {}", sets(&self.upper_center_series.terms));
        match self.nilpotency_class {
            Some(c) => {
                let _ = writeln!(out, "weakly nilpotent: yes (class {c})");
            }
            None => {
                let _ = writeln!(out, "weakly nilpotent: no");
            }
        }
        let _ = writeln!(out, "thin residue: {}", self.thin_residue);
        let _ = writeln!(out, "residually thin: {}", yes(self.residually_thin));
        let _ = writeln!(out, "  chain: {}", chain(&self.rt_chain));
        if let Some(v) = self.valency {
            let _ = writeln!(out, "  valency: {v}");
        }
        for p in &self.primes {
            let o_p = p.o_p.map_or("-".to_string(), |o| o.to_string());
            let _ = writeln!(
                out,
                "prime {}: sylow {} | p-valenced {} | O_p {}",
                p.prime,
                sets(&p.sylow),
                yes(p.p_valenced),
                o_p
            );
        }
        let _ = writeln!(out, "solvable: {}", yes(self.solvable));
        let _ = writeln!(out, "  chain: {}", chain(&self.solvable_chain));
        let _ = writeln!(out, "checks:");
        for c in &self.checks {
            let outcome = outcome_label(&c.outcome);
            let _ = writeln!(out, "  {:40} {outcome}", c.check.id());
        }
        out
    }
}

fn outcome_label(o: &Outcome) -> &'static str {
    match o {
        Outcome::Holds => "holds",
        Outcome::HoldsVacuously => "holds-vacuously",
        Outcome::NotApplicable => "not-applicable",
        Outcome::Fails => "FAILS",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{k2, t1, w3};

    fn set<const N: usize>(m: [usize; N]) -> ElementSet {
        ElementSet::from(m)
    }

    #[test]
    fn w3_report() {
        let r = analyze(&w3(), "w3.hgt", None, PValencedReading::default()).unwrap();
        assert_eq!(r.center, set([0, 1]));
        assert_eq!(r.nilpotency_class, Some(2));
        assert_eq!(r.valency, Some(4));
        assert!(r.solvable);
        assert_eq!(r.primes.iter().map(|p| p.prime).collect::<Vec<_>>(), vec![2, 3]);
        assert_eq!(r.primes[0].sylow, vec![set([0, 1, 2])]);
        assert!(r.checks.iter().all(|c| c.outcome != Outcome::Fails));
        assert!(r.to_text().contains("weakly nilpotent: yes (class 2)"));
    }

    #[test]
    fn k2_report() {
        let r = analyze(&k2(), "k2.hgt", None, PValencedReading::default()).unwrap();
        assert!(r.commutative && !r.residually_thin && !r.weakly_nilpotent);
        assert!(r.primes.is_empty());
        assert_eq!(analyze(&k2(), "k2", Some(&[2]), PValencedReading::default()), Err(Error::UndefinedForNonRT));
    }

    #[test]
    fn trivial_report() {
        let r = analyze(&t1(), "t1", None, PValencedReading::default()).unwrap();
        assert_eq!(r.lattice.count, 1);
        assert_eq!(r.valency, Some(1));
        assert!(r.weakly_nilpotent && r.solvable && r.thin);
    }
}
