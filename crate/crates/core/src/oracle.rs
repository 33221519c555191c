//! Reference implementations written straight from the definitions, with
//! plain `BTreeSet`s and exhaustive subset scans. Slow and independent of the
//! bitset kernels; used to cross-check them and to re-validate counterexamples.

use std::collections::BTreeSet;

use crate::arith::PValencedReading;
use crate::hypergroup::Hypergroup;

type Set = BTreeSet<usize>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaiveHypergroup {
    n: usize,
    mul: Vec<Vec<Set>>,
    star: Vec<usize>,
}

fn is_p_power(mut k: u64, p: u64) -> bool {
    if k == 0 {
        return false;
    }
    while k.is_multiple_of(p) {
        k /= p;
    }
    k == 1
}

fn is_prime(k: u64) -> bool {
    k >= 2 && (2..k).all(|d| !k.is_multiple_of(d))
}

impl NaiveHypergroup {
    /// Builds from raw cells; returns `None` unless every axiom holds with
    /// some involution.
    pub fn from_cells(n: usize, mul: Vec<Vec<Set>>) -> Option<Self> {
        // Identity.
        for (s, row) in mul.iter().enumerate() {
            if row[0] != Set::from([s]) || mul[0][s] != Set::from([s]) {
                return None;
            }
            if row.iter().any(|cell| cell.is_empty()) {
                return None;
            }
        }
        let probe = NaiveHypergroup { n, mul, star: vec![0; n] };
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    let left = probe.prod(&Set::from([p]), &probe.mul[q][r]);
                    let right = probe.prod(&probe.mul[p][q], &Set::from([r]));
                    if left != right {
                        return None;
                    }
                }
            }
        }
        // Every involution, tried exhaustively.
        let mut stars = Vec::new();
        let mut cur = vec![usize::MAX; n];
        fn involutions(cur: &mut Vec<usize>, i: usize, out: &mut Vec<Vec<usize>>) {
            if i == cur.len() {
                out.push(cur.clone());
                return;
            }
            if cur[i] != usize::MAX {
                return involutions(cur, i + 1, out);
            }
            for j in i..cur.len() {
                if cur[j] == usize::MAX && (i != 0 || j == 0) {
                    cur[i] = j;
                    cur[j] = i;
                    involutions(cur, i + 1, out);
                    cur[i] = usize::MAX;
                    cur[j] = usize::MAX;
                }
            }
        }
        involutions(&mut cur, 0, &mut stars);
        let good: Vec<Vec<usize>> = stars
            .into_iter()
            .filter(|star| {
                (0..n).all(|p| {
                    (0..n).all(|q| {
                        probe.mul[p][q]
                            .iter()
                            .all(|&r| probe.mul[star[p]][r].contains(&q) && probe.mul[r][star[q]].contains(&p))
                    })
                })
            })
            .collect();
        match good.as_slice() {
            [star] => Some(NaiveHypergroup { star: star.clone(), ..probe }),
            _ => None,
        }
    }

    pub fn from_hypergroup(h: &Hypergroup) -> Self {
        let n = h.order();
        let mul = (0..n)
            .map(|i| (0..n).map(|j| h.product(i, j).iter().collect()).collect())
            .collect();
        NaiveHypergroup::from_cells(n, mul).expect("input is a hypergroup")
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn star(&self) -> &[usize] {
        &self.star
    }

    fn all(&self) -> Set {
        (0..self.n).collect()
    }

    fn one(&self) -> Set {
        Set::from([0])
    }

    fn prod(&self, a: &Set, b: &Set) -> Set {
        let mut out = Set::new();
        for &x in a {
            for &y in b {
                out.extend(self.mul[x][y].iter().copied());
            }
        }
        out
    }

    fn star_set(&self, a: &Set) -> Set {
        a.iter().map(|&x| self.star[x]).collect()
    }

    pub fn is_closed(&self, f: &Set) -> bool {
        !f.is_empty() && self.prod(&self.star_set(f), f).is_subset(f)
    }

    pub fn closed_subsets(&self) -> Vec<Set> {
        (1u64..1 << self.n)
            .map(|bits| (0..self.n).filter(|i| bits >> i & 1 == 1).collect::<Set>())
            .filter(|s| self.is_closed(s))
            .collect()
    }

    pub fn is_normal(&self, f: &Set) -> bool {
        (0..self.n).all(|h| {
            let h = Set::from([h]);
            self.prod(f, &h).is_subset(&self.prod(&h, f))
        })
    }

    pub fn is_strongly_normal(&self, f: &Set) -> bool {
        (0..self.n).all(|h| {
            let hs = Set::from([self.star[h]]);
            self.prod(&self.prod(&hs, f), &Set::from([h])).is_subset(f)
        })
    }

    pub fn is_thin(&self) -> bool {
        (0..self.n).all(|s| self.mul[self.star[s]][s] == self.one())
    }

    pub fn thin_elements(&self) -> Set {
        (0..self.n).filter(|&s| self.mul[self.star[s]][s] == self.one()).collect()
    }

    pub fn restrict(&self, f: &Set) -> NaiveHypergroup {
        let members: Vec<usize> = f.iter().copied().collect();
        let local = |x: usize| members.iter().position(|&m| m == x).unwrap();
        let mul = members
            .iter()
            .map(|&a| members.iter().map(|&b| self.mul[a][b].iter().map(|&x| local(x)).collect()).collect())
            .collect();
        NaiveHypergroup::from_cells(members.len(), mul).expect("closed subsets restrict to hypergroups")
    }

    /// Quotient and its classes (ordered by least member).
    pub fn quotient(&self, f: &Set) -> (NaiveHypergroup, Vec<Set>) {
        let mut classes: Vec<Set> = Vec::new();
        for h in 0..self.n {
            let c = self.prod(&self.prod(f, &Set::from([h])), f);
            if !classes.contains(&c) {
                classes.push(c);
            }
        }
        classes.sort_by_key(|c| *c.iter().next().unwrap());
        let class_of = |x: usize| classes.iter().position(|c| c.contains(&x)).unwrap();
        let mul = classes
            .iter()
            .map(|a| {
                classes
                    .iter()
                    .map(|b| {
                        let (x, y) = (*a.iter().next().unwrap(), *b.iter().next().unwrap());
                        let afb = self.prod(&self.prod(&Set::from([x]), f), &Set::from([y]));
                        afb.iter().map(|&z| class_of(z)).collect()
                    })
                    .collect()
            })
            .collect();
        let q = NaiveHypergroup::from_cells(classes.len(), mul).expect("quotients are hypergroups");
        (q, classes)
    }

    pub fn center(&self) -> Set {
        (0..self.n)
            .filter(|&h| self.mul[self.star[h]][h] == self.one() && (0..self.n).all(|x| self.mul[h][x] == self.mul[x][h]))
            .collect()
    }

    pub fn upper_center_series(&self) -> Vec<Set> {
        let mut terms = vec![self.one()];
        loop {
            let z = terms.last().unwrap().clone();
            let (q, classes) = self.quotient(&z);
            let next: Set = q.center().iter().flat_map(|&c| classes[c].iter().copied()).collect();
            if next == z {
                return terms;
            }
            terms.push(next);
        }
    }

    pub fn is_weakly_nilpotent(&self) -> bool {
        *self.upper_center_series().last().unwrap() == self.all()
    }

    pub fn thin_residue(&self) -> Set {
        self.closed_subsets()
            .into_iter()
            .filter(|f| self.is_strongly_normal(f))
            .fold(self.all(), |acc, f| acc.intersection(&f).copied().collect())
    }

    /// Step quotient order when `lo ⊊ hi` has a thin quotient inside `hi`.
    fn thin_step(&self, lo: &Set, hi: &Set) -> Option<usize> {
        let r = self.restrict(hi);
        let members: Vec<usize> = hi.iter().copied().collect();
        let local: Set = lo.iter().map(|x| members.iter().position(|m| m == x).unwrap()).collect();
        let (q, _) = r.quotient(&local);
        q.is_thin().then(|| q.order())
    }

    fn strict_supersets(&self, lo: &Set) -> Vec<Set> {
        self.closed_subsets().into_iter().filter(|s| s.len() > lo.len() && lo.is_subset(s)).collect()
    }

    /// Valencies along every RT chain (empty iff not RT).
    pub fn rt_valencies(&self) -> BTreeSet<u64> {
        let mut out = BTreeSet::new();
        self.walk_thin_chains(&self.one(), 1, false, &mut out);
        out
    }

    fn walk_thin_chains(&self, cur: &Set, acc: u64, prime_steps: bool, out: &mut BTreeSet<u64>) {
        if *cur == self.all() {
            out.insert(acc);
            return;
        }
        for next in self.strict_supersets(cur) {
            if let Some(k) = self.thin_step(cur, &next) {
                if !prime_steps || is_prime(k as u64) {
                    self.walk_thin_chains(&next, acc * k as u64, prime_steps, out);
                }
            }
        }
    }

    pub fn valency(&self) -> Option<u64> {
        let v = self.rt_valencies();
        assert!(v.len() <= 1, "RT chains disagree: {v:?}");
        v.into_iter().next()
    }

    pub fn is_solvable(&self) -> bool {
        let mut out = BTreeSet::new();
        self.walk_thin_chains(&self.one(), 1, true, &mut out);
        !out.is_empty()
    }

    pub fn is_subnormal(&self, f: &Set, strong: bool) -> bool {
        if *f == self.all() {
            return true;
        }
        self.strict_supersets(f).iter().any(|g| {
            let r = self.restrict(g);
            let members: Vec<usize> = g.iter().copied().collect();
            let local: Set = f.iter().map(|x| members.iter().position(|m| m == x).unwrap()).collect();
            let ok = if strong { r.is_strongly_normal(&local) } else { r.is_normal(&local) };
            ok && self.is_subnormal(g, strong)
        })
    }

    pub fn sylow(&self, p: u64) -> Vec<Set> {
        let Some(n_h) = self.valency() else { return Vec::new() };
        self.closed_subsets()
            .into_iter()
            .filter(|c| {
                self.restrict(c)
                    .valency()
                    .is_some_and(|n_c| is_p_power(n_c, p) && n_h % n_c == 0 && (n_h / n_c) % p != 0)
            })
            .collect()
    }

    pub fn is_p_valenced(&self, p: u64, reading: PValencedReading) -> bool {
        for u in self.closed_subsets() {
            if !self.is_subnormal(&u, false) {
                continue;
            }
            match self.restrict(&u).valency() {
                Some(n_u) if is_p_power(n_u, p) => {}
                _ => continue,
            }
            let (q, classes) = self.quotient(&u);
            let class_of = |x: usize| classes.iter().position(|c| c.contains(&x)).unwrap();
            let thin = q.thin_elements();
            for h in 0..self.n {
                let s = &q.mul[class_of(self.star[h])][class_of(h)];
                let qualifies = match reading {
                    PValencedReading::Singleton => s.len() == 1 && s.is_subset(&thin),
                    PValencedReading::Subset => s.is_subset(&thin),
                };
                if qualifies && !is_p_power(s.len() as u64, p) {
                    return false;
                }
            }
        }
        true
    }

    fn prime_divisors_of_valency(&self) -> Vec<u64> {
        let n_h = self.valency().unwrap_or(1);
        (2..=n_h).filter(|&p| is_prime(p) && n_h.is_multiple_of(p)).collect()
    }

    /// Every closed subset subnormal, yet not weakly nilpotent.
    pub fn q56_counterexample(&self) -> bool {
        self.closed_subsets().iter().all(|f| self.is_subnormal(f, false)) && !self.is_weakly_nilpotent()
    }

    /// Weakly nilpotent RT, every Sylow p-subset normal for every `p | n_H`,
    /// yet the thin residue is nontrivial.
    pub fn q57_counterexample(&self) -> bool {
        self.is_weakly_nilpotent()
            && self.valency().is_some()
            && self
                .prime_divisors_of_valency()
                .iter()
                .all(|&p| self.sylow(p).iter().all(|s| self.is_normal(s)))
            && self.thin_residue() != self.one()
    }

    /// Weakly nilpotent RT with some `p | n_H` where `H` is not p-valenced and
    /// some Sylow p-subset is not strongly normal.
    pub fn sylow_without_p_valenced(&self, reading: PValencedReading) -> bool {
        self.is_weakly_nilpotent()
            && self.valency().is_some()
            && self.prime_divisors_of_valency().iter().any(|&p| {
                !self.is_p_valenced(p, reading) && self.sylow(p).iter().any(|s| !self.is_strongly_normal(s))
            })
    }
}
