//! Hypermultiplication tables, axiom validation and elementary algebra.

use crate::error::{Result, ValidationError, Violation};
use crate::set::{ElementSet, MAX_ORDER};

/// Identity element; pinned at index 0 everywhere in the crate.
pub const IDENTITY: usize = 0;

/// A total map `(i, j) -> cell` for `i, j < order`, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Table {
    order: usize,
    cells: Vec<ElementSet>,
}

impl Table {
    pub fn new(order: usize, cells: Vec<ElementSet>) -> Self {
        Table { order, cells }
    }

    /// Builds a table from a cell function.
    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> ElementSet) -> Self {
        let mut cells = Vec::with_capacity(order * order);
        for i in 0..order {
            for j in 0..order {
                cells.push(f(i, j));
            }
        }
        Table { order, cells }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn cells(&self) -> &[ElementSet] {
        &self.cells
    }

    #[inline]
    pub fn cell(&self, i: usize, j: usize) -> ElementSet {
        self.cells[i * self.order + j]
    }

    fn set_product(&self, p: ElementSet, q: ElementSet) -> ElementSet {
        let mut out = ElementSet::EMPTY;
        for a in p {
            for b in q {
                out = out.union(self.cell(a, b));
            }
        }
        out
    }

    fn left_mul(&self, a: usize, q: ElementSet) -> ElementSet {
        let mut out = ElementSet::EMPTY;
        for b in q {
            out = out.union(self.cell(a, b));
        }
        out
    }

    fn right_mul(&self, p: ElementSet, b: usize) -> ElementSet {
        let mut out = ElementSet::EMPTY;
        for a in p {
            out = out.union(self.cell(a, b));
        }
        out
    }

    /// First triple `(p, q, r)` in lexicographic order with `p(qr) != (pq)r`.
    pub fn first_associativity_failure(&self) -> Option<(usize, usize, usize)> {
        let n = self.order;
        for p in 0..n {
            for q in 0..n {
                let pq = self.cell(p, q);
                for r in 0..n {
                    if self.left_mul(p, self.cell(q, r)) != self.right_mul(pq, r) {
                        return Some((p, q, r));
                    }
                }
            }
        }
        None
    }

    /// First triple `(p, q, r)` with `r in pq` but `q not in p*r` or
    /// `p not in rq*`.
    pub fn first_exchange_failure(&self, star: &[usize]) -> Option<(usize, usize, usize)> {
        let n = self.order;
        for p in 0..n {
            for q in 0..n {
                for r in self.cell(p, q) {
                    if !self.cell(star[p], r).contains(q) || !self.cell(r, star[q]).contains(p) {
                        return Some((p, q, r));
                    }
                }
            }
        }
        None
    }

    fn check_shape(&self) -> Vec<Violation> {
        let n = self.order;
        let mut out = Vec::new();
        if n == 0 || n > MAX_ORDER {
            out.push(Violation::BadOrder(n));
            return out;
        }
        if self.cells.len() != n * n {
            out.push(Violation::MissingCell(self.cells.len() / n, self.cells.len() % n));
            return out;
        }
        let full = ElementSet::full(n);
        for i in 0..n {
            for j in 0..n {
                if !self.cell(i, j).is_subset(full) {
                    out.push(Violation::CellOutOfRange(i, j));
                }
            }
        }
        out
    }
}

/// Searches every involution `s -> s*` fixing 0 with `0 in s*s` and `0 in ss*`
/// for those satisfying the exchange axiom.
///
/// Requires a total table whose element 0 is a two-sided identity.
pub fn infer_star(table: &Table) -> std::result::Result<Vec<usize>, Violation> {
    let found = star_candidates(table, 2);
    match found.len() {
        0 => Err(Violation::StarMissing),
        1 => Ok(found.into_iter().next().unwrap()),
        _ => Err(Violation::StarAmbiguous(star_candidates(table, usize::MAX))),
    }
}

fn star_candidates(table: &Table, limit: usize) -> Vec<Vec<usize>> {
    let n = table.order();
    let candidates: Vec<Vec<usize>> = (0..n)
        .map(|s| {
            (0..n)
                .filter(|&t| table.cell(t, s).contains(IDENTITY) && table.cell(s, t).contains(IDENTITY))
                .collect()
        })
        .collect();
    let mut assignment = vec![usize::MAX; n];
    let mut found = Vec::new();
    extend_star(table, &candidates, &mut assignment, 0, limit, &mut found);
    found
}

fn extend_star(
    table: &Table,
    candidates: &[Vec<usize>],
    assignment: &mut [usize],
    s: usize,
    limit: usize,
    found: &mut Vec<Vec<usize>>,
) {
    if found.len() >= limit {
        return;
    }
    if s == assignment.len() {
        if table.first_exchange_failure(assignment).is_none() {
            found.push(assignment.to_vec());
        }
        return;
    }
    if assignment[s] != usize::MAX {
        extend_star(table, candidates, assignment, s + 1, limit, found);
        return;
    }
    for &t in &candidates[s] {
        if (s == IDENTITY) != (t == IDENTITY) {
            continue;
        }
        if t != s && (assignment[t] != usize::MAX || !candidates[t].contains(&s)) {
            continue;
        }
        assignment[s] = t;
        assignment[t] = s;
        extend_star(table, candidates, assignment, s + 1, limit, found);
        assignment[s] = usize::MAX;
        assignment[t] = usize::MAX;
    }
}

/// Runs every axiom check and collects one witness per failed axiom.
///
/// On success returns the star (declared or inferred).
pub fn validate(table: &Table, star: Option<&[usize]>) -> std::result::Result<Vec<usize>, ValidationError> {
    let mut violations = table.check_shape();
    if !violations.is_empty() {
        return Err(ValidationError { violations });
    }
    let n = table.order();
    for i in 0..n {
        for j in 0..n {
            if table.cell(i, j).is_empty() {
                violations.push(Violation::EmptyCell(i, j));
            }
        }
    }
    let mut identity_ok = true;
    if let Some(s) = (0..n).find(|&s| table.cell(s, IDENTITY) != ElementSet::singleton(s)) {
        violations.push(Violation::NoIdentity { witness: s });
        identity_ok = false;
    }
    if let Some(s) = (0..n).find(|&s| table.cell(IDENTITY, s) != ElementSet::singleton(s)) {
        violations.push(Violation::LeftIdentity(s));
        identity_ok = false;
    }
    if let Some((p, q, r)) = table.first_associativity_failure() {
        violations.push(Violation::AssociativityViolation(p, q, r));
    }

    let mut resolved = None;
    match star {
        Some(star) => {
            let bad = (0..n).find(|&s| {
                star.len() != n || star[s] >= n || star[star[s]] != s || (s == IDENTITY && star[s] != IDENTITY)
            });
            if star.len() != n {
                violations.push(Violation::StarNotInvolution(star.len().min(n.saturating_sub(1))));
            } else if let Some(s) = bad {
                violations.push(Violation::StarNotInvolution(s));
            } else if let Some((p, q, r)) = table.first_exchange_failure(star) {
                violations.push(Violation::H3Violation(p, q, r));
            } else {
                resolved = Some(star.to_vec());
            }
        }
        None if identity_ok => match infer_star(table) {
            Ok(star) => resolved = Some(star),
            Err(v) => {
                if v == Violation::StarMissing {
                    violations.push(exchange_witness(table));
                }
                violations.push(v);
            }
        },
        None => {}
    }

    if violations.is_empty() {
        Ok(resolved.expect("star resolved when no violation"))
    } else {
        Err(ValidationError { violations })
    }
}

/// A witness triple explaining why no star satisfies the exchange axiom.
fn exchange_witness(table: &Table) -> Violation {
    let n = table.order();
    // s in s*1 forces 1 in s*s; no such candidate means (s, 1, s) cannot be exchanged.
    for s in 0..n {
        if !(0..n).any(|t| table.cell(t, s).contains(IDENTITY)) {
            return Violation::H3Violation(s, IDENTITY, s);
        }
    }
    // Otherwise report the failure under the least candidate assignment.
    let star: Vec<usize> = (0..n)
        .map(|s| (0..n).find(|&t| table.cell(t, s).contains(IDENTITY)).unwrap())
        .collect();
    let (p, q, r) = table.first_exchange_failure(&star).unwrap_or((0, 0, 0));
    Violation::H3Violation(p, q, r)
}

/// A validated finite hypergroup with identity 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hypergroup {
    table: Table,
    star: Vec<usize>,
}

impl Hypergroup {
    /// Validates `table` against every axiom. If `star` is omitted it is
    /// inferred; an explicit star is only verified.
    pub fn new(table: Table, star: Option<Vec<usize>>) -> Result<Self> {
        let star = validate(&table, star.as_deref())?;
        Ok(Hypergroup { table, star })
    }

    /// Shorthand for tests and fixtures: cells given as member lists, row-major.
    pub fn from_cells(order: usize, cells: &[&[usize]]) -> Result<Self> {
        let cells = cells.iter().map(|c| c.iter().copied().collect()).collect();
        Hypergroup::new(Table::new(order, cells), None)
    }

    /// Wraps parts that are already known to form a hypergroup (sub-hypergroups
    /// on closed subsets, relabelings). Checked in debug builds.
    pub(crate) fn from_trusted(table: Table, star: Vec<usize>) -> Self {
        debug_assert_eq!(validate(&table, Some(&star)).as_ref().map_err(|e| e.to_string()), Ok(&star));
        Hypergroup { table, star }
    }

    /// The group table of `(Z/n, +)`.
    pub fn cyclic(n: usize) -> Self {
        let table = Table::from_fn(n, |i, j| ElementSet::singleton((i + j) % n));
        let star = (0..n).map(|i| (n - i) % n).collect();
        Hypergroup::from_trusted(table, star)
    }

    pub fn order(&self) -> usize {
        self.table.order()
    }

    pub fn table(&self) -> &Table {
        &self.table
    }

    pub fn star(&self) -> &[usize] {
        &self.star
    }

    pub fn all(&self) -> ElementSet {
        ElementSet::full(self.order())
    }

    pub fn identity_set(&self) -> ElementSet {
        ElementSet::singleton(IDENTITY)
    }

    #[inline]
    pub fn product(&self, p: usize, q: usize) -> ElementSet {
        self.table.cell(p, q)
    }

    #[inline]
    pub fn star_of(&self, s: usize) -> usize {
        self.star[s]
    }

    /// `PQ`: union of all cells `pq` with `p in P`, `q in Q`.
    pub fn set_product(&self, p: ElementSet, q: ElementSet) -> ElementSet {
        self.table.set_product(p, q)
    }

    /// `S* = { s* : s in S }`.
    pub fn star_of_set(&self, s: ElementSet) -> ElementSet {
        s.iter().map(|x| self.star[x]).collect()
    }

    pub fn is_thin_element(&self, s: usize) -> bool {
        self.product(self.star[s], s) == self.identity_set()
    }

    pub fn thin_elements(&self) -> ElementSet {
        (0..self.order()).filter(|&s| self.is_thin_element(s)).collect()
    }

    pub fn is_thin(&self) -> bool {
        self.thin_elements() == self.all()
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (a + 1..n).all(|b| self.product(a, b) == self.product(b, a)))
    }

    /// Applies a relabeling `perm` (old index -> new index) fixing 0.
    pub fn relabel(&self, perm: &[usize]) -> Hypergroup {
        let n = self.order();
        let mut inverse = vec![0; n];
        for (old, &new) in perm.iter().enumerate() {
            inverse[new] = old;
        }
        let table = Table::from_fn(n, |i, j| {
            self.product(inverse[i], inverse[j]).iter().map(|x| perm[x]).collect()
        });
        let star = (0..n).map(|i| perm[self.star[inverse[i]]]).collect();
        Hypergroup::from_trusted(table, star)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::fixtures;

    #[test]
    fn fixtures_validate_with_identity_star() {
        for h in [fixtures::t1(), fixtures::c2(), fixtures::k2(), fixtures::w3()] {
            let id: Vec<usize> = (0..h.order()).collect();
            assert_eq!(h.star(), id.as_slice());
        }
    }

    #[test]
    fn k2_products() {
        let k2 = fixtures::k2();
        assert_eq!(k2.set_product([1].into(), [1].into()), ElementSet::from([0, 1]));
        assert!(!k2.is_thin_element(1));
        assert!(k2.is_thin_element(0));
        assert_eq!(k2.thin_elements(), ElementSet::from([0]));
        assert!(!k2.is_thin());
        assert!(k2.is_commutative());
        assert_eq!(k2.star_of_set(k2.all()), k2.all());
    }

    #[test]
    fn w3_products() {
        let w3 = fixtures::w3();
        assert_eq!(w3.set_product([2].into(), [2].into()), ElementSet::from([0, 1]));
        assert_eq!(w3.star_of_set([2].into()), ElementSet::from([2]));
        assert_eq!(w3.thin_elements(), ElementSet::from([0, 1]));
        assert!(w3.is_thin_element(1) && !w3.is_thin_element(2));
        assert!(!w3.is_thin());
        assert!(w3.is_commutative());
    }

    #[test]
    fn c2_and_s3() {
        let c2 = fixtures::c2();
        assert!(c2.is_thin());
        assert_eq!(c2.thin_elements(), ElementSet::from([0, 1]));
        let s3 = fixtures::s3();
        assert!(s3.is_thin());
        assert!(!s3.is_commutative());
    }

    #[test]
    fn identity_left_multiplication() {
        for h in [fixtures::k2(), fixtures::w3(), fixtures::s3()] {
            for bits in 0..(1u64 << h.order()) {
                let q = ElementSet::from_bits(bits);
                assert_eq!(h.set_product(h.identity_set(), q), q);
                assert_eq!(h.set_product(ElementSet::EMPTY, q), ElementSet::EMPTY);
            }
        }
    }

    #[test]
    fn broken_k2_reports_exchange_failure() {
        let err = Hypergroup::from_cells(2, &[&[0], &[1], &[1], &[1]]).unwrap_err();
        let Error::Validation(err) = err else { panic!("{err:?}") };
        assert!(err.violations.contains(&Violation::H3Violation(1, 0, 1)), "{err:?}");
        assert!(err.violations.contains(&Violation::StarMissing));
    }

    #[test]
    fn empty_cell_rejected() {
        let err = Hypergroup::from_cells(2, &[&[0], &[1], &[1], &[]]).unwrap_err();
        let Error::Validation(err) = err else { panic!() };
        assert_eq!(err.first(), &Violation::EmptyCell(1, 1));
    }

    #[test]
    fn one_sided_identity_gets_its_own_code() {
        // 0 is a right identity but 0*1 = {0,1}.
        let err = Hypergroup::from_cells(2, &[&[0], &[0, 1], &[1], &[0, 1]]).unwrap_err();
        let Error::Validation(err) = err else { panic!() };
        assert!(err.violations.contains(&Violation::LeftIdentity(1)), "{err:?}");
        assert!(!err.violations.iter().any(|v| matches!(v, Violation::NoIdentity { .. })));
    }

    #[test]
    fn misplaced_identity() {
        // Identity is element 1.
        let err = Hypergroup::from_cells(2, &[&[1], &[0], &[0], &[1]]).unwrap_err();
        let Error::Validation(err) = err else { panic!() };
        assert!(matches!(err.first(), Violation::NoIdentity { witness: 0 }));
    }

    #[test]
    fn associativity_witness() {
        // Z/3 with the (1,1) cell corrupted.
        let err = Hypergroup::from_cells(
            3,
            &[&[0], &[1], &[2], &[1], &[1], &[0], &[2], &[0], &[1]],
        )
        .unwrap_err();
        let Error::Validation(err) = err else { panic!() };
        assert!(err.violations.iter().any(|v| matches!(v, Violation::AssociativityViolation(..))));
    }

    #[test]
    fn explicit_star_is_verified() {
        let table = fixtures::w3().table().clone();
        assert!(Hypergroup::new(table.clone(), Some(vec![0, 1, 2])).is_ok());
        let err = Hypergroup::new(table.clone(), Some(vec![0, 2, 1])).unwrap_err();
        assert!(matches!(err, Error::Validation(ref e) if matches!(e.first(), Violation::H3Violation(..))));
        let err = Hypergroup::new(table, Some(vec![1, 0, 2])).unwrap_err();
        assert!(matches!(err, Error::Validation(ref e) if matches!(e.first(), Violation::StarNotInvolution(0))));
    }

    #[test]
    fn cyclic_star_pairs_inverses() {
        let z5 = Hypergroup::cyclic(5);
        assert_eq!(z5.star(), &[0, 4, 3, 2, 1]);
        assert_eq!(infer_star(z5.table()).unwrap(), z5.star());
    }
}
