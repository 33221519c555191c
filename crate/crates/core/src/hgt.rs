//! The HGT text format.
//!
//! ```text
//! hypergroup v1
//! order 2
//! star 0 1
//! 0 0 : 0
//! 0 1 : 1
//! 1 0 : 1
//! 1 1 : 0 1
//! ```
//!
//! The `star` line is optional on input. Cell lines list members in ascending
//! order; every one of the `n^2` cells must appear exactly once. Lines starting
//! with `#` are ignored.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::hypergroup::{Hypergroup, Table};
use crate::set::{ElementSet, MAX_ORDER};

const MAGIC: &str = "hypergroup v1";

/// A syntactically valid HGT document that has not been axiom-checked yet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawHgt {
    pub table: Table,
    pub star: Option<Vec<usize>>,
}

impl RawHgt {
    pub fn into_hypergroup(self) -> Result<Hypergroup> {
        Hypergroup::new(self.table, self.star)
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn parse_index(tok: &str, order: usize, line: usize) -> Result<usize> {
    let v: usize = tok
        .parse()
        .map_err(|_| parse_err(line, format!("expected an element index, found `{tok}`")))?;
    if v >= order {
        return Err(parse_err(line, format!("index {v} out of range for order {order}")));
    }
    Ok(v)
}

pub fn parse_raw(text: &str) -> Result<RawHgt> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (ln, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    if header != MAGIC {
        return Err(parse_err(ln, format!("expected `{MAGIC}`")));
    }
    let (ln, order_line) = lines.next().ok_or_else(|| parse_err(ln + 1, "missing `order` line"))?;
    let order: usize = match order_line.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["order", n] => n.parse().map_err(|_| parse_err(ln, format!("bad order `{n}`")))?,
        _ => return Err(parse_err(ln, "expected `order <n>`")),
    };
    if order == 0 || order > MAX_ORDER {
        return Err(parse_err(ln, format!("order must be in 1..={MAX_ORDER}")));
    }

    let mut star = None;
    let mut cells: Vec<Option<ElementSet>> = vec![None; order * order];
    let mut last_line = ln;
    for (ln, line) in lines {
        last_line = ln;
        if let Some(rest) = line.strip_prefix("star") {
            if star.is_some() || cells.iter().any(Option::is_some) {
                return Err(parse_err(ln, "`star` must appear once, before the cells"));
            }
            let s = rest
                .split_whitespace()
                .map(|t| parse_index(t, order, ln))
                .collect::<Result<Vec<_>>>()?;
            if s.len() != order {
                return Err(parse_err(ln, format!("star lists {} entries, expected {order}", s.len())));
            }
            star = Some(s);
            continue;
        }
        let (lhs, rhs) = line
            .split_once(':')
            .ok_or_else(|| parse_err(ln, "expected `<i> <j> : <k1> <k2> ...`"))?;
        let ij: Vec<&str> = lhs.split_whitespace().collect();
        let [i, j] = ij.as_slice() else {
            return Err(parse_err(ln, "expected two indices before `:`"));
        };
        let (i, j) = (parse_index(i, order, ln)?, parse_index(j, order, ln)?);
        let mut cell = ElementSet::EMPTY;
        let mut prev = None;
        for tok in rhs.split_whitespace() {
            let k = parse_index(tok, order, ln)?;
            if prev.is_some_and(|p| p >= k) {
                return Err(parse_err(ln, "cell members must be strictly ascending"));
            }
            prev = Some(k);
            cell.insert(k);
        }
        let slot = &mut cells[i * order + j];
        if slot.is_some() {
            return Err(parse_err(ln, format!("cell ({i}, {j}) given twice")));
        }
        *slot = Some(cell);
    }
    if let Some(k) = cells.iter().position(Option::is_none) {
        return Err(parse_err(
            last_line,
            format!("cell ({}, {}) is missing", k / order, k % order),
        ));
    }
    let table = Table::new(order, cells.into_iter().map(Option::unwrap).collect());
    Ok(RawHgt { table, star })
}

/// Parses and validates.
pub fn parse(text: &str) -> Result<Hypergroup> {
    parse_raw(text)?.into_hypergroup()
}

/// Canonical serialization; always includes the `star` line.
pub fn to_string(h: &Hypergroup) -> String {
    let mut out = String::new();
    write_to(&mut out, h);
    out
}

pub fn write_to(out: &mut String, h: &Hypergroup) {
    let n = h.order();
    out.push_str(MAGIC);
    out.push('\n');
    let _ = writeln!(out, "order {n}");
    out.push_str("star");
    for s in h.star() {
        let _ = write!(out, " {s}");
    }
    out.push('\n');
    for i in 0..n {
        for j in 0..n {
            let _ = write!(out, "{i} {j} :");
            for k in h.product(i, j) {
                let _ = write!(out, " {k}");
            }
            out.push('\n');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    const K2: &str = "hypergroup v1\norder 2\nstar 0 1\n0 0 : 0\n0 1 : 1\n1 0 : 1\n1 1 : 0 1\n";

    #[test]
    fn k2_is_bit_exact() {
        assert_eq!(to_string(&fixtures::k2()), K2);
        assert_eq!(parse(K2).unwrap(), fixtures::k2());
    }

    #[test]
    fn star_line_optional_and_comments_ignored() {
        let text = "# K2\nhypergroup v1\norder 2\n\n1 1 : 0 1\n# x\n0 0 : 0\n0 1 : 1\n1 0 : 1\n";
        assert_eq!(parse(text).unwrap(), fixtures::k2());
    }

    #[test]
    fn missing_cell() {
        let text = "hypergroup v1\norder 2\n0 0 : 0\n0 1 : 1\n1 0 : 1\n";
        let err = parse(text).unwrap_err();
        assert!(matches!(err, Error::Parse { ref message, .. } if message.contains("(1, 1) is missing")), "{err}");
    }

    #[test]
    fn malformed_inputs() {
        for (text, line) in [
            ("hypergroup v2\norder 1\n0 0 : 0\n", 1),
            ("hypergroup v1\norder x\n", 2),
            ("hypergroup v1\norder 1\n0 0 : 1\n", 3),
            ("hypergroup v1\norder 2\n0 0 : 0\n0 0 : 0\n", 4),
            ("hypergroup v1\norder 2\n0 0 : 1 0\n", 3),
            ("hypergroup v1\norder 2\nstar 0\n", 3),
            ("hypergroup v1\norder 1\n0 : 0\n", 3),
        ] {
            match parse_raw(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?} -> {other:?}"),
            }
        }
    }

    #[test]
    fn axiom_failures_surface_as_validation() {
        let text = "hypergroup v1\norder 2\n0 0 : 0\n0 1 : 1\n1 0 : 1\n1 1 : 1\n";
        assert!(matches!(parse(text), Err(Error::Validation(_))));
    }

    #[test]
    fn roundtrip_fixtures() {
        for h in [fixtures::t1(), fixtures::w3(), fixtures::s3()] {
            assert_eq!(parse(&to_string(&h)).unwrap(), h);
        }
    }
}
