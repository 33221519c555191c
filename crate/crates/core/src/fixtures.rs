//! Small named hypergroups used throughout tests, benches and docs.

use crate::hypergroup::Hypergroup;

/// The trivial hypergroup `{0}`.
pub fn t1() -> Hypergroup {
    Hypergroup::from_cells(1, &[&[0]]).expect("T1 is a hypergroup")
}

/// The cyclic group of order 2 as a thin hypergroup.
pub fn c2() -> Hypergroup {
    Hypergroup::from_cells(2, &[&[0], &[1], &[1], &[0]]).expect("C2 is a hypergroup")
}

/// Order 2 with `1 + 1 = {0, 1}`: commutative, not residually thin.
pub fn k2() -> Hypergroup {
    Hypergroup::from_cells(2, &[&[0], &[1], &[1], &[0, 1]]).expect("K2 is a hypergroup")
}

/// Order 3 commutative table with `2 + 2 = {0, 1}`: weakly nilpotent but not thin.
pub fn w3() -> Hypergroup {
    #[rustfmt::skip]
    let cells: [&[usize]; 9] = [
        &[0], &[1], &[2],
        &[1], &[0], &[2],
        &[2], &[2], &[0, 1],
    ];
    Hypergroup::from_cells(3, &cells).expect("W3 is a hypergroup")
}

/// The symmetric group on three letters; elements are
/// `e, (12), (13), (23), (123), (132)`.
pub fn s3() -> Hypergroup {
    // Permutations of {0,1,2} as image arrays, composed as (a*b)(x) = a(b(x)).
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [1, 0, 2], [2, 1, 0], [0, 2, 1], [1, 2, 0], [2, 0, 1]];
    let index = |p: [usize; 3]| PERMS.iter().position(|&q| q == p).unwrap();
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for a in PERMS {
        for b in PERMS {
            cells.push(vec![index([a[b[0]], a[b[1]], a[b[2]]])]);
        }
    }
    let refs: Vec<&[usize]> = cells.iter().map(Vec::as_slice).collect();
    Hypergroup::from_cells(6, &refs).expect("S3 is a hypergroup")
}
