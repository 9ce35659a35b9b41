//! Curves shared by the unit tests.

use alloc::vec::Vec;

use crate::puiseux::{parse_branch, BranchRecord};

pub(crate) const EWMANY: [(&str, &str); 5] = [
    ("C1", "x^2"),
    ("C2", "x^(5/2) + x^(8/3)"),
    ("C3", "-x^(5/2) + x^(11/4)"),
    ("C4", "x^(7/2) + x^(17/4)"),
    ("C5", "x^(7/2) + 2*x^(17/4) + x^(14/3)"),
];

pub(crate) fn records(entries: &[(&str, &str)]) -> Vec<BranchRecord> {
    entries.iter()
        .map(|(name, s)| {
            if *s == "L" {
                BranchRecord::reference(*name)
            } else {
                BranchRecord::series(*name, parse_branch(s).unwrap())
            }
        })
        .collect()
}

pub(crate) fn ewmany() -> Vec<BranchRecord> {
    records(&EWMANY)
}

pub(crate) fn ewmany_with_l() -> Vec<BranchRecord> {
    let mut r = ewmany();
    r.push(BranchRecord::reference("L"));
    r
}
