use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Zero;

use super::PuiseuxSeries;
use crate::arith::{denom_u64, uint, Ext, Rational};

/// Either the reference branch `L = Z(x)` or a branch `y = η(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Branch {
    L,
    Series(PuiseuxSeries),
}

/// A named branch with its characteristic data precomputed.
#[derive(Clone, Debug)]
pub struct BranchRecord {
    name: String,
    branch: Branch,
    char_exponents: Vec<Rational>,
    index_steps: Vec<(Rational, u64)>,
    lead_order: Ext,
}

impl BranchRecord {
    pub fn new(name: impl Into<String>, branch: Branch) -> Self {
        let (char_exponents, lead_order) = match &branch {
            Branch::L => (Vec::new(), Ext::Infinite),
            Branch::Series(s) => (s.characteristic_exponents(), s.order()),
        };
        let mut index_steps = alloc::vec![(Rational::zero(), 1u64)];
        for e in &char_exponents {
            let prev = index_steps.last().expect("nonempty").1;
            index_steps.push((e.clone(), num_integer::lcm(prev, denom_u64(e))));
        }
        BranchRecord { name: name.into(), branch, char_exponents, index_steps, lead_order }
    }

    pub fn series(name: impl Into<String>, series: PuiseuxSeries) -> Self {
        Self::new(name, Branch::Series(series))
    }

    pub fn reference(name: impl Into<String>) -> Self {
        Self::new(name, Branch::L)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn branch(&self) -> &Branch {
        &self.branch
    }

    pub fn is_l(&self) -> bool {
        matches!(self.branch, Branch::L)
    }

    pub fn as_series(&self) -> Option<&PuiseuxSeries> {
        match &self.branch {
            Branch::Series(s) => Some(s),
            Branch::L => None,
        }
    }

    pub fn char_exponents(&self) -> &[Rational] {
        &self.char_exponents
    }

    /// `(threshold, index)` pairs: the index is `index` on exponents strictly
    /// above `threshold` (up to the next threshold).
    pub fn index_steps(&self) -> &[(Rational, u64)] {
        &self.index_steps
    }

    /// `ν_x` of the series; `∞` for `L`.
    pub fn lead_order(&self) -> &Ext {
        &self.lead_order
    }

    /// `(L·A)`, the ramification index; `None` for `L` itself.
    pub fn ramification_index(&self) -> Option<u64> {
        self.as_series().map(PuiseuxSeries::ramification_index)
    }

    /// Whether the two records describe the same branch, regardless of name.
    pub fn same_branch(&self, other: &BranchRecord) -> bool {
        match (&self.branch, &other.branch) {
            (Branch::L, Branch::L) => true,
            (Branch::Series(a), Branch::Series(b)) => a.same_branch(b),
            _ => false,
        }
    }

    pub fn is_smooth(&self) -> bool {
        multiplicity_origin(self) == 1
    }
}

/// Intersection multiplicity computed directly from the series:
/// `n_a · Σ_k ν_x(η_a − conj_k(η_b))`.
///
/// With `L` on one side this is the ramification index of the other branch.
pub fn intersection_oracle(a: &BranchRecord, b: &BranchRecord) -> Ext {
    match (&a.branch, &b.branch) {
        (Branch::L, Branch::L) => Ext::Infinite,
        (Branch::L, Branch::Series(s)) | (Branch::Series(s), Branch::L) => {
            Ext::Finite(uint(s.ramification_index()))
        }
        (Branch::Series(sa), Branch::Series(sb)) => {
            let mut total = Ext::zero();
            for k in 0..sb.ramification_index() {
                total = total.add(&sa.sub(&sb.conjugate(k)).order());
            }
            total.scale(&uint(sa.ramification_index()))
        }
    }
}

/// Multiplicity at the origin, `min(n, n·ν_x)`.
pub fn multiplicity_origin(a: &BranchRecord) -> u64 {
    match &a.branch {
        Branch::L => 1,
        Branch::Series(s) => {
            let n = s.ramification_index();
            match s.order() {
                Ext::Infinite => 1,
                Ext::Finite(v) => {
                    let nv = crate::arith::to_u64_exact(&(v * uint(n))).expect("n·ν is integral");
                    n.min(nv)
                }
            }
        }
    }
}
