//! Necessary conditions for a subgroup `H = F * (*ⱼ Hⱼ^{gⱼ})` of a free
//! product of finite groups to be verbally closed.
//!
//! Passing every check proves nothing: the conditions are necessary only, so
//! a passing verdict is always reported as inconclusive.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::finite_group::ElementId;
use crate::free_product::{FpElement, FreeProduct, SubgroupPart};

/// Kurosh-style description of a subgroup: a free part of the given rank and
/// a list of conjugated finite parts.
#[derive(Debug, Clone)]
pub struct KuroshData {
    pub ambient: Arc<FreeProduct>,
    pub free_rank: usize,
    /// Optional free basis, informational only.
    pub free_basis: Vec<FpElement>,
    pub parts: Vec<SubgroupPart>,
}

impl KuroshData {
    pub fn new(ambient: &Arc<FreeProduct>, free_rank: usize, parts: Vec<SubgroupPart>) -> Self {
        KuroshData { ambient: Arc::clone(ambient), free_rank, free_basis: Vec::new(), parts }
    }

    /// Collects every problem instead of stopping at the first.
    pub fn validate(&self) -> std::result::Result<(), Vec<Error>> {
        let mut errors = Vec::new();
        if self.parts.is_empty() && self.free_rank == 0 {
            errors.push(Error::EmptyDecomposition);
        }
        for (pos, part) in self.parts.iter().enumerate() {
            if let Err(e) = part.validate(&self.ambient, pos) {
                errors.push(e);
            }
        }
        if self.free_basis.iter().any(|b| !Arc::ptr_eq(b.ambient(), &self.ambient)) {
            errors.push(Error::MixedAmbient);
        }
        if errors.is_empty() {
            Ok(())
        } else {
            Err(errors)
        }
    }

    /// Ordered pairs of distinct positions sharing a factor.
    fn same_factor_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.parts.len();
        (0..n)
            .flat_map(move |j1| (0..n).map(move |j2| (j1, j2)))
            .filter(|&(j1, j2)| j1 != j2 && self.parts[j1].factor == self.parts[j2].factor)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Witness {
    pub first_part: usize,
    pub second_part: usize,
    pub factor: usize,
    pub f: ElementId,
    pub g: ElementId,
    pub k1: u32,
    pub k2: u32,
}

impl Witness {
    /// `f^{k₁} ∈ H_{j₁}∖{1}` and `f^{k₂} ∈ g·H_{j₂}·g⁻¹∖{1}`, checked from
    /// scratch.
    pub fn verify(&self, data: &KuroshData) -> bool {
        let Ok(group) = data.ambient.factor(self.factor) else { return false };
        let (Some(h1), Some(h2)) = (data.parts.get(self.first_part), data.parts.get(self.second_part)) else {
            return false;
        };
        if h1.factor != self.factor || h2.factor != self.factor || self.first_part == self.second_part {
            return false;
        }
        let Ok(h2g) = group.conjugate_subgroup(&h2.subgroup, self.g) else { return false };
        let p1 = group.pow(self.f, self.k1 as i64);
        let p2 = group.pow(self.f, self.k2 as i64);
        !p1.is_identity() && !p2.is_identity() && h1.subgroup.contains(&p1) && h2g.contains(&p2)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// The free part is nontrivial.
    FreePart { free_rank: usize },
    /// Powers of one element land in two different parts.
    SharedPowers(Witness),
    /// Two parts intersect nontrivially after conjugation within the
    /// factor; `k1 = k2 = 1`.
    Intersection(Witness),
}

impl Violation {
    pub fn condition(&self) -> u8 {
        match self {
            Violation::FreePart { .. } => 1,
            Violation::SharedPowers(_) => 2,
            Violation::Intersection(_) => 3,
        }
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Violation::FreePart { .. } => None,
            Violation::SharedPowers(w) | Violation::Intersection(w) => Some(w),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::FreePart { free_rank } => write!(f, "condition 1: free part has rank {free_rank}"),
            Violation::SharedPowers(w) | Violation::Intersection(w) => write!(
                f,
                "condition {}: parts {} and {} in factor {}: f={} g={} k1={} k2={}",
                self.condition(),
                w.first_part,
                w.second_part,
                w.factor,
                w.f,
                w.g,
                w.k1,
                w.k2
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    FailsNecessary(Vec<Violation>),
    /// The flag is always set: passing does not establish closedness.
    PassesNecessary {
        inconclusive: bool,
    },
}

impl Verdict {
    pub fn passes(&self) -> bool {
        matches!(self, Verdict::PassesNecessary { .. })
    }

    pub fn violations(&self) -> &[Violation] {
        match self {
            Verdict::FailsNecessary(v) => v,
            Verdict::PassesNecessary { .. } => &[],
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::FailsNecessary(_) => f.write_str("fails necessary conditions"),
            Verdict::PassesNecessary { .. } => f.write_str("passes necessary conditions (inconclusive)"),
        }
    }
}

pub fn check_condition1(data: &KuroshData) -> Option<Violation> {
    (data.free_rank > 0).then_some(Violation::FreePart { free_rank: data.free_rank })
}

/// First witness per ordered pair, scanning `f`, then `g`, then `k₁`, `k₂`.
fn pair_witness(data: &KuroshData, j1: usize, j2: usize, only_first_powers: bool) -> Result<Option<Witness>> {
    let factor = data.parts[j1].factor;
    let group = data.ambient.factor(factor)?;
    let h1 = &data.parts[j1].subgroup;
    let h2 = &data.parts[j2].subgroup;
    let conjugates: Vec<_> = group.elements().map(|g| group.conjugate_subgroup(h2, g)).collect::<Result<_>>()?;
    for f in group.elements().filter(|f| !f.is_identity()) {
        let max_k = if only_first_powers { 1 } else { group.element_order(f)? };
        let powers: Vec<ElementId> = (1..=max_k).map(|k| group.pow(f, k as i64)).collect();
        for g in group.elements() {
            let h2g = &conjugates[g.index()];
            for k1 in 1..=max_k {
                let p1 = powers[k1 as usize - 1];
                if p1.is_identity() || !h1.contains(&p1) {
                    continue;
                }
                for k2 in 1..=max_k {
                    let p2 = powers[k2 as usize - 1];
                    if !p2.is_identity() && h2g.contains(&p2) {
                        return Ok(Some(Witness { first_part: j1, second_part: j2, factor, f, g, k1, k2 }));
                    }
                }
            }
        }
    }
    Ok(None)
}

fn scan(data: &KuroshData, only_first_powers: bool) -> Result<Vec<Witness>> {
    let mut out = Vec::new();
    for (j1, j2) in data.same_factor_pairs() {
        if let Some(w) = pair_witness(data, j1, j2, only_first_powers)? {
            debug_assert!(w.verify(data));
            out.push(w);
        }
    }
    Ok(out)
}

/// Ordered same-factor pairs `(j₁, j₂)` admitting `f, g ∈ G_i` and
/// `k₁, k₂ ≥ 1` with `f^{k₁} ∈ H_{j₁}∖{1}` and `f^{k₂} ∈ H_{j₂}^g∖{1}`.
pub fn check_condition2(data: &KuroshData) -> Result<Vec<Violation>> {
    Ok(scan(data, false)?.into_iter().map(Violation::SharedPowers).collect())
}

/// Ordered same-factor pairs with `H_{j₁} ∩ g·H_{j₂}·g⁻¹ ≠ {1}` for some
/// `g ∈ G_i`.
pub fn check_condition3(data: &KuroshData) -> Result<Vec<Violation>> {
    Ok(scan(data, true)?.into_iter().map(Violation::Intersection).collect())
}

/// Runs conditions 1 and 2. Condition 3 is implied by condition 2 and is
/// not repeated here.
pub fn check_all(data: &KuroshData) -> Result<Verdict> {
    let mut violations: Vec<Violation> = check_condition1(data).into_iter().collect();
    violations.extend(check_condition2(data)?);
    Ok(if violations.is_empty() {
        Verdict::PassesNecessary { inconclusive: true }
    } else {
        Verdict::FailsNecessary(violations)
    })
}
