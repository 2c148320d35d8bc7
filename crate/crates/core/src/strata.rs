//! Orbit-type stratification of a finite linear action.
//!
//! Subgroups are enumerated as joins of cyclic subgroups. A subgroup `H` is
//! an occupied isotropy type iff its fixed space is not swallowed by the
//! fixed space of a strictly larger subgroup; over `Q` a subspace lies in a
//! finite union of subspaces only if it lies in one of them, so the test is
//! a dimension comparison.

use std::collections::{BTreeSet, HashMap};

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::matrix::RatMatrix;
use crate::parallel;

/// Default and maximal subgroup-enumeration budget (group order).
pub const DEFAULT_SUBGROUP_BUDGET: usize = 64;

/// Subgroups are bitmasks over element indices.
type Mask = u64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StratumDescriptor {
    /// The conjugacy class of isotropy subgroups, each as sorted element
    /// indices.
    pub isotropy_class: Vec<Vec<usize>>,
    pub isotropy_order: usize,
    pub fixed_dim: usize,
    pub is_principal: bool,
}

impl StratumDescriptor {
    pub fn class_size(&self) -> usize {
        self.isotropy_class.len()
    }

    pub fn contains_subgroup(&self, elements: &[usize]) -> bool {
        let mut sorted = elements.to_vec();
        sorted.sort_unstable();
        self.isotropy_class.contains(&sorted)
    }
}

fn members(mask: Mask) -> Vec<usize> {
    (0..64).filter(|i| mask & (1 << i) != 0).collect()
}

fn closure(group: &FiniteGroup, seed: Mask) -> Mask {
    let mut mask = seed | 1;
    loop {
        let mut next = mask;
        let m = members(mask);
        for &a in &m {
            for &b in &m {
                next |= 1 << group.mul(a, b);
            }
        }
        if next == mask {
            return mask;
        }
        mask = next;
    }
}

/// All subgroups of `group`, as element-index masks, sorted.
pub fn enumerate_subgroups(group: &FiniteGroup, budget: usize) -> Result<Vec<Mask>> {
    let order = group.order();
    if order > budget.min(DEFAULT_SUBGROUP_BUDGET) {
        return Err(Error::SubgroupBudget { order, budget: budget.min(DEFAULT_SUBGROUP_BUDGET) });
    }
    let cyclic: BTreeSet<Mask> = (0..order).map(|g| closure(group, 1 << g)).collect();
    let mut all: BTreeSet<Mask> = cyclic.clone();
    let mut frontier: Vec<Mask> = cyclic.iter().copied().collect();
    while !frontier.is_empty() {
        let joins: Vec<Vec<Mask>> =
            parallel::map(&frontier, |&h| cyclic.iter().map(|&c| closure(group, h | c)).collect());
        frontier = Vec::new();
        for j in joins.into_iter().flatten() {
            if all.insert(j) {
                frontier.push(j);
            }
        }
    }
    Ok(all.into_iter().collect())
}

/// Basis of the common fixed space `{v : hv = v for all h ∈ H}`.
pub fn fixed_space(group: &FiniteGroup, subgroup: &[usize]) -> Vec<Vec<BigRational>> {
    let dim = group.dim();
    let id = RatMatrix::identity(dim);
    let blocks: Vec<RatMatrix> = subgroup.iter().map(|&h| group.element(h).sub(&id)).collect();
    if blocks.is_empty() {
        return id.nullspace();
    }
    RatMatrix::vstack(&blocks).expect("square blocks").nullspace()
}

fn fixed_dim(group: &FiniteGroup, mask: Mask) -> usize {
    fixed_space(group, &members(mask)).len()
}

fn conjugate(group: &FiniteGroup, mask: Mask, g: usize) -> Mask {
    let gi = group.inverse(g);
    members(mask).into_iter().fold(0, |acc, h| acc | 1 << group.mul(group.mul(g, h), gi))
}

/// Exact orbit-type stratification, sorted by `(fixed_dim, class size)`.
pub fn orbit_type_stratification(group: &FiniteGroup, budget: usize) -> Result<Vec<StratumDescriptor>> {
    let subgroups = enumerate_subgroups(group, budget)?;
    let dims: HashMap<Mask, usize> =
        subgroups.iter().copied().zip(parallel::map(&subgroups, |&h| fixed_dim(group, h))).collect();
    let occupied: Vec<Mask> = subgroups
        .iter()
        .copied()
        .filter(|&h| subgroups.iter().all(|&k| k == h || k & h != h || dims[&k] < dims[&h]))
        .collect();

    let mut seen: BTreeSet<Mask> = BTreeSet::new();
    let mut strata = Vec::new();
    for &h in &occupied {
        if seen.contains(&h) {
            continue;
        }
        let class: BTreeSet<Mask> = (0..group.order()).map(|g| conjugate(group, h, g)).collect();
        seen.extend(class.iter().copied());
        strata.push(StratumDescriptor {
            isotropy_class: class.iter().map(|&m| members(m)).collect(),
            isotropy_order: h.count_ones() as usize,
            fixed_dim: dims[&h],
            is_principal: false,
        });
    }
    let top = strata.iter().map(|s| s.fixed_dim).max().unwrap_or(0);
    for s in &mut strata {
        s.is_principal = s.fixed_dim == top;
    }
    strata.sort_by(|a, b| {
        (a.fixed_dim, a.class_size(), a.isotropy_order, &a.isotropy_class).cmp(&(
            b.fixed_dim,
            b.class_size(),
            b.isotropy_order,
            &b.isotropy_class,
        ))
    });
    Ok(strata)
}

/// Isotropy subgroup `{g : g·x = x}` of a point, as element indices.
pub fn isotropy_of_point(group: &FiniteGroup, x: &[BigRational]) -> Vec<usize> {
    (0..group.order()).filter(|&g| group.element(g).mul_vec(x).iter().zip(x).all(|(a, b)| (a - b).is_zero())).collect()
}
