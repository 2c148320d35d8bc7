//! Finite matrix groups acting linearly on a chart.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{MatrixText, RatMatrix};
use crate::poly::BasePoly;
use crate::scalar::Scalar;
use crate::weyl::{act_group_element, WeylForm};

/// A finite group given by its complete element list. Element 0 is the
/// identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    dim: usize,
    elements: Vec<RatMatrix>,
    generator_indices: Vec<usize>,
    table: Vec<Vec<usize>>,
    inverses: Vec<usize>,
}

/// Default cap on the closure size in [`enumerate_group`].
pub const DEFAULT_GROUP_BOUND: usize = 64;

/// Close `generators` under multiplication. Errors if a generator is
/// singular or the closure grows past `bound` elements.
pub fn enumerate_group(generators: &[RatMatrix], dim: usize, bound: usize) -> Result<FiniteGroup> {
    for g in generators {
        if !g.is_square() || g.rows() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: g.rows() });
        }
        g.inverse()?;
    }
    let mut elements = vec![RatMatrix::identity(dim)];
    let mut index: HashMap<RatMatrix, usize> = HashMap::from([(elements[0].clone(), 0)]);
    let mut frontier = 0;
    while frontier < elements.len() {
        let current = elements[frontier].clone();
        for g in generators {
            let next = g * &current;
            if !index.contains_key(&next) {
                if elements.len() == bound {
                    return Err(Error::GroupNotFinite { bound });
                }
                index.insert(next.clone(), elements.len());
                elements.push(next);
            }
        }
        frontier += 1;
    }
    let generator_indices = generators.iter().map(|g| index[g]).collect();
    let table: Vec<Vec<usize>> = elements.iter().map(|a| elements.iter().map(|b| index[&(a * b)]).collect()).collect();
    let inverses = (0..elements.len()).map(|i| table[i].iter().position(|&k| k == 0).expect("closed group")).collect();
    Ok(FiniteGroup { dim, elements, generator_indices, table, inverses })
}

impl FiniteGroup {
    pub fn trivial(dim: usize) -> Self {
        enumerate_group(&[], dim, 1).expect("trivial group")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[RatMatrix] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &RatMatrix {
        &self.elements[i]
    }

    pub fn generator_indices(&self) -> &[usize] {
        &self.generator_indices
    }

    pub fn generators(&self) -> Vec<RatMatrix> {
        self.generator_indices.iter().map(|&i| self.elements[i].clone()).collect()
    }

    /// Index of `elements[a] · elements[b]`.
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn index_of(&self, m: &RatMatrix) -> Option<usize> {
        self.elements.iter().position(|e| e == m)
    }

    pub fn contains(&self, m: &RatMatrix) -> bool {
        self.index_of(m).is_some()
    }

    pub fn check_symplectic(&self) -> SymplecticReport {
        check_symplectic_action(&self.elements)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymplecticReport {
    pub symplectic: bool,
    /// Positions (in the input list) of matrices with `gᵀωg ≠ ω`.
    pub violators: Vec<usize>,
    pub violator_matrices: Vec<MatrixText>,
}

/// Check `gᵀ ω g = ω` for every listed matrix.
pub fn check_symplectic_action(elements: &[RatMatrix]) -> SymplecticReport {
    let violators: Vec<usize> =
        elements.iter().enumerate().filter(|(_, g)| !g.is_symplectic()).map(|(i, _)| i).collect();
    SymplecticReport {
        symplectic: violators.is_empty(),
        violator_matrices: violators.iter().map(|&i| MatrixText::from(&elements[i])).collect(),
        violators,
    }
}

/// Objects on which a linear group element acts from the left.
pub trait GroupAction: Sized {
    fn act(&self, g: &RatMatrix) -> Result<Self>;
    fn add(&self, other: &Self) -> Self;
    fn scale(&self, q: &BigRational) -> Self;
    fn zero_like(&self) -> Self;
}

impl GroupAction for BasePoly {
    /// `(g·f)(x) = f(g⁻¹x)`.
    fn act(&self, g: &RatMatrix) -> Result<Self> {
        self.subst_linear(&g.inverse()?)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn scale(&self, q: &BigRational) -> Self {
        self.scale_rational(q)
    }
    fn zero_like(&self) -> Self {
        BasePoly::zero(self.nvars())
    }
}

impl GroupAction for WeylForm {
    fn act(&self, g: &RatMatrix) -> Result<Self> {
        act_group_element(self, g)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn scale(&self, q: &BigRational) -> Self {
        WeylForm::scale(self, &Scalar::real(q.clone()))
    }
    fn zero_like(&self) -> Self {
        WeylForm::zero(self.policy())
    }
}

/// `(1/|G|) Σ_g g·f`: exactly invariant and idempotent.
pub fn reynolds_average<T: GroupAction>(f: &T, group: &FiniteGroup) -> Result<T> {
    let mut acc = f.zero_like();
    for g in group.elements() {
        acc = acc.add(&f.act(g)?);
    }
    Ok(acc.scale(&BigRational::new(BigInt::from(1), BigInt::from(group.order()))))
}

/// True if `g·f = f` for every group element.
pub fn is_invariant<T: GroupAction + PartialEq>(f: &T, group: &FiniteGroup) -> Result<bool> {
    for g in group.elements() {
        if f.act(g)? != *f {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Frequently used fixtures.
pub mod standard {
    use super::*;

    /// `[[0,-1],[1,0]]`, the quarter turn generating `Z4` on `R²`.
    pub fn quarter_turn() -> RatMatrix {
        RatMatrix::from_ints(&[&[0, -1], &[1, 0]])
    }

    /// Order-3 rotation `[[0,-1],[1,-1]]` on `R²`.
    pub fn third_turn() -> RatMatrix {
        RatMatrix::from_ints(&[&[0, -1], &[1, -1]])
    }

    /// Embed a 2×2 block acting on the symplectic pair `(x_{j+1}, x_{n+j+1})`.
    pub fn on_pair(block: &RatMatrix, j: usize, dim: usize) -> RatMatrix {
        let n = dim / 2;
        let mut m = RatMatrix::identity(dim);
        let idx = [j, n + j];
        for (a, &ra) in idx.iter().enumerate() {
            for (b, &cb) in idx.iter().enumerate() {
                m.set(ra, cb, block.get(a, b).clone());
            }
        }
        m
    }

    /// Exchange the two symplectic pairs of `R⁴`.
    pub fn swap_pairs() -> RatMatrix {
        RatMatrix::from_ints(&[&[0, 1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, 1, 0]])
    }

    pub fn minus_identity(dim: usize) -> RatMatrix {
        RatMatrix::identity(dim).neg()
    }
}
