//! Checks on invariant polynomials and the Poisson bracket of the standard
//! symplectic form.

use serde::Serialize;

use crate::error::Result;
use crate::group::{is_invariant, FiniteGroup};
use crate::poly::BasePoly;

/// `{f,g} = Σ_j (∂_j f ∂_{n+j} g − ∂_{n+j} f ∂_j g)`.
pub fn poisson_bracket(f: &BasePoly, g: &BasePoly) -> Result<BasePoly> {
    let dim = f.nvars();
    if g.nvars() != dim {
        return Err(crate::Error::VariableMismatch { left: dim, right: g.nvars() });
    }
    let n = dim / 2;
    let mut out = BasePoly::zero(dim);
    for j in 0..n {
        out.add_assign_ref(&(&f.diff(j)? * &g.diff(n + j)?));
        out = &out - &(&f.diff(n + j)? * &g.diff(j)?);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HilbertReport {
    pub invariant: Vec<bool>,
    pub homogeneous: Vec<bool>,
    pub relations: Vec<bool>,
}

impl HilbertReport {
    pub fn all_invariant(&self) -> bool {
        self.invariant.iter().all(|&b| b)
    }

    pub fn all_homogeneous(&self) -> bool {
        self.homogeneous.iter().all(|&b| b)
    }

    pub fn relations_hold(&self) -> bool {
        self.relations.iter().all(|&b| b)
    }

    pub fn passed(&self) -> bool {
        self.all_invariant() && self.all_homogeneous() && self.relations_hold()
    }
}

/// Verify a proposed homogeneous Hilbert basis: each polynomial is
/// invariant and homogeneous, and each relation (a polynomial in auxiliary
/// variables `z1..zm`, one per basis element) vanishes after substituting
/// the basis. Generation of the invariant ring is not checked.
pub fn verify_hilbert_basis(polys: &[BasePoly], group: &FiniteGroup, relations: &[BasePoly]) -> Result<HilbertReport> {
    let invariant = polys.iter().map(|p| is_invariant(p, group)).collect::<Result<Vec<_>>>()?;
    let homogeneous = polys.iter().map(BasePoly::is_homogeneous).collect();
    let relations = relations.iter().map(|r| Ok(r.compose(polys)?.is_zero())).collect::<Result<Vec<_>>>()?;
    Ok(HilbertReport { invariant, homogeneous, relations })
}
