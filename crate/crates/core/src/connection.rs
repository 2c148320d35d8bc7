//! Christoffel data of linear connections on a chart with the standard
//! symplectic form.
//!
//! Symbols are stored lowered: `∇_{∂_i} ∂_j = Σ_{k,l} Γ_ijk ω_kl ∂_l`. With
//! this placement `(∇_a ω)(∂_b, ∂_c) = Γ_abc − Γ_acb`, so a torsionfree
//! connection is symplectic exactly when `Γ` is fully symmetric.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::matrix::{MatrixText, RatMatrix};
use crate::poly::BasePoly;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Christoffel {
    dim: usize,
    entries: Vec<BasePoly>,
}

impl Christoffel {
    pub fn zero(dim: usize) -> Self {
        Christoffel { dim, entries: vec![BasePoly::zero(dim); dim * dim * dim] }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize, usize) -> BasePoly) -> Self {
        let mut c = Christoffel::zero(dim);
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    c.set(i, j, k, f(i, j, k));
                }
            }
        }
        c
    }

    /// Levi-Civita symbols of a constant metric vanish; the metric is only
    /// validated (square, symmetric, invertible).
    pub fn from_constant_metric(metric: &RatMatrix) -> Result<Self> {
        if !metric.is_square() {
            return Err(Error::DimensionMismatch { expected: metric.rows(), found: metric.cols() });
        }
        if metric.transpose() != *metric {
            return Err(Error::NotSymmetric("metric".into()));
        }
        metric.inverse()?;
        Ok(Christoffel::zero(metric.rows()))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dim + j) * self.dim + k
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &BasePoly {
        &self.entries[self.idx(i, j, k)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: BasePoly) {
        let idx = self.idx(i, j, k);
        self.entries[idx] = v;
    }

    /// Set `Γ` at every permutation of `(i, j, k)`.
    pub fn set_symmetric(&mut self, i: usize, j: usize, k: usize, v: BasePoly) {
        for (a, b, c) in [(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)] {
            self.set(a, b, c, v.clone());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(BasePoly::is_zero)
    }

    fn indices(&self) -> impl Iterator<Item = (usize, usize, usize)> {
        let d = self.dim;
        (0..d).flat_map(move |i| (0..d).flat_map(move |j| (0..d).map(move |k| (i, j, k))))
    }

    /// Torsionfree: symmetric in the first two indices.
    pub fn torsion_violation(&self) -> Option<(usize, usize, usize)> {
        self.indices().find(|&(i, j, k)| self.get(i, j, k) != self.get(j, i, k))
    }

    pub fn is_torsionfree(&self) -> bool {
        self.torsion_violation().is_none()
    }

    pub fn symmetry_violation(&self) -> Option<(usize, usize, usize)> {
        self.indices()
            .find(|&(i, j, k)| self.get(i, j, k) != self.get(j, i, k) || self.get(i, j, k) != self.get(i, k, j))
    }

    pub fn is_fully_symmetric(&self) -> bool {
        self.symmetry_violation().is_none()
    }

    /// Components `(∇_a ω)(∂_b, ∂_c) = Γ_abc − Γ_acb`, indexed like `Γ`.
    pub fn nabla_omega(&self) -> Christoffel {
        Christoffel::from_fn(self.dim, |a, b, c| self.get(a, b, c) - self.get(a, c, b))
    }

    /// `∇ω = 0` identically.
    pub fn is_symplectic(&self) -> bool {
        self.nabla_omega().is_zero()
    }

    /// Pullback `(g·Γ)_abc(x) = Σ Γ_def(hx) h_da h_eb h_fc` with `h = g⁻¹`,
    /// matching the lifted action on the Weyl 1-form `½ Γ_ijk y_i y_j dx_k`.
    pub fn act(&self, g: &RatMatrix) -> Result<Christoffel> {
        if !g.is_square() || g.rows() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: g.rows() });
        }
        let h = g.inverse()?;
        let pulled: Vec<BasePoly> = self.entries.iter().map(|p| p.subst_linear(&h)).collect::<Result<_>>()?;
        let d = self.dim;
        let mut out = Christoffel::zero(d);
        for (a, b, c) in self.indices() {
            let mut acc = BasePoly::zero(d);
            for (e1, e2, e3) in self.indices() {
                let src = &pulled[self.idx(e1, e2, e3)];
                if src.is_zero() {
                    continue;
                }
                let w = h.get(e1, a) * h.get(e2, b) * h.get(e3, c);
                if w != BigRational::from_integer(0.into()) {
                    acc.add_scaled(src, &Scalar::real(w));
                }
            }
            out.set(a, b, c, acc);
        }
        Ok(out)
    }

    pub fn add(&self, other: &Christoffel) -> Christoffel {
        Christoffel::from_fn(self.dim, |i, j, k| self.get(i, j, k) + other.get(i, j, k))
    }

    pub fn scale(&self, q: &BigRational) -> Christoffel {
        Christoffel { dim: self.dim, entries: self.entries.iter().map(|p| p.scale_rational(q)).collect() }
    }

    /// Average over the group action.
    pub fn reynolds(&self, group: &FiniteGroup) -> Result<Christoffel> {
        let mut acc = Christoffel::zero(self.dim);
        for g in group.elements() {
            acc = acc.add(&self.act(g)?);
        }
        Ok(acc.scale(&BigRational::new(BigInt::from(1), BigInt::from(group.order()))))
    }

    /// Nonzero entries as `((i, j, k), poly)` with 0-based indices.
    pub fn nonzero_entries(&self) -> Vec<((usize, usize, usize), &BasePoly)> {
        self.indices()
            .filter(|&(i, j, k)| !self.get(i, j, k).is_zero())
            .map(|(i, j, k)| ((i, j, k), self.get(i, j, k)))
            .collect()
    }
}

/// Correct a torsionfree connection to a torsionfree symplectic one:
/// `Δ'(ξ1,ξ2,ξ3) = ⅓(∇ω(ξ3,ξ1,ξ2) + ∇ω(ξ2,ξ1,ξ3))`, lift the first slot with
/// `ω(·, Δ) = Δ'` and return `∇ + Δ`.
pub fn symplectize_connection(input: &Christoffel) -> Result<Christoffel> {
    if let Some((i, j, k)) = input.torsion_violation() {
        return Err(Error::NotSymmetric(format!(
            "Γ({},{},{}) != Γ({},{},{})",
            i + 1,
            j + 1,
            k + 1,
            j + 1,
            i + 1,
            k + 1
        )));
    }
    let t = input.nabla_omega();
    let third = Scalar::from_frac(1, 3);
    let d = input.dim();
    // Δ'_abc
    let delta_prime = Christoffel::from_fn(d, |a, b, c| (t.get(c, a, b) + t.get(b, a, c)).scale(&third));
    // ω(∇_b ∂_c, ∂_a) = −Γ_bca, so the correction to Γ_bca is Δ'_abc
    Ok(Christoffel::from_fn(d, |b, c, a| input.get(b, c, a) + delta_prime.get(a, b, c)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvarianceReport {
    pub invariant: bool,
    /// Element indices `g` with `g·Γ ≠ Γ`.
    pub violators: Vec<usize>,
    pub violator_matrices: Vec<MatrixText>,
}

/// Check `g·Γ = Γ` for every group element.
pub fn check_connection_invariance(christoffel: &Christoffel, group: &FiniteGroup) -> Result<InvarianceReport> {
    let mut violators = Vec::new();
    for (i, g) in group.elements().iter().enumerate() {
        if christoffel.act(g)? != *christoffel {
            violators.push(i);
        }
    }
    Ok(InvarianceReport {
        invariant: violators.is_empty(),
        violator_matrices: violators.iter().map(|&i| MatrixText::from(group.element(i))).collect(),
        violators,
    })
}
