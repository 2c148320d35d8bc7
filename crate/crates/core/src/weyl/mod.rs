//! Truncated sections of the Weyl-algebra form bundle over a linear chart.
//!
//! A [`WeylForm`] is a finite sum of terms
//! `f(x) · y^α · dx_{j1}∧…∧dx_{jl} · λ^k`
//! keyed by `(k, α, J)` with a base polynomial coefficient `f`. Every stored
//! term has Fedosov degree `|α| + 2k` at most the policy's `n_max`.

mod action;
mod koszul;
mod moyal;

pub use action::act_group_element;
pub use koszul::{delta, delta_minus, delta_star, exterior_d, hodge_decompose, symbol, symbol_series, HodgeParts};
pub use moyal::{ad_lambda, graded_commutator, lambda_divide, moyal_mul};

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{display_order, fmt_monomial, join_signed, BasePoly, MultiIndex};
use crate::scalar::Scalar;

/// Global sign applied to the Poisson tensor inside the fiberwise product.
///
/// `pi_sign = +1` reproduces `y1 ∘ y2 = y1·y2 − iλ/2` literally; the default
/// `-1` is the choice for which `[f, g]_⋆ = iλ{f, g}` with the standard
/// bracket and for which `δ = −(i/λ)[Σ ω_kl y_k dx_l, ·]` holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Convention {
    pub pi_sign: i8,
}

impl Convention {
    pub const LITERAL: Convention = Convention { pi_sign: 1 };
    pub const CANONICAL: Convention = Convention { pi_sign: -1 };

    pub fn flipped(self) -> Convention {
        Convention { pi_sign: -self.pi_sign }
    }
}

impl Default for Convention {
    fn default() -> Self {
        Convention::CANONICAL
    }
}

/// Dimension `2n`, maximal retained Fedosov degree, and product convention.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TruncationPolicy {
    pub dim: usize,
    pub n_max: u32,
    pub convention: Convention,
}

impl TruncationPolicy {
    pub fn new(dim: usize, n_max: u32) -> Result<Self> {
        Self::with_convention(dim, n_max, Convention::default())
    }

    pub fn with_convention(dim: usize, n_max: u32, convention: Convention) -> Result<Self> {
        if dim == 0 || !dim.is_multiple_of(2) {
            return Err(Error::OddDimension(dim));
        }
        if dim > 32 {
            return Err(Error::DimensionMismatch { expected: 32, found: dim });
        }
        Ok(TruncationPolicy { dim, n_max, convention })
    }

    pub fn half_dim(&self) -> usize {
        self.dim / 2
    }

    pub fn with_n_max(self, n_max: u32) -> Self {
        TruncationPolicy { n_max, ..self }
    }

    pub(crate) fn check_same(&self, other: &TruncationPolicy) -> Result<()> {
        if self != other {
            return Err(Error::PolicyMismatch(format!("{self:?} vs {other:?}")));
        }
        Ok(())
    }
}

/// Key of one term: λ-power, fiber exponent `α`, and the form indices `J`
/// as a bitmask (bit `j` set for `dx_{j+1}`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylKey {
    pub lambda: u32,
    pub y: MultiIndex,
    pub forms: u32,
}

impl WeylKey {
    pub fn new(lambda: u32, y: MultiIndex, forms: u32) -> Self {
        WeylKey { lambda, y, forms }
    }

    /// `|α| + 2k`.
    pub fn fedosov_degree(&self) -> u32 {
        self.y.degree() + 2 * self.lambda
    }

    pub fn form_degree(&self) -> u32 {
        self.forms.count_ones()
    }

    pub fn form_indices(&self) -> Vec<usize> {
        (0..32).filter(|j| self.forms & (1 << j) != 0).collect()
    }
}

/// Sign of `dx_J1 ∧ dx_J2` relative to the sorted wedge, or `None` if the
/// sets overlap.
pub(crate) fn wedge_sign(j1: u32, j2: u32) -> Option<(u32, bool)> {
    if j1 & j2 != 0 {
        return None;
    }
    let mut swaps = 0u32;
    let mut rest = j2;
    while rest != 0 {
        let b = rest.trailing_zeros();
        swaps += j1.checked_shr(b + 1).unwrap_or(0).count_ones();
        rest &= rest - 1;
    }
    Some((j1 | j2, swaps % 2 == 1))
}

/// Bitmask and sign for an arbitrary list of form indices.
pub fn normalize_forms(indices: &[usize]) -> Option<(u32, bool)> {
    let mut mask = 0u32;
    let mut negative = false;
    for &j in indices {
        let (m, s) = wedge_sign(mask, 1 << j)?;
        mask = m;
        negative ^= s;
    }
    Some((mask, negative))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylForm {
    policy: TruncationPolicy,
    terms: BTreeMap<WeylKey, BasePoly>,
}

impl WeylForm {
    pub fn zero(policy: TruncationPolicy) -> Self {
        WeylForm { policy, terms: BTreeMap::new() }
    }

    pub fn one(policy: TruncationPolicy) -> Self {
        Self::from_base(policy, &BasePoly::one(policy.dim))
    }

    /// A base polynomial as a 0-form with no fiber dependence.
    pub fn from_base(policy: TruncationPolicy, f: &BasePoly) -> Self {
        Self::from_lambda_series(policy, std::slice::from_ref(f))
    }

    /// `Σ_k λ^k f_k` as a 0-form.
    pub fn from_lambda_series(policy: TruncationPolicy, series: &[BasePoly]) -> Self {
        let mut out = WeylForm::zero(policy);
        for (k, f) in series.iter().enumerate() {
            out.add_term(WeylKey::new(k as u32, MultiIndex::zero(policy.dim), 0), f);
        }
        out
    }

    /// `coeff · y^y · λ^lambda · dx_{forms[0]} ∧ …` with 0-based form
    /// indices in any order; the sign is normalized on insertion.
    pub fn term(policy: TruncationPolicy, lambda: u32, y: &[u32], forms: &[usize], coeff: &BasePoly) -> Self {
        let mut out = WeylForm::zero(policy);
        assert_eq!(y.len(), policy.dim, "fiber exponent arity");
        assert!(forms.iter().all(|&j| j < policy.dim), "form index");
        if let Some((mask, negative)) = normalize_forms(forms) {
            let c = if negative { -coeff } else { coeff.clone() };
            out.add_term(WeylKey::new(lambda, MultiIndex::from_slice(y), mask), &c);
        }
        out
    }

    /// The fiber generator `y_{j+1}`.
    pub fn y(policy: TruncationPolicy, j: usize) -> Self {
        let mut e = vec![0; policy.dim];
        e[j] = 1;
        Self::term(policy, 0, &e, &[], &BasePoly::one(policy.dim))
    }

    /// The scalar 1-form `dx_{j+1}`.
    pub fn dx(policy: TruncationPolicy, j: usize) -> Self {
        Self::term(policy, 0, &vec![0; policy.dim], &[j], &BasePoly::one(policy.dim))
    }

    /// `λ^k` times the unit.
    pub fn lambda_pow(policy: TruncationPolicy, k: u32) -> Self {
        Self::term(policy, k, &vec![0; policy.dim], &[], &BasePoly::one(policy.dim))
    }

    pub fn policy(&self) -> TruncationPolicy {
        self.policy
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&WeylKey, &BasePoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, key: &WeylKey) -> Option<&BasePoly> {
        self.terms.get(key)
    }

    /// Minimal Fedosov degree over nonzero terms; `None` for zero.
    pub fn fedosov_degree(&self) -> Option<u32> {
        self.terms.keys().map(WeylKey::fedosov_degree).min()
    }

    pub fn max_fedosov_degree(&self) -> Option<u32> {
        self.terms.keys().map(WeylKey::fedosov_degree).max()
    }

    /// Distinct form degrees present.
    pub fn form_degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.terms.keys().map(WeylKey::form_degree).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// Add `coeff` at `key`, dropping it if it exceeds the truncation.
    pub fn add_term(&mut self, key: WeylKey, coeff: &BasePoly) {
        self.add_term_scaled(key, coeff, &Scalar::one());
    }

    pub(crate) fn add_term_scaled(&mut self, key: WeylKey, coeff: &BasePoly, factor: &Scalar) {
        if key.fedosov_degree() > self.policy.n_max || coeff.is_zero() || factor.is_zero() {
            return;
        }
        debug_assert_eq!(coeff.nvars(), self.policy.dim);
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                v.insert(coeff.scale(factor));
            }
            Entry::Occupied(mut o) => {
                o.get_mut().add_scaled(coeff, factor);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub(crate) fn merge(&mut self, other: WeylForm) {
        if self.terms.is_empty() {
            self.terms = other.terms;
            return;
        }
        for (k, c) in other.terms {
            self.add_term(k, &c);
        }
    }

    pub fn try_add(&self, other: &WeylForm) -> Result<WeylForm> {
        self.policy.check_same(&other.policy)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &WeylForm) -> Result<WeylForm> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> WeylForm {
        self.scale(&-Scalar::one())
    }

    pub fn scale(&self, factor: &Scalar) -> WeylForm {
        let mut out = WeylForm::zero(self.policy);
        for (k, c) in &self.terms {
            out.add_term_scaled(k.clone(), c, factor);
        }
        out
    }

    /// Multiply every coefficient by a base polynomial.
    pub fn scale_base(&self, f: &BasePoly) -> WeylForm {
        let mut out = WeylForm::zero(self.policy);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), &(c * f));
        }
        out
    }

    /// Same terms under a different `n_max` (terms above it are dropped).
    pub fn with_n_max(&self, n_max: u32) -> WeylForm {
        let policy = self.policy.with_n_max(n_max);
        WeylForm {
            policy,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.fedosov_degree() <= n_max)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    /// Drop everything of Fedosov degree above `degree` but keep the policy.
    pub fn truncated(&self, degree: u32) -> WeylForm {
        WeylForm {
            policy: self.policy,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.fedosov_degree() <= degree)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn with_convention(&self, convention: Convention) -> WeylForm {
        WeylForm { policy: TruncationPolicy { convention, ..self.policy }, terms: self.terms.clone() }
    }

    /// Terms of the given form degree.
    pub fn form_component(&self, l: u32) -> WeylForm {
        self.filter(|k| k.form_degree() == l)
    }

    /// The `(q, l)` component: fiber degree `q`, form degree `l`.
    pub fn component(&self, q: u32, l: u32) -> WeylForm {
        self.filter(|k| k.y.degree() == q && k.form_degree() == l)
    }

    pub fn filter(&self, keep: impl Fn(&WeylKey) -> bool) -> WeylForm {
        WeylForm {
            policy: self.policy,
            terms: self.terms.iter().filter(|(k, _)| keep(k)).map(|(k, c)| (k.clone(), c.clone())).collect(),
        }
    }

    /// Apply a coefficient map termwise.
    pub fn map_coeffs(&self, f: impl Fn(&BasePoly) -> BasePoly) -> WeylForm {
        let mut out = WeylForm::zero(self.policy);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), &f(c));
        }
        out
    }

    /// Largest x-degree over all coefficients.
    pub fn max_base_degree(&self) -> u32 {
        self.terms.values().filter_map(BasePoly::degree).max().unwrap_or(0)
    }
}

impl std::ops::Add for &WeylForm {
    type Output = WeylForm;
    fn add(self, rhs: &WeylForm) -> WeylForm {
        self.try_add(rhs).expect("truncation policy mismatch")
    }
}

impl std::ops::Sub for &WeylForm {
    type Output = WeylForm;
    fn sub(self, rhs: &WeylForm) -> WeylForm {
        self.try_sub(rhs).expect("truncation policy mismatch")
    }
}

fn fmt_key(key: &WeylKey) -> String {
    let mut parts = Vec::new();
    let y = fmt_monomial(&key.y, "y");
    if !y.is_empty() {
        parts.push(y);
    }
    match key.lambda {
        0 => {}
        1 => parts.push("lambda".to_string()),
        k => parts.push(format!("lambda^{k}")),
    }
    if key.forms != 0 {
        let dx: Vec<String> = key.form_indices().iter().map(|j| format!("dx{}", j + 1)).collect();
        parts.push(dx.join("∧"));
    }
    parts.join("*")
}

impl fmt::Display for WeylForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut keys: Vec<&WeylKey> = self.terms.keys().collect();
        keys.sort_by(|a, b| {
            a.fedosov_degree()
                .cmp(&b.fedosov_degree())
                .then(a.forms.cmp(&b.forms))
                .then(a.lambda.cmp(&b.lambda))
                .then_with(|| display_order(&a.y, &b.y))
        });
        let s = join_signed(keys.into_iter().map(|k| {
            let c = &self.terms[k];
            let mono = fmt_key(k);
            if c.len() == 1 {
                let (e, s) = c.terms().next().unwrap();
                let base = fmt_monomial(e, "x");
                let joined = match (base.is_empty(), mono.is_empty()) {
                    (true, _) => mono,
                    (false, true) => base,
                    (false, false) => format!("{base}*{mono}"),
                };
                crate::poly::fmt_term(s, &joined)
            } else if mono.is_empty() {
                format!("({c})")
            } else {
                format!("({c})*{mono}")
            }
        }));
        f.write_str(&s)
    }
}
