//! Sparse multivariate polynomials over `Q(i)` in the chart coordinates
//! `x1..x{2n}`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use smallvec::{smallvec, SmallVec};

use crate::error::{Error, Result};
use crate::matrix::RatMatrix;
use crate::scalar::Scalar;

/// Exponent vector `α` of a monomial `x^α`. Stored inline up to eight
/// variables, since these are cloned in every inner loop.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(pub SmallVec<[u32; 8]>);

impl MultiIndex {
    pub fn zero(nvars: usize) -> Self {
        MultiIndex(smallvec![0; nvars])
    }

    pub fn unit(nvars: usize, var: usize) -> Self {
        let mut e = Self::zero(nvars);
        e.0[var] = 1;
        e
    }

    pub fn from_slice(e: &[u32]) -> Self {
        MultiIndex(SmallVec::from_slice(e))
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    /// `|α|`.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn get(&self, var: usize) -> u32 {
        self.0[var]
    }
}

/// Canonical sparse polynomial: no stored coefficient is zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasePoly {
    nvars: usize,
    terms: BTreeMap<MultiIndex, Scalar>,
}

impl BasePoly {
    pub fn zero(nvars: usize) -> Self {
        BasePoly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        BasePoly::constant(nvars, Scalar::one())
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        BasePoly::monomial(nvars, MultiIndex::zero(nvars), c)
    }

    /// The coordinate `x_{var+1}` (variables are 0-based internally).
    pub fn var(nvars: usize, var: usize) -> Self {
        BasePoly::monomial(nvars, MultiIndex::unit(nvars, var), Scalar::one())
    }

    pub fn monomial(nvars: usize, exp: MultiIndex, c: Scalar) -> Self {
        assert_eq!(exp.nvars(), nvars, "monomial arity");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        BasePoly { nvars, terms }
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (MultiIndex, Scalar)>) -> Self {
        let mut p = BasePoly::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, &c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
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

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &MultiIndex) -> Scalar {
        self.terms.get(exp).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(&MultiIndex::zero(self.nvars))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.is_zero())
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.degree()).max()
    }

    /// True for zero and for polynomials whose monomials share one degree.
    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.degree());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Add `c·x^exp` in place, keeping the canonical form.
    pub fn add_term(&mut self, exp: MultiIndex, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exp) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign_ref(&mut self, other: &BasePoly) {
        assert_eq!(self.nvars, other.nvars, "variable count");
        for (e, c) in &other.terms {
            self.add_term(e.clone(), c);
        }
    }

    /// `self += factor * other`.
    pub fn add_scaled(&mut self, other: &BasePoly, factor: &Scalar) {
        assert_eq!(self.nvars, other.nvars, "variable count");
        if factor.is_zero() {
            return;
        }
        for (e, c) in &other.terms {
            self.add_term(e.clone(), &(c * factor));
        }
    }

    pub fn scale(&self, factor: &Scalar) -> BasePoly {
        if factor.is_zero() {
            return BasePoly::zero(self.nvars);
        }
        BasePoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), c * factor)).collect() }
    }

    pub fn scale_rational(&self, q: &BigRational) -> BasePoly {
        self.scale(&Scalar::real(q.clone()))
    }

    pub fn try_add(&self, other: &BasePoly) -> Result<BasePoly> {
        self.check_arity(other)?;
        let mut out = self.clone();
        out.add_assign_ref(other);
        Ok(out)
    }

    /// Exact product; errors when the variable counts differ.
    pub fn try_mul(&self, other: &BasePoly) -> Result<BasePoly> {
        self.check_arity(other)?;
        let mut out = BasePoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea.add(eb), &(ca * cb));
            }
        }
        Ok(out)
    }

    fn check_arity(&self, other: &BasePoly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::VariableMismatch { left: self.nvars, right: other.nvars });
        }
        Ok(())
    }

    pub fn pow(&self, e: u32) -> BasePoly {
        let mut acc = BasePoly::one(self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `∂/∂x_var` with a 0-based variable index.
    pub fn diff(&self, var: usize) -> Result<BasePoly> {
        if var >= self.nvars {
            return Err(Error::VariableOutOfRange { index: var, nvars: self.nvars });
        }
        let mut out = BasePoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e.0[var];
            if k == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne.0[var] -= 1;
            out.add_term(ne, &(c * &Scalar::from_int(k as i64)));
        }
        Ok(out)
    }

    /// The polynomial `x ↦ self(M·x)`, i.e. `x_i ↦ Σ_j M_ij x_j`.
    pub fn subst_linear(&self, m: &RatMatrix) -> Result<BasePoly> {
        if !m.is_square() || m.rows() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: m.rows() });
        }
        let images: Vec<BasePoly> = (0..self.nvars)
            .map(|i| {
                BasePoly::from_terms(
                    self.nvars,
                    (0..self.nvars).map(|j| (MultiIndex::unit(self.nvars, j), Scalar::real(m.get(i, j).clone()))),
                )
            })
            .collect();
        self.compose(&images)
    }

    /// Substitute `x_i ↦ images[i]`; the result lives in the images' ring.
    pub fn compose(&self, images: &[BasePoly]) -> Result<BasePoly> {
        if images.len() != self.nvars {
            return Err(Error::VariableMismatch { left: self.nvars, right: images.len() });
        }
        let target = images.first().map_or(0, |p| p.nvars);
        if let Some(bad) = images.iter().find(|p| p.nvars != target) {
            return Err(Error::VariableMismatch { left: target, right: bad.nvars });
        }
        let mut powers: Vec<Vec<BasePoly>> = images.iter().map(|p| vec![BasePoly::one(target), p.clone()]).collect();
        let mut out = BasePoly::zero(target);
        for (e, c) in &self.terms {
            let mut term = BasePoly::constant(target, c.clone());
            for (i, &k) in e.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                term = &term * &powers[i][k as usize];
            }
            out.add_assign_ref(&term);
        }
        Ok(out)
    }

    /// Same polynomial viewed in a ring with `nvars` variables (must not drop
    /// any variable that occurs).
    pub fn with_nvars(&self, nvars: usize) -> Result<BasePoly> {
        let mut out = BasePoly::zero(nvars);
        for (e, c) in &self.terms {
            if e.0.iter().skip(nvars).any(|&k| k > 0) {
                return Err(Error::VariableMismatch { left: self.nvars, right: nvars });
            }
            let mut ne = e.0.clone();
            ne.resize(nvars, 0);
            out.add_term(MultiIndex(ne), c);
        }
        Ok(out)
    }

    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> BasePoly {
        BasePoly::from_terms(self.nvars, self.terms.iter().map(|(e, c)| (e.clone(), f(c))))
    }

    pub fn conj(&self) -> BasePoly {
        self.map_coeffs(Scalar::conj)
    }

    /// Parse the textual grammar, e.g. `3/2*x1^2*x2 - i*x3`.
    pub fn parse(text: &str, nvars: usize) -> Result<BasePoly> {
        crate::parse::parse_poly(text, nvars)
    }
}

impl Add for &BasePoly {
    type Output = BasePoly;
    fn add(self, rhs: &BasePoly) -> BasePoly {
        self.try_add(rhs).expect("variable count mismatch")
    }
}

impl Sub for &BasePoly {
    type Output = BasePoly;
    fn sub(self, rhs: &BasePoly) -> BasePoly {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Scalar::one());
        out
    }
}

impl Mul for &BasePoly {
    type Output = BasePoly;
    fn mul(self, rhs: &BasePoly) -> BasePoly {
        self.try_mul(rhs).expect("variable count mismatch")
    }
}

impl Neg for &BasePoly {
    type Output = BasePoly;
    fn neg(self) -> BasePoly {
        self.scale(&-Scalar::one())
    }
}

impl Add for BasePoly {
    type Output = BasePoly;
    fn add(self, rhs: BasePoly) -> BasePoly {
        &self + &rhs
    }
}

impl Sub for BasePoly {
    type Output = BasePoly;
    fn sub(self, rhs: BasePoly) -> BasePoly {
        &self - &rhs
    }
}

impl Mul for BasePoly {
    type Output = BasePoly;
    fn mul(self, rhs: BasePoly) -> BasePoly {
        &self * &rhs
    }
}

/// Render one monomial `x1^2*x3` with a variable prefix.
pub(crate) fn fmt_monomial(exp: &MultiIndex, prefix: &str) -> String {
    let mut parts = Vec::new();
    for (i, &k) in exp.0.iter().enumerate() {
        match k {
            0 => {}
            1 => parts.push(format!("{prefix}{}", i + 1)),
            _ => parts.push(format!("{prefix}{}^{k}", i + 1)),
        }
    }
    parts.join("*")
}

/// Graded-descending order used for printing: higher degree first, then
/// lexicographically larger exponent vectors first.
pub(crate) fn display_order(a: &MultiIndex, b: &MultiIndex) -> std::cmp::Ordering {
    b.degree().cmp(&a.degree()).then_with(|| b.cmp(a))
}

/// Joins signed terms as `a - b + c`.
pub(crate) fn join_signed(terms: impl IntoIterator<Item = String>) -> String {
    let mut out = String::new();
    for (idx, t) in terms.into_iter().enumerate() {
        if idx == 0 {
            out.push_str(&t);
        } else if let Some(rest) = t.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&t);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// `coeff*monomial`, dropping unit coefficients.
pub(crate) fn fmt_term(c: &Scalar, mono: &str) -> String {
    if mono.is_empty() {
        return c.to_string();
    }
    if c.is_one() {
        return mono.to_string();
    }
    if *c == -Scalar::one() {
        return format!("-{mono}");
    }
    format!("{c}*{mono}")
}

impl fmt::Display for BasePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut keys: Vec<&MultiIndex> = self.terms.keys().collect();
        keys.sort_by(|a, b| display_order(a, b));
        let s = join_signed(keys.into_iter().map(|e| fmt_term(&self.terms[e], &fmt_monomial(e, "x"))));
        f.write_str(&s)
    }
}
