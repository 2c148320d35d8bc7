//! The Fedosov construction on a chart: the Γ-form, its curvature, the
//! fixed point `r`, the flat connection `D`, the quantization map and the
//! resulting star product.
//!
//! Sections are carried one Fedosov degree beyond the public truncation
//! (`n_max + 1`). `δ` lowers the degree by one, so anything that passes
//! through it (`Ω`, `D`) is then still exact up to `n_max`.

use serde::Serialize;

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::poly::BasePoly;
use crate::scalar::Scalar;
use crate::weyl::{
    ad_lambda, delta, delta_minus, exterior_d, moyal_mul, symbol_series, Convention, TruncationPolicy, WeylForm,
};

/// `Γ = ½ Σ Γ_ijk y_i y_j dx_k`.
pub fn build_gamma_form(chart: &Chart, policy: TruncationPolicy) -> Result<WeylForm> {
    let christoffel = chart.christoffel();
    if let Some((i, j, k)) = christoffel.symmetry_violation() {
        return Err(Error::NotSymmetric(format!("entry ({},{},{}) differs from a permutation", i + 1, j + 1, k + 1)));
    }
    let dim = chart.dim();
    let half = Scalar::from_frac(1, 2);
    let mut out = WeylForm::zero(policy);
    for ((i, j, k), c) in christoffel.nonzero_entries() {
        let mut y = vec![0; dim];
        y[i] += 1;
        y[j] += 1;
        out.merge(WeylForm::term(policy, 0, &y, &[k], &c.scale(&half)));
    }
    Ok(out)
}

/// The scalar symplectic form `Σ_j dx_j ∧ dx_{n+j}` at Fedosov degree 0.
pub fn omega_form(policy: TruncationPolicy) -> WeylForm {
    let n = policy.half_dim();
    let one = BasePoly::one(policy.dim);
    let mut out = WeylForm::zero(policy);
    for j in 0..n {
        out.merge(WeylForm::term(policy, 0, &vec![0; policy.dim], &[j, n + j], &one));
    }
    out
}

/// Sign conventions in force, echoed in every report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConventionEcho {
    /// Sign of the Poisson tensor entry pairing `y_j` with `y_{n+j}`.
    pub pi_sign: i8,
    /// Sign of `δ` in `D = ∇ ± δ + (i/λ)[r, ·]`.
    pub delta_sign: i8,
    /// `c` in `μ₁(f,g) − μ₁(g,f) = c·{f,g}`.
    pub moyal_constant: &'static str,
}

impl ConventionEcho {
    pub fn of(convention: Convention) -> Self {
        ConventionEcho {
            pi_sign: convention.pi_sign,
            delta_sign: -1,
            moyal_constant: if convention.pi_sign < 0 { "i" } else { "-i" },
        }
    }
}

/// A solved Fedosov connection on a chart. Immutable once built.
#[derive(Clone, Debug)]
pub struct FedosovData {
    chart: Chart,
    working: TruncationPolicy,
    gamma_form: WeylForm,
    curvature: WeylForm,
    r: WeylForm,
    omega: WeylForm,
    iterations_used: usize,
}

impl FedosovData {
    /// Run the whole construction. A nonzero `Ω + ω` is not an error here;
    /// see [`weyl_curvature_omega`].
    pub fn build(chart: &Chart) -> Result<Self> {
        let working = chart.policy().with_n_max(chart.policy().n_max + 1);
        let gamma_form = build_gamma_form(chart, working)?;
        let mut data = FedosovData {
            chart: chart.clone(),
            working,
            curvature: WeylForm::zero(working),
            r: WeylForm::zero(working),
            omega: WeylForm::zero(working),
            gamma_form,
            iterations_used: 0,
        };
        data.curvature = curvature_r(&data)?;
        let (r, iterations) = solve_r(&data)?;
        data.r = r;
        data.iterations_used = iterations;
        data.omega = assemble_omega(&data)?;
        Ok(data)
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    /// Public truncation policy.
    pub fn policy(&self) -> TruncationPolicy {
        self.chart.policy()
    }

    /// Policy of the internally carried sections (`n_max + 1`).
    pub fn working_policy(&self) -> TruncationPolicy {
        self.working
    }

    pub fn gamma_form(&self) -> &WeylForm {
        &self.gamma_form
    }

    pub fn curvature(&self) -> &WeylForm {
        &self.curvature
    }

    pub fn r(&self) -> &WeylForm {
        &self.r
    }

    /// `Ω`, truncated to the public policy.
    pub fn omega(&self) -> &WeylForm {
        &self.omega
    }

    pub fn iterations_used(&self) -> usize {
        self.iterations_used
    }

    /// `Ω + ω`, zero for a correct construction.
    pub fn omega_residual(&self) -> WeylForm {
        &self.omega + &omega_form(self.policy())
    }

    pub fn conventions(&self) -> ConventionEcho {
        ConventionEcho::of(self.policy().convention)
    }

    /// Largest λ-order whose star-product coefficient is exact.
    pub fn safe_order(&self) -> u32 {
        self.policy().n_max / 2
    }

    fn lift(&self, b: &WeylForm) -> Result<WeylForm> {
        let p = b.policy();
        if p.dim != self.working.dim || p.convention != self.working.convention {
            return Err(Error::PolicyMismatch(format!(
                "section on dim {} does not match chart dim {}",
                p.dim, self.working.dim
            )));
        }
        Ok(b.with_n_max(self.working.n_max))
    }

    pub fn report(&self) -> BuildReport {
        BuildReport {
            dim: self.policy().dim,
            n_max: self.policy().n_max,
            group_order: self.chart.group().order(),
            r_fedosov_degree: self.r.fedosov_degree(),
            r_terms: self.r.len(),
            iterations: self.iterations_used,
            omega_residual: self.omega_residual().to_string(),
            conventions: self.conventions(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BuildReport {
    pub dim: usize,
    pub n_max: u32,
    pub group_order: usize,
    pub r_fedosov_degree: Option<u32>,
    pub r_terms: usize,
    pub iterations: usize,
    pub omega_residual: String,
    pub conventions: ConventionEcho,
}

fn nabla_working(b: &WeylForm, data: &FedosovData) -> Result<WeylForm> {
    Ok(&exterior_d(b) + &ad_lambda(&data.gamma_form, b)?)
}

/// `∇b = db + (i/λ)[Γ, b]`, truncated to the public policy.
pub fn nabla_apply(b: &WeylForm, data: &FedosovData) -> Result<WeylForm> {
    Ok(nabla_working(&data.lift(b)?, data)?.with_n_max(data.policy().n_max))
}

/// `R = dΓ + (i/λ)Γ∘Γ = dΓ + ½·(i/λ)[Γ, Γ]`, at working precision.
pub fn curvature_r(data: &FedosovData) -> Result<WeylForm> {
    let g = &data.gamma_form;
    let half = Scalar::from_frac(1, 2);
    Ok(&exterior_d(g) + &ad_lambda(g, g)?.scale(&half))
}

/// Iterate `r ↦ δ⁻R + δ⁻(∇r + (i/λ) r∘r)` from `r₀ = δ⁻R` until the value
/// repeats. Returns the fixed point and the number of passes.
///
/// Each pass only processes the change of the previous one: with
/// `Δ = r_m − r_{m−1}` the next change is `δ⁻(∇Δ + (i/λ)[r_{m−1}, Δ] +
/// (i/λ)Δ∘Δ)`, since `(i/λ)[·,·]` is symmetric on 1-forms.
pub fn solve_r(data: &FedosovData) -> Result<(WeylForm, usize)> {
    let half = Scalar::from_frac(1, 2);
    let cap = data.policy().n_max as usize + 1;
    let mut prev = WeylForm::zero(data.working);
    let mut change = delta_minus(&data.curvature);
    for pass in 1..=cap {
        let r = &prev + &change;
        let inner = &(&nabla_working(&change, data)? + &ad_lambda(&prev, &change)?)
            + &ad_lambda(&change, &change)?.scale(&half);
        let next_change = delta_minus(&inner);
        if next_change.is_zero() {
            return Ok((r, pass));
        }
        prev = r;
        change = next_change;
    }
    Err(Error::NoStabilization { iterations: cap })
}

fn assemble_omega(data: &FedosovData) -> Result<WeylForm> {
    let r = &data.r;
    let half = Scalar::from_frac(1, 2);
    let mut omega = &data.curvature - &omega_form(data.working);
    omega = &omega - &delta(r);
    omega = &omega + &nabla_working(r, data)?;
    omega = &omega + &ad_lambda(r, r)?.scale(&half);
    Ok(omega.with_n_max(data.policy().n_max))
}

/// `Ω = −ω + R − δr + ∇r + (i/λ) r∘r`, checked to equal `−ω` exactly.
pub fn weyl_curvature_omega(data: &FedosovData) -> Result<&WeylForm> {
    let residual = data.omega_residual();
    if residual.is_zero() {
        Ok(&data.omega)
    } else {
        Err(Error::CurvatureResidual { residual: residual.to_string() })
    }
}

fn d_working(b: &WeylForm, data: &FedosovData) -> Result<WeylForm> {
    Ok(&(&nabla_working(b, data)? - &delta(b)) + &ad_lambda(&data.r, b)?)
}

/// `Db = ∇b − δb + (i/λ)[r, b]`, truncated to the public policy.
///
/// `b` is taken as given (no terms beyond its own truncation); for sections
/// from [`quantize`] pass them at working precision so the result is exact.
pub fn d_apply(b: &WeylForm, data: &FedosovData) -> Result<WeylForm> {
    Ok(d_working(&data.lift(b)?, data)?.with_n_max(data.policy().n_max))
}

/// The flat section with symbol `Σ_k λ^k f_k`, computed by
/// `s = f + δ⁻(∇s + (i/λ)[r, s])`. The result is at working precision.
pub fn quantize(series: &[BasePoly], data: &FedosovData) -> Result<WeylForm> {
    for f in series {
        if f.nvars() != data.policy().dim {
            return Err(Error::VariableMismatch { left: f.nvars(), right: data.policy().dim });
        }
    }
    // the recursion is linear, so s = Σ_j (δ⁻L)^j f with L = ∇ + (i/λ)[r, ·];
    // a vanishing summand is exactly the point where s stops changing
    let mut term = WeylForm::from_lambda_series(data.working, series);
    let mut s = term.clone();
    let cap = data.working.n_max as usize + 2;
    for _ in 0..cap {
        term = delta_minus(&(&nabla_working(&term, data)? + &ad_lambda(&data.r, &term)?));
        if term.is_zero() {
            return Ok(s);
        }
        s = &s + &term;
    }
    Err(Error::NoStabilization { iterations: cap })
}

/// Coefficients `μ_k`, `k = 0..=⌊n_max/2⌋`, of a star product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarSeries {
    pub mu: Vec<BasePoly>,
}

impl StarSeries {
    pub fn order(&self, k: usize) -> Option<&BasePoly> {
        self.mu.get(k)
    }

    pub fn truncated(&self, orders: usize) -> StarSeries {
        StarSeries { mu: self.mu.iter().take(orders + 1).cloned().collect() }
    }

    pub fn sub(&self, other: &StarSeries) -> StarSeries {
        let n = self.mu.len().max(other.mu.len());
        let dim = self.mu.first().or(other.mu.first()).map_or(0, BasePoly::nvars);
        let zero = BasePoly::zero(dim);
        let mu = (0..n).map(|k| self.mu.get(k).unwrap_or(&zero) - other.mu.get(k).unwrap_or(&zero)).collect();
        StarSeries { mu }
    }

    pub fn is_zero(&self) -> bool {
        self.mu.iter().all(BasePoly::is_zero)
    }

    /// Rendered as `mu0 + mu1*λ + …` for messages.
    pub fn to_text(&self) -> String {
        let parts: Vec<String> = self
            .mu
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(k, p)| match k {
                0 => format!("({p})"),
                1 => format!("({p})*λ"),
                _ => format!("({p})*λ^{k}"),
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// `σ(Q(f)∘Q(g))` for λ-series inputs.
pub fn star_product_series(f: &[BasePoly], g: &[BasePoly], data: &FedosovData) -> Result<StarSeries> {
    let qf = quantize(f, data)?;
    let qg = quantize(g, data)?;
    star_of_sections(&qf, &qg, data)
}

pub(crate) fn star_of_sections(qf: &WeylForm, qg: &WeylForm, data: &FedosovData) -> Result<StarSeries> {
    let product = moyal_mul(qf, qg)?;
    let mut mu = symbol_series(&product);
    mu.truncate(data.safe_order() as usize + 1);
    Ok(StarSeries { mu })
}

/// `f ⋆ g = σ(Q(f)∘Q(g))`.
pub fn star_product(f: &BasePoly, g: &BasePoly, data: &FedosovData) -> Result<StarSeries> {
    star_product_series(std::slice::from_ref(f), std::slice::from_ref(g), data)
}

/// λ-orders requested beyond [`FedosovData::safe_order`], if any.
pub fn unsafe_orders(requested: u32, data: &FedosovData) -> Option<std::ops::RangeInclusive<u32>> {
    let safe = data.safe_order();
    (requested > safe).then(|| safe + 1..=requested)
}
