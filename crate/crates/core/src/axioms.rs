//! Report-valued checks of the deformation-quantization axioms for the star
//! product of a solved chart.

use serde::Serialize;

use crate::engine::{quantize, star_of_sections, star_product, FedosovData, StarSeries};
use crate::error::Result;
use crate::group::GroupAction;
use crate::invariants::poisson_bracket;
use crate::poly::BasePoly;
use crate::scalar::Scalar;

/// Outcome of one named check over a batch of cases.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    /// First failing case, rendered for humans.
    pub counterexample: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>) -> Self {
        Check { name: name.into(), passed: true, cases: 0, counterexample: None }
    }

    /// Record one case; only the first failure is kept.
    pub fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.passed {
            self.passed = false;
            self.counterexample = Some(describe());
        }
    }

    pub fn fail_with_error(&mut self, e: &crate::Error) {
        self.record(false, || format!("error: {e}"));
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    /// λ-orders actually compared (requested orders clipped to the safe range).
    pub orders: u32,
    pub checks: Vec<Check>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub const DQ1: &str = "DQ1 pointwise product";
pub const DQ2: &str = "DQ2 commutator = i*lambda*bracket";
pub const DQ3: &str = "DQ3 unit";
pub const ASSOCIATIVITY: &str = "associativity";
pub const EQUIVARIANCE: &str = "star equivariance";

fn series_text(s: &StarSeries) -> String {
    s.to_text()
}

/// Run DQ1, DQ2, DQ3, associativity and G-equivariance of `⋆`.
///
/// Pairs are `(s_i, s_{i+1})` and triples `(s_i, s_{i+1}, s_{i+2})`, indices
/// taken cyclically. Orders above the safe range of the chart are not
/// compared.
pub fn verify_dq_axioms(data: &FedosovData, samples: &[BasePoly], orders: u32) -> AxiomReport {
    let orders = orders.min(data.safe_order());
    let k = orders as usize;
    let mut dq1 = Check::new(DQ1);
    let mut dq2 = Check::new(DQ2);
    let mut dq3 = Check::new(DQ3);
    let mut assoc = Check::new(ASSOCIATIVITY);
    let mut equiv = Check::new(EQUIVARIANCE);
    let n = samples.len();
    let dim = data.policy().dim;
    let one = BasePoly::one(dim);

    for i in 0..n {
        let f = &samples[i];
        let g = &samples[(i + 1) % n];
        let h = &samples[(i + 2) % n];
        if let Err(e) = axioms_for(data, f, g, h, k, &one, [&mut dq1, &mut dq2, &mut dq3, &mut assoc, &mut equiv]) {
            for c in [&mut dq1, &mut dq2, &mut dq3, &mut assoc, &mut equiv] {
                c.fail_with_error(&e);
            }
        }
    }
    AxiomReport { orders, checks: vec![dq1, dq2, dq3, assoc, equiv] }
}

fn axioms_for(
    data: &FedosovData,
    f: &BasePoly,
    g: &BasePoly,
    h: &BasePoly,
    k: usize,
    one: &BasePoly,
    checks: [&mut Check; 5],
) -> Result<()> {
    let [dq1, dq2, dq3, assoc, equiv] = checks;
    let qf = quantize(std::slice::from_ref(f), data)?;
    let qg = quantize(std::slice::from_ref(g), data)?;
    let qh = quantize(std::slice::from_ref(h), data)?;
    let fg = star_of_sections(&qf, &qg, data)?.truncated(k);
    let gf = star_of_sections(&qg, &qf, data)?.truncated(k);

    dq1.record(fg.mu[0] == f * g, || format!("f = {f}, g = {g}: mu0 = {}", fg.mu[0]));

    let bracket = poisson_bracket(f, g)?;
    let comm = fg.sub(&gf);
    let mut ok = comm.mu[0].is_zero();
    if k >= 1 {
        ok &= comm.mu[1] == bracket.scale(&Scalar::i());
    }
    dq2.record(ok, || {
        format!("f = {f}, g = {g}: f*g - g*f = {}, i{{f,g}} = {}", series_text(&comm), bracket.scale(&Scalar::i()))
    });

    let q1 = quantize(std::slice::from_ref(one), data)?;
    let f1 = star_of_sections(&qf, &q1, data)?.truncated(k);
    let one_f = star_of_sections(&q1, &qf, data)?.truncated(k);
    let unit = StarSeries { mu: vec![f.clone()] };
    dq3.record(f1.sub(&unit).is_zero() && one_f.sub(&unit).is_zero(), || {
        format!("f = {f}: f*1 = {}, 1*f = {}", series_text(&f1), series_text(&one_f))
    });

    // (f⋆g)⋆h through the quantization of the λ-series f⋆g, and likewise
    // f⋆(g⋆h)
    let gh = star_of_sections(&qg, &qh, data)?.truncated(k);
    let left = star_of_sections(&quantize(&fg.mu, data)?, &qh, data)?.truncated(k);
    let right = star_of_sections(&qf, &quantize(&gh.mu, data)?, data)?.truncated(k);
    let diff = left.sub(&right);
    assoc.record(diff.is_zero(), || format!("f = {f}, g = {g}, h = {h}: (f*g)*h - f*(g*h) = {}", series_text(&diff)));

    // (γ·f)⋆(γ·g) = γ·(f⋆g) for each generator γ
    for gamma in data.chart().group().generators() {
        let lhs = star_product(&f.act(&gamma)?, &g.act(&gamma)?, data)?.truncated(k);
        let rhs = StarSeries { mu: fg.mu.iter().map(|p| p.act(&gamma)).collect::<Result<_>>()? };
        let d = lhs.sub(&rhs);
        equiv.record(d.is_zero(), || format!("f = {f}, g = {g}, generator {gamma}: difference {}", series_text(&d)));
    }
    Ok(())
}
