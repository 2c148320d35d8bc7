//! The seeded property suite behind `verify`: algebraic identities of the
//! Weyl calculus, flatness of the Fedosov connection, the quantization
//! inverse, equivariance and the star-product axioms.

use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::axioms::{verify_dq_axioms, Check};
use crate::chart::Chart;
use crate::engine::{d_apply, nabla_apply, quantize, BuildReport, ConventionEcho, FedosovData};
use crate::error::Result;
use crate::group::GroupAction;
use crate::parallel;
use crate::poly::BasePoly;
use crate::sampling::{self, PolyShape};
use crate::scalar::Scalar;
use crate::weyl::{
    act_group_element, ad_lambda, delta, delta_minus, hodge_decompose, moyal_mul, symbol, symbol_series,
    TruncationPolicy, WeylForm,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub samples: usize,
    /// λ-orders for the star-product axioms (clipped to the safe range).
    pub orders: u32,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 0, samples: 50, orders: 3 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub samples: usize,
    pub n_max: u32,
    pub conventions: ConventionEcho,
    pub build: Option<BuildReport>,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// `θ = Σ ω_kl y_k dx_l`.
pub fn theta_form(policy: TruncationPolicy) -> WeylForm {
    let n = policy.half_dim();
    let one = BasePoly::one(policy.dim);
    let mut out = WeylForm::zero(policy);
    for j in 0..n {
        let mut e = vec![0; policy.dim];
        e[j] = 1;
        out.merge(WeylForm::term(policy, 0, &e, &[n + j], &one));
        let mut e = vec![0; policy.dim];
        e[n + j] = 1;
        out.merge(WeylForm::term(policy, 0, &e, &[j], &one.scale(&Scalar::from_int(-1))));
    }
    out
}

/// `op(a∘b) − op(a)∘b − (−1)^{|a|} a∘op(b)`, split by the form degree of
/// `a`, truncated to `keep`.
fn leibniz_residual(
    op: impl Fn(&WeylForm) -> Result<WeylForm>,
    a: &WeylForm,
    b: &WeylForm,
    keep: u32,
) -> Result<WeylForm> {
    let mut out = op(&moyal_mul(a, b)?)?;
    let op_b = op(b)?;
    for l in a.form_degrees() {
        let al = a.form_component(l);
        out = &out - &moyal_mul(&op(&al)?, b)?;
        let second = moyal_mul(&al, &op_b)?;
        out = if l % 2 == 1 { &out + &second } else { &out - &second };
    }
    Ok(out.truncated(keep))
}

type Outcome = Result<Option<String>>;

fn expect_zero(w: &WeylForm, what: impl FnOnce() -> String) -> Outcome {
    Ok((!w.is_zero()).then(|| format!("{}: residual {w}", what())))
}

/// Checks that need the solved connection, one sample at a time.
fn sample_checks(data: &FedosovData, seed: u64, index: usize) -> Vec<(&'static str, Outcome)> {
    let mut rng = sampling::rng(seed);
    rng.set_stream(index as u64 + 1);
    let policy = data.policy();
    let n_max = policy.n_max;
    let dim = policy.dim;
    let shape = PolyShape { max_degree: 3, max_terms: 2, ..Default::default() };
    let b = sampling::random_weyl_form(&mut rng, policy, index, &shape);
    let a = sampling::random_weyl_form(&mut rng, policy, index / 3 + 7, &shape);
    let f = sampling::random_poly(&mut rng, dim, &PolyShape { max_degree: 4, max_terms: 3, ..Default::default() });
    let g = sampling::random_poly(&mut rng, dim, &shape);
    let gens = data.chart().group().generators();
    let mut out: Vec<(&'static str, Outcome)> = Vec::new();

    out.push(("hodge decomposition", {
        let parts = hodge_decompose(&b);
        expect_zero(&(&parts.sum() - &b), || format!("b = {b}"))
    }));
    out.push(("delta squared", expect_zero(&delta(&delta(&b)), || format!("b = {b}"))));
    out.push((
        "delta = -(i/lambda)[theta, .]",
        (|| {
            let ad = ad_lambda(&theta_form(policy), &b)?;
            expect_zero(&(&delta(&b) + &ad), || format!("b = {b}"))
        })(),
    ));
    out.push((
        "curvature identity",
        (|| {
            let lhs = nabla_apply(&nabla_apply(&b, data)?, data)?;
            let rhs = ad_lambda(data.curvature(), &b.with_n_max(n_max + 1))?.with_n_max(n_max);
            expect_zero(&(&lhs - &rhs), || format!("b = {b}"))
        })(),
    ));
    out.push((
        "D squared",
        (|| {
            let dd = d_apply(&d_apply(&b, data)?, data)?.truncated(n_max.saturating_sub(1));
            expect_zero(&dd, || format!("b = {b}"))
        })(),
    ));
    out.push((
        "nabla Leibniz",
        (|| {
            let r = leibniz_residual(|x| nabla_apply(x, data), &a, &b, n_max)?;
            expect_zero(&r, || format!("a = {a}, b = {b}"))
        })(),
    ));
    out.push((
        "D Leibniz",
        (|| {
            let r = leibniz_residual(|x| d_apply(x, data), &a, &b, n_max.saturating_sub(1))?;
            expect_zero(&r, || format!("a = {a}, b = {b}"))
        })(),
    ));
    out.push((
        "symbol of quantization",
        (|| {
            let q = quantize(std::slice::from_ref(&f), data)?;
            let s = symbol(&q);
            expect_zero(&(&s - &WeylForm::from_base(s.policy(), &f)), || format!("f = {f}"))
        })(),
    ));
    out.push((
        "quantization is flat",
        (|| {
            let q = quantize(std::slice::from_ref(&f), data)?;
            expect_zero(&d_apply(&q, data)?, || format!("f = {f}"))
        })(),
    ));
    out.push((
        "flat sections are determined by symbols",
        (|| {
            let s = moyal_mul(&quantize(std::slice::from_ref(&f), data)?, &quantize(std::slice::from_ref(&g), data)?)?;
            let again = quantize(&symbol_series(&s), data)?;
            expect_zero(&(&again - &s), || format!("f = {f}, g = {g}"))
        })(),
    ));
    out.push((
        "equivariance",
        (|| {
            for g in &gens {
                let act = |w: &WeylForm| act_group_element(w, g);
                let prod = &act(&moyal_mul(&a, &b)?)? - &moyal_mul(&act(&a)?, &act(&b)?)?;
                let del = &act(&delta(&b))? - &delta(&act(&b)?);
                let nab = &act(&nabla_apply(&b, data)?)? - &nabla_apply(&act(&b)?, data)?;
                let dd = &act(&d_apply(&b, data)?)? - &d_apply(&act(&b)?, data)?;
                let q = &act(&quantize(std::slice::from_ref(&f), data)?)? - &quantize(&[f.act(g)?], data)?;
                for (what, w) in [("∘", prod), ("δ", del), ("∇", nab), ("D", dd), ("Q", q)] {
                    if !w.is_zero() {
                        return Ok(Some(format!("generator {g}, {what}: b = {b}, residual {w}")));
                    }
                }
            }
            Ok(None)
        })(),
    ));
    out
}

/// Run the whole suite on a chart. Never fails: construction errors are
/// reported as failed checks.
pub fn run_suite(chart: &Chart, config: &SuiteConfig) -> SuiteReport {
    let policy = chart.policy();
    let mut checks = Vec::new();

    let mut validation = Check::new("chart validation");
    match chart.validate() {
        Ok(v) => validation.record(v.passed(), || {
            let mut why = Vec::new();
            if !v.symplectic.symplectic {
                why.push(format!("non-symplectic group elements {:?}", v.symplectic.violators));
            }
            if !v.fully_symmetric {
                why.push("christoffel symbols not fully symmetric".to_string());
            }
            if !v.invariance.invariant {
                why.push(format!("christoffel symbols not invariant under elements {:?}", v.invariance.violators));
            }
            why.join("; ")
        }),
        Err(e) => validation.fail_with_error(&e),
    }
    checks.push(validation);

    let mut build = Check::new("omega residual");
    let data = match FedosovData::build(chart) {
        Ok(d) => {
            let residual = d.omega_residual();
            build.record(residual.is_zero(), || format!("Ω + ω = {residual}"));
            Some(d)
        }
        Err(e) => {
            build.fail_with_error(&e);
            None
        }
    };
    checks.push(build);

    let Some(data) = data else {
        return SuiteReport {
            seed: config.seed,
            samples: config.samples,
            n_max: policy.n_max,
            conventions: ConventionEcho::of(policy.convention),
            build: None,
            checks,
        };
    };

    let mut normal = Check::new("r normalization");
    let r = data.r();
    normal.record(r.fedosov_degree().is_none_or(|d| d >= 3) && delta_minus(r).is_zero(), || {
        format!("deg_F(r) = {:?}, δ⁻r has {} terms", r.fedosov_degree(), delta_minus(r).len())
    });
    checks.push(normal);

    let indices: Vec<usize> = (0..config.samples).collect();
    let per_sample = parallel::map(&indices, |&i| sample_checks(&data, config.seed, i));
    let mut named: Vec<Check> = Vec::new();
    for results in per_sample {
        for (name, outcome) in results {
            let idx = match named.iter().position(|c| c.name == name) {
                Some(i) => i,
                None => {
                    named.push(Check::new(name));
                    named.len() - 1
                }
            };
            match outcome {
                Ok(None) => named[idx].record(true, String::new),
                Ok(Some(msg)) => named[idx].record(false, || msg),
                Err(e) => named[idx].fail_with_error(&e),
            }
        }
    }
    checks.extend(named);

    let mut rng: ChaCha8Rng = sampling::rng(config.seed);
    let shape = PolyShape { max_degree: 4, max_terms: 3, ..Default::default() };
    let polys: Vec<BasePoly> =
        (0..config.samples).map(|_| sampling::random_poly(&mut rng, policy.dim, &shape)).collect();
    checks.extend(verify_dq_axioms(&data, &polys, config.orders).checks);

    SuiteReport {
        seed: config.seed,
        samples: config.samples,
        n_max: policy.n_max,
        conventions: data.conventions(),
        build: Some(data.report()),
        checks,
    }
}
