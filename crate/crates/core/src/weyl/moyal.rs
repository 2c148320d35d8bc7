//! Fiberwise Moyal-Weyl product and the graded commutator.

use std::collections::HashMap;

use super::{wedge_sign, Convention, TruncationPolicy, WeylForm, WeylKey};
use crate::error::{Error, Result};
use crate::parallel;
use crate::poly::{BasePoly, MultiIndex};
use crate::rational::Rat;
use crate::scalar::Scalar;

/// One term `coeff · λ^m · y^exp` of `y^α ∘ y^β`.
#[derive(Clone, Debug)]
struct FiberTerm {
    m: u32,
    exp: MultiIndex,
    coeff: Scalar,
}

fn falling(a: u32, p: u32) -> Rat {
    (0..p).fold(Rat::ONE, |acc, t| acc.mul(&Rat::int((a - t) as i64)))
}

fn factorial(p: u32) -> Rat {
    falling(p, p)
}

/// Expansion of `y^α ∘ y^β = Σ_m (s·(−iλ/2))^m/m! μ(Π̂^m(y^α ⊗ y^β))`.
///
/// The Poisson tensor pairs `y_j` with `y_{n+j}`, so the exponential factors
/// into `Π_j exp(c ∂_j⊗∂_{n+j}) exp(−c ∂_{n+j}⊗∂_j)`; `p_j` and `q_j` count
/// the two kinds of contraction for the j-th pair.
fn fiber_expansion(alpha: &MultiIndex, beta: &MultiIndex, convention: Convention, odd_only: bool) -> Vec<FiberTerm> {
    let dim = alpha.nvars();
    let n = dim / 2;
    // per pair: list of (p, q, rational factor)
    let mut choices: Vec<Vec<(u32, u32, Rat)>> = Vec::with_capacity(n);
    for j in 0..n {
        let (a1, a2, b1, b2) = (alpha.get(j), alpha.get(n + j), beta.get(j), beta.get(n + j));
        let mut opts = Vec::new();
        for p in 0..=a1.min(b2) {
            for q in 0..=a2.min(b1) {
                let num = falling(a1, p).mul(&falling(a2, q)).mul(&falling(b2, p)).mul(&falling(b1, q));
                let den = factorial(p).mul(&factorial(q));
                let mut r = num.div(&den).expect("nonzero factorial");
                if q % 2 == 1 {
                    r = r.neg();
                }
                opts.push((p, q, r));
            }
        }
        choices.push(opts);
    }

    let half = Rat::frac(1, 2);
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        let mut m = 0u32;
        let mut factor = Rat::ONE;
        let mut exp = alpha.add(beta);
        for j in 0..n {
            let (p, q, ref r) = choices[j][idx[j]];
            m += p + q;
            factor = factor.mul(r);
            exp.0[j] -= p + q;
            exp.0[n + j] -= p + q;
        }
        if !odd_only || m % 2 == 1 {
            // (s · (−i/2))^m
            let mut c = Scalar::i_pow(m).scale_rat(&factor);
            let mut scale = Rat::ONE;
            for _ in 0..m {
                scale = scale.mul(&half);
            }
            // (s·(−1))^m for odd m
            if m % 2 == 1 && convention.pi_sign > 0 {
                scale = scale.neg();
            }
            c = c.scale_rat(&scale);
            out.push(FiberTerm { m, exp, coeff: c });
        }
        // advance the odometer
        let mut j = 0;
        loop {
            if j == n {
                return out;
            }
            idx[j] += 1;
            if idx[j] < choices[j].len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    /// `a ∘ b`
    Product,
    /// `(i/λ)·[a, b]`
    AdLambda,
}

type Cache = HashMap<(MultiIndex, MultiIndex), Vec<FiberTerm>>;

fn accumulate(
    chunk: &[(&WeylKey, &BasePoly)],
    b: &[(&WeylKey, &BasePoly)],
    policy: TruncationPolicy,
    mode: Mode,
) -> WeylForm {
    let mut out = WeylForm::zero(policy);
    let mut cache: Cache = HashMap::new();
    let n_max = policy.n_max;
    // 2·i for the λ-divided commutator: [a,b] keeps twice the odd-m part
    let two_i = Scalar::from_rats(Rat::ZERO, Rat::int(2));
    for (ka, fa) in chunk {
        let da = ka.fedosov_degree();
        for (kb, fb) in b {
            let db = kb.fedosov_degree();
            let total = da + db;
            let out_degree = match mode {
                Mode::Product => total,
                Mode::AdLambda => total.saturating_sub(2),
            };
            if out_degree > n_max {
                continue;
            }
            let Some((forms, negative)) = wedge_sign(ka.forms, kb.forms) else {
                continue;
            };
            let key = (ka.y.clone(), kb.y.clone());
            let expansion = cache
                .entry(key)
                .or_insert_with(|| fiber_expansion(&ka.y, &kb.y, policy.convention, mode == Mode::AdLambda));
            if expansion.is_empty() {
                continue;
            }
            let mut prod = *fa * *fb;
            if negative {
                prod = -&prod;
            }
            for t in expansion.iter() {
                let (lambda, coeff) = match mode {
                    Mode::Product => (ka.lambda + kb.lambda + t.m, t.coeff.clone()),
                    Mode::AdLambda => (ka.lambda + kb.lambda + t.m - 1, &t.coeff * &two_i),
                };
                out.add_term_scaled(WeylKey::new(lambda, t.exp.clone(), forms), &prod, &coeff);
            }
        }
    }
    out
}

fn bilinear(a: &WeylForm, b: &WeylForm, mode: Mode) -> Result<WeylForm> {
    a.policy.check_same(&b.policy)?;
    let policy = a.policy;
    let at: Vec<(&WeylKey, &BasePoly)> = a.terms().collect();
    let bt: Vec<(&WeylKey, &BasePoly)> = b.terms().collect();
    let min_parallel = if bt.len() >= 8 { 8 } else { usize::MAX };
    let out = parallel::chunked_reduce(
        &at,
        min_parallel,
        |chunk| accumulate(chunk, &bt, policy, mode),
        |mut x, y| {
            x.merge(y);
            x
        },
    );
    Ok(out.unwrap_or_else(|| WeylForm::zero(policy)))
}

/// The truncated product `a ∘ b`: fiberwise Moyal-Weyl product combined with
/// the wedge product of form parts (a's forms first).
pub fn moyal_mul(a: &WeylForm, b: &WeylForm) -> Result<WeylForm> {
    bilinear(a, b, Mode::Product)
}

/// `[a, b] = a∘b − (−1)^{|a||b|} b∘a`, applied termwise by form degree.
pub fn graded_commutator(a: &WeylForm, b: &WeylForm) -> Result<WeylForm> {
    a.policy.check_same(&b.policy)?;
    let ad = bilinear(a, b, Mode::AdLambda)?;
    // [a,b] = (λ/i)·ad = −i·λ·ad
    let mut out = WeylForm::zero(a.policy);
    let minus_i = -Scalar::i();
    for (k, c) in ad.terms() {
        out.add_term_scaled(WeylKey::new(k.lambda + 1, k.y.clone(), k.forms), c, &minus_i);
    }
    Ok(out)
}

/// `(i/λ)·[a, b]`, evaluated without intermediate truncation so that terms
/// which land at or below `n_max` after the division are all kept.
pub fn ad_lambda(a: &WeylForm, b: &WeylForm) -> Result<WeylForm> {
    bilinear(a, b, Mode::AdLambda)
}

/// Divide by `λ^power`; errors if some term carries a smaller λ-power.
pub fn lambda_divide(a: &WeylForm, power: u32) -> Result<WeylForm> {
    let mut out = WeylForm::zero(a.policy);
    for (k, c) in a.terms() {
        if k.lambda < power {
            return Err(Error::LambdaDivisibility {
                power,
                term: WeylForm::zero(a.policy).with_term(k, c).to_string(),
            });
        }
        out.add_term(WeylKey::new(k.lambda - power, k.y.clone(), k.forms), c);
    }
    Ok(out)
}

impl WeylForm {
    fn with_term(mut self, k: &WeylKey, c: &BasePoly) -> WeylForm {
        self.add_term(k.clone(), c);
        self
    }
}
