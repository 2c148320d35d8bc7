//! The Koszul-type operators `δ`, `δ*`, `δ⁻`, the exterior derivative in
//! the base, the symbol projection and the Hodge-de Rham splitting.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{wedge_sign, WeylForm, WeylKey};
use crate::poly::{BasePoly, MultiIndex};
use crate::scalar::Scalar;

/// `δb = Σ_k dx_k ∧ ∂b/∂y_k`.
pub fn delta(b: &WeylForm) -> WeylForm {
    let dim = b.policy().dim;
    let mut out = WeylForm::zero(b.policy());
    for (key, c) in b.terms() {
        for k in 0..dim {
            let a = key.y.get(k);
            if a == 0 {
                continue;
            }
            let Some((forms, negative)) = wedge_sign(1 << k, key.forms) else {
                continue;
            };
            let mut y = key.y.clone();
            y.0[k] -= 1;
            let f = if negative { -(a as i64) } else { a as i64 };
            out.add_term_scaled(WeylKey::new(key.lambda, y, forms), c, &Scalar::from_int(f));
        }
    }
    out
}

/// `δ*b = Σ_k y_k · (∂/∂x_k ⌟ b)`.
pub fn delta_star(b: &WeylForm) -> WeylForm {
    let mut out = WeylForm::zero(b.policy());
    for (key, c) in b.terms() {
        add_delta_star_term(&mut out, key, c, &Scalar::from_int(1));
    }
    out
}

fn add_delta_star_term(out: &mut WeylForm, key: &WeylKey, c: &BasePoly, factor: &Scalar) {
    for (pos, k) in key.form_indices().into_iter().enumerate() {
        let mut y = key.y.clone();
        y.0[k] += 1;
        let f = if pos % 2 == 1 { -factor } else { factor.clone() };
        out.add_term_scaled(WeylKey::new(key.lambda, y, key.forms & !(1 << k)), c, &f);
    }
}

/// `δ⁻b = Σ_{q+l>0} δ*(b_{ql}) / (q+l)` over fiber degree `q` and form
/// degree `l`.
pub fn delta_minus(b: &WeylForm) -> WeylForm {
    let mut out = WeylForm::zero(b.policy());
    for (key, c) in b.terms() {
        let ql = key.y.degree() + key.form_degree();
        if ql == 0 {
            continue;
        }
        let factor = Scalar::real(BigRational::new(BigInt::from(1), BigInt::from(ql)));
        add_delta_star_term(&mut out, key, c, &factor);
    }
    out
}

/// Exterior derivative in the base coordinates: `Σ_i ∂_i(coeff) dx_i ∧ …`.
pub fn exterior_d(b: &WeylForm) -> WeylForm {
    let dim = b.policy().dim;
    let mut out = WeylForm::zero(b.policy());
    for (key, c) in b.terms() {
        for i in 0..dim {
            let Some((forms, negative)) = wedge_sign(1 << i, key.forms) else {
                continue;
            };
            let d = c.diff(i).expect("coefficient arity");
            let s = Scalar::from_int(if negative { -1 } else { 1 });
            out.add_term_scaled(WeylKey::new(key.lambda, key.y.clone(), forms), &d, &s);
        }
    }
    out
}

/// Projection onto the fiber-degree 0, form-degree 0 part (a λ-series of
/// base polynomials).
pub fn symbol(b: &WeylForm) -> WeylForm {
    b.filter(|k| k.forms == 0 && k.y.is_zero())
}

/// The symbol as a λ-series: entry `k` is the coefficient of `λ^k`, for
/// `k = 0..=n_max/2`.
pub fn symbol_series(b: &WeylForm) -> Vec<BasePoly> {
    let policy = b.policy();
    let zero_y = MultiIndex::zero(policy.dim);
    (0..=policy.n_max / 2)
        .map(|k| b.coeff(&WeylKey::new(k, zero_y.clone(), 0)).cloned().unwrap_or_else(|| BasePoly::zero(policy.dim)))
        .collect()
}

/// `b = δδ⁻b + δ⁻δb + σ(b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeParts {
    pub exact_part: WeylForm,
    pub coexact_part: WeylForm,
    pub symbol_part: WeylForm,
}

impl HodgeParts {
    pub fn sum(&self) -> WeylForm {
        &(&self.exact_part + &self.coexact_part) + &self.symbol_part
    }
}

/// Evaluates both operator chains one degree above the policy so that the
/// raising step `δ⁻` loses nothing before `δ` lowers it again.
pub fn hodge_decompose(b: &WeylForm) -> HodgeParts {
    let n_max = b.policy().n_max;
    let lifted = b.with_n_max(n_max + 1);
    let exact_part = delta(&delta_minus(&lifted)).with_n_max(n_max);
    let coexact_part = delta_minus(&delta(&lifted)).with_n_max(n_max);
    HodgeParts { exact_part, coexact_part, symbol_part: symbol(b) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::TruncationPolicy;

    fn pol() -> TruncationPolicy {
        TruncationPolicy::new(2, 6).unwrap()
    }

    fn one() -> BasePoly {
        BasePoly::one(2)
    }

    fn t(lambda: u32, y: [u32; 2], forms: &[usize], c: &str) -> WeylForm {
        WeylForm::term(pol(), lambda, &y, forms, &BasePoly::parse(c, 2).unwrap())
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta(&WeylForm::y(pol(), 0)), WeylForm::dx(pol(), 0));
        assert!(delta(&WeylForm::from_base(pol(), &BasePoly::parse("x1^3 + x2", 2).unwrap())).is_zero());
        let expected = &t(0, [0, 1], &[0], "1") + &t(0, [1, 0], &[1], "1");
        assert_eq!(delta(&t(0, [1, 1], &[], "1")), expected);
    }

    #[test]
    fn delta_star_examples() {
        assert_eq!(delta_star(&WeylForm::dx(pol(), 0)), WeylForm::y(pol(), 0));
        assert!(delta_star(&WeylForm::from_base(pol(), &one())).is_zero());
        let expected = &t(0, [1, 1], &[1], "1") - &t(0, [0, 2], &[0], "1");
        assert_eq!(delta_star(&t(0, [0, 1], &[0, 1], "1")), expected);
    }

    #[test]
    fn delta_minus_examples() {
        assert_eq!(delta_minus(&WeylForm::dx(pol(), 0)), WeylForm::y(pol(), 0));
        assert!(delta_minus(&WeylForm::from_base(pol(), &one())).is_zero());
        assert_eq!(delta_minus(&t(0, [1, 0], &[1], "1")), t(0, [1, 1], &[], "1/2"));
    }

    #[test]
    fn hodge_examples() {
        let b = t(0, [1, 0], &[1], "1");
        assert_eq!(hodge_decompose(&b).sum(), b);

        let f = WeylForm::from_base(pol(), &BasePoly::parse("x1*x2 - 2", 2).unwrap());
        let parts = hodge_decompose(&f);
        assert!(parts.exact_part.is_zero() && parts.coexact_part.is_zero());
        assert_eq!(parts.symbol_part, f);

        let y1 = WeylForm::y(pol(), 0);
        let parts = hodge_decompose(&y1);
        assert!(parts.exact_part.is_zero());
        assert_eq!(parts.coexact_part, y1);
        assert!(parts.symbol_part.is_zero());
    }

    #[test]
    fn hodge_at_the_truncation_edge() {
        // y1·dx2 at n_max = 1: δ⁻ would leave the truncation window
        let p = TruncationPolicy::new(2, 1).unwrap();
        let b = WeylForm::term(p, 0, &[1, 0], &[1], &one());
        assert_eq!(hodge_decompose(&b).sum(), b);
    }

    #[test]
    fn symbol_examples() {
        let a = &WeylForm::from_base(pol(), &BasePoly::var(2, 0)) + &WeylForm::y(pol(), 0);
        assert_eq!(symbol(&a), WeylForm::from_base(pol(), &BasePoly::var(2, 0)));
        let b = &t(2, [0, 0], &[], "x2") + &t(0, [1, 1], &[], "1");
        assert_eq!(symbol(&b), t(2, [0, 0], &[], "x2"));
        assert!(symbol(&delta(&t(1, [2, 1], &[], "x1 + 1"))).is_zero());
        assert_eq!(symbol_series(&b)[2], BasePoly::var(2, 1));
    }

    #[test]
    fn exterior_derivative_of_function() {
        let f = WeylForm::from_base(pol(), &BasePoly::parse("x1^2*x2", 2).unwrap());
        let expected = &t(0, [0, 0], &[0], "2*x1*x2") + &t(0, [0, 0], &[1], "x1^2");
        assert_eq!(exterior_d(&f), expected);
        assert!(exterior_d(&exterior_d(&f)).is_zero());
    }
}
