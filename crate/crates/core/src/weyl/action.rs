use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{wedge_sign, WeylForm, WeylKey};
use crate::error::{Error, Result};
use crate::matrix::RatMatrix;
use crate::poly::{BasePoly, MultiIndex};
use crate::scalar::Scalar;

/// Pullback of `dx_J` along `h`: `∧_{j∈J} Σ_m h_jm dx_m`, as mask → coefficient.
fn pull_forms(mask: u32, h: &RatMatrix) -> BTreeMap<u32, BigRational> {
    let dim = h.rows();
    let mut acc: BTreeMap<u32, BigRational> = BTreeMap::from([(0, BigRational::one())]);
    for j in (0..dim).filter(|j| mask & (1 << j) != 0) {
        let mut next: BTreeMap<u32, BigRational> = BTreeMap::new();
        for (m_acc, c) in &acc {
            for m in 0..dim {
                let hjm = h.get(j, m);
                if hjm.is_zero() {
                    continue;
                }
                let Some((new_mask, negative)) = wedge_sign(*m_acc, 1 << m) else {
                    continue;
                };
                let v = c * hjm;
                let e = next.entry(new_mask).or_insert_with(BigRational::zero);
                if negative {
                    *e -= v;
                } else {
                    *e += v;
                }
            }
        }
        next.retain(|_, v| !v.is_zero());
        acc = next;
    }
    acc
}

/// The lifted action `g·b`: substitute `x ↦ g⁻¹x`, `y ↦ g⁻¹y` and
/// `dx ↦ g⁻¹dx` simultaneously. This is a left action:
/// `h·(g·b) = (hg)·b`.
pub fn act_group_element(b: &WeylForm, g: &RatMatrix) -> Result<WeylForm> {
    let dim = b.policy().dim;
    if !g.is_square() || g.rows() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: g.rows() });
    }
    let h = g.inverse()?;
    let mut y_cache: HashMap<MultiIndex, BasePoly> = HashMap::new();
    let mut form_cache: HashMap<u32, BTreeMap<u32, BigRational>> = HashMap::new();
    let mut out = WeylForm::zero(b.policy());
    for (key, c) in b.terms() {
        let coeff = c.subst_linear(&h)?;
        let y_image = match y_cache.get(&key.y) {
            Some(p) => p.clone(),
            None => {
                let p = BasePoly::monomial(dim, key.y.clone(), Scalar::one()).subst_linear(&h)?;
                y_cache.insert(key.y.clone(), p.clone());
                p
            }
        };
        let forms = form_cache.entry(key.forms).or_insert_with(|| pull_forms(key.forms, &h));
        for (ye, yc) in y_image.terms() {
            for (mask, fc) in forms.iter() {
                let factor = yc.scale(fc);
                out.add_term_scaled(WeylKey::new(key.lambda, ye.clone(), *mask), &coeff, &factor);
            }
        }
    }
    Ok(out)
}
