//! Seeded random inputs for the property suite and the acceptance tests.
//!
//! Everything is drawn from a `ChaCha8Rng`, so a seed fixes every sample on
//! every platform.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::connection::Christoffel;
use crate::group::FiniteGroup;
use crate::poly::{BasePoly, MultiIndex};
use crate::rational::Rat;
use crate::scalar::Scalar;
use crate::strata::fixed_space;
use crate::weyl::{TruncationPolicy, WeylForm, WeylKey};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape of random polynomials.
#[derive(Clone, Copy, Debug)]
pub struct PolyShape {
    pub max_degree: u32,
    pub max_terms: usize,
    /// Coefficients have numerators in `-coeff_bound..=coeff_bound`.
    pub coeff_bound: i64,
    /// Allow imaginary and fractional coefficients.
    pub gaussian: bool,
}

impl Default for PolyShape {
    fn default() -> Self {
        PolyShape { max_degree: 4, max_terms: 4, coeff_bound: 5, gaussian: true }
    }
}

pub fn random_scalar(rng: &mut impl Rng, shape: &PolyShape) -> Scalar {
    let b = shape.coeff_bound.max(1);
    loop {
        let re = rng.gen_range(-b..=b);
        let (im, den) =
            if shape.gaussian && rng.gen_bool(0.3) { (rng.gen_range(-b..=b), rng.gen_range(1..=3)) } else { (0, 1) };
        let s = Scalar::from_rats(Rat::frac(re, den), Rat::frac(im, den));
        if !num_traits::Zero::is_zero(&s) {
            return s;
        }
    }
}

pub fn random_exponent(rng: &mut impl Rng, nvars: usize, degree: u32) -> MultiIndex {
    let mut e = MultiIndex::zero(nvars);
    for _ in 0..degree {
        e.0[rng.gen_range(0..nvars)] += 1;
    }
    e
}

/// A nonzero polynomial with up to `max_terms` monomials of degree at most
/// `max_degree`.
pub fn random_poly(rng: &mut impl Rng, nvars: usize, shape: &PolyShape) -> BasePoly {
    loop {
        let terms = rng.gen_range(1..=shape.max_terms.max(1));
        let mut p = BasePoly::zero(nvars);
        for _ in 0..terms {
            let d = rng.gen_range(0..=shape.max_degree);
            p.add_term(random_exponent(rng, nvars, d), &random_scalar(rng, shape));
        }
        if !p.is_zero() {
            return p;
        }
    }
}

/// A random form touching every `(fiber degree q, form degree l)` sector
/// in turn: the `i`-th call with `sector = i` cycles through them.
pub fn random_weyl_form(rng: &mut impl Rng, policy: TruncationPolicy, sector: usize, shape: &PolyShape) -> WeylForm {
    let dim = policy.dim;
    let qs = policy.n_max as usize + 1;
    let ls = dim + 1;
    let (q, l) = ((sector % qs) as u32, (sector / qs) % ls);
    let mut out = WeylForm::zero(policy);
    let terms = rng.gen_range(1..=shape.max_terms.max(1));
    let mut slots: Vec<usize> = (0..dim).collect();
    for _ in 0..terms {
        // mostly the chosen sector, sometimes a neighbour for mixing
        let q = if rng.gen_bool(0.75) { q } else { rng.gen_range(0..=policy.n_max) };
        let lambda = rng.gen_range(0..=(policy.n_max - q) / 2);
        slots.shuffle(rng);
        let mut forms = 0u32;
        for &j in &slots[..l] {
            forms |= 1 << j;
        }
        let coeff = random_poly(rng, dim, &PolyShape { max_terms: 2, ..*shape });
        out.add_term(WeylKey::new(lambda, random_exponent(rng, dim, q), forms), &coeff);
    }
    out
}

/// A fully symmetric (torsionfree symplectic) Christoffel tensor.
pub fn random_symmetric_christoffel(rng: &mut impl Rng, dim: usize, entries: usize, shape: &PolyShape) -> Christoffel {
    let mut c = Christoffel::zero(dim);
    for _ in 0..entries {
        let (i, j, k) = (rng.gen_range(0..dim), rng.gen_range(0..dim), rng.gen_range(0..dim));
        let v = c.get(i, j, k) + &random_poly(rng, dim, shape);
        c.set_symmetric(i, j, k, v);
    }
    c
}

/// Symmetric in the first two slots only: torsionfree, generally not
/// symplectic.
pub fn random_torsionfree_christoffel(
    rng: &mut impl Rng,
    dim: usize,
    entries: usize,
    shape: &PolyShape,
) -> Christoffel {
    let mut c = Christoffel::zero(dim);
    for _ in 0..entries {
        let (i, j, k) = (rng.gen_range(0..dim), rng.gen_range(0..dim), rng.gen_range(0..dim));
        let v = c.get(i, j, k) + &random_poly(rng, dim, shape);
        c.set(i, j, k, v.clone());
        c.set(j, i, k, v);
    }
    c
}

/// A Reynolds-averaged symmetric Christoffel tensor, resampled until the
/// average is nonzero (odd tensors can average away).
pub fn random_invariant_christoffel(
    rng: &mut impl Rng,
    group: &FiniteGroup,
    entries: usize,
    shape: &PolyShape,
) -> crate::Result<Christoffel> {
    for _ in 0..64 {
        let c = random_symmetric_christoffel(rng, group.dim(), entries, shape).reynolds(group)?;
        if !c.is_zero() {
            return Ok(c);
        }
    }
    Ok(Christoffel::zero(group.dim()))
}

pub fn random_rational(rng: &mut impl Rng, bound: i64) -> BigRational {
    BigRational::new(BigInt::from(rng.gen_range(-bound..=bound)), BigInt::from(rng.gen_range(1..=bound.max(1))))
}

/// A generic point of `Q^dim`.
pub fn random_point(rng: &mut impl Rng, dim: usize) -> Vec<BigRational> {
    (0..dim).map(|_| random_rational(rng, 9)).collect()
}

/// A random point of the fixed space of a random cyclic subgroup, so that
/// non-principal isotropy actually gets sampled.
pub fn random_special_point(rng: &mut impl Rng, group: &FiniteGroup) -> Vec<BigRational> {
    let g = rng.gen_range(0..group.order());
    let mut cyclic = vec![0usize];
    let mut x = g;
    while x != 0 {
        cyclic.push(x);
        x = group.mul(x, g);
    }
    let basis = fixed_space(group, &cyclic);
    let mut p = vec![BigRational::from_integer(BigInt::from(0)); group.dim()];
    for v in &basis {
        // sometimes drop a basis vector to land on smaller strata
        if rng.gen_bool(0.3) {
            continue;
        }
        let c = random_rational(rng, 5);
        for (pi, vi) in p.iter_mut().zip(v) {
            *pi += &c * vi;
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{enumerate_group, standard::*};
    use crate::strata::isotropy_of_point;

    #[test]
    fn seeds_are_reproducible() {
        let a = random_poly(&mut rng(7), 4, &PolyShape::default());
        let b = random_poly(&mut rng(7), 4, &PolyShape::default());
        assert_eq!(a, b);
        assert!(a.degree().unwrap() <= 4);
    }

    #[test]
    fn christoffel_samples_have_their_symmetries() {
        let mut r = rng(1);
        let shape = PolyShape { max_degree: 2, ..Default::default() };
        let s = random_symmetric_christoffel(&mut r, 4, 5, &shape);
        assert!(s.is_fully_symmetric() && !s.is_zero());
        let t = random_torsionfree_christoffel(&mut r, 2, 3, &shape);
        assert!(t.is_torsionfree());
        let g = enumerate_group(&[minus_identity(2)], 2, 64).unwrap();
        let inv = random_invariant_christoffel(&mut r, &g, 3, &shape).unwrap();
        assert!(inv.is_fully_symmetric() && !inv.is_zero());
        assert_eq!(inv.reynolds(&g).unwrap(), inv);
    }

    #[test]
    fn weyl_samples_respect_truncation() {
        let p = TruncationPolicy::new(2, 4).unwrap();
        let mut r = rng(3);
        for s in 0..15 {
            let w = random_weyl_form(&mut r, p, s, &PolyShape::default());
            assert!(!w.is_zero());
            assert!(w.max_fedosov_degree().unwrap() <= 4);
        }
    }

    #[test]
    fn special_points_hit_the_origin_stratum() {
        let g = enumerate_group(&[quarter_turn()], 2, 64).unwrap();
        let mut r = rng(5);
        let hits = (0..40).filter(|_| isotropy_of_point(&g, &random_special_point(&mut r, &g)).len() == 4).count();
        assert!(hits > 0);
    }
}
