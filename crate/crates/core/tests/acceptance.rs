//! End-to-end acceptance checks, all exact.
//!
//! Runs as a plain binary so that every criterion prints its verdict even
//! when everything passes. Exits nonzero if any criterion fails.

use std::time::Instant;

use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;

use fedosov_core::axioms::verify_dq_axioms;
use fedosov_core::connection::symplectize_connection;
use fedosov_core::engine::{d_apply, nabla_apply, quantize, star_product, FedosovData};
use fedosov_core::group::standard::{minus_identity, on_pair, quarter_turn, swap_pairs, third_turn};
use fedosov_core::group::{enumerate_group, GroupAction};
use fedosov_core::sampling::{self, PolyShape};
use fedosov_core::strata::{fixed_space, orbit_type_stratification};
use fedosov_core::suite::theta_form;
use fedosov_core::weyl::{act_group_element, ad_lambda, delta, hodge_decompose, moyal_mul, symbol};
use fedosov_core::{BasePoly, Chart, Christoffel, FiniteGroup, RatMatrix, Scalar, TruncationPolicy, WeylForm};

type Verdict = Result<String, String>;

fn poly(s: &str, dim: usize) -> BasePoly {
    BasePoly::parse(s, dim).unwrap()
}

fn group(gens: &[RatMatrix], dim: usize) -> FiniteGroup {
    enumerate_group(gens, dim, 64).unwrap()
}

fn curved_chart(gens: &[RatMatrix], dim: usize, n_max: u32, seed: u64, shape: &PolyShape) -> Chart {
    let g = group(gens, dim);
    let mut rng = sampling::rng(seed);
    let gamma = sampling::random_invariant_christoffel(&mut rng, &g, 3, shape).unwrap();
    assert!(!gamma.is_zero(), "seed {seed} gave a flat chart");
    Chart::new(g, gamma, TruncationPolicy::new(dim, n_max).unwrap()).unwrap()
}

/// Oracle: `Σ_k (iλ/2)^k/k! Σ_a C(k,a) (−1)^{k−a} ∂1^a∂2^{k−a} f · ∂1^{k−a}∂2^a g`
/// on `R²`, straight from the bidifferential formula.
fn moyal_oracle(f: &BasePoly, g: &BasePoly, k: u32) -> BasePoly {
    fn d(p: &BasePoly, a: u32, b: u32) -> BasePoly {
        let mut q = p.clone();
        for _ in 0..a {
            q = q.diff(0).unwrap();
        }
        for _ in 0..b {
            q = q.diff(1).unwrap();
        }
        q
    }
    let mut sum = BasePoly::zero(2);
    let mut binom = 1i64;
    for a in 0..=k {
        let sign = if (k - a).is_multiple_of(2) { 1 } else { -1 };
        let term = d(f, a, k - a).try_mul(&d(g, k - a, a)).unwrap();
        sum.add_scaled(&term, &Scalar::from_int(sign * binom));
        binom = binom * (k - a) as i64 / (a + 1) as i64;
    }
    let fact: i64 = (1..=k as i64).product();
    let pref = Scalar::i_pow(k) * Scalar::from_frac(1, (1i64 << k) * fact);
    sum.scale(&pref)
}

fn cone_reproduction() -> Verdict {
    let data = FedosovData::build(&Chart::flat(&[minus_identity(2)], 2, 8).unwrap()).map_err(|e| e.to_string())?;
    if data.safe_order() < 4 {
        return Err(format!("safe order {} < 4", data.safe_order()));
    }
    let gens = [("u", poly("x1^2 + x2^2", 2)), ("v", poly("x1^2 - x2^2", 2)), ("w", poly("2*x1*x2", 2))];
    let minus = minus_identity(2);
    for (nf, f) in &gens {
        for (ng, g) in &gens {
            let s = star_product(f, g, &data).map_err(|e| e.to_string())?;
            for k in 0..=4u32 {
                let got = s.order(k as usize).ok_or(format!("{nf}*{ng}: missing order {k}"))?;
                let want = moyal_oracle(f, g, k);
                if *got != want {
                    return Err(format!("{nf}*{ng}, k = {k}: engine {got}, oracle {want}"));
                }
                if got.act(&minus).unwrap() != *got {
                    return Err(format!("{nf}*{ng}, k = {k}: {got} is not invariant"));
                }
            }
        }
    }
    Ok("9 ordered products, k <= 4".into())
}

fn flatness_charts() -> Vec<(&'static str, Chart)> {
    let lin = PolyShape { max_degree: 1, max_terms: 2, ..Default::default() };
    let quad = PolyShape { max_degree: 2, max_terms: 2, ..Default::default() };
    vec![
        ("R2/Z2", curved_chart(&[minus_identity(2)], 2, 4, 11, &quad)),
        ("R2/Z4", curved_chart(&[quarter_turn()], 2, 5, 12, &quad)),
        ("R2/Z3", curved_chart(&[third_turn()], 2, 6, 13, &quad)),
        ("R4/Z2", curved_chart(&[minus_identity(4)], 4, 5, 14, &lin)),
        ("R4/Z4xZ4", curved_chart(&[on_pair(&quarter_turn(), 0, 4), on_pair(&quarter_turn(), 1, 4)], 4, 4, 15, &lin)),
    ]
}

fn flatness() -> Verdict {
    let mut notes = Vec::new();
    for (name, chart) in flatness_charts() {
        let n_max = chart.policy().n_max;
        let data = FedosovData::build(&chart).map_err(|e| format!("{name}: {e}"))?;
        if data.iterations_used() > n_max as usize {
            return Err(format!("{name}: {} iterations at n_max {n_max}", data.iterations_used()));
        }
        let residual = data.omega_residual();
        if !residual.is_zero() {
            return Err(format!("{name}: Omega + omega = {residual}"));
        }
        if data.r().is_zero() {
            return Err(format!("{name}: r = 0, chart not curved"));
        }
        notes.push(format!("{name} n_max {n_max}: {} it", data.iterations_used()));
    }
    Ok(notes.join(", "))
}

/// Flat cone, a curved invariant chart on `R²` and a curved chart on `R⁴`.
fn quantization_charts() -> Vec<(&'static str, Chart)> {
    let lin = PolyShape { max_degree: 1, max_terms: 2, ..Default::default() };
    let quad = PolyShape { max_degree: 2, max_terms: 2, ..Default::default() };
    vec![
        ("cone", Chart::flat(&[minus_identity(2)], 2, 6).unwrap()),
        ("R2/Z4", curved_chart(&[quarter_turn()], 2, 5, 12, &quad)),
        ("R4/Z2", curved_chart(&[minus_identity(4)], 4, 4, 14, &lin)),
    ]
}

fn random_polys(seed: u64, dim: usize, count: usize, shape: &PolyShape) -> Vec<BasePoly> {
    let mut rng = sampling::rng(seed);
    (0..count).map(|_| sampling::random_poly(&mut rng, dim, shape)).collect()
}

fn symbol_isomorphism() -> Verdict {
    let shape = PolyShape { max_degree: 4, max_terms: 3, ..Default::default() };
    for (name, chart) in quantization_charts() {
        let data = FedosovData::build(&chart).map_err(|e| format!("{name}: {e}"))?;
        for f in random_polys(31, chart.dim(), 50, &shape) {
            let q = quantize(std::slice::from_ref(&f), &data).map_err(|e| e.to_string())?;
            let s = symbol(&q);
            if s != WeylForm::from_base(s.policy(), &f) {
                return Err(format!("{name}: sigma(Q({f})) = {s}"));
            }
            let dq = d_apply(&q, &data).map_err(|e| e.to_string())?;
            if !dq.is_zero() {
                return Err(format!("{name}: D(Q({f})) = {dq}"));
            }
        }
    }
    Ok("3 charts x 50 polynomials".into())
}

fn dq_axioms() -> Verdict {
    let shape = PolyShape { max_degree: 4, max_terms: 2, ..Default::default() };
    let mut notes = Vec::new();
    for (name, chart) in quantization_charts() {
        let data = FedosovData::build(&chart).map_err(|e| format!("{name}: {e}"))?;
        let samples = random_polys(41, chart.dim(), 50, &shape);
        let report = verify_dq_axioms(&data, &samples, data.safe_order());
        if let Some(c) = report.checks.iter().find(|c| !c.passed) {
            return Err(format!("{name}: {} failed: {}", c.name, c.counterexample.clone().unwrap_or_default()));
        }
        notes.push(format!("{name} k <= {}", report.orders));
    }
    Ok(notes.join(", "))
}

fn hodge_identity() -> Verdict {
    let shape = PolyShape { max_degree: 3, max_terms: 3, ..Default::default() };
    let mut rng = sampling::rng(51);
    for i in 0..200 {
        let policy = TruncationPolicy::new(if i % 2 == 0 { 2 } else { 4 }, 5).unwrap();
        let b = sampling::random_weyl_form(&mut rng, policy, i / 2, &shape);
        let parts = hodge_decompose(&b);
        if parts.sum() != b {
            return Err(format!("hodge: b = {b}"));
        }
        let dd = delta(&delta(&b));
        if !dd.is_zero() {
            return Err(format!("delta^2 b = {dd} for b = {b}"));
        }
        let ad = ad_lambda(&theta_form(policy), &b).map_err(|e| e.to_string())?;
        let res = &delta(&b) + &ad;
        if !res.is_zero() {
            return Err(format!("delta + (i/lambda)[theta, .] = {res} for b = {b}"));
        }
    }
    Ok("200 forms on R2 and R4".into())
}

fn equivariance() -> Verdict {
    let quad = PolyShape { max_degree: 2, max_terms: 2, ..Default::default() };
    let charts = [
        ("trivial", curved_chart(&[], 2, 4, 61, &quad)),
        ("Z2", curved_chart(&[minus_identity(2)], 2, 4, 62, &quad)),
        ("Z4", curved_chart(&[quarter_turn()], 2, 4, 63, &quad)),
    ];
    let shape = PolyShape { max_degree: 3, max_terms: 2, ..Default::default() };
    for (name, chart) in &charts {
        let data = FedosovData::build(chart).map_err(|e| format!("{name}: {e}"))?;
        let policy = data.policy();
        let mut rng = sampling::rng(64);
        for i in 0..50 {
            let a = sampling::random_weyl_form(&mut rng, policy, i, &shape);
            let b = sampling::random_weyl_form(&mut rng, policy, i + 3, &shape);
            let f = sampling::random_poly(&mut rng, 2, &shape);
            for g in chart.group().elements() {
                let act = |w: &WeylForm| act_group_element(w, g);
                let run = || -> fedosov_core::Result<Vec<(&str, WeylForm)>> {
                    Ok(vec![
                        ("∘", &act(&moyal_mul(&a, &b)?)? - &moyal_mul(&act(&a)?, &act(&b)?)?),
                        ("δ", &act(&delta(&b))? - &delta(&act(&b)?)),
                        ("∇", &act(&nabla_apply(&b, &data)?)? - &nabla_apply(&act(&b)?, &data)?),
                        ("D", &act(&d_apply(&b, &data)?)? - &d_apply(&act(&b)?, &data)?),
                        ("Q", &act(&quantize(std::slice::from_ref(&f), &data)?)? - &quantize(&[f.act(g)?], &data)?),
                    ])
                };
                for (what, w) in run().map_err(|e| e.to_string())? {
                    if !w.is_zero() {
                        return Err(format!("{name}, element {g}, {what}: residual {w}"));
                    }
                }
            }
        }
    }
    Ok("trivial, Z2, Z4 x 50 instances, all elements".into())
}

fn brute_isotropy(group: &FiniteGroup, x: &[BigRational]) -> Vec<usize> {
    let mut out = Vec::new();
    for (i, g) in group.elements().iter().enumerate() {
        let moved = (0..x.len()).any(|r| {
            let gx: BigRational = (0..x.len()).map(|c| g.get(r, c) * &x[c]).sum();
            gx != x[r]
        });
        if !moved {
            out.push(i);
        }
    }
    out
}

fn stratification() -> Verdict {
    let groups = [
        ("Z2 on R2", group(&[minus_identity(2)], 2)),
        ("Z3 on R2", group(&[third_turn()], 2)),
        ("Z4 on R2", group(&[quarter_turn()], 2)),
        ("Z4xZ4 on R4", group(&[on_pair(&quarter_turn(), 0, 4), on_pair(&quarter_turn(), 1, 4)], 4)),
        ("D4 on R4", group(&[on_pair(&minus_identity(2), 0, 4), swap_pairs()], 4)),
    ];
    let mut rng = sampling::rng(71);
    for (name, g) in &groups {
        if g.order() > 16 {
            return Err(format!("{name}: order {}", g.order()));
        }
        let strata = orbit_type_stratification(g, 64).map_err(|e| e.to_string())?;
        let mut hit = vec![false; strata.len()];
        for i in 0..200 {
            let x = match i {
                0 => vec![BigRational::zero(); g.dim()],
                _ if rng.gen_bool(0.5) => sampling::random_point(&mut rng, g.dim()),
                _ => sampling::random_special_point(&mut rng, g),
            };
            let iso = brute_isotropy(g, &x);
            let Some(s) = strata.iter().position(|s| s.contains_subgroup(&iso)) else {
                return Err(format!("{name}: isotropy {iso:?} of {x:?} is in no stratum"));
            };
            let dim = fixed_space(g, &iso).len();
            if strata[s].fixed_dim != dim || strata[s].isotropy_order != iso.len() {
                return Err(format!("{name}: stratum {s} disagrees with isotropy {iso:?} (fixed dim {dim})"));
            }
            hit[s] = true;
        }
        if let Some(s) = hit.iter().position(|h| !h) {
            return Err(format!("{name}: stratum {s} ({:?}) never sampled", strata[s]));
        }
    }
    let cone = orbit_type_stratification(&groups[0].1, 64).map_err(|e| e.to_string())?;
    let rows: Vec<_> = cone.iter().map(|s| (s.isotropy_order, s.fixed_dim, s.is_principal)).collect();
    if rows != [(2, 0, false), (1, 2, true)] {
        return Err(format!("cone strata {rows:?}"));
    }
    Ok("5 groups x 200 points, cone has 2 strata".into())
}

fn symplectization() -> Verdict {
    let shape = PolyShape { max_degree: 2, max_terms: 3, ..Default::default() };
    let mut rng = sampling::rng(81);
    for i in 0..10 {
        let dim = if i % 2 == 0 { 2 } else { 4 };
        let input = sampling::random_torsionfree_christoffel(&mut rng, dim, 4, &shape);
        let out = symplectize_connection(&input).map_err(|e| e.to_string())?;
        if !out.is_symplectic() || !out.is_torsionfree() {
            return Err(format!(
                "input {i}: output symplectic {}, torsionfree {}",
                out.is_symplectic(),
                out.is_torsionfree()
            ));
        }
        let again = symplectize_connection(&out).map_err(|e| e.to_string())?;
        if again != out {
            return Err(format!("input {i}: not idempotent"));
        }
        let sym: Christoffel = sampling::random_symmetric_christoffel(&mut rng, dim, 4, &shape);
        if symplectize_connection(&sym).map_err(|e| e.to_string())? != sym {
            return Err(format!("input {i}: moved an already symplectic connection"));
        }
    }
    Ok("10 torsionfree inputs on R2 and R4".into())
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 8] = [
        ("1 cone reproduction", cone_reproduction),
        ("2 flatness", flatness),
        ("3 symbol isomorphism", symbol_isomorphism),
        ("4 DQ axioms", dq_axioms),
        ("5 Hodge-de Rham identity", hodge_identity),
        ("6 equivariance", equivariance),
        ("7 stratification", stratification),
        ("8 symplectization", symplectization),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let verdict = run();
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(note) => println!("PASS  {name} ({note}) [{secs:.1} s]"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why} [{secs:.1} s]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} of 8 criteria failed");
        std::process::exit(1);
    }
}
