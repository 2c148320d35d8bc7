use serde::Serialize;
use serde_json::json;

use fedosov_core::axioms::Check;
use fedosov_core::chart::{ChartFile, ChartValidation};
use fedosov_core::engine::{star_product, unsafe_orders, BuildReport, ConventionEcho, FedosovData, StarSeries};
use fedosov_core::invariants::poisson_bracket;
use fedosov_core::strata::orbit_type_stratification;
use fedosov_core::suite::{run_suite, SuiteConfig};
use fedosov_core::{BasePoly, Chart, Scalar};

use crate::table::Table;
use crate::{Common, Failure};

type Outcome = Result<(), Failure>;

fn load_chart(common: &Common) -> Result<Chart, Failure> {
    let path = &common.chart;
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let file: ChartFile =
        serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let chart = file.into_chart(common.n_max).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(if common.flip_pi_sign { chart.with_convention(chart.policy().convention.flipped()) } else { chart })
}

fn emit_json(value: &impl Serialize) {
    println!("{}", serde_json::to_string_pretty(value).expect("reports serialize"));
}

fn conventions_line(c: &ConventionEcho) -> String {
    format!("conventions: pi sign {}, delta sign {}, moyal constant {}", c.pi_sign, c.delta_sign, c.moyal_constant)
}

fn validation_text(v: &ChartValidation) -> Vec<String> {
    let mut lines = Vec::new();
    if !v.symplectic.symplectic {
        lines.push("group is not symplectic; offending elements:".to_string());
        for m in &v.symplectic.violator_matrices {
            lines.push(format!("  {}", serde_json::to_string(m).expect("matrix")));
        }
    }
    if !v.fully_symmetric {
        lines.push("christoffel symbols are not fully symmetric".to_string());
    }
    if !v.invariance.invariant {
        lines.push("christoffel symbols are not invariant; offending elements:".to_string());
        for m in &v.invariance.violator_matrices {
            lines.push(format!("  {}", serde_json::to_string(m).expect("matrix")));
        }
    }
    lines
}

#[derive(Serialize)]
struct BuildOutput {
    command: &'static str,
    passed: bool,
    validation: ChartValidation,
    build: Option<BuildReport>,
    error: Option<String>,
}

pub fn build(common: &Common) -> Outcome {
    let chart = load_chart(common)?;
    let validation = chart.validate().map_err(|e| Failure::Input(e.to_string()))?;
    let (build, error) = if validation.passed() {
        match FedosovData::build(&chart) {
            Ok(d) => (Some(d.report()), None),
            Err(e) => (None, Some(e.to_string())),
        }
    } else {
        (None, None)
    };
    let passed = validation.passed() && build.as_ref().is_some_and(|b| b.omega_residual == "0");
    let out = BuildOutput { command: "build", passed, validation, build, error };
    if common.json {
        emit_json(&out);
    } else {
        for line in validation_text(&out.validation) {
            println!("{line}");
        }
        if let Some(e) = &out.error {
            println!("construction failed: {e}");
        }
        if let Some(b) = &out.build {
            let mut t = Table::new(&["quantity", "value"]);
            t.row(vec!["dim".into(), b.dim.to_string()]);
            t.row(vec!["group order".into(), b.group_order.to_string()]);
            t.row(vec!["n_max".into(), b.n_max.to_string()]);
            t.row(vec!["iterations".into(), b.iterations.to_string()]);
            t.row(vec!["deg_F(r)".into(), b.r_fedosov_degree.map_or("none (r = 0)".into(), |d| d.to_string())]);
            t.row(vec!["terms of r".into(), b.r_terms.to_string()]);
            t.row(vec!["Omega + omega".into(), b.omega_residual.clone()]);
            print!("{}", t.render());
            println!("{}", conventions_line(&b.conventions));
        }
        println!("{}", if passed { "OK" } else { "FAILED" });
    }
    if passed {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn parse_poly(text: &str, dim: usize, name: &str) -> Result<BasePoly, Failure> {
    BasePoly::parse(text, dim).map_err(|e| Failure::Input(format!("{name} = \"{text}\": {e}")))
}

#[derive(Serialize)]
struct Coefficient {
    k: usize,
    coeff: String,
}

fn coefficients(s: &StarSeries) -> Vec<Coefficient> {
    s.mu.iter().enumerate().map(|(k, p)| Coefficient { k, coeff: p.to_string() }).collect()
}

pub fn star(common: &Common, f: &str, g: &str, orders: Option<u32>) -> Outcome {
    let chart = load_chart(common)?;
    let dim = chart.dim();
    let fp = parse_poly(f, dim, "f")?;
    let gp = parse_poly(g, dim, "g")?;
    let data = FedosovData::build(&chart).map_err(|e| Failure::Input(format!("construction failed: {e}")))?;
    let safe = data.safe_order();
    let requested = orders.unwrap_or(safe);
    let mut warnings = Vec::new();
    if let Some(range) = unsafe_orders(requested, &data) {
        warnings.push(format!(
            "orders {}..={} exceed the exact range k <= {safe} at n_max {}; not printed",
            range.start(),
            range.end(),
            data.policy().n_max
        ));
    }
    let shown = requested.min(safe) as usize;
    let run = || -> fedosov_core::Result<(StarSeries, StarSeries, BasePoly)> {
        let fg = star_product(&fp, &gp, &data)?.truncated(shown);
        let gf = star_product(&gp, &fp, &data)?.truncated(shown);
        Ok((fg.clone(), fg.sub(&gf), poisson_bracket(&fp, &gp)?.scale(&Scalar::i())))
    };
    let (fg, comm, i_bracket) = run().map_err(|e| Failure::Input(e.to_string()))?;
    let matches = if shown >= 1 { Some(comm.mu[0].is_zero() && comm.mu[1] == i_bracket) } else { None };

    if common.json {
        emit_json(&json!({
            "command": "star",
            "f": fp.to_string(),
            "g": gp.to_string(),
            "n_max": data.policy().n_max,
            "safe_order": safe,
            "mu": coefficients(&fg),
            "commutator": coefficients(&comm),
            "i_bracket": i_bracket.to_string(),
            "bracket_matches": matches,
            "conventions": data.conventions(),
            "warnings": warnings,
        }));
    } else {
        for w in &warnings {
            eprintln!("warning: {w}");
        }
        println!("f = {fp}");
        println!("g = {gp}");
        println!("n_max {}, exact for k <= {safe}", data.policy().n_max);
        let mut t = Table::new(&["k", "mu_k(f,g)", "[f,g]_k"]);
        for k in 0..fg.mu.len() {
            t.row(vec![k.to_string(), fg.mu[k].to_string(), comm.mu[k].to_string()]);
        }
        print!("{}", t.render());
        let verdict = match matches {
            Some(true) => "matches",
            Some(false) => "DIFFERS",
            None => "not available below order 1",
        };
        println!("i{{f,g}} = {i_bracket}  first-order commutator {verdict}");
        println!("{}", conventions_line(&data.conventions()));
    }
    if matches == Some(false) {
        Err(Failure::Check)
    } else {
        Ok(())
    }
}

pub fn strata(common: &Common, budget: usize) -> Outcome {
    let chart = load_chart(common)?;
    let strata = orbit_type_stratification(chart.group(), budget).map_err(|e| Failure::Input(e.to_string()))?;
    if common.json {
        emit_json(&json!({
            "command": "strata",
            "dim": chart.dim(),
            "group_order": chart.group().order(),
            "strata": strata,
        }));
    } else {
        println!("group of order {} on R^{}", chart.group().order(), chart.dim());
        let mut t = Table::new(&["isotropy order", "fixed dim", "class size", "principal"]);
        for s in &strata {
            t.row(vec![
                s.isotropy_order.to_string(),
                s.fixed_dim.to_string(),
                s.class_size().to_string(),
                if s.is_principal { "yes" } else { "no" }.into(),
            ]);
        }
        print!("{}", t.render());
    }
    Ok(())
}

fn check_line(c: &Check) -> String {
    let status = if c.passed { "PASS" } else { "FAIL" };
    match &c.counterexample {
        Some(ex) => format!("{status}  {} ({} cases): {ex}", c.name, c.cases),
        None => format!("{status}  {} ({} cases)", c.name, c.cases),
    }
}

pub fn verify(common: &Common, seed: u64, samples: usize, orders: u32) -> Outcome {
    let chart = load_chart(common)?;
    let report = run_suite(&chart, &SuiteConfig { seed, samples, orders });
    let passed = report.passed();
    if common.json {
        emit_json(&json!({ "command": "verify", "passed": passed, "report": report }));
    } else {
        println!("seed {seed}, {samples} samples, n_max {}", report.n_max);
        for c in &report.checks {
            println!("{}", check_line(c));
        }
        println!("{}", conventions_line(&report.conventions));
        println!("{}", if passed { "OK" } else { "FAILED" });
    }
    if passed {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}
