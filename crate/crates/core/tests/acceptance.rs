//! One line per acceptance criterion. Tolerances here are pinned
//! independently of the library's own table.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use polyfock::verify::{run_suite, CaseResult, Suite, SuiteConfig, SuiteSelection};

const SEED: u64 = 20_240_601;

struct Check {
    prefix: &'static str,
    tol: f64,
    /// Lower bound on an observed witness instead of an upper bound on an error.
    witness: bool,
    min_cases: usize,
}

const fn err(prefix: &'static str, tol: f64, min_cases: usize) -> Check {
    Check {
        prefix,
        tol,
        witness: false,
        min_cases,
    }
}

const fn wit(prefix: &'static str, tol: f64, min_cases: usize) -> Check {
    Check {
        prefix,
        tol,
        witness: true,
        min_cases,
    }
}

struct Criterion {
    number: u32,
    name: &'static str,
    suite: Suite,
    config: SuiteConfig,
    checks: Vec<Check>,
    budget: Duration,
}

fn config(n: usize, m: usize, p: Option<u32>) -> SuiteConfig {
    SuiteConfig {
        n_max: Some(n),
        m_max: Some(m),
        p_max: p,
        seed: SEED,
        ..SuiteConfig::default()
    }
}

fn criteria() -> Vec<Criterion> {
    vec![
        Criterion {
            number: 1,
            name: "laguerre decomposition, n ≤ 8, p ≤ 8, exact",
            suite: Suite::Laguerre,
            config: config(8, 1, Some(8)),
            checks: vec![err("decomposition/", 0.0, 72)],
            budget: Duration::from_secs(30),
        },
        Criterion {
            number: 2,
            name: "laguerre of a sum and telescoping, exact",
            suite: Suite::Laguerre,
            config: config(8, 1, Some(8)),
            checks: vec![err("sum/", 0.0, 16), err("telescoping/", 0.0, 4)],
            budget: Duration::from_secs(30),
        },
        Criterion {
            number: 3,
            name: "kernel via orthonormal basis, n,m ≤ 3, |p| ≤ 64",
            suite: Suite::KernelBasis,
            config: config(3, 3, Some(64)),
            checks: vec![err("series/", 1e-10, 9)],
            budget: Duration::from_secs(120),
        },
        Criterion {
            number: 4,
            name: "reproducing property by quadrature",
            suite: Suite::Reproducing,
            config: config(3, 3, Some(5)),
            checks: vec![err("reproducing/n1/", 1e-7, 3), err("reproducing/n2/", 1e-7, 3), err("reproducing/n3/", 1e-5, 3)],
            budget: Duration::from_secs(180),
        },
        Criterion {
            number: 5,
            name: "sum-of-products kernel decomposition, n,m ≤ 5",
            suite: Suite::SumProducts,
            config: config(5, 5, None),
            checks: vec![err("products/", 1e-11, 25)],
            budget: Duration::from_secs(10),
        },
        Criterion {
            number: 6,
            name: "fourier transform of laguerre functions, p ≤ 10",
            suite: Suite::FourierLaguerre,
            config: config(1, 1, Some(10)),
            checks: vec![err("forward/", 1e-8, 11), err("inverse/", 1e-8, 11)],
            budget: Duration::from_secs(30),
        },
        Criterion {
            number: 7,
            name: "horizontal fourier transform of the kernel, n ≤ 2, m ≤ 4",
            suite: Suite::FourierKernel,
            config: config(2, 4, None),
            checks: vec![err("transform/", 1e-8, 8)],
            budget: Duration::from_secs(120),
        },
        Criterion {
            number: 8,
            name: "structural properties",
            suite: Suite::Structure,
            config: config(2, 3, None),
            checks: vec![
                err("hermitian/", 1e-12, 6),
                err("psd/", 1e-9, 6),
                err("h-covariance/", 1e-12, 6),
                wit("g-witness/", 0.1, 6),
                err("intertwining/", 1e-11, 6),
                err("fiber-orthonormality/", 1e-10, 6),
                err("gamma-identity/", 1e-10, 6),
                err("gamma-positivity/", 1e-10, 6),
                err("sigma-two-route/", 1e-9, 6),
                err("r-two-route/", 1e-7, 5),
                err("kernel-image-norm/", 1e-7, 6),
                wit("noncommutativity/", 1e-3, 4),
            ],
            budget: Duration::from_secs(120),
        },
    ]
}

/// Witness cases carry `threshold / observed` against a tolerance of 1.
fn judge(check: &Check, cases: &[&CaseResult]) -> Result<String, String> {
    if cases.len() < check.min_cases {
        return Err(format!("{}: {} cases, expected ≥ {}", check.prefix, cases.len(), check.min_cases));
    }
    if check.witness {
        let observed = cases
            .iter()
            .map(|c| check.tol / c.max_error)
            .fold(f64::INFINITY, f64::min);
        if cases.iter().any(|c| c.tolerance != 1.0) || !(observed > check.tol) {
            return Err(format!("{} min witness {observed:.3e}, need > {:.0e}", check.prefix, check.tol));
        }
        Ok(format!("{} min witness {observed:.3e}", check.prefix))
    } else {
        let worst = cases.iter().map(|c| c.max_error).fold(0.0, f64::max);
        if !(worst <= check.tol) {
            let c = cases.iter().find(|c| !(c.max_error <= check.tol)).unwrap();
            return Err(format!("{} {} error {:.3e} > {:.0e}", check.prefix, c.id, c.max_error, check.tol));
        }
        Ok(format!("{} max error {worst:.3e}", check.prefix))
    }
}

fn main() -> ExitCode {
    let mut all_ok = true;
    for c in criteria() {
        let start = Instant::now();
        let report = run_suite(SuiteSelection::One(c.suite), &c.config);
        let elapsed = start.elapsed();
        let mut details = Vec::new();
        let mut ok = true;
        match report {
            Ok(r) => {
                for check in &c.checks {
                    let cases: Vec<&CaseResult> = r.cases.iter().filter(|x| x.id.starts_with(check.prefix)).collect();
                    match judge(check, &cases) {
                        Ok(s) => details.push(s),
                        Err(s) => {
                            ok = false;
                            details.push(format!("FAIL {s}"));
                        }
                    }
                }
            }
            Err(e) => {
                ok = false;
                details.push(format!("FAIL {e}"));
            }
        }
        if elapsed > c.budget {
            ok = false;
            details.push(format!("FAIL over budget {:.0}s", c.budget.as_secs_f64()));
        }
        all_ok &= ok;
        println!(
            "criterion {} {}: {} ({:.1}s) [{}]",
            c.number,
            c.name,
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            details.join("; ")
        );
    }
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
