//! Verification suites: each checks a family of closed-form identities
//! against an independent oracle and reports one case per parameter set.
//!
//! Tolerances live in [`TOLERANCES`]. Random sample points come from a
//! ChaCha stream keyed by the suite seed and the case id, so a report does
//! not depend on scheduling.

use std::collections::BTreeMap;
use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::basis_oracle::build_orthonormal_basis;
use crate::error::{Error, Result};
use crate::kernels::{
    kernel_f, kernel_f_products, kernel_g, kernel_h, kernel_h_products, ComplexPoint, KernelSpec, ProductForm,
};
use crate::multiindex::{IndexTable, MultiIndex};
use crate::orthopoly::{check_laguerre_of_sum, check_telescoping, laguerre_decomposition_report, ratio, Rational};
use crate::quadrature::{default_order, oscillatory_order, QuadratureGrid};
use crate::spectral::{
    fourier_laguerre_closed, fourier_laguerre_inverse_quadrature, fourier_laguerre_quadrature, l_closed,
    l_quadrature, q_values, r_f_apply, r_f_kernel_image, r_h_apply,
};
use crate::symbols::{gamma_direct, gamma_toeplitz, parse_symbol, sigma_direct, sigma_from_gamma, SymbolMatrix};
use crate::transforms::{check_intertwining, flatten, kernel_section_f, norm_sqr_f};

/// The individual suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Laguerre,
    KernelBasis,
    Reproducing,
    SumProducts,
    FourierLaguerre,
    FourierKernel,
    Structure,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Laguerre,
        Suite::KernelBasis,
        Suite::Reproducing,
        Suite::SumProducts,
        Suite::FourierLaguerre,
        Suite::FourierKernel,
        Suite::Structure,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Laguerre => "laguerre",
            Suite::KernelBasis => "kernel-basis",
            Suite::Reproducing => "reproducing",
            Suite::SumProducts => "sum-products",
            Suite::FourierLaguerre => "fourier-laguerre",
            Suite::FourierKernel => "fourier-kernel",
            Suite::Structure => "structure",
        }
    }

    // Default (n_max, m_max, p_max) and the largest accepted values.
    fn ranges(self) -> ([usize; 3], [usize; 3]) {
        match self {
            Suite::Laguerre => ([8, 1, 8], [10, 1, 10]),
            Suite::KernelBasis => ([3, 3, 64], [3, 3, 96]),
            Suite::Reproducing => ([3, 3, 5], [3, 4, 6]),
            Suite::SumProducts => ([5, 5, 0], [8, 8, 0]),
            Suite::FourierLaguerre => ([1, 1, 10], [1, 1, 30]),
            Suite::FourierKernel => ([2, 4, 0], [2, 6, 0]),
            Suite::Structure => ([2, 3, 0], [2, 4, 0]),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A single suite or all of them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteSelection {
    One(Suite),
    All,
}

impl FromStr for SuiteSelection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "all" {
            return Ok(SuiteSelection::All);
        }
        Suite::ALL
            .iter()
            .find(|x| x.name() == s)
            .map(|&x| SuiteSelection::One(x))
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

/// One row of the tolerance table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub suite: Suite,
    pub check: &'static str,
    pub value: f64,
    /// What the identity was originally checked to.
    pub original: &'static str,
}

const fn tol(suite: Suite, check: &'static str, value: f64, original: &'static str) -> Tolerance {
    Tolerance {
        suite,
        check,
        value,
        original,
    }
}

/// Every tolerance used by the suites. Entries marked as thresholds are
/// lower bounds on a witness; their cases report `threshold / observed`
/// against a tolerance of 1.
pub const TOLERANCES: &[Tolerance] = &[
    tol(Suite::Laguerre, "decomposition", 0.0, "exact rational arithmetic"),
    tol(Suite::Laguerre, "sum", 0.0, "exact rational arithmetic"),
    tol(Suite::Laguerre, "telescoping", 0.0, "exact rational arithmetic"),
    tol(Suite::KernelBasis, "series", 1e-10, "1e-15, extended precision, |p| ≤ 128"),
    tol(Suite::Reproducing, "low-dim", 1e-7, "exact symbolic integration"),
    tol(Suite::Reproducing, "n3", 1e-5, "exact symbolic integration"),
    tol(Suite::SumProducts, "products", 1e-11, "exact symbolic equality"),
    tol(Suite::FourierLaguerre, "transform", 1e-8, "exact symbolic equality"),
    tol(Suite::FourierKernel, "transform", 1e-8, "exact symbolic equality"),
    tol(Suite::Structure, "hermitian", 1e-12, "not stated"),
    tol(Suite::Structure, "psd", 1e-9, "not stated"),
    tol(Suite::Structure, "h-covariance", 1e-12, "not stated"),
    tol(Suite::Structure, "g-witness", 0.1, "threshold"),
    tol(Suite::Structure, "intertwining", 1e-11, "not stated"),
    tol(Suite::Structure, "fiber-orthonormality", 1e-10, "not stated"),
    tol(Suite::Structure, "gamma-identity", 1e-10, "not stated"),
    tol(Suite::Structure, "gamma-positivity", 1e-10, "not stated"),
    tol(Suite::Structure, "sigma-two-route", 1e-9, "not stated"),
    tol(Suite::Structure, "r-two-route", 1e-7, "not stated"),
    tol(Suite::Structure, "kernel-image-norm", 1e-7, "not stated"),
    tol(Suite::Structure, "noncommutativity", 1e-3, "threshold"),
];

/// Looks up a tolerance.
///
/// # Panics
/// If the pair is not in [`TOLERANCES`].
pub fn tolerance(suite: Suite, check: &str) -> f64 {
    TOLERANCES
        .iter()
        .find(|t| t.suite == suite && t.check == check)
        .unwrap_or_else(|| panic!("no tolerance for {suite}/{check}"))
        .value
}

/// Parameter ranges and seeds; `None` picks the suite default.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub n_max: Option<usize>,
    pub m_max: Option<usize>,
    pub p_max: Option<u32>,
    pub alpha: Option<f64>,
    pub order: Option<usize>,
    pub seed: u64,
}

struct Resolved {
    n_max: usize,
    m_max: usize,
    p_max: u32,
    alpha: f64,
    order: Option<usize>,
    seed: u64,
}

impl SuiteConfig {
    fn resolve(&self, suite: Suite) -> Result<Resolved> {
        let (def, max) = suite.ranges();
        let pick = |v: Option<usize>, i: usize, what: &'static str, range: &'static str| -> Result<usize> {
            let v = v.unwrap_or(def[i]);
            if v > max[i] || (v == 0 && max[i] > 0) {
                return Err(Error::OutOfRange {
                    what,
                    value: v.to_string(),
                    range,
                });
            }
            Ok(v)
        };
        let n_max = pick(self.n_max, 0, "n-max", "1 ..= suite limit")?;
        let m_max = if max[1] > 1 {
            pick(self.m_max, 1, "m-max", "1 ..= suite limit")?
        } else {
            1
        };
        let p_max = match (self.p_max, max[2]) {
            (Some(p), lim) if p as usize > lim => {
                return Err(Error::OutOfRange {
                    what: "p-max",
                    value: p.to_string(),
                    range: "0 ..= suite limit",
                })
            }
            (Some(p), _) => p,
            (None, _) => def[2] as u32,
        };
        let alpha = self.alpha.unwrap_or(1.0);
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::OutOfRange {
                what: "alpha",
                value: alpha.to_string(),
                range: "(0, ∞)",
            });
        }
        if let Some(o) = self.order {
            if !(2..=crate::quadrature::MAX_ORDER).contains(&o) {
                return Err(Error::OutOfRange {
                    what: "order",
                    value: o.to_string(),
                    range: "2 ..= 128",
                });
            }
        }
        Ok(Resolved {
            n_max,
            m_max,
            p_max,
            alpha,
            order: self.order,
            seed: self.seed,
        })
    }
}

/// Outcome of one case; `passed ⇔ max_error ≤ tolerance`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseResult {
    pub id: String,
    pub params: Value,
    pub max_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Report of a suite run; `all` nests one report per suite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub passed: bool,
    pub cases: Vec<CaseResult>,
    pub wall_time_secs: f64,
    pub quadrature_orders: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub suites: Vec<VerificationReport>,
}

impl VerificationReport {
    /// Every case, including those of nested reports.
    pub fn all_cases(&self) -> Vec<&CaseResult> {
        let mut out: Vec<&CaseResult> = self.cases.iter().collect();
        for s in &self.suites {
            out.extend(s.all_cases());
        }
        out
    }

    pub fn failures(&self) -> Vec<&CaseResult> {
        self.all_cases().into_iter().filter(|c| !c.passed).collect()
    }

    /// Copy with wall times zeroed, for comparing runs.
    pub fn without_timing(&self) -> VerificationReport {
        VerificationReport {
            wall_time_secs: 0.0,
            suites: self.suites.iter().map(|s| s.without_timing()).collect(),
            ..self.clone()
        }
    }
}

type Check = Box<dyn Fn(&mut ChaCha8Rng) -> Result<f64> + Send + Sync>;

struct CaseDef {
    id: String,
    params: Value,
    tolerance: f64,
    check: Check,
}

fn case<F>(id: String, params: Value, tolerance: f64, check: F) -> CaseDef
where
    F: Fn(&mut ChaCha8Rng) -> Result<f64> + Send + Sync + 'static,
{
    CaseDef {
        id,
        params,
        tolerance,
        check: Box::new(check),
    }
}

fn stream_id(id: &str) -> u64 {
    // FNV-1a
    id.bytes()
        .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

fn run_cases(seed: u64, defs: Vec<CaseDef>) -> Result<Vec<CaseResult>> {
    let mut out: Vec<CaseResult> = defs
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(stream_id(&c.id));
            let err = (c.check)(&mut rng)?;
            // keep reports valid JSON
            let err = if err.is_finite() { err } else { f64::MAX };
            Ok(CaseResult {
                passed: err <= c.tolerance,
                id: c.id,
                params: c.params,
                max_error: err,
                tolerance: c.tolerance,
            })
        })
        .collect::<Result<_>>()?;
    out.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(out)
}

/// Runs a suite, or all of them.
pub fn run_suite(selection: SuiteSelection, config: &SuiteConfig) -> Result<VerificationReport> {
    match selection {
        SuiteSelection::One(s) => run_one(s, config),
        SuiteSelection::All => {
            let start = Instant::now();
            let suites = Suite::ALL
                .iter()
                .map(|&s| run_one(s, config))
                .collect::<Result<Vec<_>>>()?;
            let mut orders = BTreeMap::new();
            for r in &suites {
                for (k, v) in &r.quadrature_orders {
                    orders.insert(format!("{}/{k}", r.suite), *v);
                }
            }
            Ok(VerificationReport {
                suite: "all".into(),
                passed: suites.iter().all(|s| s.passed),
                cases: Vec::new(),
                wall_time_secs: start.elapsed().as_secs_f64(),
                quadrature_orders: orders,
                suites,
            })
        }
    }
}

fn run_one(suite: Suite, config: &SuiteConfig) -> Result<VerificationReport> {
    let cfg = config.resolve(suite)?;
    let start = Instant::now();
    let (defs, orders) = match suite {
        Suite::Laguerre => laguerre_cases(&cfg),
        Suite::KernelBasis => kernel_basis_cases(&cfg),
        Suite::Reproducing => reproducing_cases(&cfg),
        Suite::SumProducts => sum_products_cases(&cfg),
        Suite::FourierLaguerre => fourier_laguerre_cases(&cfg),
        Suite::FourierKernel => fourier_kernel_cases(&cfg),
        Suite::Structure => structure_cases(&cfg),
    };
    let cases = run_cases(cfg.seed, defs)?;
    Ok(VerificationReport {
        suite: suite.name().into(),
        passed: cases.iter().all(|c| c.passed),
        cases,
        wall_time_secs: start.elapsed().as_secs_f64(),
        quadrature_orders: orders,
        suites: Vec::new(),
    })
}

type Cases = (Vec<CaseDef>, BTreeMap<String, usize>);

fn exact_flag(ok: bool) -> f64 {
    if ok {
        0.0
    } else {
        1.0
    }
}

fn laguerre_cases(cfg: &Resolved) -> Cases {
    let mut defs = Vec::new();
    let t = tolerance(Suite::Laguerre, "decomposition");
    for n in 1..=cfg.n_max {
        for p in 0..=cfg.p_max {
            defs.push(case(format!("decomposition/n{n}/p{p}"), json!({"n": n, "p": p}), t, move |_| {
                Ok(exact_flag(laguerre_decomposition_report(n, p).passed()))
            }));
        }
    }
    let params: [(i64, i64); 4] = [(0, 1), (1, 2), (1, 1), (3, 1)];
    let p_max = cfg.p_max;
    for &(an, ad) in &params {
        for &(bn, bd) in &params {
            let id = format!("sum/a{}/b{}", an as f64 / ad as f64, bn as f64 / bd as f64);
            defs.push(case(
                id,
                json!({"alpha": [an, ad], "beta": [bn, bd], "p_max": p_max}),
                tolerance(Suite::Laguerre, "sum"),
                move |_| {
                    let (a, b): (Rational, Rational) = (ratio(an, ad), ratio(bn, bd));
                    Ok(exact_flag((0..=p_max).all(|p| check_laguerre_of_sum(&a, &b, p))))
                },
            ));
        }
        defs.push(case(
            format!("telescoping/a{}", an as f64 / ad as f64),
            json!({"alpha": [an, ad], "p_max": p_max}),
            tolerance(Suite::Laguerre, "telescoping"),
            move |_| {
                let a = ratio(an, ad);
                Ok(exact_flag((0..=p_max).all(|p| check_telescoping(&a, p))))
            },
        ));
    }
    (defs, BTreeMap::new())
}

/// Point with `|z| < radius`, uniform in the ball by rejection.
pub fn ball_point(rng: &mut ChaCha8Rng, n: usize, radius: f64) -> ComplexPoint {
    loop {
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-radius..radius)).collect();
        let y: Vec<f64> = (0..n).map(|_| rng.random_range(-radius..radius)).collect();
        let p = ComplexPoint { x, y };
        if p.norm_sqr() < radius * radius {
            return p;
        }
    }
}

/// Point whose coordinates have modulus in `[lo, hi]` and uniform phase.
pub fn annulus_point(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> ComplexPoint {
    let z: Vec<Complex64> = (0..n)
        .map(|_| Complex64::from_polar(rng.random_range(lo..hi), rng.random_range(-PI..PI)))
        .collect();
    ComplexPoint::from_complex(&z)
}

fn real_vec(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(lo..hi)).collect()
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

const BASIS_PAIRS: usize = 20;

fn kernel_basis_cases(cfg: &Resolved) -> Cases {
    let mut defs = Vec::new();
    let (alpha, p_max) = (cfg.alpha, cfg.p_max);
    let t = tolerance(Suite::KernelBasis, "series");
    for n in 1..=cfg.n_max {
        for m in 1..=cfg.m_max {
            defs.push(case(
                format!("series/n{n}/m{m}"),
                json!({"n": n, "m": m, "alpha": alpha, "p_max": p_max, "pairs": BASIS_PAIRS}),
                t,
                move |rng| {
                    let spec = KernelSpec::new(n, m, alpha)?;
                    let basis = build_orthonormal_basis(alpha, n, m, p_max)?;
                    let mut worst = 0.0f64;
                    for _ in 0..BASIS_PAIRS {
                        let z = ball_point(rng, n, 0.5);
                        let w = ball_point(rng, n, 0.5);
                        worst = worst.max(rel(basis.kernel(&z, &w)?, kernel_f(&spec, &z, &w)?));
                    }
                    Ok(worst)
                },
            ));
        }
    }
    (defs, BTreeMap::new())
}

const REPRODUCING_POINTS: usize = 2;

/// Largest relative error of `⟨z^p z̄^q, K_z⟩ = z^p z̄^q` over the monomials
/// `|p| ≤ p_max`, `|q| ≤ m−1`, by a `2n`-dimensional Gauss–Hermite rule
/// centered at `z/2`.
pub fn reproducing_error(spec: &KernelSpec, p_max: u32, z: &ComplexPoint, order: usize) -> Result<f64> {
    let (n, alpha) = (spec.n(), spec.alpha());
    let ps = IndexTable::new(n, p_max as usize + 1)?;
    let qs = spec.table();
    let monos: Vec<(MultiIndex, MultiIndex)> = ps
        .iter()
        .flat_map(|p| qs.iter().map(move |q| (p.clone(), q.clone())))
        .collect();
    let eval = |w: &ComplexPoint, p: &MultiIndex, q: &MultiIndex| -> Complex64 {
        (0..n)
            .map(|r| {
                let c = w.coord(r);
                c.powu(p[r]) * c.conj().powu(q[r])
            })
            .product()
    };
    let center: Vec<f64> = z.x.iter().chain(&z.y).map(|v| v / 2.0).collect();
    let grid = QuadratureGrid::new(2 * n, order)?.recentered(&center, &vec![1.0 / alpha.sqrt(); 2 * n])?;
    let norm = (alpha / PI).powi(n as i32);
    let vals = grid.integrate_vec(monos.len(), |t, out| {
        let w = ComplexPoint {
            x: t[..n].to_vec(),
            y: t[n..].to_vec(),
        };
        let weight = kernel_f(spec, z, &w).map(|k| k.conj()).unwrap_or(Complex64::new(f64::NAN, 0.0))
            * (norm * (-alpha * w.norm_sqr()).exp());
        for (o, (p, q)) in out.iter_mut().zip(&monos) {
            *o = eval(&w, p, q) * weight;
        }
    });
    Ok(vals
        .iter()
        .zip(&monos)
        .map(|(v, (p, q))| rel(*v, eval(z, p, q)))
        .fold(0.0, f64::max))
}

fn reproducing_cases(cfg: &Resolved) -> Cases {
    let mut defs = Vec::new();
    let mut orders = BTreeMap::new();
    let alpha = cfg.alpha;
    for n in 1..=cfg.n_max {
        let order = cfg.order.unwrap_or_else(|| default_order(2 * n));
        orders.insert(format!("n{n}"), order);
        let (p_max, t) = if n >= 3 {
            (cfg.p_max.min(2), tolerance(Suite::Reproducing, "n3"))
        } else {
            (cfg.p_max, tolerance(Suite::Reproducing, "low-dim"))
        };
        for m in 1..=cfg.m_max {
            defs.push(case(
                format!("reproducing/n{n}/m{m}"),
                json!({"n": n, "m": m, "alpha": alpha, "p_max": p_max, "order": order, "points": REPRODUCING_POINTS}),
                t,
                move |rng| {
                    let spec = KernelSpec::new(n, m, alpha)?;
                    let mut worst = 0.0f64;
                    for _ in 0..REPRODUCING_POINTS {
                        let z = annulus_point(rng, n, 0.5, 1.0);
                        worst = worst.max(reproducing_error(&spec, p_max, &z, order)?);
                    }
                    Ok(worst)
                },
            ));
        }
    }
    (defs, orders)
}

const PRODUCT_POINTS: usize = 50;

fn sum_products_cases(cfg: &Resolved) -> Cases {
    let mut defs = Vec::new();
    let alpha = cfg.alpha;
    let t = tolerance(Suite::SumProducts, "products");
    for n in 1..=cfg.n_max {
        for m in 1..=cfg.m_max {
            defs.push(case(
                format!("products/n{n}/m{m}"),
                json!({"n": n, "m": m, "alpha": alpha, "points": PRODUCT_POINTS}),
                t,
                move |rng| {
                    let spec = KernelSpec::new(n, m, alpha)?;
                    let mut worst = 0.0f64;
                    for _ in 0..PRODUCT_POINTS {
                        let z = ball_point(rng, n, 1.0);
                        let w = ball_point(rng, n, 1.0);
                        let want = kernel_f(&spec, &z, &w)?;
                        for form in [ProductForm::Polynomial, ProductForm::Function] {
                            worst = worst.max(rel(kernel_f_products(&spec, &z, &w, form)?, want));
                        }
                        worst = worst.max(rel(kernel_h_products(n, m, &z, &w)?, kernel_h(n, m, &z, &w)?));
                    }
                    Ok(worst)
                },
            ));
        }
    }
    (defs, BTreeMap::new())
}

const FOURIER_A: [f64; 3] = [0.0, 0.5, 1.3];
const FOURIER_GRID: (f64, f64, usize) = (-6.0, 6.0, 25);

fn fourier_grid() -> Vec<f64> {
    let (lo, hi, k) = FOURIER_GRID;
    (0..k).map(|i| lo + (hi - lo) * i as f64 / (k - 1) as f64).collect()
}

fn fourier_laguerre_cases(cfg: &Resolved) -> Cases {
    let mut defs = Vec::new();
    let order = cfg.order.unwrap_or_else(|| oscillatory_order(FOURIER_GRID.1));
    let t = tolerance(Suite::FourierLaguerre, "transform");
    for p in 0..=cfg.p_max {
        for a in FOURIER_A {
            defs.push(case(
                format!("forward/p{p:02}/a{a}"),
                json!({"p": p, "a": a, "grid": [FOURIER_GRID.0, FOURIER_GRID.1, FOURIER_GRID.2], "order": order}),
                t,
                move |_| {
                    let mut err = 0.0f64;
                    let mut scale = 0.0f64;
                    for xi in fourier_grid() {
                        let want = fourier_laguerre_closed(p, a, xi);
                        err = err.max((fourier_laguerre_quadrature(p, a, xi, order)? - want).norm());
                        scale = scale.max(want.abs());
                    }
                    Ok(err / scale)
                },
            ));
            defs.push(case(
                format!("inverse/p{p:02}/a{a}"),
                json!({"p": p, "a": a, "grid": [FOURIER_GRID.0, FOURIER_GRID.1, FOURIER_GRID.2], "order": order}),
                t,
                move |_| {
                    let mut err = 0.0f64;
                    let mut scale = 0.0f64;
                    for u in fourier_grid() {
                        let want = crate::orthopoly::laguerre_fn(p, u * u + a * a);
                        err = err.max((fourier_laguerre_inverse_quadrature(p, a, u, order)? - want).norm());
                        scale = scale.max(want.abs());
                    }
                    Ok(err / scale)
                },
            ));
        }
    }
    let mut orders = BTreeMap::new();
    orders.insert("fourier".into(), order);
    (defs, orders)
}

const KERNEL_TRIPLES: usize = 20;
const KERNEL_XI: f64 = 3.0;
const KERNEL_YV: f64 = 1.5;

fn fourier_kernel_cases(cfg: &Resolved) -> Cases {
    let mut defs = Vec::new();
    let fixed = cfg.order;
    let t = tolerance(Suite::FourierKernel, "transform");
    for n in 1..=cfg.n_max {
        for m in 1..=cfg.m_max {
            defs.push(case(
                format!("transform/n{n}/m{m}"),
                json!({"n": n, "m": m, "triples": KERNEL_TRIPLES, "xi_max": KERNEL_XI, "yv_max": KERNEL_YV}),
                t,
                move |rng| {
                    let table = IndexTable::new(n, m)?;
                    let mut worst = 0.0f64;
                    for _ in 0..KERNEL_TRIPLES {
                        let xi = real_vec(rng, n, -KERNEL_XI, KERNEL_XI);
                        let y = real_vec(rng, n, -KERNEL_YV, KERNEL_YV);
                        let v = real_vec(rng, n, -KERNEL_YV, KERNEL_YV);
                        let freq = (0..n).map(|r| (xi[r] + y[r] + v[r]).abs()).fold(0.0, f64::max);
                        let order = fixed.unwrap_or_else(|| oscillatory_order(freq));
                        let q = l_quadrature(n, m, &xi, &y, &v, order)?;
                        let c = l_closed(&table, &xi, &y, &v)?;
                        worst = worst.max((q - c).norm());
                    }
                    Ok(worst)
                },
            ));
        }
    }
    let mut orders = BTreeMap::new();
    orders.insert(
        "u-max".into(),
        fixed.unwrap_or_else(|| oscillatory_order(KERNEL_XI + 2.0 * KERNEL_YV)),
    );
    (defs, orders)
}

fn witness(threshold: f64, observed: f64) -> f64 {
    threshold / observed
}

fn hermitian_min_eigenvalue(m: DMatrix<Complex64>) -> f64 {
    let h = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
    h.symmetric_eigen().eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
}

const STRUCT_SAMPLES: usize = 20;

fn structure_cases(cfg: &Resolved) -> Cases {
    let mut defs = Vec::new();
    let alpha = cfg.alpha;
    let s = Suite::Structure;
    for n in 1..=cfg.n_max {
        for m in 1..=cfg.m_max {
            let nm = json!({"n": n, "m": m, "alpha": alpha});
            defs.push(case(
                format!("hermitian/n{n}/m{m}"),
                nm.clone(),
                tolerance(s, "hermitian"),
                move |rng| {
                    let spec = KernelSpec::new(n, m, alpha)?;
                    let mut worst = 0.0f64;
                    for _ in 0..STRUCT_SAMPLES {
                        let z = ball_point(rng, n, 1.5);
                        let w = ball_point(rng, n, 1.5);
                        worst = worst.max(rel(kernel_f(&spec, &w, &z)?.conj(), kernel_f(&spec, &z, &w)?));
                        worst = worst.max(rel(kernel_h(n, m, &w, &z)?.conj(), kernel_h(n, m, &z, &w)?));
                    }
                    Ok(worst)
                },
            ));
            defs.push(case(format!("psd/n{n}/m{m}"), nm.clone(), tolerance(s, "psd"), move |rng| {
                let spec = KernelSpec::new(n, m, alpha)?;
                let pts: Vec<ComplexPoint> = (0..8).map(|_| ball_point(rng, n, 1.5)).collect();
                let mut g = DMatrix::<Complex64>::zeros(8, 8);
                for i in 0..8 {
                    for j in 0..8 {
                        // G_ij = ⟨K_{z_j}, K_{z_i}⟩ = K_{z_j}(z_i)
                        g[(i, j)] = kernel_f(&spec, &pts[j], &pts[i])?;
                    }
                }
                let trace: f64 = (0..8).map(|i| g[(i, i)].re).sum();
                Ok((-hermitian_min_eigenvalue(g)).max(0.0) / trace)
            }));
            defs.push(case(
                format!("h-covariance/n{n}/m{m}"),
                nm.clone(),
                tolerance(s, "h-covariance"),
                move |rng| {
                    let mut worst = 0.0f64;
                    for _ in 0..STRUCT_SAMPLES {
                        let p = ball_point(rng, n, 1.5);
                        let q = ball_point(rng, n, 1.5);
                        let a = real_vec(rng, n, -2.0, 2.0);
                        let k = kernel_h(n, m, &p, &q)?;
                        let shifted = kernel_h(n, m, &p.shifted(&a), &q.shifted(&a))?;
                        worst = worst.max((shifted - k).norm() / 2f64.powi(n as i32));
                    }
                    Ok(worst)
                },
            ));
            defs.push(case(
                format!("g-witness/n{n}/m{m}"),
                nm.clone(),
                1.0,
                move |rng| {
                    let mut dev = 0.0f64;
                    for _ in 0..STRUCT_SAMPLES {
                        let p = ball_point(rng, n, 1.5);
                        let q = ball_point(rng, n, 1.5);
                        let a = real_vec(rng, n, -2.0, 2.0);
                        let k = kernel_g(n, m, &p, &q)?;
                        let shifted = kernel_g(n, m, &p.shifted(&a), &q.shifted(&a))?;
                        dev = dev.max((shifted - k).norm());
                    }
                    Ok(witness(tolerance(s, "g-witness"), dev))
                },
            ));
            defs.push(case(
                format!("intertwining/n{n}/m{m}"),
                nm.clone(),
                tolerance(s, "intertwining"),
                move |rng| {
                    let spec = KernelSpec::new(n, m, alpha)?;
                    let z = ball_point(rng, n, 1.0);
                    let a = real_vec(rng, n, -1.0, 1.0);
                    let f = kernel_section_f(&spec, &z)?;
                    let samples: Vec<ComplexPoint> = (0..STRUCT_SAMPLES).map(|_| ball_point(rng, n, 2.0)).collect();
                    check_intertwining(&spec, &a, &f, &samples)
                },
            ));
            defs.push(case(
                format!("fiber-orthonormality/n{n}/m{m}"),
                nm.clone(),
                tolerance(s, "fiber-orthonormality"),
                move |rng| {
                    let table = IndexTable::new(n, m)?;
                    let d = table.d();
                    let mut worst = 0.0f64;
                    for _ in 0..3 {
                        let xi = real_vec(rng, n, -4.0, 4.0);
                        let center: Vec<f64> = xi.iter().map(|x| -x / 2.0).collect();
                        let grid = QuadratureGrid::new(n, 32)?.recentered(&center, &vec![1.0 / SQRT_2; n])?;
                        let mu = (2.0 * PI).powf(-(n as f64) / 2.0);
                        let gram = grid.integrate_vec(d * d, |v, out| {
                            let q = q_values(&table, &xi, v);
                            for i in 0..d {
                                for j in 0..d {
                                    out[i * d + j] = Complex64::new(q[i] * q[j] * mu, 0.0);
                                }
                            }
                        });
                        for i in 0..d {
                            for j in 0..d {
                                let want = if i == j { 1.0 } else { 0.0 };
                                worst = worst.max((gram[i * d + j] - want).norm());
                            }
                        }
                    }
                    Ok(worst)
                },
            ));
            defs.push(case(
                format!("gamma-identity/n{n}/m{m}"),
                nm.clone(),
                tolerance(s, "gamma-identity"),
                move |rng| {
                    let table = IndexTable::new(n, m)?;
                    let g = parse_symbol("const:1", n)?;
                    let mut worst = 0.0f64;
                    for _ in 0..3 {
                        let xi = real_vec(rng, n, -6.0, 6.0);
                        let id = SymbolMatrix::identity(&xi, table.d());
                        worst = worst.max(gamma_toeplitz(&table, &g, &xi)?.max_abs_diff(&id)?);
                        worst = worst.max(gamma_direct(&table, &g, &xi)?.max_abs_diff(&id)?);
                    }
                    Ok(worst)
                },
            ));
            defs.push(case(
                format!("gamma-positivity/n{n}/m{m}"),
                nm.clone(),
                tolerance(s, "gamma-positivity"),
                move |rng| {
                    let table = IndexTable::new(n, m)?;
                    let symbols = [
                        parse_symbol("gauss:0.3,1,1", n)?,
                        parse_symbol("box:-0.5,1", n)?,
                        parse_symbol("poly:0,0,1", n)?,
                    ];
                    let mut worst = 0.0f64;
                    for _ in 0..3 {
                        let xi = real_vec(rng, n, -6.0, 6.0);
                        for g in &symbols {
                            let lam = gamma_toeplitz(&table, g, &xi)?.min_hermitian_eigenvalue();
                            worst = worst.max(-lam);
                        }
                    }
                    Ok(worst.max(0.0))
                },
            ));
            defs.push(case(
                format!("sigma-two-route/n{n}/m{m}"),
                nm.clone(),
                tolerance(s, "sigma-two-route"),
                move |rng| {
                    let table = IndexTable::new(n, m)?;
                    let symbols = [
                        parse_symbol("poly:0,1", n)?,
                        parse_symbol("gauss:-0.2,1.5,1,0.5", n)?,
                        parse_symbol(&format!("sign:{n}"), n)?,
                        parse_symbol("box:-0.5,1", n)?,
                    ];
                    let mut worst = 0.0f64;
                    for _ in 0..2 {
                        let eta = real_vec(rng, n, -5.0, 5.0);
                        for g in &symbols {
                            let a = sigma_from_gamma(&table, g, &eta)?;
                            let b = sigma_direct(&table, g, &eta)?;
                            worst = worst.max(a.max_abs_diff(&b)?);
                        }
                    }
                    Ok(worst)
                },
            ));
            if n == 1 || m <= 2 {
                defs.push(case(
                    format!("r-two-route/n{n}/m{m}"),
                    nm.clone(),
                    tolerance(s, "r-two-route"),
                    move |rng| {
                        let spec = KernelSpec::new(n, m, alpha)?;
                        let table = spec.table();
                        let rounds = if n == 1 { 3 } else { 1 };
                        let mut worst = 0.0f64;
                        for _ in 0..rounds {
                            let y = real_vec(rng, n, -1.0, 1.0);
                            let xi = real_vec(rng, n, -3.0, 3.0);
                            let f = kernel_section_f(&spec, &ComplexPoint::imaginary(y.clone()))?;
                            let closed = r_f_kernel_image(&spec, &y, &xi)?;
                            let scale = closed.norm_sqr().sqrt();
                            let via_f = r_f_apply(&spec, &f, &xi, None)?;
                            let via_h = r_h_apply(&table, &flatten(&spec, &f)?, &xi, None)?;
                            worst = worst.max(via_f.max_abs_diff(&closed)? / scale);
                            worst = worst.max(via_h.max_abs_diff(&via_f)? / scale);
                        }
                        Ok(worst)
                    },
                ));
            }
            defs.push(case(
                format!("kernel-image-norm/n{n}/m{m}"),
                nm.clone(),
                tolerance(s, "kernel-image-norm"),
                move |rng| {
                    let spec = KernelSpec::new(n, m, alpha)?;
                    let y = real_vec(rng, n, -1.0, 1.0);
                    let iy = ComplexPoint::imaginary(y.clone());
                    let want = kernel_f(&spec, &iy, &iy)?.re;
                    let d = spec.d() as f64;
                    let y2: f64 = y.iter().map(|v| v * v).sum();
                    let closed = d * (alpha * y2).exp();
                    // ∫ |R_F K_{iy}(ξ)|² dμ̃(ξ), each q_{k,ξ}(√α y) Gaussian in ξ around −2√α y
                    let center: Vec<f64> = y.iter().map(|v| -2.0 * alpha.sqrt() * v).collect();
                    let grid = QuadratureGrid::new(n, 32)?.recentered(&center, &vec![SQRT_2; n])?;
                    let mu = (2.0 * PI).powf(-(n as f64) / 2.0);
                    let image = grid
                        .integrate_real(|xi| r_f_kernel_image(&spec, &y, xi).map(|f| f.norm_sqr()).unwrap_or(f64::NAN) * mu);
                    let order = default_order(2 * n);
                    let quad = norm_sqr_f(&spec, &kernel_section_f(&spec, &iy)?, order)?;
                    Ok([(image - want).abs(), (closed - want).abs(), (quad - want).abs()]
                        .into_iter()
                        .fold(0.0, f64::max)
                        / want)
                },
            ));
            if m >= 2 {
                defs.push(case(
                    format!("noncommutativity/n{n}/m{m}"),
                    nm.clone(),
                    1.0,
                    move |rng| {
                        let table = IndexTable::new(n, m)?;
                        let a = parse_symbol("poly:0,1", n)?;
                        let b = parse_symbol("gauss:0.4,1,1", n)?;
                        let xi = real_vec(rng, n, -1.0, 1.0);
                        let comm = gamma_toeplitz(&table, &a, &xi)?.commutator(&gamma_toeplitz(&table, &b, &xi)?)?;
                        Ok(witness(tolerance(s, "noncommutativity"), comm.op_norm()))
                    },
                ));
            }
        }
    }
    let mut orders = BTreeMap::new();
    orders.insert("fiber".into(), 32);
    for n in 1..=cfg.n_max {
        orders.insert(format!("norm/n{n}"), default_order(2 * n));
    }
    (defs, orders)
}
