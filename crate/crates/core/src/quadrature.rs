//! Gauss rules and tensor Gauss–Hermite grids with affine recentering.
//!
//! The Hermite grid is the oracle behind every Gaussian-decay integral in the
//! crate. An integrand that decays like `exp(-|(x-c)/s|²)` is integrated by
//! mapping nodes `t` to `c + s·t` and dividing the Gaussian out through the
//! scaled weights `w·exp(t²)`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, LazyLock, Mutex};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::orthopoly::hermite_fn;

pub const MAX_ORDER: usize = 128;

/// Environment variable overriding the default per-axis order.
pub const ORDER_ENV: &str = "POLYFOCK_QUAD_ORDER";

// Node-loop chunk size; chunk partial sums are added in index order so the
// result does not depend on the thread schedule.
const CHUNK: usize = 2048;

/// One-dimensional Gauss rule.
#[derive(Clone, Debug)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Hermite rule with weights for `exp(-t²)` and the same weights multiplied
/// back by `exp(t²)`.
#[derive(Debug)]
pub(crate) struct HermiteRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    scaled: Vec<f64>,
}

fn check_order(order: usize) -> Result<()> {
    if (1..=MAX_ORDER).contains(&order) {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            what: "quadrature order",
            value: order.to_string(),
            range: "1..=128",
        })
    }
}

// Eigen-solve of the symmetric Jacobi matrix; returns sorted nodes and the
// Golub–Welsch weights mu0·v0².
fn golub_welsch(diag: &[f64], off: &[f64], mu0: f64) -> (Vec<f64>, Vec<f64>) {
    let n = diag.len();
    let mut j = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        j[(i, i)] = diag[i];
        if i + 1 < n {
            j[(i, i + 1)] = off[i];
            j[(i + 1, i)] = off[i];
        }
    }
    let eig = SymmetricEigen::new(j);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

// ψ_n and ψ_{n-1} at x.
fn hermite_pair(n: usize, x: f64) -> (f64, f64) {
    let (mut prev, mut cur) = (0.0, PI.powf(-0.25) * (-x * x / 2.0).exp());
    for k in 0..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

fn build_hermite(order: usize) -> HermiteRule {
    let diag = vec![0.0; order];
    let off: Vec<f64> = (1..order).map(|k| (k as f64 / 2.0).sqrt()).collect();
    let (mut nodes, _) = golub_welsch(&diag, &off, PI.sqrt());
    let nf = order as f64;
    for x in nodes.iter_mut() {
        for _ in 0..4 {
            let (p, q) = hermite_pair(order, *x);
            let dp = (2.0 * nf).sqrt() * q - *x * p;
            if dp == 0.0 {
                break;
            }
            let step = p / dp;
            *x -= step;
            if step.abs() <= 1e-16 * x.abs().max(1.0) {
                break;
            }
        }
    }
    // Enforce exact symmetry.
    for i in 0..order / 2 {
        let x = 0.5 * (nodes[order - 1 - i] - nodes[i]);
        nodes[i] = -x;
        nodes[order - 1 - i] = x;
    }
    if order % 2 == 1 {
        nodes[order / 2] = 0.0;
    }
    let scaled: Vec<f64> = nodes
        .iter()
        .map(|&x| {
            let (_, q) = hermite_pair(order, x);
            1.0 / (nf * q * q)
        })
        .collect();
    let weights = nodes.iter().zip(&scaled).map(|(x, s)| s * (-x * x).exp()).collect();
    HermiteRule {
        nodes,
        weights,
        scaled,
    }
}

static HERMITE_CACHE: LazyLock<Mutex<HashMap<usize, Arc<HermiteRule>>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

pub(crate) fn hermite_rule(order: usize) -> Result<Arc<HermiteRule>> {
    check_order(order)?;
    let mut cache = HERMITE_CACHE.lock().unwrap_or_else(|e| e.into_inner());
    Ok(cache
        .entry(order)
        .or_insert_with(|| Arc::new(build_hermite(order)))
        .clone())
}

/// Gauss–Hermite nodes and weights for the weight `exp(-t²)` on ℝ.
pub fn gauss_hermite_1d(order: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let r = hermite_rule(order)?;
    Ok((r.nodes.clone(), r.weights.clone()))
}

/// Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(order: usize) -> Result<GaussRule> {
    check_order(order)?;
    let diag = vec![0.0; order];
    let off: Vec<f64> = (1..order)
        .map(|k| {
            let k = k as f64;
            k / (4.0 * k * k - 1.0).sqrt()
        })
        .collect();
    let (mut nodes, _) = golub_welsch(&diag, &off, 2.0);
    let legendre = |x: f64| {
        let (mut prev, mut cur) = (1.0, x);
        for k in 1..order {
            let kf = k as f64;
            let next = ((2.0 * kf + 1.0) * x * cur - kf * prev) / (kf + 1.0);
            prev = cur;
            cur = next;
        }
        // value and derivative of P_order
        let nf = order as f64;
        (cur, nf * (x * cur - prev) / (x * x - 1.0))
    };
    for x in nodes.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = legendre(*x);
            *x -= p / dp;
        }
    }
    for i in 0..order / 2 {
        let x = 0.5 * (nodes[order - 1 - i] - nodes[i]);
        nodes[i] = -x;
        nodes[order - 1 - i] = x;
    }
    if order % 2 == 1 {
        nodes[order / 2] = 0.0;
    }
    let weights = nodes
        .iter()
        .map(|&x| {
            let (_, dp) = legendre(x);
            2.0 / ((1.0 - x * x) * dp * dp)
        })
        .collect();
    Ok(GaussRule { nodes, weights })
}

/// Gauss–Laguerre rule for the weight `exp(-t)` on `[0, ∞)`.
pub fn gauss_laguerre(order: usize) -> Result<GaussRule> {
    check_order(order)?;
    let diag: Vec<f64> = (0..order).map(|k| 2.0 * k as f64 + 1.0).collect();
    let off: Vec<f64> = (1..order).map(|k| k as f64).collect();
    let (mut nodes, _) = golub_welsch(&diag, &off, 1.0);
    // L_order and L_{order-1} at x
    let pair = |x: f64| {
        let (mut prev, mut cur) = (0.0, 1.0);
        for k in 0..order {
            let kf = k as f64;
            let next = ((2.0 * kf + 1.0 - x) * cur - kf * prev) / (kf + 1.0);
            prev = cur;
            cur = next;
        }
        (cur, prev)
    };
    let nf = order as f64;
    for x in nodes.iter_mut() {
        for _ in 0..3 {
            let (p, q) = pair(*x);
            let dp = nf * (p - q) / *x;
            *x -= p / dp;
        }
    }
    let weights = nodes
        .iter()
        .map(|&x| {
            let (p, q) = pair(x);
            let dp = nf * (p - q) / x;
            1.0 / (x * dp * dp)
        })
        .collect();
    Ok(GaussRule { nodes, weights })
}

/// Composite Gauss–Legendre rule on `[lo, hi]`: panels end at every
/// breakpoint inside the interval and are at most `panel` wide.
pub fn piecewise_legendre(lo: f64, hi: f64, breaks: &[f64], panel: f64, order: usize) -> Result<GaussRule> {
    if !(lo < hi) || !(panel > 0.0) {
        return Err(Error::domain("piecewise rule needs lo < hi and a positive panel width"));
    }
    let base = gauss_legendre(order)?;
    let mut cuts: Vec<f64> = std::iter::once(lo)
        .chain(breaks.iter().copied().filter(|b| *b > lo && *b < hi))
        .chain(std::iter::once(hi))
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for w in cuts.windows(2) {
        let pieces = ((w[1] - w[0]) / panel).ceil().max(1.0) as usize;
        let h = (w[1] - w[0]) / pieces as f64;
        for p in 0..pieces {
            let a = w[0] + h * p as f64;
            for (x, wt) in base.nodes.iter().zip(&base.weights) {
                nodes.push(a + h * (x + 1.0) / 2.0);
                weights.push(wt * h / 2.0);
            }
        }
    }
    Ok(GaussRule { nodes, weights })
}

/// Default per-axis order for a `dim`-dimensional integral, unless the
/// `POLYFOCK_QUAD_ORDER` environment variable is set.
pub fn default_order(dim: usize) -> usize {
    if let Some(o) = std::env::var(ORDER_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|o| (1..=MAX_ORDER).contains(o))
    {
        return o;
    }
    match dim {
        0 | 1 => 48,
        2 => 32,
        3 => 24,
        4 => 20,
        5 => 14,
        _ => 12,
    }
}

/// Smallest recommended Hermite order for a Fourier integral whose
/// frequencies satisfy `|ξ| ≤ xi_max` and whose integrand decays like
/// `exp(-(u-c)²/2)`.
pub fn oscillatory_order(xi_max: f64) -> usize {
    ((8.0 * xi_max.abs() + 16.0).ceil() as usize).clamp(32, MAX_ORDER)
}

/// Tensor-product Gauss–Hermite grid, optionally recentered and rescaled.
///
/// Node `i` sits at `center + scale ⊙ t_i` where `t_i` runs over the
/// classical nodes; the grid integrates `exp(-|t|²)·P(t)` exactly for
/// polynomials of degree up to `2·order − 1` in each variable.
#[derive(Clone, Debug)]
pub struct QuadratureGrid {
    dim: usize,
    order: usize,
    center: Vec<f64>,
    scale: Vec<f64>,
    rule: Arc<HermiteRule>,
}

impl QuadratureGrid {
    pub fn new(dim: usize, order: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::domain("grid dimension must be positive"));
        }
        Ok(QuadratureGrid {
            dim,
            order,
            center: vec![0.0; dim],
            scale: vec![1.0; dim],
            rule: hermite_rule(order)?,
        })
    }

    /// Grid with the default order for `dim`.
    pub fn with_default_order(dim: usize) -> Result<Self> {
        Self::new(dim, default_order(dim))
    }

    /// Same rule, nodes mapped to `center + scale ⊙ t`.
    pub fn recentered(&self, center: &[f64], scale: &[f64]) -> Result<Self> {
        if center.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: center.len(),
            });
        }
        if scale.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: scale.len(),
            });
        }
        if scale.iter().any(|&s| !(s > 0.0 && s.is_finite())) {
            return Err(Error::domain("grid scales must be positive and finite"));
        }
        Ok(QuadratureGrid {
            center: center.to_vec(),
            scale: scale.to_vec(),
            ..self.clone()
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn scale(&self) -> &[f64] {
        &self.scale
    }

    pub fn node_count(&self) -> usize {
        self.order.pow(self.dim as u32)
    }

    /// Mapped nodes, in row-major order of the per-axis indices.
    pub fn nodes(&self) -> Vec<Vec<f64>> {
        let mut x = vec![0.0; self.dim];
        (0..self.node_count())
            .map(|i| {
                self.fill_node(i, &mut x);
                x.clone()
            })
            .collect()
    }

    /// Tensor weights for `exp(-|t|²)` on the standard nodes.
    pub fn weights(&self) -> Vec<f64> {
        (0..self.node_count())
            .map(|i| self.digits(i).map(|k| self.rule.weights[k]).product())
            .collect()
    }

    fn digits(&self, mut i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.dim).map(move |_| {
            let k = i % self.order;
            i /= self.order;
            k
        })
    }

    // Writes node `i` into `x` and returns the product of scaled weights
    // together with the Jacobian of the affine map.
    fn fill_node(&self, i: usize, x: &mut [f64]) -> f64 {
        let mut w = 1.0;
        for (axis, k) in self.digits(i).enumerate() {
            x[axis] = self.center[axis] + self.scale[axis] * self.rule.nodes[k];
            w *= self.rule.scaled[k] * self.scale[axis];
        }
        w
    }

    fn fill_node_weighted(&self, i: usize, x: &mut [f64]) -> f64 {
        let mut w = 1.0;
        for (axis, k) in self.digits(i).enumerate() {
            x[axis] = self.center[axis] + self.scale[axis] * self.rule.nodes[k];
            w *= self.rule.weights[k] * self.scale[axis];
        }
        w
    }

    /// `∫ f(x) dx` for an integrand carrying its own Gaussian decay around
    /// the grid center at the grid scale.
    pub fn integrate<F>(&self, f: F) -> Complex64
    where
        F: Fn(&[f64]) -> Complex64 + Sync,
    {
        self.sum_nodes(|i, x| self.fill_node(i, x), f)
    }

    /// `∫ exp(-|(x-c)/s|²) f(x) dx` with the Gaussian handled by the weights;
    /// exact when `f` is a polynomial of low enough degree.
    pub fn integrate_weighted<F>(&self, f: F) -> Complex64
    where
        F: Fn(&[f64]) -> Complex64 + Sync,
    {
        self.sum_nodes(|i, x| self.fill_node_weighted(i, x), f)
    }

    /// Real-valued form of [`integrate`](Self::integrate).
    pub fn integrate_real<F>(&self, f: F) -> f64
    where
        F: Fn(&[f64]) -> f64 + Sync,
    {
        self.integrate(|x| Complex64::new(f(x), 0.0)).re
    }

    fn sum_nodes<N, F>(&self, node: N, f: F) -> Complex64
    where
        N: Fn(usize, &mut [f64]) -> f64 + Sync,
        F: Fn(&[f64]) -> Complex64 + Sync,
    {
        let total = self.node_count();
        let partial: Vec<Complex64> = (0..total.div_ceil(CHUNK))
            .into_par_iter()
            .map(|c| {
                let mut x = vec![0.0; self.dim];
                let mut acc = Complex64::new(0.0, 0.0);
                for i in c * CHUNK..((c + 1) * CHUNK).min(total) {
                    let w = node(i, &mut x);
                    acc += f(&x) * w;
                }
                acc
            })
            .collect();
        partial.into_iter().sum()
    }

    /// Integrates `len` integrands at once; `f` fills the output slice with
    /// their values at a node.
    pub fn integrate_vec<F>(&self, len: usize, f: F) -> Vec<Complex64>
    where
        F: Fn(&[f64], &mut [Complex64]) + Sync,
    {
        let total = self.node_count();
        let partial: Vec<Vec<Complex64>> = (0..total.div_ceil(CHUNK))
            .into_par_iter()
            .map(|c| {
                let mut x = vec![0.0; self.dim];
                let mut vals = vec![Complex64::new(0.0, 0.0); len];
                let mut acc = vec![Complex64::new(0.0, 0.0); len];
                for i in c * CHUNK..((c + 1) * CHUNK).min(total) {
                    let w = self.fill_node(i, &mut x);
                    f(&x, &mut vals);
                    for (a, v) in acc.iter_mut().zip(&vals) {
                        *a += v * w;
                    }
                }
                acc
            })
            .collect();
        let mut out = vec![Complex64::new(0.0, 0.0); len];
        for p in partial {
            for (o, v) in out.iter_mut().zip(p) {
                *o += v;
            }
        }
        out
    }
}

/// A black-box integrand together with the location and width of its
/// Gaussian envelope `exp(-|(x-c)/s|²)`.
pub struct IntegrandSpec<F> {
    pub evaluator: F,
    pub gaussian_center: Vec<f64>,
    pub gaussian_halfwidth: Vec<f64>,
}

impl<F> IntegrandSpec<F>
where
    F: Fn(&[f64]) -> Complex64 + Sync,
{
    /// Envelope centered at the origin with unit halfwidth.
    pub fn new(dim: usize, evaluator: F) -> Self {
        IntegrandSpec {
            evaluator,
            gaussian_center: vec![0.0; dim],
            gaussian_halfwidth: vec![1.0; dim],
        }
    }

    pub fn centered_at(mut self, center: &[f64]) -> Self {
        self.gaussian_center = center.to_vec();
        self
    }

    pub fn with_halfwidth(mut self, s: f64) -> Self {
        self.gaussian_halfwidth.iter_mut().for_each(|h| *h = s);
        self
    }

    pub fn with_halfwidths(mut self, s: &[f64]) -> Self {
        self.gaussian_halfwidth = s.to_vec();
        self
    }

    pub fn dim(&self) -> usize {
        self.gaussian_center.len()
    }
}

/// `∫ spec.evaluator(x) dx` on the order of `grid`, recentered at the
/// integrand's envelope.
pub fn integrate_gaussian<F>(spec: &IntegrandSpec<F>, grid: &QuadratureGrid) -> Result<Complex64>
where
    F: Fn(&[f64]) -> Complex64 + Sync,
{
    if spec.dim() != grid.dim() {
        return Err(Error::DimensionMismatch {
            expected: grid.dim(),
            got: spec.dim(),
        });
    }
    let g = grid.recentered(&spec.gaussian_center, &spec.gaussian_halfwidth)?;
    Ok(g.integrate(&spec.evaluator))
}

/// `(2π)^{-1/2} ∫ f(u) e^{-iuξ} du` for `f` decaying like
/// `exp(-(u-center)²/2)`.
///
/// Accuracy depends on `|ξ|` relative to the order; see [`oscillatory_order`].
pub fn fourier_1d_gaussian_type<F>(evaluator: F, center: f64, xi: f64, order: usize) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64 + Sync,
{
    let grid = QuadratureGrid::new(1, order)?.recentered(&[center], &[std::f64::consts::SQRT_2])?;
    let v = grid.integrate(|u| evaluator(u[0]) * Complex64::from_polar(1.0, -u[0] * xi));
    Ok(v / (2.0 * PI).sqrt())
}

/// `(2π)^{-n/2} ∫_{ℝⁿ} f(u) e^{-i⟨u,ξ⟩} du` for `f` decaying like
/// `exp(-|u-center|²/2)`.
pub fn fourier_gaussian_type<F>(evaluator: F, center: &[f64], xi: &[f64], order: usize) -> Result<Complex64>
where
    F: Fn(&[f64]) -> Complex64 + Sync,
{
    let n = center.len();
    if xi.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: xi.len(),
        });
    }
    let grid = QuadratureGrid::new(n, order)?.recentered(center, &vec![std::f64::consts::SQRT_2; n])?;
    let v = grid.integrate(|u| {
        let phase: f64 = u.iter().zip(xi).map(|(a, b)| a * b).sum();
        evaluator(u) * Complex64::from_polar(1.0, -phase)
    });
    Ok(v / (2.0 * PI).powf(n as f64 / 2.0))
}

/// `∫ ψ_i ψ_j` on ℝ by Gauss–Hermite quadrature; used as a cross-check of
/// the Hermite-function recurrence.
pub fn hermite_overlap(i: u32, j: u32, order: usize) -> Result<f64> {
    let grid = QuadratureGrid::new(1, order)?;
    Ok(grid.integrate_real(|t| hermite_fn(i, t[0]) * hermite_fn(j, t[0])))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_point_rule() {
        let (x, w) = gauss_hermite_1d(1).unwrap();
        assert_eq!(x, vec![0.0]);
        assert!((w[0] - PI.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn order_range() {
        assert!(gauss_hermite_1d(0).is_err());
        assert!(gauss_hermite_1d(129).is_err());
        assert!(gauss_hermite_1d(128).is_ok());
        assert!(QuadratureGrid::new(0, 4).is_err());
    }

    #[test]
    fn fourth_moment() {
        let (x, w) = gauss_hermite_1d(5).unwrap();
        let m: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(4)).sum();
        assert!((m - 0.75 * PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn moments_exact_at_all_orders() {
        // ∫ e^{-t²} t^{2k} = Γ(k+1/2)
        for order in [2usize, 7, 20, 48, 64, 100, 128] {
            let (x, w) = gauss_hermite_1d(order).unwrap();
            assert!(w.iter().all(|&w| w > 0.0));
            for i in 0..order / 2 {
                assert_eq!(x[i], -x[order - 1 - i]);
            }
            let mut gamma = PI.sqrt();
            for k in 0..order.min(40) {
                let m: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(2 * k as i32)).sum();
                assert!((m - gamma).abs() <= 1e-12 * gamma, "order {order}, k {k}: {m} vs {gamma}");
                gamma *= k as f64 + 0.5;
            }
        }
    }

    #[test]
    fn legendre_and_laguerre_moments() {
        let r = gauss_legendre(12).unwrap();
        for k in 0..24 {
            let m: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x.powi(k)).sum();
            let want = if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 0.0 };
            assert!((m - want).abs() < 1e-14);
        }
        let r = gauss_laguerre(15).unwrap();
        let mut fact = 1.0;
        for k in 0..30 {
            if k > 0 {
                fact *= k as f64;
            }
            let m: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x.powi(k)).sum();
            assert!((m - fact).abs() <= 1e-12 * fact, "k {k}");
        }
    }

    #[test]
    fn piecewise_step() {
        let r = piecewise_legendre(-10.0, 10.0, &[0.3], 1.0, 16).unwrap();
        let v: f64 = r
            .nodes
            .iter()
            .zip(&r.weights)
            .map(|(&t, w)| w * (-t * t).exp() * if t > 0.3 { 1.0 } else { -1.0 })
            .sum();
        // ∫ sign(t − 0.3) e^{−t²} = −√π erf(0.3)
        let erf_03 = 0.328_626_759_459_127_4;
        assert!((v + PI.sqrt() * erf_03).abs() < 1e-14);
    }

    #[test]
    fn hermite_orthonormal() {
        assert!((hermite_overlap(6, 6, 20).unwrap() - 1.0).abs() < 1e-13);
        assert!((hermite_overlap(3, 3, 20).unwrap() - 1.0).abs() < 1e-13);
        assert!(hermite_overlap(3, 5, 20).unwrap().abs() < 1e-13);
    }

    #[test]
    fn separable_tensor() {
        let grid = QuadratureGrid::new(3, 10).unwrap().recentered(&[0.5, -1.0, 2.0], &[1.0, 0.7, 1.3]).unwrap();
        let g = |x: f64, c: f64, s: f64| (-((x - c) / s).powi(2)).exp() * (1.0 + x * x);
        let v = grid.integrate_real(|x| g(x[0], 0.5, 1.0) * g(x[1], -1.0, 0.7) * g(x[2], 2.0, 1.3));
        let one = |c: f64, s: f64| QuadratureGrid::new(1, 10).unwrap().recentered(&[c], &[s]).unwrap().integrate_real(|x| g(x[0], c, s));
        let want = one(0.5, 1.0) * one(-1.0, 0.7) * one(2.0, 1.3);
        assert!((v - want).abs() < 1e-12 * want);
    }

    #[test]
    fn gaussian_fourier() {
        for xi in [-3.0, 0.0, 1.1, 4.0] {
            let v = fourier_1d_gaussian_type(|u| Complex64::new((-u * u / 2.0).exp(), 0.0), 0.0, xi, 48).unwrap();
            assert!((v - Complex64::new((-xi * xi / 2.0f64).exp(), 0.0)).norm() < 1e-13);
        }
    }

    #[test]
    fn normalized_gaussian_mass() {
        let spec = IntegrandSpec::new(2, |x: &[f64]| {
            let r2 = x[0] * x[0] + x[1] * x[1];
            Complex64::new((-r2 / 2.0).exp() / (2.0 * PI), 0.0)
        })
        .with_halfwidth(std::f64::consts::SQRT_2);
        let v = integrate_gaussian(&spec, &QuadratureGrid::new(2, 8).unwrap()).unwrap();
        assert!((v.re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn vec_matches_scalar() {
        let grid = QuadratureGrid::new(2, 12).unwrap();
        let f0 = |x: &[f64]| Complex64::new((-x[0] * x[0] - x[1] * x[1]).exp() * x[0] * x[0], 0.0);
        let f1 = |x: &[f64]| Complex64::new(0.0, (-x[0] * x[0] - x[1] * x[1]).exp());
        let v = grid.integrate_vec(2, |x, out| {
            out[0] = f0(x);
            out[1] = f1(x);
        });
        assert_eq!(v[0], grid.integrate(f0));
        assert_eq!(v[1], grid.integrate(f1));
    }
}
