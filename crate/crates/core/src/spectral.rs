//! The horizontal Fourier layer: fiber functions `q_{k,ξ}`, the transformed
//! kernel `L_{ξ,y}`, the fiber projection `N`, and the decomposition
//! operators `R_H` and `R_F`.
//!
//! Inner products on ℝⁿ use `dμ̃ = (2π)^{−n/2} dλ`.

use std::f64::consts::{PI, SQRT_2};
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{kernel_h, ComplexPoint, KernelSpec};
use crate::multiindex::{IndexTable, MultiIndex};
use crate::orthopoly::{hermite_fn, hermite_fn_sequence, laguerre_fn};
use crate::quadrature::{default_order, fourier_1d_gaussian_type, fourier_gaussian_type, oscillatory_order, QuadratureGrid};
use crate::transforms::{Envelope, FieldFunction, Side};

/// Coefficients of a fiber element against `q_{φ(1),ξ}, …, q_{φ(d),ξ}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiberVector {
    pub xi: Vec<f64>,
    pub components: Vec<Complex64>,
}

impl FiberVector {
    pub fn zeros(xi: &[f64], d: usize) -> Self {
        FiberVector {
            xi: xi.to_vec(),
            components: vec![Complex64::new(0.0, 0.0); d],
        }
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.components.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Largest componentwise distance; vectors at different ξ are an error.
    pub fn max_abs_diff(&self, other: &FiberVector) -> Result<f64> {
        if self.xi != other.xi {
            return Err(Error::FrequencyMismatch);
        }
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: other.len(),
            });
        }
        Ok(self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

fn check_xi(n: usize, v: &[f64]) -> Result<()> {
    if v.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: v.len(),
        });
    }
    Ok(())
}

/// `q_{k,ξ}(v) = 2^{n/2} π^{n/4} Π_r ψ_{k_r}((ξ_r + 2v_r)/√2)`.
pub fn q_eval(k: &MultiIndex, xi: &[f64], v: &[f64]) -> f64 {
    let n = k.len();
    let prod: f64 = (0..n).map(|r| hermite_fn(k[r], (xi[r] + 2.0 * v[r]) / SQRT_2)).product();
    2f64.powf(n as f64 / 2.0) * PI.powf(n as f64 / 4.0) * prod
}

// Π_r ψ_{φ(j)_r}((ξ_r + 2v_r)/√2) for every j.
fn psi_products(table: &IndexTable, xi: &[f64], v: &[f64]) -> Vec<f64> {
    let top = table.m() as u32 - 1;
    let seqs: Vec<Vec<f64>> = (0..table.n())
        .map(|r| hermite_fn_sequence(top, (xi[r] + 2.0 * v[r]) / SQRT_2))
        .collect();
    table
        .iter()
        .map(|k| k.entries().iter().enumerate().map(|(r, &kr)| seqs[r][kr as usize]).product())
        .collect()
}

/// `[q_{φ(j),ξ}(v)]_{j=1..d}`.
pub fn q_values(table: &IndexTable, xi: &[f64], v: &[f64]) -> Vec<f64> {
    let n = table.n() as f64;
    let c = 2f64.powf(n / 2.0) * PI.powf(n / 4.0);
    psi_products(table, xi, v).into_iter().map(|p| c * p).collect()
}

/// `L_{ξ,y}(v) = Σ_{k∈J_{n,m}} q_{k,ξ}(y) q_{k,ξ}(v)`.
pub fn l_closed(table: &IndexTable, xi: &[f64], y: &[f64], v: &[f64]) -> Result<f64> {
    for a in [xi, y, v] {
        check_xi(table.n(), a)?;
    }
    let qy = q_values(table, xi, y);
    let qv = q_values(table, xi, v);
    Ok(qy.iter().zip(&qv).map(|(a, b)| a * b).sum())
}

/// `(2π)^{−n/2} ∫ K^{H}_{0,y}(u, v) e^{−i⟨u,ξ⟩} du` by quadrature.
pub fn l_quadrature(n: usize, m: usize, xi: &[f64], y: &[f64], v: &[f64], order: usize) -> Result<Complex64> {
    for a in [xi, y, v] {
        check_xi(n, a)?;
    }
    let p = ComplexPoint::imaginary(y.to_vec());
    let vv = v.to_vec();
    fourier_gaussian_type(
        |u: &[f64]| {
            let q = ComplexPoint {
                x: u.to_vec(),
                y: vv.clone(),
            };
            kernel_h(n, m, &p, &q).unwrap_or(Complex64::new(f64::NAN, 0.0))
        },
        &vec![0.0; n],
        xi,
        order,
    )
}

/// `√π ψ_p((ξ+a)/√2) ψ_p((ξ−a)/√2)`, the Fourier transform of `u ↦ ℓ_p(u²+a²)`.
pub fn fourier_laguerre_closed(p: u32, a: f64, xi: f64) -> f64 {
    PI.sqrt() * hermite_fn(p, (xi + a) / SQRT_2) * hermite_fn(p, (xi - a) / SQRT_2)
}

/// `(2π)^{−1/2} ∫ e^{−iuξ} ℓ_p(u²+a²) du` by quadrature.
pub fn fourier_laguerre_quadrature(p: u32, a: f64, xi: f64, order: usize) -> Result<Complex64> {
    fourier_1d_gaussian_type(|u| Complex64::new(laguerre_fn(p, u * u + a * a), 0.0), 0.0, xi, order)
}

/// `2^{−1/2} ∫ e^{iuξ} ψ_p((ξ+a)/√2) ψ_p((ξ−a)/√2) dξ` by quadrature; equals
/// `ℓ_p(u²+a²)`.
pub fn fourier_laguerre_inverse_quadrature(p: u32, a: f64, u: f64, order: usize) -> Result<Complex64> {
    let grid = QuadratureGrid::new(1, order)?.recentered(&[0.0], &[SQRT_2])?;
    let v = grid.integrate(|xi| {
        let x = xi[0];
        Complex64::from_polar(hermite_fn(p, (x + a) / SQRT_2) * hermite_fn(p, (x - a) / SQRT_2), u * x)
    });
    Ok(v / SQRT_2)
}

/// Envelope of a slice function `v ↦ g(v)` on ℝⁿ.
#[derive(Clone, Debug, PartialEq)]
pub struct SliceEnvelope {
    pub center: Vec<f64>,
    pub halfwidth: Vec<f64>,
}

// Product of Gaussians exp(−(v−a)²/s²)·exp(−(v−b)²/t²) per coordinate.
fn combine(a: &[f64], s: &[f64], b: &[f64], t: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut c = Vec::with_capacity(a.len());
    let mut h = Vec::with_capacity(a.len());
    for r in 0..a.len() {
        let (ps, pt) = (1.0 / (s[r] * s[r]), 1.0 / (t[r] * t[r]));
        c.push((a[r] * ps + b[r] * pt) / (ps + pt));
        h.push(1.0 / (ps + pt).sqrt());
    }
    (c, h)
}

/// `(Ng)(ξ)_j = (2π)^{−n/2} ∫ g(v) q_{φ(j),ξ}(v) dv`.
///
/// Without an envelope the slice is assumed to decay like the fiber functions
/// themselves.
pub fn fiber_project<G>(
    table: &IndexTable,
    xi: &[f64],
    g_slice: G,
    envelope: Option<&SliceEnvelope>,
    order: usize,
) -> Result<FiberVector>
where
    G: Fn(&[f64]) -> Complex64 + Sync,
{
    let n = table.n();
    check_xi(n, xi)?;
    let qc: Vec<f64> = xi.iter().map(|x| -x / 2.0).collect();
    let qs = vec![1.0; n];
    let (gc, gs) = match envelope {
        Some(e) => (e.center.clone(), e.halfwidth.clone()),
        None => (qc.clone(), qs.clone()),
    };
    check_xi(n, &gc)?;
    let (c, h) = combine(&gc, &gs, &qc, &qs);
    let grid = QuadratureGrid::new(n, order)?.recentered(&c, &h)?;
    let d = table.d();
    let vals = grid.integrate_vec(d, |v, out| {
        let g = g_slice(v);
        for (o, q) in out.iter_mut().zip(q_values(table, xi, v)) {
            *o = g * q;
        }
    });
    let norm = (2.0 * PI).powf(-(n as f64) / 2.0);
    Ok(FiberVector {
        xi: xi.to_vec(),
        components: vals.into_iter().map(|v| v * norm).collect(),
    })
}

/// `(N*c)(v) = Σ_j c_j q_{φ(j),ξ}(v)`.
pub fn reconstruct(table: &IndexTable, fiber: &FiberVector, v: &[f64]) -> Result<Complex64> {
    check_xi(table.n(), v)?;
    if fiber.len() != table.d() {
        return Err(Error::DimensionMismatch {
            expected: table.d(),
            got: fiber.len(),
        });
    }
    Ok(q_values(table, &fiber.xi, v)
        .into_iter()
        .zip(&fiber.components)
        .map(|(q, c)| c * q)
        .sum())
}

/// Closed form of `R_F K_{iy}` at ξ:
/// `2^{−n/2} e^{α|y|²/2} [q_{φ(j),ξ}(√α y)]_j`.
pub fn r_f_kernel_image(spec: &KernelSpec, y: &[f64], xi: &[f64]) -> Result<FiberVector> {
    let n = spec.n();
    check_xi(n, y)?;
    check_xi(n, xi)?;
    let a = spec.alpha();
    let y2: f64 = y.iter().map(|v| v * v).sum();
    let c = 2f64.powf(-(n as f64) / 2.0) * (a * y2 / 2.0).exp();
    let sy: Vec<f64> = y.iter().map(|v| v * a.sqrt()).collect();
    Ok(FiberVector {
        xi: xi.to_vec(),
        components: q_values(&spec.table(), xi, &sy)
            .into_iter()
            .map(|q| Complex64::new(c * q, 0.0))
            .collect(),
    })
}

/// Per-block Hermite orders for the 2n-dimensional fiber integrals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberOrders {
    /// Order in the oscillatory `u` block.
    pub u: usize,
    /// Order in the `v` block.
    pub v: usize,
}

impl FiberOrders {
    pub fn uniform(order: usize) -> Self {
        FiberOrders { u: order, v: order }
    }

    /// Orders for an input with the given H-side envelope at frequency ξ.
    ///
    /// The `u` integrand oscillates at roughly `|ξ| + |v + y|`, which for
    /// kernel-derived inputs stays below `|ξ| + 2|c_v| + 3`.
    pub fn for_input(n: usize, xi: &[f64], envelope: &Envelope) -> Self {
        let xi_max = xi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let (cv, _) = envelope.tail(n);
        let (_, su) = envelope.head(n);
        let cv_max = cv.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let su_max = su.iter().fold(0.0f64, |m, v| m.max(*v));
        let freq = (xi_max + 2.0 * cv_max + 3.0) * su_max / SQRT_2;
        let u = oscillatory_order(freq);
        let v = default_order(n).max(match n {
            1 => 48,
            _ => 24,
        });
        // Keep 2n-dimensional grids affordable.
        let u = if n > 1 { u.min(48) } else { u };
        FiberOrders { u, v }
    }
}

// ∫∫ h(u, v) e^{−i⟨u,ξ⟩} Π_r ψ_{φ(j)_r}((ξ_r+2v_r)/√2) du dv for every j,
// where h has the given envelope on ℝ²ⁿ.
fn fiber_integral<H>(table: &IndexTable, xi: &[f64], env: &Envelope, orders: FiberOrders, h: H) -> Result<Vec<Complex64>>
where
    H: Fn(&[f64], &[f64]) -> Complex64 + Sync,
{
    let n = table.n();
    if env.center.len() != 2 * n || env.halfwidth.len() != 2 * n {
        return Err(Error::DimensionMismatch {
            expected: 2 * n,
            got: env.center.len(),
        });
    }
    let (cu, su) = env.head(n);
    let (cv, sv) = env.tail(n);
    let qc: Vec<f64> = xi.iter().map(|x| -x / 2.0).collect();
    let (c, s) = combine(cv, sv, &qc, &vec![1.0; n]);
    let outer = QuadratureGrid::new(n, orders.v)?.recentered(&c, &s)?;
    let inner = QuadratureGrid::new(n, orders.u)?.recentered(cu, su)?;
    Ok(outer.integrate_vec(table.d(), |v, out| {
        let fu = inner.integrate(|u| {
            let phase: f64 = u.iter().zip(xi).map(|(a, b)| a * b).sum();
            h(u, v) * Complex64::from_polar(1.0, -phase)
        });
        for (o, p) in out.iter_mut().zip(psi_products(table, xi, v)) {
            *o = fu * p;
        }
    }))
}

fn require_envelope(f: &FieldFunction) -> Result<&Envelope> {
    f.envelope()
        .ok_or_else(|| Error::domain("the fiber integrals need an envelope hint on the input"))
}

/// `(R_H g)(ξ)_j = (2^{n/2} π^{3n/4})^{−1} ∫ g(u,v) e^{−i⟨u,ξ⟩} Π_r ψ_{φ(j)_r}((ξ_r+2v_r)/√2) du dv`.
pub fn r_h_apply(table: &IndexTable, g: &FieldFunction, xi: &[f64], orders: Option<FiberOrders>) -> Result<FiberVector> {
    let n = table.n();
    check_xi(n, xi)?;
    if g.side() != Side::H || g.n() != n {
        return Err(Error::domain("R_H expects an H-side function of matching dimension"));
    }
    let env = require_envelope(g)?;
    let orders = orders.unwrap_or_else(|| FiberOrders::for_input(n, xi, env));
    let vals = fiber_integral(table, xi, env, orders, |u, v| {
        g.eval(&ComplexPoint {
            x: u.to_vec(),
            y: v.to_vec(),
        })
    })?;
    let c = 1.0 / (2f64.powf(n as f64 / 2.0) * PI.powf(0.75 * n as f64));
    Ok(FiberVector {
        xi: xi.to_vec(),
        components: vals.into_iter().map(|v| v * c).collect(),
    })
}

/// `(R_F f)(ξ)_j = π^{−3n/4} ∫ f((u+iv)/√α) e^{−|u|²/2−|v|²/2−i⟨u,v+ξ⟩} Π_r ψ_{φ(j)_r}((ξ_r+2v_r)/√2) du dv`.
pub fn r_f_apply(spec: &KernelSpec, f: &FieldFunction, xi: &[f64], orders: Option<FiberOrders>) -> Result<FiberVector> {
    let n = spec.n();
    check_xi(n, xi)?;
    if f.side() != Side::F || f.n() != n {
        return Err(Error::domain("R_F expects an F-side function of matching dimension"));
    }
    let sa = spec.alpha().sqrt();
    let env_f = require_envelope(f)?;
    let env = Envelope::new(
        env_f.center.iter().map(|c| c * sa).collect(),
        env_f.halfwidth.iter().map(|h| h * sa).collect(),
    );
    let orders = orders.unwrap_or_else(|| FiberOrders::for_input(n, xi, &env));
    let table = spec.table();
    let vals = fiber_integral(&table, xi, &env, orders, |u, v| {
        let w = ComplexPoint {
            x: u.iter().map(|t| t / sa).collect(),
            y: v.iter().map(|t| t / sa).collect(),
        };
        let r2: f64 = u.iter().chain(v).map(|t| t * t).sum();
        let uv: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
        f.eval(&w) * Complex64::from_polar((-r2 / 2.0).exp(), -uv)
    })?;
    let c = PI.powf(-0.75 * n as f64);
    Ok(FiberVector {
        xi: xi.to_vec(),
        components: vals.into_iter().map(|v| v * c).collect(),
    })
}

/// A uniform frequency grid `lo:hi:count` per axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct XiGrid {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl Default for XiGrid {
    fn default() -> Self {
        XiGrid {
            lo: -8.0,
            hi: 8.0,
            count: 64,
        }
    }
}

impl XiGrid {
    pub fn axis(&self) -> Vec<f64> {
        match self.count {
            0 => vec![],
            1 => vec![self.lo],
            c => (0..c)
                .map(|i| self.lo + (self.hi - self.lo) * i as f64 / (c - 1) as f64)
                .collect(),
        }
    }

    /// Tensor grid in ℝⁿ, last coordinate varying fastest.
    pub fn points(&self, n: usize) -> Vec<Vec<f64>> {
        let axis = self.axis();
        let mut out: Vec<Vec<f64>> = vec![vec![]];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|p| {
                    axis.iter().map(move |&x| {
                        let mut q = p.clone();
                        q.push(x);
                        q
                    })
                })
                .collect();
        }
        out
    }
}

impl std::fmt::Display for XiGrid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}:{}", self.lo, self.hi, self.count)
    }
}

impl FromStr for XiGrid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::parse("xi grid", format!("expected lo:hi:count, got `{s}`")));
        }
        let lo: f64 = parts[0].trim().parse().map_err(|e| Error::parse("xi grid", format!("{e}")))?;
        let hi: f64 = parts[1].trim().parse().map_err(|e| Error::parse("xi grid", format!("{e}")))?;
        let count: usize = parts[2].trim().parse().map_err(|e| Error::parse("xi grid", format!("{e}")))?;
        if !(lo.is_finite() && hi.is_finite()) || hi < lo || count == 0 {
            return Err(Error::parse("xi grid", format!("empty or invalid range `{s}`")));
        }
        Ok(XiGrid { lo, hi, count })
    }
}

/// Evaluates `f` at every frequency, in parallel, keeping the input order.
pub fn sweep<F>(xis: &[Vec<f64>], f: F) -> Result<Vec<FiberVector>>
where
    F: Fn(&[f64]) -> Result<FiberVector> + Sync,
{
    xis.par_iter().map(|xi| f(xi)).collect()
}

/// `∫ Σ_j |c_j(ξ)|² dμ̃(ξ)` for a fiber field decaying like
/// `exp(−|(ξ−center)/halfwidth|²)` in its squared modulus.
pub fn field_norm_sqr<F>(n: usize, field: F, center: &[f64], halfwidth: &[f64], order: usize) -> Result<f64>
where
    F: Fn(&[f64]) -> Vec<Complex64> + Sync,
{
    let grid = QuadratureGrid::new(n, order)?.recentered(center, halfwidth)?;
    let v = grid.integrate_real(|xi| field(xi).iter().map(|c| c.norm_sqr()).sum());
    Ok(v * (2.0 * PI).powf(-(n as f64) / 2.0))
}
