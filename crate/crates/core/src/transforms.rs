//! The flattening isometry between `F_{α,m}` and `H_m`, horizontal Weyl
//! shifts and translations, acting on black-box evaluators.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernels::{inner, kernel_f, kernel_h, ComplexPoint, KernelSpec};
use crate::quadrature::QuadratureGrid;

type Evaluator = Arc<dyn Fn(&ComplexPoint) -> Complex64 + Send + Sync>;

/// Which space a [`FieldFunction`] belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// A function of `z ∈ ℂⁿ`, square integrable against `(α/π)ⁿ e^{−α|z|²}`.
    F,
    /// A function of `(x, y) ∈ ℝ²ⁿ`, square integrable against `(2π)^{−n} dx dy`.
    H,
}

/// Where the square-integrable part of a function lives: its modulus is
/// roughly bounded by a multiple of `Π_i exp(−(p_i − c_i)²/s_i²)` (for F-side
/// functions, after multiplying by `e^{−α|z|²/2}`). Points are packed as
/// `(x_1..x_n, y_1..y_n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Envelope {
    pub center: Vec<f64>,
    pub halfwidth: Vec<f64>,
}

impl Envelope {
    /// Isotropic envelope around `p`.
    pub fn at(p: &ComplexPoint, halfwidth: f64) -> Self {
        let center: Vec<f64> = p.x.iter().chain(&p.y).copied().collect();
        let halfwidth = vec![halfwidth; center.len()];
        Envelope { center, halfwidth }
    }

    pub fn new(center: Vec<f64>, halfwidth: Vec<f64>) -> Self {
        Envelope { center, halfwidth }
    }

    fn map(&self, f: impl Fn(usize, f64) -> f64, s: f64) -> Self {
        Envelope {
            center: self.center.iter().enumerate().map(|(i, &c)| f(i, c)).collect(),
            halfwidth: self.halfwidth.iter().map(|h| h * s).collect(),
        }
    }

    /// A single envelope covering both.
    pub fn merge(&self, other: &Envelope) -> Envelope {
        let mut center = Vec::with_capacity(self.center.len());
        let mut halfwidth = Vec::with_capacity(self.center.len());
        for i in 0..self.center.len() {
            let (a, b) = (self.center[i], other.center[i]);
            center.push((a + b) / 2.0);
            halfwidth.push(self.halfwidth[i].max(other.halfwidth[i]) + (a - b).abs() / 2.0);
        }
        Envelope { center, halfwidth }
    }

    /// The first `n` coordinates (the `x` or `u` block).
    pub fn head(&self, n: usize) -> (&[f64], &[f64]) {
        (&self.center[..n], &self.halfwidth[..n])
    }

    /// The last `n` coordinates (the `y` or `v` block).
    pub fn tail(&self, n: usize) -> (&[f64], &[f64]) {
        (&self.center[n..], &self.halfwidth[n..])
    }
}

/// A black-box element of `F_{α,m}` or `H_m`.
#[derive(Clone)]
pub struct FieldFunction {
    side: Side,
    n: usize,
    eval: Evaluator,
    envelope: Option<Envelope>,
}

impl fmt::Debug for FieldFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldFunction")
            .field("side", &self.side)
            .field("n", &self.n)
            .field("envelope", &self.envelope)
            .finish_non_exhaustive()
    }
}

impl FieldFunction {
    pub fn new<E>(side: Side, n: usize, eval: E) -> Self
    where
        E: Fn(&ComplexPoint) -> Complex64 + Send + Sync + 'static,
    {
        FieldFunction {
            side,
            n,
            eval: Arc::new(eval),
            envelope: None,
        }
    }

    pub fn with_envelope(mut self, envelope: Envelope) -> Self {
        self.envelope = Some(envelope);
        self
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn envelope(&self) -> Option<&Envelope> {
        self.envelope.as_ref()
    }

    pub fn eval(&self, p: &ComplexPoint) -> Complex64 {
        (self.eval)(p)
    }

    /// `Σ c_i f_i`; all terms must share a side and dimension.
    pub fn combination(terms: Vec<(Complex64, FieldFunction)>) -> Result<FieldFunction> {
        let first = terms
            .first()
            .ok_or_else(|| Error::domain("empty linear combination"))?;
        let (side, n) = (first.1.side, first.1.n);
        if let Some(bad) = terms.iter().find(|t| t.1.side != side || t.1.n != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: bad.1.n,
            });
        }
        let envelope = terms
            .iter()
            .map(|t| t.1.envelope.clone())
            .collect::<Option<Vec<_>>>()
            .and_then(|es| es.into_iter().reduce(|a, b| a.merge(&b)));
        let out = FieldFunction::new(side, n, move |p| terms.iter().map(|(c, f)| c * f.eval(p)).sum());
        Ok(match envelope {
            Some(e) => out.with_envelope(e),
            None => out,
        })
    }

    fn expect(&self, side: Side, n: usize) -> Result<()> {
        if self.side != side {
            return Err(Error::domain(format!("expected an {side:?}-side function, got {:?}", self.side)));
        }
        if self.n != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: self.n,
            });
        }
        Ok(())
    }
}

/// The kernel section `w ↦ K^{F}_z(w)`.
pub fn kernel_section_f(spec: &KernelSpec, z: &ComplexPoint) -> Result<FieldFunction> {
    kernel_f(spec, z, z)?;
    let (spec, zc) = (*spec, z.clone());
    Ok(
        FieldFunction::new(Side::F, spec.n(), move |w| kernel_f(&spec, &zc, w).unwrap_or(Complex64::new(f64::NAN, 0.0)))
            .with_envelope(Envelope::at(z, (2.0 / spec.alpha()).sqrt())),
    )
}

/// The kernel section `(u, v) ↦ K^{H}_{x,y}(u, v)`.
pub fn kernel_section_h(n: usize, m: usize, p: &ComplexPoint) -> Result<FieldFunction> {
    kernel_h(n, m, p, p)?;
    let pc = p.clone();
    Ok(
        FieldFunction::new(Side::H, n, move |q| kernel_h(n, m, &pc, q).unwrap_or(Complex64::new(f64::NAN, 0.0)))
            .with_envelope(Envelope::at(p, SQRT_2)),
    )
}

/// `(x, y) ↦ 2^{n/2} e^{−|x|²/2−|y|²/2−i⟨x,y⟩} f((x+iy)/√α)`.
pub fn flatten(spec: &KernelSpec, f: &FieldFunction) -> Result<FieldFunction> {
    f.expect(Side::F, spec.n())?;
    let n = spec.n();
    let sa = spec.alpha().sqrt();
    let inner = f.clone();
    let pref = 2f64.powf(n as f64 / 2.0);
    let out = FieldFunction::new(Side::H, n, move |p| {
        let xy: f64 = p.x.iter().zip(&p.y).map(|(x, y)| x * y).sum();
        Complex64::from_polar(pref * (-p.norm_sqr() / 2.0).exp(), -xy) * inner.eval(&p.scaled(1.0 / sa))
    });
    Ok(match f.envelope() {
        Some(e) => out.with_envelope(e.map(|_, c| c * sa, sa)),
        None => out,
    })
}

/// `(u + iv) ↦ 2^{−n/2} e^{α(|u|²+|v|²)/2 + iα⟨u,v⟩} g(√α u, √α v)`.
pub fn unflatten(spec: &KernelSpec, g: &FieldFunction) -> Result<FieldFunction> {
    g.expect(Side::H, spec.n())?;
    let n = spec.n();
    let a = spec.alpha();
    let sa = a.sqrt();
    let inner = g.clone();
    let pref = 2f64.powf(-(n as f64) / 2.0);
    let out = FieldFunction::new(Side::F, n, move |w| {
        let uv: f64 = w.x.iter().zip(&w.y).map(|(u, v)| u * v).sum();
        Complex64::from_polar(pref * (a * w.norm_sqr() / 2.0).exp(), a * uv) * inner.eval(&w.scaled(sa))
    });
    Ok(match g.envelope() {
        Some(e) => out.with_envelope(e.map(|_, c| c / sa, 1.0 / sa)),
        None => out,
    })
}

/// Closed form of the flattened kernel section:
/// `2^{−n/2} e^{α(|x₀|²+|y₀|²)/2 − iα⟨x₀,y₀⟩} K^{H}_{√α x₀, √α y₀}`.
pub fn flattened_kernel_closed(spec: &KernelSpec, z: &ComplexPoint) -> Result<FieldFunction> {
    let a = spec.alpha();
    let x0y0: f64 = z.x.iter().zip(&z.y).map(|(x, y)| x * y).sum();
    let c = Complex64::from_polar(
        2f64.powf(-(spec.n() as f64) / 2.0) * (a * z.norm_sqr() / 2.0).exp(),
        -a * x0y0,
    );
    let section = kernel_section_h(spec.n(), spec.m(), &z.scaled(a.sqrt()))?;
    FieldFunction::combination(vec![(c, section)])
}

fn check_shift(n: usize, a: &[f64]) -> Result<()> {
    if a.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: a.len(),
        });
    }
    Ok(())
}

/// Horizontal Weyl shift `z ↦ f(z − a) e^{α⟨z,a⟩ − α|a|²/2}`, `a ∈ ℝⁿ`.
pub fn weyl_f(spec: &KernelSpec, a: &[f64], f: &FieldFunction) -> Result<FieldFunction> {
    f.expect(Side::F, spec.n())?;
    check_shift(spec.n(), a)?;
    let alpha = spec.alpha();
    let shift = a.to_vec();
    let neg: Vec<f64> = a.iter().map(|v| -v).collect();
    let ap = ComplexPoint::real(shift.clone());
    let a2: f64 = a.iter().map(|v| v * v).sum();
    let inner_f = f.clone();
    let out = FieldFunction::new(Side::F, spec.n(), move |z| {
        (inner(z, &ap) * alpha - alpha * a2 / 2.0).exp() * inner_f.eval(&z.shifted(&neg))
    });
    let n = spec.n();
    Ok(match f.envelope() {
        Some(e) => out.with_envelope(e.map(|i, c| if i < n { c + shift[i] } else { c }, 1.0)),
        None => out,
    })
}

/// Horizontal translation `(x, y) ↦ g(x − a, y)`.
pub fn translate_h(a: &[f64], g: &FieldFunction) -> Result<FieldFunction> {
    g.expect(Side::H, g.n())?;
    check_shift(g.n(), a)?;
    let n = g.n();
    let shift = a.to_vec();
    let neg: Vec<f64> = a.iter().map(|v| -v).collect();
    let inner_g = g.clone();
    let out = FieldFunction::new(Side::H, n, move |p| inner_g.eval(&p.shifted(&neg)));
    Ok(match g.envelope() {
        Some(e) => out.with_envelope(e.map(|i, c| if i < n { c + shift[i] } else { c }, 1.0)),
        None => out,
    })
}

/// Largest `|U ρ_F(a) f − ρ_H(√α a) U f|` over the sample points of ℝ²ⁿ.
pub fn check_intertwining(
    spec: &KernelSpec,
    a: &[f64],
    f: &FieldFunction,
    samples: &[ComplexPoint],
) -> Result<f64> {
    let lhs = flatten(spec, &weyl_f(spec, a, f)?)?;
    let sa: Vec<f64> = a.iter().map(|v| v * spec.alpha().sqrt()).collect();
    let rhs = translate_h(&sa, &flatten(spec, f)?)?;
    let mut worst = 0.0f64;
    for p in samples {
        if p.len() != spec.n() {
            return Err(Error::DimensionMismatch {
                expected: spec.n(),
                got: p.len(),
            });
        }
        worst = worst.max((lhs.eval(p) - rhs.eval(p)).norm());
    }
    Ok(worst)
}

/// The pair of maps between `F_{α,m}` and the polyanalytic Gaussian-kernel
/// space, multiplication by `exp(∓σ² Σ z_k²)`; requires `α = 2σ²`.
#[derive(Clone, Copy, Debug)]
pub struct SteinwartMap {
    spec: KernelSpec,
    sigma: f64,
}

impl SteinwartMap {
    pub fn new(spec: &KernelSpec, sigma: f64) -> Result<Self> {
        let expected = 2.0 * sigma * sigma;
        if !(sigma > 0.0) || (spec.alpha() - expected).abs() > 1e-12 * expected {
            return Err(Error::AlphaSigmaMismatch {
                alpha: spec.alpha(),
                expected,
            });
        }
        Ok(SteinwartMap { spec: *spec, sigma })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    fn weight(sigma: f64, z: &ComplexPoint, sign: f64) -> Complex64 {
        let s: Complex64 = (0..z.len()).map(|k| z.coord(k) * z.coord(k)).sum();
        (s * (sign * sigma * sigma)).exp()
    }

    /// `f ↦ exp(−σ² Σ z_k²) f`.
    pub fn to_s(&self, f: &FieldFunction) -> Result<FieldFunction> {
        f.expect(Side::F, self.spec.n())?;
        let (sigma, g) = (self.sigma, f.clone());
        Ok(FieldFunction::new(Side::F, f.n(), move |z| Self::weight(sigma, z, -1.0) * g.eval(z)))
    }

    /// `g ↦ exp(σ² Σ z_k²) g`.
    pub fn to_f(&self, g: &FieldFunction) -> Result<FieldFunction> {
        g.expect(Side::F, self.spec.n())?;
        let (sigma, h) = (self.sigma, g.clone());
        Ok(FieldFunction::new(Side::F, g.n(), move |z| Self::weight(sigma, z, 1.0) * h.eval(z)))
    }

    /// Kernel of the target space obtained by pushing `K^{F}` forward:
    /// `J(w) K^{F}_z(w) conj(J(z))` with `J(z) = exp(−σ² Σ z_k²)`.
    pub fn pushforward_kernel(&self, z: &ComplexPoint, w: &ComplexPoint) -> Result<Complex64> {
        let k = kernel_f(&self.spec, z, w)?;
        Ok(Self::weight(self.sigma, w, -1.0) * k * Self::weight(self.sigma, z, -1.0).conj())
    }
}

/// `‖g‖²` in `L²(ℝ²ⁿ, (2π)^{−n} dx dy)`, by quadrature around the envelope.
pub fn norm_sqr_h(g: &FieldFunction, order: usize) -> Result<f64> {
    g.expect(Side::H, g.n())?;
    let n = g.n();
    let env = g
        .envelope()
        .ok_or_else(|| Error::domain("quadrature needs an envelope hint"))?;
    let grid = QuadratureGrid::new(2 * n, order)?.recentered(&env.center, &env.halfwidth.iter().map(|h| h / SQRT_2).collect::<Vec<_>>())?;
    let v = grid.integrate_real(|p| {
        let pt = ComplexPoint {
            x: p[..n].to_vec(),
            y: p[n..].to_vec(),
        };
        g.eval(&pt).norm_sqr()
    });
    Ok(v / (2.0 * PI).powi(n as i32))
}

/// `‖f‖²` in `F_{α,m}`, i.e. against `(α/π)ⁿ e^{−α|z|²} dz`.
pub fn norm_sqr_f(spec: &KernelSpec, f: &FieldFunction, order: usize) -> Result<f64> {
    f.expect(Side::F, spec.n())?;
    let n = spec.n();
    let a = spec.alpha();
    let env = f
        .envelope()
        .ok_or_else(|| Error::domain("quadrature needs an envelope hint"))?;
    let grid = QuadratureGrid::new(2 * n, order)?.recentered(&env.center, &env.halfwidth.iter().map(|h| h / SQRT_2).collect::<Vec<_>>())?;
    let v = grid.integrate_real(|p| {
        let pt = ComplexPoint {
            x: p[..n].to_vec(),
            y: p[n..].to_vec(),
        };
        f.eval(&pt).norm_sqr() * (-a * pt.norm_sqr()).exp()
    });
    Ok(v * (a / PI).powi(n as i32))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: &[f64], y: &[f64]) -> ComplexPoint {
        ComplexPoint::from_split(x.to_vec(), y.to_vec()).unwrap()
    }

    #[test]
    fn flatten_constant() {
        let spec = KernelSpec::new(1, 2, 1.7).unwrap();
        let f = FieldFunction::new(Side::F, 1, |_| Complex64::new(2.0, -1.0));
        let g = flatten(&spec, &f).unwrap();
        let p = pt(&[0.4], &[-0.9]);
        let want = Complex64::new(2.0, -1.0)
            * Complex64::from_polar(SQRT_2 * (-(0.16 + 0.81) / 2.0f64).exp(), 0.36);
        assert!((g.eval(&p) - want).norm() < 1e-15);
    }

    #[test]
    fn kernel_image_matches_closed_form() {
        let spec = KernelSpec::new(2, 3, 0.6).unwrap();
        let z = pt(&[0.3, -0.5], &[0.8, 0.1]);
        let black = flatten(&spec, &kernel_section_f(&spec, &z).unwrap()).unwrap();
        let closed = flattened_kernel_closed(&spec, &z).unwrap();
        let p = pt(&[0.2, 0.7], &[-1.1, 0.4]);
        let (a, b) = (black.eval(&p), closed.eval(&p));
        assert!((a - b).norm() < 1e-13 * (1.0 + b.norm()));
        assert!(black.envelope().unwrap().halfwidth.iter().all(|h| (h - SQRT_2).abs() < 1e-15));
    }

    #[test]
    fn weyl_of_kernel() {
        let spec = KernelSpec::new(1, 2, 1.3).unwrap();
        let z = pt(&[0.2], &[0.5]);
        let a = [0.7];
        let moved = weyl_f(&spec, &a, &kernel_section_f(&spec, &z).unwrap()).unwrap();
        let za = z.shifted(&a);
        let w = pt(&[-0.4], &[0.9]);
        let ap = ComplexPoint::real(a.to_vec());
        let want = (-inner(&ap, &z) * 1.3 - 1.3 * 0.49 / 2.0).exp() * kernel_f(&spec, &za, &w).unwrap();
        assert!((moved.eval(&w) - want).norm() < 1e-13);
        let c = &moved.envelope().unwrap().center;
        assert!((c[0] - 0.9).abs() < 1e-15 && c[1] == 0.5);
    }

    #[test]
    fn alpha_sigma_mismatch() {
        let spec = KernelSpec::new(1, 1, 1.0).unwrap();
        assert!(SteinwartMap::new(&spec, 1.0).is_err());
        assert!(SteinwartMap::new(&spec, 0.5f64.sqrt()).is_ok());
    }

    #[test]
    fn side_checked() {
        let spec = KernelSpec::new(1, 1, 1.0).unwrap();
        let g = kernel_section_h(1, 1, &pt(&[0.0], &[0.0])).unwrap();
        assert!(flatten(&spec, &g).is_err());
        assert!(weyl_f(&spec, &[1.0], &g).is_err());
    }
}
