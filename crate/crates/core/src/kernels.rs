//! Closed-form reproducing kernels and their sum-of-products expansions.
//!
//! Conventions: `⟨w, z⟩ = Σ w_r conj(z_r)`; a point of ℂⁿ is stored in split
//! form `z = x + i y`, and the same split form serves as the point `(x, y)`
//! of ℝ²ⁿ for the flattened spaces.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multiindex::{dimension, IndexTable, MultiIndex};
use crate::orthopoly::{laguerre_eval_real, laguerre_fn_sequence, laguerre_sequence};

/// Parameters `(n, m, α)` of the space `F_{α,m}(ℂⁿ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    n: usize,
    m: usize,
    alpha: f64,
}

impl KernelSpec {
    pub fn new(n: usize, m: usize, alpha: f64) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::domain(format!("n and m must be positive (n = {n}, m = {m})")));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::domain(format!("alpha must be positive, got {alpha}")));
        }
        dimension(n, m)?;
        Ok(KernelSpec { n, m, alpha })
    }

    /// The `α = 2σ²` space paired with the Gaussian-kernel variant.
    pub fn from_sigma(n: usize, m: usize, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::domain(format!("sigma must be positive, got {sigma}")));
        }
        Self::new(n, m, 2.0 * sigma * sigma)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `d_{n,m}`.
    pub fn d(&self) -> usize {
        dimension(self.n, self.m).expect("validated at construction")
    }

    pub fn table(&self) -> IndexTable {
        IndexTable::new(self.n, self.m).expect("validated at construction")
    }

    fn check(&self, pts: &[&ComplexPoint]) -> Result<()> {
        check_len(self.n, pts)
    }
}

fn check_len(n: usize, pts: &[&ComplexPoint]) -> Result<()> {
    for p in pts {
        if p.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: p.len(),
            });
        }
    }
    Ok(())
}

/// A point `z = x + i y ∈ ℂⁿ`, equivalently `(x, y) ∈ ℝ²ⁿ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexPoint {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl ComplexPoint {
    pub fn from_split(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                got: y.len(),
            });
        }
        Ok(ComplexPoint { x, y })
    }

    pub fn from_complex(z: &[Complex64]) -> Self {
        ComplexPoint {
            x: z.iter().map(|c| c.re).collect(),
            y: z.iter().map(|c| c.im).collect(),
        }
    }

    /// The real point `(x, 0)`.
    pub fn real(x: Vec<f64>) -> Self {
        let y = vec![0.0; x.len()];
        ComplexPoint { x, y }
    }

    /// The purely imaginary point `i y`.
    pub fn imaginary(y: Vec<f64>) -> Self {
        let x = vec![0.0; y.len()];
        ComplexPoint { x, y }
    }

    pub fn zeros(n: usize) -> Self {
        ComplexPoint::real(vec![0.0; n])
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn coord(&self, r: usize) -> Complex64 {
        Complex64::new(self.x[r], self.y[r])
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        (0..self.len()).map(|r| self.coord(r)).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.x.iter().chain(&self.y).map(|v| v * v).sum()
    }

    pub fn scaled(&self, c: f64) -> Self {
        ComplexPoint {
            x: self.x.iter().map(|v| v * c).collect(),
            y: self.y.iter().map(|v| v * c).collect(),
        }
    }

    /// `self + a` for a real vector `a` (horizontal shift).
    pub fn shifted(&self, a: &[f64]) -> Self {
        ComplexPoint {
            x: self.x.iter().zip(a).map(|(x, a)| x + a).collect(),
            y: self.y.clone(),
        }
    }
}

/// `⟨w, z⟩ = Σ w_r conj(z_r)`.
pub fn inner(w: &ComplexPoint, z: &ComplexPoint) -> Complex64 {
    (0..w.len()).map(|r| w.coord(r) * z.coord(r).conj()).sum()
}

/// `|w − z|²`.
pub fn dist_sqr(w: &ComplexPoint, z: &ComplexPoint) -> f64 {
    w.x.iter()
        .zip(&z.x)
        .chain(w.y.iter().zip(&z.y))
        .map(|(a, b)| (a - b) * (a - b))
        .sum()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(a, b)| a * b).sum()
}

/// Reproducing kernel of `F_{α,m}(ℂⁿ)`:
/// `K_z(w) = e^{α⟨w,z⟩} L_{m-1}^{(n)}(α|w−z|²)`.
pub fn kernel_f(spec: &KernelSpec, z: &ComplexPoint, w: &ComplexPoint) -> Result<Complex64> {
    spec.check(&[z, w])?;
    let a = spec.alpha;
    let lag = laguerre_eval_real(spec.m as u32 - 1, spec.n as f64, a * dist_sqr(w, z));
    Ok((inner(w, z) * a).exp() * lag)
}

/// Which per-coordinate factors the sum-of-products expansion uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProductForm {
    /// `e^{α w_r conj(z_r)} L_{k_r}(α|w_r−z_r|²)`
    Polynomial,
    /// `e^{(α/2)(|w_r|²+|z_r|²) + iα Im(w_r conj(z_r))} ℓ_{k_r}(α|w_r−z_r|²)`
    Function,
}

/// `K_z(w)` as `Σ_{k∈J_{n,m}} Π_r (factor_r)`.
pub fn kernel_f_products(
    spec: &KernelSpec,
    z: &ComplexPoint,
    w: &ComplexPoint,
    form: ProductForm,
) -> Result<Complex64> {
    spec.check(&[z, w])?;
    let a = spec.alpha;
    let top = spec.m as u32 - 1;
    // factors[r][k] for k ≤ m−1
    let factors: Vec<Vec<Complex64>> = (0..spec.n)
        .map(|r| {
            let (zr, wr) = (z.coord(r), w.coord(r));
            let t = a * (wr - zr).norm_sqr();
            match form {
                ProductForm::Polynomial => {
                    let e = (wr * zr.conj() * a).exp();
                    laguerre_sequence(top, 0.0, t).into_iter().map(|l| e * l).collect()
                }
                ProductForm::Function => {
                    let re = a / 2.0 * (wr.norm_sqr() + zr.norm_sqr());
                    let im = a * (wr * zr.conj()).im;
                    let e = Complex64::from_polar(re.exp(), im);
                    laguerre_fn_sequence(top, t).into_iter().map(|l| e * l).collect()
                }
            }
        })
        .collect();
    Ok(spec
        .table()
        .iter()
        .map(|k| {
            k.entries()
                .iter()
                .enumerate()
                .map(|(r, &kr)| factors[r][kr as usize])
                .product::<Complex64>()
        })
        .sum())
}

/// Kernel of the tensor true-poly-Fock space indexed by `β ≥ 1`:
/// `Π_r e^{α w_r conj(z_r)} L_{β_r−1}(α|w_r−z_r|²)`.
pub fn kernel_true_poly(
    spec: &KernelSpec,
    beta: &MultiIndex,
    z: &ComplexPoint,
    w: &ComplexPoint,
) -> Result<Complex64> {
    spec.check(&[z, w])?;
    if beta.len() != spec.n {
        return Err(Error::DimensionMismatch {
            expected: spec.n,
            got: beta.len(),
        });
    }
    if beta.entries().contains(&0) {
        return Err(Error::domain(format!("true-poly index {beta} must have entries ≥ 1")));
    }
    let a = spec.alpha;
    Ok((0..spec.n)
        .map(|r| {
            let (zr, wr) = (z.coord(r), w.coord(r));
            (wr * zr.conj() * a).exp() * laguerre_eval_real(beta[r] - 1, 0.0, a * (wr - zr).norm_sqr())
        })
        .product())
}

/// Kernel of the flattened space `H_m ⊂ L²(ℝ²ⁿ)` at `p = (x, y)`, `q = (u, v)`:
/// `2ⁿ e^{−(|u−x|²+|v−y|²)/2 − i⟨u−x, v+y⟩} L_{m−1}^{(n)}(|u−x|²+|v−y|²)`.
pub fn kernel_h(n: usize, m: usize, p: &ComplexPoint, q: &ComplexPoint) -> Result<Complex64> {
    check_nm(n, m)?;
    check_len(n, &[p, q])?;
    let s = dist_sqr(q, p);
    let diff: Vec<f64> = q.x.iter().zip(&p.x).map(|(u, x)| u - x).collect();
    let sum: Vec<f64> = q.y.iter().zip(&p.y).map(|(v, y)| v + y).collect();
    let phase = -dot(&diff, &sum);
    let lag = laguerre_eval_real(m as u32 - 1, n as f64, s);
    Ok(Complex64::from_polar(2f64.powi(n as i32) * (-s / 2.0).exp() * lag, phase))
}

/// `K^{H}` through the Laguerre-function product expansion.
pub fn kernel_h_products(n: usize, m: usize, p: &ComplexPoint, q: &ComplexPoint) -> Result<Complex64> {
    check_nm(n, m)?;
    check_len(n, &[p, q])?;
    let factors: Vec<Vec<Complex64>> = (0..n)
        .map(|r| {
            let (du, dv) = (q.x[r] - p.x[r], q.y[r] - p.y[r]);
            let e = Complex64::from_polar(1.0, -du * (q.y[r] + p.y[r]));
            laguerre_fn_sequence(m as u32 - 1, du * du + dv * dv)
                .into_iter()
                .map(|l| e * l)
                .collect()
        })
        .collect();
    let table = IndexTable::new(n, m)?;
    let sum: Complex64 = table
        .iter()
        .map(|k| {
            k.entries()
                .iter()
                .enumerate()
                .map(|(r, &kr)| factors[r][kr as usize])
                .product::<Complex64>()
        })
        .sum();
    Ok(sum * 2f64.powi(n as i32))
}

/// Kernel of the image of `F_{α,m}` under the Gaussian weight without the
/// `e^{−i⟨x,y⟩}` phase; it is not covariant under horizontal translations.
pub fn kernel_g(n: usize, m: usize, p: &ComplexPoint, q: &ComplexPoint) -> Result<Complex64> {
    check_nm(n, m)?;
    check_len(n, &[p, q])?;
    let (x, y, u, v) = (&p.x, &p.y, &q.x, &q.y);
    let s = dist_sqr(q, p);
    let diff: Vec<f64> = u.iter().zip(x).map(|(u, x)| u - x).collect();
    let sum: Vec<f64> = y.iter().zip(v).map(|(y, v)| y + v).collect();
    let phase = -(dot(&diff, &sum) + dot(x, y) - dot(v, u));
    let lag = laguerre_eval_real(m as u32 - 1, n as f64, s);
    Ok(Complex64::from_polar(2f64.powi(n as i32) * (-s / 2.0).exp() * lag, phase))
}

/// Polyanalytic Gaussian kernel:
/// `exp(−σ² Σ (w_k − conj(z_k))²) L_{m−1}^{(n)}(2σ²|w−z|²)`.
pub fn kernel_s(n: usize, m: usize, sigma: f64, z: &ComplexPoint, w: &ComplexPoint) -> Result<Complex64> {
    check_nm(n, m)?;
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::domain(format!("sigma must be positive, got {sigma}")));
    }
    check_len(n, &[z, w])?;
    let s2 = sigma * sigma;
    let expo: Complex64 = (0..n)
        .map(|k| {
            let t = w.coord(k) - z.coord(k).conj();
            t * t
        })
        .sum();
    let lag = laguerre_eval_real(m as u32 - 1, n as f64, 2.0 * s2 * dist_sqr(w, z));
    Ok((-expo * s2).exp() * lag)
}

fn check_nm(n: usize, m: usize) -> Result<()> {
    dimension(n, m).map(|_| ())
}
