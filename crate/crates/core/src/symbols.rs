//! Matrix symbols of translation-invariant operators on the fibers.
//!
//! A vertical Toeplitz operator with symbol `g(v)` acts on the fiber at ξ by
//! the `d × d` matrix
//! `γ_g(ξ)_{rs} = ∫ g((√2 t − ξ)/2) Π ψ_{φ(r)}(t) Π ψ_{φ(s)}(t) dt`.

use std::f64::consts::SQRT_2;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, SymmetricEigen, SVD};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::multiindex::IndexTable;
use crate::orthopoly::hermite_fn_sequence;
use crate::quadrature::{piecewise_legendre, QuadratureGrid};

/// A `d × d` complex matrix attached to a frequency point.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolMatrix {
    pub xi: Vec<f64>,
    pub entries: DMatrix<Complex64>,
}

impl SymbolMatrix {
    pub fn identity(xi: &[f64], d: usize) -> Self {
        Self::scalar(xi, d, Complex64::new(1.0, 0.0))
    }

    pub fn scalar(xi: &[f64], d: usize, c: Complex64) -> Self {
        SymbolMatrix {
            xi: xi.to_vec(),
            entries: DMatrix::from_diagonal_element(d, d, c),
        }
    }

    pub fn d(&self) -> usize {
        self.entries.nrows()
    }

    pub fn get(&self, r: usize, s: usize) -> Complex64 {
        self.entries[(r, s)]
    }

    fn check_pair(&self, other: &SymbolMatrix) -> Result<()> {
        if self.xi != other.xi {
            return Err(Error::FrequencyMismatch);
        }
        if self.d() != other.d() {
            return Err(Error::DimensionMismatch {
                expected: self.d(),
                got: other.d(),
            });
        }
        Ok(())
    }

    /// Pointwise product `A(ξ) B(ξ)`.
    pub fn compose(&self, other: &SymbolMatrix) -> Result<SymbolMatrix> {
        self.check_pair(other)?;
        Ok(SymbolMatrix {
            xi: self.xi.clone(),
            entries: &self.entries * &other.entries,
        })
    }

    pub fn add(&self, other: &SymbolMatrix) -> Result<SymbolMatrix> {
        self.check_pair(other)?;
        Ok(SymbolMatrix {
            xi: self.xi.clone(),
            entries: &self.entries + &other.entries,
        })
    }

    pub fn scale(&self, c: Complex64) -> SymbolMatrix {
        SymbolMatrix {
            xi: self.xi.clone(),
            entries: &self.entries * c,
        }
    }

    /// `AB − BA`.
    pub fn commutator(&self, other: &SymbolMatrix) -> Result<SymbolMatrix> {
        let ab = self.compose(other)?;
        let ba = other.compose(self)?;
        Ok(SymbolMatrix {
            xi: self.xi.clone(),
            entries: ab.entries - ba.entries,
        })
    }

    /// Symbol of the adjoint operator: the conjugate transpose.
    pub fn adjoint(&self) -> SymbolMatrix {
        SymbolMatrix {
            xi: self.xi.clone(),
            entries: self.entries.adjoint(),
        }
    }

    /// Largest entrywise distance.
    pub fn max_abs_diff(&self, other: &SymbolMatrix) -> Result<f64> {
        self.check_pair(other)?;
        Ok(self
            .entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Spectral norm.
    pub fn op_norm(&self) -> f64 {
        SVD::new(self.entries.clone(), false, false)
            .singular_values
            .iter()
            .fold(0.0, |m, v| m.max(*v))
    }

    /// Frobenius norm.
    pub fn frobenius(&self) -> f64 {
        self.entries.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Smallest eigenvalue of the Hermitian part `(A + A*)/2`.
    pub fn min_hermitian_eigenvalue(&self) -> f64 {
        let h = (&self.entries + self.entries.adjoint()) * Complex64::new(0.5, 0.0);
        SymmetricEigen::new(h)
            .eigenvalues
            .iter()
            .fold(f64::INFINITY, |m, v| m.min(*v))
    }

    /// Largest `|A − A*|` entry.
    pub fn hermitian_defect(&self) -> f64 {
        let a = self.adjoint();
        self.max_abs_diff(&a).unwrap_or(f64::INFINITY)
    }

    pub fn determinant(&self) -> Complex64 {
        self.entries.determinant()
    }

    /// Rows of `[re, im]` pairs.
    pub fn to_rows(&self) -> Vec<Vec<[f64; 2]>> {
        (0..self.d())
            .map(|r| (0..self.d()).map(|s| [self.get(r, s).re, self.get(r, s).im]).collect())
            .collect()
    }
}

/// Vertical symbols with known decay and discontinuities.
#[derive(Clone, Debug, PartialEq)]
pub enum VerticalSymbol {
    Constant(Complex64),
    /// `Σ c · v^k` over `(k, c)` terms.
    Polynomial(Vec<(Vec<u32>, f64)>),
    /// `exp(−|v − center|²/width²) · Σ c · v^k`.
    GaussianPolynomial {
        center: Vec<f64>,
        width: f64,
        terms: Vec<(Vec<u32>, f64)>,
    },
    /// `sign(v_axis)`, with `sign(0) = 1`.
    Sign { axis: usize },
    /// Indicator of the box `Π [lo_r, hi_r]`.
    Box { lo: Vec<f64>, hi: Vec<f64> },
    /// Linear combination.
    Sum(Vec<(Complex64, VerticalSymbol)>),
}

// One-dimensional factor of a separable term.
#[derive(Clone, Copy, Debug, PartialEq)]
enum Factor {
    Power(u32),
    GaussPower { center: f64, width: f64, power: u32 },
    Sign,
    Interval { lo: f64, hi: f64 },
}

impl Factor {
    fn eval(self, v: f64) -> f64 {
        match self {
            Factor::Power(k) => v.powi(k as i32),
            Factor::GaussPower { center, width, power } => {
                (-((v - center) / width).powi(2)).exp() * v.powi(power as i32)
            }
            Factor::Sign => {
                if v >= 0.0 {
                    1.0
                } else {
                    -1.0
                }
            }
            Factor::Interval { lo, hi } => {
                if (lo..=hi).contains(&v) {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    fn breaks(self) -> Vec<f64> {
        match self {
            Factor::Sign => vec![0.0],
            Factor::Interval { lo, hi } => vec![lo, hi],
            _ => vec![],
        }
    }
}

struct Term {
    coef: Complex64,
    factors: Vec<Factor>,
}

impl VerticalSymbol {
    /// Checks that the parameters fit dimension `n`.
    pub fn validate(&self, n: usize) -> Result<()> {
        let len_ok = |len: usize| {
            if len == n {
                Ok(())
            } else {
                Err(Error::DimensionMismatch { expected: n, got: len })
            }
        };
        match self {
            VerticalSymbol::Constant(_) => Ok(()),
            VerticalSymbol::Polynomial(t) => t.iter().try_for_each(|(k, _)| len_ok(k.len())),
            VerticalSymbol::GaussianPolynomial { center, width, terms } => {
                len_ok(center.len())?;
                if !(*width > 0.0) {
                    return Err(Error::domain("gaussian width must be positive"));
                }
                terms.iter().try_for_each(|(k, _)| len_ok(k.len()))
            }
            VerticalSymbol::Sign { axis } => {
                if *axis < n {
                    Ok(())
                } else {
                    Err(Error::OutOfRange {
                        what: "sign axis",
                        value: axis.to_string(),
                        range: "0..n",
                    })
                }
            }
            VerticalSymbol::Box { lo, hi } => {
                len_ok(lo.len())?;
                len_ok(hi.len())?;
                if lo.iter().zip(hi).any(|(a, b)| !(a < b)) {
                    return Err(Error::domain("box needs lo < hi on every axis"));
                }
                Ok(())
            }
            VerticalSymbol::Sum(parts) => parts.iter().try_for_each(|(_, g)| g.validate(n)),
        }
    }

    /// Value at `v ∈ ℝⁿ`.
    pub fn eval(&self, v: &[f64]) -> Complex64 {
        self.terms(v.len())
            .iter()
            .map(|t| t.coef * t.factors.iter().zip(v).map(|(f, &x)| f.eval(x)).product::<f64>())
            .sum()
    }

    /// `sup |g|` for the bounded kinds; `None` for unbounded ones.
    pub fn sup_bound(&self) -> Option<f64> {
        match self {
            VerticalSymbol::Constant(c) => Some(c.norm()),
            VerticalSymbol::Polynomial(t) => {
                if t.iter().all(|(k, _)| k.iter().all(|&e| e == 0)) {
                    Some(t.iter().map(|(_, c)| c.abs()).sum())
                } else {
                    None
                }
            }
            VerticalSymbol::GaussianPolynomial { terms, .. } => {
                if terms.iter().all(|(k, _)| k.iter().all(|&e| e == 0)) {
                    Some(terms.iter().map(|(_, c)| c.abs()).sum())
                } else {
                    None
                }
            }
            VerticalSymbol::Sign { .. } | VerticalSymbol::Box { .. } => Some(1.0),
            VerticalSymbol::Sum(parts) => parts
                .iter()
                .map(|(c, g)| g.sup_bound().map(|b| c.norm() * b))
                .sum(),
        }
    }

    /// Whether `g` is real-valued.
    pub fn is_real(&self) -> bool {
        match self {
            VerticalSymbol::Constant(c) => c.im == 0.0,
            VerticalSymbol::Sum(parts) => parts.iter().all(|(c, g)| c.im == 0.0 && g.is_real()),
            _ => true,
        }
    }

    fn terms(&self, n: usize) -> Vec<Term> {
        match self {
            VerticalSymbol::Constant(c) => vec![Term {
                coef: *c,
                factors: vec![Factor::Power(0); n],
            }],
            VerticalSymbol::Polynomial(t) => t
                .iter()
                .map(|(k, c)| Term {
                    coef: Complex64::new(*c, 0.0),
                    factors: k.iter().map(|&e| Factor::Power(e)).collect(),
                })
                .collect(),
            VerticalSymbol::GaussianPolynomial { center, width, terms } => terms
                .iter()
                .map(|(k, c)| Term {
                    coef: Complex64::new(*c, 0.0),
                    factors: k
                        .iter()
                        .zip(center)
                        .map(|(&e, &ctr)| Factor::GaussPower {
                            center: ctr,
                            width: *width,
                            power: e,
                        })
                        .collect(),
                })
                .collect(),
            VerticalSymbol::Sign { axis } => vec![Term {
                coef: Complex64::new(1.0, 0.0),
                factors: (0..n)
                    .map(|r| if r == *axis { Factor::Sign } else { Factor::Power(0) })
                    .collect(),
            }],
            VerticalSymbol::Box { lo, hi } => vec![Term {
                coef: Complex64::new(1.0, 0.0),
                factors: lo
                    .iter()
                    .zip(hi)
                    .map(|(&lo, &hi)| Factor::Interval { lo, hi })
                    .collect(),
            }],
            VerticalSymbol::Sum(parts) => parts
                .iter()
                .flat_map(|(c, g)| {
                    g.terms(n).into_iter().map(move |t| Term {
                        coef: t.coef * c,
                        factors: t.factors,
                    })
                })
                .collect(),
        }
    }

    // Discontinuities of `g` along each axis.
    fn breaks(&self, n: usize) -> Vec<Vec<f64>> {
        let mut out = vec![Vec::new(); n];
        for t in self.terms(n) {
            for (r, f) in t.factors.iter().enumerate() {
                out[r].extend(f.breaks());
            }
        }
        out
    }
}

impl fmt::Display for VerticalSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerticalSymbol::Constant(c) => write!(f, "const:{}", c.re),
            VerticalSymbol::Polynomial(t) => write!(f, "poly({} terms)", t.len()),
            VerticalSymbol::GaussianPolynomial { width, .. } => write!(f, "gauss(width {width})"),
            VerticalSymbol::Sign { axis } => write!(f, "sign:{}", axis + 1),
            VerticalSymbol::Box { lo, hi } => write!(f, "box:{lo:?}..{hi:?}"),
            VerticalSymbol::Sum(p) => write!(f, "sum({} parts)", p.len()),
        }
    }
}

/// Parses the command-line forms, all in the first coordinate `v_1` of an
/// `n`-dimensional symbol unless noted:
///
/// - `const:c`
/// - `poly:c0,c1,…` for `Σ c_k v_1^k`
/// - `gauss:center,width,c0,c1,…` for `exp(−(v_1−center)²/width²) Σ c_k v_1^k`
/// - `sign:axis` with a one-based axis
/// - `box:lo,hi`, the same interval on every axis
pub fn parse_symbol(s: &str, n: usize) -> Result<VerticalSymbol> {
    let (kind, rest) = s
        .split_once(':')
        .ok_or_else(|| Error::parse("symbol", format!("expected kind:params, got `{s}`")))?;
    let nums = |t: &str| -> Result<Vec<f64>> {
        t.split(',')
            .map(|x| {
                x.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::parse("symbol", format!("`{x}`: {e}")))
            })
            .collect()
    };
    let axis0 = |k: u32| {
        let mut e = vec![0; n];
        e[0] = k;
        e
    };
    let g = match kind {
        "const" => {
            let v = nums(rest)?;
            if v.len() != 1 {
                return Err(Error::parse("symbol", "const takes one value"));
            }
            VerticalSymbol::Constant(Complex64::new(v[0], 0.0))
        }
        "poly" => VerticalSymbol::Polynomial(
            nums(rest)?
                .into_iter()
                .enumerate()
                .map(|(k, c)| (axis0(k as u32), c))
                .collect(),
        ),
        "gauss" => {
            let v = nums(rest)?;
            if v.len() < 3 {
                return Err(Error::parse("symbol", "gauss takes center,width,c0,…"));
            }
            let mut center = vec![0.0; n];
            center[0] = v[0];
            VerticalSymbol::GaussianPolynomial {
                center,
                width: v[1],
                terms: v[2..]
                    .iter()
                    .enumerate()
                    .map(|(k, &c)| (axis0(k as u32), c))
                    .collect(),
            }
        }
        "sign" => {
            let axis: usize = rest
                .trim()
                .parse()
                .map_err(|e| Error::parse("symbol", format!("sign axis: {e}")))?;
            if axis == 0 {
                return Err(Error::parse("symbol", "sign axis is one-based"));
            }
            VerticalSymbol::Sign { axis: axis - 1 }
        }
        "box" => {
            let v = nums(rest)?;
            if v.len() != 2 {
                return Err(Error::parse("symbol", "box takes lo,hi"));
            }
            VerticalSymbol::Box {
                lo: vec![v[0]; n],
                hi: vec![v[1]; n],
            }
        }
        other => return Err(Error::parse("symbol", format!("unknown kind `{other}`"))),
    };
    g.validate(n)?;
    Ok(g)
}

/// A parsed symbol together with the dimension it was parsed for.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolSpec {
    pub n: usize,
    pub symbol: VerticalSymbol,
}

impl FromStr for SymbolSpec {
    type Err = Error;

    /// `n=<dim>;<symbol>`, or a bare one-dimensional symbol.
    fn from_str(s: &str) -> Result<Self> {
        let (n, body) = match s.split_once(';') {
            Some((head, body)) => {
                let n = head
                    .trim()
                    .strip_prefix("n=")
                    .and_then(|v| v.parse().ok())
                    .ok_or_else(|| Error::parse("symbol", format!("bad dimension prefix `{head}`")))?;
                (n, body)
            }
            None => (1, s),
        };
        Ok(SymbolSpec {
            n,
            symbol: parse_symbol(body, n)?,
        })
    }
}

// Largest |t| where products of Hermite functions up to degree m−1 matter.
fn t_extent(m: usize) -> f64 {
    (2.0 * m as f64 + 1.0).sqrt() + 9.0
}

const PANEL: f64 = 0.75;
const PANEL_ORDER: usize = 16;

// M[a][b] = ∫ f(a_t·t + b_t) ψ_a(t) ψ_b(t) dt for a one-dimensional factor,
// with the argument map v = slope·t + offset.
fn factor_matrix(f: Factor, m: usize, slope: f64, offset: f64) -> Result<Vec<Vec<f64>>> {
    let top = m as u32 - 1;
    let mut out = vec![vec![0.0; m]; m];
    let mut accumulate = |t: f64, w: f64| {
        let psi = hermite_fn_sequence(top, t);
        let g = f.eval(slope * t + offset) * w;
        for a in 0..m {
            for b in 0..=a {
                out[a][b] += g * psi[a] * psi[b];
            }
        }
    };
    match f {
        Factor::Power(k) => {
            // Polynomial times e^{−t²}: exact with enough nodes.
            let order = (k as usize + 2 * m).clamp(32, 128);
            let grid = QuadratureGrid::new(1, order)?;
            for (t, w) in grid.nodes().into_iter().zip(grid.weights()) {
                let t = t[0];
                accumulate(t, w * (t * t).exp());
            }
        }
        Factor::GaussPower { center, width, .. } => {
            // e^{−(v−c)²/w²} is a Gaussian in t; combine it with e^{−t²}.
            let t0 = (center - offset) / slope;
            let p = 1.0 / ((width / slope) * (width / slope));
            let prec = 1.0 + p;
            let tc = p * t0 / prec;
            let grid = QuadratureGrid::new(1, 64)?.recentered(&[tc], &[1.0 / prec.sqrt()])?;
            let w = grid.weights();
            let s = grid.scale()[0];
            for (i, node) in grid.nodes().into_iter().enumerate() {
                // weights are for exp(−((t−tc)/s)²); undo it
                let t = node[0];
                let u = (t - tc) / s;
                accumulate(t, w[i] * s * (u * u).exp());
            }
        }
        Factor::Sign | Factor::Interval { .. } => {
            let ext = t_extent(m);
            let breaks: Vec<f64> = f.breaks().iter().map(|b| (b - offset) / slope).collect();
            let rule = piecewise_legendre(-ext, ext, &breaks, PANEL, PANEL_ORDER)?;
            for (t, w) in rule.nodes.iter().zip(&rule.weights) {
                accumulate(*t, *w);
            }
        }
    }
    for a in 0..m {
        for b in 0..a {
            out[b][a] = out[a][b];
        }
    }
    Ok(out)
}

fn check_point(n: usize, xi: &[f64]) -> Result<()> {
    if xi.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: xi.len(),
        });
    }
    Ok(())
}

/// `γ_g(ξ)`, assembled from per-axis `m × m` factor matrices of the separable
/// terms of `g`.
pub fn gamma_toeplitz(table: &IndexTable, g: &VerticalSymbol, xi: &[f64]) -> Result<SymbolMatrix> {
    let n = table.n();
    let m = table.m();
    check_point(n, xi)?;
    g.validate(n)?;
    let d = table.d();
    let mut entries = DMatrix::<Complex64>::zeros(d, d);
    for term in g.terms(n) {
        let mats: Vec<Vec<Vec<f64>>> = term
            .factors
            .iter()
            .enumerate()
            .map(|(r, &f)| factor_matrix(f, m, 1.0 / SQRT_2, -xi[r] / 2.0))
            .collect::<Result<_>>()?;
        for (i, ki) in table.iter().enumerate() {
            for (j, kj) in table.iter().enumerate() {
                let v: f64 = (0..n)
                    .map(|r| mats[r][ki[r] as usize][kj[r] as usize])
                    .product();
                entries[(i, j)] += term.coef * v;
            }
        }
    }
    Ok(SymbolMatrix {
        xi: xi.to_vec(),
        entries,
    })
}

/// `σ_g(η) = γ_g(−η/√2)`.
pub fn sigma_from_gamma(table: &IndexTable, g: &VerticalSymbol, eta: &[f64]) -> Result<SymbolMatrix> {
    let xi: Vec<f64> = eta.iter().map(|e| -e / SQRT_2).collect();
    let mut s = gamma_toeplitz(table, g, &xi)?;
    s.xi = eta.to_vec();
    Ok(s)
}

/// `σ_g(η)_{rs} = ∫ g((2t + η)/(2√2)) Π ψ_{φ(r)}(t) Π ψ_{φ(s)}(t) dt`, by a
/// full tensor quadrature that treats `g` as a black box.
pub fn sigma_direct(table: &IndexTable, g: &VerticalSymbol, eta: &[f64]) -> Result<SymbolMatrix> {
    let n = table.n();
    let m = table.m();
    check_point(n, eta)?;
    g.validate(n)?;
    let ext = t_extent(m);
    let breaks = g.breaks(n);
    // v = (2t + η)/(2√2)  ⇔  t = √2 v − η/2
    let rules = (0..n)
        .map(|r| {
            let b: Vec<f64> = breaks[r].iter().map(|v| SQRT_2 * v - eta[r] / 2.0).collect();
            piecewise_legendre(-ext, ext, &b, PANEL, PANEL_ORDER)
        })
        .collect::<Result<Vec<_>>>()?;
    let d = table.d();
    let top = m as u32 - 1;
    let sizes: Vec<usize> = rules.iter().map(|r| r.nodes.len()).collect();
    let total: usize = sizes.iter().product();
    let mut acc = DMatrix::<Complex64>::zeros(d, d);
    let mut t = vec![0.0; n];
    let mut v = vec![0.0; n];
    for mut idx in 0..total {
        let mut w = 1.0;
        for r in 0..n {
            let k = idx % sizes[r];
            idx /= sizes[r];
            t[r] = rules[r].nodes[k];
            w *= rules[r].weights[k];
            v[r] = (2.0 * t[r] + eta[r]) / (2.0 * SQRT_2);
        }
        let gv = g.eval(&v) * w;
        let psis: Vec<Vec<f64>> = t.iter().map(|&x| hermite_fn_sequence(top, x)).collect();
        let prods: Vec<f64> = table
            .iter()
            .map(|k| (0..n).map(|r| psis[r][k[r] as usize]).product())
            .collect();
        for i in 0..d {
            for j in 0..d {
                acc[(i, j)] += gv * (prods[i] * prods[j]);
            }
        }
    }
    Ok(SymbolMatrix {
        xi: eta.to_vec(),
        entries: acc,
    })
}

/// `γ_g(ξ)` by the same black-box tensor quadrature as [`sigma_direct`].
pub fn gamma_direct(table: &IndexTable, g: &VerticalSymbol, xi: &[f64]) -> Result<SymbolMatrix> {
    let eta: Vec<f64> = xi.iter().map(|x| -SQRT_2 * x).collect();
    let mut s = sigma_direct(table, g, &eta)?;
    s.xi = xi.to_vec();
    Ok(s)
}

/// Symbol of the horizontal Weyl shift by `a`: `e^{−i⟨ξ,a⟩} I_d`.
pub fn weyl_symbol(table: &IndexTable, a: &[f64], xi: &[f64]) -> Result<SymbolMatrix> {
    check_point(table.n(), a)?;
    check_point(table.n(), xi)?;
    let phase: f64 = xi.iter().zip(a).map(|(x, y)| x * y).sum();
    Ok(SymbolMatrix::scalar(xi, table.d(), Complex64::from_polar(1.0, -phase)))
}

/// Symbol of a horizontal convolution: `ĥ(ξ) I_d`.
pub fn convolution_symbol<H>(table: &IndexTable, h_hat: H, xi: &[f64]) -> Result<SymbolMatrix>
where
    H: Fn(&[f64]) -> Complex64,
{
    check_point(table.n(), xi)?;
    Ok(SymbolMatrix::scalar(xi, table.d(), h_hat(xi)))
}

/// `ĥ(ξ) = e^{−|ξ|²/2}`, the transform of `h(x) = e^{−|x|²/2}`.
pub fn gaussian_hat(xi: &[f64]) -> Complex64 {
    Complex64::new((-xi.iter().map(|x| x * x).sum::<f64>() / 2.0).exp(), 0.0)
}
