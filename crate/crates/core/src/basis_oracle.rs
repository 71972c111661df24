//! An orthonormal basis of `F_{α,m}(ℂⁿ)` built by Gram–Schmidt on the
//! monomials `z^p z̄^q`, `|q| ≤ m−1`, against exact Gaussian moments.
//!
//! Monomials with different charge `p − q` are orthogonal, so the
//! orthogonalization runs inside each charge class (at most `d_{n,m}`
//! members), ordered by `|q|` and then lexicographically.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernels::ComplexPoint;
use crate::multiindex::{IndexTable, MultiIndex};
use crate::orthopoly::{rational_to_f64, Rational};

/// `p_max` up to which [`build_orthonormal_basis`] uses exact arithmetic.
pub const EXACT_P_MAX: u32 = 32;

/// `⟨z^{p1} z̄^{q1}, z^{p2} z̄^{q2}⟩` in `L²(ℂⁿ, (α/π)ⁿ e^{−α|z|²})`.
pub fn gaussian_monomial_inner(alpha: f64, p1: &MultiIndex, q1: &MultiIndex, p2: &MultiIndex, q2: &MultiIndex) -> f64 {
    let mut v = 1.0;
    for r in 0..p1.len() {
        let (a, b, c, d) = (p1[r], q1[r], p2[r], q2[r]);
        if a + d != b + c {
            return 0.0;
        }
        let k = a + d;
        v *= (1..=k).map(|i| i as f64 / alpha).product::<f64>();
    }
    v
}

/// Exact form of [`gaussian_monomial_inner`] for rational `α`.
pub fn gaussian_monomial_inner_exact(
    alpha: &Rational,
    p1: &MultiIndex,
    q1: &MultiIndex,
    p2: &MultiIndex,
    q2: &MultiIndex,
) -> Rational {
    let mut v = Rational::one();
    for r in 0..p1.len() {
        let (a, b, c, d) = (p1[r], q1[r], p2[r], q2[r]);
        if a + d != b + c {
            return Rational::zero();
        }
        for i in 1..=(a + d) {
            v = v * Rational::from_integer(i.into()) / alpha;
        }
    }
    v
}

/// One orthonormal element, expanded over monomials `z^{p'} z̄^{q'}` of its
/// charge class; `(p, q)` is the monomial it was started from.
#[derive(Clone, Debug, PartialEq)]
pub struct MonomialBasisElement {
    pub p: MultiIndex,
    pub q: MultiIndex,
    pub coefficients: Vec<(MultiIndex, MultiIndex, f64)>,
}

/// Which arithmetic the Gram–Schmidt process runs in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisRoute {
    /// Unnormalized orthogonalization over ℚ, normalized in `f64` at the end.
    Exact,
    /// Modified Gram–Schmidt on normalized monomials, with one
    /// reorthogonalization pass.
    Float,
}

/// The orthonormal system for given `(α, n, m, p_max)`.
#[derive(Clone, Debug)]
pub struct OrthonormalBasis {
    alpha: f64,
    n: usize,
    m: usize,
    p_max: u32,
    route: BasisRoute,
    elements: Vec<MonomialBasisElement>,
}

type Class = Vec<(MultiIndex, MultiIndex)>;

fn charge_classes(n: usize, m: usize, p_max: u32) -> Result<BTreeMap<Vec<i64>, Class>> {
    let qs = IndexTable::new(n, m)?;
    let ps = IndexTable::new(n, p_max as usize + 1)?;
    let mut classes: BTreeMap<Vec<i64>, Class> = BTreeMap::new();
    for p in ps.iter() {
        for q in qs.iter() {
            let c: Vec<i64> = (0..n).map(|r| p[r] as i64 - q[r] as i64).collect();
            classes.entry(c).or_default().push((p.clone(), q.clone()));
        }
    }
    for members in classes.values_mut() {
        members.sort_by(|a, b| (a.1.total(), a.1.entries()).cmp(&(b.1.total(), b.1.entries())));
    }
    Ok(classes)
}

fn orthonormalize_exact(alpha: &Rational, class: &Class) -> Vec<Vec<f64>> {
    let k = class.len();
    let gram: Vec<Vec<Rational>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| gaussian_monomial_inner_exact(alpha, &class[i].0, &class[i].1, &class[j].0, &class[j].1))
                .collect()
        })
        .collect();
    // rows of `coef` are the orthogonal (unnormalized) vectors in the
    // monomial basis; `norms` their squared norms
    let mut coef: Vec<Vec<Rational>> = Vec::with_capacity(k);
    let mut norms: Vec<Rational> = Vec::with_capacity(k);
    for i in 0..k {
        let mut v: Vec<Rational> = vec![Rational::zero(); k];
        v[i] = Rational::one();
        for j in 0..i {
            // ⟨M_i, v_j⟩ = Σ_l v_j[l] ⟨M_i, M_l⟩
            let ip: Rational = (0..=j).map(|l| &coef[j][l] * &gram[i][l]).sum();
            let f = ip / &norms[j];
            for l in 0..=j {
                v[l] -= &f * &coef[j][l];
            }
        }
        let nrm: Rational = (0..=i)
            .flat_map(|a| (0..=i).map(move |b| (a, b)))
            .map(|(a, b)| &v[a] * &v[b] * &gram[a][b])
            .sum();
        assert!(!nrm.is_zero(), "rank deficiency in a monomial charge class");
        coef.push(v);
        norms.push(nrm);
    }
    coef.into_iter()
        .zip(norms)
        .map(|(v, nrm)| {
            let s = 1.0 / rational_to_f64(&nrm).sqrt();
            v.iter().map(|c| rational_to_f64(c) * s).collect()
        })
        .collect()
}

fn orthonormalize_float(alpha: f64, class: &Class) -> Vec<Vec<f64>> {
    let k = class.len();
    let raw: Vec<Vec<f64>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| gaussian_monomial_inner(alpha, &class[i].0, &class[i].1, &class[j].0, &class[j].1))
                .collect()
        })
        .collect();
    // work with normalized monomials N_i = M_i/‖M_i‖
    let scale: Vec<f64> = (0..k).map(|i| 1.0 / raw[i][i].sqrt()).collect();
    let gram: Vec<Vec<f64>> = (0..k)
        .map(|i| (0..k).map(|j| raw[i][j] * scale[i] * scale[j]).collect())
        .collect();
    let ip = |a: &[f64], b: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..k {
            if a[i] == 0.0 {
                continue;
            }
            for j in 0..k {
                s += a[i] * b[j] * gram[i][j];
            }
        }
        s
    };
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(k);
    for i in 0..k {
        let mut v = vec![0.0; k];
        v[i] = 1.0;
        for _pass in 0..2 {
            for b in &basis {
                let f = ip(&v, b);
                for l in 0..k {
                    v[l] -= f * b[l];
                }
            }
        }
        let nrm = ip(&v, &v);
        assert!(nrm > 0.0, "rank deficiency in a monomial charge class");
        let s = 1.0 / nrm.sqrt();
        v.iter_mut().for_each(|x| *x *= s);
        basis.push(v);
    }
    // back to raw monomials
    basis
        .into_iter()
        .map(|v| v.iter().zip(&scale).map(|(c, s)| c * s).collect())
        .collect()
}

/// Builds the basis, choosing exact arithmetic for `p_max ≤ 32`.
pub fn build_orthonormal_basis(alpha: f64, n: usize, m: usize, p_max: u32) -> Result<OrthonormalBasis> {
    let route = if p_max <= EXACT_P_MAX {
        BasisRoute::Exact
    } else {
        BasisRoute::Float
    };
    build_orthonormal_basis_with(route, alpha, n, m, p_max)
}

pub fn build_orthonormal_basis_with(
    route: BasisRoute,
    alpha: f64,
    n: usize,
    m: usize,
    p_max: u32,
) -> Result<OrthonormalBasis> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::domain(format!("alpha must be positive, got {alpha}")));
    }
    let classes = charge_classes(n, m, p_max)?;
    let alpha_q = BigRational::from_float(alpha).ok_or_else(|| Error::domain("alpha is not finite"))?;
    let class_list: Vec<&Class> = classes.values().collect();
    let mut elements: Vec<MonomialBasisElement> = class_list
        .par_iter()
        .flat_map_iter(|class| {
            let vecs = match route {
                BasisRoute::Exact => orthonormalize_exact(&alpha_q, class),
                BasisRoute::Float => orthonormalize_float(alpha, class),
            };
            vecs.into_iter().enumerate().map(move |(i, v)| MonomialBasisElement {
                p: class[i].0.clone(),
                q: class[i].1.clone(),
                coefficients: v
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| *c != 0.0)
                    .map(|(j, c)| (class[j].0.clone(), class[j].1.clone(), c))
                    .collect(),
            })
        })
        .collect();
    elements.sort_by(|a, b| {
        let ka = (a.p.total() + a.q.total(), a.p.entries(), a.q.entries());
        let kb = (b.p.total() + b.q.total(), b.p.entries(), b.q.entries());
        ka.cmp(&kb)
    });
    Ok(OrthonormalBasis {
        alpha,
        n,
        m,
        p_max,
        route,
        elements,
    })
}

// Powers z_r^k and conj(z_r)^k for k ≤ top.
struct Powers {
    z: Vec<Vec<Complex64>>,
    zb: Vec<Vec<Complex64>>,
}

impl Powers {
    fn new(pt: &ComplexPoint, top: u32) -> Self {
        let mut z = Vec::with_capacity(pt.len());
        let mut zb = Vec::with_capacity(pt.len());
        for r in 0..pt.len() {
            let c = pt.coord(r);
            let mut a = vec![Complex64::new(1.0, 0.0); top as usize + 1];
            for k in 1..a.len() {
                a[k] = a[k - 1] * c;
            }
            zb.push(a.iter().map(|v| v.conj()).collect());
            z.push(a);
        }
        Powers { z, zb }
    }

    fn monomial(&self, p: &MultiIndex, q: &MultiIndex) -> Complex64 {
        (0..p.len()).map(|r| self.z[r][p[r] as usize] * self.zb[r][q[r] as usize]).product()
    }
}

const EVAL_CHUNK: usize = 1024;

impl OrthonormalBasis {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn p_max(&self) -> u32 {
        self.p_max
    }

    pub fn route(&self) -> BasisRoute {
        self.route
    }

    pub fn elements(&self) -> &[MonomialBasisElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    fn check(&self, z: &ComplexPoint) -> Result<()> {
        if z.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: z.len(),
            });
        }
        Ok(())
    }

    /// Values of every element at `z`, in basis order.
    pub fn eval_all(&self, z: &ComplexPoint) -> Result<Vec<Complex64>> {
        self.check(z)?;
        let pw = Powers::new(z, self.p_max + self.m as u32);
        Ok(self
            .elements
            .par_iter()
            .map(|e| e.coefficients.iter().map(|(p, q, c)| pw.monomial(p, q) * *c).sum())
            .collect())
    }

    /// `Σ_b B_b(w) conj(B_b(z))`.
    pub fn kernel(&self, z: &ComplexPoint, w: &ComplexPoint) -> Result<Complex64> {
        let bz = self.eval_all(z)?;
        let bw = self.eval_all(w)?;
        let partial: Vec<Complex64> = bw
            .par_chunks(EVAL_CHUNK)
            .zip(bz.par_chunks(EVAL_CHUNK))
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x * y.conj()).sum())
            .collect();
        Ok(partial.into_iter().sum())
    }

    /// Largest `|⟨B_i, B_j⟩ − δ_ij|`, recomputed from the moments (pairs from
    /// different charge classes vanish identically).
    pub fn gram_defect(&self) -> f64 {
        let mut by_class: BTreeMap<Vec<i64>, Vec<&MonomialBasisElement>> = BTreeMap::new();
        for e in &self.elements {
            let c: Vec<i64> = (0..self.n).map(|r| e.p[r] as i64 - e.q[r] as i64).collect();
            by_class.entry(c).or_default().push(e);
        }
        let alpha = self.alpha;
        let classes: Vec<_> = by_class.into_values().collect();
        classes
            .par_iter()
            .map(|members| {
                let mut worst = 0.0f64;
                for (i, a) in members.iter().enumerate() {
                    for (j, b) in members.iter().enumerate() {
                        let mut s = 0.0;
                        for (pa, qa, ca) in &a.coefficients {
                            for (pb, qb, cb) in &b.coefficients {
                                s += ca * cb * gaussian_monomial_inner(alpha, pa, qa, pb, qb);
                            }
                        }
                        let want = if i == j { 1.0 } else { 0.0 };
                        worst = worst.max((s - want).abs());
                    }
                }
                worst
            })
            .reduce(|| 0.0, f64::max)
    }

    /// Largest residual when re-expanding each monomial `z^p z̄^q` of the
    /// span in the basis, measured in the Gaussian norm relative to the
    /// monomial's norm.
    pub fn span_residual(&self) -> f64 {
        let alpha = self.alpha;
        let mut by_class: BTreeMap<Vec<i64>, Vec<&MonomialBasisElement>> = BTreeMap::new();
        for e in &self.elements {
            let c: Vec<i64> = (0..self.n).map(|r| e.p[r] as i64 - e.q[r] as i64).collect();
            by_class.entry(c).or_default().push(e);
        }
        let classes: Vec<_> = by_class.into_values().collect();
        classes
            .par_iter()
            .map(|members| {
                let mut worst = 0.0f64;
                for target in members.iter() {
                    let (p, q) = (&target.p, &target.q);
                    let nn = gaussian_monomial_inner(alpha, p, q, p, q);
                    // ‖M − Σ ⟨M,B⟩B‖² = ‖M‖² − Σ |⟨M,B⟩|²
                    let captured: f64 = members
                        .iter()
                        .map(|b| {
                            let ip: f64 = b
                                .coefficients
                                .iter()
                                .map(|(pb, qb, cb)| cb * gaussian_monomial_inner(alpha, p, q, pb, qb))
                                .sum();
                            ip * ip
                        })
                        .sum();
                    worst = worst.max(((nn - captured) / nn).abs().sqrt());
                }
                worst
            })
            .reduce(|| 0.0, f64::max)
    }
}

/// Truncated kernel series `Σ B(w) conj(B(z))` over the basis with `|p| ≤ p_max`.
pub fn kernel_via_basis(alpha: f64, n: usize, m: usize, p_max: u32, z: &ComplexPoint, w: &ComplexPoint) -> Result<Complex64> {
    build_orthonormal_basis(alpha, n, m, p_max)?.kernel(z, w)
}

/// Converts an `f64` to the exact rational it represents.
pub fn exact_rational(x: f64) -> Option<Rational> {
    BigRational::from_float(x)
}
