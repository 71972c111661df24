//! Laguerre and Hermite families: exact polynomials, stable floating-point
//! evaluation, and exact checks of the Laguerre summation identities.

mod rational;

use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::{One, Zero};

pub use rational::{int, ratio, rational_to_f64, Rational, RationalPoly};

use crate::multiindex::{binomial, IndexTable};

/// Degree and superscript of a generalized Laguerre polynomial `L_p^{(a)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaguerreParams {
    pub degree: u32,
    pub superscript: Rational,
}

impl LaguerreParams {
    pub fn new(degree: u32, superscript: Rational) -> Self {
        LaguerreParams { degree, superscript }
    }

    /// Plain Laguerre polynomial, superscript zero.
    pub fn plain(degree: u32) -> Self {
        Self::new(degree, Rational::zero())
    }
}

/// `L_p^{(a)}` as an exact polynomial in the single variable `x`.
pub fn laguerre_poly(params: &LaguerreParams) -> RationalPoly {
    let x = RationalPoly::variable(&["x"], 0);
    laguerre_in(params.degree, &params.superscript, &x)
}

/// `L_p^{(a)}(arg)` for a polynomial argument, built with the three-term
/// recurrence `(k+1) L_{k+1} = (2k+1+a-arg) L_k - (k+a) L_{k-1}`.
pub fn laguerre_in(p: u32, a: &Rational, arg: &RationalPoly) -> RationalPoly {
    let vars: Vec<&str> = arg.vars().iter().map(String::as_str).collect();
    let one = RationalPoly::constant(&vars, Rational::one());
    if p == 0 {
        return one;
    }
    let mut prev = one.clone();
    let mut cur = &RationalPoly::constant(&vars, Rational::one() + a) - arg;
    for k in 1..p {
        let kq = int(k as i64);
        let lin = &RationalPoly::constant(&vars, int(2 * k as i64 + 1) + a) - arg;
        let mut next = &lin * &cur;
        next.add_scaled(&prev, &-(kq.clone() + a));
        let next = next.scale(&(Rational::one() / (kq + Rational::one())));
        prev = cur;
        cur = next;
    }
    cur
}

/// `L_p^{(a)}(0) = C(p+a, p)`, valid for rational `a`.
pub fn laguerre_at_zero(p: u32, a: &Rational) -> Rational {
    (1..=p as i64).fold(Rational::one(), |acc, i| acc * (a + int(i)) / int(i))
}

/// Values `L_0^{(a)}(x), …, L_{p_max}^{(a)}(x)` by forward recurrence.
pub fn laguerre_sequence(p_max: u32, a: f64, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(p_max as usize + 1);
    out.push(1.0);
    if p_max == 0 {
        return out;
    }
    out.push(1.0 + a - x);
    for k in 1..p_max as usize {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + a - x) * out[k] - (kf + a) * out[k - 1]) / (kf + 1.0);
        out.push(next);
    }
    out
}

/// `L_p^{(a)}(x)` for real `x`.
pub fn laguerre_eval_real(p: u32, a: f64, x: f64) -> f64 {
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..p {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + a - x) * cur - (kf + a) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `L_p^{(a)}(x)` for complex `x`.
pub fn laguerre_eval(p: u32, a: f64, x: Complex64) -> Complex64 {
    let (mut prev, mut cur) = (Complex64::zero(), Complex64::one());
    for k in 0..p {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + a - x) * cur - (kf + a) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Laguerre function `ℓ_p(t) = e^{-t/2} L_p(t)`.
pub fn laguerre_fn(p: u32, t: f64) -> f64 {
    (-t / 2.0).exp() * laguerre_eval_real(p, 0.0, t)
}

/// `ℓ_0(t), …, ℓ_{p_max}(t)`.
pub fn laguerre_fn_sequence(p_max: u32, t: f64) -> Vec<f64> {
    let e = (-t / 2.0).exp();
    let mut v = laguerre_sequence(p_max, 0.0, t);
    v.iter_mut().for_each(|x| *x *= e);
    v
}

/// Hermite functions `ψ_0(t), …, ψ_{p_max}(t)`, orthonormal in `L²(ℝ)`.
pub fn hermite_fn_sequence(p_max: u32, t: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(p_max as usize + 1);
    out.push(PI.powf(-0.25) * (-t * t / 2.0).exp());
    if p_max == 0 {
        return out;
    }
    out.push(std::f64::consts::SQRT_2 * t * out[0]);
    for k in 1..p_max as usize {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * t * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
        out.push(next);
    }
    out
}

/// Hermite function `ψ_p(t) = (2^p p! √π)^{-1/2} H_p(t) e^{-t²/2}`.
pub fn hermite_fn(p: u32, t: f64) -> f64 {
    let (mut prev, mut cur) = (0.0, PI.powf(-0.25) * (-t * t / 2.0).exp());
    for k in 0..p {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * t * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Checks `L_p^{(a+b+1)}(x+y) = Σ_{k=0}^p L_k^{(a)}(x) L_{p-k}^{(b)}(y)` as an
/// identity of polynomials in `x, y`.
pub fn check_laguerre_of_sum(a: &Rational, b: &Rational, p: u32) -> bool {
    let vars = ["x", "y"];
    let x = RationalPoly::variable(&vars, 0);
    let y = RationalPoly::variable(&vars, 1);
    let lhs = laguerre_in(p, &(a + b + Rational::one()), &(&x + &y));
    let lx: Vec<_> = (0..=p).map(|k| laguerre_in(k, a, &x)).collect();
    let ly: Vec<_> = (0..=p).map(|k| laguerre_in(k, b, &y)).collect();
    let mut rhs = RationalPoly::zero(&vars);
    for k in 0..=p as usize {
        rhs.add_scaled(&(&lx[k] * &ly[p as usize - k]), &Rational::one());
    }
    (&lhs - &rhs).is_zero()
}

/// Checks `Σ_{k=0}^p L_k^{(a)}(x) = L_p^{(a+1)}(x)`.
pub fn check_telescoping(a: &Rational, p: u32) -> bool {
    let x = RationalPoly::variable(&["x"], 0);
    let mut sum = RationalPoly::zero(&["x"]);
    for k in 0..=p {
        sum.add_scaled(&laguerre_in(k, a, &x), &Rational::one());
    }
    (&sum - &laguerre_in(p, &(a + Rational::one()), &x)).is_zero()
}

/// Outcome of the multivariate decomposition check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionCheck {
    pub n: usize,
    pub p: u32,
    pub identity_holds: bool,
    pub summands: usize,
    pub expected_summands: u128,
}

impl DecompositionCheck {
    pub fn passed(&self) -> bool {
        self.identity_holds && self.summands as u128 == self.expected_summands
    }
}

/// Checks `L_p^{(n)}(t_1+…+t_n) = Σ_{|k|≤p} Π_r L_{k_r}(t_r)` in `n` variables
/// and that the sum has `C(n+p, n)` summands.
pub fn check_laguerre_decomposition(n: usize, p: u32) -> bool {
    laguerre_decomposition_report(n, p).passed()
}

/// Detailed form of [`check_laguerre_decomposition`].
///
/// # Panics
/// If `n == 0`.
pub fn laguerre_decomposition_report(n: usize, p: u32) -> DecompositionCheck {
    assert!(n >= 1, "at least one variable required");
    let names: Vec<String> = (1..=n).map(|r| format!("t{r}")).collect();
    let vars: Vec<&str> = names.iter().map(String::as_str).collect();

    let sum = RationalPoly::sum_of_variables(&vars);
    let lhs = laguerre_in(p, &int(n as i64), &sum);

    // Univariate coefficient lists of L_0, …, L_p.
    let coeffs: Vec<Vec<Rational>> = (0..=p)
        .map(|k| laguerre_poly(&LaguerreParams::plain(k)).univariate_coefficients())
        .collect();

    let table = IndexTable::new(n, p as usize + 1).expect("n, p+1 are positive");
    let mut acc: HashMap<Vec<u32>, Rational> = HashMap::new();
    let mut exps = vec![0u32; n];
    for k in table.iter() {
        expand_product(k.entries(), &coeffs, 0, Rational::one(), &mut exps, &mut acc);
    }
    let rhs = RationalPoly::from_terms(&vars, acc);

    DecompositionCheck {
        n,
        p,
        identity_holds: (&lhs - &rhs).is_zero(),
        summands: table.d(),
        expected_summands: binomial((n as u128) + p as u128, n as u128).unwrap_or(0),
    }
}

// Adds every monomial of Π_r L_{k_r}(t_r) into `acc`, one coordinate at a time.
fn expand_product(
    k: &[u32],
    coeffs: &[Vec<Rational>],
    r: usize,
    prefix: Rational,
    exps: &mut Vec<u32>,
    acc: &mut HashMap<Vec<u32>, Rational>,
) {
    if r == k.len() {
        let slot = acc.entry(exps.clone()).or_insert_with(Rational::zero);
        *slot += prefix;
        return;
    }
    for (e, c) in coeffs[k[r] as usize].iter().enumerate() {
        exps[r] = e as u32;
        expand_product(k, coeffs, r + 1, &prefix * c, exps, acc);
    }
    exps[r] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_closed_forms() {
        let a = ratio(3, 2);
        assert_eq!(
            laguerre_poly(&LaguerreParams::new(0, a.clone())),
            RationalPoly::constant(&["x"], int(1))
        );
        let l1 = laguerre_poly(&LaguerreParams::new(1, a.clone()));
        assert_eq!(l1.coefficient(&[0]), int(1) + &a);
        assert_eq!(l1.coefficient(&[1]), int(-1));
        let l2 = laguerre_poly(&LaguerreParams::new(2, int(1)));
        assert_eq!(l2.eval_rational(&[int(0)]), int(3));
    }

    #[test]
    fn leading_coefficient() {
        let mut fact = 1i64;
        for p in 0..10u32 {
            if p > 0 {
                fact *= p as i64;
            }
            let l = laguerre_poly(&LaguerreParams::new(p, ratio(2, 7)));
            let sign = if p % 2 == 0 { 1 } else { -1 };
            assert_eq!(l.coefficient(&[p]), ratio(sign, fact));
            assert_eq!(l.degree(), Some(p));
        }
    }

    #[test]
    fn value_at_zero_is_binomial() {
        for n in 1..6 {
            for p in 0..8 {
                let v = laguerre_eval_real(p, n as f64, 0.0);
                let b = binomial(n as u128 + p as u128, n as u128).unwrap() as f64;
                assert_eq!(v, b);
                assert_eq!(laguerre_at_zero(p, &int(n)), int(b as i64));
            }
        }
    }

    #[test]
    fn float_matches_exact() {
        let exact = laguerre_poly(&LaguerreParams::new(5, int(2)));
        let want = exact.eval_rational(&[ratio(17, 10)]);
        let got = laguerre_eval(5, 2.0, Complex64::new(1.7, 0.0));
        assert!((got.re - rational_to_f64(&want)).abs() < 1e-13);
        assert_eq!(got.im, 0.0);

        let l3 = laguerre_poly(&LaguerreParams::plain(3)).eval_rational(&[ratio(4, 5)]);
        let want = (-0.4f64).exp() * rational_to_f64(&l3);
        assert!((laguerre_fn(3, 0.8) - want).abs() < 1e-15);
    }

    #[test]
    fn laguerre_function_values() {
        assert_eq!(laguerre_fn(0, 0.0), 1.0);
        assert_eq!(laguerre_fn(1, 1.0), 0.0);
        assert!((laguerre_fn(1, 2.0) + (-1.0f64).exp()).abs() < 1e-16);
        assert!(laguerre_fn(4, 200.0).abs() < 1e-30);
        let seq = laguerre_fn_sequence(6, 1.3);
        for (p, v) in seq.iter().enumerate() {
            assert!((v - laguerre_fn(p as u32, 1.3)).abs() < 1e-15);
        }
    }

    #[test]
    fn hermite_values() {
        assert!((hermite_fn(0, 0.0) - PI.powf(-0.25)).abs() < 1e-16);
        assert_eq!(hermite_fn(1, 0.0), 0.0);
        // ψ_2(t) = (2t² − 1) e^{−t²/2} / (√2 π^{1/4})
        let t = 0.9f64;
        let want = (2.0 * t * t - 1.0) * (-t * t / 2.0).exp() / (2f64.sqrt() * PI.powf(0.25));
        assert!((hermite_fn(2, t) - want).abs() < 1e-15);
        let seq = hermite_fn_sequence(200, 3.0);
        assert!(seq.iter().all(|v| v.is_finite()));
        assert_eq!(seq[37], hermite_fn(37, 3.0));
        assert!(hermite_fn(200, 19.0).is_finite());
    }

    #[test]
    fn sum_identities_small() {
        for p in 0..5 {
            assert!(check_laguerre_of_sum(&ratio(1, 2), &int(3), p));
            assert!(check_telescoping(&ratio(1, 2), p));
        }
    }

    #[test]
    fn wrong_superscript_is_detected() {
        let x = RationalPoly::variable(&["x", "y"], 0);
        let y = RationalPoly::variable(&["x", "y"], 1);
        let lhs = laguerre_in(3, &int(1), &(&x + &y));
        let mut rhs = RationalPoly::zero(&["x", "y"]);
        for k in 0..=3 {
            rhs.add_scaled(&(&laguerre_in(k, &int(0), &x) * &laguerre_in(3 - k, &int(0), &y)), &int(1));
        }
        assert!((&lhs - &rhs).is_zero());
        let off = laguerre_in(3, &int(2), &(&x + &y));
        assert!(!(&off - &rhs).is_zero());
    }

    #[test]
    fn decomposition_small() {
        let r = laguerre_decomposition_report(2, 0);
        assert!(r.passed());
        assert_eq!(r.summands, 1);
        let r = laguerre_decomposition_report(3, 4);
        assert!(r.identity_holds);
        assert_eq!(r.summands, 35);
        for p in 0..6 {
            assert!(check_laguerre_decomposition(1, p));
        }
    }
}
