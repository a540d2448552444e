//! The multiplier of convolution with `K(m) = e^{-2 pi |m|^2 (eps - i s)}`,
//! by direct lattice summation and by its Poisson-summed Gauss-sum form.
//!
//! Both forms are products of one-dimensional factors, one per coordinate
//! of `xi`; the truncation bounds below are for the full d-fold product.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gauss::GaussTable;

/// Default cap on the number of lattice terms `(2R+1)^d` a direct sum may represent.
pub const DEFAULT_TERM_BUDGET: u128 = 1_000_000_000_000;

/// Position on an arc: `s = a/q + t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcPoint {
    pub a: i64,
    pub q: u64,
    pub t: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatParams {
    pub epsilon: f64,
    pub s: f64,
    pub arc: Option<ArcPoint>,
}

impl HeatParams {
    pub fn new(epsilon: f64, s: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidInput(format!("epsilon must be positive, got {epsilon}")));
        }
        Ok(Self { epsilon, s, arc: None })
    }

    pub fn on_arc(epsilon: f64, a: i64, q: u64, t: f64) -> Result<Self> {
        let mut p = Self::new(epsilon, a as f64 / q as f64 + t)?;
        p.arc = Some(ArcPoint { a, q, t });
        Ok(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatValue {
    pub value: Complex64,
    /// Upper bound on the magnitude of the omitted terms.
    pub truncation_bound: f64,
    /// Per-coordinate cutoff radius used.
    pub radius: u64,
}

/// `sum_{|n| > r} e^{-2 pi eps n^2}` over `n in Z`, bounded by a geometric series.
fn gaussian_tail(eps: f64, r: u64) -> f64 {
    let r1 = (r + 1) as f64;
    let first = (-TAU * eps * r1 * r1).exp();
    let ratio = (-TAU * eps * (2.0 * r1 + 1.0)).exp();
    2.0 * first / (1.0 - ratio)
}

/// `sum_{n in Z} e^{-2 pi eps n^2}` to machine precision.
pub fn theta(eps: f64) -> f64 {
    let mut sum = 1.0;
    let mut n = 1.0f64;
    loop {
        let term = 2.0 * (-TAU * eps * n * n).exp();
        sum += term;
        if term < 1e-18 * sum {
            return sum;
        }
        n += 1.0;
    }
}

pub fn heat_multiplier_direct(p: &HeatParams, xi: &[f64], tol: f64) -> Result<HeatValue> {
    heat_multiplier_direct_with_budget(p, xi, tol, DEFAULT_TERM_BUDGET)
}

pub fn heat_multiplier_direct_with_budget(p: &HeatParams, xi: &[f64], tol: f64, budget: u128) -> Result<HeatValue> {
    let d = xi.len();
    let eps = p.epsilon;
    let th = theta(eps);
    // |prod S_i - prod S_i^R| <= d th^{d-1} tail.
    let bound = |r: u64| d as f64 * th.powi(d as i32 - 1) * gaussian_tail(eps, r);
    let mut r = 0u64;
    while bound(r) >= tol {
        r += 1;
        if r > 1 << 20 {
            return Err(Error::InvalidInput(format!("tolerance {tol:e} unreachable")));
        }
    }
    let needed = (2 * r as u128 + 1).checked_pow(d as u32).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::Budget {
            what: "direct heat-kernel lattice sum",
            needed,
            budget,
        });
    }
    let s = p.s;
    let value = xi
        .iter()
        .map(|&x| {
            let mut acc = Complex64::new(1.0, 0.0);
            for n in 1..=r as i64 {
                let nf = n as f64;
                let amp = (-TAU * eps * nf * nf).exp();
                let quad = (((n * n) as f64) * s).rem_euclid(1.0);
                // e(n^2 s) (e(n x) + e(-n x)) = 2 e(n^2 s) cos(2 pi n x)
                let lin = (nf * x).rem_euclid(1.0);
                acc += Complex64::from_polar(2.0 * amp * (TAU * lin).cos(), TAU * quad);
            }
            acc
        })
        .product();
    Ok(HeatValue {
        value,
        truncation_bound: bound(r),
        radius: r,
    })
}

/// One coordinate of the Poisson form, `(2w)^{-1/2} sum_l g(l) e^{-pi (x - l/q)^2 / (2w)}`
/// with `w = eps - i t`, truncated where the Gaussian envelope drops below `tol`.
fn poisson_factor(table: &GaussTable, eps: f64, t: f64, x: f64, tol: f64) -> (Complex64, u64) {
    let q = table.q as f64;
    let w = Complex64::new(eps, -t);
    let two_w = 2.0 * w;
    let pref = two_w.sqrt().inv();
    let decay = PI * eps / (2.0 * (eps * eps + t * t));
    let rho = ((-tol.ln()).max(0.0) / decay).sqrt();
    let lo = (q * (x - rho)).floor() as i64;
    let hi = (q * (x + rho)).ceil() as i64;
    let coef = -PI / two_w;
    let mut acc = Complex64::new(0.0, 0.0);
    for l in lo..=hi {
        let dx = x - l as f64 / q;
        acc += table.one_dim(l) * (coef * dx * dx).exp();
    }
    (pref * acc, (hi - lo + 1) as u64)
}

/// `(2(eps - i t))^{-d/2} sum_l G(a/q, l) e^{-pi |xi - l/q|^2 / (2(eps - i t))}`.
pub fn heat_multiplier_poisson(p: &HeatParams, xi: &[f64], tol: f64) -> Result<HeatValue> {
    let arc = p
        .arc
        .ok_or_else(|| Error::InvalidInput("Poisson form needs an arc-resolved s = a/q + t".into()))?;
    let table = GaussTable::new(arc.a, arc.q)?;
    Ok(heat_multiplier_poisson_with(&table, p.epsilon, arc.t, xi, tol))
}

/// Same as [`heat_multiplier_poisson`] with a prebuilt Gauss table.
pub fn heat_multiplier_poisson_with(table: &GaussTable, eps: f64, t: f64, xi: &[f64], tol: f64) -> HeatValue {
    let mut value = Complex64::new(1.0, 0.0);
    let mut terms = 0;
    for &x in xi {
        let (f, n) = poisson_factor(table, eps, t, x, tol);
        value *= f;
        terms = terms.max(n);
    }
    HeatValue {
        value,
        truncation_bound: tol,
        radius: terms,
    }
}

/// `q^{d/2} (eps + |t|)^{d/2} |K^(xi)|`, the quantity bounded by a constant
/// when `eps = Lambda^{-2}` and `|t| < 1/(q Lambda)`.
pub fn normalized_magnitude(value: Complex64, q: u64, eps: f64, t: f64, d: usize) -> f64 {
    ((q as f64) * (eps + t.abs())).powf(d as f64 / 2.0) * value.norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn direct_at_origin_is_theta_power() {
        let p = HeatParams::new(1.0, 0.0).unwrap();
        let v = heat_multiplier_direct(&p, &[0.0; 5], 1e-12).unwrap();
        let one_dim: f64 = 1.0 + 2.0 * (-TAU).exp() + 2.0 * (-4.0 * TAU).exp() + 2.0 * (-9.0 * TAU).exp();
        assert!((one_dim - 1.003_734_885_5).abs() < 1e-9);
        assert!((v.value.re - one_dim.powi(5)).abs() < 1e-12);
        assert!(v.value.im.abs() < 1e-15);
        assert!(v.truncation_bound < 1e-12);
    }

    #[test]
    fn large_eps_keeps_only_origin() {
        let p = HeatParams::new(5.0, 0.0).unwrap();
        let v = heat_multiplier_direct(&p, &[0.0; 3], 1e-14).unwrap();
        assert!((v.value.re - 1.0).abs() < 7.0 * (-TAU * 5.0).exp());
    }

    #[test]
    fn direct_budget() {
        let p = HeatParams::new(1e-4, 0.1).unwrap();
        let err = heat_multiplier_direct_with_budget(&p, &[0.0; 5], 1e-12, 1 << 30).unwrap_err();
        assert!(matches!(err, Error::Budget { .. }));
    }

    #[test]
    fn poisson_origin_trivial_arc() {
        let eps = 0.7;
        let p = HeatParams::on_arc(eps, 0, 1, 0.0).unwrap();
        let v = heat_multiplier_poisson(&p, &[0.0; 3], 1e-17).unwrap().value;
        let one: f64 = (-30i64..=30).map(|l| (-PI * (l * l) as f64 / (2.0 * eps)).exp()).sum();
        let expected = (2.0 * eps).powf(-1.5) * one.powi(3);
        assert!((v.re - expected).abs() < 1e-13 && v.im.abs() < 1e-13);
    }

    #[test]
    fn poisson_matches_direct_examples() {
        let p = HeatParams::on_arc(1.0, 0, 1, 0.0).unwrap();
        let a = heat_multiplier_poisson(&p, &[0.0; 5], 1e-17).unwrap().value;
        let b = heat_multiplier_direct(&p, &[0.0; 5], 1e-15).unwrap().value;
        assert!((a - b).norm() < 1e-10);

        let p = HeatParams::on_arc(0.25, 1, 3, 0.0).unwrap();
        let xi = [0.5; 4];
        let a = heat_multiplier_poisson(&p, &xi, 1e-17).unwrap().value;
        let b = heat_multiplier_direct(&p, &xi, 1e-15).unwrap().value;
        assert!((a - b).norm() < 1e-8 * (1.0 + b.norm()), "{a} vs {b}");
    }

    #[test]
    fn rejects_bad_params() {
        assert!(HeatParams::new(0.0, 0.1).is_err());
        let p = HeatParams::new(1.0, 0.1).unwrap();
        assert!(heat_multiplier_poisson(&p, &[0.0], 1e-12).is_err());
        assert!(matches!(
            heat_multiplier_poisson(&HeatParams::on_arc(1.0, 2, 4, 0.0).unwrap(), &[0.0], 1e-12),
            Err(Error::NotCoprime { .. })
        ));
    }
}
