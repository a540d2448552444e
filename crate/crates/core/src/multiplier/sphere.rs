//! Fourier transform of the normalized surface measure on spheres in `R^d`,
//! and the continuous main-term multiplier `J_lambda` built from it.
//!
//! With `z = 2 pi |eta|` and `nu = d/2 - 1`,
//! `sigma^(eta) = Gamma(nu + 1) (z/2)^{-nu} J_nu(z)`. The measure is symmetric,
//! so the transform is real and the sign convention of the exponent is immaterial.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::lattice::rep_counts;
use crate::quad::PanelRule;

/// Below this `z` the normalized power series is used for every dimension.
const SERIES_CUTOFF: f64 = 2.0;

/// `sum_m (-1)^m (z/2)^{2m} Gamma(nu+1) / (m! Gamma(m+nu+1))`.
fn normalized_series(nu: f64, z: f64) -> f64 {
    let x = 0.25 * z * z;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut m = 0.0;
    loop {
        m += 1.0;
        term *= -x / (m * (m + nu));
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1e-300) && m > 2.0 {
            return sum;
        }
        if m > 500.0 {
            return sum;
        }
    }
}

/// Spherical Bessel `j_l(z)` by upward recurrence from `j_0, j_1`; accurate for `z > l`.
fn spherical_bessel_upward(l: usize, z: f64) -> f64 {
    let (s, c) = z.sin_cos();
    let j0 = s / z;
    if l == 0 {
        return j0;
    }
    let mut prev = j0;
    let mut cur = s / (z * z) - c / z;
    for n in 1..l {
        let next = (2 * n + 1) as f64 / z * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `J_n(z)` for integer `n` from Bessel's integral, by the periodic trapezoid rule.
fn bessel_j_integer(n: usize, z: f64) -> f64 {
    let m = (z.abs() + n as f64 + 64.0).ceil() as usize * 2;
    let h = TAU / m as f64;
    (0..m)
        .map(|j| {
            let tau = j as f64 * h;
            (n as f64 * tau - z * tau.sin()).cos()
        })
        .sum::<f64>()
        / m as f64
}

fn double_factorial_odd(l: usize) -> f64 {
    (0..=l).map(|i| (2 * i + 1) as f64).product()
}

/// `sigma^` of the unit sphere in `R^d` at a frequency of norm `r`.
pub fn sigma_hat_radial(d: usize, r: f64) -> f64 {
    let z = TAU * r.abs();
    let nu = d as f64 / 2.0 - 1.0;
    if z < SERIES_CUTOFF {
        return normalized_series(nu, z);
    }
    if d % 2 == 1 {
        let l = (d - 3) / 2;
        if d == 5 {
            let (s, c) = z.sin_cos();
            return 3.0 * (s - z * c) / (z * z * z);
        }
        if z < l as f64 + 2.0 {
            return normalized_series(nu, z);
        }
        double_factorial_odd(l) * spherical_bessel_upward(l, z) / z.powi(l as i32)
    } else {
        let n = d / 2 - 1;
        let fact: f64 = (1..=n).map(|i| i as f64).product();
        fact * (2.0 / z).powi(n as i32) * bessel_j_integer(n, z)
    }
}

fn norm(xi: &[f64]) -> f64 {
    xi.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// `sigma^_lambda(xi) = sigma^(lambda xi)` for the sphere of radius `lambda`.
pub fn sphere_ft(d: usize, lambda: f64, xi: &[f64]) -> Result<f64> {
    if d < 2 || xi.len() != d {
        return Err(Error::InvalidInput(format!("sphere_ft needs d >= 2 and a {d}-vector")));
    }
    if !(lambda > 0.0) {
        return Err(Error::InvalidInput(format!("radius must be positive, got {lambda}")));
    }
    Ok(sigma_hat_radial(d, lambda * norm(xi)))
}

/// `c_d = pi^{d/2} / Gamma(d/2)`.
pub fn c_d(d: usize) -> f64 {
    PI.powf(d as f64 / 2.0) / gamma(d as f64 / 2.0)
}

/// `J_lambda(xi) = c_d lambda^{d-2} sigma^_lambda(xi) / r_d(lambda^2)` with `lambda^2 = k`.
#[derive(Debug, Clone, Copy)]
pub struct JLambda {
    pub dimension: usize,
    pub k: u64,
    pub rep_count: u64,
    /// `c_d lambda^{d-2} / r_d(k)`.
    pub prefactor: f64,
}

impl JLambda {
    pub fn new(d: usize, k: u64) -> Result<Self> {
        if d < 2 || k == 0 {
            return Err(Error::InvalidInput("J_lambda needs d >= 2 and k >= 1".into()));
        }
        let r = rep_counts(d, k)?.counts[k as usize];
        if r == 0 {
            return Err(Error::InvalidInput(format!("r_{d}({k}) = 0")));
        }
        let lambda = (k as f64).sqrt();
        Ok(Self {
            dimension: d,
            k,
            rep_count: r,
            prefactor: c_d(d) * lambda.powi(d as i32 - 2) / r as f64,
        })
    }

    pub fn lambda(&self) -> f64 {
        (self.k as f64).sqrt()
    }

    pub fn eval(&self, xi: &[f64]) -> f64 {
        self.prefactor * sigma_hat_radial(self.dimension, self.lambda() * norm(xi))
    }

    pub fn eval_radial(&self, r: f64) -> f64 {
        self.prefactor * sigma_hat_radial(self.dimension, self.lambda() * r)
    }
}

pub fn j_lambda(d: usize, k: u64, xi: &[f64]) -> Result<f64> {
    Ok(JLambda::new(d, k)?.eval(xi))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FullLineJ {
    pub value: Complex64,
    /// Analytic bound on the discarded `|t| > T` tails.
    pub tail_bound: f64,
    pub panels: usize,
}

/// `e^{2 pi eps k} / r_d(k) * int_{-T}^{T} e^{-2 pi i k t} (2(eps - i t))^{-d/2} e^{-pi |xi|^2 / (2(eps - i t))} dt`.
///
/// Panels span at most a quarter of the local oscillation period of the
/// integrand and a quarter of `eps + |t|` near the peak at the origin.
pub fn j_lambda_full_line(d: usize, k: u64, xi: &[f64], eps: f64, cutoff_t: f64, rule: &PanelRule) -> Result<FullLineJ> {
    if d < 3 {
        return Err(Error::InvalidInput("the full-line integral converges only for d >= 3".into()));
    }
    if !(eps > 0.0 && cutoff_t > 0.0) {
        return Err(Error::InvalidInput("eps and T must be positive".into()));
    }
    let jl = JLambda::new(d, k)?;
    let kf = k as f64;
    let xi2: f64 = xi.iter().map(|x| x * x).sum();
    let half_d = d as f64 / 2.0;
    let integrand = |t: f64| {
        let w = Complex64::new(eps, -t);
        let phase = Complex64::from_polar(1.0, -TAU * (kf * t).rem_euclid(1.0));
        phase * (2.0 * w).powf(-half_d) * (-PI * xi2 / (2.0 * w)).exp()
    };
    let width = |t: f64| {
        let omega = TAU * kf + PI * xi2 / (2.0 * (eps * eps + t * t)) + half_d / (eps + t.abs());
        (0.5 * PI / omega).min(0.25 * (eps + t.abs()))
    };
    let (raw, panels) = rule.integrate_counted(-cutoff_t, cutoff_t, integrand, width)?;
    let scale = (TAU * eps * kf).exp() / jl.rep_count as f64;
    let tail = scale * 2f64.powf(1.0 - half_d) * cutoff_t.powf(1.0 - half_d) / (half_d - 1.0);
    Ok(FullLineJ {
        value: raw * scale,
        tail_bound: tail,
        panels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(sphere_ft(5, 1.0, &[0.0; 5]).unwrap(), 1.0);
        let v = sphere_ft(5, 1.0, &[0.6, 0.8, 0.0, 0.0, 0.0]).unwrap();
        assert!((v + 3.0 / (4.0 * PI * PI)).abs() < 1e-14);
        assert!((v + 0.075_991).abs() < 1e-6);
        let v3 = sphere_ft(3, 1.0, &[0.5, 0.0, 0.0]).unwrap();
        assert!(v3.abs() < 1e-15);
        assert!(sphere_ft(5, -1.0, &[0.0; 5]).is_err());
    }

    #[test]
    fn series_and_closed_forms_agree_at_the_switch() {
        for d in 2..=9 {
            let nu = d as f64 / 2.0 - 1.0;
            for z in [1.9, 2.0, 2.1, 3.0, 4.5] {
                let r = z / TAU;
                let s = normalized_series(nu, z);
                let c = sigma_hat_radial(d, r);
                assert!((s - c).abs() < 1e-12, "d={d} z={z}: {s} vs {c}");
            }
        }
    }

    #[test]
    fn three_dim_closed_form() {
        for r in [0.05, 0.3, 1.7, 4.2] {
            let z = TAU * r;
            assert!((sigma_hat_radial(3, r) - z.sin() / z).abs() < 1e-13);
        }
    }

    #[test]
    fn two_dim_is_bessel_j0() {
        // J_0(5) = -0.17759677131433830...
        assert!((sigma_hat_radial(2, 5.0 / TAU) + 0.177_596_771_314_338_3).abs() < 1e-13);
    }

    #[test]
    fn c5_and_j_lambda_at_origin() {
        let c5 = c_d(5);
        assert!((c5 - 4.0 / 3.0 * PI * PI).abs() < 1e-12);
        assert!((c5 - 13.159_47).abs() < 1e-5);
        let j = j_lambda(5, 1, &[0.0; 5]).unwrap();
        assert!((j - c5 / 10.0).abs() < 1e-14);
        assert!((j - 1.315_947).abs() < 1e-6);
    }
}
