//! Normalized quadratic Gauss sums `G(a/q, l) = q^{-d} sum_n e(( |n|^2 a + n.l ) / q)`.
//!
//! The d-dimensional sum splits into a product of one-dimensional sums, which
//! is the only path used outside of tests.

use std::f64::consts::TAU;

use num_complex::Complex64;
use num_integer::Integer;

use crate::error::{Error, Result};

/// Deviation allowed between the DFT of `G` and `e(|k|^2 a/q)`.
pub const DFT_IDENTITY_TOL: f64 = 1e-12;

/// `e^{2 pi i r / q}` with `r` reduced into `[0, q)` first.
pub fn unit_root(r: i128, q: u64) -> Complex64 {
    let q = q as i128;
    let r = r.rem_euclid(q);
    Complex64::from_polar(1.0, TAU * r as f64 / q as f64)
}

fn check_coprime(a: i64, q: u64) -> Result<()> {
    if q == 0 || (a.unsigned_abs()).gcd(&q) != 1 {
        return Err(Error::NotCoprime { a, q });
    }
    Ok(())
}

pub fn gauss_sum_1d(a: i64, q: u64, l: i64) -> Result<Complex64> {
    check_coprime(a, q)?;
    Ok(gauss_sum_1d_unchecked(a, q, l))
}

fn gauss_sum_1d_unchecked(a: i64, q: u64, l: i64) -> Complex64 {
    let (a, l) = (a as i128, l as i128);
    let sum: Complex64 = (0..q as i128).map(|n| unit_root(n * n * a + n * l, q)).sum();
    sum / q as f64
}

pub fn gauss_sum(a: i64, q: u64, ell: &[i64]) -> Result<Complex64> {
    check_coprime(a, q)?;
    Ok(ell.iter().map(|&l| gauss_sum_1d_unchecked(a, q, l)).product())
}

/// One-dimensional sums for every residue `l mod q`; `G(a/q, l)` is then a
/// product of table lookups.
#[derive(Debug, Clone)]
pub struct GaussTable {
    pub a: i64,
    pub q: u64,
    values: Vec<Complex64>,
}

impl GaussTable {
    pub fn new(a: i64, q: u64) -> Result<Self> {
        check_coprime(a, q)?;
        let values = (0..q as i64).map(|l| gauss_sum_1d_unchecked(a, q, l)).collect();
        Ok(Self { a, q, values })
    }

    pub fn one_dim(&self, l: i64) -> Complex64 {
        self.values[l.rem_euclid(self.q as i64) as usize]
    }

    pub fn eval(&self, ell: &[i64]) -> Complex64 {
        ell.iter().map(|&l| self.one_dim(l)).product()
    }
}

/// `sum_{l in (Z/q)^d} e(k.l/q) G(a/q, l)`, checked against `e(|k|^2 a/q)`.
pub fn gauss_dft(a: i64, q: u64, k: &[i64]) -> Result<Complex64> {
    let table = GaussTable::new(a, q)?;
    let value: Complex64 = k
        .iter()
        .map(|&ki| {
            (0..q as i64)
                .map(|l| unit_root(ki as i128 * l as i128, q) * table.one_dim(l))
                .sum::<Complex64>()
        })
        .product();
    let expected = dft_phase(a, q, k);
    let dev = (value - expected).norm();
    if dev > DFT_IDENTITY_TOL {
        return Err(Error::InvalidInput(format!(
            "Gauss DFT identity violated for a={a}, q={q}, k={k:?}: deviation {dev:e}"
        )));
    }
    Ok(value)
}

/// `e(|k|^2 a / q)` with the exponent reduced exactly.
pub fn dft_phase(a: i64, q: u64, k: &[i64]) -> Complex64 {
    let k2: i128 = k.iter().map(|&x| (x as i128) * (x as i128)).sum();
    unit_root(k2 * a as i128, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use approx::assert_abs_diff_eq;

    fn close(a: Complex64, b: Complex64, tol: f64) {
        assert!((a - b).norm() < tol, "{a} vs {b}");
    }

    #[test]
    fn one_dim_examples() {
        close(gauss_sum_1d(1, 1, 0).unwrap(), Complex64::new(1.0, 0.0), 1e-15);
        close(gauss_sum_1d(1, 2, 0).unwrap(), Complex64::new(0.0, 0.0), 1e-15);
        close(gauss_sum_1d(1, 3, 0).unwrap(), Complex64::new(0.0, 1.0 / 3f64.sqrt()), 1e-15);
        assert!(matches!(gauss_sum_1d(2, 4, 0), Err(Error::NotCoprime { .. })));
    }

    #[test]
    fn multi_dim_examples() {
        close(gauss_sum(1, 1, &[0; 5]).unwrap(), Complex64::new(1.0, 0.0), 1e-15);
        let g = gauss_sum(1, 3, &[0, 0]).unwrap();
        close(g, Complex64::new(-1.0 / 3.0, 0.0), 1e-15);
        close(g, oracle::gauss_sum_direct(1, 3, &[0, 0]), 1e-14);
        let g = gauss_sum(2, 3, &[1, 0, 0, 0, 0]).unwrap();
        assert_abs_diff_eq!(g.norm(), 3f64.powf(-2.5), epsilon = 1e-14);
        close(g, oracle::gauss_sum_direct(2, 3, &[1, 0, 0, 0, 0]), 1e-14);
    }

    #[test]
    fn factorization_matches_direct_sum() {
        for q in 1..=12u64 {
            for a in 0..q as i64 {
                if (a as u64).gcd(&q) != 1 {
                    continue;
                }
                for d in 1..=3usize {
                    for seed in 0..3i64 {
                        let ell: Vec<i64> = (0..d as i64).map(|i| (seed * 7 + i * 3 - 4) % 13).collect();
                        let f = gauss_sum(a, q, &ell).unwrap();
                        close(f, oracle::gauss_sum_direct(a, q, &ell), 1e-13);
                    }
                }
            }
        }
    }

    #[test]
    fn magnitude_bounds() {
        for q in 1..=200u64 {
            let bound = (2.0 / q as f64).sqrt() * (1.0 + 1e-12);
            for a in [1i64, (q as i64 - 1).max(1)] {
                if (a as u64).gcd(&q) != 1 {
                    continue;
                }
                for l in [0i64, 1, 2, 5] {
                    let m = gauss_sum_1d(a, q, l).unwrap().norm();
                    assert!(m <= bound, "q={q} a={a} l={l}: {m}");
                    if q % 2 == 1 {
                        assert_abs_diff_eq!(m, 1.0 / (q as f64).sqrt(), epsilon = 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn dft_examples() {
        // 4/3 = 1/3 mod 1.
        close(gauss_dft(1, 3, &[2]).unwrap(), Complex64::from_polar(1.0, TAU / 3.0), 1e-13);
        close(gauss_dft(1, 3, &[2]).unwrap(), oracle::gauss_dft_direct(1, 3, &[2]), 1e-13);
        close(gauss_dft(1, 1, &[0, 0]).unwrap(), Complex64::new(1.0, 0.0), 1e-15);
        let v = gauss_dft(3, 7, &[1; 5]).unwrap();
        close(v, Complex64::from_polar(1.0, TAU / 7.0), 1e-12);
        close(v, oracle::gauss_dft_direct(3, 7, &[1; 5]), 1e-11);
    }

    #[test]
    fn periodic_in_shift() {
        let t = GaussTable::new(5, 12).unwrap();
        let g = t.eval(&[1, -2, 7]);
        close(g, t.eval(&[13, 10, -5]), 1e-15);
        close(g, gauss_sum(5, 12, &[25, -14, 31]).unwrap(), 1e-14);
    }
}
