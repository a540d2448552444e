//! Scale studies: the normalized heat-multiplier envelope over Farey arcs and
//! the decay of `sup |m_lambda - N_lambda|` with the Farey order.

use num_complex::Complex64;

use super::circle::{exact_multiplier, Approximant};
use super::heat::heat_multiplier_poisson_with;
use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::farey::{farey_sequence, major_arcs};
use crate::gauss::GaussTable;
use crate::lattice::sphere_shell_with;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeRow {
    pub lambda: u64,
    pub a: u64,
    pub q: u64,
    pub t: f64,
    /// `q^{d/2} (eps + |t|)^{d/2} sup_xi |K^(xi)|` with `eps = Lambda^{-2}`.
    pub normalized: f64,
}

/// Normalized sup of the heat multiplier at `t_samples` points of every arc
/// of `F_Lambda`. The multiplier is a product of one-dimensional factors, so
/// its sup over the product grid `(j / side)^d` is the `d`-th power of the
/// one-dimensional sup; the points `l / q` are added to the grid.
pub fn envelope_rows(lambda: u64, d: usize, t_samples: usize, side: usize, exec: Exec) -> Result<Vec<EnvelopeRow>> {
    if lambda == 0 || t_samples < 2 || side == 0 {
        return Err(Error::InvalidInput("need Lambda >= 1, t_samples >= 2, side >= 1".into()));
    }
    let eps = 1.0 / (lambda * lambda) as f64;
    let arcs = major_arcs(&farey_sequence(lambda)?);
    let mut jobs = Vec::new();
    for arc in &arcs {
        let (lo, hi) = arc.t_range();
        let lo = *lo.numer() as f64 / *lo.denom() as f64;
        let hi = *hi.numer() as f64 / *hi.denom() as f64;
        for i in 0..t_samples {
            // Open endpoints: the right end of each arc belongs to the next one.
            let t = lo + (hi - lo) * i as f64 / (t_samples - 1) as f64;
            let t = if i + 1 == t_samples && !arc.closed_right { hi - 1e-12 * (hi - lo) } else { t };
            jobs.push((arc.center.a, arc.center.q, t));
        }
    }
    let rows = exec::map_slice(exec, &jobs, |&(a, q, t)| -> Result<EnvelopeRow> {
        let table = GaussTable::new(a as i64, q)?;
        let mut xs: Vec<f64> = (0..side).map(|j| j as f64 / side as f64).collect();
        xs.extend((0..q).map(|l| l as f64 / q as f64));
        let sup1 = xs
            .iter()
            .map(|&x| heat_multiplier_poisson_with(&table, eps, t, &[x], 1e-18).value.norm())
            .fold(0.0, f64::max);
        let normalized = ((q as f64) * (eps + t.abs())).sqrt() * sup1;
        Ok(EnvelopeRow {
            lambda,
            a,
            q,
            t,
            normalized: normalized.powi(d as i32),
        })
    });
    rows.into_iter().collect()
}

pub fn envelope_constant(rows: &[EnvelopeRow]) -> f64 {
    rows.iter().map(|r| r.normalized).fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayRow {
    pub lambda: u64,
    pub k: u64,
    pub q_max: u64,
    pub side: usize,
    pub sup_diff: f64,
    /// `sup_diff * Lambda^{d/2 - 2}`.
    pub scaled: f64,
    pub argmax: [f64; 5],
}

/// Grid points `j / side` in `[0, 1/2]^d` with nondecreasing coordinates.
/// Both multipliers are invariant under coordinate permutations, sign changes
/// and integer shifts, so these represent the whole grid.
pub fn fundamental_domain(d: usize, side: usize) -> Vec<Vec<f64>> {
    let top = side / 2;
    let mut out = Vec::new();
    let mut cur = vec![0usize; d];
    loop {
        out.push(cur.iter().map(|&j| j as f64 / side as f64).collect());
        // Next nondecreasing tuple.
        let mut i = d;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < top {
                cur[i] += 1;
                let v = cur[i];
                for c in cur.iter_mut().skip(i + 1) {
                    *c = v;
                }
                break;
            }
        }
    }
}

/// `sup |m_lambda - N_lambda|` over the grid with `lambda = Lambda`, `eps = Lambda^{-2}`
/// and `q_max = Lambda`.
pub fn decay_row(lambda: u64, d: usize, side: usize, exec: Exec) -> Result<DecayRow> {
    if d != 5 {
        return Err(Error::InvalidInput("the decay study is set up for d = 5".into()));
    }
    let k = lambda * lambda;
    let shell = sphere_shell_with(d, k, crate::lattice::DEFAULT_POINT_BUDGET, exec)?;
    let approx = Approximant::new(d, k, lambda)?;
    let points = fundamental_domain(d, side);
    let diffs = exec::map_slice(exec, &points, |xi| -> Result<f64> {
        let m = exact_multiplier(&shell, xi)?;
        let n: Complex64 = approx.total(xi);
        Ok((m - n).norm())
    });
    let mut sup = 0.0;
    let mut argmax = [0.0; 5];
    for (xi, v) in points.iter().zip(diffs) {
        let v = v?;
        if v > sup {
            sup = v;
            argmax.copy_from_slice(xi);
        }
    }
    Ok(DecayRow {
        lambda,
        k,
        q_max: lambda,
        side,
        sup_diff: sup,
        scaled: sup * (lambda as f64).powf(d as f64 / 2.0 - 2.0),
        argmax,
    })
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fundamental_domain_size() {
        // Multisets of size 5 from 13 values.
        assert_eq!(fundamental_domain(5, 24).len(), 6188);
        assert_eq!(fundamental_domain(2, 4).len(), 6);
    }

    #[test]
    fn slope_of_power_law() {
        let x = [2.0, 3.0, 4.0, 8.0];
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powf(-0.5)).collect();
        assert!((loglog_slope(&x, &y) + 0.5).abs() < 1e-12);
    }

    #[test]
    fn envelope_is_finite_and_positive() {
        let rows = envelope_rows(2, 5, 5, 32, Exec::default()).unwrap();
        assert_eq!(rows.len(), 3 * 5);
        let c = envelope_constant(&rows);
        assert!(c.is_finite() && c > 0.0);
    }
}
