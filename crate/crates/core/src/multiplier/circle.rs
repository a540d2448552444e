//! The spherical multiplier `m_lambda`, its circle-method pieces
//! `m_lambda^{a/q}` over the Farey arcs, and the approximants `n_lambda^{a/q}`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use num_integer::Integer;

use super::cutoff::{cutoff, CutoffKind, CutoffSpec};
use super::heat::heat_multiplier_poisson_with;
use super::sphere::JLambda;
use crate::error::{Error, Result};
use crate::farey::MajorArc;
use crate::gauss::{unit_root, GaussTable};
use crate::lattice::{rep_counts, SphereShell};
use crate::quad::PanelRule;

/// Envelope cutoff used when summing Poisson images.
const POISSON_TOL: f64 = 1e-18;

/// `m_lambda(xi) = r^{-1} sum_{|n|^2 = k} e^{2 pi i n.xi}`.
pub fn exact_multiplier(shell: &SphereShell, xi: &[f64]) -> Result<Complex64> {
    if shell.is_empty() {
        return Err(Error::InvalidInput(format!("empty shell at k = {}", shell.radius_sq)));
    }
    if xi.len() != shell.dimension {
        return Err(Error::DimensionMismatch(format!("{}-vector for a shell in Z^{}", xi.len(), shell.dimension)));
    }
    let sum: Complex64 = shell
        .points()
        .map(|p| {
            let dot: f64 = p.iter().zip(xi).map(|(&n, &x)| (n as f64 * x).rem_euclid(1.0)).sum();
            Complex64::from_polar(1.0, TAU * dot)
        })
        .sum();
    Ok(sum / shell.len() as f64)
}

/// Quadrature settings for the arc integrals.
#[derive(Debug, Clone)]
pub struct ArcQuadrature {
    pub rule: PanelRule,
}

impl ArcQuadrature {
    pub fn new(order: usize, max_panels: usize) -> Result<Self> {
        Ok(Self {
            rule: PanelRule::new(order, max_panels)?,
        })
    }
}

impl Default for ArcQuadrature {
    fn default() -> Self {
        Self::new(16, 1_000_000).expect("valid default rule")
    }
}

/// Highest `|n|^2` whose weight `e^{-2 pi eps |n|^2}` still exceeds `1e-17`.
fn heat_bandwidth(eps: f64) -> f64 {
    (17.0 * std::f64::consts::LN_10) / (TAU * eps)
}

/// Precomputed pieces for evaluating `m_lambda^{a/q}` at many frequencies.
#[derive(Debug, Clone)]
pub struct ArcMultiplier {
    pub k: u64,
    pub arc: MajorArc,
    pub epsilon: f64,
    rep_count: u64,
    table: GaussTable,
    quad: ArcQuadrature,
}

impl ArcMultiplier {
    pub fn new(k: u64, d: usize, arc: &MajorArc, epsilon: f64, quad: &ArcQuadrature) -> Result<Self> {
        let rep_count = rep_counts(d, k)?.counts[k as usize];
        if rep_count == 0 {
            return Err(Error::InvalidInput(format!("r_{d}({k}) = 0")));
        }
        Ok(Self {
            k,
            arc: arc.clone(),
            epsilon,
            rep_count,
            table: GaussTable::new(arc.center.a as i64, arc.center.q)?,
            quad: quad.clone(),
        })
    }

    /// `e^{2 pi eps k} / r * int_{I(a/q)} e^{-2 pi i k s} K^_s(xi) ds` with
    /// `K^` in its Poisson form. Panels cover at most a quarter period of the
    /// fastest oscillation present, `k + ` the heat bandwidth.
    pub fn eval(&self, xi: &[f64]) -> Result<Complex64> {
        let (lo, hi) = self.arc.t_range();
        let lo = *lo.numer() as f64 / *lo.denom() as f64;
        let hi = *hi.numer() as f64 / *hi.denom() as f64;
        let kf = self.k as f64;
        let eps = self.epsilon;
        let center_phase = unit_root(-(self.k as i128) * self.arc.center.a as i128, self.arc.center.q);
        let integrand = |t: f64| {
            let phase = Complex64::from_polar(1.0, -TAU * (kf * t).rem_euclid(1.0));
            phase * heat_multiplier_poisson_with(&self.table, eps, t, xi, POISSON_TOL).value
        };
        let width = 0.25 / (kf + heat_bandwidth(eps));
        let raw = self.quad.rule.integrate(lo, hi, integrand, |_| width)?;
        Ok(center_phase * raw * (TAU * eps * kf).exp() / self.rep_count as f64)
    }
}

pub fn arc_multiplier(k: u64, arc: &MajorArc, xi: &[f64], epsilon: f64, quad: &ArcQuadrature) -> Result<Complex64> {
    ArcMultiplier::new(k, xi.len(), arc, epsilon, quad)?.eval(xi)
}

/// One reduced residue `a/q` with its Gauss table, for the approximants.
#[derive(Debug, Clone)]
struct Residue {
    q: u64,
    phase: Complex64,
    table: GaussTable,
}

/// `n_lambda^{a/q}` and sums of them over all reduced `a/q` with `q <= q_max`.
#[derive(Debug, Clone)]
pub struct Approximant {
    pub j: JLambda,
    residues: Vec<Residue>,
    pub q_max: u64,
}

/// Reduced residues `a mod q` with `0 <= a < q`; for `q = 1` only `a = 0`.
pub fn reduced_residues(q: u64) -> impl Iterator<Item = u64> {
    (0..q).filter(move |&a| a.gcd(&q) == 1)
}

impl Approximant {
    pub fn new(d: usize, k: u64, q_max: u64) -> Result<Self> {
        if q_max == 0 {
            return Err(Error::InvalidInput("q_max must be >= 1".into()));
        }
        let j = JLambda::new(d, k)?;
        let mut residues = Vec::new();
        for q in 1..=q_max {
            for a in reduced_residues(q) {
                residues.push(Residue {
                    q,
                    phase: unit_root(-(k as i128) * a as i128, q),
                    table: GaussTable::new(a as i64, q)?,
                });
            }
        }
        Ok(Self { j, residues, q_max })
    }

    fn term(&self, res: &Residue, xi: &[f64]) -> Complex64 {
        let qf = res.q as f64;
        // Only the nearest l/q can fall inside the phi_q support.
        let ell: Vec<i64> = xi.iter().map(|&x| (qf * x).round() as i64).collect();
        let shifted: Vec<f64> = xi.iter().zip(&ell).map(|(&x, &l)| x - l as f64 / qf).collect();
        let phi = cutoff(CutoffSpec { kind: CutoffKind::Phi, q: res.q }, &shifted);
        if phi == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        res.phase * res.table.eval(&ell) * phi * self.j.eval(&shifted)
    }

    /// `n_lambda^{a/q}(xi)` for a single residue.
    pub fn single(&self, a: u64, q: u64, xi: &[f64]) -> Result<Complex64> {
        let res = self
            .residues
            .iter()
            .find(|r| r.q == q && r.table.a == a as i64)
            .ok_or_else(|| Error::InvalidInput(format!("{a}/{q} is not a reduced residue with q <= {}", self.q_max)))?;
        Ok(self.term(res, xi))
    }

    /// `sum_{q <= q_max} sum_{a} n_lambda^{a/q}(xi)`.
    pub fn total(&self, xi: &[f64]) -> Complex64 {
        self.residues.iter().map(|r| self.term(r, xi)).sum()
    }

    /// Bound on `sum_{q > q_max} sum_a |n_lambda^{a/q}|`, from
    /// `phi(q) <= q`, `|G| <= c_q q^{-d/2}` (`c_q = 1` for odd `q`, `2^{d/2}`
    /// for even `q`) and `|sigma^| <= 1`.
    pub fn tail_bound(&self) -> Result<f64> {
        tail_bound(self.j.dimension, self.q_max, self.j.prefactor)
    }
}

/// See [`Approximant::tail_bound`]. Diverges for `d <= 4`.
pub fn tail_bound(d: usize, q_max: u64, j_sup: f64) -> Result<f64> {
    if d <= 4 {
        return Err(Error::InvalidInput(format!("the approximant tail diverges for d = {d}")));
    }
    let expo = 1.0 - d as f64 / 2.0;
    let even = 2f64.powf(d as f64 / 2.0);
    const EXPLICIT: u64 = 200_000;
    let mut sum = 0.0;
    let stop = q_max.max(EXPLICIT);
    for q in q_max + 1..=stop {
        let c = if q % 2 == 0 { even } else { 1.0 };
        sum += c * (q as f64).powf(expo);
    }
    // Integral comparison for the remainder, with the even-q constant throughout.
    sum += even * (stop as f64).powf(expo + 1.0) / (-(expo + 1.0));
    Ok(j_sup * sum)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxTotal {
    pub value: Complex64,
    pub q_max: u64,
    pub tail_bound: f64,
}

/// Largest `q_max` tried when growing toward a tail tolerance.
pub const Q_MAX_BUDGET: u64 = 4096;

/// Sum of approximants over `q <= q_max`. With `tail_tol`, `q_max` is grown
/// (doubling) until the tail bound drops below it.
pub fn approx_total(d: usize, k: u64, xi: &[f64], q_max: u64, tail_tol: Option<f64>) -> Result<ApproxTotal> {
    let j = JLambda::new(d, k)?;
    let mut q = q_max.max(1);
    if let Some(tol) = tail_tol {
        while tail_bound(d, q, j.prefactor)? >= tol {
            q *= 2;
            if q > Q_MAX_BUDGET {
                return Err(Error::Budget {
                    what: "approximant denominators",
                    needed: q as u128,
                    budget: Q_MAX_BUDGET as u128,
                });
            }
        }
    }
    let approx = Approximant::new(d, k, q)?;
    Ok(ApproxTotal {
        value: approx.total(xi),
        q_max: q,
        tail_bound: approx.tail_bound()?,
    })
}

pub fn approx_arc_multiplier(d: usize, k: u64, a: u64, q: u64, xi: &[f64]) -> Result<Complex64> {
    if a.gcd(&q) != 1 {
        return Err(Error::NotCoprime { a: a as i64, q });
    }
    Approximant::new(d, k, q)?.single(a % q, q, xi)
}
