//! Composite Gauss-Legendre quadrature on panels whose widths follow a
//! caller-supplied local scale (typically a quarter of the local oscillation
//! period). Deterministic: the panel layout depends only on the inputs.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct PanelRule {
    pub order: usize,
    pub max_panels: usize,
    nodes: Vec<(f64, f64)>,
}

impl PanelRule {
    pub fn new(order: usize, max_panels: usize) -> Result<Self> {
        let nodes = gauss_quad::legendre::GaussLegendre::new(order)
            .map_err(|_| Error::InvalidInput(format!("Gauss-Legendre order {order} < 2")))?
            .into_node_weight_pairs();
        Ok(Self {
            order,
            max_panels,
            nodes,
        })
    }

    /// Fixed-order rule on a single interval.
    pub fn on_interval<F>(&self, a: f64, b: f64, f: &F) -> Complex64
    where
        F: Fn(f64) -> Complex64,
    {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .map(|&(x, w)| f(mid + half * x) * w)
            .sum::<Complex64>()
            * half
    }

    /// Integrates `f` over `[a, b]`. A panel starting at `t` has width at most
    /// `min(width(t), width(t + width(t)))`, so the scale is respected at both ends.
    pub fn integrate<F, W>(&self, a: f64, b: f64, f: F, width: W) -> Result<Complex64>
    where
        F: Fn(f64) -> Complex64,
        W: Fn(f64) -> f64,
    {
        Ok(self.integrate_counted(a, b, f, width)?.0)
    }

    pub fn integrate_counted<F, W>(&self, a: f64, b: f64, f: F, width: W) -> Result<(Complex64, usize)>
    where
        F: Fn(f64) -> Complex64,
        W: Fn(f64) -> f64,
    {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut t = a;
        let mut panels = 0usize;
        while t < b {
            let h0 = width(t);
            let h = h0.min(width(t + h0)).min(b - t);
            if !(h > 0.0) {
                return Err(Error::InvalidInput(format!("non-positive panel width at t = {t}")));
            }
            let end = if b - t - h < 1e-15 * (1.0 + b.abs()) { b } else { t + h };
            acc += self.on_interval(t, end, &f);
            t = end;
            panels += 1;
            if panels > self.max_panels {
                return Err(Error::Budget {
                    what: "quadrature panels",
                    needed: panels as u128,
                    budget: self.max_panels as u128,
                });
            }
        }
        Ok((acc, panels))
    }
}
