use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exec::{self, Exec};

/// DFT frequencies `j / side`, `j in {0..side-1}^d`, of the torus `(Z/side)^d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrequencyGrid {
    pub dimension: usize,
    pub side: usize,
}

impl FrequencyGrid {
    pub fn new(dimension: usize, side: usize) -> Result<Self> {
        if dimension == 0 || side == 0 {
            return Err(Error::InvalidInput("grid dimension and side must be positive".into()));
        }
        side.checked_pow(dimension as u32)
            .ok_or(Error::Overflow("grid size"))?;
        Ok(Self { dimension, side })
    }

    pub fn len(&self) -> usize {
        self.side.pow(self.dimension as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Row-major multi-index of a flat index; the last coordinate varies fastest.
    pub fn index_of(&self, mut flat: usize, out: &mut [usize]) {
        for slot in out.iter_mut().rev() {
            *slot = flat % self.side;
            flat /= self.side;
        }
    }

    /// Flat index of an integer site, reduced mod `side`.
    pub fn flat_of(&self, site: &[i64]) -> usize {
        let l = self.side as i64;
        site.iter().fold(0usize, |acc, &x| acc * self.side + x.rem_euclid(l) as usize)
    }

    pub fn frequency(&self, flat: usize) -> Vec<f64> {
        let mut j = vec![0usize; self.dimension];
        self.index_of(flat, &mut j);
        j.iter().map(|&x| x as f64 / self.side as f64).collect()
    }

    /// Flat index of `-j mod side`.
    pub fn negate(&self, flat: usize) -> usize {
        let mut j = vec![0usize; self.dimension];
        self.index_of(flat, &mut j);
        j.iter()
            .fold(0usize, |acc, &x| acc * self.side + (self.side - x) % self.side)
    }
}

/// Multiplier values on a [`FrequencyGrid`].
#[derive(Debug, Clone)]
pub struct MultiplierField {
    pub grid: FrequencyGrid,
    pub values: Vec<Complex64>,
    pub label: String,
}

impl MultiplierField {
    /// Samples `f(xi)` at every grid frequency.
    pub fn sample<F>(grid: FrequencyGrid, label: impl Into<String>, exec: Exec, f: F) -> Self
    where
        F: Fn(&[f64]) -> Complex64 + Sync + Send,
    {
        let values = exec::map_indexed(exec, grid.len(), |i| f(&grid.frequency(i)));
        Self {
            grid,
            values,
            label: label.into(),
        }
    }

    pub fn constant(grid: FrequencyGrid, value: Complex64) -> Self {
        Self {
            grid,
            values: vec![value; grid.len()],
            label: format!("constant {value}"),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    /// `max_j |values(-j) - conj(values(j))|`.
    pub fn conjugate_symmetry_defect(&self) -> f64 {
        (0..self.values.len())
            .map(|i| (self.values[self.grid.negate(i)] - self.values[i].conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_imag(&self) -> f64 {
        self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indexing_round_trip() {
        let g = FrequencyGrid::new(3, 5).unwrap();
        let mut j = [0usize; 3];
        g.index_of(2 * 25 + 3 * 5 + 4, &mut j);
        assert_eq!(j, [2, 3, 4]);
        assert_eq!(g.flat_of(&[2, 3, 4]), 2 * 25 + 3 * 5 + 4);
        assert_eq!(g.flat_of(&[-3, 8, -1]), g.flat_of(&[2, 3, 4]));
        assert_eq!(g.frequency(g.flat_of(&[1, 0, 4])), vec![0.2, 0.0, 0.8]);
        assert_eq!(g.negate(g.flat_of(&[1, 0, 4])), g.flat_of(&[4, 0, 1]));
    }
}
