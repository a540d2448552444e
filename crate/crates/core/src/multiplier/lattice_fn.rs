//! Scalar- and matrix-valued functions on the cyclic torus `(Z/L)^d`, Fourier
//! multiplier application, and direct spherical averages.

use std::sync::Arc;

use log::warn;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::grid::{FrequencyGrid, MultiplierField};
use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::lattice::SphereShell;

/// Default cap on `n^2 * L^d` stored complex values.
pub const DEFAULT_SITE_BUDGET: u128 = 1 << 27;

/// A function on `(Z/L)^d` with `n x n` complex matrix values (`n = 1` for
/// scalars). Entry `(i, j)` of every site is stored in its own plane.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeFunction {
    pub grid: FrequencyGrid,
    pub matrix_dim: usize,
    planes: Vec<Vec<Complex64>>,
}

impl LatticeFunction {
    pub fn zeros(dimension: usize, side: usize, matrix_dim: usize) -> Result<Self> {
        Self::zeros_with_budget(dimension, side, matrix_dim, DEFAULT_SITE_BUDGET)
    }

    pub fn zeros_with_budget(dimension: usize, side: usize, matrix_dim: usize, budget: u128) -> Result<Self> {
        let grid = FrequencyGrid::new(dimension, side)?;
        if matrix_dim == 0 {
            return Err(Error::InvalidInput("matrix dimension must be positive".into()));
        }
        let needed = grid.len() as u128 * (matrix_dim * matrix_dim) as u128;
        if needed > budget {
            return Err(Error::Budget {
                what: "lattice function values",
                needed,
                budget,
            });
        }
        Ok(Self {
            grid,
            matrix_dim,
            planes: vec![vec![Complex64::new(0.0, 0.0); grid.len()]; matrix_dim * matrix_dim],
        })
    }

    pub fn scalar_from_fn<F>(dimension: usize, side: usize, f: F) -> Result<Self>
    where
        F: Fn(&[i64]) -> Complex64,
    {
        let mut out = Self::zeros(dimension, side, 1)?;
        let mut j = vec![0usize; dimension];
        for flat in 0..out.grid.len() {
            out.grid.index_of(flat, &mut j);
            let site: Vec<i64> = j.iter().map(|&x| x as i64).collect();
            out.planes[0][flat] = f(&site);
        }
        Ok(out)
    }

    pub fn dimension(&self) -> usize {
        self.grid.dimension
    }

    pub fn side(&self) -> usize {
        self.grid.side
    }

    pub fn plane(&self, i: usize, j: usize) -> &[Complex64] {
        &self.planes[i * self.matrix_dim + j]
    }

    pub fn plane_mut(&mut self, i: usize, j: usize) -> &mut [Complex64] {
        &mut self.planes[i * self.matrix_dim + j]
    }

    pub fn get(&self, site: &[i64], i: usize, j: usize) -> Complex64 {
        self.plane(i, j)[self.grid.flat_of(site)]
    }

    pub fn set(&mut self, site: &[i64], i: usize, j: usize, v: Complex64) {
        let flat = self.grid.flat_of(site);
        self.plane_mut(i, j)[flat] = v;
    }

    /// Row-major `n x n` value at a site.
    pub fn matrix_at(&self, site: &[i64]) -> Vec<Complex64> {
        let flat = self.grid.flat_of(site);
        self.planes.iter().map(|p| p[flat]).collect()
    }

    pub fn set_matrix(&mut self, site: &[i64], m: &[Complex64]) {
        let flat = self.grid.flat_of(site);
        for (p, &v) in self.planes.iter_mut().zip(m) {
            p[flat] = v;
        }
    }

    /// Entry `(i, j)` as a scalar lattice function.
    pub fn entry(&self, i: usize, j: usize) -> LatticeFunction {
        LatticeFunction {
            grid: self.grid,
            matrix_dim: 1,
            planes: vec![self.plane(i, j).to_vec()],
        }
    }

    /// Cyclic shift: `out(n) = self(n - by)`.
    pub fn translate(&self, by: &[i64]) -> LatticeFunction {
        let mut out = self.clone();
        let mut j = vec![0usize; self.dimension()];
        for flat in 0..self.grid.len() {
            self.grid.index_of(flat, &mut j);
            let src: Vec<i64> = j.iter().zip(by).map(|(&x, &b)| x as i64 - b).collect();
            let s = self.grid.flat_of(&src);
            for (po, pi) in out.planes.iter_mut().zip(&self.planes) {
                po[flat] = pi[s];
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &LatticeFunction) -> f64 {
        self.planes
            .iter()
            .zip(&other.planes)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).norm()))
            .fold(0.0, f64::max)
    }

    pub fn scale(&mut self, c: Complex64) {
        for p in &mut self.planes {
            for v in p.iter_mut() {
                *v *= c;
            }
        }
    }

    pub fn add_assign(&mut self, other: &LatticeFunction) {
        for (a, b) in self.planes.iter_mut().zip(&other.planes) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
    }
}

/// In-place d-dimensional DFT of a row-major `side^d` array.
///
/// Each pass transforms the contiguous last axis and then cyclically rotates
/// the axes with a 2-D transpose, so after `d` passes the layout is restored.
pub fn fft_nd(data: &mut [Complex64], grid: FrequencyGrid, inverse: bool, exec: Exec) {
    let l = grid.side;
    let total = grid.len();
    debug_assert_eq!(data.len(), total);
    if total == 1 {
        return;
    }
    let mut planner = FftPlanner::new();
    let fft: Arc<dyn Fft<f64>> = if inverse {
        planner.plan_fft_inverse(l)
    } else {
        planner.plan_fft_forward(l)
    };
    let rows = total / l;
    let rows_per_chunk = (4096 / l).max(1);
    let mut scratch = vec![Complex64::new(0.0, 0.0); total];
    for _ in 0..grid.dimension {
        exec::for_each_chunk_mut(exec, data, l * rows_per_chunk, |_, block| fft.process(block));
        // data is (rows x l); write its transpose (l x rows) into scratch.
        let src: &[Complex64] = data;
        exec::for_each_chunk_mut(exec, &mut scratch, rows, |c, out_row| {
            for (r, v) in out_row.iter_mut().enumerate() {
                *v = src[r * l + c];
            }
        });
        data.copy_from_slice(&scratch);
    }
    if inverse {
        let norm = 1.0 / total as f64;
        exec::for_each_chunk_mut(exec, data, 4096, |_, c| c.iter_mut().for_each(|v| *v *= norm));
    }
}

/// `DFT^{-1}(m . DFT(f))`, entrywise for matrix-valued `f`. The multiplier
/// acts on `f^(xi) = sum_n f(n) e^{-2 pi i n.xi}`.
pub fn apply_multiplier(field: &MultiplierField, f: &LatticeFunction, exec: Exec) -> Result<LatticeFunction> {
    if field.grid != f.grid {
        return Err(Error::DimensionMismatch(format!(
            "multiplier grid {:?} vs function torus {:?}",
            field.grid, f.grid
        )));
    }
    let mut out = f.clone();
    for plane in &mut out.planes {
        fft_nd(plane, f.grid, false, exec);
        let vals = &field.values;
        exec::for_each_chunk_mut(exec, plane, 4096, |c, chunk| {
            let base = c * 4096;
            for (i, v) in chunk.iter_mut().enumerate() {
                *v *= vals[base + i];
            }
        });
        fft_nd(plane, f.grid, true, exec);
    }
    Ok(out)
}

/// True when the shell reaches half the torus side, so cyclic wrap-around
/// can mix opposite sides of a compactly supported input.
pub fn shell_wraps(shell: &SphereShell, side: usize) -> bool {
    2 * shell.coords().iter().map(|x| x.unsigned_abs()).max().unwrap_or(0) as usize >= side
}

/// `M f(n) = r^{-1} sum_{m in shell} f(n - m)` on the torus, by direct summation.
pub fn spherical_convolve(shell: &SphereShell, f: &LatticeFunction, exec: Exec) -> Result<LatticeFunction> {
    check_shell(shell, f)?;
    let grid = f.grid;
    let d = grid.dimension;
    let l = grid.side as i64;
    let inv = 1.0 / shell.len() as f64;
    // Flat offsets of -m, applied to the multi-index with wrap-around.
    let points: Vec<Vec<i64>> = shell.points().map(|p| p.to_vec()).collect();
    let mut out = f.clone();
    for (po, pi) in out.planes.iter_mut().zip(&f.planes) {
        exec::for_each_chunk_mut(exec, po, grid.side, |row, chunk| {
            let mut j = vec![0usize; d];
            grid.index_of(row * grid.side, &mut j);
            let mut src = vec![0i64; d];
            for (last, v) in chunk.iter_mut().enumerate() {
                j[d - 1] = last;
                let mut acc = Complex64::new(0.0, 0.0);
                for m in &points {
                    for i in 0..d {
                        src[i] = (j[i] as i64 - m[i]).rem_euclid(l);
                    }
                    acc += pi[grid.flat_of(&src)];
                }
                *v = acc * inv;
            }
        });
    }
    Ok(out)
}

/// The spherical average evaluated only at the listed sites; one row-major
/// `n x n` matrix per site.
pub fn spherical_convolve_at(shell: &SphereShell, f: &LatticeFunction, sites: &[Vec<i64>], exec: Exec) -> Result<Vec<Vec<Complex64>>> {
    check_shell(shell, f)?;
    let inv = 1.0 / shell.len() as f64;
    let nn = f.matrix_dim * f.matrix_dim;
    Ok(exec::map_slice(exec, sites, |n| {
        let mut acc = vec![Complex64::new(0.0, 0.0); nn];
        let mut src = vec![0i64; n.len()];
        for m in shell.points() {
            for i in 0..n.len() {
                src[i] = n[i] - m[i];
            }
            let flat = f.grid.flat_of(&src);
            for (a, p) in acc.iter_mut().zip(&f.planes) {
                *a += p[flat];
            }
        }
        acc.iter().map(|v| v * inv).collect()
    }))
}

fn check_shell(shell: &SphereShell, f: &LatticeFunction) -> Result<()> {
    if shell.dimension != f.dimension() {
        return Err(Error::DimensionMismatch(format!(
            "shell in Z^{} vs function on Z^{}",
            shell.dimension,
            f.dimension()
        )));
    }
    if shell.is_empty() {
        return Err(Error::InvalidInput(format!("empty shell at k = {}", shell.radius_sq)));
    }
    if shell_wraps(shell, f.side()) {
        warn!(
            "shell of radius^2 {} wraps around the torus of side {}; cyclic semantics apply",
            shell.radius_sq,
            f.side()
        );
    }
    Ok(())
}
