//! Sums of squares on `Z^d`: representation counts and sphere shells.

use num_integer::Roots;

use crate::error::{Error, Result};
use crate::exec::{self, Exec};

/// Default cap on the number of points a single shell may hold.
pub const DEFAULT_POINT_BUDGET: u64 = 20_000_000;

/// `counts[k]` = number of ordered, signed ways to write `k` as a sum of `d` squares.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepCountTable {
    pub dimension: usize,
    pub counts: Vec<u64>,
}

impl RepCountTable {
    pub fn max_k(&self) -> u64 {
        (self.counts.len() - 1) as u64
    }

    pub fn get(&self, k: u64) -> Option<u64> {
        self.counts.get(k as usize).copied()
    }
}

/// `r_1(m)`: 1 at 0, 2 at positive squares, 0 elsewhere.
fn one_dim_counts(max_k: usize) -> Vec<u64> {
    let mut r1 = vec![0u64; max_k + 1];
    r1[0] = 1;
    let mut j = 1usize;
    while j * j <= max_k {
        r1[j * j] = 2;
        j += 1;
    }
    r1
}

/// Builds `r_d(0..=max_k)` by convolving the one-dimensional table `d` times.
pub fn rep_counts(d: usize, max_k: u64) -> Result<RepCountTable> {
    if d == 0 {
        return Err(Error::InvalidInput("dimension must be positive".into()));
    }
    let kmax = usize::try_from(max_k).map_err(|_| Error::Overflow("table length"))?;
    let r1 = one_dim_counts(kmax);
    let mut counts = r1.clone();
    for _ in 1..d {
        let mut next = vec![0u64; kmax + 1];
        for (k, slot) in next.iter_mut().enumerate() {
            let mut acc = 0u64;
            let mut j = 0usize;
            while j * j <= k {
                let term = counts[k - j * j]
                    .checked_mul(r1[j * j])
                    .ok_or(Error::Overflow("r_d(k)"))?;
                acc = acc.checked_add(term).ok_or(Error::Overflow("r_d(k)"))?;
                j += 1;
            }
            *slot = acc;
        }
        counts = next;
    }
    Ok(RepCountTable {
        dimension: d,
        counts,
    })
}

/// All lattice points `m` with `|m|^2 = k`, stored flat in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SphereShell {
    pub dimension: usize,
    pub radius_sq: u64,
    coords: Vec<i64>,
}

impl SphereShell {
    /// Wraps explicit points. Callers are responsible for the shell invariants;
    /// the cache reader validates them separately.
    pub fn from_points(dimension: usize, radius_sq: u64, coords: Vec<i64>) -> Result<Self> {
        if dimension == 0 || coords.len() % dimension != 0 {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates do not split into {dimension}-tuples",
                coords.len()
            )));
        }
        Ok(Self {
            dimension,
            radius_sq,
            coords,
        })
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dimension
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn points(&self) -> std::slice::ChunksExact<'_, i64> {
        self.coords.chunks_exact(self.dimension)
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    /// `λ = sqrt(k)`.
    pub fn radius(&self) -> f64 {
        (self.radius_sq as f64).sqrt()
    }
}

pub fn sphere_shell(d: usize, k: u64) -> Result<SphereShell> {
    sphere_shell_with(d, k, DEFAULT_POINT_BUDGET, Exec::default())
}

/// Enumerates the shell, fanning out over the first coordinate.
///
/// The count is checked against the budget before any point is generated.
pub fn sphere_shell_with(d: usize, k: u64, budget: u64, exec: Exec) -> Result<SphereShell> {
    let table = rep_counts(d, k)?;
    let expected = table.counts[k as usize];
    if expected > budget {
        return Err(Error::Budget {
            what: "sphere shell points",
            needed: expected as u128,
            budget: budget as u128,
        });
    }
    // Representability of the remainder in the trailing dimensions prunes dead branches.
    let tables: Vec<Vec<u64>> = (1..=d)
        .map(|dd| rep_counts(dd, k).map(|t| t.counts))
        .collect::<Result<_>>()?;
    let r = k.sqrt() as i64;
    let firsts: Vec<i64> = (-r..=r).collect();
    let blocks = exec::map_slice(exec, &firsts, |&x0| {
        let rem = k - (x0 * x0) as u64;
        let mut out = Vec::new();
        if d == 1 {
            if rem == 0 {
                out.push(x0);
            }
            return out;
        }
        if tables[d - 2][rem as usize] == 0 {
            return out;
        }
        let mut prefix = vec![x0];
        fill(&tables, d, rem, &mut prefix, &mut out);
        out
    });
    let mut coords = Vec::with_capacity(expected as usize * d);
    for b in blocks {
        coords.extend_from_slice(&b);
    }
    debug_assert_eq!(coords.len() as u64, expected * d as u64);
    Ok(SphereShell {
        dimension: d,
        radius_sq: k,
        coords,
    })
}

fn fill(tables: &[Vec<u64>], d: usize, rem: u64, prefix: &mut Vec<i64>, out: &mut Vec<i64>) {
    let left = d - prefix.len();
    if left == 1 {
        let s = rem.sqrt();
        if s * s == rem {
            let s = s as i64;
            if s == 0 {
                out.extend_from_slice(prefix);
                out.push(0);
            } else {
                for v in [-s, s] {
                    out.extend_from_slice(prefix);
                    out.push(v);
                }
            }
        }
        return;
    }
    let r = rem.sqrt() as i64;
    for x in -r..=r {
        let next = rem - (x * x) as u64;
        if tables[left - 2][next as usize] == 0 {
            continue;
        }
        prefix.push(x);
        fill(tables, d, next, prefix, out);
        prefix.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use std::collections::HashSet;

    #[test]
    fn small_counts() {
        assert_eq!(rep_counts(1, 4).unwrap().counts[4], 2);
        assert_eq!(rep_counts(5, 1).unwrap().counts[1], 10);
        assert_eq!(rep_counts(5, 2).unwrap().counts[2], 40);
        assert_eq!(rep_counts(2, 25).unwrap().counts[25], 12);
        for d in 1..=6 {
            assert_eq!(rep_counts(d, 0).unwrap().counts[0], 1);
        }
    }

    #[test]
    fn four_squares_everywhere() {
        for d in 4..=6 {
            let t = rep_counts(d, 300).unwrap();
            assert!(t.counts.iter().all(|&c| c > 0));
        }
    }

    #[test]
    fn matches_brute_force() {
        for d in 1..=4 {
            let t = rep_counts(d, 30).unwrap();
            for k in 0..=30u64 {
                assert_eq!(t.counts[k as usize], oracle::brute_force_count(d, k), "d={d} k={k}");
            }
        }
    }

    #[test]
    fn overflow_is_reported() {
        // r_40(k) exceeds u64 well before k = 400.
        assert!(matches!(rep_counts(40, 400), Err(Error::Overflow(_))));
    }

    #[test]
    fn shell_examples() {
        let s = sphere_shell(2, 0).unwrap();
        assert_eq!(s.points().collect::<Vec<_>>(), vec![&[0, 0][..]]);

        let s = sphere_shell(2, 25).unwrap();
        assert_eq!(s.len(), 12);
        let pts: HashSet<Vec<i64>> = s.points().map(|p| p.to_vec()).collect();
        for p in [[3, 4], [-3, 4], [5, 0]] {
            assert!(pts.contains(&p.to_vec()));
        }

        let s = sphere_shell(5, 1).unwrap();
        assert_eq!(s.len(), 10);
        for p in s.points() {
            assert_eq!(p.iter().map(|x| x.abs()).sum::<i64>(), 1);
        }
    }

    #[test]
    fn shell_is_lexicographic_and_closed() {
        let s = sphere_shell(4, 18).unwrap();
        let pts: Vec<Vec<i64>> = s.points().map(|p| p.to_vec()).collect();
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        let set: HashSet<Vec<i64>> = pts.iter().cloned().collect();
        for p in &pts {
            let mut flipped = p.clone();
            flipped[2] = -flipped[2];
            assert!(set.contains(&flipped));
            let mut swapped = p.clone();
            swapped.swap(0, 3);
            assert!(set.contains(&swapped));
        }
    }

    #[test]
    fn budget_is_enforced() {
        let err = sphere_shell_with(5, 50, 10, Exec::Sequential).unwrap_err();
        assert!(matches!(err, Error::Budget { .. }));
    }

    #[test]
    fn exec_modes_agree() {
        let a = sphere_shell_with(5, 37, u64::MAX, Exec::Sequential).unwrap();
        let b = sphere_shell_with(5, 37, u64::MAX, Exec::Parallel).unwrap();
        assert_eq!(a, b);
    }
}
