//! Commuting inner automorphisms of `M_n`, their spherical averages, orbit
//! functions on the lattice, and the maximal-ratio table.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::lattice::{rep_counts, sphere_shell, SphereShell};
use crate::multiplier::lattice_fn::{spherical_convolve_at, LatticeFunction, DEFAULT_SITE_BUDGET};
use crate::ncmax::{ncmax_norm, schatten_norm, AlgebraElement, CMatrix, MaxNormProblem};

/// Tolerance for unitarity and pairwise commutation.
pub const FAMILY_TOL: f64 = 1e-12;

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `gamma_i(x) = U_i x U_i*` for pairwise commuting unitaries `U_1..U_d`.
#[derive(Debug, Clone)]
pub struct AutomorphismFamily {
    pub n: usize,
    unitaries: Vec<CMatrix>,
}

impl AutomorphismFamily {
    pub fn new(unitaries: Vec<CMatrix>) -> Result<Self> {
        let first = unitaries
            .first()
            .ok_or_else(|| Error::InvalidInput("empty automorphism family".into()))?;
        let n = first.nrows();
        for (i, u) in unitaries.iter().enumerate() {
            if u.nrows() != n || u.ncols() != n {
                return Err(Error::DimensionMismatch(format!("U_{} is {}x{}, expected {n}x{n}", i + 1, u.nrows(), u.ncols())));
            }
            let defect = max_abs(&(u * u.adjoint() - CMatrix::identity(n, n)));
            if defect > FAMILY_TOL {
                return Err(Error::InvalidInput(format!("U_{} is not unitary (defect {defect:e})", i + 1)));
            }
        }
        for i in 0..unitaries.len() {
            for j in 0..i {
                let defect = max_abs(&(&unitaries[i] * &unitaries[j] - &unitaries[j] * &unitaries[i]));
                if defect > FAMILY_TOL {
                    return Err(Error::InvalidInput(format!(
                        "U_{} and U_{} do not commute (defect {defect:e})",
                        j + 1,
                        i + 1
                    )));
                }
            }
        }
        Ok(Self { n, unitaries })
    }

    pub fn trivial(n: usize, d: usize) -> Self {
        Self {
            n,
            unitaries: vec![CMatrix::identity(n, n); d],
        }
    }

    /// `U_i = diag(1, e(theta_i), e(2 theta_i), ..)`.
    pub fn diagonal_phases(n: usize, thetas: &[f64]) -> Result<Self> {
        let us = thetas
            .iter()
            .map(|&t| {
                let diag = nalgebra::DVector::from_fn(n, |j, _| Complex64::from_polar(1.0, TAU * t * j as f64));
                CMatrix::from_diagonal(&diag)
            })
            .collect();
        Self::new(us)
    }

    /// Circulant unitaries `U_i = F* diag(e(theta_i j^2 + i j / n)) F`, which
    /// all commute with the cyclic shift. For `theta_i = 0` this is a power of the shift.
    pub fn circulant(n: usize, thetas: &[f64]) -> Result<Self> {
        let f = CMatrix::from_fn(n, n, |r, c| Complex64::from_polar(1.0 / (n as f64).sqrt(), -TAU * (r * c) as f64 / n as f64));
        let us = thetas
            .iter()
            .enumerate()
            .map(|(i, &t)| {
                let diag = nalgebra::DVector::from_fn(n, |j, _| {
                    let jf = j as f64;
                    Complex64::from_polar(1.0, TAU * (t * jf * jf + ((i + 1) * j) as f64 / n as f64))
                });
                f.adjoint() * CMatrix::from_diagonal(&diag) * &f
            })
            .collect();
        Self::new(us)
    }

    pub fn d(&self) -> usize {
        self.unitaries.len()
    }

    pub fn unitaries(&self) -> &[CMatrix] {
        &self.unitaries
    }

    /// `U^m` for `|m| <= reach`, per generator.
    fn powers(&self, reach: usize) -> Powers {
        let table = self
            .unitaries
            .iter()
            .map(|u| {
                let mut pos = vec![CMatrix::identity(self.n, self.n)];
                let mut neg = vec![CMatrix::identity(self.n, self.n)];
                let adj = u.adjoint();
                for m in 1..=reach {
                    pos.push(&pos[m - 1] * u);
                    neg.push(&neg[m - 1] * &adj);
                }
                (pos, neg)
            })
            .collect();
        Powers { table, reach }
    }
}

struct Powers {
    table: Vec<(Vec<CMatrix>, Vec<CMatrix>)>,
    reach: usize,
}

impl Powers {
    fn unitary(&self, site: &[i64]) -> CMatrix {
        let mut u = self.table[0].0[0].clone();
        for (&m, (pos, neg)) in site.iter().zip(&self.table) {
            let k = m.unsigned_abs() as usize;
            debug_assert!(k <= self.reach);
            u = if m >= 0 { u * &pos[k] } else { u * &neg[k] };
        }
        u
    }

    fn conjugate(&self, site: &[i64], x: &CMatrix) -> CMatrix {
        let u = self.unitary(site);
        &u * x * u.adjoint()
    }
}

fn check_element(fam: &AutomorphismFamily, x: &AlgebraElement) -> Result<()> {
    if x.n() != fam.n {
        return Err(Error::DimensionMismatch(format!("element is {0}x{0}, family acts on {1}x{1}", x.n(), fam.n)));
    }
    Ok(())
}

/// `gamma^n x = U^n x U^{-n}`.
pub fn gamma_apply(fam: &AutomorphismFamily, n: &[i64], x: &AlgebraElement) -> Result<AlgebraElement> {
    check_element(fam, x)?;
    if n.len() != fam.d() {
        return Err(Error::DimensionMismatch(format!("{}-tuple for a family of {} automorphisms", n.len(), fam.d())));
    }
    let reach = n.iter().map(|m| m.unsigned_abs() as usize).max().unwrap_or(0);
    let out = fam.powers(reach).conjugate(n, x.matrix());
    Ok(wrap(out, x.is_hermitian()))
}

fn wrap(m: CMatrix, hermitian: bool) -> AlgebraElement {
    if hermitian {
        AlgebraElement::hermitian(m.clone()).unwrap_or_else(|_| AlgebraElement::new(m).expect("square"))
    } else {
        AlgebraElement::new(m).expect("square")
    }
}

/// `M^gamma x = r_d(k)^{-1} sum_{|n|^2 = k} gamma^n x`.
pub fn auto_spherical_average(fam: &AutomorphismFamily, x: &AlgebraElement, k: u64) -> Result<AlgebraElement> {
    check_element(fam, x)?;
    let shell = sphere_shell(fam.d(), k)?;
    average_over(fam, x, &shell)
}

fn average_over(fam: &AutomorphismFamily, x: &AlgebraElement, shell: &SphereShell) -> Result<AlgebraElement> {
    if shell.is_empty() {
        return Err(Error::InvalidInput(format!("r_{}({}) = 0", fam.d(), shell.radius_sq)));
    }
    let powers = fam.powers((shell.radius_sq as f64).sqrt() as usize + 1);
    let mut acc = CMatrix::zeros(fam.n, fam.n);
    for p in shell.points() {
        acc += powers.conjugate(p, x.matrix());
    }
    acc *= Complex64::new(1.0 / shell.len() as f64, 0.0);
    Ok(wrap(acc, x.is_hermitian()))
}

/// `g(n) = gamma^n x` on the box `|n|_inf <= j`, zero elsewhere, on a torus of
/// the given side.
pub fn orbit_truncation(fam: &AutomorphismFamily, x: &AlgebraElement, j: usize, side: usize) -> Result<LatticeFunction> {
    orbit_truncation_with(fam, x, j, side, DEFAULT_SITE_BUDGET)
}

pub fn orbit_truncation_with(fam: &AutomorphismFamily, x: &AlgebraElement, j: usize, side: usize, budget: u128) -> Result<LatticeFunction> {
    check_element(fam, x)?;
    let d = fam.d();
    let window = (2 * j + 1) as u128;
    let sites = window.pow(d as u32) * (fam.n * fam.n) as u128;
    if sites > budget {
        return Err(Error::Budget {
            what: "orbit window values",
            needed: sites,
            budget,
        });
    }
    if side < 2 * j + 1 {
        return Err(Error::InvalidInput(format!("torus side {side} cannot hold the window |n| <= {j}")));
    }
    let mut g = LatticeFunction::zeros_with_budget(d, side, fam.n, budget)?;
    let powers = fam.powers(j);
    for site in box_sites(d, j as i64) {
        let v = powers.conjugate(&site, x.matrix());
        g.set_matrix(&site, v.transpose().as_slice());
    }
    Ok(g)
}

/// All `n` with `|n|_inf <= j`, in lexicographic order.
pub fn box_sites(d: usize, j: i64) -> Vec<Vec<i64>> {
    if j < 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = vec![-j; d];
    loop {
        out.push(cur.clone());
        let mut i = d;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < j {
                cur[i] += 1;
                break;
            }
            cur[i] = -j;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck {
    pub max_deviation: f64,
    /// Squared radii `k <= cap^2` with `r_d(k) > 0` that were checked.
    pub radii: Vec<u64>,
    pub sites: usize,
}

/// Compares `M_lambda g(n)` with `gamma^n M^gamma_lambda x` for every
/// `|n|_inf <= j - cap` and every `k = lambda^2 <= cap^2`.
pub fn truncation_identity_check(fam: &AutomorphismFamily, x: &AlgebraElement, j: usize, cap: usize, exec: Exec) -> Result<IdentityCheck> {
    if cap == 0 || cap > j {
        return Err(Error::InvalidInput(format!("need 1 <= cap <= J, got cap = {cap}, J = {j}")));
    }
    let d = fam.d();
    let side = 2 * (j + cap) + 2;
    let g = orbit_truncation(fam, x, j, side)?;
    let sites = box_sites(d, (j - cap) as i64);
    let kmax = (cap * cap) as u64;
    let counts = rep_counts(d, kmax)?;
    let powers = fam.powers(j);
    let nn = fam.n;
    let mut radii = Vec::new();
    let mut worst = 0.0f64;
    for k in 1..=kmax {
        if counts.counts[k as usize] == 0 {
            continue;
        }
        radii.push(k);
        let shell = sphere_shell(d, k)?;
        let lhs = spherical_convolve_at(&shell, &g, &sites, exec)?;
        let avg = average_over(fam, x, &shell)?;
        let dev = exec::max_indexed(exec, sites.len(), |s| {
            let rhs = powers.conjugate(&sites[s], avg.matrix());
            let mut w = 0.0f64;
            for r in 0..nn {
                for c in 0..nn {
                    w = w.max((lhs[s][r * nn + c] - rhs[(r, c)]).norm());
                }
            }
            w
        });
        worst = worst.max(dev);
    }
    Ok(IdentityCheck {
        max_deviation: worst,
        radii,
        sites: sites.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioRow {
    pub k: u64,
    pub ratio: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub solver_gap: f64,
}

/// Open range `(d/(d-2), 2]` of exponents the ratio table is defined for.
pub fn exponent_range(d: usize) -> (f64, f64) {
    (d as f64 / (d as f64 - 2.0), 2.0)
}

/// For each `K` in `k_list`, the maximal norm of `{M^gamma_lambda x : 1 <= lambda^2 <= K}`
/// over `||x||_p`. Each reported ratio is the best envelope among the families
/// with that `K` or larger, which are all feasible for the smaller family, so
/// the column is nondecreasing. Bounds are the order sandwich of each family.
pub fn maximal_ratio_experiment(fam: &AutomorphismFamily, x: &AlgebraElement, k_list: &[u64], p: f64, tol: f64) -> Result<Vec<RatioRow>> {
    check_element(fam, x)?;
    let d = fam.d();
    let (lo, hi) = exponent_range(d);
    if !(p > lo && p <= hi) {
        return Err(Error::InvalidInput(format!("p = {p} outside ({lo}, {hi}] for d = {d}")));
    }
    if k_list.is_empty() || k_list.windows(2).any(|w| w[0] >= w[1]) || k_list[0] == 0 {
        return Err(Error::InvalidInput("K list must be positive and strictly ascending".into()));
    }
    let norm_x = schatten_norm(x, p);
    if norm_x == 0.0 {
        return Err(Error::InvalidInput("x = 0".into()));
    }
    let kmax = *k_list.last().expect("nonempty");
    let counts = rep_counts(d, kmax)?;
    let mut averages = Vec::new();
    let mut upto = Vec::new();
    for k in 1..=kmax {
        if counts.counts[k as usize] > 0 {
            averages.push(auto_spherical_average(fam, x, k)?);
        }
        upto.push(averages.len());
    }
    let mut rows = Vec::with_capacity(k_list.len());
    let mut objectives = Vec::with_capacity(k_list.len());
    for &k in k_list {
        let members = averages[..upto[k as usize - 1]].to_vec();
        if members.is_empty() {
            return Err(Error::InvalidInput(format!("no lattice points with 1 <= |n|^2 <= {k}")));
        }
        let prob = MaxNormProblem::new(p, members)?;
        let cert = ncmax_norm(&prob, tol)?;
        let (lower, upper) = prob.sandwich();
        objectives.push(cert.objective);
        rows.push(RatioRow {
            k,
            ratio: 0.0,
            lower_bound: lower / norm_x,
            upper_bound: upper / norm_x,
            solver_gap: cert.gap / norm_x,
        });
    }
    let mut best = f64::INFINITY;
    for (row, obj) in rows.iter_mut().zip(objectives).rev() {
        best = best.min(obj);
        row.ratio = best / norm_x;
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SiteSumCheck {
    /// `#{|n|_inf <= j - cap} * ||sup+ M^gamma_lambda x||_p^p`.
    pub window: f64,
    /// `sum_n ||sup+_lambda M_lambda g(n)||_p^p`, one solve per site.
    pub site_sum: f64,
    /// `||sup+_lambda M_lambda g||_p^p` on the block-diagonal algebra over all
    /// sites, one dense solve; `None` when the dimension exceeds the budget.
    pub global: Option<f64>,
    pub sites: usize,
}

/// Site-by-site maximal norms of `{M_lambda g : k <= cap^2}` against the
/// maximal norm of the same family viewed as block-diagonal matrices.
pub fn site_sum_check(fam: &AutomorphismFamily, x: &AlgebraElement, j: usize, cap: usize, p: f64, tol: f64, max_dim: usize, exec: Exec) -> Result<SiteSumCheck> {
    if cap == 0 || cap > j {
        return Err(Error::InvalidInput(format!("need 1 <= cap <= J, got cap = {cap}, J = {j}")));
    }
    let d = fam.d();
    let nn = fam.n;
    let side = 2 * (j + cap) + 2;
    let g = orbit_truncation(fam, x, j, side)?;
    let sites = box_sites(d, (j + cap) as i64);
    let kmax = (cap * cap) as u64;
    let counts = rep_counts(d, kmax)?;
    let mut values: Vec<Vec<Vec<Complex64>>> = Vec::new();
    let mut averages = Vec::new();
    for k in 1..=kmax {
        if counts.counts[k as usize] == 0 {
            continue;
        }
        let shell = sphere_shell(d, k)?;
        values.push(spherical_convolve_at(&shell, &g, &sites, exec)?);
        averages.push(average_over(fam, x, &shell)?);
    }
    let hermitian = x.is_hermitian();
    let member = |m: CMatrix| -> Result<AlgebraElement> {
        if hermitian {
            AlgebraElement::hermitian((&m + m.adjoint()) * Complex64::new(0.5, 0.0))
        } else {
            AlgebraElement::new(m)
        }
    };
    let inner = ncmax_norm(&MaxNormProblem::new(p, averages)?, tol)?.objective;
    let window = box_sites(d, (j - cap) as i64).len() as f64 * inner.powf(p);
    let per_site = exec::map_slice(exec, &(0..sites.len()).collect::<Vec<_>>(), |&s| -> Result<f64> {
        let fam_s = values
            .iter()
            .map(|v| member(CMatrix::from_row_slice(nn, nn, &v[s])))
            .collect::<Result<Vec<_>>>()?;
        Ok(ncmax_norm(&MaxNormProblem::new(p, fam_s)?, tol)?.objective.powf(p))
    });
    let mut site_sum = 0.0;
    for v in per_site {
        site_sum += v?;
    }
    let dim = sites.len() * nn;
    let global = if dim <= max_dim {
        let blocks = values
            .iter()
            .map(|v| {
                let mut m = CMatrix::zeros(dim, dim);
                for (s, entries) in v.iter().enumerate() {
                    for r in 0..nn {
                        for c in 0..nn {
                            m[(s * nn + r, s * nn + c)] = entries[r * nn + c];
                        }
                    }
                }
                member(m)
            })
            .collect::<Result<Vec<_>>>()?;
        Some(ncmax_norm(&MaxNormProblem::new(p, blocks)?, tol)?.objective.powf(p))
    } else {
        None
    };
    Ok(SiteSumCheck {
        window,
        site_sum,
        global,
        sites: sites.len(),
    })
}

/// `#{|n|_inf <= j - cap} / #{|n|_inf <= j}`.
pub fn window_ratio(d: usize, j: usize, cap: usize) -> f64 {
    if cap > j {
        return 0.0;
    }
    ((2 * (j - cap) + 1) as f64 / (2 * j + 1) as f64).powi(d as i32)
}

/// `((j - cap) / j)^{(d-1)/p}`.
pub fn scaling_factor(d: usize, j: usize, cap: usize, p: f64) -> f64 {
    if cap > j {
        return 0.0;
    }
    ((j - cap) as f64 / j as f64).powf((d as f64 - 1.0) / p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn swap() -> AlgebraElement {
        AlgebraElement::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap()
    }

    #[test]
    fn gamma_examples() {
        let fam = AutomorphismFamily::diagonal_phases(2, &[0.1, 0.2, 0.3, 0.4, 0.5]).unwrap();
        let x = swap();
        assert_eq!(gamma_apply(&fam, &[0; 5], &x).unwrap().matrix(), x.matrix());
        let dg = AlgebraElement::from_real_diagonal(&[2.0, -1.0]);
        let y = gamma_apply(&fam, &[3, -1, 2, 0, 7], &dg).unwrap();
        assert!(max_abs(&(y.matrix() - dg.matrix())) < 1e-14);

        let theta = 0.13;
        let fam = AutomorphismFamily::diagonal_phases(2, &[theta, 0.0, 0.0, 0.0, 0.0]).unwrap();
        let e12 = AlgebraElement::new(CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)])).unwrap();
        for m in [-3i64, 1, 4] {
            let y = gamma_apply(&fam, &[m, 0, 0, 0, 0], &e12).unwrap();
            let want = Complex64::from_polar(1.0, -TAU * m as f64 * theta);
            assert!((y.matrix()[(0, 1)] - want).norm() < 1e-14);
            assert!(y.matrix()[(1, 0)].norm() < 1e-15);
        }
    }

    #[test]
    fn average_examples() {
        let thetas = [1.0 / 3.0, 0.2, 1.0 / 7.0, 1.0 / 11.0, 1.0 / 13.0];
        let fam = AutomorphismFamily::diagonal_phases(2, &thetas).unwrap();
        let avg = auto_spherical_average(&fam, &swap(), 1).unwrap();
        let want: f64 = thetas.iter().map(|t| 2.0 * (TAU * t).cos()).sum::<f64>() / 10.0;
        assert!((avg.matrix()[(0, 1)].re - want).abs() < 1e-14);
        assert!(avg.matrix()[(0, 1)].im.abs() < 1e-14);
        let id = auto_spherical_average(&fam, &AlgebraElement::identity(2), 5).unwrap();
        assert!(max_abs(&(id.matrix() - CMatrix::identity(2, 2))) < 1e-14);
        let triv = AutomorphismFamily::trivial(2, 5);
        let same = auto_spherical_average(&triv, &swap(), 3).unwrap();
        assert!(max_abs(&(same.matrix() - swap().matrix())) < 1e-15);
    }

    #[test]
    fn family_validation() {
        let u = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(AutomorphismFamily::new(vec![u]).is_err());
        let x = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let z = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]);
        assert!(AutomorphismFamily::new(vec![x, z]).is_err());
        let circ = AutomorphismFamily::circulant(3, &[0.0, 0.1, 0.37]).unwrap();
        assert_eq!(circ.d(), 3);
    }

    #[test]
    fn orbit_window() {
        let fam = AutomorphismFamily::diagonal_phases(2, &[0.1, 0.2]).unwrap();
        let x = swap();
        let g = orbit_truncation(&fam, &x, 0, 4).unwrap();
        assert_eq!(g.plane(0, 1).iter().filter(|v| v.norm() > 0.0).count(), 1);
        assert_eq!(g.matrix_at(&[0, 0]), vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(box_sites(5, 3).len(), 16807);
        let g = orbit_truncation(&AutomorphismFamily::trivial(2, 2), &x, 2, 7).unwrap();
        assert_eq!(g.matrix_at(&[-2, 1]), g.matrix_at(&[0, 0]));
        assert_eq!(g.matrix_at(&[3, 0]), vec![c(0.0, 0.0); 4]);
    }

    #[test]
    fn small_identity() {
        let fam = AutomorphismFamily::diagonal_phases(2, &[0.3, 0.05, 0.41]).unwrap();
        let x = AlgebraElement::from_real_rows(&[vec![1.0, -0.5], vec![-0.5, 2.0]]).unwrap();
        let chk = truncation_identity_check(&fam, &x, 3, 2, Exec::default()).unwrap();
        assert!(chk.max_deviation < 1e-12, "{}", chk.max_deviation);
        assert_eq!(chk.radii, vec![1, 2, 3, 4]);
        let triv = truncation_identity_check(&AutomorphismFamily::trivial(2, 3), &x, 3, 2, Exec::Sequential).unwrap();
        assert_eq!(triv.max_deviation, 0.0);
    }

    #[test]
    fn scaling_factor_tends_to_one() {
        let mut prev = 0.0;
        for j in [4, 8, 16] {
            let w = window_ratio(5, j, 2);
            let s = scaling_factor(5, j, 2, 2.0);
            assert!(w > prev && w < 1.0 && s < 1.0 && s > w);
            prev = w;
        }
        assert!(1.0 - window_ratio(5, 1024, 2) < 0.01);
    }

    #[test]
    fn site_sum_chain_one_dim() {
        let fam = AutomorphismFamily::diagonal_phases(2, &[0.3]).unwrap();
        let x = AlgebraElement::from_real_rows(&[vec![1.0, -0.5], vec![-0.5, 2.0]]).unwrap();
        for p in [1.5, 2.0] {
            let chk = site_sum_check(&fam, &x, 2, 1, p, 1e-9, 32, Exec::default()).unwrap();
            let global = chk.global.unwrap();
            assert!(chk.window <= chk.site_sum * (1.0 + 1e-6), "{chk:?}");
            assert!(chk.site_sum <= global * (1.0 + 1e-6), "{chk:?}");
            assert!((chk.site_sum - global).abs() <= 1e-5 * global, "{chk:?}");
        }
        let big = site_sum_check(&fam, &x, 3, 1, 2.0, 1e-9, 4, Exec::default()).unwrap();
        assert!(big.global.is_none());
    }

    #[test]
    fn trivial_ratio_table() {
        let fam = AutomorphismFamily::trivial(2, 5);
        let x = AlgebraElement::from_real_rows(&[vec![1.0, 0.3], vec![0.3, -0.5]]).unwrap();
        let rows = maximal_ratio_experiment(&fam, &x, &[1, 2, 4], 2.0, 1e-8).unwrap();
        for r in rows {
            assert!((r.ratio - 1.0).abs() < 1e-6, "{r:?}");
        }
        assert!(maximal_ratio_experiment(&fam, &x, &[1], 1.5, 1e-8).is_err());
        assert!(maximal_ratio_experiment(&fam, &x, &[2, 1], 2.0, 1e-8).is_err());
    }
}
