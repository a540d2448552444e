//! Schatten norms on `M_n` and the maximal norm
//! `inf { ||a||_p : a >= 0, -a <= x_j <= a }` of a finite hermitian family.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Largest `|x - x*|` entry still accepted as hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    entries: CMatrix,
    hermitian: bool,
}

fn hermitian_defect(m: &CMatrix) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..=i {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

impl AlgebraElement {
    pub fn new(entries: CMatrix) -> Result<Self> {
        if entries.nrows() != entries.ncols() || entries.nrows() == 0 {
            return Err(Error::DimensionMismatch(format!(
                "expected a nonempty square matrix, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let hermitian = hermitian_defect(&entries) <= HERMITIAN_TOL;
        Ok(Self { entries, hermitian })
    }

    /// Accepts only hermitian input; the stored matrix is exactly hermitian.
    pub fn hermitian(entries: CMatrix) -> Result<Self> {
        let el = Self::new(entries)?;
        if !el.hermitian {
            return Err(Error::NotHermitian(hermitian_defect(&el.entries)));
        }
        Ok(el.symmetrized())
    }

    fn symmetrized(mut self) -> Self {
        let adj = self.entries.adjoint();
        self.entries = (&self.entries + adj) * c(0.5);
        self
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let v = DVector::from_iterator(diag.len(), diag.iter().map(|&x| c(x)));
        Self {
            entries: CMatrix::from_diagonal(&v),
            hermitian: true,
        }
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("rows of unequal length".into()));
        }
        Self::new(CMatrix::from_fn(n, n, |i, j| c(rows[i][j])))
    }

    pub fn identity(n: usize) -> Self {
        Self {
            entries: CMatrix::identity(n, n),
            hermitian: true,
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            entries: CMatrix::zeros(n, n),
            hermitian: true,
        }
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_matrix(self) -> CMatrix {
        self.entries
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn is_real(&self) -> bool {
        self.entries.iter().all(|z| z.im == 0.0)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            entries: &self.entries * c(s),
            hermitian: self.hermitian,
        }
    }

    /// Eigenvalues (ascending) and eigenvectors of a hermitian element.
    pub fn eigh(&self) -> (Vec<f64>, CMatrix) {
        eigh(&self.entries)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigh().0[0]
    }

    /// `|x| = (x* x)^{1/2}`.
    pub fn modulus(&self) -> Self {
        let xx = self.entries.adjoint() * &self.entries;
        let (vals, vecs) = eigh(&xx);
        let roots: Vec<f64> = vals.iter().map(|&v| v.max(0.0).sqrt()).collect();
        Self {
            entries: spectral(&vecs, &roots),
            hermitian: true,
        }
    }
}

fn eigh(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = CMatrix::from_fn(m.nrows(), m.ncols(), |r, col| eig.eigenvectors[(r, order[col])]);
    (vals, vecs)
}

/// `V diag(f) V*`.
fn spectral(vecs: &CMatrix, f: &[f64]) -> CMatrix {
    let mut scaled = vecs.clone();
    for (j, &fj) in f.iter().enumerate() {
        scaled.column_mut(j).scale_mut(fj);
    }
    scaled * vecs.adjoint()
}

fn check_exponent(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidInput(format!("p must lie in [1, inf], got {p}")));
    }
    Ok(())
}

/// Parses `p`, accepting `inf` for the operator norm.
pub fn parse_exponent(s: &str) -> Result<f64> {
    let p = match s.trim().to_ascii_lowercase().as_str() {
        "inf" | "infinity" | "∞" => f64::INFINITY,
        t => t
            .parse::<f64>()
            .map_err(|e| Error::InvalidInput(format!("bad exponent `{s}`: {e}")))?,
    };
    check_exponent(p)?;
    Ok(p)
}

fn lp_of(values: impl Iterator<Item = f64>, p: f64) -> f64 {
    let v: Vec<f64> = values.map(f64::abs).collect();
    let top = v.iter().copied().fold(0.0, f64::max);
    if p.is_infinite() || top == 0.0 {
        return top;
    }
    top * v.iter().map(|x| (x / top).powf(p)).sum::<f64>().powf(1.0 / p)
}

/// `(sum sigma_i^p)^{1/p}`, or the largest singular value for `p = inf`.
pub fn schatten_norm(x: &AlgebraElement, p: f64) -> f64 {
    let sv = x.entries.clone().singular_values();
    lp_of(sv.iter().copied(), p)
}

#[derive(Debug, Clone)]
pub struct MaxNormProblem {
    pub p: f64,
    pub family: Vec<AlgebraElement>,
}

impl MaxNormProblem {
    pub fn new(p: f64, family: Vec<AlgebraElement>) -> Result<Self> {
        check_exponent(p)?;
        let first = family
            .first()
            .ok_or_else(|| Error::InvalidInput("empty family".into()))?;
        let n = first.n();
        for x in &family {
            if x.n() != n {
                return Err(Error::DimensionMismatch(format!("family mixes {n}x{n} and {0}x{0}", x.n())));
            }
            if !x.is_hermitian() {
                return Err(Error::NotHermitian(hermitian_defect(x.matrix())));
            }
        }
        Ok(Self { p, family })
    }

    pub fn n(&self) -> usize {
        self.family[0].n()
    }

    /// `(max_j ||x_j||_p, ||sum_j |x_j| ||_p)`: every envelope's norm lies between.
    pub fn sandwich(&self) -> (f64, f64) {
        let lower = self
            .family
            .iter()
            .map(|x| schatten_norm(x, self.p))
            .fold(0.0, f64::max);
        let mut sum = CMatrix::zeros(self.n(), self.n());
        for x in &self.family {
            sum += x.modulus().entries;
        }
        let upper = schatten_norm(&AlgebraElement { entries: sum, hermitian: true }, self.p);
        (lower, upper)
    }
}

#[derive(Debug, Clone)]
pub struct MaxNormCertificate {
    pub envelope: AlgebraElement,
    /// `||envelope||_p`.
    pub objective: f64,
    /// Smallest eigenvalue among all `a +- x_j`.
    pub residual: f64,
    /// `objective - lower_bound`.
    pub gap: f64,
    pub lower_bound: f64,
    pub newton_steps: usize,
}

/// Smallest eigenvalue among `a - x_j` and `a + x_j`.
pub fn feasibility_residual(a: &AlgebraElement, family: &[AlgebraElement]) -> f64 {
    let mut worst = f64::INFINITY;
    for x in family {
        for sign in [-1.0, 1.0] {
            let m = a.matrix() + x.matrix() * c(sign);
            worst = worst.min(eigh(&m).0[0]);
        }
    }
    worst
}

#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_newton_steps: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_newton_steps: 20_000,
        }
    }
}

pub fn ncmax_norm(prob: &MaxNormProblem, tol: f64) -> Result<MaxNormCertificate> {
    ncmax_norm_with(
        prob,
        SolverOptions {
            tol,
            ..SolverOptions::default()
        },
    )
}

pub fn ncmax_norm_with(prob: &MaxNormProblem, opts: SolverOptions) -> Result<MaxNormCertificate> {
    if !(opts.tol > 0.0 && opts.tol < 1.0) {
        return Err(Error::InvalidInput(format!("tol must lie in (0, 1), got {}", opts.tol)));
    }
    let n = prob.n();
    let scale = prob
        .family
        .iter()
        .map(|x| schatten_norm(x, f64::INFINITY))
        .fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(MaxNormCertificate {
            envelope: AlgebraElement::zeros(n),
            objective: 0.0,
            residual: 0.0,
            gap: 0.0,
            lower_bound: 0.0,
            newton_steps: 0,
        });
    }
    let unit: Vec<AlgebraElement> = prob.family.iter().map(|x| x.scaled(1.0 / scale)).collect();
    let (envelope, lower, steps) = if prob.p.is_infinite() {
        let (t, lo) = bisect_identity(&unit, opts.tol);
        (AlgebraElement::identity(n).scaled(t), lo, 0)
    } else {
        let solver = Barrier::new(&unit, prob.p);
        solver.solve(opts)?
    };
    let envelope = envelope.scaled(scale);
    let objective = schatten_norm(&envelope, prob.p);
    let floor = prob
        .family
        .iter()
        .map(|x| schatten_norm(x, prob.p))
        .fold(0.0, f64::max);
    let lower_bound = (lower * scale).max(floor).min(objective);
    Ok(MaxNormCertificate {
        residual: feasibility_residual(&envelope, &prob.family),
        envelope,
        objective,
        gap: objective - lower_bound,
        lower_bound,
        newton_steps: steps,
    })
}

/// Bisection for the least `t` with `-tI <= x_j <= tI`. Returns `(t, lower)`.
fn bisect_identity(family: &[AlgebraElement], tol: f64) -> (f64, f64) {
    let feasible = |t: f64| {
        family.iter().all(|x| {
            let (vals, _) = x.eigh();
            t + vals[0] >= 0.0 && t - vals[vals.len() - 1] >= 0.0
        })
    };
    let n = family[0].n();
    let mut sum = CMatrix::zeros(n, n);
    for x in family {
        sum += x.modulus().entries;
    }
    let mut hi = eigh(&sum).0[n - 1] + tol;
    let mut lo = 0.0;
    while hi - lo > 1e-3 * tol * hi {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (hi, lo)
}

/// Orthonormal basis of the hermitian (or real symmetric) matrices under `Re tr(AB)`.
fn hermitian_basis(n: usize, real: bool) -> Vec<CMatrix> {
    let mut basis = Vec::new();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..n {
        let mut e = CMatrix::zeros(n, n);
        e[(i, i)] = c(1.0);
        basis.push(e);
    }
    for i in 0..n {
        for j in i + 1..n {
            let mut e = CMatrix::zeros(n, n);
            e[(i, j)] = c(r);
            e[(j, i)] = c(r);
            basis.push(e);
            if !real {
                let mut e = CMatrix::zeros(n, n);
                e[(i, j)] = Complex64::new(0.0, r);
                e[(j, i)] = Complex64::new(0.0, -r);
                basis.push(e);
            }
        }
    }
    basis
}

const ARMIJO: f64 = 0.25;
const BACKTRACK: f64 = 0.5;
const MU_FACTOR: f64 = 0.1;
const MAX_CENTERING_STEPS: usize = 500;

/// Log barrier for `tr(a^p) / mu - sum_j [logdet(a - x_j) + logdet(a + x_j)]`.
struct Barrier<'a> {
    family: &'a [AlgebraElement],
    p: f64,
    basis: Vec<CMatrix>,
    /// Nonzero entries `(row, col, value)` of each basis element.
    sparse: Vec<Vec<(usize, usize, Complex64)>>,
    /// Barrier parameter `2 N n`.
    weight: f64,
}

struct Local {
    value: f64,
    grad: DVector<f64>,
    hess: DMatrix<f64>,
}

fn logdet_chol(m: CMatrix) -> Option<(f64, nalgebra::Cholesky<Complex64, nalgebra::Dyn>)> {
    let m = (&m + m.adjoint()) * c(0.5);
    let chol = m.cholesky()?;
    let l = chol.l_dirty();
    let mut s = 0.0;
    for i in 0..l.nrows() {
        // Complex Cholesky takes a complex root of a negative pivot instead of failing.
        let d = l[(i, i)];
        if d.re <= 0.0 || !d.re.is_finite() || d.im.abs() > 1e-6 * d.re {
            return None;
        }
        s += d.re.ln();
    }
    Some((2.0 * s, chol))
}

impl<'a> Barrier<'a> {
    fn new(family: &'a [AlgebraElement], p: f64) -> Self {
        let n = family[0].n();
        let real = family.iter().all(AlgebraElement::is_real);
        let basis = hermitian_basis(n, real);
        let sparse = basis
            .iter()
            .map(|e| {
                let mut nz = Vec::new();
                for col in 0..n {
                    for r in 0..n {
                        if e[(r, col)] != c(0.0) {
                            nz.push((r, col, e[(r, col)]));
                        }
                    }
                }
                nz
            })
            .collect();
        Self {
            family,
            p,
            basis,
            sparse,
            weight: (2 * family.len() * n) as f64,
        }
    }

    fn trace_pow(&self, a: &CMatrix) -> Option<f64> {
        let (vals, _) = eigh(a);
        if vals[0] <= 0.0 {
            return None;
        }
        Some(vals.iter().map(|v| v.powf(self.p)).sum())
    }

    fn value(&self, a: &CMatrix, mu: f64) -> Option<f64> {
        let mut v = self.trace_pow(a)? / mu;
        for x in self.family {
            for sign in [-1.0, 1.0] {
                let (ld, _) = logdet_chol(a + x.matrix() * c(sign))?;
                v -= ld;
            }
        }
        Some(v)
    }

    fn local(&self, a: &CMatrix, mu: f64) -> Option<Local> {
        let b = self.basis.len();
        let p = self.p;
        let (vals, vecs) = eigh(a);
        if vals[0] <= 0.0 {
            return None;
        }
        let mut value = vals.iter().map(|v| v.powf(p)).sum::<f64>() / mu;
        let mut grad = DVector::zeros(b);
        let mut hess = DMatrix::zeros(b, b);

        // tr(a^p): gradient p lambda^{p-1}, Hessian from the divided differences of p x^{p-1}.
        let n = vals.len();
        let d1: Vec<f64> = vals.iter().map(|&l| p * l.powf(p - 1.0)).collect();
        let dd = DMatrix::from_fn(n, n, |i, j| {
            let (li, lj) = (vals[i], vals[j]);
            if (li - lj).abs() <= 1e-8 * li.max(lj) {
                let m = 0.5 * (li + lj);
                p * (p - 1.0) * m.powf(p - 2.0)
            } else {
                (d1[i] - d1[j]) / (li - lj)
            }
        });
        let vh = vecs.adjoint();
        for k in 0..b {
            let rot = &vh * &self.basis[k] * &vecs;
            grad[k] = (0..n).map(|i| d1[i] * rot[(i, i)].re).sum::<f64>() / mu;
            let weighted = &vecs * rot.component_mul(&dd.map(c)) * &vh;
            for l in 0..=k {
                hess[(k, l)] += self.sparse[l].iter().map(|&(r, col, w)| (w * weighted[(col, r)]).re).sum::<f64>() / mu;
            }
        }

        // -logdet(a -+ x_j): gradient -tr(A^{-1} E_k), Hessian tr(A^{-1} E_k A^{-1} E_l).
        for x in self.family {
            for sign in [-1.0, 1.0] {
                let (ld, chol) = logdet_chol(a + x.matrix() * c(sign))?;
                value -= ld;
                let inv = chol.inverse();
                for k in 0..b {
                    let ek = &self.sparse[k];
                    grad[k] -= ek.iter().map(|&(r, col, v)| (v * inv[(col, r)]).re).sum::<f64>();
                    for l in 0..=k {
                        let mut s = Complex64::new(0.0, 0.0);
                        for &(r1, c1, v) in ek {
                            for &(r2, c2, w) in &self.sparse[l] {
                                s += v * w * inv[(c1, r2)] * inv[(c2, r1)];
                            }
                        }
                        hess[(k, l)] += s.re;
                    }
                }
            }
        }
        for k in 0..b {
            for l in 0..k {
                hess[(l, k)] = hess[(k, l)];
            }
        }
        Some(Local { value, grad, hess })
    }

    fn compose(&self, coeffs: &DVector<f64>) -> CMatrix {
        let n = self.basis[0].nrows();
        let mut m = CMatrix::zeros(n, n);
        for (e, &w) in self.basis.iter().zip(coeffs.iter()) {
            m += e * c(w);
        }
        m
    }

    /// Damped Newton to the central point for `mu`. Returns the step count.
    fn center(&self, a: &mut CMatrix, mu: f64) -> Result<usize> {
        for step in 0..MAX_CENTERING_STEPS {
            let local = self.local(a, mu).ok_or_else(|| Error::NoConvergence {
                reason: "iterate left the feasible region".into(),
                best: None,
            })?;
            let mut h = local.hess.clone();
            let chol = loop {
                if let Some(ch) = h.clone().cholesky() {
                    break ch;
                }
                let ridge = 1e-12 * (1.0 + h.diagonal().amax());
                for i in 0..h.nrows() {
                    h[(i, i)] += ridge;
                }
            };
            let dir = -chol.solve(&local.grad);
            let slope = local.grad.dot(&dir);
            if -slope / 2.0 <= 1e-11 {
                return Ok(step);
            }
            let delta = self.compose(&dir);
            let mut t = 1.0;
            loop {
                let cand = &*a + &delta * c(t);
                if let Some(v) = self.value(&cand, mu) {
                    if v <= local.value + ARMIJO * t * slope {
                        *a = cand;
                        break;
                    }
                }
                t *= BACKTRACK;
                if t < 1e-14 {
                    // Roundoff floor: the decrement can no longer be realized.
                    return Ok(step);
                }
            }
        }
        Ok(MAX_CENTERING_STEPS)
    }

    /// Returns `(envelope, lower bound on the optimal norm, newton steps)`.
    fn solve(&self, opts: SolverOptions) -> Result<(AlgebraElement, f64, usize)> {
        let n = self.family[0].n();
        let mut a = CMatrix::identity(n, n) * c(opts.tol);
        for x in self.family {
            a += x.modulus().entries;
        }
        let mut mu = self.trace_pow(&a).unwrap_or(1.0) / self.weight;
        let mut steps = 0;
        loop {
            steps += self.center(&mut a, mu)?;
            let f = self.trace_pow(&a).unwrap_or(f64::INFINITY);
            let envelope = AlgebraElement::hermitian(a.clone())?;
            let lower = (f - self.weight * mu).max(0.0).powf(1.0 / self.p);
            if self.weight * mu <= opts.tol * f {
                return Ok((envelope, lower, steps));
            }
            if steps > opts.max_newton_steps {
                let objective = schatten_norm(&envelope, self.p);
                return Err(Error::NoConvergence {
                    reason: format!("{steps} Newton steps at mu = {mu:e}"),
                    best: Some(Box::new(MaxNormCertificate {
                        residual: feasibility_residual(&envelope, self.family),
                        objective,
                        gap: objective - lower,
                        lower_bound: lower,
                        envelope,
                        newton_steps: steps,
                    })),
                });
            }
            mu *= MU_FACTOR;
        }
    }
}

/// Exact maximal norm of a simultaneously diagonal family:
/// `|| diag_i max_j |x_j(i,i)| ||_p`.
pub fn ncmax_diag_oracle(prob: &MaxNormProblem) -> Result<f64> {
    let n = prob.n();
    let mut env = vec![0.0f64; n];
    for x in &prob.family {
        let m = x.matrix();
        for i in 0..n {
            for j in 0..n {
                if i != j && m[(i, j)].norm() > HERMITIAN_TOL {
                    return Err(Error::InvalidInput(format!("entry ({i}, {j}) is off-diagonal and nonzero")));
                }
            }
            env[i] = env[i].max(m[(i, i)].re.abs());
        }
    }
    Ok(lp_of(env.into_iter(), prob.p))
}

/// Parses `re+imj`, `re`, `imj`, with optional exponents.
pub fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    let t = s.trim();
    if t.is_empty() {
        return Err("empty entry".into());
    }
    let bad = |e: std::num::ParseFloatError| format!("bad number `{s}`: {e}");
    let Some(body) = t.strip_suffix(['j', 'i']) else {
        return t.parse::<f64>().map(c).map_err(bad);
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        v => v.parse::<f64>().map_err(bad)?,
    };
    Ok(Complex64::new(re.parse::<f64>().map_err(bad)?, im))
}

/// Reads the family format: a header `n N p`, then `N` blocks of `n` rows of
/// `n` complex entries. Blank lines and `#` comments are skipped.
pub fn parse_family(text: &str, path: &Path) -> Result<MaxNormProblem> {
    let err = |line: usize, msg: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        msg,
    };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or_else(|| err(1, "missing header `n N p`".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 3 {
        return Err(err(hline, format!("header needs 3 fields, found {}", fields.len())));
    }
    let n: usize = fields[0].parse().map_err(|e| err(hline, format!("bad n: {e}")))?;
    let count: usize = fields[1].parse().map_err(|e| err(hline, format!("bad N: {e}")))?;
    let p = parse_exponent(fields[2]).map_err(|e| err(hline, e.to_string()))?;
    if n == 0 || count == 0 {
        return Err(err(hline, "n and N must be positive".into()));
    }
    let mut family = Vec::with_capacity(count);
    for block in 0..count {
        let mut m = CMatrix::zeros(n, n);
        let mut first_line = 0;
        for row in 0..n {
            let (ln, row_text) = lines
                .next()
                .ok_or_else(|| err(text.lines().count(), format!("matrix {} ends after {row} rows", block + 1)))?;
            if row == 0 {
                first_line = ln;
            }
            let entries: Vec<&str> = row_text.split_whitespace().collect();
            if entries.len() != n {
                return Err(err(ln, format!("expected {n} entries, found {}", entries.len())));
            }
            for (col, e) in entries.iter().enumerate() {
                m[(row, col)] = parse_complex(e).map_err(|msg| err(ln, msg))?;
            }
        }
        let el = AlgebraElement::hermitian(m).map_err(|e| err(first_line, format!("matrix {}: {e}", block + 1)))?;
        family.push(el);
    }
    if let Some((ln, _)) = lines.next() {
        return Err(err(ln, format!("trailing content after {count} matrices")));
    }
    MaxNormProblem::new(p, family)
}

pub fn read_family(path: &Path) -> Result<MaxNormProblem> {
    parse_family(&std::fs::read_to_string(path)?, path)
}

fn format_p(p: f64) -> String {
    if p.is_infinite() {
        "inf".into()
    } else {
        format!("{p}")
    }
}

/// Inverse of [`parse_family`]; `{:?}`-style float output round-trips exactly.
pub fn format_family(prob: &MaxNormProblem) -> String {
    let n = prob.n();
    let mut out = format!("{n} {} {}\n", prob.family.len(), format_p(prob.p));
    for x in &prob.family {
        out.push('\n');
        for i in 0..n {
            let row: Vec<String> = (0..n)
                .map(|j| {
                    let z = x.matrix()[(i, j)];
                    format!("{:?}{}{:?}j", z.re, if z.im.is_sign_negative() { "" } else { "+" }, z.im)
                })
                .collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    fn diag_problem(p: f64, diags: &[&[f64]]) -> MaxNormProblem {
        MaxNormProblem::new(p, diags.iter().map(|d| AlgebraElement::from_real_diagonal(d)).collect()).unwrap()
    }

    #[test]
    fn schatten_examples() {
        let x = AlgebraElement::from_real_diagonal(&[3.0, -4.0]);
        assert!((schatten_norm(&x, 1.0) - 7.0).abs() < 1e-12);
        assert!((schatten_norm(&x, 2.0) - 5.0).abs() < 1e-12);
        assert!((schatten_norm(&x, f64::INFINITY) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn scalar_family() {
        for p in [1.0, 1.5, 2.0, f64::INFINITY] {
            let cert = ncmax_norm(&diag_problem(p, &[&[3.0], &[-5.0]]), 1e-9).unwrap();
            assert!((cert.objective - 5.0).abs() < 1e-6, "p = {p}: {}", cert.objective);
            assert!((cert.envelope.matrix()[(0, 0)].re - 5.0).abs() < 1e-6);
        }
    }

    #[test]
    fn diagonal_example() {
        let prob = diag_problem(2.0, &[&[1.0, -2.0], &[-3.0, 1.0]]);
        assert!((ncmax_diag_oracle(&prob).unwrap() - 13f64.sqrt()).abs() < 1e-14);
        let cert = ncmax_norm(&prob, 1e-9).unwrap();
        assert!((cert.objective - 13f64.sqrt()).abs() < 1e-6);
        let env = cert.envelope.matrix();
        assert!((env[(0, 0)].re - 3.0).abs() < 1e-4 && (env[(1, 1)].re - 2.0).abs() < 1e-4);
        assert!(env[(0, 1)].norm() < 1e-4);
        assert!(cert.residual >= -1e-9);
        assert!(cert.gap <= 1e-8 * cert.objective + 1e-12);
    }

    #[test]
    fn oracle_examples() {
        assert!((ncmax_diag_oracle(&diag_problem(1.0, &[&[5.0]])).unwrap() - 5.0).abs() < 1e-15);
        assert_eq!(ncmax_diag_oracle(&diag_problem(f64::INFINITY, &[&[1.0, 1.0], &[1.0, 1.0]])).unwrap(), 1.0);
        let x = AlgebraElement::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!(ncmax_diag_oracle(&MaxNormProblem::new(2.0, vec![x]).unwrap()).is_err());
    }

    fn pauli() -> Vec<AlgebraElement> {
        vec![
            AlgebraElement::from_real_rows(&[vec![1.0, 0.0], vec![0.0, -1.0]]).unwrap(),
            AlgebraElement::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap(),
        ]
    }

    #[test]
    fn non_commuting_matches_grid() {
        for p in [f64::INFINITY, 2.0] {
            let prob = MaxNormProblem::new(p, pauli()).unwrap();
            let grid = oracle::ncmax_2x2_grid(&prob.family, p);
            let cert = ncmax_norm(&prob, 1e-9).unwrap();
            assert!((cert.objective - grid).abs() < 1e-4, "p = {p}: {} vs {grid}", cert.objective);
        }
    }

    #[test]
    fn complex_family() {
        let y = AlgebraElement::hermitian(CMatrix::from_row_slice(
            2,
            2,
            &[c(0.0), Complex64::new(0.0, -1.0), Complex64::new(0.0, 1.0), c(0.0)],
        ))
        .unwrap();
        let mut fam = pauli();
        fam.push(y);
        let prob = MaxNormProblem::new(1.5, fam).unwrap();
        let cert = ncmax_norm(&prob, 1e-8).unwrap();
        let (lo, hi) = prob.sandwich();
        assert!(cert.objective >= lo - 1e-8 && cert.objective <= hi + 1e-8);
        assert!(cert.residual >= -1e-8 * schatten_norm(&cert.envelope, f64::INFINITY));
    }

    #[test]
    fn random_diagonal_agreement() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for case in 0..40 {
            let n = rng.random_range(1..=6);
            let count = rng.random_range(1..=8);
            let p = [1.0, 1.5, 2.0, f64::INFINITY][case % 4];
            let fam = (0..count)
                .map(|_| {
                    let d: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
                    AlgebraElement::from_real_diagonal(&d)
                })
                .collect();
            let prob = MaxNormProblem::new(p, fam).unwrap();
            let exact = ncmax_diag_oracle(&prob).unwrap();
            let cert = ncmax_norm(&prob, 1e-8).unwrap();
            assert!((cert.objective - exact).abs() <= 1e-5 * exact, "case {case}: {} vs {exact}", cert.objective);
        }
    }

    #[test]
    fn single_complex_member_is_its_own_norm() {
        let x = AlgebraElement::hermitian(CMatrix::from_row_slice(
            2,
            2,
            &[c(-0.2), Complex64::new(-0.7, 0.13), Complex64::new(-0.7, -0.13), c(-0.4)],
        ))
        .unwrap();
        for p in [1.0, 2.0] {
            let prob = MaxNormProblem::new(p, vec![x.clone()]).unwrap();
            let cert = ncmax_norm(&prob, 1e-8).unwrap();
            let exact = schatten_norm(&x, p);
            assert!((cert.objective - exact).abs() < 1e-6 * exact, "{} vs {exact}", cert.objective);
        }
    }

    #[test]
    fn zero_family() {
        let cert = ncmax_norm(&diag_problem(2.0, &[&[0.0, 0.0]]), 1e-8).unwrap();
        assert_eq!(cert.objective, 0.0);
    }

    #[test]
    fn rejects_bad_input() {
        let x = AlgebraElement::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(MaxNormProblem::new(2.0, vec![x]), Err(Error::NotHermitian(_))));
        assert!(MaxNormProblem::new(0.5, pauli()).is_err());
        assert!(MaxNormProblem::new(2.0, vec![]).is_err());
    }

    #[test]
    fn complex_parsing() {
        assert_eq!(parse_complex("1.5-2j").unwrap(), Complex64::new(1.5, -2.0));
        assert_eq!(parse_complex("-3").unwrap(), c(-3.0));
        assert_eq!(parse_complex("2j").unwrap(), Complex64::new(0.0, 2.0));
        assert_eq!(parse_complex("-j").unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(parse_complex("1e-3+2.5e+1j").unwrap(), Complex64::new(1e-3, 25.0));
        assert!(parse_complex("1+").is_err());
        assert!(parse_complex("x").is_err());
    }

    #[test]
    fn family_round_trip() {
        let text = "2 2 2\n1+0j 0+0j\n0+0j -2+0j\n\n-3 0\n0 1\n";
        let prob = parse_family(text, Path::new("f.txt")).unwrap();
        assert_eq!(prob.family.len(), 2);
        let again = parse_family(&format_family(&prob), Path::new("g.txt")).unwrap();
        assert_eq!(again.family, prob.family);
        assert_eq!(again.p, 2.0);
    }

    #[test]
    fn parse_errors_carry_lines() {
        let e = parse_family("2 1 2\n1 0\n0 1 5\n", Path::new("f")).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }), "{e}");
        let e = parse_family("2 1 2\n1 1j\n1j 1\n", Path::new("f")).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e}");
        let e = parse_family("1 2 inf\n1\n", Path::new("f")).unwrap_err();
        assert!(matches!(e, Error::Parse { .. }), "{e}");
    }
}
