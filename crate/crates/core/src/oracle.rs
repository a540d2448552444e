//! Independent reference computations.
//!
//! Each function here recomputes a quantity by the most naive route available
//! (brute-force enumeration, direct summation, plain quadrature) and shares no
//! code with the production path it is compared against.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

/// Number of `m` in the box `[-ceil(sqrt k), ceil(sqrt k)]^d` with `|m|^2 = k`.
pub fn brute_force_count(d: usize, k: u64) -> u64 {
    brute_force_counts(d, k)[k as usize]
}

/// Histogram of `|m|^2` over the box of half-width `ceil(sqrt(max_k))`, truncated at `max_k`.
pub fn brute_force_counts(d: usize, max_k: u64) -> Vec<u64> {
    let r = (max_k as f64).sqrt().ceil() as i64;
    let side = (2 * r + 1) as usize;
    let mut hist = vec![0u64; max_k as usize + 1];
    let total = side.pow(d as u32);
    for idx in 0..total {
        let mut rest = idx;
        let mut norm = 0i64;
        for _ in 0..d {
            let x = (rest % side) as i64 - r;
            rest /= side;
            norm += x * x;
        }
        if norm as u64 <= max_k {
            hist[norm as usize] += 1;
        }
    }
    hist
}

/// Farey fractions by enumerating every reduced `a/q` and sorting by value.
pub fn farey_by_sorting(order: u64) -> Vec<(u64, u64)> {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 { a } else { gcd(b, a % b) }
    }
    let mut v: Vec<(u64, u64)> = vec![(0, 1)];
    for q in 1..=order {
        for a in 1..=q {
            if gcd(a, q) == 1 {
                v.push((a, q));
            }
        }
    }
    v.sort_by(|x, y| (x.0 * y.1).cmp(&(y.0 * x.1)));
    v
}

fn roots(q: u64) -> Vec<Complex64> {
    (0..q).map(|r| Complex64::from_polar(1.0, TAU * r as f64 / q as f64)).collect()
}

/// `q^{-d} sum_{n in (Z/q)^d} e((|n|^2 a + n.l)/q)` summed over all `q^d` residues.
pub fn gauss_sum_direct(a: i64, q: u64, ell: &[i64]) -> Complex64 {
    let d = ell.len();
    let table = roots(q);
    let qi = q as i64;
    let total = q.pow(d as u32);
    let mut acc = Complex64::new(0.0, 0.0);
    for idx in 0..total {
        let mut rest = idx;
        let mut e = 0i64;
        for &l in ell {
            let n = (rest % q) as i64;
            rest /= q;
            e = (e + n * n % qi * a.rem_euclid(qi) + n * l.rem_euclid(qi)) % qi;
        }
        acc += table[e as usize];
    }
    acc / total as f64
}

/// `sum_l e(k.l/q) G(a/q, l)` with every `G` evaluated by [`gauss_sum_direct`].
pub fn gauss_dft_direct(a: i64, q: u64, k: &[i64]) -> Complex64 {
    let d = k.len();
    let table = roots(q);
    let qi = q as i64;
    let total = q.pow(d as u32);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut ell = vec![0i64; d];
    for idx in 0..total {
        let mut rest = idx;
        let mut e = 0i64;
        for (i, l) in ell.iter_mut().enumerate() {
            *l = (rest % q) as i64;
            rest /= q;
            e = (e + k[i].rem_euclid(qi) * *l) % qi;
        }
        acc += table[e as usize] * gauss_sum_direct(a, q, &ell);
    }
    acc
}

/// Fourier transform of the normalized surface measure of `S^{d-1}` at a
/// vector of norm `r`, by tensor Gauss-Legendre / trapezoid quadrature in
/// hyperspherical angles with `nodes` points per angle and a generic
/// direction for the frequency.
pub fn sphere_ft_product_quadrature(d: usize, r: f64, nodes: usize) -> f64 {
    assert!(d >= 2);
    let dir: Vec<f64> = {
        let raw: Vec<f64> = (0..d).map(|i| 1.0 + 0.37 * i as f64 + 0.11 * (i * i) as f64).collect();
        let n = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
        raw.iter().map(|x| x / n).collect()
    };
    let eta: Vec<f64> = dir.iter().map(|x| x * r).collect();
    let gl = gauss_quad::legendre::GaussLegendre::new(nodes)
        .expect("at least two nodes")
        .into_node_weight_pairs();
    // Polar angles theta_1..theta_{d-2} in [0, pi] with weight sin^{d-1-j}, azimuth in [0, 2pi).
    let polar: Vec<(f64, f64)> = gl.iter().map(|&(x, w)| (0.5 * PI * (x + 1.0), 0.5 * PI * w)).collect();
    let n_az = 2 * nodes;
    let az: Vec<f64> = (0..n_az).map(|j| TAU * j as f64 / n_az as f64).collect();

    let levels = d - 2;
    let mut num = 0.0;
    let mut den = 0.0;
    let mut idx = vec![0usize; levels];
    loop {
        // Build the point's partial coordinates from the polar angles.
        let mut weight = 1.0;
        let mut coords = Vec::with_capacity(d);
        let mut s = 1.0;
        for (j, &i) in idx.iter().enumerate() {
            let (th, w) = polar[i];
            weight *= w * th.sin().powi((d - 2 - j) as i32);
            coords.push(s * th.cos());
            s *= th.sin();
        }
        for &phi in &az {
            let mut dot = 0.0;
            for (c, e) in coords.iter().zip(&eta) {
                dot += c * e;
            }
            dot += s * phi.cos() * eta[d - 2] + s * phi.sin() * eta[d - 1];
            num += weight * (TAU * dot).cos();
            den += weight;
        }
        // Advance the odometer over polar indices.
        let mut j = 0;
        loop {
            if j == levels {
                return num / den;
            }
            idx[j] += 1;
            if idx[j] < nodes {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

/// Randomized quasi-Monte-Carlo estimate of the same quantity: `samples`
/// points of a randomly shifted Kronecker sequence in `[0,1)^d`, pushed
/// through the inverse normal CDF and normalized onto the sphere. Each sample
/// is marginally uniform on the sphere.
pub fn sphere_ft_monte_carlo(d: usize, r: f64, samples: usize, seed: u64) -> f64 {
    use rand::{Rng, SeedableRng};
    use statrs::distribution::{ContinuousCDF, Normal};
    let normal = Normal::standard();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let shift: Vec<f64> = (0..d).map(|_| rng.random::<f64>()).collect();
    // Generalized golden ratio: the positive root of x^{d+1} = x + 1.
    let mut phi = 2.0f64;
    for _ in 0..100 {
        phi = (1.0 + phi).powf(1.0 / (d as f64 + 1.0));
    }
    let alpha: Vec<f64> = (1..=d).map(|j| phi.powi(-(j as i32)).fract()).collect();
    let dir: Vec<f64> = {
        let raw: Vec<f64> = (0..d).map(|i| 0.5 + 0.29 * i as f64).collect();
        let n = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
        raw.iter().map(|x| x / n).collect()
    };
    let mut acc = 0.0;
    let mut x = vec![0.0; d];
    for i in 0..samples {
        let mut norm2 = 0.0;
        for j in 0..d {
            let u = (shift[j] + (i as f64 + 1.0) * alpha[j]).fract();
            let u = u.clamp(1e-300, 1.0 - 1e-16);
            x[j] = normal.inverse_cdf(u);
            norm2 += x[j] * x[j];
        }
        let dot: f64 = x.iter().zip(&dir).map(|(a, b)| a * b).sum::<f64>() / norm2.sqrt();
        acc += (TAU * r * dot).cos();
    }
    acc / samples as f64
}

/// `e^{2 pi eps k} / r_d(k) * int_lo^hi e^{-2 pi i k s} sum_n e^{-2 pi |n|^2 (eps - i s)} e^{2 pi i n.xi} ds`
/// with the lattice sum truncated to `|n|^2 <= max_j`. The truncated sum is a
/// trigonometric polynomial in `s`, so each term integrates in closed form.
pub fn arc_integral_trig_poly(k: u64, xi: &[f64], eps: f64, lo: f64, hi: f64, max_j: usize) -> Complex64 {
    let d = xi.len();
    let r = brute_force_count(d, k);
    assert!(r > 0, "r_d(k) = 0");
    let one_dim = |x: f64| {
        let mut c = vec![Complex64::new(0.0, 0.0); max_j + 1];
        let mut n = 0i64;
        while (n * n) as usize <= max_j {
            c[(n * n) as usize] += Complex64::from_polar(1.0, TAU * n as f64 * x);
            if n > 0 {
                c[(n * n) as usize] += Complex64::from_polar(1.0, -TAU * n as f64 * x);
            }
            n += 1;
        }
        c
    };
    let mut coef = vec![Complex64::new(0.0, 0.0); max_j + 1];
    coef[0] = Complex64::new(1.0, 0.0);
    for &x in xi {
        let f = one_dim(x);
        let mut next = vec![Complex64::new(0.0, 0.0); max_j + 1];
        for (i, a) in coef.iter().enumerate() {
            for (j, b) in f.iter().enumerate().take(max_j + 1 - i) {
                next[i + j] += a * b;
            }
        }
        coef = next;
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, cj) in coef.iter().enumerate() {
        let weight = (-TAU * eps * (j as f64 - k as f64)).exp();
        let m = j as f64 - k as f64;
        let integral = if j as u64 == k {
            Complex64::new(hi - lo, 0.0)
        } else {
            (Complex64::from_polar(1.0, TAU * m * hi) - Complex64::from_polar(1.0, TAU * m * lo))
                / Complex64::new(0.0, TAU * m)
        };
        acc += cj * weight * integral;
    }
    acc / r as f64
}

/// Grid search for the maximal norm of a family of 2x2 hermitian matrices.
/// The envelope `[[a, b + ic], [b - ic, d]]` ranges over a 4-d box that is
/// repeatedly shrunk around the best feasible point found.
pub fn ncmax_2x2_grid(family: &[crate::ncmax::AlgebraElement], p: f64) -> f64 {
    let entries: Vec<[f64; 4]> = family
        .iter()
        .map(|x| {
            let m = x.matrix();
            assert_eq!(m.nrows(), 2);
            [m[(0, 0)].re, m[(0, 1)].re, m[(0, 1)].im, m[(1, 1)].re]
        })
        .collect();
    // Eigenvalues of [[a, z], [z*, d]].
    let eig = |a: f64, b: f64, c: f64, d: f64| {
        let mid = 0.5 * (a + d);
        let rad = (0.25 * (a - d) * (a - d) + b * b + c * c).sqrt();
        (mid - rad, mid + rad)
    };
    let feasible = |v: [f64; 4]| {
        entries.iter().all(|x| {
            [-1.0, 1.0].iter().all(|&s| {
                let (lo, _) = eig(v[0] + s * x[0], v[1] + s * x[1], v[2] + s * x[2], v[3] + s * x[3]);
                lo >= 0.0
            })
        })
    };
    let objective = |v: [f64; 4]| {
        let (lo, hi) = eig(v[0], v[1], v[2], v[3]);
        if p.is_infinite() {
            lo.abs().max(hi.abs())
        } else {
            (lo.abs().powf(p) + hi.abs().powf(p)).powf(1.0 / p)
        }
    };
    let bound: f64 = entries.iter().map(|x| eig(x[0], x[1], x[2], x[3]).1.abs().max(eig(x[0], x[1], x[2], x[3]).0.abs())).sum();
    let mut center = [bound, 0.0, 0.0, bound];
    let mut half = [bound, bound, bound, bound];
    let mut best = objective(center);
    const STEPS: i32 = 12;
    for _ in 0..60 {
        let mut improved = center;
        for i0 in -STEPS..=STEPS {
            for i1 in -STEPS..=STEPS {
                for i2 in -STEPS..=STEPS {
                    for i3 in -STEPS..=STEPS {
                        let v = [
                            center[0] + half[0] * i0 as f64 / STEPS as f64,
                            center[1] + half[1] * i1 as f64 / STEPS as f64,
                            center[2] + half[2] * i2 as f64 / STEPS as f64,
                            center[3] + half[3] * i3 as f64 / STEPS as f64,
                        ];
                        let f = objective(v);
                        if f < best && feasible(v) {
                            best = f;
                            improved = v;
                        }
                    }
                }
            }
        }
        center = improved;
        for h in &mut half {
            *h *= 0.5;
        }
        if half[0] < 1e-9 * bound {
            break;
        }
    }
    best
}
