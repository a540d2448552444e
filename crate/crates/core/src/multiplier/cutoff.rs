//! Smooth tensor-product cutoffs around the origin of the frequency cube.
//!
//! The one-dimensional profile is built from `h(x) = exp(-1/x)` (`x > 0`,
//! else 0) through the transition `S(x) = h(x) / (h(x) + h(1 - x))`, which
//! rises from 0 at `x <= 0` to 1 at `x >= 1` and is `C^infinity`.
//!
//! * `phi(u)`: 1 for `|u| <= 1/8`, 0 for `|u| >= 1/4`, `S((1/4 - |u|) * 8)` between.
//! * `psi(u)`: 1 for `|u| <= 1/4`, 0 for `|u| >= 1/2`, `S((1/2 - |u|) * 4)` between.
//!
//! The q-scaled versions are `phi_q(xi) = prod_i phi(q xi_i)`, likewise for psi.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutoffKind {
    Phi,
    Psi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CutoffSpec {
    pub kind: CutoffKind,
    pub q: u64,
}

fn h(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp()
    } else {
        0.0
    }
}

/// The smooth step `S`.
pub fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        let a = h(x);
        a / (a + h(1.0 - x))
    }
}

impl CutoffKind {
    /// `(inner, outer)` half-widths of the plateau and of the support.
    pub fn radii(self) -> (f64, f64) {
        match self {
            CutoffKind::Phi => (0.125, 0.25),
            CutoffKind::Psi => (0.25, 0.5),
        }
    }

    pub fn profile(self, u: f64) -> f64 {
        let (inner, outer) = self.radii();
        let u = u.abs();
        if u <= inner {
            1.0
        } else if u >= outer {
            0.0
        } else {
            smooth_step((outer - u) / (outer - inner))
        }
    }
}

pub fn cutoff(spec: CutoffSpec, xi: &[f64]) -> f64 {
    let q = spec.q as f64;
    let mut v = 1.0;
    for &x in xi {
        v *= spec.kind.profile(q * x);
        if v == 0.0 {
            break;
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn phi(q: u64) -> CutoffSpec {
        CutoffSpec { kind: CutoffKind::Phi, q }
    }

    #[test]
    fn examples() {
        assert_eq!(cutoff(phi(1), &[0.0; 5]), 1.0);
        assert_eq!(cutoff(phi(1), &[0.3, 0.0, 0.0, 0.0, 0.0]), 0.0);
        let v = cutoff(phi(2), &[0.09, 0.0, 0.0, 0.0, 0.0]);
        assert!(v > 0.0 && v < 1.0);
        // 2 * 0.09 = 0.18, so S((0.25 - 0.18) * 8) = S(0.56).
        let expected = (-1.0 / 0.56f64).exp() / ((-1.0 / 0.56f64).exp() + (-1.0 / 0.44f64).exp());
        assert!((v - expected).abs() < 1e-15);
    }

    #[test]
    fn monotone_on_transition() {
        let mut prev = 1.0;
        for i in 0..=200 {
            let x = 1.0 / 16.0 + i as f64 * (1.0 / 16.0) / 200.0;
            let v = cutoff(phi(2), &[x]);
            assert!(v <= prev + 1e-15);
            prev = v;
        }
        assert_eq!(cutoff(phi(2), &[1.0 / 16.0]), 1.0);
        assert_eq!(cutoff(phi(2), &[1.0 / 8.0]), 0.0);
    }

    #[test]
    fn psi_is_one_on_phi_support() {
        for q in [1u64, 3, 7] {
            for i in 0..100 {
                let x = -0.3 + 0.006 * i as f64;
                let xi = [x / q as f64, 0.5 * x / q as f64];
                let p = cutoff(phi(q), &xi);
                let s = cutoff(CutoffSpec { kind: CutoffKind::Psi, q }, &xi);
                assert_eq!(p * s, p);
            }
        }
    }

    #[test]
    fn smooth_step_symmetry() {
        for i in 0..=50 {
            let x = i as f64 / 50.0;
            assert!((smooth_step(x) + smooth_step(1.0 - x) - 1.0).abs() < 1e-15);
        }
    }
}
