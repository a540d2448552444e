use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

use latsphere::gauss::{gauss_sum, GaussTable};
use latsphere::lattice::sphere_shell;
use latsphere::multiplier::{apply_multiplier, exact_multiplier, FrequencyGrid, LatticeFunction, MultiplierField};
use latsphere::ncmax::{feasibility_residual, ncmax_norm, schatten_norm, AlgebraElement, MaxNormProblem};
use latsphere::transference::{auto_spherical_average, gamma_apply, AutomorphismFamily};
use latsphere::Exec;

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

fn lattice_fn(d: usize, side: usize, vals: &[(f64, f64)]) -> LatticeFunction {
    let mut f = LatticeFunction::zeros(d, side, 1).unwrap();
    for (slot, &(re, im)) in f.plane_mut(0, 0).iter_mut().zip(vals) {
        *slot = Complex64::new(re, im);
    }
    f
}

fn hermitian(n: usize, vals: &[(f64, f64)]) -> AlgebraElement {
    let m = DMatrix::from_fn(n, n, |i, j| Complex64::new(vals[i * n + j].0, vals[i * n + j].1));
    AlgebraElement::hermitian((&m + m.adjoint()) * Complex64::new(0.5, 0.0)).unwrap()
}

fn pair() -> impl Strategy<Value = (f64, f64)> {
    (-1.0..1.0f64, -1.0..1.0f64)
}

fn shell_field(d: usize, side: usize, k: u64) -> MultiplierField {
    let shell = sphere_shell(d, k).unwrap();
    let grid = FrequencyGrid::new(d, side).unwrap();
    MultiplierField::sample(grid, "m", Exec::Sequential, |xi| exact_multiplier(&shell, xi).unwrap())
}

proptest! {
    #![proptest_config(cfg(32))]

    #[test]
    fn multiplier_action_is_linear(
        f in prop::collection::vec(pair(), 64),
        g in prop::collection::vec(pair(), 64),
        a in pair(),
        b in pair(),
    ) {
        let field = shell_field(2, 8, 5);
        let (ff, gg) = (lattice_fn(2, 8, &f), lattice_fn(2, 8, &g));
        let (a, b) = (Complex64::new(a.0, a.1), Complex64::new(b.0, b.1));
        let mut combo = ff.clone();
        for (s, &y) in combo.plane_mut(0, 0).iter_mut().zip(gg.plane(0, 0)) {
            *s = a * *s + b * y;
        }
        let lhs = apply_multiplier(&field, &combo, Exec::Sequential).unwrap();
        let tf = apply_multiplier(&field, &ff, Exec::Sequential).unwrap();
        let tg = apply_multiplier(&field, &gg, Exec::Sequential).unwrap();
        let mut rhs = tf.clone();
        for (s, &y) in rhs.plane_mut(0, 0).iter_mut().zip(tg.plane(0, 0)) {
            *s = a * *s + b * y;
        }
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn multiplier_action_commutes_with_translation(
        f in prop::collection::vec(pair(), 216),
        by in prop::collection::vec(-6i64..6, 3),
    ) {
        let field = shell_field(3, 6, 3);
        let ff = lattice_fn(3, 6, &f);
        let a = apply_multiplier(&field, &ff.translate(&by), Exec::Sequential).unwrap();
        let b = apply_multiplier(&field, &ff, Exec::Sequential).unwrap().translate(&by);
        prop_assert!(a.max_abs_diff(&b) < 1e-12);
    }

    #[test]
    fn shells_are_closed_under_signed_permutations(
        d in 1usize..6,
        k in 0u64..40,
        perm_seed in any::<u64>(),
        signs in prop::collection::vec(any::<bool>(), 5),
    ) {
        let shell = sphere_shell(d, k).unwrap();
        let mut perm: Vec<usize> = (0..d).collect();
        let mut s = perm_seed;
        for i in (1..d).rev() {
            perm.swap(i, (s % (i as u64 + 1)) as usize);
            s /= i as u64 + 1;
        }
        let pts: std::collections::BTreeSet<Vec<i64>> = shell.points().map(|p| p.to_vec()).collect();
        for p in shell.points() {
            let q: Vec<i64> = (0..d).map(|i| if signs[i] { -p[perm[i]] } else { p[perm[i]] }).collect();
            prop_assert!(pts.contains(&q));
        }
    }

    #[test]
    fn gauss_sums_are_periodic_with_bounded_size(
        q in 1u64..40,
        a in 0i64..40,
        ell in prop::collection::vec(-50i64..50, 1..4),
        shift in prop::collection::vec(-3i64..3, 3),
    ) {
        prop_assume!(num_integer::gcd(a, q as i64) == 1);
        let t = GaussTable::new(a, q).unwrap();
        let g = t.eval(&ell);
        let moved: Vec<i64> = ell.iter().zip(&shift).map(|(l, s)| l + s * q as i64).collect();
        prop_assert!((g - t.eval(&moved)).norm() < 1e-12);
        prop_assert!(g.norm() <= 2f64.powf(ell.len() as f64 / 2.0) * (q as f64).powf(-(ell.len() as f64) / 2.0) + 1e-12);
        prop_assert!((g - gauss_sum(a, q, &ell).unwrap()).norm() < 1e-12);
    }
}

proptest! {
    #![proptest_config(cfg(16))]

    #[test]
    fn ncmax_is_homogeneous_and_sandwiched(
        vals in prop::collection::vec(pair(), 27),
        p_idx in 0usize..3,
        c in 0.1..10.0f64,
    ) {
        let p = [1.0, 2.0, f64::INFINITY][p_idx];
        let fam: Vec<AlgebraElement> = vals.chunks(9).map(|v| hermitian(3, v)).collect();
        let base = ncmax_norm(&MaxNormProblem::new(p, fam.clone()).unwrap(), 1e-9).unwrap();
        let scaled_fam: Vec<AlgebraElement> = fam.iter().map(|x| x.scaled(c)).collect();
        let scaled = ncmax_norm(&MaxNormProblem::new(p, scaled_fam).unwrap(), 1e-9).unwrap();
        prop_assert!((scaled.objective - c * base.objective).abs() <= 1e-6 * c * base.objective.max(1e-12));
        let (lo, hi) = MaxNormProblem::new(p, fam.clone()).unwrap().sandwich();
        prop_assert!(base.objective >= lo * (1.0 - 1e-6) && base.objective <= hi * (1.0 + 1e-6));
        prop_assert!(feasibility_residual(&base.envelope, &fam) >= -1e-8 * base.objective.max(1.0));
    }

    #[test]
    fn ncmax_grows_when_the_family_grows(
        vals in prop::collection::vec(pair(), 27),
        p_idx in 0usize..3,
    ) {
        let p = [1.0, 2.0, f64::INFINITY][p_idx];
        let fam: Vec<AlgebraElement> = vals.chunks(9).map(|v| hermitian(3, v)).collect();
        let small = ncmax_norm(&MaxNormProblem::new(p, fam[..2].to_vec()).unwrap(), 1e-9).unwrap();
        let big = ncmax_norm(&MaxNormProblem::new(p, fam).unwrap(), 1e-9).unwrap();
        prop_assert!(big.objective >= small.objective * (1.0 - 1e-6));
    }

    #[test]
    fn automorphisms_are_isometries_and_averages_contract(
        vals in prop::collection::vec(pair(), 9),
        n in prop::collection::vec(-5i64..5, 3),
        thetas in prop::collection::vec(0.0..1.0f64, 3),
        k in 1u64..12,
    ) {
        let fam = AutomorphismFamily::diagonal_phases(3, &thetas).unwrap();
        let x = hermitian(3, &vals);
        let y = gamma_apply(&fam, &n, &x).unwrap();
        for p in [1.0, 2.0, f64::INFINITY] {
            let nx = schatten_norm(&x, p);
            prop_assert!((schatten_norm(&y, p) - nx).abs() <= 1e-12 * nx.max(1.0));
        }
        if let Ok(avg) = auto_spherical_average(&fam, &x, k) {
            for p in [1.0, 2.0, f64::INFINITY] {
                prop_assert!(schatten_norm(&avg, p) <= schatten_norm(&x, p) * (1.0 + 1e-12) + 1e-14);
            }
        }
    }
}
