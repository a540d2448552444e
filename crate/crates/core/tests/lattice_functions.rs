use num_complex::Complex64;

use latsphere::lattice::sphere_shell;
use latsphere::multiplier::{apply_multiplier, exact_multiplier, spherical_convolve, FrequencyGrid, LatticeFunction, MultiplierField};
use latsphere::Exec;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn bumpy(d: usize, side: usize) -> LatticeFunction {
    LatticeFunction::scalar_from_fn(d, side, |n| {
        let s: i64 = n.iter().enumerate().map(|(i, &x)| (i as i64 + 2) * x * x).sum();
        Complex64::new((s % 7) as f64 - 3.0, (n[0] - n[d - 1]) as f64 * 0.25)
    })
    .unwrap()
}

#[test]
fn constant_one_multiplier_is_identity() {
    let f = bumpy(3, 6);
    let one = MultiplierField::constant(f.grid, c(1.0));
    let g = apply_multiplier(&one, &f, Exec::Parallel).unwrap();
    assert!(g.max_abs_diff(&f) < 1e-13);
}

#[test]
fn delta_averages_to_the_shell_indicator() {
    let (d, side, k) = (3, 8, 2);
    let mut delta = LatticeFunction::zeros(d, side, 1).unwrap();
    delta.set(&[0, 0, 0], 0, 0, c(1.0));
    let shell = sphere_shell(d, k).unwrap();
    let out = spherical_convolve(&shell, &delta, Exec::Sequential).unwrap();
    let inv = 1.0 / shell.len() as f64;
    let mut j = vec![0usize; d];
    for flat in 0..out.grid.len() {
        out.grid.index_of(flat, &mut j);
        let centred: Vec<i64> = j.iter().map(|&x| if x >= side / 2 { x as i64 - side as i64 } else { x as i64 }).collect();
        let on_shell = centred.iter().map(|x| x * x).sum::<i64>() == k as i64;
        let want = if on_shell { inv } else { 0.0 };
        assert!((out.plane(0, 0)[flat] - c(want)).norm() < 1e-15);
    }
}

#[test]
fn direct_average_matches_fft_multiplier() {
    let (d, side, k) = (3, 8, 2);
    let shell = sphere_shell(d, k).unwrap();
    let f = bumpy(d, side);
    let grid = FrequencyGrid::new(d, side).unwrap();
    let field = MultiplierField::sample(grid, "m", Exec::Parallel, |xi| exact_multiplier(&shell, xi).unwrap());
    assert!(field.max_abs_imag() < 1e-12);
    let via_fft = apply_multiplier(&field, &f, Exec::Parallel).unwrap();
    let direct = spherical_convolve(&shell, &f, Exec::Parallel).unwrap();
    assert!(via_fft.max_abs_diff(&direct) < 1e-10);
}

#[test]
fn matrix_valued_functions_act_entrywise() {
    let (d, side) = (2, 6);
    let mut f = LatticeFunction::zeros(d, side, 2).unwrap();
    let scalars: Vec<LatticeFunction> = (0..4)
        .map(|e| LatticeFunction::scalar_from_fn(d, side, |n| Complex64::new((n[0] * (e + 1) - n[1]) as f64, e as f64)).unwrap())
        .collect();
    for (e, s) in scalars.iter().enumerate() {
        f.plane_mut(e / 2, e % 2).copy_from_slice(s.plane(0, 0));
    }
    let shell = sphere_shell(d, 5).unwrap();
    let field = MultiplierField::sample(f.grid, "m", Exec::Sequential, |xi| exact_multiplier(&shell, xi).unwrap());
    let g = apply_multiplier(&field, &f, Exec::Sequential).unwrap();
    for (e, s) in scalars.iter().enumerate() {
        let want = apply_multiplier(&field, s, Exec::Sequential).unwrap();
        assert!(g.entry(e / 2, e % 2).max_abs_diff(&want) < 1e-12);
    }
}

#[test]
fn exec_modes_give_identical_bits() {
    let shell = sphere_shell(3, 3).unwrap();
    let f = bumpy(3, 8);
    let a = spherical_convolve(&shell, &f, Exec::Parallel).unwrap();
    let b = spherical_convolve(&shell, &f, Exec::Sequential).unwrap();
    assert_eq!(a, b);
}
