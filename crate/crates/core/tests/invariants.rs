use latsphere::farey::{farey_sequence, locate_arc, major_arcs, Rational};
use latsphere::lattice::rep_counts;
use latsphere::lattice::sphere_shell;
use latsphere::multiplier::{exact_multiplier, FrequencyGrid};

fn abs(t: Rational) -> Rational {
    if t < Rational::from_integer(0) { -t } else { t }
}

#[test]
fn five_dim_counts_grow_like_k_to_three_halves() {
    let t = rep_counts(5, 200).unwrap();
    let ratios: Vec<f64> = (10..=200u64).map(|k| t.counts[k as usize] as f64 / (k as f64).powf(1.5)).collect();
    let hi = ratios.iter().cloned().fold(f64::MIN, f64::max);
    let lo = ratios.iter().cloned().fold(f64::MAX, f64::min);
    assert!(lo > 0.0 && hi / lo < 50.0, "band {lo} .. {hi}");
}

#[test]
fn grid_points_locate_to_one_short_arc() {
    for order in 1..=50u64 {
        let arcs = major_arcs(&farey_sequence(order).unwrap());
        for m in 0..=10_000i64 {
            let s = Rational::new(m, 10_000);
            let (c, t) = locate_arc(s, &arcs).unwrap();
            let idx = arcs.iter().position(|a| a.center == c).unwrap();
            assert!(arcs[idx].contains(s));
            for j in [idx.wrapping_sub(1), idx + 1] {
                if let Some(other) = arcs.get(j) {
                    assert!(!other.contains(s), "order {order}: {s} in two arcs");
                }
            }
            let limit = Rational::new(1, (c.q * order) as i64);
            assert!(abs(t) < limit || (order == 1 && abs(t) <= limit), "order {order}: t = {t} at {c}");
        }
    }
}

#[test]
fn alpha_beta_inside_half_one() {
    let half = Rational::new(1, 2);
    let one = Rational::from_integer(1);
    for order in 2..=200u64 {
        for arc in major_arcs(&farey_sequence(order).unwrap()) {
            assert!(arc.alpha > half && arc.alpha < one, "order {order} at {}", arc.center);
            assert!(arc.beta > half && arc.beta < one, "order {order} at {}", arc.center);
        }
    }
}

#[test]
fn multiplier_is_real_and_bounded_on_the_grid() {
    for (d, k, side) in [(3usize, 6u64, 12usize), (5, 4, 6)] {
        let shell = sphere_shell(d, k).unwrap();
        let grid = FrequencyGrid::new(d, side).unwrap();
        assert!((exact_multiplier(&shell, &vec![0.0; d]).unwrap() - 1.0).norm() < 1e-15);
        for i in 0..grid.len() {
            let v = exact_multiplier(&shell, &grid.frequency(i)).unwrap();
            assert!(v.im.abs() < 1e-12 && v.norm() <= 1.0 + 1e-12);
        }
    }
}
