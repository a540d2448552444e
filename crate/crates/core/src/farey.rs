//! Farey fractions of a fixed order and the arc partition of `[0, 1]` they induce.
//!
//! All arithmetic here is exact. Arc endpoints turn out to be mediants of
//! neighbouring fractions, which is what makes the partition exact.

use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FareyFraction {
    pub a: u64,
    pub q: u64,
}

impl FareyFraction {
    pub fn new(a: u64, q: u64) -> Result<Self> {
        if q == 0 || a > q || a.gcd(&q) != 1 {
            return Err(Error::InvalidInput(format!("{a}/{q} is not a reduced fraction in [0,1]")));
        }
        Ok(Self { a, q })
    }

    pub fn value(&self) -> Rational {
        Rational::new(self.a as i64, self.q as i64)
    }

    pub fn to_f64(&self) -> f64 {
        self.a as f64 / self.q as f64
    }
}

impl fmt::Display for FareyFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.a, self.q)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FareySequence {
    pub order: u64,
    pub fractions: Vec<FareyFraction>,
}

/// Ascending Farey fractions of order `order`, by the next-term recurrence.
pub fn farey_sequence(order: u64) -> Result<FareySequence> {
    if order == 0 {
        return Err(Error::InvalidInput("Farey order must be >= 1".into()));
    }
    let n = order;
    let (mut a, mut b, mut c, mut d) = (0u64, 1u64, 1u64, n);
    let mut fractions = vec![FareyFraction { a, q: b }];
    while c <= n {
        let k = (n + b) / d;
        let next = (k * c - a, k * d - b);
        fractions.push(FareyFraction { a: c, q: d });
        a = c;
        b = d;
        c = next.0;
        d = next.1;
        if a == 1 && b == 1 {
            break;
        }
    }
    Ok(FareySequence { order, fractions })
}

impl FareySequence {
    /// Checks `a'q - aq' = 1` and `q + q' > order` for every neighbouring pair.
    pub fn check_neighbours(&self) -> std::result::Result<(), String> {
        let f = &self.fractions;
        if f.first() != Some(&FareyFraction { a: 0, q: 1 }) || f.last() != Some(&FareyFraction { a: 1, q: 1 }) {
            return Err("sequence must run from 0/1 to 1/1".into());
        }
        for w in f.windows(2) {
            let (x, y) = (w[0], w[1]);
            if x.q > self.order || y.q > self.order {
                return Err(format!("denominator above order at {x}, {y}"));
            }
            if (y.a * x.q) as i128 - (x.a * y.q) as i128 != 1 {
                return Err(format!("determinant != 1 at {x}, {y}"));
            }
            if x.q + y.q <= self.order {
                return Err(format!("q + q' <= order at {x}, {y}"));
            }
        }
        Ok(())
    }
}

/// The arc `I(a/q)`. Half-open `[left, right)` except for the arc of `1/1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MajorArc {
    pub center: FareyFraction,
    pub left: Rational,
    pub right: Rational,
    pub alpha: Rational,
    pub beta: Rational,
    pub closed_right: bool,
    /// Farey order the arc was built for.
    pub order: u64,
}

impl MajorArc {
    pub fn contains(&self, s: Rational) -> bool {
        s >= self.left && (s < self.right || (self.closed_right && s == self.right))
    }

    /// Range of `t = s - a/q` over the arc.
    pub fn t_range(&self) -> (Rational, Rational) {
        let c = self.center.value();
        (self.left - c, self.right - c)
    }

    pub fn width(&self) -> Rational {
        self.right - self.left
    }
}

pub fn major_arcs(seq: &FareySequence) -> Vec<MajorArc> {
    let lam = seq.order as i64;
    let f = &seq.fractions;
    let n = f.len();
    let end_ab = Rational::new(lam, 1 + lam);
    (0..n)
        .map(|i| {
            let c = f[i];
            let q = c.q as i64;
            let (alpha, beta) = if c.q == 1 {
                (end_ab, end_ab)
            } else {
                (
                    Rational::new(lam, q + f[i + 1].q as i64),
                    Rational::new(lam, q + f[i - 1].q as i64),
                )
            };
            let center = c.value();
            let denom = Rational::from_integer(q * lam);
            let left = if i == 0 { Rational::from_integer(0) } else { center - beta / denom };
            let right = if i == n - 1 { Rational::from_integer(1) } else { center + alpha / denom };
            MajorArc {
                center: c,
                left,
                right,
                alpha,
                beta,
                closed_right: i == n - 1,
                order: seq.order,
            }
        })
        .collect()
}

/// Verifies, exactly, that sorted arcs tile `[0, 1]` without overlap.
pub fn check_partition(arcs: &[MajorArc]) -> std::result::Result<(), String> {
    let zero = Rational::from_integer(0);
    let one = Rational::from_integer(1);
    let half = Rational::new(1, 2);
    match (arcs.first(), arcs.last()) {
        (Some(f), Some(l)) if f.left == zero && l.right == one && l.closed_right => {}
        _ => return Err("arcs must start at 0 and end closed at 1".into()),
    }
    for (i, arc) in arcs.iter().enumerate() {
        if arc.left >= arc.right {
            return Err(format!("empty arc at {}", arc.center));
        }
        if !arc.contains(arc.center.value()) {
            return Err(format!("arc of {} misses its center", arc.center));
        }
        if arc.closed_right != (i + 1 == arcs.len()) {
            return Err(format!("only the final arc may be right-closed ({})", arc.center));
        }
        if !(arc.alpha > half && arc.alpha < one && arc.beta > half && arc.beta < one) && arc.order > 1 {
            return Err(format!("alpha/beta outside (1/2, 1) at {}", arc.center));
        }
        if i + 1 < arcs.len() && arc.right != arcs[i + 1].left {
            return Err(format!("gap or overlap between {} and {}", arc.center, arcs[i + 1].center));
        }
    }
    Ok(())
}

/// The arc containing `s` and the offset `t = s - a/q`.
pub fn locate_arc(s: Rational, arcs: &[MajorArc]) -> Result<(FareyFraction, Rational)> {
    let zero = Rational::from_integer(0);
    let one = Rational::from_integer(1);
    if s < zero || s > one || arcs.is_empty() {
        return Err(Error::InvalidInput(format!("{s} is outside [0, 1]")));
    }
    let idx = arcs.partition_point(|arc| arc.left <= s) - 1;
    let arc = &arcs[idx];
    debug_assert!(arc.contains(s));
    Ok((arc.center, s - arc.center.value()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn sequence_examples() {
        let f1 = farey_sequence(1).unwrap();
        assert_eq!(f1.fractions, vec![FareyFraction { a: 0, q: 1 }, FareyFraction { a: 1, q: 1 }]);
        let f3: Vec<_> = farey_sequence(3).unwrap().fractions.iter().map(|f| (f.a, f.q)).collect();
        assert_eq!(f3, vec![(0, 1), (1, 3), (1, 2), (2, 3), (1, 1)]);
        let f5 = farey_sequence(5).unwrap();
        assert_eq!(f5.fractions.len(), 11);
        let i = f5.fractions.iter().position(|f| (f.a, f.q) == (2, 5)).unwrap();
        assert_eq!(f5.fractions[i + 1], FareyFraction { a: 1, q: 2 });
        assert_eq!(r(1, 2) - r(2, 5), r(1, 10));
    }

    #[test]
    fn sequence_matches_sort_oracle() {
        for order in 1..=40 {
            let got: Vec<_> = farey_sequence(order).unwrap().fractions.iter().map(|f| (f.a, f.q)).collect();
            assert_eq!(got, oracle::farey_by_sorting(order), "order {order}");
        }
    }

    #[test]
    fn arc_examples() {
        let arcs = major_arcs(&farey_sequence(3).unwrap());
        let half = arcs.iter().find(|a| a.center == FareyFraction { a: 1, q: 2 }).unwrap();
        assert_eq!((half.left, half.right), (r(2, 5), r(3, 5)));
        assert_eq!((half.alpha, half.beta), (r(3, 5), r(3, 5)));
        assert_eq!((arcs[0].left, arcs[0].right), (r(0, 1), r(1, 4)));
        assert_eq!(arcs[0].alpha, r(3, 4));

        let arcs1 = major_arcs(&farey_sequence(1).unwrap());
        assert_eq!(arcs1.len(), 2);
        assert_eq!((arcs1[0].left, arcs1[0].right), (r(0, 1), r(1, 2)));
        assert_eq!((arcs1[1].left, arcs1[1].right), (r(1, 2), r(1, 1)));
        assert!(arcs1[1].closed_right && !arcs1[0].closed_right);
    }

    #[test]
    fn locate_examples() {
        let arcs = major_arcs(&farey_sequence(3).unwrap());
        assert_eq!(locate_arc(r(1, 2), &arcs).unwrap(), (FareyFraction { a: 1, q: 2 }, r(0, 1)));
        assert_eq!(locate_arc(r(39, 100), &arcs).unwrap(), (FareyFraction { a: 1, q: 3 }, r(39, 100) - r(1, 3)));
        assert_eq!(locate_arc(r(1, 1), &arcs).unwrap(), (FareyFraction { a: 1, q: 1 }, r(0, 1)));
        assert!(locate_arc(r(11, 10), &arcs).is_err());
    }

    #[test]
    fn partition_and_neighbours_small_orders() {
        for order in 1..=60 {
            let seq = farey_sequence(order).unwrap();
            seq.check_neighbours().unwrap();
            check_partition(&major_arcs(&seq)).unwrap();
        }
    }

    #[test]
    fn partition_check_rejects_gaps() {
        let mut arcs = major_arcs(&farey_sequence(4).unwrap());
        arcs[2].right -= r(1, 1000);
        assert!(check_partition(&arcs).is_err());
    }

    #[test]
    fn rejects_bad_fraction() {
        assert!(FareyFraction::new(2, 4).is_err());
        assert!(FareyFraction::new(3, 2).is_err());
        assert!(farey_sequence(0).is_err());
    }
}
