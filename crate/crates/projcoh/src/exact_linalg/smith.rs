//! Smith normal form with unimodular transforms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::hermite::round_div;
use super::IntMatrix;

/// `u · a · v = s` with `s` diagonal and its nonzero diagonal entries forming
/// a divisibility chain.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    /// Nonzero diagonal entries of `s`, each dividing the next (units included).
    pub invariants: Vec<BigInt>,
}

/// Smith normal form of `a` together with the transforms.
pub fn snf(a: &IntMatrix) -> SmithDecomposition {
    let mut s = a.clone();
    let mut u = IntMatrix::identity(a.rows());
    let mut v = IntMatrix::identity(a.cols());
    let invariants = reduce(&mut s, Some((&mut u, &mut v)));
    SmithDecomposition { u, s, v, invariants }
}

/// Only the nonzero invariant factors of `a` (no transforms; faster).
pub fn invariant_factors(a: &IntMatrix) -> Vec<BigInt> {
    // Pre-compress with a Hermite reduction on the narrower side: the column
    // span (and hence the invariants) is unchanged, and the result is much
    // sparser than the input for the tall, sparse boundary maps we meet.
    let mut s = if a.rows() < a.cols() {
        let h = super::hnf(a);
        h.basis().clone()
    } else {
        let h = super::hnf(&a.transpose());
        h.basis().transpose()
    };
    reduce(&mut s, None)
}

fn min_nonzero(s: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..s.rows() {
        for j in t..s.cols() {
            let x = s.get(i, j);
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.magnitude() < s.get(bi, bj).magnitude()) {
                best = Some((i, j));
                if x.magnitude() == &num_bigint::BigUint::from(1u8) {
                    return best;
                }
            }
        }
    }
    best
}

fn reduce(s: &mut IntMatrix, mut tr: Option<(&mut IntMatrix, &mut IntMatrix)>) -> Vec<BigInt> {
    let rows = s.rows();
    let cols = s.cols();
    let mut invariants = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = min_nonzero(s, t) else { break };
        s.swap_rows(t, pi);
        s.swap_columns(t, pj);
        if let Some((u, v)) = tr.as_mut() {
            u.swap_rows(t, pi);
            v.swap_columns(t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if s.get(i, t).is_zero() {
                    continue;
                }
                let q = round_div(s.get(i, t), s.get(t, t));
                s.row_axpy(i, t, &q);
                if let Some((u, _)) = tr.as_mut() {
                    u.row_axpy(i, t, &q);
                }
                if !s.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if s.get(t, j).is_zero() {
                    continue;
                }
                let q = round_div(s.get(t, j), s.get(t, t));
                s.col_axpy(j, t, &q);
                if let Some((_, v)) = tr.as_mut() {
                    v.col_axpy(j, t, &q);
                }
                if !s.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                // move the smallest remainder in row/column t onto the pivot
                let mut best = (t, t);
                for i in t + 1..rows {
                    let x = s.get(i, t);
                    if !x.is_zero() && x.magnitude() < s.get(best.0, best.1).magnitude() {
                        best = (i, t);
                    }
                }
                for j in t + 1..cols {
                    let x = s.get(t, j);
                    if !x.is_zero() && x.magnitude() < s.get(best.0, best.1).magnitude() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    s.swap_rows(t, best.0);
                    if let Some((u, _)) = tr.as_mut() {
                        u.swap_rows(t, best.0);
                    }
                }
                if best.1 != t {
                    s.swap_columns(t, best.1);
                    if let Some((_, v)) = tr.as_mut() {
                        v.swap_columns(t, best.1);
                    }
                }
                continue;
            }
            // row and column t are clear; enforce divisibility of the remainder
            let piv = s.get(t, t).clone();
            let mut offender = None;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !s.get(i, j).is_multiple_of(&piv) {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => {
                    // row_t += row_i
                    let minus_one = BigInt::from(-1);
                    s.row_axpy(t, i, &minus_one);
                    if let Some((u, _)) = tr.as_mut() {
                        u.row_axpy(t, i, &minus_one);
                    }
                }
                None => break,
            }
        }
        if s.get(t, t).is_negative() {
            s.negate_row(t);
            if let Some((u, _)) = tr.as_mut() {
                u.negate_row(t);
            }
        }
        invariants.push(s.get(t, t).clone());
        t += 1;
    }
    invariants
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check(a: &IntMatrix) -> SmithDecomposition {
        let d = snf(a);
        assert_eq!(d.u.mul(a).unwrap().mul(&d.v).unwrap(), d.s);
        assert_eq!(d.u.determinant().unwrap().abs(), BigInt::from(1));
        assert_eq!(d.v.determinant().unwrap().abs(), BigInt::from(1));
        d
    }

    #[test]
    fn two_by_two() {
        // oracle: d1 = gcd of entries, d1·d2 = |det|
        let a = IntMatrix::from_rows_i64(&[vec![2, 4], vec![6, 8]]);
        let d = check(&a);
        assert_eq!(d.invariants, bi(&[2, 4]));
        let g = [2i64, 4, 6, 8].iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
        assert_eq!(BigInt::from(g), d.invariants[0]);
        assert_eq!(
            &d.invariants[0] * &d.invariants[1],
            a.determinant().unwrap().abs()
        );
        assert_eq!(invariant_factors(&a), bi(&[2, 4]));
    }

    #[test]
    fn coprime_diagonal_merges() {
        let a = IntMatrix::diagonal(&bi(&[2, 3]));
        assert_eq!(check(&a).invariants, bi(&[1, 6]));
    }

    #[test]
    fn zero_matrix() {
        let a = IntMatrix::zeros(3, 2);
        let d = check(&a);
        assert!(d.invariants.is_empty());
        assert!(d.s.is_zero());
    }

    #[test]
    fn deterministic() {
        let a = IntMatrix::from_rows_i64(&[vec![3, 5, 7], vec![-2, 4, 0], vec![9, 1, 1]]);
        assert_eq!(snf(&a), snf(&a));
    }
}
