//! Shared helpers for the integration tests: toy schemes, an exhaustive
//! intersection oracle for rank-4 codimension-2 schemes, and a randomized
//! exact-linear-algebra suite.

#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use projcoh::arrangement::Arrangement;
use projcoh::exact_linalg::{hnf, invariant_factors, lattice_sum, snf, HermiteBasis, IntMatrix, RatMatrix};
use projcoh::scheme::{builtin_scheme, fract, SchemeSpec, SingularFamily};

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn lattice(n: usize, gens: &[&[i64]]) -> HermiteBasis {
    let g: Vec<Vec<BigInt>> = gens.iter().map(|g| g.iter().map(|&x| BigInt::from(x)).collect()).collect();
    HermiteBasis::from_generators(n, &g)
}

/// Two coordinate planes through the origin.
pub fn grid() -> SchemeSpec {
    let zero = vec![q(0, 1); 4];
    SchemeSpec::new(
        "grid",
        4,
        2,
        vec![
            SingularFamily::new("a", lattice(4, &[&[1, 0, 0, 0], &[0, 1, 0, 0]]), &zero),
            SingularFamily::new("b", lattice(4, &[&[0, 0, 1, 0], &[0, 0, 0, 1]]), &zero),
        ],
    )
    .unwrap()
}

/// Two coordinate planes, one shifted by a half period, and a diagonal plane.
pub fn shifted_triple() -> SchemeSpec {
    let zero = vec![q(0, 1); 4];
    SchemeSpec::new(
        "shifted_triple",
        4,
        2,
        vec![
            SingularFamily::new("a", lattice(4, &[&[1, 0, 0, 0], &[0, 1, 0, 0]]), &zero),
            SingularFamily::new(
                "b",
                lattice(4, &[&[0, 0, 1, 0], &[0, 0, 0, 1]]),
                &[q(1, 2), q(0, 1), q(0, 1), q(0, 1)],
            ),
            SingularFamily::new("c", lattice(4, &[&[1, 0, 1, 0], &[0, 1, 0, 1]]), &zero),
        ],
    )
    .unwrap()
}

/// A plane of index 3 against a coordinate plane, with a third-period shift.
pub fn index_three() -> SchemeSpec {
    SchemeSpec::new(
        "index_three",
        4,
        2,
        vec![
            SingularFamily::new("a", lattice(4, &[&[1, 0, 0, 0], &[0, 1, 0, 0]]), &vec![q(0, 1); 4]),
            SingularFamily::new(
                "b",
                lattice(4, &[&[1, 0, 3, 0], &[0, 1, 0, 1]]),
                &[q(0, 1), q(0, 1), q(1, 3), q(0, 1)],
            ),
        ],
    )
    .unwrap()
}

/// The toy schemes checked against the oracle.
pub fn oracle_schemes() -> Vec<SchemeSpec> {
    vec![
        grid(),
        shifted_triple(),
        index_three(),
        builtin_scheme("penrose").unwrap(),
        builtin_scheme("ttt").unwrap(),
    ]
}

fn in_span(dir: &HermiteBasis, v: &[BigRational]) -> bool {
    RatMatrix::from_int(dir.basis()).solve(v).is_some()
}

fn box_points(n: usize, lo: i64, hi: i64) -> Vec<Vec<BigInt>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for p in &out {
            for x in lo..hi {
                let mut p2 = p.clone();
                p2.push(BigInt::from(x));
                next.push(p2);
            }
        }
        out = next;
    }
    out
}

/// Does `p + ℤ^N` meet `o + V`? (searched over integer translates in a box)
fn on_subtorus(p: &[BigRational], o: &[BigRational], dir: &HermiteBasis) -> bool {
    box_points(p.len(), -3, 4).iter().any(|g| {
        let v: Vec<BigRational> = (0..p.len()).map(|i| &p[i] - &o[i] - BigRational::from_integer(g[i].clone())).collect();
        in_span(dir, &v)
    })
}

/// What the oracle finds in the unit cell.
#[derive(Debug, PartialEq, Eq)]
pub struct OracleCounts {
    /// Number of distinct plane tori.
    pub planes: usize,
    /// Intersection points, as representatives in `[0, 1)^N`.
    pub points: BTreeSet<Vec<BigRational>>,
    /// Sorted numbers of points on each plane torus.
    pub points_per_plane: Vec<usize>,
}

/// Exhaustive enumeration of the pairwise intersections of translates of the
/// families, reduced to the unit cell.
pub fn oracle(s: &SchemeSpec) -> OracleCounts {
    let n = s.ambient_rank();
    let fams = s.families();
    // distinct plane tori
    let mut reps: Vec<&SingularFamily> = Vec::new();
    for f in fams {
        let same = reps.iter().any(|r| {
            r.direction == f.direction && {
                let d: Vec<BigRational> = (0..n).map(|i| &f.offset[i] - &r.offset[i]).collect();
                on_subtorus(&d, &vec![BigRational::zero(); n], &f.direction)
            }
        });
        if !same {
            reps.push(f);
        }
    }
    let mut points = BTreeSet::new();
    for (i, a) in reps.iter().enumerate() {
        for b in &reps[i + 1..] {
            let sum = lattice_sum(&[a.direction.clone(), b.direction.clone()]).unwrap();
            let Some(index) = sum.index() else { continue };
            let m = index.to_i64().unwrap();
            let system = RatMatrix::from_int(&a.direction.basis().hcat(&b.direction.basis().neg()).unwrap());
            for g in box_points(n, 0, m) {
                let rhs: Vec<BigRational> = (0..n).map(|k| &b.offset[k] - &a.offset[k] - BigRational::from_integer(g[k].clone())).collect();
                let x = system.solve(&rhs).expect("transversal planes meet");
                let along = RatMatrix::from_int(a.direction.basis()).mul_vec(&x[..a.direction.rank()]);
                let p: Vec<BigRational> = (0..n).map(|k| fract(&(&a.offset[k] + BigRational::from_integer(g[k].clone()) + &along[k]))).collect();
                points.insert(p);
            }
        }
    }
    let mut per_plane: Vec<usize> = reps
        .iter()
        .map(|f| points.iter().filter(|p| on_subtorus(p, &f.offset, &f.direction)).count())
        .collect();
    per_plane.sort_unstable();
    OracleCounts {
        planes: reps.len(),
        points,
        points_per_plane: per_plane,
    }
}

/// The same quantities read off the closed arrangement.
pub fn arrangement_counts(arr: &Arrangement) -> OracleCounts {
    let counts = arr.counts();
    let points = arr.levels[0].iter().map(|c| c.offset.iter().map(fract).collect()).collect();
    let mut per_plane: Vec<usize> = (0..arr.count(1)).map(|i| counts.per_class[1][i][0]).collect();
    per_plane.sort_unstable();
    OracleCounts {
        planes: arr.count(1),
        points,
        points_per_plane: per_plane,
    }
}

// --- randomized exact linear algebra ---

fn matrix(max_dim: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(|(r, c)| {
        prop::collection::vec(-9i64..=9, r * c)
            .prop_map(move |v| IntMatrix::new(r, c, v.into_iter().map(BigInt::from).collect()).unwrap())
    })
}

/// A product of elementary column operations.
fn unimodular(n: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec((0..n, 0..n, -3i64..=3), 0..12).prop_map(move |ops| {
        let mut u = IntMatrix::identity(n);
        for (i, j, k) in ops {
            let mut e = IntMatrix::identity(n);
            if i == j {
                e.set(i, i, -BigInt::one());
            } else {
                e.set(j, i, BigInt::from(k));
            }
            u = u.mul(&e).unwrap();
        }
        u
    })
}

fn check_smith(a: &IntMatrix, w: &IntMatrix) -> Result<(), TestCaseError> {
    let d = snf(a);
    prop_assert_eq!(d.u.mul(a).unwrap().mul(&d.v).unwrap(), d.s.clone());
    prop_assert!(d.u.determinant().unwrap().abs().is_one());
    prop_assert!(d.v.determinant().unwrap().abs().is_one());
    for i in 0..d.s.rows() {
        for j in 0..d.s.cols() {
            let want = if i == j && i < d.invariants.len() { d.invariants[i].clone() } else { BigInt::zero() };
            prop_assert_eq!(d.s.get(i, j), &want);
        }
    }
    prop_assert!(d.invariants.iter().all(Signed::is_positive));
    prop_assert!(d.invariants.windows(2).all(|p| (&p[1] % &p[0]).is_zero()));
    prop_assert_eq!(invariant_factors(&a.mul(w).unwrap()), d.invariants);
    prop_assert_eq!(hnf(&a.mul(w).unwrap()), hnf(a));
    Ok(())
}

/// Runs `cases` random Smith/Hermite instances (dimensions ≤ 6, entries ≤ 9 in
/// absolute value) with a fixed seed; returns the first failure.
pub fn linalg_suite(cases: u32) -> Result<(), String> {
    let mut runner = TestRunner::new_with_rng(
        Config {
            cases,
            failure_persistence: None,
            ..Config::default()
        },
        proptest::test_runner::TestRng::deterministic_rng(proptest::test_runner::RngAlgorithm::ChaCha),
    );
    let strategy = matrix(6).prop_flat_map(|a| {
        let c = a.cols();
        (Just(a), unimodular(c))
    });
    runner
        .run(&strategy, |(a, w)| check_smith(&a, &w))
        .map_err(|e| e.to_string())
}
