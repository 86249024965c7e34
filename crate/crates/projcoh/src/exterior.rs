//! Exterior powers `Λ_k ℤ^N` and the maps induced by lattice inclusions.
//!
//! The basis of `Λ_k ℤ^N` is `e_S = e_{s₁} ∧ … ∧ e_{s_k}` for strictly increasing
//! index sets `S`, ordered lexicographically. A linear map with matrix `A`
//! induces `Λ_k A`, whose `(S, T)` entry is the minor of `A` with rows `S` and
//! columns `T` (no extra sign).

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exact_linalg::{rank, HermiteBasis, IntMatrix, LinalgError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExteriorError {
    #[error("degree {k} exceeds ambient rank {n}")]
    DegreeTooLarge { n: usize, k: usize },
    #[error("maps disagree on ambient rank or degree")]
    Mismatch,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Binomial coefficient `C(n, k)` (zero when `k > n`).
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// The lexicographically ordered `k`-subsets of `{0, …, n−1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WedgeIndex {
    n: usize,
    k: usize,
    subsets: Vec<Vec<usize>>,
    position: HashMap<Vec<usize>, usize>,
}

impl WedgeIndex {
    pub fn new(n: usize, k: usize) -> Self {
        let mut subsets = Vec::with_capacity(binomial(n, k));
        let mut cur = Vec::with_capacity(k);
        fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(n, k, i + 1, cur, out);
                cur.pop();
            }
        }
        if k <= n {
            rec(n, k, 0, &mut cur, &mut subsets);
        }
        let position = subsets
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Self {
            n,
            k,
            subsets,
            position,
        }
    }

    pub fn ambient_rank(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.subsets
    }

    /// Position of an increasing index set.
    pub fn position(&self, subset: &[usize]) -> Option<usize> {
        self.position.get(subset).copied()
    }
}

/// `Λ_k` of a lattice inclusion, in ambient wedge coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExteriorMap {
    pub source_basis: HermiteBasis,
    pub degree: usize,
    /// `C(N,k) × C(m,k)` matrix of `k × k` minors.
    pub matrix: IntMatrix,
}

/// `Λ_k` of an arbitrary integer matrix (`rows × cols` gives `C(rows,k) × C(cols,k)`).
pub fn exterior_power_of_matrix(a: &IntMatrix, k: usize) -> IntMatrix {
    let rows = WedgeIndex::new(a.rows(), k);
    let cols = WedgeIndex::new(a.cols(), k);
    let mut out = IntMatrix::zeros(rows.len(), cols.len());
    if k == 0 {
        if !out.entries().is_empty() {
            out.set(0, 0, BigInt::one());
        }
        return out;
    }
    for (j, t) in cols.subsets().iter().enumerate() {
        let sub = a.select_columns(t);
        if sub.is_zero() {
            continue;
        }
        for (i, s) in rows.subsets().iter().enumerate() {
            let minor = sub.select_rows(s);
            let d = minor.determinant().expect("square minor");
            if !d.is_zero() {
                out.set(i, j, d);
            }
        }
    }
    out
}

/// `Λ_k` of the inclusion of the lattice spanned by `basis`.
pub fn exterior_power_map(basis: &HermiteBasis, k: usize) -> Result<ExteriorMap, ExteriorError> {
    let n = basis.ambient_rank();
    if k > n {
        return Err(ExteriorError::DegreeTooLarge { n, k });
    }
    Ok(ExteriorMap {
        source_basis: basis.clone(),
        degree: k,
        matrix: exterior_power_of_matrix(basis.basis(), k),
    })
}

/// Rank of the subgroup of `Λ_k ℤ^N` generated by the images of the maps.
pub fn generated_rank(maps: &[ExteriorMap]) -> Result<usize, ExteriorError> {
    let Some(first) = maps.first() else {
        return Ok(0);
    };
    let n = first.source_basis.ambient_rank();
    let k = first.degree;
    if maps
        .iter()
        .any(|m| m.source_basis.ambient_rank() != n || m.degree != k)
    {
        return Err(ExteriorError::Mismatch);
    }
    let blocks: Vec<IntMatrix> = maps.iter().map(|m| m.matrix.clone()).collect();
    let all = IntMatrix::hcat_all(binomial(n, k), &blocks)?;
    Ok(rank(&all))
}

/// Wedge `v₁ ∧ … ∧ v_k` of rational vectors of length `n`, in wedge coordinates.
pub fn wedge(n: usize, vectors: &[Vec<BigRational>]) -> Vec<BigRational> {
    let k = vectors.len();
    let idx = WedgeIndex::new(n, k);
    idx.subsets()
        .iter()
        .map(|s| {
            let m: Vec<Vec<BigRational>> = s
                .iter()
                .map(|&i| vectors.iter().map(|v| v[i].clone()).collect())
                .collect();
            rational_determinant(m)
        })
        .collect()
}

/// Wedge of integer vectors.
pub fn wedge_int(n: usize, vectors: &[Vec<BigInt>]) -> Vec<BigInt> {
    let m = IntMatrix::from_columns(n, vectors);
    exterior_power_of_matrix(&m, vectors.len()).column(0)
}

fn rational_determinant(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        let piv = m[c][c].clone();
        det *= &piv;
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let f = &m[r][c] / &piv;
            for j in c..n {
                let delta = &f * &m[c][j];
                m[r][j] -= delta;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::hnf;
    use proptest::prelude::*;

    fn lat(n: usize, gens: &[&[i64]]) -> HermiteBasis {
        let g: Vec<Vec<BigInt>> = gens
            .iter()
            .map(|g| g.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        HermiteBasis::from_generators(n, &g)
    }

    #[test]
    fn wedge_index_order() {
        let w = WedgeIndex::new(4, 2);
        let expect: Vec<Vec<usize>> = vec![
            vec![0, 1],
            vec![0, 2],
            vec![0, 3],
            vec![1, 2],
            vec![1, 3],
            vec![2, 3],
        ];
        assert_eq!(w.subsets(), &expect[..]);
        assert_eq!(w.position(&[1, 3]), Some(4));
        assert_eq!(WedgeIndex::new(6, 3).len(), 20);
        assert!(WedgeIndex::new(2, 3).is_empty());
    }

    #[test]
    fn octagonal_mirror_stabilizer_plucker_vector() {
        // ⟨v₁, v₂ − v₄⟩: minors by hand are (1, 0, −1, 0, 0, 0)
        let l = lat(4, &[&[1, 0, 0, 0], &[0, 1, 0, -1]]);
        let m = exterior_power_map(&l, 2).unwrap();
        let col: Vec<i64> = m
            .matrix
            .column(0)
            .iter()
            .map(|x| i64::try_from(x).unwrap())
            .collect();
        assert_eq!(col, vec![1, 0, -1, 0, 0, 0]);
    }

    #[test]
    fn degenerate_degrees() {
        let full = HermiteBasis::full(4);
        for k in 0..=4 {
            let m = exterior_power_map(&full, k).unwrap();
            assert_eq!(m.matrix, IntMatrix::identity(binomial(4, k)));
        }
        let l = lat(3, &[&[1, 1, 0]]);
        assert_eq!(exterior_power_map(&l, 0).unwrap().matrix, IntMatrix::identity(1));
        let big = exterior_power_map(&l, 2).unwrap();
        assert_eq!((big.matrix.rows(), big.matrix.cols()), (3, 0));
        assert!(matches!(
            exterior_power_map(&l, 4),
            Err(ExteriorError::DegreeTooLarge { .. })
        ));
    }

    #[test]
    fn generated_ranks() {
        assert_eq!(generated_rank(&[]).unwrap(), 0);
        let full = exterior_power_map(&HermiteBasis::full(4), 2).unwrap();
        assert_eq!(generated_rank(&[full]).unwrap(), 6);
        // two coordinate lines in ℤ²: Λ₁ images span everything
        let a = exterior_power_map(&lat(2, &[&[1, 0]]), 1).unwrap();
        let b = exterior_power_map(&lat(2, &[&[0, 1]]), 1).unwrap();
        assert_eq!(generated_rank(&[a.clone(), b]).unwrap(), 2);
        let c = exterior_power_map(&HermiteBasis::full(2), 2).unwrap();
        assert!(matches!(generated_rank(&[a, c]), Err(ExteriorError::Mismatch)));
    }

    #[test]
    fn determinant_consistency() {
        let l = lat(3, &[&[2, 1, 0], &[0, 3, 1], &[0, 0, 5]]);
        let m = exterior_power_map(&l, 3).unwrap();
        assert_eq!(m.matrix.get(0, 0), &l.index().unwrap());
    }

    fn nested_pair() -> impl Strategy<Value = (IntMatrix, IntMatrix, usize)> {
        (2usize..=5).prop_flat_map(|n| {
            (1..=n).prop_flat_map(move |m| {
                (1..=m).prop_flat_map(move |m2| {
                    (
                        prop::collection::vec(-4i64..=4, n * m),
                        prop::collection::vec(-3i64..=3, m * m2),
                        0..=3usize.min(m2),
                    )
                        .prop_map(move |(a, b, k)| {
                            let a = IntMatrix::new(n, m, a.into_iter().map(BigInt::from).collect())
                                .unwrap();
                            let b = IntMatrix::new(m, m2, b.into_iter().map(BigInt::from).collect())
                                .unwrap();
                            (a, b, k)
                        })
                })
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn exterior_power_is_functorial((a, b, k) in nested_pair()) {
            let ab = a.mul(&b).unwrap();
            let lhs = exterior_power_of_matrix(&ab, k);
            let rhs = exterior_power_of_matrix(&a, k).mul(&exterior_power_of_matrix(&b, k)).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn exterior_rank_is_binomial((a, _b, k) in nested_pair()) {
            let l = hnf(&a);
            let m = exterior_power_map(&l, k).unwrap();
            prop_assert_eq!(rank(&m.matrix), binomial(l.rank(), k));
        }
    }
}
