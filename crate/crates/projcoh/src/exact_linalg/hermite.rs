//! Column-style Hermite normal form and the lattice operations built on it.
//!
//! Convention: the basis columns form a lower echelon matrix. Each column has
//! a pivot (its first nonzero row); pivot rows strictly increase from left to
//! right, pivots are positive, and in every pivot row the entries of the
//! earlier columns are reduced into `[0, pivot)`. Two generating sets span the
//! same sublattice exactly when their normal forms are equal.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{IntMatrix, LinalgError};

/// A sublattice of `ℤ^N` stored as its canonical Hermite basis.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct HermiteBasis {
    ambient_rank: usize,
    basis: IntMatrix,
    pivots: Vec<usize>,
}

impl HermiteBasis {
    /// The zero sublattice of `ℤ^n`.
    pub fn zero(n: usize) -> Self {
        Self {
            ambient_rank: n,
            basis: IntMatrix::zeros(n, 0),
            pivots: Vec::new(),
        }
    }

    /// The full lattice `ℤ^n`.
    pub fn full(n: usize) -> Self {
        Self {
            ambient_rank: n,
            basis: IntMatrix::identity(n),
            pivots: (0..n).collect(),
        }
    }

    /// Canonical basis of the lattice spanned by the given columns (length `n`).
    pub fn from_generators(n: usize, gens: &[Vec<BigInt>]) -> Self {
        hnf(&IntMatrix::from_columns(n, gens))
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    /// Rank of the sublattice (number of basis columns).
    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    /// The basis matrix (`N × rank`).
    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    /// Pivot row of each basis column.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.ambient_rank && self.basis == IntMatrix::identity(self.ambient_rank)
    }

    /// Index `[ℤ^N : L]` for full-rank `L` (product of the pivots); `None` if rank-deficient.
    pub fn index(&self) -> Option<BigInt> {
        if self.rank() != self.ambient_rank {
            return None;
        }
        Some(
            self.pivots
                .iter()
                .enumerate()
                .map(|(j, &i)| self.basis.get(i, j).clone())
                .product(),
        )
    }

    /// Integer coordinates of `v` in this basis, or `None` if `v ∉ L`.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.ambient_rank, "vector length mismatch");
        let mut rest = v.to_vec();
        let mut coords = Vec::with_capacity(self.rank());
        let mut next_row = 0;
        for (j, &p) in self.pivots.iter().enumerate() {
            // rows strictly between the previous pivot and this one must already vanish
            if rest[next_row..p].iter().any(|x| !x.is_zero()) {
                return None;
            }
            let piv = self.basis.get(p, j);
            let (q, r) = rest[p].div_rem(piv);
            if !r.is_zero() {
                return None;
            }
            for (i, x) in rest.iter_mut().enumerate().skip(p) {
                let b = self.basis.get(i, j);
                if !b.is_zero() {
                    *x -= &q * b;
                }
            }
            coords.push(q);
            next_row = p + 1;
        }
        if rest.iter().any(|x| !x.is_zero()) {
            return None;
        }
        Some(coords)
    }

    /// Whether `v` lies in the lattice.
    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }

    /// Whether `other ⊆ self`.
    pub fn contains_lattice(&self, other: &HermiteBasis) -> bool {
        other.basis.columns().iter().all(|c| self.contains(c))
    }

    /// Reduces `v` modulo the lattice to the canonical representative: pivot
    /// coordinates land in `[0, pivot)`. Two vectors are congruent modulo `L`
    /// exactly when their reductions agree.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut out = v.to_vec();
        for (j, &p) in self.pivots.iter().enumerate() {
            let piv = self.basis.get(p, j);
            let q = out[p].div_floor(piv);
            if q.is_zero() {
                continue;
            }
            for (i, x) in out.iter_mut().enumerate().skip(p) {
                let b = self.basis.get(i, j);
                if !b.is_zero() {
                    *x -= &q * b;
                }
            }
        }
        out
    }
}

/// Result of a column echelon reduction `a · u = h`.
pub(crate) struct ColumnEchelon {
    /// Reduced matrix; the first `rank` columns form the Hermite basis, the rest are zero.
    pub h: IntMatrix,
    /// Unimodular column transform (only when requested).
    pub u: Option<IntMatrix>,
    pub pivots: Vec<usize>,
}

impl ColumnEchelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Reduces `a` to column Hermite form by unimodular column operations.
pub(crate) fn column_echelon(a: &IntMatrix, track: bool) -> ColumnEchelon {
    let rows = a.rows();
    let cols = a.cols();
    let mut m = a.clone();
    let mut u = track.then(|| IntMatrix::identity(cols));
    let mut pivots = Vec::new();
    let mut j = 0;
    for i in 0..rows {
        if j == cols {
            break;
        }
        // Euclid-style elimination of row i among columns j..cols.
        loop {
            let best = (j..cols)
                .filter(|&k| !m.get(i, k).is_zero())
                .min_by(|&x, &y| m.get(i, x).magnitude().cmp(m.get(i, y).magnitude()));
            let Some(k) = best else { break };
            m.swap_columns(j, k);
            if let Some(u) = u.as_mut() {
                u.swap_columns(j, k);
            }
            let mut clean = true;
            for l in j + 1..cols {
                if m.get(i, l).is_zero() {
                    continue;
                }
                let q = round_div(m.get(i, l), m.get(i, j));
                m.col_axpy(l, j, &q);
                if let Some(u) = u.as_mut() {
                    u.col_axpy(l, j, &q);
                }
                if !m.get(i, l).is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if m.get(i, j).is_zero() {
            continue;
        }
        if m.get(i, j).is_negative() {
            m.negate_column(j);
            if let Some(u) = u.as_mut() {
                u.negate_column(j);
            }
        }
        let piv = m.get(i, j).clone();
        for c in 0..j {
            let q = m.get(i, c).div_floor(&piv);
            if !q.is_zero() {
                m.col_axpy(c, j, &q);
                if let Some(u) = u.as_mut() {
                    u.col_axpy(c, j, &q);
                }
            }
        }
        pivots.push(i);
        j += 1;
    }
    ColumnEchelon { h: m, u, pivots }
}

/// Nearest-integer quotient (ties toward negative infinity); keeps Euclid steps short.
pub(crate) fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    let (q, r) = a.div_mod_floor(b);
    // r has the sign of b; moving to q + 1 replaces r by r − b, which is
    // smaller in magnitude whenever |r| > |b|/2
    if (&r * &two).magnitude() > b.magnitude() {
        q + BigInt::one()
    } else {
        q
    }
}

/// Canonical Hermite basis of the column span of `a` (zero columns dropped).
pub fn hnf(a: &IntMatrix) -> HermiteBasis {
    let ech = column_echelon(a, false);
    let r = ech.rank();
    HermiteBasis {
        ambient_rank: a.rows(),
        basis: ech.h.truncate_columns(r),
        pivots: ech.pivots,
    }
}

/// Rank of an integer matrix.
pub fn rank(a: &IntMatrix) -> usize {
    if a.rows() > a.cols() {
        column_echelon(&a.transpose(), false).rank()
    } else {
        column_echelon(a, false).rank()
    }
}

/// Canonical basis (as columns) of the integer kernel `{x ∈ ℤ^cols : a·x = 0}`.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    kernel_lattice(a).basis().clone()
}

/// Integer kernel as a lattice in `ℤ^cols`.
pub fn kernel_lattice(a: &IntMatrix) -> HermiteBasis {
    let ech = column_echelon(a, true);
    let r = ech.rank();
    let u = ech.u.expect("transform tracked");
    let idx: Vec<usize> = (r..a.cols()).collect();
    hnf(&u.select_columns(&idx))
}

/// Sum of sublattices.
pub fn lattice_sum(xs: &[HermiteBasis]) -> Result<HermiteBasis, LinalgError> {
    let Some(first) = xs.first() else {
        return Err(LinalgError::EmptyInput);
    };
    let n = first.ambient_rank;
    let mut blocks = Vec::with_capacity(xs.len());
    for x in xs {
        if x.ambient_rank != n {
            return Err(LinalgError::AmbientMismatch {
                left: n,
                right: x.ambient_rank,
            });
        }
        blocks.push(x.basis.clone());
    }
    Ok(hnf(&IntMatrix::hcat_all(n, &blocks)?))
}

/// Intersection of two sublattices.
pub fn lattice_intersection(
    x: &HermiteBasis,
    y: &HermiteBasis,
) -> Result<HermiteBasis, LinalgError> {
    if x.ambient_rank != y.ambient_rank {
        return Err(LinalgError::AmbientMismatch {
            left: x.ambient_rank,
            right: y.ambient_rank,
        });
    }
    let n = x.ambient_rank;
    if x.rank() == 0 || y.rank() == 0 {
        return Ok(HermiteBasis::zero(n));
    }
    let stacked = x.basis.hcat(&y.basis.neg())?;
    let k = kernel_basis(&stacked);
    let top: Vec<usize> = (0..x.rank()).collect();
    let coeffs = k.select_rows(&top);
    Ok(hnf(&x.basis.mul(&coeffs)?))
}

/// `ℤ^N ∩ ℚ-span(x)`.
pub fn saturate(x: &HermiteBasis) -> HermiteBasis {
    let n = x.ambient_rank;
    if x.rank() == 0 {
        return HermiteBasis::zero(n);
    }
    if x.rank() == n {
        return HermiteBasis::full(n);
    }
    let perp = kernel_basis(&x.basis.transpose());
    kernel_lattice(&perp.transpose())
}

/// Whether `ℤ^N / L` is torsion-free.
pub fn is_saturated(x: &HermiteBasis) -> bool {
    saturate(x) == *x
}
