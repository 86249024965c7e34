//! Exact integer and rational linear algebra.
//!
//! Everything downstream — lattices of translations, exterior powers, the maps
//! whose kernels and cokernels are cohomology groups — reduces to the
//! operations here:
//!
//! - [`IntMatrix`] / [`RatMatrix`]: dense matrices with arbitrary-precision entries.
//! - [`hnf`] / [`HermiteBasis`]: canonical bases of sublattices of `ℤ^N`.
//! - [`snf`] / [`invariant_factors`]: Smith normal form.
//! - [`cokernel`], [`PresentedMap`]: abelian groups from presentations.
//! - [`lattice_sum`], [`lattice_intersection`], [`saturate`], [`solve_mod_lattice`].

mod abelian;
mod hermite;
mod matrix;
mod smith;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

pub use abelian::{
    cokernel, factorize, lattice_quotient, solve_integer, AbelianGroup, PresentedMap,
};
pub use hermite::{
    hnf, is_saturated, kernel_basis, kernel_lattice, lattice_intersection, lattice_sum, rank,
    saturate, HermiteBasis,
};
pub use matrix::{common_denominator, IntMatrix, RatMatrix};
pub use smith::{invariant_factors, snf, SmithDecomposition};

/// Failures of the linear-algebra layer (all are caller errors).
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix data has {found} entries, expected {expected}")]
    DataLength { expected: usize, found: usize },
    #[error("shape mismatch in {op}: {left:?} vs {right:?}")]
    ShapeMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix is {rows}×{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("lattices live in ambient ranks {left} and {right}")]
    AmbientMismatch { left: usize, right: usize },
    #[error("empty list of lattices")]
    EmptyInput,
    #[error("lattice is not contained in the expected sublattice")]
    NotContained,
}

/// Solution set of an integer congruence system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceSolution {
    /// One integer solution (stored as rationals with denominator 1).
    pub particular: Vec<BigRational>,
    /// All integer `x` with `a·x ∈ l`; every solution is `particular + h`.
    pub homogeneous: HermiteBasis,
}

/// Solves `a·x ≡ b (mod l)` for integer unknowns `x`, where `a` and `b` are
/// rational and `l` is a sublattice of `ℤ^rows`. Returns `None` when there is
/// no integer solution.
pub fn solve_mod_lattice(
    a: &RatMatrix,
    b: &[BigRational],
    l: &HermiteBasis,
) -> Result<Option<CongruenceSolution>, LinalgError> {
    if b.len() != a.rows() || l.ambient_rank() != a.rows() {
        return Err(LinalgError::ShapeMismatch {
            op: "solve_mod_lattice",
            left: (a.rows(), a.cols()),
            right: (b.len(), l.ambient_rank()),
        });
    }
    let mut den = a.common_denominator();
    den = num_integer::Integer::lcm(&den, &common_denominator(b));
    let a_int = a.scaled_to_int(&den);
    let scale = BigRational::from_integer(den.clone());
    let b_int: Vec<BigInt> = b.iter().map(|x| (x * &scale).to_integer()).collect();
    let l_int = scale_matrix(l.basis(), &den);
    let stacked = a_int.hcat(&l_int.neg())?;
    let Some(z) = solve_integer(&stacked, &b_int) else {
        return Ok(None);
    };
    let n = a.cols();
    let particular = z[..n]
        .iter()
        .map(|x| BigRational::from_integer(x.clone()))
        .collect();
    let k = kernel_basis(&stacked);
    let top: Vec<usize> = (0..n).collect();
    let homogeneous = hnf(&k.select_rows(&top));
    Ok(Some(CongruenceSolution {
        particular,
        homogeneous,
    }))
}

fn scale_matrix(m: &IntMatrix, s: &BigInt) -> IntMatrix {
    let data = m.entries().iter().map(|x| x * s).collect();
    IntMatrix::new(m.rows(), m.cols(), data).expect("same shape")
}
