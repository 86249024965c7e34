//! Codimension two: `H^{d−k}(Ω) ≅ coker β_{k+1} ⊕ ker β_k` where
//! `β_k : ⊕_α Λ_{k+1}Γ^α → Λ_{k+1}Γ` for `k ≥ 1` and `β₀` is the degree-zero
//! map `⊕_α (Γ^α ⊕ ker ε^α) → Γ ⊕ ker ε`.

use crate::arrangement::Arrangement;
use crate::exact_linalg::{cokernel, rank, AbelianGroup, IntMatrix};

use super::maps::DiagramMaps;
use super::{CohomologyError, CohomologyResult, DegreeResult, Diagnostics};

fn kernel_rank(m: &IntMatrix) -> usize {
    m.cols() - rank(m)
}

/// The sequence pipeline for codimension 2 (every degree exact).
pub fn codim2(
    name: &str,
    arr: &Arrangement,
    maps: &DiagramMaps,
) -> Result<CohomologyResult, CohomologyError> {
    if arr.codim != 2 {
        return Err(CohomologyError::WrongCodim {
            expected: 2,
            found: arr.codim,
        });
    }
    let n = arr.ambient_rank;
    let d = n - 2;
    // β₀ is onto: every point class lies in some top-dimensional class and
    // the stabilizers of those classes generate Γ.
    if !cokernel(&maps.top_degree_zero).is_zero() {
        return Err(CohomologyError::Inconsistent(format!(
            "degree-zero map is not onto (cokernel {})",
            cokernel(&maps.top_degree_zero)
        )));
    }
    let beta = |k: usize| -> &IntMatrix { &maps.top_wedge[k + 1] };
    let mut degrees = Vec::with_capacity(d + 1);
    for s in 0..=d {
        let k = d - s;
        let coker = cokernel(beta(k + 1));
        let ker = if k == 0 {
            kernel_rank(&maps.top_degree_zero)
        } else {
            kernel_rank(beta(k))
        };
        degrees.push(DegreeResult::exact(s, coker.direct_sum(&AbelianGroup::free(ker))));
    }
    Ok(CohomologyResult::new(name, "fhk", arr, degrees, Diagnostics::default()))
}
