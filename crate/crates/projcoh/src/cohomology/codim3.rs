//! Codimension three with `ν = 2` (`N = 6`, `d = 3`).
//!
//! Maps, by exterior degree `k`:
//! - planes: `⊕_α Λ_kΓ^α → Λ_kΓ` (for `k = 3` this is the map whose cokernel
//!   is the first half of degree 3 and whose kernel feeds degree 2);
//! - lines: `⊕_θ Λ_kΓ^θ → Λ_kΓ`;
//! - local lines: `⊕_{θ⊂α} Λ_kΓ^θ → Λ_kΓ^α` for each plane class;
//! - regrouping: `⊕_α ⊕_{θ⊂α} Λ_kΓ^θ → ⊕_θ Λ_kΓ^θ`.
//!
//! `H⁰` and `H¹` come from the plane maps alone; `H²` is the plane cokernel in
//! exterior degree 4 plus the (free) kernel of the combined degree-1 map,
//! whose rank splits over planes and over local line kernels; `H³` is an
//! extension of the kernel of the degree-0 map by the cokernel of the
//! degree-1 map. That cokernel is in turn an extension of the line part by
//! the plane cokernel in exterior degree 3 modulo the image of a connecting
//! map, which is determined from the torus-arrangement route when the plane
//! cokernel has torsion.

use crate::arrangement::Arrangement;
use crate::exact_linalg::{
    cokernel, hnf, kernel_basis, kernel_lattice, lattice_quotient, rank, AbelianGroup, IntMatrix,
    PresentedMap,
};
use crate::exterior::binomial;

use super::extension::torsion_candidates;
use super::maps::DiagramMaps;
use super::{CohomologyError, CohomologyResult, DegreeResult, Diagnostics};

/// Supplies the cokernel of the geometric map `H₃(𝔸) → Λ₃Γ` when it is needed.
pub type DeltaResolver<'a> = dyn Fn(&Arrangement) -> Result<AbelianGroup, CohomologyError> + 'a;

fn kernel_rank(m: &IntMatrix) -> usize {
    m.cols() - rank(m)
}

/// Ranks and groups of the degree-1 and degree-0 pieces, shared with the rank check.
#[derive(Clone, Debug)]
pub(crate) struct LowPieces {
    /// `⊕_α ker(local line wedges in Λ₂)` regrouped into `⊕_θ Λ₂Γ^θ`.
    pub local_kernels_regrouped: IntMatrix,
    pub rank_local_kernels_regrouped: usize,
    pub rank_local_kernels: usize,
    pub rank_ker_line_wedge2: usize,
    /// Rank of `H₀(Γ; C₂) = ⊕_α (coker local line wedge ⊕ ker local degree-zero)`.
    pub rank_plane_h0: usize,
    /// Rank of `H₀(Γ; C₁⁰) = coker(line wedge in Λ₂) ⊕ ker(line degree-zero)`.
    pub rank_line_h0: usize,
}

pub(crate) fn low_pieces(maps: &DiagramMaps) -> Result<LowPieces, CohomologyError> {
    let kernels: Vec<IntMatrix> = maps.local_wedge.iter().map(|w| kernel_basis(&w[2])).collect();
    let k = IntMatrix::block_diagonal(&kernels);
    let regrouped = maps.local_to_global[2].mul(&k)?;
    if !maps.line_wedge[2].mul(&regrouped)?.is_zero() {
        return Err(CohomologyError::Inconsistent(
            "local line kernels do not land in the line kernel".into(),
        ));
    }
    let rank_plane_h0 = maps
        .local_wedge
        .iter()
        .zip(&maps.local_degree_zero)
        .map(|(w, z)| (w[2].rows() - rank(&w[2])) + kernel_rank(z))
        .sum();
    let line_zero = maps
        .line_degree_zero
        .as_ref()
        .ok_or_else(|| CohomologyError::Inconsistent("line data missing".into()))?;
    let rank_line_h0 = (maps.line_wedge[2].rows() - rank(&maps.line_wedge[2])) + kernel_rank(line_zero);
    Ok(LowPieces {
        rank_local_kernels_regrouped: rank(&regrouped),
        rank_local_kernels: k.cols(),
        local_kernels_regrouped: regrouped,
        rank_ker_line_wedge2: kernel_rank(&maps.line_wedge[2]),
        rank_plane_h0,
        rank_line_h0,
    })
}

/// The sequence pipeline for codimension 3, `ν = 2`.
///
/// `resolver` supplies the geometric cokernel used when the exterior-degree-3
/// plane cokernel has torsion; without one the torus-arrangement route is used.
pub fn codim3(
    name: &str,
    arr: &Arrangement,
    maps: &DiagramMaps,
    resolver: Option<&DeltaResolver<'_>>,
) -> Result<CohomologyResult, CohomologyError> {
    if arr.codim != 3 {
        return Err(CohomologyError::WrongCodim {
            expected: 3,
            found: arr.codim,
        });
    }
    if arr.nu != 2 {
        return Err(CohomologyError::UnsupportedNu(arr.nu));
    }
    if !maps.squares_commute() {
        return Err(CohomologyError::Inconsistent(
            "plane, line and local maps do not commute".into(),
        ));
    }
    let tw = &maps.top_wedge;
    let low = low_pieces(maps)?;

    // H⁰, H¹
    let h0 = cokernel(&tw[6]).direct_sum(&AbelianGroup::free(kernel_rank(&tw[5])));
    let h1 = cokernel(&tw[5]).direct_sum(&AbelianGroup::free(kernel_rank(&tw[4])));

    // H²: the degree-1 kernel is free of rank rk ker(planes, Λ₃) + rk ker(local → lines)
    let ker_deg1 = kernel_rank(&tw[3]) + (low.rank_local_kernels - low.rank_local_kernels_regrouped);
    let h2 = cokernel(&tw[4]).direct_sum(&AbelianGroup::free(ker_deg1));

    // diagnostics
    let plane_coker3 = cokernel(&tw[3]);
    let top_torsion = plane_coker3.torsion_part();
    let line_coker = lattice_quotient(
        &kernel_lattice(&maps.line_wedge[2]),
        &hnf(&low.local_kernels_regrouped),
    )?;
    let line_torsion = line_coker.torsion_part();
    let point_map = PresentedMap::new(
        IntMatrix::hcat_all(
            binomial(arr.ambient_rank, 2),
            &maps.plane_embedding.iter().map(|e| e[2].clone()).collect::<Vec<_>>(),
        )?,
        maps.local_wedge_block(2),
        maps.line_wedge[2].clone(),
    )?;
    let point_kernel = point_map.kernel()?;
    let point_torsion = point_kernel.torsion_part();

    // H³ free rank
    let rank_ker_deg0 = low
        .rank_plane_h0
        .checked_sub(low.rank_line_h0)
        .ok_or_else(|| CohomologyError::Inconsistent("degree-0 map cannot be onto".into()))?;
    let rank_coker_deg1 =
        plane_coker3.free_rank + (low.rank_ker_line_wedge2 - low.rank_local_kernels_regrouped);
    let h3_rank = rank_coker_deg1 + rank_ker_deg0;

    // the plane cokernel modulo the connecting image
    let (plane_part, connecting) = if top_torsion.is_zero() {
        (
            plane_coker3.clone(),
            "0 (the plane cokernel in exterior degree 3 is torsion-free)".to_string(),
        )
    } else {
        let a = match resolver {
            Some(f) => f(arr)?,
            None => crate::torus_mv::geometric_cokernel(arr, 3)?,
        };
        if a.free_rank != plane_coker3.free_rank
            || plane_coker3.torsion_order() % a.torsion_order().max(1) != 0
        {
            return Err(CohomologyError::Inconsistent(format!(
                "geometric cokernel {a} is not a quotient of the plane cokernel {plane_coker3}"
            )));
        }
        let order = plane_coker3.torsion_order() / a.torsion_order().max(1);
        (
            a,
            format!("order {order} (from the torus-arrangement cokernel in degree 3)"),
        )
    };
    let deg1_options = torsion_candidates(&[plane_part.clone()], &line_torsion);
    let h3_torsion = torsion_candidates(&deg1_options, &point_torsion);
    let h3_candidates: Vec<AbelianGroup> = h3_torsion
        .iter()
        .map(|t| AbelianGroup::free(h3_rank).direct_sum(t))
        .collect();

    let diagnostics = Diagnostics {
        top_cokernel_torsion: Some(top_torsion),
        line_kernel_cokernel_torsion: Some(line_torsion.clone()),
        point_kernel_torsion: Some(point_torsion.clone()),
        connecting_image: Some(connecting),
        extension_data: vec![
            (
                "plane cokernel modulo connecting image (sub of degree-1 cokernel)".into(),
                plane_part,
            ),
            (
                "line cokernel (quotient of degree-1 cokernel)".into(),
                AbelianGroup::free(rank_coker_deg1 - plane_coker3.free_rank).direct_sum(&line_torsion),
            ),
            (
                "degree-0 kernel (quotient of H³)".into(),
                AbelianGroup::free(rank_ker_deg0).direct_sum(&point_torsion),
            ),
        ],
    };
    let degrees = vec![
        DegreeResult::exact(0, h0),
        DegreeResult::exact(1, h1),
        DegreeResult::exact(2, h2),
        DegreeResult::from_candidates(3, h3_candidates),
    ];
    Ok(CohomologyResult::new(name, "fhk", arr, degrees, diagnostics))
}
