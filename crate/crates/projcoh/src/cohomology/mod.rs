//! Integral cohomology of the hull through the long exact sequences in group
//! homology of the stabilizer lattices (codimension 1, 2, and 3 with `ν = 2`),
//! together with closed-form rank checks, Euler characteristics and K-theory.

mod checks;
mod codim2;
mod codim3;
pub mod extension;
pub mod maps;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arrangement::Arrangement;
use crate::exact_linalg::{AbelianGroup, LinalgError};
use crate::exterior::binomial;

pub use checks::{
    codim2_rank_check, codim3_rank_check, counts_euler, low_degree_check, torsion_bounds_check,
    CheckReport, CheckLine,
};
pub use codim2::codim2;
pub use codim3::{codim3, DeltaResolver};
pub use maps::DiagramMaps;

#[derive(Debug, Error)]
pub enum CohomologyError {
    #[error("this pipeline needs codimension {expected}, the scheme has {found}")]
    WrongCodim { expected: usize, found: usize },
    #[error("codimension-3 sequences are implemented only for ν = 2 (found ν = {0})")]
    UnsupportedNu(usize),
    #[error("codimension {0} is not supported (only 1, 2 and 3)")]
    UnsupportedCodim(usize),
    #[error("K-theory is assembled only for dimension ≤ 3 (found {0})")]
    DimensionTooLarge(usize),
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// How well a degree is determined.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    /// The integral group is determined.
    Exact,
    /// Free rank determined, the torsion only up to a list of candidates.
    Ambiguous,
}

/// One cohomology group `H^degree(Ω)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeResult {
    pub degree: usize,
    pub free_rank: usize,
    /// Invariant factors of the torsion; for ambiguous degrees this is the
    /// torsion of the annotated resolution if one is known, else empty.
    pub torsion: Vec<u64>,
    pub status: Status,
    /// Every group consistent with the computed subquotients (ambiguous degrees).
    pub candidates: Vec<AbelianGroup>,
    /// Externally known resolution or remark.
    pub annotation: Option<String>,
    /// The group singled out by the annotation, if any.
    pub resolved: Option<AbelianGroup>,
}

impl DegreeResult {
    pub fn exact(degree: usize, g: AbelianGroup) -> Self {
        Self {
            degree,
            free_rank: g.free_rank,
            torsion: g.torsion,
            status: Status::Exact,
            candidates: Vec::new(),
            annotation: None,
            resolved: None,
        }
    }

    /// A degree known up to the given candidate set (collapses to exact when
    /// there is only one).
    pub fn from_candidates(degree: usize, mut candidates: Vec<AbelianGroup>) -> Self {
        candidates.sort();
        candidates.dedup();
        assert!(!candidates.is_empty(), "empty candidate set");
        if candidates.len() == 1 {
            return Self::exact(degree, candidates.pop().expect("one candidate"));
        }
        Self {
            degree,
            free_rank: candidates[0].free_rank,
            torsion: Vec::new(),
            status: Status::Ambiguous,
            candidates,
            annotation: None,
            resolved: None,
        }
    }

    /// The group, when determined exactly.
    pub fn group(&self) -> Option<AbelianGroup> {
        match self.status {
            Status::Exact => Some(AbelianGroup::new(self.free_rank, &self.torsion)),
            Status::Ambiguous => None,
        }
    }

    /// The exact group, else the annotated resolution.
    pub fn best(&self) -> Option<AbelianGroup> {
        self.group().or_else(|| self.resolved.clone())
    }

    /// Every group this degree might be.
    pub fn possibilities(&self) -> Vec<AbelianGroup> {
        match self.status {
            Status::Exact => vec![AbelianGroup::new(self.free_rank, &self.torsion)],
            Status::Ambiguous => self.candidates.clone(),
        }
    }

    /// `Z^20` for exact groups, `Z^20 | Z^20+Z_2` for ambiguous ones.
    pub fn display(&self) -> String {
        self.possibilities()
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(" | ")
    }
}

/// Side information computed along the way.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Torsion of the cokernel of `⊕_α Λ₃Γ^α → Λ₃Γ` (codim 3).
    pub top_cokernel_torsion: Option<AbelianGroup>,
    /// Torsion of the cokernel of the map from the local line kernels
    /// `⊕_α ker(⊕_{θ⊂α} Λ₂Γ^θ → Λ₂Γ^α)` to `ker(⊕_θ Λ₂Γ^θ → Λ₂Γ)` (codim 3).
    pub line_kernel_cokernel_torsion: Option<AbelianGroup>,
    /// Torsion of the kernel of `⊕_α coker(local line wedges) → coker(line wedges)` (codim 3).
    pub point_kernel_torsion: Option<AbelianGroup>,
    /// Order of the image of the connecting map that can shrink the cokernel
    /// in degree 3, with how it was determined.
    pub connecting_image: Option<String>,
    /// Named subquotients of ambiguous degrees.
    pub extension_data: Vec<(String, AbelianGroup)>,
}

/// The full cohomology of one scheme.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyResult {
    pub scheme: String,
    pub method: String,
    pub ambient_rank: usize,
    pub codim: usize,
    pub dim: usize,
    pub nu: usize,
    /// `degrees[s]` is `H^s`, `s = 0..=dim`.
    pub degrees: Vec<DegreeResult>,
    pub diagnostics: Diagnostics,
    /// `Σ_k (−1)^k rk H^{d−k}`.
    pub euler: i64,
}

impl CohomologyResult {
    pub fn new(
        scheme: &str,
        method: &str,
        arr: &Arrangement,
        degrees: Vec<DegreeResult>,
        diagnostics: Diagnostics,
    ) -> Self {
        let dim = arr.ambient_rank - arr.codim;
        let euler = alternating_rank_sum(&degrees, dim);
        let mut r = Self {
            scheme: scheme.to_string(),
            method: method.to_string(),
            ambient_rank: arr.ambient_rank,
            codim: arr.codim,
            dim,
            nu: arr.nu,
            degrees,
            diagnostics,
            euler,
        };
        annotate(&mut r);
        r
    }

    pub fn degree(&self, s: usize) -> &DegreeResult {
        &self.degrees[s]
    }

    /// One line `H^d=… … H^0=…`, highest degree first.
    pub fn table_row(&self) -> String {
        self.degrees
            .iter()
            .rev()
            .map(|d| format!("H{}={}", superscript(d.degree), d.display()))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn alternating_rank_sum(degrees: &[DegreeResult], dim: usize) -> i64 {
    degrees
        .iter()
        .map(|d| {
            let sign = if (dim - d.degree) % 2 == 0 { 1 } else { -1 };
            sign * d.free_rank as i64
        })
        .sum()
}

pub fn superscript(n: usize) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string()
        .chars()
        .map(|c| DIGITS[c.to_digit(10).expect("decimal digit") as usize])
        .collect()
}

/// Resolutions of ambiguous degrees that are known from outside these
/// sequences, keyed by scheme name.
fn annotate(r: &mut CohomologyResult) {
    if r.dim != 3 {
        return;
    }
    let h3 = &mut r.degrees[3];
    if h3.status != Status::Ambiguous {
        return;
    }
    match r.scheme.as_str() {
        "danzer" => {
            let g = AbelianGroup::free(h3.free_rank);
            if h3.candidates.contains(&g) {
                h3.annotation = Some(format!(
                    "{g} (resolved by a substitution-complex computation: H³ is torsion-free)"
                ));
                h3.torsion = Vec::new();
                h3.resolved = Some(g);
            }
        }
        "dual_canonical_d6" => {
            h3.annotation = Some(
                "unresolved; at least one of the two extensions is known to be non-trivial"
                    .to_string(),
            );
        }
        _ => {}
    }
}

/// Runs the sequence pipeline appropriate to the arrangement's codimension.
pub fn fhk(
    name: &str,
    arr: &Arrangement,
    resolver: Option<&DeltaResolver<'_>>,
) -> Result<CohomologyResult, CohomologyError> {
    match arr.codim {
        1 => codim1(name, arr),
        2 => codim2(name, arr, &DiagramMaps::build(arr)),
        3 => codim3(name, arr, &DiagramMaps::build(arr), resolver),
        c => Err(CohomologyError::UnsupportedCodim(c)),
    }
}

/// Codimension one: every group is free, `H^{d−k}` of rank `C(d+1, k+1)` for
/// `k > 0` and `L₀ + d` for `k = 0`.
pub fn codim1(name: &str, arr: &Arrangement) -> Result<CohomologyResult, CohomologyError> {
    if arr.codim != 1 {
        return Err(CohomologyError::WrongCodim {
            expected: 1,
            found: arr.codim,
        });
    }
    let d = arr.ambient_rank - 1;
    let degrees = (0..=d)
        .map(|s| {
            let k = d - s;
            let rank = if k == 0 {
                arr.count(0) + d
            } else {
                binomial(d + 1, k + 1)
            };
            DegreeResult::exact(s, AbelianGroup::free(rank))
        })
        .collect();
    Ok(CohomologyResult::new(name, "fhk", arr, degrees, Diagnostics::default()))
}

/// A K-group, possibly known only up to candidates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KGroup {
    pub candidates: Vec<AbelianGroup>,
    /// The value obtained from annotated resolutions, if every summand is known.
    pub resolved: Option<AbelianGroup>,
    pub annotation: Option<String>,
}

impl KGroup {
    pub fn display(&self) -> String {
        let mut s = match &self.resolved {
            Some(g) if self.candidates.len() > 1 => format!("{g}"),
            _ => self
                .candidates
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(" | "),
        };
        if let Some(a) = &self.annotation {
            s.push_str(&format!(" [{a}]"));
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KTheory {
    pub k0: KGroup,
    pub k1: KGroup,
}

fn k_sum<'a>(degrees: impl Iterator<Item = &'a DegreeResult>) -> KGroup {
    let degrees: Vec<&DegreeResult> = degrees.collect();
    let mut candidates = vec![AbelianGroup::zero()];
    for d in &degrees {
        let mut next: Vec<AbelianGroup> = candidates
            .iter()
            .flat_map(|c| d.possibilities().into_iter().map(move |p| c.direct_sum(&p)))
            .collect();
        next.sort();
        next.dedup();
        candidates = next;
    }
    let resolved = degrees
        .iter()
        .map(|d| d.best())
        .collect::<Option<Vec<_>>>()
        .map(|v| AbelianGroup::sum_all(v.iter()));
    let annotation = degrees
        .iter()
        .filter_map(|d| {
            d.annotation
                .as_ref()
                .map(|a| format!("H{}: {a}", superscript(d.degree)))
        })
        .reduce(|a, b| format!("{a}; {b}"));
    KGroup {
        candidates,
        resolved,
        annotation,
    }
}

/// `K⁰ = ⊕ H^even`, `K¹ = ⊕ H^odd` (dimension ≤ 3, where these sums are exact).
pub fn k_theory(r: &CohomologyResult) -> Result<KTheory, CohomologyError> {
    if r.dim > 3 {
        return Err(CohomologyError::DimensionTooLarge(r.dim));
    }
    Ok(KTheory {
        k0: k_sum(r.degrees.iter().filter(|d| d.degree % 2 == 0)),
        k1: k_sum(r.degrees.iter().filter(|d| d.degree % 2 == 1)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::close_arrangement;
    use crate::exact_linalg::HermiteBasis;
    use crate::scheme::{SchemeSpec, SingularFamily};
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn unit(n: usize, i: usize) -> Vec<BigInt> {
        (0..n).map(|j| BigInt::from(i64::from(i == j))).collect()
    }

    /// The coordinate planes `⟨e₁,e₂⟩` and `⟨e₃,e₄⟩` through the origin of ℤ⁴.
    pub(crate) fn coordinate_planes() -> Arrangement {
        let a = HermiteBasis::from_generators(4, &[unit(4, 0), unit(4, 1)]);
        let b = HermiteBasis::from_generators(4, &[unit(4, 2), unit(4, 3)]);
        let zero = vec![q(0, 1); 4];
        let s = SchemeSpec::new(
            "coordinate_planes",
            4,
            2,
            vec![SingularFamily::new("a", a, &zero), SingularFamily::new("b", b, &zero)],
        )
        .unwrap();
        close_arrangement(&s).unwrap()
    }

    #[test]
    fn codim1_formula_examples() {
        // codimension one in ℤ³: three point classes on a line
        let fam = |label: &str, off: i64| {
            SingularFamily::new(label, HermiteBasis::zero(3), &[q(0, 1), q(0, 1), q(off, 3)])
        };
        let s = SchemeSpec::new("planes", 3, 1, vec![fam("a", 0), fam("b", 1), fam("c", 2)]).unwrap();
        let arr = close_arrangement(&s).unwrap();
        assert_eq!(arr.count(0), 3);
        let r = codim1("planes", &arr).unwrap();
        let ranks: Vec<usize> = r.degrees.iter().map(|d| d.free_rank).collect();
        assert_eq!(ranks, vec![1, 3, 5]);
        assert!(r.degrees.iter().all(|d| d.status == Status::Exact));
    }

    #[test]
    fn coordinate_planes_by_hand() {
        // Λ₂ℤ⁴ / ⟨e₁∧e₂, e₃∧e₄⟩ = ℤ⁴ and the degree-zero map is an isomorphism
        let arr = coordinate_planes();
        assert_eq!(arr.counts().l, vec![1, 2]);
        let r = fhk("coordinate_planes", &arr, None).unwrap();
        let groups: Vec<AbelianGroup> = r.degrees.iter().map(|d| d.group().unwrap()).collect();
        assert_eq!(groups, vec![AbelianGroup::free(1), AbelianGroup::free(4), AbelianGroup::free(4)]);
        assert_eq!(r.euler, 1);
        assert_eq!(r.euler, counts_euler(&arr));
    }

    #[test]
    fn k_theory_penrose_shape() {
        let deg = |s, n| DegreeResult::exact(s, AbelianGroup::free(n));
        let mut r = CohomologyResult {
            scheme: "x".into(),
            method: "fhk".into(),
            ambient_rank: 4,
            codim: 2,
            dim: 2,
            nu: 2,
            degrees: vec![deg(0, 1), deg(1, 5), deg(2, 8)],
            diagnostics: Diagnostics::default(),
            euler: 4,
        };
        let k = k_theory(&r).unwrap();
        assert_eq!(k.k0.candidates, vec![AbelianGroup::free(9)]);
        assert_eq!(k.k1.candidates, vec![AbelianGroup::free(5)]);
        r.dim = 4;
        assert!(k_theory(&r).is_err());
    }

    #[test]
    fn ambiguity_propagates_to_odd_k_group() {
        let h3 = DegreeResult::from_candidates(
            3,
            vec![AbelianGroup::free(20), AbelianGroup::new(20, &[2])],
        );
        let k = k_sum([DegreeResult::exact(1, AbelianGroup::free(7)), h3].iter());
        assert_eq!(k.candidates, vec![AbelianGroup::free(27), AbelianGroup::new(27, &[2])]);
        assert_eq!(k.resolved, None);
    }

    #[test]
    fn superscripts() {
        assert_eq!(superscript(0), "⁰");
        assert_eq!(superscript(12), "¹²");
    }
}
