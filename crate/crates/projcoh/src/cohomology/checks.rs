//! Closed-form rank formulas, Euler characteristics and structural checks
//! that every computed result must satisfy.

use serde::{Deserialize, Serialize};

use crate::arrangement::Arrangement;
use crate::exact_linalg::rank;
use crate::exterior::{binomial, exterior_power_map, generated_rank, ExteriorMap};

use super::codim3::low_pieces;
use super::maps::DiagramMaps;
use super::{CohomologyError, CohomologyResult};

/// One compared quantity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckLine {
    pub label: String,
    pub expected: i64,
    pub computed: i64,
}

impl CheckLine {
    pub fn ok(&self) -> bool {
        self.expected == self.computed
    }
}

/// A list of comparisons; passes when all agree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub lines: Vec<CheckLine>,
}

impl CheckReport {
    fn push(&mut self, label: impl Into<String>, expected: i64, computed: i64) {
        self.lines.push(CheckLine {
            label: label.into(),
            expected,
            computed,
        });
    }

    pub fn passed(&self) -> bool {
        self.lines.iter().all(CheckLine::ok)
    }

    pub fn failures(&self) -> Vec<&CheckLine> {
        self.lines.iter().filter(|l| !l.ok()).collect()
    }
}

fn c(n: usize, k: usize) -> i64 {
    binomial(n, k) as i64
}

/// `Σ_{j=0}^{m} (−1)^j C(n, m−j)`.
fn alternating_binomials(n: usize, m: usize) -> i64 {
    (0..=m)
        .map(|j| if j % 2 == 0 { c(n, m - j) } else { -c(n, m - j) })
        .sum()
}

/// Rank of the span of `Λ_k` of the given classes' stabilizers.
fn span_rank(arr: &Arrangement, level: usize, idx: impl Iterator<Item = usize>, k: usize) -> i64 {
    let maps: Vec<ExteriorMap> = idx
        .map(|i| exterior_power_map(&arr.levels[level][i].dir, k).expect("degree within range"))
        .collect();
    generated_rank(&maps).expect("compatible maps") as i64
}

/// The Euler characteristic predicted by the class counts:
/// codim 1: `L₀ + …` via ranks; codim 2: `−L₀ + Σ_α L₀^α`;
/// codim 3: `L₀ − Σ_α L₀^α + Σ_α Σ_{θ⊂α} L₀^θ − Σ_θ L₀^θ`.
pub fn counts_euler(arr: &Arrangement) -> i64 {
    let k = arr.counts();
    let l0 = k.l[0] as i64;
    match arr.codim {
        1 => {
            let d = arr.ambient_rank - 1;
            (0..=d)
                .map(|kk| {
                    let r = if kk == 0 { l0 + d as i64 } else { c(d + 1, kk + 1) };
                    if kk % 2 == 0 {
                        r
                    } else {
                        -r
                    }
                })
                .sum()
        }
        2 => -l0 + k.sum_l0_alpha as i64,
        _ => {
            l0 - k.sum_l0_alpha as i64 + k.sum_alpha_theta_l0 as i64 - k.sum_l0_theta as i64
        }
    }
}

fn rank_of_homology(r: &CohomologyResult, s: usize) -> i64 {
    r.degrees[r.dim - s].free_rank as i64
}

/// Codimension 2: `rk H^{d−k} = C(2ν, 2+k) + L₁ C(ν, 1+k) − R_k − R_{k+1}` for
/// `k > 0` with `R_k = rk ⟨Λ_{k+1}Γ^α⟩`, the degree-0 formula, and the Euler
/// characteristic.
pub fn codim2_rank_check(arr: &Arrangement, r: &CohomologyResult) -> Result<CheckReport, CohomologyError> {
    if arr.codim != 2 {
        return Err(CohomologyError::WrongCodim {
            expected: 2,
            found: arr.codim,
        });
    }
    let nu = arr.nu;
    let n = 2 * nu;
    let d = r.dim;
    let counts = arr.counts();
    let l1 = counts.l[1] as i64;
    let e = -(counts.l[0] as i64) + counts.sum_l0_alpha as i64;
    let big_r = |k: usize| span_rank(arr, 1, 0..arr.count(1), k + 1);
    let mut rep = CheckReport::default();
    for k in 0..=d {
        let expected = if k == 0 {
            alternating_binomials(n, 2) + l1 * alternating_binomials(nu, 1) + e - big_r(1)
        } else {
            c(n, 2 + k) + l1 * c(nu, 1 + k) - big_r(k) - big_r(k + 1)
        };
        rep.push(format!("rank H^{}", d - k), expected, rank_of_homology(r, k));
    }
    rep.push("Euler characteristic", e, r.euler);
    Ok(rep)
}

/// Codimension 3, `ν = 2`: the rational rank formulas with the corrected
/// degree-1 correction term, and the Euler characteristic.
pub fn codim3_rank_check(
    arr: &Arrangement,
    maps: &DiagramMaps,
    r: &CohomologyResult,
) -> Result<CheckReport, CohomologyError> {
    if arr.codim != 3 {
        return Err(CohomologyError::WrongCodim {
            expected: 3,
            found: arr.codim,
        });
    }
    let nu = arr.nu;
    let counts = arr.counts();
    let l1 = counts.l[1] as i64;
    let l2 = counts.l[2] as i64;
    let sum_l1_alpha = counts.sum_l1_alpha as i64;
    let e = counts_euler(arr);
    let planes = arr.count(2);
    let lines = arr.count(1);
    // R_s for s > 1 from generated spans
    let r_high = |s: usize| -> i64 {
        let local: i64 = (0..planes)
            .map(|a| {
                span_rank(
                    arr,
                    1,
                    arr.children(2, a, 1).iter().map(|i| i.child),
                    s + 1,
                )
            })
            .sum();
        span_rank(arr, 2, 0..planes, s + 2) + local - span_rank(arr, 1, 0..lines, s + 1)
    };
    // R_1: plane span in Λ₃, local line spans in Λ₂, and the span of the
    // parts of the local line sums lying in the line kernel. The last term
    // replaces the full rank of the line kernel, `L₁ − rk⟨Λ₂Γ^θ⟩`, which is
    // only correct when those parts generate the whole kernel.
    let low = low_pieces(maps)?;
    let local_spans: i64 = (0..planes)
        .map(|a| span_rank(arr, 1, arr.children(2, a, 1).iter().map(|i| i.child), 2))
        .sum();
    let kernel_span = rank(&low.local_kernels_regrouped) as i64;
    let r1 = span_rank(arr, 2, 0..planes, 3) + local_spans + kernel_span;
    let big_r = |s: usize| if s == 1 { r1 } else { r_high(s) };
    let n = 3 * nu;
    let mut rep = CheckReport::default();
    for s in 0..=r.dim {
        let expected = if s == 0 {
            alternating_binomials(n, 3)
                + l2 * alternating_binomials(2 * nu, 2)
                + sum_l1_alpha * alternating_binomials(nu, 1)
                + l1 * alternating_binomials(nu, 2)
                + e
                - r1
        } else {
            c(n, s + 3) + l2 * c(2 * nu, s + 2) + sum_l1_alpha * c(nu, s + 1) + l1 * c(nu, s + 2)
                - big_r(s)
                - big_r(s + 1)
        };
        rep.push(format!("rank H^{}", r.dim - s), expected, rank_of_homology(r, s));
    }
    rep.push("Euler characteristic", e, r.euler);
    Ok(rep)
}

/// `H^s = ℤ^{C(N,s)}` (torsion-free) for `s < ν − 1`.
pub fn low_degree_check(r: &CohomologyResult) -> CheckReport {
    let mut rep = CheckReport::default();
    for s in 0..r.nu.saturating_sub(1).min(r.dim + 1) {
        let d = &r.degrees[s];
        let torsion_free = d.possibilities().iter().all(|g| g.is_free());
        rep.push(format!("rank H^{s}"), c(r.ambient_rank, s), d.free_rank as i64);
        rep.push(format!("H^{s} torsion-free"), 1, i64::from(torsion_free));
    }
    rep
}

/// No torsion where the sequences force freeness: codim 2 in `H^{d−k}`,
/// `k ≥ d/2`; codim 3 in `H_s`, `s ≥ 2(ν − 1)`; codim 1 everywhere.
pub fn torsion_bounds_check(r: &CohomologyResult) -> CheckReport {
    let mut rep = CheckReport::default();
    for d in &r.degrees {
        let k = r.dim - d.degree;
        let forced = match r.codim {
            1 => true,
            2 => 2 * k >= r.dim,
            3 => k >= 2 * (r.nu - 1),
            _ => false,
        };
        if forced {
            let free = d.possibilities().iter().all(|g| g.is_free());
            rep.push(format!("H^{} torsion-free", d.degree), 1, i64::from(free));
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alternating_sums() {
        // C(4,2) − C(4,1) + C(4,0)
        assert_eq!(alternating_binomials(4, 2), 3);
        // C(6,3) − C(6,2) + C(6,1) − C(6,0)
        assert_eq!(alternating_binomials(6, 3), 10);
        assert_eq!(alternating_binomials(2, 2), 0);
    }
}
